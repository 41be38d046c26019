//! Ground truth for every slope claim: brute-force point counts over
//! extension fields, L-polynomial recovery through the Newton-identity
//! recursion, and the 2-adic Newton polygon.
//!
//! Valuations are normalized by `v(q) = 1` (ord_2 divided by the base
//! degree e), so slopes are comparable across base fields.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::curves::Curve;
use crate::fields::{Embedding, Field, MAX_DEGREE};
use crate::{Error, Result};

/// Rational slope of a Newton polygon.
pub type Slope = Ratio<i64>;

/// Number of points of the smooth model over the degree-n extension of the
/// curve's base field: one point at infinity plus two affine points for
/// every x with `trace(f(x)) = 0`.
pub fn count_points(c: &Curve, n: u32) -> Result<u64> {
    assert!(n >= 1, "extension index must be at least 1");
    if !c.is_odd_reduced() {
        return Err(Error::NotOddReduced);
    }
    let base = c.field();
    let ext_m = base.m() * n;
    if ext_m > MAX_DEGREE {
        return Err(Error::ExtensionTooLarge(ext_m));
    }
    let ext = if n == 1 { base } else { Field::new(ext_m)? };
    let emb = Embedding::new(base, ext)?;
    // Horner coefficients c_d, .., c_1 in the extension field.
    let coeffs: Vec<u64> = c
        .coeffs()
        .iter()
        .rev()
        .map(|&a| emb.map_raw(a.bits()))
        .collect();
    let tmask = ext.trace_mask();
    // x = 0 always contributes two points: f(0) = 0.
    let mut affine = 2u64;
    let gen = ext.generator().bits();
    let mut x = 1u64;
    for _ in 0..ext.size() - 1 {
        let mut fx = 0u64;
        for &cb in &coeffs {
            fx = ext.mul_raw(fx, x) ^ cb;
        }
        fx = ext.mul_raw(fx, x);
        if (fx & tmask).count_ones() & 1 == 0 {
            affine += 2;
        }
        x = ext.mul_raw(x, gen);
    }
    Ok(affine + 1)
}

/// Numerator of the zeta function: integer coefficients `b_0..b_2g` with
/// `b_0 = 1` and the functional equation `b_{2g-i} = q^{g-i} b_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LPolynomial {
    q: u64,
    g: usize,
    b: Vec<BigInt>,
}

impl LPolynomial {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.b
    }

    /// Structural invariants: `b_0 = 1` and the functional equation.
    pub fn validate(&self) -> Result<()> {
        assert!(self.b.len() == 2 * self.g + 1);
        assert!(self.b[0].is_one(), "b_0 must be 1");
        let q = BigInt::from(self.q);
        for i in 0..=self.g {
            let mut rhs = self.b[i].clone();
            for _ in 0..(self.g - i) {
                rhs *= &q;
            }
            assert!(
                self.b[2 * self.g - i] == rhs,
                "functional equation fails at i={i}"
            );
        }
        Ok(())
    }

    /// Lower convex hull of `(i, ord_2(b_i) / e)`; slope `s` with horizontal
    /// run `l` contributes `l` copies of `s`.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        let e = self.q.trailing_zeros() as i64;
        let pts: Vec<(i64, i64)> = self
            .b
            .iter()
            .enumerate()
            .filter(|(_, bi)| !bi.is_zero())
            .map(|(i, bi)| {
                let ord = bi.trailing_zeros().expect("nonzero") as i64;
                (i as i64, ord)
            })
            .collect();
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                let cross =
                    (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let mut slopes = Vec::with_capacity(2 * self.g);
        for w in hull.windows(2) {
            let (i1, v1) = w[0];
            let (i2, v2) = w[1];
            let s = Slope::new(v2 - v1, (i2 - i1) * e);
            for _ in i1..i2 {
                slopes.push(s);
            }
        }
        let vertices = hull
            .into_iter()
            .map(|(i, v)| (i as usize, Slope::new(v, e)))
            .collect();
        let np = NewtonPolygon {
            g: self.g,
            slopes,
            vertices,
        };
        np.check_shape();
        np
    }
}

/// Recover the L-polynomial from the counts `N_1..N_g`: power sums
/// `p_n = q^n + 1 - N_n` feed the recursion
/// `p_n + b_1 p_{n-1} + ... + b_{n-1} p_1 + n b_n = 0`, and the functional
/// equation fills the upper half.
pub fn l_polynomial_from_counts(q: u64, g: usize, counts: &[u64]) -> Result<LPolynomial> {
    assert_eq!(counts.len(), g, "need exactly N_1..N_g");
    let mut p = vec![BigInt::zero(); g + 1];
    for n in 1..=g {
        let qn = BigInt::from(q).pow(n as u32);
        p[n] = qn + 1 - BigInt::from(counts[n - 1]);
        // Weil bound on the inputs: |p_n| <= 2 g sqrt(q^n).
        let bound = BigInt::from(4 * g as u64 * g as u64) * BigInt::from(q).pow(n as u32);
        assert!(
            &p[n] * &p[n] <= bound,
            "count N_{n} = {} violates the Weil bound",
            counts[n - 1]
        );
    }
    let mut b = vec![BigInt::zero(); 2 * g + 1];
    b[0] = BigInt::one();
    for n in 1..=g {
        let mut s = p[n].clone();
        for i in 1..n {
            s += &b[i] * &p[n - i];
        }
        let neg = -s;
        let (quot, rem) = num_integer::Integer::div_rem(&neg, &BigInt::from(n as u64));
        assert!(rem.is_zero(), "Newton recursion must divide exactly");
        b[n] = quot;
    }
    for i in 0..g {
        let mut v = b[i].clone();
        for _ in 0..(g - i) {
            v *= BigInt::from(q);
        }
        b[2 * g - i] = v;
    }
    let l = LPolynomial { q, g, b };
    l.validate()?;
    Ok(l)
}

/// Count points for n = 1..g and recover the L-polynomial.
pub fn l_polynomial(c: &Curve) -> Result<LPolynomial> {
    if !c.is_odd_reduced() {
        return Err(Error::NotOddReduced);
    }
    let g = c.genus();
    let e = c.field().m();
    if e * g as u32 > MAX_DEGREE {
        return Err(Error::ExtensionTooLarge(e * g as u32));
    }
    let counts: Vec<u64> = (1..=g as u32)
        .map(|n| count_points(c, n))
        .collect::<Result<_>>()?;
    l_polynomial_from_counts(c.field().size(), g, &counts)
}

/// Slope multiset (2g entries, nondecreasing) plus the hull vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NewtonPolygon {
    g: usize,
    slopes: Vec<Slope>,
    vertices: Vec<(usize, Slope)>,
}

impl NewtonPolygon {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn vertices(&self) -> &[(usize, Slope)] {
        &self.vertices
    }

    /// Slopes grouped as (slope, multiplicity), ascending.
    pub fn slope_multiset(&self) -> Vec<(Slope, usize)> {
        let mut out: Vec<(Slope, usize)> = Vec::new();
        for &s in &self.slopes {
            match out.last_mut() {
                Some((t, mult)) if *t == s => *mult += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    /// The first (smallest) slope.
    pub fn np1(&self) -> Slope {
        self.slopes[0]
    }

    /// All slopes equal to 1/2.
    pub fn is_supersingular(&self) -> bool {
        let half = Slope::new(1, 2);
        self.slopes.iter().all(|&s| s == half)
    }

    /// Multiplicity of slope zero.
    pub fn two_rank(&self) -> usize {
        self.slopes.iter().filter(|s| s.is_zero()).count()
    }

    /// Test-only constructor from a raw slope multiset.
    #[cfg(test)]
    pub(crate) fn from_slopes(slopes: Vec<Slope>) -> NewtonPolygon {
        let g = slopes.len() / 2;
        NewtonPolygon {
            g,
            slopes,
            vertices: Vec::new(),
        }
    }

    fn check_shape(&self) {
        assert_eq!(self.slopes.len(), 2 * self.g, "2g slopes required");
        let sum: Slope = self.slopes.iter().sum();
        assert_eq!(sum, Slope::from_integer(self.g as i64), "slopes sum to g");
        for k in 0..self.slopes.len() {
            let mate = Slope::from_integer(1) - self.slopes[self.slopes.len() - 1 - k];
            assert_eq!(self.slopes[k], mate, "slopes must be symmetric");
            assert!(self.slopes[k] >= Slope::zero() && self.slopes[k] <= Slope::one());
        }
    }
}

/// L-polynomial, polygon and the slope sanity asserts for one curve:
/// 2-rank zero, `NP1 <= 1/2`, and `NP1 >= 1/g` for g >= 2 (genus 1 is
/// exactly 1/2).
pub fn curve_newton_polygon(c: &Curve) -> Result<NewtonPolygon> {
    let l = l_polynomial(c)?;
    let np = l.newton_polygon();
    let g = np.genus();
    assert_eq!(np.two_rank(), 0, "odd Artin-Schreier models have 2-rank 0");
    let np1 = np.np1();
    assert!(np1 <= Slope::new(1, 2));
    if g >= 2 {
        assert!(np1 >= Slope::new(1, g as i64));
    } else {
        assert_eq!(np1, Slope::new(1, 2));
    }
    Ok(np)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Curve;

    fn curve(bits: &[u64]) -> Curve {
        Curve::from_bits(Field::new(1).unwrap(), bits).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn point_counts_frozen() {
        let c = curve(&[0, 0, 1]); // x^3
        assert_eq!(count_points(&c, 1).unwrap(), 3);
        assert_eq!(count_points(&c, 2).unwrap(), 9);
        let c5 = curve(&[0, 0, 0, 0, 1]); // x^5
        assert_eq!(count_points(&c5, 1).unwrap(), 3);
        assert_eq!(count_points(&c5, 2).unwrap(), 5);
    }

    #[test]
    fn count_requires_reduced_curve() {
        let c = Curve::from_bits(Field::new(1).unwrap(), &[0, 1, 1]).unwrap();
        assert!(matches!(count_points(&c, 1), Err(Error::NotOddReduced)));
    }

    #[test]
    fn count_extension_cap() {
        let f = Field::new(12).unwrap();
        let c = Curve::from_bits(f, &[0, 0, 1]).unwrap();
        assert!(matches!(
            count_points(&c, 3),
            Err(Error::ExtensionTooLarge(36))
        ));
    }

    #[test]
    fn l_polynomials_frozen() {
        // 1 + 2T^2
        let l = l_polynomial(&curve(&[0, 0, 1])).unwrap();
        assert_eq!(l.coefficients(), &[big(1), big(0), big(2)]);
        // 1 + 4T^4
        let l = l_polynomial(&curve(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            l.coefficients(),
            &[big(1), big(0), big(0), big(0), big(4)]
        );
        // 1 + 2T + 2T^2
        let l = l_polynomial(&curve(&[1, 0, 1])).unwrap();
        assert_eq!(l.coefficients(), &[big(1), big(2), big(2)]);
        // genus 3: 1 - 2T^3 + 8T^6 for x^7
        let l = l_polynomial(&curve(&[0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            l.coefficients(),
            &[big(1), big(0), big(0), big(-2), big(0), big(0), big(8)]
        );
    }

    #[test]
    fn polygon_slopes() {
        let np = l_polynomial(&curve(&[0, 0, 1])).unwrap().newton_polygon();
        assert_eq!(np.slopes(), &[Slope::new(1, 2), Slope::new(1, 2)]);
        assert!(np.is_supersingular());

        let np = l_polynomial(&curve(&[0, 0, 0, 0, 1]))
            .unwrap()
            .newton_polygon();
        assert_eq!(np.slopes(), &[Slope::new(1, 2); 4]);

        // x^7 has first slope exactly 1/3.
        let np = l_polynomial(&curve(&[0, 0, 0, 0, 0, 0, 1]))
            .unwrap()
            .newton_polygon();
        assert_eq!(np.np1(), Slope::new(1, 3));
        assert_eq!(
            np.slope_multiset(),
            vec![(Slope::new(1, 3), 3), (Slope::new(2, 3), 3)]
        );
        assert!(!np.is_supersingular());
        assert_eq!(np.two_rank(), 0);
    }

    #[test]
    fn polygon_queries_on_synthetic_multisets() {
        let np = NewtonPolygon::from_slopes(vec![
            Slope::new(0, 1),
            Slope::new(1, 2),
            Slope::new(1, 2),
            Slope::new(1, 1),
        ]);
        assert_eq!(np.np1(), Slope::zero());
        assert_eq!(np.two_rank(), 1);
        assert!(!np.is_supersingular());
        let np = NewtonPolygon::from_slopes(vec![Slope::new(1, 2); 8]);
        assert_eq!(np.two_rank(), 0);
        assert!(np.is_supersingular());
        let np = NewtonPolygon::from_slopes(vec![
            Slope::new(1, 3),
            Slope::new(1, 3),
            Slope::new(1, 3),
            Slope::new(2, 3),
            Slope::new(2, 3),
            Slope::new(2, 3),
        ]);
        assert_eq!(np.np1(), Slope::new(1, 3));
    }

    #[test]
    fn base_change_preserves_slopes() {
        // Re-basing a GF(2) curve over GF(4) changes L but not the polygon.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f2 = Field::new(1).unwrap();
        let f4 = Field::new(2).unwrap();
        let emb = Embedding::new(f2, f4).unwrap();
        for _ in 0..10 {
            // monic odd genus-3 forms: x^7 + c5 x^5 + c3 x^3 + c1 x
            let mut bits = vec![0u64; 7];
            bits[6] = 1;
            for i in [0usize, 2, 4] {
                bits[i] = rng.gen_range(0..2);
            }
            let c = Curve::from_bits(f2, &bits).unwrap();
            let over4 = Curve::new(f4, c.coeffs().iter().map(|&x| emb.map(x)).collect()).unwrap();
            let np2 = l_polynomial(&c).unwrap().newton_polygon();
            let np4 = l_polynomial(&over4).unwrap().newton_polygon();
            assert_eq!(np2.slopes(), np4.slopes());
        }
    }

    #[test]
    fn functional_equation_holds() {
        let f8 = Field::new(3).unwrap();
        let c = Curve::from_bits(f8, &[5, 0, 3, 0, 7, 0, 1]).unwrap();
        let l = l_polynomial(&c).unwrap();
        l.validate().unwrap();
    }
}
