//! The curve data model `y^2 - y = sum c_i x^i` and its normal-form
//! transformations: coordinate isomorphisms, even-term elimination, monic
//! scaling and coefficient elimination by translation search.
//!
//! A curve stores the coefficients `c_1..c_d` (no constant term; an input
//! constant is removed when its Artin-Schreier shift exists in the base
//! field, i.e. when it has trace zero). The genus is defined once the
//! equation is in odd form: `g = (d - 1) / 2`.

use serde::{Deserialize, Serialize};

use crate::fields::{Embedding, Field, FieldElement, MAX_DEGREE};
use crate::{Error, Result};

/// Cap on the bit size of the translation search field in
/// [`Curve::kill_coefficient`].
const KILL_SEARCH_CAP: u32 = 20;

/// A hyperelliptic equation `y^2 - y = c_1 x + ... + c_d x^d`, `c_d != 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "CurveRepr", try_from = "CurveRepr")]
pub struct Curve {
    field: Field,
    coeffs: Vec<FieldElement>,
}

/// Wire form: `{"field": {...}, "coeffs": [bits of c_1, .., c_d]}`.
#[derive(Serialize, Deserialize)]
struct CurveRepr {
    field: Field,
    coeffs: Vec<u64>,
}

impl From<Curve> for CurveRepr {
    fn from(c: Curve) -> CurveRepr {
        CurveRepr {
            field: c.field,
            coeffs: c.coeffs.iter().map(|e| e.bits()).collect(),
        }
    }
}

impl TryFrom<CurveRepr> for Curve {
    type Error = Error;
    fn try_from(r: CurveRepr) -> Result<Curve> {
        Curve::from_bits(r.field, &r.coeffs)
    }
}

/// Coordinate change `(x, y) -> (zeta * x + t0, y + h(x))`.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub zeta: FieldElement,
    pub t0: FieldElement,
    /// Shift polynomial, `h[i]` the coefficient of `x^i`; degree at most g.
    pub h: Vec<FieldElement>,
}

impl Isomorphism {
    pub fn identity(field: &Field) -> Isomorphism {
        Isomorphism {
            zeta: field.one(),
            t0: field.zero(),
            h: Vec::new(),
        }
    }

    pub fn translation(t0: FieldElement) -> Isomorphism {
        Isomorphism {
            zeta: t0.field().one(),
            t0,
            h: Vec::new(),
        }
    }
}

impl Curve {
    pub fn new(field: Field, coeffs: Vec<FieldElement>) -> Result<Curve> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        assert!(
            coeffs.iter().all(|c| c.field() == field),
            "coefficients of mismatched fields"
        );
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(Curve { field, coeffs })
    }

    pub fn from_bits(field: Field, bits: &[u64]) -> Result<Curve> {
        Curve::new(field, bits.iter().map(|&b| field.elt(b)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Degree d of the right-hand side.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient `c_i` (1-based); zero beyond the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        assert!(i >= 1, "coefficients are indexed from 1");
        if i <= self.coeffs.len() {
            self.coeffs[i - 1]
        } else {
            self.field.zero()
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub(crate) fn coeff_bits(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.bits()).collect()
    }

    /// Odd degree with every even-index coefficient zero.
    pub fn is_odd_reduced(&self) -> bool {
        self.degree() % 2 == 1
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(k, c)| (k + 1) % 2 == 1 || c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.bits() == 1).unwrap_or(false)
    }

    /// Genus `(d - 1) / 2`; defined only after odd reduction.
    pub fn genus(&self) -> usize {
        assert!(
            self.is_odd_reduced(),
            "genus is defined only for odd reduced curves"
        );
        (self.degree() - 1) / 2
    }

    /// Eliminate every even-degree term by absorbing the top even term
    /// `c_{2i} x^{2i}` into the substitution `y -> y + sqrt(c_{2i}) x^i`,
    /// repeating until the equation is odd. The smooth model and its zeta
    /// function are unchanged. Fails if the result has degree < 3.
    pub fn reduce_odd(&self) -> Result<Curve> {
        let d = self.degree();
        let mut c = vec![0u64; d + 1];
        for i in 1..=d {
            c[i] = self.coeffs[i - 1].bits();
        }
        loop {
            let top_even = (2..=d).rev().find(|&i| i % 2 == 0 && c[i] != 0);
            match top_even {
                None => break,
                Some(i) => {
                    let s = self.field.sqrt_raw(c[i]);
                    c[i] = 0;
                    c[i / 2] ^= s;
                }
            }
        }
        let deg = (1..=d).rev().find(|&i| c[i] != 0).unwrap_or(0);
        if deg < 3 {
            return Err(Error::DegenerateCurve);
        }
        Curve::from_bits(self.field, &c[1..=deg])
    }

    /// Apply `(x, y) -> (zeta x + t0, y + h(x))`, returning the equation
    /// `y^2 - y = f(zeta x + t0) + h(x)^2 + h(x)` with any removable constant
    /// term stripped. Point counts of the smooth models agree over every
    /// extension.
    pub fn apply_isomorphism(&self, iso: &Isomorphism) -> Result<Curve> {
        assert!(
            iso.zeta.field() == self.field && iso.t0.field() == self.field,
            "isomorphism data of mismatched fields"
        );
        if iso.zeta.is_zero() {
            return Err(Error::ZeroScaling);
        }
        let d = self.degree();
        let genus_bound = (d - 1) / 2;
        let h_bits: Vec<u64> = iso.h.iter().map(|e| e.bits()).collect();
        let h_deg = h_bits.iter().rposition(|&b| b != 0);
        if let Some(hd) = h_deg {
            if hd > genus_bound {
                return Err(Error::ShiftDegreeTooLarge);
            }
        }

        // f(zeta x + t0)
        let lin = [iso.t0.bits(), iso.zeta.bits()];
        let mut acc = vec![0u64; d + 1];
        let mut cur = vec![1u64];
        for i in 1..=d {
            cur = poly_mul(&self.field, &cur, &lin);
            let ci = self.coeffs[i - 1].bits();
            if ci != 0 {
                for (j, &cj) in cur.iter().enumerate() {
                    acc[j] ^= self.field.mul_raw(ci, cj);
                }
            }
        }
        // + h^2 + h
        if h_deg.is_some() {
            let h2 = poly_mul(&self.field, &h_bits, &h_bits);
            for (j, &b) in h2.iter().enumerate() {
                acc[j] ^= b;
            }
            for (j, &b) in h_bits.iter().enumerate() {
                acc[j] ^= b;
            }
        }
        if acc[0] != 0 {
            if self.field.trace_raw(acc[0]) != 0 {
                return Err(Error::ConstantNotRemovable);
            }
            acc[0] = 0;
        }
        debug_assert!(acc[d] != 0, "degree must be preserved");
        Curve::from_bits(self.field, &acc[1..=d])
    }

    /// Scale `x -> zeta x` so the leading coefficient becomes 1. Looks for
    /// `zeta` with `zeta^d = c_d^{-1}` in the base field first; with
    /// `allow_extension` the coefficients are embedded into the smallest
    /// extension containing such a root.
    pub fn make_monic(&self, allow_extension: bool) -> Result<Curve> {
        if !self.is_odd_reduced() {
            return Err(Error::NotOddReduced);
        }
        let d = self.degree();
        let lead = *self.coeffs.last().unwrap();
        if lead.bits() == 1 {
            return Ok(self.clone());
        }
        let u = lead.inv().bits();
        if let Some(z) = (1..self.field.size()).find(|&z| self.field.pow_raw(z, d as u64) == u) {
            return Ok(self.scale_x(self.field.elt(z)));
        }
        if !allow_extension {
            return Err(Error::NoMonicScaling(d));
        }
        for k in 2..=(MAX_DEGREE / self.field.m()) {
            let big_m = self.field.m() * k;
            if big_m > 24 {
                break;
            }
            let ext = Field::new(big_m)?;
            let emb = Embedding::new(self.field, ext)?;
            let u_e = emb.map_raw(u);
            let group = ext.size() - 1;
            let t = gcd_u64(d as u64, group);
            if ext.pow_raw(u_e, group / t) != 1 {
                continue;
            }
            // zeta = g^b with (g^d)^b = u_e; scan powers of w = g^d.
            let gbits = ext.generator().bits();
            let w = ext.pow_raw(gbits, d as u64);
            let mut acc = 1u64;
            let mut zeta = 1u64;
            loop {
                if acc == u_e {
                    break;
                }
                acc = ext.mul_raw(acc, w);
                zeta = ext.mul_raw(zeta, gbits);
            }
            let embedded: Vec<FieldElement> = self.coeffs.iter().map(|&c| emb.map(c)).collect();
            let curve = Curve::new(ext, embedded)?;
            return Ok(curve.scale_x(ext.elt(zeta)));
        }
        Err(Error::NoMonicScaling(d))
    }

    fn scale_x(&self, zeta: FieldElement) -> Curve {
        let mut running = zeta.field().one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                running = running * zeta;
                c * running
            })
            .collect();
        Curve {
            field: zeta.field(),
            coeffs,
        }
    }

    /// Search every translation `t0` in the degree-`searchdeg` extension for
    /// normal forms with `c_m = 0`: apply `x -> x + t0`, reduce odd, keep the
    /// distinct monic results whose `m`-th coefficient vanishes. The list may
    /// be empty when no admissible `t0` lies in the searched field; roots
    /// always exist over the algebraic closure, and the result is reported
    /// per search field without any completeness claim beyond it.
    ///
    /// Preconditions: odd reduced monic input, `m` odd and `< 2g`, and some
    /// shifted copy `2^k m` must be bitwise dominated by `d` (the binomial
    /// `C(d, 2^k m)` is odd), which guarantees the eliminating translation
    /// exists over the closure.
    pub fn kill_coefficient(&self, m: usize, searchdeg: u32) -> Result<Vec<Curve>> {
        if !self.is_odd_reduced() {
            return Err(Error::NotOddReduced);
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let g = self.genus();
        let d = self.degree();
        if m % 2 == 0 || m >= 2 * g {
            return Err(Error::KillIndexInvalid(m));
        }
        if !lucas_dominates(d, m) {
            return Err(Error::KillPreconditionFailed(m));
        }
        assert!(searchdeg >= 1, "searchdeg must be at least 1");
        let big_m = self.field.m() * searchdeg;
        if big_m > KILL_SEARCH_CAP {
            return Err(Error::ExtensionTooLarge(big_m));
        }
        let (ext, base) = if searchdeg == 1 {
            (self.field, self.clone())
        } else {
            let ext = Field::new(big_m)?;
            let emb = Embedding::new(self.field, ext)?;
            let coeffs = self.coeffs.iter().map(|&c| emb.map(c)).collect();
            (ext, Curve::new(ext, coeffs)?)
        };
        let mut out: Vec<Curve> = Vec::new();
        for t0 in 0..ext.size() {
            let iso = Isomorphism::translation(ext.elt(t0));
            let cand = match base.apply_isomorphism(&iso) {
                Ok(c) => c,
                Err(Error::ConstantNotRemovable) => continue,
                Err(e) => return Err(e),
            };
            let cand = cand.reduce_odd()?.make_monic(false)?;
            if cand.coeff(m).is_zero() {
                out.push(cand);
            }
        }
        out.sort_by(|a, b| a.coeff_bits().cmp(&b.coeff_bits()));
        out.dedup();
        Ok(out)
    }
}

fn poly_mul(field: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[i + j] ^= field.mul_raw(ai, bj);
            }
        }
    }
    out
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Lucas test: is `C(d, 2^k m)` odd for some `k >= 0`? Equivalent to some
/// left shift of `m` being bitwise dominated by `d`.
pub fn lucas_dominates(d: usize, m: usize) -> bool {
    let mut t = m;
    while t <= d {
        if t & d == t {
            return true;
        }
        t <<= 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta;

    fn gf(m: u32) -> Field {
        Field::new(m).unwrap()
    }

    #[test]
    fn construction_examples() {
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1]).unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.reduce_odd().unwrap().genus(), 1);
        let c = Curve::from_bits(f2, &[0, 0, 1, 0, 1]).unwrap();
        assert_eq!(c.reduce_odd().unwrap().genus(), 2);
        // degree-1 input constructs, but reduction reports genus 0
        let c = Curve::from_bits(f2, &[1]).unwrap();
        assert!(matches!(c.reduce_odd(), Err(Error::DegenerateCurve)));
    }

    #[test]
    fn construction_errors() {
        let f2 = gf(1);
        assert!(matches!(
            Curve::from_bits(f2, &[]),
            Err(Error::EmptyCoefficients)
        ));
        assert!(matches!(
            Curve::from_bits(f2, &[1, 0]),
            Err(Error::ZeroLeadingCoefficient)
        ));
    }

    #[test]
    fn genus_examples() {
        let f2 = gf(1);
        assert_eq!(Curve::from_bits(f2, &[0, 0, 1]).unwrap().genus(), 1);
        assert_eq!(
            Curve::from_bits(f2, &[0, 0, 0, 0, 1, 0, 0, 0, 1])
                .unwrap()
                .genus(),
            4
        );
        assert_eq!(
            Curve::from_bits(f2, &[1, 0, 1, 0, 0, 0, 1]).unwrap().genus(),
            3
        );
    }

    #[test]
    #[should_panic(expected = "odd reduced")]
    fn genus_requires_reduced_form() {
        let f2 = gf(1);
        let _ = Curve::from_bits(f2, &[0, 1]).unwrap().genus();
    }

    #[test]
    fn identity_isomorphism_is_noop() {
        let f8 = gf(3);
        let c = Curve::from_bits(f8, &[3, 0, 5, 0, 0, 0, 1]).unwrap();
        let out = c.apply_isomorphism(&Isomorphism::identity(&f8)).unwrap();
        assert_eq!(out, c);
    }

    #[test]
    fn shift_by_x_on_cubic() {
        // y^2 - y = x^3 with h = x gains h^2 + h = x^2 + x.
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1]).unwrap();
        let iso = Isomorphism {
            zeta: f2.one(),
            t0: f2.zero(),
            h: vec![f2.zero(), f2.one()],
        };
        let out = c.apply_isomorphism(&iso).unwrap();
        assert_eq!(out, Curve::from_bits(f2, &[1, 1, 1]).unwrap());
    }

    #[test]
    fn zero_scaling_rejected() {
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1]).unwrap();
        let iso = Isomorphism {
            zeta: f2.zero(),
            t0: f2.zero(),
            h: vec![],
        };
        assert!(matches!(
            c.apply_isomorphism(&iso),
            Err(Error::ZeroScaling)
        ));
    }

    #[test]
    fn reduce_odd_two_steps() {
        // x^4 + x^3 -> x^3 + x (x^4 -> x^2 -> x), same N_1 = 5.
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1, 1]).unwrap();
        let r = c.reduce_odd().unwrap();
        assert_eq!(r, Curve::from_bits(f2, &[1, 0, 1]).unwrap());
        assert_eq!(zeta::count_points(&r, 1).unwrap(), 5);
    }

    #[test]
    fn reduce_odd_is_idempotent_on_odd_input() {
        let f4 = gf(2);
        let c = Curve::from_bits(f4, &[2, 0, 3, 0, 1]).unwrap();
        let r = c.reduce_odd().unwrap();
        assert_eq!(r, c);
        assert_eq!(r.reduce_odd().unwrap(), r);
    }

    #[test]
    fn reduce_odd_degenerate() {
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 1]).unwrap();
        assert!(matches!(c.reduce_odd(), Err(Error::DegenerateCurve)));
    }

    #[test]
    fn isomorphism_preserves_counts() {
        // Random genus-3 curves over GF(8) with random isomorphisms keep
        // N_1..N_3 after odd reduction.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let f8 = gf(3);
        for _ in 0..8 {
            let mut bits: Vec<u64> = (0..7).map(|_| rng.gen_range(0..8)).collect();
            bits[6] = rng.gen_range(1..8);
            let c = Curve::from_bits(f8, &bits).unwrap().reduce_odd();
            let c = match c {
                Ok(c) if c.degree() == 7 => c,
                _ => continue,
            };
            let want: Vec<u64> = (1..=3)
                .map(|n| zeta::count_points(&c, n).unwrap())
                .collect();
            for _ in 0..4 {
                let iso = Isomorphism {
                    zeta: f8.elt(rng.gen_range(1..8)),
                    t0: f8.elt(rng.gen_range(0..8)),
                    h: (0..4).map(|_| f8.elt(rng.gen_range(0..8))).collect(),
                };
                match c.apply_isomorphism(&iso) {
                    Ok(moved) => {
                        let moved = moved.reduce_odd().unwrap();
                        let got: Vec<u64> = (1..=3)
                            .map(|n| zeta::count_points(&moved, n).unwrap())
                            .collect();
                        assert_eq!(got, want);
                    }
                    Err(Error::ConstantNotRemovable) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }

    #[test]
    fn make_monic_noop_cases() {
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1]).unwrap();
        assert_eq!(c.make_monic(false).unwrap(), c);
    }

    #[test]
    fn make_monic_requires_extension_for_gf4_cubic() {
        // y^2 - y = w x^3 over GF(4): zeta^3 = w^{-1} has no solution in
        // GF(4) (cubes of nonzero elements are all 1), the smallest host is
        // GF(2^6). The Newton polygon must be unchanged.
        let f4 = gf(2);
        let c = Curve::from_bits(f4, &[0, 0, 2]).unwrap();
        assert!(matches!(
            c.make_monic(false),
            Err(Error::NoMonicScaling(3))
        ));
        let m = c.make_monic(true).unwrap();
        assert_eq!(m.field().m(), 6);
        assert!(m.is_monic());
        let np_before = zeta::curve_newton_polygon(&c).unwrap();
        let np_after = zeta::curve_newton_polygon(&m).unwrap();
        assert_eq!(np_before.slopes(), np_after.slopes());
    }

    #[test]
    fn lucas_examples() {
        // d = 7 dominates 5; d = 9 dominates no shift of 7.
        assert!(lucas_dominates(7, 5));
        assert!(!lucas_dominates(9, 7));
        assert!(lucas_dominates(9, 1));
    }

    #[test]
    fn kill_coefficient_genus3() {
        // x^7 + x^5 over GF(2), m = 5, search in GF(16): every member has
        // c_5 = 0, c_7 = 1 and the same L-polynomial as the input re-based
        // to GF(16).
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 0, 0, 1, 0, 1]).unwrap();
        let out = c.kill_coefficient(5, 4).unwrap();
        assert!(!out.is_empty());
        let f16 = Field::new(4).unwrap();
        let emb = Embedding::new(f2, f16).unwrap();
        let rebased =
            Curve::new(f16, c.coeffs().iter().map(|&x| emb.map(x)).collect()).unwrap();
        let want = zeta::l_polynomial(&rebased).unwrap();
        for member in &out {
            assert!(member.coeff(5).is_zero());
            assert_eq!(member.coeff(7).bits(), 1);
            assert!(member.is_monic());
            assert_eq!(zeta::l_polynomial(member).unwrap(), want);
        }
    }

    #[test]
    fn kill_coefficient_keeps_input_when_already_zero() {
        // x^7 + x^3: c_5 is already zero, so t0 = 0 reproduces the input.
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1, 0, 0, 0, 1]).unwrap();
        let out = c.kill_coefficient(5, 1).unwrap();
        assert!(out.contains(&c));
    }

    #[test]
    fn kill_coefficient_rejections() {
        let f2 = gf(1);
        // genus 4: m = 7 has no dominated shift (9 = 0b1001 vs 7 = 0b0111).
        let c = Curve::from_bits(f2, &[0, 0, 1, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(matches!(
            c.kill_coefficient(7, 1),
            Err(Error::KillPreconditionFailed(7))
        ));
        assert!(matches!(
            c.kill_coefficient(4, 1),
            Err(Error::KillIndexInvalid(4))
        ));
        assert!(matches!(
            c.kill_coefficient(9, 1),
            Err(Error::KillIndexInvalid(9))
        ));
    }

    #[test]
    fn curve_serde_wire_format() {
        let f2 = gf(1);
        let c = Curve::from_bits(f2, &[0, 0, 1]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"field":{"m":1,"modulus":3},"coeffs":[0,0,1]}"#);
        let back: Curve = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Curve>(
            r#"{"field":{"m":1,"modulus":3},"coeffs":[1,0]}"#
        )
        .is_err());
    }
}
