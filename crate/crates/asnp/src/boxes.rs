//! The combinatorial layer behind the coefficient series: binary digit
//! sums, the index set K_r of nonincreasing d-tuples summing to r, their
//! telescoped digit sums, dot-digit boxes with column sums, a brute-force
//! enumeration oracle for the series coefficients, and the minimal digit
//! bound check with its equality-case structure.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::two_adic::{GaloisRing, GrElt};
use crate::{Error, Result};

/// Cap on the tuple sum r in enumerations; partition counts explode beyond.
pub const ENUMERATION_CAP: u64 = 40;

/// Number of ones in the binary expansion.
pub fn digit_sum(m: u64) -> u32 {
    m.count_ones()
}

/// A nonincreasing tuple `k_1 >= k_2 >= ... >= k_d >= 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexTuple {
    parts: Vec<u64>,
}

impl IndexTuple {
    pub fn new(parts: Vec<u64>) -> IndexTuple {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "tuple must be nonincreasing"
        );
        IndexTuple { parts }
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn r(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Telescoped digit sum
    /// `s(k_1 - k_2) + s(k_2 - k_3) + ... + s(k_{d-1} - k_d) + s(k_d)`,
    /// the exact 2-adic valuation of this tuple's term in the enumeration
    /// formula. Independent of the series exponent.
    pub fn digit_sum(&self) -> u32 {
        let mut total = 0u32;
        for w in self.parts.windows(2) {
            total += digit_sum(w[0] - w[1]);
        }
        total + digit_sum(*self.parts.last().unwrap())
    }
}

/// All tuples of K_r for given d, each exactly once, in descending
/// lexicographic order starting from `(r, 0, .., 0)`.
pub fn enumerate_kr(d: usize, r: u64) -> Result<Vec<IndexTuple>> {
    if r > ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded(r, ENUMERATION_CAP));
    }
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut current: Vec<u64> = Vec::with_capacity(d);
    fill(&mut out, &mut current, r, r, d);
    Ok(out)
}

fn fill(out: &mut Vec<IndexTuple>, current: &mut Vec<u64>, remaining: u64, max_part: u64, slots: usize) {
    if remaining == 0 {
        let mut parts = current.clone();
        parts.resize(parts.len() + slots, 0);
        out.push(IndexTuple { parts });
        return;
    }
    if slots == 0 || max_part == 0 || remaining > max_part * slots as u64 {
        return;
    }
    let hi = max_part.min(remaining);
    for v in (1..=hi).rev() {
        current.push(v);
        fill(out, current, remaining - v, v, slots - 1);
        current.pop();
    }
}

/// Dot-digit matrix of a tuple: the bottom row is the binary expansion of
/// `k_d`, and each row above adds the binary expansion of the difference to
/// the next part. Row l then evaluates back to `k_l`, rows are entrywise
/// nonincreasing downwards, and the top row sums to the telescoped digit
/// sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoAdicBox {
    /// `rows[l][v]` = digit of row l (0 = top) at bit position v.
    rows: Vec<Vec<u32>>,
}

impl TwoAdicBox {
    pub fn of(k: &IndexTuple) -> TwoAdicBox {
        let d = k.d();
        let width = (64 - k.r().leading_zeros()).max(1) as usize + 1;
        let mut rows = vec![vec![0u32; width]; d];
        for v in 0..width {
            rows[d - 1][v] = ((k.parts[d - 1] >> v) & 1) as u32;
        }
        for l in (0..d - 1).rev() {
            let diff = k.parts[l] - k.parts[l + 1];
            for v in 0..width {
                rows[l][v] = rows[l + 1][v] + ((diff >> v) & 1) as u32;
            }
        }
        TwoAdicBox { rows }
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn entry(&self, l: usize, v: usize) -> u32 {
        self.rows[l][v]
    }

    /// Value of row l: `sum entry(l, v) * 2^v`.
    pub fn row_value(&self, l: usize) -> u64 {
        self.rows[l]
            .iter()
            .enumerate()
            .map(|(v, &e)| (e as u64) << v)
            .sum()
    }

    pub fn top_row_digit_sum(&self) -> u32 {
        self.rows[0].iter().sum()
    }

    pub fn column_sum(&self, v: usize) -> u64 {
        self.rows.iter().map(|row| row[v] as u64).sum()
    }

    /// Sums of the nonzero columns scanning from the left of the printed
    /// matrix, i.e. from the highest bit position downwards.
    pub fn nonzero_column_sums(&self) -> Vec<u64> {
        (0..self.width())
            .rev()
            .map(|v| self.column_sum(v))
            .filter(|&s| s != 0)
            .collect()
    }

    pub fn is_zero_one(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|&e| e <= 1))
    }
}

fn inv_odd_big(u: &BigUint, k: u32) -> BigUint {
    // (Z/2^K)* has exponent 2^(K-2) for K >= 3; small K handled directly.
    let modulus = BigUint::one() << k;
    if k <= 2 {
        return u % &modulus;
    }
    let exp = (BigUint::one() << (k - 2)) - 1u32;
    u.modpow(&exp, &modulus)
}

fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * (n - i) / (i + 1u64);
    }
    res
}

/// Brute-force enumeration oracle for the series coefficient `C_r(N)`:
///
/// `sum over K_r of 4^{k1} C((2^N-1)/2, k1) * prod C(k_l, k_{l+1})
///  * prod a_l^(k_l - k_{l+1})  (mod 2^K)`
///
/// computed with exact big-integer binomials, independent of the
/// power-series route. Requires `a_d = 1`.
pub fn c_r_oracle(ring: &GaloisRing, lifted: &[GrElt], r: u64, big_n: u32) -> Result<GrElt> {
    if r > ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded(r, ENUMERATION_CAP));
    }
    if big_n == 0 {
        return Err(Error::InvalidSeriesExponent(big_n));
    }
    if lifted.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    if *lifted.last().unwrap() != ring.one() {
        return Err(Error::LiftNotMonic);
    }
    let d = lifted.len();
    let k_bits = ring.k();
    let modulus = BigInt::one() << k_bits;
    let mut acc = ring.zero();
    for tuple in enumerate_kr(d, r)? {
        let parts = tuple.parts();
        let k1 = parts[0];
        // ring part: prod_{l=1..d-1} a_l^(k_l - k_{l+1}); zero factors kill
        // the term unless their exponent is zero (0^0 = 1).
        let mut ring_part = ring.one();
        let mut dead = false;
        for l in 0..d - 1 {
            let ex = parts[l] - parts[l + 1];
            if ex == 0 {
                continue;
            }
            if ring.is_zero(&lifted[l]) {
                dead = true;
                break;
            }
            ring_part = ring.mul(&ring_part, &ring.pow(&lifted[l], ex));
        }
        if dead {
            continue;
        }
        // scalar part as an exact 2-adic value mod 2^K:
        // 4^{k1} C((2^N-1)/2, k1) = 2^{k1} prod_i (2^N-1-2i) / k1!
        let mut num = BigInt::one() << k1;
        for i in 0..k1 {
            num *= (BigInt::one() << big_n) - 1 - BigInt::from(2 * i);
        }
        let mut fact = BigUint::one();
        for i in 1..=k1 {
            fact *= BigUint::from(i);
        }
        let shift = (k1 - digit_sum(k1) as u64) as u64;
        let odd_fact = fact >> shift;
        for l in 0..d - 1 {
            num *= BigInt::from(binom_big(parts[l], parts[l + 1]));
        }
        // exact: v2(num) >= v2(k1!), divide out and invert the odd part
        debug_assert!(num.is_zero() || num.abs().trailing_zeros().unwrap() >= shift);
        let reduced = num >> shift;
        let residue = ((reduced % &modulus) + &modulus) % &modulus;
        let scalar_big =
            residue.to_biguint().unwrap() * inv_odd_big(&odd_fact, k_bits) % (BigUint::one() << k_bits);
        let scalar = scalar_big.to_u64().expect("K <= 62 bits");
        if scalar != 0 {
            acc = ring.add(&acc, &ring.scalar_mul(&ring_part, scalar));
        }
    }
    Ok(acc)
}

/// Result of [`check_tuple_digit_bound`].
#[derive(Clone, Debug)]
pub struct DigitBoundReport {
    pub d: usize,
    pub r: u64,
    pub h: u32,
    /// The bound `ceil(s(r)/h)` every tuple must meet.
    pub required: u32,
    pub min_digit_sum: u32,
    /// Tuples attaining `s(k) = s(r)/h` exactly.
    pub equality_cases: usize,
    pub violations: Vec<DigitBoundViolation>,
}

#[derive(Clone, Debug)]
pub struct DigitBoundViolation {
    pub tuple: Vec<u64>,
    pub reason: String,
}

impl DigitBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check, for every tuple of K_r: the digit-sum bound
/// `s(k) >= ceil(s(r)/h)` with `h = floor(log2(d+1))`, and for every tuple
/// attaining `s(k) = s(r)/h` exactly: the box has only 0/1 entries, the top
/// row carries `s(r)/h` ones, and every nonzero column sum has digit sum h.
pub fn check_tuple_digit_bound(d: usize, r: u64) -> Result<DigitBoundReport> {
    assert!(r >= 1, "the bound concerns r >= 1");
    let h = 64 - (d as u64 + 1).leading_zeros() - 1; // floor(log2(d+1))
    let sr = digit_sum(r);
    let required = sr.div_ceil(h);
    let mut min_digit_sum = u32::MAX;
    let mut equality_cases = 0usize;
    let mut violations = Vec::new();
    for tuple in enumerate_kr(d, r)? {
        let s = tuple.digit_sum();
        min_digit_sum = min_digit_sum.min(s);
        if s < required {
            violations.push(DigitBoundViolation {
                tuple: tuple.parts().to_vec(),
                reason: format!("digit sum {s} below bound {required}"),
            });
            continue;
        }
        if s * h == sr {
            equality_cases += 1;
            let boxed = TwoAdicBox::of(&tuple);
            if !boxed.is_zero_one() {
                violations.push(DigitBoundViolation {
                    tuple: tuple.parts().to_vec(),
                    reason: "equality case with box entry above 1".into(),
                });
            }
            if boxed.top_row_digit_sum() != s {
                violations.push(DigitBoundViolation {
                    tuple: tuple.parts().to_vec(),
                    reason: format!(
                        "top row carries {} ones, expected {s}",
                        boxed.top_row_digit_sum()
                    ),
                });
            }
            for gamma in boxed.nonzero_column_sums() {
                if digit_sum(gamma) != h {
                    violations.push(DigitBoundViolation {
                        tuple: tuple.parts().to_vec(),
                        reason: format!("column sum {gamma} has digit sum != {h}"),
                    });
                }
            }
        }
    }
    Ok(DigitBoundReport {
        d,
        r,
        h,
        required,
        min_digit_sum,
        equality_cases,
        violations,
    })
}
