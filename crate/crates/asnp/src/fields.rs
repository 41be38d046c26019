//! Arithmetic in the binary fields GF(2^m), 1 <= m <= 32.
//!
//! Elements are single-word bit vectors in the polynomial basis: bit `i`
//! holds the coefficient of `x^i`, reduced modulo a fixed irreducible
//! polynomial. Every field is built from the lexicographically smallest
//! irreducible modulus of its degree together with the smallest
//! multiplicative generator, so serialized data is reproducible across
//! machines. Compatibility between a field and its extensions is supplied by
//! [`Embedding`] rather than by a shared polynomial tower.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported extension degree over GF(2).
pub const MAX_DEGREE: u32 = 32;

/// Carryless (GF(2)) product of two word-sized polynomials.
fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut acc = 0u128;
    let mut b = b;
    let mut i = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn pdeg(a: u128) -> i32 {
    if a == 0 {
        -1
    } else {
        127 - a.leading_zeros() as i32
    }
}

fn prem(mut a: u128, m: u128) -> u128 {
    let dm = pdeg(m);
    debug_assert!(dm >= 0);
    let mut da = pdeg(a);
    while da >= dm {
        a ^= m << ((da - dm) as u32);
        da = pdeg(a);
    }
    a
}

fn pgcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = prem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2): `p` of degree `m` is irreducible iff
/// `x^(2^m) = x (mod p)` and `gcd(x^(2^k) - x, p) = 1` for every proper
/// divisor `k` of `m` (no roots in any strict subfield).
fn is_irreducible(p: u64, m: u32) -> bool {
    let p = p as u128;
    if pdeg(p) != m as i32 {
        return false;
    }
    let x = prem(0b10, p);
    let mut t = x;
    for i in 1..=m {
        t = prem(clmul(t as u64, t as u64), p);
        if i < m && m % i == 0 && pgcd(t ^ x, p) != 1 {
            return false;
        }
    }
    t == x
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A binary field GF(2^m), described by its degree, modulus and a fixed
/// multiplicative generator. Cheap to copy; all operations are pure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "FieldRepr", try_from = "FieldRepr")]
pub struct Field {
    m: u32,
    modulus: u64,
    generator: u64,
}

/// Wire form of a field: `{"m": .., "modulus": ..}`. The generator is
/// recomputed on load so files stay minimal.
#[derive(Clone, Copy, Serialize, Deserialize)]
struct FieldRepr {
    m: u32,
    modulus: u64,
}

impl From<Field> for FieldRepr {
    fn from(f: Field) -> Self {
        FieldRepr {
            m: f.m,
            modulus: f.modulus,
        }
    }
}

impl TryFrom<FieldRepr> for Field {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Field> {
        Field::with_modulus(r.m, r.modulus)
    }
}

impl Field {
    /// The field of degree `m` with the lexicographically smallest
    /// irreducible modulus and the smallest generator.
    pub fn new(m: u32) -> Result<Field> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(m));
        }
        // Scan odd candidates only: an irreducible of degree >= 1 over GF(2)
        // has nonzero constant term (and this pins GF(2) itself to x + 1).
        let mut p = (1u64 << m) | 1;
        let hi = (1u64 << (m + 1)) - 1;
        while p <= hi {
            if is_irreducible(p, m) {
                return Field::with_modulus(m, p);
            }
            p += 2;
        }
        unreachable!("an irreducible polynomial exists in every degree")
    }

    /// Field with an explicitly chosen irreducible modulus.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Field> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(m));
        }
        if !is_irreducible(modulus, m) {
            return Err(Error::ReducibleModulus(modulus, m));
        }
        let mut f = Field {
            m,
            modulus,
            generator: 1,
        };
        let group = f.size() - 1;
        let primes = prime_factors(group);
        let gen = (1..f.size())
            .find(|&c| primes.iter().all(|&p| f.pow_raw(c, group / p) != 1))
            .expect("the multiplicative group is cyclic");
        f.generator = gen;
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, 2^m.
    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    pub fn zero(&self) -> FieldElement {
        self.elt(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elt(1)
    }

    pub fn generator(&self) -> FieldElement {
        self.elt(self.generator)
    }

    /// Wrap raw bits as an element. Panics if `bits` is out of range.
    pub fn elt(&self, bits: u64) -> FieldElement {
        assert!(bits < self.size(), "element bits out of range for GF(2^{})", self.m);
        FieldElement { field: *self, bits }
    }

    /// All field elements in bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(move |b| self.elt(b))
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let mut t = clmul(a, b);
        let m = self.m as i32;
        let md = self.modulus as u128;
        let mut d = pdeg(t);
        while d >= m {
            t ^= md << ((d - m) as u32);
            d = pdeg(t);
        }
        t as u64
    }

    pub(crate) fn sq_raw(&self, a: u64) -> u64 {
        self.mul_raw(a, a)
    }

    pub(crate) fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.sq_raw(base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow_raw(a, self.size() - 2)
    }

    pub(crate) fn sqrt_raw(&self, a: u64) -> u64 {
        self.pow_raw(a, 1u64 << (self.m - 1))
    }

    pub(crate) fn trace_raw(&self, a: u64) -> u64 {
        let mut t = a;
        let mut acc = a;
        for _ in 1..self.m {
            t = self.sq_raw(t);
            acc ^= t;
        }
        debug_assert!(acc <= 1, "trace must land in GF(2)");
        acc
    }

    /// Bitmask `T` with `trace(a) = popcount(a & T) mod 2`; the trace is
    /// GF(2)-linear in the basis bits.
    pub(crate) fn trace_mask(&self) -> u64 {
        let mut mask = 0u64;
        for i in 0..self.m {
            if self.trace_raw(1u64 << i) == 1 {
                mask |= 1u64 << i;
            }
        }
        mask
    }

}

/// Element of a [`Field`]: the owning field plus an m-bit coefficient
/// vector. Immutable and `Copy`; arithmetic panics on mismatched fields.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    field: Field,
    bits: u64,
}

impl FieldElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.elt(self.field.pow_raw(self.bits, e))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> FieldElement {
        self.field.elt(self.field.inv_raw(self.bits))
    }

    /// The unique square root (Frobenius inverse); total in characteristic 2.
    pub fn sqrt(&self) -> FieldElement {
        self.field.elt(self.field.sqrt_raw(self.bits))
    }

    pub fn square(&self) -> FieldElement {
        self.field.elt(self.field.sq_raw(self.bits))
    }

    /// Absolute trace to GF(2), returned as 0 or 1.
    pub fn trace(&self) -> u64 {
        self.field.trace_raw(self.bits)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert!(self.field == rhs.field, "elements of mismatched fields");
        FieldElement {
            field: self.field,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + rhs
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert!(self.field == rhs.field, "elements of mismatched fields");
        FieldElement {
            field: self.field,
            bits: self.field.mul_raw(self.bits, rhs.bits),
        }
    }
}

/// Ring embedding GF(2^e) -> GF(2^(e*n)) fixing GF(2).
///
/// The image of the polynomial-basis root `x` of the source modulus is the
/// canonical root `rho = tau^k`, where `tau = g^((2^M - 1)/(2^e - 1))`
/// generates the multiplicative group of the unique subfield of matching
/// size and `k >= 1` is minimal with `p_src(tau^k) = 0`. An element is then
/// mapped by evaluating its coefficient polynomial at `rho`, which makes the
/// map additive and multiplicative by construction.
#[derive(Clone, Copy, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    rho: u64,
    identity: bool,
}

impl Embedding {
    pub fn new(src: Field, dst: Field) -> Result<Embedding> {
        if src == dst {
            return Ok(Embedding {
                src,
                dst,
                rho: 0,
                identity: true,
            });
        }
        if dst.m % src.m != 0 {
            return Err(Error::NonDivisibleDegrees {
                src: src.m,
                tgt: dst.m,
            });
        }
        let sub_order = src.size() - 1;
        let tau = dst.pow_raw(dst.generator, (dst.size() - 1) / sub_order);
        let mut cand = tau;
        for _ in 0..sub_order {
            if eval_gf2_poly(&dst, src.modulus, cand) == 0 {
                return Ok(Embedding {
                    src,
                    dst,
                    rho: cand,
                    identity: false,
                });
            }
            cand = dst.mul_raw(cand, tau);
        }
        unreachable!("the source modulus splits in every extension of its own field")
    }

    pub fn source(&self) -> Field {
        self.src
    }

    pub fn target(&self) -> Field {
        self.dst
    }

    pub fn map(&self, a: FieldElement) -> FieldElement {
        assert!(a.field == self.src, "element not in the source field");
        self.dst.elt(self.map_raw(a.bits))
    }

    pub(crate) fn map_raw(&self, bits: u64) -> u64 {
        if self.identity {
            return bits;
        }
        let mut acc = 0u64;
        for i in (0..self.src.m).rev() {
            acc = self.dst.mul_raw(acc, self.rho) ^ ((bits >> i) & 1);
        }
        acc
    }
}

/// One-shot embedding; build an [`Embedding`] when mapping many elements.
pub fn embed(a: FieldElement, target: &Field) -> Result<FieldElement> {
    Ok(Embedding::new(a.field(), *target)?.map(a))
}

fn eval_gf2_poly(field: &Field, poly: u64, x: u64) -> u64 {
    let deg = 63 - poly.leading_zeros();
    let mut acc = 0u64;
    for i in (0..=deg).rev() {
        acc = field.mul_raw(acc, x) ^ ((poly >> i) & 1);
    }
    acc
}
