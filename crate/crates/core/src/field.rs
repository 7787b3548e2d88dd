//! Arithmetic in GF(2^s) for `1 <= s <= 64`.
//!
//! Elements are `u64` bit patterns in the polynomial basis with the constant
//! term at bit 0. A [`FieldSpec`] carries the extension degree and the monic
//! primitive polynomial the field is built from; every raw operation lives on
//! it so hot loops can stay on plain integers. [`FieldElement`] is the checked
//! wrapper that refuses to mix elements of different fields.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DEGREE: u32 = 64;

/// Smallest primitive polynomial of each degree 1..=32, read as an integer
/// with the constant coefficient at bit 0.
const PRIMITIVE_TABLE: [u64; 32] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x402b,
    0x8003, 0x1002d, 0x20009, 0x40027, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021,
    0x100001b, 0x2000009, 0x4000047, 0x8000027, 0x10000009, 0x20000005, 0x40000053, 0x80000009,
    0x1000000af,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} is not a primitive polynomial of degree {s}")]
    NotPrimitive { s: u32, poly: u128 },
    #[error("value {value:#x} is not an element of GF(2^{s})")]
    ElementOutOfRange { s: u32, value: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// GF(2^s) context: extension degree plus primitive polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    s: u32,
    prim_poly: u128,
    // bit i holds Tr(x^i); the trace is GF(2)-linear so this is all it takes
    trace_mask: u64,
}

/// Wire form of a [`FieldSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub s: u32,
    pub prim_poly: u128,
}

impl FieldSpec {
    /// The field of degree `s` built on the lexicographically smallest
    /// primitive polynomial. Degrees up to 32 come from a table, larger ones
    /// from [`smallest_primitive_polynomial`].
    pub fn new(s: u32) -> Result<Self, FieldError> {
        if s == 0 || s > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(s));
        }
        let poly = if s <= 32 {
            PRIMITIVE_TABLE[(s - 1) as usize] as u128
        } else {
            smallest_primitive_polynomial(s)
        };
        Ok(Self::build(s, poly))
    }

    /// Builds a field on a caller-chosen polynomial, which must be primitive.
    pub fn with_polynomial(s: u32, prim_poly: u128) -> Result<Self, FieldError> {
        if s == 0 || s > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(s));
        }
        if !is_primitive(s, prim_poly) {
            return Err(FieldError::NotPrimitive { s, poly: prim_poly });
        }
        Ok(Self::build(s, prim_poly))
    }

    fn build(s: u32, prim_poly: u128) -> Self {
        let mut spec = Self {
            s,
            prim_poly,
            trace_mask: 0,
        };
        let mut mask = 0u64;
        for i in 0..s {
            if spec.trace_by_definition(1u64 << i) {
                mask |= 1 << i;
            }
        }
        spec.trace_mask = mask;
        spec
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn prim_poly(&self) -> u128 {
        self.prim_poly
    }

    /// Number of field elements, `2^s`.
    pub fn order(&self) -> u128 {
        1u128 << self.s
    }

    /// All-ones pattern covering the `s` coefficient bits.
    pub fn mask(&self) -> u64 {
        if self.s == 64 {
            u64::MAX
        } else {
            (1u64 << self.s) - 1
        }
    }

    pub fn contains(&self, value: u64) -> bool {
        value & !self.mask() == 0
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        FieldElement::new(*self, value)
    }

    pub fn doc(&self) -> FieldDoc {
        FieldDoc {
            s: self.s,
            prim_poly: self.prim_poly,
        }
    }

    pub fn from_doc(doc: &FieldDoc) -> Result<Self, FieldError> {
        Self::with_polynomial(doc.s, doc.prim_poly)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        reduce(clmul(a, b), self.prim_poly, self.s)
    }

    pub fn pow(&self, a: u64, mut k: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k != 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^s - 2)`; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// Absolute trace to GF(2).
    #[inline]
    pub fn trace(&self, a: u64) -> bool {
        (a & self.trace_mask).count_ones() & 1 == 1
    }

    /// `a + a^2 + a^4 + ... + a^(2^(s-1))`, evaluated in the field.
    pub fn trace_by_definition(&self, a: u64) -> bool {
        let mut acc = 0u64;
        let mut term = a;
        for _ in 0..self.s {
            acc ^= term;
            term = self.mul(term, term);
        }
        debug_assert!(acc <= 1, "trace left GF(2)");
        acc == 1
    }

    /// The class of `x`, a generator of the multiplicative group.
    pub fn generator(&self) -> u64 {
        reduce(2, self.prim_poly, self.s)
    }

    /// Field elements in the canonical order `0, 1, g, g^2, ..., g^(q-2)`.
    pub fn elements(&self) -> Elements {
        Elements {
            spec: *self,
            next: Some(0),
            emitted: 0,
        }
    }

    /// Matrix of multiplication by `a` acting on row vectors from the right:
    /// row `i` holds the coefficients of `x^i * a`.
    pub fn companion(&self, a: u64) -> CompanionMatrix {
        let x = self.generator();
        let mut rows = Vec::with_capacity(self.s as usize);
        let mut cur = a;
        for _ in 0..self.s {
            rows.push(cur);
            cur = self.mul(cur, x);
        }
        CompanionMatrix { s: self.s, rows }
    }

    /// A basis `b_1..b_s` of GF(2^s) over GF(2) with `Tr(b_i b_j) = δ_ij`.
    ///
    /// Greedy orthogonalisation of the trace form. When the remaining
    /// complement turns alternating, the last chosen vector `u` and a
    /// hyperbolic pair `w1, w2` are replaced by `u+w1, u+w2, u+w1+w2`, which
    /// are again orthonormal.
    pub fn self_dual_basis_raw(&self) -> Vec<u64> {
        let form = |a: u64, b: u64| self.trace(self.mul(a, b));
        let mut remaining: Vec<u64> = (0..self.s).map(|i| 1u64 << i).collect();
        let mut out: Vec<u64> = Vec::with_capacity(self.s as usize);
        while !remaining.is_empty() {
            if let Some(pos) = remaining.iter().position(|&v| form(v, v)) {
                let v = remaining.remove(pos);
                for w in remaining.iter_mut() {
                    if form(*w, v) {
                        *w ^= v;
                    }
                }
                out.push(v);
            } else {
                let u = out
                    .pop()
                    .expect("trace form is not alternating on the whole field");
                let w1 = remaining.remove(0);
                let pos = remaining
                    .iter()
                    .position(|&w| form(w1, w))
                    .expect("trace form restricted to a complement is non-degenerate");
                let w2 = remaining.remove(pos);
                for w in remaining.iter_mut() {
                    let (a, b) = (form(*w, w2), form(*w, w1));
                    if a {
                        *w ^= w1;
                    }
                    if b {
                        *w ^= w2;
                    }
                }
                out.push(u ^ w1);
                out.push(u ^ w2);
                out.push(u ^ w1 ^ w2);
            }
        }
        out
    }
}

pub struct Elements {
    spec: FieldSpec,
    next: Option<u64>,
    emitted: u128,
}

impl Iterator for Elements {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emitted >= self.spec.order() {
            return None;
        }
        let cur = self.next?;
        self.emitted += 1;
        self.next = Some(if cur == 0 {
            1
        } else {
            self.spec.mul(cur, self.spec.generator())
        });
        Some(cur)
    }
}

/// An element of GF(2^s) tied to its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn new(spec: FieldSpec, value: u64) -> Result<Self, FieldError> {
        if !spec.contains(value) {
            return Err(FieldError::ElementOutOfRange {
                s: spec.degree(),
                value,
            });
        }
        Ok(Self { value, spec })
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Self { value: 0, spec }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self { value: 1, spec }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Polynomial-basis coefficients, constant term first.
    pub fn coeffs(&self) -> Vec<bool> {
        (0..self.spec.degree())
            .map(|i| self.value >> i & 1 == 1)
            .collect()
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(Self {
            value: self.value ^ other.value,
            spec: self.spec,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(Self {
            value: self.spec.mul(self.value, other.value),
            spec: self.spec,
        })
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let value = self.spec.inv(self.value).ok_or(FieldError::ZeroInverse)?;
        Ok(Self {
            value,
            spec: self.spec,
        })
    }

    pub fn pow(&self, k: u128) -> Self {
        Self {
            value: self.spec.pow(self.value, k),
            spec: self.spec,
        }
    }

    pub fn trace(&self) -> bool {
        self.spec.trace(self.value)
    }

    pub fn companion(&self) -> CompanionMatrix {
        self.spec.companion(self.value)
    }
}

/// The self-dual basis of [`FieldSpec::self_dual_basis_raw`] as elements.
pub fn self_dual_basis(spec: &FieldSpec) -> Vec<FieldElement> {
    spec.self_dual_basis_raw()
        .into_iter()
        .map(|value| FieldElement { value, spec: *spec })
        .collect()
}

/// Square binary matrix with rows packed into `u64`, bit `j` = column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompanionMatrix {
    s: u32,
    rows: Vec<u64>,
}

impl CompanionMatrix {
    pub fn identity(s: u32) -> Self {
        Self {
            s,
            rows: (0..s).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn zero(s: u32) -> Self {
        Self {
            s,
            rows: vec![0; s as usize],
        }
    }

    pub fn size(&self) -> u32 {
        self.s
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    /// `v * M` for a row vector `v`.
    pub fn apply_row(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .fold(0, |acc, (_, r)| acc ^ r)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.s, other.s, "matrix size mismatch");
        Self {
            s: self.s,
            rows: self.rows.iter().map(|&r| other.apply_row(r)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.s, other.s, "matrix size mismatch");
        Self {
            s: self.s,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        crate::gf2::rank_u64(&self.rows)
    }

    /// Nested 0/1 rows, for display and serialization.
    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        (0..self.s as usize)
            .map(|i| (0..self.s as usize).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut b = b;
    let mut acc = 0u128;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn reduce(mut v: u128, poly: u128, s: u32) -> u64 {
    while v >> s != 0 {
        let top = 127 - v.leading_zeros();
        v ^= poly << (top - s);
    }
    v as u64
}

/// True when `poly` is a monic primitive polynomial of degree exactly `s`:
/// `x` has multiplicative order `2^s - 1` modulo `poly`.
pub fn is_primitive(s: u32, poly: u128) -> bool {
    if s == 0 || s > MAX_DEGREE || poly >> s != 1 || poly & 1 == 0 {
        return false;
    }
    let order = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
    let x = reduce(2, poly, s);
    let pow = |mut k: u64| {
        let mut base = x;
        let mut acc = 1u64;
        while k != 0 {
            if k & 1 == 1 {
                acc = reduce(clmul(acc, base), poly, s);
            }
            base = reduce(clmul(base, base), poly, s);
            k >>= 1;
        }
        acc
    };
    if pow(order) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| pow(order / p) != 1)
}

/// First primitive polynomial of degree `s` in integer order, scanning odd
/// candidates upward from `x^s + 1`.
pub fn smallest_primitive_polynomial(s: u32) -> u128 {
    assert!((1..=MAX_DEGREE).contains(&s), "degree out of range");
    let mut poly = (1u128 << s) | 1;
    while !is_primitive(s, poly) {
        poly += 2;
    }
    poly
}

/// Distinct prime factors of `n`, ascending.
fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if let Some(p) = (2..200u64).find(|p| m % p == 0) {
            out.push(p);
            let mut rest = m;
            while rest % p == 0 {
                rest /= p;
            }
            stack.push(rest);
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e != 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Nontrivial factor of an odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    // μ is the class of x in GF(4)
    const MU: u64 = 0b10;

    #[test]
    fn small_degree_polynomials() {
        assert_eq!(FieldSpec::new(1).unwrap().prim_poly(), 0b11);
        assert_eq!(FieldSpec::new(2).unwrap().prim_poly(), 0b111);
        assert_eq!(FieldSpec::new(3).unwrap().prim_poly(), 0b1011);
    }

    #[test]
    fn degree_three_primitivity_by_enumeration() {
        // Brute force: a degree-3 monic polynomial is primitive iff the powers
        // of x modulo it run through all 7 nonzero residues.
        let brute = |poly: u128| {
            if poly & 1 == 0 {
                return false;
            }
            let mut seen = std::collections::HashSet::new();
            let mut cur = 1u64;
            for _ in 0..7 {
                seen.insert(cur);
                cur = reduce(clmul(cur, 2), poly, 3);
            }
            seen.len() == 7 && cur == 1
        };
        let primitive: Vec<u128> = (8u128..16).filter(|&p| brute(p)).collect();
        assert_eq!(primitive, vec![0b1011, 0b1101]);
        for p in 8u128..16 {
            assert_eq!(is_primitive(3, p), brute(p), "poly {p:#b}");
        }
    }

    #[test]
    fn table_matches_search() {
        for s in 1..=32 {
            assert_eq!(
                PRIMITIVE_TABLE[(s - 1) as usize] as u128,
                smallest_primitive_polynomial(s),
                "degree {s}"
            );
        }
    }

    #[test]
    fn large_degrees_are_searchable() {
        for s in [33, 40, 48, 61, 63, 64] {
            let spec = FieldSpec::new(s).unwrap();
            assert!(is_primitive(s, spec.prim_poly()));
            let g = spec.generator();
            assert_eq!(spec.pow(g, (1u128 << s) - 1), 1);
        }
    }

    #[test]
    fn degree_out_of_range() {
        assert_eq!(FieldSpec::new(0), Err(FieldError::DegreeOutOfRange(0)));
        assert_eq!(FieldSpec::new(65), Err(FieldError::DegreeOutOfRange(65)));
    }

    #[test]
    fn non_primitive_polynomial_rejected() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(matches!(
            FieldSpec::with_polynomial(4, 0b11111),
            Err(FieldError::NotPrimitive { .. })
        ));
        assert!(FieldSpec::with_polynomial(4, 0b10011).is_ok());
    }

    #[test]
    fn gf4_arithmetic() {
        let f = gf4();
        assert_eq!(f.mul(MU, MU), MU ^ 1);
        for a in 0..4 {
            assert_eq!(f.add(a, a), 0);
        }
        assert_eq!(f.inv(MU), Some(MU ^ 1));
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn gf8_generator_cubed() {
        let f = FieldSpec::new(3).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, 3), g ^ 1);
    }

    #[test]
    fn checked_elements() {
        let f = gf4();
        let g8 = FieldSpec::new(3).unwrap();
        let a = f.element(MU).unwrap();
        let b = g8.element(MU).unwrap();
        assert_eq!(a.mul(&b), Err(FieldError::FieldMismatch));
        assert_eq!(FieldElement::zero(f).inv(), Err(FieldError::ZeroInverse));
        assert!(f.element(4).is_err());
        assert_eq!(a.mul(&a).unwrap().value(), 0b11);
        assert_eq!(a.coeffs(), vec![false, true]);
    }

    #[test]
    fn gf4_companion_matrices() {
        let f = gf4();
        assert_eq!(f.companion(0).to_bits(), vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(f.companion(1).to_bits(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(f.companion(MU).to_bits(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(f.companion(MU ^ 1).to_bits(), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn companion_is_ring_homomorphism() {
        for s in 1..=4 {
            let f = FieldSpec::new(s).unwrap();
            for a in 0..1u64 << s {
                for b in 0..1u64 << s {
                    assert_eq!(f.companion(f.mul(a, b)), f.companion(a).mul(&f.companion(b)));
                    assert_eq!(f.companion(a ^ b), f.companion(a).add(&f.companion(b)));
                }
                // row vector convention
                assert_eq!(f.companion(a).apply_row(MU & f.mask()), f.mul(MU & f.mask(), a));
                let expected_rank = if a == 0 { 0 } else { s as usize };
                assert_eq!(f.companion(a).rank(), expected_rank);
            }
        }
    }

    #[test]
    fn companion_order_is_full() {
        for s in 1..=8 {
            let f = FieldSpec::new(s).unwrap();
            let c = f.companion(f.generator());
            let id = CompanionMatrix::identity(s);
            let mut m = c.clone();
            let order = (1u32 << s) - 1;
            for k in 1..order {
                assert_ne!(m, id, "s={s} order {k}");
                m = m.mul(&c);
            }
            assert_eq!(m, id);
        }
    }

    #[test]
    fn frobenius_and_trace() {
        for s in 1..=4 {
            let f = FieldSpec::new(s).unwrap();
            for a in 0..1u64 << s {
                assert_eq!(f.pow(a, 1u128 << s), a);
                assert_eq!(f.trace(a), f.trace_by_definition(a));
                assert_eq!(f.trace(f.mul(a, a)), f.trace(a));
                for b in 0..1u64 << s {
                    assert_eq!(f.trace(a ^ b), f.trace(a) ^ f.trace(b));
                }
            }
        }
    }

    #[test]
    fn gf4_traces() {
        let f = gf4();
        assert!(!f.trace(0));
        assert!(f.trace(MU));
        assert!(!f.trace(1));
    }

    #[test]
    fn element_order() {
        let f = gf4();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, MU, MU ^ 1]);
        let f = FieldSpec::new(1).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1]);
        let f = FieldSpec::new(5).unwrap();
        let mut all: Vec<u64> = f.elements().collect();
        all.sort_unstable();
        assert_eq!(all, (0..32).collect::<Vec<_>>());
    }

    #[test]
    fn self_dual_basis_small() {
        assert_eq!(FieldSpec::new(1).unwrap().self_dual_basis_raw(), vec![1]);
        let mut b = gf4().self_dual_basis_raw();
        b.sort_unstable();
        assert_eq!(b, vec![MU, MU ^ 1]);
    }

    #[test]
    fn self_dual_basis_gram_is_identity() {
        for s in [1, 2, 3, 4, 5, 6, 7, 8, 13, 16, 31, 32, 40, 64] {
            let f = FieldSpec::new(s).unwrap();
            let basis = f.self_dual_basis_raw();
            assert_eq!(basis.len(), s as usize);
            assert_eq!(crate::gf2::rank_u64(&basis), s as usize);
            for (i, &a) in basis.iter().enumerate() {
                for (j, &b) in basis.iter().enumerate() {
                    assert_eq!(f.trace(f.mul(a, b)), i == j, "s={s} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn prime_factorisation() {
        assert_eq!(prime_factors(u64::MAX), vec![3, 5, 17, 257, 641, 65537, 6700417]);
        assert_eq!(prime_factors((1 << 61) - 1), vec![(1 << 61) - 1]);
        assert_eq!(prime_factors((1 << 59) - 1), vec![179951, 3203431780337]);
    }
}
