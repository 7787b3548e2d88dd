//! Pauli errors on `n` qubits as vectors of V(2n, 2), phases dropped.
//!
//! `I = (0|0)`, `X = (1|0)`, `Y = (1|1)`, `Z = (0|1)`; an `n`-qubit tensor
//! product collects the X bits before the Z bits. Qubit 1 sits at bit 0 of
//! each part. Products of Paulis are sums of vectors.
//!
//! Two textual encodings are supported:
//!
//! - dense strings such as `"XIYZ"` (qubit 1 first),
//! - hex pairs `"XHEX:ZHEX"`: each part is the big-endian hex of its `n`-bit
//!   word with qubit 1 as the most significant bit, zero padded to
//!   `ceil(n/4)` digits.
//!
//! A sparse form `"Z1,X3"` (1-based qubit indices) is accepted on input.

use std::fmt;

use thiserror::Error;

use crate::gf2::{self, Row};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("Pauli sizes differ: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("invalid hex Pauli {0:?}")]
    BadHex(String),
    #[error("invalid Pauli string {0:?}")]
    BadString(String),
    #[error("qubit {qubit} outside 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliVector {
    n: usize,
    x: Row,
    z: Row,
}

impl PauliVector {
    pub fn identity(n: usize) -> Self {
        let w = gf2::words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// Builds from packed parts; bits above `n` must be clear.
    pub fn from_parts(n: usize, mut x: Row, mut z: Row) -> Self {
        let w = gf2::words_for(n);
        x.resize(w, 0);
        z.resize(w, 0);
        let v = Self { n, x, z };
        debug_assert!(v.high_bits_clear());
        v
    }

    fn high_bits_clear(&self) -> bool {
        (self.n..self.x.len() * 64).all(|i| !gf2::get(&self.x, i) && !gf2::get(&self.z, i))
    }

    /// Integer encoding used for enumeration and tie-breaking: X part in the
    /// low `n` bits, Z part in the next `n`. Requires `2n <= 128`.
    pub fn from_index(n: usize, index: u128) -> Self {
        assert!(2 * n <= 128, "index encoding covers at most 64 qubits");
        let low = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
        let x = (index & low) as u64;
        let z = ((index >> n) & low) as u64;
        Self::from_parts(n, vec![x], vec![z])
    }

    pub fn index(&self) -> u128 {
        assert!(self.n <= 64, "index encoding covers at most 64 qubits");
        let x = self.x.first().copied().unwrap_or(0) as u128;
        let z = self.z.first().copied().unwrap_or(0) as u128;
        x | z << self.n
    }

    /// A single-qubit Pauli (`'I'`, `'X'`, `'Y'` or `'Z'`) on 1-based `qubit`.
    pub fn single(n: usize, qubit: usize, op: char) -> Result<Self, PauliError> {
        if qubit == 0 || qubit > n {
            return Err(PauliError::QubitOutOfRange { qubit, n });
        }
        let mut v = Self::identity(n);
        v.set(qubit - 1, op)?;
        Ok(v)
    }

    fn set(&mut self, q: usize, op: char) -> Result<(), PauliError> {
        let (xb, zb) = match op.to_ascii_uppercase() {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => return Err(PauliError::BadString(op.to_string())),
        };
        if gf2::get(&self.x, q) != xb {
            gf2::flip(&mut self.x, q);
        }
        if gf2::get(&self.z, q) != zb {
            gf2::flip(&mut self.z, q);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_part(&self) -> &[u64] {
        &self.x
    }

    pub fn z_part(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        gf2::get(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        gf2::get(&self.z, q)
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn check(&self, other: &Self) -> Result<(), PauliError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(PauliError::SizeMismatch(self.n, other.n))
        }
    }

    /// Product up to phase.
    pub fn compose(&self, other: &Self) -> Result<Self, PauliError> {
        self.check(other)?;
        let mut out = self.clone();
        gf2::xor_into(&mut out.x, &other.x);
        gf2::xor_into(&mut out.z, &other.z);
        Ok(out)
    }

    /// `u Ω v^T = u_x . v_z + u_z . v_x`; false iff the two Paulis commute.
    pub fn canonical_form(&self, other: &Self) -> Result<bool, PauliError> {
        self.check(other)?;
        Ok(self.form_unchecked(other))
    }

    #[inline]
    pub(crate) fn form_unchecked(&self, other: &Self) -> bool {
        gf2::dot(&self.x, &other.z) ^ gf2::dot(&self.z, &other.x)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, PauliError> {
        Ok(!self.canonical_form(other)?)
    }

    /// The `2n`-bit vector `(x | z)` packed into one row.
    pub fn symplectic_row(&self) -> Row {
        let mut row = vec![0u64; gf2::words_for(2 * self.n)];
        for q in 0..self.n {
            if self.x_bit(q) {
                gf2::flip(&mut row, q);
            }
            if self.z_bit(q) {
                gf2::flip(&mut row, self.n + q);
            }
        }
        row
    }

    /// Inverse of [`symplectic_row`](Self::symplectic_row).
    pub fn from_symplectic_row(n: usize, row: &[u64]) -> Self {
        let mut v = Self::identity(n);
        for q in 0..n {
            if gf2::get(row, q) {
                gf2::flip(&mut v.x, q);
            }
            if gf2::get(row, n + q) {
                gf2::flip(&mut v.z, q);
            }
        }
        v
    }

    pub fn to_hex(&self) -> (String, String) {
        (part_to_hex(&self.x, self.n), part_to_hex(&self.z, self.n))
    }

    /// `"XHEX:ZHEX"`.
    pub fn to_hex_pair(&self) -> String {
        let (x, z) = self.to_hex();
        format!("{x}:{z}")
    }

    pub fn from_hex(n: usize, x: &str, z: &str) -> Result<Self, PauliError> {
        Ok(Self::from_parts(n, part_from_hex(x, n)?, part_from_hex(z, n)?))
    }

    pub fn from_hex_pair(n: usize, text: &str) -> Result<Self, PauliError> {
        let (x, z) = text
            .split_once(':')
            .ok_or_else(|| PauliError::BadHex(text.to_string()))?;
        Self::from_hex(n, x.trim(), z.trim())
    }

    /// Dense string, qubit 1 first, e.g. `"XIYZ"`.
    pub fn parse_dense(text: &str) -> Result<Self, PauliError> {
        let text = text.trim();
        let n = text.chars().count();
        let mut v = Self::identity(n);
        for (q, op) in text.chars().enumerate() {
            v.set(q, op)
                .map_err(|_| PauliError::BadString(text.to_string()))?;
        }
        Ok(v)
    }

    /// Sparse form `"Z1,X3"`; an empty string is the identity.
    pub fn parse_sparse(n: usize, text: &str) -> Result<Self, PauliError> {
        let mut v = Self::identity(n);
        for term in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let mut chars = term.chars();
            let op = chars
                .next()
                .ok_or_else(|| PauliError::BadString(term.to_string()))?;
            let qubit: usize = chars
                .as_str()
                .parse()
                .map_err(|_| PauliError::BadString(term.to_string()))?;
            let single = Self::single(n, qubit, op)?;
            v = v.compose(&single)?;
        }
        Ok(v)
    }

    /// Accepts any of the three textual forms.
    pub fn parse_any(n: usize, text: &str) -> Result<Self, PauliError> {
        let text = text.trim();
        if text.contains(':') {
            return Self::from_hex_pair(n, text);
        }
        if text.chars().count() == n && text.chars().all(|c| "IXYZixyz".contains(c)) {
            return Self::parse_dense(text);
        }
        Self::parse_sparse(n, text)
    }

    /// Tensor-product form, e.g. `X⊗I⊗I⊗I`.
    pub fn tensor_string(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            let c = match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn part_to_hex(part: &[u64], n: usize) -> String {
    let digits = n.div_ceil(4);
    // bit for qubit q lands at position n-1-q of the big-endian number
    (0..digits)
        .map(|d| {
            let mut nibble = 0u32;
            for b in 0..4 {
                let pos = (digits - 1 - d) * 4 + (3 - b);
                if pos < n && gf2::get(part, n - 1 - pos) {
                    nibble |= 1 << (3 - b);
                }
            }
            char::from_digit(nibble, 16).unwrap()
        })
        .collect()
}

fn part_from_hex(text: &str, n: usize) -> Result<Row, PauliError> {
    let bad = || PauliError::BadHex(text.to_string());
    let text = text.trim_start_matches("0x");
    if text.is_empty() || !text.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let mut row = vec![0u64; gf2::words_for(n)];
    let len = text.len();
    for (i, c) in text.chars().enumerate() {
        let nibble = c.to_digit(16).unwrap();
        for b in 0..4 {
            if nibble >> b & 1 == 1 {
                let pos = (len - 1 - i) * 4 + b;
                if pos >= n {
                    return Err(bad());
                }
                gf2::flip(&mut row, n - 1 - pos);
            }
        }
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Mat = [[(f64, f64); 2]; 2];

    // Oracle: explicit complex Pauli matrices and Kronecker products.
    fn pauli_matrix(c: char) -> Mat {
        let o = (0.0, 0.0);
        let one = (1.0, 0.0);
        match c {
            'I' => [[one, o], [o, one]],
            'X' => [[o, one], [one, o]],
            'Y' => [[o, (0.0, -1.0)], [(0.0, 1.0), o]],
            'Z' => [[one, o], [o, (-1.0, 0.0)]],
            _ => unreachable!(),
        }
    }

    fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn kron(s: &str) -> Vec<Vec<(f64, f64)>> {
        let mut m = vec![vec![(1.0, 0.0)]];
        for c in s.chars() {
            let p = pauli_matrix(c);
            let d = m.len();
            let mut out = vec![vec![(0.0, 0.0); 2 * d]; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    for a in 0..2 {
                        for b in 0..2 {
                            out[2 * i + a][2 * j + b] = cmul(m[i][j], p[a][b]);
                        }
                    }
                }
            }
            m = out;
        }
        m
    }

    fn matmul(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> Vec<Vec<(f64, f64)>> {
        let d = a.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).fold((0.0, 0.0), |acc, k| {
                            let p = cmul(a[i][k], b[k][j]);
                            (acc.0 + p.0, acc.1 + p.1)
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn matrices_anticommute(a: &str, b: &str) -> bool {
        let (ma, mb) = (kron(a), kron(b));
        let ab = matmul(&ma, &mb);
        let ba = matmul(&mb, &ma);
        let commute = ab.iter().flatten().zip(ba.iter().flatten()).all(|(x, y)| {
            (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12
        });
        !commute
    }

    #[test]
    fn reference_encodings() {
        let v = PauliVector::parse_dense("XY").unwrap();
        assert_eq!(v.symplectic_row(), vec![0b1011]);
        let v = PauliVector::parse_dense("YY").unwrap();
        assert_eq!(v.symplectic_row(), vec![0b1111]);
        let v = PauliVector::parse_dense("XII").unwrap();
        assert_eq!(v.symplectic_row(), vec![0b000001]);
    }

    #[test]
    fn form_basics() {
        let x = PauliVector::parse_dense("XI").unwrap();
        let z = PauliVector::parse_dense("ZI").unwrap();
        assert!(x.canonical_form(&z).unwrap());
        let a = PauliVector::parse_dense("XY").unwrap();
        let b = PauliVector::parse_dense("YY").unwrap();
        assert_eq!(a.canonical_form(&b).unwrap(), matrices_anticommute("XY", "YY"));
        assert!(matches!(
            x.canonical_form(&PauliVector::identity(3)),
            Err(PauliError::SizeMismatch(2, 3))
        ));
    }

    #[test]
    fn form_matches_matrix_commutators_two_qubits() {
        for i in 0..16u128 {
            for j in 0..16u128 {
                let a = PauliVector::from_index(2, i);
                let b = PauliVector::from_index(2, j);
                assert_eq!(
                    a.canonical_form(&b).unwrap(),
                    matrices_anticommute(&a.to_string(), &b.to_string()),
                    "{a} vs {b}"
                );
            }
            let a = PauliVector::from_index(2, i);
            assert!(!a.canonical_form(&a).unwrap());
        }
    }

    #[test]
    fn hex_layout() {
        let x1 = PauliVector::single(4, 1, 'X').unwrap();
        assert_eq!(x1.to_hex_pair(), "8:0");
        let v = PauliVector::parse_dense("YIZIX").unwrap();
        // x: qubits 1,5 -> 10001b; z: qubits 1,3 -> 10100b
        assert_eq!(v.to_hex(), ("11".to_string(), "14".to_string()));
        assert_eq!(PauliVector::from_hex_pair(5, "11:14").unwrap(), v);
        assert!(PauliVector::from_hex_pair(5, "20:0").is_err());
        assert!(PauliVector::from_hex_pair(5, "zz:0").is_err());
        assert!(PauliVector::from_hex_pair(5, "11").is_err());
    }

    #[test]
    fn sparse_and_dense_parsing() {
        let v = PauliVector::parse_sparse(4, "Z1,X3").unwrap();
        assert_eq!(v.to_string(), "ZIXI");
        assert_eq!(PauliVector::parse_any(4, "Z1,X3").unwrap(), v);
        assert_eq!(PauliVector::parse_any(4, "ZIXI").unwrap(), v);
        assert_eq!(PauliVector::parse_any(4, &v.to_hex_pair()).unwrap(), v);
        assert!(PauliVector::parse_sparse(4, "X5").is_err());
        assert!(PauliVector::parse_sparse(4, "Q1").is_err());
        assert!(PauliVector::parse_sparse(4, "").unwrap().is_identity());
        assert_eq!(PauliVector::parse_dense("XI").unwrap().tensor_string(), "X⊗I");
    }

    #[test]
    fn index_round_trip_and_wide_vectors() {
        for i in 0..256u128 {
            assert_eq!(PauliVector::from_index(4, i).index(), i);
        }
        let v = PauliVector::parse_sparse(100, "X1,Z64,Y65,X100").unwrap();
        assert_eq!(PauliVector::from_hex_pair(100, &v.to_hex_pair()).unwrap(), v);
        assert_eq!(PauliVector::from_symplectic_row(100, &v.symplectic_row()), v);
        assert_eq!(v.weight(), 4);
    }
}
