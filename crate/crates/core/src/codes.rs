//! Classical linear codes over GF(2^s) held as generator matrices.
//!
//! Columns of the generator matrix are read as points of PG(k-1, 2^s); the
//! two built-in families are the extended Reed-Solomon codes (the normal
//! rational curve plus the point at infinity) and the elliptic-quadric ovoid
//! codes of PG(3, q).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldDoc, FieldElement, FieldError, FieldSpec};

/// Largest number of columns a built-in family will materialise.
pub const MAX_COLUMNS: usize = 1 << 22;

/// `load_code` confirms a claimed distance by brute force when `q^k` is at
/// most this.
pub const LOAD_VERIFY_BUDGET: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed code document: {0}")]
    Malformed(String),
    #[error("generator has {got} entries, expected {k}x{c}")]
    Shape { k: usize, c: usize, got: usize },
    #[error("dimension {0} is not even")]
    OddDimension(usize),
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("generator rank {rank} is below its dimension {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("entry {value:#x} is not an element of GF(2^{s})")]
    EntryOutOfRange { s: u32, value: u64 },
    #[error("message has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration needs {needed} codewords but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("2r = {two_r} exceeds the field order {q}")]
    DimensionTooLarge { two_r: usize, q: u128 },
    #[error("code would have {0} columns, more than the supported {MAX_COLUMNS}")]
    TooLarge(u128),
    #[error("claimed minimum distance {claimed} but enumeration found {actual}")]
    DistanceMismatch { claimed: usize, actual: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyTag {
    Ers,
    Ovoid,
    AppendixC,
    Custom,
}

/// A `[c, k, d]_q` code with `q = 2^s`, stored as a row-major `k x c`
/// generator matrix of raw field values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    spec: FieldSpec,
    c: usize,
    k: usize,
    g: Vec<u64>,
    d: Option<usize>,
    family: FamilyTag,
}

/// Wire form of a [`LinearCode`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub field: FieldDoc,
    pub c: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub family_tag: FamilyTag,
    #[serde(rename = "G")]
    pub g: Vec<u64>,
}

impl LinearCode {
    /// Validates and wraps a generator matrix. The dimension must be even,
    /// every column nonzero and the rank full.
    pub fn new(
        spec: FieldSpec,
        k: usize,
        c: usize,
        g: Vec<u64>,
        d: Option<usize>,
        family: FamilyTag,
    ) -> Result<Self, CodeError> {
        if g.len() != k * c || k == 0 || c == 0 {
            return Err(CodeError::Shape { k, c, got: g.len() });
        }
        if let Some(&value) = g.iter().find(|&&v| !spec.contains(v)) {
            return Err(CodeError::EntryOutOfRange {
                s: spec.degree(),
                value,
            });
        }
        if !k.is_multiple_of(2) {
            return Err(CodeError::OddDimension(k));
        }
        if let Some(j) = (0..c).find(|&j| (0..k).all(|i| g[i * c + j] == 0)) {
            return Err(CodeError::ZeroColumn(j));
        }
        let rank = rank_over_field(&spec, &g, k, c);
        if rank != k {
            return Err(CodeError::RankDeficient { rank, k });
        }
        Ok(Self {
            spec,
            c,
            k,
            g,
            d,
            family,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Length.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Dimension, `2r`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.k / 2
    }

    pub fn d(&self) -> Option<usize> {
        self.d
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.g[row * self.c + col]
    }

    pub fn generator(&self) -> &[u64] {
        &self.g
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.g[i * self.c..(i + 1) * self.c]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.k).map(|i| self.entry(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.c).map(|j| self.column(j)).collect()
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    /// `message * G` on raw values.
    pub fn encode_raw(&self, message: &[u64]) -> Result<Vec<u64>, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        let mut word = vec![0u64; self.c];
        for (i, &m) in message.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(self.row(i)) {
                *w ^= self.spec.mul(m, g);
            }
        }
        Ok(word)
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if message.iter().any(|m| *m.spec() != self.spec) {
            return Err(FieldError::FieldMismatch.into());
        }
        let raw: Vec<u64> = message.iter().map(|m| m.value()).collect();
        Ok(self
            .encode_raw(&raw)?
            .into_iter()
            .map(|v| FieldElement::new(self.spec, v).expect("codeword entries lie in the field"))
            .collect())
    }

    /// Number of codewords, `q^k`, saturating at `u128::MAX`.
    pub fn codeword_count(&self) -> u128 {
        let q = self.spec.order();
        (0..self.k).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX)
    }

    /// Exact minimum Hamming weight over all nonzero codewords.
    ///
    /// Messages are enumerated in parallel by leading coordinate; within a
    /// chunk a mixed-radix counter updates the codeword one row at a time.
    pub fn min_distance(&self, budget: u128) -> Result<usize, CodeError> {
        let needed = self.codeword_count();
        if needed > budget {
            return Err(CodeError::BudgetExceeded { needed, budget });
        }
        let elements: Vec<u64> = self.spec.elements().collect();
        let q = elements.len();
        let best = elements
            .par_iter()
            .map(|&lead| {
                let mut word: Vec<u64> = self.row(0).iter().map(|&g| self.spec.mul(lead, g)).collect();
                let mut digits = vec![0usize; self.k];
                let mut best = usize::MAX;
                loop {
                    if lead != 0 || digits.iter().any(|&d| d != 0) {
                        best = best.min(word.iter().filter(|&&w| w != 0).count());
                    }
                    // advance the counter over rows 1..k
                    let mut i = 1;
                    loop {
                        if i == self.k {
                            return best;
                        }
                        let old = elements[digits[i]];
                        digits[i] = (digits[i] + 1) % q;
                        let delta = old ^ elements[digits[i]];
                        for (w, &g) in word.iter_mut().zip(self.row(i)) {
                            *w ^= self.spec.mul(delta, g);
                        }
                        if digits[i] != 0 {
                            break;
                        }
                        i += 1;
                    }
                }
            })
            .min()
            .unwrap_or(usize::MAX);
        Ok(best)
    }

    pub fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            field: self.spec.doc(),
            c: self.c,
            k: self.k,
            d: self.d,
            family_tag: self.family,
            g: self.g.clone(),
        }
    }

    /// Rebuilds a code from its document. A claimed distance is checked by
    /// enumeration when that is cheap (see [`LOAD_VERIFY_BUDGET`]).
    pub fn from_doc(doc: &CodeDoc) -> Result<Self, CodeError> {
        let spec = FieldSpec::from_doc(&doc.field)?;
        let code = Self::new(spec, doc.k, doc.c, doc.g.clone(), doc.d, doc.family_tag)?;
        if let Some(claimed) = doc.d {
            if code.codeword_count() <= LOAD_VERIFY_BUDGET {
                let actual = code.min_distance(LOAD_VERIFY_BUDGET)?;
                if actual != claimed {
                    return Err(CodeError::DistanceMismatch { claimed, actual });
                }
            }
        }
        Ok(code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("code document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CodeError> {
        let doc: CodeDoc =
            serde_json::from_str(text).map_err(|e| CodeError::Malformed(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// Extended Reed-Solomon `[q+1, 2r, q+2-2r]_q` code: columns
/// `(1, t, ..., t^(2r-1))` for `t` in element order, then `(0, ..., 0, 1)`.
pub fn ers_code(spec: FieldSpec, r: usize) -> Result<LinearCode, CodeError> {
    let q = spec.order();
    let k = 2 * r;
    if r == 0 || k as u128 > q {
        return Err(CodeError::DimensionTooLarge { two_r: k, q });
    }
    if q + 1 > MAX_COLUMNS as u128 {
        return Err(CodeError::TooLarge(q + 1));
    }
    let c = q as usize + 1;
    let mut g = vec![0u64; k * c];
    for (j, t) in spec.elements().enumerate() {
        let mut power = 1u64;
        for i in 0..k {
            g[i * c + j] = power;
            power = spec.mul(power, t);
        }
    }
    g[(k - 1) * c + (c - 1)] = 1;
    let d = c + 1 - k;
    LinearCode::new(spec, k, c, g, Some(d), FamilyTag::Ers)
}

/// Ovoid `[q^2+1, 4, q^2-q]_q` code from the elliptic quadric
/// `X0 X1 + X2^2 + X2 X3 + a X3^2 = 0`, where `a` is the first element in
/// element order with trace 1 (so `x^2 + x + a` is irreducible). Columns:
/// `(0, 1, 0, 0)`, then `(1, f(t, u), t, u)` for `(t, u)` lexicographic.
pub fn ovoid_code(spec: FieldSpec) -> Result<LinearCode, CodeError> {
    let q = spec.order();
    let c128 = q * q + 1;
    if c128 > MAX_COLUMNS as u128 {
        return Err(CodeError::TooLarge(c128));
    }
    let c = c128 as usize;
    let a = spec
        .elements()
        .find(|&e| spec.trace(e))
        .expect("the trace is onto GF(2)");
    let quadric = |t: u64, u: u64| spec.mul(t, t) ^ spec.mul(t, u) ^ spec.mul(a, spec.mul(u, u));
    let mut g = vec![0u64; 4 * c];
    g[c] = 1;
    let elements: Vec<u64> = spec.elements().collect();
    let mut j = 1;
    for &t in &elements {
        for &u in &elements {
            g[j] = 1;
            g[c + j] = quadric(t, u);
            g[2 * c + j] = t;
            g[3 * c + j] = u;
            j += 1;
        }
    }
    let d = (q * q - q) as usize;
    LinearCode::new(spec, 4, c, g, Some(d), FamilyTag::Ovoid)
}

/// The `[5, 4, 2]_4` code with generator `[I_4 | 1]`.
pub fn appendix_c_code() -> LinearCode {
    let spec = FieldSpec::new(2).expect("GF(4) exists");
    let (k, c) = (4, 5);
    let mut g = vec![0u64; k * c];
    for i in 0..k {
        g[i * c + i] = 1;
        g[i * c + 4] = 1;
    }
    LinearCode::new(spec, k, c, g, Some(2), FamilyTag::AppendixC)
        .expect("identity plus all-ones column is a valid generator")
}

/// Rank of a row-major `rows x cols` matrix over GF(2^s).
pub fn rank_over_field(spec: &FieldSpec, m: &[u64], rows: usize, cols: usize) -> usize {
    let mut m = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                m.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = spec.inv(m[rank * cols + col]).expect("pivot is nonzero");
        for j in 0..cols {
            m[rank * cols + j] = spec.mul(m[rank * cols + j], inv);
        }
        for r in 0..rows {
            let f = m[r * cols + col];
            if r != rank && f != 0 {
                for j in 0..cols {
                    m[r * cols + j] ^= spec.mul(f, m[rank * cols + j]);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(s: u32) -> FieldSpec {
        FieldSpec::new(s).unwrap()
    }

    // Oracle: plain enumeration of every message, no incremental updates.
    fn brute_min_distance(code: &LinearCode) -> usize {
        let q = code.spec().order() as u64;
        let total = q.pow(code.k() as u32);
        let mut best = usize::MAX;
        for idx in 1..total {
            let mut rest = idx;
            let msg: Vec<u64> = (0..code.k())
                .map(|_| {
                    let v = rest % q;
                    rest /= q;
                    v
                })
                .collect();
            let w = code.encode_raw(&msg).unwrap();
            best = best.min(w.iter().filter(|&&x| x != 0).count());
        }
        best
    }

    #[test]
    fn ers_parameters() {
        let code = ers_code(gf(2), 2).unwrap();
        assert_eq!((code.c(), code.k(), code.d()), (5, 4, Some(2)));
        let code = ers_code(gf(3), 2).unwrap();
        assert_eq!((code.c(), code.k(), code.d()), (9, 4, Some(6)));
        assert!(matches!(ers_code(gf(2), 3), Err(CodeError::DimensionTooLarge { .. })));
        assert!(ers_code(gf(1), 1).is_ok());
    }

    #[test]
    fn ers_first_row_is_ones_on_curve() {
        let code = ers_code(gf(2), 2).unwrap();
        assert_eq!(code.encode_raw(&[1, 0, 0, 0]).unwrap(), vec![1, 1, 1, 1, 0]);
        assert_eq!(code.column(4), vec![0, 0, 0, 1]);
        assert_eq!(code.column(0), vec![1, 0, 0, 0]);
    }

    #[test]
    fn ers_singleton_equality() {
        for s in 1..=3 {
            for r in 1..=2 {
                let Ok(code) = ers_code(gf(s), r) else { continue };
                let d = brute_min_distance(&code);
                assert_eq!(d, code.c() - code.k() + 1, "s={s} r={r}");
                assert_eq!(code.min_distance(1 << 20).unwrap(), d);
            }
        }
    }

    #[test]
    fn min_distance_oracle_values() {
        assert_eq!(appendix_c_code().min_distance(1 << 10).unwrap(), 2);
        assert_eq!(ovoid_code(gf(2)).unwrap().min_distance(1 << 10).unwrap(), 12);
        assert_eq!(ers_code(gf(3), 2).unwrap().min_distance(1 << 12).unwrap(), 6);
        assert!(matches!(
            ers_code(gf(3), 2).unwrap().min_distance(4095),
            Err(CodeError::BudgetExceeded { needed: 4096, budget: 4095 })
        ));
    }

    #[test]
    fn ovoid_parameters_and_brute_distance() {
        for s in 1..=2 {
            let code = ovoid_code(gf(s)).unwrap();
            let q = 1usize << s;
            assert_eq!(code.c(), q * q + 1);
            assert_eq!(code.d(), Some(q * q - q));
            assert_eq!(brute_min_distance(&code), q * q - q);
        }
        let code = ovoid_code(gf(2)).unwrap();
        assert_eq!(code.column(0), vec![0, 1, 0, 0]);
    }

    #[test]
    fn ovoid_no_three_collinear() {
        let code = ovoid_code(gf(2)).unwrap();
        let spec = *code.spec();
        let cols = code.columns();
        for a in 0..cols.len() {
            for b in a + 1..cols.len() {
                for c in b + 1..cols.len() {
                    let m: Vec<u64> = [&cols[a], &cols[b], &cols[c]].iter().flat_map(|v| v.iter().copied()).collect();
                    assert_eq!(rank_over_field(&spec, &m, 3, 4), 3, "{a},{b},{c}");
                }
            }
        }
    }

    #[test]
    fn ovoid_hyperplane_intersections() {
        let code = ovoid_code(gf(2)).unwrap();
        let spec = *code.spec();
        let q = 4u64;
        let cols = code.columns();
        for dual in 1..q.pow(4) {
            let h: Vec<u64> = (0..4).map(|i| dual >> (2 * i) & 3).collect();
            let meet = cols
                .iter()
                .filter(|p| p.iter().zip(&h).fold(0, |acc, (&x, &y)| acc ^ spec.mul(x, y)) == 0)
                .count();
            assert!(meet == 1 || meet == q as usize + 1, "dual {h:?} meets {meet}");
        }
    }

    #[test]
    fn appendix_c_layout() {
        let code = appendix_c_code();
        assert_eq!(code.column(0), vec![1, 0, 0, 0]);
        assert_eq!(code.column(4), vec![1, 1, 1, 1]);
        assert_eq!(rank_over_field(code.spec(), code.generator(), 4, 5), 4);
        assert_eq!(code.encode_raw(&[0, 0, 1, 0]).unwrap(), vec![0, 0, 1, 0, 1]);
        assert_eq!(code.encode_raw(&[0; 4]).unwrap(), vec![0; 5]);
        assert!(matches!(code.encode_raw(&[1]), Err(CodeError::LengthMismatch { .. })));
    }

    #[test]
    fn typed_encode_checks_field() {
        let code = appendix_c_code();
        let other = gf(3).element(1).unwrap();
        let mine = FieldElement::one(*code.spec());
        assert!(code.encode(&[other, mine, mine, mine]).is_err());
        let w = code.encode(&[mine, mine, FieldElement::zero(*code.spec()), mine]).unwrap();
        assert_eq!(w.iter().map(|e| e.value()).collect::<Vec<_>>(), vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn document_round_trip_and_rejections() {
        let code = appendix_c_code();
        let back = LinearCode::from_json(&code.to_json()).unwrap();
        assert_eq!(back, code);

        let mut doc = code.to_doc();
        for i in 0..4 {
            doc.g[i * 5 + 4] = 0;
        }
        assert_eq!(LinearCode::from_doc(&doc), Err(CodeError::ZeroColumn(4)));

        let doc = CodeDoc {
            field: code.spec().doc(),
            c: 3,
            k: 1,
            d: None,
            family_tag: FamilyTag::Custom,
            g: vec![1, 1, 1],
        };
        assert_eq!(LinearCode::from_doc(&doc), Err(CodeError::OddDimension(1)));

        let mut doc = code.to_doc();
        doc.g = vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1];
        doc.d = None;
        assert!(matches!(LinearCode::from_doc(&doc), Err(CodeError::RankDeficient { rank: 3, k: 4 })));

        let mut doc = code.to_doc();
        doc.d = Some(3);
        assert_eq!(
            LinearCode::from_doc(&doc),
            Err(CodeError::DistanceMismatch { claimed: 3, actual: 2 })
        );

        assert!(matches!(LinearCode::from_json("{"), Err(CodeError::Malformed(_))));
    }

    #[test]
    fn document_field_names() {
        let json = appendix_c_code().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["family_tag"], "APPENDIX_C");
        assert_eq!(v["field"]["prim_poly"], 7);
        assert_eq!(v["G"].as_array().unwrap().len(), 20);
    }
}
