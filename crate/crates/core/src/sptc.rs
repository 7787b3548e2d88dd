//! From projective points to stabilizer codes, and from linear codes to
//! stabilizer purity-testing codes.
//!
//! A point `x in V(2r, 2^s)` spans the `s`-dimensional GF(2)-subspace
//! `{λx : λ in GF(2^s)}` of `V(2rs, 2)`. Writing each coordinate of `λx` as
//! `s` bits, coordinates `1..r` become the X part and `r+1..2r` the Z part of
//! an `rs`-qubit Pauli. The subspace is totally isotropic, so its `s` basis
//! vectors generate an `[[rs, rs - s]]` stabilizer code.
//!
//! The bits of a coordinate are taken in a fixed GF(2)-basis of the field
//! (the [`Identification`]). For the commutation test to agree with the field
//! symplectic product `Σ_j e_{r+j} x_j + e_j x_{r+j}`, the bit dot product
//! must be a scaled trace form `Tr(κab)`. The polynomial basis has that
//! property only for `s <= 2`; larger fields use a trace-self-dual basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{CodeDoc, CodeError, LinearCode};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::gf2::{self, EchelonBasis};
use crate::pauli::{PauliError, PauliVector};
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SptcError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("point has odd length {0}")]
    OddPoint(usize),
    #[error("vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("the error must be a non-identity Pauli")]
    ZeroError,
    #[error("{n} qubits do not split into field coordinates of {s} bits")]
    Indivisible { n: usize, s: u32 },
    #[error("code has no known minimum distance")]
    MissingDistance,
    #[error("exhaustive sweep needs {needed} error vectors but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("malformed SPTC document: {0}")]
    Malformed(String),
    #[error("SPTC document disagrees with its code: {0}")]
    Inconsistent(String),
}

/// How the `s` bits of a field coordinate are read off an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identification {
    /// Polynomial-basis coefficients, constant term first.
    Polynomial,
    /// Coordinates `Tr(a b_i)` in a basis with `Tr(b_i b_j) = δ_ij`.
    SelfDual,
}

impl Identification {
    /// Polynomial basis when its bit dot product is a scaled trace form,
    /// otherwise the self-dual basis.
    pub fn for_field(spec: &FieldSpec) -> Self {
        if polynomial_basis_is_trace_form(spec) {
            Self::Polynomial
        } else {
            Self::SelfDual
        }
    }
}

/// True iff some `κ != 0` has `Tr(κ x^i x^j) = δ_ij` for all `i, j < s`.
pub fn polynomial_basis_is_trace_form(spec: &FieldSpec) -> bool {
    let s = spec.degree();
    // Tr(κ x^(i+j)) depends on i+j only, and (0,2) vs (1,1) would need to
    // be both 0 and 1 once s >= 3.
    if s >= 3 {
        return false;
    }
    let x = spec.generator();
    spec.elements().skip(1).any(|kappa| {
        (0..s).all(|i| {
            (0..s).all(|j| spec.trace(spec.mul(kappa, spec.pow(x, (i + j) as u128))) == (i == j))
        })
    })
}

/// Bit coordinates of field elements under an [`Identification`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    spec: FieldSpec,
    kind: Identification,
    // scalars whose multiples of a point give the generator rows
    basis: Vec<u64>,
}

impl Coordinates {
    pub fn new(spec: FieldSpec, kind: Identification) -> Self {
        let basis = match kind {
            Identification::Polynomial => {
                let x = spec.generator();
                (0..spec.degree())
                    .map(|i| spec.pow(x, i as u128))
                    .collect()
            }
            Identification::SelfDual => spec.self_dual_basis_raw(),
        };
        Self { spec, kind, basis }
    }

    pub fn for_field(spec: FieldSpec) -> Self {
        Self::new(spec, Identification::for_field(&spec))
    }

    pub fn kind(&self) -> Identification {
        self.kind
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Basis scalars `β_i`; generator `i` of a blown-up point `x` is `β_i x`.
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn to_bits(&self, a: u64) -> u64 {
        match self.kind {
            Identification::Polynomial => a,
            Identification::SelfDual => self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| self.spec.trace(self.spec.mul(a, b)))
                .fold(0, |acc, (i, _)| acc | 1 << i),
        }
    }

    pub fn from_bits(&self, bits: u64) -> u64 {
        match self.kind {
            Identification::Polynomial => bits,
            Identification::SelfDual => self
                .basis
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0, |acc, (_, &b)| acc ^ b),
        }
    }
}

/// `s` independent, pairwise commuting generators on `n = rs` qubits.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    gens: Vec<PauliVector>,
    source_point: Vec<u64>,
    span: EchelonBasis,
    // destabilizers[i] anticommutes with generator i only
    destabilizers: Vec<PauliVector>,
    // representatives of centralizer / stabilizer
    logicals: Vec<PauliVector>,
    packed: Option<Packed>,
}

/// Codes on at most 64 qubits with every vector packed as `x | z << 64`.
#[derive(Clone, Debug)]
pub struct Packed {
    pub gens: Vec<u128>,
    pub destabilizers: Vec<u128>,
    pub logicals: Vec<u128>,
    // xor basis with distinct leading bits, descending
    span: Vec<u128>,
}

impl Packed {
    pub fn pack(p: &PauliVector) -> u128 {
        let x = p.x_part().first().copied().unwrap_or(0) as u128;
        let z = p.z_part().first().copied().unwrap_or(0) as u128;
        x | z << 64
    }

    #[inline]
    pub fn form(a: u128, b: u128) -> bool {
        ((a & b.rotate_left(64)).count_ones() & 1) == 1
    }

    #[inline]
    pub fn in_span(&self, v: u128) -> bool {
        self.span.iter().fold(v, |r, &b| r.min(r ^ b)) == 0
    }

    fn new(gens: &[PauliVector], destabilizers: &[PauliVector], logicals: &[PauliVector]) -> Self {
        let mut span: Vec<u128> = Vec::new();
        for g in gens {
            let r = span.iter().fold(Self::pack(g), |r, &b| r.min(r ^ b));
            if r != 0 {
                span.push(r);
                span.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        Self {
            gens: gens.iter().map(Self::pack).collect(),
            destabilizers: destabilizers.iter().map(Self::pack).collect(),
            logicals: logicals.iter().map(Self::pack).collect(),
            span,
        }
    }
}

impl PartialEq for StabilizerCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.gens == other.gens && self.source_point == other.source_point
    }
}

impl StabilizerCode {
    /// Wraps explicit generators after checking independence and isotropy.
    pub fn new(gens: Vec<PauliVector>, source_point: Vec<u64>) -> Result<Self, SptcError> {
        let n = gens.first().map(PauliVector::n).unwrap_or(0);
        if let Some(g) = gens.iter().find(|g| g.n() != n) {
            return Err(PauliError::SizeMismatch(n, g.n()).into());
        }
        let code = Self::assemble(n, gens, source_point);
        if code.span.rank() != code.gens.len() {
            return Err(SptcError::Inconsistent("generators are dependent".into()));
        }
        if !code.is_isotropic() {
            return Err(SptcError::Inconsistent("generators do not commute".into()));
        }
        Ok(code)
    }

    fn assemble(n: usize, gens: Vec<PauliVector>, source_point: Vec<u64>) -> Self {
        let mut span = EchelonBasis::new();
        for g in &gens {
            span.insert(&g.symplectic_row());
        }
        // form(g, e) = g_z . e_x + g_x . e_z = dot((g_z | g_x), (e_x | e_z))
        let form_rows: Vec<gf2::Row> = gens
            .iter()
            .map(|g| PauliVector::from_parts(n, g.z_part().to_vec(), g.x_part().to_vec()).symplectic_row())
            .collect();
        let independent = span.rank() == gens.len();
        let destabilizers = if independent {
            (0..gens.len())
                .map(|i| {
                    let target: Vec<bool> = (0..gens.len()).map(|j| j == i).collect();
                    let v = gf2::solve(&form_rows, &target, 2 * n).expect("independent generators admit every syndrome");
                    PauliVector::from_symplectic_row(n, &v)
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut extended = span.clone();
        let logicals = gf2::kernel(&form_rows, 2 * n)
            .into_iter()
            .filter(|v| extended.insert(v))
            .map(|v| PauliVector::from_symplectic_row(n, &v))
            .collect();
        let logicals: Vec<PauliVector> = logicals;
        let packed = (n <= 64).then(|| Packed::new(&gens, &destabilizers, &logicals));
        Self {
            n,
            gens,
            source_point,
            span,
            destabilizers,
            logicals,
            packed,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliVector] {
        &self.gens
    }

    pub fn source_point(&self) -> &[u64] {
        &self.source_point
    }

    /// GF(2) rank of the generators.
    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    /// Encoded qubits, `n - rank`.
    pub fn logical_qubits(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_isotropic(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i..].iter().all(|b| !a.form_unchecked(b)))
    }

    /// Bit `i` is the canonical form of generator `i` with `e`.
    pub fn syndrome(&self, e: &PauliVector) -> Result<Vec<bool>, SptcError> {
        if e.n() != self.n {
            return Err(PauliError::SizeMismatch(self.n, e.n()).into());
        }
        Ok(self.gens.iter().map(|g| g.form_unchecked(e)).collect())
    }

    /// `e` commutes with every generator (lies in the centralizer).
    pub fn centralizes(&self, e: &PauliVector) -> Result<bool, SptcError> {
        Ok(self.syndrome(e)?.iter().all(|b| !b))
    }

    /// `e` lies in the GF(2) row space of the generators (acts trivially on
    /// the code space up to phase).
    pub fn in_stabilizer(&self, e: &PauliVector) -> Result<bool, SptcError> {
        if e.n() != self.n {
            return Err(PauliError::SizeMismatch(self.n, e.n()).into());
        }
        Ok(self.span.contains(&e.symplectic_row()))
    }

    /// A Pauli whose syndrome is exactly `target`, built from destabilizers.
    pub fn syndrome_shift(&self, target: &[bool]) -> Result<PauliVector, SptcError> {
        if target.len() != self.gens.len() {
            return Err(SptcError::LengthMismatch(target.len(), self.gens.len()));
        }
        let mut out = PauliVector::identity(self.n);
        for (d, _) in self.destabilizers.iter().zip(target).filter(|(_, &t)| t) {
            out = out.compose(d)?;
        }
        Ok(out)
    }

    /// Packed form when `n <= 64`.
    pub fn packed(&self) -> Option<&Packed> {
        self.packed.as_ref()
    }

    pub fn destabilizers(&self) -> &[PauliVector] {
        &self.destabilizers
    }

    /// `2(n - rank)` Paulis completing the generators to a basis of the
    /// centralizer.
    pub fn logical_basis(&self) -> &[PauliVector] {
        &self.logicals
    }

    /// Physical representative of the logical Pauli whose X bits select
    /// `logical_basis()[..m]` and Z bits select `logical_basis()[m..]`.
    pub fn encode_logical(&self, message: &PauliVector) -> Result<PauliVector, SptcError> {
        let m = self.logicals.len() / 2;
        if message.n() != m {
            return Err(PauliError::SizeMismatch(m, message.n()).into());
        }
        let mut out = PauliVector::identity(self.n);
        for q in 0..m {
            if message.x_bit(q) {
                out = out.compose(&self.logicals[q])?;
            }
            if message.z_bit(q) {
                out = out.compose(&self.logicals[m + q])?;
            }
        }
        Ok(out)
    }
}

/// Stabilizer code of the projective point `point` (length `2r`).
pub fn blow_up_with(point: &[u64], coords: &Coordinates) -> Result<StabilizerCode, SptcError> {
    let spec = coords.spec();
    if !point.len().is_multiple_of(2) {
        return Err(SptcError::OddPoint(point.len()));
    }
    if let Some(&value) = point.iter().find(|&&v| !spec.contains(v)) {
        return Err(FieldError::ElementOutOfRange {
            s: spec.degree(),
            value,
        }
        .into());
    }
    if point.iter().all(|&v| v == 0) {
        return Err(SptcError::ZeroPoint);
    }
    let s = spec.degree() as usize;
    let r = point.len() / 2;
    let n = r * s;
    let gens = coords
        .basis()
        .iter()
        .map(|&beta| {
            let mut g = PauliVector::identity(n);
            let mut x = vec![0u64; gf2::words_for(n)];
            let mut z = vec![0u64; gf2::words_for(n)];
            for (j, &p) in point.iter().enumerate() {
                let bits = coords.to_bits(spec.mul(beta, p));
                let (part, block) = if j < r { (&mut x, j) } else { (&mut z, j - r) };
                for t in 0..s {
                    if bits >> t & 1 == 1 {
                        gf2::flip(part, block * s + t);
                    }
                }
            }
            g = g.compose(&PauliVector::from_parts(n, x, z)).expect("same size");
            g
        })
        .collect();
    Ok(StabilizerCode::assemble(n, gens, point.to_vec()))
}

/// [`blow_up_with`] under the default identification of the field.
pub fn blow_up(point: &[FieldElement]) -> Result<StabilizerCode, SptcError> {
    let spec = *point.first().ok_or(SptcError::ZeroPoint)?.spec();
    if point.iter().any(|p| *p.spec() != spec) {
        return Err(FieldError::FieldMismatch.into());
    }
    let raw: Vec<u64> = point.iter().map(FieldElement::value).collect();
    blow_up_with(&raw, &Coordinates::for_field(spec))
}

/// `Σ_{j=1..r} e_{r+j} x_j + e_j x_{r+j}` in GF(2^s).
pub fn field_symplectic_raw(spec: &FieldSpec, x: &[u64], e: &[u64]) -> Result<u64, SptcError> {
    if x.len() != e.len() {
        return Err(SptcError::LengthMismatch(x.len(), e.len()));
    }
    if !x.len().is_multiple_of(2) {
        return Err(SptcError::OddPoint(x.len()));
    }
    let r = x.len() / 2;
    Ok((0..r).fold(0, |acc, j| {
        acc ^ spec.mul(e[r + j], x[j]) ^ spec.mul(e[j], x[r + j])
    }))
}

pub fn field_symplectic(x: &[FieldElement], e: &[FieldElement]) -> Result<FieldElement, SptcError> {
    let spec = *x.first().ok_or(SptcError::LengthMismatch(0, e.len()))?.spec();
    if x.iter().chain(e).any(|v| *v.spec() != spec) {
        return Err(FieldError::FieldMismatch.into());
    }
    let xr: Vec<u64> = x.iter().map(FieldElement::value).collect();
    let er: Vec<u64> = e.iter().map(FieldElement::value).collect();
    Ok(FieldElement::new(spec, field_symplectic_raw(&spec, &xr, &er)?)?)
}

/// Field coordinates `(e_1..e_r | e_{r+1}..e_{2r})` of a Pauli: X bits of
/// qubits `(j-1)s+1..js` form `e_j`, Z bits form `e_{r+j}`.
pub fn pauli_coordinates(e: &PauliVector, coords: &Coordinates) -> Result<Vec<u64>, SptcError> {
    let s = coords.spec().degree() as usize;
    if !e.n().is_multiple_of(s) {
        return Err(SptcError::Indivisible {
            n: e.n(),
            s: s as u32,
        });
    }
    let r = e.n() / s;
    let group = |bit: &dyn Fn(usize) -> bool, j: usize| {
        let bits = (0..s).filter(|&t| bit(j * s + t)).fold(0u64, |acc, t| acc | 1 << t);
        coords.from_bits(bits)
    };
    let mut out = Vec::with_capacity(2 * r);
    out.extend((0..r).map(|j| group(&|q| e.x_bit(q), j)));
    out.extend((0..r).map(|j| group(&|q| e.z_bit(q), j)));
    Ok(out)
}

/// The swapped vector `(e_{r+1}..e_{2r}, e_1..e_r)`: encoding it with the
/// generator matrix gives a codeword whose zero coordinates are exactly the
/// codes that fail to detect `e`.
pub fn pauli_to_field_vector_with(e: &PauliVector, coords: &Coordinates) -> Result<Vec<u64>, SptcError> {
    let v = pauli_coordinates(e, coords)?;
    let r = v.len() / 2;
    Ok(v[r..].iter().chain(&v[..r]).copied().collect())
}

pub fn pauli_to_field_vector(e: &PauliVector, spec: FieldSpec, r: usize) -> Result<Vec<FieldElement>, SptcError> {
    if e.n() != r * spec.degree() as usize {
        return Err(SptcError::Indivisible {
            n: e.n(),
            s: spec.degree(),
        });
    }
    let coords = Coordinates::for_field(spec);
    Ok(pauli_to_field_vector_with(e, &coords)?
        .into_iter()
        .map(|v| FieldElement::new(spec, v).expect("coordinates lie in the field"))
        .collect())
}

/// Strong counts every undetected error (centralizer); weak discounts
/// errors that lie in the stabilizer itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strong,
    Weak,
}

/// An ordered family of stabilizer codes built from a linear code.
#[derive(Clone, Debug, PartialEq)]
pub struct Sptc {
    codes: Vec<StabilizerCode>,
    source: LinearCode,
    eps_bound: Rational,
    coords: Coordinates,
    n: usize,
    m: usize,
    s: usize,
}

impl Sptc {
    /// Blows up every column of `code`, in column order. Needs a known `d`.
    pub fn build(code: &LinearCode) -> Result<Self, SptcError> {
        Self::build_with(code, Identification::for_field(code.spec()))
    }

    pub fn build_with(code: &LinearCode, kind: Identification) -> Result<Self, SptcError> {
        let d = code.d().ok_or(SptcError::MissingDistance)?;
        let coords = Coordinates::new(*code.spec(), kind);
        let codes = code
            .columns()
            .iter()
            .map(|col| blow_up_with(col, &coords))
            .collect::<Result<Vec<_>, _>>()?;
        let s = code.spec().degree() as usize;
        let n = code.r() * s;
        let c = code.c();
        Ok(Self {
            codes,
            source: code.clone(),
            eps_bound: rational::ratio((c - d) as u128, c as u128),
            coords,
            n,
            m: n - s,
            s,
        })
    }

    pub fn codes(&self) -> &[StabilizerCode] {
        &self.codes
    }

    pub fn source(&self) -> &LinearCode {
        &self.source
    }

    /// `1 - d/c`.
    pub fn eps_bound(&self) -> &Rational {
        &self.eps_bound
    }

    pub fn identification(&self) -> Identification {
        self.coords.kind()
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coords
    }

    /// Physical qubits per code.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Logical qubits per code.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Generators (and syndrome bits) per code.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    fn check_error(&self, e: &PauliVector) -> Result<(), SptcError> {
        if e.n() != self.n {
            return Err(PauliError::SizeMismatch(self.n, e.n()).into());
        }
        if e.is_identity() {
            return Err(SptcError::ZeroError);
        }
        Ok(())
    }

    /// Number of codes that fail to detect `e`.
    pub fn undetected_count(&self, e: &PauliVector, mode: Mode) -> Result<usize, SptcError> {
        self.check_error(e)?;
        Ok(self.count_unchecked(e, mode))
    }

    fn count_unchecked(&self, e: &PauliVector, mode: Mode) -> usize {
        self.codes
            .iter()
            .filter(|q| {
                q.gens.iter().all(|g| !g.form_unchecked(e))
                    && (mode == Mode::Strong || !q.span.contains(&e.symplectic_row()))
            })
            .count()
    }

    /// Undetected count through the codeword route: zero coordinates of
    /// `G`-encoding the swapped field vector of `e`.
    pub fn undetected_count_via_codeword(&self, e: &PauliVector) -> Result<usize, SptcError> {
        self.check_error(e)?;
        let f = pauli_to_field_vector_with(e, &self.coords)?;
        let word = self.source.encode_raw(&f)?;
        Ok(word.iter().filter(|&&w| w == 0).count())
    }

    /// Fraction of codes that fail to detect `e`.
    pub fn undetected_fraction(&self, e: &PauliVector, mode: Mode) -> Result<Rational, SptcError> {
        let count = self.undetected_count(e, mode)?;
        debug_assert!(
            mode == Mode::Weak || Some(count) == self.undetected_count_via_codeword(e).ok(),
            "commutation and codeword routes disagree for {e}"
        );
        Ok(rational::ratio(count as u128, self.codes.len() as u128))
    }

    fn fast_codes(&self) -> Option<Vec<Vec<(u64, u64)>>> {
        (self.n <= 64).then(|| {
            self.codes
                .iter()
                .map(|q| {
                    q.gens
                        .iter()
                        .map(|g| (g.x_part()[0], g.z_part()[0]))
                        .collect()
                })
                .collect()
        })
    }

    /// Exact maximum strong undetected fraction over all `4^n - 1` nonzero
    /// errors. Ties go to the smallest integer encoding. The result does not
    /// depend on `workers`.
    pub fn verify_error_rate(&self, budget: u128, workers: Option<usize>) -> Result<VerifyReport, SptcError> {
        let needed = if 2 * self.n >= 128 {
            u128::MAX
        } else {
            (1u128 << (2 * self.n)) - 1
        };
        if needed > budget {
            return Err(SptcError::BudgetExceeded { needed, budget });
        }
        let fast = self.fast_codes().expect("budget bounds n");
        let total = needed + 1;
        let chunks = 256u128.min(total);
        let sweep = || {
            (0..chunks)
                .into_par_iter()
                .map(|ci| {
                    let lo = (total * ci / chunks).max(1);
                    let hi = total * (ci + 1) / chunks;
                    let mut best = (0usize, u128::MAX);
                    for idx in lo..hi {
                        let count = count_fast(&fast, idx, self.n);
                        if count > best.0 {
                            best = (count, idx);
                        }
                    }
                    best
                })
                .reduce(|| (0, u128::MAX), pick_better)
        };
        let (count, idx) = run_with_workers(workers, sweep);
        let witness = PauliVector::from_index(self.n, idx);
        Ok(self.report(count, witness, needed, None))
    }

    /// Sampled lower bound on the maximum: `samples` uniformly random nonzero
    /// errors, drawn in fixed batches whose seeds derive from `seed`.
    pub fn sample_error_rate(&self, samples: u64, seed: u64, workers: Option<usize>) -> VerifyReport {
        const BATCH: u64 = 4096;
        let batches = samples.div_ceil(BATCH);
        let sweep = || {
            (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = ChaCha8Rng::seed_from_u64(batch_seed(seed, b));
                    let take = BATCH.min(samples - b * BATCH);
                    let mut best: Option<(usize, PauliVector)> = None;
                    for _ in 0..take {
                        let e = random_nonzero_pauli(&mut rng, self.n);
                        let count = self.count_unchecked(&e, Mode::Strong);
                        let better = match &best {
                            None => true,
                            Some((c, w)) => count > *c || (count == *c && order_key(&e) < order_key(w)),
                        };
                        if better {
                            best = Some((count, e));
                        }
                    }
                    best
                })
                .reduce(
                    || None,
                    |a, b| match (a, b) {
                        (None, x) | (x, None) => x,
                        (Some(a), Some(b)) => {
                            if b.0 > a.0 || (b.0 == a.0 && order_key(&b.1) < order_key(&a.1)) {
                                Some(b)
                            } else {
                                Some(a)
                            }
                        }
                    },
                )
        };
        let (count, witness) = run_with_workers(workers, sweep)
            .unwrap_or_else(|| (0, PauliVector::identity(self.n)));
        self.report(count, witness, samples as u128, Some(seed))
    }

    fn report(&self, count: usize, witness: PauliVector, checked: u128, seed: Option<u64>) -> VerifyReport {
        let max_fraction = rational::ratio(count as u128, self.codes.len() as u128);
        VerifyReport {
            holds: max_fraction <= self.eps_bound,
            max_count: count,
            max_fraction,
            bound: self.eps_bound.clone(),
            witness,
            exhaustive: seed.is_none(),
            errors_checked: checked,
            seed,
        }
    }

    pub fn to_doc(&self) -> SptcDoc {
        SptcDoc {
            code: self.source.to_doc(),
            n: self.n,
            m: self.m,
            s: self.s,
            eps_bound: rational::to_string(&self.eps_bound),
            identification: self.coords.kind(),
            codes: self
                .codes
                .iter()
                .map(|q| StabilizerDoc {
                    source_point: q.source_point.clone(),
                    gens: q
                        .gens
                        .iter()
                        .map(|g| {
                            let (x, z) = g.to_hex();
                            GeneratorDoc { x, z }
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds the family from the embedded code and checks every stored
    /// field against the rebuild.
    pub fn from_doc(doc: &SptcDoc) -> Result<Self, SptcError> {
        let code = LinearCode::from_doc(&doc.code)?;
        let sptc = Self::build_with(&code, doc.identification)?;
        let rebuilt = sptc.to_doc();
        if rebuilt.n != doc.n || rebuilt.m != doc.m || rebuilt.s != doc.s {
            return Err(SptcError::Inconsistent("qubit counts".into()));
        }
        if rational::parse(&doc.eps_bound).as_ref() != Some(&sptc.eps_bound) {
            return Err(SptcError::Inconsistent(format!("eps_bound {}", doc.eps_bound)));
        }
        if rebuilt.codes.len() != doc.codes.len() {
            return Err(SptcError::Inconsistent("number of codes".into()));
        }
        for (i, (a, b)) in rebuilt.codes.iter().zip(&doc.codes).enumerate() {
            let same_gens = a.gens.len() == b.gens.len()
                && a.gens.iter().zip(&b.gens).all(|(x, y)| {
                    hex_eq(&x.x, &y.x) && hex_eq(&x.z, &y.z)
                });
            if a.source_point != b.source_point || !same_gens {
                return Err(SptcError::Inconsistent(format!("code {}", i + 1)));
            }
        }
        Ok(sptc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("SPTC document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SptcError> {
        let doc: SptcDoc = serde_json::from_str(text).map_err(|e| SptcError::Malformed(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

fn hex_eq(a: &str, b: &str) -> bool {
    a.trim_start_matches('0').eq_ignore_ascii_case(b.trim_start_matches('0'))
}

#[inline]
fn count_fast(codes: &[Vec<(u64, u64)>], idx: u128, n: usize) -> usize {
    let low = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
    let ex = (idx & low) as u64;
    let ez = (idx >> n & low) as u64;
    codes
        .iter()
        .filter(|gens| {
            gens.iter()
                .all(|&(gx, gz)| ((gx & ez) ^ (gz & ex)).count_ones() & 1 == 0)
        })
        .count()
}

fn pick_better(a: (usize, u128), b: (usize, u128)) -> (usize, u128) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

// z part high, x part low; compares like the integer encoding for any width
fn order_key(e: &PauliVector) -> (Vec<u64>, Vec<u64>) {
    (
        e.z_part().iter().rev().copied().collect(),
        e.x_part().iter().rev().copied().collect(),
    )
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn run_with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) if w > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

/// Per-batch seed so batches are reproducible regardless of scheduling.
pub fn batch_seed(seed: u64, batch: u64) -> u64 {
    // splitmix64 of (seed, batch)
    let mut z = seed ^ batch.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliVector {
    let w = gf2::words_for(n);
    let mut parts = [vec![0u64; w], vec![0u64; w]];
    for part in parts.iter_mut() {
        for (i, word) in part.iter_mut().enumerate() {
            let bits = (n - 64 * i).min(64);
            let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
            *word = rng.random::<u64>() & mask;
        }
    }
    let [x, z] = parts;
    PauliVector::from_parts(n, x, z)
}

pub fn random_nonzero_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliVector {
    loop {
        let e = random_pauli(rng, n);
        if !e.is_identity() {
            return e;
        }
    }
}

/// Outcome of [`Sptc::verify_error_rate`] or [`Sptc::sample_error_rate`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub max_fraction: Rational,
    pub max_count: usize,
    pub bound: Rational,
    pub witness: PauliVector,
    pub holds: bool,
    pub exhaustive: bool,
    pub errors_checked: u128,
    pub seed: Option<u64>,
}

impl VerifyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": if self.exhaustive { "exhaustive" } else { "sampled" },
            "approximate": !self.exhaustive,
            "errors_checked": self.errors_checked.to_string(),
            "seed": self.seed,
            "max_fraction": rational::to_string(&self.max_fraction),
            "max_count": self.max_count,
            "bound": rational::to_string(&self.bound),
            "witness": self.witness.to_hex_pair(),
            "witness_pauli": self.witness.to_string(),
            "holds": self.holds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub x: String,
    pub z: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerDoc {
    pub source_point: Vec<u64>,
    pub gens: Vec<GeneratorDoc>,
}

/// Wire form of an [`Sptc`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SptcDoc {
    pub code: CodeDoc,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub eps_bound: String,
    pub identification: Identification,
    pub codes: Vec<StabilizerDoc>,
}
