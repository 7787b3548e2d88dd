//! Closed-form calculators for the applications of an SPTC: error
//! detection, entanglement purification (CS/DCS-GEPP tuples) and quantum
//! message authentication over many blocks.
//!
//! Everything here works from the code parameters `(c, 2r, d)` and the field
//! degree `s`, so the ERS and ovoid families can be planned at sizes far
//! beyond what could be materialized.

use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::codes::{FamilyTag, LinearCode};
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("code has no known minimum distance")]
    MissingDistance,
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("initial infidelity {0} must lie in [0, 1)")]
    InfidelityOutOfRange(String),
    #[error("parameters are already DCS")]
    AlreadyDcs,
    #[error("target of {target} qubits is smaller than one block of {block}")]
    TargetTooSmall { target: u64, block: u64 },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

/// `ceil(log2 x)`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// `[c, 2r, d]` over GF(2^s).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParameters {
    pub family: FamilyTag,
    pub s: u32,
    pub r: u32,
    pub c: u128,
    pub d: u128,
}

impl CodeParameters {
    /// Extended Reed-Solomon: `c = 2^s + 1`, `d = c - 2r + 1`.
    pub fn ers(s: u32, r: u32) -> Result<Self, PlanError> {
        if !(1..=120).contains(&s) {
            return Err(PlanError::Parameters(format!("s = {s} outside 1..=120")));
        }
        let c = (1u128 << s) + 1;
        if r == 0 || 2 * r as u128 > c {
            return Err(PlanError::Parameters(format!("need 1 <= r and 2r <= {c}")));
        }
        Ok(Self {
            family: FamilyTag::Ers,
            s,
            r,
            c,
            d: c - 2 * r as u128 + 1,
        })
    }

    /// Ovoid: `c = 2^(2s) + 1`, `d = 2^(2s) - 2^s`, `r = 2`.
    pub fn ovoid(s: u32) -> Result<Self, PlanError> {
        if !(1..=63).contains(&s) {
            return Err(PlanError::Parameters(format!("s = {s} outside 1..=63")));
        }
        let q2 = 1u128 << (2 * s);
        Ok(Self {
            family: FamilyTag::Ovoid,
            s,
            r: 2,
            c: q2 + 1,
            d: q2 - (1u128 << s),
        })
    }

    pub fn from_family(family: &str, s: u32, r: Option<u32>) -> Result<Self, PlanError> {
        match family {
            "ers" => Self::ers(s, r.ok_or_else(|| PlanError::Parameters("ers needs r".into()))?),
            "ovoid" => match r {
                None | Some(2) => Self::ovoid(s),
                Some(r) => Err(PlanError::Parameters(format!("ovoid codes have r = 2, not {r}"))),
            },
            other => Err(PlanError::UnknownFamily(other.into())),
        }
    }

    pub fn from_code(code: &LinearCode) -> Result<Self, PlanError> {
        Ok(Self {
            family: code.family(),
            s: code.spec().degree(),
            r: code.r() as u32,
            c: code.c() as u128,
            d: code.d().ok_or(PlanError::MissingDistance)? as u128,
        })
    }

    /// Physical qubits per code, `rs`.
    pub fn n(&self) -> u64 {
        self.r as u64 * self.s as u64
    }

    /// Message qubits per block, `rs - s`.
    pub fn m(&self) -> u64 {
        self.n() - self.s as u64
    }

    /// `1 - d/c`.
    pub fn eps(&self) -> Rational {
        rational::ratio(self.c - self.d, self.c)
    }

    /// Classical bits to agree on the code and compare syndromes.
    pub fn comm_bits(&self) -> u32 {
        ceil_log2(self.c) + self.s
    }

    pub fn label(&self) -> String {
        match self.family {
            FamilyTag::Ovoid => format!("ovoid s={}", self.s),
            FamilyTag::Ers => format!("ers r={} s={}", self.r, self.s),
            _ => format!("code c={} r={} s={}", self.c, self.r, self.s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorDetectionParams {
    pub n: u64,
    pub m: u64,
    /// `d/c`.
    pub fidelity: Rational,
    pub b: u32,
}

impl ErrorDetectionParams {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "m": self.m,
            "F": rational::to_string(&self.fidelity),
            "b": self.b,
        })
    }
}

pub fn error_detection_params(code: &CodeParameters) -> ErrorDetectionParams {
    ErrorDetectionParams {
        n: code.n(),
        m: code.m(),
        fidelity: rational::ratio(code.d, code.c),
        b: code.comm_bits(),
    }
}

/// `<N, K, M, eps_in, delta, p>` with the dimensions stored as exponents
/// of two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeppParams {
    pub log2_n: u64,
    pub log2_k: u64,
    pub log2_m: u64,
    pub eps_in: Rational,
    pub delta: Rational,
    pub p: Rational,
    pub dcs: bool,
    pub comm_bits: u32,
}

impl GeppParams {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": if self.dcs { "DCS" } else { "CS" },
            "N": format!("2^{}", self.log2_n),
            "K": format!("2^{}", self.log2_k),
            "M": format!("2^{}", self.log2_m),
            "eps_in": rational::to_string(&self.eps_in),
            "delta": rational::to_string(&self.delta),
            "p": rational::to_string(&self.p),
            "comm_bits": self.comm_bits,
        })
    }
}

pub fn gepp_cs(code: &CodeParameters, eps_in: &Rational) -> Result<GeppParams, PlanError> {
    if eps_in.is_negative() || *eps_in >= Rational::one() {
        return Err(PlanError::InfidelityOutOfRange(rational::to_string(eps_in)));
    }
    Ok(GeppParams {
        log2_n: code.n(),
        log2_k: 0,
        log2_m: code.m(),
        eps_in: eps_in.clone(),
        delta: code.eps() / (Rational::one() - eps_in),
        p: eps_in.clone(),
        dcs: false,
        comm_bits: code.comm_bits(),
    })
}

pub fn gepp_dcs(cs: &GeppParams) -> Result<GeppParams, PlanError> {
    if cs.dcs {
        return Err(PlanError::AlreadyDcs);
    }
    Ok(GeppParams {
        log2_k: cs.log2_k + cs.comm_bits as u64,
        dcs: true,
        ..cs.clone()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fig1Row {
    pub s: u32,
    pub family: FamilyTag,
    /// `δ(1 - eps_in)`, which equals the SPTC error rate.
    pub value: Rational,
    pub b: u32,
}

/// Both families at `r = 2` for `s = 1..=s_max`.
pub fn fig1_data(s_max: u32) -> Result<Vec<Fig1Row>, PlanError> {
    let mut rows = Vec::with_capacity(2 * s_max as usize);
    for s in 1..=s_max {
        // the r = 2 formula is evaluated even at s = 1, where 2r > c
        let c = (1u128 << s) + 1;
        let ers = CodeParameters {
            family: FamilyTag::Ers,
            s,
            r: 2,
            c,
            d: c - 3,
        };
        for code in [ers, CodeParameters::ovoid(s)?] {
            rows.push(Fig1Row {
                s,
                family: code.family,
                value: code.eps(),
                b: code.comm_bits(),
            });
        }
    }
    Ok(rows)
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    let mut out = String::from("s,family,delta_times_one_minus_eps,delta_times_one_minus_eps_float,b\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.s,
            family_name(row.family),
            rational::to_string(&row.value),
            rational::sig_figs(rational::to_f64(&row.value), 6),
            row.b
        ));
    }
    out
}

fn family_name(tag: FamilyTag) -> &'static str {
    match tag {
        FamilyTag::Ers => "ers",
        FamilyTag::Ovoid => "ovoid",
        FamilyTag::AppendixC => "appendix-c",
        FamilyTag::Custom => "custom",
    }
}

/// Authentication of `target` qubits split into `blocks` blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct QasPlan {
    pub target_qubits: u64,
    pub block_len: u64,
    pub blocks: u64,
    pub message_qubits: u64,
    pub aux_qubits: u64,
    pub key_bits_per_block: u64,
    pub key_bits_total: u64,
    pub eps: Rational,
    pub eps_total: f64,
}

impl QasPlan {
    pub fn eps_text(&self) -> String {
        rational::sig_figs(rational::to_f64(&self.eps), EPS_DIGITS)
    }

    pub fn eps_total_text(&self) -> String {
        rational::sig_figs(self.eps_total, EPS_TOTAL_DIGITS)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target_qubits": self.target_qubits,
            "block_len": self.block_len,
            "B": self.blocks,
            "message_qubits": self.message_qubits,
            "aux_qubits": self.aux_qubits,
            "key_bits_per_block": self.key_bits_per_block,
            "key_bits_total": self.key_bits_total,
            "eps": self.eps_text(),
            "eps_exact": rational::to_string(&self.eps),
            "eps_total": self.eps_total_text(),
        })
    }
}

/// Significant figures used when reporting ε and ε_total.
pub const EPS_DIGITS: usize = 5;
pub const EPS_TOTAL_DIGITS: usize = 4;

pub fn qas_plan(code: &CodeParameters, target_qubits: u64) -> Result<QasPlan, PlanError> {
    let block_len = code.m();
    if block_len == 0 || target_qubits < block_len {
        return Err(PlanError::TargetTooSmall {
            target: target_qubits,
            block: block_len,
        });
    }
    let blocks = target_qubits / block_len;
    let key_bits_per_block = 2 * block_len + code.comm_bits() as u64;
    let eps = code.eps();
    Ok(QasPlan {
        target_qubits,
        block_len,
        blocks,
        message_qubits: blocks * block_len,
        aux_qubits: code.s as u64 * blocks,
        key_bits_per_block,
        key_bits_total: blocks * key_bits_per_block,
        eps_total: rational::at_least_one_failure(&eps, blocks),
        eps,
    })
}

/// A row as printed in a published table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PublishedRow {
    pub message: u64,
    pub aux: u64,
    pub key: u64,
    pub block: u64,
    pub eps: &'static str,
    pub eps_total: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub code: CodeParameters,
    pub plan: QasPlan,
    pub published: Option<PublishedRow>,
    pub note: String,
}

impl TableRow {
    /// Integer columns equal and ε, ε_total agreeing to the printed
    /// precision (capped at the reporting precision). Message-count
    /// mismatches that contradict the row's own aux and key columns are
    /// reported through `note` and do not count against agreement.
    pub fn agrees(&self) -> bool {
        let Some(p) = self.published else {
            return true;
        };
        let message_ok = p.message == self.plan.message_qubits || self.message_typo();
        message_ok
            && p.aux == self.plan.aux_qubits
            && p.key == self.plan.key_bits_total
            && p.block == self.plan.block_len
            && eps_agrees(rational::to_f64(&self.plan.eps), p.eps, EPS_DIGITS)
            && eps_agrees(self.plan.eps_total, p.eps_total, EPS_TOTAL_DIGITS)
    }

    /// The published message count differs from ours while aux and key
    /// both imply our block count.
    pub fn message_typo(&self) -> bool {
        self.published.is_some_and(|p| {
            p.message != self.plan.message_qubits
                && p.aux == self.plan.aux_qubits
                && p.key == self.plan.key_bits_total
        })
    }
}

fn eps_agrees(value: f64, published: &str, cap: usize) -> bool {
    let digits = rational::count_sig_figs(published).min(cap);
    published
        .parse::<f64>()
        .is_ok_and(|p| rational::agrees_to_sig_figs(value, p, digits))
}

fn annotate(plan: &QasPlan, published: Option<PublishedRow>) -> String {
    let Some(p) = published else {
        return String::new();
    };
    let mut notes = Vec::new();
    if p.message != plan.message_qubits {
        if p.aux == plan.aux_qubits && p.key == plan.key_bits_total {
            notes.push(format!(
                "published message count {} is inconsistent with its own aux {} and key {} (B={}; {}x{}={}); suspected typo",
                p.message, p.aux, p.key, plan.blocks, plan.block_len, plan.blocks, plan.message_qubits
            ));
        } else {
            notes.push(format!("published message count {} differs", p.message));
        }
    }
    for (name, published, ours) in [
        ("aux", p.aux, plan.aux_qubits),
        ("key", p.key, plan.key_bits_total),
        ("block", p.block, plan.block_len),
    ] {
        if published != ours {
            notes.push(format!("published {name} {published} differs"));
        }
    }
    for (name, published, value, cap) in [
        ("eps", p.eps, rational::to_f64(&plan.eps), EPS_DIGITS),
        ("eps_total", p.eps_total, plan.eps_total, EPS_TOTAL_DIGITS),
    ] {
        let digits = rational::count_sig_figs(published);
        let Ok(reference) = published.parse::<f64>() else {
            notes.push(format!("published {name} {published} unreadable"));
            continue;
        };
        if !eps_agrees(value, published, cap) {
            notes.push(format!("published {name} {published} disagrees"));
        } else if !same_digits(value, reference, digits) {
            notes.push(format!(
                "published {name} {published}; exact value {} rounds to {}",
                rational::sig_figs(value, digits + 2),
                rational::sig_figs(value, digits)
            ));
        }
    }
    notes.join("; ")
}

fn same_digits(value: f64, reference: f64, digits: usize) -> bool {
    rational::sig_figs(value, digits) == rational::sig_figs(reference, digits)
}

/// One row per code with message size `target`.
pub fn table_rows(specs: &[(CodeParameters, u64, Option<PublishedRow>)]) -> Result<Vec<TableRow>, PlanError> {
    specs
        .iter()
        .map(|&(code, target, published)| {
            let plan = qas_plan(&code, target)?;
            Ok(TableRow {
                code,
                note: annotate(&plan, published),
                plan,
                published,
            })
        })
        .collect()
}

pub const TABLE_HEADER: [&str; 9] = [
    "code",
    "message_qubits",
    "auxiliary_qubits",
    "secret_key_bits",
    "block_length",
    "eps",
    "eps_total",
    "eps_exact",
    "note",
];

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = TABLE_HEADER.join(",");
    out.push('\n');
    for row in rows {
        let fields = [
            row.code.label(),
            row.plan.message_qubits.to_string(),
            row.plan.aux_qubits.to_string(),
            row.plan.key_bits_total.to_string(),
            row.plan.block_len.to_string(),
            row.plan.eps_text(),
            row.plan.eps_total_text(),
            rational::to_string(&row.plan.eps),
            csv_quote(&row.note),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|row| {
                let mut v = row.plan.to_json();
                v["code"] = row.code.label().into();
                v["note"] = row.note.clone().into();
                v
            })
            .collect(),
    )
}

fn csv_quote(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

const fn row(message: u64, aux: u64, key: u64, block: u64, eps: &'static str, eps_total: &'static str) -> PublishedRow {
    PublishedRow {
        message,
        aux,
        key,
        block,
        eps,
        eps_total,
    }
}

/// `(family, r, s, published)`; `r = 0` marks the ovoid family.
type PresetRow = (u32, u32, PublishedRow);

const TABLE1: [PresetRow; 12] = [
    (0, 15, row(99_990, 99_990, 506_616, 15, "3.0519e-5", "0.1841")),
    (2, 15, row(99_990, 99_990, 406_626, 15, "9.155e-5", "0.4568")),
    (4, 15, row(99_990, 33_330, 268_862, 45, "2.1362e-4", "0.3779")),
    (11, 15, row(99_990, 9_990, 220_446, 150, "6.4085e-4", "0.3475")),
    (0, 25, row(100_000, 100_000, 504_000, 25, "2.9802e-8", "1.192e-4")),
    (2, 25, row(100_000, 100_000, 404_000, 25, "8.9407e-8", "3.5756e-4")),
    (4, 25, row(99_975, 33_325, 267_933, 75, "2.0862e-7", "2.7805e-4")),
    (11, 25, row(100_000, 10_000, 220_400, 250, "6.2585e-7", "2.5031e-4")),
    (0, 35, row(99_995, 99_995, 502_832, 35, "2.9104e-11", "8.315e-8")),
    (2, 35, row(99_995, 99_995, 402_837, 35, "8.7312e-11", "2.4945e-7")),
    (4, 35, row(99_960, 33_320, 267_512, 105, "2.0373e-10", "1.9395e-7")),
    (11, 35, row(99_750, 9_975, 219_735, 350, "6.1118e-10", "1.7419e-7")),
];

const TABLE2: [PresetRow; 9] = [
    (0, 10, row(100, 100, 510, 10, "0.001", "0.0097")),
    (2, 10, row(100, 100, 410, 10, "0.0029", "0.0289")),
    (4, 10, row(90, 30, 243, 30, "0.0068", "0.0203")),
    (0, 15, row(90, 90, 456, 15, "3.0519e-5", "1.831e-4")),
    (2, 15, row(90, 90, 366, 15, "9.155e-5", "5.4917e-4")),
    (4, 15, row(90, 30, 242, 45, "2.1362e-4", "4.2718e-4")),
    (0, 30, row(90, 90, 453, 30, "9.3132e-10", "2.794e-9")),
    (2, 30, row(90, 90, 363, 30, "2.794e-9", "8.382e-9")),
    (4, 30, row(90, 30, 241, 90, "6.5193e-9", "6.5193e-9")),
];

/// Rows of a named preset: `table1` plans about 10^5 message qubits,
/// `table2` about 10^2.
pub fn preset(name: &str) -> Result<Vec<TableRow>, PlanError> {
    let (rows, target): (&[PresetRow], u64) = match name {
        "table1" => (&TABLE1, 100_000),
        "table2" => (&TABLE2, 100),
        other => return Err(PlanError::UnknownPreset(other.into())),
    };
    let specs = rows
        .iter()
        .map(|&(r, s, published)| {
            let code = if r == 0 {
                CodeParameters::ovoid(s)?
            } else {
                CodeParameters::ers(s, r)?
            };
            Ok((code, target, Some(published)))
        })
        .collect::<Result<Vec<_>, PlanError>>()?;
    table_rows(&specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{ers_code, ovoid_code};
    use crate::field::FieldSpec;
    use crate::sptc::Sptc;
    use proptest::prelude::*;

    #[test]
    fn ceil_log2_values() {
        let oracle = |x: u128| (0..128).find(|&k| 1u128 << k >= x).unwrap();
        for x in 1..5000u128 {
            assert_eq!(ceil_log2(x), oracle(x));
        }
        assert_eq!(ceil_log2((1 << 80) + 1), 81);
    }

    #[test]
    fn error_detection_examples() {
        let ers = error_detection_params(&CodeParameters::ers(3, 2).unwrap());
        assert_eq!((ers.n, ers.m), (6, 3));
        assert_eq!(ers.fidelity, rational::ratio(6, 9));
        let ov = error_detection_params(&CodeParameters::ovoid(2).unwrap());
        assert_eq!((ov.n, ov.m), (4, 2));
        assert_eq!(ov.fidelity, rational::ratio(12, 17));
        assert_eq!(ov.b, 5 + 2);
    }

    #[test]
    fn gepp_examples() {
        let eps_in = rational::ratio(1, 10);
        for s in 1..=12 {
            for r in 1..=4 {
                let Ok(code) = CodeParameters::ers(s, r) else {
                    continue;
                };
                let cs = gepp_cs(&code, &eps_in).unwrap();
                let expected = rational::ratio(2 * r as u128 - 1, (1 << s) + 1) / rational::ratio(9, 10);
                assert_eq!(cs.delta, expected);
                assert_eq!(cs.comm_bits, 2 * s + 1);
                assert_eq!((cs.log2_n, cs.log2_k, cs.log2_m), ((r * s) as u64, 0, ((r - 1) * s) as u64));
                let dcs = gepp_dcs(&cs).unwrap();
                assert_eq!(dcs.log2_k, 2 * s as u64 + 1);
                assert_eq!((&dcs.delta, &dcs.p), (&cs.delta, &cs.p));
                assert_eq!(gepp_dcs(&dcs), Err(PlanError::AlreadyDcs));
            }
            let code = CodeParameters::ovoid(s).unwrap();
            let cs = gepp_cs(&code, &rational::from_int(0)).unwrap();
            assert_eq!(cs.delta, rational::ratio((1 << s) + 1, (1 << (2 * s)) + 1));
            assert_eq!(gepp_dcs(&cs).unwrap().log2_k, 3 * s as u64 + 1);
        }
        let code = CodeParameters::ers(3, 2).unwrap();
        assert!(gepp_cs(&code, &rational::from_int(1)).is_err());
        assert!(gepp_cs(&code, &(rational::ratio(0, 1) - rational::ratio(1, 2))).is_err());
    }

    #[test]
    fn fig1_examples() {
        let rows = fig1_data(40).unwrap();
        assert_eq!(rows.len(), 80);
        let at = |s: u32, f: FamilyTag| rows.iter().find(|r| r.s == s && r.family == f).unwrap().clone();
        assert_eq!(at(10, FamilyTag::Ers).value, rational::ratio(3, 1025));
        assert_eq!(at(10, FamilyTag::Ers).b, 21);
        assert_eq!(at(10, FamilyTag::Ovoid).value, rational::ratio(1025, 1_048_577));
        assert_eq!(at(10, FamilyTag::Ovoid).b, 31);
        assert_eq!((at(1, FamilyTag::Ers).b, at(1, FamilyTag::Ovoid).b), (3, 4));
        for s in 2..=40 {
            assert!(at(s, FamilyTag::Ovoid).value < at(s, FamilyTag::Ers).value);
        }
        assert!(fig1_csv(&rows).starts_with("s,family,"));
    }

    #[test]
    fn plan_examples() {
        let p = qas_plan(&CodeParameters::ovoid(15).unwrap(), 100_000).unwrap();
        assert_eq!((p.message_qubits, p.aux_qubits, p.key_bits_total), (99_990, 99_990, 506_616));
        assert_eq!((p.eps_text().as_str(), p.eps_total_text().as_str()), ("3.0519e-5", "1.841e-1"));
        let p = qas_plan(&CodeParameters::ers(25, 4).unwrap(), 100_000).unwrap();
        assert_eq!((p.message_qubits, p.aux_qubits, p.key_bits_total), (99_975, 33_325, 267_933));
        assert_eq!((p.eps_text().as_str(), p.eps_total_text().as_str()), ("2.0862e-7", "2.780e-4"));
        let p = qas_plan(&CodeParameters::ovoid(10).unwrap(), 100).unwrap();
        assert_eq!((p.message_qubits, p.aux_qubits, p.key_bits_total), (100, 100, 510));
        assert!(qas_plan(&CodeParameters::ovoid(10).unwrap(), 9).is_err());
    }

    #[test]
    fn key_length_identities() {
        for s in 1..=60 {
            for r in 2..=6 {
                let Ok(code) = CodeParameters::ers(s, r) else {
                    continue;
                };
                let p = qas_plan(&code, 1 << 20).unwrap();
                assert_eq!(p.key_bits_per_block, 2 * (r * s) as u64 + 1);
            }
            let p = qas_plan(&CodeParameters::ovoid(s).unwrap(), 1 << 20).unwrap();
            assert_eq!(p.key_bits_per_block, 5 * s as u64 + 1);
        }
    }

    #[test]
    fn planner_matches_materialized_codes() {
        for s in 1..=3 {
            let spec = FieldSpec::new(s).unwrap();
            for r in 1..=2usize {
                if let Ok(code) = ers_code(spec, r) {
                    let sptc = Sptc::build(&code).unwrap();
                    let params = CodeParameters::from_code(&code).unwrap();
                    assert_eq!(params, CodeParameters::ers(s, r as u32).unwrap());
                    assert_eq!(&params.eps(), sptc.eps_bound());
                }
            }
            let code = ovoid_code(spec).unwrap();
            let params = CodeParameters::from_code(&code).unwrap();
            assert_eq!(params, CodeParameters::ovoid(s).unwrap());
            assert_eq!(&params.eps(), Sptc::build(&code).unwrap().eps_bound());
        }
    }

    #[test]
    fn table_notes() {
        let rows = preset("table1").unwrap();
        assert_eq!(rows.len(), 12);
        let flagged = &rows[3];
        assert_eq!(flagged.plan.message_qubits, 99_900);
        assert!(flagged.message_typo());
        assert!(flagged.note.contains("99990"));
        assert!(rows[9].note.contains("8.7311e-11"));
        assert!(rows.iter().all(TableRow::agrees));
        assert_eq!(preset("table2").unwrap().len(), 9);
        assert!(preset("table3").is_err());
        let csv = table_csv(&rows);
        assert_eq!(csv.lines().count(), 13);
    }

    proptest! {
        #[test]
        fn eps_total_monotone(s in 4u32..40, r in 2u32..5, b1 in 1u64..10_000, b2 in 1u64..10_000) {
            let code = CodeParameters::ers(s, r).unwrap();
            let (lo, hi) = (b1.min(b2), b1.max(b2));
            let eps = code.eps();
            prop_assert!(rational::at_least_one_failure(&eps, lo) <= rational::at_least_one_failure(&eps, hi));
            prop_assert_eq!(rational::at_least_one_failure(&eps, 1), rational::to_f64(&eps));
            let bigger = CodeParameters::ers(s, r + 1).unwrap().eps();
            prop_assert!(rational::at_least_one_failure(&eps, hi) <= rational::at_least_one_failure(&bigger, hi));
        }

        #[test]
        fn plan_accounting(s in 5u32..40, r in 2u32..12, target in 1u64..1_000_000) {
            let code = CodeParameters::ers(s, r).unwrap();
            if let Ok(p) = qas_plan(&code, target) {
                prop_assert_eq!(p.aux_qubits, s as u64 * p.blocks);
                prop_assert_eq!(p.message_qubits + p.aux_qubits, code.n() * p.blocks);
                prop_assert!(p.message_qubits <= target && target - p.message_qubits < p.block_len);
                prop_assert_eq!(p.key_bits_total, p.blocks * p.key_bits_per_block);
            }
        }
    }
}
