//! Exact rationals and the numeric formatting used by reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn ratio(num: u128, den: u128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(v: u128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `"num/den"` in lowest terms; integers are still written with `/1`.
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"`, an integer, or a plain decimal such as `"0.015"`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let d = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(n, d);
    Some(if negative { -r } else { r })
}

pub fn to_f64(r: &Rational) -> f64 {
    // numerator and denominator may both overflow f64 individually
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = r.denom().bits().max(r.numer().bits()) as i64 - 1000;
    let scale = num_traits::pow(BigInt::from(2), shift.max(0) as usize);
    let n = (r.numer() / &scale).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() / &scale).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `1 - (1 - eps)^blocks`, evaluated as `-expm1(blocks * ln_1p(-eps))` so the
/// result keeps full relative precision for tiny `eps`.
pub fn at_least_one_failure(eps: &Rational, blocks: u64) -> f64 {
    if eps.is_zero() || blocks == 0 {
        return 0.0;
    }
    if *eps >= Rational::one() {
        return 1.0;
    }
    let e = to_f64(eps);
    if blocks == 1 {
        return e;
    }
    -((blocks as f64) * (-e).ln_1p()).exp_m1()
}

/// Scientific notation with `digits` significant figures, e.g. `3.0519e-5`.
pub fn sig_figs(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    format!("{:.*e}", digits - 1, x)
}

/// Number of significant figures written in a decimal literal such as
/// `"9.155e-5"` or `"0.0029"`.
pub fn count_sig_figs(text: &str) -> usize {
    let mantissa = text
        .split(['e', 'E'])
        .next()
        .unwrap_or("")
        .trim_start_matches('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

/// True when `value` agrees with the decimal literal `reference` to `digits`
/// significant figures, i.e. relative error at most `5 * 10^-digits`.
pub fn agrees_to_sig_figs(value: f64, reference: f64, digits: usize) -> bool {
    if reference == 0.0 {
        return value == 0.0;
    }
    ((value - reference) / reference).abs() <= 5.0 * 10f64.powi(-(digits as i32))
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}
