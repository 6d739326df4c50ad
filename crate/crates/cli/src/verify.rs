//! Recomputes `MACHINE_CHECKED` certificates from their embedded data.

use std::cmp::Ordering;

use critexp::exponent::{critical_exponent_oracle, prefix_exponent_profile};
use critexp::kappa::{horseshoe_certificate, kappa_bound_of_prefix, kappa_sup_truncated};
use critexp::{
    critical_exponent, min_exponent_at_depth, parse_rational, thue_morse_prefix, word_value, BigRational,
    ExponentValue, FiniteWord, PowerWitness,
};
use num::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::report::{CertificateKind, Report};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<(), String>;

fn field<'a>(data: &'a Value, key: &str) -> Result<&'a Value, String> {
    data.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn text<'a>(data: &'a Value, key: &str) -> Result<&'a str, String> {
    field(data, key)?.as_str().ok_or_else(|| format!("field {key:?} is not a string"))
}

fn number(data: &Value, key: &str) -> Result<u64, String> {
    field(data, key)?.as_u64().ok_or_else(|| format!("field {key:?} is not an integer"))
}

fn word(data: &Value, key: &str) -> Result<FiniteWord, String> {
    text(data, key)?.parse().map_err(|e| format!("{key}: {e}"))
}

fn exponent(data: &Value, key: &str) -> Result<ExponentValue, String> {
    text(data, key)?.parse().map_err(|e| format!("{key}: {e}"))
}

fn rational(data: &Value, key: &str) -> Result<BigRational, String> {
    parse_rational(text(data, key)?).map_err(|e| format!("{key}: {e}"))
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn check_critical_exponent(data: &Value) -> Check {
    let base = data.get("base").and_then(Value::as_u64).unwrap_or(2) as u8;
    let w = FiniteWord::parse_in_base(text(data, "word")?, base).map_err(|e| e.to_string())?;
    let claimed = exponent(data, "value")?;
    let recomputed = if w.len() <= 64 {
        critical_exponent_oracle(&w).map_err(|e| e.to_string())?
    } else {
        critical_exponent(&w).0
    };
    ensure(recomputed == claimed, || format!("E({w}) = {recomputed}, report says {claimed}"))?;
    match field(data, "witness")? {
        Value::Null => ensure(w.is_empty(), || "nonempty word without witness".into()),
        wit => {
            let wit: PowerWitness = serde_json::from_value(wit.clone()).map_err(|e| e.to_string())?;
            ensure(wit.verify(&w) && wit.exponent() == claimed, || format!("witness {wit:?} does not replay"))
        }
    }
}

fn check_thue_morse(data: &Value) -> Check {
    let len = number(data, "length")? as usize;
    let claimed = exponent(data, "value")?;
    let e = critical_exponent(&thue_morse_prefix(len)).0;
    ensure(e == claimed, || format!("E(tau_{len}) = {e}"))
}

fn cmp_alpha(alpha: &str, e: &ExponentValue) -> Result<Ordering, String> {
    let a: ExponentValue = alpha.parse().map_err(|e| format!("alpha: {e}"))?;
    Ok(e.cmp(&a))
}

fn check_prefix_exponents(data: &Value) -> Check {
    let prefix = word(data, "prefix")?;
    let alpha = text(data, "alpha")?;
    let profile = prefix_exponent_profile(&prefix);
    let measured = profile.last().cloned().unwrap_or_else(ExponentValue::zero);
    ensure(measured.to_string() == text(data, "measured")?, || format!("measured exponent is {measured}"))?;
    let mut never_exceeds = true;
    let mut strictly_below = true;
    for e in profile.iter().skip(1) {
        let ord = cmp_alpha(alpha, e)?;
        never_exceeds &= ord != Ordering::Greater;
        strictly_below &= ord == Ordering::Less;
    }
    let flag = |k: &str| field(data, k).map(|v| v.as_bool() == Some(true));
    ensure(flag("never_exceeds")? == never_exceeds, || "never_exceeds flag does not replay".into())?;
    ensure(flag("strictly_below")? == strictly_below, || "strictly_below flag does not replay".into())
}

fn check_min_exponent(data: &Value) -> Check {
    let w = word(data, "word")?;
    let depth = number(data, "depth")? as usize;
    let claimed = exponent(data, "value")?;
    let ext = word(data, "extension")?;
    let leaf = w.concat(&ext).map_err(|e| e.to_string())?;
    ensure(ext.len() == depth && critical_exponent(&leaf).0 == claimed, || "extension does not attain the value".into())?;
    let (value, best) = min_exponent_at_depth(&w, depth).map_err(|e| e.to_string())?;
    ensure(value == claimed && best == ext, || format!("recomputed L({depth}) = {value} via {best}"))
}

fn check_counterexample(data: &Value) -> Check {
    let w = word(data, "word")?;
    let depth = number(data, "depth")? as usize;
    let threshold = exponent(data, "threshold")?;
    let lower = exponent(data, "lower")?;
    let expected = critical_exponent(&w).0.max(ExponentValue::from_integer(2));
    ensure(expected == threshold, || format!("threshold should be {expected}"))?;
    let (l, _) = min_exponent_at_depth(&w, depth).map_err(|e| e.to_string())?;
    ensure(l == lower && l > threshold, || format!("L({depth}) = {l} does not exceed {threshold}"))?;
    if depth > 1 {
        let (prev, _) = min_exponent_at_depth(&w, depth - 1).map_err(|e| e.to_string())?;
        ensure(prev <= threshold, || format!("depth {depth} is not the smallest certifying depth"))?;
    }
    Ok(())
}

fn check_kappa_bound(data: &Value) -> Check {
    let base = number(data, "base")? as u8;
    let prefix = FiniteWord::parse_in_base(text(data, "prefix")?, base).map_err(|e| e.to_string())?;
    let bound = kappa_bound_of_prefix(&prefix).map_err(|e| e.to_string())?;
    ensure(bound == rational(data, "bound")?, || format!("1/E(prefix) = {bound}"))
}

fn check_horseshoe(data: &Value) -> Check {
    let m = number(data, "order")? as usize;
    let cert = horseshoe_certificate(m).map_err(|e| e.to_string())?;
    let words: Vec<String> = cert.intervals.iter().map(|i| i.word.to_string()).collect();
    let listed: Vec<String> = serde_json::from_value(field(data, "words")?.clone()).map_err(|e| e.to_string())?;
    ensure(words == listed, || "interval words differ".into())?;
    ensure(cert.machine_checked(), || "disjointness or placement fails".into())
}

fn check_separation(data: &Value) -> Check {
    let p1 = word(data, "y1_prefix")?;
    let p2 = word(data, "y2_prefix")?;
    ensure(p1.prefix(4).to_string() == "0000" && p2.prefix(3).to_string() == "010", || "unexpected leading digits".into())?;
    let y1_hi = word_value(&p1) + BigRational::new(1.into(), num_pow2(p1.len()));
    let y2_lo = word_value(&p2);
    let eighth = BigRational::new(1.into(), 8.into());
    ensure(y2_lo - y1_hi > eighth, || "bracket gap is not above 1/8".into())
}

fn num_pow2(k: usize) -> BigInt {
    BigInt::from(1) << k
}

fn check_membership(data: &Value) -> Check {
    let prefix = word(data, "prefix")?;
    let w = word(data, "word")?;
    ensure(prefix.len() >= w.len() && prefix.prefix(w.len()) == w, || format!("{prefix} does not start with {w}"))
}

fn check_kappa_sup(data: &Value) -> Check {
    let x = rational(data, "x")?;
    let (value, _) = kappa_sup_truncated(&x, number(data, "max_base")? as u8, number(data, "depth")? as usize)
        .map_err(|e| e.to_string())?;
    ensure(value == rational(data, "value")?, || format!("recomputed {value}"))
}

pub fn verify_check(check: &str, data: &Value) -> Check {
    match check {
        "critical-exponent" => check_critical_exponent(data),
        "thue-morse-exponent" => check_thue_morse(data),
        "prefix-exponents" => check_prefix_exponents(data),
        "min-exponent" => check_min_exponent(data),
        "counterexample" => check_counterexample(data),
        "kappa-bound" => check_kappa_bound(data),
        "horseshoe" => check_horseshoe(data),
        "liyorke-separation" => check_separation(data),
        "prefix-membership" => check_membership(data),
        "kappa-sup" => check_kappa_sup(data),
        other => Err(format!("unknown check {other:?}")),
    }
}

/// Replays every machine-checked certificate of a report.
pub fn verify_report(report: &Report) -> Vec<CheckOutcome> {
    report
        .certificates
        .iter()
        .filter(|c| c.kind == CertificateKind::MachineChecked)
        .map(|c| match verify_check(&c.check, &c.data) {
            Ok(()) => CheckOutcome { check: c.check.clone(), passed: true, detail: c.claim.clone() },
            Err(e) => CheckOutcome { check: c.check.clone(), passed: false, detail: e },
        })
        .collect()
}
