//! Text and JSON reports, and reading polynomials back from JSON.

use std::sync::Arc;

use serde_json::{json, Value};

use super::parse::eval_scalar;
use super::{InvariantCheck, JobReport, TaskOutcome, TaskValue};
use crate::error::{Error, Result};
use crate::ring::{FieldScalar, FieldTower, LaurentPoly, RatFunc, Ring};
use crate::torsion::Ambiguity;

/// `Delta` with each `(t_i - 1)` factor split off and the sign in front,
/// e.g. `-(t - 1)·(t^2 - 5t + 1)`, after shifting to minimum degree zero.
pub fn factored(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut q = p.normalized();
    let tower = q.tower().clone();
    let vars = q.vars().clone();
    let one = LaurentPoly::one(&tower, &vars);
    let mut factors = Vec::new();
    for i in 0..vars.len() {
        let lin = LaurentPoly::var(&tower, &vars, i).sub(&one);
        let mut k = 0;
        while q.num_terms() > 1 {
            match q.divide_exact(&lin) {
                Ok(next) => {
                    q = next;
                    k += 1;
                }
                Err(_) => break,
            }
        }
        match k {
            0 => {}
            1 => factors.push(format!("({lin})")),
            _ => factors.push(format!("({lin})^{k}")),
        }
    }
    if factors.is_empty() {
        return q.format();
    }
    let mut sign = "";
    if q.leading_term().is_some_and(|(_, c)| c.looks_negative()) {
        q = q.neg();
        sign = "-";
    }
    if let Some(c) = q.as_constant() {
        if c.is_one() {
            return match (sign, factors.len()) {
                ("-", 1) => format!("-{}", factors[0]),
                ("-", _) => format!("-{}", factors.join("·")),
                _ => factors.join("·"),
            };
        }
    }
    let body = if q.num_terms() > 1 || q.as_constant().is_some_and(|c| c.is_compound()) {
        format!("({q})")
    } else {
        q.format()
    };
    if q.as_constant().is_some() {
        format!("{sign}{body}·{}", factors.join("·"))
    } else {
        format!("{sign}{}·{body}", factors.join("·"))
    }
}

fn format_function(r: &RatFunc) -> String {
    match r.as_poly() {
        Some(p) => factored(&p),
        None => {
            let num = r.num().normalized();
            let den = r.den().normalized();
            format!("({}) / ({})", factored(&num), factored(&den))
        }
    }
}

fn value_line(value: &TaskValue, ambiguity: Option<Ambiguity>) -> Option<String> {
    let amb = ambiguity.map(|a| a.describe()).unwrap_or("exact");
    match value {
        TaskValue::None => None,
        TaskValue::Function { symbol, value } => Some(format!("{symbol} = {}   [{amb}]", format_function(value))),
        TaskValue::Scalar { symbol, value } => {
            let value = if ambiguity == Some(Ambiguity::UpToSign) && value.looks_negative() {
                value.neg()
            } else {
                value.clone()
            };
            Some(format!("{symbol} = {}  [{amb}]", value.format(false)))
        }
        TaskValue::Unit { symbol, vars, unit } => {
            let mono = crate::ring::laurent::format_monomial(vars, &unit.shift);
            let sign = if unit.sign == Some(-1) { "-" } else { "" };
            Some(if mono.is_empty() { format!("{symbol} = {sign}1") } else { format!("{symbol} = {sign}{mono}") })
        }
        TaskValue::Count { passed, total } => Some(format!("passed {passed}/{total}")),
    }
}

pub fn render_text(report: &JobReport) -> String {
    let mut out = String::new();
    for t in &report.tasks {
        out.push_str(&format!("== {} ({}) : {}\n", t.name, t.kind.name(), t.status.as_str()));
        if let Some(line) = value_line(&t.value, t.ambiguity) {
            out.push_str(&line);
            out.push('\n');
        }
        for n in &t.notes {
            out.push_str(&format!("  {n}\n"));
        }
    }
    if !report.invariants.is_empty() {
        out.push_str("== invariants\n");
        for c in &report.invariants {
            out.push_str(&format!("  [{}] {}: {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail));
        }
    }
    out
}

fn terms_json(p: &LaurentPoly) -> Value {
    Value::Array(p.terms().rev().map(|(m, c)| json!([m.0, c.format(true)])).collect())
}

fn value_json(v: &TaskValue) -> Value {
    match v {
        TaskValue::None => Value::Null,
        TaskValue::Function { symbol, value } => {
            let mut obj = json!({
                "kind": "function",
                "symbol": symbol,
                "vars": value.vars().as_slice(),
                "terms": terms_json(value.num()),
            });
            if !value.den().is_one() {
                obj["denominator"] = terms_json(value.den());
            }
            obj
        }
        TaskValue::Scalar { symbol, value } => json!({"kind": "scalar", "symbol": symbol, "value": value.format(true)}),
        TaskValue::Unit { symbol, vars, unit } => {
            json!({"kind": "unit", "symbol": symbol, "vars": vars.as_slice(), "sign": unit.sign, "shift": unit.shift})
        }
        TaskValue::Count { passed, total } => json!({"kind": "count", "passed": passed, "total": total}),
    }
}

fn task_json(t: &TaskOutcome) -> Value {
    json!({
        "task": t.name,
        "kind": t.kind.name(),
        "status": t.status.as_str(),
        "value": value_json(&t.value),
        "ambiguity": t.ambiguity,
        "notes": t.notes,
    })
}

fn check_json(c: &InvariantCheck) -> Value {
    json!({"name": c.name, "passed": c.passed, "detail": c.detail})
}

pub fn render_json(report: &JobReport) -> String {
    let doc = json!({
        "tasks": report.tasks.iter().map(task_json).collect::<Vec<_>>(),
        "invariants": report.invariants.iter().map(check_json).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("malformed report: {}", msg.into()))
}

fn poly_from_json(terms: &Value, tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>) -> Result<LaurentPoly> {
    let terms = terms.as_array().ok_or_else(|| bad("terms must be a list"))?;
    let mut out = Vec::new();
    for t in terms {
        let pair =
            t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("a term is an [exponents, coefficient] pair"))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| bad("exponents must be a list"))?
            .iter()
            .map(|e| e.as_i64().and_then(|e| i32::try_from(e).ok()).ok_or_else(|| bad("exponent is not an integer")))
            .collect::<Result<Vec<i32>>>()?;
        if exps.len() != vars.len() {
            return Err(bad("exponent vector has the wrong length"));
        }
        let c = pair[1].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
        let c: FieldScalar = eval_scalar(tower, c, (1, 1))?;
        out.push((exps, c));
    }
    Ok(LaurentPoly::from_terms(tower, vars, out))
}

/// The function-valued results of a JSON report, by task name, with
/// coefficients read in `tower`.
pub fn functions_from_json(doc: &str, tower: &Arc<FieldTower>) -> Result<Vec<(String, RatFunc)>> {
    let v: Value = serde_json::from_str(doc).map_err(|e| bad(e.to_string()))?;
    let tasks = v["tasks"].as_array().ok_or_else(|| bad("missing `tasks`"))?;
    let mut out = Vec::new();
    for t in tasks {
        let value = &t["value"];
        if value["kind"] != "function" {
            continue;
        }
        let name = t["task"].as_str().ok_or_else(|| bad("missing task name"))?.to_string();
        let vars: Vec<String> = value["vars"]
            .as_array()
            .ok_or_else(|| bad("missing `vars`"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variable names are strings")))
            .collect::<Result<_>>()?;
        let vars = Arc::new(vars);
        let num = poly_from_json(&value["terms"], tower, &vars)?;
        let den = match value.get("denominator") {
            Some(d) => poly_from_json(d, tower, &vars)?,
            None => LaurentPoly::one(tower, &vars),
        };
        out.push((name, RatFunc::new(num, den)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_forms() {
        let q = Arc::new(FieldTower::rationals());
        let vars = Arc::new(vec!["t".to_string()]);
        let p = LaurentPoly::from_i64_coeffs(&q, &vars, &[1, -6, 6, -1]);
        assert_eq!(factored(&p), "-(t - 1)·(t^2 - 5t + 1)");
        let p = LaurentPoly::from_i64_coeffs(&q, &vars, &[1, -3, 1]);
        assert_eq!(factored(&p), "t^2 - 3t + 1");
        let p = LaurentPoly::from_i64_coeffs(&q, &vars, &[0, -2, 2]);
        assert_eq!(factored(&p), "2·(t - 1)");
        let p = LaurentPoly::from_i64_coeffs(&q, &vars, &[1, -2, 1]);
        assert_eq!(factored(&p), "(t - 1)^2");
    }
}
