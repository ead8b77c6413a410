//! The JSON result document and its text rendering helpers.

use std::str::FromStr;

use latcal_core::lattice::{Bound, LatticeDiagnostic};
use latcal_core::{Lattice, Poset, RuleReport, Valuation};
use serde_json::{json, Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1";

/// A float with 17 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
    } else {
        Value::String(x.to_string())
    }
}

/// Rounded for human-readable tables.
pub fn short(x: f64) -> String {
    format!("{x:.6}")
}

pub fn result_document(
    command: &str,
    input: Value,
    lattice: Value,
    valuation: Value,
    reports: Vec<Value>,
    extra: Map<String, Value>,
) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("input".into(), input);
    doc.insert("lattice".into(), lattice);
    doc.insert("valuation".into(), valuation);
    doc.insert("reports".into(), Value::Array(reports));
    doc.insert("version".into(), SCHEMA_VERSION.into());
    doc.extend(extra);
    Value::Object(doc)
}

pub fn lattice_summary(l: &Lattice) -> Value {
    json!({
        "elementCount": l.len(),
        "isLattice": true,
        "bottom": l.id(l.bottom()),
        "top": l.id(l.top()),
        "isDistributive": l.is_distributive(),
        "distributivityWitness": l
            .distributivity_witness()
            .map(|w| w.map(|e| l.id(e).to_string()).to_vec()),
        "classification": l.poset().classify().as_str(),
    })
}

pub fn poset_summary(p: &Poset) -> Value {
    json!({
        "elementCount": p.len(),
        "isLattice": false,
        "bottom": null,
        "top": null,
        "isDistributive": false,
        "distributivityWitness": null,
        "classification": p.classify().as_str(),
    })
}

pub fn diagnostic(d: &LatticeDiagnostic) -> Value {
    match &d.failure {
        Some(f) => json!({
            "message": f.describe(),
            "bound": match f.bound { Bound::Join => "join", Bound::Meet => "meet" },
            "pair": [f.pair.0, f.pair.1],
            "candidates": f.candidates,
        }),
        None => Value::Null,
    }
}

pub fn report(r: &RuleReport) -> Value {
    json!({
        "rule": r.rule,
        "tuplesChecked": r.tuples_checked,
        "maxResidual": num(r.max_residual),
        "tolerance": num(r.tolerance),
        "passed": r.passed,
        "witness": r.witness,
    })
}

pub fn report_line(r: &RuleReport) -> String {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{verdict}  {:<16} max residual {:.6e} over {} tuples (tolerance {:e})",
        r.rule, r.max_residual, r.tuples_checked, r.tolerance
    );
    if !r.passed {
        if let Some(w) = &r.witness {
            line.push_str(&format!("; witness ({})", w.join(", ")));
        }
    }
    line
}

/// Values, increments and flags of a valuation plus `w(x | top)` per element.
pub fn valuation(v: &Valuation, hand_assigned: bool) -> Value {
    let l = v.lattice();
    let values: Map<String, Value> = l
        .elements()
        .map(|e| (l.id(e).to_string(), num(v.value(e))))
        .collect();
    let top = v.value(l.top());
    let relative: Value = if top > 0.0 {
        Value::Object(
            l.elements()
                .map(|e| {
                    let w = if e == l.top() { 1.0 } else { v.value(e) / top };
                    (l.id(e).to_string(), num(w))
                })
                .collect(),
        )
    } else {
        Value::Null
    };
    let increments: Value = match v.increments() {
        Some(inc) => Value::Object(
            inc.iter()
                .map(|&(j, m)| (l.id(j).to_string(), num(m)))
                .collect(),
        ),
        None => Value::Null,
    };
    json!({
        "values": values,
        "increments": increments,
        "relativeToTop": relative,
        "flags": {
            "handAssigned": hand_assigned,
            "monotone": v.is_monotone(),
            "nonnegativeIncrements": v.nonnegative_increments(),
        },
    })
}

/// Two-column table of element ids and rounded values.
pub fn value_table(v: &Valuation) -> String {
    let l = v.lattice();
    let width = l.elements().map(|e| l.id(e).len()).max().unwrap_or(0);
    let top = v.value(l.top());
    let mut out = String::new();
    for &e in l.poset().linear_extension() {
        out.push_str(&format!("  {:<width$}  {:>14}", l.id(e), short(v.value(e))));
        if top > 0.0 {
            let w = if e == l.top() { 1.0 } else { v.value(e) / top };
            out.push_str(&format!("  w(·|top) {}", short(w)));
        }
        out.push('\n');
    }
    out
}
