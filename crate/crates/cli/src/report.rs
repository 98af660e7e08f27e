//! Rendering of solve, check and reconstruct results.

use std::fmt::Write;

use weaver_core::algebra::{Regularity, RegularityReport};
use weaver_core::{CountModel, Solution};

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn num_array(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("[{}]", items.join(","))
}

pub fn regularity_json(r: &RegularityReport) -> String {
    match &r.verdict {
        Regularity::Irregular(w) => format!(
            "{{\"verdict\":\"{}\",\"witness\":\"{}\",\"sum\":{}}}",
            r.verdict.label(),
            w.union.to_bit_string(),
            num(w.sum)
        ),
        v => format!("{{\"verdict\":\"{}\"}}", v.label()),
    }
}

pub fn solution_json(sol: &Solution, reg: &RegularityReport) -> String {
    format!(
        "{{\"p\":{},\"tau0\":{},\"tau\":{},\"sse\":{},\"iterations\":{},\"solver\":\"{}\",\"status\":\"{}\",\"regularity\":{}}}\n",
        num_array(sol.p.as_slice()),
        num(sol.thickness.tau0),
        num_array(&sol.thickness.tau),
        num(sol.sse),
        sol.iterations,
        sol.solver,
        sol.status,
        regularity_json(reg)
    )
}

pub fn solution_csv(model: &CountModel, sol: &Solution, reg: &RegularityReport) -> String {
    let mut out = String::from("field,label,value\n");
    for (name, p) in model.ions().iter().zip(sol.p.as_slice()) {
        writeln!(out, "p,{name},{}", num(*p)).unwrap();
    }
    writeln!(out, "tau0,,{}", num(sol.thickness.tau0)).unwrap();
    for (pat, t) in model.patterns().iter().zip(&sol.thickness.tau) {
        writeln!(out, "tau,{},{}", pat.to_bit_string(), num(*t)).unwrap();
    }
    writeln!(out, "sse,,{}", num(sol.sse)).unwrap();
    writeln!(out, "iterations,,{}", sol.iterations).unwrap();
    writeln!(out, "solver,,{}", sol.solver).unwrap();
    writeln!(out, "status,,{}", sol.status).unwrap();
    writeln!(out, "regularity,,{}", reg.verdict.label()).unwrap();
    out
}

/// Play-board layout: thicknesses on the left margin, probabilities along the
/// bottom.
pub fn solution_table(model: &CountModel, sol: &Solution, reg: &RegularityReport) -> String {
    let n = model.n();
    let width = model
        .ions()
        .iter()
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
        .max(8);
    let mut out = String::new();
    let header: String = model
        .ions()
        .iter()
        .map(|s| format!(" {s:>width$}"))
        .collect();
    writeln!(out, "{:>12} |{header}", "thickness").unwrap();
    let rule = "-".repeat(14 + (width + 1) * n);
    writeln!(out, "{rule}").unwrap();
    let ionic: String = (0..n).map(|_| format!(" {:>width$}", "#")).collect();
    writeln!(out, "{:>12.2} |{ionic}", sol.thickness.tau0).unwrap();
    for (pat, t) in model.patterns().iter().zip(&sol.thickness.tau) {
        let row: String = (0..n)
            .map(|i| format!(" {:>width$}", if pat.get(i) { "#" } else { "." }))
            .collect();
        writeln!(out, "{t:>12.2} |{row}").unwrap();
    }
    writeln!(out, "{rule}").unwrap();
    let probs: String = sol
        .p
        .as_slice()
        .iter()
        .map(|p| format!(" {p:>width$.4}"))
        .collect();
    writeln!(out, "{:>12} |{probs}", "p").unwrap();
    writeln!(
        out,
        "sse {:.3e}  iterations {}  solver {}  status {}  regularity {}",
        sol.sse,
        sol.iterations,
        sol.solver,
        sol.status,
        reg.verdict.label()
    )
    .unwrap();
    out
}

pub fn check_text(r: &RegularityReport) -> String {
    let mut out = format!("verdict: {}\n", r.verdict.label());
    match &r.verdict {
        Regularity::Irregular(w) => {
            writeln!(out, "witness: {} sum {}", w.union.to_bit_string(), w.sum).unwrap();
        }
        Regularity::SizeCap { negatives, cap } => {
            writeln!(out, "negative terms: {negatives} exceed the cap of {cap}").unwrap();
        }
        Regularity::Regular => {}
    }
    writeln!(
        out,
        "negative terms: {}  unions examined: {}",
        r.negatives, r.unions_examined
    )
    .unwrap();
    out
}

pub struct Audit {
    pub p: Vec<f64>,
    pub tau0: f64,
    pub tau: Vec<f64>,
    pub reconstruction: Vec<f64>,
    pub deviation: Vec<f64>,
    pub sse: f64,
}

pub fn audit_json(a: &Audit) -> String {
    format!(
        "{{\"p\":{},\"tau0\":{},\"tau\":{},\"reconstruction\":{},\"deviation\":{},\"sse\":{}}}\n",
        num_array(&a.p),
        num(a.tau0),
        num_array(&a.tau),
        num_array(&a.reconstruction),
        num_array(&a.deviation),
        num(a.sse)
    )
}
