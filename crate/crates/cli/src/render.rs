use std::fmt::Write;

use serde_json::Value;
use zerosum::Report;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn report(r: &Report) -> String {
    let mut out = String::new();
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
    let _ = writeln!(out, "{:<16}{}", "check", r.check);
    let _ = writeln!(out, "{:<16}{}", "params", params.join(" "));
    let _ = writeln!(out, "{:<16}{}", "status", r.status);
    let _ = writeln!(out, "{:<16}{}", "orbits scanned", r.orbits_scanned);
    let _ = writeln!(out, "{:<16}{} ms", "elapsed", r.elapsed_ms);
    if !r.counts.is_empty() {
        let width = r.counts.keys().map(String::len).max().unwrap_or(0);
        let _ = writeln!(out, "counts");
        for (k, v) in &r.counts {
            let _ = writeln!(out, "  {k:<width$}  {v:>10}");
        }
    }
    let _ = writeln!(out, "counterexamples ({})", r.counterexamples.len());
    for s in &r.counterexamples {
        let _ = writeln!(out, "  {s}");
    }
    out
}
