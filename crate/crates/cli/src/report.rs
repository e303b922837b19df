//! Versioned JSON reports and their text rendering.

use std::time::Instant;

use momentforge_core::forms::C64;
use momentforge_core::lattice::{rat_to_string, IntMatrix, RatVector};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::datasets::sha256_hex;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    /// sha256 of the input contents (newline-joined), or of the echo when
    /// every input is inline
    pub input_digest: String,
    pub seed: Option<u64>,
    pub verdicts: Map<String, Value>,
    pub certificates: Map<String, Value>,
    /// Short verdict words matched by `--expect`.
    pub tokens: Vec<String>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: &[&str]) -> Self {
        let command = command.into();
        // content hash of the inputs; inline-only commands hash their echo
        let buf = if inputs.is_empty() {
            command.clone()
        } else {
            inputs.join("\n")
        };
        Self {
            input_digest: sha256_hex(buf.as_bytes()),
            command,
            ..Default::default()
        }
    }

    pub fn verdict(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.verdicts.insert(key.to_string(), v.into());
        self
    }

    pub fn certificate(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.certificates.insert(key.to_string(), v.into());
        self
    }

    pub fn token(&mut self, t: impl Into<String>) -> &mut Self {
        self.tokens.push(t.into());
        self
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    pub fn fail(&mut self, f: impl Into<String>) -> &mut Self {
        self.failures.push(f.into());
        self
    }

    /// Runs `f`, recording its wall time under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.push((label.to_string(), t.elapsed().as_secs_f64() * 1e3));
        out
    }

    /// Every expected token must be among the report's tokens.
    pub fn check_expect(&mut self, expect: &[String]) {
        for e in expect.iter().map(|e| e.trim()).filter(|e| !e.is_empty()) {
            if !self.tokens.iter().any(|t| t == e) {
                let got = self.tokens.join(",");
                self.fail(format!("expected `{e}`, got [{got}]"));
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// The report body; timings are only present when requested, so the
    /// default output is reproducible byte for byte.
    pub fn to_json(&self, with_timings: bool) -> Value {
        let mut body = json!({
            "schema": SCHEMA,
            "tool": format!("momentforge {}", env!("CARGO_PKG_VERSION")),
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "verdicts": Value::Object(self.verdicts.clone()),
            "certificates": Value::Object(self.certificates.clone()),
            "tokens": self.tokens,
            "notes": self.notes,
            "failures": self.failures,
            "ok": self.ok(),
        });
        if with_timings {
            let t: Map<String, Value> = self
                .timings
                .iter()
                .map(|(k, v)| (k.clone(), json!((v * 1e3).round() / 1e3)))
                .collect();
            body["timings_ms"] = Value::Object(t);
        }
        body
    }

    pub fn render_text(&self, with_timings: bool) -> String {
        let v = self.to_json(with_timings);
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.command));
        for key in ["verdicts", "certificates", "notes", "failures", "timings_ms"] {
            match &v[key] {
                Value::Object(m) if !m.is_empty() => {
                    out.push_str(&format!("{key}:\n"));
                    for (k, x) in m {
                        match x {
                            Value::Array(rows) if k == "criteria" => render_criteria(&mut out, rows),
                            _ => render_value(&mut out, k, x, 1),
                        }
                    }
                }
                Value::Array(a) if !a.is_empty() => {
                    out.push_str(&format!("{key}:\n"));
                    for x in a {
                        out.push_str(&format!("  - {}\n", scalar(x)));
                    }
                }
                _ => {}
            }
        }
        out.push_str(&format!(
            "ok: {}  (schema {SCHEMA}, input sha256 {})\n",
            self.ok(),
            &self.input_digest[..16]
        ));
        out
    }
}

/// Pass/fail table for the acceptance report.
fn render_criteria(out: &mut String, rows: &[Value]) {
    out.push_str("  criteria:\n");
    for c in rows {
        let mark = |p: &Value| if p.as_bool() == Some(true) { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "    criterion {} {}  {}\n",
            c["id"],
            mark(&c["passed"]),
            scalar(&c["title"])
        ));
        for ch in c["checks"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "      {} {}: {}\n",
                mark(&ch["passed"]),
                scalar(&ch["name"]),
                scalar(&ch["detail"])
            ));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                render_value(out, k, x, depth + 1);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in a.iter().enumerate() {
                render_value(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

pub fn rat(q: &BigRational) -> Value {
    Value::String(rat_to_string(q))
}

pub fn rat_vec(v: &RatVector) -> Value {
    Value::Array(v.0.iter().map(rat).collect())
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

/// Finite floats as numbers; infinities and NaN as strings, which JSON
/// cannot carry.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn complex(z: C64) -> Value {
    json!([float(z.re), float(z.im)])
}

pub fn complex_vec(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().copied().map(float).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expect_mismatch_becomes_failure() {
        let mut r = Report::new("x", &[]);
        r.token("smooth").token("rank=1");
        r.check_expect(&["smooth".into(), "rank=1".into()]);
        assert!(r.ok());
        r.check_expect(&["projective".into()]);
        assert!(!r.ok());
        assert_eq!(r.to_json(false)["ok"], json!(false));
    }

    #[test]
    fn timings_stay_out_of_default_body() {
        let mut r = Report::new("x", &["payload"]);
        r.timed("step", || ());
        assert!(r.to_json(false).get("timings_ms").is_none());
        assert!(r.to_json(true).get("timings_ms").is_some());
        assert_eq!(r.to_json(false), Report { timings: vec![], ..r }.to_json(false));
    }

    #[test]
    fn rationals_are_strings() {
        let v = RatVector(vec![
            BigRational::new(3.into(), 6.into()),
            BigRational::from_integer((-2).into()),
        ]);
        assert_eq!(rat_vec(&v), json!(["1/2", "-2"]));
    }
}
