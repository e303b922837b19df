//! Argument syntax: complex points, weight matrices, rational vectors.

use momentforge_core::forms::C64;
use momentforge_core::lattice::{parse_rational, RatVector};
use serde_json::Value;

use crate::CliError;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// One complex number: `1`, `-0.5`, `2i`, `-i`, `1+2i`, `0.3-1e-2i`.
pub fn complex(s: &str) -> Result<C64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || input(format!("not a complex number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

/// Comma-separated complex coordinates.
pub fn point(s: &str) -> Result<Vec<C64>, CliError> {
    let v = s.split(',').map(complex).collect::<Result<Vec<_>, _>>()?;
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(input(format!("non-finite coordinate in {s:?}")));
    }
    Ok(v)
}

/// Integer matrix as JSON, e.g. `[[1,1,0],[0,1,1]]`; a flat list is one row.
pub fn int_rows(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let v: Value = serde_json::from_str(s).map_err(|e| input(format!("weights: {e}")))?;
    let rows = match v {
        Value::Array(a) if a.iter().all(Value::is_array) => a,
        Value::Array(a) => vec![Value::Array(a)],
        _ => return Err(input("weights must be a JSON list of lists of integers")),
    };
    let rows: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| input(format!("weight {x} is not an integer"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(input("weights must be a nonempty rectangular matrix"));
    }
    Ok(rows)
}

/// Exact vector from a JSON list of integers or strings (`"1/2"`, `"0.25"`).
pub fn rat_vector(s: &str) -> Result<RatVector, CliError> {
    let v: Value = serde_json::from_str(s).map_err(|e| input(format!("vector: {e}")))?;
    let items = v.as_array().ok_or_else(|| input("expected a JSON list"))?;
    let parsed = items
        .iter()
        .map(|x| match x {
            Value::String(t) => parse_rational(t).map_err(input),
            Value::Number(n) => parse_rational(&n.to_string()).map_err(input),
            other => Err(input(format!("not a rational: {other}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatVector(parsed))
}

/// Index set as a JSON list.
/// Coordinate indices, as `0,2` or `[0,2]`; the empty set is `[]`.
pub fn indices(s: &str) -> Result<Vec<usize>, CliError> {
    let t = s.trim();
    let t = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(t);
    t.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<usize>()
                .map_err(|_| input(format!("support: not an index: {x:?}")))
        })
        .collect()
}

pub fn floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| input(format!("not a number: {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(indices("0,2").unwrap(), vec![0, 2]);
        assert_eq!(indices("[1, 3]").unwrap(), vec![1, 3]);
        assert!(indices("[]").unwrap().is_empty());
        assert!(indices("1,-2").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex("1").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(complex("0.5-0.25i").unwrap(), C64::new(0.5, -0.25));
        assert_eq!(complex("1e-2-3e-1i").unwrap(), C64::new(0.01, -0.3));
        assert!(complex("x").is_err());
    }

    #[test]
    fn vectors_and_matrices() {
        assert_eq!(point("1,0").unwrap().len(), 2);
        assert_eq!(int_rows("[[1,1]]").unwrap(), vec![vec![1, 1]]);
        assert_eq!(int_rows("[1,-1]").unwrap(), vec![vec![1, -1]]);
        assert!(int_rows("[[1],[1,2]]").is_err());
        let v = rat_vector(r#"[2, "1/2", "0.25"]"#).unwrap();
        assert_eq!(v.to_strings(), vec!["2", "1/2", "1/4"]);
    }
}
