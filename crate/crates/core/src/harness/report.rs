//! JSON-lines and CSV output of reports.
//!
//! Every number is printed as `{:.16e}` (17 significant digits), which
//! round-trips through `f64` exactly; non-finite values become `null` in
//! JSON and an empty field in CSV.

use std::fmt::Write as _;
use std::io::Write;

use super::FormulaReport;
use crate::error::Result;

pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A flat JSON object from ordered `(key, already-encoded value)` pairs.
pub fn json_object(fields: &[(&str, String)]) -> String {
    let mut out = String::from("{");
    for (i, (k, v)) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_str(k));
        out.push(':');
        out.push_str(v);
    }
    out.push('}');
    out
}

impl FormulaReport {
    pub fn to_json(&self) -> String {
        let inputs: Vec<(&str, String)> = self
            .inputs
            .iter()
            .map(|(k, v)| (*k, json_num(*v)))
            .collect();
        json_object(&[
            ("formula_id", json_str(self.formula_id.as_str())),
            ("inputs", json_object(&inputs)),
            ("lhs", json_num(self.lhs)),
            ("rhs", json_num(self.rhs)),
            ("ratio", json_num(self.ratio)),
            ("envelope", json_num(self.envelope)),
            ("K", json_num(self.k)),
            ("verdict", json_str(self.verdict.as_str())),
        ])
    }

    /// `inputs` as `name=value;name=value`.
    pub fn inputs_field(&self) -> String {
        self.inputs
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_num(*v)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "formula_id",
    "inputs",
    "lhs",
    "rhs",
    "ratio",
    "envelope",
    "K",
    "verdict",
];

pub fn write_json_lines(out: &mut impl Write, reports: &[FormulaReport]) -> Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json())?;
    }
    Ok(())
}

pub fn write_csv(out: impl Write, reports: &[FormulaReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record([
            r.formula_id.as_str().to_string(),
            r.inputs_field(),
            fmt_num(r.lhs),
            fmt_num(r.rhs),
            fmt_num(r.ratio),
            fmt_num(r.envelope),
            fmt_num(r.k),
            r.verdict.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_roundtrip() {
        for x in [0.1, 1.0 / 3.0, 75_272.114_989_384_4, 1e-300, -2.5e17] {
            let s = json_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(json_num(f64::NAN), "null");
        assert_eq!(fmt_num(f64::INFINITY), "");
    }

    #[test]
    fn strings_are_escaped() {
        assert_eq!(json_str("a\"b\\c\n"), r#""a\"b\\c\n""#);
    }
}
