//! Tabular sweep output with deterministic CSV and JSON encodings.

use std::io::{self, Write};

use serde::Serialize;

use crate::bound_state::BoundState;
use crate::scattering::ScatteringResult;

/// A row of a sweep table.
pub trait TableRow: Serialize {
    const HEADER: &'static [&'static str];

    /// Column values in header order. Flagged rows carry `NaN`s.
    fn values(&self) -> Vec<f64>;

    fn error(&self) -> Option<&str> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable<R> {
    pub rows: Vec<R>,
}

impl<R: TableRow> SweepTable<R> {
    pub fn new(rows: Vec<R>) -> Self {
        SweepTable { rows }
    }

    /// Number of rows that failed to evaluate.
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.error().is_some()).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", R::HEADER.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.values().into_iter().map(format_value).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// JSON array of row records. Non-finite values become `null`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub k: f64,
    pub re_r: f64,
    pub im_r: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub abs_r2: f64,
    pub abs_s2: f64,
    pub unitarity_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScatterRow {
    pub fn from_result(res: &ScatteringResult) -> Self {
        ScatterRow {
            k: res.k,
            re_r: res.r.re,
            im_r: res.r.im,
            re_s: res.s.re,
            im_s: res.s.im,
            abs_r2: res.reflectance(),
            abs_s2: res.transmittance(),
            unitarity_residual: res.unitarity_residual(),
            error: None,
        }
    }

    pub fn failed(k: f64, error: String) -> Self {
        let nan = f64::NAN;
        ScatterRow {
            k,
            re_r: nan,
            im_r: nan,
            re_s: nan,
            im_s: nan,
            abs_r2: nan,
            abs_s2: nan,
            unitarity_residual: nan,
            error: Some(error),
        }
    }
}

impl TableRow for ScatterRow {
    const HEADER: &'static [&'static str] =
        &["k", "re_r", "im_r", "re_s", "im_s", "abs_r2", "abs_s2", "unitarity_residual"];

    fn values(&self) -> Vec<f64> {
        vec![self.k, self.re_r, self.im_r, self.re_s, self.im_s, self.abs_r2, self.abs_s2, self.unitarity_residual]
    }

    fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub lambda0: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub kappa: f64,
    #[serde(rename = "lambda_E")]
    pub lambda_e: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub norm_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BoundRow {
    pub fn from_state(lambda0: f64, state: &BoundState) -> Self {
        BoundRow {
            lambda0,
            energy: state.energy,
            kappa: state.kappa,
            lambda_e: state.lambda_e,
            a: state.a,
            b: state.b,
            norm_residual: state.norm_identity() - 1.0,
            error: None,
        }
    }

    pub fn failed(lambda0: f64, error: String) -> Self {
        let nan = f64::NAN;
        BoundRow {
            lambda0,
            energy: nan,
            kappa: nan,
            lambda_e: nan,
            a: nan,
            b: nan,
            norm_residual: nan,
            error: Some(error),
        }
    }
}

impl TableRow for BoundRow {
    const HEADER: &'static [&'static str] = &["lambda0", "E", "kappa", "lambda_E", "A", "B", "norm_residual"];

    fn values(&self) -> Vec<f64> {
        vec![self.lambda0, self.energy, self.kappa, self.lambda_e, self.a, self.b, self.norm_residual]
    }

    fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionRow {
    pub x: f64,
    pub psi: f64,
}

impl TableRow for WavefunctionRow {
    const HEADER: &'static [&'static str] = &["x", "psi"];

    fn values(&self) -> Vec<f64> {
        vec![self.x, self.psi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_fixed_width_scientific() {
        assert_eq!(format_value(0.5), "5.0000000000000000e-1");
        assert_eq!(format_value(-1.0), "-1.0000000000000000e0");
        assert_eq!(format_value(f64::NAN), "NaN");
        assert_eq!(format_value(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_and_json_layout() {
        let table =
            SweepTable::new(vec![WavefunctionRow { x: -1.0, psi: 0.25 }, WavefunctionRow { x: 1.0, psi: 0.75 }]);
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], "x,psi");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], "");
        assert!(!csv.contains('\r'));
        let json: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(json[1]["psi"], 0.75);
    }

    #[test]
    fn flagged_rows_are_counted_and_emitted_as_nan() {
        let table = SweepTable::new(vec![ScatterRow::failed(1.0, "boom".into())]);
        assert_eq!(table.flagged(), 1);
        assert!(table.to_csv().lines().nth(1).unwrap().ends_with("NaN"));
        let json: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(json[0]["error"], "boom");
        assert!(json[0]["abs_s2"].is_null());
    }
}
