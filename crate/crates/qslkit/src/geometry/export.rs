//! Curve serialization: CSV with 12 significant digits and a JSON mirror
//! carrying full-precision values plus run metadata. Outputs contain no
//! timestamps, so identical inputs produce byte-identical files.

use serde::Serialize;

use super::SpaceCurve;

/// Metadata block attached to JSON curve exports.
#[derive(Clone, Debug, Serialize)]
pub struct CurveMetadata {
    pub gate: String,
    pub observable: String,
    pub omega_max: f64,
    pub steps: usize,
    pub generated_by: String,
}

#[derive(Serialize)]
struct CurveJson<'a> {
    metadata: &'a CurveMetadata,
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn header(curve: &SpaceCurve) -> Vec<String> {
    let mut cols = Vec::with_capacity(1 + 2 * curve.element_labels().len());
    cols.push("t".to_string());
    for label in curve.element_labels() {
        cols.push(format!("tangent_{label}"));
    }
    for label in curve.element_labels() {
        cols.push(format!("base_{label}"));
    }
    cols
}

fn rows(curve: &SpaceCurve) -> Vec<Vec<f64>> {
    let m = curve.times().len();
    let d = curve.element_labels().len();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(1 + 2 * d);
        row.push(curve.times()[i]);
        for j in 0..d {
            row.push(curve.tangent_samples()[(i, j)]);
        }
        for j in 0..d {
            row.push(curve.base_samples()[(i, j)]);
        }
        out.push(row);
    }
    out
}

/// CSV text: `t,tangent_<label>...,base_<label>...`, one row per sample,
/// 12 significant digits.
pub fn curve_to_csv(curve: &SpaceCurve) -> String {
    let mut out = String::new();
    out.push_str(&header(curve).join(","));
    out.push('\n');
    for row in rows(curve) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.11e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// JSON mirror of the CSV (same columns, full precision) plus metadata.
pub fn curve_to_json(curve: &SpaceCurve, metadata: &CurveMetadata) -> serde_json::Value {
    serde_json::to_value(CurveJson {
        metadata,
        header: header(curve),
        rows: rows(curve),
    })
    .expect("curve serialization cannot fail")
}
