//! CSV and JSON rendering of command reports.

use serde::Serialize;
use serde_json::Value;
use siqc_core::budget::ReadoutResult;
use siqc_core::feasibility::ScalabilityPoint;
use siqc_core::schedule::PulseSchedule;

use crate::commands::DynamicsRow;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or large magnitudes.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::Null => rows.push((prefix.to_owned(), String::new())),
        Value::String(s) => rows.push((prefix.to_owned(), s.clone())),
        other => rows.push((prefix.to_owned(), other.to_string())),
    }
}

/// Any report as `quantity,value` rows with dotted key paths.
pub fn key_value_csv<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut rows = Vec::new();
    flatten("", &serde_json::to_value(value)?, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    finish(w)
}

pub fn scalability_csv(points: &[ScalabilityPoint], t2_other: &[f64]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_owned(), "p_min".to_owned()];
    header.extend(t2_other.iter().map(|t| format!("gates_L_T2_{t}")));
    w.write_record(&header)?;
    for p in points {
        let mut row = vec![p.n.to_string(), p.p_min.map_or_else(|| "not_measurable".to_owned(), num)];
        row.extend(p.gates_times_l.iter().map(|&g| num(g)));
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn pulses_csv(schedule: &PulseSchedule) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t_s", "qubit", "axis", "angle_rad"])?;
    for p in &schedule.pulses {
        w.write_record([num(p.time), p.qubit.to_string(), "x".to_owned(), num(p.angle)])?;
    }
    finish(w)
}

pub fn dynamics_csv(rows: &[DynamicsRow]) -> Result<String, CliError> {
    let n = rows.first().map_or(0, |r| r.magnetization.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t_s".to_owned()];
    header.extend((0..n).map(|q| format!("mz_{q}")));
    header.extend((0..n).map(|q| format!("coherence_{q}")));
    w.write_record(&header)?;
    for r in rows {
        let mut row = vec![num(r.t_s)];
        row.extend(r.magnetization.iter().map(|&v| num(v)));
        row.extend(r.coherence.iter().map(|&v| num(v)));
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn readout_csv(result: &ReadoutResult) -> Result<String, CliError> {
    let planes = result.planes.len();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t_s".to_owned(), "displacement_m".to_owned()];
    for k in 0..planes {
        header.push(format!("i_{k}"));
        header.push(format!("q_{k}"));
    }
    w.write_record(&header)?;
    for p in &result.trace {
        let mut row = vec![num(p.time), num(p.displacement)];
        for &(i, q) in &p.lockin {
            row.push(num(i));
            row.push(num(q));
        }
        w.write_record(&row)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Nested {
        a: f64,
        inner: Inner,
        list: Vec<u8>,
        missing: Option<f64>,
    }

    #[derive(Serialize)]
    struct Inner {
        name: &'static str,
    }

    #[test]
    fn nested_reports_flatten_to_dotted_keys() {
        let v = Nested { a: 1.5, inner: Inner { name: "x" }, list: vec![7, 8], missing: None };
        let csv = key_value_csv(&v).unwrap();
        assert_eq!(csv, "quantity,value\na,1.5\ninner.name,x\nlist.0,7\nlist.1,8\nmissing,\n");
    }

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, 1e-17, 2251.6899999999996, -3.0e9] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn unmeasurable_points_are_labelled() {
        let points = [ScalabilityPoint { n: 3, p_min: None, gates_times_l: vec![1.0], l_star: vec![3] }];
        let csv = scalability_csv(&points, &[25.0]).unwrap();
        assert_eq!(csv, "n,p_min,gates_L_T2_25\n3,not_measurable,1.0\n");
    }

    #[test]
    fn json_ends_with_newline() {
        assert_eq!(json(&[1, 2]).unwrap(), "[\n  1,\n  2\n]\n");
    }
}
