//! Measurement datasets: pressure grids, CSV ingestion, baseline subtraction
//! and model-vs-measurement error metrics.
//!
//! CSV layout (UTF-8, comma separated, LF line endings):
//!
//! ```text
//! dl_m,dphi_rad,p1_pa,...,pn_pa,Fz_N,Mz_Nm
//! ```
//!
//! The wrench columns follow the assembly's DOF selection.

use crate::assembly::{project_wrench, Assembly, PlatformState};
use crate::error::{Error, Result};
use crate::free::check_pressure;

/// States closer than this on every coordinate share a baseline.
pub const STATE_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub state: PlatformState,
    /// One per FREE, Pa.
    pub pressures: Vec<f64>,
    /// Wrench components in DOF order.
    pub wrench: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rmse: Vec<f64>,
    pub max_abs: Vec<f64>,
    pub count: usize,
}

/// Every combination of `level * p_max_i`, first FREE varying slowest.
pub fn pressure_grid(assembly: &Assembly, levels: &[f64]) -> Result<Vec<Vec<f64>>> {
    if let Some(l) = levels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::Validation(format!(
            "pressure level {l} is outside [0, 1]"
        )));
    }
    let p_max = assembly.p_max();
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(p_max.len())];
    for pm in &p_max {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                levels.iter().map(move |l| {
                    let mut v = prefix.clone();
                    v.push(l * pm);
                    v
                })
            })
            .collect();
    }
    if levels.is_empty() {
        out.clear();
    }
    Ok(out)
}

fn header(assembly: &Assembly) -> Vec<String> {
    let mut cols = vec!["dl_m".to_string(), "dphi_rad".to_string()];
    cols.extend((1..=assembly.len()).map(|i| format!("p{i}_pa")));
    cols.extend(assembly.dofs().components().iter().map(|c| c.column()));
    cols
}

/// Parses a measurement CSV and checks pressures against each FREE's rating.
pub fn load_measurements(text: &str, assembly: &Assembly) -> Result<Vec<MeasurementRecord>> {
    let expected = header(assembly);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let got: Vec<String> = reader
        .headers()
        .map_err(|e| Error::parse("header", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if got != expected {
        return Err(Error::parse(
            "header",
            format!(
                "expected '{}', found '{}'",
                expected.join(","),
                got.join(",")
            ),
        ));
    }

    let n = assembly.len();
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let loc = format!("row {row}");
        let rec = rec.map_err(|e| Error::parse(loc.clone(), e.to_string()))?;
        let values = rec
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::parse(
                            loc.clone(),
                            format!("column '{}': bad number '{field}'", expected[c]),
                        )
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        let pressures = values[2..2 + n].to_vec();
        for (k, (&p, a)) in pressures.iter().zip(assembly.actuators()).enumerate() {
            check_pressure(k, p, a.design.p_max).map_err(|e| Error::AtRow {
                row,
                source: Box::new(e),
            })?;
        }
        out.push(MeasurementRecord {
            state: PlatformState::new(values[0], values[1]),
            pressures,
            wrench: values[2 + n..].to_vec(),
        });
    }
    Ok(out)
}

/// Serializes records in the CSV layout read by [`load_measurements`].
/// Numbers use the shortest representation that parses back exactly.
pub fn write_measurements(assembly: &Assembly, records: &[MeasurementRecord]) -> String {
    let mut out = header(assembly).join(",");
    out.push('\n');
    for r in records {
        let mut fields = vec![r.state.dl.to_string(), r.state.dphi.to_string()];
        fields.extend(r.pressures.iter().map(f64::to_string));
        fields.extend(r.wrench.iter().map(f64::to_string));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn same_state(a: PlatformState, b: PlatformState) -> bool {
    (a.dl - b.dl).abs() <= STATE_MATCH_TOL && (a.dphi - b.dphi).abs() <= STATE_MATCH_TOL
}

/// Replaces each measured wrench with its value minus the zero-pressure
/// measurement at the same state, isolating the pressure-driven part.
pub fn baseline_subtract(records: &[MeasurementRecord]) -> Result<Vec<MeasurementRecord>> {
    records
        .iter()
        .map(|r| {
            let base = records
                .iter()
                .find(|b| b.pressures.iter().all(|&p| p == 0.0) && same_state(b.state, r.state))
                .ok_or(Error::MissingBaseline {
                    dl: r.state.dl,
                    dphi: r.state.dphi,
                })?;
            if base.wrench.len() != r.wrench.len() {
                return Err(Error::DimensionMismatch {
                    expected: r.wrench.len(),
                    got: base.wrench.len(),
                });
            }
            Ok(MeasurementRecord {
                state: r.state,
                pressures: r.pressures.clone(),
                wrench: r
                    .wrench
                    .iter()
                    .zip(&base.wrench)
                    .map(|(m, b)| m - b)
                    .collect(),
            })
        })
        .collect()
}

/// Per-component RMSE and maximum absolute error of `predicted - measured`.
pub fn error_metrics(predicted: &[Vec<f64>], measured: &[Vec<f64>]) -> Result<ErrorReport> {
    if predicted.len() != measured.len() {
        return Err(Error::LengthMismatch {
            predicted: predicted.len(),
            measured: measured.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput("no evaluation points".into()));
    }
    let k = predicted[0].len();
    let mut sq = vec![0.0; k];
    let mut max_abs = vec![0.0f64; k];
    for (p, m) in predicted.iter().zip(measured) {
        for row in [p, m] {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
        }
        for c in 0..k {
            let e = p[c] - m[c];
            sq[c] += e * e;
            max_abs[c] = max_abs[c].max(e.abs());
        }
    }
    let count = predicted.len();
    Ok(ErrorReport {
        rmse: sq.iter().map(|s| (s / count as f64).sqrt()).collect(),
        max_abs,
        count,
    })
}

/// Model wrench at each record's state and pressures, in DOF order.
pub fn predict(assembly: &Assembly, records: &[MeasurementRecord]) -> Result<Vec<Vec<f64>>> {
    records
        .iter()
        .map(|r| {
            let w = assembly.net_wrench(r.state, &r.pressures)?;
            project_wrench(&w, assembly.dofs().components())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub active: Vec<MeasurementRecord>,
    pub predicted: Vec<Vec<f64>>,
    pub report: ErrorReport,
}

/// Baseline subtraction, model prediction and error metrics in one pass.
pub fn analyze(assembly: &Assembly, records: &[MeasurementRecord]) -> Result<Analysis> {
    let active = baseline_subtract(records)?;
    let predicted = predict(assembly, &active)?;
    let measured: Vec<Vec<f64>> = active.iter().map(|r| r.wrench.clone()).collect();
    let report = error_metrics(&predicted, &measured)?;
    Ok(Analysis {
        active,
        predicted,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::config::paper_rig;

    fn rec(dl: f64, p: [f64; 3], w: [f64; 2]) -> MeasurementRecord {
        MeasurementRecord {
            state: PlatformState::new(dl, 0.0),
            pressures: p.to_vec(),
            wrench: w.to_vec(),
        }
    }

    #[test]
    fn grid_shapes() {
        let rig = paper_rig().to_assembly().unwrap();
        let grid = pressure_grid(&rig, &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_eq!(grid.len(), 125);
        assert_eq!(grid[0], vec![0.0; 3]);
        assert_eq!(grid[1], vec![0.0, 0.0, 0.25 * rig.p_max()[2]]);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pressure_grid(&rig, &[0.0]).unwrap(), vec![vec![0.0; 3]]);
        assert!(pressure_grid(&rig, &[1.5]).is_err());
    }

    #[test]
    fn baseline() {
        let records = vec![
            rec(0.0, [0.0; 3], [1.0, 0.01]),
            rec(0.0, [1.0, 0.0, 0.0], [3.5, -0.02]),
            rec(0.005, [0.0; 3], [0.2, 0.0]),
        ];
        let active = baseline_subtract(&records).unwrap();
        assert_eq!(active[0].wrench, vec![0.0, 0.0]);
        assert_eq!(active[1].wrench, vec![2.5, -0.03]);
        assert_eq!(active[2].wrench, vec![0.0, 0.0]);
        assert_eq!(baseline_subtract(&active).unwrap(), active);

        let missing = vec![rec(0.0, [1.0, 0.0, 0.0], [3.5, -0.02])];
        assert!(matches!(
            baseline_subtract(&missing),
            Err(Error::MissingBaseline { .. })
        ));
    }

    #[test]
    fn metrics() {
        let pred = vec![vec![1.0, 0.0], vec![-2.0, 0.0]];
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        let r = error_metrics(&pred, &zero).unwrap();
        assert!((r.rmse[0] - 1.581_138_830_084_189_8).abs() < 1e-15);
        assert_eq!(r.max_abs[0], 2.0);
        assert_eq!(r.rmse[1], 0.0);
        assert_eq!(r.count, 2);
        let same = error_metrics(&zero, &zero).unwrap();
        assert_eq!(
            (same.rmse.clone(), same.max_abs.clone()),
            (vec![0.0; 2], vec![0.0; 2])
        );
        assert!(matches!(
            error_metrics(&pred, &zero[..1]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(error_metrics(&[], &[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn csv_errors_report_rows() {
        let rig = paper_rig().to_assembly().unwrap();
        let head = "dl_m,dphi_rad,p1_pa,p2_pa,p3_pa,Fz_N,Mz_Nm\n";
        let ok = format!("{head}0,0,0,0,0,0,0\n");
        assert_eq!(load_measurements(&ok, &rig).unwrap().len(), 1);

        let bad = format!("{head}0,0,0,0,0,0,0\n0,0,1.2.3,0,0,0,0\n");
        let err = load_measurements(&bad, &rig).unwrap_err();
        assert!(
            matches!(&err, Error::Parse { location, .. } if location == "row 2"),
            "{err}"
        );

        let over = format!("{head}0,0,0,200000,0,0,0\n");
        let err = load_measurements(&over, &rig).unwrap_err();
        assert!(
            matches!(&err, Error::AtRow { row: 1, source } if matches!(**source, Error::PressureLimit { index: 1, .. })),
            "{err}"
        );

        let wrong = "dl,dphi\n0,0\n";
        assert!(matches!(
            load_measurements(wrong, &rig),
            Err(Error::Parse { .. })
        ));
    }
}
