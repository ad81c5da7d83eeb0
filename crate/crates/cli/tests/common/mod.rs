#![allow(dead_code)]

use std::path::Path;

use fluidjac::io::{paper_rig, pressure_grid, write_measurements, MeasurementRecord};
use fluidjac::{project_wrench, PlatformState};

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI in-process. `{dir}` in any argument is replaced by `dir`.
pub fn invoke(args: &[&str], dir: &Path) -> Outcome {
    let argv: Vec<String> = std::iter::once("fluidjac".to_string())
        .chain(
            args.iter()
                .map(|a| a.replace("{dir}", &dir.display().to_string())),
        )
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fluidjac_cli::run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Model-generated records over `states`, optionally offset per row.
pub fn synthetic_records(
    states: &[PlatformState],
    levels: &[f64],
    mut offset: impl FnMut(usize, &MeasurementRecord) -> [f64; 2],
) -> Vec<MeasurementRecord> {
    let rig = paper_rig().to_assembly().unwrap();
    let grid = pressure_grid(&rig, levels).unwrap();
    let mut out = Vec::new();
    for &state in states {
        for p in &grid {
            let w = rig.net_wrench(state, p).unwrap();
            out.push(MeasurementRecord {
                state,
                pressures: p.clone(),
                wrench: project_wrench(&w, rig.dofs().components()).unwrap(),
            });
        }
    }
    for (i, r) in out.iter_mut().enumerate() {
        let o = offset(i, r);
        r.wrench[0] += o[0];
        r.wrench[1] += o[1];
    }
    out
}

pub fn write_dataset(path: &Path, records: &[MeasurementRecord]) {
    let rig = paper_rig().to_assembly().unwrap();
    std::fs::write(path, write_measurements(&rig, records)).unwrap();
}

/// Small deterministic dataset with an elastic offset and a model mismatch.
pub fn golden_dataset(dir: &Path) {
    let states = [PlatformState::ORIGIN, PlatformState::new(0.004, 0.1)];
    let records = synthetic_records(&states, &[0.0, 0.5, 1.0], |i, r| {
        let elastic = [2.0 + 50.0 * r.state.dl, 0.01 * r.state.dphi];
        if r.pressures.iter().all(|&p| p == 0.0) {
            elastic
        } else {
            let wobble = (i as f64 * 0.7).sin();
            [elastic[0] + 0.25 * wobble, elastic[1] + 1e-3 * wobble]
        }
    });
    write_dataset(&dir.join("data.csv"), &records);
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// File the command writes inside `{dir}`, compared alongside stdout.
    pub output: Option<&'static str>,
    pub needs_data: bool,
}

pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase {
        name: "describe",
        args: &["describe", "--config", "paper_rig"],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "jacobian",
        args: &[
            "jacobian",
            "--config",
            "paper_rig",
            "--state",
            "0.002,-0.05",
        ],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "wrench_zero",
        args: &[
            "wrench",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--pressures",
            "0,0,0",
        ],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "wrench_full",
        args: &[
            "wrench",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--pressures",
            "103400,103400,103400",
        ],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "zonotope_csv",
        args: &[
            "zonotope",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--dofs",
            "Fz,Mz",
            "--out",
            "{dir}/zonotope.csv",
        ],
        output: Some("zonotope.csv"),
        needs_data: false,
    },
    GoldenCase {
        name: "zonotope_svg",
        args: &[
            "zonotope",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--dofs",
            "Fz,Mz",
            "--out",
            "{dir}/zonotope.svg",
        ],
        output: Some("zonotope.svg"),
        needs_data: false,
    },
    GoldenCase {
        name: "sweep",
        args: &[
            "sweep",
            "--config",
            "paper_rig",
            "--grid",
            "dl=-0.02:0.01:31,dphi=-0.3:0.3:5",
            "--out",
            "{dir}/sweep.csv",
        ],
        output: Some("sweep.csv"),
        needs_data: false,
    },
    GoldenCase {
        name: "solve_infeasible",
        args: &[
            "solve",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--target",
            "20,0",
        ],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "solve_feasible",
        args: &[
            "solve",
            "--config",
            "paper_rig",
            "--state",
            "0,0",
            "--target",
            "-3,0.02",
            "--tol",
            "1e-9",
        ],
        output: None,
        needs_data: false,
    },
    GoldenCase {
        name: "analyze",
        args: &[
            "analyze",
            "--config",
            "paper_rig",
            "--data",
            "{dir}/data.csv",
            "--out",
            "{dir}/errors.csv",
        ],
        output: Some("errors.csv"),
        needs_data: true,
    },
];

/// Runs one golden case in `dir`, returning stdout and the written file.
pub fn run_golden(case: &GoldenCase, dir: &Path) -> (String, Option<Vec<u8>>) {
    if case.needs_data {
        golden_dataset(dir);
    }
    let o = invoke(case.args, dir);
    assert_eq!(o.code, 0, "{}: {}", case.name, o.stderr);
    let file = case.output.map(|f| std::fs::read(dir.join(f)).unwrap());
    (o.stdout, file)
}

pub fn golden_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}
