//! Command-line front end.
//!
//! [`run`] takes the full argument vector and writes to the given streams, so
//! the binary and the tests share one code path. Exit status is 0 on success,
//! 2 for invalid input and 3 for file-system failures.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fluidjac::io::{
    self, error_report_csv, export_zonotope, load_measurements, sweep_csv, ExportFormat, RigConfig,
};
use fluidjac::{
    force_zonotope, project_wrench, solve_pressures, workspace_sweep, Assembly, DofSelection,
    Error, GridSpec, PlatformState, Result, SweepAxis,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fluidjac",
    version,
    about = "Fluid Jacobian and force zonotope analysis of FREE actuator rigs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RigArgs {
    /// Rig config file, or the built-in name `paper_rig`.
    #[arg(long)]
    config: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the FREEs, their derived geometry and placements.
    Describe {
        #[command(flatten)]
        rig: RigArgs,
    },
    /// Print fluid Jacobian rows at a platform state.
    Jacobian {
        #[command(flatten)]
        rig: RigArgs,
        /// Platform state `dl,dphi` in m and rad.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Wrench components, e.g. `Fz,Mz`. Defaults to the config's.
        #[arg(long)]
        dofs: Option<String>,
    },
    /// Net wrench for given pressures.
    Wrench {
        #[command(flatten)]
        rig: RigArgs,
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// One pressure per FREE in Pa, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        pressures: String,
        #[arg(long)]
        dofs: Option<String>,
    },
    /// Write the force zonotope as CSV, or SVG when FILE ends in `.svg`.
    Zonotope {
        #[command(flatten)]
        rig: RigArgs,
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long)]
        dofs: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Evaluate the zonotope over a state grid and report collapses.
    Sweep {
        #[command(flatten)]
        rig: RigArgs,
        /// `dl=a:b:n,dphi=c:d:m`; an omitted axis is held at zero.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        dofs: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Pressures producing a target wrench, or the closest attainable one.
    Solve {
        #[command(flatten)]
        rig: RigArgs,
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Target wrench in DOF order, comma separated SI values.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        dofs: Option<String>,
        /// Relative residual accepted as feasible.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Compare a measured dataset with the model.
    Analyze {
        #[command(flatten)]
        rig: RigArgs,
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(stderr, "error: UsageError: {first}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error: {line}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_USAGE
            }
        }
    }
}

/// Formats with 6 significant digits, `%g` style, printing `0` for either zero.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    location: format!("--{flag}"),
                    message: format!("bad number '{}'", f.trim()),
                })
        })
        .collect()
}

fn parse_state(text: &str) -> Result<PlatformState> {
    match parse_list("state", text)?.as_slice() {
        &[dl, dphi] => Ok(PlatformState::new(dl, dphi)),
        other => Err(Error::Parse {
            location: "--state".into(),
            message: format!("expected 'dl,dphi', got {} values", other.len()),
        }),
    }
}

fn load_config(spec: &str) -> Result<RigConfig> {
    let path = Path::new(spec);
    if !path.exists() && spec == io::PAPER_RIG_NAME {
        return Ok(io::paper_rig());
    }
    let text = read(path)?;
    io::parse_config(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{spec}: {location}"),
            message,
        },
        Error::Validation(m) => Error::Validation(format!("{spec}: {m}")),
        other => other,
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn rig_with_dofs(rig: &RigArgs, dofs: Option<&str>) -> Result<Assembly> {
    let assembly = load_config(&rig.config)?.to_assembly()?;
    Ok(match dofs {
        Some(list) => {
            let sel = DofSelection::parse_list(list).map_err(|e| Error::Parse {
                location: "--dofs".into(),
                message: e.to_string(),
            })?;
            assembly.with_dofs(sel)
        }
        None => assembly,
    })
}

fn labelled(dofs: &DofSelection, values: &[f64]) -> String {
    dofs.components()
        .iter()
        .zip(values)
        .map(|(c, v)| format!("{}={}", c.name(), fmt_num(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn joined(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_num(*v))
        .collect::<Vec<_>>()
        .join(",")
}

fn execute(command: Command) -> Result<String> {
    let mut out = String::new();
    match command {
        Command::Describe { rig } => {
            let config = load_config(&rig.config)?;
            let assembly = config.to_assembly()?;
            let _ = writeln!(
                out,
                "frees={} dofs={} kinematic_map={}",
                assembly.len(),
                config.platform.dofs.join(","),
                assembly.kinematics().name()
            );
            for a in assembly.actuators() {
                let d = &a.design;
                let g = d.derived();
                let p = &a.placement;
                let _ = writeln!(
                    out,
                    "{}: L={} R={} angle_deg={} p_max={} B={} N={} d=[{}] axis=[{}]",
                    d.name,
                    fmt_num(d.length),
                    fmt_num(d.radius),
                    fmt_num(d.fiber_angle.to_degrees()),
                    fmt_num(d.p_max),
                    fmt_num(g.fiber_length),
                    fmt_num(g.revolutions),
                    joined(p.attachment.as_slice()),
                    joined(p.axis.as_slice()),
                );
            }
        }
        Command::Jacobian { rig, state, dofs } => {
            let assembly = rig_with_dofs(&rig, dofs.as_deref())?;
            let state = parse_state(&state)?;
            let qs = assembly.map_platform_state(state)?;
            let jx = assembly
                .assembly_jacobian(state)?
                .projected(assembly.dofs());
            for (i, (a, q)) in assembly.actuators().iter().zip(qs).enumerate() {
                let j = a.design.fluid_jacobian(q)?;
                let row: Vec<f64> = jx.row(i).iter().copied().collect();
                let _ = writeln!(
                    out,
                    "{}: dV_dl={} dV_dphi={} {}",
                    a.design.name,
                    fmt_num(j.dv_dl),
                    fmt_num(j.dv_dphi),
                    labelled(assembly.dofs(), &row)
                );
            }
        }
        Command::Wrench {
            rig,
            state,
            pressures,
            dofs,
        } => {
            let assembly = rig_with_dofs(&rig, dofs.as_deref())?;
            let state = parse_state(&state)?;
            let p = parse_list("pressures", &pressures)?;
            let w = assembly.net_wrench(state, &p)?;
            let values = project_wrench(&w, assembly.dofs().components())?;
            let _ = writeln!(out, "{}", labelled(assembly.dofs(), &values));
        }
        Command::Zonotope {
            rig,
            state,
            dofs,
            out: path,
        } => {
            let assembly = rig_with_dofs(&rig, dofs.as_deref())?;
            let state = parse_state(&state)?;
            let z = force_zonotope(&assembly, state, assembly.dofs())?;
            export_zonotope(&z, ExportFormat::from_path(&path), &path)?;
            let measure = z.measure().map(fmt_num).unwrap_or_else(|_| "n/a".into());
            let _ = writeln!(
                out,
                "vertices={} measure={} full_authority={}",
                z.vertices().len(),
                measure,
                z.has_full_authority()
            );
        }
        Command::Sweep {
            rig,
            grid,
            dofs,
            out: path,
        } => {
            let assembly = rig_with_dofs(&rig, dofs.as_deref())?;
            let grid: GridSpec = grid.parse()?;
            let report = workspace_sweep(&assembly, &grid, assembly.dofs())?;
            write(&path, &sweep_csv(&report))?;
            let invalid = report
                .points
                .iter()
                .filter(|p| p.sample().is_none())
                .count();
            let collapsed = report.points.iter().filter(|p| p.collapsed()).count();
            let _ = writeln!(
                out,
                "states={} invalid={} collapsed={}",
                report.points.len(),
                invalid,
                collapsed
            );
            for c in &report.collapses {
                let other = match c.axis {
                    SweepAxis::Dl => "dphi",
                    SweepAxis::Dphi => "dl",
                };
                let _ = writeln!(
                    out,
                    "collapse axis={} {}={} direction={} boundary={}",
                    c.axis,
                    other,
                    fmt_num(c.fixed),
                    c.direction,
                    fmt_num(c.boundary)
                );
            }
        }
        Command::Solve {
            rig,
            state,
            target,
            dofs,
            tol,
        } => {
            let assembly = rig_with_dofs(&rig, dofs.as_deref())?;
            let state = parse_state(&state)?;
            let target = parse_list("target", &target)?;
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::Parse {
                    location: "--tol".into(),
                    message: format!("tolerance must be nonnegative, got {tol}"),
                });
            }
            let sol = solve_pressures(&assembly, state, assembly.dofs(), &target, tol)?;
            let _ = writeln!(
                out,
                "feasible={} residual={}",
                sol.feasible,
                fmt_num(sol.residual)
            );
            let _ = writeln!(out, "pressures={}", joined(&sol.pressures));
            let _ = writeln!(out, "achieved {}", labelled(assembly.dofs(), &sol.achieved));
        }
        Command::Analyze {
            rig,
            data,
            out: path,
        } => {
            let assembly = rig_with_dofs(&rig, None)?;
            let text = read(&data)?;
            let records = load_measurements(&text, &assembly)?;
            let analysis = io::analyze(&assembly, &records)?;
            let report = &analysis.report;
            write(&path, &error_report_csv(report, assembly.dofs()))?;
            let _ = writeln!(out, "records={}", report.count);
            for (i, c) in assembly.dofs().components().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{}: rmse={} {} max={} {}",
                    c.name(),
                    fmt_num(report.rmse[i]),
                    c.unit(),
                    fmt_num(report.max_abs[i]),
                    c.unit()
                );
            }
        }
    }
    Ok(out)
}
