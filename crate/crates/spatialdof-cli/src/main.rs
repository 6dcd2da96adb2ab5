//! Batch experiment runner: computes degrees-of-freedom regions and corner
//! points, simulates the corner-achieving transmission scheme, sweeps
//! scenario parameters, and cross-checks the finite-antenna reference
//! formula. See README for the config format.

mod config;
mod outputs;
mod svg;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use spatialdof::regions::{
    corner_points, fd_region, hd_region, mimo_ic_dof, overlapped_scenario, symmetric_scenario,
    NetworkGeometry,
};
use spatialdof::channel::ChannelError;
use spatialdof::scheme::{achieve_corner_with_floor, Corner, RunMode, SchemeError};

use config::{Experiment, Mode, Overrides, Scenario};
use outputs::{RegionBounds, RegionReport, RunRow, ScenarioReport, SweepPoint, SweepReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Threshold(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    fn infeasible(msg: String) -> Self {
        CliError::Infeasible(msg)
    }

    fn io(msg: String) -> Self {
        CliError::Io(msg)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Threshold(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spatialdof",
    about = "Spatial degrees-of-freedom laboratory for a full-duplex base station",
    long_about = "Computes achievable degrees-of-freedom regions of a full-duplex \
                  base station serving one uplink and one downlink flow, verifies \
                  the corner-achieving transmission scheme in a block model or on \
                  sampled array kernels, and renders region plots.\n\n\
                  Experiments are described by a TOML file (see --help of each \
                  subcommand and the README): top-level keys mode, seeds, \
                  output_dir, leakage_floor_db; exactly one of a [geometry] table \
                  (half-lengths l_t1/l_r1/l_t2/l_r2 plus interval lists psi_t11, \
                  psi_r11, psi_t22, psi_r22, psi_t12, psi_r12) or a shorthand \
                  [scenario.overlapped] {l_bs, l_usr, psi} / [scenario.symmetric] \
                  {l, fwd, back, overlap}; optional [grid] {n_wavevector, \
                  oversampling} and [sweep] {name, values}."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the region and write region.json plus region.svg.
    Region(Overrides),
    /// Compute the two corner points and write corners.json.
    Corners(Overrides),
    /// Run the corner-achieving scheme per seed; write runs.csv and summary.json.
    Simulate(Overrides),
    /// Re-run region (and simulation, unless formulas_only) per sweep value;
    /// write per-value directories plus overlay.svg and sweep.json.
    Sweep(Overrides),
    /// Evaluate the finite-antenna interference-channel formula and its
    /// fully overlapped continuous analogue.
    MimoCheck {
        m1: usize,
        n1: usize,
        m2: usize,
        n2: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Region(ov) => cmd_region(ov),
        Command::Corners(ov) => cmd_corners(ov),
        Command::Simulate(ov) => cmd_simulate(ov),
        Command::Sweep(ov) => cmd_sweep(ov),
        Command::MimoCheck { m1, n1, m2, n2 } => cmd_mimo_check(*m1, *n1, *m2, *n2),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn scenario_report(scenario: Option<&Scenario>) -> Result<Option<ScenarioReport>, CliError> {
    match scenario {
        None => Ok(None),
        Some(&Scenario::Overlapped { l_bs, l_usr, psi }) => {
            let s = overlapped_scenario(l_bs, l_usr, psi)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Some(ScenarioReport::Overlapped {
                l_bs,
                l_usr,
                psi,
                hd_sum: s.hd_sum,
                fd_beats_hd: s.fd_beats_hd,
            }))
        }
        Some(&Scenario::Symmetric { l, fwd, back, overlap }) => {
            let s = symmetric_scenario(l, fwd, back, overlap)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Some(ScenarioReport::Symmetric {
                l,
                fwd,
                back,
                overlap,
                hd_sum: s.hd_sum,
                hd_equals_fd: s.hd_equals_fd,
            }))
        }
    }
}

fn hd_endpoints(g: &NetworkGeometry) -> Result<[(f64, f64); 2], CliError> {
    let p1 = hd_region(g, 1.0).map_err(|e| CliError::config(e.to_string()))?;
    let p2 = hd_region(g, 0.0).map_err(|e| CliError::config(e.to_string()))?;
    Ok([p1, p2])
}

fn region_report(exp: &Experiment) -> Result<RegionReport, CliError> {
    let region = fd_region(&exp.geometry);
    Ok(RegionReport {
        bounds: RegionBounds::of(&region),
        vertices: region.vertices.clone(),
        hd_endpoints: hd_endpoints(&exp.geometry)?,
        scenario: scenario_report(exp.scenario.as_ref())?,
        geometry: exp.geometry.clone(),
    })
}

/// Writes region.json and region.svg for one experiment into `dir`.
fn write_region_files(exp: &Experiment, dir: &Path) -> Result<RegionReport, CliError> {
    let report = region_report(exp)?;
    outputs::write_json(dir, "region.json", &report)?;
    let curve = svg::Curve {
        label: None,
        color: svg::color(0),
        region: fd_region(&exp.geometry),
        hd_line: (report.hd_endpoints[0], report.hd_endpoints[1]),
    };
    let image = svg::render(
        std::slice::from_ref(&curve),
        config::tick_reference(exp.scenario.as_ref()),
    );
    outputs::write_atomic(dir, "region.svg", image.as_bytes())?;
    Ok(report)
}

fn cmd_region(overrides: &Overrides) -> Result<(), CliError> {
    let file = config::load(&overrides.config)?;
    let exp = config::resolve(&file, overrides)?;
    let report = write_region_files(&exp, &exp.output_dir)?;
    println!(
        "region: d1_max = {}, d2_max = {}, d_sum_max = {}, vertices = {:?}",
        report.bounds.d1_max, report.bounds.d2_max, report.bounds.d_sum_max, report.vertices
    );
    println!("wrote {}", exp.output_dir.join("region.json").display());
    println!("wrote {}", exp.output_dir.join("region.svg").display());
    Ok(())
}

fn cmd_corners(overrides: &Overrides) -> Result<(), CliError> {
    let file = config::load(&overrides.config)?;
    let exp = config::resolve(&file, overrides)?;
    let corners = corner_points(&exp.geometry);
    let report = outputs::CornerReport::of(&corners);
    outputs::write_json(&exp.output_dir, "corners.json", &report)?;
    println!(
        "corner points: prime = ({}, {}), double prime = ({}, {})",
        corners.p_prime.0, corners.p_prime.1, corners.p_double_prime.0, corners.p_double_prime.1
    );
    println!(
        "interference budget: d_t2 = {}, delta_t2 = {}, d_r1 = {}, delta_r1 = {}",
        corners.d_t2, corners.delta_t2, corners.d_r1, corners.delta_r1
    );
    println!("wrote {}", exp.output_dir.join("corners.json").display());
    Ok(())
}

/// Runs both corners for every seed. Returns the rows sorted by seed and
/// corner so output files do not depend on scheduling.
fn simulate_rows(exp: &Experiment) -> Result<Vec<RunRow>, CliError> {
    let mode_name = exp.mode.name();
    let exact = matches!(exp.mode, Mode::Blockmodel);
    let jobs: Vec<(u64, Corner)> = exp
        .seeds
        .iter()
        .flat_map(|&s| [(s, Corner::Prime), (s, Corner::DoublePrime)])
        .collect();
    let rows: Result<Vec<RunRow>, CliError> = jobs
        .par_iter()
        .map(|&(seed, corner)| {
            let run_mode = match exp.mode {
                Mode::Blockmodel => RunMode::Block { seed },
                Mode::Physical => RunMode::Physical {
                    grid: spatialdof::channel::GridSpec { seed, ..exp.grid.clone() },
                },
                Mode::FormulasOnly => unreachable!("guarded by the caller"),
            };
            let run =
                achieve_corner_with_floor(&exp.geometry, corner, &run_mode, exp.leakage_floor_db)
                    .map_err(|e| match e {
                        SchemeError::NonIntegerCorner { .. } => CliError::infeasible(e.to_string()),
                        SchemeError::Channel(ChannelError::NonIntegerDimension { .. }) => {
                            CliError::infeasible(e.to_string())
                        }
                        other => CliError::Threshold(other.to_string()),
                    })?;
            Ok(RunRow::new(seed, mode_name, &run, exp.leakage_floor_db, exact))
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by_key(|r| (r.seed, r.corner != Corner::Prime));
    Ok(rows)
}

/// Simulation for one experiment, files written into `dir`. Distinguishes
/// threshold failure (files written, error returned) from infeasibility.
fn simulate_into(exp: &Experiment, dir: &Path) -> Result<(), CliError> {
    if !exp.mode.simulates() {
        return Err(CliError::config(
            "simulate needs mode = \"physical\" or \"blockmodel\"".into(),
        ));
    }
    if exp.seeds.is_empty() {
        return Err(CliError::config("no seeds".into()));
    }
    let rows = simulate_rows(exp)?;
    let region = fd_region(&exp.geometry);
    let summary =
        outputs::summarize(exp.mode.name(), exp.leakage_floor_db, &exp.seeds, &region, &rows);
    outputs::write_atomic(dir, "runs.csv", outputs::runs_csv(&rows).as_bytes())?;
    outputs::write_json(dir, "summary.json", &summary)?;
    if !summary.all_within_tolerance {
        return Err(CliError::Threshold(format!(
            "{} of {} runs missed the corner or the leakage floor (see {})",
            summary.failures.len(),
            summary.runs,
            dir.join("summary.json").display()
        )));
    }
    Ok(())
}

fn cmd_simulate(overrides: &Overrides) -> Result<(), CliError> {
    let file = config::load(&overrides.config)?;
    let exp = config::resolve(&file, overrides)?;
    simulate_into(&exp, &exp.output_dir)?;
    println!(
        "simulated {} runs ({} seeds, both corners) in {} mode",
        exp.seeds.len() * 2,
        exp.seeds.len(),
        exp.mode.name()
    );
    println!("wrote {}", exp.output_dir.join("runs.csv").display());
    println!("wrote {}", exp.output_dir.join("summary.json").display());
    Ok(())
}

fn format_value(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v}")
    }
}

fn cmd_sweep(overrides: &Overrides) -> Result<(), CliError> {
    let file = config::load(&overrides.config)?;
    let base = config::resolve(&file, overrides)?;
    let sweep = base
        .sweep
        .clone()
        .ok_or_else(|| CliError::config("sweep requires a [sweep] table in the config".into()))?;

    struct PointOutcome {
        value: f64,
        dir_name: String,
        experiment: Option<Experiment>,
        report: Option<RegionReport>,
        simulated: Option<bool>,
        error: Option<CliError>,
    }

    let outcomes: Vec<PointOutcome> = sweep
        .values
        .par_iter()
        .map(|&value| {
            let dir_name = format!("{}={}", sweep.name, format_value(value));
            let mut outcome = PointOutcome {
                value,
                dir_name: dir_name.clone(),
                experiment: None,
                report: None,
                simulated: None,
                error: None,
            };
            let exp = match config::at_sweep_value(&file, overrides, &sweep.name, value) {
                Ok(exp) => exp,
                Err(e) => {
                    outcome.error = Some(e);
                    return outcome;
                }
            };
            let dir = base.output_dir.join(&dir_name);
            match write_region_files(&exp, &dir) {
                Ok(report) => outcome.report = Some(report),
                Err(e) => {
                    outcome.error = Some(e);
                    return outcome;
                }
            }
            if exp.mode.simulates() {
                match simulate_into(&exp, &dir) {
                    Ok(()) => outcome.simulated = Some(true),
                    Err(e) => {
                        outcome.simulated = Some(false);
                        outcome.error = Some(e);
                    }
                }
            }
            outcome.experiment = Some(exp);
            outcome
        })
        .collect();

    // Overlay of every region that was computed, in sweep order.
    let curves: Vec<svg::Curve> = outcomes
        .iter()
        .filter_map(|o| {
            let report = o.report.as_ref()?;
            Some(svg::Curve {
                label: Some(format!("{} = {}", sweep.name, format_value(o.value))),
                color: "",
                region: spatialdof::regions::DofRegion::from_bounds(
                    report.bounds.d1_max,
                    report.bounds.d2_max,
                    report.bounds.d_sum_max,
                ),
                hd_line: (report.hd_endpoints[0], report.hd_endpoints[1]),
            })
        })
        .enumerate()
        .map(|(i, mut c)| {
            c.color = svg::color(i);
            c
        })
        .collect();
    if !curves.is_empty() {
        let tick_ref = config::tick_reference(base.scenario.as_ref());
        let image = svg::render(&curves, tick_ref);
        outputs::write_atomic(&base.output_dir, "overlay.svg", image.as_bytes())?;
    }

    let report = SweepReport {
        parameter: sweep.name.clone(),
        points: outcomes
            .iter()
            .map(|o| SweepPoint {
                value: o.value,
                dir: o.dir_name.clone(),
                bounds: o.report.as_ref().map(|r| r.bounds.clone()),
                simulated: o.simulated,
                error: o.error.as_ref().map(|e| e.to_string()),
            })
            .collect(),
    };
    outputs::write_json(&base.output_dir, "sweep.json", &report)?;

    for point in &report.points {
        match &point.error {
            None => println!("{}: ok", point.dir),
            Some(msg) => println!("{}: {msg}", point.dir),
        }
    }
    println!("wrote {}", base.output_dir.join("overlay.svg").display());
    println!("wrote {}", base.output_dir.join("sweep.json").display());

    // Per-point failures do not abort the sweep, but if nothing succeeded
    // the whole invocation failed; otherwise surface the worst error class.
    let succeeded = outcomes.iter().filter(|o| o.error.is_none()).count();
    if succeeded == 0 {
        let first = outcomes
            .into_iter()
            .find_map(|o| o.error)
            .unwrap_or_else(|| CliError::config("sweep produced no points".into()));
        return Err(first);
    }
    Ok(())
}

fn cmd_mimo_check(m1: usize, n1: usize, m2: usize, n2: usize) -> Result<(), CliError> {
    let dof = mimo_ic_dof(m1, n1, m2, n2);
    println!("mimo-ic dof (m1={m1}, n1={n1}, m2={m2}, n2={n2}): {dof}");
    if [m1, n1, m2, n2].iter().any(|&c| c == 0) {
        println!("fully overlapped analogue: skipped (needs every antenna count positive)");
        return Ok(());
    }
    // Continuous analogue: every node fully scattered over one shared
    // interval of unit measure, half-lengths chosen so 2L matches the
    // antenna count.
    let iv = spatialdof::intervals::IntervalSet::segment(0.0, 1.0);
    let analogue = NetworkGeometry {
        l_t1: m1 as f64 / 2.0,
        l_r1: n1 as f64 / 2.0,
        l_t2: m2 as f64 / 2.0,
        l_r2: n2 as f64 / 2.0,
        psi_t11: iv.clone(),
        psi_r11: iv.clone(),
        psi_t22: iv.clone(),
        psi_r22: iv.clone(),
        psi_t12: iv.clone(),
        psi_r12: iv,
    };
    let region = fd_region(&analogue);
    println!(
        "fully overlapped analogue: d1_max = {}, d2_max = {}, d_sum_max = {}",
        format_value(region.d1_max),
        format_value(region.d2_max),
        format_value(region.d_sum_max)
    );
    Ok(())
}
