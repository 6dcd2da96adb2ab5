//! Experiment configuration: a TOML file mapped 1:1 onto [`FileConfig`],
//! resolved into an [`Experiment`] after applying command-line overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spatialdof::channel::GridSpec;
use spatialdof::intervals::IntervalSet;
use spatialdof::regions::{overlapped_geometry, NetworkGeometry};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Physical,
    #[value(name = "blockmodel")]
    Blockmodel,
    #[value(name = "formulas_only")]
    FormulasOnly,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::Blockmodel => "blockmodel",
            Mode::FormulasOnly => "formulas_only",
        }
    }

    pub fn simulates(&self) -> bool {
        !matches!(self, Mode::FormulasOnly)
    }

    pub fn default_leakage_floor_db(&self) -> f64 {
        match self {
            Mode::Physical => spatialdof::scheme::PHYSICAL_LEAKAGE_FLOOR_DB,
            _ => spatialdof::scheme::BLOCK_LEAKAGE_FLOOR_DB,
        }
    }
}

/// Closed-form scenario shorthand. `overlapped` places one interval of
/// measure `psi` shared by every path; `symmetric` places forward and
/// backward intervals of the given measures with the prescribed overlap.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    Overlapped { l_bs: f64, l_usr: f64, psi: f64 },
    Symmetric { l: f64, fwd: f64, back: f64, overlap: f64 },
}

impl Scenario {
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        let slot = match self {
            Scenario::Overlapped { l_bs, l_usr, psi } => match name {
                "l_bs" => l_bs,
                "l_usr" => l_usr,
                "psi" => psi,
                _ => {
                    return Err(CliError::config(format!(
                        "unknown sweep parameter {name:?} for the overlapped scenario \
                         (expected l_bs, l_usr, or psi)"
                    )))
                }
            },
            Scenario::Symmetric { l, fwd, back, overlap } => match name {
                "l" => l,
                "fwd" => fwd,
                "back" => back,
                "overlap" => overlap,
                _ => {
                    return Err(CliError::config(format!(
                        "unknown sweep parameter {name:?} for the symmetric scenario \
                         (expected l, fwd, back, or overlap)"
                    )))
                }
            },
        };
        *slot = value;
        Ok(())
    }

    pub fn geometry(&self) -> Result<NetworkGeometry, CliError> {
        match *self {
            Scenario::Overlapped { l_bs, l_usr, psi } => {
                if !(l_bs > 0.0 && l_usr > 0.0) {
                    return Err(CliError::config(format!(
                        "overlapped scenario needs positive array lengths, got l_bs = {l_bs}, \
                         l_usr = {l_usr}"
                    )));
                }
                if !(psi > 0.0 && psi <= 2.0) {
                    return Err(CliError::config(format!(
                        "overlapped scenario needs 0 < psi <= 2, got {psi}"
                    )));
                }
                let iv = IntervalSet::new(&[(-psi / 2.0, psi / 2.0)])
                    .map_err(|e| CliError::config(e.to_string()))?;
                Ok(overlapped_geometry(l_bs, l_usr, &iv))
            }
            Scenario::Symmetric { l, fwd, back, overlap } => {
                if !(l > 0.0) {
                    return Err(CliError::config(format!(
                        "symmetric scenario needs a positive array length, got l = {l}"
                    )));
                }
                if !(fwd > 0.0 && back > 0.0) {
                    return Err(CliError::config(format!(
                        "symmetric scenario needs positive interval measures, got fwd = {fwd}, \
                         back = {back}"
                    )));
                }
                if overlap < 0.0 || overlap > fwd.min(back) {
                    return Err(CliError::config(format!(
                        "symmetric overlap must lie in [0, min(fwd, back)], got {overlap}"
                    )));
                }
                let span = fwd + back - overlap;
                if span > 2.0 + 1e-12 {
                    return Err(CliError::config(format!(
                        "symmetric intervals of measures {fwd} and {back} with overlap \
                         {overlap} span {span}, which exceeds the wavevector domain"
                    )));
                }
                let start = -span / 2.0;
                let fwd_iv = IntervalSet::new(&[(start, start + fwd)])
                    .map_err(|e| CliError::config(e.to_string()))?;
                let back_lo = start + fwd - overlap;
                let back_iv = IntervalSet::new(&[(back_lo, back_lo + back)])
                    .map_err(|e| CliError::config(e.to_string()))?;
                Ok(spatialdof::regions::symmetric_geometry(l, &fwd_iv, &back_iv))
            }
        }
    }
}

/// Optional grid table; missing fields fall back to the library defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPatch {
    pub n_wavevector: Option<usize>,
    pub oversampling: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: String,
    pub values: Vec<f64>,
}

/// On-disk schema. Exactly one of `geometry` / `scenario` must be present.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Mode,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub leakage_floor_db: Option<f64>,
    pub geometry: Option<NetworkGeometry>,
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub grid: GridPatch,
    pub sweep: Option<SweepSpec>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Experiment description file (TOML).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Override the configured mode.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Replace the configured seed list with a single seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (defaults to the configured output_dir, then "out").
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Override the interference leakage floor in dB.
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    pub leakage_floor_db: Option<f64>,
    /// Override the aperture oversampling factor of the physical grid.
    #[arg(long, value_name = "X")]
    pub oversampling: Option<f64>,
    /// Override the number of wavevector samples of the physical grid.
    #[arg(long, value_name = "N")]
    pub grid_n: Option<usize>,
}

/// Fully resolved experiment. `geometry` is already realized from the
/// scenario shorthand when one was given.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub mode: Mode,
    pub output_dir: PathBuf,
    pub seeds: Vec<u64>,
    pub leakage_floor_db: f64,
    pub scenario: Option<Scenario>,
    pub geometry: NetworkGeometry,
    pub grid: GridSpec,
    pub sweep: Option<SweepSpec>,
}

pub fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!("cannot read config {}: {e}", path.display()))
    })?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Ok(file)
}

pub fn resolve(file: &FileConfig, overrides: &Overrides) -> Result<Experiment, CliError> {
    let mode = overrides.mode.unwrap_or(file.mode);
    let geometry = match (&file.geometry, &file.scenario) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "config must give either [geometry] or [scenario.*], not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "config must give a [geometry] table or a [scenario.*] shorthand".into(),
            ))
        }
        (Some(g), None) => {
            g.validate().map_err(|e| CliError::config(e.to_string()))?;
            g.clone()
        }
        (None, Some(s)) => s.geometry()?,
    };
    if let Some(sweep) = &file.sweep {
        if sweep.values.is_empty() {
            return Err(CliError::config("sweep values list is empty".into()));
        }
        if let Some(bad) = sweep.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::config(format!("sweep value {bad} is not finite")));
        }
    }
    let seeds = match overrides.seed {
        Some(seed) => vec![seed],
        None => file.seeds.clone(),
    };
    let defaults = GridSpec::default();
    let grid = GridSpec {
        n_wavevector: overrides
            .grid_n
            .or(file.grid.n_wavevector)
            .unwrap_or(defaults.n_wavevector),
        oversampling: overrides
            .oversampling
            .or(file.grid.oversampling)
            .unwrap_or(defaults.oversampling),
        seed: 0,
    };
    if grid.n_wavevector < 2 {
        return Err(CliError::config(format!(
            "grid needs at least 2 wavevector samples, got {}",
            grid.n_wavevector
        )));
    }
    if !(grid.oversampling >= 1.0) {
        return Err(CliError::config(format!(
            "grid oversampling must be at least 1, got {}",
            grid.oversampling
        )));
    }
    let leakage_floor_db = overrides
        .leakage_floor_db
        .or(file.leakage_floor_db)
        .unwrap_or_else(|| mode.default_leakage_floor_db());
    let output_dir = overrides
        .out
        .clone()
        .or_else(|| file.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok(Experiment {
        mode,
        output_dir,
        seeds,
        leakage_floor_db,
        scenario: file.scenario.clone(),
        geometry,
        grid,
        sweep: file.sweep.clone(),
    })
}

/// The experiment at one sweep point: the named parameter replaced by
/// `value` in the scenario (or, for raw geometries, in the half-lengths),
/// everything else untouched.
pub fn at_sweep_value(
    file: &FileConfig,
    overrides: &Overrides,
    name: &str,
    value: f64,
) -> Result<Experiment, CliError> {
    if !value.is_finite() {
        return Err(CliError::config(format!("sweep value {value} is not finite")));
    }
    let mut point = file.clone();
    match (&mut point.geometry, &mut point.scenario) {
        (_, Some(s)) => s.set(name, value)?,
        (Some(g), None) => {
            let slot = match name {
                "l_t1" => &mut g.l_t1,
                "l_r1" => &mut g.l_r1,
                "l_t2" => &mut g.l_t2,
                "l_r2" => &mut g.l_r2,
                _ => {
                    return Err(CliError::config(format!(
                        "unknown sweep parameter {name:?} for a raw geometry \
                         (expected one of l_t1, l_r1, l_t2, l_r2)"
                    )))
                }
            };
            *slot = value;
        }
        (None, None) => {
            return Err(CliError::config(
                "config must give a [geometry] table or a [scenario.*] shorthand".into(),
            ))
        }
    }
    point.sweep = None;
    resolve(&point, overrides)
}

/// Reference half-length for axis ticks: the scenario's array length when
/// one is known, otherwise none (plain numeric ticks).
pub fn tick_reference(scenario: Option<&Scenario>) -> Option<f64> {
    match scenario {
        Some(Scenario::Symmetric { l, .. }) => Some(*l),
        Some(Scenario::Overlapped { l_usr, .. }) => Some(*l_usr),
        None => None,
    }
}
