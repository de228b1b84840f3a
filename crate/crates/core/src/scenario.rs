//! Scenario configs, time sweeps and CSV/JSON emission.
//!
//! A config names one of three interaction families, the correlated thermal
//! state it acts on and a uniform time grid. Only the products `g·t` and
//! `β·ω` enter the physics, so a config in `ev_seconds` (energies in eV,
//! `g` in rad/s, `t` in s) is evaluated as is; the unit tag matters only for
//! conversion.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contextuality::{
    find_critical_times, nc_bound_theorem1, pd_nonresonant, pd_partial_swap, resonant_bound, CriticalTimes,
    NcBound,
};
use crate::dynamics::{NonResonantInteraction, PartialSwapInteraction, Propagator, ResonantInteraction};
use crate::error::{Error, Result};
use crate::linalg::{HermitianOp, UnitaryOp, ZERO};
use crate::states::{
    qutrit_local_hamiltonian, two_qubit_thermal, two_qutrit_thermal, von_neumann_entropy, DensityMatrix,
    TwoQubitThermalParams, TwoQutritThermalParams,
};
use crate::thermo::{energy_change, heat_closed_form_2qubit, heat_closed_form_qutrit, lift_a};

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;
/// Relative tolerance of the violation flag, scaled by `a_max`.
pub const VIOLATION_TOL: f64 = 1e-12;
/// Closed-form versus trace agreement required on sampled grid points,
/// relative to `a_max`.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    TwoQubitResonant,
    TwoQubitNonresonant,
    QutritPartialSwap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// `ħ = 1`: `g` in energy units, `t` in inverse energy.
    #[default]
    Natural,
    /// Energies in eV, `g` in rad/s, `t` in s.
    #[serde(rename = "eV_seconds", alias = "ev_seconds")]
    EvSeconds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Initial state. Give each subsystem either a temperature (energy units)
/// or an inverse temperature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateConfig {
    TwoQubit {
        omega: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_b: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        temperature_a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        temperature_b: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta_a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta_b: Option<f64>,
        #[serde(default)]
        nu0: f64,
        #[serde(default)]
        nu1: Complex64,
        #[serde(default)]
        nu2: Complex64,
        #[serde(default)]
        gamma: Complex64,
        #[serde(default)]
        eta: f64,
        #[serde(default)]
        xi: f64,
    },
    TwoQutrit {
        omegas: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        temperature_a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        temperature_b: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta_a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta_b: Option<f64>,
        #[serde(default)]
        eta31: f64,
        #[serde(default)]
        eta62: f64,
        #[serde(default)]
        eta75: f64,
        #[serde(default)]
        theta31: f64,
        #[serde(default)]
        theta62: f64,
        #[serde(default)]
        theta75: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionConfig {
    pub g: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    #[serde(default)]
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn step(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_points - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.n_points).map(|k| self.t_min + k as f64 * step).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_check_fraction() -> f64 {
    0.01
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub units: Units,
    pub state: StateConfig,
    pub interaction: InteractionConfig,
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    /// Fraction of grid points re-evaluated with the trace formula.
    #[serde(default = "default_check_fraction")]
    pub check_fraction: f64,
}

fn resolve_beta(field: &str, temperature: Option<f64>, beta: Option<f64>) -> Result<f64> {
    match (temperature, beta) {
        (Some(_), Some(_)) => Err(Error::config(field, "give either a temperature or a beta, not both")),
        (None, None) => Err(Error::config(field, "missing temperature or beta")),
        (Some(t), None) if t.is_finite() && t > 0.0 => Ok(1.0 / t),
        (Some(t), None) => Err(Error::config(field, format!("temperature must be positive, got {t}"))),
        (None, Some(b)) if b.is_finite() && b >= 0.0 => Ok(b),
        (None, Some(b)) => Err(Error::config(field, format!("beta must be finite and ≥ 0, got {b}"))),
    }
}

/// Validated, ready-to-run form of a config.
#[derive(Clone, Debug)]
pub enum Prepared {
    Qubits { params: TwoQubitThermalParams, rho: DensityMatrix },
    Qutrits { params: TwoQutritThermalParams, rho: DensityMatrix },
}

impl ScenarioConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(s).map_err(|e| Error::Format { path: PathBuf::from("<config>"), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Format { path: path.to_owned(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.time_grid;
        if !(g.t_min.is_finite() && g.t_min >= 0.0) {
            return Err(Error::config("time_grid.t_min", format!("must be ≥ 0, got {}", g.t_min)));
        }
        if !(g.t_max.is_finite() && g.t_max > g.t_min) {
            return Err(Error::config("time_grid.t_max", format!("must exceed t_min, got {}", g.t_max)));
        }
        if g.n_points < 2 {
            return Err(Error::config("time_grid.n_points", format!("must be ≥ 2, got {}", g.n_points)));
        }
        let i = &self.interaction;
        if !(i.g.is_finite() && i.g > 0.0) {
            return Err(Error::config("interaction.g", format!("must be positive, got {}", i.g)));
        }
        if !(i.a.is_finite() && i.theta.is_finite()) {
            return Err(Error::config("interaction", "a and theta must be finite"));
        }
        if !(0.0..=1.0).contains(&self.check_fraction) {
            return Err(Error::config("check_fraction", format!("must lie in [0, 1], got {}", self.check_fraction)));
        }
        match (&self.scenario, &self.state) {
            (ScenarioKind::QutritPartialSwap, StateConfig::TwoQutrit { .. }) => {}
            (ScenarioKind::TwoQubitResonant, StateConfig::TwoQubit { omega, omega_b, .. }) => {
                if omega_b.is_some_and(|b| b != *omega) {
                    return Err(Error::config("state.omega_b", "resonant qubits need omega_b = omega"));
                }
            }
            (ScenarioKind::TwoQubitNonresonant, StateConfig::TwoQubit { omega, omega_b, .. }) => {
                if omega_b.is_none_or(|b| b == *omega) {
                    return Err(Error::config("state.omega_b", "non-resonant qubits need omega_b ≠ omega"));
                }
            }
            _ => return Err(Error::config("state.kind", "state kind does not match the scenario")),
        }
        Ok(())
    }

    /// Builds the initial state; state-level failures become config errors.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let as_config = |e: Error| match e {
            Error::NotAState(m) | Error::Param(m) | Error::NonThermalMarginals(m) => Error::config("state", m),
            other => other,
        };
        match &self.state {
            StateConfig::TwoQubit {
                omega,
                omega_b,
                temperature_a,
                temperature_b,
                beta_a,
                beta_b,
                nu0,
                nu1,
                nu2,
                gamma,
                eta,
                xi,
            } => {
                let params = TwoQubitThermalParams {
                    omega: *omega,
                    omega_b: *omega_b,
                    beta_a: resolve_beta("state.temperature_a", *temperature_a, *beta_a)?,
                    beta_b: resolve_beta("state.temperature_b", *temperature_b, *beta_b)?,
                    nu0: *nu0,
                    nu1: *nu1,
                    nu2: *nu2,
                    gamma: *gamma,
                    eta: *eta,
                    xi: *xi,
                };
                let rho = two_qubit_thermal(&params).map_err(as_config)?;
                Ok(Prepared::Qubits { params, rho })
            }
            StateConfig::TwoQutrit {
                omegas,
                temperature_a,
                temperature_b,
                beta_a,
                beta_b,
                eta31,
                eta62,
                eta75,
                theta31,
                theta62,
                theta75,
            } => {
                let params = TwoQutritThermalParams {
                    omegas: *omegas,
                    beta_a: resolve_beta("state.temperature_a", *temperature_a, *beta_a)?,
                    beta_b: resolve_beta("state.temperature_b", *temperature_b, *beta_b)?,
                    eta31: *eta31,
                    eta62: *eta62,
                    eta75: *eta75,
                    theta31: *theta31,
                    theta62: *theta62,
                    theta75: *theta75,
                };
                if params.omega_max() <= 0.0 {
                    return Err(Error::config("state.omegas", "largest level must be positive"));
                }
                let rho = two_qutrit_thermal(&params).map_err(as_config)?;
                Ok(Prepared::Qutrits { params, rho })
            }
        }
    }

    fn scale_times(&mut self, g_factor: f64, t_factor: f64) {
        self.interaction.g *= g_factor;
        self.time_grid.t_min *= t_factor;
        self.time_grid.t_max *= t_factor;
    }

    /// Same physics with `ħ = 1`: `g → ħg`, `t → t/ħ`.
    pub fn to_natural(&self) -> ScenarioConfig {
        let mut c = self.clone();
        if c.units == Units::EvSeconds {
            c.scale_times(HBAR_EV_S, 1.0 / HBAR_EV_S);
            c.units = Units::Natural;
        }
        c
    }

    /// Inverse of [`ScenarioConfig::to_natural`], energies taken in eV.
    pub fn to_ev_seconds(&self) -> ScenarioConfig {
        let mut c = self.clone();
        if c.units == Units::Natural {
            c.scale_times(1.0 / HBAR_EV_S, HBAR_EV_S);
            c.units = Units::EvSeconds;
        }
        c
    }
}

/// Fig. 2 setting: NMR exchange between a ¹³C and a ¹H spin.
pub fn builtin_micadei() -> ScenarioConfig {
    let j = 215.1;
    ScenarioConfig {
        scenario: ScenarioKind::TwoQubitResonant,
        units: Units::EvSeconds,
        state: StateConfig::TwoQubit {
            omega: 4.135e-12,
            omega_b: None,
            temperature_a: Some(4.3e-12),
            temperature_b: Some(3.66e-12),
            beta_a: None,
            beta_b: None,
            nu0: 0.0,
            nu1: ZERO,
            nu2: ZERO,
            gamma: ZERO,
            eta: -0.19,
            xi: 0.0,
        },
        interaction: InteractionConfig { g: std::f64::consts::PI * j, a: 0.0, theta: std::f64::consts::FRAC_PI_2 },
        time_grid: TimeGrid { t_min: 0.0, t_max: 5e-3, n_points: 100_000 },
        output: OutputConfig { path: None, format: OutputFormat::Csv },
        seed: 2019,
        check_fraction: 0.01,
    }
}

/// Equally spaced qutrits under a partial SWAP, all phases `π/2`.
pub fn builtin_qutrit_demo() -> ScenarioConfig {
    let half_pi = std::f64::consts::FRAC_PI_2;
    ScenarioConfig {
        scenario: ScenarioKind::QutritPartialSwap,
        units: Units::Natural,
        state: StateConfig::TwoQutrit {
            omegas: [0.0, 1.0, 2.0],
            temperature_a: None,
            temperature_b: None,
            beta_a: Some(1.0),
            beta_b: Some(0.5),
            eta31: -0.1,
            eta62: -0.05,
            eta75: -0.02,
            theta31: half_pi,
            theta62: half_pi,
            theta75: half_pi,
        },
        interaction: InteractionConfig { g: 1.0, a: 0.0, theta: 0.0 },
        time_grid: TimeGrid { t_min: 0.0, t_max: 3.1, n_points: 100_000 },
        output: OutputConfig { path: None, format: OutputFormat::Csv },
        seed: 7,
        check_fraction: 0.01,
    }
}

pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    match name {
        "micadei" => Ok(builtin_micadei()),
        "qutrit-demo" => Ok(builtin_qutrit_demo()),
        other => Err(Error::config("builtin", format!("unknown builtin `{other}` (expected micadei or qutrit-demo)"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub t: f64,
    pub heat: f64,
    pub bound_upper: f64,
    pub bound_lower: f64,
    pub violates: bool,
    pub delta_mutual_info: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub samples: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutput {
    pub config: ScenarioConfig,
    pub seed: u64,
    pub a_max: f64,
    pub records: Vec<SweepRecord>,
    /// Crossing times in order; the first is `τ_c`.
    pub critical_times: Vec<f64>,
    pub crossings: CriticalTimes,
    pub cross_check: CrossCheck,
}

/// Closed-form heat, bounds and dynamics for one prepared scenario.
pub struct Model {
    kind: ScenarioKind,
    interaction: InteractionConfig,
    prepared: Prepared,
    h_a: HermitianOp,
    h_int: HermitianOp,
    propagator: Propagator,
    initial_local_entropy: f64,
}

fn local_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(von_neumann_entropy(&rho.reduced(0)?)? + von_neumann_entropy(&rho.reduced(1)?)?)
}

impl Model {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        let prepared = config.prepare()?;
        let ic = config.interaction;
        let (h_a, h_int) = match (&prepared, config.scenario) {
            (Prepared::Qubits { params, .. }, ScenarioKind::TwoQubitResonant) => (
                HermitianOp::from_real_diag(&[0.0, params.omega_a()]),
                ResonantInteraction { g: ic.g, a: ic.a, theta: ic.theta }.hamiltonian(),
            ),
            (Prepared::Qubits { params, .. }, ScenarioKind::TwoQubitNonresonant) => (
                HermitianOp::from_real_diag(&[0.0, params.omega_a()]),
                NonResonantInteraction { g: ic.g }.hamiltonian(),
            ),
            (Prepared::Qutrits { params, .. }, ScenarioKind::QutritPartialSwap) => (
                qutrit_local_hamiltonian(params.omegas),
                PartialSwapInteraction::new(ic.g, 3)?.hamiltonian(),
            ),
            _ => return Err(Error::config("state.kind", "state kind does not match the scenario")),
        };
        let rho = match &prepared {
            Prepared::Qubits { rho, .. } | Prepared::Qutrits { rho, .. } => rho,
        };
        let initial_local_entropy = local_entropy(rho)?;
        Ok(Model {
            kind: config.scenario,
            interaction: ic,
            propagator: Propagator::new(&h_int)?,
            prepared,
            h_a,
            h_int,
            initial_local_entropy,
        })
    }

    pub fn rho(&self) -> &DensityMatrix {
        match &self.prepared {
            Prepared::Qubits { rho, .. } | Prepared::Qutrits { rho, .. } => rho,
        }
    }

    pub fn prepared(&self) -> &Prepared {
        &self.prepared
    }

    pub fn h_a(&self) -> &HermitianOp {
        &self.h_a
    }

    pub fn h_int(&self) -> &HermitianOp {
        &self.h_int
    }

    pub fn a_max(&self) -> f64 {
        match &self.prepared {
            Prepared::Qubits { params, .. } => params.omega_a(),
            Prepared::Qutrits { params, .. } => params.omega_max(),
        }
    }

    pub fn heat(&self, t: f64) -> f64 {
        let ic = self.interaction;
        match (&self.prepared, self.kind) {
            (Prepared::Qubits { params, .. }, ScenarioKind::TwoQubitResonant) => {
                let [_, p01, p10, _] = params.populations();
                heat_closed_form_2qubit(p01, p10, params.eta, params.xi, ic.g, ic.theta, params.omega, t)
            }
            (Prepared::Qutrits { params, .. }, _) => heat_closed_form_qutrit(params, ic.g, t),
            _ => 0.0,
        }
    }

    pub fn bound(&self, t: f64) -> NcBound {
        let ic = self.interaction;
        let a_max = self.a_max();
        let b = match self.kind {
            ScenarioKind::TwoQubitResonant => resonant_bound(a_max, ic.g, ic.a, t),
            ScenarioKind::TwoQubitNonresonant => nc_bound_theorem1(a_max, pd_nonresonant(ic.g, t), 0.5),
            ScenarioKind::QutritPartialSwap => nc_bound_theorem1(a_max, pd_partial_swap(ic.g, t), 0.5),
        };
        b.expect("validated parameters give a valid bound")
    }

    pub fn unitary(&self, t: f64) -> Result<UnitaryOp> {
        self.propagator.unitary(t)
    }

    pub fn heat_trace(&self, t: f64) -> Result<f64> {
        let rho = self.rho();
        energy_change(rho, &self.unitary(t)?, &lift_a(&self.h_a, rho.dims()[1]))
    }

    /// `I(A:B)(t) − I(A:B)(0)`; the global entropy is conserved, so only the
    /// marginals change.
    pub fn delta_mutual_info(&self, t: f64) -> Result<f64> {
        let evolved = self.rho().conjugated_by(self.unitary(t)?.matrix())?;
        Ok(local_entropy(&evolved)? - self.initial_local_entropy)
    }

    pub fn record(&self, t: f64) -> Result<SweepRecord> {
        let heat = self.heat(t);
        let b = self.bound(t);
        let tol = VIOLATION_TOL * self.a_max();
        Ok(SweepRecord {
            t,
            heat,
            bound_upper: b.upper,
            bound_lower: b.lower,
            violates: heat > b.upper + tol || heat < b.lower - tol,
            delta_mutual_info: self.delta_mutual_info(t)?,
        })
    }

    pub fn critical_times(&self, grid: &TimeGrid) -> Result<CriticalTimes> {
        find_critical_times(
            |t| self.heat(t),
            |t| self.bound(t).upper,
            |t| self.bound(t).lower,
            grid.t_min,
            grid.t_max,
            grid.n_points,
        )
    }
}

/// Evaluates the whole grid. Deterministic for a fixed config.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepOutput> {
    let model = Model::new(config)?;
    let times = config.time_grid.times();
    let records = times.par_iter().map(|&t| model.record(t)).collect::<Result<Vec<_>>>()?;

    let n = times.len();
    let samples = ((config.check_fraction * n as f64).ceil() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut picks = sample(&mut rng, n, samples).into_vec();
    picks.sort_unstable();
    let deviations = picks
        .par_iter()
        .map(|&k| Ok((model.heat_trace(times[k])? - records[k].heat).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = deviations.into_iter().fold(0.0, f64::max);
    if max_deviation > CROSS_CHECK_TOL * model.a_max() {
        return Err(Error::Numerics(format!(
            "closed-form heat deviates from the trace formula by {max_deviation:e}"
        )));
    }

    let crossings = model.critical_times(&config.time_grid)?;
    Ok(SweepOutput {
        config: config.clone(),
        seed: config.seed,
        a_max: model.a_max(),
        critical_times: crossings.crossings.iter().map(|c| c.t).collect(),
        crossings,
        records,
        cross_check: CrossCheck { samples, max_deviation },
    })
}

/// Unitaries whose stochastic-reversibility decomposition the CLI can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedInteraction {
    /// Qubit partial SWAP, `p_d = sin²(gt)`.
    PartialSwap,
    /// Qutrit partial SWAP, `p_d = sin²(gt)`.
    PartialSwapQutrit,
    /// Non-resonant qubits, `p_d = sin²(gt/2)`.
    Nonresonant,
    /// `U_θ` factor of the resonant family, `p_d = sin²(gt)`.
    ResonantTheta,
    /// `U_a` factor of the resonant family, `p_d = sin²((a − 1)gt/2)`.
    ResonantA,
}

impl NamedInteraction {
    pub const ALL: [NamedInteraction; 5] = [
        NamedInteraction::PartialSwap,
        NamedInteraction::PartialSwapQutrit,
        NamedInteraction::Nonresonant,
        NamedInteraction::ResonantTheta,
        NamedInteraction::ResonantA,
    ];

    pub fn unitary(&self, g: f64, a: f64, theta: f64, t: f64) -> Result<UnitaryOp> {
        use crate::dynamics::resonant_decomposition_factors;
        match self {
            NamedInteraction::PartialSwap => Ok(PartialSwapInteraction::new(g, 2)?.unitary(t)),
            NamedInteraction::PartialSwapQutrit => Ok(PartialSwapInteraction::new(g, 3)?.unitary(t)),
            NamedInteraction::Nonresonant => Propagator::new(&NonResonantInteraction { g }.hamiltonian())?.unitary(t),
            NamedInteraction::ResonantTheta => Ok(resonant_decomposition_factors(&ResonantInteraction { g, a, theta }, t)?.1),
            NamedInteraction::ResonantA => Ok(resonant_decomposition_factors(&ResonantInteraction { g, a, theta }, t)?.0),
        }
    }

    pub fn analytic_pd(&self, g: f64, a: f64, t: f64) -> f64 {
        use crate::contextuality::{pd_resonant_a, pd_resonant_theta};
        match self {
            NamedInteraction::PartialSwap | NamedInteraction::PartialSwapQutrit => pd_partial_swap(g, t),
            NamedInteraction::Nonresonant => pd_nonresonant(g, t),
            NamedInteraction::ResonantTheta => pd_resonant_theta(g, t),
            NamedInteraction::ResonantA => pd_resonant_a(a, g, t),
        }
    }
}

impl std::fmt::Display for NamedInteraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            NamedInteraction::PartialSwap => "partial-swap",
            NamedInteraction::PartialSwapQutrit => "partial-swap-qutrit",
            NamedInteraction::Nonresonant => "nonresonant",
            NamedInteraction::ResonantTheta => "resonant-theta",
            NamedInteraction::ResonantA => "resonant-a",
        };
        f.pad(name)
    }
}

impl std::str::FromStr for NamedInteraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|_| {
            Error::config(
                "interaction",
                format!("unknown interaction `{s}` (partial-swap, partial-swap-qutrit, nonresonant, resonant-theta, resonant-a)"),
            )
        })
    }
}

pub const CSV_HEADER: [&str; 6] = ["t", "heat", "bound_upper", "bound_lower", "violates", "delta_mutual_info"];

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            sci(r.t),
            sci(r.heat),
            sci(r.bound_upper),
            sci(r.bound_lower),
            r.violates.to_string(),
            sci(r.delta_mutual_info),
        ])?;
    }
    w.flush()
}

pub fn write_json<W: Write>(output: &SweepOutput, out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(out, output).map_err(std::io::Error::other)
}

/// Writes the sweep to `path` in the requested format.
pub fn emit(output: &SweepOutput, format: OutputFormat, path: &Path) -> Result<()> {
    let io = |source| Error::Io { path: path.to_owned(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut file = BufWriter::new(File::create(path).map_err(io)?);
    match format {
        OutputFormat::Csv => write_csv(&output.records, &mut file),
        OutputFormat::Json => write_json(output, &mut file),
    }
    .map_err(io)?;
    file.flush().map_err(io)
}

/// Parses a CSV produced by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let fmt = |message: String| Error::Format { path: path.to_owned(), message };
    let mut r = csv::Reader::from_path(path).map_err(|e| fmt(e.to_string()))?;
    let header = r.headers().map_err(|e| fmt(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(fmt(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| fmt(e.to_string()))?;
        let num = |i: usize| row[i].parse::<f64>().map_err(|e| fmt(format!("column {}: {e}", CSV_HEADER[i])));
        out.push(SweepRecord {
            t: num(0)?,
            heat: num(1)?,
            bound_upper: num(2)?,
            bound_lower: num(3)?,
            violates: row[4].parse().map_err(|e| fmt(format!("column violates: {e}")))?,
            delta_mutual_info: num(5)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::nmr_exchange_hamiltonian;

    fn small(mut c: ScenarioConfig, n: usize) -> ScenarioConfig {
        c.time_grid.n_points = n;
        c
    }

    #[test]
    fn micadei_interaction_is_the_nmr_form() {
        let model = Model::new(&builtin_micadei()).unwrap();
        let nmr = nmr_exchange_hamiltonian(215.1);
        assert!(model.h_int().matrix().max_abs_diff(nmr.matrix()) < 1e-9);
    }

    #[test]
    fn micadei_marginal_temperatures() {
        let model = Model::new(&builtin_micadei()).unwrap();
        let omega = 4.135e-12;
        for (k, expected) in [(0, 4.3e-12), (1, 3.66e-12)] {
            let m = model.rho().reduced(k).unwrap();
            let (p0, p1) = (m.matrix()[(0, 0)].re, m.matrix()[(1, 1)].re);
            let temperature = omega / (p0 / p1).ln();
            assert!((temperature - expected).abs() <= 1e-9 * expected, "{temperature}");
        }
    }

    #[test]
    fn micadei_critical_time() {
        let out = run_sweep(&small(builtin_micadei(), 20_000)).unwrap();
        let tc = out.critical_times[0];
        assert!((tc - 1.85e-4).abs() < 0.05 * 1.85e-4, "{tc}");
        assert!(out.records.iter().filter(|r| r.violates).all(|r| r.t < tc + 1e-6));
    }

    #[test]
    fn no_coherence_no_violation() {
        let mut c = small(builtin_micadei(), 20_000);
        if let StateConfig::TwoQubit { eta, .. } = &mut c.state {
            *eta = 0.0;
        }
        let out = run_sweep(&c).unwrap();
        assert!(out.records.iter().all(|r| !r.violates));
    }

    #[test]
    fn qutrit_demo_matches_analytic_times() {
        use crate::contextuality::{qutrit_critical_times_analytic, CrossingKind};
        use crate::thermo::{qutrit_xi, qutrit_zeta};
        let c = small(builtin_qutrit_demo(), 20_000);
        let out = run_sweep(&c).unwrap();
        let model = Model::new(&c).unwrap();
        let Prepared::Qutrits { params, .. } = model.prepared() else { unreachable!() };
        let (tu, tl) = qutrit_critical_times_analytic(qutrit_zeta(params), qutrit_xi(params), 2.0, 1.0).unwrap();
        let fu = out.crossings.first_of(CrossingKind::Upper).unwrap();
        let fl = out.crossings.first_of(CrossingKind::Lower).unwrap();
        assert!((fu - tu).abs() <= 1e-8 * tu);
        assert!((fl - tl).abs() <= 1e-8 * tl);
    }

    #[test]
    fn named_interactions_decompose() {
        use crate::contextuality::extract_stochastic_reversibility;
        for n in NamedInteraction::ALL {
            let u = n.unitary(1.1, 0.3, 0.7, 0.8).unwrap();
            let r = extract_stochastic_reversibility(&u, n.analytic_pd(1.1, 0.3, 0.8)).unwrap();
            assert!(r.is_cptp, "{n:?}");
        }
        assert_eq!("resonant-a".parse::<NamedInteraction>().unwrap(), NamedInteraction::ResonantA);
        assert!("swap".parse::<NamedInteraction>().is_err());
    }

    #[test]
    fn unit_round_trip() {
        let c = builtin_micadei();
        let back = c.to_natural().to_ev_seconds();
        assert_eq!(back.units, Units::EvSeconds);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        assert!(rel(back.interaction.g, c.interaction.g) < 1e-12);
        assert!(rel(back.time_grid.t_max, c.time_grid.t_max) < 1e-12);
        let nat = c.to_natural();
        assert!(rel(nat.interaction.g * nat.time_grid.t_max, c.interaction.g * c.time_grid.t_max) < 1e-12);
    }

    #[test]
    fn validation_names_fields() {
        let mut c = builtin_micadei();
        c.time_grid.n_points = 1;
        match c.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "time_grid.n_points"),
            other => panic!("{other:?}"),
        }
        let mut c = builtin_micadei();
        c.scenario = ScenarioKind::QutritPartialSwap;
        assert!(matches!(c.validate(), Err(Error::Config { .. })));
        let mut c = builtin_micadei();
        if let StateConfig::TwoQubit { eta, .. } = &mut c.state {
            *eta = 0.5;
        }
        match c.prepare() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "state"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_json_round_trip() {
        let c = builtin_qutrit_demo();
        let back = ScenarioConfig::from_json_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let m = builtin_micadei();
        assert!(m.to_json().contains("\"eV_seconds\""));
        assert_eq!(ScenarioConfig::from_json_str(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn csv_header_only_and_round_trip() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,heat,bound_upper,bound_lower,violates,delta_mutual_info\n");

        let rec = SweepRecord {
            t: 1.0 / 3.0,
            heat: -2.5e-13,
            bound_upper: std::f64::consts::PI,
            bound_lower: -1e-300,
            violates: true,
            delta_mutual_info: 0.1 + 0.2,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        let out = SweepOutput {
            config: builtin_micadei(),
            seed: 0,
            a_max: 1.0,
            records: vec![rec],
            critical_times: vec![],
            crossings: CriticalTimes::default(),
            cross_check: CrossCheck { samples: 0, max_deviation: 0.0 },
        };
        emit(&out, OutputFormat::Csv, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(read_csv(&path).unwrap(), vec![rec]);
    }

    #[test]
    fn io_errors_carry_the_path() {
        let out = SweepOutput {
            config: builtin_micadei(),
            seed: 0,
            a_max: 1.0,
            records: vec![],
            critical_times: vec![],
            crossings: CriticalTimes::default(),
            cross_check: CrossCheck { samples: 0, max_deviation: 0.0 },
        };
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let bad = blocker.join("out.csv");
        let err = emit(&out, OutputFormat::Csv, &bad).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
