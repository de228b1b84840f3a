//! Heat averages, the correlation-corrected Clausius inequality and the
//! entropy-production identity.
//!
//! Positive heat means subsystem A receives energy. Heat carries the energy
//! unit of the local Hamiltonians.

use serde::Serialize;

use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, HermitianOp, UnitaryOp};
use crate::states::{
    check_marginal, gibbs_state, mutual_information, relative_entropy, DensityMatrix,
    TwoQubitThermalParams, TwoQutritThermalParams,
};

/// Tolerance on the thermal-marginal precondition of [`clausius_report`].
pub const CLAUSIUS_MARGINAL_TOL: f64 = 1e-8;
/// Tolerance on `𝒮 = β_A Q_A + β_B Q_B − ΔI`.
pub const IDENTITY_TOL: f64 = 1e-9;

fn lift(h: &HermitianOp, left: usize, right: usize) -> ComplexMatrix {
    kron(&kron(&ComplexMatrix::identity(left), h.matrix()), &ComplexMatrix::identity(right))
}

/// `H_A ⊗ 𝟙_B` on a bipartite space with the given dims.
pub fn lift_a(h_a: &HermitianOp, dim_b: usize) -> ComplexMatrix {
    lift(h_a, 1, dim_b)
}

/// `𝟙_A ⊗ H_B`.
pub fn lift_b(h_b: &HermitianOp, dim_a: usize) -> ComplexMatrix {
    lift(h_b, dim_a, 1)
}

fn bipartite_dims(rho: &DensityMatrix) -> Result<(usize, usize)> {
    match rho.dims() {
        [a, b] => Ok((*a, *b)),
        d => Err(Error::Dimension(format!("expected a bipartite state, got dims {d:?}"))),
    }
}

/// Change of `Tr ρ O` under `ρ → UρU†`.
pub fn energy_change(rho: &DensityMatrix, u: &UnitaryOp, observable: &ComplexMatrix) -> Result<f64> {
    let evolved = rho.conjugated_by(u.matrix())?;
    Ok(evolved.expectation(observable)? - rho.expectation(observable)?)
}

/// `⟨Q_A⟩ = Tr{UρU† (H_A⊗𝟙)} − Tr{ρ (H_A⊗𝟙)}` with `U = e^{−itH_I}`.
pub fn heat_trace(rho: &DensityMatrix, h_int: &HermitianOp, h_a_local: &HermitianOp, t: f64) -> Result<f64> {
    let (da, db) = bipartite_dims(rho)?;
    if h_a_local.dim() != da || h_int.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "state dims {:?} with local Hamiltonian of dimension {} and interaction of dimension {}",
            rho.dims(),
            h_a_local.dim(),
            h_int.dim()
        )));
    }
    let u = Propagator::new(h_int)?.unitary(t)?;
    energy_change(rho, &u, &lift_a(h_a_local, db))
}

/// `ω((p₀₁ − p₁₀) sin²(gt) + η sin(2gt) sin(ξ − θ))`.
#[allow(clippy::too_many_arguments)]
pub fn heat_closed_form_2qubit(p01: f64, p10: f64, eta: f64, xi: f64, g: f64, theta: f64, omega: f64, t: f64) -> f64 {
    let gt = g * t;
    omega * ((p01 - p10) * gt.sin().powi(2) + eta * (2.0 * gt).sin() * (xi - theta).sin())
}

/// The same heat written with the thermal populations,
/// `ω(½ sin²(gt)[tanh(ωβ_A/2) − tanh(ωβ_B/2)] + η sin(2gt) sin(ξ − θ))`.
pub fn heat_closed_form_2qubit_thermal(params: &TwoQubitThermalParams, g: f64, theta: f64, t: f64) -> f64 {
    let w = params.omega;
    let gt = g * t;
    let thermal = 0.5 * ((w * params.beta_a / 2.0).tanh() - (w * params.beta_b / 2.0).tanh());
    w * (thermal * gt.sin().powi(2) + params.eta * (2.0 * gt).sin() * (params.xi - theta).sin())
}

/// `ζ = Σ_{ij} p_{ij}(ω_j − ω_i)`: the heat received by A after a full SWAP.
pub fn qutrit_zeta(params: &TwoQutritThermalParams) -> f64 {
    let p = params.populations();
    let w = params.omegas;
    let mut zeta = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            zeta += p[3 * i + j] * (w[j] - w[i]);
        }
    }
    zeta
}

/// `ξ = 2 Σ_{i<j} η_{ij}(ω_j − ω_i) sin θ_{ij}` for the coherences between
/// `|ij⟩` and `|ji⟩`.
pub fn qutrit_xi(params: &TwoQutritThermalParams) -> f64 {
    let w = params.omegas;
    2.0 * (params.eta31 * (w[1] - w[0]) * params.theta31.sin()
        + params.eta62 * (w[2] - w[0]) * params.theta62.sin()
        + params.eta75 * (w[2] - w[1]) * params.theta75.sin())
}

/// `ζ sin²(gt) + ξ sin(gt) cos(gt)` under the partial SWAP `e^{−igtS}`.
pub fn heat_closed_form_qutrit(params: &TwoQutritThermalParams, g: f64, t: f64) -> f64 {
    let (s, c) = (g * t).sin_cos();
    qutrit_zeta(params) * s * s + qutrit_xi(params) * s * c
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatResult {
    pub q_a: f64,
    pub q_b: f64,
    /// `I(A:B)` after minus before, in nats.
    pub delta_mutual_info: f64,
    /// `(β_A − β_B)⟨Q_A⟩ − ΔI`, non-negative by the modified Clausius inequality.
    pub clausius_lhs: f64,
    /// `𝒮 = S(ρ_A′‖ρ_A) + S(ρ_B′‖ρ_B)` in nats.
    pub entropy_production: f64,
    /// `|𝒮 − (β_A Q_A + β_B Q_B − ΔI)|`.
    pub identity_residual: f64,
}

impl HeatResult {
    pub fn identity_holds(&self) -> bool {
        self.identity_residual <= IDENTITY_TOL
    }

    /// `(β_A − β_B)⟨Q_A⟩ ≥ ΔI` up to `tol`.
    pub fn clausius_holds(&self, tol: f64) -> bool {
        self.clausius_lhs >= -tol
    }
}

/// Full thermodynamic bookkeeping of one energy-conserving evolution.
#[allow(clippy::too_many_arguments)]
pub fn clausius_report(
    rho: &DensityMatrix,
    h_int: &HermitianOp,
    h_a_local: &HermitianOp,
    h_b_local: &HermitianOp,
    beta_a: f64,
    beta_b: f64,
    t: f64,
) -> Result<HeatResult> {
    let u = Propagator::new(h_int)?.unitary(t)?;
    clausius_report_with(rho, &u, h_a_local, h_b_local, beta_a, beta_b)
}

/// [`clausius_report`] for an already-built unitary.
pub fn clausius_report_with(
    rho: &DensityMatrix,
    u: &UnitaryOp,
    h_a_local: &HermitianOp,
    h_b_local: &HermitianOp,
    beta_a: f64,
    beta_b: f64,
) -> Result<HeatResult> {
    let (da, db) = bipartite_dims(rho)?;
    if h_a_local.dim() != da || h_b_local.dim() != db || u.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "state dims {:?} with locals of dimensions {} and {} and a unitary of dimension {}",
            rho.dims(),
            h_a_local.dim(),
            h_b_local.dim(),
            u.dim()
        )));
    }
    check_marginal(rho, 0, h_a_local, beta_a, CLAUSIUS_MARGINAL_TOL)?;
    check_marginal(rho, 1, h_b_local, beta_b, CLAUSIUS_MARGINAL_TOL)?;

    let evolved = rho.conjugated_by(u.matrix())?;
    let ea = lift_a(h_a_local, db);
    let eb = lift_b(h_b_local, da);
    let q_a = evolved.expectation(&ea)? - rho.expectation(&ea)?;
    let q_b = evolved.expectation(&eb)? - rho.expectation(&eb)?;
    let delta_mutual_info = mutual_information(&evolved)? - mutual_information(rho)?;

    let gibbs_a = gibbs_state(h_a_local, beta_a)?;
    let gibbs_b = gibbs_state(h_b_local, beta_b)?;
    let entropy_production =
        relative_entropy(&evolved.reduced(0)?, &gibbs_a)? + relative_entropy(&evolved.reduced(1)?, &gibbs_b)?;
    let predicted = beta_a * q_a + beta_b * q_b - delta_mutual_info;

    Ok(HeatResult {
        q_a,
        q_b,
        delta_mutual_info,
        clausius_lhs: (beta_a - beta_b) * q_a - delta_mutual_info,
        entropy_production,
        identity_residual: (entropy_production - predicted).abs(),
    })
}
