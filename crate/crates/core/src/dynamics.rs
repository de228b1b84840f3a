//! Energy-conserving interaction families and their interaction-picture
//! evolutions.
//!
//! Local Hamiltonians are diagonal in the computational basis, so they commute
//! with the free propagator and heat computed purely in the interaction
//! picture equals the full-picture value. The free propagator is never built.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, kron, pauli, ComplexMatrix, Eigh, HermitianOp, UnitaryOp, C64, ONE,
};
use crate::states::DensityMatrix;

/// Absolute commutator tolerance, scaled by `max(1, ‖H_I‖_max ‖H_0‖_max)`.
pub const ENERGY_CONSERVATION_TOL: f64 = 1e-12;

/// `H = (ω/2)(𝟙 − σ_z) = diag(0, ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeemanQubit {
    pub omega: f64,
}

impl ZeemanQubit {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Param(format!("Zeeman gap must be positive, got {omega}")));
        }
        Ok(ZeemanQubit { omega })
    }

    pub fn hamiltonian(&self) -> HermitianOp {
        HermitianOp::from_real_diag(&[0.0, self.omega])
    }
}

/// Most general energy-conserving interaction between resonant qubits:
/// `g (a(|01⟩⟨01| + |10⟩⟨10|) + e^{iθ}|01⟩⟨10| + e^{−iθ}|10⟩⟨01|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantInteraction {
    pub g: f64,
    pub a: f64,
    pub theta: f64,
}

impl ResonantInteraction {
    fn block(&self, diag: f64, hop: f64) -> HermitianOp {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(1, 1)] = C64::new(self.g * diag, 0.0);
        m[(2, 2)] = C64::new(self.g * diag, 0.0);
        m[(1, 2)] = C64::from_polar(self.g * hop, self.theta);
        m[(2, 1)] = C64::from_polar(self.g * hop, -self.theta);
        HermitianOp::new(m).expect("block generator is Hermitian by construction")
    }

    pub fn hamiltonian(&self) -> HermitianOp {
        self.block(self.a, 1.0)
    }

    /// The `a = 1` part, whose restriction to `{|01⟩, |10⟩}` squares to `g²𝟙`.
    pub fn h_theta(&self) -> HermitianOp {
        self.block(1.0, 1.0)
    }

    /// The remainder `g(a − 1)(|01⟩⟨01| + |10⟩⟨10|)`.
    pub fn h_a(&self) -> HermitianOp {
        self.block(self.a - 1.0, 0.0)
    }
}

/// Energy-conserving interaction for qubits with different gaps, with the
/// free identity offset dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonResonantInteraction {
    pub g: f64,
}

impl NonResonantInteraction {
    pub fn hamiltonian(&self) -> HermitianOp {
        HermitianOp::from_real_diag(&[0.0, self.g, self.g, 0.0])
    }
}

/// `g S` with `S` the SWAP of two `local_dim`-level systems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSwapInteraction {
    pub g: f64,
    pub local_dim: usize,
}

impl PartialSwapInteraction {
    pub fn new(g: f64, local_dim: usize) -> Result<Self> {
        if !(local_dim == 2 || local_dim == 3) {
            return Err(Error::Param(format!("partial SWAP supports qubits or qutrits, got d = {local_dim}")));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::Param(format!("coupling must be positive, got {g}")));
        }
        Ok(PartialSwapInteraction { g, local_dim })
    }

    pub fn generator(&self) -> HermitianOp {
        HermitianOp::new(swap_operator(self.local_dim)).expect("SWAP is Hermitian")
    }

    pub fn hamiltonian(&self) -> HermitianOp {
        self.generator().scale(self.g)
    }

    /// `cos(gt)𝟙 − i sin(gt)S`, valid because `S² = 𝟙`.
    pub fn unitary(&self, t: f64) -> UnitaryOp {
        let s = swap_operator(self.local_dim);
        let n = s.rows();
        let (sin, cos) = (self.g * t).sin_cos();
        let m = ComplexMatrix::identity(n).scale_real(cos).try_sub(&s.scale(C64::new(0.0, sin))).expect("same shape");
        UnitaryOp::new(m).expect("partial SWAP is unitary")
    }
}

/// `S|i⟩|j⟩ = |j⟩|i⟩` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = ONE;
        }
    }
    s
}

/// `(πJ/2)(σ_x ⊗ σ_y − σ_y ⊗ σ_x)`, the NMR effective coupling for a scalar
/// coupling constant `J` (Hz). Equals [`ResonantInteraction`] with
/// `g = πJ`, `a = 0`, `θ = π/2`.
pub fn nmr_exchange_hamiltonian(j_coupling: f64) -> HermitianOp {
    let xy = kron(&pauli::x(), &pauli::y());
    let yx = kron(&pauli::y(), &pauli::x());
    HermitianOp::new((&xy - &yx).scale_real(PI * j_coupling / 2.0)).expect("Hermitian")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyConservation {
    /// `‖[H_I, H_A⊗𝟙 + 𝟙⊗H_B]‖_max`.
    pub residual: f64,
    pub conserved: bool,
}

/// Local energy operator `H_A ⊗ 𝟙 + 𝟙 ⊗ H_B`.
pub fn local_energy(h_a: &HermitianOp, h_b: &HermitianOp) -> ComplexMatrix {
    let ia = ComplexMatrix::identity(h_a.dim());
    let ib = ComplexMatrix::identity(h_b.dim());
    &kron(h_a.matrix(), &ib) + &kron(&ia, h_b.matrix())
}

pub fn check_energy_conservation(
    h_int: &HermitianOp,
    h_a: &HermitianOp,
    h_b: &HermitianOp,
) -> Result<EnergyConservation> {
    if h_int.dim() != h_a.dim() * h_b.dim() {
        return Err(Error::Dimension(format!(
            "interaction of dimension {} with locals of dimensions {} and {}",
            h_int.dim(),
            h_a.dim(),
            h_b.dim()
        )));
    }
    let h0 = local_energy(h_a, h_b);
    let residual = h_int.matrix().commutator(&h0)?.max_norm();
    let scale = (h_int.matrix().max_norm() * h0.max_norm()).max(1.0);
    Ok(EnergyConservation {
        residual,
        conserved: residual <= ENERGY_CONSERVATION_TOL * scale,
    })
}

/// Precomputed spectral decomposition of a time-independent generator, so that
/// `U(t) = e^{−itH}` costs one reconstruction per time point.
#[derive(Clone, Debug)]
pub struct Propagator {
    eig: Eigh,
}

impl Propagator {
    pub fn new(h: &HermitianOp) -> Result<Self> {
        Ok(Propagator { eig: eig_hermitian(h)? })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    pub fn unitary(&self, t: f64) -> Result<UnitaryOp> {
        if t == 0.0 {
            return Ok(UnitaryOp::identity(self.dim()));
        }
        UnitaryOp::new(self.eig.reconstruct_with(|l| C64::new(0.0, -l * t).exp()))
    }
}

/// `U_I ρ U_I†` with `U_I = e^{−itH_I}`.
///
/// When `locals` is given the interaction is first checked to conserve
/// `H_A + H_B`; pass `None` to bypass the check.
pub fn evolve_interaction_picture(
    rho: &DensityMatrix,
    h_int: &HermitianOp,
    locals: Option<(&HermitianOp, &HermitianOp)>,
    t: f64,
) -> Result<DensityMatrix> {
    if h_int.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "interaction of dimension {} on a state of dimension {}",
            h_int.dim(),
            rho.dim()
        )));
    }
    if let Some((h_a, h_b)) = locals {
        let check = check_energy_conservation(h_int, h_a, h_b)?;
        if !check.conserved {
            return Err(Error::Param(format!(
                "interaction does not conserve local energy (residual {:e})",
                check.residual
            )));
        }
    }
    let u = Propagator::new(h_int)?.unitary(t)?;
    rho.conjugated_by(u.matrix())
}

/// Factors `U_I(t) = U₂ U₁` with `U₁ = e^{−itH_a}` and `U₂ = e^{−itH_θ}`.
/// Both generators are diagonal on `{|00⟩, |11⟩}` and act inside
/// `{|01⟩, |10⟩}`, where they commute; the factors are built in closed form.
pub fn resonant_decomposition_factors(params: &ResonantInteraction, t: f64) -> Result<(UnitaryOp, UnitaryOp)> {
    let gt = params.g * t;
    let mut u1 = ComplexMatrix::identity(4);
    let phase_a = C64::from_polar(1.0, -(params.a - 1.0) * gt);
    u1[(1, 1)] = phase_a;
    u1[(2, 2)] = phase_a;

    // e^{−igt(𝟙 + K)} on the block, K = [[0, e^{iθ}], [e^{−iθ}, 0]], K² = 𝟙
    let mut u2 = ComplexMatrix::identity(4);
    let global = C64::from_polar(1.0, -gt);
    let (sin, cos) = gt.sin_cos();
    let minus_i_sin = C64::new(0.0, -sin);
    u2[(1, 1)] = global * cos;
    u2[(2, 2)] = global * cos;
    u2[(1, 2)] = global * minus_i_sin * C64::from_polar(1.0, params.theta);
    u2[(2, 1)] = global * minus_i_sin * C64::from_polar(1.0, -params.theta);
    Ok((UnitaryOp::new(u1)?, UnitaryOp::new(u2)?))
}
