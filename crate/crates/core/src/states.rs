//! Density matrices: Gibbs states, the correlated two-qubit and two-qutrit
//! thermal families, and entropic quantities (natural log throughout).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, partial_trace, ComplexMatrix, HermitianOp, C64, ZERO};

/// Hermiticity and unit-trace tolerance of a state.
pub const STATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as round-off.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Tolerance on the thermal-marginal property of constructed families.
pub const MARGINAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != total || dims.is_empty() {
            return Err(Error::Dimension(format!(
                "dims {dims:?} incompatible with a {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotAState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > STATE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}, expected 1")));
        }
        let matrix = matrix.hermitian_part();
        let eig = eig_hermitian(&HermitianOp::new(matrix.clone())?)?;
        let min = eig.values[0];
        if min < EIGEN_FLOOR {
            return Err(Error::NotAState(format!(
                "smallest eigenvalue {min:e} is negative; correlation parameters are inconsistent"
            )));
        }
        Ok(DensityMatrix { matrix, dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Reduced state of subsystem `keep`.
    pub fn reduced(&self, keep: usize) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        DensityMatrix::new(m, vec![self.dims[keep]])
    }

    /// Spectrum with eigenvalues in `[EIGEN_FLOOR, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = eig_hermitian(&HermitianOp::new(self.matrix.clone())?)?;
        Ok(eig.values.into_iter().map(|l| l.max(0.0)).collect())
    }

    /// `U ρ U†`; the result is re-validated.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(u.conjugate(&self.matrix)?, self.dims.clone())
    }

    /// Expectation value `Tr{ρ O}`.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        Ok(self.matrix.matmul(observable)?.trace().re)
    }
}

/// `e^{−βH}/Tr e^{−βH}`, built in the eigenbasis of `h`.
pub fn gibbs_state(h: &HermitianOp, beta: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Param(format!("inverse temperature must be finite and ≥ 0, got {beta}")));
    }
    let eig = eig_hermitian(h)?;
    // shift by the ground energy so the weights cannot overflow
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();
    let rho = eig.reconstruct_from_values(&probs);
    DensityMatrix::new(rho.hermitian_part(), vec![h.dim()])
}

/// Correlated two-qubit state whose marginals are Gibbs states of the Zeeman
/// Hamiltonian `diag(0, ω)`.
///
/// `nu0` is the shift of the `|00⟩` population away from the product value
/// `1/(Z_A Z_B)`; every other population is adjusted so the marginals stay
/// thermal. The coherences `nu1`, `nu2`, `gamma` and `eta·e^{iξ}` sit where
/// they do in the usual `σ_z ⊗ σ_z` eigenbasis layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitThermalParams {
    pub omega: f64,
    /// Gap of qubit B when it differs from `omega` (non-resonant qubits).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_b: Option<f64>,
    pub beta_a: f64,
    pub beta_b: f64,
    #[serde(default)]
    pub nu0: f64,
    #[serde(default)]
    pub nu1: Complex64,
    #[serde(default)]
    pub nu2: Complex64,
    #[serde(default)]
    pub gamma: Complex64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub xi: f64,
}

impl TwoQubitThermalParams {
    /// Uncorrelated state at the given inverse temperatures.
    pub fn product(omega: f64, beta_a: f64, beta_b: f64) -> Self {
        TwoQubitThermalParams {
            omega,
            omega_b: None,
            beta_a,
            beta_b,
            nu0: 0.0,
            nu1: ZERO,
            nu2: ZERO,
            gamma: ZERO,
            eta: 0.0,
            xi: 0.0,
        }
    }

    pub fn omega_a(&self) -> f64 {
        self.omega
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b.unwrap_or(self.omega)
    }

    pub fn partition_a(&self) -> f64 {
        1.0 + (-self.omega_a() * self.beta_a).exp()
    }

    pub fn partition_b(&self) -> f64 {
        1.0 + (-self.omega_b() * self.beta_b).exp()
    }

    /// Diagonal `(p00, p01, p10, p11)`.
    pub fn populations(&self) -> [f64; 4] {
        let (za, zb) = (self.partition_a(), self.partition_b());
        let p00 = 1.0 / (za * zb) + self.nu0;
        let p01 = 1.0 / za - p00;
        let p10 = 1.0 / zb - p00;
        let p11 = ((-self.omega_a() * self.beta_a - self.omega_b() * self.beta_b).exp() - 1.0)
            / (za * zb)
            + p00;
        [p00, p01, p10, p11]
    }

    /// The 4x4 matrix without validation.
    pub fn matrix(&self) -> ComplexMatrix {
        let [p00, p01, p10, p11] = self.populations();
        let r = |x: f64| C64::new(x, 0.0);
        let coh = C64::from_polar(self.eta, self.xi);
        let (n1, n2, g) = (self.nu1, self.nu2, self.gamma);
        ComplexMatrix::from_rows(&[
            vec![r(p00), n1.conj(), n2.conj(), g.conj()],
            vec![n1, r(p01), coh, -n2.conj()],
            vec![n2, coh.conj(), r(p10), -n1.conj()],
            vec![g, -n2, -n1, r(p11)],
        ])
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.omega, self.omega_b(), self.beta_a, self.beta_b, self.nu0, self.eta, self.xi]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Param("two-qubit parameters must be finite".into()));
        }
        if self.omega <= 0.0 || self.omega_b() <= 0.0 {
            return Err(Error::Param("qubit gaps must be positive".into()));
        }
        if self.beta_a < 0.0 || self.beta_b < 0.0 {
            return Err(Error::Param("inverse temperatures must be ≥ 0".into()));
        }
        Ok(())
    }
}

/// Builds and validates the correlated two-qubit thermal state, including the
/// check that both marginals are the expected Gibbs states.
pub fn two_qubit_thermal(params: &TwoQubitThermalParams) -> Result<DensityMatrix> {
    params.validate()?;
    let rho = DensityMatrix::new(params.matrix(), vec![2, 2])?;
    let ha = HermitianOp::from_real_diag(&[0.0, params.omega_a()]);
    let hb = HermitianOp::from_real_diag(&[0.0, params.omega_b()]);
    check_marginal(&rho, 0, &ha, params.beta_a, MARGINAL_TOL)?;
    check_marginal(&rho, 1, &hb, params.beta_b, MARGINAL_TOL)?;
    Ok(rho)
}

pub(crate) fn check_marginal(
    rho: &DensityMatrix,
    which: usize,
    h: &HermitianOp,
    beta: f64,
    tol: f64,
) -> Result<()> {
    let marginal = partial_trace(rho.matrix(), rho.dims(), which)?;
    let expected = gibbs_state(h, beta)?;
    let diff = marginal.max_abs_diff(expected.matrix());
    if diff > tol {
        return Err(Error::NonThermalMarginals(format!(
            "subsystem {which} deviates from its Gibbs state by {diff:e} (tolerance {tol:e})"
        )));
    }
    Ok(())
}

/// Two qutrits with equal local Hamiltonians `diag(ω₀, ω₁, ω₂)` and the three
/// energy-conserving coherences `|01⟩⟨10|`, `|02⟩⟨20|`, `|12⟩⟨21|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQutritThermalParams {
    pub omegas: [f64; 3],
    pub beta_a: f64,
    pub beta_b: f64,
    #[serde(default)]
    pub eta31: f64,
    #[serde(default)]
    pub eta62: f64,
    #[serde(default)]
    pub eta75: f64,
    #[serde(default)]
    pub theta31: f64,
    #[serde(default)]
    pub theta62: f64,
    #[serde(default)]
    pub theta75: f64,
}

impl TwoQutritThermalParams {
    pub fn product(omegas: [f64; 3], beta_a: f64, beta_b: f64) -> Self {
        TwoQutritThermalParams {
            omegas,
            beta_a,
            beta_b,
            eta31: 0.0,
            eta62: 0.0,
            eta75: 0.0,
            theta31: 0.0,
            theta62: 0.0,
            theta75: 0.0,
        }
    }

    pub fn omega_max(&self) -> f64 {
        self.omegas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn partitions(&self) -> (f64, f64) {
        let z = |beta: f64| self.omegas.iter().map(|w| (-beta * w).exp()).sum::<f64>();
        (z(self.beta_a), z(self.beta_b))
    }

    /// Diagonal `p₀ … p₈` in the `|ij⟩ = |i⟩_A ⊗ |j⟩_B` ordering (index `3i + j`),
    /// each the product `e^{−β_A ω_i − β_B ω_j}/(Z_A Z_B)`.
    pub fn populations(&self) -> [f64; 9] {
        let (za, zb) = self.partitions();
        let w = &self.omegas;
        let mut p = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                p[3 * i + j] = (-self.beta_a * w[i] - self.beta_b * w[j]).exp() / (za * zb);
            }
        }
        p
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let p = self.populations();
        let mut m = ComplexMatrix::from_real_diag(&p);
        for &(i, j, eta, theta) in &[
            (1, 3, self.eta31, self.theta31),
            (2, 6, self.eta62, self.theta62),
            (5, 7, self.eta75, self.theta75),
        ] {
            let z = C64::from_polar(eta, theta);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let scalars = [
            self.beta_a, self.beta_b, self.eta31, self.eta62, self.eta75, self.theta31, self.theta62,
            self.theta75,
        ];
        if !self.omegas.iter().chain(&scalars).all(|x| x.is_finite()) {
            return Err(Error::Param("qutrit parameters must be finite".into()));
        }
        let [w0, w1, w2] = self.omegas;
        if !(w0 <= w1 && w1 <= w2) {
            return Err(Error::Param(format!(
                "qutrit energies must be ordered ω₀ ≤ ω₁ ≤ ω₂, got {:?}",
                self.omegas
            )));
        }
        if self.beta_a < 0.0 || self.beta_b < 0.0 {
            return Err(Error::Param("inverse temperatures must be ≥ 0".into()));
        }
        Ok(())
    }
}

pub fn qutrit_local_hamiltonian(omegas: [f64; 3]) -> HermitianOp {
    HermitianOp::from_real_diag(&omegas)
}

pub fn two_qutrit_thermal(params: &TwoQutritThermalParams) -> Result<DensityMatrix> {
    params.validate()?;
    let rho = DensityMatrix::new(params.matrix(), vec![3, 3])?;
    let h = qutrit_local_hamiltonian(params.omegas);
    check_marginal(&rho, 0, &h, params.beta_a, MARGINAL_TOL)?;
    check_marginal(&rho, 1, &h, params.beta_b, MARGINAL_TOL)?;
    Ok(rho)
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ)` for a bipartite state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::Dimension(format!(
            "mutual information needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    let sa = von_neumann_entropy(&rho.reduced(0)?)?;
    let sb = von_neumann_entropy(&rho.reduced(1)?)?;
    Ok(sa + sb - von_neumann_entropy(rho)?)
}

/// `S(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "relative entropy between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let neg_s_rho = -von_neumann_entropy(rho)?;
    let eig = eig_hermitian(&HermitianOp::new(sigma.matrix().clone())?)?;
    let mut cross = 0.0;
    for (k, &mu) in eig.values.iter().enumerate() {
        let v = eig.vectors.column(k);
        let weight = rho.matrix().apply(&v)?.iter().zip(&v).map(|(a, b)| b.conj() * a).sum::<C64>().re;
        if mu <= 1e-14 {
            if weight > 1e-10 {
                return Err(Error::Support(format!(
                    "ρ has weight {weight:e} on a null direction of σ"
                )));
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok(neg_s_rho - cross)
}
