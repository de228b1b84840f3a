//! Stochastic-reversibility decompositions, noncontextuality bounds and
//! critical-time search.
//!
//! Superoperators act on column-stacked operators, `vec(X)[j·d + i] = X_ij`,
//! so conjugation `X ↦ UXU†` is `conj(U) ⊗ U`. Choi matrices are unnormalized,
//! `Λ = Σ_ij |i⟩⟨j| ⊗ 𝒞(|i⟩⟨j|)`, with the reference system first.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, partial_trace, ComplexMatrix, HermitianOp, UnitaryOp, C64, ONE};

/// Floor on the Choi spectrum of a completely positive map.
pub const CHOI_EIGEN_FLOOR: f64 = -1e-9;
/// Ceiling on `‖Tr_out Λ − 𝟙‖_max` for a trace-preserving map.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-9;
/// Absolute tolerance of the minimal-`p_d` search.
pub const PD_SEARCH_TOL: f64 = 1e-9;
/// Relative bracket width at which crossing bisection stops.
pub const CROSSING_REL_TOL: f64 = 1e-10;
/// Default number of grid points of the crossing scan.
pub const DEFAULT_GRID_POINTS: usize = 100_000;

/// Linear map on `d×d` operators, stored as a `d²×d²` matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Superoperator {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

fn vec_op(x: &ComplexMatrix) -> Vec<C64> {
    let d = x.rows();
    (0..d * d).map(|k| x[(k % d, k / d)]).collect()
}

fn unvec_op(v: &[C64], d: usize) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(d, d);
    for (k, z) in v.iter().enumerate() {
        x[(k % d, k / d)] = *z;
    }
    x
}

impl Superoperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::Dimension(format!(
                "superoperator on d = {dim} needs a {0}x{0} matrix, got {1}x{2}",
                dim * dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Superoperator { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    /// `X ↦ UXU†`.
    pub fn from_unitary(u: &UnitaryOp) -> Self {
        let m = u.matrix();
        Superoperator { dim: u.dim(), matrix: kron(&m.conj(), m) }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "map on d = {} applied to a {}x{} operator",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        Ok(unvec_op(&self.matrix.apply(&vec_op(x))?, self.dim))
    }

    /// `‖Tr_out Λ − 𝟙‖_max`, zero exactly for trace-preserving maps.
    pub fn trace_preservation_residual(&self) -> f64 {
        let d = self.dim;
        let choi = choi_raw(self);
        let reduced = partial_trace(&choi, &[d, d], 0).expect("square bipartite Choi matrix");
        reduced.max_abs_diff(&ComplexMatrix::identity(d))
    }
}

fn choi_raw(s: &Superoperator) -> ComplexMatrix {
    let d = s.dim;
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    choi[(i * d + k, j * d + l)] = s.matrix[(l * d + k, j * d + i)];
                }
            }
        }
    }
    choi
}

/// Choi matrix of a Hermiticity-preserving map.
pub fn choi_matrix(s: &Superoperator) -> Result<HermitianOp> {
    HermitianOp::new(choi_raw(s))
        .map_err(|e| Error::Decomposition(format!("map does not preserve Hermiticity: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub p_d: f64,
    /// The extracted channel `𝒞`.
    pub residual_channel: Superoperator,
    /// `‖½𝒰 + ½𝒰† − (1 − p_d)id − p_d𝒞‖_max`.
    pub residual_norm: f64,
    pub choi_eigenvalues: Vec<f64>,
    pub trace_residual: f64,
    pub is_cptp: bool,
}

/// `½𝒮_U + ½𝒮_{U†}`.
pub fn symmetrized_superoperator(u: &UnitaryOp) -> Superoperator {
    let fwd = Superoperator::from_unitary(u);
    let bwd = Superoperator::from_unitary(&u.adjoint());
    Superoperator { dim: u.dim(), matrix: (&fwd.matrix + &bwd.matrix).scale_real(0.5) }
}

fn is_identity_map(m: &Superoperator) -> bool {
    m.matrix.max_abs_diff(&ComplexMatrix::identity(m.dim * m.dim)) <= 1e-12
}

/// Solves `½𝒰 + ½𝒰† = (1 − p_d)id + p_d𝒞` for `𝒞` and checks that it is a
/// channel.
pub fn extract_stochastic_reversibility(u: &UnitaryOp, p_d: f64) -> Result<DecompositionReport> {
    if !(0.0..=1.0).contains(&p_d) {
        return Err(Error::Param(format!("p_d must lie in [0, 1], got {p_d}")));
    }
    let m = symmetrized_superoperator(u);
    decompose(&m, p_d)
}

fn decompose(m: &Superoperator, p_d: f64) -> Result<DecompositionReport> {
    let n = m.dim * m.dim;
    let id = ComplexMatrix::identity(n);
    let channel = if p_d == 0.0 {
        if !is_identity_map(m) {
            return Err(Error::Decomposition(
                "p_d = 0 requires the symmetrized map to be the identity".into(),
            ));
        }
        Superoperator::identity(m.dim)
    } else {
        let c = (&m.matrix - &id.scale_real(1.0 - p_d)).scale_real(1.0 / p_d);
        Superoperator { dim: m.dim, matrix: c }
    };
    let rebuilt = &id.scale_real(1.0 - p_d) + &channel.matrix.scale_real(p_d);
    let residual_norm = rebuilt.max_abs_diff(&m.matrix);
    let choi = choi_matrix(&channel)?;
    let choi_eigenvalues = eig_hermitian(&choi)?.values;
    let trace_residual = channel.trace_preservation_residual();
    let min_eig = choi_eigenvalues.first().copied().unwrap_or(0.0);
    Ok(DecompositionReport {
        p_d,
        residual_channel: channel,
        residual_norm,
        choi_eigenvalues,
        trace_residual,
        is_cptp: min_eig >= CHOI_EIGEN_FLOOR && trace_residual <= TRACE_PRESERVATION_TOL,
    })
}

/// Smallest `p_d` for which the extracted `𝒞` is a channel.
///
/// Feasibility is monotone in `p_d`: the Choi matrix of `p_d𝒞` gains
/// `p_d·Λ_id ≥ 0` as `p_d` grows, so bisection applies.
pub fn find_minimal_pd(u: &UnitaryOp) -> Result<(f64, DecompositionReport)> {
    let m = symmetrized_superoperator(u);
    if is_identity_map(&m) {
        return Ok((0.0, decompose(&m, 0.0)?));
    }
    let top = decompose(&m, 1.0)?;
    if !top.is_cptp {
        return Err(Error::Decomposition(format!(
            "no p_d ≤ 1 yields a channel (min Choi eigenvalue {:e} at p_d = 1)",
            top.choi_eigenvalues[0]
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut best = top;
    while hi - lo > PD_SEARCH_TOL {
        let mid = 0.5 * (lo + hi);
        let report = decompose(&m, mid)?;
        if report.is_cptp {
            hi = mid;
            best = report;
        } else {
            lo = mid;
        }
    }
    Ok((hi, best))
}

/// `p_d` of the `U_a` factor of the resonant family, `sin²((a − 1)gt/2)`.
pub fn pd_resonant_a(a: f64, g: f64, t: f64) -> f64 {
    ((a - 1.0) * g * t / 2.0).sin().powi(2)
}

/// `p_d` of the `U_θ` factor of the resonant family, `sin²(gt)`.
pub fn pd_resonant_theta(g: f64, t: f64) -> f64 {
    (g * t).sin().powi(2)
}

/// `p_d` of the non-resonant family, `sin²(gt/2)`.
pub fn pd_nonresonant(g: f64, t: f64) -> f64 {
    (g * t / 2.0).sin().powi(2)
}

/// `p_d` of the partial SWAP, `sin²(gt)`.
pub fn pd_partial_swap(g: f64, t: f64) -> f64 {
    (g * t).sin().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// One stochastically reversible map with disturbance weight `α`.
    Single,
    /// Two sequential maps at `α = ½`.
    Sequential,
}

/// Interval that noncontextual models allow for `⟨ΔA⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NcBound {
    pub kind: BoundKind,
    pub a_max: f64,
    pub p_d1: f64,
    pub p_d2: f64,
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

impl NcBound {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value <= self.upper + tol && value >= self.lower - tol
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Param(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn check_a_max(a_max: f64) -> Result<()> {
    if !(a_max.is_finite() && a_max > 0.0) {
        return Err(Error::Param(format!("a_max must be positive, got {a_max}")));
    }
    Ok(())
}

/// `−a_max p_d/α² ≤ ⟨ΔA⟩ ≤ a_max p_d/α`.
pub fn nc_bound_theorem1(a_max: f64, p_d: f64, alpha: f64) -> Result<NcBound> {
    check_a_max(a_max)?;
    check_probability("p_d", p_d)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Param(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(NcBound {
        kind: BoundKind::Single,
        a_max,
        p_d1: p_d,
        p_d2: 0.0,
        alpha,
        lower: -a_max * p_d / (alpha * alpha),
        upper: a_max * p_d / alpha,
    })
}

/// `b₋ = p₁ + 3p₂ − 3p₁p₂`.
pub fn b_minus(p_d1: f64, p_d2: f64) -> f64 {
    p_d1 + 3.0 * p_d2 - 3.0 * p_d1 * p_d2
}

/// `b₊ = p₁ + 2p₂ − 2p₁p₂`.
pub fn b_plus(p_d1: f64, p_d2: f64) -> f64 {
    p_d1 + 2.0 * p_d2 - 2.0 * p_d1 * p_d2
}

/// `−4a_max b₋ ≤ ⟨ΔA⟩ ≤ 2a_max b₊` for two sequential maps.
pub fn nc_bound_theorem2(a_max: f64, p_d1: f64, p_d2: f64) -> Result<NcBound> {
    check_a_max(a_max)?;
    check_probability("p_d1", p_d1)?;
    check_probability("p_d2", p_d2)?;
    Ok(NcBound {
        kind: BoundKind::Sequential,
        a_max,
        p_d1,
        p_d2,
        alpha: 0.5,
        lower: -4.0 * a_max * b_minus(p_d1, p_d2),
        upper: 2.0 * a_max * b_plus(p_d1, p_d2),
    })
}

/// Bound for the resonant family, with the `U_θ` disturbance first and the
/// `U_a` disturbance second.
pub fn resonant_bound(a_max: f64, g: f64, a: f64, t: f64) -> Result<NcBound> {
    nc_bound_theorem2(a_max, pd_resonant_theta(g, t), pd_resonant_a(a, g, t))
}

/// `2ω[sin²(Jπt) + 2sin²(Jπt/2) − 2sin²(Jπt)sin²(Jπt/2)]`, the upper bound for
/// the NMR exchange coupling of strength `J`.
pub fn experiment_bound_bnc(omega: f64, j_coupling: f64, t: f64) -> f64 {
    let x = std::f64::consts::PI * j_coupling * t;
    let s1 = x.sin().powi(2);
    let s2 = (x / 2.0).sin().powi(2);
    2.0 * omega * (s1 + 2.0 * s2 - 2.0 * s1 * s2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    /// Heat meets the upper bound.
    Upper,
    /// Heat meets the lower bound.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub t: f64,
    pub kind: CrossingKind,
    /// True when the heat leaves the noncontextual interval at `t`.
    pub entering_violation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CriticalTimes {
    /// Sign changes in time order; the first is `τ_c`.
    pub crossings: Vec<Crossing>,
    /// Grid points where heat touches a bound without crossing it.
    pub grazing: Vec<Crossing>,
}

impl CriticalTimes {
    pub fn first(&self) -> Option<f64> {
        self.crossings.first().map(|c| c.t)
    }

    pub fn first_of(&self, kind: CrossingKind) -> Option<f64> {
        self.crossings.iter().find(|c| c.kind == kind).map(|c| c.t)
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a) <= CROSSING_REL_TOL * a.abs().max(b.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign changes of `heat − upper` and `heat − lower` on a uniform grid over
/// `[t_min, t_max]`.
///
/// `f_u = heat − upper` is positive inside an upper violation and `f_l = heat −
/// lower` negative inside a lower one. A zero at the first grid point (typically
/// `t = 0`, where everything vanishes) is never reported.
pub fn find_critical_times(
    heat: impl Fn(f64) -> f64,
    upper: impl Fn(f64) -> f64,
    lower: impl Fn(f64) -> f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<CriticalTimes> {
    if !(t_min.is_finite() && t_min >= 0.0 && t_max.is_finite() && t_max > t_min) {
        return Err(Error::Param(format!("need 0 ≤ t_min < t_max, got [{t_min}, {t_max}]")));
    }
    if points < 2 {
        return Err(Error::Param(format!("need at least 2 grid points, got {points}")));
    }
    let step = (t_max - t_min) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|k| t_min + k as f64 * step).collect();
    let fu = |t: f64| heat(t) - upper(t);
    let fl = |t: f64| heat(t) - lower(t);
    let vu: Vec<f64> = grid.iter().map(|&t| fu(t)).collect();
    let vl: Vec<f64> = grid.iter().map(|&t| fl(t)).collect();

    let mut out = CriticalTimes::default();
    scan(&grid, &vu, &fu, CrossingKind::Upper, &mut out);
    scan(&grid, &vl, &fl, CrossingKind::Lower, &mut out);
    out.crossings.sort_by(|a, b| a.t.total_cmp(&b.t));
    out.grazing.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(out)
}

fn scan(grid: &[f64], values: &[f64], f: &dyn Fn(f64) -> f64, kind: CrossingKind, out: &mut CriticalTimes) {
    // violation means f > 0 for the upper bound and f < 0 for the lower one
    let violating = |v: f64| match kind {
        CrossingKind::Upper => v > 0.0,
        CrossingKind::Lower => v < 0.0,
    };
    let n = values.len();
    for k in 0..n - 1 {
        let (a, b) = (values[k], values[k + 1]);
        if a == 0.0 {
            if k == 0 {
                continue;
            }
            let prev = values[k - 1];
            if prev != 0.0 && (prev > 0.0) == (b > 0.0) {
                out.grazing.push(Crossing { t: grid[k], kind, entering_violation: false });
            } else if prev != 0.0 && b != 0.0 {
                out.crossings.push(Crossing { t: grid[k], kind, entering_violation: violating(b) });
            }
        } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
            let t = bisect(f, grid[k], grid[k + 1]);
            out.crossings.push(Crossing { t, kind, entering_violation: violating(b) });
        }
    }
}

/// `acot` on the branch `(0, π)`.
fn acot(x: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 - x.atan()
}

/// Closed-form crossings of `ζ sin²(gt) + ξ sin(gt)cos(gt)` with the bounds
/// `2ω_max sin²(gt)` and `−4ω_max sin²(gt)`: `(τ_u, τ_l)`.
pub fn qutrit_critical_times_analytic(zeta: f64, xi: f64, omega_max: f64, g: f64) -> Result<(f64, f64)> {
    if xi == 0.0 {
        return Err(Error::Param("critical times need a nonzero coherent coefficient".into()));
    }
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::Param(format!("coupling must be positive, got {g}")));
    }
    let tau_u = acot((2.0 * omega_max - zeta) / xi) / g;
    let tau_l = acot((-4.0 * omega_max - zeta) / xi) / g;
    Ok((tau_u, tau_l))
}

/// `Φ = Σ_ij |ii⟩⟨jj|`, the Choi matrix of the identity channel.
pub fn maximally_entangled_projector(d: usize) -> ComplexMatrix {
    let v: Vec<C64> = (0..d * d).map(|k| if k / d == k % d { ONE } else { C64::new(0.0, 0.0) }).collect();
    ComplexMatrix::outer(&v, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{resonant_decomposition_factors, NonResonantInteraction, PartialSwapInteraction, Propagator, ResonantInteraction};
    use crate::linalg::pauli;
    use std::f64::consts::PI;

    fn random_operator(d: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let data = (0..d * d).map(|_| C64::new(next(), next())).collect();
        ComplexMatrix::from_vec(d, d, data).unwrap()
    }

    #[test]
    fn superoperator_reproduces_conjugation() {
        let u = PartialSwapInteraction::new(1.0, 2).unwrap().unitary(0.37);
        let s = Superoperator::from_unitary(&u);
        let x = random_operator(4, 3);
        let direct = u.matrix().conjugate(&x).unwrap();
        assert!(s.apply(&x).unwrap().max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn identity_unitary_gives_identity_superoperator() {
        let s = Superoperator::from_unitary(&UnitaryOp::identity(3));
        assert_eq!(s, Superoperator::identity(3));
    }

    #[test]
    fn sigma_x_superoperator_on_basis() {
        let u = UnitaryOp::new(pauli::x()).unwrap();
        let s = Superoperator::from_unitary(&u);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = ComplexMatrix::zeros(2, 2);
                e[(i, j)] = ONE;
                let mut flipped = ComplexMatrix::zeros(2, 2);
                flipped[(1 - i, 1 - j)] = ONE;
                assert_eq!(s.apply(&e).unwrap(), flipped);
            }
        }
    }

    #[test]
    fn full_swap_superoperator_swaps() {
        let u = PartialSwapInteraction::new(1.0, 2).unwrap().unitary(PI / 2.0);
        let s = Superoperator::from_unitary(&u);
        let a = random_operator(2, 7);
        let b = random_operator(2, 11);
        let out = s.apply(&kron(&a, &b)).unwrap();
        assert!(out.max_abs_diff(&kron(&b, &a)) < 1e-14);
    }

    #[test]
    fn choi_of_identity_is_entangled_projector() {
        let choi = choi_matrix(&Superoperator::identity(2)).unwrap();
        assert_eq!(choi.matrix(), &maximally_entangled_projector(2));
        let ev = eig_hermitian(&choi).unwrap().values;
        assert!((ev[3] - 2.0).abs() < 1e-12 && ev[..3].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn partial_swap_decomposes_into_swap() {
        let ps = PartialSwapInteraction::new(1.0, 3).unwrap();
        let t = 0.7;
        let report = extract_stochastic_reversibility(&ps.unitary(t), pd_partial_swap(1.0, t)).unwrap();
        assert!(report.is_cptp);
        let swap = UnitaryOp::new(crate::dynamics::swap_operator(3)).unwrap();
        let expected = Superoperator::from_unitary(&swap);
        assert!(report.residual_channel.matrix.max_abs_diff(&expected.matrix) < 1e-12);
    }

    #[test]
    fn nonresonant_channel_is_zz_conjugation() {
        let (g, t) = (1.3, 0.9);
        let u = Propagator::new(&NonResonantInteraction { g }.hamiltonian()).unwrap().unitary(t).unwrap();
        let report = extract_stochastic_reversibility(&u, pd_nonresonant(g, t)).unwrap();
        assert!(report.is_cptp);
        let zz = UnitaryOp::new(kron(&pauli::z(), &pauli::z())).unwrap();
        let expected = choi_matrix(&Superoperator::from_unitary(&zz)).unwrap();
        let got = choi_matrix(&report.residual_channel).unwrap();
        assert!(got.matrix().max_abs_diff(expected.matrix()) < 1e-10);
        let ev = &report.choi_eigenvalues;
        assert!((ev[15] - 4.0).abs() < 1e-9 && ev[..15].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn theta_factor_choi_matches_printed_matrix() {
        for theta in [0.0, PI / 4.0, PI / 2.0, 2.3] {
            let p = ResonantInteraction { g: 1.0, a: 0.0, theta };
            let t = 0.45;
            let (_, u2) = resonant_decomposition_factors(&p, t).unwrap();
            let report = extract_stochastic_reversibility(&u2, pd_resonant_theta(1.0, t)).unwrap();
            assert!(report.is_cptp);
            let mut v = vec![C64::new(0.0, 0.0); 16];
            v[0] = ONE;
            v[6] = -C64::from_polar(1.0, -theta);
            v[9] = -C64::from_polar(1.0, theta);
            v[15] = ONE;
            let printed = ComplexMatrix::outer(&v, &v);
            let got = choi_matrix(&report.residual_channel).unwrap();
            assert!(got.matrix().max_abs_diff(&printed) < 1e-10, "theta = {theta}");
        }
    }

    #[test]
    fn zero_pd_needs_identity_map() {
        let u = PartialSwapInteraction::new(1.0, 2).unwrap().unitary(0.3);
        assert!(matches!(extract_stochastic_reversibility(&u, 0.0), Err(Error::Decomposition(_))));
        let ok = extract_stochastic_reversibility(&UnitaryOp::identity(4), 0.0).unwrap();
        assert!(ok.is_cptp);
    }

    #[test]
    fn minimal_pd_search() {
        let (p, _) = find_minimal_pd(&UnitaryOp::identity(4)).unwrap();
        assert_eq!(p, 0.0);

        let u = PartialSwapInteraction::new(1.0, 2).unwrap().unitary(PI / 4.0);
        let (p, report) = find_minimal_pd(&u).unwrap();
        assert!((p - 0.5).abs() < 1e-8, "{p}");
        assert!(report.is_cptp);

        let params = ResonantInteraction { g: 1.0, a: 0.0, theta: 0.0 };
        let (u1, _) = resonant_decomposition_factors(&params, 0.6).unwrap();
        let (p, _) = find_minimal_pd(&u1).unwrap();
        assert!((p - 0.3_f64.sin().powi(2)).abs() < 1e-8, "{p}");
    }

    #[test]
    fn theorem1_examples() {
        let b = nc_bound_theorem1(1.0, 0.1, 1.0).unwrap();
        assert!((b.lower + 0.1).abs() < 1e-15 && (b.upper - 0.1).abs() < 1e-15);
        let b = nc_bound_theorem1(3.0, 0.2, 0.5).unwrap();
        assert!((b.lower + 4.0 * 3.0 * 0.2).abs() < 1e-14 && (b.upper - 2.0 * 3.0 * 0.2).abs() < 1e-14);
        let b = nc_bound_theorem1(3.0, 0.0, 0.7).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(nc_bound_theorem1(1.0, 1.2, 0.5).is_err());
        assert!(nc_bound_theorem1(1.0, 0.2, 0.0).is_err());
        assert!(nc_bound_theorem1(0.0, 0.2, 0.5).is_err());
    }

    #[test]
    fn theorem2_examples() {
        let b = nc_bound_theorem2(2.0, 1.0, 1.0).unwrap();
        assert_eq!((b.lower, b.upper), (-8.0, 4.0));
        let b = nc_bound_theorem2(2.0, 0.0, 0.0).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(nc_bound_theorem2(2.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn experiment_bound_matches_sequential_bound() {
        let (omega, j) = (1.0, 215.1);
        for t in [0.0, 1e-4, 1.855e-4, 3e-3] {
            let g = PI * j;
            let seq = resonant_bound(omega, g, 0.0, t).unwrap();
            assert!((experiment_bound_bnc(omega, j, t) - seq.upper).abs() < 1e-14);
        }
        assert_eq!(experiment_bound_bnc(1.0, j, 0.0), 0.0);
        // quadratic onset: shrinking t tenfold shrinks bound/t tenfold
        let ratio = |t: f64| experiment_bound_bnc(1.0, j, t) / t;
        assert!((ratio(1e-8) / ratio(1e-9) - 10.0).abs() < 1e-6);
    }

    #[test]
    fn qutrit_analytic_times() {
        let (zeta, xi, w, g) = (0.3, 0.2, 2.0, 1.5);
        let (tu, tl) = qutrit_critical_times_analytic(zeta, xi, w, g).unwrap();
        let heat = |t: f64| {
            let (s, c) = (g * t).sin_cos();
            zeta * s * s + xi * s * c
        };
        let up = |t: f64| 2.0 * w * (g * t).sin().powi(2);
        let lo = |t: f64| -4.0 * w * (g * t).sin().powi(2);
        assert!((heat(tu) - up(tu)).abs() < 1e-12);
        assert!((heat(tl) - lo(tl)).abs() < 1e-12);

        let found = find_critical_times(heat, up, lo, 0.0, 0.999 * PI / g, 20_000).unwrap();
        let fu = found.first_of(CrossingKind::Upper).unwrap();
        let fl = found.first_of(CrossingKind::Lower).unwrap();
        assert!((fu - tu).abs() <= 1e-8 * tu);
        assert!((fl - tl).abs() <= 1e-8 * tl);

        assert!(qutrit_critical_times_analytic(zeta, 0.0, w, g).is_err());
        let (tiny, _) = qutrit_critical_times_analytic(zeta, 1e-12, w, g).unwrap();
        assert!(tiny < 1e-10);
    }

    #[test]
    fn grazing_points_are_separate() {
        // heat touches the upper bound at t = 1 without crossing
        let found = find_critical_times(|t| -(t - 1.0).powi(2), |_| 0.0, |_| -10.0, 0.0, 2.0, 201).unwrap();
        assert!(found.crossings.is_empty());
        assert_eq!(found.grazing.len(), 1);
        assert!((found.grazing[0].t - 1.0).abs() < 1e-12);
    }
}
