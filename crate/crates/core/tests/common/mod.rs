#![allow(dead_code)]

use std::f64::consts::PI;

use contextual_heat::linalg::{expm_hermitian_generator, ComplexMatrix, HermitianOp, UnitaryOp, C64};
use contextual_heat::states::{two_qubit_thermal, two_qutrit_thermal, TwoQubitThermalParams, TwoQutritThermalParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn small_complex(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::from_polar(scale * rng.gen::<f64>(), uniform(rng, 0.0, 2.0 * PI))
}

/// Random resonant two-qubit state with thermal marginals, all coherences
/// switched on. Draws are rejected until the matrix is positive.
pub fn random_qubit_params(rng: &mut ChaCha8Rng) -> TwoQubitThermalParams {
    loop {
        let omega = uniform(rng, 0.5, 2.0);
        let base = TwoQubitThermalParams::product(omega, uniform(rng, 0.1, 3.0), uniform(rng, 0.1, 3.0));
        let [p00, p01, p10, p11] = base.populations();
        let floor = p00.min(p01).min(p10).min(p11);
        let p = TwoQubitThermalParams {
            nu0: uniform(rng, -0.3, 0.3) * floor,
            nu1: small_complex(rng, 0.1 * floor),
            nu2: small_complex(rng, 0.1 * floor),
            gamma: small_complex(rng, 0.1 * floor),
            eta: uniform(rng, -0.9, 0.9) * (p01 * p10).sqrt(),
            xi: uniform(rng, 0.0, 2.0 * PI),
            ..base
        };
        if two_qubit_thermal(&p).is_ok() {
            return p;
        }
    }
}

pub fn random_qutrit_params(rng: &mut ChaCha8Rng) -> TwoQutritThermalParams {
    let w1 = uniform(rng, 0.2, 1.5);
    let w2 = w1 + uniform(rng, 0.2, 1.5);
    let base = TwoQutritThermalParams::product([0.0, w1, w2], uniform(rng, 0.1, 2.0), uniform(rng, 0.1, 2.0));
    let p = base.populations();
    let mut eta = |i: usize, j: usize| uniform(rng, -0.95, 0.95) * (p[i] * p[j]).sqrt();
    let (e31, e62, e75) = (eta(1, 3), eta(2, 6), eta(5, 7));
    let params = TwoQutritThermalParams {
        eta31: e31,
        eta62: e62,
        eta75: e75,
        theta31: uniform(rng, 0.0, 2.0 * PI),
        theta62: uniform(rng, 0.0, 2.0 * PI),
        theta75: uniform(rng, 0.0, 2.0 * PI),
        ..base
    };
    two_qutrit_thermal(&params).expect("disjoint 2x2 blocks below the population bound are positive");
    params
}

/// Random Hermitian generator that commutes with the diagonal `h0`: only
/// entries between degenerate levels are filled.
pub fn random_conserving_generator(rng: &mut ChaCha8Rng, h0_diag: &[f64]) -> HermitianOp {
    let n = h0_diag.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(uniform(rng, -1.0, 1.0), 0.0);
        for j in i + 1..n {
            if (h0_diag[i] - h0_diag[j]).abs() < 1e-12 {
                let z = C64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
    }
    HermitianOp::new(m).unwrap()
}

pub fn random_conserving_unitary(rng: &mut ChaCha8Rng, h0_diag: &[f64]) -> UnitaryOp {
    let h = random_conserving_generator(rng, h0_diag);
    let t = uniform(rng, 0.0, 3.0);
    UnitaryOp::new(expm_hermitian_generator(&h, C64::new(0.0, -t)).unwrap()).unwrap()
}

/// Diagonal of `H_A ⊗ 𝟙 + 𝟙 ⊗ H_B` for diagonal locals.
pub fn total_energy_diag(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianOp {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(uniform(rng, -1.0, 1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOp::new(m).unwrap()
}
