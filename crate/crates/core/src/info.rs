//! Scalar information quantities on states and distributions: entropy,
//! coherence, logarithmic negativity, Gaussian fidelity, Bures and Hellinger
//! distances.
//!
//! Units: entropy and coherence are in bits (log2); logarithmic negativity is
//! in natural-log units.

use nalgebra::{Cholesky, Complex, DMatrix};

use crate::classical::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::gaussian::{
    det_small, symplectic_form, GaussianState,
};

/// Symplectic eigenvalues within this distance of 1 are treated as exactly
/// pure in the singular entropy limit.
const PURE_NU_TOL: f64 = 1e-12;

/// States whose covariance determinant is within this tolerance of 1 take the
/// dedicated pure-state fidelity branch, which stays accurate in the
/// near-identical-state regime used by the QFI finite differences.
const PURE_DET_TOL: f64 = 1e-9;

/// Von Neumann entropy in bits from the symplectic spectrum.
pub fn entropy(state: &GaussianState) -> f64 {
    let nus = crate::gaussian::symplectic_eigenvalues(state.cm())
        .expect("physical state has a symplectic spectrum");
    nus.iter().map(|&nu| entropy_term(nu)).sum()
}

fn entropy_term(nu: f64) -> f64 {
    if nu - 1.0 < PURE_NU_TOL {
        return 0.0;
    }
    let up = (nu + 1.0) / 2.0;
    let dn = (nu - 1.0) / 2.0;
    up * up.log2() - dn * dn.log2()
}

/// Coherence in bits: C = -S(rho) + sum_k [(n_k+1) log2(n_k+1) - n_k log2 n_k].
/// Zero on thermal states; maximal on pure states at fixed photon numbers.
pub fn coherence(state: &GaussianState) -> f64 {
    let s = entropy(state);
    let thermal_part: f64 = crate::gaussian::mean_photon_numbers(state)
        .iter()
        .map(|&n| {
            if n < PURE_NU_TOL {
                0.0
            } else {
                (n + 1.0) * (n + 1.0).log2() - n * n.log2()
            }
        })
        .sum();
    -s + thermal_part
}

/// Entanglement summary of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub nu_tilde: f64,
    /// E_N = max(0, -ln nu_tilde), natural-log units.
    pub log_negativity: f64,
}

/// Logarithmic negativity from the block invariants: with A = det alpha,
/// B = det beta, C = det gamma, D = det sigma,
/// 2 nu~^2 = (A + B - 2C) - sqrt((A + B - 2C)^2 - 4D).
pub fn log_negativity(state: &GaussianState) -> Result<EntanglementReport> {
    if state.modes() != 2 {
        return Err(Error::invalid("log_negativity needs a two-mode state"));
    }
    let (a, b, c) = state.cm().block_invariants()?;
    let d = state.cm().det();
    let h = a + b - 2.0 * c;
    let disc = (h * h - 4.0 * d).max(0.0);
    let nu_sq = 0.5 * (h - disc.sqrt());
    if !(nu_sq > 0.0) {
        return Err(Error::numerical(format!(
            "partial-transpose invariant produced nu~^2 = {nu_sq:.3e}"
        )));
    }
    let nu_tilde = nu_sq.sqrt();
    Ok(EntanglementReport {
        nu_tilde,
        log_negativity: (-nu_tilde.ln()).max(0.0),
    })
}

/// Uhlmann fidelity F = [Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2 in closed form
/// for 1- and 2-mode Gaussian states. Clamped to [0, 1].
pub fn gaussian_fidelity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    Ok(log_fidelity(s1, s2)?.exp().clamp(0.0, 1.0))
}

/// Bures distance squared d_B^2 = 2 (1 - sqrt(F)), evaluated through the log
/// branch so that near-identical states keep full relative accuracy.
pub fn bures_distance_sq(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    Ok(bures_distance_sq_signed(s1, s2)?.max(0.0))
}

/// As `bures_distance_sq` but without the final clamp; rounding can drive the
/// value a hair negative and the QFI engine wants to see that sign.
pub(crate) fn bures_distance_sq_signed(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    let lf = log_fidelity(s1, s2)?;
    // 2 (1 - e^{lf/2})
    Ok(-2.0 * f64::exp_m1(0.5 * lf))
}

fn log_fidelity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.modes() != s2.modes() {
        return Err(Error::invalid("fidelity needs equal mode counts"));
    }
    let m1 = s1.cm().matrix();
    let m2 = s2.cm().matrix();
    let dim = s1.dim();
    let sum = m1 + m2;
    let delta = s2.disp().vector() - s1.disp().vector();

    let chol = Cholesky::new(sum.clone()).ok_or_else(|| {
        Error::numerical("covariance sum is numerically singular in fidelity")
    })?;
    let x = -0.5 * delta.dot(&chol.solve(&delta));

    let det1 = s1.cm().det();
    let det2 = s2.cm().det();
    let big_delta = det_small(&sum);
    if !(big_delta > 0.0) {
        return Err(Error::numerical("non-positive det(sigma1 + sigma2)"));
    }

    // Pure x pure: F = exp(x) / sqrt(det((sigma1 + sigma2)/2)).
    if (det1 - 1.0).abs() <= PURE_DET_TOL && (det2 - 1.0).abs() <= PURE_DET_TOL {
        let half_det = big_delta / f64::powi(2.0, dim as i32);
        return Ok(x - 0.5 * half_det.ln());
    }

    if dim == 2 {
        let lambda = (flush_det_noise(det1 - 1.0, entry_scale(m1).powi(2))
            * flush_det_noise(det2 - 1.0, entry_scale(m2).powi(2)))
        .max(0.0);
        // F = 2 (sqrt(Delta + Lambda) + sqrt(Lambda)) / Delta * e^x
        Ok(f64::ln(2.0) + ((big_delta + lambda).sqrt() + lambda.sqrt()).ln() - big_delta.ln() + x)
    } else {
        let omega = symplectic_form(4);
        let prod = &omega * m1 * &omega * m2 - DMatrix::identity(4, 4);
        let gamma = det_small(&prod).max(0.0);
        let l1 = flush_det_noise(hermitian_offset_det(m1, &omega), entry_scale(m1).powi(4));
        let l2 = flush_det_noise(hermitian_offset_det(m2, &omega), entry_scale(m2).powi(4));
        let lambda = (l1 * l2).max(0.0);
        let b = gamma.sqrt() + lambda.sqrt();
        let t = (b * b - big_delta).max(0.0);
        // F = 4 (B + sqrt(B^2 - Delta)) / Delta * e^x
        Ok(f64::ln(4.0) + (b + t.sqrt()).ln() - big_delta.ln() + x)
    }
}

fn entry_scale(m: &DMatrix<f64>) -> f64 {
    m.amax().max(1.0)
}

/// Determinant offsets like det(sigma + i Omega) vanish identically on pure
/// states; what floating arithmetic leaves behind is rounding noise which a
/// later square root would amplify to ~1e-8. Values below the determinant
/// rounding floor are flushed to the exact zero.
fn flush_det_noise(value: f64, magnitude: f64) -> f64 {
    if value.abs() < 32.0 * f64::EPSILON * magnitude {
        0.0
    } else {
        value
    }
}

/// det(sigma + i Omega); Hermitian, so the determinant is real.
fn hermitian_offset_det(m: &DMatrix<f64>, omega: &DMatrix<f64>) -> f64 {
    let c = DMatrix::from_fn(4, 4, |i, j| Complex::new(m[(i, j)], omega[(i, j)]));
    det4_complex(&c).re
}

fn det4_complex(m: &DMatrix<Complex<f64>>) -> Complex<f64> {
    let minor = |c0: usize, c1: usize| m[(2, c0)] * m[(3, c1)] - m[(2, c1)] * m[(3, c0)];
    let m01 = minor(0, 1);
    let m02 = minor(0, 2);
    let m03 = minor(0, 3);
    let m12 = minor(1, 2);
    let m13 = minor(1, 3);
    let m23 = minor(2, 3);
    m[(0, 0)] * (m[(1, 1)] * m23 - m[(1, 2)] * m13 + m[(1, 3)] * m12)
        - m[(0, 1)] * (m[(1, 0)] * m23 - m[(1, 2)] * m03 + m[(1, 3)] * m02)
        + m[(0, 2)] * (m[(1, 0)] * m13 - m[(1, 1)] * m03 + m[(1, 3)] * m01)
        - m[(0, 3)] * (m[(1, 0)] * m12 - m[(1, 1)] * m02 + m[(1, 2)] * m01)
}

/// Squared Hellinger distance d_H^2 = sum (sqrt p - sqrt q)^2 between
/// distributions on the same outcome space.
pub fn hellinger_distance_sq(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid(
            "Hellinger distance needs a common outcome space",
        ));
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum())
}
