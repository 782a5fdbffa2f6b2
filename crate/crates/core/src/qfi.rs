//! Quantum Fisher information for the squeezing-estimation protocol:
//! theta-resolved QFI, phase-averaged QFI, the quantum Cramer-Rao bound, and
//! the analytic bound curves.
//!
//! The channel applies rotation(theta), then squeezer(eps), then
//! rotation(theta) to mode A; mode B propagates untouched (its dynamical
//! phase is removed). All QFI values are evaluated at the working point
//! eps = 0, the regime in which the bound curves depend on the photon number
//! alone. The QFI itself comes from the Bures expansion
//! d_B^2 = (1/4) H delta^2 + O(delta^3), finite-differenced on the audited
//! Gaussian fidelity with a Richardson step; the Fock-space referee provides
//! the independent route.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::info::bures_distance_sq_signed;
use crate::symplectic::{apply, embed_on_mode_a, rotation, squeezer, SymplecticMatrix};

/// Quadrature + finite-difference settings for QFI evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiConfig {
    /// Number of theta nodes on [0, 2pi); power of two, at least 16.
    pub nodes: usize,
    /// Squeezing offset for the Bures finite difference.
    pub delta: f64,
}

impl Default for QfiConfig {
    fn default() -> Self {
        QfiConfig {
            nodes: 128,
            delta: 1e-3,
        }
    }
}

/// Threshold below which an intermediate H(theta) is flagged as genuinely
/// negative rather than rounding noise.
pub const NEGATIVE_H_TOL: f64 = 1e-6;

/// Convergence requirement on the node-doubling delta of the average.
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// Phase-averaged QFI with convergence metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiReport {
    /// (theta, H(theta)) on the uniform quadrature grid.
    pub theta_samples: Vec<(f64, f64)>,
    /// Trapezoid average over [0, 2pi); clamped at zero.
    pub avg_qfi: f64,
    pub quadrature_nodes: usize,
    /// |average at `nodes` - average at `nodes`/2|.
    pub convergence_delta: f64,
    /// False when `convergence_delta` exceeds the tolerance.
    pub converged: bool,
    /// True when some intermediate H(theta) fell below -NEGATIVE_H_TOL.
    pub negative_intermediate: bool,
}

impl QfiReport {
    pub fn flags(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.converged {
            f.push("nonconverged");
        }
        if self.negative_intermediate {
            f.push("negative-h");
        }
        f
    }
}

/// The estimation channel at phase theta and squeezing eps, sized for the
/// given mode count.
pub fn encoding_symplectic(theta: f64, eps: f64, modes: usize) -> Result<SymplecticMatrix> {
    let local = rotation(theta)
        .compose(&squeezer(eps))?
        .compose(&rotation(theta))?;
    match modes {
        1 => Ok(local),
        2 => embed_on_mode_a(&local),
        m => Err(Error::invalid(format!("unsupported mode count {m}"))),
    }
}

/// Pointwise QFI H(theta) at eps = 0: forward Bures difference
/// H(d) = 8 (1 - sqrt(F(rho_0, rho_d))) / d^2 extrapolated over {delta,
/// delta/2}. Small negative values are rounding noise and left signed so
/// callers can inspect them.
pub fn qfi_at_theta(state: &GaussianState, theta: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1e-2) {
        return Err(Error::invalid("delta must lie in (0, 1e-2]"));
    }
    let s0 = encoding_symplectic(theta, 0.0, state.modes())?;
    let rho0 = apply(&s0, state)?;
    let h_at = |d: f64| -> Result<f64> {
        let sd = encoding_symplectic(theta, d, state.modes())?;
        let rhod = apply(&sd, state)?;
        let db2 = bures_distance_sq_signed(&rho0, &rhod).map_err(|e| {
            Error::numerical(format!(
                "fidelity failed at theta={theta}, delta={d}: {e}; cm = {:?}",
                state.cm().matrix().as_slice()
            ))
        })?;
        Ok(4.0 * db2 / (d * d))
    };
    let h_full = h_at(delta)?;
    let h_half = h_at(0.5 * delta)?;
    Ok(2.0 * h_half - h_full)
}

/// Phase-averaged QFI over theta in [0, 2pi) by trapezoid quadrature on a
/// uniform grid (for a periodic integrand this is the plain node average).
/// Deterministic: nodes evaluate in parallel and assemble in grid order.
pub fn avg_qfi(state: &GaussianState, nodes: usize, delta: f64) -> Result<QfiReport> {
    if nodes < 16 || !nodes.is_power_of_two() {
        return Err(Error::invalid(
            "quadrature nodes must be a power of two, at least 16",
        ));
    }
    let step = 2.0 * std::f64::consts::PI / nodes as f64;
    let samples: Vec<(f64, f64)> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * step;
            qfi_at_theta(state, theta, delta).map(|h| (theta, h))
        })
        .collect::<Result<_>>()?;

    let mean_all = samples.iter().map(|&(_, h)| h).sum::<f64>() / nodes as f64;
    let mean_half = samples
        .iter()
        .step_by(2)
        .map(|&(_, h)| h)
        .sum::<f64>()
        / (nodes / 2) as f64;
    let convergence_delta = (mean_all - mean_half).abs();
    let negative_intermediate = samples.iter().any(|&(_, h)| h < -NEGATIVE_H_TOL);
    Ok(QfiReport {
        theta_samples: samples,
        avg_qfi: mean_all.max(0.0),
        quadrature_nodes: nodes,
        convergence_delta,
        converged: convergence_delta <= CONVERGENCE_TOL,
        negative_intermediate,
    })
}

/// Phase-averaged QFI with the default configuration.
pub fn avg_qfi_default(state: &GaussianState) -> Result<QfiReport> {
    let cfg = QfiConfig::default();
    avg_qfi(state, cfg.nodes, cfg.delta)
}

/// The analytic bound curves of the protocol, all equal to 2 at n_A = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFamily {
    /// 4 n^2 + 4 n + 2; reached by pure squeezed states (and TMSV).
    PureSqueezedUpper,
    /// 4 (2n+1)^2 / (1 + (2n+1)^2); reached by thermal states.
    ThermalLower,
    /// 4 n + 2; the best coherent-state value.
    Coherent,
    /// 3 - 1/(1 + 2n) + 2n; cap for uncorrelated two-mode states.
    SeparableUpper,
    /// 4 n + 2; discordant states top out at the coherent value.
    DiscordUpper,
    /// The log-negativity relation evaluated on the pure two-mode squeezed
    /// family, where E_N = 2 asinh(sqrt(n)); reduces to the squeezed upper
    /// bound.
    EntangledLogneg,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 6] = [
        BoundFamily::PureSqueezedUpper,
        BoundFamily::ThermalLower,
        BoundFamily::Coherent,
        BoundFamily::SeparableUpper,
        BoundFamily::DiscordUpper,
        BoundFamily::EntangledLogneg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::PureSqueezedUpper => "pure-squeezed-upper",
            BoundFamily::ThermalLower => "thermal-lower",
            BoundFamily::Coherent => "coherent",
            BoundFamily::SeparableUpper => "separable-upper",
            BoundFamily::DiscordUpper => "discord-upper",
            BoundFamily::EntangledLogneg => "entangled-logneg",
        }
    }
}

impl std::str::FromStr for BoundFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown bound family '{s}'")))
    }
}

impl std::fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed-form bound value at mode-A photon number n_a.
pub fn bound_curve(family: BoundFamily, n_a: f64) -> Result<f64> {
    if !(n_a >= 0.0) {
        return Err(Error::invalid("bound curves need n_A >= 0"));
    }
    Ok(match family {
        BoundFamily::PureSqueezedUpper => 4.0 * n_a * n_a + 4.0 * n_a + 2.0,
        BoundFamily::ThermalLower => {
            let v = 2.0 * n_a + 1.0;
            4.0 * v * v / (1.0 + v * v)
        }
        BoundFamily::Coherent | BoundFamily::DiscordUpper => 4.0 * n_a + 2.0,
        BoundFamily::SeparableUpper => 3.0 - 1.0 / (1.0 + 2.0 * n_a) + 2.0 * n_a,
        BoundFamily::EntangledLogneg => {
            avg_qfi_vs_logneg(n_a, 2.0 * n_a.sqrt().asinh())
        }
    })
}

/// Average QFI as a function of mode-A photon number and log-negativity:
/// 2 + 8 n (1+n) / (1 + (2 + 4n - nu~) nu~) with nu~ = exp(-E_N).
pub fn avg_qfi_vs_logneg(n_a: f64, e_n: f64) -> f64 {
    let nu = (-e_n).exp();
    2.0 + 8.0 * n_a * (1.0 + n_a) / (1.0 + (2.0 + 4.0 * n_a - nu) * nu)
}

/// Quantum Cramer-Rao bound on the squeezing estimate over M repetitions.
pub fn quantum_crb(avg_qfi: f64, m_copies: u64) -> Result<f64> {
    if !(avg_qfi > 0.0) {
        return Err(Error::invalid("average QFI must be > 0"));
    }
    if m_copies == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    Ok(1.0 / (m_copies as f64 * avg_qfi).sqrt())
}

/// Classical Fisher information of a homodyne measurement of the quadrature
/// at `quadrature_angle` on the encoded single-mode state: the marginal is
/// Gaussian with eps-dependent mean and variance, so
/// I = m'^2 / v + v'^2 / (2 v^2) in closed form at eps = 0.
/// Braunstein-Caves bounds this by the QFI at the same theta.
pub fn homodyne_classical_fi(
    state: &GaussianState,
    theta: f64,
    quadrature_angle: f64,
) -> Result<f64> {
    if state.modes() != 1 {
        return Err(Error::invalid("homodyne FI is defined on one mode here"));
    }
    let s0 = encoding_symplectic(theta, 0.0, 1)?;
    // d/d eps of R(theta) Sq(eps) R(theta) at 0 is R(theta) Z R(theta)
    let z = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let w = rotation(theta).matrix() * z * rotation(theta).matrix();
    let e = nalgebra::DVector::from_row_slice(&[quadrature_angle.cos(), quadrature_angle.sin()]);

    let sigma = state.cm().matrix();
    let u = state.disp().vector();
    let s0m = s0.matrix();

    let mean_d = e.dot(&(&w * u));
    let var0 = e.dot(&(s0m * sigma * s0m.transpose() * &e));
    let var_d = e.dot(&(&w * sigma * s0m.transpose() * &e))
        + e.dot(&(s0m * sigma * w.transpose() * &e));
    Ok(mean_d * mean_d / var0 + var_d * var_d / (2.0 * var0 * var0))
}

/// State family for the scaling-exponent check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingFamily {
    SqueezedPure,
    Coherent,
    Thermal,
}

impl ScalingFamily {
    pub fn state_at(&self, n: f64) -> Result<GaussianState> {
        match self {
            ScalingFamily::SqueezedPure => GaussianState::squeezed_vacuum(n.sqrt().asinh()),
            ScalingFamily::Coherent => GaussianState::coherent(2.0 * n.sqrt(), 0.0),
            ScalingFamily::Thermal => GaussianState::thermal(n),
        }
    }
}

/// Asymptotic scaling exponent of the average QFI versus photon number.
///
/// Consecutive log-log slopes of a power law with a 1/n correction satisfy
/// s_i = p - c w_i with w_i = (1/n_i - 1/n_{i+1}) / ln(n_{i+1}/n_i); the last
/// two slopes eliminate c (a Richardson step), returning p. The grid must be
/// increasing and span at least one decade.
pub fn heisenberg_scaling_check(family: ScalingFamily, n_grid: &[f64]) -> Result<f64> {
    if n_grid.len() < 3 {
        return Err(Error::invalid("need at least three grid points"));
    }
    if n_grid.windows(2).any(|w| !(w[1] > w[0])) || !(n_grid[0] > 0.0) {
        return Err(Error::invalid("n grid must be positive and increasing"));
    }
    if n_grid[n_grid.len() - 1] / n_grid[0] < 10.0 {
        return Err(Error::invalid("n grid must span at least one decade"));
    }
    let cfg = QfiConfig::default();
    let h: Vec<f64> = n_grid
        .iter()
        .map(|&n| Ok(avg_qfi(&family.state_at(n)?, cfg.nodes, cfg.delta)?.avg_qfi))
        .collect::<Result<_>>()?;

    let k = n_grid.len() - 1;
    let slope = |i: usize| (h[i + 1].ln() - h[i].ln()) / (n_grid[i + 1].ln() - n_grid[i].ln());
    let weight =
        |i: usize| (1.0 / n_grid[i] - 1.0 / n_grid[i + 1]) / (n_grid[i + 1] / n_grid[i]).ln();
    let (s1, s2) = (slope(k - 2), slope(k - 1));
    let (w1, w2) = (weight(k - 2), weight(k - 1));
    Ok((s2 * w1 - s1 * w2) / (w1 - w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_qfi_is_two() {
        let vac = GaussianState::vacuum(1);
        for theta in [0.0, 0.61, 2.5] {
            assert_relative_eq!(
                qfi_at_theta(&vac, theta, 1e-3).unwrap(),
                2.0,
                epsilon = 1e-4
            );
        }
        let rep = avg_qfi_default(&vac).unwrap();
        assert_relative_eq!(rep.avg_qfi, 2.0, epsilon = 1e-4);
        assert!(rep.converged);
        assert!(!rep.negative_intermediate);
    }

    #[test]
    fn thermal_qfi_matches_lower_bound_everywhere() {
        for nbar in [0.5, 1.0, 2.0] {
            let st = GaussianState::thermal(nbar).unwrap();
            let expect = bound_curve(BoundFamily::ThermalLower, nbar).unwrap();
            for theta in [0.0, 0.37, 1.9] {
                let h = qfi_at_theta(&st, theta, 1e-3).unwrap();
                assert_relative_eq!(h, expect, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn coherent_average_is_linear_curve() {
        for n in [0.5f64, 1.0, 2.0] {
            let st = GaussianState::coherent(2.0 * n.sqrt(), 0.0).unwrap();
            let rep = avg_qfi_default(&st).unwrap();
            assert_relative_eq!(rep.avg_qfi, 4.0 * n + 2.0, max_relative = 1e-3);
        }
    }

    #[test]
    fn squeezed_average_is_quadratic_curve() {
        for n in [0.5f64, 1.0, 2.0] {
            let st = GaussianState::squeezed_vacuum(n.sqrt().asinh()).unwrap();
            let rep = avg_qfi_default(&st).unwrap();
            assert_relative_eq!(
                rep.avg_qfi,
                4.0 * n * n + 4.0 * n + 2.0,
                max_relative = 1e-3
            );
        }
    }

    #[test]
    fn squeezed_pointwise_period_is_pi() {
        let st = GaussianState::squeezed_vacuum(0.5).unwrap();
        for theta in [0.2, 0.9] {
            let a = qfi_at_theta(&st, theta, 1e-3).unwrap();
            let b = qfi_at_theta(&st, theta + std::f64::consts::PI, 1e-3).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6);
        }
    }

    #[test]
    fn tmsv_matches_squeezed_upper() {
        for n in [0.5f64, 1.0] {
            let st = GaussianState::tmsv(n.sqrt().asinh()).unwrap();
            let rep = avg_qfi_default(&st).unwrap();
            assert_relative_eq!(
                rep.avg_qfi,
                4.0 * n * n + 4.0 * n + 2.0,
                max_relative = 1e-3
            );
        }
    }

    #[test]
    fn bound_values() {
        assert_relative_eq!(
            bound_curve(BoundFamily::PureSqueezedUpper, 1.0).unwrap(),
            10.0
        );
        assert_relative_eq!(bound_curve(BoundFamily::ThermalLower, 1.0).unwrap(), 3.6);
        assert_relative_eq!(
            bound_curve(BoundFamily::SeparableUpper, 1.0).unwrap(),
            14.0 / 3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(bound_curve(BoundFamily::Coherent, 1.0).unwrap(), 6.0);
        for f in BoundFamily::ALL {
            assert_relative_eq!(bound_curve(f, 0.0).unwrap(), 2.0, epsilon = 1e-12);
        }
        assert!(bound_curve(BoundFamily::Coherent, -0.5).is_err());
    }

    #[test]
    fn logneg_relation_values_and_tmsv_identity() {
        assert_relative_eq!(avg_qfi_vs_logneg(0.0, 0.0), 2.0);
        let e = (-1.0f64).exp();
        let direct = 2.0 + 16.0 / (1.0 + (6.0 - e) * e);
        assert_relative_eq!(avg_qfi_vs_logneg(1.0, 1.0), direct, epsilon = 1e-14);
        assert_relative_eq!(direct, 7.208432748289638, epsilon = 1e-12);
        // TMSV reduction: n = sinh^2 r, E_N = 2r collapses to the upper bound
        for r in [0.1f64, 0.7, 1.5] {
            let n = r.sinh().powi(2);
            assert_relative_eq!(
                avg_qfi_vs_logneg(n, 2.0 * r),
                4.0 * n * n + 4.0 * n + 2.0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn crb_values_and_scaling() {
        assert_relative_eq!(quantum_crb(2.0, 1).unwrap(), 0.5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(quantum_crb(10.0, 100).unwrap(), 1.0 / 1000f64.sqrt());
        let r = quantum_crb(5.0, 100).unwrap() / quantum_crb(5.0, 400).unwrap();
        assert_relative_eq!(r, 2.0, epsilon = 1e-12);
        assert!(quantum_crb(0.0, 1).is_err());
        assert!(quantum_crb(1.0, 0).is_err());
    }

    #[test]
    fn homodyne_saturates_on_vacuum_axis() {
        let vac = GaussianState::vacuum(1);
        assert_relative_eq!(
            homodyne_classical_fi(&vac, 0.0, 0.0).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        // off-axis stays within [0, 2]
        for k in 0..8 {
            let phi = k as f64 * std::f64::consts::PI / 8.0;
            let fi = homodyne_classical_fi(&vac, 0.0, phi).unwrap();
            assert!((0.0..=2.0 + 1e-12).contains(&fi), "phi={phi}, fi={fi}");
        }
    }

    #[test]
    fn homodyne_below_qfi_on_thermal() {
        let st = GaussianState::thermal(1.0).unwrap();
        for k in 0..8 {
            let phi = k as f64 * 0.4;
            let fi = homodyne_classical_fi(&st, 0.3, phi).unwrap();
            assert!(fi <= 3.6 + 1e-6);
        }
    }

    #[test]
    fn scaling_exponents() {
        let grid = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
        let sq = heisenberg_scaling_check(ScalingFamily::SqueezedPure, &grid).unwrap();
        assert!((1.9..=2.1).contains(&sq), "squeezed exponent {sq}");
        let coh = heisenberg_scaling_check(ScalingFamily::Coherent, &grid).unwrap();
        assert!((0.9..=1.1).contains(&coh), "coherent exponent {coh}");
        let th = heisenberg_scaling_check(ScalingFamily::Thermal, &grid).unwrap();
        assert!(th.abs() < 0.1, "thermal exponent {th}");
    }

    #[test]
    fn config_validation() {
        let vac = GaussianState::vacuum(1);
        assert!(avg_qfi(&vac, 12, 1e-3).is_err());
        assert!(avg_qfi(&vac, 48, 1e-3).is_err());
        assert!(qfi_at_theta(&vac, 0.0, 0.0).is_err());
        assert!(qfi_at_theta(&vac, 0.0, 0.1).is_err());
        assert!(heisenberg_scaling_check(ScalingFamily::Coherent, &[1.0, 2.0, 3.0]).is_err());
    }
}
