//! Independent brute-force referee: truncated Fock-space density matrices for
//! the Gaussian state families, spectral-decomposition QFI and fidelity.
//! Used by tests and the `verify` CLI path only; not a performance path.
//!
//! The squeezer unitary is exp(eps/2 (adag^2 - a^2)), the sign that stretches
//! the q quadrature, matching the covariance-matrix form diag(e^eps, e^-eps).

use nalgebra::{Complex, DMatrix, linalg::SymmetricEigen};

use crate::error::{Error, Result};

type C64 = Complex<f64>;
type CMat = DMatrix<C64>;

/// Default per-mode truncation for oracle runs on nbar <= 2 states.
pub const DEFAULT_ORACLE_DIM: usize = 60;
/// Default acceptable population leak past the truncation.
pub const DEFAULT_LEAK_TOL: f64 = 1e-8;
/// Eigenvalue-pair cutoff in the SLD sum, 2 |<j|drho|k>|^2 / (p_j + p_k).
pub const DEFAULT_SLD_CUTOFF: f64 = 1e-10;

const HERMITICITY_TOL: f64 = 1e-10;

/// Hermitian eigendecomposition robust to exactly-zero rows.
///
/// Oracle construction leaves whole Fock rows exactly zero (vacuum, Schmidt
/// vectors), and the plain tridiagonalization produces NaNs on such inputs;
/// zero rows are deflated to (0, e_i) pairs and the dense core is
/// decomposed on its own.
fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = m.nrows();
    let support: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|j| m[(i, j)] != C64::new(0.0, 0.0)))
        .collect();
    let (vals, vecs) = if support.is_empty() {
        (vec![0.0; n], CMat::identity(n, n))
    } else if support.len() == n {
        let eig = SymmetricEigen::new(m.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    } else {
        let k = support.len();
        let sub = DMatrix::from_fn(k, k, |r, c| m[(support[r], support[c])]);
        let eig = SymmetricEigen::new(sub);
        let mut vals = vec![0.0; n];
        let mut vecs = CMat::zeros(n, n);
        for (col, &val) in eig.eigenvalues.iter().enumerate() {
            vals[col] = val;
            for (row, &src) in support.iter().enumerate() {
                vecs[(src, col)] = eig.eigenvectors[(row, col)];
            }
        }
        let mut next = k;
        for i in 0..n {
            if !support.contains(&i) {
                vecs[(i, next)] = C64::new(1.0, 0.0);
                next += 1;
            }
        }
        (vals, vecs)
    };
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(
            "Hermitian eigensolver returned non-finite spectrum",
        ));
    }
    Ok((vals, vecs))
}

/// Matrix acting on the truncated single-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    mat: CMat,
}

impl FockOperator {
    /// Annihilation operator, <n-1|a|n> = sqrt(n).
    pub fn annihilation(dim: usize) -> Self {
        let mut m = CMat::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        FockOperator { dim, mat: m }
    }

    pub fn number(dim: usize) -> Self {
        let mut m = CMat::zeros(dim, dim);
        for n in 0..dim {
            m[(n, n)] = C64::new(n as f64, 0.0);
        }
        FockOperator { dim, mat: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

/// Truncated density matrix: Hermitian, positive semidefinite, trace within
/// the leak budget of one.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    dim: usize,
    mat: CMat,
}

impl FockDensityMatrix {
    pub fn new(mat: CMat, leak_tol: f64) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim == 0 {
            return Err(Error::invalid("density matrix must be square"));
        }
        let herm_defect = (&mat - mat.adjoint()).map(|z| z.norm()).max();
        if herm_defect > HERMITICITY_TOL {
            return Err(Error::numerical(format!(
                "density matrix not Hermitian: defect {herm_defect:.3e}"
            )));
        }
        let (eigs, _) = hermitian_eigen(&mat)?;
        let min_eig = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::numerical(format!(
                "density matrix not PSD: min eigenvalue {min_eig:.3e}"
            )));
        }
        let tr = mat.diagonal().iter().map(|z| z.re).sum::<f64>();
        if tr > 1.0 + 1e-9 || tr < 1.0 - leak_tol {
            return Err(Error::Truncation {
                leak: 1.0 - tr,
                tol: leak_tol,
                suggested: 2 * dim,
            });
        }
        Ok(FockDensityMatrix { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn mean_photon(&self) -> f64 {
        self.mat
            .diagonal()
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.re)
            .sum()
    }

    /// Quadrature means (<q>, <p>) with q = a + adag, p = -i(a - adag).
    pub fn quadrature_means(&self) -> (f64, f64) {
        let a = FockOperator::annihilation(self.dim);
        let exp_a: C64 = (&self.mat * a.matrix()).trace();
        (2.0 * exp_a.re, 2.0 * exp_a.im)
    }

    /// Population at and above level `from`.
    pub fn tail_population(&self, from: usize) -> f64 {
        self.mat
            .diagonal()
            .iter()
            .skip(from)
            .map(|z| z.re)
            .sum()
    }
}

/// Single-mode oracle families. TMSV lives in `TwoModePureState`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FockStateSpec {
    /// Coherent state of complex amplitude alpha; displacement (2 Re, 2 Im).
    Coherent { alpha: C64 },
    Thermal { nbar: f64 },
    /// Squeezed vacuum, cm = diag(e^{2r}, e^{-2r}).
    Squeezed { r: f64 },
}

/// Construct a single-mode family member, erroring when the truncation leaks
/// more than `leak_tol` of the population.
pub fn build_state(spec: FockStateSpec, dim: usize, leak_tol: f64) -> Result<FockDensityMatrix> {
    match spec {
        FockStateSpec::Coherent { alpha } => {
            let mut c = vec![C64::new(0.0, 0.0); dim];
            c[0] = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
            for n in 1..dim {
                c[n] = c[n - 1] * alpha / C64::new((n as f64).sqrt(), 0.0);
            }
            let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if 1.0 - norm > leak_tol {
                return Err(Error::Truncation {
                    leak: 1.0 - norm,
                    tol: leak_tol,
                    suggested: suggest_dim(dim, 1.0 - norm, leak_tol),
                });
            }
            let v = DMatrix::from_fn(dim, 1, |i, _| c[i]);
            let mat = &v * v.adjoint();
            FockDensityMatrix::new(mat, leak_tol)
        }
        FockStateSpec::Thermal { nbar } => {
            if !(nbar >= 0.0) {
                return Err(Error::invalid("thermal nbar must be >= 0"));
            }
            let q = nbar / (nbar + 1.0);
            let mut mat = CMat::zeros(dim, dim);
            let mut p = 1.0 / (nbar + 1.0);
            let mut total = 0.0;
            for n in 0..dim {
                mat[(n, n)] = C64::new(p, 0.0);
                total += p;
                p *= q;
            }
            if 1.0 - total > leak_tol {
                return Err(Error::Truncation {
                    leak: 1.0 - total,
                    tol: leak_tol,
                    suggested: (leak_tol.ln() / q.ln()).ceil() as usize + 2,
                });
            }
            FockDensityMatrix::new(mat, leak_tol)
        }
        FockStateSpec::Squeezed { r } => {
            let mut vac = CMat::zeros(dim, dim);
            vac[(0, 0)] = C64::new(1.0, 0.0);
            apply_squeezer(&FockDensityMatrix::new(vac, leak_tol)?, r, leak_tol)
        }
    }
}

fn suggest_dim(dim: usize, leak: f64, tol: f64) -> usize {
    // geometric-tail guess: double until the observed leak would clear tol
    let factor = (leak / tol).log2().ceil().max(1.0);
    dim + (dim as f64 * 0.5 * factor) as usize
}

/// The squeezer unitary exp(eps/2 (adag^2 - a^2)) on the truncated space,
/// computed through the Hermitian generator i K.
pub fn squeeze_unitary(dim: usize, eps: f64) -> CMat {
    let a = FockOperator::annihilation(dim);
    let adag = a.matrix().adjoint();
    let k = (&adag * &adag - a.matrix() * a.matrix()) * C64::new(eps / 2.0, 0.0);
    // K is anti-Hermitian; G = iK is Hermitian and U = exp(K) = exp(-iG)
    let g = k.map(|z| C64::new(0.0, 1.0) * z);
    let (vals, vecs) = hermitian_eigen(&g).expect("band generator decomposes");
    let phases = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::from_polar(1.0, -vals[i])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &vecs * phases * vecs.adjoint()
}

/// Phase rotation exp(-i theta n), diagonal in the Fock basis.
pub fn rotation_unitary(dim: usize, theta: f64) -> CMat {
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::from_polar(1.0, -theta * i as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Unitary squeezing: U(eps) rho U(eps)^dag, with a boundary-population check
/// standing in for the leak the truncation would otherwise hide.
pub fn apply_squeezer(
    rho: &FockDensityMatrix,
    eps: f64,
    leak_tol: f64,
) -> Result<FockDensityMatrix> {
    let dim = rho.dim();
    let u = squeeze_unitary(dim, eps);
    let mat = &u * rho.matrix() * u.adjoint();
    let out = FockDensityMatrix::new(mat, leak_tol)?;
    let tail = out.tail_population(dim.saturating_sub(3));
    if tail > leak_tol {
        return Err(Error::Truncation {
            leak: tail,
            tol: leak_tol,
            suggested: 2 * dim,
        });
    }
    Ok(out)
}

/// Phase rotation of the state; exactly trace- and spectrum-preserving.
pub fn apply_rotation(rho: &FockDensityMatrix, theta: f64) -> Result<FockDensityMatrix> {
    let u = rotation_unitary(rho.dim(), theta);
    FockDensityMatrix::new(&u * rho.matrix() * u.adjoint(), 1e-6)
}

/// The estimation channel in Fock space: rotation, squeezer, rotation.
pub fn encode(
    rho: &FockDensityMatrix,
    theta: f64,
    eps: f64,
    leak_tol: f64,
) -> Result<FockDensityMatrix> {
    let rotated = apply_rotation(rho, theta)?;
    let squeezed = apply_squeezer(&rotated, eps, leak_tol)?;
    apply_rotation(&squeezed, theta)
}

/// Spectral SLD quantum Fisher information from a central-difference state
/// derivative: H = 2 sum_{p_j + p_k > cutoff} |<j|drho|k>|^2 / (p_j + p_k).
pub fn qfi_sld(
    rho0: &FockDensityMatrix,
    rho_plus: &FockDensityMatrix,
    rho_minus: &FockDensityMatrix,
    h: f64,
    cutoff: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be > 0"));
    }
    let dim = rho0.dim();
    if rho_plus.dim() != dim || rho_minus.dim() != dim {
        return Err(Error::invalid("stencil dimension mismatch"));
    }
    let drho = (rho_plus.matrix() - rho_minus.matrix()) / C64::new(2.0 * h, 0.0);
    let (p, vecs) = hermitian_eigen(rho0.matrix())?;
    let m = vecs.adjoint() * drho * &vecs;
    let mut total = 0.0;
    for j in 0..dim {
        for k in 0..dim {
            let s = p[j].max(0.0) + p[k].max(0.0);
            if s > cutoff {
                total += 2.0 * m[(j, k)].norm_sqr() / s;
            }
        }
    }
    Ok(total)
}

/// Squared Uhlmann fidelity [Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2 by spectral
/// square roots.
pub fn fidelity_fock(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::invalid("fidelity dimension mismatch"));
    }
    let sqrt1 = psd_sqrt(r1.matrix())?;
    let inner = &sqrt1 * r2.matrix() * &sqrt1;
    let (eigs, _) = hermitian_eigen(&inner)?;
    // rank truncation: sqrt of spurious near-zero eigenvalues would inflate
    // the trace by O(sqrt(machine eps)) per mode
    let top = eigs.iter().copied().fold(0.0, f64::max);
    let cut = top * r1.dim() as f64 * f64::EPSILON;
    let root_sum: f64 = eigs.iter().filter(|&&e| e > cut).map(|&e| e.sqrt()).sum();
    Ok(root_sum * root_sum)
}

fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let roots = DMatrix::from_fn(m.nrows(), m.nrows(), |i, j| {
        if i == j {
            C64::new(vals[i].max(0.0).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(&vecs * roots * vecs.adjoint())
}

/// Pure two-mode state |psi> = sum C_{nm} |n>_A |m>_B on a per-mode
/// truncation. The TMSV oracle lives here in its Schmidt form; the full
/// density matrix is never materialized at referee sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModePureState {
    dim: usize,
    coeff: CMat,
}

impl TwoModePureState {
    /// Two-mode squeezed vacuum, sum_n tanh^n r / cosh r |nn>, renormalized
    /// after the leak check.
    pub fn tmsv(r: f64, dim: usize, leak_tol: f64) -> Result<Self> {
        let t = r.tanh();
        let leak = t.powi(2 * dim as i32).abs();
        if leak > leak_tol {
            let suggested = (leak_tol.ln() / (t * t).ln()).ceil() as usize + 2;
            return Err(Error::Truncation {
                leak,
                tol: leak_tol,
                suggested,
            });
        }
        let mut coeff = CMat::zeros(dim, dim);
        let mut c = 1.0 / r.cosh();
        for n in 0..dim {
            coeff[(n, n)] = C64::new(c, 0.0);
            c *= t;
        }
        let mut st = TwoModePureState { dim, coeff };
        st.renormalize();
        Ok(st)
    }

    fn renormalize(&mut self) {
        let n = self.norm_sq().sqrt();
        self.coeff /= C64::new(n, 0.0);
    }

    pub fn dim_per_mode(&self) -> usize {
        self.dim
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeff.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn overlap(&self, other: &TwoModePureState) -> C64 {
        self.coeff
            .iter()
            .zip(other.coeff.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Squared fidelity |<psi1|psi2>|^2.
    pub fn fidelity(&self, other: &TwoModePureState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    pub fn mean_photon_a(&self) -> f64 {
        let mut total = 0.0;
        for n in 0..self.dim {
            for m in 0..self.dim {
                total += n as f64 * self.coeff[(n, m)].norm_sqr();
            }
        }
        total
    }

    /// Apply a single-mode unitary to mode A: C -> U C.
    pub fn apply_on_a(&self, u: &CMat) -> TwoModePureState {
        TwoModePureState {
            dim: self.dim,
            coeff: u * &self.coeff,
        }
    }

    /// The estimation channel on mode A with a boundary-leak check.
    pub fn encode_a(&self, theta: f64, eps: f64, leak_tol: f64) -> Result<TwoModePureState> {
        let u = rotation_unitary(self.dim, theta)
            * squeeze_unitary(self.dim, eps)
            * rotation_unitary(self.dim, theta);
        let out = self.apply_on_a(&u);
        let tail: f64 = (self.dim.saturating_sub(3)..self.dim)
            .map(|n| (0..self.dim).map(|m| out.coeff[(n, m)].norm_sqr()).sum::<f64>())
            .sum();
        if tail > leak_tol {
            return Err(Error::Truncation {
                leak: tail,
                tol: leak_tol,
                suggested: 2 * self.dim,
            });
        }
        Ok(out)
    }

    /// Materialize |psi><psi| as a dim^2 density matrix (small dims only).
    pub fn density_matrix(&self, leak_tol: f64) -> Result<FockDensityMatrix> {
        let d2 = self.dim * self.dim;
        let v = DMatrix::from_fn(d2, 1, |i, _| self.coeff[(i / self.dim, i % self.dim)]);
        FockDensityMatrix::new(&v * v.adjoint(), leak_tol)
    }
}

/// Pure-state QFI from a central-difference derivative of the state:
/// H = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2), the rank-one case of the SLD sum.
pub fn qfi_pure_fd(
    psi0: &TwoModePureState,
    psi_plus: &TwoModePureState,
    psi_minus: &TwoModePureState,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be > 0"));
    }
    let dim = psi0.dim;
    if psi_plus.dim != dim || psi_minus.dim != dim {
        return Err(Error::invalid("stencil dimension mismatch"));
    }
    let inv = C64::new(1.0 / (2.0 * h), 0.0);
    let dcoeff = (&psi_plus.coeff - &psi_minus.coeff) * inv;
    let dd: f64 = dcoeff.iter().map(|z| z.norm_sqr()).sum();
    let cross: C64 = psi0
        .coeff
        .iter()
        .zip(dcoeff.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(4.0 * (dd - cross.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const D: usize = 40;

    #[test]
    fn vacuum_density_matrix() {
        let rho = build_state(FockStateSpec::Coherent { alpha: C64::new(0.0, 0.0) }, 20, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(rho.mean_photon(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn thermal_populations_are_geometric() {
        let rho = build_state(FockStateSpec::Thermal { nbar: 1.0 }, 60, DEFAULT_LEAK_TOL).unwrap();
        for n in 0..5 {
            assert_relative_eq!(
                rho.matrix()[(n, n)].re,
                0.5f64.powi(n as i32 + 1),
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(rho.mean_photon(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn coherent_moments() {
        let rho = build_state(FockStateSpec::Coherent { alpha: C64::new(1.0, 0.0) }, D, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(rho.mean_photon(), 1.0, epsilon = 1e-8);
        let (q, p) = rho.quadrature_means();
        assert_relative_eq!(q, 2.0, epsilon = 1e-8);
        assert_relative_eq!(p, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn truncation_error_reports_suggestion() {
        let err = build_state(FockStateSpec::Thermal { nbar: 1.0 }, 8, 1e-8).unwrap_err();
        match err {
            Error::Truncation { leak, suggested, .. } => {
                assert!(leak > 1e-8);
                assert!(suggested > 8);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn squeezer_photon_number_and_unitarity() {
        let vac = build_state(FockStateSpec::Coherent { alpha: C64::new(0.0, 0.0) }, D, DEFAULT_LEAK_TOL).unwrap();
        let sq = apply_squeezer(&vac, 0.3, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(sq.mean_photon(), 0.3f64.sinh().powi(2), epsilon = 1e-6);
        assert_relative_eq!(sq.trace(), 1.0, epsilon = 1e-9);
        let back = apply_squeezer(&sq, -0.3, DEFAULT_LEAK_TOL).unwrap();
        let diff = (back.matrix() - vac.matrix()).map(|z| z.norm()).max();
        assert!(diff < 1e-8, "round trip defect {diff}");
        let id = apply_squeezer(&vac, 0.0, DEFAULT_LEAK_TOL).unwrap();
        let diff = (id.matrix() - vac.matrix()).map(|z| z.norm()).max();
        assert!(diff < 1e-12);
    }

    #[test]
    fn squeezed_state_matches_cm_moments() {
        // cm = diag(e^{2r}, e^{-2r}): Var(q) = <q^2> = e^{2r}
        let r = 0.4;
        let rho = build_state(FockStateSpec::Squeezed { r }, D, DEFAULT_LEAK_TOL).unwrap();
        let a = FockOperator::annihilation(D);
        let q = a.matrix() + a.matrix().adjoint();
        let q2: C64 = (rho.matrix() * (&q * &q)).trace();
        assert_relative_eq!(q2.re, (2.0 * r).exp(), epsilon = 1e-6);
    }

    #[test]
    fn fidelity_fixtures() {
        let dim = 60;
        let vac = build_state(FockStateSpec::Coherent { alpha: C64::new(0.0, 0.0) }, dim, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(fidelity_fock(&vac, &vac).unwrap(), 1.0, epsilon = 1e-10);
        let coh = build_state(FockStateSpec::Coherent { alpha: C64::new(1.0, 0.0) }, dim, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(
            fidelity_fock(&vac, &coh).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-5
        );
        let th = build_state(FockStateSpec::Thermal { nbar: 1.0 }, dim, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(fidelity_fock(&vac, &th).unwrap(), 0.5, epsilon = 1e-5);
        assert_relative_eq!(
            fidelity_fock(&th, &vac).unwrap(),
            fidelity_fock(&vac, &th).unwrap(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn sld_qfi_fixtures() {
        let h = 1e-4;
        let vac = build_state(FockStateSpec::Coherent { alpha: C64::new(0.0, 0.0) }, D, DEFAULT_LEAK_TOL).unwrap();
        let hq = qfi_sld(
            &encode(&vac, 0.0, 0.0, DEFAULT_LEAK_TOL).unwrap(),
            &encode(&vac, 0.0, h, DEFAULT_LEAK_TOL).unwrap(),
            &encode(&vac, 0.0, -h, DEFAULT_LEAK_TOL).unwrap(),
            h,
            DEFAULT_SLD_CUTOFF,
        )
        .unwrap();
        assert_relative_eq!(hq, 2.0, epsilon = 1e-3);

        let th = build_state(FockStateSpec::Thermal { nbar: 1.0 }, 60, DEFAULT_LEAK_TOL).unwrap();
        let hq = qfi_sld(
            &encode(&th, 0.7, 0.0, DEFAULT_LEAK_TOL).unwrap(),
            &encode(&th, 0.7, h, DEFAULT_LEAK_TOL).unwrap(),
            &encode(&th, 0.7, -h, DEFAULT_LEAK_TOL).unwrap(),
            h,
            DEFAULT_SLD_CUTOFF,
        )
        .unwrap();
        assert_relative_eq!(hq, 3.6, epsilon = 1e-3);
    }

    #[test]
    fn tmsv_oracle_moments_and_pt_free_checks() {
        let r = 0.5;
        let psi = TwoModePureState::tmsv(r, D, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(psi.norm_sq(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(psi.mean_photon_a(), r.sinh().powi(2), epsilon = 1e-8);
        // overlap with vacuum: 1/cosh^2 r
        let vac2 = TwoModePureState::tmsv(0.0, D, DEFAULT_LEAK_TOL).unwrap();
        assert_relative_eq!(
            psi.fidelity(&vac2),
            1.0 / r.cosh().powi(2),
            epsilon = 1e-8
        );
    }

    #[test]
    fn tmsv_pure_path_matches_density_matrix_path() {
        let r = 0.3;
        let d = 12;
        let psi = TwoModePureState::tmsv(r, d, 1e-6).unwrap();
        let psi_enc = psi.encode_a(0.4, 0.1, 1e-4).unwrap();
        let f_pure = psi.fidelity(&psi_enc);
        let rho = psi.density_matrix(1e-6).unwrap();
        let rho_enc = psi_enc.density_matrix(1e-4).unwrap();
        let f_dm = fidelity_fock(&rho, &rho_enc).unwrap();
        assert_relative_eq!(f_pure, f_dm, epsilon = 1e-7);
    }

    #[test]
    fn two_applications_restore_pure_state() {
        let psi = TwoModePureState::tmsv(0.5, D, DEFAULT_LEAK_TOL).unwrap();
        let out = psi
            .encode_a(0.0, 0.2, DEFAULT_LEAK_TOL)
            .unwrap()
            .encode_a(0.0, -0.2, DEFAULT_LEAK_TOL)
            .unwrap();
        assert_relative_eq!(psi.fidelity(&out), 1.0, epsilon = 1e-8);
    }
}
