//! Symplectic transformations acting on Gaussian states: squeezer, phase
//! rotation, mode embedding, partial trace, partial transpose.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{
    symplectic_form, CovarianceMatrix, DisplacementVector, GaussianState,
};

/// Defect tolerance for S Omega S^T = Omega at construction.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Which mode of a two-mode state to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Linear phase-space transform S with S Omega S^T = Omega.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 {
            return Err(Error::invalid(format!(
                "symplectic matrix must be square with even dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let omega = symplectic_form(m.nrows());
        let defect = (&m * &omega * m.transpose() - &omega).abs().max();
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::invalid(format!(
                "matrix is not symplectic: |S Omega S^T - Omega| = {defect:.3e}"
            )));
        }
        Ok(SymplecticMatrix { m })
    }

    /// For products of matrices already known to be symplectic.
    fn new_unchecked(m: DMatrix<f64>) -> Self {
        SymplecticMatrix { m }
    }

    pub fn identity(dim: usize) -> Self {
        SymplecticMatrix {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Group composition: (self * rhs) acts as rhs first, then self.
    pub fn compose(&self, rhs: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::invalid("symplectic dimension mismatch in compose"));
        }
        Ok(SymplecticMatrix::new_unchecked(&self.m * &rhs.m))
    }
}

/// Single-mode squeezer diag(e^eps, e^-eps); squeezer(0) is the identity and
/// squeezer(a) * squeezer(b) = squeezer(a + b).
pub fn squeezer(epsilon: f64) -> SymplecticMatrix {
    assert!(epsilon.is_finite(), "squeezer parameter must be finite");
    SymplecticMatrix::new_unchecked(DMatrix::from_diagonal(&DVector::from_row_slice(&[
        epsilon.exp(),
        (-epsilon).exp(),
    ])))
}

/// Single-mode phase rotation [[cos t, sin t], [-sin t, cos t]].
pub fn rotation(theta: f64) -> SymplecticMatrix {
    assert!(theta.is_finite(), "rotation angle must be finite");
    let (s, c) = theta.sin_cos();
    SymplecticMatrix::new_unchecked(DMatrix::from_row_slice(2, 2, &[c, s, -s, c]))
}

/// Embed a single-mode operation as block-diag(S, Identity) acting on mode A
/// of a two-mode state.
pub fn embed_on_mode_a(s2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    if s2.dim() != 2 {
        return Err(Error::invalid("embed_on_mode_a expects a 2x2 symplectic"));
    }
    let mut m = DMatrix::identity(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(s2.matrix());
    Ok(SymplecticMatrix::new_unchecked(m))
}

/// Transform a state: cm -> S cm S^T, disp -> S disp. Preserves the symplectic
/// spectrum, hence physicality and purity.
pub fn apply(s: &SymplecticMatrix, state: &GaussianState) -> Result<GaussianState> {
    if s.dim() != state.dim() {
        return Err(Error::invalid(format!(
            "symplectic dim {} does not match state dim {}",
            s.dim(),
            state.dim()
        )));
    }
    let cm = s.matrix() * state.cm().matrix() * s.matrix().transpose();
    let disp = s.matrix() * state.disp().vector();
    // spectrum is conserved exactly; allow for rounding on extreme transforms
    GaussianState::with_tolerance(
        CovarianceMatrix::new(cm)?,
        DisplacementVector::new(disp)?,
        1e-8,
    )
}

/// Partial transpose on mode B: P cm P with P = diag(1, 1, 1, -1). The result
/// is a valid symmetric matrix but may be unphysical; that is the
/// entanglement witness.
pub fn partial_transpose_b(cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if cm.dim() != 4 {
        return Err(Error::invalid("partial transpose needs a two-mode matrix"));
    }
    let mut m = cm.matrix().clone();
    for i in 0..4 {
        if i != 3 {
            m[(i, 3)] = -m[(i, 3)];
            m[(3, i)] = -m[(3, i)];
        }
    }
    CovarianceMatrix::new(m)
}

/// Reduced single-mode state: the kept 2x2 diagonal block and displacement slice.
pub fn partial_trace(state: &GaussianState, keep: Mode) -> Result<GaussianState> {
    if state.modes() != 2 {
        return Err(Error::invalid("partial trace needs a two-mode state"));
    }
    let off = match keep {
        Mode::A => 0,
        Mode::B => 2,
    };
    let block = state.cm().matrix().view((off, off), (2, 2)).into_owned();
    let disp = state.disp().vector().rows(off, 2).into_owned();
    GaussianState::with_tolerance(
        CovarianceMatrix::new(block)?,
        DisplacementVector::new(disp)?,
        1e-8,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{mean_photon_numbers, purity, symplectic_eigenvalues};
    use approx::assert_relative_eq;

    #[test]
    fn squeezer_values_and_group_law() {
        let s = squeezer(0.5);
        assert_relative_eq!(s.matrix()[(0, 0)], 1.6487212707001282, epsilon = 1e-12);
        assert_relative_eq!(s.matrix()[(1, 1)], 0.6065306597126334, epsilon = 1e-12);
        assert_eq!(squeezer(0.0).matrix(), SymplecticMatrix::identity(2).matrix());
        let ab = squeezer(0.3).compose(&squeezer(0.9)).unwrap();
        let sum = squeezer(1.2);
        assert_relative_eq!(
            (ab.matrix() - sum.matrix()).abs().max(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rotation_values_and_inverse() {
        assert_eq!(rotation(0.0).matrix(), SymplecticMatrix::identity(2).matrix());
        let q = rotation(std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(q.matrix()[(0, 1)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(q.matrix()[(1, 0)], -1.0, epsilon = 1e-12);
        let id = rotation(0.7).compose(&rotation(-0.7)).unwrap();
        assert_relative_eq!(
            (id.matrix() - DMatrix::identity(2, 2)).abs().max(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn constructed_matrices_are_symplectic() {
        for m in [
            squeezer(0.8),
            rotation(1.3),
            embed_on_mode_a(&squeezer(-0.4)).unwrap(),
        ] {
            assert!(SymplecticMatrix::new(m.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn non_symplectic_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(SymplecticMatrix::new(m).is_err());
    }

    #[test]
    fn squeezer_on_vacuum() {
        let out = apply(&squeezer(0.7), &GaussianState::vacuum(1)).unwrap();
        assert_relative_eq!(out.cm().matrix()[(0, 0)], (1.4f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(out.cm().matrix()[(1, 1)], (-1.4f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(out.disp().vector().norm(), 0.0);
    }

    #[test]
    fn rotation_preserves_photons_and_thermal_cm() {
        let st = GaussianState::coherent(1.5, -0.5).unwrap();
        let rotated = apply(&rotation(0.9), &st).unwrap();
        assert_relative_eq!(
            mean_photon_numbers(&st)[0],
            mean_photon_numbers(&rotated)[0],
            epsilon = 1e-12
        );
        let th = GaussianState::thermal(1.0).unwrap();
        let rt = apply(&rotation(2.1), &th).unwrap();
        assert_relative_eq!(
            (rt.cm().matrix() - th.cm().matrix()).abs().max(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn apply_preserves_purity_and_spectrum() {
        let st = GaussianState::thermal(0.8).unwrap();
        let s = rotation(0.4).compose(&squeezer(0.6)).unwrap();
        let out = apply(&s, &st).unwrap();
        assert_relative_eq!(purity(&st), purity(&out), epsilon = 1e-12);
        let n0 = symplectic_eigenvalues(st.cm()).unwrap();
        let n1 = symplectic_eigenvalues(out.cm()).unwrap();
        assert_relative_eq!(n0[0], n1[0], epsilon = 1e-9);
    }

    #[test]
    fn embed_homomorphism_and_product_action() {
        let a = squeezer(0.3);
        let b = rotation(0.8);
        let lhs = embed_on_mode_a(&a.compose(&b).unwrap()).unwrap();
        let rhs = embed_on_mode_a(&a)
            .unwrap()
            .compose(&embed_on_mode_a(&b).unwrap())
            .unwrap();
        assert_relative_eq!((lhs.matrix() - rhs.matrix()).abs().max(), 0.0, epsilon = 1e-12);

        let out = apply(
            &embed_on_mode_a(&squeezer(0.5)).unwrap(),
            &GaussianState::vacuum(2),
        )
        .unwrap();
        let diag: Vec<f64> = (0..4).map(|i| out.cm().matrix()[(i, i)]).collect();
        assert_relative_eq!(diag[0], 1.0f64.exp(), epsilon = 1e-12);
        assert_relative_eq!(diag[1], (-1.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(diag[2], 1.0, epsilon = 1e-12);
        assert_relative_eq!(diag[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_tmsv_and_involution() {
        let st = GaussianState::tmsv(0.5).unwrap();
        let pt = partial_transpose_b(st.cm()).unwrap();
        let nus = symplectic_eigenvalues(&pt).unwrap();
        assert_relative_eq!(nus[0], (-1.0f64).exp(), epsilon = 1e-10);
        let back = partial_transpose_b(&pt).unwrap();
        assert_eq!(back.matrix(), st.cm().matrix());
    }

    #[test]
    fn partial_transpose_product_state_unchanged() {
        let st = GaussianState::vacuum(2);
        let pt = partial_transpose_b(st.cm()).unwrap();
        assert_eq!(pt.matrix(), st.cm().matrix());
    }

    #[test]
    fn partial_trace_of_tmsv_is_thermal() {
        let st = GaussianState::tmsv(0.5).unwrap();
        let a = partial_trace(&st, Mode::A).unwrap();
        let expect = 1.0f64.cosh();
        assert_relative_eq!(a.cm().matrix()[(0, 0)], expect, epsilon = 1e-12);
        assert_relative_eq!(a.cm().matrix()[(1, 1)], expect, epsilon = 1e-12);
        assert_relative_eq!(a.cm().matrix()[(0, 1)], 0.0);
    }

    #[test]
    fn partial_trace_keeps_displacement_slice() {
        let cm = CovarianceMatrix::identity(2);
        let disp = DisplacementVector::from_slice(&[0.3, -0.2, 0.0, 0.0]).unwrap();
        let st = GaussianState::new(cm, disp).unwrap();
        let b = partial_trace(&st, Mode::B).unwrap();
        assert_relative_eq!(b.disp().vector()[0], 0.0);
        let a = partial_trace(&st, Mode::A).unwrap();
        assert_relative_eq!(a.disp().vector()[0], 0.3);
        assert_relative_eq!(a.disp().vector()[1], -0.2);
    }

    #[test]
    fn dim_mismatch_is_invalid_input() {
        let s = squeezer(0.1);
        let st = GaussianState::vacuum(2);
        assert!(apply(&s, &st).is_err());
        assert!(partial_transpose_b(GaussianState::vacuum(1).cm()).is_err());
        assert!(partial_trace(&GaussianState::vacuum(1), Mode::A).is_err());
    }
}
