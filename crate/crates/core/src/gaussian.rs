//! Core data model for 1- and 2-mode Gaussian states in the covariance-matrix
//! formalism, with physicality checks and derived scalar quantities.
//!
//! Conventions: quadratures are dimensionless with vacuum variance 1, so the
//! vacuum covariance matrix is the identity and the standard-form constraints
//! read a, b >= 1 verbatim. A coherent state with amplitude alpha has
//! displacement (2 Re alpha, 2 Im alpha).

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// Default tolerance for the physicality check: every symplectic eigenvalue
/// must satisfy nu >= 1 - tol.
pub const DEFAULT_PHYS_TOL: f64 = 1e-9;

/// Symmetry slack accepted at construction before exact symmetrization.
const SYM_TOL: f64 = 1e-12;

/// The symplectic form: block-diagonal with 2x2 blocks [[0, 1], [-1, 0]].
pub fn symplectic_form(dim: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Real symmetric covariance matrix of one or two modes.
///
/// Construction enforces squareness, dim in {2, 4}, and symmetry; entries are
/// mirrored exactly so that `m[(i,j)] == m[(j,i)]` holds bitwise afterwards.
/// Physicality is a separate check: a partial transpose is a valid
/// `CovarianceMatrix` even when it fails `check_physical`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::invalid(format!(
                "covariance matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let dim = m.nrows();
        if dim != 2 && dim != 4 {
            return Err(Error::invalid(format!(
                "covariance matrix dimension must be 2 or 4, got {dim}"
            )));
        }
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("covariance matrix has non-finite entries"));
        }
        let mut sym = m.clone();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let d = (m[(i, j)] - m[(j, i)]).abs();
                if d > SYM_TOL * m[(i, j)].abs().max(m[(j, i)].abs()).max(1.0) {
                    return Err(Error::invalid(format!(
                        "covariance matrix not symmetric at ({i},{j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }
        Ok(CovarianceMatrix { m: sym })
    }

    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} covariance matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(modes: usize) -> Self {
        CovarianceMatrix {
            m: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn modes(&self) -> usize {
        self.dim() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        det_small(&self.m)
    }

    /// 2x2 block determinants (A = det alpha, B = det beta, C = det gamma) of
    /// a two-mode matrix in block form [[alpha, gamma], [gamma^T, beta]].
    pub fn block_invariants(&self) -> Result<(f64, f64, f64)> {
        if self.dim() != 4 {
            return Err(Error::invalid("block invariants need a two-mode matrix"));
        }
        let m = &self.m;
        let det2 = |r: usize, c: usize| m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)];
        Ok((det2(0, 0), det2(2, 2), det2(0, 2)))
    }
}

/// Determinant of a 2x2 or 4x4 matrix by cofactor expansion; exact-form
/// arithmetic avoids LU pivoting noise in the fidelity cancellation paths.
pub(crate) fn det_small(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        4 => {
            let mut d = 0.0;
            // expand along the first row over 2x2 minors of rows {2,3}
            let minor = |c0: usize, c1: usize| {
                m[(2, c0)] * m[(3, c1)] - m[(2, c1)] * m[(3, c0)]
            };
            let m01 = minor(0, 1);
            let m02 = minor(0, 2);
            let m03 = minor(0, 3);
            let m12 = minor(1, 2);
            let m13 = minor(1, 3);
            let m23 = minor(2, 3);
            d += m[(0, 0)] * (m[(1, 1)] * m23 - m[(1, 2)] * m13 + m[(1, 3)] * m12);
            d -= m[(0, 1)] * (m[(1, 0)] * m23 - m[(1, 2)] * m03 + m[(1, 3)] * m02);
            d += m[(0, 2)] * (m[(1, 0)] * m13 - m[(1, 1)] * m03 + m[(1, 3)] * m01);
            d -= m[(0, 3)] * (m[(1, 0)] * m12 - m[(1, 1)] * m02 + m[(1, 2)] * m01);
            d
        }
        n => panic!("det_small supports 2x2 and 4x4, got {n}x{n}"),
    }
}

/// First moments of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementVector {
    v: DVector<f64>,
}

impl DisplacementVector {
    pub fn new(v: DVector<f64>) -> Result<Self> {
        let len = v.len();
        if len != 2 && len != 4 {
            return Err(Error::invalid(format!(
                "displacement length must be 2 or 4, got {len}"
            )));
        }
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("displacement has non-finite entries"));
        }
        Ok(DisplacementVector { v })
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        DisplacementVector {
            v: DVector::zeros(dim),
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.len() == 0
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.v
    }
}

/// A physical Gaussian state: covariance matrix plus displacement vector.
///
/// Construction rejects unphysical covariance matrices; states that fail the
/// check are never repaired.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cm: CovarianceMatrix,
    disp: DisplacementVector,
}

impl GaussianState {
    pub fn new(cm: CovarianceMatrix, disp: DisplacementVector) -> Result<Self> {
        Self::with_tolerance(cm, disp, DEFAULT_PHYS_TOL)
    }

    pub fn with_tolerance(
        cm: CovarianceMatrix,
        disp: DisplacementVector,
        tol: f64,
    ) -> Result<Self> {
        if disp.len() != cm.dim() {
            return Err(Error::invalid(format!(
                "displacement length {} does not match covariance dimension {}",
                disp.len(),
                cm.dim()
            )));
        }
        if !check_physical(&cm, tol) {
            return Err(Error::invalid(format!(
                "covariance matrix is not physical (symplectic eigenvalues {:?})",
                symplectic_eigenvalues(&cm).unwrap_or_default()
            )));
        }
        Ok(GaussianState { cm, disp })
    }

    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            cm: CovarianceMatrix::identity(modes),
            disp: DisplacementVector::zeros(2 * modes),
        }
    }

    /// Single-mode coherent state; mean photon number (ex^2 + ep^2)/4.
    pub fn coherent(eps_x: f64, eps_p: f64) -> Result<Self> {
        GaussianState::new(
            CovarianceMatrix::identity(1),
            DisplacementVector::from_slice(&[eps_x, eps_p])?,
        )
    }

    /// Single-mode thermal state, cm = (2 nbar + 1) * Identity.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::invalid("thermal nbar must be >= 0"));
        }
        let cm = CovarianceMatrix::new(DMatrix::identity(2, 2) * (2.0 * nbar + 1.0))?;
        GaussianState::new(cm, DisplacementVector::zeros(2))
    }

    /// Squeezed vacuum with cm = diag(e^{2r}, e^{-2r}); nbar = sinh^2 r.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        let cm = CovarianceMatrix::from_row_major(
            2,
            &[(2.0 * r).exp(), 0.0, 0.0, (-2.0 * r).exp()],
        )?;
        GaussianState::new(cm, DisplacementVector::zeros(2))
    }

    /// Two-mode squeezed vacuum: a = b = cosh 2r, gamma = diag(sinh 2r, -sinh 2r).
    /// Per-mode photon number sinh^2 r.
    pub fn tmsv(r: f64) -> Result<Self> {
        let ch = (2.0 * r).cosh();
        let sh = (2.0 * r).sinh();
        let cm = CovarianceMatrix::from_row_major(
            4,
            &[
                ch, 0.0, sh, 0.0, //
                0.0, ch, 0.0, -sh, //
                sh, 0.0, ch, 0.0, //
                0.0, -sh, 0.0, ch,
            ],
        )?;
        GaussianState::new(cm, DisplacementVector::zeros(4))
    }

    pub fn cm(&self) -> &CovarianceMatrix {
        &self.cm
    }

    pub fn disp(&self) -> &DisplacementVector {
        &self.disp
    }

    pub fn modes(&self) -> usize {
        self.cm.modes()
    }

    pub fn dim(&self) -> usize {
        self.cm.dim()
    }
}

/// Robertson-Schrodinger physicality: sigma + i Omega >= 0.
///
/// Evaluated as positive definiteness of sigma plus the symplectic-eigenvalue
/// criterion min nu >= 1 - tol; the eigenvalue test alone is not sufficient on
/// indefinite matrices.
pub fn check_physical(cm: &CovarianceMatrix, tol: f64) -> bool {
    if Cholesky::new(cm.m.clone()).is_none() {
        return false;
    }
    match symplectic_eigenvalues(cm) {
        Ok(nus) => nus.iter().all(|&nu| nu >= 1.0 - tol),
        Err(_) => false,
    }
}

/// Symplectic eigenvalues: the dim/2 moduli of the eigenvalues of i Omega sigma,
/// each reported once, sorted ascending.
///
/// Uses closed forms (nu = sqrt(det sigma) for one mode; the two-mode invariant
/// formula 2 nu^2 = Delta -+ sqrt(Delta^2 - 4 det sigma)) and falls back to the
/// spectrum of Omega sigma when the invariant expressions leave the real cone.
pub fn symplectic_eigenvalues(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    match cm.dim() {
        2 => {
            let d = cm.det();
            if d >= 0.0 {
                Ok(vec![d.sqrt()])
            } else {
                symplectic_eigenvalues_spectral(cm)
            }
        }
        4 => {
            let (a, b, c) = cm.block_invariants()?;
            let delta = a + b + 2.0 * c;
            let det = cm.det();
            let disc = delta * delta - 4.0 * det;
            // disc = (nu1^2 - nu2^2)^2 cancels at degenerate spectra and the
            // square root would amplify its rounding noise; the spectrum of
            // Omega sigma stays well-conditioned there, so defer to it.
            // The floor tracks the magnitudes entering the cancellations.
            let mag = a.abs() + b.abs() + 2.0 * c.abs() + 1.0;
            let noise_floor = 256.0 * f64::EPSILON * (delta.abs() * mag + mag * mag);
            if delta >= 0.0 && disc >= noise_floor {
                let lo = 0.5 * (delta - disc.sqrt());
                let hi = 0.5 * (delta + disc.sqrt());
                if lo >= 0.0 {
                    return Ok(vec![lo.sqrt(), hi.sqrt()]);
                }
            }
            symplectic_eigenvalues_spectral(cm)
        }
        _ => unreachable!("construction enforces dim 2 or 4"),
    }
}

/// General route: moduli of the eigenvalues of Omega sigma. Kept public as the
/// cross-check of the closed forms.
///
/// On positive-definite input this is the Williamson spectrum, obtained from
/// the real symmetric matrix -(sqrt(sigma) Omega sqrt(sigma))^2 whose
/// eigenvalues are the nu^2, each doubled. Symmetric solvers converge
/// unconditionally, which a QR iteration on the non-normal Omega sigma does
/// not (near-degenerate pairs can stall it); the bounded Schur path only
/// serves indefinite diagnostic input.
pub fn symplectic_eigenvalues_spectral(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    let dim = cm.dim();
    let omega = symplectic_form(dim);

    let eigen = nalgebra::linalg::SymmetricEigen::new(cm.m.clone());
    let scale = eigen.eigenvalues.amax().max(1.0);
    if eigen.eigenvalues.iter().all(|&e| e > -1e-14 * scale) {
        let mut root_vals = eigen.eigenvalues.clone();
        root_vals.apply(|v| *v = v.max(0.0).sqrt());
        let root = &eigen.eigenvectors
            * DMatrix::from_diagonal(&root_vals)
            * eigen.eigenvectors.transpose();
        let m = &root * &omega * &root;
        let k = -(&m * &m);
        let mut nus: Vec<f64> = k
            .symmetric_eigenvalues()
            .iter()
            .map(|&v| v.max(0.0).sqrt())
            .collect();
        nus.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        return Ok(nus.iter().step_by(2).copied().collect());
    }

    let schur = nalgebra::linalg::Schur::try_new(&omega * &cm.m, 1e-12, 100_000)
        .ok_or_else(|| Error::numerical("Schur iteration failed on Omega sigma"))?;
    let eigs = schur.complex_eigenvalues();
    let mut mods: Vec<f64> = eigs.iter().map(|z| z.norm()).collect();
    if mods.iter().any(|m| !m.is_finite()) {
        return Err(Error::numerical(
            "eigenvalue solver returned non-finite symplectic spectrum",
        ));
    }
    mods.sort_by(|x, y| x.partial_cmp(y).expect("finite moduli"));
    // eigenvalues come in +-i nu pairs; keep one representative per pair
    Ok(mods.iter().step_by(2).copied().collect())
}

/// Per-mode mean photon numbers, nbar_k = (Tr[block_k] - 2)/4 + |disp_k|^2/4.
pub fn mean_photon_numbers(state: &GaussianState) -> Vec<f64> {
    let m = state.cm.matrix();
    let d = state.disp.vector();
    (0..state.modes())
        .map(|k| {
            let i = 2 * k;
            let tr = m[(i, i)] + m[(i + 1, i + 1)];
            (tr - 2.0) / 4.0 + (d[i] * d[i] + d[i + 1] * d[i + 1]) / 4.0
        })
        .collect()
}

/// Purity mu = 1 / sqrt(det sigma); equals 1 exactly on pure states.
pub fn purity(state: &GaussianState) -> f64 {
    1.0 / state.cm.det().sqrt()
}

// ---------------------------------------------------------------------------
// Flat text record: the external serialization format.
//
//   modes <1|2>
//   cm <dim*dim reals, row-major>
//   disp <dim reals>
//
// Blank lines and lines starting with '#' are skipped. Numbers are written
// with Rust's shortest round-trip formatting.
// ---------------------------------------------------------------------------

pub fn write_record(state: &GaussianState) -> String {
    let mut out = String::new();
    out.push_str(&format!("modes {}\n", state.modes()));
    out.push_str("cm");
    for i in 0..state.dim() {
        for j in 0..state.dim() {
            out.push_str(&format!(" {}", state.cm.matrix()[(i, j)]));
        }
    }
    out.push('\n');
    out.push_str("disp");
    for i in 0..state.dim() {
        out.push_str(&format!(" {}", state.disp.vector()[i]));
    }
    out.push('\n');
    out
}

/// Parse a single state record; fails on trailing non-comment content.
pub fn parse_record(text: &str) -> Result<GaussianState> {
    let mut states = parse_records(text)?;
    match states.len() {
        1 => Ok(states.pop().expect("length checked")),
        n => Err(Error::Parse {
            line: 0,
            msg: format!("expected exactly one state record, found {n}"),
        }),
    }
}

/// Parse a stream of state records separated by blank lines or comments.
pub fn parse_records(text: &str) -> Result<Vec<GaussianState>> {
    let mut out = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    while let Some((ln_modes, line)) = lines.next() {
        let modes = parse_keyword_line(ln_modes, line, "modes")?;
        if modes.len() != 1 || (modes[0] != 1.0 && modes[0] != 2.0) {
            return Err(Error::Parse {
                line: ln_modes,
                msg: "modes must be 1 or 2".into(),
            });
        }
        let dim = 2 * modes[0] as usize;

        let (ln_cm, cm_line) = lines.next().ok_or(Error::Parse {
            line: ln_modes,
            msg: "missing cm line".into(),
        })?;
        let cm_vals = parse_keyword_line(ln_cm, cm_line, "cm")?;
        if cm_vals.len() != dim * dim {
            return Err(Error::Parse {
                line: ln_cm,
                msg: format!("cm needs {} entries, got {}", dim * dim, cm_vals.len()),
            });
        }

        let (ln_disp, disp_line) = lines.next().ok_or(Error::Parse {
            line: ln_cm,
            msg: "missing disp line".into(),
        })?;
        let disp_vals = parse_keyword_line(ln_disp, disp_line, "disp")?;
        if disp_vals.len() != dim {
            return Err(Error::Parse {
                line: ln_disp,
                msg: format!("disp needs {} entries, got {}", dim, disp_vals.len()),
            });
        }

        let cm = CovarianceMatrix::from_row_major(dim, &cm_vals).map_err(|e| Error::Parse {
            line: ln_cm,
            msg: e.to_string(),
        })?;
        let disp = DisplacementVector::from_slice(&disp_vals).map_err(|e| Error::Parse {
            line: ln_disp,
            msg: e.to_string(),
        })?;
        let state = GaussianState::new(cm, disp).map_err(|e| Error::Parse {
            line: ln_modes,
            msg: e.to_string(),
        })?;
        out.push(state);
    }
    Ok(out)
}

fn parse_keyword_line(line_no: usize, line: &str, keyword: &str) -> Result<Vec<f64>> {
    let mut tokens = line.split_whitespace();
    match tokens.next() {
        Some(k) if k == keyword => {}
        other => {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected '{keyword}' line, got {:?}", other.unwrap_or("")),
            })
        }
    }
    tokens
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("cannot parse number '{t}'"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_is_physical_and_saturates() {
        let cm = CovarianceMatrix::identity(1);
        assert!(check_physical(&cm, DEFAULT_PHYS_TOL));
        assert_relative_eq!(symplectic_eigenvalues(&cm).unwrap()[0], 1.0);
    }

    #[test]
    fn half_identity_violates_uncertainty() {
        let cm = CovarianceMatrix::new(DMatrix::identity(2, 2) * 0.5).unwrap();
        assert!(!check_physical(&cm, DEFAULT_PHYS_TOL));
    }

    #[test]
    fn tmsv_is_pure_with_unit_eigenvalues() {
        let r: f64 = 0.5;
        let state = GaussianState::tmsv(r).unwrap();
        let nus = symplectic_eigenvalues(state.cm()).unwrap();
        assert_relative_eq!(nus[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(nus[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(state.cm().det(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(purity(&state), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thermal_eigenvalue_and_purity() {
        let state = GaussianState::thermal(1.0).unwrap();
        assert_relative_eq!(symplectic_eigenvalues(state.cm()).unwrap()[0], 3.0);
        assert_relative_eq!(purity(&state), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_identity4_eigenvalues() {
        let cm = CovarianceMatrix::identity(2);
        let nus = symplectic_eigenvalues(&cm).unwrap();
        assert_eq!(nus.len(), 2);
        assert_relative_eq!(nus[0], 1.0);
        assert_relative_eq!(nus[1], 1.0);
    }

    #[test]
    fn photon_numbers_match_formulas() {
        assert_relative_eq!(mean_photon_numbers(&GaussianState::vacuum(1))[0], 0.0);
        let coh = GaussianState::coherent(2.0, 0.0).unwrap();
        assert_relative_eq!(mean_photon_numbers(&coh)[0], 1.0, epsilon = 1e-12);
        let sq = GaussianState::squeezed_vacuum(1.0).unwrap();
        assert_relative_eq!(
            mean_photon_numbers(&sq)[0],
            1.0_f64.sinh().powi(2),
            epsilon = 1e-12
        );
        let tmsv = GaussianState::tmsv(0.5).unwrap();
        let n = mean_photon_numbers(&tmsv);
        assert_relative_eq!(n[0], 0.5_f64.sinh().powi(2), epsilon = 1e-12);
        assert_relative_eq!(n[1], 0.5_f64.sinh().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn non_symmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn odd_dimension_rejected() {
        let m = DMatrix::identity(3, 3);
        assert!(CovarianceMatrix::new(m).is_err());
    }

    #[test]
    fn indefinite_matrix_rejected_despite_eigenvalue_moduli() {
        // entrywise large but with an indefinite q-block; the nu >= 1 test in
        // isolation would be fooled on matrices like this
        let m = DMatrix::identity(2, 2) * -3.0;
        let cm = CovarianceMatrix::new(m).unwrap();
        assert!(!check_physical(&cm, DEFAULT_PHYS_TOL));
    }

    #[test]
    fn det_small_matches_lu() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                3.0, 1.0, 0.5, 0.0, 1.0, 2.5, 0.0, -0.5, 0.5, 0.0, 4.0, 1.5, 0.0, -0.5, 1.5, 2.0,
            ],
        );
        assert_relative_eq!(det_small(&m), m.determinant(), epsilon = 1e-10);
    }

    #[test]
    fn record_round_trip() {
        let state = GaussianState::tmsv(0.37).unwrap();
        let text = write_record(&state);
        let back = parse_record(&text).unwrap();
        assert_eq!(state.cm().matrix(), back.cm().matrix());
        assert_eq!(state.disp().vector(), back.disp().vector());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "modes 1\ncm 1 0 0 oops\ndisp 0 0\n";
        match parse_record(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_unphysical_state() {
        let text = "modes 1\ncm 0.5 0 0 0.5\ndisp 0 0\n";
        assert!(parse_record(text).is_err());
    }
}
