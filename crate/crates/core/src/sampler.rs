//! Seeded random generation of physical Gaussian states per family, plus the
//! scatter experiments behind the bound-curve figures.
//!
//! Determinism: each state index gets its own ChaCha substream keyed by
//! (seed, index), including its rejection loop, so parallel and serial runs
//! emit identical states. States failing the physicality check are rejected
//! and redrawn, never repaired.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{
    mean_photon_numbers, purity, CovarianceMatrix, DisplacementVector, GaussianState,
};
use crate::info::{coherence, log_negativity};
use crate::qfi::{avg_qfi, QfiConfig};

/// Rejection budget per state before the ranges are declared misconfigured
/// (acceptance below 1% over a 10^4 window).
const MAX_ATTEMPTS: usize = 10_000;

/// The sampled state families of the scatter experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    /// One mode, cm [[a, g], [g, b]] with displacement.
    General1Mode,
    /// Two modes, cm [[a1, g, c, 0], [g, b1, 0, d], [c, 0, b2, 0], [0, d, 0, b2]]
    /// with displacement on mode A.
    General2Mode,
    /// diag(a1, b1, b2, b2), no correlations. Sampled with zero displacement
    /// so the separable cap 3 - 1/(1+2n) + 2n applies.
    SeparableStandard,
    /// Isotropic blocks with gamma = diag(c, c), c != 0; correlated but
    /// unentangled (det gamma > 0), displacement on mode A.
    Discordant,
    /// Two-mode squeezed vacuum with random r, zero displacement.
    EntangledPure,
    /// Vacuum covariance, random displacement.
    Coherent,
    /// (2 nbar + 1) Identity, zero displacement.
    Thermal,
    /// Squeezed vacuum with a random axis, zero displacement.
    SqueezedPure,
}

impl StateFamily {
    pub const ALL: [StateFamily; 8] = [
        StateFamily::General1Mode,
        StateFamily::General2Mode,
        StateFamily::SeparableStandard,
        StateFamily::Discordant,
        StateFamily::EntangledPure,
        StateFamily::Coherent,
        StateFamily::Thermal,
        StateFamily::SqueezedPure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::General1Mode => "general-1mode",
            StateFamily::General2Mode => "general-2mode",
            StateFamily::SeparableStandard => "separable-standard",
            StateFamily::Discordant => "discordant",
            StateFamily::EntangledPure => "entangled-pure",
            StateFamily::Coherent => "coherent",
            StateFamily::Thermal => "thermal",
            StateFamily::SqueezedPure => "squeezed-pure",
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            StateFamily::General1Mode
            | StateFamily::Coherent
            | StateFamily::Thermal
            | StateFamily::SqueezedPure => 1,
            _ => 2,
        }
    }
}

impl std::str::FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown state family '{s}'")))
    }
}

impl std::fmt::Display for StateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-family parameter ranges. Diagonal entries are uniform on [1, a_max],
/// correlations uniform on symmetric intervals, displacements uniform in a
/// disc, squeezing amplitudes uniform on (0, squeeze_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyRanges {
    pub a_max: f64,
    pub g_max: f64,
    pub c_max: f64,
    pub disp_radius: f64,
    pub squeeze_max: f64,
    pub nbar_max: f64,
}

impl Default for FamilyRanges {
    fn default() -> Self {
        FamilyRanges {
            a_max: 9.0,
            g_max: 9.0,
            c_max: 9.0,
            disp_radius: 4.0,
            squeeze_max: 1.5,
            nbar_max: 4.0,
        }
    }
}

/// A sampled family: the family tag, its ranges, and the stream seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateClassSpec {
    pub family: StateFamily,
    pub seed: u64,
    pub ranges: FamilyRanges,
}

impl StateClassSpec {
    pub fn new(family: StateFamily, seed: u64) -> Self {
        StateClassSpec {
            family,
            seed,
            ranges: FamilyRanges::default(),
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Area-uniform draw in a disc of the given radius: (x, y).
fn disc(rng: &mut ChaCha8Rng, radius: f64) -> (f64, f64) {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = uniform(rng, 0.0, 2.0 * std::f64::consts::PI);
    (r * phi.cos(), r * phi.sin())
}

/// Deterministically draw the state at `index` of the spec's stream.
pub fn sample_one(spec: &StateClassSpec, index: u64) -> Result<GaussianState> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let rg = &spec.ranges;

    for _ in 0..MAX_ATTEMPTS {
        let candidate = draw_candidate(&mut rng, spec.family, rg);
        if let Ok(state) = candidate {
            return Ok(state);
        }
    }
    Err(Error::AcceptanceRate {
        family: spec.family.name().to_string(),
        attempts: MAX_ATTEMPTS,
    })
}

fn draw_candidate(
    rng: &mut ChaCha8Rng,
    family: StateFamily,
    rg: &FamilyRanges,
) -> Result<GaussianState> {
    match family {
        StateFamily::General1Mode => {
            let a = uniform(rng, 1.0, rg.a_max);
            let b = uniform(rng, 1.0, rg.a_max);
            let g = uniform(rng, -rg.g_max, rg.g_max);
            let (x, y) = disc(rng, rg.disp_radius);
            let cm = CovarianceMatrix::from_row_major(2, &[a, g, g, b])?;
            GaussianState::new(cm, DisplacementVector::from_slice(&[x, y])?)
        }
        StateFamily::General2Mode => {
            let a1 = uniform(rng, 1.0, rg.a_max);
            let b1 = uniform(rng, 1.0, rg.a_max);
            let b2 = uniform(rng, 1.0, rg.a_max);
            let g = uniform(rng, -rg.g_max, rg.g_max);
            let c = uniform(rng, -rg.c_max, rg.c_max);
            let d = uniform(rng, -rg.c_max, rg.c_max);
            let (x, y) = disc(rng, rg.disp_radius);
            let cm = CovarianceMatrix::from_row_major(
                4,
                &[
                    a1, g, c, 0.0, //
                    g, b1, 0.0, d, //
                    c, 0.0, b2, 0.0, //
                    0.0, d, 0.0, b2,
                ],
            )?;
            GaussianState::new(cm, DisplacementVector::from_slice(&[x, y, 0.0, 0.0])?)
        }
        StateFamily::SeparableStandard => {
            let a1 = uniform(rng, 1.0, rg.a_max);
            let b1 = uniform(rng, 1.0, rg.a_max);
            let b2 = uniform(rng, 1.0, rg.a_max);
            let cm = CovarianceMatrix::from_row_major(
                4,
                &[
                    a1, 0.0, 0.0, 0.0, //
                    0.0, b1, 0.0, 0.0, //
                    0.0, 0.0, b2, 0.0, //
                    0.0, 0.0, 0.0, b2,
                ],
            )?;
            GaussianState::new(cm, DisplacementVector::zeros(4))
        }
        StateFamily::Discordant => {
            let a = uniform(rng, 1.0, rg.a_max);
            let b = uniform(rng, 1.0, rg.a_max);
            let c = uniform(rng, -rg.c_max, rg.c_max);
            if c == 0.0 {
                return Err(Error::invalid("discordant family needs c != 0"));
            }
            let (x, y) = disc(rng, rg.disp_radius);
            let cm = CovarianceMatrix::from_row_major(
                4,
                &[
                    a, 0.0, c, 0.0, //
                    0.0, a, 0.0, c, //
                    c, 0.0, b, 0.0, //
                    0.0, c, 0.0, b,
                ],
            )?;
            GaussianState::new(cm, DisplacementVector::from_slice(&[x, y, 0.0, 0.0])?)
        }
        StateFamily::EntangledPure => {
            let r = rg.squeeze_max * (1.0 - rng.random::<f64>());
            GaussianState::tmsv(r)
        }
        StateFamily::Coherent => {
            let (x, y) = disc(rng, rg.disp_radius);
            GaussianState::coherent(x, y)
        }
        StateFamily::Thermal => {
            let nbar = uniform(rng, 0.0, rg.nbar_max);
            GaussianState::thermal(nbar)
        }
        StateFamily::SqueezedPure => {
            let r = uniform(rng, 0.0, rg.squeeze_max);
            let phi = uniform(rng, 0.0, std::f64::consts::PI);
            let (s2, c2) = (2.0 * phi).sin_cos();
            let m = (2.0 * r).cosh();
            let w = (2.0 * r).sinh();
            let cm = CovarianceMatrix::from_row_major(
                2,
                &[m + w * c2, w * s2, w * s2, m - w * c2],
            )?;
            GaussianState::new(cm, DisplacementVector::zeros(2))
        }
    }
}

/// Sample `count` states in parallel; output is identical across thread
/// counts and matches `count` serial calls to `sample_one`.
pub fn sample(spec: &StateClassSpec, count: usize) -> Result<Vec<GaussianState>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_one(spec, i))
        .collect()
}

/// One scatter-experiment row. Numeric failures leave NaNs behind and add a
/// flag; rows are never dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub state_id: u64,
    pub family: StateFamily,
    pub n_a: f64,
    pub avg_qfi: f64,
    pub convergence_delta: f64,
    pub e_n: Option<f64>,
    pub coherence: f64,
    pub purity: f64,
    pub flags: Vec<String>,
}

impl ScatterRow {
    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Run the scatter experiment: sample, evaluate the averaged QFI and the
/// scalar diagnostics per state, and sort rows by (n_A, state_id).
/// Bit-for-bit reproducible for a fixed (spec, count, config).
pub fn scatter_experiment(
    spec: &StateClassSpec,
    count: usize,
    cfg: &QfiConfig,
) -> Result<Vec<ScatterRow>> {
    let mut rows: Vec<ScatterRow> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let state = sample_one(spec, i)?;
            Ok(evaluate_row(i, spec.family, &state, cfg))
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| {
        a.n_a
            .partial_cmp(&b.n_a)
            .expect("finite n_A")
            .then(a.state_id.cmp(&b.state_id))
    });
    Ok(rows)
}

fn evaluate_row(
    state_id: u64,
    family: StateFamily,
    state: &GaussianState,
    cfg: &QfiConfig,
) -> ScatterRow {
    let n_a = mean_photon_numbers(state)[0];
    let mut flags: Vec<String> = Vec::new();

    let (avg, conv) = match avg_qfi(state, cfg.nodes, cfg.delta) {
        Ok(rep) => {
            flags.extend(rep.flags().iter().map(|s| s.to_string()));
            (rep.avg_qfi, rep.convergence_delta)
        }
        Err(e) => {
            flags.push(format!("error:{e}"));
            (f64::NAN, f64::NAN)
        }
    };

    let e_n = if state.modes() == 2 {
        match log_negativity(state) {
            Ok(rep) => Some(rep.log_negativity),
            Err(e) => {
                flags.push(format!("error:{e}"));
                Some(f64::NAN)
            }
        }
    } else {
        None
    };

    ScatterRow {
        state_id,
        family,
        n_a,
        avg_qfi: avg,
        convergence_delta: conv,
        e_n,
        coherence: coherence(state),
        purity: purity(state),
        flags,
    }
}
