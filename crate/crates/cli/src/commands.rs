use std::path::Path;
use std::str::FromStr;

use gaussmet_core::classical::{mle_location_experiment, GaussianLocationModel};
use gaussmet_core::fock::{
    build_state, encode, fidelity_fock, qfi_pure_fd, qfi_sld, FockStateSpec, TwoModePureState,
    DEFAULT_LEAK_TOL, DEFAULT_ORACLE_DIM, DEFAULT_SLD_CUTOFF,
};
use gaussmet_core::gaussian::{parse_record, write_record};
use gaussmet_core::qfi::encoding_symplectic;
use gaussmet_core::sampler::{sample, scatter_experiment, StateClassSpec, StateFamily};
use gaussmet_core::{
    apply, avg_qfi, bound_curve, gaussian_fidelity, mean_photon_numbers, qfi_at_theta,
    quantum_crb, BoundFamily, GaussianState, QfiConfig,
};
use nalgebra::Complex;

use crate::output::{fmt_g9, CsvDoc};
use crate::CliError;

pub fn bounds(n_max: f64, points: usize, out: &Path) -> Result<(), CliError> {
    if !(n_max > 0.0) {
        return Err(CliError::Usage("--n-max must be > 0".into()));
    }
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut doc = CsvDoc::new(
        "bounds",
        &[
            ("n_max", fmt_g9(n_max)),
            ("points", points.to_string()),
        ],
    );
    doc.header(&["family", "n_A", "value"]);
    for family in BoundFamily::ALL {
        for k in 0..points {
            let n = n_max * k as f64 / (points - 1) as f64;
            let v = bound_curve(family, n)?;
            doc.row(&[family.name().to_string(), fmt_g9(n), fmt_g9(v)]);
        }
    }
    doc.write_to(out)?;
    println!("wrote {} bound-curve rows to {}", BoundFamily::ALL.len() * points, out.display());
    Ok(())
}

pub fn sweep(
    family: &str,
    count: usize,
    seed: u64,
    nodes: usize,
    delta: f64,
    out: &Path,
    dump_states: Option<&Path>,
) -> Result<(), CliError> {
    let family = StateFamily::from_str(family)?;
    let spec = StateClassSpec::new(family, seed);
    let cfg = QfiConfig { nodes, delta };
    let rows = scatter_experiment(&spec, count, &cfg)?;

    let mut doc = CsvDoc::new(
        "sweep",
        &[
            ("family", family.name().to_string()),
            ("count", count.to_string()),
            ("seed", seed.to_string()),
            ("nodes", nodes.to_string()),
            ("delta", fmt_g9(delta)),
        ],
    );
    doc.header(&[
        "state_id", "family", "n_A", "avg_qfi", "E_N", "coherence", "purity", "flags",
    ]);
    let mut flagged = 0usize;
    for r in &rows {
        if !r.is_clean() {
            flagged += 1;
        }
        doc.row(&[
            r.state_id.to_string(),
            r.family.name().to_string(),
            fmt_g9(r.n_a),
            fmt_g9(r.avg_qfi),
            r.e_n.map(fmt_g9).unwrap_or_default(),
            fmt_g9(r.coherence),
            fmt_g9(r.purity),
            r.flags.join(";"),
        ]);
    }
    doc.write_to(out)?;

    if let Some(path) = dump_states {
        let states = sample(&spec, count)?;
        let mut buf = String::new();
        buf.push_str(&format!(
            "# gaussmet {} states family={} count={count} seed={seed}\n",
            crate::output::VERSION,
            family.name()
        ));
        for (i, st) in states.iter().enumerate() {
            buf.push_str(&format!("# state {i}\n"));
            buf.push_str(&write_record(st));
            buf.push('\n');
        }
        std::fs::write(path, buf)?;
    }

    println!("wrote {} rows to {}", rows.len(), out.display());
    if flagged > 0 {
        return Err(CliError::Numerical(format!(
            "{flagged} of {} rows flagged; see the flags column",
            rows.len()
        )));
    }
    Ok(())
}

pub fn qfi(
    state_file: &Path,
    nodes: usize,
    delta: f64,
    out: Option<&Path>,
    summary_out: Option<&Path>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(state_file)?;
    let state = parse_record(&text)?;
    let n_a = mean_photon_numbers(&state)[0];
    let report = avg_qfi(&state, nodes, delta)?;

    println!("state: modes={} n_A={}", state.modes(), fmt_g9(n_a));
    println!("avg_qfi = {}", fmt_g9(report.avg_qfi));
    println!(
        "convergence_delta = {} (nodes {} vs {}), converged = {}",
        fmt_g9(report.convergence_delta),
        report.quadrature_nodes,
        report.quadrature_nodes / 2,
        report.converged
    );
    for m in [1u64, 100, 10_000] {
        println!(
            "quantum CRB at M={m}: {}",
            fmt_g9(quantum_crb(report.avg_qfi, m)?)
        );
    }
    for flag in report.flags() {
        println!("flag: {flag}");
    }

    let config = [
        ("state_file", state_file.display().to_string()),
        ("nodes", nodes.to_string()),
        ("delta", fmt_g9(delta)),
    ];
    if let Some(path) = out {
        let mut doc = CsvDoc::new("qfi", &config);
        doc.header(&["state_id", "n_A", "theta", "H_theta"]);
        for &(theta, h) in &report.theta_samples {
            doc.row(&["0".to_string(), fmt_g9(n_a), fmt_g9(theta), fmt_g9(h)]);
        }
        doc.write_to(path)?;
    }
    if let Some(path) = summary_out {
        let mut doc = CsvDoc::new("qfi", &config);
        doc.header(&["state_id", "n_A", "avg_qfi", "convergence_delta"]);
        doc.row(&[
            "0".to_string(),
            fmt_g9(n_a),
            fmt_g9(report.avg_qfi),
            fmt_g9(report.convergence_delta),
        ]);
        doc.write_to(path)?;
    }
    Ok(())
}

pub fn classical(
    sigma: f64,
    n_samples: usize,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let model = GaussianLocationModel::new(0.0, sigma)?;
    let report = mle_location_experiment(&model, n_samples, trials, seed)?;

    println!(
        "MLE location experiment: N={} trials={} sigma={}",
        n_samples,
        trials,
        fmt_g9(sigma)
    );
    println!("empirical std = {}", fmt_g9(report.empirical_std));
    println!("CRB sigma/sqrt(N) = {}", fmt_g9(report.crb));
    println!("ratio = {}", fmt_g9(report.empirical_std / report.crb));

    if let Some(path) = out {
        let mut doc = CsvDoc::new(
            "classical",
            &[
                ("sigma", fmt_g9(sigma)),
                ("n_samples", n_samples.to_string()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
            ],
        );
        doc.header(&["trial_block", "n_samples", "empirical_std", "crb", "ratio"]);
        for b in &report.blocks {
            doc.row(&[
                b.block.to_string(),
                n_samples.to_string(),
                fmt_g9(b.empirical_std),
                fmt_g9(report.crb),
                fmt_g9(b.ratio),
            ]);
        }
        doc.row(&[
            "all".to_string(),
            n_samples.to_string(),
            fmt_g9(report.empirical_std),
            fmt_g9(report.crb),
            fmt_g9(report.empirical_std / report.crb),
        ]);
        doc.write_to(path)?;
    }
    Ok(())
}

struct CheckList {
    failures: usize,
}

impl CheckList {
    fn new() -> Self {
        CheckList { failures: 0 }
    }

    fn abs(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let delta = (got - want).abs();
        self.report(name, delta, tol, delta <= tol);
    }

    fn rel(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let delta = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
        self.report(name, delta, tol, delta <= tol);
    }

    fn report(&mut self, name: &str, delta: f64, tol: f64, ok: bool) {
        if ok {
            println!("ok   {name}: |delta| = {} (tol {})", fmt_g9(delta), fmt_g9(tol));
        } else {
            println!("FAIL {name}: |delta| = {} (tol {})", fmt_g9(delta), fmt_g9(tol));
            self.failures += 1;
        }
    }
}

pub fn verify(full: bool) -> Result<(), CliError> {
    type C64 = Complex<f64>;
    let dim = DEFAULT_ORACLE_DIM;
    let mut checks = CheckList::new();

    let fixtures: Vec<(&str, GaussianState, FockStateSpec)> = vec![
        (
            "vacuum",
            GaussianState::vacuum(1),
            FockStateSpec::Coherent { alpha: C64::new(0.0, 0.0) },
        ),
        (
            "coherent nbar=1",
            GaussianState::coherent(2.0, 0.0).map_err(gaussmet_core::Error::from)?,
            FockStateSpec::Coherent { alpha: C64::new(1.0, 0.0) },
        ),
        (
            "thermal nbar=1",
            GaussianState::thermal(1.0)?,
            FockStateSpec::Thermal { nbar: 1.0 },
        ),
        (
            "squeezed r=0.5",
            GaussianState::squeezed_vacuum(0.5)?,
            FockStateSpec::Squeezed { r: 0.5 },
        ),
    ];
    let focks: Vec<_> = fixtures
        .iter()
        .map(|(_, _, spec)| build_state(*spec, dim, DEFAULT_LEAK_TOL))
        .collect::<gaussmet_core::Result<_>>()?;

    // quick level: fidelity referee on the fixture states
    for (i, j) in [(0usize, 1usize), (0, 2), (0, 3)] {
        let fg = gaussian_fidelity(&fixtures[i].1, &fixtures[j].1)?;
        let ff = fidelity_fock(&focks[i], &focks[j])?;
        checks.abs(
            &format!("fidelity {} vs {}", fixtures[i].0, fixtures[j].0),
            fg,
            ff,
            1e-4,
        );
    }

    if full {
        let h = 1e-4;
        for ((name, gauss, _), fock0) in fixtures.iter().zip(&focks) {
            for &theta in &[0.0, 0.7] {
                let s0 = encoding_symplectic(theta, 0.0, 1)?;
                let sd = encoding_symplectic(theta, 0.05, 1)?;
                let fg = gaussian_fidelity(&apply(&s0, gauss)?, &apply(&sd, gauss)?)?;
                let ff = fidelity_fock(
                    &encode(fock0, theta, 0.0, DEFAULT_LEAK_TOL)?,
                    &encode(fock0, theta, 0.05, DEFAULT_LEAK_TOL)?,
                )?;
                checks.abs(&format!("encoded fidelity {name} theta={theta}"), fg, ff, 1e-4);

                let hg = qfi_at_theta(gauss, theta, 1e-3)?;
                let hf = qfi_sld(
                    &encode(fock0, theta, 0.0, DEFAULT_LEAK_TOL)?,
                    &encode(fock0, theta, h, DEFAULT_LEAK_TOL)?,
                    &encode(fock0, theta, -h, DEFAULT_LEAK_TOL)?,
                    h,
                    DEFAULT_SLD_CUTOFF,
                )?;
                checks.rel(&format!("QFI {name} theta={theta}"), hg, hf, 1e-2);
            }
        }

        let r = 0.5;
        let gauss = GaussianState::tmsv(r)?;
        let psi = TwoModePureState::tmsv(r, dim, DEFAULT_LEAK_TOL)?;
        for &theta in &[0.0, 0.7] {
            let s0 = encoding_symplectic(theta, 0.0, 2)?;
            let sd = encoding_symplectic(theta, 0.05, 2)?;
            let fg = gaussian_fidelity(&apply(&s0, &gauss)?, &apply(&sd, &gauss)?)?;
            let ff = psi
                .encode_a(theta, 0.0, DEFAULT_LEAK_TOL)?
                .fidelity(&psi.encode_a(theta, 0.05, DEFAULT_LEAK_TOL)?);
            checks.abs(&format!("encoded fidelity TMSV r=0.5 theta={theta}"), fg, ff, 1e-4);

            let hg = qfi_at_theta(&gauss, theta, 1e-3)?;
            let hf = qfi_pure_fd(
                &psi.encode_a(theta, 0.0, DEFAULT_LEAK_TOL)?,
                &psi.encode_a(theta, h, DEFAULT_LEAK_TOL)?,
                &psi.encode_a(theta, -h, DEFAULT_LEAK_TOL)?,
                h,
            )?;
            checks.rel(&format!("QFI TMSV r=0.5 theta={theta}"), hg, hf, 1e-2);
        }
    }

    if checks.failures > 0 {
        Err(CliError::Numerical(format!(
            "{} verification check(s) failed",
            checks.failures
        )))
    } else {
        println!("all checks passed");
        Ok(())
    }
}
