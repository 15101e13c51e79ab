use rayon::prelude::*;
use serde_json::json;
use uniaxial_core::acceptance::{run_criterion, CriterionReport, CRITERIA};
use uniaxial_core::continuum::quartic::{quartic_ground, GridSpec};
use uniaxial_core::continuum::{critical_energy, energy_analytic, gaussian_wavefunction};
use uniaxial_core::dicke::{
    dicke_concurrence_limit, dicke_moments, dicke_rescaled_concurrence, qubit_field_tangle,
    tangle_thermodynamic,
};
use uniaxial_core::entanglement::{
    block_rdm, concurrence_thermodynamic, linear_entropy, one_tangle, one_tangle_analytic,
    rescaled_concurrence,
};
use uniaxial_core::observables::{analytic_moments, critical_moments, spin_moments};
use uniaxial_core::scaling::{fit_power_law, geometric_grid, sweep, Observable, SweepParams};
use uniaxial_core::spin::{build_hamiltonian, ground_state_with};
use uniaxial_core::{
    DickeParams, Error, QuarticConstants, SpinMoments, UniaxialParams, Wavefunction,
};

use crate::config::RunConfig;
use crate::output::{Cell, Table};
use crate::CliError;

type Rows = Vec<Vec<Cell>>;

fn ground(cfg: &RunConfig, p: &UniaxialParams) -> Result<(f64, Wavefunction), CliError> {
    Ok(ground_state_with(&build_hamiltonian(p)?, &cfg.solver)?)
}

fn uniaxial(cfg: &RunConfig, n: usize, alpha: f64) -> Result<UniaxialParams, CliError> {
    Ok(UniaxialParams::new(n, cfg.delta, alpha, cfg.epsilon)?)
}

/// Evaluates `f` over every `(N, α)` pair in parallel, keeping the
/// N-major order of the inputs.
fn over_grid<F>(ns: &[usize], alphas: &[f64], f: F) -> Result<Rows, CliError>
where
    F: Fn(usize, f64) -> Result<Rows, CliError> + Sync,
{
    let pairs: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| alphas.iter().map(move |&a| (n, a)))
        .collect();
    let chunks: Vec<Result<Rows, CliError>> = pairs.par_iter().map(|&(n, a)| f(n, a)).collect();
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    Ok(rows)
}

fn moment_cells(m: &SpinMoments) -> [Cell; 5] {
    [
        m.sx_per_n().into(),
        m.sz_per_n().into(),
        m.sz2_per_n2().into(),
        m.sx2_per_n2().into(),
        m.sy2_per_n2().into(),
    ]
}

pub fn ground_cmd(cfg: &RunConfig) -> Result<Table, CliError> {
    let ns = cfg.n.clone().unwrap_or_else(|| vec![100]);
    let alphas = cfg.alpha.clone().unwrap_or_else(|| vec![1.0]);
    let mut t = Table::new(["n", "alpha", "energy", "m", "phi"]);
    t.rows = over_grid(&ns, &alphas, |n, a| {
        let (e, wf) = ground(cfg, &uniaxial(cfg, n, a)?)?;
        Ok(wf
            .iter()
            .map(|(m, phi)| vec![n.into(), a.into(), e.into(), m.into(), phi.into()])
            .collect())
    })?;
    Ok(t)
}

pub fn moments_cmd(cfg: &RunConfig) -> Result<Table, CliError> {
    let ns = cfg.n.clone().unwrap_or_else(|| vec![1000]);
    let alphas = cfg.alpha.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    let consts = QuarticConstants::get();
    let mut t = Table::new([
        "n",
        "alpha",
        "source",
        "energy_per_n",
        "sx_per_n",
        "sz_per_n",
        "sz2_per_n2",
        "sx2_per_n2",
        "sy2_per_n2",
    ]);
    t.rows = over_grid(&ns, &alphas, |n, a| {
        let p = uniaxial(cfg, n, a)?;
        let (e, wf) = ground(cfg, &p)?;
        let row = |source: &str, e: f64, m: &SpinMoments| {
            let mut r: Vec<Cell> = vec![n.into(), a.into(), source.into(), e.into()];
            r.extend(moment_cells(m));
            r
        };
        let mut rows = vec![row("exact", e / n as f64, &spin_moments(&wf)?)];
        if cfg.epsilon == 0.0 {
            if a == 1.0 {
                let m = critical_moments(n, consts);
                rows.push(row("critical", critical_energy(n, cfg.delta, consts), &m));
            } else {
                rows.push(row("analytic", energy_analytic(&p)?, &analytic_moments(&p)?));
            }
        }
        Ok(rows)
    })?;
    Ok(t)
}

pub fn entangle_cmd(cfg: &RunConfig, block: Option<usize>) -> Result<Table, CliError> {
    let ns = cfg.n.clone().unwrap_or_else(|| vec![100]);
    let alphas = cfg.alpha.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    let mut t = Table::new([
        "n",
        "alpha",
        "tau1",
        "concurrence",
        "c_r",
        "block",
        "tau_block",
        "tau1_limit",
        "c_r_limit",
    ]);
    t.rows = over_grid(&ns, &alphas, |n, a| {
        let (_, wf) = ground(cfg, &uniaxial(cfg, n, a)?)?;
        let l = block.unwrap_or((n / 2).max(1));
        let (c, cr) = rescaled_concurrence(&wf)?;
        let tau_l = linear_entropy(&block_rdm(&wf, l)?);
        let (tau_lim, cr_lim) = if cfg.epsilon == 0.0 && a != 1.0 {
            (one_tangle_analytic(a, n), concurrence_thermodynamic(a))
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(vec![vec![
            n.into(),
            a.into(),
            one_tangle(&wf)?.into(),
            c.into(),
            cr.into(),
            l.into(),
            tau_l.into(),
            tau_lim.into(),
            cr_lim.into(),
        ]])
    })?;
    Ok(t)
}

fn require_d(cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.d_ratio
        .ok_or_else(|| CliError::Config("--d-ratio is required for this command".into()))
}

pub fn dicke_cmd(cfg: &RunConfig) -> Result<Table, CliError> {
    let d = require_d(cfg)?;
    let ns = cfg.n.clone().unwrap_or_else(|| vec![100]);
    let alphas = cfg.alpha.clone().unwrap_or_else(|| vec![0.5, 1.0, 1.5]);
    if DickeParams::from_reduced(1, cfg.delta, 0.0, d).is_ok_and(|p| !p.is_adiabatic()) {
        eprintln!("warning: D = {d} lies outside the adiabatic regime");
    }
    let mut t = Table::new([
        "n",
        "alpha",
        "d_ratio",
        "energy_per_n",
        "sx_per_n",
        "sz_per_n",
        "sz2_per_n2",
        "sx2_per_n2",
        "sy2_per_n2",
        "c_r",
        "c_r_limit",
        "tau_n",
        "tau_inf",
    ]);
    t.rows = over_grid(&ns, &alphas, |n, a| {
        let p = DickeParams::from_reduced(n, cfg.delta, a, d)?;
        let (e, wf) = ground(cfg, &p.uniaxial())?;
        let mut r: Vec<Cell> = vec![n.into(), a.into(), d.into(), (e / n as f64).into()];
        r.extend(moment_cells(&dicke_moments(&wf, &p)?));
        r.push(dicke_rescaled_concurrence(&wf, &p)?.into());
        r.push(dicke_concurrence_limit(a, d).unwrap_or(f64::NAN).into());
        r.push(qubit_field_tangle(&wf, &p)?.into());
        r.push(tangle_thermodynamic(a, d).into());
        Ok(vec![r])
    })?;
    Ok(t)
}

pub fn quartic_cmd(zetas: Option<Vec<f64>>) -> Result<Table, CliError> {
    let c = QuarticConstants::get();
    let zetas = zetas.unwrap_or_else(|| vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    let mut t = Table::new(["name", "zeta", "value"]);
    for (name, v) in [("beta0", c.beta0), ("beta1", c.beta1), ("k", c.k)] {
        t.push(vec![name.into(), f64::NAN.into(), v.into()]);
    }
    let grid = GridSpec::default();
    let energies: Vec<Result<f64, Error>> = zetas
        .par_iter()
        .map(|&z| quartic_ground(z, &grid).map(|s| s.e0))
        .collect();
    for (z, e) in zetas.iter().zip(energies) {
        t.push(vec!["e0".into(), (*z).into(), e?.into()]);
    }
    Ok(t)
}

pub fn scaling_cmd(
    cfg: &RunConfig,
    obs: Observable,
    window: (Option<usize>, Option<usize>),
) -> Result<Table, CliError> {
    if obs.needs_d_ratio() {
        require_d(cfg)?;
    } else if cfg.d_ratio.is_some() {
        return Err(CliError::Config(format!("--d-ratio does not apply to {obs}")));
    }
    let params = SweepParams {
        alpha: cfg.single_alpha(1.0)?,
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        d_ratio: cfg.d_ratio,
        solver: cfg.solver,
    };
    let ns = match &cfg.n {
        Some(ns) => ns.clone(),
        None => geometric_grid(cfg.nmin.unwrap_or(256), cfg.nmax.unwrap_or(8192), cfg.ngrid)?,
    };
    let table = sweep(obs, &ns, &params)?;
    let lo = window.0.unwrap_or(ns[0]);
    let hi = window.1.unwrap_or(ns[ns.len() - 1]);
    let fit = match fit_power_law(&table, (lo, hi)) {
        Ok(f) => Some(f),
        Err(Error::Fit(msg)) => {
            eprintln!("no power-law fit for {obs}: {msg}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut t = Table::new(["n", "value", "fit"]);
    for &(n, v) in &table.rows {
        let pred = fit.map_or(f64::NAN, |f| f.predict(n));
        t.push(vec![n.into(), v.into(), pred.into()]);
    }
    if let Some(f) = fit {
        eprintln!(
            "{obs}: exponent {:.6}, prefactor {:.6} (2N) / {:.6} (N), rms residual {:.2e}, N in [{}, {}]",
            f.exponent,
            f.prefactor,
            f.prefactor_per_n(),
            f.residual,
            f.window.0,
            f.window.1
        );
        t = t.with_extra(
            "fit",
            json!({
                "observable": obs.name(),
                "exponent": f.exponent,
                "prefactor": f.prefactor,
                "prefactor_per_n": f.prefactor_per_n(),
                "residual": f.residual,
                "window": [f.window.0, f.window.1],
            }),
        );
    }
    Ok(t)
}

fn alpha_axis(cfg: &RunConfig) -> Vec<f64> {
    cfg.alpha
        .clone()
        .unwrap_or_else(|| (0..=100).map(|i| i as f64 / 50.0).collect())
}

/// Exact vs continuum wavefunctions.
pub fn figure1(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.single_n(200)?;
    let alphas = cfg.alpha.clone().unwrap_or_else(|| vec![0.3, 1.3]);
    let mut t = Table::new(["alpha", "m", "phi_exact", "phi_continuum"]);
    t.rows = over_grid(&[n], &alphas, |n, a| {
        let p = uniaxial(cfg, n, a)?;
        let (_, exact) = ground(cfg, &p)?;
        let cont = gaussian_wavefunction(&p)?;
        Ok(exact
            .iter()
            .zip(cont.amps.iter())
            .map(|((m, x), y)| vec![a.into(), m.into(), x.into(), (*y).into()])
            .collect())
    })?;
    Ok(t)
}

/// Critical moments against the leading finite-size laws.
pub fn figure2(cfg: &RunConfig) -> Result<Table, CliError> {
    let consts = QuarticConstants::get();
    let ns = match &cfg.n {
        Some(ns) => ns.clone(),
        None => geometric_grid(cfg.nmin.unwrap_or(16), cfg.nmax.unwrap_or(8192), cfg.ngrid)?,
    };
    let mut t = Table::new([
        "n",
        "sz2_exact",
        "sz2_critical",
        "sy2_exact",
        "sy2_critical",
        "one_minus_sx_exact",
        "one_minus_sx_critical",
    ]);
    t.rows = over_grid(&ns, &[1.0], |n, a| {
        let (_, wf) = ground(cfg, &uniaxial(cfg, n, a)?)?;
        let s = spin_moments(&wf)?;
        let c = critical_moments(n, consts);
        Ok(vec![vec![
            n.into(),
            s.sz2_per_n2().into(),
            c.sz2_per_n2().into(),
            s.sy2_per_n2().into(),
            c.sy2_per_n2().into(),
            (1.0 - s.sx_per_n()).into(),
            (1.0 - c.sx_per_n()).into(),
        ]])
    })?;
    Ok(t)
}

fn dicke_curves<F, G>(
    cfg: &RunConfig,
    prefix: &str,
    default_ns: &[usize],
    finite: F,
    limit: G,
) -> Result<Table, CliError>
where
    F: Fn(&Wavefunction, &DickeParams) -> Result<f64, Error> + Sync,
    G: Fn(f64, f64) -> f64,
{
    let d = cfg.d_ratio.unwrap_or(0.1);
    let ns = cfg.n.clone().unwrap_or_else(|| default_ns.to_vec());
    let alphas = alpha_axis(cfg);
    let mut columns = vec!["alpha".to_string()];
    columns.extend(ns.iter().map(|n| format!("{prefix}_n{n}")));
    columns.push(format!("{prefix}_inf"));
    let mut t = Table::new(columns).with_extra("d_ratio", d);
    // cells come back N-major; transpose to one row per α
    let cells = over_grid(&ns, &alphas, |n, a| {
        let p = DickeParams::from_reduced(n, cfg.delta, a, d)?;
        let (_, wf) = ground(cfg, &p.uniaxial())?;
        Ok(vec![vec![finite(&wf, &p)?.into()]])
    })?;
    for (j, &a) in alphas.iter().enumerate() {
        let mut row: Vec<Cell> = vec![a.into()];
        for i in 0..ns.len() {
            row.push(cells[i * alphas.len() + j][0].clone());
        }
        row.push(limit(a, d).into());
        t.push(row);
    }
    Ok(t)
}

/// Dicke rescaled concurrence, finite N and thermodynamic limit.
pub fn figure3(cfg: &RunConfig) -> Result<Table, CliError> {
    dicke_curves(cfg, "c_r", &[100], dicke_rescaled_concurrence, |a, d| {
        dicke_concurrence_limit(a, d).unwrap_or(f64::NAN)
    })
}

/// Qubit-field tangle for several N and its limit.
pub fn figure4(cfg: &RunConfig) -> Result<Table, CliError> {
    dicke_curves(cfg, "tau", &[6, 10, 20, 100], qubit_field_tangle, tangle_thermodynamic)
}

pub fn figure(cfg: &RunConfig, fig: u8) -> Result<Table, CliError> {
    match fig {
        1 => figure1(cfg),
        2 => figure2(cfg),
        3 => figure3(cfg),
        4 => figure4(cfg),
        _ => Err(CliError::Config(format!("no figure {fig} (1-4)"))),
    }
}

/// Runs the selected criteria, printing each line as it finishes.
pub fn verify_cmd(ids: Option<Vec<u8>>) -> Result<(Table, Vec<CriterionReport>), CliError> {
    let ids = ids.unwrap_or_else(|| CRITERIA.iter().map(|c| c.0).collect());
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id)
            .ok_or_else(|| CliError::Config(format!("no acceptance criterion {id} (1-9)")))?;
        println!("{}", r.line());
        reports.push(r);
    }
    let mut t = Table::new(["id", "title", "result", "detail"]);
    for r in &reports {
        t.push(vec![
            (r.id as usize).into(),
            r.title.into(),
            (if r.passed { "pass" } else { "fail" }).into(),
            r.detail.as_str().into(),
        ]);
    }
    Ok((t, reports))
}
