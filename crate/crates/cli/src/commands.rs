use rayon::prelude::*;
use serde_json::{json, Value};
use sgad_core::channels::{COMPLETENESS_TOL, RESIDUAL_TOL};
use sgad_core::{
    binary_orthogonal_ensemble, build_generator, choi_matrix, classical_capacity, cp_defect,
    default_step, derive_bath, evolve_density, holevo_chi, integrate_at, pure_state,
    sgad_residuals, sgad_solve, sgad_sweep, synthesize_channel, validate_density, BathSpec,
    CapacityConfig, DensityMatrix, KrausSet, Picture, SgadParams, SgadSolution,
};

use crate::args::CommandKind;
use crate::config::{Curve, RunConfig};
use crate::output::{Body, Cell, Report, Table};
use crate::CliError;

const AD_NOTICE: &str = "amplitude damping: N = 0 (T = 0 and r = 0)";
const CHI_SLACK: f64 = 1e-10;
/// Max entrywise gap between the closed form and the RK4 trajectory.
const ORACLE_TOL: f64 = 1e-6;

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        CommandKind::Params => params(cfg),
        CommandKind::Evolve => evolve(cfg),
        CommandKind::Channel => channel(cfg),
        CommandKind::Capacity => match cfg.t {
            Some(t) => capacity_surface(cfg, t),
            None => capacity_curves(cfg),
        },
    }
}

fn is_zero_bath(bath: &BathSpec) -> Result<bool, CliError> {
    let d = derive_bath(bath).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(d.n_eff == 0.0)
}

/// AD written in SGAD coordinates (p₁ = 1, α = λ), certified against the same
/// five matching relations.
fn ad_solution(bath: &BathSpec, t: f64) -> sgad_core::Result<(SgadParams, f64)> {
    let params = SgadParams {
        p1: 1.0,
        p2: 0.0,
        alpha: -(-bath.gamma0 * t).exp_m1(),
        mu: 0.0,
        nu: 0.0,
        theta: bath.phase,
    };
    let r = sgad_residuals(&params, bath, t)?;
    Ok((params, r.iter().fold(0.0, |m: f64, x| m.max(x.abs()))))
}

fn curve_cells(c: &Curve) -> [Cell; 3] {
    [c.label.as_str().into(), c.bath.temperature.into(), c.bath.squeezing.into()]
}

fn params(cfg: &RunConfig) -> Result<Report, CliError> {
    let times = cfg.time_grid.points();
    let mut table = Table::new(&[
        "t",
        "p1",
        "p2",
        "alpha",
        "mu",
        "nu",
        "theta",
        "max_residual",
        "certified",
        "curve",
        "T",
        "r",
        "branch",
        "notice",
    ]);
    let mut all_ok = true;
    for curve in &cfg.curves {
        let zero = is_zero_bath(&curve.bath)?;
        let solved: Vec<sgad_core::Result<(SgadParams, f64, &str)>> = if zero {
            times.iter().map(|&t| ad_solution(&curve.bath, t).map(|(p, r)| (p, r, "ad"))).collect()
        } else {
            sgad_sweep(&curve.bath, &times)
                .into_iter()
                .map(|s| s.map(|s: SgadSolution| (s.params, s.max_residual(), s.branch.name())))
                .collect()
        };
        for (&t, res) in times.iter().zip(solved) {
            let mut row: Vec<Cell> = vec![t.into()];
            match res {
                Ok((p, resid, branch)) => {
                    let ok = resid <= RESIDUAL_TOL && p.validate().is_ok();
                    all_ok &= ok;
                    row.extend([p.p1, p.p2, p.alpha, p.mu, p.nu, p.theta, resid].map(Cell::from));
                    row.push(ok.into());
                    row.extend(curve_cells(curve));
                    row.push(branch.into());
                    row.push(if zero { AD_NOTICE } else { "" }.into());
                }
                Err(e) => {
                    all_ok = false;
                    row.extend([f64::NAN; 7].map(Cell::from));
                    row.push(false.into());
                    row.extend(curve_cells(curve));
                    row.push("error".into());
                    row.push(e.to_string().into());
                }
            }
            table.push(row);
        }
    }
    Ok(Report { meta: vec![], body: Body::Table(table), certified: all_ok })
}

struct EvolveRow {
    t: f64,
    rho: DensityMatrix,
    valid: bool,
    oracle_delta: Option<f64>,
}

fn evolve_curve(
    cfg: &RunConfig,
    curve: &Curve,
    times: &[f64],
) -> sgad_core::Result<Vec<EvolveRow>> {
    let rho0 = pure_state(cfg.theta0, cfg.phi0)?;
    let oracle = if cfg.oracle {
        let gen = build_generator(&curve.bath)?;
        Some(integrate_at(&gen, &rho0, times, default_step(&curve.bath)?)?)
    } else {
        None
    };
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let rho = evolve_density(&rho0, &curve.bath, t, cfg.picture)?;
            let oracle_delta = match &oracle {
                Some(states) => {
                    // The integrator runs in the interaction picture.
                    let analytic = if cfg.picture == Picture::Interaction {
                        rho
                    } else {
                        evolve_density(&rho0, &curve.bath, t, Picture::Interaction)?
                    };
                    Some((*analytic.matrix() - *states[i].matrix()).max_abs())
                }
                None => None,
            };
            Ok(EvolveRow { t, rho, valid: validate_density(rho.matrix()).passed(), oracle_delta })
        })
        .collect()
}

fn evolve(cfg: &RunConfig) -> Result<Report, CliError> {
    let times = cfg.time_grid.points();
    let results: Vec<_> = cfg.curves.par_iter().map(|c| evolve_curve(cfg, c, &times)).collect();
    let mut table = Table::new(&[
        "t",
        "x",
        "y",
        "z",
        "rho_upper",
        "rho_lower",
        "coh_re",
        "coh_im",
        "oracle_delta",
        "certified",
        "curve",
        "T",
        "r",
        "notice",
    ]);
    let mut all_ok = true;
    for (curve, res) in cfg.curves.iter().zip(results) {
        match res {
            Ok(rows) => {
                for r in rows {
                    let b = r.rho.bloch();
                    let m = r.rho.matrix();
                    let ok = r.valid && r.oracle_delta.is_none_or(|d| d <= ORACLE_TOL);
                    all_ok &= ok;
                    let mut row: Vec<Cell> = [
                        r.t,
                        b.x,
                        b.y,
                        b.z,
                        m.get(0, 0).re,
                        m.get(1, 1).re,
                        m.get(0, 1).re,
                        m.get(0, 1).im,
                        r.oracle_delta.unwrap_or(f64::NAN),
                    ]
                    .map(Cell::from)
                    .to_vec();
                    row.push(ok.into());
                    row.extend(curve_cells(curve));
                    row.push("".into());
                    table.push(row);
                }
            }
            Err(e) => {
                all_ok = false;
                let mut row: Vec<Cell> = [f64::NAN; 9].map(Cell::from).to_vec();
                row.push(false.into());
                row.extend(curve_cells(curve));
                row.push(e.to_string().into());
                table.push(row);
            }
        }
    }
    let meta = vec![
        (
            "coherence",
            json!("coh = <sigma_minus> = (x - i y)/2, upper-right entry in (|1>,|0>) order"),
        ),
        ("oracle_tolerance", json!(ORACLE_TOL)),
    ];
    Ok(Report { meta, body: Body::Table(table), certified: all_ok })
}

fn single_curve<'a>(cfg: &'a RunConfig, what: &str) -> Result<&'a Curve, CliError> {
    match cfg.curves.as_slice() {
        [c] => Ok(c),
        _ => Err(CliError::Config(format!("{what} takes a single bath, got {}", cfg.curves.len()))),
    }
}

fn channel(cfg: &RunConfig) -> Result<Report, CliError> {
    let t = cfg.t.ok_or_else(|| CliError::Config("channel needs --t".into()))?;
    let bath = single_curve(cfg, "channel")?.bath;
    let zero = is_zero_bath(&bath)?;
    let solved = if zero {
        ad_solution(&bath, t).map(|(p, r)| (p, r, "ad"))
    } else {
        sgad_solve(&bath, t).map(|s| (s.params, s.max_residual(), s.branch.name()))
    };
    let doc = match solved.and_then(|s| synthesize_channel(&bath, t).map(|k| (s, k))) {
        Ok(((params, resid, branch), kraus)) => {
            let completeness = kraus.completeness_defect();
            let choi = choi_matrix(&kraus);
            let cp = cp_defect(&choi);
            let eigenvalues = choi.spectrum().ok().map(|s| s.eigenvalues);
            let certified = completeness <= COMPLETENESS_TOL
                && cp <= COMPLETENESS_TOL
                && resid <= RESIDUAL_TOL
                && params.validate().is_ok();
            json!({
                "certified": certified,
                "channel": kraus,
                "params": params,
                "branch": branch,
                "validation": {
                    "completeness_defect": completeness,
                    "cp_defect": cp,
                    "choi_eigenvalues": eigenvalues,
                    "max_residual": resid,
                },
                "notice": if zero { Value::from(AD_NOTICE) } else { Value::Null },
            })
        }
        Err(e) => json!({ "certified": false, "channel": null, "error": e.to_string() }),
    };
    let certified = doc["certified"].as_bool().unwrap_or(false);
    Ok(Report { meta: vec![], body: Body::Document(doc), certified })
}

fn capacity_config(cfg: &RunConfig, keep_surface: bool) -> CapacityConfig {
    CapacityConfig {
        grid: cfg.grid,
        f: cfg.f,
        f_sweep: cfg.f_sweep,
        keep_surface,
        ..CapacityConfig::default()
    }
}

fn channel_ok(k: &KrausSet) -> bool {
    k.completeness_defect() <= COMPLETENESS_TOL
}

fn chi_ok(x: f64) -> bool {
    (-CHI_SLACK..=1.0 + CHI_SLACK).contains(&x)
}

fn capacity_surface(cfg: &RunConfig, t: f64) -> Result<Report, CliError> {
    let curve = single_curve(cfg, "capacity surface mode")?;
    let k =
        synthesize_channel(&curve.bath, t).map_err(|e| CliError::Certification(e.to_string()))?;
    let res = classical_capacity(&k, &capacity_config(cfg, true))
        .map_err(|e| CliError::Certification(e.to_string()))?;
    let surface = res.surface.as_ref().expect("surface requested");
    let mut table = Table::new(&["theta0", "phi0", "chi"]);
    let mut all_ok = channel_ok(&k) && chi_ok(res.c);
    for (theta, phi, chi) in surface.nodes() {
        all_ok &= chi_ok(chi);
        table.push(vec![theta.into(), phi.into(), chi.into()]);
    }
    let meta = vec![
        ("kind", json!(res.kind)),
        ("curve", json!(curve.label)),
        ("t", json!(t)),
        ("f_surface", json!(surface.f)),
        ("capacity", json!(res.c)),
        ("argmax_theta0", json!(res.argmax.theta0)),
        ("argmax_phi0", json!(res.argmax.phi0)),
        ("argmax_f", json!(res.argmax.f)),
    ];
    Ok(Report { meta, body: Body::Table(table), certified: all_ok })
}

fn capacity_curves(cfg: &RunConfig) -> Result<Report, CliError> {
    let times = cfg.time_grid.points();
    let ccfg = capacity_config(cfg, false);
    let jobs: Vec<(&Curve, f64)> =
        cfg.curves.iter().flat_map(|c| times.iter().map(move |&t| (c, t))).collect();
    let ensemble = binary_orthogonal_ensemble(cfg.theta0, cfg.phi0, cfg.f)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(c, t)| -> sgad_core::Result<_> {
            let k = synthesize_channel(&c.bath, t)?;
            let chi = holevo_chi(&ensemble, &k);
            let res = classical_capacity(&k, &ccfg)?;
            Ok((channel_ok(&k), chi, res))
        })
        .collect();
    let mut table = Table::new(&[
        "t",
        "capacity",
        "chi_fixed",
        "argmax_theta0",
        "argmax_phi0",
        "argmax_f",
        "certified",
        "curve",
        "T",
        "r",
        "notice",
    ]);
    let mut all_ok = true;
    for (&(curve, t), res) in jobs.iter().zip(results) {
        let mut row: Vec<Cell> = vec![t.into()];
        let notice = match res {
            Ok((kraus_ok, chi, r)) => {
                let ok = kraus_ok && chi_ok(chi) && chi_ok(r.c);
                all_ok &= ok;
                row.extend([r.c, chi, r.argmax.theta0, r.argmax.phi0, r.argmax.f].map(Cell::from));
                row.push(ok.into());
                if is_zero_bath(&curve.bath)? {
                    AD_NOTICE.to_string()
                } else {
                    String::new()
                }
            }
            Err(e) => {
                all_ok = false;
                row.extend([f64::NAN; 5].map(Cell::from));
                row.push(false.into());
                e.to_string()
            }
        };
        row.extend(curve_cells(curve));
        row.push(notice.into());
        table.push(row);
    }
    let meta = vec![
        ("kind", json!(sgad_core::capacity::CAPACITY_KIND)),
        ("chi_fixed_inputs", json!({ "theta0": cfg.theta0, "phi0": cfg.phi0, "f": cfg.f })),
    ];
    Ok(Report { meta, body: Body::Table(table), certified: all_ok })
}
