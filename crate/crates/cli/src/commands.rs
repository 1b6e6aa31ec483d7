//! Command implementations. Every run validates its flags against the
//! owning module's preconditions first (naming the violated condition), then
//! dispatches and assembles a report.

use crate::output::{c64, c64_pretty, matrix, Report};
use crate::{Cli, CliError, Command, LimitsCheck, OracleCheck, ParamArgs, ResumCheck};
use heun_unfold_core::dche::{self, classify_origin, entire_solution_test, DcheParams, SeriesKind};
use heun_unfold_core::limits::{self, SweepReport, Verdict};
use heun_unfold_core::oracle::{
    convergence_probe, loop_around, numeric_monodromy_loop, residue_left_split_contour,
    residue_via_contour, PlainIntegrand, QuadratureConfig, UnfoldedW2Prime,
};
use heun_unfold_core::resum::{self, RayDirection};
use heun_unfold_core::unfold::{self, ResonanceCase, Side, UnfoldParams};
use heun_unfold_core::Complex64;
use serde_json::{json, Value};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify(p) => classify(cli, p),
        Command::Invariants(p) => invariants(cli, p),
        Command::Unfold(p) => unfold_cmd(cli, p),
        Command::Limits { check } => limits_cmd(cli, check),
        Command::Oracle { which } => oracle_cmd(cli, which),
        Command::Resum { which } => resum_cmd(cli, which),
        Command::Appendix { gamma } => appendix(cli, *gamma),
    }
}

fn base_params(p: &ParamArgs) -> Result<DcheParams, CliError> {
    Ok(DcheParams::new(p.alpha, p.beta, p.gamma)?)
}

/// Resolve sqrt(eps) from --sqrt-eps or --m (the resonant value).
fn unfold_params(p: &ParamArgs) -> Result<UnfoldParams, CliError> {
    let base = base_params(p)?;
    match (p.sqrt_eps, p.m) {
        (Some(se), None) => Ok(UnfoldParams::new(base, se)?),
        (None, Some(m)) => {
            let seq = unfold::resonant_eps_sequence(&base, m, m)?;
            Ok(UnfoldParams::new(base, seq[0].1)?)
        }
        (Some(_), Some(_)) => Err(CliError::Validation(
            "--sqrt-eps and --m are mutually exclusive".into(),
        )),
        (None, None) => Err(CliError::Validation(
            "one of --sqrt-eps or --m is required".into(),
        )),
    }
}

fn resonance_value(case: ResonanceCase) -> Value {
    serde_json::to_value(case).unwrap()
}

fn classify(cli: &Cli, p: &ParamArgs) -> Result<(), CliError> {
    let base = base_params(p)?;
    let mut rep = Report::new("classify");
    rep.set(
        "origin",
        serde_json::to_value(classify_origin(&base)).unwrap(),
    );
    rep.set(
        "alpha_class",
        serde_json::to_value(base.alpha_class()).unwrap(),
    );
    if p.sqrt_eps.is_some() || p.m.is_some() {
        let u = unfold_params(p)?;
        let sp = unfold::singular_points(&u);
        rep.set("sqrt_eps", json!(u.sqrt_eps));
        rep.set("resonance", resonance_value(u.resonance_case()));
        rep.set("singular_points", serde_json::to_value(sp).unwrap());
    }
    rep.emit(cli)
}

fn invariants(cli: &Cli, p: &ParamArgs) -> Result<(), CliError> {
    let base = base_params(p)?;
    let mut rep = Report::new("invariants");
    rep.set("alpha", c64(base.alpha));
    rep.set("beta", json!(base.beta));
    rep.set("gamma", c64(base.gamma));
    rep.set(
        "origin",
        serde_json::to_value(classify_origin(&base)).unwrap(),
    );
    if base.beta == 0.0 {
        if let Ok(lambda) = dche::lambda_coefficient(&base) {
            rep.set("lambda", c64(lambda));
            rep.set("m0", matrix(&dche::monodromy_m0(&base).unwrap()));
        }
    } else {
        let mu = dche::stokes_multiplier_mu(&base)?;
        rep.set("mu", c64(mu));
        if base.alpha_class().is_natural() {
            rep.set("mu_natural_form", c64(dche::mu_natural_form(&base)?));
        }
        let kind = match base.alpha_class() {
            k if k.is_natural() => SeriesKind::W,
            heun_unfold_core::AlphaClass::NonPositiveInteger => SeriesKind::Q,
            _ => SeriesKind::S,
        };
        let inv = dche::series_invariant(&base, kind)?;
        rep.set(
            "series",
            json!({"kind": format!("{:?}", inv.kind), "value": c64(inv.limit), "converged": inv.converged}),
        );
        rep.set(
            "entire_solution",
            json!(matches!(
                entire_solution_test(&base)?,
                dche::SolutionClass::HolomorphicInCStar
            )),
        );
        rep.set("stokes_matrix", matrix(&dche::stokes_matrix(&base)?));
    }
    rep.emit(cli)
}

fn unfold_cmd(cli: &Cli, p: &ParamArgs) -> Result<(), CliError> {
    let u = unfold_params(p)?;
    let mut rep = Report::new("unfold");
    rep.set("sqrt_eps", json!(u.sqrt_eps));
    rep.set(
        "singular_points",
        serde_json::to_value(unfold::singular_points(&u)).unwrap(),
    );
    let case = u.resonance_case();
    rep.set("resonance", resonance_value(case));
    match case {
        ResonanceCase::Res1 => {
            let qr = unfold::q_side(&u, Side::R)?;
            let ql = unfold::q_side(&u, Side::L)?;
            let sum = unfold::q_sum(&u)?;
            rep.set("q_r", c64(qr));
            rep.set("q_l", c64(ql));
            rep.set(
                "q_sum",
                json!({"value": c64(sum.value), "condition": sum.condition, "est_rel_err": sum.est_rel_err}),
            );
            rep.set("m_r", matrix(&unfold::monodromy_mk(&u, Side::R)?));
            rep.set("m_l", matrix(&unfold::monodromy_mk(&u, Side::L)?));
            rep.set(
                "unfolded_monodromy",
                matrix(&unfold::unfolded_monodromy(&u)?),
            );
            let split = unfold::partial_fraction_split(&u)?;
            rep.set("partial_fractions", serde_json::to_value(&split).unwrap());
        }
        ResonanceCase::Res2 { m, boundary_zero } => {
            let d = unfold::d_l(&u)?;
            rep.set("m", json!(m));
            if boundary_zero {
                rep.set("boundary_zero", json!(true));
            }
            rep.set("d_l", c64(d));
            rep.set(
                "t_l",
                serde_json::to_value(unfold::nilpotent_log_tl(&u)?).unwrap(),
            );
            rep.set("unfolded_stokes", matrix(&unfold::unfolded_stokes(&u)?));
        }
        ResonanceCase::None => {
            return Err(CliError::Validation(
                "no resonance regime at these parameters: res1 requires beta = 0 with alpha in 2N; \
                 res2 requires beta/(2 sqrt(eps)) + alpha/2 in N with alpha - m not in N"
                    .into(),
            ));
        }
    }
    rep.emit(cli)
}

fn sweep_to_report(rep: &mut Report, sweep: &SweepReport) {
    rep.set("sweep", serde_json::to_value(sweep).unwrap());
    let rows = sweep
        .eps_values
        .iter()
        .zip(&sweep.values)
        .map(|(e, v)| {
            format!(
                "{e:e},{:e},{:e},{:e}",
                v.re,
                v.im,
                (v - sweep.target).norm()
            )
        })
        .collect();
    rep.set_csv("eps,re,im,abs_err", rows);
}

fn verdict_gate(v: Verdict, what: &str) -> Result<(), CliError> {
    match v {
        Verdict::Pass => Ok(()),
        Verdict::Fail => Err(CliError::VerdictFail(format!("{what} verdict failed"))),
        Verdict::Inconclusive => Err(CliError::VerdictFail(format!(
            "{what} verdict inconclusive (cancellation or fit residual)"
        ))),
    }
}

fn limits_cmd(cli: &Cli, check: &LimitsCheck) -> Result<(), CliError> {
    let mut rep = Report::new("limits");
    let (sweep, what): (SweepReport, &str) = match check {
        LimitsCheck::SumLimit { params, eps_range } => {
            let base = base_params(params)?;
            (
                limits::check_sum_limit(&base, &eps_range.0, cli.tol_limit)?,
                "sum-limit",
            )
        }
        LimitsCheck::DivergenceSign { params, eps_range } => {
            let base = base_params(params)?;
            (
                limits::check_divergence_sign(&base, &eps_range.0)?,
                "divergence-sign",
            )
        }
        LimitsCheck::DlLimit { params, m_range } => {
            let base = base_params(params)?;
            (
                limits::check_dl_limit(&base, &m_range.0, cli.tol_limit)?,
                "dl-limit",
            )
        }
        LimitsCheck::StokesLimit { params, m_range } => {
            let base = base_params(params)?;
            (
                limits::check_stokes_limit(&base, &m_range.0, cli.tol_limit)?,
                "stokes-limit",
            )
        }
        LimitsCheck::MonodromyLimit { params, eps_range } => {
            let base = base_params(params)?;
            (
                limits::check_monodromy_limit(&base, &eps_range.0, cli.tol_limit)?,
                "monodromy-limit",
            )
        }
        LimitsCheck::EpsSeries { gamma, eps } => {
            let r = limits::eps_power_series_check(*gamma, *eps)?;
            rep.set("eps_series", serde_json::to_value(&r).unwrap());
            rep.emit(cli)?;
            if r.pass {
                return Ok(());
            }
            return Err(CliError::VerdictFail("eps-series residual bound".into()));
        }
    };
    sweep_to_report(&mut rep, &sweep);
    rep.emit(cli)?;
    verdict_gate(sweep.verdict, what)
}

/// Small deterministic generator for the seeded oracle samples.
struct SplitMix(u64);

impl SplitMix {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn next_centered(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

fn oracle_cmd(cli: &Cli, which: &OracleCheck) -> Result<(), CliError> {
    let cfg = QuadratureConfig::with_rel_tol(1e-11);
    let mut rep = Report::new("oracle");
    rep.set("seed", json!(cli.seed));
    match which {
        OracleCheck::Residue { params } => {
            // Seeded Laurent sanity check: the contour must recover the
            // simple-pole coefficient of a random finite Laurent tail.
            let mut rng = SplitMix(cli.seed);
            let a = Complex64::new(0.4 * rng.next_centered(), 0.4 * rng.next_centered());
            let coef: Vec<Complex64> = (0..4)
                .map(|_| Complex64::new(2.0 * rng.next_centered(), 2.0 * rng.next_centered()))
                .collect();
            let laurent = {
                let coef = coef.clone();
                PlainIntegrand(move |z: Complex64| {
                    let w = (z - a).inv();
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut p = w;
                    for c in &coef {
                        acc += c * p;
                        p *= w;
                    }
                    acc
                })
            };
            let sanity = residue_via_contour(&laurent, a, 0.3, &cfg)?;
            let sanity_err = (sanity - coef[0]).norm() / (1.0 + coef[0].norm());
            rep.set("laurent_sanity_rel_err", json!(sanity_err));
            if sanity_err > 1e-10 {
                return Err(CliError::Numeric(format!(
                    "seeded Laurent residue off by {sanity_err:e}"
                )));
            }

            let u = unfold_params(params)?;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            match u.resonance_case() {
                ResonanceCase::Res1 => {
                    let f = UnfoldedW2Prime { u };
                    for (side, center) in [
                        (Side::R, Complex64::new(u.sqrt_eps, 0.0)),
                        (Side::L, Complex64::new(-u.sqrt_eps, 0.0)),
                    ] {
                        let oracle = residue_via_contour(&f, center, u.sqrt_eps, &cfg)?;
                        let closed = unfold::q_side(&u, side)?;
                        let rel = (oracle - closed).norm() / (1.0 + closed.norm());
                        worst = worst.max(rel);
                        rows.push(format!(
                            "q_{side:?},{:e},{:e},{rel:e}",
                            closed.re, closed.im
                        ));
                    }
                }
                ResonanceCase::Res2 { .. } => {
                    let closed = unfold::d_l(&u)?;
                    let outer = 0.5f64.max(4.0 * u.sqrt_eps).min(0.4 / u.sqrt_eps);
                    let oracle = residue_left_split_contour(&u, outer, &cfg)?;
                    let rel = (oracle - closed).norm() / (1.0 + closed.norm());
                    worst = rel;
                    rows.push(format!("d_L,{:e},{:e},{rel:e}", closed.re, closed.im));
                }
                ResonanceCase::None => {
                    return Err(CliError::Validation(
                        "residue oracle needs a resonant regime (res1 or res2)".into(),
                    ))
                }
            }
            rep.set("worst_rel_err", json!(worst));
            rep.set_csv("quantity,re,im,rel_err", rows);
            rep.emit(cli)?;
            if worst > cli.tol_residue {
                return Err(CliError::VerdictFail(format!(
                    "residue comparison {worst:e} > {:e}",
                    cli.tol_residue
                )));
            }
            Ok(())
        }
        OracleCheck::Monodromy { params } => {
            let u = unfold_params(params)?;
            if u.resonance_case() != ResonanceCase::Res1 {
                return Err(CliError::Validation(
                    "monodromy oracle requires res1 (beta = 0, alpha in 2N)".into(),
                ));
            }
            let se = u.sqrt_eps;
            let base = Complex64::new(0.0, 2.5 * se);
            let radius = 0.8 * se;
            let m_r = numeric_monodromy_loop(
                &u,
                &loop_around(base, Complex64::new(se, 0.0), radius),
                &cfg,
            )?;
            let m_l = numeric_monodromy_loop(
                &u,
                &loop_around(base, Complex64::new(-se, 0.0), radius),
                &cfg,
            )?;
            let both = numeric_monodromy_loop(
                &u,
                &loop_around(base, Complex64::new(0.0, 0.0), 3.0 * se),
                &cfg,
            )?;
            let want_r = unfold::monodromy_mk(&u, Side::R)?;
            let want_l = unfold::monodromy_mk(&u, Side::L)?;
            let product = m_r.mul(&m_l);
            let scale = 1.0 + want_r.max_norm().max(want_l.max_norm());
            let err_r = m_r.entrywise_distance(&want_r) / scale;
            let err_l = m_l.entrywise_distance(&want_l) / scale;
            let err_prod = both.entrywise_distance(&product) / (1.0 + product.max_norm());
            rep.set("loop_r_rel_err", json!(err_r));
            rep.set("loop_l_rel_err", json!(err_l));
            rep.set("composite_vs_product_rel_err", json!(err_prod));
            rep.set("m_r", matrix(&m_r));
            rep.set("m_l", matrix(&m_l));
            rep.emit(cli)?;
            let worst = err_r.max(err_l).max(err_prod);
            if worst > cli.tol_monodromy {
                return Err(CliError::VerdictFail(format!(
                    "monodromy comparison {worst:e} > {:e}",
                    cli.tol_monodromy
                )));
            }
            Ok(())
        }
        OracleCheck::Convergence { params, eps_range } => {
            let base = base_params(params)?;
            let samples: Vec<Complex64> = [30.0f64, 90.0, 150.0]
                .iter()
                .map(|deg| 0.5 * Complex64::new(0.0, deg.to_radians()).exp())
                .collect();
            let probe = convergence_probe(&base, &eps_range.0, &samples, &cfg)?;
            rep.set("probe", serde_json::to_value(&probe).unwrap());
            let rows = probe
                .eps_values
                .iter()
                .zip(&probe.max_diff)
                .map(|(e, d)| format!("{e:e},{d:e},0,{d:e}"))
                .collect();
            rep.set_csv("eps,re,im,abs_err", rows);
            rep.emit(cli)?;
            Ok(())
        }
    }
}

fn resum_cmd(cli: &Cli, which: &ResumCheck) -> Result<(), CliError> {
    let cfg = QuadratureConfig::with_rel_tol(1e-11);
    let mut rep = Report::new("resum");
    match which {
        ResumCheck::Series { params, n_terms } => {
            let base = base_params(params)?;
            let s = resum::formal_series(&base, *n_terms)?;
            rep.set("series", serde_json::to_value(&s).unwrap());
            rep.emit(cli)
        }
        ResumCheck::Sum { params, x, theta } => {
            let base = base_params(params)?;
            let dir = RayDirection::new(*theta)?;
            let value = if base.alpha_class() == heun_unfold_core::AlphaClass::NonInteger {
                resum::varphi_sum(&base, *x, dir, 256, &cfg)?
            } else {
                resum::laplace_sum(&base, *x, dir, &cfg)?
            };
            rep.set("x", c64(*x));
            rep.set("theta", json!(theta));
            rep.set("value", c64(value));
            rep.emit(cli)
        }
        ResumCheck::Jump {
            params,
            x,
            delta_lateral,
        } => {
            let base = base_params(params)?;
            let mu_num = resum::stokes_jump(&base, *x, *delta_lateral, &cfg)?;
            let mu = dche::stokes_multiplier_mu(&base)?;
            let rel = (mu_num - mu).norm() / (1.0 + mu.norm());
            rep.set("delta_lateral", json!(delta_lateral));
            rep.set("mu_from_jump", c64(mu_num));
            rep.set("mu_from_series", c64(mu));
            rep.set("rel_err", json!(rel));
            rep.emit(cli)?;
            if rel > 1e-6 {
                return Err(CliError::VerdictFail(format!(
                    "lateral jump disagrees with the series: {rel:e}"
                )));
            }
            Ok(())
        }
    }
}

fn appendix(cli: &Cli, gamma: Complex64) -> Result<(), CliError> {
    let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let mut rep = Report::new("appendix");
    rep.set("gamma", c64(gamma));
    let mut rows = Vec::new();
    let mut cases = Vec::new();
    let mut all_pass = true;
    for alpha in [2u32, 4, 6] {
        let p = DcheParams::new(Complex64::new(alpha as f64, 0.0), 0.0, gamma)
            .map_err(CliError::from)?;
        let sweep = limits::check_sum_limit(&p, &eps, cli.tol_limit)?;
        for (e, v) in sweep.eps_values.iter().zip(&sweep.values) {
            rows.push(format!(
                "{alpha},{e:e},{:e},{:e},{:e}",
                v.re,
                v.im,
                (v - sweep.target).norm()
            ));
        }
        // Sign law applies for real positive gamma only.
        let sign_report = if gamma.im == 0.0 && gamma.re > 0.0 {
            let r = limits::check_divergence_sign(&p, &[1e-1, 1e-2, 1e-3, 1e-4])?;
            all_pass &= r.verdict == Verdict::Pass;
            Some(r.verdict)
        } else {
            None
        };
        all_pass &= sweep.verdict == Verdict::Pass;
        cases.push(json!({
            "alpha": alpha,
            "target": c64(sweep.target),
            "extrapolated": c64(sweep.extrapolated),
            "abs_err": (sweep.extrapolated - sweep.target).norm(),
            "verdict": serde_json::to_value(sweep.verdict).unwrap(),
            "sign_law": sign_report.map(|v| serde_json::to_value(v).unwrap()),
        }));
    }
    rep.set("cases", Value::Array(cases));
    rep.set_csv("alpha,eps,re,im,abs_err", rows);
    rep.emit(cli)?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::VerdictFail("appendix reproduction".into()))
    }
}

// Pretty-mode helper kept close to its data.
#[allow(dead_code)]
fn fmt_c(z: Complex64) -> String {
    c64_pretty(z)
}
