use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use hamnve_core::certify::{
    branch_basis, reduced_equations, verify_quartic_theorem, Mutation, NonlinearSource, VerifyConfig,
    NONINTEGRABILITY_NOTE,
};
use hamnve_core::dynamics::{
    integrate_hamilton, nve_coefficient_samples, polynomial_degree_test_with_stride, default_stride, NumericPotential,
    Trajectory,
};
use hamnve_core::jets::{generate_conditions, pullback_condition};
use hamnve_core::ode::{
    degeneration_branches, specialize_quartic, tabulated, Branch, LinearODE, NonlinearODE, QuarticAlpha,
};
use hamnve_core::parse::{format_canonical, parse_potential};
use hamnve_core::{MPoly, Var};
use serde_json::{json, Map, Value};

use crate::report::Report;

type Outcome = Result<(Report, String)>;

pub fn conditions(degree: i64) -> Outcome {
    if degree < 0 {
        bail!("--degree must be non-negative, got {degree}");
    }
    let set = generate_conditions(degree)?;
    let mut text = String::new();
    let mut items = Vec::new();
    for c in &set.conditions {
        let poly = format_canonical(c.poly.poly());
        writeln!(text, "E_{{{},{}}} = {poly}", c.n, c.k)?;
        items.push(json!({"n": c.n, "k": c.k, "jet_poly": poly}));
    }
    let result = json!({"degree": set.degree, "conditions": items});
    Ok((Report::ok("conditions", json!({"degree": degree}), result), text))
}

pub fn classify(potential: &str) -> Outcome {
    let pot = parse_potential(potential)?;
    let a5 = MPoly::var(Var::Nve(5));
    let pulled = pullback_condition(&a5, &pot.alpha, &pot.phi)?;
    let alpha_degree = (!pot.alpha.is_zero()).then(|| pot.alpha.degree(Var::X1));
    let member = pulled.is_zero() && alpha_degree == Some(4);
    let reason = if !pulled.is_zero() {
        "X_h^5 alpha does not vanish on the invariant plane".to_string()
    } else if alpha_degree != Some(4) {
        match alpha_degree {
            Some(d) => format!("a(t) is polynomial but alpha has degree {d}, not 4"),
            None => "alpha vanishes identically".to_string(),
        }
    } else {
        "phi' = 0 and alpha is quartic: V = lambda0 + P4(x1)*x2^2 + O(x2^3)".to_string()
    };
    let result = json!({
        "phi": format_canonical(&pot.phi),
        "alpha": format_canonical(&pot.alpha),
        "alpha_degree": alpha_degree,
        "beta_present": pot.beta_present,
        "pullback_a5": format_canonical(&pulled),
        "member": member,
        "reason": reason,
        "nonintegrability_note": NONINTEGRABILITY_NOTE,
    });
    let mut text = String::new();
    writeln!(text, "phi   = {}", format_canonical(&pot.phi))?;
    writeln!(text, "alpha = {}", format_canonical(&pot.alpha))?;
    writeln!(text, "X_h^5 alpha on the plane = {}", format_canonical(&pulled))?;
    writeln!(
        text,
        "{}: {reason}",
        if member { "member of the quartic-NVE family" } else { "not a member" }
    )?;
    if member {
        writeln!(text, "note: {NONINTEGRABILITY_NOTE}")?;
    }
    let inputs = json!({"potential": potential});
    let report = if member {
        Report::ok("classify", inputs, result)
    } else {
        Report::fail("classify", inputs, result, "classification")
    };
    Ok((report, text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Equation {
    #[value(name = "L")]
    L,
    #[value(name = "NL")]
    Nl,
    #[value(name = "L2")]
    L2,
    #[value(name = "NL2")]
    Nl2,
}

impl Equation {
    fn name(self) -> &'static str {
        match self {
            Equation::L => "L",
            Equation::Nl => "NL",
            Equation::L2 => "L2",
            Equation::Nl2 => "NL2",
        }
    }
}

fn linear_json(ode: &LinearODE) -> Value {
    let terms: Map<String, Value> = ode
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j.to_string(), Value::String(format_canonical(c))))
        .collect();
    json!({"text": ode.to_string(), "var": ode.var.name(), "terms": terms})
}

fn nonlinear_json(ode: &NonlinearODE) -> Value {
    let terms: Map<String, Value> = ode
        .terms
        .iter()
        .map(|(&(i, j), c)| (format!("{i},{j}"), Value::String(format_canonical(c))))
        .collect();
    json!({"text": ode.to_string(), "var": ode.var.name(), "terms": terms})
}

pub fn derive_odes(emit: &[Equation]) -> Outcome {
    let conds = generate_conditions(4)?;
    let (l, nl) = specialize_quartic(&conds, &QuarticAlpha::symbolic())?;
    let (l2, nl2, mu) = reduced_equations()?;
    let mut result = Map::new();
    let mut text = String::new();
    for &eq in emit {
        let (value, line) = match eq {
            Equation::L => (linear_json(&l), l.to_string()),
            Equation::Nl => (nonlinear_json(&nl), nl.to_string()),
            Equation::L2 => (linear_json(&l2), l2.to_string()),
            Equation::Nl2 => (nonlinear_json(&nl2), nl2.to_string()),
        };
        writeln!(text, "{}: {line}", eq.name())?;
        result.insert(eq.name().into(), value);
    }
    if emit.iter().any(|e| matches!(e, Equation::L2 | Equation::Nl2)) {
        writeln!(text, "centering: x = x1 - ({mu}), y = phi'")?;
    }
    let names: Vec<&str> = emit.iter().map(|e| e.name()).collect();
    Ok((
        Report::ok("derive-odes", json!({"emit": names}), Value::Object(result)),
        text,
    ))
}

pub fn kernel(case: &str, degree_bound: u32, use_tabulated: bool) -> Outcome {
    let branch = Branch::from_name(case).ok_or_else(|| anyhow!("unknown --case {case:?}; expected generic, b0 or c0"))?;
    let basis = if use_tabulated {
        tabulated::basis_for(branch)?
    } else {
        let (l2, _, _) = reduced_equations()?;
        branch_basis(&l2, branch, degree_bound)?.1
    };
    let (numerator_wronskian, degeneration) = if basis.dimension() == 0 {
        (String::new(), Vec::new())
    } else {
        let w = basis.numerator_wronskian()?;
        let d: Vec<String> = degeneration_branches(&basis)?
            .iter()
            .map(|d| format!("{} = 0", format_canonical(&d.component)))
            .collect();
        (format_canonical(&w), d)
    };
    let basis_text: Vec<String> = basis.numerators.iter().map(format_canonical).collect();
    let result = json!({
        "case": branch.name(),
        "source": if use_tabulated { "tabulated" } else { "derived" },
        "var": basis.var.name(),
        "denominator": format_canonical(&basis.denominator),
        "exponent": basis.exponent,
        "extra_pole": basis.extra_pole,
        "dimension": basis.dimension(),
        "basis": basis_text,
        "wronskian": basis.wronskian.to_string(),
        "numerator_wronskian": numerator_wronskian,
        "degeneration": degeneration,
    });
    let mut text = String::new();
    writeln!(
        text,
        "branch {} ({}), dimension {}",
        branch.name(),
        if use_tabulated { "tabulated" } else { "derived" },
        basis.dimension()
    )?;
    writeln!(text, "denominator: {}", basis.full_denominator())?;
    for (i, p) in basis_text.iter().enumerate() {
        writeln!(text, "P{} = {p}", i + 1)?;
    }
    if basis.dimension() > 0 {
        writeln!(text, "Wronskian: {}", basis.wronskian)?;
        if degeneration.is_empty() {
            writeln!(text, "degeneration: none")?;
        } else {
            writeln!(text, "degeneration: {}", degeneration.join(", "))?;
        }
    }
    let inputs = json!({"case": case, "degree_bound": degree_bound, "tabulated": use_tabulated});
    Ok((Report::ok("kernel", inputs, result), text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Derived,
    Tabulated,
}

pub struct VerifyArgs {
    pub trials: usize,
    pub seed: u64,
    pub json: Option<PathBuf>,
    pub nonlinear: Source,
    pub mutate: bool,
    pub degree_bound: u32,
}

pub fn verify(args: VerifyArgs) -> Outcome {
    let config = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        degree_bound: args.degree_bound,
        nonlinear: match args.nonlinear {
            Source::Derived => NonlinearSource::Derived,
            Source::Tabulated => NonlinearSource::Tabulated,
        },
        mutation: args.mutate.then(Mutation::constant_term_72_to_71),
    };
    let cert = verify_quartic_theorem(&config);
    let value = serde_json::to_value(&cert)?;
    if let Some(path) = &args.json {
        let body = serde_json::to_string_pretty(&cert)?;
        std::fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    let mut text = String::new();
    for b in &cert.branches {
        let stage = b.failed_stage.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
        writeln!(
            text,
            "{:<8} deg_x Q = {:<3} forms = {:<3} trials = {:<3} {}{stage}",
            b.name,
            b.q_degree,
            b.num_equations,
            b.trials.len(),
            b.verdict
        )?;
    }
    for c in cert.tabulated_checks.iter().filter(|c| !c.holds) {
        writeln!(text, "printed data check fails: {}", c.item)?;
    }
    writeln!(text, "conclusion: {}", cert.conclusion)?;
    if cert.theorem_holds {
        writeln!(text, "form: {}", cert.theorem_form)?;
        writeln!(text, "note: {}", cert.nonintegrability_note)?;
    }
    let inputs = json!({
        "trials": args.trials,
        "seed": args.seed,
        "nonlinear": config.nonlinear,
        "mutate": args.mutate,
        "degree_bound": args.degree_bound,
    });
    let report = if cert.theorem_holds {
        Report::ok("verify-quartic", inputs, value)
    } else {
        let stage = cert.failed_stage.clone().unwrap_or_else(|| "conclusion".into());
        Report::fail("verify-quartic", inputs, value, stage)
    };
    Ok((report, text))
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("{what} must be {N} comma-separated numbers"))?;
    let arr: [f64; N] = parts
        .try_into()
        .map_err(|p: Vec<f64>| anyhow!("{what} needs {N} values, got {}", p.len()))?;
    if arr.iter().any(|v| !v.is_finite()) {
        bail!("{what} must be finite");
    }
    Ok(arr)
}

fn check_steps(dt: f64, t_end: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        bail!("--dt must be positive, got {dt}");
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        bail!("--T must be positive, got {t_end}");
    }
    Ok(())
}

fn write_csv(path: &PathBuf, traj: &Trajectory) -> Result<()> {
    let mut body = String::from("t,x1,y1,x2,y2,H\n");
    for ((t, s), h) in traj.times.iter().zip(&traj.states).zip(&traj.energies) {
        writeln!(body, "{t},{},{},{},{},{h}", s[0], s[1], s[2], s[3])?;
    }
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

pub struct SimulateArgs {
    pub potential: String,
    pub init: String,
    pub dt: f64,
    pub t_end: f64,
    pub out: Option<PathBuf>,
    pub degree_test: Option<usize>,
    pub tol: f64,
}

pub fn simulate(args: SimulateArgs) -> Outcome {
    let init: [f64; 4] = parse_floats(&args.init, "--init")?;
    check_steps(args.dt, args.t_end)?;
    let pot = NumericPotential::parse(&args.potential)?;
    if args.degree_test.is_some() && (init[2] != 0.0 || init[3] != 0.0) {
        bail!("--degree-test needs an initial state in the invariant plane (x2 = y2 = 0)");
    }
    let traj = integrate_hamilton(&pot, init, args.dt, args.t_end)?;
    if let Some(path) = &args.out {
        write_csv(path, &traj)?;
    }
    let mut result = json!({
        "samples": traj.len(),
        "energy_drift": traj.energy_drift(),
        "max_off_plane": traj.max_off_plane(),
        "diverged": traj.diverged,
    });
    let mut text = String::new();
    writeln!(
        text,
        "samples {}, energy drift {:.3e}, max |x2|,|y2| {:.3e}{}",
        traj.len(),
        traj.energy_drift(),
        traj.max_off_plane(),
        if traj.diverged { ", diverged" } else { "" }
    )?;
    if let Some(path) = &args.out {
        result["csv"] = json!(path.display().to_string());
        writeln!(text, "wrote {}", path.display())?;
    }
    let mut stage = traj.diverged.then_some("integration");
    if let Some(d) = args.degree_test {
        let a = nve_coefficient_samples(&traj, &pot.alpha);
        let r = polynomial_degree_test_with_stride(&a, d, args.tol, default_stride(a.len(), d))?;
        writeln!(
            text,
            "degree <= {d}: {} (eta {:.3e}, residual {:.3e})",
            if r.pass { "pass" } else { "fail" },
            r.eta,
            r.residual
        )?;
        result["degree_test"] = json!({"degree": d, "pass": r.pass, "eta": r.eta, "residual": r.residual, "stride": r.stride});
        if !r.pass && stage.is_none() {
            stage = Some("degree-test");
        }
    }
    let inputs = json!({
        "potential": args.potential,
        "init": init,
        "dt": args.dt,
        "T": args.t_end,
        "degree_test": args.degree_test,
        "tol": args.tol,
    });
    let report = match stage {
        None => Report::ok("simulate", inputs, result),
        Some(s) => Report::fail("simulate", inputs, result, s),
    };
    Ok((report, text))
}

pub struct DegreeArgs {
    pub potential: String,
    pub degree: usize,
    pub init: String,
    pub dt: f64,
    pub t_end: f64,
    pub tol: f64,
    pub stride: Option<usize>,
}

pub fn degree_test(args: DegreeArgs) -> Outcome {
    let [x1, y1]: [f64; 2] = parse_floats(&args.init, "--init")?;
    check_steps(args.dt, args.t_end)?;
    let pot = NumericPotential::parse(&args.potential)?;
    let traj = integrate_hamilton(&pot, [x1, y1, 0.0, 0.0], args.dt, args.t_end)?;
    let a = nve_coefficient_samples(&traj, &pot.alpha);
    let stride = args.stride.unwrap_or_else(|| default_stride(a.len(), args.degree));
    let r = polynomial_degree_test_with_stride(&a, args.degree, args.tol, stride)?;
    let result = json!({
        "degree": args.degree,
        "pass": r.pass,
        "eta": r.eta,
        "residual": r.residual,
        "stride": r.stride,
        "samples": a.len(),
        "diverged": traj.diverged,
    });
    let text = format!(
        "{} (eta {:.3e}, residual {:.3e}, stride {}, {} samples{})\n",
        if r.pass { "pass" } else { "fail" },
        r.eta,
        r.residual,
        r.stride,
        a.len(),
        if traj.diverged { ", trajectory diverged" } else { "" }
    );
    let inputs = json!({
        "potential": args.potential,
        "degree": args.degree,
        "init": [x1, y1],
        "dt": args.dt,
        "T": args.t_end,
        "tol": args.tol,
        "stride": args.stride,
    });
    let report = if r.pass && !traj.diverged {
        Report::ok("degree-test", inputs, result)
    } else {
        Report::fail("degree-test", inputs, result, if traj.diverged { "integration" } else { "degree-test" })
    };
    Ok((report, text))
}
