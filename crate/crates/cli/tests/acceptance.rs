// Runs the ten acceptance criteria and prints one PASS/FAIL line for each,
// followed by indented supplementary lines. Exits nonzero if any criterion
// fails.

#[path = "../../core/tests/support/brute_force.rs"]
mod brute_force;

use std::process::Command;
use std::time::Instant;

use hamnve_core::certify::{
    branch_basis, build_q, extract_forms, proportional, reassemble, reduced_equations, verify_quartic_theorem,
    NonlinearSource, VerifyConfig, THEOREM_CONCLUSION,
};
use hamnve_core::dynamics::{
    integrate_hamilton, nve_coefficient_samples, polynomial_degree_test, variational_consistency, NumericPotential,
};
use hamnve_core::jets::{enk_table, generate_conditions, pullback_condition, JetPoly};
use hamnve_core::ode::{
    degeneration_branches, rational_kernel, specialize_quartic, tabulated, Branch, KernelAnsatz, NonlinearODE,
    QuarticAlpha, SolutionBasis,
};
use hamnve_core::parse::{parse_poly, parse_potential, Symbols};
use hamnve_core::{MPoly, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

fn p(s: &str) -> MPoly {
    parse_poly(s, Symbols::Any).unwrap()
}

fn recurrence() -> Outcome {
    let start = Instant::now();
    let table = enk_table(8).unwrap();
    let operator = table.check_against_operator();
    let mut diagonal = true;
    let mut parity = true;
    for n in 1..=8 {
        diagonal &= table.get(n, n) == JetPoly::alpha(n as u16);
        for k in 0..=n {
            if (n - k) % 2 == 1 {
                parity &= table.get(n, k).is_zero();
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        operator.is_ok() && diagonal && parity && secs < 5.0,
        format!(
            "E_(n,k) for n <= 8: operator {}, E_(n,n) = alpha_n {diagonal}, parity zeros {parity}, {secs:.2}s",
            if operator.is_ok() { "agrees" } else { "disagrees" }
        ),
    )
}

fn equation_l() -> Outcome {
    let (l, _) = specialize_quartic(&generate_conditions(4).unwrap(), &QuarticAlpha::symbolic()).unwrap();
    let expected = [
        MPoly::zero(),
        p("240*e"),
        p("240*e*x1 + 60*d"),
        p("60*e*x1^2 + 30*d*x1 + 10*c"),
        p("4*e*x1^3 + 3*d*x1^2 + 2*c*x1 + b"),
    ];
    let ok = proportional(&l.coefficients, &expected);
    Outcome::new(ok, format!("specialized linear condition: {l}"))
}

fn kernel_dimensions() -> Outcome {
    let start = Instant::now();
    let (l2, _, _) = reduced_equations().unwrap();
    let mut dims = Vec::new();
    let mut all = true;
    for branch in Branch::ALL {
        let ode = l2.evaluate(&branch.constraint_values()).unwrap();
        let ansatz = KernelAnsatz::default_for(&ode, 8);
        let basis = rational_kernel(&ode, &ansatz.denominator, ansatz.exponent, ansatz.extra_pole, 8).unwrap();
        let residuals_zero = basis
            .elements()
            .unwrap()
            .iter()
            .all(|y| ode.residual(y).unwrap().is_zero());
        all &= basis.dimension() == 3 && residuals_zero;
        dims.push(format!("{} {}", branch.name(), basis.dimension()));
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        all && secs < 60.0,
        format!("dimensions [{}], residuals zero {all}, {secs:.2}s", dims.join(", ")),
    )
}

fn components(basis: &SolutionBasis) -> Vec<MPoly> {
    degeneration_branches(basis).unwrap().into_iter().map(|d| d.component).collect()
}

fn degeneration() -> Outcome {
    let generic = tabulated::basis_for(Branch::Generic).unwrap();
    let b0 = tabulated::basis_for(Branch::BZero).unwrap();
    let c0 = tabulated::basis_for(Branch::CZero).unwrap();
    let divisible = generic.numerator_wronskian().unwrap().div_exact(&p("b^3*c^3")).is_some();
    let g = components(&generic);
    let b = components(&b0);
    let c = components(&c0);
    let top = c0.numerator_wronskian().unwrap().coefficient(Var::X, 12);
    let e4 = proportional(std::slice::from_ref(&top), &[p("e^4")]);
    let ok = divisible && g == vec![p("b"), p("c")] && b == vec![p("c")] && c.is_empty() && e4;
    let show = |v: &[MPoly]| v.iter().map(|m| format!("{m} = 0")).collect::<Vec<_>>().join(", ");
    let mut out = Outcome::new(
        ok,
        format!(
            "published bases: generic {{{}}} (b^3 c^3 divides W: {divisible}), b = 0 {{{}}}, c = 0 {{{}}} with x^12 coefficient {top}",
            show(&g),
            show(&b),
            show(&c)
        ),
    );
    let (l2, _, _) = reduced_equations().unwrap();
    let derived: Vec<String> = Branch::ALL
        .iter()
        .map(|&br| {
            let (_, basis) = branch_basis(&l2, br, 8).unwrap();
            format!("{} {{{}}}", br.name(), show(&components(&basis)))
        })
        .collect();
    out = out.note(format!("derived bases (denominator cleared): {}", derived.join(", ")));
    out
}

fn q_shape(nl_for: impl Fn(Branch) -> NonlinearODE) -> (Vec<(Branch, u32, usize)>, bool) {
    let (l2, _, _) = reduced_equations().unwrap();
    let mut shapes = Vec::new();
    let mut reassembles = true;
    for branch in Branch::ALL {
        let (_, basis) = branch_basis(&l2, branch, 8).unwrap();
        let q = build_q(&nl_for(branch), &basis).unwrap();
        let forms = extract_forms(&q, Var::X).unwrap();
        reassembles &= reassemble(&forms, Var::X) == q;
        shapes.push((branch, q.degree(Var::X), forms.len()));
    }
    (shapes, reassembles)
}

fn show_shapes(shapes: &[(Branch, u32, usize)]) -> String {
    shapes
        .iter()
        .map(|(b, d, n)| format!("{} deg {d} / {n} forms", b.name()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn q_structure() -> Outcome {
    let (_, nl2, _) = reduced_equations().unwrap();
    let (shapes, reassembles) = q_shape(|b| nl2.evaluate(&b.constraint_values()));
    let expected = [(Branch::Generic, 16, 17), (Branch::BZero, 18, 19), (Branch::CZero, 18, 19)];
    let ok = reassembles && shapes == expected;
    let (printed, _) = q_shape(tabulated::nonlinear_for);
    Outcome::new(ok, format!("derived quadratic equation: {}; reassembly exact {reassembles}", show_shapes(&shapes)))
        .note(format!("published quadratic equations: {}", show_shapes(&printed)))
}

fn incompatibility() -> Outcome {
    let start = Instant::now();
    let (library, oracle) = brute_force::generic_unit_point(false);
    let cert = verify_quartic_theorem(&VerifyConfig::default());
    let secs = start.elapsed().as_secs_f64();
    let unanimous = cert
        .branches
        .iter()
        .all(|b| b.verdict == "incompatible" && b.trials.len() >= 20);
    let verdicts: Vec<String> = cert
        .branches
        .iter()
        .map(|b| {
            let n = b.trials.iter().filter(|t| t.verdict == "incompatible").count();
            format!("{} {}/{} incompatible", b.name, n, b.trials.len())
        })
        .collect();
    let mut out = Outcome::new(
        unanimous && library == oracle && secs < 600.0,
        format!("{}; oracle at (1,1,1) agrees {}; {secs:.1}s", verdicts.join(", "), library == oracle),
    );
    if let Some(w) = cert.branches.iter().find_map(|b| b.witness.as_ref().map(|w| (b.name.clone(), w))) {
        out = out.note(format!(
            "{}: common solution y = {} at {:?}, verified {}",
            w.0, w.1.y, w.1.params, w.1.verified
        ));
    }
    let printed = verify_quartic_theorem(&VerifyConfig {
        nonlinear: NonlinearSource::Tabulated,
        ..VerifyConfig::default()
    });
    let printed_verdicts: Vec<String> = printed.branches.iter().map(|b| format!("{} {}", b.name, b.verdict)).collect();
    let (pl, po) = brute_force::generic_unit_point(true);
    out.note(format!(
        "published quadratic equations: {}; oracle agrees {}",
        printed_verdicts.join(", "),
        pl == po
    ))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hamnve")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn conclusion_of(stdout: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(stdout).expect("json report");
    v["result"]["conclusion"].as_str().unwrap_or_default().to_string()
}

fn end_to_end() -> Outcome {
    let (code, out) = run_cli(&["verify-quartic", "--format", "json"]);
    let conclusion = conclusion_of(&out);
    let (mcode, _) = run_cli(&["verify-quartic", "--mutate", "--format", "json"]);
    let ok = code == 0 && conclusion == THEOREM_CONCLUSION && mcode != 0;
    let (tcode, tout) = run_cli(&["verify-quartic", "--nonlinear", "tabulated", "--format", "json"]);
    let (tmcode, _) = run_cli(&["verify-quartic", "--nonlinear", "tabulated", "--mutate", "--format", "json"]);
    Outcome::new(
        ok,
        format!("verify-quartic exit {code}: \"{conclusion}\"; with --mutate exit {mcode}"),
    )
    .note(format!(
        "--nonlinear tabulated: exit {tcode}: \"{}\"; with --mutate exit {tmcode}",
        conclusion_of(&tout)
    ))
}

fn forward_numeric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    let mut worst_drift = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut min_eta3 = f64::INFINITY;
    let mut max_eta4 = 0.0f64;
    for _ in 0..10 {
        let mut c: Vec<i64> = (0..5).map(|_| rng.random_range(-3..=3)).collect();
        while c[4] == 0 {
            c[4] = rng.random_range(-3..=3);
        }
        let lambda: i64 = rng.random_range(-5..=5);
        let text = format!(
            "{lambda} + ({} + ({})*x1 + ({})*x1^2 + ({})*x1^3 + ({})*x1^4)*x2^2",
            c[0], c[1], c[2], c[3], c[4]
        );
        let pot = NumericPotential::parse(&text).unwrap();
        let init = [rng.random_range(-1.0..1.0), rng.random_range(-1.5..1.5), 0.0, 0.0];
        let traj = integrate_hamilton(&pot, init, 1e-3, 10.0).unwrap();
        let a = nve_coefficient_samples(&traj, &pot.alpha);
        let four = polynomial_degree_test(&a, 4, 1e-6).unwrap();
        let three = polynomial_degree_test(&a, 3, 1e-6).unwrap();
        worst_drift = worst_drift.max(traj.energy_drift());
        worst_residual = worst_residual.max(four.residual);
        max_eta4 = max_eta4.max(four.eta);
        min_eta3 = min_eta3.min(three.eta);
        ok &= !traj.diverged && traj.energy_drift() < 1e-8 && four.pass && four.residual < 1e-6 && !three.pass;
    }
    Outcome::new(
        ok,
        format!(
            "10 members: max drift {worst_drift:.1e}, d = 4 max eta {max_eta4:.1e} / residual {worst_residual:.1e}, d = 3 min eta {min_eta3:.1e}"
        ),
    )
}

fn non_member() -> Outcome {
    let exact = parse_potential("x1^2/2 + x1^4*x2^2").unwrap();
    let pulled = pullback_condition(&MPoly::var(Var::Nve(5)), &exact.alpha, &exact.phi).unwrap();
    let pot = NumericPotential::from_potential(&exact);
    let traj = integrate_hamilton(&pot, [0.8, 0.3, 0.0, 0.0], 1e-3, 10.0).unwrap();
    let a = nve_coefficient_samples(&traj, &pot.alpha);
    let r = polynomial_degree_test(&a, 4, 1e-6).unwrap();
    Outcome::new(
        !pulled.is_zero() && !r.pass,
        format!("pullback of a_5 = {pulled}; numeric d = 4 eta {:.2e} ({})", r.eta, if r.pass { "pass" } else { "fail" }),
    )
}

fn variational() -> Outcome {
    let ratio = |text: &str| {
        let pot = NumericPotential::parse(text).unwrap();
        let e1 = variational_consistency(&pot, [0.3, 0.4], 1e-5, 1e-3, 1.0).unwrap();
        let e2 = variational_consistency(&pot, [0.3, 0.4], 5e-6, 1e-3, 1.0).unwrap();
        e1 / e2
    };
    let member = ratio("1 + (x1^4 - 2*x1 + 1)*x2^2");
    let with_beta = ratio("1 + (x1^4 - 2*x1 + 1)*x2^2 + x1*x2^3");
    Outcome::new(
        (1.5..=2.5).contains(&member),
        format!("beta = 0 member: error ratio {member:.3} when delta halves"),
    )
    .note(format!("same member plus x1*x2^3: ratio {with_beta:.3}"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("recurrence fidelity", recurrence),
        ("fourth-order linear condition", equation_l),
        ("kernel dimensions", kernel_dimensions),
        ("degeneration locus", degeneration),
        ("Q structure", q_structure),
        ("incompatibility", incompatibility),
        ("theorem end-to-end", end_to_end),
        ("numeric forward check", forward_numeric),
        ("symbolic/numeric agreement", non_member),
        ("variational consistency", variational),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, outcome.summary);
        for note in &outcome.notes {
            println!("               {note}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
