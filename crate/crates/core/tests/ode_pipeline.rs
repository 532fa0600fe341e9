use std::collections::BTreeMap;

use hamnve_core::certify::{
    branch_basis, build_q, extract_forms, proportional, reassemble, reduced_equations, verify_quartic_theorem,
    Mutation, NonlinearSource, VerifyConfig,
};
use hamnve_core::jets::generate_conditions;
use hamnve_core::ode::{degeneration_branches, specialize_quartic, tabulated, Branch, QuarticAlpha};
use hamnve_core::parse::{parse_poly, Symbols};
use hamnve_core::{MPoly, Rational, Var};

fn p(s: &str) -> MPoly {
    parse_poly(s, Symbols::Any).unwrap()
}

fn values(pairs: &[(Var, i64)]) -> BTreeMap<Var, Rational> {
    pairs.iter().map(|&(v, x)| (v, Rational::from_integer(x.into()))).collect()
}

#[test]
fn fourth_order_equation_up_to_constant() {
    let conds = generate_conditions(4).unwrap();
    let (l, _) = specialize_quartic(&conds, &QuarticAlpha::symbolic()).unwrap();
    let expected = [
        MPoly::zero(),
        p("240*e"),
        p("240*e*x1 + 60*d"),
        p("60*e*x1^2 + 30*d*x1 + 10*c"),
        p("4*e*x1^3 + 3*d*x1^2 + 2*c*x1 + b"),
    ];
    assert!(proportional(&l.coefficients, &expected), "{l}");
    // the constant term of alpha never appears
    assert!(l.coefficients.iter().all(|c| !c.vars().contains(&Var::A)));
}

#[test]
fn kernels_are_three_dimensional() {
    let (l2, _, _) = reduced_equations().unwrap();
    for branch in Branch::ALL {
        let (ode, basis) = branch_basis(&l2, branch, 8).unwrap();
        assert_eq!(basis.dimension(), 3, "{branch:?}");
        for y in basis.elements().unwrap() {
            assert!(ode.residual(&y).unwrap().is_zero(), "{branch:?}: {y}");
        }
        assert!(!basis.numerator_wronskian().unwrap().is_zero());
    }
}

#[test]
fn tabulated_degeneration_locus() {
    let generic = tabulated::basis_for(Branch::Generic).unwrap();
    let w = generic.numerator_wronskian().unwrap();
    assert!(w.div_exact(&p("b^3*c^3")).is_some());
    let comps: Vec<MPoly> = degeneration_branches(&generic).unwrap().into_iter().map(|d| d.component).collect();
    assert_eq!(comps, vec![p("b"), p("c")]);

    let b0 = tabulated::basis_for(Branch::BZero).unwrap();
    let comps: Vec<MPoly> = degeneration_branches(&b0).unwrap().into_iter().map(|d| d.component).collect();
    assert_eq!(comps, vec![p("c")]);

    let c0 = tabulated::basis_for(Branch::CZero).unwrap();
    assert!(degeneration_branches(&c0).unwrap().is_empty());
    let top = c0.numerator_wronskian().unwrap().coefficient(Var::X, 12);
    let e4 = p("e^4");
    assert!(proportional(&[top], &[e4]));
}

#[test]
fn q_reassembles_and_is_homogeneous() {
    let (l2, nl2, _) = reduced_equations().unwrap();
    for branch in Branch::ALL {
        let (_, basis) = branch_basis(&l2, branch, 8).unwrap();
        let nl = nl2.evaluate(&branch.constraint_values());
        let q = build_q(&nl, &basis).unwrap();
        let forms = extract_forms(&q, Var::X).unwrap();
        assert_eq!(forms.len() as u32, q.degree(Var::X) + 1);
        assert_eq!(reassemble(&forms, Var::X), q);
        assert!(forms.iter().all(|f| f.is_symmetric()));
        // every monomial has K-degree exactly 2
        for (m, _) in q.terms() {
            let kdeg: u32 = Var::K.iter().map(|&k| m.exponent(k)).sum();
            assert_eq!(kdeg, 2);
        }
        let at_zero = q.evaluate(&values(&[(Var::K1, 0), (Var::K2, 0), (Var::K3, 0)]));
        assert!(at_zero.is_zero());
    }
}

#[test]
fn q_matches_direct_substitution() {
    // Oracle: substitute y = K1 y1 + ... into the quadratic equation with exact
    // rational functions at a concrete point and compare with Q over its
    // cleared denominator.
    let (l2, nl2, _) = reduced_equations().unwrap();
    let point = values(&[(Var::B, 2), (Var::C, -3), (Var::E, 5), (Var::K1, 1), (Var::K2, -2), (Var::K3, 7)]);
    let (_, basis) = branch_basis(&l2, Branch::Generic, 8).unwrap();
    let q = build_q(&nl2, &basis).unwrap().evaluate(&point);
    let y_num = basis.general_numerator().evaluate(&point);
    let den = basis.full_denominator().evaluate(&point);
    let y = hamnve_core::RatFunc::new(y_num, den.clone()).unwrap();
    let r = nl2.evaluate(&point).residual(&y).unwrap();
    // Q / (D^(2e+s-1)) and the residual differ by a constant only
    let (xp, dp) = hamnve_core::certify::forms::cleared_denominator(&nl2, &basis);
    let d = basis.denominator.evaluate(&point);
    let lhs = hamnve_core::RatFunc::new(q, &MPoly::var_pow(Var::X, xp) * &d.pow(dp)).unwrap();
    let ratio = lhs.div(&r).unwrap();
    assert!(ratio.as_poly().and_then(MPoly::constant_value).is_some(), "{ratio}");
}

#[test]
fn certificate_is_deterministic_and_ordered() {
    let config = VerifyConfig {
        trials: 3,
        seed: 7,
        ..VerifyConfig::default()
    };
    let a = verify_quartic_theorem(&config);
    let b = verify_quartic_theorem(&config);
    let names: Vec<&str> = a.branches.iter().map(|b| b.name.as_str()).collect();
    assert_eq!(names, ["generic", "b_zero", "c_zero"]);
    for (x, y) in a.branches.iter().zip(&b.branches) {
        let dx: Vec<_> = x.trials.iter().map(|t| (&t.params, &t.digest)).collect();
        let dy: Vec<_> = y.trials.iter().map(|t| (&t.params, &t.digest)).collect();
        assert_eq!(dx, dy);
        assert_eq!(x.trials.len(), 3);
    }
    let other = verify_quartic_theorem(&VerifyConfig { seed: 8, ..config });
    assert_ne!(a.branches[0].trials[0].params, other.branches[0].trials[0].params);
}

#[test]
fn zero_trials_leave_everything_unevaluated() {
    let cert = verify_quartic_theorem(&VerifyConfig {
        trials: 0,
        ..VerifyConfig::default()
    });
    assert!(cert.branches.iter().all(|b| b.verdict == "unevaluated"));
    assert!(!cert.theorem_holds);
    assert!(cert.conclusion.starts_with("unevaluated"));
}

#[test]
fn b_zero_admits_an_inverse_cube() {
    // y = 1/x^3 solves both centered equations once b = 0.
    let (l2, nl2, _) = reduced_equations().unwrap();
    let vals = values(&[(Var::B, 0)]);
    let y = hamnve_core::RatFunc::new(MPoly::one(), MPoly::var_pow(Var::X, 3)).unwrap();
    assert!(l2.evaluate(&vals).unwrap().residual(&y).unwrap().is_zero());
    assert!(nl2.evaluate(&vals).residual(&y).unwrap().is_zero());

    let cert = verify_quartic_theorem(&VerifyConfig {
        trials: 2,
        ..VerifyConfig::default()
    });
    let b0 = &cert.branches[1];
    assert_eq!(b0.verdict, "compatible");
    let w = b0.witness.as_ref().unwrap();
    assert!(w.verified, "{w:?}");
    assert!(!cert.theorem_holds);
}

#[test]
fn tabulated_source_and_mutation() {
    let base = VerifyConfig {
        trials: 2,
        nonlinear: NonlinearSource::Tabulated,
        ..VerifyConfig::default()
    };
    let cert = verify_quartic_theorem(&base);
    assert_eq!(cert.nonlinear_source, NonlinearSource::Tabulated);
    let mutated = verify_quartic_theorem(&VerifyConfig {
        mutation: Some(Mutation::constant_term_72_to_71()),
        ..base
    });
    assert!(mutated.mutation.is_some());
    for b in &mutated.branches {
        assert!(b.failed_stage.is_none(), "{:?}", b.failed_stage);
        assert_eq!(b.trials.len(), 2);
    }
}

#[test]
fn printed_checks_are_reported() {
    let cert = verify_quartic_theorem(&VerifyConfig {
        trials: 0,
        ..VerifyConfig::default()
    });
    let holds = |needle: &str| {
        cert.tabulated_checks
            .iter()
            .find(|c| c.item.contains(needle))
            .unwrap_or_else(|| panic!("no check mentioning {needle}"))
            .holds
    };
    assert!(holds("fourth-order linear equation"));
    assert!(holds("centered linear equation matches"));
    assert!(!holds("N2 as printed"));
    assert!(holds("N2 with x^6"));
    assert!(holds("thirteen-term"));
}
