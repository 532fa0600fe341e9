//! Fixtures shared by the benchmarks.

use std::collections::BTreeMap;

use hamnve_core::certify::{branch_basis, build_q, extract_forms, reduced_equations, QuadraticForm, Specialization};
use hamnve_core::ode::{Branch, LinearODE};
use hamnve_core::{Rational, Var};

pub fn centered_linear() -> LinearODE {
    reduced_equations().expect("quartic reduction").0
}

/// Forms of the generic branch and one parameter point for them.
pub fn generic_forms() -> (Vec<QuadraticForm>, Specialization) {
    let (l2, nl2, _) = reduced_equations().expect("quartic reduction");
    let (_, basis) = branch_basis(&l2, Branch::Generic, 8).expect("kernel");
    let q = build_q(&nl2, &basis).expect("clearing");
    let forms = extract_forms(&q, Var::X).expect("forms");
    let values: BTreeMap<Var, Rational> = [(Var::B, 3), (Var::C, -7), (Var::E, 2)]
        .into_iter()
        .map(|(v, x)| (v, Rational::from_integer(x.into())))
        .collect();
    (forms, Specialization::new(Branch::Generic, values).expect("nonzero parameters"))
}
