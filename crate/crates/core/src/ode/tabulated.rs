//! Reference equations and solution bases as published for the quartic case,
//! transcribed verbatim. They are cross-checked against the derived ones and
//! never trusted blindly: `n2_as_printed` does not solve the reduced linear
//! equation, `n2` carries the one-coefficient correction that makes it a
//! solution.

use super::kernel::{Branch, SolutionBasis};
use super::{LinearODE, NonlinearODE, OdeError};
use crate::algebra::{MPoly, RatFunc, Var};
use crate::parse::{parse_poly, Symbols};

fn p(text: &str) -> MPoly {
    parse_poly(text, Symbols::Any).expect("tabulated expression parses")
}

/// Fourth-order equation in φ (uncentered).
pub fn linear_in_phi() -> LinearODE {
    LinearODE::new(
        Var::X1,
        vec![
            MPoly::zero(),
            p("240*e"),
            p("240*e*x1 + 60*d"),
            p("60*e*x1^2 + 30*d*x1 + 10*c"),
            p("4*e*x1^3 + 3*d*x1^2 + 2*c*x1 + b"),
        ],
    )
    .expect("nonzero leading coefficient")
}

/// Quadratic equation in φ′ (uncentered), as printed.
pub fn nonlinear_in_phi() -> NonlinearODE {
    let a1 = p("b + 2*c*x1 + 3*d*x1^2 + 4*e*x1^3");
    NonlinearODE::new(
        Var::X1,
        [
            ((0, 0), p("18*d + 72*e*x1")),
            ((1, 1), a1.clone()),
            ((0, 1), p("14*c + 42*d*x1 + 84*e*x1^2")),
            ((0, 2), a1),
        ],
    )
}

pub fn reduced_linear() -> LinearODE {
    LinearODE::new(
        Var::X,
        vec![p("240*e"), p("240*e*x"), p("60*e*x^2 + 10*c"), p("4*e*x^3 + 2*c*x + b")],
    )
    .expect("nonzero leading coefficient")
}

pub fn reduced_nonlinear() -> NonlinearODE {
    let d = p("b + 2*c*x + 4*e*x^3");
    NonlinearODE::new(
        Var::X,
        [
            ((0, 0), p("72*e*x")),
            ((1, 1), d.clone()),
            ((0, 1), p("14*c + 84*e*x^2")),
            ((0, 2), d),
        ],
    )
}

/// The quadratic equation as printed for the b = 0 case.
pub fn nonlinear_b_zero() -> NonlinearODE {
    let d = p("2*c*x + 4*e*x^3");
    NonlinearODE::new(
        Var::X,
        [((0, 0), p("72*e*x")), ((1, 1), d.clone()), ((0, 1), p("14*c + 84*e*x^2")), ((0, 2), d)],
    )
}

/// The quadratic equation as printed for the c = 0 case.
pub fn nonlinear_c_zero() -> NonlinearODE {
    let d = p("b + 4*e*x^3");
    NonlinearODE::new(
        Var::X,
        [((0, 0), p("72*e*x")), ((1, 1), d.clone()), ((0, 1), p("84*e*x^2")), ((0, 2), d)],
    )
}

pub fn nonlinear_for(branch: Branch) -> NonlinearODE {
    match branch {
        Branch::Generic => reduced_nonlinear(),
        Branch::BZero => nonlinear_b_zero(),
        Branch::CZero => nonlinear_c_zero(),
    }
}

pub fn d_generic() -> MPoly {
    p("4*e*x^3 + 2*c*x + b")
}

pub fn n1() -> MPoly {
    p("x*(4*e*c^2*x^5 - 42*b*e*c*x^4 - (6*c^3 + 48*e*b^2)*x^3 + 9*b^2*c*x + 6*b^3)")
}

pub fn n2_as_printed() -> MPoly {
    p("x*(8*e*c*x^5 - 12*b*c*e*x^4 - (24*e*b^2 + 12*c^3)*x^3 - 12*b*c^2*x^2 + 3*b^3)")
}

/// `n2_as_printed` with its x⁶ coefficient 8ec replaced by 8ec².
pub fn n2() -> MPoly {
    p("x*(8*e*c^2*x^5 - 12*b*c*e*x^4 - (24*e*b^2 + 12*c^3)*x^3 - 12*b*c^2*x^2 + 3*b^3)")
}

pub fn n3() -> MPoly {
    p("8*c^2*e^2*x^6 - 84*b*c*e^2*x^5 - (12*c^3*e + 168*b^2*e^2)*x^4 + 21*b^3*e*x - 3*b^2*c^2")
}

/// The printed W(N1, N2, N3), thirteen terms.
pub fn wronskian_generic() -> MPoly {
    p("162*c^3*b^7 + 1296*b^6*c^4*x + 3888*b^5*c^5*x^2 + (2592*b^6*e*c^3 + 5184*b^4*c^6)*x^3 \
       + (2592*c^7*b^3 + 15552*b^5*c^4*e)*x^4 + 31104*b^4*c^5*e*x^5 \
       + (15552*b^5*c^3*e^2 + 20736*b^3*c^6*e)*x^6 + 62208*b^4*c^4*e^2*x^7 \
       + 62208*b^3*c^5*e^2*x^8 + 41472*b^4*c^3*e^3*x^9 + 82944*b^3*c^4*e^3*x^10 \
       + 41472*b^3*c^3*e^4*x^12")
}

pub fn d_b_zero() -> MPoly {
    p("2*e*x^2 + c")
}

pub fn n3_1() -> RatFunc {
    RatFunc::from_poly(p("6*e*x^2 - c"))
}

pub fn n3_2() -> RatFunc {
    RatFunc::from_poly(p("x*(-3*c + 2*e*x^2)"))
}

/// Carries the pole x⁻³.
pub fn n3_3() -> RatFunc {
    RatFunc::new(p("c^3 + 6*e*c^2*x^2 + 16*e^3*x^6"), p("x^3")).expect("nonzero denominator")
}

/// The printed W(N_{3,1}, N_{3,2}, N_{3,3}).
pub fn wronskian_b_zero() -> RatFunc {
    RatFunc::new(p("96*e*c*(6*e*c^2*x^4 + 16*e^3*x^6 + 5*c^3)"), p("x^4")).expect("nonzero denominator")
}

pub fn d_c_zero() -> MPoly {
    p("4*e*x^3 + b")
}

pub fn n4_1() -> MPoly {
    p("x*(b - 8*e*x^3)")
}

pub fn n4_2() -> MPoly {
    p("x^2*(b - 2*e*x^3)")
}

pub fn n4_3() -> MPoly {
    p("b^2 - 28*e*b*x^3 + 16*e^2*x^6")
}

/// The printed W(N_{4,1}, N_{4,2}, N_{4,3}).
pub fn wronskian_c_zero() -> MPoly {
    p("2*b^4 + 32*e*b^3*x^3 + 192*e^2*b^3*x^6 + 512*b*e^3*x^9 + 512*e^4*x^12")
}

/// The published fundamental system of a branch, written over xᵖ·Dᵉ.
pub fn basis_for(branch: Branch) -> Result<SolutionBasis, OdeError> {
    match branch {
        Branch::Generic => SolutionBasis::from_numerators(Var::X, d_generic(), 3, 0, vec![n1(), n2(), n3()]),
        Branch::BZero => {
            let x3 = MPoly::var_pow(Var::X, 3);
            let lift = |f: RatFunc| -> MPoly {
                f.mul(&RatFunc::from_poly(x3.clone()))
                    .as_poly()
                    .cloned()
                    .expect("pole of order at most three")
            };
            SolutionBasis::from_numerators(
                Var::X,
                d_b_zero(),
                3,
                3,
                vec![lift(n3_1()), lift(n3_2()), lift(n3_3())],
            )
        }
        Branch::CZero => SolutionBasis::from_numerators(Var::X, d_c_zero(), 3, 0, vec![n4_1(), n4_2(), n4_3()]),
    }
}
