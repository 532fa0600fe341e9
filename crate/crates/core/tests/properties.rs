use std::collections::BTreeMap;
use std::time::Instant;

use hamnve_core::algebra::{determinant, poly_gcd, resultant};
use hamnve_core::jets::{enk_table, JetPoly};
use hamnve_core::parse::{format_canonical, parse_poly, Symbols};
use hamnve_core::{MPoly, Monomial, RatFunc, Rational, Var};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Sparse polynomial over the given variables, exponents below `max_exp`.
fn poly_in(vars: &'static [Var], max_exp: u32, max_terms: usize) -> impl Strategy<Value = MPoly> {
    let term = (proptest::collection::vec(0..max_exp, vars.len()), small_rational());
    proptest::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, (exps, c)| {
            let m = Monomial::from_pairs(vars.iter().copied().zip(exps).filter(|&(_, e)| e > 0));
            &acc + &MPoly::monomial(m, c)
        })
    })
}

const XY: &[Var] = &[Var::X, Var::B];
const X: &[Var] = &[Var::X];

fn nonzero(s: impl Strategy<Value = MPoly>) -> impl Strategy<Value = MPoly> {
    s.prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_in(XY, 4, 5), b in poly_in(XY, 4, 5), c in poly_in(XY, 4, 5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MPoly::one(), a.clone());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in poly_in(XY, 4, 5), b in nonzero(poly_in(XY, 4, 4))) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_is_a_common_divisor_up_to_units(
        f in nonzero(poly_in(XY, 3, 3)),
        g in nonzero(poly_in(XY, 3, 3)),
        h in nonzero(poly_in(XY, 3, 3)),
    ) {
        let d = poly_gcd(&(&f * &g), &(&f * &h)).unwrap();
        prop_assert!((&f * &g).div_exact(&d).is_some());
        prop_assert!((&f * &h).div_exact(&d).is_some());
        prop_assert!(d.div_exact(&f).is_some());
        // symmetric, and unchanged by rescaling either argument
        prop_assert_eq!(&d, &poly_gcd(&(&f * &h), &(&f * &g)).unwrap());
        let scaled = (&f * &g).scale(&Rational::new((-3).into(), 7.into()));
        prop_assert_eq!(&d, &poly_gcd(&scaled, &(&f * &h)).unwrap());
    }

    #[test]
    fn determinant_commutes_with_evaluation(
        entries in proptest::collection::vec(poly_in(XY, 3, 3), 9),
        x in -5i64..=5,
        b in -5i64..=5,
    ) {
        let m: Vec<Vec<MPoly>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let at: BTreeMap<Var, Rational> =
            [(Var::X, Rational::from_integer(x.into())), (Var::B, Rational::from_integer(b.into()))].into();
        let numeric: Vec<Vec<Rational>> = m
            .iter()
            .map(|r| r.iter().map(|p| p.evaluate_fully(&at).unwrap()).collect())
            .collect();
        // cofactor expansion as the oracle
        let n = &numeric;
        let expected = &n[0][0] * (&n[1][1] * &n[2][2] - &n[1][2] * &n[2][1])
            - &n[0][1] * (&n[1][0] * &n[2][2] - &n[1][2] * &n[2][0])
            + &n[0][2] * (&n[1][0] * &n[2][1] - &n[1][1] * &n[2][0]);
        prop_assert_eq!(determinant(&numeric).unwrap(), expected.clone());
        prop_assert_eq!(determinant(&m).unwrap().evaluate_fully(&at).unwrap(), expected);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        p in poly_in(X, 4, 4).prop_filter("degree", |p| p.degree(Var::X) >= 1),
        q in poly_in(X, 4, 4).prop_filter("degree", |p| p.degree(Var::X) >= 1),
        r in -3i64..=3,
        shared in any::<bool>(),
    ) {
        let (p, q) = if shared {
            let f = &MPoly::var(Var::X) - &MPoly::int(r);
            (&p * &f, &q * &f)
        } else {
            (p, q)
        };
        let res = resultant(&p, &q, Var::X).unwrap();
        let g = poly_gcd(&p, &q).unwrap();
        prop_assert_eq!(res.is_zero(), g.degree(Var::X) > 0);
        if shared {
            prop_assert!(res.is_zero());
        }
    }

    #[test]
    fn ratfunc_is_canonical(
        n in poly_in(XY, 3, 3),
        d in nonzero(poly_in(XY, 3, 3)),
        k in nonzero(poly_in(XY, 2, 2)),
    ) {
        let a = RatFunc::new(n.clone(), d.clone()).unwrap();
        let b = RatFunc::new(&n * &k, &d * &k).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.normalize(), a.clone());
        prop_assert!(a.sub(&b).is_zero());
    }
}

fn big_rational() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn potential_poly() -> impl Strategy<Value = MPoly> {
    let term = (0u32..=8, 0u32..=8, big_rational());
    proptest::collection::vec(term, 0..=12).prop_map(|terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, (i, j, c)| {
            let (i, j) = if i + j > 8 { (i / 2, j / 2) } else { (i, j) };
            let m = Monomial::from_pairs(
                [(Var::X1, i), (Var::X2, j)].into_iter().filter(|&(_, e)| e > 0),
            );
            &acc + &MPoly::monomial(m, c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_text_round_trips(p in potential_poly()) {
        let text = format_canonical(&p);
        prop_assert_eq!(parse_poly(&text, Symbols::Potential).unwrap(), p);
    }
}

#[test]
fn recurrence_agrees_with_operator_to_order_eight() {
    let start = Instant::now();
    let table = enk_table(8).unwrap();
    table.check_against_operator().unwrap();
    for n in 1..=8 {
        assert_eq!(table.get(n, n), JetPoly::alpha(n as u16));
        for k in 0..=n {
            if (n - k) % 2 == 1 {
                assert!(table.get(n, k).is_zero(), "E_{n},{k}");
            }
        }
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}
