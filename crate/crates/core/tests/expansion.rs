use rkit::arith::{gcd, lcm_all};
use rkit::convolve::MultiVariableFunction;
use rkit::engine::{
    coeff_closed, coeff_gcd, coeff_generic, evaluate_expansion, lcm_grouped_weight,
    mean_value_estimate, zeta, CoefficientFamily, ExpansionOptions, FamilyKind, Truncation,
    UnitarySupport,
};
use rkit::exact::ExactValue;
use rkit::ramanujan::{lambda_star_partial_sums, ramanujan_sum, SumKind};
use rkit::Error;

fn fam(f: FamilyKind, kind: SumKind, k: usize) -> CoefficientFamily {
    CoefficientFamily::new(f, kind, k).unwrap()
}

#[test]
fn sigma_two_variables_approaches_lhs() {
    let f = fam(FamilyKind::Sigma { s: 1.0 }, SumKind::Classical, 2);
    let r = evaluate_expansion(&f, &[4, 6], 4096, &ExpansionOptions::default()).unwrap();
    assert_eq!(r.lhs_exact, Some(ExactValue::ratio(3, 2).unwrap()));
    assert!(r.abs_error() < 1e-6, "{}", r.abs_error());
    assert_eq!(r.checkpoints.last().unwrap().q_max, 4096);
}

#[test]
fn tau_unitary_approaches_lhs() {
    let f = fam(FamilyKind::Tau, SumKind::Unitary, 2);
    let r = evaluate_expansion(&f, &[12, 18], 4096, &ExpansionOptions::default()).unwrap();
    assert_eq!(r.lhs, 4.0);
    assert!(r.abs_error() < 1e-2);
}

#[test]
fn r_one_variable_approaches_lhs() {
    let f = fam(FamilyKind::R, SumKind::Classical, 1);
    let r = evaluate_expansion(&f, &[5], 100_000, &ExpansionOptions::default()).unwrap();
    assert_eq!(r.lhs, 8.0);
    assert!(r.abs_error() < 1e-2);
    let u = evaluate_expansion(
        &f.with_kind(SumKind::Unitary),
        &[5],
        100_000,
        &ExpansionOptions::default(),
    )
    .unwrap();
    assert!(u.abs_error() < 1e-2);
}

#[test]
fn lcm_only_unitary_coefficients_miss_the_lhs() {
    let f = fam(FamilyKind::Sigma { s: 1.0 }, SumKind::Unitary, 2);
    let lcm_only = ExpansionOptions {
        support: UnitarySupport::LcmOnly,
        ..ExpansionOptions::default()
    };
    let wrong = evaluate_expansion(&f, &[1, 1], 4096, &lcm_only).unwrap();
    let right = evaluate_expansion(&f, &[1, 1], 4096, &ExpansionOptions::default()).unwrap();
    assert!(wrong.abs_error() > 0.04);
    assert!(right.abs_error() < 1e-5);
}

#[test]
fn box_and_lcm_agree_on_common_tuples() {
    // box mode at bound B contains every tuple with lcm <= B; the difference
    // is exactly the tuples in the box whose lcm exceeds B
    let f = fam(FamilyKind::Sigma { s: 1.0 }, SumKind::Classical, 2);
    let ns = [6u64, 4];
    let bound = 40;
    let boxed = evaluate_expansion(
        &f,
        &ns,
        bound,
        &ExpansionOptions {
            mode: Truncation::Box,
            ..ExpansionOptions::default()
        },
    )
    .unwrap();
    let lcm = evaluate_expansion(&f, &ns, bound, &ExpansionOptions::default()).unwrap();
    let mut outside = 0.0;
    for q1 in 1..=bound {
        for q2 in 1..=bound {
            if lcm_all(&[q1, q2]).unwrap() > bound {
                let c = coeff_closed(&f, &[q1, q2]).unwrap().value;
                let prod = ramanujan_sum(SumKind::Classical, q1, ns[0]).unwrap()
                    * ramanujan_sum(SumKind::Classical, q2, ns[1]).unwrap();
                outside += c * prod as f64;
            }
        }
    }
    assert!((boxed.partial - lcm.partial - outside).abs() < 1e-12);
}

#[test]
fn grouped_weight_at_all_ones_is_mobius_classically() {
    for q in 1..=100u64 {
        let mu = rkit::arith::mobius(q).unwrap();
        assert_eq!(
            lcm_grouped_weight(SumKind::Classical, q, &[1, 1, 1]).unwrap(),
            mu
        );
    }
}

#[test]
fn generic_coefficients_match_closed_forms() {
    let sigma = fam(FamilyKind::Sigma { s: 1.0 }, SumKind::Classical, 2);
    let f = sigma.as_multivariable().unwrap();
    let a11 = coeff_generic(&f, SumKind::Classical, &[1, 1], 300).unwrap();
    assert!((a11.value - zeta(3.0).unwrap()).abs() < 1e-5);

    let unitary = sigma.with_kind(SumKind::Unitary);
    let closed = coeff_closed(&unitary, &[2, 2]).unwrap().value;
    assert!((closed - 0.131_475).abs() < 1e-6);
    let generic = coeff_generic(&f, SumKind::Unitary, &[2, 2], 1000).unwrap();
    let bound = unitary.tail_bound(2, 1000).unwrap();
    assert!((generic.value - closed).abs() <= bound);

    let one = MultiVariableFunction::constant_one(3).unwrap();
    for m in [1, 5, 12] {
        assert_eq!(
            coeff_generic(&one, SumKind::Classical, &[1, 1, 1], m)
                .unwrap()
                .value,
            1.0
        );
    }
}

#[test]
fn phi_unitary_coefficient_example() {
    // a*_(2,2) = (-1/2) / 2^2 * sum_{(m,2)=1} mu(m)/m^3 = -1/(7 zeta(3))
    let f = fam(FamilyKind::Phi { s: 1.0 }, SumKind::Unitary, 2);
    let expected = -1.0 / (7.0 * zeta(3.0).unwrap());
    let closed = coeff_closed(&f, &[2, 2]).unwrap();
    assert!((closed.value - expected).abs() < 1e-15);
    assert_eq!(closed.symbolic.unwrap().to_string(), "-1/7 / zeta(3)");
    let series = coeff_gcd(&f, &[2, 2], 10_000).unwrap();
    assert!((series.value - expected).abs() <= series.tail_bound.unwrap() + 1e-15);
}

#[test]
fn phi_and_r_structural_properties() {
    for kind in [SumKind::Classical, SumKind::Unitary] {
        let phi = fam(FamilyKind::Phi { s: 1.0 }, kind, 2);
        let r = fam(FamilyKind::R, kind, 1);
        for q1 in 1..=30u64 {
            for q2 in 1..=30u64 {
                let c = coeff_closed(&phi, &[q1, q2]).unwrap();
                let q = c.lcm;
                if !rkit::arith::factorize(q).unwrap().is_squarefree() {
                    assert_eq!(c.value, 0.0);
                } else {
                    let other =
                        coeff_closed(&phi.with_kind(SumKind::Classical), &[q1, q2]).unwrap();
                    assert_eq!(c.value, other.value);
                }
            }
            let c = coeff_closed(&r, &[q1]).unwrap();
            if q1 % 2 == 0 {
                assert_eq!(c.value, 0.0);
            }
            if q1 % 2 == 1 {
                // unitary = classical * F(Q), F(Q) = prod_{p | Q} (1 - chi(p)/p)
                let classical = coeff_closed(&r.with_kind(SumKind::Classical), &[q1]).unwrap();
                let unitary = coeff_closed(&r.with_kind(SumKind::Unitary), &[q1]).unwrap();
                let big_f: f64 = rkit::arith::factorize(q1)
                    .unwrap()
                    .primes()
                    .map(|p| 1.0 - rkit::arith::chi4(p) as f64 / p as f64)
                    .product();
                assert!((unitary.value - classical.value * big_f).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn mean_value_targets() {
    let sigma = fam(FamilyKind::Sigma { s: 1.0 }, SumKind::Classical, 2);
    let r = mean_value_estimate(&sigma, 1000).unwrap();
    assert!(r.relative_error() < 0.01);
    let one = fam(FamilyKind::One, SumKind::Classical, 2);
    assert!((mean_value_estimate(&one, 50).unwrap().estimate - 1.0).abs() < 1e-12);
}

#[test]
fn lambda_star_targets() {
    let rows = lambda_star_partial_sums(9, &[100]).unwrap();
    assert!((rows[0].unitary_target + 2.0 * 3f64.ln()).abs() < 1e-15);
    let rows = lambda_star_partial_sums(6, &[100]).unwrap();
    assert_eq!(rows[0].unitary_target, 0.0);
    assert_eq!(rows[0].classical_target, 0.0);
}

#[test]
fn domain_errors_name_the_constraint() {
    let err =
        CoefficientFamily::new(FamilyKind::Sigma { s: -1.0 }, SumKind::Classical, 2).unwrap_err();
    assert!(matches!(&err, Error::Domain(m) if m.contains("s + k > 1")));
    let err = CoefficientFamily::new(FamilyKind::Tau, SumKind::Unitary, 1).unwrap_err();
    assert!(matches!(&err, Error::Domain(m) if m.contains("k >= 2")));
    assert!(rkit::engine::zeta(1.0).is_err());
    assert_eq!(gcd(0, 5), 5);
}
