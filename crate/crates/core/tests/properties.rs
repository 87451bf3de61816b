mod common;

use pivotal::enumerate::{monotone_functions, up_closure};
use pivotal::expr::{parse, Expr};
use pivotal::function::{discrete_derivative, pivotal_set};
use pivotal::harness::{
    check_bessel, check_bessel_chain, check_bth, check_margulis_russo, check_rth, check_theorem1,
    default_p_grid, run_suite,
};
use pivotal::measure::{
    self, expectation, inner_product, mean_derivative, mean_poly, prob, RealFunctionOnCube,
};
use pivotal::montecarlo::{estimate_influence, estimate_mean, estimate_total_influence};
use pivotal::pivotal::{
    conditional_stats, correlation_xi, expectation_sn_f, influence, pivotal_indicator,
    pivotal_mass_on_ones, second_order, total_influence,
};
use pivotal::tail::{exact_tail, hoeffding_bound, HoeffdingVariant};
use pivotal::{BooleanFunction, Configuration, Evaluate, Family};
use proptest::prelude::*;
use proptest::sample::select;

fn table(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| BooleanFunction::from_bits(n, &bits).unwrap())
    })
}

/// Up-closure of a sparse random generator set, so that both small and
/// large level sets occur.
fn monotone(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n, 0u32..6).prop_flat_map(|(n, sparsity)| {
        let chance = 1.0 / f64::from(1u32 << (sparsity + 1));
        prop::collection::vec(prop::bool::weighted(chance), 1 << n)
            .prop_map(move |bits| up_closure(&BooleanFunction::from_bits(n, &bits).unwrap()))
    })
}

fn bias() -> impl Strategy<Value = f64> {
    select(default_p_grid())
}

fn expr(max_var: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Expr::Const),
        6 => (1..=max_var).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(6, 96, 5, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Or),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Xor),
            prop_oneof![
                prop::collection::vec(inner.clone(), 3),
                prop::collection::vec(inner, 5)
            ]
            .prop_map(Expr::Maj),
        ]
    })
}

fn monotone_expr(max_var: usize) -> impl Strategy<Value = Expr> {
    let leaf = (1..=max_var).prop_map(Expr::Var);
    leaf.prop_recursive(5, 64, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Or),
            prop::collection::vec(inner, 3).prop_map(Expr::Maj),
        ]
    })
}

fn depth(e: &Expr) -> usize {
    match e {
        Expr::Var(_) | Expr::Const(_) => 0,
        Expr::Not(c) => 1 + depth(c),
        Expr::And(es) | Expr::Or(es) | Expr::Xor(es) | Expr::Maj(es) => {
            1 + es.iter().map(depth).max().unwrap_or(0)
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    common::rel_close(a, b, tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pivotal_set_matches_derivative(f in table(8), seed in any::<u64>()) {
        let n = f.arity();
        let omega = Configuration::from_index(n, seed % f.len()).unwrap();
        let set = pivotal_set(&f, &omega).unwrap();
        for i in 1..=n {
            let d = discrete_derivative(&f, i, &omega).unwrap();
            prop_assert_eq!(set.contains(&i), d != 0);
        }
    }

    #[test]
    fn monotone_derivatives_are_zero_or_one(f in monotone(8)) {
        prop_assert!(f.is_monotone());
        let n = f.arity();
        for idx in 0..f.len() {
            let omega = Configuration::from_index(n, idx).unwrap();
            for i in 1..=n {
                let d = discrete_derivative(&f, i, &omega).unwrap();
                prop_assert!(d == 0 || d == 1);
            }
        }
    }

    #[test]
    fn set_coordinate_is_idempotent(n in 1usize..=130, seed in any::<u64>(), b in any::<bool>()) {
        let mut omega = Configuration::zeros(n);
        let mut s = seed;
        for i in 1..=n {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            omega = omega.set_coordinate(i, s >> 63 == 1).unwrap();
        }
        let i = 1 + (seed as usize % n);
        let once = omega.set_coordinate(i, b).unwrap();
        prop_assert_eq!(once.set_coordinate(i, b).unwrap(), once.clone());
        prop_assert_eq!(once.get(i).unwrap(), b);
    }

    #[test]
    fn weight_enumerator_sums_to_population(f in table(10)) {
        let a = f.weight_enumerator();
        prop_assert_eq!(a.len(), f.arity() + 1);
        prop_assert_eq!(a.iter().sum::<u64>(), f.count_ones());
    }

    #[test]
    fn parity_and_constant_pivotal_sets(n in 1usize..=40, seed in any::<u64>(), value in any::<bool>()) {
        let mut omega = Configuration::zeros(n);
        for i in 1..=n {
            omega = omega.set_coordinate(i, (seed >> (i % 64)) & 1 == 1).unwrap();
        }
        let parity = Family::parity(n).unwrap();
        prop_assert_eq!(pivotal_set(&parity, &omega).unwrap(), (1..=n).collect::<Vec<_>>());
        let constant = Family::constant(n, value).unwrap();
        prop_assert!(pivotal_set(&constant, &omega).unwrap().is_empty());
    }

    #[test]
    fn print_parse_round_trip(e in expr(12)) {
        prop_assume!(depth(&e) <= 6);
        let text = e.to_string();
        prop_assert_eq!(parse(&text).unwrap(), e);
    }

    #[test]
    fn compiled_table_agrees_with_evaluation(e in expr(12), pad in 0usize..=2) {
        let n = e.arity().max(1) + pad;
        prop_assume!(n <= 12);
        let f = e.compile(n).unwrap();
        let bound = e.bind(n).unwrap();
        for idx in 0..f.len() {
            let omega = Configuration::from_index(n, idx).unwrap();
            let direct = e.eval(&omega).unwrap();
            prop_assert_eq!(f.value(idx), direct);
            prop_assert_eq!(bound.eval(&omega), direct);
        }
    }

    #[test]
    fn monotone_fragment_compiles_monotone(e in monotone_expr(10)) {
        prop_assert!(e.is_monotone_fragment());
        prop_assert!(e.compile(e.arity()).unwrap().is_monotone());
    }

    #[test]
    fn normalization(n in 1usize..=12, k in 0u32..=10) {
        let p = f64::from(k) / 10.0;
        let total: f64 = (0..1u64 << n)
            .map(|idx| prob(&Configuration::from_index(n, idx).unwrap(), p).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn characters_are_orthogonal(n in 1usize..=10, p in bias()) {
        let v = p * (1.0 - p);
        let xs: Vec<_> = (1..=n).map(|i| RealFunctionOnCube::character(n, i, p).unwrap()).collect();
        for (i, xi) in xs.iter().enumerate() {
            for (j, xj) in xs.iter().enumerate() {
                let want = if i == j { 1.0 / v } else { 0.0 };
                prop_assert!(close(inner_product(xi, xj, p).unwrap(), want, 1e-10));
            }
        }
        let s = RealFunctionOnCube::sum_of_characters(n, p).unwrap();
        prop_assert!(close(inner_product(&s, &s, p).unwrap(), n as f64 / v, 1e-10));
        let oracle = common::expect(n, p, |idx| {
            let sn: f64 = (0..n).map(|b| common::x(idx, b, p)).sum();
            sn * sn
        });
        prop_assert!(close(oracle, n as f64 / v, 1e-10));
    }

    #[test]
    fn mean_polynomial_matches_expectation(f in table(10)) {
        let poly = mean_poly(&f);
        let real = RealFunctionOnCube::from_boolean(&f);
        for k in 0..=20 {
            let p = f64::from(k) * 0.05;
            let e = expectation(&real, p).unwrap();
            prop_assert!(close(poly.eval(p), e, 1e-12));
            prop_assert!(close(e, common::mean(&f, p), 1e-12));
        }
    }

    #[test]
    fn mean_derivative_matches_sn_correlation(f in table(10), p in bias()) {
        let d = mean_derivative(&f, p).unwrap();
        prop_assert!(close(d, common::e_sn_f(&f, p), 1e-9));
        let real = RealFunctionOnCube::from_boolean(&f);
        let s = RealFunctionOnCube::sum_of_characters(f.arity(), p).unwrap();
        prop_assert!(close(d, inner_product(&real, &s, p).unwrap(), 1e-9));
    }

    #[test]
    fn monotone_pivotal_identities(f in monotone(12), p in bias()) {
        let profile = total_influence(&f, p).unwrap();
        prop_assert!(close(profile.total, common::total_influence(&f, p), 1e-10));
        prop_assert!(close(profile.total, expectation_sn_f(&f, p).unwrap(), 1e-9));
        prop_assert!(close(profile.total, pivotal_mass_on_ones(&f, p).unwrap() / p, 1e-9));
        if f.count_ones() > 0 {
            let c = conditional_stats(&f, p).unwrap();
            prop_assert!(close(p * c.cond_sn, c.cond_pivotal, 1e-9));
        }
        for i in 1..=f.arity() {
            prop_assert!(close(correlation_xi(&f, i, p).unwrap(), influence(&f, i, p).unwrap(), 1e-10));
        }
    }

    #[test]
    fn signed_correlation_is_mean_derivative_in_direction(f in table(8), p in bias()) {
        let n = f.arity();
        for b in 0..n {
            let signed = common::expect(n, p, |idx| {
                common::value(&f, idx | 1 << b) - common::value(&f, idx & !(1 << b))
            });
            prop_assert!(close(correlation_xi(&f, b + 1, p).unwrap(), signed, 1e-10));
            prop_assert!(close(influence(&f, b + 1, p).unwrap(), common::influence(&f, b, p), 1e-12));
        }
    }

    #[test]
    fn second_order_symmetry_and_independence(f in table(8), p in bias()) {
        let n = f.arity();
        let m = second_order(&f, p).unwrap();
        for i in 1..=n {
            prop_assert!(m.get(i, i).is_none());
            for k in 1..=n {
                if i != k {
                    prop_assert_eq!(m.get(i, k), m.get(k, i));
                    let oracle = common::expect(n, p, |idx| {
                        common::value(&f, idx) * common::x(idx, i - 1, p) * common::x(idx, k - 1, p)
                    });
                    prop_assert!(close(m.get(i, k).unwrap(), oracle, 1e-10));
                }
            }
        }
        for k in 1..=n {
            let g = RealFunctionOnCube::from_boolean(&pivotal_indicator(&f, k).unwrap());
            let xk = RealFunctionOnCube::character(n, k, p).unwrap();
            prop_assert!(inner_product(&xk, &g, p).unwrap().abs() <= 1e-12 * (1.0 / (p * (1.0 - p))));
        }
    }

    #[test]
    fn margulis_russo_for_monotone(f in monotone(10), p in bias()) {
        let [upper, lower] = check_margulis_russo(&f, p).unwrap();
        prop_assert!(upper.applicable && upper.holds);
        prop_assert!(lower.applicable && lower.holds);
        prop_assert!(close(upper.lhs, common::total_influence(&f, p), 1e-9));
    }

    #[test]
    fn bessel_implies_first_bound(f in monotone(10), p in bias()) {
        let bessel = check_bessel(&f, p).unwrap();
        let chain = check_bessel_chain(&f, p).unwrap();
        let first = check_theorem1(&f, p).unwrap();
        prop_assert!(chain.holds);
        if bessel.holds && bessel.slack >= 0.0 {
            let recovered = (f.arity() as f64 * bessel.rhs).sqrt();
            prop_assert!(chain.rhs <= recovered * (1.0 + 1e-12));
            prop_assert!(first.holds);
            prop_assert!(close(recovered, first.rhs, 1e-12));
        }
    }

    #[test]
    fn rth_bound_never_exceeds_bth(f in table(8), p in bias()) {
        prop_assume!(f.count_ones() > 0);
        let bth = check_bth(&f, p).unwrap();
        let rth = check_rth(&f, p).unwrap();
        prop_assert!(bth.holds && rth.holds);
        prop_assert!(rth.rhs <= bth.rhs * (1.0 + 1e-12));
    }

    #[test]
    fn hoeffding_dominates_exact_tail(
        n in select(vec![10u64, 100, 1000]),
        p in bias(),
        j in 1u32..=20,
    ) {
        let u = f64::from(j) * 0.25 * (n as f64 / (p * (1.0 - p))).sqrt();
        let t = exact_tail(n, p, u).unwrap();
        prop_assert!(t.exact <= t.bound.min(1.0));
        let proved = hoeffding_bound(n, p, u, HoeffdingVariant::Proved).unwrap();
        prop_assert!(t.bound <= proved);
        let oracle = common::binomial_two_sided_tail(n, p, u * p * (1.0 - p));
        prop_assert!((t.exact - oracle).abs() <= 1e-9 * oracle + 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), p in bias()) {
        let maj = Family::majority(31).unwrap();
        let a = estimate_total_influence(&maj, p, 3000, 0.05, seed, Some(7)).unwrap();
        let b = estimate_total_influence(&maj, p, 3000, 0.05, seed, Some(7)).unwrap();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = estimate_mean(&maj, p, 5000, 0.05, seed).unwrap();
        let d = estimate_mean(&maj, p, 5000, 0.05, seed).unwrap();
        prop_assert_eq!(c.mean.to_bits(), d.mean.to_bits());
    }
}

#[test]
fn every_applicable_check_holds_for_small_monotone_functions() {
    for n in 1..=4 {
        for f in monotone_functions(n).unwrap() {
            for c in run_suite(&f, &default_p_grid()) {
                assert!(
                    c.passes(),
                    "{} at p={} for {}",
                    c.name,
                    c.p,
                    f.to_table_string()
                );
            }
        }
    }
}

#[test]
fn sampling_coverage_on_compiled_twin() {
    let e = parse("OR(AND(x1, x2, x3), MAJ(x4, x5, x6), XOR(x7, x8))").unwrap();
    let twin = e.compile(8).unwrap();
    let oracle = e.bind(8).unwrap();
    let (p, delta, m) = (0.35, 0.1, 2000);
    let exact_mean = measure::mean(&twin, p).unwrap();
    let exact_inf = influence(&twin, 4, p).unwrap();
    let exact_total = total_influence(&twin, p).unwrap().total;
    let seeds = 200u64;
    let mut hits = [0u32; 3];
    for seed in 0..seeds {
        hits[0] += estimate_mean(&oracle, p, m, delta, seed)
            .unwrap()
            .contains(exact_mean) as u32;
        hits[1] += estimate_influence(&oracle, 4, p, m, delta, seed)
            .unwrap()
            .contains(exact_inf) as u32;
        hits[2] += estimate_total_influence(&oracle, p, m / 4, delta, seed, None)
            .unwrap()
            .contains(exact_total) as u32;
    }
    let floor = (1.0 - delta) - 0.03;
    for h in hits {
        assert!(f64::from(h) / seeds as f64 >= floor, "coverage {h}/{seeds}");
    }
}

#[test]
fn sampling_is_unbiased_against_exact_values() {
    let e = parse("OR(AND(x1, x2), MAJ(x3, x4, x5), x6)").unwrap();
    let twin = e.compile(6).unwrap();
    let oracle = e.bind(6).unwrap();
    let p = 0.3;
    let m = 500u64;
    let seeds = 400u64;
    type Estimator<'a> = Box<dyn Fn(u64) -> f64 + 'a>;
    let cases: [(f64, Estimator); 3] = [
        (
            measure::mean(&twin, p).unwrap(),
            Box::new(|s| estimate_mean(&oracle, p, m, 0.05, s).unwrap().mean),
        ),
        (
            influence(&twin, 3, p).unwrap(),
            Box::new(|s| estimate_influence(&oracle, 3, p, m, 0.05, s).unwrap().mean),
        ),
        (
            total_influence(&twin, p).unwrap().total,
            Box::new(|s| {
                estimate_total_influence(&oracle, p, m, 0.05, s, Some(2))
                    .unwrap()
                    .mean
            }),
        ),
    ];
    for (exact, run) in cases {
        let xs: Vec<f64> = (0..seeds).map(run).collect();
        let mean = xs.iter().sum::<f64>() / seeds as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
        let se = (var / seeds as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se.max(1e-12),
            "{mean} vs {exact} (se {se})"
        );
    }
}
