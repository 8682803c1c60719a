mod common;

use dsregret::arena::PlayPrefix;
use dsregret::payoff::{discounted_sum, lasso_value, loop_value};
use dsregret::rational::{format_rational, int, parse_rational, ratio};
use dsregret::{format_arena, format_automaton, parse_arena, parse_automaton, DiscountFactor, Error, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

#[test]
fn bigmem_fixture_parses() {
    let a = common::bigmem();
    assert_eq!(a.num_vertices(), 4);
    assert_eq!(a.num_edges(), 6);
    assert_eq!(a.max_weight(), &int(100));
    assert_eq!(a.lambda().value(), &ratio(9, 10));
    assert_eq!(a.lambda().alpha(), &BigInt::from(9));
    assert_eq!(a.lambda().beta(), &BigInt::from(10));
}

#[test]
fn investment_fixture_parses() {
    let a = common::investment();
    assert_eq!(a.num_states(), 6);
    assert_eq!(a.num_symbols(), 3);
    assert_eq!(a.max_weight(), &int(12));
    assert_eq!(a.lambda().value(), &ratio(49, 50));
    assert_eq!(a.state_name(a.initial()), "q_init");
}

#[test]
fn missing_transition_names_the_pair() {
    let text = std::fs::read_to_string(common::fixture("investment.aut")).unwrap();
    let broken: String = text.lines().filter(|l| *l != "trans q_S # sink 0").map(|l| format!("{l}\n")).collect();
    match parse_automaton(&broken) {
        Err(Error::NotTotal { state, symbol }) => {
            assert_eq!(state, "q_S");
            assert_eq!(symbol, "#");
        }
        other => panic!("expected totality error, got {other:?}"),
    }
}

#[test]
fn eve_single_successor_rejected() {
    let e = parse_arena("lambda 1/2\neve a\nadam b\ninit a\nedge a b 0\nedge b a 0\n").unwrap_err();
    assert!(e.to_string().contains("Eve out-degree < 2"));
}

#[test]
fn fixtures_round_trip() {
    let a = common::bigmem();
    assert_eq!(parse_arena(&format_arena(&a)).unwrap(), a);
    let b = common::investment();
    assert_eq!(parse_automaton(&format_automaton(&b)).unwrap(), b);
}

#[test]
fn discounted_sum_examples() {
    let half = DiscountFactor::new(ratio(1, 2)).unwrap();
    assert_eq!(discounted_sum(&[], &half), int(0));
    let inv = DiscountFactor::new(ratio(49, 50)).unwrap();
    assert_eq!(discounted_sum(&[int(0), int(-4), int(-4)], &inv), ratio(-19404, 2500));
    let nine = DiscountFactor::new(ratio(9, 10)).unwrap();
    for n in 0..12 {
        let ones = vec![int(1); n];
        assert_eq!(discounted_sum(&ones, &nine), int(10) * (int(1) - nine.pow(n)));
    }
    assert_eq!(loop_value(&int(1), &nine), int(10));
    assert_eq!(loop_value(&int(100), &nine), int(1000));
    assert_eq!(loop_value(&int(0), &half), int(0));
}

fn reference_add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    let (n, d) = (a.0 * b.1 + b.0 * a.1, a.1 * b.1);
    let g = n.gcd(&d);
    (n / g, d / g)
}

fn reference_mul(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    let (n, d) = (a.0 * b.0, a.1 * b.1);
    let g = n.gcd(&d);
    (n / g, d / g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn rational_round_trip(p in -100_000i64..100_000, q in 1i64..100_000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn rational_ops_match_reference(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let (x, y) = (ratio(a, b), ratio(c, d));
        let (n, m) = reference_add((a, b), (c, d));
        prop_assert_eq!(&x + &y, ratio(n, m));
        let (n, m) = reference_mul((a, b), (c, d));
        prop_assert_eq!(&x * &y, ratio(n, m));
        prop_assert_eq!(&x - &y, &x + &(-&y));
        if c != 0 {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        let r = &x * &y;
        prop_assert!(r.denom() > &BigInt::from(0));
        prop_assert_eq!(r.numer().gcd(r.denom()), BigInt::from(1));
    }

    #[test]
    fn prefix_sums_match_discounted_sum(seed in any::<u64>(), len in 1usize..12) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_arena(&mut rng, 5, 5, 2, &ratio(2, 3));
        let mut p = PlayPrefix::new(a.initial());
        let mut weights: Vec<Rational> = Vec::new();
        for k in 0..len {
            let v = p.last();
            let out = a.out_edges(v);
            let e = a.edge(out[rng.gen_range(0..out.len())]);
            let before = p.sum(k).clone();
            weights.push(e.weight.clone());
            p.push(&a, e.target).unwrap();
            prop_assert_eq!(p.sum(k + 1) - before, a.lambda().pow(k) * &e.weight);
        }
        prop_assert_eq!(p.sum(0), &int(0));
        prop_assert_eq!(p.sum(len), &discounted_sum(&weights, a.lambda()));
    }

    #[test]
    fn lasso_matches_long_unrolling(w in prop::collection::vec(-5i64..=5, 1..4), c in prop::collection::vec(-5i64..=5, 1..4)) {
        let lambda = DiscountFactor::new(ratio(1, 2)).unwrap();
        let prefix: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
        let cycle: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
        let exact = lasso_value(&prefix, &cycle, &lambda);
        let mut unrolled = prefix.clone();
        while unrolled.len() < 80 {
            unrolled.extend(cycle.iter().cloned());
        }
        let approx = discounted_sum(&unrolled, &lambda);
        let err = (exact - approx).abs();
        prop_assert!(err < ratio(1, 1_000_000));
    }
}
