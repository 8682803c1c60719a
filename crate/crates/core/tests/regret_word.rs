mod common;

use dsregret::payoff::discounted_sum;
use dsregret::rational::{int, ratio};
use dsregret::regret_word::{
    epsilon_gap, epsilon_horizon, oracle_interval_word, product_coop_value, strategy_regret_word, zero_regret_word,
    zero_regret_word_exhaustive, ResolutionStrategy, SubsetState,
};
use dsregret::{parse_automaton, Config, Error, Rational, WeightedAutomaton};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strategy(aut: &WeightedAutomaton, name: &str) -> ResolutionStrategy {
    let (first, second) = (&name[..1], &name[1..]);
    let mut picks = vec![("q_init", "#", if first == "S" { "q_S" } else { "q_B" })];
    if first == "S" {
        let t = if second == "S" { "q'_S" } else { "q'_B" };
        picks.push(("q_S", "H", t));
        picks.push(("q_S", "L", t));
    }
    ResolutionStrategy::from_targets(aut, &picks).unwrap()
}

#[test]
fn investment_strategy_regrets() {
    let aut = common::investment();
    assert_eq!(strategy_regret_word(&aut, &strategy(&aut, "SS")), ratio(38808, 10000));
    assert_eq!(strategy_regret_word(&aut, &strategy(&aut, "SB")), ratio(38416, 10000));
    assert_eq!(strategy_regret_word(&aut, &strategy(&aut, "BB")), ratio(77616, 10000));
    let j = strategy(&aut, "SB").to_json(&aut);
    assert_eq!(j["q_S"]["H"], "q'_B");
    assert_eq!(j["q_init"]["#"], "q_S");
    assert!(ResolutionStrategy::from_targets(&aut, &[("q_S", "H", "sink")]).is_err());
}

#[test]
fn investment_zero_regret_and_oracle() {
    let aut = common::investment();
    let cfg = Config::default();
    assert!(!zero_regret_word(&aut, &cfg).unwrap().answer);
    assert!(!zero_regret_word_exhaustive(&aut, &cfg).unwrap().answer);
    let v = ratio(38416, 10000);
    for d in 4..7 {
        assert_eq!(oracle_interval_word(&aut, d, &cfg).unwrap(), (v.clone(), v.clone()));
    }
    let (lo, hi) = oracle_interval_word(&aut, 1, &cfg).unwrap();
    assert!(lo <= v && v <= hi);
    assert!(oracle_interval_word(&aut, 0, &cfg).is_err());
}

#[test]
fn investment_epsilon_gap() {
    let aut = common::investment();
    let cfg = Config::default();
    let exact = ratio(9604, 2500);
    for eps in [ratio(1, 25), ratio(1, 100), int(1)] {
        assert!(epsilon_gap(&aut, &exact, &eps, &cfg).unwrap().answer);
    }
    let g = epsilon_gap(&aut, &ratio(19, 5), &ratio(1, 25), &cfg).unwrap();
    assert!(!g.answer);
    assert_eq!(g.value, exact);
    assert!(matches!(epsilon_gap(&aut, &int(1), &int(0), &cfg), Err(Error::Precondition(_))));
}

#[test]
fn epsilon_horizon_definition() {
    let aut = common::investment();
    let eps = ratio(1, 100);
    let n = epsilon_horizon(aut.max_weight(), aut.lambda(), &eps);
    let tail = |k: usize| aut.lambda().pow(k) * aut.max_weight() / aut.lambda().complement();
    assert!(tail(n) < &eps / int(4));
    assert!(tail(n - 1) >= &eps / int(4));
}

#[test]
fn deterministic_automata_have_zero_regret() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let cfg = Config::default();
    let mut checked = 0;
    while checked < 40 {
        let aut = common::random_automaton(&mut rng, 4, 3, 5, &ratio(1, 2));
        if !aut.is_deterministic() {
            continue;
        }
        checked += 1;
        let z = zero_regret_word(&aut, &cfg).unwrap();
        assert!(z.answer);
        assert_eq!(strategy_regret_word(&aut, &ResolutionStrategy::first(&aut)), int(0));
    }
}

#[test]
fn product_value_is_nonnegative_and_pruning_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let cfg = Config::default();
    let (mut yes, mut no) = (0, 0);
    for i in 0..150 {
        let aut = common::random_automaton(&mut rng, 4, 2, 5, &common::lambdas()[i % 3]);
        assert!(product_coop_value(&aut, &ResolutionStrategy::first(&aut)) >= int(0));
        let pruned = zero_regret_word(&aut, &cfg).unwrap();
        let full = zero_regret_word_exhaustive(&aut, &cfg).unwrap();
        assert_eq!(pruned.answer, full.answer);
        if let Some(w) = pruned.witness {
            assert_eq!(strategy_regret_word(&aut, &w), int(0));
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 10 && no >= 10, "{yes} {no}");
}

#[test]
fn exhaustive_respects_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let aut = common::random_automaton(&mut rng, 4, 3, 5, &ratio(1, 2));
    let cfg = Config { budget: 0, parallel: false };
    if !aut.is_deterministic() {
        assert!(matches!(zero_regret_word_exhaustive(&aut, &cfg), Err(Error::Budget { .. })));
    }
}

/// Best value of any run on `word` ending in each state, by enumerating runs.
fn brute_force_f(aut: &WeightedAutomaton, word: &[usize]) -> Vec<Option<Rational>> {
    let mut out = vec![None; aut.num_states()];
    let mut stack = vec![(aut.initial(), Vec::<Rational>::new())];
    while let Some((q, ws)) = stack.pop() {
        if ws.len() == word.len() {
            let v = discounted_sum(&ws, aut.lambda());
            if out[q].as_ref().is_none_or(|x: &Rational| v > *x) {
                out[q] = Some(v);
            }
            continue;
        }
        for &t in aut.successors(q, word[ws.len()]) {
            let tr = aut.transition(t);
            let mut w2 = ws.clone();
            w2.push(tr.weight.clone());
            stack.push((tr.to, w2));
        }
    }
    out
}

#[test]
fn subset_update_matches_run_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for i in 0..300 {
        let aut = common::random_automaton(&mut rng, 4, 3, 5, &common::lambdas()[i % 3]);
        let len = rng.gen_range(0..=6);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..aut.num_symbols())).collect();
        let mut s = SubsetState::initial(&aut);
        let mut eve = Vec::new();
        for (k, &a) in word.iter().enumerate() {
            let succ = aut.successors(s.q, a);
            let t = succ[rng.gen_range(0..succ.len())];
            eve.push(aut.transition(t).weight.clone());
            s = s.advance(&aut, a, t, &aut.lambda().pow(k));
        }
        assert_eq!(s.f, brute_force_f(&aut, &word));
        assert_eq!(s.c, discounted_sum(&eve, aut.lambda()));
        assert_eq!(s.step, len);
        assert!(s.best() >= s.c);
    }
}

#[test]
fn oracle_intervals_nest() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let cfg = Config::default();
    for i in 0..60 {
        let aut = common::random_automaton(&mut rng, 3, 2, 5, &common::lambdas()[i % 3]);
        let mut prev: Option<(Rational, Rational)> = None;
        for d in 1..=6 {
            let (lo, hi) = oracle_interval_word(&aut, d, &cfg).unwrap();
            assert!(lo <= hi && lo >= Rational::zero());
            if let Some((plo, phi)) = prev {
                assert!(plo <= lo && hi <= phi, "depth {d}");
            }
            prev = Some((lo, hi));
        }
    }
}

#[test]
fn epsilon_gap_sound_against_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let cfg = Config::default();
    for i in 0..60 {
        let aut = common::random_automaton(&mut rng, 3, 2, 3, &ratio(1, 2));
        let (lo, hi) = oracle_interval_word(&aut, 8, &cfg).unwrap();
        let eps = [ratio(1, 2), int(1)][i % 2].clone();
        let mid = (&lo + &hi) / int(2);
        for r in [&mid - &eps, mid.clone(), &mid + &eps, lo.clone(), hi.clone()] {
            let g = epsilon_gap(&aut, &r, &eps, &cfg).unwrap();
            if g.answer {
                assert!(lo <= &r + &eps);
            } else {
                assert!(hi > r);
            }
        }
    }
}

#[test]
fn parse_rejects_partial_automaton() {
    let e = parse_automaton("lambda 1/2\nalphabet a b\nstate p initial\ntrans p a p 0\n").unwrap_err();
    assert!(matches!(e, Error::NotTotal { .. }));
}
