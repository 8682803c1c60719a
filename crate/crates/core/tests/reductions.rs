mod common;

use dsregret::reductions::{
    aval_gadget, brute_force_sat, gen_2dp, gen_sat, has_disjoint_paths, parse_cnf, parse_graph, Cnf, Expected,
    Graph, SatEncoding,
};
use dsregret::rational::{int, ratio};
use dsregret::regret_all::{solve_regret_all, zero_regret_all};
use dsregret::regret_positional::{solve_regret_positional, zero_regret_positional};
use dsregret::regret_word::zero_regret_word;
use dsregret::values::antag_value;
use dsregret::{parse_arena, parse_automaton, Config, DiscountFactor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn half() -> DiscountFactor {
    DiscountFactor::new(ratio(1, 2)).unwrap()
}

#[test]
fn aval_gadget_on_bigmem() {
    let g = common::bigmem();
    let inst = aval_gadget(&g);
    assert_eq!(inst.expected, Expected::RegretAll(ratio(8919, 10)));
    let a = inst.arena().unwrap();
    assert_eq!(a.num_vertices(), g.num_vertices() + 4);
    assert_eq!(a.name(a.initial()), "gadget_init");
    assert!(!zero_regret_all(a).answer);
    assert!(inst.verify(&Config::default()).unwrap());
    assert_eq!(inst.sidecar()["expected"]["value"], "8919/10");
    assert_eq!(inst.provenance["K"], "1000");
    // the artifact text round-trips
    assert_eq!(&parse_arena(&inst.artifact.to_text()).unwrap(), a);
}

#[test]
fn aval_gadget_identity_on_random_arenas() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let cfg = Config::default();
    for i in 0..30 {
        let g = common::random_arena(&mut rng, 5, 5, 3, &common::lambdas()[i % 3]);
        let inst = aval_gadget(&g);
        let lambda = g.lambda().value();
        let k = g.max_weight() / g.lambda().complement();
        let want = lambda * (&k + int(1) - &antag_value(&g)[g.initial()]);
        assert_eq!(solve_regret_all(inst.arena().unwrap(), &cfg).unwrap().value, want);
    }
}

#[test]
fn graph_and_cnf_parsing() {
    let g = parse_graph("c two chains\np edge 4 2\ne 1 2\ne 3 4\n").unwrap();
    assert_eq!(g, Graph { n: 4, edges: vec![(0, 1), (2, 3)] });
    assert!(parse_graph("p edge 2 1\ne 1 3\n").is_err());
    assert!(parse_graph("e 1 2\n").is_err());
    let c = parse_cnf("c fig\np cnf 2 3\n1 2 0\n-1 2 0\n-1 -2 0\n").unwrap();
    assert_eq!(c, Cnf { vars: 2, clauses: vec![vec![1, 2], vec![-1, 2], vec![-1, -2]] });
    assert_eq!(brute_force_sat(&c), Some(vec![false, true]));
}

#[test]
fn two_chains_have_disjoint_paths() {
    let g = parse_graph("p edge 4 2\ne 1 2\ne 3 4\n").unwrap();
    assert!(has_disjoint_paths(&g, 0, 1, 2, 3));
    let inst = gen_2dp(&g, 0, 1, 2, 3, &half(), &int(1)).unwrap();
    assert_eq!(inst.expected, Expected::ZeroRegretPositional(false));
    assert_eq!(inst.provenance["disjoint_paths"], true);
    let a = inst.arena().unwrap();
    assert!(!zero_regret_positional(a, &Config::default()).unwrap().answer);
    assert!(solve_regret_positional(a, &Config::default()).unwrap().value > int(1));
    assert!(a.vertex("choose_v1_v2").is_some() && a.vertex("detour_v1_v2").is_some());
}

#[test]
fn shared_cut_vertex_blocks() {
    // every path passes through vertex 5
    let g = parse_graph("p edge 5 4\ne 1 5\ne 5 2\ne 3 5\ne 5 4\n").unwrap();
    assert!(!has_disjoint_paths(&g, 0, 1, 2, 3));
    let inst = gen_2dp(&g, 0, 1, 2, 3, &half(), &int(1)).unwrap();
    assert_eq!(inst.expected, Expected::ZeroRegretPositional(true));
    assert!(inst.verify(&Config::default()).unwrap());
}

#[test]
fn gen_2dp_preconditions_and_sinks() {
    let g = parse_graph("p edge 4 3\ne 1 2\ne 3 4\ne 2 1\n").unwrap();
    assert!(gen_2dp(&g, 0, 0, 2, 3, &half(), &int(1)).is_err());
    assert!(gen_2dp(&g, 1, 3, 2, 0, &half(), &int(1)).is_err());
    // t1 has an out-edge, so it gets a sink
    let inst = gen_2dp(&g, 0, 1, 2, 3, &half(), &int(1)).unwrap();
    let a = inst.arena().unwrap();
    assert!(a.vertex("t1_sink").is_some());
    assert!(inst.verify(&Config::default()).unwrap());
}

#[test]
fn gen_2dp_random_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let cfg = Config::default();
    let (mut yes, mut no) = (0, 0);
    for _ in 0..40 {
        let (g, t) = common::random_2dp(&mut rng, 7);
        let disjoint = common::disjoint_pair_exists(&g, t);
        assert_eq!(has_disjoint_paths(&g, t[0], t[1], t[2], t[3]), disjoint);
        let inst = gen_2dp(&g, t[0], t[1], t[2], t[3], &half(), &int(1)).unwrap();
        assert_eq!(inst.expected, Expected::ZeroRegretPositional(!disjoint));
        let a = inst.arena().unwrap();
        assert_eq!(zero_regret_positional(a, &cfg).unwrap().answer, !disjoint);
        if disjoint {
            no += 1;
        } else {
            yes += 1;
        }
    }
    assert!(yes >= 10 && no >= 10, "{yes} {no}");
}

fn three_clauses() -> Cnf {
    Cnf { vars: 2, clauses: vec![vec![1, 2], vec![-1, 2], vec![-1, -2]] }
}

#[test]
fn gen_sat_examples() {
    let cfg = Config::default();
    let one = Cnf { vars: 1, clauses: vec![vec![1]] };
    let contra = Cnf { vars: 1, clauses: vec![vec![1], vec![-1]] };
    for enc in [SatEncoding::AssignmentTree, SatEncoding::ValueChooser] {
        for (cnf, sat) in [(&one, true), (&contra, false)] {
            let inst = gen_sat(cnf, enc, &half()).unwrap();
            assert_eq!(inst.expected, Expected::ZeroRegretWord(sat));
            assert_eq!(zero_regret_word(inst.automaton().unwrap(), &cfg).unwrap().answer, sat, "{enc:?}");
        }
    }
    let inst = gen_sat(&three_clauses(), SatEncoding::AssignmentTree, &half()).unwrap();
    assert_eq!(inst.expected, Expected::ZeroRegretWord(true));
    assert!(inst.verify(&cfg).unwrap());
    let aut = inst.automaton().unwrap();
    assert_eq!(aut.num_symbols(), 5);
    assert_eq!(&parse_automaton(&inst.artifact.to_text()).unwrap(), aut);
    assert!(gen_sat(&Cnf { vars: 1, clauses: vec![] }, SatEncoding::ValueChooser, &half()).is_err());
}

#[test]
fn value_chooser_encoding_structure() {
    let inst = gen_sat(&three_clauses(), SatEncoding::ValueChooser, &half()).unwrap();
    let aut = inst.automaton().unwrap();
    for name in ["init", "left", "right", "bot0", "botZ", "bot1", "clause", "clause1", "clause1#", "q0", "x1", "x1true", "x2false"] {
        assert!(aut.state(name).is_some(), "{name}");
    }
    let q0 = aut.state("q0").unwrap();
    let c1 = aut.symbol("1").unwrap();
    let picks: Vec<usize> = aut.successors(q0, c1).iter().map(|&t| aut.transition(t).to).collect();
    assert_eq!(picks, vec![aut.state("x1").unwrap(), aut.state("x2").unwrap()]);
}

/// The value chooser as described lets an alternative run check a clause
/// other than the one that picked the variable; on this satisfiable formula
/// Eve cannot avoid regret.
#[test]
fn value_chooser_encoding_misjudges_three_clauses() {
    let inst = gen_sat(&three_clauses(), SatEncoding::ValueChooser, &half()).unwrap();
    assert_eq!(inst.expected, Expected::ZeroRegretWord(true));
    assert!(!zero_regret_word(inst.automaton().unwrap(), &Config::default()).unwrap().answer);
}

#[test]
fn gen_sat_random_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    let cfg = Config::default();
    let (mut sat, mut unsat) = (0, 0);
    while sat + unsat < 40 {
        let cnf = common::random_cnf(&mut rng, 6, 3);
        let s = common::satisfiable(&cnf);
        assert_eq!(brute_force_sat(&cnf).is_some(), s);
        let inst = gen_sat(&cnf, SatEncoding::AssignmentTree, &half()).unwrap();
        assert_eq!(inst.expected, Expected::ZeroRegretWord(s));
        assert_eq!(zero_regret_word(inst.automaton().unwrap(), &cfg).unwrap().answer, s);
        if s {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    assert!(unsat >= 1, "{sat} {unsat}");
}
