#![allow(dead_code)]

use std::path::PathBuf;

use dsregret::arena::Player;
use dsregret::rational::{int, ratio};
use dsregret::{parse_arena, parse_automaton, DiscountFactor, Rational, WeightedArena, WeightedAutomaton};
use dsregret::values::{coop_value_excluding, ValueTable};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn bigmem() -> WeightedArena {
    parse_arena(&std::fs::read_to_string(fixture("bigmem.arena")).unwrap()).unwrap()
}

pub fn investment() -> WeightedAutomaton {
    parse_automaton(&std::fs::read_to_string(fixture("investment.aut")).unwrap()).unwrap()
}

pub fn lambdas() -> [Rational; 3] {
    [ratio(1, 2), ratio(2, 3), ratio(9, 10)]
}

/// Random valid arena: `2..=max_n` vertices, integer weights in `[-wmax, wmax]`.
/// Adam vertices get out-degree at most `adam_deg`.
pub fn random_arena<R: Rng>(rng: &mut R, max_n: usize, wmax: i64, adam_deg: usize, lambda: &Rational) -> WeightedArena {
    let n = rng.gen_range(2..=max_n);
    let owners: Vec<Player> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam })
        .collect();
    let mut edges = Vec::new();
    for (u, owner) in owners.iter().enumerate() {
        let (lo, hi) = match owner {
            Player::Eve => (2, 3.min(n)),
            Player::Adam => (1, adam_deg.min(n)),
        };
        let deg = rng.gen_range(lo..=hi);
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        for &t in &targets[..deg] {
            edges.push((u, t, int(rng.gen_range(-wmax..=wmax))));
        }
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    WeightedArena::new(names, owners, edges, 0, DiscountFactor::new(lambda.clone()).unwrap()).unwrap()
}

/// Random total automaton with up to `max_states` states and `max_symbols` symbols.
pub fn random_automaton<R: Rng>(rng: &mut R, max_states: usize, max_symbols: usize, wmax: i64, lambda: &Rational) -> WeightedAutomaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_symbols);
    let mut trans = Vec::new();
    for p in 0..n {
        for a in 0..k {
            let deg = rng.gen_range(1..=2.min(n));
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(rng);
            for &q in &targets[..deg] {
                trans.push((p, a, q, int(rng.gen_range(-wmax..=wmax))));
            }
        }
    }
    build_automaton(n, k, trans, lambda)
}

/// Random automaton whose runs all reach a zero-weight sink after `layers` steps.
pub fn layered_automaton<R: Rng>(rng: &mut R, layers: usize, width: usize, symbols: usize, wmax: i64, lambda: &Rational) -> WeightedAutomaton {
    let state = |l: usize, i: usize| if l == 0 { 0 } else { 1 + (l - 1) * width + i };
    let sink = 1 + (layers - 1) * width;
    let n = sink + 1;
    let mut trans = Vec::new();
    for l in 0..layers {
        let here = if l == 0 { 1 } else { width };
        for i in 0..here {
            let p = state(l, i);
            for a in 0..symbols {
                if l + 1 == layers {
                    trans.push((p, a, sink, int(rng.gen_range(-wmax..=wmax))));
                    continue;
                }
                let deg = rng.gen_range(1..=2.min(width));
                let mut targets: Vec<usize> = (0..width).collect();
                targets.shuffle(rng);
                for &j in &targets[..deg] {
                    trans.push((p, a, state(l + 1, j), int(rng.gen_range(-wmax..=wmax))));
                }
            }
        }
    }
    for a in 0..symbols {
        trans.push((sink, a, sink, int(0)));
    }
    build_automaton(n, symbols, trans, lambda)
}

fn build_automaton(n: usize, k: usize, trans: Vec<(usize, usize, usize, Rational)>, lambda: &Rational) -> WeightedAutomaton {
    WeightedAutomaton::new(
        (0..n).map(|i| format!("q{i}")).collect(),
        0,
        (0..k).map(|i| format!("s{i}")).collect(),
        trans,
        DiscountFactor::new(lambda.clone()).unwrap(),
    )
    .unwrap()
}

/// Number of positional profiles (product of out-degrees over all vertices).
pub fn profiles(a: &WeightedArena) -> u64 {
    (0..a.num_vertices()).map(|v| a.out_degree(v) as u64).product()
}

/// Value from `start` of the play where every vertex `v` moves to `next[v]`,
/// evaluated as a lasso.
pub fn play_value(a: &WeightedArena, next: &[usize], start: usize) -> Rational {
    let mut seen = vec![None; a.num_vertices()];
    let mut weights = Vec::new();
    let mut v = start;
    while seen[v].is_none() {
        seen[v] = Some(weights.len());
        weights.push(a.weight(v, next[v]).unwrap().clone());
        v = next[v];
    }
    let k = seen[v].unwrap();
    dsregret::payoff::lasso_value(&weights[..k], &weights[k..], a.lambda())
}

/// All positional choices of the vertices in `owned` (others fixed to `base`).
pub fn choices(a: &WeightedArena, owned: &[usize], base: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![base.to_vec()];
    for &v in owned {
        let targets: Vec<usize> = a.out_edges(v).iter().map(|&e| a.edge(e).target).collect();
        out = out
            .into_iter()
            .flat_map(|c| {
                targets.iter().map(move |&t| {
                    let mut c = c.clone();
                    c[v] = t;
                    c
                })
            })
            .collect();
    }
    out
}

/// First successor of every vertex.
pub fn first_choice(a: &WeightedArena) -> Vec<usize> {
    (0..a.num_vertices()).map(|v| a.edge(a.out_edges(v)[0]).target).collect()
}

pub fn owned_by(a: &WeightedArena, p: Player) -> Vec<usize> {
    (0..a.num_vertices()).filter(|&v| a.owner(v) == p).collect()
}

/// A random directed graph on `4..=max_n` vertices with four distinct
/// terminals `(s1, t1, s2, t2)` such that each target is reachable.
pub fn random_2dp<R: Rng>(rng: &mut R, max_n: usize) -> (dsregret::reductions::Graph, [usize; 4]) {
    loop {
        let n = rng.gen_range(4..=max_n);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
        let mut ends: Vec<usize> = (0..n).collect();
        ends.shuffle(rng);
        let g = dsregret::reductions::Graph { n, edges };
        let t = [ends[0], ends[1], ends[2], ends[3]];
        if !simple_paths(&g, t[0], t[1]).is_empty() && !simple_paths(&g, t[2], t[3]).is_empty() {
            return (g, t);
        }
    }
}

/// Vertex sets of all simple paths from `s` to `t`.
pub fn simple_paths(g: &dsregret::reductions::Graph, s: usize, t: usize) -> Vec<Vec<bool>> {
    fn go(g: &dsregret::reductions::Graph, v: usize, t: usize, on: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if v == t {
            out.push(on.clone());
            return;
        }
        for &(a, b) in &g.edges {
            if a == v && !on[b] {
                on[b] = true;
                go(g, b, t, on, out);
                on[b] = false;
            }
        }
    }
    let mut on = vec![false; g.n];
    on[s] = true;
    let mut out = Vec::new();
    go(g, s, t, &mut on, &mut out);
    out
}

/// Independent check: some pair of simple paths shares no vertex.
pub fn disjoint_pair_exists(g: &dsregret::reductions::Graph, t: [usize; 4]) -> bool {
    let p1 = simple_paths(g, t[0], t[1]);
    let p2 = simple_paths(g, t[2], t[3]);
    p1.iter().any(|a| p2.iter().any(|b| a.iter().zip(b).all(|(x, y)| !(*x && *y))))
}

/// Random 3-CNF with `1..=max_m` clauses over `1..=max_n` variables.
pub fn random_cnf<R: Rng>(rng: &mut R, max_m: usize, max_n: usize) -> dsregret::reductions::Cnf {
    let vars = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let clauses = (0..m)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let v = rng.gen_range(1..=vars) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    dsregret::reductions::Cnf { vars, clauses }
}

/// Satisfiability by trying every assignment.
pub fn satisfiable(cnf: &dsregret::reductions::Cnf) -> bool {
    (0u32..1 << cnf.vars).any(|bits| {
        cnf.clauses
            .iter()
            .all(|c| c.iter().any(|&l| ((bits >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0)))
    })
}

/// Definitional leaf: prefix regret recomputed from scratch, minus the discounted aVal tail.
fn oracle_leaf(a: &WeightedArena, vals: &ValueTable, vs: &[usize]) -> Rational {
    let lambda = a.lambda();
    let n = vs.len() - 1;
    let disc = |i: usize| -> Rational {
        (i..n).map(|k| lambda.pow(k - i) * a.weight(vs[k], vs[k + 1]).unwrap()).sum()
    };
    let mut best = Rational::from_integer(0.into());
    for i in 0..n {
        if a.is_eve(vs[i]) {
            let c = lambda.pow(i) * (coop_value_excluding(a, vals, vs[i], vs[i + 1]).unwrap() - disc(i));
            if c > best {
                best = c;
            }
        }
    }
    best - lambda.pow(n) * &vals.aval[vs[n]]
}

fn minmax_rec(a: &WeightedArena, vals: &ValueTable, vs: &mut Vec<usize>, depth: usize) -> Rational {
    if vs.len() == depth + 1 {
        return oracle_leaf(a, vals, vs);
    }
    let v = *vs.last().unwrap();
    let mut out: Option<Rational> = None;
    for &e in a.out_edges(v) {
        vs.push(a.edge(e).target);
        let r = minmax_rec(a, vals, vs, depth);
        vs.pop();
        let better = match &out {
            None => true,
            Some(o) if a.is_eve(v) => r < *o,
            Some(o) => r > *o,
        };
        if better {
            out = Some(r);
        }
    }
    out.unwrap()
}

/// Min-max over raw prefixes of length `depth`, recomputing the prefix regret at every leaf.
pub fn naive_oracle(a: &WeightedArena, vals: &ValueTable, depth: usize) -> Rational {
    minmax_rec(a, vals, &mut vec![a.initial()], depth)
}
