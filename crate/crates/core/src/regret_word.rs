//! Regret on weighted automata when Adam commits to a word in advance.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::arena::Player;
use crate::automaton::WeightedAutomaton;
use crate::error::Error;
use crate::game::GameGraph;
use crate::rational::{format_rational, DiscountFactor, Rational};
use crate::report::{Budget, Config, RegretReport, ReportValue};

/// One transition id for every `(state, symbol)` pair, indexed `q * |A| + a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionStrategy {
    pub choice: Vec<usize>,
}

impl ResolutionStrategy {
    /// Picks the first declared transition everywhere.
    pub fn first(aut: &WeightedAutomaton) -> Self {
        let k = aut.num_symbols();
        ResolutionStrategy {
            choice: (0..aut.num_states() * k).map(|i| aut.successors(i / k, i % k)[0]).collect(),
        }
    }

    /// Builds a strategy from `(state, symbol, target)` names; unlisted pairs
    /// take their first transition.
    pub fn from_targets(aut: &WeightedAutomaton, picks: &[(&str, &str, &str)]) -> Result<Self, Error> {
        let mut s = Self::first(aut);
        let k = aut.num_symbols();
        for (p, a, q) in picks {
            let p = aut.state(p).ok_or_else(|| Error::UnknownName(p.to_string()))?;
            let a = aut.symbol(a).ok_or_else(|| Error::UnknownName(a.to_string()))?;
            let q = aut.state(q).ok_or_else(|| Error::UnknownName(q.to_string()))?;
            let t = aut
                .successors(p, a)
                .iter()
                .copied()
                .find(|&t| aut.transition(t).to == q)
                .ok_or_else(|| Error::Precondition("no such transition".into()))?;
            s.choice[p * k + a] = t;
        }
        Ok(s)
    }

    pub fn get(&self, aut: &WeightedAutomaton, q: usize, a: usize) -> usize {
        self.choice[q * aut.num_symbols() + a]
    }

    /// `{"state": {"symbol": "target"}}`, listing nondeterministic pairs only.
    pub fn to_json(&self, aut: &WeightedAutomaton) -> Value {
        let mut out = Map::new();
        for q in 0..aut.num_states() {
            let mut inner = Map::new();
            for a in 0..aut.num_symbols() {
                if aut.successors(q, a).len() > 1 {
                    let t = aut.transition(self.get(aut, q, a));
                    inner.insert(aut.symbol_name(a).to_string(), json!(aut.state_name(t.to)));
                }
            }
            if !inner.is_empty() {
                out.insert(aut.state_name(q).to_string(), Value::Object(inner));
            }
        }
        Value::Object(out)
    }
}

/// Product of the automaton with itself where the second copy follows
/// `sigma` on resolved pairs. Unresolved pairs (`None`) lead to a terminal
/// worth `-2W/(1-lambda)` with the most favourable weight for `sigma`.
fn product_value(aut: &WeightedAutomaton, sigma: &[Option<usize>]) -> Rational {
    let n = aut.num_states();
    let k = aut.num_symbols();
    let lambda = aut.lambda();
    let start = aut.initial() * n + aut.initial();
    let terminal = n * n;
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut nodes = vec![start];
    index.insert(start, 0);
    let mut succ: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let id = nodes[i];
        let mut best: HashMap<usize, Rational> = HashMap::new();
        if id == terminal {
            let w = -(Rational::from_integer(2.into()) * aut.max_weight());
            best.insert(terminal, w);
        } else {
            let (p, pp) = (id / n, id % n);
            for a in 0..k {
                let (target_pp, wpp) = match sigma[pp * k + a] {
                    Some(t) => {
                        let tr = aut.transition(t);
                        (Some(tr.to), tr.weight.clone())
                    }
                    None => {
                        let w = aut
                            .successors(pp, a)
                            .iter()
                            .map(|&t| aut.transition(t).weight.clone())
                            .max()
                            .unwrap();
                        (None, w)
                    }
                };
                for &t in aut.successors(p, a) {
                    let tr = aut.transition(t);
                    let target = target_pp.map_or(terminal, |q| tr.to * n + q);
                    let w = &tr.weight - &wpp;
                    best.entry(target)
                        .and_modify(|x| {
                            if w > *x {
                                *x = w.clone()
                            }
                        })
                        .or_insert(w);
                }
            }
        }
        let mut out: Vec<(usize, Rational)> = best.into_iter().collect();
        out.sort_by_key(|(t, _)| *t);
        let mut edges = Vec::with_capacity(out.len());
        for (t, w) in out {
            let tid = match index.get(&t) {
                Some(&x) => x,
                None => {
                    nodes.push(t);
                    index.insert(t, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            edges.push((tid, w));
        }
        succ.push(edges);
        i += 1;
    }
    let g = GameGraph {
        owner: vec![Player::Eve; nodes.len()],
        succ,
        lambda: lambda.value().clone(),
    };
    g.coop_values()[0].clone()
}

/// `cVal` from `(q_I, q_I)` of the product with `sigma`: the largest gain of
/// any run over `sigma`'s run on the same word.
pub fn product_coop_value(aut: &WeightedAutomaton, sigma: &ResolutionStrategy) -> Rational {
    let s: Vec<Option<usize>> = sigma.choice.iter().map(|&t| Some(t)).collect();
    product_value(aut, &s)
}

pub fn strategy_regret_word(aut: &WeightedAutomaton, sigma: &ResolutionStrategy) -> Rational {
    let v = product_coop_value(aut, sigma);
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRegretWord {
    pub answer: bool,
    pub witness: Option<ResolutionStrategy>,
    pub nodes: u64,
}

/// Pairs `(state, symbol)` reachable from the initial state under the
/// resolved part of `sigma`, in canonical order, split into resolved and not.
fn unresolved_reachable(aut: &WeightedAutomaton, sigma: &[Option<usize>]) -> Option<usize> {
    let n = aut.num_states();
    let k = aut.num_symbols();
    let mut seen = vec![false; n];
    let mut stack = vec![aut.initial()];
    seen[aut.initial()] = true;
    let mut first: Option<usize> = None;
    while let Some(q) = stack.pop() {
        for a in 0..k {
            match sigma[q * k + a] {
                Some(t) => {
                    let to = aut.transition(t).to;
                    if !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
                None => {
                    let pair = q * k + a;
                    first = Some(first.map_or(pair, |f| f.min(pair)));
                }
            }
        }
    }
    first
}

/// Decides whether some positional resolution has regret 0, by a depth-first
/// search over resolutions of the pairs reachable under the partial choice,
/// pruned by a lower bound on the regret of every completion.
pub fn zero_regret_word(aut: &WeightedAutomaton, cfg: &Config) -> Result<ZeroRegretWord, Error> {
    let k = aut.num_symbols();
    let mut sigma: Vec<Option<usize>> = (0..aut.num_states() * k)
        .map(|i| {
            let s = aut.successors(i / k, i % k);
            (s.len() == 1).then_some(s[0])
        })
        .collect();
    let budget = Budget::new(cfg.budget);
    let found = dfs(aut, &mut sigma, &budget, 0)?;
    let witness = found.map(|s| ResolutionStrategy {
        choice: s
            .iter()
            .enumerate()
            .map(|(i, t)| t.unwrap_or_else(|| aut.successors(i / k, i % k)[0]))
            .collect(),
    });
    Ok(ZeroRegretWord {
        answer: witness.is_some(),
        witness,
        nodes: budget.used(),
    })
}

fn dfs(
    aut: &WeightedAutomaton,
    sigma: &mut Vec<Option<usize>>,
    budget: &Budget,
    depth: usize,
) -> Result<Option<Vec<Option<usize>>>, Error> {
    budget.charge(1, depth)?;
    if product_value(aut, sigma).is_positive() {
        return Ok(None);
    }
    let Some(pair) = unresolved_reachable(aut, sigma) else {
        // Every reachable pair is resolved and the regret is not positive.
        return Ok(Some(sigma.clone()));
    };
    let k = aut.num_symbols();
    for &t in aut.successors(pair / k, pair % k) {
        sigma[pair] = Some(t);
        if let Some(w) = dfs(aut, sigma, budget, depth + 1)? {
            return Ok(Some(w));
        }
    }
    sigma[pair] = None;
    Ok(None)
}

/// Exhaustive enumeration of all resolutions in canonical order; returns the
/// first regret-free one. For cross-checking the pruned search.
pub fn zero_regret_word_exhaustive(aut: &WeightedAutomaton, cfg: &Config) -> Result<ZeroRegretWord, Error> {
    let k = aut.num_symbols();
    let pairs = aut.num_states() * k;
    let degrees: Vec<usize> = (0..pairs).map(|i| aut.successors(i / k, i % k).len()).collect();
    let total = degrees.iter().fold(1u64, |acc, &d| acc.saturating_mul(d as u64));
    if total > cfg.budget {
        return Err(Error::Budget {
            limit: cfg.budget,
            depth: 0,
        });
    }
    let mut digits = vec![0usize; pairs];
    let mut nodes = 0;
    loop {
        nodes += 1;
        let sigma = ResolutionStrategy {
            choice: (0..pairs).map(|i| aut.successors(i / k, i % k)[digits[i]]).collect(),
        };
        if strategy_regret_word(aut, &sigma).is_zero() {
            return Ok(ZeroRegretWord {
                answer: true,
                witness: Some(sigma),
                nodes,
            });
        }
        // Increment with the last pair least significant.
        let mut i = pairs;
        loop {
            if i == 0 {
                return Ok(ZeroRegretWord {
                    answer: false,
                    witness: None,
                    nodes,
                });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < degrees[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Eve's position in the subset construction: her run state `q`, the best
/// discounted value `f(s)` of any run ending in `s`, her own value `c` and
/// the number of symbols read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetState {
    pub q: usize,
    pub f: Vec<Option<Rational>>,
    pub c: Rational,
    pub step: usize,
}

impl SubsetState {
    pub fn initial(aut: &WeightedAutomaton) -> Self {
        let mut f = vec![None; aut.num_states()];
        f[aut.initial()] = Some(Rational::zero());
        SubsetState {
            q: aut.initial(),
            f,
            c: Rational::zero(),
            step: 0,
        }
    }

    /// Reads `a`, with Eve taking transition `t` (which must leave `q` on `a`).
    pub fn advance(&self, aut: &WeightedAutomaton, a: usize, t: usize, power: &Rational) -> Self {
        let tr = aut.transition(t);
        debug_assert!(tr.from == self.q && tr.symbol == a);
        SubsetState {
            q: tr.to,
            f: advance_map(aut, &self.f, a, power),
            c: &self.c + power * &tr.weight,
            step: self.step + 1,
        }
    }

    /// Largest value among all runs on the word read so far.
    pub fn best(&self) -> Rational {
        self.f.iter().flatten().max().cloned().unwrap()
    }
}

fn advance_map(aut: &WeightedAutomaton, f: &[Option<Rational>], a: usize, power: &Rational) -> Vec<Option<Rational>> {
    let mut out: Vec<Option<Rational>> = vec![None; f.len()];
    for (s, val) in f.iter().enumerate() {
        let Some(val) = val else { continue };
        for &t in aut.successors(s, a) {
            let tr = aut.transition(t);
            let x = val + power * &tr.weight;
            if out[tr.to].as_ref().is_none_or(|y| x > *y) {
                out[tr.to] = Some(x);
            }
        }
    }
    out
}

/// Per-state bound `max |w| / (1 - lambda)` over transitions reachable from the state.
fn tail_bounds(aut: &WeightedAutomaton) -> Vec<Rational> {
    let n = aut.num_states();
    let k = aut.num_symbols();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            let mut m = Rational::zero();
            while let Some(q) = stack.pop() {
                for a in 0..k {
                    for &t in aut.successors(q, a) {
                        let tr = aut.transition(t);
                        if tr.weight.abs() > m {
                            m = tr.weight.abs();
                        }
                        if !seen[tr.to] {
                            seen[tr.to] = true;
                            stack.push(tr.to);
                        }
                    }
                }
            }
            m / aut.lambda().complement()
        })
        .collect()
}

/// Least `N` with `lambda^N W / (1 - lambda) < epsilon / 4`.
pub fn epsilon_horizon(w: &Rational, lambda: &DiscountFactor, epsilon: &Rational) -> usize {
    let target = epsilon / Rational::from_integer(4.into());
    let mut lhs = w / lambda.complement();
    let mut n = 0;
    while lhs >= target {
        lhs *= lambda.value();
        n += 1;
    }
    n
}

/// Normalized memo key: Eve's state, `f - c` and the step.
type GapKey = (usize, Vec<Option<Rational>>, usize);

struct WordSearch<'a> {
    aut: &'a WeightedAutomaton,
    powers: Vec<Rational>,
    bounds: Vec<Rational>,
    zero_tail: Vec<bool>,
    budget: Budget,
    memo: HashMap<GapKey, (Rational, Rational)>,
}

impl<'a> WordSearch<'a> {
    fn new(aut: &'a WeightedAutomaton, depth: usize, cfg: &Config) -> Self {
        let bounds = tail_bounds(aut);
        WordSearch {
            aut,
            powers: aut.lambda().powers(depth),
            zero_tail: bounds.iter().map(Rational::is_zero).collect(),
            bounds,
            budget: Budget::new(cfg.budget),
            memo: HashMap::new(),
        }
    }

    /// Bounds on `sup_word (best - eve)` from a node where `g = f - c`.
    fn leaf(&self, q: usize, g: &[Option<Rational>], step: usize) -> (Rational, Rational) {
        let p = &self.powers[step];
        let eve = p * &self.bounds[q];
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (s, x) in g.iter().enumerate() {
            let Some(x) = x else { continue };
            let r = p * &self.bounds[s];
            let l = x - &r;
            let h = x + &r;
            if lo.as_ref().is_none_or(|y| l > *y) {
                lo = Some(l);
            }
            if hi.as_ref().is_none_or(|y| h > *y) {
                hi = Some(h);
            }
        }
        let lo = (lo.unwrap() - &eve).max(Rational::zero());
        (lo, hi.unwrap() + eve)
    }

    fn settled(&self, q: usize, g: &[Option<Rational>]) -> bool {
        self.zero_tail[q] && g.iter().enumerate().all(|(s, x)| x.is_none() || self.zero_tail[s])
    }

    /// Min-max over the tree cut at `depth`: Adam picks symbols, Eve transitions.
    fn solve(&mut self, q: usize, g: Vec<Option<Rational>>, step: usize, depth: usize) -> Result<(Rational, Rational), Error> {
        if step == depth || self.settled(q, &g) {
            return Ok(self.leaf(q, &g, step));
        }
        let key = (q, g, step);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.budget.charge(1, step)?;
        let (q, g, _) = &key;
        let aut = self.aut;
        let p = self.powers[step].clone();
        let mut adam: Option<(Rational, Rational)> = None;
        for a in 0..aut.num_symbols() {
            let moved = advance_map(aut, g, a, &p);
            let mut eve: Option<(Rational, Rational)> = None;
            for &t in aut.successors(*q, a) {
                let tr = aut.transition(t);
                let shift = &p * &tr.weight;
                let g2: Vec<Option<Rational>> = moved.iter().map(|x| x.as_ref().map(|x| x - &shift)).collect();
                let (lo, hi) = self.solve(tr.to, g2, step + 1, depth)?;
                eve = Some(match eve {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.min(hi)),
                });
            }
            let (lo, hi) = eve.unwrap();
            adam = Some(match adam {
                None => (lo, hi),
                Some((a, b)) => (a.max(lo), b.max(hi)),
            });
        }
        let v = adam.unwrap();
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// Certified bounds on the regret of the best (arbitrary) Eve strategy
/// against word strategies, from the tree cut at `depth`.
pub fn oracle_interval_word(aut: &WeightedAutomaton, depth: usize, cfg: &Config) -> Result<(Rational, Rational), Error> {
    if depth == 0 {
        return Err(Error::Precondition("oracle depth must be at least 1".into()));
    }
    let mut search = WordSearch::new(aut, depth, cfg);
    let start = SubsetState::initial(aut);
    search.solve(start.q, start.f, 0, depth)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonGap {
    pub answer: bool,
    pub horizon: usize,
    /// Min-max value of the truncated game: the largest gap Eve cannot avoid.
    pub value: Rational,
    pub nodes: u64,
}

/// The promise problem: YES implies regret at most `r + epsilon`, NO implies
/// regret greater than `r`.
pub fn epsilon_gap(aut: &WeightedAutomaton, r: &Rational, epsilon: &Rational, cfg: &Config) -> Result<EpsilonGap, Error> {
    if !epsilon.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let n = if aut.max_weight().is_zero() {
        0
    } else {
        epsilon_horizon(aut.max_weight(), aut.lambda(), epsilon)
    };
    let mut search = WordSearch::new(aut, n, cfg);
    // At the horizon the leaf is the current gap `max g`.
    search.bounds = vec![Rational::zero(); aut.num_states()];
    let start = SubsetState::initial(aut);
    let (value, _) = search.solve(start.q, start.f, 0, n)?;
    let half = epsilon / Rational::from_integer(2.into());
    Ok(EpsilonGap {
        answer: value <= r + half,
        horizon: n,
        value,
        nodes: search.budget.used(),
    })
}

pub fn zero_regret_word_report(aut: &WeightedAutomaton, cfg: &Config) -> Result<RegretReport, Error> {
    let z = zero_regret_word(aut, cfg)?;
    let mut r = RegretReport::new("word", ReportValue::Answer(z.answer));
    r.witness = z.witness.as_ref().map(|w| w.to_json(aut));
    r.nodes = z.nodes;
    Ok(r)
}

pub fn epsilon_gap_report(aut: &WeightedAutomaton, r: &Rational, epsilon: &Rational, cfg: &Config) -> Result<RegretReport, Error> {
    let e = epsilon_gap(aut, r, epsilon, cfg)?;
    let mut rep = RegretReport::new("epsilon-gap", ReportValue::Answer(e.answer));
    rep.horizon = Some(e.horizon);
    rep.nodes = e.nodes;
    rep.extra.insert("game_value".into(), json!(format_rational(&e.value)));
    rep.extra.insert("verdict".into(), json!(if e.answer { "YES" } else { "NO" }));
    Ok(rep)
}
