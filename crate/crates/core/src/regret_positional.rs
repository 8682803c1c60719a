//! Regret against positional strategies of Adam.
//!
//! Adam's positional choices are revealed to Eve as the play visits his
//! vertices. A knowledge set records the choices seen so far; the strategies
//! consistent with it are enumerated explicitly, which is feasible for the
//! small arenas this module targets.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arena::{Player, PlayPrefix, WeightedArena};
use crate::error::Error;
use crate::game::GameGraph;
use crate::rational::Rational;
use crate::regret_all::horizon_n;
use crate::report::{Budget, Config, RegretReport, ReportValue};
use crate::safety::{SafetyGame, SafetySolution};
use crate::values::{PositionalStrategy, ValueTable};

/// Adam's revealed choices, indexed by vertex. Only Adam vertices with at
/// least two successors are ever set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Knowledge(pub Vec<Option<usize>>);

impl Knowledge {
    pub fn empty(n: usize) -> Self {
        Knowledge(vec![None; n])
    }

    pub fn revealed(&self, v: usize) -> Option<usize> {
        self.0[v]
    }

    pub fn with(&self, v: usize, t: usize) -> Self {
        let mut k = self.clone();
        k.0[v] = Some(t);
        k
    }

    /// The allowed edge set: every edge except the unchosen ones at revealed vertices.
    pub fn allowed_edges(&self, arena: &WeightedArena) -> Vec<usize> {
        (0..arena.num_edges())
            .filter(|&e| {
                let edge = arena.edge(e);
                self.0[edge.source].is_none_or(|t| t == edge.target)
            })
            .collect()
    }

    pub fn to_json(&self, arena: &WeightedArena) -> Value {
        Value::Array(
            self.0
                .iter()
                .enumerate()
                .filter_map(|(v, t)| t.map(|t| json!([arena.name(v), arena.name(t)])))
                .collect(),
        )
    }
}

/// A vertex of the knowledge arena.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnowledgeState {
    pub vertex: usize,
    pub knowledge: Knowledge,
}

/// `E_forall(prefix)`: edges consistent with every positional Adam strategy
/// that could have produced the prefix.
pub fn allowed_edges(arena: &WeightedArena, prefix: &PlayPrefix) -> Vec<usize> {
    knowledge_of(arena, prefix.vertices()).allowed_edges(arena)
}

fn knowledge_of(arena: &WeightedArena, vs: &[usize]) -> Knowledge {
    let mut k = Knowledge::empty(arena.num_vertices());
    for w in vs.windows(2) {
        if !arena.is_eve(w[0]) && arena.out_degree(w[0]) >= 2 {
            k.0[w[0]] = Some(w[1]);
        }
    }
    k
}

/// Positional Adam strategies with their co-operative value tables.
#[derive(Clone, Debug)]
pub struct PositionalContext<'a> {
    pub arena: &'a WeightedArena,
    pub values: ValueTable,
    /// `taus[k][v]`: successor chosen at Adam vertex `v` (unused for Eve).
    pub taus: Vec<Vec<usize>>,
    /// `cvals[k][v]`: `cVal^v` of the arena with Adam fixed to `taus[k]`.
    pub cvals: Vec<Vec<Rational>>,
}

impl<'a> PositionalContext<'a> {
    pub fn new(arena: &'a WeightedArena, budget: u64) -> Result<Self, Error> {
        let n = arena.num_vertices();
        let adam: Vec<usize> = (0..n).filter(|&v| !arena.is_eve(v)).collect();
        let mut count: u64 = 1;
        for &v in &adam {
            count = count.saturating_mul(arena.out_degree(v) as u64);
        }
        if count > budget {
            return Err(Error::Budget { limit: budget, depth: 0 });
        }
        let mut taus = Vec::with_capacity(count as usize);
        let mut cur = vec![0usize; n];
        enumerate_taus(arena, &adam, 0, &mut cur, &mut taus);
        let base = GameGraph::from_arena(arena);
        let cvals = taus
            .iter()
            .map(|tau| {
                let mut g = base.clone();
                for &v in &adam {
                    g.succ[v].retain(|(t, _)| *t == tau[v]);
                }
                g.coop_values()
            })
            .collect();
        Ok(PositionalContext {
            arena,
            values: ValueTable::compute(arena),
            taus,
            cvals,
        })
    }

    pub fn consistent(&self, k: usize, c: &Knowledge) -> bool {
        c.0.iter().enumerate().all(|(v, t)| t.is_none_or(|t| self.taus[k][v] == t))
    }

    /// Indices of strategies consistent with `c`.
    pub fn strategies(&self, c: &Knowledge) -> Vec<usize> {
        (0..self.taus.len()).filter(|&k| self.consistent(k, c)).collect()
    }

    /// `cVal^u` excluding successor `v`, in the arena fixed by strategy `k`.
    pub fn excluded(&self, k: usize, u: usize, v: usize) -> Rational {
        let lambda = self.arena.lambda().value();
        self.arena
            .out_edges(u)
            .iter()
            .map(|&e| self.arena.edge(e))
            .filter(|e| e.target != v)
            .map(|e| &e.weight + lambda * &self.cvals[k][e.target])
            .max()
            .expect("Eve vertices have two successors")
    }

    /// `cVal_excl(u,v) - w(u,v) - lambda cVal^v` under strategy `k`.
    pub fn gap(&self, k: usize, u: usize, v: usize) -> Rational {
        let w = self.arena.weight(u, v).unwrap();
        self.excluded(k, u, v) - w - self.arena.lambda().value() * &self.cvals[k][v]
    }

    /// Some consistent strategy makes the Eve move `u -> v` strictly suboptimal.
    pub fn is_bad(&self, u: usize, c: &Knowledge, v: usize) -> bool {
        self.strategies(c).into_iter().any(|k| self.gap(k, u, v).is_positive())
    }

    pub fn strategy_json(&self, k: usize) -> Value {
        let choice = (0..self.arena.num_vertices())
            .map(|v| (!self.arena.is_eve(v)).then_some(self.taus[k][v]))
            .collect();
        PositionalStrategy {
            owner: Player::Adam,
            choice,
        }
        .to_json(self.arena)
    }

    /// Successor knowledge states of `(v, c)`.
    pub fn successors(&self, v: usize, c: &Knowledge) -> Vec<(usize, Knowledge)> {
        let arena = self.arena;
        let targets = arena.out_edges(v).iter().map(|&e| arena.edge(e).target);
        if arena.is_eve(v) || arena.out_degree(v) < 2 {
            return targets.map(|t| (t, c.clone())).collect();
        }
        match c.revealed(v) {
            Some(t) => vec![(t, c.clone())],
            None => targets.map(|t| (t, c.with(v, t))).collect(),
        }
    }
}

fn enumerate_taus(arena: &WeightedArena, adam: &[usize], i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == adam.len() {
        out.push(cur.clone());
        return;
    }
    let v = adam[i];
    for &e in arena.out_edges(v) {
        cur[v] = arena.edge(e).target;
        enumerate_taus(arena, adam, i + 1, cur, out);
    }
}

/// Whether the Eve knowledge edge `(u, C) -> (v, C)` is bad.
pub fn knowledge_bad_edge(arena: &WeightedArena, from: &KnowledgeState, to: &KnowledgeState) -> Result<bool, Error> {
    if !arena.is_eve(from.vertex) || from.knowledge != to.knowledge {
        return Err(Error::Precondition("not an Eve edge of the knowledge arena".into()));
    }
    if arena.edge_between(from.vertex, to.vertex).is_none() {
        return Err(Error::Precondition("no such edge".into()));
    }
    let ctx = PositionalContext::new(arena, crate::report::DEFAULT_BUDGET)?;
    Ok(ctx.is_bad(from.vertex, &from.knowledge, to.vertex))
}

/// The reachable knowledge arena with its bad Eve edges.
#[derive(Clone, Debug)]
pub struct KnowledgeArena {
    pub states: Vec<KnowledgeState>,
    pub game: SafetyGame,
    /// For each bad edge `(state, successor index)`, the least positive gap.
    pub bad_gaps: Vec<(usize, usize, Rational)>,
}

pub fn knowledge_arena(ctx: &PositionalContext, budget: u64) -> Result<KnowledgeArena, Error> {
    let arena = ctx.arena;
    let n = arena.num_vertices();
    let start = KnowledgeState {
        vertex: arena.initial(),
        knowledge: Knowledge::empty(n),
    };
    let mut index: HashMap<KnowledgeState, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    index.insert(start, 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let b = Budget::new(budget);
    while let Some(s) = queue.pop_front() {
        b.charge(1, 0)?;
        let st = states[s].clone();
        let mut out = Vec::new();
        for (t, c) in ctx.successors(st.vertex, &st.knowledge) {
            let key = KnowledgeState { vertex: t, knowledge: c };
            let id = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            out.push(id);
        }
        if succ.len() <= s {
            succ.resize(s + 1, Vec::new());
        }
        succ[s] = out;
    }
    succ.resize(states.len(), Vec::new());
    let mut bad = Vec::with_capacity(states.len());
    let mut bad_gaps = Vec::new();
    for (s, st) in states.iter().enumerate() {
        let u = st.vertex;
        let flags: Vec<bool> = succ[s]
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                if !arena.is_eve(u) {
                    return false;
                }
                let v = states[t].vertex;
                let witness = ctx
                    .strategies(&st.knowledge)
                    .into_iter()
                    .map(|k| ctx.gap(k, u, v))
                    .filter(|g| g.is_positive())
                    .min();
                if let Some(g) = witness {
                    bad_gaps.push((s, i, g));
                    true
                } else {
                    false
                }
            })
            .collect();
        bad.push(flags);
    }
    let game = SafetyGame {
        owner: states.iter().map(|s| arena.owner(s.vertex)).collect(),
        succ,
        bad,
        initial: 0,
    };
    Ok(KnowledgeArena { states, game, bad_gaps })
}

#[derive(Clone, Debug)]
pub struct ZeroRegretPositional {
    pub answer: bool,
    pub arena: KnowledgeArena,
    pub solution: SafetySolution,
}

impl ZeroRegretPositional {
    /// Eve's knowledge-based strategy (when she wins) or Adam's forcing
    /// strategy, as a list of `{vertex, knowledge, target}` entries.
    pub fn witness_json(&self, arena: &WeightedArena) -> Value {
        let ka = &self.arena;
        let strat = if self.answer {
            &self.solution.eve_strategy
        } else {
            &self.solution.adam_strategy
        };
        let entries: Vec<Value> = strat
            .iter()
            .enumerate()
            .filter_map(|(s, c)| {
                let i = (*c)?;
                let st = &ka.states[s];
                Some(json!({
                    "vertex": arena.name(st.vertex),
                    "knowledge": st.knowledge.to_json(arena),
                    "target": arena.name(ka.states[ka.game.succ[s][i]].vertex),
                }))
            })
            .collect();
        json!({
            "kind": "knowledge",
            "owner": if self.answer { "eve" } else { "adam" },
            "moves": entries,
        })
    }
}

pub fn zero_regret_positional(arena: &WeightedArena, cfg: &Config) -> Result<ZeroRegretPositional, Error> {
    let ctx = PositionalContext::new(arena, cfg.budget)?;
    zero_with(&ctx, cfg)
}

fn zero_with(ctx: &PositionalContext, cfg: &Config) -> Result<ZeroRegretPositional, Error> {
    let ka = knowledge_arena(ctx, cfg.budget)?;
    let solution = ka.game.solve();
    Ok(ZeroRegretPositional {
        answer: solution.winner == Player::Eve,
        arena: ka,
        solution,
    })
}

/// `beta^|V| (beta^|V| - alpha^|V|)`.
pub fn value_denominator(arena: &WeightedArena) -> BigInt {
    let n = arena.num_vertices() as u32;
    let a = arena.lambda().alpha().pow(n);
    let b = arena.lambda().beta().pow(n);
    &b * (&b - a)
}

/// A denominator valid for every `cVal` of every sub-arena with integer
/// weights: `beta^|V|` times the lcm of `beta^l - alpha^l` over cycle lengths
/// `l <= |V|`. Unlike [`value_denominator`], this also covers cycle lengths
/// that do not divide `|V|`.
pub fn cval_denominator(arena: &WeightedArena) -> BigInt {
    let n = arena.num_vertices() as u32;
    let (a, b) = (arena.lambda().alpha(), arena.lambda().beta());
    let l = (1..=n).fold(BigInt::one(), |acc, l| acc.lcm(&(b.pow(l) - a.pow(l))));
    b.pow(n) * l
}

/// Smallest nonzero drop `|lambda^i (cVal^{v_i}_excl(tau) - Disc(rho[i..j])) - lambda^j cVal^{v_j}_excl(tau')|`
/// over Eve indices `i <= j < min(limit, |rho| - 1)` and strategies consistent with `rho`.
/// The zero terms (for instance `i = j`, `tau = tau'`) are skipped.
pub fn drop_delta(ctx: &PositionalContext, prefix: &PlayPrefix, limit: usize) -> Option<Rational> {
    let arena = ctx.arena;
    let lambda = arena.lambda();
    let vs = prefix.vertices();
    let taus = ctx.strategies(&knowledge_of(arena, vs));
    let top = limit.min(vs.len() - 1);
    let idx: Vec<usize> = (0..top).filter(|&i| arena.is_eve(vs[i])).collect();
    let mut best: Option<Rational> = None;
    for &i in &idx {
        for &j in idx.iter().filter(|&&j| j >= i) {
            let seg = prefix.disc(lambda, i, j);
            for &k in &taus {
                let left = lambda.pow(i) * (ctx.excluded(k, vs[i], vs[i + 1]) - &seg);
                for &k2 in &taus {
                    let d = (&left - lambda.pow(j) * ctx.excluded(k2, vs[j], vs[j + 1])).abs();
                    if !d.is_zero() && best.as_ref().is_none_or(|b| d < *b) {
                        best = Some(d);
                    }
                }
            }
        }
    }
    best
}

/// `lambda^(|V|(|E|+1))` times the least gap of a reachable bad knowledge edge.
pub fn lower_bound_b(arena: &WeightedArena, cfg: &Config) -> Result<Rational, Error> {
    let ctx = PositionalContext::new(arena, cfg.budget)?;
    let z = zero_with(&ctx, cfg)?;
    lower_bound_from(arena, &z)
}

fn lower_bound_from(arena: &WeightedArena, z: &ZeroRegretPositional) -> Result<Rational, Error> {
    if z.answer {
        return Err(Error::Precondition("Eve has a regret-free strategy".into()));
    }
    let reach = reachable(&z.arena.game);
    let min = z
        .arena
        .bad_gaps
        .iter()
        .filter(|(s, _, _)| reach[*s])
        .map(|(_, _, g)| g.clone())
        .min()
        .ok_or_else(|| Error::Precondition("no reachable bad knowledge edge".into()))?;
    let exp = arena.num_vertices() * (arena.num_edges() + 1);
    Ok(arena.lambda().pow(exp) * min)
}

fn reachable(game: &SafetyGame) -> Vec<bool> {
    let mut seen = vec![false; game.owner.len()];
    let mut stack = vec![game.initial];
    seen[game.initial] = true;
    while let Some(s) = stack.pop() {
        for &t in &game.succ[s] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// `N(b) + k` with `k` the least integer such that
/// `W lambda^k / (1 - lambda) < 1 / (beta^(N(b)+|V|) (beta^|V| - alpha^|V|))`.
pub fn horizon_nu(arena: &WeightedArena, b: &Rational) -> Result<usize, Error> {
    let lambda = arena.lambda();
    let nb = horizon_n(b, arena.max_weight(), lambda)?;
    let n = arena.num_vertices() as u32;
    let beta = lambda.beta();
    let diff = beta.pow(n) - lambda.alpha().pow(n);
    let target = Rational::new(BigInt::one(), beta.pow(nb as u32 + n) * diff);
    let mut lhs = arena.max_weight() / lambda.complement();
    let mut k = 0;
    while lhs >= target {
        lhs *= lambda.value();
        k += 1;
    }
    Ok(nb + k)
}

/// Eve indices of maximal-regret candidates and the consistent Adam
/// strategies under which one of them is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalRegret {
    pub points: Vec<usize>,
    pub strategies: Vec<usize>,
    pub regret: Rational,
}

/// Candidates use `cVal` in the arena restricted to `E_forall` of the whole prefix.
pub fn mrp_mrs(ctx: &PositionalContext, prefix: &PlayPrefix) -> MaximalRegret {
    let arena = ctx.arena;
    let lambda = arena.lambda();
    let vs = prefix.vertices();
    let c = knowledge_of(arena, vs);
    let consistent = ctx.strategies(&c);
    let j = vs.len() - 1;
    let mut cands: Vec<(usize, Rational)> = Vec::new();
    for i in (0..j).filter(|&i| arena.is_eve(vs[i])) {
        let best = consistent
            .iter()
            .map(|&k| ctx.excluded(k, vs[i], vs[i + 1]))
            .max()
            .unwrap();
        cands.push((i, lambda.pow(i) * (best - prefix.disc(lambda, i, j))));
    }
    let regret = cands
        .iter()
        .map(|(_, c)| c.clone())
        .max()
        .filter(|m| !m.is_negative())
        .unwrap_or_else(Rational::zero);
    let points: Vec<usize> = cands.iter().filter(|(_, c)| *c == regret).map(|(i, _)| *i).collect();
    let strategies = if points.is_empty() {
        consistent
    } else {
        consistent
            .into_iter()
            .filter(|&k| {
                points.iter().any(|&i| {
                    let mine = ctx.excluded(k, vs[i], vs[i + 1]);
                    let cand = lambda.pow(i) * (mine - prefix.disc(lambda, i, j));
                    cand == regret
                })
            })
            .collect()
    };
    MaximalRegret {
        points,
        strategies,
        regret,
    }
}

/// Distinct co-operative values of the strategies consistent with a knowledge set.
#[derive(Clone, Debug)]
struct ValueClass {
    cmax: Rational,
    /// Distance to the next lower value, if any.
    gap: Option<Rational>,
    /// Strategies attaining `cmax`.
    top: Vec<usize>,
}

struct PositionalSolver<'c, 'a> {
    ctx: &'c PositionalContext<'a>,
    radius: Rational,
    powers: Vec<Rational>,
    classes: HashMap<Knowledge, ValueClass>,
    tails: HashMap<(usize, Knowledge), Rational>,
    memo: HashMap<(usize, Knowledge, usize), Rational>,
    budget: Budget,
    horizon: usize,
}

impl<'c, 'a> PositionalSolver<'c, 'a> {
    fn new(ctx: &'c PositionalContext<'a>, cfg: &Config) -> Self {
        let arena = ctx.arena;
        PositionalSolver {
            ctx,
            radius: arena.max_weight() / arena.lambda().complement(),
            powers: vec![Rational::one()],
            classes: HashMap::new(),
            tails: HashMap::new(),
            memo: HashMap::new(),
            budget: Budget::new(cfg.budget),
            horizon: 0,
        }
    }

    fn power(&mut self, d: usize) -> Rational {
        while self.powers.len() <= d {
            let next = self.powers.last().unwrap() * self.ctx.arena.lambda().value();
            self.powers.push(next);
        }
        self.powers[d].clone()
    }

    fn class(&mut self, c: &Knowledge) -> ValueClass {
        if let Some(v) = self.classes.get(c) {
            return v.clone();
        }
        let init = self.ctx.arena.initial();
        let ks = self.ctx.strategies(c);
        let cmax = ks.iter().map(|&k| self.ctx.cvals[k][init].clone()).max().unwrap();
        let top = ks.iter().copied().filter(|&k| self.ctx.cvals[k][init] == cmax).collect();
        let gap = ks
            .iter()
            .map(|&k| &self.ctx.cvals[k][init])
            .filter(|x| **x < cmax)
            .max()
            .map(|x| &cmax - x);
        let cls = ValueClass { cmax, gap, top };
        self.classes.insert(c.clone(), cls.clone());
        cls
    }

    /// Antagonistic value of `(v, c)` in the knowledge arena where Adam must
    /// keep some strategy of `top` consistent.
    fn tail(&mut self, v: usize, c: &Knowledge, top: &[usize]) -> Result<Rational, Error> {
        if let Some(x) = self.tails.get(&(v, c.clone())) {
            return Ok(x.clone());
        }
        let ctx = self.ctx;
        let arena = ctx.arena;
        let keeps = |k: &Knowledge| top.iter().any(|&t| ctx.consistent(t, k));
        let mut index: HashMap<(usize, Knowledge), usize> = HashMap::new();
        let mut states = vec![(v, c.clone())];
        index.insert((v, c.clone()), 0);
        let mut succ: Vec<Vec<(usize, Rational)>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            self.budget.charge(1, 0)?;
            let (u, k) = states[i].clone();
            let mut out = Vec::new();
            for (t, k2) in ctx.successors(u, &k) {
                if !keeps(&k2) {
                    continue;
                }
                let key = (t, k2);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        states.push(key.clone());
                        index.insert(key, states.len() - 1);
                        states.len() - 1
                    }
                };
                out.push((id, arena.weight(u, t).unwrap().clone()));
            }
            succ.push(out);
            i += 1;
        }
        let g = GameGraph {
            owner: states.iter().map(|(u, _)| arena.owner(*u)).collect(),
            succ,
            lambda: arena.lambda().value().clone(),
        };
        let vals = g.antag_values();
        for (s, x) in states.into_iter().zip(vals) {
            self.tails.insert(s, x);
        }
        Ok(self.tails[&(v, c.clone())].clone())
    }

    /// `inf_sigma sup [max_tau c_tau - lambda^d Disc(rest)]` from `(v, c)` at depth `d`.
    fn value(&mut self, v: usize, c: &Knowledge, d: usize) -> Result<Rational, Error> {
        let key = (v, c.clone(), d);
        if let Some(x) = self.memo.get(&key) {
            return Ok(x.clone());
        }
        self.budget.charge(1, d)?;
        let ld = self.power(d);
        let cls = self.class(c);
        let settled = match &cls.gap {
            None => true,
            Some(g) => Rational::from_integer(2.into()) * &self.radius * &ld < *g,
        };
        let result = if settled {
            self.horizon = self.horizon.max(d);
            &cls.cmax - &ld * self.tail(v, c, &cls.top)?
        } else {
            let arena = self.ctx.arena;
            let mut best: Option<Rational> = None;
            for (t, k) in self.ctx.successors(v, c) {
                let x = self.value(t, &k, d + 1)? - &ld * arena.weight(v, t).unwrap();
                let better = match &best {
                    None => true,
                    Some(b) if arena.is_eve(v) => x < *b,
                    Some(b) => x > *b,
                };
                if better {
                    best = Some(x);
                }
            }
            best.unwrap()
        };
        self.memo.insert(key, result.clone());
        Ok(result)
    }
}

/// Exact regret against positional Adam strategies.
#[derive(Clone, Debug)]
pub struct PositionalSolution {
    pub value: Rational,
    /// Largest depth at which the search had to look before the set of
    /// maximal co-operative values was settled.
    pub horizon: usize,
    pub nodes: u64,
    pub zero: ZeroRegretPositional,
}

pub fn solve_regret_positional(arena: &WeightedArena, cfg: &Config) -> Result<PositionalSolution, Error> {
    let ctx = PositionalContext::new(arena, cfg.budget)?;
    let zero = zero_with(&ctx, cfg)?;
    let mut solver = PositionalSolver::new(&ctx, cfg);
    let value = solver.value(arena.initial(), &Knowledge::empty(arena.num_vertices()), 0)?;
    Ok(PositionalSolution {
        value,
        horizon: solver.horizon,
        nodes: solver.budget.used(),
        zero,
    })
}

pub fn regret_positional(arena: &WeightedArena, cfg: &Config) -> Result<RegretReport, Error> {
    let sol = solve_regret_positional(arena, cfg)?;
    let mut report = RegretReport::new("positional", ReportValue::Exact(sol.value.clone()));
    report.horizon = Some(sol.horizon);
    report.nodes = sol.nodes;
    if sol.zero.answer {
        report.witness = Some(sol.zero.witness_json(arena));
    }
    report.extra.insert("zero_regret".into(), json!(sol.zero.answer));
    if sol.zero.answer != sol.value.is_zero() {
        report
            .extra
            .insert("warning".into(), json!("safety answer disagrees with the computed value"));
    }
    Ok(report)
}

/// Deviation points of a prefix: `(index, vertex, excluded successor, D(index))`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeviationLedger {
    pub entries: Vec<(usize, usize, usize, Rational)>,
    pub current: Rational,
}

impl DeviationLedger {
    pub fn push(&mut self, index: usize, u: usize, v: usize, weight: &Rational, power: &Rational) {
        let d = self.current.clone();
        self.current += power * weight;
        self.entries.push((index, u, v, d));
    }
}

struct OracleCache<'c, 'a> {
    ctx: &'c PositionalContext<'a>,
    high: HashMap<Knowledge, Vec<Rational>>,
    low: HashMap<(Knowledge, usize, usize), Rational>,
}

impl<'c, 'a> OracleCache<'c, 'a> {
    /// `cVal_excl(u, v)` in the arena restricted to the knowledge set.
    fn excluded_high(&mut self, c: &Knowledge, u: usize, v: usize) -> Rational {
        let ctx = self.ctx;
        let arena = ctx.arena;
        let cv = self.high.entry(c.clone()).or_insert_with(|| {
            let mut g = GameGraph::from_arena(arena);
            for (x, t) in c.0.iter().enumerate() {
                if let Some(t) = t {
                    g.succ[x].retain(|(y, _)| y == t);
                }
            }
            g.coop_values()
        });
        let lambda = arena.lambda().value();
        arena
            .out_edges(u)
            .iter()
            .map(|&e| arena.edge(e))
            .filter(|e| e.target != v)
            .map(|e| &e.weight + lambda * &cv[e.target])
            .max()
            .unwrap()
    }

    /// Least `cVal_excl(u, v)` over single consistent strategies.
    fn excluded_low(&mut self, c: &Knowledge, u: usize, v: usize) -> Rational {
        let ctx = self.ctx;
        self.low
            .entry((c.clone(), u, v))
            .or_insert_with(|| ctx.strategies(c).into_iter().map(|k| ctx.excluded(k, u, v)).min().unwrap())
            .clone()
    }
}

/// Certified interval for the regret against positional Adam strategies,
/// from a min-max over the knowledge unfolding cut at `depth`.
pub fn oracle_interval_positional(arena: &WeightedArena, depth: usize, cfg: &Config) -> Result<(Rational, Rational), Error> {
    if depth == 0 {
        return Err(Error::Precondition("oracle depth must be at least 1".into()));
    }
    let ctx = PositionalContext::new(arena, cfg.budget)?;
    let mut cache = OracleCache {
        ctx: &ctx,
        high: HashMap::new(),
        low: HashMap::new(),
    };
    let powers = arena.lambda().powers(depth);
    let radius = arena.max_weight() / arena.lambda().complement();
    let budget = Budget::new(cfg.budget);
    let mut ledger = DeviationLedger::default();
    let start = Knowledge::empty(arena.num_vertices());
    oracle_rec(
        &mut cache,
        &powers,
        &radius,
        &budget,
        arena.initial(),
        &start,
        0,
        depth,
        &mut ledger,
    )
}

#[allow(clippy::too_many_arguments)]
fn oracle_rec(
    cache: &mut OracleCache,
    powers: &[Rational],
    radius: &Rational,
    budget: &Budget,
    v: usize,
    c: &Knowledge,
    d: usize,
    depth: usize,
    ledger: &mut DeviationLedger,
) -> Result<(Rational, Rational), Error> {
    budget.charge(1, d)?;
    let arena = cache.ctx.arena;
    if d == depth {
        let tail = &powers[d] * radius;
        let mut low = Rational::zero();
        let mut high = Rational::from_integer(2.into()) * &tail;
        for (i, u, x, di) in ledger.entries.clone() {
            let base = di - &ledger.current;
            let lo = &powers[i] * cache.excluded_low(c, u, x) + &base - &tail;
            let hi = &powers[i] * cache.excluded_high(c, u, x) + &base + &tail;
            low = low.max(lo);
            high = high.max(hi);
        }
        return Ok((low, high));
    }
    let mut acc: Option<(Rational, Rational)> = None;
    for (t, k) in cache.ctx.successors(v, c) {
        let w = arena.weight(v, t).unwrap().clone();
        let saved = ledger.clone();
        if arena.is_eve(v) {
            ledger.push(d, v, t, &w, &powers[d]);
        } else {
            ledger.current += &powers[d] * &w;
        }
        let (lo, hi) = oracle_rec(cache, powers, radius, budget, t, &k, d + 1, depth, ledger)?;
        *ledger = saved;
        acc = Some(match acc {
            None => (lo, hi),
            Some((a, b)) if arena.is_eve(v) => (a.min(lo), b.min(hi)),
            Some((a, b)) => (a.max(lo), b.max(hi)),
        });
    }
    Ok(acc.unwrap())
}

/// Renders an edge list as `[["u","v"], ...]`.
pub fn edges_json(arena: &WeightedArena, edges: &[usize]) -> Value {
    Value::Array(
        edges
            .iter()
            .map(|&e| {
                let edge = arena.edge(e);
                json!([arena.name(edge.source), arena.name(edge.target)])
            })
            .collect(),
    )
}
