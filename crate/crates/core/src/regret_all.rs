//! Regret against an unrestricted Adam.
//!
//! The exact value is computed by backward induction over the bounded
//! unfolding. Instead of enumerating margins, each `(vertex, depth)` node
//! stores its value as a piecewise-linear function of the running margin
//! (see [`crate::pwl`]), so every distinct margin is handled at once.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arena::{Player, PlayPrefix, WeightedArena};
use crate::error::Error;
use crate::game::GameGraph;
use crate::payoff::lasso_value;
use crate::pwl::Pwl;
use crate::rational::{format_rational, parse_rational, DiscountFactor, Rational};
use crate::report::{Budget, Config, RegretReport, ReportValue};
use crate::safety::SafetyGame;
use crate::values::{canonical_strategies, CanonicalStrategies, PositionalStrategy, ValueTable};

/// Values, canonical strategies and per-edge deviation data of an arena.
#[derive(Clone, Debug)]
pub struct RegretContext<'a> {
    pub arena: &'a WeightedArena,
    pub values: ValueTable,
    pub canon: CanonicalStrategies,
    excluded: Vec<Option<Rational>>,
    gap: Vec<Option<Rational>>,
}

impl<'a> RegretContext<'a> {
    pub fn new(arena: &'a WeightedArena) -> Self {
        Self::with_values(arena, ValueTable::compute(arena))
    }

    pub fn with_values(arena: &'a WeightedArena, values: ValueTable) -> Self {
        let canon = canonical_strategies(arena, &values);
        let lambda = arena.lambda().value();
        let mut excluded = vec![None; arena.num_edges()];
        let mut gap = vec![None; arena.num_edges()];
        for (id, e) in arena.edges().iter().enumerate() {
            if !arena.is_eve(e.source) {
                continue;
            }
            let alt = arena
                .out_edges(e.source)
                .iter()
                .map(|&f| arena.edge(f))
                .filter(|f| f.target != e.target)
                .map(|f| &f.weight + lambda * &values.cval[f.target])
                .max()
                .expect("Eve vertices have two successors");
            gap[id] = Some(&alt - &e.weight - lambda * &values.aval[e.target]);
            excluded[id] = Some(alt);
        }
        RegretContext {
            arena,
            values,
            canon,
            excluded,
            gap,
        }
    }

    /// `cVal` of the source of Eve edge `e`, excluding `e`'s target.
    pub fn excluded(&self, e: usize) -> Option<&Rational> {
        self.excluded[e].as_ref()
    }

    /// `locreg` of Eve edge `e` at index 0: `cVal_excl - w - lambda aVal`.
    pub fn gap(&self, e: usize) -> Option<&Rational> {
        self.gap[e].as_ref()
    }

    pub fn is_bad(&self, e: usize) -> bool {
        self.gap[e].as_ref().is_some_and(|g| g.is_positive())
    }

    pub fn bad_edges(&self) -> Vec<usize> {
        (0..self.arena.num_edges()).filter(|&e| self.is_bad(e)).collect()
    }
}

/// Edges `(u,v)` with `u` Eve's and `w(u,v) + lambda aVal^v < cVal^u` excluding `v`.
pub fn bad_edges(arena: &WeightedArena, values: &ValueTable) -> Vec<usize> {
    RegretContext::with_values(arena, values.clone()).bad_edges()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRegretAll {
    pub answer: bool,
    /// Eve's regret-free strategy, or Adam's strategy forcing a bad edge.
    pub witness: PositionalStrategy,
}

pub fn zero_regret_all(arena: &WeightedArena) -> ZeroRegretAll {
    zero_regret_with(&RegretContext::new(arena))
}

fn zero_regret_with(ctx: &RegretContext) -> ZeroRegretAll {
    let arena = ctx.arena;
    let game = SafetyGame::from_arena(arena, &ctx.bad_edges());
    let sol = game.solve();
    let answer = sol.winner == Player::Eve;
    let n = arena.num_vertices();
    let mut choice = vec![None; n];
    for v in 0..n {
        let (strat, owner) = if answer {
            (&sol.eve_strategy, Player::Eve)
        } else {
            (&sol.adam_strategy, Player::Adam)
        };
        if arena.owner(v) != owner {
            continue;
        }
        choice[v] = Some(match strat[v] {
            Some(i) => game.succ[v][i],
            None if answer => ctx.canon.sigma_cw.target(v).unwrap(),
            None => ctx.canon.tau_wc.target(v).unwrap(),
        });
    }
    let owner = if answer { Player::Eve } else { Player::Adam };
    ZeroRegretAll {
        answer,
        witness: PositionalStrategy { owner, choice },
    }
}

/// `a_G = lambda^|V| * min gap` over bad edges.
pub fn lower_bound_a(arena: &WeightedArena) -> Result<Rational, Error> {
    lower_bound_with(&RegretContext::new(arena))
}

fn lower_bound_with(ctx: &RegretContext) -> Result<Rational, Error> {
    let min = ctx
        .bad_edges()
        .into_iter()
        .map(|e| ctx.gap(e).unwrap().clone())
        .min()
        .ok_or_else(|| Error::Precondition("the arena has no bad edge".into()))?;
    Ok(ctx.arena.lambda().pow(ctx.arena.num_vertices()) * min)
}

/// Least `N >= 0` with `2 W lambda^N / (1 - lambda) < r`.
pub fn horizon_n(r: &Rational, w: &Rational, lambda: &DiscountFactor) -> Result<usize, Error> {
    if !r.is_positive() {
        return Err(Error::Precondition(format!("horizon needs r > 0, got {}", format_rational(r))));
    }
    let mut bound = w * Rational::from_integer(2.into()) / lambda.complement();
    let mut n = 0;
    while bound >= *r {
        bound *= lambda.value();
        n += 1;
    }
    Ok(n)
}

/// The ultimately periodic play `stem . cycle^omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(arena: &WeightedArena, stem: Vec<usize>, cycle: Vec<usize>) -> Result<Self, Error> {
        if cycle.is_empty() {
            return Err(Error::Precondition("lasso cycle is empty".into()));
        }
        let l = Lasso { stem, cycle };
        for i in 0..l.stem.len() + l.cycle.len() {
            let (u, v) = (l.vertex(i), l.vertex(i + 1));
            if arena.edge_between(u, v).is_none() {
                return Err(Error::Precondition(format!("no edge {} -> {}", arena.name(u), arena.name(v))));
            }
        }
        Ok(l)
    }

    pub fn vertex(&self, i: usize) -> usize {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// `Disc(pi[i..])` in closed form.
    pub fn disc_from(&self, arena: &WeightedArena, i: usize) -> Rational {
        let s = self.stem.len();
        let start = if i < s { i } else { s + (i - s) % self.cycle.len() };
        let w = |k: usize| arena.weight(self.vertex(k), self.vertex(k + 1)).unwrap().clone();
        let prefix: Vec<Rational> = (start..s.max(start)).map(w).collect();
        let base = s.max(start);
        let cycle: Vec<Rational> = (base..base + self.cycle.len()).map(w).collect();
        lasso_value(&prefix, &cycle, arena.lambda())
    }
}

/// A play given either as a finite prefix or as a lasso.
#[derive(Clone, Copy, Debug)]
pub enum Play<'p> {
    Prefix(&'p PlayPrefix),
    Lasso(&'p Lasso),
}

/// Local regret at Eve index `i`.
pub fn locreg(arena: &WeightedArena, values: &ValueTable, play: Play, i: usize) -> Result<Rational, Error> {
    let lambda = arena.lambda();
    let vertex = |k| match play {
        Play::Prefix(p) => p.vertices()[k],
        Play::Lasso(l) => l.vertex(k),
    };
    if let Play::Prefix(p) = play {
        if i >= p.len() {
            return Err(Error::Precondition(format!("index {i} outside a prefix of length {}", p.len())));
        }
    }
    let vi = vertex(i);
    if !arena.is_eve(vi) {
        return Err(Error::Precondition(format!("vertex {} at index {i} is not Eve's", arena.name(vi))));
    }
    let li = lambda.pow(i);
    match play {
        Play::Prefix(p) if p.len() == i + 1 => Ok(li * (&values.cval[vi] - &values.aval[vi])),
        Play::Prefix(p) => {
            let j = p.len() - 1;
            let excl = crate::values::coop_value_excluding(arena, values, vi, vertex(i + 1))?;
            Ok(li * (excl - p.disc(lambda, i, j)) - lambda.pow(j) * &values.aval[p.last()])
        }
        Play::Lasso(l) => {
            let excl = crate::values::coop_value_excluding(arena, values, vi, vertex(i + 1))?;
            Ok(li * (excl - l.disc_from(arena, i)))
        }
    }
}

/// Regret of a finite prefix: the best discounted deviation gain, or 0.
pub fn prefix_regret(arena: &WeightedArena, values: &ValueTable, prefix: &PlayPrefix) -> Rational {
    let lambda = arena.lambda();
    let j = prefix.len() - 1;
    let vs = prefix.vertices();
    let mut best = Rational::zero();
    for i in 0..j {
        if !arena.is_eve(vs[i]) {
            continue;
        }
        let excl = crate::values::coop_value_excluding(arena, values, vs[i], vs[i + 1]).unwrap();
        let cand = lambda.pow(i) * (excl - prefix.disc(lambda, i, j));
        if cand > best {
            best = cand;
        }
    }
    best
}

/// Running summary of a prefix sufficient for its regret.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarginState {
    pub vertex: usize,
    pub depth: usize,
    /// `max_i (lambda^i cVal_excl(i) + D(i)) - D(depth)` over Eve indices so far.
    pub margin: Option<Rational>,
}

impl MarginState {
    pub fn initial(arena: &WeightedArena) -> Self {
        MarginState {
            vertex: arena.initial(),
            depth: 0,
            margin: None,
        }
    }

    pub fn step(&self, ctx: &RegretContext, target: usize) -> Result<MarginState, Error> {
        let arena = ctx.arena;
        let e = arena.edge_between(self.vertex, target).ok_or_else(|| {
            Error::Precondition(format!("no edge {} -> {}", arena.name(self.vertex), arena.name(target)))
        })?;
        let ld = arena.lambda().pow(self.depth);
        let w = &ld * &arena.edge(e).weight;
        let margin = match ctx.excluded(e) {
            Some(c) => {
                let c = &ld * c;
                let m = match &self.margin {
                    Some(m) if *m > c => m.clone(),
                    _ => c,
                };
                Some(m - w)
            }
            None => self.margin.as_ref().map(|m| m - w),
        };
        Ok(MarginState {
            vertex: target,
            depth: self.depth + 1,
            margin,
        })
    }

    pub fn regret(&self) -> Rational {
        match &self.margin {
            Some(m) if m.is_positive() => m.clone(),
            _ => Rational::zero(),
        }
    }
}

/// Backward induction tables `layers[d][v]`, `d = 0..=horizon`.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub horizon: usize,
    pub layers: Vec<Vec<Pwl>>,
    pub nodes: u64,
}

impl Unfolding {
    pub fn value(&self, v: usize) -> Rational {
        self.layers[0][v].left().clone()
    }

    /// Eve's optimal successor at `(v, depth)` for the given margin,
    /// lowest index on ties. Beyond the horizon `None`.
    pub fn eve_choice(&self, ctx: &RegretContext, v: usize, depth: usize, margin: Option<&Rational>) -> Option<usize> {
        if depth >= self.horizon {
            return None;
        }
        let powers = ctx.arena.lambda().powers(depth);
        let mut best: Option<(usize, Rational)> = None;
        for &e in ctx.arena.out_edges(v) {
            let f = eve_step(ctx, e, &powers[depth], &self.layers[depth + 1]);
            let val = f.eval_opt(margin);
            if best.as_ref().is_none_or(|(_, b)| val < *b) {
                best = Some((ctx.arena.edge(e).target, val));
            }
        }
        best.map(|(t, _)| t)
    }
}

fn eve_step(ctx: &RegretContext, e: usize, ld: &Rational, next: &[Pwl]) -> Pwl {
    let edge = ctx.arena.edge(e);
    next[edge.target]
        .shift(&(ld * &edge.weight))
        .clamp(&(ld * ctx.excluded(e).unwrap()))
}

fn adam_step(ctx: &RegretContext, e: usize, ld: &Rational, next: &[Pwl]) -> Pwl {
    let edge = ctx.arena.edge(e);
    next[edge.target].shift(&(ld * &edge.weight))
}

/// Runs the unfolding to `horizon`. Eve minimizes unless `fixed` dictates her
/// move at `(vertex, depth)`; the leaf subtracts `lambda^horizon * leaf[v]`.
fn unfold(
    ctx: &RegretContext,
    horizon: usize,
    leaf: &[Rational],
    fixed: Option<&(dyn Fn(usize, usize) -> usize + Sync)>,
    cfg: &Config,
) -> Result<Unfolding, Error> {
    let arena = ctx.arena;
    let n = arena.num_vertices();
    let powers = arena.lambda().powers(horizon);
    let budget = Budget::new(cfg.budget);
    let mut layers: Vec<Vec<Pwl>> = Vec::with_capacity(horizon + 1);
    let top: Vec<Pwl> = (0..n)
        .map(|v| Pwl::hinge(Rational::zero(), -(&powers[horizon] * &leaf[v])))
        .collect();
    layers.push(top);
    for d in (0..horizon).rev() {
        let next = layers.last().unwrap();
        let ld = &powers[d];
        let node = |v: usize| -> Pwl {
            let out = arena.out_edges(v);
            if arena.is_eve(v) {
                if let Some(f) = fixed {
                    let t = f(v, d);
                    let e = arena.edge_between(v, t).expect("strategy follows edges");
                    return eve_step(ctx, e, ld, next);
                }
                out.iter()
                    .map(|&e| eve_step(ctx, e, ld, next))
                    .reduce(|a, b| a.min(&b))
                    .unwrap()
            } else {
                out.iter()
                    .map(|&e| adam_step(ctx, e, ld, next))
                    .reduce(|a, b| a.max(&b))
                    .unwrap()
            }
        };
        let layer: Vec<Pwl> = if cfg.parallel {
            (0..n).into_par_iter().map(node).collect()
        } else {
            (0..n).map(node).collect()
        };
        let size: usize = layer.iter().map(Pwl::len).sum();
        budget.charge(size as u64, d)?;
        layers.push(layer);
    }
    layers.reverse();
    Ok(Unfolding {
        horizon,
        layers,
        nodes: budget.used(),
    })
}

/// Exact regret with the unfolding cut at `horizon`; meaningful for any
/// `horizon >= N(a_G)` when the regret is positive.
pub fn regret_all_with_horizon(arena: &WeightedArena, horizon: usize, cfg: &Config) -> Result<Rational, Error> {
    let ctx = RegretContext::new(arena);
    let u = unfold(&ctx, horizon, &ctx.values.aval, None, cfg)?;
    Ok(u.value(arena.initial()))
}

/// Full solution of the regret game against an unrestricted Adam.
#[derive(Clone, Debug)]
pub struct RegretAllSolution {
    pub value: Rational,
    /// `N(a_G)`, absent when the regret is 0.
    pub horizon: Option<usize>,
    pub lower_bound: Option<Rational>,
    pub unfolding: Option<Unfolding>,
    pub zero: ZeroRegretAll,
}

pub fn solve_regret_all(arena: &WeightedArena, cfg: &Config) -> Result<RegretAllSolution, Error> {
    let ctx = RegretContext::new(arena);
    let zero = zero_regret_with(&ctx);
    if zero.answer {
        return Ok(RegretAllSolution {
            value: Rational::zero(),
            horizon: None,
            lower_bound: None,
            unfolding: None,
            zero,
        });
    }
    let a = lower_bound_with(&ctx)?;
    let n = horizon_n(&a, arena.max_weight(), arena.lambda())?;
    let u = unfold(&ctx, n, &ctx.values.aval, None, cfg)?;
    Ok(RegretAllSolution {
        value: u.value(arena.initial()),
        horizon: Some(n),
        lower_bound: Some(a),
        unfolding: Some(u),
        zero,
    })
}

pub fn regret_all(arena: &WeightedArena, cfg: &Config) -> Result<RegretReport, Error> {
    let sol = solve_regret_all(arena, cfg)?;
    let mut report = RegretReport::new("all", ReportValue::Exact(sol.value.clone()));
    report.horizon = sol.horizon;
    report.nodes = sol.unfolding.as_ref().map_or(0, |u| u.nodes);
    report.witness = Some(if sol.zero.answer {
        json!({"kind": "positional", "strategy": sol.zero.witness.to_json(arena)})
    } else {
        synth_otp(arena, &sol.value).to_json(arena)
    });
    if let Some(a) = &sol.lower_bound {
        report.extra.insert("lower_bound".into(), json!(format_rational(a)));
    }
    Ok(report)
}

/// `regret_all < r` (strict) or `<= r`.
pub fn regret_threshold_all(arena: &WeightedArena, r: &Rational, strict: bool, cfg: &Config) -> Result<bool, Error> {
    let v = solve_regret_all(arena, cfg)?.value;
    Ok(if strict { v < *r } else { v <= *r })
}

/// Min-max over raw prefixes of length `depth + 1`, recomputing the prefix
/// regret at every leaf. Exponential; a test oracle only.
pub fn naive_regret_all(arena: &WeightedArena, depth: usize) -> Rational {
    let values = ValueTable::compute(arena);
    let mut prefix = PlayPrefix::new(arena.initial());
    naive_rec(arena, &values, &mut prefix, depth)
}

fn naive_rec(arena: &WeightedArena, values: &ValueTable, prefix: &mut PlayPrefix, depth: usize) -> Rational {
    let v = prefix.last();
    if prefix.len() == depth + 1 {
        return prefix_regret(arena, values, prefix) - arena.lambda().pow(depth) * &values.aval[v];
    }
    let vals = arena.out_edges(v).iter().map(|&e| {
        let mut p = prefix.clone();
        p.push(arena, arena.edge(e).target).unwrap();
        naive_rec(arena, values, &mut p, depth)
    });
    if arena.is_eve(v) {
        vals.min().unwrap()
    } else {
        vals.max().unwrap()
    }
}

/// Optimistic-then-pessimistic strategy: at Eve vertex `v` and index `n`,
/// play `sigma_co(v)` while `copt(v)` is a singleton and
/// `lambda^n * gain(v) > t`, otherwise `sigma_cw(v)`. Here `gain(v)` is the
/// local regret of taking `sigma_cw(v)` and then meeting the antagonistic value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtpStrategy {
    pub sigma_co: PositionalStrategy,
    pub sigma_cw: PositionalStrategy,
    pub threshold: Rational,
    lambda: DiscountFactor,
    single_copt: Vec<bool>,
    gain: Vec<Option<Rational>>,
}

pub fn synth_otp(arena: &WeightedArena, t: &Rational) -> OtpStrategy {
    let ctx = RegretContext::new(arena);
    otp_from(&ctx, t)
}

fn otp_from(ctx: &RegretContext, t: &Rational) -> OtpStrategy {
    let arena = ctx.arena;
    let n = arena.num_vertices();
    let mut gain = vec![None; n];
    let mut single = vec![false; n];
    for v in 0..n {
        if !arena.is_eve(v) {
            continue;
        }
        single[v] = ctx.canon.copt[v].len() == 1;
        let cw = ctx.canon.sigma_cw.target(v).unwrap();
        gain[v] = ctx.gap(arena.edge_between(v, cw).unwrap()).cloned();
    }
    OtpStrategy {
        sigma_co: ctx.canon.sigma_co.clone(),
        sigma_cw: ctx.canon.sigma_cw.clone(),
        threshold: t.clone(),
        lambda: arena.lambda().clone(),
        single_copt: single,
        gain,
    }
}

impl OtpStrategy {
    fn optimistic(&self, v: usize, n: usize) -> bool {
        self.single_copt[v]
            && self.gain[v]
                .as_ref()
                .is_some_and(|g| self.lambda.pow(n) * g > self.threshold)
    }

    /// Eve's move at vertex `v` reached at index `n`.
    pub fn choose(&self, v: usize, n: usize) -> usize {
        if self.optimistic(v, n) {
            self.sigma_co.target(v).unwrap()
        } else {
            self.sigma_cw.target(v).unwrap()
        }
    }

    /// The index from which every vertex has settled on its eventual choice.
    pub fn switch_depth(&self) -> usize {
        let mut k = 0;
        for (v, g) in self.gain.iter().enumerate() {
            let Some(g) = g else { continue };
            if !self.single_copt[v] || self.threshold.is_zero() {
                continue;
            }
            // lambda^n |g| < |t| implies the comparison no longer changes.
            let t = self.threshold.abs();
            let mut p = g.abs();
            let mut n = 0;
            while p >= t {
                p *= self.lambda.value();
                n += 1;
            }
            k = k.max(n);
        }
        k
    }

    /// The positional strategy played from the switch depth on.
    pub fn after(&self) -> PositionalStrategy {
        let k = self.switch_depth();
        let choice = (0..self.gain.len())
            .map(|v| self.sigma_cw.target(v).map(|_| self.choose(v, k)))
            .collect();
        PositionalStrategy {
            owner: Player::Eve,
            choice,
        }
    }

    pub fn to_counter(&self) -> CounterStrategy {
        let k = self.switch_depth();
        let rounds = (0..k)
            .map(|d| {
                (0..self.gain.len())
                    .map(|v| self.sigma_cw.target(v).map(|_| self.choose(v, d)))
                    .collect()
            })
            .collect();
        CounterStrategy {
            rounds,
            after: self.after(),
        }
    }

    pub fn to_json(&self, arena: &WeightedArena) -> Value {
        json!({
            "kind": "otp",
            "threshold": format_rational(&self.threshold),
            "sigma_co": self.sigma_co.to_json(arena),
            "sigma_cw": self.sigma_cw.to_json(arena),
            "switch_depth": self.switch_depth(),
        })
    }
}

/// A Moore strategy driven by a turn counter: `rounds[d]` gives Eve's move at
/// index `d < k`, after which the positional `after` is played.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterStrategy {
    pub rounds: Vec<Vec<Option<usize>>>,
    pub after: PositionalStrategy,
}

impl CounterStrategy {
    pub fn choose(&self, v: usize, d: usize) -> usize {
        self.rounds
            .get(d)
            .and_then(|r| r[v])
            .or_else(|| self.after.target(v))
            .expect("strategy defined at every Eve vertex")
    }

    pub fn switch_depth(&self) -> usize {
        self.rounds.len()
    }
}

/// Eve strategies accepted by [`eval_strategy_regret`].
#[derive(Clone, Debug)]
pub enum EveStrategy {
    Otp(OtpStrategy),
    Counter(CounterStrategy),
}

impl EveStrategy {
    /// Reads `{"kind": "otp", "threshold": "p/q"}`,
    /// `{"kind": "positional", "strategy": {...}}` or
    /// `{"kind": "counter", "rounds": [{...}, ...], "after": {...}}`.
    /// Counter and positional inputs must be worst-case optimal after the switch.
    pub fn from_json(arena: &WeightedArena, value: &Value) -> Result<Self, Error> {
        let bad = |m: &str| Error::syntax(1, 1, m.to_string());
        let kind = value.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing `kind`"))?;
        match kind {
            "otp" => {
                let t = value
                    .get("threshold")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("missing `threshold`"))?;
                let t = parse_rational(t).map_err(|m| bad(&m))?;
                Ok(EveStrategy::Otp(synth_otp(arena, &t)))
            }
            "positional" | "counter" => {
                let after_json = if kind == "positional" {
                    value.get("strategy")
                } else {
                    value.get("after")
                }
                .ok_or_else(|| bad("missing post-switch strategy"))?;
                let after = PositionalStrategy::from_json(arena, Player::Eve, after_json)?;
                let mut rounds = Vec::new();
                if kind == "counter" {
                    let list = value
                        .get("rounds")
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad("missing `rounds`"))?;
                    for r in list {
                        rounds.push(PositionalStrategy::from_json(arena, Player::Eve, r)?.choice);
                    }
                }
                let values = ValueTable::compute(arena);
                let canon = canonical_strategies(arena, &values);
                for v in 0..arena.num_vertices() {
                    if let Some(t) = after.target(v) {
                        if !canon.wcopt[v].contains(&t) {
                            return Err(Error::Precondition(format!(
                                "post-switch move {} -> {} is not worst-case optimal",
                                arena.name(v),
                                arena.name(t)
                            )));
                        }
                    }
                }
                Ok(EveStrategy::Counter(CounterStrategy { rounds, after }))
            }
            other => Err(bad(&format!("unknown strategy kind `{other}`"))),
        }
    }

    fn counter(&self) -> CounterStrategy {
        match self {
            EveStrategy::Otp(o) => o.to_counter(),
            EveStrategy::Counter(c) => c.clone(),
        }
    }
}

/// Worst payoff Eve obtains from each vertex playing `s` positionally.
fn payoff_against_worst(arena: &WeightedArena, s: &PositionalStrategy) -> Vec<Rational> {
    let mut g = GameGraph::from_arena(arena);
    for v in 0..arena.num_vertices() {
        if let Some(t) = s.target(v) {
            g.succ[v].retain(|(x, _)| *x == t);
        }
    }
    let mut policy = vec![0; arena.num_vertices()];
    g.policy_iteration(&mut policy, |v| (!arena.is_eve(v)).then_some(false))
}

/// Exact regret of a counter-driven Eve strategy against an unrestricted Adam.
pub fn eval_strategy_regret(arena: &WeightedArena, strategy: &EveStrategy, cfg: &Config) -> Result<Rational, Error> {
    let ctx = RegretContext::new(arena);
    let sigma = strategy.counter();
    let k = sigma.switch_depth();
    let n = arena.num_vertices();
    // Largest discounted gap of a bad edge sigma can be made to take.
    let powers = arena.lambda().powers(k + n);
    let mut lower: Option<Rational> = None;
    let mut frontier = vec![false; n];
    frontier[arena.initial()] = true;
    for (d, ld) in powers.iter().enumerate().take(k + n + 1) {
        let mut next = vec![false; n];
        for v in (0..n).filter(|&v| frontier[v]) {
            if arena.is_eve(v) {
                let t = sigma.choose(v, d);
                let e = arena.edge_between(v, t).unwrap();
                if ctx.is_bad(e) {
                    let c = ld * ctx.gap(e).unwrap();
                    if lower.as_ref().is_none_or(|l| c > *l) {
                        lower = Some(c);
                    }
                }
                next[t] = true;
            } else {
                for &e in arena.out_edges(v) {
                    next[arena.edge(e).target] = true;
                }
            }
        }
        frontier = next;
    }
    let Some(r) = lower else {
        return Ok(Rational::zero());
    };
    let horizon = k.max(horizon_n(&r, arena.max_weight(), arena.lambda())?);
    let leaf = payoff_against_worst(arena, &sigma.after);
    let choose = |v: usize, d: usize| sigma.choose(v, d);
    let u = unfold(&ctx, horizon, &leaf, Some(&choose), cfg)?;
    Ok(u.value(arena.initial()))
}

/// Number of Eve decisions that follow `sigma_co` rather than `sigma_cw`
/// in the first `max_steps` turns when Adam always refuses to co-operate,
/// i.e. takes the edge with the smallest co-operative continuation.
pub fn probe_rounds(arena: &WeightedArena, otp: &OtpStrategy, max_steps: usize) -> usize {
    let values = ValueTable::compute(arena);
    let lambda = arena.lambda().value();
    let mut v = arena.initial();
    let mut count = 0;
    for n in 0..max_steps {
        v = if arena.is_eve(v) {
            let t = otp.choose(v, n);
            if otp.sigma_co.target(v) == Some(t) && otp.sigma_cw.target(v) != Some(t) {
                count += 1;
            }
            t
        } else {
            arena
                .out_edges(v)
                .iter()
                .map(|&e| arena.edge(e))
                .min_by_key(|e| &e.weight + lambda * &values.cval[e.target])
                .unwrap()
                .target
        };
    }
    count
}
