//! Explicit discounted game graphs and exact policy iteration.
//!
//! Every solver in the crate reduces to one of these graphs: the arena
//! itself, a product with a fixed Adam strategy, a knowledge arena, or an
//! automaton product. Eve vertices maximize, Adam vertices minimize.

use num_traits::{One, Zero};

use crate::arena::{Player, WeightedArena};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct GameGraph {
    pub owner: Vec<Player>,
    /// Successors in canonical order with their edge weights.
    pub succ: Vec<Vec<(usize, Rational)>>,
    pub lambda: Rational,
}

impl GameGraph {
    pub fn from_arena(arena: &WeightedArena) -> Self {
        let succ = (0..arena.num_vertices())
            .map(|v| {
                arena
                    .out_edges(v)
                    .iter()
                    .map(|&e| {
                        let edge = arena.edge(e);
                        (edge.target, edge.weight.clone())
                    })
                    .collect()
            })
            .collect();
        GameGraph {
            owner: arena.owners().to_vec(),
            succ,
            lambda: arena.lambda().value().clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Exact value of every vertex when each follows `policy[v]` (an index into `succ[v]`).
    pub fn evaluate(&self, policy: &[usize]) -> Vec<Rational> {
        let n = self.len();
        let next = |v: usize| &self.succ[v][policy[v]];
        let mut state = vec![0u8; n];
        let mut value: Vec<Option<Rational>> = vec![None; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut v = root;
            while state[v] == 0 {
                state[v] = 1;
                stack.push(v);
                v = next(v).0;
            }
            if state[v] == 1 {
                // `v` closes a cycle inside the current walk.
                let pos = stack.iter().rposition(|&x| x == v).unwrap();
                let cycle: Vec<usize> = stack.drain(pos..).collect();
                let mut s = Rational::zero();
                let mut p = Rational::one();
                for &c in &cycle {
                    s += &p * &next(c).1;
                    p *= &self.lambda;
                }
                let head = s / (Rational::one() - p);
                let mut after = head.clone();
                for &c in cycle[1..].iter().rev() {
                    let val = &next(c).1 + &self.lambda * &after;
                    value[c] = Some(val.clone());
                    after = val;
                }
                value[cycle[0]] = Some(head);
                for &c in &cycle {
                    state[c] = 2;
                }
            }
            while let Some(u) = stack.pop() {
                let (t, w) = next(u);
                let val = w + &self.lambda * value[*t].as_ref().unwrap();
                value[u] = Some(val);
                state[u] = 2;
            }
        }
        value.into_iter().map(Option::unwrap).collect()
    }

    fn q(&self, v: usize, i: usize, values: &[Rational]) -> Rational {
        let (t, w) = &self.succ[v][i];
        w + &self.lambda * &values[*t]
    }

    /// Policy iteration over the vertices where `mode(v)` is `Some(maximize)`;
    /// other vertices keep their policy. Returns the optimal values.
    pub fn policy_iteration(&self, policy: &mut [usize], mode: impl Fn(usize) -> Option<bool>) -> Vec<Rational> {
        loop {
            let values = self.evaluate(policy);
            let mut changed = false;
            for v in 0..self.len() {
                let Some(maximize) = mode(v) else { continue };
                let mut best = policy[v];
                let mut best_q = self.q(v, best, &values);
                for i in 0..self.succ[v].len() {
                    let q = self.q(v, i, &values);
                    if (maximize && q > best_q) || (!maximize && q < best_q) {
                        best = i;
                        best_q = q;
                    }
                }
                if best != policy[v] {
                    policy[v] = best;
                    changed = true;
                }
            }
            if !changed {
                return values;
            }
        }
    }

    /// Co-operative values: every vertex maximizes.
    pub fn coop_values(&self) -> Vec<Rational> {
        let mut policy = vec![0; self.len()];
        self.policy_iteration(&mut policy, |_| Some(true))
    }

    /// Antagonistic values by strategy improvement for Eve against Adam's
    /// best response, both computed exactly.
    pub fn antag_values(&self) -> Vec<Rational> {
        let mut policy = vec![0; self.len()];
        loop {
            let owner = &self.owner;
            let values = self.policy_iteration(&mut policy, |v| (owner[v] == Player::Adam).then_some(false));
            let mut changed = false;
            for v in 0..self.len() {
                if self.owner[v] != Player::Eve {
                    continue;
                }
                let current = self.q(v, policy[v], &values);
                let mut best = policy[v];
                let mut best_q = current;
                for i in 0..self.succ[v].len() {
                    let q = self.q(v, i, &values);
                    if q > best_q {
                        best = i;
                        best_q = q;
                    }
                }
                if best != policy[v] {
                    policy[v] = best;
                    changed = true;
                }
            }
            if !changed {
                return values;
            }
        }
    }

    /// True when `values` satisfy the Bellman equations exactly, with Adam
    /// vertices minimizing when `antagonistic` and maximizing otherwise.
    pub fn is_fixpoint(&self, values: &[Rational], antagonistic: bool) -> bool {
        (0..self.len()).all(|v| {
            let qs = (0..self.succ[v].len()).map(|i| self.q(v, i, values));
            let target = if antagonistic && self.owner[v] == Player::Adam {
                qs.min()
            } else {
                qs.max()
            };
            target.as_ref() == Some(&values[v])
        })
    }
}
