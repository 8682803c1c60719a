//! Antagonistic and co-operative values and the canonical positional strategies.

use serde_json::{json, Map, Value};

use crate::arena::{Player, WeightedArena};
use crate::error::Error;
use crate::game::GameGraph;
use crate::rational::{format_rational, Rational};

/// Per-vertex `aVal` and `cVal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    pub aval: Vec<Rational>,
    pub cval: Vec<Rational>,
}

impl ValueTable {
    pub fn compute(arena: &WeightedArena) -> Self {
        ValueTable {
            aval: antag_value(arena),
            cval: coop_value(arena),
        }
    }

    pub fn to_json(&self, arena: &WeightedArena) -> Value {
        let mut map = Map::new();
        for v in 0..arena.num_vertices() {
            map.insert(
                arena.name(v).to_string(),
                json!({
                    "aval": format_rational(&self.aval[v]),
                    "cval": format_rational(&self.cval[v]),
                }),
            );
        }
        Value::Object(map)
    }
}

/// `cVal` of every vertex: all vertices act as maximizers.
pub fn coop_value(arena: &WeightedArena) -> Vec<Rational> {
    GameGraph::from_arena(arena).coop_values()
}

/// `aVal` of every vertex by two-player strategy improvement.
pub fn antag_value(arena: &WeightedArena) -> Vec<Rational> {
    GameGraph::from_arena(arena).antag_values()
}

/// `w(u,v) + lambda * x`.
pub fn edge_q(arena: &WeightedArena, u: usize, v: usize, x: &Rational) -> Rational {
    arena.weight(u, v).expect("edge exists") + arena.lambda().value() * x
}

/// Best co-operative continuation from `u` that avoids the successor `v`.
pub fn coop_value_excluding(
    arena: &WeightedArena,
    values: &ValueTable,
    u: usize,
    v: usize,
) -> Result<Rational, Error> {
    if arena.edge_between(u, v).is_none() {
        return Err(Error::Precondition(format!(
            "no edge {} -> {}",
            arena.name(u),
            arena.name(v)
        )));
    }
    arena
        .out_edges(u)
        .iter()
        .map(|&e| arena.edge(e).target)
        .filter(|&t| t != v)
        .map(|t| edge_q(arena, u, t, &values.cval[t]))
        .max()
        .ok_or_else(|| {
            Error::Precondition(format!(
                "{} has no successor other than {}",
                arena.name(u),
                arena.name(v)
            ))
        })
}

/// A positional strategy: for each owned vertex, the chosen successor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    pub owner: Player,
    pub choice: Vec<Option<usize>>,
}

impl PositionalStrategy {
    pub fn target(&self, v: usize) -> Option<usize> {
        self.choice[v]
    }

    /// Checks that every owned vertex is mapped to one of its successors.
    pub fn validate(&self, arena: &WeightedArena) -> Result<(), Error> {
        for v in 0..arena.num_vertices() {
            if arena.owner(v) != self.owner {
                continue;
            }
            match self.choice[v] {
                Some(t) if arena.edge_between(v, t).is_some() => {}
                Some(t) => {
                    return Err(Error::Precondition(format!(
                        "strategy moves {} to non-successor {}",
                        arena.name(v),
                        arena.name(t)
                    )))
                }
                None => return Err(Error::Precondition(format!("strategy undefined at {}", arena.name(v)))),
            }
        }
        Ok(())
    }

    pub fn to_json(&self, arena: &WeightedArena) -> Value {
        let mut map = Map::new();
        for (v, c) in self.choice.iter().enumerate() {
            if let Some(t) = c {
                map.insert(arena.name(v).to_string(), Value::String(arena.name(*t).to_string()));
            }
        }
        Value::Object(map)
    }

    /// Reads `{"vertex": "target"}`; every vertex of `owner` must be present.
    pub fn from_json(arena: &WeightedArena, owner: Player, value: &Value) -> Result<Self, Error> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::syntax(1, 1, "strategy must be a JSON object"))?;
        let mut choice = vec![None; arena.num_vertices()];
        for (k, v) in map {
            let u = arena.vertex(k).ok_or_else(|| Error::UnknownName(k.clone()))?;
            let t = v
                .as_str()
                .and_then(|s| arena.vertex(s))
                .ok_or_else(|| Error::UnknownName(v.to_string()))?;
            if arena.owner(u) == owner {
                choice[u] = Some(t);
            }
        }
        let s = PositionalStrategy { owner, choice };
        s.validate(arena)?;
        Ok(s)
    }
}

/// The canonical strategies built from a value table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalStrategies {
    pub sigma_wc: PositionalStrategy,
    pub tau_wc: PositionalStrategy,
    pub sigma_co: PositionalStrategy,
    pub sigma_cw: PositionalStrategy,
    /// Co-operatively optimal successors of each Eve vertex (empty for Adam).
    pub copt: Vec<Vec<usize>>,
    /// Worst-case optimal successors of each Eve vertex (empty for Adam).
    pub wcopt: Vec<Vec<usize>>,
}

pub fn canonical_strategies(arena: &WeightedArena, values: &ValueTable) -> CanonicalStrategies {
    let n = arena.num_vertices();
    let targets = |u: usize| arena.out_edges(u).iter().map(move |&e| arena.edge(e).target);
    let mut copt = vec![Vec::new(); n];
    let mut wcopt = vec![Vec::new(); n];
    let mut sigma_wc = vec![None; n];
    let mut tau_wc = vec![None; n];
    let mut sigma_co = vec![None; n];
    let mut sigma_cw = vec![None; n];
    for u in 0..n {
        if arena.owner(u) == Player::Adam {
            // lowest-indexed minimizer
            let mut best: Option<(usize, Rational)> = None;
            for t in targets(u) {
                let q = edge_q(arena, u, t, &values.aval[t]);
                if best.as_ref().is_none_or(|(_, b)| q < *b) {
                    best = Some((t, q));
                }
            }
            tau_wc[u] = best.map(|(t, _)| t);
            continue;
        }
        copt[u] = targets(u)
            .filter(|&t| edge_q(arena, u, t, &values.cval[t]) == values.cval[u])
            .collect();
        wcopt[u] = targets(u)
            .filter(|&t| edge_q(arena, u, t, &values.aval[t]) == values.aval[u])
            .collect();
        sigma_co[u] = copt[u].first().copied();
        sigma_wc[u] = wcopt[u].first().copied();
        let mut best: Option<(usize, Rational)> = None;
        for &t in &wcopt[u] {
            let q = edge_q(arena, u, t, &values.cval[t]);
            if best.as_ref().is_none_or(|(_, b)| q > *b) {
                best = Some((t, q));
            }
        }
        sigma_cw[u] = best.map(|(t, _)| t);
    }
    let eve = |choice| PositionalStrategy {
        owner: Player::Eve,
        choice,
    };
    CanonicalStrategies {
        sigma_wc: eve(sigma_wc),
        tau_wc: PositionalStrategy {
            owner: Player::Adam,
            choice: tau_wc,
        },
        sigma_co: eve(sigma_co),
        sigma_cw: eve(sigma_cw),
        copt,
        wcopt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::parse_arena;
    use crate::rational::int;

    pub(crate) const BIGMEM: &str = "lambda 9/10\neve v_I\nadam x v y\ninit v_I\n\
        edge v_I x 1\nedge v_I v 0\nedge v v_I 0\nedge v y 100\nedge y y 100\nedge x x 1\n";

    #[test]
    fn bigmem_tables() {
        let a = parse_arena(BIGMEM).unwrap();
        let t = ValueTable::compute(&a);
        assert_eq!(t.cval, vec![int(900), int(10), int(1000), int(1000)]);
        assert_eq!(t.aval, vec![int(10), int(10), int(9), int(1000)]);
        assert_eq!(coop_value_excluding(&a, &t, 0, 1).unwrap(), int(900));
        assert_eq!(coop_value_excluding(&a, &t, 0, 2).unwrap(), int(10));
        assert!(coop_value_excluding(&a, &t, 1, 1).is_err());
        let c = canonical_strategies(&a, &t);
        assert_eq!(c.sigma_co.target(0), Some(2));
        assert_eq!(c.sigma_cw.target(0), Some(1));
        assert_eq!(c.wcopt[0], vec![1]);
        assert_eq!(c.copt[0], vec![2]);
        assert_eq!(c.tau_wc.target(2), Some(0));
    }

    #[test]
    fn ties_pick_lowest_index() {
        let a = parse_arena("lambda 1/2\neve a\nadam b c\ninit a\nedge a c 0\nedge a b 0\nedge b b 1\nedge c c 1\n").unwrap();
        let t = ValueTable::compute(&a);
        let c = canonical_strategies(&a, &t);
        assert_eq!(c.sigma_co.target(0), Some(1));
        assert_eq!(c.sigma_cw.target(0), Some(1));
        assert_eq!(c.sigma_wc.target(0), Some(1));
    }
}
