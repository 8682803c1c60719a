//! Weighted arenas, play prefixes and the arena text format.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{format_rational, DiscountFactor, Rational};
use crate::text;

/// The two players. Eve maximizes payoff, Adam is the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn as_str(self) -> &'static str {
        match self {
            Player::Eve => "eve",
            Player::Adam => "adam",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: Rational,
}

/// Two-player edge-weighted game graph with a discount factor.
///
/// Vertices are indexed in declaration order, which is also the canonical
/// tie-break order used by every solver. Out-edges of a vertex are kept
/// sorted by target index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedArena {
    names: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    initial: usize,
    lambda: DiscountFactor,
    max_weight: Rational,
}

impl WeightedArena {
    /// Validates and builds an arena. Edges are `(source, target, weight)`.
    pub fn new(
        names: Vec<String>,
        owners: Vec<Player>,
        edges: Vec<(usize, usize, Rational)>,
        initial: usize,
        lambda: DiscountFactor,
    ) -> Result<Self, Error> {
        assert_eq!(names.len(), owners.len());
        let n = names.len();
        let mut seen = HashMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if initial >= n {
            return Err(Error::Missing("initial vertex"));
        }
        let mut out = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        let mut max_weight = Rational::zero();
        for (id, (u, v, w)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::UnknownName(format!("vertex index {}", u.max(v))));
            }
            if w.abs() > max_weight {
                max_weight = w.abs();
            }
            out[u].push(id);
            stored.push(Edge {
                source: u,
                target: v,
                weight: w,
            });
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_by_key(|&e| stored[e].target);
            for pair in list.windows(2) {
                if stored[pair[0]].target == stored[pair[1]].target {
                    return Err(Error::DuplicateEdge(
                        names[u].clone(),
                        names[stored[pair[0]].target].clone(),
                    ));
                }
            }
            if list.is_empty() {
                return Err(Error::Sink(names[u].clone()));
            }
            if owners[u] == Player::Eve && list.len() < 2 {
                return Err(Error::EveOutDegree(names[u].clone()));
            }
        }
        Ok(WeightedArena {
            names,
            owners,
            edges: stored,
            out,
            initial,
            lambda,
            max_weight,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn is_eve(&self, v: usize) -> bool {
        self.owners[v] == Player::Eve
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids leaving `v`, sorted by target.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let list = &self.out[u];
        list.binary_search_by_key(&v, |&e| self.edges[e].target)
            .ok()
            .map(|i| list[i])
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.edge_between(u, v).map(|e| &self.edges[e].weight)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn lambda(&self) -> &DiscountFactor {
        &self.lambda
    }

    /// `W`, the largest absolute edge weight.
    pub fn max_weight(&self) -> &Rational {
        &self.max_weight
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same graph with a different initial vertex.
    pub fn with_initial(&self, initial: usize) -> WeightedArena {
        let mut copy = self.clone();
        copy.initial = initial;
        copy
    }
}

/// Parses the line-oriented arena format.
pub fn parse_arena(input: &str) -> Result<WeightedArena, Error> {
    let mut lambda = None;
    let mut names: Vec<String> = Vec::new();
    let mut owners = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut init: Option<String> = None;
    let mut raw_edges = Vec::new();
    for line in text::lines(input) {
        match line.keyword() {
            "lambda" => {
                let _ = line.fixed_args(1)?;
                if lambda.is_some() {
                    return Err(line.error(0, "`lambda` given twice"));
                }
                lambda = Some(DiscountFactor::new(line.rational(1)?)?);
            }
            kw @ ("eve" | "adam") => {
                let owner = if kw == "eve" { Player::Eve } else { Player::Adam };
                let args = line.args();
                if args.is_empty() {
                    return Err(line.error(1, format!("`{kw}` expects at least one name")));
                }
                for tok in args {
                    if index.insert(tok.text.to_string(), names.len()).is_some() {
                        return Err(Error::DuplicateName(tok.text.to_string()));
                    }
                    names.push(tok.text.to_string());
                    owners.push(owner);
                }
            }
            "init" => {
                let args = line.fixed_args(1)?;
                if init.is_some() {
                    return Err(line.error(0, "`init` given twice"));
                }
                init = Some(args[0].text.to_string());
            }
            "edge" => {
                let args = line.fixed_args(3)?;
                let w = line.rational(3)?;
                raw_edges.push((args[0].text.to_string(), args[1].text.to_string(), w));
            }
            other => return Err(line.error(0, format!("unknown directive `{other}`"))),
        }
    }
    let lambda = lambda.ok_or(Error::Missing("lambda"))?;
    let init_name = init.ok_or(Error::Missing("initial vertex"))?;
    let initial = *index
        .get(&init_name)
        .ok_or_else(|| Error::UnknownName(init_name.clone()))?;
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (u, v, w) in raw_edges {
        let su = *index.get(&u).ok_or(Error::UnknownName(u))?;
        let sv = *index.get(&v).ok_or(Error::UnknownName(v))?;
        edges.push((su, sv, w));
    }
    WeightedArena::new(names, owners, edges, initial, lambda)
}

/// Serializes an arena so that `parse_arena` reproduces it exactly.
pub fn format_arena(arena: &WeightedArena) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lambda {}", format_rational(arena.lambda().value()));
    for v in 0..arena.num_vertices() {
        let _ = writeln!(s, "{} {}", arena.owner(v).as_str(), arena.name(v));
    }
    let _ = writeln!(s, "init {}", arena.name(arena.initial()));
    for e in arena.edges() {
        let _ = writeln!(
            s,
            "edge {} {} {}",
            arena.name(e.source),
            arena.name(e.target),
            format_rational(&e.weight)
        );
    }
    s
}

/// A finite play prefix with cached discounted partial sums
/// `D(k) = sum_{t<k} lambda^t w(v_t, v_{t+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayPrefix {
    vertices: Vec<usize>,
    sums: Vec<Rational>,
    next_power: Rational,
}

impl PlayPrefix {
    pub fn new(start: usize) -> Self {
        PlayPrefix {
            vertices: vec![start],
            sums: vec![Rational::zero()],
            next_power: num_traits::One::one(),
        }
    }

    pub fn from_vertices(arena: &WeightedArena, vertices: &[usize]) -> Result<Self, Error> {
        let first = *vertices.first().ok_or(Error::Missing("prefix vertex"))?;
        let mut p = PlayPrefix::new(first);
        for &v in &vertices[1..] {
            p.push(arena, v)?;
        }
        Ok(p)
    }

    /// Appends `v`, which must be a successor of the last vertex.
    pub fn push(&mut self, arena: &WeightedArena, v: usize) -> Result<(), Error> {
        let u = self.last();
        let w = arena.weight(u, v).ok_or_else(|| {
            Error::Precondition(format!("no edge {} -> {}", arena.name(u), arena.name(v)))
        })?;
        let d = self.sums.last().unwrap() + &self.next_power * w;
        self.sums.push(d);
        self.next_power *= arena.lambda().value();
        self.vertices.push(v);
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// `D(k)`.
    pub fn sum(&self, k: usize) -> &Rational {
        &self.sums[k]
    }

    /// `Disc(rho[i..j])`, the value of the segment re-based at index `i`.
    pub fn disc(&self, lambda: &DiscountFactor, i: usize, j: usize) -> Rational {
        (&self.sums[j] - &self.sums[i]) / lambda.pow(i)
    }
}
