//! Benchmark instance generators with independently checkable answers.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::arena::{format_arena, Player, WeightedArena};
use crate::automaton::{format_automaton, WeightedAutomaton};
use crate::error::Error;
use crate::rational::{format_rational, DiscountFactor, Rational};
use crate::regret_all::solve_regret_all;
use crate::regret_positional::zero_regret_positional;
use crate::regret_word::zero_regret_word;
use crate::report::Config;
use crate::values::antag_value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Arena(WeightedArena),
    Automaton(WeightedAutomaton),
}

impl Artifact {
    pub fn to_text(&self) -> String {
        match self {
            Artifact::Arena(a) => format_arena(a),
            Artifact::Automaton(a) => format_automaton(a),
        }
    }
}

/// The property a generated instance is declared to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    RegretAll(Rational),
    ZeroRegretPositional(bool),
    ZeroRegretWord(bool),
}

impl Expected {
    pub fn to_json(&self) -> Value {
        match self {
            Expected::RegretAll(r) => json!({"property": "regret_all", "value": format_rational(r)}),
            Expected::ZeroRegretPositional(b) => json!({"property": "zero_regret_positional", "answer": b}),
            Expected::ZeroRegretWord(b) => json!({"property": "zero_regret_word", "answer": b}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedInstance {
    pub artifact: Artifact,
    pub expected: Expected,
    pub provenance: Map<String, Value>,
}

impl GeneratedInstance {
    /// Sidecar JSON: the expected property and how it was obtained.
    pub fn sidecar(&self) -> Value {
        json!({"expected": self.expected.to_json(), "provenance": Value::Object(self.provenance.clone())})
    }

    pub fn arena(&self) -> Option<&WeightedArena> {
        match &self.artifact {
            Artifact::Arena(a) => Some(a),
            Artifact::Automaton(_) => None,
        }
    }

    pub fn automaton(&self) -> Option<&WeightedAutomaton> {
        match &self.artifact {
            Artifact::Automaton(a) => Some(a),
            Artifact::Arena(_) => None,
        }
    }

    /// Runs the solver named by the expected property and compares.
    pub fn verify(&self, cfg: &Config) -> Result<bool, Error> {
        Ok(match (&self.expected, &self.artifact) {
            (Expected::RegretAll(r), Artifact::Arena(a)) => solve_regret_all(a, cfg)?.value == *r,
            (Expected::ZeroRegretPositional(b), Artifact::Arena(a)) => zero_regret_positional(a, cfg)?.answer == *b,
            (Expected::ZeroRegretWord(b), Artifact::Automaton(a)) => zero_regret_word(a, cfg)?.answer == *b,
            _ => return Err(Error::Precondition("expected property does not match the artifact".into())),
        })
    }
}

fn fresh(names: &HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while names.contains(&name) {
        name.push('_');
    }
    name
}

/// Wraps `g` so that its antagonistic value can be read off a regret value.
pub fn aval_gadget(g: &WeightedArena) -> GeneratedInstance {
    let lambda = g.lambda().clone();
    let k = g.max_weight() / lambda.complement();
    let aval = antag_value(g)[g.initial()].clone();
    let n = g.num_vertices();
    let mut names: Vec<String> = g.names().to_vec();
    let mut owners: Vec<Player> = g.owners().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    for (base, owner) in [
        ("gadget_init", Player::Eve),
        ("gadget_branch", Player::Adam),
        ("gadget_high", Player::Adam),
        ("gadget_low", Player::Adam),
    ] {
        let name = fresh(&taken, base);
        taken.insert(name.clone());
        names.push(name);
        owners.push(owner);
    }
    let (init, branch, high, low) = (n, n + 1, n + 2, n + 3);
    let one = Rational::one();
    let three = Rational::from_integer(3.into());
    let two = Rational::from_integer(2.into());
    let mut edges: Vec<(usize, usize, Rational)> =
        g.edges().iter().map(|e| (e.source, e.target, e.weight.clone())).collect();
    edges.push((init, g.initial(), Rational::zero()));
    edges.push((init, branch, Rational::zero()));
    edges.push((branch, high, &k + &one));
    edges.push((branch, low, -(&three * &k) - &two));
    edges.push((high, high, Rational::zero()));
    edges.push((low, low, Rational::zero()));
    let arena = WeightedArena::new(names, owners, edges, init, lambda.clone()).expect("gadget preserves validity");
    let expected = lambda.value() * (&k + &one - &aval);
    let mut provenance = Map::new();
    provenance.insert("generator".into(), json!("aval-gadget"));
    provenance.insert("K".into(), json!(format_rational(&k)));
    provenance.insert("aval".into(), json!(format_rational(&aval)));
    provenance.insert("check".into(), json!("regret_all = lambda (K + 1 - aVal)"));
    GeneratedInstance {
        artifact: Artifact::Arena(arena),
        expected: Expected::RegretAll(expected),
        provenance,
    }
}

/// A directed graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn successors(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect();
        set.into_iter().collect()
    }

    fn reachable(&self, from: usize, to: usize, blocked: &[bool]) -> bool {
        if blocked[from] {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen[b] && !blocked[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        false
    }
}

/// Parses `p edge N M` and `e U V` lines with 1-based vertices; `c` lines
/// are comments.
pub fn parse_graph(text: &str) -> Result<Graph, Error> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(Error::syntax(i + 1, 1, "expected `p edge N M`"));
                }
                n = Some(toks[2].parse::<usize>().map_err(|e| Error::syntax(i + 1, 8, e.to_string()))?);
            }
            Some("e") => {
                let n = n.ok_or_else(|| Error::syntax(i + 1, 1, "`e` before `p` line"))?;
                if toks.len() != 3 {
                    return Err(Error::syntax(i + 1, 1, "expected `e U V`"));
                }
                let mut ends = [0usize; 2];
                for (j, end) in ends.iter_mut().enumerate() {
                    let v: usize = toks[j + 1].parse().map_err(|e: std::num::ParseIntError| Error::syntax(i + 1, 3, e.to_string()))?;
                    if v == 0 || v > n {
                        return Err(Error::syntax(i + 1, 3, format!("vertex {v} out of range")));
                    }
                    *end = v - 1;
                }
                edges.push((ends[0], ends[1]));
            }
            Some(other) => return Err(Error::syntax(i + 1, 1, format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or(Error::Missing("`p edge` line"))?;
    Ok(Graph { n, edges })
}

/// Exhaustive check: enumerates simple `s1`-`t1` paths and searches for an
/// `s2`-`t2` path avoiding each.
pub fn has_disjoint_paths(g: &Graph, s1: usize, t1: usize, s2: usize, t2: usize) -> bool {
    fn walk(g: &Graph, v: usize, t1: usize, s2: usize, t2: usize, on: &mut Vec<bool>) -> bool {
        if v == t1 {
            return g.reachable(s2, t2, on);
        }
        for w in g.successors(v) {
            if !on[w] {
                on[w] = true;
                let found = walk(g, w, t1, s2, t2, on);
                on[w] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let mut on = vec![false; g.n];
    on[s1] = true;
    walk(g, s1, t1, s2, t2, &mut on)
}

/// The positional zero-regret gadget built from a two-disjoint-paths
/// instance. Vertices are 0-based; all four terminals must be distinct.
pub fn gen_2dp(
    graph: &Graph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
    lambda: &DiscountFactor,
    r: &Rational,
) -> Result<GeneratedInstance, Error> {
    let ends = [s1, t1, s2, t2];
    if ends.iter().any(|&v| v >= graph.n) {
        return Err(Error::Precondition("terminal out of range".into()));
    }
    if ends.iter().collect::<HashSet<_>>().len() != 4 {
        return Err(Error::Precondition("s1, t1, s2, t2 must be distinct".into()));
    }
    let mut g = Graph {
        n: graph.n,
        edges: graph.edges.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
    };
    let none = vec![false; g.n];
    if !g.reachable(s1, t1, &none) || !g.reachable(s2, t2, &none) {
        return Err(Error::Precondition("t1 or t2 is unreachable from its source".into()));
    }
    // Targets with out-edges get a fresh sink successor that takes their role.
    let mut targets = [t1, t2];
    let mut added = Vec::new();
    for t in targets.iter_mut() {
        if !g.successors(*t).is_empty() {
            g.edges.push((*t, g.n));
            added.push(g.n);
            *t = g.n;
            g.n += 1;
        }
    }
    let [t1, t2] = targets;
    let disjoint = has_disjoint_paths(&g, s1, t1, s2, t2);

    let nv = g.n;
    let alpha = (r + Rational::one()) / lambda.pow(nv);
    let a = lambda.complement() * &alpha;
    let b = lambda.complement() * &alpha * &alpha;
    let mut names: Vec<String> = (0..graph.n).map(|v| format!("v{}", v + 1)).collect();
    for (i, _) in added.iter().enumerate() {
        names.push(format!("t{}_sink", i + 1));
    }
    let mut owners = vec![Player::Adam; nv];
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for &(u, v) in &g.edges {
        if v == t1 {
            let eve = names.len();
            let wait = eve + 1;
            let label = format!("{}_{}", names[u], names[v]);
            names.push(format!("choose_{label}"));
            names.push(format!("detour_{label}"));
            owners.push(Player::Eve);
            owners.push(Player::Adam);
            edges.push((u, eve, Rational::zero()));
            edges.push((eve, t1, Rational::zero()));
            edges.push((eve, wait, Rational::zero()));
            edges.push((wait, wait, Rational::zero()));
            edges.push((wait, s2, Rational::zero()));
        } else {
            edges.push((u, v, Rational::zero()));
        }
    }
    edges.push((t1, t1, a.clone()));
    edges.push((t2, t2, b.clone()));
    for v in 0..nv {
        if v != t1 && v != t2 && g.successors(v).is_empty() {
            edges.push((v, v, Rational::zero()));
        }
    }
    let arena = WeightedArena::new(names, owners, edges, s1, lambda.clone())?;
    let mut provenance = Map::new();
    provenance.insert("generator".into(), json!("2dp"));
    provenance.insert("r".into(), json!(format_rational(r)));
    provenance.insert("alpha".into(), json!(format_rational(&alpha)));
    provenance.insert("A".into(), json!(format_rational(&a)));
    provenance.insert("B".into(), json!(format_rational(&b)));
    provenance.insert("disjoint_paths".into(), json!(disjoint));
    provenance.insert("check".into(), json!("exhaustive vertex-disjoint path search"));
    Ok(GeneratedInstance {
        artifact: Artifact::Arena(arena),
        expected: Expected::ZeroRegretPositional(!disjoint),
        provenance,
    })
}

/// A CNF formula over variables `1..=vars`; literals are signed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

/// DIMACS CNF: `p cnf VARS CLAUSES`, then zero-terminated clauses.
pub fn parse_cnf(text: &str) -> Result<Cnf, Error> {
    let mut vars = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") | Some("%") => continue,
            Some("p") => {
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(Error::syntax(i + 1, 1, "expected `p cnf VARS CLAUSES`"));
                }
                vars = Some(toks[2].parse::<usize>().map_err(|e| Error::syntax(i + 1, 7, e.to_string()))?);
            }
            Some(_) => {
                let vars = vars.ok_or_else(|| Error::syntax(i + 1, 1, "clause before `p` line"))?;
                for t in toks {
                    let l: i32 = t.parse().map_err(|e: std::num::ParseIntError| Error::syntax(i + 1, 1, e.to_string()))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut current));
                    } else if l.unsigned_abs() as usize > vars {
                        return Err(Error::syntax(i + 1, 1, format!("literal {l} out of range")));
                    } else {
                        current.push(l);
                    }
                }
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let vars = vars.ok_or(Error::Missing("`p cnf` line"))?;
    Ok(Cnf { vars, clauses })
}

/// First satisfying assignment in lexicographic order (false before true).
pub fn brute_force_sat(cnf: &Cnf) -> Option<Vec<bool>> {
    (0u64..1 << cnf.vars).find_map(|bits| {
        let a: Vec<bool> = (0..cnf.vars).map(|j| bits >> (cnf.vars - 1 - j) & 1 == 1).collect();
        cnf.satisfied_by(&a).then_some(a)
    })
}

/// Which right sub-automaton `gen_sat` attaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatEncoding {
    /// Clause symbol picks a variable, `#` picks its value, the clause symbol
    /// is read again to check it. Alternative runs may check a different
    /// clause than the one that picked the variable, so a satisfiable
    /// formula can still force positive regret.
    ValueChooser,
    /// `#^m` walks a binary tree whose leaves are full assignments, then the
    /// clause symbol is checked against the leaf. The left sub-automaton
    /// reads `#^m i` instead of `i # i`. Exponential in the number of variables.
    AssignmentTree,
}

struct AutBuilder {
    states: Vec<String>,
    trans: Vec<(usize, usize, usize, Rational)>,
}

impl AutBuilder {
    fn state(&mut self, name: String) -> usize {
        self.states.push(name);
        self.states.len() - 1
    }

    fn add(&mut self, from: usize, a: usize, to: usize, w: i64) {
        self.trans.push((from, a, to, Rational::from_integer(w.into())));
    }
}

/// The word-adversary zero-regret automaton for a CNF formula.
pub fn gen_sat(cnf: &Cnf, encoding: SatEncoding, lambda: &DiscountFactor) -> Result<GeneratedInstance, Error> {
    if cnf.vars == 0 || cnf.clauses.is_empty() {
        return Err(Error::Precondition("formula needs at least one variable and one clause".into()));
    }
    let n = cnf.clauses.len();
    let m = cnf.vars;
    let mut alphabet = vec!["bail".to_string(), "#".to_string()];
    alphabet.extend((1..=n).map(|i| i.to_string()));
    let (bail, hash) = (0, 1);
    let clause_sym = |i: usize| i + 2;
    let mut b = AutBuilder {
        states: Vec::new(),
        trans: Vec::new(),
    };
    let init = b.state("init".into());
    let left = b.state("left".into());
    let right = b.state("right".into());
    let bot0 = b.state("bot0".into());
    let bot_z = b.state("botZ".into());
    let bot1 = b.state("bot1".into());
    for a in 0..alphabet.len() {
        b.add(init, a, left, 0);
        b.add(init, a, right, 0);
        b.add(bot0, a, bot0, 0);
        b.add(bot_z, a, bot_z, 1);
        b.add(bot1, a, bot1, 1);
    }
    b.add(left, bail, bot0, 0);
    b.add(right, bail, bot_z, 0);
    let left_entry;
    let right_entry;
    match encoding {
        SatEncoding::ValueChooser => {
            left_entry = b.state("clause".into());
            for i in 0..n {
                let pick = b.state(format!("clause{}", i + 1));
                let check = b.state(format!("clause{}#", i + 1));
                b.add(left_entry, clause_sym(i), pick, 1);
                b.add(pick, hash, check, 1);
                b.add(check, clause_sym(i), bot1, 1);
            }
            right_entry = b.state("q0".into());
            let mut vars = Vec::with_capacity(m);
            for j in 1..=m {
                let x = b.state(format!("x{j}"));
                let t = b.state(format!("x{j}true"));
                let f = b.state(format!("x{j}false"));
                b.add(x, hash, t, 1);
                b.add(x, hash, f, 1);
                vars.push((x, t, f));
            }
            for (i, clause) in cnf.clauses.iter().enumerate() {
                let mut seen = BTreeSet::new();
                for &l in clause {
                    let j = l.unsigned_abs() as usize - 1;
                    if seen.insert(j) {
                        b.add(right_entry, clause_sym(i), vars[j].0, 1);
                    }
                }
                let mut checks = BTreeSet::new();
                for &l in clause {
                    let j = l.unsigned_abs() as usize - 1;
                    checks.insert(if l > 0 { vars[j].1 } else { vars[j].2 });
                }
                for s in checks {
                    b.add(s, clause_sym(i), bot1, 1);
                }
            }
        }
        SatEncoding::AssignmentTree => {
            left_entry = b.state("chain0".into());
            let mut prev = left_entry;
            for k in 1..=m {
                let next = b.state(format!("chain{k}"));
                b.add(prev, hash, next, 1);
                prev = next;
            }
            for i in 0..n {
                b.add(prev, clause_sym(i), bot1, 1);
            }
            right_entry = b.state("tree".into());
            let mut level = vec![(right_entry, String::new())];
            for _ in 0..m {
                let mut next = Vec::with_capacity(level.len() * 2);
                for (s, bits) in &level {
                    for bit in ['0', '1'] {
                        let label = format!("{bits}{bit}");
                        let child = b.state(format!("tree{label}"));
                        b.add(*s, hash, child, 1);
                        next.push((child, label));
                    }
                }
                level = next;
            }
            for (s, bits) in &level {
                let assignment: Vec<bool> = bits.chars().map(|c| c == '1').collect();
                for (i, clause) in cnf.clauses.iter().enumerate() {
                    if clause.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)) {
                        b.add(*s, clause_sym(i), bot1, 1);
                    }
                }
            }
        }
    }
    for a in 0..alphabet.len() {
        if a != bail {
            b.add(left, a, left_entry, 0);
            b.add(right, a, right_entry, 0);
        }
    }
    // Every missing transition falls into the zero sink.
    let k = alphabet.len();
    let mut defined = vec![false; b.states.len() * k];
    for &(p, a, _, _) in &b.trans {
        defined[p * k + a] = true;
    }
    for p in 0..b.states.len() {
        for a in 0..k {
            if !defined[p * k + a] {
                b.add(p, a, bot0, 0);
            }
        }
    }
    let aut = WeightedAutomaton::new(b.states, init, alphabet, b.trans, lambda.clone())?;
    let sat = brute_force_sat(cnf);
    let mut provenance = Map::new();
    provenance.insert("generator".into(), json!("sat"));
    provenance.insert(
        "encoding".into(),
        json!(match encoding {
            SatEncoding::ValueChooser => "chooser",
            SatEncoding::AssignmentTree => "tree",
        }),
    );
    provenance.insert("Z".into(), json!("1"));
    provenance.insert("satisfiable".into(), json!(sat.is_some()));
    if let Some(a) = &sat {
        provenance.insert("assignment".into(), json!(a));
    }
    provenance.insert("check".into(), json!("brute-force SAT"));
    Ok(GeneratedInstance {
        artifact: Artifact::Automaton(aut),
        expected: Expected::ZeroRegretWord(sat.is_some()),
        provenance,
    })
}
