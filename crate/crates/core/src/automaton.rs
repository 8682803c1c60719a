//! Nondeterministic discounted-sum automata and their text format.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{format_rational, DiscountFactor, Rational};
use crate::text;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub symbol: usize,
    pub to: usize,
    pub weight: Rational,
}

/// Total weighted automaton. Transitions for each `(state, symbol)` pair are
/// kept in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: Vec<String>,
    initial: usize,
    alphabet: Vec<String>,
    transitions: Vec<Transition>,
    by_pair: Vec<Vec<usize>>,
    lambda: DiscountFactor,
    max_weight: Rational,
}

impl WeightedAutomaton {
    /// Transitions are `(from, symbol, to, weight)`.
    pub fn new(
        states: Vec<String>,
        initial: usize,
        alphabet: Vec<String>,
        transitions: Vec<(usize, usize, usize, Rational)>,
        lambda: DiscountFactor,
    ) -> Result<Self, Error> {
        let n = states.len();
        let k = alphabet.len();
        let mut names = HashSet::new();
        for s in &states {
            if !names.insert(s) {
                return Err(Error::DuplicateName(s.clone()));
            }
        }
        let mut symbols = HashSet::new();
        for a in &alphabet {
            if !symbols.insert(a) {
                return Err(Error::DuplicateName(a.clone()));
            }
        }
        if initial >= n {
            return Err(Error::Missing("initial state"));
        }
        if k == 0 {
            return Err(Error::Missing("alphabet"));
        }
        let mut by_pair = vec![Vec::new(); n * k];
        let mut stored: Vec<Transition> = Vec::with_capacity(transitions.len());
        let mut max_weight = Rational::zero();
        for (id, (p, a, q, w)) in transitions.into_iter().enumerate() {
            if p >= n || q >= n || a >= k {
                return Err(Error::UnknownName(format!("transition #{id}")));
            }
            if by_pair[p * k + a].iter().any(|&t: &usize| stored[t].to == q) {
                return Err(Error::DuplicateTransition(
                    states[p].clone(),
                    alphabet[a].clone(),
                    states[q].clone(),
                ));
            }
            if w.abs() > max_weight {
                max_weight = w.abs();
            }
            by_pair[p * k + a].push(id);
            stored.push(Transition {
                from: p,
                symbol: a,
                to: q,
                weight: w,
            });
        }
        for p in 0..n {
            for a in 0..k {
                if by_pair[p * k + a].is_empty() {
                    return Err(Error::NotTotal {
                        state: states[p].clone(),
                        symbol: alphabet[a].clone(),
                    });
                }
            }
        }
        Ok(WeightedAutomaton {
            states,
            initial,
            alphabet,
            transitions: stored,
            by_pair,
            lambda,
            max_weight,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: usize) -> &str {
        &self.alphabet[a]
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn lambda(&self) -> &DiscountFactor {
        &self.lambda
    }

    pub fn max_weight(&self) -> &Rational {
        &self.max_weight
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: usize) -> &Transition {
        &self.transitions[id]
    }

    /// Transition ids for `(q, a)` in declaration order.
    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.by_pair[q * self.alphabet.len() + a]
    }

    pub fn is_deterministic(&self) -> bool {
        self.by_pair.iter().all(|l| l.len() == 1)
    }
}

/// Parses the line-oriented automaton format. The alphabet line takes every
/// token literally, so `#` may be a symbol there.
pub fn parse_automaton(input: &str) -> Result<WeightedAutomaton, Error> {
    let mut lambda = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut initial = None;
    let mut raw = Vec::new();
    for line in text::lines(input) {
        match line.keyword() {
            "lambda" => {
                let _ = line.fixed_args(1)?;
                if lambda.is_some() {
                    return Err(line.error(0, "`lambda` given twice"));
                }
                lambda = Some(DiscountFactor::new(line.rational(1)?)?);
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(line.error(0, "`alphabet` given twice"));
                }
                let syms: Vec<String> = line.tokens[1..].iter().map(|t| t.text.to_string()).collect();
                if syms.is_empty() {
                    return Err(line.error(1, "empty alphabet"));
                }
                alphabet = Some(syms);
            }
            "state" => {
                let args = line.args();
                let name = args.first().ok_or_else(|| line.error(1, "`state` expects a name"))?;
                let flag = match args.get(1) {
                    None => false,
                    Some(t) if t.text == "initial" && args.len() == 2 => true,
                    Some(t) => return Err(line.error(2, format!("unexpected token `{}`", t.text))),
                };
                if index.insert(name.text.to_string(), states.len()).is_some() {
                    return Err(Error::DuplicateName(name.text.to_string()));
                }
                if flag {
                    if initial.is_some() {
                        return Err(line.error(2, "second initial state"));
                    }
                    initial = Some(states.len());
                }
                states.push(name.text.to_string());
            }
            "trans" => {
                let args = line.fixed_args(4)?;
                let w = line.rational(4)?;
                raw.push((
                    args[0].text.to_string(),
                    args[1].text.to_string(),
                    args[2].text.to_string(),
                    w,
                ));
            }
            other => return Err(line.error(0, format!("unknown directive `{other}`"))),
        }
    }
    let lambda = lambda.ok_or(Error::Missing("lambda"))?;
    let alphabet = alphabet.ok_or(Error::Missing("alphabet"))?;
    let initial = initial.ok_or(Error::Missing("initial state"))?;
    let mut transitions = Vec::with_capacity(raw.len());
    for (p, a, q, w) in raw {
        let sp = *index.get(&p).ok_or(Error::UnknownName(p))?;
        let sq = *index.get(&q).ok_or(Error::UnknownName(q))?;
        let sa = alphabet
            .iter()
            .position(|s| *s == a)
            .ok_or(Error::UnknownName(a))?;
        transitions.push((sp, sa, sq, w));
    }
    WeightedAutomaton::new(states, initial, alphabet, transitions, lambda)
}

/// Serializes an automaton so that `parse_automaton` reproduces it exactly.
pub fn format_automaton(a: &WeightedAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lambda {}", format_rational(a.lambda().value()));
    let _ = writeln!(s, "alphabet {}", a.alphabet.join(" "));
    for (q, name) in a.states.iter().enumerate() {
        if q == a.initial {
            let _ = writeln!(s, "state {name} initial");
        } else {
            let _ = writeln!(s, "state {name}");
        }
    }
    for t in &a.transitions {
        let _ = writeln!(
            s,
            "trans {} {} {} {}",
            a.states[t.from],
            a.alphabet[t.symbol],
            a.states[t.to],
            format_rational(&t.weight)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn one_state() {
        let a = parse_automaton("lambda 1/2\nalphabet a\nstate q initial\ntrans q a q 0\n").unwrap();
        assert_eq!(a.max_weight(), &int(0));
        assert!(a.is_deterministic());
        assert_eq!(parse_automaton(&format_automaton(&a)).unwrap(), a);
    }

    #[test]
    fn hash_symbol_and_totality() {
        let text = "lambda 1/2\nalphabet # b\nstate q initial\ntrans q # q 1 # comment\n";
        let err = parse_automaton(text).unwrap_err();
        assert_eq!(
            err,
            Error::NotTotal {
                state: "q".into(),
                symbol: "b".into()
            }
        );
        let ok = format!("{text}trans q b q -2\n");
        let a = parse_automaton(&ok).unwrap();
        assert_eq!(a.symbol("#"), Some(0));
        assert_eq!(a.max_weight(), &int(2));
    }
}
