//! Safety games with bad edges, solved by a linear-time attractor.

use std::collections::VecDeque;

use crate::arena::{Player, WeightedArena};

/// A game graph in which Eve must avoid traversing any edge marked bad.
#[derive(Clone, Debug)]
pub struct SafetyGame {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<usize>>,
    /// `bad[v][i]` marks the edge `v -> succ[v][i]`.
    pub bad: Vec<Vec<bool>>,
    pub initial: usize,
}

/// Outcome of a safety game. Strategies are indices into `succ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetySolution {
    pub winner: Player,
    /// Eve's safe choice at every vertex outside Adam's attractor.
    pub eve_strategy: Vec<Option<usize>>,
    /// Adam's forcing choice at every Adam vertex inside his attractor.
    pub adam_strategy: Vec<Option<usize>>,
    /// Attractor rank: number of moves within which Adam forces a bad edge.
    pub rank: Vec<Option<usize>>,
}

impl SafetyGame {
    pub fn from_arena(arena: &WeightedArena, bad_edges: &[usize]) -> Self {
        let n = arena.num_vertices();
        let mut bad = vec![Vec::new(); n];
        let mut succ = vec![Vec::new(); n];
        for (v, (s, b)) in succ.iter_mut().zip(bad.iter_mut()).enumerate() {
            for &e in arena.out_edges(v) {
                s.push(arena.edge(e).target);
                b.push(bad_edges.contains(&e));
            }
        }
        SafetyGame {
            owner: arena.owners().to_vec(),
            succ,
            bad,
            initial: arena.initial(),
        }
    }

    pub fn solve(&self) -> SafetySolution {
        solve_safety(self)
    }
}

/// Computes Adam's attractor to the bad edges and both positional witnesses.
pub fn solve_safety(game: &SafetyGame) -> SafetySolution {
    let n = game.owner.len();
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for u in 0..n {
        for (i, &v) in game.succ[u].iter().enumerate() {
            if !game.bad[u][i] {
                preds[v].push((u, i));
            }
        }
    }
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut adam_strategy = vec![None; n];
    // Eve vertices: number of edges not yet known to be losing.
    let mut remaining: Vec<usize> = (0..n)
        .map(|u| game.bad[u].iter().filter(|&&b| !b).count())
        .collect();
    let mut queue = VecDeque::new();
    for u in 0..n {
        match game.owner[u] {
            Player::Adam => {
                if let Some(i) = game.bad[u].iter().position(|&b| b) {
                    rank[u] = Some(1);
                    adam_strategy[u] = Some(i);
                    queue.push_back(u);
                }
            }
            Player::Eve => {
                if remaining[u] == 0 {
                    rank[u] = Some(1);
                    queue.push_back(u);
                }
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        let r = rank[v].unwrap();
        for &(u, i) in &preds[v] {
            if rank[u].is_some() {
                continue;
            }
            match game.owner[u] {
                Player::Adam => {
                    rank[u] = Some(r + 1);
                    adam_strategy[u] = Some(i);
                    queue.push_back(u);
                }
                Player::Eve => {
                    remaining[u] -= 1;
                    if remaining[u] == 0 {
                        rank[u] = Some(r + 1);
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let mut eve_strategy = vec![None; n];
    for u in 0..n {
        if game.owner[u] == Player::Eve && rank[u].is_none() {
            eve_strategy[u] = (0..game.succ[u].len()).find(|&i| !game.bad[u][i] && rank[game.succ[u][i]].is_none());
        }
    }
    let winner = if rank[game.initial].is_some() {
        Player::Adam
    } else {
        Player::Eve
    };
    SafetySolution {
        winner,
        eve_strategy,
        adam_strategy,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_bad_set() {
        let g = SafetyGame {
            owner: vec![Player::Eve, Player::Adam],
            succ: vec![vec![0, 1], vec![0]],
            bad: vec![vec![false, false], vec![false]],
            initial: 0,
        };
        let s = g.solve();
        assert_eq!(s.winner, Player::Eve);
        assert!(s.eve_strategy[0].is_some());
    }

    #[test]
    fn chain_avoidance() {
        let g = SafetyGame {
            owner: vec![Player::Eve, Player::Adam, Player::Adam],
            succ: vec![vec![1, 2], vec![1], vec![2]],
            bad: vec![vec![false, true], vec![false], vec![false]],
            initial: 0,
        };
        let s = g.solve();
        assert_eq!(s.winner, Player::Eve);
        assert_eq!(s.eve_strategy[0], Some(0));
    }

    #[test]
    fn forced_through_adam() {
        // Eve at 0 must go through Adam vertex 1, which can pick a bad edge.
        let g = SafetyGame {
            owner: vec![Player::Eve, Player::Adam, Player::Adam],
            succ: vec![vec![1, 2], vec![0, 2], vec![1]],
            bad: vec![vec![false, false], vec![false, true], vec![false]],
            initial: 0,
        };
        let s = g.solve();
        assert_eq!(s.winner, Player::Adam);
        assert_eq!(s.adam_strategy[1], Some(1));
        assert_eq!(s.rank[0], Some(3));
    }
}
