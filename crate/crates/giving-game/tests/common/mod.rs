//! Shared helpers for the integration suites: a brute-force reference
//! implementation written straight from the game rules, and seeded corpora.
//!
//! The reference code deliberately shares no logic with the library. It
//! keeps raw value grids, rescans column maxima on every query, and stops a
//! branch at the first pass whose mirror cell ties its column maximum. Only
//! raw cell values are extracted from the library matrix type.

#![allow(dead_code)]

use std::collections::BTreeSet;

use giving_game::generate::{generate, GeneratorSpec};
use giving_game::matrix::{AgentId, PreferenceMatrix};

pub struct RawGrid {
    pub n: usize,
    /// vals[x][y]: tokens y handed to x; diagonal entries unused, kept 0.
    pub vals: Vec<Vec<u64>>,
}

impl RawGrid {
    pub fn of(m: &PreferenceMatrix) -> RawGrid {
        let n = m.n();
        let vals = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        if x == y {
                            0
                        } else {
                            m.value(AgentId(x), AgentId(y))
                        }
                    })
                    .collect()
            })
            .collect();
        RawGrid { n, vals }
    }

    pub fn col_max(&self, x: usize) -> u64 {
        (0..self.n)
            .filter(|&y| y != x)
            .map(|y| self.vals[x][y])
            .max()
            .expect("at least two agents")
    }

    pub fn is_max(&self, x: usize, y: usize) -> bool {
        self.vals[x][y] == self.col_max(x)
    }

    /// Agents the holder x may pass to: off-diagonal column-x maxima.
    pub fn receivers(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| y != x && self.is_max(x, y))
            .collect()
    }
}

/// Every pair some run from `start` ends up alternating between, found by
/// exhaustive depth-first play over the raw grid. A pass x -> y whose
/// mirror (y, x) already ties its column maximum locks {x, y} and ends the
/// branch; any other pass bumps the mirror and continues.
pub fn oracle_stability_pairs(m: &PreferenceMatrix, start: usize) -> BTreeSet<(usize, usize)> {
    let mut grid = RawGrid::of(m);
    let mut pairs = BTreeSet::new();
    explore(&mut grid, start, &mut pairs);
    pairs
}

fn explore(g: &mut RawGrid, holder: usize, pairs: &mut BTreeSet<(usize, usize)>) {
    for y in g.receivers(holder) {
        if g.is_max(y, holder) {
            pairs.insert((holder.min(y), holder.max(y)));
            continue;
        }
        g.vals[y][holder] += 1;
        explore(g, y, pairs);
        g.vals[y][holder] -= 1;
    }
}

/// Seeded corpus sweeping sizes 2..=max_n and max values 0..=max_value.
/// The (i % a, i % b) pairing cycles through all combinations.
pub fn corpus(count: usize, max_n: usize, max_value: u64, seed_base: u64) -> Vec<PreferenceMatrix> {
    (0..count)
        .map(|i| {
            let spec = GeneratorSpec::Random {
                n: 2 + i % (max_n - 1),
                max_value: i as u64 % (max_value + 1),
                seed: seed_base + i as u64,
            };
            generate(&spec).expect("valid spec")
        })
        .collect()
}

pub fn id(m: &PreferenceMatrix, label: &str) -> AgentId {
    m.agent_by_label(label).expect("known label")
}

pub fn label_pair(m: &PreferenceMatrix, p: giving_game::matrix::Pair) -> (String, String) {
    (m.label(p.lo()).to_string(), m.label(p.hi()).to_string())
}
