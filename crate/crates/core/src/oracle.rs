//! Finite oracle: the ocean split into `n` equal atoms, scored with the
//! Shapley-Shubik index of the resulting weighted voting game.
//!
//! Players are the `m` majors plus `n` identical atoms. For major `i`, the
//! coalition ahead of it in a random ordering is a subset `S` of the other
//! majors plus `k` atoms; all orderings with the same `(S, k)` share the
//! probability `C(n,k) (s+k)! (m-1-s+n-k)! / (m+n)!` summed over which atoms.
//! Pivot decisions are collected as integer counts per `(s, k)` first and the
//! weights applied afterwards, either in log space or in exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::exact_values;
use crate::game::{Method, OceanicGame, ValueProfile};
use crate::numeric::NeumaierSum;

pub const MAX_ORACLE_MAJORS: usize = 15;
pub const MAX_ORACLE_ATOMS: usize = 500;
pub const MAX_EXACT_PLAYERS: usize = 150;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteVotingGame {
    pub quota_abs: f64,
    pub major_weights: Vec<f64>,
    pub atom_weight: f64,
    pub atom_count: usize,
}

/// Replaces the ocean by `n` players of weight `alpha / n`.
pub fn discretize(game: &OceanicGame, n: usize) -> Result<FiniteVotingGame> {
    if game.ocean() > 0.0 && n == 0 {
        return Err(Error::ZeroAtoms);
    }
    let atom_weight = if n == 0 { 0.0 } else { game.ocean() / n as f64 };
    Ok(FiniteVotingGame {
        quota_abs: game.quota() * game.total(),
        major_weights: game.majors().to_vec(),
        atom_weight,
        atom_count: n,
    })
}

impl FiniteVotingGame {
    pub fn major_count(&self) -> usize {
        self.major_weights.len()
    }

    pub fn player_count(&self) -> usize {
        self.major_count() + self.atom_count
    }

    /// Weight of the majors in `mask`, summed in index order.
    pub fn majors_weight(&self, mask: u32) -> f64 {
        self.major_weights
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1 << j) != 0)
            .map(|(_, w)| w)
            .sum()
    }

    /// Whether the coalition of the majors in `mask` plus `atoms` atoms
    /// reaches the quota. Sums run in a fixed order, and rounding is
    /// monotone, so adding players never turns a winning coalition losing.
    pub fn wins(&self, mask: u32, atoms: usize) -> bool {
        self.majors_weight(mask) + atoms as f64 * self.atom_weight >= self.quota_abs
    }

    /// Whether major `i` turns the coalition `(mask, atoms)` from losing to
    /// winning. `mask` must not contain `i`.
    pub fn major_pivot(&self, mask: u32, atoms: usize, i: usize) -> bool {
        !self.wins(mask, atoms) && self.wins(mask | (1 << i), atoms)
    }

    /// Whether an atom turns the coalition `(mask, atoms)` from losing to
    /// winning.
    pub fn atom_pivot(&self, mask: u32, atoms: usize) -> bool {
        !self.wins(mask, atoms) && self.wins(mask, atoms + 1)
    }

    fn check_tractable(&self) -> Result<()> {
        if self.major_count() > MAX_ORACLE_MAJORS || self.atom_count > MAX_ORACLE_ATOMS {
            return Err(Error::Intractable(format!(
                "oracle supports at most {MAX_ORACLE_MAJORS} majors and {MAX_ORACLE_ATOMS} atoms, got {} and {}",
                self.major_count(),
                self.atom_count
            )));
        }
        Ok(())
    }

    /// `counts[s][k]`: subsets of size `s` of the other majors, combined with
    /// `k` atoms, for which major `i` is pivotal.
    fn major_pivot_counts(&self, i: usize) -> Vec<Vec<u64>> {
        let m = self.major_count();
        let n = self.atom_count;
        let mut counts = vec![vec![0u64; n + 1]; m];
        for mask in 0u32..(1u32 << m) {
            if mask & (1 << i) != 0 {
                continue;
            }
            let s = mask.count_ones() as usize;
            for (k, c) in counts[s].iter_mut().enumerate() {
                if self.major_pivot(mask, k, i) {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// Same for a single atom: `S` ranges over all majors, `k` over the other
    /// `n - 1` atoms.
    fn atom_pivot_counts(&self) -> Vec<Vec<u64>> {
        let m = self.major_count();
        let n = self.atom_count;
        let mut counts = vec![vec![0u64; n.max(1)]; m + 1];
        if n == 0 {
            return counts;
        }
        for mask in 0u32..(1u32 << m) {
            let s = mask.count_ones() as usize;
            for (k, c) in counts[s].iter_mut().enumerate() {
                if self.atom_pivot(mask, k) {
                    *c += 1;
                }
            }
        }
        counts
    }
}

/// Finite indices: one per major and the index of a single atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteShapley {
    pub majors: Vec<f64>,
    pub atom: f64,
    pub atom_count: usize,
}

impl FiniteShapley {
    /// All atoms together, `n` times a single atom's index.
    pub fn ocean_total(&self) -> f64 {
        self.atom * self.atom_count as f64
    }

    pub fn efficiency(&self) -> f64 {
        self.majors.iter().sum::<f64>() + self.ocean_total()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactFiniteShapley {
    pub majors: Vec<BigRational>,
    pub atom: BigRational,
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = NeumaierSum::default();
    table.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        table.push(acc.value());
    }
    table
}

/// Probability that a fixed player sees exactly a given set of `s` majors and
/// `k` specific atoms ahead of it, times the number of ways to pick those
/// atoms out of `pool`, among `players` players in total.
fn log_weight(lf: &[f64], players: usize, s: usize, k: usize, pool: usize) -> f64 {
    let ahead = s + k;
    let behind = players - 1 - ahead;
    lf[pool] - lf[k] - lf[pool - k] + lf[ahead] + lf[behind] - lf[players]
}

fn weighted_sum(counts: &[Vec<u64>], weight: impl Fn(usize, usize) -> f64) -> f64 {
    let mut sum = NeumaierSum::default();
    for (s, row) in counts.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c > 0 {
                sum.add(c as f64 * weight(s, k));
            }
        }
    }
    sum.value()
}

/// Shapley-Shubik indices with log-space weights.
pub fn shapley_detailed(fg: &FiniteVotingGame) -> Result<FiniteShapley> {
    fg.check_tractable()?;
    let m = fg.major_count();
    let n = fg.atom_count;
    let players = m + n;
    let lf = ln_factorials(players.max(1));
    let majors = (0..m)
        .into_par_iter()
        .map(|i| {
            let counts = fg.major_pivot_counts(i);
            weighted_sum(&counts, |s, k| log_weight(&lf, players, s, k, n).exp())
        })
        .collect();
    let atom = if n == 0 {
        0.0
    } else {
        let counts = fg.atom_pivot_counts();
        weighted_sum(&counts, |s, k| log_weight(&lf, players, s, k, n - 1).exp())
    };
    Ok(FiniteShapley {
        majors,
        atom,
        atom_count: n,
    })
}

/// Shapley-Shubik indices as a value profile; the ocean entry is the
/// complement of the majors.
pub fn shapley_index(fg: &FiniteVotingGame) -> Result<ValueProfile> {
    let detailed = shapley_detailed(fg)?;
    Ok(ValueProfile::from_majors(detailed.majors, Method::Oracle))
}

/// Exact rational indices, for at most [`MAX_EXACT_PLAYERS`] players.
pub fn shapley_exact(fg: &FiniteVotingGame) -> Result<ExactFiniteShapley> {
    fg.check_tractable()?;
    let m = fg.major_count();
    let n = fg.atom_count;
    let players = m + n;
    if players > MAX_EXACT_PLAYERS {
        return Err(Error::Intractable(format!(
            "exact oracle supports at most {MAX_EXACT_PLAYERS} players, got {players}"
        )));
    }
    let mut fact = vec![BigInt::one()];
    for k in 1..=players.max(1) {
        let next = &fact[k - 1] * BigInt::from(k);
        fact.push(next);
    }
    let weight = |s: usize, k: usize, pool: usize| -> BigRational {
        let ahead = s + k;
        let behind = players - 1 - ahead;
        let numer = &fact[pool] * &fact[ahead] * &fact[behind];
        let denom = &fact[k] * &fact[pool - k] * &fact[players];
        BigRational::new(numer, denom)
    };
    let sum = |counts: &[Vec<u64>], pool: usize| -> BigRational {
        let mut total = BigRational::zero();
        for (s, row) in counts.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c > 0 {
                    total += weight(s, k, pool) * BigRational::from_integer(BigInt::from(c));
                }
            }
        }
        total
    };
    let majors = (0..m).map(|i| sum(&fg.major_pivot_counts(i), n)).collect();
    let atom = if n == 0 {
        BigRational::zero()
    } else {
        sum(&fg.atom_pivot_counts(), n - 1)
    };
    Ok(ExactFiniteShapley { majors, atom })
}

impl ExactFiniteShapley {
    pub fn to_f64(&self, atom_count: usize) -> FiniteShapley {
        FiniteShapley {
            majors: self
                .majors
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect(),
            atom: self.atom.to_f64().unwrap_or(f64::NAN),
            atom_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub major_gaps: Vec<f64>,
    pub ocean_gap: f64,
    pub max_gap: f64,
}

/// Distance between the finite indices and the exact oceanic values for each
/// atom count in `n_list`. Small games use the rational weights.
pub fn convergence_report(game: &OceanicGame, n_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let exact = exact_values(&game.normalize())?;
    n_list
        .iter()
        .map(|&n| {
            let fg = discretize(game, n)?;
            let finite = if fg.player_count() <= MAX_EXACT_PLAYERS {
                let exact = shapley_exact(&fg)?.to_f64(n);
                ValueProfile::from_majors(exact.majors, Method::Oracle)
            } else {
                shapley_index(&fg)?
            };
            let major_gaps: Vec<f64> = finite
                .major_values
                .iter()
                .zip(&exact.major_values)
                .map(|(a, b)| (a - b).abs())
                .collect();
            let ocean_gap = (finite.ocean_value - exact.ocean_value).abs();
            let max_gap = major_gaps.iter().copied().fold(ocean_gap, f64::max);
            Ok(ConvergenceRow {
                n,
                major_gaps,
                ocean_gap,
                max_gap,
            })
        })
        .collect()
}
