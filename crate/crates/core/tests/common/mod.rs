#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use oceanic::montecarlo::{partition_rng, uniform};
use oceanic::FiniteVotingGame;
use rand_chacha::ChaCha8Rng;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(partition_rng(seed, 0))
    }

    pub fn unit(&mut self) -> f64 {
        uniform(&mut self.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    /// Point of the probability simplex with `k` coordinates.
    pub fn simplex(&mut self, k: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| -(1.0 - self.unit()).ln()).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / sum).collect()
    }
}

/// Shapley-Shubik indices by walking all `(m + n)!` orderings. Players
/// `0..m` are the majors, the rest are atoms. Returns major indices and the
/// index of one atom.
pub fn naive_shapley(fg: &FiniteVotingGame) -> (Vec<BigRational>, BigRational) {
    let m = fg.major_count();
    let players = m + fg.atom_count;
    let mut major_counts = vec![0u64; m];
    let mut atom_count = 0u64;
    let mut total = 0u64;
    let mut order: Vec<usize> = (0..players).collect();
    permutations(&mut order, players, &mut |perm| {
        total += 1;
        let mut mask = 0u32;
        let mut atoms = 0usize;
        for &p in perm {
            let (next_mask, next_atoms) = if p < m {
                (mask | 1 << p, atoms)
            } else {
                (mask, atoms + 1)
            };
            if !fg.wins(mask, atoms) && fg.wins(next_mask, next_atoms) {
                if p < m {
                    major_counts[p] += 1;
                } else {
                    atom_count += 1;
                }
                break;
            }
            mask = next_mask;
            atoms = next_atoms;
        }
    });
    let total = BigInt::from(total);
    let majors = major_counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), total.clone()))
        .collect();
    let atom = if fg.atom_count == 0 {
        BigRational::from_integer(BigInt::from(0))
    } else {
        BigRational::new(
            BigInt::from(atom_count),
            total * BigInt::from(fg.atom_count as u64),
        )
    };
    (majors, atom)
}

/// Heap's algorithm.
fn permutations(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        permutations(items, k - 1, visit);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    permutations(items, k - 1, visit);
}

/// Games with `m + n <= 8` used for the exhaustive comparison: integer-grid
/// weights that land exactly on the quota, plus random weights and quotas.
pub fn small_games() -> Vec<(oceanic::OceanicGame, usize)> {
    use oceanic::OceanicGame;
    let mut rng = Rng::new(2024);
    let mut games = Vec::new();
    for m in 0..=4usize {
        for n in 0..=(8 - m) {
            if m == 0 && n == 0 {
                continue;
            }
            let mut configs: Vec<(f64, Vec<f64>, f64)> = Vec::new();
            // integer grid: majors 1..=m, ocean n units, quota half the total
            let majors: Vec<f64> = (1..=m).map(|i| i as f64).collect();
            configs.push((0.5, majors.clone(), n as f64));
            configs.push((0.3, majors.iter().map(|w| w * 2.0).collect(), n as f64));
            for _ in 0..3 {
                let quota = rng.range(0.05, 0.95);
                let majors: Vec<f64> = (0..m).map(|_| rng.range(0.05, 1.0)).collect();
                let ocean = if n == 0 { 0.0 } else { rng.range(0.1, 2.0) };
                configs.push((quota, majors, ocean));
            }
            for (quota, majors, ocean) in configs {
                let ocean = if n == 0 { 0.0 } else { ocean };
                if let Ok(g) = OceanicGame::new(quota, majors, ocean) {
                    games.push((g, n));
                }
            }
        }
    }
    games
}
