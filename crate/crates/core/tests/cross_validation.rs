mod common;

use common::Rng;
use oceanic::{
    classify_region, entrant_ratio_check, exact_values, interior_values, two_miner_values,
    OceanicGame, RegionLabel,
};

fn max_gap(a: &oceanic::ValueProfile, b: &oceanic::ValueProfile) -> f64 {
    a.entries()
        .zip(b.entries())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn exact_matches_two_miner_formula_in_every_region() {
    let mut rng = Rng::new(1);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..1000 {
        let w = rng.simplex(3);
        let g = OceanicGame::new(0.5, vec![w[0], w[1]], w[2])
            .unwrap()
            .normalize();
        seen.insert(classify_region(&g).unwrap());
        let gap = max_gap(&exact_values(&g).unwrap(), &two_miner_values(&g).unwrap());
        assert!(gap < 1e-9, "{g:?}: {gap}");
    }
    for region in [
        RegionLabel::OceanMajority,
        RegionLabel::BalanceOfPower,
        RegionLabel::FirstInControl,
        RegionLabel::SecondInControl,
    ] {
        assert!(seen.contains(&region), "{region} never sampled");
    }
}

#[test]
fn exact_matches_interior_formula() {
    let mut rng = Rng::new(2);
    for i in 0..500 {
        let m = 1 + i % 8;
        let alpha = rng.range(0.5, 0.98);
        let shares = rng.simplex(m);
        let majors: Vec<f64> = shares.iter().map(|s| s * (1.0 - alpha)).collect();
        let g = OceanicGame::new(0.5, majors, alpha).unwrap().normalize();
        assert!(g.is_interior());
        let gap = max_gap(&exact_values(&g).unwrap(), &interior_values(&g).unwrap());
        assert!(gap < 1e-9, "{g:?}: {gap}");
    }
}

#[test]
fn entrant_ratio_identity_for_any_quota() {
    let mut rng = Rng::new(3);
    let mut checked = 0;
    while checked < 200 {
        let quota = rng.range(0.05, 0.95);
        let m = 1 + rng.below(6);
        let total = 100.0;
        let majors_total = rng.range(0.0, quota) * total;
        let ocean = total - majors_total;
        if ocean < quota * total {
            continue;
        }
        let majors: Vec<f64> = rng.simplex(m).iter().map(|s| s * majors_total).collect();
        let base = OceanicGame::new(quota, majors, ocean).unwrap();
        // the entrant keeps r(M) + w < q and q <= alpha in the grown game
        let w_max = (ocean - quota * total) / quota;
        let w_max = w_max.min((quota * total - majors_total) / (1.0 - quota));
        if w_max <= 1e-6 {
            continue;
        }
        let w = rng.range(1e-6, w_max);
        let check = entrant_ratio_check(&base, w).unwrap();
        if !check.entrant_game_interior {
            continue;
        }
        assert!(
            check.gap < 1e-9,
            "q = {quota}, {base:?}, w = {w}: {}",
            check.gap
        );
        checked += 1;
    }
}
