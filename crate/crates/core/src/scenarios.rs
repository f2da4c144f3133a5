//! Parameter sweeps: crystallization of a miner out of the ocean, entry of
//! new resources as one miner or as ocean, the entrant-ratio identity, and
//! ratios for observed pool distributions.

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{interior_values, MAX_INTERIOR_MAJORS};
use crate::error::{Error, Result};
use crate::exact::exact_values;
use crate::game::{Method, NormalizedGame, OceanicGame, ValueProfile};
use crate::oracle::{discretize, shapley_index, MAX_ORACLE_MAJORS};

/// Interior formula when its hypotheses hold, exact integration otherwise,
/// and the zero-atom finite game when there is no ocean.
pub fn preferred_values(game: &NormalizedGame) -> Result<ValueProfile> {
    if game.has_half_quota() && game.is_interior() && game.len() <= MAX_INTERIOR_MAJORS {
        return interior_values(game);
    }
    if game.ocean() > 0.0 {
        return exact_values(game);
    }
    if game.len() > MAX_ORACLE_MAJORS {
        return Err(Error::TooManyMajors {
            count: game.len(),
            limit: MAX_ORACLE_MAJORS,
        });
    }
    let fg = discretize(&game.to_game(), 0)?;
    shapley_index(&fg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub label: Option<String>,
    /// Values of the entities of interest, in the order of `value_series`.
    pub values: Vec<f64>,
    /// Ratios of the entities of interest, in the order of `ratio_series`.
    pub ratios: Vec<f64>,
    pub method: Option<Method>,
    /// Whether the row's game satisfies the interior hypothesis.
    pub in_hypothesis: bool,
    pub inversion: bool,
    pub note: Option<String>,
    /// Sum of all values in the row's game, majors and ocean.
    pub value_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub scenario: String,
    pub base: Option<OceanicGame>,
    pub grid: String,
    pub value_series: Vec<String>,
    pub ratio_series: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn inversions(&self) -> usize {
        self.rows.iter().filter(|r| r.inversion).count()
    }

    pub fn series(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.ratio_series.iter().position(|s| s == name)?;
        Some(self.rows.iter().map(|r| r.ratios[idx]).collect())
    }
}

fn check_increasing(grid: &[f64]) -> Result<()> {
    for pair in grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Parse(format!(
                "grid: values must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// A miner of share `r_1` forms out of an ocean of initial size `total`.
/// `r1_grid` holds fractions of the total, each in `(0, quota)`.
///
/// Ratios are `v_1 = phi_1 / r_1` and `v_oc = Phi / (1 - r_1)`; under quota one
/// half these are `1 / alpha` and `(alpha - r_1) / alpha^2`.
pub fn crystallization_sweep(total: f64, r1_grid: &[f64], quota: f64) -> Result<SweepResult> {
    if !(total > 0.0) {
        return Err(Error::EmptyGame);
    }
    for &r1 in r1_grid {
        if !(r1 > 0.0 && r1 < quota) {
            return Err(Error::GridOutOfRange {
                value: r1,
                lo: 0.0,
                hi: quota,
            });
        }
    }
    check_increasing(r1_grid)?;
    let rows = r1_grid
        .par_iter()
        .map(|&r1| {
            let game = OceanicGame::new(quota, vec![r1 * total], (1.0 - r1) * total)?;
            let norm = game.normalize();
            let profile = preferred_values(&norm)?;
            let (r, alpha) = (norm.majors()[0], norm.ocean());
            Ok(SweepRow {
                parameter: r1,
                label: None,
                values: vec![profile.major_values[0], profile.ocean_value],
                ratios: vec![profile.major_values[0] / r, profile.ocean_value / alpha],
                method: Some(profile.method),
                in_hypothesis: norm.is_interior(),
                inversion: false,
                note: None,
                value_total: profile.total(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        scenario: "crystallization".into(),
        base: Some(OceanicGame::new(quota, vec![], total)?),
        grid: format!(
            "{} points, r1 in [{}, {}] of total",
            r1_grid.len(),
            r1_grid.first().copied().unwrap_or(f64::NAN),
            r1_grid.last().copied().unwrap_or(f64::NAN)
        ),
        value_series: vec!["phi_1".into(), "Phi".into()],
        ratio_series: vec!["v_1".into(), "v_oc".into()],
        rows,
    })
}

/// Evenly spaced grid `quota * j / (steps + 1)` for `j = 1..=steps`, as
/// fractions of the total.
pub fn default_crystallization_grid(quota: f64, steps: usize) -> Vec<f64> {
    (1..=steps)
        .map(|j| quota * j as f64 / (steps + 1) as f64)
        .collect()
}

/// Evenly spaced grid `w_max * j / steps` for `j = 1..=steps`.
pub fn default_entry_grid(w_max: f64, steps: usize) -> Vec<f64> {
    (1..=steps)
        .map(|j| w_max * j as f64 / steps as f64)
        .collect()
}

fn entry_row(base: &OceanicGame, w: f64) -> Result<SweepRow> {
    let unit = base.total();
    let plus = base.with_entrant(w, Some("entrant".into()))?.normalize();
    let ocean_grown = base.with_ocean_growth(w)?.normalize();
    let p_plus = preferred_values(&plus)?;
    let p_ocean = preferred_values(&ocean_grown)?;
    let entrant = p_plus.major_values[base.len()];
    // ratios per unit of the base game's total
    let v_plus = entrant * unit / w;
    let v_oc_o = p_ocean.ocean_value * unit / (base.ocean() + w);
    let mut notes = Vec::new();
    if p_plus.method != Method::Interior {
        notes.push(format!("entrant game via {}", p_plus.method));
    }
    if p_ocean.method != Method::Interior {
        notes.push(format!("ocean game via {}", p_ocean.method));
    }
    Ok(SweepRow {
        parameter: w,
        label: None,
        values: vec![entrant, p_ocean.ocean_value],
        ratios: vec![v_plus, v_oc_o],
        method: Some(p_plus.method),
        in_hypothesis: plus.is_interior(),
        inversion: false,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
        value_total: p_plus.total().max(p_ocean.total()),
    })
}

/// Compares entering with weight `w` as one new major against joining the
/// ocean. The quota stays a fraction of the grown total. Ratios are per unit
/// of the base game's total, so the entrant's ratio is directly comparable to
/// the base ocean ratio. Rows whose computation fails carry NaN ratios and the
/// error in `note`.
pub fn entry_sweep(base: &OceanicGame, w_grid: &[f64]) -> Result<SweepResult> {
    for &w in w_grid {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::GridOutOfRange {
                value: w,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
    }
    check_increasing(w_grid)?;
    let rows = w_grid
        .par_iter()
        .map(|&w| {
            entry_row(base, w).unwrap_or_else(|e| SweepRow {
                parameter: w,
                label: None,
                values: vec![f64::NAN; 2],
                ratios: vec![f64::NAN; 2],
                method: None,
                in_hypothesis: false,
                inversion: false,
                note: Some(e.to_string()),
                value_total: f64::NAN,
            })
        })
        .collect();
    Ok(SweepResult {
        scenario: "entry".into(),
        base: Some(base.clone()),
        grid: format!(
            "{} points, w in [{}, {}]",
            w_grid.len(),
            w_grid.first().copied().unwrap_or(f64::NAN),
            w_grid.last().copied().unwrap_or(f64::NAN)
        ),
        value_series: vec!["phi_plus".into(), "Phi_o".into()],
        ratio_series: vec!["v_plus".into(), "v_oc_o".into()],
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntrantRatioCheck {
    /// Entrant's value per unit, in units of the base total.
    pub v_plus: f64,
    /// Base ocean's value per unit, in units of the base total.
    pub v_oc_base: f64,
    pub gap: f64,
    /// Whether the game with the entrant still has `r(M) < q <= alpha`.
    pub entrant_game_interior: bool,
}

/// Compares the value per unit of a new major of weight `w` with the base
/// ocean's value per unit. The base game must satisfy `r(M) < q <= alpha`.
pub fn entrant_ratio_check(base: &OceanicGame, w: f64) -> Result<EntrantRatioCheck> {
    let norm = base.normalize();
    if !norm.is_interior() {
        return Err(Error::HypothesisViolated(format!(
            "base game needs r(M) < q <= ocean, got r(M) = {}, q = {}, ocean = {}",
            norm.majors_total(),
            norm.quota(),
            norm.ocean()
        )));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::NonPositiveMajorWeight {
            index: base.len(),
            weight: w,
        });
    }
    let unit = base.total();
    let base_profile = exact_values(&norm)?;
    let plus = base.with_entrant(w, None)?.normalize();
    let plus_profile = exact_values(&plus)?;
    let v_plus = plus_profile.major_values[base.len()] * unit / w;
    let v_oc_base = base_profile.ocean_value * unit / base.ocean();
    Ok(EntrantRatioCheck {
        v_plus,
        v_oc_base,
        gap: (v_plus - v_oc_base).abs(),
        entrant_game_interior: plus.is_interior(),
    })
}

/// Relative tolerance below which a ratio increase is not an inversion.
pub const INVERSION_TOLERANCE: f64 = 1e-9;

/// Ratios for a snapshot of pool shares in percent. Pools are reported in
/// descending share order followed by the ocean; `ocean` defaults to the
/// remainder of 100.
pub fn snapshot_analysis(
    pools: &[(String, f64)],
    ocean: Option<f64>,
    quota: f64,
) -> Result<SweepResult> {
    if pools.is_empty() && ocean.is_none() {
        return Err(Error::EmptySnapshot);
    }
    let named: f64 = pools.iter().map(|(_, s)| s).sum();
    let ocean_share = ocean.unwrap_or(100.0 - named);
    let total = named + ocean_share.max(0.0);
    if total > 100.0 + 1e-9 {
        return Err(Error::SharesExceedTotal(total));
    }
    let ocean_share = if ocean_share.abs() < 1e-9 {
        0.0
    } else {
        ocean_share
    };
    let mut sorted: Vec<(String, f64)> = pools.to_vec();
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
    let game = OceanicGame::with_labels(
        quota,
        sorted.iter().map(|(_, s)| *s).collect(),
        ocean_share,
        sorted.iter().map(|(n, _)| Some(n.clone())).collect(),
    )?;
    let norm = game.normalize();
    let profile = preferred_values(&norm)?;

    let mut rows: Vec<SweepRow> = sorted
        .iter()
        .enumerate()
        .map(|(i, (name, _))| SweepRow {
            parameter: (i + 1) as f64,
            label: Some(name.clone()),
            values: vec![profile.major_values[i]],
            ratios: vec![profile.major_values[i] / norm.majors()[i]],
            method: Some(profile.method),
            in_hypothesis: norm.is_interior(),
            inversion: false,
            note: None,
            value_total: profile.total(),
        })
        .collect();
    if ocean_share > 0.0 {
        rows.push(SweepRow {
            parameter: (sorted.len() + 1) as f64,
            label: Some("OCEAN".into()),
            values: vec![profile.ocean_value],
            ratios: vec![profile.ocean_value / norm.ocean()],
            method: Some(profile.method),
            in_hypothesis: norm.is_interior(),
            inversion: false,
            note: None,
            value_total: profile.total(),
        });
    }
    for k in 1..rows.len() {
        let (prev, cur) = (rows[k - 1].ratios[0], rows[k].ratios[0]);
        rows[k].inversion = cur > prev * (1.0 + INVERSION_TOLERANCE);
    }
    Ok(SweepResult {
        scenario: "snapshot".into(),
        base: Some(game),
        grid: format!("{} entities by descending share", rows.len()),
        value_series: vec!["value".into()],
        ratio_series: vec!["ratio".into()],
        rows,
    })
}
