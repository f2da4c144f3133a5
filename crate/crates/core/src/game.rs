//! Oceanic game model: a quota, a list of major miners with atomic weights and
//! an ocean of infinitesimal miners holding a combined mass.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when testing a quota against exactly one half.
pub const HALF_TOLERANCE: f64 = 1e-12;

/// The game `[q; r_1, ..., r_m; alpha]`, with weights in arbitrary but
/// consistent units. The quota is always a fraction of the total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OceanicGame {
    quota: f64,
    majors: Vec<f64>,
    ocean: f64,
    labels: Vec<Option<String>>,
}

impl OceanicGame {
    pub fn new(quota: f64, majors: Vec<f64>, ocean: f64) -> Result<Self> {
        let labels = vec![None; majors.len()];
        Self::with_labels(quota, majors, ocean, labels)
    }

    pub fn with_labels(
        quota: f64,
        majors: Vec<f64>,
        ocean: f64,
        mut labels: Vec<Option<String>>,
    ) -> Result<Self> {
        if quota.is_nan() || quota <= 0.0 {
            return Err(Error::NonPositiveQuota(quota));
        }
        if quota >= 1.0 {
            return Err(Error::QuotaNotBelowOne(quota));
        }
        for (index, &weight) in majors.iter().enumerate() {
            if !weight.is_finite() {
                return Err(Error::NonFiniteWeight {
                    field: format!("majors[{index}]"),
                });
            }
            if weight <= 0.0 {
                return Err(Error::NonPositiveMajorWeight { index, weight });
            }
        }
        if !ocean.is_finite() {
            return Err(Error::NonFiniteWeight {
                field: "ocean".into(),
            });
        }
        if ocean < 0.0 {
            return Err(Error::NegativeOcean(ocean));
        }
        let total = ocean + majors.iter().sum::<f64>();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::EmptyGame);
        }
        labels.resize(majors.len(), None);
        Ok(Self {
            quota,
            majors,
            ocean,
            labels,
        })
    }

    pub fn quota(&self) -> f64 {
        self.quota
    }

    pub fn majors(&self) -> &[f64] {
        &self.majors
    }

    pub fn ocean(&self) -> f64 {
        self.ocean
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> String {
        self.labels
            .get(i)
            .cloned()
            .flatten()
            .unwrap_or_else(|| format!("major{}", i + 1))
    }

    pub fn len(&self) -> usize {
        self.majors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.majors.is_empty()
    }

    /// Total resources `R = alpha + sum r_i`.
    pub fn total(&self) -> f64 {
        self.ocean + self.majors.iter().sum::<f64>()
    }

    pub fn normalize(&self) -> NormalizedGame {
        let total = self.total();
        NormalizedGame {
            quota: self.quota,
            majors: self.majors.iter().map(|r| r / total).collect(),
            ocean: self.ocean / total,
        }
    }

    /// Adds a new major miner with weight `w`, leaving the ocean unchanged.
    pub fn with_entrant(&self, w: f64, label: Option<String>) -> Result<Self> {
        let mut majors = self.majors.clone();
        majors.push(w);
        let mut labels = self.labels.clone();
        labels.push(label);
        Self::with_labels(self.quota, majors, self.ocean, labels)
    }

    /// Grows the ocean by `w`.
    pub fn with_ocean_growth(&self, w: f64) -> Result<Self> {
        Self::with_labels(
            self.quota,
            self.majors.clone(),
            self.ocean + w,
            self.labels.clone(),
        )
    }
}

/// A game whose weights are fractions of the total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedGame {
    quota: f64,
    majors: Vec<f64>,
    ocean: f64,
}

impl NormalizedGame {
    pub fn quota(&self) -> f64 {
        self.quota
    }

    pub fn majors(&self) -> &[f64] {
        &self.majors
    }

    pub fn ocean(&self) -> f64 {
        self.ocean
    }

    pub fn len(&self) -> usize {
        self.majors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.majors.is_empty()
    }

    pub fn majors_total(&self) -> f64 {
        self.majors.iter().sum()
    }

    pub fn has_half_quota(&self) -> bool {
        (self.quota - 0.5).abs() <= HALF_TOLERANCE
    }

    /// `r(M) < q <= alpha`: the ocean holds at least the quota and the majors
    /// together cannot reach it.
    pub fn is_interior(&self) -> bool {
        self.majors_total() < self.quota && self.quota <= self.ocean
    }

    pub fn to_game(&self) -> OceanicGame {
        OceanicGame {
            quota: self.quota,
            majors: self.majors.clone(),
            ocean: self.ocean,
            labels: vec![None; self.majors.len()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Interior,
    Exact,
    MonteCarlo,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Interior => "interior",
            Method::Exact => "exact",
            Method::MonteCarlo => "monte-carlo",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values of the majors and the ocean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueProfile {
    pub major_values: Vec<f64>,
    pub ocean_value: f64,
    pub method: Method,
    /// Standard errors, majors first and the ocean last. Monte Carlo only.
    pub stderr: Option<Vec<f64>>,
}

impl ValueProfile {
    /// Builds a deterministic profile, deriving the ocean value from the
    /// majors' values.
    pub fn from_majors(major_values: Vec<f64>, method: Method) -> Self {
        let ocean_value = (1.0 - major_values.iter().sum::<f64>()).max(0.0);
        Self {
            major_values,
            ocean_value,
            method,
            stderr: None,
        }
    }

    pub fn total(&self) -> f64 {
        self.major_values.iter().sum::<f64>() + self.ocean_value
    }

    /// Majors followed by the ocean.
    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.major_values
            .iter()
            .copied()
            .chain(std::iter::once(self.ocean_value))
    }
}

/// Value per unit of resource.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRatios {
    pub major_ratios: Vec<f64>,
    /// `None` when the ocean is empty.
    pub ocean_ratio: Option<f64>,
}

impl PowerRatios {
    pub fn ocean(&self) -> Result<f64> {
        self.ocean_ratio.ok_or(Error::OceanlessGame)
    }
}

/// `v_i = phi_i / r_i` and `v_oc = Phi / alpha`, weights as fractions.
pub fn power_ratios(game: &NormalizedGame, profile: &ValueProfile) -> PowerRatios {
    let major_ratios = game
        .majors
        .iter()
        .zip(&profile.major_values)
        .map(|(r, phi)| phi / r)
        .collect();
    let ocean_ratio = (game.ocean > 0.0).then(|| profile.ocean_value / game.ocean);
    PowerRatios {
        major_ratios,
        ocean_ratio,
    }
}

/// Regions of the two-major game with quota one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegionLabel {
    /// The ocean holds at least half: `Δ1`.
    OceanMajority,
    /// Nobody holds half: `Δ2`.
    BalanceOfPower,
    /// Miner 1 holds at least half: `Δ3`.
    FirstInControl,
    /// Miner 2 holds at least half: `Δ4`.
    SecondInControl,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegionLabel::OceanMajority => "Δ1",
            RegionLabel::BalanceOfPower => "Δ2",
            RegionLabel::FirstInControl => "Δ3",
            RegionLabel::SecondInControl => "Δ4",
        };
        f.write_str(s)
    }
}

pub(crate) fn require_two_majors_half_quota(game: &NormalizedGame) -> Result<()> {
    if game.len() != 2 || !game.has_half_quota() {
        return Err(Error::UnsupportedShape(format!(
            "requires exactly 2 majors and quota 1/2, got {} majors and quota {}",
            game.len(),
            game.quota
        )));
    }
    Ok(())
}

/// Ties resolve in the order Δ3, Δ4, Δ1, Δ2.
pub fn classify_region(game: &NormalizedGame) -> Result<RegionLabel> {
    require_two_majors_half_quota(game)?;
    let (r1, r2) = (game.majors[0], game.majors[1]);
    Ok(if r1 >= 0.5 {
        RegionLabel::FirstInControl
    } else if r2 >= 0.5 {
        RegionLabel::SecondInControl
    } else if game.ocean >= 0.5 {
        RegionLabel::OceanMajority
    } else {
        RegionLabel::BalanceOfPower
    })
}
