//! Closed-form values: the two-major region formulas and the interior-case
//! formula for any number of majors under quota one half.

use crate::error::{Error, Result};
use crate::game::{
    classify_region, require_two_majors_half_quota, Method, NormalizedGame, RegionLabel,
    ValueProfile,
};
use crate::numeric::NeumaierSum;

/// Largest number of majors accepted by [`interior_values`].
pub const MAX_INTERIOR_MAJORS: usize = 20;

/// `c_s = s! * sum_{k=0}^{s} (-1)^k / (s-k)!`, which equals `(-1)^s` times the
/// number of derangements of `s` items.
///
/// Uses the integer recurrence `D_s = s * D_{s-1} + (-1)^s`; the alternating
/// factorial series itself cancels catastrophically in floating point.
pub fn c_coefficient_exact(s: usize) -> Result<i64> {
    let mut derangements: i64 = 1;
    for k in 1..=s {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        derangements = (k as i64)
            .checked_mul(derangements)
            .and_then(|d| d.checked_add(sign))
            .ok_or(Error::CoefficientOverflow(s))?;
    }
    Ok(if s.is_multiple_of(2) {
        derangements
    } else {
        -derangements
    })
}

pub fn c_coefficient(s: usize) -> Result<f64> {
    c_coefficient_exact(s).map(|c| c as f64)
}

/// Values for two majors under quota one half, by region.
///
/// In the ocean-majority region miner 1 gets `r_1 (alpha - r_2) / alpha^2`; in
/// the balance-of-power region `((1 - 2 r_2) / (2 alpha))^2`; a miner holding
/// half or more gets 1 and the other 0. Miner 2 is symmetric.
pub fn two_miner_values(game: &NormalizedGame) -> Result<ValueProfile> {
    require_two_majors_half_quota(game)?;
    let region = classify_region(game)?;
    let (r1, r2) = (game.majors()[0], game.majors()[1]);
    let alpha = game.ocean();
    let (phi1, phi2) = match region {
        RegionLabel::FirstInControl => (1.0, 0.0),
        RegionLabel::SecondInControl => (0.0, 1.0),
        RegionLabel::OceanMajority => {
            let a2 = alpha * alpha;
            (r1 * (alpha - r2) / a2, r2 * (alpha - r1) / a2)
        }
        RegionLabel::BalanceOfPower => {
            let sq = |x: f64| x * x;
            (
                sq((1.0 - 2.0 * r2) / (2.0 * alpha)),
                sq((1.0 - 2.0 * r1) / (2.0 * alpha)),
            )
        }
    };
    Ok(ValueProfile::from_majors(
        vec![phi1, phi2],
        Method::ClosedForm,
    ))
}

/// Values in the interior case `r(M) < 1/2 <= alpha` with quota one half:
///
/// `phi_i = r_i / alpha^m * sum_{S ⊆ M-{i}} c_|S| prod_{j in S} r_j prod_{k in M-{i}-S} (alpha - r_k)`.
///
/// The subset sum only depends on `|S|` through `c_s`, so it is grouped by
/// size: the coefficient of `z^s` in `prod_k ((alpha - r_k) + r_k z)` is the
/// sum of the products over all `S` with `|S| = s`.
pub fn interior_values(game: &NormalizedGame) -> Result<ValueProfile> {
    if !game.has_half_quota() {
        return Err(Error::UnsupportedShape(format!(
            "interior formula requires quota 1/2, got {}",
            game.quota()
        )));
    }
    let m = game.len();
    if m > MAX_INTERIOR_MAJORS {
        return Err(Error::TooManyMajors {
            count: m,
            limit: MAX_INTERIOR_MAJORS,
        });
    }
    if !game.is_interior() {
        return Err(Error::NotInteriorCase {
            majors_total: game.majors_total(),
            ocean: game.ocean(),
        });
    }
    let alpha = game.ocean();
    let coeffs = (0..m).map(c_coefficient).collect::<Result<Vec<_>>>()?;
    let scaled: Vec<f64> = game.majors().iter().map(|r| r / alpha).collect();

    let values = (0..m)
        .map(|i| {
            // Coefficients of prod_{k != i} ((1 - r_k/alpha) + (r_k/alpha) z).
            let mut poly = vec![0.0; m];
            poly[0] = 1.0;
            let mut degree = 0;
            for (k, &x) in scaled.iter().enumerate() {
                if k == i {
                    continue;
                }
                degree += 1;
                for s in (0..=degree).rev() {
                    let carry = if s > 0 { poly[s - 1] * x } else { 0.0 };
                    poly[s] = poly[s] * (1.0 - x) + carry;
                }
            }
            let mut sum = NeumaierSum::default();
            for (c, e) in coeffs.iter().zip(&poly) {
                sum.add(c * e);
            }
            scaled[i] * sum.value()
        })
        .collect();
    Ok(ValueProfile::from_majors(values, Method::Interior))
}
