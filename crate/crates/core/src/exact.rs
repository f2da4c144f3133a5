//! Exact values for any quota and configuration.
//!
//! Condition on the set `S` of other majors that arrive before major `i`. If
//! `i` arrives at ocean position `x`, it is pivotal exactly when
//! `r(S) + alpha x < q <= r(S) + alpha x + r_i`, i.e. when `x` falls in the
//! window `[(q - r_i - r(S)) / alpha, (q - r(S)) / alpha)` clamped to `[0, 1]`.
//! The probability of that particular `S` at position `x` is
//! `x^s (1 - x)^(m-1-s)`, so each subset contributes a polynomial integral
//! over its window.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Method, NormalizedGame, ValueProfile};
use crate::numeric::{gauss_rule, NeumaierSum};

pub const MAX_EXACT_MAJORS: usize = 24;

/// One subset's contribution to a major's value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotSegment {
    /// Bit `j` set when major `j` arrives before the pivot candidate.
    pub subset_mask: u32,
    pub x_lo: f64,
    pub x_hi: f64,
    pub degree_before: u32,
    pub degree_after: u32,
}

impl PivotSegment {
    pub fn is_empty(&self) -> bool {
        self.x_hi <= self.x_lo
    }

    pub fn integral(&self) -> f64 {
        segment_integral(self.degree_before, self.degree_after, self.x_lo, self.x_hi)
    }
}

/// `∫_lo^hi x^s (1-x)^t dx` for `0 <= lo <= hi <= 1`.
///
/// Gauss-Legendre with `floor((s+t)/2) + 1` nodes integrates the polynomial
/// exactly; every node weight and integrand value is nonnegative, so there is
/// no cancellation.
pub fn segment_integral(s: u32, t: u32, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let rule = gauss_rule((s + t) as usize / 2 + 1);
    let half = 0.5 * (hi - lo);
    let one_minus_hi = 1.0 - hi;
    let mut sum = NeumaierSum::default();
    for ((w, op), om) in rule.weights.iter().zip(&rule.one_plus).zip(&rule.one_minus) {
        let x = lo + half * op;
        let one_minus_x = one_minus_hi + half * om;
        sum.add(w * x.powi(s as i32) * one_minus_x.powi(t as i32));
    }
    half * sum.value()
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn check_exact_shape(game: &NormalizedGame) -> Result<()> {
    if game.len() > MAX_EXACT_MAJORS {
        return Err(Error::TooManyMajors {
            count: game.len(),
            limit: MAX_EXACT_MAJORS,
        });
    }
    if !(game.ocean() > 0.0) {
        return Err(Error::OceanlessGame);
    }
    Ok(())
}

/// Pivot windows for `major`, one per subset of the other majors, in
/// reflected Gray-code order.
pub fn pivot_segments(
    game: &NormalizedGame,
    major: usize,
) -> Result<impl Iterator<Item = PivotSegment> + '_> {
    check_exact_shape(game)?;
    assert!(major < game.len(), "major index out of range");
    let m = game.len();
    let others: Vec<usize> = (0..m).filter(|&j| j != major).collect();
    let count: u32 = 1u32 << others.len();
    let q = game.quota();
    let alpha = game.ocean();
    let r_i = game.majors()[major];
    let weights = game.majors();

    let mut mask: u32 = 0;
    let mut r_subset = 0.0;
    let mut size: u32 = 0;
    Ok((0..count).map(move |step| {
        if step > 0 {
            // flip the bit that changes between gray(step-1) and gray(step)
            let bit = step.trailing_zeros() as usize;
            let j = others[bit];
            let flag = 1u32 << j;
            if mask & flag == 0 {
                mask |= flag;
                r_subset += weights[j];
                size += 1;
            } else {
                mask &= !flag;
                r_subset -= weights[j];
                size -= 1;
            }
        }
        PivotSegment {
            subset_mask: mask,
            x_lo: clamp_unit((q - r_i - r_subset) / alpha),
            x_hi: clamp_unit((q - r_subset) / alpha),
            degree_before: size,
            degree_after: (m as u32 - 1) - size,
        }
    }))
}

/// Exact values by integrating every pivot window. Majors are evaluated in
/// parallel; each major's sum runs in a fixed order.
pub fn exact_values(game: &NormalizedGame) -> Result<ValueProfile> {
    check_exact_shape(game)?;
    let values = (0..game.len())
        .into_par_iter()
        .map(|i| {
            let sum: NeumaierSum = pivot_segments(game, i)
                .expect("shape checked")
                .filter(|seg| !seg.is_empty())
                .map(|seg| seg.integral())
                .collect();
            sum.value().clamp(0.0, 1.0)
        })
        .collect();
    Ok(ValueProfile::from_majors(values, Method::Exact))
}

/// The ocean's value computed directly rather than as a complement.
///
/// The ocean is pivotal when the running total reaches the quota strictly
/// inside the ocean. For the set `S` of majors already arrived this happens
/// at `x_S = (q - r(S)) / alpha`, which requires every major in `S` to arrive
/// before `x_S` and every other major after it:
/// `Phi = sum_S x_S^|S| (1 - x_S)^(m - |S|)` over `S` with `x_S` in `[0, 1]`.
pub fn ocean_value_direct(game: &NormalizedGame) -> Result<f64> {
    check_exact_shape(game)?;
    let m = game.len();
    let q = game.quota();
    let alpha = game.ocean();
    let mut sum = NeumaierSum::default();
    for mask in 0u32..(1u32 << m) {
        let r_subset: f64 = (0..m)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| game.majors()[j])
            .sum();
        let x = (q - r_subset) / alpha;
        if !(0.0..=1.0).contains(&x) {
            continue;
        }
        let s = mask.count_ones() as i32;
        sum.add(x.powi(s) * (1.0 - x).powi(m as i32 - s));
    }
    Ok(sum.value())
}
