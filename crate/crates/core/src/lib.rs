//! Values and power ratios for oceanic games: a few major miners holding
//! atomic shares of a resource, plus an ocean of infinitesimal miners.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod exact;
pub mod game;
pub mod io;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod scenarios;

pub use cli::run_cli;
pub use closed_form::{c_coefficient, interior_values, two_miner_values};
pub use error::{Error, Result};
pub use exact::{exact_values, ocean_value_direct, segment_integral, PivotSegment};
pub use game::{
    classify_region, power_ratios, Method, NormalizedGame, OceanicGame, PowerRatios, RegionLabel,
    ValueProfile,
};
pub use montecarlo::{mc_values, McConfig};
pub use oracle::{convergence_report, discretize, shapley_index, FiniteVotingGame};
pub use scenarios::{
    crystallization_sweep, entrant_ratio_check, entry_sweep, preferred_values, snapshot_analysis,
    SweepResult, SweepRow,
};
