//! Lower-boundary construction for the two-user weak Gaussian interference
//! channel under a fixed power split strategy.
//!
//! The crate is split into small layers:
//!
//! - [`channel`]: parameters, power splits and single-user Gaussian rates.
//! - [`mac`]: the public-message MAC regions at both receivers, their
//!   intersection and the sum-rate front.
//! - [`boundary`]: closed-form stationary weights and the boundary trace.
//! - [`hk`]: the Han-Kobayashi constraint system and its small LP.
//! - [`oracle`]: brute-force and finite-difference validators.
//! - [`export`]: CSV / JSON writers for traces.
//!
//! All rates are in bits per channel use.

mod bisect;
pub mod boundary;
pub mod channel;
pub mod error;
pub mod export;
pub mod hk;
pub mod mac;
pub mod oracle;

pub use boundary::{
    key_points, mu1_closed, mu2_closed, point_a, point_d3, solve_coupled, solve_stationary_p2hat,
    trace_lower_boundary, trace_upper_boundary, BoundaryPoint, KeyPoints, Regime, Trace,
};
pub use channel::{
    awgn_capacity, noise_at_y1, noise_at_y2, private_rate_user1, private_rate_user2,
    scsd_layer_rates, swap_users, ChannelParams, PowerSplit, RatePair,
};
pub use error::{GicError, RegimeKind, RegimeReport, Result};
pub use hk::{
    hk_bounds, hk_weighted_sum_over_splits, lp_optimize_full, lp_optimize_reduced, reduced_bounds,
    HkBounds, HkRates,
};
pub use mac::{
    classify, corner_rates, intersection_polygon, public_rate_pair, sum_rate_front, MacCase,
    MacCorners, PublicRatePair, SumRateFront,
};
pub use oracle::{composite_step_check, finite_difference_mu1, grid_oracle, ordering_scan, OracleReport};
