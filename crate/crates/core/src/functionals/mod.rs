//! Floating bodies, wet parts, visibility regions, wide points and cap
//! covers.
//!
//! For the ball and the ellipsoid every quantity has a closed form through
//! the linear map to the unit ball, where the minimal cap through a point is
//! the one orthogonal to its radius. For the cube and the simplex the minimal
//! cap is found by a direction search whose angular resolution is reported.

mod cover;
mod floating;
mod mincap;
mod visibility;
mod wide;

use serde::{Deserialize, Serialize};

pub use cover::{audit_cap_cover, build_cap_cover, CapCover, CoverAudit};
pub use floating::{epsilon_star, wet_part_profile, wet_part_volume, FloatingBody, DEFAULT_WET_SAMPLES};
pub use mincap::{
    direction_grid, minimal_cap_volume, minimal_cap_volume_search, MinimalCap,
    DEFAULT_DIRECTIONS,
};
pub use visibility::{g_epsilon, sees, sees_by_segment_search, visibility_volume, GEstimate};
pub use wide::{wide_volume_estimate, wideness_profile, WideEstimate, WideProfile};

/// A Monte Carlo estimate. Exact values carry `stderr = 0` and `samples = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            mean: value,
            stderr: 0.0,
            samples: 0,
        }
    }

    /// Estimate of a probability from `hits` successes in `samples` trials.
    pub fn proportion(hits: usize, samples: usize) -> Self {
        let n = samples.max(1) as f64;
        let p = hits as f64 / n;
        Estimate {
            mean: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            samples,
        }
    }
}
