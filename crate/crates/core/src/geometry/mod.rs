//! Volume-one convex bodies, the orientation predicate and cap geometry.

mod body;
mod cap;
mod point;
mod predicate;

pub use body::{unit_ball_volume, Body, BodyKind, BOUNDARY_SLACK};
pub use cap::{ball_cap_fraction, cap_for_volume, cap_volume, Cap};
pub use point::{Point, MAX_DIM};
pub use predicate::{orientation, Sign};

pub(crate) use predicate::{det_in_place, orient, orient_exact};
pub(crate) use cap::{ball_offset_for_fraction, cap_for_volume_unchecked, cap_volume_unchecked};

/// Relative tolerance accepted for the unit-length precondition on
/// directions.
pub(crate) const UNIT_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_unit(u: &Point) -> crate::Result<()> {
    let norm = u.norm();
    if !(norm - 1.0).abs().le(&UNIT_TOLERANCE) {
        return Err(crate::Error::invalid(format!(
            "direction must be a unit vector, got norm {norm}"
        )));
    }
    Ok(())
}
