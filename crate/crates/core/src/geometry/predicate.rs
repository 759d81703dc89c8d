//! Orientation of a d-simplex: a floating-point filter backed by exact
//! big-integer evaluation whenever the filter cannot certify the sign.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::point::{Point, MAX_DIM};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_i32(v: i32) -> Self {
        match v.signum() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Self {
        Sign::from_i32(-self.to_i32())
    }
}

const EPS: f64 = f64::EPSILON * 0.5;

/// Sign of `det[p1 - p0, ..., pd - p0]` for a simplex given as `d + 1`
/// points of dimension `d`.
pub fn orientation(simplex: &[Point]) -> Result<Sign> {
    let Some(first) = simplex.first() else {
        return Err(Error::invalid("orientation needs d + 1 points"));
    };
    let d = first.dim();
    if simplex.len() != d + 1 {
        return Err(Error::invalid(format!(
            "orientation in dimension {d} needs {} points, got {}",
            d + 1,
            simplex.len()
        )));
    }
    if simplex.iter().any(|p| p.dim() != d) {
        return Err(Error::invalid("orientation points differ in dimension"));
    }
    let refs: Vec<&Point> = simplex.iter().collect();
    Ok(orient(&refs))
}

/// Filtered orientation; `pts` holds `d + 1` points of dimension `d`.
pub(crate) fn orient(pts: &[&Point]) -> Sign {
    let d = pts[0].dim();
    match d {
        1 => Sign::from_i32(sign_f64(pts[1][0] - pts[0][0])),
        2 => orient2(pts).unwrap_or_else(|| orient_exact(pts)),
        3 => orient3(pts).unwrap_or_else(|| orient_exact(pts)),
        _ => orient_general(pts).unwrap_or_else(|| orient_exact(pts)),
    }
}

fn sign_f64(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn orient2(p: &[&Point]) -> Option<Sign> {
    let (ax, ay) = (p[1][0] - p[0][0], p[1][1] - p[0][1]);
    let (bx, by) = (p[2][0] - p[0][0], p[2][1] - p[0][1]);
    let l = ax * by;
    let r = ay * bx;
    let det = l - r;
    let bound = (3.0 * EPS + 16.0 * EPS * EPS) * (l.abs() + r.abs());
    certify(det, bound)
}

fn orient3(p: &[&Point]) -> Option<Sign> {
    let a = p[1].sub(p[0]);
    let b = p[2].sub(p[0]);
    let c = p[3].sub(p[0]);
    let m0 = b[1] * c[2] - b[2] * c[1];
    let m1 = b[0] * c[2] - b[2] * c[0];
    let m2 = b[0] * c[1] - b[1] * c[0];
    let det = a[0] * m0 - a[1] * m1 + a[2] * m2;
    let perm = a[0].abs() * ((b[1] * c[2]).abs() + (b[2] * c[1]).abs())
        + a[1].abs() * ((b[0] * c[2]).abs() + (b[2] * c[0]).abs())
        + a[2].abs() * ((b[0] * c[1]).abs() + (b[1] * c[0]).abs());
    let bound = (7.0 * EPS + 56.0 * EPS * EPS) * perm;
    certify(det, bound)
}

fn certify(det: f64, bound: f64) -> Option<Sign> {
    if det > bound {
        Some(Sign::Positive)
    } else if -det > bound {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Gaussian elimination with partial pivoting, certified against a
/// Hadamard-scaled backward error bound.
fn orient_general(p: &[&Point]) -> Option<Sign> {
    let d = p[0].dim();
    let mut m = [[0.0f64; MAX_DIM]; MAX_DIM];
    let mut hadamard = 1.0;
    for i in 0..d {
        let mut n2 = 0.0;
        for j in 0..d {
            let v = p[i + 1][j] - p[0][j];
            m[i][j] = v;
            n2 += v * v;
        }
        hadamard *= n2.sqrt();
    }
    let det = det_in_place(&mut m, d);
    let df = d as f64;
    let bound = 4.0 * df * df * df * (1u32 << d) as f64 * EPS * hadamard;
    if !bound.is_finite() {
        return None;
    }
    certify(det, bound)
}

pub(crate) fn det_in_place(m: &mut [[f64; MAX_DIM]; MAX_DIM], d: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..d {
        let mut piv = k;
        for i in (k + 1)..d {
            if m[i][k].abs() > m[piv][k].abs() {
                piv = i;
            }
        }
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        let pk = m[k][k];
        det *= pk;
        for i in (k + 1)..d {
            let f = m[i][k] / pk;
            if f != 0.0 {
                for j in (k + 1)..d {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    det
}

/// Decomposes a finite double into `mantissa * 2^exponent`.
fn decode(v: f64) -> (i64, i32) {
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if exp_bits == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1i64 << 52)), exp_bits - 1075)
    }
}

/// Exact orientation: every coordinate is scaled to a common power of two
/// and the determinant is evaluated by fraction-free (Bareiss) elimination.
pub(crate) fn orient_exact(p: &[&Point]) -> Sign {
    let d = p[0].dim();
    let decoded: Vec<Vec<(i64, i32)>> = p
        .iter()
        .map(|q| q.coords().iter().map(|&c| decode(c)).collect())
        .collect();
    let emin = decoded
        .iter()
        .flatten()
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| *e)
        .min()
        .unwrap_or(0);
    let to_int = |(m, e): (i64, i32)| -> BigInt { BigInt::from(m) << ((e - emin) as usize) };
    let ints: Vec<Vec<BigInt>> = decoded
        .into_iter()
        .map(|row| row.into_iter().map(to_int).collect())
        .collect();
    let mut m: Vec<Vec<BigInt>> = (1..=d)
        .map(|i| (0..d).map(|j| &ints[i][j] - &ints[0][j]).collect())
        .collect();
    Sign::from_i32(bareiss_sign(&mut m))
}

fn bareiss_sign(m: &mut [Vec<BigInt>]) -> i32 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = &m[n - 1][n - 1];
    if det.is_zero() {
        0
    } else if det.is_positive() {
        sign
    } else {
        -sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(rows: &[&[f64]]) -> Vec<Point> {
        rows.iter().map(|r| Point::new(r).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        let tri = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(orientation(&tri).unwrap(), Sign::Positive);
        let col = pts(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        assert_eq!(orientation(&col).unwrap(), Sign::Zero);
        let tet = pts(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(orientation(&tet).unwrap(), Sign::Positive);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let bad = pts(&[&[0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0]]);
        assert!(orientation(&bad).is_err());
        let short = pts(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert!(orientation(&short).is_err());
        assert!(orientation(&[]).is_err());
    }

    #[test]
    fn near_degenerate_collinear_points() {
        // Classic failure case for naive orient2d: points nearly on y = x.
        let base = 0.5;
        for i in 0..64 {
            for j in 0..64 {
                let a = Point::new(&[base + i as f64 * f64::EPSILON, base + j as f64 * f64::EPSILON]).unwrap();
                let b = Point::new(&[12.0, 12.0]).unwrap();
                let c = Point::new(&[24.0, 24.0]).unwrap();
                let s = orient(&[&a, &b, &c]);
                assert_eq!(s, orient_exact(&[&a, &b, &c]));
                // Points with equal offsets are exactly collinear.
                if i == j {
                    assert_eq!(s, Sign::Zero);
                }
            }
        }
    }

    #[test]
    fn exact_handles_tiny_and_huge_magnitudes() {
        let a = Point::new(&[1e-300, 0.0, 0.0]).unwrap();
        let b = Point::new(&[1e300, 0.0, 0.0]).unwrap();
        let c = Point::new(&[0.0, 1.0, 0.0]).unwrap();
        let e = Point::new(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(orient_exact(&[&a, &b, &c, &e]), Sign::Positive);
    }

    #[test]
    fn coplanar_in_higher_dimensions() {
        // Five points of R^4 lying in the hyperplane x3 = 0.
        let p = pts(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.3, 0.1, 0.7, 0.0],
        ]);
        assert_eq!(orientation(&p).unwrap(), Sign::Zero);
        let q = pts(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(orientation(&q).unwrap(), Sign::Positive);
    }

    fn arb_simplex(d: usize) -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec(prop::collection::vec(-100.0f64..100.0, d), d + 1)
            .prop_map(|rows| rows.iter().map(|r| Point::new(r).unwrap()).collect())
    }

    proptest! {
        #[test]
        fn antisymmetric_under_swap(d in 2usize..=6, rows in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 6), 7)) {
            let simplex: Vec<Point> = rows.iter().take(d + 1).map(|r| Point::from_slice(&r[..d])).collect();
            let base = orientation(&simplex).unwrap();
            let mut swapped = simplex.clone();
            swapped.swap(0, d);
            prop_assert_eq!(orientation(&swapped).unwrap(), base.flip());
            let mut swapped = simplex.clone();
            swapped.swap(1, 2);
            prop_assert_eq!(orientation(&swapped).unwrap(), base.flip());
        }

        #[test]
        fn translation_invariant(simplex in arb_simplex(3), shift in prop::collection::vec(-8.0f64..8.0, 3)) {
            // Power-of-two shifts keep the translated coordinates exact only
            // when the magnitudes are small, so compare via the exact path on
            // exactly translated integer-valued inputs.
            let round: Vec<Point> = simplex.iter()
                .map(|p| Point::from_fn(3, |i| p[i].round()))
                .collect();
            let t = Point::from_fn(3, |i| shift[i].round());
            let moved: Vec<Point> = round.iter().map(|p| p.add(&t)).collect();
            prop_assert_eq!(orientation(&round).unwrap(), orientation(&moved).unwrap());
        }

        #[test]
        fn filter_agrees_with_exact(d in 2usize..=6, rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 6), 7)) {
            let p: Vec<Point> = rows.iter().take(d + 1).map(|r| Point::from_slice(&r[..d])).collect();
            let refs: Vec<&Point> = p.iter().collect();
            prop_assert_eq!(orient(&refs), orient_exact(&refs));
        }
    }
}
