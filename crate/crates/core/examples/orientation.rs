//! Exact orientation on inputs where plain floating point gets the sign wrong.

use rpoly::geometry::orientation;
use rpoly::{Point, Sign};

fn p(c: &[f64]) -> Point {
    Point::new(c).unwrap()
}

fn main() -> rpoly::Result<()> {
    let ccw = orientation(&[p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])])?;
    let flat = orientation(&[p(&[0.0, 0.0]), p(&[1.0, 1.0]), p(&[2.0, 2.0])])?;
    println!("counterclockwise triangle: {ccw:?}");
    println!("collinear points:          {flat:?}");

    // Perturb the first point by single ulps around (0.5, 0.5) against the
    // line through (12, 12) and (24, 24), and compare with the naive
    // determinant.
    let ulp = 0.5 * f64::EPSILON;
    let (q, r) = (p(&[12.0, 12.0]), p(&[24.0, 24.0]));
    let mut wrong = 0;
    let mut counts = [0usize; 3];
    for i in 0..32 {
        for j in 0..32 {
            let a = p(&[0.5 + i as f64 * ulp, 0.5 + j as f64 * ulp]);
            let exact = orientation(&[a, q, r])?;
            let naive = (q[0] - a[0]) * (r[1] - a[1]) - (q[1] - a[1]) * (r[0] - a[0]);
            let naive = if naive > 0.0 {
                Sign::Positive
            } else if naive < 0.0 {
                Sign::Negative
            } else {
                Sign::Zero
            };
            counts[exact as usize] += 1;
            if naive != exact {
                wrong += 1;
            }
        }
    }
    println!(
        "1024 near-collinear triples: exact signs (-, 0, +) = {counts:?}; the naive determinant is wrong on {wrong}"
    );
    Ok(())
}
