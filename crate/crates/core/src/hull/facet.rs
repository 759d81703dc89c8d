use crate::geometry::{det_in_place, orient_exact, Point, Sign, MAX_DIM};
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON * 0.5;

#[derive(Debug, Clone)]
pub(crate) struct Facet {
    pub vertices: [u32; MAX_DIM],
    /// `neighbors[i]` shares every vertex except `vertices[i]`.
    pub neighbors: [u32; MAX_DIM],
    /// Outward unit normal.
    pub normal: [f64; MAX_DIM],
    pub offset: f64,
    /// Error scale of the filtered side test, per unit of `|x - v0|_1`.
    pub tol: f64,
    /// Norm of the unnormalized cofactor normal, `(d-1)!` times the facet area.
    pub measure: f64,
    /// Whether the vertex order is negatively oriented with respect to the
    /// outward side.
    pub flip: bool,
    pub dim: u8,
}

impl Facet {
    pub fn new(
        vertices: [u32; MAX_DIM],
        neighbors: [u32; MAX_DIM],
        pts: &[&Point],
        interior: &Point,
    ) -> Result<Facet> {
        let d = pts.len();
        let v0 = pts[0];
        let mut e = [[0.0f64; MAX_DIM]; MAX_DIM];
        let mut h = 1.0;
        for j in 1..d {
            let mut n2 = 0.0;
            for c in 0..d {
                let v = pts[j][c] - v0[c];
                e[j - 1][c] = v;
                n2 += v * v;
            }
            h *= n2.sqrt();
        }
        let mut n = [0.0f64; MAX_DIM];
        for (i, ni) in n.iter_mut().enumerate().take(d) {
            let mut minor = [[0.0f64; MAX_DIM]; MAX_DIM];
            for r in 0..d - 1 {
                let mut cc = 0;
                for c in 0..d {
                    if c != i {
                        minor[r][cc] = e[r][c];
                        cc += 1;
                    }
                }
            }
            let m = if d == 1 { 1.0 } else { det_in_place(&mut minor, d - 1) };
            *ni = if (d - 1 + i) % 2 == 0 { m } else { -m };
        }
        let measure = n[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(measure > 0.0) || !measure.is_finite() {
            return Err(Error::Degenerate("flat facet".into()));
        }
        let df = d as f64;
        let k = 4.0 * df * df * df * (1u32 << d) as f64 + 4.0 * df;
        let tol = k * EPS * h / measure + (2.0 * df + 4.0) * EPS;
        let mut unit = [0.0f64; MAX_DIM];
        for c in 0..d {
            unit[c] = n[c] / measure;
        }

        // Orient outward: the interior point must be strictly beneath.
        let mut t = 0.0;
        let mut l1 = 0.0;
        for c in 0..d {
            let y = interior[c] - v0[c];
            t += unit[c] * y;
            l1 += y.abs();
        }
        let inner = if t > tol * l1 {
            Sign::Positive
        } else if t < -tol * l1 {
            Sign::Negative
        } else {
            let mut refs: Vec<&Point> = pts.to_vec();
            refs.push(interior);
            orient_exact(&refs)
        };
        let flip = match inner {
            Sign::Positive => true,
            Sign::Negative => false,
            Sign::Zero => return Err(Error::Degenerate("facet through interior point".into())),
        };
        if flip {
            for u in unit.iter_mut().take(d) {
                *u = -*u;
            }
        }
        let offset = (0..d).map(|c| unit[c] * v0[c]).sum();
        Ok(Facet {
            vertices,
            neighbors,
            normal: unit,
            offset,
            tol,
            measure,
            flip,
            dim: d as u8,
        })
    }

    /// Zero-measure placeholder whose side tests always defer to exact
    /// arithmetic.
    pub fn flat(vertices: [u32; MAX_DIM], neighbors: [u32; MAX_DIM]) -> Facet {
        let dim = vertices.iter().take_while(|v| **v != u32::MAX).count() as u8;
        Facet {
            vertices,
            neighbors,
            normal: [0.0; MAX_DIM],
            offset: 0.0,
            tol: f64::INFINITY,
            measure: 0.0,
            flip: false,
            dim,
        }
    }

    /// Signed distance of `x` beyond the facet hyperplane.
    #[inline]
    pub fn offset_from(&self, v0: &Point, x: &Point) -> f64 {
        let mut s = 0.0;
        for c in 0..self.dim as usize {
            s += self.normal[c] * (x[c] - v0[c]);
        }
        s
    }
}

/// Hot-path copy of a facet's supporting hyperplane, laid out for linear
/// scans. Dead slots never report a point as beyond.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Plane {
    pub normal: [f64; MAX_DIM],
    pub offset: f64,
    /// Error scale per unit of `|x|_1`.
    pub tol: f64,
    /// Error contribution of the facet's own coordinates.
    pub tol_v0: f64,
}

impl Plane {
    pub fn dead() -> Plane {
        Plane {
            normal: [0.0; MAX_DIM],
            offset: f64::INFINITY,
            tol: 0.0,
            tol_v0: 0.0,
        }
    }

    pub fn of(f: &Facet, v0: &Point) -> Plane {
        let l1: f64 = v0.coords().iter().map(|c| c.abs()).sum();
        Plane {
            normal: f.normal,
            offset: f.offset,
            tol: f.tol,
            tol_v0: f.tol * l1,
        }
    }

    /// Certified side of `x` (with `x_l1 = |x|_1`), or `None` when the filter
    /// cannot decide.
    #[inline(always)]
    pub fn side(&self, x: &[f64], x_l1: f64) -> Option<Sign> {
        let mut s = -self.offset;
        for (n, c) in self.normal.iter().zip(x) {
            s += n * c;
        }
        let bound = self.tol * x_l1 + self.tol_v0;
        if s > bound {
            Some(Sign::Positive)
        } else if s < -bound {
            Some(Sign::Negative)
        } else {
            None
        }
    }
}
