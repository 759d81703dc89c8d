use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 6;

/// A point (or vector) in `R^d`, `1 <= d <= MAX_DIM`, stored inline.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::invalid(format!(
                "point dimension {} outside 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(Self::from_slice(coords))
    }

    /// Builds a point without validation. `coords.len()` must be in
    /// `1..=MAX_DIM`.
    #[inline]
    pub(crate) fn from_slice(coords: &[f64]) -> Self {
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Point {
            coords: c,
            dim: coords.len() as u8,
        }
    }

    #[inline]
    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize) -> f64) -> Self {
        let mut c = [0.0; MAX_DIM];
        for (i, v) in c.iter_mut().take(dim).enumerate() {
            *v = f(i);
        }
        Point {
            coords: c,
            dim: dim as u8,
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self::from_fn(dim, |_| 0.0)
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::from_fn(dim, |j| if i == j { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a * b)
            .sum()
    }

    #[inline]
    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    #[inline]
    pub fn sub(&self, other: &Point) -> Point {
        Point::from_fn(self.dim(), |i| self.coords[i] - other.coords[i])
    }

    #[inline]
    pub fn add(&self, other: &Point) -> Point {
        Point::from_fn(self.dim(), |i| self.coords[i] + other.coords[i])
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Point {
        Point::from_fn(self.dim(), |i| self.coords[i] * s)
    }

    /// `self + s * dir`
    #[inline]
    pub fn offset_by(&self, dir: &Point, s: f64) -> Point {
        Point::from_fn(self.dim(), |i| self.coords[i] + s * dir.coords[i])
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }
}

impl Index<usize> for Point {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.coords()[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Point::new(&v).map_err(serde::de::Error::custom)
    }
}
