//! Beneath-beyond convex hulls in dimensions 2 through 6.
//!
//! Facets are simplices stored in a slab with free-list recycling. Each facet
//! keeps a floating-point outward unit normal together with a certified error
//! scale; visibility tests that the filter cannot decide fall back to the
//! exact orientation predicate.

mod brute;
mod facet;
mod faces;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{orient_exact, Point, Sign, MAX_DIM};
use crate::{Error, Result};

pub(crate) use facet::Facet;
use facet::Plane;

const NONE: u32 = u32::MAX;

/// Face-count changes and visibility data for one point insertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsertionDelta {
    /// Faces of dimension `i` removed by the insertion, `i = 0..d`.
    pub destroyed_faces: Vec<usize>,
    /// Faces of dimension `i` created by the insertion.
    pub created_faces: Vec<usize>,
    /// Number of hull vertices on facets strictly visible from the point.
    pub visible_vertex_count: usize,
    pub volume_gain: f64,
}

impl InsertionDelta {
    pub fn zero(dim: usize) -> Self {
        InsertionDelta {
            destroyed_faces: vec![0; dim],
            created_faces: vec![0; dim],
            visible_vertex_count: 0,
            volume_gain: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.visible_vertex_count == 0
            && self.volume_gain == 0.0
            && self.destroyed_faces.iter().all(|c| *c == 0)
            && self.created_faces.iter().all(|c| *c == 0)
    }
}

/// Read-only view of one facet.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetView {
    /// Indices into the hull's point store (see [`Hull::point`]).
    pub vertices: Vec<usize>,
    pub normal: Point,
    pub offset: f64,
}

/// A simplicial convex hull.
#[derive(Debug, Clone)]
pub struct Hull {
    dim: usize,
    points: Vec<Point>,
    labels: Vec<usize>,
    alive: Vec<bool>,
    n_alive: usize,
    facets: Vec<Facet>,
    planes: Vec<Plane>,
    facet_alive: Vec<bool>,
    free: Vec<u32>,
    n_facets: usize,
    interior: Point,
    volume: f64,
    offered: usize,
    filter_center: Point,
    filter_r2: f64,
    since_refresh: usize,
    filter_misses: usize,
    epoch: u32,
    facet_mark: Vec<u32>,
    facet_visible: Vec<bool>,
    vertex_mark: Vec<u32>,
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

fn check_points(points: &[Point]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::Degenerate("no points".into()));
    };
    let d = first.dim();
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::invalid(format!("hull dimension {d} outside 2..={MAX_DIM}")));
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::invalid("points differ in dimension"));
    }
    if points.len() < d + 1 {
        return Err(Error::Degenerate(format!(
            "{} points cannot span dimension {d}",
            points.len()
        )));
    }
    Ok(d)
}

impl Hull {
    /// Convex hull of `points`. Vertex labels are input indices.
    pub fn build(points: &[Point]) -> Result<Hull> {
        let d = check_points(points)?;
        let simplex = initial_simplex(points, d)?;
        let mut hull = Hull::from_simplex(points, &simplex)?;
        let mut chosen = [usize::MAX; MAX_DIM + 1];
        chosen[..=d].copy_from_slice(&simplex);
        for (i, p) in points.iter().enumerate() {
            if !chosen[..=d].contains(&i) {
                hull.insert_impl(p, i, false);
            }
        }
        hull.offered = points.len();
        hull.refresh_filter();
        Ok(hull)
    }

    /// Brute-force hull: a `d`-subset is a facet iff every other point lies
    /// strictly on one side of its hyperplane. Limited to 50 points.
    pub fn brute_force(points: &[Point]) -> Result<Hull> {
        brute::brute_force(points)
    }

    fn empty(dim: usize) -> Hull {
        Hull {
            dim,
            points: Vec::new(),
            labels: Vec::new(),
            alive: Vec::new(),
            n_alive: 0,
            facets: Vec::new(),
            planes: Vec::new(),
            facet_alive: Vec::new(),
            free: Vec::new(),
            n_facets: 0,
            interior: Point::origin(dim),
            volume: 0.0,
            offered: 0,
            filter_center: Point::origin(dim),
            filter_r2: 0.0,
            since_refresh: 0,
            filter_misses: 0,
            epoch: 0,
            facet_mark: Vec::new(),
            facet_visible: Vec::new(),
            vertex_mark: Vec::new(),
        }
    }

    fn push_point(&mut self, p: Point, label: usize) -> u32 {
        self.points.push(p);
        self.labels.push(label);
        self.alive.push(true);
        self.vertex_mark.push(0);
        self.n_alive += 1;
        (self.points.len() - 1) as u32
    }

    fn from_simplex(points: &[Point], simplex: &[usize]) -> Result<Hull> {
        let d = points[0].dim();
        let mut hull = Hull::empty(d);
        for &i in simplex {
            hull.push_point(points[i], i);
        }
        let mut centroid = Point::origin(d);
        for p in &hull.points {
            centroid = centroid.add(p);
        }
        hull.interior = centroid.scale(1.0 / (d + 1) as f64);
        for k in 0..=d {
            let mut verts = [NONE; MAX_DIM];
            let mut nbrs = [NONE; MAX_DIM];
            let mut slot = 0;
            for j in 0..=d {
                if j != k {
                    verts[slot] = j as u32;
                    nbrs[slot] = j as u32;
                    slot += 1;
                }
            }
            let f = hull.make_facet(verts, nbrs)?;
            hull.add_facet(f);
        }
        hull.volume = hull.compute_volume();
        hull.refresh_filter();
        Ok(hull)
    }

    pub(crate) fn make_facet(&self, verts: [u32; MAX_DIM], nbrs: [u32; MAX_DIM]) -> Result<Facet> {
        let refs: Vec<&Point> = verts[..self.dim]
            .iter()
            .map(|&v| &self.points[v as usize])
            .collect();
        Facet::new(verts, nbrs, &refs, &self.interior)
    }

    fn add_facet(&mut self, f: Facet) -> u32 {
        self.n_facets += 1;
        let plane = if f.measure > 0.0 {
            Plane::of(&f, &self.points[f.vertices[0] as usize])
        } else {
            Plane {
                tol: f64::INFINITY,
                offset: 0.0,
                ..Plane::dead()
            }
        };
        if let Some(id) = self.free.pop() {
            self.facets[id as usize] = f;
            self.planes[id as usize] = plane;
            self.facet_alive[id as usize] = true;
            id
        } else {
            self.facets.push(f);
            self.planes.push(plane);
            self.facet_alive.push(true);
            self.facet_mark.push(0);
            self.facet_visible.push(false);
            (self.facets.len() - 1) as u32
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cached volume, maintained incrementally.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Volume recomputed as the sum of the cones from the interior point over
    /// all facets.
    pub fn compute_volume(&self) -> f64 {
        let fact = factorial(self.dim);
        self.live_facets()
            .map(|(_, f)| {
                let v0 = &self.points[f.vertices[0] as usize];
                let h = f.offset_from(v0, &self.interior).abs();
                h * f.measure / fact
            })
            .sum()
    }

    pub fn interior_point(&self) -> &Point {
        &self.interior
    }

    /// Number of points offered to the hull so far (batch input plus
    /// insertions), whether or not they became vertices.
    pub fn offered(&self) -> usize {
        self.offered
    }

    pub fn vertex_count(&self) -> usize {
        self.n_alive
    }

    pub fn facet_count(&self) -> usize {
        self.n_facets
    }

    /// Current vertices with their labels (input index for batch builds,
    /// offer sequence number for insertions).
    pub fn vertices(&self) -> impl Iterator<Item = (usize, &Point)> + '_ {
        self.points
            .iter()
            .zip(&self.labels)
            .zip(&self.alive)
            .filter(|(_, a)| **a)
            .map(|((p, l), _)| (*l, p))
    }

    /// A stored point by index; facet views refer to these indices.
    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    pub fn label(&self, index: usize) -> usize {
        self.labels[index]
    }

    pub(crate) fn live_facets(&self) -> impl Iterator<Item = (usize, &Facet)> + '_ {
        self.facets
            .iter()
            .enumerate()
            .filter(|(i, _)| self.facet_alive[*i])
    }

    pub fn facets(&self) -> Vec<FacetView> {
        self.live_facets()
            .map(|(_, f)| FacetView {
                vertices: f.vertices[..self.dim].iter().map(|v| *v as usize).collect(),
                normal: Point::from_slice(&f.normal[..self.dim]),
                offset: f.offset,
            })
            .collect()
    }

    /// Facets as sorted label tuples, for comparing hulls built from the same
    /// labelled input.
    pub fn facet_label_sets(&self) -> std::collections::BTreeSet<Vec<usize>> {
        self.live_facets()
            .map(|(_, f)| {
                let mut v: Vec<usize> = f.vertices[..self.dim]
                    .iter()
                    .map(|&i| self.labels[i as usize])
                    .collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Vertex indices (into the point store) of the facet with id `id`.
    pub fn facet_vertices(&self, id: usize) -> Vec<usize> {
        self.facets[id].vertices[..self.dim].iter().map(|v| *v as usize).collect()
    }

    /// Facet ids and their neighbor ids, for adjacency checks.
    pub fn adjacency(&self) -> Vec<(usize, Vec<usize>)> {
        self.live_facets()
            .map(|(i, f)| (i, f.neighbors[..self.dim].iter().map(|n| *n as usize).collect()))
            .collect()
    }

    /// Sign of `x` relative to facet `id`: positive when strictly beyond.
    #[inline]
    fn side(&self, id: usize, x: &Point, x_l1: f64) -> Sign {
        match self.planes[id].side(x.coords(), x_l1) {
            Some(s) => s,
            None => self.exact_side(id, x),
        }
    }

    #[cold]
    fn exact_side(&self, id: usize, x: &Point) -> Sign {
        let f = &self.facets[id];
        let mut refs: [&Point; MAX_DIM + 1] = [x; MAX_DIM + 1];
        for (r, v) in refs.iter_mut().zip(&f.vertices[..self.dim]) {
            *r = &self.points[*v as usize];
        }
        let s = orient_exact(&refs[..=self.dim]);
        if f.flip {
            s.flip()
        } else {
            s
        }
    }

    #[inline]
    fn surely_inside(&self, x: &Point) -> bool {
        self.filter_center.dist2(x) < self.filter_r2
    }

    /// Ids of facets whose outward open halfspace contains `x`.
    pub fn visible_facets(&self, x: &Point) -> Vec<usize> {
        if x.dim() != self.dim || self.surely_inside(x) {
            return Vec::new();
        }
        let l1 = l1_norm(x);
        (0..self.planes.len())
            .filter(|&i| self.facet_alive[i] && self.side(i, x, l1) == Sign::Positive)
            .collect()
    }

    /// Number of distinct vertices on facets visible from `x`; zero iff `x`
    /// lies in the (closed) hull.
    pub fn visible_vertex_count(&self, x: &Point) -> usize {
        let vis = self.visible_facets(x);
        if vis.is_empty() {
            return 0;
        }
        let mut verts: Vec<u32> = vis
            .iter()
            .flat_map(|&i| self.facets[i].vertices[..self.dim].iter().copied())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        verts.len()
    }

    /// Closed membership test.
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        if self.surely_inside(x) {
            return true;
        }
        let l1 = l1_norm(x);
        (0..self.planes.len()).all(|i| !self.facet_alive[i] || self.side(i, x, l1) != Sign::Positive)
    }

    /// Adds `x` and reports the change. Points inside the hull leave it
    /// unchanged and yield an all-zero delta.
    pub fn insert(&mut self, x: &Point) -> Result<InsertionDelta> {
        if x.dim() != self.dim {
            return Err(Error::invalid("inserted point has the wrong dimension"));
        }
        if x.coords().iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("inserted point is not finite"));
        }
        let label = self.offered;
        self.offered += 1;
        Ok(self
            .insert_impl(x, label, true)
            .unwrap_or_else(|| InsertionDelta::zero(self.dim)))
    }

    /// Adds `x` without face bookkeeping; returns whether the hull changed.
    pub fn add_point(&mut self, x: &Point) -> bool {
        let label = self.offered;
        self.offered += 1;
        self.insert_impl(x, label, false).is_some()
    }

    fn find_visible(&mut self, x: &Point) -> Option<u32> {
        if self.surely_inside(x) {
            return None;
        }
        self.filter_misses += 1;
        if self.since_refresh > 0 && self.filter_misses >= 8 {
            self.refresh_filter();
            if self.surely_inside(x) {
                return None;
            }
        }
        let l1 = l1_norm(x);
        let xc = x.coords();
        for (i, plane) in self.planes.iter().enumerate() {
            match plane.side(xc, l1) {
                Some(Sign::Positive) => return Some(i as u32),
                Some(_) => {}
                None => {
                    if self.facet_alive[i] && self.exact_side(i, x) == Sign::Positive {
                        return Some(i as u32);
                    }
                }
            }
        }
        None
    }

    fn insert_impl(&mut self, x: &Point, label: usize, track: bool) -> Option<InsertionDelta> {
        let start = self.find_visible(x)?;
        let d = self.dim;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.facet_mark.fill(0);
            self.vertex_mark.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let l1 = l1_norm(x);

        // Visible region: strictly visible facets plus coplanar facets
        // reachable from them.
        let mut visible: Vec<u32> = vec![start];
        let mut strict: Vec<u32> = vec![start];
        self.facet_mark[start as usize] = epoch;
        self.facet_visible[start as usize] = true;
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head] as usize;
            head += 1;
            for k in 0..d {
                let g = self.facets[f].neighbors[k] as usize;
                if self.facet_mark[g] == epoch {
                    continue;
                }
                self.facet_mark[g] = epoch;
                let s = self.side(g, x, l1);
                let vis = s != Sign::Negative;
                self.facet_visible[g] = vis;
                if vis {
                    visible.push(g as u32);
                    if s == Sign::Positive {
                        strict.push(g as u32);
                    }
                }
            }
        }

        // Horizon ridges: (visible facet, slot, beneath neighbor).
        let mut horizon: Vec<(u32, usize, u32)> = Vec::new();
        for &f in &visible {
            let fac = &self.facets[f as usize];
            for k in 0..d {
                let g = fac.neighbors[k];
                if !self.facet_visible[g as usize] || self.facet_mark[g as usize] != epoch {
                    horizon.push((f, k, g));
                }
            }
        }

        let visible_vertex_count = {
            let mut vs: Vec<u32> = strict
                .iter()
                .flat_map(|&f| self.facets[f as usize].vertices[..d].iter().copied())
                .collect();
            vs.sort_unstable();
            vs.dedup();
            vs.len()
        };
        let fact = factorial(d);
        let volume_gain: f64 = strict
            .iter()
            .map(|&f| {
                let fac = &self.facets[f as usize];
                let v0 = &self.points[fac.vertices[0] as usize];
                (fac.offset_from(v0, x) * fac.measure / fact).max(0.0)
            })
            .sum();

        let counts = track.then(|| faces::delta_counts(self, &visible, &horizon));

        // Vertices of the visible region not on the horizon disappear.
        for &(f, k, _) in &horizon {
            let fac = &self.facets[f as usize];
            for j in 0..d {
                if j != k {
                    self.vertex_mark[fac.vertices[j] as usize] = epoch;
                }
            }
        }
        for &f in &visible {
            for j in 0..d {
                let v = self.facets[f as usize].vertices[j] as usize;
                if self.vertex_mark[v] != epoch && self.alive[v] {
                    self.alive[v] = false;
                    self.n_alive -= 1;
                }
            }
        }

        let p = self.push_point(*x, label);
        let mut ridge_map: HashMap<[u32; MAX_DIM], (u32, usize)> =
            HashMap::with_capacity(horizon.len() * d);
        for &(f, k, g) in &horizon {
            let mut verts = self.facets[f as usize].vertices;
            verts[k] = p;
            let mut nbrs = [NONE; MAX_DIM];
            nbrs[k] = g;
            let facet = match self.make_facet(verts, nbrs) {
                Ok(fc) => fc,
                // A new facet through an interior reference point cannot be
                // flat unless the input is degenerate beyond repair; keep the
                // hull consistent by treating it as zero-measure.
                Err(_) => Facet::flat(verts, nbrs),
            };
            let id = self.add_facet(facet);
            let gn = &mut self.facets[g as usize].neighbors;
            if let Some(slot) = gn[..d].iter().position(|n| *n == f) {
                gn[slot] = id;
            }
            for j in 0..d {
                if j == k {
                    continue;
                }
                let mut key = [NONE; MAX_DIM];
                let mut m = 0;
                for (s, v) in verts[..d].iter().enumerate() {
                    if s != j && s != k {
                        key[m] = *v;
                        m += 1;
                    }
                }
                key[..m].sort_unstable();
                match ridge_map.remove(&key) {
                    Some((other, oslot)) => {
                        self.facets[id as usize].neighbors[j] = other;
                        self.facets[other as usize].neighbors[oslot] = id;
                    }
                    None => {
                        ridge_map.insert(key, (id, j));
                    }
                }
            }
        }
        debug_assert!(ridge_map.is_empty(), "unmatched horizon ridges");

        for &f in &visible {
            self.facet_alive[f as usize] = false;
            self.planes[f as usize] = Plane::dead();
            self.facet_visible[f as usize] = false;
            self.free.push(f);
            self.n_facets -= 1;
        }
        self.volume += volume_gain;
        self.since_refresh += 1;

        let (destroyed_faces, created_faces) =
            counts.unwrap_or_else(|| (vec![0; d], vec![0; d]));
        Some(InsertionDelta {
            destroyed_faces,
            created_faces,
            visible_vertex_count,
            volume_gain,
        })
    }

    /// Recenters the inscribed-ball prefilter at the vertex centroid.
    fn refresh_filter(&mut self) {
        self.since_refresh = 0;
        self.filter_misses = 0;
        let d = self.dim;
        let mut c = Point::origin(d);
        for (_, p) in self.vertices() {
            c = c.add(p);
        }
        let c = c.scale(1.0 / self.n_alive.max(1) as f64);
        let mut r = f64::INFINITY;
        for (_, f) in self.live_facets() {
            let dist = f.offset - f.normal[..d].iter().zip(c.coords()).map(|(a, b)| a * b).sum::<f64>();
            r = r.min(dist);
        }
        let margin = 1e-10 * (1.0 + c.norm() + r.abs());
        let safe = r - margin;
        if safe > 0.0 && safe.is_finite() {
            self.filter_center = c;
            self.filter_r2 = safe * safe;
        } else {
            self.filter_r2 = 0.0;
        }
    }

    /// `f_i`: the number of `i`-dimensional faces, counted from facet vertex
    /// subsets (valid for simplicial hulls).
    pub fn face_count(&self, i: usize) -> Result<usize> {
        if i >= self.dim {
            return Err(Error::invalid(format!(
                "face dimension {i} outside 0..{}",
                self.dim
            )));
        }
        if i == 0 {
            return Ok(self.n_alive);
        }
        Ok(faces::count_faces(self, i))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim).map(|i| self.face_count(i).unwrap_or(0)).collect()
    }

    /// Alternating sum `sum_i (-1)^i f_i`, which equals `1 - (-1)^d` for a
    /// simplicial polytope.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, f)| if i % 2 == 0 { *f as i64 } else { -(*f as i64) })
            .sum()
    }

    /// Structural self-check used by tests: adjacency is an involution, every
    /// vertex is weakly beneath every facet, and the Euler relation holds.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for (i, f) in self.live_facets() {
            for k in 0..d {
                let g = f.neighbors[k] as usize;
                if g == NONE as usize || !self.facet_alive[g] {
                    return Err(Error::Degenerate(format!("facet {i} has a dead neighbor")));
                }
                if !self.facets[g].neighbors[..d].contains(&(i as u32)) {
                    return Err(Error::Degenerate(format!("adjacency {i}->{g} not symmetric")));
                }
                let shared = f.vertices[..d]
                    .iter()
                    .filter(|v| self.facets[g].vertices[..d].contains(v))
                    .count();
                if shared != d - 1 {
                    return Err(Error::Degenerate(format!("facets {i},{g} share {shared} vertices")));
                }
            }
            for (_, p) in self.vertices() {
                if self.side(i, p, l1_norm(p)) == Sign::Positive {
                    return Err(Error::Degenerate(format!("vertex beyond facet {i}")));
                }
            }
        }
        let expected = if d % 2 == 0 { 0 } else { 2 };
        if self.euler_characteristic() != expected {
            return Err(Error::Degenerate(format!(
                "Euler characteristic {} != {expected}",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }
}

fn l1_norm(x: &Point) -> f64 {
    x.coords().iter().map(|c| c.abs()).sum()
}

/// Picks `d + 1` affinely independent points greedily: each new point is the
/// farthest from the affine span of those already chosen.
fn initial_simplex(points: &[Point], d: usize) -> Result<Vec<usize>> {
    let first = (0..points.len())
        .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
        .unwrap_or(0);
    let origin = points[first];
    let mut chosen = vec![first];
    let mut basis: Vec<Point> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut best = (0.0f64, usize::MAX, Point::origin(d));
        for (i, p) in points.iter().enumerate() {
            let mut r = p.sub(&origin);
            for b in &basis {
                let c = r.dot(b);
                r = r.offset_by(b, -c);
            }
            let n2 = r.norm2();
            if n2 > best.0 {
                best = (n2, i, r);
            }
        }
        if best.1 == usize::MAX || !(best.0 > 0.0) {
            return Err(Error::Degenerate("points do not span the space".into()));
        }
        chosen.push(best.1);
        let dir = best.2.scale(1.0 / best.0.sqrt());
        basis.push(dir);
    }
    let refs: Vec<&Point> = chosen.iter().map(|&i| &points[i]).collect();
    if crate::geometry::orient(&refs) == Sign::Zero {
        return Err(Error::Degenerate("points do not span the space".into()));
    }
    Ok(chosen)
}
