use std::collections::{BTreeMap, HashMap};

use super::{check_points, Hull, NONE};
use crate::geometry::{orient, Point, Sign, MAX_DIM};
use crate::{Error, Result};

pub const BRUTE_FORCE_LIMIT: usize = 50;

/// Calls `f` on every increasing `k`-tuple of `0..n`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(super) fn brute_force(points: &[Point]) -> Result<Hull> {
    let d = check_points(points)?;
    if points.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!(
            "brute-force hull limited to {BRUTE_FORCE_LIMIT} points, got {}",
            points.len()
        )));
    }
    let mut facets: Vec<Vec<usize>> = Vec::new();
    let mut refs: Vec<&Point> = Vec::with_capacity(d + 1);
    for_each_combination(points.len(), d, |combo| {
        let (mut pos, mut neg) = (false, false);
        for (q, p) in points.iter().enumerate() {
            if combo.contains(&q) {
                continue;
            }
            refs.clear();
            refs.extend(combo.iter().map(|&i| &points[i]));
            refs.push(p);
            match orient(&refs) {
                Sign::Positive => pos = true,
                Sign::Negative => neg = true,
                Sign::Zero => {
                    pos = true;
                    neg = true;
                }
            }
            if pos && neg {
                return;
            }
        }
        facets.push(combo.to_vec());
    });
    if facets.is_empty() {
        return Err(Error::Degenerate("no facets found".into()));
    }

    let mut index: BTreeMap<usize, u32> = BTreeMap::new();
    for f in &facets {
        for &v in f {
            index.entry(v).or_insert(0);
        }
    }
    let mut hull = Hull::empty(d);
    for (input, slot) in index.iter_mut() {
        *slot = hull.push_point(points[*input], *input);
    }
    let mut c = Point::origin(d);
    for p in &hull.points {
        c = c.add(p);
    }
    hull.interior = c.scale(1.0 / hull.points.len() as f64);

    let mut ridge_map: HashMap<[u32; MAX_DIM], (u32, usize)> = HashMap::new();
    for f in &facets {
        let mut verts = [NONE; MAX_DIM];
        for (s, v) in f.iter().enumerate() {
            verts[s] = index[v];
        }
        let facet = hull.make_facet(verts, [NONE; MAX_DIM])?;
        let id = hull.add_facet(facet);
        for j in 0..d {
            let mut key = [NONE; MAX_DIM];
            let mut m = 0;
            for (s, v) in verts[..d].iter().enumerate() {
                if s != j {
                    key[m] = *v;
                    m += 1;
                }
            }
            key[..m].sort_unstable();
            match ridge_map.remove(&key) {
                Some((other, oslot)) => {
                    hull.facets[id as usize].neighbors[j] = other;
                    hull.facets[other as usize].neighbors[oslot] = id;
                }
                None => {
                    ridge_map.insert(key, (id, j));
                }
            }
        }
    }
    if !ridge_map.is_empty() {
        return Err(Error::Degenerate("facets do not close up".into()));
    }
    hull.offered = points.len();
    hull.volume = hull.compute_volume();
    hull.refresh_filter();
    Ok(hull)
}
