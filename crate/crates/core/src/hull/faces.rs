use std::collections::HashSet;

use super::Hull;
use crate::geometry::MAX_DIM;

type Key = [u32; MAX_DIM];

/// Adds every `size`-subset of `verts` to `out`, as sorted padded keys.
fn subsets(verts: &[u32], size: usize, out: &mut HashSet<Key>) {
    let m = verts.len();
    if size == 0 || size > m {
        return;
    }
    let mut sorted = [0u32; MAX_DIM];
    sorted[..m].copy_from_slice(verts);
    sorted[..m].sort_unstable();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let mut key = [u32::MAX; MAX_DIM];
        let mut k = 0;
        for (b, v) in sorted[..m].iter().enumerate() {
            if mask & (1 << b) != 0 {
                key[k] = *v;
                k += 1;
            }
        }
        out.insert(key);
    }
}

/// Number of distinct `i`-faces, i.e. `(i+1)`-subsets of facet vertex sets.
pub(super) fn count_faces(hull: &Hull, i: usize) -> usize {
    let d = hull.dim;
    if i + 1 == d {
        return hull.n_facets;
    }
    let mut set = HashSet::new();
    for (_, f) in hull.live_facets() {
        subsets(&f.vertices[..d], i + 1, &mut set);
    }
    set.len()
}

/// Destroyed and created face counts for an insertion whose visible region
/// and horizon ridges are given.
pub(super) fn delta_counts(
    hull: &Hull,
    visible: &[u32],
    horizon: &[(u32, usize, u32)],
) -> (Vec<usize>, Vec<usize>) {
    let d = hull.dim;
    let ridges: Vec<Vec<u32>> = horizon
        .iter()
        .map(|&(f, k, _)| {
            let verts = &hull.facets[f as usize].vertices[..d];
            verts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect();
    let mut destroyed = vec![0; d];
    let mut created = vec![0; d];
    for i in 0..d {
        let mut old = HashSet::new();
        for &f in visible {
            subsets(&hull.facets[f as usize].vertices[..d], i + 1, &mut old);
        }
        let mut kept = HashSet::new();
        for r in &ridges {
            subsets(r, i + 1, &mut kept);
        }
        destroyed[i] = old.len() - kept.len();
        created[i] = if i == 0 {
            1
        } else {
            let mut new = HashSet::new();
            for r in &ridges {
                subsets(r, i, &mut new);
            }
            new.len()
        };
    }
    (destroyed, created)
}
