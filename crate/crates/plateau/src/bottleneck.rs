//! Bottleneck distance between persistence diagrams.
//!
//! A test utility: exact, by binary search over candidate distances with a
//! bipartite-matching feasibility check. Points match only within the same
//! homology dimension; off-diagonal finite points may match the diagonal.
//! Points with infinite death match each other at the distance of their
//! births, never the diagonal; if the counts of such points differ in some
//! dimension the distance is `+inf`.

use crate::persistence::{DiagramPoint, PersistenceDiagram};

/// l-infinity distance between two points under the extended-real
/// conventions: equal infinite coordinates contribute zero.
pub fn point_distance(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    if a.is_essential() != b.is_essential() {
        return f64::INFINITY;
    }
    let db = coord_diff(a.birth, b.birth);
    let dd = coord_diff(a.death, b.death);
    db.max(dd)
}

fn coord_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

fn diagonal_distance(p: &DiagramPoint) -> f64 {
    if p.is_essential() {
        f64::INFINITY
    } else {
        (p.death - p.birth) / 2.0
    }
}

pub fn bottleneck_distance(x: &PersistenceDiagram, y: &PersistenceDiagram) -> f64 {
    let mut dims: Vec<u8> = x.points.iter().chain(&y.points).map(|p| p.dim).collect();
    dims.sort_unstable();
    dims.dedup();
    let mut best = 0.0f64;
    for d in dims {
        let xs: Vec<&DiagramPoint> = x.points.iter().filter(|p| p.dim == d).collect();
        let ys: Vec<&DiagramPoint> = y.points.iter().filter(|p| p.dim == d).collect();
        best = best.max(essential_part(&xs, &ys));
        if best == f64::INFINITY {
            return best;
        }
        best = best.max(finite_part(&xs, &ys));
    }
    best
}

/// Essential points form a one-dimensional bottleneck problem on births;
/// matching sorted sequences in order is optimal.
fn essential_part(xs: &[&DiagramPoint], ys: &[&DiagramPoint]) -> f64 {
    let mut bx: Vec<f64> = xs
        .iter()
        .filter(|p| p.is_essential())
        .map(|p| p.birth)
        .collect();
    let mut by: Vec<f64> = ys
        .iter()
        .filter(|p| p.is_essential())
        .map(|p| p.birth)
        .collect();
    if bx.len() != by.len() {
        return f64::INFINITY;
    }
    bx.sort_by(f64::total_cmp);
    by.sort_by(f64::total_cmp);
    bx.iter()
        .zip(&by)
        .map(|(a, b)| coord_diff(*a, *b))
        .fold(0.0, f64::max)
}

fn finite_part(xs: &[&DiagramPoint], ys: &[&DiagramPoint]) -> f64 {
    let xs: Vec<&DiagramPoint> = xs.iter().filter(|p| !p.is_essential()).copied().collect();
    let ys: Vec<&DiagramPoint> = ys.iter().filter(|p| !p.is_essential()).copied().collect();
    if xs.is_empty() && ys.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = Vec::new();
    for a in &xs {
        candidates.push(diagonal_distance(a));
        for b in &ys {
            candidates.push(point_distance(a, b));
        }
    }
    for b in &ys {
        candidates.push(diagonal_distance(b));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if !transport_feasible(&xs, &ys, candidates[hi]) {
        return f64::INFINITY;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if transport_feasible(&xs, &ys, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Is there a perfect matching moving no point farther than `eps`?
///
/// Left side: the points of X plus one diagonal slot per point of Y; right
/// side symmetric. A diagonal slot accepts its own point when the
/// half-persistence is within `eps`, and always accepts the other side's
/// diagonal slots.
pub fn transport_feasible(xs: &[&DiagramPoint], ys: &[&DiagramPoint], eps: f64) -> bool {
    let left = xs.len() + ys.len();
    let right = ys.len() + xs.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); left];
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in ys.iter().enumerate() {
            if point_distance(a, b) <= eps {
                adjacency[i].push(j);
            }
        }
        if diagonal_distance(a) <= eps {
            adjacency[i].push(ys.len() + i);
        }
    }
    for (j, b) in ys.iter().enumerate() {
        if diagonal_distance(b) <= eps {
            adjacency[xs.len() + j].push(j);
        }
        for i in 0..xs.len() {
            adjacency[xs.len() + j].push(ys.len() + i);
        }
    }
    maximum_matching(&adjacency, right) == left
}

/// Checks that every X point can be matched within `eps` to a distinct Y
/// point of the same dimension, and vice versa, without the diagonal
/// option. Used by tests that require a one-to-one correspondence of
/// off-diagonal points.
pub fn exists_perfect_matching(xs: &[DiagramPoint], ys: &[DiagramPoint], eps: f64) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    if xs.is_empty() {
        return true;
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in ys.iter().enumerate() {
            if a.dim == b.dim && point_distance(a, b) <= eps {
                adjacency[i].push(j);
            }
        }
    }
    maximum_matching(&adjacency, ys.len()) == xs.len()
}

/// Hopcroft-Karp maximum matching; returns the matching size.
fn maximum_matching(adjacency: &[Vec<usize>], right: usize) -> usize {
    let left = adjacency.len();
    let mut match_left = vec![usize::MAX; left];
    let mut match_right = vec![usize::MAX; right];
    let mut size = 0usize;
    loop {
        // BFS layering from free left vertices.
        let mut dist = vec![usize::MAX; left];
        let mut queue: std::collections::VecDeque<usize> = (0..left)
            .filter(|i| match_left[*i] == usize::MAX)
            .collect();
        for &i in &queue {
            dist[i] = 0;
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacency[i] {
                let k = match_right[j];
                if k == usize::MAX {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            return size;
        }
        fn augment(
            i: usize,
            adjacency: &[Vec<usize>],
            dist: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            for idx in 0..adjacency[i].len() {
                let j = adjacency[i][idx];
                let k = match_right[j];
                if k == usize::MAX
                    || (dist[k] == dist[i] + 1
                        && augment(k, adjacency, dist, match_left, match_right))
                {
                    match_left[i] = j;
                    match_right[j] = i;
                    return true;
                }
            }
            dist[i] = usize::MAX;
            false
        }
        for i in 0..left {
            if match_left[i] == usize::MAX
                && augment(i, adjacency, &mut dist, &mut match_left, &mut match_right)
            {
                size += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(birth: f64, death: f64) -> DiagramPoint {
        DiagramPoint {
            dim: 0,
            birth,
            death,
        }
    }

    fn diag(points: Vec<DiagramPoint>) -> PersistenceDiagram {
        PersistenceDiagram { points }
    }

    #[test]
    fn identical_diagrams_are_at_distance_zero() {
        let x = diag(vec![
            point(0.0, 3.0),
            point(1.0, 2.0),
            point(4.0, f64::INFINITY),
        ]);
        assert_eq!(bottleneck_distance(&x, &x), 0.0);
    }

    #[test]
    fn single_point_matches_diagonal() {
        let x = diag(vec![point(0.0, 3.0)]);
        let y = diag(vec![]);
        assert_eq!(bottleneck_distance(&x, &y), 1.5);
    }

    #[test]
    fn two_point_example() {
        let x = diag(vec![point(0.0, 4.0)]);
        let y = diag(vec![point(1.0, 3.0)]);
        assert_eq!(bottleneck_distance(&x, &y), 1.0);
    }

    #[test]
    fn crossing_assignment_found() {
        let x = diag(vec![point(0.0, 10.0), point(0.0, 9.0)]);
        let y = diag(vec![point(0.5, 9.4), point(1.0, 10.1)]);
        // Pairing (0,10)-(1,10.1) and (0,9)-(0.5,9.4) gives max 1.0.
        assert_eq!(bottleneck_distance(&x, &y), 1.0);
    }

    #[test]
    fn mismatched_essentials_are_infinitely_far() {
        let x = diag(vec![point(0.0, f64::INFINITY)]);
        let y = diag(vec![]);
        assert_eq!(bottleneck_distance(&x, &y), f64::INFINITY);
    }

    #[test]
    fn capped_infinite_births_match_for_free() {
        let x = diag(vec![point(f64::INFINITY, f64::INFINITY)]);
        let y = diag(vec![point(f64::INFINITY, f64::INFINITY)]);
        assert_eq!(bottleneck_distance(&x, &y), 0.0);
    }

    #[test]
    fn dimensions_do_not_mix() {
        let x = diag(vec![DiagramPoint {
            dim: 0,
            birth: 0.0,
            death: 2.0,
        }]);
        let y = diag(vec![DiagramPoint {
            dim: 1,
            birth: 0.0,
            death: 2.0,
        }]);
        // Each point must go to its own diagonal.
        assert_eq!(bottleneck_distance(&x, &y), 1.0);
    }
}
