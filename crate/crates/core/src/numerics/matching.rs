use super::sphere::{chordal_distance, SpherePoint};

/// Smallest `ε` such that the two multisets can be paired one-to-one with
/// every pair within chordal distance `ε`. `None` when the sizes differ.
pub fn multiset_distance(a: &[SpherePoint], b: &[SpherePoint]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some(0.0);
    }
    let dist: Vec<Vec<f64>> = a
        .iter()
        .map(|&p| b.iter().map(|&q| chordal_distance(p, q)).collect())
        .collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the answer is one of the pairwise distances; binary search the
    // smallest threshold admitting a perfect matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(candidates[lo])
}

fn perfect_matching(dist: &[Vec<f64>], eps: f64) -> bool {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    (0..n).all(|i| {
        let mut seen = vec![false; n];
        augment(i, dist, eps, &mut owner, &mut seen)
    })
}

fn augment(i: usize, dist: &[Vec<f64>], eps: f64, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= eps && !seen[j] {
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, dist, eps, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_would_fail() {
        // greedy nearest pairing of a[0] takes b[0] and strands a[1]
        let a = [SpherePoint::real(0.0), SpherePoint::real(0.1)];
        let b = [SpherePoint::real(0.05), SpherePoint::real(-0.5)];
        let d = multiset_distance(&a, &b).unwrap();
        assert!((d - chordal_distance(a[0], b[1])).abs() < 1e-15);
        assert_eq!(multiset_distance(&a, &b[..1]), None);
    }
}
