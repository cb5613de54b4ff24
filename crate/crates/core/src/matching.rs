//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching of a bipartite graph given as left-to-right adjacency.
///
/// Returns `mate[l]` for every left vertex (`None` when unmatched). Vertices
/// and neighbor lists are scanned in index order, so the result is
/// deterministic.
pub fn hopcroft_karp(adj: &[Vec<usize>], right_count: usize) -> Vec<Option<usize>> {
    let left_count = adj.len();
    let mut mate_left = vec![NIL; left_count];
    let mut mate_right = vec![NIL; right_count];
    let mut dist = vec![0usize; left_count];
    let mut queue = VecDeque::new();

    loop {
        // Layered BFS from all free left vertices.
        queue.clear();
        for l in 0..left_count {
            if mate_left[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate_right[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }

        let mut cursor = vec![0usize; left_count];
        for l in 0..left_count {
            if mate_left[l] == NIL {
                augment(l, adj, &mut mate_left, &mut mate_right, &mut dist, &mut cursor);
            }
        }
    }

    mate_left
        .into_iter()
        .map(|r| if r == NIL { None } else { Some(r) })
        .collect()
}

/// Iterative DFS along the BFS layers; flips the path when a free right
/// vertex is reached.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_left: &mut [usize],
    mate_right: &mut [usize],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut l = root;
    loop {
        if let Some(&r) = adj[l].get(cursor[l]) {
            cursor[l] += 1;
            let next = mate_right[r];
            if next == NIL {
                path.push((l, r));
                for &(pl, pr) in &path {
                    mate_left[pl] = pr;
                    mate_right[pr] = pl;
                }
                return true;
            }
            if dist[next] == dist[l].wrapping_add(1) {
                path.push((l, r));
                l = next;
            }
        } else {
            // Dead end: never revisit this vertex during the current phase.
            dist[l] = usize::MAX;
            match path.pop() {
                Some((prev, _)) => l = prev,
                None => return false,
            }
        }
    }
}

pub fn matching_size(mates: &[Option<usize>]) -> usize {
    mates.iter().filter(|m| m.is_some()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(adj: &[Vec<usize>], right: usize) -> usize {
        fn go(l: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if l == adj.len() {
                return 0;
            }
            let mut best = go(l + 1, adj, used);
            for &r in &adj[l] {
                if !used[r] {
                    used[r] = true;
                    best = best.max(1 + go(l + 1, adj, used));
                    used[r] = false;
                }
            }
            best
        }
        go(0, adj, &mut vec![false; right])
    }

    #[test]
    fn perfect_matching_needs_augmentation() {
        // Greedy would match 0-0 and leave 1 stranded.
        let adj = vec![vec![0, 1], vec![0]];
        let mates = hopcroft_karp(&adj, 2);
        assert_eq!(mates, vec![Some(1), Some(0)]);
    }

    #[test]
    fn empty_graph() {
        assert_eq!(matching_size(&hopcroft_karp(&[vec![], vec![]], 3)), 0);
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_search(
            edges in proptest::collection::vec((0usize..6, 0usize..6), 0..20)
        ) {
            let mut adj = vec![Vec::new(); 6];
            for (l, r) in edges {
                if !adj[l].contains(&r) {
                    adj[l].push(r);
                }
            }
            let mates = hopcroft_karp(&adj, 6);
            let mut seen = std::collections::HashSet::new();
            for (l, m) in mates.iter().enumerate() {
                if let Some(r) = m {
                    prop_assert!(adj[l].contains(r));
                    prop_assert!(seen.insert(*r));
                }
            }
            prop_assert_eq!(matching_size(&mates), brute_force(&adj, 6));
        }
    }
}
