//! Maximum cardinality matching in general (non-bipartite) graphs.
//!
//! Graphs are given as adjacency lists over vertices `0..n`. Small graphs
//! (`n <= BITMASK_LIMIT`) are solved exactly by memoized search over vertex
//! subsets; larger ones use Edmonds' blossom algorithm.

use std::collections::VecDeque;

/// Largest vertex count handled by the subset search.
pub const BITMASK_LIMIT: usize = 20;

const NONE: usize = usize::MAX;

/// A maximum matching as a list of vertex pairs `(u, v)` with `u < v`.
///
/// Isolated vertices are dropped before choosing the algorithm.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let active: Vec<usize> = (0..adj.len())
        .filter(|&v| adj[v].iter().any(|&u| u != v))
        .collect();
    if active.len() == adj.len() {
        return dispatch(adj);
    }
    let mut index = vec![NONE; adj.len()];
    for (i, &v) in active.iter().enumerate() {
        index[v] = i;
    }
    let compact: Vec<Vec<usize>> = active
        .iter()
        .map(|&v| {
            adj[v]
                .iter()
                .filter(|&&u| u != v)
                .map(|&u| index[u])
                .collect()
        })
        .collect();
    dispatch(&compact)
        .into_iter()
        .map(|(a, b)| (active[a], active[b]))
        .collect()
}

fn dispatch(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    if adj.len() <= BITMASK_LIMIT {
        matching_bitmask(adj)
    } else {
        matching_blossom(adj)
    }
}

pub fn maximum_matching_size(adj: &[Vec<usize>]) -> usize {
    maximum_matching(adj).len()
}

/// Exact maximum matching by memoized recursion on the lowest unmatched
/// vertex. Panics if the graph has more than [`BITMASK_LIMIT`] vertices.
pub fn matching_bitmask(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    assert!(
        n <= BITMASK_LIMIT,
        "subset search limited to {BITMASK_LIMIT} vertices, got {n}"
    );
    if n == 0 {
        return Vec::new();
    }
    let nbr: Vec<u32> = adj
        .iter()
        .enumerate()
        .map(|(v, list)| {
            list.iter()
                .filter(|&&u| u != v)
                .fold(0u32, |m, &u| m | (1 << u))
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = vec![u8::MAX; 1usize << n];
    let best = solve(full, &nbr, &mut memo);

    let mut pairs = Vec::with_capacity(best as usize);
    let mut mask = full;
    while mask != 0 {
        let target = solve(mask, &nbr, &mut memo);
        if target == 0 {
            break;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        if solve(rest, &nbr, &mut memo) == target {
            mask = rest;
            continue;
        }
        let mut cand = nbr[v] & rest;
        let mut advanced = false;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let next = rest & !(1 << u);
            if solve(next, &nbr, &mut memo) + 1 == target {
                pairs.push((v.min(u), v.max(u)));
                mask = next;
                advanced = true;
                break;
            }
        }
        debug_assert!(advanced);
        if !advanced {
            break;
        }
    }
    pairs
}

fn solve(mask: u32, nbr: &[u32], memo: &mut [u8]) -> u8 {
    if mask.count_ones() < 2 {
        return 0;
    }
    let cached = memo[mask as usize];
    if cached != u8::MAX {
        return cached;
    }
    let ceiling = (mask.count_ones() / 2) as u8;
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let mut best = 0;
    let mut cand = nbr[v] & rest;
    while cand != 0 && best < ceiling {
        let u = cand.trailing_zeros();
        cand &= cand - 1;
        best = best.max(1 + solve(rest & !(1 << u), nbr, memo));
    }
    if best < ceiling {
        best = best.max(solve(rest, nbr, memo));
    }
    memo[mask as usize] = best;
    best
}

/// Edmonds' blossom algorithm, `O(n^3)`.
pub fn matching_blossom(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut mate = vec![NONE; n];

    // greedy warm start
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| u != v && mate[u] == NONE) {
                mate[v] = u;
                mate[u] = v;
            }
        }
    }

    let mut search = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root] == NONE {
            let end = search.find_augmenting_path(adj, &mate, root);
            if end != NONE {
                let mut v = end;
                while v != NONE {
                    let pv = search.parent[v];
                    let next = mate[pv];
                    mate[v] = pv;
                    mate[pv] = v;
                    v = next;
                }
            }
        }
    }

    (0..n)
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| (v, mate[v]))
        .collect()
}

struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: VecDeque<usize>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
            queue: VecDeque::with_capacity(n),
        }
    }

    fn lca(&mut self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        self.on_path.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if self.on_path[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    /// Returns the free endpoint of an augmenting path from `root`, or `NONE`.
    fn find_augmenting_path(&mut self, adj: &[Vec<usize>], mate: &[usize], root: usize) -> usize {
        let n = adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);

        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if to == v || self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return to;
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<Vec<usize>> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        graph(n, &edges)
    }

    fn is_valid_matching(adj: &[Vec<usize>], pairs: &[(usize, usize)]) -> bool {
        let mut seen = vec![false; adj.len()];
        pairs.iter().all(|&(a, b)| {
            let fresh = !seen[a] && !seen[b] && a != b;
            seen[a] = true;
            seen[b] = true;
            fresh && adj[a].contains(&b)
        })
    }

    // plain enumeration, exponential
    fn brute(adj: &[Vec<usize>], free: &mut Vec<bool>) -> usize {
        let Some(v) = free.iter().position(|&f| f) else {
            return 0;
        };
        free[v] = false;
        let mut best = brute(adj, free);
        for &u in &adj[v] {
            if free[u] {
                free[u] = false;
                best = best.max(1 + brute(adj, free));
                free[u] = true;
            }
        }
        free[v] = true;
        best
    }

    #[test]
    fn small_fixed_graphs() {
        // path A-B-C
        let path = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(matching_bitmask(&path).len(), 1);
        assert_eq!(matching_blossom(&path).len(), 1);
        // K4
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(matching_bitmask(&k4).len(), 2);
        assert_eq!(matching_blossom(&k4).len(), 2);
        // triangle
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(matching_blossom(&tri).len(), 1);
        // empty
        assert!(matching_bitmask(&graph(5, &[])).is_empty());
        assert!(matching_blossom(&[]).is_empty());
    }

    #[test]
    fn blossom_needs_contraction() {
        // 5-cycle with a pendant on every vertex: perfect matching of size 5
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        edges.extend((0..5).map(|i| (i, i + 5)));
        let adj = graph(10, &edges);
        let m = matching_blossom(&adj);
        assert_eq!(m.len(), 5);
        assert!(is_valid_matching(&adj, &m));
        // two triangles joined by a path, where greedy gets stuck
        let adj = graph(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 5),
            ],
        );
        assert_eq!(matching_blossom(&adj).len(), 4);
    }

    #[test]
    fn both_algorithms_agree_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for case in 0..600 {
            let n = 1 + case % 12;
            let p = [0.1, 0.3, 0.6, 0.9][case % 4];
            let adj = random_graph(&mut rng, n, p);
            let expected = brute(&adj, &mut vec![true; n]);
            let a = matching_bitmask(&adj);
            let b = matching_blossom(&adj);
            assert!(is_valid_matching(&adj, &a));
            assert!(is_valid_matching(&adj, &b));
            assert_eq!(a.len(), expected, "bitmask, case {case}");
            assert_eq!(b.len(), expected, "blossom, case {case}");
        }
    }

    #[test]
    fn blossom_agrees_with_bitmask_up_to_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for case in 0..200 {
            let n = 13 + case % 8;
            let p = [0.05, 0.15, 0.3][case % 3];
            let adj = random_graph(&mut rng, n, p);
            assert_eq!(
                matching_blossom(&adj).len(),
                matching_bitmask(&adj).len(),
                "case {case}"
            );
        }
    }

    #[test]
    fn large_graphs_dispatch_to_blossom() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let adj = random_graph(&mut rng, 60, 0.05);
        let m = maximum_matching(&adj);
        assert!(is_valid_matching(&adj, &m));
        // complete bipartite K_{3,57}
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..60 {
                edges.push((a, b));
            }
        }
        assert_eq!(maximum_matching_size(&graph(60, &edges)), 3);
    }
}
