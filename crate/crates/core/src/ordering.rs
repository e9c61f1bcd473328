//! Bandwidth-reducing symmetric permutations.
//!
//! Wrap-around stencils put entries in the corners of the matrix, so in
//! natural order the band of `L(z)` on an `N^d` torus is about `N^d` wide.
//! Reverse Cuthill-McKee brings it down to a few `N^(d-1)`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Symmetrized adjacency lists of an `n x n` pattern, self loops dropped,
/// each list sorted and deduplicated.
pub fn adjacency(n: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (r, c) in entries {
        if r != c {
            adj[r].push(c);
            adj[c].push(r);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Breadth-first level structure from `root`; returns the visit order and
/// the level of every reached node.
fn levels(adj: &[Vec<usize>], root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut level = vec![usize::MAX; adj.len()];
    let mut order = vec![root];
    level[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                order.push(w);
            }
        }
    }
    (order, level)
}

/// A node of (nearly) maximal eccentricity in `root`'s component, found by
/// restarting from a minimum-degree node of the last level until the
/// depth stops growing.
fn pseudo_peripheral(adj: &[Vec<usize>], root: usize) -> usize {
    let mut best = root;
    let (mut order, mut level) = levels(adj, best);
    let mut depth = level[*order.last().unwrap()];
    loop {
        let last = order
            .iter()
            .filter(|&&v| level[v] == depth)
            .min_by_key(|&&v| (adj[v].len(), v))
            .copied()
            .unwrap();
        let (o, l) = levels(adj, last);
        let d = l[*o.last().unwrap()];
        if d <= depth {
            return best;
        }
        best = last;
        order = o;
        level = l;
        depth = d;
    }
}

/// Reverse Cuthill-McKee order as `perm[new] = old`. Components are
/// handled one after another, each from a pseudo-peripheral node.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut placed = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for seed in 0..n {
        if placed[seed] {
            continue;
        }
        let start = pseudo_peripheral(adj, seed);
        placed[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            perm.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_unstable_by_key(|&w| (adj[w].len(), w));
            for w in next {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    perm.reverse();
    perm
}

/// `inverse[old] = new` for `perm[new] = old`.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Lower and upper bandwidth of the pattern after relabelling by `inverse`
/// (`None` keeps natural order).
pub fn bandwidths_under(
    entries: impl IntoIterator<Item = (usize, usize)>,
    inverse: Option<&[usize]>,
) -> (usize, usize) {
    let map = |i: usize| inverse.map_or(i, |inv| inv[i]);
    entries.into_iter().fold((0, 0), |(kl, ku), (r, c)| {
        let (r, c) = (map(r), map(c));
        if r > c {
            (kl.max(r - c), ku)
        } else {
            (kl, ku.max(c - r))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)]).collect()
    }

    fn torus(n: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let v = j * n + i;
                e.push((v, j * n + (i + 1) % n));
                e.push((v, ((j + 1) % n) * n + i));
            }
        }
        e
    }

    fn is_permutation(p: &[usize]) -> bool {
        let mut seen = vec![false; p.len()];
        p.iter().all(|&v| v < p.len() && !core::mem::replace(&mut seen[v], true))
    }

    #[test]
    fn cycle_becomes_narrow() {
        let e = cycle(50);
        assert_eq!(bandwidths_under(e.iter().copied(), None), (49, 49));
        let perm = reverse_cuthill_mckee(&adjacency(50, e.iter().copied()));
        assert!(is_permutation(&perm));
        let (kl, ku) = bandwidths_under(e.iter().copied(), Some(&invert(&perm)));
        assert!(kl <= 2 && ku <= 2, "{kl} {ku}");
    }

    #[test]
    fn torus_bandwidth_scales_with_side() {
        let n = 20;
        let e = torus(n);
        let (kl0, _) = bandwidths_under(e.iter().copied(), None);
        assert_eq!(kl0, n * (n - 1));
        let perm = reverse_cuthill_mckee(&adjacency(n * n, e.iter().copied()));
        assert!(is_permutation(&perm));
        let (kl, ku) = bandwidths_under(e.iter().copied(), Some(&invert(&perm)));
        assert!(kl <= 4 * n && ku <= 4 * n, "{kl} {ku}");
    }

    #[test]
    fn disconnected_and_isolated_nodes_are_all_placed() {
        let e = [(0, 1), (1, 0), (3, 4), (4, 3)];
        let perm = reverse_cuthill_mckee(&adjacency(6, e));
        assert!(is_permutation(&perm));
        assert_eq!(perm.len(), 6);
    }
}
