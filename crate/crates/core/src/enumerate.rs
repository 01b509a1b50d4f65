//! Exhaustive enumeration of small graphs for property suites.

use rustc_hash::FxHashSet;

use crate::graph::{Graph, Vertex};

/// Canonical string of a rooted tree (AHU encoding).
fn rooted_code(adj: &[Vec<Vertex>], v: Vertex, parent: Option<Vertex>) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(adj, w, Some(v)))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_centers(adj: &[Vec<Vertex>]) -> Vec<Vertex> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            deg[v] = 0;
        }
        for &v in &layer {
            for &w in &adj[v] {
                if deg[w] > 0 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

fn tree_code(adj: &[Vec<Vertex>]) -> String {
    tree_centers(adj)
        .into_iter()
        .map(|c| rooted_code(adj, c, None))
        .min()
        .unwrap_or_default()
}

/// All pairwise non-isomorphic trees on exactly `n` vertices (n >= 1).
pub fn trees(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut level: Vec<Vec<Vec<Vertex>>> = vec![vec![vec![]]];
    for size in 2..=n {
        let mut seen = FxHashSet::default();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..size - 1 {
                let mut adj = t.clone();
                adj.push(vec![v]);
                adj[v].push(size - 1);
                if seen.insert(tree_code(&adj)) {
                    next.push(adj);
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|adj| {
            let edges: Vec<_> = adj
                .iter()
                .enumerate()
                .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
                .collect();
            Graph::build(false, n, &edges, &[]).expect("tree is simple")
        })
        .collect()
}

/// Adjacency as bitmasks; vertex count at most 16.
type Masks = Vec<u16>;

fn canonical(adj: &Masks) -> u128 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    // position slots are filled in order of (degree, sorted neighbour degrees)
    let inv: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let mut d: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| deg[w]).collect();
            d.sort_unstable();
            d
        })
        .collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by(|&a, &b| (deg[a], &inv[a]).cmp(&(deg[b], &inv[b])));
    let class: Vec<(u32, &Vec<u32>)> = order.iter().map(|&v| (deg[v], &inv[v])).collect();

    let mut best = u128::MAX;
    let mut perm = vec![usize::MAX; n]; // slot -> vertex
    let mut taken = 0u16;
    fn rec(
        slot: usize,
        n: usize,
        adj: &Masks,
        order: &[Vertex],
        class: &[(u32, &Vec<u32>)],
        deg: &[u32],
        inv: &[Vec<u32>],
        perm: &mut Vec<usize>,
        taken: &mut u16,
        best: &mut u128,
    ) {
        if slot == n {
            let mut code = 0u128;
            let mut bit = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if adj[perm[i]] >> perm[j] & 1 == 1 {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        for &v in order {
            if *taken >> v & 1 == 0 && (deg[v], &inv[v]) == (class[slot].0, class[slot].1) {
                *taken |= 1 << v;
                perm[slot] = v;
                rec(slot + 1, n, adj, order, class, deg, inv, perm, taken, best);
                *taken &= !(1 << v);
            }
        }
    }
    rec(0, n, adj, &order, &class, &deg, &inv, &mut perm, &mut taken, &mut best);
    best
}

/// All pairwise non-isomorphic simple undirected graphs on exactly `n` vertices.
pub fn graphs(n: usize) -> Vec<Graph> {
    assert!((1..=10).contains(&n), "enumeration supports 1..=10 vertices");
    let mut level: Vec<Masks> = vec![vec![0]];
    for size in 2..=n {
        let mut seen = FxHashSet::default();
        let mut next = Vec::new();
        for g in &level {
            for subset in 0u16..(1 << (size - 1)) {
                let mut adj = g.clone();
                adj.push(subset);
                for v in 0..size - 1 {
                    if subset >> v & 1 == 1 {
                        adj[v] |= 1 << (size - 1);
                    }
                }
                if seen.insert(canonical(&adj)) {
                    next.push(adj);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|m| masks_to_graph(&m)).collect()
}

fn masks_to_graph(adj: &Masks) -> Graph {
    let n = adj.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::build(false, n, &edges, &[]).expect("simple")
}

/// Connected non-isomorphic graphs on exactly `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Every labeled directed graph on `n` vertices (all `2^(n(n-1))` arc sets).
pub fn labeled_digraphs(n: usize) -> Vec<Graph> {
    let arcs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    assert!(arcs.len() <= 20, "too many labeled digraphs");
    (0u32..(1 << arcs.len()))
        .map(|mask| {
            let e: Vec<_> = arcs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            Graph::build(true, n, &e, &[]).expect("simple")
        })
        .collect()
}

/// Every labeled undirected graph on `n` vertices.
pub fn labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() <= 20, "too many labeled graphs");
    (0u32..(1 << pairs.len()))
        .map(|mask| {
            let e: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            Graph::build(false, n, &e, &[]).expect("simple")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_oeis() {
        // A000055
        let expected = [1, 1, 1, 2, 3, 6, 11, 23, 47];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(trees(i + 1).len(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn graph_counts_match_oeis() {
        // A000088 and A001349
        let all = [1, 2, 4, 11, 34, 156];
        let connected = [1, 1, 2, 6, 21, 112];
        for n in 1..=6 {
            assert_eq!(graphs(n).len(), all[n - 1], "n = {n}");
            assert_eq!(connected_graphs(n).len(), connected[n - 1], "n = {n}");
        }
    }

    #[test]
    fn labeled_counts() {
        assert_eq!(labeled_digraphs(3).len(), 64);
        assert_eq!(labeled_graphs(3).len(), 8);
    }
}
