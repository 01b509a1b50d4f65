//! Generators for the extremal constructions: two paths, super-vertex,
//! visages (cycle, long path, k-connected) and double-trees.
//!
//! Paths are measured in edges unless a parameter says "vertices".

use serde::Serialize;

use crate::error::ConstructionError;
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameter(msg.into())
}

pub fn path(n: usize) -> Graph {
    let mut b = GraphBuilder::new(false);
    let vs = b.add_vertices(n);
    for w in vs.windows(2) {
        b.add_edge(w[0], w[1]);
    }
    b.finish().expect("path is simple")
}

pub fn cycle(n: usize) -> Result<Graph, ConstructionError> {
    if n < 3 {
        return Err(invalid(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let mut b = GraphBuilder::new(false);
    let vs = b.add_vertices(n);
    for i in 0..n {
        b.add_edge(vs[i], vs[(i + 1) % n]);
    }
    Ok(b.finish()?)
}

pub fn complete(n: usize) -> Graph {
    let mut b = GraphBuilder::new(false);
    b.add_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u, v);
        }
    }
    b.finish().expect("complete graph is simple")
}

pub fn star(leaves: usize) -> Graph {
    let mut b = GraphBuilder::new(false);
    let c = b.add_vertex();
    for _ in 0..leaves {
        let l = b.add_vertex();
        b.add_edge(c, l);
    }
    b.label("center", c);
    b.finish().expect("star is simple")
}

/// Two disjoint paths with `m` vertices each.
pub fn two_paths(m: usize) -> Result<Graph, ConstructionError> {
    if m < 2 {
        return Err(invalid(format!("two_paths needs m >= 2, got {m}")));
    }
    let mut b = GraphBuilder::new(false);
    for name in ["a", "b"] {
        let vs = b.add_vertices(m);
        for w in vs.windows(2) {
            b.add_edge(w[0], w[1]);
        }
        b.label(format!("path_{name}_first"), vs[0]);
        b.label(format!("path_{name}_last"), vs[m - 1]);
    }
    Ok(b.finish()?)
}

/// Adds one vertex adjacent to `attach` (all existing vertices when `None`), labeled `super`.
pub fn add_super_vertex(g: &Graph, attach: Option<&VertexSet>) -> Result<Graph, ConstructionError> {
    if g.is_directed() {
        return Err(invalid("super-vertex needs an undirected graph"));
    }
    let mut b = GraphBuilder::new(false);
    b.embed(g, Some(""));
    let s = b.add_vertex();
    for v in 0..g.vertex_count() {
        if attach.map_or(true, |a| a.contains(v)) {
            b.add_edge(s, v);
        }
    }
    b.label("super", s);
    Ok(b.finish()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VisageVariant {
    Ordinary,
    PlanarBob,
    PlanarAlice,
    KConnected,
}

/// Landmarks of a visage-type construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VisageParams {
    pub variant: VisageVariant,
    /// Cycle scale `l` (cycle of 4l vertices), path length, or double-tree height.
    pub scale: usize,
    pub spacing: usize,
    pub k: usize,
    pub overhead: Vec<Vertex>,
    pub box_vertices: Vec<Vertex>,
    pub cross_vertices: Vec<Vertex>,
    /// Arena vertices joined to a box vertex.
    pub box_attachments: Vec<Vertex>,
    pub cross_attachments: Vec<Vertex>,
    /// Cycle or long-path vertices in order; double-tree roots for the k-connected variant.
    pub arena: Vec<Vertex>,
}

/// Overhead graph, two bottleneck vertices adjacent to all of it, and a cycle of
/// `4l` vertices whose every fourth vertex is joined alternately to the box and
/// the cross bottleneck.
pub fn visage(l: usize, overhead: &Graph) -> Result<(Graph, VisageParams), ConstructionError> {
    if l < 2 || l % 2 != 0 {
        return Err(invalid(format!("l must be even and at least 2, got {l}")));
    }
    if overhead.vertex_count() == 0 {
        return Err(invalid("overhead graph is empty"));
    }
    let mut b = GraphBuilder::new(false);
    let off = b.embed(overhead, Some("overhead_"));
    let over: Vec<_> = (off..off + overhead.vertex_count()).collect();
    let bx = b.add_vertex();
    let cr = b.add_vertex();
    for &o in &over {
        b.add_edge(bx, o);
        b.add_edge(cr, o);
    }
    let n = 4 * l;
    let cyc = b.add_vertices(n);
    for i in 0..n {
        b.add_edge(cyc[i], cyc[(i + 1) % n]);
    }
    let mut box_att = Vec::new();
    let mut cross_att = Vec::new();
    for i in (0..n).step_by(4) {
        if i % 8 == 0 {
            b.add_edge(bx, cyc[i]);
            box_att.push(cyc[i]);
        } else {
            b.add_edge(cr, cyc[i]);
            cross_att.push(cyc[i]);
        }
    }
    b.label("box", bx);
    b.label("cross", cr);
    b.label("cycle_0", cyc[0]);
    let params = VisageParams {
        variant: VisageVariant::Ordinary,
        scale: l,
        spacing: 4,
        k: 1,
        overhead: over,
        box_vertices: vec![bx],
        cross_vertices: vec![cr],
        box_attachments: box_att,
        cross_attachments: cross_att,
        arena: cyc,
    };
    Ok((b.finish()?, params))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlanarSide {
    Bob,
    Alice,
}

/// Visage with the cycle replaced by a path of `path_len` vertices; attachments sit on
/// path vertices `0, spacing, 2*spacing, ...`, alternating box and cross.
///
/// The Alice variant labels her designated start: the overhead's `alice_start`
/// label when present, otherwise the first overhead vertex.
pub fn planar_visage(
    side: PlanarSide,
    path_len: usize,
    spacing: usize,
    overhead: &Graph,
) -> Result<(Graph, VisageParams), ConstructionError> {
    if spacing != 4 && spacing != 7 {
        return Err(invalid(format!("spacing must be 4 or 7, got {spacing}")));
    }
    if path_len < 2 * spacing {
        return Err(invalid(format!(
            "path of {path_len} vertices is too short for two attachments at spacing {spacing}"
        )));
    }
    if overhead.vertex_count() == 0 {
        return Err(invalid("overhead graph is empty"));
    }
    let mut b = GraphBuilder::new(false);
    let off = b.embed(overhead, Some("overhead_"));
    let over: Vec<_> = (off..off + overhead.vertex_count()).collect();
    let bx = b.add_vertex();
    let cr = b.add_vertex();
    for &o in &over {
        b.add_edge(bx, o);
        b.add_edge(cr, o);
    }
    let long = b.add_vertices(path_len);
    for w in long.windows(2) {
        b.add_edge(w[0], w[1]);
    }
    let mut box_att = Vec::new();
    let mut cross_att = Vec::new();
    for (slot, i) in (0..path_len).step_by(spacing).enumerate() {
        if slot % 2 == 0 {
            b.add_edge(bx, long[i]);
            box_att.push(long[i]);
        } else {
            b.add_edge(cr, long[i]);
            cross_att.push(long[i]);
        }
    }
    b.label("box", bx);
    b.label("cross", cr);
    b.label("path_first", long[0]);
    b.label("path_last", long[path_len - 1]);
    if side == PlanarSide::Alice {
        let start = overhead.label("alice_start").unwrap_or(0) + off;
        b.label("alice_start", start);
    }
    let params = VisageParams {
        variant: match side {
            PlanarSide::Bob => VisageVariant::PlanarBob,
            PlanarSide::Alice => VisageVariant::PlanarAlice,
        },
        scale: path_len,
        spacing,
        k: 1,
        overhead: over,
        box_vertices: vec![bx],
        cross_vertices: vec![cr],
        box_attachments: box_att,
        cross_attachments: cross_att,
        arena: long,
    };
    Ok((b.finish()?, params))
}

/// Landmarks of a double-tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleTreeParams {
    pub d: usize,
    pub h: usize,
    /// Number of leaf parents per half, `d^(h-1)`.
    pub leaf_parents: usize,
    pub upper_root: Vertex,
    pub lower_root: Vertex,
    /// `upper_leaves[j][i]` is the leaf u_{i+1}^{j+1}.
    pub upper_leaves: Vec<Vec<Vertex>>,
    pub lower_leaves: Vec<Vec<Vertex>>,
    /// Vertices per level, root level first, for each half.
    pub upper_levels: Vec<Vec<Vertex>>,
    pub lower_levels: Vec<Vec<Vertex>>,
}

impl DoubleTreeParams {
    pub fn all_leaves(&self) -> Vec<Vertex> {
        self.upper_leaves
            .iter()
            .chain(&self.lower_leaves)
            .flatten()
            .copied()
            .collect()
    }
}

fn complete_tree(b: &mut GraphBuilder, d: usize, h: usize) -> Vec<Vec<Vertex>> {
    let mut levels = vec![vec![b.add_vertex()]];
    for t in 1..=h {
        let mut level = Vec::with_capacity(levels[t - 1].len() * d);
        for p in 0..levels[t - 1].len() {
            for _ in 0..d {
                let c = b.add_vertex();
                b.add_edge(levels[t - 1][p], c);
                level.push(c);
            }
        }
        levels.push(level);
    }
    levels
}

/// Adds a double-tree to `b` without labels.
fn double_tree_into(b: &mut GraphBuilder, d: usize, h: usize) -> DoubleTreeParams {
    let upper = complete_tree(b, d, h);
    let lower = complete_tree(b, d, h);
    let l = d.pow(h as u32 - 1);
    let group = |leaves: &[Vertex]| -> Vec<Vec<Vertex>> {
        leaves.chunks(d).map(<[Vertex]>::to_vec).collect()
    };
    let ul = group(&upper[h]);
    let vl = group(&lower[h]);
    // E1: consecutive leaves within each half
    for leaves in [&upper[h], &lower[h]] {
        for w in leaves.windows(2) {
            b.add_edge(w[0], w[1]);
        }
    }
    // E2: u_n^j - v_m^j for n <= m; u_n^{j+1} - v_m^j for m <= n; u_n^1 - v_m^l for m <= n
    let mut e2 = Vec::new();
    for j in 0..l {
        for n in 0..d {
            for m in n..d {
                e2.push((ul[j][n], vl[j][m]));
            }
        }
    }
    for j in 0..l.saturating_sub(1) {
        for n in 0..d {
            for m in 0..=n {
                e2.push((ul[j + 1][n], vl[j][m]));
            }
        }
    }
    for n in 0..d {
        for m in 0..=n {
            e2.push((ul[0][n], vl[l - 1][m]));
        }
    }
    e2.sort_unstable();
    e2.dedup();
    for (u, v) in e2 {
        b.add_edge(u, v);
    }
    DoubleTreeParams {
        d,
        h,
        leaf_parents: l,
        upper_root: upper[0][0],
        lower_root: lower[0][0],
        upper_leaves: ul,
        lower_leaves: vl,
        upper_levels: upper,
        lower_levels: lower,
    }
}

pub fn double_tree(d: usize, h: usize) -> Result<(Graph, DoubleTreeParams), ConstructionError> {
    if d < 2 || h < 1 {
        return Err(invalid(format!("double-tree needs d >= 2 and h >= 1, got d={d} h={h}")));
    }
    let mut b = GraphBuilder::new(false);
    let p = double_tree_into(&mut b, d, h);
    b.label("upper_root", p.upper_root);
    b.label("lower_root", p.lower_root);
    for (j, group) in p.upper_leaves.iter().enumerate() {
        for (i, &v) in group.iter().enumerate() {
            b.label(format!("u_{}^{}", i + 1, j + 1), v);
        }
    }
    for (j, group) in p.lower_leaves.iter().enumerate() {
        for (i, &v) in group.iter().enumerate() {
            b.label(format!("v_{}^{}", i + 1, j + 1), v);
        }
    }
    Ok((b.finish()?, p))
}

/// Splits the complete subtree rooted at `(level, idx)` into paths whose two ends are
/// consecutive leaves, peeling off the root path between the first two child subtrees.
fn peel_paths(d: usize, h: usize, level: usize, idx: usize, out: &mut Vec<Vec<(usize, usize)>>) {
    if level == h {
        out.push(vec![(level, idx)]);
        return;
    }
    let first = idx * d;
    let second = idx * d + 1;
    let mut path = Vec::new();
    // up from the rightmost leaf of the first subtree
    for s in (level + 1..=h).rev() {
        let span = d.pow((s - level - 1) as u32);
        path.push((s, (first + 1) * span - 1));
    }
    path.push((level, idx));
    for s in level + 1..=h {
        let span = d.pow((s - level - 1) as u32);
        path.push((s, second * span));
    }
    out.push(path);
    // leftover pieces hanging off both spines
    for s in level + 1..h {
        let span = d.pow((s - level - 1) as u32);
        let node = (first + 1) * span - 1;
        for c in 0..d - 1 {
            peel_paths(d, h, s + 1, node * d + c, out);
        }
        let node = second * span;
        for c in 1..d {
            peel_paths(d, h, s + 1, node * d + c, out);
        }
    }
    for c in 2..d {
        peel_paths(d, h, level + 1, idx * d + c, out);
    }
}

/// Hamilton path of one half: root down to its leftmost leaf, then every remaining
/// vertex, finishing on the rightmost leaf. Entries are `(level, index)`.
fn half_tour(d: usize, h: usize) -> Vec<(usize, usize)> {
    let mut tour: Vec<_> = (0..=h).map(|s| (s, 0)).collect();
    let mut pieces = Vec::new();
    // children of the spine node (s, 0) other than (s + 1, 0)
    for s in 0..h {
        for c in 1..d {
            peel_paths(d, h, s + 1, c, &mut pieces);
        }
    }
    pieces.sort_by_key(|p| {
        let (lv, ix) = p[0];
        ix * d.pow((h - lv) as u32)
    });
    for p in pieces {
        tour.extend(p);
    }
    tour
}

/// Root-to-root Hamilton path of `double_tree(d, h)`: down the upper half to u_1^1,
/// across the upper leaves via the peeled paths to u_d^l, over the edge (u_d^l, v_d^l),
/// and the mirror image backwards through the lower half.
pub fn double_tree_hamilton(d: usize, h: usize) -> Result<Vec<Vertex>, ConstructionError> {
    let (_, p) = double_tree(d, h)?;
    let half = half_tour(d, h);
    let mut seq: Vec<Vertex> = half.iter().map(|&(s, i)| p.upper_levels[s][i]).collect();
    seq.extend(half.iter().rev().map(|&(s, i)| p.lower_levels[s][i]));
    Ok(seq)
}

/// Greedily picks `m` vertices of `leaves` (ascending order) whose pairwise distances
/// in `g` are all at least `min_dist`. `None` when the greedy pass falls short.
pub fn select_afar_leaves(
    g: &Graph,
    leaves: &VertexSet,
    m: usize,
    min_dist: usize,
) -> Option<Vec<Vertex>> {
    let mut chosen: Vec<Vertex> = Vec::new();
    let mut dists: Vec<Vec<Option<usize>>> = Vec::new();
    for v in leaves.iter() {
        if chosen.len() == m {
            break;
        }
        let far = dists
            .iter()
            .all(|d| d[v].map_or(true, |x| x >= min_dist));
        if far {
            chosen.push(v);
            dists.push(g.bfs_distances(v).expect("leaf in range"));
        }
    }
    (chosen.len() == m).then_some(chosen)
}

/// Smallest `h <= max_h` whose degree-`d` double-tree yields `m` leaves at pairwise
/// distance at least `min_dist`, with the chosen leaves.
pub fn minimal_afar_height(
    d: usize,
    m: usize,
    min_dist: usize,
    max_h: usize,
) -> Option<(usize, Vec<Vertex>)> {
    (1..=max_h).find_map(|h| {
        let (g, p) = double_tree(d, h).ok()?;
        let leaves = VertexSet::from_iter_with_len(g.vertex_count(), p.all_leaves());
        select_afar_leaves(&g, &leaves, m, min_dist).map(|sel| (h, sel))
    })
}

/// Number of double-trees in the k-connected necklace.
pub const NECKLACE_TREES: usize = 4;

/// k overhead paths of `overhead_path_len` vertices, k box and k cross bottleneck
/// vertices (each adjacent to every overhead vertex), and a necklace of four
/// degree-k double-trees of height `h` chained root to root. Trees alternate between
/// box and cross attachments, each on k leaves at pairwise distance at least 2k.
pub fn k_connected_visage(
    k: usize,
    h: usize,
    overhead_path_len: usize,
) -> Result<(Graph, VisageParams), ConstructionError> {
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    if overhead_path_len < 1 {
        return Err(invalid("overhead paths need at least one vertex"));
    }
    // afar leaves are chosen once on a standalone copy; every copy has the same layout
    let (proto, proto_params) = double_tree(k, h)?;
    let leaves = VertexSet::from_iter_with_len(proto.vertex_count(), proto_params.all_leaves());
    let afar = select_afar_leaves(&proto, &leaves, k, 2 * k).ok_or(
        ConstructionError::HeightTooSmall {
            h,
            needed: k,
            min_dist: 2 * k,
        },
    )?;

    let mut b = GraphBuilder::new(false);
    let mut over = Vec::new();
    for _ in 0..k {
        let p = b.add_vertices(overhead_path_len);
        for w in p.windows(2) {
            b.add_edge(w[0], w[1]);
        }
        over.extend(p);
    }
    let boxes = b.add_vertices(k);
    let crosses = b.add_vertices(k);
    for &o in &over {
        for &x in boxes.iter().chain(&crosses) {
            b.add_edge(o, x);
        }
    }
    let mut roots = Vec::new();
    let mut box_att = Vec::new();
    let mut cross_att = Vec::new();
    for t in 0..NECKLACE_TREES {
        let off = b.vertex_count();
        let p = double_tree_into(&mut b, k, h);
        debug_assert_eq!(p.upper_root, off);
        roots.push((p.upper_root, p.lower_root));
        let group = if t % 2 == 0 { &boxes } else { &crosses };
        for (i, &leaf) in afar.iter().enumerate() {
            b.add_edge(group[i], leaf + off);
            if t % 2 == 0 {
                box_att.push(leaf + off);
            } else {
                cross_att.push(leaf + off);
            }
        }
    }
    for t in 0..NECKLACE_TREES {
        let next = roots[(t + 1) % NECKLACE_TREES].0;
        b.add_edge(roots[t].1, next);
    }
    for (i, &x) in boxes.iter().enumerate() {
        b.label(format!("box_{i}"), x);
    }
    for (i, &x) in crosses.iter().enumerate() {
        b.label(format!("cross_{i}"), x);
    }
    for (t, &(u, l)) in roots.iter().enumerate() {
        b.label(format!("tree{t}_upper_root"), u);
        b.label(format!("tree{t}_lower_root"), l);
    }
    let params = VisageParams {
        variant: VisageVariant::KConnected,
        scale: h,
        spacing: 2 * k,
        k,
        overhead: over,
        box_vertices: boxes,
        cross_vertices: crosses,
        box_attachments: box_att,
        cross_attachments: cross_att,
        arena: roots.iter().flat_map(|&(u, l)| [u, l]).collect(),
    };
    Ok((b.finish()?, params))
}
