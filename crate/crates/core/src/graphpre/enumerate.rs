//! Canonical enumeration of small reflexive graphs and preorders, one per
//! isomorphism class, by brute-force permutation minimisation.

use super::{Preorder, RefGraph};

/// Limits for graph enumeration. `max_edges` counts every edge other than
/// the distinguished loops, so parallel edges and extra loops count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub parallel: bool,
    pub extra_loops: bool,
}

impl GraphBounds {
    pub fn new(max_vertices: usize, max_edges: usize) -> Self {
        GraphBounds {
            max_vertices,
            max_edges,
            parallel: true,
            extra_loops: true,
        }
    }

    /// At most one edge between two distinct vertices and no extra loops.
    pub fn simple(max_vertices: usize) -> Self {
        GraphBounds {
            max_vertices,
            max_edges: max_vertices * max_vertices.saturating_sub(1),
            parallel: false,
            extra_loops: false,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Row-major code of `m` relabelled by `sigma^-1`.
fn relabelled(m: &[usize], n: usize, inv: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m[inv[i] * n + inv[j]]);
        }
    }
    out
}

fn least_code(m: &[usize], n: usize, perms: &[Vec<usize>]) -> Vec<usize> {
    perms.iter().map(|p| relabelled(m, n, p)).min().unwrap_or_default()
}

fn is_canonical(m: &[usize], n: usize, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| relabelled(m, n, p).as_slice() >= m)
}

fn multiplicities(g: &RefGraph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut m = vec![0; n * n];
    for (a, b) in g.extra_edges() {
        m[a * n + b] += 1;
    }
    m
}

/// Sort key of the canonical order: vertex count, extra-edge count, then
/// the least multiplicity code over relabellings. Isomorphic graphs share
/// the key.
pub fn graph_key(g: &RefGraph) -> (usize, usize, Vec<usize>) {
    let n = g.num_vertices();
    let m = multiplicities(g);
    (n, m.iter().sum(), least_code(&m, n, &permutations(n)))
}

fn graph_from_code(n: usize, m: &[usize]) -> RefGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            edges.extend(std::iter::repeat((a, b)).take(m[a * n + b]));
        }
    }
    RefGraph::new(n, &edges).expect("edges are in range")
}

/// All canonical multiplicity codes on `n` vertices with exactly `k` extra
/// edges, sorted.
fn layer(n: usize, k: usize, b: &GraphBounds, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let caps: Vec<usize> = (0..n * n)
        .map(|i| match (i / n == i % n, b.extra_loops, b.parallel) {
            (true, false, _) => 0,
            (_, _, true) => k,
            _ => 1,
        })
        .collect();
    let mut out = Vec::new();
    let mut m = vec![0; n * n];
    fn rec(i: usize, left: usize, caps: &[usize], m: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == m.len() {
            if left == 0 {
                out.push(m.clone());
            }
            return;
        }
        for c in 0..=caps[i].min(left) {
            m[i] = c;
            rec(i + 1, left - c, caps, m, out);
        }
        m[i] = 0;
    }
    rec(0, k, &caps, &mut m, &mut out);
    out.retain(|m| is_canonical(m, n, perms));
    out.sort();
    out
}

/// The canonical graphs with exactly `n` vertices and `k` extra edges.
pub(crate) fn graphs_with(n: usize, k: usize, b: &GraphBounds) -> Vec<RefGraph> {
    if n > b.max_vertices || k > b.max_edges {
        return Vec::new();
    }
    layer(n, k, b, &permutations(n))
        .into_iter()
        .map(|m| graph_from_code(n, &m))
        .collect()
}

/// Every reflexive graph with `1..=max_vertices` vertices within the edge
/// bound, one per isomorphism class, in strictly increasing [`graph_key`]
/// order. Layers of equal size are generated on demand.
pub fn enumerate_graphs(b: GraphBounds) -> impl Iterator<Item = RefGraph> {
    (1..=b.max_vertices).flat_map(move |n| {
        let perms = permutations(n);
        (0..=b.max_edges).flat_map(move |k| {
            let codes = layer(n, k, &b, &perms);
            codes.into_iter().map(move |m| graph_from_code(n, &m))
        })
    })
}

fn rel_code(p: &Preorder) -> Vec<usize> {
    p.relation().iter().flatten().map(|&b| b as usize).collect()
}

/// Sort key of the canonical order on preorders: size, then the least
/// relation code over relabellings.
pub fn preorder_key(p: &Preorder) -> (usize, Vec<usize>) {
    let n = p.size();
    (n, least_code(&rel_code(p), n, &permutations(n)))
}

/// Every preorder with `1..=max_size` elements, one per isomorphism class,
/// in strictly increasing [`preorder_key`] order.
pub fn enumerate_preorders(max_size: usize) -> Vec<Preorder> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let perms = permutations(n);
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b)
            .collect();
        let mut codes = Vec::new();
        for bits in 0u64..(1 << off.len()) {
            let mut rel = vec![vec![false; n]; n];
            for (i, row) in rel.iter_mut().enumerate() {
                row[i] = true;
            }
            for (k, &(a, b)) in off.iter().enumerate() {
                rel[a][b] = bits >> k & 1 == 1;
            }
            if let Ok(p) = Preorder::new(rel) {
                let code = rel_code(&p);
                if is_canonical(&code, n, &perms) {
                    codes.push((code, p));
                }
            }
        }
        codes.sort();
        out.extend(codes.into_iter().map(|(_, p)| p));
    }
    out
}
