//! Finite reflexive graphs as presheaves on the reflexive-graph base, the
//! reflection onto finite preorders, and searches that exhibit how the
//! reflection fails to be locally connected.

mod enumerate;
mod search;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj};
use crate::finset::{FinFn, FinSet};
use crate::fixtures::delta1;
use crate::presheaf::{nat_transformations, same_base, Presheaf, PresheafMap};
use crate::verdict::{GraphData, PreorderData};

use crate::checks::preorder_defects;
pub use enumerate::{enumerate_graphs, enumerate_preorders, graph_key, preorder_key, GraphBounds};
pub use search::{
    check_exponential_ideal_graphs, check_product_preservation, exponential_defects, find_pi_witness,
    find_sieve_witness, find_sle_failure, pi_defects, product_preserved, random_graph, sieve_misses,
    sle_square_failure, ProductBounds, SearchBounds,
};

static BASE: OnceLock<Arc<FinCategory>> = OnceLock::new();

/// The shared reflexive-graph base; every graph in this module lives on it.
pub fn graph_base() -> Arc<FinCategory> {
    BASE.get_or_init(|| Arc::new(delta1())).clone()
}

#[derive(Debug, Clone, Copy)]
struct Shape {
    v: Obj,
    e: Obj,
    d0: Mor,
    d1: Mor,
    s: Mor,
}

fn shape() -> Shape {
    static SHAPE: OnceLock<Shape> = OnceLock::new();
    *SHAPE.get_or_init(|| {
        let d = graph_base();
        Shape {
            v: d.object("V").unwrap(),
            e: d.object("E").unwrap(),
            d0: d.morphism("d0").unwrap(),
            d1: d.morphism("d1").unwrap(),
            s: d.morphism("s").unwrap(),
        }
    })
}

/// A finite reflexive graph: vertices at `V`, edges at `E`, endpoints given
/// by the actions of `d0` and `d1`, and the distinguished loop by `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefGraph(Presheaf);

impl RefGraph {
    /// The graph with `vertices` distinguished loops (edges `0..vertices`)
    /// followed by `edges`, which may include parallel edges and extra loops.
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::InvalidPresheaf("edge endpoint out of range".into()));
        }
        let sh = shape();
        let ne = vertices + edges.len();
        let src: Vec<usize> = (0..vertices).chain(edges.iter().map(|e| e.0)).collect();
        let tgt: Vec<usize> = (0..vertices).chain(edges.iter().map(|e| e.1)).collect();
        let mut given = HashMap::new();
        given.insert(sh.d0, FinFn::new(src, vertices)?);
        given.insert(sh.d1, FinFn::new(tgt, vertices)?);
        given.insert(sh.s, FinFn::new((0..vertices).collect(), ne)?);
        let mut sets = vec![FinSet::empty(); 2];
        sets[sh.v.0] = FinSet::numbered("v", vertices);
        sets[sh.e.0] = FinSet::numbered("e", ne);
        Ok(RefGraph(Presheaf::from_generators(graph_base(), sets, &given)?))
    }

    pub fn from_presheaf(p: Presheaf) -> Result<Self> {
        if !same_base(p.base(), &graph_base()) {
            return Err(Error::ShapeMismatch("not a presheaf on the reflexive-graph base".into()));
        }
        Ok(RefGraph(p))
    }

    pub fn from_data(d: &GraphData) -> Result<Self> {
        Self::new(d.vertices, &d.edges)
    }

    /// Vertex count and the non-distinguished edges in index order.
    pub fn to_data(&self) -> GraphData {
        GraphData {
            vertices: self.num_vertices(),
            edges: self.extra_edges(),
        }
    }

    pub fn presheaf(&self) -> &Presheaf {
        &self.0
    }

    pub fn num_vertices(&self) -> usize {
        self.0.size(shape().v)
    }

    pub fn num_edges(&self) -> usize {
        self.0.size(shape().e)
    }

    pub fn source(&self, e: usize) -> usize {
        self.0.act(shape().d0).apply(e)
    }

    pub fn target(&self, e: usize) -> usize {
        self.0.act(shape().d1).apply(e)
    }

    pub fn loop_at(&self, v: usize) -> usize {
        self.0.act(shape().s).apply(v)
    }

    /// Every edge as a (source, target) pair, loops included.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_edges()).map(|e| (self.source(e), self.target(e))).collect()
    }

    /// Edges other than the distinguished loops.
    pub fn extra_edges(&self) -> Vec<(usize, usize)> {
        let loops: Vec<usize> = (0..self.num_vertices()).map(|v| self.loop_at(v)).collect();
        (0..self.num_edges())
            .filter(|e| !loops.contains(e))
            .map(|e| (self.source(e), self.target(e)))
            .collect()
    }

    /// Ways in which this graph fails to be an embedded preorder; empty iff
    /// it is one, up to isomorphism.
    pub fn preorder_defects(&self) -> Vec<String> {
        preorder_defects(self.num_vertices(), &self.edges())
    }

    pub fn is_embedded_preorder(&self) -> bool {
        self.preorder_defects().is_empty()
    }
}

/// A finite preorder as a reflexive transitive relation matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Preorder {
    rel: Vec<Vec<bool>>,
}

impl Preorder {
    pub fn new(rel: Vec<Vec<bool>>) -> Result<Self> {
        let n = rel.len();
        if rel.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPreorder("relation is not square".into()));
        }
        if let Some(a) = (0..n).find(|&a| !rel[a][a]) {
            return Err(Error::InvalidPreorder(format!("{a} is not related to itself")));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if rel[a][b] && rel[b][c] && !rel[a][c] {
                        return Err(Error::InvalidPreorder(format!("{a} <= {b} <= {c} but not {a} <= {c}")));
                    }
                }
            }
        }
        Ok(Preorder { rel })
    }

    /// The least preorder on `0..n` containing `pairs`.
    pub fn closure_of(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            rel[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        Preorder { rel }
    }

    pub fn discrete(n: usize) -> Self {
        Self::closure_of(n, [])
    }

    /// `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> Self {
        Self::closure_of(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn from_data(d: &PreorderData) -> Result<Self> {
        if d.leq.iter().any(|&(a, b)| a >= d.size || b >= d.size) {
            return Err(Error::InvalidPreorder("pair out of range".into()));
        }
        let mut rel = vec![vec![false; d.size]; d.size];
        for &(a, b) in &d.leq {
            rel[a][b] = true;
        }
        Self::new(rel)
    }

    pub fn to_data(&self) -> PreorderData {
        PreorderData {
            size: self.size(),
            leq: self.pairs(),
        }
    }

    pub fn size(&self) -> usize {
        self.rel.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.rel[a][b]
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.rel
    }

    /// Related pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.rel[a][b])
            .collect()
    }

    /// Componentwise order on pairs, with `(a, b)` at index `a * m + b`.
    pub fn product(&self, other: &Preorder) -> Preorder {
        let m = other.size();
        let n = self.size() * m;
        let rel = (0..n)
            .map(|i| (0..n).map(|j| self.rel[i / m][j / m] && other.rel[i % m][j % m]).collect())
            .collect();
        Preorder { rel }
    }

    pub fn is_monotone(&self, f: &[usize], target: &Preorder) -> bool {
        f.len() == self.size() && self.pairs().iter().all(|&(a, b)| target.leq(f[a], f[b]))
    }
}

/// Edge index of `a <= b` in `embed(p)`: the loop `a` when `a = b`, else
/// its position among the off-diagonal pairs after the loops.
fn embedded_edge(p: &Preorder, a: usize, b: usize) -> Option<usize> {
    if !p.leq(a, b) {
        return None;
    }
    if a == b {
        return Some(a);
    }
    let n = p.size();
    let before = p.pairs().iter().filter(|&&(x, y)| x != y && (x, y) < (a, b)).count();
    Some(n + before)
}

/// The inclusion `F`: one edge per related pair, with the reflexivity
/// edges as the distinguished loops.
pub fn embed(p: &Preorder) -> RefGraph {
    let extra: Vec<(usize, usize)> = p.pairs().into_iter().filter(|&(a, b)| a != b).collect();
    RefGraph::new(p.size(), &extra).expect("pairs are in range")
}

/// The graph map `g -> embed(p)` with vertex part `f`; every edge of `g`
/// must land on a related pair.
pub fn graph_map_into(g: &RefGraph, p: &Preorder, f: &[usize]) -> Result<PresheafMap> {
    if f.len() != g.num_vertices() || f.iter().any(|&v| v >= p.size()) {
        return Err(Error::InvalidMap("vertex map has the wrong shape".into()));
    }
    let fp = embed(p);
    let edge_map = (0..g.num_edges())
        .map(|e| {
            embedded_edge(p, f[g.source(e)], f[g.target(e)])
                .ok_or_else(|| Error::InvalidMap(format!("edge {e} lands on an unrelated pair")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let sh = shape();
    let mut comps = vec![FinFn::identity(0); 2];
    comps[sh.v.0] = FinFn::new(f.to_vec(), p.size())?;
    comps[sh.e.0] = FinFn::new(edge_map, fp.num_edges())?;
    PresheafMap::new(g.presheaf().clone(), fp.presheaf().clone(), comps)
}

/// `F f : embed(p) -> embed(q)` for monotone `f`.
pub fn embed_map(p: &Preorder, q: &Preorder, f: &[usize]) -> Result<PresheafMap> {
    if !p.is_monotone(f, q) {
        return Err(Error::InvalidMap("map of preorders is not monotone".into()));
    }
    graph_map_into(&embed(p), q, f)
}

/// The vertex part of a graph map, which is `L` of that map.
pub fn vertex_part(h: &PresheafMap) -> Vec<usize> {
    h.component(shape().v).table().to_vec()
}

/// `L G` with its unit `G -> embed(L G)`.
#[derive(Debug, Clone)]
pub struct Reflected {
    pub preorder: Preorder,
    pub unit: PresheafMap,
}

/// The preorder reflection: vertices of `g` under the reflexive-transitive
/// closure of its edges, parallel edges collapsed.
pub fn preorder_reflection(g: &RefGraph) -> Reflected {
    let preorder = Preorder::closure_of(g.num_vertices(), g.edges());
    let id: Vec<usize> = (0..g.num_vertices()).collect();
    let unit = graph_map_into(g, &preorder, &id).expect("edges are related in the closure");
    Reflected { preorder, unit }
}

/// Whether every graph map `g -> embed(q)`, for each `q` in `targets`,
/// factors through the unit in exactly one way.
pub fn unit_is_universal(g: &RefGraph, targets: &[Preorder], budget: &Budget) -> Result<bool> {
    let r = preorder_reflection(g);
    let flg = r.unit.target().clone();
    for q in targets {
        let fq = embed(q);
        let into_fq = nat_transformations(&flg, fq.presheaf(), budget)?;
        for h in nat_transformations(g.presheaf(), fq.presheaf(), budget)? {
            let mut count = 0;
            for k in &into_fq {
                if &r.unit.then(k)? == &h {
                    count += 1;
                }
            }
            if count != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
