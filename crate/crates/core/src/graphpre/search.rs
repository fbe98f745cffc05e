//! Exhaustive checks and witness searches over small graphs and preorders.
//! Searches visit candidates by total size, then in canonical order, so the
//! witness returned is the least one whatever the number of workers.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::graphs_with;
use super::{
    embed, embed_map, enumerate_graphs, enumerate_preorders, graph_map_into, preorder_reflection, vertex_part,
    GraphBounds, Preorder, RefGraph,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::presheaf::{dependent_product, exponential, for_each_nat, product, pullback, NatOptions};
use crate::verdict::{Outcome, Verdict, Witness};

/// Limits shared by the witness searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_vertices: usize,
    /// Edges beyond the distinguished loops.
    pub max_edges: usize,
    /// Largest preorder considered.
    pub max_preorder: usize,
    pub jobs: usize,
    /// Stop at the first witness any worker finds; the witness is still
    /// valid but need not be the least.
    pub fast: bool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_vertices: 4,
            max_edges: 8,
            max_preorder: 4,
            jobs: 1,
            fast: false,
        }
    }
}

impl SearchBounds {
    fn pairs(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("max-vertices", self.max_vertices as u64),
            ("max-edges", self.max_edges as u64),
            ("max-preorder", self.max_preorder as u64),
        ]
    }
}

/// Limits for the product-preservation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductBounds {
    pub exhaustive: GraphBounds,
    pub random_pairs: usize,
    pub random_max_vertices: usize,
    pub random_max_edges: usize,
    pub seed: u64,
}

impl Default for ProductBounds {
    fn default() -> Self {
        ProductBounds {
            exhaustive: GraphBounds::new(3, 4),
            random_pairs: 100,
            random_max_vertices: 5,
            random_max_edges: 6,
            seed: 0x5eed,
        }
    }
}

/// Counts candidates against a budget from any worker.
struct Counter {
    used: AtomicU64,
    limit: u64,
}

impl Counter {
    fn new(budget: &Budget) -> Self {
        Counter {
            used: AtomicU64::new(0),
            limit: budget.limit(),
        }
    }

    fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }
}

/// Every vertex map `0..n -> target` sending each pair in `edges` to a
/// related pair, in lexicographic order.
fn monotone_maps(n: usize, edges: &[(usize, usize)], target: &Preorder) -> Vec<Vec<usize>> {
    let k = target.size();
    let mut out = Vec::new();
    let mut f = vec![0; n];
    fn rec(i: usize, f: &mut Vec<usize>, k: usize, edges: &[(usize, usize)], t: &Preorder, out: &mut Vec<Vec<usize>>) {
        if i == f.len() {
            out.push(f.clone());
            return;
        }
        for v in 0..k {
            f[i] = v;
            // edges with both ends assigned are checked as soon as possible
            let ok = edges
                .iter()
                .all(|&(a, b)| a.max(b) != i || t.leq(f[a], f[b]));
            if ok {
                rec(i + 1, f, k, edges, t, out);
            }
        }
    }
    if k > 0 || n == 0 {
        rec(0, &mut f, k, edges, target, &mut out);
    }
    out
}

/// Runs `visit` over layers in order and returns the first hit of the
/// first layer that has one.
fn layered<T: Sync, W: Send>(
    layers: impl Iterator<Item = Vec<T>>,
    bounds: &SearchBounds,
    visit: impl Fn(&T) -> Result<Option<W>> + Sync,
) -> Result<Option<W>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(bounds.jobs.max(1))
        .build()
        .map_err(|e| Error::ShapeMismatch(format!("cannot start workers: {e}")))?;
    for layer in layers {
        let hit = pool.install(|| {
            if bounds.fast {
                layer.par_iter().map(&visit).find_any(|r| !matches!(r, Ok(None)))
            } else {
                layer.par_iter().map(&visit).find_first(|r| !matches!(r, Ok(None)))
            }
        });
        if let Some(r) = hit {
            return r;
        }
    }
    Ok(None)
}

fn finish(mut v: Verdict, found: Result<Option<Witness>>, counter: &Counter, space: &str) -> Result<Verdict> {
    v.stats.examined = counter.used();
    match found {
        Ok(Some(w)) => Ok(v.fail(w)),
        Ok(None) => {
            v.outcome = Outcome::NotFound;
            v.note(format!("exhausted {} {space} within bounds", counter.used()));
            Ok(v)
        }
        Err(Error::BudgetExceeded { limit }) => {
            Ok(v.inconclusive(format!("budget of {limit} candidates exhausted before the space was covered")))
        }
        Err(e) => Err(e),
    }
}

/// Whether the reflection of `g * h` is the product of the reflections,
/// with the product taken in the presheaf category.
pub fn product_preserved(g: &RefGraph, h: &RefGraph) -> Result<bool> {
    let cone = product(g.presheaf(), h.presheaf())?;
    let gh = RefGraph::from_presheaf(cone.object.clone())?;
    let l = preorder_reflection(&gh).preorder;
    let (lg, lh) = (preorder_reflection(g).preorder, preorder_reflection(h).preorder);
    let target = lg.product(&lh);
    let (p1, p2) = (vertex_part(&cone.p1), vertex_part(&cone.p2));
    let m = lh.size();
    let cmp: Vec<usize> = (0..gh.num_vertices()).map(|i| p1[i] * m + p2[i]).collect();
    let mut hit = vec![false; target.size()];
    for &c in &cmp {
        hit[c] = true;
    }
    if cmp.len() != target.size() || hit.contains(&false) {
        return Ok(false);
    }
    let n = cmp.len();
    Ok((0..n).all(|i| (0..n).all(|j| l.leq(i, j) == target.leq(cmp[i], cmp[j]))))
}

/// A graph with `1..=max_vertices` vertices and up to `max_edges` extra
/// edges chosen uniformly.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> RefGraph {
    let n = rng.gen_range(1..=max_vertices);
    let k = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    RefGraph::new(n, &edges).expect("edges are in range")
}

/// `L(G x H) = LG x LH` for every pair within the exhaustive bounds, then
/// for seeded pseudo-random pairs.
pub fn check_product_preservation(b: &ProductBounds, budget: &Budget) -> Result<Verdict> {
    let mut v = Verdict::new(
        "graphpre.products",
        &[
            ("max-vertices", b.exhaustive.max_vertices as u64),
            ("max-edges", b.exhaustive.max_edges as u64),
            ("random-pairs", b.random_pairs as u64),
            ("random-max-vertices", b.random_max_vertices as u64),
        ],
    );
    let graphs: Vec<RefGraph> = enumerate_graphs(b.exhaustive).collect();
    let total = (graphs.len() * graphs.len()) as u64;
    if total > budget.limit() {
        return Ok(v.inconclusive(format!("{total} pairs exceed the budget of {}", budget.limit())));
    }
    let bad = graphs
        .par_iter()
        .map(|g| -> Result<Option<(RefGraph, RefGraph)>> {
            for h in &graphs {
                if !product_preserved(g, h)? {
                    return Ok(Some((g.clone(), h.clone())));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)));
    v.stats.examined = total;
    if let Some(r) = bad {
        let (g, h) = r?.expect("a hit");
        return Ok(v.fail(Witness::GraphProduct {
            g: g.to_data(),
            h: h.to_data(),
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    for _ in 0..b.random_pairs {
        let g = random_graph(&mut rng, b.random_max_vertices, b.random_max_edges);
        let h = random_graph(&mut rng, b.random_max_vertices, b.random_max_edges);
        v.stats.examined += 1;
        if !product_preserved(&g, &h)? {
            return Ok(v.fail(Witness::GraphProduct {
                g: g.to_data(),
                h: h.to_data(),
            }));
        }
    }
    Ok(v)
}

/// Defects of `(embed p)^g` as a graph, computed by the presheaf
/// exponential; empty iff it is an embedded preorder.
pub fn exponential_defects(p: &Preorder, g: &RefGraph, budget: &Budget) -> Result<Vec<String>> {
    let e = exponential(g.presheaf(), embed(p).presheaf(), budget)?;
    Ok(RefGraph::from_presheaf(e.object)?.preorder_defects())
}

/// `(embed P)^G` is an embedded preorder for every preorder with at most
/// `max_preorder` elements and every graph on at most `max_vertices`
/// vertices. A graph map into an embedded preorder only sees which ordered
/// pairs carry an edge, and so does every map out of `G x y_E`; hence the
/// exponential depends only on that support, and simple graphs cover all
/// graphs up to isomorphism of the result.
pub fn check_exponential_ideal_graphs(max_preorder: usize, max_vertices: usize, budget: &Budget) -> Result<Verdict> {
    let mut v = Verdict::new(
        "graphpre.exponential-ideal",
        &[("max-preorder", max_preorder as u64), ("max-vertices", max_vertices as u64)],
    );
    let graphs: Vec<RefGraph> = enumerate_graphs(GraphBounds::simple(max_vertices)).collect();
    for p in enumerate_preorders(max_preorder) {
        for g in &graphs {
            let defects = match exponential_defects(&p, g, budget) {
                Ok(d) => d,
                Err(Error::BudgetExceeded { .. }) => {
                    v.stats.inconclusive += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            v.stats.examined += 1;
            if let Some(d) = defects.into_iter().next() {
                return Ok(v.fail(Witness::GraphExponential {
                    p: p.to_data(),
                    g: g.to_data(),
                    violation: d,
                }));
            }
        }
    }
    if v.stats.inconclusive > 0 {
        let n = v.stats.inconclusive;
        v = v.inconclusive(format!("{n} exponentials exceeded the budget"));
    }
    v.note("graphs range over simple graphs; multiplicities do not change the exponential");
    Ok(v)
}

/// For `f : X -> F P` and monotone `u : Q -> P`, the first pair related in
/// `LX x_P Q` but not in the reflection of the graph pullback of `f` along
/// `F u`, as (vertex of X, element of Q) pairs.
#[allow(clippy::type_complexity)]
pub fn sle_square_failure(
    x: &RefGraph,
    p: &Preorder,
    q: &Preorder,
    f: &[usize],
    u: &[usize],
) -> Result<Option<((usize, usize), (usize, usize))>> {
    let fx = graph_map_into(x, p, f)?;
    let fu = embed_map(q, p, u)?;
    let pb = pullback(&fx, &fu)?;
    let lpb = preorder_reflection(&RefGraph::from_presheaf(pb.object.clone())?).preorder;
    let lx = preorder_reflection(x).preorder;
    let (a, b) = (vertex_part(&pb.p1), vertex_part(&pb.p2));
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            if !lpb.leq(i, j) && lx.leq(a[i], a[j]) && q.leq(b[i], b[j]) {
                return Ok(Some(((a[i], b[i]), (a[j], b[j]))));
            }
        }
    }
    Ok(None)
}

/// Preorders grouped by size, in canonical order.
fn preorders_by_size(max: usize) -> Vec<Vec<Preorder>> {
    let mut out = vec![Vec::new(); max + 1];
    for p in enumerate_preorders(max) {
        let n = p.size();
        out[n].push(p);
    }
    out
}

/// Least pullback square, over a cospan `X -> F P <- F Q` with the second
/// leg an embedded monotone map, that the preorder reflection does not
/// preserve. Size is `|V X| + |extra edges of X| + |P| + |Q|`.
pub fn find_sle_failure(b: &SearchBounds, budget: &Budget) -> Result<Verdict> {
    let v = Verdict::new("graphpre.semi-left-exact", &b.pairs());
    let gb = GraphBounds::new(b.max_vertices, b.max_edges);
    let pre = preorders_by_size(b.max_preorder);
    let counter = Counter::new(budget);
    let max_total = b.max_vertices + b.max_edges + 2 * b.max_preorder;
    let layers = (1..=max_total).map(|s| {
        let mut out = Vec::new();
        for nx in 1..=b.max_vertices {
            for ex in 0..=b.max_edges {
                for np in 1..=b.max_preorder {
                    let Some(nq) = s.checked_sub(nx + ex + np) else { continue };
                    if nq == 0 || nq > b.max_preorder {
                        continue;
                    }
                    let graphs = graphs_with(nx, ex, &gb);
                    for x in &graphs {
                        for p in &pre[np] {
                            for q in &pre[nq] {
                                out.push((x.clone(), p.clone(), q.clone()));
                            }
                        }
                    }
                }
            }
        }
        out
    });
    let found = layered(layers, b, |(x, p, q)| {
        let fs = monotone_maps(x.num_vertices(), &x.edges(), p);
        let us = monotone_maps(q.size(), &q.pairs(), p);
        for f in &fs {
            for u in &us {
                counter.tick()?;
                if let Some((lo, hi)) = sle_square_failure(x, p, q, f, u)? {
                    return Ok(Some(Witness::GraphSquare {
                        graph: x.to_data(),
                        p: p.to_data(),
                        q: q.to_data(),
                        f: f.clone(),
                        u: u.clone(),
                        lo,
                        hi,
                    }));
                }
            }
        }
        Ok(None)
    });
    let mut v = finish(v, found, &counter, "pullback squares")?;
    if v.is_fail() {
        v.note("the comparison from the reflected pullback is bijective on vertices but does not reflect lo <= hi");
    }
    Ok(v)
}

/// Defects of `Pi_(F f) (F g)` as a graph, computed in the presheaf
/// category; empty iff it is an embedded preorder.
pub fn pi_defects(
    x: &Preorder,
    y: &Preorder,
    z: &Preorder,
    f: &[usize],
    g: &[usize],
    budget: &Budget,
) -> Result<Vec<String>> {
    let pi = dependent_product(&embed_map(x, y, f)?, &embed_map(z, x, g)?, budget)?;
    Ok(RefGraph::from_presheaf(pi.object().clone())?.preorder_defects())
}

/// Least `f : X -> Y`, `g : Z -> X` between preorders whose dependent
/// product in graphs is not an embedded preorder. This is evidence that
/// preorders do not inherit dependent products from graphs; the
/// semi-left-exactness witness is the decisive certificate.
pub fn find_pi_witness(b: &SearchBounds, budget: &Budget) -> Result<Verdict> {
    let v = Verdict::new("graphpre.dependent-products", &[("max-preorder", b.max_preorder as u64)]);
    let pre = preorders_by_size(b.max_preorder);
    let counter = Counter::new(budget);
    let layers = (3..=3 * b.max_preorder).map(|s| {
        let mut out = Vec::new();
        for nx in 1..=b.max_preorder {
            for ny in 1..=b.max_preorder {
                let Some(nz) = s.checked_sub(nx + ny) else { continue };
                if nz == 0 || nz > b.max_preorder {
                    continue;
                }
                for x in &pre[nx] {
                    for y in &pre[ny] {
                        for z in &pre[nz] {
                            out.push((x.clone(), y.clone(), z.clone()));
                        }
                    }
                }
            }
        }
        out
    });
    let found = layered(layers, b, |(x, y, z)| {
        let fs = monotone_maps(x.size(), &x.pairs(), y);
        let gs = monotone_maps(z.size(), &z.pairs(), x);
        for f in &fs {
            for g in &gs {
                counter.tick()?;
                if let Some(d) = pi_defects(x, y, z, f, g, budget)?.into_iter().next() {
                    return Ok(Some(Witness::DependentProductGraph {
                        x: x.to_data(),
                        y: y.to_data(),
                        z: z.to_data(),
                        f: f.clone(),
                        g: g.clone(),
                        violation: d,
                    }));
                }
            }
        }
        Ok(None)
    });
    let mut v = finish(v, found, &counter, "pairs of maps")?;
    v.note("evidence only: the decisive certificate is the semi-left-exactness witness");
    Ok(v)
}

/// Whether `F L u`, for a graph map `u : B0 -> F A0` with vertex part `u`,
/// lies outside the sieve generated by `u`, i.e. does not factor as `u . h`.
pub fn sieve_misses(b0: &RefGraph, a0: &Preorder, u: &[usize], budget: &Budget) -> Result<bool> {
    let um = graph_map_into(b0, a0, u)?;
    let flb = RefGraph::from_presheaf(preorder_reflection(b0).unit.target().clone())?;
    let flu = graph_map_into(&flb, a0, u)?;
    let mut factors = false;
    for_each_nat(flb.presheaf(), b0.presheaf(), NatOptions::default(), budget, |h| {
        let commutes = h.iter().enumerate().all(|(o, t)| {
            let (uo, fo) = (um.components()[o].table(), flu.components()[o].table());
            t.iter().enumerate().all(|(i, &hi)| uo[hi] == fo[i])
        });
        if commutes {
            factors = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(!factors)
}

/// Least `u : B0 -> F A0` whose generated sieve omits `F L u`. Graphs that
/// are already embedded preorders are skipped unless `exhaustive`: their
/// unit is invertible, so `F L u` factors through `u`.
pub fn find_sieve_witness(b: &SearchBounds, exhaustive: bool, budget: &Budget) -> Result<Verdict> {
    let v = Verdict::new("graphpre.sieve-reflection", &b.pairs());
    let gb = GraphBounds::new(b.max_vertices, b.max_edges);
    let pre = preorders_by_size(b.max_preorder);
    let counter = Counter::new(budget);
    let layers = (2..=b.max_vertices + b.max_edges + b.max_preorder).map(|s| {
        let mut out = Vec::new();
        for nb in 1..=b.max_vertices {
            for eb in 0..=b.max_edges {
                let Some(na) = s.checked_sub(nb + eb) else { continue };
                if na == 0 || na > b.max_preorder {
                    continue;
                }
                for g in graphs_with(nb, eb, &gb) {
                    if !exhaustive && g.is_embedded_preorder() {
                        continue;
                    }
                    for a in &pre[na] {
                        out.push((g.clone(), a.clone()));
                    }
                }
            }
        }
        out
    });
    let found = layered(layers, b, |(g, a)| {
        for u in monotone_maps(g.num_vertices(), &g.edges(), a) {
            counter.tick()?;
            if sieve_misses(g, a, &u, budget)? {
                return Ok(Some(Witness::Sieve {
                    a0: a.to_data(),
                    b0: g.to_data(),
                    u,
                }));
            }
        }
        Ok(None)
    });
    finish(v, found, &counter, "maps")
}
