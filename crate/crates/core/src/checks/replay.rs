//! Re-verification of witnesses from their serialized data alone.
//!
//! Category-level witnesses are re-decided by direct mediator counting; the
//! graph and lattice witnesses work on edge lists and relation matrices
//! without touching the presheaf machinery that produced them.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{check_adjunction, exponential, AdjunctionFailure, FinCategory, MediatorAnalysis, Mor, Obj, Reflection};
use crate::verdict::{GraphData, PosetData, PreorderData, SquareKind, Witness};

use super::connected::{replay_dependent_product, replay_presheaf_square};

fn bad(msg: impl Into<String>) -> Error {
    Error::Witness(msg.into())
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(bad(msg))
    }
}

/// Re-checks a witness. `Ok(())` confirms the failure it records; any
/// discrepancy is an error naming what did not hold.
pub fn replay(w: &Witness, budget: &Budget) -> Result<()> {
    match w {
        Witness::Adjunction { reflection, failure } => {
            let r = reflection.build()?;
            replay_adjunction(&r, failure)
        }
        Witness::Frobenius { reflection, i, a } => {
            let r = valid_reflection(reflection)?;
            let i = obj(r.small(), i)?;
            let a = obj(r.big(), a)?;
            replay_frobenius(&r, i, a)
        }
        Witness::Square {
            square,
            reflection,
            f,
            g,
            p1,
            p2,
            image,
        } => {
            let r = valid_reflection(reflection)?;
            let b = r.big();
            let (f, g, p1, p2) = (mor(b, f)?, mor(b, g)?, mor(b, p1)?, mor(b, p2)?);
            replay_square(&r, *square, f, g, p1, p2, image)
        }
        Witness::Product { reflection, x, y } => {
            let r = valid_reflection(reflection)?;
            let (x, y) = (obj(r.big(), x)?, obj(r.big(), y)?);
            replay_product(&r, x, y)
        }
        Witness::Terminal { reflection } => {
            let r = valid_reflection(reflection)?;
            let (b, a) = (r.big(), r.small());
            let t = b
                .objects()
                .find(|&t| b.objects().all(|x| b.hom(x, t).len() == 1))
                .ok_or_else(|| bad("ambient category has no terminal object"))?;
            let lt = r.left().obj(t);
            ensure(
                a.objects().any(|x| a.hom(x, lt).len() != 1),
                "the image of the terminal object is terminal",
            )
        }
        Witness::Exponential {
            reflection,
            a,
            b,
            exponential: e,
        } => {
            let r = valid_reflection(reflection)?;
            let (big, small) = (r.big(), r.small());
            let (a, b, e) = (obj(small, a)?, obj(big, b)?, obj(big, e)?);
            let found = exponential(big, b, r.right().obj(a))
                .ok_or_else(|| bad("the exponential does not exist"))?;
            ensure(
                big.hom(found.object, e).iter().any(|&m| big.is_iso(m)),
                "recorded object is not the exponential",
            )?;
            ensure(
                !small
                    .objects()
                    .any(|a2| big.hom(e, r.right().obj(a2)).iter().any(|&m| big.is_iso(m))),
                "the exponential is isomorphic to an image of the right adjoint",
            )
        }
        Witness::HomCount {
            reflection,
            clause,
            x,
            y,
            left,
            right,
        } => replay_hom_count(reflection, clause, x, y, *left, *right, budget),
        Witness::PresheafSquare {
            functor,
            x,
            z,
            w,
            a,
            u,
        } => ensure(
            !replay_presheaf_square(functor, x, z, w, a, u, budget)?,
            "the extended square is a pullback",
        ),
        Witness::DependentProduct {
            functor,
            y,
            z,
            w,
            f,
            g,
        } => ensure(
            !replay_dependent_product(functor, y, z, w, f, g, budget)?,
            "restriction preserves this dependent product",
        ),
        Witness::Lcc { lattice, x, y, w } => replay_lcc(lattice, x, y, w),
        Witness::GraphSquare {
            graph,
            p,
            q,
            f,
            u,
            lo,
            hi,
        } => replay_graph_square(graph, p, q, f, u, *lo, *hi),
        Witness::DependentProductGraph {
            x,
            y,
            z,
            f,
            g,
            violation,
        } => replay_pi_graph(x, y, z, f, g, violation),
        Witness::GraphProduct { g, h } => replay_graph_product(g, h),
        Witness::GraphExponential { p, g, violation } => replay_graph_exponential(p, g, violation),
        Witness::Sieve { a0, b0, u } => replay_sieve(a0, b0, u),
    }
}

fn obj(c: &FinCategory, name: &str) -> Result<Obj> {
    c.object(name).ok_or_else(|| bad(format!("unknown object {name}")))
}

fn mor(c: &FinCategory, name: &str) -> Result<Mor> {
    c.morphism(name).ok_or_else(|| bad(format!("unknown morphism {name}")))
}

fn valid_reflection(d: &crate::verdict::ReflectionData) -> Result<Reflection> {
    let r = d.build()?;
    check_adjunction(&r).map_err(|e| bad(format!("stored reflection is not an adjunction: {e:?}")))?;
    Ok(r)
}

fn replay_adjunction(r: &Reflection, failure: &AdjunctionFailure) -> Result<()> {
    let (b, a) = (r.big(), r.small());
    match failure {
        AdjunctionFailure::MistypedUnit { b: name, component } => {
            let o = obj(b, name)?;
            ensure(b.mor_name(r.unit(o)) == component, "recorded unit component differs")?;
            let eta = r.unit(o);
            ensure(
                b.dom(eta) != o || b.cod(eta) != r.right().obj(r.left().obj(o)),
                "unit component is well typed",
            )
        }
        AdjunctionFailure::Factorizations {
            b: bn,
            a: an,
            u,
            count,
        } => {
            let (bo, ao, u) = (obj(b, bn)?, obj(a, an)?, mor(b, u)?);
            let eta = r.unit(bo);
            let n = a
                .hom(r.left().obj(bo), ao)
                .iter()
                .filter(|&&v| b.try_compose(r.right().mor(v), eta) == Some(u))
                .count();
            ensure(n == *count && n != 1, "factorization count does not reproduce")
        }
        AdjunctionFailure::NotFullyFaithful => {
            let f = r.right();
            let ff = a.objects().all(|x| {
                a.objects().all(|y| {
                    let mut images: Vec<Mor> = a.hom(x, y).iter().map(|&m| f.mor(m)).collect();
                    images.sort();
                    images.dedup();
                    images.len() == a.hom(x, y).len() && images.len() == b.hom(f.obj(x), f.obj(y)).len()
                })
            });
            ensure(!ff, "right adjoint is full and faithful")
        }
    }
}

/// All product cones `(p, p1, p2)` of `x` and `y`, by direct counting.
fn product_cones(c: &FinCategory, x: Obj, y: Obj) -> Vec<(Obj, Mor, Mor)> {
    let mut out = Vec::new();
    for p in c.objects() {
        for &p1 in c.hom(p, x) {
            for &p2 in c.hom(p, y) {
                let universal = c.objects().all(|w| {
                    c.hom(w, x).iter().all(|&a| {
                        c.hom(w, y).iter().all(|&b| {
                            c.hom(w, p)
                                .iter()
                                .filter(|&&m| c.compose(p1, m) == a && c.compose(p2, m) == b)
                                .count()
                                == 1
                        })
                    })
                });
                if universal {
                    out.push((p, p1, p2));
                }
            }
        }
    }
    out
}

/// Whether the map `m : w -> p` with given components into a product cone
/// exists and is invertible.
fn paired_iso(c: &FinCategory, w: Obj, cone: (Obj, Mor, Mor), a: Mor, b: Mor) -> bool {
    let (p, q1, q2) = cone;
    c.hom(w, p)
        .iter()
        .any(|&m| c.compose(q1, m) == a && c.compose(q2, m) == b && c.is_iso(m))
}

fn replay_frobenius(r: &Reflection, i: Obj, a: Obj) -> Result<()> {
    let (big, small, l) = (r.big(), r.small(), r.left());
    let fi = r.right().obj(i);
    let cone = *product_cones(big, fi, a)
        .first()
        .ok_or_else(|| bad("no product in the ambient category"))?;
    let target = *product_cones(small, i, l.obj(a))
        .first()
        .ok_or_else(|| bad("no product in the subcategory"))?;
    let eps = small
        .hom(l.obj(fi), i)
        .iter()
        .copied()
        .find(|&v| big.try_compose(r.right().mor(v), r.unit(fi)) == Some(big.id(fi)))
        .ok_or_else(|| bad("no counit"))?;
    let first = small.compose(eps, l.mor(cone.1));
    let second = l.mor(cone.2);
    ensure(
        !paired_iso(small, l.obj(cone.0), target, first, second),
        "the comparison map is invertible",
    )
}

fn replay_product(r: &Reflection, x: Obj, y: Obj) -> Result<()> {
    let (big, small, l) = (r.big(), r.small(), r.left());
    let cone = *product_cones(big, x, y)
        .first()
        .ok_or_else(|| bad("no product in the ambient category"))?;
    let target = *product_cones(small, l.obj(x), l.obj(y))
        .first()
        .ok_or_else(|| bad("no product of the images"))?;
    ensure(
        !paired_iso(small, l.obj(cone.0), target, l.mor(cone.1), l.mor(cone.2)),
        "the comparison map is invertible",
    )
}

/// Number of mediators for every compatible pair; `None` if the square
/// does not commute.
fn mediator_counts(c: &FinCategory, p1: Mor, p2: Mor, f: Mor, g: Mor) -> Option<Vec<(Obj, Mor, Mor, usize)>> {
    if c.try_compose(f, p1)? != c.try_compose(g, p2)? {
        return None;
    }
    let mut out = Vec::new();
    for w in c.objects() {
        for &a in c.hom(w, c.dom(f)) {
            for &b in c.hom(w, c.dom(g)) {
                if c.compose(f, a) == c.compose(g, b) {
                    let n = c
                        .hom(w, c.dom(p1))
                        .iter()
                        .filter(|&&m| c.compose(p1, m) == a && c.compose(p2, m) == b)
                        .count();
                    out.push((w, a, b, n));
                }
            }
        }
    }
    Some(out)
}

fn replay_square(
    r: &Reflection,
    kind: SquareKind,
    f: Mor,
    g: Mor,
    p1: Mor,
    p2: Mor,
    image: &MediatorAnalysis,
) -> Result<()> {
    let (big, small, l, fr) = (r.big(), r.small(), r.left(), r.right());
    ensure(big.cod(f) == big.cod(g), "legs do not form a cospan")?;
    let z = big.cod(f);
    ensure(small.objects().any(|a| fr.obj(a) == z), "cospan is not over an image object")?;
    if kind == SquareKind::SemiLeftExact {
        ensure(
            small.morphisms().any(|u| fr.mor(u) == g),
            "second leg is not an image of the right adjoint",
        )?;
    }
    let counts = mediator_counts(big, p1, p2, f, g).ok_or_else(|| bad("recorded square does not commute"))?;
    ensure(counts.iter().all(|t| t.3 == 1), "recorded square is not a pullback")?;
    let counts = mediator_counts(small, l.mor(p1), l.mor(p2), l.mor(f), l.mor(g));
    match (image, counts) {
        (MediatorAnalysis::NotCommuting, None) => Ok(()),
        (MediatorAnalysis::Missing { probe, left, right }, Some(cs)) => {
            let hit = cs.iter().any(|&(w, a, b, n)| {
                n == 0 && small.obj_name(w) == probe && small.mor_name(a) == left && small.mor_name(b) == right
            });
            ensure(hit, "recorded pair has a mediator")
        }
        (
            MediatorAnalysis::Many {
                probe,
                left,
                right,
                count,
            },
            Some(cs),
        ) => {
            let hit = cs.iter().any(|&(w, a, b, n)| {
                n == *count
                    && n >= 2
                    && small.obj_name(w) == probe
                    && small.mor_name(a) == left
                    && small.mor_name(b) == right
            });
            ensure(hit, "recorded pair does not have the recorded mediators")
        }
        _ => Err(bad("image square analysis does not reproduce")),
    }
}

fn replay_hom_count(
    reflection: &crate::verdict::ReflectionData,
    clause: &str,
    x: &crate::verdict::PresheafData,
    y: &crate::verdict::PresheafData,
    left: usize,
    right: usize,
    budget: &Budget,
) -> Result<()> {
    use crate::kan::{lan, ran, restrict};
    use crate::presheaf::count_nat_transformations as count;
    let r = reflection.build()?;
    let (l, f) = (r.left(), r.right());
    let (b, a) = (r.big(), r.small());
    let (got_left, got_right) = match clause {
        "lan-adjunction" | "ran-adjunction" | "local-adjunction" => {
            let (x, y) = (x.build(b)?, y.build(a)?);
            match clause {
                "lan-adjunction" => (
                    count(&lan(l, &x, budget)?.output, &y, budget)?,
                    count(&x, &restrict(l, &y)?, budget)?,
                ),
                "ran-adjunction" => (
                    count(&restrict(l, &y)?, &x, budget)?,
                    count(&y, &ran(l, &x, budget)?.output, budget)?,
                ),
                _ => (
                    count(&ran(l, &x, budget)?.output, &y, budget)?,
                    count(&x, &ran(f, &y, budget)?.output, budget)?,
                ),
            }
        }
        "restriction-fully-faithful" | "local-fully-faithful" => {
            let (y1, y2) = (x.build(a)?, y.build(a)?);
            let image = if clause == "restriction-fully-faithful" {
                count(&restrict(l, &y1)?, &restrict(l, &y2)?, budget)?
            } else {
                count(&ran(f, &y1, budget)?.output, &ran(f, &y2, budget)?.output, budget)?
            };
            (image, count(&y1, &y2, budget)?)
        }
        _ => return Err(bad(format!("unknown clause {clause}"))),
    };
    ensure(
        got_left == left && got_right == right && left != right,
        "hom counts do not reproduce",
    )
}

// Relations as boolean matrices.
type Rel = Vec<Vec<bool>>;

/// Reflexive-transitive closure by Floyd-Warshall.
fn closure(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Rel {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

fn preorder(p: &PreorderData) -> Result<Rel> {
    ensure(
        p.leq.iter().all(|&(a, b)| a < p.size && b < p.size),
        "preorder pair out of range",
    )?;
    let r = closure(p.size, p.leq.iter().copied());
    let mut listed = vec![vec![false; p.size]; p.size];
    for &(a, b) in &p.leq {
        listed[a][b] = true;
    }
    for (i, row) in listed.iter_mut().enumerate() {
        row[i] = true;
    }
    ensure(listed == r, "preorder data is not reflexive and transitive")?;
    Ok(r)
}

fn graph_edges(g: &GraphData) -> Result<Vec<(usize, usize)>> {
    ensure(
        g.edges.iter().all(|&(a, b)| a < g.vertices && b < g.vertices),
        "edge endpoint out of range",
    )?;
    Ok((0..g.vertices).map(|v| (v, v)).chain(g.edges.iter().copied()).collect())
}

fn monotone_on(edges: &[(usize, usize)], f: &[usize], target: &Rel) -> bool {
    edges.iter().all(|&(a, b)| target[f[a]][f[b]])
}

fn replay_graph_square(
    graph: &GraphData,
    p: &PreorderData,
    q: &PreorderData,
    f: &[usize],
    u: &[usize],
    lo: (usize, usize),
    hi: (usize, usize),
) -> Result<()> {
    let edges = graph_edges(graph)?;
    let (rp, rq) = (preorder(p)?, preorder(q)?);
    ensure(f.len() == graph.vertices && f.iter().all(|&v| v < p.size), "f has the wrong shape")?;
    ensure(u.len() == q.size && u.iter().all(|&v| v < p.size), "u has the wrong shape")?;
    ensure(monotone_on(&edges, f, &rp), "f is not a graph map")?;
    let q_pairs: Vec<(usize, usize)> = (0..q.size)
        .flat_map(|a| (0..q.size).map(move |b| (a, b)))
        .filter(|&(a, b)| rq[a][b])
        .collect();
    ensure(monotone_on(&q_pairs, u, &rp), "u is not monotone")?;
    // the pullback graph: vertex pairs and edge pairs over a common image
    let verts: Vec<(usize, usize)> = (0..graph.vertices)
        .flat_map(|x| (0..q.size).map(move |j| (x, j)))
        .filter(|&(x, j)| f[x] == u[j])
        .collect();
    let pos = |v: (usize, usize)| verts.iter().position(|&w| w == v);
    let mut pb_edges = Vec::new();
    for &(s, t) in &edges {
        for &(j1, j2) in &q_pairs {
            if f[s] == u[j1] && f[t] == u[j2] {
                pb_edges.push((pos((s, j1)).unwrap(), pos((t, j2)).unwrap()));
            }
        }
    }
    let reflected = closure(verts.len(), pb_edges);
    let lx = closure(graph.vertices, edges.iter().copied());
    let (Some(a), Some(b)) = (pos(lo), pos(hi)) else {
        return Err(bad("recorded pair is not in the pullback"));
    };
    ensure(lx[lo.0][hi.0] && rq[lo.1][hi.1], "pair is unrelated in the pullback of preorders")?;
    ensure(!reflected[a][b], "pair is related in the reflected pullback")
}

fn replay_lcc(lattice: &PosetData, x: &str, y: &str, w: &str) -> Result<()> {
    let n = lattice.elements.len();
    let idx = |s: &str| {
        lattice
            .elements
            .iter()
            .position(|e| e == s)
            .ok_or_else(|| bad(format!("unknown element {s}")))
    };
    let pairs = lattice
        .leq
        .iter()
        .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let r = closure(n, pairs);
    ensure(
        (0..n).all(|a| (0..n).all(|b| a == b || !(r[a][b] && r[b][a]))),
        "order is not antisymmetric",
    )?;
    let meet = |a: usize, b: usize| {
        let lower: Vec<usize> = (0..n).filter(|&z| r[z][a] && r[z][b]).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&z| r[z][m]))
    };
    let (x, y, w) = (idx(x)?, idx(y)?, idx(w)?);
    ensure(r[x][y] && r[w][x], "witness elements are not ordered x <= y, w <= x")?;
    let mut candidates = Vec::new();
    for z in (0..n).filter(|&z| r[z][y]) {
        let m = meet(z, x).ok_or_else(|| bad("missing meet"))?;
        if r[m][w] {
            candidates.push(z);
        }
    }
    let has_max = candidates.iter().any(|&m| candidates.iter().all(|&z| r[z][m]));
    ensure(!has_max, "the right adjoint value exists")
}

/// Every function `0..n -> 0..k` allowed by `choices`, in lexicographic order.
fn for_each_choice(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize]) -> bool) {
    let n = choices.len();
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0; n];
    loop {
        let cur: Vec<usize> = (0..n).map(|i| choices[i][idx[i]]).collect();
        if !visit(&cur) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// The graph `Pi_f g` for monotone `f : X -> Y`, `g : Z -> X`, from the
/// sections formula: a vertex over `y` is a monotone section of `g` over the
/// fibre of `y`; an edge over `y1 <= y2` is a pair of sections compatible
/// along every `x1 <= x2` from the first fibre to the second.
fn pi_graph(rx: &Rel, ry: &Rel, rz: &Rel, f: &[usize], g: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let ny = ry.len();
    let fibre = |y: usize| -> Vec<usize> { (0..rx.len()).filter(|&x| f[x] == y).collect() };
    let mut vertices: Vec<(usize, Vec<usize>)> = Vec::new();
    for y in 0..ny {
        let fb = fibre(y);
        let choices: Vec<Vec<usize>> = fb.iter().map(|&x| (0..g.len()).filter(|&z| g[z] == x).collect()).collect();
        if fb.is_empty() {
            vertices.push((y, vec![]));
            continue;
        }
        for_each_choice(&choices, |s| {
            let ok = fb
                .iter()
                .enumerate()
                .all(|(i, &a)| fb.iter().enumerate().all(|(j, &b)| !rx[a][b] || rz[s[i]][s[j]]));
            if ok {
                vertices.push((y, s.to_vec()));
            }
            true
        });
    }
    let mut edges = Vec::new();
    for (i, (y1, s1)) in vertices.iter().enumerate() {
        for (j, (y2, s2)) in vertices.iter().enumerate() {
            if !ry[*y1][*y2] {
                continue;
            }
            let (f1, f2) = (fibre(*y1), fibre(*y2));
            let ok = f1.iter().enumerate().all(|(a, &x1)| {
                f2.iter()
                    .enumerate()
                    .all(|(b, &x2)| !rx[x1][x2] || rz[s1[a]][s2[b]])
            });
            if ok {
                edges.push((i, j));
            }
        }
    }
    (vertices.len(), edges)
}

/// Why an edge list (one distinguished loop per vertex among its loops)
/// is not an embedded preorder: `parallel-edges` and/or `not-transitive`,
/// each with a description of the first instance found.
pub(crate) fn preorder_defects(n: usize, edges: &[(usize, usize)]) -> Vec<String> {
    let mut mult = vec![vec![0usize; n]; n];
    for &(a, b) in edges {
        mult[a][b] += 1;
    }
    let mut out = Vec::new();
    'par: for a in 0..n {
        for b in 0..n {
            if mult[a][b] > 1 {
                out.push(format!("parallel-edges: {} edges from {a} to {b}", mult[a][b]));
                break 'par;
            }
        }
    }
    'trans: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[a][b] > 0 && mult[b][c] > 0 && mult[a][c] == 0 {
                    out.push(format!("not-transitive: {a} -> {b} -> {c} without {a} -> {c}"));
                    break 'trans;
                }
            }
        }
    }
    out
}

/// The kind prefix of a defect description.
pub fn defect_kind(s: &str) -> &str {
    s.split(':').next().unwrap_or("")
}

fn replay_pi_graph(
    x: &PreorderData,
    y: &PreorderData,
    z: &PreorderData,
    f: &[usize],
    g: &[usize],
    violation: &str,
) -> Result<()> {
    let (rx, ry, rz) = (preorder(x)?, preorder(y)?, preorder(z)?);
    ensure(f.len() == x.size && f.iter().all(|&v| v < y.size), "f has the wrong shape")?;
    ensure(g.len() == z.size && g.iter().all(|&v| v < x.size), "g has the wrong shape")?;
    let pairs = |r: &Rel| -> Vec<(usize, usize)> {
        (0..r.len())
            .flat_map(|a| (0..r.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| r[a][b])
            .collect()
    };
    ensure(monotone_on(&pairs(&rx), f, &ry), "f is not monotone")?;
    ensure(monotone_on(&pairs(&rz), g, &rx), "g is not monotone")?;
    let (n, edges) = pi_graph(&rx, &ry, &rz, f, g);
    let found = preorder_defects(n, &edges);
    ensure(
        found.iter().any(|d| defect_kind(d) == defect_kind(violation)),
        "the dependent product has no defect of the recorded kind",
    )
}

fn replay_sieve(a0: &PreorderData, b0: &GraphData, u: &[usize]) -> Result<()> {
    let ra = preorder(a0)?;
    let edges = graph_edges(b0)?;
    ensure(u.len() == b0.vertices && u.iter().all(|&v| v < a0.size), "u has the wrong shape")?;
    ensure(monotone_on(&edges, u, &ra), "u is not a graph map")?;
    let n = b0.vertices;
    let lb = closure(n, edges.iter().copied());
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in &edges {
        adj[a][b] = true;
    }
    // h : F L B0 -> B0 over F A0 must send each related pair to an edge
    let choices: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&v| u[v] == u[x]).collect()).collect();
    let mut factors = false;
    for_each_choice(&choices, |h| {
        let ok = (0..n).all(|a| (0..n).all(|b| !lb[a][b] || adj[h[a]][h[b]]));
        if ok {
            factors = true;
        }
        !factors
    });
    ensure(!factors, "the reflected map factors through u")
}

fn replay_graph_product(g: &GraphData, h: &GraphData) -> Result<()> {
    let (eg, eh) = (graph_edges(g)?, graph_edges(h)?);
    let m = h.vertices;
    let n = g.vertices * m;
    let pairs = eg.iter().flat_map(|&(a, b)| eh.iter().map(move |&(c, d)| (a * m + c, b * m + d)));
    let reflected = closure(n, pairs);
    let (lg, lh) = (closure(g.vertices, eg.iter().copied()), closure(m, eh.iter().copied()));
    let preserved = (0..n).all(|i| (0..n).all(|j| reflected[i][j] == (lg[i / m][j / m] && lh[i % m][j % m])));
    ensure(!preserved, "the reflection preserves this product")
}

/// `(F p)^g` by the direct formula: vertices are graph maps `g -> F p`, and
/// there is exactly one edge `phi -> psi` when `phi(a) <= psi(b)` for every
/// edge `a -> b` of `g`, loops included.
fn replay_graph_exponential(p: &PreorderData, g: &GraphData, violation: &str) -> Result<()> {
    let rp = preorder(p)?;
    let edges = graph_edges(g)?;
    let choices: Vec<Vec<usize>> = (0..g.vertices).map(|_| (0..p.size).collect()).collect();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for_each_choice(&choices, |f| {
        if monotone_on(&edges, f, &rp) {
            maps.push(f.to_vec());
        }
        true
    });
    if g.vertices == 0 {
        maps.push(vec![]);
    }
    let mut exp_edges = Vec::new();
    for (i, phi) in maps.iter().enumerate() {
        for (j, psi) in maps.iter().enumerate() {
            if edges.iter().all(|&(a, b)| rp[phi[a]][psi[b]]) {
                exp_edges.push((i, j));
            }
        }
    }
    let found = preorder_defects(maps.len(), &exp_edges);
    ensure(
        found.iter().any(|d| defect_kind(d) == defect_kind(violation)),
        "the exponential has no defect of the recorded kind",
    )
}
