//! Built-in categories and reflections addressable by name.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    saturate, FinCategory, FinFunctor, Obj, Presentation, Reflection, DEFAULT_CLOSE_BOUND,
};

pub const FIXTURE_NAMES: &[&str] = &["delta1", "lattice-3-2", "m3", "bool-2", "chain-2"];

/// The reflexive-graph base: objects `V`, `E`; `d0, d1 : V -> E` pick the
/// endpoints of an edge and `s : E -> V` its loop, with `s.d0 = s.d1 = id(V)`.
pub fn delta1() -> FinCategory {
    let p = Presentation {
        objects: vec!["V".into(), "E".into()],
        generators: vec![("d0".into(), 0, 1), ("d1".into(), 0, 1), ("s".into(), 1, 0)],
        relations: vec![(0, vec![0, 2], vec![]), (0, vec![1, 2], vec![])],
    };
    saturate(&p, DEFAULT_CLOSE_BOUND).expect("the reflexive-graph base saturates")
}

/// The poset on `names` generated by `covers` (pairs `lo <= hi`).
pub fn poset(names: &[&str], covers: &[(&str, &str)]) -> Result<FinCategory> {
    let n = names.len();
    let idx = |s: &str| {
        names
            .iter()
            .position(|&m| m == s)
            .ok_or_else(|| Error::InvalidPreorder(format!("unknown element {s}")))
    };
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in covers {
        rel[idx(a)?][idx(b)?] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    FinCategory::from_preorder(&names, &rel)
}

/// The chain `n0 < n1 < ... `.
pub fn chain(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let covers: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    poset(&refs, &covers).expect("chains are posets")
}

pub fn m3() -> FinCategory {
    poset(
        &["bot", "a", "b", "c", "top"],
        &[("bot", "a"), ("bot", "b"), ("bot", "c"), ("a", "top"), ("b", "top"), ("c", "top")],
    )
    .expect("m3 is a poset")
}

pub fn bool2() -> FinCategory {
    poset(
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )
    .expect("bool-2 is a poset")
}

/// The functor between thin categories determined by an object map.
pub fn thin_functor(source: &Arc<FinCategory>, target: &Arc<FinCategory>, obj_map: Vec<Obj>) -> Result<FinFunctor> {
    let mut mors = Vec::new();
    for m in source.morphisms() {
        match target.hom(obj_map[source.dom(m).0], obj_map[source.cod(m).0]) {
            [t] => mors.push(*t),
            _ => {
                return Err(Error::InvalidFunctor(format!(
                    "{} has no unique image",
                    source.mor_name(m)
                )))
            }
        }
    }
    FinFunctor::new(source.clone(), target.clone(), obj_map, mors)
}

/// Reflection of a poset onto the full subposet on `sub`, with `L b` the
/// least element of `sub` above `b`.
pub fn poset_reflection(big: &Arc<FinCategory>, sub: &[&str]) -> Result<Reflection> {
    let sub_objs: Vec<Obj> = sub
        .iter()
        .map(|s| big.object(s).ok_or_else(|| Error::InvalidPreorder(format!("unknown element {s}"))))
        .collect::<Result<_>>()?;
    let names: Vec<String> = sub.iter().map(|s| s.to_string()).collect();
    let rel: Vec<Vec<bool>> = sub_objs
        .iter()
        .map(|&x| sub_objs.iter().map(|&y| !big.hom(x, y).is_empty()).collect())
        .collect();
    let small = Arc::new(FinCategory::from_preorder(&names, &rel)?);
    let incl: Vec<Obj> = small
        .objects()
        .map(|o| big.object(small.obj_name(o)).unwrap())
        .collect();
    let right = thin_functor(&small, big, incl.clone())?;
    let mut lmap = Vec::new();
    for b in big.objects() {
        let above: Vec<Obj> = small.objects().filter(|&a| !big.hom(b, incl[a.0]).is_empty()).collect();
        let least = above
            .iter()
            .copied()
            .find(|&a| above.iter().all(|&c| !small.hom(a, c).is_empty()))
            .ok_or_else(|| {
                Error::InvalidPreorder(format!("{} has no least reflection", big.obj_name(b)))
            })?;
        lmap.push(least);
    }
    let left = thin_functor(big, &small, lmap)?;
    Reflection::with_unique_unit(left, right)
}

/// Reflection onto the terminal category through a terminal object `t`.
pub fn terminal_reflection(big: &Arc<FinCategory>, t: Obj) -> Result<Reflection> {
    let point = Arc::new(FinCategory::terminal());
    let left = FinFunctor::to_terminal(big.clone(), point.clone())?;
    let right = FinFunctor::new(point, big.clone(), vec![t], vec![big.id(t)])?;
    Reflection::with_unique_unit(left, right)
}

pub fn category(name: &str) -> Result<FinCategory> {
    match name {
        "delta1" => Ok(delta1()),
        "lattice-3-2" => Ok(chain(3)),
        "m3" => Ok(m3()),
        "bool-2" => Ok(bool2()),
        "chain-2" => Ok(chain(2)),
        _ => Err(Error::UnknownFixture(name.into())),
    }
}

/// The reflection a fixture name stands for: `lattice-3-2` reflects the
/// chain `n0 < n1 < n2` onto `{n0, n2}`; `m3` and `bool-2` reflect onto
/// `{a, top}`; `delta1` and `chain-2` reflect onto their terminal object.
pub fn reflection(name: &str) -> Result<Reflection> {
    let c = Arc::new(category(name)?);
    match name {
        "lattice-3-2" => poset_reflection(&c, &["n0", "n2"]),
        "m3" | "bool-2" => poset_reflection(&c, &["a", "top"]),
        "delta1" => terminal_reflection(&c, c.object("V").unwrap()),
        "chain-2" => terminal_reflection(&c, c.object("n1").unwrap()),
        _ => Err(Error::UnknownFixture(name.into())),
    }
}

/// Every built-in reflection plus the identity reflections, by name.
pub fn all_reflections() -> Vec<(String, Reflection)> {
    let mut out = Vec::new();
    for &n in FIXTURE_NAMES {
        out.push((n.to_string(), reflection(n).expect("built-in fixture")));
        out.push((
            format!("{n}:identity"),
            Reflection::identity(Arc::new(category(n).expect("built-in fixture"))),
        ));
    }
    out
}

/// The `lattice-3-2` reflection with the unit component at `n1` broken:
/// `L n1` is redirected to `n0` while the unit still points at `n2`.
pub fn corrupted_lattice_reflection() -> Reflection {
    let r = reflection("lattice-3-2").expect("built-in fixture");
    let big = r.big().clone();
    let small = r.small().clone();
    let n0 = small.object("n0").unwrap();
    let mut obj = r.left().obj_table().to_vec();
    obj[big.object("n1").unwrap().0] = n0;
    // keep L a functor: n0 <= n1 <= n2 maps to n0 <= n0 <= n2
    let left = thin_functor(&big, &small, obj).expect("monotone");
    Reflection::new(left, r.right().clone(), r.unit_table().to_vec()).expect("shapes agree")
}

/// Functors on the reflexive-graph base used for Kan-extension checks.
pub fn delta1_functors() -> Vec<(String, FinFunctor)> {
    let d = Arc::new(delta1());
    let point = Arc::new(FinCategory::terminal());
    let v = d.object("V").unwrap();
    let e = d.object("E").unwrap();
    vec![
        ("delta1:identity".into(), FinFunctor::identity(d.clone())),
        (
            "delta1:to-point".into(),
            FinFunctor::to_terminal(d.clone(), point.clone()).unwrap(),
        ),
        (
            "delta1:vertex".into(),
            FinFunctor::new(point.clone(), d.clone(), vec![v], vec![d.id(v)]).unwrap(),
        ),
        (
            "delta1:edge".into(),
            FinFunctor::new(point, d.clone(), vec![e], vec![d.id(e)]).unwrap(),
        ),
    ]
}
