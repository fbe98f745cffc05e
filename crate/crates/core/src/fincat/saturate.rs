//! Closing a finite presentation (generators + relations) into a full
//! composition table by coset-style enumeration.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{identity_name, FinCategory};
use crate::error::{Error, Result, Violation};

pub const DEFAULT_CLOSE_BOUND: usize = 512;

/// A category presentation. Words list generator indices in the order
/// they are applied, so the word `[f, g]` denotes `g . f`.
#[derive(Debug, Clone, Default)]
pub struct Presentation {
    pub objects: Vec<String>,
    /// `(name, dom, cod)` with object indices.
    pub generators: Vec<(String, usize, usize)>,
    /// `(start object, lhs, rhs)`.
    pub relations: Vec<(usize, Vec<usize>, Vec<usize>)>,
}

struct Node {
    dom: usize,
    cod: usize,
    succ: HashMap<usize, usize>,
    parent: Option<(usize, usize)>,
}

struct Enumerator<'a> {
    p: &'a Presentation,
    nodes: Vec<Node>,
    uf: Vec<usize>,
    alive: usize,
    bound: usize,
    gens_from: Vec<Vec<usize>>,
}

impl Enumerator<'_> {
    fn find(&mut self, mut x: usize) -> usize {
        while self.uf[x] != x {
            self.uf[x] = self.uf[self.uf[x]];
            x = self.uf[x];
        }
        x
    }

    fn new_node(&mut self, dom: usize, cod: usize, parent: Option<(usize, usize)>) -> Result<usize> {
        self.alive += 1;
        // dead nodes accumulate too; cap them so non-terminating presentations still stop
        if self.alive > self.bound || self.nodes.len() > self.bound.saturating_mul(64) {
            return Err(Error::SaturationBound { bound: self.bound });
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            dom,
            cod,
            succ: HashMap::new(),
            parent,
        });
        self.uf.push(id);
        Ok(id)
    }

    fn step(&mut self, n: usize, g: usize) -> Result<usize> {
        let n = self.find(n);
        if let Some(&t) = self.nodes[n].succ.get(&g) {
            return Ok(self.find(t));
        }
        let (dom, cod) = (self.nodes[n].dom, self.p.generators[g].2);
        let t = self.new_node(dom, cod, Some((n, g)))?;
        self.nodes[n].succ.insert(g, t);
        Ok(t)
    }

    fn trace(&mut self, n: usize, word: &[usize]) -> Result<usize> {
        let mut cur = self.find(n);
        for &g in word {
            cur = self.step(cur, g)?;
        }
        Ok(cur)
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::from([(a, b)]);
        while let Some((x, y)) = queue.pop_front() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, drop) = if x < y { (x, y) } else { (y, x) };
            self.uf[drop] = keep;
            self.alive -= 1;
            let moved: Vec<(usize, usize)> = self.nodes[drop].succ.drain().collect();
            for (g, t) in moved {
                match self.nodes[keep].succ.get(&g) {
                    Some(&t2) => queue.push_back((t, t2)),
                    None => {
                        self.nodes[keep].succ.insert(g, t);
                    }
                }
            }
        }
    }

    fn word(&mut self, n: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = self.find(n);
        while let Some((p, g)) = self.nodes[cur].parent {
            w.push(g);
            cur = self.find(p);
        }
        w.reverse();
        w
    }
}

/// Saturates a presentation into a finite category, failing with
/// [`Error::SaturationBound`] if more than `bound` morphisms are live.
///
/// Morphisms equal to a single generator keep that generator's name
/// (the least one if several coincide); other composites are named by
/// joining their representative word with `_`, outermost first.
pub fn saturate(p: &Presentation, bound: usize) -> Result<FinCategory> {
    let n_obj = p.objects.len();
    if n_obj == 0 {
        return Err(Error::InvalidCategory(vec![Violation::Empty]));
    }
    for (name, d, c) in &p.generators {
        if *d >= n_obj || *c >= n_obj {
            return Err(Error::InvalidCategory(vec![Violation::DanglingReference {
                name: name.clone(),
                context: "generator endpoint".into(),
            }]));
        }
    }
    let mut gens_from = vec![Vec::new(); n_obj];
    for (i, g) in p.generators.iter().enumerate() {
        gens_from[g.1].push(i);
    }
    for (start, lhs, rhs) in &p.relations {
        let end = |w: &[usize]| -> Option<usize> {
            let mut cur = *start;
            for &g in w {
                if p.generators[g].1 != cur {
                    return None;
                }
                cur = p.generators[g].2;
            }
            Some(cur)
        };
        match (end(lhs), end(rhs)) {
            (Some(a), Some(b)) if a == b => {}
            _ => {
                return Err(Error::InvalidCategory(vec![Violation::Other(
                    "relation sides are not parallel paths".into(),
                )]))
            }
        }
    }

    let mut e = Enumerator {
        p,
        nodes: Vec::new(),
        uf: Vec::new(),
        alive: 0,
        bound,
        gens_from,
    };
    for o in 0..n_obj {
        e.new_node(o, o, None)?;
    }
    let mut i = 0;
    while i < e.nodes.len() {
        let n = i;
        i += 1;
        if e.find(n) != n {
            continue;
        }
        let cod = e.nodes[n].cod;
        for (start, lhs, rhs) in &p.relations {
            if *start != cod {
                continue;
            }
            let a = e.trace(n, lhs)?;
            let b = e.trace(n, rhs)?;
            e.coincide(a, b);
            if e.find(n) != n {
                break;
            }
        }
        if e.find(n) != n {
            continue;
        }
        let gens = e.gens_from[cod].clone();
        for g in gens {
            e.step(n, g)?;
        }
    }

    let live: Vec<usize> = (0..e.nodes.len()).filter(|&n| e.find(n) == n).collect();
    let pos: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let words: Vec<Vec<usize>> = live.iter().map(|&n| e.word(n)).collect();

    // name each live node
    let mut names: Vec<Option<String>> = vec![None; live.len()];
    for o in 0..n_obj {
        let r = e.find(o);
        names[pos[&r]] = Some(identity_name(&p.objects[o]));
    }
    let mut gen_order: Vec<usize> = (0..p.generators.len()).collect();
    gen_order.sort_by(|&a, &b| p.generators[a].0.cmp(&p.generators[b].0));
    for g in gen_order {
        let t = e.trace(p.generators[g].1, &[g])?;
        let slot = &mut names[pos[&t]];
        if slot.is_none() {
            *slot = Some(p.generators[g].0.clone());
        }
    }
    let mut used: HashSet<String> = names.iter().flatten().cloned().collect();
    for (k, w) in words.iter().enumerate() {
        if names[k].is_some() {
            continue;
        }
        let base: String = w
            .iter()
            .rev()
            .map(|&g| p.generators[g].0.as_str())
            .collect::<Vec<_>>()
            .join("_");
        let mut name = base.clone();
        let mut suffix = 2;
        while used.contains(&name) {
            name = format!("{base}_{suffix}");
            suffix += 1;
        }
        used.insert(name.clone());
        names[k] = Some(name);
    }

    // composition by tracing the word of g from f
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, &f) in live.iter().enumerate() {
        for (gi, &g) in live.iter().enumerate() {
            if e.nodes[f].cod == e.nodes[g].dom {
                let t = e.trace(f, &words[gi])?;
                table.insert((gi, fi), pos[&t]);
            }
        }
    }
    if e.alive > bound {
        return Err(Error::SaturationBound { bound });
    }
    let morphisms = live
        .iter()
        .enumerate()
        .map(|(k, &n)| (names[k].clone().unwrap(), e.nodes[n].dom, e.nodes[n].cod))
        .collect();
    let identity = (0..n_obj).map(|o| pos[&e.find(o)]).collect();
    let cat = FinCategory::from_parts(p.objects.clone(), morphisms, identity, |g, f| table[&(g, f)]);
    let v = cat.axiom_violations();
    if !v.is_empty() {
        return Err(Error::InvalidCategory(v));
    }
    Ok(cat)
}
