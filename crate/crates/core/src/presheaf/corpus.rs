//! Deterministic enumeration of small presheaves up to isomorphism.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{is_isomorphic, yoneda, Presheaf};
use crate::budget::Budget;
use crate::error::Result;
use crate::fincat::{FinCategory, Mor};
use crate::finset::{FinFn, FinSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusOptions {
    /// Largest carrier allowed at any object.
    pub bound: usize,
    pub representables: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            bound: 2,
            representables: true,
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

/// The lexicographically least encoding (sizes, then every action table)
/// over all relabellings of the carriers. Two presheaves on the same base
/// are isomorphic iff their codes agree.
pub fn canonical_code(x: &Presheaf) -> Vec<usize> {
    let cat = &**x.base();
    let perms: Vec<Vec<Vec<usize>>> = cat.objects().map(|o| permutations(x.size(o))).collect();
    let mut choice = vec![0usize; perms.len()];
    let mut best: Option<Vec<usize>> = None;
    loop {
        // sigma maps old index to new index
        let sigma: Vec<&Vec<usize>> = choice.iter().enumerate().map(|(o, &i)| &perms[o][i]).collect();
        let inv: Vec<Vec<usize>> = sigma
            .iter()
            .map(|s| {
                let mut v = vec![0; s.len()];
                for (old, &new) in s.iter().enumerate() {
                    v[new] = old;
                }
                v
            })
            .collect();
        let mut code = x.sizes();
        for f in cat.morphisms() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            for ny in 0..x.size(b) {
                code.push(sigma[a.0][x.act(f).apply(inv[b.0][ny])]);
            }
        }
        if best.as_ref().map_or(true, |b| code < *b) {
            best = Some(code);
        }
        // odometer
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            break;
        }
    }
    best.unwrap_or_default()
}

struct Enum<'a> {
    cat: &'a FinCategory,
    sizes: Vec<usize>,
    order: Vec<Mor>,
    tables: Vec<Option<Vec<usize>>>,
    out: Vec<Vec<Vec<usize>>>,
}

impl Enum<'_> {
    // act(g.f) = act(g) then act(f), for every triple touching `m` with all
    // three assigned
    fn consistent(&self, m: Mor) -> bool {
        let cat = self.cat;
        let check = |g: Mor, f: Mor| -> bool {
            let h = cat.compose(g, f);
            match (&self.tables[g.0], &self.tables[f.0], &self.tables[h.0]) {
                (Some(tg), Some(tf), Some(th)) => th.iter().enumerate().all(|(z, &v)| tf[tg[z]] == v),
                _ => true,
            }
        };
        for f in cat.morphisms() {
            for &g in cat.outgoing(cat.cod(f)) {
                let h = cat.compose(g, f);
                if (g == m || f == m || h == m) && !check(g, f) {
                    return false;
                }
            }
        }
        true
    }

    fn forced(&self, m: Mor) -> Option<Vec<usize>> {
        let cat = self.cat;
        for f in cat.outgoing(cat.dom(m)) {
            for &g in cat.outgoing(cat.cod(*f)) {
                if cat.compose(g, *f) != m || cat.is_identity(g) || cat.is_identity(*f) {
                    continue;
                }
                if let (Some(tg), Some(tf)) = (&self.tables[g.0], &self.tables[f.0]) {
                    return Some(tg.iter().map(|&z| tf[z]).collect());
                }
            }
        }
        None
    }

    fn run(&mut self, k: usize, meter: &mut crate::budget::Meter) -> Result<()> {
        if k == self.order.len() {
            self.out.push(self.tables.iter().map(|t| t.clone().unwrap()).collect());
            return Ok(());
        }
        let m = self.order[k];
        meter.tick()?;
        let candidates: Vec<Vec<usize>> = match self.forced(m) {
            Some(t) => vec![t],
            None => {
                let (n, dom) = (self.sizes[self.cat.cod(m).0], self.sizes[self.cat.dom(m).0]);
                all_functions(n, dom)
            }
        };
        for t in candidates {
            self.tables[m.0] = Some(t);
            if self.consistent(m) {
                self.run(k + 1, meter)?;
            }
            self.tables[m.0] = None;
        }
        Ok(())
    }
}

fn all_functions(n: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..cod).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every presheaf with all carriers of size at most `bound`, one per
/// isomorphism class and sorted by canonical code, followed by the
/// representables not already present.
pub fn presheaf_corpus(base: &Arc<FinCategory>, opts: CorpusOptions, budget: &Budget) -> Result<Vec<Presheaf>> {
    let cat = &**base;
    let mut meter = budget.meter();
    // irreducible morphisms first so that composites are forced
    let mut order: Vec<Mor> = cat.morphisms().filter(|&m| !cat.is_identity(m)).collect();
    let decompositions = |m: Mor| {
        cat.outgoing(cat.dom(m))
            .iter()
            .flat_map(|&f| cat.outgoing(cat.cod(f)).iter().map(move |&g| (g, f)))
            .filter(|&(g, f)| !cat.is_identity(g) && !cat.is_identity(f) && cat.compose(g, f) == m)
            .count()
    };
    order.sort_by_key(|&m| (decompositions(m), m));
    let mut classes: BTreeMap<Vec<usize>, Presheaf> = BTreeMap::new();
    let n = cat.num_objects();
    let mut sizes = vec![0usize; n];
    loop {
        let mut tables = vec![None; cat.num_morphisms()];
        for o in cat.objects() {
            tables[cat.id(o).0] = Some((0..sizes[o.0]).collect());
        }
        let mut e = Enum {
            cat,
            sizes: sizes.clone(),
            order: order.clone(),
            tables,
            out: Vec::new(),
        };
        e.run(0, &mut meter)?;
        for t in e.out {
            let sets = sizes.iter().map(|&s| FinSet::numbered("e", s)).collect();
            let act = cat
                .morphisms()
                .map(|m| FinFn::from_vec(t[m.0].clone(), sizes[cat.dom(m).0]))
                .collect();
            let p = Presheaf::new(base.clone(), sets, act)?;
            let code = canonical_code(&p);
            classes.entry(code).or_insert(p);
        }
        let mut k = 0;
        while k < n {
            sizes[k] += 1;
            if sizes[k] <= opts.bound {
                break;
            }
            sizes[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    let mut corpus: Vec<Presheaf> = classes
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    if opts.representables {
        for c in cat.objects() {
            let y = yoneda(base, c);
            let mut present = false;
            for p in &corpus {
                if is_isomorphic(p, &y, budget)? {
                    present = true;
                    break;
                }
            }
            if !present {
                corpus.push(y);
            }
        }
    }
    Ok(corpus)
}
