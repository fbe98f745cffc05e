//! Backtracking enumeration of natural transformations with constraint
//! propagation along the presheaf actions.

use std::ops::ControlFlow;

use super::{same_base, Presheaf, PresheafMap};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Obj};

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NatOptions {
    /// Only componentwise injective maps; with equal sizes this is an
    /// isomorphism search.
    pub injective: bool,
}

struct Search<'a> {
    cat: &'a FinCategory,
    x: &'a Presheaf,
    y: &'a Presheaf,
    opts: NatOptions,
    order: Vec<(Obj, usize)>,
    values: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(Obj, usize)>,
    meter: Meter,
}

impl Search<'_> {
    /// Sets `alpha(d, x) = v` and everything it forces; on conflict the
    /// trail still records every assignment made so the caller can undo.
    fn assign(&mut self, d: Obj, x: usize, v: usize) -> bool {
        let mut stack = vec![(d, x, v)];
        while let Some((d, x, v)) = stack.pop() {
            let cur = self.values[d.0][x];
            if cur != UNSET {
                if cur != v {
                    return false;
                }
                continue;
            }
            if self.opts.injective {
                if self.used[d.0][v] {
                    return false;
                }
                self.used[d.0][v] = true;
            }
            self.values[d.0][x] = v;
            self.trail.push((d, x));
            for &f in self.cat.incoming(d) {
                if self.cat.is_identity(f) {
                    continue;
                }
                let c = self.cat.dom(f);
                stack.push((c, self.x.act(f).apply(x), self.y.act(f).apply(v)));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (d, x) = self.trail.pop().unwrap();
            if self.opts.injective {
                let v = self.values[d.0][x];
                self.used[d.0][v] = false;
            }
            self.values[d.0][x] = UNSET;
        }
    }

    fn run<F>(&mut self, pos: usize, visit: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
    {
        let mut pos = pos;
        while pos < self.order.len() && self.values[self.order[pos].0 .0][self.order[pos].1] != UNSET {
            pos += 1;
        }
        if pos == self.order.len() {
            self.meter.tick()?;
            return Ok(visit(&self.values));
        }
        let (d, x) = self.order[pos];
        for v in 0..self.y.size(d) {
            self.meter.tick()?;
            let mark = self.trail.len();
            if self.assign(d, x, v) && self.run(pos + 1, visit)?.is_break() {
                self.undo(mark);
                return Ok(ControlFlow::Break(()));
            }
            self.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` with the component tables of every natural transformation
/// `X => Y`, in an unspecified order. `visit` may stop the search early.
pub fn for_each_nat<F>(
    x: &Presheaf,
    y: &Presheaf,
    opts: NatOptions,
    budget: &Budget,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    if !same_base(x.base(), y.base()) {
        return Err(Error::ShapeMismatch("presheaves live on different bases".into()));
    }
    let cat = &**x.base();
    if opts.injective && cat.objects().any(|o| x.size(o) > y.size(o)) {
        return Ok(());
    }
    // Elements at objects with many incoming arrows force the most values.
    let mut objs: Vec<Obj> = cat.objects().collect();
    objs.sort_by_key(|&o| (std::cmp::Reverse(cat.incoming(o).len()), o));
    let order = objs
        .iter()
        .flat_map(|&o| (0..x.size(o)).map(move |e| (o, e)))
        .collect();
    let mut search = Search {
        cat,
        x,
        y,
        opts,
        order,
        values: cat.objects().map(|o| vec![UNSET; x.size(o)]).collect(),
        used: cat.objects().map(|o| vec![false; y.size(o)]).collect(),
        trail: Vec::new(),
        meter: budget.meter(),
    };
    let _ = search.run(0, &mut visit)?;
    Ok(())
}

/// All natural transformations `X => Y`, sorted by their flattened tables.
pub fn nat_transformations(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Vec<PresheafMap>> {
    let mut tables = Vec::new();
    for_each_nat(x, y, NatOptions::default(), budget, |t| {
        tables.push(t.to_vec());
        ControlFlow::Continue(())
    })?;
    tables.sort();
    Ok(tables
        .into_iter()
        .map(|t| PresheafMap::from_tables(x, y, t))
        .collect())
}

pub fn count_nat_transformations(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<usize> {
    let mut n = 0;
    for_each_nat(x, y, NatOptions::default(), budget, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// Some isomorphism `X => Y`, if one exists.
pub fn find_isomorphism(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Option<PresheafMap>> {
    if !same_base(x.base(), y.base()) {
        return Err(Error::ShapeMismatch("presheaves live on different bases".into()));
    }
    if x.sizes() != y.sizes() {
        return Ok(None);
    }
    let mut found = None;
    for_each_nat(x, y, NatOptions { injective: true }, budget, |t| {
        found = Some(t.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found.map(|t| PresheafMap::from_tables(x, y, t)))
}

pub fn is_isomorphic(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<bool> {
    Ok(find_isomorphism(x, y, budget)?.is_some())
}
