use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj};

/// A right-closed set of morphisms into `on`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sieve {
    base: Arc<FinCategory>,
    on: Obj,
    members: Vec<Mor>,
}

impl Sieve {
    pub fn new(base: Arc<FinCategory>, on: Obj, mut members: Vec<Mor>) -> Result<Self> {
        members.sort();
        members.dedup();
        for &u in &members {
            if base.cod(u) != on {
                return Err(Error::ShapeMismatch(format!(
                    "{} does not end at {}",
                    base.mor_name(u),
                    base.obj_name(on)
                )));
            }
            for &v in base.incoming(base.dom(u)) {
                if members.binary_search(&base.compose(u, v)).is_err() {
                    return Err(Error::ShapeMismatch(format!(
                        "not right-closed: {}.{} is missing",
                        base.mor_name(u),
                        base.mor_name(v)
                    )));
                }
            }
        }
        Ok(Sieve { base, on, members })
    }

    /// The least sieve containing `gens`.
    pub fn generated(base: Arc<FinCategory>, on: Obj, gens: &[Mor]) -> Result<Self> {
        let mut members: Vec<Mor> = gens
            .iter()
            .flat_map(|&u| base.incoming(base.dom(u)).iter().map(move |&v| (u, v)))
            .map(|(u, v)| base.compose(u, v))
            .collect();
        members.extend_from_slice(gens);
        Sieve::new(base, on, members)
    }

    pub fn on(&self) -> Obj {
        self.on
    }

    pub fn members(&self) -> &[Mor] {
        &self.members
    }

    pub fn contains(&self, u: Mor) -> bool {
        self.members.binary_search(&u).is_ok()
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }
}

/// Every sieve on `c`, sorted by member list.
pub fn sieves_on(base: &Arc<FinCategory>, c: Obj) -> Vec<Sieve> {
    let cat = &**base;
    let arrows: Vec<Mor> = cat.incoming(c).to_vec();
    let pos = |m: Mor| arrows.binary_search(&m).expect("arrow into c");
    // below[i]: all u_i . v; above[i]: all u_j with u_i in below[j].
    let below: Vec<Vec<usize>> = arrows
        .iter()
        .map(|&u| {
            let mut b: Vec<usize> = cat.incoming(cat.dom(u)).iter().map(|&v| pos(cat.compose(u, v))).collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let mut above = vec![Vec::new(); arrows.len()];
    for (j, b) in below.iter().enumerate() {
        for &i in b {
            above[i].push(j);
        }
    }
    let mut out = Vec::new();
    let mut state = vec![0u8; arrows.len()]; // 0 unknown, 1 in, 2 out
    fn rec(
        i: usize,
        state: &mut Vec<u8>,
        below: &[Vec<usize>],
        above: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == state.len() {
            out.push((0..state.len()).filter(|&k| state[k] == 1).collect());
            return;
        }
        if state[i] != 0 {
            rec(i + 1, state, below, above, out);
            return;
        }
        for (choice, closure) in [(2u8, &above[i]), (1u8, &below[i])] {
            if closure.iter().any(|&k| state[k] != 0 && state[k] != choice) {
                continue;
            }
            let changed: Vec<usize> = closure.iter().copied().filter(|&k| state[k] == 0).collect();
            for &k in &changed {
                state[k] = choice;
            }
            rec(i + 1, state, below, above, out);
            for &k in &changed {
                state[k] = 0;
            }
        }
    }
    rec(0, &mut state, &below, &above, &mut out);
    let mut sieves: Vec<Sieve> = out
        .into_iter()
        .map(|s| Sieve {
            base: base.clone(),
            on: c,
            members: s.into_iter().map(|k| arrows[k]).collect(),
        })
        .collect();
    sieves.sort_by(|a, b| a.members.cmp(&b.members));
    sieves
}
