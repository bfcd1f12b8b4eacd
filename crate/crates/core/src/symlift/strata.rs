use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::fixed::{fixed_set_of, Component};
use super::lift::ActionTable;
use crate::lattice;

/// Affine subtorus whose generic points have exactly the stabilizer `subgroup`.
#[derive(Clone, Debug, Serialize)]
pub struct Stratum {
    pub subgroup: Vec<usize>,
    pub order: usize,
    pub abelian: bool,
    pub label: String,
    pub component: Component,
}

/// Elements whose lifted action fixes every point of the component.
fn generic_stabilizer(table: &ActionTable, k: &Component) -> Vec<usize> {
    (0..table.len())
        .filter(|&i| {
            let a = &table.actions[i];
            a.fixes(&k.base) && k.directions.iter().all(|d| lattice::mul_vec(&a.matrix, d) == *d)
        })
        .collect()
}

/// All strata with non-trivial stabilizer, found by growing subgroups until their fixed components stabilize.
pub fn strata_census(table: &ActionTable) -> Vec<Stratum> {
    let g = &table.group;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for x in 0..table.len() {
        if x != g.identity() {
            let h = g.subgroup(&[x]);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let mut strata: Vec<Stratum> = Vec::new();
    while let Some(h) = queue.pop_front() {
        let acts: Vec<_> = h.iter().map(|&i| &table.actions[i]).collect();
        for k in fixed_set_of(&acts).components {
            let stab = generic_stabilizer(table, &k);
            if !strata.iter().any(|s| s.subgroup == stab && s.component.same_as(&k)) {
                let sub = g.restrict(&stab).expect("stabilizer is a subgroup");
                strata.push(Stratum {
                    order: stab.len(),
                    abelian: sub.is_abelian(),
                    label: sub.identify(),
                    subgroup: stab.clone(),
                    component: k.clone(),
                });
            }
            let members: BTreeSet<usize> = stab.iter().copied().collect();
            for x in 0..table.len() {
                if !members.contains(&x) {
                    let mut gens = stab.clone();
                    gens.push(x);
                    let bigger = g.subgroup(&gens);
                    if seen.insert(bigger.clone()) {
                        queue.push_back(bigger);
                    }
                }
            }
        }
    }
    strata.sort_by(|a, b| {
        b.order.cmp(&a.order).then(a.component.dim().cmp(&b.component.dim())).then(a.component.base.cmp(&b.component.base))
    });
    strata
}
