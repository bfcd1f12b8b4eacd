use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// Finite group given by its multiplication table; element 0 need not be the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSignature {
    pub order: usize,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelian: bool,
    pub element_orders: BTreeMap<usize, usize>,
    pub label: String,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::contract("multiplication table has no identity"))?;
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).ok_or_else(|| Error::contract("element without inverse")))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup { table, identity, inverse })
    }

    /// Breadth-first closure of `gens` under `mul`, identity first.
    pub fn closure<T, F>(gens: &[T], one: T, mul: F, cap: usize) -> Result<(Vec<T>, FiniteGroup)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let (elems, index) = Self::closure_elements(gens, one, &mul, cap)?;
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect::<Vec<Vec<usize>>>();
        Ok((elems, FiniteGroup::from_table(table)?))
    }

    pub(crate) fn closure_elements<T, F>(gens: &[T], one: T, mul: &F, cap: usize) -> Result<(Vec<T>, HashMap<T, usize>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![one.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(one, 0)]);
        let mut frontier = 0;
        while frontier < elems.len() {
            let x = elems[frontier].clone();
            frontier += 1;
            for g in gens {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    if elems.len() == cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        Ok((elems, index))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.subset_is_abelian(&(0..self.order()).collect::<Vec<_>>())
    }

    pub fn subset_is_abelian(&self, s: &[usize]) -> bool {
        s.iter().all(|&a| s.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.order()).collect();
        all.iter().copied().filter(|&z| all.iter().all(|&a| self.mul(z, a) == self.mul(a, z))).collect()
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut starts: Vec<usize> = vec![self.identity];
        starts.extend((0..n).filter(|&a| a != self.identity));
        for a in starts {
            if class_of[a] != usize::MAX {
                continue;
            }
            let c: BTreeSet<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            for &x in &c {
                class_of[x] = classes.len();
            }
            classes.push(c.into_iter().collect());
        }
        classes
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let comms: BTreeSet<usize> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))).collect();
        self.subgroup(&comms.into_iter().collect::<Vec<_>>())
    }

    /// Restriction of the table to a subgroup, re-indexed in the order of `elems`.
    pub fn restrict(&self, elems: &[usize]) -> Result<FiniteGroup> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|&a| {
                elems.iter().map(|&b| pos.get(&self.mul(a, b)).copied().ok_or_else(|| Error::contract("subset is not closed"))).collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        FiniteGroup::from_table(table)
    }

    /// Quotient by a normal subgroup.
    pub fn quotient(&self, normal: &[usize]) -> Result<FiniteGroup> {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if coset_of[a] == usize::MAX {
                for &h in normal {
                    coset_of[self.mul(a, h)] = reps.len();
                }
                reps.push(a);
            }
        }
        let table = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect()).collect();
        FiniteGroup::from_table(table)
    }

    /// A subgroup meeting `normal` trivially with complementary order, if one is 2-generated.
    pub fn find_complement(&self, normal: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let target = n / normal.len();
        let nset: BTreeSet<usize> = normal.iter().copied().collect();
        let candidates: Vec<usize> = (0..n).filter(|a| !nset.contains(a) || *a == self.identity).collect();
        for (i, &a) in candidates.iter().enumerate() {
            for &b in &candidates[i..] {
                let h = self.subgroup(&[a, b]);
                if h.len() == target && h.iter().filter(|x| nset.contains(x)).count() == 1 {
                    return Some(h);
                }
            }
        }
        None
    }

    pub fn element_order_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.order() {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m
    }

    pub fn signature(&self) -> GroupSignature {
        let center_order = self.center().len();
        let derived_order = self.derived_subgroup().len();
        let abelian = self.is_abelian();
        let element_orders = self.element_order_counts();
        let label = self.identify();
        GroupSignature { order: self.order(), center_order, derived_order, abelian, element_orders, label }
    }

    fn abelian_invariants(&self) -> Vec<usize> {
        let n = self.order();
        let counts = self.element_order_counts();
        let divides = |m: usize| counts.iter().filter(|(&o, _)| m % o == 0).map(|(_, &c)| c).sum::<usize>();
        let mut factors_by_prime: Vec<Vec<usize>> = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                // logs[k] = log_p |{x : x^{p^k} = 1}|
                let logs: Vec<u32> = (0..=e).map(|k| (divides(p.pow(k)) as f64).log(p as f64).round() as u32).collect();
                let mut exps = Vec::new();
                for k in 1..=e as usize {
                    let at_least_k = logs[k] - logs[k - 1];
                    let at_least_next = if k < e as usize { logs[k + 1] - logs[k] } else { 0 };
                    for _ in 0..(at_least_k - at_least_next) {
                        exps.push(p.pow(k as u32));
                    }
                }
                exps.sort_unstable_by(|a, b| b.cmp(a));
                factors_by_prime.push(exps);
            }
            p += 1;
        }
        let len = factors_by_prime.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut inv: Vec<usize> = (0..len).map(|i| factors_by_prime.iter().map(|f| f.get(i).copied().unwrap_or(1)).product()).collect();
        inv.reverse();
        inv
    }

    /// Name attached when the structural signature matches a known small group.
    pub fn identify(&self) -> String {
        let n = self.order();
        if n == 1 {
            return "trivial".into();
        }
        let counts = self.element_order_counts();
        if self.is_abelian() {
            let inv = self.abelian_invariants();
            if inv == [2, 2] {
                return "Z/2×Z/2".into();
            }
            return inv.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join("×");
        }
        let z = self.center();
        let involutions = counts.get(&2).copied().unwrap_or(0);
        let has_order = |k: usize| counts.contains_key(&k);
        let quotient_label = || self.quotient(&z).map(|q| q.identify()).unwrap_or_default();
        match n {
            6 => "S3".into(),
            8 if counts.get(&4).copied().unwrap_or(0) == 6 => "Q8".into(),
            8 => "D4".into(),
            12 if z.len() == 1 && involutions == 3 => "A4".into(),
            12 if involutions == 1 => "Dic3".into(),
            12 => "D6".into(),
            24 if z.len() == 1 && involutions == 9 && has_order(4) => "S4".into(),
            24 if z.len() == 2 && involutions == 1 && quotient_label() == "A4" => "2·A4".into(),
            _ => {
                for &c in z.iter().filter(|&&c| self.element_order(c) == 2) {
                    let pair = self.subgroup(&[c]);
                    if self.find_complement(&pair).is_some() {
                        return format!("Z/2×{}", self.quotient(&pair).map(|q| q.identify()).unwrap_or_default());
                    }
                }
                if z.len() > 1 {
                    let zl = self.restrict(&z).map(|g| g.identify()).unwrap_or_default();
                    let wrap = |l: String| if l.contains('×') { format!("({l})") } else { l };
                    format!("{}·{}", wrap(zl), wrap(quotient_label()))
                } else {
                    format!("group of order {n}")
                }
            }
        }
    }
}
