use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{reverse_path, Graph, SpanningTree};
use crate::hamiltonian::{build_hamiltonian, eigenvalues, CMatrix};
use crate::torus::{Phase, Rational, TorusPoint, TorusPolynomial, UnitaryMonomial, WeightFunction};

pub trait Unit: Clone + PartialEq {
    fn unit_mul(&self, other: &Self) -> Self;
    fn unit_adjoint(&self) -> Self;
}

impl Unit for UnitaryMonomial {
    fn unit_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn unit_adjoint(&self) -> Self {
        self.adjoint()
    }
}

impl Unit for Phase {
    fn unit_mul(&self, other: &Self) -> Self {
        *self + *other
    }
    fn unit_adjoint(&self) -> Self {
        -*self
    }
}

/// Permutation matrix with a unit in each row: row `i` holds `entries[i]` in column `cols[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialMatrix<T> {
    pub cols: Vec<usize>,
    pub entries: Vec<T>,
}

impl<T: Unit> MonomialMatrix<T> {
    pub fn identity(dim: usize, one: T) -> Self {
        MonomialMatrix { cols: (0..dim).collect(), entries: vec![one; dim] }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (cols, entries) = self
            .cols
            .iter()
            .zip(&self.entries)
            .map(|(&c, a)| (other.cols[c], a.unit_mul(&other.entries[c])))
            .unzip();
        MonomialMatrix { cols, entries }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut cols = vec![0; n];
        let mut entries: Vec<Option<T>> = vec![None; n];
        for (i, (&c, a)) in self.cols.iter().zip(&self.entries).enumerate() {
            cols[c] = i;
            entries[c] = Some(a.unit_adjoint());
        }
        MonomialMatrix { cols, entries: entries.into_iter().map(|e| e.expect("permutation")).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        MonomialMatrix { cols: self.cols.clone(), entries: self.entries.iter().map(|a| a.unit_mul(s)).collect() }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> MonomialMatrix<U> {
        MonomialMatrix { cols: self.cols.clone(), entries: self.entries.iter().map(f).collect() }
    }

    /// `Some(s)` when `self = s · other` for a single unit `s`.
    pub fn ratio_to(&self, other: &Self) -> Option<T> {
        if self.cols != other.cols || self.entries.is_empty() {
            return None;
        }
        let s = self.entries[0].unit_mul(&other.entries[0].unit_adjoint());
        self.entries.iter().zip(&other.entries).all(|(a, b)| *a == b.unit_mul(&s)).then_some(s)
    }
}

impl MonomialMatrix<Phase> {
    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, (&c, a)) in self.cols.iter().zip(&self.entries).enumerate() {
            m[(i, c)] = a.to_complex();
        }
        m
    }
}

impl MonomialMatrix<UnitaryMonomial> {
    pub fn eval_exact(&self, t: &[Rational]) -> MonomialMatrix<Phase> {
        self.map(|m| m.eval_exact(t))
    }

    pub fn evaluate(&self, t: &TorusPoint) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, (&c, a)) in self.cols.iter().zip(&self.entries).enumerate() {
            m[(i, c)] = a.eval(t);
        }
        m
    }

    pub fn to_amatrix(&self, rank: usize) -> crate::hamiltonian::AMatrix {
        let mut m = crate::hamiltonian::AMatrix::zeros(self.dim(), rank);
        for (i, (&c, a)) in self.cols.iter().zip(&self.entries).enumerate() {
            m.set(i, c, TorusPolynomial::from_monomial(a));
        }
        m
    }
}

/// φ on vertices, with φ(root′) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugePotential {
    pub values: Vec<UnitaryMonomial>,
}

#[derive(Clone, Debug)]
pub struct GaugeMatrix {
    pub matrix: MonomialMatrix<UnitaryMonomial>,
    /// Raw weight of the source-tree path from the source root to the target root.
    pub pullback: UnitaryMonomial,
    pub source: SpanningTree,
    pub target: SpanningTree,
}

/// Gauge potential carrying the source re-expression of `wt` to the target tree.
pub fn gauge_potential(g: &Graph, wt: &WeightFunction, from: &SpanningTree, to: &SpanningTree) -> Result<GaugePotential> {
    wt.check_edges(g)?;
    let local = wt.reexpress(g, from);
    let mut values = vec![UnitaryMonomial::one(g.rank()); g.num_vertices()];
    for (v, parent) in to.bfs_order(g) {
        if let Some(oe) = parent {
            values[v] = local.get(oe) * &values[oe.source(g)];
        }
    }
    Ok(GaugePotential { values })
}

/// wt′(v→w) = φ(v)·wt(e)·φ(w)*, applied to the source re-expression.
pub fn regauged_weights(g: &Graph, wt: &WeightFunction, from: &SpanningTree, phi: &GaugePotential) -> WeightFunction {
    let local = wt.reexpress(g, from);
    let forward = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| &(&phi.values[e.from] * &local.forward()[i]) * &phi.values[e.to].adjoint())
        .collect();
    WeightFunction::from_forward(g.rank(), forward).expect("rank preserved")
}

pub fn regauge_matrix(g: &Graph, wt: &WeightFunction, from: &SpanningTree, to: &SpanningTree) -> Result<GaugeMatrix> {
    let phi = gauge_potential(g, wt, from, to)?;
    let (cols, entries) = to.order().iter().map(|&v| (from.position(v), phi.values[v].clone())).unzip();
    let pullback = wt.path_weight(&from.path_between(g, from.root(), to.root()));
    Ok(GaugeMatrix {
        matrix: MonomialMatrix { cols, entries },
        pullback,
        source: from.clone(),
        target: to.clone(),
    })
}

/// Weight of the loop v₀ →(τ) v₀′ →(τ′) v₀″ →(τ) v₀.
pub fn cocycle(g: &Graph, wt: &WeightFunction, t0: &SpanningTree, t1: &SpanningTree, t2: &SpanningTree) -> UnitaryMonomial {
    let mut path = t0.path_between(g, t0.root(), t1.root());
    path.extend(t1.path_between(g, t1.root(), t2.root()));
    path.extend(reverse_path(&t0.path_between(g, t0.root(), t2.root())));
    wt.path_weight(&path)
}

/// Abelian cocycle identity C(τ1,τ2,τ3)·C(τ0,τ1,τ3) = C(τ0,τ1,τ2)·C(τ0,τ2,τ3).
pub fn verify_cocycle_equation(g: &Graph, wt: &WeightFunction, t: [&SpanningTree; 4]) -> bool {
    let lhs = &cocycle(g, wt, t[1], t[2], t[3]) * &cocycle(g, wt, t[0], t[1], t[3]);
    let rhs = &cocycle(g, wt, t[0], t[1], t[2]) * &cocycle(g, wt, t[0], t[2], t[3]);
    lhs == rhs
}

/// Exact check that M·H_τ·M* = H_τ′ term by term.
pub fn conjugation_identity_holds(g: &Graph, wt: &WeightFunction, from: &SpanningTree, to: &SpanningTree) -> Result<bool> {
    let m = regauge_matrix(g, wt, from, to)?;
    let h = build_hamiltonian(g, wt, from)?;
    let h2 = build_hamiltonian(g, wt, to)?;
    let k = g.num_vertices();
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (&m.matrix.entries[i], &m.matrix.entries[j]);
            let mut terms: Vec<UnitaryMonomial> = h
                .entry_terms(m.matrix.cols[i], m.matrix.cols[j])
                .iter()
                .map(|x| &(a * x) * &b.adjoint())
                .collect();
            terms.sort();
            if terms != h2.entry_terms(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// M_{τ′→τ″}·M_{τ→τ′} = C(τ,τ′,τ″)·M_{τ→τ″}, each re-gauging from its own source re-expression.
pub fn composition_identity_holds(g: &Graph, wt: &WeightFunction, t: [&SpanningTree; 3]) -> Result<bool> {
    let m01 = regauge_matrix(g, wt, t[0], t[1])?;
    let m12 = regauge_matrix(g, wt, t[1], t[2])?;
    let m02 = regauge_matrix(g, wt, t[0], t[2])?;
    let c = cocycle(g, wt, t[0], t[1], t[2]);
    Ok(m12.matrix.mul(&m01.matrix) == m02.matrix.scale(&c))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CocycleCheckReport {
    pub trials: usize,
    pub seed: u64,
    pub conjugation_passed: usize,
    pub composition_passed: usize,
    pub cocycle_passed: usize,
    pub tree_compatible_passed: usize,
    pub numeric_passed: usize,
    pub spectrum_passed: usize,
    pub max_numeric_error: f64,
}

impl CocycleCheckReport {
    pub fn all_passed(&self) -> bool {
        [
            self.conjugation_passed,
            self.composition_passed,
            self.cocycle_passed,
            self.tree_compatible_passed,
            self.numeric_passed,
            self.spectrum_passed,
        ]
            .iter()
            .all(|&n| n == self.trials)
    }
}

/// Randomized verification of the groupoid identities on random gauging data.
pub fn cocycle_check(g: &Graph, wt: &WeightFunction, trials: usize, seed: u64) -> Result<CocycleCheckReport> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CocycleCheckReport { trials, seed, ..Default::default() };
    for _ in 0..trials {
        let t: Vec<SpanningTree> = (0..4).map(|_| SpanningTree::random(g, &mut rng)).collect();
        if conjugation_identity_holds(g, wt, &t[0], &t[1])? {
            rep.conjugation_passed += 1;
        }
        if composition_identity_holds(g, wt, [&t[0], &t[1], &t[2]])? {
            rep.composition_passed += 1;
        }
        if verify_cocycle_equation(g, wt, [&t[0], &t[1], &t[2], &t[3]]) {
            rep.cocycle_passed += 1;
        }
        let phi = gauge_potential(g, wt, &t[0], &t[1])?;
        if regauged_weights(g, wt, &t[0], &phi).is_compatible(&t[1]) {
            rep.tree_compatible_passed += 1;
        }
        let point = TorusPoint::from_turns((0..g.rank()).map(|_| rng.gen::<f64>()).collect());
        let m = regauge_matrix(g, wt, &t[0], &t[1])?.matrix.evaluate(&point);
        let h0 = build_hamiltonian(g, wt, &t[0])?.evaluate(&point);
        let h1 = build_hamiltonian(g, wt, &t[1])?.evaluate(&point);
        let err = (&m * &h0 * m.adjoint() - &h1).iter().map(|z: &Complex64| z.norm()).fold(0.0, f64::max);
        rep.max_numeric_error = rep.max_numeric_error.max(err);
        if err <= 1e-9 {
            rep.numeric_passed += 1;
        }
        let (e0, e1) = (eigenvalues(&h0)?, eigenvalues(&h1)?);
        if e0.iter().zip(&e1).all(|(a, b)| (a - b).abs() <= 1e-9) {
            rep.spectrum_passed += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::gyroid;

    #[test]
    fn self_regauge_is_identity() {
        let wg = gyroid();
        let m = regauge_matrix(&wg.graph, &wg.weights, &wg.tree, &wg.tree).unwrap();
        assert_eq!(m.matrix, MonomialMatrix::identity(4, UnitaryMonomial::one(3)));
        assert!(cocycle(&wg.graph, &wg.weights, &wg.tree, &wg.tree, &wg.tree).is_one());
    }

    #[test]
    fn monomial_matrix_algebra() {
        let a = MonomialMatrix { cols: vec![1, 2, 0], entries: vec![Phase::from_ratio(1, 4), Phase::zero(), Phase::from_ratio(1, 2)] };
        let id = MonomialMatrix::identity(3, Phase::zero());
        assert_eq!(a.mul(&a.adjoint()), id);
        assert_eq!(a.mul(&id), a);
        let d = a.to_dense();
        assert!((&d * d.adjoint() - CMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn cocycle_check_on_gyroid() {
        let wg = gyroid();
        let r = cocycle_check(&wg.graph, &wg.weights, 20, 7).unwrap();
        assert!(r.all_passed(), "{r:?}");
    }
}
