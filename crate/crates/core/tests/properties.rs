use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wirenet::builtin::builtin;
use wirenet::graph::{enumerate_automorphisms, loop_basis, push_forward, AutomorphismOptions, Edge, Graph, SpanningTree};
use wirenet::hamiltonian::{build_hamiltonian, eigenvalues, CMatrix};
use wirenet::regauge::{
    composition_identity_holds, conjugation_identity_holds, gauge_potential, regauge_matrix, regauged_weights, verify_cocycle_equation,
};
use wirenet::repdecomp::projective_rep_for;
use wirenet::symlift::{fixed_set, group_action_table, ActionTable};
use wirenet::torus::{Phase, Rational, TorusPoint, TorusPolynomial, UnitaryMonomial, WeightFunction};
use wirenet::WeightedGraph;

fn monomial_strategy(rank: usize) -> impl Strategy<Value = UnitaryMonomial> {
    (0i64..24, prop::collection::vec(-3i64..=3, rank)).prop_map(|(p, exp)| UnitaryMonomial::new(Phase::from_ratio(p, 24), exp))
}

fn poly_strategy(rank: usize) -> impl Strategy<Value = TorusPolynomial> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, rank), -2.0f64..2.0, -2.0f64..2.0), 0..5).prop_map(move |terms| {
        TorusPolynomial::from_terms(rank, terms.into_iter().map(|(e, re, im)| (e, Complex64::new(re, im)))).unwrap()
    })
}

fn turns_strategy(rank: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, rank)
}

fn rational_strategy(rank: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..60, 1i64..13), rank).prop_map(|v| v.into_iter().map(|(p, q)| Rational::new(p % q, q)).collect())
}

/// Connected multigraph with `b` independent loops and arbitrary unitary weights.
fn random_weighted_graph(seed: u64) -> (Graph, WeightFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=5);
    let b = rng.gen_range(1..=4);
    let vertices: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for v in 1..k {
        let p = rng.gen_range(0..v);
        let (from, to) = if rng.gen_bool(0.5) { (p, v) } else { (v, p) };
        edges.push(Edge { id: format!("t{v}"), from, to });
    }
    for j in 0..b {
        edges.push(Edge { id: format!("x{j}"), from: rng.gen_range(0..k), to: rng.gen_range(0..k) });
    }
    let g = Graph::new("random", b, vertices, edges).unwrap();
    let forward = (0..g.num_edges())
        .map(|_| UnitaryMonomial::new(Phase::from_ratio(rng.gen_range(0..12), 12), (0..b).map(|_| rng.gen_range(-2..=2)).collect()))
        .collect();
    (g, WeightFunction::from_forward(b, forward).unwrap())
}

fn random_trees(g: &Graph, seed: u64, n: usize) -> Vec<SpanningTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    (0..n).map(|_| SpanningTree::random(g, &mut rng)).collect()
}

fn spectrum(h: &CMatrix) -> Vec<f64> {
    eigenvalues(h).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

const NAMES: [&str; 4] = ["gyroid", "diamond", "honeycomb", "primitive"];

fn tables() -> &'static Vec<(WeightedGraph, ActionTable)> {
    static CELL: OnceLock<Vec<(WeightedGraph, ActionTable)>> = OnceLock::new();
    CELL.get_or_init(|| {
        NAMES
            .iter()
            .map(|n| {
                let wg = builtin(n).unwrap();
                let t = group_action_table(&wg, AutomorphismOptions::default()).unwrap();
                (wg, t)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_eval_is_multiplicative(a in monomial_strategy(3), b in monomial_strategy(3), t in turns_strategy(3)) {
        let lhs = (&a * &b).eval_turns(&t);
        prop_assert!((lhs - a.eval_turns(&t) * b.eval_turns(&t)).norm() < 1e-12);
        prop_assert!((a.adjoint().eval_turns(&t) - a.eval_turns(&t).conj()).norm() < 1e-12);
        prop_assert!((a.eval_turns(&t).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monomial_exact_eval_is_multiplicative(a in monomial_strategy(3), b in monomial_strategy(3), t in rational_strategy(3)) {
        prop_assert_eq!((&a * &b).eval_exact(&t), a.eval_exact(&t) + b.eval_exact(&t));
        prop_assert_eq!(a.adjoint().eval_exact(&t), -a.eval_exact(&t));
    }

    #[test]
    fn polynomial_eval_is_a_ring_map(p in poly_strategy(2), q in poly_strategy(2), t in turns_strategy(2)) {
        let (x, y) = (p.eval_turns(&t), q.eval_turns(&t));
        prop_assert!(((&p * &q).eval_turns(&t) - x * y).norm() < 1e-12 * (1.0 + x.norm() * y.norm()) * 25.0);
        prop_assert!(((&p + &q).eval_turns(&t) - (x + y)).norm() < 1e-12 * 10.0);
        prop_assert!((p.adjoint().eval_turns(&t) - x.conj()).norm() < 1e-12 * 10.0);
    }

    #[test]
    fn serde_roundtrips(p in poly_strategy(3), m in monomial_strategy(3)) {
        let p2: TorusPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert!(p2.approx_eq(&p, 0.0));
        let m2: UnitaryMonomial = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(m2, m);
    }

    #[test]
    fn loop_basis_is_closed_and_reduced(seed in any::<u64>()) {
        let (g, wt) = random_weighted_graph(seed);
        for tree in random_trees(&g, seed, 3) {
            let basis = loop_basis(&g, &tree);
            let re = wt.reexpress(&g, &tree);
            prop_assert!(re.is_compatible(&tree));
            for (e, path) in basis {
                if tree.contains_edge(e) {
                    prop_assert!(path.is_empty());
                    continue;
                }
                let root = tree.root();
                if let Some(first) = path.first() {
                    prop_assert_eq!(first.source(&g), root);
                    prop_assert_eq!(path.last().unwrap().target(&g), root);
                }
                for w in path.windows(2) {
                    prop_assert_eq!(w[0].target(&g), w[1].source(&g));
                    prop_assert!(w[1] != w[0].reverse());
                }
                prop_assert_eq!(path.iter().filter(|x| x.edge == e).count(), 1);
                prop_assert_eq!(&wt.path_weight(&path), &re.forward()[e]);
            }
        }
    }

    #[test]
    fn regauge_identities_hold_exactly(seed in any::<u64>()) {
        let (g, wt) = random_weighted_graph(seed);
        let t = random_trees(&g, seed, 4);
        prop_assert!(conjugation_identity_holds(&g, &wt, &t[0], &t[1]).unwrap());
        prop_assert!(composition_identity_holds(&g, &wt, [&t[0], &t[1], &t[2]]).unwrap());
        prop_assert!(verify_cocycle_equation(&g, &wt, [&t[0], &t[1], &t[2], &t[3]]));
        let phi = gauge_potential(&g, &wt, &t[0], &t[1]).unwrap();
        let moved = regauged_weights(&g, &wt.reexpress(&g, &t[0]), &t[0], &phi);
        prop_assert!(moved.is_compatible(&t[1]));
        prop_assert_eq!(moved, wt.reexpress(&g, &t[1]));
    }

    #[test]
    fn regauge_preserves_spectrum(seed in any::<u64>(), s in turns_strategy(4)) {
        let (g, wt) = random_weighted_graph(seed);
        let t = random_trees(&g, seed, 2);
        let p = TorusPoint::from_turns(s[..g.rank()].to_vec());
        let h0 = build_hamiltonian(&g, &wt, &t[0]).unwrap();
        let h1 = build_hamiltonian(&g, &wt, &t[1]).unwrap();
        prop_assert!(h0.matrix().is_self_adjoint(1e-12));
        let m = regauge_matrix(&g, &wt, &t[0], &t[1]).unwrap().matrix.evaluate(&p);
        let a = h0.evaluate(&p);
        let b = h1.evaluate(&p);
        prop_assert!((&m * &a * m.adjoint() - &b).norm() < 1e-9);
        prop_assert!(close(&spectrum(&a), &spectrum(&b), 1e-9));
    }

    #[test]
    fn vertex_phase_leaves_spectrum_unchanged(seed in any::<u64>(), q in 0i64..16, s in turns_strategy(4)) {
        let (g, wt) = random_weighted_graph(seed);
        let v = (seed % g.num_vertices() as u64) as usize;
        let z = UnitaryMonomial::scalar(g.rank(), Phase::from_ratio(q, 16));
        let forward = g
            .edges()
            .iter()
            .zip(wt.forward())
            .map(|(e, w)| match (e.from == v, e.to == v) {
                (true, false) => &z * w,
                (false, true) => &z.adjoint() * w,
                _ => w.clone(),
            })
            .collect();
        let wt2 = WeightFunction::from_forward(g.rank(), forward).unwrap();
        let tree = SpanningTree::bfs(&g);
        let p = TorusPoint::from_turns(s[..g.rank()].to_vec());
        let a = build_hamiltonian(&g, &wt, &tree).unwrap().evaluate(&p);
        let b = build_hamiltonian(&g, &wt2, &tree).unwrap().evaluate(&p);
        prop_assert!(close(&spectrum(&a), &spectrum(&b), 1e-9));
    }

    #[test]
    fn eigenvalues_are_roots_of_the_characteristic_polynomial(k in 1usize..=4, entries in prop::collection::vec(-2.0f64..2.0, 32)) {
        let mut h = DMatrix::<Complex64>::zeros(k, k);
        for i in 0..k {
            h[(i, i)] = Complex64::new(entries[i], 0.0);
            for j in i + 1..k {
                let z = Complex64::new(entries[4 + 4 * i + j], entries[16 + 4 * i + j]);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let ev = spectrum(&h);
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = (0..k).map(|i| h[(i, i)].re).sum();
        prop_assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-9);
        let scale = 1.0 + h.norm();
        for &l in &ev {
            let shifted = &h - DMatrix::<Complex64>::identity(k, k) * Complex64::new(l, 0.0);
            prop_assert!(shifted.determinant().norm() < 1e-9 * scale.powi(k as i32));
        }
        if k == 2 {
            let m = (h[(0, 0)].re + h[(1, 1)].re) / 2.0;
            let r = (((h[(0, 0)].re - h[(1, 1)].re) / 2.0).powi(2) + h[(0, 1)].norm_sqr()).sqrt();
            prop_assert!(close(&ev, &[m - r, m + r], 1e-9));
        }
    }

    #[test]
    fn push_forward_is_a_group_action(which in 0usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let (wg, table) = &tables()[which];
        let g = &wg.graph;
        let a = &table.automorphisms[i.index(table.len())];
        let b = &table.automorphisms[j.index(table.len())];
        let tree = random_trees(g, seed, 1).pop().unwrap();
        prop_assert_eq!(push_forward(g, &push_forward(g, &tree, b), a), push_forward(g, &tree, &a.compose(b)));
        prop_assert_eq!(push_forward(g, &tree, &wirenet::Automorphism::identity(g)), tree);
    }

    #[test]
    fn lifted_action_preserves_spectrum(which in 0usize..4, i in any::<prop::sample::Index>(), s in turns_strategy(3)) {
        let (wg, table) = &tables()[which];
        let k = i.index(table.len());
        let h = build_hamiltonian(&wg.graph, &wg.weights, &wg.tree).unwrap();
        let t = s[..wg.graph.rank()].to_vec();
        let moved = table.actions[k].apply_turns(&t);
        let a = spectrum(&h.evaluate_turns(&t));
        let b = spectrum(&h.evaluate_turns(&moved));
        prop_assert!(close(&a, &b, 1e-9));
    }

    #[test]
    fn fixed_set_samples_are_fixed(which in 0usize..4, i in any::<prop::sample::Index>(), s in rational_strategy(3)) {
        let (_, table) = &tables()[which];
        let action = &table.actions[i.index(table.len())];
        for comp in fixed_set(action).components {
            let p = comp.at(&s[..comp.dim()]);
            prop_assert!(action.fixes(&p), "{:?} not fixed by {}", p, action);
            prop_assert!(comp.contains(&p));
        }
    }

    #[test]
    fn lifted_matrices_commute_with_hamiltonian(which in 0usize..4, i in any::<prop::sample::Index>(), s in rational_strategy(3)) {
        let (wg, table) = &tables()[which];
        let k = i.index(table.len());
        let comps = fixed_set(&table.actions[k]).components;
        prop_assume!(!comps.is_empty());
        let comp = &comps[s.len() % comps.len()];
        let t = comp.at(&s[..comp.dim()]);
        let elements = table.group.subgroup(&[k]);
        let rep = projective_rep_for(wg, table, &t, &elements).unwrap();
        let n = rep.hamiltonian.nrows();
        for (exact, m) in rep.exact.iter().zip(&rep.dense) {
            prop_assert_eq!(exact.dim(), n);
            prop_assert!((m * m.adjoint() - CMatrix::identity(n, n)).norm() < 1e-12);
            prop_assert!((m * &rep.hamiltonian - &rep.hamiltonian * m).norm() < 1e-9);
        }
    }
}

#[test]
fn automorphism_groups_are_closed() {
    for name in NAMES {
        let g = builtin(name).unwrap().graph;
        for opts in [AutomorphismOptions::default(), AutomorphismOptions { loop_reversal: true }] {
            let autos = enumerate_automorphisms(&g, opts);
            assert!(autos.iter().any(|a| a.is_identity()), "{name}");
            for a in &autos {
                assert!(a.is_valid(&g));
                assert!(autos.contains(&a.inverse()), "{name}");
                for b in &autos {
                    assert!(autos.contains(&a.compose(b)), "{name}");
                }
            }
        }
    }
}

#[test]
fn trace_vanishes_identically() {
    for name in ["gyroid", "diamond", "honeycomb"] {
        let wg = builtin(name).unwrap();
        let h = build_hamiltonian(&wg.graph, &wg.weights, &wg.tree).unwrap();
        assert!(h.matrix().trace().is_zero(), "{name}");
    }
}

#[test]
fn graph_spec_roundtrip() {
    for name in NAMES {
        let wg = builtin(name).unwrap();
        let text = serde_json::to_string(&wg.to_spec()).unwrap();
        let back = WeightedGraph::from_json(&text).unwrap();
        assert_eq!(back.weights, wg.weights);
        assert_eq!(back.tree, wg.tree);
        assert_eq!(back.graph.edges(), wg.graph.edges());
    }
}
