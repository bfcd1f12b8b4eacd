use wirenet::analysis::{analyze, analyze_point, AnalysisOptions, AnalysisReport};
use wirenet::builtin::builtin;
use wirenet::graph::AutomorphismOptions;
use wirenet::hamiltonian::build_hamiltonian;
use wirenet::symlift::{fixed_set, group_action_table, Component};
use wirenet::torus::Rational;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

#[test]
fn analyze_every_builtin() {
    for (name, order) in [("gyroid", 24), ("diamond", 48), ("honeycomb", 12), ("primitive", 6)] {
        let wg = builtin(name).unwrap();
        let report = analyze(&wg, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.automorphism_order, order, "{name}");
        assert!(!report.strata.is_empty());
        for s in &report.strata {
            let p = &s.report;
            assert_eq!(p.stabilizer_order, s.stabilizer_order);
            assert!(p.cocycle_matches_groupoid, "{name} {}", p.point);
            let dim: usize = p.extension_irrep_dims.iter().zip(&p.multiplicities).map(|(d, m)| d * m).sum();
            assert_eq!(p.irrep_dims.iter().sum::<usize>(), dim);
            assert_eq!(dim, wg.graph.num_vertices(), "{name} {}", p.point);
            let total: usize = p.eigenvalues.iter().map(|c| c.multiplicity).sum();
            assert_eq!(total, wg.graph.num_vertices());
        }
        assert!(!report.render_table().is_empty());
        let text = serde_json::to_string(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.graph, report.graph);
        assert_eq!(back.strata.len(), report.strata.len());
        assert_eq!(back.automorphism_label, report.automorphism_label);
    }
}

#[test]
fn gyroid_half_point_is_projective() {
    let wg = builtin("gyroid").unwrap();
    let table = group_action_table(&wg, AutomorphismOptions::default()).unwrap();
    let p = analyze_point(&wg, &table, &[r(1, 2); 3], &AnalysisOptions::default()).unwrap();
    assert!(!p.stabilizer_abelian);
    assert!(p.trivializable);
    let q = analyze_point(&wg, &table, &[r(1, 4); 3], &AnalysisOptions::default()).unwrap();
    assert!(!q.cocycle_trivial);
    assert!(!q.trivializable);
}

#[test]
fn diamond_double_transpositions_give_the_circles() {
    let wg = builtin("diamond").unwrap();
    let table = group_action_table(&wg, AutomorphismOptions::default()).unwrap();
    let h = build_hamiltonian(&wg.graph, &wg.weights, &wg.tree).unwrap();
    let mut found: Vec<Component> = Vec::new();
    for (a, action) in table.automorphisms.iter().zip(&table.actions) {
        let fixes_vertices = a.vertex_map.iter().enumerate().all(|(i, &v)| i == v);
        let perm: Vec<usize> = a.edge_map.iter().map(|e| e.edge).collect();
        let moved = perm.iter().enumerate().filter(|(i, &e)| *i != e).count();
        let involution = perm.iter().enumerate().all(|(i, &e)| perm[e] == i);
        if !(fixes_vertices && involution && moved == 4) {
            continue;
        }
        for c in fixed_set(action).components {
            if c.dim() == 1 && h.vanishes_on(&c.base, &c.directions) && !found.iter().any(|f| f.same_as(&c)) {
                found.push(c);
            }
        }
    }
    let circle = |base: [Rational; 3], dir: [i64; 3]| Component::new(base.to_vec(), vec![dir.to_vec()]);
    let want = [
        circle([r(1, 2), r(0, 1), r(1, 2)], [0, 1, 1]),
        circle([r(1, 2), r(0, 1), r(1, 2)], [1, 1, 0]),
        circle([r(0, 1), r(1, 2), r(1, 2)], [1, 0, 1]),
    ];
    assert_eq!(found.len(), 3);
    for c in &want {
        assert!(found.iter().any(|f| f.same_as(c)), "{c} missing");
    }
}
