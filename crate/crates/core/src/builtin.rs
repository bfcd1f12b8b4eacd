use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, SpanningTree};
use crate::io::WeightedGraph;
use crate::torus::{Phase, UnitaryMonomial, WeightFunction};

pub const NAMES: [&str; 4] = ["P", "D", "G", "honeycomb"];

fn x(rank: usize, k: usize) -> UnitaryMonomial {
    UnitaryMonomial::generator(rank, k)
}

fn assemble(name: &str, rank: usize, vertices: &[&str], edges: &[(&str, usize, usize, UnitaryMonomial)], tree: &[usize]) -> WeightedGraph {
    let graph = Graph::new(
        name,
        rank,
        vertices.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|(id, a, b, _)| Edge { id: id.to_string(), from: *a, to: *b }).collect(),
    )
    .expect("built-in graph is valid");
    let weights = WeightFunction::from_forward(rank, edges.iter().map(|e| e.3.clone()).collect()).expect("built-in weights");
    let tree = SpanningTree::with_default_order(&graph, tree.to_vec(), 0).expect("built-in tree");
    WeightedGraph { graph, weights, tree }
}

/// K₄ with star tree at 1; H₂₃ = A, H₂₄ = B*, H₃₄ = C.
pub fn gyroid() -> WeightedGraph {
    let one = UnitaryMonomial::one(3);
    assemble(
        "G",
        3,
        &["1", "2", "3", "4"],
        &[
            ("12", 0, 1, one.clone()),
            ("13", 0, 2, one.clone()),
            ("14", 0, 3, one),
            ("23", 1, 2, x(3, 0)),
            ("24", 1, 3, x(3, 1).adjoint()),
            ("34", 2, 3, x(3, 2)),
        ],
        &[0, 1, 2],
    )
}

/// Two vertices joined by four parallel edges weighted 1, A, B, C.
pub fn diamond() -> WeightedGraph {
    assemble(
        "D",
        3,
        &["1", "2"],
        &[("e1", 0, 1, UnitaryMonomial::one(3)), ("e2", 0, 1, x(3, 0)), ("e3", 0, 1, x(3, 1)), ("e4", 0, 1, x(3, 2))],
        &[0],
    )
}

/// Two vertices joined by three parallel edges weighted 1, A, B.
pub fn honeycomb() -> WeightedGraph {
    assemble(
        "honeycomb",
        2,
        &["1", "2"],
        &[("e1", 0, 1, UnitaryMonomial::one(2)), ("e2", 0, 1, x(2, 0)), ("e3", 0, 1, x(2, 1))],
        &[0],
    )
}

/// One vertex with three loops weighted A, B, C.
pub fn primitive() -> WeightedGraph {
    assemble("P", 3, &["1"], &[("A", 0, 0, x(3, 0)), ("B", 0, 0, x(3, 1)), ("C", 0, 0, x(3, 2))], &[])
}

pub fn builtin(name: &str) -> Result<WeightedGraph> {
    match name {
        "G" | "g" | "gyroid" | "Gyroid" => Ok(gyroid()),
        "D" | "d" | "diamond" => Ok(diamond()),
        "P" | "p" | "primitive" => Ok(primitive()),
        "honeycomb" | "H" | "graphene" => Ok(honeycomb()),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Unit monomial with a rational phase, for building weights by hand.
pub fn monomial(p: i64, q: i64, exp: &[i64]) -> UnitaryMonomial {
    UnitaryMonomial::new(Phase::from_ratio(p, q), exp.to_vec())
}
