use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::builtin;
use crate::error::{Error, Result};
use crate::graph::{Graph, SpanningTree};
use crate::torus::{check_weight_function, UnitaryMonomial, WeightFunction, WeightReport};

/// Graph together with its weight function and gauging data.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    pub graph: Graph,
    pub weights: WeightFunction,
    pub tree: SpanningTree,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub weight: UnitaryMonomial,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeSpec {
    pub root: String,
    pub edges: Vec<String>,
    pub order: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub name: String,
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spanning_tree: Option<TreeSpec>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<WeightedGraph> {
        let triples: Vec<(String, String, String)> =
            self.edges.iter().map(|e| (e.id.clone(), e.from.clone(), e.to.clone())).collect();
        let graph = Graph::from_ids(self.name.clone(), self.rank, self.vertices.clone(), &triples)?;
        let weights = WeightFunction::from_forward(self.rank, self.edges.iter().map(|e| e.weight.clone()).collect())?;
        let tree = match &self.spanning_tree {
            None => SpanningTree::bfs(&graph),
            Some(t) => {
                let vertex = |id: &str| {
                    graph.vertex_index(id).ok_or_else(|| Error::InvalidTree(format!("unknown vertex `{id}`")))
                };
                let edges = t
                    .edges
                    .iter()
                    .map(|id| graph.edge_index(id).ok_or_else(|| Error::InvalidTree(format!("unknown edge `{id}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let order = t.order.iter().map(|v| vertex(v)).collect::<Result<Vec<_>>>()?;
                SpanningTree::new(&graph, edges, vertex(&t.root)?, order)?
            }
        };
        Ok(WeightedGraph { graph, weights, tree })
    }
}

impl WeightedGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GraphSpec = serde_json::from_str(text)?;
        spec.build()
    }

    /// A built-in name or a path to a JSON description.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Ok(wg) = builtin::builtin(name_or_path) {
            return Ok(wg);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(Error::UnknownBuiltin(name_or_path.to_string()));
        }
        WeightedGraph::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_spec(&self) -> GraphSpec {
        let g = &self.graph;
        let v = |i: usize| g.vertices()[i].clone();
        GraphSpec {
            name: g.name().to_string(),
            rank: g.rank(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeSpec { id: e.id.clone(), from: v(e.from), to: v(e.to), weight: self.weights.forward()[i].clone() })
                .collect(),
            spanning_tree: Some(TreeSpec {
                root: v(self.tree.root()),
                edges: self.tree.edges().iter().map(|&e| g.edges()[e].id.clone()).collect(),
                order: self.tree.order().iter().map(|&i| v(i)).collect(),
            }),
        }
    }

    pub fn check(&self) -> Result<WeightReport> {
        check_weight_function(&self.graph, &self.weights, Some(&self.tree))
    }
}
