use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Connected finite multigraph whose first Betti number equals the torus rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    name: String,
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    betti: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge { edge, reversed: false }
    }

    pub fn reverse(self) -> Self {
        OrientedEdge { edge: self.edge, reversed: !self.reversed }
    }

    pub fn source(&self, g: &Graph) -> usize {
        let e = &g.edges[self.edge];
        if self.reversed { e.to } else { e.from }
    }

    pub fn target(&self, g: &Graph) -> usize {
        let e = &g.edges[self.edge];
        if self.reversed { e.from } else { e.to }
    }
}

impl Graph {
    pub fn new(name: impl Into<String>, rank: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let name = name.into();
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut ids = HashMap::new();
        for e in &edges {
            if ids.insert(e.id.clone(), ()).is_some() {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            for &v in [e.from, e.to].iter() {
                if v >= vertices.len() {
                    return Err(Error::DanglingEndpoint { edge: e.id.clone(), vertex: v.to_string() });
                }
            }
        }
        if vertices.is_empty() {
            return Err(Error::Disconnected(name));
        }
        let g = Graph { name, rank, betti: 0, vertices, edges };
        if g.component_count() != 1 {
            return Err(Error::Disconnected(g.name));
        }
        let betti = g.edges.len() + 1 - g.vertices.len();
        if betti != rank {
            return Err(Error::BettiMismatch { betti, rank });
        }
        Ok(Graph { betti, ..g })
    }

    /// Build from string endpoint references.
    pub fn from_ids(
        name: impl Into<String>,
        rank: usize,
        vertices: Vec<String>,
        edges: &[(String, String, String)],
    ) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut out = Vec::with_capacity(edges.len());
        for (id, from, to) in edges {
            let lookup = |v: &String| {
                index.get(v.as_str()).copied().ok_or_else(|| Error::DanglingEndpoint { edge: id.clone(), vertex: v.clone() })
            };
            out.push(Edge { id: id.clone(), from: lookup(from)?, to: lookup(to)? });
        }
        Graph::new(name, rank, vertices, out)
    }

    fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for e in &self.edges {
                    for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                        if a == v && comp[b] == usize::MAX {
                            comp[b] = count;
                            queue.push_back(b);
                        }
                    }
                }
            }
            count += 1;
        }
        count
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn betti(&self) -> usize {
        self.betti
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// All oriented edges leaving `v`; a loop contributes both orientations.
    pub fn outgoing(&self, v: usize) -> Vec<OrientedEdge> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(OrientedEdge { edge: i, reversed: false });
            }
            if e.to == v {
                out.push(OrientedEdge { edge: i, reversed: true });
            }
        }
        out
    }

    /// Undirected multiplicity between two vertices (loops counted once each).
    fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.edges.iter().filter(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a)).count()
    }
}

/// Rooted ordered spanning tree: tree edges, root, and a vertex order starting at the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    edges: Vec<usize>,
    root: usize,
    order: Vec<usize>,
    parent: Vec<Option<OrientedEdge>>,
    position: Vec<usize>,
}

impl SpanningTree {
    pub fn new(g: &Graph, mut edges: Vec<usize>, root: usize, order: Vec<usize>) -> Result<Self> {
        let n = g.num_vertices();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!("expected {} edges, found {}", n - 1, edges.len())));
        }
        if root >= n {
            return Err(Error::InvalidTree("root is not a vertex".into()));
        }
        let mut position = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::InvalidTree("order must list every vertex once".into()));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::InvalidTree("order must list every vertex once".into()));
            }
            position[v] = i;
        }
        if order[0] != root {
            return Err(Error::InvalidTree("root must be first in the order".into()));
        }
        let mut parent: Vec<Option<OrientedEdge>> = vec![None; n];
        let mut reached = vec![false; n];
        reached[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &ei in &edges {
                let e = g.edges.get(ei).ok_or_else(|| Error::InvalidTree(format!("edge index {ei} out of range")))?;
                if e.is_loop() {
                    return Err(Error::InvalidTree(format!("loop edge `{}` in tree", e.id)));
                }
                let step = if e.from == v {
                    Some((e.to, OrientedEdge { edge: ei, reversed: false }))
                } else if e.to == v {
                    Some((e.from, OrientedEdge { edge: ei, reversed: true }))
                } else {
                    None
                };
                if let Some((w, oe)) = step {
                    if !reached[w] {
                        reached[w] = true;
                        parent[w] = Some(oe);
                        queue.push_back(w);
                    }
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::InvalidTree("tree edges do not span the graph".into()));
        }
        Ok(SpanningTree { edges, root, order, parent, position })
    }

    /// Tree with vertex order equal to the vertex list order, rotated so the root comes first.
    pub fn with_default_order(g: &Graph, edges: Vec<usize>, root: usize) -> Result<Self> {
        let mut order = vec![root];
        order.extend((0..g.num_vertices()).filter(|&v| v != root));
        SpanningTree::new(g, edges, root, order)
    }

    /// Breadth-first tree from vertex 0 using the lowest-index edges.
    pub fn bfs(g: &Graph) -> Self {
        let n = g.num_vertices();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for oe in g.outgoing(v) {
                let w = oe.target(g);
                if !seen[w] {
                    seen[w] = true;
                    edges.push(oe.edge);
                    queue.push_back(w);
                }
            }
        }
        SpanningTree::with_default_order(g, edges, 0).expect("bfs tree of a connected graph")
    }

    pub fn random<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let n = g.num_vertices();
        let mut idx: Vec<usize> = (0..g.num_edges()).filter(|&i| !g.edges[i].is_loop()).collect();
        idx.shuffle(rng);
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        let mut edges = Vec::new();
        for i in idx {
            let (a, b) = (find(&mut uf, g.edges[i].from), find(&mut uf, g.edges[i].to));
            if a != b {
                uf[a] = b;
                edges.push(i);
            }
        }
        let root = rng.gen_range(0..n);
        let mut rest: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        rest.shuffle(rng);
        let mut order = vec![root];
        order.extend(rest);
        SpanningTree::new(g, edges, root, order).expect("random spanning tree")
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Oriented tree edge from the parent of `v` into `v`.
    pub fn parent_edge(&self, v: usize) -> Option<OrientedEdge> {
        self.parent[v]
    }

    /// Unique tree path from the root to `v`.
    pub fn path_to(&self, g: &Graph, v: usize) -> Vec<OrientedEdge> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(oe) = self.parent[cur] {
            path.push(oe);
            cur = oe.source(g);
        }
        path.reverse();
        path
    }

    /// Tree path between arbitrary vertices, freely reduced.
    pub fn path_between(&self, g: &Graph, a: usize, b: usize) -> Vec<OrientedEdge> {
        let mut p = reverse_path(&self.path_to(g, a));
        p.extend(self.path_to(g, b));
        reduce_path(&p)
    }

    /// Vertices in breadth-first order from the root, with the tree edge used to reach each.
    pub fn bfs_order(&self, g: &Graph) -> Vec<(usize, Option<OrientedEdge>)> {
        let mut by_depth: Vec<(usize, usize)> =
            (0..self.parent.len()).map(|v| (self.path_to(g, v).len(), v)).collect();
        by_depth.sort();
        by_depth.into_iter().map(|(_, v)| (v, self.parent[v])).collect()
    }
}

pub fn tree_path(g: &Graph, tree: &SpanningTree, v: usize) -> Vec<OrientedEdge> {
    tree.path_to(g, v)
}

pub fn reverse_path(p: &[OrientedEdge]) -> Vec<OrientedEdge> {
    p.iter().rev().map(|e| e.reverse()).collect()
}

/// Cancel adjacent back-and-forth traversals.
pub fn reduce_path(p: &[OrientedEdge]) -> Vec<OrientedEdge> {
    let mut out: Vec<OrientedEdge> = Vec::with_capacity(p.len());
    for &e in p {
        if out.last() == Some(&e.reverse()) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

/// Fundamental loop root → v → w → root for each non-tree edge (v,w) in stored orientation.
pub fn loop_basis(g: &Graph, tree: &SpanningTree) -> BTreeMap<usize, Vec<OrientedEdge>> {
    (0..g.num_edges())
        .map(|i| {
            if tree.contains_edge(i) {
                return (i, Vec::new());
            }
            let oe = OrientedEdge::forward(i);
            let mut p = tree.path_to(g, oe.source(g));
            p.push(oe);
            p.extend(reverse_path(&tree.path_to(g, oe.target(g))));
            (i, reduce_path(&p))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<OrientedEdge>,
}

impl Automorphism {
    pub fn identity(g: &Graph) -> Self {
        Automorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).map(OrientedEdge::forward).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map.iter().enumerate().all(|(i, e)| e.edge == i && !e.reversed)
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn apply(&self, e: OrientedEdge) -> OrientedEdge {
        let img = self.edge_map[e.edge];
        if e.reversed { img.reverse() } else { img }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other.edge_map.iter().map(|&e| self.apply(e)).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (i, &v) in self.vertex_map.iter().enumerate() {
            vertex_map[v] = i;
        }
        let mut edge_map = vec![OrientedEdge::forward(0); self.edge_map.len()];
        for (i, img) in self.edge_map.iter().enumerate() {
            edge_map[img.edge] = OrientedEdge { edge: i, reversed: img.reversed };
        }
        Automorphism { vertex_map, edge_map }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        g.edges.iter().enumerate().all(|(i, e)| {
            let img = self.edge_map[i];
            img.source(g) == self.vertex_map[e.from] && img.target(g) == self.vertex_map[e.to]
        })
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    fn cycles(perm: &[usize], label: impl Fn(usize) -> String) -> String {
        let mut seen = vec![false; perm.len()];
        let mut out = String::new();
        for s in 0..perm.len() {
            if seen[s] || perm[s] == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                cyc.push(label(c));
                c = perm[c];
            }
            let sep = if cyc.iter().all(|l| l.chars().count() == 1) { "" } else { " " };
            out.push_str(&format!("({})", cyc.join(sep)));
        }
        out
    }

    /// Cycle notation on vertex labels, falling back to edge labels when the vertex map is trivial.
    pub fn cycle_notation(&self, g: &Graph) -> String {
        let v = Self::cycles(&self.vertex_map, |i| g.vertices[i].clone());
        let edge_perm: Vec<usize> = self.edge_map.iter().map(|e| e.edge).collect();
        let e = Self::cycles(&edge_perm, |i| g.edges[i].id.clone());
        let flips: Vec<String> =
            self.edge_map.iter().filter(|e| e.reversed && g.edges[e.edge].is_loop()).map(|e| format!("~{}", g.edges[e.edge].id)).collect();
        let mut s = String::new();
        if !v.is_empty() {
            s.push_str(&v);
        }
        let simple = g.edges.iter().all(|a| !a.is_loop()) && {
            let mut pairs: Vec<(usize, usize)> = g.edges.iter().map(|a| (a.from.min(a.to), a.from.max(a.to))).collect();
            pairs.sort();
            pairs.windows(2).all(|w| w[0] != w[1])
        };
        if !simple && !e.is_empty() {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(&format!("e{e}"));
        }
        if !flips.is_empty() {
            s.push_str(&format!(" {}", flips.join(" ")));
        }
        if s.is_empty() {
            "()".into()
        } else {
            s.trim().to_string()
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AutomorphismOptions {
    pub loop_reversal: bool,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Full automorphism group in canonical order.
pub fn enumerate_automorphisms(g: &Graph, opts: AutomorphismOptions) -> Vec<Automorphism> {
    let n = g.num_vertices();
    let mult: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| g.multiplicity(a, b)).collect()).collect();
    let signature: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut row: Vec<usize> = (0..n).filter(|&w| w != v).map(|w| mult[v][w]).collect();
            row.sort_unstable();
            (mult[v][v], row)
        })
        .collect();

    let mut vertex_maps = Vec::new();
    let mut current = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        v: usize,
        n: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        mult: &[Vec<usize>],
        sig: &[(usize, Vec<usize>)],
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == n {
            out.push(current.clone());
            return;
        }
        for img in 0..n {
            if used[img] || sig[img] != sig[v] {
                continue;
            }
            if (0..v).any(|w| mult[v][w] != mult[img][current[w]]) {
                continue;
            }
            current[v] = img;
            used[img] = true;
            extend(v + 1, n, current, used, mult, sig, out);
            used[img] = false;
            current[v] = usize::MAX;
        }
    }
    extend(0, n, &mut current, &mut used, &mult, &signature, &mut vertex_maps);

    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        classes.entry((e.from.min(e.to), e.from.max(e.to))).or_default().push(i);
    }

    let mut out = Vec::new();
    for vm in vertex_maps {
        // For each endpoint class: the candidate images, each a list of (target edge, reversed).
        let mut per_class: Vec<(Vec<usize>, Vec<Vec<OrientedEdge>>)> = Vec::new();
        for (&(a, b), src) in &classes {
            let (ia, ib) = (vm[a], vm[b]);
            let dst = &classes[&(ia.min(ib), ia.max(ib))];
            let mut options = Vec::new();
            for perm in permutations(dst) {
                if a == b {
                    let flips = if opts.loop_reversal { 1usize << src.len() } else { 1 };
                    for mask in 0..flips {
                        options.push(
                            perm.iter().enumerate().map(|(k, &f)| OrientedEdge { edge: f, reversed: mask >> k & 1 == 1 }).collect(),
                        );
                    }
                } else {
                    options.push(
                        src.iter()
                            .zip(&perm)
                            .map(|(&s, &f)| OrientedEdge { edge: f, reversed: g.edges[f].from != vm[g.edges[s].from] })
                            .collect(),
                    );
                }
            }
            per_class.push((src.clone(), options));
        }
        let mut idx = vec![0usize; per_class.len()];
        loop {
            let mut edge_map = vec![OrientedEdge::forward(0); g.num_edges()];
            for (c, (src, options)) in per_class.iter().enumerate() {
                for (s, img) in src.iter().zip(&options[idx[c]]) {
                    edge_map[*s] = *img;
                }
            }
            out.push(Automorphism { vertex_map: vm.clone(), edge_map });
            let mut c = 0;
            while c < idx.len() {
                idx[c] += 1;
                if idx[c] < per_class[c].1.len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == idx.len() {
                break;
            }
        }
    }
    out.sort();
    out
}

pub fn push_forward(g: &Graph, tree: &SpanningTree, phi: &Automorphism) -> SpanningTree {
    let edges = tree.edges.iter().map(|&e| phi.edge_map[e].edge).collect();
    let order = tree.order.iter().map(|&v| phi.vertex_map[v]).collect();
    SpanningTree::new(g, edges, phi.vertex_map[tree.root], order).expect("automorphic image of a spanning tree")
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} vertices, {} edges, rank {}, b1 = {}",
            self.name,
            self.vertices.len(),
            self.edges.len(),
            self.rank,
            self.betti
        )
    }
}
