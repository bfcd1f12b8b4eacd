use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AutomorphismOptions;
use crate::hamiltonian::{degeneracy_profile, eigenvalues};
use crate::io::WeightedGraph;
use crate::repdecomp::{
    character_table, decompose, extension_rep, matches_groupoid_cocycle, projective_rep, scalar_cocycle, snap_eisenstein, superselect,
    trivialization_search, CharacterTable, Superselection, DEFAULT_MAX_ORDER,
};
use crate::symlift::{group_action_table, strata_census, ActionTable, Component};
use crate::torus::{Phase, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub tol: f64,
    pub seed: u64,
    pub max_order: u64,
    pub loop_reversal: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { tol: 1e-9, seed: 0, max_order: DEFAULT_MAX_ORDER, loop_reversal: false }
    }
}

impl AnalysisOptions {
    pub fn automorphisms(&self) -> AutomorphismOptions {
        AutomorphismOptions { loop_reversal: self.loop_reversal }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaValue {
    pub element: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub graph: String,
    pub point: String,
    pub stabilizer_order: usize,
    pub stabilizer_label: String,
    pub stabilizer_abelian: bool,
    pub stabilizer_elements: Vec<String>,
    pub cocycle_order: u64,
    pub cocycle_trivial: bool,
    pub cocycle_matches_groupoid: bool,
    pub trivializable: bool,
    /// λ on the stabilizer when the cocycle is a coboundary.
    pub lambda: Option<Vec<LambdaValue>>,
    pub extension_order: usize,
    pub extension_label: String,
    pub irrep_dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
    pub extension_irrep_dims: Vec<usize>,
    pub character_table: Vec<Vec<String>>,
    pub class_sizes: Vec<usize>,
    pub eigenvalues: Vec<EigenCluster>,
    pub block_spectra: Vec<BlockSpectrum>,
    pub hamiltonian_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSpectrum {
    pub irrep: usize,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    pub eigenvalues: Vec<f64>,
}

pub fn format_point(t: &[Rational]) -> String {
    let parts: Vec<String> = t.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Root of unity e^{2πi·p} in readable form.
pub fn phase_label(p: Phase) -> String {
    let t = p.turns();
    match (*t.numer(), *t.denom()) {
        (0, _) => "1".into(),
        (1, 2) => "-1".into(),
        (1, 4) => "i".into(),
        (3, 4) => "-i".into(),
        (1, 3) => "ω".into(),
        (2, 3) => "ω̄".into(),
        (n, d) => format!("e^(2πi·{n}/{d})"),
    }
}

pub fn format_character(z: Complex64) -> String {
    match snap_eisenstein(z) {
        Some((a, 0)) => a.to_string(),
        Some((0, b)) => match b {
            1 => "ω".into(),
            -1 => "-ω".into(),
            _ => format!("{b}ω"),
        },
        Some((a, b)) if a == b => match a {
            1 => "-ω̄".into(),
            -1 => "ω̄".into(),
            _ => format!("{}ω̄", -a),
        },
        Some((a, b)) if b > 0 => format!("{a}+{b}ω"),
        Some((a, b)) => format!("{a}{b}ω"),
        None => format!("{:.6}{:+.6}i", z.re, z.im),
    }
}

fn snapped_table(ct: &CharacterTable) -> Vec<Vec<String>> {
    ct.characters.iter().map(|row| row.iter().map(|&z| format_character(z)).collect()).collect()
}

pub fn analyze_point(wg: &WeightedGraph, table: &ActionTable, t: &[Rational], opts: &AnalysisOptions) -> Result<PointReport> {
    let g = &wg.graph;
    if t.len() != g.rank() {
        return Err(Error::RankMismatch { expected: g.rank(), found: t.len() });
    }
    let stab = table.stabilizer(t);
    let rep = projective_rep(wg, table, &stab)?;
    let c = scalar_cocycle(&rep)?;
    let cocycle_matches_groupoid = matches_groupoid_cocycle(wg, table, &rep, &c);
    let triv = trivialization_search(&c, opts.max_order)?;
    let ext = extension_rep(&rep, &c, &triv)?;
    let ct = character_table(&ext.group, opts.seed)?;
    let multiplicities = decompose(&ext.matrices, &ext.group, &ct)?;
    let sel: Superselection = superselect(&rep.hamiltonian, &ext.matrices, &ext.group, &ct, opts.tol)?;

    let mut irrep_dims: Vec<usize> = multiplicities.iter().zip(&ct.dims).flat_map(|(&a, &d)| std::iter::repeat_n(d, a)).collect();
    irrep_dims.sort_unstable();
    let values = eigenvalues(&rep.hamiltonian)?;
    let eig = degeneracy_profile(&values, opts.tol).clusters.into_iter().map(|c| EigenCluster { value: c.mean, multiplicity: c.multiplicity }).collect();
    let names: Vec<String> = stab.elements.iter().map(|&e| table.automorphisms[e].cycle_notation(g)).collect();
    let lambda = triv.lambda.as_ref().map(|l| {
        names.iter().zip(l).map(|(n, &p)| LambdaValue { element: if n.is_empty() { "()".into() } else { n.clone() }, value: phase_label(p) }).collect()
    });
    let hamiltonian_vanishes = crate::hamiltonian::build_hamiltonian(g, &wg.weights, &wg.tree)?.vanishes_at(t);
    Ok(PointReport {
        graph: g.name().to_string(),
        point: format_point(t),
        stabilizer_order: stab.order,
        stabilizer_label: stab.label.clone(),
        stabilizer_abelian: stab.abelian,
        stabilizer_elements: names,
        cocycle_order: c.order,
        cocycle_trivial: c.is_trivial(),
        cocycle_matches_groupoid,
        trivializable: triv.is_trivializable(),
        lambda,
        extension_order: ext.group.order(),
        extension_label: ext.group.identify(),
        irrep_dims,
        multiplicities,
        extension_irrep_dims: ct.dims.clone(),
        character_table: snapped_table(&ct),
        class_sizes: ct.classes.iter().map(|c| c.size).collect(),
        eigenvalues: eig,
        block_spectra: sel
            .blocks
            .iter()
            .map(|b| BlockSpectrum { irrep: b.irrep, irrep_dim: b.irrep_dim, multiplicity: b.multiplicity, eigenvalues: b.eigenvalues.clone() })
            .collect(),
        hamiltonian_vanishes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumReport {
    pub stabilizer_order: usize,
    pub stabilizer_label: String,
    pub abelian: bool,
    pub fixed_set: String,
    pub dimension: usize,
    pub sample: String,
    pub report: PointReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub stabilizer_label: String,
    pub stabilizer_order: usize,
    pub points: Vec<String>,
    pub extension_label: String,
    pub irrep_dims: Vec<usize>,
    pub eigenvalues: Vec<EigenCluster>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub graph: String,
    pub rank: usize,
    pub vertices: usize,
    pub automorphism_order: usize,
    pub automorphism_label: String,
    pub strata: Vec<StratumReport>,
    /// Non-abelian strata grouped by stabilizer, extension and spectrum.
    pub non_abelian: Vec<SummaryRow>,
    /// Some stratum carries a cocycle that no rescaling removes.
    pub projective_content: bool,
    pub options: AnalysisOptions,
}

/// Rational points on the component whose stabilizer is exactly the stratum subgroup, small denominators first.
fn generic_samples(table: &ActionTable, comp: &Component, subgroup: &[usize]) -> Vec<Vec<Rational>> {
    if comp.dim() == 0 {
        return vec![comp.base.clone()];
    }
    const FRACTIONS: [(i64, i64); 10] = [(1, 5), (2, 5), (1, 8), (3, 8), (1, 10), (3, 10), (1, 12), (5, 12), (1, 7), (2, 7)];
    let k = comp.dim();
    let mut out = Vec::new();
    for shift in 0..FRACTIONS.len() {
        let s: Vec<Rational> = (0..k).map(|i| {
            let (p, q) = FRACTIONS[(shift + 3 * i) % FRACTIONS.len()];
            Rational::new(p, q)
        }).collect();
        let t = comp.at(&s);
        if table.stabilizer(&t).elements == subgroup && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn same_spectrum(a: &[EigenCluster], b: &[EigenCluster]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.multiplicity == y.multiplicity && (x.value - y.value).abs() < 1e-6)
}

pub fn analyze(wg: &WeightedGraph, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let table = group_action_table(wg, opts.automorphisms())?;
    analyze_with_table(wg, &table, opts)
}

pub fn analyze_with_table(wg: &WeightedGraph, table: &ActionTable, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let mut strata = Vec::new();
    for s in strata_census(table) {
        let mut found = None;
        for t in generic_samples(table, &s.component, &s.subgroup) {
            match analyze_point(wg, table, &t, opts) {
                Ok(r) => {
                    found = Some((t, r));
                    break;
                }
                Err(Error::MaxOrderExceeded { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let (sample, report) = found.ok_or_else(|| Error::contract(format!("no usable generic sample point on {}", s.component)))?;
        strata.push(StratumReport {
            stabilizer_order: s.order,
            stabilizer_label: s.label.clone(),
            abelian: s.abelian,
            fixed_set: s.component.to_string(),
            dimension: s.component.dim(),
            sample: format_point(&sample),
            report,
        });
    }
    let mut non_abelian: Vec<SummaryRow> = Vec::new();
    for s in strata.iter().filter(|s| !s.abelian) {
        let r = &s.report;
        let row = non_abelian.iter_mut().find(|row| {
            row.stabilizer_label == s.stabilizer_label
                && row.extension_label == r.extension_label
                && row.irrep_dims == r.irrep_dims
                && same_spectrum(&row.eigenvalues, &r.eigenvalues)
                && s.dimension == 0
        });
        match row {
            Some(row) => row.points.push(s.fixed_set.clone()),
            None => non_abelian.push(SummaryRow {
                stabilizer_label: s.stabilizer_label.clone(),
                stabilizer_order: s.stabilizer_order,
                points: vec![s.fixed_set.clone()],
                extension_label: r.extension_label.clone(),
                irrep_dims: r.irrep_dims.clone(),
                eigenvalues: r.eigenvalues.clone(),
            }),
        }
    }
    Ok(AnalysisReport {
        graph: wg.graph.name().to_string(),
        rank: wg.graph.rank(),
        vertices: wg.graph.num_vertices(),
        automorphism_order: table.len(),
        automorphism_label: table.group.identify(),
        projective_content: strata.iter().any(|s| !s.report.trivializable),
        strata,
        non_abelian,
        options: *opts,
    })
}

pub fn format_spectrum(e: &[EigenCluster]) -> String {
    let parts: Vec<String> = e
        .iter()
        .map(|c| {
            let v = if c.value.abs() < 1e-12 { 0.0 } else { c.value };
            if c.multiplicity == 1 {
                format!("{v:.6}")
            } else {
                format!("{v:.6} ×{}", c.multiplicity)
            }
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn format_dims(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl PointReport {
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph            {}", self.graph);
        let _ = writeln!(s, "point            {}", self.point);
        let _ = writeln!(s, "stabilizer       {} (order {})", self.stabilizer_label, self.stabilizer_order);
        let _ = writeln!(s, "cocycle order    {}{}", self.cocycle_order, if self.cocycle_trivial { " (trivial)" } else { "" });
        let _ = writeln!(s, "trivializable    {}", if self.trivializable { "yes" } else { "no" });
        if let Some(l) = &self.lambda {
            let nontrivial: Vec<String> = l.iter().filter(|v| v.value != "1").map(|v| format!("{}={}", v.element, v.value)).collect();
            if !nontrivial.is_empty() {
                let _ = writeln!(s, "lambda           {}", nontrivial.join(" "));
            }
        }
        let _ = writeln!(s, "extension        {} (order {})", self.extension_label, self.extension_order);
        let _ = writeln!(s, "irrep dims       {}", format_dims(&self.irrep_dims));
        let _ = writeln!(s, "eigenvalues      {}", format_spectrum(&self.eigenvalues));
        let _ = writeln!(s, "H(t) = 0         {}", if self.hamiltonian_vanishes { "yes" } else { "no" });
        s
    }
}

impl AnalysisReport {
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "graph {}  rank {}  vertices {}  Aut {} (order {})",
            self.graph, self.rank, self.vertices, self.automorphism_label, self.automorphism_order
        );
        let _ = writeln!(s, "tol {:e}  seed {}", self.options.tol, self.options.seed);
        let _ = writeln!(s);
        let _ = writeln!(s, "non-abelian strata:");
        for r in &self.non_abelian {
            let _ = writeln!(
                s,
                "  {:<8} {:<40} ext {:<10} dims {:<10} spec {}",
                r.stabilizer_label,
                r.points.join(" "),
                r.extension_label,
                format_dims(&r.irrep_dims),
                format_spectrum(&r.eigenvalues)
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "all strata:");
        for st in &self.strata {
            let _ = writeln!(
                s,
                "  {:<10} {:>3}  {:<36} ext {:<10} dims {}",
                st.stabilizer_label,
                st.stabilizer_order,
                st.fixed_set,
                st.report.extension_label,
                format_dims(&st.report.irrep_dims)
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "projective content: {}", if self.projective_content { "yes" } else { "none" });
        s
    }
}
