use std::collections::VecDeque;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{eigenvalues, Hamiltonian};
use crate::torus::{Rational, TorusPoint};

/// Affine path s ↦ start + s·(end − start), s ∈ [0,1], endpoints in turns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPath {
    pub start: Vec<Rational>,
    pub end: Vec<Rational>,
}

impl TorusPath {
    pub fn new(start: Vec<Rational>, end: Vec<Rational>) -> Result<Self> {
        if start.len() != end.len() {
            return Err(Error::RankMismatch { expected: start.len(), found: end.len() });
        }
        Ok(TorusPath { start, end })
    }

    /// t = (s, s, …, s) for s from 0 to 1 turn.
    pub fn diagonal(rank: usize) -> Self {
        TorusPath { start: vec![Rational::from_integer(0); rank], end: vec![Rational::from_integer(1); rank] }
    }

    pub fn constant(t: Vec<Rational>) -> Self {
        TorusPath { start: t.clone(), end: t }
    }

    pub fn rank(&self) -> usize {
        self.start.len()
    }

    pub fn at(&self, s: f64) -> Vec<f64> {
        self.start
            .iter()
            .zip(&self.end)
            .map(|(a, b)| {
                let (a, b) = (ratio_f64(a), ratio_f64(b));
                a + s * (b - a)
            })
            .collect()
    }

    /// Accepts "diag" or "t1,..,tn:u1,..,un" with each coordinate in the point syntax.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("diag") || text.eq_ignore_ascii_case("diagonal") {
            return Ok(Self::diagonal(rank));
        }
        let (a, b) = text.split_once(':').ok_or_else(|| Error::Parse(format!("path {text:?}: expected \"diag\" or start:end")))?;
        let exact = |s: &str| -> Result<Vec<Rational>> {
            let p = TorusPoint::from_str(s)?;
            p.as_exact().map(|r| r.to_vec()).ok_or_else(|| Error::Parse(format!("path endpoint {s:?} must be rational turns")))
        };
        let path = Self::new(exact(a)?, exact(b)?)?;
        if path.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, found: path.rank() });
        }
        Ok(path)
    }
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScanSpec {
    Grid { resolution: Vec<usize> },
    Path { path: TorusPath, samples: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    pub points: Vec<Vec<f64>>,
    pub eigenvalues: Vec<Vec<f64>>,
    /// Smallest gap between consecutive eigenvalues; infinite for 1×1 Hamiltonians.
    pub min_gap: Vec<f64>,
}

fn min_gap(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn sample(h: &Hamiltonian, points: Vec<Vec<f64>>, spec: ScanSpec) -> Result<ScanResult> {
    let eigenvalues = points.par_iter().map(|t| eigenvalues(&h.evaluate_turns(t))).collect::<Result<Vec<_>>>()?;
    let min_gap = eigenvalues.iter().map(|v| min_gap(v)).collect();
    Ok(ScanResult { spec, points, eigenvalues, min_gap })
}

/// Row-major index → per-axis indices, last axis fastest.
fn unravel(mut idx: usize, resolution: &[usize]) -> Vec<usize> {
    let mut out = vec![0; resolution.len()];
    for (k, &r) in resolution.iter().enumerate().rev() {
        out[k] = idx % r;
        idx /= r;
    }
    out
}

fn ravel(ix: &[usize], resolution: &[usize]) -> usize {
    ix.iter().zip(resolution).fold(0, |acc, (&i, &r)| acc * r + i)
}

/// Spectra on the half-open grid {i/r : 0 ≤ i < r} per axis.
pub fn scan_grid(h: &Hamiltonian, resolution: &[usize]) -> Result<ScanResult> {
    if resolution.len() != h.rank() {
        return Err(Error::RankMismatch { expected: h.rank(), found: resolution.len() });
    }
    if let Some(&r) = resolution.iter().find(|&&r| r < 2) {
        return Err(Error::Parse(format!("grid resolution {r} is below 2")));
    }
    let total: usize = resolution.iter().product();
    let points = (0..total)
        .map(|i| unravel(i, resolution).iter().zip(resolution).map(|(&k, &r)| k as f64 / r as f64).collect())
        .collect();
    sample(h, points, ScanSpec::Grid { resolution: resolution.to_vec() })
}

/// Spectra at `samples` equally spaced parameters on the closed interval [0,1].
pub fn scan_path(h: &Hamiltonian, path: &TorusPath, samples: usize) -> Result<ScanResult> {
    if path.rank() != h.rank() {
        return Err(Error::RankMismatch { expected: h.rank(), found: path.rank() });
    }
    if samples < 2 {
        return Err(Error::Parse(format!("path needs at least 2 samples, got {samples}")));
    }
    let points = (0..samples).map(|i| path.at(i as f64 / (samples - 1) as f64)).collect();
    sample(h, points, ScanSpec::Path { path: path.clone(), samples })
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    /// Scan indices belonging to the cluster.
    pub members: Vec<usize>,
    /// Point of smallest gap within the cluster.
    pub best: Vec<f64>,
    pub min_gap: f64,
}

impl Candidate {
    /// Periodic sup-distance (turns) from the best point to `t`.
    pub fn distance_to(&self, t: &[f64]) -> f64 {
        periodic_distance(&self.best, t)
    }
}

pub fn periodic_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(1.0);
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

fn neighbours(idx: usize, spec: &ScanSpec) -> Vec<usize> {
    match spec {
        ScanSpec::Grid { resolution } => {
            let ix = unravel(idx, resolution);
            let n = resolution.len();
            let mut out = Vec::with_capacity(3usize.pow(n as u32));
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let mut jx = ix.clone();
                let mut moved = false;
                for k in 0..n {
                    let step = c % 3;
                    c /= 3;
                    if step != 1 {
                        moved = true;
                        jx[k] = (jx[k] + resolution[k] + step - 1) % resolution[k];
                    }
                }
                if moved {
                    out.push(ravel(&jx, resolution));
                }
            }
            out
        }
        ScanSpec::Path { samples, .. } => {
            let mut out = Vec::new();
            if idx > 0 {
                out.push(idx - 1);
            }
            if idx + 1 < *samples {
                out.push(idx + 1);
            }
            out
        }
    }
}

/// Connected clusters (periodic on grids) of scan points whose minimum gap is below `gap_tol`.
pub fn degeneracy_candidates(scan: &ScanResult, gap_tol: f64) -> Vec<Candidate> {
    let n = scan.points.len();
    let below: Vec<bool> = scan.min_gap.iter().map(|&g| g < gap_tol).collect();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if !below[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            members.push(i);
            for j in neighbours(i, &scan.spec) {
                if below[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        let &best = members.iter().min_by(|&&a, &&b| scan.min_gap[a].total_cmp(&scan.min_gap[b])).expect("non-empty cluster");
        out.push(Candidate { best: scan.points[best].clone(), min_gap: scan.min_gap[best], members });
    }
    out
}

/// Adjacent samples whose sorted eigenvalues move by more than `factor`·L·step.
pub fn continuity_violations(scan: &ScanResult, lipschitz: f64, factor: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut check = |i: usize, j: usize| {
        let step = periodic_distance(&scan.points[i], &scan.points[j]);
        let jump = scan.eigenvalues[i].iter().zip(&scan.eigenvalues[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if jump > factor * lipschitz * step + 1e-12 {
            out.push((i, j));
        }
    };
    match &scan.spec {
        ScanSpec::Grid { resolution } => {
            for i in 0..scan.points.len() {
                let ix = unravel(i, resolution);
                for k in 0..resolution.len() {
                    let mut jx = ix.clone();
                    jx[k] = (jx[k] + 1) % resolution[k];
                    check(i, ravel(&jx, resolution));
                }
            }
        }
        ScanSpec::Path { samples, .. } => {
            for i in 1..*samples {
                check(i - 1, i);
            }
        }
    }
    out
}

/// Shortest decimal rendering with at most 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().expect("formatted float parses");
    let mag = v.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let mut t = format!("{:.*}", decimals, v);
        if t.contains('.') {
            t = t.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        if t == "-0" {
            t = "0".into();
        }
        t
    } else {
        let (mant, exp) = s.split_once('e').expect("scientific notation");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{exp}")
    }
}

pub fn write_csv<W: Write>(scan: &ScanResult, mut out: W) -> Result<()> {
    let n = scan.points.first().map_or(0, |p| p.len());
    let k = scan.eigenvalues.first().map_or(0, |v| v.len());
    let header: Vec<String> = (1..=n).map(|i| format!("t_{i}")).chain((1..=k).map(|i| format!("lambda_{i}"))).chain(["min_gap".to_string()]).collect();
    writeln!(out, "{}", header.join(","))?;
    for ((t, ev), gap) in scan.points.iter().zip(&scan.eigenvalues).zip(&scan.min_gap) {
        let row: Vec<String> = t.iter().chain(ev).chain([gap]).map(|&x| format_sig12(x)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::hamiltonian::build_hamiltonian;

    fn ham(name: &str) -> Hamiltonian {
        let wg = builtin(name).unwrap();
        build_hamiltonian(&wg.graph, &wg.weights, &wg.tree).unwrap()
    }

    #[test]
    fn primitive_grid_is_cosine_sum() {
        let h = ham("P");
        let scan = scan_grid(&h, &[5, 5, 5]).unwrap();
        assert_eq!(scan.points.len(), 125);
        for (t, ev) in scan.points.iter().zip(&scan.eigenvalues) {
            let want: f64 = t.iter().map(|x| 2.0 * (std::f64::consts::TAU * x).cos()).sum();
            assert!((ev[0] - want).abs() < 1e-12);
        }
        assert!((scan.eigenvalues[0][0] - 6.0).abs() < 1e-12);
        assert!(scan.min_gap.iter().all(|g| g.is_infinite()));
    }

    #[test]
    fn constant_path_is_flat() {
        let h = ham("G");
        let path = TorusPath::constant(vec![Rational::new(1, 5); 3]);
        let scan = scan_path(&h, &path, 7).unwrap();
        for row in &scan.eigenvalues {
            for (a, b) in row.iter().zip(&scan.eigenvalues[0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn honeycomb_has_two_dirac_clusters() {
        let h = ham("honeycomb");
        let scan = scan_grid(&h, &[30, 30]).unwrap();
        let c = degeneracy_candidates(&scan, 0.05);
        assert_eq!(c.len(), 2);
        for cand in c {
            let d1 = cand.distance_to(&[1.0 / 3.0, 2.0 / 3.0]);
            let d2 = cand.distance_to(&[2.0 / 3.0, 1.0 / 3.0]);
            assert!(d1.min(d2) < 0.05);
        }
    }

    #[test]
    fn clusters_wrap_around_the_torus() {
        let scan = ScanResult {
            spec: ScanSpec::Grid { resolution: vec![4] },
            points: (0..4).map(|i| vec![i as f64 / 4.0]).collect(),
            eigenvalues: vec![vec![0.0, 0.0]; 4],
            min_gap: vec![0.0, 1.0, 1.0, 0.0],
        };
        assert_eq!(degeneracy_candidates(&scan, 0.5).len(), 1);
    }

    #[test]
    fn path_parsing() {
        assert_eq!(TorusPath::parse("diag", 2).unwrap(), TorusPath::diagonal(2));
        let p = TorusPath::parse("0,0:1/2,1/4", 2).unwrap();
        assert_eq!(p.end, vec![Rational::new(1, 2), Rational::new(1, 4)]);
        assert!(TorusPath::parse("0,0:1", 2).is_err());
        assert!(TorusPath::parse("sideways", 2).is_err());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(-1.7320508075688772), "-1.73205080757");
        assert_eq!(format_sig12(0.25), "0.25");
        assert_eq!(format_sig12(f64::INFINITY), "inf");
        assert_eq!(format_sig12(1e-20), "1e-20");
        assert_eq!(format_sig12(-1e-13), "-1e-13");
    }

    #[test]
    fn grid_scan_is_continuous() {
        let h = ham("G");
        let scan = scan_grid(&h, &[8, 8, 8]).unwrap();
        assert!(continuity_violations(&scan, h.lipschitz_bound(), 10.0).is_empty());
    }
}
