use num_complex::Complex64;
use serde::Serialize;

use super::amatrix::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

fn off_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix, eigenvalues ascending.
pub fn eigensystem(h: &CMatrix) -> Result<EigenSystem> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::contract("eigensystem needs a square matrix"));
    }
    let scale = h.norm();
    let dev = (h - h.adjoint()).norm();
    if dev > 1e-9 * scale.max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let mut a = (h + h.adjoint()).scale(0.5);
    let mut v = CMatrix::identity(n, n);
    let threshold = 1e-13 * scale;
    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let u = apq / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -u.conj() * s;
                let jqq = u.conj() * c;
                for i in 0..n {
                    let (aip, aiq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = aip * jpp + aiq * jqp;
                    a[(i, q)] = aip * jpq + aiq * jqq;
                    let (vip, viq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = vip * jpp + viq * jqp;
                    v[(i, q)] = vip * jpq + viq * jqq;
                }
                for j in 0..n {
                    let (apj, aqj) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
                    a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = idx.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        let mut x = v.column(i).into_owned();
        if let Some(lead) = x.iter().find(|z| z.norm() > 1e-8).copied() {
            x *= lead.conj() / lead.norm();
        }
        vectors.set_column(col, &x);
    }
    Ok(EigenSystem { values, vectors })
}

pub fn eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigensystem(h)?.values)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub mean: f64,
    pub multiplicity: usize,
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyProfile {
    pub clusters: Vec<Cluster>,
}

impl DegeneracyProfile {
    pub fn partition(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }
}

/// Single-linkage clustering of sorted eigenvalues with absolute gap `tol`.
pub fn degeneracy_profile(values: &[f64], tol: f64) -> DegeneracyProfile {
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if x - values[i - 1] <= tol => {
                c.mean += (x - c.mean) / (c.multiplicity + 1) as f64;
                c.multiplicity += 1;
            }
            _ => clusters.push(Cluster { mean: x, multiplicity: 1, start: i }),
        }
    }
    DegeneracyProfile { clusters }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> CMatrix {
        CMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { 0.0 } else { 1.0 }, 0.0))
    }

    fn check_contract(h: &CMatrix, es: &EigenSystem) {
        let n = h.nrows();
        let scale = h.norm().max(1.0);
        for k in 0..n {
            let v = es.vectors.column(k);
            let r = h * v - v * Complex64::new(es.values[k], 0.0);
            assert!(r.norm() <= 1e-9 * scale, "residual {}", r.norm());
        }
        let u = es.vectors.adjoint() * &es.vectors;
        assert!((u - CMatrix::identity(n, n)).norm() < 1e-9);
        assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complete_graph_spectrum() {
        let es = eigensystem(&k4()).unwrap();
        let want = [-1.0, -1.0, -1.0, 3.0];
        for (a, b) in es.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        check_contract(&k4(), &es);
        assert_eq!(degeneracy_profile(&es.values, 1e-8).partition(), vec![3, 1]);
    }

    #[test]
    fn zero_matrix() {
        let z = CMatrix::zeros(3, 3);
        let es = eigensystem(&z).unwrap();
        assert_eq!(es.values, vec![0.0; 3]);
    }

    #[test]
    fn complex_two_by_two() {
        let z = Complex64::new(0.3, -1.2);
        let h = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.5, 0.0), z, z.conj(), Complex64::new(-0.25, 0.0)]);
        let es = eigensystem(&h).unwrap();
        let (tr, det) = (0.25, -0.125 - z.norm_sqr());
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!((es.values[0] - (tr - disc) / 2.0).abs() < 1e-12);
        assert!((es.values[1] - (tr + disc) / 2.0).abs() < 1e-12);
        check_contract(&h, &es);
        for k in 0..2 {
            let lead = es.vectors.column(k).iter().find(|x| x.norm() > 1e-8).copied().unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(matches!(eigensystem(&h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn profile_partitions() {
        let s = 3f64.sqrt();
        assert_eq!(degeneracy_profile(&[-s, -s, s, s], 1e-8).partition(), vec![2, 2]);
        assert_eq!(degeneracy_profile(&[-2.0, -0.5, 0.1, 1.7], 1e-8).partition(), vec![1, 1, 1, 1]);
        let p = degeneracy_profile(&[1.0, 1.0 + 1e-10, 2.0], 1e-8);
        assert!((p.clusters[0].mean - 1.0).abs() < 1e-9);
    }
}
