//! Two-step stratified Lie groups via structure constants.
//!
//! A group is `g = g_1 (+) g_2` with `[g_1, g_1] = g_2` central, encoded by
//! the coefficients `c[k][i][j]` of `[X_i, X_j]` along `U_k`. Everything
//! downstream (skew forms, spectral data, kernels) is a function of this
//! data and the inner product making the chosen bases orthonormal.

use crate::error::{Error, Result};
use crate::jacobi;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub d1: usize,
    pub d2: usize,
    /// `c[k][i][j]`, antisymmetric in `(i, j)`; flattened `k * d1 * d1 + i * d1 + j`.
    c: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

impl Point {
    pub fn new(x: Vec<f64>, u: Vec<f64>) -> Self {
        Point { x, u }
    }

    pub fn origin(d1: usize, d2: usize) -> Self {
        Point { x: vec![0.0; d1], u: vec![0.0; d2] }
    }
}

/// Sparse JSON encoding: unlisted entries are zero, indices are 1-based, and
/// antisymmetric counterparts are filled in automatically.
#[derive(Serialize, Deserialize)]
struct GroupSpecJson {
    d1: usize,
    d2: usize,
    c: Vec<StructureEntry>,
}

#[derive(Serialize, Deserialize)]
struct StructureEntry {
    k: usize,
    i: usize,
    j: usize,
    v: f64,
}

impl GroupSpec {
    pub fn from_dense(d1: usize, d2: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != d1 * d1 * d2 {
            return Err(Error::dimension(format!(
                "structure constant array has {} entries, expected {}",
                c.len(),
                d1 * d1 * d2
            )));
        }
        let spec = GroupSpec { d1, d2, c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_entries(d1: usize, d2: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = vec![0.0; d1 * d1 * d2];
        for &(k, i, j, v) in entries {
            if k == 0 || k > d2 || i == 0 || i > d1 || j == 0 || j > d1 {
                return Err(Error::validation(format!(
                    "entry (k={k}, i={i}, j={j}) out of range for d1={d1}, d2={d2}"
                )));
            }
            if i == j && v != 0.0 {
                return Err(Error::validation("diagonal structure constants must vanish"));
            }
            let (k, i, j) = (k - 1, i - 1, j - 1);
            let idx = k * d1 * d1 + i * d1 + j;
            let idx_t = k * d1 * d1 + j * d1 + i;
            if c[idx] != 0.0 && c[idx] != v {
                return Err(Error::validation(format!(
                    "conflicting values for c[{}][{}][{}]",
                    k + 1,
                    i + 1,
                    j + 1
                )));
            }
            if c[idx_t] != 0.0 && c[idx_t] != -v {
                return Err(Error::validation(format!(
                    "entry (k={}, i={}, j={}) conflicts with its antisymmetric partner",
                    k + 1,
                    i + 1,
                    j + 1
                )));
            }
            c[idx] = v;
            c[idx_t] = -v;
        }
        Self::from_dense(d1, d2, c)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: GroupSpecJson = serde_json::from_str(text)?;
        let entries: Vec<(usize, usize, usize, f64)> =
            parsed.c.iter().map(|e| (e.k, e.i, e.j, e.v)).collect();
        Self::from_entries(parsed.d1, parsed.d2, &entries)
    }

    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        for k in 0..self.d2 {
            for i in 0..self.d1 {
                for j in (i + 1)..self.d1 {
                    let v = self.c_at(k, i, j);
                    if v != 0.0 {
                        entries.push(StructureEntry { k: k + 1, i: i + 1, j: j + 1, v });
                    }
                }
            }
        }
        serde_json::to_string(&GroupSpecJson { d1: self.d1, d2: self.d2, c: entries }).unwrap()
    }

    #[inline]
    pub fn c_at(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[k * self.d1 * self.d1 + i * self.d1 + j]
    }

    /// Homogeneous dimension `Q = d1 + 2 d2`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.d1 + 2 * self.d2
    }

    /// Antisymmetry (exact) and the bracket-generating rank condition.
    pub fn validate(&self) -> Result<()> {
        if self.d1 == 0 || self.d2 == 0 {
            return Err(Error::validation("d1 and d2 must be positive"));
        }
        for k in 0..self.d2 {
            for i in 0..self.d1 {
                for j in 0..self.d1 {
                    if self.c_at(k, i, j) != -self.c_at(k, j, i) {
                        return Err(Error::validation(format!(
                            "antisymmetry violated at (k={}, i={}, j={})",
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        // rank{ vec(c[.][i][j]) : i < j } must equal d2: check the d2 x d2
        // Gram matrix of the pair-indexed rows.
        let pairs = self.d1 * (self.d1 - 1) / 2;
        let mut rows = DMatrix::<f64>::zeros(pairs, self.d2);
        let mut row = 0;
        for i in 0..self.d1 {
            for j in (i + 1)..self.d1 {
                for k in 0..self.d2 {
                    rows[(row, k)] = self.c_at(k, i, j);
                }
                row += 1;
            }
        }
        let gram = rows.transpose() * &rows;
        let eig = jacobi::symmetric_eigen(&gram, 1e-14)?;
        let min_sv = eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt();
        if min_sv <= 1e-10 {
            return Err(Error::validation(format!(
                "bracket-generating condition fails: smallest singular value {min_sv:.3e}"
            )));
        }
        Ok(())
    }

    /// `[x, x']` in second-layer coordinates.
    pub fn bracket(&self, x: &[f64], xp: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d1 || xp.len() != self.d1 {
            return Err(Error::dimension("bracket arguments must have length d1"));
        }
        let mut out = vec![0.0; self.d2];
        for k in 0..self.d2 {
            let mut s = 0.0;
            for i in 0..self.d1 {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..self.d1 {
                    s += self.c_at(k, i, j) * x[i] * xp[j];
                }
            }
            out[k] = s;
        }
        Ok(out)
    }

    /// Skew form `J_mu` with `(J_mu)_{j,i} = sum_k mu_k c[k][i][j]`, i.e.
    /// `<J_mu e_i, e_j> = mu([e_i, e_j])`.
    pub fn j_matrix(&self, mu: &[f64]) -> Result<DMatrix<f64>> {
        if mu.len() != self.d2 {
            return Err(Error::dimension(format!(
                "mu has length {}, expected d2 = {}",
                mu.len(),
                self.d2
            )));
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::validation("mu must be finite"));
        }
        let mut j = DMatrix::<f64>::zeros(self.d1, self.d1);
        for k in 0..self.d2 {
            if mu[k] == 0.0 {
                continue;
            }
            for i in 0..self.d1 {
                for jj in 0..self.d1 {
                    j[(jj, i)] += mu[k] * self.c_at(k, i, jj);
                }
            }
        }
        Ok(j)
    }

    pub fn multiply(&self, p: &Point, q: &Point) -> Result<Point> {
        if p.x.len() != self.d1 || q.x.len() != self.d1 || p.u.len() != self.d2 || q.u.len() != self.d2 {
            return Err(Error::dimension("point dimensions do not match group"));
        }
        let x: Vec<f64> = p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect();
        let br = self.bracket(&p.x, &q.x)?;
        let u: Vec<f64> = p
            .u
            .iter()
            .zip(&q.u)
            .zip(&br)
            .map(|((a, b), c)| a + b + 0.5 * c)
            .collect();
        Ok(Point { x, u })
    }
}

pub fn inverse(p: &Point) -> Point {
    Point {
        x: p.x.iter().map(|v| -v).collect(),
        u: p.u.iter().map(|v| -v).collect(),
    }
}

/// Anisotropic dilation `delta_R(x, u) = (R x, R^2 u)`.
pub fn dilate(r: f64, p: &Point) -> Result<Point> {
    if r <= 0.0 {
        return Err(Error::validation("dilation parameter must be positive"));
    }
    Ok(Point {
        x: p.x.iter().map(|v| r * v).collect(),
        u: p.u.iter().map(|v| r * r * v).collect(),
    })
}

/// Homogeneous norm `(|x|^4 + |u|^2)^{1/4}`.
pub fn homogeneous_norm(p: &Point) -> f64 {
    let x2: f64 = p.x.iter().map(|v| v * v).sum();
    let u2: f64 = p.u.iter().map(|v| v * v).sum();
    (x2 * x2 + u2).sqrt().sqrt()
}

#[derive(Clone, Debug)]
pub struct MetivierVerdict {
    pub verdict: bool,
    pub min_singular_value: f64,
    pub witness_mu: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
}

/// Deterministic low-discrepancy sample of the unit sphere `S^{d2-1}`.
pub fn sphere_samples(d2: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    match d2 {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci sphere.
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let a = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        _ => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    loop {
                        let v: Vec<f64> = (0..d2).map(|_| rng.random_range(-1.0..1.0)).collect();
                        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if norm > 1e-3 {
                            return v.iter().map(|x| x / norm).collect();
                        }
                    }
                })
                .collect()
        }
    }
}

/// Sampled Metivier certificate: negative verdicts are conclusive (the
/// witness direction exhibits a kernel), positive verdicts hold on the
/// sampled sphere grid only.
pub fn is_metivier(spec: &GroupSpec, n_samples: usize, tol: f64, seed: u64) -> Result<MetivierVerdict> {
    if n_samples == 0 {
        return Err(Error::validation("need at least one sample"));
    }
    let samples = sphere_samples(spec.d2, n_samples, seed);
    let mut min_sv = f64::INFINITY;
    let mut witness = samples[0].clone();
    for mu in &samples {
        let j = spec.j_matrix(mu)?;
        let s = -(&j * &j);
        let eig = jacobi::symmetric_eigen(&s, 1e-13)?;
        let sv = eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt();
        if sv < min_sv {
            min_sv = sv;
            witness = mu.clone();
        }
    }
    Ok(MetivierVerdict {
        verdict: min_sv > tol,
        min_singular_value: min_sv,
        witness_mu: witness,
        samples: samples.len(),
        tol,
    })
}

/// Heisenberg-type test via the polarized identity
/// `J_{e_k} J_{e_l} + J_{e_l} J_{e_k} = -2 delta_{kl} I` on the dual basis.
pub fn is_heisenberg_type(spec: &GroupSpec, tol: f64) -> Result<bool> {
    let eye = DMatrix::<f64>::identity(spec.d1, spec.d1);
    let js: Vec<DMatrix<f64>> = (0..spec.d2)
        .map(|k| {
            let mut mu = vec![0.0; spec.d2];
            mu[k] = 1.0;
            spec.j_matrix(&mu)
        })
        .collect::<Result<_>>()?;
    let mut max_resid: f64 = 0.0;
    for k in 0..spec.d2 {
        for l in k..spec.d2 {
            let anti = &js[k] * &js[l] + &js[l] * &js[k];
            let target = if k == l { -2.0 * &eye } else { DMatrix::zeros(spec.d1, spec.d1) };
            max_resid = max_resid.max((anti - target).amax());
        }
    }
    Ok(max_resid <= tol)
}

/// Heisenberg group H^n: `d1 = 2n`, `d2 = 1`, `[X_i, X_{n+i}] = U`.
pub fn heisenberg(n: usize) -> GroupSpec {
    assert!(n >= 1);
    let entries: Vec<(usize, usize, usize, f64)> =
        (1..=n).map(|i| (1, i, n + i, 1.0)).collect();
    GroupSpec::from_entries(2 * n, 1, &entries).expect("heisenberg spec is valid")
}

/// The `(d1, d2) = (4, 3)` family: `J_mu = J^-(mu) + J^+(A mu)` for a real
/// 3x3 matrix `A`, realizing the subspace `{(xi, A xi)}` of `so(4)`.
pub fn metivier_4_3(a: &[[f64; 3]; 3]) -> GroupSpec {
    let mut c = vec![0.0; 3 * 16];
    for k in 0..3 {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        let ae = [
            a[0][0] * e[0] + a[0][1] * e[1] + a[0][2] * e[2],
            a[1][0] * e[0] + a[1][1] * e[1] + a[1][2] * e[2],
            a[2][0] * e[0] + a[2][1] * e[1] + a[2][2] * e[2],
        ];
        let j = crate::spectral::jminus(&e) + crate::spectral::jplus(&ae);
        // c^k_{ij} = <J_{e_k} e_i, e_j> = J[(j, i)]
        for i in 0..4 {
            for jj in 0..4 {
                c[k * 16 + i * 4 + jj] = j[(jj, i)];
            }
        }
    }
    GroupSpec::from_dense(4, 3, c).expect("metivier_4_3 spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn heisenberg_j_squares_to_minus_identity() {
        let h1 = heisenberg(1);
        let j = h1.j_matrix(&[1.0]).unwrap();
        let m = -(&j * &j);
        assert!((m - DMatrix::<f64>::identity(2, 2)).norm() < 1e-14);
        let j0 = h1.j_matrix(&[0.0]).unwrap();
        assert_eq!(j0.norm(), 0.0);
    }

    #[test]
    fn j_matrix_linear_and_skew() {
        use rand::{Rng, SeedableRng};
        let spec = metivier_4_3(&[[0.3, 0.1, 0.0], [0.0, -0.4, 0.2], [0.1, 0.0, 0.5]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mu: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let nu: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let (a, b): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let combo: Vec<f64> = mu.iter().zip(&nu).map(|(m, n)| a * m + b * n).collect();
            let lhs = spec.j_matrix(&combo).unwrap();
            let rhs = spec.j_matrix(&mu).unwrap() * a + spec.j_matrix(&nu).unwrap() * b;
            assert!((lhs.clone() - rhs).amax() < 1e-14);
            assert!((lhs.clone() + lhs.transpose()).amax() == 0.0);
        }
    }

    #[test]
    fn group_law_examples() {
        let h1 = heisenberg(1);
        let p = Point::new(vec![1.0, 0.0], vec![0.0]);
        let q = Point::new(vec![0.0, 1.0], vec![0.0]);
        let pq = h1.multiply(&p, &q).unwrap();
        assert_eq!(pq, Point::new(vec![1.0, 1.0], vec![0.5]));

        let e = Point::origin(2, 1);
        assert_eq!(h1.multiply(&p, &e).unwrap(), p);
        let pinv = inverse(&p);
        assert_eq!(h1.multiply(&p, &pinv).unwrap(), e);
    }

    #[test]
    fn group_axioms_random() {
        use rand::{Rng, SeedableRng};
        let spec = metivier_4_3(&[[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut random_point = |rng: &mut rand_chacha::ChaCha8Rng| {
            Point::new(
                (0..4).map(|_| rng.random_range(-1.0..1.0)).collect(),
                (0..3).map(|_| rng.random_range(-1.0..1.0)).collect(),
            )
        };
        for _ in 0..30 {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let r = random_point(&mut rng);
            let lhs = spec.multiply(&spec.multiply(&p, &q).unwrap(), &r).unwrap();
            let rhs = spec.multiply(&p, &spec.multiply(&q, &r).unwrap()).unwrap();
            for (a, b) in lhs.x.iter().zip(&rhs.x).chain(lhs.u.iter().zip(&rhs.u)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn homogeneous_norm_scales_exactly() {
        let p = Point::new(vec![1.0, 0.0], vec![1.0]);
        assert_relative_eq!(
            homogeneous_norm(&dilate(2.0, &p).unwrap()),
            2.0 * homogeneous_norm(&p),
            max_relative = 1e-15
        );
        assert_eq!(homogeneous_norm(&Point::origin(2, 1)), 0.0);
        let q = Point::new(vec![3.0, 4.0], vec![0.0]);
        assert_relative_eq!(homogeneous_norm(&q), 5.0, max_relative = 1e-14);
        // ||delta_2 (1,0;1)|| = 2 * 2^{1/4}
        assert_relative_eq!(
            homogeneous_norm(&dilate(2.0, &p).unwrap()),
            2.0 * 2.0_f64.powf(0.25),
            max_relative = 1e-14
        );
    }

    #[test]
    fn metivier_verdicts() {
        let h1 = heisenberg(1);
        let v = is_metivier(&h1, 8, 1e-8, 0).unwrap();
        assert!(v.verdict);
        assert_relative_eq!(v.min_singular_value, 1.0, max_relative = 1e-12);

        let a = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let v = is_metivier(&metivier_4_3(&a), 300, 1e-8, 0).unwrap();
        assert!(v.verdict);
        assert!(v.min_singular_value >= 0.5 - 1e-9);

        // H^1 x R encoded with a degenerate first-layer direction.
        let spec = GroupSpec::from_entries(3, 1, &[(1, 1, 2, 1.0)]).unwrap();
        let v = is_metivier(&spec, 4, 1e-8, 0).unwrap();
        assert!(!v.verdict);
        assert!(v.min_singular_value < 1e-12);
    }

    #[test]
    fn heisenberg_type_checks() {
        assert!(is_heisenberg_type(&heisenberg(2), 1e-12).unwrap());
        let zero = [[0.0; 3]; 3];
        assert!(is_heisenberg_type(&metivier_4_3(&zero), 1e-12).unwrap());
        let two = [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]];
        assert!(!is_heisenberg_type(&metivier_4_3(&two), 1e-6).unwrap());
        // H-type implies Metivier
        let v = is_metivier(&metivier_4_3(&zero), 100, 1e-8, 0).unwrap();
        assert!(v.verdict);
    }

    #[test]
    fn metivier_43_matches_su2_blocks() {
        let a = [[0.5, 0.1, 0.0], [-0.2, 0.5, 0.3], [0.0, 0.1, 0.7]];
        let spec = metivier_4_3(&a);
        let xi = [0.3, -1.2, 0.4];
        let axi = [
            a[0][0] * xi[0] + a[0][1] * xi[1] + a[0][2] * xi[2],
            a[1][0] * xi[0] + a[1][1] * xi[1] + a[1][2] * xi[2],
            a[2][0] * xi[0] + a[2][1] * xi[1] + a[2][2] * xi[2],
        ];
        let j = spec.j_matrix(&xi).unwrap();
        let expected = crate::spectral::jminus(&xi) + crate::spectral::jplus(&axi);
        assert!((j - expected).amax() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let spec = metivier_4_3(&[[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]]);
        let text = spec.to_json();
        let back = GroupSpec::from_json(&text).unwrap();
        assert_eq!(back.d1, 4);
        assert_eq!(back.d2, 3);
        for k in 0..3 {
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(back.c_at(k, i, j), spec.c_at(k, i, j));
                }
            }
        }
    }

    #[test]
    fn json_completes_antisymmetry() {
        let text = r#"{"d1":2,"d2":1,"c":[{"k":1,"i":1,"j":2,"v":1.0}]}"#;
        let spec = GroupSpec::from_json(text).unwrap();
        assert_eq!(spec.c_at(0, 1, 0), -1.0);
        assert_eq!(spec.homogeneous_dimension(), 4);
    }

    #[test]
    fn rejects_non_bracket_generating() {
        // d2 = 2 but brackets only span one direction.
        let res = GroupSpec::from_entries(2, 2, &[(1, 1, 2, 1.0)]);
        assert!(res.is_err());
    }
}
