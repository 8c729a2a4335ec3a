//! Spectral decomposition of the skew forms `J_mu`.
//!
//! The generic path eigendecomposes `-J_mu^2` with the Jacobi solver and
//! clusters square-rooted eigenvalues into blocks `(b_n, P_n)` of even rank.
//! For `(d1, d2) = (4, 3)` the `so(4) = su(2) (+) su(2)` splitting gives
//! closed forms for both eigenvalues and projections, which serve as the
//! independent oracle for the generic path and as the smooth route for
//! mu-derivative probes along a kernel direction of `A`.

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::jacobi;
use nalgebra::DMatrix;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// Distinct positive square-rooted eigenvalues, strictly decreasing.
    pub b: Vec<f64>,
    /// Half-ranks: `rank(P_n) = 2 r_n`.
    pub r: Vec<usize>,
    /// Orthogonal projections onto the blocks.
    pub p: Vec<DMatrix<f64>>,
    /// Radical dimension (zero for Metivier groups at `mu != 0`).
    pub r0: usize,
    /// Projection onto the radical.
    pub p0: DMatrix<f64>,
    /// Min relative gap between adjacent `b_n`; infinite for a single block.
    pub gap: f64,
}

impl SpectralDecomposition {
    pub fn n_blocks(&self) -> usize {
        self.b.len()
    }

    /// Block norms `|P_n x|` for a first-layer vector.
    pub fn block_norms(&self, x: &[f64]) -> Vec<f64> {
        let xv = nalgebra::DVector::from_column_slice(x);
        self.p.iter().map(|p| (p * &xv).norm()).collect()
    }

    /// Check the decomposition contract against the matrix it came from.
    pub fn validate(&self, j: &DMatrix<f64>) -> Result<()> {
        let d1 = j.nrows();
        let eye = DMatrix::<f64>::identity(d1, d1);
        let mut sum = self.p0.clone();
        for p in &self.p {
            sum += p;
        }
        if (sum - eye).norm() > 1e-10 * (d1 as f64).sqrt() {
            return Err(Error::numerical("projections do not sum to identity"));
        }
        for (n, p) in self.p.iter().enumerate() {
            if (p - p.transpose()).norm() > 1e-10 {
                return Err(Error::numerical("projection not symmetric"));
            }
            if (p * p - p).norm() > 1e-10 {
                return Err(Error::numerical("projection not idempotent"));
            }
            if (p.trace() - 2.0 * self.r[n] as f64).abs() > 1e-8 {
                return Err(Error::numerical("projection rank mismatch"));
            }
            for q in self.p.iter().skip(n + 1) {
                if (p * q).norm() > 1e-10 {
                    return Err(Error::numerical("projections not mutually orthogonal"));
                }
            }
            let comm = j * p - p * j;
            if comm.norm() > 1e-9 * j.norm().max(1.0) {
                return Err(Error::numerical("J does not commute with a projection"));
            }
        }
        let s = -(j * j);
        let mut rec = DMatrix::<f64>::zeros(d1, d1);
        for (bn, p) in self.b.iter().zip(&self.p) {
            rec += p * (bn * bn);
        }
        if (&s - rec).norm() > 1e-9 * s.norm().max(1e-300) {
            return Err(Error::numerical("spectral reconstruction residual too large"));
        }
        for w in self.b.windows(2) {
            if !(w[0] / w[1] >= 1.0 + self.gap - 1e-15) {
                return Err(Error::numerical("stored gap inconsistent with eigenvalues"));
            }
        }
        Ok(())
    }
}

/// Cluster the square-rooted spectrum of `-J^2` into spectral blocks.
pub fn decompose_matrix(j: &DMatrix<f64>, cluster_rel_tol: f64) -> Result<SpectralDecomposition> {
    let d1 = j.nrows();
    let s = -(j * j);
    let eig = jacobi::symmetric_eigen(&s, 1e-14)?;
    let svals: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let s_max = svals.first().copied().unwrap_or(0.0);
    if s_max == 0.0 {
        return Err(Error::validation("J vanishes; no spectral blocks"));
    }

    // Walk the descending singular values, starting a new cluster whenever
    // the relative drop exceeds the tolerance.
    let zero_cut = 1e-10 * s_max;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut radical: Vec<usize> = Vec::new();
    for (i, &sv) in svals.iter().enumerate() {
        if sv <= zero_cut {
            radical.push(i);
            continue;
        }
        match clusters.last_mut() {
            Some(cluster) => {
                let rep = svals[cluster[0]];
                if (rep - sv) <= cluster_rel_tol * rep {
                    cluster.push(i);
                } else {
                    clusters.push(vec![i]);
                }
            }
            None => clusters.push(vec![i]),
        }
    }

    let mut b = Vec::with_capacity(clusters.len());
    let mut r = Vec::with_capacity(clusters.len());
    let mut p = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        if cluster.len() % 2 != 0 {
            return Err(Error::numerical(format!(
                "nonzero eigenvalue cluster of odd multiplicity {} (cluster_rel_tol = {:.1e} \
                 splits or merges a block)",
                cluster.len(),
                cluster_rel_tol
            )));
        }
        let mean = cluster.iter().map(|&i| svals[i]).sum::<f64>() / cluster.len() as f64;
        let mut proj = DMatrix::<f64>::zeros(d1, d1);
        for &i in cluster {
            let v = eig.vectors.column(i);
            proj += v * v.transpose();
        }
        b.push(mean);
        r.push(cluster.len() / 2);
        p.push(proj);
    }
    let mut p0 = DMatrix::<f64>::zeros(d1, d1);
    for &i in &radical {
        let v = eig.vectors.column(i);
        p0 += v * v.transpose();
    }
    let gap = b
        .windows(2)
        .map(|w| w[0] / w[1] - 1.0)
        .fold(f64::INFINITY, f64::min);

    let dec = SpectralDecomposition { b, r, p, r0: radical.len(), p0, gap };
    dec.validate(j)?;
    Ok(dec)
}

/// Decompose `-J_mu^2` for a group spec at `mu != 0`.
pub fn decompose_j(spec: &GroupSpec, mu: &[f64], cluster_rel_tol: f64) -> Result<SpectralDecomposition> {
    if mu.iter().map(|m| m * m).sum::<f64>() == 0.0 {
        return Err(Error::validation("decompose_j requires mu != 0"));
    }
    decompose_matrix(&spec.j_matrix(mu)?, cluster_rel_tol)
}

/// The `su(2)` block of `so(4)`.
pub fn jminus(xi: &[f64; 3]) -> DMatrix<f64> {
    let (x1, x2, x3) = (xi[0], xi[1], xi[2]);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, -x3, -x1, -x2, //
            x3, 0.0, x2, -x1, //
            x1, -x2, 0.0, x3, //
            x2, x1, -x3, 0.0,
        ],
    )
}

/// The conjugate block `K su(2) K`, `K = diag(1,1,1,-1)`.
pub fn jplus(eta: &[f64; 3]) -> DMatrix<f64> {
    let (e1, e2, e3) = (eta[0], eta[1], eta[2]);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, -e3, -e1, e2, //
            e3, 0.0, e2, e1, //
            e1, -e2, 0.0, -e3, //
            -e2, -e1, e3, 0.0,
        ],
    )
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Eigenvalue pair of `-(J^-(xi) + J^+(eta))^2`: `(|xi| + |eta|, ||xi| - |eta||)`.
pub fn so4_eigenvalues(xi: &[f64; 3], eta: &[f64; 3]) -> (f64, f64) {
    let a = norm3(xi);
    let b = norm3(eta);
    (a + b, (a - b).abs())
}

/// Spectral projections for distinct eigenvalues:
/// `P_{1,2} = 1/2 I -+ 1/2 (J^+(eta)/|eta|) (J^-(xi)/|xi|)`.
pub fn so4_projections(xi: &[f64; 3], eta: &[f64; 3]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let a = norm3(xi);
    let b = norm3(eta);
    if a == 0.0 || b == 0.0 || (a - b).abs() <= f64::EPSILON * (a + b) {
        return Err(Error::validation(
            "so4_projections needs xi != 0, eta != 0, |xi| != |eta|",
        ));
    }
    let eye = DMatrix::<f64>::identity(4, 4);
    let k = jplus(eta) * jminus(xi) / (a * b);
    let p1 = (&eye - &k) * 0.5;
    let p2 = (&eye + &k) * 0.5;
    Ok((p1, p2))
}

/// Eigenvalues for the `{(xi, A xi)}` family: the `so4` pair with `eta = A xi`.
pub fn metivier43_eigen(a: &[[f64; 3]; 3], xi: &[f64; 3]) -> (f64, f64) {
    so4_eigenvalues(xi, &apply3(a, xi))
}

pub fn apply3(a: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

/// Inner product on `so(4)` normalized so the `su(2) (+) su(2)` coordinates
/// are isometric: `<J, J'> = -tr(J J') / 4`.
pub fn so4_inner(j: &DMatrix<f64>, jp: &DMatrix<f64>) -> f64 {
    -0.25 * (j * jp).trace()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KerAClass {
    /// `ker A = {0}`.
    Zero,
    /// `ker A = R^3` (i.e. `A = 0`).
    Full,
    /// A proper nontrivial kernel.
    Intermediate,
}

#[derive(Clone, Debug)]
pub struct KerAReport {
    pub class: KerAClass,
    /// Unit kernel direction for `Full`/`Intermediate`; an arbitrary fixed
    /// unit vector when the kernel is trivial.
    pub v: [f64; 3],
}

/// Classify `ker A` by the numerical rank of `A` (singular values against
/// `tol * sigma_max`).
pub fn ker_a_classify(a: &[[f64; 3]; 3], tol: f64) -> Result<KerAReport> {
    let m = DMatrix::from_fn(3, 3, |i, j| a[i][j]);
    let gram = m.transpose() * &m;
    let eig = jacobi::symmetric_eigen(&gram, 1e-14)?;
    let svals: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let smax = svals[0];
    if smax == 0.0 {
        return Ok(KerAReport { class: KerAClass::Full, v: [0.0, 0.0, 1.0] });
    }
    let rank = svals.iter().filter(|&&s| s > tol * smax).count();
    let vcol = eig.vectors.column(2);
    let v = [vcol[0], vcol[1], vcol[2]];
    Ok(match rank {
        3 => KerAReport { class: KerAClass::Zero, v: [0.0, 0.0, 1.0] },
        0 => KerAReport { class: KerAClass::Full, v: [0.0, 0.0, 1.0] },
        _ => KerAReport { class: KerAClass::Intermediate, v },
    })
}

#[derive(Clone, Debug)]
pub struct MuBoundsRow {
    pub mu: [f64; 3],
    pub alpha: usize,
    pub db_over_b: [f64; 2],
    pub dp_norm: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct MuBoundsProbe {
    pub kappa_b: f64,
    pub kappa_p: f64,
    pub skipped: usize,
    pub rows: Vec<MuBoundsRow>,
}

fn op_norm(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    match jacobi::symmetric_eigen(&g, 1e-13) {
        Ok(e) => e.values.first().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => m.norm(),
    }
}

/// Closed-form spectral data at a point `mu` identified with `xi` in `R^3`.
fn so4_data(a: &[[f64; 3]; 3], mu: &[f64; 3]) -> Result<(f64, f64, DMatrix<f64>, DMatrix<f64>)> {
    let eta = apply3(a, mu);
    let (b1, b2) = so4_eigenvalues(mu, &eta);
    let (p1, p2) = so4_projections(mu, &eta)?;
    Ok((b1, b2, p1, p2))
}

/// Finite-difference probe of `|D^alpha b_n| / b_n` and `||D^alpha P_n||` for
/// `D = |mu| d_v`, sampled over the unit sphere. Samples whose stencil hits a
/// degenerate point (`eta = 0` or `|xi| = |eta|` within `skip_tol`) are
/// skipped and counted.
pub fn mu_derivative_bounds_probe(
    a: &[[f64; 3]; 3],
    v: &[f64; 3],
    sphere_samples: usize,
    h1: f64,
    h2: f64,
) -> Result<MuBoundsProbe> {
    let vnorm = norm3(v);
    if (vnorm - 1.0).abs() > 1e-12 {
        return Err(Error::validation("direction v must be a unit vector"));
    }
    let skip_tol = 1e-6;
    let full_kernel = ker_a_classify(a, 1e-12)?.class == KerAClass::Full;
    let samples = crate::group::sphere_samples(3, sphere_samples, 0);
    let mut rows = Vec::new();
    let mut skipped = 0;
    let mut kappa_b = 0.0_f64;
    let mut kappa_p = 0.0_f64;

    'samples: for s in &samples {
        let mu = [s[0], s[1], s[2]];
        for alpha in 1..=2usize {
            let h = if alpha == 1 { h1 } else { h2 };
            // |mu| = 1 on the sphere, so D = d_v with absolute step h, and
            // D^2 = (mu . v) d_v + d_v^2.
            let offsets = [-h, 0.0, h];
            let mut stencil = Vec::with_capacity(3);
            for &o in &offsets {
                let m = [mu[0] + o * v[0], mu[1] + o * v[1], mu[2] + o * v[2]];
                if full_kernel {
                    // A = 0 is Heisenberg type: one block, b = |mu|, P = I.
                    let b = norm3(&m);
                    stencil.push((b, b, DMatrix::identity(4, 4), DMatrix::zeros(4, 4)));
                    continue;
                }
                let eta = apply3(a, &m);
                let (b1, b2) = so4_eigenvalues(&m, &eta);
                if norm3(&eta) <= skip_tol || (b2 / b1.max(1e-300)) <= skip_tol {
                    skipped += 1;
                    continue 'samples;
                }
                stencil.push(so4_data(a, &m)?);
            }
            let (b1_0, b2_0, ref p1_0, ref p2_0) = stencil[1];
            let mudotv = mu[0] * v[0] + mu[1] * v[1] + mu[2] * v[2];
            let d_scalar = |fm: f64, f0: f64, fp: f64| -> f64 {
                match alpha {
                    1 => (fp - fm) / (2.0 * h),
                    _ => mudotv * (fp - fm) / (2.0 * h) + (fp - 2.0 * f0 + fm) / (h * h),
                }
            };
            let d_matrix = |fm: &DMatrix<f64>, f0: &DMatrix<f64>, fp: &DMatrix<f64>| {
                match alpha {
                    1 => (fp - fm) / (2.0 * h),
                    _ => (fp - fm) * (mudotv / (2.0 * h)) + (fp - f0 * 2.0 + fm) / (h * h),
                }
            };
            let db1 = d_scalar(stencil[0].0, b1_0, stencil[2].0).abs() / b1_0;
            let db2 = d_scalar(stencil[0].1, b2_0, stencil[2].1).abs() / b2_0;
            let dp1 = op_norm(&d_matrix(&stencil[0].2, p1_0, &stencil[2].2));
            let dp2 = op_norm(&d_matrix(&stencil[0].3, p2_0, &stencil[2].3));
            kappa_b = kappa_b.max(db1).max(db2);
            kappa_p = kappa_p.max(dp1).max(dp2);
            rows.push(MuBoundsRow { mu, alpha, db_over_b: [db1, db2], dp_norm: [dp1, dp2] });
        }
    }
    Ok(MuBoundsProbe { kappa_b, kappa_p, skipped, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn jminus_jplus_match_displayed_matrices() {
        let j = jminus(&[1.0, 0.0, 0.0]);
        // column checks for xi = e1
        assert_eq!(j[(0, 2)], -1.0);
        assert_eq!(j[(1, 3)], -1.0);
        assert_eq!(j[(2, 0)], 1.0);
        assert_eq!(j[(3, 1)], 1.0);
        assert_eq!(jminus(&[0.0; 3]).norm(), 0.0);

        let jp = jplus(&[0.0, 1.0, 0.0]);
        assert_eq!(jp[(0, 3)], 1.0);
        assert_eq!(jp[(1, 2)], 1.0);
        assert_eq!(jp[(2, 1)], -1.0);
        assert_eq!(jp[(3, 0)], -1.0);
    }

    #[test]
    fn su2_blocks_square_and_commute() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let xi = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let eta = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let jm = jminus(&xi);
            let jp = jplus(&eta);
            let eye = DMatrix::<f64>::identity(4, 4);
            assert!(((&jm * &jm) + &eye * norm3(&xi).powi(2)).norm() < 1e-13);
            assert!(((&jp * &jp) + &eye * norm3(&eta).powi(2)).norm() < 1e-13);
            assert!(((&jm * &jp) - (&jp * &jm)).norm() < 1e-13);
            assert!((&jm + jm.transpose()).norm() == 0.0);
            assert!((&jp + jp.transpose()).norm() == 0.0);
        }
    }

    #[test]
    fn trace_form_has_factor_four() {
        // -tr(J(xi,eta) J(xi',eta')) = 4 (<xi,xi'> + <eta,eta'>): the module's
        // inner product divides by 4 so coordinates become isometric.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let xi = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let eta = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let xi2 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let eta2 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let j = jminus(&xi) + jplus(&eta);
            let j2 = jminus(&xi2) + jplus(&eta2);
            let dot = xi.iter().zip(&xi2).map(|(a, b)| a * b).sum::<f64>()
                + eta.iter().zip(&eta2).map(|(a, b)| a * b).sum::<f64>();
            let raw = -(&j * &j2).trace();
            assert_relative_eq!(raw, 4.0 * dot, max_relative = 1e-12, epsilon = 1e-12);
            assert_relative_eq!(so4_inner(&j, &j2), dot, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn so4_eigenvalue_examples() {
        assert_eq!(so4_eigenvalues(&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0]), (3.0, 1.0));
        assert_eq!(so4_eigenvalues(&[0.0; 3], &[0.0; 3]), (0.0, 0.0));
        // non-Metivier point: equal block norms
        assert_eq!(so4_eigenvalues(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]), (2.0, 0.0));
    }

    #[test]
    fn so4_projections_reconstruct() {
        let xi = [1.0, 0.0, 0.0];
        let eta = [0.0, 2.0, 0.0];
        let (p1, p2) = so4_projections(&xi, &eta).unwrap();
        assert_relative_eq!(p1.trace(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(p2.trace(), 2.0, max_relative = 1e-12);
        assert!((&p1 * &p1 - &p1).norm() < 1e-12);
        assert!((&p2 * &p2 - &p2).norm() < 1e-12);
        let j = jminus(&xi) + jplus(&eta);
        let s = -(&j * &j);
        let rec = &p1 * 9.0 + &p2 * 1.0;
        assert!((s - rec).norm() < 1e-10);
        assert!(so4_projections(&[0.0; 3], &eta).is_err());
        assert!(so4_projections(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn decompose_heisenberg() {
        let h1 = group::heisenberg(1);
        let dec = decompose_j(&h1, &[2.0], 1e-6).unwrap();
        assert_eq!(dec.n_blocks(), 1);
        assert_relative_eq!(dec.b[0], 2.0, max_relative = 1e-12);
        assert_eq!(dec.r, vec![1]);
        assert_eq!(dec.r0, 0);
        assert!((dec.p[0].clone() - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn decompose_h_type_43() {
        let spec = group::metivier_4_3(&[[0.0; 3]; 3]);
        let dec = decompose_j(&spec, &[1.0, 0.0, 0.0], 1e-6).unwrap();
        assert_eq!(dec.n_blocks(), 1);
        assert_relative_eq!(dec.b[0], 1.0, max_relative = 1e-12);
        assert_eq!(dec.r, vec![2]);
    }

    #[test]
    fn decompose_generic_43_matches_closed_form() {
        let a = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let spec = group::metivier_4_3(&a);
        let xi = [0.4, -0.3, 0.8];
        let dec = decompose_j(&spec, &xi, 1e-6).unwrap();
        let (b1, b2) = metivier43_eigen(&a, &xi);
        assert_eq!(dec.n_blocks(), 2);
        assert_eq!(dec.r, vec![1, 1]);
        assert_relative_eq!(dec.b[0], b1, max_relative = 1e-10);
        assert_relative_eq!(dec.b[1], b2, max_relative = 1e-10);
    }

    #[test]
    fn oracle_equivalence_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut tested = 0;
        while tested < 200 {
            let xi = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let eta = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let (b1, b2) = so4_eigenvalues(&xi, &eta);
            if b2 <= 1e-3 * b1 || b1 == 0.0 {
                continue;
            }
            tested += 1;
            let j = jminus(&xi) + jplus(&eta);
            let dec = decompose_matrix(&j, 1e-6).unwrap();
            assert_eq!(dec.n_blocks(), 2);
            assert_relative_eq!(dec.b[0], b1, max_relative = 1e-10);
            assert_relative_eq!(dec.b[1], b2, max_relative = 1e-10);
            let (p1, p2) = so4_projections(&xi, &eta).unwrap();
            assert!((dec.p[0].clone() - p1).norm() < 1e-8);
            assert!((dec.p[1].clone() - p2).norm() < 1e-8);
        }
    }

    #[test]
    fn homogeneity_and_sign_symmetry() {
        let a = [[0.5, 0.1, 0.0], [0.0, 0.4, 0.2], [0.0, 0.0, 0.3]];
        let spec = group::metivier_4_3(&a);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let mu: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            if mu.iter().map(|m| m * m).sum::<f64>() < 1e-2 {
                continue;
            }
            let t: f64 = rng.random_range(0.5..3.0);
            let dec = match decompose_j(&spec, &mu, 1e-6) {
                Ok(d) => d,
                Err(_) => continue, // near-degenerate sample
            };
            let scaled: Vec<f64> = mu.iter().map(|m| t * m).collect();
            let neg: Vec<f64> = mu.iter().map(|m| -m).collect();
            if let Ok(dec_t) = decompose_j(&spec, &scaled, 1e-6) {
                if dec_t.n_blocks() == dec.n_blocks() {
                    for (bt, b) in dec_t.b.iter().zip(&dec.b) {
                        assert_relative_eq!(*bt, t * b, max_relative = 1e-10);
                    }
                    for (pt, p) in dec_t.p.iter().zip(&dec.p) {
                        assert!((pt - p).norm() < 1e-10);
                    }
                }
            }
            if let Ok(dec_n) = decompose_j(&spec, &neg, 1e-6) {
                if dec_n.n_blocks() == dec.n_blocks() {
                    for (bn, b) in dec_n.b.iter().zip(&dec.b) {
                        assert_relative_eq!(*bn, *b, max_relative = 1e-10);
                    }
                    for (pn, p) in dec_n.p.iter().zip(&dec.p) {
                        assert!((pn - p).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn ker_a_classification() {
        let zero = [[0.0; 3]; 3];
        assert_eq!(ker_a_classify(&zero, 1e-10).unwrap().class, KerAClass::Full);
        let eye = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(ker_a_classify(&eye, 1e-10).unwrap().class, KerAClass::Zero);
        let a = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let rep = ker_a_classify(&a, 1e-10).unwrap();
        assert_eq!(rep.class, KerAClass::Intermediate);
        assert_relative_eq!(rep.v[2].abs(), 1.0, max_relative = 1e-12);
        assert!(rep.v[0].abs() < 1e-12 && rep.v[1].abs() < 1e-12);
    }

    #[test]
    fn mu_bounds_probe_along_kernel_direction() {
        let a = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let probe = mu_derivative_bounds_probe(&a, &[0.0, 0.0, 1.0], 64, 1e-4, 1e-3).unwrap();
        assert!(probe.kappa_b.is_finite() && probe.kappa_b < 10.0);
        assert!(probe.kappa_p.is_finite() && probe.kappa_p < 10.0);
        // A = 0: single block with b = |mu|, so |D b| / b <= 1 and DP = 0.
        let probe0 =
            mu_derivative_bounds_probe(&[[0.0; 3]; 3], &[0.0, 0.0, 1.0], 32, 1e-4, 1e-3).unwrap();
        assert!(!probe0.rows.is_empty());
        assert!(probe0.kappa_b <= 1.0 + 1e-6, "kappa_b = {}", probe0.kappa_b);
        assert!(probe0.kappa_p < 1e-8);
    }

    #[test]
    fn mu_bounds_transverse_direction_reported_not_asserted() {
        // Direction transverse to ker A passes near-singular samples; large
        // kappa values are expected and only reported.
        let a = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let probe = mu_derivative_bounds_probe(&a, &[1.0, 0.0, 0.0], 64, 1e-4, 1e-3).unwrap();
        assert!(probe.rows.len() + probe.skipped > 0);
    }
}
