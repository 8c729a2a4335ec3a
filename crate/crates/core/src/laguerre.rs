//! Rescaled Laguerre functions.
//!
//! `phi_k^{(lambda,m)}(z) = lambda^m L_k^{m-1}(lambda|z|^2/2) e^{-lambda|z|^2/4}`
//! on `R^{2m}`, the associated radial Laguerre profiles
//! `scriptL_k^{(r-1)}(t) = (-1)^k L_k^{r-1}(2t) e^{-t}`, their L^2 norms and
//! orthogonality, the rescaled Hermite eigenrelation, and the sub-elliptic
//! weighted-norm ratio. All radial integrals reduce to Gauss-Laguerre rules
//! in `t = lambda rho^2 / 2`; polynomial prefactors keep them exact.

use crate::error::{Error, Result};
use crate::quad;

/// Degree cap; the three-term recurrence is evaluated in plain f64.
pub const MAX_DEGREE: usize = 512;

#[derive(Clone, Copy, Debug)]
pub struct LaguerreParams {
    /// Degree `k >= 0`.
    pub k: usize,
    /// Rescaling `lambda > 0` (a spectral block eigenvalue `b_n`).
    pub lambda: f64,
    /// Half-dimension `m >= 1`: the function lives on `R^{2m}`.
    pub m: usize,
}

impl LaguerreParams {
    pub fn new(k: usize, lambda: f64, m: usize) -> Result<Self> {
        if lambda <= 0.0 || !lambda.is_finite() {
            return Err(Error::validation("lambda must be positive and finite"));
        }
        if m == 0 {
            return Err(Error::validation("half-dimension m must be >= 1"));
        }
        if k > MAX_DEGREE {
            return Err(Error::validation(format!("degree {k} exceeds cap {MAX_DEGREE}")));
        }
        Ok(LaguerreParams { k, lambda, m })
    }
}

/// Laguerre polynomial `L_k^a(t)` by the three-term recurrence.
pub fn laguerre_poly(k: usize, a: usize, t: f64) -> f64 {
    assert!(k <= MAX_DEGREE, "degree {k} exceeds cap {MAX_DEGREE}");
    let af = a as f64;
    let mut p0 = 1.0;
    if k == 0 {
        return p0;
    }
    let mut p1 = 1.0 + af - t;
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0 + af - t) * p1 - (jf + af) * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// All of `L_j^a(t) e^{-t/2}` for `j = 0..=k_max`. The exponential is folded
/// into the (linear) recurrence so large `t` never overflows.
pub fn laguerre_scaled_all(k_max: usize, a: usize, t: f64) -> Vec<f64> {
    let s = (-0.5 * t).exp();
    let af = a as f64;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut p0 = s;
    out.push(p0);
    if k_max == 0 {
        return out;
    }
    let mut p1 = (1.0 + af - t) * s;
    out.push(p1);
    for j in 1..k_max {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0 + af - t) * p1 - (jf + af) * p0) / (jf + 1.0);
        out.push(p2);
        p0 = p1;
        p1 = p2;
    }
    out
}

/// Radial profile of `phi_k^{(lambda,m)}` at `rho = |z|`.
pub fn phi_radial(k: usize, lambda: f64, m: usize, rho: f64) -> f64 {
    let t = 0.5 * lambda * rho * rho;
    let scaled = laguerre_scaled_all(k, m - 1, t);
    lambda.powi(m as i32) * scaled[k]
}

/// `phi_k^{(lambda,m)}(z)` for `z` in `R^{2m}`.
pub fn phi(p: LaguerreParams, z: &[f64]) -> Result<f64> {
    if z.len() != 2 * p.m {
        return Err(Error::dimension(format!(
            "point has dimension {}, expected {}",
            z.len(),
            2 * p.m
        )));
    }
    let rho = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(phi_radial(p.k, p.lambda, p.m, rho))
}

/// `scriptL_k^{(r-1)}(t) = (-1)^k L_k^{r-1}(2t) e^{-t}` for `t >= 0`.
pub fn script_l(k: usize, r: usize, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::validation("script_l requires t >= 0"));
    }
    let scaled = laguerre_scaled_all(k, r - 1, 2.0 * t);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * scaled[k])
}

/// All of `scriptL_j^{(r-1)}(t)` for `j = 0..=k_max` (kernel hot path).
pub fn script_l_all(k_max: usize, r: usize, t: f64) -> Vec<f64> {
    let mut v = laguerre_scaled_all(k_max, r - 1, 2.0 * t);
    for (j, x) in v.iter_mut().enumerate() {
        if j % 2 == 1 {
            *x = -*x;
        }
    }
    v
}

/// Surface measure of the unit sphere in `R^{2m}`: `2 pi^m / (m-1)!`.
pub fn sphere_surface(m: usize) -> f64 {
    let mut gamma_m = 1.0;
    for j in 2..m {
        gamma_m *= j as f64;
    }
    2.0 * std::f64::consts::PI.powi(m as i32) / gamma_m
}

/// `int_0^inf t^{pow} L_k^{a}(t) L_{k'}^{a}(t) e^{-t} dt` by a lifted
/// Gauss-Laguerre rule; exact once the node count clears the degree.
pub fn radial_t_integral(k: usize, k2: usize, a: usize, pow: f64, nodes: usize) -> f64 {
    let rule = quad::gauss_laguerre_lifted(nodes);
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let lk = laguerre_scaled_all(k.max(k2), a, t);
            w * t.powf(pow) * lk[k] * lk[k2]
        })
        .collect();
    crate::exec::tree_sum(&terms)
}

fn converged_t_integral(k: usize, k2: usize, a: usize, pow: f64) -> Result<f64> {
    let mut nodes = 64;
    let mut prev = radial_t_integral(k, k2, a, pow, nodes);
    while nodes < 1024 {
        nodes *= 2;
        let next = radial_t_integral(k, k2, a, pow, nodes);
        let rel = (next - prev).abs() / next.abs().max(1e-300);
        prev = next;
        if rel <= 1e-11 {
            return Ok(prev);
        }
    }
    Err(Error::numerical(format!(
        "radial quadrature did not settle for k={k}, k'={k2}, power {pow}"
    )))
}

/// `||phi_k^{(lambda,m)}||_{L^2(R^{2m})}^2` by radial quadrature.
pub fn phi_l2_norm_sq(p: LaguerreParams) -> Result<f64> {
    let i = converged_t_integral(p.k, p.k, p.m - 1, (p.m - 1) as f64)?;
    Ok(sphere_surface(p.m) * 2.0_f64.powi(p.m as i32 - 1) * p.lambda.powi(p.m as i32) * i)
}

/// Closed form `(2 pi lambda)^m binom(k+m-1, k)`; the quadrature oracle's
/// reference value in tests.
pub fn phi_l2_norm_sq_closed(p: LaguerreParams) -> f64 {
    let mut binom = 1.0;
    for j in 1..p.m {
        binom *= (p.k + j) as f64 / j as f64;
    }
    (2.0 * std::f64::consts::PI * p.lambda).powi(p.m as i32) * binom
}

/// Inner product `int phi_k phi_k' |z|^{2w} dz` over `R^{2m}` (same lambda, m).
pub fn phi_weighted_inner(k: usize, k2: usize, lambda: f64, m: usize, w: usize) -> Result<f64> {
    let i = converged_t_integral(k, k2, m - 1, (w + m - 1) as f64)?;
    Ok(sphere_surface(m)
        * 2.0_f64.powi((w + m) as i32 - 1)
        * lambda.powi(m as i32 - w as i32)
        * i)
}

/// Max relative residual of `(-Delta + lambda^2 |z|^2 / 4) phi = (2k+m) lambda phi`
/// on a radial sample set, with the Laplacian discretized by central
/// differences of step `grid_h`.
pub fn hermite_residual(p: LaguerreParams, grid_h: f64) -> Result<f64> {
    if grid_h <= 0.0 {
        return Err(Error::validation("grid_h must be positive"));
    }
    let eig = (2 * p.k + p.m) as f64 * p.lambda;
    // Sample inside the classically allowed region where phi is not tiny.
    let sigma = ((4 * p.k + 2 * p.m) as f64 / p.lambda + 4.0 / p.lambda).sqrt();
    let samples: Vec<f64> = (1..=24).map(|j| 0.05 * sigma + 0.04 * sigma * j as f64).collect();
    let f = |rho: f64| phi_radial(p.k, p.lambda, p.m, rho);
    let dim_term = (2 * p.m - 1) as f64;
    let mut max_resid: f64 = 0.0;
    let mut max_phi: f64 = 0.0;
    for &rho in &samples {
        let fm = f(rho - grid_h);
        let f0 = f(rho);
        let fp = f(rho + grid_h);
        let d2 = (fp - 2.0 * f0 + fm) / (grid_h * grid_h);
        let d1 = (fp - fm) / (2.0 * grid_h);
        let lap = d2 + dim_term / rho * d1;
        let resid = -lap + 0.25 * p.lambda * p.lambda * rho * rho * f0 - eig * f0;
        max_resid = max_resid.max(resid.abs());
        max_phi = max_phi.max(f0.abs());
    }
    Ok(max_resid / (eig * max_phi))
}

/// `|| |z|^beta phi_k || / ( lambda^{-beta} ((2k+m) lambda)^{beta/2} ||phi_k|| )`.
pub fn subelliptic_ratio(p: LaguerreParams, beta: f64) -> Result<f64> {
    if beta < 0.0 {
        return Err(Error::validation("beta must be >= 0"));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    let a = p.m - 1;
    let norm_sq = converged_t_integral(p.k, p.k, a, a as f64)?;
    let weighted = {
        // fractional beta: the integrand is no longer polynomial; rely on the
        // same node-doubling guard.
        let mut nodes = 64;
        let mut prev = radial_t_integral(p.k, p.k, a, beta + a as f64, nodes);
        loop {
            nodes *= 2;
            let next = radial_t_integral(p.k, p.k, a, beta + a as f64, nodes);
            let rel = (next - prev).abs() / next.abs().max(1e-300);
            prev = next;
            if rel <= 1e-10 {
                break prev;
            }
            if nodes >= 1024 {
                return Err(Error::numerical("sub-elliptic quadrature did not settle"));
            }
        }
    };
    // ratio^2 = (2/lambda)^beta <t^beta> / ((2k+m)/lambda)^beta
    let mean = weighted / norm_sq;
    let denom = ((2 * p.k + p.m) as f64).powf(beta);
    Ok((2.0_f64.powf(beta) * mean / denom).sqrt())
}
