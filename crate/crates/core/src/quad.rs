//! Gauss quadrature rules.
//!
//! Gauss-Legendre on `[-1,1]` (affine-mapped variants for finite intervals)
//! and Gauss-Laguerre for weight `e^{-t}` on `[0,inf)`. Laguerre values are
//! carried as `L_k(t) e^{-t/2}` throughout so node search stays finite for
//! large degree and abscissa.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        crate::exec::tree_sum(&terms)
    }
}

/// Legendre polynomial value and derivative at `x`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `n` nodes on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    if let Some(r) = cache_get(CacheKind::Legendre, n) {
        return (*r).clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_pair(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    let rule = Rule { nodes, weights };
    cache_put(CacheKind::Legendre, n, rule.clone());
    rule
}

/// Gauss-Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_on(lo: f64, hi: f64, n: usize) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Rule {
        nodes: base.nodes.iter().map(|x| mid + half * x).collect(),
        weights: base.weights.iter().map(|w| w * half).collect(),
    }
}

/// Scaled Laguerre value `L_n(x) e^{-x/2}` together with its predecessor.
fn laguerre_scaled_pair(n: usize, x: f64) -> (f64, f64) {
    let s = (-0.5 * x).exp();
    let mut p0 = s;
    let mut p1 = (1.0 - x) * s;
    if n == 0 {
        return (p0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 - x) * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Gauss-Laguerre rule with `n` nodes: `sum w_i f(x_i) ~ int_0^inf f e^{-t} dt`.
pub fn gauss_laguerre(n: usize) -> Rule {
    assert!(n >= 1);
    if let Some(r) = cache_get(CacheKind::Laguerre, n) {
        return (*r).clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0_f64;
    for i in 0..n {
        // Stroud-Secrest initial guesses.
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2]);
        }
        for _ in 0..200 {
            let (p, pm1) = laguerre_scaled_pair(n, z);
            // d/dx [L_n e^{-x/2}] = (n(L_n - L_{n-1})/x - L_n/2) e^{-x/2}
            let dp = nf * (p - pm1) / z - 0.5 * p;
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-14 * z.max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        let (pn1, _) = laguerre_scaled_pair(n + 1, z);
        // w = x / ((n+1) L_{n+1}(x))^2, expressed through the scaled values.
        let np1 = nf + 1.0;
        weights[i] = z / (np1 * np1 * pn1 * pn1) * (-z).exp();
    }
    let rule = Rule { nodes, weights };
    cache_put(CacheKind::Laguerre, n, rule.clone());
    rule
}

/// Gauss-Laguerre rule with the `e^{-t}` weight lifted out:
/// `sum w_i h(x_i) ~ int_0^inf h(t) dt` for integrands `h` that carry their
/// own exponential decay (e.g. products of scaled Laguerre values).
pub fn gauss_laguerre_lifted(n: usize) -> Rule {
    if let Some(r) = cache_get(CacheKind::LaguerreLifted, n) {
        return (*r).clone();
    }
    let base = gauss_laguerre(n);
    let rule = Rule {
        weights: base
            .nodes
            .iter()
            .map(|&x| {
                // w e^{x} computed from scaled values; never forms e^{x} itself.
                let (pn1, _) = laguerre_scaled_pair(n + 1, x);
                let np1 = (n + 1) as f64;
                x / (np1 * np1 * pn1 * pn1)
            })
            .collect(),
        nodes: base.nodes,
    };
    cache_put(CacheKind::LaguerreLifted, n, rule.clone());
    rule
}

#[derive(Hash, PartialEq, Eq, Clone, Copy)]
enum CacheKind {
    Legendre,
    Laguerre,
    LaguerreLifted,
}

fn cache() -> &'static Mutex<HashMap<(CacheKind, usize), Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<(CacheKind, usize), Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_get(kind: CacheKind, n: usize) -> Option<Arc<Rule>> {
    cache().lock().unwrap().get(&(kind, n)).cloned()
}

fn cache_put(kind: CacheKind, n: usize, rule: Rule) {
    cache().lock().unwrap().insert((kind, n), Arc::new(rule));
}
