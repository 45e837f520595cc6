//! Refining tensor-product quadrature over annuli and spherical shells.
//!
//! Radial (and polar) directions use composite Gauss–Legendre panels; the
//! periodic azimuthal direction uses the trapezoidal rule, which converges
//! geometrically for smooth periodic integrands. Each refinement level
//! doubles the panel and azimuth counts.

use std::f64::consts::PI;

use crate::xform::Vector;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, nodes found by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of a refining integration.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: f64,
    /// `|I_L - I_{L-1}|` at the final level.
    pub error_estimate: f64,
    /// Integral at every level visited.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Refinement controls.
#[derive(Debug, Clone, Copy)]
pub struct Refinement {
    /// Change between consecutive levels, relative to `∫|f|`, at which to
    /// stop. Measuring against `∫|f|` lets integrals that cancel to zero
    /// converge.
    pub rel_tol: f64,
    pub min_levels: usize,
    pub max_levels: usize,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
}

impl Default for Refinement {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            min_levels: 3,
            max_levels: 8,
            order: 8,
        }
    }
}

/// `level_value` returns `(∫f, ∫|f|)` at a refinement level.
fn refine(opts: Refinement, mut level_value: impl FnMut(usize) -> (f64, f64)) -> Quadrature {
    let mut history: Vec<f64> = Vec::new();
    let mut error_estimate = f64::INFINITY;
    for level in 0..opts.max_levels {
        let (v, magnitude) = level_value(level);
        if let Some(prev) = history.last() {
            error_estimate = (v - prev).abs();
        }
        history.push(v);
        if !v.is_finite() {
            break;
        }
        if history.len() >= opts.min_levels && error_estimate <= opts.rel_tol * magnitude {
            return Quadrature {
                value: v,
                error_estimate,
                history,
                converged: true,
            };
        }
    }
    Quadrature {
        value: *history.last().unwrap_or(&f64::NAN),
        error_estimate,
        history,
        converged: false,
    }
}

/// Integrates `f` over `{x : r_in ≤ |x - center| ≤ r_out}`.
pub fn integrate_annulus(
    center: Vector<2>,
    r_in: f64,
    r_out: f64,
    f: impl Fn(&Vector<2>) -> f64,
    opts: Refinement,
) -> Quadrature {
    let rule = GaussLegendre::new(opts.order);
    refine(opts, |level| {
        let panels = 1usize << level;
        let n_theta = 16usize << level;
        let h = (r_out - r_in) / panels as f64;
        let dtheta = 2.0 * PI / n_theta as f64;
        let (mut total, mut magnitude) = (0.0, 0.0);
        for p in 0..panels {
            let a = r_in + p as f64 * h;
            for (r, wr) in rule.on(a, a + h) {
                let (ring, ring_abs) = (0..n_theta)
                    .map(|k| {
                        let t = k as f64 * dtheta;
                        f(&(center + Vector::<2>::new(r * t.cos(), r * t.sin())))
                    })
                    .fold((0.0, 0.0), |(s, m), v| (s + v, m + v.abs()));
                total += wr * r * ring * dtheta;
                magnitude += wr * r * ring_abs * dtheta;
            }
        }
        (total, magnitude)
    })
}

/// Integrates `f` over the shell `{x : r_in ≤ |x - center| ≤ r_out}`.
pub fn integrate_shell(
    center: Vector<3>,
    r_in: f64,
    r_out: f64,
    f: impl Fn(&Vector<3>) -> f64,
    opts: Refinement,
) -> Quadrature {
    let rule = GaussLegendre::new(opts.order);
    refine(opts, |level| {
        let panels = 1usize << level;
        let n_phi = 8usize << level;
        let h = (r_out - r_in) / panels as f64;
        let hc = 2.0 / panels as f64;
        let dphi = 2.0 * PI / n_phi as f64;
        let (mut total, mut magnitude) = (0.0, 0.0);
        for p in 0..panels {
            let a = r_in + p as f64 * h;
            for (r, wr) in rule.on(a, a + h) {
                for q in 0..panels {
                    let c0 = -1.0 + q as f64 * hc;
                    for (cos_t, wc) in rule.on(c0, c0 + hc) {
                        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                        let (ring, ring_abs) = (0..n_phi)
                            .map(|k| {
                                let phi = k as f64 * dphi;
                                let dir = Vector::<3>::new(sin_t * phi.cos(), sin_t * phi.sin(), cos_t);
                                f(&(center + dir * r))
                            })
                            .fold((0.0, 0.0), |(s, m), v| (s + v, m + v.abs()));
                        total += wr * wc * r * r * ring * dphi;
                        magnitude += wr * wc * r * r * ring_abs * dphi;
                    }
                }
            }
        }
        (total, magnitude)
    })
}
