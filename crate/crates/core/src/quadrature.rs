//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes per panel of the composite rule.
pub const NODES_PER_PANEL: usize = 8;

/// Floor on the number of panels for any oscillatory integral.
pub const MIN_PANELS: usize = 64;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))`
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL))
}

/// Panel count that keeps the phase advance per panel below π/4.
pub fn panel_count(length: f64, rate: f64) -> usize {
    let want = (NODES_PER_PANEL as f64 * length.abs() * rate.abs() / (2.0 * PI)).ceil();
    if want.is_finite() && want > MIN_PANELS as f64 {
        want as usize
    } else {
        MIN_PANELS
    }
}

/// Nodes and weights of the composite rule on `[lo, hi]`.
pub fn composite_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = panel_rule();
    let panels = panels.max(1);
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * NODES_PER_PANEL);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// Composite rule for a complex integrand.
pub fn integrate<F>(lo: f64, hi: f64, panels: usize, mut f: F) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let rule = panel_rule();
    let panels = panels.max(1);
    let h = (hi - lo) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        let mut part = Complex64::new(0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            part += f(mid + 0.5 * h * x) * *w;
        }
        acc += part;
    }
    acc * (0.5 * h)
}

/// Composite rule for a real integrand.
pub fn integrate_real<F>(lo: f64, hi: f64, panels: usize, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    integrate(lo, hi, panels, |x| Complex64::new(f(x), 0.0)).re
}
