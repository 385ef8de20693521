//! Conformable fractional operators and weighted quadrature.
//!
//! The derivative of order `alpha` in `(0, 1]` acts on differentiable `f` as
//! `D^alpha f(t) = t^{1-alpha} f'(t)`, with the value at `t = 0` taken as the
//! right limit. The matching integral carries the weight `s^{beta-1}`:
//! `∫_a^b f(s) d_beta s = ∫_a^b f(s) s^{beta-1} ds`.
//!
//! Quadrature always substitutes `u = s^beta`, which turns the weight into
//! the constant `1/beta` and removes the endpoint singularity at `a = 0`;
//! composite Gauss–Legendre is then applied to the transformed integrand.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default finite-difference step for pointwise derivatives.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Default Gauss–Legendre nodes per panel.
pub const DEFAULT_QUAD_NODES: usize = 64;
/// Default panel count for composite quadrature.
pub const DEFAULT_QUAD_PANELS: usize = 8;

/// The pair `(alpha, beta)` of fractional orders, each in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    beta: f64,
}

impl FracOrder {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_order("alpha", alpha)?;
        check_order("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

pub(crate) fn check_order(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value <= 1.0) || !value.is_finite() {
        return Err(Error::InvalidOrder { name, value });
    }
    Ok(())
}

/// A function sampled on a strictly increasing grid inside `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    domain: (f64, f64),
}

impl SampledFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        let (a, b) = domain;
        if !(a >= 0.0 && a < b) {
            return Err(Error::Precondition(alloc::format!(
                "domain [{a}, {b}] must satisfy 0 <= a < b"
            )));
        }
        if nodes.len() < 2 {
            return Err(Error::Precondition(alloc::format!(
                "need at least 2 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.len() != values.len() {
            return Err(Error::Precondition(alloc::format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        for pair in nodes.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Precondition(alloc::format!(
                    "nodes must be strictly increasing, saw {} then {}",
                    pair[0],
                    pair[1]
                )));
            }
        }
        if nodes[0] < a || *nodes.last().unwrap() > b {
            return Err(Error::Precondition(alloc::format!(
                "nodes must lie within [{a}, {b}]"
            )));
        }
        Ok(Self {
            nodes,
            values,
            domain,
        })
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration on the three-term recurrence; weights are `2 / ((1 - x^2) P_n'(x)^2)`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(alloc::format!(
                "Gauss-Legendre rule needs n >= 2, got {n}"
            )));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi-style initial guess, then Newton.
            let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) < 1e-15 {
                    let (_, d) = legendre(n, x);
                    dp = d;
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        nodes.reverse();
        weights.reverse();
        Ok(Self { nodes, weights })
    }

    /// Integrate `f` over `[a, b]` with a single panel.
    pub fn integrate<F: FnMut(f64) -> Result<f64>>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x)?;
        }
        Ok(half * sum)
    }

    /// Integrate `f` over `[a, b]` split into `panels` equal panels.
    pub fn integrate_panels<F: FnMut(f64) -> Result<f64>>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> Result<f64> {
        let width = (b - a) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let hi = if p + 1 == panels { b } else { lo + width };
            sum += self.integrate(lo, hi, &mut f)?;
        }
        Ok(sum)
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_a^b f(s) s^{beta-1} ds` by the substitution `u = s^beta` and composite
/// Gauss–Legendre with `n` nodes per panel over [`DEFAULT_QUAD_PANELS`] panels.
pub fn beta_integral<F: FnMut(f64) -> f64>(
    f: F,
    beta: f64,
    a: f64,
    b: f64,
    n: usize,
) -> Result<f64> {
    let rule = GaussLegendre::new(n.max(2))?;
    if n < 2 {
        return Err(Error::Precondition(alloc::format!(
            "beta_integral needs n >= 2 nodes, got {n}"
        )));
    }
    beta_integral_with(f, beta, a, b, &rule, DEFAULT_QUAD_PANELS)
}

/// As [`beta_integral`] but with a caller-supplied rule and panel count,
/// so hot loops can reuse one node table.
pub fn beta_integral_with<F: FnMut(f64) -> f64>(
    mut f: F,
    beta: f64,
    a: f64,
    b: f64,
    rule: &GaussLegendre,
    panels: usize,
) -> Result<f64> {
    check_order("beta", beta)?;
    if !(a >= 0.0 && b > a) {
        return Err(Error::Precondition(alloc::format!(
            "integration bounds must satisfy 0 <= a < b, got [{a}, {b}]"
        )));
    }
    let ua = libm::pow(a, beta);
    let ub = libm::pow(b, beta);
    let inv_beta = 1.0 / beta;
    let mut g = |u: f64| {
        let s = libm::pow(u, inv_beta);
        let y = f(s);
        if !y.is_finite() {
            return Err(Error::Evaluation {
                point: s,
                detail: alloc::format!("integrand value {y} is not finite"),
            });
        }
        Ok(y)
    };
    let value = if ua < 0.05 * ub && panels > 1 {
        // the substituted integrand can carry a u^{alpha/beta}-type branch
        // point at 0; when the interval reaches (near) the origin, geometric
        // grading keeps composite Gauss-Legendre at full accuracy where
        // uniform panels would stall
        const RATIO: f64 = 0.08;
        let mut total = 0.0;
        let mut hi = ub;
        for k in 0..panels {
            let lo = if k + 1 == panels { ua } else { (hi * RATIO).max(ua) };
            if lo < hi {
                total += rule.integrate(lo, hi, &mut g)?;
            }
            hi = lo;
        }
        total
    } else {
        rule.integrate_panels(ua, ub, panels.max(1), g)?
    };
    Ok(inv_beta * value)
}

/// `D^alpha f(t) = t^{1-alpha} f'(t)` with `f'` by central differences of
/// step `h` (3-point one-sided stencils at the endpoints of `[0, 1]`).
///
/// At `t = 0` the right limit is approximated by evaluating at `t = h`.
pub fn conformable_derivative<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    t: f64,
    h: f64,
) -> Result<f64> {
    check_order("alpha", alpha)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(alloc::format!("t = {t} outside [0, 1]")));
    }
    if !(h > 0.0) {
        return Err(Error::Precondition(alloc::format!("step h = {h} must be positive")));
    }
    let t_eff = if t == 0.0 { h } else { t };
    let eval = |p: f64| -> Result<f64> {
        let y = f(p);
        if !y.is_finite() {
            return Err(Error::Evaluation {
                point: p,
                detail: alloc::format!("function value {y} is not finite"),
            });
        }
        Ok(y)
    };
    let deriv = if t_eff - h < 0.0 {
        (-3.0 * eval(t_eff)? + 4.0 * eval(t_eff + h)? - eval(t_eff + 2.0 * h)?) / (2.0 * h)
    } else if t_eff + h > 1.0 {
        (3.0 * eval(t_eff)? - 4.0 * eval(t_eff - h)? + eval(t_eff - 2.0 * h)?) / (2.0 * h)
    } else {
        (eval(t_eff + h)? - eval(t_eff - h)?) / (2.0 * h)
    };
    Ok(libm::pow(t_eff, 1.0 - alpha) * deriv)
}

/// Diagnostic difference quotient from the limit definition
/// `(f(t e^{eps t^{-alpha}}) - f(t)) / eps`.
///
/// The shortcut `t^{1-alpha} f'(t)` is what the crate computes everywhere;
/// this quotient exists so callers can observe how fast the raw limit agrees
/// with it as `eps` shrinks. The convergence rate is reported, not asserted.
pub fn conformable_quotient<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    t: f64,
    eps: f64,
) -> Result<f64> {
    check_order("alpha", alpha)?;
    if !(t > 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "limit quotient needs t > 0, got {t}"
        )));
    }
    let shifted = t * libm::exp(eps * libm::pow(t, -alpha));
    let num = f(shifted) - f(t);
    if !num.is_finite() {
        return Err(Error::Evaluation {
            point: shifted,
            detail: alloc::format!("difference {num} is not finite"),
        });
    }
    Ok(num / eps)
}

/// First derivative of `values` with respect to `coord` on a nonuniform grid,
/// 3-point stencils throughout (one-sided at the ends).
pub(crate) fn derivative_nonuniform(coord: &[f64], values: &[f64]) -> Vec<f64> {
    let n = coord.len();
    debug_assert!(n >= 3 && values.len() == n);
    let mut out = Vec::with_capacity(n);
    // left end
    {
        let h1 = coord[1] - coord[0];
        let h2 = coord[2] - coord[1];
        out.push(
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[0]
                + (h1 + h2) / (h1 * h2) * values[1]
                - h1 / (h2 * (h1 + h2)) * values[2],
        );
    }
    for i in 1..n - 1 {
        let h1 = coord[i] - coord[i - 1];
        let h2 = coord[i + 1] - coord[i];
        out.push(
            -h2 / (h1 * (h1 + h2)) * values[i - 1]
                + (h2 - h1) / (h1 * h2) * values[i]
                + h1 / (h2 * (h1 + h2)) * values[i + 1],
        );
    }
    {
        let h1 = coord[n - 1] - coord[n - 2];
        let h2 = coord[n - 2] - coord[n - 3];
        // mirror of the left stencil
        out.push(
            (2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[n - 1]
                - (h1 + h2) / (h1 * h2) * values[n - 2]
                + h1 / (h2 * (h1 + h2)) * values[n - 3],
        );
    }
    out
}

/// Applies `-D^beta D^alpha` to sampled data.
///
/// Both differentiations are carried out in the matching transformed
/// coordinate: `D^alpha x = dx/du` with `u = t^alpha / alpha`, and likewise
/// `D^beta g = dg/dw` with `w = t^beta / beta`. The composite solution of the
/// boundary value problem is smooth in those coordinates even where `x'(t)`
/// blows up at the origin, so 3-point stencils stay second order.
///
/// Endpoint values come from one-sided stencils and are lower accuracy than
/// the interior.
pub fn apply_fractional_operator(x: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    if x.len() < 5 {
        return Err(Error::Precondition(alloc::format!(
            "need at least 5 nodes for the iterated operator, got {}",
            x.len()
        )));
    }
    let alpha = order.alpha();
    let beta = order.beta();
    let u: Vec<f64> = x
        .nodes()
        .iter()
        .map(|&t| libm::pow(t, alpha) / alpha)
        .collect();
    let g = derivative_nonuniform(&u, x.values());
    let w: Vec<f64> = x
        .nodes()
        .iter()
        .map(|&t| libm::pow(t, beta) / beta)
        .collect();
    let mut y = derivative_nonuniform(&w, &g);
    for v in &mut y {
        *v = -*v;
    }
    SampledFunction::new(x.nodes().to_vec(), y, x.domain())
}
