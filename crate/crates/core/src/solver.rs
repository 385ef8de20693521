//! Fixed-point computation of the positive solution whose existence a
//! certificate guarantees.
//!
//! The conjugate problem is equivalent to the Hammerstein equation
//! `x(t) = ∫_0^1 G(t, s) f(s, x(s)) d_beta s`, so a certified pair is chased
//! by Picard iteration `x_{k+1} = A x_k` (optionally damped) starting from
//! the constant mid-annulus function. The grid is uniform in `v = t^beta`,
//! the same transformation the quadrature uses.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::existence::{ExistenceCertificate, Nonlinearity};
use crate::frac::{
    self, beta_integral_with, FracOrder, GaussLegendre, SampledFunction,
};

/// A computed solution sample with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Max interior defect of `-D^beta D^alpha x - f(t, x)` over
    /// `t in [0.02, 0.98]`.
    pub residual_ode: f64,
    /// Conjugate boundary defects `x(0)` and `x(1)`.
    pub residual_bc: [f64; 2],
    /// Whether the profile lies in the cone: nonnegative samples and
    /// `phi <= cone_const * psi + 1e-9`.
    pub cone_ok: bool,
    /// `min x` over `[1/4, 3/4]`.
    pub psi: f64,
    /// `max x` over `[0, 1]`.
    pub phi: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `r_inner - tol <= psi`.
    pub band_lower_ok: bool,
    /// `phi <= R_outer + tol`.
    pub band_upper_ok: bool,
}

/// One application of the Hammerstein operator for the conjugate kernel:
/// `(A x)(t_i) = ∫_0^1 G(t_i, s) f(s, x(s)) d_beta s`.
///
/// `f(s, x(s))` is evaluated at the grid nodes and interpolated linearly in
/// the `s^beta` coordinate between them; each integral is split at `t_i`
/// where the kernel has its derivative kink.
pub fn apply_a(x: &SampledFunction, f: &Nonlinearity, order: FracOrder) -> Result<SampledFunction> {
    let alpha = order.alpha();
    let beta = order.beta();
    let nodes = x.nodes();
    let n = nodes.len();

    let mut loads = Vec::with_capacity(n);
    for (&s, &xi) in nodes.iter().zip(x.values()) {
        let v = f.eval(s, xi)?;
        if v < 0.0 {
            return Err(Error::Evaluation2 {
                s,
                x: xi,
                detail: format!("f = {v} is negative; the operator needs f >= 0"),
            });
        }
        loads.push(v);
    }
    let u: Vec<f64> = nodes.iter().map(|&t| libm::pow(t, beta)).collect();

    // piecewise-linear in u = s^beta between grid nodes
    let interp = |s: f64| -> f64 {
        if s <= nodes[0] {
            return loads[0];
        }
        if s >= nodes[n - 1] {
            return loads[n - 1];
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if nodes[mid] <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let us = libm::pow(s, beta);
        let w = (us - u[lo]) / (u[hi] - u[lo]);
        loads[lo] + w * (loads[hi] - loads[lo])
    };

    let rule = GaussLegendre::new(16)?;
    let mut out = Vec::with_capacity(n);
    for &t in nodes {
        let ta = libm::pow(t, alpha);
        let mut v = 0.0;
        if t > 0.0 && ta < 1.0 {
            v += (1.0 - ta) / alpha
                * beta_integral_with(|s| libm::pow(s, alpha) * interp(s), beta, 0.0, t, &rule, 4)?;
        }
        if t < 1.0 && ta > 0.0 {
            v += ta / alpha
                * beta_integral_with(
                    |s| (1.0 - libm::pow(s, alpha)) * interp(s),
                    beta,
                    t,
                    1.0,
                    &rule,
                    4,
                )?;
        }
        out.push(v);
    }
    SampledFunction::new(nodes.to_vec(), out, x.domain())
}

/// Picard iteration `x_{k+1} = A x_k`; see [`damped_iterate`] with
/// `lambda = 1`, which this reproduces bitwise.
pub fn solve_picard(
    f: &Nonlinearity,
    order: FracOrder,
    cert: &ExistenceCertificate,
    tol: f64,
    max_iter: usize,
) -> Result<SolutionProfile> {
    damped_iterate(f, order, cert, 1.0, tol, max_iter)
}

/// Damped iteration `x_{k+1} = (1 - lambda) x_k + lambda A x_k` for
/// `lambda in (0, 1]`, from the constant mid-annulus start
/// `(r + C r) / 2`.
pub fn damped_iterate(
    f: &Nonlinearity,
    order: FracOrder,
    cert: &ExistenceCertificate,
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SolutionProfile> {
    if !cert.is_certified() {
        return Err(Error::Precondition(format!(
            "certificate status is {}; solve needs a certified pair",
            cert.status.as_str()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Precondition(format!("damping {lambda} outside (0, 1]")));
    }
    let n = cert.grid.max(5);
    let inv_beta = 1.0 / order.beta();
    let grid: Vec<f64> = (0..n)
        .map(|i| libm::pow(i as f64 / (n - 1) as f64, inv_beta))
        .collect();
    let start = 0.5 * (cert.r_inner + cert.cone_const * cert.r_inner);
    let mut x = SampledFunction::new(grid.clone(), alloc::vec![start; n], (0.0, 1.0))?;

    let escape = 10.0 * cert.r_outer;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..max_iter {
        let ax = apply_a(&x, f, order)?;
        let next_values: Vec<f64> = if lambda == 1.0 {
            ax.values().to_vec()
        } else {
            x.values()
                .iter()
                .zip(ax.values())
                .map(|(&xi, &ai)| (1.0 - lambda) * xi + lambda * ai)
                .collect()
        };
        let mut diff: f64 = 0.0;
        let mut norm: f64 = 0.0;
        for (&old, &new) in x.values().iter().zip(&next_values) {
            diff = diff.max(libm::fabs(new - old));
            norm = norm.max(libm::fabs(new));
        }
        x = SampledFunction::new(grid.clone(), next_values, (0.0, 1.0))?;
        iterations += 1;
        if norm > escape {
            return Err(Error::Divergence {
                norm,
                bound: escape,
            });
        }
        if diff < tol {
            converged = true;
            break;
        }
    }

    let mut psi = f64::INFINITY;
    let mut phi = f64::NEG_INFINITY;
    let mut min_value = f64::INFINITY;
    for (&t, &v) in x.nodes().iter().zip(x.values()) {
        phi = phi.max(v);
        min_value = min_value.min(v);
        if (0.25..=0.75).contains(&t) {
            psi = psi.min(v);
        }
    }
    let cone_ok = phi <= cert.cone_const * psi + 1e-9 && min_value >= -1e-12;

    let applied = frac::apply_fractional_operator(&x, order)?;
    let mut residual_ode: f64 = 0.0;
    for ((&t, &y), &v) in applied
        .nodes()
        .iter()
        .zip(applied.values())
        .zip(x.values())
    {
        if !(0.02..=0.98).contains(&t) {
            continue;
        }
        residual_ode = residual_ode.max(libm::fabs(y - f.eval(t, v)?));
    }
    let residual_bc = [x.values()[0], *x.values().last().unwrap()];

    Ok(SolutionProfile {
        band_lower_ok: cert.r_inner - tol <= psi,
        band_upper_ok: phi <= cert.r_outer + tol,
        grid: x.nodes().to_vec(),
        values: x.values().to_vec(),
        residual_ode,
        residual_bc,
        cone_ok,
        psi,
        phi,
        iterations,
        converged,
    })
}
