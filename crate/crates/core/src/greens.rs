//! Closed-form Green's kernels for `-D^beta D^alpha x = 0` under two-point
//! boundary conditions, and the certified lower-bound envelopes.
//!
//! The kernel for the Sturm–Liouville conditions
//! `gamma x(0) - delta D^alpha x(0) = 0 = eta x(1) + zeta D^alpha x(1)` is
//!
//! ```text
//! G(t,s) = (1/d) [delta + gamma s^a / a][zeta + eta (1 - t^a) / a]   for s <= t
//!          (1/d) [delta + gamma t^a / a][zeta + eta (1 - s^a) / a]   for t <= s
//! ```
//!
//! with `d = eta delta + gamma zeta + gamma eta / alpha > 0`. The conjugate
//! (`x(0) = x(1) = 0`) and right-focal (`x(0) = D^alpha x(1) = 0`) kernels
//! are the parameter choices `(1, 0, 1, 0)` and `(1, 0, 0, 1)`.
//!
//! The envelopes satisfy `g1(t) G(s,s) <= G(t,s) <= G(s,s)` on the square,
//! and on the strip `t in [1/n, 1 - 1/n]` the sharper `g2(s) G(s,s)` and
//! constant `g3 G(s,s)` lower bounds, with the strip argmin switching
//! branches at the crossover point `r_cross`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frac::{
    self, beta_integral_with, check_order, FracOrder, GaussLegendre, SampledFunction,
};

/// Boundary-condition coefficients `(gamma, delta, eta, zeta)` with the
/// fractional order `alpha` and derived determinant `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlParams {
    gamma: f64,
    delta: f64,
    eta: f64,
    zeta: f64,
    alpha: f64,
    d: f64,
}

impl SlParams {
    pub fn new(gamma: f64, delta: f64, eta: f64, zeta: f64, alpha: f64) -> Result<Self> {
        check_order("alpha", alpha)?;
        for (name, v) in [
            ("gamma", gamma),
            ("delta", delta),
            ("eta", eta),
            ("zeta", zeta),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be a nonnegative real"
                )));
            }
        }
        let d = eta * delta + gamma * zeta + gamma * eta / alpha;
        if !(d > 0.0) {
            return Err(Error::InvalidParams(format!(
                "determinant d = eta*delta + gamma*zeta + gamma*eta/alpha = {d} must be positive"
            )));
        }
        Ok(Self {
            gamma,
            delta,
            eta,
            zeta,
            alpha,
            d,
        })
    }

    /// Conjugate conditions `x(0) = x(1) = 0`.
    pub fn conjugate(alpha: f64) -> Result<Self> {
        Self::new(1.0, 0.0, 1.0, 0.0, alpha)
    }

    /// Right-focal conditions `x(0) = D^alpha x(1) = 0`.
    pub fn right_focal(alpha: f64) -> Result<Self> {
        Self::new(1.0, 0.0, 0.0, 1.0, alpha)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn determinant(&self) -> f64 {
        self.d
    }
}

/// The three boundary-condition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    SturmLiouville,
    Conjugate,
    RightFocal,
}

/// An evaluable two-variable kernel `G(t, s)` on the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenKernel {
    params: SlParams,
    family: KernelFamily,
}

impl GreenKernel {
    pub fn new(params: SlParams, family: KernelFamily) -> Result<Self> {
        match family {
            KernelFamily::Conjugate => Self::conjugate(params.alpha()),
            KernelFamily::RightFocal => Self::right_focal(params.alpha()),
            KernelFamily::SturmLiouville => Ok(Self { params, family }),
        }
    }

    pub fn sturm_liouville(params: SlParams) -> Self {
        Self {
            params,
            family: KernelFamily::SturmLiouville,
        }
    }

    pub fn conjugate(alpha: f64) -> Result<Self> {
        let k = Self {
            params: SlParams::conjugate(alpha)?,
            family: KernelFamily::Conjugate,
        };
        k.debug_check_family();
        Ok(k)
    }

    pub fn right_focal(alpha: f64) -> Result<Self> {
        let k = Self {
            params: SlParams::right_focal(alpha)?,
            family: KernelFamily::RightFocal,
        };
        k.debug_check_family();
        Ok(k)
    }

    pub fn params(&self) -> &SlParams {
        &self.params
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    /// `G(t, s)`; the `s <= t` branch is used at `t = s` (both agree there).
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
        let p = &self.params;
        let a = p.alpha;
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        (p.delta + p.gamma * libm::pow(lo, a) / a)
            * (p.zeta + p.eta * (1.0 - libm::pow(hi, a)) / a)
            / p.d
    }

    /// Diagonal value `G(s, s)`, the maximum of `G(., s)`.
    pub fn diagonal(&self, s: f64) -> f64 {
        self.eval(s, s)
    }

    /// Family closed forms from the corollary, checked against the general
    /// formula on a 33x33 grid when debug assertions are on.
    fn debug_check_family(&self) {
        if cfg!(debug_assertions) {
            let a = self.params.alpha;
            for i in 0..33 {
                for j in 0..33 {
                    let t = i as f64 / 32.0;
                    let s = j as f64 / 32.0;
                    let m = if s <= t { (s, t) } else { (t, s) };
                    let direct = match self.family {
                        KernelFamily::Conjugate => {
                            libm::pow(m.0, a) * (1.0 - libm::pow(m.1, a)) / a
                        }
                        KernelFamily::RightFocal => libm::pow(m.0, a) / a,
                        KernelFamily::SturmLiouville => continue,
                    };
                    debug_assert!(
                        libm::fabs(direct - self.eval(t, s)) < 1e-12,
                        "family closed form disagrees with general kernel at ({t}, {s})"
                    );
                }
            }
        }
    }
}

/// `g1(t) = min{(a d + g t^a)/(a d + g), (a z + e (1 - t^a))/(a z + e)}`,
/// the pointwise lower-bound envelope on the whole square.
pub fn g1(params: &SlParams, t: f64) -> f64 {
    let a = params.alpha;
    let ta = libm::pow(t, a);
    let left = (a * params.delta + params.gamma * ta) / (a * params.delta + params.gamma);
    let right = (a * params.zeta + params.eta * (1.0 - ta)) / (a * params.zeta + params.eta);
    left.min(right)
}

fn check_strip_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::Precondition(format!("strip parameter n = {n} must be >= 3")));
    }
    Ok(())
}

/// Crossover point where the strip argmin of `G(., s)` switches from
/// `t = 1 - 1/n` to `t = 1/n`. Always in `(1/n, 1 - 1/n]`; exactly
/// `1 - 1/n` when `gamma = 0`.
pub fn r_cross(params: &SlParams, n: u32) -> Result<f64> {
    check_strip_n(n)?;
    let nf = n as f64;
    if params.gamma == 0.0 {
        return Ok(1.0 - 1.0 / nf);
    }
    let a = params.alpha;
    let (g, dl, e, z) = (params.gamma, params.delta, params.eta, params.zeta);
    let nm1a = libm::pow(nf - 1.0, a);
    let na = libm::pow(nf, a);
    let num = a * g * z + g * e + a * dl * e * nm1a;
    let den = (a * dl * e + a * g * z + g * e) * na - g * e * nm1a + g * e;
    let r = libm::pow(num / den, 1.0 / a);
    debug_assert!(r > 1.0 / nf - 1e-12 && r <= 1.0 - 1.0 / nf + 1e-12);
    Ok(r)
}

/// Piecewise envelope `g2(s)` for the strip bound; the split sits at
/// [`r_cross`].
pub fn g2(params: &SlParams, n: u32, s: f64) -> Result<f64> {
    let r = r_cross(params, n)?;
    let a = params.alpha;
    let nf = n as f64;
    let v = if s <= r {
        (a * params.zeta + params.eta * (1.0 - libm::pow(1.0 - 1.0 / nf, a)))
            / (a * params.zeta + params.eta * (1.0 - libm::pow(s, a)))
    } else {
        (a * params.delta + params.gamma * libm::pow(1.0 / nf, a))
            / (a * params.delta + params.gamma * libm::pow(s, a))
    };
    Ok(v)
}

/// Constant strip-bound envelope
/// `g3 = min{(a z + e (1 - (1-1/n)^a))/(a z + e), (a d + g (1/n)^a)/(a d + g)}`.
pub fn g3(params: &SlParams, n: u32) -> Result<f64> {
    check_strip_n(n)?;
    let a = params.alpha;
    let nf = n as f64;
    let left = (a * params.zeta + params.eta * (1.0 - libm::pow(1.0 - 1.0 / nf, a)))
        / (a * params.zeta + params.eta);
    let right =
        (a * params.delta + params.gamma * libm::pow(1.0 / nf, a)) / (a * params.delta + params.gamma);
    Ok(left.min(right))
}

/// `1 / (1 - (3/4)^alpha)`: the cone comparison constant for the conjugate
/// kernel with the `[1/4, 3/4]` strip.
pub fn cone_ratio_constant(alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(1.0 / (1.0 - libm::pow(0.75, alpha)))
}

/// The strip-bound data for a given `n`: crossover point and constant bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripBounds {
    n: u32,
    g3: f64,
    r_cross: f64,
    alpha: f64,
}

impl StripBounds {
    pub fn new(params: &SlParams, n: u32) -> Result<Self> {
        let g3 = g3(params, n)?;
        let r = r_cross(params, n)?;
        let nf = n as f64;
        if !(r > 1.0 / nf - 1e-12 && r <= 1.0 - 1.0 / nf + 1e-12) {
            return Err(Error::InvalidParams(format!(
                "crossover r = {r} escaped (1/{n}, 1 - 1/{n}]"
            )));
        }
        if !(g3 > 0.0 && g3 <= 1.0) {
            return Err(Error::InvalidParams(format!("g3 = {g3} outside (0, 1]")));
        }
        Ok(Self {
            n,
            g3,
            r_cross: r,
            alpha: params.alpha(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn g3(&self) -> f64 {
        self.g3
    }
    pub fn r_cross(&self) -> f64 {
        self.r_cross
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Scanned margins of the strip bounds: the minimum over an `m`-point `s`
/// grid of `min_strip G(t, s) - g_k(s) G(s, s)` for the piecewise envelope
/// (`.0`) and the constant envelope (`.1`). Nonnegative up to roundoff when
/// the bounds hold.
pub fn strip_bound_margins(kernel: &GreenKernel, n: u32, m: usize) -> Result<(f64, f64)> {
    check_strip_n(n)?;
    let m = m.max(3);
    let nf = n as f64;
    let mut margin_g2 = f64::INFINITY;
    let mut margin_g3 = f64::INFINITY;
    let g3c = g3(kernel.params(), n)?;
    for j in 0..m {
        let s = j as f64 / (m - 1) as f64;
        let diag = kernel.diagonal(s);
        let (_, strip_min) =
            crate::scan::min_scan_1d(|t| kernel.eval(t, s), 1.0 / nf, 1.0 - 1.0 / nf, 401);
        margin_g2 = margin_g2.min(strip_min - g2(kernel.params(), n, s)? * diag);
        margin_g3 = margin_g3.min(strip_min - g3c * diag);
    }
    Ok((margin_g2, margin_g3))
}

/// Outcome of the Green-identity verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenIdentityReport {
    /// `max |(-D^beta D^alpha x)(t) - h(t)|` over grid nodes with
    /// `t in [0.05, 0.95]`.
    pub interior_residual: f64,
    /// `gamma x(0) - delta D^alpha x(0)` and `eta x(1) + zeta D^alpha x(1)`.
    pub bc_residual: [f64; 2],
    pub x0: f64,
    pub d_alpha_x0: f64,
    pub x1: f64,
    pub d_alpha_x1: f64,
}

/// Forms `x(t) = ∫_0^1 G(t, s) h(s) d_beta s` by quadrature, applies the
/// discrete `-D^beta D^alpha`, and reports how well `x` solves the boundary
/// value problem with data `h`.
///
/// The sample grid is uniform in `v = t^beta`, the same transformation the
/// quadrature and solver use, so both difference stages stay well resolved.
pub fn verify_green_identity<H: Fn(f64) -> f64>(
    kernel: &GreenKernel,
    order: FracOrder,
    h: H,
    grid: usize,
) -> Result<GreenIdentityReport> {
    if grid < 9 {
        return Err(Error::Precondition(format!("grid = {grid} too coarse, need >= 9")));
    }
    let p = *kernel.params();
    if libm::fabs(p.alpha() - order.alpha()) > 1e-14 {
        return Err(Error::Precondition(format!(
            "kernel alpha {} differs from operator alpha {}",
            p.alpha(),
            order.alpha()
        )));
    }
    let alpha = order.alpha();
    let beta = order.beta();
    let rule = GaussLegendre::new(24)?;

    // x(t) by branch-split quadrature; smooth integrand on each side.
    let x_at = |t: f64| -> Result<f64> {
        let left_factor = (p.zeta() + p.eta() * (1.0 - libm::pow(t, alpha)) / alpha) / p.determinant();
        let right_factor = (p.delta() + p.gamma() * libm::pow(t, alpha) / alpha) / p.determinant();
        let mut v = 0.0;
        if t > 0.0 {
            v += left_factor
                * beta_integral_with(
                    |s| (p.delta() + p.gamma() * libm::pow(s, alpha) / alpha) * h(s),
                    beta,
                    0.0,
                    t,
                    &rule,
                    3,
                )?;
        }
        if t < 1.0 {
            v += right_factor
                * beta_integral_with(
                    |s| (p.zeta() + p.eta() * (1.0 - libm::pow(s, alpha)) / alpha) * h(s),
                    beta,
                    t,
                    1.0,
                    &rule,
                    3,
                )?;
        }
        Ok(v)
    };

    let inv_beta = 1.0 / beta;
    let mut nodes = Vec::with_capacity(grid);
    let mut values = Vec::with_capacity(grid);
    for i in 0..grid {
        let t = libm::pow(i as f64 / (grid - 1) as f64, inv_beta);
        nodes.push(t);
        values.push(x_at(t)?);
    }
    let x0 = values[0];
    let x1 = values[grid - 1];
    let sampled = SampledFunction::new(nodes, values, (0.0, 1.0))?;
    let applied = frac::apply_fractional_operator(&sampled, order)?;

    let mut interior_residual: f64 = 0.0;
    for (t, y) in applied.nodes().iter().zip(applied.values()) {
        if *t < 0.05 || *t > 0.95 {
            continue;
        }
        interior_residual = interior_residual.max(libm::fabs(y - h(*t)));
    }

    // D^alpha x(0) = dx/du at u = 0 with u = t^alpha / alpha. Near the
    // origin x = x(0) + c1 u + c2 u^p + ... with p = 1 + beta/alpha, so fit
    // {1, u, u^p} through x at u in {0, u1, 2 u1} and read off the slope.
    let u1 = 1e-5;
    let pexp = 1.0 + beta / alpha;
    let t_of_u = |u: f64| libm::pow(alpha * u, 1.0 / alpha);
    let d_alpha_x0 = {
        let u2 = 2.0 * u1;
        let y1 = x_at(t_of_u(u1))? - x0;
        let y2 = x_at(t_of_u(u2))? - x0;
        let p1 = libm::pow(u1, pexp);
        let p2 = libm::pow(u2, pexp);
        (y1 * p2 - y2 * p1) / (u1 * p2 - u2 * p1)
    };

    // D^alpha x(1): x is smooth at the right endpoint, one-sided 3-point
    // stencil in u suffices.
    let d_alpha_x1 = {
        let dt = 1e-4;
        let ts = [1.0 - 2.0 * dt, 1.0 - dt, 1.0];
        let us: Vec<f64> = ts.iter().map(|&t| libm::pow(t, alpha) / alpha).collect();
        let xs: Vec<f64> = [x_at(ts[0])?, x_at(ts[1])?, x1].to_vec();
        *frac::derivative_nonuniform(&us, &xs).last().unwrap()
    };

    Ok(GreenIdentityReport {
        interior_residual,
        bc_residual: [
            p.gamma() * x0 - p.delta() * d_alpha_x0,
            p.eta() * x1 + p.zeta() * d_alpha_x1,
        ],
        x0,
        d_alpha_x0,
        x1,
        d_alpha_x1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn params_reject_bad_input() {
        assert!(SlParams::new(-1.0, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(SlParams::new(0.0, 1.0, 0.0, 1.0, 1.0).is_err()); // d = 0
        assert!(SlParams::new(1.0, 0.0, 1.0, 0.0, 1.5).is_err());
        let p = SlParams::conjugate(0.5).unwrap();
        assert_abs_diff_eq!(p.determinant(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn conjugate_kernel_classical_case() {
        let k = GreenKernel::conjugate(1.0).unwrap();
        // alpha = 1: G(t,s) = s(1-t) for s <= t
        assert_abs_diff_eq!(k.eval(0.5, 0.5), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(k.eval(0.8, 0.3), 0.3 * 0.2, epsilon = 1e-15);
        for s in [0.0, 0.3, 0.9, 1.0] {
            assert_abs_diff_eq!(k.eval(0.0, s), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(k.eval(1.0, s), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn right_focal_kernel_is_min_power() {
        for &a in &[0.3, 0.5, 1.0] {
            let k = GreenKernel::right_focal(a).unwrap();
            for &(t, s) in &[(0.2f64, 0.7), (0.7, 0.2), (1.0, 1.0), (0.5, 0.5)] {
                let expect = libm::pow(t.min(s), a) / a;
                assert_abs_diff_eq!(k.eval(t, s), expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn branches_agree_on_diagonal() {
        let p = SlParams::new(1.2, 0.4, 0.8, 0.1, 0.6).unwrap();
        let k = GreenKernel::sturm_liouville(p);
        for i in 0..=20 {
            let s = i as f64 / 20.0;
            let a = p.alpha();
            let upper = (p.delta() + p.gamma() * libm::pow(s, a) / a)
                * (p.zeta() + p.eta() * (1.0 - libm::pow(s, a)) / a)
                / p.determinant();
            assert_abs_diff_eq!(k.eval(s, s), upper, epsilon = 1e-15);
        }
    }

    #[test]
    fn g1_conjugate_midpoint() {
        let p = SlParams::conjugate(1.0).unwrap();
        assert_abs_diff_eq!(g1(&p, 0.5), 0.5, epsilon = 1e-15);
        // t = 1: min{1, a z / (a z + e)} which is 0 for conjugate
        assert_abs_diff_eq!(g1(&p, 1.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn g1_conjugate_half_order() {
        // alpha = 1/2, t = 1/4: t^a = 1/2 so both ratios are 1/2.
        let p = SlParams::conjugate(0.5).unwrap();
        assert_abs_diff_eq!(g1(&p, 0.25), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn r_cross_known_values() {
        let conj = SlParams::conjugate(1.0).unwrap();
        assert_abs_diff_eq!(r_cross(&conj, 4).unwrap(), 0.5, epsilon = 1e-15);
        let rf = SlParams::right_focal(0.7).unwrap();
        // gamma != 0 for right-focal, but eta = 0 makes the formula collapse:
        let r = r_cross(&rf, 5).unwrap();
        assert!(r > 1.0 / 5.0 && r <= 0.8 + 1e-15);
        // gamma = 0 short-circuit
        let g0 = SlParams::new(0.0, 1.0, 1.0, 0.5, 0.6).unwrap();
        assert_abs_diff_eq!(r_cross(&g0, 7).unwrap(), 1.0 - 1.0 / 7.0, epsilon = 1e-16);
    }

    #[test]
    fn r_cross_in_range_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = loop {
                let q = SlParams::new(
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.1..=1.0),
                );
                if let Ok(q) = q {
                    break q;
                }
            };
            for n in [3u32, 4, 5, 8] {
                let r = r_cross(&p, n).unwrap();
                let nf = n as f64;
                assert!(
                    r > 1.0 / nf - 1e-12 && r <= 1.0 - 1.0 / nf + 1e-12,
                    "r = {r} out of range for n = {n}"
                );
            }
        }
    }

    #[test]
    fn g2_conjugate_samples() {
        let p = SlParams::conjugate(1.0).unwrap();
        // n = 4, s = 3/4 is on the delta branch: (1/4)/(3/4) = 1/3
        assert_abs_diff_eq!(g2(&p, 4, 0.75).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        // s = 0 on the zeta branch: (1 - 3/4)/(1 - 0) = 1/4
        assert_abs_diff_eq!(g2(&p, 4, 0.0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn g2_dominates_g3() {
        let p = SlParams::new(0.9, 0.2, 1.4, 0.05, 0.55).unwrap();
        for n in [3u32, 4, 8] {
            let c = g3(&p, n).unwrap();
            for j in 0..=100 {
                let s = j as f64 / 100.0;
                assert!(g2(&p, n, s).unwrap() >= c - 1e-14);
            }
        }
    }

    #[test]
    fn g3_known_constants() {
        let conj = SlParams::conjugate(1.0).unwrap();
        assert_abs_diff_eq!(g3(&conj, 4).unwrap(), 0.25, epsilon = 1e-15);
        for &a in &[0.2, 0.5, 0.8, 1.0] {
            for n in [3u32, 4, 6] {
                let rf = SlParams::right_focal(a).unwrap();
                assert_abs_diff_eq!(
                    g3(&rf, n).unwrap(),
                    libm::pow(1.0 / n as f64, a),
                    epsilon = 1e-15
                );
            }
        }
        // conjugate alpha = 1/2, n = 4: min{1 - sqrt(3)/2, 1/2}
        let half = SlParams::conjugate(0.5).unwrap();
        let expect = 1.0 - libm::sqrt(3.0) / 2.0;
        assert_abs_diff_eq!(g3(&half, 4).unwrap(), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(expect, 0.13397, epsilon = 5e-6);
    }

    #[test]
    fn g3_matches_brute_force_ratio_min() {
        // min over the strip of G(t,s)/G(s,s) on a 401x401 grid is bounded
        // below by g3, and the bound is attained somewhere.
        let p = SlParams::conjugate(0.5).unwrap();
        let k = GreenKernel::sturm_liouville(p);
        let c = g3(&p, 4).unwrap();
        let mut min_ratio = f64::INFINITY;
        for j in 0..=400 {
            let s = j as f64 / 400.0;
            let diag = k.diagonal(s);
            if diag < 1e-14 {
                continue;
            }
            for i in 0..=400 {
                let t = 0.25 + 0.5 * i as f64 / 400.0;
                min_ratio = min_ratio.min(k.eval(t, s) / diag);
            }
        }
        assert!(min_ratio >= c - 1e-12);
        assert_abs_diff_eq!(min_ratio, c, epsilon = 1e-2);
    }

    #[test]
    fn cone_ratio_values() {
        assert_abs_diff_eq!(cone_ratio_constant(1.0).unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            cone_ratio_constant(0.5).unwrap(),
            1.0 / (1.0 - libm::sqrt(3.0) / 2.0),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(cone_ratio_constant(0.5).unwrap(), 7.4641, epsilon = 1e-4);
        // monotone decreasing in alpha
        let mut prev = f64::INFINITY;
        for i in 1..=10 {
            let a = i as f64 / 10.0;
            let c = cone_ratio_constant(a).unwrap();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn strip_bounds_construct() {
        let p = SlParams::conjugate(0.8).unwrap();
        let sb = StripBounds::new(&p, 4).unwrap();
        assert!(sb.g3() > 0.0 && sb.g3() <= 1.0);
        assert!(sb.r_cross() > 0.25 && sb.r_cross() <= 0.75);
        assert!(StripBounds::new(&p, 2).is_err());
    }

    #[test]
    fn identity_zero_data() {
        let k = GreenKernel::conjugate(0.7).unwrap();
        let order = FracOrder::new(0.7, 0.5).unwrap();
        let rep = verify_green_identity(&k, order, |_| 0.0, 65).unwrap();
        assert_abs_diff_eq!(rep.interior_residual, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rep.bc_residual[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rep.bc_residual[1], 0.0, epsilon = 1e-13);
    }

    #[test]
    fn identity_classical_unit_load() {
        // alpha = beta = 1, h = 1: x(t) = t(1-t)/2.
        let k = GreenKernel::conjugate(1.0).unwrap();
        let order = FracOrder::new(1.0, 1.0).unwrap();
        let rep = verify_green_identity(&k, order, |_| 1.0, 257).unwrap();
        assert!(rep.interior_residual < 1e-6, "residual {}", rep.interior_residual);
        assert!(rep.bc_residual[0].abs() < 1e-8);
        assert!(rep.bc_residual[1].abs() < 1e-8);
    }

    #[test]
    fn identity_sine_load_mixed_order() {
        let k = GreenKernel::conjugate(1.0).unwrap();
        let order = FracOrder::new(1.0, 0.5).unwrap();
        let rep = verify_green_identity(&k, order, libm::sin, 257).unwrap();
        assert!(rep.interior_residual < 1e-4, "residual {}", rep.interior_residual);
        assert!(rep.bc_residual[0].abs() < 1e-6);
        assert!(rep.bc_residual[1].abs() < 1e-6);
    }
}
