//! Growth-condition certificates for positive solutions of the conjugate
//! problem `-D^beta D^alpha x = f(t, x)`, `x(0) = x(1) = 0`.
//!
//! With `C = 1/(1 - (3/4)^alpha)` and
//! `N = ((1 - (3/4)^alpha) ∫_{1/4}^{3/4} G(s,s) d_beta s)^{-1}`, a pair
//! `0 < C r < R` certifies a positive solution whenever
//!
//! - (i) `f(s, x) <= R (alpha + beta)(2 alpha + beta)` on `[0,1] x [0,R]`, and
//! - (ii) `f(s, x) >= r N` on `[1/4, 3/4] x [r, C r]`.
//!
//! The solution then satisfies `r <= min_{[1/4,3/4]} x` and `max x <= R`.
//!
//! Extrema of `f` are located by grid scan with local refinement and the
//! margins are recorded, so a consumer can judge how much slack a
//! certificate has.

use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::frac::{beta_integral, FracOrder};
use crate::greens::cone_ratio_constant;
use crate::scan::extremum_scan_2d;

/// Note stored in every certificate about how `N` is computed: the diagonal
/// `G(s,s) = s^alpha (1 - s^alpha) / alpha` keeps its `1/alpha` factor inside
/// the integral, as the quadrature oracle confirms (the factor is invisible
/// at `alpha = 1`).
pub const N_FORM: &str = "N = 1/((1-(3/4)^a) * I) with I = (1/a)[s^(a+b)/(a+b) - s^(2a+b)/(2a+b)] from 1/4 to 3/4";

/// A nonlinearity `f(s, x)` supplied as a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    expr: Expr,
    text: String,
}

impl Nonlinearity {
    /// Parses `text` in the variables `s` and `x`.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            expr: expr::parse(text)?,
            text: String::from(text),
        })
    }

    pub fn from_expr(expr: Expr) -> Self {
        let text = format!("{expr}");
        Self { expr, text }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn eval(&self, s: f64, x: f64) -> Result<f64> {
        expr::eval(&self.expr, s, x)
    }

    /// Evaluation for certificate scans: additionally rejects negative values.
    fn eval_nonneg(&self, s: f64, x: f64) -> Result<f64> {
        let v = self.eval(s, x)?;
        if v < 0.0 {
            return Err(Error::Evaluation2 {
                s,
                x,
                detail: format!("f = {v} is negative; certification needs f >= 0"),
            });
        }
        Ok(v)
    }
}

/// Certification outcome; failures name the first check that broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStatus {
    Certified,
    FailedGap,
    FailedCondI,
    FailedCondII,
}

impl CertStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertStatus::Certified => "certified",
            CertStatus::FailedGap => "failed_gap",
            CertStatus::FailedCondI => "failed_cond_i",
            CertStatus::FailedCondII => "failed_cond_ii",
        }
    }
}

/// A verified `(r, R, N, cone-constant)` tuple with the signed slack of both
/// growth conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceCertificate {
    pub r_inner: f64,
    pub r_outer: f64,
    pub n_const: f64,
    pub cone_const: f64,
    pub order: FracOrder,
    /// `R (a+b)(2a+b) - sup f` over `[0,1] x [0,R]`; nonnegative iff (i) holds.
    pub cond_i_margin: f64,
    /// `inf f - r N` over `[1/4,3/4] x [r, C r]`; nonnegative iff (ii) holds.
    pub cond_ii_margin: f64,
    pub status: CertStatus,
    /// Scan resolution per axis used to locate the extrema.
    pub grid: usize,
    /// How `N` was computed; see [`N_FORM`].
    pub n_form: &'static str,
}

impl ExistenceCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::Certified
    }
}

/// `∫_{1/4}^{3/4} G(s,s) d_beta s` for the conjugate kernel, by quadrature.
pub fn diagonal_mass(order: FracOrder) -> Result<f64> {
    let a = order.alpha();
    beta_integral(
        |s| libm::pow(s, a) * (1.0 - libm::pow(s, a)) / a,
        order.beta(),
        0.25,
        0.75,
        64,
    )
}

/// The same integral from the antiderivative
/// `(1/a)[s^(a+b)/(a+b) - s^(2a+b)/(2a+b)]`; oracle for [`diagonal_mass`].
pub fn diagonal_mass_closed_form(order: FracOrder) -> f64 {
    let a = order.alpha();
    let b = order.beta();
    let anti = |s: f64| {
        (libm::pow(s, a + b) / (a + b) - libm::pow(s, 2.0 * a + b) / (2.0 * a + b)) / a
    };
    anti(0.75) - anti(0.25)
}

/// The constant `N` of the growth condition (ii).
pub fn compute_n(order: FracOrder) -> Result<f64> {
    let shrink = 1.0 - libm::pow(0.75, order.alpha());
    Ok(1.0 / (shrink * diagonal_mass(order)?))
}

/// The cap `R (alpha + beta)(2 alpha + beta)` of the growth condition (i).
///
/// The constant is exactly the reciprocal of `∫_0^1 G(s,s) d_beta s` for the
/// conjugate kernel; [`unit_mass_identity`] exposes that identity for tests.
pub fn cond_i_bound(order: FracOrder, r_outer: f64) -> Result<f64> {
    if !(r_outer > 0.0) {
        return Err(Error::Precondition(format!("R = {r_outer} must be positive")));
    }
    let a = order.alpha();
    let b = order.beta();
    Ok(r_outer * (a + b) * (2.0 * a + b))
}

/// `(alpha + beta)(2 alpha + beta) ∫_0^1 G(s,s) d_beta s`, which equals 1 for
/// the conjugate kernel.
pub fn unit_mass_identity(order: FracOrder) -> Result<f64> {
    let a = order.alpha();
    let full = beta_integral(
        |s| libm::pow(s, a) * (1.0 - libm::pow(s, a)) / a,
        order.beta(),
        0.0,
        1.0,
        64,
    )?;
    Ok((a + order.beta()) * (2.0 * a + order.beta()) * full)
}

/// Checks the gap and growth conditions for `(r, R)` and reports the result.
///
/// `grid` is the scan resolution per axis (at least 101); extrema are then
/// refined locally to tolerance 1e-10.
pub fn certify(
    f: &Nonlinearity,
    order: FracOrder,
    r_inner: f64,
    r_outer: f64,
    grid: usize,
) -> Result<ExistenceCertificate> {
    if !(r_inner > 0.0 && r_outer > 0.0) {
        return Err(Error::Precondition(format!(
            "radii must be positive, got r = {r_inner}, R = {r_outer}"
        )));
    }
    if grid < 101 {
        return Err(Error::Precondition(format!(
            "scan resolution {grid} too small, need >= 101 per axis"
        )));
    }
    let cone_const = cone_ratio_constant(order.alpha())?;
    let n_const = compute_n(order)?;

    let (_, _, sup_f) = extremum_scan_2d(
        |s, x| f.eval_nonneg(s, x),
        (0.0, 1.0),
        (0.0, r_outer),
        grid,
        grid,
        true,
    )?;
    let cond_i_margin = cond_i_bound(order, r_outer)? - sup_f;

    let (_, _, inf_f) = extremum_scan_2d(
        |s, x| f.eval_nonneg(s, x),
        (0.25, 0.75),
        (r_inner, cone_const * r_inner),
        grid,
        grid,
        false,
    )?;
    let cond_ii_margin = inf_f - r_inner * n_const;

    let status = if !(cone_const * r_inner < r_outer) {
        CertStatus::FailedGap
    } else if cond_i_margin < 0.0 {
        CertStatus::FailedCondI
    } else if cond_ii_margin < 0.0 {
        CertStatus::FailedCondII
    } else {
        CertStatus::Certified
    };

    Ok(ExistenceCertificate {
        r_inner,
        r_outer,
        n_const,
        cone_const,
        order,
        cond_i_margin,
        cond_ii_margin,
        status,
        grid,
        n_form: N_FORM,
    })
}

/// Outcome of the automated `(r, R)` sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// Certified pair maximizing `min(cond_i_margin, cond_ii_margin)`.
    Certified(ExistenceCertificate),
    /// No pair certified; the tightest failure (largest worst margin) is
    /// returned for diagnosis.
    Failed(ExistenceCertificate),
}

/// Logarithmic sweep over candidate `(r, R)` pairs respecting the gap
/// constraint.
pub fn search_r_r(
    f: &Nonlinearity,
    order: FracOrder,
    r_range: (f64, f64),
    r_outer_range: (f64, f64),
    steps: usize,
) -> Result<SearchOutcome> {
    if steps < 2 {
        return Err(Error::Precondition(format!("steps = {steps} must be >= 2")));
    }
    for (name, (lo, hi)) in [("r", r_range), ("R", r_outer_range)] {
        if !(lo > 0.0 && hi >= lo) {
            return Err(Error::Precondition(format!(
                "{name} range [{lo}, {hi}] must be positive and nonempty"
            )));
        }
    }
    let cone_const = cone_ratio_constant(order.alpha())?;
    let log_step = |(lo, hi): (f64, f64), i: usize| -> f64 {
        if steps == 1 {
            lo
        } else {
            lo * libm::exp(libm::log(hi / lo) * i as f64 / (steps - 1) as f64)
        }
    };
    let mut best_ok: Option<ExistenceCertificate> = None;
    let mut best_fail: Option<ExistenceCertificate> = None;
    for i in 0..steps {
        let r = log_step(r_range, i);
        for j in 0..steps {
            let big_r = log_step(r_outer_range, j);
            if !(cone_const * r < big_r) {
                continue;
            }
            let cert = certify(f, order, r, big_r, 101)?;
            let worst = cert.cond_i_margin.min(cert.cond_ii_margin);
            if cert.is_certified() {
                if best_ok
                    .as_ref()
                    .map_or(true, |b| worst > b.cond_i_margin.min(b.cond_ii_margin))
                {
                    best_ok = Some(cert);
                }
            } else if best_fail
                .as_ref()
                .map_or(true, |b| worst > b.cond_i_margin.min(b.cond_ii_margin))
            {
                best_fail = Some(cert);
            }
        }
    }
    match (best_ok, best_fail) {
        (Some(c), _) => Ok(SearchOutcome::Certified(c)),
        (None, Some(c)) => Ok(SearchOutcome::Failed(c)),
        (None, None) => Err(Error::Precondition(String::from(
            "no candidate pair satisfied the gap constraint; widen the ranges",
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn order(a: f64, b: f64) -> FracOrder {
        FracOrder::new(a, b).unwrap()
    }

    #[test]
    fn n_matches_worked_value() {
        // alpha = 1, beta = 1/2: N = 960 / (33 sqrt(3) - 17)
        let n = compute_n(order(1.0, 0.5)).unwrap();
        let exact = 960.0 / (33.0 * libm::sqrt(3.0) - 17.0);
        assert_relative_eq!(n, exact, max_relative = 1e-13);
        assert_abs_diff_eq!(n, 23.906, epsilon = 5e-3);
    }

    #[test]
    fn n_classical_orders() {
        // alpha = beta = 1: diagonal mass is int_{1/4}^{3/4} s(1-s) ds = 11/96,
        // so N = 1/((1/4)(11/96)) = 384/11
        let n = compute_n(order(1.0, 1.0)).unwrap();
        assert_relative_eq!(n, 384.0 / 11.0, max_relative = 1e-13);
    }

    #[test]
    fn n_definition_closes() {
        for &(a, b) in &[(0.25, 0.25), (0.5, 1.0), (0.75, 0.3), (1.0, 0.6)] {
            let o = order(a, b);
            let n = compute_n(o).unwrap();
            let shrink = 1.0 - libm::pow(0.75, a);
            assert_abs_diff_eq!(n * shrink * diagonal_mass(o).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn quadrature_agrees_with_antiderivative() {
        for &a in &[0.25, 0.5, 0.75, 1.0] {
            for &b in &[0.25, 0.5, 0.75, 1.0] {
                let o = order(a, b);
                assert_relative_eq!(
                    diagonal_mass(o).unwrap(),
                    diagonal_mass_closed_form(o),
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn cond_i_bound_worked_value() {
        // alpha = 1, beta = 1/2, R = 9/25: cap = 15/4 * 9/25 = 27/20
        let cap = cond_i_bound(order(1.0, 0.5), 0.36).unwrap();
        assert_abs_diff_eq!(cap, 27.0 / 20.0, epsilon = 1e-14);
        let six = cond_i_bound(order(1.0, 1.0), 1.0).unwrap();
        assert_abs_diff_eq!(six, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn unit_mass_identity_holds() {
        for &a in &[0.3, 0.7, 1.0] {
            for &b in &[0.3, 0.7, 1.0] {
                let v = unit_mass_identity(order(a, b)).unwrap();
                assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn certifies_worked_example() {
        let f = Nonlinearity::parse("1 + 0.25*sin(s) + x^2").unwrap();
        let cert = certify(&f, order(1.0, 0.5), 0.011, 0.36, 101).unwrap();
        assert!(cert.is_certified(), "margins: {} / {}", cert.cond_i_margin, cert.cond_ii_margin);
        assert!(cert.cond_i_margin >= 0.0);
        assert!(cert.cond_ii_margin >= 0.0);
        assert_abs_diff_eq!(cert.cone_const, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_nonlinearity_fails_inner_condition() {
        let f = Nonlinearity::parse("0").unwrap();
        let cert = certify(&f, order(1.0, 0.5), 0.011, 0.36, 101).unwrap();
        assert_eq!(cert.status, CertStatus::FailedCondII);
        assert!(cert.cond_ii_margin < 0.0);
    }

    #[test]
    fn oversized_constant_fails_outer_condition() {
        // cap for R = 9/25 is 27/20; any constant above it breaks (i)
        let f = Nonlinearity::parse("2").unwrap();
        let cert = certify(&f, order(1.0, 0.5), 0.011, 0.36, 101).unwrap();
        assert_eq!(cert.status, CertStatus::FailedCondI);
    }

    #[test]
    fn gap_violation_reported() {
        let f = Nonlinearity::parse("1 + x").unwrap();
        let cert = certify(&f, order(1.0, 0.5), 0.2, 0.36, 101).unwrap();
        assert_eq!(cert.status, CertStatus::FailedGap);
    }

    #[test]
    fn negative_nonlinearity_rejected() {
        let f = Nonlinearity::parse("0 - 1").unwrap();
        assert!(matches!(
            certify(&f, order(1.0, 0.5), 0.011, 0.36, 101),
            Err(Error::Evaluation2 { .. })
        ));
    }

    #[test]
    fn certify_monotone_recheck_in_outer_radius() {
        let f = Nonlinearity::parse("1 + 0.25*sin(s) + x^2").unwrap();
        let at_paper = certify(&f, order(1.0, 0.5), 0.011, 0.36, 101).unwrap();
        let at_half = certify(&f, order(1.0, 0.5), 0.011, 0.5, 101).unwrap();
        assert!(at_paper.is_certified());
        assert!(at_half.is_certified());
    }

    #[test]
    fn margins_stable_under_grid_doubling() {
        let f = Nonlinearity::parse("1 + 0.25*sin(s) + x^2").unwrap();
        let c1 = certify(&f, order(1.0, 0.5), 0.011, 0.36, 101).unwrap();
        let c2 = certify(&f, order(1.0, 0.5), 0.011, 0.36, 202).unwrap();
        assert_abs_diff_eq!(c1.cond_i_margin, c2.cond_i_margin, epsilon = 1e-6);
        assert_abs_diff_eq!(c1.cond_ii_margin, c2.cond_ii_margin, epsilon = 1e-6);
    }

    #[test]
    fn search_finds_workable_pair() {
        let f = Nonlinearity::parse("1 + 0.25*sin(s) + x^2").unwrap();
        let out = search_r_r(&f, order(1.0, 0.5), (0.005, 0.05), (0.2, 0.5), 5).unwrap();
        match out {
            SearchOutcome::Certified(c) => assert!(c.is_certified()),
            SearchOutcome::Failed(c) => panic!("expected success, best failure {:?}", c.status),
        }
    }

    #[test]
    fn pure_square_fails_for_tiny_radius() {
        let f = Nonlinearity::parse("x^2").unwrap();
        let out = search_r_r(&f, order(1.0, 0.5), (1e-4, 1e-3), (0.01, 0.1), 4).unwrap();
        match out {
            SearchOutcome::Failed(c) => assert_eq!(c.status, CertStatus::FailedCondII),
            SearchOutcome::Certified(c) => panic!("x^2 should not certify at r = {}", c.r_inner),
        }
    }

    #[test]
    fn search_rejects_empty_range() {
        let f = Nonlinearity::parse("1").unwrap();
        assert!(search_r_r(&f, order(1.0, 0.5), (0.1, 0.01), (0.2, 0.5), 4).is_err());
        assert!(search_r_r(&f, order(1.0, 0.5), (0.01, 0.1), (0.2, 0.5), 1).is_err());
    }
}
