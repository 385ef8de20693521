//! Conformable fractional calculus for the iterated Sturm–Liouville problem
//! `-D^beta D^alpha x = f(t, x)` on `[0, 1]`.
//!
//! The crate is organized around the pipeline a user walks through:
//!
//! - [`frac`] — the conformable derivative `D^alpha f(t) = t^{1-alpha} f'(t)`,
//!   the weighted integral `∫ f(s) s^{beta-1} ds`, and a discrete
//!   `-D^beta D^alpha` operator on sampled data.
//! - [`greens`] — closed-form Green's kernels for the Sturm–Liouville,
//!   conjugate, and right-focal boundary conditions, together with the
//!   lower-bound envelopes `g1`, `g2`, `g3` and the strip crossover point.
//! - [`existence`] — checks the growth conditions that guarantee a positive
//!   solution for a given nonlinearity and emits a machine-checkable
//!   certificate.
//! - [`solver`] — Picard iteration on the Hammerstein operator
//!   `A x = ∫ G(·,s) f(s, x(s)) d_beta s`, with residual and cone
//!   diagnostics.
//! - [`expr`] — a small expression language so `f(s, x)` can be supplied as
//!   text.
//!
//! The crate is `no_std` (with `alloc`) so the numerical kernels carry no IO;
//! file formats and the CLI live in the companion `conformable-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod existence;
pub mod expr;
pub mod frac;
pub mod greens;
pub mod scan;
pub mod solver;

pub use error::Error;
pub use existence::{certify, compute_n, cond_i_bound, ExistenceCertificate, Nonlinearity};
pub use frac::{beta_integral, conformable_derivative, FracOrder, SampledFunction};
pub use greens::{GreenKernel, KernelFamily, SlParams};
pub use solver::{solve_picard, SolutionProfile};
