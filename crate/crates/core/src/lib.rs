//! Exact rational weighted sum-of-squares Lyapunov certificates.
//!
//! The pipeline has a numeric half and an exact half. The numeric half sets up
//! and solves dense semidefinite feasibility programs ([`sdp`]) coupling the
//! Gram matrix of a candidate Lyapunov function `V` with the Gram matrix of
//! its decrease polynomial along the system dynamics ([`lyapunov`]). The exact
//! half rounds the floating-point solution to rationals and repairs the
//! rounding error with a perturbation/absorption procedure ([`sos`]) so that
//! the final certificate `g = c_1 s_1^2 + ... + c_r s_r^2` holds
//! coefficient-by-coefficient over arbitrary-precision rationals
//! ([`exactnum`], [`poly`]).
//!
//! On top of the exact certificates, [`kernel`] provides an executable
//! constructive-analysis layer: Cauchy reals with moduli, uniformly continuous
//! functions with moduli of continuity, and precision-indexed checkers for
//! nonnegativity and positive definiteness with rational witnesses.
//!
//! The [`cli`] module defines the system/certificate text formats and the
//! `synth` / `check` / `kernel` commands used by the `lyapcert` binary.

// indexed loops are the house style in the dense linear-algebra kernels
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod exactnum;
pub mod kernel;
pub mod lyapunov;
pub mod poly;
pub mod rng;
pub mod sdp;
pub mod sos;
