//! Partly overloaded CDMA spreading sequences with variable spreading factor.
//!
//! The crate is organized in four layers:
//!
//! * [`codes`] — Hadamard/OVSF matrix generation, cross-correlation, and the
//!   partly overloaded code sets built by column-pair interchange.
//! * [`tree`] — the partly overloaded OVSF code tree with per-class code
//!   allocation (globally orthogonal codes for machine-type users, overloaded
//!   codes for best-effort users).
//! * [`phy`] — the baseband signal chain: BPSK/QPSK modulation, optional
//!   rate-1/2 convolutional FEC, spreading, superposition, AWGN, despreading.
//! * [`engine`] — a deterministic Monte Carlo engine that measures per-class
//!   bit error rates and runs the standard parameter sweeps.

pub mod codes;
pub mod engine;
pub mod phy;
pub mod tree;
