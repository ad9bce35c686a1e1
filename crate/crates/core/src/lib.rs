//! Resource calculus for the mother/father family of quantum protocols.
//!
//! * [`algebra`]: exact entropic coefficients, resource vectors and
//!   resource inequalities, with the ASCII notation.
//! * [`derivation`]: composition, catalysis and the coherence rules, plus the
//!   scripted family tree with replayable traces.
//! * [`entropy`]: purifications, Stinespring dilations and von Neumann
//!   entropies for evaluating rates on concrete states and channels.
//! * [`circuit`]: exact state-vector runs of the noiseless protocols.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod circuit;
pub mod derivation;
pub mod entropy;
pub mod rng;
