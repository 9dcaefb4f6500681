//! Equilibrium computation for two-player zero-sum games.
//!
//! The crate covers both ends of the fictitious-play family:
//!
//! * [`normal_form`]: vanilla fictitious play, Q-value based sync fictitious
//!   play (which skips runs of iterations whose best-response profile cannot
//!   change), and regret matching on matrix games.
//! * [`solvers`]: CFR, CFR+, pure CFR (PCFR) and sync PCFR on extensive-form
//!   game trees, with node-touch accounting.
//!
//! [`metrics`] evaluates profiles (best responses, exploitability, game
//! value) and [`game`] holds the tree representation together with Kuhn and
//! Leduc poker.

pub mod error;
pub mod game;
pub mod metrics;
pub mod normal_form;
pub mod solvers;

pub use error::{Error, Result};
