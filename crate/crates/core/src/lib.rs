//! Halfspaces in hyperbolic graphs, the Farey graph as the curve complex
//! of the torus, and random walks on `SL(2, Z)`.

pub mod error;
pub mod hyperbolic;
pub mod measure;
pub mod schottky;
pub mod seed;
pub mod stats;
pub mod torus;
pub mod walk;

pub use error::{Error, Result};
