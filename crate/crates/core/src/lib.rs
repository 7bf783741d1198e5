pub mod character;
pub mod error;
pub mod fuchsian;
pub mod io;
pub mod isomonodromy;
pub mod linalg;
pub mod monodromy;
pub mod ode;
pub mod poly;
pub mod scalar;
pub mod transform;

/// The guide's snippets, compiled as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fuchsian.md")]
    struct Fuchsian;
    #[doc = include_str!("../../../book/src/monodromy.md")]
    struct Monodromy;
    #[doc = include_str!("../../../book/src/character.md")]
    struct Character;
    #[doc = include_str!("../../../book/src/transformations.md")]
    struct Transformations;
    #[doc = include_str!("../../../book/src/isomonodromy.md")]
    struct Isomonodromy;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

pub use error::{Error, Result};
pub use linalg::{Matrix2, ParabolicLine, C64};

use serde::{Deserialize, Serialize};

/// Integrator, verification and spectral tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Per-step local error of the adaptive integrator.
    pub integrator: f64,
    /// Bound on monodromy self-checks and trace drift.
    pub verify: f64,
    /// Integrality and spectrum tests on floats.
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            integrator: 1e-10,
            verify: 1e-6,
            spectral: 1e-8,
        }
    }
}
