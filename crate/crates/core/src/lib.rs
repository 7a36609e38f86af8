//! Numerical toolkit for the degenerating subgroup family `H_t` of a real
//! reductive matrix group, the Oshima space it produces, and the groupoids
//! living on that space.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: Cartan data, restricted roots and the `KAN`, `NAK`, `KAK`
//!   factorizations;
//! * [`parabolic`]: standard parabolic data attached to subsets of simple roots;
//! * [`degeneration`]: the subalgebras `h_t`, the groups `H_t`, the `A`-action
//!   on parameters and the `N·A·H_t` factorization;
//! * [`fell`]: sampled closed subsets and windowed Hausdorff distances;
//! * [`oshima`]: points of the Oshima space, charts, orbits and the `SL(2,R)`
//!   sphere model;
//! * [`groupoid`]: arrows of the Oshima groupoid and its chart description;
//! * [`bgroupoid`]: the model b-groupoid and normal derivatives;
//! * [`verify`]: the seeded property suite behind the `verify` command.

use serde::{Deserialize, Serialize};

pub mod bgroupoid;
pub mod degeneration;
pub mod error;
pub mod fell;
pub mod groupoid;
pub mod lie;
pub mod linalg;
pub mod oshima;
pub mod parabolic;
pub mod random;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use lie::{Group, GroupSpec, ReductiveGroupData, RestrictedRootDatum};
pub use subspace::Subalgebra;

/// Numerical tolerances shared by all computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Algebraic identities (brackets, involutions, closure).
    pub alg: f64,
    /// Matrix factorizations and chart coordinates.
    pub fact: f64,
    /// Integrality of root coefficients.
    pub int: f64,
    /// Relative gap separating eigenvalue clusters.
    pub cluster: f64,
    /// Relative singular-value threshold for ranks and kernels.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            alg: 1e-10,
            fact: 1e-9,
            int: 1e-6,
            cluster: 1e-8,
            rank: 1e-8,
        }
    }
}
