//! Outage probability of vehicular transmissions at a two-road intersection.
//!
//! Two perpendicular roads cross at the origin. Interfering vehicles form an
//! independent one-dimensional homogeneous Poisson point process on each road
//! and access the channel with slotted ALOHA. A source talks to a destination
//! either directly or through a half-duplex decode-and-forward relay, with
//! selection combining (SC) or maximum ratio combining (MRC) at the
//! destination. All links see Rayleigh fading and a power-law path loss
//! `(A r)^-alpha`.
//!
//! The crate computes exact outage probabilities for this model:
//!
//! * [`geometry`] — node poses, path loss, per-link budget constants;
//! * [`quad`] — adaptive Gauss–Kronrod quadrature used for the interference
//!   integrals that have no closed form;
//! * [`laplace`] — Laplace transforms of the aggregate interference seen at an
//!   arbitrary point of the plane (closed forms for `alpha = 2`, numeric
//!   otherwise) and the cross-correlation terms coupling two receivers;
//! * [`outage`] — the Direct / SC / MRC outage evaluators for the two
//!   interferer mobility models (independent or common interferer sets across
//!   the two transmission slots) and the throughput map.
//!
//! Everything here is pure arithmetic over immutable values; the crate is
//! `no_std` (with `alloc`) and safe to drive from any number of threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod geometry;
pub mod laplace;
pub mod outage;
pub mod quad;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
