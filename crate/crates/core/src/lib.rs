//! Superspecial isogeny graphs in dimensions one and two over F_{p^2}.
//!
//! The crate models the 2-isogeny graph of supersingular elliptic curves and
//! the (2,2)-isogeny graph of superspecial principally polarized abelian
//! surfaces, and implements the product-finding path attack: walk from both
//! endpoints into the locus of elliptic products, connect the elliptic
//! factors in the elliptic graph, and glue the two elliptic paths back into
//! a path between the original surfaces.
//!
//! Modules, bottom up:
//! - [`field`]: F_p, F_{p^2} and polynomials with root finding.
//! - [`genus1`]: elliptic curves, 2-isogenies, elliptic path finding, CGL hash.
//! - [`genus2`]: genus-2 curves, Richelot isogenies, gluing and splitting.
//! - [`graphwalk`]: walks, product hunts, census and counting formulas.
//! - [`attack`]: the end-to-end attack and path certificates.

pub mod attack;
pub mod error;
pub mod field;
pub mod genus1;
pub mod genus2;
pub mod graphwalk;

pub use error::{Error, Result};
pub use field::{Fp2, Poly, PrimeCtx};
