//! Arithmetic in F_p and F_{p^2} = F_p(t), and dense polynomials over F_{p^2}.

mod fp2;
mod poly;

pub use fp2::{is_prime_u64, Fp2, PrimeCtx};
pub use poly::Poly;
