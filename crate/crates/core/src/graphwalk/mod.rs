//! Walks in the superspecial (2,2)-isogeny graph.
//!
//! - [`WalkChain`] and [`walk_from`]: deterministic walks driven by chained
//!   SHA-1 digests, one step per nonzero hex digit.
//! - [`hunt_from`] / [`hunt_product`]: parallel search for a product vertex.
//! - [`census`]: exhaustive enumeration at small p, with automorphism
//!   counts and the exact mass.
//! - [`mixing_stats`], [`find_cycles`]: empirical graph statistics.
//! - Closed-form counts: [`count_s1`], [`lagrangian_count`],
//!   [`mass_formula`], [`table_exponents`].

mod census;
mod cycles;
mod formulas;
mod hunt;
mod walk;

pub use census::{census, mixing_bound, mixing_stats, CensusResult, MixingReport, CENSUS_MAX_P};
pub use cycles::{find_cycles, Cycle};
pub use formulas::{count_s1, lagrangian_count, mass_formula, table_exponents, Exponents};
pub use hunt::{hunt_from, hunt_product, replay_psi, HuntConfig, HuntReport, PsiStep};
pub use walk::{
    base_curve, sha1_hex, start_from_seed, walk_from, OnProduct, TakenStep, WalkChain, WalkMode, WalkRecord,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeCtx;
    use crate::genus1::{supersingular_closure, JInvariant};
    use crate::genus2::{is_superspecial, Vertex};

    fn run(p: u64) -> CensusResult {
        let c = PrimeCtx::new(p).unwrap();
        let j = JInvariant::j1728(&c);
        census(&Vertex::product(j, j)).unwrap()
    }

    #[test]
    fn census_at_11() {
        let r = run(11);
        assert!(r.is_closed_and_regular());
        assert_eq!(r.product_count(), 3);
        assert_eq!(r.mass, mass_formula(2, 11).unwrap());
        assert!(r.symmetry_violations().is_empty());
        let ids: Vec<_> = r.vertices.keys().collect();
        for v in r.vertices.values() {
            assert!(v.is_superspecial().unwrap());
            if let Vertex::Jacobian(m) = v {
                assert!(is_superspecial(m).unwrap());
            }
        }
        assert_eq!(ids.len(), r.len());
    }

    #[test]
    fn census_products_match_s1() {
        for p in [19, 23] {
            let r = run(p);
            let s1 = supersingular_closure(JInvariant::j1728(&PrimeCtx::new(p).unwrap()))
                .unwrap()
                .len();
            assert_eq!(s1 as u64, count_s1(p));
            assert_eq!(r.product_count(), s1 * (s1 + 1) / 2);
            assert_eq!(r.mass, mass_formula(2, p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn census_refuses_large_primes() {
        let c = PrimeCtx::new(127).unwrap();
        let j = JInvariant::j1728(&c);
        assert!(census(&Vertex::product(j, j)).is_err());
    }

    #[test]
    fn mixing_basics() {
        let r = run(11);
        let start = r.vertices.keys().next().unwrap().clone();
        let m0 = mixing_stats(&r, &start, 0, 100, 1).unwrap();
        let n = r.len() as f64;
        assert!((m0.tv_uniform - (1.0 - 1.0 / n)).abs() < 1e-12);
        assert!(mixing_bound(40) <= mixing_bound(20));
        let m = mixing_stats(&r, &start, 20, 2000, 1).unwrap();
        assert!(m.tv_stationary < m0.tv_stationary);
    }
}
