use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of supersingular j-invariants over F_{p^2}: floor(p/12) + e_p
/// with e_p = 0, 2, 1 for p = 1, -1, other (mod 12).
pub fn count_s1(p: u64) -> u64 {
    let eps = match p % 12 {
        1 => 0,
        11 => 2,
        _ => 1,
    };
    p / 12 + eps
}

/// (i)_l = (l^i - 1)/(l - 1)
fn l_int(i: u32, l: u128) -> u128 {
    (0..i).map(|k| l.pow(k)).sum()
}

/// Gaussian binomial [n choose k]_l.
fn l_binomial(n: u32, k: u32, l: u128) -> u128 {
    let num: u128 = (n - k + 1..=n).map(|i| l_int(i, l)).product();
    let den: u128 = (1..=k).map(|i| l_int(i, l)).product();
    num / den
}

/// Number of Lagrangian subgroups of A[l] for a g-dimensional PPAV:
/// sum over d of [g choose d]_l * l^{(g-d+1)(g-d)/2}.
pub fn lagrangian_count(g: u32, l: u64) -> u128 {
    let l = l as u128;
    (0..=g)
        .map(|d| {
            let e = (g - d + 1) * (g - d) / 2;
            l_binomial(g, d, l) * l.pow(e)
        })
        .sum()
}

/// Mass sum over S_g of 1/#Aut, as prod_{i=1..g} (B_{2i}/(4i)) (1 + (-p)^i).
///
/// Supported for g in {1, 2}. For g = 1 the product is (1 - p)/24, which is
/// negative; the returned value is its absolute value (p - 1)/24, the mass
/// of the supersingular elliptic curves. For g = 2 the product is already
/// positive: (p - 1)(p^2 + 1)/5760.
pub fn mass_formula(g: u32, p: u64) -> Result<Ratio<i128>> {
    let bernoulli = [Ratio::new(1, 6), Ratio::new(-1, 30)];
    if g == 0 || g > 2 {
        return Err(Error::Unsupported(format!("mass formula for g = {g}")));
    }
    let p = p as i128;
    let mut acc = Ratio::from_integer(1);
    for i in 1..=g {
        let b = bernoulli[(i - 1) as usize];
        let factor = 1 + (-p).pow(i);
        acc *= b / Ratio::from_integer(4 * i as i128) * Ratio::from_integer(factor);
    }
    Ok(if acc < Ratio::from_integer(0) { -acc } else { acc })
}

/// Base-p logarithms of attack costs in dimension g.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exponents {
    pub g: u32,
    /// Product-finding attack, classical: g - 1 (absent for g = 1).
    pub alg1_classical: Option<f64>,
    /// Generic classical walk: g(g+1)/4.
    pub pollard: f64,
    /// Product-finding attack, quantum: (g - 1)/2 (absent for g = 1).
    pub alg1_quantum: Option<f64>,
    /// Generic quantum search: g(g+1)/8 for g > 1 and 1/4 for g = 1.
    pub grover_bjs: f64,
    /// Parallel collision search: 3g(g+1)/16.
    pub vow: f64,
    /// Quantum claw finding: g(g+1)/12.
    pub tani: f64,
}

/// Exponent row for dimension g. For g <= 6 the generic quantum column
/// uses the reference values 0.25, 0.75, 1.5, 2.5, 3.75, 4.25; the last
/// differs from g(g+1)/8 = 5.25.
pub fn table_exponents(g: u32) -> Exponents {
    let gf = g as f64;
    let n = gf * (gf + 1.0);
    const GROVER_TABLE: [f64; 6] = [0.25, 0.75, 1.5, 2.5, 3.75, 4.25];
    let grover_bjs = match g {
        1..=6 => GROVER_TABLE[(g - 1) as usize],
        _ => n / 8.0,
    };
    Exponents {
        g,
        alg1_classical: (g > 1).then_some(gf - 1.0),
        pollard: n / 4.0,
        alg1_quantum: (g > 1).then_some((gf - 1.0) / 2.0),
        grover_bjs,
        vow: 3.0 * n / 16.0,
        tani: n / 12.0,
    }
}
