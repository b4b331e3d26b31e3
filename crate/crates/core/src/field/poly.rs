use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fp2::{Fp2, PrimeCtx};

/// Dense univariate polynomial over F_{p^2}, coefficients in ascending order.
///
/// The coefficient vector is kept trimmed: the last entry is non-zero unless
/// the polynomial is zero, in which case the vector is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ctx: PrimeCtx,
    coeffs: Vec<Fp2>,
}

impl Poly {
    pub fn new(ctx: PrimeCtx, coeffs: Vec<Fp2>) -> Poly {
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    pub fn zero(ctx: PrimeCtx) -> Poly {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: PrimeCtx) -> Poly {
        Poly::constant(ctx.one())
    }

    pub fn constant(c: Fp2) -> Poly {
        Poly::new(c.ctx(), vec![c])
    }

    /// x
    pub fn x(ctx: PrimeCtx) -> Poly {
        Poly::new(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// x - r
    pub fn linear_root(r: Fp2) -> Poly {
        let ctx = r.ctx();
        Poly::new(ctx, vec![-r, ctx.one()])
    }

    /// Build from small signed integer coefficients, ascending.
    pub fn from_i64s(ctx: PrimeCtx, cs: &[i64]) -> Poly {
        Poly::new(ctx, cs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(ctx: PrimeCtx, roots: &[Fp2]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(ctx), |acc, &r| &acc * &Poly::linear_root(r))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> PrimeCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[Fp2] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fp2 {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Fp2> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: Fp2) -> Fp2 {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, c: Fp2) -> Poly {
        Poly::new(self.ctx, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(lc.inv().expect("leading coefficient is non-zero")),
        }
    }

    pub fn derivative(&self) -> Poly {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * self.ctx.from_u64(i as u64))
            .collect();
        Poly::new(self.ctx, cs)
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.ctx), self.clone());
        }
        let mut quot = vec![self.ctx.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lc_inv;
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= c * dc;
            }
        }
        rem.truncate(dd);
        (Poly::new(self.ctx, quot), Poly::new(self.ctx, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic gcd; `gcd(0, 0)` is zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.ctx).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// All roots in F_{p^2} with multiplicity, sorted canonically.
    ///
    /// Distinct roots are isolated with gcd(f, x^{p^2} - x) and split by
    /// random equal-degree splitting; the generator is seeded from `seed`,
    /// and the sorted output does not depend on it.
    pub fn roots_seeded(&self, seed: u64) -> Vec<Fp2> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let f = self.monic();
        let distinct = match f.degree().unwrap() {
            0 => Vec::new(),
            1 => vec![-f.coeff(0)],
            2 => quadratic_roots(f.coeff(2), f.coeff(1), f.coeff(0)),
            _ => {
                let x = Poly::x(self.ctx);
                let xq = x.pow_mod(self.ctx.q(), &f);
                let g = f.gcd(&(&xq - &x));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::new();
                split_linear(&g, &mut rng, &mut out);
                out
            }
        };
        let mut roots = Vec::new();
        for r in distinct {
            let lin = Poly::linear_root(r);
            let mut h = f.clone();
            loop {
                let (q, rem) = h.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                roots.push(r);
                h = q;
            }
        }
        roots.sort();
        roots
    }

    pub fn roots(&self) -> Vec<Fp2> {
        self.roots_seeded(0x005e_ed0f_2007)
    }

    /// Distinct roots, sorted.
    pub fn distinct_roots(&self) -> Vec<Fp2> {
        let mut r = self.roots();
        r.dedup();
        r
    }
}

/// Roots of a x^2 + b x + c with a != 0, sorted, with multiplicity.
fn quadratic_roots(a: Fp2, b: Fp2, c: Fp2) -> Vec<Fp2> {
    let ctx = a.ctx();
    let disc = b.square() - ctx.from_u64(4) * a * c;
    match disc.sqrt() {
        None => Vec::new(),
        Some(s) => {
            let inv2a = (a.double()).inv().unwrap();
            let mut v = vec![(-b + s) * inv2a, (-b - s) * inv2a];
            v.sort();
            v
        }
    }
}

/// Split a monic product of distinct linear factors into its roots.
fn split_linear(g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Fp2>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeff(0)),
        Some(2) => out.extend(quadratic_roots(g.coeff(2), g.coeff(1), g.coeff(0))),
        Some(n) => {
            let ctx = g.ctx();
            let e = (ctx.q() - 1) / 2;
            loop {
                let a = ctx.random(rng);
                let shifted = Poly::new(ctx, vec![a, ctx.one()]);
                let h = &shifted.pow_mod(e, g) - &Poly::one(ctx);
                let d = g.gcd(&h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < n {
                    let (q, _) = g.div_rem(&d);
                    split_linear(&d, rng, out);
                    split_linear(&q.monic(), rng, out);
                    return;
                }
            }
        }
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.ctx, (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.ctx, (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.ctx, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    #[test]
    fn root_examples() {
        let c = ctx(11);
        let f = Poly::from_i64s(c, &[1, 0, 1]);
        assert_eq!(f.roots(), vec![c.t(), -c.t()]);
        let f = Poly::from_i64s(c, &[0, -1, 0, 1]);
        assert_eq!(f.roots(), vec![c.zero(), c.one(), c.from_i64(-1)]);
    }

    #[test]
    fn roots_with_multiplicity() {
        let c = ctx(19);
        let r = [c.elem(3, 4), c.elem(3, 4), c.elem(0, 7), c.from_u64(5)];
        let f = Poly::from_roots(c, &r).scale(c.elem(2, 9));
        let mut want = r.to_vec();
        want.sort();
        assert_eq!(f.roots(), want);
    }

    #[test]
    fn gcd_examples() {
        let c = ctx(11);
        let f = Poly::from_i64s(c, &[-1, 0, 1]);
        let g = Poly::from_i64s(c, &[1, -2, 1]);
        assert_eq!(f.gcd(&g), Poly::from_i64s(c, &[-1, 1]));
        let f3 = Poly::from_i64s(c, &[4, 0, 2]);
        assert_eq!(f3.gcd(&Poly::zero(c)), f3.monic());
        assert!(!Poly::from_i64s(c, &[0, 0, 1]).is_squarefree());
        assert!(Poly::from_i64s(c, &[-1, 0, 1]).is_squarefree());
    }

    #[test]
    fn div_rem_reconstructs() {
        let c = ctx(23);
        let f = Poly::from_i64s(c, &[3, 1, 4, 1, 5, 9, 2, 6]);
        let g = Poly::from_i64s(c, &[2, 7, 1, 8]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(&(&q * &g) + &r, f);
        assert!(r.degree().unwrap() < 3);
    }
}
