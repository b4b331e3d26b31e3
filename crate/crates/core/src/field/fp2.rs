use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_p together with the non-residue `d` that fixes the
/// model F_{p^2} = F_p(t), t^2 = d.
///
/// `d = -1` whenever p = 3 (mod 4); otherwise the smallest positive
/// non-residue. Every printed element depends on this choice, so it is part
/// of the certificate header.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeCtx {
    p: u64,
    d: u64,
}

const MAX_P: u64 = 1 << 62;

impl PrimeCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 5 || p >= MAX_P || !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        let d = if p % 4 == 3 {
            p - 1
        } else {
            (2..p)
                .find(|&c| pow_mod(c, (p - 1) / 2, p) == p - 1)
                .expect("odd prime has a non-residue")
        };
        Ok(PrimeCtx { p, d })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The non-residue as a residue in [0, p).
    #[inline]
    pub fn d(&self) -> u64 {
        self.d
    }

    /// The non-residue as a signed integer in (-p/2, p/2]: -1 for p = 3 mod 4.
    pub fn d_signed(&self) -> i64 {
        if self.d > self.p / 2 {
            self.d as i64 - self.p as i64
        } else {
            self.d as i64
        }
    }

    /// p^2 as a u128, the order of F_{p^2}.
    pub fn q(&self) -> u128 {
        (self.p as u128) * (self.p as u128)
    }

    /// Number of hex digits used for each coordinate in the canonical encoding.
    pub fn hex_width(&self) -> usize {
        format!("{:x}", self.p).len()
    }

    #[inline]
    pub(crate) fn add_p(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_p(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul_p(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub(crate) fn pow_p(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub(crate) fn inv_p(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow_p(a, self.p - 2))
        }
    }

    /// Reduce a signed integer into [0, p).
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn is_square_p(&self, a: u64) -> bool {
        a == 0 || self.pow_p(a, (self.p - 1) / 2) == 1
    }

    /// Tonelli-Shanks square root in F_p.
    pub fn sqrt_p(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square_p(a) {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow_p(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&c| !self.is_square_p(c))
            .expect("non-residue exists");
        let mut m = s;
        let mut c = self.pow_p(z, q);
        let mut t = self.pow_p(a, q);
        let mut r = self.pow_p(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul_p(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul_p(b, b);
            }
            m = i;
            c = self.mul_p(b, b);
            t = self.mul_p(t, c);
            r = self.mul_p(r, b);
        }
        Some(r)
    }

    pub fn zero(&self) -> Fp2 {
        Fp2 { c0: 0, c1: 0, ctx: *self }
    }

    pub fn one(&self) -> Fp2 {
        Fp2 { c0: 1, c1: 0, ctx: *self }
    }

    /// The generator t of F_{p^2} over F_p.
    pub fn t(&self) -> Fp2 {
        Fp2 { c0: 0, c1: 1, ctx: *self }
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Fp2 {
        Fp2 {
            c0: c0 % self.p,
            c1: c1 % self.p,
            ctx: *self,
        }
    }

    pub fn from_i64(&self, n: i64) -> Fp2 {
        Fp2 {
            c0: self.reduce_i64(n),
            c1: 0,
            ctx: *self,
        }
    }

    pub fn from_u64(&self, n: u64) -> Fp2 {
        self.elem(n, 0)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp2 {
        self.elem(rng.gen_range(0..self.p), rng.gen_range(0..self.p))
    }

    /// Every element of F_{p^2}, in canonical order. Only sensible for small p.
    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        (0..self.p).flat_map(move |c0| (0..self.p).map(move |c1| self.elem(c0, c1)))
    }

    /// Parse the canonical "c0+c1*t" hex encoding.
    pub fn decode(&self, s: &str) -> Result<Fp2> {
        let bad = || Error::Decode(s.to_string());
        let (a, rest) = s.split_once('+').ok_or_else(bad)?;
        let b = rest.strip_suffix("*t").ok_or_else(bad)?;
        let w = self.hex_width();
        if a.len() != w || b.len() != w {
            return Err(bad());
        }
        let lower = |x: &str| x.chars().all(|c| c.is_ascii_digit() || ('a'..='f').contains(&c));
        if !lower(a) || !lower(b) {
            return Err(bad());
        }
        let c0 = u64::from_str_radix(a, 16).map_err(|_| bad())?;
        let c1 = u64::from_str_radix(b, 16).map_err(|_| bad())?;
        if c0 >= self.p || c1 >= self.p {
            return Err(bad());
        }
        Ok(self.elem(c0, c1))
    }

    /// A fixed non-square of F_{p^2}: the first element in canonical order
    /// whose norm is a non-residue in F_p.
    pub fn fp2_nonsquare(&self) -> Fp2 {
        for c1 in 1..self.p {
            for c0 in 0..self.p {
                let x = self.elem(c0, c1);
                if !self.is_square_p(x.norm()) {
                    return x;
                }
            }
        }
        unreachable!("F_p^2 has non-squares")
    }
}

/// An element c0 + c1*t of F_{p^2}.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    c0: u64,
    c1: u64,
    ctx: PrimeCtx,
}

impl Fp2 {
    #[inline]
    pub fn ctx(&self) -> PrimeCtx {
        self.ctx
    }

    #[inline]
    pub fn c0(&self) -> u64 {
        self.c0
    }

    #[inline]
    pub fn c1(&self) -> u64 {
        self.c1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.c0 == 1 && self.c1 == 0
    }

    pub fn in_base_field(&self) -> bool {
        self.c1 == 0
    }

    pub fn square(&self) -> Fp2 {
        *self * *self
    }

    pub fn double(&self) -> Fp2 {
        *self + *self
    }

    /// N(x) = c0^2 - d c1^2 in F_p.
    pub fn norm(&self) -> u64 {
        let c = &self.ctx;
        c.sub_p(c.mul_p(self.c0, self.c0), c.mul_p(c.d, c.mul_p(self.c1, self.c1)))
    }

    /// The p-power Frobenius (conjugation t -> -t).
    pub fn conjugate(&self) -> Fp2 {
        Fp2 {
            c0: self.c0,
            c1: self.ctx.sub_p(0, self.c1),
            ctx: self.ctx,
        }
    }

    pub fn inv(&self) -> Result<Fp2> {
        let c = &self.ctx;
        let n_inv = c.inv_p(self.norm()).ok_or(Error::DivisionByZero)?;
        Ok(Fp2 {
            c0: c.mul_p(self.c0, n_inv),
            c1: c.mul_p(c.sub_p(0, self.c1), n_inv),
            ctx: self.ctx,
        })
    }

    pub fn checked_div(&self, rhs: Fp2) -> Result<Fp2> {
        Ok(*self * rhs.inv()?)
    }

    pub fn pow(&self, mut e: u128) -> Fp2 {
        let mut base = *self;
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn pow_i64(&self, e: i64) -> Result<Fp2> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn is_square(&self) -> bool {
        self.ctx.is_square_p(self.norm())
    }

    /// A square root, if one exists; the returned root is the smaller of
    /// {r, -r} in canonical order.
    pub fn sqrt(&self) -> Option<Fp2> {
        let c = self.ctx;
        if self.is_zero() {
            return Some(*self);
        }
        let root = if self.c1 == 0 {
            match c.sqrt_p(self.c0) {
                Some(r) => c.elem(r, 0),
                None => {
                    // a = d * s^2, so sqrt(a) = s * t
                    let s2 = c.mul_p(self.c0, c.inv_p(c.d)?);
                    c.elem(0, c.sqrt_p(s2)?)
                }
            }
        } else {
            let n = c.sqrt_p(self.norm())?;
            let inv2 = c.inv_p(2)?;
            let mut half = c.mul_p(c.add_p(self.c0, n), inv2);
            if !c.is_square_p(half) {
                half = c.mul_p(c.sub_p(self.c0, n), inv2);
            }
            let x0 = c.sqrt_p(half)?;
            let x1 = c.mul_p(self.c1, c.inv_p(c.mul_p(2, x0))?);
            c.elem(x0, x1)
        };
        debug_assert_eq!(root.square(), *self);
        let neg = -root;
        Some(if neg < root { neg } else { root })
    }

    /// Canonical encoding "c0+c1*t", lowercase hex, each coordinate padded to
    /// the hex width of p.
    pub fn encode(&self) -> String {
        let w = self.ctx.hex_width();
        format!("{:0w$x}+{:0w$x}*t", self.c0, self.c1, w = w)
    }
}

impl PartialEq for Fp2 {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!(self.ctx, other.ctx);
        self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl Eq for Fp2 {}

impl Hash for Fp2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c0.hash(state);
        self.c1.hash(state);
    }
}

impl Ord for Fp2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.c0, self.c1).cmp(&(other.c0, other.c1))
    }
}

impl PartialOrd for Fp2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    #[inline]
    fn add(self, rhs: Fp2) -> Fp2 {
        let c = &self.ctx;
        Fp2 {
            c0: c.add_p(self.c0, rhs.c0),
            c1: c.add_p(self.c1, rhs.c1),
            ctx: self.ctx,
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    #[inline]
    fn sub(self, rhs: Fp2) -> Fp2 {
        let c = &self.ctx;
        Fp2 {
            c0: c.sub_p(self.c0, rhs.c0),
            c1: c.sub_p(self.c1, rhs.c1),
            ctx: self.ctx,
        }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    #[inline]
    fn neg(self) -> Fp2 {
        let c = &self.ctx;
        Fp2 {
            c0: c.sub_p(0, self.c0),
            c1: c.sub_p(0, self.c1),
            ctx: self.ctx,
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    #[inline]
    fn mul(self, rhs: Fp2) -> Fp2 {
        let c = &self.ctx;
        let p = c.p as u128;
        let a0b0 = self.c0 as u128 * rhs.c0 as u128 % p;
        let a1b1 = self.c1 as u128 * rhs.c1 as u128 % p;
        let cross = (self.c0 as u128 * rhs.c1 as u128 + self.c1 as u128 * rhs.c0 as u128) % p;
        let c0 = (a0b0 + a1b1 * c.d as u128 % p) % p;
        Fp2 {
            c0: c0 as u64,
            c1: cross as u64,
            ctx: self.ctx,
        }
    }
}

/// Panics on a zero divisor; use [`Fp2::checked_div`] when the divisor may vanish.
impl Div for Fp2 {
    type Output = Fp2;
    fn div(self, rhs: Fp2) -> Fp2 {
        self.checked_div(rhs).expect("division by zero in F_p^2")
    }
}

impl AddAssign for Fp2 {
    fn add_assign(&mut self, rhs: Fp2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp2 {
    fn sub_assign(&mut self, rhs: Fp2) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp2 {
    fn mul_assign(&mut self, rhs: Fp2) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Fp2 {
    fn sum<I: Iterator<Item = Fp2>>(mut iter: I) -> Fp2 {
        let first = iter.next().expect("sum of an empty iterator has no context");
        iter.fold(first, |a, b| a + b)
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = (a % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    a = acc as u64;
    a
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f11() -> PrimeCtx {
        PrimeCtx::new(11).unwrap()
    }

    #[test]
    fn rejects_bad_primes() {
        for p in [0, 1, 2, 3, 4, 5, 9, 15, 1 << 62] {
            assert!(PrimeCtx::new(p).is_err(), "p = {p}");
        }
        assert!(PrimeCtx::new(7).is_ok());
        assert!(PrimeCtx::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn non_residue_choice() {
        assert_eq!(f11().d_signed(), -1);
        assert_eq!(PrimeCtx::new(127).unwrap().d_signed(), -1);
        // 13: squares are {1,3,4,9,10,12}; smallest non-residue is 2
        assert_eq!(PrimeCtx::new(13).unwrap().d(), 2);
        assert_eq!(PrimeCtx::new(17).unwrap().d(), 3);
    }

    #[test]
    fn small_identities() {
        let c = f11();
        assert_eq!(c.one().inv().unwrap(), c.one());
        assert_eq!(c.t() * c.t(), c.from_i64(10));
        let x = c.elem(3, 2);
        let y = c.elem(3, 11 - 2);
        assert_eq!(x * y, c.from_u64(2));
        assert_eq!(c.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(c.one().checked_div(c.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt_examples() {
        let c = f11();
        assert_eq!(c.zero().sqrt(), Some(c.zero()));
        assert_eq!(c.from_u64(3).sqrt(), Some(c.from_u64(5)));
        let r = c.from_i64(-1).sqrt().unwrap();
        assert!(r == c.t() || r == -c.t());
        assert_eq!(r, c.t());
    }

    #[test]
    fn every_element_of_f11_squared_has_a_root() {
        let c = f11();
        let mut squares = 0;
        for x in c.elements() {
            let s = x.square();
            let r = s.sqrt().unwrap();
            assert_eq!(r.square(), s);
            assert!(r <= -r);
            if x.sqrt().is_some() {
                squares += 1;
            }
        }
        // 0 plus (p^2 - 1)/2 non-zero squares
        assert_eq!(squares, 1 + (121 - 1) / 2);
    }

    #[test]
    fn sqrt_when_p_is_1_mod_4() {
        let c = PrimeCtx::new(13).unwrap();
        for x in c.elements() {
            let s = x.square();
            assert_eq!(s.sqrt().unwrap().square(), s);
        }
        assert!(c.fp2_nonsquare().sqrt().is_none());
    }

    #[test]
    fn encoding() {
        let c = PrimeCtx::new(127).unwrap();
        let x = c.elem(63, 41);
        assert_eq!(x.encode(), "3f+29*t");
        assert_eq!(c.decode("3f+29*t").unwrap(), x);
        assert!(c.decode("3f+29").is_err());
        assert!(c.decode("3F+29*t").is_err());
        assert!(c.decode("7f+00*t").is_err());
        assert!(c.decode("f+29*t").is_err());
        let c = PrimeCtx::new(8191).unwrap();
        assert_eq!(c.elem(5, 0).encode(), "0005+0000*t");
    }

    #[test]
    fn miller_rabin() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(2147483647));
        assert!(is_prime_u64(17915903));
        assert!(!is_prime_u64(3215031751));
    }
}
