//! Supersingular elliptic curves over F_{p^2} and their 2-isogeny graph.
//!
//! Vertices are j-invariants. Neighbours are computed from the three
//! rational 2-torsion points of the model returned by [`curve_from_j`] and
//! Vélu's formulas for a 2-isogeny, so every edge comes with a kernel
//! witness (the x-coordinate of the kernel point on that model).

mod cgl;
mod path;

use std::collections::{BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fp2, Poly, PrimeCtx};

pub use cgl::{cgl_hash, CglConstants};
pub use path::{lowmem_path, mitm_path, EllipticPath, Parity};

/// A j-invariant, i.e. an isomorphism class of elliptic curves over the
/// algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JInvariant(pub Fp2);

impl JInvariant {
    pub fn ctx(&self) -> PrimeCtx {
        self.0.ctx()
    }

    pub fn value(&self) -> Fp2 {
        self.0
    }

    pub fn encode(&self) -> String {
        self.0.encode()
    }

    pub fn decode(ctx: &PrimeCtx, s: &str) -> Result<JInvariant> {
        ctx.decode(s).map(JInvariant)
    }

    pub fn j1728(ctx: &PrimeCtx) -> JInvariant {
        JInvariant(ctx.from_u64(1728))
    }

    pub fn j0(ctx: &PrimeCtx) -> JInvariant {
        JInvariant(ctx.zero())
    }

    /// |Aut(E)| for p > 3: 4 at j = 1728, 6 at j = 0, else 2.
    pub fn automorphism_count(&self) -> u64 {
        let ctx = self.ctx();
        if self.0.is_zero() {
            6
        } else if self.0 == ctx.from_u64(1728) {
            4
        } else {
            2
        }
    }
}

impl std::fmt::Display for JInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Short Weierstrass model y^2 = x^3 + a x + b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EllipticModel {
    pub a: Fp2,
    pub b: Fp2,
}

/// Deterministic model with the given j-invariant.
pub fn curve_from_j(j: JInvariant) -> EllipticModel {
    let ctx = j.ctx();
    let j = j.0;
    let c1728 = ctx.from_u64(1728);
    if j.is_zero() {
        EllipticModel { a: ctx.zero(), b: ctx.one() }
    } else if j == c1728 {
        EllipticModel { a: ctx.one(), b: ctx.zero() }
    } else {
        let k = j * (c1728 - j);
        EllipticModel {
            a: ctx.from_u64(3) * k,
            b: ctx.from_u64(2) * k * (c1728 - j),
        }
    }
}

/// j-invariant of y^2 = c3 x^3 + c2 x^2 + c1 x + c0 with c3 != 0.
pub fn j_of_cubic(c3: Fp2, c2: Fp2, c1: Fp2, c0: Fp2) -> Result<JInvariant> {
    let ctx = c3.ctx();
    let inv = c3.inv()?;
    let (a2, a1, a0) = (c2 * inv, c1 * inv, c0 * inv);
    let third = ctx.from_u64(3).inv()?;
    let a = a1 - a2.square() * third;
    let b = a0 - a1 * a2 * third + ctx.from_u64(2) * a2.square() * a2 * ctx.from_u64(27).inv()?;
    EllipticModel { a, b }.j_invariant()
}

/// j-invariant of the curve whose 2-torsion x-coordinates are the three roots.
pub fn j_from_roots(r: [Fp2; 3]) -> Result<JInvariant> {
    let ctx = r[0].ctx();
    let one = ctx.one();
    let s1 = r[0] + r[1] + r[2];
    let s2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
    let s3 = r[0] * r[1] * r[2];
    j_of_cubic(one, -s1, s2, -s3)
}

impl EllipticModel {
    pub fn ctx(&self) -> PrimeCtx {
        self.a.ctx()
    }

    pub fn discriminant(&self) -> Fp2 {
        let ctx = self.ctx();
        ctx.from_u64(4) * self.a.square() * self.a + ctx.from_u64(27) * self.b.square()
    }

    pub fn j_invariant(&self) -> Result<JInvariant> {
        let ctx = self.ctx();
        let a3 = ctx.from_u64(4) * self.a.square() * self.a;
        let disc = self.discriminant();
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(JInvariant(ctx.from_u64(1728) * a3 / disc))
    }

    /// x^3 + a x + b
    pub fn two_division_poly(&self) -> Poly {
        let ctx = self.ctx();
        Poly::new(ctx, vec![self.b, self.a, ctx.zero(), ctx.one()])
    }

    /// Rational roots of x^3 + a x + b, sorted canonically.
    pub fn two_torsion_roots(&self) -> Vec<Fp2> {
        self.two_division_poly().distinct_roots()
    }

    /// Quadratic twist y^2 = x^3 + a u^2 x + b u^3.
    pub fn twist(&self, u: Fp2) -> EllipticModel {
        EllipticModel {
            a: self.a * u.square(),
            b: self.b * u.square() * u,
        }
    }

    /// Codomain of the 2-isogeny with kernel <(x0, 0)> (Vélu).
    pub fn two_isogeny(&self, x0: Fp2) -> Result<EllipticModel> {
        if !self.two_division_poly().eval(x0).is_zero() {
            return Err(Error::NotAKernelPoint(x0.encode()));
        }
        let ctx = self.ctx();
        let t = ctx.from_u64(3) * x0.square() + self.a;
        let w = x0 * t;
        Ok(EllipticModel {
            a: self.a - ctx.from_u64(5) * t,
            b: self.b - ctx.from_u64(7) * w,
        })
    }

    /// The three 2-isogenous j-invariants with their kernel witnesses,
    /// sorted by (j, kernel x).
    pub fn two_isogenous(&self) -> Result<Vec<(JInvariant, Fp2)>> {
        let roots = self.two_torsion_roots();
        if roots.len() != 3 {
            return Err(Error::NotSupersingularCompatible(format!(
                "only {} rational 2-torsion points",
                roots.len()
            )));
        }
        let mut out = roots
            .into_iter()
            .map(|x| Ok((self.two_isogeny(x)?.j_invariant()?, x)))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    fn rhs(&self, x: Fp2) -> Fp2 {
        (x.square() + self.a) * x + self.b
    }

    /// Number of points over F_{p^2} by exhaustive enumeration.
    pub fn count_points_exhaustive(&self) -> u128 {
        let ctx = self.ctx();
        let mut n: u128 = 1;
        for x in ctx.elements() {
            let r = self.rhs(x);
            n += if r.is_zero() {
                1
            } else if r.is_square() {
                2
            } else {
                0
            };
        }
        n
    }

    /// Supersingularity test.
    ///
    /// For j outside {0, 1728} every model over F_{p^2} of a supersingular
    /// curve has Frobenius +-p, hence group exponent dividing p - 1 or p + 1.
    /// The test samples points from a generator seeded by the model and asks
    /// that one of [p + 1] or [p - 1] kills all of them; an ordinary curve
    /// passes a single sample with probability at most 1/2, so 66 samples give
    /// error below 2^-64. For p < 200 the answer is cross-checked against an
    /// exhaustive point count.
    pub fn is_supersingular(&self) -> bool {
        let Ok(j) = self.j_invariant() else {
            return false;
        };
        let ctx = self.ctx();
        let p = ctx.p();
        if j.0.is_zero() {
            return p % 3 == 2;
        }
        if j.0 == ctx.from_u64(1728) {
            return p % 4 == 3;
        }
        let verdict = self.exponent_test(66);
        if p < 200 {
            let n = self.count_points_exhaustive();
            let exhaustive = (n + p as u128 - 1).is_multiple_of(p as u128);
            assert_eq!(verdict, exhaustive, "supersingularity tests disagree");
        }
        verdict
    }

    fn exponent_test(&self, samples: usize) -> bool {
        let ctx = self.ctx();
        let p = ctx.p() as u128;
        let seed = self.a.c0() ^ self.a.c1().rotate_left(17) ^ self.b.c0().rotate_left(31) ^ self.b.c1().rotate_left(47);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut plus, mut minus) = (true, true);
        let mut taken = 0;
        while taken < samples && (plus || minus) {
            let x = ctx.random(&mut rng);
            let Some(y) = self.rhs(x).sqrt() else { continue };
            let pt = Some((x, y));
            taken += 1;
            if plus && self.scalar_mul(pt, p + 1).is_some() {
                plus = false;
            }
            if minus && self.scalar_mul(pt, p - 1).is_some() {
                minus = false;
            }
        }
        plus || minus
    }

    fn add_points(&self, p1: Option<(Fp2, Fp2)>, p2: Option<(Fp2, Fp2)>) -> Option<(Fp2, Fp2)> {
        let (x1, y1) = match p1 {
            None => return p2,
            Some(v) => v,
        };
        let (x2, y2) = match p2 {
            None => return p1,
            Some(v) => v,
        };
        let ctx = self.ctx();
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return None;
            }
            (ctx.from_u64(3) * x1.square() + self.a) / y1.double()
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = lambda.square() - x1 - x2;
        let y3 = lambda * (x1 - x3) - y1;
        Some((x3, y3))
    }

    fn scalar_mul(&self, pt: Option<(Fp2, Fp2)>, mut n: u128) -> Option<(Fp2, Fp2)> {
        let mut acc = None;
        let mut base = pt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_points(acc, base);
            }
            base = self.add_points(base, base);
            n >>= 1;
        }
        acc
    }
}

/// The 2-isogenous j-invariants of `j` (with multiplicity) and their kernel
/// witnesses on `curve_from_j(j)`, sorted.
pub fn neighbors_j(j: JInvariant) -> Result<Vec<(JInvariant, Fp2)>> {
    curve_from_j(j).two_isogenous()
}

/// Smallest kernel witness on `curve_from_j(from)` whose codomain has j = `to`.
pub fn kernel_between(from: JInvariant, to: JInvariant) -> Result<Option<Fp2>> {
    Ok(neighbors_j(from)?
        .into_iter()
        .find(|(j, _)| *j == to)
        .map(|(_, x)| x))
}

/// A supersingular j-invariant to start closures and walks from:
/// 1728 when p = 3 (mod 4), else 0 when p = 2 (mod 3).
pub fn default_supersingular_j(ctx: &PrimeCtx) -> Result<JInvariant> {
    if ctx.p() % 4 == 3 {
        Ok(JInvariant::j1728(ctx))
    } else if ctx.p() % 3 == 2 {
        Ok(JInvariant::j0(ctx))
    } else {
        Err(Error::NoDefaultStart(ctx.p()))
    }
}

/// All supersingular j-invariants, as the connected component of `start`
/// in the 2-isogeny graph.
pub fn supersingular_closure(start: JInvariant) -> Result<Vec<JInvariant>> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(j) = queue.pop_front() {
        for (n, _) in neighbors_j(j)? {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen.into_iter().collect())
}
