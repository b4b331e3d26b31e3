use super::Root;
use crate::field::{Fp2, PrimeCtx};

/// x -> (a x + b) / (c x + d) acting on the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Fp2,
    pub b: Fp2,
    pub c: Fp2,
    pub d: Fp2,
}

impl Mobius {
    pub fn new(a: Fp2, b: Fp2, c: Fp2, d: Fp2) -> Option<Mobius> {
        let m = Mobius { a, b, c, d };
        (!m.det().is_zero()).then_some(m)
    }

    pub fn identity(ctx: PrimeCtx) -> Mobius {
        Mobius {
            a: ctx.one(),
            b: ctx.zero(),
            c: ctx.zero(),
            d: ctx.one(),
        }
    }

    pub fn det(&self) -> Fp2 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, r: Root) -> Root {
        let (x, z) = r.projective(self.a.ctx());
        Root::from_projective(self.a * x + self.b * z, self.c * x + self.d * z)
    }

    /// Projective inverse (adjugate).
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// self after other.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// The map sending 0, infinity, 1 to p, q, r (pairwise distinct).
    fn from_standard(ctx: PrimeCtx, p: Root, q: Root, r: Root) -> Option<Mobius> {
        let (px, pz) = p.projective(ctx);
        let (qx, qz) = q.projective(ctx);
        let (rx, rz) = r.projective(ctx);
        let det = qx * pz - px * qz;
        let inv = det.inv().ok()?;
        let alpha = (rx * pz - px * rz) * inv;
        let beta = (qx * rz - rx * qz) * inv;
        Mobius::new(alpha * qx, beta * px, alpha * qz, beta * pz)
    }

    /// The unique map sending src[i] to dst[i]; each triple must consist of
    /// distinct points.
    pub fn from_triples(src: [Root; 3], dst: [Root; 3]) -> Option<Mobius> {
        let ctx = [src, dst]
            .iter()
            .flatten()
            .find_map(Root::finite)
            .map(|x| x.ctx())?;
        let s = Mobius::from_standard(ctx, src[0], src[1], src[2])?;
        let t = Mobius::from_standard(ctx, dst[0], dst[1], dst[2])?;
        Some(t.compose(&s.inverse()))
    }
}
