use super::{GenusTwoModel, Mobius, NodeId, Vertex};
use crate::error::{Error, Result};
use crate::field::Fp2;

/// Igusa-Clebsch invariants (I2, I4, I6, I10), of weights 2, 4, 6, 10.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IgusaClebsch {
    pub i2: Fp2,
    pub i4: Fp2,
    pub i6: Fp2,
    pub i10: Fp2,
}

/// Igusa-Clebsch invariants from the Weierstrass points.
///
/// With f = u0 * prod (x - a_i) and (ij) = a_i - a_j,
///
/// - I2  = u0^2  * sum over the 15 matchings of (12)^2 (34)^2 (56)^2,
/// - I4  = u0^4  * sum over the 10 splits into triples of
///   (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2,
/// - I6  = u0^6  * sum over the 60 splits with a bijection between the
///   triples of the I4 term times (14)^2 (25)^2 (36)^2,
/// - I10 = u0^10 * prod over i < j of (ij)^2.
///
/// A quintic has a Weierstrass point at infinity; its brackets are taken
/// projectively, (i inf) = 1, with u0 the leading coefficient of f. Only
/// even powers of brackets and of u0 occur, so signs do not matter.
pub fn igusa_clebsch(m: &GenusTwoModel) -> Result<IgusaClebsch> {
    let labels = m.labels()?;
    let ctx = m.ctx();
    let u0 = m.leading();
    let pts: Vec<(Fp2, Fp2)> = labels.iter().map(|r| r.projective(ctx)).collect();
    let mut b = [[ctx.zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let d = pts[i].0 * pts[j].1 - pts[j].0 * pts[i].1;
            b[i][j] = d.square();
        }
    }
    let mut i2 = ctx.zero();
    for (x, y, z) in matchings() {
        i2 += b[x[0]][x[1]] * b[y[0]][y[1]] * b[z[0]][z[1]];
    }
    let tri = |t: [usize; 3]| b[t[0]][t[1]] * b[t[1]][t[2]] * b[t[2]][t[0]];
    let mut i4 = ctx.zero();
    let mut i6 = ctx.zero();
    for (s, t) in triple_splits() {
        let base = tri(s) * tri(t);
        i4 += base;
        for perm in PERMS3 {
            i6 += base * b[s[0]][t[perm[0]]] * b[s[1]][t[perm[1]]] * b[s[2]][t[perm[2]]];
        }
    }
    let mut i10 = ctx.one();
    for i in 0..6 {
        for j in i + 1..6 {
            i10 *= b[i][j];
        }
    }
    let u2 = u0.square();
    let u4 = u2.square();
    let u6 = u4 * u2;
    let u10 = u6 * u4;
    let ic = IgusaClebsch {
        i2: i2 * u2,
        i4: i4 * u4,
        i6: i6 * u6,
        i10: i10 * u10,
    };
    if ic.i10.is_zero() {
        return Err(Error::SingularCurve);
    }
    Ok(ic)
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn matchings() -> Vec<([usize; 2], [usize; 2], [usize; 2])> {
    super::SplittingPartition::all()
        .iter()
        .map(|s| {
            let p = s.pairs().map(|q| [q[0] as usize, q[1] as usize]);
            (p[0], p[1], p[2])
        })
        .collect()
}

/// The 10 unordered splits of {0..5} into two triples, first triple
/// containing 0.
fn triple_splits() -> Vec<([usize; 3], [usize; 3])> {
    let mut out = Vec::with_capacity(10);
    for a in 1..6 {
        for b in a + 1..6 {
            let s = [0, a, b];
            let t: Vec<usize> = (0..6).filter(|i| !s.contains(i)).collect();
            out.push((s, [t[0], t[1], t[2]]));
        }
    }
    out
}

impl IgusaClebsch {
    /// Weight-zero normalisation, by the first nonzero of I2, I4, I6:
    ///
    /// - `A`: I4/I2^2, I6/I2^3, I10/I2^5
    /// - `B` (I2 = 0): I6^2/I4^3, I10^2/I4^5, I6 I10/I4^4
    /// - `C` (I2 = I4 = 0): 0, 0, I10^3/I6^5
    /// - `D` (I2 = I4 = I6 = 0): 0, 0, 0
    pub fn node_id(&self) -> NodeId {
        let ctx = self.i10.ctx();
        let zero = ctx.zero();
        if !self.i2.is_zero() {
            let inv = self.i2.inv().unwrap();
            let inv2 = inv.square();
            let inv3 = inv2 * inv;
            let inv5 = inv3 * inv2;
            NodeId::jacobian('A', [self.i4 * inv2, self.i6 * inv3, self.i10 * inv5])
        } else if !self.i4.is_zero() {
            let inv = self.i4.inv().unwrap();
            let inv3 = inv.square() * inv;
            let inv4 = inv3 * inv;
            let inv5 = inv4 * inv;
            NodeId::jacobian(
                'B',
                [
                    self.i6.square() * inv3,
                    self.i10.square() * inv5,
                    self.i6 * self.i10 * inv4,
                ],
            )
        } else if !self.i6.is_zero() {
            let inv5 = self.i6.inv().unwrap().pow(5);
            NodeId::jacobian('C', [zero, zero, self.i10.square() * self.i10 * inv5])
        } else {
            NodeId::jacobian('D', [zero, zero, zero])
        }
    }
}

/// Cartier-Manin (Hasse-Witt) matrix: entry (i, j) is the coefficient of
/// x^{i p - j} in f^{(p-1)/2}, for i, j in {1, 2}.
pub fn hasse_witt(m: &GenusTwoModel) -> Result<[[Fp2; 2]; 2]> {
    let p = m.ctx().p();
    if p > 1 << 16 {
        return Err(Error::PrimeTooLarge(p));
    }
    let h = m.f().pow((p - 1) / 2);
    let c = |i: u64, j: u64| h.coeff((i * p - j) as usize);
    Ok([[c(1, 1), c(1, 2)], [c(2, 1), c(2, 2)]])
}

pub fn is_superspecial(m: &GenusTwoModel) -> Result<bool> {
    Ok(hasse_witt(m)?.iter().flatten().all(Fp2::is_zero))
}

/// Order of the automorphism group of the principally polarized surface.
///
/// Jacobians: twice the number of Mobius transformations permuting the
/// Weierstrass points (the factor 2 is the hyperelliptic involution); the
/// candidates are the 120 maps sending the first three labels to an
/// ordered triple of distinct labels.
///
/// Products E1 x E2: |Aut E1| |Aut E2|, doubled when E1 = E2 for the
/// factor swap.
pub fn automorphism_count(id: &NodeId, witness: &Vertex) -> Result<u64> {
    let wid = witness.node_id()?;
    if &wid != id {
        return Err(Error::InconsistentWitness(format!("witness has id {wid}, expected {id}")));
    }
    match witness {
        Vertex::Product(a, b) => {
            let swap = if a == b { 2 } else { 1 };
            Ok(a.automorphism_count() * b.automorphism_count() * swap)
        }
        Vertex::Jacobian(m) => {
            let labels = m.labels()?;
            let mut count = 0;
            for x in 0..6 {
                for y in 0..6 {
                    for z in 0..6 {
                        if x == y || y == z || x == z {
                            continue;
                        }
                        let src = [labels[0], labels[1], labels[2]];
                        let dst = [labels[x], labels[y], labels[z]];
                        let Some(mob) = Mobius::from_triples(src, dst) else {
                            continue;
                        };
                        if labels.iter().all(|&r| labels.contains(&mob.apply(r))) {
                            count += 1;
                        }
                    }
                }
            }
            Ok(2 * count)
        }
    }
}
