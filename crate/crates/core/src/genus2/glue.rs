use super::{GenusTwoModel, Root, SplittingPartition, StepOutcome};
use crate::error::{Error, Result};
use crate::genus1::{curve_from_j, neighbors_j, EllipticModel, JInvariant};

/// The six bijections between the sorted 2-torsion x-coordinates of two
/// curves, in lexicographic order; anti-isometry k (1..=6) sends root i of
/// the first curve to root `ANTI_ISOMETRIES[k - 1][i]` of the second.
pub const ANTI_ISOMETRIES: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Glue E1 and E2 along anti-isometry `k` of their 2-torsion.
///
/// Let M be the Mobius map sending the 2-torsion roots r_i of E1 to the
/// matched roots of E2. If M fixes infinity it comes from an isomorphism
/// E1 -> E2 and the quotient of E1 x E2 is again E1 x E2. Otherwise, with
/// x0 the pole of M and t_i = r_i - x0, the curve y^2 = prod (d x^2 - t_i)
/// covers y^2 = prod (x - t_i) ~ E1 and y^2 = prod (1 - t_i x) ~ E2
/// compatibly with the matching, and its Jacobian is the quotient. The
/// twist d (1 or a non-square) is chosen so the roots +-sqrt(t_i / d) are
/// rational; those pairs form the dual kernel.
pub fn glue_elliptic(e1: &EllipticModel, e2: &EllipticModel, k: usize) -> Result<StepOutcome> {
    if !(1..=6).contains(&k) {
        return Err(Error::InvalidAntiIsometry(k));
    }
    let r = e1.two_torsion_roots();
    let s = e2.two_torsion_roots();
    if r.len() != 3 || s.len() != 3 {
        return Err(Error::TwoTorsionNotRational);
    }
    let perm = ANTI_ISOMETRIES[k - 1];
    let s: Vec<_> = perm.iter().map(|&i| s[i]).collect();
    // cross-ratio chart of E2 sends s0, s1, s2 to 0, 1, infinity; the pole
    // of M is the point of E1's chart with the image of infinity
    let kappa = (s[1] - s[2]) / (s[1] - s[0]);
    let coef = (r[1] - r[2]) - kappa * (r[1] - r[0]);
    if coef.is_zero() {
        return Ok(StepOutcome::product(e1.j_invariant()?, e2.j_invariant()?));
    }
    let x0 = (r[0] * (r[1] - r[2]) - kappa * r[2] * (r[1] - r[0])) / coef;
    let t: Vec<_> = r.iter().map(|&ri| ri - x0).collect();
    let ctx = e1.ctx();
    for d in [ctx.one(), ctx.fp2_nonsquare()] {
        let dinv = d.inv()?;
        let ws: Option<Vec<_>> = t.iter().map(|&ti| (ti * dinv).sqrt()).collect();
        let Some(ws) = ws else { continue };
        let pairs = [0, 1, 2].map(|i| [Root::Finite(ws[i]), Root::Finite(-ws[i])]);
        let labels: Vec<Root> = pairs.iter().flatten().copied().collect();
        let model = GenusTwoModel::from_labels(d.square() * d, labels.try_into().expect("six roots"))?;
        let dual = SplittingPartition::from_labels(&model, pairs)?;
        return Ok(StepOutcome::Jacobian {
            model,
            dual,
            delta: None,
        });
    }
    Err(Error::TwoTorsionNotRational)
}

/// The 15 neighbours of the product vertex E(j1) x E(j2) with j1 <= j2
/// taken first: the 9 componentwise 2-isogenies (ordered by the canonical
/// neighbour order on each factor), then the 6 gluings.
pub fn product_neighbors(j1: JInvariant, j2: JInvariant) -> Result<Vec<StepOutcome>> {
    (0..15).map(|i| product_step(j1, j2, i)).collect()
}

/// Outcome `index` (0..15) of [`product_neighbors`].
pub fn product_step(j1: JInvariant, j2: JInvariant, index: usize) -> Result<StepOutcome> {
    let (j1, j2) = if j1 <= j2 { (j1, j2) } else { (j2, j1) };
    match index {
        0..=8 => {
            let n1 = neighbors_j(j1)?;
            let n2 = neighbors_j(j2)?;
            Ok(StepOutcome::product(n1[index / 3].0, n2[index % 3].0))
        }
        9..=14 => glue_elliptic(&curve_from_j(j1), &curve_from_j(j2), index - 8),
        _ => Err(Error::InvalidInput(format!("outcome index {index} out of range 0..15"))),
    }
}
