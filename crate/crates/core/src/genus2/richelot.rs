use super::{GenusTwoModel, Root, SplittingPartition, StepOutcome};
use crate::error::{Error, Result};
use crate::field::Fp2;
use crate::genus1::{j_of_cubic, JInvariant};

/// A binary quadratic form a X^2 + b X Z + c Z^2, stored as [a, b, c].
/// As a polynomial in x = X/Z it is a x^2 + b x + c; a = 0 means a root at
/// infinity.
type Form = [Fp2; 3];

fn eval_form(g: &Form, x: Fp2, z: Fp2) -> Fp2 {
    g[0] * x.square() + g[1] * x * z + g[2] * z.square()
}

/// The quadratics G1, G2, G3 of a splitting, with G1 G2 G3 = f (the
/// leading coefficient of f is absorbed into G1).
fn quadratics(m: &GenusTwoModel, s: &SplittingPartition) -> Result<[Form; 3]> {
    let labels = m.labels()?;
    let ctx = m.ctx();
    let (zero, one) = (ctx.zero(), ctx.one());
    let mut gs = s.pairs().map(|pair| {
        match (labels[pair[0] as usize], labels[pair[1] as usize]) {
            (Root::Finite(a), Root::Finite(b)) => [one, -(a + b), a * b],
            (Root::Finite(a), Root::Infinity) | (Root::Infinity, Root::Finite(a)) => [zero, one, -a],
            (Root::Infinity, Root::Infinity) => unreachable!("labels are distinct"),
        }
    });
    let lc = m.leading();
    for c in gs[0].iter_mut() {
        *c *= lc;
    }
    Ok(gs)
}

fn det3(g: &[Form; 3]) -> Fp2 {
    let [a, b, c] = g;
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// The Richelot determinant of a splitting.
pub fn delta(m: &GenusTwoModel, s: &SplittingPartition) -> Result<Fp2> {
    Ok(det3(&quadratics(m, s)?))
}

/// G1' G2 - G1 G2' for quadratics G1, G2.
fn wronskian(g1: &Form, g2: &Form) -> Form {
    let two = g1[0].ctx().from_u64(2);
    [
        g1[0] * g2[1] - g2[0] * g1[1],
        two * (g1[0] * g2[2] - g2[0] * g1[2]),
        g1[1] * g2[2] - g2[1] * g1[2],
    ]
}

/// The two zeros of a nonzero form on the projective line, if rational.
fn form_roots(g: &Form) -> Result<[Root; 2]> {
    let ctx = g[0].ctx();
    if g[0].is_zero() {
        if g[1].is_zero() {
            return Err(Error::DegenerateStep("double root at infinity".into()));
        }
        return Ok([Root::Finite(-g[2] / g[1]), Root::Infinity]);
    }
    let disc = g[1].square() - ctx.from_u64(4) * g[0] * g[2];
    let s = disc.sqrt().ok_or(Error::TwoTorsionNotRational)?;
    let inv = g[0].double().inv()?;
    Ok([Root::Finite((-g[1] + s) * inv), Root::Finite((-g[1] - s) * inv)])
}

/// One Richelot step from `m` with kernel `s`.
///
/// With delta = det of the coefficient matrix of (G1, G2, G3): if delta is
/// nonzero the codomain is y^2 = delta^{-1} H1 H2 H3 with
/// H_i = G_{i+1}' G_{i+2} - G_{i+1} G_{i+2}', and the dual kernel pairs the
/// roots of each H_i. If delta = 0 the codomain is a product of elliptic
/// curves computed by [`split_to_elliptic`].
pub fn richelot_step(m: &GenusTwoModel, s: &SplittingPartition) -> Result<StepOutcome> {
    let g = quadratics(m, s)?;
    let d = det3(&g);
    if d.is_zero() {
        let (j1, j2) = split_with(&g)?;
        return Ok(StepOutcome::product(j1, j2));
    }
    let h = [wronskian(&g[1], &g[2]), wronskian(&g[2], &g[0]), wronskian(&g[0], &g[1])];
    let mut lc = d.inv()?;
    let mut pairs = Vec::with_capacity(3);
    for hi in &h {
        lc *= if hi[0].is_zero() { hi[1] } else { hi[0] };
        pairs.push(form_roots(hi)?);
    }
    let labels: Vec<Root> = pairs.iter().flatten().copied().collect();
    let labels: [Root; 6] = labels.try_into().expect("six roots");
    let model = GenusTwoModel::from_labels(lc, labels)
        .map_err(|_| Error::DegenerateStep(format!("codomain of splitting {s} is singular")))?;
    let dual = SplittingPartition::from_labels(&model, [pairs[0], pairs[1], pairs[2]])?;
    Ok(StepOutcome::Jacobian {
        model,
        dual,
        delta: Some(d),
    })
}

/// All 15 Richelot steps, in canonical splitting order.
pub fn jac_neighbors(m: &GenusTwoModel) -> Result<Vec<StepOutcome>> {
    SplittingPartition::all()
        .iter()
        .map(|s| richelot_step(m, s))
        .collect()
}

/// The elliptic factors of the codomain of a splitting with delta = 0.
pub fn split_to_elliptic(m: &GenusTwoModel, s: &SplittingPartition) -> Result<(JInvariant, JInvariant)> {
    let g = quadratics(m, s)?;
    if !det3(&g).is_zero() {
        return Err(Error::NotAProductSplitting);
    }
    split_with(&g)
}

/// Diagonalise a rank-2 pencil of quadratics.
///
/// The pencil G1 + lambda G2 contains two squares k (X - u Z)^2 and
/// k' (X - v Z)^2; a change of coordinates sending u and v to 0 and
/// infinity turns every G_i into a_i X^2 + c_i Z^2. The curve
/// y^2 = prod (a_i x^2 + c_i) then covers E1: y^2 = prod (a_i x + c_i) and
/// E2: y^2 = prod (c_i x + a_i), and E1 x E2 is the codomain.
fn split_with(g: &[Form; 3]) -> Result<(JInvariant, JInvariant)> {
    let ctx = g[0][0].ctx();
    let four = ctx.from_u64(4);
    let (g1, g2) = (&g[0], &g[1]);
    // discriminant of G1 + lambda G2 as a quadratic in lambda
    let qa = g2[1].square() - four * g2[0] * g2[2];
    let qb = g1[1].double() * g2[1] - four * (g1[0] * g2[2] + g2[0] * g1[2]);
    let qc = g1[1].square() - four * g1[0] * g1[2];
    let member = |lambda: Fp2| -> Form { [g1[0] + lambda * g2[0], g1[1] + lambda * g2[1], g1[2] + lambda * g2[2]] };
    let degenerate = || Error::DegenerateStep("pencil of quadratics cannot be diagonalised".into());
    let squares: [Form; 2] = if qa.is_zero() {
        if qb.is_zero() {
            return Err(degenerate());
        }
        [*g2, member(-qc / qb)]
    } else {
        let disc = qb.square() - four * qa * qc;
        if disc.is_zero() {
            return Err(degenerate());
        }
        let r = disc.sqrt().ok_or(Error::TwoTorsionNotRational)?;
        let inv = qa.double().inv()?;
        [member((-qb + r) * inv), member((-qb - r) * inv)]
    };
    // double root of each square, projectively
    let point = |f: &Form| -> Result<(Fp2, Fp2)> {
        if !f[0].is_zero() {
            Ok((-f[1] / f[0].double(), ctx.one()))
        } else if !f[2].is_zero() {
            Ok((ctx.one(), ctx.zero()))
        } else {
            Err(degenerate())
        }
    };
    let (ux, uz) = point(&squares[0])?;
    let (vx, vz) = point(&squares[1])?;
    // (X, Z) = X' (vx, vz) + Z' (ux, uz)
    let mut diag = [[ctx.zero(); 2]; 3];
    for (i, gi) in g.iter().enumerate() {
        let a = eval_form(gi, vx, vz);
        let c = eval_form(gi, ux, uz);
        let cross = gi[0].double() * vx * ux + gi[1] * (vx * uz + vz * ux) + gi[2].double() * vz * uz;
        if !cross.is_zero() || a.is_zero() || c.is_zero() {
            return Err(degenerate());
        }
        diag[i] = [a, c];
    }
    let cubic = |d: &[[Fp2; 2]; 3]| -> Result<JInvariant> {
        // prod (a_i x + c_i)
        let [p, q, r] = d;
        let c3 = p[0] * q[0] * r[0];
        let c2 = p[0] * q[0] * r[1] + p[0] * q[1] * r[0] + p[1] * q[0] * r[0];
        let c1 = p[0] * q[1] * r[1] + p[1] * q[0] * r[1] + p[1] * q[1] * r[0];
        let c0 = p[1] * q[1] * r[1];
        j_of_cubic(c3, c2, c1, c0)
    };
    let j1 = cubic(&diag)?;
    let j2 = cubic(&diag.map(|[a, c]| [c, a]))?;
    Ok(if j1 <= j2 { (j1, j2) } else { (j2, j1) })
}
