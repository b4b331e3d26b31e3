//! Genus-2 curves, superspecial abelian surfaces and their (2,2)-isogenies.
//!
//! A vertex of the graph is either the Jacobian of a genus-2 curve
//! y^2 = f(x), carried as a concrete [`GenusTwoModel`], or a product of two
//! supersingular elliptic curves, carried as a sorted pair of j-invariants.
//! Identity of vertices is decided by [`NodeId`]; models are never
//! reconstructed from invariants.
//!
//! The six Weierstrass points of a model are its labels: the roots of f,
//! plus the point at infinity when deg f = 5. A (2,2)-kernel is a
//! [`SplittingPartition`] of the labels into three pairs. Steps from a
//! Jacobian use Richelot's construction; when the determinant of the
//! three quadratics vanishes the codomain is a product and is split into
//! its elliptic factors. Steps from a product are either componentwise
//! 2-isogenies or gluings of the two factors along an anti-isometry of
//! their 2-torsion.

mod cds;
mod glue;
mod invariants;
mod mobius;
mod richelot;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fp2, Poly, PrimeCtx};
use crate::genus1::{curve_from_j, neighbors_j, JInvariant};

pub use cds::{cds_admissible, cds_hash, takashima_admissible, CdsDigest};
pub use glue::{glue_elliptic, product_neighbors, product_step, ANTI_ISOMETRIES};
pub use invariants::{automorphism_count, hasse_witt, igusa_clebsch, is_superspecial, IgusaClebsch};
pub use mobius::Mobius;
pub use richelot::{delta, jac_neighbors, richelot_step, split_to_elliptic};

/// A Weierstrass point: a root of f, or the point at infinity.
///
/// The derived order puts every finite root (ordered by encoding) before
/// infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    Finite(Fp2),
    Infinity,
}

impl Root {
    pub fn finite(&self) -> Option<Fp2> {
        match self {
            Root::Finite(x) => Some(*x),
            Root::Infinity => None,
        }
    }

    /// Projective coordinates (x : z).
    pub(crate) fn projective(&self, ctx: PrimeCtx) -> (Fp2, Fp2) {
        match self {
            Root::Finite(x) => (*x, ctx.one()),
            Root::Infinity => (ctx.one(), ctx.zero()),
        }
    }

    pub(crate) fn from_projective(x: Fp2, z: Fp2) -> Root {
        if z.is_zero() {
            Root::Infinity
        } else {
            Root::Finite(x / z)
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Root::Finite(x) => x.encode(),
            Root::Infinity => "inf".to_string(),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// The curve y^2 = f(x) with f squarefree of degree 5 or 6.
///
/// When all six Weierstrass points are defined over F_{p^2} the sorted
/// labels are cached alongside f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTwoModel {
    f: Poly,
    labels: Option<[Root; 6]>,
}

impl GenusTwoModel {
    pub fn new(f: Poly) -> Result<GenusTwoModel> {
        let deg = f.degree().unwrap_or(0);
        if deg != 5 && deg != 6 {
            return Err(Error::InvalidInput(format!("genus-2 model needs degree 5 or 6, got {deg}")));
        }
        if !f.is_squarefree() {
            return Err(Error::SingularCurve);
        }
        let roots = f.distinct_roots();
        let mut labels: Vec<Root> = roots.into_iter().map(Root::Finite).collect();
        if deg == 5 {
            labels.push(Root::Infinity);
        }
        let labels = <[Root; 6]>::try_from(labels).ok();
        Ok(GenusTwoModel { f, labels })
    }

    /// y^2 = lc * prod over finite labels of (x - r). A label at infinity
    /// makes f a quintic.
    pub fn from_labels(lc: Fp2, labels: [Root; 6]) -> Result<GenusTwoModel> {
        let ctx = lc.ctx();
        if lc.is_zero() {
            return Err(Error::InvalidInput("zero leading coefficient".into()));
        }
        let mut sorted = labels;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SingularCurve);
        }
        let finite: Vec<Fp2> = sorted.iter().filter_map(Root::finite).collect();
        let f = Poly::from_roots(ctx, &finite).scale(lc);
        Ok(GenusTwoModel {
            f,
            labels: Some(sorted),
        })
    }

    /// y^2 = x^5 + x.
    pub fn x5_plus_x(ctx: PrimeCtx) -> GenusTwoModel {
        GenusTwoModel::new(Poly::from_i64s(ctx, &[0, 1, 0, 0, 0, 1])).expect("x^5 + x is squarefree")
    }

    pub fn ctx(&self) -> PrimeCtx {
        self.f.ctx()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn leading(&self) -> Fp2 {
        self.f.leading().expect("nonzero")
    }

    /// Sorted Weierstrass labels; errors if some are not defined over F_{p^2}.
    pub fn labels(&self) -> Result<&[Root; 6]> {
        self.labels.as_ref().ok_or(Error::TwoTorsionNotRational)
    }

    /// Index of a label in the sorted label list.
    pub fn label_index(&self, r: Root) -> Result<usize> {
        self.labels()?
            .iter()
            .position(|&l| l == r)
            .ok_or_else(|| Error::InconsistentWitness(format!("{r} is not a Weierstrass point")))
    }

    pub fn node_id(&self) -> Result<NodeId> {
        Ok(igusa_clebsch(self)?.node_id())
    }

    /// Coefficients as field encodings, ascending.
    pub fn encode_coeffs(&self) -> Vec<String> {
        self.f.coeffs().iter().map(Fp2::encode).collect()
    }

    pub fn decode_coeffs(ctx: &PrimeCtx, coeffs: &[String]) -> Result<GenusTwoModel> {
        let cs = coeffs.iter().map(|c| ctx.decode(c)).collect::<Result<Vec<_>>>()?;
        GenusTwoModel::new(Poly::new(*ctx, cs))
    }
}

/// A partition of the six label indices 0..6 into three pairs.
///
/// Pairs are stored with the smaller index first and sorted by that index,
/// which is the canonical form; since labels are sorted by encoding this
/// is also the order by smaller member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[[u8; 2]; 3]", into = "[[u8; 2]; 3]")]
pub struct SplittingPartition {
    pairs: [[u8; 2]; 3],
}

impl SplittingPartition {
    pub fn new(pairs: [[u8; 2]; 3]) -> Result<SplittingPartition> {
        let mut seen = [false; 6];
        let mut ps = pairs;
        for pair in ps.iter_mut() {
            pair.sort();
            for &i in pair.iter() {
                if i >= 6 || seen[i as usize] {
                    return Err(Error::InvalidSplitting(format!("{pairs:?}")));
                }
                seen[i as usize] = true;
            }
        }
        ps.sort();
        Ok(SplittingPartition { pairs: ps })
    }

    pub fn pairs(&self) -> [[u8; 2]; 3] {
        self.pairs
    }

    /// All 15 partitions in canonical (lexicographic) order.
    pub fn all() -> [SplittingPartition; 15] {
        let mut out = Vec::with_capacity(15);
        for b in 1..6u8 {
            let rest: Vec<u8> = (1..6).filter(|&i| i != b).collect();
            for k in 1..4 {
                let c = rest[0];
                let d = rest[k];
                let others: Vec<u8> = rest[1..].iter().copied().filter(|&i| i != d).collect();
                out.push(SplittingPartition {
                    pairs: [[0, b], [c, d], [others[0], others[1]]],
                });
            }
        }
        out.try_into().expect("15 partitions")
    }

    /// Position in [`SplittingPartition::all`].
    pub fn index(&self) -> usize {
        SplittingPartition::all()
            .iter()
            .position(|s| s == self)
            .expect("canonical partition")
    }

    pub fn from_index(i: usize) -> Result<SplittingPartition> {
        SplittingPartition::all()
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidSplitting(format!("index {i} out of range 0..15")))
    }

    /// Number of pairs this partition has in common with `other`.
    pub fn common_pairs(&self, other: &SplittingPartition) -> usize {
        self.pairs.iter().filter(|p| other.pairs.contains(p)).count()
    }

    /// Build from pairs of labels of `m`.
    pub fn from_labels(m: &GenusTwoModel, pairs: [[Root; 2]; 3]) -> Result<SplittingPartition> {
        let mut idx = [[0u8; 2]; 3];
        for (k, pair) in pairs.iter().enumerate() {
            for (l, &r) in pair.iter().enumerate() {
                idx[k][l] = m.label_index(r)? as u8;
            }
        }
        SplittingPartition::new(idx)
    }
}

impl TryFrom<[[u8; 2]; 3]> for SplittingPartition {
    type Error = Error;

    fn try_from(pairs: [[u8; 2]; 3]) -> Result<Self> {
        SplittingPartition::new(pairs)
    }
}

impl From<SplittingPartition> for [[u8; 2]; 3] {
    fn from(s: SplittingPartition) -> Self {
        s.pairs
    }
}

impl fmt::Display for SplittingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.pairs;
        write!(f, "{}{}|{}{}|{}{}", a[0], a[1], b[0], b[1], c[0], c[1])
    }
}

/// Canonical label of a vertex up to isomorphism over the algebraic closure.
///
/// Grammar: `J:<case>:<i1>,<i2>,<i3>` for Jacobians (see
/// [`IgusaClebsch::node_id`] for the cases) and `P:<j1>,<j2>` with
/// `j1 <= j2` for products, all values in the field encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn product(j1: JInvariant, j2: JInvariant) -> NodeId {
        let (a, b) = if j1 <= j2 { (j1, j2) } else { (j2, j1) };
        NodeId(format!("P:{},{}", a.encode(), b.encode()))
    }

    pub(crate) fn jacobian(case: char, vals: [Fp2; 3]) -> NodeId {
        NodeId(format!(
            "J:{case}:{},{},{}",
            vals[0].encode(),
            vals[1].encode(),
            vals[2].encode()
        ))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_product(&self) -> bool {
        self.0.starts_with("P:")
    }

    pub fn is_jacobian(&self) -> bool {
        self.0.starts_with("J:")
    }

    /// Accepts strings matching the grammar shape (tag and field count).
    pub fn parse(s: &str) -> Result<NodeId> {
        let bad = || Error::InvalidInput(format!("malformed node id {s:?}"));
        if let Some(rest) = s.strip_prefix("P:") {
            if rest.split(',').count() != 2 {
                return Err(bad());
            }
        } else if let Some(rest) = s.strip_prefix("J:") {
            let (case, vals) = rest.split_once(':').ok_or_else(bad)?;
            if !matches!(case, "A" | "B" | "C" | "D") || vals.split(',').count() != 3 {
                return Err(bad());
            }
        } else {
            return Err(bad());
        }
        Ok(NodeId(s.to_string()))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Result of one (2,2)-isogeny step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// A Jacobian codomain with the splitting of its labels that is the
    /// kernel of the dual step. `delta` is the Richelot determinant (absent
    /// for gluing steps, which do not use one).
    Jacobian {
        model: GenusTwoModel,
        dual: SplittingPartition,
        delta: Option<Fp2>,
    },
    /// A product codomain, with j1 <= j2.
    Product { j1: JInvariant, j2: JInvariant },
}

impl StepOutcome {
    pub(crate) fn product(j1: JInvariant, j2: JInvariant) -> StepOutcome {
        let (j1, j2) = if j1 <= j2 { (j1, j2) } else { (j2, j1) };
        StepOutcome::Product { j1, j2 }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, StepOutcome::Product { .. })
    }

    pub fn vertex(&self) -> Vertex {
        match self {
            StepOutcome::Jacobian { model, .. } => Vertex::Jacobian(model.clone()),
            StepOutcome::Product { j1, j2 } => Vertex::product(*j1, *j2),
        }
    }

    pub fn into_vertex(self) -> Vertex {
        match self {
            StepOutcome::Jacobian { model, .. } => Vertex::Jacobian(model),
            StepOutcome::Product { j1, j2 } => Vertex::product(j1, j2),
        }
    }

    pub fn node_id(&self) -> Result<NodeId> {
        match self {
            StepOutcome::Jacobian { model, .. } => model.node_id(),
            StepOutcome::Product { j1, j2 } => Ok(NodeId::product(*j1, *j2)),
        }
    }

    pub fn dual(&self) -> Option<SplittingPartition> {
        match self {
            StepOutcome::Jacobian { dual, .. } => Some(*dual),
            StepOutcome::Product { .. } => None,
        }
    }
}

/// A vertex of the superspecial (2,2)-isogeny graph with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    Jacobian(GenusTwoModel),
    /// Sorted pair j1 <= j2.
    Product(JInvariant, JInvariant),
}

impl Vertex {
    pub fn product(j1: JInvariant, j2: JInvariant) -> Vertex {
        if j1 <= j2 {
            Vertex::Product(j1, j2)
        } else {
            Vertex::Product(j2, j1)
        }
    }

    pub fn ctx(&self) -> PrimeCtx {
        match self {
            Vertex::Jacobian(m) => m.ctx(),
            Vertex::Product(j, _) => j.ctx(),
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Vertex::Product(..))
    }

    pub fn node_id(&self) -> Result<NodeId> {
        match self {
            Vertex::Jacobian(m) => m.node_id(),
            Vertex::Product(a, b) => Ok(NodeId::product(*a, *b)),
        }
    }

    /// The 15 neighbours in canonical order.
    pub fn neighbors(&self) -> Result<Vec<StepOutcome>> {
        match self {
            Vertex::Jacobian(m) => jac_neighbors(m),
            Vertex::Product(a, b) => product_neighbors(*a, *b),
        }
    }

    /// The outcome at position `index` (0..15) of [`Vertex::neighbors`].
    pub fn step(&self, index: usize) -> Result<StepOutcome> {
        match self {
            Vertex::Jacobian(m) => richelot_step(m, &SplittingPartition::from_index(index)?),
            Vertex::Product(a, b) => product_step(*a, *b, index),
        }
    }

    pub fn automorphism_count(&self) -> Result<u64> {
        automorphism_count(&self.node_id()?, self)
    }

    /// Superspeciality check via the Hasse-Witt matrix (Jacobians) or
    /// supersingularity of both factors (products).
    pub fn is_superspecial(&self) -> Result<bool> {
        match self {
            Vertex::Jacobian(m) => is_superspecial(m),
            Vertex::Product(a, b) => {
                Ok(curve_from_j(*a).is_supersingular() && curve_from_j(*b).is_supersingular())
            }
        }
    }
}

/// Default superspecial start for p = 3 mod 4: the first Jacobian among the
/// gluings of two copies of the j = 1728 curve.
pub fn default_start(ctx: &PrimeCtx) -> Result<GenusTwoModel> {
    if ctx.p() % 4 != 3 {
        return Err(Error::NoDefaultStart(ctx.p()));
    }
    let j = JInvariant::j1728(ctx);
    for out in product_neighbors(j, j)? {
        if let StepOutcome::Jacobian { model, .. } = out {
            return Ok(model);
        }
    }
    // every gluing of E x E degenerates only if E has many automorphisms;
    // fall back to a neighbour of a neighbour
    for (n, _) in neighbors_j(j)? {
        for out in product_neighbors(j, n)? {
            if let StepOutcome::Jacobian { model, .. } = out {
                return Ok(model);
            }
        }
    }
    Err(Error::NoDefaultStart(ctx.p()))
}
