//! Path finding between superspecial surfaces by reduction to dimension one.
//!
//! Both endpoints are walked into elliptic products (`psi`, `psi'`), the
//! factors are connected in the elliptic 2-isogeny graph (`beta`, `eta`),
//! the two elliptic paths are padded to a common length and run in
//! parallel (`pi`), and the result is `psi'^ . pi . psi`, where the last
//! factor is `psi'` read backwards.

mod certificate;

pub use certificate::{
    verify_certificate, verify_certificate_json, CertificateMeta, Diagnostic, PathCertificate, Verification,
    CERT_VERSION,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp2;
use crate::genus1::{kernel_between, mitm_path, neighbors_j, EllipticPath, JInvariant, Parity};
use crate::genus2::{richelot_step, GenusTwoModel, NodeId, SplittingPartition, StepOutcome, Vertex};
use crate::graphwalk::{hunt_from, HuntConfig, HuntReport, WalkMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Fwd,
    Rev,
}

/// The isogeny of a step, always in its forward orientation: a domain, a
/// kernel, and the node id of the codomain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepWitness {
    /// Jacobian to Jacobian.
    Richelot {
        domain: Vec<String>,
        kernel: SplittingPartition,
    },
    /// Jacobian to product (delta = 0).
    BoundarySplit {
        domain: Vec<String>,
        kernel: SplittingPartition,
    },
    /// E1 x E2 to E1' x E2', one 2-isogeny per factor. Kernels are
    /// x-coordinates on the models `curve_from_j` of the domain factors.
    ProductPair { domain: [String; 2], kernel: [String; 2] },
    /// E1 x E2 to a Jacobian by gluing along anti-isometry `kernel` (1..=6).
    BoundaryGlue { domain: [String; 2], kernel: usize },
}

/// One step of a walk. A `rev` step traverses its witness backwards: the
/// walk moves from the codomain to the domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub direction: Direction,
    #[serde(flatten)]
    pub witness: StepWitness,
    pub codomain: NodeId,
}

impl PathStep {
    /// A forward step from a Jacobian.
    pub fn jacobian(model: &GenusTwoModel, kernel: SplittingPartition) -> Result<PathStep> {
        let out = richelot_step(model, &kernel)?;
        let domain = model.encode_coeffs();
        let witness = match out {
            StepOutcome::Jacobian { .. } => StepWitness::Richelot { domain, kernel },
            StepOutcome::Product { .. } => StepWitness::BoundarySplit { domain, kernel },
        };
        Ok(PathStep {
            direction: Direction::Fwd,
            witness,
            codomain: out.node_id()?,
        })
    }

    /// The same isogeny traversed the other way.
    pub fn reversed(&self) -> PathStep {
        PathStep {
            direction: match self.direction {
                Direction::Fwd => Direction::Rev,
                Direction::Rev => Direction::Fwd,
            },
            ..self.clone()
        }
    }
}

/// Walk to a product from `a`: a product hunt, returned as forward steps
/// together with the product factors (j1 <= j2).
#[derive(Clone, Debug)]
pub struct ProductPath {
    pub steps: Vec<PathStep>,
    pub pair: (JInvariant, JInvariant),
    pub report: HuntReport,
}

pub fn find_product_path(a: &GenusTwoModel, cfg: &HuntConfig) -> Result<ProductPath> {
    let report = hunt_from(a, cfg)?;
    let steps = report
        .path
        .iter()
        .map(|s| PathStep::jacobian(&s.from, s.splitting))
        .collect::<Result<Vec<_>>>()?;
    let pair = match report.product {
        Vertex::Product(j1, j2) => (j1, j2),
        Vertex::Jacobian(_) => unreachable!("a hunt ends on a product"),
    };
    Ok(ProductPath { steps, pair, report })
}

/// Extend `path` to `len` steps by going back and forth over its last edge
/// (or over the first edge out of its start when it is empty). Needs
/// `len - path.len()` even.
pub fn pad_path(path: &EllipticPath, len: usize) -> Result<EllipticPath> {
    let mut out = path.clone();
    if len < path.len() || (len - path.len()) % 2 == 1 {
        return Err(Error::Bottom {
            beta: path.len(),
            eta: len,
        });
    }
    if len == path.len() {
        return Ok(out);
    }
    // u -> v is the edge to bounce on; `there` and `back` are its two
    // directions
    let (u, v, there) = match path.len() {
        0 => {
            let (n, x) = neighbors_j(path.start())?[0];
            (path.start(), n, x)
        }
        b => (path.vertices[b - 1], path.vertices[b], path.kernels[b - 1]),
    };
    let back = kernel_between(v, u)?
        .ok_or_else(|| Error::InconsistentWitness(format!("no edge back from {v} to {u}")))?;
    let legs = if path.is_empty() {
        [(v, there), (u, back)]
    } else {
        [(u, back), (v, there)]
    };
    while out.len() < len {
        for (to, x) in legs {
            out.vertices.push(to);
            out.kernels.push(x);
        }
    }
    Ok(out)
}

/// Run `beta` and `eta` side by side as steps between products, padding
/// the shorter one. The lengths must agree mod 2, otherwise `Bottom`.
pub fn combine_product_paths(beta: &EllipticPath, eta: &EllipticPath) -> Result<Vec<PathStep>> {
    if beta.len() % 2 != eta.len() % 2 {
        return Err(Error::Bottom {
            beta: beta.len(),
            eta: eta.len(),
        });
    }
    let n = beta.len().max(eta.len());
    let (b, e) = (pad_path(beta, n)?, pad_path(eta, n)?);
    Ok((0..n)
        .map(|i| PathStep {
            direction: Direction::Fwd,
            witness: StepWitness::ProductPair {
                domain: [b.vertices[i].encode(), e.vertices[i].encode()],
                kernel: [b.kernels[i].encode(), e.kernels[i].encode()],
            },
            codomain: NodeId::product(b.vertices[i + 1], e.vertices[i + 1]),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackConfig {
    pub seed_a: String,
    pub seed_b: String,
    /// Walkers per hunt.
    pub workers: usize,
    pub mode: WalkMode,
    /// Step budget of each hunt.
    pub max_steps: u64,
    /// Parity-constrained searches allowed after a parity mismatch; 0 turns
    /// a mismatch into `Bottom`.
    pub parity_retries: usize,
    /// Depth bound of the elliptic path searches.
    pub mitm_max_len: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            seed_a: "a".into(),
            seed_b: "b".into(),
            workers: 1,
            mode: WalkMode::Appendix,
            max_steps: 1 << 32,
            parity_retries: 2,
            mitm_max_len: 64,
        }
    }
}

impl AttackConfig {
    fn check(&self) -> Result<()> {
        if self.workers == 0 || self.max_steps == 0 || self.mitm_max_len == 0 {
            return Err(Error::InvalidInput("workers, max_steps and mitm_max_len must be positive".into()));
        }
        Ok(())
    }

    fn hunt(&self, seed: &str) -> HuntConfig {
        HuntConfig {
            max_steps: self.max_steps,
            ..HuntConfig::new(seed, self.workers, self.mode)
        }
    }
}

/// Elliptic paths b -> b2 and e -> e2 of equal length parity.
fn matched_paths(
    (b, b2): (JInvariant, JInvariant),
    (e, e2): (JInvariant, JInvariant),
    cfg: &AttackConfig,
) -> Result<(EllipticPath, EllipticPath, usize)> {
    let mut beta = mitm_path(b, b2, None, cfg.mitm_max_len)?;
    let mut eta = mitm_path(e, e2, None, cfg.mitm_max_len)?;
    let mut retries = 0;
    while beta.len() % 2 != eta.len() % 2 {
        if retries == cfg.parity_retries {
            return Err(Error::Bottom {
                beta: beta.len(),
                eta: eta.len(),
            });
        }
        // alternate which side is re-searched
        let res = if retries % 2 == 0 {
            mitm_path(b, b2, Some(Parity::of(eta.len())), cfg.mitm_max_len).map(|p| beta = p)
        } else {
            mitm_path(e, e2, Some(Parity::of(beta.len())), cfg.mitm_max_len).map(|p| eta = p)
        };
        match res {
            Ok(()) | Err(Error::PathNotFound(_)) => {}
            Err(err) => return Err(err),
        }
        retries += 1;
    }
    Ok((beta, eta, retries))
}

/// Find a walk from `a` to `a2` in the (2,2)-isogeny graph.
pub fn attack(a: &GenusTwoModel, a2: &GenusTwoModel, cfg: &AttackConfig) -> Result<PathCertificate> {
    cfg.check()?;
    let ctx = a.ctx();
    if a2.ctx() != ctx {
        return Err(Error::InvalidInput("endpoints over different fields".into()));
    }
    let (pa, pb) = rayon::join(
        || find_product_path(a, &cfg.hunt(&cfg.seed_a)),
        || find_product_path(a2, &cfg.hunt(&cfg.seed_b)),
    );
    let (pa, pb) = (pa?, pb?);
    let ((b, e), (b2, e2)) = (pa.pair, pb.pair);
    let (beta, eta, retries) = matched_paths((b, b2), (e, e2), cfg)?;
    let pi = combine_product_paths(&beta, &eta)?;

    let mut steps = pa.steps.clone();
    steps.extend(pi.iter().cloned());
    steps.extend(pb.steps.iter().rev().map(PathStep::reversed));

    let start = a.node_id()?;
    let end = a2.node_id()?;
    // node ids along the walk: psi, pi, then psi' backwards
    let mut nodes = vec![start.clone()];
    nodes.extend(pa.steps.iter().chain(&pi).map(|s| s.codomain.clone()));
    let mut back = vec![end.clone()];
    back.extend(pb.steps.iter().map(|s| s.codomain.clone()));
    nodes.extend(back.into_iter().rev().skip(1));
    Ok(PathCertificate::new(
        ctx,
        start,
        end,
        steps,
        CertificateMeta {
            seed_a: cfg.seed_a.clone(),
            seed_b: cfg.seed_b.clone(),
            workers: cfg.workers,
            psi_len: pa.steps.len(),
            psi_prime_len: pb.steps.len(),
            a: beta.len(),
            e: eta.len(),
            pi_len: pi.len(),
            parity_retries: retries,
            hunt_steps: [pa.report.steps_done, pb.report.steps_done],
            path_nodes: loop_erase(&nodes),
        },
    ))
}

/// Chronological loop erasure: the simple path left after cutting out
/// every revisit.
pub fn loop_erase(seq: &[NodeId]) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::new();
    for v in seq {
        match out.iter().position(|u| u == v) {
            Some(i) => out.truncate(i + 1),
            None => out.push(v.clone()),
        }
    }
    out
}

/// Factor j-invariants of a `ProductPair` domain, decoded.
pub(crate) fn decode_pair(ctx: &crate::field::PrimeCtx, s: &[String; 2]) -> Result<[JInvariant; 2]> {
    Ok([JInvariant::decode(ctx, &s[0])?, JInvariant::decode(ctx, &s[1])?])
}

pub(crate) fn decode_kernels(ctx: &crate::field::PrimeCtx, s: &[String; 2]) -> Result<[Fp2; 2]> {
    Ok([ctx.decode(&s[0])?, ctx.decode(&s[1])?])
}
