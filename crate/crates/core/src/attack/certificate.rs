use serde::{Deserialize, Serialize};

use super::{decode_kernels, decode_pair, Direction, PathStep, StepWitness};
use crate::error::{Error, Result};
use crate::field::PrimeCtx;
use crate::genus1::curve_from_j;
use crate::genus2::{glue_elliptic, richelot_step, GenusTwoModel, NodeId, StepOutcome};

/// Current certificate format version.
pub const CERT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMeta {
    pub seed_a: String,
    pub seed_b: String,
    pub workers: usize,
    pub psi_len: usize,
    pub psi_prime_len: usize,
    /// Length of the elliptic path between the first factors.
    pub a: usize,
    /// Length of the elliptic path between the second factors.
    pub e: usize,
    pub pi_len: usize,
    pub parity_retries: usize,
    /// Steps spent by the two hunts.
    pub hunt_steps: [u64; 2],
    /// The walk with revisits cut out.
    pub path_nodes: Vec<NodeId>,
}

/// A walk in the (2,2)-isogeny graph over F_p(t), t^2 = d, with a witness
/// per step. Field elements use the hex encoding `c0+c1*t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub version: u32,
    pub p: u64,
    /// The non-residue d, as a signed integer.
    pub d: i64,
    /// Always "walk": vertices may repeat.
    pub object: String,
    pub start: NodeId,
    pub end: NodeId,
    pub steps: Vec<PathStep>,
    pub meta: CertificateMeta,
}

impl PathCertificate {
    pub fn new(ctx: PrimeCtx, start: NodeId, end: NodeId, steps: Vec<PathStep>, meta: CertificateMeta) -> Self {
        PathCertificate {
            version: CERT_VERSION,
            p: ctx.p(),
            d: ctx.d_signed(),
            object: "walk".into(),
            start,
            end,
            steps,
            meta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parse and check the header: version, object kind, and that `d` is
    /// the non-residue this library uses for `p`.
    pub fn from_json(s: &str) -> Result<PathCertificate> {
        let cert: PathCertificate =
            serde_json::from_str(s).map_err(|e| Error::Certificate(format!("malformed JSON: {e}")))?;
        cert.check_header()?;
        Ok(cert)
    }

    fn check_header(&self) -> Result<PrimeCtx> {
        if self.version != CERT_VERSION {
            return Err(Error::Certificate(format!(
                "unsupported version {} (expected {CERT_VERSION})",
                self.version
            )));
        }
        if self.object != "walk" {
            return Err(Error::Certificate(format!("unknown object {:?}", self.object)));
        }
        let ctx = PrimeCtx::new(self.p).map_err(|e| Error::Certificate(e.to_string()))?;
        if ctx.d_signed() != self.d {
            return Err(Error::Certificate(format!(
                "field convention mismatch: d = {} but F_{}^2 is built with d = {}",
                self.d,
                self.p,
                ctx.d_signed()
            )));
        }
        Ok(ctx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Failing step, or `None` for header and endpoint problems.
    pub step: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Recompute a step's isogeny forward; returns (domain id, codomain id).
fn recompute(ctx: &PrimeCtx, w: &StepWitness) -> Result<(NodeId, NodeId)> {
    match w {
        StepWitness::Richelot { domain, kernel } | StepWitness::BoundarySplit { domain, kernel } => {
            let m = GenusTwoModel::decode_coeffs(ctx, domain)?;
            let out = richelot_step(&m, kernel)?;
            let want_product = matches!(w, StepWitness::BoundarySplit { .. });
            if out.is_product() != want_product {
                return Err(Error::InconsistentWitness(format!(
                    "codomain is {}a product",
                    if out.is_product() { "" } else { "not " }
                )));
            }
            Ok((m.node_id()?, out.node_id()?))
        }
        StepWitness::ProductPair { domain, kernel } => {
            let js = decode_pair(ctx, domain)?;
            let xs = decode_kernels(ctx, kernel)?;
            let mut to = [js[0]; 2];
            for i in 0..2 {
                to[i] = curve_from_j(js[i]).two_isogeny(xs[i])?.j_invariant()?;
            }
            Ok((NodeId::product(js[0], js[1]), NodeId::product(to[0], to[1])))
        }
        StepWitness::BoundaryGlue { domain, kernel } => {
            let js = decode_pair(ctx, domain)?;
            let out = glue_elliptic(&curve_from_j(js[0]), &curve_from_j(js[1]), *kernel)?;
            if let StepOutcome::Product { .. } = out {
                return Err(Error::InconsistentWitness("gluing gives a product".into()));
            }
            Ok((NodeId::product(js[0], js[1]), out.node_id()?))
        }
    }
}

/// Check every step by recomputing its isogeny forward, the chaining of
/// node ids, and the endpoints. Depends only on the certificate.
pub fn verify_certificate(cert: &PathCertificate) -> Verification {
    let mut diagnostics = Vec::new();
    let ctx = match cert.check_header() {
        Ok(ctx) => ctx,
        Err(e) => {
            return Verification {
                valid: false,
                diagnostics: vec![Diagnostic {
                    step: None,
                    message: e.to_string(),
                }],
            }
        }
    };
    let mut at = cert.start.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        let mut fail = |message: String| diagnostics.push(Diagnostic { step: Some(i), message });
        match recompute(&ctx, &step.witness) {
            Ok((dom, cod)) => {
                if cod != step.codomain {
                    fail(format!("codomain is {cod}, declared {}", step.codomain));
                }
                let (from, to) = match step.direction {
                    Direction::Fwd => (dom, cod),
                    Direction::Rev => (cod, dom),
                };
                if from != at {
                    fail(format!("starts at {from}, previous step ended at {at}"));
                }
                at = to;
            }
            Err(e) => {
                fail(format!("witness does not recompute: {e}"));
                // keep chaining from the declared side if possible
                if step.direction == Direction::Fwd {
                    at = step.codomain.clone();
                }
            }
        }
    }
    if at != cert.end {
        diagnostics.push(Diagnostic {
            step: None,
            message: format!("walk ends at {at}, declared end {}", cert.end),
        });
    }
    Verification {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}

/// Parse and verify certificate bytes.
pub fn verify_certificate_json(s: &str) -> Verification {
    match PathCertificate::from_json(s) {
        Ok(cert) => verify_certificate(&cert),
        Err(e) => Verification {
            valid: false,
            diagnostics: vec![Diagnostic {
                step: None,
                message: e.to_string(),
            }],
        },
    }
}
