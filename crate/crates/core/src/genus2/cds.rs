use super::{richelot_step, GenusTwoModel, NodeId, SplittingPartition, StepOutcome};
use crate::error::{Error, Result};

/// The 8 splittings sharing no pair with `dual`, in canonical order.
pub fn cds_admissible(dual: &SplittingPartition) -> Vec<SplittingPartition> {
    SplittingPartition::all()
        .into_iter()
        .filter(|s| s.common_pairs(dual) == 0)
        .collect()
}

/// The 14 splittings other than `dual`, in canonical order.
pub fn takashima_admissible(dual: &SplittingPartition) -> Vec<SplittingPartition> {
    SplittingPartition::all()
        .into_iter()
        .filter(|s| s != dual)
        .collect()
}

/// Result of [`cds_hash`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdsDigest {
    Node(NodeId),
    /// The walk entered a product vertex at step `step` (0-based).
    ProductFailure { step: usize, node: NodeId },
}

/// Hash a base-8 message by walking: digit m_i picks the m_i-th of the 8
/// admissible splittings relative to the kernel of the previous step's
/// dual.
pub fn cds_hash(start: &GenusTwoModel, start_dual: SplittingPartition, msg: &[u8]) -> Result<CdsDigest> {
    let mut model = start.clone();
    let mut dual = start_dual;
    for (i, &digit) in msg.iter().enumerate() {
        if digit >= 8 {
            return Err(Error::InvalidInput(format!("base-8 digit {digit}")));
        }
        let s = cds_admissible(&dual)[digit as usize];
        match richelot_step(&model, &s)? {
            StepOutcome::Jacobian { model: m, dual: d, .. } => {
                model = m;
                dual = d;
            }
            out @ StepOutcome::Product { .. } => {
                return Ok(CdsDigest::ProductFailure {
                    step: i,
                    node: out.node_id()?,
                })
            }
        }
    }
    Ok(CdsDigest::Node(model.node_id()?))
}
