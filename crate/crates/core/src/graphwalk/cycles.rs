use std::collections::BTreeMap;

use crate::error::Result;
use crate::genus2::{richelot_step, GenusTwoModel, NodeId, SplittingPartition, StepOutcome};

/// A closed walk through a start vertex, stored as two walks from the start
/// that meet: `forward` and `backward` (the latter traversed in reverse to
/// close the cycle). Each step is a domain model and a kernel.
#[derive(Clone, Debug)]
pub struct Cycle {
    /// Node ids around the cycle; first and last are the start.
    pub nodes: Vec<NodeId>,
    pub forward: Vec<(GenusTwoModel, SplittingPartition)>,
    pub backward: Vec<(GenusTwoModel, SplittingPartition)>,
    /// For a 4-cycle: whether it has the shape of the cycles built from a
    /// point of order 4: the two first kernels share one 2-torsion point,
    /// and each second kernel shares one point with the dual of the first.
    pub order4_shape: bool,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Recompute both half walks and check the node ids.
    pub fn verify(&self) -> Result<bool> {
        let start = &self.nodes[0];
        let walk = |steps: &[(GenusTwoModel, SplittingPartition)]| -> Result<Option<Vec<NodeId>>> {
            let mut ids = vec![start.clone()];
            for (m, s) in steps {
                if &m.node_id()? != ids.last().unwrap() {
                    return Ok(None);
                }
                ids.push(richelot_step(m, s)?.node_id()?);
            }
            Ok(Some(ids))
        };
        let (Some(f), Some(b)) = (walk(&self.forward)?, walk(&self.backward)?) else {
            return Ok(false);
        };
        let mut nodes = f.clone();
        nodes.extend(b.iter().rev().skip(1).cloned());
        Ok(f.last() == b.last() && nodes == self.nodes)
    }
}

#[derive(Clone)]
struct Half {
    steps: Vec<(GenusTwoModel, SplittingPartition)>,
    ids: Vec<NodeId>,
    end: GenusTwoModel,
    end_dual: Option<SplittingPartition>,
    /// common pairs between each step after the first and the previous dual
    turns: Vec<usize>,
}

fn extend(h: &Half) -> Result<Vec<Half>> {
    let mut out = Vec::new();
    for s in SplittingPartition::all() {
        if Some(s) == h.end_dual {
            continue;
        }
        if let StepOutcome::Jacobian { model, dual, .. } = richelot_step(&h.end, &s)? {
            let mut next = h.clone();
            if let Some(d) = h.end_dual {
                next.turns.push(s.common_pairs(&d));
            }
            next.steps.push((h.end.clone(), s));
            next.ids.push(model.node_id()?);
            next.end = model;
            next.end_dual = Some(dual);
            out.push(next);
        }
    }
    Ok(out)
}

/// Non-backtracking closed walks of length at most `max_len` (1..=4)
/// through a Jacobian `start`, found by meeting two non-backtracking walks
/// from the start.
///
/// Reported cycles: loops (an outcome isomorphic to the start), pairs of
/// distinct kernels with isomorphic codomains, and for lengths 3 and 4
/// cycles whose vertices are pairwise non-isomorphic. Steps into products
/// are not followed.
pub fn find_cycles(start: &GenusTwoModel, max_len: usize) -> Result<Vec<Cycle>> {
    let max_len = max_len.min(4);
    let sid = start.node_id()?;
    let root = Half {
        steps: Vec::new(),
        ids: vec![sid.clone()],
        end: start.clone(),
        end_dual: None,
        turns: Vec::new(),
    };
    let mut levels = vec![vec![root]];
    for l in 1..=max_len.div_ceil(2) {
        let mut next = Vec::new();
        for h in &levels[l - 1] {
            next.extend(extend(h)?);
        }
        levels.push(next);
    }
    let mut by_end: Vec<BTreeMap<NodeId, Vec<usize>>> = Vec::new();
    for level in &levels {
        let mut m: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for (i, h) in level.iter().enumerate() {
            m.entry(h.ids.last().unwrap().clone()).or_default().push(i);
        }
        by_end.push(m);
    }
    let mut cycles = Vec::new();
    for len in 1..=max_len {
        let (l1, l2) = (len.div_ceil(2), len / 2);
        for (end, idx1) in &by_end[l1] {
            let Some(idx2) = by_end[l2].get(end) else { continue };
            for &i in idx1 {
                for &j in idx2 {
                    let (h1, h2) = (&levels[l1][i], &levels[l2][j]);
                    if l1 == l2 && i >= j {
                        continue;
                    }
                    if l2 > 0 && h1.steps[0].1 == h2.steps[0].1 {
                        continue;
                    }
                    let mut nodes = h1.ids.clone();
                    nodes.extend(h2.ids.iter().rev().skip(1).cloned());
                    let simple = {
                        let inner = &nodes[..nodes.len() - 1];
                        let mut s = inner.to_vec();
                        s.sort();
                        s.dedup();
                        s.len() == inner.len()
                    };
                    if len >= 3 && !simple {
                        continue;
                    }
                    if len == 2 && nodes[1] == sid {
                        continue;
                    }
                    let order4_shape = len == 4
                        && h1.steps[0].1.common_pairs(&h2.steps[0].1) == 1
                        && h1.turns == [1]
                        && h2.turns == [1];
                    cycles.push(Cycle {
                        nodes,
                        forward: h1.steps.clone(),
                        backward: h2.steps.clone(),
                        order4_shape,
                    });
                }
            }
        }
    }
    Ok(cycles)
}
