use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::walk::{start_from_seed, walk_from, OnProduct, TakenStep, WalkChain, WalkMode, WalkRecord};
use crate::error::{Error, Result};
use crate::field::PrimeCtx;
use crate::genus2::{richelot_step, GenusTwoModel, NodeId, SplittingPartition, StepOutcome, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntConfig {
    pub seed: String,
    pub workers: usize,
    pub mode: WalkMode,
    /// Stop with an error once this many steps have been taken in total.
    pub max_steps: u64,
}

impl HuntConfig {
    pub fn new(seed: &str, workers: usize, mode: WalkMode) -> HuntConfig {
        HuntConfig {
            seed: seed.to_string(),
            workers,
            mode,
            max_steps: u64::MAX,
        }
    }

    /// Chain seed of worker `w` (1-based).
    pub fn worker_seed(&self, w: usize) -> String {
        format!("{}-{}", self.seed, w)
    }
}

/// One step of the path to the product: the domain model and the kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiStep {
    pub model: Vec<String>,
    pub splitting: SplittingPartition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HuntReport {
    pub p: u64,
    pub seed: String,
    pub workers: usize,
    /// Walks started by all workers, through the round in which the
    /// product was found.
    pub walks_done: u64,
    /// Digits processed by all workers through that round.
    pub steps_done: u64,
    /// 1-based index of the winning worker.
    pub finder: usize,
    /// The winning worker's own counters.
    pub finder_walks: u64,
    pub finder_steps: u64,
    pub product_node: NodeId,
    pub psi: Vec<PsiStep>,
    #[serde(skip)]
    pub path: Vec<TakenStep>,
    #[serde(skip)]
    pub product: Vertex,
}

/// Hunt for a product vertex from `start` (a Jacobian).
///
/// Worker w in 1..=workers drives its own SHA-1 chain seeded with
/// `seed-w`; every walk restarts at `start` and stops at the first product.
/// Workers proceed in lockstep rounds of one walk each, so the outcome does
/// not depend on scheduling: the winner is the lowest-indexed worker that
/// succeeds in the earliest successful round, and the counters cover every
/// walk of the rounds up to and including that one.
pub fn hunt_from(start: &GenusTwoModel, cfg: &HuntConfig) -> Result<HuntReport> {
    if cfg.workers == 0 {
        return Err(Error::InvalidInput("workers must be at least 1".into()));
    }
    let mut chains: Vec<WalkChain> = (1..=cfg.workers).map(|w| WalkChain::new(&cfg.worker_seed(w))).collect();
    let mut worker_steps = vec![0u64; cfg.workers];
    let walks = AtomicU64::new(0);
    let steps = AtomicU64::new(0);
    let mut round = 0u64;
    loop {
        let done = steps.load(Ordering::Relaxed);
        if done >= cfg.max_steps {
            return Err(Error::BudgetExhausted {
                walks: walks.load(Ordering::Relaxed),
                steps: done,
            });
        }
        round += 1;
        let records: Vec<Result<WalkRecord>> = chains
            .par_iter_mut()
            .map(|chain| {
                let digits = chain.advance();
                let rec = walk_from(start, None, &digits, cfg.mode, OnProduct::Stop)?;
                walks.fetch_add(1, Ordering::Relaxed);
                steps.fetch_add(rec.digits_consumed as u64, Ordering::Relaxed);
                Ok(rec)
            })
            .collect();
        let records = records.into_iter().collect::<Result<Vec<_>>>()?;
        for (w, rec) in records.iter().enumerate() {
            worker_steps[w] += rec.digits_consumed as u64;
        }
        if let Some(w) = records.iter().position(|r| r.product_at.is_some()) {
            let rec = records.into_iter().nth(w).expect("winner");
            let product_node = rec.end.node_id()?;
            return Ok(HuntReport {
                p: start.ctx().p(),
                seed: cfg.seed.clone(),
                workers: cfg.workers,
                walks_done: walks.load(Ordering::Relaxed),
                steps_done: steps.load(Ordering::Relaxed),
                finder: w + 1,
                finder_walks: round,
                finder_steps: worker_steps[w],
                product_node,
                psi: rec
                    .steps
                    .iter()
                    .map(|s| PsiStep {
                        model: s.from.encode_coeffs(),
                        splitting: s.splitting,
                    })
                    .collect(),
                path: rec.steps,
                product: rec.end,
            });
        }
    }
}

/// Hunt from the surface reached by the seed-"0" walk from the base curve.
pub fn hunt_product(p: u64, seed: &str, workers: usize, mode: WalkMode) -> Result<HuntReport> {
    let ctx = PrimeCtx::new(p)?;
    let start = start_from_seed(&ctx, "0")?;
    hunt_from(&start, &HuntConfig::new(seed, workers, mode))
}

/// Replay serialized psi steps from `start`; returns the node reached.
pub fn replay_psi(start: &GenusTwoModel, psi: &[PsiStep]) -> Result<NodeId> {
    let ctx = start.ctx();
    let mut current = Vertex::Jacobian(start.clone());
    for (i, step) in psi.iter().enumerate() {
        let model = GenusTwoModel::decode_coeffs(&ctx, &step.model)?;
        if current.node_id()? != model.node_id()? {
            return Err(Error::InconsistentWitness(format!("psi step {i} does not start where the last ended")));
        }
        current = match richelot_step(&model, &step.splitting)? {
            StepOutcome::Jacobian { model, .. } => Vertex::Jacobian(model),
            StepOutcome::Product { j1, j2 } => Vertex::product(j1, j2),
        };
    }
    current.node_id()
}
