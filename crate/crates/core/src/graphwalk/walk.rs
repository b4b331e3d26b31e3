use serde::{Deserialize, Serialize};
use sha1::{Digest, Sha1};

use crate::error::{Error, Result};
use crate::field::PrimeCtx;
use crate::genus2::{
    default_start, richelot_step, takashima_admissible, GenusTwoModel, SplittingPartition, StepOutcome, Vertex,
};

pub fn sha1_hex(s: &str) -> String {
    hex::encode(Sha1::digest(s.as_bytes()))
}

/// A chain of SHA-1 digests: each walk is driven by the digest of the
/// previous state, rendered as lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkChain {
    state: String,
    origin: String,
}

impl WalkChain {
    pub fn new(seed: &str) -> WalkChain {
        WalkChain {
            state: seed.to_string(),
            origin: seed.to_string(),
        }
    }

    pub fn state(&self) -> &str {
        &self.state
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Digits of the next walk (the nonzero hex digits of SHA-1 of the
    /// current state, in order) and the advanced chain.
    pub fn next_walk(&self) -> (Vec<u8>, WalkChain) {
        let digest = sha1_hex(&self.state);
        let digits = digest
            .chars()
            .map(|c| c.to_digit(16).expect("hex digit") as u8)
            .filter(|&d| d != 0)
            .collect();
        let next = WalkChain {
            state: digest,
            origin: self.origin.clone(),
        };
        (digits, next)
    }

    /// In-place form of [`WalkChain::next_walk`].
    pub fn advance(&mut self) -> Vec<u8> {
        let (digits, next) = self.next_walk();
        *self = next;
        digits
    }
}

/// How a digit in 1..=15 selects the next splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    /// Splitting number digit - 1 among all 15; backtracking allowed.
    Appendix,
    /// Splitting number (digit - 1) mod 14 among the 14 that avoid the
    /// dual of the previous step (the first step of a walk uses all 15).
    Nonbacktracking,
}

impl std::str::FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<WalkMode> {
        match s {
            "appendix" => Ok(WalkMode::Appendix),
            "nbt" | "nonbacktracking" => Ok(WalkMode::Nonbacktracking),
            _ => Err(Error::InvalidInput(format!("walk mode {s:?}"))),
        }
    }
}

/// What to do when a step would land on a product vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnProduct {
    /// Take the step and end the walk there.
    Stop,
    /// Refuse the step and stay put.
    Skip,
}

/// One step taken by a walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TakenStep {
    pub from: GenusTwoModel,
    pub splitting: SplittingPartition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkRecord {
    pub steps: Vec<TakenStep>,
    pub end: Vertex,
    /// Kernel of the dual of the last step, when the walk ends on a Jacobian.
    pub end_dual: Option<SplittingPartition>,
    /// Digit position at which a product was reached (stop mode).
    pub product_at: Option<usize>,
    /// Digits processed, including refused steps and the final product step.
    pub digits_consumed: usize,
}

fn select(mode: WalkMode, digit: u8, dual: Option<SplittingPartition>) -> SplittingPartition {
    let d = (digit - 1) as usize;
    match (mode, dual) {
        (WalkMode::Nonbacktracking, Some(dual)) => takashima_admissible(&dual)[d % 14],
        _ => SplittingPartition::all()[d],
    }
}

/// Walk from a Jacobian, one step per digit (each in 1..=15).
pub fn walk_from(
    start: &GenusTwoModel,
    start_dual: Option<SplittingPartition>,
    digits: &[u8],
    mode: WalkMode,
    on_product: OnProduct,
) -> Result<WalkRecord> {
    let mut model = start.clone();
    let mut dual = start_dual;
    let mut steps = Vec::new();
    for (i, &digit) in digits.iter().enumerate() {
        if !(1..=15).contains(&digit) {
            return Err(Error::InvalidInput(format!("walk digit {digit}")));
        }
        let s = select(mode, digit, dual);
        match richelot_step(&model, &s)? {
            StepOutcome::Jacobian { model: next, dual: d, .. } => {
                steps.push(TakenStep {
                    from: std::mem::replace(&mut model, next),
                    splitting: s,
                });
                dual = Some(d);
            }
            StepOutcome::Product { j1, j2 } => {
                if on_product == OnProduct::Stop {
                    steps.push(TakenStep { from: model, splitting: s });
                    return Ok(WalkRecord {
                        steps,
                        end: Vertex::product(j1, j2),
                        end_dual: None,
                        product_at: Some(i),
                        digits_consumed: i + 1,
                    });
                }
            }
        }
    }
    Ok(WalkRecord {
        steps,
        end: Vertex::Jacobian(model),
        end_dual: dual,
        product_at: None,
        digits_consumed: digits.len(),
    })
}

/// The fixed superspecial curve walks start from: y^2 = x^5 + x when
/// p = 5, 7 (mod 8), where it is superspecial; otherwise the default
/// gluing of two j = 1728 curves (p = 3 mod 8).
pub fn base_curve(ctx: &PrimeCtx) -> Result<GenusTwoModel> {
    match ctx.p() % 8 {
        5 | 7 => Ok(GenusTwoModel::x5_plus_x(*ctx)),
        _ => default_start(ctx),
    }
}

/// A target surface: one walk driven by SHA-1(seed) from [`base_curve`],
/// refusing steps into products.
pub fn start_from_seed(ctx: &PrimeCtx, seed: &str) -> Result<GenusTwoModel> {
    let base = base_curve(ctx)?;
    let (digits, _) = WalkChain::new(seed).next_walk();
    match walk_from(&base, None, &digits, WalkMode::Appendix, OnProduct::Skip)?.end {
        Vertex::Jacobian(m) => Ok(m),
        Vertex::Product(..) => unreachable!("skip mode never ends on a product"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus2::is_superspecial;

    #[test]
    fn chain_digits() {
        let c = WalkChain::new("0");
        let (digits, next) = c.next_walk();
        // SHA-1("0")
        assert_eq!(next.state(), "b6589fc6ab0dc82cf12099d1c2d40ab994e8410c");
        let expected: Vec<u8> = "b6589fc6ab0dc82cf12099d1c2d40ab994e8410c"
            .chars()
            .filter(|&ch| ch != '0')
            .map(|ch| ch.to_digit(16).unwrap() as u8)
            .collect();
        assert_eq!(digits, expected);
        assert!(digits.len() <= 40);
        assert_eq!(next.origin(), "0");
        let (d2, n2) = next.next_walk();
        assert_eq!(n2.state(), sha1_hex("b6589fc6ab0dc82cf12099d1c2d40ab994e8410c"));
        assert_eq!((d2, n2), next.next_walk());
    }

    #[test]
    fn empty_digit_stream_takes_no_steps() {
        let c = PrimeCtx::new(127).unwrap();
        let m = GenusTwoModel::x5_plus_x(c);
        let r = walk_from(&m, None, &[], WalkMode::Appendix, OnProduct::Stop).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.end, Vertex::Jacobian(m));
    }

    #[test]
    fn stop_mode_halts_at_first_product() {
        let c = PrimeCtx::new(127).unwrap();
        let m = GenusTwoModel::x5_plus_x(c);
        let outs = crate::genus2::jac_neighbors(&m).unwrap();
        let first_product = outs.iter().position(|o| o.is_product()).unwrap();
        let first_jac = outs.iter().position(|o| !o.is_product()).unwrap();
        let digits = [first_jac as u8 + 1, 3, 5, 1];
        let skip = walk_from(&m, None, &digits, WalkMode::Appendix, OnProduct::Skip).unwrap();
        assert!(skip.product_at.is_none());
        let digits = [first_product as u8 + 1, 3, 5];
        let stop = walk_from(&m, None, &digits, WalkMode::Appendix, OnProduct::Stop).unwrap();
        assert_eq!(stop.product_at, Some(0));
        assert_eq!(stop.digits_consumed, 1);
        assert!(stop.end.is_product());
        let skip = walk_from(&m, None, &digits[..1], WalkMode::Appendix, OnProduct::Skip).unwrap();
        assert!(skip.steps.is_empty());
    }

    #[test]
    fn nonbacktracking_never_takes_the_dual() {
        let c = PrimeCtx::new(127).unwrap();
        let m = base_curve(&c).unwrap();
        let (digits, _) = WalkChain::new("nbt").next_walk();
        let r = walk_from(&m, None, &digits, WalkMode::Nonbacktracking, OnProduct::Skip).unwrap();
        for w in r.steps.windows(2) {
            let StepOutcome::Jacobian { dual, .. } = richelot_step(&w[0].from, &w[0].splitting).unwrap() else {
                panic!()
            };
            assert_ne!(w[1].splitting, dual);
        }
    }

    #[test]
    fn base_curves_are_superspecial() {
        for p in [11, 19, 23, 29, 31, 37, 43, 47, 53, 59, 61] {
            let c = PrimeCtx::new(p).unwrap();
            if p % 8 == 1 {
                continue;
            }
            assert!(is_superspecial(&base_curve(&c).unwrap()).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn seeded_start_is_deterministic() {
        let c = PrimeCtx::new(127).unwrap();
        let a = start_from_seed(&c, "0").unwrap();
        assert_eq!(a, start_from_seed(&c, "0").unwrap());
        assert!(is_superspecial(&a).unwrap());
    }
}
