//! `ssg`: command-line driver for the superspecial isogeny graph library.
//!
//! Every subcommand prints JSON to stdout (or to `--out`). Exit codes:
//! 0 success, 1 certificate rejected, 2 invalid input, 3 parity failure
//! (bottom), 4 budget exhausted, 5 other errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssgraph::attack::{attack, verify_certificate_json, AttackConfig};
use ssgraph::genus1::{cgl_hash, default_supersingular_j, neighbors_j, CglConstants};
use ssgraph::genus2::{cds_hash, default_start, CdsDigest, GenusTwoModel, SplittingPartition, Vertex};
use ssgraph::graphwalk::{
    base_curve, census, count_s1, find_cycles, hunt_from, mass_formula, mixing_stats, start_from_seed,
    table_exponents, HuntConfig, WalkMode,
};
use ssgraph::{Error, PrimeCtx};

const EXIT_REJECTED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BOTTOM: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_OTHER: u8 = 5;

#[derive(Parser)]
#[command(name = "ssg", version, about = "Superspecial (2,2)-isogeny graphs: census, hunts, attacks, certificates")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    /// y^2 = x^5 + x when p = 5, 7 mod 8, else `glue`.
    Auto,
    /// First Jacobian glued from two j = 1728 curves (p = 3 mod 4).
    Glue,
    /// y^2 = x^5 + x.
    X5,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Appendix,
    Nbt,
}

impl From<Mode> for WalkMode {
    fn from(m: Mode) -> WalkMode {
        match m {
            Mode::Appendix => WalkMode::Appendix,
            Mode::Nbt => WalkMode::Nonbacktracking,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HashKind {
    Cgl,
    Cds,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the graph component of the base surface (p <= 50).
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "auto")]
        base: Base,
        /// Include the vertex list.
        #[arg(long)]
        vertices: bool,
    },
    /// Walk from a seeded surface until a product is hit.
    Hunt {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "1")]
        seed: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "appendix")]
        mode: Mode,
        /// Seed of the walk from the base surface that picks the start.
        #[arg(long, default_value = "0")]
        start_seed: String,
        #[arg(long, env = "SSG_MAX_STEPS", default_value_t = u64::MAX)]
        max_steps: u64,
    },
    /// Find a walk between the surfaces picked by two seeds and emit a certificate.
    Attack {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed_a: String,
        #[arg(long)]
        seed_b: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "appendix")]
        mode: Mode,
        #[arg(long, env = "SSG_MAX_STEPS", default_value_t = 1 << 32)]
        max_steps: u64,
        #[arg(long, env = "SSG_PARITY_RETRIES", default_value_t = 2)]
        parity_retries: usize,
        #[arg(long, env = "SSG_MITM_MAX_LEN", default_value_t = 64)]
        mitm_max_len: usize,
    },
    /// Check a certificate.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Hash a hex message by walking.
    Hash {
        #[arg(value_enum)]
        kind: HashKind,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        msg: String,
    },
    /// Short non-backtracking cycles through a seeded surface.
    Cycles {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "cycles")]
        seed: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Cycles listed in full (the counts cover all).
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Attack cost exponents for dimensions 1..=gmax.
    Table {
        #[arg(long, default_value_t = 6)]
        gmax: u32,
    },
    /// Endpoint distribution of random walks against the expansion bound.
    Mix {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        len: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "auto")]
        base: Base,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Bottom { .. } => EXIT_BOTTOM,
            Error::BudgetExhausted { .. } | Error::PathNotFound(_) | Error::CensusBudget(_) => EXIT_BUDGET,
            Error::InvalidPrime(_)
            | Error::Decode(_)
            | Error::InvalidInput(_)
            | Error::NoDefaultStart(_)
            | Error::PrimeTooLarge(_)
            | Error::Unsupported(_)
            | Error::InvalidSplitting(_)
            | Error::InvalidAntiIsometry(_)
            | Error::Certificate(_) => EXIT_INVALID,
            _ => EXIT_OTHER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn base_model(ctx: &PrimeCtx, base: Base) -> Result<GenusTwoModel, Failure> {
    Ok(match base {
        Base::Auto => base_curve(ctx)?,
        Base::Glue => default_start(ctx)?,
        Base::X5 => GenusTwoModel::x5_plus_x(*ctx),
    })
}

fn hex_bits(msg: &str) -> Result<Vec<bool>, Failure> {
    let bytes = hex::decode(msg).map_err(|e| invalid(format!("message is not hex: {e}")))?;
    Ok(bytes
        .iter()
        .flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
        .collect())
}

/// Result JSON and whether it reports success.
fn run(cmd: Cmd) -> Result<(Value, bool), Failure> {
    Ok(match cmd {
        Cmd::Census { p, base, vertices } => {
            let ctx = PrimeCtx::new(p)?;
            let c = census(&Vertex::Jacobian(base_model(&ctx, base)?))?;
            let s1 = count_s1(p) as usize;
            let superspecial = c
                .vertices
                .values()
                .map(|v| v.is_superspecial())
                .collect::<ssgraph::Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            let mut out = json!({
                "p": p,
                "vertices": c.len(),
                "jacobians": c.jacobian_count(),
                "products": c.product_count(),
                "expected_products": s1 * (s1 + 1) / 2,
                "mass": c.mass.to_string(),
                "mass_formula": mass_formula(2, p)?.to_string(),
                "closed_and_15_regular": c.is_closed_and_regular(),
                "symmetry_violations": c.symmetry_violations().len(),
                "all_superspecial": superspecial,
            });
            if vertices {
                let list: BTreeMap<_, _> = c.automorphisms.iter().map(|(id, a)| (id.to_string(), *a)).collect();
                out["automorphisms"] = json!(list);
            }
            (out, true)
        }
        Cmd::Hunt {
            p,
            seed,
            workers,
            mode,
            start_seed,
            max_steps,
        } => {
            let ctx = PrimeCtx::new(p)?;
            let start = start_from_seed(&ctx, &start_seed)?;
            let cfg = HuntConfig {
                max_steps,
                ..HuntConfig::new(&seed, workers, mode.into())
            };
            let report = hunt_from(&start, &cfg)?;
            (serde_json::to_value(report).expect("report serializes"), true)
        }
        Cmd::Attack {
            p,
            seed_a,
            seed_b,
            workers,
            mode,
            max_steps,
            parity_retries,
            mitm_max_len,
        } => {
            let ctx = PrimeCtx::new(p)?;
            let a = start_from_seed(&ctx, &seed_a)?;
            let b = start_from_seed(&ctx, &seed_b)?;
            let cfg = AttackConfig {
                seed_a,
                seed_b,
                workers,
                mode: mode.into(),
                max_steps,
                parity_retries,
                mitm_max_len,
            };
            let cert = attack(&a, &b, &cfg)?;
            eprintln!(
                "walk of {} steps ({} + {} + {}), a = {}, e = {}",
                cert.steps.len(),
                cert.meta.psi_len,
                cert.meta.pi_len,
                cert.meta.psi_prime_len,
                cert.meta.a,
                cert.meta.e
            );
            (serde_json::to_value(cert).expect("certificate serializes"), true)
        }
        Cmd::Verify { cert } => {
            let text = std::fs::read_to_string(&cert).map_err(|e| invalid(format!("{}: {e}", cert.display())))?;
            let v = verify_certificate_json(&text);
            for d in &v.diagnostics {
                match d.step {
                    Some(i) => eprintln!("step {i}: {}", d.message),
                    None => eprintln!("{}", d.message),
                }
            }
            (serde_json::to_value(&v).expect("verdict serializes"), v.valid)
        }
        Cmd::Hash { kind, p, msg } => {
            let ctx = PrimeCtx::new(p)?;
            let bits = hex_bits(&msg)?;
            match kind {
                HashKind::Cgl => {
                    let j0 = default_supersingular_j(&ctx)?;
                    let prev = neighbors_j(j0)?[0].0;
                    let (j, digest) = cgl_hash(j0, prev, &bits, CglConstants::default())?;
                    (json!({"p": p, "kind": "cgl", "bits": bits.len(), "j": j.encode(), "digest": digest}), true)
                }
                HashKind::Cds => {
                    // three bits per base-8 digit, trailing bits dropped
                    let digits: Vec<u8> = bits
                        .chunks_exact(3)
                        .map(|c| c.iter().fold(0u8, |acc, &b| acc << 1 | b as u8))
                        .collect();
                    let start = start_from_seed(&ctx, "0")?;
                    let out = cds_hash(&start, SplittingPartition::all()[0], &digits)?;
                    let (node, failure) = match out {
                        CdsDigest::Node(id) => (id, Value::Null),
                        CdsDigest::ProductFailure { step, node } => (node, json!(step)),
                    };
                    (
                        json!({"p": p, "kind": "cds", "digits": digits.len(), "node": node, "product_at_step": failure}),
                        true,
                    )
                }
            }
        }
        Cmd::Cycles {
            p,
            seed,
            max_len,
            limit,
        } => {
            let ctx = PrimeCtx::new(p)?;
            if !(1..=4).contains(&max_len) {
                return Err(invalid("max-len must be in 1..=4"));
            }
            let start = start_from_seed(&ctx, &seed)?;
            let cycles = find_cycles(&start, max_len)?;
            let mut by_len = BTreeMap::new();
            for c in &cycles {
                *by_len.entry(c.len().to_string()).or_insert(0usize) += 1;
            }
            let listed: Vec<Value> = cycles
                .iter()
                .take(limit)
                .map(|c| json!({"len": c.len(), "order4_shape": c.order4_shape, "nodes": c.nodes}))
                .collect();
            (
                json!({
                    "p": p,
                    "start": start.node_id()?,
                    "counts": by_len,
                    "order4_shaped": cycles.iter().filter(|c| c.order4_shape).count(),
                    "cycles": listed,
                }),
                true,
            )
        }
        Cmd::Table { gmax } => {
            if gmax == 0 {
                return Err(invalid("gmax must be at least 1"));
            }
            let rows: Vec<_> = (1..=gmax).map(table_exponents).collect();
            (json!(rows), true)
        }
        Cmd::Mix {
            p,
            len,
            trials,
            seed,
            base,
        } => {
            let ctx = PrimeCtx::new(p)?;
            if trials == 0 {
                return Err(invalid("trials must be positive"));
            }
            let start = Vertex::Jacobian(base_model(&ctx, base)?);
            let c = census(&start)?;
            let report = mixing_stats(&c, &start.node_id()?, len, trials, seed)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            (serde_json::to_value(report).expect("report serializes"), true)
        }
    })
}

fn emit(value: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json");
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Failure {
            code: EXIT_OTHER,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.cmd).and_then(|(value, ok)| emit(&value, cli.out.as_ref()).map(|()| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_REJECTED),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
