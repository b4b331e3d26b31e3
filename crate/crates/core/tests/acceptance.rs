//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N [...]: PASS|FAIL ...` line on stderr.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssgraph::attack::{attack, verify_certificate, AttackConfig};
use ssgraph::genus1::{curve_from_j, mitm_path, supersingular_closure, JInvariant, Parity};
use ssgraph::genus2::{
    cds_admissible, delta, product_neighbors, richelot_step, takashima_admissible, GenusTwoModel, Mobius, Root,
    SplittingPartition, StepOutcome, Vertex,
};
use ssgraph::graphwalk::{
    census, count_s1, find_cycles, hunt_from, lagrangian_count, mass_formula, mixing_bound, mixing_stats,
    start_from_seed, table_exponents, HuntConfig, WalkMode,
};
use ssgraph::{Fp2, Poly, PrimeCtx};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Run a criterion, print its verdict line, fail the test on FAIL.
fn criterion(n: u32, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) {
    let t = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(body)) {
        Ok(r) => r,
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    };
    let elapsed = t.elapsed();
    let outcome = outcome.and_then(|d| {
        if elapsed <= limit {
            Ok(d)
        } else {
            Err(format!("{d}; took {elapsed:.1?}, limit {limit:?}"))
        }
    });
    let line = match &outcome {
        Ok(d) => format!("criterion {n} [{name}]: PASS ({elapsed:.1?}) {d}"),
        Err(d) => format!("criterion {n} [{name}]: FAIL ({elapsed:.1?}) {d}"),
    };
    // written directly so the line survives output capture
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(d) = outcome {
        panic!("criterion {n} failed: {d}");
    }
}

fn ctx(p: u64) -> PrimeCtx {
    PrimeCtx::new(p).unwrap()
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

/// Supersingular j-invariants as images of the roots of the Hasse
/// polynomial sum_i C(m, i)^2 x^i, m = (p - 1)/2, under
/// j = 256 (x^2 - x + 1)^3 / (x^2 (x - 1)^2).
fn supersingular_count_hasse(p: u64) -> usize {
    let c = ctx(p);
    let m = (p - 1) / 2;
    let mut binom = c.one();
    let mut coeffs = Vec::new();
    for i in 0..=m {
        coeffs.push(binom.square());
        binom = binom * c.from_u64(m - i) * c.from_u64(i + 1).inv().unwrap();
    }
    let roots = Poly::new(c, coeffs).distinct_roots();
    let mut js: Vec<Fp2> = roots
        .iter()
        .map(|&x| {
            let num = (x.square() - x + c.one()).pow(3) * c.from_u64(256);
            let den = x.square() * (x - c.one()).square();
            num * den.inv().unwrap()
        })
        .collect();
    js.sort_by_key(|j| j.encode());
    js.dedup();
    js.len()
}

/// Lagrangian subspaces of F_l^{2g} with the standard symplectic form,
/// counted as ordered isotropic bases divided by #GL_g(F_l).
fn lagrangian_brute_force(g: usize, l: u64) -> u128 {
    let dim = 2 * g;
    let vectors: Vec<Vec<u64>> = (0..l.pow(dim as u32))
        .map(|mut n| {
            (0..dim)
                .map(|_| {
                    let d = n % l;
                    n /= l;
                    d
                })
                .collect()
        })
        .collect();
    let omega = |u: &[u64], v: &[u64]| -> u64 {
        (0..g).map(|i| u[i] * v[g + i] + l * l - u[g + i] * v[i]).sum::<u64>() % l
    };
    // span of a list of vectors, as a set of coordinate vectors
    let span = |basis: &[&Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; dim]];
        for b in basis {
            let mut next = Vec::new();
            for v in &out {
                for k in 0..l {
                    next.push(v.iter().zip(b.iter()).map(|(x, y)| (x + k * y) % l).collect());
                }
            }
            out = next;
        }
        out
    };
    fn extend<'a>(
        basis: &mut Vec<&'a Vec<u64>>,
        vectors: &'a [Vec<u64>],
        g: usize,
        omega: &dyn Fn(&[u64], &[u64]) -> u64,
        span: &dyn Fn(&[&Vec<u64>]) -> Vec<Vec<u64>>,
    ) -> u128 {
        if basis.len() == g {
            return 1;
        }
        let s = span(basis);
        let mut total = 0;
        for v in vectors {
            if s.contains(v) || basis.iter().any(|b| omega(b, v) != 0) {
                continue;
            }
            basis.push(v);
            total += extend(basis, vectors, g, omega, span);
            basis.pop();
        }
        total
    }
    let ordered = extend(&mut Vec::new(), &vectors, g, &omega, &span);
    let gl: u128 = (0..g as u32).map(|i| (l.pow(g as u32) - l.pow(i)) as u128).product();
    ordered / gl
}

#[test]
fn criterion_1_counting_identities() {
    criterion(1, "counting identities", Duration::from_secs(60), || {
        for p in [11, 13, 19, 23, 31, 47, 127] {
            let want = supersingular_count_hasse(p) as u64;
            ensure!(count_s1(p) == want, "count_s1({p}) = {} but the Hasse polynomial gives {want}", count_s1(p));
        }
        let big = supersingular_closure(JInvariant::j1728(&ctx(8191))).unwrap().len() as u64;
        ensure!(count_s1(8191) == big, "count_s1(8191) = {} but the closure has {big}", count_s1(8191));

        ensure!(lagrangian_count(1, 2) == 3, "N_1(2)");
        ensure!(lagrangian_count(2, 2) == 15, "N_2(2)");
        for (g, l) in [(2, 3), (3, 2)] {
            let want = lagrangian_brute_force(g, l);
            ensure!(
                lagrangian_count(g as u32, l) == want,
                "N_{g}({l}) = {} but enumeration gives {want}",
                lagrangian_count(g as u32, l)
            );
        }

        // reference exponent table, dimensions 1..=6
        let reference: [(Option<f64>, f64, Option<f64>, f64); 6] = [
            (None, 0.5, None, 0.25),
            (Some(1.0), 1.5, Some(0.5), 0.75),
            (Some(2.0), 3.0, Some(1.0), 1.5),
            (Some(3.0), 5.0, Some(1.5), 2.5),
            (Some(4.0), 7.5, Some(2.0), 3.75),
            (Some(5.0), 10.5, Some(2.5), 4.25),
        ];
        for (g, row) in (1..=6).zip(reference) {
            let t = table_exponents(g);
            ensure!(
                (t.alg1_classical, t.pollard, t.alg1_quantum, t.grover_bjs) == row,
                "table row g = {g}: {t:?}"
            );
        }
        Ok(format!("s1(8191) = {big}, N_2(3) = 40, N_3(2) = 135, table rows 1..6 match"))
    });
}

/// Mass as the product over i = 1, 2 of B_{2i}/(4i) (1 + (-p)^i).
fn mass_oracle(p: i128) -> Ratio<i128> {
    let b2 = Ratio::new(1, 6);
    let b4 = Ratio::new(-1, 30);
    b2 / 4 * (1 - p) * (b4 / 8) * (1 + p * p)
}

#[test]
fn criterion_2_census_oracle() {
    criterion(2, "census oracle", minutes(15), || {
        let mut summary = Vec::new();
        for p in [11u64, 19, 23] {
            let c = ctx(p);
            let start = Vertex::Jacobian(start_from_seed(&c, "0").unwrap());
            let cen = census(&start).unwrap();
            ensure!(cen.is_closed_and_regular(), "p = {p}: not closed and 15-regular");
            let bad = cen.symmetry_violations();
            ensure!(bad.is_empty(), "p = {p}: asymmetric edges {:?}", &bad[..bad.len().min(3)]);
            for (id, v) in &cen.vertices {
                ensure!(v.is_superspecial().unwrap(), "p = {p}: {id} is not superspecial");
            }
            let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap().len();
            ensure!(
                cen.product_count() == s1 * (s1 + 1) / 2,
                "p = {p}: {} products, |S1| = {s1}",
                cen.product_count()
            );
            let want = mass_oracle(p as i128);
            ensure!(cen.mass == want, "p = {p}: mass {} vs {want}", cen.mass);
            ensure!(mass_formula(2, p).unwrap() == want, "p = {p}: mass_formula disagrees");
            summary.push(format!("p={p}: {} vertices, mass {}", cen.len(), cen.mass));
        }
        Ok(summary.join("; "))
    });
}

fn median(v: &mut [u64]) -> f64 {
    v.sort();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn hunt_steps(p: u64, seeds: impl Iterator<Item = u64>) -> Result<Vec<u64>, String> {
    let start = start_from_seed(&ctx(p), "0").unwrap();
    seeds
        .map(|s| {
            let cfg = HuntConfig {
                max_steps: 1000 * p,
                ..HuntConfig::new(&s.to_string(), 1, WalkMode::Appendix)
            };
            let r = hunt_from(&start, &cfg).map_err(|e| format!("p = {p}, seed {s}: {e}"))?;
            if !r.product_node.is_product() {
                return Err(format!("seed {s} ended on {}", r.product_node));
            }
            Ok(r.steps_done)
        })
        .collect()
}

#[test]
fn criterion_3_hunt_scaling() {
    criterion(3, "hunt scaling at p = 127", minutes(10), || {
        let mut steps = hunt_steps(127, 1..=50)?;
        let med = median(&mut steps);
        let (lo, hi) = (127.0 / 50.0, 1270.0);
        ensure!(lo <= med && med <= hi, "median {med} outside [{lo}, {hi}]");
        Ok(format!("50 hunts reached products, median steps {med}"))
    });
}

#[test]
fn criterion_4_hunt_ratio() {
    criterion(4, "hunt scaling ratio 8191 vs 127", minutes(60), || {
        let mean = |v: &[u64]| v.iter().sum::<u64>() as f64 / v.len() as f64;
        let small = mean(&hunt_steps(127, 1..=40)?);
        let big = mean(&hunt_steps(8191, 1..=40)?);
        let ratio = big / small;
        ensure!((16.0..=256.0).contains(&ratio), "ratio {ratio:.1} (means {small:.1}, {big:.1})");
        Ok(format!("means {small:.1} and {big:.1} over 40 seeds each, ratio {ratio:.1}"))
    });
}

#[test]
fn criterion_5_end_to_end_attack() {
    criterion(5, "end-to-end attack", minutes(30), || {
        let mut lines = Vec::new();
        for p in [127, 8191] {
            let c = ctx(p);
            let a = start_from_seed(&c, "alice").unwrap();
            let b = start_from_seed(&c, "bob").unwrap();
            let cfg = AttackConfig {
                seed_a: "1".into(),
                seed_b: "2".into(),
                ..AttackConfig::default()
            };
            let cert = attack(&a, &b, &cfg).map_err(|e| format!("p = {p}: {e}"))?;
            let v = verify_certificate(&cert);
            ensure!(v.valid, "p = {p}: {:?}", v.diagnostics);
            ensure!(cert.start == a.node_id().unwrap() && cert.end == b.node_id().unwrap(), "endpoints");
            lines.push(format!("p={p}: {} steps verified", cert.steps.len()));
        }
        let c = ctx(127);
        let trials = 40;
        let mut ok = 0;
        for t in 0..trials {
            let a = start_from_seed(&c, &format!("target-a-{t}")).unwrap();
            let b = start_from_seed(&c, &format!("target-b-{t}")).unwrap();
            let cfg = AttackConfig {
                seed_a: format!("a{t}"),
                seed_b: format!("b{t}"),
                parity_retries: 0,
                ..AttackConfig::default()
            };
            match attack(&a, &b, &cfg) {
                Ok(cert) => {
                    ensure!(verify_certificate(&cert).valid, "trial {t}: certificate rejected");
                    ok += 1;
                }
                Err(ssgraph::Error::Bottom { .. }) => {}
                Err(e) => return Err(format!("trial {t}: {e}")),
            }
        }
        let rate = ok as f64 / trials as f64;
        let floor = 0.5 - 3.0 * (0.25f64 / trials as f64).sqrt();
        ensure!(rate >= floor, "success rate {rate} below {floor:.3}");
        lines.push(format!("no-retry success {ok}/{trials} (floor {floor:.3})"));
        Ok(lines.join("; "))
    });
}

fn random_labels(c: &PrimeCtx, rng: &mut ChaCha8Rng, with_infinity: bool) -> [Root; 6] {
    let mut v: Vec<Root> = Vec::new();
    if with_infinity {
        v.push(Root::Infinity);
    }
    while v.len() < 6 {
        let r = Root::Finite(c.random(rng));
        if !v.contains(&r) {
            v.push(r);
        }
    }
    v.try_into().unwrap()
}

fn nonzero(c: &PrimeCtx, rng: &mut ChaCha8Rng) -> Fp2 {
    loop {
        let x = c.random(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

#[test]
fn criterion_6_structural_properties() {
    criterion(6, "structural properties", minutes(5), || {
        let c = ctx(127);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);

        // Richelot involution on random steps
        let mut m = start_from_seed(&c, "0").unwrap();
        let mut involutions = 0;
        while involutions < 1000 {
            let s = SplittingPartition::all()[rng.gen_range(0..15)];
            if let StepOutcome::Jacobian { model, dual, .. } = richelot_step(&m, &s).unwrap() {
                let back = richelot_step(&model, &dual).unwrap();
                ensure!(back.node_id().unwrap() == m.node_id().unwrap(), "dual step does not return");
                involutions += 1;
                m = model;
            }
        }

        // delta = 0 exactly at product outcomes, over every census splitting
        let mut splittings = 0;
        for p in [11, 19, 23] {
            let cen = census(&Vertex::Jacobian(start_from_seed(&ctx(p), "0").unwrap())).unwrap();
            for v in cen.vertices.values() {
                let Vertex::Jacobian(m) = v else { continue };
                for s in SplittingPartition::all() {
                    let zero = delta(m, &s).unwrap().is_zero();
                    ensure!(zero == richelot_step(m, &s).unwrap().is_product(), "delta mismatch at p = {p}");
                    splittings += 1;
                }
            }
        }

        // node id invariance under Moebius maps and twists
        for trial in 0..1000 {
            let labels = random_labels(&c, &mut rng, trial % 5 == 0);
            let m1 = GenusTwoModel::from_labels(nonzero(&c, &mut rng), labels).unwrap();
            let mob = loop {
                let (a, b, cc, d) = (c.random(&mut rng), c.random(&mut rng), c.random(&mut rng), c.random(&mut rng));
                if let Some(mob) = Mobius::new(a, b, cc, d) {
                    break mob;
                }
            };
            let m2 = GenusTwoModel::from_labels(nonzero(&c, &mut rng), labels.map(|r| mob.apply(r))).unwrap();
            ensure!(m1.node_id().unwrap() == m2.node_id().unwrap(), "trial {trial}: node id changed");
        }

        for dual in SplittingPartition::all() {
            ensure!(cds_admissible(&dual).len() == 8, "CDS count at {dual}");
            ensure!(takashima_admissible(&dual).len() == 14, "non-backtracking count at {dual}");
        }

        // glue then split
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        let mut glued = 0;
        for (i, &j1) in s1.iter().enumerate() {
            for &j2 in &s1[i..] {
                for out in &product_neighbors(j1, j2).unwrap()[9..] {
                    if let StepOutcome::Jacobian { model, dual, .. } = out {
                        let back = richelot_step(model, dual).unwrap();
                        ensure!(back.is_product(), "split of a gluing is not a product");
                        ensure!(
                            back.node_id().unwrap() == Vertex::product(j1, j2).node_id().unwrap(),
                            "split of a gluing of ({j1}, {j2}) lands elsewhere"
                        );
                        glued += 1;
                    }
                }
            }
        }
        Ok(format!(
            "1000 involutions, {splittings} census splittings, 1000 invariance trials, 8/14 admissible, {glued} glue/split round trips"
        ))
    });
}

#[test]
fn criterion_7_cycle_evidence() {
    criterion(7, "cycle evidence at p = 127", minutes(5), || {
        let c = ctx(127);
        let start = start_from_seed(&c, "cycles").unwrap();
        let cycles = find_cycles(&start, 4).unwrap();
        let fours: Vec<_> = cycles.iter().filter(|cy| cy.len() == 4).collect();
        ensure!(!fours.is_empty(), "no 4-cycle found");
        let shaped: Vec<_> = fours.iter().filter(|cy| cy.order4_shape).collect();
        ensure!(!shaped.is_empty(), "no 4-cycle of the order-4 shape");
        for cy in &fours {
            ensure!(cy.verify().unwrap(), "4-cycle fails to recompute");
        }
        // the order-4 shape needs a turn sharing one pair with the dual
        for cy in &shaped {
            let (m0, s0) = &cy.forward[0];
            let dual = richelot_step(m0, s0).unwrap().dual().unwrap();
            ensure!(cy.forward[1].1.common_pairs(&dual) == 1, "shape flag without a one-pair turn");
        }

        // CDS walks never turn that way, so contain no such cycle
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut turns, mut closed) = (0, 0);
        for w in 0..200 {
            let mut model = start.clone();
            let mut dual = SplittingPartition::all()[w % 15];
            let mut ids = vec![model.node_id().unwrap()];
            let mut shapes = Vec::new();
            for _ in 0..12 {
                let s = cds_admissible(&dual)[rng.gen_range(0..8)];
                shapes.push(s.common_pairs(&dual));
                match richelot_step(&model, &s).unwrap() {
                    StepOutcome::Jacobian { model: next, dual: d, .. } => {
                        model = next;
                        dual = d;
                        ids.push(model.node_id().unwrap());
                    }
                    StepOutcome::Product { .. } => break,
                }
            }
            turns += shapes.len();
            ensure!(shapes.iter().all(|&k| k == 0), "a CDS step shares a pair with the dual");
            for win in ids.windows(5) {
                if win[0] == win[4] {
                    closed += 1;
                }
            }
        }
        Ok(format!(
            "{} 4-cycles ({} of order-4 shape); 200 CDS walks, {turns} turns all pair-disjoint from the dual, {closed} closed 4-windows, none of order-4 shape",
            fours.len(),
            shaped.len()
        ))
    });
}

#[test]
fn criterion_8_mixing_report() {
    criterion(8, "mixing report at p = 11", minutes(5), || {
        let c = ctx(11);
        let start = Vertex::Jacobian(start_from_seed(&c, "0").unwrap());
        let cen = census(&start).unwrap();
        let r = mixing_stats(&cen, &start.node_id().unwrap(), 20, 10_000, 1).unwrap();
        ensure!(r.bound == mixing_bound(20), "bound");
        // sampling sanity: the empirical law matches the walk's limit
        ensure!(
            r.max_dev_stationary <= 5.0 * r.noise,
            "deviation from the 1/#Aut law {:.3e} exceeds 5 noise units {:.3e}",
            r.max_dev_stationary,
            r.noise
        );
        let verdict = if r.max_dev_uniform < r.bound { "below" } else { "above" };
        Ok(format!(
            "max deviation from uniform {:.3e} {verdict} bound {:.3e}; from stationary {:.3e} (noise {:.3e}); {} warning(s): {}",
            r.max_dev_uniform,
            r.bound,
            r.max_dev_stationary,
            r.noise,
            r.warnings.len(),
            r.warnings.join(" | ")
        ))
    });
}

#[test]
fn criterion_9_elliptic_layer() {
    criterion(9, "elliptic layer at p = 8191", minutes(5), || {
        let c = ctx(8191);
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut lens = Vec::new();
        for _ in 0..20 {
            let (a, b) = (s1[rng.gen_range(0..s1.len())], s1[rng.gen_range(0..s1.len())]);
            ensure!(curve_from_j(a).is_supersingular() && curve_from_j(b).is_supersingular(), "endpoint");
            let path = mitm_path(a, b, None, 64).map_err(|e| e.to_string())?;
            path.verify().map_err(|e| e.to_string())?;
            ensure!(path.start() == a && path.end() == b, "endpoints");
            for parity in [Parity::Even, Parity::Odd] {
                let q = mitm_path(a, b, Some(parity), 64).map_err(|e| e.to_string())?;
                q.verify().map_err(|e| e.to_string())?;
                ensure!(Parity::of(q.len()) == parity, "asked {parity:?}, got length {}", q.len());
                ensure!(q.start() == a && q.end() == b, "endpoints");
            }
            lens.push(path.len());
        }
        Ok(format!("20 pairs, path lengths {lens:?}, both parities honoured"))
    });
}
