//! One PASS/FAIL line per acceptance criterion. Exit status is non-zero if
//! any criterion fails. Tolerances and limits are fixed below.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use jumpga::diversity::{
    max_disjoint_pairs, max_distance, snapshot, structural_check_add, without_slot,
};
use jumpga::engine::{run_batch, GaConfig};
use jumpga::genotype::hamming;
use jumpga::harness::presets::{Experiment, ExperimentPreset};
use jumpga::harness::table::ResultTable;
use jumpga::harness::validate::{
    amplification_row, coefficient_floor_ratio, improvement_rows, iteration_matrix, iteration_rows,
    median_row, ruin_rows,
};
use jumpga::harness::Settings;
use jumpga::{jump_fitness, FitnessSpec, Genotype, PairSelector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const C1_LIMIT: Duration = Duration::from_secs(10);
const C2_LIMIT: Duration = Duration::from_secs(60);
const C4_LIMIT: Duration = Duration::from_secs(120);
const C5_LIMIT: Duration = Duration::from_secs(600);
const C6_LIMIT: Duration = Duration::from_secs(300);
const C7_LIMIT: Duration = Duration::from_secs(60);
const C8_LIMIT: Duration = Duration::from_secs(1800);
const C9_LIMIT: Duration = Duration::from_secs(600);

const RUIN_TOLERANCE: f64 = 0.01;
const MC_TRIALS: u64 = 100_000;
const SEPARATION_RATIO: f64 = 0.2;
const HILL_CLIMB_RATIO: f64 = 8.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    outcome(
        o.pass && in_time,
        format!(
            "{} [{:.1}s, limit {}s]",
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

fn reference_jump(bits: &[bool], k: usize) -> u64 {
    let n = bits.len();
    let ones = bits.iter().filter(|&&b| b).count();
    if ones == n || ones + k <= n {
        (ones + k) as u64
    } else {
        (n - ones) as u64
    }
}

fn criterion_1() -> Outcome {
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for n in 1..=12usize {
        for mask in 0u32..(1 << n) {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let x = Genotype::from_bits(&bits).unwrap();
            for k in 1..=n {
                let spec = FitnessSpec::new(n, k).unwrap();
                checked += 1;
                if jump_fitness(&x, &spec).unwrap().0 != reference_jump(&bits, k) {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches over {checked} (x, k) pairs"),
    )
}

/// Largest matching by trying every matching.
fn brute_force_matching(adj: &[Vec<bool>], used: &mut [bool], from: usize) -> usize {
    let mu = adj.len();
    let Some(i) = (from..mu).find(|&i| !used[i]) else {
        return 0;
    };
    used[i] = true;
    let mut best = brute_force_matching(adj, used, i + 1);
    for j in i + 1..mu {
        if !used[j] && adj[i][j] {
            used[j] = true;
            best = best.max(1 + brute_force_matching(adj, used, i + 1));
            used[j] = false;
        }
    }
    used[i] = false;
    best
}

fn random_population(rng: &mut ChaCha8Rng, n: usize, mu: usize) -> Vec<Genotype> {
    (0..mu).map(|_| Genotype::random(n, rng).unwrap()).collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let mu = rng.random_range(2..=10);
        let slots = random_population(&mut rng, n, mu);
        let d = max_distance(&slots).unwrap();
        let brute = if d == 0 {
            0
        } else {
            let adj: Vec<Vec<bool>> = slots
                .iter()
                .map(|a| slots.iter().map(|b| hamming(a, b).unwrap() == d).collect())
                .collect();
            brute_force_matching(&adj, &mut vec![false; mu], 0)
        };
        if max_disjoint_pairs(&slots).unwrap() != brute {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches over 1000 populations"),
    )
}

/// Draws random populations until `want` satisfy `accept`, then counts those
/// for which `holds` fails.
fn structural_property(
    rng: &mut ChaCha8Rng,
    want: usize,
    accept: impl Fn(&[Genotype]) -> bool,
    holds: impl Fn(&[Genotype], &mut ChaCha8Rng) -> bool,
) -> (usize, usize) {
    let (mut seen, mut violations, mut draws) = (0, 0, 0);
    while seen < want && draws < 200 * want {
        draws += 1;
        let n = rng.random_range(2..=12);
        let mu = rng.random_range(2..=10);
        let slots = random_population(rng, n, mu);
        if !accept(&slots) {
            continue;
        }
        seen += 1;
        if !holds(&slots, rng) {
            violations += 1;
        }
    }
    (seen, violations)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut parts = Vec::new();
    let mut pass = true;
    let mut record = |name: &str, seen: usize, violations: usize| {
        pass &= seen == 1000 && violations == 0;
        parts.push(format!("{name} {violations}/{seen}"));
    };

    // Unique max pair: 0^n and 1^n, every other member with 1..n/2 ones.
    let mut violations = 0;
    for _ in 0..1000 {
        let n = rng.random_range(4..=16);
        let mu = rng.random_range(2..=10);
        let mut slots = vec![Genotype::zeros(n).unwrap(), Genotype::ones(n).unwrap()];
        while slots.len() < mu {
            let ones = rng.random_range(1..n.div_ceil(2));
            slots.push(Genotype::random_with_ones(n, ones, &mut rng).unwrap());
        }
        let s = snapshot(&slots).unwrap();
        if s.max_pair_count != 1 || s.m != 1 {
            violations += 1;
        }
    }
    record("unique-pair", 1000, violations);

    let (seen, violations) = structural_property(
        &mut rng,
        1000,
        |_| true,
        |slots, _| {
            let s = snapshot(slots).unwrap();
            s.m <= slots.len() / 2
        },
    );
    record("m<=mu/2", seen, violations);

    let (seen, violations) = structural_property(
        &mut rng,
        1000,
        |_| true,
        |slots, rng| {
            let x = Genotype::random(slots[0].len(), rng).unwrap();
            structural_check_add(slots, &x).unwrap().holds
        },
    );
    record("add", seen, violations);

    let (seen, violations) = structural_property(
        &mut rng,
        1000,
        |slots| {
            let s = snapshot(slots).unwrap();
            s.d > 0 && s.m == 1
        },
        |slots, _| {
            let matrix = jumpga::DistanceMatrix::new(slots).unwrap();
            let d = matrix.max_distance();
            let pairs = matrix.max_disjoint_pair_set();
            let (a, b) = pairs[0];
            (0..slots.len())
                .filter(|&i| i != a && i != b)
                .all(|i| max_distance(&without_slot(slots, i).unwrap()).unwrap() == d)
        },
    );
    record("m=1 removal", seen, violations);

    let (seen, violations) = structural_property(
        &mut rng,
        1000,
        |slots| snapshot(slots).unwrap().m > 1,
        |slots, _| {
            let matrix = jumpga::DistanceMatrix::new(slots).unwrap();
            let s = matrix.snapshot();
            let pairs = matrix.max_disjoint_pair_set();
            let mut members: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            members.sort_unstable();
            let subset: Vec<Genotype> = members.iter().map(|&i| slots[i].clone()).collect();
            let sub = snapshot(&subset).unwrap();
            let subset_ok = subset.len() == 2 * s.m && sub.d == s.d && sub.m == s.m;
            let removal_ok = (0..slots.len())
                .filter(|i| members.binary_search(i).is_err())
                .all(|i| snapshot(&without_slot(slots, i).unwrap()).unwrap().m == s.m);
            subset_ok && removal_ok
        },
    );
    record("m>1 subset", seen, violations);

    outcome(pass, parts.join(", "))
}

fn criterion_4() -> Outcome {
    let ruin = ruin_rows(MC_TRIALS, SEED).unwrap();
    let worst_ruin = ruin
        .iter()
        .map(|r| (r.observed - r.bound).abs())
        .fold(0.0f64, f64::max);
    let ruin_ok = ruin.iter().all(|r| r.pass) && worst_ruin <= RUIN_TOLERANCE;
    let amplification = amplification_row().unwrap();
    let median = median_row(30).unwrap();
    // Every l for every n <= 30, no restriction on gamma.
    let floor_ratio = coefficient_floor_ratio(30, f64::INFINITY).unwrap();
    let mut floor_failures = 0;
    for n in 1..=30u64 {
        for l in 0..=n {
            let c = jumpga::oracles::binomial_coefficient(n, l);
            if c < jumpga::oracles::binomial_coefficient_floor(n, l).unwrap() {
                floor_failures += 1;
            }
        }
    }
    outcome(
        ruin_ok && amplification.pass && median.pass && floor_failures == 0,
        format!(
            "ruin max |err| {worst_ruin:.4} (tol {RUIN_TOLERANCE}), amplification slack {:.2e}, \
             median slack {:.2e}, coefficient floor min ratio {floor_ratio:.3e} with {floor_failures} (n, l) violations",
            amplification.observed, median.observed
        ),
    )
}

fn criterion_5() -> Outcome {
    let cells = iteration_matrix();
    let rows = iteration_rows(&cells, MC_TRIALS, SEED).unwrap();
    let failing: Vec<_> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.clone())
        .collect();
    outcome(
        failing.is_empty(),
        format!(
            "{} cells, {} rows, failing {:?}",
            cells.len(),
            rows.len(),
            failing
        ),
    )
}

fn criterion_6() -> Outcome {
    let rows = improvement_rows(MC_TRIALS, SEED).unwrap();
    let failing: Vec<_> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.clone())
        .collect();
    let summary: Vec<String> = rows
        .iter()
        .filter(|r| !r.check.ends_with("region"))
        .map(|r| format!("{} {:.4}>={:.4}", r.check, r.observed, r.bound))
        .collect();
    outcome(
        failing.is_empty(),
        format!("{}; failing {:?}", summary.join(", "), failing),
    )
}

fn criterion_7() -> Outcome {
    let config = GaConfig::builder(8, 2)
        .mu(8)
        .p_c(0.5)
        .pair_selector(PairSelector::FurthestUniform)
        .max_evaluations(1_000_000)
        .seed(SEED)
        .build()
        .unwrap();
    let results = run_batch(&config, 100, 1).unwrap();
    let found = results
        .iter()
        .filter(|r| r.evaluations_to_optimum.is_some())
        .count();
    outcome(
        found == 100,
        format!("{found}/100 replicates reached the optimum"),
    )
}

fn median_of(table: &ResultTable, cell: usize) -> f64 {
    table
        .aggregate_rows()
        .find(|r| r.cell == cell)
        .and_then(|r| r.median)
        .expect("aggregate row with a median")
}

fn criterion_8() -> Outcome {
    let overrides = Settings::from_pairs([("n", "30"), ("k", "4"), ("seed", "1")]).unwrap();
    let settings = ExperimentPreset::selection_comparison()
        .settings
        .overlay(&overrides);
    let experiment = Experiment::from_settings(&settings).unwrap();
    let table = experiment.run(1).unwrap().table;
    let (furthest, uniform) = (median_of(&table, 0), median_of(&table, 1));
    let ratio = furthest / uniform;
    outcome(
        ratio <= SEPARATION_RATIO,
        format!("median furthest {furthest} / uniform-pair {uniform} = {ratio:.3} (need <= {SEPARATION_RATIO})"),
    )
}

fn criterion_9() -> Outcome {
    let overrides = Settings::from_pairs([("n", "50,200"), ("seed", "1")]).unwrap();
    let settings = ExperimentPreset::hill_climb().settings.overlay(&overrides);
    let table = Experiment::from_settings(&settings)
        .unwrap()
        .run(1)
        .unwrap()
        .table;
    let (small, large) = (median_of(&table, 0), median_of(&table, 1));
    let ratio = large / small;
    outcome(
        ratio <= HILL_CLIMB_RATIO,
        format!("median n=200 {large} / n=50 {small} = {ratio:.2} (need <= {HILL_CLIMB_RATIO})"),
    )
}

fn run_cli(args: &[&str], out: &Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_jumpga"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .expect("binary runs");
    assert!(status.success(), "jumpga {args:?} failed");
    std::fs::read(out).unwrap()
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let invocations: [&[&str]; 2] = [
        &[
            "run",
            "--n",
            "12",
            "--k",
            "3",
            "--mu",
            "10",
            "--selector",
            "tournament:3",
            "--seed",
            "5",
        ],
        &[
            "sweep",
            "--n",
            "10,14",
            "--k",
            "2,3",
            "--mu",
            "6",
            "--selector",
            "furthest,uniform-pair,powerlaw",
            "--replicates",
            "4",
            "--seed",
            "9",
            "--budget",
            "2000000",
        ],
    ];
    let mut identical = 0;
    let mut total = 0;
    for args in invocations {
        let reference = run_cli(&[args, &["--parallel", "1"]].concat(), &out);
        for parallel in ["1", "2", "4"] {
            total += 1;
            if run_cli(&[args, &["--parallel", parallel]].concat(), &out) == reference {
                identical += 1;
            }
        }
    }
    outcome(
        identical == total,
        format!("{identical}/{total} repeated outputs byte-identical"),
    )
}

type Check = Box<dyn FnOnce() -> Outcome>;

fn main() {
    let criteria: [(&str, Check); 10] = [
        (
            "exhaustive fitness",
            Box::new(|| timed(C1_LIMIT, criterion_1)),
        ),
        (
            "matching vs enumeration",
            Box::new(|| timed(C2_LIMIT, criterion_2)),
        ),
        ("structural properties", Box::new(criterion_3)),
        (
            "analytic oracles",
            Box::new(|| timed(C4_LIMIT, criterion_4)),
        ),
        (
            "single-iteration events",
            Box::new(|| timed(C5_LIMIT, criterion_5)),
        ),
        (
            "crossover improvement",
            Box::new(|| timed(C6_LIMIT, criterion_6)),
        ),
        (
            "small end-to-end",
            Box::new(|| timed(C7_LIMIT, criterion_7)),
        ),
        (
            "selector separation",
            Box::new(|| timed(C8_LIMIT, criterion_8)),
        ),
        (
            "hill-climb scaling",
            Box::new(|| timed(C9_LIMIT, criterion_9)),
        ),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
