//! The oracle suite behind the `validate` subcommand: each check compares an
//! observed quantity with a bound and yields one pass/fail row.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::genotype::Genotype;
use crate::jump::FitnessSpec;
use crate::oracles::{
    amplification_bounds, amplified_probability, binomial_coefficient, binomial_coefficient_floor,
    binomial_gamma, binomial_median_bound, binomial_median_floor, binomial_upper_half_exact,
    exact_crossover_improvement, gambler_ruin_probability, improvement_region,
    mc_crossover_improvement, mc_single_iteration_events, p_up_formula, p_upstar_and_popt,
    plateau_population_with, simulate_gambler_ruin, CrossoverImprovement, GamblerRuinParams,
    BoundConstants, Region,
};
use crate::rng::{rng_from_seed, seed_sequence};
use crate::selection::PairSelector;

/// Absolute tolerance of the random-walk check.
pub const RUIN_TOLERANCE: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationRow {
    pub check: String,
    pub observed: f64,
    /// Lower bound, or reference value for two-sided checks.
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationRow {
    fn at_least(check: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            observed,
            bound,
            tolerance,
            pass: observed >= bound - tolerance,
        }
    }

    fn within(check: impl Into<String>, observed: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            observed,
            bound: reference,
            tolerance,
            pass: (observed - reference).abs() <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Random-walk absorption vs the closed form on a 3x3 grid of (p, a).
pub fn ruin_rows(trials: u64, seed: u64) -> Result<Vec<ValidationRow>> {
    let mut rows = Vec::new();
    let mut index = 0;
    for p in [0.4, 0.5, 2.0 / 3.0] {
        for a in [3u32, 6, 10] {
            let params = GamblerRuinParams::new(p, a, a / 2)?;
            let mut rng = rng_from_seed(seed_sequence(seed, index));
            index += 1;
            let sim = simulate_gambler_ruin(&params, trials, &mut rng);
            rows.push(ValidationRow::within(
                format!("ruin p={p:.4} a={a} start={}", a / 2),
                sim,
                gambler_ruin_probability(&params),
                RUIN_TOLERANCE,
            ));
        }
    }
    Ok(rows)
}

/// Smallest slack of the amplification bracket over the sweep grid.
pub fn amplification_row() -> Result<ValidationRow> {
    let mut worst = f64::INFINITY;
    for i in 1..100 {
        let p = i as f64 / 100.0;
        for lambda in 1..=100 {
            let (lo, hi) = amplification_bounds(p, lambda)?;
            let v = amplified_probability(p, lambda);
            worst = worst.min(v - lo).min(hi - v);
        }
    }
    Ok(ValidationRow::at_least(
        "amplification bracket slack",
        worst,
        0.0,
        1e-12,
    ))
}

/// Smallest slack of the binomial median bounds for `1 <= n <= n_max`.
pub fn median_row(n_max: u64) -> Result<ValidationRow> {
    let mut worst = f64::INFINITY;
    for n in 1..=n_max {
        let exact = binomial_upper_half_exact(n);
        worst = worst
            .min(exact - binomial_median_bound(n)?)
            .min(exact - binomial_median_floor());
    }
    Ok(ValidationRow::at_least(
        format!("binomial median n<={n_max} slack"),
        worst,
        0.0,
        1e-12,
    ))
}

/// Smallest ratio `C(n, l) / floor(n, l)` over `n <= n_max` and every `l`
/// with `gamma <= gamma_max`.
pub fn coefficient_floor_ratio(n_max: u64, gamma_max: f64) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for n in 1..=n_max {
        for l in 0..=n {
            if binomial_gamma(n, l) <= gamma_max {
                worst = worst.min(binomial_coefficient(n, l) / binomial_coefficient_floor(n, l)?);
            }
        }
    }
    Ok(worst)
}

/// Single-iteration event frequencies from constructed plateau populations.
pub fn iteration_rows(
    cells: &[(usize, usize, usize, u32, usize)],
    trials: u64,
    seed: u64,
) -> Result<Vec<ValidationRow>> {
    let mut rows = Vec::new();
    for (index, &(n, k, mu, d, m)) in cells.iter().enumerate() {
        let spec = FitnessSpec::new(n, k)?;
        let population = plateau_population_with(spec, mu, d, m)?;
        let f = mc_single_iteration_events(
            &population,
            PairSelector::FurthestUniform,
            1.0,
            trials,
            seed_sequence(seed, index as u64),
        )?;
        let label = format!("n={n} k={k} mu={mu} d={d} m={m}");
        let p_up = p_up_formula(d, m, mu, 1.0, 1.0);
        rows.push(ValidationRow::at_least(
            format!("d or m increases {label}"),
            f.d_or_m_increases.estimate(),
            p_up,
            f.d_or_m_increases.three_sigma(),
        ));
        let (up, opt) = p_upstar_and_popt(d, n, k, mu, 1.0, 1.0)?;
        if (d as usize) < 2 * k {
            rows.push(ValidationRow::at_least(
                format!("d increases {label}"),
                f.d_increases.estimate(),
                up,
                f.d_increases.three_sigma(),
            ));
        }
        rows.push(ValidationRow::at_least(
            format!("optimum created {label}"),
            f.optimum_created.estimate(),
            opt,
            f.optimum_created.three_sigma(),
        ));
    }
    Ok(rows)
}

/// The full test matrix of (n, k, mu, d, m) cells.
pub fn iteration_matrix() -> Vec<(usize, usize, usize, u32, usize)> {
    let mut cells = Vec::new();
    for n in [9, 12] {
        for k in [2, 3] {
            for mu in [8, 16] {
                for d in (2..=2 * k as u32).step_by(2) {
                    for m in [1, 2] {
                        cells.push((n, k, mu, d, m));
                    }
                }
            }
        }
    }
    cells
}

/// String with zeros exactly at the given positions.
pub fn with_zeros(n: usize, zeros: impl IntoIterator<Item = usize>) -> Genotype {
    let mut bits = vec![true; n];
    for z in zeros {
        bits[z] = false;
    }
    Genotype::from_bits(&bits).expect("n >= 1")
}

/// A constructed crossover pair and the bound its frequencies must meet.
#[derive(Clone, Debug)]
pub struct ImprovementCase {
    pub name: &'static str,
    pub spec: FitnessSpec,
    pub x: Genotype,
    pub y: Genotype,
    pub region: Option<Region>,
    /// Bound on `Pr[f(z) > f(y)]`, if the case checks it.
    pub improves_bound: Option<f64>,
    /// Bound on `Pr[f(z) > f(y) - sqrt(k)]`, if the case checks it.
    pub near_bound: Option<f64>,
}

/// Pairs with disjoint zero sets in each region, plus a plateau `y`.
pub fn improvement_cases() -> Vec<ImprovementCase> {
    let c = BoundConstants::new();
    let spec = |n, k| FitnessSpec::new(n, k).expect("valid");
    vec![
        // 98 ones each, valley of width 10
        ImprovementCase {
            name: "valley",
            spec: spec(100, 10),
            x: with_zeros(100, [0, 1]),
            y: with_zeros(100, [2, 3]),
            region: Some(Region::Valley),
            improves_bound: Some(c.c1_prime),
            near_bound: Some(c.c1_prime),
        },
        // |y|_1 = 820 = n - k - 8 sqrt(k), x at the same level
        ImprovementCase {
            name: "slope-far",
            spec: spec(1000, 100),
            x: with_zeros(1000, 0..180),
            y: with_zeros(1000, 180..360),
            region: Some(Region::SlopeFar),
            improves_bound: Some(c.c1_doubleprime),
            near_bound: Some(c.c1_doubleprime),
        },
        // |y|_1 = 74, x on the plateau
        ImprovementCase {
            name: "slope-near",
            spec: spec(100, 25),
            x: with_zeros(100, 0..25),
            y: with_zeros(100, 25..51),
            region: Some(Region::SlopeNear),
            improves_bound: Some(c.c2 / 5.0),
            near_bound: Some(c.c3_prime),
        },
        // both on the plateau
        ImprovementCase {
            name: "plateau-y",
            spec: spec(100, 25),
            x: with_zeros(100, 0..25),
            y: with_zeros(100, 25..50),
            region: None,
            improves_bound: None,
            near_bound: Some(c.c3_prime),
        },
        // small k, far slope: only strict positivity is claimed
        ImprovementCase {
            name: "small-k-slope",
            spec: spec(100, 4),
            x: with_zeros(100, 0..20),
            y: with_zeros(100, 20..40),
            region: Some(Region::SlopeFar),
            improves_bound: Some(0.0),
            near_bound: None,
        },
    ]
}

pub fn improvement_rows(trials: u64, seed: u64) -> Result<Vec<ValidationRow>> {
    let mut rows = Vec::new();
    for (index, case) in improvement_cases().into_iter().enumerate() {
        if let Some(region) = case.region {
            let ok = improvement_region(&case.y, &case.spec)? == region;
            rows.push(ValidationRow::at_least(
                format!("{} region", case.name),
                f64::from(u8::from(ok)),
                1.0,
                0.0,
            ));
        }
        let mc: CrossoverImprovement = mc_crossover_improvement(
            &case.x,
            &case.y,
            &case.spec,
            trials,
            seed_sequence(seed, index as u64),
        )?;
        if let Some(bound) = case.improves_bound {
            let row = if bound == 0.0 {
                let (exact, _) = exact_crossover_improvement(&case.x, &case.y, &case.spec)?;
                ValidationRow {
                    pass: exact > 0.0 && mc.improves.hits > 0,
                    ..ValidationRow::at_least(
                        format!("{} improves", case.name),
                        mc.improves.estimate(),
                        0.0,
                        0.0,
                    )
                }
            } else {
                ValidationRow::at_least(
                    format!("{} improves", case.name),
                    mc.improves.estimate(),
                    bound,
                    mc.improves.three_sigma(),
                )
            };
            rows.push(row);
        }
        if let Some(bound) = case.near_bound {
            rows.push(ValidationRow::at_least(
                format!("{} within sqrt(k)", case.name),
                mc.near.estimate(),
                bound,
                mc.near.three_sigma(),
            ));
        }
    }
    Ok(rows)
}

/// Runs the oracle suite with `trials` draws per Monte Carlo check.
///
/// The single-iteration checks use a reduced cell set (n = 9, k = 2); the
/// integration tests cover the full matrix. The binomial coefficient floor
/// is checked on `gamma <= 1`, the range where it is applied.
pub fn run_validation(trials: u64, seed: u64) -> Result<ValidationReport> {
    let mut rows = ruin_rows(trials, seed_sequence(seed, 1))?;
    rows.push(amplification_row()?);
    rows.push(median_row(30)?);
    rows.push(ValidationRow::at_least(
        "binomial coefficient floor n<=30 gamma<=1 ratio",
        coefficient_floor_ratio(30, 1.0)?,
        1.0,
        0.0,
    ));
    let cells = [
        (9, 2, 8, 2, 1),
        (9, 2, 8, 4, 1),
        (9, 2, 8, 2, 2),
        (9, 2, 16, 4, 2),
    ];
    rows.extend(iteration_rows(
        &cells,
        trials.max(10_000),
        seed_sequence(seed, 2),
    )?);
    rows.extend(improvement_rows(trials, seed_sequence(seed, 3))?);
    Ok(ValidationReport { rows })
}
