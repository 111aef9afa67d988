//! Median evaluations to the optimum for each crossover parent selector.

use jumpga::engine::{run_batch, GaConfig};
use jumpga::harness::table::summarize;
use jumpga::PairSelector;

fn main() -> jumpga::Result<()> {
    let selectors = ["uniform-pair", "furthest", "tournament:4", "powerlaw:2"];
    let replicates = 20;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());

    println!(
        "{:<14} {:>10} {:>10} {:>10}",
        "selector", "median", "q1", "q3"
    );
    for name in selectors {
        let config = GaConfig::builder(30, 4)
            .mu(50)
            .pair_selector(name.parse::<PairSelector>()?)
            .seed(1)
            .max_evaluations(100_000_000)
            .build()?;
        let values: Vec<f64> = run_batch(&config, replicates, threads)?
            .iter()
            .map(|r| r.evaluations_to_optimum.unwrap_or(r.max_evaluations) as f64)
            .collect();
        let s = summarize(&values).expect("non-empty");
        println!(
            "{name:<14} {:>10.1} {:>10.1} {:>10.1}",
            s.median, s.q1, s.q3
        );
    }
    Ok(())
}
