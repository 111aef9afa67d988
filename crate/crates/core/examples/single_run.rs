//! One run of the GA, printed as JSON.
//!
//! cargo run --release --example single_run -- furthest 7

use jumpga::engine::{self, GaConfig};
use jumpga::PairSelector;

fn main() -> jumpga::Result<()> {
    let mut args = std::env::args().skip(1);
    let selector: PairSelector = args.next().as_deref().unwrap_or("furthest").parse()?;
    let seed = args.next().map_or(7, |s| s.parse().expect("integer seed"));

    let config = GaConfig::builder(30, 4)
        .mu(20)
        .p_c(0.5)
        .pair_selector(selector)
        .seed(seed)
        .max_evaluations(10_000_000)
        .build()?;
    let result = engine::run(&config)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}
