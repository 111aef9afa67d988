//! A small grid sweep written as CSV to stdout, plus the hill-climb preset.

use jumpga::harness::presets::{preset_hill_climb, Experiment};
use jumpga::harness::Settings;

fn main() -> jumpga::Result<()> {
    let settings = Settings::parse(
        "n = 16,24\n\
         k = 3\n\
         mu = 8,16\n\
         selector = furthest,uniform-pair\n\
         replicates = 10\n\
         seed = 42\n\
         budget = 5000000\n",
    )?;
    let out = Experiment::from_settings(&settings)?.run(2)?;
    out.table.write_csv(std::io::stdout().lock())?;

    eprintln!("hill-climb preset medians:");
    for row in preset_hill_climb(2)?.table.aggregate_rows() {
        eprintln!("  n={:<4} median {}", row.n, row.median.unwrap_or(f64::NAN));
    }
    Ok(())
}
