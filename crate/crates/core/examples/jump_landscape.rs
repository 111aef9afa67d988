//! Prints Jump_k as a function of the number of ones.
//!
//! cargo run --example jump_landscape -- 20 4

use jumpga::jump::{is_optimum, on_plateau};
use jumpga::{jump_fitness, FitnessSpec, Genotype};

fn main() -> jumpga::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(20);
    let k = args.next().unwrap_or(4);
    let spec = FitnessSpec::new(n, k)?;

    println!("ones  fitness  region");
    for ones in 0..=n {
        let x = Genotype::from_bits(&(0..n).map(|i| i < ones).collect::<Vec<_>>())?;
        let f = jump_fitness(&x, &spec)?;
        let region = if is_optimum(&x, &spec) {
            "optimum"
        } else if on_plateau(&x, &spec) {
            "plateau"
        } else if ones > spec.plateau_ones() {
            "valley"
        } else {
            "slope"
        };
        println!(
            "{ones:>4}  {:>7}  {region} {}",
            f.0,
            "#".repeat(f.0 as usize)
        );
    }
    Ok(())
}
