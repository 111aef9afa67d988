//! Steps the engine by hand from an all-plateau population and prints (d, m)
//! every time either changes.

use jumpga::engine::{Engine, GaConfig, InitMode};

fn main() -> jumpga::Result<()> {
    let config = GaConfig::builder(40, 4)
        .mu(16)
        .init(InitMode::AllOnPlateau)
        .seed(3)
        .max_evaluations(2_000_000)
        .build()?;
    let mut engine = Engine::new(&config)?;
    let mut last = engine.population().snapshot();
    println!("{:>8}  {:>3}  {:>3}", "evals", "d", "m");
    println!("{:>8}  {:>3}  {:>3}", engine.evaluations(), last.d, last.m);

    while !engine.is_finished() {
        let record = engine.step()?;
        let now = engine.population().snapshot();
        if (now.d, now.m) != (last.d, last.m) {
            let how = if record.via_crossover {
                "crossover"
            } else {
                "mutation"
            };
            println!(
                "{:>8}  {:>3}  {:>3}  {how}",
                engine.evaluations(),
                now.d,
                now.m
            );
            last = now;
        }
    }
    println!(
        "optimum present: {}",
        engine.population().contains_optimum()
    );
    Ok(())
}
