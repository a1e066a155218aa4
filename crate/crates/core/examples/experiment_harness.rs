// Running an experiment from a TOML config and comparing two runs.

use jnsc::harness::{compare_tables, run, ExperimentConfig};

const CONFIG: &str = r#"
kind = "density_vs_repetitions"
seed = 12
n = 60
rates = [0.8, 0.9]
trials = 10
repetitions = [1, 2, 4]
instances = 2
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    let first = run(&cfg)?;
    print!("{}", first.table.to_csv()?);

    let again = run(&cfg)?;
    let report = compare_tables(&first.table, &again.table)?;
    println!("max difference between identical runs: {}", report.max_diff());
    assert_eq!(report.max_diff(), 0.0);

    let svg = first.plot.render();
    println!("plot: {} bytes of SVG", svg.len());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
