// Entries of H·B for a sparse random H: empirical zero frequency against
// the closed form.

use jnsc::rng::seeded;
use jnsc::syndrome::entry_zero_prob;
use jnsc::syndrome::prop2::{entry_zero_frequency, random_column};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 512;
    let mut rng = seeded(6);
    println!("{:>7} {:>5} {:>10} {:>10}", "lambda", "l", "empirical", "formula");
    for lambda in [2.0, 8.0, 256.0] {
        for l in [1, 8, 64, 256] {
            let b = random_column(n, l, &mut rng)?;
            let est = entry_zero_frequency(n, lambda, &b, 2000, 9)?;
            let f = entry_zero_prob(lambda, l, n);
            println!("{lambda:>7} {l:>5} {:>10.4} {f:>10.4}", est.mean);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
