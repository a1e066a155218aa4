// Minimizing the weight of A·x + b: randomized against exhaustive.

use jnsc::rng::seeded;
use jnsc::sparsifier::{min_unsatisfy_exhaustive, min_unsatisfy_randomized};
use jnsc::{BitMatrix, BitVec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(11);
    let a = BitMatrix::random(40, 12, &mut rng);
    let b = BitVec::random(40, &mut rng);

    let exact = min_unsatisfy_exhaustive(&a, &b)?;
    println!("exhaustive optimum over 2^12 candidates: {}", exact.residual_weight);
    for trials in [1, 10, 100, 1000] {
        let got = min_unsatisfy_randomized(&a, &b, trials, &mut rng)?;
        println!("{trials:>5} trials: residual weight {}", got.residual_weight);
        assert!(got.residual_weight >= exact.residual_weight);
        assert_eq!(a.mul_vec(&got.x)?.xor(&b), got.residual);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
