// Lossy compression with a random linear code: repeated randomized
// encoding approaches the nearest codeword.

use jnsc::rd::{nearest_codeword_exhaustive, rd_encode_multi, LinearCode};
use jnsc::rng::seeded;
use jnsc::sparsifier::distortion_rate;
use jnsc::BitVec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, dim, instances) = (24, 10, 40);
    let mut rng = seeded(8);
    let draws = [1, 10, 100];
    let mut sums = [0.0; 3];
    let mut exact = 0.0;
    for _ in 0..instances {
        let code = LinearCode::random(n, dim, &mut rng)?;
        let b = BitVec::random(n, &mut rng);
        exact += nearest_codeword_exhaustive(&code, &b)?.distortion as f64;
        for (s, &d) in sums.iter_mut().zip(&draws) {
            *s += rd_encode_multi(&code, &b, d, &mut seeded(1))?.distortion as f64;
        }
    }
    let norm = (instances * n) as f64;
    for (s, d) in sums.iter().zip(draws) {
        println!("{d:>4} draws: mean distortion {:.4}", s / norm);
    }
    println!("nearest codeword: {:.4}", exact / norm);
    println!(
        "D({:.3}) = {:.4}",
        dim as f64 / n as f64,
        distortion_rate(dim as f64 / n as f64)?
    );
    assert!(sums[2] <= sums[0]);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
