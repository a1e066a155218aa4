// Sparsifying a uniform random matrix and comparing with Gauss
// elimination and the distortion-rate floor.

use jnsc::rng::seeded;
use jnsc::sparsifier::{distortion_rate, gauss_baseline, gauss_expected_density, sparsify};
use jnsc::BitMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, cols) = (120, 96);
    let mut rng = seeded(5);
    let a = loop {
        let a = BitMatrix::random(n, cols, &mut rng);
        if a.rank() == cols {
            break a;
        }
    };
    let gauss = gauss_baseline(&a)?;
    let ours = sparsify(&a, 20, 3, 99)?;
    let floor = distortion_rate(cols as f64 / n as f64)?;

    println!("density of A            {:.4}", a.density());
    println!(
        "Gauss elimination       {:.4} (expected {:.4})",
        gauss.density,
        gauss_expected_density(n, n - cols)
    );
    for (i, d) in ours.pass_densities.iter().enumerate() {
        println!("after pass {}            {d:.4}", i + 1);
    }
    println!("D(R) at R = {:.2}         {floor:.4}", cols as f64 / n as f64);

    assert_eq!(a.mul(&ours.p)?, ours.ap);
    assert!(ours.density < gauss.density);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
