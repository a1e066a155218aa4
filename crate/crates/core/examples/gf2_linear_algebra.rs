// Rank, solving and inversion over GF(2).

use jnsc::rng::seeded;
use jnsc::{BitMatrix, BitVec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = BitMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]])?;
    // third row is the sum of the first two
    println!("rank of the 3x3 example: {}", a.rank());
    assert_eq!(a.rank(), 2);

    let mut rng = seeded(42);
    let m = loop {
        let m = BitMatrix::random(16, 16, &mut rng);
        if m.rank() == 16 {
            break m;
        }
    };
    let inv = m.invert()?;
    assert_eq!(m.mul(&inv)?, BitMatrix::identity(16));

    let b = BitVec::random(16, &mut rng);
    let x = m.solve(&b)?.expect("full rank system is consistent");
    assert_eq!(m.mul_vec(&x)?, b);
    println!("solved a random 16x16 system, x has weight {}", x.weight());

    // x·M is the row-vector product used for syndromes
    let s = m.vec_mul(&x)?;
    println!("x·M has weight {}", s.weight());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
