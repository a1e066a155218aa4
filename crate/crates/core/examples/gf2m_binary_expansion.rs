// GF(2^m) arithmetic and the binary expansion of a matrix over it.

use jnsc::rng::seeded;
use jnsc::{GfField, GfMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = GfField::new(4)?;
    println!("GF(16) modulus: {:#x}", f.poly());
    let a = 0x7;
    let inv = f.inv(a)?;
    println!("{a:#x} * {inv:#x} = {:#x}", f.mul(a, inv));
    assert_eq!(f.mul(a, inv), 1);

    let mut rng = seeded(3);
    let m = GfMatrix::random(f, 4, 6, &mut rng);
    let b = m.binary_expand();
    println!(
        "4x6 matrix over GF(16): rank {}, expansion {}x{} of rank {}",
        m.rank(),
        b.rows(),
        b.cols(),
        b.rank()
    );
    assert_eq!(b.rank(), 4 * m.rank());

    // symbol-level and bit-level products agree
    for _ in 0..10 {
        let s: Vec<u32> = (0..4).map(|_| f.random(&mut rng)).collect();
        let direct = f.vector_to_bits(&m.vec_mul(&s)?);
        let via_bits = b.vec_mul(&f.vector_to_bits(&s))?;
        assert_eq!(direct, via_bits);
    }
    println!("bits(s·M) = bits(s)·B on 10 random vectors");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
