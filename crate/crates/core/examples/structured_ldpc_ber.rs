// A (4, 5)-regular parity-check matrix and its bit error rate under BP
// syndrome decoding.

use jnsc::rng::seeded;
use jnsc::syndrome::{four_cycles, structured_ldpc, wyner_pipeline, BpConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h = structured_ldpc(200, &mut seeded(2))?;
    println!("H is {}x{}, {} four-cycles", h.rows(), h.cols(), four_cycles(&h));
    assert!(h.column_weights().iter().all(|&w| w == 5));

    let cfg = BpConfig::default();
    for p in [0.0, 0.05, 0.1, 0.15] {
        let r = wyner_pipeline(&h, p, 17, 200, &cfg)?;
        println!(
            "p = {p:<5} ber = {:.2e}  converged {:.2}",
            r.ber,
            r.converged_fraction()
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
