// Joint design on the butterfly: each terminal gets its own sparse
// parity-check matrix and decodes from the syndrome bits the network
// delivers.

use jnsc::network::NetworkSpec;
use jnsc::rng::seeded;
use jnsc::syndrome::{design_joint_code, BpConfig, BscModel, JointParams};
use jnsc::BitVec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let net = NetworkSpec::butterfly();
    let params = JointParams {
        n: 160,
        m: 4,
        rates: vec![0.6, 0.4],
        trials_per_column: 20,
        passes: 2,
        ..JointParams::default()
    };
    let mut rng = seeded(4);
    let design = design_joint_code(&net, &params, &mut rng)?;
    println!(
        "H is {}x{}, {} network uses per block",
        design.h.rows(),
        design.h.cols(),
        design.uses
    );
    for t in &design.terminals {
        println!(
            "terminal {}: rate {}, density {:.4} -> {:.4} (Gauss {:.4}, floor {:.4}, target {:.4})",
            t.node, t.rate, t.density_before, t.density, t.gauss_density, t.lower_bound, t.target
        );
    }

    // light correlation so both terminals can decode
    let bsc = BscModel::new(0.01)?;
    let x = BitVec::random(160, &mut rng);
    for t in &design.terminals {
        let y = x.xor(&bsc.sample_error(160, &mut rng));
        let sx = design.terminal_syndrome(t.node, &x)?;
        assert_eq!(sx, t.hbar.vec_mul(&x)?);
        let x_hat = design.decode(t.node, &sx, &y, bsc.p(), &BpConfig::default())?;
        println!(
            "terminal {}: side information differs in {} bits, reconstruction in {}",
            t.node,
            y.distance(&x),
            x_hat.distance(&x)
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
