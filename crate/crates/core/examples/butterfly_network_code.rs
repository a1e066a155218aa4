// A linear broadcast code on the butterfly network.

use jnsc::netcode::build_broadcast_code;
use jnsc::network::NetworkSpec;
use jnsc::rng::seeded;
use jnsc::BitVec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let net = NetworkSpec::butterfly();
    print!("{}", net.to_text());
    for &t in net.terminals() {
        println!("maxflow to {} = {}", net.label(t), net.maxflow(t));
    }

    let code = build_broadcast_code(&net, 2, 4, &mut seeded(1), 20)?;
    println!("code found after {} attempt(s)", code.attempts);
    for t in &code.terminals {
        println!(
            "terminal {}: rank M_t = {}, B_t is {}x{}",
            net.label(t.node),
            t.m_t.rank(),
            t.b_t.rows(),
            t.b_t.cols()
        );
    }

    let bits = BitVec::from_u8s(&[1, 0, 1, 1, 0, 0, 1, 0]);
    for &t in &[5, 6] {
        let a = code.transfer_bits(t, &bits)?;
        let b = code.transfer_bits_by_propagation(t, &bits)?;
        assert_eq!(a, b);
        println!("terminal {t} receives {:?}", a.to_u8s());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
