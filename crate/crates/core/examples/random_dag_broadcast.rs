// Broadcast codes on random layered 70-node networks over GF(16).

use jnsc::netcode::build_broadcast_code;
use jnsc::network::random_dag;
use jnsc::rng::seeded;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(70);
    for i in 0..3 {
        let net = random_dag(70, 5, 0.3, 4, &mut rng)?;
        let flows: Vec<usize> = net.terminals().iter().map(|&t| net.maxflow(t)).collect();
        let w = *flows.iter().max().unwrap();
        let code = build_broadcast_code(&net, w, 4, &mut rng, 50)?;
        let ranks: Vec<usize> = code.terminals.iter().map(|t| t.m_t.rank()).collect();
        println!(
            "network {i}: {} edges, maxflows {flows:?}, w = {w}, ranks {ranks:?}",
            net.edge_count()
        );
        for (t, &f) in code.terminals.iter().zip(&flows) {
            assert_eq!(t.m_t.rank(), w.min(f));
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
