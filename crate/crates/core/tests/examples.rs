//! Every example under `examples/` must run to completion.

#[allow(dead_code)]
mod butterfly_network_code_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/butterfly_network_code.rs"
    ));
}

#[test]
fn butterfly_network_code_example_runs() {
    butterfly_network_code_example::run_example().expect("butterfly network code example should run");
}

#[allow(dead_code)]
mod experiment_harness_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/experiment_harness.rs"));
}

#[test]
fn experiment_harness_example_runs() {
    experiment_harness_example::run_example().expect("experiment harness example should run");
}

#[allow(dead_code)]
mod gf2_linear_algebra_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gf2_linear_algebra.rs"));
}

#[test]
fn gf2_linear_algebra_example_runs() {
    gf2_linear_algebra_example::run_example().expect("gf2 linear algebra example should run");
}

#[allow(dead_code)]
mod gf2m_binary_expansion_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/gf2m_binary_expansion.rs"
    ));
}

#[test]
fn gf2m_binary_expansion_example_runs() {
    gf2m_binary_expansion_example::run_example().expect("gf2m binary expansion example should run");
}

#[allow(dead_code)]
mod hb_entry_statistics_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hb_entry_statistics.rs"));
}

#[test]
fn hb_entry_statistics_example_runs() {
    hb_entry_statistics_example::run_example().expect("hb entry statistics example should run");
}

#[allow(dead_code)]
mod joint_code_design_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/joint_code_design.rs"));
}

#[test]
fn joint_code_design_example_runs() {
    joint_code_design_example::run_example().expect("joint code design example should run");
}

#[allow(dead_code)]
mod min_unsatisfy_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/min_unsatisfy.rs"));
}

#[test]
fn min_unsatisfy_example_runs() {
    min_unsatisfy_example::run_example().expect("min unsatisfy example should run");
}

#[allow(dead_code)]
mod random_dag_broadcast_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/random_dag_broadcast.rs"));
}

#[test]
fn random_dag_broadcast_example_runs() {
    random_dag_broadcast_example::run_example().expect("random dag broadcast example should run");
}

#[allow(dead_code)]
mod rate_distortion_encoding_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/rate_distortion_encoding.rs"
    ));
}

#[test]
fn rate_distortion_encoding_example_runs() {
    rate_distortion_encoding_example::run_example().expect("rate distortion encoding example should run");
}

#[allow(dead_code)]
mod sparsify_matrix_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sparsify_matrix.rs"));
}

#[test]
fn sparsify_matrix_example_runs() {
    sparsify_matrix_example::run_example().expect("sparsify matrix example should run");
}

#[allow(dead_code)]
mod structured_ldpc_ber_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/structured_ldpc_ber.rs"));
}

#[test]
fn structured_ldpc_ber_example_runs() {
    structured_ldpc_ber_example::run_example().expect("structured ldpc ber example should run");
}
