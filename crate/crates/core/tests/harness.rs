use std::fs;

use jnsc::harness::{compare_runs, compare_tables, run, run_file, ExperimentConfig};
use jnsc::sparsifier::binomial_sigma;
use jnsc::Error;

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).expect("config should parse")
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn repetitions_never_raise_density() {
    let cfg = config(
        r#"
kind = "density_vs_repetitions"
seed = 3
n = 300
rates = [0.8, 0.9]
trials = 5
repetitions = [1, 2, 3]
"#,
    );
    let t = run(&cfg).unwrap().table;
    let (rates, density, lower) = (t.column("rate"), t.column("density"), t.column("lower_bound"));
    for i in 1..t.rows.len() {
        if rates[i] == rates[i - 1] {
            assert!(
                density[i] <= density[i - 1],
                "row {i}: {} > {}",
                density[i],
                density[i - 1]
            );
        }
    }
    assert!(density.iter().zip(&lower).all(|(d, l)| d >= l));
    assert!(!t.columns.contains(&"wall_time".to_string()));
}

#[test]
fn csv_is_identical_across_thread_counts() {
    let cfg = config(
        r#"
kind = "density_vs_rate"
seed = 21
n = 64
rates = [0.5, 0.7, 0.9]
trials = 4
passes = 2
instances = 3
"#,
    );
    let one = in_pool(1, || run(&cfg).unwrap());
    let four = in_pool(4, || run(&cfg).unwrap());
    assert_eq!(one.table.to_csv().unwrap(), four.table.to_csv().unwrap());
    assert_eq!(one.plot.render(), four.plot.render());
}

#[test]
fn ber_sweep_without_bits_has_only_a_header() {
    let cfg = config(
        r#"
kind = "ber_sweep"
seed = 1
structured = 100
p_list = [0.01, 0.02]
bits = 0
"#,
    );
    let csv = run(&cfg).unwrap().table.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("p,bits,bit_errors,ber"));
}

#[test]
fn seeds_agree_in_aggregate() {
    let text = |seed: u64| {
        format!("kind = \"density_vs_rate\"\nseed = {seed}\nn = 48\nrates = [0.75]\ntrials = 3\npasses = 1\ninstances = 100\n")
    };
    let a = run(&config(&text(1))).unwrap().table;
    let b = run(&config(&text(2))).unwrap().table;
    let (da, db) = (a.column("density")[0], b.column("density")[0]);
    let sigma = 2f64.sqrt() * binomial_sigma(da, 100 * 48 * 36);
    assert!((da - db).abs() < 3.0 * sigma, "{da} vs {db}, sigma {sigma}");
    assert_eq!(compare_tables(&a, &a).unwrap().max_diff(), 0.0);
}

#[test]
fn mismatched_kinds_are_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let rd = config("kind = \"rd_gap\"\nseed = 1\nn = 12\nrates = [0.5]\ndraws = [1, 4]\ninstances = 5\n");
    let dens =
        config("kind = \"density_vs_rate\"\nseed = 1\nn = 24\nrates = [0.5]\ntrials = 2\npasses = 1\ninstances = 1\n");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    run(&rd).unwrap().table.write_csv(&a).unwrap();
    run(&dens).unwrap().table.write_csv(&b).unwrap();
    assert!(matches!(compare_runs(&a, &b), Err(Error::Schema(_))));
    assert!(compare_runs(&a, &a).unwrap().within(0.0));
}

#[test]
fn config_paths_resolve_next_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("net.txt"),
        "node 0\nnode 1\nnode 2\nnode 3\nedge 0 1\nedge 0 2\nedge 1 3\nedge 2 3\nsource 0\nterminal 3\n",
    )
    .unwrap();
    let path = dir.path().join("exp.toml");
    fs::write(
        &path,
        r#"
kind = "netcode_sparsify"
seed = 5
network = "net.txt"
n = 40
m = 4
rates = [0.6]
output = "out/result.csv"
svg = "plot.svg"
"#,
    )
    .unwrap();
    fs::create_dir(dir.path().join("out")).unwrap();
    let res = run_file(&path).unwrap();
    let written = fs::read_to_string(dir.path().join("out/result.csv")).unwrap();
    assert_eq!(written, res.table.to_csv().unwrap());
    assert!(fs::read_to_string(dir.path().join("plot.svg"))
        .unwrap()
        .starts_with("<svg"));
    let before = res.table.column("symbols_nonzero_before_pct")[0];
    let after = res.table.column("symbols_nonzero_after_pct")[0];
    assert!(after < before, "{after} >= {before}");
}

#[test]
fn netcode_sparsify_on_a_random_dag() {
    let cfg = config(
        r#"
kind = "netcode_sparsify"
seed = 70
dag_nodes = 70
dag_layers = 6
dag_edge_density = 0.25
dag_terminals = 3
n = 240
m = 4
rates = [0.3]
"#,
    );
    let t = run(&cfg).unwrap().table;
    assert_eq!(t.rows.len(), 3);
    let before = t.column("symbols_nonzero_before_pct");
    let after = t.column("symbols_nonzero_after_pct");
    for (b, a) in before.iter().zip(&after) {
        assert!((0.0..=100.0).contains(a) && a < b, "{a} vs {b}");
    }
}

#[test]
fn validation_names_the_field() {
    match ExperimentConfig::parse("kind = \"ber_sweep\"\nseed = 1\nstructured = 100\nbits = 10\n") {
        Err(Error::Config { field, .. }) => assert_eq!(field, "p_list"),
        other => panic!("expected a config error, got {other:?}"),
    }
    assert!(ExperimentConfig::parse("kind = \"rd_gap\"\nsede = 1\n").is_err());
}

#[test]
fn shipped_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(cfg.output.is_some(), "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 6);
}
