use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn jnsc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jnsc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary should start")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const BUTTERFLY: &str = "\
# butterfly
node 0
node 1
node 2
node 3
node 4
node 5
node 6
edge 0 1
edge 0 2
edge 1 3
edge 2 3
edge 1 5
edge 2 6
edge 3 4
edge 4 5
edge 4 6
source 0
terminal 5
terminal 6
";

#[test]
fn sparsify_prints_a_summary_and_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let o = jnsc(
        &[
            "sparsify", "--n", "40", "--k", "8", "--trials", "5", "--passes", "2", "--seed", "3", "--out", "ap.txt",
            "--p-out", "p.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["cols"], 32);
    assert!(v["density"].as_f64().unwrap() <= v["gauss_density"].as_f64().unwrap());
    assert_eq!(v["pass_densities"].as_array().unwrap().len(), 2);

    // the written AP sparsifies again through --input
    let again = jnsc(
        &["sparsify", "--input", "ap.txt", "--method", "gauss", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(again.status.code(), Some(0));
    assert!(dir.path().join("p.txt").exists());
}

#[test]
fn same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "rd-bench",
        "--n",
        "16",
        "--rate",
        "0.5",
        "--draws",
        "1,5",
        "--instances",
        "20",
        "--seed",
        "9",
    ];
    let (a, b) = (jnsc(&args, dir.path()), jnsc(&args, dir.path()));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 3);
}

#[test]
fn netcode_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bf.txt"), BUTTERFLY).unwrap();
    let o = jnsc(&["netcode", "--net", "bf.txt", "--seed", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn ber_and_run_write_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = jnsc(
        &[
            "ber",
            "--structured",
            "100",
            "--p-list",
            "0,0.05",
            "--bits",
            "1e3",
            "--seed",
            "4",
            "--svg",
            "ber.svg",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 3);
    assert!(fs::read_to_string(dir.path().join("ber.svg")).unwrap().contains("<svg"));

    fs::write(
        dir.path().join("exp.toml"),
        "kind = \"prop2_validate\"\nseed = 1\nn = 64\nlambdas = [2.0]\nweights = [1, 8]\nresamples = 200\n",
    )
    .unwrap();
    for threads in ["1", "3"] {
        let out = format!("t{threads}.csv");
        let o = jnsc(&["run", "exp.toml", "--threads", threads, "--out", &out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let cmp = jnsc(&["compare", "t1.csv", "t3.csv"], dir.path());
    assert_eq!(cmp.status.code(), Some(0));
    assert_eq!(
        fs::read(dir.path().join("t1.csv")).unwrap(),
        fs::read(dir.path().join("t3.csv")).unwrap()
    );

    let other = jnsc(&["run", "exp.toml", "--seed", "2", "--out", "s2.csv"], dir.path());
    assert_eq!(other.status.code(), Some(0));
    assert_eq!(
        jnsc(&["compare", "t1.csv", "s2.csv"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        jnsc(&["compare", "t1.csv", "s2.csv", "--tolerance", "1"], dir.path())
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn exit_codes_distinguish_bad_input_from_model_failure() {
    let dir = tempfile::tempdir().unwrap();
    // k >= n is a validation error
    assert_eq!(
        jnsc(&["sparsify", "--n", "8", "--k", "8", "--seed", "1"], dir.path())
            .status
            .code(),
        Some(2)
    );

    fs::write(
        dir.path().join("cyclic.txt"),
        "node 0\nnode 1\nnode 2\nedge 0 1\nedge 1 2\nedge 2 1\nsource 0\nterminal 2\n",
    )
    .unwrap();
    let o = jnsc(&["netcode", "--net", "cyclic.txt", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));

    fs::write(dir.path().join("bad.toml"), "kind = \"rd_gap\"\nseed = 1\n").unwrap();
    let o = jnsc(&["run", "bad.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("field `n`"));

    // GF(2) cannot serve the butterfly
    fs::write(dir.path().join("bf.txt"), BUTTERFLY).unwrap();
    let o = jnsc(
        &[
            "netcode",
            "--net",
            "bf.txt",
            "--m",
            "1",
            "--max-attempts",
            "3",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));

    // a missing --seed is rejected by the argument parser
    assert_eq!(
        jnsc(&["rd-bench", "--n", "8", "--rate", "0.5"], dir.path())
            .status
            .code(),
        Some(2)
    );
}
