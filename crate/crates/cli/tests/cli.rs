use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nematic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nematic"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const SMALL: &str = "[grid]\nn = 16\n[time]\ndt = 1e-3\nt_end = 0.02\n[initial]\nseed = 4\ndecay = 3\n[output]\ntrace_every = 5\n";

/// `SMALL` with extra keys in `[output]` and extra sections after it.
fn small_with(output: &str, rest: &str) -> String {
    format!("{SMALL}{output}\n{rest}")
}

#[test]
fn run_writes_trace_with_header() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.ini", SMALL);
    let o = nematic(dir.path(), &["--config", "c.ini", "--out", "res", "--quiet", "run"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("res/trace.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,E_total,E_kin,E_elastic,D_total,D_term1,D_term2,D_term3,D_term4,D_term5,div_residual"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    for cell in rows[0].split(',') {
        // d.dddddddddddddddde<exp>
        let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{cell}");
    }
}

#[test]
fn reruns_are_byte_identical_and_seed_matters() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.ini", SMALL);
    for (out, seed) in [("a", "1"), ("b", "1"), ("c", "2")] {
        let o = nematic(dir.path(), &["--config", "c.ini", "--out", out, "--seed", seed, "-q", "run"]);
        assert!(o.status.success());
    }
    let read = |d: &str| fs::read(dir.path().join(d).join("trace.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
}

#[test]
fn twin_identical_and_perturbed() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "same.ini", &small_with("", "[perturbation]\nmode = identical\n"));
    write(dir.path(), "zero.ini", &small_with("", "[perturbation]\ndelta = 0\n"));
    write(dir.path(), "pert.ini", &small_with("snapshot_every = 10", "[perturbation]\ndelta = 1e-6\n"));
    for (cfg, out) in [("same.ini", "s"), ("zero.ini", "z"), ("pert.ini", "p")] {
        let o = nematic(dir.path(), &["--config", cfg, "--out", out, "twin"]);
        assert!(o.status.success(), "{cfg}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("holds = true"));
    }
    let read = |d: &str| fs::read_to_string(dir.path().join(d).join("twin.csv")).unwrap();
    assert_eq!(read("s"), read("z"));
    assert!(read("s").starts_with(
        "t,Phi,frakD,frakD_velocity,frakD_director,frakD_strain_vector,frakD_strain_scalar,F_hat\n"
    ));
    let phi0: f64 = read("p").lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(phi0 > 0.0);
    let snaps = fs::read_dir(dir.path().join("p"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "lcsf"))
        .count();
    assert_eq!(snaps, 6);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.ini", "[time]\ndt = -1\n");
    write(dir.path(), "typo.ini", "[grid]\nsize = 64\n");
    write(dir.path(), "neg.ini", "[perturbation]\ndelta = -1\n");
    write(dir.path(), "few.ini", "[verify]\ntrials = 5\n");
    for args in [
        vec!["--config", "bad.ini", "run"],
        vec!["--config", "typo.ini", "run"],
        vec!["--config", "neg.ini", "twin"],
        vec!["--config", "missing.ini", "run"],
        vec!["--config", "few.ini", "verify", "skew"],
        vec!["twin"],
        vec!["verify", "gronwall"],
        vec!["decompose", "--field", "w"],
    ] {
        let o = nematic(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn decompose_snapshot_and_size_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.ini", &small_with("snapshot_every = 20", ""));
    assert!(nematic(dir.path(), &["--config", "c.ini", "--out", "r", "-q", "run"]).status.success());
    let snap = fs::read_dir(dir.path().join("r"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "lcsf"))
        .unwrap();
    let snap = snap.to_str().unwrap();
    let o = nematic(dir.path(), &["--config", "c.ini", "--out", "d", "decompose", "--snapshot", snap, "--field", "u"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("d/decompose.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,block_l2,weighted_block_l2");
    // q = -1..=q_max with q_max = 3 at N = 16
    assert_eq!(lines.count(), 5);

    write(dir.path(), "big.ini", "[grid]\nn = 32\n");
    let o = nematic(dir.path(), &["--config", "big.ini", "--out", "d", "decompose", "--snapshot", snap]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(dir.path().join("junk.lcsf"), b"LCSX\x01\0\0\0").unwrap();
    let o = nematic(dir.path(), &["--config", "c.ini", "--out", "d", "decompose", "--snapshot", "junk.lcsf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset"));
}

#[test]
fn verify_osgood_and_identities() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "v.ini", "[grid]\nn = 16\n[verify]\ntrials = 30\n");
    let o = nematic(dir.path(), &["--config", "v.ini", "--out", "v", "verify", "osgood"]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("v/osgood.csv")).unwrap();
    assert!(text.starts_with("modulus,eps,integral,increment\ndouble-log,"));

    let o = nematic(dir.path(), &["--config", "v.ini", "--out", "v", "verify", "cancel", "--sizes", "16,32"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = fs::read_to_string(dir.path().join("v/verify.csv")).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows[0], "lemma,param,ratio_max,ratio_median,verdict");
    assert!(rows[1].starts_with("cancel@N=16,") && rows[1].ends_with(",true"));
    assert!(rows[2].starts_with("cancel@N=32,"));
}

#[test]
fn failed_verification_exits_4() {
    // rough fields break the uniformity of the S_N ratio over N
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "v.ini", "[grid]\nn = 32\n[verify]\ntrials = 30\ndecay = -2\n");
    let o = nematic(dir.path(), &["--config", "v.ini", "--out", "v", "verify", "sn-linf"]);
    assert_eq!(o.status.code(), Some(4));
    let text = fs::read_to_string(dir.path().join("v/verify.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",false")));
}
