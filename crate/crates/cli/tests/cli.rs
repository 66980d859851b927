//! End-to-end runs of the `qf` binary.

use std::path::Path;
use std::process::{Command, Output};

use crystalline::build::CrystallineMeasure;
use crystalline::io::{read_atoms_csv, read_atoms_json};
use crystalline::rational::{self, Interval};

fn qf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qf"))
        .args(args)
        .output()
        .expect("qf runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn single_level(dir: &Path) -> std::path::PathBuf {
    let out = dir.join("build");
    let o = qf(&["build", "--levels", "1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    out.join("measure.json")
}

fn load(path: &Path) -> CrystallineMeasure {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn meyer_writes_coefficients_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = qf(&["meyer", "--M", "32", "--alpha", "1/8", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(dir.path().join("meyer_M32.csv").exists());
    let cert: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("meyer_M32_certificate.json")).unwrap())
            .unwrap();
    assert!(cert["freq_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn meyer_small_window_with_nullspace() {
    let dir = tempfile::tempdir().unwrap();
    let o = qf(&[
        "meyer",
        "--M",
        "4",
        "--alpha",
        "1/8",
        "--method",
        "nullspace",
        "--out",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("meyer_M4.csv")).unwrap();
    let rows: Vec<(usize, f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 16);
    for (j, re, im) in rows {
        let zero = re == 0.0 && im == 0.0;
        assert_eq!(zero, [0, 1, 2, 14, 15].contains(&j), "index {j}");
    }
}

#[test]
fn meyer_infeasible_window_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = qf(&["meyer", "--M", "2", "--alpha", "1/2", "--out", s(dir.path())]);
    assert!(!o.status.success());
    assert!(text(&o.stderr).contains("infeasible window"));
}

#[test]
fn build_empty_levels_gives_zero_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = qf(&["build", "--levels", "none", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let fm = load(&dir.path().join("measure.json"));
    assert!(fm.levels.is_empty() && fm.mu.is_structurally_empty());
}

#[test]
fn build_slow_schedule_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = qf(&["build", "--q", "1", "--out", s(dir.path())]);
    assert!(!o.status.success());
    assert!(text(&o.stderr).contains("tau schedule infeasible"));
    assert!(!dir.path().join("measure.json").exists());
}

#[test]
fn build_reads_a_config_file_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "alpha = \"1/8\"\nlevels = \"1..2\"\nq = 8\nseed = 9\n").unwrap();
    let out = dir.path().join("out");
    let o = qf(&["build", "--config", s(&cfg), "--levels", "1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let fm = load(&out.join("measure.json"));
    assert_eq!(fm.config.seed, 9);
    assert_eq!(fm.config.levels, vec![1]);
    let resolved = std::fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(resolved.contains("alpha = \"1/8\""));

    std::fs::write(&cfg, "alpha = 0.125\n").unwrap();
    assert!(!qf(&["build", "--config", s(&cfg), "--out", s(&out)])
        .status
        .success());
}

#[test]
fn verify_single_level_build() {
    let dir = tempfile::tempdir().unwrap();
    let measure = single_level(dir.path());
    let out = dir.path().join("verify");
    let o = qf(&["verify", "--measure", s(&measure), "--out", s(&out)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(text(&o.stdout).contains("quasicrystal: fail (blow-up certified)"));
    let growth = std::fs::read_to_string(out.join("growth.csv")).unwrap();
    assert_eq!(growth.lines().count(), 2);
    let blowup = std::fs::read_to_string(out.join("blowup.csv")).unwrap();
    assert!(blowup.lines().nth(1).unwrap().starts_with("1,128,"));
    for f in [
        "verdict.json",
        "poisson.csv",
        "profile_n1.csv",
        "psi.csv",
        "eta.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn verify_rejects_a_tampered_measure() {
    let dir = tempfile::tempdir().unwrap();
    let measure = single_level(dir.path());
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&measure).unwrap()).unwrap();
    let h = rational::parse(v["levels"][0]["placement"]["h"].as_str().unwrap()).unwrap();
    let moved = h + rational::ratio(1, 1024);
    v["levels"][0]["placement"]["h"] = serde_json::Value::String(rational::format(&moved));
    std::fs::write(&measure, serde_json::to_vec(&v).unwrap()).unwrap();
    let o = qf(&[
        "verify",
        "--measure",
        s(&measure),
        "--out",
        s(&dir.path().join("v")),
    ]);
    assert!(!o.status.success());
    assert!(text(&o.stderr).contains("certificate failure"));
}

#[test]
fn export_windows_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let measure = single_level(dir.path());
    let fm = load(&measure);
    let lam = &fm.levels[0].placement.lambda;
    let r = (rational::int(2) * lam).recip();
    let window = format!(
        "({}, {})",
        rational::format(&(lam - &r)),
        rational::format(&(lam + &r))
    );

    let o = qf(&["export", "--measure", s(&measure), "--window", &window]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let atoms = read_atoms_csv(&o.stdout[..]).unwrap();
    assert_eq!(atoms.len(), 2);
    assert_eq!(&atoms[0].position, lam);

    let o = qf(&["export", "--measure", s(&measure), "--window", "[-1, 1]"]);
    assert!(o.status.success());
    assert!(read_atoms_csv(&o.stdout[..]).unwrap().is_empty());

    let w = "[40, 50)";
    let expect = fm.mu.atoms_in(&Interval::parse(w).unwrap());
    assert!(!expect.is_empty());
    let out = dir.path().join("export");
    for (format, file) in [("csv", "mu_atoms.csv"), ("json", "mu_atoms.json")] {
        let o = qf(&[
            "export",
            "--measure",
            s(&measure),
            "--window",
            w,
            "--format",
            format,
            "--out",
            s(&out),
        ]);
        assert!(o.status.success(), "{}", text(&o.stderr));
        let bytes = std::fs::read(out.join(file)).unwrap();
        let back = if format == "csv" {
            read_atoms_csv(&bytes[..]).unwrap()
        } else {
            read_atoms_json(&bytes[..]).unwrap()
        };
        assert_eq!(back.len(), expect.len());
        for (a, b) in back.iter().zip(&expect) {
            assert_eq!(a.position, b.position);
            assert_eq!(a.weight.re.to_bits(), b.weight.re.to_bits());
            assert_eq!(a.weight.im.to_bits(), b.weight.im.to_bits());
        }
    }

    let o = qf(&[
        "export",
        "--measure",
        s(&measure),
        "--window",
        "[-3, 3]",
        "--side",
        "mu-hat",
    ]);
    assert!(o.status.success());
    assert!(read_atoms_csv(&o.stdout[..]).unwrap().is_empty());
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qf"))
        .args(["meyer", "--M", "8", "--out", s(dir.path())])
        .env("QF_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_qf"))
        .args(["meyer", "--M", "8", "--out", s(dir.path())])
        .env("QF_THREADS", "0")
        .output()
        .unwrap();
    assert!(!o.status.success());
}
