use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const PRESET: &str = "preset = \"paper-ultraslow\"\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dsp-soliton"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

// 1 ms on a coarse grid keeps these quick
const SHORT: &str = "preset = \"paper-ultraslow\"\n[grid]\npoints = 1024\n[run]\nt_final = 1e-4\nsnapshot_every = 50\n";

#[test]
fn coeffs_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p.toml", PRESET);
    let out = run(&["coeffs", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let row = |name: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap_or_else(|| panic!("no {name} row"))
            .to_string()
    };
    let v_g: f64 = row("v_g").split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((v_g / 7.494811e-2 - 1.0).abs() < 1e-6);
    assert!(row("regime").contains("Bright"));
    assert!(row("beta2").contains("s^2/m"));

    let later = run(&["coeffs", "--config", &cfg, "--time", "1e-3"]);
    assert_eq!(later.status.code(), Some(0));
}

#[test]
fn classify_cells() {
    for (omega, detuning, expect) in [
        ("1e8", "-1e7", "Bright 1"),
        ("3e6", "-1e7", "Dark -1"),
        ("1e8", "1e7", "Dark -1"),
        ("3e6", "1e7", "Bright 1"),
        ("1e8", "0", "Linear 0"),
        ("1e7", "-1e7", "Singular 2"),
    ] {
        let out = run(&["classify", "--omega", omega, "--detuning", detuning]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), expect, "omega {omega}, detuning {detuning}");
    }
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.toml", "preset = \"paper-ultraslow\"\n[grid]\npoints = 1000\n");
    let out = run(&["coeffs", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("power of two"), "{}", stderr(&out));

    let unknown = write_config(dir.path(), "unknown.toml", "preset = \"paper-ultraslow\"\n[probe]\ndetune = 1.0\n");
    let out = run(&["propagate", "--config", &unknown, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let empty = write_config(dir.path(), "empty.toml", "");
    assert_eq!(run(&["coeffs", "--config", &empty]).status.code(), Some(1));
    assert_eq!(run(&["coeffs", "--config", "/nonexistent/x.toml"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "--omega", "-1", "--detuning", "0"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn integration_failure_exits_2_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "resonant.toml",
        "preset = \"paper-ultraslow\"\n[medium]\ngamma_ab = 0.0\n[control]\nkind = \"linear\"\nomega_end = 1e7\nt_center = 2.5e-5\nt_ramp = 5e-5\n[grid]\npoints = 256\n[init]\nprofile = \"zero\"\n[run]\nt_final = 1e-4\n",
    );
    let out_dir = dir.path().join("run");
    let out = run(&["propagate", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let diag = fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(diag.contains("# run aborted"));
}

#[test]
fn propagate_writes_deterministic_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "short.toml", SHORT);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = run(&["propagate", "--config", &cfg, "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let mut names: Vec<String> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "diagnostics.csv",
            "scenario.toml",
            "snap_000000.csv",
            "snap_000050.csv",
            "snap_000100.csv",
            "summary.txt"
        ]
    );
    for name in &names {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name} differs");
    }
    let diag = fs::read_to_string(a.join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("# tool = dsp-soliton"));
    assert_eq!(diag.lines().filter(|l| !l.starts_with('#')).count(), 101);
    let snap = fs::read_to_string(a.join("snap_000100.csv")).unwrap();
    assert!(snap.contains("# columns = xi,re_psi,im_psi"));
    assert_eq!(snap.lines().filter(|l| !l.starts_with('#')).count(), 1024);

    // the echoed scenario runs to the same result
    let echo = a.join("scenario.toml");
    let c = dir.path().join("c");
    let out = run(&["propagate", "--config", echo.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(a.join("summary.txt")).unwrap(), fs::read(c.join("summary.txt")).unwrap());
}

#[test]
fn fig1_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "short.toml", SHORT);
    let out = run(&["fig1", "--config", &cfg, "--out", dir.path().join("f").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("f/fig1.csv")).unwrap();
    assert!(text.contains("# e0 = "));
    assert!(text.lines().any(|l| l.starts_with("# columns = ")));

    let dark = write_config(dir.path(), "dark.toml", "preset = \"paper-dark\"\n");
    let out = run(&["fig1", "--config", &dark, "--out", dir.path().join("g").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "short.toml", SHORT);
    let out_dir = dir.path().join("s");
    let out = bin()
        .args([
            "sweep",
            "--config",
            &cfg,
            "--param",
            "control.omega_start",
            "--values",
            "1e8,0.5e8",
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .env("DSP_SOLITON_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("2 runs (0 failed)"));
    let text = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);

    let out = run(&[
        "sweep",
        "--config",
        &cfg,
        "--param",
        "control.nope",
        "--values",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn quick_selfcheck_and_canary() {
    let ok = run(&["selfcheck", "--quick"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(!stdout(&ok).contains("FAIL ["));

    let broken = run(&["selfcheck", "--quick", "--inject-fault", "beta2-sign"]);
    assert_eq!(broken.status.code(), Some(3));
    let text = stdout(&broken);
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL [")).collect();
    assert_eq!(failing.len(), 1, "{text}");
    assert!(failing[0].contains("dispersion"));
}

#[test]
fn bundled_scenarios_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["coeffs", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), stderr(&out));
        count += 1;
    }
    assert!(count >= 4);
}
