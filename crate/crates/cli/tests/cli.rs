use std::fs;
use std::process::{Command, Output};

fn isokam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isokam")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    let line = text.lines().find_map(|l| l.strip_prefix(&format!("{key}="))).unwrap_or_else(|| panic!("no {key} in\n{text}"));
    line.trim().parse().unwrap()
}

#[test]
fn kolmogorov_summary_shows_counterterms() {
    let text = stdout(&isokam(&["kolmogorov", "--model", "quartic", "--order", "2", "--exact"]));
    assert!(text.contains("a1 = -3/4*J0"), "{text}");
    assert!(text.contains("a2 = 69/64*J0^2*omega^-1"), "{text}");
    assert!(text.contains("omega0 = omega + "), "{text}");
}

#[test]
fn birkhoff_summary_uses_frequency_correction_form() {
    let text = stdout(&isokam(&["birkhoff", "--model", "quartic"]));
    assert!(text.contains("omega = omega0 + eps^1 * (3/4*J0) + eps^2 * (-69/64*J0^2*omega0^-1)"), "{text}");
}

#[test]
fn lindstedt_schemes() {
    let k = stdout(&isokam(&["lindstedt", "--model", "quartic", "--scheme", "k"]));
    assert!(k.contains("19/32*eps^2*J0^2*omega^-2*sin(2q)"), "{k}");
    let b = stdout(&isokam(&["lindstedt", "--model", "quartic", "--scheme", "b"]));
    assert!(b.contains("31/32*eps^2*J0^2*omega0^-2*sin(2q)"), "{b}");
}

#[test]
fn invert_reference_case() {
    let text = stdout(&isokam(&["invert", "--model", "quartic", "--eps", "1", "--omega0", "1", "--omega", "1.2"]));
    let j0 = value(&text, "J0");
    assert!((j0 - 0.383509).abs() / 0.383509 < 1e-5, "{j0}");
    let newton = stdout(&isokam(&["invert", "--model", "quartic", "--eps", "1", "--omega0", "1", "--omega", "1.002", "--method", "newton"]));
    assert!((value(&newton, "J0") - 0.0026769).abs() < 1e-7);
}

#[test]
fn compare_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("case2.csv");
    let text = stdout(&isokam(&[
        "compare", "--model", "quartic", "--order", "4", "--eps", "1", "--omega0", "1", "--omega", "1.02", "--samples", "400",
        "--out", csv.to_str().unwrap(),
    ]));
    let gap = value(&text, "log10_gap");
    assert!((1.0..=2.0).contains(&gap), "{gap}");
    let data = fs::read_to_string(&csv).unwrap();
    let header = data.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,err_scheme_B,err_scheme_K");
    assert_eq!(data.lines().filter(|l| !l.starts_with('#')).count(), 401);
}

#[test]
fn exact_output_is_deterministic_and_showable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        stdout(&isokam(&["kolmogorov", "--model", "cubic", "--order", "3", "--out", p.to_str().unwrap()]));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let shown = stdout(&isokam(&["show", a.to_str().unwrap()]));
    assert!(shown.contains("counterterms[1][0] = 5/6*J0*omega^-1"), "{shown}");
    assert!(shown.contains("torus_solution.q[0] = "), "{shown}");
}

#[test]
fn show_single_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nf.json");
    stdout(&isokam(&["birkhoff", "--model", "quartic", "--out", out.to_str().unwrap()]));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let series = dir.path().join("z.json");
    fs::write(&series, doc["normal_form"].to_string()).unwrap();
    let shown = stdout(&isokam(&["show", series.to_str().unwrap()]));
    assert!(shown.contains("3/4*eps*J0*p"), "{shown}");
    assert!(shown.contains("1 DOF, exact"), "{shown}");
}

#[test]
fn model_file_with_numeric_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("coupled.toml");
    fs::write(&model, "name = \"coupled\"\ndof = 2\nomega0 = [1, 1.618]\n[[term]]\neps = 1\ncoeff = \"1/2\"\nx = [2, 2]\ny = [0, 0]\n").unwrap();
    let path = model.to_str().unwrap();
    let text = stdout(&isokam(&["birkhoff", "--model-file", path, "--numeric"]));
    assert!(text.contains("omega_2 = omega0_2"), "{text}");
    let text = stdout(&isokam(&["kolmogorov", "--model-file", path, "--omega", "1.01,1.63", "--numeric"]));
    assert!(text.contains("omega0_1 = omega_1"), "{text}");
}

fn failure(args: &[&str]) -> String {
    let out = isokam(args);
    assert!(!out.status.success(), "expected failure for {args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

#[test]
fn errors_are_one_line_diagnostics() {
    assert!(failure(&["birkhoff", "--model", "nope"]).contains("unknown model"));
    assert!(failure(&["invert", "--model", "quartic", "--eps", "1", "--omega", "1.2"]).contains("--omega0 is required"));
    assert!(failure(&["show", "/nonexistent/file.json"]).contains("reading"));

    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("resonant.toml");
    fs::write(&model, "dof = 2\nomega0 = [1, 1]\n[[term]]\neps = 1\ncoeff = 1\nx = [2, 2]\ny = [0, 0]\n").unwrap();
    let path = model.to_str().unwrap();
    assert!(failure(&["birkhoff", "--model-file", path]).contains("k=[2, -2]"));
    assert!(failure(&["kolmogorov", "--model-file", path]).contains("explicit --omega"));
}
