use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn stretchlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stretchlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let out = stretchlab(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# stretchlab v1"));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stretchlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ground_spectrum_sweep_has_constant_ground_level() {
    let (h, rows) = csv(&["spectrum", "--preset", "well-gs"]);
    assert_eq!(rows.len(), 41);
    assert!(col(&h, &rows, "E0").iter().all(|&e| e == PI * PI / 2.0));
    assert_eq!(col(&h, &rows, "L")[3], 0.15);
    assert!(rows.iter().all(|r| r.last().unwrap() == "quantization"));
}

#[test]
fn harmonic_spectrum_pins_level_four() {
    let (h, rows) = csv(&["spectrum", "--preset", "harmonic-n4", "--sweep", "0:2:0.25"]);
    assert!(col(&h, &rows, "E4").iter().all(|&e| e == 4.5));
}

#[test]
fn excited_spectrum_forms_doublets() {
    let (h, rows) = csv(&["spectrum", "--preset", "fig4", "--sweep", "0.5:1.5:0.5"]);
    let split: Vec<f64> = col(&h, &rows, "E1").iter().zip(col(&h, &rows, "E0")).map(|(a, b)| a - b).collect();
    assert!(split[0] > split[1] && split[1] > split[2]);
}

#[test]
fn two_barrier_grid_is_row_major() {
    let (h, rows) = csv(&["spectrum", "--preset", "fig5"]);
    assert_eq!(rows.len(), 25);
    assert_eq!(&h[..2], ["L1", "L2"]);
    assert_eq!((rows[1][0].as_str(), rows[1][1].as_str()), ("0.0", "0.2"));
    assert!(col(&h, &rows, "E1").iter().all(|e| (e - 2.0 * PI * PI).abs() < 1e-9));
}

#[test]
fn ground_wavefunction_is_flat_on_the_plateau() {
    let (h, rows) = csv(&["wavefunctions", "--preset", "well-gs", "--at", "0.4"]);
    let (x, psi) = (col(&h, &rows, "x"), col(&h, &rows, "psi0"));
    let flat: Vec<f64> = x.iter().zip(&psi).filter(|(x, _)| x.abs() <= 0.2).map(|(_, p)| *p).collect();
    assert!(flat.len() > 100);
    assert!(flat.iter().all(|p| (p - flat[0]).abs() < 1e-12 && *p > 0.0));
}

#[test]
fn unstretched_wavefunctions_are_seed_states() {
    let (h, rows) = csv(&["wavefunctions", "--preset", "fig3", "--at", "0"]);
    for (x, p) in col(&h, &rows, "x").iter().zip(col(&h, &rows, "psi0")) {
        assert!((p - 2f64.sqrt() * (PI * x).cos()).abs() < 1e-12);
    }
}

#[test]
fn two_barrier_wavefunctions_have_three_columns() {
    let (h, _) = csv(&["wavefunctions", "--preset", "well-two-barrier"]);
    assert_eq!(h, ["x", "psi0", "psi1", "psi2"]);
}

#[test]
fn grid2d_writes_state_and_potential() {
    let out = tmp("fig7.csv");
    let status = stretchlab(&["grid2d", "--preset", "fig7", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 201 * 201);
    let centre: Vec<f64> = rows
        .iter()
        .filter(|r| (0.5..=0.8).contains(&r[0]) && (0.5..=1.0).contains(&r[1]))
        .map(|r| r[2])
        .collect();
    let plateau = 2.0 / (1.6f64 * 2.0).sqrt();
    assert!(centre.len() > 1000 && centre.iter().all(|v| (v - plateau).abs() < 1e-12));
    assert!(tmp("fig7.potential.csv").exists());
}

#[test]
fn grid2d_without_stretch_is_product_of_sines() {
    let (h, rows) = csv(&["grid2d", "--at", "0,0", "--resolution", "21"]);
    let (x, y, psi) = (col(&h, &rows, "x"), col(&h, &rows, "y"), col(&h, &rows, "psi"));
    for i in 0..x.len() {
        assert!((psi[i] - 2.0 * (PI * x[i]).sin() * (PI * y[i]).sin()).abs() < 1e-12);
    }
}

#[test]
fn constant_profile_margin_is_infinite() {
    let (h, rows) = csv(&["adiabatic", "--l-in", "0.3", "--l-fin", "0.3"]);
    let j = h.iter().position(|c| c == "margin").unwrap();
    assert!(rows.iter().all(|r| r[j] == "inf"));
}

#[test]
fn gentle_step_has_large_margin_and_quadratic_scaling() {
    let (h, rows) = csv(&["adiabatic", "--l-in", "0.2", "--l-fin", "0.28", "--y-in", "0", "--y-fin", "3", "--k", "1"]);
    assert!(col(&h, &rows, "margin").iter().all(|&m| m > 100.0));
    let peak = |y_fin: &str, y: &str| {
        let (h, rows) = csv(&["adiabatic", "--y-fin", y_fin, "--sweep", &format!("{y}:{y}:1")]);
        col(&h, &rows, "margin")[0]
    };
    let ratio = peak("3", "1.5") / peak("1.5", "0.75");
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn validate_passes_and_reports_enough_checks() {
    let out = stretchlab(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 15);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn perturbed_plateau_fails_validation() {
    let out = stretchlab(&["validate", "--perturb-plateau", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"energy_invariance_oracle"), "{failed:?}");
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["spectrum", "--preset", "fig6", "--sweep", "0:1:0.1"];
    let a = stretchlab(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_stretchlab"))
        .args(args)
        .env("STRETCHLAB_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
    assert_eq!(a, stretchlab(&args).stdout);
}

#[test]
fn json_and_svg_formats() {
    let out = stretchlab(&["spectrum", "--preset", "fig3", "--sweep", "0:1:0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["version"], "stretchlab v1");
    let svg = stretchlab(&["wavefunctions", "--preset", "fig6", "--format", "svg"]).stdout;
    assert!(String::from_utf8(svg).unwrap().starts_with("<svg"));
}

#[test]
fn potential_file_is_solved_by_shooting() {
    let path = tmp("well.json");
    let v = stretchlab::potentials::SeedingSpec::infinite_well(1.0).unwrap().potential().unwrap();
    std::fs::write(&path, v.to_json()).unwrap();
    let (h, rows) = csv(&["spectrum", "--potential", path.to_str().unwrap(), "--levels", "2"]);
    assert!((col(&h, &rows, "E1")[0] - 2.0 * PI * PI).abs() < 1e-5);
    assert_eq!(rows[0].last().unwrap(), "shooting");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| stretchlab(args).status.code();
    assert_eq!(code(&["spectrum"]), Some(2));
    assert_eq!(code(&["spectrum", "--preset", "fig9"]), Some(2));
    assert_eq!(code(&["spectrum", "--preset", "fig3", "--sweep", "1:0:0.1"]), Some(2));
    assert_eq!(code(&["spectrum", "--preset", "fig3", "--resolution", "100"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["spectrum", "--preset", "fig3", "--sweep", "0.3:0.3:1", "--levels", "21"]), Some(3));
    let err = stretchlab(&["spectrum", "--preset", "fig3", "--sweep", "0.3:0.3:1", "--levels", "21"]).stderr;
    assert!(String::from_utf8(err).unwrap().contains("L = 0.3"));
}
