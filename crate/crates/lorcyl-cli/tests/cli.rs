//! End-to-end tests of the `lorcyl` binary: golden outputs, exit codes,
//! and the artifact formats of every subcommand.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorcyl"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process should exit normally")
}

fn write_spec(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).expect("spec file should be writable");
    path
}

fn vicious(dir: &TempDir) -> PathBuf {
    write_spec(dir, "vicious.toml", "type = flat\nE = 1\nF = 0\nG = 1\n")
}

fn hyperbolic(dir: &TempDir) -> PathBuf {
    write_spec(dir, "hyperbolic.toml", "type = flat\nE = -1\nF = 0\nG = -1\n")
}

fn null_circle(dir: &TempDir) -> PathBuf {
    write_spec(dir, "null.toml", "type = flat\nE = 0\nF = 1\nG = 0\n")
}

/// Parses a P2 PGM into (nx, ny, pixels) with pixels in row-major order
/// from the top row down, matching the writer's layout.
fn parse_pgm(path: &Path) -> (usize, usize, Vec<u32>) {
    let text = fs::read_to_string(path).expect("PGM should be readable");
    let mut words = text.split_ascii_whitespace();
    assert_eq!(words.next(), Some("P2"));
    let nx: usize = words.next().expect("width").parse().expect("width is a number");
    let ny: usize = words.next().expect("height").parse().expect("height is a number");
    assert_eq!(words.next(), Some("255"));
    let pixels: Vec<u32> =
        words.map(|w| w.parse().expect("pixel value is a number")).collect();
    assert_eq!(pixels.len(), nx * ny);
    (nx, ny, pixels)
}

#[test]
fn classify_prints_the_vicious_golden_output() {
    let dir = TempDir::new().expect("tempdir");
    let spec = vicious(&dir);
    let out = run(&["classify", spec.to_str().expect("utf-8 path"), "--dual"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "class=TotallyVicious\n\
         dual_class=GloballyHyperbolic\n\
         q_dx=-1\n\
         dx_character=Timelike\n\
         null_dir_1=1,1\n\
         null_dir_2=-1,1\n\
         time_orientation=1,0\n"
    );
    assert_eq!(stderr(&out), "");
}

#[test]
fn classify_prints_the_hyperbolic_golden_output() {
    let dir = TempDir::new().expect("tempdir");
    let spec = hyperbolic(&dir);
    let out = run(&["classify", spec.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out),
        "class=GloballyHyperbolic\n\
         q_dx=1\n\
         dx_character=Spacelike\n\
         null_dir_1=-1,1\n\
         null_dir_2=1,1\n\
         time_orientation=0,1\n"
    );
    assert_eq!(stderr(&out), "");
}

#[test]
fn classify_warns_on_the_null_knife_edge() {
    let dir = TempDir::new().expect("tempdir");
    let spec = null_circle(&dir);
    let out = run(&["classify", spec.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out),
        "class=ChronologicalNonCausal\n\
         q_dx=0\n\
         dx_character=Null\n\
         null_dir_1=1,0\n\
         null_dir_2=0,2\n\
         time_orientation=-0.5,1\n"
    );
    assert!(stderr(&out).contains("knife edge"), "stderr: {}", stderr(&out));
}

#[test]
fn classify_accepts_conformal_specs_through_their_flat_part() {
    let dir = TempDir::new().expect("tempdir");
    let spec = write_spec(
        &dir,
        "conf.toml",
        "type = conformal\nE = -1\nF = 0\nG = -1\npsi = sin(2*pi*x)\n",
    );
    let out = run(&["classify", spec.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).starts_with("class=GloballyHyperbolic\n"));

    let bad = write_spec(
        &dir,
        "aperiodic.toml",
        "type = conformal\nE = -1\nF = 0\nG = -1\npsi = x\n",
    );
    let out = run(&["classify", bad.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("periodic"), "stderr: {}", stderr(&out));
}

#[test]
fn domain_errors_exit_one() {
    let dir = TempDir::new().expect("tempdir");

    let out = run(&["classify", "no-such-file.toml"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).starts_with("error: "));

    let malformed = write_spec(&dir, "malformed.toml", "type = flat\nE = what\nF = 0\nG = 1\n");
    assert_eq!(exit_code(&run(&["classify", malformed.to_str().expect("utf-8 path")])), 1);

    let degenerate =
        write_spec(&dir, "degenerate.toml", "type = flat\nE = 1\nF = 0\nG = -2\n");
    assert_eq!(exit_code(&run(&["classify", degenerate.to_str().expect("utf-8 path")])), 1);

    let general = write_spec(
        &dir,
        "general.toml",
        "type = general\nE = 1 + 0.25*sin(2*pi*x)\nF = 0\nG = 1\n",
    );
    let out = run(&["classify", general.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("constant"), "stderr: {}", stderr(&out));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = TempDir::new().expect("tempdir");
    let spec = hyperbolic(&dir);
    let spec = spec.to_str().expect("utf-8 path");

    assert_eq!(exit_code(&run(&["oracle", spec, "--grid", "3x3"])), 2);
    assert_eq!(exit_code(&run(&["oracle", spec, "--grid", "banana"])), 2);
    assert_eq!(exit_code(&run(&["oracle", spec, "--y-range", "1:-1"])), 2);
    assert_eq!(exit_code(&run(&["oracle", spec, "--stencil", "0"])), 2);
    assert_eq!(exit_code(&run(&["oracle", spec, "--eps", "-1"])), 2);
    assert_eq!(exit_code(&run(&["classify", spec, "--eps", "-0.5"])), 2);
    let dir2 = TempDir::new().expect("tempdir");
    let pgm = dir2.path().join("d.pgm");
    let pgm = pgm.to_str().expect("utf-8 path");
    assert_eq!(
        exit_code(&run(&[
            "render", "diamond", spec, "--p", "zero", "--q", "0,1", "--out", pgm
        ])),
        2
    );
    // Usage errors from argument parsing share the configuration code.
    assert_eq!(exit_code(&run(&["classify", spec, "--no-such-flag"])), 2);
    assert_eq!(exit_code(&run(&["render", "cones", spec])), 2);
}

#[test]
fn oracle_prints_the_hyperbolic_golden_report() {
    let dir = TempDir::new().expect("tempdir");
    let spec = hyperbolic(&dir);
    let out = run(&["oracle", spec.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "inferred=GloballyHyperbolic\n\
         exact=GloballyHyperbolic\n\
         match=true\n\
         causal_cycle=false\n\
         timelike_cycle=false\n\
         timelike_scc_coverage=0\n\
         reach_from_origin=0.87109375\n\
         diamond_violations=0\n\
         diamond_samples=1000\n\
         soundness_violations=0\n\
         sampled_pairs=512\n\
         interior_pairs=159\n\
         interior_reached=159\n\
         agreement=1\n"
    );
}

#[test]
fn oracle_runs_are_deterministic_and_write_artifacts() {
    let dir = TempDir::new().expect("tempdir");
    let spec = vicious(&dir);
    let spec = spec.to_str().expect("utf-8 path");

    let csv_path = dir.path().join("reach.csv");
    let first = run(&["oracle", spec, "--out", csv_path.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&first), 0);
    let first_csv = fs::read_to_string(&csv_path).expect("CSV exists");
    let second = run(&["oracle", spec, "--out", csv_path.to_str().expect("utf-8 path")]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(first_csv, fs::read_to_string(&csv_path).expect("CSV exists"));

    let mut lines = first_csv.lines();
    assert_eq!(lines.next(), Some("i,j,reachable"));
    let mut count = 0;
    for line in lines {
        let reachable = line.split(',').nth(2).expect("three columns");
        assert!(reachable == "0" || reachable == "1", "line {line}");
        count += 1;
    }
    assert_eq!(count, 64 * 64);

    let pgm_path = dir.path().join("reach.pgm");
    let out = run(&["oracle", spec, "--out", pgm_path.to_str().expect("utf-8 path")]);
    assert_eq!(exit_code(&out), 0);
    let (nx, ny, pixels) = parse_pgm(&pgm_path);
    assert_eq!((nx, ny), (64, 64));
    // A vicious metric reaches the whole grid.
    assert!(pixels.iter().all(|&v| v == 255));
}

#[test]
fn render_cones_emits_null_directions_per_node() {
    let dir = TempDir::new().expect("tempdir");
    let spec = write_spec(&dir, "skew.toml", "type = flat\nE = 1\nF = 1\nG = 1\n");
    let csv_path = dir.path().join("cones.csv");
    let out = run(&[
        "render",
        "cones",
        spec.to_str().expect("utf-8 path"),
        "--grid",
        "4x4",
        "--out",
        csv_path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let text = fs::read_to_string(&csv_path).expect("CSV exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,d1x,d1y,d2x,d2y"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line
            .split(',')
            .map(|w| w.parse().expect("numeric cell"))
            .collect();
        assert_eq!(fields.len(), 6);
        let (d1x, d1y, d2x, d2y) = (fields[2], fields[3], fields[4], fields[5]);
        // d1 ~ (1 + sqrt 2, 1), d2 ~ (1 - sqrt 2, 1); both must be null
        // for q(v) = -dx^2 + 2 dx dy + dy^2.
        assert!((d1x - (1.0 + 2.0f64.sqrt())).abs() <= 1e-14);
        assert!((d2x - (1.0 - 2.0f64.sqrt())).abs() <= 1e-14);
        for (dx, dy) in [(d1x, d1y), (d2x, d2y)] {
            let q = -dx * dx + 2.0 * dx * dy + dy * dy;
            assert!(q.abs() <= 1e-12 * (4.0 * (dx * dx + dy * dy)), "q = {q}");
        }
        rows += 1;
    }
    assert_eq!(rows, 16);
}

#[test]
fn render_diamond_masks_the_causal_interval() {
    let dir = TempDir::new().expect("tempdir");
    let spec = hyperbolic(&dir);
    let pgm_path = dir.path().join("diamond.pgm");
    let out = run(&[
        "render",
        "diamond",
        spec.to_str().expect("utf-8 path"),
        "--p",
        "0,0",
        "--q",
        "0,1",
        "--grid",
        "32x32",
        "--out",
        pgm_path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let (nx, ny, pixels) = parse_pgm(&pgm_path);
    assert_eq!((nx, ny), (32, 32));
    let pixel = |i: usize, j: usize| pixels[(ny - 1 - j) * nx + i];
    let center_y = |j: usize| -1.0 + (j as f64 + 0.5) * (2.0 / 32.0);

    let mut set = 0;
    for j in 0..ny {
        for i in 0..nx {
            match pixel(i, j) {
                0 => {}
                255 => {
                    set += 1;
                    // Members sit between the diamond's y levels.
                    let y = center_y(j);
                    assert!((0.0..=1.0).contains(&y), "member at y = {y}");
                }
                other => panic!("unexpected pixel value {other}"),
            }
        }
    }
    assert!(set > 50, "only {set} member cells");
    // A cell right above the foot point is well inside the diamond.
    assert_eq!(pixel(0, 23), 255);
    // The mirror cell below the foot point is outside.
    assert_eq!(pixel(0, 8), 0);
}

#[test]
fn render_curvature_distinguishes_flat_from_curved() {
    let dir = TempDir::new().expect("tempdir");

    let flat = hyperbolic(&dir);
    let flat_csv = dir.path().join("flat.csv");
    let out = run(&[
        "render",
        "curvature",
        flat.to_str().expect("utf-8 path"),
        "--grid",
        "8x8",
        "--out",
        flat_csv.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(&flat_csv).expect("CSV exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,K"));
    for line in lines {
        assert!(line.ends_with(",0.0000000000000000e0"), "line {line}");
    }

    // The flat variable-coefficient family also has exactly zero output.
    let named = write_spec(
        &dir,
        "named.toml",
        "type = general\nE = 1 + 0.25*sin(2*pi*x)\nF = 0\nG = 1\n",
    );
    let named_csv = dir.path().join("named.csv");
    let out = run(&[
        "render",
        "curvature",
        named.to_str().expect("utf-8 path"),
        "--grid",
        "16x16",
        "--out",
        named_csv.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&named_csv).expect("CSV exists");
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",0.0000000000000000e0"), "line {line}");
    }

    // A genuinely curved conformal metric produces nonzero curvature.
    let curved = write_spec(
        &dir,
        "curved.toml",
        "type = conformal\nE = -1\nF = 0\nG = -1\npsi = sin(2*pi*x)\n",
    );
    let curved_csv = dir.path().join("curved.csv");
    let out = run(&[
        "render",
        "curvature",
        curved.to_str().expect("utf-8 path"),
        "--grid",
        "64x64",
        "--out",
        curved_csv.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&curved_csv).expect("CSV exists");
    let mut max_abs = 0.0f64;
    for line in text.lines().skip(1) {
        let k: f64 = line.split(',').nth(2).expect("K column").parse().expect("numeric K");
        assert!(k.is_finite());
        max_abs = max_abs.max(k.abs());
    }
    assert!(max_abs > 0.1, "curvature should be visible, max |K| = {max_abs}");
}

#[test]
fn render_respects_the_grid_flag() {
    let dir = TempDir::new().expect("tempdir");
    let spec = hyperbolic(&dir);
    let csv_path = dir.path().join("cones57.csv");
    let out = run(&[
        "render",
        "cones",
        spec.to_str().expect("utf-8 path"),
        "--grid",
        "5x7",
        "--y-range",
        "0:3",
        "--out",
        csv_path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(&csv_path).expect("CSV exists");
    assert_eq!(text.lines().count(), 1 + 5 * 7);
    let first_row = text.lines().nth(1).expect("data row");
    assert!(first_row.starts_with("0.0000000000000000e0,0.0000000000000000e0,"));
    let last_row = text.lines().last().expect("data row");
    assert!(last_row.starts_with("8.0000000000000004e-1,3.0000000000000000e0,"));
}
