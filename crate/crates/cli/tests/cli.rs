use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use corrlab_cli::{parse_function_spec, parse_point, ExperimentConfig};
use corrlab_core::measures::{Part, TestFunction};
use corrlab_core::SpherePoint;

fn corrlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("corrlab-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    for entry in fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Pixel grid of a binary PGM written by `render`.
fn read_pgm(path: &Path) -> (usize, Vec<u8>) {
    let bytes = fs::read(path).unwrap();
    let header: Vec<&[u8]> = bytes.splitn(4, |&b| b == b'\n').collect();
    assert_eq!(header[0], b"P5");
    let size: usize = std::str::from_utf8(header[1]).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert_eq!(header[2], b"255");
    let pixels = header[3].to_vec();
    assert_eq!(pixels.len(), size * size);
    (size, pixels)
}

/// Modulus at the centre of each lit pixel for the window [-2.5, 2.5]².
fn lit_radii(size: usize, pixels: &[u8]) -> Vec<f64> {
    let cell = 5.0 / size as f64;
    let mut radii = Vec::new();
    for (i, &v) in pixels.iter().enumerate() {
        if v > 0 {
            let (row, col) = (i / size, i % size);
            let x = -2.5 + (col as f64 + 0.5) * cell;
            let y = 2.5 - (row as f64 + 0.5) * cell;
            radii.push(x.hypot(y));
        }
    }
    radii
}

#[test]
fn degrees_of_the_semigroup() {
    let dir = scratch("degrees");
    let out = corrlab(&dir, &["degrees", "semigroup.corr"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "d = 4"), "{text}");
    assert!(text.lines().any(|l| l == "d_f = 2"), "{text}");
    let builtin = stdout(&corrlab(&dir, &["degrees", "builtin:semigroup"]));
    assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), builtin.lines().skip(1).collect::<Vec<_>>());
}

#[test]
fn finite_check_on_a_swap() {
    let dir = scratch("finite");
    let out = corrlab(&dir, &["finite-check", "swap.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("\"ergodic\":true"), "{text}");
    assert!(text.contains("\"mixing\":false"), "{text}");
    assert!(text.contains("\"weak_mixing\":false"), "{text}");
}

#[test]
fn config_errors_exit_2_without_artifacts() {
    let dir = scratch("exit2");
    let out = corrlab(&dir, &["measure", "--sampler", "annulus", "--samples", "0", "-o", "x.cloud"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("x.cloud").exists());
    assert!(!dir.join("x.cloud.manifest.json").exists());

    let out = corrlab(&dir, &["correlate", "builtin:squaring", "--cloud", "missing.cloud", "--phi", "const:1", "--psi", "const:1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = corrlab(&dir, &["birkhoff", "builtin:squaring", "--start", "2", "--phi", "fourier:1:rx"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 10"));

    fs::write(dir.join("bad.toml"), "action = \"degrees\"\ncolour = 1\n").unwrap();
    assert_eq!(corrlab(&dir, &["run", "bad.toml"]).status.code(), Some(2));
}

#[test]
fn cap_violations_exit_4() {
    let dir = scratch("exit4");
    let out = corrlab(&dir, &["preimage", "builtin:squaring", "--point", "3", "--depth", "12", "--cap", "100", "-o", "p.cloud"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!dir.join("p.cloud").exists());
}

#[test]
fn preimages_of_the_squaring_map() {
    let dir = scratch("preimage");
    let out = corrlab(&dir, &["preimage", "builtin:squaring", "--point", "4", "--depth", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("re,")).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((f[0].hypot(f[1]) - 2f64.sqrt()).abs() < 1e-9);
        assert!((f[3] - 0.25).abs() < 1e-12);
    }
}

#[test]
fn circle_render_is_a_thin_ring() {
    let dir = scratch("circle");
    assert!(corrlab(&dir, &["measure", "--sampler", "circle", "--samples", "4000", "-o", "c.cloud"]).status.success());
    assert!(corrlab(&dir, &["render", "c.cloud", "--size", "100", "-o", "c.pgm"]).status.success());
    let (size, pixels) = read_pgm(&dir.join("c.pgm"));
    let radii = lit_radii(size, &pixels);
    assert!(radii.len() > 100);
    let cell = 5.0 / size as f64;
    assert!(radii.iter().all(|r| (r - 1.0).abs() < cell), "ring is wider than one pixel");
}

#[test]
fn annulus_render_is_a_band() {
    let dir = scratch("annulus");
    assert!(corrlab(&dir, &["measure", "--sampler", "annulus", "--samples", "20000", "--seed", "3", "-o", "a.cloud"]).status.success());
    assert!(corrlab(&dir, &["render", "a.cloud", "--size", "100", "-o", "a.pgm"]).status.success());
    let (size, pixels) = read_pgm(&dir.join("a.pgm"));
    let radii = lit_radii(size, &pixels);
    let cell = 5.0 / size as f64;
    assert!(radii.iter().all(|r| *r > 1.0 - cell && *r < 2.0 + cell));
    // most of the band is covered
    let band = (std::f64::consts::PI * 3.0) / (cell * cell);
    assert!(radii.len() as f64 > 0.8 * band, "{} of {band}", radii.len());
}

#[test]
fn empty_window_is_dark_with_a_warning() {
    let dir = scratch("dark");
    assert!(corrlab(&dir, &["measure", "--sampler", "circle", "--samples", "100", "-o", "c.cloud"]).status.success());
    let out = corrlab(&dir, &["render", "c.cloud", "--window", "5,6,-1,1", "--size", "16", "-o", "d.pgm"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let (_, pixels) = read_pgm(&dir.join("d.pgm"));
    assert!(pixels.iter().all(|&v| v == 0));

    let out = corrlab(&dir, &["render", "c.cloud", "--window", "-1,1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_rerun_is_byte_identical() {
    let dir = scratch("rerun");
    assert!(corrlab(&dir, &["measure", "--sampler", "annulus", "--samples", "200", "--seed", "9", "-o", "annulus.cloud"])
        .status
        .success());
    let config = "action = \"mixing-report\"\ncorrespondence = \"semigroup.corr\"\ncloud = \"annulus.cloud\"\n\
                  phi = \"stereo:0,0,1\"\npsi = \"indicator:annulus:1.4142135:2\"\nhorizon = 6\ncap = 256\nwalks = 32\n\
                  seed = 5\noutput = \"report.json\"\n";
    fs::write(dir.join("report.toml"), config).unwrap();
    let out = corrlab(&dir, &["run", "report.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = fs::read(dir.join("report.json")).unwrap();
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("report.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 5);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);

    fs::remove_file(dir.join("report.json")).unwrap();
    let out = corrlab(&dir, &["run", "report.json.manifest.json"]);
    assert!(out.status.success());
    assert_eq!(fs::read(dir.join("report.json")).unwrap(), first);

    let report: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(report["provenance"]["seed"], 5);
    assert_eq!(report["provenance"]["horizon"], 6);
}

#[test]
fn cloud_artifacts_reproduce_from_the_seed() {
    let dir = scratch("seeded");
    for name in ["a.cloud", "b.cloud"] {
        let args = ["measure", "builtin:semigroup", "--start", "3", "--depth", "8", "--samples", "500", "--seed", "11", "-o", name];
        assert!(corrlab(&dir, &args).status.success());
    }
    assert_eq!(fs::read(dir.join("a.cloud")).unwrap(), fs::read(dir.join("b.cloud")).unwrap());
}

#[test]
#[allow(clippy::approx_constant)]
fn function_specifiers() {
    assert_eq!(parse_function_spec("const:1").unwrap(), TestFunction::Constant(1.0));
    assert_eq!(parse_function_spec("stereo:0,0,1").unwrap(), TestFunction::Stereo([0, 0, 1]));
    assert_eq!(parse_function_spec("stereo:001").unwrap(), TestFunction::Stereo([0, 0, 1]));
    assert_eq!(
        parse_function_spec("indicator:annulus:1.4142135:2").unwrap(),
        TestFunction::Annulus { inner: 1.4142135, outer: 2.0 }
    );
    assert_eq!(
        parse_function_spec("fourier:3:im").unwrap(),
        TestFunction::Harmonic { k: 3, part: Part::Im }
    );
    assert_eq!(
        parse_function_spec("indicator:halfplane:re:-0.5").unwrap(),
        TestFunction::HalfPlane { part: Part::Re, threshold: -0.5 }
    );
    assert!(matches!(
        parse_function_spec("indicator:annulus:1:inf").unwrap(),
        TestFunction::Annulus { outer, .. } if outer.is_infinite()
    ));
    assert_eq!(parse_function_spec("cosine:1").unwrap_err().position, 0);
    assert_eq!(parse_function_spec("indicator:disk:1").unwrap_err().position, 10);
    assert_eq!(parse_function_spec("indicator:annulus:2:1").unwrap_err().position, 20);
    assert_eq!(parse_point("-1,2").unwrap(), SpherePoint::new(-1.0, 2.0));
}

#[test]
fn sample_configs_parse() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let text = fs::read_to_string(data.join("semigroup_report.toml")).unwrap();
    let cfg = ExperimentConfig::from_toml(&text).unwrap().rebase(&data).resolve().unwrap();
    assert!(cfg.cloud.unwrap().is_absolute());
}
