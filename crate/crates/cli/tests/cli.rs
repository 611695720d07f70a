use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn texcurve(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_texcurve"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn texcurve")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workdir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cubic.curve"), "# b = [0, 1, 1, 0]\ndegree 3\nchannels 1\n0\n1\n1\n0\n").unwrap();
    dir
}

fn max_row(csv: &str) -> f64 {
    let line = csv.lines().find(|l| l.starts_with("#max,")).unwrap();
    line.split(',').skip(1).map(|v| v.parse::<f64>().unwrap()).fold(0.0, f64::max)
}

#[test]
fn encode_seiler_writes_a_2x2_container() {
    let dir = workdir();
    let o = texcurve(dir.path(), &["encode", "--layout", "seiler", "--in", "cubic.curve", "--format", "f32", "--out", "c.ctex"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("width: 2\n") && text.contains("height: 2\n") && text.contains("depth: 1\n"));
    let curve = texcurve::container::load(dir.path().join("c.ctex")).unwrap();
    assert_eq!(curve.grid.dims(), (2, 2, 1));
    assert_eq!(curve.grid.data(), &[0.0, 0.0, 3.0, 3.0]);
}

#[test]
fn eval_prints_the_curve_value() {
    let dir = workdir();
    texcurve(dir.path(), &["encode", "--layout", "seiler", "--in", "cubic.curve", "--out", "c.ctex"]);
    let o = texcurve(dir.path(), &["eval", "--in", "c.ctex", "--t", "0.5", "--bits", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.75\n");
    assert!(o.stderr.is_empty());
}

#[test]
fn exit_codes() {
    let dir = workdir();
    let d = dir.path();
    fs::write(d.join("sextic.curve"), "degree 6\n0\n1\n0\n1\n0\n1\n0\n").unwrap();
    let o = texcurve(d, &["encode", "--layout", "seiler", "--in", "sextic.curve", "--out", "x.ctex"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree 6"));
    assert!(o.stdout.is_empty());

    // the Seiler point b0 + d1 = 3 does not fit unorm8
    let o = texcurve(d, &["encode", "--layout", "seiler", "--in", "cubic.curve", "--format", "unorm8", "--out", "x.ctex"]);
    assert_eq!(o.status.code(), Some(2));
    let o = texcurve(d, &["encode", "--layout", "seiler", "--in", "cubic.curve", "--format", "unorm8", "--rescale", "--out", "x.ctex"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("scale: 0.3333333333333333"));

    let o = texcurve(d, &["eval", "--in", "x.ctex", "--mode", "dc", "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(4));
    let o = texcurve(d, &["eval", "--in", "x.ctex", "--t", "1.5"]);
    assert_eq!(o.status.code(), Some(5));
    let o = texcurve(d, &["eval", "--in", "missing.ctex", "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = texcurve(d, &["encode", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn convert_power_to_bernstein() {
    let dir = workdir();
    fs::write(dir.path().join("t.curve"), "degree 3\n0\n1\n0\n0\n").unwrap();
    let o = texcurve(dir.path(), &["convert", "--power-to-bernstein", "--in", "t.curve"]);
    assert!(o.status.success());
    let parsed = texcurve::CurveFile::parse(&stdout(&o)).unwrap();
    let values: Vec<f64> = parsed.points.iter().map(|p| p[0]).collect();
    for (v, e) in values.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]) {
        assert!((v - e).abs() < 1e-15);
    }
    let o = texcurve(dir.path(), &["convert", "--bernstein-to-power", "--in", "cubic.curve"]);
    // 0·s³ + 3st² … = 3t − 3t²
    let parsed = texcurve::CurveFile::parse(&stdout(&o)).unwrap();
    assert_eq!(parsed.points.iter().map(|p| p[0]).collect::<Vec<_>>(), [0.0, 3.0, -3.0, 0.0]);
}

#[test]
fn convert_boehm_yields_a_chain() {
    let dir = workdir();
    fs::write(dir.path().join("s.curve"), "degree 3\nknots 0 0 0 0 0.5 1 1 1 1\n0\n1\n-1\n2\n0.5\n").unwrap();
    let o = texcurve(dir.path(), &["convert", "--boehm", "--in", "s.curve", "--out", "chain.curve"]);
    assert!(o.status.success());
    let chain = texcurve::CurveFile::parse(&fs::read_to_string(dir.path().join("chain.curve")).unwrap()).unwrap();
    assert_eq!(chain.segments, Some(2));
    assert_eq!(chain.chain().unwrap().len(), 2);
}

#[test]
fn quantized_sweep_is_no_better_than_ideal() {
    let dir = workdir();
    let d = dir.path();
    texcurve(d, &["encode", "--layout", "dc", "--in", "cubic.curve", "--out", "c.ctex"]);
    let ideal = texcurve(d, &["sweep", "--in", "c.ctex", "--curve", "cubic.curve", "--bits", "0"]);
    let coarse = texcurve(d, &["sweep", "--in", "c.ctex", "--curve", "cubic.curve", "--bits", "8"]);
    assert!(ideal.status.success() && coarse.status.success());
    let (a, b) = (stdout(&ideal), stdout(&coarse));
    assert!(a.starts_with("t,ref_0,test_0,absdev_0\n"));
    assert_eq!(a.lines().count(), 1 + 1024 + 3);
    assert!(max_row(&b) >= max_row(&a));
    assert!(max_row(&b) > 0.0);
}

#[test]
fn zigzag_seed_and_inspect() {
    let dir = workdir();
    let d = dir.path();
    fs::write(d.join("z.curve"), "degree 2\nsegments 2\n0\n0.5\n0.2\n0.1\n0.6\n").unwrap();
    // default seed 0.5 leaves a texel outside [0, 1]
    let o = texcurve(d, &["encode", "--layout", "zigzag", "--in", "z.curve", "--format", "u8", "--out", "z.ctex"]);
    assert_eq!(o.status.code(), Some(2));
    let o = texcurve(d, &["encode", "--layout", "zigzag", "--in", "z.curve", "--format", "u8", "--seed-texel", "auto", "--out", "z.ctex"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = texcurve(d, &["encode", "--layout", "zigzag", "--in", "z.curve", "--format", "u8", "--seed-texel", "0.9", "--out", "z.ctex"]);
    assert!(o.status.success());
    let o = texcurve(d, &["inspect", "--in", "z.ctex"]);
    let text = stdout(&o);
    assert!(text.contains("layout: DC_ZIGZAG"));
    assert_eq!(text.lines().filter(|l| l.starts_with("texel ")).count(), 6);
    assert!(text.contains("(raw "));
}

#[test]
fn render_writes_p6() {
    let dir = workdir();
    let d = dir.path();
    texcurve(d, &["encode", "--layout", "dc", "--in", "cubic.curve", "--out", "c.ctex"]);
    let o = texcurve(d, &["render", "--in", "c.ctex", "--curve", "cubic.curve", "--width", "40", "--height", "30"]);
    assert!(o.status.success());
    assert!(o.stdout.starts_with(b"P6\n40 30\n255\n"));
    assert_eq!(o.stdout.len(), 13 + 40 * 30 * 3);
}

#[test]
fn surface_eval_and_rational() {
    let dir = workdir();
    let d = dir.path();
    fs::write(d.join("p.curve"), "degree 1\nrows 2\n0\n1\n1\n0\n").unwrap();
    texcurve(d, &["encode", "--layout", "patch", "--in", "p.curve", "--out", "p.ctex"]);
    let o = texcurve(d, &["eval", "--in", "p.ctex", "--u", "0.5", "--v", "0.5", "--bits", "0"]);
    assert_eq!(stdout(&o), "0.5\n");

    fs::write(d.join("arc.curve"), "degree 2\nweights 1 0.7071067811865476 1\n1 0\n1 1\n0 1\n").unwrap();
    let o = texcurve(d, &["encode", "--layout", "rational", "--in", "arc.curve", "--out", "a.ctex"]);
    assert!(o.status.success());
    let o = texcurve(d, &["eval", "--in", "a.ctex", "--t", "0.3", "--bits", "0"]);
    let xy: Vec<f64> = stdout(&o).split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert!((xy[0] * xy[0] + xy[1] * xy[1] - 1.0).abs() < 1e-6);
    let o = texcurve(d, &["sweep", "--in", "a.ctex", "--curve", "arc.curve", "--bits", "0", "--samples", "50"]);
    assert!(max_row(&stdout(&o)) < 1e-6);
}
