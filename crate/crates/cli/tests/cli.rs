use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmo-scatter")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_GRID: &str = "[grid]\ne_min = 100.0\ne_max = 800.0\nn_points = 351\n";

#[test]
fn spectrum_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("[network]\nsource = \"preset\"\n{SMALL_GRID}"));
    let out = bin(&["spectrum", "--config", &cfg, "--svg"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/baseline.csv")).unwrap();
    assert!(csv.contains("# g1 = 10"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 352);
    assert!(dir.path().join("out/baseline.svg").is_file());
    assert!(stdout(&out).contains("g1/g6 = 1"));
}

#[test]
fn decoupled_waveguide_transmits_everything() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("[network]\nsource = \"preset\"\n[waveguide]\ng1 = 0.0\ng6 = 0.0\n{SMALL_GRID}"),
    );
    let out = bin(&["spectrum", "--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/baseline.csv")).unwrap();
    let mut rows = csv.lines().filter(|l| !l.starts_with('#')).skip(1).peekable();
    assert!(rows.peek().is_some());
    for row in rows {
        let t: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(t, 1.0, "{row}");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let body = format!(
        "[network]\nsource = \"preset\"\n{SMALL_GRID}[output]\nemit_svg = true\n[[scenario]]\nsteps = [{{ inhibit = [1, 2] }}]\n[[scenario]]\nsteps = [{{ remove = 2 }}]\n"
    );
    for d in [a.path(), b.path()] {
        let out = bin(&["scenario", "--config", &write_config(d, &body)]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let mut names: Vec<_> = fs::read_dir(a.path().join("out")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for n in names {
        assert_eq!(
            fs::read(a.path().join("out").join(&n)).unwrap(),
            fs::read(b.path().join("out").join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn four_defect_scenario_run() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        r#"[network]
source = "preset"
{SMALL_GRID}
[output]
dir = "fig"
emit_svg = true

[[scenario]]
label = "inhibit J1,2"
steps = [{{ inhibit = [1, 2] }}]
[[scenario]]
label = "inhibit J2,3"
steps = [{{ inhibit = [2, 3] }}]
[[scenario]]
label = "inhibit J4,7"
steps = [{{ inhibit = [4, 7] }}]
[[scenario]]
label = "inhibit J5,6"
steps = [{{ inhibit = [5, 6] }}]
"#
    );
    let out = bin(&["scenario", "--config", &write_config(dir.path(), &body)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let fig = dir.path().join("fig");
    let svgs = fs::read_dir(&fig).unwrap().filter(|e| e.as_ref().unwrap().path().extension().unwrap() == "svg").count();
    assert_eq!(svgs, 4);
    let report = fs::read_to_string(fig.join("report.json")).unwrap();
    for stem in ["01_inhibit-j1-2", "02_inhibit-j2-3", "03_inhibit-j4-7", "04_inhibit-j5-6"] {
        assert_eq!(report.matches(&format!("\"{stem}.svg\"")).count(), 1, "{stem}");
        assert_eq!(report.matches(&format!("\"{stem}.csv\"")).count(), 1, "{stem}");
    }
    assert!(stdout(&out).contains("inhibit J5,6: l_inf = "));
}

#[test]
fn diff_of_a_file_with_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("[network]\nsource = \"preset\"\n{SMALL_GRID}"));
    assert!(bin(&["spectrum", "--config", &cfg]).status.success());
    let csv = dir.path().join("out/baseline.csv");
    let csv = csv.to_str().unwrap();
    let out = bin(&["diff", "--base", csv, "--mod", csv]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for key in ["l2", "l_inf", "area", "extrema_delta", "reflection_l_inf", "absorption_l_inf"] {
        assert!(text.lines().any(|l| l == format!("{key} = 0")), "{key} in {text}");
    }
}

#[test]
fn diff_rejects_grid_mismatch_and_bad_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("[network]\nsource = \"preset\"\n{SMALL_GRID}"));
    assert!(bin(&["spectrum", "--config", &cfg]).status.success());
    let a = dir.path().join("out/baseline.csv");
    let cfg2 = write_config(dir.path(), "[network]\nsource = \"preset\"\n[grid]\ne_min = 100.0\ne_max = 800.0\nn_points = 201\n[output]\ndir = \"other\"\n");
    assert!(bin(&["spectrum", "--config", &cfg2]).status.success());
    let b = dir.path().join("other/baseline.csv");
    let out = bin(&["diff", "--base", a.to_str().unwrap(), "--mod", b.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("grid"), "{}", stderr(&out));

    let junk = dir.path().join("junk.csv");
    fs::write(&junk, "not,a,spectrum\n").unwrap();
    let out = bin(&["diff", "--base", junk.to_str().unwrap(), "--mod", a.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("junk.csv"));
}

#[test]
fn fano_fits_a_window() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[network]\nsource = \"preset\"\n[waveguide]\ng1 = 0.1\ng6 = 10.0\n[grid]\ne_min = 450.0\ne_max = 464.0\nn_points = 801\n",
    );
    assert!(bin(&["spectrum", "--config", &cfg]).status.success());
    let csv = dir.path().join("out/baseline.csv");
    let out = bin(&["fano", "--spectrum", csv.to_str().unwrap(), "--window", "450,464", "--label", "sharp"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,q,e_res,gamma_w,t_bg,residual,converged"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "sharp");
    let e_res: f64 = row[2].parse().unwrap();
    assert!((450.0..464.0).contains(&e_res), "{e_res}");
}

#[test]
fn failures_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[network]\nsource = \"preset\"\ngama_dp = 77\n");
    let out = bin(&["spectrum", "--config", &cfg]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("gama_dp"));

    let out = bin(&["spectrum", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("missing.toml"));

    let out = bin(&["fano", "--spectrum", "x.csv", "--window", "5"]);
    assert!(!out.status.success());
}
