use std::path::PathBuf;
use std::process::{Command, Output};

fn pinchsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinchsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pinchsec(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn table1_matches_golden() {
    let out = stdout(&["table1"]);
    assert_eq!(out, golden("table1.csv"));
    assert_eq!(out.lines().count(), 8);
    let row23: Vec<&str> = out.lines().last().unwrap().split(',').collect();
    assert_eq!(row23[0], "23");
    assert_eq!(row23[1], "case1");
    let lo: f64 = row23[2].parse().unwrap();
    assert!((lo - 5.13e-4).abs() / 5.13e-4 < 0.01);
    assert_eq!(row23[6].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn sweep_is_byte_stable() {
    let args = [
        "sweep", "--axis", "rho_t_db", "15", "40", "1", "--modes", "closed_form,monte_carlo", "--samples", "20000",
        "--seed", "7",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 27);
    assert_eq!(
        lines[0],
        "axis_value,l1,l2,eps1,eps2,omega1,omega2,omega3,omega4,prob_omega1,prob_omega2,sop_cf,sop_mc,mc_stderr,sop_fixed_mc,case_tag"
    );
    // fixed antenna and optimizer columns stay empty
    assert!(lines[1].ends_with(",,"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "--axis", "rho_t_db", "18", "26", "2", "--modes", "monte_carlo,fixed_antenna_mc", "--samples", "150000"];
    let one = Command::new(env!("CARGO_BIN_EXE_pinchsec"))
        .args(args)
        .env("PINCHSEC_THREADS", "1")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(String::from_utf8(one.stdout).unwrap(), stdout(&args));
}

#[test]
fn fig8_landscape() {
    let a = stdout(&["fig8", "--rho-t-db", "20"]);
    assert_eq!(a, stdout(&["fig8", "--rho-t-db", "20"]));
    let rows: Vec<(f64, f64)> = a
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[6])
        })
        .collect();
    let best = rows.iter().copied().fold((0.0, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
    assert!((best.0 - 7.25e-4).abs() <= 1e-5, "{best:?}");
    assert_eq!(rows.last().unwrap().1, 1.0);

    let b = stdout(&["fig8", "--rho-t-db", "22"]);
    let zeros: Vec<f64> = b
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[6] == 0.0).then_some(f[0])
        })
        .collect();
    let (lo, hi) = (zeros[0], *zeros.last().unwrap());
    // every grid point inside the analytic interval is on the plateau
    assert!(lo <= 5.8e-4 + 1e-12 && hi >= 2.61e-3 - 1e-12, "{lo} {hi}");
    // contiguous plateau
    assert_eq!(zeros.len(), ((hi - lo) / 1e-5).round() as usize + 1);
}

#[test]
fn degenerate_allocation_reports_certain_outage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("alpha.toml");
    std::fs::write(&cfg, "allocation.alpha1 = 0.9\nallocation.alpha2 = 0.1\n").unwrap();
    let out = pinchsec(&["sop", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "sop = 1.0"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha-ratio-le-gamma1"));
}

#[test]
fn optimize_writes_landscape() {
    let dir = tempfile::tempdir().unwrap();
    let land = dir.path().join("land.csv");
    let text = stdout(&["optimize", "--rho-t-db", "22", "--landscape", land.to_str().unwrap()]);
    assert!(text.contains("case_tag = \"case1\""));
    assert!(text.contains("min_sop = 0.0"));
    assert_eq!(std::fs::read_to_string(&land).unwrap().lines().count(), 1572);
}

#[test]
fn errors_exit_nonzero_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "link.gamma1_db = 10\nlink.gama2_db = 15\n").unwrap();
    let out = pinchsec(&["sop", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("gama2_db"));

    let out = pinchsec(&["sop", "--config", "/nonexistent/x.toml"]);
    assert!(!out.status.success());

    let out = pinchsec(&["sweep", "--axis", "rho_t_db", "40", "15", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("start"));

    let out = pinchsec(&["sweep", "--axis", "rho_t_db", "15", "40", "1", "--modes", "closed_form,nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("modes"));

    let out = pinchsec(&["frobnicate"]);
    assert!(!out.status.success());

    let out = pinchsec(&["sop", "--model", "equal:0.9"]);
    assert!(!out.status.success());
}
