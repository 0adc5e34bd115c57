use std::ffi::OsString;
use std::fs;
use std::path::Path;

use paircorr_cli::{run, EXIT_RUNTIME, EXIT_VALIDATION};
use paircorr_core::pair::{
    build_logset, compare, empirical_auto, HistGeometry, PairConfig, Quadrature, RenormSpec, ScalingSpec, Source,
    ThetaInfty, Unscaled, UnscaledMode, WeightKind,
};
use paircorr_core::Grid;
use serde_json::Value;

fn argv(args: &[&str]) -> Vec<OsString> {
    std::iter::once("paircorr").chain(args.iter().copied()).map(OsString::from).collect()
}

fn cli(args: &[&str]) -> i32 {
    run(argv(args))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn json(path: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn round_trip_unscaled_probability() {
    let d = tempfile::tempdir().unwrap();
    let (e, t, r) = (p(d.path(), "e.csv"), p(d.path(), "t.csv"), p(d.path(), "r.json"));
    let common = ["--window", "2", "--bins", "20", "--bins-im", "16"];
    let mut a = vec!["empirical", "--grid", "gauss", "--N", "20", "--renorm", "probability", "--out", &e];
    a.extend(common);
    assert_eq!(cli(&a), 0);
    let mut a = vec!["theory", "--density", "unscaled-unit", "--quadrature", "sub:4", "--out", &t];
    a.extend(common);
    assert_eq!(cli(&a), 0);
    assert_eq!(cli(&["compare", "--empirical", &e, "--theory", &t, "--out", &r]), 0);
    let via_files = json(&r)["l1"].as_f64().unwrap();

    let set = build_logset(&Source::Grid(Grid::gauss()), 20, WeightKind::Unit).unwrap();
    let cfg = PairConfig {
        scaling: ScalingSpec::ConstantOne,
        renorm: RenormSpec::Probability,
        geometry: HistGeometry::cylinder(2.0, 20, 16),
        diagonal: false,
        workers: 0,
    };
    let h = empirical_auto(&set, &cfg).unwrap();
    let direct = compare(&h, &Unscaled(UnscaledMode::Unit), Quadrature::Subsample(4)).unwrap();
    assert!((via_files - direct.l1).abs() < 1e-12, "{via_files} vs {}", direct.l1);
}

#[test]
fn round_trip_scaled_theta() {
    let d = tempfile::tempdir().unwrap();
    let (e, t, r) = (p(d.path(), "e.csv"), p(d.path(), "t.csv"), p(d.path(), "r.json"));
    let common = ["--grid", "eisenstein", "--window", "3", "--bins", "24"];
    let mut a = vec!["empirical", "--N", "30", "--scaling", "power:1", "--renorm", "psi2", "--out", &e];
    a.extend(common);
    assert_eq!(cli(&a), 0);
    let mut a = vec!["theory", "--density", "theta-infty", "--quadrature", "sub:3", "--out", &t];
    a.extend(common);
    assert_eq!(cli(&a), 0);
    assert_eq!(cli(&["compare", "--empirical", &e, "--theory", &t, "--out", &r]), 0);
    let via_files = json(&r)["l1"].as_f64().unwrap();

    let g = Grid::eisenstein();
    let set = build_logset(&Source::Grid(g.clone()), 30, WeightKind::Unit).unwrap();
    let geometry = HistGeometry::plane(3.0, 24);
    let cfg =
        PairConfig { scaling: ScalingSpec::Power(1.0), renorm: RenormSpec::ByPsi2, geometry, diagonal: false, workers: 0 };
    let h = empirical_auto(&set, &cfg).unwrap();
    let theta = ThetaInfty::new(&g, 1.0, geometry.circumradius()).unwrap();
    let direct = compare(&h, &theta, Quadrature::Subsample(3)).unwrap();
    // Masses here are not O(1), so the 12-digit CSV rounding is relative.
    assert!((via_files - direct.l1).abs() < 5e-12 * direct.l1, "{via_files} vs {}", direct.l1);
}

#[test]
fn bytes_independent_of_workers() {
    let d = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["--grid", "gauss", "--N", "25", "--window", "3", "--bins", "12"],
        &["--grid", "gauss", "--N", "40", "--scaling", "power:1", "--window", "4", "--bins", "30"],
        &["--field", "-7", "--ideal", "1,1", "--weight", "euler", "--N", "30", "--scaling", "power:0.5", "--geometry", "polar", "--bins", "10", "--bins-im", "8"],
    ];
    for (ci, case) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for workers in ["1", "3", "8"] {
            let out = p(d.path(), &format!("c{ci}w{workers}.csv"));
            let mut a = vec!["empirical", "--workers", workers, "--out", &out, "--summary", "/dev/null"];
            a.extend(case.iter().copied());
            assert_eq!(cli(&a), 0, "{case:?}");
            outputs.push(fs::read(&out).unwrap());
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "case {ci} differs across worker counts");
        let out = p(d.path(), "repeat.csv");
        let mut a = vec!["empirical", "--workers", "2", "--out", &out, "--summary", "/dev/null"];
        a.extend(case.iter().copied());
        assert_eq!(cli(&a), 0);
        assert_eq!(fs::read(&out).unwrap(), outputs[0]);
    }
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let out = p(d.path(), "x");
    assert_eq!(cli(&["empirical", "--grid", "gauss", "--N", "10", "--bogus", "1"]), EXIT_VALIDATION);
    assert_eq!(cli(&["frobnicate"]), EXIT_VALIDATION);
    assert_eq!(cli(&["empirical", "--grid", "gauss", "--field", "-4", "--N", "10", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["empirical", "--grid", "square", "--N", "10", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["empirical", "--field", "-5", "--N", "10", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["empirical", "--grid", "basis:1,0,2,0", "--N", "10", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["empirical", "--grid", "gauss", "--weight", "euler", "--N", "10", "--out", &out]), EXIT_VALIDATION);
    // Probability renormalization is refused in scaled regimes unless forced.
    let scaled = ["empirical", "--grid", "gauss", "--N", "10", "--scaling", "power:1", "--renorm", "probability", "--window", "2", "--bins", "4", "--out", &out, "--summary", "/dev/null"];
    assert_eq!(cli(&scaled), EXIT_VALIDATION);
    let mut forced = scaled.to_vec();
    forced.push("--force");
    assert_eq!(cli(&forced), 0);
    // Windows wider than πψ would wrap around the cylinder.
    assert_eq!(cli(&["empirical", "--grid", "gauss", "--N", "10", "--scaling", "power:0.1", "--window", "9", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["theory", "--density", "theta-infty", "--window", "2", "--bins", "4", "--out", &out]), EXIT_VALIDATION);
    assert_eq!(cli(&["constants", "--field", "-4", "--prime-bound", "1", "--out", &out]), EXIT_RUNTIME);
    assert_eq!(cli(&["sums", "--kind", "mirsky", "--k", "13,0", "--x", "5", "--prime-bound", "11", "--out", &out]), EXIT_RUNTIME);
    let missing = p(d.path(), "missing.csv");
    assert_eq!(cli(&["compare", "--empirical", &missing, "--theory", &missing]), EXIT_RUNTIME);
    fs::write(&out, "not a histogram\n").unwrap();
    assert_eq!(cli(&["compare", "--empirical", &out, "--theory", &out]), EXIT_RUNTIME);
}

#[test]
fn config_file_supplies_flags() {
    let d = tempfile::tempdir().unwrap();
    let (cfg, a, b) = (p(d.path(), "run.cfg"), p(d.path(), "a.csv"), p(d.path(), "b.csv"));
    fs::write(&cfg, format!("# gauss, unscaled\ncommand=empirical\ngrid=gauss\nN=15\nwindow=2\nbins=8\ndiagonal=true\nout={a}\n")).unwrap();
    assert_eq!(cli(&["--config", &cfg, "--summary", "/dev/null"]), 0);
    assert_eq!(
        cli(&["empirical", "--grid", "gauss", "--N", "15", "--window", "2", "--bins", "8", "--diagonal", "--out", &b, "--summary", "/dev/null"]),
        0
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    // Command-line flags override the file.
    assert_eq!(cli(&["--config", &cfg, "--N", "16", "--out", &b, "--summary", "/dev/null"]), 0);
    assert!(fs::read_to_string(&b).unwrap().contains("# N=16\n"));
    fs::write(&cfg, "grid=gauss\n").unwrap();
    assert_eq!(cli(&["--config", &cfg]), EXIT_VALIDATION);
    assert_eq!(cli(&["--config", &p(d.path(), "nope.cfg")]), EXIT_RUNTIME);
}

#[test]
fn csv_layouts() {
    let d = tempfile::tempdir().unwrap();
    let (spec, pairs, hist, r2d) = (p(d.path(), "s.csv"), p(d.path(), "p.csv"), p(d.path(), "h.csv"), p(d.path(), "r.csv"));
    assert_eq!(cli(&["ortho", "--field", "-4", "--N", "3", "--out", &spec, "--pairs", &pairs, "--hist", &hist, "--verify"]), 0);
    let s = fs::read_to_string(&spec).unwrap();
    let mut lines = s.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("norm,length,multiplicity_numerator,unit_count"));
    assert_eq!(lines.next(), Some("1,0.00000000000e0,8,4"));
    let pr = fs::read_to_string(&pairs).unwrap();
    assert!(pr.lines().any(|l| l == "num,den,mass_num,mass_den"));
    assert!(pr.lines().any(|l| l.starts_with("1,1,") && l.ends_with(",16")));
    let h = fs::read_to_string(&hist).unwrap();
    let total: f64 = h.lines().skip_while(|l| *l != "t,mass").skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!(total > 0.5 && total <= 1.0 + 1e-9);

    assert_eq!(cli(&["r2d", "--d", "1", "--N", "2", "--out", &r2d]), 0);
    let r = fs::read_to_string(&r2d).unwrap();
    let rows: Vec<&str> = r.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "num,den,mass_num,mass_den");
    // Norms up to N² = 4 with r_2(1) = r_2(2) = r_2(4) = 4.
    assert_eq!(&rows[1..], ["1,4,16,1", "1,2,32,1", "1,1,48,1", "2,1,32,1", "4,1,16,1"]);
}

#[test]
fn constants_and_sums_json() {
    let d = tempfile::tempdir().unwrap();
    let (c, s) = (p(d.path(), "c.json"), p(d.path(), "s.json"));
    assert_eq!(cli(&["constants", "--field", "-4", "--prime-bound", "100000", "--m", "1,1", "--k", "1,0", "--out", &c]), 0);
    let v = json(&c);
    assert!((v["limit_constant"]["value"].as_f64().unwrap() - 0.346).abs() < 5e-4);
    assert!(v["limit_constant"]["log_tail_bound"].as_f64().unwrap() <= 8e-5 + 1e-15);
    assert!((v["zeta_k_2"]["value"].as_f64().unwrap() - 1.506_703_009_923).abs() < 1e-9);
    assert!(v["mirsky_c_mk"]["product"]["value"].as_f64().unwrap() > 0.0);

    assert_eq!(cli(&["sums", "--kind", "mertens", "--x", "2", "--out", &s]), 0);
    assert_eq!(json(&s)["exact"].as_u64(), Some(16));
    assert_eq!(cli(&["sums", "--kind", "ideal-count", "--field", "-3", "--x", "1000", "--out", &s]), 0);
    assert!((json(&s)["ratio"].as_f64().unwrap() - 1.0).abs() < 0.05);
}
