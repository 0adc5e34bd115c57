//! The subcommands. Each validates its arguments, calls the core and writes
//! its artifacts.

use std::fs;
use std::path::Path;

use paircorr_core::grid::{Grid, Sector};
use paircorr_core::ortho::{ortho_pair_measure, ortho_spectrum, verify_ortho_identity};
use paircorr_core::pair::{
    bin_integrals, build_logset, compare_masses, empirical_auto, Constant, Density2D, HistGeometry, PairConfig,
    Quadrature, RenormSpec, Source, ThetaInfty, Unscaled, UnscaledMode, WeightKind, WeightedLinear,
};
use paircorr_core::pair::density_poissonian;
use paircorr_core::quadratic::{
    cubic_ideal_constant, limit_constant, mertens_constant_c_m, mirsky_constant_c_mk, zeta_k_2, AlgInt, Field,
};
use paircorr_core::sums::{cubic_ideal_sum, ideal_count, mertens_sum, mirsky_sum, r2d_pair_measure};
use serde_json::{json, Value};

use crate::args::{
    parse_grid, parse_pair, parse_renorm, parse_scaling, renorm_name, Command, CompareArgs, ConstantsArgs,
    DensityKind, EmpiricalArgs, GeometryKind, LayoutArgs, OrthoArgs, R2dArgs, SourceArgs, SumKind, SumsArgs,
    TheoryArgs, WeightArg,
};
use crate::csv;
use crate::CliError;

type Comments = Vec<(String, String)>;

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Empirical(a) => empirical(&a),
        Command::Theory(a) => theory(&a),
        Command::Compare(a) => compare(&a),
        Command::Sums(a) => sums(&a),
        Command::R2d(a) => r2d(&a),
        Command::Ortho(a) => ortho(&a),
        Command::Constants(a) => constants(&a),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn field_element(field: Field, s: &str) -> Result<AlgInt, CliError> {
    let (x, y) = parse_pair(s)?;
    Ok(field.element(x, y))
}

/// Resolves the source flags; `None` when neither --grid nor --field is given.
fn source(a: &SourceArgs) -> Result<Option<(Source, Comments)>, CliError> {
    match (&a.grid, a.field) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --grid or --field, not both".into())),
        (Some(name), None) => {
            if a.ideal.is_some() {
                return Err(CliError::Usage("--ideal needs --field".into()));
            }
            let g = parse_grid(name, a.offset.as_deref())?;
            let mut c = vec![("grid".to_string(), name.clone())];
            if let Some(o) = &a.offset {
                c.push(("offset".to_string(), o.clone()));
            }
            Ok(Some((Source::Grid(g), c)))
        }
        (None, Some(d)) => {
            if a.offset.is_some() {
                return Err(CliError::Usage("--offset applies only to --grid".into()));
            }
            let field = Field::new(d)?;
            let ideal = a.ideal.clone().unwrap_or_else(|| "1,0".to_string());
            let gen = field_element(field, &ideal)?;
            if gen.is_zero() {
                return Err(CliError::Core(paircorr_core::Error::ZeroElement));
            }
            Ok(Some((Source::ideal(gen), vec![("field".into(), d.to_string()), ("ideal".into(), ideal)])))
        }
        (None, None) => {
            if a.ideal.is_some() || a.offset.is_some() {
                return Err(CliError::Usage("--ideal needs --field and --offset needs --grid".into()));
            }
            Ok(None)
        }
    }
}

fn geometry(l: &LayoutArgs, kind: GeometryKind, cylinder_scale: f64) -> Result<HistGeometry, CliError> {
    let b0 = l.bins;
    let b1 = l.bins_im.unwrap_or(l.bins);
    let g = match kind {
        GeometryKind::Plane => HistGeometry::Plane { half_width: l.window, bins_re: b0, bins_im: b1 },
        GeometryKind::Cylinder => {
            HistGeometry::Cylinder { half_width: l.window, scale: cylinder_scale, bins_re: b0, bins_im: b1 }
        }
        GeometryKind::Polar => HistGeometry::Polar { radius: l.window, bins_r: b0, bins_theta: b1 },
    };
    g.validate()?;
    Ok(g)
}

fn empirical(a: &EmpiricalArgs) -> Result<(), CliError> {
    let (src, mut comments) =
        source(&a.source)?.ok_or_else(|| CliError::Usage("empirical needs --grid or --field".into()))?;
    if a.n < 1 {
        return Err(CliError::Usage("--N must be >= 1".into()));
    }
    let scaling = parse_scaling(&a.scaling)?;
    let renorm = match &a.renorm {
        Some(r) => parse_renorm(r)?,
        None => RenormSpec::natural_for(scaling.regime()),
    };
    if renorm == RenormSpec::Probability && scaling.is_scaled() && !a.force {
        return Err(CliError::Usage(
            "probability renormalization does not converge in scaled regimes; pass --force to override".into(),
        ));
    }
    let psi = scaling.psi(a.n)?;
    let kind = a.layout.geometry.unwrap_or(if scaling.is_scaled() { GeometryKind::Plane } else { GeometryKind::Cylinder });
    let geom = geometry(&a.layout, kind, psi)?;
    let weight = match a.weight {
        WeightArg::Unit => WeightKind::Unit,
        WeightArg::Euler => WeightKind::EulerPhi,
    };
    let set = build_logset(&src, a.n, weight)?;
    let cfg = PairConfig { scaling, renorm, geometry: geom, diagonal: a.diagonal, workers: a.workers };
    let hist = empirical_auto(&set, &cfg)?;

    comments.insert(0, ("command".into(), "empirical".into()));
    comments.extend([
        ("N".to_string(), a.n.to_string()),
        ("scaling".to_string(), a.scaling.clone()),
        ("weight".to_string(), format!("{:?}", a.weight).to_lowercase()),
        ("renorm".to_string(), renorm_name(&renorm)),
        ("diagonal".to_string(), a.diagonal.to_string()),
        ("psi".to_string(), format!("{psi:?}")),
        ("points".to_string(), set.len().to_string()),
        ("total_raw_mass".to_string(), hist.total_raw_mass().to_string()),
        ("renormalizer".to_string(), format!("{:?}", hist.renormalizer())),
    ]);
    let masses = hist.masses();
    let text = csv::write_hist2d(&comments, &geom, &masses, |i| masses[i] / geom.area(i));
    write_out(a.out.as_deref(), &text)?;

    let summary = json!({
        "config": comments.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "regime": cfg.scaling.regime(),
        "geometry": geom,
        "total_raw_mass": hist.total_raw_mass(),
        "window_raw_mass": hist.window_raw_mass(),
        "renormalizer": hist.renormalizer(),
        "window_mass": masses.iter().sum::<f64>(),
    });
    match (&a.summary, &a.out) {
        (Some(p), _) => write_out(Some(p), &json_text(&summary)),
        (None, Some(_)) => write_out(None, &json_text(&summary)),
        (None, None) => Ok(()),
    }
}

fn quadrature(s: &str) -> Result<Quadrature, CliError> {
    if s == "midpoint" {
        return Ok(Quadrature::Midpoint);
    }
    let n = s
        .strip_prefix("sub:")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("unknown quadrature {s:?}; use midpoint or sub:n")))?;
    Ok(Quadrature::Subsample(n))
}

fn source_grid(src: Option<(Source, Comments)>, what: &str) -> Result<(Grid, Source, Comments), CliError> {
    let (s, c) = src.ok_or_else(|| CliError::Usage(format!("--density {what} needs --grid or --field")))?;
    Ok((s.grid()?, s, c))
}

fn theory(a: &TheoryArgs) -> Result<(), CliError> {
    let q = quadrature(&a.quadrature)?;
    let src = source(&a.source)?;
    let unscaled = matches!(a.density, DensityKind::UnscaledUnit | DensityKind::UnscaledEuler);
    let kind = a.layout.geometry.unwrap_or(if unscaled { GeometryKind::Cylinder } else { GeometryKind::Plane });
    if unscaled && kind != GeometryKind::Cylinder {
        return Err(CliError::Usage("unscaled densities live on the cylinder; use --geometry cylinder".into()));
    }
    if !unscaled && kind == GeometryKind::Cylinder {
        return Err(CliError::Usage("scaled densities live on the plane; use --geometry plane or polar".into()));
    }
    let geom = geometry(&a.layout, kind, 1.0)?;
    if !(a.lambda > 0.0 && a.lambda.is_finite()) {
        return Err(CliError::Usage("--lambda must be positive".into()));
    }
    let mut comments: Comments = vec![("command".into(), "theory".into())];
    let name = format!("{:?}", a.density);
    let density: Box<dyn Density2D> = match a.density {
        DensityKind::UnscaledUnit => Box::new(Unscaled(UnscaledMode::Unit)),
        DensityKind::UnscaledEuler => Box::new(Unscaled(UnscaledMode::Euler)),
        DensityKind::Poissonian => {
            let (g, _, c) = source_grid(src, "poissonian")?;
            comments.extend(c);
            Box::new(Constant(density_poissonian(&g)))
        }
        DensityKind::ThetaInfty => {
            let (g, _, c) = source_grid(src, "theta-infty")?;
            comments.extend(c);
            comments.push(("lambda".into(), format!("{:?}", a.lambda)));
            Box::new(ThetaInfty::new(&g, a.lambda, geom.circumradius())?)
        }
        DensityKind::WeightedLinear => {
            let (_, s, c) = source_grid(src, "weighted-linear")?;
            let Source::Ideal { generator, .. } = s else {
                return Err(CliError::Usage("--density weighted-linear needs --field and --ideal".into()));
            };
            comments.extend(c);
            comments.push(("lambda".into(), format!("{:?}", a.lambda)));
            comments.push(("prime_bound".into(), a.prime_bound.to_string()));
            if a.lambda != 1.0 {
                return Err(CliError::Usage("--density weighted-linear is tabulated for lambda = 1".into()));
            }
            Box::new(WeightedLinear::new(&generator, geom.circumradius(), a.prime_bound)?)
        }
    };
    comments.insert(1, ("density".into(), kebab(&name)));
    comments.push(("quadrature".into(), a.quadrature.clone()));
    let masses = bin_integrals(&geom, density.as_ref(), q);
    let text = csv::write_hist2d(&comments, &geom, &masses, |i| {
        let (x, y) = geom.center(i);
        density.eval(x, y)
    });
    write_out(a.out.as_deref(), &text)
}

fn kebab(camel: &str) -> String {
    let mut s = String::new();
    for (i, ch) in camel.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            s.push('-');
        }
        s.push(ch.to_ascii_lowercase());
    }
    s
}

fn compare(a: &CompareArgs) -> Result<(), CliError> {
    let ep = a.empirical.display().to_string();
    let tp = a.theory.display().to_string();
    let e = csv::read_hist2d(&read_text(&a.empirical)?, &ep)?;
    let t = csv::read_hist2d(&read_text(&a.theory)?, &tp)?;
    if e.geometry != t.geometry {
        return Err(CliError::Core(paircorr_core::Error::GeometryMismatch(format!(
            "{ep} has {:?}, {tp} has {:?}",
            e.geometry, t.geometry
        ))));
    }
    let report = compare_masses(&e.geometry, &e.masses, &t.masses)?;
    let echo = |c: &Comments| c.iter().cloned().collect::<std::collections::BTreeMap<_, _>>();
    let v = json!({
        "empirical": { "path": ep, "config": echo(&e.comments) },
        "theory": { "path": tp, "config": echo(&t.comments) },
        "geometry": e.geometry,
        "l1": report.l1,
        "sup": report.sup,
        "mean_abs_density_deviation": report.mean_abs_density_deviation,
        "empirical_mass": report.empirical_mass,
        "expected_mass": report.expected_mass,
        "radial_profile": report.radial_profile,
    });
    write_out(a.out.as_deref(), &json_text(&v))
}

fn sums(a: &SumsArgs) -> Result<(), CliError> {
    let field = Field::new(a.field)?;
    let m = field_element(field, &a.m)?;
    let report = match a.kind {
        SumKind::Mertens | SumKind::Mirsky => {
            let dir = field_element(field, &a.direction)?;
            let sector = Sector::new(field.to_planar(&dir), a.aperture, a.x)?;
            if a.kind == SumKind::Mertens {
                mertens_sum(&m, &sector)?
            } else {
                mirsky_sum(&m, &field_element(field, &a.k)?, &sector, a.prime_bound)?
            }
        }
        SumKind::IdealCount => ideal_count(field, a.x)?,
        SumKind::Cubic => cubic_ideal_sum(field, a.x, a.prime_bound)?,
    };
    let v = json!({
        "kind": kebab(&format!("{:?}", a.kind)),
        "exact": report.exact,
        "brute": report.brute,
        "predicted": report.predicted,
        "ratio": if report.ratio.is_finite() { json!(report.ratio) } else { Value::Null },
        "inputs": report.inputs,
    });
    write_out(a.out.as_deref(), &json_text(&v))
}

fn r2d(a: &R2dArgs) -> Result<(), CliError> {
    if a.d < 1 || a.n < 1 {
        return Err(CliError::Usage("--d and --N must be >= 1".into()));
    }
    let mu = r2d_pair_measure(a.d, a.n)?;
    let comments = vec![
        ("command".to_string(), "r2d".to_string()),
        ("d".to_string(), a.d.to_string()),
        ("N".to_string(), a.n.to_string()),
    ];
    write_out(a.out.as_deref(), &csv::write_atoms(&comments, &mu))
}

fn ortho(a: &OrthoArgs) -> Result<(), CliError> {
    let field = Field::new(a.field)?;
    let b = field_element(field, &a.ideal)?;
    if a.n < 1 {
        return Err(CliError::Usage("--N must be >= 1".into()));
    }
    let spec = ortho_spectrum(&b, a.n)?;
    let comments = vec![
        ("command".to_string(), "ortho".to_string()),
        ("field".to_string(), a.field.to_string()),
        ("ideal".to_string(), a.ideal.clone()),
        ("N".to_string(), a.n.to_string()),
    ];
    let mut summary = json!({
        "field": a.field,
        "ideal": b.to_string(),
        "horizon": a.n,
        "length_classes": spec.entries.len(),
        "total_multiplicity_numerator": spec.total_numerator(),
        "unit_count": spec.unit_count,
    });
    if a.out.is_some() {
        write_out(a.out.as_deref(), &csv::write_spectrum(&spec))?;
    }
    if a.pairs.is_some() || a.hist.is_some() {
        let mu = ortho_pair_measure(&spec);
        if let Some(p) = &a.pairs {
            write_out(Some(p), &csv::write_atoms(&comments, &mu))?;
        }
        if let Some(p) = &a.hist {
            let h = mu.to_hist(a.lo, a.hi, a.bins, true)?;
            write_out(Some(p), &csv::write_hist1d(&comments, &h))?;
        }
    }
    if a.verify {
        let r = verify_ortho_identity(&b, a.n)?;
        summary["identity"] = serde_json::to_value(&r).expect("report serializes");
    }
    if a.out.is_none() && a.pairs.is_none() && a.hist.is_none() && !a.verify {
        return write_out(None, &csv::write_spectrum(&spec));
    }
    write_out(None, &json_text(&summary))
}

fn constants(a: &ConstantsArgs) -> Result<(), CliError> {
    let field = Field::new(a.field)?;
    let zeta = zeta_k_2(field, 1e-12)?;
    let limit = limit_constant(field, a.prime_bound)?;
    let cubic = cubic_ideal_constant(field, a.prime_bound)?;
    let mut v = json!({
        "field": a.field,
        "prime_bound": a.prime_bound,
        "zeta_k_2": { "value": zeta, "abs_tolerance": 1e-12 },
        "limit_constant": limit,
        "cubic_ideal_constant": cubic,
    });
    if a.m.is_some() || a.k.is_some() {
        let m = field_element(field, a.m.as_deref().unwrap_or("1,0"))?;
        let k = field_element(field, a.k.as_deref().unwrap_or("1,0"))?;
        v["mertens_c_m"] = json!({ "m": m.to_string(), "value": mertens_constant_c_m(&m)? });
        v["mirsky_c_mk"] = json!({ "m": m.to_string(), "k": k.to_string(), "product": mirsky_constant_c_mk(&m, &k, a.prime_bound)? });
    }
    write_out(a.out.as_deref(), &json_text(&v))
}
