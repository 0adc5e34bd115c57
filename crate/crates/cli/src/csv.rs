//! CSV artifacts. Numbers are written with 12 significant digits in
//! scientific notation, which is locale independent and byte stable.

use std::fmt::Write as _;

use paircorr_core::pair::{AtomMeasure1D, Hist1D, HistGeometry};
use paircorr_core::ortho::OrthoSpectrum;

use crate::CliError;

pub const HIST2D_HEADER: &str = "re_lo,re_hi,im_lo,im_hi,mass,density_midpoint";

pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Comment lines `# key=value` describing the bin layout.
pub fn geometry_comments(g: &HistGeometry) -> Vec<(String, String)> {
    let (kind, size, scale) = match *g {
        HistGeometry::Plane { half_width, .. } => ("plane", half_width, None),
        HistGeometry::Cylinder { half_width, scale, .. } => ("cylinder", half_width, Some(scale)),
        HistGeometry::Polar { radius, .. } => ("polar", radius, None),
    };
    let (b0, b1) = g.shape();
    let mut out = vec![("geometry".to_string(), kind.to_string()), ("size".to_string(), format!("{size:?}"))];
    if let Some(s) = scale {
        out.push(("scale".to_string(), format!("{s:?}")));
    }
    out.push(("bins0".to_string(), b0.to_string()));
    out.push(("bins1".to_string(), b1.to_string()));
    out
}

/// One row per bin; `density(idx)` fills the last column.
pub fn write_hist2d(
    comments: &[(String, String)],
    geometry: &HistGeometry,
    masses: &[f64],
    density: impl Fn(usize) -> f64,
) -> String {
    let mut s = String::new();
    for (k, v) in comments {
        let _ = writeln!(s, "# {k}={v}");
    }
    for (k, v) in geometry_comments(geometry) {
        let _ = writeln!(s, "# {k}={v}");
    }
    let _ = writeln!(s, "{HIST2D_HEADER}");
    for (idx, m) in masses.iter().enumerate() {
        let (a0, a1, b0, b1) = geometry.bounds(idx);
        let _ = writeln!(s, "{},{},{},{},{},{}", num(a0), num(a1), num(b0), num(b1), num(*m), num(density(idx)));
    }
    s
}

/// A 2D histogram read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedHist2D {
    pub comments: Vec<(String, String)>,
    pub geometry: HistGeometry,
    pub masses: Vec<f64>,
}

pub fn read_hist2d(text: &str, path: &str) -> Result<ParsedHist2D, CliError> {
    let bad = |msg: String| CliError::Input { path: path.to_string(), msg };
    let mut comments = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((_, l)) = lines.peek() {
        let Some(c) = l.strip_prefix('#') else { break };
        if let Some((k, v)) = c.trim().split_once('=') {
            comments.push((k.trim().to_string(), v.trim().to_string()));
        }
        lines.next();
    }
    let get = |key: &str| -> Result<&str, CliError> {
        comments
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| bad(format!("missing `# {key}=` comment")))
    };
    let float = |key: &str| -> Result<f64, CliError> {
        get(key)?.parse().map_err(|_| bad(format!("bad number in `# {key}=`")))
    };
    let count = |key: &str| -> Result<usize, CliError> {
        get(key)?.parse().map_err(|_| bad(format!("bad count in `# {key}=`")))
    };
    let (size, b0, b1) = (float("size")?, count("bins0")?, count("bins1")?);
    let geometry = match get("geometry")? {
        "plane" => HistGeometry::Plane { half_width: size, bins_re: b0, bins_im: b1 },
        "cylinder" => HistGeometry::Cylinder { half_width: size, scale: float("scale")?, bins_re: b0, bins_im: b1 },
        "polar" => HistGeometry::Polar { radius: size, bins_r: b0, bins_theta: b1 },
        other => return Err(bad(format!("unknown geometry {other:?}"))),
    };
    geometry.validate().map_err(|e| bad(e.to_string()))?;
    match lines.next() {
        Some((_, h)) if h.trim() == HIST2D_HEADER => {}
        _ => return Err(bad(format!("expected header `{HIST2D_HEADER}`"))),
    }
    let mut masses = Vec::with_capacity(geometry.len());
    for (no, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let field = l.split(',').nth(4).ok_or_else(|| bad(format!("line {}: too few columns", no + 1)))?;
        masses.push(field.trim().parse().map_err(|_| bad(format!("line {}: bad mass", no + 1)))?);
    }
    if masses.len() != geometry.len() {
        return Err(bad(format!("{} rows for {} bins", masses.len(), geometry.len())));
    }
    Ok(ParsedHist2D { comments, geometry, masses })
}

/// Exact atoms: `num,den,mass_num,mass_den`, the atom sitting at `ln(num/den)`.
pub fn write_atoms(comments: &[(String, String)], mu: &AtomMeasure1D) -> String {
    let mut s = String::new();
    for (k, v) in comments {
        let _ = writeln!(s, "# {k}={v}");
    }
    s.push_str("num,den,mass_num,mass_den\n");
    for (k, m) in &mu.atoms {
        let _ = writeln!(s, "{},{},{},{}", k.numer(), k.denom(), m, mu.mass_den);
    }
    s
}

/// Binned 1D measure: `t,mass` with `t` the bin centre.
pub fn write_hist1d(comments: &[(String, String)], h: &Hist1D) -> String {
    let mut s = String::new();
    for (k, v) in comments {
        let _ = writeln!(s, "# {k}={v}");
    }
    s.push_str("t,mass\n");
    for (i, m) in h.masses.iter().enumerate() {
        let (lo, hi) = h.bounds(i);
        let _ = writeln!(s, "{},{}", num(0.5 * (lo + hi)), num(*m));
    }
    s
}

pub fn write_spectrum(s: &OrthoSpectrum) -> String {
    let mut out = format!("# horizon={}\nnorm,length,multiplicity_numerator,unit_count\n", s.horizon);
    for e in &s.entries {
        let _ = writeln!(out, "{},{},{},{}", e.norm, num(e.length), e.numerator, s.unit_count);
    }
    out
}
