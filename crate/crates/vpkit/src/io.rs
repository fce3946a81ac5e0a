//! CSV and JSON output with atomic writes, and the matching readers.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bgk::BgkResult;
use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::landau::{DecayFit, FieldTimeSeries};
use crate::penrose::{NyquistCurve, StabilityReport};
use crate::profiles::{VelocityGrid, VelocityProfile};
use crate::sim::SimDiagnostics;

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number, or `"inf"`, `"-inf"`, `"nan"` for non-finite values.
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Inverse of [`json_num`].
pub fn num_from_json(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            s => s.parse().ok(),
        },
        _ => None,
    }
}

pub fn csv_table<I: IntoIterator<Item = Vec<f64>>>(header: &[&str], rows: I) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.into_iter().map(fmt_num).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Parses a numeric CSV with a header line; returns the header and the rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Io("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, l) in lines.enumerate() {
        let r: std::result::Result<Vec<f64>, _> = l.split(',').map(|c| c.trim().parse::<f64>()).collect();
        let r = r.map_err(|e| Error::Io(format!("CSV row {}: {e}", i + 2)))?;
        if r.len() != header.len() {
            return Err(Error::Io(format!("CSV row {} has {} cells, header has {}", i + 2, r.len(), header.len())));
        }
        rows.push(r);
    }
    Ok((header, rows))
}

/// Writes through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

/// `v,f`.
pub fn profile_csv(p: &VelocityProfile<f64>) -> String {
    csv_table(&["v", "f"], p.grid.nodes().into_iter().zip(&p.values).map(|(v, f)| vec![v, *f]))
}

/// Reads a `v,f` profile; the nodes must be uniform.
pub fn profile_from_csv(text: &str) -> Result<VelocityProfile<f64>> {
    let (h, rows) = parse_csv(text)?;
    if h != ["v", "f"] {
        return Err(Error::Io(format!("profile header must be v,f, got {}", h.join(","))));
    }
    let v: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let grid = uniform_grid(&v)?;
    VelocityProfile::new(grid, rows.iter().map(|r| r[1]).collect())
}

fn uniform_grid(v: &[f64]) -> Result<VelocityGrid<f64>> {
    if v.len() < 2 {
        return Err(Error::InvalidGrid("fewer than two nodes".into()));
    }
    let grid = VelocityGrid::new(v[0], v[v.len() - 1], v.len())?;
    let tol = 1e-9 * grid.dv();
    if let Some(i) = v.iter().enumerate().position(|(i, &x)| (x - grid.node(i)).abs() > tol) {
        return Err(Error::InvalidGrid(format!("node {i} breaks uniform spacing")));
    }
    Ok(grid)
}

/// `x,v,f` row-major.
pub fn field_csv(f: &PhaseSpaceField<f64>) -> String {
    let nv = f.nv();
    csv_table(&["x", "v", "f"], (0..f.nx * nv).map(|i| vec![f.x(i / nv), f.vgrid.node(i % nv), f.f[i]]))
}

/// Inverse of [`field_csv`]; the period comes from `meta.json`.
pub fn field_from_csv(text: &str, period: f64) -> Result<PhaseSpaceField<f64>> {
    let (h, rows) = parse_csv(text)?;
    if h != ["x", "v", "f"] {
        return Err(Error::Io(format!("field header must be x,v,f, got {}", h.join(","))));
    }
    let nv = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if nv == 0 || rows.len() % nv != 0 {
        return Err(Error::Io("field rows do not form a grid".into()));
    }
    let v: Vec<f64> = rows[..nv].iter().map(|r| r[1]).collect();
    PhaseSpaceField::new(period, rows.len() / nv, uniform_grid(&v)?, rows.iter().map(|r| r[2]).collect())
}

/// `t,re_e,im_e,abs_e`.
pub fn series_csv(s: &FieldTimeSeries<f64>) -> String {
    csv_table(&["t", "re_e", "im_e", "abs_e"], s.t.iter().zip(&s.e).map(|(t, e)| vec![*t, e.re, e.im, e.norm()]))
}

pub fn fit_json(f: &DecayFit<f64>) -> Value {
    json!({
        "exponent": json_num(f.exponent),
        "prefactor": json_num(f.prefactor),
        "window": [json_num(f.window.0), json_num(f.window.1)],
        "r_squared": json_num(f.r_squared),
        "points": f.points,
    })
}

/// `xi,re_z,im_z`.
pub fn nyquist_csv(c: &NyquistCurve<f64>) -> String {
    csv_table(&["xi", "re_z", "im_z"], c.xi.iter().zip(&c.z).map(|(x, z)| vec![*x, z.re, z.im]))
}

pub fn report_json(r: &StabilityReport<f64>) -> Value {
    let pairs = |v: &[(f64, f64)]| Value::Array(v.iter().map(|(a, b)| json!([json_num(*a), json_num(*b)])).collect());
    json!({
        "t0": json_num(r.t0),
        "extrema": r.extrema.iter().map(|e| json!({
            "v": json_num(e.v),
            "integral": json_num(e.integral),
            "kind": e.kind,
            "degenerate": e.degenerate,
        })).collect::<Vec<_>>(),
        "unstable_intervals": pairs(&r.unstable_intervals),
        "gaps": pairs(&r.gaps),
        "flags": r.flags,
    })
}

pub fn bgk_meta_json(r: &BgkResult) -> Value {
    let w = &r.wave;
    let mut m = Map::new();
    m.insert("T".into(), json_num(w.period));
    m.insert("c".into(), json_num(w.speed));
    m.insert("gamma".into(), json_num(w.spec.gamma));
    m.insert("delta".into(), json_num(w.spec.delta));
    m.insert("amplitude".into(), json_num(w.amplitude));
    m.insert("r".into(), json_num(w.spec.r));
    m.insert("case".into(), json!(w.spec.case));
    m.insert("orbit_period".into(), json_num(w.spec.period));
    m.insert("linear_period".into(), json_num(w.spec.linear_period));
    m.insert("nx".into(), json!(w.field.nx));
    m.insert("nv".into(), json!(w.field.nv()));
    m.insert("residuals".into(), json!({"vlasov": json_num(r.vlasov_residual), "poisson": json_num(r.poisson_residual)}));
    m.insert(
        "distances".into(),
        match &r.distance {
            Some(d) => json!({"l1": json_num(d.l1), "energy_l1": json_num(d.energy_l1), "wsp": json_num(d.wsp), "total": json_num(d.total())}),
            None => Value::Null,
        },
    );
    m.insert("ladder".into(), Value::Array(r.ladder.iter().map(|(g, d)| json!([json_num(*g), json_num(*d)])).collect()));
    Value::Object(m)
}

/// `beta.csv`, `f.csv` and `meta.json` in `dir`.
pub fn write_bgk(dir: &Path, r: &BgkResult) -> Result<()> {
    let w = &r.wave;
    let rows = w.x.iter().zip(&w.beta).zip(&w.e_field).map(|((x, b), e)| vec![*x, *b, *e]);
    write_atomic(&dir.join("beta.csv"), csv_table(&["x", "beta", "e"], rows).as_bytes())?;
    write_atomic(&dir.join("f.csv"), field_csv(&w.field).as_bytes())?;
    write_json(&dir.join("meta.json"), &bgk_meta_json(r))
}

/// Checkpoint in the BGK directory layout: `f.csv` and a `meta.json` with `T` and `c`.
pub fn write_checkpoint(dir: &Path, f: &PhaseSpaceField<f64>, speed: f64, time: f64) -> Result<()> {
    write_atomic(&dir.join("f.csv"), field_csv(f).as_bytes())?;
    let meta = json!({"T": json_num(f.period), "c": json_num(speed), "t": json_num(time), "nx": f.nx, "nv": f.nv()});
    write_json(&dir.join("meta.json"), &meta)
}

/// Reads `f.csv` and the period and speed from `meta.json` in `dir`.
pub fn read_checkpoint(dir: &Path) -> Result<(PhaseSpaceField<f64>, f64)> {
    let read = |name: &str| fs::read_to_string(dir.join(name)).map_err(|e| Error::Io(format!("{}: {e}", dir.join(name).display())));
    let meta: Value = serde_json::from_str(&read("meta.json")?).map_err(|e| Error::Io(format!("meta.json: {e}")))?;
    let period = meta.get("T").and_then(num_from_json).ok_or_else(|| Error::Io("meta.json lacks T".into()))?;
    let speed = meta.get("c").and_then(num_from_json).unwrap_or(0.0);
    Ok((field_from_csv(&read("f.csv")?, period)?, speed))
}

pub fn diagnostics_csv(d: &SimDiagnostics) -> String {
    let h = d.header();
    let h: Vec<&str> = h.iter().map(|s| s.as_str()).collect();
    csv_table(&h, (0..d.len()).map(|n| d.row(n)))
}
