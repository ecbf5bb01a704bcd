//! CSV and legacy VTK writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fem::{Mesh, NodalFields};

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

pub fn csv_string(series: &Series) -> Result<String> {
    if series.rows.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(r) = series.rows.iter().find(|r| r.len() != series.columns.len()) {
        return Err(Error::validation("series", format!("row of {} values for {} columns", r.len(), series.columns.len())));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let to_str = |e: csv::Error| Error::validation("csv", e.to_string());
    w.write_record(&series.columns).map_err(to_str)?;
    for row in &series.rows {
        w.write_record(row.iter().map(|v| format_value(*v))).map_err(to_str)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::validation("csv", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn write_csv(series: &Series, path: &Path) -> Result<()> {
    fs::write(path, csv_string(series)?).map_err(io_err(path))
}

pub fn vtk_string(mesh: &Mesh, fields: &NodalFields, fluid_names: &[String]) -> Result<String> {
    let n = mesh.n_corners();
    let sized = fields.displacement.len() == n
        && fields.pressure.len() == n
        && fields.fluid_pressure.len() == fluid_names.len()
        && fields.fluid_pressure.iter().chain(&fields.phi).all(|v| v.len() == n);
    if !sized {
        return Err(Error::validation("fields", "field sizes do not match the mesh"));
    }
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0\nporomech\nASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {n} double");
    for p in &mesh.nodes {
        let _ = writeln!(s, "{} {} 0", format_value(p[0]), format_value(p[1]));
    }
    let ne = mesh.n_elements();
    let _ = writeln!(s, "CELLS {ne} {}", 5 * ne);
    for e in &mesh.elements {
        let _ = writeln!(s, "4 {} {} {} {}", e[0], e[1], e[2], e[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {ne}");
    for _ in 0..ne {
        s.push_str("9\n");
    }
    let _ = writeln!(s, "POINT_DATA {n}\nVECTORS displacement double");
    for u in &fields.displacement {
        let _ = writeln!(s, "{} {} 0", format_value(u[0]), format_value(u[1]));
    }
    let mut scalar = |name: String, values: &[f64]| {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in values {
            let _ = writeln!(s, "{}", format_value(*v));
        }
    };
    scalar("pressure".into(), &fields.pressure);
    for (i, name) in fluid_names.iter().enumerate() {
        scalar(format!("p_{name}"), &fields.fluid_pressure[i]);
        scalar(format!("phi_{name}"), &fields.phi[i]);
    }
    Ok(s)
}

pub fn write_vtk(mesh: &Mesh, fields: &NodalFields, fluid_names: &[String], path: &Path) -> Result<()> {
    fs::write(path, vtk_string(mesh, fields, fluid_names)?).map_err(io_err(path))
}
