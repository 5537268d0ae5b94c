//! JSON surface specifications and file formats.
//!
//! Floats are written with `{:.16e}` (17 significant digits). Grid data is
//! ordered row-major with `y` in the outer loop, so vertex `(i, j)` has
//! index `j * nx + i`.

pub mod cli;
mod spec;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use spec::SurfaceSpecFile;

use crate::error::{Error, Result};
use crate::geometry::{FixedDirection, LocalGeometry, ParamSurface};
use crate::verify::GridSpec;

/// Per-vertex scalars carried by PLY output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexScalars {
    pub gaussian: f64,
    pub mean: f64,
    pub theta: f64,
}

/// Triangulated sample grid of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGrid {
    pub nx: usize,
    pub ny: usize,
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices, two triangles per grid cell.
    pub faces: Vec<[usize; 3]>,
    pub scalars: Option<Vec<VertexScalars>>,
}

impl MeshGrid {
    /// Grid triangulation of `vertices` laid out as `ny` rows of `nx`.
    pub fn from_vertices(
        nx: usize,
        ny: usize,
        vertices: Vec<[f64; 3]>,
        scalars: Option<Vec<VertexScalars>>,
    ) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Invalid(format!(
                "mesh needs at least 2x2 vertices, got {nx}x{ny}"
            )));
        }
        if vertices.len() != nx * ny || scalars.as_ref().is_some_and(|s| s.len() != nx * ny) {
            return Err(Error::Invalid("vertex count does not match nx * ny".into()));
        }
        if let Some(i) = vertices
            .iter()
            .position(|v| v.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::Invalid(format!(
                "vertex {i} has a non-finite coordinate"
            )));
        }
        let mut faces = Vec::with_capacity(2 * (nx - 1) * (ny - 1));
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let v00 = j * nx + i;
                let v10 = v00 + 1;
                let v01 = v00 + nx;
                let v11 = v01 + 1;
                faces.push([v00, v10, v11]);
                faces.push([v00, v11, v01]);
            }
        }
        Ok(MeshGrid {
            nx,
            ny,
            vertices,
            faces,
            scalars,
        })
    }

    /// Samples `s` on an `nx × ny` grid over its whole domain.
    pub fn sample(s: &ParamSurface, nx: usize, ny: usize) -> Result<Self> {
        let grid = GridSpec::new(nx, ny, 0.0)?;
        let k = FixedDirection::default();
        let data: Vec<([f64; 3], VertexScalars)> = grid
            .points(&s.domain)
            .par_iter()
            .map(|&(x, y)| {
                let l = LocalGeometry::at(s, x, y)?;
                let c = l.curvatures()?;
                let vs = VertexScalars {
                    gaussian: c.gaussian,
                    mean: c.mean,
                    theta: l.angle(&k).theta,
                };
                Ok((l.r, vs))
            })
            .collect::<Result<_>>()?;
        let (vertices, scalars) = data.into_iter().unzip();
        MeshGrid::from_vertices(nx, ny, vertices, Some(scalars))
    }
}

/// One CSV sample row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub x: f64,
    pub y: f64,
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub theta: f64,
    pub theta_x: f64,
    pub theta_y: f64,
}

pub const CSV_HEADER: &str = "x,y,rx,ry,rz,E,F,G,K,H,theta,theta_x,theta_y";

impl SampleRow {
    pub fn at(s: &ParamSurface, k: &FixedDirection, x: f64, y: f64) -> Result<Self> {
        let l = LocalGeometry::at(s, x, y)?;
        let c = l.curvatures()?;
        let a = l.angle(k);
        Ok(SampleRow {
            x,
            y,
            rx: l.r[0],
            ry: l.r[1],
            rz: l.r[2],
            e: l.metric.a11,
            f: l.metric.a12,
            g: l.metric.a22,
            k: c.gaussian,
            h: c.mean,
            theta: a.theta,
            theta_x: a.theta_x,
            theta_y: a.theta_y,
        })
    }

    fn values(&self) -> [f64; 13] {
        [
            self.x,
            self.y,
            self.rx,
            self.ry,
            self.rz,
            self.e,
            self.f,
            self.g,
            self.k,
            self.h,
            self.theta,
            self.theta_x,
            self.theta_y,
        ]
    }

    fn from_values(v: [f64; 13]) -> Self {
        SampleRow {
            x: v[0],
            y: v[1],
            rx: v[2],
            ry: v[3],
            rz: v[4],
            e: v[5],
            f: v[6],
            g: v[7],
            k: v[8],
            h: v[9],
            theta: v[10],
            theta_x: v[11],
            theta_y: v[12],
        }
    }
}

pub fn sample_grid(s: &ParamSurface, grid: &GridSpec) -> Result<Vec<SampleRow>> {
    let k = FixedDirection::default();
    grid.points(&s.domain)
        .par_iter()
        .map(|&(x, y)| SampleRow::at(s, &k, x, y))
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_obj(mesh: &MeshGrid, w: &mut impl Write) -> Result<()> {
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]))?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn write_ply(mesh: &MeshGrid, w: &mut impl Write) -> Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", mesh.vertices.len())?;
    for p in ["x", "y", "z", "K", "H", "theta"] {
        writeln!(w, "property double {p}")?;
    }
    writeln!(w, "element face {}", mesh.faces.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for (i, v) in mesh.vertices.iter().enumerate() {
        let s = mesh
            .scalars
            .as_ref()
            .map(|s| s[i])
            .unwrap_or(VertexScalars {
                gaussian: f64::NAN,
                mean: f64::NAN,
                theta: f64::NAN,
            });
        writeln!(
            w,
            "{} {} {} {} {} {}",
            num(v[0]),
            num(v[1]),
            num(v[2]),
            num(s.gaussian),
            num(s.mean),
            num(s.theta)
        )?;
    }
    for f in &mesh.faces {
        writeln!(w, "3 {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

pub fn write_csv(rows: &[SampleRow], w: &mut impl Write) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let cells: Vec<String> = r.values().iter().map(|&v| num(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Parses output of [`write_csv`].
pub fn read_csv(r: impl BufRead) -> Result<Vec<SampleRow>> {
    let mut lines = r.lines();
    match lines.next().transpose()? {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        other => {
            return Err(Error::Invalid(format!(
                "expected CSV header `{CSV_HEADER}`, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut v = [0.0; 13];
        let mut cells = line.split(',');
        for slot in v.iter_mut() {
            let cell = cells
                .next()
                .ok_or_else(|| Error::Invalid(format!("CSV row {} is short", n + 1)))?;
            *slot = cell
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("CSV row {}: bad number `{cell}`", n + 1)))?;
        }
        if cells.next().is_some() {
            return Err(Error::Invalid(format!("CSV row {} is long", n + 1)));
        }
        rows.push(SampleRow::from_values(v));
    }
    Ok(rows)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn export_obj(mesh: &MeshGrid, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |w| write_obj(mesh, w))
}

pub fn export_ply(mesh: &MeshGrid, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |w| write_ply(mesh, w))
}

pub fn export_csv(rows: &[SampleRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |w| write_csv(rows, w))
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<SampleRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_csv(BufReader::new(file))
}
