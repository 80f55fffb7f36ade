//! Mesh exchange as three CSV files: `vertices.csv`, `triangles.csv`,
//! `boundary.csv`. Lines starting with `#` are comments.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ParamMesh;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct VertexRow {
    id: usize,
    x1: f64,
    x2: f64,
    boundary: u8,
}

#[derive(Serialize, Deserialize)]
struct TriangleRow {
    id: usize,
    v0: usize,
    v1: usize,
    v2: usize,
}

#[derive(Serialize, Deserialize)]
struct BoundaryRow {
    v0: usize,
    v1: usize,
    n1: f64,
    n2: f64,
    t0: f64,
    t1: f64,
}

/// Raw contents of the three mesh files.
#[derive(Clone, Copy, Debug)]
pub struct MeshCsv<'a> {
    pub vertices: &'a [u8],
    pub triangles: &'a [u8],
    pub boundary: &'a [u8],
}

fn reader(data: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(data)
}

impl MeshCsv<'_> {
    /// Parse and validate. Vertex ids must be `0..n` in order, and the
    /// boundary flags must agree with the boundary edge list. Normals in
    /// `boundary.csv` are informational and recomputed.
    pub fn parse(&self) -> Result<ParamMesh> {
        let mut vertices = Vec::new();
        let mut flags = Vec::new();
        for (k, row) in reader(self.vertices).deserialize::<VertexRow>().enumerate() {
            let row = row?;
            if row.id != k {
                return Err(Error::InvalidMesh(format!("vertex row {k} has id {}", row.id)));
            }
            if row.boundary > 1 {
                return Err(Error::InvalidMesh(format!("vertex {k}: boundary flag must be 0 or 1")));
            }
            vertices.push([row.x1, row.x2]);
            flags.push(row.boundary == 1);
        }
        let mut triangles = Vec::new();
        for (k, row) in reader(self.triangles).deserialize::<TriangleRow>().enumerate() {
            let row = row?;
            if row.id != k {
                return Err(Error::InvalidMesh(format!("triangle row {k} has id {}", row.id)));
            }
            triangles.push([row.v0, row.v1, row.v2]);
        }
        let mut boundary = Vec::new();
        for row in reader(self.boundary).deserialize::<BoundaryRow>() {
            let row = row?;
            boundary.push(([row.v0, row.v1], [row.t0, row.t1]));
        }
        let mesh = ParamMesh::new(vertices, triangles, boundary)?;
        if mesh.boundary_flags() != flags.as_slice() {
            return Err(Error::InvalidMesh(
                "vertex boundary flags disagree with boundary edges".into(),
            ));
        }
        Ok(mesh)
    }
}

pub(crate) fn writer<W: Write>(mut w: W, comment: Option<&str>) -> Result<csv::Writer<W>> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    Ok(csv::Writer::from_writer(w))
}

/// Write `vertices.csv`, `triangles.csv` and `boundary.csv` into `dir`,
/// each preceded by an optional `# comment` line.
pub fn write_mesh_csv(mesh: &ParamMesh, dir: &Path, comment: Option<&str>) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = writer(File::create(dir.join("vertices.csv"))?, comment)?;
    for (id, p) in mesh.vertices().iter().enumerate() {
        w.serialize(VertexRow {
            id,
            x1: p[0],
            x2: p[1],
            boundary: mesh.is_boundary_vertex(id) as u8,
        })?;
    }
    w.flush()?;
    let mut w = writer(File::create(dir.join("triangles.csv"))?, comment)?;
    for (id, t) in mesh.triangles().iter().enumerate() {
        w.serialize(TriangleRow {
            id,
            v0: t[0],
            v1: t[1],
            v2: t[2],
        })?;
    }
    w.flush()?;
    let mut w = writer(File::create(dir.join("boundary.csv"))?, comment)?;
    for e in mesh.boundary_edges() {
        w.serialize(BoundaryRow {
            v0: e.vertices[0],
            v1: e.vertices[1],
            n1: e.normal[0],
            n2: e.normal[1],
            t0: e.params[0],
            t1: e.params[1],
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_mesh_csv(dir: &Path) -> Result<ParamMesh> {
    let read = |name: &str| -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        File::open(dir.join(name))?.read_to_end(&mut buf)?;
        Ok(buf)
    };
    let (v, t, b) = (read("vertices.csv")?, read("triangles.csv")?, read("boundary.csv")?);
    MeshCsv {
        vertices: &v,
        triangles: &t,
        boundary: &b,
    }
    .parse()
}
