//! OFF and OBJ reading and writing. Only vertex positions and triangular
//! faces are kept; other OBJ records are skipped.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::Point3;

use super::TriMesh;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("off") => Ok(MeshFormat::Off),
            Some("obj") => Ok(MeshFormat::Obj),
            _ => Err(Error::Config(format!(
                "cannot infer mesh format of {}; use .off or .obj",
                path.display()
            ))),
        }
    }
}

/// Reads a mesh; `format` defaults to the file extension.
pub fn load_mesh(path: impl AsRef<Path>, format: Option<MeshFormat>) -> Result<TriMesh> {
    let path = path.as_ref();
    let format = match format {
        Some(f) => f,
        None => MeshFormat::from_path(path)?,
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (vertices, faces) = match format {
        MeshFormat::Off => parse_off(&text, path)?,
        MeshFormat::Obj => parse_obj(&text, path)?,
    };
    TriMesh::new(vertices, faces)
}

/// Writes a mesh with shortest round-trip float formatting.
pub fn save_mesh(mesh: &TriMesh, path: impl AsRef<Path>, format: Option<MeshFormat>) -> Result<()> {
    let path = path.as_ref();
    let format = match format {
        Some(f) => f,
        None => MeshFormat::from_path(path)?,
    };
    let mut out = String::new();
    match format {
        MeshFormat::Off => {
            let _ = writeln!(out, "OFF\n{} {} 0", mesh.num_vertices(), mesh.faces().len());
            for p in mesh.vertices() {
                let _ = writeln!(out, "{:?} {:?} {:?}", p.x, p.y, p.z);
            }
            for f in mesh.faces() {
                let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
            }
        }
        MeshFormat::Obj => {
            for p in mesh.vertices() {
                let _ = writeln!(out, "v {:?} {:?} {:?}", p.x, p.y, p.z);
            }
            for f in mesh.faces() {
                let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
            }
        }
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);

    /// Next non-empty line with comments stripped, numbered from 1.
    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, path: &Path, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(path, line, format!("cannot parse `{tok}` as a number")))
}

type Parsed = (Vec<Point3<f64>>, Vec<[usize; 3]>);

fn parse_off(text: &str, path: &Path) -> Result<Parsed> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    if header[0] != "OFF" {
        return Err(parse_err(path, line, "missing OFF header"));
    }
    let (line, counts) = if header.len() > 1 {
        (line, header[1..].to_vec())
    } else {
        lines
            .next()
            .ok_or_else(|| parse_err(path, line, "missing element counts"))?
    };
    if counts.len() < 2 {
        return Err(parse_err(path, line, "expected vertex and face counts"));
    }
    let nv: usize = number(counts[0], path, line)?;
    let nf: usize = number(counts[1], path, line)?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, tok) = lines
            .next()
            .ok_or_else(|| parse_err(path, line, "unexpected end of file in vertex list"))?;
        if tok.len() < 3 {
            return Err(parse_err(path, line, "vertex needs three coordinates"));
        }
        vertices.push(Point3::new(
            number(tok[0], path, line)?,
            number(tok[1], path, line)?,
            number(tok[2], path, line)?,
        ));
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, tok) = lines
            .next()
            .ok_or_else(|| parse_err(path, line, "unexpected end of file in face list"))?;
        let count: usize = number(tok[0], path, line)?;
        if count != 3 {
            return Err(Error::NonTriangleFace {
                path: path.into(),
                line,
                count,
            });
        }
        if tok.len() < 4 {
            return Err(parse_err(path, line, "face lists fewer indices than declared"));
        }
        let idx = |k: usize| number::<usize>(tok[k], path, line);
        faces.push([idx(1)?, idx(2)?, idx(3)?]);
    }
    Ok((vertices, faces))
}

fn parse_obj(text: &str, path: &Path) -> Result<Parsed> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let lines = Lines {
        inner: text.lines().enumerate(),
    };
    for (line, tok) in lines {
        match tok[0] {
            "v" => {
                if tok.len() < 4 {
                    return Err(parse_err(path, line, "vertex needs three coordinates"));
                }
                vertices.push(Point3::new(
                    number(tok[1], path, line)?,
                    number(tok[2], path, line)?,
                    number(tok[3], path, line)?,
                ));
            }
            "f" => {
                let refs = &tok[1..];
                if refs.len() != 3 {
                    return Err(Error::NonTriangleFace {
                        path: path.into(),
                        line,
                        count: refs.len(),
                    });
                }
                let mut face = [0usize; 3];
                for (slot, r) in face.iter_mut().zip(refs) {
                    let first = r.split('/').next().unwrap_or("");
                    let i: i64 = number(first, path, line)?;
                    let resolved = match i {
                        0 => return Err(parse_err(path, line, "OBJ indices start at 1")),
                        i if i > 0 => i - 1,
                        i => vertices.len() as i64 + i,
                    };
                    if resolved < 0 {
                        return Err(parse_err(path, line, format!("index {i} out of range")));
                    }
                    *slot = resolved as usize;
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}
