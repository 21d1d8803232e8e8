//! Input parsers: ASCII OFF triangle meshes, the generic complex format,
//! and plain per-vertex filtration files. `#` starts a comment anywhere;
//! blank lines are skipped.

use thiserror::Error;

use crate::complex::Multigrade;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unexpected end of input")]
    UnexpectedEof,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, tagged with 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_floats(line: usize, s: &str) -> Result<Vec<f64>, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| err(line, format!("expected a number, got {tok:?}")))
        })
        .collect()
}

fn parse_indices(line: usize, s: &str) -> Result<Vec<usize>, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| err(line, format!("expected a vertex index, got {tok:?}")))
        })
        .collect()
}

/// An ASCII OFF mesh: per-vertex coordinate rows (all columns kept) and
/// polygonal faces as vertex-index tuples.
pub struct OffMesh {
    pub coordinates: Vec<Vec<f64>>,
    pub faces: Vec<Vec<usize>>,
}

impl OffMesh {
    /// Selects coordinate columns as a vertex multigrade function.
    pub fn coordinate_grades(&self, columns: &[usize]) -> Result<Vec<Multigrade>, ParseError> {
        self.coordinates
            .iter()
            .enumerate()
            .map(|(v, row)| {
                let vals = columns
                    .iter()
                    .map(|&c| {
                        row.get(c).copied().ok_or_else(|| err(0, format!(
                            "vertex {v} has {} coordinate columns, column {c} requested",
                            row.len()
                        )))
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                Ok(Multigrade::new(vals))
            })
            .collect()
    }
}

/// Reads ASCII OFF: the `OFF` header (counts may share its line), a count
/// line `nv nf ne`, `nv` coordinate lines, `nf` face lines `k v_1 … v_k`.
pub fn read_off(text: &str) -> Result<OffMesh, ParseError> {
    let mut lines = content_lines(text);
    let (lno, header) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("OFF") {
        return Err(err(lno, "expected OFF header"));
    }
    let rest: Vec<&str> = toks.collect();
    let counts: Vec<usize> = if rest.is_empty() {
        let (lno, counts_line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        parse_indices(lno, counts_line)?
    } else {
        rest.iter()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| err(lno, format!("bad count {tok:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    if counts.len() < 2 {
        return Err(err(lno, "expected counts: n_vertices n_faces [n_edges]"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut coordinates = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (lno, line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let row = parse_floats(lno, line)?;
        if row.len() < 2 {
            return Err(err(lno, "vertex line needs at least two coordinates"));
        }
        coordinates.push(row);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (lno, line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let row = parse_indices(lno, line)?;
        let Some((&k, verts)) = row.split_first() else {
            return Err(err(lno, "empty face line"));
        };
        if verts.len() != k {
            return Err(err(
                lno,
                format!("face announces {k} vertices but lists {}", verts.len()),
            ));
        }
        faces.push(verts.to_vec());
    }
    Ok(OffMesh { coordinates, faces })
}

/// The generic complex format: `n_vertices n_top n_params`, then one grade
/// line per vertex, then one vertex-index line per top simplex.
pub struct GenericComplex {
    pub vertex_count: usize,
    pub params: usize,
    pub vertex_grades: Vec<Multigrade>,
    pub top_simplices: Vec<Vec<usize>>,
}

pub fn read_generic(text: &str) -> Result<GenericComplex, ParseError> {
    let mut lines = content_lines(text);
    let (lno, header) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    let counts = parse_indices(lno, header)?;
    if counts.len() != 3 {
        return Err(err(lno, "expected header: n_vertices n_top n_params"));
    }
    let (nv, nt, np) = (counts[0], counts[1], counts[2]);
    let mut vertex_grades = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (lno, line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let row = parse_floats(lno, line)?;
        if row.len() != np {
            return Err(err(
                lno,
                format!("vertex grade has {} values, expected {np}", row.len()),
            ));
        }
        vertex_grades.push(Multigrade::new(row));
    }
    let mut top_simplices = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (lno, line) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let row = parse_indices(lno, line)?;
        if row.is_empty() {
            return Err(err(lno, "empty simplex line"));
        }
        top_simplices.push(row);
    }
    Ok(GenericComplex {
        vertex_count: nv,
        params: np,
        vertex_grades,
        top_simplices,
    })
}

/// A filtration file: one line per vertex, each with the same number of
/// whitespace-separated values.
pub fn read_filtration(text: &str) -> Result<Vec<Multigrade>, ParseError> {
    let mut out = Vec::new();
    let mut params = None;
    for (lno, line) in content_lines(text) {
        let row = parse_floats(lno, line)?;
        match params {
            None => params = Some(row.len()),
            Some(p) if p != row.len() => {
                return Err(err(
                    lno,
                    format!("grade has {} values, expected {p}", row.len()),
                ))
            }
            _ => {}
        }
        out.push(Multigrade::new(row));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_roundtrip() {
        let text = "OFF\n# a triangle\n3 1 3\n0.0 0.0 1.0\n1.0 0.0 2.0\n0.0 1.0 3.0\n3 0 1 2\n";
        let mesh = read_off(text).unwrap();
        assert_eq!(mesh.coordinates.len(), 3);
        assert_eq!(mesh.faces, vec![vec![0, 1, 2]]);
        let grades = mesh.coordinate_grades(&[0, 1]).unwrap();
        assert_eq!(grades[2], Multigrade::new(vec![0.0, 1.0]));
    }

    #[test]
    fn off_counts_on_header_line() {
        let text = "OFF 3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
        let mesh = read_off(text).unwrap();
        assert_eq!(mesh.coordinates.len(), 3);
    }

    #[test]
    fn off_errors() {
        assert!(matches!(read_off(""), Err(ParseError::UnexpectedEof)));
        assert!(read_off("PLY\n3 1 0\n").is_err());
        let bad_face = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2\n";
        assert!(read_off(bad_face).is_err());
    }

    #[test]
    fn generic_roundtrip() {
        let text = "# T1\n3 1 2\n0 5\n1 4\n2 3\n0 1 2\n";
        let g = read_generic(text).unwrap();
        assert_eq!((g.vertex_count, g.params), (3, 2));
        assert_eq!(g.vertex_grades[1], Multigrade::new(vec![1.0, 4.0]));
        assert_eq!(g.top_simplices, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn generic_rejects_bad_arity() {
        let text = "2 1 2\n0 1\n1\n0 1\n";
        assert!(read_generic(text).is_err());
    }

    #[test]
    fn filtration_file() {
        let text = "0 5\n1 4\n2 3 # vertex c\n";
        let f = read_filtration(text).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[2], Multigrade::new(vec![2.0, 3.0]));
        assert!(read_filtration("0 1\n2\n").is_err());
    }
}
