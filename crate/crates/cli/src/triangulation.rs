//! Triangulation files: one top simplex per line, an optional `+` or `-`
//! orientation sign followed by vertex indices. `#` starts a comment.
//!
//! ```text
//! # boundary of the tetrahedron
//! + 1 2 3
//! - 0 2 3
//! + 0 1 3
//! - 0 1 2
//! ```

use lefschetz_core::simplicial::SignedSimplex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TriangulationError {
    pub line: usize,
    pub message: String,
}

pub fn parse_triangulation(text: &str) -> Result<Vec<SignedSimplex>, TriangulationError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| TriangulationError { line: i + 1, message };
        let mut tokens = line.split_whitespace().peekable();
        let sign = match tokens.peek() {
            Some(&"+") => {
                tokens.next();
                1
            }
            Some(&"-") => {
                tokens.next();
                -1
            }
            _ => 1,
        };
        let vertices = tokens
            .map(|t| t.parse::<usize>().map_err(|_| err(format!("'{t}' is not a vertex index"))))
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.is_empty() {
            return Err(err("sign without vertices".into()));
        }
        if let Some(first) = out.first().map(|s: &SignedSimplex| s.vertices.len()) {
            if first != vertices.len() {
                return Err(err(format!("{} vertices, earlier simplices have {first}", vertices.len())));
            }
        }
        out.push(SignedSimplex::new(vertices, sign));
    }
    if out.is_empty() {
        return Err(TriangulationError { line: 0, message: "no simplices".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_and_comments() {
        let s = parse_triangulation("# c\n+ 0 1 2 # trailing\n\n- 0 1 3\n1 2 3\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], SignedSimplex::new(vec![0, 1, 3], -1));
        assert_eq!(s[2], SignedSimplex::new(vec![1, 2, 3], 1));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_triangulation("0 1 x").unwrap_err().line, 1);
        assert_eq!(parse_triangulation("0 1 2\n0 1").unwrap_err().line, 2);
        assert!(parse_triangulation("# only comments").is_err());
        assert!(parse_triangulation("-").is_err());
    }
}
