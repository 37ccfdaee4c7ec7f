//! Clique certificates: one `p/q` per line, `#` starts a comment.

use crate::error::{Error, Result};
use crate::vertex::FareyVertex;

/// Parses a certificate. Blank lines and `#` comments are skipped; repeated
/// vertices are an error.
pub fn parse_certificate(text: &str) -> Result<Vec<FareyVertex>> {
    let mut out: Vec<FareyVertex> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: FareyVertex =
            line.parse().map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if out.contains(&v) {
            return Err(Error::Parse(format!("line {}: {v} appears twice", n + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

/// Writes vertices one per line after `# `-prefixed header lines.
pub fn write_certificate(header: &[String], vs: &[FareyVertex]) -> String {
    let mut s = String::new();
    for h in header {
        for line in h.lines() {
            s.push_str("# ");
            s.push_str(line);
            s.push('\n');
        }
    }
    for v in vs {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}
