//! Text format for instances: one `position weight` pair per line, separated
//! by whitespace or a comma. `#` starts a comment; blank lines are skipped.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::model::ProblemInstance;

pub fn parse_points<R: BufRead>(source: R) -> Result<ProblemInstance> {
    let mut raw = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected 'position weight', found {} field(s)",
                    fields.len()
                ),
            });
        }
        let num = |f: &str| {
            f.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("'{f}' is not a number"),
            })
        };
        raw.push((num(fields[0])?, num(fields[1])?));
    }
    ProblemInstance::normalize(raw)
}

pub fn parse_points_str(text: &str) -> Result<ProblemInstance> {
    parse_points(text.as_bytes())
}

/// Writes `instance` so that [`parse_points`] reads back the same values.
pub fn write_instance<W: Write>(instance: &ProblemInstance, mut out: W) -> io::Result<()> {
    for p in instance.points() {
        // Display for f64 is the shortest representation that round-trips
        writeln!(out, "{} {}", p.position, p.weight)?;
    }
    Ok(())
}
