use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// One row of a statistics table: grid point, computed value, prediction, remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatRow {
    pub x: f64,
    pub value: f64,
    pub prediction: f64,
    pub remainder: f64,
}

/// Writes `# comment` then `{var},value,prediction,remainder` rows with 17 significant digits.
///
/// `var` is `lambda` or `t`.
pub fn write_stat_table<W: Write>(mut w: W, var: &str, comment: &str, rows: &[StatRow]) -> Result<()> {
    writeln!(w, "# {}", comment.replace('\n', " "))?;
    writeln!(w, "{var},value,prediction,remainder")?;
    for r in rows {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", r.x, r.value, r.prediction, r.remainder)?;
    }
    Ok(())
}

/// Reads a table written by [`write_stat_table`]; returns the variable name and rows.
pub fn read_stat_table<R: BufRead>(r: R) -> Result<(String, Vec<StatRow>)> {
    let mut var = None;
    let mut rows = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if var.is_none() {
            let head: Vec<&str> = line.split(',').collect();
            if head.len() != 4 || head[1..] != ["value", "prediction", "remainder"] {
                return Err(Error::Parse(format!("line {}: unexpected header {line:?}", i + 1)));
            }
            var = Some(head[0].to_string());
            continue;
        }
        let f: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
            .collect::<Result<_>>()?;
        if f.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 columns", i + 1)));
        }
        rows.push(StatRow { x: f[0], value: f[1], prediction: f[2], remainder: f[3] });
    }
    Ok((var.ok_or_else(|| Error::Parse("missing header".into()))?, rows))
}
