//! Spectrum cache files.
//!
//! ```text
//! # domain=<hash> sigma=<hash> solver=<id> cutoff=<float> complete_below=<float> dim=<d> discretized=<bool>
//! index,eigenvalue,multiplicity
//! ```

use std::io::{BufRead, Write};

use super::{Level, Provenance, Spectrum};
use crate::error::{Error, Result};
use crate::real::Real;

/// Writes a spectrum; whitespace is stripped from provenance ids and floats use 17 significant digits so that reloads are bit-exact.
pub fn write_spectrum_csv<T: Real, W: Write>(spectrum: &Spectrum<T>, mut out: W) -> Result<()> {
    let p = &spectrum.provenance;
    let token = |s: &str| -> String { s.chars().filter(|c| !c.is_whitespace()).collect() };
    writeln!(
        out,
        "# domain={} sigma={} solver={} cutoff={:.16e} complete_below={:.16e} dim={} discretized={}",
        token(&p.domain),
        token(&p.sigma),
        token(&p.solver),
        spectrum.cutoff.to_f64_lossy(),
        spectrum.complete_below.to_f64_lossy(),
        spectrum.dim,
        spectrum.discretized
    )?;
    writeln!(out, "index,eigenvalue,multiplicity")?;
    for (i, l) in spectrum.levels().iter().enumerate() {
        writeln!(out, "{},{:.16e},{}", i, l.value.to_f64_lossy(), l.multiplicity)?;
    }
    Ok(())
}

/// Reads a spectrum written by [`write_spectrum_csv`].
pub fn read_spectrum_csv<T: Real, R: BufRead>(input: R) -> Result<Spectrum<T>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty spectrum file".into()))??;
    let fields = header.strip_prefix("# ").ok_or_else(|| Error::Parse("missing '# ' header".into()))?;
    let mut provenance = Provenance::default();
    let (mut cutoff, mut complete_below, mut dim, mut discretized) = (None, None, None, false);
    for kv in fields.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field '{kv}'")))?;
        let num = |v: &str| v.parse::<f64>().map_err(|e| Error::Parse(format!("header {k}: {e}")));
        match k {
            "domain" => provenance.domain = v.to_string(),
            "sigma" => provenance.sigma = v.to_string(),
            "solver" => provenance.solver = v.to_string(),
            "cutoff" => cutoff = Some(num(v)?),
            "complete_below" => complete_below = Some(num(v)?),
            "dim" => dim = Some(v.parse::<usize>().map_err(|e| Error::Parse(format!("header dim: {e}")))?),
            "discretized" => discretized = v == "true",
            _ => {}
        }
    }
    let cutoff = cutoff.ok_or_else(|| Error::Parse("header lacks cutoff".into()))?;
    let complete_below = complete_below.ok_or_else(|| Error::Parse("header lacks complete_below".into()))?;
    let mut levels = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() || line.starts_with("index") || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',');
        let bad = || Error::Parse(format!("spectrum row {}: '{line}'", lineno + 2));
        let _index = parts.next().ok_or_else(bad)?;
        let value: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let multiplicity: usize = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        levels.push(Level { value: T::lit(value), multiplicity });
    }
    let mut s = Spectrum { levels, cutoff: T::lit(cutoff), complete_below: T::lit(complete_below), provenance, dim: dim.unwrap_or(2), discretized };
    s.complete_below = s.complete_below.min(s.cutoff);
    Ok(s)
}
