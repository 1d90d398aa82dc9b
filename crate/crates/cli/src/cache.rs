use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

use robin_weyl::domains::{BoundarySpec, DomainSpec};
use robin_weyl::model_spectra::{read_spectrum_csv, write_spectrum_csv};
use robin_weyl::{Error, Result, Spectrum};

fn canonical(v: &Value) -> Value {
    match v {
        Value::Number(n) => Value::String(format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN))),
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        // serde_json's map is ordered by key
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), canonical(v))).collect()),
        other => other.clone(),
    }
}

/// SHA-256 of `{"cutoff", "domain", "sigma", "solver"}` as canonical JSON.
///
/// Keys are sorted and every number is written with 17 significant digits. Canonicalization
/// covers key order only: σ listed for a different side order hashes differently.
pub fn cache_key(domain: &DomainSpec, sigma: &BoundarySpec, solver: &str, cutoff: f64) -> String {
    let doc = serde_json::json!({
        "cutoff": cutoff,
        "domain": serde_json::to_value(domain).expect("domain serializes"),
        "sigma": serde_json::to_value(sigma).expect("sigma serializes"),
        "solver": solver,
    });
    let text = serde_json::to_string(&canonical(&doc)).expect("canonical JSON serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Loads `<dir>/<key>.csv` when present, otherwise computes and stores it.
pub fn cached_spectrum<F: FnOnce() -> Result<Spectrum>>(dir: Option<&Path>, key: &str, compute: F) -> Result<(Spectrum, bool)> {
    let Some(dir) = dir else {
        return compute().map(|s| (s, false));
    };
    let path = dir.join(format!("{key}.csv"));
    if path.exists() {
        let f = File::open(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        return read_spectrum_csv(BufReader::new(f)).map(|s| (s, true));
    }
    let spec = compute()?;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let tmp = dir.join(format!("{key}.csv.tmp"));
    {
        let f = File::create(&tmp).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
        write_spectrum_csv(&spec, BufWriter::new(f))?;
    }
    std::fs::rename(&tmp, &path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok((spec, false))
}
