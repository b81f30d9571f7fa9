//! On-disk memo of filter evaluations, enabled by `UDD_CACHE_DIR`.
//!
//! Entries store raw `f64` bits, so a hit returns exactly what a fresh
//! evaluation would. Unreadable or malformed entries are recomputed.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "UDD_CACHE_DIR";

const FORMAT: &str = "udd-filter-cache 1";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(CACHE_ENV)?;
        if dir.is_empty() {
            return None;
        }
        Some(Self { dir: dir.into() })
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Values for `key`, computing and storing them on a miss.
    pub fn get_or_compute<E>(
        &self,
        key: &[u8],
        len: usize,
        compute: impl FnOnce() -> Result<Vec<f64>, E>,
    ) -> Result<Vec<f64>, E> {
        let path = self.dir.join(format!("{}.txt", hex::encode(Sha256::digest(key))));
        if let Some(values) = read(&path, len) {
            return Ok(values);
        }
        let values = compute()?;
        // a failed write only costs a recomputation next time
        let _ = self.write(&path, &values);
        Ok(values)
    }

    fn write(&self, path: &PathBuf, values: &[f64]) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut text = String::from(FORMAT);
        text.push('\n');
        for v in values {
            text.push_str(&format!("{:016x}\n", v.to_bits()));
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)
    }
}

fn read(path: &PathBuf, len: usize) -> Option<Vec<f64>> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != FORMAT {
        return None;
    }
    let values: Vec<f64> = lines
        .map(|l| u64::from_str_radix(l, 16).ok().map(f64::from_bits))
        .collect::<Option<_>>()?;
    (values.len() == len).then_some(values)
}

/// Cache key for `|f|^2` of a pulse sequence on a frequency grid.
pub fn filter_key(times: &[f64], total: f64, omegas: &[f64]) -> Vec<u8> {
    let mut key = Vec::with_capacity(8 * (times.len() + omegas.len() + 3));
    key.extend_from_slice(b"filter-abs2");
    key.extend_from_slice(&total.to_bits().to_le_bytes());
    key.extend_from_slice(&(times.len() as u64).to_le_bytes());
    for t in times {
        key.extend_from_slice(&t.to_bits().to_le_bytes());
    }
    for w in omegas {
        key.extend_from_slice(&w.to_bits().to_le_bytes());
    }
    key
}
