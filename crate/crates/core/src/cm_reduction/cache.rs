//! Disk cache of class polynomials, one text file per discriminant:
//!
//! ```text
//! HCP 1 <D> <h>
//! <coefficient of X^0>
//! ...
//! <coefficient of X^h>
//! ```
//!
//! Files are written once per key through a temporary file and an atomic
//! rename, so concurrent readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use rug::Integer;

use crate::arith::Discriminant;
use crate::error::{Error, Result};

use super::class_poly::{compute_class_polynomial, ClassPolynomial, DEFAULT_DISCRIMINANT_BOUND};

pub const CACHE_DIR_ENV: &str = "SINGMOD_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct ClassPolynomialStore {
    dir: Option<PathBuf>,
    bound: u64,
    precision_override: Option<u32>,
}

impl Default for ClassPolynomialStore {
    fn default() -> Self {
        Self::from_env()
    }
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl ClassPolynomialStore {
    pub fn new(dir: Option<PathBuf>) -> Self {
        ClassPolynomialStore { dir, bound: DEFAULT_DISCRIMINANT_BOUND, precision_override: None }
    }

    /// No disk cache at all.
    pub fn in_memory() -> Self {
        Self::new(None)
    }

    /// `$SINGMOD_CACHE_DIR` if set, else `$HOME/.cache/singmod`, else no cache.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("singmod")));
        Self::new(dir)
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_precision(mut self, bits: Option<u32>) -> Self {
        self.precision_override = bits;
        self
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn path_for(&self, d: i64) -> Option<PathBuf> {
        self.dir.as_ref().map(|dir| dir.join(format!("hcp_{}.txt", d.unsigned_abs())))
    }

    pub fn get(&self, disc: &Discriminant) -> Result<ClassPolynomial> {
        if disc.abs() > self.bound {
            return Err(Error::DiscriminantTooLarge { value: disc.value(), bound: self.bound });
        }
        let path = self.path_for(disc.value());
        if let Some(path) = &path {
            if path.exists() {
                return read_cache_file(path, disc.value());
            }
        }
        let poly = compute_class_polynomial(disc, self.precision_override)?;
        if let Some(path) = &path {
            write_cache_file(path, &poly)?;
        }
        Ok(poly)
    }
}

pub fn format_cache_file(poly: &ClassPolynomial) -> String {
    let mut s = format!("HCP 1 {} {}\n", poly.discriminant, poly.degree());
    for c in &poly.coefficients {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_cache_file(text: &str, expected: i64) -> Result<ClassPolynomial> {
    let bad = |what: &str| Error::Cache(format!("discriminant {expected}: {what}"));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty file"))?.split_whitespace().collect();
    if header.len() != 4 || header[0] != "HCP" || header[1] != "1" {
        return Err(bad("bad header"));
    }
    let d: i64 = header[2].parse().map_err(|_| bad("bad discriminant"))?;
    let h: usize = header[3].parse().map_err(|_| bad("bad degree"))?;
    if d != expected {
        return Err(bad("discriminant mismatch"));
    }
    let coefficients = lines
        .map(|l| Integer::from_str_radix(l.trim(), 10).map_err(|_| bad("bad coefficient")))
        .collect::<Result<Vec<_>>>()?;
    if coefficients.len() != h + 1 || coefficients.last() != Some(&Integer::from(1)) {
        return Err(bad("wrong number of coefficients or not monic"));
    }
    Ok(ClassPolynomial { discriminant: d, coefficients })
}

fn read_cache_file(path: &Path, expected: i64) -> Result<ClassPolynomial> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    parse_cache_file(&text, expected)
}

fn write_cache_file(path: &Path, poly: &ClassPolynomial) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let dir = path.parent().expect("cache files live in a directory");
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!(
        ".tmp-{}-{}-{}",
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, Ordering::Relaxed),
        path.file_name().unwrap().to_string_lossy()
    ));
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(format_cache_file(poly).as_bytes()).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    // contents are a function of the key, so a concurrent writer that wins the
    // rename leaves an identical file behind
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_reuse() {
        let dir = std::env::temp_dir().join(format!("singmod-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let store = ClassPolynomialStore::new(Some(dir.clone()));
        let d = Discriminant::new(-23).unwrap();
        let fresh = store.get(&d).unwrap();
        let file = dir.join("hcp_23.txt");
        let text = fs::read_to_string(&file).unwrap();
        assert!(text.starts_with("HCP 1 -23 3\n"));
        assert_eq!(text.lines().count(), 5);
        assert_eq!(store.get(&d).unwrap(), fresh);
        assert_eq!(parse_cache_file(&text, -23).unwrap(), fresh);
        assert!(parse_cache_file(&text, -31).is_err());
        assert!(parse_cache_file("HCP 1 -23 3\n1\n", -23).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn bound_is_enforced() {
        let store = ClassPolynomialStore::in_memory().with_bound(1000);
        let err = store.get(&Discriminant::new(-1003).unwrap()).unwrap_err();
        assert_eq!(err, Error::DiscriminantTooLarge { value: -1003, bound: 1000 });
    }
}
