//! On-disk persistence for computed polynomials and counts.
//!
//! Polynomials are stored one file per type, `F_g<g>_n<n>.json`, in the
//! canonical JSON form. A load re-runs the structural invariant suite, so a
//! corrupted or stale file is rejected rather than trusted.

use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::run_invariant_suite;
use crate::error::{Error, Result};
use crate::lattice::CountTable;
use crate::poly::LaurentPoly;

/// Directory-backed cache addressed by `(g, n)`.
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn poly_path(&self, g: u32, n: u32) -> PathBuf {
        self.dir.join(format!("F_g{g}_n{n}.json"))
    }

    pub fn store_poly(&self, g: u32, n: u32, poly: &LaurentPoly) -> Result<()> {
        let tmp = self.poly_path(g, n).with_extension("json.tmp");
        fs::write(&tmp, poly.to_canonical_json())?;
        fs::rename(&tmp, self.poly_path(g, n))?;
        Ok(())
    }

    /// Load and validate; `Ok(None)` when the file does not exist.
    pub fn load_poly(&self, g: u32, n: u32) -> Result<Option<LaurentPoly>> {
        let path = self.poly_path(g, n);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let poly = LaurentPoly::from_json(&text)?;
        if poly.nvars() != n as usize {
            return Err(Error::VarMismatch(poly.nvars(), n as usize));
        }
        let report = run_invariant_suite(g, n, &poly);
        if let Some(fail) = report.first_failure() {
            return Err(Error::InvariantViolation {
                g,
                n,
                detail: format!(
                    "cached file {} fails {}",
                    path.display(),
                    fail.check
                ),
            });
        }
        Ok(Some(poly))
    }

    /// Load every `F_g*_n*.json` in the directory into the engine's memo
    /// table; each file passes the invariant suite before admission.
    pub fn load_all(&self, engine: &crate::recursion::Engine) -> Result<usize> {
        let mut loaded = 0;
        for entry in fs::read_dir(&self.dir)? {
            let name = entry?.file_name();
            let name = name.to_string_lossy();
            let Some(stem) = name.strip_prefix("F_g").and_then(|s| s.strip_suffix(".json"))
            else {
                continue;
            };
            let Some((g, n)) = stem.split_once("_n") else {
                continue;
            };
            let (Ok(g), Ok(n)) = (g.parse::<u32>(), n.parse::<u32>()) else {
                continue;
            };
            if let Some(poly) = self.load_poly(g, n)? {
                engine.admit(g, n, poly)?;
                loaded += 1;
            }
        }
        Ok(loaded)
    }

    /// Persist every entry of the engine's memo table that is not already
    /// on disk.
    pub fn store_all(&self, engine: &crate::recursion::Engine) -> Result<usize> {
        let mut stored = 0;
        for (g, n) in engine.cached_keys() {
            if self.poly_path(g, n).exists() {
                continue;
            }
            if let Some(poly) = engine.cached(g, n) {
                self.store_poly(g, n, &poly)?;
                stored += 1;
            }
        }
        Ok(stored)
    }

    fn counts_path(&self) -> PathBuf {
        self.dir.join("n_cache.json")
    }

    pub fn store_counts(&self, counts: &CountTable) -> Result<()> {
        let tmp = self.counts_path().with_extension("json.tmp");
        fs::write(&tmp, counts.cache_json())?;
        fs::rename(&tmp, self.counts_path())?;
        Ok(())
    }

    pub fn load_counts(&self, counts: &CountTable) -> Result<usize> {
        let text = match fs::read_to_string(self.counts_path()) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        counts.load_cache_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::Engine;

    #[test]
    fn poly_round_trip_with_validation() {
        let dir = std::env::temp_dir().join(format!("rgpoly-cache-{}", std::process::id()));
        let cache = DiskCache::new(&dir).unwrap();
        let engine = Engine::new();
        let f = engine.compute_f(1, 2).unwrap();
        cache.store_poly(1, 2, &f).unwrap();
        let loaded = cache.load_poly(1, 2).unwrap().unwrap();
        assert_eq!(loaded, *f);
        assert!(cache.load_poly(0, 4).unwrap().is_none());
        // A tampered file is rejected by the invariant suite.
        std::fs::write(
            cache.poly_path(1, 2),
            loaded
                .to_canonical_json()
                .replace("\"1/2048\"", "\"3/2048\""),
        )
        .unwrap();
        assert!(matches!(
            cache.load_poly(1, 2),
            Err(Error::InvariantViolation { .. })
        ));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn counts_round_trip() {
        let dir = std::env::temp_dir().join(format!("rgpoly-ncache-{}", std::process::id()));
        let cache = DiskCache::new(&dir).unwrap();
        let counts = CountTable::new();
        counts.compute_n(1, 1, &[6]).unwrap();
        cache.store_counts(&counts).unwrap();
        let fresh = CountTable::new();
        assert_eq!(cache.load_counts(&fresh).unwrap(), 1);
        assert_eq!(fresh.cache_json(), counts.cache_json());
        std::fs::remove_dir_all(&dir).ok();
    }
}
