//! Memoised subspace bases, in memory and optionally on disk.
//!
//! The on-disk directory is taken from `PROLONG_CACHE_DIR`. A missing or
//! unreadable entry is recomputed and rewritten; results never depend on
//! whether the cache is enabled.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use prolong_core::kostant::{build_v_with, RepRealization};
use prolong_core::prolong::ProlongationSpace;
use prolong_core::tensor::GroupKind;
use prolong_core::young::{realize_class, SymmetryClass};
use prolong_core::{Result, SubspaceBasis};

use crate::format::BasisJson;

pub const CACHE_ENV: &str = "PROLONG_CACHE_DIR";

#[derive(Debug, Default)]
pub struct BasisCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, SubspaceBasis>>,
}

impl BasisCache {
    /// In-memory only.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        BasisCache { dir: Some(dir.into()), memory: Mutex::default() }
    }

    /// Disk-backed when `PROLONG_CACHE_DIR` is set and non-empty.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::with_dir(d),
            _ => Self::new(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn realize(&self, class: &SymmetryClass, n: usize) -> SubspaceBasis {
        let key = cache_key(class, n);
        if let Some(b) = self.memory.lock().expect("cache lock").get(&key) {
            return b.clone();
        }
        let b = match self.load(&key, class, n) {
            Some(b) => b,
            None => {
                let b = realize_class(class, n);
                self.store(&key, &b);
                b
            }
        };
        self.memory.lock().expect("cache lock").insert(key, b.clone());
        b
    }

    pub fn prolongation_space(&self, n: usize, ell: usize) -> Result<ProlongationSpace> {
        ProlongationSpace::build_with(n, ell, |c, n| Ok(self.realize(c, n)))
    }

    pub fn representation(&self, n: usize, ell: usize) -> Result<RepRealization> {
        build_v_with(n, ell, |c, m| Ok(self.realize(c, m)))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    fn load(&self, key: &str, class: &SymmetryClass, n: usize) -> Option<SubspaceBasis> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let json: BasisJson = serde_json::from_str(&text).ok()?;
        let b = json.to_basis().ok()?;
        (b.n() == n && b.arity() == class.arity()).then_some(b)
    }

    fn store(&self, key: &str, b: &SubspaceBasis) {
        let Some(path) = self.path(key) else { return };
        let Some(dir) = path.parent() else { return };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let Ok(text) = serde_json::to_string(&BasisJson::from_basis(b)) else { return };
        // write-then-rename so concurrent readers never see a partial file
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        if fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

pub fn cache_key(class: &SymmetryClass, n: usize) -> String {
    let kind = match class.kind() {
        GroupKind::Symmetric => "sym",
        GroupKind::Antisymmetric => "alt",
    };
    let groups: Vec<String> = class.groups().iter().map(|g| g.to_string()).collect();
    let raises: Vec<String> = class.raises().iter().map(|(a, b)| format!("{a}.{b}")).collect();
    format!("{kind}_g{}_r{}_n{n}", groups.join("-"), raises.join("-"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("prolong-cache-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn keys_distinguish_classes() {
        let a = SymmetryClass::prolongation_component(2, 1);
        let b = SymmetryClass::prolongation_component(1, 2);
        assert_ne!(cache_key(&a, 3), cache_key(&b, 3));
        assert_ne!(cache_key(&a, 3), cache_key(&a, 4));
    }

    #[test]
    fn disk_cache_is_transparent() {
        let dir = scratch("transparent");
        let class = SymmetryClass::prolongation_component(2, 1);
        let direct = realize_class(&class, 3);
        assert_eq!(BasisCache::with_dir(&dir).realize(&class, 3), direct);
        // fresh process-level cache, served from disk
        assert_eq!(BasisCache::with_dir(&dir).realize(&class, 3), direct);
        let fresh = BasisCache::with_dir(&dir).prolongation_space(3, 2).unwrap();
        assert_eq!(fresh.component_dims(), BasisCache::new().prolongation_space(3, 2).unwrap().component_dims());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = scratch("corrupt");
        let class = SymmetryClass::prolongation_component(1, 1);
        let cache = BasisCache::with_dir(&dir);
        let direct = cache.realize(&class, 2);
        let path = dir.join(format!("{}.json", cache_key(&class, 2)));
        fs::write(&path, "{ not json").unwrap();
        assert_eq!(BasisCache::with_dir(&dir).realize(&class, 2), direct);
        fs::write(&path, r#"{"n":2,"arity":2,"columns":[[[0,"1"]]],"coord_rows":[1]}"#).unwrap();
        assert_eq!(BasisCache::with_dir(&dir).realize(&class, 2), direct);
        let _ = fs::remove_dir_all(&dir);
    }
}
