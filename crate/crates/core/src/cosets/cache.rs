//! Versioned on-disk cache of coset spaces and certificates.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CosetSpace, FoldCertificate, RootSet};
use crate::rootsys::{RootSystem, RootVector};
use crate::{Error, Result, TypeSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub format_version: u32,
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub u_gens: Vec<Vec<i32>>,
    pub size: usize,
    pub u_order: u64,
    pub sigma_u: Vec<usize>,
    pub representatives: Vec<String>,
    pub action_tables: Vec<Vec<u32>>,
    pub certificate: Option<serde_json::Value>,
}

/// File name: sha256 over `(format_version, type, rank, u_gens)`.
pub fn cache_key(spec: TypeSpec, u_gens: &[RootVector]) -> String {
    let mut h = Sha256::new();
    h.update(FORMAT_VERSION.to_le_bytes());
    h.update(spec.to_string().as_bytes());
    h.update((spec.rank as u64).to_le_bytes());
    for g in u_gens {
        for &d in &g.doubled {
            h.update(d.to_le_bytes());
        }
        h.update([0xff]);
    }
    hex::encode(h.finalize())
}

pub fn cache_path(dir: &Path, spec: TypeSpec, u_gens: &[RootVector]) -> PathBuf {
    dir.join(format!("{}.json", cache_key(spec, u_gens)))
}

pub fn to_file(space: &CosetSpace, certificate: Option<&FoldCertificate>) -> Result<CacheFile> {
    Ok(CacheFile {
        format_version: FORMAT_VERSION,
        type_label: space.spec.to_string(),
        rank: space.spec.rank,
        u_gens: space.u_gens.iter().map(|g| g.doubled.clone()).collect(),
        size: space.size(),
        u_order: space.u_order,
        sigma_u: space.sigma_u.clone(),
        representatives: space.representatives.iter().map(RootSet::to_hex).collect(),
        action_tables: space.action_tables.clone(),
        certificate: certificate.map(serde_json::to_value).transpose()?,
    })
}

pub fn from_file(file: &CacheFile, sys: &RootSystem) -> Result<CosetSpace> {
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Cache(format!("unknown format_version {}", file.format_version)));
    }
    if file.type_label != sys.spec.to_string() || file.rank != sys.spec.rank {
        return Err(Error::Cache("type does not match".into()));
    }
    let reps = file.representatives.iter().map(|h| RootSet::from_hex(h)).collect::<Result<Vec<_>>>()?;
    if reps.len() != file.size {
        return Err(Error::Cache("size does not match representatives".into()));
    }
    if file.action_tables.len() != sys.simple_indices.len() {
        return Err(Error::Cache("one action table per simple reflection expected".into()));
    }
    let u_gens = file.u_gens.iter().map(|d| RootVector::from_doubled(d.clone())).collect();
    CosetSpace::from_parts(sys.spec, u_gens, file.u_order, file.sigma_u.clone(), reps, file.action_tables.clone())
}

/// Reads and validates a cached space. `Ok(None)` when absent or stale.
pub fn load(dir: &Path, sys: &RootSystem, u_gens: &[RootVector]) -> Result<Option<CosetSpace>> {
    let path = cache_path(dir, sys.spec, u_gens);
    let Ok(text) = fs::read_to_string(&path) else {
        return Ok(None);
    };
    let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
        return Ok(None);
    };
    match from_file(&file, sys) {
        Ok(space) => Ok(Some(space)),
        Err(Error::Cache(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Writes atomically through a temporary file in the same directory.
pub fn store(dir: &Path, space: &CosetSpace, certificate: Option<&FoldCertificate>) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, space.spec, &space.u_gens);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&to_file(space, certificate)?)?)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads from the cache or builds and stores. Returns the space and whether it was cached.
pub fn load_or_build(dir: Option<&Path>, sys: &RootSystem, u_gens: &[RootVector], element_cap: usize) -> Result<(CosetSpace, bool)> {
    if let Some(d) = dir {
        if let Some(space) = load(d, sys, u_gens)? {
            return Ok((space, true));
        }
    }
    let space = super::build_coset_space(sys, u_gens, element_cap)?;
    if let Some(d) = dir {
        store(d, &space, None)?;
    }
    Ok((space, false))
}

/// Summary of each cache file in a directory.
pub fn inspect(dir: &Path) -> Result<Vec<serde_json::Value>> {
    let mut out = Vec::new();
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(out);
    };
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    paths.sort();
    for p in paths {
        let text = fs::read_to_string(&p)?;
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(f) => out.push(serde_json::json!({
                "file": name,
                "format_version": f.format_version,
                "type": f.type_label,
                "size": f.size,
                "u_order": f.u_order,
                "valid": f.format_version == FORMAT_VERSION,
            })),
            Err(_) => out.push(serde_json::json!({ "file": name, "valid": false })),
        }
    }
    Ok(out)
}

/// Removes cache files; returns the count.
pub fn clear(dir: &Path) -> Result<usize> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(0);
    };
    let mut n = 0;
    for e in entries.flatten() {
        let p = e.path();
        if p.extension().is_some_and(|x| x == "json") {
            fs::remove_file(p)?;
            n += 1;
        }
    }
    Ok(n)
}
