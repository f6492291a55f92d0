//! The bundled corpus of small finite groups: in-code builders, the on-disk
//! manifest with Cayley files, and loading with checksum verification.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::finite::builders::*;
use crate::finite::CayleyTable;
use crate::oracles::GroupOracle;

/// Environment variable overriding the corpus directory.
pub const CORPUS_ENV: &str = "GIRTHLAB_CORPUS";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Names of every builtin group, in corpus order.
pub fn builtin_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=24).map(|n| format!("C{n}")).collect();
    names.extend((3..=12).map(|q| format!("D{q}")));
    for n in [
        "S3", "V4", "C2xC4", "C2xC2xC2", "Q8", "C3xC3", "A4", "Dic3", "C2xC6", "C4xC4", "C2xC8", "C2xC2xC4",
        "C2xD4", "C2xQ8", "Dic4", "C3xS3", "C3xC6", "Dic5", "C2xC10", "S4", "SL23", "C2xA4", "C2xC12",
        "C2xC2xC6", "Dic6", "C3xD4", "C4xS3",
    ] {
        names.push(n.to_string());
    }
    names
}

/// Table and default generators of a builtin group.
pub fn builtin(name: &str) -> Option<(CayleyTable, Vec<usize>)> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    if let Some(n) = num("C").filter(|n| (1..=64).contains(n)) {
        return Some(cyclic(n));
    }
    if let Some(q) = num("D").filter(|q| (2..=64).contains(q)) {
        return Some(dihedral(q));
    }
    if let Some(n) = num("Dic").filter(|n| (2..=16).contains(n)) {
        return Some(dicyclic(n));
    }
    Some(match name {
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "A4" => alternating4(),
        "Q8" => dicyclic(2),
        "SL23" => special_linear2(3),
        "V4" => product(cyclic(2), cyclic(2)),
        "C2xC4" => product(cyclic(2), cyclic(4)),
        "C2xC2xC2" => product(product(cyclic(2), cyclic(2)), cyclic(2)),
        "C3xC3" => product(cyclic(3), cyclic(3)),
        "C2xC6" => product(cyclic(2), cyclic(6)),
        "C4xC4" => product(cyclic(4), cyclic(4)),
        "C2xC8" => product(cyclic(2), cyclic(8)),
        "C2xC2xC4" => product(product(cyclic(2), cyclic(2)), cyclic(4)),
        "C2xD4" => product(cyclic(2), dihedral(4)),
        "C2xQ8" => product(cyclic(2), dicyclic(2)),
        "C3xS3" => product(cyclic(3), symmetric(3)),
        "C3xC6" => product(cyclic(3), cyclic(6)),
        "C2xC10" => product(cyclic(2), cyclic(10)),
        "C2xA4" => product(cyclic(2), alternating4()),
        "C2xC12" => product(cyclic(2), cyclic(12)),
        "C2xC2xC6" => product(product(cyclic(2), cyclic(2)), cyclic(6)),
        "C3xD4" => product(cyclic(3), dihedral(4)),
        "C4xS3" => product(cyclic(4), symmetric(3)),
        _ => return None,
    })
}

/// Oracle for a builtin group, optionally with explicit generator indices.
pub fn builtin_oracle(name: &str, gens: Option<Vec<usize>>) -> Result<GroupOracle> {
    let (t, g) = builtin(name).ok_or_else(|| Error::Validation(format!("unknown builtin group `{name}`")))?;
    GroupOracle::finite(Arc::new(t), gens.unwrap_or(g), name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub order: usize,
    pub gens: Vec<usize>,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub groups: Vec<ManifestEntry>,
}

#[derive(Clone, Debug)]
pub struct CorpusGroup {
    pub name: String,
    pub oracle: GroupOracle,
}

/// Groups loaded from a corpus directory.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub groups: Vec<CorpusGroup>,
    /// sha256 of the manifest file.
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Corpus directory: `$GIRTHLAB_CORPUS`, else the repository's `corpus/`.
pub fn default_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

impl Corpus {
    /// Write the manifest and one Cayley file per builtin group.
    pub fn generate(dir: &Path) -> Result<Manifest> {
        let groups_dir = dir.join("groups");
        std::fs::create_dir_all(&groups_dir)?;
        let mut groups = Vec::new();
        for name in builtin_names() {
            let (t, gens) = builtin(&name).expect("listed builtin");
            let text = t.to_text();
            let file = format!("groups/{name}.cayley");
            std::fs::write(dir.join(&file), &text)?;
            groups.push(ManifestEntry {
                name,
                file,
                order: t.order(),
                gens,
                sha256: sha256_hex(text.as_bytes()),
            });
        }
        let manifest = Manifest { groups };
        let json = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
        std::fs::write(dir.join(MANIFEST_FILE), json)?;
        Ok(manifest)
    }

    pub fn load(dir: &Path) -> Result<Corpus> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let bytes = std::fs::read(&manifest_path)
            .map_err(|e| Error::CorpusMissing(format!("{}: {e}", manifest_path.display())))?;
        let manifest: Manifest = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Validation(format!("{}: {e}", manifest_path.display())))?;
        let mut groups = Vec::with_capacity(manifest.groups.len());
        for entry in &manifest.groups {
            let path = dir.join(&entry.file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::CorpusMissing(format!("{}: {e}", path.display())))?;
            if sha256_hex(text.as_bytes()) != entry.sha256 {
                return Err(Error::Validation(format!("{}: checksum mismatch", path.display())));
            }
            let table = CayleyTable::parse(&text)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            if table.order() != entry.order {
                return Err(Error::Validation(format!(
                    "{}: order {} differs from manifest order {}",
                    path.display(),
                    table.order(),
                    entry.order
                )));
            }
            let oracle = GroupOracle::finite(Arc::new(table), entry.gens.clone(), entry.name.clone())?;
            groups.push(CorpusGroup {
                name: entry.name.clone(),
                oracle,
            });
        }
        Ok(Corpus {
            dir: dir.to_path_buf(),
            groups,
            checksum: sha256_hex(&bytes),
        })
    }

    pub fn load_default() -> Result<Corpus> {
        Corpus::load(&default_dir())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_expected_orders() {
        for name in builtin_names() {
            let (t, g) = builtin(&name).unwrap();
            assert!(t.order() <= 24, "{name}");
            assert!(t.generates(g.iter().copied()), "{name}");
        }
        assert_eq!(builtin("SL23").unwrap().0.order(), 24);
        assert_eq!(builtin("C2xD4").unwrap().0.order(), 16);
        assert!(builtin("X9").is_none());
    }

    #[test]
    fn generate_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let m = Corpus::generate(dir.path()).unwrap();
        let c = Corpus::load(dir.path()).unwrap();
        assert_eq!(c.groups.len(), m.groups.len());
        let path = dir.path().join("groups/S4.cayley");
        let text = std::fs::read_to_string(&path).unwrap().replacen("1 ", "2 ", 1);
        std::fs::write(&path, text).unwrap();
        assert!(matches!(Corpus::load(dir.path()), Err(Error::Validation(_))));
        assert!(matches!(
            Corpus::load(&dir.path().join("nowhere")),
            Err(Error::CorpusMissing(_))
        ));
    }
}
