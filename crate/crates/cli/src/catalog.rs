use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use lhslab::decomp::Split;
use lhslab::exactlin::FieldSpec;
use lhslab::gmod::{FiniteGroup, GLattice, IntMatrix, WedgeOrder};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

const STARTER: &str = include_str!("../catalog/starter.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupDescriptor {
    Cyclic(usize),
    Table(Vec<Vec<usize>>),
}

/// One line of a catalog file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub group: GroupDescriptor,
    pub rank: usize,
    /// Group-element index to action matrix; the listed elements must generate the group.
    pub generators: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<[String; 2]>,
}

impl CatalogEntry {
    /// SHA-256 of the entry as JSON with sorted keys and no whitespace.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_value(self)
            .expect("entries serialize")
            .to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

pub struct Catalog {
    entries: Vec<CatalogEntry>,
    lattices: BTreeMap<String, GLattice>,
}

impl Catalog {
    pub fn starter() -> Result<Self, CliError> {
        Self::parse(STARTER)
    }

    /// A `.jsonl` file, or every `.jsonl` file of a directory in name order.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))
        };
        if path.is_dir() {
            let mut files: Vec<_> = std::fs::read_dir(path)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
                .collect();
            files.sort();
            let mut text = String::new();
            for f in files {
                text.push_str(&read(&f)?);
                text.push('\n');
            }
            Self::parse(&text)
        } else {
            Self::parse(&read(path)?)
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: CatalogEntry = serde_json::from_str(line)
                .map_err(|err| CliError::Parse(format!("catalog line {}: {err}", n + 1)))?;
            entries.push(e);
        }
        let mut groups: BTreeMap<String, Arc<FiniteGroup>> = BTreeMap::new();
        let mut lattices = BTreeMap::new();
        for e in &entries {
            if lattices.contains_key(&e.name) {
                return Err(CliError::Invariant(format!("duplicate entry `{}`", e.name)));
            }
            let key = serde_json::to_string(&e.group).expect("descriptors serialize");
            let group = match groups.get(&key) {
                Some(g) => g.clone(),
                None => {
                    let g = Arc::new(
                        build_group(&e.group)
                            .map_err(|m| CliError::Invariant(format!("{}: {m}", e.name)))?,
                    );
                    groups.insert(key, g.clone());
                    g
                }
            };
            let mut gens = Vec::new();
            for (k, m) in &e.generators {
                let g: usize = k.parse().map_err(|_| {
                    CliError::Parse(format!(
                        "{}: generator key `{k}` is not an element index",
                        e.name
                    ))
                })?;
                if m.iter().any(|row| row.len() != e.rank) || m.len() != e.rank {
                    return Err(CliError::Invariant(format!(
                        "{}: matrix for {g} is not {r}x{r}",
                        e.name,
                        r = e.rank
                    )));
                }
                gens.push((g, IntMatrix::from_rows(m)));
            }
            let l = GLattice::from_generators(group, e.rank, &gens)
                .map_err(|err| CliError::Invariant(format!("{}: {err}", e.name)))?;
            lattices.insert(e.name.clone(), l);
        }
        let cat = Catalog { entries, lattices };
        for e in &cat.entries {
            if let Some([a, b]) = &e.decomposition {
                cat.declared_split(
                    &e.name,
                    a,
                    b,
                    FieldSpec::rationals(),
                    WedgeOrder::PrimeFirst,
                )?;
            }
        }
        Ok(cat)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, CliError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CliError::Parse(format!("no catalog entry named `{name}`")))
    }

    pub fn lattice(&self, name: &str) -> Result<&GLattice, CliError> {
        self.lattices
            .get(name)
            .ok_or_else(|| CliError::Parse(format!("no catalog entry named `{name}`")))
    }

    fn declared_split(
        &self,
        sum: &str,
        a: &str,
        b: &str,
        field: FieldSpec,
        order: WedgeOrder,
    ) -> Result<Split, CliError> {
        let (l, la, lb) = (self.lattice(sum)?, self.lattice(a)?, self.lattice(b)?);
        if la.group() != l.group() || lb.group() != l.group() {
            return Err(CliError::Invariant(format!(
                "{sum}: summands live over another group"
            )));
        }
        Split::declared(l.clone(), la.clone(), lb.clone(), field, order)
            .map_err(|e| CliError::Invariant(format!("{sum}: {e}")))
    }

    /// The entry declared as `a ⊕ b`, if any.
    pub fn declared_sum(&self, a: &str, b: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| {
            e.decomposition
                .as_ref()
                .is_some_and(|[x, y]| x == a && y == b)
        })
    }

    /// `L = a ⊕ b`, using a declared entry when there is one.
    pub fn split(
        &self,
        a: &str,
        b: &str,
        field: FieldSpec,
        order: WedgeOrder,
    ) -> Result<(Option<String>, Split), CliError> {
        if let Some(e) = self.declared_sum(a, b) {
            return Ok((
                Some(e.name.clone()),
                self.declared_split(&e.name, a, b, field, order)?,
            ));
        }
        let (la, lb) = (self.lattice(a)?, self.lattice(b)?);
        let split = Split::new(la.clone(), lb.clone(), field, order)
            .map_err(|e| CliError::Invariant(e.to_string()))?;
        Ok((None, split))
    }

    /// Entries with a declared decomposition, as `(sum, prime, second)`.
    pub fn declared_pairs(&self) -> Vec<(String, String, String)> {
        self.entries
            .iter()
            .filter_map(|e| {
                e.decomposition
                    .as_ref()
                    .map(|[a, b]| (e.name.clone(), a.clone(), b.clone()))
            })
            .collect()
    }
}

fn build_group(d: &GroupDescriptor) -> Result<FiniteGroup, String> {
    match d {
        GroupDescriptor::Cyclic(0) => Err("cyclic group of order 0".into()),
        GroupDescriptor::Cyclic(n) => Ok(FiniteGroup::cyclic(*n)),
        GroupDescriptor::Table(t) => FiniteGroup::from_table(t.clone()).map_err(|e| e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starter_catalog_is_valid() {
        let c = Catalog::starter().unwrap();
        assert!(c.entries().len() >= 30);
        assert!(c.declared_pairs().len() >= 5);
        for e in c.entries() {
            assert_eq!(c.lattice(&e.name).unwrap().rank(), e.rank);
        }
    }

    #[test]
    fn bad_decomposition_is_an_invariant_violation() {
        let text = r#"{"name":"s","group":{"cyclic":2},"rank":1,"generators":{"1":[[-1]]}}
{"name":"r","group":{"cyclic":2},"rank":2,"generators":{"1":[[0,1],[1,0]]},"decomposition":["s","s"]}"#;
        assert!(matches!(Catalog::parse(text), Err(CliError::Invariant(_))));
    }

    #[test]
    fn malformed_line_is_a_parse_error() {
        assert!(matches!(
            Catalog::parse("{\"name\": 3}"),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let text = r#"{"name":"x","group":{"cyclic":2},"rank":1,"generators":{"1":[[2]]}}"#;
        assert!(matches!(Catalog::parse(text), Err(CliError::Invariant(_))));
    }

    #[test]
    fn hashes_ignore_formatting() {
        let a: CatalogEntry = serde_json::from_str(
            r#"{"name":"s","group":{"cyclic":2},"rank":1,"generators":{"1":[[-1]]}}"#,
        )
        .unwrap();
        let b: CatalogEntry = serde_json::from_str(
            r#"{ "rank": 1, "generators": {"1": [[-1]]}, "group": {"cyclic": 2}, "name": "s" }"#,
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
    }
}
