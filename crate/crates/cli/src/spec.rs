//! Group and automorphism documents.
//!
//! A group is either `{"kind": "permutation", "degree": n, "generators":
//! [[...], ...]}` with one-based image lists, or `{"kind": "fg_abelian",
//! "free_rank": r, "torsion": [d1, d2, ...]}`. The reference `corpus:NAME`
//! selects a built-in group instead.
//!
//! An automorphism of a permutation group is `{"generator_images": [...]}`,
//! one permutation per generator. An automorphism of an abelian group is
//! `{"F": ..., "B": ..., "C": ...}` with `B` optional. Named corpus maps are
//! selected with `corpus:NAME`.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use twisted_burnside::abelian::{AbelianEndo, FgAbelianGroup};
use twisted_burnside::corpus::{self, CorpusEntry};
use twisted_burnside::group::{
    automorphism_from_generator_images, Automorphism, CayleyData, FiniteGroup, Permutation,
};
use twisted_burnside::linalg::IntMatrix;

use crate::cache::Cache;
use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GroupDoc {
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
    FgAbelian {
        free_rank: usize,
        #[serde(default)]
        torsion: Vec<Value>,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismDoc {
    generator_images: Option<Vec<Vec<u32>>>,
    #[serde(rename = "F")]
    free: Option<Vec<Vec<Value>>>,
    #[serde(rename = "B")]
    mixed: Option<Vec<Vec<Value>>>,
    #[serde(rename = "C")]
    torsion: Option<Vec<Vec<Value>>>,
}

/// A parsed group, with the corpus entry it came from if any.
pub enum GroupInput {
    Finite {
        group: FiniteGroup,
        entry: Option<CorpusEntry>,
    },
    Abelian {
        group: FgAbelianGroup,
        entry: Option<CorpusEntry>,
    },
}

pub enum MapInput {
    Finite(Automorphism),
    Abelian(AbelianEndo),
}

/// Reads `arg` as inline JSON if it starts with `{`, otherwise as a path.
fn read_document(arg: &str, what: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::input(format!("{what}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{what}: malformed JSON: {e}")))
}

fn integer(v: &Value, field: &str) -> Result<BigInt, CliError> {
    let parsed = match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse::<BigInt>().ok(),
        _ => None,
    };
    parsed.ok_or_else(|| CliError::input(format!("{field}: expected an integer, found {v}")))
}

fn matrix(rows: &[Vec<Value>], cols: usize, field: &str) -> Result<IntMatrix, CliError> {
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::input(format!(
                "{field}[{i}]: expected {cols} entries, found {}",
                row.len()
            )));
        }
        let row = row
            .iter()
            .enumerate()
            .map(|(j, v)| integer(v, &format!("{field}[{i}][{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(row);
    }
    IntMatrix::from_rows(cols, &parsed).map_err(|e| CliError::from_core(e, field))
}

fn corpus_entry(name: &str) -> Result<CorpusEntry, CliError> {
    corpus::find(name)
        .map_err(|e| CliError::from_core(e, "corpus"))?
        .ok_or_else(|| CliError::input(format!("group: no corpus entry named {name}")))
}

/// Cache key for a permutation group: the hash of its canonical document.
fn cayley_key(degree: usize, generators: &[Vec<u32>]) -> String {
    let canonical = serde_json::to_vec(&GroupDoc::Permutation {
        degree,
        generators: generators.to_vec(),
    })
    .expect("document serializes");
    format!("{:x}", Sha256::digest(canonical))
}

/// Whether cached data reproduces the closure of `gens`: labels must be
/// consistent with the table and the generators must match.
fn cayley_matches(group: &FiniteGroup, gens: &[Permutation]) -> bool {
    let Some(labels) = group.labels() else {
        return false;
    };
    let generator_labels: Vec<&Permutation> =
        group.generators().iter().map(|&s| &labels[s]).collect();
    let mut expected: Vec<&Permutation> = gens.iter().collect();
    expected.dedup();
    if generator_labels != expected {
        return false;
    }
    group.elements().all(|a| {
        group
            .elements()
            .all(|b| labels[a].then(&labels[b]) == labels[group.mul(a, b)])
    })
}

fn permutation_group(
    degree: usize,
    generators: &[Vec<u32>],
    cap: usize,
    cache: &Cache,
) -> Result<FiniteGroup, CliError> {
    let gens = generators
        .iter()
        .enumerate()
        .map(|(i, images)| {
            Permutation::from_one_based(degree, images)
                .map_err(|e| CliError::from_core(e, &format!("generators[{i}]")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let key = cayley_key(degree, generators);
    if let Some(data) = cache.load::<CayleyData>("cayley", &key) {
        match FiniteGroup::from_cayley_data(data) {
            Ok(g) if cayley_matches(&g, &gens) && g.order() <= cap => return Ok(g),
            Ok(_) => cache.warn_corrupt("cayley", &key, "table does not match the generators"),
            Err(e) => cache.warn_corrupt("cayley", &key, &e.to_string()),
        }
    }
    let group = FiniteGroup::from_permutation_generators_with_cap(degree, &gens, cap)
        .map_err(|e| CliError::from_core(e, "generators"))?;
    cache.store("cayley", &key, &group.to_cayley_data());
    Ok(group)
}

pub fn parse_group(arg: &str, cap: usize, cache: &Cache) -> Result<GroupInput, CliError> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        let entry = corpus_entry(name)?;
        return Ok(match &entry {
            CorpusEntry::Finite(e) => {
                if e.group.order() > cap {
                    return Err(CliError::cap(format!(
                        "group: order {} exceeds the cap {cap}",
                        e.group.order()
                    )));
                }
                GroupInput::Finite {
                    group: e.group.clone(),
                    entry: Some(entry.clone()),
                }
            }
            CorpusEntry::Abelian(e) => GroupInput::Abelian {
                group: e.group.clone(),
                entry: Some(entry.clone()),
            },
        });
    }
    let value = read_document(arg, "group")?;
    match value.get("kind").and_then(Value::as_str) {
        Some("permutation" | "fg_abelian") => {}
        Some(other) => {
            return Err(CliError::input(format!(
                "kind: unknown group kind {other:?}; expected \"permutation\" or \"fg_abelian\""
            )))
        }
        None => return Err(CliError::input("kind: missing or not a string".to_string())),
    }
    let doc: GroupDoc =
        serde_json::from_value(value).map_err(|e| CliError::input(format!("group: {e}")))?;
    match doc {
        GroupDoc::Permutation { degree, generators } => Ok(GroupInput::Finite {
            group: permutation_group(degree, &generators, cap, cache)?,
            entry: None,
        }),
        GroupDoc::FgAbelian { free_rank, torsion } => {
            let torsion = torsion
                .iter()
                .enumerate()
                .map(|(i, v)| integer(v, &format!("torsion[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let group = FgAbelianGroup::new(free_rank, &torsion)
                .map_err(|e| CliError::from_core(e, "torsion"))?;
            Ok(GroupInput::Abelian { group, entry: None })
        }
    }
}

fn named_map(entry: &Option<CorpusEntry>, name: &str) -> Result<MapInput, CliError> {
    let missing = || CliError::input(format!("automorphism: no named map {name} for this group"));
    match entry {
        Some(CorpusEntry::Finite(e)) => e
            .automorphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| MapInput::Finite(a.clone()))
            .ok_or_else(missing),
        Some(CorpusEntry::Abelian(e)) => e
            .automorphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| MapInput::Abelian(a.clone()))
            .ok_or_else(missing),
        None => Err(CliError::input(
            "automorphism: named maps need a corpus group".to_string(),
        )),
    }
}

/// Parses the automorphism argument; `None` means the identity.
pub fn parse_map(group: &GroupInput, arg: Option<&str>) -> Result<MapInput, CliError> {
    let Some(arg) = arg else {
        return Ok(match group {
            GroupInput::Finite { group, .. } => MapInput::Finite(Automorphism::identity(group)),
            GroupInput::Abelian { group, .. } => MapInput::Abelian(AbelianEndo::identity(group)),
        });
    };
    if let Some(name) = arg.strip_prefix("corpus:") {
        let entry = match group {
            GroupInput::Finite { entry, .. } | GroupInput::Abelian { entry, .. } => entry,
        };
        return named_map(entry, name);
    }
    let doc: AutomorphismDoc = serde_json::from_value(read_document(arg, "automorphism")?)
        .map_err(|e| CliError::input(format!("automorphism: {e}")))?;
    match group {
        GroupInput::Finite { group, .. } => {
            if doc.free.is_some() || doc.mixed.is_some() || doc.torsion.is_some() {
                return Err(CliError::input(
                    "automorphism: F, B and C apply to fg_abelian groups only".to_string(),
                ));
            }
            let images = doc.generator_images.ok_or_else(|| {
                CliError::input("automorphism: generator_images is required".to_string())
            })?;
            Ok(MapInput::Finite(finite_map(group, &images)?))
        }
        GroupInput::Abelian { group, .. } => {
            if doc.generator_images.is_some() {
                return Err(CliError::input(
                    "automorphism: generator_images applies to permutation groups only"
                        .to_string(),
                ));
            }
            Ok(MapInput::Abelian(abelian_map(group, &doc)?))
        }
    }
}

fn finite_map(group: &FiniteGroup, images: &[Vec<u32>]) -> Result<Automorphism, CliError> {
    let labels = group.labels().ok_or_else(|| {
        CliError::input("automorphism: group has no permutation labels".to_string())
    })?;
    let degree = labels[0].degree();
    let indices = images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let field = format!("generator_images[{i}]");
            let p = Permutation::from_one_based(degree, img)
                .map_err(|e| CliError::from_core(e, &field))?;
            group
                .index_of_label(&p)
                .ok_or_else(|| CliError::input(format!("{field}: {p} is not in the group")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    automorphism_from_generator_images(group, &indices)
        .map_err(|e| CliError::from_core(e, "generator_images"))
}

fn abelian_map(group: &FgAbelianGroup, doc: &AutomorphismDoc) -> Result<AbelianEndo, CliError> {
    let (r, s) = (group.free_rank(), group.torsion().len());
    let block = |m: &Option<Vec<Vec<Value>>>, rows: usize, cols: usize, field: &str| {
        match m {
            Some(m) if m.len() == rows => matrix(m, cols, field),
            Some(m) => Err(CliError::input(format!(
                "{field}: expected {rows} rows, found {}",
                m.len()
            ))),
            None if rows == 0 || cols == 0 || field == "B" => Ok(IntMatrix::zeros(rows, cols)),
            None => Err(CliError::input(format!("{field}: required for this group"))),
        }
    };
    let f = block(&doc.free, r, r, "F")?;
    let b = block(&doc.mixed, s, r, "B")?;
    let c = block(&doc.torsion, s, s, "C")?;
    let psi = AbelianEndo::new(group, f, b, c).map_err(|e| CliError::from_core(e, "automorphism"))?;
    let bijective = twisted_burnside::abelian::is_automorphism(group, &psi)
        .map_err(|e| CliError::from_core(e, "automorphism"))?;
    if !bijective {
        return Err(CliError::input(
            "automorphism: the map is not invertible".to_string(),
        ));
    }
    Ok(psi)
}

/// Generators of a subgroup given as one-based permutations.
pub fn parse_elements(group: &FiniteGroup, arg: &str) -> Result<Vec<usize>, CliError> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| CliError::input(format!("subgroup: cannot read {arg}: {e}")))?
    };
    let images: Vec<Vec<u32>> = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("subgroup: malformed JSON: {e}")))?;
    let labels = group.labels().ok_or_else(|| {
        CliError::input("subgroup: group has no permutation labels".to_string())
    })?;
    let degree = labels[0].degree();
    images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let field = format!("subgroup[{i}]");
            let p = Permutation::from_one_based(degree, img)
                .map_err(|e| CliError::from_core(e, &field))?;
            group
                .index_of_label(&p)
                .ok_or_else(|| CliError::input(format!("{field}: {p} is not in the group")))
        })
        .collect()
}
