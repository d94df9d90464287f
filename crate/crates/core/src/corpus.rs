//! The built-in collection of small groups and automorphisms that the
//! checks iterate over.
//!
//! Permutation groups are named `C_n`, `S3`, `D4`, ...; finitely generated
//! abelian groups in invariant-factor form are named `Z`, `Z^2`, `Z/7`, ....

use serde::Serialize;

use crate::abelian::{self, AbelianEndo, FgAbelianGroup};
use crate::error::Result;
use crate::group::{
    automorphism_from_generator_images, enumerate_automorphisms, inner_automorphism,
    Automorphism, FiniteGroup, Permutation,
};
use crate::linalg::{ExtendedCount, IntMatrix};

#[derive(Clone, Debug)]
pub struct FiniteEntry {
    pub name: String,
    pub group: FiniteGroup,
    pub automorphisms: Vec<(String, Automorphism)>,
    pub notes: String,
}

#[derive(Clone, Debug)]
pub struct AbelianEntry {
    pub name: String,
    pub group: FgAbelianGroup,
    pub automorphisms: Vec<(String, AbelianEndo)>,
    pub notes: String,
}

#[derive(Clone, Debug)]
pub enum CorpusEntry {
    Finite(FiniteEntry),
    Abelian(AbelianEntry),
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        match self {
            CorpusEntry::Finite(e) => &e.name,
            CorpusEntry::Abelian(e) => &e.name,
        }
    }

    pub fn order(&self) -> ExtendedCount {
        match self {
            CorpusEntry::Finite(e) => ExtendedCount::finite(e.group.order() as u64),
            CorpusEntry::Abelian(e) => e.group.order(),
        }
    }

    pub fn named_automorphisms(&self) -> Vec<&str> {
        match self {
            CorpusEntry::Finite(e) => e.automorphisms.iter().map(|(n, _)| n.as_str()).collect(),
            CorpusEntry::Abelian(e) => e.automorphisms.iter().map(|(n, _)| n.as_str()).collect(),
        }
    }

    /// Size of the automorphism group, or `Infinite` for groups with free
    /// rank at least one.
    pub fn automorphism_count(&self) -> Result<ExtendedCount> {
        Ok(match self {
            CorpusEntry::Finite(e) => {
                ExtendedCount::finite(enumerate_automorphisms(&e.group)?.len() as u64)
            }
            CorpusEntry::Abelian(e) if e.group.is_finite() => {
                ExtendedCount::finite(abelian::enumerate_automorphisms(&e.group)?.len() as u64)
            }
            CorpusEntry::Abelian(_) => ExtendedCount::Infinite,
        })
    }

    pub fn summary(&self) -> Result<EntrySummary> {
        Ok(EntrySummary {
            name: self.name().to_string(),
            kind: match self {
                CorpusEntry::Finite(_) => "permutation",
                CorpusEntry::Abelian(_) => "fg_abelian",
            },
            order: self.order(),
            automorphism_count: self.automorphism_count()?,
            named_automorphisms: self.named_automorphisms().iter().map(|s| s.to_string()).collect(),
            notes: match self {
                CorpusEntry::Finite(e) => e.notes.clone(),
                CorpusEntry::Abelian(e) => e.notes.clone(),
            },
        })
    }
}

/// A row of `corpus list`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntrySummary {
    pub name: String,
    pub kind: &'static str,
    pub order: ExtendedCount,
    pub automorphism_count: ExtendedCount,
    pub named_automorphisms: Vec<String>,
    pub notes: String,
}

fn perm_group(degree: usize, gens: &[&[&[u32]]]) -> Result<FiniteGroup> {
    let gens = gens
        .iter()
        .map(|cycles| Permutation::from_cycles(degree, cycles))
        .collect::<Result<Vec<_>>>()?;
    FiniteGroup::from_permutation_generators(degree, &gens)
}

fn finite_entry(name: &str, group: FiniteGroup, notes: &str) -> Result<FiniteEntry> {
    let mut automorphisms = vec![("identity".to_string(), Automorphism::identity(&group))];
    if group.is_abelian() {
        let images: Vec<usize> = group.generators().iter().map(|&s| group.inv(s)).collect();
        automorphisms.push((
            "inversion".to_string(),
            automorphism_from_generator_images(&group, &images)?,
        ));
    } else {
        let s = group.generators()[0];
        automorphisms.push((
            "conjugation by first generator".to_string(),
            inner_automorphism(&group, s),
        ));
    }
    Ok(FiniteEntry {
        name: name.to_string(),
        group,
        automorphisms,
        notes: notes.to_string(),
    })
}

fn cyclic(n: u32) -> Result<FiniteGroup> {
    let cycle: Vec<u32> = (1..=n).collect();
    perm_group(n as usize, &[&[&cycle]])
}

fn finite_entries() -> Result<Vec<FiniteEntry>> {
    let mut out = vec![finite_entry(
        "trivial",
        FiniteGroup::trivial(),
        "the group with one element",
    )?];
    for n in 2..=12 {
        let g = cyclic(n)?;
        let mut entry = finite_entry(&format!("C{n}"), g, "cyclic, generated by an n-cycle")?;
        if n == 5 || n == 7 {
            let g = &entry.group;
            let s = g.generators()[0];
            let square = automorphism_from_generator_images(g, &[g.mul(s, s)])?;
            entry.automorphisms.push(("squaring".to_string(), square));
        }
        out.push(entry);
    }

    let v4 = perm_group(4, &[&[&[1, 2]], &[&[3, 4]]])?;
    let mut entry = finite_entry("C2xC2", v4, "Klein four-group")?;
    let gens = entry.group.generators().to_vec();
    let swap = automorphism_from_generator_images(&entry.group, &[gens[1], gens[0]])?;
    entry.automorphisms.push(("swap factors".to_string(), swap));
    out.push(entry);

    let c2c4 = perm_group(6, &[&[&[1, 2]], &[&[3, 4, 5, 6]]])?;
    out.push(finite_entry("C2xC4", c2c4, "abelian of order 8, not cyclic")?);
    out.push(finite_entry(
        "S3",
        perm_group(3, &[&[&[1, 2]], &[&[1, 2, 3]]])?,
        "smallest non-abelian group",
    )?);
    out.push(finite_entry(
        "D4",
        perm_group(4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]])?,
        "dihedral of order 8",
    )?);
    out.push(finite_entry(
        "Q8",
        perm_group(
            8,
            &[
                &[&[1, 2, 4, 7], &[3, 6, 8, 5]],
                &[&[1, 3, 4, 8], &[2, 5, 7, 6]],
            ],
        )?,
        "quaternion group, regular representation",
    )?);
    out.push(finite_entry(
        "A4",
        perm_group(4, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]])?,
        "alternating of order 12",
    )?);
    out.push(finite_entry(
        "D6",
        perm_group(6, &[&[&[1, 2, 3, 4, 5, 6]], &[&[1, 6], &[2, 5], &[3, 4]]])?,
        "dihedral of order 12",
    )?);
    out.push(finite_entry(
        "S4",
        perm_group(4, &[&[&[1, 2]], &[&[1, 2, 3, 4]]])?,
        "symmetric of order 24",
    )?);
    let frobenius = FiniteGroup::from_permutation_generators(
        7,
        &[
            Permutation::from_cycles(7, &[&[1, 2, 3, 4, 5, 6, 7]])?,
            Permutation::from_one_based(7, &[1, 3, 5, 7, 2, 4, 6])?,
        ],
    )?;
    out.push(finite_entry(
        "C7:C3",
        frobenius,
        "Frobenius group of order 21, x -> 2x acting on C7",
    )?);
    Ok(out)
}

fn endo(group: &FgAbelianGroup, f: &[&[i64]], b: &[&[i64]], c: &[&[i64]]) -> Result<AbelianEndo> {
    let r = group.free_rank();
    let s = group.torsion().len();
    // Empty blocks stand for zero blocks of the right shape.
    let block = |rows: usize, cols: usize, m: &[&[i64]]| {
        if m.is_empty() {
            Ok(IntMatrix::zeros(rows, cols))
        } else {
            IntMatrix::from_rows(cols, &m.iter().map(|row| row.to_vec()).collect::<Vec<_>>())
        }
    };
    AbelianEndo::new(group, block(r, r, f)?, block(s, r, b)?, block(s, s, c)?)
}

fn abelian_entry(
    name: &str,
    group: FgAbelianGroup,
    extra: Vec<(&str, AbelianEndo)>,
    notes: &str,
) -> AbelianEntry {
    let mut automorphisms = vec![
        ("identity".to_string(), AbelianEndo::identity(&group)),
        ("inversion".to_string(), AbelianEndo::negation(&group)),
    ];
    automorphisms.extend(extra.into_iter().map(|(n, e)| (n.to_string(), e)));
    AbelianEntry {
        name: name.to_string(),
        group,
        automorphisms,
        notes: notes.to_string(),
    }
}

fn abelian_entries() -> Result<Vec<AbelianEntry>> {
    let mut out = Vec::new();
    out.push(abelian_entry(
        "Z",
        FgAbelianGroup::new::<i64>(1, &[])?,
        vec![],
        "infinite cyclic",
    ));

    let z2 = FgAbelianGroup::new::<i64>(2, &[])?;
    let free2 = |m: &[&[i64]]| endo(&z2, m, &[], &[]);
    let extra = vec![
        ("rotation", free2(&[&[0, -1], &[1, 0]])?),
        ("[[2,1],[1,1]]", free2(&[&[2, 1], &[1, 1]])?),
        ("companion of x^2-x-1", free2(&[&[0, 1], &[1, 1]])?),
        ("companion of x^2-3x+1", free2(&[&[0, -1], &[1, 3]])?),
        ("swap", free2(&[&[0, 1], &[1, 0]])?),
    ];
    out.push(abelian_entry("Z^2", z2.clone(), extra, "free abelian of rank 2"));

    let z3 = FgAbelianGroup::new::<i64>(3, &[])?;
    let extra = vec![(
        "companion of x^3-x-1",
        endo(&z3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]], &[], &[])?,
    )];
    out.push(abelian_entry("Z^3", z3, extra, "free abelian of rank 3"));

    let z_z2 = FgAbelianGroup::new(1, &[2])?;
    let extra = vec![("shear (a,b) -> (-a, a+b)", endo(&z_z2, &[&[-1]], &[&[1]], &[&[1]])?)];
    out.push(abelian_entry("Z+Z/2", z_z2, extra, "free rank 1 with torsion Z/2"));

    let z2_z4 = FgAbelianGroup::new(2, &[4])?;
    let extra = vec![(
        "rotation + inversion",
        endo(&z2_z4, &[&[0, -1], &[1, 0]], &[&[0, 0]], &[&[3]])?,
    )];
    out.push(abelian_entry("Z^2+Z/4", z2_z4, extra, "free rank 2 with torsion Z/4"));

    for n in 2..=12u64 {
        let g = FgAbelianGroup::from_cyclic_factors(0, &[n]);
        let extra = if n == 7 {
            vec![("x -> 2x", endo(&g, &[], &[], &[&[2]])?)]
        } else {
            vec![]
        };
        out.push(abelian_entry(&format!("Z/{n}"), g, extra, "finite cyclic"));
    }
    out.push(abelian_entry(
        "Z/2+Z/2",
        FgAbelianGroup::from_cyclic_factors(0, &[2, 2]),
        vec![],
        "Klein four-group",
    ));
    out.push(abelian_entry(
        "Z/2+Z/4",
        FgAbelianGroup::from_cyclic_factors(0, &[2, 4]),
        vec![],
        "abelian of order 8, not cyclic",
    ));
    Ok(out)
}

/// Every corpus entry: permutation groups first, then abelian groups.
pub fn standard_corpus() -> Result<Vec<CorpusEntry>> {
    let mut out: Vec<CorpusEntry> = finite_entries()?.into_iter().map(CorpusEntry::Finite).collect();
    out.extend(abelian_entries()?.into_iter().map(CorpusEntry::Abelian));
    Ok(out)
}

pub fn finite_corpus() -> Result<Vec<FiniteEntry>> {
    finite_entries()
}

pub fn abelian_corpus() -> Result<Vec<AbelianEntry>> {
    abelian_entries()
}

pub fn find(name: &str) -> Result<Option<CorpusEntry>> {
    Ok(standard_corpus()?.into_iter().find(|e| e.name() == name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{is_automorphism, reidemeister_number};
    use crate::group::conjugacy_classes;

    fn finite(name: &str) -> FiniteEntry {
        finite_corpus().unwrap().into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn orders() {
        let expected = [
            ("trivial", 1),
            ("C2", 2),
            ("C12", 12),
            ("C2xC2", 4),
            ("C2xC4", 8),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("A4", 12),
            ("D6", 12),
            ("S4", 24),
            ("C7:C3", 21),
        ];
        for (name, order) in expected {
            assert_eq!(finite(name).group.order(), order, "{name}");
        }
    }

    #[test]
    fn isomorphism_fingerprints() {
        // Class counts and exponents separate the groups of equal order.
        let fingerprint = |name: &str| {
            let g = finite(name).group;
            (g.is_abelian(), conjugacy_classes(&g).class_count(), g.exponent())
        };
        assert_eq!(fingerprint("C2xC4"), (true, 8, 4));
        assert_eq!(fingerprint("D4"), (false, 5, 4));
        assert_eq!(fingerprint("Q8"), (false, 5, 4));
        assert_eq!(fingerprint("A4"), (false, 4, 6));
        assert_eq!(fingerprint("D6"), (false, 6, 6));
        assert_eq!(fingerprint("S4"), (false, 5, 12));
        assert_eq!(fingerprint("C7:C3"), (false, 5, 21));
        let involutions = |name: &str| {
            let g = finite(name).group;
            g.elements().filter(|&x| g.element_order(x) == 2).count()
        };
        assert_eq!(involutions("Q8"), 1);
        assert_eq!(involutions("D4"), 5);
    }

    #[test]
    fn names_are_unique() {
        let corpus = standard_corpus().unwrap();
        let mut names: Vec<&str> = corpus.iter().map(|e| e.name()).collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn named_abelian_maps_are_automorphisms() {
        for entry in abelian_corpus().unwrap() {
            for (name, psi) in &entry.automorphisms {
                assert!(is_automorphism(&entry.group, psi).unwrap(), "{} {name}", entry.name);
            }
        }
    }

    #[test]
    fn rotation_on_z2_has_two_classes() {
        let entry = abelian_corpus().unwrap().into_iter().find(|e| e.name == "Z^2").unwrap();
        let (_, rot) = entry.automorphisms.iter().find(|(n, _)| n == "rotation").unwrap();
        assert_eq!(reidemeister_number(&entry.group, rot).unwrap(), ExtendedCount::finite(2u64));
    }

    #[test]
    fn automorphism_counts() {
        let count = |name: &str| find(name).unwrap().unwrap().automorphism_count().unwrap();
        assert_eq!(count("S3"), ExtendedCount::finite(6u64));
        assert_eq!(count("D4"), ExtendedCount::finite(8u64));
        assert_eq!(count("Q8"), ExtendedCount::finite(24u64));
        assert_eq!(count("C7:C3"), ExtendedCount::finite(42u64));
        assert_eq!(count("Z/2+Z/2"), ExtendedCount::finite(6u64));
        assert_eq!(count("Z^2"), ExtendedCount::Infinite);
    }
}
