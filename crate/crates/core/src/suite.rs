//! Runs every structural check over the corpus and collects the results in
//! one report. The report holds no timings or addresses, so repeated runs
//! serialize to identical bytes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{
    self, fixed_subgroup_size, reidemeister_number, rp_witness, AbelianEndo, FgAbelianGroup,
};
use crate::characters::{dual_action, CharacterTableModP};
use crate::corpus::{abelian_corpus, finite_corpus, AbelianEntry, FiniteEntry};
use crate::error::Result;
use crate::extensions::{check_extension, extensions_of};
use crate::group::{
    enumerate_automorphisms, inner_automorphism, shift_class_identity_check, twisted_classes,
    Automorphism, UnionFind,
};
use crate::linalg::ExtendedCount;
use crate::torus::{MappingTorus, TorusElement};
use crate::zeta::{reidemeister_sequence, verify_congruences, Source};

pub const SCHEMA_VERSION: u32 = 1;

const CONFINEMENT_SEED: u64 = 0x7025;

/// Limits for a suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Largest finite group order for the character, Burnside and
    /// extension sections.
    pub max_order: usize,
    /// Largest group order for the shift section.
    pub shift_max_order: usize,
    /// Length of the Reidemeister sequences.
    pub max_n: usize,
    /// Random conjugations in the torus section.
    pub confinement_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_order: 60,
            shift_max_order: 24,
            max_n: 12,
            confinement_samples: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub id: u32,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub details: Vec<Value>,
}

impl SectionReport {
    fn new(id: u32, name: &'static str) -> Self {
        SectionReport {
            id,
            name,
            cases: 0,
            failures: Vec::new(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: SuiteConfig,
    pub sections: Vec<SectionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(SectionReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_full_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let finite = finite_corpus()?;
    let abelian = abelian_corpus()?;
    let sections = vec![
        burnside_section(&finite, config.max_order)?,
        cokernel_section(&abelian)?,
        fixed_point_section(&abelian)?,
        inner_twist_section(&finite, config.max_order)?,
        shift_section(&finite, config.shift_max_order)?,
        torus_section(&finite, config.confinement_samples)?,
        extension_section(&finite, config.max_order)?,
        congruence_section(&finite, &abelian, config.max_n)?,
        witness_section(&abelian)?,
        character_section(&finite, config.max_order)?,
    ];
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        sections,
    })
}

fn small(entries: &[FiniteEntry], max_order: usize) -> impl Iterator<Item = &FiniteEntry> {
    entries.iter().filter(move |e| e.group.order() <= max_order)
}

/// Twisted class counts against fixed irreducible characters, for every
/// automorphism.
pub fn burnside_section(entries: &[FiniteEntry], max_order: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(1, "twisted classes equal fixed characters");
    for entry in small(entries, max_order) {
        let g = &entry.group;
        let table = CharacterTableModP::compute(g)?;
        let mut pairs = Vec::new();
        for (i, phi) in enumerate_automorphisms(g)?.iter().enumerate() {
            let r = twisted_classes(g, phi).class_count();
            let s = dual_action(g, &table, phi)?.fixed_count;
            report.check(r == s, || format!("{} automorphism {i}: R = {r}, S_f = {s}", entry.name));
            pairs.push([r, s]);
        }
        report.details.push(json!({
            "group": entry.name,
            "prime": table.prime(),
            "pairs": pairs,
        }));
    }
    Ok(report)
}

/// Orbit count of `g -> h + g - psi(h)` by union-find over all elements.
pub fn orbit_count_by_action(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<usize> {
    let elements = group.torsion_elements()?;
    let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let mut uf = UnionFind::new(elements.len());
    let mut classes = elements.len();
    for h in &elements {
        let shift = group.sub(h, &psi.apply(group, h));
        for (i, g) in elements.iter().enumerate() {
            if uf.union(i, index[&group.add(g, &shift)]) {
                classes -= 1;
            }
        }
    }
    Ok(classes)
}

fn finite_abelian_sources(entry: &AbelianEntry) -> Result<Vec<(String, AbelianEndo)>> {
    Ok(abelian::enumerate_automorphisms(&entry.group)?
        .into_iter()
        .enumerate()
        .map(|(i, a)| (format!("automorphism {i}"), a))
        .collect())
}

/// Named automorphisms of every entry, plus all automorphisms of the finite
/// entries.
fn abelian_sources(entries: &[AbelianEntry]) -> Result<Vec<(&AbelianEntry, String, AbelianEndo)>> {
    let mut out = Vec::new();
    for entry in entries {
        for (name, psi) in &entry.automorphisms {
            out.push((entry, name.clone(), psi.clone()));
        }
        if entry.group.is_finite() {
            for (name, psi) in finite_abelian_sources(entry)? {
                out.push((entry, name, psi));
            }
        }
    }
    Ok(out)
}

/// The cokernel count of `psi - Id` against the orbit count, on every
/// automorphism of every finite abelian entry.
pub fn cokernel_section(entries: &[AbelianEntry]) -> Result<SectionReport> {
    let mut report = SectionReport::new(2, "cokernel count equals orbit count");
    for entry in entries.iter().filter(|e| e.group.is_finite()) {
        let mut values = Vec::new();
        for (name, psi) in finite_abelian_sources(entry)? {
            let r = reidemeister_number(&entry.group, &psi)?;
            let orbits = orbit_count_by_action(&entry.group, &psi)?;
            report.check(r == ExtendedCount::finite(orbits as u64), || {
                format!("{} {name}: cokernel {r}, orbits {orbits}", entry.name)
            });
            values.push(orbits);
        }
        report.details.push(json!({ "group": entry.name, "counts": values }));
    }
    Ok(report)
}

/// `R(psi) >= #Fix(psi)` whenever `R(psi)` is finite.
pub fn fixed_point_section(entries: &[AbelianEntry]) -> Result<SectionReport> {
    let mut report = SectionReport::new(3, "finite R bounds the fixed subgroup");
    for (entry, name, psi) in abelian_sources(entries)? {
        let r = reidemeister_number(&entry.group, &psi)?;
        let fix = fixed_subgroup_size(&entry.group, &psi)?;
        if r.is_finite() {
            report.check(r >= fix, || format!("{} {name}: R = {r}, Fix = {fix}", entry.name));
        }
        report.details.push(json!({
            "group": entry.name,
            "map": name,
            "reidemeister": r,
            "fixed": fix,
        }));
    }
    Ok(report)
}

/// `R` and the number of fixed characters do not change under `phi ->
/// tau_g . phi`.
pub fn inner_twist_section(entries: &[FiniteEntry], max_order: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(4, "inner twists preserve R and S_f");
    for entry in small(entries, max_order) {
        let g = &entry.group;
        let table = CharacterTableModP::compute(g)?;
        let auts = enumerate_automorphisms(g)?;
        let inner: Vec<Automorphism> = g.elements().map(|x| inner_automorphism(g, x)).collect();
        for (i, phi) in auts.iter().enumerate() {
            let r = twisted_classes(g, phi).class_count();
            let s = dual_action(g, &table, phi)?.fixed_count;
            for (x, tau) in inner.iter().enumerate() {
                let twisted = tau.compose(phi);
                let r2 = twisted_classes(g, &twisted).class_count();
                let s2 = dual_action(g, &table, &twisted)?.fixed_count;
                report.check(r == r2 && s == s2, || {
                    format!("{} automorphism {i}, element {x}: ({r}, {s}) vs ({r2}, {s2})", entry.name)
                });
            }
        }
        report.details.push(json!({
            "group": entry.name,
            "automorphisms": auts.len(),
        }));
    }
    Ok(report)
}

/// Right translation by `k` maps `phi`-classes onto `tau_{k^-1} . phi`
/// classes.
pub fn shift_section(entries: &[FiniteEntry], max_order: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(5, "right translation shifts twisted classes");
    for entry in small(entries, max_order) {
        let g = &entry.group;
        let auts = enumerate_automorphisms(g)?;
        for (i, phi) in auts.iter().enumerate() {
            for k in g.elements() {
                report.check(shift_class_identity_check(g, phi, k), || {
                    format!("{} automorphism {i}, shift {k}", entry.name)
                });
            }
        }
        report.details.push(json!({ "group": entry.name, "automorphisms": auts.len() }));
    }
    Ok(report)
}

/// Conjugacy in the coset `G t` of the mapping torus against twisted
/// classes, coset confinement under random conjugation, and separation in
/// the quotient `G x| Z/m`.
pub fn torus_section(entries: &[FiniteEntry], samples: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(6, "mapping torus coset conjugacy");
    let mut tori = Vec::new();
    for entry in entries {
        let auts = enumerate_automorphisms(&entry.group)?;
        let mut separated = 0;
        for (i, phi) in auts.into_iter().enumerate() {
            let torus = MappingTorus::new(entry.group.clone(), phi)?;
            report.check(torus.verify_bijection(), || {
                format!("{} automorphism {i}: coset partition differs", entry.name)
            });
            let sep = torus.restriction_separates(1)?;
            report.check(sep.holds, || {
                format!("{} automorphism {i}: restriction fails to separate", entry.name)
            });
            separated += sep.separated_pairs;
            tori.push(torus);
        }
        report.details.push(json!({
            "group": entry.name,
            "separated_pairs": separated,
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CONFINEMENT_SEED);
    let mut moved = 0;
    for _ in 0..samples {
        let torus = &tori[rng.gen_range(0..tori.len())];
        let n = torus.base().order();
        let a = TorusElement {
            g: rng.gen_range(0..n),
            n: rng.gen_range(-50..=50),
        };
        let b = TorusElement {
            g: rng.gen_range(0..n),
            n: rng.gen_range(-50..=50),
        };
        if torus.conjugate(b, a).n != a.n {
            moved += 1;
        }
    }
    report.check(moved == 0, || format!("{moved} conjugations left their coset"));
    report.details.push(json!({ "random_conjugations": samples, "left_coset": moved }));
    Ok(report)
}

/// Every check on every invariant extension harvested from the corpus.
pub fn extension_section(entries: &[FiniteEntry], max_order: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(7, "extension inequalities");
    for entry in small(entries, max_order) {
        let g = &entry.group;
        let extensions = extensions_of(g)?;
        let mut instances = 0;
        for (i, phi) in enumerate_automorphisms(g)?.iter().enumerate() {
            for ext in extensions.iter().filter(|e| e.is_invariant(phi)) {
                let r = check_extension(ext, phi)?;
                instances += 1;
                report.check(r.holds(), || {
                    format!(
                        "{} automorphism {i}, subgroup of order {}: {r:?}",
                        entry.name, r.subgroup_order
                    )
                });
            }
        }
        report.details.push(json!({
            "group": entry.name,
            "normal_subgroups": extensions.len(),
            "instances": instances,
        }));
    }
    Ok(report)
}

/// Möbius congruences for every finite source and every abelian source
/// whose sequence is finite.
pub fn congruence_section(
    finite: &[FiniteEntry],
    abelian: &[AbelianEntry],
    max_n: usize,
) -> Result<SectionReport> {
    let mut report = SectionReport::new(8, "Moebius congruences");
    for entry in finite {
        let auts = enumerate_automorphisms(&entry.group)?;
        for (i, phi) in auts.into_iter().enumerate() {
            let source = Source::Finite {
                group: entry.group.clone(),
                phi,
            };
            let seq = reidemeister_sequence(&source, max_n)?;
            let rep = verify_congruences(&seq)?;
            report.check(rep.all_pass, || format!("{} automorphism {i}", entry.name));
        }
    }
    let mut skipped = 0;
    for (entry, name, psi) in abelian_sources(abelian)? {
        let source = Source::Abelian {
            group: entry.group.clone(),
            psi,
        };
        let seq = reidemeister_sequence(&source, max_n)?;
        if seq.values.iter().any(|v| !v.is_finite()) {
            skipped += 1;
            continue;
        }
        let rep = verify_congruences(&seq)?;
        report.check(rep.all_pass, || format!("{} {name}", entry.name));
        if entry.name == "Z/7" && name == "x -> 2x" {
            let values: Vec<Option<u64>> = seq.values.iter().map(ExtendedCount::to_u64).collect();
            let expected = [1, 1, 7, 1, 1, 7];
            let ok = values.iter().zip(expected.iter().cycle()).all(|(v, &e)| *v == Some(e));
            report.check(ok, || format!("Z/7 doubling sequence {values:?}"));
        }
        if entry.group.free_rank() > 0 {
            report.details.push(json!({
                "group": entry.name,
                "map": name,
                "values": seq.values,
            }));
        }
    }
    report.details.push(json!({ "abelian_sources_with_infinite_entries": skipped }));
    Ok(report)
}

/// The finite quotient witnessing twisted classes, for every abelian source
/// with finite `R`.
pub fn witness_section(entries: &[AbelianEntry]) -> Result<SectionReport> {
    let mut report = SectionReport::new(9, "finite quotient witnesses");
    for (entry, name, psi) in abelian_sources(entries)? {
        let r = reidemeister_number(&entry.group, &psi)?;
        if !r.is_finite() {
            continue;
        }
        let witness = rp_witness(&entry.group, &psi)?;
        report.check(witness.verify(&entry.group, &psi)?, || {
            format!("{} {name}: witness rejected", entry.name)
        });
        report.check(witness.quotient.order() == r, || {
            format!("{} {name}: |K| = {}, R = {r}", entry.name, witness.quotient.order())
        });
    }
    Ok(report)
}

/// Orthogonality, degree sum and distinct rows, checked on construction.
pub fn character_section(entries: &[FiniteEntry], max_order: usize) -> Result<SectionReport> {
    let mut report = SectionReport::new(10, "character table integrity");
    for entry in small(entries, max_order) {
        let table = CharacterTableModP::compute(&entry.group)?;
        report.check(table.verify().is_ok(), || format!("{}: table rejected", entry.name));
        report.details.push(json!({
            "group": entry.name,
            "prime": table.prime(),
            "degrees": table.degrees(),
        }));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_count_matches_cokernel_on_cyclic_groups() {
        for n in 2..=9u64 {
            let g = FgAbelianGroup::from_cyclic_factors(0, &[n]);
            for psi in abelian::enumerate_automorphisms(&g).unwrap() {
                let r = reidemeister_number(&g, &psi).unwrap();
                let orbits = orbit_count_by_action(&g, &psi).unwrap();
                assert_eq!(r, ExtendedCount::finite(orbits as u64));
            }
        }
    }

    #[test]
    fn reduced_suite_passes_and_is_stable() {
        let config = SuiteConfig {
            max_order: 8,
            shift_max_order: 6,
            max_n: 4,
            confinement_samples: 100,
        };
        let a = run_full_suite(&config).unwrap();
        assert!(a.passed(), "{:?}", a.sections.iter().flat_map(|s| &s.failures).collect::<Vec<_>>());
        let b = run_full_suite(&config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
