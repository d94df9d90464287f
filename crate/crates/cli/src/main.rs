//! `tbl`: batch front end for twisted class computations and checks.
//!
//! Exit codes: 0 success, 1 output failure, 2 invalid input, 3 a
//! verification found a counterexample, 4 a size cap was exceeded.

mod cache;
mod render;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use twisted_burnside::abelian::{
    self, class_representatives, fixed_subgroup_size, reidemeister_number, rp_witness,
};
use twisted_burnside::characters::{dual_action, CharacterTableModP, StoredTable};
use twisted_burnside::corpus::standard_corpus;
use twisted_burnside::extensions::{check_extension, extensions_of, GroupExtension};
use twisted_burnside::group::{
    enumerate_automorphisms_with_cap, subgroup_closure, twisted_classes, FiniteGroup,
    DEFAULT_AUTOMORPHISM_CAP, DEFAULT_ELEMENT_CAP,
};
use twisted_burnside::suite::{run_full_suite, SuiteConfig, SCHEMA_VERSION};
use twisted_burnside::torus::MappingTorus;
use twisted_burnside::zeta::{
    reidemeister_sequence, verify_congruences, zeta_coefficients, Source,
};
use twisted_burnside::Error;

use cache::Cache;
use render::Format;
use spec::{parse_elements, parse_group, parse_map, GroupInput, MapInput};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn cap(message: String) -> Self {
        CliError { code: 4, message }
    }

    pub fn internal(message: String) -> Self {
        CliError { code: 1, message }
    }

    /// Caps map to exit 4; every other library error is an input problem.
    pub fn from_core(e: Error, field: &str) -> Self {
        let message = format!("{field}: {e}");
        if e.is_cap_exceeded() {
            Self::cap(message)
        } else {
            Self::input(message)
        }
    }
}

#[derive(Parser)]
#[command(name = "tbl", version, about = "Twisted conjugacy classes, Reidemeister numbers and their checks")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Cache directory; defaults to $TBL_CACHE_DIR, then the user cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest group order accepted from closure and for automorphism
    /// enumeration.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Number of iterates for congruence checks.
    #[arg(long, global = true, default_value_t = 12)]
    max_n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Target {
    /// Group document: inline JSON, a file path, or corpus:NAME.
    #[arg(long)]
    group: String,
    /// Automorphism document: inline JSON, a file path, or corpus:NAME.
    /// Defaults to the identity.
    #[arg(long)]
    automorphism: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List the twisted conjugacy classes.
    Classes(Target),
    /// Reidemeister number and fixed points.
    Reidemeister(Target),
    /// Compare R(phi) with the number of characters fixed by phi.
    Burnside(Target),
    /// Check the Moebius congruences for R(phi^n), n <= --max-n.
    Congruence(Target),
    /// Check conjugacy in the mapping torus and separation in a quotient.
    Torus {
        #[command(flatten)]
        target: Target,
        /// The quotient has cyclic part of order ord(phi) * multiple.
        #[arg(long, default_value_t = 1)]
        multiple: usize,
    },
    /// Check the extension inequalities for invariant normal subgroups.
    Extension {
        #[command(flatten)]
        target: Target,
        /// Generators of one normal subgroup as one-based image lists;
        /// defaults to every harvested invariant normal subgroup.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Finite quotient through which the twisted classes factor.
    RpWitness(Target),
    /// Enumerate all automorphisms of a finite group.
    Automorphisms {
        #[arg(long)]
        group: String,
    },
    /// The built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Entries with orders and automorphism counts.
    List,
    /// Run every check over the corpus.
    Verify,
}

struct Context {
    cache: Cache,
    closure_cap: usize,
    automorphism_cap: usize,
    max_n: usize,
}

/// A report and whether its checks passed.
struct Outcome {
    report: Map<String, Value>,
    passed: bool,
}

fn report(command: &str, body: Value) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    map
}

fn ok(command: &str, body: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        report: report(command, body),
        passed: true,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn core<T>(r: twisted_burnside::Result<T>, field: &str) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_core(e, field))
}

fn finite_only(command: &str) -> CliError {
    CliError::input(format!("group: {command} needs a permutation group"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        cache: Cache::from_options(cli.cache_dir.clone(), cli.no_cache),
        closure_cap: cli.max_order.unwrap_or(DEFAULT_ELEMENT_CAP),
        automorphism_cap: cli.max_order.unwrap_or(DEFAULT_AUTOMORPHISM_CAP),
        max_n: cli.max_n,
    };
    let result = dispatch(&cli.command, &ctx)
        .and_then(|outcome| Ok((render::render(&outcome.report, cli.format)?, outcome.passed)))
        .and_then(|(text, passed)| {
            match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| {
                    CliError::internal(format!("output: cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(passed)
        });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        Command::Classes(t) => classes(t, ctx),
        Command::Reidemeister(t) => reidemeister(t, ctx),
        Command::Burnside(t) => burnside(t, ctx),
        Command::Congruence(t) => congruence(t, ctx),
        Command::Torus { target, multiple } => torus(target, *multiple, ctx),
        Command::Extension { target, subgroup } => extension(target, subgroup.as_deref(), ctx),
        Command::RpWitness(t) => witness(t, ctx),
        Command::Automorphisms { group } => automorphisms(group, ctx),
        Command::Corpus { action } => match action {
            CorpusAction::List => corpus_list(),
            CorpusAction::Verify => corpus_verify(ctx),
        },
    }
}

fn load(t: &Target, ctx: &Context) -> Result<(GroupInput, MapInput), CliError> {
    let group = parse_group(&t.group, ctx.closure_cap, &ctx.cache)?;
    let map = parse_map(&group, t.automorphism.as_deref())?;
    Ok((group, map))
}

fn load_finite(
    t: &Target,
    ctx: &Context,
    command: &str,
) -> Result<(FiniteGroup, twisted_burnside::group::Automorphism), CliError> {
    match load(t, ctx)? {
        (GroupInput::Finite { group, .. }, MapInput::Finite(phi)) => Ok((group, phi)),
        _ => Err(finite_only(command)),
    }
}

fn classes(t: &Target, ctx: &Context) -> Result<Outcome, CliError> {
    match load(t, ctx)? {
        (GroupInput::Finite { group, .. }, MapInput::Finite(phi)) => {
            let partition = twisted_classes(&group, &phi);
            let rows: Vec<Value> = (0..partition.class_count())
                .map(|c| {
                    let members = partition.members(c);
                    json!({
                        "class": c,
                        "size": members.len(),
                        "representative": group.element_name(partition.representatives()[c]),
                        "members": members.iter().map(|&x| group.element_name(x)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            ok(
                "classes",
                json!({
                    "group_order": group.order(),
                    "class_count": partition.class_count(),
                    "rows": rows,
                }),
            )
        }
        (GroupInput::Abelian { group, .. }, MapInput::Abelian(psi)) => {
            let r = core(reidemeister_number(&group, &psi), "automorphism")?;
            let rows: Vec<Value> = if r.is_finite() {
                core(class_representatives(&group, &psi), "classes")?
                    .iter()
                    .enumerate()
                    .map(|(c, x)| json!({ "class": c, "representative": x.to_string() }))
                    .collect()
            } else {
                Vec::new()
            };
            ok(
                "classes",
                json!({
                    "group": group.to_string(),
                    "class_count": r,
                    "rows": rows,
                }),
            )
        }
        _ => unreachable!("maps are parsed for their group"),
    }
}

fn reidemeister(t: &Target, ctx: &Context) -> Result<Outcome, CliError> {
    match load(t, ctx)? {
        (GroupInput::Finite { group, .. }, MapInput::Finite(phi)) => {
            let r = twisted_classes(&group, &phi).class_count();
            let fixed = group.elements().filter(|&x| phi.apply(x) == x).count();
            ok(
                "reidemeister",
                json!({
                    "group_order": group.order(),
                    "reidemeister": r,
                    "fixed_points": fixed,
                }),
            )
        }
        (GroupInput::Abelian { group, .. }, MapInput::Abelian(psi)) => {
            let r = core(reidemeister_number(&group, &psi), "automorphism")?;
            let fixed = core(fixed_subgroup_size(&group, &psi), "automorphism")?;
            ok(
                "reidemeister",
                json!({
                    "group": group.to_string(),
                    "reidemeister": r,
                    "fixed_points": fixed,
                }),
            )
        }
        _ => unreachable!("maps are parsed for their group"),
    }
}

/// Character table from the cache when a stored table passes every check,
/// recomputed and stored otherwise.
fn character_table(group: &FiniteGroup, ctx: &Context) -> Result<CharacterTableModP, CliError> {
    let key = group.content_hash();
    if let Some(stored) = ctx.cache.load::<StoredTable>("characters", &key) {
        match CharacterTableModP::from_stored(group, stored) {
            Ok(table) => return Ok(table),
            Err(e) => ctx.cache.warn_corrupt("characters", &key, &e.to_string()),
        }
    }
    let table = core(CharacterTableModP::compute(group), "group")?;
    ctx.cache.store("characters", &key, &table.to_stored());
    Ok(table)
}

fn burnside(t: &Target, ctx: &Context) -> Result<Outcome, CliError> {
    let (group, phi) = load_finite(t, ctx, "burnside")?;
    let table = character_table(&group, ctx)?;
    let r = twisted_classes(&group, &phi).class_count();
    let action = core(dual_action(&group, &table, &phi), "automorphism")?;
    let equal = r == action.fixed_count;
    Ok(Outcome {
        report: report(
            "burnside",
            json!({
                "R": r,
                "S_f": action.fixed_count,
                "equal": equal,
                "prime": table.prime(),
                "degrees": table.degrees(),
                "character_permutation": action.permutation,
            }),
        ),
        passed: equal,
    })
}

fn congruence(t: &Target, ctx: &Context) -> Result<Outcome, CliError> {
    if ctx.max_n == 0 {
        return Err(CliError::input("max-n: must be at least 1".to_string()));
    }
    let source = match load(t, ctx)? {
        (GroupInput::Finite { group, .. }, MapInput::Finite(phi)) => Source::Finite { group, phi },
        (GroupInput::Abelian { group, .. }, MapInput::Abelian(psi)) => {
            Source::Abelian { group, psi }
        }
        _ => unreachable!("maps are parsed for their group"),
    };
    let seq = core(reidemeister_sequence(&source, ctx.max_n), "automorphism")?;
    let checked = verify_congruences(&seq).map_err(|e| match e {
        Error::InfiniteEntry(n) => CliError::input(format!(
            "automorphism: R(phi^{n}) is infinite; congruences need finite values"
        )),
        other => CliError::from_core(other, "automorphism"),
    })?;
    let coeffs = core(zeta_coefficients(&seq, ctx.max_n), "automorphism")?;
    Ok(Outcome {
        passed: checked.all_pass,
        report: report(
            "congruence",
            json!({
                "values": seq.values,
                "all_pass": checked.all_pass,
                "zeta_coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "rows": to_value(&checked.records),
            }),
        ),
    })
}

fn torus(t: &Target, multiple: usize, ctx: &Context) -> Result<Outcome, CliError> {
    if multiple == 0 {
        return Err(CliError::input("multiple: must be at least 1".to_string()));
    }
    let (group, phi) = load_finite(t, ctx, "torus")?;
    let torus = core(MappingTorus::new(group, phi), "automorphism")?;
    let bijection = torus.verify_bijection();
    let classes = torus.coset_partition().class_count();
    let quotient_order = torus.base().order() * torus.phi_order() * multiple;
    let separation = core(torus.restriction_separates(multiple), "multiple")?;
    Ok(Outcome {
        passed: bijection && separation.holds,
        report: report(
            "torus",
            json!({
                "phi_order": torus.phi_order(),
                "coset_classes": classes,
                "bijection": bijection,
                "quotient_order": quotient_order,
                "separation": separation,
            }),
        ),
    })
}

fn extension(t: &Target, subgroup: Option<&str>, ctx: &Context) -> Result<Outcome, CliError> {
    let (group, phi) = load_finite(t, ctx, "extension")?;
    let extensions: Vec<GroupExtension> = match subgroup {
        Some(arg) => {
            let gens = parse_elements(&group, arg)?;
            let elements = subgroup_closure(&group, &gens);
            let ext = core(GroupExtension::new(&group, &elements), "subgroup")?;
            if !ext.is_invariant(&phi) {
                return Err(CliError::input(
                    "subgroup: not invariant under the automorphism".to_string(),
                ));
            }
            vec![ext]
        }
        None => core(extensions_of(&group), "group")?
            .into_iter()
            .filter(|e| e.is_invariant(&phi))
            .collect(),
    };
    let mut rows = Vec::new();
    let mut all = true;
    for ext in &extensions {
        let r = core(check_extension(ext, &phi), "subgroup")?;
        all &= r.holds();
        let bound = |b: Option<twisted_burnside::extensions::BoundCheck>| match b {
            Some(b) => json!(format!("{} <= {}: {}", b.lhs, b.rhs, b.holds)),
            None => json!("n/a"),
        };
        rows.push(json!({
            "subgroup_order": r.subgroup_order,
            "quotient_order": r.quotient_order,
            "class_epimorphism": r.class_epimorphism,
            "nonabelian_bound": bound(Some(r.nonabelian_bound)),
            "abelian_quotient_bound": bound(r.abelian_quotient_bound),
            "fix_bound": bound(r.fix_bound),
            "holds": r.holds(),
        }));
    }
    Ok(Outcome {
        passed: all,
        report: report("extension", json!({ "all_hold": all, "rows": rows })),
    })
}

fn witness(t: &Target, ctx: &Context) -> Result<Outcome, CliError> {
    let (group, psi) = match load(t, ctx)? {
        (GroupInput::Abelian { group, .. }, MapInput::Abelian(psi)) => (group, psi),
        _ => {
            return Err(CliError::input(
                "group: rp-witness needs an fg_abelian group".to_string(),
            ))
        }
    };
    let r = core(reidemeister_number(&group, &psi), "automorphism")?;
    if !r.is_finite() {
        return Err(CliError::input(
            "automorphism: R is infinite, so no finite witness exists".to_string(),
        ));
    }
    let w = core(rp_witness(&group, &psi), "automorphism")?;
    let verified = core(w.verify(&group, &psi), "automorphism")?;
    Ok(Outcome {
        passed: verified,
        report: report(
            "rp-witness",
            json!({
                "reidemeister": r,
                "quotient": w.quotient.to_string(),
                "projection": w.projection,
                "induced": w.induced,
                "verified": verified,
            }),
        ),
    })
}

fn automorphisms(group_arg: &str, ctx: &Context) -> Result<Outcome, CliError> {
    match parse_group(group_arg, ctx.closure_cap, &ctx.cache)? {
        GroupInput::Finite { group, .. } => {
            let auts = core(
                enumerate_automorphisms_with_cap(&group, ctx.automorphism_cap),
                "group",
            )?;
            let bound = group.order() * group.order();
            let rows = auts
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let images: Vec<String> = a
                        .generator_images(&group)
                        .into_iter()
                        .map(|x| group.element_name(x))
                        .collect();
                    Ok(json!({
                        "index": i,
                        "generator_images": images,
                        "order": core(a.order_within(bound.max(1)), "automorphism")?,
                        "inner": group.elements().any(|g| twisted_burnside::group::inner_automorphism(&group, g) == *a),
                    }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            ok("automorphisms", json!({ "count": auts.len(), "rows": rows }))
        }
        GroupInput::Abelian { group, .. } if group.is_finite() => {
            let auts = core(abelian::enumerate_automorphisms(&group), "group")?;
            let rows: Vec<Value> = auts
                .iter()
                .enumerate()
                .map(|(i, a)| json!({ "index": i, "C": a.torsion_block() }))
                .collect();
            ok("automorphisms", json!({ "count": auts.len(), "rows": rows }))
        }
        GroupInput::Abelian { .. } => Err(CliError::input(
            "group: automorphisms of a group with free part are not enumerable".to_string(),
        )),
    }
}

fn corpus_list() -> Result<Outcome, CliError> {
    let rows = core(standard_corpus(), "corpus")?
        .iter()
        .map(|e| {
            let s = core(e.summary(), "corpus")?;
            Ok(json!({
                "name": s.name,
                "kind": s.kind,
                "order": s.order,
                "automorphisms": s.automorphism_count,
                "named_maps": s.named_automorphisms.join("; "),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ok("corpus list", json!({ "rows": rows }))
}

fn corpus_verify(ctx: &Context) -> Result<Outcome, CliError> {
    let config = SuiteConfig {
        max_n: ctx.max_n,
        ..SuiteConfig::default()
    };
    let suite = core(run_full_suite(&config), "corpus")?;
    let rows: Vec<Value> = suite
        .sections
        .iter()
        .map(|s| {
            json!({
                "id": s.id,
                "check": s.name,
                "cases": s.cases,
                "failures": s.failures.len(),
                "passed": s.passed(),
            })
        })
        .collect();
    Ok(Outcome {
        passed: suite.passed(),
        report: report("corpus verify", json!({ "passed": suite.passed(), "rows": rows })),
    })
}
