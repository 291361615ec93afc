//! `zg`: command-line front end. Every command prints one JSON object (or its
//! text rendering) on stdout and exits 0 on success, 1 on a mathematical
//! failure, 2 when a budget is exhausted and 3 on parse or spec errors.

use std::path::{Path, PathBuf};
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use zg_core::centre::Centre;
use zg_core::cohomology::{self, CocycleEntry, Cochain2, CohomologyPresentation};
use zg_core::constructions::{conj_by_ambient, sz_group, tilde_e, ESubgroup, SzGroupSpec};
use zg_core::group::{commuting_pair_classes, is_class_preserving, is_doubly_class_preserving, is_inner};
use zg_core::{spec, Error, GroupMap, GroupTable, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "zg", version, about = "Finite group cohomology and Drinfeld-centre characters")]
struct Cli {
    /// Coefficient modulus for cohomology (default: max(2, |G|)).
    #[arg(long, global = true)]
    modulus: Option<u64>,
    /// Coset budget for presentations.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for randomized checks; no command here is randomized.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Group-spec document (JSON).
    group: PathBuf,
}

#[derive(Args, Debug)]
struct PairArgs {
    group: PathBuf,
    /// Automorphism file, or `id`.
    #[arg(long)]
    phi: String,
    /// Cocycle file, `bog:<i>` or `zero`.
    #[arg(long)]
    gamma: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group-level commands.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Conjugacy classes.
    Classes(GroupArg),
    /// Orbits of commuting pairs under simultaneous conjugation.
    Pairs(GroupArg),
    /// `H^2(G, Z/n)`.
    H2(GroupArg),
    /// Schur multiplier.
    Schur(GroupArg),
    /// Bogomolov multiplier; caches representatives beside the group file.
    Bogomolov(GroupArg),
    #[command(subcommand)]
    Aut(AutCommand),
    #[command(subcommand)]
    Sz(SzCommand),
    #[command(subcommand)]
    Centre(CentreCommand),
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Info(GroupArg),
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Validate a map and test innerness and class preservation.
    Check {
        group: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum SzCommand {
    /// Build `G(E)`, compute `E~` and test conjugation by `E_11`.
    Demo {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "traceless")]
        e: String,
    },
}

#[derive(Subcommand, Debug)]
enum CentreCommand {
    Simples(GroupArg),
    Soft(PairArgs),
    Minv(PairArgs),
}

/// Map file: images of the generators, or of every element, by label.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default)]
    generator_images: Option<Vec<String>>,
    #[serde(default)]
    images: Option<Vec<String>>,
}

/// Cocycle file; entries not listed are zero.
#[derive(Serialize, Deserialize, Debug)]
struct CocycleFile {
    modulus: u64,
    entries: Vec<CocycleEntry>,
}

#[derive(Serialize, Deserialize, Debug)]
struct BogomolovCache {
    modulus: u64,
    invariant_factors: Vec<u64>,
    representatives: Vec<Vec<CocycleEntry>>,
}

struct Ctx {
    modulus: Option<u64>,
    budget: Option<usize>,
}

impl Ctx {
    fn group(&self, path: &Path) -> Result<GroupTable> {
        spec::load(path)?.realize(self.budget)
    }

    fn modulus(&self, g: &GroupTable) -> u64 {
        self.modulus.unwrap_or_else(|| cohomology::default_modulus(g))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { pos: offset(&text, e.line(), e.column()), msg: format!("{}: {e}", path.display()) })
}

fn offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string(v).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

fn element(g: &GroupTable, label: &str) -> Result<usize> {
    g.index_of_label(label).ok_or_else(|| Error::Spec(format!("unknown element label {label:?}")))
}

fn load_map(g: &GroupTable, arg: &str) -> Result<GroupMap> {
    if arg == "id" {
        return Ok(GroupMap::identity(g));
    }
    let m: MapFile = read_json(Path::new(arg))?;
    match (m.generator_images, m.images) {
        (Some(gi), None) => {
            let imgs = gi.iter().map(|l| element(g, l)).collect::<Result<Vec<_>>>()?;
            let phi = GroupMap::complete_hom(g, g, &imgs)?;
            if !phi.is_bijective() {
                return Err(Error::NotHomomorphism("map is not bijective".into()));
            }
            Ok(phi)
        }
        (None, Some(all)) => GroupMap::automorphism(g, all.iter().map(|l| element(g, l)).collect::<Result<Vec<_>>>()?),
        _ => Err(Error::Spec("map file needs exactly one of generator_images and images".into())),
    }
}

/// `<dir>/<stem>.bogomolov.json` for `<dir>/<stem>.json`.
fn cache_path(group: &Path) -> PathBuf {
    let stem = group.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    group.with_file_name(format!("{stem}.bogomolov.json"))
}

fn bogomolov_cache(g: &GroupTable, b: &CohomologyPresentation, group: &Path) -> Result<BogomolovCache> {
    let cache = BogomolovCache {
        modulus: b.modulus(),
        invariant_factors: b.invariant_factors().to_vec(),
        representatives: b.representatives.iter().map(|r| r.to_triples(g)).collect(),
    };
    write_json(&cache_path(group), &cache)?;
    Ok(cache)
}

fn load_gamma(ctx: &Ctx, g: &GroupTable, group: &Path, arg: &str) -> Result<Cochain2> {
    if arg == "zero" {
        return Ok(Cochain2::zero(g.order(), ctx.modulus(g)));
    }
    if let Some(i) = arg.strip_prefix("bog:") {
        let i: usize = i.parse().map_err(|_| Error::Parse { pos: 4, msg: format!("bad representative index in {arg:?}") })?;
        let path = cache_path(group);
        let cache: BogomolovCache = if path.exists() {
            read_json(&path)?
        } else {
            let m = ctx.modulus(g);
            bogomolov_cache(g, &cohomology::bogomolov(g, m)?, group)?
        };
        let entries = cache
            .representatives
            .get(i)
            .ok_or_else(|| Error::Spec(format!("no Bogomolov representative {i} (have {})", cache.representatives.len())))?;
        return Cochain2::from_triples(g, cache.modulus, entries);
    }
    let f: CocycleFile = read_json(Path::new(arg))?;
    Cochain2::from_triples(g, f.modulus, &f.entries)
}

fn labels(g: &GroupTable, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|x| g.label(x).to_string()).collect()
}

fn group_info(g: &GroupTable) -> Value {
    let conj = zg_core::group::conjugacy(g);
    json!({
        "order": g.order(),
        "generators": labels(g, g.generators().iter().copied()),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "nilpotency_class": g.nilpotency_class(),
        "centre_order": g.centre().len(),
        "derived_order": g.derived_subgroup().len(),
        "num_classes": conj.num_classes(),
    })
}

fn pair_result(ctx: &Ctx, a: &PairArgs, want_matrix: bool) -> Result<Value> {
    let g = ctx.group(&a.group)?;
    let phi = load_map(&g, &a.phi)?;
    let gamma = load_gamma(ctx, &g, &a.group, &a.gamma)?;
    if !cohomology::is_cocycle(&g, &gamma) {
        return Err(Error::Math("gamma is not a 2-cocycle".into()));
    }
    let z = Centre::new(&g)?;
    let soft = z.is_soft(&phi, &gamma)?;
    let coboundary = cohomology::h2_mod_n(&g, gamma.modulus())
        .ok()
        .and_then(|h| h.class_of(&g, &gamma).ok())
        .map(|c| c.iter().all(|&x| x == 0));
    if want_matrix {
        let m = z.modular_invariant(&phi, &gamma)?;
        Ok(json!({"soft": soft, "identity": m.is_identity(), "gamma_is_coboundary": coboundary, "matrix": m.entries}))
    } else {
        Ok(json!({"soft": soft, "gamma_is_coboundary": coboundary, "permutation": z.permutation_on_simples(&phi, &gamma)?}))
    }
}

fn run(cli: &Cli) -> Result<Value> {
    let ctx = Ctx { modulus: cli.modulus, budget: cli.budget };
    let factors = |p: CohomologyPresentation| json!({"invariant_factors": p.invariant_factors()});
    match &cli.command {
        Command::Group(GroupCommand::Info(a)) => Ok(group_info(&ctx.group(&a.group)?)),
        Command::Classes(a) => {
            let g = ctx.group(&a.group)?;
            let conj = zg_core::group::conjugacy(&g);
            let classes: Vec<Value> = (0..conj.num_classes())
                .map(|c| json!({"rep": g.label(conj.class_reps[c]), "size": conj.class_size(c), "order": g.element_order(conj.class_reps[c])}))
                .collect();
            Ok(json!({"num_classes": classes.len(), "classes": classes}))
        }
        Command::Pairs(a) => {
            let g = ctx.group(&a.group)?;
            let pairs = commuting_pair_classes(&g);
            let orbits: Vec<Value> = pairs
                .pair_reps
                .iter()
                .zip(&pairs.orbit_sizes)
                .map(|(&(x, y), &s)| json!({"pair": [g.label(x), g.label(y)], "size": s}))
                .collect();
            Ok(json!({"num_orbits": orbits.len(), "orbits": orbits}))
        }
        Command::H2(a) => {
            let g = ctx.group(&a.group)?;
            Ok(factors(cohomology::h2_mod_n(&g, ctx.modulus(&g))?))
        }
        Command::Schur(a) => {
            let g = ctx.group(&a.group)?;
            Ok(factors(cohomology::schur_multiplier(&g, ctx.modulus(&g))?))
        }
        Command::Bogomolov(a) => {
            let g = ctx.group(&a.group)?;
            let b = cohomology::bogomolov(&g, ctx.modulus(&g))?;
            bogomolov_cache(&g, &b, &a.group)?;
            Ok(factors(b))
        }
        Command::Aut(AutCommand::Check { group, map }) => {
            let g = ctx.group(group)?;
            let phi = load_map(&g, &map.to_string_lossy())?;
            let conj = zg_core::group::conjugacy(&g);
            let inner = is_inner(&g, &phi);
            let pairs = commuting_pair_classes(&g);
            let mut order = 1;
            let mut p = phi.clone();
            while !p.is_identity() {
                p = p.compose(&phi);
                order += 1;
            }
            Ok(json!({
                "automorphism": true,
                "order": order,
                "inner": inner.is_some(),
                "inner_by": inner.map(|h| g.label(h).to_string()),
                "class_preserving": is_class_preserving(&g, &conj, &phi),
                "doubly_class_preserving": is_doubly_class_preserving(&g, &pairs, &phi),
            }))
        }
        Command::Sz(SzCommand::Demo { q, n, e }) => {
            let e: ESubgroup = serde_json::from_value(Value::String(e.clone()))
                .map_err(|_| Error::Parse { pos: 0, msg: format!("unknown E kind {e:?} (full, traceless, scalars)") })?;
            let sz = sz_group(&SzGroupSpec { q: *q, n: *n, e })?;
            let g = sz.table();
            let te = tilde_e(&sz)?;
            let ends = q.pow((n * n) as u32);
            let mut e11 = vec![0u32; n * n];
            e11[0] = 1;
            let phi = conj_by_ambient(&sz, &sz.ambient_from_matrix(e11))?;
            let conj = zg_core::group::conjugacy(g);
            let cp = is_class_preserving(g, &conj, &phi);
            let pairs = commuting_pair_classes(g);
            Ok(json!({
                "order": g.order(),
                "e_dimension": sz.e_basis().len(),
                "tilde_e_size": te.len(),
                "tilde_e_is_all_endomorphisms": te.len() as u64 == ends,
                "num_classes": conj.num_classes(),
                "num_pair_orbits": pairs.num_orbits(),
                "e11": {
                    "class_preserving": cp,
                    "doubly_class_preserving": is_doubly_class_preserving(g, &pairs, &phi),
                    "inner": is_inner(g, &phi).is_some(),
                    "square_is_identity": phi.compose(&phi).is_identity(),
                },
            }))
        }
        Command::Centre(CentreCommand::Simples(a)) => {
            let g = ctx.group(&a.group)?;
            let z = Centre::new(&g)?;
            let conj = z.pairs().conj();
            let simples: Vec<Value> = z
                .simples()
                .iter()
                .map(|s| json!({"class_rep": g.label(conj.class_reps[s.class]), "irrep": s.irrep, "degree": s.degree, "class_size": s.class_size, "qdim": s.qdim}))
                .collect();
            let total: u64 = z.simples().iter().map(|s| s.qdim * s.qdim).sum();
            Ok(json!({"num_simples": simples.len(), "sum_qdim_squared": total, "simples": simples}))
        }
        Command::Centre(CentreCommand::Soft(a)) => pair_result(&ctx, a, false),
        Command::Centre(CentreCommand::Minv(a)) => pair_result(&ctx, a, true),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(" "),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// `key: value` lines; arrays of rows become one indented line per row.
fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(m) = v else {
        return scalar(v) + "\n";
    };
    for (k, v) in m {
        match v {
            Value::Array(rows) if rows.iter().any(|r| r.is_array() || r.is_object()) => {
                out.push_str(&format!("{k}:\n"));
                for r in rows {
                    out.push_str(&format!("  {}\n", scalar(r)));
                }
            }
            Value::Object(inner) => {
                out.push_str(&format!("{k}:\n"));
                for (ik, iv) in inner {
                    out.push_str(&format!("  {ik}: {}\n", scalar(iv)));
                }
            }
            _ => out.push_str(&format!("{k}: {}\n", scalar(v))),
        }
    }
    out
}

fn error_value(e: &Error) -> Value {
    let mut obj = json!({"code": e.code(), "message": e.to_string()});
    if let Error::Parse { pos, .. } = e {
        obj["pos"] = json!(pos);
    }
    json!({ "error": obj })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            println!("{}", json!({"error": {"code": "usage_error", "message": e.kind().to_string()}}));
            return ExitCode::from(3);
        }
    };
    let _ = cli.seed;
    let (value, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(e) => {
            eprintln!("zg: {e}");
            (error_value(&e), e.exit_code())
        }
    };
    let text = match cli.format {
        Format::Json => format!("{value}\n"),
        Format::Text => render_text(&value),
    };
    // a closed pipe is not an error of the computation
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code as u8)
}
