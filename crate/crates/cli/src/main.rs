//! `mg`: Bruhat moment graphs, canonical bases, Braden–MacPherson sheaves and the
//! verification suites, from the command line.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use mg_core::coxeter::CartanDatum;
use mg_core::verify::{self, SuiteReport};
use mg_core::{
    sheaf, zmod, Combination, GradedRank, Hecke, LaurentPoly, MgError, ParabolicDatum, ParabolicModule, Setting,
    WeylGroup,
};

use cache::{Cache, EntryState};

#[derive(Parser, Debug)]
#[command(name = "mg", version, about = "Exact computations with parabolic Bruhat moment graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cartan type such as A2, B2, G2, A3 or A1xA1.
    #[arg(long = "type", global = true, default_value = "A2")]
    cartan: String,
    /// TOML file with `[types.<label>] matrix = [[..]]` entries for custom types.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Generators of J, 1-based and space-separated, e.g. "1 3".
    #[arg(long, global = true, default_value = "")]
    parabolic: String,
    /// Reduced word of an element, 1-based, e.g. "1 2 1"; "" or "e" is the identity.
    #[arg(long, global = true, default_value = "")]
    element: String,
    /// Degree bound for sheaf computations (even, positive).
    #[arg(long, global = true)]
    bound: Option<i32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, env = "MG_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest group order accepted before giving up.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_order: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Bruhat moment graph of W^J.
    Graph,
    /// Kazhdan–Lusztig basis element, or the parabolic canonical basis element when J is nonempty.
    Basis,
    /// The Braden–MacPherson sheaf of an element and the graded ranks of its sections.
    Bmp,
    /// Character of the sections of a BMP sheaf, or of iterated translations of B_e.
    Char {
        /// Apply translation functors to B_e instead, outermost first, e.g. "1 2".
        #[arg(long)]
        translate: Option<String>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Inspect the result cache.
    Cache {
        #[arg(value_enum, default_value_t = CacheAction::List)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    List,
    Verify,
    Clear,
}

enum Failure {
    Usage(String),
    Verification(String),
    Resource(String),
}

impl From<MgError> for Failure {
    fn from(e: MgError) -> Failure {
        match e {
            MgError::GroupTooLarge(_) | MgError::ResourceCap(_) => Failure::Resource(e.to_string()),
            MgError::InvalidCartan(_)
            | MgError::UnknownType(_)
            | MgError::BadGenerator(_)
            | MgError::NotReduced(_)
            | MgError::BadWord(_)
            | MgError::NotInQuotient
            | MgError::UnknownVertex
            | MgError::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("mg: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("mg: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("mg: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Command::Cache { action } = cli.command {
        return cmd_cache(cli, action);
    }
    if let Some(b) = cli.bound {
        if b <= 0 || b % 2 != 0 {
            return Err(Failure::Usage(format!("--bound must be even and positive, got {b}")));
        }
        if b > 64 {
            return Err(Failure::Resource(format!("--bound {b} exceeds the cap of 64")));
        }
    }
    let g = load_group(cli)?;
    let pd = g.parabolic(&parse_parabolic(&cli.parabolic)?)?;
    match &cli.command {
        Command::Graph => cmd_graph(cli, &g, &pd),
        Command::Basis => cmd_basis(cli, &g, &pd),
        Command::Bmp => cmd_bmp(cli, &g, &pd),
        Command::Char { translate } => cmd_char(cli, &g, &pd, translate.as_deref()),
        Command::Verify { suite } => cmd_verify(cli, &g, &pd, suite),
        Command::Cache { .. } => unreachable!(),
    }
}

fn load_group(cli: &Cli) -> std::result::Result<WeylGroup, Failure> {
    let cartan = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            CartanDatum::from_config(&text, &cli.cartan)?
        }
        None => CartanDatum::from_label(&cli.cartan)?,
    };
    Ok(WeylGroup::with_cap(cartan, cli.max_order)?)
}

/// 1-based indices separated by spaces or commas, returned 0-based.
fn parse_parabolic(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let k: usize = tok.parse().map_err(|_| Failure::Usage(format!("bad generator index `{tok}`")))?;
        if k == 0 {
            return Err(Failure::Usage("generator indices are 1-based".into()));
        }
        out.push(k - 1);
    }
    Ok(out)
}

fn j_label(pd: &ParabolicDatum) -> String {
    let j: Vec<String> = pd.j.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", j.join(" "))
}

fn header(g: &WeylGroup, pd: &ParabolicDatum) -> Value {
    json!({ "type": g.cartan.label, "parabolic": pd.j.iter().map(|i| i + 1).collect::<Vec<_>>() })
}

fn emit(cli: &Cli, value: Value, text: impl FnOnce() -> String) {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
        _ => print!("{}", text()),
    }
}

fn cmd_graph(cli: &Cli, g: &WeylGroup, pd: &ParabolicDatum) -> Outcome {
    let mg = mg_core::MomentGraph::bruhat(g, pd);
    if cli.format == Format::Dot {
        print!("{}", mg.to_dot());
        return Ok(());
    }
    let mut value = header(g, pd);
    value["graph"] = mg.to_json();
    emit(cli, value, || {
        let mut s = format!(
            "W({})^J, J = {}: {} vertices, {} edges\n",
            g.cartan.label,
            j_label(pd),
            mg.num_vertices(),
            mg.num_edges()
        );
        for e in &mg.edges {
            s.push_str(&format!("  {} -> {}  <{}>\n", mg.names[e.from], mg.names[e.to], e.label));
        }
        s
    });
    Ok(())
}

fn element(g: &WeylGroup, pd: &ParabolicDatum, word: &str) -> std::result::Result<usize, Failure> {
    let w = g.parse_word(word)?;
    if !pd.is_rep(w) {
        return Err(Failure::Usage(format!("`{word}` is not a minimal coset representative for J = {}", j_label(pd))));
    }
    Ok(w)
}

fn cmd_basis(cli: &Cli, g: &WeylGroup, pd: &ParabolicDatum) -> Outcome {
    let w = element(g, pd, &cli.element)?;
    let b: Combination =
        if pd.is_regular() { Hecke::new(g).kl_basis(w) } else { ParabolicModule::new(g, pd).deodhar_basis(w)? };
    let mut value = header(g, pd);
    value["element"] = json!(g.word_string(w));
    value["basis"] = b.to_json(g);
    emit(cli, value, || format!("C({}) = {}\n", g.word_string(w), b.render(g)));
    Ok(())
}

fn bmp_report(g: &WeylGroup, pd: &ParabolicDatum, w: usize, bound: Option<i32>) -> mg_core::Result<Value> {
    let set = Setting::new(g, pd);
    let b = sheaf::bmp_sheaf(&set.graph, set.vertex(w)?, bound)?;
    let ranks: Vec<GradedRank> = b.global.kernel_degrees.iter().map(|k| GradedRank::from_degrees(k)).collect();
    let ch = zmod::character_from_ranks(&set, &ranks, g.length(w) as i32);
    Ok(json!({
        "vertices": set.graph.names,
        "sheaf": b.sheaf.to_json(),
        "sections": ranks.iter().enumerate().map(|(x, r)| json!({
            "vertex": set.graph.names[x],
            "rank": r.laurent.to_json(),
        })).collect::<Vec<_>>(),
        "character": ch.data.to_json(g),
        "character_text": ch.data.render(g),
    }))
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    cli.cache_dir.clone().or_else(|| {
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
        Some(base.join("mg"))
    })
}

fn cmd_bmp(cli: &Cli, g: &WeylGroup, pd: &ParabolicDatum) -> Outcome {
    let w = element(g, pd, &cli.element)?;
    let key = json!({
        "kind": "bmp",
        "version": 1,
        "matrix": g.cartan.matrix,
        "parabolic": pd.j,
        "element": g.word(w),
        "bound": cli.bound,
    });
    let cache = cache_dir(cli).map(Cache::new);
    let payload = match cache.as_ref().and_then(|c| c.load(&key)) {
        Some(p) => p,
        None => {
            let p = bmp_report(g, pd, w, cli.bound)?;
            if let Some(c) = &cache {
                if let Err(e) = c.store(&key, &p) {
                    eprintln!("mg: warning: cache write failed: {e}");
                }
            }
            p
        }
    };
    let mut value = header(g, pd);
    value["element"] = json!(g.word_string(w));
    value["bmp"] = payload.clone();
    emit(cli, value, || {
        let mut s = format!("B({}) on W({})^J, J = {}\n", g.word_string(w), g.cartan.label, j_label(pd));
        let stalks = payload["sheaf"]["stalks"].as_array().cloned().unwrap_or_default();
        for (x, sec) in payload["sections"].as_array().into_iter().flatten().enumerate() {
            s.push_str(&format!(
                "  {:>10}  stalk generators {}  sections {}\n",
                sec["vertex"].as_str().unwrap_or(""),
                stalks.get(x).cloned().unwrap_or(Value::Null),
                LaurentPoly::from_json(&sec["rank"]).map(|p| p.to_string()).unwrap_or_default()
            ));
        }
        s.push_str(&format!("  character {}\n", payload["character_text"].as_str().unwrap_or("")));
        s
    });
    Ok(())
}

fn cmd_char(cli: &Cli, g: &WeylGroup, pd: &ParabolicDatum, translate: Option<&str>) -> Outcome {
    let set = Setting::new(g, pd);
    let pm = ParabolicModule::new(g, pd);
    let (label, m, shift, oracle) = match translate {
        Some(word) => {
            let seq = parse_parabolic(word)?;
            if let Some(&s) = seq.iter().find(|&&s| s >= g.rank()) {
                return Err(Failure::Usage(format!("generator index {} out of range", s + 1)));
            }
            let mut m = zmod::module_be(&set);
            let mut oracle = Combination::basis(g.identity());
            for &s in seq.iter().rev() {
                m = zmod::translate(&set, s, &m)?;
                oracle = pm.act_kl_s(s, &oracle)?;
            }
            let label: String = seq.iter().map(|s| format!("t{} ", s + 1)).collect();
            let shift = m.shift + seq.len() as i32;
            (format!("{label}B_e<{}>", seq.len()), m, shift, oracle)
        }
        None => {
            let w = element(g, pd, &cli.element)?;
            let (_, m) = zmod::bmp_module(&set, w)?;
            let shift = g.length(w) as i32;
            (format!("Gamma(B({}))<{shift}>", g.word_string(w)), m, shift, pm.deodhar_basis(w)?)
        }
    };
    let ranks = zmod::subquotient_ranks(&set.graph, &m)?;
    let ch = zmod::character_from_ranks(&set, &ranks, shift);
    let matches = ch.data == oracle;
    let mut value = header(g, pd);
    value["module"] = json!(label);
    value["report"] = m.to_json(&set, &ranks, &ch);
    value["oracle"] = oracle.to_json(g);
    value["matches_oracle"] = json!(matches);
    emit(cli, value, || {
        let mut s = format!("{label}: rank {}\n", m.rank());
        for (x, r) in ranks.iter().enumerate() {
            s.push_str(&format!("  {:>10}  {}\n", set.graph.names[x], r));
        }
        s.push_str(&format!("  character {}\n  oracle    {}\n", ch.data.render(g), oracle.render(g)));
        s
    });
    if matches {
        Ok(())
    } else {
        Err(Failure::Verification("character differs from the Hecke-module oracle".into()))
    }
}

fn cmd_verify(cli: &Cli, g: &WeylGroup, pd: &ParabolicDatum, suite: &str) -> Outcome {
    if !verify::SUITES.contains(&suite) {
        return Err(Failure::Usage(format!("unknown suite `{suite}`; expected one of {}", verify::SUITES.join(", "))));
    }
    let names: Vec<&str> = if suite == "all" { verify::SUITES[..5].to_vec() } else { vec![suite] };
    let results: Vec<mg_core::Result<Vec<SuiteReport>>> =
        names.par_iter().map(|name| verify::run_suite(name, g, pd)).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let passed = reports.iter().all(SuiteReport::passed);
    let mut value = header(g, pd);
    value["passed"] = json!(passed);
    value["suites"] = Value::Array(reports.iter().map(SuiteReport::to_json).collect());
    emit(cli, value, || {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&format!("{} {}\n", if r.passed() { "PASS" } else { "FAIL" }, r.summary()));
            for c in r.failures() {
                s.push_str(&format!("  {}: expected {} got {}\n", c.item, c.expected, c.actual));
            }
        }
        s
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn cmd_cache(cli: &Cli, action: CacheAction) -> Outcome {
    let Some(dir) = cache_dir(cli) else {
        return Err(Failure::Usage("no cache directory (use --cache-dir or MG_CACHE_DIR)".into()));
    };
    let cache = Cache::new(dir);
    match action {
        CacheAction::Clear => {
            let n = cache.clear().map_err(|e| Failure::Usage(format!("cannot clear cache: {e}")))?;
            emit(cli, json!({ "removed": n }), || format!("removed {n} entries\n"));
            Ok(())
        }
        CacheAction::List | CacheAction::Verify => {
            let entries = cache.entries();
            let corrupt = entries.iter().filter(|e| matches!(e.2, EntryState::Corrupt(_))).count();
            let rows: Vec<Value> = entries
                .iter()
                .map(|(p, key, state)| {
                    json!({
                        "file": p.file_name().map(|f| f.to_string_lossy().into_owned()),
                        "key": key,
                        "valid": matches!(state, EntryState::Valid),
                        "problem": match state { EntryState::Corrupt(m) => Some(m.clone()), EntryState::Valid => None },
                    })
                })
                .collect();
            emit(cli, json!({ "dir": cache.dir, "entries": rows, "corrupt": corrupt }), || {
                let mut s = format!("{}: {} entries, {corrupt} corrupt\n", cache.dir.display(), entries.len());
                for (p, key, state) in &entries {
                    let status = match state {
                        EntryState::Valid => "ok".to_string(),
                        EntryState::Corrupt(m) => m.clone(),
                    };
                    let key = key.as_ref().map(Value::to_string).unwrap_or_default();
                    s.push_str(&format!(
                        "  {}  {status}  {key}\n",
                        p.file_name().unwrap_or_default().to_string_lossy()
                    ));
                }
                s
            });
            if action == CacheAction::Verify && corrupt > 0 {
                Err(Failure::Verification(format!("{corrupt} corrupt cache entries")))
            } else {
                Ok(())
            }
        }
    }
}
