//! `gamiso`: command-line access to the type theory, the game model and
//! the extraction of path isomorphisms.
//!
//! Exit codes: 0 for success or a positive answer, 1 for a negative
//! answer, 2 for errors.

mod strategies;
mod suite;

/// `println!` that tolerates a closed standard output.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gamiso::arena::{family_iso_decide, interpret_type, Arena};
use gamiso::eval::{eval, Configuration, Outcome};
use gamiso::extract::{extract_path_iso, required_bound};
use gamiso::iso::{iso_e, normalize, synthesize_coercions};
use gamiso::lang::{parse_term, parse_type, print_term, typecheck, Lang, TermExpr, TypeExpr, TypingContext};
use gamiso::plays::{self, Arrow, Play};
use gamiso::strategy::{compose, is_iso_pair, Bounds};
use serde_json::{json, Value};
use std::process::ExitCode;
use strategies::{load_strategy, strategy_document};

#[derive(Parser)]
#[command(name = "gamiso", version, about = "Type isomorphisms for a call-by-value language with references")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Language: `l2` (booleans) or `lnat` (with natural numbers).
    #[arg(long, global = true, default_value = "l2")]
    lang: String,
    /// Evaluation step budget.
    #[arg(long, global = true, default_value_t = 100_000)]
    fuel: u64,
    /// Maximal length of the plays explored.
    #[arg(long, global = true, env = "GAMISO_BOUND", default_value_t = 8)]
    bound: usize,
    /// Depth of extracted isomorphisms.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it back.
    Parse { term: String },
    /// Print the type of a term; free variables as `--var x=TYPE`.
    Typecheck {
        term: String,
        #[arg(long = "var", value_name = "NAME=TYPE")]
        vars: Vec<String>,
    },
    /// Evaluate a closed term.
    Eval { term: String },
    /// Print the normal form of a type.
    Nf { ty: String },
    /// Decide whether two types are isomorphic.
    Iso { a: String, b: String },
    /// Synthesize mutually inverse coercions between isomorphic types.
    Coerce { a: String, b: String },
    /// Print the arena family interpreting a type.
    Arena {
        ty: String,
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether two types have path-isomorphic arena families.
    ArenaIso { a: String, b: String },
    /// Check a play (JSON file or inline JSON) on the arena of a type, or
    /// with `--right` on the arrow between two types.
    PlayCheck {
        ty: String,
        play: String,
        #[arg(long)]
        right: Option<String>,
    },
    /// Strategy on `A ⇒ B` obtained by materializing a strategy source.
    Materialize { strategy: String },
    /// Compose two strategies and materialize the result.
    Compose { first: String, second: String },
    /// Check that two strategies are mutually inverse up to the bound.
    CheckIso {
        first: String,
        second: String,
        /// Only natural-number moves with index below this.
        #[arg(long)]
        nat_below: Option<usize>,
    },
    /// Extract the path isomorphism underlying a strategy isomorphism.
    Extract {
        strategy: String,
        /// The inverse strategy; when given, the pair is checked first at
        /// the bound extraction needs.
        #[arg(long)]
        inverse: Option<String>,
    },
    /// Run the built-in example suite.
    Fixtures,
}

fn lang(g: &Global) -> Result<Lang> {
    g.lang.parse::<Lang>().map_err(|e| anyhow!("{e}"))
}

/// Reads `@path` arguments from files.
fn text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(arg.to_string()),
    }
}

fn term(arg: &str) -> Result<TermExpr> {
    Ok(parse_term(&text(arg)?)?)
}

fn ty(arg: &str) -> Result<TypeExpr> {
    Ok(parse_type(&text(arg)?)?)
}

fn single_arena(t: &TypeExpr) -> Result<Arena> {
    let mut fam = interpret_type(t)?;
    if fam.len() != 1 {
        bail!("{t} denotes a family of {} arenas; a single arena is needed", fam.len());
    }
    Ok(fam.remove(0))
}

fn emit(g: &Global, doc: Value, plain: impl FnOnce() -> String) {
    if g.json {
        say!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        say!("{}", plain());
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Parse { term: t } => {
            let m = term(t)?;
            emit(g, json!({"format": "gamiso-term/1", "term": print_term(&m)}), || print_term(&m));
            Ok(true)
        }
        Command::Typecheck { term: t, vars } => {
            let bindings = vars
                .iter()
                .map(|v| {
                    let (x, t) = v.split_once('=').ok_or_else(|| anyhow!("expected NAME=TYPE, got `{v}`"))?;
                    Ok((x.trim().to_string(), ty(t)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let ctx = TypingContext::from_bindings(lang(g)?, bindings)?;
            let a = typecheck(&ctx, &term(t)?)?;
            emit(g, json!({"format": "gamiso-type/1", "type": a.to_string()}), || a.to_string());
            Ok(true)
        }
        Command::Eval { term: t } => {
            let m = term(t)?;
            typecheck(&TypingContext::new(lang(g)?), &m)?;
            let out = eval(&Configuration::new(), &m, g.fuel)?;
            let (kind, value) = match &out {
                Outcome::Value { value, .. } => ("value", Some(print_term(value))),
                Outcome::Diverged => ("out-of-fuel", None),
                Outcome::StuckRead(l) => ("stuck-read", Some(format!("location {l}"))),
                Outcome::Stuck(why) => ("stuck", Some(why.clone())),
            };
            emit(g, json!({"format": "gamiso-outcome/1", "outcome": kind, "value": value}), || match &value {
                Some(v) => format!("{kind}: {v}"),
                None => kind.to_string(),
            });
            Ok(out.converged())
        }
        Command::Nf { ty: t } => {
            let nf = normalize(&ty(t)?)?;
            emit(g, json!({"format": "gamiso-normal-form/1", "normal_form": nf.to_string()}), || nf.to_string());
            Ok(true)
        }
        Command::Iso { a, b } => {
            let (a, b) = (ty(a)?, ty(b)?);
            if a.mentions_nat() || b.mentions_nat() {
                bail!("the isomorphism theory covers the boolean language only; nat types are out of its scope");
            }
            let yes = iso_e(&a, &b)?;
            emit(g, json!({"format": "gamiso-iso/1", "isomorphic": yes}), || yes.to_string());
            Ok(yes)
        }
        Command::Coerce { a, b } => {
            let (a, b) = (ty(a)?, ty(b)?);
            match synthesize_coercions(&a, &b)? {
                Some((m, n)) => {
                    let (m, n) = (print_term(&m), print_term(&n));
                    emit(g, json!({"format": "gamiso-coercions/1", "forward": m, "backward": n}), || {
                        format!("x: {a} |- {m}\ny: {b} |- {n}")
                    });
                    Ok(true)
                }
                None => {
                    emit(g, json!({"format": "gamiso-coercions/1", "forward": null, "backward": null}), || {
                        "not isomorphic".to_string()
                    });
                    Ok(false)
                }
            }
        }
        Command::Arena { ty: t, dot } => {
            let fam = interpret_type(&ty(t)?)?;
            if *dot {
                for a in &fam {
                    say!("{}", a.to_dot());
                }
            } else {
                let doc = json!({"format": "gamiso-arena-family/1", "arenas": fam.iter().map(Arena::to_json).collect::<Vec<_>>()});
                say!("{}", serde_json::to_string_pretty(&doc)?);
            }
            Ok(true)
        }
        Command::ArenaIso { a, b } => {
            let (fa, fb) = (interpret_type(&ty(a)?)?, interpret_type(&ty(b)?)?);
            let found = family_iso_decide(&fa, &fb);
            let yes = found.is_some();
            let doc = json!({
                "format": "gamiso-arena-iso/1",
                "isomorphic": yes,
                "bijection": found.as_ref().map(|f| f.bijection.clone()),
                "components": found.as_ref().map(|f| f.components.iter().enumerate()
                    .map(|(i, w)| serde_json::to_value(w.unfold(g.depth)).map(|v| (i, v)))
                    .collect::<Result<Vec<_>, _>>()).transpose()?,
            });
            emit(g, doc, || yes.to_string());
            Ok(yes)
        }
        Command::PlayCheck { ty: t, play, right } => {
            let arrow = match right {
                Some(r) => Some(Arrow::new(single_arena(&ty(t)?)?, single_arena(&ty(r)?)?)),
                None => None,
            };
            let arena = match &arrow {
                Some(a) => a.arena.clone(),
                None => single_arena(&ty(t)?)?,
            };
            let raw = if std::path::Path::new(play).is_file() { text(&format!("@{play}"))? } else { text(play)? };
            let doc: Value = serde_json::from_str(&raw).context("play is not JSON")?;
            let s = Play::from_json(&arena, doc.get("play").unwrap_or(&doc))?;
            let mut report = json!({
                "format": "gamiso-play-check/1",
                "justified": plays::is_justified(&arena, &s),
                "alternating": plays::is_alternating(&arena, &s),
                "well_bracketed": plays::is_well_bracketed(&arena, &s),
                "legal": plays::is_legal(&arena, &s),
                "complete": plays::is_complete(&arena, &s),
            });
            if let Some(a) = &arrow {
                report["pre_zigzag"] = json!(a.is_pre_zigzag(&s));
                report["zigzag"] = json!(a.is_zigzag(&s));
            }
            let legal = report["legal"] == json!(true);
            emit(g, report.clone(), || {
                let obj = report.as_object().expect("object");
                obj.iter().filter(|(k, _)| *k != "format").map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n")
            });
            Ok(legal)
        }
        Command::Materialize { strategy } => {
            let sigma = load_strategy(strategy)?;
            say!("{}", serde_json::to_string_pretty(&strategy_document(&sigma, &Bounds::new(g.bound))?)?);
            Ok(true)
        }
        Command::Compose { first, second } => {
            let composite = compose(&load_strategy(first)?, &load_strategy(second)?)?;
            say!("{}", serde_json::to_string_pretty(&strategy_document(&composite, &Bounds::new(g.bound))?)?);
            Ok(true)
        }
        Command::CheckIso { first, second, nat_below } => {
            let mut bounds = Bounds::new(g.bound);
            if let Some(n) = nat_below {
                bounds = bounds.nat_below(*n);
            }
            let yes = is_iso_pair(&load_strategy(first)?, &load_strategy(second)?, &bounds)?;
            emit(g, json!({"format": "gamiso-check-iso/1", "bound": g.bound, "inverse": yes}), || yes.to_string());
            Ok(yes)
        }
        Command::Extract { strategy, inverse } => {
            let sigma = load_strategy(strategy)?;
            if let Some(tau) = inverse {
                let bound = required_bound(g.depth);
                if !is_iso_pair(&sigma, &load_strategy(tau)?, &Bounds::new(bound))? {
                    bail!("the two strategies are not mutually inverse on plays of length {bound}");
                }
            }
            let iso = extract_path_iso(&sigma, g.depth)?;
            let doc = json!({"format": "gamiso-path-iso/1", "depth": g.depth, "isos": serde_json::to_value(&iso.isos)?});
            say!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(true)
        }
        Command::Fixtures => {
            let rows = suite::run_all();
            let ok = rows.iter().all(|r| r.passed);
            if g.json {
                let rows: Vec<Value> = rows.iter().map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail})).collect();
                say!("{}", serde_json::to_string_pretty(&json!({"format": "gamiso-fixtures/1", "results": rows}))?);
            } else {
                let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
                for r in &rows {
                    say!("{:<width$}  {}  {}", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
