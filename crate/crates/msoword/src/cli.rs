//! Command-line front end.
//!
//! [`run`] takes the argument vector and returns the exit status together
//! with everything destined for stdout and stderr, so the binary is a thin
//! wrapper and tests can drive the whole interface in-process.
//!
//! Exit status: 0 success, 1 property failure, 2 usage error, 3 resource
//! or budget exhaustion.

pub mod selftest;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::automata::nba::{DEFAULT_COMPLEMENT_CAP, DEFAULT_PROFILE_CAP};
use crate::automata::serial::{Automaton, AutomatonJson};
use crate::automata::Dfa;
use crate::biinf::{
    self, classify, decode_oracle, determining_check, embed_oracle, has_determining_word, interleave_with_oracle,
    mso_equivalent, parse_stream, realize_language, rich_word_stream, shift_equivalent, ConditionBounds, SearchConfig,
    StreamItem,
};
use crate::compiler::{compile, Mode};
use crate::decide::{
    bi_indicator, bi_indicator_right, decide_bi, decide_finite, decide_gap_factor, decide_gap_with, decide_up,
    indicator_up_report, weak_bi_indicator, weak_indicator_up, GapConfig, Presentation,
};
use crate::formula::{self, Formula};
use crate::types::{
    equiv_k_with, ktype_with, representative_bi_with, representative_up_with, unary_classify_with, Strategy,
    TypeConfig,
};
use crate::words::{parse_literal, FactorEnumeration, FiniteWord, Language, OracleBits, WordLiteral};
use crate::Error;

/// Output schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// Settings read from `--config`: one `key = value` per line, `#` starts a
/// comment. Unknown keys are rejected.
///
/// | key | default |
/// |---|---|
/// | `format` | `text` |
/// | `seed` | `24301` |
/// | `type.max_len_low`, `type.max_len_rank3`, `type.max_len_high` | 10, 7, 4 |
/// | `type.strategy` (`brute`, `compose`, `auto`) | `auto` |
/// | `type.brute_len` | 4 |
/// | `type.max_compose_rank` | 3 |
/// | `type.max_search_len` | 4096 |
/// | `gap.max_n0`, `gap.max_q`, `gap.window`, `gap.max_type_rank` | 64, 8, 4, 2 |
/// | `search.max_gap`, `search.budget` | 12, 100000 |
/// | `cond.max_len`, `cond.max_ext_len`, `cond.max_gap` | 8, 3, 8 |
/// | `complement.state_cap`, `complement.profile_cap` | 12, 50000 |
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliConfig {
    pub format: Format,
    pub seed: u64,
    pub types: TypeConfig,
    pub gap: GapConfig,
    pub search: SearchConfig,
    pub bounds: ConditionBounds,
    pub complement_state_cap: usize,
    pub complement_profile_cap: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            format: Format::Text,
            seed: 24301,
            types: TypeConfig::default(),
            gap: GapConfig::default(),
            search: SearchConfig::default(),
            bounds: ConditionBounds::default(),
            complement_state_cap: DEFAULT_COMPLEMENT_CAP,
            complement_profile_cap: DEFAULT_PROFILE_CAP,
        }
    }
}

impl CliConfig {
    /// Parses the `key = value` format on top of the defaults.
    pub fn parse(text: &str) -> crate::Result<CliConfig> {
        let mut c = CliConfig::default();
        let mut brute_len = match c.types.strategy {
            Strategy::Auto { brute_len } => brute_len,
            _ => 4,
        };
        let mut strategy = "auto".to_string();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value", n + 1)))?;
            let num = || -> crate::Result<u64> {
                let v: u64 = value
                    .parse()
                    .map_err(|_| Error::invalid(format!("config line {}: `{value}` is not a number", n + 1)))?;
                if v == 0 && key != "seed" {
                    return Err(Error::invalid(format!("config line {}: `{key}` must be positive", n + 1)));
                }
                Ok(v)
            };
            match key {
                "format" => {
                    c.format = match value {
                        "text" => Format::Text,
                        "json" => Format::Json,
                        _ => return Err(Error::invalid(format!("config line {}: format is text or json", n + 1))),
                    }
                }
                "seed" => c.seed = num()?,
                "type.max_len_low" => c.types.budget.max_len_low = num()? as usize,
                "type.max_len_rank3" => c.types.budget.max_len_rank3 = num()? as usize,
                "type.max_len_high" => c.types.budget.max_len_high = num()? as usize,
                "type.strategy" => strategy = value.to_string(),
                "type.brute_len" => brute_len = num()? as usize,
                "type.max_compose_rank" => c.types.max_compose_rank = num()? as usize,
                "type.max_search_len" => c.types.max_search_len = num()? as usize,
                "gap.max_n0" => c.gap.max_n0 = num()?,
                "gap.max_q" => c.gap.max_q = num()?,
                "gap.window" => c.gap.window = num()?,
                "gap.max_type_rank" => c.gap.max_type_rank = num()? as usize,
                "search.max_gap" => c.search.max_gap = num()? as usize,
                "search.budget" => c.search.budget = num()?,
                "cond.max_len" => c.bounds.max_len = num()? as usize,
                "cond.max_ext_len" => c.bounds.max_ext_len = num()? as usize,
                "cond.max_gap" => c.bounds.max_gap = num()? as usize,
                "complement.state_cap" => c.complement_state_cap = num()? as usize,
                "complement.profile_cap" => c.complement_profile_cap = num()? as usize,
                _ => return Err(Error::invalid(format!("config line {}: unknown key `{key}`", n + 1))),
            }
        }
        c.types.strategy = match strategy.as_str() {
            "brute" => Strategy::Brute,
            "compose" => Strategy::Compose,
            "auto" => Strategy::Auto { brute_len },
            other => return Err(Error::invalid(format!("unknown type strategy `{other}`"))),
        };
        Ok(c)
    }

    fn selftest(&self, quick: bool) -> selftest::SelftestConfig {
        selftest::SelftestConfig {
            seed: self.seed,
            quick,
            types: self.types,
            search: self.search,
            bounds: self.bounds,
            complement_state_cap: self.complement_state_cap,
            complement_profile_cap: self.complement_profile_cap,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "msoword", version, about = "MSO logic over finitely presented binary words")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Read settings from a key=value file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormulaArg {
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
    formula: Option<String>,
    /// File holding the formula.
    #[arg(long, value_name = "FILE")]
    formula_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Finite,
    Omega,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a formula to an automaton.
    Compile {
        #[arg(long, value_enum, default_value = "finite")]
        mode: ModeArg,
        #[command(flatten)]
        formula: FormulaArg,
        /// Write the automaton here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a sentence on a presented word.
    Decide {
        /// Word literal: fin:, up:, bi: or gap:.
        #[arg(long)]
        word: String,
        #[command(flatten)]
        formula: FormulaArg,
        /// Gap words only: whether some factor satisfies the sentence.
        #[arg(long)]
        factor: bool,
    },
    /// Rank-k types.
    Types {
        #[command(subcommand)]
        command: TypesCommand,
    },
    /// Indicator of recurrence, or the weak indicator.
    Indicator {
        /// Word literal: up: or bi:.
        #[arg(long)]
        word: String,
        #[command(flatten)]
        formula: FormulaArg,
        /// Report the weak indicator (0, 1 or top) instead.
        #[arg(long)]
        weak: bool,
        /// Left cut for the weak indicator of a bi-infinite word.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<i64>,
        /// Right cut for the weak indicator of a bi-infinite word.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<i64>,
    },
    /// Bi-infinite word analysis and constructions.
    Biinf {
        #[command(subcommand)]
        command: BiinfCommand,
    },
    /// Cross-check suites against independent oracles.
    Selftest {
        /// Run only this suite; repeatable.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        quick: bool,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TypesCommand {
    /// Whether two finite words share their k-type.
    Equiv {
        #[arg(short)]
        k: usize,
        a: String,
        b: String,
    },
    /// Threshold and period of 0^n modulo k-types.
    Unary {
        #[arg(short)]
        k: usize,
    },
    /// A representative (x, y) or (x, y, z) of an ultimately periodic word.
    Rep {
        word: String,
        #[arg(short)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BiinfCommand {
    /// Size of the MSO-equivalence class.
    Classify {
        /// A bi: literal; omit when --lang is given.
        #[arg(required_unless_present = "lang")]
        word: Option<String>,
        /// Factor language of a recurrent word: all, golden, alt or an automaton file.
        #[arg(long, conflicts_with = "word")]
        lang: Option<String>,
    },
    /// MSO equivalence of two presentations (bi: literal or lang:<L>).
    Equiv { a: String, b: String },
    /// Finite approximations of a recurrent word with factor language L.
    Realize {
        #[arg(long)]
        lang: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed an oracle bitstring into a recurrent word over L.
    Embed {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        bits: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the bits from an embedding stream.
    Decode {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        stream: PathBuf,
    },
    /// The stream of a word containing every finite word as a factor.
    Rich {
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Rich word with oracle bits interleaved, and the bits read back.
    Interleave {
        #[arg(long)]
        bits: String,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// A determining word of L, or the sides on which a given word determines.
    Determining {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        word: Option<String>,
    },
}

/// Everything [`run`] produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
    /// The command ran but a checked property does not hold.
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Exit status of a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_budget() {
        3
    } else if matches!(e, Error::Certificate(_)) {
        1
    } else {
        2
    }
}

/// Pretty JSON with keys in sorted order, so parsing and re-serializing
/// reproduces the text exactly.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

struct Ctx {
    cfg: CliConfig,
    out: String,
}

impl Ctx {
    fn json(&self) -> bool {
        self.cfg.format == Format::Json
    }

    /// Prints `text` or `value` depending on the format.
    fn emit(&mut self, text: impl Into<String>, value: Value) {
        if self.json() {
            self.out.push_str(&to_json_text(&value));
        } else {
            let t = text.into();
            self.out.push_str(&t);
            if !t.ends_with('\n') {
                self.out.push('\n');
            }
        }
    }
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let json_flag = cli.json;
    let cfg = match &cli.config {
        None => Ok(CliConfig::default()),
        Some(p) => read(p).and_then(|t| CliConfig::parse(&t).map_err(Failure::Lib)),
    };
    let mut ctx = Ctx { cfg: CliConfig::default(), out: String::new() };
    let result = cfg.and_then(|mut c| {
        if json_flag {
            c.format = Format::Json;
        }
        ctx.cfg = c;
        dispatch(&mut ctx, cli.command)
    });
    match result {
        Ok(()) => Outcome { code: 0, stdout: ctx.out, stderr: String::new() },
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Lib(e) => {
                    let code = exit_code(&e);
                    let kind = match code {
                        3 => "budget",
                        1 => "property",
                        _ => "usage",
                    };
                    (code, kind, e.to_string())
                }
                Failure::Usage(m) => (2, "usage", m),
                Failure::Io(m) => (2, "io", m),
                Failure::Property(m) => (1, "property", m),
            };
            let mut stdout = ctx.out;
            if ctx.cfg.format == Format::Json {
                stdout.push_str(&to_json_text(&json!({ "error": { "kind": kind, "message": msg }, "exit": code })));
            }
            let stderr = if code == 2 && kind == "usage" {
                format!("error: {msg}\n\nusage: msoword [--json] [--config FILE] <compile|decide|types|indicator|biinf|selftest> ...\n")
            } else {
                format!("error: {msg}\n")
            };
            Outcome { code, stdout, stderr }
        }
    }
}

fn read(p: &Path) -> Res<String> {
    fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))
}

fn write(p: &Path, text: &str) -> Res<()> {
    fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))
}

fn load_formula(f: &FormulaArg) -> Res<Formula> {
    let text = match (&f.formula, &f.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => return Err(Failure::Usage("give --formula or --formula-file".into())),
    };
    Ok(formula::parse(&text)?)
}

/// `all`, `golden`, `alt`, or a DFA/NFA file in text or JSON form.
pub fn load_language(spec: &str) -> crate::Result<Dfa> {
    if let Some(d) = selftest::builtin_language(spec) {
        return Ok(d);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Error::invalid(format!("`{spec}` is neither all, golden, alt nor a readable file: {e}")))?;
    let a = if text.trim_start().starts_with('{') {
        let j: AutomatonJson = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{spec}: {e}")))?;
        Automaton::from_json(&j)?
    } else {
        Automaton::from_text(&text)?
    };
    match a {
        Automaton::Dfa(d) => Ok(d),
        Automaton::Nfa(n) => Ok(n.determinize()?.minimize()),
        Automaton::Nba(_) => Err(Error::invalid("a factor language must be given by a DFA or NFA")),
    }
}

fn presentation(s: &str) -> Res<Presentation> {
    if let Some(l) = s.strip_prefix("lang:") {
        return Ok(Presentation::FactorLanguage(load_language(l)?));
    }
    match parse_literal(s)? {
        WordLiteral::Bi(xi) => Ok(Presentation::Bi(xi)),
        _ => Err(Failure::Usage(format!("`{s}` is not a bi: literal or lang:<L>"))),
    }
}

fn finite_arg(s: &str) -> Res<FiniteWord> {
    match parse_literal(s) {
        Ok(WordLiteral::Finite(w)) => Ok(w),
        Ok(_) => Err(Failure::Usage(format!("`{s}` is not a finite word"))),
        Err(_) => Ok(FiniteWord::parse(s)?),
    }
}

fn stream_text(items: &[StreamItem]) -> String {
    items.iter().map(|i| i.line() + "\n").collect()
}

fn stream_json(items: &[StreamItem]) -> Value {
    Value::Array(items.iter().map(to_value).collect())
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> Res<()> {
    match cmd {
        Command::Compile { mode, formula, out } => {
            let phi = load_formula(&formula)?;
            let mode = match mode {
                ModeArg::Finite => Mode::Finite,
                ModeArg::Omega => Mode::Omega,
            };
            let c = compile(&phi, mode, 1)?;
            let a = Automaton::Dfa(c.dfa.clone());
            let body = if ctx.json() { to_json_text(&to_value(&a.to_json())) } else { a.to_text() };
            let meta = json!({
                "formula": phi.to_string(),
                "mode": if mode == Mode::Finite { "finite" } else { "omega" },
                "vars": c.vars,
                "states": c.dfa.num_states(),
                "width": c.width(),
                "peak_states": c.stats.peak_states,
            });
            match out {
                Some(p) => {
                    write(&p, &body)?;
                    let text = format!("{} states, width {}, written to {}", c.dfa.num_states(), c.width(), p.display());
                    ctx.emit(text, meta);
                }
                None if ctx.json() => {
                    let mut m = meta;
                    m["automaton"] = to_value(&a.to_json());
                    ctx.emit("", m);
                }
                None => ctx.emit(body, Value::Null),
            }
        }
        Command::Decide { word, formula, factor } => {
            let phi = load_formula(&formula)?;
            let lit = parse_literal(&word)?;
            let mut v = json!({ "word": lit.literal(), "formula": phi.to_string() });
            let value = match (&lit, factor) {
                (WordLiteral::Gap(g), true) => {
                    let r = decide_gap_factor(g, &phi, &ctx.cfg.gap)?;
                    v["normal_form"] = to_value(&r.normal_form);
                    v["route"] = json!("gap-factor");
                    r.value
                }
                (_, true) => return Err(Failure::Usage("--factor applies to gap: words".into())),
                (WordLiteral::Finite(w), _) => decide_finite(w, &phi)?,
                (WordLiteral::Up(a), _) => decide_up(a, &phi)?,
                (WordLiteral::Bi(xi), _) => decide_bi(xi, &phi)?,
                (WordLiteral::Gap(g), _) => {
                    let r = decide_gap_with(g, &phi, &ctx.cfg.gap)?;
                    v["normal_form"] = to_value(&r.normal_form);
                    v["rank"] = json!(r.rank);
                    r.value
                }
            };
            v["value"] = json!(value);
            ctx.emit(value.to_string(), v);
        }
        Command::Types { command } => types(ctx, command)?,
        Command::Indicator { word, formula, weak, x, y } => {
            let phi = load_formula(&formula)?;
            let lit = parse_literal(&word)?;
            let mut v = json!({ "word": lit.literal(), "formula": phi.to_string(), "weak": weak });
            let text = match (&lit, weak) {
                (WordLiteral::Up(a), true) => {
                    let w = weak_indicator_up(a, &phi)?;
                    v["value"] = json!(w.to_string());
                    w.to_string()
                }
                (WordLiteral::Up(a), false) => {
                    let r = indicator_up_report(a, &phi)?;
                    v["value"] = json!(r.value.to_string());
                    v["witness"] = to_value(&r.witness);
                    r.value.to_string()
                }
                (WordLiteral::Bi(xi), true) => {
                    let (Some(x), Some(y)) = (x, y) else {
                        return Err(Failure::Usage("the weak indicator of a bi-infinite word needs --x and --y".into()));
                    };
                    let (l, r) = weak_bi_indicator(xi, &phi, x, y)?;
                    v["left"] = json!(l.to_string());
                    v["right"] = json!(r.to_string());
                    format!("left={l} right={r}")
                }
                (WordLiteral::Bi(xi), false) => {
                    let b = bi_indicator(xi, &phi)?;
                    let r = bi_indicator_right(xi, &phi)?;
                    v["left"] = json!(b.left.to_string());
                    v["right"] = json!(b.right.to_string());
                    v["right_witness"] = to_value(&r.witness);
                    format!("left={} right={}", b.left, b.right)
                }
                _ => return Err(Failure::Usage("indicators take up: or bi: words".into())),
            };
            ctx.emit(text, v);
        }
        Command::Biinf { command } => biinf_cmd(ctx, command)?,
        Command::Selftest { suite, quick, list } => {
            if list {
                let text: String = selftest::SUITES.iter().map(|(n, d)| format!("{n:<18}{d}\n")).collect();
                let v = Value::Array(selftest::SUITES.iter().map(|(n, d)| json!({ "name": n, "description": d })).collect());
                ctx.emit(text, v);
                return Ok(());
            }
            let reports = selftest::run_suites(&suite, &ctx.cfg.selftest(quick))?;
            let passed = reports.iter().all(|r| r.passed());
            let mut text = format!("{:<18}{:>9}{:>10}  result\n", "suite", "cases", "failures");
            for r in &reports {
                text += &format!("{:<18}{:>9}{:>10}  {}\n", r.name, r.cases, r.failures, if r.passed() { "PASS" } else { "FAIL" });
                if let Some(f) = &r.first_failure {
                    text += &format!("    first failure: {f}\n");
                }
            }
            ctx.emit(text, json!({ "passed": passed, "seed": ctx.cfg.seed, "quick": quick, "suites": to_value(&reports) }));
            if !passed {
                return Err(Failure::Property("selftest failures".into()));
            }
        }
    }
    Ok(())
}

fn types(ctx: &mut Ctx, cmd: TypesCommand) -> Res<()> {
    let tc = ctx.cfg.types;
    match cmd {
        TypesCommand::Equiv { k, a, b } => {
            let (u, w) = (finite_arg(&a)?, finite_arg(&b)?);
            let eq = equiv_k_with(&u, &w, k, &tc)?;
            let nu = formula::Valuation::new();
            let (ta, tb) = (ktype_with(&u, &nu, k, &tc)?, ktype_with(&w, &nu, k, &tc)?);
            let v = json!({
                "k": k,
                "a": u,
                "b": w,
                "equivalent": eq,
                "types": [to_value(&ta.summary()?), to_value(&tb.summary()?)],
            });
            ctx.emit(eq.to_string(), v);
        }
        TypesCommand::Unary { k } => {
            let c = unary_classify_with(k, &tc)?;
            ctx.emit(format!("t={} p={} l={}", c.t, c.p, c.l), to_value(&c));
        }
        TypesCommand::Rep { word, k } => {
            let lit = parse_literal(&word)?;
            let (text, rep) = match &lit {
                WordLiteral::Up(a) => {
                    let r = representative_up_with(a, k, &tc)?;
                    (format!("x={} y={}", r.x, r.y), to_value(&r))
                }
                WordLiteral::Bi(xi) => {
                    let r = representative_bi_with(xi, k, &tc)?;
                    (format!("x={} y={} z={}", r.x, r.y, r.z), to_value(&r))
                }
                WordLiteral::Gap(g) => {
                    let nf = crate::decide::gap_normal_form(g, k, &ctx.cfg.gap)?;
                    let r = representative_up_with(&nf.word, k, &tc)?;
                    (format!("x={} y={}", r.x, r.y), to_value(&r))
                }
                WordLiteral::Finite(_) => return Err(Failure::Usage("representatives exist for infinite words only".into())),
            };
            ctx.emit(text, json!({ "k": k, "word": lit.literal(), "representative": rep }));
        }
    }
    Ok(())
}

fn biinf_cmd(ctx: &mut Ctx, cmd: BiinfCommand) -> Res<()> {
    let search = ctx.cfg.search;
    match cmd {
        BiinfCommand::Classify { word, lang } => {
            let p = match (word, lang) {
                (_, Some(l)) => Presentation::FactorLanguage(load_language(&l)?),
                (Some(w), None) => presentation(&w)?,
                (None, None) => return Err(Failure::Usage("give a bi: word or --lang".into())),
            };
            let r = classify(&p)?;
            ctx.emit(r.to_string(), to_value(&r));
        }
        BiinfCommand::Equiv { a, b } => {
            let (pa, pb) = (presentation(&a)?, presentation(&b)?);
            let eq = mso_equivalent(&pa, &pb)?;
            let shift = match (&pa, &pb) {
                (Presentation::Bi(x), Presentation::Bi(y)) => shift_equivalent(x, y),
                _ => None,
            };
            ctx.emit(eq.to_string(), json!({ "a": a, "b": b, "equivalent": eq, "shift": shift }));
        }
        BiinfCommand::Realize { lang, steps, out } => {
            let l = Language::Regular(load_language(&lang)?);
            let items = realize_language(&l, &ctx.cfg.bounds, &search)?.take(steps + 1).collect::<crate::Result<Vec<_>>>()?;
            stream_out(ctx, &items, out.as_deref(), json!({ "lang": lang }))?;
        }
        BiinfCommand::Embed { lang, bits, out } => {
            let l = load_language(&lang)?;
            let a = OracleBits::parse(&bits)?;
            let st = embed_oracle(&l, &a, &search)?;
            stream_out(ctx, &st.stream, out.as_deref(), json!({ "lang": lang, "bits": a.to_string(), "tuples": to_value(&st.tuples) }))?;
        }
        BiinfCommand::Decode { lang, stream } => {
            let l = load_language(&lang)?;
            let items = parse_stream(&read(&stream)?)?;
            let last = items.last().ok_or_else(|| Failure::Usage("the stream is empty".into()))?;
            let f = FactorEnumeration::length_lex(Language::Regular(l));
            let bits = decode_oracle(&last.right_half(), &f, &search)?;
            ctx.emit(bits.to_string(), json!({ "bits": bits.to_string(), "steps": items.len() }));
        }
        BiinfCommand::Rich { steps } => {
            let items: Vec<StreamItem> = rich_word_stream().take(steps + 1).collect();
            ctx.emit(stream_text(&items), json!({ "stream": stream_json(&items) }));
        }
        BiinfCommand::Interleave { bits, steps } => {
            let a = OracleBits::parse(&bits)?;
            let n = steps.unwrap_or(a.len().max(1) - 1);
            let items: Vec<StreamItem> = interleave_with_oracle(&a).take(n + 1).collect();
            let last = items.last().expect("at least one step");
            let back = biinf::decode_interleaved(&last.right_half(), a.len().min(n + 1))?;
            let text = format!("{}decoded {back}", stream_text(&items));
            ctx.emit(text, json!({ "stream": stream_json(&items), "decoded": back.to_string() }));
        }
        BiinfCommand::Determining { lang, word } => {
            let l = load_language(&lang)?;
            match word {
                Some(w) => {
                    let u = finite_arg(&w)?;
                    let d = determining_check(&l, &u)?;
                    ctx.emit(d.to_string(), json!({ "word": u, "determining": d.to_string() }));
                }
                None => {
                    let d = has_determining_word(&l)?;
                    let text = d.as_ref().map_or("none".to_string(), |u| u.to_string());
                    ctx.emit(text, json!({ "word": d }));
                }
            }
        }
    }
    Ok(())
}

fn stream_out(ctx: &mut Ctx, items: &[StreamItem], out: Option<&Path>, mut meta: Value) -> Res<()> {
    let last = items.last().expect("streams have a first step");
    match out {
        Some(p) => {
            write(p, &stream_text(items))?;
            meta["written"] = json!(p.display().to_string());
            meta["steps"] = json!(items.len());
            meta["last_length"] = json!(last.word.len());
            let text = format!("{} steps written to {}; z{} has length {}", items.len(), p.display(), last.step, last.word.len());
            ctx.emit(text, meta);
        }
        None => {
            meta["stream"] = stream_json(items);
            ctx.emit(stream_text(items), meta);
        }
    }
    Ok(())
}
