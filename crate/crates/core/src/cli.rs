//! The `nhl` command line: `verify`, `parse`, `paraphrase` and `wp`.
//!
//! [`run`] takes its streams as arguments so that sessions, including
//! interactive ones, can be scripted from tests.
//!
//! Exit codes: 0 every VC Valid, 1 some VC Invalid, 2 some VC Unknown (or a
//! line the user asked to rephrase) and none Invalid, 3 bad input or an
//! ambiguous parse outside interactive mode.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::discharge::{decide_formula, export_smtlib, DecideOptions, Verdict};
use crate::hoare::{build_triple, generate_vcs, load_relation, wp, LfplRelation};
use crate::imp::{parse_program, Stmt};
use crate::kb::{load_kb, program_digest, transfer, KnowledgeBase, ProofRecord};
use crate::lambda::{parse_closed_term, typecheck, Type};
use crate::paraphrase::{disambiguate, render, render_spec, Outcome};
use crate::semparse::{
    load_grammar, parse_spec_file, Grammar, ScoredSpec, SpecForm, SpecLine, BUILTIN_LEXICON,
    BUILTIN_RULES, DEFAULT_K, SCORE_EPS,
};

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nhl", version, about = "Verify programs against English specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse every line of a spec file, build triples and discharge their VCs.
    Verify(RunConfig),
    /// Print the ranked logical forms of a sentence (or of every spec line).
    Parse {
        #[command(flatten)]
        config: RunConfig,
        sentence: Vec<String>,
    },
    /// Render a logical form, given in term syntax, as English.
    Paraphrase {
        #[command(flatten)]
        config: RunConfig,
        term: Vec<String>,
    },
    /// Print the weakest precondition of a program and its loop VCs.
    Wp {
        #[command(flatten)]
        config: RunConfig,
        /// Postcondition in term syntax.
        #[arg(long)]
        post: String,
    },
}

/// Options shared by every command.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Rules file; the shipped rules when absent.
    #[arg(long)]
    pub grammar: Option<PathBuf>,
    /// Lexicon file; the shipped lexicon when absent.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub program: Option<PathBuf>,
    #[arg(long)]
    pub relation: Option<PathBuf>,
    #[arg(long)]
    pub kb: Option<PathBuf>,
    /// Candidate parses kept per line.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Integer range searched for counterexamples.
    #[arg(long, default_value_t = 64)]
    pub bound: i128,
    /// Confirm each parse with "Did you mean" prompts.
    #[arg(long)]
    pub interactive: bool,
    /// Write one SMT-LIB script per VC into the output directory.
    #[arg(long)]
    pub emit_smt: bool,
    /// Where proof records and SMT-LIB scripts go.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory of proof records to reuse before discharging anything.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, InputError> {
    p.as_deref()
        .ok_or_else(|| InputError(format!("--{flag} is required")))
}

impl RunConfig {
    fn check(&self) -> Result<(), InputError> {
        if self.k < 1 {
            return Err(InputError("--k must be at least 1".into()));
        }
        if self.bound < 1 {
            return Err(InputError("--bound must be at least 1".into()));
        }
        Ok(())
    }

    fn grammar(&self) -> Result<Grammar, InputError> {
        let lex = match &self.lexicon {
            Some(p) => read(p)?,
            None => BUILTIN_LEXICON.to_string(),
        };
        let rules = match &self.grammar {
            Some(p) => read(p)?,
            None => BUILTIN_RULES.to_string(),
        };
        Ok(load_grammar(&lex, &rules)?)
    }

    fn program(&self) -> Result<Stmt, InputError> {
        let path = required(&self.program, "program")?;
        parse_program(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn relation(&self, g: &Grammar) -> Result<LfplRelation, InputError> {
        let path = required(&self.relation, "relation")?;
        load_relation(&read(path)?, &g.signature)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn knowledge(&self, g: &Grammar) -> Result<KnowledgeBase, InputError> {
        match &self.kb {
            Some(path) => load_kb(&read(path)?, &g.signature)
                .map_err(|e| InputError(format!("{}: {e}", path.display()))),
            None => Ok(KnowledgeBase::default()),
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("nhl-out"))
    }
}

/// Streams used by a run.
pub struct Io<'a> {
    pub input: &'a mut dyn BufRead,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, S>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_VALID };
            let _ = write!(io.err, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify(c) => cmd_verify(c, io),
        Command::Parse { config, sentence } => cmd_parse(config, &sentence.join(" "), io),
        Command::Paraphrase { config, term } => cmd_paraphrase(config, &term.join(" "), io),
        Command::Wp { config, post } => cmd_wp(config, post, io),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn cmd_parse(c: &RunConfig, sentence: &str, io: &mut Io<'_>) -> Result<i32, InputError> {
    c.check()?;
    let g = c.grammar()?;
    let lines = if sentence.trim().is_empty() {
        parse_spec_file(&read(required(&c.spec, "spec")?)?)
    } else {
        vec![SpecLine {
            name: String::new(),
            text: sentence.to_string(),
            line: 0,
        }]
    };
    for l in &lines {
        let results = g
            .parse_spec(&l.text, c.k)
            .map_err(|e| InputError(prefixed(&l.name, e)))?;
        for r in results {
            let mut row = Vec::new();
            if !l.name.is_empty() {
                row.push(l.name.clone());
            }
            row.push(format!("{:.3}", r.score));
            row.push(r.form.kind().to_string());
            row.extend(r.form.terms().iter().map(|t| t.to_string()));
            writeln!(io.out, "{}", row.join("\t"))?;
        }
    }
    Ok(EXIT_VALID)
}

fn prefixed(name: &str, e: impl std::fmt::Display) -> String {
    if name.is_empty() {
        e.to_string()
    } else {
        format!("{name}: {e}")
    }
}

fn cmd_paraphrase(c: &RunConfig, src: &str, io: &mut Io<'_>) -> Result<i32, InputError> {
    c.check()?;
    let g = c.grammar()?;
    let t = parse_closed_term(src, &g.signature)?;
    let ty = typecheck(&t, &g.signature)?;
    if ty != Type::Bool {
        return Err(InputError(format!("expected a formula, got a term of type {ty}")));
    }
    let t = crate::lambda::normalize(&t)?;
    writeln!(io.out, "{}", render(&t, &g)?)?;
    Ok(EXIT_VALID)
}

fn cmd_wp(c: &RunConfig, post: &str, io: &mut Io<'_>) -> Result<i32, InputError> {
    c.check()?;
    let g = c.grammar()?;
    let program = c.program()?;
    let q = parse_closed_term(post, &g.signature)?;
    if typecheck(&q, &g.signature)? != Type::Bool {
        return Err(InputError("the postcondition must be a formula".into()));
    }
    let (pre, vcs) = wp(&program, &q);
    writeln!(io.out, "wp\t{pre}")?;
    for vc in vcs {
        writeln!(io.out, "{}\t{}", vc.provenance, vc.formula)?;
    }
    Ok(EXIT_VALID)
}

/// Chooses among ranked readings, asking when interactive.
fn choose(
    c: &RunConfig,
    g: &Grammar,
    name: &str,
    cands: Vec<ScoredSpec>,
    io: &mut Io<'_>,
) -> Result<Option<SpecForm>, InputError> {
    if !c.interactive {
        if cands.len() > 1 && (cands[0].score - cands[1].score).abs() <= SCORE_EPS {
            return Err(InputError(format!("{name}: ambiguous; rerun interactive")));
        }
        return Ok(cands.into_iter().next().map(|s| s.form));
    }
    let sentences: Vec<String> = cands
        .iter()
        .map(|s| render_spec(&s.form, g).unwrap_or_else(|_| s.form.to_string()))
        .collect();
    let mut failed = None;
    let transcript = disambiguate(&sentences, |prompt| {
        if let Err(e) = writeln!(io.err, "{name}: {prompt}") {
            failed = Some(e);
            return false;
        }
        let mut answer = String::new();
        match io.input.read_line(&mut answer) {
            Ok(_) => matches!(answer.trim().to_lowercase().as_str(), "y" | "yes"),
            Err(e) => {
                failed = Some(e);
                false
            }
        }
    });
    if let Some(e) = failed {
        return Err(e.into());
    }
    Ok(match transcript.outcome {
        Outcome::Selected(i) => cands.into_iter().nth(i).map(|s| s.form),
        Outcome::RephraseRequest => {
            writeln!(io.err, "{name}: no reading accepted; please rephrase. Skipping.")?;
            None
        }
    })
}

fn load_records(dir: &Path, g: &Grammar) -> Result<Vec<(String, ProofRecord)>, InputError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| InputError(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let rec = ProofRecord::from_text(&read(&p)?, &g.signature)
                .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            Ok((name, rec))
        })
        .collect()
}

fn cmd_verify(c: &RunConfig, io: &mut Io<'_>) -> Result<i32, InputError> {
    c.check()?;
    let g = c.grammar()?;
    let lines = parse_spec_file(&read(required(&c.spec, "spec")?)?);
    let program = c.program()?;
    let relation = c.relation(&g)?;
    let kb = c.knowledge(&g)?;
    let records = match &c.records {
        Some(dir) => load_records(dir, &g)?,
        None => Vec::new(),
    };
    let digest = program_digest(&program);
    let opts = DecideOptions {
        bound: c.bound,
        ..DecideOptions::default()
    };
    let out_dir = c.out_dir();
    if c.emit_smt || c.out.is_some() {
        fs::create_dir_all(&out_dir)
            .map_err(|e| InputError(format!("cannot create {}: {e}", out_dir.display())))?;
    }

    let (mut input_error, mut invalid, mut unknown) = (false, false, false);
    for line in &lines {
        let cands = match g.parse_spec(&line.text, c.k) {
            Ok(cs) => cs,
            Err(e) => {
                writeln!(io.err, "error: {}: {e}", line.name)?;
                input_error = true;
                continue;
            }
        };
        let form = match choose(c, &g, &line.name, cands, io) {
            Ok(Some(f)) => f,
            Ok(None) => {
                unknown = true;
                continue;
            }
            Err(InputError(msg)) => {
                writeln!(io.err, "error: {msg}")?;
                input_error = true;
                continue;
            }
        };

        if let Some((file, rec)) = records
            .iter()
            .find(|(_, r)| transfer(r, &kb, &form, &relation, &digest) == Ok(true))
        {
            for (prov, _) in &rec.verdicts {
                writeln!(io.out, "{}\t{prov}\tValid\ttransferred from {file}", line.name)?;
            }
            continue;
        }

        let triple = match build_triple(&kb.normalize_spec(&form), &kb.normalize_relation(&relation), &program) {
            Ok(t) => t,
            Err(e) => {
                writeln!(io.err, "error: {}: {e}", line.name)?;
                input_error = true;
                continue;
            }
        };
        let mut verdicts = Vec::new();
        for (i, vc) in generate_vcs(&triple).into_iter().enumerate() {
            if c.emit_smt {
                let path = out_dir.join(format!("{}.vc{}.smt2", line.name, i + 1));
                fs::write(&path, export_smtlib(&vc))
                    .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
            }
            let v = decide_formula(&vc.formula, &kb, &opts);
            let detail = match &v {
                Verdict::Valid => String::new(),
                Verdict::Invalid(m) => m.to_string(),
                Verdict::Unknown(why) => why.clone(),
            };
            invalid |= v.is_invalid();
            unknown |= v.is_unknown();
            writeln!(io.out, "{}\t{}\t{}\t{detail}", line.name, vc.provenance, v.name())?;
            verdicts.push((vc.provenance, v.name().to_string()));
        }
        if c.out.is_some() {
            let rec = ProofRecord::new(form, relation.clone(), &program, verdicts);
            let path = out_dir.join(format!("{}.proof", line.name));
            fs::write(&path, rec.to_text())
                .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(if input_error {
        EXIT_INPUT
    } else if invalid {
        EXIT_INVALID
    } else if unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_VALID
    })
}
