//! The `bccs` command line.
//!
//! Exit status: 0 when the relation holds or the proof is valid, 1 when it
//! fails, 2 on usage or configuration errors, 3 on internal inconsistency.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::axioms::{generate_equivalence_axioms, AxiomSet};
use crate::decide_wf::{decide_equiv_wf, decide_preorder_wf_with, wf_base, Verdict};
use crate::error::{Error, Result};
use crate::family::canonical_family;
use crate::lts::{compare, compare_open, Relation, Witness};
use crate::negative::{certify_nonderivability, FamilyId};
use crate::normal::{normalize_with, NormalizeOptions, DEFAULT_MAX_SYMBOLS, NORMALIZE_BASE};
use crate::parse::parse_term;
use crate::proof::{antisym, ProofFile};
use crate::soundness::{fuzz_soundness, FuzzConfig};
use crate::term::{Alphabet, Substitution, Term};
use crate::wif::{derive_ground_wif, WIF_BASE};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bccs", version, about = "Weak failures and weak impossible futures for BCCS")]
pub struct Cli {
    #[command(flatten)]
    pub session: Session,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Session {
    /// Comma-separated action names, or `countable`.
    #[arg(long, global = true, default_value = "a,b")]
    pub alphabet: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Cap on the symbols of a family to be saturated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SYMBOLS)]
    pub max_symbols: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    /// One JSON object per line.
    Structured,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelArg {
    LeqWf,
    Wf,
    WfEq,
    Wif,
    WifEq,
}

impl RelArg {
    fn relation(self) -> Relation {
        match self {
            RelArg::LeqWf => Relation::LeqWf,
            RelArg::Wf => Relation::PreorderWf,
            RelArg::WfEq => Relation::EquivWf,
            RelArg::Wif => Relation::PreorderWif,
            RelArg::WifEq => Relation::EquivWif,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Eq,
    Phi,
    Single,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term and print it back.
    Parse { term: String },
    /// Compute the weak failures normal form.
    Normalize {
        term: String,
        /// Write the derivation to this file.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Decide a relation semantically.
    Check {
        #[arg(long, value_enum, default_value_t = RelArg::Wf)]
        rel: RelArg,
        /// Test open terms on the canonical substitution family.
        #[arg(long)]
        open_test: bool,
        left: String,
        right: String,
    },
    /// Derive `left ≼ right` (or `≈`) and emit the derivation file.
    Prove {
        #[arg(long, value_enum, default_value_t = RelArg::Wf)]
        rel: RelArg,
        #[arg(long)]
        out: Option<PathBuf>,
        left: String,
        right: String,
    },
    /// Check a derivation file against its declared base.
    Verify { file: PathBuf },
    /// Turn a preorder axiomatization into one for its kernel.
    GenAxioms {
        /// `wf-preorder`, or a `+`-joined list of built-in components.
        #[arg(long, default_value = "wf-preorder")]
        base: String,
        /// An axiom file to use instead of `--base`.
        #[arg(long)]
        axioms: Option<PathBuf>,
    },
    /// Certify that a counterexample family member is not derivable.
    Counterexample {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        m: usize,
        /// An axiom file, or a `+`-joined list of built-in components.
        #[arg(long, default_value = "A1-4+WF1-2+WIF3")]
        axioms: String,
        #[arg(long, value_enum)]
        rel: Option<RelArg>,
    },
    /// Check random closed instances of axioms against the semantics.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// An axiom file, or a `+`-joined list of built-in components.
        #[arg(long)]
        axioms: Option<String>,
        #[arg(long, value_enum, default_value_t = RelArg::Wf)]
        rel: RelArg,
        /// Bound on the depth of substitution images.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// What a command produced: an exit status and one or more records.
struct Outcome {
    code: i32,
    human: String,
    record: Map<String, Value>,
}

impl Outcome {
    fn new(code: i32, human: impl Into<String>) -> Self {
        Outcome { code, human: human.into(), record: Map::new() }
    }

    fn field(mut self, key: &str, value: Value) -> Self {
        self.record.insert(key.into(), value);
        self
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let text = e.render().to_string();
            let _ = if code == EXIT_HOLDS { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = cli.session.format;
    match execute(&cli) {
        Ok(o) => {
            let text = match format {
                Format::Human => o.human,
                Format::Structured => {
                    let mut r = o.record;
                    r.insert("exit".into(), json!(o.code));
                    serde_json::to_string(&Value::Object(r)).expect("serializable") + "\n"
                }
            };
            let _ = out.write_all(text.as_bytes());
            o.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = match format {
                Format::Human => writeln!(err, "error: {e}"),
                Format::Structured => writeln!(out, "{}", json!({ "error": e.to_string(), "exit": code })),
            };
            code
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        Error::Proof(_) | Error::MTooSmall { .. } | Error::UnsoundAxiom { .. } => EXIT_FAILS,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let s = &cli.session;
    let alphabet = Alphabet::parse(&s.alphabet)?;
    if s.max_symbols == 0 {
        return Err(Error::Config("--max-symbols must be positive".into()));
    }
    let opts = NormalizeOptions { max_symbols: s.max_symbols };
    match &cli.command {
        Command::Parse { term } => {
            let t = parse_term(term, &alphabet)?;
            let vars: Vec<String> = t.vars().iter().map(|x| x.to_string()).collect();
            Ok(Outcome::new(EXIT_HOLDS, format!("{t}\n"))
                .field("term", json!(t.to_string()))
                .field("depth", json!(t.depth()))
                .field("closed", json!(t.is_closed()))
                .field("vars", json!(vars)))
        }
        Command::Normalize { term, proof } => {
            let t = parse_term(term, &alphabet)?;
            let (nf, d) = normalize_with(&t, &alphabet, opts)?;
            let rendered = nf.render();
            let mut human = format!("{rendered}\n");
            let mut o = Outcome::new(EXIT_HOLDS, "").field("normal-form", json!(rendered.to_string()));
            if let crate::normal::NormalForm::Tau { family, .. } = &nf {
                human.push_str(&format!("family: {family}\n"));
                o = o.field("family", json!(family.to_string()));
            }
            if let Some(path) = proof {
                let file = ProofFile { alphabet: alphabet.clone(), base: NORMALIZE_BASE.into(), proof: d };
                write_file(path, &file.to_text())?;
                human.push_str(&format!("derivation: {}\n", path.display()));
                o = o.field("derivation", json!(path.display().to_string()));
            }
            o.human = human;
            Ok(o)
        }
        Command::Check { rel, open_test, left, right } => {
            let t = parse_term(left, &alphabet)?;
            let u = parse_term(right, &alphabet)?;
            let relation = rel.relation();
            let c = if t.is_closed() && u.is_closed() {
                compare(&t, &u, relation)?
            } else if *open_test {
                compare_open(&t, &u, relation, &canonical_family(&t, &u, &alphabet))
            } else {
                return Err(Error::Config("open terms need --open-test".into()));
            };
            let mut human = format!("{}\n", c.holds);
            let mut o = Outcome::new(if c.holds { EXIT_HOLDS } else { EXIT_FAILS }, "")
                .field("relation", json!(relation.name()))
                .field("holds", json!(c.holds));
            if let Some(w) = &c.witness {
                human.push_str(&format!("witness: {w}\n"));
                o = o.field("witness", json!(w.to_string()));
            }
            o.human = human;
            Ok(o)
        }
        Command::Prove { rel, out, left, right } => {
            let t = parse_term(left, &alphabet)?;
            let u = parse_term(right, &alphabet)?;
            let (verdict, base) = prove(*rel, &t, &u, &alphabet, opts)?;
            match verdict {
                Verdict::Derivable(d) => {
                    let file = ProofFile { alphabet: alphabet.clone(), base: base.to_string(), proof: d };
                    let text = file.to_text();
                    let o = Outcome::new(EXIT_HOLDS, "")
                        .field("derivable", json!(true))
                        .field("conclusion", json!(file.proof.conclusion.to_string()));
                    match out {
                        Some(path) => {
                            write_file(path, &text)?;
                            let human = format!("derivable: {}\nderivation: {}\n", file.proof.conclusion, path.display());
                            Ok(Outcome { human, ..o }.field("derivation", json!(path.display().to_string())))
                        }
                        None => {
                            let proof: Value = serde_json::from_str(&text).expect("own output");
                            Ok(Outcome { human: text, ..o }.field("proof", proof))
                        }
                    }
                }
                Verdict::NotDerivable { subst, witness } => Ok(not_derivable(&subst, &witness)),
            }
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Config(format!("{}: {e}", file.display())))?;
            let pf = ProofFile::from_text(&text)?;
            let st = pf.check()?;
            Ok(Outcome::new(EXIT_HOLDS, format!("valid: {st}\nbase: {}\n", pf.base))
                .field("valid", json!(true))
                .field("conclusion", json!(st.to_string()))
                .field("base", json!(pf.base)))
        }
        Command::GenAxioms { base, axioms } => {
            let e = match axioms {
                Some(path) => load_axioms(&path.display().to_string(), &alphabet)?,
                None if base == "wf-preorder" => {
                    let spec = if alphabet.is_finite() { "A1-4+WF1-3+WF_A" } else { "A1-4+WF1-3" };
                    AxiomSet::builtin(spec, &alphabet)?
                }
                None => AxiomSet::builtin(base, &alphabet)?,
            };
            let generated = generate_equivalence_axioms(&e)?;
            let mut human = format!("alphabet: {alphabet}\n");
            let mut list = Vec::new();
            for (name, st) in &generated {
                human.push_str(&format!("{name}: {st}\n"));
                list.push(json!({ "name": name, "statement": st.to_string() }));
            }
            Ok(Outcome::new(EXIT_HOLDS, human).field("axioms", Value::Array(list)))
        }
        Command::Counterexample { family, m, axioms, rel } => {
            let id = match family {
                FamilyArg::Eq => FamilyId::Equation,
                FamilyArg::Phi => FamilyId::Multiaction,
                FamilyArg::Single => FamilyId::Singleton,
            };
            let e = load_axioms(axioms, &alphabet)?;
            let relation = rel.map(RelArg::relation).unwrap_or_else(|| id.relation());
            match certify_nonderivability(id, *m, &e, relation) {
                Ok(cert) => {
                    let report = cert.to_report();
                    Ok(Outcome::new(EXIT_HOLDS, report.clone()).field("certificate", report_record(&report)))
                }
                Err(e @ (Error::MTooSmall { .. } | Error::UnsoundAxiom { .. })) => {
                    Ok(Outcome::new(EXIT_FAILS, format!("valid: false\nreason: {e}\n"))
                        .field("valid", json!(false))
                        .field("reason", json!(e.to_string())))
                }
                Err(e) => Err(e),
            }
        }
        Command::Fuzz { samples, seed, axioms, rel, depth } => {
            let relation = rel.relation();
            let default = match relation {
                Relation::PreorderWif | Relation::EquivWif => "A1-4+WF1-2+WIF3",
                Relation::EquivWf => "A1-4+WFE+TAB-AUX",
                _ if alphabet.is_finite() => "A1-4+WF1-3+WF_A+D1-9",
                _ => "A1-4+WF1-3+D1-9",
            };
            let e = load_axioms(axioms.as_deref().unwrap_or(default), &alphabet)?;
            if !alphabet.is_finite() {
                return Err(Error::Config("fuzzing needs a finite alphabet".into()));
            }
            let cfg = FuzzConfig { samples: *samples, seed: *seed, image_depth: *depth, ..FuzzConfig::default() };
            let report = fuzz_soundness(&e, relation, &cfg)?;
            let code = if report.violations() == 0 { EXIT_HOLDS } else { EXIT_FAILS };
            let per: Vec<Value> = report
                .axioms
                .iter()
                .map(|a| json!({ "axiom": a.name, "samples": a.samples, "violations": a.violations.len() }))
                .collect();
            Ok(Outcome::new(code, format!("{report}\n"))
                .field("axioms", Value::Array(per))
                .field("samples", json!(report.samples()))
                .field("violations", json!(report.violations())))
        }
    }
}

fn prove(rel: RelArg, t: &Term, u: &Term, alphabet: &Alphabet, opts: NormalizeOptions) -> Result<(Verdict, &'static str)> {
    match rel {
        RelArg::Wf => Ok((decide_preorder_wf_with(t, u, alphabet, opts)?, wf_base(alphabet))),
        RelArg::WfEq => {
            let (up, down) = decide_equiv_wf(t, u, alphabet)?;
            Ok((both_ways(up, down), wf_base(alphabet)))
        }
        RelArg::Wif => Ok((derive_ground_wif(t, u, alphabet)?, WIF_BASE)),
        RelArg::WifEq => {
            let up = derive_ground_wif(t, u, alphabet)?;
            let down = derive_ground_wif(u, t, alphabet)?;
            Ok((both_ways(up, down), WIF_BASE))
        }
        RelArg::LeqWf => Err(Error::Config("no derivations are produced for leq-wf; use wf".into())),
    }
}

fn both_ways(up: Verdict, down: Verdict) -> Verdict {
    match (up, down) {
        (Verdict::Derivable(a), Verdict::Derivable(b)) => Verdict::Derivable(antisym(a, b)),
        (Verdict::NotDerivable { subst, witness }, _) => Verdict::NotDerivable { subst, witness },
        (_, Verdict::NotDerivable { subst, witness }) => {
            Verdict::NotDerivable { subst, witness: Witness::Converse(Box::new(witness)) }
        }
    }
}

fn not_derivable(subst: &Substitution, witness: &Witness) -> Outcome {
    let mut human = String::from("not derivable\n");
    let mut o = Outcome::new(EXIT_FAILS, "").field("derivable", json!(false));
    if !subst.is_empty() {
        let inline = subst.to_string().replace('\n', ", ");
        human.push_str(&format!("under: {inline}\n"));
        o = o.field("substitution", json!(inline));
    }
    human.push_str(&format!("witness: {witness}\n"));
    o = o.field("witness", json!(witness.to_string()));
    o.human = human;
    o
}

/// An axiom file if `spec` names an existing file, otherwise built-in
/// components.
fn load_axioms(spec: &str, alphabet: &Alphabet) -> Result<AxiomSet> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{spec}: {e}")))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        AxiomSet::from_text(name, &text, alphabet)
    } else {
        AxiomSet::builtin(spec, alphabet)
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn report_record(report: &str) -> Value {
    let m: Map<String, Value> = report
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    Value::Object(m)
}
