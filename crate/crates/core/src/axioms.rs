//! (In)equations, the built-in axiom tables and named axiom sets.
//!
//! Schemas that range over labels or over the alphabet are instantiated on
//! demand from bracketed names: `WF1[a]`, `RS[tau,b]`, `D5[a,3]`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ProofError, Result};
use crate::parse::parse_terms;
use crate::term::{ac_equal, canonicalize, is_action_name, Action, Alphabet, Term, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `t ≼ u`
    Leq,
    /// `t ≈ u`
    Eq,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Leq => "<=",
            Kind::Eq => "==",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement {
    pub kind: Kind,
    pub lhs: Term,
    pub rhs: Term,
}

impl Statement {
    pub fn leq(lhs: Term, rhs: Term) -> Self {
        Statement { kind: Kind::Leq, lhs, rhs }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Statement { kind: Kind::Eq, lhs, rhs }
    }

    pub fn depth(&self) -> usize {
        self.lhs.depth().max(self.rhs.depth())
    }

    pub fn vars(&self) -> Vec<crate::term::Var> {
        let mut out = Vec::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }

    /// Same kind and both sides equal modulo A1, A2, A4.
    pub fn ac_matches(&self, other: &Statement) -> bool {
        self.kind == other.kind && ac_equal(&self.lhs, &other.lhs) && ac_equal(&self.rhs, &other.rhs)
    }

    /// Same kind and both sides equal modulo A1-4.
    pub fn canonically_equal(&self, other: &Statement) -> bool {
        self.kind == other.kind
            && canonicalize(&self.lhs) == canonicalize(&other.lhs)
            && canonicalize(&self.rhs) == canonicalize(&other.rhs)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.kind.symbol(), self.rhs)
    }
}

/// Parses `lhs <= rhs` or `lhs == rhs`.
pub fn parse_statement(text: &str, alphabet: &Alphabet) -> Result<Statement> {
    let (kind, at, width) = match (text.find("<="), text.find("==")) {
        (Some(i), None) => (Kind::Leq, i, 2),
        (None, Some(i)) => (Kind::Eq, i, 2),
        _ => return Err(Error::Format(format!("expected exactly one of `<=` or `==` in `{text}`"))),
    };
    let terms = parse_terms(&[&text[..at], &text[at + width..]], alphabet)?;
    let mut it = terms.into_iter();
    let lhs = it.next().expect("two terms");
    let rhs = it.next().expect("two terms");
    Ok(Statement { kind, lhs, rhs })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Param {
    /// an action of A
    Act,
    /// an action or tau
    Label,
    /// a positive size
    Size,
}

struct SchemaInfo {
    name: &'static str,
    params: &'static [Param],
    finite_only: bool,
}

const SCHEMAS: &[SchemaInfo] = &[
    SchemaInfo { name: "A1", params: &[], finite_only: false },
    SchemaInfo { name: "A2", params: &[], finite_only: false },
    SchemaInfo { name: "A3", params: &[], finite_only: false },
    SchemaInfo { name: "A4", params: &[], finite_only: false },
    SchemaInfo { name: "WF1", params: &[Param::Act], finite_only: false },
    SchemaInfo { name: "WF2", params: &[], finite_only: false },
    SchemaInfo { name: "WF3", params: &[], finite_only: false },
    SchemaInfo { name: "WF_A", params: &[], finite_only: true },
    SchemaInfo { name: "N1", params: &[Param::Label], finite_only: false },
    SchemaInfo { name: "N2", params: &[], finite_only: false },
    SchemaInfo { name: "N3", params: &[Param::Label], finite_only: false },
    SchemaInfo { name: "E1", params: &[], finite_only: false },
    SchemaInfo { name: "D1", params: &[], finite_only: false },
    SchemaInfo { name: "D2", params: &[], finite_only: false },
    SchemaInfo { name: "D3", params: &[Param::Act], finite_only: false },
    SchemaInfo { name: "D4", params: &[], finite_only: false },
    SchemaInfo { name: "D5", params: &[Param::Act, Param::Size], finite_only: false },
    SchemaInfo { name: "D6", params: &[], finite_only: false },
    SchemaInfo { name: "D7", params: &[], finite_only: false },
    SchemaInfo { name: "D8", params: &[], finite_only: false },
    SchemaInfo { name: "D9", params: &[Param::Act, Param::Size], finite_only: false },
    SchemaInfo { name: "WIF3", params: &[], finite_only: false },
    SchemaInfo { name: "WFE2", params: &[], finite_only: false },
    SchemaInfo { name: "WFE3", params: &[Param::Act], finite_only: false },
    SchemaInfo { name: "WFE_A", params: &[], finite_only: true },
    SchemaInfo { name: "WF2^a", params: &[], finite_only: false },
    SchemaInfo { name: "WF2^b", params: &[Param::Label], finite_only: false },
    SchemaInfo { name: "WF3^a", params: &[], finite_only: false },
    SchemaInfo { name: "WF3^b", params: &[Param::Label], finite_only: false },
    SchemaInfo { name: "RS", params: &[Param::Label, Param::Label], finite_only: false },
    SchemaInfo { name: "WF_A^a", params: &[], finite_only: true },
    SchemaInfo { name: "WF_A^b", params: &[Param::Label], finite_only: true },
];

fn schema_info(name: &str) -> Option<&'static SchemaInfo> {
    SCHEMAS.iter().find(|s| s.name == name)
}

/// Splits `D5[a,3]` into `("D5", ["a", "3"])`.
pub fn split_name(name: &str) -> (&str, Vec<&str>) {
    match name.find('[') {
        Some(i) if name.ends_with(']') => {
            let args = name[i + 1..name.len() - 1].split(',').map(str::trim).collect();
            (&name[..i], args)
        }
        _ => (name, Vec::new()),
    }
}

pub fn instance_name(base: &str, args: &[String]) -> String {
    if args.is_empty() {
        base.to_string()
    } else {
        format!("{base}[{}]", args.join(","))
    }
}

fn sum_var_name(a: &Action) -> String {
    format!("x_{}", a.as_str().replace('#', "h"))
}

/// `a.x_a + b.x_b + ...` over the whole (finite) alphabet.
fn alphabet_sum(alphabet: &Alphabet) -> String {
    let parts: Vec<String> = alphabet.actions().iter().map(|a| format!("{a}.{}", sum_var_name(a))).collect();
    parts.join(" + ")
}

fn schema_text(base: &str, args: &[&str], alphabet: &Alphabet) -> String {
    let arg = |i: usize| args[i];
    let size = |i: usize| args[i].parse::<usize>().expect("validated size");
    let s = || alphabet_sum(alphabet);
    match base {
        "A1" => "x + y == y + x".into(),
        "A2" => "(x + y) + z == x + (y + z)".into(),
        "A3" => "x + x == x".into(),
        "A4" => "x + 0 == x".into(),
        "WF1" => format!("{0}.x + {0}.y == {0}.(tau.x + tau.y)", arg(0)),
        "WF2" => "tau.(x + y) <= tau.x + y".into(),
        "WF3" => "x <= tau.x + y".into(),
        "WF_A" => format!("{0} <= {0} + y", s()),
        "N1" => format!("{0}.x + {0}.y == {0}.(tau.x + tau.y)", arg(0)),
        "N2" => "tau.(x + y) <= x + tau.y".into(),
        "N3" => format!("{0}.x + tau.({0}.y + z) == tau.({0}.x + {0}.y + z)", arg(0)),
        "E1" => "x <= tau.x + tau.y".into(),
        "D1" => "tau.(x + y) + x == tau.(x + y)".into(),
        "D2" => "tau.(tau.x + y) == tau.x + y".into(),
        "D3" | "WFE3" => format!("{0}.x + tau.({0}.y + z) == tau.({0}.x + {0}.y + z)", arg(0)),
        "D4" => "tau.x <= tau.x + y".into(),
        "D5" => {
            let a = arg(0);
            let n = size(1);
            let lhs: Vec<String> = (1..=n).map(|i| format!("{a}.x{i}")).collect();
            let rhs: Vec<String> = (1..=n).map(|i| format!("tau.x{i}")).collect();
            format!("{} == {a}.({})", lhs.join(" + "), rhs.join(" + "))
        }
        "D6" => "tau.x + y == tau.x + tau.(x + y)".into(),
        "D7" => "tau.x + tau.y == tau.x + tau.(x + y) + tau.y".into(),
        "D8" => "tau.x + tau.(x + y + z) == tau.x + tau.(x + y) + tau.(x + y + z)".into(),
        "D9" => {
            let a = arg(0);
            let n = size(1);
            let t: Vec<String> = (1..=n).map(|i| format!("tau.t{i}")).collect();
            let t = t.join(" + ");
            let lhs: Vec<String> = (1..=n).map(|i| format!("tau.({a}.t{i} + y{i})")).collect();
            let rhs: Vec<String> = (1..=n).map(|i| format!("tau.({a}.({t}) + y{i})")).collect();
            format!("{} == {}", lhs.join(" + "), rhs.join(" + "))
        }
        "WIF3" => "x <= tau.x".into(),
        "WFE2" => "tau.(x + y) + tau.x == tau.x + y".into(),
        "WFE_A" => format!("tau.({0} + z) + tau.({0} + y + z) == tau.({0} + y + z)", s()),
        "WF2^a" => "tau.(x + y) + tau.x + y == tau.x + y".into(),
        "WF2^b" => format!("{0}.(tau.(x + y) + z) + {0}.(tau.x + y + z) == {0}.(tau.x + y + z)", arg(0)),
        "WF3^a" => "x + tau.x + y == tau.x + y".into(),
        "WF3^b" => format!("{0}.(x + z) + {0}.(tau.x + y + z) == {0}.(tau.x + y + z)", arg(0)),
        "RS" => format!("{0}.({1}.x + z) + {0}.({1}.x + {1}.y + z) == {0}.({1}.x + {1}.y + z)", arg(0), arg(1)),
        "WF_A^a" => format!("{0} + {0} + y == {0} + y", s()),
        "WF_A^b" => format!("{1}.({0} + z) + {1}.({0} + y + z) == {1}.({0} + y + z)", s(), arg(0)),
        other => unreachable!("schema `{other}` has no text"),
    }
}

/// Instantiates a built-in axiom or derived law by its full name.
pub fn builtin_statement(name: &str, alphabet: &Alphabet) -> Result<Statement> {
    let (base, args) = split_name(name);
    let info = schema_info(base).ok_or_else(|| Error::UnknownAxiom(name.to_string()))?;
    if info.finite_only && !alphabet.is_finite() {
        return Err(Error::Config(format!("`{base}` ranges over the whole alphabet and needs a finite one")));
    }
    if args.len() != info.params.len() {
        return Err(Error::UnknownAxiom(format!("{name} (expects {} parameter(s))", info.params.len())));
    }
    for (p, a) in info.params.iter().zip(&args) {
        let ok = match p {
            Param::Size => a.parse::<usize>().is_ok_and(|n| n >= 1),
            Param::Label if *a == TAU => true,
            Param::Label | Param::Act => is_action_name(a) && alphabet.contains(&Action::new(a)),
        };
        if !ok {
            return Err(Error::UnknownAxiom(format!("{name} (bad parameter `{a}`)")));
        }
    }
    let text = schema_text(base, &args, alphabet);
    parse_statement(&text, &Alphabet::countable())
}

/// Expands the components of a set specification like `A1-4+WF1-3+WF_A`.
fn expand_component(component: &str, alphabet: &Alphabet) -> Result<Vec<&'static str>> {
    let finite = alphabet.is_finite();
    let names: Vec<&'static str> = match component {
        "A1-4" => vec!["A1", "A2", "A3", "A4"],
        "WF1-3" => vec!["WF1", "WF2", "WF3"],
        "WF1-2" => vec!["WF1", "WF2"],
        "N-E" => vec!["N1", "N2", "N3", "E1"],
        "D1-9" => vec!["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9"],
        "WFE" => {
            let mut v = vec!["WF1", "WFE2", "WFE3"];
            if finite {
                v.push("WFE_A");
            }
            v
        }
        "TAB-AUX" => {
            let mut v = vec!["WF1", "WF2^a", "WF2^b", "WF3^a", "WF3^b", "RS"];
            if finite {
                v.extend(["WF_A^a", "WF_A^b"]);
            }
            v
        }
        single => match schema_info(single) {
            Some(info) => vec![info.name],
            None => return Err(Error::UnknownAxiom(single.to_string())),
        },
    };
    for n in &names {
        let info = schema_info(n).expect("known schema");
        if info.finite_only && !finite {
            return Err(Error::Config(format!("`{n}` needs a finite alphabet")));
        }
    }
    Ok(names)
}

/// A named axiom: either a built-in schema or a user-supplied statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Member {
    Builtin(&'static str),
    Custom { name: String, statement: Statement },
}

impl Member {
    pub fn name(&self) -> &str {
        match self {
            Member::Builtin(n) => n,
            Member::Custom { name, .. } => name,
        }
    }
}

/// A finite axiomatization `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSet {
    name: String,
    members: Vec<Member>,
    alphabet: Alphabet,
}

impl AxiomSet {
    /// Built-in set from `+`-joined components, e.g. `A1-4+WF1-3+WF_A`.
    pub fn builtin(spec: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut set = AxiomSet { name: spec.to_string(), members: Vec::new(), alphabet: alphabet.clone() };
        for comp in spec.split('+').map(str::trim).filter(|c| !c.is_empty()) {
            for n in expand_component(comp, alphabet)? {
                set.push(Member::Builtin(n));
            }
        }
        Ok(set)
    }

    /// One axiom per line: `NAME: lhs <= rhs` or `NAME: lhs == rhs`. A line
    /// without a relation symbol names built-in components. `#` starts a
    /// comment, and an `alphabet:` line is skipped.
    pub fn from_text(name: &str, text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut set = AxiomSet { name: name.to_string(), members: Vec::new(), alphabet: alphabet.clone() };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("alphabet:") {
                continue;
            }
            if !line.contains("<=") && !line.contains("==") {
                for comp in line.split('+').map(str::trim) {
                    for n in expand_component(comp, alphabet)? {
                        set.push(Member::Builtin(n));
                    }
                }
                continue;
            }
            let (label, body) = line
                .split_once(':')
                .ok_or_else(|| Error::Format(format!("line {}: expected `NAME: statement`", lineno + 1)))?;
            let statement = parse_statement(body, alphabet)?;
            set.push(Member::Custom { name: label.trim().to_string(), statement });
        }
        Ok(set)
    }

    fn push(&mut self, m: Member) {
        if !self.members.iter().any(|x| x.name() == m.name()) {
            self.members.push(m);
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn union(&self, other: &AxiomSet) -> AxiomSet {
        let mut out = self.clone();
        out.name = format!("{}+{}", self.name, other.name);
        for m in &other.members {
            out.push(m.clone());
        }
        out
    }

    pub fn contains_base(&self, base: &str) -> bool {
        self.members.iter().any(|m| m.name() == base)
    }

    /// The statement named `name`, instantiating schemas as needed.
    pub fn lookup(&self, name: &str) -> std::result::Result<Statement, ProofError> {
        if let Some(Member::Custom { statement, .. }) = self.members.iter().find(|m| m.name() == name) {
            return Ok(statement.clone());
        }
        let (base, _) = split_name(name);
        if !self.members.iter().any(|m| matches!(m, Member::Builtin(b) if *b == base)) {
            return Err(ProofError::UnknownAxiom(name.to_string()));
        }
        builtin_statement(name, &self.alphabet).map_err(|e| ProofError::UnknownAxiom(format!("{name}: {e}")))
    }

    /// Named instances of every member. Label parameters range over tau and
    /// `actions`; size parameters over `sizes`.
    pub fn instances(&self, actions: &[Action], sizes: &[usize]) -> Vec<(String, Statement)> {
        let mut out = Vec::new();
        for m in &self.members {
            match m {
                Member::Custom { name, statement } => out.push((name.clone(), statement.clone())),
                Member::Builtin(base) => {
                    let info = schema_info(base).expect("known schema");
                    let mut choices: Vec<Vec<String>> = vec![Vec::new()];
                    for p in info.params {
                        let opts: Vec<String> = match p {
                            Param::Act => actions.iter().map(|a| a.to_string()).collect(),
                            Param::Label => {
                                std::iter::once(TAU.to_string()).chain(actions.iter().map(|a| a.to_string())).collect()
                            }
                            Param::Size => sizes.iter().map(|n| n.to_string()).collect(),
                        };
                        choices = choices
                            .into_iter()
                            .flat_map(|prefix| {
                                opts.iter().map(move |o| {
                                    let mut v = prefix.clone();
                                    v.push(o.clone());
                                    v
                                })
                            })
                            .collect();
                    }
                    for args in choices {
                        let name = instance_name(base, &args);
                        if let Ok(st) = builtin_statement(&name, &self.alphabet) {
                            out.push((name, st));
                        }
                    }
                }
            }
        }
        out
    }

    /// Instances over the session alphabet, or over `hint` in countable mode.
    pub fn session_instances(&self, hint: &[Action], sizes: &[usize]) -> Vec<(String, Statement)> {
        if self.alphabet.is_finite() {
            self.instances(self.alphabet.actions(), sizes)
        } else {
            self.instances(hint, sizes)
        }
    }

    /// `max {|t|, |u| : t ≼ u or t ≈ u in E}`.
    pub fn max_depth(&self) -> usize {
        let probe = match self.alphabet.actions().first() {
            Some(a) => a.clone(),
            None => self.alphabet.fresh_action(&BTreeSet::new()),
        };
        let mut d = 0;
        for (_, st) in self.instances(&[probe], &[2]) {
            d = d.max(st.depth());
        }
        d
    }

    /// The equational members only.
    pub fn equations_kernel(&self) -> (AxiomSet, Vec<String>) {
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for m in &self.members {
            let kind = match m {
                Member::Custom { statement, .. } => statement.kind,
                Member::Builtin(_) => self.instances_of(m).first().map(|(_, s)| s.kind).unwrap_or(Kind::Eq),
            };
            if kind == Kind::Eq {
                kept.push(m.clone());
            } else {
                dropped.push(m.name().to_string());
            }
        }
        let set = AxiomSet { name: format!("{} (equations)", self.name), members: kept, alphabet: self.alphabet.clone() };
        (set, dropped)
    }

    fn instances_of(&self, m: &Member) -> Vec<(String, Statement)> {
        let single = AxiomSet { name: String::new(), members: vec![m.clone()], alphabet: self.alphabet.clone() };
        let probe = match self.alphabet.actions().first() {
            Some(a) => a.clone(),
            None => self.alphabet.fresh_action(&BTreeSet::new()),
        };
        single.instances(&[probe], &[2])
    }

    /// Renders the set as an axiom file.
    pub fn to_text(&self, actions: &[Action], sizes: &[usize]) -> String {
        let mut out = String::new();
        for (name, st) in self.session_instances(actions, sizes) {
            out.push_str(&format!("{name}: {st}\n"));
        }
        out
    }
}

/// The variable sequence `z, z1, z2, ...` skipping names in `avoid`.
pub fn fresh_var_name(avoid: &BTreeSet<String>) -> String {
    std::iter::once("z".to_string())
        .chain((1..).map(|i| format!("z{i}")))
        .find(|n| !avoid.contains(n))
        .expect("unbounded search")
}

/// Turns an inequational axiomatization into an equational one for its
/// kernel: A1-4, the RS schema, and for every inequation `t ≼ u` the
/// equations `t + u ≈ u` and `α(t + z) + α(u + z) ≈ α(u + z)` with `z`
/// fresh. Equations pass through. Needs a finite alphabet, since the output
/// is listed instance by instance.
pub fn generate_equivalence_axioms(e: &AxiomSet) -> Result<Vec<(String, Statement)>> {
    let alphabet = e.alphabet();
    if !alphabet.is_finite() {
        return Err(Error::Config("generating the equational axioms needs a finite alphabet".into()));
    }
    let labels: Vec<String> =
        std::iter::once(TAU.to_string()).chain(alphabet.actions().iter().map(|a| a.to_string())).collect();
    let mut out = Vec::new();
    for n in ["A1", "A2", "A3", "A4"] {
        out.push((n.to_string(), builtin_statement(n, alphabet)?));
    }
    for beta in &labels {
        for alpha in &labels {
            let name = instance_name("RS", &[beta.clone(), alpha.clone()]);
            out.push((name.clone(), builtin_statement(&name, alphabet)?));
        }
    }
    for (name, st) in e.instances(alphabet.actions(), &[2]) {
        if ["A1", "A2", "A3", "A4"].contains(&name.as_str()) {
            continue;
        }
        match st.kind {
            Kind::Eq => out.push((name, st)),
            Kind::Leq => {
                let (base, args) = split_name(&name);
                let suffix = if args.is_empty() { String::new() } else { format!("[{}]", args.join(",")) };
                let a_name = format!("{base}^a{suffix}");
                out.push((a_name, Statement::eq(Term::sum(st.lhs.clone(), st.rhs.clone()), st.rhs.clone())));
                let avoid: BTreeSet<String> = st.vars().iter().map(|v| v.as_str().to_string()).collect();
                let z = Term::var(&fresh_var_name(&avoid));
                for alpha in &labels {
                    let label = if alpha == TAU { crate::term::Label::Tau } else { crate::term::Label::act(alpha) };
                    let lt = Term::prefix(label.clone(), Term::sum(st.lhs.clone(), z.clone()));
                    let ut = Term::prefix(label, Term::sum(st.rhs.clone(), z.clone()));
                    let mut b_args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
                    b_args.push(alpha.clone());
                    let b_name = instance_name(&format!("{base}^b"), &b_args);
                    out.push((b_name, Statement::eq(Term::sum(lt, ut.clone()), ut)));
                }
            }
        }
    }
    Ok(out)
}
