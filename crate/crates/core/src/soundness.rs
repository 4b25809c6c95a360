//! Randomized soundness checks of axiom instances against the semantic
//! relations.

use std::fmt;

use crate::axioms::{AxiomSet, Kind, Statement};
use crate::error::Result;
use crate::lts::{compare, Relation, Witness};
use crate::random::{GenConfig, TermGen};
use crate::term::Substitution;

/// A refuted closed instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subst: Substitution,
    pub witness: Witness,
}

/// Outcome for one named axiom instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub name: String,
    pub statement: Statement,
    pub relation: Relation,
    pub samples: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub axioms: Vec<AxiomReport>,
}

impl FuzzReport {
    pub fn violations(&self) -> usize {
        self.axioms.iter().map(|a| a.violations.len()).sum()
    }

    pub fn samples(&self) -> usize {
        self.axioms.iter().map(|a| a.samples).sum()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(f, "{}: {} samples, {} violations ({})", a.name, a.samples, a.violations.len(), a.relation)?;
            if let Some(v) = a.violations.first() {
                writeln!(f, "  first violation under {}: {}", v.subst.to_string().replace('\n', ", "), v.witness)?;
            }
        }
        write!(f, "total: {} samples, {} violations", self.samples(), self.violations())
    }
}

/// Fuzzing parameters.
#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub samples: usize,
    pub seed: u64,
    /// Bound on the depth of substitution images.
    pub image_depth: usize,
    /// Sizes used for the size-indexed schemas.
    pub sizes: Vec<usize>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { samples: 1000, seed: 0, image_depth: 3, sizes: vec![1, 2] }
    }
}

/// Checks `samples` random closed instances of every axiom instance of `e`.
/// Equations are checked against the equivalence induced by `rel`,
/// inequations against `rel` read as a preorder.
pub fn fuzz_soundness(e: &AxiomSet, rel: Relation, cfg: &FuzzConfig) -> Result<FuzzReport> {
    let alphabet = e.alphabet();
    let actions = alphabet.actions().to_vec();
    let mut gen = TermGen::new(cfg.seed, GenConfig::closed(alphabet, cfg.image_depth));
    let mut report = FuzzReport::default();
    for (name, st) in e.session_instances(&actions, &cfg.sizes) {
        let relation = match st.kind {
            Kind::Eq => equivalence(rel),
            Kind::Leq => preorder(rel),
        };
        let vars = st.vars();
        let mut violations = Vec::new();
        for _ in 0..cfg.samples {
            let sigma = gen.closed_substitution(&vars, cfg.image_depth);
            let c = compare(&sigma.close(&st.lhs), &sigma.close(&st.rhs), relation)?;
            if let Some(witness) = c.witness {
                violations.push(Violation { subst: sigma, witness });
            }
        }
        report.axioms.push(AxiomReport { name, statement: st, relation, samples: cfg.samples, violations });
    }
    Ok(report)
}

fn equivalence(rel: Relation) -> Relation {
    match rel {
        Relation::LeqWf | Relation::PreorderWf | Relation::EquivWf => Relation::EquivWf,
        Relation::PreorderWif | Relation::EquivWif => Relation::EquivWif,
        other => other,
    }
}

fn preorder(rel: Relation) -> Relation {
    match rel {
        Relation::EquivWf => Relation::PreorderWf,
        Relation::EquivWif => Relation::PreorderWif,
        other => other,
    }
}
