//! Seeded random terms for fuzzing.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::term::{Action, Alphabet, Label, Substitution, Term, Var};

/// Shape of generated terms.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub actions: Vec<Action>,
    pub vars: Vec<Var>,
    pub max_depth: usize,
    /// Most summands at any one level.
    pub max_width: usize,
}

impl GenConfig {
    pub fn closed(alphabet: &Alphabet, max_depth: usize) -> Self {
        GenConfig { actions: alphabet.actions().to_vec(), vars: Vec::new(), max_depth, max_width: 3 }
    }

    pub fn open(alphabet: &Alphabet, vars: &[&str], max_depth: usize) -> Self {
        GenConfig { vars: vars.iter().map(|x| Var::new(x)).collect(), ..Self::closed(alphabet, max_depth) }
    }
}

/// A reproducible stream of random terms.
pub struct TermGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl TermGen {
    pub fn new(seed: u64, cfg: GenConfig) -> Self {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), cfg }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn term(&mut self) -> Term {
        let d = self.cfg.max_depth;
        self.gen(d)
    }

    /// A term of depth at most `depth`.
    pub fn term_of_depth(&mut self, depth: usize) -> Term {
        self.gen(depth)
    }

    fn gen(&mut self, depth: usize) -> Term {
        let width = self.rng.gen_range(0..=self.cfg.max_width);
        let parts: Vec<Term> = (0..width).map(|_| self.summand(depth)).collect();
        Term::sum_all(parts)
    }

    fn summand(&mut self, depth: usize) -> Term {
        let can_var = !self.cfg.vars.is_empty();
        if depth == 0 {
            return if can_var && self.rng.gen_bool(0.5) { self.var() } else { Term::Nil };
        }
        let roll = self.rng.gen_range(0..10);
        match roll {
            0..=1 if can_var => self.var(),
            0..=3 => Term::tau(self.gen(depth - 1)),
            _ if self.cfg.actions.is_empty() => Term::tau(self.gen(depth - 1)),
            _ => {
                let a = self.cfg.actions[self.rng.gen_range(0..self.cfg.actions.len())].clone();
                Term::prefix(Label::Act(a), self.gen(depth - 1))
            }
        }
    }

    fn var(&mut self) -> Term {
        Term::Var(self.cfg.vars[self.rng.gen_range(0..self.cfg.vars.len())].clone())
    }

    /// A closed substitution for `vars` with images of depth at most `depth`.
    pub fn closed_substitution(&mut self, vars: &[Var], depth: usize) -> Substitution {
        let saved = std::mem::take(&mut self.cfg.vars);
        let s = Substitution::from_pairs(vars.iter().map(|x| (x.clone(), self.gen(depth))).collect::<Vec<_>>());
        self.cfg.vars = saved;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let ab = Alphabet::finite(&["a", "b"]).unwrap();
        let mut g1 = TermGen::new(7, GenConfig::open(&ab, &["x", "y"], 3));
        let mut g2 = TermGen::new(7, GenConfig::open(&ab, &["x", "y"], 3));
        for _ in 0..200 {
            let (t1, t2) = (g1.term(), g2.term());
            assert_eq!(t1, t2);
            assert!(t1.depth() <= 3);
        }
    }
}
