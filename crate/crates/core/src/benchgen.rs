//! Benchmark domains: the `rev-i` family and seeded random STRIPS domains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Domain, DomainBuilder};
use crate::pddl::{pretty_print, PddlSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

/// `rev-i`: facts `f0..f(i-1)`, an action `del-all` deleting all of them,
/// `add-f0` without precondition and `add-fk` requiring `f(k-1)`. The unique
/// reverse plan of `del-all` is `add-f0, ..., add-f(i-1)`, of length `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RevSpec {
    pub i: usize,
}

impl RevSpec {
    pub fn new(i: usize) -> Result<Self, BenchError> {
        if i == 0 {
            return Err(BenchError::InvalidSpec("rev-i needs i >= 1".into()));
        }
        Ok(RevSpec { i })
    }

    pub fn file_name(&self) -> String {
        format!("rev-{}.pddl", self.i)
    }
}

pub fn rev_domain(spec: RevSpec) -> Domain {
    let facts: Vec<String> = (0..spec.i).map(|k| format!("f{k}")).collect();
    let all: Vec<&str> = facts.iter().map(String::as_str).collect();
    let mut b = DomainBuilder::new(format!("rev-{}", spec.i));
    b.facts(facts.iter().cloned())
        .action("del-all", &all, &[], &all)
        .action("add-f0", &[], &["f0"], &[]);
    for k in 1..spec.i {
        b.action(format!("add-f{k}"), &[all[k - 1]], &[all[k]], &[]);
    }
    b.build().expect("rev-i is well-formed")
}

/// PDDL text of `rev-i` in the layout of the published listing.
pub fn gen_rev_domain(spec: RevSpec) -> PddlSource {
    PddlSource::new(pretty_print(&rev_domain(spec)), spec.file_name())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n_facts: usize,
    pub n_actions: usize,
    pub seed: u64,
    /// Inclusion probability of each fact in each of pre, add and del.
    pub p: f64,
}

impl RandomSpec {
    pub fn new(n_facts: usize, n_actions: usize, seed: u64, p: f64) -> Result<Self, BenchError> {
        if n_facts == 0 || n_actions == 0 {
            return Err(BenchError::InvalidSpec(
                "need at least one fact and one action".into(),
            ));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(BenchError::InvalidSpec(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Ok(RandomSpec {
            n_facts,
            n_actions,
            seed,
            p,
        })
    }

    pub fn name(&self) -> String {
        format!(
            "random-f{}-a{}-s{}",
            self.n_facts, self.n_actions, self.seed
        )
    }
}

/// Facts are `p0..`, actions `a0..`. Action `k` draws from a ChaCha8 stream
/// seeded with `seed` on stream `k`; for each fact in order it draws
/// membership in pre, add, del. Adds colliding with del or pre are dropped.
/// Hence a smaller spec with the same seed is a prefix of a larger one, in
/// both facts and actions.
pub fn gen_random_domain(spec: RandomSpec) -> Domain {
    let facts: Vec<String> = (0..spec.n_facts).map(|i| format!("p{i}")).collect();
    let mut b = DomainBuilder::new(spec.name());
    b.facts(facts.iter().cloned());
    for k in 0..spec.n_actions {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k as u64);
        let (mut pre, mut add, mut del) = (Vec::new(), Vec::new(), Vec::new());
        for f in &facts {
            let (in_pre, in_add, in_del) = (
                rng.random_bool(spec.p),
                rng.random_bool(spec.p),
                rng.random_bool(spec.p),
            );
            if in_pre {
                pre.push(f.as_str());
            }
            if in_del {
                del.push(f.as_str());
            }
            if in_add && !in_del && !in_pre {
                add.push(f.as_str());
            }
        }
        b.action(format!("a{k}"), &pre, &add, &del);
    }
    b.build().expect("repaired actions are well-formed")
}
