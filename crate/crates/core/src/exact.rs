//! Exhaustive solvers over the space of partitions into listed coalitions.
//!
//! These are desk-scale ground truths: the ψ-lexicographic maximizer (which
//! is Pareto optimal, core stable and individually stable), the welfare
//! optimum, and perfect-partition search.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{psi, welfare, Coalition, Instance, Partition, PsiVector, Utility};

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_agents: usize,
    pub max_partitions: u64,
}

impl EnumerationBudget {
    pub const DEFAULT_MAX_AGENTS: usize = 10;
    pub const DEFAULT_MAX_PARTITIONS: u64 = 10_000_000;

    pub fn new(max_agents: usize, max_partitions: u64) -> Result<Self> {
        if max_agents == 0 || max_partitions == 0 {
            return Err(Error::InvalidParameter(
                "budget limits must be positive".into(),
            ));
        }
        Ok(EnumerationBudget {
            max_agents,
            max_partitions,
        })
    }

    pub fn with_max_agents(self, max_agents: usize) -> Result<Self> {
        Self::new(max_agents, self.max_partitions)
    }

    fn admit(&self, inst: &Instance) -> Result<()> {
        if inst.agent_count() > self.max_agents {
            return Err(Error::BudgetExceeded(format!(
                "{} agents exceeds the limit of {}",
                inst.agent_count(),
                self.max_agents
            )));
        }
        Ok(())
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_agents: Self::DEFAULT_MAX_AGENTS,
            max_partitions: Self::DEFAULT_MAX_PARTITIONS,
        }
    }
}

/// Listed coalition indices grouped by their smallest member.
fn by_min_member(inst: &Instance, keep: impl Fn(&Coalition, Utility) -> bool) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); inst.agent_count()];
    for (k, (c, u)) in inst.coalitions().iter().enumerate() {
        if keep(c, *u) {
            out[c.min_member()].push(k);
        }
    }
    out
}

struct Frame {
    agent: usize,
    next: usize,
    chosen: Option<usize>,
}

/// Depth-first cover search: the lowest unplaced agent branches over the
/// listed coalitions it is the smallest member of. Each partition is
/// produced exactly once.
pub struct IrPartitions<'a> {
    inst: &'a Instance,
    starts: Vec<Vec<usize>>,
    placed: Vec<bool>,
    frames: Vec<Frame>,
    emitted: u64,
    cap: u64,
    done: bool,
}

impl<'a> IrPartitions<'a> {
    fn new(inst: &'a Instance, starts: Vec<Vec<usize>>, cap: u64) -> Self {
        IrPartitions {
            inst,
            starts,
            placed: vec![false; inst.agent_count()],
            frames: vec![Frame {
                agent: 0,
                next: 0,
                chosen: None,
            }],
            emitted: 0,
            cap,
            done: false,
        }
    }

    fn set(&mut self, k: usize, value: bool) {
        for &i in self.inst.coalitions()[k].0.members() {
            self.placed[i] = value;
        }
    }

    fn current(&self) -> Partition {
        let cs = self
            .frames
            .iter()
            .filter_map(|f| f.chosen)
            .map(|k| self.inst.coalitions()[k].0.clone());
        // Frames are pushed in increasing agent order, so coalitions arrive
        // sorted by smallest member.
        Partition::from_sorted_cover(self.inst.agent_count(), cs.collect())
    }

    fn fits(&self, k: usize) -> bool {
        self.inst.coalitions()[k]
            .0
            .members()
            .iter()
            .all(|&i| !self.placed[i])
    }
}

impl Iterator for IrPartitions<'_> {
    type Item = Result<Partition>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let depth = match self.frames.len() {
                0 => {
                    self.done = true;
                    return None;
                }
                d => d - 1,
            };
            if let Some(k) = self.frames[depth].chosen.take() {
                self.set(k, false);
            }
            let agent = self.frames[depth].agent;
            let mut found = None;
            while self.frames[depth].next < self.starts[agent].len() {
                let k = self.starts[agent][self.frames[depth].next];
                self.frames[depth].next += 1;
                if self.fits(k) {
                    found = Some(k);
                    break;
                }
            }
            let Some(k) = found else {
                self.frames.pop();
                continue;
            };
            self.set(k, true);
            self.frames[depth].chosen = Some(k);
            match (agent + 1..self.placed.len()).find(|&i| !self.placed[i]) {
                Some(a) => self.frames.push(Frame {
                    agent: a,
                    next: 0,
                    chosen: None,
                }),
                None => {
                    if self.emitted == self.cap {
                        self.done = true;
                        return Some(Err(Error::BudgetExceeded(format!(
                            "more than {} partitions",
                            self.cap
                        ))));
                    }
                    self.emitted += 1;
                    return Some(Ok(self.current()));
                }
            }
        }
    }
}

/// Every partition of the agents into listed coalitions, exactly once.
pub fn enumerate_ir_partitions<'a>(
    inst: &'a Instance,
    budget: &EnumerationBudget,
) -> Result<IrPartitions<'a>> {
    budget.admit(inst)?;
    Ok(IrPartitions::new(
        inst,
        by_min_member(inst, |_, _| true),
        budget.max_partitions,
    ))
}

/// Keeps the best candidate under `better`, breaking exact ties towards the
/// canonically smaller partition.
fn argmax<K>(
    inst: &Instance,
    budget: &EnumerationBudget,
    mut key: impl FnMut(&Partition) -> Result<K>,
    cmp: impl Fn(&K, &K) -> Ordering,
) -> Result<Partition> {
    let mut best: Option<(K, Partition)> = None;
    for p in enumerate_ir_partitions(inst, budget)? {
        let p = p?;
        let k = key(&p)?;
        let replace = match &best {
            None => true,
            Some((bk, bp)) => match cmp(&k, bk) {
                Ordering::Greater => true,
                Ordering::Equal => p < *bp,
                Ordering::Less => false,
            },
        };
        if replace {
            best = Some((k, p));
        }
    }
    Ok(best.expect("the all-singleton partition always exists").1)
}

/// A partition with lexicographically maximum ψ vector.
pub fn psi_max_partition(inst: &Instance, budget: &EnumerationBudget) -> Result<Partition> {
    argmax(
        inst,
        budget,
        |p| Ok::<PsiVector, Error>(psi(inst, p)),
        |a, b| a.values().cmp(b.values()),
    )
}

/// A partition of maximum utilitarian welfare.
pub fn socially_optimal(inst: &Instance, budget: &EnumerationBudget) -> Result<Partition> {
    argmax(inst, budget, |p| welfare(inst, p), Utility::cmp)
}

/// A partition placing every agent in one of her best listed coalitions,
/// if one exists. Only coalitions that are best for all their members can
/// appear, so the search is an exact cover over those.
pub fn perfect_partition(inst: &Instance, budget: &EnumerationBudget) -> Result<Option<Partition>> {
    budget.admit(inst)?;
    let best: Vec<Utility> = (0..inst.agent_count())
        .map(|i| inst.best_attainable(i))
        .collect();
    let starts = by_min_member(inst, |c, u| c.members().iter().all(|&i| best[i] == u));
    IrPartitions::new(inst, starts, budget.max_partitions)
        .next()
        .transpose()
}
