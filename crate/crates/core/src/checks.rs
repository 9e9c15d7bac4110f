//! Stability and efficiency predicates. Each `find_*` function returns a
//! witness when the property fails and `None` when it holds.
//!
//! Witnesses are chosen deterministically: blocking coalitions in canonical
//! coalition order, single-agent moves by agent index and then target
//! (the empty coalition first, then canonical order), Pareto dominators in
//! enumeration order.

use std::fmt;

use crate::error::Result;
use crate::exact::{enumerate_ir_partitions, EnumerationBudget};
use crate::model::{
    induced_partition, utilities, AgentId, Coalition, Instance, Partition, Utility,
};

/// A single agent leaving her coalition to join `target`, or to stand
/// alone when `target` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub agent: AgentId,
    pub target: Option<Coalition>,
}

impl Move {
    /// The coalition the agent ends up in.
    pub fn joined(&self) -> Coalition {
        match &self.target {
            Some(t) => t.with(self.agent.0),
            None => Coalition::singleton(self.agent.0),
        }
    }

    /// The partition after the move.
    pub fn apply(&self, inst: &Instance, pi: &Partition) -> Result<Partition> {
        induced_partition(inst, pi, &self.joined())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(t) => write!(f, "agent {} joins {t}", self.agent),
            None => write!(f, "agent {} leaves to stand alone", self.agent),
        }
    }
}

/// Witness that a partition violates a solution concept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deviation {
    BlockingCoalition(Coalition),
    IndividualMove(Move),
    NashMove(Move),
    ParetoDominator(Partition),
}

impl Deviation {
    /// The partition reached by carrying out the deviation.
    pub fn outcome(&self, inst: &Instance, pi: &Partition) -> Result<Partition> {
        match self {
            Deviation::BlockingCoalition(s) => induced_partition(inst, pi, s),
            Deviation::IndividualMove(m) | Deviation::NashMove(m) => m.apply(inst, pi),
            Deviation::ParetoDominator(p) => Ok(p.clone()),
        }
    }
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deviation::BlockingCoalition(s) => write!(f, "blocking coalition {s}"),
            Deviation::IndividualMove(m) => write!(f, "individual move: {m}"),
            Deviation::NashMove(m) => write!(f, "nash move: {m}"),
            Deviation::ParetoDominator(p) => write!(f, "pareto dominator {p}"),
        }
    }
}

fn current(inst: &Instance, pi: &Partition, agent: usize) -> Utility {
    inst.utility(pi.coalition_of(agent))
        .expect("partition coalitions are listed")
}

/// A listed coalition whose joint utility beats every member's current
/// utility. Listed coalitions suffice: an unlisted blocking coalition has a
/// member whose singleton is worth even more, so that singleton blocks too.
pub fn find_blocking_coalition(inst: &Instance, pi: &Partition) -> Option<Coalition> {
    let utils = utilities(inst, pi);
    inst.coalitions()
        .iter()
        .find(|(s, u)| s.members().iter().all(|&i| *u > utils[i]))
        .map(|(s, _)| s.clone())
}

pub fn is_core_stable(inst: &Instance, pi: &Partition) -> bool {
    find_blocking_coalition(inst, pi).is_none()
}

/// Candidate single-agent moves in witness order. A move is feasible only
/// when both the joined coalition and what the agent leaves behind are
/// listed.
fn feasible_moves<'a>(
    inst: &'a Instance,
    pi: &'a Partition,
) -> impl Iterator<Item = (Move, Utility, Option<Utility>)> + 'a {
    let mut targets: Vec<&Coalition> = pi.coalitions().iter().collect();
    targets.sort();
    (0..pi.agent_count()).flat_map(move |i| {
        let own = pi.coalition_of(i);
        let alone = (own.len() > 1).then_some(None);
        let others: Vec<Option<Coalition>> = targets
            .iter()
            .filter(|t| **t != own)
            .map(|t| Some((*t).clone()))
            .collect();
        alone.into_iter().chain(others).filter_map(move |target| {
            let mv = Move {
                agent: AgentId(i),
                target,
            };
            let gain = inst.utility(&mv.joined())?;
            if let Some(rest) = own.minus(&Coalition::singleton(i)) {
                if !inst.is_listed(&rest) {
                    return None;
                }
            }
            let before = mv.target.as_ref().map(|t| inst.utility(t).expect("listed"));
            Some((mv, gain, before))
        })
    })
}

/// A move that strictly benefits the mover without hurting the members of
/// the coalition she joins.
pub fn find_is_deviation(inst: &Instance, pi: &Partition) -> Option<Move> {
    feasible_moves(inst, pi)
        .find(|(mv, gain, before)| {
            *gain > current(inst, pi, mv.agent.0) && before.is_none_or(|b| *gain >= b)
        })
        .map(|(mv, _, _)| mv)
}

pub fn is_individually_stable(inst: &Instance, pi: &Partition) -> bool {
    find_is_deviation(inst, pi).is_none()
}

/// A move that strictly benefits the mover, whatever it does to others.
pub fn find_nash_deviation(inst: &Instance, pi: &Partition) -> Option<Move> {
    feasible_moves(inst, pi)
        .find(|(mv, gain, _)| *gain > current(inst, pi, mv.agent.0))
        .map(|(mv, _, _)| mv)
}

pub fn is_nash_stable(inst: &Instance, pi: &Partition) -> bool {
    find_nash_deviation(inst, pi).is_none()
}

/// First agent (by index) not in one of her best listed coalitions.
pub fn find_imperfect_agent(inst: &Instance, pi: &Partition) -> Option<AgentId> {
    (0..pi.agent_count())
        .find(|&i| current(inst, pi, i) < inst.best_attainable(i))
        .map(AgentId)
}

/// Every agent sits in a coalition of maximum listed utility for her.
pub fn is_perfect(inst: &Instance, pi: &Partition) -> bool {
    find_imperfect_agent(inst, pi).is_none()
}

fn dominates(a: &[Utility], b: &[Utility]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// `a` weakly improves every agent over `b` and strictly improves one.
pub fn pareto_dominates(inst: &Instance, a: &Partition, b: &Partition) -> bool {
    dominates(&utilities(inst, a), &utilities(inst, b))
}

/// Exhaustive search for a partition that Pareto dominates `pi`.
pub fn find_pareto_dominator(
    inst: &Instance,
    pi: &Partition,
    budget: &EnumerationBudget,
) -> Result<Option<Partition>> {
    let base = utilities(inst, pi);
    for candidate in enumerate_ir_partitions(inst, budget)? {
        let candidate = candidate?;
        if dominates(&utilities(inst, &candidate), &base) {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_instance;

    fn c(m: &[usize]) -> Coalition {
        Coalition::new(m.iter().copied()).unwrap()
    }

    fn part(inst: &Instance, cs: &[&[usize]]) -> Partition {
        Partition::new(inst, cs.iter().map(|m| c(m)).collect()).unwrap()
    }

    fn ex1() -> Instance {
        parse_instance("hgcrp 1\nagents 2\n0 1\n1 0\n0,1 1\n").unwrap()
    }

    fn ex3() -> Instance {
        parse_instance("hgcrp 1\nagents 2\nallow-non-ir\n0 1\n1 3\n0,1 2\n").unwrap()
    }

    #[test]
    fn two_agent_moves() {
        let inst = ex1();
        let p = part(&inst, &[&[0], &[1]]);
        assert_eq!(find_blocking_coalition(&inst, &p), None);
        let mv = find_is_deviation(&inst, &p).unwrap();
        assert_eq!(
            mv,
            Move {
                agent: AgentId(1),
                target: Some(c(&[0]))
            }
        );
        assert!(!is_perfect(&inst, &p));
        assert_eq!(find_imperfect_agent(&inst, &p), Some(AgentId(1)));
    }

    #[test]
    fn stalker_game_has_no_nash_stable_partition() {
        let inst = ex3();
        let singles = part(&inst, &[&[0], &[1]]);
        assert_eq!(
            find_nash_deviation(&inst, &singles),
            Some(Move {
                agent: AgentId(0),
                target: Some(c(&[1]))
            })
        );
        assert_eq!(find_is_deviation(&inst, &singles), None);
        let grand = part(&inst, &[&[0, 1]]);
        assert_eq!(
            find_nash_deviation(&inst, &grand),
            Some(Move {
                agent: AgentId(1),
                target: None
            })
        );
    }

    #[test]
    fn unlisted_residual_makes_a_move_infeasible() {
        let inst =
            parse_instance("hgcrp 1\nagents 4\n0 0\n1 0\n2 0\n3 0\n0,3 2\n0,1,2 1\n").unwrap();
        let p = part(&inst, &[&[0, 1, 2], &[3]]);
        // Agent 0 gains by joining {3}, but {1,2} would be left unlisted.
        assert_eq!(find_nash_deviation(&inst, &p), None);
        assert_eq!(find_is_deviation(&inst, &p), None);
        // The coalition deviation does not care about residuals.
        assert_eq!(find_blocking_coalition(&inst, &p), Some(c(&[0, 3])));
    }

    #[test]
    fn grand_coalition_with_unique_max_is_stable() {
        let inst = parse_instance("hgcrp 1\nagents 3\n0 0\n1 0\n2 0\n0,1,2 5\n0,1 1\n").unwrap();
        let p = part(&inst, &[&[0, 1, 2]]);
        assert_eq!(find_is_deviation(&inst, &p), None);
        assert_eq!(find_nash_deviation(&inst, &p), None);
        assert!(is_perfect(&inst, &p));
    }

    #[test]
    fn pareto_dominance() {
        let inst = ex1();
        let singles = part(&inst, &[&[0], &[1]]);
        let grand = part(&inst, &[&[0, 1]]);
        assert!(pareto_dominates(&inst, &grand, &singles));
        assert!(!pareto_dominates(&inst, &grand, &grand));
        let found = find_pareto_dominator(&inst, &singles, &EnumerationBudget::default()).unwrap();
        assert_eq!(found, Some(grand.clone()));
        assert_eq!(
            find_pareto_dominator(&inst, &grand, &EnumerationBudget::default()).unwrap(),
            None
        );
    }
}
