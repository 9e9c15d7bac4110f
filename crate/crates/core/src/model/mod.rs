//! Core domain types: coalitions, instances in individually-rational
//! coalition list form, partitions, the ψ potential and welfare.

mod format;
mod utility;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

pub use format::{parse_instance, parse_partition, serialize_instance, serialize_partition};
pub use utility::Utility;

use crate::error::{Error, Result};

/// Zero-based agent index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A non-empty set of agents, stored in ascending order.
///
/// Coalitions order by size first and then lexicographically by members;
/// this is the canonical order used for listing and witness selection.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coalition {
    members: Box<[usize]>,
}

impl Coalition {
    /// Builds a coalition from arbitrary member order. Duplicates are
    /// rejected, as is the empty set.
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidPartition("empty coalition".into()));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "duplicate member in {v:?}"
            )));
        }
        Ok(Coalition {
            members: v.into_boxed_slice(),
        })
    }

    pub fn singleton(agent: usize) -> Self {
        Coalition {
            members: Box::new([agent]),
        }
    }

    /// Members must already be strictly ascending and non-empty.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(!members.is_empty());
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Coalition {
            members: members.into_boxed_slice(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.members.iter().map(|&i| AgentId(i))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; coalitions are non-empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.members.binary_search(&agent).is_ok()
    }

    pub fn intersects(&self, other: &Coalition) -> bool {
        let (mut a, mut b) = (
            self.members.iter().peekable(),
            other.members.iter().peekable(),
        );
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                Ordering::Less => {
                    a.next();
                }
                Ordering::Greater => {
                    b.next();
                }
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn min_member(&self) -> usize {
        self.members[0]
    }

    pub fn max_member(&self) -> usize {
        self.members[self.members.len() - 1]
    }

    /// `self ∪ {agent}`.
    pub fn with(&self, agent: usize) -> Coalition {
        let mut v = self.members.to_vec();
        if let Err(pos) = v.binary_search(&agent) {
            v.insert(pos, agent);
        }
        Coalition::from_sorted(v)
    }

    /// `self \ other`, or `None` when nothing is left.
    pub fn minus(&self, other: &Coalition) -> Option<Coalition> {
        let v: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&i| !other.contains(i))
            .collect();
        (!v.is_empty()).then(|| Coalition::from_sorted(v))
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A game with `n` agents given by its individually rational coalition list.
///
/// Listed coalitions are kept in canonical order. Every singleton is listed
/// and, unless the instance carries the `allow_non_ir` exemption, every
/// listed coalition is individually rational.
#[derive(Clone)]
pub struct Instance {
    n: usize,
    entries: Vec<(Coalition, Utility)>,
    index: HashMap<Coalition, usize>,
    by_agent: Vec<Vec<usize>>,
    allow_non_ir: bool,
}

impl Instance {
    pub fn new(n: usize, list: Vec<(Coalition, Utility)>) -> Result<Self> {
        Self::build(n, list, false)
    }

    /// Like [`Instance::new`] but keeps coalitions some member would rather
    /// leave for her singleton. Needed by constructions whose welfare
    /// optimum is not individually rational.
    pub fn new_allow_non_ir(n: usize, list: Vec<(Coalition, Utility)>) -> Result<Self> {
        Self::build(n, list, true)
    }

    pub(crate) fn build(
        n: usize,
        mut list: Vec<(Coalition, Utility)>,
        allow_non_ir: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "an instance needs at least one agent".into(),
            ));
        }
        list.sort_by(|a, b| a.0.cmp(&b.0));
        for w in list.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateCoalition {
                    line: 0,
                    coalition: w[0].0.clone(),
                });
            }
        }
        let mut index = HashMap::with_capacity(list.len());
        let mut by_agent = vec![Vec::new(); n];
        for (k, (c, u)) in list.iter().enumerate() {
            if c.max_member() >= n {
                return Err(Error::AgentOutOfRange {
                    agent: c.max_member(),
                    n,
                });
            }
            if u.is_negative() {
                return Err(Error::NegativeUtility {
                    coalition: c.clone(),
                });
            }
            for &i in c.members() {
                by_agent[i].push(k);
            }
            index.insert(c.clone(), k);
        }
        let inst = Instance {
            n,
            entries: list,
            index,
            by_agent,
            allow_non_ir,
        };
        let mut singles = Vec::with_capacity(n);
        for i in 0..n {
            match inst.utility(&Coalition::singleton(i)) {
                Some(u) => singles.push(u),
                None => return Err(Error::MissingSingleton { agent: i }),
            }
        }
        if !allow_non_ir {
            for (c, u) in &inst.entries {
                if let Some(&i) = c.members().iter().find(|&&i| *u < singles[i]) {
                    return Err(Error::NotIndividuallyRational {
                        coalition: c.clone(),
                        agent: i,
                    });
                }
            }
        }
        Ok(inst)
    }

    pub fn agent_count(&self) -> usize {
        self.n
    }

    pub fn allows_non_ir(&self) -> bool {
        self.allow_non_ir
    }

    /// Listed coalitions with their joint utilities, in canonical order.
    pub fn coalitions(&self) -> &[(Coalition, Utility)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn utility(&self, c: &Coalition) -> Option<Utility> {
        self.index.get(c).map(|&k| self.entries[k].1)
    }

    pub fn is_listed(&self, c: &Coalition) -> bool {
        self.index.contains_key(c)
    }

    pub fn singleton_utility(&self, agent: usize) -> Utility {
        self.utility(&Coalition::singleton(agent))
            .expect("singletons are always listed")
    }

    /// Indices into [`Instance::coalitions`] of the coalitions containing `agent`.
    pub fn containing(&self, agent: usize) -> &[usize] {
        &self.by_agent[agent]
    }

    /// Largest listed utility among coalitions containing `agent`.
    pub fn best_attainable(&self, agent: usize) -> Utility {
        self.by_agent[agent]
            .iter()
            .map(|&k| self.entries[k].1)
            .max()
            .expect("singleton listed")
    }

    pub fn max_coalition_size(&self) -> usize {
        self.entries.iter().map(|(c, _)| c.len()).max().unwrap_or(0)
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.allow_non_ir == other.allow_non_ir
            && self.entries == other.entries
    }
}

impl Eq for Instance {}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("n", &self.n)
            .field("allow_non_ir", &self.allow_non_ir)
            .field("ircl", &self.entries)
            .finish()
    }
}

/// A coalition structure: disjoint listed coalitions covering every agent.
///
/// Coalitions are kept sorted by their smallest member. Partitions compare
/// by their coalition sequence; this is the canonical tie-break order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    coalitions: Vec<Coalition>,
    owner: Vec<usize>,
}

impl Partition {
    pub fn new(inst: &Instance, coalitions: Vec<Coalition>) -> Result<Self> {
        if let Some(c) = coalitions.iter().find(|c| !inst.is_listed(c)) {
            return Err(Error::UnlistedCoalition(c.clone()));
        }
        Self::cover(inst.agent_count(), coalitions)
    }

    /// Validates only that `coalitions` is a disjoint cover of `0..n`.
    pub fn cover(n: usize, mut coalitions: Vec<Coalition>) -> Result<Self> {
        let mut seen = vec![false; n];
        for c in &coalitions {
            for &i in c.members() {
                if i >= n {
                    return Err(Error::AgentOutOfRange { agent: i, n });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("agent {i} appears twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("agent {i} is not covered")));
        }
        coalitions.sort_by_key(Coalition::min_member);
        Ok(Self::from_sorted_cover(n, coalitions))
    }

    pub(crate) fn from_sorted_cover(n: usize, coalitions: Vec<Coalition>) -> Self {
        let mut owner = vec![usize::MAX; n];
        for (k, c) in coalitions.iter().enumerate() {
            for &i in c.members() {
                owner[i] = k;
            }
        }
        Partition { coalitions, owner }
    }

    /// Builds from disjoint coalitions covering `0..n` in any order.
    pub(crate) fn from_cover_unchecked(n: usize, mut coalitions: Vec<Coalition>) -> Self {
        coalitions.sort_by_key(Coalition::min_member);
        Self::from_sorted_cover(n, coalitions)
    }

    pub fn all_singletons(n: usize) -> Self {
        Self::from_sorted_cover(n, (0..n).map(Coalition::singleton).collect())
    }

    pub fn coalitions(&self) -> &[Coalition] {
        &self.coalitions
    }

    pub fn agent_count(&self) -> usize {
        self.owner.len()
    }

    /// `π(i)`.
    pub fn coalition_of(&self, agent: usize) -> &Coalition {
        &self.coalitions[self.owner[agent]]
    }

    pub fn contains(&self, c: &Coalition) -> bool {
        self.coalition_of(c.min_member()) == c
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.coalitions.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All agent utilities under a partition, sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PsiVector(Vec<Utility>);

impl PsiVector {
    /// Sorts `values` into non-increasing order.
    pub fn from_values(mut values: Vec<Utility>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        PsiVector(values)
    }

    pub fn values(&self) -> &[Utility] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Joint utility of the coalition the agent belongs to.
pub fn utility_of(inst: &Instance, pi: &Partition, agent: AgentId) -> Result<Utility> {
    if agent.0 >= inst.agent_count() || agent.0 >= pi.agent_count() {
        return Err(Error::AgentOutOfRange {
            agent: agent.0,
            n: inst.agent_count(),
        });
    }
    let c = pi.coalition_of(agent.0);
    inst.utility(c)
        .ok_or_else(|| Error::UnlistedCoalition(c.clone()))
}

/// Per-agent utilities, indexed by agent.
pub fn utilities(inst: &Instance, pi: &Partition) -> Vec<Utility> {
    (0..pi.agent_count())
        .map(|i| coalition_utility(inst, pi.coalition_of(i)))
        .collect()
}

fn coalition_utility(inst: &Instance, c: &Coalition) -> Utility {
    inst.utility(c)
        .unwrap_or_else(|| panic!("partition uses unlisted coalition {c}"))
}

pub fn psi(inst: &Instance, pi: &Partition) -> PsiVector {
    PsiVector::from_values(utilities(inst, pi))
}

/// Lexicographic comparison of two ψ vectors of the same length.
pub fn psi_compare(a: &PsiVector, b: &PsiVector) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.0.cmp(&b.0))
}

/// The partition that arises when the members of `s` leave their
/// coalitions to form `s`. Fails when `s` or a left-behind residual is not
/// listed, since its utility is unknown.
pub fn induced_partition(inst: &Instance, pi: &Partition, s: &Coalition) -> Result<Partition> {
    if !inst.is_listed(s) {
        return Err(Error::UnlistedCoalition(s.clone()));
    }
    if s.max_member() >= pi.agent_count() {
        return Err(Error::AgentOutOfRange {
            agent: s.max_member(),
            n: pi.agent_count(),
        });
    }
    let mut out = Vec::with_capacity(pi.coalitions().len() + 1);
    out.push(s.clone());
    for c in pi.coalitions() {
        if c == s {
            continue;
        }
        if !c.intersects(s) {
            out.push(c.clone());
            continue;
        }
        if let Some(rest) = c.minus(s) {
            if !inst.is_listed(&rest) {
                return Err(Error::UnlistedCoalition(rest));
            }
            out.push(rest);
        }
    }
    Ok(Partition::from_cover_unchecked(pi.agent_count(), out))
}

/// Utilitarian welfare `Σ_C |C|·U(C)`.
pub fn welfare(inst: &Instance, pi: &Partition) -> Result<Utility> {
    pi.coalitions().iter().try_fold(Utility::ZERO, |acc, c| {
        acc.checked_add(coalition_utility(inst, c).checked_mul_int(c.len() as i64)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: &[usize]) -> Coalition {
        Coalition::new(m.iter().copied()).unwrap()
    }

    fn example2() -> Instance {
        let one = Utility::ONE;
        Instance::new(
            3,
            vec![
                (c(&[0]), Utility::ZERO),
                (c(&[1]), one),
                (c(&[2]), one),
                (c(&[0, 1]), one),
                (c(&[0, 2]), one),
                (c(&[1, 2]), Utility::from_int(2)),
                (c(&[0, 1, 2]), one),
            ],
        )
        .unwrap()
    }

    #[test]
    fn coalition_order_is_size_then_lex() {
        let mut v = vec![c(&[1, 2]), c(&[3]), c(&[0, 2]), c(&[0])];
        v.sort();
        assert_eq!(v, vec![c(&[0]), c(&[3]), c(&[0, 2]), c(&[1, 2])]);
        assert!(Coalition::new(vec![1, 1]).is_err());
        assert!(Coalition::new(vec![]).is_err());
    }

    #[test]
    fn coalition_set_ops() {
        assert!(c(&[0, 3, 5]).intersects(&c(&[1, 5])));
        assert!(!c(&[0, 3]).intersects(&c(&[1, 2])));
        assert_eq!(c(&[0, 3]).with(1), c(&[0, 1, 3]));
        assert_eq!(c(&[0, 1, 3]).minus(&c(&[1])), Some(c(&[0, 3])));
        assert_eq!(c(&[1]).minus(&c(&[1, 2])), None);
    }

    #[test]
    fn instance_validation() {
        let err = Instance::new(2, vec![(c(&[0]), Utility::ONE)]).unwrap_err();
        assert_eq!(err, Error::MissingSingleton { agent: 1 });
        let err = Instance::new(
            2,
            vec![
                (c(&[0]), Utility::ONE),
                (c(&[1]), Utility::ZERO),
                (c(&[0, 1]), Utility::ZERO),
            ],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::NotIndividuallyRational { agent: 0, .. }
        ));
        let err = Instance::new(1, vec![(c(&[0]), Utility::ONE), (c(&[0, 1]), Utility::ONE)])
            .unwrap_err();
        assert!(matches!(err, Error::AgentOutOfRange { agent: 1, n: 1 }));
    }

    #[test]
    fn partition_validation() {
        let inst = example2();
        assert!(Partition::new(&inst, vec![c(&[0, 1])]).is_err());
        assert!(Partition::new(&inst, vec![c(&[0, 1]), c(&[1, 2])]).is_err());
        let p = Partition::new(&inst, vec![c(&[2]), c(&[0, 1])]).unwrap();
        assert_eq!(p.coalitions(), &[c(&[0, 1]), c(&[2])]);
        assert_eq!(p.coalition_of(1), &c(&[0, 1]));
    }

    #[test]
    fn utility_and_psi() {
        let inst = example2();
        let p = Partition::new(&inst, vec![c(&[0, 1]), c(&[2])]).unwrap();
        assert_eq!(utility_of(&inst, &p, AgentId(2)).unwrap(), Utility::ONE);
        assert!(utility_of(&inst, &p, AgentId(3)).is_err());
        let q = Partition::new(&inst, vec![c(&[1, 2]), c(&[0])]).unwrap();
        let two = Utility::from_int(2);
        assert_eq!(psi(&inst, &q).values(), &[two, two, Utility::ZERO]);
        assert_eq!(welfare(&inst, &q).unwrap(), Utility::from_int(4));
    }

    #[test]
    fn psi_comparison() {
        let v = |xs: &[(i64, i64)]| {
            PsiVector::from_values(
                xs.iter()
                    .map(|&(a, b)| Utility::new(a, b).unwrap())
                    .collect(),
            )
        };
        let a = v(&[(2, 1), (2, 1), (0, 1)]);
        let b = v(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(psi_compare(&a, &b).unwrap(), Ordering::Greater);
        assert_eq!(psi_compare(&b, &b).unwrap(), Ordering::Equal);
        let x = v(&[(1, 1), (1, 2), (1, 2)]);
        let y = v(&[(1, 1), (1, 2), (1, 3)]);
        assert_eq!(psi_compare(&x, &y).unwrap(), Ordering::Greater);
        assert_eq!(
            psi_compare(&x, &v(&[(1, 1)])),
            Err(Error::LengthMismatch(3, 1))
        );
    }

    #[test]
    fn induced_partition_cases() {
        let inst = example2();
        let p = Partition::new(&inst, vec![c(&[0, 1]), c(&[2])]).unwrap();
        let q = induced_partition(&inst, &p, &c(&[1, 2])).unwrap();
        assert_eq!(q.coalitions(), &[c(&[0]), c(&[1, 2])]);
        assert_eq!(induced_partition(&inst, &p, &c(&[0, 1])).unwrap(), p);
    }

    #[test]
    fn induced_partition_rejects_unlisted_residual() {
        let u = Utility::ONE;
        let inst = Instance::new(
            3,
            vec![(c(&[0]), u), (c(&[1]), u), (c(&[2]), u), (c(&[0, 1, 2]), u)],
        )
        .unwrap();
        let p = Partition::new(&inst, vec![c(&[0, 1, 2])]).unwrap();
        assert_eq!(
            induced_partition(&inst, &p, &c(&[0])),
            Err(Error::UnlistedCoalition(c(&[1, 2])))
        );
    }
}
