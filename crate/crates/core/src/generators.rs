//! Instance generators: the exact-cover and independent-set reductions, the
//! family that makes the price of stability approach `n`, and seeded random
//! instances for fuzzing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Coalition, Instance, Partition, Utility};

/// An exact-cover input: a universe `0..universe_size` and a family of
/// subsets of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverSpec {
    pub universe_size: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl SetCoverSpec {
    pub fn new(universe_size: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::InvalidParameter("universe must be non-empty".into()));
        }
        for s in &subsets {
            if s.is_empty() {
                return Err(Error::InvalidParameter("subsets must be non-empty".into()));
            }
            if let Some(&x) = s.iter().find(|&&x| x >= universe_size) {
                return Err(Error::AgentOutOfRange {
                    agent: x,
                    n: universe_size,
                });
            }
        }
        Ok(SetCoverSpec {
            universe_size,
            subsets,
        })
    }

    /// Reads `universe: n` (optional, otherwise one past the largest
    /// element) and `subset: i,j,k` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut universe = None;
        let mut subsets = Vec::new();
        for (line, s) in aux_lines(text) {
            if let Some(rest) = s.strip_prefix("universe:") {
                universe = Some(parse_count(rest, line)?);
            } else if let Some(rest) = s.strip_prefix("subset:") {
                subsets.push(parse_list(rest, line)?);
            } else {
                return Err(Error::Syntax {
                    line,
                    message: format!("expected `universe:` or `subset:`, found {s:?}"),
                });
            }
        }
        let inferred = subsets.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
        Self::new(universe.unwrap_or(inferred), subsets)
    }
}

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(GraphSpec {
            vertex_count,
            edges,
        })
    }

    /// Reads `vertices: n` (optional) and `edge: u,v` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (line, s) in aux_lines(text) {
            if let Some(rest) = s.strip_prefix("vertices:") {
                vertices = Some(parse_count(rest, line)?);
            } else if let Some(rest) = s.strip_prefix("edge:") {
                match parse_list(rest, line)?[..] {
                    [u, v] => edges.push((u, v)),
                    _ => {
                        return Err(Error::Syntax {
                            line,
                            message: "an edge has exactly two endpoints".into(),
                        })
                    }
                }
            } else {
                return Err(Error::Syntax {
                    line,
                    message: format!("expected `vertices:` or `edge:`, found {s:?}"),
                });
            }
        }
        let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(vertices.unwrap_or(inferred), edges)
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

fn aux_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Syntax {
        line,
        message: format!("bad count {:?}", s.trim()),
    })
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| Error::Syntax {
                line,
                message: format!("bad index {:?}", t.trim()),
            })
        })
        .collect()
}

/// Collects coalition values; when two rules assign the same coalition the
/// larger value is kept.
#[derive(Default)]
struct ValueTable(BTreeMap<Coalition, Utility>);

impl ValueTable {
    fn offer(&mut self, c: Coalition, u: Utility) {
        let slot = self.0.entry(c).or_insert(u);
        if u > *slot {
            *slot = u;
        }
    }

    fn into_list(self) -> Vec<(Coalition, Utility)> {
        self.0.into_iter().collect()
    }
}

/// Every subset becomes a coalition worth 2 and every singleton is worth 1;
/// everything else is worth 0 and so is left off the list. The result has
/// a perfect partition exactly when the set system has an exact cover.
pub fn from_exact_cover(spec: &SetCoverSpec) -> Result<Instance> {
    let mut table = ValueTable::default();
    for i in 0..spec.universe_size {
        table.offer(Coalition::singleton(i), Utility::ONE);
    }
    for s in &spec.subsets {
        table.offer(Coalition::new(s.iter().copied())?, Utility::from_int(2));
    }
    Instance::new(spec.universe_size, table.into_list())
}

/// Output of [`from_independent_set`].
#[derive(Clone, Debug)]
pub struct MisReduction {
    pub instance: Instance,
    /// For each vertex with at least one edge, the coalition of its
    /// incident edge-agents.
    pub vertex_coalitions: Vec<(usize, Coalition)>,
    pub epsilon: Utility,
}

impl MisReduction {
    /// Vertices whose coalition is formed in `pi`. When two vertices share
    /// a coalition (the endpoints of an isolated edge) the smaller is used.
    pub fn independent_set(&self, pi: &Partition) -> Vec<usize> {
        let mut out = Vec::new();
        for c in pi.coalitions() {
            if let Some((v, _)) = self.vertex_coalitions.iter().find(|(_, vc)| vc == c) {
                out.push(*v);
            }
        }
        out.sort_unstable();
        out
    }
}

/// One agent per edge. Each vertex `v` of degree `d ≥ 1` lists the
/// coalition of its incident edges with utility `1/d`, and every singleton
/// is worth `epsilon` (default `1/|E|²`). Optimal welfare is then
/// `|I*| + epsilon·|J*|` for a maximum independent set `I*` leaving the
/// edges `J*` uncovered.
pub fn from_independent_set(spec: &GraphSpec, epsilon: Option<Utility>) -> Result<MisReduction> {
    let m = spec.edges.len();
    if m == 0 {
        return Err(Error::InvalidGraph("the graph has no edges".into()));
    }
    let m64 = i64::try_from(m).map_err(|_| Error::Overflow)?;
    let cap = Utility::new(1, m64.checked_mul(m64).ok_or(Error::Overflow)?)?;
    let epsilon = epsilon.unwrap_or(cap);
    if epsilon <= Utility::ZERO || epsilon > cap {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, {cap}]"
        )));
    }
    let mut table = ValueTable::default();
    for e in 0..m {
        table.offer(Coalition::singleton(e), epsilon);
    }
    let mut candidates = Vec::new();
    for v in 0..spec.vertex_count {
        let incident: Vec<usize> = spec
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(k, _)| k)
            .collect();
        if incident.is_empty() {
            continue;
        }
        let c = Coalition::from_sorted(incident);
        table.offer(c.clone(), Utility::new(1, c.len() as i64)?);
        candidates.push((v, c));
    }
    // An edge at a leaf is its own vertex coalition worth 1, so the other
    // endpoint's coalition is not individually rational and is dropped.
    // Some maximum independent set always uses the leaf instead.
    let singleton = |e: usize| table.0[&Coalition::singleton(e)];
    let (vertex_coalitions, dropped): (Vec<_>, Vec<_>) = candidates
        .into_iter()
        .partition(|(_, c)| c.members().iter().all(|&e| singleton(e) <= table.0[c]));
    for (_, c) in dropped {
        table.0.remove(&c);
    }
    Ok(MisReduction {
        instance: Instance::new(m, table.into_list())?,
        vertex_coalitions,
        epsilon,
    })
}

/// Agent 0 alone is worth `1 + eps`, the grand coalition is worth 1 and
/// every other agent alone is worth 0. The grand coalition is not
/// individually rational for agent 0 but must be formable, so the instance
/// carries the non-IR exemption. Its only core stable partition is all
/// singletons, giving price of anarchy and of stability `n/(1+eps)`.
pub fn pos_family(n: usize, eps: Utility) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "the family needs at least two agents".into(),
        ));
    }
    if eps <= Utility::ZERO {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let mut list = vec![(Coalition::singleton(0), Utility::ONE.checked_add(eps)?)];
    list.extend((1..n).map(|i| (Coalition::singleton(i), Utility::ZERO)));
    list.push((Coalition::from_sorted((0..n).collect()), Utility::ONE));
    Instance::new_allow_non_ir(n, list)
}

/// Parameters of [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub max_size: usize,
    /// Probability that a coalition of size 2..=max_size is listed.
    pub density: f64,
    /// Largest denominator used for utilities.
    pub max_den: i64,
    /// Utilities are drawn from `[0, cap]`.
    pub cap: i64,
    pub seed: u64,
}

impl RandomParams {
    pub fn new(n: usize, max_size: usize, density: f64, max_den: i64, seed: u64) -> Self {
        RandomParams {
            n,
            max_size,
            density,
            max_den,
            cap: 4,
            seed,
        }
    }
}

const MAX_CANDIDATES: u128 = 1 << 22;

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Uniform rational in `[lo, cap]` with a random denominator.
fn draw(rng: &mut ChaCha8Rng, lo: Utility, cap: i64, max_den: i64) -> Result<Utility> {
    let den = rng.gen_range(1..=max_den);
    // Smallest numerator with num/den >= lo.
    let (a, b) = (
        lo.numerator() as i128 * den as i128,
        lo.denominator() as i128,
    );
    let lo_num = ((a + b - 1) / b) as i64;
    let hi_num = cap * den;
    if lo_num >= hi_num {
        return Ok(lo);
    }
    Utility::new(rng.gen_range(lo_num..=hi_num), den)
}

/// Seeded random instance. Singletons get utilities in `[0, cap]`; every
/// larger coalition up to `max_size` is listed with probability `density`
/// and gets a utility no smaller than any member's singleton, so the list
/// is individually rational.
pub fn random_instance(params: &RandomParams) -> Result<Instance> {
    let RandomParams {
        n,
        max_size,
        density,
        max_den,
        cap,
        seed,
    } = *params;
    if n == 0 || max_size == 0 || max_size > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= max_size <= n, got n={n}, max_size={max_size}"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter("density must lie in [0, 1]".into()));
    }
    if max_den < 1 || cap < 1 || cap.checked_mul(max_den).is_none() {
        return Err(Error::InvalidParameter(
            "max_den and cap must be positive".into(),
        ));
    }
    let candidates: u128 = (2..=max_size).map(|k| binomial(n, k)).sum();
    if candidates > MAX_CANDIDATES {
        return Err(Error::InvalidParameter(format!(
            "{candidates} candidate coalitions is too many"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let singles: Vec<Utility> = (0..n)
        .map(|_| draw(&mut rng, Utility::ZERO, cap, max_den))
        .collect::<Result<_>>()?;
    let mut list: Vec<(Coalition, Utility)> = singles
        .iter()
        .enumerate()
        .map(|(i, &u)| (Coalition::singleton(i), u))
        .collect();
    for size in 2..=max_size {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if rng.gen_bool(density) {
                let floor = combo.iter().map(|&i| singles[i]).max().expect("non-empty");
                list.push((
                    Coalition::from_sorted(combo.clone()),
                    draw(&mut rng, floor, cap, max_den)?,
                ));
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Instance::new(n, list)
}

/// Advances to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(pos) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[pos] += 1;
    for i in pos + 1..k {
        combo[i] = combo[i - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: &[usize]) -> Coalition {
        Coalition::new(m.iter().copied()).unwrap()
    }

    #[test]
    fn exact_cover_with_singleton_subset() {
        let spec = SetCoverSpec::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let inst = from_exact_cover(&spec).unwrap();
        assert_eq!(inst.utility(&c(&[0, 1])), Some(Utility::from_int(2)));
        assert_eq!(inst.utility(&c(&[2])), Some(Utility::from_int(2)));
        assert_eq!(inst.utility(&c(&[0])), Some(Utility::ONE));
        assert_eq!(inst.len(), 4);
    }

    #[test]
    fn exact_cover_without_subsets() {
        let inst = from_exact_cover(&SetCoverSpec::new(2, vec![]).unwrap()).unwrap();
        assert_eq!(inst.len(), 2);
    }

    #[test]
    fn x3c_subsets_stay_size_three() {
        let spec = SetCoverSpec::new(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![1, 2, 3]]).unwrap();
        let inst = from_exact_cover(&spec).unwrap();
        assert!(inst
            .coalitions()
            .iter()
            .all(|(c, _)| c.len() == 1 || c.len() == 3));
    }

    #[test]
    fn independent_set_triangle() {
        let g = GraphSpec::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = from_independent_set(&g, None).unwrap();
        assert_eq!(r.epsilon, Utility::new(1, 9).unwrap());
        assert_eq!(r.instance.agent_count(), 3);
        let half = Utility::new(1, 2).unwrap();
        assert_eq!(r.instance.utility(&c(&[0, 2])), Some(half));
        assert_eq!(r.instance.utility(&c(&[0, 1])), Some(half));
        assert_eq!(r.instance.utility(&c(&[1, 2])), Some(half));
    }

    #[test]
    fn independent_set_single_edge_overrides_singleton() {
        let g = GraphSpec::new(2, vec![(0, 1)]).unwrap();
        let r = from_independent_set(&g, None).unwrap();
        assert_eq!(r.instance.utility(&c(&[0])), Some(Utility::ONE));
        assert!(from_independent_set(&GraphSpec::new(2, vec![]).unwrap(), None).is_err());
        assert!(from_independent_set(&g, Some(Utility::from_int(2))).is_err());
    }

    #[test]
    fn pos_family_shape() {
        let inst = pos_family(4, Utility::new(1, 2).unwrap()).unwrap();
        assert!(inst.allows_non_ir());
        assert_eq!(inst.len(), 5);
        assert_eq!(inst.utility(&c(&[0, 1, 2, 3])), Some(Utility::ONE));
        assert!(pos_family(1, Utility::ONE).is_err());
        assert!(pos_family(3, Utility::ZERO).is_err());
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let p = RandomParams::new(6, 6, 1.0, 4, 7);
        let a = random_instance(&p).unwrap();
        let b = random_instance(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 63);
        let pairs = random_instance(&RandomParams::new(5, 2, 1.0, 3, 1)).unwrap();
        assert_eq!(pairs.max_coalition_size(), 2);
        assert!(random_instance(&RandomParams::new(3, 4, 0.5, 3, 1)).is_err());
        assert!(random_instance(&RandomParams::new(3, 2, 1.5, 3, 1)).is_err());
    }

    #[test]
    fn combinations_in_order() {
        let mut v = vec![0, 1];
        let mut all = vec![v.clone()];
        while next_combination(&mut v, 4) {
            all.push(v.clone());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn aux_formats() {
        let s = SetCoverSpec::parse("# sets\nsubset: 0,1\nsubset: 2\n").unwrap();
        assert_eq!(s.universe_size, 3);
        let s = SetCoverSpec::parse("universe: 5\nsubset: 0\n").unwrap();
        assert_eq!(s.universe_size, 5);
        assert!(SetCoverSpec::parse("set: 0\n").is_err());
        let g = GraphSpec::parse("edge: 0,1\nedge: 1,2\n").unwrap();
        assert_eq!(g.vertex_count, 3);
        assert!(GraphSpec::parse("edge: 0,1,2\n").is_err());
        assert!(GraphSpec::parse("edge: 0,0\n").is_err());
    }
}
