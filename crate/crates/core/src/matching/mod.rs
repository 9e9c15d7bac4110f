//! Maximum-weight matching and the two polynomial solvers for instances
//! whose coalitions have at most two members.
//!
//! Both solvers use the agent graph: every agent `i` owns two vertices,
//! `v_i = i` and `u_i = n + i`. The edge `(v_i, u_i)` stands for the
//! singleton `{i}` and the edge `(v_i, v_j)` for the pair `{i, j}`, so a
//! matching that saturates every `v_i` is exactly a partition.

mod blossom;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::model::{Coalition, Instance, Partition, Utility};

/// Simple undirected graph with non-negative rational edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, Utility)>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, Utility)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, w) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            if w.is_negative() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has negative weight"
                )));
            }
        }
        Ok(WeightedGraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, Utility)] {
        &self.edges
    }

    /// Edge weights over a common denominator.
    fn integer_weights(&self) -> Result<Vec<(usize, usize, i128)>> {
        let mut lcm: i128 = 1;
        for &(_, _, w) in &self.edges {
            lcm = lcm.lcm(&(w.denominator() as i128));
            if lcm > i64::MAX as i128 {
                return Err(Error::Overflow);
            }
        }
        // |numerator| < 2^63 and the scale < 2^63 keep every weight below
        // 2^126; the blossom duals stay within a small multiple of the
        // largest weight.
        let limit = 1i128 << 120;
        self.edges
            .iter()
            .map(|&(u, v, w)| {
                let scaled = (w.numerator() as i128).checked_mul(lcm / w.denominator() as i128);
                match scaled {
                    Some(x) if x.abs() < limit => Ok((u, v, x)),
                    _ => Err(Error::Overflow),
                }
            })
            .collect()
    }
}

/// Selected edge indices, ascending. No two share a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matching {
    edges: Vec<usize>,
}

impl Matching {
    pub fn new(graph: &WeightedGraph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut used = vec![false; graph.vertex_count];
        for &k in &edges {
            let (u, v, _) = *graph
                .edges
                .get(k)
                .ok_or_else(|| Error::InvalidGraph(format!("edge index {k} out of range")))?;
            if std::mem::replace(&mut used[u], true) || std::mem::replace(&mut used[v], true) {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} shares a vertex with another selected edge"
                )));
            }
        }
        Ok(Matching { edges })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn total_weight(&self, graph: &WeightedGraph) -> Result<Utility> {
        self.edges
            .iter()
            .try_fold(Utility::ZERO, |acc, &k| acc.checked_add(graph.edges[k].2))
    }

    pub fn is_saturated(&self, graph: &WeightedGraph, vertex: usize) -> bool {
        self.edges
            .iter()
            .any(|&k| graph.edges[k].0 == vertex || graph.edges[k].1 == vertex)
    }
}

fn mate_to_edges(edges: &[(usize, usize, i128)], mate: &[Option<usize>]) -> Vec<usize> {
    edges
        .iter()
        .enumerate()
        .filter(|(_, &(u, v, _))| mate[u] == Some(v))
        .map(|(k, _)| k)
        .collect()
}

/// A matching of maximum total weight. Zero-weight edges may be left out.
pub fn max_weight_matching(graph: &WeightedGraph) -> Result<Matching> {
    let edges = graph.integer_weights()?;
    let mate = blossom::max_weight_matching(graph.vertex_count, &edges);
    Ok(Matching {
        edges: mate_to_edges(&edges, &mate),
    })
}

fn require_pairs(inst: &Instance) -> Result<()> {
    match inst.coalitions().iter().find(|(c, _)| c.len() > 2) {
        Some((c, _)) => Err(Error::CoalitionTooLarge(c.clone())),
        None => Ok(()),
    }
}

/// Turns a matching of the agent graph into a partition; agents whose `v_i`
/// is unmatched stay alone.
fn partition_from_agent_matching(
    n: usize,
    edges: &[(usize, usize)],
    chosen: &[usize],
) -> Partition {
    let mut placed = vec![false; n];
    let mut out = Vec::new();
    for &k in chosen {
        let (a, b) = edges[k];
        if b >= n {
            out.push(Coalition::singleton(a));
            placed[a] = true;
        } else {
            out.push(Coalition::from_sorted(vec![a.min(b), a.max(b)]));
            placed[a] = true;
            placed[b] = true;
        }
    }
    out.extend((0..n).filter(|&i| !placed[i]).map(Coalition::singleton));
    Partition::from_cover_unchecked(n, out)
}

/// The welfare graph: `(v_i, u_i)` weighs `U({i})` and `(v_i, v_j)` weighs
/// `2·U({i,j})`, so a matching's weight is the welfare of its partition.
pub fn welfare_graph(inst: &Instance) -> Result<WeightedGraph> {
    require_pairs(inst)?;
    let n = inst.agent_count();
    let edges = inst
        .coalitions()
        .iter()
        .map(|(c, u)| match *c.members() {
            [i] => Ok((i, n + i, *u)),
            [i, j] => Ok((i, j, u.checked_mul_int(2)?)),
            _ => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedGraph::new(2 * n, edges)
}

/// Welfare-optimal partition for coalitions of size at most two, with the
/// underlying matching. The matching is completed with the zero-weight
/// singleton edges of any agent left uncovered, so every agent has `u_i`
/// or `v_i` saturated.
pub fn match2_opt_with_matching(inst: &Instance) -> Result<(Partition, WeightedGraph, Matching)> {
    let graph = welfare_graph(inst)?;
    let n = inst.agent_count();
    let mut matching = max_weight_matching(&graph)?;
    for i in 0..n {
        if !matching.is_saturated(&graph, i) {
            let k = graph
                .edges
                .iter()
                .position(|&(a, b, _)| a == i && b == n + i)
                .expect("singleton edge");
            matching.edges.push(k);
        }
    }
    matching.edges.sort_unstable();
    let pairs: Vec<(usize, usize)> = graph.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    let partition = partition_from_agent_matching(n, &pairs, &matching.edges);
    Ok((partition, graph, matching))
}

/// Welfare-optimal partition when every coalition has at most two members.
pub fn match2_opt(inst: &Instance) -> Result<Partition> {
    match2_opt_with_matching(inst).map(|(p, _, _)| p)
}

/// One round of the layered construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    /// Best joint utility among coalitions of the agents still unplaced.
    pub beta: Utility,
    /// Coalitions formed in this round, each worth `beta`.
    pub formed: Vec<Coalition>,
    /// Weight of the maximum matching on the round's graph; equals the
    /// number of agents placed at utility `beta`.
    pub matching_weight: u64,
}

/// The layers of [`match2_pcis`] in the order they are formed.
pub fn match2_pcis_layers(inst: &Instance) -> Result<Vec<Layer>> {
    require_pairs(inst)?;
    let n = inst.agent_count();
    let mut alive = vec![true; n];
    let mut left = n;
    let mut layers = Vec::new();
    while left > 0 {
        let live: Vec<&(Coalition, Utility)> = inst
            .coalitions()
            .iter()
            .filter(|(c, _)| c.members().iter().all(|&i| alive[i]))
            .collect();
        let beta = live
            .iter()
            .map(|(_, u)| *u)
            .max()
            .expect("live singletons remain");
        // Weight 1 for a singleton, 2 for a pair: the matching counts agents.
        let mut edges = Vec::new();
        for (c, _) in live.iter().filter(|(_, u)| *u == beta) {
            match *c.members() {
                [i] => edges.push((i, n + i, 1i128)),
                [i, j] => edges.push((i, j, 2i128)),
                _ => unreachable!(),
            }
        }
        let mate = blossom::max_weight_matching(2 * n, &edges);
        let chosen = mate_to_edges(&edges, &mate);
        let mut formed = Vec::with_capacity(chosen.len());
        let mut weight = 0u64;
        for &k in &chosen {
            let (a, b, w) = edges[k];
            weight += w as u64;
            let c = if b >= n {
                Coalition::singleton(a)
            } else {
                Coalition::from_sorted(vec![a, b])
            };
            for &i in c.members() {
                alive[i] = false;
            }
            left -= c.len();
            formed.push(c);
        }
        debug_assert!(!formed.is_empty(), "a positive-weight edge always exists");
        layers.push(Layer {
            beta,
            formed,
            matching_weight: weight,
        });
    }
    Ok(layers)
}

/// A Pareto optimal, core stable and individually stable partition when
/// every coalition has at most two members. Each round forms as many
/// agents as possible into coalitions of the highest remaining utility.
pub fn match2_pcis(inst: &Instance) -> Result<Partition> {
    let formed = match2_pcis_layers(inst)?
        .into_iter()
        .flat_map(|l| l.formed)
        .collect();
    Ok(Partition::from_cover_unchecked(inst.agent_count(), formed))
}
