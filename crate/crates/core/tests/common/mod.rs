//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! None of the oracles call into the library's solvers; they only use the
//! model types to look utilities up.

#![allow(dead_code)]

use std::collections::HashMap;

use hgcrp::model::parse_instance;
use hgcrp::{Coalition, Instance, Partition, Utility};

pub const EX1: &str = "hgcrp 1\nagents 2\n0 1\n1 0\n0,1 1\n";
pub const EX2: &str = "hgcrp 1\nagents 3\n0 0\n1 1\n2 1\n0,1 1\n0,2 1\n1,2 2\n0,1,2 1\n";
pub const EX3: &str = "hgcrp 1\nagents 2\nallow-non-ir\n0 1\n1 3\n0,1 2\n";

pub fn ex1() -> Instance {
    parse_instance(EX1).unwrap()
}

pub fn ex2() -> Instance {
    parse_instance(EX2).unwrap()
}

/// The stalker game. `{0,1}` is worse than agent 1's singleton, so it is
/// only listed through the non-IR exemption.
pub fn ex3() -> Instance {
    parse_instance(EX3).unwrap()
}

pub fn u(num: i64, den: i64) -> Utility {
    Utility::new(num, den).unwrap()
}

pub fn c(members: &[usize]) -> Coalition {
    Coalition::new(members.iter().copied()).unwrap()
}

pub fn part(inst: &Instance, blocks: &[&[usize]]) -> Partition {
    Partition::new(inst, blocks.iter().map(|b| c(b)).collect()).unwrap()
}

/// Every set partition of `0..n` via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = rgs.len();
        if i == n {
            let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut p = vec![Vec::new(); blocks];
            for (agent, &b) in rgs.iter().enumerate() {
                p[b].push(agent);
            }
            out.push(p);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// Set partitions all of whose blocks are listed, as library partitions.
pub fn listed_partitions(inst: &Instance) -> Vec<Partition> {
    set_partitions(inst.agent_count())
        .into_iter()
        .filter_map(|blocks| {
            let cs: Vec<Coalition> = blocks.iter().map(|b| c(b)).collect();
            if cs.iter().all(|x| inst.is_listed(x)) {
                Some(Partition::new(inst, cs).unwrap())
            } else {
                None
            }
        })
        .collect()
}

/// Per-agent utilities of a block list under an arbitrary value function.
pub fn block_utilities(
    n: usize,
    blocks: &[Vec<usize>],
    value: impl Fn(&[usize]) -> Utility,
) -> Vec<Utility> {
    let mut out = vec![Utility::ZERO; n];
    for b in blocks {
        let v = value(b);
        for &i in b {
            out[i] = v;
        }
    }
    out
}

pub fn sorted_desc(mut v: Vec<Utility>) -> Vec<Utility> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Pointwise weak improvement with one strict gain.
pub fn dominates(a: &[Utility], b: &[Utility]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Whether some subfamily partitions `0..universe` exactly.
pub fn has_exact_cover(universe: usize, subsets: &[Vec<usize>]) -> bool {
    let masks: Vec<u32> = subsets
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &x| m | (1 << x)))
        .collect();
    let full = if universe == 32 {
        u32::MAX
    } else {
        (1u32 << universe) - 1
    };
    (0u64..(1u64 << masks.len())).any(|pick| {
        let mut acc = 0u32;
        for (k, &m) in masks.iter().enumerate() {
            if pick >> k & 1 == 1 {
                if acc & m != 0 {
                    return false;
                }
                acc |= m;
            }
        }
        acc == full
    })
}

/// Size of a maximum independent set among `vertices`.
pub fn max_independent_set(vertices: &[usize], edges: &[(usize, usize)]) -> usize {
    let k = vertices.len();
    let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
        .collect();
    (0u32..(1 << k))
        .filter(|&s| adj.iter().all(|&(a, b)| s >> a & 1 == 0 || s >> b & 1 == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn is_independent(set: &[usize], edges: &[(usize, usize)]) -> bool {
    edges
        .iter()
        .all(|(a, b)| !(set.contains(a) && set.contains(b)))
}

/// Maximum matching weight by dynamic programming over vertex subsets.
pub fn max_matching_weight(vertex_count: usize, edges: &[(usize, usize, Utility)]) -> Utility {
    let mut w = vec![vec![None; vertex_count]; vertex_count];
    for &(a, b, x) in edges {
        w[a][b] = Some(x);
        w[b][a] = Some(x);
    }
    let full = (1usize << vertex_count) - 1;
    let mut best = vec![Utility::ZERO; full + 1];
    for mask in 1..=full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut b = best[rest];
        for u in (v + 1)..vertex_count {
            if rest >> u & 1 == 1 {
                if let Some(x) = w[v][u] {
                    let cand = x.checked_add(best[rest & !(1 << u)]).unwrap();
                    if cand > b {
                        b = cand;
                    }
                }
            }
        }
        best[mask] = b;
    }
    best[full]
}
