use std::cmp::Reverse;

use crate::model::{Instance, Partition};

/// Greedy core stable and individually stable partition.
///
/// Repeatedly forms the remaining listed coalition of highest utility,
/// preferring larger coalitions on ties and then the lexicographically
/// smaller member list, and discards every coalition that meets it. The
/// result also has at least `1/n` of the optimal welfare.
pub fn greedy_solve(inst: &Instance) -> Partition {
    let list = inst.coalitions();
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by_key(|&k| {
        (
            Reverse(list[k].1),
            Reverse(list[k].0.len()),
            list[k].0.members(),
        )
    });

    let n = inst.agent_count();
    let mut placed = vec![false; n];
    let mut remaining = n;
    let mut formed = Vec::new();
    // Coalitions meeting a formed one are skipped rather than deleted.
    for k in order {
        if remaining == 0 {
            break;
        }
        let c = &list[k].0;
        if c.members().iter().any(|&i| placed[i]) {
            continue;
        }
        for &i in c.members() {
            placed[i] = true;
        }
        remaining -= c.len();
        formed.push(c.clone());
    }
    debug_assert_eq!(remaining, 0, "singletons guarantee a full cover");
    Partition::from_cover_unchecked(n, formed)
}
