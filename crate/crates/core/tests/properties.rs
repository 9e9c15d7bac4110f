mod common;

use std::cmp::Ordering;

use common::*;
use hgcrp::checks::*;
use hgcrp::exact::{enumerate_ir_partitions, perfect_partition};
use hgcrp::generators::{random_instance, RandomParams};
use hgcrp::greedy::greedy_solve;
use hgcrp::model::*;
use hgcrp::{Coalition, EnumerationBudget, Error};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=6, 0usize..3, 0.2f64..0.9, 1i64..=4, any::<u64>()).prop_map(
        |(n, k, density, max_den, seed)| {
            let max_size = [2, 3, n][k].min(n);
            random_instance(&RandomParams::new(n, max_size, density, max_den, seed)).unwrap()
        },
    )
}

fn all(inst: &Instance) -> Vec<Partition> {
    enumerate_ir_partitions(inst, &EnumerationBudget::default())
        .unwrap()
        .map(|p| p.unwrap())
        .collect()
}

fn with_partition() -> impl Strategy<Value = (Instance, Partition)> {
    (instance(), any::<prop::sample::Index>()).prop_map(|(inst, ix)| {
        let ps = all(&inst);
        let p = ix.get(&ps).clone();
        (inst, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_matches_the_bell_oracle(inst in instance()) {
        let mut got = all(&inst);
        let mut want = listed_partitions(&inst);
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn psi_is_the_sorted_utilities((inst, p) in with_partition()) {
        let us: Vec<Utility> = (0..inst.agent_count())
            .map(|i| utility_of(&inst, &p, AgentId(i)).unwrap())
            .collect();
        prop_assert_eq!(psi(&inst, &p).values().to_vec(), sorted_desc(us));
    }

    #[test]
    fn welfare_is_the_utility_sum((inst, p) in with_partition()) {
        let mut sum = Utility::ZERO;
        for x in utilities(&inst, &p) {
            sum = sum.checked_add(x).unwrap();
        }
        prop_assert_eq!(welfare(&inst, &p).unwrap(), sum);
    }

    #[test]
    fn psi_order_is_a_total_preorder(inst in instance(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let ps = all(&inst);
        let [x, y, z] = [a, b, c].map(|i| psi(&inst, i.get(&ps)));
        let xy = psi_compare(&x, &y).unwrap();
        prop_assert_eq!(xy.reverse(), psi_compare(&y, &x).unwrap());
        prop_assert_eq!(psi_compare(&x, &x).unwrap(), Ordering::Equal);
        let yz = psi_compare(&y, &z).unwrap();
        if xy != Ordering::Less && yz != Ordering::Less {
            prop_assert_ne!(psi_compare(&x, &z).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn text_formats_round_trip((inst, p) in with_partition()) {
        prop_assert_eq!(&parse_instance(&serialize_instance(&inst)).unwrap(), &inst);
        prop_assert_eq!(parse_partition(&inst, &serialize_partition(&p)).unwrap(), p);
    }

    #[test]
    fn induced_partitions_are_valid((inst, p) in with_partition(), ix in any::<prop::sample::Index>()) {
        let s = ix.get(inst.coalitions()).0.clone();
        let residuals: Vec<Coalition> = p.coalitions().iter().filter_map(|k| k.minus(&s)).collect();
        let q = match induced_partition(&inst, &p, &s) {
            Ok(q) => q,
            Err(Error::UnlistedCoalition(r)) => {
                prop_assert!(residuals.contains(&r) && !inst.is_listed(&r));
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(residuals.iter().all(|r| inst.is_listed(r)));
        prop_assert!(q.contains(&s));
        for k in q.coalitions() {
            prop_assert!(inst.is_listed(k));
        }
        for i in (0..inst.agent_count()).filter(|&i| !s.contains(i)) {
            let expected = p.coalition_of(i).minus(&s).unwrap();
            prop_assert_eq!(q.coalition_of(i), &expected);
        }
    }

    #[test]
    fn witnesses_are_sound((inst, p) in with_partition()) {
        let before = utilities(&inst, &p);
        if let Some(s) = find_blocking_coalition(&inst, &p) {
            let gain = inst.utility(&s).unwrap();
            prop_assert!(s.members().iter().all(|&i| gain > before[i]));
        }
        for mv in [find_is_deviation(&inst, &p), find_nash_deviation(&inst, &p)].into_iter().flatten() {
            let q = mv.apply(&inst, &p).unwrap();
            prop_assert!(utilities(&inst, &q)[mv.agent.0] > before[mv.agent.0]);
        }
        if let Some(mv) = find_is_deviation(&inst, &p) {
            let q = mv.apply(&inst, &p).unwrap();
            let after = utilities(&inst, &q);
            if let Some(t) = &mv.target {
                prop_assert!(t.members().iter().all(|&j| after[j] >= before[j]));
            }
        }
        if let Some(q) = find_pareto_dominator(&inst, &p, &EnumerationBudget::default()).unwrap() {
            prop_assert!(dominates(&utilities(&inst, &q), &before));
        }
    }

    #[test]
    fn nash_stability_implies_individual_stability((inst, p) in with_partition()) {
        if is_nash_stable(&inst, &p) {
            prop_assert!(is_individually_stable(&inst, &p));
        }
    }

    #[test]
    fn perfect_partitions_are_stable_and_efficient(inst in instance()) {
        let b = EnumerationBudget::default();
        if let Some(p) = perfect_partition(&inst, &b).unwrap() {
            prop_assert!(is_perfect(&inst, &p));
            prop_assert!(is_core_stable(&inst, &p));
            prop_assert!(is_nash_stable(&inst, &p));
            prop_assert!(find_pareto_dominator(&inst, &p, &b).unwrap().is_none());
        } else {
            prop_assert!(all(&inst).iter().all(|p| !is_perfect(&inst, p)));
        }
    }

    #[test]
    fn greedy_is_core_and_individually_stable(inst in instance()) {
        let p = greedy_solve(&inst);
        prop_assert!(is_core_stable(&inst, &p));
        prop_assert!(is_individually_stable(&inst, &p));
    }

    #[test]
    fn checkers_agree_with_definitions((inst, p) in with_partition()) {
        let before = utilities(&inst, &p);
        let blocked = inst.coalitions().iter().any(|(s, v)| s.members().iter().all(|&i| *v > before[i]));
        prop_assert_eq!(is_core_stable(&inst, &p), !blocked);
        let dominated = all(&inst).iter().any(|q| dominates(&utilities(&inst, q), &before));
        prop_assert_eq!(find_pareto_dominator(&inst, &p, &EnumerationBudget::default()).unwrap().is_some(), dominated);
    }
}
