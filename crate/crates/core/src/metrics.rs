//! Price of anarchy and price of stability over core stable partitions.

use crate::checks::is_core_stable;
use crate::error::{Error, Result};
use crate::exact::{enumerate_ir_partitions, socially_optimal, EnumerationBudget};
use crate::model::{welfare, Instance, Partition, Utility};

/// Every core stable partition, in enumeration order.
pub fn enumerate_core_stable(
    inst: &Instance,
    budget: &EnumerationBudget,
) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for p in enumerate_ir_partitions(inst, budget)? {
        let p = p?;
        if is_core_stable(inst, &p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Welfare figures behind both prices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WelfareSummary {
    pub optimum: Utility,
    pub worst_stable: Utility,
    pub best_stable: Utility,
    pub core_stable_count: usize,
}

pub fn welfare_summary(inst: &Instance, budget: &EnumerationBudget) -> Result<WelfareSummary> {
    let optimum = welfare(inst, &socially_optimal(inst, budget)?)?;
    let stable = enumerate_core_stable(inst, budget)?;
    let values = stable
        .iter()
        .map(|p| welfare(inst, p))
        .collect::<Result<Vec<_>>>()?;
    // The greedy partition is always core stable, so `values` is non-empty.
    let worst_stable = *values.iter().min().expect("a core stable partition exists");
    let best_stable = *values.iter().max().expect("a core stable partition exists");
    Ok(WelfareSummary {
        optimum,
        worst_stable,
        best_stable,
        core_stable_count: stable.len(),
    })
}

fn ratio(num: Utility, den: Utility) -> Result<Utility> {
    if den.is_zero() {
        return Err(Error::Unbounded);
    }
    num.checked_div(den)
}

impl WelfareSummary {
    pub fn price_of_anarchy(&self) -> Result<Utility> {
        ratio(self.optimum, self.worst_stable)
    }

    /// Fails with [`Error::Unbounded`] only if every stable partition has
    /// zero welfare while the optimum does not.
    pub fn price_of_stability(&self) -> Result<Utility> {
        if self.optimum.is_zero() && self.best_stable.is_zero() {
            return Ok(Utility::ONE);
        }
        ratio(self.optimum, self.best_stable)
    }
}

/// Optimal welfare over the worst core stable welfare.
pub fn price_of_anarchy(inst: &Instance, budget: &EnumerationBudget) -> Result<Utility> {
    welfare_summary(inst, budget)?.price_of_anarchy()
}

/// Optimal welfare over the best core stable welfare.
pub fn price_of_stability(inst: &Instance, budget: &EnumerationBudget) -> Result<Utility> {
    welfare_summary(inst, budget)?.price_of_stability()
}
