//! Finite-inventory check of the step-2 accounting.
//!
//! Groups of two pairs are drawn one at a time. A group in cases 3–8 waits
//! in a pool until a group from the complementary case arrives, and the
//! first waiting partner is used.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::case::CaseId;
use crate::error::{argument, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct InventoryReport {
    pub groups: usize,
    pub counts: [usize; 8],
    pub lost: usize,
    /// Matches formed for the pairings 3↔8, 4↔7, 5↔6.
    pub matched: [usize; 3],
    /// Matches whose second step lost no photon.
    pub step2_successes: usize,
    /// Groups still waiting for a partner at the end.
    pub unmatched: usize,
    /// (kept + step-2 successes) / groups.
    pub yield_fraction: f64,
}

/// `probabilities` are the case probabilities; any shortfall from 1 is
/// photon loss. `step2_survival` is indexed by pairing as in
/// [`InventoryReport::matched`].
pub fn simulate_inventory(
    probabilities: [f64; 8],
    step2_survival: [f64; 3],
    groups: usize,
    seed: u64,
) -> Result<InventoryReport> {
    if groups == 0 {
        return Err(argument("the inventory needs at least one group"));
    }
    if probabilities
        .iter()
        .chain(&step2_survival)
        .any(|p| !(0.0..=1.0 + 1e-12).contains(p))
    {
        return Err(argument("probabilities must lie in [0, 1]"));
    }
    let total: f64 = probabilities.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(argument(format!("case probabilities sum to {total}")));
    }
    let mut weights = probabilities.to_vec();
    weights.push((1.0 - total).max(0.0));
    let dist = WeightedIndex::new(&weights).map_err(|e| argument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut counts = [0usize; 8];
    let mut lost = 0;
    let mut waiting = [0usize; 8];
    let mut matched = [0usize; 3];
    let mut step2_successes = 0;
    for _ in 0..groups {
        let k = dist.sample(&mut rng);
        if k == 8 {
            lost += 1;
            continue;
        }
        counts[k] += 1;
        let case = CaseId::new(k as u8 + 1)?;
        let Some(partner) = case.partner() else {
            continue;
        };
        if waiting[partner.index()] > 0 {
            waiting[partner.index()] -= 1;
            let slot = case.id().min(partner.id()) as usize - 3;
            matched[slot] += 1;
            if rng.gen::<f64>() < step2_survival[slot] {
                step2_successes += 1;
            }
        } else {
            waiting[case.index()] += 1;
        }
    }
    Ok(InventoryReport {
        groups,
        counts,
        lost,
        matched,
        step2_successes,
        unmatched: waiting.iter().sum(),
        yield_fraction: (counts[0] + step2_successes) as f64 / groups as f64,
    })
}
