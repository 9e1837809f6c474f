//! Brute-force optima for 1..k vehicles under an arbitrary window mapping,
//! used as ground truth on small instances.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, ReqIdx};
use crate::ratio::Ratio;
use crate::schedule::{earliest_schedule, Run, WindowMap};

/// Default request-count guard: 8 for one or two vehicles, 6 beyond.
pub fn default_guard(k: usize) -> usize {
    if k <= 2 {
        8
    } else {
        6
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Exactly `k` runs with disjoint services, by descending profit.
    pub runs: Vec<Run>,
    pub serviced: Vec<BTreeSet<ReqIdx>>,
    pub profit: Ratio,
    pub per_run_profit: Vec<Ratio>,
}

pub fn brute_force_opt(inst: &Instance, k: usize, windows: &WindowMap) -> Result<OracleResult> {
    brute_force_opt_guarded(inst, k, windows, default_guard(k))
}

/// Enumerates every request subset a single vehicle can serve (by a DP over
/// subsets and last request that keeps the earliest completion time), then
/// picks `k` disjoint subsets of maximum total profit.
pub fn brute_force_opt_guarded(
    inst: &Instance,
    k: usize,
    windows: &WindowMap,
    guard: usize,
) -> Result<OracleResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let requests: Vec<ReqIdx> = windows.keys().copied().collect();
    let n = requests.len();
    if n > guard {
        return Err(Error::GuardExceeded {
            what: "oracle",
            count: n,
            guard,
        });
    }
    if n > 24 {
        return Err(Error::GuardExceeded {
            what: "oracle",
            count: n,
            guard: 24,
        });
    }
    let full = (1usize << n) - 1;
    let node = |i: usize| inst.request(requests[i]).node;
    let window = |i: usize| &windows[&requests[i]];

    let mut earliest: Vec<Vec<Option<Ratio>>> = vec![vec![None; n]; full + 1];
    let mut pred: Vec<Vec<Option<usize>>> = vec![vec![None; n]; full + 1];
    for i in 0..n {
        earliest[1 << i][i] = Some(window(i).start.clone());
    }
    for mask in 1..=full {
        for last in 0..n {
            let Some(t) = earliest[mask][last].clone() else {
                continue;
            };
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let w = window(next);
                let arrival = (&t + inst.travel(node(last), node(next))).max(w.start.clone());
                if arrival >= w.end {
                    continue;
                }
                let slot = &mut earliest[mask | (1 << next)][next];
                if slot.as_ref().is_none_or(|old| &arrival < old) {
                    *slot = Some(arrival);
                    pred[mask | (1 << next)][next] = Some(last);
                }
            }
        }
    }
    let feasible: Vec<bool> = (0..=full)
        .map(|mask| mask == 0 || earliest[mask].iter().any(Option::is_some))
        .collect();
    let profit: Vec<Ratio> = (0..=full)
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| inst.request(requests[i]).profit.clone())
                .sum()
        })
        .collect();

    // best[j][mask]: max profit of j disjoint feasible subsets inside mask.
    let mut best: Vec<Vec<Ratio>> = vec![vec![Ratio::zero(); full + 1]];
    let mut choice: Vec<Vec<usize>> = vec![vec![0; full + 1]];
    for j in 1..=k {
        let mut level = vec![Ratio::zero(); full + 1];
        let mut picks = vec![0; full + 1];
        for mask in 0..=full {
            let mut sub = mask;
            loop {
                if feasible[sub] {
                    let value = &profit[sub] + &best[j - 1][mask ^ sub];
                    if value > level[mask] {
                        level[mask] = value;
                        picks[mask] = sub;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        best.push(level);
        choice.push(picks);
    }

    let mut subsets = Vec::with_capacity(k);
    let mut mask = full;
    for j in (1..=k).rev() {
        let sub = choice[j][mask];
        subsets.push(sub);
        mask ^= sub;
    }

    let mut runs: Vec<(Ratio, BTreeSet<ReqIdx>, Run)> = Vec::with_capacity(k);
    for sub in subsets {
        let mut order = Vec::new();
        let mut cursor = (0..n)
            .filter(|&i| earliest[sub][i].is_some())
            .min_by(|&a, &b| earliest[sub][a].cmp(&earliest[sub][b]).then(a.cmp(&b)));
        let mut rest = sub;
        while let Some(i) = cursor {
            order.push(requests[i]);
            let prev = pred[rest][i];
            rest ^= 1 << i;
            cursor = prev;
        }
        order.reverse();
        let run = earliest_schedule(inst, &order, windows)?
            .ok_or_else(|| Error::Internal("oracle subset failed to reschedule".into()))?;
        let set: BTreeSet<ReqIdx> = order.iter().copied().collect();
        runs.push((profit[sub].clone(), set, run));
    }
    runs.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));

    let mut result = OracleResult {
        runs: Vec::with_capacity(k),
        serviced: Vec::with_capacity(k),
        profit: best[k][full].clone(),
        per_run_profit: Vec::with_capacity(k),
    };
    for (i, (p, set, run)) in runs.into_iter().enumerate() {
        result.runs.push(run.with_label(format!("opt-{}", i + 1)));
        result.serviced.push(set);
        result.per_run_profit.push(p);
    }
    Ok(result)
}

/// `entries[i][j]`: profit of requests served by greedy run `j` that the
/// optimal run `i` also serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossProfitMatrix {
    pub entries: Vec<Vec<Ratio>>,
}

impl CrossProfitMatrix {
    pub fn row_sum(&self, i: usize) -> Ratio {
        self.entries[i].iter().cloned().sum()
    }

    pub fn column_sum(&self, j: usize) -> Ratio {
        self.entries.iter().map(|row| row[j].clone()).sum()
    }
}

pub fn cross_profit(inst: &Instance, optimal: &OracleResult, greedy: &[Run]) -> CrossProfitMatrix {
    let greedy_sets: Vec<BTreeSet<ReqIdx>> = greedy.iter().map(Run::served_set).collect();
    let entries = optimal
        .serviced
        .iter()
        .map(|opt| {
            greedy_sets
                .iter()
                .map(|g| {
                    opt.intersection(g)
                        .map(|&idx| inst.request(idx).profit.clone())
                        .sum()
                })
                .collect()
        })
        .collect();
    CrossProfitMatrix { entries }
}
