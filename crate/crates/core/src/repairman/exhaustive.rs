//! Exact single-vehicle search by depth-first branching over the next
//! request to serve.
//!
//! Labels are keyed by (served set, current node) and kept Pareto-minimal in
//! (time, cost); a prefix is cut when an earlier one reached the same key no
//! later and no more expensively. Children are generated in request order,
//! so the incumbent is only replaced on strict improvement and ties resolve
//! to the lexicographically smallest service order.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, ReqIdx};
use crate::ratio::Ratio;
use crate::schedule::{earliest_schedule, Run, WindowMap};

struct Candidate {
    idx: ReqIdx,
    node: NodeId,
    start: Ratio,
    end: Ratio,
    profit: Ratio,
}

struct Search<'a> {
    inst: &'a Instance,
    candidates: Vec<Candidate>,
    labels: HashMap<(u64, NodeId), Vec<(Ratio, Ratio)>>,
    prefix: Vec<usize>,
    best_profit: Ratio,
    best_cost: Ratio,
    best_prefix: Vec<usize>,
}

impl Search<'_> {
    fn remaining(&self, mask: u64, time: Option<&Ratio>) -> Ratio {
        self.candidates
            .iter()
            .enumerate()
            .filter(|(i, c)| mask & (1 << i) == 0 && time.is_none_or(|t| &c.end > t))
            .map(|(_, c)| c.profit.clone())
            .sum()
    }

    /// Records the label unless an existing one dominates it.
    fn admit(&mut self, mask: u64, node: NodeId, time: &Ratio, cost: &Ratio) -> bool {
        let front = self.labels.entry((mask, node)).or_default();
        if front.iter().any(|(t, c)| t <= time && c <= cost) {
            return false;
        }
        front.retain(|(t, c)| !(time <= t && cost <= c));
        front.push((time.clone(), cost.clone()));
        true
    }

    fn explore(&mut self, mask: u64, at: Option<(NodeId, Ratio)>, profit: Ratio, cost: Ratio) {
        if profit > self.best_profit || (profit == self.best_profit && cost < self.best_cost) {
            self.best_profit = profit.clone();
            self.best_cost = cost.clone();
            self.best_prefix = self.prefix.clone();
        }
        let bound = &profit + self.remaining(mask, at.as_ref().map(|(_, t)| t));
        if bound < self.best_profit || (bound == self.best_profit && cost >= self.best_cost) {
            return;
        }

        for i in 0..self.candidates.len() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let c = &self.candidates[i];
            let (time, step) = match &at {
                None => (c.start.clone(), Ratio::zero()),
                Some((node, t)) => {
                    let d = self.inst.travel(*node, c.node);
                    ((t + d).max(c.start.clone()), d.clone())
                }
            };
            if time >= c.end {
                continue;
            }
            let next_mask = mask | (1 << i);
            let next_cost = &cost + step;
            let node = c.node;
            let next_profit = &profit + &c.profit;
            if !self.admit(next_mask, node, &time, &next_cost) {
                continue;
            }
            self.prefix.push(i);
            self.explore(next_mask, Some((node, time)), next_profit, next_cost);
            self.prefix.pop();
        }
    }
}

/// Maximum-profit run over `candidates` under `windows`; among those, the
/// cheapest; among those, the lexicographically smallest service order.
pub(crate) fn best_run(
    inst: &Instance,
    windows: &WindowMap,
    candidates: &[ReqIdx],
    guard: usize,
) -> Result<Run> {
    if candidates.len() > guard.min(64) {
        return Err(Error::GuardExceeded {
            what: "exhaustive repairman",
            count: candidates.len(),
            guard: guard.min(64),
        });
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let candidates = sorted
        .into_iter()
        .map(|idx| {
            let window = windows
                .get(&idx)
                .ok_or_else(|| Error::UnknownRequest(inst.request(idx).id.clone()))?;
            Ok(Candidate {
                idx,
                node: inst.request(idx).node,
                start: window.start.clone(),
                end: window.end.clone(),
                profit: inst.request(idx).profit.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut search = Search {
        inst,
        candidates,
        labels: HashMap::new(),
        prefix: Vec::new(),
        best_profit: Ratio::zero(),
        best_cost: Ratio::zero(),
        best_prefix: Vec::new(),
    };
    search.explore(0, None, Ratio::zero(), Ratio::zero());

    let order: Vec<ReqIdx> = search
        .best_prefix
        .iter()
        .map(|&i| search.candidates[i].idx)
        .collect();
    earliest_schedule(inst, &order, windows)?
        .ok_or_else(|| Error::Internal("exhaustive optimum failed to reschedule".into()))
}
