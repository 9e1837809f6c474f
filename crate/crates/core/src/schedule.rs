//! Timed service runs: earliest-time scheduling of a request order,
//! validation against a window mapping, time shifts, and re-assignment of
//! services along a fixed trajectory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, ReqIdx, Window};
use crate::ratio::{format_ratio, Ratio};
use crate::text::lines;

/// Window per request, keyed by canonical request index. Requests absent
/// from the mapping cannot be served under it.
pub type WindowMap = BTreeMap<ReqIdx, Window>;

pub fn original_windows(inst: &Instance) -> WindowMap {
    inst.requests()
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.window()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visit {
    pub node: NodeId,
    pub time: Ratio,
    pub served: Vec<ReqIdx>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub label: String,
    pub visits: Vec<Visit>,
}

impl Run {
    pub fn empty(label: impl Into<String>) -> Self {
        Run {
            label: label.into(),
            visits: Vec::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn served(&self) -> impl Iterator<Item = ReqIdx> + '_ {
        self.visits.iter().flat_map(|v| v.served.iter().copied())
    }

    pub fn served_set(&self) -> BTreeSet<ReqIdx> {
        self.served().collect()
    }

    /// Sum of profits of distinct served requests.
    pub fn profit(&self, inst: &Instance) -> Ratio {
        self.served_set()
            .into_iter()
            .map(|i| inst.request(i).profit.clone())
            .sum()
    }

    /// Total travel between consecutive visits.
    pub fn cost(&self, inst: &Instance) -> Ratio {
        self.visits
            .windows(2)
            .map(|pair| inst.travel(pair[0].node, pair[1].node).clone())
            .sum()
    }

    pub fn to_text(&self, inst: &Instance) -> String {
        let mut out = format!("run {}\n", self.label);
        for visit in &self.visits {
            out.push_str(&format!(
                "visit {} {}",
                visit.node,
                format_ratio(&visit.time)
            ));
            if !visit.served.is_empty() {
                out.push_str(" serve");
                for &idx in &visit.served {
                    out.push(' ');
                    out.push_str(&inst.request(idx).id);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Parses one or more runs. Served ids are resolved against `inst`.
pub fn parse_runs(text: &str, inst: &Instance) -> Result<Vec<Run>> {
    let mut runs: Vec<Run> = Vec::new();
    for line in lines(text) {
        match line.keyword() {
            "run" => {
                line.expect_len(2..=2, "run <label>")?;
                runs.push(Run::empty(line.tokens[1].text));
            }
            "visit" => {
                let run = runs
                    .last_mut()
                    .ok_or_else(|| line.tokens[0].error("`visit` before any `run` line"))?;
                if line.tokens.len() < 3 {
                    line.expect_len(3..=3, "visit <node> <time> [serve <id> ...]")?;
                }
                let node = line.tokens[1].index()?;
                let time = line.tokens[2].ratio()?;
                let mut served = Vec::new();
                if let Some(serve) = line.tokens.get(3) {
                    if serve.text != "serve" {
                        return Err(serve.error("expected `serve`"));
                    }
                    for token in &line.tokens[4..] {
                        let idx = inst.request_index(token.text).ok_or_else(|| {
                            token.error(format!("unknown request {:?}", token.text))
                        })?;
                        served.push(idx);
                    }
                }
                run.visits.push(Visit { node, time, served });
            }
            other => return Err(line.tokens[0].error(format!("unknown directive {other:?}"))),
        }
    }
    Ok(runs)
}

/// Serves `order` as early as possible: the first request at its window
/// start, each later one at `max(start_i, t_{i-1} + d)`. Returns `None` when
/// some service time reaches its window end. Co-located requests reachable
/// at the same instant share a visit.
pub fn earliest_schedule(
    inst: &Instance,
    order: &[ReqIdx],
    windows: &WindowMap,
) -> Result<Option<Run>> {
    let mut seen = BTreeSet::new();
    for &idx in order {
        if !windows.contains_key(&idx) {
            return Err(Error::UnknownRequest(request_name(inst, idx)));
        }
        if !seen.insert(idx) {
            return Err(Error::InvalidArgument(format!(
                "request {} appears twice in the order",
                request_name(inst, idx)
            )));
        }
    }

    let mut visits: Vec<Visit> = Vec::new();
    for &idx in order {
        let window = &windows[&idx];
        let node = inst.request(idx).node;
        let time = match visits.last() {
            None => window.start.clone(),
            Some(prev) => {
                let arrival = &prev.time + inst.travel(prev.node, node);
                arrival.max(window.start.clone())
            }
        };
        if time >= window.end {
            return Ok(None);
        }
        match visits.last_mut() {
            Some(prev) if prev.node == node && prev.time == time => prev.served.push(idx),
            _ => visits.push(Visit {
                node,
                time,
                served: vec![idx],
            }),
        }
    }
    Ok(Some(Run {
        label: "earliest".into(),
        visits,
    }))
}

fn request_name(inst: &Instance, idx: ReqIdx) -> String {
    inst.requests()
        .get(idx)
        .map_or_else(|| format!("#{idx}"), |r| r.id.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Visit at a node that does not exist.
    Node,
    /// Visit time earlier than its predecessor.
    Order,
    /// Not enough time to travel between consecutive visits.
    Speed,
    /// Served request unknown to the instance or the window mapping.
    Request,
    /// Service time outside the request window.
    Window,
    /// Request served away from its node.
    Location,
    /// Request served more than once.
    Duplicate,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ViolationKind::Node => "node",
            ViolationKind::Order => "order",
            ViolationKind::Speed => "speed",
            ViolationKind::Request => "request",
            ViolationKind::Window => "window",
            ViolationKind::Location => "location",
            ViolationKind::Duplicate => "duplicate",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the offending visit.
    pub index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub profit: Ratio,
    pub cost: Ratio,
}

/// Checks speed feasibility, window containment, location and served-once,
/// and computes profit and cost. Problems are reported, never raised.
pub fn validate_run(inst: &Instance, run: &Run, windows: &WindowMap) -> RunReport {
    let mut violations = Vec::new();
    let mut push = |kind, index, detail: String| {
        violations.push(Violation {
            kind,
            index,
            detail,
        })
    };
    let mut served_once = BTreeSet::new();
    let mut profit = Ratio::zero();
    let mut cost = Ratio::zero();

    for (i, visit) in run.visits.iter().enumerate() {
        let node_ok = visit.node < inst.node_count();
        if !node_ok {
            push(
                ViolationKind::Node,
                i,
                format!("node {} does not exist", visit.node),
            );
        }
        if i > 0 {
            let prev = &run.visits[i - 1];
            let elapsed = &visit.time - &prev.time;
            if elapsed < Ratio::zero() {
                push(
                    ViolationKind::Order,
                    i,
                    format!(
                        "time {} precedes previous visit at {}",
                        format_ratio(&visit.time),
                        format_ratio(&prev.time)
                    ),
                );
            } else if node_ok && prev.node < inst.node_count() {
                let needed = inst.travel(prev.node, visit.node);
                if &elapsed < needed {
                    push(
                        ViolationKind::Speed,
                        i,
                        format!(
                            "{} elapsed but travel from node {} takes {}",
                            format_ratio(&elapsed),
                            prev.node,
                            format_ratio(needed)
                        ),
                    );
                }
            }
            if node_ok && prev.node < inst.node_count() {
                cost += inst.travel(prev.node, visit.node);
            }
        }
        for &idx in &visit.served {
            let Some(request) = inst.requests().get(idx) else {
                push(
                    ViolationKind::Request,
                    i,
                    format!("request #{idx} does not exist"),
                );
                continue;
            };
            if !served_once.insert(idx) {
                push(
                    ViolationKind::Duplicate,
                    i,
                    format!("request {} already served", request.id),
                );
                continue;
            }
            profit += &request.profit;
            if request.node != visit.node {
                push(
                    ViolationKind::Location,
                    i,
                    format!(
                        "request {} is at node {}, not {}",
                        request.id, request.node, visit.node
                    ),
                );
            }
            match windows.get(&idx) {
                None => push(
                    ViolationKind::Request,
                    i,
                    format!("request {} has no window in this mapping", request.id),
                ),
                Some(window) if !window.contains(&visit.time) => push(
                    ViolationKind::Window,
                    i,
                    format!(
                        "request {} served at {} outside {}",
                        request.id,
                        format_ratio(&visit.time),
                        window
                    ),
                ),
                Some(_) => {}
            }
        }
    }

    RunReport {
        feasible: violations.is_empty(),
        violations,
        profit,
        cost,
    }
}

/// Moves every visit by `delta` and clears all services; the trajectory
/// stays speed-feasible since time differences are unchanged.
pub fn shift_run(run: &Run, delta: &Ratio) -> Run {
    Run {
        label: run.label.clone(),
        visits: run
            .visits
            .iter()
            .map(|v| Visit {
                node: v.node,
                time: &v.time + delta,
                served: Vec::new(),
            })
            .collect(),
    }
}

/// Re-derives services along a fixed trajectory: each visit serves every
/// available request at its node whose window contains the visit time and
/// that no earlier visit already served.
pub fn reserve_services(
    inst: &Instance,
    run: &Run,
    windows: &WindowMap,
    available: &BTreeSet<ReqIdx>,
) -> Run {
    let mut by_node: BTreeMap<NodeId, Vec<ReqIdx>> = BTreeMap::new();
    for &idx in available {
        if windows.contains_key(&idx) {
            by_node.entry(inst.request(idx).node).or_default().push(idx);
        }
    }
    let mut taken = BTreeSet::new();
    let visits = run
        .visits
        .iter()
        .map(|visit| {
            let served = by_node
                .get(&visit.node)
                .into_iter()
                .flatten()
                .copied()
                .filter(|idx| windows[idx].contains(&visit.time) && taken.insert(*idx))
                .collect();
            Visit {
                node: visit.node,
                time: visit.time.clone(),
                served,
            }
        })
        .collect();
    Run {
        label: run.label.clone(),
        visits,
    }
}
