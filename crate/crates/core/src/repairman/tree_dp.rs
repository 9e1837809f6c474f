//! Exact single-vehicle solver for trimmed windows on a tree.
//!
//! Requests sharing a period share a window, so a run serves whole period
//! groups in time order. Within one period the work is point-to-point
//! orienteering: a walk from `a` to `b` covering the connected subtree `T`
//! costs `2 w(T) - d(a, b)`, and every prize in `T` comes for free. The
//! Pareto frontier of (walk length, prize) over such subtrees is built by a
//! DP over the tree rooted at `a`.
//!
//! Periods are then stitched by label setting on (last node, time, profit,
//! cost): entering period `[s, s + L)` at `a` from a label at `(u, t)` costs
//! the delay `max(0, t + d(u, a) - s)`, and the segment fits if delay plus
//! walk stays below `L`. States only ever sit on tree nodes where a request
//! was served, so mid-edge positions at period boundaries never arise.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, ReqIdx};
use crate::ratio::{int, Ratio};
use crate::schedule::{earliest_schedule, Run};
use crate::windows::{effective_windows, TrimmedInstance};

#[derive(Debug, Clone)]
struct Point {
    cost: Ratio,
    profit: Ratio,
    nodes: Vec<NodeId>,
}

fn pareto(mut points: Vec<Point>, budget: &Ratio) -> Vec<Point> {
    points.retain(|p| &p.cost < budget);
    points.sort_by(|x, y| x.cost.cmp(&y.cost).then_with(|| y.profit.cmp(&x.profit)));
    let mut front: Vec<Point> = Vec::new();
    for p in points {
        if front.last().is_none_or(|last| p.profit > last.profit) {
            front.push(p);
        }
    }
    front
}

fn combine(left: &[Point], right: &[Point], extra: &Ratio) -> Vec<Point> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            let mut nodes = l.nodes.clone();
            nodes.extend_from_slice(&r.nodes);
            out.push(Point {
                cost: &l.cost + &r.cost + extra,
                profit: &l.profit + &r.profit,
                nodes,
            });
        }
    }
    out
}

/// The tree rooted at one node, restricted to branches that hold a prize.
struct Rooted {
    parent: Vec<Option<(NodeId, Ratio)>>,
    children: Vec<Vec<(NodeId, Ratio)>>,
    /// Rooted subtree frontiers with every child optional.
    down: Vec<Vec<Point>>,
}

impl Rooted {
    fn new(inst: &Instance, root: NodeId, prize: &[Ratio], budget: &Ratio) -> Self {
        let n = inst.node_count();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut order = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for (v, w) in inst.neighbors(u) {
                if !seen[*v] {
                    seen[*v] = true;
                    parent[*v] = Some((u, w.clone()));
                    children[u].push((*v, w.clone()));
                    order.push(*v);
                }
            }
            i += 1;
        }

        let mut holds_prize = vec![false; n];
        for &u in order.iter().rev() {
            holds_prize[u] =
                !prize[u].is_zero() || children[u].iter().any(|(c, _)| holds_prize[*c]);
        }
        for list in &mut children {
            list.retain(|(c, _)| holds_prize[*c]);
        }

        let mut rooted = Rooted {
            parent,
            children,
            down: vec![Vec::new(); n],
        };
        for &u in order.iter().rev() {
            if holds_prize[u] {
                rooted.down[u] = rooted.attach(u, None, prize, budget);
            }
        }
        rooted
    }

    /// Frontier of subtrees rooted at `u` with all children optional except
    /// `skip`, which is left out entirely.
    fn attach(
        &self,
        u: NodeId,
        skip: Option<NodeId>,
        prize: &[Ratio],
        budget: &Ratio,
    ) -> Vec<Point> {
        let mut front = vec![Point {
            cost: Ratio::zero(),
            profit: prize[u].clone(),
            nodes: vec![u],
        }];
        for (c, w) in &self.children[u] {
            if Some(*c) == skip {
                continue;
            }
            let mut grown = combine(&front, &self.down[*c], &(w * int(2)));
            grown.extend(front);
            front = pareto(grown, budget);
        }
        front
    }
}

/// A feasible way to serve part of one period, entering at `a` and leaving
/// from `b` after walking `walk`.
struct Segment {
    entry: NodeId,
    exit: NodeId,
    walk: Ratio,
    profit: Ratio,
    order: Vec<ReqIdx>,
}

fn period_segments(
    inst: &Instance,
    groups: &BTreeMap<NodeId, Vec<ReqIdx>>,
    length: &Ratio,
) -> Vec<Segment> {
    let mut prize = vec![Ratio::zero(); inst.node_count()];
    for (&node, reqs) in groups {
        prize[node] = reqs.iter().map(|&r| inst.request(r).profit.clone()).sum();
    }
    let mut segments = Vec::new();
    for &a in groups.keys() {
        let reach = groups
            .keys()
            .map(|&b| inst.travel(a, b).clone())
            .max()
            .unwrap_or_default();
        // Subtree costs are compared before the final -d(a, b) correction.
        let budget = length + &reach;
        let rooted = Rooted::new(inst, a, &prize, &budget);
        for &b in groups.keys() {
            let mut path = vec![b];
            while let Some((p, _)) = rooted.parent[*path.last().unwrap()] {
                path.push(p);
            }
            let mut must = rooted.down[b].clone();
            for pair in path.windows(2) {
                let (child, node) = (pair[0], pair[1]);
                let w = &rooted.parent[child].as_ref().unwrap().1;
                let base = rooted.attach(node, Some(child), &prize, &budget);
                must = pareto(combine(&base, &must, &(w * int(2))), &budget);
            }
            let shortcut = inst.travel(a, b);
            for point in must {
                let walk = &point.cost - shortcut;
                if &walk >= length {
                    continue;
                }
                segments.push(Segment {
                    entry: a,
                    exit: b,
                    walk,
                    profit: point.profit,
                    order: service_order(&rooted, &path, &point.nodes, groups),
                });
            }
        }
    }
    segments
}

/// Preorder of the chosen subtree from the root, taking the branch towards
/// the exit last at every node on the root-exit path.
fn service_order(
    rooted: &Rooted,
    path: &[NodeId],
    nodes: &[NodeId],
    groups: &BTreeMap<NodeId, Vec<ReqIdx>>,
) -> Vec<ReqIdx> {
    let chosen: BTreeSet<NodeId> = nodes.iter().copied().collect();
    let on_path: BTreeSet<NodeId> = path.iter().copied().collect();
    let root = *path.last().unwrap();
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        if let Some(reqs) = groups.get(&u) {
            order.extend_from_slice(reqs);
        }
        let mut kids: Vec<NodeId> = rooted.children[u]
            .iter()
            .map(|(c, _)| *c)
            .filter(|c| chosen.contains(c))
            .collect();
        // Stack order: the path child is pushed first so it is popped last.
        kids.sort_by_key(|c| (!on_path.contains(c), std::cmp::Reverse(*c)));
        stack.extend(kids);
    }
    order
}

struct Label {
    node: NodeId,
    time: Ratio,
    profit: Ratio,
    cost: Ratio,
    parent: Option<usize>,
    order: Vec<ReqIdx>,
}

/// Optimal run on trimmed windows over a tree metric: maximum profit, then
/// minimum cost. Agrees in profit with the exhaustive solver.
pub fn solve_trimmed_tree_dp(t: &TrimmedInstance<'_>, available: &BTreeSet<ReqIdx>) -> Result<Run> {
    let inst = t.base;
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    let mut periods: BTreeMap<i64, BTreeMap<NodeId, Vec<ReqIdx>>> = BTreeMap::new();
    for (&idx, &period) in &t.assignment {
        if available.contains(&idx) {
            periods
                .entry(period)
                .or_default()
                .entry(inst.request(idx).node)
                .or_default()
                .push(idx);
        }
    }

    let length = &t.grid.length;
    let mut labels: Vec<Label> = Vec::new();
    let mut fronts: Vec<Vec<usize>> = vec![Vec::new(); inst.node_count()];
    for (&period, groups) in &periods {
        let start = t.grid.period(period).start;
        let segments = period_segments(inst, groups, length);
        let mut fresh = Vec::new();
        for seg in &segments {
            fresh.push(Label {
                node: seg.exit,
                time: &start + &seg.walk,
                profit: seg.profit.clone(),
                cost: seg.walk.clone(),
                parent: None,
                order: seg.order.clone(),
            });
        }
        for (id, prev) in labels.iter().enumerate() {
            if !fronts[prev.node].contains(&id) {
                continue;
            }
            for seg in &segments {
                let approach = inst.travel(prev.node, seg.entry);
                let delay = (&prev.time + approach - &start).max(Ratio::zero());
                let finish = &delay + &seg.walk;
                if &finish >= length {
                    continue;
                }
                fresh.push(Label {
                    node: seg.exit,
                    time: &start + finish,
                    profit: &prev.profit + &seg.profit,
                    cost: &prev.cost + approach + &seg.walk,
                    parent: Some(id),
                    order: seg.order.clone(),
                });
            }
        }
        for label in fresh {
            let front = &fronts[label.node];
            let dominated = front.iter().any(|&j| {
                let other = &labels[j];
                other.time <= label.time && other.profit >= label.profit && other.cost <= label.cost
            });
            if dominated {
                continue;
            }
            let id = labels.len();
            fronts[label.node].retain(|&j| {
                let other = &labels[j];
                !(label.time <= other.time
                    && label.profit >= other.profit
                    && label.cost <= other.cost)
            });
            fronts[label.node].push(id);
            labels.push(label);
        }
    }

    let mut best: Option<usize> = None;
    for front in &fronts {
        for &id in front {
            let better = best.is_none_or(|b| {
                let (x, y) = (&labels[id], &labels[b]);
                x.profit > y.profit
                    || (x.profit == y.profit && (x.cost < y.cost || (x.cost == y.cost && id < b)))
            });
            if better {
                best = Some(id);
            }
        }
    }
    let mut chain = Vec::new();
    let mut cursor = best;
    while let Some(id) = cursor {
        chain.push(id);
        cursor = labels[id].parent;
    }
    let order: Vec<ReqIdx> = chain
        .into_iter()
        .rev()
        .flat_map(|id| labels[id].order.iter().copied())
        .collect();
    earliest_schedule(inst, &order, &effective_windows(t))?
        .ok_or_else(|| Error::Internal("tree DP optimum failed to reschedule".into()))
}
