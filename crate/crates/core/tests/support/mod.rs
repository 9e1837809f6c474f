//! Independent brute-force oracles and instance families for integration
//! tests. Nothing here calls the library's search or scheduling code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uwvrp::instance::{generate_random_instance, Edge};
use uwvrp::ratio::{frac, int};
use uwvrp::schedule::WindowMap;
use uwvrp::{Instance, MetricKind, Ratio, ReqIdx};

/// Small random tree instance; horizons between 2 and 4 keep requests
/// close enough in time to interact.
pub fn small_tree(seed: u64, max_nodes: usize, max_requests: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let nodes = rng.gen_range(1..=max_nodes);
    let requests = rng.gen_range(1..=max_requests);
    let horizon = frac(rng.gen_range(20..=40), 10);
    generate_random_instance(nodes, requests, &horizon, seed).unwrap()
}

/// Same requests as a random tree instance, on a general graph with a few
/// extra edges.
pub fn small_general(seed: u64, max_nodes: usize, max_requests: usize) -> Instance {
    let base = small_tree(seed, max_nodes, max_requests);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e7e);
    let n = base.node_count();
    let mut edges: Vec<Edge> = base.edges().to_vec();
    if n >= 3 {
        for _ in 0..rng.gen_range(1..=n) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push(Edge {
                    u,
                    v,
                    weight: frac(rng.gen_range(1..=8), 8),
                });
            }
        }
    }
    Instance::new(
        format!("general-{seed}"),
        MetricKind::General,
        n,
        edges,
        base.requests().to_vec(),
        int(1),
    )
    .unwrap()
}

/// Earliest service times along `order`, or None if some window is missed.
fn times_along(inst: &Instance, order: &[ReqIdx], windows: &WindowMap) -> Option<Vec<Ratio>> {
    let mut times: Vec<Ratio> = Vec::with_capacity(order.len());
    for (i, &r) in order.iter().enumerate() {
        let w = &windows[&r];
        let t = if i == 0 {
            w.start.clone()
        } else {
            let prev = order[i - 1];
            let d = inst
                .distance(inst.request(prev).node, inst.request(r).node)
                .unwrap();
            let arrival = &times[i - 1] + d;
            if arrival > w.start {
                arrival
            } else {
                w.start.clone()
            }
        };
        if t >= w.end {
            return None;
        }
        times.push(t);
    }
    Some(times)
}

fn order_cost(inst: &Instance, order: &[ReqIdx]) -> Ratio {
    order
        .windows(2)
        .map(|p| {
            inst.distance(inst.request(p[0]).node, inst.request(p[1]).node)
                .unwrap()
        })
        .sum()
}

pub fn profit_of(inst: &Instance, set: impl IntoIterator<Item = ReqIdx>) -> Ratio {
    set.into_iter()
        .map(|r| inst.request(r).profit.clone())
        .sum()
}

/// Every feasible service sequence over `candidates`, with no pruning:
/// returns the maximum profit and the minimum cost among sequences that
/// reach it.
pub fn unpruned_best(
    inst: &Instance,
    windows: &WindowMap,
    candidates: &[ReqIdx],
) -> (Ratio, Ratio) {
    fn walk(
        inst: &Instance,
        windows: &WindowMap,
        candidates: &[ReqIdx],
        order: &mut Vec<ReqIdx>,
        best: &mut (Ratio, Ratio),
    ) {
        if times_along(inst, order, windows).is_none() {
            return;
        }
        let profit = profit_of(inst, order.iter().copied());
        let cost = order_cost(inst, order);
        if profit > best.0 || (profit == best.0 && cost < best.1) {
            *best = (profit, cost);
        }
        for &c in candidates {
            if !order.contains(&c) {
                order.push(c);
                walk(inst, windows, candidates, order, best);
                order.pop();
            }
        }
    }
    let mut best = (Ratio::zero(), Ratio::zero());
    walk(inst, windows, candidates, &mut Vec::new(), &mut best);
    best
}

/// Every subset of `candidates` (as a bitmask over their positions) that a
/// single vehicle can serve, found by trying all permutations.
pub fn feasible_subsets(inst: &Instance, windows: &WindowMap, candidates: &[ReqIdx]) -> Vec<bool> {
    let n = candidates.len();
    let mut feasible = vec![false; 1 << n];
    fn walk(
        inst: &Instance,
        windows: &WindowMap,
        candidates: &[ReqIdx],
        order: &mut Vec<usize>,
        mask: usize,
        feasible: &mut [bool],
    ) {
        let reqs: Vec<ReqIdx> = order.iter().map(|&i| candidates[i]).collect();
        if times_along(inst, &reqs, windows).is_none() {
            return;
        }
        feasible[mask] = true;
        for i in 0..candidates.len() {
            if mask & (1 << i) == 0 {
                order.push(i);
                walk(inst, windows, candidates, order, mask | (1 << i), feasible);
                order.pop();
            }
        }
    }
    walk(inst, windows, candidates, &mut Vec::new(), 0, &mut feasible);
    feasible
}

/// k-vehicle optimum by assigning each request to one of k vehicles or to
/// nobody, all (k+1)^n ways.
pub fn unpruned_opt_k(inst: &Instance, windows: &WindowMap, k: usize) -> Ratio {
    let candidates: Vec<ReqIdx> = windows.keys().copied().collect();
    let n = candidates.len();
    let feasible = feasible_subsets(inst, windows, &candidates);
    let mut best = Ratio::zero();
    let total = (k + 1).pow(n as u32);
    for code in 0..total {
        let mut masks = vec![0usize; k];
        let mut c = code;
        let mut served = 0usize;
        for i in 0..n {
            let bucket = c % (k + 1);
            c /= k + 1;
            if bucket < k {
                masks[bucket] |= 1 << i;
                served |= 1 << i;
            }
        }
        if masks.iter().all(|&m| feasible[m]) {
            let profit = profit_of(
                inst,
                (0..n)
                    .filter(|i| served & (1 << i) != 0)
                    .map(|i| candidates[i]),
            );
            if profit > best {
                best = profit;
            }
        }
    }
    best
}

/// Whether some timing of `order` meets every window, searching over the
/// finite candidate set `start_j + d(j..i)` for each position `i`.
pub fn feasible_by_candidate_times(inst: &Instance, order: &[ReqIdx], windows: &WindowMap) -> bool {
    let node = |r: ReqIdx| inst.request(r).node;
    let candidates: Vec<Vec<Ratio>> = (0..order.len())
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let mut t = windows[&order[j]].start.clone();
                    for s in j..i {
                        t += inst.distance(node(order[s]), node(order[s + 1])).unwrap();
                    }
                    t
                })
                .collect()
        })
        .collect();
    fn assign(
        inst: &Instance,
        order: &[ReqIdx],
        windows: &WindowMap,
        candidates: &[Vec<Ratio>],
        chosen: &mut Vec<Ratio>,
    ) -> bool {
        let i = chosen.len();
        if i == order.len() {
            return true;
        }
        for t in &candidates[i] {
            if !windows[&order[i]].contains(t) {
                continue;
            }
            if i > 0 {
                let d = inst
                    .distance(inst.request(order[i - 1]).node, inst.request(order[i]).node)
                    .unwrap();
                if t - &chosen[i - 1] < d {
                    continue;
                }
            }
            chosen.push(t.clone());
            if assign(inst, order, windows, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    assign(inst, order, windows, &candidates, &mut Vec::new())
}

pub fn all_ids(inst: &Instance) -> BTreeSet<ReqIdx> {
    inst.all_requests()
}
