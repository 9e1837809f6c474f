//! Seeded random instance generators.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, MetricKind, NodeId, Request};
use crate::ratio::{frac, int, Ratio};
use crate::schedule::{Run, Visit};

/// Edge weights are drawn from {1/8, 2/8, ..., 1}.
const WEIGHT_STEPS: i64 = 8;

fn random_tree(rng: &mut ChaCha8Rng, node_count: usize) -> Vec<Edge> {
    (1..node_count)
        .map(|v| Edge {
            u: rng.gen_range(0..v),
            v,
            weight: frac(rng.gen_range(1..=WEIGHT_STEPS), WEIGHT_STEPS),
        })
        .collect()
}

fn request_ids(count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len();
    (0..count).map(|i| format!("r{i:0width$}")).collect()
}

/// Random tree with uniform attachment, releases on the 1/10 grid inside
/// `(0, horizon - 1)` and profits in {1, 2, 3}.
pub fn generate_random_instance(
    node_count: usize,
    request_count: usize,
    horizon: &Ratio,
    seed: u64,
) -> Result<Instance> {
    if node_count == 0 || request_count == 0 {
        return Err(Error::InvalidArgument("counts must be at least 1".into()));
    }
    let span = horizon - Ratio::one();
    if !span.is_positive() {
        return Err(Error::InvalidArgument("horizon must exceed 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_tree(&mut rng, node_count);

    // Grid points m/10 with 0 < m/10 < horizon - 1.
    let tenths = (&span * int(10)).ceil().to_integer();
    let grid_points: u64 = (tenths - 1u32).try_into().unwrap_or(u64::MAX / 2);
    let requests = request_ids(request_count)
        .into_iter()
        .map(|id| {
            let release = if grid_points == 0 {
                &span / int(2)
            } else {
                Ratio::new(rng.gen_range(1..=grid_points).into(), 10.into())
            };
            Request {
                id,
                node: rng.gen_range(0..node_count),
                release,
                profit: int(rng.gen_range(1..=3)),
            }
        })
        .collect();
    Instance::new(
        format!("random-n{node_count}-m{request_count}-s{seed}"),
        MetricKind::Tree,
        node_count,
        edges,
        requests,
        int(1),
    )
}

/// Builds a random timed walk on a random tree, then plants every request at
/// a visited node with a release that puts the visit inside its window.
/// Returns the instance together with the walk as a witness run that serves
/// every request.
pub fn generate_feasible_opt1_instance(
    node_count: usize,
    request_count: usize,
    seed: u64,
) -> Result<(Instance, Run)> {
    if node_count == 0 || request_count == 0 {
        return Err(Error::InvalidArgument("counts must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_tree(&mut rng, node_count);
    let mut neighbors: Vec<Vec<(NodeId, Ratio)>> = vec![Vec::new(); node_count];
    for edge in &edges {
        neighbors[edge.u].push((edge.v, edge.weight.clone()));
        neighbors[edge.v].push((edge.u, edge.weight.clone()));
    }

    let steps = request_count + node_count;
    let mut node = rng.gen_range(0..node_count);
    let mut time = int(1) + frac(rng.gen_range(0..10), 10);
    let mut walk = vec![(node, time.clone())];
    for _ in 1..steps {
        if !neighbors[node].is_empty() && rng.gen_bool(0.7) {
            let (next, weight) = neighbors[node][rng.gen_range(0..neighbors[node].len())].clone();
            node = next;
            time = time + weight + frac(rng.gen_range(0..=3), 10);
        } else {
            time += frac(rng.gen_range(1..=5), 10);
        }
        walk.push((node, time.clone()));
    }

    let ids = request_ids(request_count);
    let mut planted: Vec<Vec<usize>> = vec![Vec::new(); walk.len()];
    let requests: Vec<Request> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let at = rng.gen_range(0..walk.len());
            planted[at].push(i);
            let (node, time) = &walk[at];
            Request {
                id: id.clone(),
                node: *node,
                release: time - frac(rng.gen_range(0..10), 10),
                profit: int(1),
            }
        })
        .collect();

    let instance = Instance::new(
        format!("opt1-n{node_count}-m{request_count}-s{seed}"),
        MetricKind::Tree,
        node_count,
        edges,
        requests,
        int(1),
    )?;
    let visits = walk
        .into_iter()
        .zip(planted)
        .map(|((node, time), served)| {
            let mut served: Vec<_> = served
                .into_iter()
                .map(|i| instance.request_index(&ids[i]).expect("planted id exists"))
                .collect();
            served.sort_unstable();
            Visit { node, time, served }
        })
        .collect();
    let witness = Run {
        label: "witness".into(),
        visits,
    };
    Ok((instance, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{parse_instance, serialize_instance};
    use crate::schedule::{original_windows, validate_run};

    #[test]
    fn smallest_random_instance_round_trips() {
        let inst = generate_random_instance(2, 1, &int(3), 9).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate_random_instance(7, 5, &int(6), 1234).unwrap();
        let b = generate_random_instance(7, 5, &int(6), 1234).unwrap();
        assert_eq!(serialize_instance(&a), serialize_instance(&b));
        let c = generate_random_instance(7, 5, &int(6), 1235).unwrap();
        assert_ne!(serialize_instance(&a), serialize_instance(&c));
    }

    #[test]
    fn releases_stay_inside_horizon() {
        for seed in 0..50 {
            let horizon = frac(23, 10);
            let inst = generate_random_instance(4, 6, &horizon, seed).unwrap();
            for r in inst.requests() {
                assert!(r.release.is_positive());
                assert!(r.release < &horizon - int(1));
            }
        }
        let narrow = generate_random_instance(1, 1, &frac(21, 20), 0).unwrap();
        assert_eq!(narrow.request(0).release, frac(1, 40));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_random_instance(0, 1, &int(3), 0).is_err());
        assert!(generate_random_instance(1, 0, &int(3), 0).is_err());
        assert!(generate_random_instance(1, 1, &int(1), 0).is_err());
        assert!(generate_feasible_opt1_instance(1, 0, 0).is_err());
    }

    #[test]
    fn single_node_witness() {
        let (inst, witness) = generate_feasible_opt1_instance(1, 1, 3).unwrap();
        assert_eq!(inst.requests().len(), 1);
        let report = validate_run(&inst, &witness, &original_windows(&inst));
        assert!(report.feasible, "{:?}", report.violations);
        assert_eq!(report.profit, int(1));
    }

    #[test]
    fn witnesses_serve_everything() {
        for seed in 0..100 {
            let (inst, witness) = generate_feasible_opt1_instance(
                1 + (seed as usize % 7),
                1 + (seed as usize % 9),
                seed,
            )
            .unwrap();
            let report = validate_run(&inst, &witness, &original_windows(&inst));
            assert!(report.feasible, "seed {seed}: {:?}", report.violations);
            assert_eq!(report.profit, inst.total_profit(), "seed {seed}");
        }
    }
}
