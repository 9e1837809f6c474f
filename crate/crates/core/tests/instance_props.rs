mod support;

use proptest::prelude::*;
use uwvrp::instance::{generate_random_instance, parse_instance, serialize_instance};
use uwvrp::ratio::{frac, int};
use uwvrp::{Instance, NodeId, Ratio};

/// Tree path length by walking parent pointers from a DFS rooted at `u`.
fn path_walk(inst: &Instance, u: NodeId, v: NodeId) -> Ratio {
    let n = inst.node_count();
    let mut parent: Vec<Option<(NodeId, Ratio)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(x) = stack.pop() {
        for e in inst.edges() {
            let other = if e.u == x {
                e.v
            } else if e.v == x {
                e.u
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                parent[other] = Some((x, &e.weight / inst.speed()));
                stack.push(other);
            }
        }
    }
    let mut total = int(0);
    let mut cursor = v;
    while let Some((p, w)) = parent[cursor].clone() {
        total += w;
        cursor = p;
    }
    total
}

#[test]
fn random_instances_validate_and_round_trip() {
    for seed in 0..200u64 {
        let nodes = 1 + (seed as usize % 12);
        let inst =
            generate_random_instance(nodes, 1 + (seed as usize % 9), &frac(7, 2), seed).unwrap();
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(serialize_instance(&back), text);
    }
}

#[test]
fn tree_distances_match_path_walk() {
    for seed in 0..60u64 {
        let inst = support::small_tree(seed, 10, 3);
        for u in 0..inst.node_count() {
            for v in 0..inst.node_count() {
                assert_eq!(
                    inst.distance(u, v).unwrap(),
                    path_walk(&inst, u, v),
                    "seed {seed} {u}-{v}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn triangle_inequality(seed in any::<u64>(), general in any::<bool>()) {
        let inst = if general { support::small_general(seed, 8, 1) } else { support::small_tree(seed, 8, 1) };
        let n = inst.node_count();
        for u in 0..n {
            prop_assert_eq!(inst.distance(u, u).unwrap(), int(0));
            for v in 0..n {
                let uv = inst.distance(u, v).unwrap();
                prop_assert_eq!(&uv, &inst.distance(v, u).unwrap());
                for w in 0..n {
                    prop_assert!(inst.distance(u, w).unwrap() <= &uv + inst.distance(v, w).unwrap());
                }
            }
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), nodes in 1usize..15, requests in 1usize..12) {
        let inst = generate_random_instance(nodes, requests, &int(5), seed).unwrap();
        prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }
}
