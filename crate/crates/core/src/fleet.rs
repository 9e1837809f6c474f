//! The two multivehicle algorithms: greedy k-pass profit maximization and
//! six-run covering when one vehicle could serve everything.

use std::collections::BTreeSet;
use std::fmt;

use crate::bounds::p_gamma;
use crate::error::{Error, Result};
use crate::instance::{Instance, ReqIdx};
use crate::ratio::{int, Ratio};
use crate::repairman::{solve_trimmed, SolverConfig};
use crate::schedule::{original_windows, reserve_services, shift_run, validate_run, Run};
use crate::windows::{expand_and_partition, trim_half_unit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FleetSolution {
    pub runs: Vec<Run>,
    /// Requests served by each run; pairwise disjoint.
    pub serviced: Vec<BTreeSet<ReqIdx>>,
    pub run_profits: Vec<Ratio>,
    pub total_profit: Ratio,
    /// Guaranteed fraction of the k-vehicle optimum on trees.
    pub guarantee: Ratio,
}

/// Trims once, then runs the exact trimmed-window solver `k` times, each
/// pass restricted to the requests earlier passes left unserved.
pub fn k_vehicle_greedy(inst: &Instance, k: usize) -> Result<FleetSolution> {
    k_vehicle_greedy_with(inst, k, &SolverConfig::default())
}

pub fn k_vehicle_greedy_with(
    inst: &Instance,
    k: usize,
    config: &SolverConfig,
) -> Result<FleetSolution> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let trimmed = trim_half_unit(inst);
    let windows = original_windows(inst);
    let mut available = inst.all_requests();
    let mut solution = FleetSolution {
        runs: Vec::with_capacity(k),
        serviced: Vec::with_capacity(k),
        run_profits: Vec::with_capacity(k),
        total_profit: int(0),
        guarantee: p_gamma(k as u64, &config.guarantee().gamma)?,
    };
    for pass in 1..=k {
        let run =
            solve_trimmed(&trimmed, &available, config)?.with_label(format!("vehicle-{pass}"));
        let report = validate_run(inst, &run, &windows);
        if !report.feasible {
            return Err(Error::Internal(format!(
                "pass {pass} violates original windows: {:?}",
                report.violations
            )));
        }
        let served = run.served_set();
        for idx in &served {
            available.remove(idx);
        }
        solution.total_profit += &report.profit;
        solution.run_profits.push(report.profit);
        solution.serviced.push(served);
        solution.runs.push(run);
    }
    Ok(solution)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Covered,
    /// The six runs missed a request, so no single run serves them all.
    NoSingleVehicleTour,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Covered => "covered",
            Certificate::NoSingleVehicleTour => "no_single_vehicle_tour",
        })
    }
}

/// Copy labels in crediting order.
pub const COVER_LABELS: [&str; 6] = ["E-1", "E0", "E+1", "O-1", "O0", "O+1"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub runs: Vec<Run>,
    pub covered: bool,
    pub uncovered: Vec<ReqIdx>,
    pub certificate: Certificate,
    /// False when run on a general metric, where coverage is not guaranteed.
    pub tree_metric: bool,
}

/// Expands windows to two unit periods, splits by parity, solves each half
/// optimally, and emits each of the two runs shifted by -1, 0 and +1. The
/// shifted copies re-earn services against the original windows in label
/// order, so each request is credited once.
pub fn single_repair(inst: &Instance) -> Result<CoverSolution> {
    single_repair_with(inst, &SolverConfig::default())
}

pub fn single_repair_with(inst: &Instance, config: &SolverConfig) -> Result<CoverSolution> {
    let (even, odd) = expand_and_partition(inst);
    let all = inst.all_requests();
    let windows = original_windows(inst);
    let halves = [
        solve_trimmed(&even, &all, config)?,
        solve_trimmed(&odd, &all, config)?,
    ];

    let mut remaining = all;
    let mut runs = Vec::with_capacity(6);
    let mut labels = COVER_LABELS.iter();
    for base in &halves {
        for delta in [-1, 0, 1] {
            let label = labels.next().expect("six labels");
            let shifted = shift_run(base, &int(delta)).with_label(*label);
            let run = reserve_services(inst, &shifted, &windows, &remaining);
            for idx in run.served() {
                remaining.remove(&idx);
            }
            runs.push(run);
        }
    }
    let uncovered: Vec<ReqIdx> = remaining.into_iter().collect();
    let covered = uncovered.is_empty();
    Ok(CoverSolution {
        runs,
        covered,
        uncovered,
        certificate: if covered {
            Certificate::Covered
        } else {
            Certificate::NoSingleVehicleTour
        },
        tree_metric: inst.is_tree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::repairman::repairman_3approx;

    fn inst(body: &str, nodes: usize) -> Instance {
        parse_instance(&format!(
            "instance f\nmetric tree\nspeed 1\nnodes {nodes}\n{body}"
        ))
        .unwrap()
    }

    #[test]
    fn one_pass_matches_repairman() {
        let inst = inst(
            "edge 0 1 1/2\nedge 1 2 3/4\nrequest a 0 0.3 1\nrequest b 2 1.1 2\nrequest c 1 0.6 1\n",
            3,
        );
        let fleet = k_vehicle_greedy(&inst, 1).unwrap();
        let single = repairman_3approx(&inst, &inst.all_requests()).unwrap();
        assert_eq!(fleet.runs[0].visits, single.visits);
        assert_eq!(fleet.guarantee, Ratio::new(1.into(), 3.into()));
    }

    #[test]
    fn second_vehicle_idles_when_one_suffices() {
        let inst = inst("request a 0 1.5 4\n", 1);
        let fleet = k_vehicle_greedy(&inst, 2).unwrap();
        assert_eq!(fleet.run_profits, vec![int(4), int(0)]);
        assert_eq!(fleet.total_profit, int(4));
        assert!(fleet.runs[1].visits.is_empty());
        assert_eq!(fleet.guarantee, Ratio::new(11.into(), 36.into()));
        assert!(k_vehicle_greedy(&inst, 0).is_err());
    }

    #[test]
    fn single_request_is_covered() {
        let inst = inst("request a 0 1.5\n", 1);
        let cover = single_repair(&inst).unwrap();
        assert_eq!(cover.runs.len(), 6);
        assert!(cover.covered);
        assert_eq!(cover.certificate, Certificate::Covered);
        let labels: Vec<_> = cover.runs.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, COVER_LABELS);
        assert_eq!(
            cover.runs.iter().map(|r| r.served().count()).sum::<usize>(),
            1
        );
    }

    #[test]
    fn impossible_pair_may_be_uncovered() {
        let inst = inst("edge 0 1 10\nrequest a 0 1.5\nrequest b 1 1.5\n", 2);
        let cover = single_repair(&inst).unwrap();
        assert!(!cover.covered);
        assert_eq!(cover.certificate, Certificate::NoSingleVehicleTour);
        assert_eq!(cover.uncovered.len(), 1);
    }
}
