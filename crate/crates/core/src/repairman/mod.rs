//! Single-vehicle solvers on trimmed instances, where every effective
//! window coincides with one period of a grid.

mod exhaustive;
mod tree_dp;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{Instance, ReqIdx};
use crate::ratio::{int, Ratio};
use crate::schedule::{original_windows, validate_run, Run};
use crate::windows::{effective_windows, trim_half_unit, TrimmedInstance};

pub use tree_dp::solve_trimmed_tree_dp;

/// Largest candidate set the exhaustive solver accepts by default.
pub const DEFAULT_EXACT_GUARD: usize = 12;

/// Sub-optimality factor `gamma` of the trimmed-window solver. Trimming
/// loses at most a factor 3 on top of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverGuarantee {
    pub gamma: Ratio,
}

impl SolverGuarantee {
    pub fn exact() -> Self {
        SolverGuarantee { gamma: int(1) }
    }

    pub fn overall_factor(&self) -> Ratio {
        &self.gamma * int(3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Tree DP on tree metrics, exhaustive search otherwise.
    #[default]
    Auto,
    Exhaustive,
    TreeDp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub exact_guard: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            kind: SolverKind::Auto,
            exact_guard: DEFAULT_EXACT_GUARD,
        }
    }
}

impl SolverConfig {
    pub fn with_kind(kind: SolverKind) -> Self {
        SolverConfig {
            kind,
            ..Self::default()
        }
    }

    /// Both shipped solvers are exact on trimmed windows.
    pub fn guarantee(&self) -> SolverGuarantee {
        SolverGuarantee::exact()
    }
}

/// Maximum-profit, then minimum-cost, run over `available` under the
/// effective windows, by exhaustive search. Ties go to the
/// lexicographically smallest service order.
pub fn solve_trimmed_exact(t: &TrimmedInstance<'_>, available: &BTreeSet<ReqIdx>) -> Result<Run> {
    solve_trimmed_exact_guarded(t, available, DEFAULT_EXACT_GUARD)
}

pub fn solve_trimmed_exact_guarded(
    t: &TrimmedInstance<'_>,
    available: &BTreeSet<ReqIdx>,
    guard: usize,
) -> Result<Run> {
    let candidates: Vec<ReqIdx> = t
        .assignment
        .keys()
        .copied()
        .filter(|idx| available.contains(idx))
        .collect();
    exhaustive::best_run(t.base, &effective_windows(t), &candidates, guard)
}

pub fn solve_trimmed(
    t: &TrimmedInstance<'_>,
    available: &BTreeSet<ReqIdx>,
    config: &SolverConfig,
) -> Result<Run> {
    match config.kind {
        SolverKind::Exhaustive => solve_trimmed_exact_guarded(t, available, config.exact_guard),
        SolverKind::TreeDp => solve_trimmed_tree_dp(t, available),
        SolverKind::Auto if t.base.is_tree() => solve_trimmed_tree_dp(t, available),
        SolverKind::Auto => solve_trimmed_exact_guarded(t, available, config.exact_guard),
    }
}

/// Trims to half-unit periods, solves exactly on the trimmed windows and
/// returns the run, which is feasible for the original windows unchanged.
pub fn repairman_3approx(inst: &Instance, available: &BTreeSet<ReqIdx>) -> Result<Run> {
    repairman_3approx_with(inst, available, &SolverConfig::default())
}

pub fn repairman_3approx_with(
    inst: &Instance,
    available: &BTreeSet<ReqIdx>,
    config: &SolverConfig,
) -> Result<Run> {
    let trimmed = trim_half_unit(inst);
    let run = solve_trimmed(&trimmed, available, config)?.with_label("repairman");
    let report = validate_run(inst, &run, &original_windows(inst));
    if !report.feasible {
        return Err(Error::Internal(format!(
            "trimmed run violates original windows: {:?}",
            report.violations
        )));
    }
    Ok(run)
}
