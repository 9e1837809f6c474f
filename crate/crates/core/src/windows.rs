//! Period grids and the two window transformations: trimming each unit
//! window down to the half-unit period it wholly contains, and expanding it
//! up to the two unit periods it intersects.
//!
//! A window that starts exactly on a division is treated as if it started a
//! negligible amount earlier. Both rules are applied in closed form, so no
//! epsilon ever enters the arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::instance::{Instance, ReqIdx, Window};
use crate::ratio::{frac, int, Ratio};
use crate::schedule::WindowMap;

/// Periods `[origin + i*length, origin + (i+1)*length)` for integer `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodGrid {
    pub origin: Ratio,
    pub length: Ratio,
}

impl PeriodGrid {
    pub fn half_unit() -> Self {
        PeriodGrid {
            origin: int(0),
            length: frac(1, 2),
        }
    }

    pub fn period(&self, index: i64) -> Window {
        let start = &self.origin + &self.length * int(index);
        let end = &start + &self.length;
        Window::new(start, end)
    }
}

/// Which half of the even/odd partition an expanded window belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetTag {
    Even,
    Odd,
}

impl fmt::Display for SetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetTag::Even => "E",
            SetTag::Odd => "O",
        })
    }
}

/// An instance whose effective windows coincide exactly with grid periods.
#[derive(Debug, Clone)]
pub struct TrimmedInstance<'a> {
    pub base: &'a Instance,
    pub grid: PeriodGrid,
    pub assignment: BTreeMap<ReqIdx, i64>,
}

impl<'a> TrimmedInstance<'a> {
    pub fn window(&self, idx: ReqIdx) -> Option<Window> {
        self.assignment.get(&idx).map(|&p| self.grid.period(p))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

fn to_i64(value: BigInt) -> i64 {
    value.to_i64().expect("period index fits in i64")
}

/// Assigns every request the half-unit period wholly inside its window:
/// index `ceil(2 * release)`. A release exactly on a division keeps the
/// period starting there.
pub fn trim_half_unit(inst: &Instance) -> TrimmedInstance<'_> {
    let assignment = inst
        .requests()
        .iter()
        .enumerate()
        .map(|(i, r)| (i, to_i64((&r.release * int(2)).ceil().to_integer())))
        .collect();
    TrimmedInstance {
        base: inst,
        grid: PeriodGrid::half_unit(),
        assignment,
    }
}

/// First unit period intersected by `[release, release + 1)` after the
/// boundary perturbation: `ceil(release) - 1`.
pub fn first_unit_period(release: &Ratio) -> i64 {
    to_i64(release.ceil().to_integer()) - 1
}

/// Expands every window to the two unit periods `[p, p + 2)` it intersects
/// and splits requests by the parity of `p`. The even set lives on the
/// 2-unit grid with origin 0, the odd set on the one with origin 1.
pub fn expand_and_partition(inst: &Instance) -> (TrimmedInstance<'_>, TrimmedInstance<'_>) {
    let mut even = BTreeMap::new();
    let mut odd = BTreeMap::new();
    for (i, r) in inst.requests().iter().enumerate() {
        let p = first_unit_period(&r.release);
        if p.is_even() {
            even.insert(i, p.div_euclid(2));
        } else {
            odd.insert(i, (p - 1).div_euclid(2));
        }
    }
    let grid = |origin: i64| PeriodGrid {
        origin: int(origin),
        length: int(2),
    };
    (
        TrimmedInstance {
            base: inst,
            grid: grid(0),
            assignment: even,
        },
        TrimmedInstance {
            base: inst,
            grid: grid(1),
            assignment: odd,
        },
    )
}

pub fn set_tag(release: &Ratio) -> SetTag {
    if first_unit_period(release).is_even() {
        SetTag::Even
    } else {
        SetTag::Odd
    }
}

pub fn effective_windows(t: &TrimmedInstance<'_>) -> WindowMap {
    t.assignment
        .iter()
        .map(|(&idx, &p)| (idx, t.grid.period(p)))
        .collect()
}

/// Unit length check used by property tests and the CLI table.
pub fn is_unit(window: &Window) -> bool {
    window.length() == Ratio::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{MetricKind, Request};
    use crate::ratio::parse_ratio;

    fn single(release: &str) -> Instance {
        Instance::new(
            "w",
            MetricKind::Tree,
            1,
            vec![],
            vec![Request {
                id: "a".into(),
                node: 0,
                release: parse_ratio(release).unwrap(),
                profit: int(1),
            }],
            int(1),
        )
        .unwrap()
    }

    fn trimmed(release: &str) -> Window {
        let inst = single(release);
        trim_half_unit(&inst).window(0).unwrap()
    }

    fn expanded(release: &str) -> (Window, SetTag) {
        let inst = single(release);
        let (even, odd) = expand_and_partition(&inst);
        match (even.window(0), odd.window(0)) {
            (Some(w), None) => (w, SetTag::Even),
            (None, Some(w)) => (w, SetTag::Odd),
            other => panic!("request in both or neither set: {other:?}"),
        }
    }

    fn w(s: i64, sd: i64, e: i64, ed: i64) -> Window {
        Window::new(frac(s, sd), frac(e, ed))
    }

    #[test]
    fn trimming_examples() {
        assert_eq!(trimmed("0.7"), w(1, 1, 3, 2));
        assert_eq!(trimmed("0.2"), w(1, 2, 1, 1));
        assert_eq!(trimmed("0.5"), w(1, 2, 1, 1));
        assert_eq!(trimmed("0"), w(0, 1, 1, 2));
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(expanded("0.7"), (w(0, 1, 2, 1), SetTag::Even));
        assert_eq!(expanded("1.3"), (w(1, 1, 3, 1), SetTag::Odd));
        assert_eq!(expanded("1.0"), (w(0, 1, 2, 1), SetTag::Even));
        assert_eq!(expanded("0"), (w(-1, 1, 1, 1), SetTag::Odd));
        assert_eq!(set_tag(&frac(13, 10)), SetTag::Odd);
    }

    #[test]
    fn effective_window_periods() {
        let inst = single("1");
        let empty = TrimmedInstance {
            base: &inst,
            grid: PeriodGrid::half_unit(),
            assignment: BTreeMap::new(),
        };
        assert!(effective_windows(&empty).is_empty());
        let half = TrimmedInstance {
            base: &inst,
            grid: PeriodGrid::half_unit(),
            assignment: [(0, 2)].into_iter().collect(),
        };
        assert_eq!(effective_windows(&half)[&0], w(1, 1, 3, 2));
        let odd = TrimmedInstance {
            base: &inst,
            grid: PeriodGrid {
                origin: int(1),
                length: int(2),
            },
            assignment: [(0, 1)].into_iter().collect(),
        };
        assert_eq!(effective_windows(&odd)[&0], w(3, 1, 5, 1));
    }
}
