//! Brute-force reference checks for the structured algorithms.
//!
//! Each function here recomputes a result from definitions alone, with no
//! lattice formulas, so it can cross-validate the fast paths.

use crate::interval::{Interval, IntervalPoset};
use crate::lattice::{glb, lub};

pub use crate::category::{enumerate_cones, probe_cones, sample_cones, verify_universal_property};

/// Greatest lower bound of two intervals in the precision order, by search.
pub fn interval_glb(ip: &IntervalPoset, i: Interval, j: Interval) -> Option<Interval> {
    let (x, y) = (ip.index(i)?, ip.index(j)?);
    glb(ip.carrier(), x, y).map(|k| ip.interval(k))
}

/// Least upper bound of two intervals in the precision order, by search.
pub fn interval_lub(ip: &IntervalPoset, i: Interval, j: Interval) -> Option<Interval> {
    let (x, y) = (ip.index(i)?, ip.index(j)?);
    lub(ip.carrier(), x, y).map(|k| ip.interval(k))
}

/// The thin reading of atomicity: `vertex` is a common refinement of the
/// feet, and no other common refinement `y` has `y ⊇ vertex`.
pub fn is_atomic_definitional(ip: &IntervalPoset, left: Interval, vertex: Interval, right: Interval) -> bool {
    let (Some(l), Some(v), Some(r)) = (ip.index(left), ip.index(vertex), ip.index(right)) else {
        return false;
    };
    if !ip.contains(l, v) || !ip.contains(r, v) {
        return false;
    }
    !(0..ip.len()).any(|y| y != v && ip.contains(l, y) && ip.contains(r, y) && ip.contains(y, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{interval_join, interval_meet, interval_poset, is_atomic_cospan};
    use crate::lattice::downset_lattice;
    use crate::poset::FinPoset;

    #[test]
    fn agrees_on_the_diamond() {
        let l = downset_lattice(&FinPoset::antichain(2)).lattice;
        let ip = interval_poset(l.carrier());
        for &i in ip.intervals() {
            for &j in ip.intervals() {
                assert_eq!(interval_glb(&ip, i, j), Some(interval_meet(&l, i, j)));
                assert_eq!(interval_lub(&ip, i, j), interval_join(&l, i, j));
                for &v in ip.intervals() {
                    if let Ok(fast) = is_atomic_cospan(&l, i, v, j) {
                        assert_eq!(fast, is_atomic_definitional(&ip, i, v, j));
                    }
                }
            }
        }
    }
}
