//! Greedy construction of maximal strictly δ-separated sets from a dense
//! enumeration, and extension of a separated seed by excision.
//!
//! Working at unit scale, the construction picks `(k_1, n_1) = (1, 1)` and
//! then, for `m > 1`,
//!
//! * `n_m` = least `l` such that `B(d_l, 1/2) \ ⋃_{i<m} B̄(d_{k_i}, 1)`
//!   contains a dense point,
//! * `k_m` = least index of such a dense point.
//!
//! Both searches are truncated at the horizon. The resulting trace
//! satisfies `d(d_{k_i}, d_{n_i}) < 1/2`, strictly increasing `n_i`, and
//! `d(d_{k_i}, d_{k_j}) > 1` for `j < i`.

use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::{rational, Rational};
use crate::separation::{is_addable, is_maximal_on_horizon, is_separated, Certificate, Mode, SeparatedSet};
use crate::space::{dense_prefix, Point, Space};
use crate::transform::{rescale, Subspace};
use crate::Error;

/// The `(k_i, n_i)` pairs of a greedy run, in construction order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GreedyTrace {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceViolation {
    /// A pair refers to a dense index the space does not have.
    MissingIndex { step: usize, index: usize },
    /// `d(d_k, d_n) < δ/2` fails at `step`.
    NotInHalfBall { step: usize },
    /// `n_earlier < n_step` fails.
    NotIncreasing { earlier: usize, step: usize },
    /// `d(d_{k_step}, d_{k_earlier}) > δ` fails.
    TooClose { earlier: usize, step: usize },
}

fn check_delta(delta: &Rational) -> Result<(), Error> {
    if delta.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "delta must be positive, got {}",
            rational::format(delta)
        )))
    }
}

/// Runs the construction over dense indices `1..=horizon`, stopping when no
/// `n_m` exists within the horizon or after `max_size` points.
pub fn build_maximal_strict(
    space: &dyn Space,
    delta: &Rational,
    horizon: usize,
    max_size: usize,
) -> Result<(SeparatedSet, GreedyTrace, Certificate), Error> {
    check_delta(delta)?;
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let unit = rescale(space, Rational::one() / delta)?;
    let dense: Vec<Point> = dense_prefix(&unit, horizon).into_iter().map(|(_, p)| p).collect();
    let trace = greedy_unit(&unit, &dense, max_size);
    let points = trace.pairs.iter().map(|&(k, _)| dense[k - 1].clone()).collect();
    let mut set = SeparatedSet::new(points, delta.clone(), Mode::Strict);
    set.trace = Some(trace.clone());
    let cert = is_maximal_on_horizon(space, &set, horizon);
    Ok((set, trace, cert))
}

fn greedy_unit(unit: &dyn Space, dense: &[Point], max_size: usize) -> GreedyTrace {
    let half = rational::ratio(1, 2);
    let one = Rational::one();
    let h = dense.len();
    // alive[k]: d_{k+1} lies outside every closed unit ball chosen so far.
    let mut alive = vec![true; h];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // n_m always exceeds n_{m-1}, and a failed l stays failed as the
    // excluded region only grows, so each l is examined once.
    let mut next_l = 1;
    while pairs.len() < max_size {
        let mut found = None;
        while next_l <= h && found.is_none() {
            let center = &dense[next_l - 1];
            found = (1..=h)
                .find(|&k| alive[k - 1] && unit.dist(&dense[k - 1], center).lt(&half))
                .map(|k| (k, next_l));
            next_l += 1;
        }
        let Some((k, n)) = found else { break };
        pairs.push((k, n));
        let chosen = &dense[k - 1];
        for (slot, p) in alive.iter_mut().zip(dense) {
            if *slot && !unit.dist(p, chosen).gt(&one) {
                *slot = false;
            }
        }
    }
    GreedyTrace { pairs }
}

/// Extends a strictly δ-separated seed to a horizon-maximal one.
///
/// Points within closed distance δ of the seed are excised; the survivors
/// (dense points up to the horizon, then extra points) form the dense
/// enumeration of the residual subspace, on which the greedy construction
/// runs. The seed together with its output is returned.
pub fn extend_via_excision(
    space: Arc<dyn Space>,
    seed: &SeparatedSet,
    horizon: usize,
) -> Result<(SeparatedSet, Certificate), Error> {
    check_delta(&seed.delta)?;
    if let Err(v) = is_separated(space.as_ref(), &SeparatedSet { mode: Mode::Strict, ..seed.clone() }) {
        return Err(Error::Precondition(format!("seed is not strictly separated: {v:?}")));
    }
    let delta = &seed.delta;
    let survives = |p: &Point| is_addable(space.as_ref(), &seed.points, delta, Mode::Strict, p);
    let mut residual: Vec<Point> = dense_prefix(space.as_ref(), horizon)
        .into_iter()
        .map(|(_, p)| p)
        .filter(|p| survives(p))
        .collect();
    for p in space.extra_points() {
        if !residual.contains(&p) && survives(&p) {
            residual.push(p);
        }
    }
    let mut points = seed.points.clone();
    let mut trace = GreedyTrace::default();
    if !residual.is_empty() {
        let n = residual.len();
        let sub = Subspace::new(space.clone(), residual, Vec::new());
        let (found, t, _) = build_maximal_strict(&sub, delta, n, usize::MAX)?;
        points.extend(found.points);
        trace = t;
    }
    let mut set = SeparatedSet::new(points, delta.clone(), Mode::Strict);
    set.trace = Some(trace);
    let cert = is_maximal_on_horizon(space.as_ref(), &set, horizon);
    Ok((set, cert))
}

/// Checks the three trace properties exactly.
pub fn check_trace(space: &dyn Space, trace: &GreedyTrace, delta: &Rational) -> Result<(), TraceViolation> {
    let half = delta / rational::int(2);
    let point = |step: usize, index: usize| {
        space
            .dense_point(index)
            .filter(|_| index >= 1)
            .ok_or(TraceViolation::MissingIndex { step, index })
    };
    let mut ks = Vec::with_capacity(trace.pairs.len());
    for (i, &(k, n)) in trace.pairs.iter().enumerate() {
        let step = i + 1;
        let dk = point(step, k)?;
        let dn = point(step, n)?;
        if !space.dist(&dk, &dn).lt(&half) {
            return Err(TraceViolation::NotInHalfBall { step });
        }
        for (j, &(_, nj)) in trace.pairs[..i].iter().enumerate() {
            if nj >= n {
                return Err(TraceViolation::NotIncreasing { earlier: j + 1, step });
            }
        }
        for (j, dkj) in ks.iter().enumerate() {
            if !space.dist(&dk, dkj).gt(delta) {
                return Err(TraceViolation::TooClose { earlier: j + 1, step });
            }
        }
        ks.push(dk);
    }
    Ok(())
}

pub fn verify_trace(space: &dyn Space, trace: &GreedyTrace, delta: &Rational) -> bool {
    check_trace(space, trace, delta).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};
    use crate::finite::FiniteSpace;
    use crate::value::ExactValue;

    fn line() -> FiniteSpace {
        FiniteSpace::line(&[int(0), ratio(3, 5), ratio(6, 5), ratio(5, 2)]).unwrap()
    }

    #[test]
    fn line_example_picks_three_points() {
        let s = line();
        let (set, trace, cert) = build_maximal_strict(&s, &int(1), 4, 100).unwrap();
        assert_eq!(trace.pairs, vec![(1, 1), (3, 3), (4, 4)]);
        assert_eq!(set.points, vec![s.point(0), s.point(2), s.point(3)]);
        assert!(cert.ok());
        assert!(verify_trace(&s, &trace, &int(1)));
    }

    #[test]
    fn widely_spaced_points_are_all_selected() {
        let s = FiniteSpace::line(&[int(0), int(2), int(4), int(7)]).unwrap();
        let (_, trace, _) = build_maximal_strict(&s, &int(1), 10, 100).unwrap();
        assert_eq!(trace.pairs, vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn singleton_space() {
        let s = FiniteSpace::line(&[int(3)]).unwrap();
        let (set, trace, cert) = build_maximal_strict(&s, &int(1), 5, 100).unwrap();
        assert_eq!(trace.pairs, vec![(1, 1)]);
        assert_eq!(set.len(), 1);
        assert!(cert.ok());
    }

    #[test]
    fn empty_space_gives_vacuous_result() {
        let s = FiniteSpace::line(&[]).unwrap();
        let (set, trace, cert) = build_maximal_strict(&s, &int(1), 5, 100).unwrap();
        assert!(set.is_empty() && trace.pairs.is_empty() && cert.ok());
    }

    #[test]
    fn max_size_caps_output() {
        let s = FiniteSpace::line(&[int(0), int(2), int(4), int(7)]).unwrap();
        let (set, _, cert) = build_maximal_strict(&s, &int(1), 10, 2).unwrap();
        assert_eq!(set.len(), 2);
        assert!(!cert.maximal_on_horizon);
    }

    #[test]
    fn extension_excises_closed_balls() {
        let s = line();
        let seed = SeparatedSet::new(vec![s.point(1)], int(1), Mode::Strict);
        let (set, cert) = extend_via_excision(Arc::new(s.clone()), &seed, 4).unwrap();
        assert_eq!(set.points, vec![s.point(1), s.point(3)]);
        assert!(cert.ok());
    }

    #[test]
    fn empty_seed_extension_matches_builder() {
        let s = line();
        let (built, _, _) = build_maximal_strict(&s, &int(1), 4, usize::MAX).unwrap();
        let seed = SeparatedSet::empty(int(1), Mode::Strict);
        let (ext, _) = extend_via_excision(Arc::new(s), &seed, 4).unwrap();
        assert_eq!(built.points, ext.points);
    }

    #[test]
    fn extension_rejects_unseparated_seed() {
        let s = line();
        let seed = SeparatedSet::new(vec![s.point(0), s.point(1)], int(1), Mode::Strict);
        assert!(matches!(
            extend_via_excision(Arc::new(s), &seed, 4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trace_with_repeated_n_fails() {
        let s = line();
        let trace = GreedyTrace { pairs: vec![(1, 1), (2, 1)] };
        assert!(!verify_trace(&s, &trace, &int(1)));
    }

    #[test]
    fn trace_at_exact_delta_fails_in_strict_mode() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let one = ExactValue::int(1);
        let s = FiniteSpace::new(
            labels,
            vec![vec![ExactValue::zero(), one.clone()], vec![one, ExactValue::zero()]],
        )
        .unwrap();
        let trace = GreedyTrace { pairs: vec![(1, 1), (2, 2)] };
        assert_eq!(
            check_trace(&s, &trace, &int(1)),
            Err(TraceViolation::TooClose { earlier: 1, step: 2 })
        );
    }
}
