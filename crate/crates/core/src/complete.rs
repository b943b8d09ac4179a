//! Extension of non-strictly δ-separated sets in complete spaces.
//!
//! Two pieces:
//!
//! * [`choose_in_closed`] selects a point of a nonempty closed set `F` by
//!   walking the dense enumeration: `n_1` is the least index within `1/2`
//!   of `F`, and `n_{k+1}` the least index in `B(x_{n_k}, 2^-k)` within
//!   `2^-(k+1)` of `F`. Consecutive picks are closer than `2^-k`, and the
//!   `k`-th pick is within `2^-k` of `F`.
//! * [`extend_nonstrict`] runs over closed `δ/3`-balls around the
//!   enumeration: `k_n` is the least index past `k_{n-1}` whose ball still
//!   has points outside every open δ-ball around the seed and the points
//!   chosen so far; the next point is selected from that residual.
//!
//! Residual nonemptiness is not decidable from dense points alone (the
//! residual can have empty interior), so spaces supply a
//! [`RegionWitness`]. Finite presentations get an exact scan; other spaces
//! fall back to a dense-point search whose certificates are marked
//! heuristic.

use std::sync::Arc;

use num_traits::{One, Signed};

use crate::arith::{rational, Rational};
use crate::separation::{is_maximal_on_horizon, is_separated, in_excision, Certificate, Mode, SeparatedSet};
use crate::space::{all_points, horizon_points, Point, Space};
use crate::Error;

/// A closed set, accessed through ball-intersection queries.
pub trait ClosedSet {
    /// Whether the set meets the open ball `B(center, radius)`.
    fn meets_ball(&self, center: &Point, radius: &Rational) -> bool;

    /// Exact membership, when available.
    fn contains(&self, _p: &Point) -> Option<bool> {
        None
    }

    /// An exact member of the set nearest to `p`, when the set can
    /// compute one.
    fn snap(&self, _p: &Point) -> Option<Point> {
        None
    }
}

/// `B̄(center, radius)` minus the open balls `B(e, r_e)` in `exclusions`.
#[derive(Clone, Debug)]
pub struct Residual {
    pub center: Point,
    pub radius: Rational,
    pub exclusions: Vec<(Point, Rational)>,
}

impl Residual {
    pub fn contains(&self, space: &dyn Space, p: &Point) -> bool {
        space.dist(p, &self.center).le(&self.radius)
            && self.exclusions.iter().all(|(e, r)| space.dist(p, e).ge(r))
    }
}

/// Decides nonemptiness of residual regions and exposes them as closed
/// sets.
pub trait RegionWitness: Send + Sync {
    /// `Some(true)`/`Some(false)` when decided, `None` when unknown.
    fn residual_nonempty(&self, region: &Residual) -> Option<bool>;

    fn residual_set<'a>(&'a self, region: &'a Residual) -> Box<dyn ClosedSet + 'a>;
}

/// Exact witness for a finite presentation: scans every point.
pub struct FiniteScan<'s> {
    space: &'s dyn Space,
    points: Vec<Point>,
}

impl<'s> FiniteScan<'s> {
    pub fn new(space: &'s dyn Space) -> Result<Self, Error> {
        Ok(FiniteScan {
            space,
            points: all_points(space)?,
        })
    }
}

struct MemberList<'a> {
    space: &'a dyn Space,
    members: Vec<&'a Point>,
    region: &'a Residual,
}

impl ClosedSet for MemberList<'_> {
    fn meets_ball(&self, center: &Point, radius: &Rational) -> bool {
        self.members.iter().any(|m| self.space.dist(center, m).lt(radius))
    }

    fn contains(&self, p: &Point) -> Option<bool> {
        Some(self.region.contains(self.space, p))
    }
}

impl RegionWitness for FiniteScan<'_> {
    fn residual_nonempty(&self, region: &Residual) -> Option<bool> {
        Some(self.points.iter().any(|p| region.contains(self.space, p)))
    }

    fn residual_set<'a>(&'a self, region: &'a Residual) -> Box<dyn ClosedSet + 'a> {
        Box::new(MemberList {
            space: self.space,
            members: self.points.iter().filter(|p| region.contains(self.space, p)).collect(),
            region,
        })
    }
}

/// Incomplete fallback: looks for dense witnesses up to a limit. A `false`
/// answer is reported as unknown.
pub struct DenseSearch<'s> {
    space: &'s dyn Space,
    points: Vec<Point>,
}

impl<'s> DenseSearch<'s> {
    pub fn new(space: &'s dyn Space, limit: usize) -> Self {
        DenseSearch {
            space,
            points: horizon_points(space, limit),
        }
    }
}

impl RegionWitness for DenseSearch<'_> {
    fn residual_nonempty(&self, region: &Residual) -> Option<bool> {
        self.points
            .iter()
            .any(|p| region.contains(self.space, p))
            .then_some(true)
    }

    fn residual_set<'a>(&'a self, region: &'a Residual) -> Box<dyn ClosedSet + 'a> {
        Box::new(MemberList {
            space: self.space,
            members: self.points.iter().filter(|p| region.contains(self.space, p)).collect(),
            region,
        })
    }
}

/// The enumeration walked by the selector: dense points, then extra
/// points for finite presentations.
struct Enumeration<'s> {
    space: &'s dyn Space,
    dense_len: Option<usize>,
    extras: Vec<Point>,
}

impl<'s> Enumeration<'s> {
    fn new(space: &'s dyn Space) -> Self {
        let dense_len = space.dense_len();
        let extras = if dense_len.is_some() {
            space.extra_points()
        } else {
            Vec::new()
        };
        Enumeration {
            space,
            dense_len,
            extras,
        }
    }

    fn len(&self) -> Option<usize> {
        self.dense_len.map(|n| n + self.extras.len())
    }

    fn get(&self, i: usize) -> Option<Point> {
        match self.dense_len {
            Some(n) if i > n => self.extras.get(i - n - 1).cloned(),
            _ => self.space.dense_point(i),
        }
    }

    fn least(&self, budget: usize, pred: impl Fn(&Point) -> bool) -> Option<(usize, Point)> {
        let end = self.len().map_or(budget, |n| n.min(budget));
        (1..=end).find_map(|i| self.get(i).filter(|p| pred(p)).map(|p| (i, p)))
    }

    /// `least` restricted to the open ball `B(center, radius)`.
    fn least_in_ball(
        &self,
        budget: usize,
        center: &Point,
        radius: &Rational,
        pred: impl Fn(&Point) -> bool,
    ) -> Option<(usize, Point)> {
        if self.extras.is_empty() {
            if let Some(mut inside) = self.space.dense_in_ball(center, radius, budget) {
                return inside.find(|(_, p)| pred(p));
            }
        }
        self.least(budget, |p| self.space.dist(p, center).lt(radius) && pred(p))
    }
}

/// Outcome of the closed-set selector.
#[derive(Clone, Debug)]
pub struct ClosedChoice {
    pub indices: Vec<usize>,
    pub points: Vec<Point>,
    /// Upper bound on the distance from the last point to the set.
    pub gap: Rational,
}

impl ClosedChoice {
    pub fn point(&self) -> &Point {
        self.points.last().expect("at least one step")
    }
}

/// Walks `steps` halving steps toward `closed`. `budget` caps the indices
/// searched at each step.
pub fn choose_in_closed(
    space: &dyn Space,
    closed: &dyn ClosedSet,
    steps: usize,
    budget: usize,
) -> Result<ClosedChoice, Error> {
    if !space.is_complete() {
        return Err(Error::Unsupported("closed-set selection needs a complete space".into()));
    }
    if steps == 0 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let walk = Enumeration::new(space);
    let mut choice = ClosedChoice {
        indices: Vec::with_capacity(steps),
        points: Vec::with_capacity(steps),
        gap: rational::inv_pow2(1),
    };
    advance(&walk, closed, &mut choice, steps, budget)?;
    Ok(choice)
}

fn advance(
    walk: &Enumeration<'_>,
    closed: &dyn ClosedSet,
    choice: &mut ClosedChoice,
    until: usize,
    budget: usize,
) -> Result<(), Error> {
    while choice.indices.len() < until {
        let k = choice.indices.len() as u32;
        let near = rational::inv_pow2(k + 1);
        let hit = match choice.points.last() {
            None => walk.least(budget, |p| closed.meets_ball(p, &near)),
            Some(prev) => {
                let hop = rational::inv_pow2(k);
                walk.least_in_ball(budget, prev, &hop, |p| closed.meets_ball(p, &near))
            }
        };
        let (i, p) = hit.ok_or_else(|| Error::BudgetExhausted {
            what: format!("closed-set selector step {}", k + 1),
            budget,
        })?;
        choice.indices.push(i);
        choice.points.push(p);
        choice.gap = near;
    }
    Ok(())
}

/// Runs the selector and returns an exact member of `closed`.
///
/// After `steps` steps the walk continues (up to 64 more steps) until the
/// current point is a member; a set that can project onto itself is
/// snapped instead.
fn select_member(
    space: &dyn Space,
    closed: &dyn ClosedSet,
    steps: usize,
    budget: usize,
) -> Result<Point, Error> {
    let walk = Enumeration::new(space);
    let mut choice = ClosedChoice {
        indices: Vec::new(),
        points: Vec::new(),
        gap: Rational::one(),
    };
    advance(&walk, closed, &mut choice, steps.max(1), budget)?;
    for extra in 0..=64 {
        let p = choice.point().clone();
        match closed.contains(&p) {
            Some(true) => return Ok(p),
            Some(false) | None => {
                if let Some(s) = closed.snap(&p) {
                    return Ok(s);
                }
            }
        }
        if extra < 64 {
            let next = choice.indices.len() + 1;
            advance(&walk, closed, &mut choice, next, budget)?;
        }
    }
    Err(Error::Unsupported(
        "selector did not reach an exact member of the closed set".into(),
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct ExtendBudgets {
    /// Enumeration indices examined, and the certificate horizon.
    pub enum_limit: usize,
    /// Minimum number of selector steps per chosen point.
    pub steps: usize,
}

impl Default for ExtendBudgets {
    fn default() -> Self {
        ExtendBudgets {
            enum_limit: 4096,
            steps: 8,
        }
    }
}

/// Extends a non-strictly δ-separated seed in a complete space.
pub fn extend_nonstrict(
    space: Arc<dyn Space>,
    seed: &SeparatedSet,
    budgets: ExtendBudgets,
) -> Result<(SeparatedSet, Certificate), Error> {
    let space_ref = space.as_ref();
    let delta = seed.delta.clone();
    if !delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    if !space.is_complete() {
        return Err(Error::Unsupported(
            "non-strict extension needs a complete space with a region witness".into(),
        ));
    }
    let as_nonstrict = SeparatedSet {
        mode: Mode::Nonstrict,
        ..seed.clone()
    };
    if let Err(v) = is_separated(space_ref, &as_nonstrict) {
        return Err(Error::Precondition(format!("seed is not non-strictly separated: {v:?}")));
    }

    let scan;
    let fallback;
    let (witness, heuristic): (&dyn RegionWitness, bool) = match space.region_witness() {
        Some(w) => (w, false),
        None if space.dense_len().is_some() => {
            scan = FiniteScan::new(space_ref)?;
            (&scan, false)
        }
        None => {
            fallback = DenseSearch::new(space_ref, budgets.enum_limit);
            (&fallback, true)
        }
    };

    let enumeration = horizon_points(space_ref, budgets.enum_limit);
    let mut chosen: Vec<Point> = Vec::new();
    if let Some(first) = enumeration
        .iter()
        .find(|p| !in_excision(space_ref, &seed.points, &delta, p))
    {
        chosen.push(first.clone());
        let third = &delta / rational::int(3);
        let budget = enumeration.len().max(budgets.enum_limit);
        let mut k_prev = 0;
        loop {
            let exclusions: Vec<(Point, Rational)> = seed
                .points
                .iter()
                .chain(&chosen)
                .map(|p| (p.clone(), delta.clone()))
                .collect();
            let next = enumeration.iter().enumerate().skip(k_prev).find_map(|(i, x)| {
                let region = Residual {
                    center: x.clone(),
                    radius: third.clone(),
                    exclusions: exclusions.clone(),
                };
                (witness.residual_nonempty(&region) == Some(true)).then_some((i + 1, region))
            });
            let Some((k, region)) = next else { break };
            let residual = witness.residual_set(&region);
            let y = select_member(space_ref, residual.as_ref(), budgets.steps, budget)?;
            chosen.push(y);
            k_prev = k;
        }
    }

    let mut points = seed.points.clone();
    points.extend(chosen);
    let set = SeparatedSet::new(points, delta, Mode::Nonstrict);
    let mut cert = is_maximal_on_horizon(space_ref, &set, budgets.enum_limit);
    cert.heuristic = heuristic;
    Ok((set, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};
    use crate::finite::FiniteSpace;

    fn line() -> FiniteSpace {
        FiniteSpace::line(&[int(0), ratio(1, 2), int(1), ratio(3, 2), int(2)]).unwrap()
    }

    #[test]
    fn extends_seed_on_the_line() {
        let s = line();
        let seed = SeparatedSet::new(vec![s.point(0)], int(1), Mode::Nonstrict);
        let (set, cert) = extend_nonstrict(Arc::new(s.clone()), &seed, ExtendBudgets::default()).unwrap();
        assert_eq!(set.points, vec![s.point(0), s.point(2), s.point(4)]);
        assert!(cert.ok() && !cert.heuristic);
    }

    #[test]
    fn maximal_seed_is_returned_unchanged() {
        let s = line();
        let seed = SeparatedSet::new(vec![s.point(0), s.point(2), s.point(4)], int(1), Mode::Nonstrict);
        let (set, cert) = extend_nonstrict(Arc::new(s), &seed, ExtendBudgets::default()).unwrap();
        assert_eq!(set.points, seed.points);
        assert!(cert.ok());
    }

    #[test]
    fn empty_seed_starts_at_first_dense_point() {
        let s = line();
        let seed = SeparatedSet::empty(int(1), Mode::Nonstrict);
        let (set, cert) = extend_nonstrict(Arc::new(s.clone()), &seed, ExtendBudgets::default()).unwrap();
        assert_eq!(set.points[0], s.point(0));
        assert!(cert.ok());
    }

    #[test]
    fn rejects_unseparated_seed() {
        let s = line();
        let seed = SeparatedSet::new(vec![s.point(0), s.point(1)], int(1), Mode::Nonstrict);
        assert!(matches!(
            extend_nonstrict(Arc::new(s), &seed, ExtendBudgets::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn selector_on_whole_finite_space_starts_at_first_index() {
        let s = line();
        let region = Residual {
            center: s.point(2),
            radius: int(10),
            exclusions: vec![],
        };
        let scan = FiniteScan::new(&s).unwrap();
        let whole = scan.residual_set(&region);
        let choice = choose_in_closed(&s, whole.as_ref(), 5, 100).unwrap();
        assert_eq!(choice.indices, vec![1; 5]);
        assert_eq!(choice.gap, rational::inv_pow2(5));
    }
}
