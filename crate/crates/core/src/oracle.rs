//! Brute-force ground truth on small finite spaces.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{rational, Rational};
use crate::finite::FiniteSpace;
use crate::separation::{is_addable, is_separated, Mode, SeparatedSet, Violation};
use crate::space::{Point, SpaceKind};
use crate::value::ExactValue;
use crate::Error;

/// Largest space the subset enumeration accepts.
pub const ORACLE_LIMIT: usize = 20;

/// Every maximal δ-separated subset (in `mode`) of a finite space, as
/// sorted point ids, in lexicographic order.
pub fn enumerate_maximal_sets(space: &FiniteSpace, delta: &Rational, mode: Mode) -> Result<Vec<Vec<usize>>, Error> {
    let n = space.len();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    let m = space.matrix();
    let ok: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || mode.separated(&m[i][j], delta)).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search(&ok, 0, &mut chosen, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// Include/exclude backtracking. An excluded point must end up blocked by
/// some chosen point; branches where that has become impossible are cut.
fn search(ok: &[Vec<bool>], i: usize, chosen: &mut Vec<usize>, excluded: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = ok.len();
    let blocked = |x: usize, chosen: &[usize]| chosen.iter().any(|&c| !ok[x][c]);
    // an unblocked excluded point can only be blocked by a later point
    if excluded
        .iter()
        .any(|&x| !blocked(x, chosen) && !(i..n).any(|j| !ok[x][j]))
    {
        return;
    }
    if i == n {
        if excluded.iter().all(|&x| blocked(x, chosen)) {
            out.push(chosen.clone());
        }
        return;
    }
    if chosen.iter().all(|&c| ok[i][c]) {
        chosen.push(i);
        search(ok, i + 1, chosen, excluded, out);
        chosen.pop();
    }
    excluded.push(i);
    search(ok, i + 1, chosen, excluded, out);
    excluded.pop();
}

/// Distances are drawn from multiples of `1/4` up to `3`, so values equal
/// to the usual test δ's (`1/2`, `1`, `3/2`) occur often; a quarter of the
/// pairs are forced to exactly 1. Shortest-path closure then enforces the
/// triangle inequality.
pub fn random_finite_metric(n: usize, rng_seed: u64) -> FiniteSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let d = random_closed_matrix(n, &mut rng);
    from_matrix(d, "p")
}

/// Random clusters of zero-distance points over a random metric on the
/// clusters.
pub fn random_finite_pseudometric(n: usize, rng_seed: u64) -> FiniteSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ 0x5eed_cafe);
    let clusters = rng.gen_range(1..=n.max(1));
    let mut assignment: Vec<usize> = (0..n).map(|i| if i < clusters { i } else { rng.gen_range(0..clusters) }).collect();
    assignment.shuffle(&mut rng);
    let base = random_closed_matrix(clusters, &mut rng);
    let d = (0..n)
        .map(|i| (0..n).map(|j| base[assignment[i]][assignment[j]].clone()).collect())
        .collect();
    from_matrix(d, "q")
}

fn random_closed_matrix(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![rational::int(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = if rng.gen_bool(0.25) {
                rational::int(1)
            } else {
                rational::ratio(rng.gen_range(1..=12), 4)
            };
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn from_matrix(d: Vec<Vec<Rational>>, prefix: &str) -> FiniteSpace {
    let n = d.len();
    let pseudo = (0..n).any(|i| (0..n).any(|j| i != j && d[i][j] == rational::int(0)));
    let labels = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let dist = d
        .into_iter()
        .map(|row| row.into_iter().map(ExactValue::rational).collect())
        .collect();
    let kind = if pseudo { SpaceKind::Pseudometric } else { SpaceKind::Metric };
    FiniteSpace::new_unchecked(labels, dist, kind)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheck {
    /// The result equals a catalogued maximal set.
    pub member: bool,
    pub catalogue_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_failure: Option<Violation>,
    /// Points that could still be added.
    pub addable: Vec<Point>,
    /// Ids not in the finite space.
    pub unknown: Vec<Point>,
}

impl CrossCheck {
    pub fn ok(&self) -> bool {
        self.member
    }
}

/// Compares `result` against the brute-force catalogue.
pub fn cross_check(space: &FiniteSpace, delta: &Rational, mode: Mode, result: &SeparatedSet) -> Result<CrossCheck, Error> {
    let catalogue = enumerate_maximal_sets(space, delta, mode)?;
    let mut ids = Vec::new();
    let mut unknown = Vec::new();
    for p in &result.points {
        match p {
            Point::Finite { id } if *id < space.len() => ids.push(*id),
            other => unknown.push(other.clone()),
        }
    }
    ids.sort_unstable();
    ids.dedup();
    let as_mode = SeparatedSet {
        mode,
        delta: delta.clone(),
        ..result.clone()
    };
    let separation_failure = if unknown.is_empty() {
        is_separated(space, &as_mode).err()
    } else {
        None
    };
    let addable = space
        .points()
        .into_iter()
        .filter(|x| !result.contains(x) && is_addable(space, &result.points, delta, mode, x))
        .collect();
    Ok(CrossCheck {
        member: unknown.is_empty() && ids.len() == result.points.len() && catalogue.binary_search(&ids).is_ok(),
        catalogue_size: catalogue.len(),
        separation_failure,
        addable,
        unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    fn pair(d: Rational) -> FiniteSpace {
        FiniteSpace::new(
            vec!["a".into(), "b".into()],
            vec![
                vec![ExactValue::zero(), ExactValue::rational(d.clone())],
                vec![ExactValue::rational(d), ExactValue::zero()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn two_points_far_apart() {
        let s = pair(int(2));
        assert_eq!(enumerate_maximal_sets(&s, &int(1), Mode::Strict).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn boundary_pair_splits_modes() {
        let s = pair(int(1));
        assert_eq!(
            enumerate_maximal_sets(&s, &int(1), Mode::Strict).unwrap(),
            vec![vec![0], vec![1]]
        );
        assert_eq!(
            enumerate_maximal_sets(&s, &int(1), Mode::Nonstrict).unwrap(),
            vec![vec![0, 1]]
        );
    }

    #[test]
    fn line_catalogue() {
        let s = FiniteSpace::line(&[int(0), ratio(3, 5), ratio(6, 5), ratio(5, 2)]).unwrap();
        let cat = enumerate_maximal_sets(&s, &int(1), Mode::Strict).unwrap();
        assert!(cat.contains(&vec![0, 2, 3]));
        assert!(cat.contains(&vec![1, 3]));
        assert_eq!(cat.len(), 2);
    }

    #[test]
    fn single_point_and_limit() {
        let s = random_finite_metric(1, 7);
        assert_eq!(s.len(), 1);
        assert_eq!(enumerate_maximal_sets(&s, &int(1), Mode::Strict).unwrap(), vec![vec![0]]);
        let big = random_finite_metric(21, 7);
        assert!(matches!(
            enumerate_maximal_sets(&big, &int(1), Mode::Strict),
            Err(Error::SizeLimit { size: 21, limit: 20 })
        ));
    }

    #[test]
    fn random_spaces_are_reproducible_and_valid() {
        for seed in 0..20 {
            let a = random_finite_metric(6, seed);
            let b = random_finite_metric(6, seed);
            assert_eq!(format!("{:?}", a.matrix()), format!("{:?}", b.matrix()));
            FiniteSpace::new(a.labels().to_vec(), a.matrix().to_vec()).unwrap();
            let p = random_finite_pseudometric(6, seed);
            FiniteSpace::new(p.labels().to_vec(), p.matrix().to_vec()).unwrap();
        }
    }

    #[test]
    fn cross_check_names_the_problem() {
        let s = FiniteSpace::line(&[int(0), ratio(3, 5), ratio(6, 5), ratio(5, 2)]).unwrap();
        let missing = SeparatedSet::new(vec![s.point(0), s.point(2)], int(1), Mode::Strict);
        let r = cross_check(&s, &int(1), Mode::Strict, &missing).unwrap();
        assert!(!r.member);
        assert_eq!(r.addable, vec![s.point(3)]);
        let clash = SeparatedSet::new(vec![s.point(0), s.point(1), s.point(3)], int(1), Mode::Strict);
        let r = cross_check(&s, &int(1), Mode::Strict, &clash).unwrap();
        assert!(r.separation_failure.is_some());
        let good = SeparatedSet::new(vec![s.point(0), s.point(2), s.point(3)], int(1), Mode::Strict);
        assert!(cross_check(&s, &int(1), Mode::Strict, &good).unwrap().member);
    }
}
