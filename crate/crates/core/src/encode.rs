//! The dense encoding `x ↦ (x̂_n)`: entry `n` is the least dense index whose
//! point lies in the open ball `B(x, 1/(n+1))`.

use crate::arith::rational;
use crate::space::{Point, Space};
use crate::Error;

pub fn encode_point(space: &dyn Space, x: &Point, depth: usize, budget: usize) -> Result<Vec<usize>, Error> {
    let mut out = Vec::with_capacity(depth);
    // Entries never decrease, so each search resumes where the last stopped.
    let mut start = 1;
    for n in 0..depth {
        let radius = rational::ratio(1, n as i64 + 1);
        let limit = space.dense_len().map_or(budget, |len| len.min(budget));
        let hit = (start..=limit).find(|&i| {
            space
                .dense_point(i)
                .is_some_and(|d| space.dist(&d, x).lt(&radius))
        });
        match hit {
            Some(i) => {
                out.push(i);
                start = i;
            }
            None => {
                return Err(Error::BudgetExhausted {
                    what: format!("no dense point within 1/{} of the target", n + 1),
                    budget,
                })
            }
        }
    }
    Ok(out)
}
