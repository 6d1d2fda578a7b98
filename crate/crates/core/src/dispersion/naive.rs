use std::collections::BTreeSet;

use crate::numerics::Rat;
use crate::pointset::PointSet;

/// Dispersion by exhaustive enumeration: every box whose endpoints come from
/// the per-axis candidate grids is tested against every point.
///
/// Cost grows like `n^{2d+1}`; meant as an independent reference on small
/// inputs only.
pub fn naive_oracle(ps: &PointSet) -> Rat {
    let d = ps.dim();
    let coords: Vec<Vec<Rat>> = ps
        .points()
        .iter()
        .map(|p| p.coords().iter().map(|c| c.to_rat()).collect())
        .collect();

    let grids: Vec<Vec<Rat>> = (0..d)
        .map(|axis| {
            let mut values: BTreeSet<Rat> = coords.iter().map(|p| p[axis].clone()).collect();
            values.insert(Rat::zero());
            values.insert(Rat::one());
            values.into_iter().collect()
        })
        .collect();

    // Point coordinates as grid positions, so containment is an index test.
    let positions: Vec<Vec<usize>> = coords
        .iter()
        .map(|p| {
            p.iter()
                .zip(&grids)
                .map(|(x, g)| g.iter().position(|v| v == x).expect("coordinate in grid"))
                .collect()
        })
        .collect();

    let pairs: Vec<Vec<(usize, usize, Rat)>> = grids
        .iter()
        .map(|g| {
            let mut v = Vec::new();
            for lo in 0..g.len() {
                for hi in lo + 1..g.len() {
                    v.push((lo, hi, &g[hi] - &g[lo]));
                }
            }
            v
        })
        .collect();

    let mut best = Rat::zero();
    let mut choice = vec![0usize; d];
    'boxes: loop {
        let empty = !positions.iter().any(|p| {
            p.iter().enumerate().all(|(axis, &x)| {
                let (lo, hi, _) = &pairs[axis][choice[axis]];
                *lo < x && x < *hi
            })
        });
        if empty {
            let volume: Rat = (0..d)
                .map(|axis| pairs[axis][choice[axis]].2.clone())
                .product();
            if volume > best {
                best = volume;
            }
        }
        // Odometer over all per-axis pair choices.
        for axis in 0..d {
            choice[axis] += 1;
            if choice[axis] < pairs[axis].len() {
                continue 'boxes;
            }
            choice[axis] = 0;
        }
        break;
    }
    best
}
