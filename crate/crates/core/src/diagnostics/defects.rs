use std::collections::VecDeque;

use serde::Serialize;

use crate::field::{Domain, Field};
use crate::manifold::{biaxiality, Potential};
use crate::Result;

/// Biaxiality above which a Q-tensor node is flagged regardless of its distance to `N`.
pub const BIAXIALITY_THRESHOLD: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectComponent {
    pub nodes: usize,
    /// Mean position of the component's nodes.
    pub center: [f64; 3],
    pub max_dist_to_n: f64,
}

/// Nodes far from the vacuum manifold (or strongly biaxial), grouped into
/// 26-connected components.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectSet {
    pub tau: f64,
    pub biaxiality_threshold: f64,
    pub nodes: Vec<usize>,
    pub components: Vec<DefectComponent>,
}

impl DefectSet {
    pub fn centers(&self) -> Vec<[f64; 3]> {
        self.components.iter().map(|c| c.center).collect()
    }
}

/// Flags domain nodes with `dist(u, N) > τ` (default `s*/4`) or, for
/// Q-tensors, biaxiality above [`BIAXIALITY_THRESHOLD`].
pub fn detect_defects(field: &Field, potential: &Potential, tau: Option<f64>) -> Result<DefectSet> {
    let tau = tau.unwrap_or(potential.s_star() / 4.0);
    let grid = field.grid();
    let n = grid.len();
    let mut flagged = vec![false; n];
    let mut dist = vec![0.0; n];
    for p in 0..n {
        if grid.domain() != Domain::Box && !grid.inside_domain(grid.position(p)) {
            continue;
        }
        let z = field.point(p);
        dist[p] = potential.dist_to_n(&z);
        let biaxial = field.k() == 5
            && biaxiality(&z).is_ok_and(|b| b > BIAXIALITY_THRESHOLD);
        flagged[p] = dist[p] > tau || biaxial;
    }
    let nodes: Vec<usize> = (0..n).filter(|&p| flagged[p]).collect();
    let dims = grid.dims().map(|d| d as i64);
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for &start in &nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let (mut count, mut sum, mut worst) = (0usize, [0.0; 3], 0.0f64);
        while let Some(p) = queue.pop_front() {
            count += 1;
            let x = grid.position(p);
            for a in 0..3 {
                sum[a] += x[a];
            }
            worst = worst.max(dist[p]);
            let c = grid.coords(p).map(|v| v as i64);
            for di in -1..=1 {
                for dj in -1..=1 {
                    for dl in -1..=1 {
                        let q = [c[0] + di, c[1] + dj, c[2] + dl];
                        if (0..3).any(|a| q[a] < 0 || q[a] >= dims[a]) {
                            continue;
                        }
                        let qi = grid.index(q[0] as usize, q[1] as usize, q[2] as usize);
                        if flagged[qi] && !seen[qi] {
                            seen[qi] = true;
                            queue.push_back(qi);
                        }
                    }
                }
            }
        }
        components.push(DefectComponent {
            nodes: count,
            center: sum.map(|s| s / count as f64),
            max_dist_to_n: worst,
        });
    }
    Ok(DefectSet {
        tau,
        biaxiality_threshold: BIAXIALITY_THRESHOLD,
        nodes,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::manifold::TargetPoint;

    #[test]
    fn separate_blobs_are_separate_components() {
        let g = Grid::centered_cube(11, 1.0, Domain::Box).unwrap();
        let pot = Potential::ginzburg_landau();
        let f = Field::from_fn(g, 3, |x| {
            let near = |c: f64| (x[0] - c).abs() < 0.15 && x[1].abs() < 0.15 && x[2].abs() < 0.15;
            if near(-0.6) || near(0.6) {
                TargetPoint::new(&[0.0, 0.0, 0.1])
            } else {
                TargetPoint::new(&[0.0, 0.0, 1.0])
            }
        })
        .unwrap();
        let set = detect_defects(&f, &pot, None).unwrap();
        assert_eq!(set.components.len(), 2);
        assert!((set.components[0].center[0] + 0.6).abs() < 1e-12);
        assert!((set.components[1].center[0] - 0.6).abs() < 1e-12);
        assert!((set.tau - 0.25).abs() < 1e-15);
    }

    #[test]
    fn diagonal_neighbours_connect() {
        let g = Grid::centered_cube(5, 1.0, Domain::Box).unwrap();
        let pot = Potential::ginzburg_landau();
        let f = Field::from_fn(g, 3, |x| {
            let on = (x[0] - x[1]).abs() < 1e-9 && (x[1] - x[2]).abs() < 1e-9;
            TargetPoint::new(&[0.0, 0.0, if on { 0.0 } else { 1.0 }])
        })
        .unwrap();
        let set = detect_defects(&f, &pot, None).unwrap();
        assert_eq!(set.nodes.len(), 5);
        assert_eq!(set.components.len(), 1);
    }
}
