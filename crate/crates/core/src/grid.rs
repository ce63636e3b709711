//! Uniform spatial hash grid for fixed-radius neighbor queries in 3D.
//!
//! Cell size equals the query radius, so all points within that radius of a
//! query position live in the 3x3x3 block of cells around it.

use crate::geometry::Vec3;
use std::collections::HashMap;

pub struct SpatialGrid {
    cells: HashMap<(i32, i32, i32), Vec<usize>>,
    cell_size: f64,
}

impl SpatialGrid {
    /// Build a grid over `points`; `cell_size` must be at least the radius of
    /// the neighbor queries issued later.
    pub fn build(points: &[Vec3], cell_size: f64) -> Self {
        assert!(cell_size > 0.0, "cell size must be positive");
        let mut cells: HashMap<(i32, i32, i32), Vec<usize>> = HashMap::new();
        for (idx, p) in points.iter().enumerate() {
            cells.entry(Self::key(*p, cell_size)).or_default().push(idx);
        }
        SpatialGrid { cells, cell_size }
    }

    fn key(p: Vec3, cell: f64) -> (i32, i32, i32) {
        (
            (p.x / cell).floor() as i32,
            (p.y / cell).floor() as i32,
            (p.z / cell).floor() as i32,
        )
    }

    /// Append indices of every point in the 3x3x3 cell block around `pos`.
    /// Candidates are a superset of the true neighbors; callers re-check
    /// exact distances.
    pub fn candidates(&self, pos: Vec3, out: &mut Vec<usize>) {
        out.clear();
        let (cx, cy, cz) = Self::key(pos, self.cell_size);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(v) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_all_points_within_radius() {
        let points = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(0.9, 0.0, 0.0),
            Vec3::new(2.5, 0.0, 0.0),
            Vec3::new(-0.7, 0.4, 0.1),
        ];
        let grid = SpatialGrid::build(&points, 1.0);
        let mut cand = Vec::new();
        grid.candidates(points[0], &mut cand);
        assert!(cand.contains(&0) && cand.contains(&1) && cand.contains(&3));

        // Exhaustive agreement with brute force on the superset property.
        for (i, p) in points.iter().enumerate() {
            grid.candidates(*p, &mut cand);
            for (j, q) in points.iter().enumerate() {
                if p.distance(*q) <= 1.0 {
                    assert!(cand.contains(&j), "missed {j} near {i}");
                }
            }
        }
    }

    #[test]
    fn negative_coordinates_hash_correctly() {
        let points = vec![Vec3::new(-0.01, -0.01, -0.01), Vec3::new(0.01, 0.01, 0.01)];
        let grid = SpatialGrid::build(&points, 5.0);
        let mut cand = Vec::new();
        grid.candidates(points[0], &mut cand);
        assert!(cand.contains(&1));
    }
}
