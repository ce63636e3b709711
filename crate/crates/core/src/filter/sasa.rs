//! Solvent-accessible surface area by the Shrake-Rupley rolling-probe
//! method with a deterministic Fibonacci sphere lattice.

use super::radii::vdw_radius;
use crate::geometry::Vec3;
use crate::grid::SpatialGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SasaParams {
    /// Solvent probe radius in Angstroms.
    pub probe_radius: f64,
    /// Sample points per atom sphere.
    pub n_points: usize,
}

impl Default for SasaParams {
    fn default() -> Self {
        SasaParams { probe_radius: 1.4, n_points: 960 }
    }
}

/// One sphere in the SASA computation: an atom center plus its element.
#[derive(Debug, Clone, PartialEq)]
pub struct SasaAtom {
    pub position: Vec3,
    pub element: String,
}

/// Evenly spread unit vectors from the Fibonacci lattice. Deterministic:
/// the same `n` always yields the same points.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Total solvent-accessible surface area of the atom set, in squared
/// Angstroms. A sample point on an atom's expanded sphere counts as exposed
/// when it lies outside every other atom's expanded sphere.
pub fn sasa(atoms: &[SasaAtom], params: &SasaParams) -> f64 {
    per_atom_sasa(atoms, params).iter().sum()
}

/// SASA contribution of each atom, in input order.
pub fn per_atom_sasa(atoms: &[SasaAtom], params: &SasaParams) -> Vec<f64> {
    let spheres: Vec<(Vec3, f64)> =
        atoms.iter().map(|a| (a.position, vdw_radius(&a.element))).collect();
    shrake_rupley_sasa(&spheres, params.probe_radius, params.n_points)
}

/// Per-sphere accessible area for arbitrary (center, radius) spheres.
/// The probe radius is added to every sphere before sampling.
pub fn shrake_rupley_sasa(spheres: &[(Vec3, f64)], probe: f64, n_points: usize) -> Vec<f64> {
    assert!(n_points >= 32, "too few sample points for a usable estimate");
    let radii: Vec<f64> = spheres.iter().map(|&(_, r)| r + probe).collect();
    let positions: Vec<Vec3> = spheres.iter().map(|&(p, _)| p).collect();
    let unit = fibonacci_sphere(n_points);

    // Any occluding pair satisfies |ci - cj| < ri + rj <= cell size, so the
    // 27-cell neighborhood scan finds every occluder.
    let max_radius = radii.iter().cloned().fold(0.0, f64::max);
    let cell = 2.0 * max_radius;
    let grid = SpatialGrid::build(&positions, cell.max(1e-9));

    let mut areas = vec![0.0; spheres.len()];
    let mut candidates = Vec::new();
    let mut occluders: Vec<usize> = Vec::new();
    for i in 0..spheres.len() {
        let ri = radii[i];
        grid.candidates(positions[i], &mut candidates);
        occluders.clear();
        for &j in &candidates {
            if j == i {
                continue;
            }
            let reach = ri + radii[j];
            if positions[i].distance_squared(positions[j]) < reach * reach {
                occluders.push(j);
            }
        }
        let mut exposed = 0usize;
        'point: for u in &unit {
            let p = positions[i] + *u * ri;
            for &j in &occluders {
                if p.distance_squared(positions[j]) < radii[j] * radii[j] {
                    continue 'point;
                }
            }
            exposed += 1;
        }
        areas[i] = 4.0 * std::f64::consts::PI * ri * ri * exposed as f64 / n_points as f64;
    }
    areas
}

/// Exact exposed area of two spheres with radii `r1`, `r2` (probe included)
/// at center distance `d`. Reference for validating the sampled estimate.
pub fn two_sphere_exposed_area(r1: f64, r2: f64, d: f64) -> f64 {
    let full = 4.0 * std::f64::consts::PI * (r1 * r1 + r2 * r2);
    if d >= r1 + r2 {
        return full;
    }
    if d <= (r1 - r2).abs() {
        // One sphere engulfs the other; only the larger surface remains.
        let r = r1.max(r2);
        return 4.0 * std::f64::consts::PI * r * r;
    }
    // Each sphere loses the cap buried inside the other.
    let h1 = r1 - (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r2 - (d * d + r2 * r2 - r1 * r1) / (2.0 * d);
    full - 2.0 * std::f64::consts::PI * (r1 * h1 + r2 * h2)
}
