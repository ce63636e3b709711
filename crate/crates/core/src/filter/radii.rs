//! Van der Waals radii for the elements that occur in protein heavy atoms.

/// Radius in Angstroms for an element symbol (case-insensitive). Unlisted
/// elements fall back to carbon.
pub fn vdw_radius(element: &str) -> f64 {
    match element.to_ascii_uppercase().as_str() {
        "C" => 1.70,
        "N" => 1.55,
        "O" => 1.52,
        "S" => 1.80,
        "P" => 1.80,
        "SE" => 1.90,
        _ => 1.70,
    }
}

/// Largest radius [`vdw_radius`] can return; bounds the occluder search.
pub const MAX_VDW_RADIUS: f64 = 1.90;
