//! Quality filtering of extracted interfaces: experimental method,
//! resolution, and buried surface area thresholds.

pub mod radii;
pub mod sasa;

pub use radii::vdw_radius;
pub use sasa::{
    fibonacci_sphere, per_atom_sasa, sasa, shrake_rupley_sasa, two_sphere_exposed_area,
    SasaAtom, SasaParams,
};

use crate::interface::Interface;
use crate::structure::Structure;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("chain {0} not found in structure")]
    MissingChain(String),
}

/// Acceptance thresholds. Defaults: X-ray or cryo-EM structures at 3.5 A or
/// better, burying at least 500 square Angstroms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterCriteria {
    /// Accepted experimental methods, uppercase.
    pub allowed_methods: Vec<String>,
    /// Resolution ceiling in Angstroms; entries without a resolution fail.
    pub max_resolution: f64,
    /// Buried surface area floor in squared Angstroms.
    pub min_bsa: f64,
}

impl Default for FilterCriteria {
    fn default() -> Self {
        FilterCriteria {
            allowed_methods: vec![
                "X-RAY DIFFRACTION".to_string(),
                "ELECTRON MICROSCOPY".to_string(),
            ],
            max_resolution: 3.5,
            min_bsa: 500.0,
        }
    }
}

impl FilterCriteria {
    /// A multi-method entry (components joined by ';') passes when any
    /// component is allowed. A missing method fails.
    pub fn method_ok(&self, method: Option<&str>) -> bool {
        match method {
            Some(m) => m
                .split(';')
                .map(|part| part.trim().to_ascii_uppercase())
                .any(|part| self.allowed_methods.contains(&part)),
            None => false,
        }
    }

    pub fn resolution_ok(&self, resolution: Option<f64>) -> bool {
        matches!(resolution, Some(r) if r <= self.max_resolution)
    }

    pub fn bsa_ok(&self, bsa: f64) -> bool {
        bsa >= self.min_bsa
    }
}

/// Per-interface evaluation of every criterion, kept even for passing
/// interfaces so the tallies are auditable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterOutcome {
    pub id: String,
    pub method_ok: bool,
    pub resolution_ok: bool,
    pub bsa_ok: bool,
    pub bsa: f64,
    pub pass: bool,
}

/// Summary of a filtering run. Criterion tallies are independent: an
/// interface failing two criteria is counted in both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub total: usize,
    pub passed: usize,
    pub failed_method: usize,
    pub failed_resolution: usize,
    pub failed_bsa: usize,
    pub outcomes: Vec<FilterOutcome>,
}

/// Buried surface area of a chain pair: the solvent-accessible area the two
/// chains lose by forming the complex, clamped to zero.
pub fn compute_bsa(
    structure: &Structure,
    chain_a: &str,
    chain_b: &str,
    params: &SasaParams,
) -> Result<f64, FilterError> {
    let a = chain_atoms(structure, chain_a)
        .ok_or_else(|| FilterError::MissingChain(chain_a.to_string()))?;
    let b = chain_atoms(structure, chain_b)
        .ok_or_else(|| FilterError::MissingChain(chain_b.to_string()))?;
    let mut both = a.clone();
    both.extend(b.iter().cloned());
    let buried = sasa(&a, params) + sasa(&b, params) - sasa(&both, params);
    Ok(buried.max(0.0))
}

fn chain_atoms(structure: &Structure, chain_id: &str) -> Option<Vec<SasaAtom>> {
    let chain = structure.chain(chain_id)?;
    let mut atoms = Vec::new();
    for residue in &chain.residues {
        for atom in &residue.atoms {
            atoms.push(SasaAtom { position: atom.position, element: atom.element.clone() });
        }
    }
    Some(atoms)
}

/// Apply the criteria to each interface of one structure. Returns the
/// passing interfaces and the full report.
pub fn filter_interfaces(
    structure: &Structure,
    interfaces: &[Interface],
    criteria: &FilterCriteria,
    params: &SasaParams,
) -> (Vec<Interface>, FilterReport) {
    let method_ok = criteria.method_ok(structure.method.as_deref());
    let resolution_ok = criteria.resolution_ok(structure.resolution);

    // Single-chain areas are shared across pairs; compute each once. An
    // interface naming a chain absent from the structure buries nothing and
    // fails the BSA criterion rather than aborting the run.
    let mut chain_sasa: BTreeMap<String, f64> = BTreeMap::new();
    let mut cached_sasa = |id: &str| -> f64 {
        if let Some(&v) = chain_sasa.get(id) {
            return v;
        }
        let v = sasa(&chain_atoms(structure, id).unwrap_or_default(), params);
        chain_sasa.insert(id.to_string(), v);
        v
    };

    let mut passing = Vec::new();
    let mut report = FilterReport {
        total: interfaces.len(),
        passed: 0,
        failed_method: 0,
        failed_resolution: 0,
        failed_bsa: 0,
        outcomes: Vec::with_capacity(interfaces.len()),
    };
    for iface in interfaces {
        let bsa = match iface.chains.as_slice() {
            [a, b] => {
                let sep = cached_sasa(&a.id) + cached_sasa(&b.id);
                let mut atoms = chain_atoms(structure, &a.id).unwrap_or_default();
                atoms.extend(chain_atoms(structure, &b.id).unwrap_or_default());
                (sep - sasa(&atoms, params)).max(0.0)
            }
            _ => 0.0,
        };
        let bsa_ok = criteria.bsa_ok(bsa);
        let pass = method_ok && resolution_ok && bsa_ok;
        if !method_ok {
            report.failed_method += 1;
        }
        if !resolution_ok {
            report.failed_resolution += 1;
        }
        if !bsa_ok {
            report.failed_bsa += 1;
        }
        if pass {
            report.passed += 1;
            passing.push(iface.clone());
        }
        report.outcomes.push(FilterOutcome {
            id: iface.id.clone(),
            method_ok,
            resolution_ok,
            bsa_ok,
            bsa,
            pass,
        });
    }
    (passing, report)
}
