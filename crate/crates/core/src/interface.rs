//! Detection of contacting chain pairs and extraction of their interface
//! residues at a heavy-atom distance cutoff.
//!
//! Two chains interact when any pair of their heavy atoms is within the
//! cutoff (inclusive). The interface of a chain pair holds exactly the
//! residues with at least one heavy atom within the cutoff of any heavy atom
//! of the partner chain. Contact search runs on a uniform spatial hash grid
//! with cell size equal to the cutoff, which is near-linear in atom count;
//! results are identical to the quadratic all-pairs scan.

use crate::geometry::Vec3;
use crate::grid::SpatialGrid;
use crate::structure::{self, one_hot, AminoAcid, Structure, ALPHABET_SIZE};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

/// One interface residue: identity within the source structure plus the
/// alpha-carbon position the embedding consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceResidue {
    pub chain_id: String,
    pub seq_number: i32,
    pub insertion_code: Option<char>,
    pub aa: AminoAcid,
    pub ca: Vec3,
}

impl InterfaceResidue {
    pub fn feature(&self) -> [f64; ALPHABET_SIZE] {
        one_hot(self.aa)
    }
}

/// Residues of one chain participating in an interface, in chain order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceChain {
    pub id: String,
    pub residues: Vec<InterfaceResidue>,
}

/// A set of contacting chains with their interface residues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    /// `ENTRY_A_B` with chain ids sorted.
    pub id: String,
    /// Source entry id.
    pub source: String,
    /// Participating chains, sorted by id; each contributes at least one
    /// residue.
    pub chains: Vec<InterfaceChain>,
    /// Heavy-atom cutoff used for extraction, in Angstroms.
    pub cutoff: f64,
}

impl Interface {
    pub fn interface_id(source: &str, chain_ids: &[&str]) -> String {
        let mut sorted: Vec<&str> = chain_ids.to_vec();
        sorted.sort_unstable();
        let mut id = source.to_string();
        for c in sorted {
            id.push('_');
            id.push_str(c);
        }
        id
    }

    pub fn residue_count(&self) -> usize {
        self.chains.iter().map(|c| c.residues.len()).sum()
    }

    /// All residues flattened in chain order.
    pub fn residues(&self) -> impl Iterator<Item = &InterfaceResidue> {
        self.chains.iter().flat_map(|c| c.residues.iter())
    }
}

/// Extract one interface per unordered chain pair in heavy-atom contact.
/// Structures with fewer than two chains yield an empty list.
pub fn extract_interfaces(structure: &Structure, cutoff: f64) -> Vec<Interface> {
    extract_interfaces_verbose(structure, cutoff).0
}

/// As [`extract_interfaces`], also returning warnings for residues excluded
/// for lacking an alpha carbon (the embedding requires CA coordinates).
pub fn extract_interfaces_verbose(
    structure: &Structure,
    cutoff: f64,
) -> (Vec<Interface>, Vec<String>) {
    assert!(cutoff > 0.0, "cutoff must be positive");
    let mut warnings = Vec::new();
    if structure.chains.len() < 2 {
        return (Vec::new(), warnings);
    }

    // Flatten heavy atoms with back-references to (chain, residue).
    let mut positions: Vec<Vec3> = Vec::new();
    let mut owner: Vec<(usize, usize)> = Vec::new();
    for (ci, chain) in structure.chains.iter().enumerate() {
        for (ri, residue) in chain.residues.iter().enumerate() {
            for atom in &residue.atoms {
                positions.push(atom.position);
                owner.push((ci, ri));
            }
        }
    }

    // Contacting residue sets per unordered chain pair.
    let mut pair_residues: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> = BTreeMap::new();
    let grid = SpatialGrid::build(&positions, cutoff);
    let cutoff_sq = cutoff * cutoff;
    let mut candidates = Vec::new();
    for i in 0..positions.len() {
        grid.candidates(positions[i], &mut candidates);
        for &j in &candidates {
            if j <= i {
                continue;
            }
            let (ci, ri) = owner[i];
            let (cj, rj) = owner[j];
            if ci == cj {
                continue;
            }
            if positions[i].distance_squared(positions[j]) <= cutoff_sq {
                let key = if ci < cj { (ci, cj) } else { (cj, ci) };
                let entry = pair_residues.entry(key).or_default();
                entry.insert((ci, ri));
                entry.insert((cj, rj));
            }
        }
    }

    let mut interfaces = Vec::new();
    for ((ca, cb), members) in &pair_residues {
        let mut chains: Vec<InterfaceChain> = Vec::new();
        for &ci in &[*ca, *cb] {
            let chain = &structure.chains[ci];
            let mut residues = Vec::new();
            for (_, ri) in members.iter().filter(|(c, _)| *c == ci) {
                let res = &chain.residues[*ri];
                match res.ca_position() {
                    Some(ca_pos) => residues.push(InterfaceResidue {
                        chain_id: chain.id.clone(),
                        seq_number: res.seq_number,
                        insertion_code: res.insertion_code,
                        aa: res.aa,
                        ca: ca_pos,
                    }),
                    None => warnings.push(format!(
                        "{}: residue {}{} in chain {} has no CA atom; excluded from interface",
                        structure.entry_id,
                        res.seq_number,
                        res.insertion_code.map(String::from).unwrap_or_default(),
                        chain.id
                    )),
                }
            }
            chains.push(InterfaceChain { id: chain.id.clone(), residues });
        }
        chains.sort_by(|a, b| a.id.cmp(&b.id));
        if chains.iter().any(|c| c.residues.is_empty()) {
            warnings.push(format!(
                "{}: interface {}-{} dropped: a chain has no usable residues",
                structure.entry_id, structure.chains[*ca].id, structure.chains[*cb].id
            ));
            continue;
        }
        let chain_ids: Vec<&str> = chains.iter().map(|c| c.id.as_str()).collect();
        interfaces.push(Interface {
            id: Interface::interface_id(&structure.entry_id, &chain_ids),
            source: structure.entry_id.clone(),
            chains,
            cutoff,
        });
    }
    interfaces.sort_by(|a, b| a.id.cmp(&b.id));
    (interfaces, warnings)
}

/// Symmetric partner matrix over the flattened residues: `true` iff the two
/// residues belong to different chains.
pub fn residue_contact_map(interface: &Interface) -> Vec<Vec<bool>> {
    let chain_of: Vec<&str> = interface
        .chains
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.id.as_str(), c.residues.len()))
        .collect();
    let n = chain_of.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = chain_of[i] != chain_of[j];
        }
    }
    m
}

/// Sub-structure holding only the interface residues (all their atoms), for
/// writing trimmed coordinate files.
pub fn trimmed_structure(structure: &Structure, interface: &Interface) -> Structure {
    let mut chains = Vec::new();
    for ic in &interface.chains {
        let Some(chain) = structure.chain(&ic.id) else { continue };
        let wanted: BTreeSet<(i32, Option<char>)> =
            ic.residues.iter().map(|r| (r.seq_number, r.insertion_code)).collect();
        let residues: Vec<structure::Residue> =
            chain.residues.iter().filter(|r| wanted.contains(&r.key())).cloned().collect();
        chains.push(structure::Chain { id: chain.id.clone(), residues });
    }
    Structure {
        entry_id: interface.id.clone(),
        chains,
        method: structure.method.clone(),
        resolution: structure.resolution,
    }
}

/// One line of the interface manifest (JSON Lines). Filtering appends the
/// method/resolution/BSA fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub source: String,
    pub chains: Vec<String>,
    /// Residue count per chain, keyed by chain id.
    pub n_residues: BTreeMap<String, usize>,
    pub cutoff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bsa: Option<f64>,
}

impl ManifestRecord {
    pub fn from_interface(interface: &Interface) -> Self {
        ManifestRecord {
            id: interface.id.clone(),
            source: interface.source.clone(),
            chains: interface.chains.iter().map(|c| c.id.clone()).collect(),
            n_residues: interface
                .chains
                .iter()
                .map(|c| (c.id.clone(), c.residues.len()))
                .collect(),
            cutoff: interface.cutoff,
            method: None,
            resolution: None,
            bsa: None,
        }
    }
}

pub fn write_manifest<W: Write>(out: &mut W, records: &[ManifestRecord]) -> std::io::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut *out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_manifest<R: BufRead>(input: R) -> std::io::Result<Vec<ManifestRecord>> {
    let mut records = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ManifestRecord = serde_json::from_str(&line).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("manifest line {}: {e}", lineno + 1),
            )
        })?;
        records.push(rec);
    }
    Ok(records)
}
