//! Parsed macromolecular structures: chains of residues of heavy atoms, plus
//! the experiment metadata needed by downstream filtering.
//!
//! Hydrogens (and deuterium) are dropped at parse time; every computation in
//! this crate works on heavy atoms only. Alternate locations are resolved to
//! the highest-occupancy conformer and only the first model of multi-model
//! entries is kept.

pub mod amino;
mod mmcif;
mod pdb;

pub use amino::{one_hot, one_hot_from_name, AminoAcid, ALPHABET_SIZE};
pub use pdb::write_pdb;

use crate::geometry::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("line {line}: unparsable record: {reason}")]
    UnparsableRecord { line: usize, reason: String },
    #[error("no polymer residues in input")]
    EmptyStructure,
}

/// Input format selector for [`parse_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Pdb,
    Mmcif,
    /// Sniff from the leading record: `data_` blocks are mmCIF, anything
    /// else is treated as PDB.
    Auto,
}

/// A heavy atom with its coordinates and occupancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Atom name as in the coordinate record, e.g. `CA`, `OD1`.
    pub name: String,
    /// Chemical element symbol, uppercase, e.g. `C`, `SE`.
    pub element: String,
    pub position: Vec3,
    pub occupancy: f64,
}

impl Atom {
    /// True for everything except hydrogen and deuterium. Holds for every
    /// atom retained by the parsers.
    pub fn is_heavy(&self) -> bool {
        self.element != "H" && self.element != "D"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub chain_id: String,
    /// Author residue number.
    pub seq_number: i32,
    /// Insertion code, if any.
    pub insertion_code: Option<char>,
    pub aa: AminoAcid,
    pub atoms: Vec<Atom>,
}

impl Residue {
    /// Alpha-carbon position, if the residue has a CA atom.
    pub fn ca_position(&self) -> Option<Vec3> {
        self.atoms.iter().find(|a| a.name == "CA").map(|a| a.position)
    }

    /// Residue key within its chain: number plus insertion code.
    pub fn key(&self) -> (i32, Option<char>) {
        (self.seq_number, self.insertion_code)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub id: String,
    pub residues: Vec<Residue>,
}

/// A parsed entry: ordered chains, each with ordered residues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Structure {
    /// Four-character PDB code or the file stem.
    pub entry_id: String,
    pub chains: Vec<Chain>,
    /// Structure determination method, uppercase (e.g. `X-RAY DIFFRACTION`).
    pub method: Option<String>,
    /// Resolution in Angstroms; `None` when not reported.
    pub resolution: Option<f64>,
}

impl Structure {
    pub fn chain(&self, id: &str) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    pub fn residue_count(&self) -> usize {
        self.chains.iter().map(|c| c.residues.len()).sum()
    }

    pub fn atom_count(&self) -> usize {
        self.chains
            .iter()
            .flat_map(|c| &c.residues)
            .map(|r| r.atoms.len())
            .sum()
    }
}

/// Parse a structure file. Waters and non-polymer heteroatoms are dropped,
/// hydrogens are dropped, altlocs resolve to the highest-occupancy conformer
/// and only model 1 of multi-model entries is read.
pub fn parse_structure(
    content: &str,
    format: Format,
    fallback_id: &str,
) -> Result<Structure, StructureError> {
    let format = match format {
        Format::Auto => sniff_format(content),
        f => f,
    };
    match format {
        Format::Pdb => pdb::parse(content, fallback_id),
        Format::Mmcif => mmcif::parse(content, fallback_id),
        Format::Auto => unreachable!(),
    }
}

fn sniff_format(content: &str) -> Format {
    for line in content.lines() {
        let t = line.trim_start();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t.starts_with("data_") || t.starts_with("loop_") || t.starts_with('_') {
            return Format::Mmcif;
        }
        return Format::Pdb;
    }
    Format::Pdb
}

/// Shared post-processing for both parsers: resolve altlocs by occupancy,
/// drop empty residues and enforce the non-empty invariant.
pub(crate) struct RawAtom {
    pub line: usize,
    pub chain_id: String,
    pub seq_number: i32,
    pub insertion_code: Option<char>,
    pub residue_name: String,
    pub atom_name: String,
    pub alt_loc: Option<char>,
    pub element: String,
    pub position: Vec3,
    pub occupancy: f64,
}

pub(crate) fn assemble(
    atoms: Vec<RawAtom>,
    entry_id: String,
    method: Option<String>,
    resolution: Option<f64>,
) -> Result<Structure, StructureError> {
    use std::collections::HashMap;

    // Keep the highest-occupancy conformer per (residue, atom name); ties
    // break toward the alphabetically first altloc.
    let mut best: HashMap<(String, i32, Option<char>, String), usize> = HashMap::new();
    for (idx, a) in atoms.iter().enumerate() {
        let key = (
            a.chain_id.clone(),
            a.seq_number,
            a.insertion_code,
            a.atom_name.clone(),
        );
        match best.entry(key) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(idx);
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let cur = &atoms[*e.get()];
                let better = a.occupancy > cur.occupancy
                    || (a.occupancy == cur.occupancy && a.alt_loc < cur.alt_loc);
                if better {
                    e.insert(idx);
                }
            }
        }
    }
    let mut keep: Vec<bool> = vec![false; atoms.len()];
    for idx in best.values() {
        keep[*idx] = true;
    }

    let mut chains: Vec<Chain> = Vec::new();
    for (idx, a) in atoms.iter().enumerate() {
        if !keep[idx] {
            continue;
        }
        let aa = match AminoAcid::from_residue_name(&a.residue_name) {
            Some(aa) => aa,
            None => continue, // water or non-polymer heteroatom
        };
        if a.element == "H" || a.element == "D" {
            continue;
        }
        if !a.position.is_finite() {
            return Err(StructureError::UnparsableRecord {
                line: a.line,
                reason: "non-finite coordinates".into(),
            });
        }
        let chain = match chains.iter_mut().find(|c| c.id == a.chain_id) {
            Some(c) => c,
            None => {
                chains.push(Chain { id: a.chain_id.clone(), residues: Vec::new() });
                chains.last_mut().unwrap()
            }
        };
        let res_key = (a.seq_number, a.insertion_code);
        let residue = match chain.residues.iter_mut().find(|r| r.key() == res_key) {
            Some(r) => r,
            None => {
                chain.residues.push(Residue {
                    chain_id: a.chain_id.clone(),
                    seq_number: a.seq_number,
                    insertion_code: a.insertion_code,
                    aa,
                    atoms: Vec::new(),
                });
                chain.residues.last_mut().unwrap()
            }
        };
        residue.atoms.push(Atom {
            name: a.atom_name.clone(),
            element: a.element.clone(),
            position: a.position,
            occupancy: a.occupancy.clamp(0.0, 1.0),
        });
    }

    chains.retain(|c| !c.residues.is_empty());
    if chains.is_empty() {
        return Err(StructureError::EmptyStructure);
    }
    Ok(Structure { entry_id, chains, method, resolution })
}

/// Infer the element from a PDB atom name when the element column is blank.
/// Protein heavy atoms start with C/N/O/S/P after the optional leading digit;
/// two-letter elements used by modified residues are special-cased.
pub(crate) fn element_from_name(name: &str, residue_name: &str) -> String {
    let trimmed: String = name.trim().trim_start_matches(|c: char| c.is_ascii_digit()).into();
    if residue_name.eq_ignore_ascii_case("MSE") && trimmed.starts_with("SE") {
        return "SE".into();
    }
    match trimmed.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => c.to_ascii_uppercase().to_string(),
        _ => "C".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffs_mmcif_from_data_block() {
        assert_eq!(sniff_format("data_1ABC\n_entry.id 1ABC\n"), Format::Mmcif);
        assert_eq!(sniff_format("# comment\ndata_x\n"), Format::Mmcif);
    }

    #[test]
    fn sniffs_pdb_from_records() {
        assert_eq!(sniff_format("HEADER    HYDROLASE\nATOM ...\n"), Format::Pdb);
        assert_eq!(sniff_format("ATOM      1  N   ALA A   1 ...\n"), Format::Pdb);
    }
}
