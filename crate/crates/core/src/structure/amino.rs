//! The 20-letter amino acid alphabet, one-hot features and the
//! modified-residue parent table.
//!
//! The alphabet is ordered alphabetically by three-letter code:
//! ALA ARG ASN ASP CYS GLN GLU GLY HIS ILE LEU LYS MET PHE PRO SER THR TRP
//! TYR VAL. Feature indices, serialized matrices and class weights all use
//! this ordering.

use serde::{Deserialize, Serialize};

/// Number of standard amino acid classes.
pub const ALPHABET_SIZE: usize = 20;

/// A standard amino acid, or `Unknown` for residues outside the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AminoAcid {
    Ala,
    Arg,
    Asn,
    Asp,
    Cys,
    Gln,
    Glu,
    Gly,
    His,
    Ile,
    Leu,
    Lys,
    Met,
    Phe,
    Pro,
    Ser,
    Thr,
    Trp,
    Tyr,
    Val,
    Unknown,
}

impl AminoAcid {
    /// The 20-letter alphabet in order.
    pub const STANDARD: [AminoAcid; ALPHABET_SIZE] = [
        AminoAcid::Ala,
        AminoAcid::Arg,
        AminoAcid::Asn,
        AminoAcid::Asp,
        AminoAcid::Cys,
        AminoAcid::Gln,
        AminoAcid::Glu,
        AminoAcid::Gly,
        AminoAcid::His,
        AminoAcid::Ile,
        AminoAcid::Leu,
        AminoAcid::Lys,
        AminoAcid::Met,
        AminoAcid::Phe,
        AminoAcid::Pro,
        AminoAcid::Ser,
        AminoAcid::Thr,
        AminoAcid::Trp,
        AminoAcid::Tyr,
        AminoAcid::Val,
    ];

    /// Index into the 20-letter alphabet; `None` for `Unknown`.
    pub fn index(self) -> Option<usize> {
        match self {
            AminoAcid::Unknown => None,
            aa => Some(AminoAcid::STANDARD.iter().position(|&s| s == aa).unwrap()),
        }
    }

    pub fn from_index(idx: usize) -> Option<AminoAcid> {
        AminoAcid::STANDARD.get(idx).copied()
    }

    pub fn three_letter(self) -> &'static str {
        match self {
            AminoAcid::Ala => "ALA",
            AminoAcid::Arg => "ARG",
            AminoAcid::Asn => "ASN",
            AminoAcid::Asp => "ASP",
            AminoAcid::Cys => "CYS",
            AminoAcid::Gln => "GLN",
            AminoAcid::Glu => "GLU",
            AminoAcid::Gly => "GLY",
            AminoAcid::His => "HIS",
            AminoAcid::Ile => "ILE",
            AminoAcid::Leu => "LEU",
            AminoAcid::Lys => "LYS",
            AminoAcid::Met => "MET",
            AminoAcid::Phe => "PHE",
            AminoAcid::Pro => "PRO",
            AminoAcid::Ser => "SER",
            AminoAcid::Thr => "THR",
            AminoAcid::Trp => "TRP",
            AminoAcid::Tyr => "TYR",
            AminoAcid::Val => "VAL",
            AminoAcid::Unknown => "UNK",
        }
    }

    pub fn one_letter(self) -> char {
        match self {
            AminoAcid::Ala => 'A',
            AminoAcid::Arg => 'R',
            AminoAcid::Asn => 'N',
            AminoAcid::Asp => 'D',
            AminoAcid::Cys => 'C',
            AminoAcid::Gln => 'Q',
            AminoAcid::Glu => 'E',
            AminoAcid::Gly => 'G',
            AminoAcid::His => 'H',
            AminoAcid::Ile => 'I',
            AminoAcid::Leu => 'L',
            AminoAcid::Lys => 'K',
            AminoAcid::Met => 'M',
            AminoAcid::Phe => 'F',
            AminoAcid::Pro => 'P',
            AminoAcid::Ser => 'S',
            AminoAcid::Thr => 'T',
            AminoAcid::Trp => 'W',
            AminoAcid::Tyr => 'Y',
            AminoAcid::Val => 'V',
            AminoAcid::Unknown => 'X',
        }
    }

    pub fn from_one_letter(c: char) -> Option<AminoAcid> {
        let aa = match c.to_ascii_uppercase() {
            'A' => AminoAcid::Ala,
            'R' => AminoAcid::Arg,
            'N' => AminoAcid::Asn,
            'D' => AminoAcid::Asp,
            'C' => AminoAcid::Cys,
            'Q' => AminoAcid::Gln,
            'E' => AminoAcid::Glu,
            'G' => AminoAcid::Gly,
            'H' => AminoAcid::His,
            'I' => AminoAcid::Ile,
            'L' => AminoAcid::Leu,
            'K' => AminoAcid::Lys,
            'M' => AminoAcid::Met,
            'F' => AminoAcid::Phe,
            'P' => AminoAcid::Pro,
            'S' => AminoAcid::Ser,
            'T' => AminoAcid::Thr,
            'W' => AminoAcid::Trp,
            'Y' => AminoAcid::Tyr,
            'V' => AminoAcid::Val,
            _ => return None,
        };
        Some(aa)
    }

    /// Resolve a residue name to an amino acid class.
    ///
    /// Standard codes map to themselves, known modified residues map to their
    /// parent, `UNK` maps to `Unknown`. Anything else returns `None`
    /// (not a protein polymer residue).
    pub fn from_residue_name(name: &str) -> Option<AminoAcid> {
        let name = name.trim().to_ascii_uppercase();
        for aa in AminoAcid::STANDARD {
            if aa.three_letter() == name {
                return Some(aa);
            }
        }
        if name == "UNK" {
            return Some(AminoAcid::Unknown);
        }
        modified_parent(&name)
    }
}

/// Parent classes for frequent modified residues in the PDB chemical
/// component dictionary. Unlisted codes are treated as non-polymer.
fn modified_parent(name: &str) -> Option<AminoAcid> {
    use AminoAcid::*;
    let aa = match name {
        "MSE" | "FME" | "MHO" => Met,
        "SEC" | "CSO" | "CME" | "CSD" | "OCS" | "CSX" | "SMC" | "CAS" | "CSS" => Cys,
        "SEP" => Ser,
        "TPO" => Thr,
        "PTR" => Tyr,
        "HYP" => Pro,
        "PYL" | "MLY" | "M3L" | "MLZ" | "ALY" | "KCX" | "LLP" => Lys,
        "CGU" => Glu,
        "PCA" | "MGN" => Gln,
        "HIC" | "NEP" => His,
        "AGM" | "DA2" => Arg,
        "DAL" | "AIB" => Ala,
        "SAR" => Gly,
        _ => return None,
    };
    Some(aa)
}

/// One-hot feature vector over the fixed alphabet; `Unknown` is all zeros.
pub fn one_hot(aa: AminoAcid) -> [f64; ALPHABET_SIZE] {
    let mut v = [0.0; ALPHABET_SIZE];
    if let Some(i) = aa.index() {
        v[i] = 1.0;
    }
    v
}

/// One-hot vector straight from a residue name. Total: names that resolve to
/// no amino acid class come back all zeros, like `Unknown`.
pub fn one_hot_from_name(name: &str) -> [f64; ALPHABET_SIZE] {
    match AminoAcid::from_residue_name(name) {
        Some(aa) => one_hot(aa),
        None => [0.0; ALPHABET_SIZE],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_is_sorted_by_three_letter_code() {
        let codes: Vec<&str> = AminoAcid::STANDARD.iter().map(|aa| aa.three_letter()).collect();
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn alanine_is_first_basis_vector() {
        let v = one_hot(AminoAcid::Ala);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1..].iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn unknown_is_zero_vector() {
        assert!(one_hot(AminoAcid::Unknown).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn standard_one_hots_sum_to_all_ones() {
        let mut sum = [0.0; ALPHABET_SIZE];
        for aa in AminoAcid::STANDARD {
            for (s, x) in sum.iter_mut().zip(one_hot(aa)) {
                *s += x;
            }
        }
        assert!(sum.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn selenomethionine_maps_to_methionine() {
        assert_eq!(AminoAcid::from_residue_name("MSE"), Some(AminoAcid::Met));
        assert_eq!(one_hot(AminoAcid::from_residue_name("MSE").unwrap()), one_hot(AminoAcid::Met));
    }

    #[test]
    fn water_and_ligands_are_not_polymer() {
        assert_eq!(AminoAcid::from_residue_name("HOH"), None);
        assert_eq!(AminoAcid::from_residue_name("HEM"), None);
        assert_eq!(AminoAcid::from_residue_name("UNK"), Some(AminoAcid::Unknown));
    }

    #[test]
    fn index_round_trips() {
        for (i, aa) in AminoAcid::STANDARD.iter().enumerate() {
            assert_eq!(aa.index(), Some(i));
            assert_eq!(AminoAcid::from_index(i), Some(*aa));
        }
        assert_eq!(AminoAcid::Unknown.index(), None);
    }

    #[test]
    fn name_features_are_total() {
        assert_eq!(one_hot_from_name("MSE"), one_hot(AminoAcid::Met));
        assert_eq!(one_hot_from_name("gly"), one_hot(AminoAcid::Gly));
        assert_eq!(one_hot_from_name("XYZ"), [0.0; ALPHABET_SIZE]);
        assert_eq!(one_hot_from_name("UNK"), [0.0; ALPHABET_SIZE]);
    }
}
