//! Mutation-effect math: mutation notation parsing, structural masking, the
//! masked cross-entropy training loss, inverse-frequency class weights, and
//! the log-odds stability estimate computed from an externally produced
//! per-residue probability matrix.

use crate::structure::{AminoAcid, ALPHABET_SIZE};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DdgError {
    #[error("invalid amino acid letter '{0}'")]
    BadAminoAcid(char),
    #[error("invalid or missing position in mutation {0:?}")]
    BadPosition(String),
    #[error("site {0} listed more than once")]
    DuplicateSite(String),
    #[error("wild type equals mutant at {0}")]
    IdentityMutation(String),
    #[error("mask index {index} out of range for {len} rows")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("probability matrix row {row} sums to {sum}, expected 1")]
    BadRowSum { row: usize, sum: f64 },
    #[error("negative probability in row {0}")]
    NegativeProbability(usize),
    #[error("probability matrix is empty")]
    EmptyMatrix,
    #[error("zero probability referenced at row {row}, class {class}")]
    ZeroProbability { row: usize, class: usize },
    #[error("expected {expected} sites, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Per-residue distribution over the 20 standard amino acids. Rows are
/// non-negative and sum to 1 within 1e-6.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    rows: Vec<[f64; ALPHABET_SIZE]>,
}

impl ProbabilityMatrix {
    pub fn new(rows: Vec<[f64; ALPHABET_SIZE]>) -> Result<Self, DdgError> {
        if rows.is_empty() {
            return Err(DdgError::EmptyMatrix);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|&p| p < 0.0) {
                return Err(DdgError::NegativeProbability(i));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(DdgError::BadRowSum { row: i, sum });
            }
        }
        Ok(ProbabilityMatrix { rows })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityMatrix { rows: vec![[1.0 / ALPHABET_SIZE as f64; ALPHABET_SIZE]; n] }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[f64; ALPHABET_SIZE] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[[f64; ALPHABET_SIZE]] {
        &self.rows
    }

    fn check_index(&self, index: usize) -> Result<(), DdgError> {
        if index >= self.rows.len() {
            return Err(DdgError::IndexOutOfRange { index, len: self.rows.len() });
        }
        Ok(())
    }
}

/// One point substitution: wild-type residue, chain, sequence position with
/// optional insertion code, mutant residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub wt: AminoAcid,
    pub chain: char,
    pub position: i32,
    pub insertion_code: Option<char>,
    pub mutant: AminoAcid,
}

impl std::fmt::Display for Substitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}{}{}{}",
            self.wt.one_letter(),
            self.chain,
            self.position,
            self.insertion_code.map(String::from).unwrap_or_default(),
            self.mutant.one_letter()
        )
    }
}

/// A labelled mutation on one complex, possibly multi-point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationRecord {
    pub complex_id: String,
    pub substitutions: Vec<Substitution>,
    /// Measured change in binding free energy, kcal/mol.
    pub label: Option<f64>,
}

impl MutationRecord {
    pub fn mutation_string(&self) -> String {
        self.substitutions.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Parse compact mutation notation: wild-type letter, chain character,
/// position digits, optional lowercase insertion code, mutant letter.
/// Multi-point mutations join sites with commas ("KC74Q,KC130E,KC135R").
pub fn parse_mutation(text: &str) -> Result<Vec<Substitution>, DdgError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(DdgError::BadPosition(text.to_string()));
    }
    let mut subs: Vec<Substitution> = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let sub = parse_single(part)?;
        if sub.wt == sub.mutant {
            return Err(DdgError::IdentityMutation(part.to_string()));
        }
        let site = (sub.chain, sub.position, sub.insertion_code);
        if subs.iter().any(|s| (s.chain, s.position, s.insertion_code) == site) {
            return Err(DdgError::DuplicateSite(part.to_string()));
        }
        subs.push(sub);
    }
    Ok(subs)
}

fn parse_single(part: &str) -> Result<Substitution, DdgError> {
    let chars: Vec<char> = part.chars().collect();
    if chars.len() < 4 {
        return Err(DdgError::BadPosition(part.to_string()));
    }
    let aa = |c: char| -> Result<AminoAcid, DdgError> {
        match AminoAcid::from_one_letter(c) {
            Some(a) => Ok(a),
            None => Err(DdgError::BadAminoAcid(c)),
        }
    };
    let wt = aa(chars[0])?;
    let chain = chars[1];
    if !chain.is_ascii_alphanumeric() {
        return Err(DdgError::BadPosition(part.to_string()));
    }
    let mutant = aa(*chars.last().unwrap())?;
    let mut middle = &chars[2..chars.len() - 1];
    let mut insertion_code = None;
    if let Some(&last) = middle.last() {
        if last.is_ascii_lowercase() {
            insertion_code = Some(last);
            middle = &middle[..middle.len() - 1];
        }
    }
    if middle.is_empty() || !middle.iter().all(|c| c.is_ascii_digit()) {
        return Err(DdgError::BadPosition(part.to_string()));
    }
    let digits: String = middle.iter().collect();
    let position: i32 =
        digits.parse().map_err(|_| DdgError::BadPosition(part.to_string()))?;
    Ok(Substitution { wt, chain, position, insertion_code, mutant })
}

/// Residue classes with a mask: masked positions carry no class.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedComplex {
    classes: Vec<Option<AminoAcid>>,
}

impl MaskedComplex {
    pub fn new(sequence: &[AminoAcid], mask: &[usize]) -> Result<Self, DdgError> {
        let mut classes: Vec<Option<AminoAcid>> =
            sequence.iter().copied().map(Some).collect();
        for &i in mask {
            if i >= classes.len() {
                return Err(DdgError::IndexOutOfRange { index: i, len: classes.len() });
            }
            classes[i] = None;
        }
        Ok(MaskedComplex { classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_masked(&self, i: usize) -> bool {
        self.classes[i].is_none()
    }

    pub fn class(&self, i: usize) -> Option<AminoAcid> {
        self.classes[i]
    }

    /// Masked positions, ascending.
    pub fn mask(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i].is_none()).collect()
    }
}

/// Zero the feature rows at the masked positions; other rows pass through.
pub fn mask_features(
    rows: &[[f64; ALPHABET_SIZE]],
    mask: &[usize],
) -> Result<Vec<[f64; ALPHABET_SIZE]>, DdgError> {
    let mut out = rows.to_vec();
    for &i in mask {
        if i >= out.len() {
            return Err(DdgError::IndexOutOfRange { index: i, len: out.len() });
        }
        out[i] = [0.0; ALPHABET_SIZE];
    }
    Ok(out)
}

/// Masked cross-entropy with the smoothing term spread over all 20 classes:
///
///   L = -sum over masked i of w[c_i] * ((1 - eps) * ln P[i][c_i]
///         + eps * sum over j != c_i of ln P[i][j] / 20)
///
/// With eps = 0 and unit weights this is the negative log-likelihood of the
/// native classes. Referenced zero probabilities are an error, not clipped.
pub fn masked_ce_loss(
    p: &ProbabilityMatrix,
    native: &[AminoAcid],
    mask: &[usize],
    epsilon: f64,
    weights: &[f64; ALPHABET_SIZE],
) -> Result<f64, DdgError> {
    if native.len() != p.n_rows() {
        return Err(DdgError::LengthMismatch { expected: p.n_rows(), got: native.len() });
    }
    assert!((0.0..=1.0).contains(&epsilon), "epsilon must lie in [0, 1]");
    let mut loss = 0.0;
    for &i in mask {
        p.check_index(i)?;
        let c = native[i]
            .index()
            .ok_or(DdgError::BadAminoAcid(native[i].one_letter()))?;
        let row = p.row(i);
        if row[c] == 0.0 {
            return Err(DdgError::ZeroProbability { row: i, class: c });
        }
        let mut site = (1.0 - epsilon) * row[c].ln();
        if epsilon > 0.0 {
            let mut smooth = 0.0;
            for (j, &pj) in row.iter().enumerate() {
                if j == c {
                    continue;
                }
                if pj == 0.0 {
                    return Err(DdgError::ZeroProbability { row: i, class: j });
                }
                smooth += pj.ln() / ALPHABET_SIZE as f64;
            }
            site += epsilon * smooth;
        }
        loss -= weights[c] * site;
    }
    Ok(loss)
}

/// Inverse-frequency class weights with additive smoothing 1, normalized to
/// mean 1. A class absent from the counts gets the largest weight.
pub fn class_weights(counts: &[u64; ALPHABET_SIZE]) -> [f64; ALPHABET_SIZE] {
    let mut w = [0.0; ALPHABET_SIZE];
    for (wi, &c) in w.iter_mut().zip(counts) {
        *wi = 1.0 / (c as f64 + 1.0);
    }
    let mean = w.iter().sum::<f64>() / ALPHABET_SIZE as f64;
    for wi in &mut w {
        *wi /= mean;
    }
    w
}

/// Log-odds stability estimate: the native log-likelihood minus the mutant
/// log-likelihood over the masked sites. Negative values favor the mutant.
///
/// Sites are consumed in the given order with a single sequential
/// accumulator, which makes swapping wild type and mutant negate the result
/// bit-exactly.
pub fn log_odds_ddg(
    p: &ProbabilityMatrix,
    wt: &[AminoAcid],
    mutant: &[AminoAcid],
    mask: &[usize],
) -> Result<f64, DdgError> {
    if wt.len() != mask.len() || mutant.len() != mask.len() {
        return Err(DdgError::LengthMismatch { expected: mask.len(), got: wt.len() });
    }
    let mut total = 0.0;
    for (k, &i) in mask.iter().enumerate() {
        p.check_index(i)?;
        let cw = wt[k].index().ok_or(DdgError::BadAminoAcid(wt[k].one_letter()))?;
        let cm = mutant[k]
            .index()
            .ok_or(DdgError::BadAminoAcid(mutant[k].one_letter()))?;
        if cw == cm {
            return Err(DdgError::IdentityMutation(format!("row {i}")));
        }
        let row = p.row(i);
        if row[cw] == 0.0 {
            return Err(DdgError::ZeroProbability { row: i, class: cw });
        }
        if row[cm] == 0.0 {
            return Err(DdgError::ZeroProbability { row: i, class: cm });
        }
        total += row[cw].ln() - row[cm].ln();
    }
    Ok(total)
}

const PMAT_MAGIC: &[u8; 4] = b"PMAT";

fn bad_data(msg: impl Into<String>) -> std::io::Error {
    std::io::Error::new(std::io::ErrorKind::InvalidData, msg.into())
}

/// Binary probability matrix: magic, row count (u32 LE), rows of 20 f64 LE.
pub fn write_pmat<W: Write>(out: &mut W, p: &ProbabilityMatrix) -> std::io::Result<()> {
    out.write_all(PMAT_MAGIC)?;
    out.write_all(&(p.n_rows() as u32).to_le_bytes())?;
    for row in p.rows() {
        for &v in row {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_pmat<R: Read>(input: &mut R) -> std::io::Result<ProbabilityMatrix> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != PMAT_MAGIC {
        return Err(bad_data("not a probability matrix file: bad magic"));
    }
    let mut u32buf = [0u8; 4];
    input.read_exact(&mut u32buf)?;
    let n = u32::from_le_bytes(u32buf) as usize;
    let mut rows = Vec::with_capacity(n);
    let mut f64buf = [0u8; 8];
    for _ in 0..n {
        let mut row = [0.0; ALPHABET_SIZE];
        for v in row.iter_mut() {
            input.read_exact(&mut f64buf)?;
            *v = f64::from_le_bytes(f64buf);
        }
        rows.push(row);
    }
    ProbabilityMatrix::new(rows).map_err(|e| bad_data(e.to_string()))
}

/// CSV alternative: one row per residue, 20 columns headed by the one-letter
/// codes in alphabetical three-letter order.
pub fn write_pmat_csv<W: Write>(out: W, p: &ProbabilityMatrix) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> =
        AminoAcid::STANDARD.iter().map(|a| a.one_letter().to_string()).collect();
    w.write_record(&header)?;
    for row in p.rows() {
        let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pmat_csv<R: Read>(input: R) -> std::io::Result<ProbabilityMatrix> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| bad_data(e.to_string()))?;
        if record.len() != ALPHABET_SIZE {
            return Err(bad_data(format!(
                "expected {ALPHABET_SIZE} columns, got {}",
                record.len()
            )));
        }
        let mut row = [0.0; ALPHABET_SIZE];
        for (v, field) in row.iter_mut().zip(record.iter()) {
            *v = field.parse().map_err(|e| bad_data(format!("bad float {field:?}: {e}")))?;
        }
        rows.push(row);
    }
    ProbabilityMatrix::new(rows).map_err(|e| bad_data(e.to_string()))
}

/// Read mutations from CSV with columns complex_id, mutation_string,
/// ddg_label (label may be empty).
pub fn read_mutations<R: Read>(input: R) -> Result<Vec<MutationRecord>, std::io::Error> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| bad_data(e.to_string()))?;
        if record.len() < 2 {
            return Err(bad_data("mutation rows need complex_id and mutation_string"));
        }
        let substitutions =
            parse_mutation(&record[1]).map_err(|e| bad_data(e.to_string()))?;
        let label = match record.get(2) {
            None | Some("") => None,
            Some(s) => {
                Some(s.parse().map_err(|e| bad_data(format!("bad label {s:?}: {e}")))?)
            }
        };
        out.push(MutationRecord {
            complex_id: record[0].to_string(),
            substitutions,
            label,
        });
    }
    Ok(out)
}

pub fn write_mutations<W: Write>(out: W, records: &[MutationRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["complex_id", "mutation_string", "ddg_label"])?;
    for rec in records {
        let label = rec.label.map(|v| format!("{v}")).unwrap_or_default();
        w.write_record([&rec.complex_id, &rec.mutation_string(), &label])?;
    }
    w.flush()?;
    Ok(())
}
