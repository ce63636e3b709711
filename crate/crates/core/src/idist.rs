//! SE(3)-invariant interface embeddings and near-duplicate detection.
//!
//! Each interface maps to a 20-dimensional vector built from pairwise
//! Gaussian weights between residue alpha carbons, split into same-chain and
//! cross-chain contributions. The embedding depends only on inter-residue
//! distances and residue types, so any rigid motion of the input leaves it
//! unchanged. Two interfaces are near-duplicates when the Euclidean distance
//! between their embeddings falls strictly below a threshold tau.

use crate::interface::Interface;
use crate::structure::ALPHABET_SIZE;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::{Read, Write};
use thiserror::Error;

pub const EMBED_DIM: usize = ALPHABET_SIZE;

pub type Embedding = [f64; EMBED_DIM];

#[derive(Debug, Error, PartialEq)]
pub enum IdistError {
    #[error("chain {0} contributes no residues")]
    EmptyChain(String),
}

/// An embedded interface, ready for near-duplicate search.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceEmbedding {
    pub id: String,
    pub z: Embedding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IDistConfig {
    /// Gaussian length scale (squared Angstroms) for the pair weights.
    pub alpha: f64,
    /// Near-duplicate threshold on the embedding distance.
    pub tau: f64,
}

impl Default for IDistConfig {
    fn default() -> Self {
        PRESET_PPIREF10.config()
    }
}

/// Extraction cutoff paired with the duplicate threshold calibrated for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub cutoff: f64,
    pub tau: f64,
}

impl Preset {
    pub fn config(&self) -> IDistConfig {
        IDistConfig { alpha: 16.0, tau: self.tau }
    }
}

/// 6 A heavy-atom interfaces.
pub const PRESET_DIPS6: Preset = Preset { name: "dips6", cutoff: 6.0, tau: 0.04 };
/// 10 A heavy-atom interfaces.
pub const PRESET_PPIREF10: Preset = Preset { name: "ppiref10", cutoff: 10.0, tau: 0.03 };

pub fn preset_by_name(name: &str) -> Option<Preset> {
    match name {
        "dips6" => Some(PRESET_DIPS6),
        "ppiref10" => Some(PRESET_PPIREF10),
        _ => None,
    }
}

/// Embed one interface.
///
/// For residue i with feature f_i (one-hot residue type, zero for unknown)
/// and alpha carbon x_i:
///
///   m_intra(i) = mean over same-chain j (including i) of f_j w_ij
///   m_inter(i) = mean over other-chain j of f_j w_ij
///   h_i = f_i / 2 + m_intra(i) / 4 - m_inter(i) / 4
///
/// with w_ij = exp(-|x_i - x_j|^2 / alpha). The embedding averages h over
/// each chain, then over chains, which makes it independent of chain sizes.
/// Summation follows flattened residue order so results are reproducible.
/// A participating chain without residues has no mean and is an error.
pub fn idist_embed(interface: &Interface, config: &IDistConfig) -> Result<Embedding, IdistError> {
    assert!(config.alpha > 0.0, "alpha must be positive");
    if let Some(empty) = interface.chains.iter().find(|c| c.residues.is_empty()) {
        return Err(IdistError::EmptyChain(empty.id.clone()));
    }
    let n = interface.residue_count();
    let mut chain_of = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut feat_index = Vec::with_capacity(n);
    for (ci, chain) in interface.chains.iter().enumerate() {
        for r in &chain.residues {
            chain_of.push(ci);
            positions.push(r.ca);
            feat_index.push(r.aa.index());
        }
    }

    let mut z = [0.0; EMBED_DIM];
    if n == 0 {
        return Ok(z);
    }
    let n_chains = interface.chains.len();
    let chain_sizes: Vec<usize> =
        interface.chains.iter().map(|c| c.residues.len()).collect();

    for i in 0..n {
        // Features are one-hot, so the weighted mean of f_j w_ij reduces to
        // per-class sums of scalar weights.
        let mut intra = [0.0; EMBED_DIM];
        let mut inter = [0.0; EMBED_DIM];
        let mut n_intra = 0usize;
        let mut n_inter = 0usize;
        for j in 0..n {
            let w = (-positions[i].distance_squared(positions[j]) / config.alpha).exp();
            if chain_of[j] == chain_of[i] {
                n_intra += 1;
                if let Some(a) = feat_index[j] {
                    intra[a] += w;
                }
            } else {
                n_inter += 1;
                if let Some(a) = feat_index[j] {
                    inter[a] += w;
                }
            }
        }
        let mut h = [0.0; EMBED_DIM];
        if let Some(a) = feat_index[i] {
            h[a] += 0.5;
        }
        for k in 0..EMBED_DIM {
            if n_intra > 0 {
                h[k] += 0.25 * intra[k] / n_intra as f64;
            }
            if n_inter > 0 {
                h[k] -= 0.25 * inter[k] / n_inter as f64;
            }
        }
        let scale = 1.0 / (n_chains as f64 * chain_sizes[chain_of[i]] as f64);
        for k in 0..EMBED_DIM {
            z[k] += h[k] * scale;
        }
    }
    Ok(z)
}

/// Embed a batch in parallel. Output order matches input order regardless of
/// thread count.
pub fn embed_all(
    interfaces: &[Interface],
    config: &IDistConfig,
) -> Result<Vec<Embedding>, IdistError> {
    interfaces.par_iter().map(|i| idist_embed(i, config)).collect()
}

/// Embed a batch, pairing each embedding with its interface id.
pub fn embed_interfaces(
    interfaces: &[Interface],
    config: &IDistConfig,
) -> Result<Vec<InterfaceEmbedding>, IdistError> {
    interfaces
        .par_iter()
        .map(|i| Ok(InterfaceEmbedding { id: i.id.clone(), z: idist_embed(i, config)? }))
        .collect()
}

/// Euclidean distance between two embeddings.
pub fn idist(a: &Embedding, b: &Embedding) -> f64 {
    let mut sum = 0.0;
    for k in 0..EMBED_DIM {
        let d = a[k] - b[k];
        sum += d * d;
    }
    sum.sqrt()
}

/// Strict comparison: a distance of exactly tau is not a duplicate.
pub fn is_near_duplicate(a: &Embedding, b: &Embedding, config: &IDistConfig) -> bool {
    idist(a, b) < config.tau
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairwiseMode {
    /// Compare every pair; quadratic but exact by construction.
    AllPairs,
    /// Bucket on the first three components with cell width tau and compare
    /// only neighboring buckets. Any pair within tau differs by less than
    /// tau per component, so no candidate is missed; exact distances are
    /// re-checked before reporting.
    GridIndex,
}

/// All index pairs (i < j) with embedding distance strictly below tau,
/// sorted by (i, j). Both modes return identical results.
pub fn pairwise_near_duplicates(
    embeddings: &[Embedding],
    tau: f64,
    mode: PairwiseMode,
) -> Vec<(usize, usize, f64)> {
    assert!(tau > 0.0, "tau must be positive");
    let mut pairs = match mode {
        PairwiseMode::AllPairs => {
            let mut out = Vec::new();
            for i in 0..embeddings.len() {
                for j in (i + 1)..embeddings.len() {
                    let d = idist(&embeddings[i], &embeddings[j]);
                    if d < tau {
                        out.push((i, j, d));
                    }
                }
            }
            out
        }
        PairwiseMode::GridIndex => {
            let key = |e: &Embedding| -> (i64, i64, i64) {
                (
                    (e[0] / tau).floor() as i64,
                    (e[1] / tau).floor() as i64,
                    (e[2] / tau).floor() as i64,
                )
            };
            let mut buckets: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
            for (i, e) in embeddings.iter().enumerate() {
                buckets.entry(key(e)).or_default().push(i);
            }
            let mut out = Vec::new();
            for (i, e) in embeddings.iter().enumerate() {
                let (kx, ky, kz) = key(e);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            let Some(cell) = buckets.get(&(kx + dx, ky + dy, kz + dz))
                            else {
                                continue;
                            };
                            for &j in cell {
                                if j <= i {
                                    continue;
                                }
                                let d = idist(e, &embeddings[j]);
                                if d < tau {
                                    out.push((i, j, d));
                                }
                            }
                        }
                    }
                }
            }
            out
        }
    };
    pairs.sort_by_key(|p| (p.0, p.1));
    pairs
}

const MAGIC: &[u8; 4] = b"IDST";
const VERSION: u8 = 1;

fn bad_data(msg: impl Into<String>) -> std::io::Error {
    std::io::Error::new(std::io::ErrorKind::InvalidData, msg.into())
}

/// Write embeddings in the binary exchange format: magic, version byte,
/// record count (u32 LE), dimension (u32 LE), then per record a u16 LE id
/// length, the UTF-8 id, and the vector as f32 LE.
pub fn write_embeddings<W: Write>(
    out: &mut W,
    ids: &[String],
    embeddings: &[Embedding],
) -> std::io::Result<()> {
    assert_eq!(ids.len(), embeddings.len());
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION])?;
    out.write_all(&(ids.len() as u32).to_le_bytes())?;
    out.write_all(&(EMBED_DIM as u32).to_le_bytes())?;
    for (id, e) in ids.iter().zip(embeddings) {
        let bytes = id.as_bytes();
        if bytes.len() > u16::MAX as usize {
            return Err(bad_data(format!("id too long: {} bytes", bytes.len())));
        }
        out.write_all(&(bytes.len() as u16).to_le_bytes())?;
        out.write_all(bytes)?;
        for &v in e.iter() {
            out.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read the binary format written by [`write_embeddings`].
pub fn read_embeddings<R: Read>(input: &mut R) -> std::io::Result<(Vec<String>, Vec<Embedding>)> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad_data("not an embedding file: bad magic"));
    }
    let mut version = [0u8; 1];
    input.read_exact(&mut version)?;
    if version[0] != VERSION {
        return Err(bad_data(format!("unsupported version {}", version[0])));
    }
    let mut u32buf = [0u8; 4];
    input.read_exact(&mut u32buf)?;
    let count = u32::from_le_bytes(u32buf) as usize;
    input.read_exact(&mut u32buf)?;
    let dim = u32::from_le_bytes(u32buf) as usize;
    if dim != EMBED_DIM {
        return Err(bad_data(format!("dimension {dim} not supported, expected {EMBED_DIM}")));
    }
    let mut ids = Vec::with_capacity(count);
    let mut embeddings = Vec::with_capacity(count);
    for _ in 0..count {
        let mut u16buf = [0u8; 2];
        input.read_exact(&mut u16buf)?;
        let len = u16::from_le_bytes(u16buf) as usize;
        let mut id = vec![0u8; len];
        input.read_exact(&mut id)?;
        let id = String::from_utf8(id).map_err(|e| bad_data(format!("invalid id: {e}")))?;
        let mut e = [0.0; EMBED_DIM];
        let mut f32buf = [0u8; 4];
        for v in e.iter_mut() {
            input.read_exact(&mut f32buf)?;
            *v = f32::from_le_bytes(f32buf) as f64;
        }
        ids.push(id);
        embeddings.push(e);
    }
    Ok((ids, embeddings))
}
