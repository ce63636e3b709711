//! Toolkit for mining protein-protein interfaces from structure files,
//! deduplicating them with SE(3)-invariant embeddings, auditing dataset
//! splits for structural leakage, and evaluating binding affinity change
//! predictions.
//!
//! The pipeline, mirrored by the `ppikit` CLI:
//!
//! 1. [`structure`] parses PDB/mmCIF entries into heavy-atom models.
//! 2. [`interface`] extracts contacting chain pairs at a distance cutoff.
//! 3. [`filter`] applies method/resolution/buried-surface-area criteria.
//! 4. [`idist`] embeds each interface as a 20-dimensional invariant vector
//!    and finds near-duplicate pairs under a calibrated distance threshold.
//! 5. [`dedup`] builds the near-duplicate graph, deduplicates it and audits
//!    train/validation/test splits for leakage.
//! 6. [`ddg`] and [`metrics`] score mutations from predicted amino-acid
//!    probabilities and evaluate predictions per interaction.

pub mod ddg;
pub mod dedup;
pub mod filter;
pub mod geometry;
pub mod grid;
pub mod idist;
pub mod interface;
pub mod metrics;
pub mod structure;
