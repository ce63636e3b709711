//! Near-duplicate graphs over embedded interfaces: deduplication by greedy
//! maximal independent set, split leakage audits, and leakage-free split
//! construction.

use crate::idist::{idist, pairwise_near_duplicates, Embedding, PairwiseMode};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};
use thiserror::Error;

/// Factor for the relaxed duplicate threshold used in secondary audits.
pub const RELAXED_TAU_FACTOR: f64 = 1.5;

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("node {0} is not assigned to any fold")]
    UnassignedNode(String),
    #[error("id {0} appears more than once in the split")]
    DuplicateAssignment(String),
    #[error("split references unknown id {0}")]
    UnknownId(String),
    #[error("fold fractions must be positive and sum to 1 (sum was {0})")]
    BadFractions(f64),
    #[error("edge references unknown id {0}")]
    UnknownEdgeId(String),
}

/// Undirected graph whose nodes are interface ids and whose edges connect
/// near-duplicate pairs, annotated with the embedding distance.
#[derive(Debug, Clone, PartialEq)]
pub struct NearDuplicateGraph {
    pub ids: Vec<String>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl NearDuplicateGraph {
    /// Build from embeddings: an edge per pair with distance strictly below
    /// tau.
    pub fn from_embeddings(
        ids: Vec<String>,
        embeddings: &[Embedding],
        tau: f64,
        mode: PairwiseMode,
    ) -> Self {
        assert_eq!(ids.len(), embeddings.len());
        let pairs = pairwise_near_duplicates(embeddings, tau, mode);
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (i, j, d) in pairs {
            adjacency[i].push((j, d));
            adjacency[j].push((i, d));
        }
        for list in &mut adjacency {
            list.sort_by_key(|e| e.0);
        }
        NearDuplicateGraph { ids, adjacency }
    }

    /// Build from an explicit node set and edge list.
    pub fn from_edges(
        ids: Vec<String>,
        edges: &[(String, String, f64)],
    ) -> Result<Self, SplitError> {
        let index: HashMap<&str, usize> =
            ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (a, b, d) in edges {
            let ia = *index.get(a.as_str()).ok_or_else(|| SplitError::UnknownEdgeId(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| SplitError::UnknownEdgeId(b.clone()))?;
            if ia == ib {
                continue;
            }
            adjacency[ia].push((ib, *d));
            adjacency[ib].push((ia, *d));
        }
        for list in &mut adjacency {
            list.sort_by_key(|e| e.0);
            list.dedup_by_key(|e| e.0);
        }
        Ok(NearDuplicateGraph { ids, adjacency })
    }

    pub fn n_nodes(&self) -> usize {
        self.ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for (i, list) in self.adjacency.iter().enumerate() {
            for &(j, d) in list {
                if i < j {
                    out.push((i, j, d));
                }
            }
        }
        out
    }

    /// Connected components; each sorted ascending, components ordered by
    /// their smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push(start);
            let mut members = Vec::new();
            while let Some(u) = queue.pop() {
                members.push(u);
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DedupOrder {
    /// Process ids in lexicographic order. Default, reproducible across
    /// machines and input orderings.
    LexicographicId,
    /// Process high-degree nodes first, removing more neighbors early; ties
    /// broken lexicographically.
    MaxDegreeFirst,
}

/// Greedy maximal independent set: visit nodes in the given order, keep a
/// node unless a kept neighbor already removed it. No two retained nodes are
/// adjacent and every removed node has a retained neighbor. Returns retained
/// node indices, ascending.
pub fn greedy_dedup(graph: &NearDuplicateGraph, order: DedupOrder) -> Vec<usize> {
    let n = graph.n_nodes();
    let mut visit: Vec<usize> = (0..n).collect();
    match order {
        DedupOrder::LexicographicId => {
            visit.sort_by(|&a, &b| graph.ids[a].cmp(&graph.ids[b]));
        }
        DedupOrder::MaxDegreeFirst => {
            visit.sort_by(|&a, &b| {
                graph.degree(b).cmp(&graph.degree(a)).then(graph.ids[a].cmp(&graph.ids[b]))
            });
        }
    }
    let mut removed = vec![false; n];
    let mut kept = Vec::new();
    for &u in &visit {
        if removed[u] {
            continue;
        }
        kept.push(u);
        for &(v, _) in graph.neighbors(u) {
            removed[v] = true;
        }
    }
    kept.sort_unstable();
    kept
}

/// Re-check retained pairs directly on the embeddings, bypassing the graph.
/// Returns the pairs (by retained-slice position) violating the threshold;
/// empty means the retained set is duplicate-free.
pub fn verify_retained(
    embeddings: &[Embedding],
    retained: &[usize],
    tau: f64,
) -> Vec<(usize, usize, f64)> {
    let mut violations = Vec::new();
    for a in 0..retained.len() {
        for b in (a + 1)..retained.len() {
            let d = idist(&embeddings[retained[a]], &embeddings[retained[b]]);
            if d < tau {
                violations.push((retained[a], retained[b], d));
            }
        }
    }
    violations
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub id: String,
    pub fold: String,
}

/// One leaking pair: an audited item with a near duplicate in a reference
/// fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageWitness {
    pub id: String,
    pub fold: String,
    pub neighbor_id: String,
    pub neighbor_fold: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldLeakage {
    pub fold: String,
    pub n_items: usize,
    pub n_leaking: usize,
    /// n_leaking / n_items; 0 for an empty fold.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    /// Folds the audited items are checked against.
    pub reference_folds: Vec<String>,
    pub per_fold: Vec<FoldLeakage>,
    pub n_audited: usize,
    pub n_leaking: usize,
    /// n_leaking / n_audited over all audited folds; 0 when nothing audited.
    pub overall_ratio: f64,
    pub witnesses: Vec<LeakageWitness>,
}

const RESERVED_REFERENCE_FOLDS: [&str; 3] = ["train", "val", "validation"];

/// Audit a fold assignment for near-duplicate leakage.
///
/// Folds named train, val, or validation (case-insensitive) are reference
/// folds; every other fold is audited against their union, and an audited
/// item leaks iff it has at least one near-duplicate neighbor in a reference
/// fold. When no reserved fold name occurs, each fold is audited against the
/// union of all others.
pub fn audit_split(
    graph: &NearDuplicateGraph,
    split: &[SplitAssignment],
) -> Result<LeakageReport, SplitError> {
    let index: HashMap<&str, usize> =
        graph.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let mut fold_of: Vec<Option<&str>> = vec![None; graph.n_nodes()];
    for a in split {
        let i = *index.get(a.id.as_str()).ok_or_else(|| SplitError::UnknownId(a.id.clone()))?;
        if fold_of[i].is_some() {
            return Err(SplitError::DuplicateAssignment(a.id.clone()));
        }
        fold_of[i] = Some(a.fold.as_str());
    }
    if let Some(i) = fold_of.iter().position(Option::is_none) {
        return Err(SplitError::UnassignedNode(graph.ids[i].clone()));
    }
    let fold_of: Vec<&str> = fold_of.into_iter().map(Option::unwrap).collect();

    let mut fold_names: Vec<&str> = fold_of.to_vec();
    fold_names.sort_unstable();
    fold_names.dedup();
    let reference: HashSet<&str> = fold_names
        .iter()
        .copied()
        .filter(|f| RESERVED_REFERENCE_FOLDS.contains(&f.to_ascii_lowercase().as_str()))
        .collect();
    let one_vs_rest = reference.is_empty();

    let mut per_fold: BTreeMap<&str, FoldLeakage> = BTreeMap::new();
    let mut witnesses = Vec::new();
    for i in 0..graph.n_nodes() {
        let fold = fold_of[i];
        if !one_vs_rest && reference.contains(fold) {
            continue;
        }
        let entry = per_fold.entry(fold).or_insert_with(|| FoldLeakage {
            fold: fold.to_string(),
            n_items: 0,
            n_leaking: 0,
            ratio: 0.0,
        });
        entry.n_items += 1;
        let mut leaking = false;
        for &(j, d) in graph.neighbors(i) {
            let other = fold_of[j];
            let is_reference =
                if one_vs_rest { other != fold } else { reference.contains(other) };
            if is_reference {
                leaking = true;
                witnesses.push(LeakageWitness {
                    id: graph.ids[i].clone(),
                    fold: fold.to_string(),
                    neighbor_id: graph.ids[j].clone(),
                    neighbor_fold: other.to_string(),
                    distance: d,
                });
            }
        }
        if leaking {
            entry.n_leaking += 1;
        }
    }
    let mut per_fold: Vec<FoldLeakage> = per_fold.into_values().collect();
    for f in &mut per_fold {
        if f.n_items > 0 {
            f.ratio = f.n_leaking as f64 / f.n_items as f64;
        }
    }
    let n_audited: usize = per_fold.iter().map(|f| f.n_items).sum();
    let n_leaking: usize = per_fold.iter().map(|f| f.n_leaking).sum();
    let mut reference_folds: Vec<String> = if one_vs_rest {
        Vec::new()
    } else {
        reference.iter().map(|s| s.to_string()).collect()
    };
    reference_folds.sort();
    witnesses.sort_by(|a, b| (&a.id, &a.neighbor_id).cmp(&(&b.id, &b.neighbor_id)));
    Ok(LeakageReport {
        reference_folds,
        per_fold,
        n_audited,
        n_leaking,
        overall_ratio: if n_audited > 0 { n_leaking as f64 / n_audited as f64 } else { 0.0 },
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafeSplit {
    pub assignments: Vec<SplitAssignment>,
    /// Folds left empty despite a positive fraction, and similar conditions
    /// that are worth reporting but do not invalidate the split.
    pub warnings: Vec<String>,
}

/// Assign whole connected components to folds so no near-duplicate pair
/// spans folds; by construction the audit of the result reports zero
/// leakage. Components are placed largest-first into the fold with the
/// largest remaining deficit against its target fraction.
pub fn component_safe_split(
    graph: &NearDuplicateGraph,
    folds: &[(String, f64)],
) -> Result<SafeSplit, SplitError> {
    component_safe_split_stratified(graph, folds, None)
}

/// As [`component_safe_split`]; when labels are given, exact ties in the
/// count deficit are broken toward the fold whose label mean would move
/// closest to the global mean.
pub fn component_safe_split_stratified(
    graph: &NearDuplicateGraph,
    folds: &[(String, f64)],
    labels: Option<&HashMap<String, f64>>,
) -> Result<SafeSplit, SplitError> {
    let total_fraction: f64 = folds.iter().map(|(_, f)| f).sum();
    if folds.is_empty()
        || folds.iter().any(|(_, f)| *f < 0.0)
        || (total_fraction - 1.0).abs() > 1e-9
    {
        return Err(SplitError::BadFractions(total_fraction));
    }

    let n = graph.n_nodes() as f64;
    let mut components = graph.components();
    // Largest first; ties by smallest member to stay deterministic.
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));

    let global_mean = labels.map(|l| {
        let vals: Vec<f64> =
            graph.ids.iter().filter_map(|id| l.get(id.as_str()).copied()).collect();
        if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 }
    });

    let mut counts = vec![0usize; folds.len()];
    let mut label_sums = vec![0.0; folds.len()];
    let mut label_counts = vec![0usize; folds.len()];
    let mut fold_of_component = Vec::with_capacity(components.len());
    for comp in &components {
        let mut best = 0;
        let mut best_deficit = f64::NEG_INFINITY;
        for (k, (_, fraction)) in folds.iter().enumerate() {
            let deficit = fraction - counts[k] as f64 / n;
            if deficit > best_deficit + 1e-12 {
                best = k;
                best_deficit = deficit;
            } else if (deficit - best_deficit).abs() <= 1e-12 {
                if let (Some(labels), Some(global)) = (labels, global_mean) {
                    let comp_vals: Vec<f64> = comp
                        .iter()
                        .filter_map(|&i| labels.get(graph.ids[i].as_str()).copied())
                        .collect();
                    if !comp_vals.is_empty() {
                        let dev = |k: usize| {
                            let s: f64 = label_sums[k] + comp_vals.iter().sum::<f64>();
                            let c = label_counts[k] + comp_vals.len();
                            (s / c as f64 - global).abs()
                        };
                        if dev(k) < dev(best) {
                            best = k;
                        }
                    }
                }
            }
        }
        counts[best] += comp.len();
        if let Some(labels) = labels {
            for &i in comp {
                if let Some(&v) = labels.get(graph.ids[i].as_str()) {
                    label_sums[best] += v;
                    label_counts[best] += 1;
                }
            }
        }
        fold_of_component.push(best);
    }

    let mut assignments = Vec::with_capacity(graph.n_nodes());
    for (comp, &k) in components.iter().zip(&fold_of_component) {
        for &i in comp {
            assignments.push(SplitAssignment {
                id: graph.ids[i].clone(),
                fold: folds[k].0.clone(),
            });
        }
    }
    assignments.sort_by(|a, b| a.id.cmp(&b.id));

    let mut warnings = Vec::new();
    for (k, (name, fraction)) in folds.iter().enumerate() {
        if *fraction > 0.0 && counts[k] == 0 {
            warnings.push(format!(
                "fold {name} received no nodes despite fraction {fraction}; \
                 too few components to satisfy the requested fractions"
            ));
        }
    }
    Ok(SafeSplit { assignments, warnings })
}

/// Write edges as CSV with header `id_a,id_b,distance`.
pub fn write_edges<W: Write>(out: W, graph: &NearDuplicateGraph) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id_a", "id_b", "distance"])?;
    for (i, j, d) in graph.edges() {
        w.write_record([&graph.ids[i], &graph.ids[j], &format!("{d}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Read an edge CSV written by [`write_edges`].
pub fn read_edges<R: Read>(input: R) -> csv::Result<Vec<(String, String, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    let mut edges = Vec::new();
    for record in r.deserialize() {
        let (a, b, d): (String, String, f64) = record?;
        edges.push((a, b, d));
    }
    Ok(edges)
}

/// Write a fold assignment as CSV with header `id,fold`.
pub fn write_split<W: Write>(out: W, split: &[SplitAssignment]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "fold"])?;
    for a in split {
        w.write_record([&a.id, &a.fold])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_split<R: Read>(input: R) -> csv::Result<Vec<SplitAssignment>> {
    let mut r = csv::Reader::from_reader(input);
    let mut split = Vec::new();
    for record in r.deserialize() {
        let a: SplitAssignment = record?;
        split.push(a);
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(ids: &[&str], edges: &[(&str, &str)]) -> NearDuplicateGraph {
        let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let edges: Vec<(String, String, f64)> =
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string(), 0.01)).collect();
        NearDuplicateGraph::from_edges(ids, &edges).unwrap()
    }

    fn split(pairs: &[(&str, &str)]) -> Vec<SplitAssignment> {
        pairs
            .iter()
            .map(|(id, fold)| SplitAssignment { id: id.to_string(), fold: fold.to_string() })
            .collect()
    }

    #[test]
    fn path_keeps_endpoints() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let kept = greedy_dedup(&g, DedupOrder::LexicographicId);
        let ids: Vec<&str> = kept.iter().map(|&i| g.ids[i].as_str()).collect();
        assert_eq!(ids, vec!["a", "c"]);
    }

    #[test]
    fn edgeless_graph_keeps_everything() {
        let g = graph(&["x", "y", "z"], &[]);
        assert_eq!(greedy_dedup(&g, DedupOrder::LexicographicId).len(), 3);
    }

    #[test]
    fn complete_graph_keeps_order_first_node() {
        let g = graph(
            &["m", "k", "p"],
            &[("m", "k"), ("m", "p"), ("k", "p")],
        );
        let kept = greedy_dedup(&g, DedupOrder::LexicographicId);
        assert_eq!(kept.len(), 1);
        assert_eq!(g.ids[kept[0]], "k");
    }

    #[test]
    fn max_degree_first_keeps_star_center() {
        let g = graph(
            &["z", "a", "b", "c"],
            &[("z", "a"), ("z", "b"), ("z", "c")],
        );
        let kept = greedy_dedup(&g, DedupOrder::MaxDegreeFirst);
        let ids: Vec<&str> = kept.iter().map(|&i| g.ids[i].as_str()).collect();
        assert_eq!(ids, vec!["z"]);
        // Lexicographic order keeps the three leaves instead.
        let kept = greedy_dedup(&g, DedupOrder::LexicographicId);
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn components_split_clusters() {
        let g = graph(&["a", "b", "c", "d", "e"], &[("a", "b"), ("c", "d")]);
        let comps = g.components();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn duplicate_pair_across_test_and_train_leaks() {
        let g = graph(&["p", "q"], &[("p", "q")]);
        let report =
            audit_split(&g, &split(&[("p", "test"), ("q", "train")])).unwrap();
        assert_eq!(report.n_audited, 1);
        assert_eq!(report.n_leaking, 1);
        assert_eq!(report.overall_ratio, 1.0);
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].neighbor_id, "q");
    }

    #[test]
    fn component_boundary_split_is_clean() {
        let g = graph(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        let report = audit_split(
            &g,
            &split(&[("a", "train"), ("b", "train"), ("c", "test"), ("d", "test")]),
        )
        .unwrap();
        assert_eq!(report.n_leaking, 0);
        assert_eq!(report.overall_ratio, 0.0);
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn one_vs_rest_when_no_reserved_folds() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let report = audit_split(&g, &split(&[("a", "fold1"), ("b", "fold2")])).unwrap();
        assert!(report.reference_folds.is_empty());
        assert_eq!(report.n_audited, 2);
        assert_eq!(report.n_leaking, 2);
    }

    #[test]
    fn unassigned_node_is_an_error() {
        let g = graph(&["a", "b"], &[]);
        let err = audit_split(&g, &split(&[("a", "train")])).unwrap_err();
        assert!(matches!(err, SplitError::UnassignedNode(id) if id == "b"));
    }

    #[test]
    fn singleton_components_follow_fractions() {
        let ids: Vec<String> = (0..10).map(|i| format!("n{i}")).collect();
        let g = NearDuplicateGraph::from_edges(ids, &[]).unwrap();
        let folds = vec![("train".to_string(), 0.8), ("test".to_string(), 0.2)];
        let result = component_safe_split(&g, &folds).unwrap();
        let train = result.assignments.iter().filter(|a| a.fold == "train").count();
        let test = result.assignments.iter().filter(|a| a.fold == "test").count();
        assert_eq!((train, test), (8, 2));
        assert!(result.warnings.is_empty());
        let report = audit_split(&g, &result.assignments).unwrap();
        assert_eq!(report.n_leaking, 0);
    }

    #[test]
    fn giant_component_lands_in_one_fold_with_warning() {
        let ids = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let edges = vec![
            ("a".to_string(), "b".to_string(), 0.01),
            ("b".to_string(), "c".to_string(), 0.01),
        ];
        let g = NearDuplicateGraph::from_edges(ids, &edges).unwrap();
        let folds = vec![("train".to_string(), 0.5), ("test".to_string(), 0.5)];
        let result = component_safe_split(&g, &folds).unwrap();
        let folds_used: HashSet<&str> =
            result.assignments.iter().map(|a| a.fold.as_str()).collect();
        assert_eq!(folds_used.len(), 1);
        assert_eq!(result.warnings.len(), 1);
        assert_eq!(audit_split(&g, &result.assignments).unwrap().n_leaking, 0);
    }

    #[test]
    fn bad_fractions_rejected() {
        let g = graph(&["a"], &[]);
        let err = component_safe_split(&g, &[("train".to_string(), 0.7)]).unwrap_err();
        assert!(matches!(err, SplitError::BadFractions(_)));
    }

    #[test]
    fn stratified_tie_break_balances_labels() {
        // Four singletons, two folds at 50/50, labels alternating high/low.
        let ids: Vec<String> = vec!["a", "b", "c", "d"].into_iter().map(String::from).collect();
        let g = NearDuplicateGraph::from_edges(ids, &[]).unwrap();
        let labels: HashMap<String, f64> = [("a", 1.0), ("b", 1.0), ("c", -1.0), ("d", -1.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let folds = vec![("x".to_string(), 0.5), ("y".to_string(), 0.5)];
        let result = component_safe_split_stratified(&g, &folds, Some(&labels)).unwrap();
        let mean = |fold: &str| {
            let vals: Vec<f64> = result
                .assignments
                .iter()
                .filter(|a| a.fold == fold)
                .map(|a| labels[&a.id])
                .collect();
            vals.iter().sum::<f64>() / vals.len() as f64
        };
        assert_eq!(mean("x"), 0.0);
        assert_eq!(mean("y"), 0.0);
    }

    #[test]
    fn verify_retained_flags_planted_duplicates() {
        let mut e1 = [0.0; crate::idist::EMBED_DIM];
        let e2 = [0.0; crate::idist::EMBED_DIM];
        e1[0] = 0.001;
        let violations = verify_retained(&[e1, e2], &[0, 1], 0.03);
        assert_eq!(violations.len(), 1);
        assert!(verify_retained(&[e1, e2], &[0], 0.03).is_empty());
    }

    #[test]
    fn edge_and_split_csv_round_trip() {
        let g = graph(&["a", "b", "c"], &[("a", "b")]);
        let mut buf = Vec::new();
        write_edges(&mut buf, &g).unwrap();
        let edges = read_edges(buf.as_slice()).unwrap();
        assert_eq!(edges, vec![("a".to_string(), "b".to_string(), 0.01)]);

        let s = split(&[("a", "train"), ("b", "test")]);
        let mut buf = Vec::new();
        write_split(&mut buf, &s).unwrap();
        assert_eq!(read_split(buf.as_slice()).unwrap(), s);
    }
}
