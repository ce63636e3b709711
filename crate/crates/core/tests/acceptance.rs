//! Acceptance suite: one test per shipping criterion, each checking an
//! externally stated property (invariances, closed forms, oracle equality,
//! performance floors) rather than implementation details.

use ppikit::ddg::{log_odds_ddg, masked_ce_loss, ProbabilityMatrix};
use ppikit::dedup::{
    audit_split, component_safe_split, greedy_dedup, verify_retained, DedupOrder,
    NearDuplicateGraph, SplitAssignment,
};
use ppikit::filter::{compute_bsa, shrake_rupley_sasa, two_sphere_exposed_area, SasaParams};
use ppikit::geometry::{RigidMotion, Rotation, Vec3};
use ppikit::idist::{
    idist, idist_embed, pairwise_near_duplicates, preset_by_name, Embedding, IDistConfig,
    PairwiseMode, EMBED_DIM, PRESET_DIPS6, PRESET_PPIREF10,
};
use ppikit::interface::{extract_interfaces, Interface, InterfaceChain, InterfaceResidue};
use ppikit::metrics::{
    evaluate, precision_at_percent, roc_auc, spearman, stabilizing_precision_recall,
    PredictionRow, PredictionSet,
};
use ppikit::structure::{parse_structure, AminoAcid, Format};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::time::Instant;

const CHAIN_NAMES: [&str; 4] = ["A", "B", "C", "D"];

fn random_amino(rng: &mut ChaCha8Rng) -> AminoAcid {
    // One unknown residue in twenty-one keeps the zero-feature path hot.
    if rng.gen_range(0..21) == 20 {
        AminoAcid::Unknown
    } else {
        AminoAcid::STANDARD[rng.gen_range(0..20)]
    }
}

/// A synthetic interface with the stated residue and chain counts, alpha
/// carbons uniform in a 60 A box.
fn random_interface(rng: &mut ChaCha8Rng, n_residues: usize, n_chains: usize) -> Interface {
    assert!(n_residues >= n_chains);
    let mut sizes = vec![1usize; n_chains];
    for _ in 0..n_residues - n_chains {
        sizes[rng.gen_range(0..n_chains)] += 1;
    }
    let chains: Vec<InterfaceChain> = sizes
        .iter()
        .enumerate()
        .map(|(c, &size)| InterfaceChain {
            id: CHAIN_NAMES[c].to_string(),
            residues: (0..size)
                .map(|r| InterfaceResidue {
                    chain_id: CHAIN_NAMES[c].to_string(),
                    seq_number: r as i32 + 1,
                    insertion_code: None,
                    aa: random_amino(rng),
                    ca: Vec3::new(
                        rng.gen_range(-30.0..30.0),
                        rng.gen_range(-30.0..30.0),
                        rng.gen_range(-30.0..30.0),
                    ),
                })
                .collect(),
        })
        .collect();
    let id = std::iter::once("RAND")
        .chain(chains.iter().map(|c| c.id.as_str()))
        .collect::<Vec<_>>()
        .join("_");
    Interface { id, source: "RAND".to_string(), chains, cutoff: 10.0 }
}

fn random_motion(rng: &mut ChaCha8Rng) -> RigidMotion {
    let axis = Vec3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    RigidMotion {
        rotation: Rotation::from_axis_angle(axis, rng.gen_range(0.0..std::f64::consts::TAU)),
        translation: Vec3::new(
            rng.gen_range(-100.0..100.0),
            rng.gen_range(-100.0..100.0),
            rng.gen_range(-100.0..100.0),
        ),
    }
}

fn moved(interface: &Interface, motion: &RigidMotion) -> Interface {
    let mut out = interface.clone();
    for chain in &mut out.chains {
        for residue in &mut chain.residues {
            residue.ca = motion.apply(residue.ca);
        }
    }
    out
}

#[test]
fn embeddings_are_invariant_under_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let config = IDistConfig::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n_chains = rng.gen_range(2..=4);
        let n_residues = rng.gen_range(n_chains.max(5)..=300);
        let interface = random_interface(&mut rng, n_residues, n_chains);
        let motion = random_motion(&mut rng);
        let a = idist_embed(&interface, &config).unwrap();
        let b = idist_embed(&moved(&interface, &motion), &config).unwrap();
        for k in 0..EMBED_DIM {
            worst = worst.max((a[k] - b[k]).abs());
        }
    }
    assert!(worst <= 1e-9, "worst deviation {worst:e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
}

/// Two single-residue chains of the same class at distance d embed to a
/// single nonzero component 3/4 - exp(-d^2/16)/4; all algebra collapses to a
/// value checkable by hand.
#[test]
fn two_residue_interface_matches_the_closed_form() {
    let config = IDistConfig::default();
    let embed_at = |d: f64| {
        let chains = ["A", "B"]
            .iter()
            .enumerate()
            .map(|(c, id)| InterfaceChain {
                id: id.to_string(),
                residues: vec![InterfaceResidue {
                    chain_id: id.to_string(),
                    seq_number: 1,
                    insertion_code: None,
                    aa: AminoAcid::Trp,
                    ca: Vec3::new(d * c as f64, 0.0, 0.0),
                }],
            })
            .collect();
        idist_embed(
            &Interface {
                id: "X_A_B".into(),
                source: "X".into(),
                chains,
                cutoff: 10.0,
            },
            &config,
        )
        .unwrap()
    };

    let trp = AminoAcid::Trp as usize;
    for d in [4.0, 8.0] {
        let z = embed_at(d);
        let expected = 0.75 - 0.25 * (-d * d / 16.0).exp();
        assert!((z[trp] - expected).abs() <= 1e-12, "z = {}, want {expected}", z[trp]);
        for (k, &v) in z.iter().enumerate() {
            if k != trp {
                assert_eq!(v, 0.0, "component {k} should be exactly zero");
            }
        }
    }
    let expected_distance = 0.25 * ((-1.0f64).exp() - (-4.0f64).exp()).abs();
    let measured = idist(&embed_at(4.0), &embed_at(8.0));
    assert!((measured - expected_distance).abs() <= 1e-12);
}

#[test]
fn embedding_distance_satisfies_the_metric_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let random_embedding = |rng: &mut ChaCha8Rng| {
        let mut z = [0.0; EMBED_DIM];
        for v in &mut z {
            *v = rng.gen_range(-1.0..1.0);
        }
        z
    };
    for _ in 0..10_000 {
        let a = random_embedding(&mut rng);
        let b = random_embedding(&mut rng);
        let c = random_embedding(&mut rng);
        assert_eq!(idist(&a, &a), 0.0);
        assert_eq!(idist(&a, &b), idist(&b, &a));
        assert!(idist(&a, &b) >= 0.0);
        assert!(idist(&a, &c) <= idist(&a, &b) + idist(&b, &c) + 1e-12);
    }
}

/// Clustered embeddings force real neighbor structure; the accelerated
/// search must return exactly the pairs the quadratic scan returns.
#[test]
fn grid_search_equals_the_all_pairs_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let tau = 0.03;
    let mut embeddings: Vec<Embedding> = Vec::with_capacity(500);
    let mut centers: Vec<Embedding> = Vec::new();
    for _ in 0..20 {
        let mut c = [0.0; EMBED_DIM];
        for v in &mut c {
            *v = rng.gen_range(-0.5..0.5);
        }
        centers.push(c);
    }
    for i in 0..500 {
        let mut z = centers[i % centers.len()];
        for v in &mut z {
            // Half the points sit within tau of their center, half far out.
            let spread = if i % 2 == 0 { 0.001 } else { 0.2 };
            *v += rng.gen_range(-spread..spread);
        }
        embeddings.push(z);
    }
    let sorted = |mut pairs: Vec<(usize, usize, f64)>| {
        pairs.sort_by_key(|p| (p.0, p.1));
        pairs
    };
    let grid = sorted(pairwise_near_duplicates(&embeddings, tau, PairwiseMode::GridIndex));
    let all = sorted(pairwise_near_duplicates(&embeddings, tau, PairwiseMode::AllPairs));
    assert!(!all.is_empty(), "test data produced no near-duplicate pairs");
    assert_eq!(grid, all);
}

#[test]
fn presets_carry_the_calibrated_thresholds() {
    assert_eq!((PRESET_DIPS6.cutoff, PRESET_DIPS6.tau), (6.0, 0.04));
    assert_eq!((PRESET_PPIREF10.cutoff, PRESET_PPIREF10.tau), (10.0, 0.03));
    assert_eq!(preset_by_name("dips6").unwrap().config().tau, 0.04);
    assert_eq!(preset_by_name("ppiref10").unwrap().config().tau, 0.03);
    let default = IDistConfig::default();
    assert_eq!((default.alpha, default.tau), (16.0, 0.03));
}

#[test]
fn dedup_output_is_a_maximal_independent_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for case in 0..200 {
        let n = rng.gen_range(2..60);
        let p = rng.gen_range(0.02..0.3);
        let ids: Vec<String> = (0..n).map(|i| format!("n{i:03}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((ids[i].clone(), ids[j].clone(), rng.gen_range(0.0..0.03)));
                }
            }
        }
        let graph = NearDuplicateGraph::from_edges(ids.clone(), &edges).unwrap();
        let mut adjacent: HashSet<(usize, usize)> = HashSet::new();
        let index: HashMap<&str, usize> =
            ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        for (a, b, _) in &edges {
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            adjacent.insert((i.min(j), i.max(j)));
        }
        for order in [DedupOrder::LexicographicId, DedupOrder::MaxDegreeFirst] {
            let retained = greedy_dedup(&graph, order);
            let kept: HashSet<usize> = retained.iter().copied().collect();
            for &(i, j) in &adjacent {
                assert!(
                    !(kept.contains(&i) && kept.contains(&j)),
                    "case {case}: retained pair {i},{j} is adjacent"
                );
            }
            for dropped in (0..n).filter(|i| !kept.contains(i)) {
                let covered = adjacent.iter().any(|&(i, j)| {
                    (i == dropped && kept.contains(&j)) || (j == dropped && kept.contains(&i))
                });
                assert!(covered, "case {case}: node {dropped} dropped without a retained neighbor");
            }
        }
    }
}

/// After deduplicating real embeddings, a direct quadratic re-check of the
/// retained set finds no pair within tau.
#[test]
fn no_retained_pair_is_within_tau_of_another() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let tau = 0.03;
    let mut embeddings: Vec<Embedding> = Vec::new();
    for i in 0..300 {
        let mut z = [0.0; EMBED_DIM];
        let scale = if i % 3 == 0 { 0.002 } else { 0.3 };
        for v in &mut z {
            *v = rng.gen_range(-scale..scale);
        }
        embeddings.push(z);
    }
    let ids: Vec<String> = (0..embeddings.len()).map(|i| format!("e{i:03}")).collect();
    let graph =
        NearDuplicateGraph::from_embeddings(ids, &embeddings, tau, PairwiseMode::GridIndex);
    let retained = greedy_dedup(&graph, DedupOrder::LexicographicId);
    assert!(verify_retained(&embeddings, &retained, tau).is_empty());
    for (a, &i) in retained.iter().enumerate() {
        for &j in &retained[a + 1..] {
            assert!(idist(&embeddings[i], &embeddings[j]) >= tau);
        }
    }
}

/// Independent re-statement of the audit contract, used as the oracle for
/// the leakage tests below.
fn brute_force_leakage(
    ids: &[String],
    edges: &[(String, String, f64)],
    fold_of: &HashMap<String, String>,
) -> (usize, usize) {
    let reserved = ["train", "val", "validation"];
    let is_reference =
        |fold: &str| reserved.contains(&fold.to_ascii_lowercase().as_str());
    let one_vs_rest = !fold_of.values().any(|f| is_reference(f));
    let mut neighbors: HashMap<&str, Vec<&str>> = HashMap::new();
    for (a, b, _) in edges {
        neighbors.entry(a).or_default().push(b);
        neighbors.entry(b).or_default().push(a);
    }
    let mut audited = 0;
    let mut leaking = 0;
    for id in ids {
        let fold = &fold_of[id];
        if !one_vs_rest && is_reference(fold) {
            continue;
        }
        audited += 1;
        let leaks = neighbors.get(id.as_str()).is_some_and(|ns| {
            ns.iter().any(|n| {
                let other = &fold_of[*n];
                if one_vs_rest { other != fold } else { is_reference(other) }
            })
        });
        if leaks {
            leaking += 1;
        }
    }
    (audited, leaking)
}

#[test]
fn component_safe_splits_never_leak() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let folds = [
        ("train".to_string(), 0.8),
        ("val".to_string(), 0.1),
        ("test".to_string(), 0.1),
    ];
    for _ in 0..50 {
        let n = rng.gen_range(3..80);
        let ids: Vec<String> = (0..n).map(|i| format!("n{i:03}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.06) {
                    edges.push((ids[i].clone(), ids[j].clone(), 0.01));
                }
            }
        }
        let graph = NearDuplicateGraph::from_edges(ids, &edges).unwrap();
        let split = component_safe_split(&graph, &folds).unwrap();
        let report = audit_split(&graph, &split.assignments).unwrap();
        assert_eq!(report.n_leaking, 0);
        assert_eq!(report.overall_ratio, 0.0);
        assert!(report.witnesses.is_empty());
    }
}

#[test]
fn leaking_splits_report_exact_brute_force_ratios() {
    // Hand case: a duplicates a train item, b and c duplicate only each
    // other inside test, d is isolated. One of four audited items leaks.
    let ids: Vec<String> = ["t", "a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let edges = vec![
        ("t".to_string(), "a".to_string(), 0.01),
        ("b".to_string(), "c".to_string(), 0.02),
    ];
    let graph = NearDuplicateGraph::from_edges(ids.clone(), &edges).unwrap();
    let split: Vec<SplitAssignment> = [("t", "train"), ("a", "test"), ("b", "test"),
        ("c", "test"), ("d", "test")]
        .iter()
        .map(|(id, fold)| SplitAssignment { id: id.to_string(), fold: fold.to_string() })
        .collect();
    let report = audit_split(&graph, &split).unwrap();
    assert_eq!(report.n_audited, 4);
    assert_eq!(report.n_leaking, 1);
    assert_eq!(report.overall_ratio, 0.25);
    assert_eq!(report.witnesses.len(), 1);
    assert_eq!(report.witnesses[0].id, "a");

    // Randomized agreement with an independent restatement of the contract,
    // covering both the reserved-fold and the one-vs-rest conventions.
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for case in 0..50 {
        let fold_names: &[&str] =
            if case % 2 == 0 { &["train", "val", "test", "extra"] } else { &["x", "y", "z"] };
        let n = rng.gen_range(2..60);
        let ids: Vec<String> = (0..n).map(|i| format!("n{i:03}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.1) {
                    edges.push((ids[i].clone(), ids[j].clone(), 0.02));
                }
            }
        }
        let fold_of: HashMap<String, String> = ids
            .iter()
            .map(|id| (id.clone(), fold_names.choose(&mut rng).unwrap().to_string()))
            .collect();
        let graph = NearDuplicateGraph::from_edges(ids.clone(), &edges).unwrap();
        let split: Vec<SplitAssignment> = ids
            .iter()
            .map(|id| SplitAssignment { id: id.clone(), fold: fold_of[id].clone() })
            .collect();
        let report = audit_split(&graph, &split).unwrap();
        let (audited, leaking) = brute_force_leakage(&ids, &edges, &fold_of);
        assert_eq!(report.n_audited, audited, "case {case}");
        assert_eq!(report.n_leaking, leaking, "case {case}");
        let expected = if audited > 0 { leaking as f64 / audited as f64 } else { 0.0 };
        assert_eq!(report.overall_ratio, expected, "case {case}");
    }
}

#[test]
fn sasa_matches_analytic_sphere_areas() {
    let probe = 1.4;
    for r in [1.2, 1.7, 2.0] {
        let measured = shrake_rupley_sasa(&[(Vec3::new(0.0, 0.0, 0.0), r)], probe, 960)[0];
        let exact = 4.0 * std::f64::consts::PI * (r + probe) * (r + probe);
        assert!(
            (measured - exact).abs() / exact <= 0.005,
            "r {r}: measured {measured}, exact {exact}"
        );
    }

    // Overlapping, touching-range and engulfing pairs against the analytic
    // two-sphere formula.
    for (r1, r2, d) in [(1.7, 1.7, 2.0), (1.7, 1.2, 2.5), (1.9, 1.5, 3.2), (2.0, 0.4, 0.3)] {
        let inflated = [(Vec3::new(0.0, 0.0, 0.0), r1), (Vec3::new(d, 0.0, 0.0), r2)];
        let measured: f64 = shrake_rupley_sasa(&inflated, probe, 960).iter().sum();
        let exact = two_sphere_exposed_area(r1 + probe, r2 + probe, d);
        assert!(
            (measured - exact).abs() / exact <= 0.01,
            "r1 {r1} r2 {r2} d {d}: measured {measured}, exact {exact}"
        );
    }
}

#[test]
fn far_apart_chains_bury_no_surface() {
    let text = "\
ATOM      1  CA  GLY A   1       0.000   0.000   0.000  1.00  0.00           C
ATOM      2  CA  GLY A   2       3.800   0.000   0.000  1.00  0.00           C
ATOM      3  CA  GLY B   1     100.000   0.000   0.000  1.00  0.00           C
ATOM      4  CA  GLY B   2     103.800   0.000   0.000  1.00  0.00           C
END
";
    let structure = parse_structure(text, Format::Pdb, "FAR").unwrap();
    let bsa = compute_bsa(&structure, "A", "B", &SasaParams::default()).unwrap();
    assert!(bsa.abs() <= 1e-9, "bsa {bsa}");
}

/// Paired wild-type and mutant classes, different at every site.
fn random_substitutions(rng: &mut ChaCha8Rng, k: usize) -> (Vec<AminoAcid>, Vec<AminoAcid>) {
    let mut wt = Vec::with_capacity(k);
    let mut mutant = Vec::with_capacity(k);
    for _ in 0..k {
        let a = rng.gen_range(0..20);
        let b = (a + rng.gen_range(1..20)) % 20;
        wt.push(AminoAcid::STANDARD[a]);
        mutant.push(AminoAcid::STANDARD[b]);
    }
    (wt, mutant)
}

#[test]
fn ddg_is_antisymmetric_and_vanishes_under_uniformity() {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=8);
        let rows: Vec<[f64; 20]> = (0..n)
            .map(|_| {
                let mut row = [0.0; 20];
                for v in &mut row {
                    *v = rng.gen_range(1e-4..1.0);
                }
                let total: f64 = row.iter().sum();
                row.map(|v| v / total)
            })
            .collect();
        let p = ProbabilityMatrix::new(rows).unwrap();
        let k = rng.gen_range(1..=n);
        let mut mask: Vec<usize> = (0..n).collect();
        mask.shuffle(&mut rng);
        mask.truncate(k);
        let (wt, mutant) = random_substitutions(&mut rng, k);
        let forward = log_odds_ddg(&p, &wt, &mutant, &mask).unwrap();
        let backward = log_odds_ddg(&p, &mutant, &wt, &mask).unwrap();
        assert_eq!(forward, -backward, "antisymmetry must be bit-exact");
    }

    let uniform = ProbabilityMatrix::uniform(6);
    let mut rng = ChaCha8Rng::seed_from_u64(49);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=6);
        let mask: Vec<usize> = (0..k).collect();
        let (wt, mutant) = random_substitutions(&mut rng, k);
        assert_eq!(log_odds_ddg(&uniform, &wt, &mutant, &mask).unwrap(), 0.0);
    }
}

#[test]
fn unsmoothed_unweighted_loss_is_the_negative_log_likelihood() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let rows: Vec<[f64; 20]> = (0..n)
            .map(|_| {
                let mut row = [0.0; 20];
                for v in &mut row {
                    *v = rng.gen_range(1e-4..1.0);
                }
                let total: f64 = row.iter().sum();
                row.map(|v| v / total)
            })
            .collect();
        let p = ProbabilityMatrix::new(rows.clone()).unwrap();
        let native: Vec<AminoAcid> =
            (0..n).map(|_| AminoAcid::STANDARD[rng.gen_range(0..20)]).collect();
        let k = rng.gen_range(1..=n);
        let mut mask: Vec<usize> = (0..n).collect();
        mask.shuffle(&mut rng);
        mask.truncate(k);

        let loss = masked_ce_loss(&p, &native, &mask, 0.0, &[1.0; 20]).unwrap();
        let nll = -mask.iter().map(|&i| rows[i][native[i] as usize].ln()).sum::<f64>();
        assert!((loss - nll).abs() <= 1e-12);
    }
}

#[test]
fn metrics_match_brute_force_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);

    // Average ranks by definition: 1-based sort positions, ties averaged.
    fn oracle_ranks(values: &[f64]) -> Vec<f64> {
        values
            .iter()
            .map(|&v| {
                let below = values.iter().filter(|&&w| w < v).count() as f64;
                let equal = values.iter().filter(|&&w| w == v).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    }
    fn oracle_pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let cov: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
        let vx: f64 = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
        let vy: f64 = y.iter().map(|&b| (b - my) * (b - my)).sum();
        cov / (vx * vy).sqrt()
    }

    for case in 0..100 {
        let n = rng.gen_range(2..=200);
        // Draw from a small value set every other case to force heavy ties.
        let draw = |rng: &mut ChaCha8Rng| -> f64 {
            if case % 2 == 0 {
                [-2.0, -1.0, 0.0, 1.0, 2.0][rng.gen_range(0..5)]
            } else {
                rng.gen_range(-3.0..3.0)
            }
        };
        let pred: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let truth: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();

        if let Ok(s) = spearman(&pred, &truth) {
            let expected = oracle_pearson(&oracle_ranks(&pred), &oracle_ranks(&truth));
            assert!((s - expected).abs() <= 1e-12, "case {case}: {s} vs {expected}");
        }

        // Pairwise Mann-Whitney count; positives are true stabilizers and
        // the score orders by most-negative prediction first.
        if let Ok(auc) = roc_auc(&pred, &truth) {
            let mut wins = 0.0;
            let mut pairs = 0.0;
            for i in 0..n {
                if truth[i] >= 0.0 {
                    continue;
                }
                for j in 0..n {
                    if truth[j] < 0.0 {
                        continue;
                    }
                    pairs += 1.0;
                    if -pred[i] > -pred[j] {
                        wins += 1.0;
                    } else if pred[i] == pred[j] {
                        wins += 0.5;
                    }
                }
            }
            assert!((auc - wins / pairs).abs() <= 1e-12, "case {case}");
        }

        let (precision, recall) = stabilizing_precision_recall(&pred, &truth);
        let tp = pred
            .iter()
            .zip(&truth)
            .filter(|(&p, &t)| p < 0.0 && t < 0.0)
            .count() as f64;
        let pp = pred.iter().filter(|&&p| p < 0.0).count() as f64;
        let ap = truth.iter().filter(|&&t| t < 0.0).count() as f64;
        assert_eq!(precision, (pp > 0.0).then_some(tp / pp), "case {case}");
        assert_eq!(recall, (ap > 0.0).then_some(tp / ap), "case {case}");

        let favorable: Vec<bool> = truth.iter().map(|&t| t < 0.0).collect();
        for k in [5.0, 10.0, 37.5, 100.0] {
            let got = precision_at_percent(&pred, &favorable, k);
            let n_top = ((k / 100.0 * n as f64).ceil() as usize).clamp(1, n);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| pred[a].total_cmp(&pred[b]));
            let hits = order[..n_top].iter().filter(|&&i| favorable[i]).count();
            assert_eq!(got, hits as f64 / n_top as f64, "case {case} k {k}");
        }
    }
}

#[test]
fn aggregation_never_mixes_complexes() {
    // Group g1 is predicted perfectly, g2 perfectly inverted, g3 offset by a
    // constant. Any cross-group contamination would move some per-group
    // metric away from its isolated value.
    let mut rows = Vec::new();
    let mut add = |complex: &str, pred: f64, truth: f64, i: usize| {
        rows.push(PredictionRow {
            complex_id: complex.to_string(),
            mutation: format!("TA{}W", i + 1),
            pred_ddg: Some(pred),
            true_ddg: truth,
        });
    };
    for i in 0..6 {
        let t = i as f64 - 2.5;
        add("g1", t, t, i);
        add("g2", -t, t, i);
        add("g3", t + 100.0, t, i);
    }
    let (set, _) = PredictionSet::from_rows(&rows, None).unwrap();
    let combined = evaluate(&set, &[10.0]);

    for group in &combined.per_group {
        let alone: Vec<PredictionRow> =
            rows.iter().filter(|r| r.complex_id == group.complex_id).cloned().collect();
        let (single, _) = PredictionSet::from_rows(&alone, None).unwrap();
        let isolated = &evaluate(&single, &[10.0]).per_group[0];
        assert_eq!(group, isolated, "{} changed when evaluated together", group.complex_id);
    }

    let g = |name: &str| combined.per_group.iter().find(|g| g.complex_id == name).unwrap();
    assert_eq!(g("g1").spearman, Some(1.0));
    assert_eq!(g("g2").spearman, Some(-1.0));
    assert_eq!(g("g3").spearman, Some(1.0));
    assert_eq!(g("g3").mae, 100.0);
    assert_eq!(combined.spearman.mean, Some((1.0 - 1.0 + 1.0) / 3.0));
    assert_eq!(combined.mae.mean, Some((0.0 + g("g2").mae + 100.0) / 3.0));
}

#[test]
fn embedding_and_distance_throughput_meet_the_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let interface = random_interface(&mut rng, 200, 2);
    let config = IDistConfig::default();
    std::hint::black_box(idist_embed(&interface, &config).unwrap());
    let n_embeds = 200;
    let start = Instant::now();
    for _ in 0..n_embeds {
        std::hint::black_box(idist_embed(&interface, &config).unwrap());
    }
    let rate = n_embeds as f64 / start.elapsed().as_secs_f64();
    assert!(rate >= 100.0, "embedding rate {rate:.1}/s is below the floor");

    let embeddings: Vec<Embedding> = (0..1000)
        .map(|_| {
            let mut z = [0.0; EMBED_DIM];
            for v in &mut z {
                *v = rng.gen_range(-1.0..1.0);
            }
            z
        })
        .collect();
    let n_distances = 2_000_000usize;
    let start = Instant::now();
    let mut sink = 0.0;
    for i in 0..n_distances {
        let a = &embeddings[i % 1000];
        let b = &embeddings[(i * 7 + 13) % 1000];
        sink += idist(a, b);
    }
    std::hint::black_box(sink);
    let rate = n_distances as f64 / start.elapsed().as_secs_f64();
    assert!(rate >= 1e6, "distance rate {rate:.0}/s is below the floor");
}

/// Corpus-scale results (precision/recall against a structural aligner on
/// millions of pairs, dataset survival fractions, published split sizes,
/// model benchmark tables) need external corpora, an alignment tool and a
/// trained network. They are deliberately not tested here; the property
/// suites above cover the algorithms those results rest on.
#[test]
#[ignore = "needs external corpora and tools; run the property suites instead"]
fn corpus_scale_statistics_are_out_of_scope() {
    unreachable!("documented as out of scope");
}

#[test]
fn fixture_pipeline_is_deterministic_and_matches_the_frozen_census() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/trimer.pdb");
    let text = std::fs::read_to_string(path).unwrap();
    let structure = parse_structure(&text, Format::Auto, "fallback").unwrap();

    // Interface count recorded once by inspecting the fixture: chains sit
    // 8 A apart in a row, so exactly the two adjacent pairs touch at 10 A.
    let interfaces = extract_interfaces(&structure, 10.0);
    let ids: Vec<&str> = interfaces.iter().map(|i| i.id.as_str()).collect();
    assert_eq!(ids, ["9TRI_A_B", "9TRI_B_C"]);

    let config = IDistConfig::default();
    let once: Vec<Embedding> =
        interfaces.iter().map(|i| idist_embed(i, &config).unwrap()).collect();
    let again: Vec<Embedding> =
        interfaces.iter().map(|i| idist_embed(i, &config).unwrap()).collect();
    assert_eq!(once, again, "repeat runs must agree bit for bit");

    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let parallel =
            pool.install(|| ppikit::idist::embed_all(&interfaces, &config).unwrap());
        assert_eq!(parallel, once, "{threads}-thread run must agree bit for bit");
    }
}
