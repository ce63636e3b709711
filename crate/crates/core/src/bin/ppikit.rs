//! Command-line frontend for the interface mining, deduplication, split
//! audit and mutation-effect evaluation pipelines.
//!
//! Every command is deterministic for a fixed input, including across
//! worker counts: parallel work is merged back in input order. Diagnostics
//! go to stderr; data goes to files or stdout.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppikit::ddg::{log_odds_ddg, parse_mutation, read_mutations, read_pmat, read_pmat_csv};
use ppikit::dedup::{
    audit_split, component_safe_split_stratified, greedy_dedup, read_split, verify_retained,
    write_edges, write_split, DedupOrder, NearDuplicateGraph,
};
use ppikit::filter::{compute_bsa, FilterCriteria, FilterOutcome, FilterReport, SasaParams};
use ppikit::idist::{
    idist, idist_embed, preset_by_name, read_embeddings, write_embeddings, Embedding,
    IDistConfig, PairwiseMode, PRESET_PPIREF10,
};
use ppikit::interface::{
    extract_interfaces_verbose, read_manifest, trimmed_structure, write_manifest, Interface,
    ManifestRecord,
};
use ppikit::metrics::{evaluate, read_predictions, render_table, PredictionSet};
use ppikit::structure::{parse_structure, write_pdb, AminoAcid, Format, Structure};
use rayon::prelude::*;
use serde::Deserialize;
use std::collections::{BTreeMap, HashMap};
use std::error::Error;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

type CliResult<T> = Result<T, Box<dyn Error>>;

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ppikit: {e}");
            ExitCode::FAILURE
        }
    }
}

#[derive(Parser)]
#[command(name = "ppikit", version, about = "Protein-protein interface toolkit")]
struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel sections; 0 means one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse structure files and write an interface manifest.
    Extract(ExtractArgs),
    /// Apply method/resolution/BSA criteria to a manifest.
    Filter(FilterArgs),
    /// Embed the interfaces of a manifest into vectors.
    Embed(EmbedArgs),
    /// Print per-id distances between two embedding files.
    Compare(CompareArgs),
    /// Drop near-duplicate interfaces, keeping a maximal independent set.
    Dedup(DedupArgs),
    /// Report near-duplicate leakage across the folds of a split.
    AuditSplit(AuditArgs),
    /// Assign whole duplicate-components to folds so nothing leaks.
    SafeSplit(SafeSplitArgs),
    /// Score predicted vs measured ddG with per-complex metrics.
    EvalDdg(EvalArgs),
    /// Estimate ddG for mutations from a probability matrix.
    ScoreDdg(ScoreArgs),
}

/// Cutoff and embedding knobs shared by the pipeline commands. Resolution
/// order: built-in preset, config-file preset, config-file fields, --preset,
/// then individual flags. Picking a preset resets cutoff, tau and alpha to
/// its calibrated values.
#[derive(Args, Clone)]
struct TuningArgs {
    /// Calibrated pair: dips6 (6 A, tau 0.04) or ppiref10 (10 A, tau 0.03).
    #[arg(long, value_parser = ["dips6", "ppiref10"])]
    preset: Option<String>,
    /// Interface extraction cutoff in Angstroms.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Near-duplicate threshold on embedding distance.
    #[arg(long)]
    tau: Option<f64>,
    /// Gaussian length scale (squared Angstroms) of the embedding.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    Grid,
    AllPairs,
}

impl ModeArg {
    fn mode(self) -> PairwiseMode {
        match self {
            ModeArg::Grid => PairwiseMode::GridIndex,
            ModeArg::AllPairs => PairwiseMode::AllPairs,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OrderArg {
    /// Visit candidates in lexicographic id order.
    Id,
    /// Visit high-degree duplicates first.
    Degree,
}

#[derive(Args)]
struct ExtractArgs {
    /// Structure files or directories of .pdb/.ent/.cif/.mmcif files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Manifest output path (JSON Lines); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one trimmed PDB per interface into this directory.
    #[arg(long)]
    structures: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    /// Interface manifest to filter.
    #[arg(long)]
    manifest: PathBuf,
    /// Accepted experimental methods; repeat to allow several.
    #[arg(long = "method")]
    methods: Vec<String>,
    /// Resolution ceiling in Angstroms.
    #[arg(long)]
    max_resolution: Option<f64>,
    /// Buried surface area floor in squared Angstroms.
    #[arg(long)]
    min_bsa: Option<f64>,
    /// Sample points per atom for the SASA quadrature.
    #[arg(long)]
    sasa_points: Option<usize>,
    /// Filtered manifest output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the full per-interface report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Interface manifest naming what to embed; sources are re-read.
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Embedding file output (binary).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// First embedding file.
    a: PathBuf,
    /// Second embedding file.
    b: PathBuf,
}

#[derive(Args)]
struct DedupArgs {
    /// Embedding file to deduplicate.
    #[arg(long)]
    embeddings: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
    #[arg(long, value_enum, default_value = "grid")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "id")]
    order: OrderArg,
    /// Retained ids, one per line; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the near-duplicate edge list as CSV.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Re-check the retained set pairwise and fail on any violation.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct AuditArgs {
    /// Embedding file covering every item of the split.
    #[arg(long)]
    embeddings: PathBuf,
    /// Fold assignment CSV with columns id,fold.
    #[arg(long)]
    split: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
    #[arg(long, value_enum, default_value = "grid")]
    mode: ModeArg,
    /// Leakage report JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SafeSplitArgs {
    /// Embedding file of the items to split.
    #[arg(long)]
    embeddings: PathBuf,
    /// Fold fractions, e.g. train=0.8,val=0.1,test=0.1.
    #[arg(long)]
    fractions: String,
    /// Optional id,label CSV for stratified tie-breaking.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
    #[arg(long, value_enum, default_value = "grid")]
    mode: ModeArg,
    /// Assignment CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// CSV with columns complex_id, mutation, pred_ddg, true_ddg.
    #[arg(long)]
    predictions: PathBuf,
    /// Optional label CSV (complex_id, mutation_string, ddg_label) to join
    /// on normalized mutation strings instead of the true_ddg column.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Impute missing predictions with this value instead of skipping them.
    #[arg(long, num_args = 0..=1, default_missing_value = "0.69")]
    impute: Option<f64>,
    /// Retrieval depth in percent of the pool; repeatable.
    #[arg(long = "k-percent")]
    k_percents: Vec<f64>,
    /// Full metric report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Probability matrix, binary .pmat or .csv.
    #[arg(long)]
    pmat: PathBuf,
    /// CSV mapping matrix rows to sites, columns chain,position[,wt].
    #[arg(long)]
    sites: PathBuf,
    /// Mutations CSV (complex_id, mutation_string, ddg_label).
    #[arg(long)]
    mutations: PathBuf,
    /// Scored CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Optional values accepted from the TOML config file.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    preset: Option<String>,
    cutoff: Option<f64>,
    tau: Option<f64>,
    alpha: Option<f64>,
    workers: Option<usize>,
    methods: Option<Vec<String>>,
    max_resolution: Option<f64>,
    min_bsa: Option<f64>,
    sasa_points: Option<usize>,
}

fn run() -> CliResult<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("config {}: {e}", path.display()))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| format!("config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let workers = cli.workers.or(file.workers).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;

    match cli.command {
        Command::Extract(args) => cmd_extract(args, &file),
        Command::Filter(args) => cmd_filter(args, &file),
        Command::Embed(args) => cmd_embed(args, &file),
        Command::Compare(args) => cmd_compare(args),
        Command::Dedup(args) => cmd_dedup(args, &file),
        Command::AuditSplit(args) => cmd_audit_split(args, &file),
        Command::SafeSplit(args) => cmd_safe_split(args, &file),
        Command::EvalDdg(args) => cmd_eval_ddg(args),
        Command::ScoreDdg(args) => cmd_score_ddg(args),
    }
}

fn lookup_preset(name: &str) -> CliResult<ppikit::idist::Preset> {
    preset_by_name(name).ok_or_else(|| format!("unknown preset {name:?}").into())
}

fn resolve_tuning(args: &TuningArgs, file: &FileConfig) -> CliResult<(f64, IDistConfig)> {
    let base = match &file.preset {
        Some(name) => lookup_preset(name)?,
        None => PRESET_PPIREF10,
    };
    let mut cutoff = base.cutoff;
    let mut config = base.config();
    if let Some(v) = file.cutoff {
        cutoff = v;
    }
    if let Some(v) = file.tau {
        config.tau = v;
    }
    if let Some(v) = file.alpha {
        config.alpha = v;
    }
    if let Some(name) = &args.preset {
        let p = lookup_preset(name)?;
        cutoff = p.cutoff;
        config = p.config();
    }
    if let Some(v) = args.cutoff {
        cutoff = v;
    }
    if let Some(v) = args.tau {
        config.tau = v;
    }
    if let Some(v) = args.alpha {
        config.alpha = v;
    }
    if cutoff <= 0.0 || config.tau <= 0.0 || config.alpha <= 0.0 {
        return Err("cutoff, tau and alpha must be positive".into());
    }
    Ok((cutoff, config))
}

fn output(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| format!("{}: {e}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn read_structure_file(path: &Path) -> CliResult<Structure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("unknown");
    Ok(parse_structure(&text, Format::Auto, stem)
        .map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Expand directories into their structure files, sorted by name. Plain file
/// arguments pass through regardless of extension.
fn collect_structure_files(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    const EXTENSIONS: [&str; 4] = ["pdb", "ent", "cif", "mmcif"];
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found = Vec::new();
            for entry in
                std::fs::read_dir(input).map_err(|e| format!("{}: {e}", input.display()))?
            {
                let path = entry.map_err(|e| format!("{}: {e}", input.display()))?.path();
                let ext = path
                    .extension()
                    .and_then(|e| e.to_str())
                    .map(str::to_ascii_lowercase)
                    .unwrap_or_default();
                if path.is_file() && EXTENSIONS.contains(&ext.as_str()) {
                    found.push(path);
                }
            }
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

fn cmd_extract(args: ExtractArgs, file: &FileConfig) -> CliResult<()> {
    let (cutoff, _) = resolve_tuning(&args.tuning, file)?;
    let files = collect_structure_files(&args.inputs)?;

    struct FileResult {
        records: Vec<ManifestRecord>,
        warnings: Vec<String>,
        trimmed: Vec<(String, Structure)>,
    }

    let results: Vec<Result<FileResult, String>> = files
        .par_iter()
        .map(|path| {
            let structure = read_structure_file(path).map_err(|e| e.to_string())?;
            let (interfaces, warnings) = extract_interfaces_verbose(&structure, cutoff);
            let records =
                interfaces.iter().map(ManifestRecord::from_interface).collect::<Vec<_>>();
            let records = records
                .into_iter()
                .map(|mut r| {
                    r.source = path.display().to_string();
                    r
                })
                .collect();
            let trimmed = if args.structures.is_some() {
                interfaces
                    .iter()
                    .map(|i| (i.id.clone(), trimmed_structure(&structure, i)))
                    .collect()
            } else {
                Vec::new()
            };
            Ok(FileResult { records, warnings, trimmed })
        })
        .collect();

    let mut records = Vec::new();
    for result in results {
        let r = result.map_err(|e| e.to_string())?;
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        records.extend(r.records);
        if let Some(dir) = &args.structures {
            std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            for (id, s) in &r.trimmed {
                let path = dir.join(format!("{id}.pdb"));
                std::fs::write(&path, write_pdb(s))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
    }

    let mut out = output(&args.out)?;
    write_manifest(&mut out, &records)?;
    out.flush()?;
    eprintln!("{} interfaces from {} files", records.len(), files.len());
    Ok(())
}

fn load_manifest(path: &Path) -> CliResult<Vec<ManifestRecord>> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(read_manifest(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Manifest indices grouped by source path, preserving manifest order within
/// each group and grouping order by first appearance.
fn group_by_source(records: &[ManifestRecord]) -> Vec<(String, Vec<usize>)> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        let entry = groups.entry(rec.source.clone()).or_default();
        if entry.is_empty() {
            order.push(rec.source.clone());
        }
        entry.push(i);
    }
    order.into_iter().map(|s| (s.clone(), groups.remove(&s).unwrap())).collect()
}

fn cmd_filter(args: FilterArgs, file: &FileConfig) -> CliResult<()> {
    let records = load_manifest(&args.manifest)?;
    let defaults = FilterCriteria::default();
    let criteria = FilterCriteria {
        allowed_methods: if !args.methods.is_empty() {
            args.methods.iter().map(|m| m.to_ascii_uppercase()).collect()
        } else if let Some(m) = &file.methods {
            m.iter().map(|m| m.to_ascii_uppercase()).collect()
        } else {
            defaults.allowed_methods
        },
        max_resolution: args
            .max_resolution
            .or(file.max_resolution)
            .unwrap_or(defaults.max_resolution),
        min_bsa: args.min_bsa.or(file.min_bsa).unwrap_or(defaults.min_bsa),
    };
    let params = SasaParams {
        n_points: args.sasa_points.or(file.sasa_points).unwrap_or_default_points(),
        ..SasaParams::default()
    };

    let groups = group_by_source(&records);
    // Method, resolution, and buried area pulled from a parsed structure.
    type StructureFacts = (Option<String>, Option<f64>, f64);
    type Evaluated = (usize, Option<String>, Option<f64>, f64);
    let evaluated: Vec<Result<Vec<Evaluated>, String>> = groups
        .par_iter()
        .map(|(source, indices)| {
            let structure = read_structure_file(Path::new(source)).map_err(|e| e.to_string())?;
            let mut rows = Vec::with_capacity(indices.len());
            for &i in indices {
                let rec = &records[i];
                let bsa = match rec.chains.as_slice() {
                    [a, b] => compute_bsa(&structure, a, b, &params)
                        .map_err(|e| format!("{source} {}: {e}", rec.id))?,
                    _ => 0.0,
                };
                rows.push((i, structure.method.clone(), structure.resolution, bsa));
            }
            Ok(rows)
        })
        .collect();

    let mut by_index: Vec<Option<StructureFacts>> = vec![None; records.len()];
    for group in evaluated {
        for (i, method, resolution, bsa) in group.map_err(|e| e.to_string())? {
            by_index[i] = Some((method, resolution, bsa));
        }
    }

    let mut report = FilterReport {
        total: records.len(),
        passed: 0,
        failed_method: 0,
        failed_resolution: 0,
        failed_bsa: 0,
        outcomes: Vec::with_capacity(records.len()),
    };
    let mut retained = Vec::new();
    for (rec, row) in records.iter().zip(by_index) {
        let (method, resolution, bsa) = row.expect("every record evaluated");
        let method_ok = criteria.method_ok(method.as_deref());
        let resolution_ok = criteria.resolution_ok(resolution);
        let bsa_ok = criteria.bsa_ok(bsa);
        let pass = method_ok && resolution_ok && bsa_ok;
        report.failed_method += usize::from(!method_ok);
        report.failed_resolution += usize::from(!resolution_ok);
        report.failed_bsa += usize::from(!bsa_ok);
        if pass {
            report.passed += 1;
            let mut kept = rec.clone();
            kept.method = method.clone();
            kept.resolution = resolution;
            kept.bsa = Some(bsa);
            retained.push(kept);
        }
        report.outcomes.push(FilterOutcome {
            id: rec.id.clone(),
            method_ok,
            resolution_ok,
            bsa_ok,
            bsa,
            pass,
        });
    }

    let mut out = output(&args.out)?;
    write_manifest(&mut out, &retained)?;
    out.flush()?;
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    eprintln!(
        "{} of {} retained (failed method {}, resolution {}, bsa {})",
        report.passed, report.total, report.failed_method, report.failed_resolution,
        report.failed_bsa
    );
    Ok(())
}

trait DefaultPoints {
    fn unwrap_or_default_points(self) -> usize;
}

impl DefaultPoints for Option<usize> {
    fn unwrap_or_default_points(self) -> usize {
        self.unwrap_or(SasaParams::default().n_points)
    }
}

fn cmd_embed(args: EmbedArgs, file: &FileConfig) -> CliResult<()> {
    let (_, config) = resolve_tuning(&args.tuning, file)?;
    let records = load_manifest(&args.manifest)?;

    // Interfaces are re-extracted at each record's own cutoff, so a manifest
    // mixing cutoffs still embeds every record against its original geometry.
    let mut groups: BTreeMap<(String, u64), Vec<usize>> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        groups.entry((rec.source.clone(), rec.cutoff.to_bits())).or_default().push(i);
    }
    let groups: Vec<((String, u64), Vec<usize>)> = groups.into_iter().collect();

    let results: Vec<Result<Vec<(usize, Embedding)>, String>> = groups
        .par_iter()
        .map(|((source, cutoff_bits), indices)| {
            let cutoff = f64::from_bits(*cutoff_bits);
            let structure = read_structure_file(Path::new(source)).map_err(|e| e.to_string())?;
            let (interfaces, _) = extract_interfaces_verbose(&structure, cutoff);
            let by_id: HashMap<&str, &Interface> =
                interfaces.iter().map(|i| (i.id.as_str(), i)).collect();
            let mut rows = Vec::with_capacity(indices.len());
            for &i in indices {
                let rec = &records[i];
                let interface = by_id.get(rec.id.as_str()).ok_or_else(|| {
                    format!("{source}: interface {} not found at cutoff {cutoff}", rec.id)
                })?;
                let z = idist_embed(interface, &config)
                    .map_err(|e| format!("{source} {}: {e}", rec.id))?;
                rows.push((i, z));
            }
            Ok(rows)
        })
        .collect();

    let mut embeddings: Vec<Option<Embedding>> = vec![None; records.len()];
    for group in results {
        for (i, z) in group.map_err(|e| e.to_string())? {
            embeddings[i] = Some(z);
        }
    }
    let ids: Vec<String> = records.iter().map(|r| r.id.clone()).collect();
    let flat: Vec<Embedding> =
        embeddings.into_iter().map(|e| e.expect("every record embedded")).collect();

    let mut out = BufWriter::new(
        File::create(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?,
    );
    write_embeddings(&mut out, &ids, &flat)?;
    out.flush()?;
    eprintln!("embedded {} interfaces", ids.len());
    Ok(())
}

fn load_embeddings(path: &Path) -> CliResult<(Vec<String>, Vec<Embedding>)> {
    let mut file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(read_embeddings(&mut file).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Graph commands key items by id, so repeated ids would make their output
/// ambiguous; reject them early with the offender named.
fn load_unique_embeddings(path: &Path) -> CliResult<(Vec<String>, Vec<Embedding>)> {
    let (ids, embeddings) = load_embeddings(path)?;
    let mut seen = HashMap::new();
    for id in &ids {
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(format!("{}: id {id:?} appears more than once", path.display()).into());
        }
    }
    Ok((ids, embeddings))
}

fn cmd_compare(args: CompareArgs) -> CliResult<()> {
    let (ids_a, em_a) = load_embeddings(&args.a)?;
    let (ids_b, em_b) = load_embeddings(&args.b)?;
    let index_b: HashMap<&str, usize> =
        ids_b.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut matched = 0usize;
    for (i, id) in ids_a.iter().enumerate() {
        if let Some(&j) = index_b.get(id.as_str()) {
            writeln!(out, "{id}\t{:?}", idist(&em_a[i], &em_b[j]))?;
            matched += 1;
        }
    }
    if matched == 0 {
        return Err("the files share no interface ids".into());
    }
    let unmatched = (ids_a.len() - matched) + (ids_b.len() - matched);
    if unmatched > 0 {
        eprintln!("{unmatched} ids present in only one file");
    }
    Ok(())
}

fn cmd_dedup(args: DedupArgs, file: &FileConfig) -> CliResult<()> {
    let (_, config) = resolve_tuning(&args.tuning, file)?;
    let (ids, embeddings) = load_unique_embeddings(&args.embeddings)?;
    let graph =
        NearDuplicateGraph::from_embeddings(ids, &embeddings, config.tau, args.mode.mode());
    let order = match args.order {
        OrderArg::Id => DedupOrder::LexicographicId,
        OrderArg::Degree => DedupOrder::MaxDegreeFirst,
    };
    let retained = greedy_dedup(&graph, order);

    if let Some(path) = &args.edges {
        let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        write_edges(BufWriter::new(file), &graph)?;
    }
    if args.verify {
        let violations = verify_retained(&embeddings, &retained, config.tau);
        if !violations.is_empty() {
            return Err(format!(
                "verification failed: {} retained pairs within tau",
                violations.len()
            )
            .into());
        }
    }

    let mut out = output(&args.out)?;
    for &i in &retained {
        writeln!(out, "{}", graph.ids[i])?;
    }
    out.flush()?;
    eprintln!(
        "{} of {} kept ({} near-duplicate edges)",
        retained.len(),
        graph.n_nodes(),
        graph.n_edges()
    );
    Ok(())
}

fn load_graph(
    embeddings_path: &Path,
    config: &IDistConfig,
    mode: ModeArg,
) -> CliResult<NearDuplicateGraph> {
    let (ids, embeddings) = load_unique_embeddings(embeddings_path)?;
    Ok(NearDuplicateGraph::from_embeddings(ids, &embeddings, config.tau, mode.mode()))
}

fn cmd_audit_split(args: AuditArgs, file: &FileConfig) -> CliResult<()> {
    let (_, config) = resolve_tuning(&args.tuning, file)?;
    let graph = load_graph(&args.embeddings, &config, args.mode)?;
    let split_file =
        File::open(&args.split).map_err(|e| format!("{}: {e}", args.split.display()))?;
    let split = read_split(BufReader::new(split_file))?;
    let report = audit_split(&graph, &split)?;

    let mut out = output(&args.out)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    out.write_all(b"\n")?;
    out.flush()?;
    eprintln!(
        "audited {} items across {:?}: {} leaking (ratio {:.6})",
        report.n_audited, report.reference_folds, report.n_leaking, report.overall_ratio
    );
    Ok(())
}

fn parse_fractions(text: &str) -> CliResult<Vec<(String, f64)>> {
    let mut folds = Vec::new();
    for part in text.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad fold spec {part:?}, want name=fraction"))?;
        let fraction: f64 =
            value.trim().parse().map_err(|e| format!("bad fraction {value:?}: {e}"))?;
        folds.push((name.trim().to_string(), fraction));
    }
    Ok(folds)
}

fn read_labels(path: &Path) -> CliResult<HashMap<String, f64>> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut labels = HashMap::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 2 {
            return Err(format!("{}: label rows need id,label", path.display()).into());
        }
        let value: f64 = record[1]
            .parse()
            .map_err(|e| format!("{}: bad label {:?}: {e}", path.display(), &record[1]))?;
        labels.insert(record[0].to_string(), value);
    }
    Ok(labels)
}

fn cmd_safe_split(args: SafeSplitArgs, file: &FileConfig) -> CliResult<()> {
    let (_, config) = resolve_tuning(&args.tuning, file)?;
    let graph = load_graph(&args.embeddings, &config, args.mode)?;
    let folds = parse_fractions(&args.fractions)?;
    let labels = match &args.labels {
        Some(path) => Some(read_labels(path)?),
        None => None,
    };
    let split = component_safe_split_stratified(&graph, &folds, labels.as_ref())?;
    for warning in &split.warnings {
        eprintln!("warning: {warning}");
    }
    let out = output(&args.out)?;
    write_split(out, &split.assignments)?;
    eprintln!("assigned {} items to {} folds", split.assignments.len(), folds.len());
    Ok(())
}

fn cmd_eval_ddg(args: EvalArgs) -> CliResult<()> {
    let file = File::open(&args.predictions)
        .map_err(|e| format!("{}: {e}", args.predictions.display()))?;
    let mut rows = read_predictions(BufReader::new(file))?;

    if let Some(path) = &args.labels {
        let label_file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mutations = read_mutations(BufReader::new(label_file))?;
        let mut by_key: HashMap<(String, String), f64> = HashMap::new();
        for m in &mutations {
            if let Some(label) = m.label {
                by_key.insert((m.complex_id.clone(), m.mutation_string()), label);
            }
        }
        let mut missing = 0usize;
        rows.retain_mut(|row| {
            let normalized = parse_mutation(&row.mutation)
                .map(|subs| {
                    subs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
                })
                .unwrap_or_else(|_| row.mutation.clone());
            match by_key.get(&(row.complex_id.clone(), normalized)) {
                Some(&label) => {
                    row.true_ddg = label;
                    true
                }
                None => {
                    missing += 1;
                    false
                }
            }
        });
        if missing > 0 {
            eprintln!("{missing} predictions had no label and were dropped");
        }
    }

    let (set, skipped) = PredictionSet::from_rows(&rows, args.impute)?;
    if skipped > 0 {
        eprintln!("{skipped} rows without a prediction skipped");
    }
    let k_percents =
        if args.k_percents.is_empty() { vec![5.0, 10.0] } else { args.k_percents.clone() };
    let report = evaluate(&set, &k_percents);
    print!("{}", render_table(&report));
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

/// Site key: chain, position, insertion code.
type SiteKey = (char, i32, Option<char>);

/// Per-site table parsed from a sites CSV: row lookup plus optional wild types.
type SiteTable = (HashMap<SiteKey, usize>, Vec<Option<AminoAcid>>);

fn read_sites(path: &Path) -> CliResult<SiteTable> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut map = HashMap::new();
    let mut wts = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            return Err(format!("{}: site rows need chain,position", path.display()).into());
        }
        let chain = record[0]
            .trim()
            .chars()
            .next()
            .filter(|c| c.is_ascii_alphanumeric() && record[0].trim().len() == 1)
            .ok_or_else(|| format!("{}: bad chain {:?}", path.display(), &record[0]))?;
        let pos_text = record[1].trim();
        let (digits, icode) = match pos_text.chars().last() {
            Some(c) if c.is_ascii_lowercase() => {
                (&pos_text[..pos_text.len() - 1], Some(c))
            }
            _ => (pos_text, None),
        };
        let position: i32 = digits
            .parse()
            .map_err(|e| format!("{}: bad position {pos_text:?}: {e}", path.display()))?;
        let wt = match record.get(2).map(str::trim) {
            None | Some("") => None,
            Some(s) => {
                let c = s.chars().next().unwrap();
                Some(AminoAcid::from_one_letter(c).ok_or_else(|| {
                    format!("{}: bad wild-type letter {s:?}", path.display())
                })?)
            }
        };
        if map.insert((chain, position, icode), row).is_some() {
            return Err(format!("{}: duplicate site {pos_text:?}", path.display()).into());
        }
        wts.push(wt);
    }
    Ok((map, wts))
}

fn cmd_score_ddg(args: ScoreArgs) -> CliResult<()> {
    let is_csv = args
        .pmat
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let pmat = {
        let mut file =
            File::open(&args.pmat).map_err(|e| format!("{}: {e}", args.pmat.display()))?;
        if is_csv {
            read_pmat_csv(BufReader::new(file))
        } else {
            read_pmat(&mut file)
        }
        .map_err(|e| format!("{}: {e}", args.pmat.display()))?
    };
    let (sites, site_wts) = read_sites(&args.sites)?;
    if sites.len() != pmat.n_rows() {
        return Err(format!(
            "site table has {} rows but the matrix has {}",
            sites.len(),
            pmat.n_rows()
        )
        .into());
    }

    let mutations_file = File::open(&args.mutations)
        .map_err(|e| format!("{}: {e}", args.mutations.display()))?;
    let mutations = read_mutations(BufReader::new(mutations_file))?;

    let mut writer = csv::Writer::from_writer(output(&args.out)?);
    writer.write_record(["complex_id", "mutation", "pred_ddg", "true_ddg"])?;
    for record in &mutations {
        let mutation = record.mutation_string();
        let mut mask = Vec::with_capacity(record.substitutions.len());
        let mut wt = Vec::with_capacity(record.substitutions.len());
        let mut mutant = Vec::with_capacity(record.substitutions.len());
        for sub in &record.substitutions {
            let key = (sub.chain, sub.position, sub.insertion_code);
            let &row = sites.get(&key).ok_or_else(|| {
                format!("{} {mutation}: site {}{} not in the site table",
                    record.complex_id, sub.chain, sub.position)
            })?;
            if let Some(expected) = site_wts[row] {
                if expected != sub.wt {
                    return Err(format!(
                        "{} {mutation}: wild type {} does not match site table {}",
                        record.complex_id,
                        sub.wt.one_letter(),
                        expected.one_letter()
                    )
                    .into());
                }
            }
            mask.push(row);
            wt.push(sub.wt);
            mutant.push(sub.mutant);
        }
        let pred = log_odds_ddg(&pmat, &wt, &mutant, &mask)
            .map_err(|e| format!("{} {mutation}: {e}", record.complex_id))?;
        writer.write_record([
            record.complex_id.as_str(),
            mutation.as_str(),
            &format!("{pred}"),
            &record.label.map(|v| format!("{v}")).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    eprintln!("scored {} mutations", mutations.len());
    Ok(())
}
