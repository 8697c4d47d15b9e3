//! Command-line front end: `extract`, `eval`, `compare` and `synth`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mammotex_core::texture::feature_names;
use mammotex_core::{
    compare_classifiers, crop_roi, evaluate, extract_all, ClassifierConfig, ClassifierKind,
    Dataset, ExtractionConfig, MembershipInit, Protocol, RoiSpec,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::features::{dataset_to_rows, read_dataset, write_features, FeatureRow};
use crate::mias::{parse_mias_index, DEFAULT_IMAGE_HEIGHT};
use crate::pgm::read_pgm;
use crate::report::{eval_table, roc_csv, to_json, CompareJson, ReportJson};
use crate::synth::{two_clusters, SynthConfig};

/// Overrides the directory that default output paths are placed in.
pub const OUT_DIR_ENV: &str = "MAMMOTEX_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "mammotex",
    version,
    about = "Mammogram ROI texture features and nearest-neighbour classifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract texture features for every annotated ROI into a CSV.
    Extract(ExtractArgs),
    /// Evaluate one classifier on a feature CSV.
    Eval(EvalArgs),
    /// Evaluate several classifiers under one protocol and tabulate them.
    Compare(CompareArgs),
    /// Write a seeded two-cluster feature CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Directory holding the PGM images.
    #[arg(long)]
    pub images: PathBuf,
    /// MIAS annotation index.
    #[arg(long)]
    pub index: PathBuf,
    /// Output CSV [default: features.csv in the output directory].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Image file extension appended to each reference.
    #[arg(long, default_value = "pgm")]
    pub extension: String,
    /// Image height used to flip index y coordinates to a top-left origin.
    #[arg(long, default_value_t = DEFAULT_IMAGE_HEIGHT)]
    pub image_height: u32,
    /// Crop side in pixels [default: 2*radius+1].
    #[arg(long)]
    pub side: Option<usize>,
    /// Gray levels after quantization.
    #[arg(long, default_value_t = 16)]
    pub levels: usize,
    /// Pixel offset for co-occurrence and difference statistics.
    #[arg(long, default_value_t = 1)]
    pub distance: u32,
    /// Count each co-occurrence pair in both orders.
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Crisp,
    Keller,
}

impl From<InitArg> for MembershipInit {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Crisp => MembershipInit::Crisp,
            InitArg::Keller => MembershipInit::Keller,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Kfold,
    Loocv,
    Holdout,
}

/// Classifier hyperparameters shared by `eval` and `compare`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Fuzzifier exponent (> 1).
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// Training membership initialization.
    #[arg(long, value_enum, default_value = "keller")]
    pub init: InitArg,
    /// Neighbourhood size for Keller initialization [default: k].
    #[arg(long)]
    pub k_init: Option<usize>,
    /// Skip min-max feature scaling.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Feature CSV to evaluate on.
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated feature names to use [default: all].
    #[arg(long, value_delimiter = ',')]
    pub mask: Option<Vec<String>>,
    /// Label of the positive class.
    #[arg(long, default_value = mammotex_core::MALIGNANT)]
    pub positive: String,
    #[arg(long, value_enum, default_value = "kfold")]
    pub protocol: ProtocolArg,
    /// Number of folds for k-fold.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Fraction of each class held out for holdout.
    #[arg(long, default_value_t = 0.3)]
    pub fraction: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

impl DataArgs {
    fn protocol(&self) -> Protocol {
        match self.protocol {
            ProtocolArg::Kfold => Protocol::KFold {
                k: self.folds,
                seed: self.seed,
            },
            ProtocolArg::Loocv => Protocol::Loocv,
            ProtocolArg::Holdout => Protocol::Holdout {
                fraction: self.fraction,
                seed: self.seed,
            },
        }
    }

    fn load(&self) -> Result<Dataset> {
        let file = std::fs::File::open(&self.input).map_err(|source| CliError::Read {
            path: self.input.clone(),
            source,
        })?;
        let data = read_dataset(std::io::BufReader::new(file))?;
        match &self.mask {
            None => Ok(data),
            Some(mask) => {
                let unknown: Vec<&str> = mask
                    .iter()
                    .filter(|n| !data.feature_names().contains(n))
                    .map(String::as_str)
                    .collect();
                if !unknown.is_empty() {
                    return Err(CliError::Argument(format!(
                        "unknown feature names: {}",
                        unknown.join(",")
                    )));
                }
                Ok(data.select_features(mask)?)
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Classifier: knn, fknn, knne or fknne.
    #[arg(long, default_value = "fknne")]
    pub method: ClassifierKind,
    /// Neighbours per decision.
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Report JSON [default: report.json in the output directory].
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// ROC CSV [default: roc.csv in the output directory].
    #[arg(long)]
    pub roc: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated classifiers.
    #[arg(long, value_delimiter = ',', default_value = "knn,fknn,knne,fknne")]
    pub methods: Vec<ClassifierKind>,
    /// K values: a list such as `3,5` or a range `1..9` with optional
    /// step `1..9:2`. One row per (method, k).
    #[arg(long, value_parser = parse_k_list)]
    pub k: KList,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comparison JSON [default: compare.json in the output directory].
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KList(pub Vec<usize>);

/// Parses `3`, `1,3,5`, `1..9` or `1..9:2` (ranges are inclusive).
pub fn parse_k_list(s: &str) -> std::result::Result<KList, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad k value {t:?}"))
        };
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (num(hi)?, num(step)?),
                None => (num(rest)?, 1),
            };
            let lo = num(lo)?;
            if step == 0 || lo > hi {
                return Err(format!("empty k range {item:?}"));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(num(item)?);
        }
    }
    if out.contains(&0) {
        return Err("k must be at least 1".into());
    }
    Ok(KList(out))
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output CSV [default: synthetic.csv in the output directory].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    pub samples: usize,
    /// Number of features (at most the 25 texture features).
    #[arg(long, default_value_t = 25)]
    pub dims: usize,
    #[arg(long, default_value_t = 10.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 0.5)]
    pub spread: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

fn default_path(explicit: &Option<PathBuf>, file: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map_or_else(|| PathBuf::from("."), PathBuf::from)
            .join(file)
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.into(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.into(),
        source,
    })
}

fn model_config(kind: ClassifierKind, k: usize, m: &ModelArgs) -> Result<ClassifierConfig> {
    let cfg = ClassifierConfig {
        k_init: m.k_init,
        ..ClassifierConfig::new(kind, k)
            .with_m(m.m)
            .with_init(m.init.into())
            .with_normalize(!m.no_normalize)
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn cmd_extract(args: &ExtractArgs) -> Result<()> {
    let cfg = ExtractionConfig {
        levels: args.levels,
        distance: args.distance,
        symmetric: args.symmetric,
        ..Default::default()
    };
    cfg.validate()?;
    if args.side == Some(0) {
        return Err(CliError::Argument("side must be positive".into()));
    }
    let out = default_path(&args.out, "features.csv");
    let index = std::fs::read_to_string(&args.index).map_err(|source| CliError::Read {
        path: args.index.clone(),
        source,
    })?;
    let rois = parse_mias_index(&index, args.image_height)?;

    let mut by_image: BTreeMap<&str, Vec<&RoiSpec>> = BTreeMap::new();
    for roi in &rois {
        by_image.entry(roi.image.as_str()).or_default().push(roi);
    }
    let results: Vec<(String, std::result::Result<FeatureRow, String>)> = by_image
        .into_par_iter()
        .flat_map_iter(|(image, group)| {
            let path = args.images.join(format!("{image}.{}", args.extension));
            let img = std::fs::read(&path)
                .map_err(|e| format!("{}: {e}", path.display()))
                .and_then(|bytes| read_pgm(&bytes).map_err(|e| format!("{}: {e}", path.display())));
            let cfg = &cfg;
            group.into_iter().map(move |roi| {
                let row = img.as_ref().map_err(Clone::clone).and_then(|img| {
                    let crop = crop_roi(img, roi, args.side).map_err(|e| e.to_string())?;
                    let f = extract_all(&crop, cfg).map_err(|e| e.to_string())?;
                    Ok(FeatureRow {
                        id: roi.id.clone(),
                        label: roi.label.as_str().into(),
                        values: f.into_parts().1,
                    })
                });
                (roi.id.clone(), row)
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (id, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(msg) => failures.push((id, msg)),
        }
    }
    failures.sort();
    let mut csv = Vec::new();
    write_features(&mut csv, &feature_names(), &rows)?;
    if failures.is_empty() {
        write_file(&out, &csv)?;
        eprintln!("extracted {} ROIs to {}", rows.len(), out.display());
        return Ok(());
    }
    let mut partial = out.into_os_string();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    write_file(&partial, &csv)?;
    eprintln!("{} ROI(s) failed:", failures.len());
    for (id, msg) in &failures {
        eprintln!("  {id}: {msg}");
    }
    Err(CliError::Partial {
        failed: failures.len(),
        total: rois.len(),
        partial,
    })
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let cfg = model_config(args.method, args.k, &args.model)?;
    let protocol = args.data.protocol();
    let data = args.data.load()?;
    let report = evaluate(&data, &cfg, &protocol, &args.data.positive)?;
    let json = ReportJson::new(&report, data.feature_names(), data.classes());
    write_file(
        &default_path(&args.report, "report.json"),
        to_json(&json)?.as_bytes(),
    )?;
    write_file(
        &default_path(&args.roc, "roc.csv"),
        roc_csv(&report.roc)?.as_bytes(),
    )?;
    print!(
        "{}",
        eval_table(&format!("{} k={}", cfg.kind, cfg.k), &report)
    );
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs) -> Result<()> {
    if args.methods.is_empty() {
        return Err(CliError::Argument("at least one method is required".into()));
    }
    let configs = args
        .methods
        .iter()
        .flat_map(|&kind| args.k.0.iter().map(move |&k| (kind, k)))
        .map(|(kind, k)| model_config(kind, k, &args.model))
        .collect::<Result<Vec<_>>>()?;
    let protocol = args.data.protocol();
    let data = args.data.load()?;
    let (table, _) = compare_classifiers(&data, &configs, &protocol, &args.data.positive)?;
    let json = CompareJson {
        protocol,
        seed: protocol.seed(),
        positive: args.data.positive.clone(),
        features: data.feature_names().to_vec(),
        table,
    };
    write_file(
        &default_path(&args.json, "compare.json"),
        to_json(&json)?.as_bytes(),
    )?;
    print!("{}", json.table);
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let data = two_clusters(&SynthConfig {
        samples: args.samples,
        dims: args.dims,
        separation: args.separation,
        spread: args.spread,
        seed: args.seed,
    })?;
    let mut csv = Vec::new();
    write_features(&mut csv, data.feature_names(), &dataset_to_rows(&data))?;
    let out = default_path(&args.out, "synthetic.csv");
    write_file(&out, &csv)?;
    eprintln!("wrote {} samples to {}", data.len(), out.display());
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Extract(a) => cmd_extract(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

/// Parses the process arguments, runs the command and maps errors to exit
/// codes. Usage errors exit with 2.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
