use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use s3vmr::eval::{
    chi2_rank, control_groups, cross_validate, generate_synthetic, rank_unlabeled, ranking_csv, sweep, Dataset,
    FeatureSpace, MetricsReport, SweepParam,
};
use s3vmr::graph::GraphConfig;
use s3vmr::io::{read_corpus, read_features, read_labels, write_corpus, write_features, write_labels, write_matrix};
use s3vmr::model::{read_model, train, write_model, Label};
use s3vmr::text::{build_similarity_matrix, extract_f1, fit_ngram_model, AdRecord, FeatureVectorF1};
use s3vmr::{Hyperparameters, KernelSpec};

#[derive(Parser)]
#[command(name = "s3vmr", version, about = "Semi-supervised ad classifier with indicator and graph regularizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract indicator features, the similarity matrix and the n-gram model.
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Keep only ads with at least one indicator.
    Filter {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train on the labeled ads plus the remaining pool.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        hyper: HyperArgs,
        #[arg(long)]
        model_out: PathBuf,
    },
    /// Transductive k-fold cross-validation.
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        hyper: HyperArgs,
        #[command(flatten)]
        cv: CvArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate over a list of values of one hyperparameter.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        hyper: HyperArgs,
        #[command(flatten)]
        cv: CvArgs,
        #[arg(long, value_enum)]
        param: Param,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank the unlabeled pool by decision value.
    Rank {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also sample this many ids from each predicted class.
        #[arg(long, default_value_t = 0)]
        control_sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chi-squared significance of each indicator.
    Chi2 {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = s3vmr::eval::DEFAULT_CHI2_THRESHOLD)]
        threshold: f64,
    },
    /// Generate a synthetic corpus with planted classes.
    Synth {
        #[arg(long)]
        labeled: usize,
        #[arg(long)]
        unlabeled: usize,
        #[arg(long)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Precomputed indicator CSV; extracted from the corpus when absent.
    #[arg(long)]
    features: Option<PathBuf>,
    /// Kernel input space.
    #[arg(long, default_value = "f1")]
    space: FeatureSpace,
}

#[derive(Args)]
struct HyperArgs {
    #[arg(long, default_value_t = 0.6)]
    cl: f64,
    #[arg(long, default_value_t = 0.2)]
    cr: f64,
    #[arg(long, default_value_t = 0.2)]
    cs: f64,
    #[arg(long, value_enum, default_value_t = KernelKind::Linear)]
    kernel: KernelKind,
    /// RBF width, required with --kernel rbf.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    heat_t: f64,
    #[arg(long, default_value_t = 0.1)]
    edge_threshold: f64,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Linear,
    Rbf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Cl,
    Cr,
    Cs,
}

impl HyperArgs {
    fn build(&self) -> Result<Hyperparameters> {
        let kernel = match (self.kernel, self.gamma) {
            (KernelKind::Linear, _) => KernelSpec::Linear,
            (KernelKind::Rbf, Some(g)) => KernelSpec::rbf(g)?,
            (KernelKind::Rbf, None) => bail!("--kernel rbf needs --gamma"),
        };
        let h = Hyperparameters {
            c_l: self.cl,
            c_r: self.cr,
            c_s: self.cs,
            kernel,
            graph: GraphConfig {
                heat_t: self.heat_t,
                edge_threshold: self.edge_threshold,
            },
        };
        h.validate()?;
        Ok(h)
    }
}

impl DataArgs {
    fn inputs(&self) -> Vec<&Path> {
        let mut v = vec![self.corpus.as_path(), self.labels.as_path()];
        v.extend(self.features.as_deref());
        v
    }

    fn load(&self) -> Result<Dataset> {
        let corpus = load_corpus(&self.corpus)?;
        let labels = load_labels(&self.labels)?;
        let dataset = match &self.features {
            Some(path) => Dataset::from_corpus_with_f1(&corpus, &labels, &load_features(path)?, self.space)?,
            None => Dataset::from_corpus(&corpus, &labels, self.space)?,
        };
        Ok(dataset)
    }
}

/// Files produced by one command. Nothing touches the disk until every
/// output has been computed; a failed write removes whatever was written.
#[derive(Default)]
struct Outputs(Vec<(PathBuf, Vec<u8>)>);

impl Outputs {
    fn add(&mut self, path: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) {
        self.0.push((path.into(), bytes.into()));
    }

    fn commit(self) -> Result<()> {
        let mut written: Vec<&Path> = Vec::new();
        for (path, bytes) in &self.0 {
            let result = write_file(path, bytes);
            if let Err(e) = result {
                for p in written {
                    let _ = fs::remove_file(p);
                }
                let _ = fs::remove_file(path);
                return Err(e);
            }
            written.push(path);
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn require_inputs(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.is_file() {
            bail!("input file not found: {}", p.display());
        }
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn load_corpus(path: &Path) -> Result<Vec<AdRecord>> {
    let ads = read_corpus(open(path)?).with_context(|| format!("reading corpus {}", path.display()))?;
    if ads.is_empty() {
        bail!("corpus {} is empty", path.display());
    }
    Ok(ads)
}

fn load_labels(path: &Path) -> Result<Vec<(String, Label)>> {
    read_labels(open(path)?).with_context(|| format!("reading labels {}", path.display()))
}

fn load_features(path: &Path) -> Result<BTreeMap<String, FeatureVectorF1>> {
    read_features(open(path)?).with_context(|| format!("reading features {}", path.display()))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn id_list(ids: &[String]) -> String {
    let mut s = String::from("id\n");
    for id in ids {
        s.push_str(id);
        s.push('\n');
    }
    s
}

fn cmd_extract(corpus: &Path, out_dir: &Path) -> Result<()> {
    require_inputs(&[corpus])?;
    let ads = load_corpus(corpus)?;
    let ngrams = fit_ngram_model(&ads)?;
    let ids: Vec<String> = ads.iter().map(|a| a.id.clone()).collect();
    let f1: Vec<FeatureVectorF1> = ads.iter().map(|a| extract_f1(a, &ngrams)).collect();
    let sim = build_similarity_matrix(&ads);

    let mut features = Vec::new();
    write_features(&ids, &f1, &mut features)?;
    let mut similarity = Vec::new();
    write_matrix(&ids, |i, j| sim.get(i, j), &mut similarity)?;
    let mut model = serde_json::to_vec_pretty(&ngrams)?;
    model.push(b'\n');

    let mut out = Outputs::default();
    out.add(out_dir.join("features.csv"), features);
    out.add(out_dir.join("similarity.csv"), similarity);
    out.add(out_dir.join("ngram_model.json"), model);
    out.commit()?;
    let eligible = f1.iter().filter(|v| !v.is_zero()).count();
    println!("ads: {}, eligible: {eligible}", ads.len());
    Ok(())
}

fn cmd_filter(corpus: &Path, features: &Path, out_path: &Path) -> Result<()> {
    require_inputs(&[corpus, features])?;
    let ads = load_corpus(corpus)?;
    let f1 = load_features(features)?;
    let mut kept = Vec::new();
    for ad in &ads {
        match f1.get(&ad.id) {
            Some(v) if !v.is_zero() => kept.push(ad.clone()),
            Some(_) => {}
            None => bail!("id {:?} has no row in {}", ad.id, features.display()),
        }
    }
    let mut bytes = Vec::new();
    write_corpus(&kept, &mut bytes)?;
    let mut out = Outputs::default();
    out.add(out_path, bytes);
    out.commit()?;
    println!("kept: {}, dropped: {}", kept.len(), ads.len() - kept.len());
    Ok(())
}

fn cmd_train(data: &DataArgs, hyper: &HyperArgs, model_out: &Path) -> Result<()> {
    require_inputs(&data.inputs())?;
    let hyper = hyper.build()?;
    let ds = data.load()?;
    let model = train(&ds.samples(), &ds.labels, &hyper, &ds.f1, &ds.f2)?.with_ids(ds.ids.clone())?;
    let mut bytes = Vec::new();
    write_model(&model, &mut bytes)?;
    let mut out = Outputs::default();
    out.add(model_out, bytes);
    out.commit()?;
    println!(
        "trained on {} labeled + {} unlabeled; dual objective {:.6}, kkt violation {:.3e}",
        model.n_labeled(),
        model.n_unlabeled(),
        model.diagnostics.dual_objective,
        model.diagnostics.kkt_violation
    );
    Ok(())
}

fn summary(r: &MetricsReport) -> String {
    let r = r.rounded();
    format!(
        "auc {:.6} accuracy {:.6} f1_pos {:.6} f1_neg {:.6}",
        r.auc, r.accuracy, r.f1_pos, r.f1_neg
    )
}

fn cmd_eval(data: &DataArgs, hyper: &HyperArgs, cv: &CvArgs, out_path: &Path) -> Result<()> {
    require_inputs(&data.inputs())?;
    let hyper = hyper.build()?;
    let ds = data.load()?;
    let report = cross_validate(&ds, &hyper, cv.folds, cv.seed)?;
    let mut out = Outputs::default();
    out.add(out_path, report.to_json() + "\n");
    out.commit()?;
    println!("{}", summary(&report));
    Ok(())
}

fn cmd_sweep(data: &DataArgs, hyper: &HyperArgs, cv: &CvArgs, param: Param, values: &[f64], out_path: &Path) -> Result<()> {
    require_inputs(&data.inputs())?;
    let hyper = hyper.build()?;
    let param = match param {
        Param::Cl => SweepParam::Cl,
        Param::Cr => SweepParam::Cr,
        Param::Cs => SweepParam::Cs,
    };
    if param == SweepParam::Cl && values.iter().any(|&v| !(v > 0.0)) {
        bail!("C_l must be positive");
    }
    let ds = data.load()?;
    let rows = sweep(&ds, &hyper, param, values, cv.folds, cv.seed)?;
    let mut csv = String::from("value");
    for k in MetricsReport::KEYS {
        csv.push(',');
        csv.push_str(k);
    }
    csv.push('\n');
    for (v, r) in &rows {
        csv.push_str(&v.to_string());
        for x in r.rounded().values() {
            csv.push_str(&format!(",{x:.6}"));
        }
        csv.push('\n');
    }
    let mut out = Outputs::default();
    out.add(out_path, csv);
    out.commit()?;
    for (v, r) in &rows {
        println!("{v}: {}", summary(r));
    }
    Ok(())
}

fn cmd_rank(model_path: &Path, data: &DataArgs, out_path: &Path, control: usize, seed: u64) -> Result<()> {
    let mut inputs = data.inputs();
    inputs.push(model_path);
    require_inputs(&inputs)?;
    let model = read_model(open(model_path)?).with_context(|| format!("reading model {}", model_path.display()))?;
    let ds = data.load()?;
    if model.ids != ds.ids {
        bail!("model was not trained on this corpus and label set");
    }
    let items = rank_unlabeled(&model, &ds)?;
    let mut out = Outputs::default();
    out.add(out_path, ranking_csv(&items));
    if control > 0 {
        let (pos, neg) = control_groups(&items, control, seed)?;
        out.add(sibling(out_path, "control_pos.csv"), id_list(&pos));
        out.add(sibling(out_path, "control_neg.csv"), id_list(&neg));
    }
    out.commit()?;
    let n_pos = items.iter().filter(|i| i.label.is_pos()).count();
    println!("ranked: {}, predicted positive: {n_pos}, predicted negative: {}", items.len(), items.len() - n_pos);
    Ok(())
}

fn cmd_chi2(features: &Path, labels: &Path, out_path: &Path, threshold: f64) -> Result<()> {
    require_inputs(&[features, labels])?;
    let f1 = load_features(features)?;
    let labels = load_labels(labels)?;
    let mut rows = Vec::with_capacity(labels.len());
    for (id, _) in &labels {
        match f1.get(id) {
            Some(v) => rows.push(*v),
            None => bail!("labeled id {id:?} has no row in the feature file"),
        }
    }
    let truths: Vec<Label> = labels.iter().map(|(_, l)| *l).collect();
    let report = chi2_rank(&rows, &truths, threshold)?;
    let mut out = Outputs::default();
    out.add(out_path, report.to_csv());
    out.commit()?;
    println!("selected: {}", report.selected.iter().filter(|s| **s).count());
    Ok(())
}

fn cmd_synth(labeled: usize, unlabeled: usize, noise: f64, seed: u64, out_dir: &Path) -> Result<()> {
    let s = generate_synthetic(labeled, unlabeled, noise, seed)?;
    let mut corpus = Vec::new();
    write_corpus(&s.corpus, &mut corpus)?;
    let mut labels = Vec::new();
    write_labels(&s.labeled, ["id", "label"], &mut labels)?;
    let mut truth = Vec::new();
    write_labels(&s.truth, ["id", "truth"], &mut truth)?;
    let mut out = Outputs::default();
    out.add(out_dir.join("corpus.jsonl"), corpus);
    out.add(out_dir.join("labels.csv"), labels);
    out.add(out_dir.join("truth.csv"), truth);
    out.commit()?;
    println!("ads: {}, labeled: {}", s.corpus.len(), s.labeled.len());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { corpus, out_dir } => cmd_extract(&corpus, &out_dir),
        Command::Filter { corpus, features, out } => cmd_filter(&corpus, &features, &out),
        Command::Train { data, hyper, model_out } => cmd_train(&data, &hyper, &model_out),
        Command::Eval { data, hyper, cv, out } => cmd_eval(&data, &hyper, &cv, &out),
        Command::Sweep {
            data,
            hyper,
            cv,
            param,
            values,
            out,
        } => cmd_sweep(&data, &hyper, &cv, param, &values, &out),
        Command::Rank {
            model,
            data,
            out,
            control_sample,
            seed,
        } => cmd_rank(&model, &data, &out, control_sample, seed),
        Command::Chi2 {
            features,
            labels,
            out,
            threshold,
        } => cmd_chi2(&features, &labels, &out, threshold),
        Command::Synth {
            labeled,
            unlabeled,
            noise,
            seed,
            out_dir,
        } => cmd_synth(labeled, unlabeled, noise, seed, &out_dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
