use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trivia_miner::corpus::{load_annotations, load_knowledge_base};
use trivia_miner::eval::{compare_runs, kappa, ConfusionTable};
use trivia_miner::features::{parse_letor, write_letor, FeatureSpace};
use trivia_miner::grading::{parse_graded, write_graded};
use trivia_miner::pipeline::{
    self, evaluate_rows, featurize_training, gold_from_sentences, parse_ranked, read_file,
    run_selection_phase, train_model, write_file, AtStage, RunConfig, Stage, StageError,
    StageResult,
};
use trivia_miner::ranker::RankingModel;

/// Mine interesting trivia sentences for entities.
#[derive(Parser)]
#[command(name = "trivia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every stage. Flags override the config file.
#[derive(Args, Clone, Default)]
struct Common {
    /// `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings, applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, global = true)]
    out_dir: Option<String>,
    #[arg(long, global = true)]
    kb: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
}

#[derive(Args, Clone, Default)]
struct GradingFlags {
    #[arg(long)]
    trivia: Option<String>,
    /// five_grade or two_grade.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    base_min_votes: Option<String>,
    #[arg(long)]
    high_lr_threshold: Option<String>,
    #[arg(long)]
    high_min_votes: Option<String>,
    /// Comma-separated percentile cut-offs, highest first.
    #[arg(long)]
    cutoffs: Option<String>,
    #[arg(long)]
    max_chars: Option<String>,
    #[arg(long)]
    min_trivia_per_entity: Option<String>,
}

#[derive(Args, Clone, Default)]
struct SelectionFlags {
    #[arg(long)]
    pages: Option<String>,
    /// Page-sentence annotations (optionally with gold labels).
    #[arg(long)]
    annotations: Option<String>,
    /// movie or celebrity.
    #[arg(long)]
    domain: Option<String>,
    /// Comma-separated phrases that refer to the target entity.
    #[arg(long)]
    referents: Option<String>,
    /// Ignore ingested coreference mentions.
    #[arg(long)]
    no_mentions: bool,
}

#[derive(Args, Clone, Default)]
struct TrainFlags {
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    max_iter: Option<String>,
    /// Hyperparameter grid "C1,C2,...xE1,E2,...".
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    folds: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Grade voted trivia into graded.jsonl.
    Grade {
        #[command(flatten)]
        grading: GradingFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Extract, split and filter page sentences into candidates.jsonl.
    Select {
        #[command(flatten)]
        selection: SelectionFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Fit the feature space on graded trivia and write training vectors.
    Featurize {
        /// graded.jsonl from `grade`.
        #[arg(long)]
        graded: PathBuf,
        #[arg(long)]
        train_annotations: Option<String>,
        /// Feature blocks, e.g. U+L+E.
        #[arg(long)]
        blocks: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Train the ranking model on LETOR vectors.
    Train {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        model: Option<String>,
        #[command(flatten)]
        train: TrainFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Rank candidates with a trained model into ranked.tsv.
    Rank {
        #[command(flatten)]
        selection: SelectionFlags,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Rank candidates with a baseline instead of the model.
    Baseline {
        /// random, suppos-best, suppos-worst, suppos-random or classifier.
        #[arg(long)]
        kind: String,
        /// Seeds for randomized baselines.
        #[arg(long)]
        runs: Option<String>,
        #[command(flatten)]
        selection: SelectionFlags,
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Score ranked runs against gold labels.
    Eval {
        /// Ranked TSV; several files are averaged (seeded baselines).
        #[arg(long = "run", required = true)]
        runs: Vec<PathBuf>,
        /// Ranked TSVs of a second system for a paired t-test.
        #[arg(long)]
        against: Vec<PathBuf>,
        /// Annotation file carrying gold labels.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohen's kappa for a 2x2 agreement table "a,b,c,d".
    Kappa { table: String },
    /// Train, select, rank, optionally run a baseline, and evaluate.
    RunAll {
        #[command(flatten)]
        grading: GradingFlags,
        #[command(flatten)]
        selection: SelectionFlags,
        #[command(flatten)]
        train: TrainFlags,
        #[arg(long)]
        train_annotations: Option<String>,
        #[arg(long)]
        blocks: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        baseline: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

type Settings = Vec<(&'static str, Option<String>)>;

impl GradingFlags {
    fn settings(&self) -> Settings {
        vec![
            ("trivia", self.trivia.clone()),
            ("mode", self.mode.clone()),
            ("base_min_votes", self.base_min_votes.clone()),
            ("high_lr_threshold", self.high_lr_threshold.clone()),
            ("high_min_votes", self.high_min_votes.clone()),
            ("cutoffs", self.cutoffs.clone()),
            ("max_chars", self.max_chars.clone()),
            ("min_trivia_per_entity", self.min_trivia_per_entity.clone()),
        ]
    }
}

impl SelectionFlags {
    fn settings(&self) -> Settings {
        vec![
            ("pages", self.pages.clone()),
            ("test_annotations", self.annotations.clone()),
            ("domain", self.domain.clone()),
            ("referents", self.referents.clone()),
            ("use_mentions", self.no_mentions.then(|| "false".to_string())),
        ]
    }
}

impl TrainFlags {
    fn settings(&self) -> Settings {
        vec![
            ("c", self.c.clone()),
            ("epsilon", self.epsilon.clone()),
            ("max_iter", self.max_iter.clone()),
            ("grid", self.grid.clone()),
            ("folds", self.folds.clone()),
        ]
    }
}

fn config(common: &Common, flags: Settings) -> StageResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path).at(Stage::Ingest)?,
        None => RunConfig::default(),
    };
    for pair in &common.set {
        let (key, value) = pair.split_once('=').unwrap_or((pair, ""));
        cfg.apply(key, value, None).at(Stage::Ingest)?;
    }
    let shared = [
        ("out_dir", common.out_dir.clone()),
        ("kb", common.kb.clone()),
        ("seed", common.seed.clone()),
    ];
    for (key, value) in shared.into_iter().chain(flags) {
        if let Some(v) = value {
            cfg.apply(key, &v, None).at(Stage::Ingest)?;
        }
    }
    Ok(cfg)
}

fn report_ranked(runs: &[pipeline::RankedRun]) {
    for run in runs {
        println!("{}: {} rows -> {}", run.name, run.rows.len(), run.path.display());
    }
}

fn load_space_model(space: &Path, model: &Path) -> StageResult<(FeatureSpace, RankingModel)> {
    let space = FeatureSpace::from_json(&read_file(space).at(Stage::Ingest)?).at(Stage::Ingest)?;
    let model = RankingModel::from_json(&read_file(model).at(Stage::Ingest)?).at(Stage::Ingest)?;
    Ok((space, model))
}

fn run(command: Command) -> StageResult<()> {
    match command {
        Command::Grade { grading, common } => {
            let cfg = config(&common, grading.settings())?;
            let graded = pipeline::grade_trivia(&cfg)?;
            let path = cfg.paths.out_dir.join("graded.jsonl");
            write_file(&path, &write_graded(&graded)).at(Stage::Grading)?;
            println!("graded {} trivia -> {}", graded.len(), path.display());
        }
        Command::Select { selection, common } => {
            let cfg = config(&common, selection.settings())?;
            let selected = run_selection_phase(&cfg)?;
            let kept: usize = selected.iter().map(|e| e.candidates.len()).sum();
            let seen: usize = selected.iter().map(|e| e.sentences.len()).sum();
            println!(
                "kept {kept} of {seen} sentences -> {}",
                cfg.paths.out_dir.join("candidates.jsonl").display()
            );
        }
        Command::Featurize {
            graded,
            train_annotations,
            blocks,
            common,
        } => {
            let cfg = config(&common, vec![("train_annotations", train_annotations), ("blocks", blocks)])?;
            let rows = parse_graded(&read_file(&graded).at(Stage::Ingest)?).at(Stage::Ingest)?;
            let kb_path = cfg.paths.kb.clone().ok_or_else(|| StageError {
                stage: Stage::Ingest,
                source: trivia_miner::Error::InvalidConfig("no `kb` path configured".into()),
            })?;
            let kb = load_knowledge_base(kb_path).at(Stage::Ingest)?;
            let annotations = match &cfg.paths.train_annotations {
                Some(p) => load_annotations(p).at(Stage::Ingest)?,
                None => Vec::new(),
            };
            let (space, vectors) = featurize_training(&rows, &kb, &annotations, cfg.blocks).at(Stage::Featurize)?;
            let out = &cfg.paths.out_dir;
            write_file(&out.join("train_vectors.letor"), &write_letor(&vectors)).at(Stage::Featurize)?;
            write_file(&cfg.space_path(), &space.to_json().at(Stage::Featurize)?).at(Stage::Featurize)?;
            println!("{} vectors over {} columns -> {}", vectors.len(), space.len(), out.display());
        }
        Command::Train {
            vectors,
            space,
            model,
            train,
            common,
        } => {
            let mut settings = train.settings();
            settings.push(("model", model));
            let cfg = config(&common, settings)?;
            let space = FeatureSpace::from_json(&read_file(&space).at(Stage::Ingest)?).at(Stage::Ingest)?;
            let vectors = parse_letor(&read_file(&vectors).at(Stage::Ingest)?).at(Stage::Ingest)?;
            let (model, _) = train_model(&vectors, &space, cfg.train, cfg.grid.as_ref()).at(Stage::Train)?;
            write_file(&cfg.model_path(), &model.to_json()).at(Stage::Train)?;
            let r = &model.train_report;
            println!(
                "pairs {} epochs {} objective {:.6} converged {} -> {}",
                r.pair_count,
                r.iterations,
                r.final_objective,
                r.converged,
                cfg.model_path().display()
            );
        }
        Command::Rank {
            selection,
            model,
            k,
            common,
        } => {
            let mut settings = selection.settings();
            settings.extend([("model", model), ("k", k)]);
            let cfg = config(&common, settings)?;
            let (space, model) = load_space_model(&cfg.space_path(), &cfg.model_path())?;
            let selected = run_selection_phase(&cfg)?;
            let rows = pipeline::rank_candidates(&selected, &space, &model, cfg.k).at(Stage::Rank)?;
            let path = cfg.paths.out_dir.join("ranked.tsv");
            write_file(&path, &pipeline::write_ranked(&rows)).at(Stage::Rank)?;
            println!("{} rows -> {}", rows.len(), path.display());
        }
        Command::Baseline {
            kind,
            runs,
            selection,
            k,
            common,
        } => {
            let mut settings = selection.settings();
            settings.extend([("baseline", Some(kind)), ("baseline_runs", runs), ("k", k)]);
            let cfg = config(&common, settings)?;
            let selected = run_selection_phase(&cfg)?;
            report_ranked(&pipeline::run_retrieval_phase(&cfg, &selected)?);
        }
        Command::Eval {
            runs,
            against,
            gold,
            k,
            out,
        } => {
            let gold = gold_from_sentences(&load_annotations(&gold).at(Stage::Ingest)?);
            let load = |paths: &[PathBuf]| -> StageResult<Vec<Vec<pipeline::RankedRow>>> {
                paths
                    .iter()
                    .map(|p| parse_ranked(&read_file(p)?))
                    .collect::<trivia_miner::Result<_>>()
                    .at(Stage::Ingest)
            };
            let rows = load(&runs)?;
            let refs: Vec<&[pipeline::RankedRow]> = rows.iter().map(Vec::as_slice).collect();
            let mut report = evaluate_rows(&refs, &gold, k).at(Stage::Eval)?;
            if !against.is_empty() {
                let other_rows = load(&against)?;
                let refs: Vec<&[pipeline::RankedRow]> = other_rows.iter().map(Vec::as_slice).collect();
                let other = evaluate_rows(&refs, &gold, k).at(Stage::Eval)?;
                let name = against[0].display().to_string();
                report.significance = Some(compare_runs(&report, &other, &name).at(Stage::Eval)?);
            }
            match out {
                Some(path) => write_file(&path, &report.to_json()).at(Stage::Eval)?,
                None => print!("{}", report.to_json()),
            }
        }
        Command::Kappa { table } => {
            let table: ConfusionTable = table.parse().at(Stage::Eval)?;
            let k = kappa(&table).at(Stage::Eval)?;
            println!(
                "p_o {:.6} p_e {:.6} kappa {:.6} ({})",
                k.p_o, k.p_e, k.kappa, k.band
            );
        }
        Command::RunAll {
            grading,
            selection,
            train,
            train_annotations,
            blocks,
            k,
            baseline,
            common,
        } => {
            let mut settings = grading.settings();
            settings.extend(selection.settings());
            settings.extend(train.settings());
            settings.extend([
                ("train_annotations", train_annotations),
                ("blocks", blocks),
                ("k", k),
                ("baseline", baseline),
            ]);
            let cfg = config(&common, settings)?;
            let out = pipeline::run_all(&cfg)?;
            let r = &out.train.model.train_report;
            println!(
                "pairs {} epochs {} objective {:.6} converged {}",
                r.pair_count, r.iterations, r.final_objective, r.converged
            );
            report_ranked(&out.runs);
            for (name, report) in &out.reports {
                println!(
                    "{name}: P@{k} {:.4} NDCG@{k} {:.4} over {} groups",
                    report.means.p_at_k,
                    report.means.ndcg_at_k,
                    report.per_group.len(),
                    k = report.k
                );
                if let Some(s) = &report.significance {
                    println!(
                        "  vs {}: t {:.4} p {:.4} significant {}",
                        s.against, s.t_stat, s.p_value, s.significant_at_0_05
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("TRIVIA_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
