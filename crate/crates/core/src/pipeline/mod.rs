//! Stage wiring for the train and retrieval phases. Every stage writes a
//! file the next stage can read back, so the CLI can run them one at a time
//! or all together.

mod config;
mod ranked;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use crate::corpus::{
    fallback_annotate, load_annotations, load_knowledge_base, load_pages, load_trivia, match_key,
    write_annotations, AnnotatedSentence, EntityRecord, PageDocument,
};
use crate::error::{Error, Result};
use crate::eval::{average_reports, compare_runs, evaluate_run, EvalReport, Gold};
use crate::features::{
    featurize_item, fit_feature_space, write_letor, BlockSet, FeatureSpace, FeatureVector, Lexicons,
};
use crate::grading::{grade_corpus, write_graded, GradedRow, GradedTrivia, GradingConfig};
use crate::ranker::{
    baseline_classifier, baseline_random, baseline_suppos, grid_search, rank, train_on_space,
    BaselineItem, GridReport, RankedList, RankingModel, SupPosMode, TrainParams,
};
use crate::selection::{extract_cct, select_candidates, split_sentences, SelectionConfig};

pub use config::{Baseline, Grid, Paths, RunConfig};
pub use ranked::{parse_ranked, rows_to_lists, write_ranked, RankedRow};

pub type KnowledgeBase = BTreeMap<String, EntityRecord>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Grading,
    Featurize,
    Train,
    Selection,
    Rank,
    Eval,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Ingest => 2,
            Stage::Grading => 3,
            Stage::Featurize => 4,
            Stage::Train => 5,
            Stage::Selection => 6,
            Stage::Rank => 7,
            Stage::Eval => 1,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Ingest => "ingest",
            Stage::Grading => "grading",
            Stage::Featurize => "featurize",
            Stage::Train => "train",
            Stage::Selection => "selection",
            Stage::Rank => "rank",
            Stage::Eval => "eval",
        })
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        self.stage.exit_code()
    }
}

pub trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|source| StageError { stage, source })
    }
}

pub type StageResult<T> = std::result::Result<T, StageError>;

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn require<'a>(path: &'a Option<PathBuf>, key: &str) -> StageResult<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::InvalidConfig(format!("no `{key}` path configured")))
        .at(Stage::Ingest)
}

fn load_optional_annotations(path: &Option<PathBuf>) -> StageResult<Vec<AnnotatedSentence>> {
    match path {
        Some(p) => load_annotations(p).at(Stage::Ingest),
        None => Ok(Vec::new()),
    }
}

/// The KB entry for `entity_id`, or a bare record when the KB has none.
pub fn entity_for(kb: &KnowledgeBase, entity_id: &str) -> EntityRecord {
    kb.get(entity_id).cloned().unwrap_or_else(|| {
        log::warn!("entity {entity_id} is not in the knowledge base");
        EntityRecord::bare(entity_id)
    })
}

/// Looks up supplied annotations by entity and whitespace-insensitive text,
/// falling back to the built-in annotator.
pub struct Annotator<'a> {
    by_text: HashMap<(String, String), &'a AnnotatedSentence>,
}

impl<'a> Annotator<'a> {
    pub fn new(sentences: &'a [AnnotatedSentence]) -> Self {
        let mut by_text = HashMap::new();
        for s in sentences {
            by_text
                .entry((s.entity_id.clone(), match_key(&s.raw)))
                .or_insert(s);
        }
        Annotator { by_text }
    }

    pub fn annotate(&self, entity: &EntityRecord, text: &str) -> Result<AnnotatedSentence> {
        match self.by_text.get(&(entity.entity_id.clone(), match_key(text))) {
            Some(s) => Ok((*s).clone()),
            None => fallback_annotate(text, entity),
        }
    }
}

// ---------------------------------------------------------------- train phase

pub fn grade_trivia(cfg: &RunConfig) -> StageResult<Vec<GradedTrivia>> {
    let trivia = load_trivia(require(&cfg.paths.trivia, "trivia")?).at(Stage::Ingest)?;
    grade_with(&trivia, &cfg.grading)
}

fn grade_with(trivia: &[crate::corpus::TriviaRecord], cfg: &GradingConfig) -> StageResult<Vec<GradedTrivia>> {
    let graded = grade_corpus(trivia, cfg).at(Stage::Grading)?;
    log::info!("graded {} of {} trivia", graded.len(), trivia.len());
    Ok(graded)
}

/// Annotates graded trivia, fits the feature space on them and featurizes
/// each one with its grade.
pub fn featurize_training(
    rows: &[GradedRow],
    kb: &KnowledgeBase,
    annotations: &[AnnotatedSentence],
    blocks: BlockSet,
) -> Result<(FeatureSpace, Vec<FeatureVector>)> {
    let annotator = Annotator::new(annotations);
    let mut items = Vec::with_capacity(rows.len());
    for r in rows {
        let entity = entity_for(kb, &r.entity_id);
        let mut sentence = annotator.annotate(&entity, &r.text)?;
        sentence.entity_id = r.entity_id.clone();
        items.push((sentence, entity, r.grade));
    }
    let lex = Lexicons::default();
    let pairs: Vec<(&AnnotatedSentence, &EntityRecord)> = items.iter().map(|(s, e, _)| (s, e)).collect();
    let space = fit_feature_space(&pairs, &lex, blocks)?;
    let vectors = items
        .iter()
        .map(|(s, e, g)| featurize_item(s, e, &space, &lex, Some(*g)))
        .collect::<Result<Vec<_>>>()?;
    log::info!("feature space {} has {} columns", space.blocks(), space.len());
    Ok((space, vectors))
}

/// Trains with fixed hyperparameters or, given a grid, with the best cell.
pub fn train_model(
    vectors: &[FeatureVector],
    space: &FeatureSpace,
    params: TrainParams,
    grid: Option<&Grid>,
) -> Result<(RankingModel, Option<GridReport>)> {
    let (params, report) = match grid {
        Some(g) => {
            let report = grid_search(vectors, space.len(), &g.cs, &g.epsilons, g.folds, params)?;
            log::info!(
                "grid picked C={} e={} (NDCG@10 {:.4})",
                report.best.c,
                report.best.epsilon,
                report.best.mean_ndcg
            );
            (
                TrainParams {
                    c: report.best.c,
                    epsilon: report.best.epsilon,
                    ..params
                },
                Some(report),
            )
        }
        None => (params, None),
    };
    let model = train_on_space(vectors, space, params)?;
    let r = &model.train_report;
    log::info!(
        "trained on {} pairs: {} epochs, objective {:.6}, converged {}",
        r.pair_count,
        r.iterations,
        r.final_objective,
        r.converged
    );
    Ok((model, report))
}

#[derive(Clone, Debug)]
pub struct TrainOutput {
    pub graded: Vec<GradedTrivia>,
    pub space: FeatureSpace,
    pub vectors: Vec<FeatureVector>,
    pub model: RankingModel,
    pub grid: Option<GridReport>,
}

/// grade → featurize (fit) → train, writing `graded.jsonl`,
/// `train_vectors.letor`, `feature_space.json` and the model file.
pub fn run_train_phase(cfg: &RunConfig) -> StageResult<TrainOutput> {
    let trivia = load_trivia(require(&cfg.paths.trivia, "trivia")?).at(Stage::Ingest)?;
    let kb = load_knowledge_base(require(&cfg.paths.kb, "kb")?).at(Stage::Ingest)?;
    let annotations = load_optional_annotations(&cfg.paths.train_annotations)?;
    let out = &cfg.paths.out_dir;

    let graded = grade_with(&trivia, &cfg.grading)?;
    write_file(&out.join("graded.jsonl"), &write_graded(&graded)).at(Stage::Grading)?;

    let rows: Vec<GradedRow> = graded.iter().map(GradedRow::from).collect();
    let (space, vectors) = featurize_training(&rows, &kb, &annotations, cfg.blocks).at(Stage::Featurize)?;
    write_file(&out.join("train_vectors.letor"), &write_letor(&vectors)).at(Stage::Featurize)?;
    write_file(&cfg.space_path(), &space.to_json().at(Stage::Featurize)?).at(Stage::Featurize)?;

    let (model, grid) = train_model(&vectors, &space, cfg.train, cfg.grid.as_ref()).at(Stage::Train)?;
    write_file(&cfg.model_path(), &model.to_json()).at(Stage::Train)?;
    if let Some(g) = &grid {
        let json = serde_json::to_string_pretty(g).expect("grid report serializes") + "\n";
        write_file(&out.join("grid.json"), &json).at(Stage::Train)?;
    }
    Ok(TrainOutput {
        graded,
        space,
        vectors,
        model,
        grid,
    })
}

// ------------------------------------------------------------ retrieval phase

/// Page sentences of one entity before and after candidate selection.
#[derive(Clone, Debug, PartialEq)]
pub struct EntityCandidates {
    pub entity: EntityRecord,
    pub sentences: Vec<AnnotatedSentence>,
    pub candidates: Vec<AnnotatedSentence>,
}

/// extract_cct → split → annotate → select_candidates for every page, in
/// page order.
pub fn select_pages(
    pages: &[PageDocument],
    kb: &KnowledgeBase,
    annotations: &[AnnotatedSentence],
    cfg: &SelectionConfig,
) -> Result<Vec<EntityCandidates>> {
    let annotator = Annotator::new(annotations);
    let mut out = Vec::with_capacity(pages.len());
    for page in pages {
        let entity = entity_for(kb, &page.entity_id);
        let mut sentences = Vec::new();
        for paragraph in extract_cct(page) {
            for text in split_sentences(&paragraph) {
                sentences.push(annotator.annotate(&entity, &text)?);
            }
        }
        let candidates = select_candidates(&sentences, &entity, cfg);
        if candidates.is_empty() {
            log::warn!("entity {}: selection kept no candidates", entity.entity_id);
        } else {
            log::info!(
                "entity {}: kept {} of {} sentences",
                entity.entity_id,
                candidates.len(),
                sentences.len()
            );
        }
        out.push(EntityCandidates {
            entity,
            sentences,
            candidates,
        });
    }
    Ok(out)
}

/// Loads pages, KB and page annotations and runs selection, writing
/// `candidates.jsonl`.
pub fn run_selection_phase(cfg: &RunConfig) -> StageResult<Vec<EntityCandidates>> {
    let pages = load_pages(require(&cfg.paths.pages, "pages")?).at(Stage::Ingest)?;
    let kb = load_knowledge_base(require(&cfg.paths.kb, "kb")?).at(Stage::Ingest)?;
    let annotations = load_optional_annotations(&cfg.paths.test_annotations)?;
    let selected = select_pages(&pages, &kb, &annotations, &cfg.selection).at(Stage::Selection)?;
    let all: Vec<AnnotatedSentence> = selected.iter().flat_map(|e| e.candidates.clone()).collect();
    write_file(&cfg.paths.out_dir.join("candidates.jsonl"), &write_annotations(&all)).at(Stage::Selection)?;
    Ok(selected)
}

fn list_to_rows(list: &RankedList, sentences: &[AnnotatedSentence], k: usize) -> Vec<RankedRow> {
    list.entries
        .iter()
        .take(k)
        .enumerate()
        .map(|(pos, e)| RankedRow {
            entity_id: list.group_id.clone(),
            rank: pos + 1,
            score: e.score,
            sentence_id: e.item_id.clone(),
            text: sentences[e.index].raw.clone(),
        })
        .collect()
}

fn featurize_candidates(e: &EntityCandidates, space: &FeatureSpace, lex: &Lexicons) -> Result<Vec<FeatureVector>> {
    e.candidates
        .iter()
        .map(|s| {
            let mut v = featurize_item(s, &e.entity, space, lex, None)?;
            v.group_id = e.entity.entity_id.clone();
            Ok(v)
        })
        .collect()
}

/// Top-k candidates per entity by model score.
pub fn rank_candidates(
    selected: &[EntityCandidates],
    space: &FeatureSpace,
    model: &RankingModel,
    k: usize,
) -> Result<Vec<RankedRow>> {
    model.check_space(&space.checksum())?;
    let lex = Lexicons::default();
    let mut rows = Vec::new();
    for e in selected {
        if e.candidates.is_empty() {
            continue;
        }
        let vectors = featurize_candidates(e, space, &lex)?;
        rows.extend(list_to_rows(&rank(model, &vectors)?, &e.candidates, k));
    }
    Ok(rows)
}

/// What the classifier baseline trains on.
pub struct ClassifierInputs<'a> {
    pub space: &'a FeatureSpace,
    pub train: &'a [FeatureVector],
    pub params: TrainParams,
}

fn superlatives(s: &AnnotatedSentence) -> usize {
    s.tokens.iter().filter(|t| t.pos == "JJS" || t.pos == "RBS").count()
}

/// Top-k per entity under a baseline. The random pick draws from all
/// paragraph sentences; the others work on the selected candidates. Entity
/// `i` uses seed `seed + i`.
pub fn baseline_rows(
    kind: Baseline,
    selected: &[EntityCandidates],
    k: usize,
    seed: u64,
    classifier: Option<ClassifierInputs<'_>>,
) -> Result<Vec<RankedRow>> {
    let mut rows = Vec::new();
    if kind == Baseline::Classifier {
        let inputs = classifier.ok_or_else(|| Error::InvalidConfig("classifier baseline needs training vectors".into()))?;
        let lex = Lexicons::default();
        for e in selected.iter().filter(|e| !e.candidates.is_empty()) {
            let test = featurize_candidates(e, inputs.space, &lex)?;
            let lists = baseline_classifier(inputs.train, &test, inputs.space.len(), inputs.params)?;
            for list in lists {
                rows.extend(list_to_rows(&list, &e.candidates, k));
            }
        }
        return Ok(rows);
    }
    for (i, e) in selected.iter().enumerate() {
        let entity_seed = seed.wrapping_add(i as u64);
        let id = &e.entity.entity_id;
        let (list, pool) = match kind {
            Baseline::Random => {
                let ids: Vec<String> = e.sentences.iter().map(|s| s.sentence_id.clone()).collect();
                (baseline_random(id, &ids, k, entity_seed), &e.sentences)
            }
            _ => {
                let mode = match kind {
                    Baseline::SupposBest => SupPosMode::Best,
                    Baseline::SupposWorst => SupPosMode::Worst,
                    _ => SupPosMode::Random,
                };
                let items: Vec<BaselineItem> = e
                    .candidates
                    .iter()
                    .map(|s| BaselineItem {
                        item_id: s.sentence_id.clone(),
                        superlatives: superlatives(s),
                        label: s.gold_label.map(|g| g.as_int()),
                    })
                    .collect();
                (baseline_suppos(id, &items, mode, entity_seed)?, &e.candidates)
            }
        };
        rows.extend(list_to_rows(&list, pool, k));
    }
    Ok(rows)
}

/// A ranked output file produced by the retrieval phase.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedRun {
    /// `wtm` for the trained model, else the baseline name.
    pub name: String,
    pub seed: Option<u64>,
    pub rows: Vec<RankedRow>,
    pub path: PathBuf,
}

fn load_artifacts(cfg: &RunConfig) -> StageResult<(FeatureSpace, RankingModel)> {
    let space = FeatureSpace::from_json(&read_file(&cfg.space_path()).at(Stage::Ingest)?).at(Stage::Ingest)?;
    let model = RankingModel::from_json(&read_file(&cfg.model_path()).at(Stage::Ingest)?).at(Stage::Ingest)?;
    Ok((space, model))
}

fn load_train_vectors(cfg: &RunConfig) -> StageResult<Vec<FeatureVector>> {
    let path = cfg.paths.out_dir.join("train_vectors.letor");
    crate::features::parse_letor(&read_file(&path).at(Stage::Ingest)?).at(Stage::Ingest)
}

/// Ranks with the trained model, or with `cfg.baseline` when set. Randomized
/// baselines run `baseline_runs` times with consecutive seeds.
pub fn run_retrieval_phase(cfg: &RunConfig, selected: &[EntityCandidates]) -> StageResult<Vec<RankedRun>> {
    let out = &cfg.paths.out_dir;
    let Some(kind) = cfg.baseline else {
        let (space, model) = load_artifacts(cfg)?;
        let rows = rank_candidates(selected, &space, &model, cfg.k).at(Stage::Rank)?;
        let path = out.join("ranked.tsv");
        write_file(&path, &write_ranked(&rows)).at(Stage::Rank)?;
        return Ok(vec![RankedRun {
            name: "wtm".into(),
            seed: None,
            rows,
            path,
        }]);
    };
    let (space, train, params);
    let classifier = if kind == Baseline::Classifier {
        space = load_artifacts(cfg)?.0;
        train = load_train_vectors(cfg)?;
        params = cfg.train;
        Some((&space, &train[..], params))
    } else {
        None
    };
    let seeds: Vec<Option<u64>> = if kind.is_randomized() {
        (0..cfg.baseline_runs.max(1) as u64).map(|i| Some(cfg.seed + i)).collect()
    } else {
        vec![None]
    };
    let mut runs = Vec::new();
    for seed in seeds {
        let inputs = classifier.map(|(space, train, params)| ClassifierInputs { space, train, params });
        let rows = baseline_rows(kind, selected, cfg.k, seed.unwrap_or(cfg.seed), inputs).at(Stage::Rank)?;
        let file = match seed {
            Some(s) => format!("ranked_{}_seed{s}.tsv", kind.name()),
            None => format!("ranked_{}.tsv", kind.name()),
        };
        let path = out.join(file);
        write_file(&path, &write_ranked(&rows)).at(Stage::Rank)?;
        runs.push(RankedRun {
            name: kind.name().into(),
            seed,
            rows,
            path,
        });
    }
    Ok(runs)
}

// ----------------------------------------------------------------- evaluation

/// Gold labels of every labelled sentence, keyed by entity and sentence id.
pub fn gold_from_sentences<'a>(sentences: impl IntoIterator<Item = &'a AnnotatedSentence>) -> Gold {
    let mut gold = Gold::new();
    for s in sentences {
        if let Some(g) = s.gold_label {
            gold.entry(s.entity_id.clone())
                .or_default()
                .insert(s.sentence_id.clone(), g.as_int());
        }
    }
    gold
}

/// Evaluates one or more ranked outputs of the same system and averages
/// them (for seeded baselines).
pub fn evaluate_rows(runs: &[&[RankedRow]], gold: &Gold, k: usize) -> Result<EvalReport> {
    let reports = runs
        .iter()
        .map(|rows| evaluate_run(&rows_to_lists(rows), gold, k))
        .collect::<Result<Vec<_>>>()?;
    average_reports(&reports)
}

#[derive(Clone, Debug)]
pub struct RunAllOutput {
    pub train: TrainOutput,
    pub runs: Vec<RankedRun>,
    pub reports: BTreeMap<String, EvalReport>,
}

/// Train phase, selection, model ranking and (when configured) one baseline,
/// then evaluation of everything against the page gold labels if present.
/// Reports go to `report_<name>.json`.
pub fn run_all(cfg: &RunConfig) -> StageResult<RunAllOutput> {
    let train = run_train_phase(cfg)?;
    let selected = run_selection_phase(cfg)?;
    let mut runs = run_retrieval_phase(&RunConfig { baseline: None, ..cfg.clone() }, &selected)?;
    if cfg.baseline.is_some() {
        runs.extend(run_retrieval_phase(cfg, &selected)?);
    }

    let gold = gold_from_sentences(selected.iter().flat_map(|e| &e.sentences));
    let mut reports = BTreeMap::new();
    if !gold.is_empty() {
        let mut by_name: BTreeMap<&str, Vec<&[RankedRow]>> = BTreeMap::new();
        for r in &runs {
            by_name.entry(&r.name).or_default().push(&r.rows);
        }
        for (name, rows) in by_name {
            let report = evaluate_rows(&rows, &gold, cfg.k).at(Stage::Eval)?;
            reports.insert(name.to_string(), report);
        }
        if let Some(kind) = cfg.baseline {
            let other = reports[kind.name()].clone();
            if let Some(wtm) = reports.get_mut("wtm") {
                match compare_runs(wtm, &other, kind.name()) {
                    Ok(s) => wtm.significance = Some(s),
                    Err(e) => log::warn!("no significance test: {e}"),
                }
            }
        }
        for (name, report) in &reports {
            let path = cfg.paths.out_dir.join(format!("report_{name}.json"));
            write_file(&path, &report.to_json()).at(Stage::Eval)?;
        }
    }
    Ok(RunAllOutput { train, runs, reports })
}
