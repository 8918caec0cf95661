use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::BlockSet;
use crate::grading::{GradeScale, GradingConfig};
use crate::ranker::TrainParams;
use crate::selection::SelectionConfig;

/// Ranker used in the retrieval phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    Random,
    SupposBest,
    SupposWorst,
    SupposRandom,
    Classifier,
}

impl Baseline {
    pub const ALL: [Baseline; 5] = [
        Baseline::Random,
        Baseline::SupposBest,
        Baseline::SupposWorst,
        Baseline::SupposRandom,
        Baseline::Classifier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Baseline::Random => "random",
            Baseline::SupposBest => "suppos-best",
            Baseline::SupposWorst => "suppos-worst",
            Baseline::SupposRandom => "suppos-random",
            Baseline::Classifier => "classifier",
        }
    }

    /// Randomized baselines are run once per seed and their metrics averaged.
    pub fn is_randomized(self) -> bool {
        matches!(self, Baseline::Random | Baseline::SupposRandom)
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Baseline::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown baseline {s:?}")))
    }
}

/// Hyperparameter grid for cross-validated training.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub cs: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub folds: usize,
}

impl Grid {
    /// Parses `"C1,C2,...xE1,E2,..."`.
    pub fn parse(spec: &str, folds: usize) -> Result<Self> {
        let (cs, es) = spec
            .split_once('x')
            .ok_or_else(|| Error::InvalidConfig(format!("grid {spec:?}: expected CsxEs")))?;
        let list = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidConfig(format!("grid value {v:?}: {e}")))
                })
                .collect()
        };
        Ok(Grid {
            cs: list(cs)?,
            epsilons: list(es)?,
            folds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Paths {
    pub trivia: Option<PathBuf>,
    pub kb: Option<PathBuf>,
    /// Annotations for the training trivia; unmatched trivia are annotated
    /// by the built-in fallback annotator.
    pub train_annotations: Option<PathBuf>,
    pub pages: Option<PathBuf>,
    /// Annotations (and gold labels) for page sentences.
    pub test_annotations: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub paths: Paths,
    pub grading: GradingConfig,
    pub selection: SelectionConfig,
    pub train: TrainParams,
    pub grid: Option<Grid>,
    pub blocks: BlockSet,
    pub k: usize,
    pub seed: u64,
    pub baseline: Option<Baseline>,
    /// Seeds per randomized baseline.
    pub baseline_runs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            paths: Paths {
                out_dir: PathBuf::from("out"),
                ..Paths::default()
            },
            grading: GradingConfig::default(),
            selection: SelectionConfig::default(),
            train: TrainParams::default(),
            grid: None,
            blocks: BlockSet::ALL,
            k: 10,
            seed: 0,
            baseline: None,
            baseline_runs: 5,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::InvalidConfig(format!("{key} = {value:?}: {e}")))
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match value {
        "" | "none" | "off" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting. Relative paths are resolved
    /// against `base` when given.
    pub fn apply(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<()> {
        let value = value.trim();
        let path = || match base {
            Some(b) if Path::new(value).is_relative() => b.join(value),
            _ => PathBuf::from(value),
        };
        match key.trim().replace('-', "_").as_str() {
            "trivia" => self.paths.trivia = Some(path()),
            "kb" => self.paths.kb = Some(path()),
            "train_annotations" => self.paths.train_annotations = Some(path()),
            "pages" => self.paths.pages = Some(path()),
            "test_annotations" | "annotations" => self.paths.test_annotations = Some(path()),
            "model" => self.paths.model = Some(path()),
            "out_dir" | "out" => self.paths.out_dir = path(),
            "k" => {
                self.k = parse(key, value)?;
                if self.k == 0 {
                    return Err(Error::InvalidConfig("k must be at least 1".into()));
                }
            }
            "seed" => {
                self.seed = parse(key, value)?;
                self.train.seed = self.seed;
            }
            "c" => self.train.c = parse(key, value)?,
            "epsilon" | "e" => self.train.epsilon = parse(key, value)?,
            "max_iter" => self.train.max_iter = parse(key, value)?,
            "grid" => {
                let folds = self.grid.as_ref().map_or(5, |g| g.folds);
                self.grid = match value {
                    "" | "none" | "off" => None,
                    v => Some(Grid::parse(v, folds)?),
                }
            }
            "folds" => {
                let folds = parse(key, value)?;
                if let Some(g) = &mut self.grid {
                    g.folds = folds;
                } else {
                    self.grid = Some(Grid {
                        cs: vec![self.train.c],
                        epsilons: vec![self.train.epsilon],
                        folds,
                    });
                }
            }
            "blocks" | "features" => self.blocks = value.parse()?,
            "mode" => {
                self.grading.scale = match value {
                    "five_grade" | "five-grade" => GradeScale::FiveGrade,
                    "two_grade" | "two-grade" => GradeScale::TwoGrade,
                    other => return Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
                }
            }
            "base_min_votes" => self.grading.base_min_votes = parse(key, value)?,
            "high_lr_threshold" => self.grading.high_lr_threshold = parse(key, value)?,
            "high_min_votes" => self.grading.high_min_votes = parse(key, value)?,
            "percentile_cutoffs" | "cutoffs" => {
                self.grading.percentile_cutoffs = value
                    .split(',')
                    .map(|v| parse(key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "max_chars" => self.grading.max_chars = optional(key, value)?,
            "min_trivia_per_entity" => self.grading.min_trivia_per_entity = optional(key, value)?,
            "domain" => {
                let keep = self.selection.use_mentions_when_present;
                self.selection = match value {
                    "movie" => SelectionConfig::movie(),
                    "celebrity" => SelectionConfig::celebrity(),
                    other => return Err(Error::InvalidConfig(format!("unknown domain {other:?}"))),
                };
                self.selection.use_mentions_when_present = keep;
            }
            "definite_referents" | "referents" => {
                self.selection.definite_referents = value
                    .split(',')
                    .map(|r| r.trim().to_lowercase())
                    .filter(|r| !r.is_empty())
                    .collect()
            }
            "use_mentions" | "use_mentions_when_present" => {
                self.selection.use_mentions_when_present = parse(key, value)?
            }
            "baseline" => self.baseline = optional(key, value)?,
            "baseline_runs" => self.baseline_runs = parse(key, value)?,
            other => return Err(Error::InvalidConfig(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parses a `key = value` file; `#` starts a comment.
    pub fn parse_file_contents(&mut self, src: &str, base: Option<&Path>) -> Result<()> {
        for (no, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::malformed(no + 1, "expected key = value"))?;
            self.apply(key, value, base)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.parse_file_contents(&src, path.parent())?;
        Ok(cfg)
    }

    pub fn model_path(&self) -> PathBuf {
        self.paths
            .model
            .clone()
            .unwrap_or_else(|| self.paths.out_dir.join("model.json"))
    }

    pub fn space_path(&self) -> PathBuf {
        self.paths.out_dir.join("feature_space.json")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.parse_file_contents(
            "# mini run\ntrivia = trivia.jsonl\nk = 5\nc = 2.5  # tuned\nblocks = U\nmode = two_grade\n",
            Some(Path::new("/data")),
        )
        .unwrap();
        assert_eq!(cfg.paths.trivia.as_deref(), Some(Path::new("/data/trivia.jsonl")));
        assert_eq!(cfg.k, 5);
        assert_eq!(cfg.train.c, 2.5);
        assert_eq!(cfg.blocks, BlockSet::UNIGRAM);
        assert_eq!(cfg.grading.scale, GradeScale::TwoGrade);
        cfg.apply("k", "10", None).unwrap();
        assert_eq!(cfg.k, 10);
    }

    #[test]
    fn rejects_bad_settings() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply("k", "0", None).is_err());
        assert!(cfg.apply("colour", "red", None).is_err());
        assert!(cfg.parse_file_contents("no equals sign", None).is_err());
        assert!(cfg.apply("baseline", "oracle", None).is_err());
    }

    #[test]
    fn grid_and_baseline() {
        let mut cfg = RunConfig::default();
        cfg.apply("grid", "1,17x0.1,0.21", None).unwrap();
        cfg.apply("folds", "3", None).unwrap();
        assert_eq!(
            cfg.grid,
            Some(Grid { cs: vec![1.0, 17.0], epsilons: vec![0.1, 0.21], folds: 3 })
        );
        cfg.apply("baseline", "suppos-random", None).unwrap();
        assert_eq!(cfg.baseline, Some(Baseline::SupposRandom));
        assert!(Baseline::SupposRandom.is_randomized());
    }
}
