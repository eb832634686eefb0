//! Experiment configuration: a TOML file of normative keys.
//!
//! Relative paths are resolved against the directory containing the config
//! file. See the repository README for the full key reference.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::{ColumnSpec, Delimiter};
use crate::features::FeatureScheme;
use crate::forest::{ForestConfig, MaxFeatures};
use crate::mbl::{KnnConfig, NeighborSemantics, TieBreak, Weighting};

use super::HarnessError;

/// Classifier selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Learner {
    Knn,
    Forest,
}

impl Learner {
    pub fn as_str(self) -> &'static str {
        match self {
            Learner::Knn => "knn",
            Learner::Forest => "forest",
        }
    }
}

impl std::fmt::Display for Learner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What to train on for a test target that has no training data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DonaldPolicy {
    /// Skip the target.
    #[default]
    None,
    /// Train on the union of every other target's training data.
    UnionOfAll,
    /// Train on a user-supplied file.
    ExplicitFile,
}

/// Report output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Md,
}

fn default_true() -> bool {
    true
}

/// `[data]` section: corpus files and their column layout.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub train: PathBuf,
    pub test: PathBuf,
    #[serde(default = "default_delimiter")]
    pub delimiter: Delimiter,
    #[serde(default)]
    pub id_column: usize,
    #[serde(default = "default_one")]
    pub target_column: usize,
    #[serde(default = "default_two")]
    pub text_column: usize,
    #[serde(default = "default_three")]
    pub stance_column: usize,
    #[serde(default)]
    pub sentiment_column: Option<usize>,
    /// Strip `#`/`@` prefixes during tokenization (sensitivity knob).
    #[serde(default = "default_true")]
    pub strip_hashtags: bool,
}

fn default_delimiter() -> Delimiter {
    Delimiter::Tab
}
fn default_one() -> usize {
    1
}
fn default_two() -> usize {
    2
}
fn default_three() -> usize {
    3
}

impl DataConfig {
    pub fn column_spec(&self) -> ColumnSpec {
        ColumnSpec {
            delimiter: self.delimiter,
            id: self.id_column,
            target: self.target_column,
            text: self.text_column,
            stance: self.stance_column,
            sentiment: self.sentiment_column,
        }
    }
}

/// `[tagger]` section: either a tagged corpus to train on, or pre-tagged
/// files aligned one sentence per tweet with the train/test corpora.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggerConfig {
    pub train_tagged: Option<PathBuf>,
    pub pretagged_train: Option<PathBuf>,
    pub pretagged_test: Option<PathBuf>,
}

/// `[lexicons]` section.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconConfig {
    pub mpqa: Option<PathBuf>,
    pub arguing_patterns_dir: Option<PathBuf>,
    pub arguing_macros_dir: Option<PathBuf>,
    #[serde(default)]
    pub mpqa_presence_fallback: bool,
}

/// `[conll]` section: dependency parses plus per-tweet sentence counts.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConllConfig {
    pub train: PathBuf,
    pub test: PathBuf,
    pub train_index: PathBuf,
    pub test_index: PathBuf,
    /// Column preset: `conllx` or `corenlp`.
    #[serde(default = "default_conll_columns")]
    pub columns: String,
}

fn default_conll_columns() -> String {
    "conllx".to_string()
}

/// `[knn]` section, with optional per-target k overrides.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnSection {
    pub k: usize,
    pub weighting: Weighting,
    pub neighbor_semantics: NeighborSemantics,
    pub k_overrides: BTreeMap<String, usize>,
}

impl Default for KnnSection {
    fn default() -> Self {
        KnnSection {
            k: 1,
            weighting: Weighting::default(),
            neighbor_semantics: NeighborSemantics::default(),
            k_overrides: BTreeMap::new(),
        }
    }
}

impl KnnSection {
    pub fn config_for(&self, target: &str) -> KnnConfig {
        KnnConfig {
            k: self.k_overrides.get(target).copied().unwrap_or(self.k),
            weighting: self.weighting,
            neighbor_semantics: self.neighbor_semantics,
            tie_break: TieBreak::default(),
        }
    }
}

/// `[forest]` section. The per-run seed comes from the global `seed` key.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestSection {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub min_samples_split: usize,
}

impl Default for ForestSection {
    fn default() -> Self {
        let d = ForestConfig::default();
        ForestSection {
            n_trees: d.n_trees,
            max_features: d.max_features,
            bootstrap: d.bootstrap,
            min_samples_split: d.min_samples_split,
        }
    }
}

impl ForestSection {
    pub fn config_with_seed(&self, seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees: self.n_trees,
            max_features: self.max_features,
            bootstrap: self.bootstrap,
            min_samples_split: self.min_samples_split,
            seed,
        }
    }
}

/// `[output]` section.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default)]
    pub format: ReportFormat,
}

/// The full experiment description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub parallel_targets: bool,
    pub schemes: Vec<FeatureScheme>,
    pub learners: Vec<Learner>,
    #[serde(default)]
    pub donald_training_policy: DonaldPolicy,
    #[serde(default)]
    pub donald_train_file: Option<PathBuf>,
    pub data: DataConfig,
    pub tagger: TaggerConfig,
    #[serde(default)]
    pub lexicons: LexiconConfig,
    #[serde(default)]
    pub conll: Option<ConllConfig>,
    #[serde(default)]
    pub knn: KnnSection,
    #[serde(default)]
    pub forest: ForestSection,
    pub output: OutputConfig,
}

fn resolve(base: &Path, path: &mut PathBuf) {
    if path.is_relative() {
        *path = base.join(&*path);
    }
}

impl ExperimentConfig {
    /// Parses a config file and resolves its relative paths against the
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config: ExperimentConfig =
            toml::from_str(&text).map_err(|e| HarnessError::Config {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        config.validate().map_err(|message| HarnessError::Config {
            path: path.display().to_string(),
            message,
        })?;
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.data.train);
        resolve(base, &mut self.data.test);
        if let Some(p) = self.tagger.train_tagged.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.tagger.pretagged_train.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.tagger.pretagged_test.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.lexicons.mpqa.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.lexicons.arguing_patterns_dir.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.lexicons.arguing_macros_dir.as_mut() {
            resolve(base, p);
        }
        if let Some(c) = self.conll.as_mut() {
            resolve(base, &mut c.train);
            resolve(base, &mut c.test);
            resolve(base, &mut c.train_index);
            resolve(base, &mut c.test_index);
        }
        if let Some(p) = self.donald_train_file.as_mut() {
            resolve(base, p);
        }
        resolve(base, &mut self.output.dir);
    }

    /// Structural validation: at least one scheme and learner, inputs wired
    /// for every requested scheme, and all referenced paths present.
    pub fn validate(&self) -> Result<(), String> {
        if self.schemes.is_empty() {
            return Err("at least one scheme is required".into());
        }
        if self.learners.is_empty() {
            return Err("at least one learner is required".into());
        }
        let trained = self.tagger.train_tagged.is_some();
        let pretagged =
            self.tagger.pretagged_train.is_some() && self.tagger.pretagged_test.is_some();
        if !trained && !pretagged {
            return Err(
                "tagger needs either train_tagged or pretagged_train + pretagged_test".into(),
            );
        }
        if self.schemes.contains(&FeatureScheme::MpqaWeighted) && self.lexicons.mpqa.is_none() {
            return Err("scheme MPQA_WEIGHTED requires lexicons.mpqa".into());
        }
        if self.schemes.contains(&FeatureScheme::ArguingBinary)
            && self.lexicons.arguing_patterns_dir.is_none()
        {
            return Err("scheme ARGUING_BINARY requires lexicons.arguing_patterns_dir".into());
        }
        if self.schemes.contains(&FeatureScheme::DepTriples) {
            let Some(conll) = &self.conll else {
                return Err("scheme DEP_TRIPLES requires the [conll] section".into());
            };
            if crate::conll::ConllColumns::preset(&conll.columns).is_none() {
                return Err(format!("unknown conll column preset {:?}", conll.columns));
            }
        }
        match self.donald_training_policy {
            DonaldPolicy::ExplicitFile => {
                if self.donald_train_file.is_none() {
                    return Err(
                        "donald_training_policy = explicit_file requires donald_train_file".into(),
                    );
                }
                if !trained {
                    return Err(
                        "donald_training_policy = explicit_file requires tagger.train_tagged"
                            .into(),
                    );
                }
                if self.schemes.contains(&FeatureScheme::DepTriples) {
                    return Err(
                        "donald_training_policy = explicit_file cannot be combined with \
                         DEP_TRIPLES"
                            .into(),
                    );
                }
            }
            DonaldPolicy::None | DonaldPolicy::UnionOfAll => {}
        }
        let mut required: Vec<&PathBuf> = vec![&self.data.train, &self.data.test];
        required.extend(self.tagger.train_tagged.iter());
        required.extend(self.tagger.pretagged_train.iter());
        required.extend(self.tagger.pretagged_test.iter());
        required.extend(self.lexicons.mpqa.iter());
        required.extend(self.lexicons.arguing_patterns_dir.iter());
        required.extend(self.lexicons.arguing_macros_dir.iter());
        required.extend(self.donald_train_file.iter());
        if let Some(c) = &self.conll {
            required.extend([&c.train, &c.test, &c.train_index, &c.test_index]);
        }
        for path in required {
            if !path.exists() {
                return Err(format!("referenced path does not exist: {}", path.display()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_toml(_dir: &Path) -> String {
        r#"
seed = 7
schemes = ["BOW_3POS"]
learners = ["knn"]

[data]
train = "train.tsv"
test = "test.tsv"

[tagger]
train_tagged = "tagged.txt"

[output]
dir = "out"
"#
        .to_string()
    }

    fn touch(dir: &Path, name: &str) {
        std::fs::write(dir.join(name), "x").unwrap();
    }

    #[test]
    fn loads_minimal_config_and_resolves_paths() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "train.tsv");
        touch(dir.path(), "test.tsv");
        touch(dir.path(), "tagged.txt");
        let config_path = dir.path().join("exp.toml");
        std::fs::write(&config_path, minimal_toml(dir.path())).unwrap();
        let config = ExperimentConfig::load(&config_path).unwrap();
        assert_eq!(config.seed, 7);
        assert!(config.parallel_targets);
        assert_eq!(config.data.train, dir.path().join("train.tsv"));
        assert_eq!(config.knn.k, 1);
        assert_eq!(config.forest.n_trees, 10);
    }

    #[test]
    fn missing_path_fails_validation() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "train.tsv");
        touch(dir.path(), "tagged.txt");
        let config_path = dir.path().join("exp.toml");
        std::fs::write(&config_path, minimal_toml(dir.path())).unwrap();
        let err = ExperimentConfig::load(&config_path).unwrap_err();
        assert!(err.to_string().contains("test.tsv"), "{err}");
    }

    #[test]
    fn scheme_specific_requirements_are_enforced() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "train.tsv");
        touch(dir.path(), "test.tsv");
        touch(dir.path(), "tagged.txt");
        let toml = minimal_toml(dir.path()).replace("BOW_3POS", "MPQA_WEIGHTED");
        let config_path = dir.path().join("exp.toml");
        std::fs::write(&config_path, toml).unwrap();
        let err = ExperimentConfig::load(&config_path).unwrap_err();
        assert!(err.to_string().contains("MPQA_WEIGHTED"), "{err}");
    }

    #[test]
    fn per_target_k_overrides_apply() {
        let section = KnnSection {
            k: 1,
            k_overrides: [("Atheism".to_string(), 13)].into_iter().collect(),
            ..KnnSection::default()
        };
        assert_eq!(section.config_for("Atheism").k, 13);
        assert_eq!(section.config_for("Feminist Movement").k, 1);
    }
}
