//! Random forest classification: bagged CART trees with per-split random
//! feature subsets and mode voting.
//!
//! Each tree draws its bootstrap sample and feature subsets from a generator
//! seeded by (seed, tree index), so training is reproducible bit for bit no
//! matter how trees are scheduled across threads.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::StanceLabel;
use crate::features::FeatureVector;

/// Features considered per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// ceil(sqrt(d)) random features per node.
    #[default]
    Sqrt,
    /// every feature at every node.
    All,
}

/// Forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 10,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            min_samples_split: 2,
            seed: 0,
        }
    }
}

/// A CART tree node: either a class leaf or an axis-aligned binary split
/// (`value <= threshold` goes left).
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(StanceLabel),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn predict(&self, query: &[i8]) -> StanceLabel {
        match self {
            TreeNode::Leaf(label) => *label,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if f64::from(query[*feature]) <= *threshold {
                    left.predict(query)
                } else {
                    right.predict(query)
                }
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// One trained decision tree.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn predict(&self, query: &[i8]) -> StanceLabel {
        self.root.predict(query)
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }
}

/// A trained forest.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomForestModel {
    trees: Vec<DecisionTree>,
    config: ForestConfig,
    class_frequencies: [usize; 3],
    n_features: usize,
}

impl RandomForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }
}

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("cannot train on an empty dataset")]
    EmptyTrainingSet,
    #[error("ragged training vectors: expected length {expected}, found {found}")]
    RaggedLengths { expected: usize, found: usize },
    #[error("length mismatch: model has {expected} features, query has {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("gini requires a nonzero total count")]
    ZeroTotal,
    #[error("n_trees must be at least 1")]
    ZeroTrees,
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file line {line}: {message}")]
    BadModel { line: usize, message: String },
}

/// Gini impurity of a class-count table: `1 - sum(p^2)`.
pub fn gini(class_counts: &[usize]) -> Result<f64, ForestError> {
    let total: usize = class_counts.iter().sum();
    if total == 0 {
        return Err(ForestError::ZeroTotal);
    }
    let mut sum_sq = 0.0;
    for &c in class_counts {
        let p = c as f64 / total as f64;
        sum_sq += p * p;
    }
    Ok(1.0 - sum_sq)
}

fn label_counts(vectors: &[FeatureVector], samples: &[usize]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    for &i in samples {
        counts[vectors[i].label.tie_rank()] += 1;
    }
    counts
}

fn majority_label(counts: &[usize; 3]) -> StanceLabel {
    let rank = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("three counts")
        .0;
    StanceLabel::TIE_ORDER[rank]
}

struct TreeBuilder<'a> {
    vectors: &'a [FeatureVector],
    n_features: usize,
    max_features: MaxFeatures,
    min_samples_split: usize,
    rng: ChaCha8Rng,
}

impl TreeBuilder<'_> {
    fn candidate_features(&mut self) -> Vec<usize> {
        match self.max_features {
            MaxFeatures::All => (0..self.n_features).collect(),
            MaxFeatures::Sqrt => {
                let m = (self.n_features as f64).sqrt().ceil() as usize;
                let m = m.clamp(1, self.n_features);
                let mut picked: Vec<usize> =
                    rand::seq::index::sample(&mut self.rng, self.n_features, m).into_vec();
                picked.sort_unstable();
                picked
            }
        }
    }

    /// Best (feature, threshold) over the candidates, by count-weighted child
    /// Gini; ties keep the lowest feature index then the lowest threshold.
    fn best_split(&self, samples: &[usize], candidates: &[usize]) -> Option<(usize, f64)> {
        let n = samples.len() as f64;
        let mut best: Option<(f64, usize, f64)> = None;
        for &feature in candidates {
            let mut values: Vec<i8> = samples
                .iter()
                .map(|&i| self.vectors[i].values[feature])
                .collect();
            values.sort_unstable();
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (f64::from(pair[0]) + f64::from(pair[1])) / 2.0;
                let mut left = [0usize; 3];
                let mut right = [0usize; 3];
                for &i in samples {
                    let v = &self.vectors[i];
                    if f64::from(v.values[feature]) <= threshold {
                        left[v.label.tie_rank()] += 1;
                    } else {
                        right[v.label.tie_rank()] += 1;
                    }
                }
                let n_left: usize = left.iter().sum();
                let n_right: usize = right.iter().sum();
                let weighted = (n_left as f64 * gini(&left).expect("nonempty child")
                    + n_right as f64 * gini(&right).expect("nonempty child"))
                    / n;
                if best.is_none() || weighted < best.unwrap().0 {
                    best = Some((weighted, feature, threshold));
                }
            }
        }
        best.map(|(_, feature, threshold)| (feature, threshold))
    }

    fn grow(&mut self, samples: Vec<usize>) -> TreeNode {
        let counts = label_counts(self.vectors, &samples);
        let n_classes = counts.iter().filter(|&&c| c > 0).count();
        if n_classes <= 1 || samples.len() < self.min_samples_split {
            return TreeNode::Leaf(majority_label(&counts));
        }
        let candidates = self.candidate_features();
        let Some((feature, threshold)) = self.best_split(&samples, &candidates) else {
            // No candidate feature distinguishes the samples.
            return TreeNode::Leaf(majority_label(&counts));
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .into_iter()
            .partition(|&i| f64::from(self.vectors[i].values[feature]) <= threshold);
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(self.grow(left)),
            right: Box::new(self.grow(right)),
        }
    }
}

fn rng_for_tree(seed: u64, tree_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree_index as u64);
    rng
}

/// Trains a forest. Trees are grown in parallel; per-tree seeding keeps the
/// result identical to a sequential run.
pub fn fit_forest(
    vectors: &[FeatureVector],
    config: &ForestConfig,
) -> Result<RandomForestModel, ForestError> {
    let Some(first) = vectors.first() else {
        return Err(ForestError::EmptyTrainingSet);
    };
    if config.n_trees == 0 {
        return Err(ForestError::ZeroTrees);
    }
    let n_features = first.values.len();
    for v in vectors {
        if v.values.len() != n_features {
            return Err(ForestError::RaggedLengths {
                expected: n_features,
                found: v.values.len(),
            });
        }
    }
    let n = vectors.len();
    let trees: Vec<DecisionTree> = (0..config.n_trees)
        .into_par_iter()
        .map(|tree_index| {
            let mut rng = rng_for_tree(config.seed, tree_index);
            let samples: Vec<usize> = if config.bootstrap {
                use rand::Rng;
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let mut builder = TreeBuilder {
                vectors,
                n_features,
                max_features: config.max_features,
                min_samples_split: config.min_samples_split.max(2),
                rng,
            };
            DecisionTree {
                root: builder.grow(samples),
            }
        })
        .collect();
    let all: Vec<usize> = (0..n).collect();
    Ok(RandomForestModel {
        trees,
        config: *config,
        class_frequencies: label_counts(vectors, &all),
        n_features,
    })
}

/// Majority vote over the trees; vote ties break by global training-class
/// frequency, then by the fixed label order.
pub fn predict_forest(
    model: &RandomForestModel,
    query: &[i8],
) -> Result<StanceLabel, ForestError> {
    if query.len() != model.n_features {
        return Err(ForestError::LengthMismatch {
            expected: model.n_features,
            found: query.len(),
        });
    }
    let mut votes = [0usize; 3];
    for tree in &model.trees {
        votes[tree.predict(query).tie_rank()] += 1;
    }
    Ok(StanceLabel::TIE_ORDER
        .into_iter()
        .max_by(|&a, &b| {
            let key = |l: StanceLabel| {
                (
                    votes[l.tie_rank()],
                    model.class_frequencies[l.tie_rank()],
                    std::cmp::Reverse(l.tie_rank()),
                )
            };
            key(a).cmp(&key(b))
        })
        .expect("three labels"))
}

const MODEL_HEADER: &str = "stance-forest v1";

fn write_node(out: &mut String, node: &TreeNode) {
    match node {
        TreeNode::Leaf(label) => {
            let _ = writeln!(out, "leaf {label}");
        }
        TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            let _ = writeln!(out, "split {feature} {threshold}");
            write_node(out, left);
            write_node(out, right);
        }
    }
}

/// Serializes the forest as a versioned text file, one preorder node list
/// per tree.
pub fn save_forest(model: &RandomForestModel, path: impl AsRef<Path>) -> Result<(), ForestError> {
    let path = path.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let c = &model.config;
    let _ = writeln!(out, "n-trees {}", c.n_trees);
    let _ = writeln!(
        out,
        "max-features {}",
        match c.max_features {
            MaxFeatures::Sqrt => "sqrt",
            MaxFeatures::All => "all",
        }
    );
    let _ = writeln!(out, "bootstrap {}", c.bootstrap);
    let _ = writeln!(out, "min-samples-split {}", c.min_samples_split);
    let _ = writeln!(out, "seed {}", c.seed);
    let _ = writeln!(out, "n-features {}", model.n_features);
    let _ = writeln!(
        out,
        "class-frequencies {} {} {}",
        model.class_frequencies[0], model.class_frequencies[1], model.class_frequencies[2]
    );
    for (i, tree) in model.trees.iter().enumerate() {
        let _ = writeln!(out, "tree {i}");
        write_node(&mut out, &tree.root);
    }
    std::fs::write(path, out).map_err(|source| ForestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_node<'a, I>(lines: &mut I) -> Result<TreeNode, ForestError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (line_no, line) = lines
        .next()
        .ok_or(ForestError::BadModel {
            line: 0,
            message: "unexpected end of node list".into(),
        })?;
    let bad = |message: String| ForestError::BadModel {
        line: line_no + 1,
        message,
    };
    if let Some(rest) = line.strip_prefix("leaf ") {
        let label: StanceLabel = rest
            .parse()
            .map_err(|_| bad(format!("bad leaf label {rest:?}")))?;
        Ok(TreeNode::Leaf(label))
    } else if let Some(rest) = line.strip_prefix("split ") {
        let mut parts = rest.split_whitespace();
        let feature: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("bad split feature".into()))?;
        let threshold: f64 = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("bad split threshold".into()))?;
        let left = Box::new(read_node(lines)?);
        let right = Box::new(read_node(lines)?);
        Ok(TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        })
    } else {
        Err(bad(format!("expected leaf or split, found {line:?}")))
    }
}

/// Loads a forest saved by [`save_forest`].
pub fn load_forest(path: impl AsRef<Path>) -> Result<RandomForestModel, ForestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ForestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, message: &str| ForestError::BadModel {
        line,
        message: message.to_string(),
    };

    let (i, header) = lines.next().ok_or_else(|| bad(0, "empty file"))?;
    if header != MODEL_HEADER {
        return Err(bad(i + 1, "unrecognized model header"));
    }
    let mut expect = |name: &str| -> Result<String, ForestError> {
        let (i, line) = lines
            .next()
            .ok_or_else(|| bad(0, "unexpected end of file"))?;
        line.strip_prefix(name)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(i + 1, &format!("expected `{name} ...`")))
    };
    let n_trees: usize = expect("n-trees")?
        .parse()
        .map_err(|_| bad(0, "bad n-trees"))?;
    let max_features = match expect("max-features")?.as_str() {
        "sqrt" => MaxFeatures::Sqrt,
        "all" => MaxFeatures::All,
        _ => return Err(bad(0, "bad max-features")),
    };
    let bootstrap: bool = expect("bootstrap")?
        .parse()
        .map_err(|_| bad(0, "bad bootstrap"))?;
    let min_samples_split: usize = expect("min-samples-split")?
        .parse()
        .map_err(|_| bad(0, "bad min-samples-split"))?;
    let seed: u64 = expect("seed")?.parse().map_err(|_| bad(0, "bad seed"))?;
    let n_features: usize = expect("n-features")?
        .parse()
        .map_err(|_| bad(0, "bad n-features"))?;
    let freq_line = expect("class-frequencies")?;
    let freqs: Vec<usize> = freq_line
        .split_whitespace()
        .map(|p| p.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(0, "bad class frequencies"))?;
    if freqs.len() != 3 {
        return Err(bad(0, "expected three class frequencies"));
    }
    let mut trees = Vec::with_capacity(n_trees);
    for t in 0..n_trees {
        let (i, line) = lines
            .next()
            .ok_or_else(|| bad(0, "missing tree header"))?;
        if line != format!("tree {t}") {
            return Err(bad(i + 1, &format!("expected `tree {t}`")));
        }
        trees.push(DecisionTree {
            root: read_node(&mut lines)?,
        });
    }
    Ok(RandomForestModel {
        trees,
        config: ForestConfig {
            n_trees,
            max_features,
            bootstrap,
            min_samples_split,
            seed,
        },
        class_frequencies: [freqs[0], freqs[1], freqs[2]],
        n_features,
    })
}

/// Structural sanity check used by tests: paths never test features outside
/// the trained width, and depth is bounded by the sample count.
pub fn tree_respects_bounds(tree: &DecisionTree, n_features: usize, n_samples: usize) -> bool {
    fn walk(node: &TreeNode, n_features: usize, mut seen: Vec<usize>) -> bool {
        match node {
            TreeNode::Leaf(_) => true,
            TreeNode::Split {
                feature,
                left,
                right,
                ..
            } => {
                if *feature >= n_features {
                    return false;
                }
                if !seen.contains(feature) {
                    seen.push(*feature);
                }
                walk(left, n_features, seen.clone()) && walk(right, n_features, seen)
            }
        }
    }
    tree.depth() <= n_samples && walk(&tree.root, n_features, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fv(values: &[i8], label: StanceLabel) -> FeatureVector {
        FeatureVector {
            values: values.to_vec(),
            label,
        }
    }

    #[test]
    fn gini_values() {
        assert_eq!(gini(&[4]).unwrap(), 0.0);
        assert_eq!(gini(&[1, 1]).unwrap(), 0.5);
        assert!((gini(&[3, 1]).unwrap() - 0.375).abs() < 1e-12);
        assert!(gini(&[0, 0]).is_err());
    }

    #[test]
    fn gini_is_label_permutation_invariant() {
        assert_eq!(gini(&[3, 1, 2]).unwrap(), gini(&[2, 3, 1]).unwrap());
    }

    #[test]
    fn pure_training_set_gives_pure_leaves() {
        let vectors = vec![
            fv(&[1, 0], StanceLabel::Against),
            fv(&[0, 1], StanceLabel::Against),
            fv(&[1, 1], StanceLabel::Against),
        ];
        let model = fit_forest(&vectors, &ForestConfig::default()).unwrap();
        for q in [[0, 0], [1, 0], [1, 1], [-1, -1]] {
            assert_eq!(predict_forest(&model, &q).unwrap(), StanceLabel::Against);
        }
    }

    #[test]
    fn same_seed_reproduces_model() {
        let vectors: Vec<FeatureVector> = (0..20)
            .map(|i| {
                fv(
                    &[(i % 2) as i8, ((i / 2) % 2) as i8, ((i / 4) % 2) as i8],
                    StanceLabel::TIE_ORDER[(i % 3) as usize],
                )
            })
            .collect();
        let config = ForestConfig {
            seed: 99,
            ..ForestConfig::default()
        };
        let a = fit_forest(&vectors, &config).unwrap();
        let b = fit_forest(&vectors, &config).unwrap();
        assert_eq!(a, b);
        let config2 = ForestConfig { seed: 100, ..config };
        let c = fit_forest(&vectors, &config2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn deterministic_training_accuracy_on_consistent_data() {
        // Consistent: labels are a function of the vector.
        let vectors: Vec<FeatureVector> = (0..16)
            .map(|i| {
                let values = [
                    (i & 1) as i8,
                    ((i >> 1) & 1) as i8,
                    ((i >> 2) & 1) as i8,
                    ((i >> 3) & 1) as i8,
                ];
                let label = StanceLabel::TIE_ORDER
                    [((values[0] ^ values[1]) + values[2]) as usize % 3];
                fv(&values, label)
            })
            .collect();
        let config = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            min_samples_split: 2,
            seed: 7,
        };
        let model = fit_forest(&vectors, &config).unwrap();
        for v in &vectors {
            assert_eq!(predict_forest(&model, &v.values).unwrap(), v.label);
        }
    }

    #[test]
    fn xor_shaped_data_is_still_separated() {
        let vectors = vec![
            fv(&[0, 0], StanceLabel::Favor),
            fv(&[1, 1], StanceLabel::Favor),
            fv(&[0, 1], StanceLabel::Against),
            fv(&[1, 0], StanceLabel::Against),
        ];
        let config = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            min_samples_split: 2,
            seed: 0,
        };
        let model = fit_forest(&vectors, &config).unwrap();
        for v in &vectors {
            assert_eq!(predict_forest(&model, &v.values).unwrap(), v.label);
        }
    }

    #[test]
    fn vote_examples() {
        let vectors = vec![
            fv(&[0], StanceLabel::Against),
            fv(&[1], StanceLabel::Favor),
        ];
        let config = ForestConfig {
            n_trees: 3,
            bootstrap: false,
            max_features: MaxFeatures::All,
            seed: 1,
            ..ForestConfig::default()
        };
        let model = fit_forest(&vectors, &config).unwrap();
        // Identical trees: unanimous votes.
        assert_eq!(predict_forest(&model, &[0]).unwrap(), StanceLabel::Against);
        assert_eq!(predict_forest(&model, &[1]).unwrap(), StanceLabel::Favor);
    }

    #[test]
    fn mixed_votes_take_the_mode() {
        // Hand-built ensemble: three constant trees voting (FAVOR, FAVOR,
        // NONE) -> FAVOR by strict majority.
        let tree = |label| DecisionTree {
            root: TreeNode::Leaf(label),
        };
        let model = RandomForestModel {
            trees: vec![
                tree(StanceLabel::Favor),
                tree(StanceLabel::Favor),
                tree(StanceLabel::None),
            ],
            config: ForestConfig::default(),
            class_frequencies: [1, 1, 1],
            n_features: 2,
        };
        assert_eq!(predict_forest(&model, &[0, 0]).unwrap(), StanceLabel::Favor);

        // Vote tie (FAVOR, NONE): the larger training-class frequency wins,
        // then the fixed label order.
        let model = RandomForestModel {
            trees: vec![tree(StanceLabel::Favor), tree(StanceLabel::None)],
            config: ForestConfig::default(),
            class_frequencies: [0, 1, 5],
            n_features: 1,
        };
        assert_eq!(predict_forest(&model, &[0]).unwrap(), StanceLabel::None);
        let model = RandomForestModel {
            trees: vec![tree(StanceLabel::Favor), tree(StanceLabel::Against)],
            config: ForestConfig::default(),
            class_frequencies: [2, 2, 0],
            n_features: 1,
        };
        assert_eq!(
            predict_forest(&model, &[0]).unwrap(),
            StanceLabel::Against
        );
    }

    #[test]
    fn single_tree_model_returns_leaf_label() {
        let vectors = vec![
            fv(&[0], StanceLabel::None),
            fv(&[1], StanceLabel::Favor),
        ];
        let config = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            max_features: MaxFeatures::All,
            seed: 0,
            ..ForestConfig::default()
        };
        let model = fit_forest(&vectors, &config).unwrap();
        assert_eq!(model.trees().len(), 1);
        assert_eq!(
            predict_forest(&model, &[0]).unwrap(),
            model.trees()[0].predict(&[0])
        );
    }

    #[test]
    fn query_length_is_checked() {
        let vectors = vec![fv(&[0, 1], StanceLabel::None)];
        let model = fit_forest(&vectors, &ForestConfig::default()).unwrap();
        assert!(matches!(
            predict_forest(&model, &[0]),
            Err(ForestError::LengthMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn empty_and_ragged_inputs_rejected() {
        assert!(matches!(
            fit_forest(&[], &ForestConfig::default()),
            Err(ForestError::EmptyTrainingSet)
        ));
        let ragged = vec![
            fv(&[0, 1], StanceLabel::None),
            fv(&[0], StanceLabel::Favor),
        ];
        assert!(matches!(
            fit_forest(&ragged, &ForestConfig::default()),
            Err(ForestError::RaggedLengths { .. })
        ));
    }

    #[test]
    fn serialization_round_trips_byte_identically() {
        let vectors: Vec<FeatureVector> = (0..30)
            .map(|i| {
                fv(
                    &[(i % 3 - 1) as i8, ((i / 3) % 2) as i8, ((i / 7) % 2) as i8],
                    StanceLabel::TIE_ORDER[(i % 3) as usize],
                )
            })
            .collect();
        let config = ForestConfig {
            seed: 5,
            ..ForestConfig::default()
        };
        let model = fit_forest(&vectors, &config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("forest1.model");
        let p2 = dir.path().join("forest2.model");
        save_forest(&model, &p1).unwrap();
        let reloaded = load_forest(&p1).unwrap();
        assert_eq!(reloaded, model);
        save_forest(&reloaded, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    proptest! {
        #[test]
        fn trees_respect_structural_bounds(
            rows in proptest::collection::vec(
                (proptest::collection::vec(-1i8..=1, 5), 0usize..3), 1..25),
            seed in 0u64..1000,
        ) {
            let vectors: Vec<FeatureVector> = rows
                .into_iter()
                .map(|(values, label)| fv(&values, StanceLabel::TIE_ORDER[label]))
                .collect();
            let config = ForestConfig { n_trees: 3, seed, ..ForestConfig::default() };
            let model = fit_forest(&vectors, &config).unwrap();
            for tree in model.trees() {
                prop_assert!(tree_respects_bounds(tree, 5, vectors.len()));
            }
        }

        #[test]
        fn predictions_are_training_labels(
            rows in proptest::collection::vec(
                (proptest::collection::vec(0i8..=1, 4), 0usize..2), 1..15),
            query in proptest::collection::vec(0i8..=1, 4),
        ) {
            let vectors: Vec<FeatureVector> = rows
                .into_iter()
                .map(|(values, label)| fv(&values, StanceLabel::TIE_ORDER[label]))
                .collect();
            let seen: Vec<StanceLabel> = vectors.iter().map(|v| v.label).collect();
            let model = fit_forest(&vectors, &ForestConfig::default()).unwrap();
            let label = predict_forest(&model, &query).unwrap();
            prop_assert!(seen.contains(&label));
        }
    }
}
