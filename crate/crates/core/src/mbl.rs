//! Memory-based k-NN classification over symbolic feature vectors.
//!
//! Training stores the instances verbatim; classification extrapolates from
//! the nearest stored cases under the weighted overlap metric. By default k
//! counts nearest *distance values* rather than instances, and features are
//! weighted by gain ratio, matching the IB1-IG flavor of memory-based
//! learning.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::StanceLabel;
use crate::features::FeatureVector;

/// Stored training set plus its class frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBase {
    vectors: Vec<FeatureVector>,
    class_frequencies: [usize; 3],
}

impl InstanceBase {
    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector_len(&self) -> usize {
        self.vectors[0].values.len()
    }

    /// Training count of a label.
    pub fn class_frequency(&self, label: StanceLabel) -> usize {
        self.class_frequencies[label.tie_rank()]
    }
}

/// Per-feature nonnegative distance weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureWeights(pub Vec<f64>);

impl FeatureWeights {
    pub fn uniform(len: usize) -> Self {
        FeatureWeights(vec![1.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Feature-weighting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    None,
    #[default]
    GainRatio,
}

/// What `k` counts: distinct nearest distance values (all instances at each
/// included), or nearest instances (boundary ties included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborSemantics {
    #[default]
    KNearestDistances,
    KNearestInstances,
}

/// Tie policy: neighborhood majority first, then the larger training-class
/// frequency, then the fixed label order AGAINST > FAVOR > NONE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    ClassFrequencyThenLabelOrder,
}

/// k-NN hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnConfig {
    pub k: usize,
    pub weighting: Weighting,
    pub neighbor_semantics: NeighborSemantics,
    pub tie_break: TieBreak,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 1,
            weighting: Weighting::default(),
            neighbor_semantics: NeighborSemantics::default(),
            tie_break: TieBreak::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum MblError {
    #[error("cannot fit an empty training set")]
    EmptyTrainingSet,
    #[error("ragged training vectors: expected length {expected}, found {found}")]
    RaggedLengths { expected: usize, found: usize },
    #[error("length mismatch: base has {expected} features, input has {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file line {line}: {message}")]
    BadModel { line: usize, message: String },
}

/// Stores training vectors verbatim and tallies class frequencies.
pub fn fit(vectors: Vec<FeatureVector>) -> Result<InstanceBase, MblError> {
    let Some(first) = vectors.first() else {
        return Err(MblError::EmptyTrainingSet);
    };
    let expected = first.values.len();
    let mut class_frequencies = [0usize; 3];
    for v in &vectors {
        if v.values.len() != expected {
            return Err(MblError::RaggedLengths {
                expected,
                found: v.values.len(),
            });
        }
        class_frequencies[v.label.tie_rank()] += 1;
    }
    Ok(InstanceBase {
        vectors,
        class_frequencies,
    })
}

fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

/// Gain-ratio weight per feature: information gain of the class given the
/// feature's symbolic values, divided by the feature's split info. Constant
/// features get weight 0.
pub fn gain_ratio_weights(base: &InstanceBase) -> FeatureWeights {
    let n = base.len();
    let d = base.vector_len();
    let class_entropy = entropy(&base.class_frequencies, n);
    let mut weights = Vec::with_capacity(d);
    for f in 0..d {
        // Feature values are symbols in {-1, 0, 1}; bucket by value + 1.
        let mut value_counts = [0usize; 3];
        let mut joint = [[0usize; 3]; 3];
        for v in &base.vectors {
            let bucket = (v.values[f] + 1) as usize;
            value_counts[bucket] += 1;
            joint[bucket][v.label.tie_rank()] += 1;
        }
        let split_info = entropy(&value_counts, n);
        if split_info == 0.0 {
            weights.push(0.0);
            continue;
        }
        let mut conditional = 0.0;
        for (bucket, &count) in value_counts.iter().enumerate() {
            if count > 0 {
                conditional += count as f64 / n as f64 * entropy(&joint[bucket], count);
            }
        }
        let gain = class_entropy - conditional;
        weights.push((gain / split_info).clamp(0.0, 1.0));
    }
    FeatureWeights(weights)
}

/// Weights according to the configured mode.
pub fn weights_for(base: &InstanceBase, weighting: Weighting) -> FeatureWeights {
    match weighting {
        Weighting::None => FeatureWeights::uniform(base.vector_len()),
        Weighting::GainRatio => gain_ratio_weights(base),
    }
}

fn overlap_unchecked(a: &[i8], b: &[i8], w: &[f64]) -> f64 {
    let mut total = 0.0;
    for f in 0..a.len() {
        if a[f] != b[f] {
            total += w[f];
        }
    }
    total
}

/// Weighted overlap distance: the sum of weights at positions where the two
/// vectors hold different symbols (`-1` vs `+1` is one mismatch, same as
/// `0` vs `1`).
pub fn overlap_distance(a: &[i8], b: &[i8], w: &FeatureWeights) -> Result<f64, MblError> {
    if a.len() != b.len() || a.len() != w.len() {
        return Err(MblError::LengthMismatch {
            expected: a.len(),
            found: if b.len() != a.len() { b.len() } else { w.len() },
        });
    }
    Ok(overlap_unchecked(a, b, &w.0))
}

/// (distance, instance index) pairs sorted by distance then index.
fn sorted_distances(
    base: &InstanceBase,
    weights: &FeatureWeights,
    query: &[i8],
) -> Result<Vec<(f64, usize)>, MblError> {
    let expected = base.vector_len();
    if query.len() != expected || weights.len() != expected {
        return Err(MblError::LengthMismatch {
            expected,
            found: if query.len() != expected {
                query.len()
            } else {
                weights.len()
            },
        });
    }
    let mut pairs: Vec<(f64, usize)> = base
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (overlap_unchecked(query, &v.values, &weights.0), i))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    Ok(pairs)
}

/// Predicts from pre-sorted distances. The neighborhood is the instances at
/// the k smallest distinct distances (or the k nearest instances with
/// boundary ties included); prediction is the tie-broken neighborhood
/// majority.
fn predict_sorted(
    base: &InstanceBase,
    config: &KnnConfig,
    sorted: &[(f64, usize)],
) -> StanceLabel {
    let boundary_index = match config.neighbor_semantics {
        NeighborSemantics::KNearestDistances => {
            let mut distinct = 0;
            let mut last = f64::NAN;
            let mut end = sorted.len();
            for (i, &(d, _)) in sorted.iter().enumerate() {
                if distinct == 0 || d != last {
                    distinct += 1;
                    last = d;
                    if distinct > config.k {
                        end = i;
                        break;
                    }
                }
            }
            end
        }
        NeighborSemantics::KNearestInstances => {
            let k = config.k.min(sorted.len());
            let boundary = sorted[k - 1].0;
            sorted.partition_point(|&(d, _)| d <= boundary)
        }
    };
    let mut tallies = [0usize; 3];
    for &(_, idx) in &sorted[..boundary_index] {
        tallies[base.vectors[idx].label.tie_rank()] += 1;
    }
    StanceLabel::TIE_ORDER
        .into_iter()
        .max_by(|&a, &b| {
            let key = |l: StanceLabel| {
                (
                    tallies[l.tie_rank()],
                    base.class_frequencies[l.tie_rank()],
                    std::cmp::Reverse(l.tie_rank()),
                )
            };
            key(a).cmp(&key(b))
        })
        .expect("three labels")
}

/// Classifies a query vector against the instance base.
pub fn classify(
    base: &InstanceBase,
    config: &KnnConfig,
    weights: &FeatureWeights,
    query: &[i8],
) -> Result<StanceLabel, MblError> {
    if config.k == 0 {
        return Err(MblError::ZeroK);
    }
    let sorted = sorted_distances(base, weights, query)?;
    Ok(predict_sorted(base, config, &sorted))
}

/// Accuracy across a list of k values. Distances are computed once per test
/// vector and reused for every k.
pub fn sweep_k(
    base: &InstanceBase,
    config: &KnnConfig,
    weights: &FeatureWeights,
    test: &[FeatureVector],
    k_values: &[usize],
) -> Result<Vec<(usize, f64)>, MblError> {
    let sorted: Vec<(Vec<(f64, usize)>, StanceLabel)> = test
        .iter()
        .map(|v| Ok((sorted_distances(base, weights, &v.values)?, v.label)))
        .collect::<Result<_, MblError>>()?;
    let mut results = Vec::with_capacity(k_values.len());
    for &k in k_values {
        if k == 0 {
            return Err(MblError::ZeroK);
        }
        let config = KnnConfig { k, ..*config };
        let correct = sorted
            .iter()
            .filter(|(s, label)| predict_sorted(base, &config, s) == *label)
            .count();
        let accuracy = if test.is_empty() {
            0.0
        } else {
            correct as f64 / test.len() as f64
        };
        results.push((k, accuracy));
    }
    Ok(results)
}

const MODEL_HEADER: &str = "stance-knn v1";

/// Serializes config, weights, and the instance base as a versioned text
/// file.
pub fn save_knn_model(
    base: &InstanceBase,
    config: &KnnConfig,
    weights: &FeatureWeights,
    path: impl AsRef<Path>,
) -> Result<(), MblError> {
    let path = path.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let _ = writeln!(out, "k {}", config.k);
    let _ = writeln!(
        out,
        "weighting {}",
        match config.weighting {
            Weighting::None => "none",
            Weighting::GainRatio => "gain_ratio",
        }
    );
    let _ = writeln!(
        out,
        "neighbor-semantics {}",
        match config.neighbor_semantics {
            NeighborSemantics::KNearestDistances => "k_nearest_distances",
            NeighborSemantics::KNearestInstances => "k_nearest_instances",
        }
    );
    let _ = writeln!(out, "weights {}", weights.len());
    for w in &weights.0 {
        let _ = writeln!(out, "{w}");
    }
    let _ = writeln!(out, "instances {}", base.len());
    for v in base.vectors() {
        let mut fields: Vec<String> = v.values.iter().map(|x| x.to_string()).collect();
        fields.push(v.label.to_string());
        let _ = writeln!(out, "{}", fields.join(","));
    }
    std::fs::write(path, out).map_err(|source| MblError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a model saved by [`save_knn_model`].
pub fn load_knn_model(
    path: impl AsRef<Path>,
) -> Result<(InstanceBase, KnnConfig, FeatureWeights), MblError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MblError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let bad = |line: usize, message: &str| MblError::BadModel {
        line,
        message: message.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| bad(0, &format!("unexpected end of file, wanted {what}")))
    };

    let (i, header) = next("header")?;
    if header != MODEL_HEADER {
        return Err(bad(i + 1, "unrecognized model header"));
    }
    let (i, k_line) = next("k")?;
    let k: usize = k_line
        .strip_prefix("k ")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(i + 1, "expected `k <value>`"))?;
    let (i, w_line) = next("weighting")?;
    let weighting = match w_line.strip_prefix("weighting ") {
        Some("none") => Weighting::None,
        Some("gain_ratio") => Weighting::GainRatio,
        _ => return Err(bad(i + 1, "expected `weighting none|gain_ratio`")),
    };
    let (i, s_line) = next("neighbor-semantics")?;
    let neighbor_semantics = match s_line.strip_prefix("neighbor-semantics ") {
        Some("k_nearest_distances") => NeighborSemantics::KNearestDistances,
        Some("k_nearest_instances") => NeighborSemantics::KNearestInstances,
        _ => return Err(bad(i + 1, "bad neighbor-semantics")),
    };
    let (i, count_line) = next("weights")?;
    let n_weights: usize = count_line
        .strip_prefix("weights ")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(i + 1, "expected `weights <count>`"))?;
    let mut weight_values = Vec::with_capacity(n_weights);
    for _ in 0..n_weights {
        let (i, line) = next("weight value")?;
        weight_values.push(
            line.parse::<f64>()
                .map_err(|_| bad(i + 1, "weight is not a number"))?,
        );
    }
    let (i, count_line) = next("instances")?;
    let n_instances: usize = count_line
        .strip_prefix("instances ")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(i + 1, "expected `instances <count>`"))?;
    let mut vectors = Vec::with_capacity(n_instances);
    for _ in 0..n_instances {
        let (i, line) = next("instance line")?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n_weights + 1 {
            return Err(bad(i + 1, "instance row length mismatch"));
        }
        let values = fields[..n_weights]
            .iter()
            .map(|f| f.parse::<i8>())
            .collect::<Result<Vec<i8>, _>>()
            .map_err(|_| bad(i + 1, "bad feature value"))?;
        let label: StanceLabel = fields[n_weights]
            .parse()
            .map_err(|_| bad(i + 1, "bad label"))?;
        vectors.push(FeatureVector { values, label });
    }
    let base = fit(vectors)?;
    let config = KnnConfig {
        k,
        weighting,
        neighbor_semantics,
        tie_break: TieBreak::default(),
    };
    Ok((base, config, FeatureWeights(weight_values)))
}
