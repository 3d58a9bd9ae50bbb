//! Domain data model shared by all modules: datasets, pool partitions,
//! prediction sample sets, and the categorical-distribution primitive.
//!
//! All entropies in this crate are in nats. Class labels are dense integers
//! `0..C-1`; string labels from external files are mapped at ingestion.

use std::collections::BTreeSet;

use ndarray::{Array2, Array3, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, PROB_EPS};

/// `ln` with the probability clamp applied first; dropout nets can emit
/// exact zeros.
pub(crate) fn clamped_ln(p: f64) -> f64 {
    p.clamp(PROB_EPS, 1.0).ln()
}

/// A fixed universe of points an active-learning run draws from.
///
/// Point ids are row indices `0..N-1` into `features` and `labels`.
#[derive(Debug, Clone)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<usize>,
    num_classes: usize,
    /// Original label names when ingested from text; `None` for synthetic data.
    label_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(features: Array2<f64>, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        Self::with_label_names(features, labels, num_classes, None)
    }

    pub fn with_label_names(
        features: Array2<f64>,
        labels: Vec<usize>,
        num_classes: usize,
        label_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if features.nrows() == 0 || features.ncols() == 0 {
            return Err(Error::InvalidArgument(
                "dataset needs at least one point and one feature dimension".into(),
            ));
        }
        if num_classes < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 classes, got {num_classes}"
            )));
        }
        if labels.len() != features.nrows() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: features.nrows(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&c| c >= num_classes) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        if !features.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "features contain non-finite entries".into(),
            ));
        }
        if let Some(names) = &label_names {
            if names.len() != num_classes {
                return Err(Error::LengthMismatch {
                    left: names.len(),
                    right: num_classes,
                });
            }
        }
        Ok(Self {
            features,
            labels,
            num_classes,
            label_names,
        })
    }

    pub fn num_points(&self) -> usize {
        self.features.nrows()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn feature_row(&self, id: usize) -> ArrayView1<'_, f64> {
        self.features.row(id)
    }

    /// Ground-truth label; this is what the oracle reveals.
    pub fn label(&self, id: usize) -> usize {
        self.labels[id]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    /// Rows of `features` for the given ids, in order.
    pub fn features_for(&self, ids: &[usize]) -> Array2<f64> {
        let mut out = Array2::zeros((ids.len(), self.dim()));
        for (row, &id) in ids.iter().enumerate() {
            out.row_mut(row).assign(&self.features.row(id));
        }
        out
    }
}

/// Partition of dataset ids into labeled (with acquisition order), unlabeled,
/// and test sets. Mutated only by the simulator's orchestration thread.
#[derive(Debug, Clone)]
pub struct PoolState {
    labeled: Vec<(usize, usize)>,
    unlabeled: BTreeSet<usize>,
    test: BTreeSet<usize>,
    round: usize,
}

impl PoolState {
    /// Start a run: everything outside `test` is unlabeled.
    pub fn new(test: BTreeSet<usize>, unlabeled: BTreeSet<usize>) -> Result<Self> {
        if let Some(overlap) = test.intersection(&unlabeled).next() {
            return Err(Error::InvalidArgument(format!(
                "id {overlap} in both test and unlabeled sets"
            )));
        }
        Ok(Self {
            labeled: Vec::new(),
            unlabeled,
            test,
            round: 0,
        })
    }

    /// Labeled (id, class) pairs in acquisition order.
    pub fn labeled(&self) -> &[(usize, usize)] {
        &self.labeled
    }

    pub fn labeled_ids(&self) -> Vec<usize> {
        self.labeled.iter().map(|&(id, _)| id).collect()
    }

    pub fn labeled_classes(&self) -> Vec<usize> {
        self.labeled.iter().map(|&(_, c)| c).collect()
    }

    pub fn unlabeled(&self) -> &BTreeSet<usize> {
        &self.unlabeled
    }

    pub fn unlabeled_ids(&self) -> Vec<usize> {
        self.unlabeled.iter().copied().collect()
    }

    pub fn test(&self) -> &BTreeSet<usize> {
        &self.test
    }

    pub fn test_ids(&self) -> Vec<usize> {
        self.test.iter().copied().collect()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn advance_round(&mut self) {
        self.round += 1;
    }

    /// Move `ids` from the unlabeled set to the end of the labeled list,
    /// attaching the dataset's ground-truth labels. The oracle never lies.
    pub fn acquire(&mut self, ids: &[usize], dataset: &Dataset) -> Result<()> {
        for &id in ids {
            if !self.unlabeled.remove(&id) {
                return Err(Error::InvalidArgument(format!(
                    "id {id} is not in the unlabeled pool"
                )));
            }
            self.labeled.push((id, dataset.label(id)));
        }
        Ok(())
    }

    /// Check disjointness, coverage, and oracle truthfulness against the
    /// dataset. Used by tests after every mutation.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &(id, class) in &self.labeled {
            if !seen.insert(id) {
                return Err(Error::InvalidArgument(format!("id {id} labeled twice")));
            }
            if class != dataset.label(id) {
                return Err(Error::InvalidArgument(format!(
                    "labeled class {class} disagrees with ground truth for id {id}"
                )));
            }
        }
        for &id in &self.unlabeled {
            if !seen.insert(id) {
                return Err(Error::InvalidArgument(format!(
                    "id {id} in labeled and unlabeled sets"
                )));
            }
        }
        for &id in &self.test {
            if !seen.insert(id) {
                return Err(Error::InvalidArgument(format!(
                    "id {id} in test and another set"
                )));
            }
        }
        if seen.len() != dataset.num_points() || seen.last() != Some(&(dataset.num_points() - 1)) {
            return Err(Error::InvalidArgument(
                "pool partition does not cover the dataset".into(),
            ));
        }
        Ok(())
    }
}

/// A probability vector over `C` classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalDistribution {
    probs: Vec<f64>,
}

impl CategoricalDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no classes".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "entry {bad} outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_classes(&self) -> usize {
        self.probs.len()
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// Shannon entropy in nats, with `0 ln 0 = 0`. Lies in `[0, ln C]`.
    pub fn shannon_entropy(&self) -> f64 {
        shannon_entropy_raw(&self.probs)
    }
}

/// Shannon entropy of a probability slice in nats; `0 ln 0 = 0`.
pub(crate) fn shannon_entropy_raw(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .map(|&p| if p > 0.0 { -p * clamped_ln(p) } else { 0.0 })
        .sum();
    h.max(0.0)
}

/// Fraction of `labels` falling in each class.
pub fn empirical_class_distribution(
    labels: &[usize],
    num_classes: usize,
) -> Result<CategoricalDistribution> {
    if labels.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    let mut counts = vec![0usize; num_classes];
    for &c in labels {
        if c >= num_classes {
            return Err(Error::InvalidArgument(format!(
                "label {c} out of range for {num_classes} classes"
            )));
        }
        counts[c] += 1;
    }
    let n = labels.len() as f64;
    CategoricalDistribution::new(counts.into_iter().map(|k| k as f64 / n).collect())
}

/// `S` Monte Carlo dropout forward passes over `M` points: an `S x M x C`
/// tensor where each `(s, m)` slice is a categorical distribution.
#[derive(Debug, Clone)]
pub struct ProbabilitySampleSet {
    samples: Array3<f64>,
}

impl ProbabilitySampleSet {
    pub fn new(samples: Array3<f64>) -> Result<Self> {
        let (s, m, c) = samples.dim();
        if s == 0 || m == 0 || c == 0 {
            return Err(Error::InvalidArgument(
                "sample set needs S >= 1, M >= 1, C >= 1".into(),
            ));
        }
        for si in 0..s {
            for mi in 0..m {
                let row = samples.slice(ndarray::s![si, mi, ..]);
                let sum: f64 = row.sum();
                if !(row.iter().all(|p| (-1e-12..=1.0 + 1e-12).contains(p))
                    && (sum - 1.0).abs() <= 1e-9)
                {
                    return Err(Error::InvalidDistribution(format!(
                        "slice ({si}, {mi}) is not a probability vector (sum {sum})"
                    )));
                }
            }
        }
        Ok(Self { samples })
    }

    pub fn num_samples(&self) -> usize {
        self.samples.dim().0
    }

    pub fn num_points(&self) -> usize {
        self.samples.dim().1
    }

    pub fn num_classes(&self) -> usize {
        self.samples.dim().2
    }

    pub fn samples(&self) -> &Array3<f64> {
        &self.samples
    }

    /// Probability of class `c` for point `m` in pass `s`.
    pub fn prob(&self, s: usize, m: usize, c: usize) -> f64 {
        self.samples[[s, m, c]]
    }
}

/// `S` hard label vectors of length `N`: samples of the pool-wide label
/// assignment whose Vendi entropy the VIG policy measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVectorSet {
    vectors: Array2<usize>,
}

impl LabelVectorSet {
    pub fn new(vectors: Array2<usize>) -> Result<Self> {
        if vectors.nrows() == 0 || vectors.ncols() == 0 {
            return Err(Error::InvalidArgument(
                "label vector set needs S >= 1 and N >= 1".into(),
            ));
        }
        Ok(Self { vectors })
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let s = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "label vectors have unequal lengths".into(),
            ));
        }
        if s == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "label vector set needs S >= 1 and N >= 1".into(),
            ));
        }
        let flat: Vec<usize> = rows.into_iter().flatten().collect();
        let vectors = Array2::from_shape_vec((s, n), flat)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(Self { vectors })
    }

    /// Check every entry is a valid class id.
    pub fn validate_classes(&self, num_classes: usize) -> Result<()> {
        if let Some(bad) = self.vectors.iter().find(|&&c| c >= num_classes) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        Ok(())
    }

    pub fn num_samples(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vector_length(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vector(&self, s: usize) -> ArrayView1<'_, usize> {
        self.vectors.row(s)
    }

    pub fn vectors(&self) -> &Array2<usize> {
        &self.vectors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use proptest::prelude::*;

    fn tiny_dataset() -> Dataset {
        let features = array![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        Dataset::new(features, vec![0, 0, 1, 1], 2).unwrap()
    }

    #[test]
    fn dataset_rejects_bad_labels_and_nonfinite_features() {
        let features = array![[0.0, 1.0], [2.0, 3.0]];
        assert!(Dataset::new(features.clone(), vec![0, 2], 2).is_err());
        let nan = array![[f64::NAN, 1.0], [2.0, 3.0]];
        assert!(Dataset::new(nan, vec![0, 1], 2).is_err());
        assert!(Dataset::new(features, vec![0, 0], 1).is_err());
    }

    #[test]
    fn pool_acquire_appends_in_order_and_validates() {
        let ds = tiny_dataset();
        let mut pool = PoolState::new([3].into(), [0, 1, 2].into()).unwrap();
        pool.validate(&ds).unwrap();
        pool.acquire(&[2, 0], &ds).unwrap();
        pool.validate(&ds).unwrap();
        assert_eq!(pool.labeled(), &[(2, 1), (0, 0)]);
        assert_eq!(pool.unlabeled_ids(), vec![1]);
        // acquiring a test id is refused
        assert!(pool.acquire(&[3], &ds).is_err());
    }

    #[test]
    fn pool_rejects_overlapping_partition() {
        assert!(PoolState::new([1].into(), [1, 2].into()).is_err());
    }

    #[test]
    fn empirical_distribution_counts() {
        let d = empirical_class_distribution(&[0, 0, 1, 1], 2).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);

        let d = empirical_class_distribution(&[2, 2, 2], 3).unwrap();
        assert_eq!(d.probs(), &[0.0, 0.0, 1.0]);

        // counted by hand: 1/4, 2/4, 1/4
        let d = empirical_class_distribution(&[0, 1, 1, 2], 3).unwrap();
        assert_eq!(d.probs(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn empirical_distribution_rejects_empty() {
        assert!(matches!(
            empirical_class_distribution(&[], 2),
            Err(Error::EmptyLabelSet)
        ));
    }

    #[test]
    fn shannon_entropy_reference_values() {
        let h = CategoricalDistribution::new(vec![1.0, 0.0])
            .unwrap()
            .shannon_entropy();
        assert_abs_diff_eq!(h, 0.0, epsilon = 1e-12);

        let h = CategoricalDistribution::new(vec![0.5, 0.5])
            .unwrap()
            .shannon_entropy();
        assert_abs_diff_eq!(h, std::f64::consts::LN_2, epsilon = 1e-12);

        let h = CategoricalDistribution::new(vec![0.2; 5])
            .unwrap()
            .shannon_entropy();
        assert_abs_diff_eq!(h, 5.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn distribution_validation() {
        assert!(CategoricalDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(CategoricalDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(CategoricalDistribution::new(vec![]).is_err());
    }

    #[test]
    fn sample_set_shape_and_validation() {
        let mut t = Array3::zeros((2, 3, 2));
        t.slice_mut(ndarray::s![.., .., 0]).fill(1.0);
        let set = ProbabilitySampleSet::new(t).unwrap();
        assert_eq!(set.num_samples(), 2);
        assert_eq!(set.num_points(), 3);
        assert_eq!(set.num_classes(), 2);

        let bad = Array3::from_elem((1, 1, 2), 0.3);
        assert!(ProbabilitySampleSet::new(bad).is_err());
    }

    #[test]
    fn label_vector_set_from_rows() {
        let set = LabelVectorSet::from_rows(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(set.num_samples(), 2);
        assert_eq!(set.vector_length(), 3);
        set.validate_classes(3).unwrap();
        assert!(set.validate_classes(2).is_err());
        assert!(LabelVectorSet::from_rows(vec![vec![0, 1], vec![0]]).is_err());
        assert!(LabelVectorSet::from_rows(vec![]).is_err());
    }

    proptest! {
        // Uniform maximizes entropy: H(random) <= ln C.
        #[test]
        fn entropy_bounded_by_uniform(raw in prop::collection::vec(1e-6..1.0f64, 2..8)) {
            let sum: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|p| p / sum).collect();
            let c = probs.len() as f64;
            let h = shannon_entropy_raw(&probs);
            prop_assert!(h <= c.ln() + 1e-12);
            prop_assert!(h >= 0.0);
        }

        // empirical_class_distribution output always satisfies the
        // CategoricalDistribution invariants (constructor re-checks them).
        #[test]
        fn empirical_distribution_is_valid(
            labels in prop::collection::vec(0usize..4, 1..40)
        ) {
            let d = empirical_class_distribution(&labels, 4).unwrap();
            let sum: f64 = d.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            prop_assert!(d.probs().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn entropy_of_1000_random_distributions_bounded() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let c = rng.gen_range(2..=8);
            let raw: Vec<f64> = (0..c).map(|_| rng.gen_range(1e-9..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|p| p / sum).collect();
            assert!(shannon_entropy_raw(&probs) <= (c as f64).ln() + 1e-12);
        }
    }
}
