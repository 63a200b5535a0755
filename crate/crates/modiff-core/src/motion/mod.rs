//! Skeleton motion sequences and datasets.
//!
//! A motion sequence is an f-frame series of J-joint 3D poses stored as an
//! `(f, J, 3)` array. For the denoiser it is viewed as a 3-channel J×f image
//! (one channel per spatial coordinate). Datasets carry per-channel z-score
//! stats so normalization can be inverted exactly after sampling.

mod io;
mod synth;

pub use io::{load_dataset, load_dataset_from, save_dataset, save_dataset_to};
pub use synth::{noise_dataset, synth_dataset, synth_generate, SynthConfig};

use ndarray::{Array3, Axis};

use crate::error::{Error, Result};

pub(crate) const CHANNEL_NAMES: [char; 3] = ['x', 'y', 'z'];

/// Tensor view of a motion sequence: shape `(3, J, f)`.
pub type ImageTensor = Array3<f64>;

/// Skeleton topology: a joint count and a tree of parent→child edges rooted
/// at joint 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonSpec {
    joint_count: usize,
    edges: Vec<(usize, usize)>,
    joint_names: Option<Vec<String>>,
}

impl SkeletonSpec {
    /// Validates that `edges` form a tree over `joint_count` joints rooted at
    /// joint 0: exactly J−1 edges, all indices in range, every joint reachable.
    pub fn new(joint_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if joint_count < 2 {
            return Err(Error::InvalidSkeleton(format!(
                "need at least 2 joints, got {joint_count}"
            )));
        }
        if edges.len() != joint_count - 1 {
            return Err(Error::InvalidSkeleton(format!(
                "expected {} edges for {} joints, got {}",
                joint_count - 1,
                joint_count,
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); joint_count];
        for &(a, b) in &edges {
            if a >= joint_count || b >= joint_count {
                return Err(Error::InvalidSkeleton(format!(
                    "edge ({a}, {b}) references joint >= {joint_count}"
                )));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        // Reachability from the root; with J-1 edges this implies a tree.
        let mut seen = vec![false; joint_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(j) = stack.pop() {
            for &n in &adjacency[j] {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSkeleton(
                "edge set does not connect all joints to the root".into(),
            ));
        }
        Ok(Self {
            joint_count,
            edges,
            joint_names: None,
        })
    }

    /// A simple kinematic chain 0−1−…−(J−1).
    pub fn chain(joint_count: usize) -> Result<Self> {
        let edges = (0..joint_count.saturating_sub(1)).map(|j| (j, j + 1)).collect();
        Self::new(joint_count, edges)
    }

    pub fn with_joint_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.joint_count {
            return Err(Error::InvalidSkeleton(format!(
                "expected {} joint names, got {}",
                self.joint_count,
                names.len()
            )));
        }
        self.joint_names = Some(names);
        Ok(self)
    }

    pub fn joint_count(&self) -> usize {
        self.joint_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn joint_names(&self) -> Option<&[String]> {
        self.joint_names.as_deref()
    }
}

/// Class label in `[0, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionLabel(pub usize);

impl ActionLabel {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn check(self, classes: usize) -> Result<Self> {
        if self.0 >= classes {
            return Err(Error::LabelOutOfRange {
                id: self.0,
                classes,
            });
        }
        Ok(self)
    }
}

/// An f-frame motion sequence with coords of shape `(f, J, 3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSequence {
    coords: Array3<f64>,
}

impl MotionSequence {
    pub fn new(coords: Array3<f64>) -> Result<Self> {
        let (frames, _joints, channels) = coords.dim();
        if frames == 0 || channels != 3 {
            return Err(Error::ShapeMismatch {
                what: "motion coords",
                expected: "(f >= 1, J, 3)".into(),
                actual: format!("{:?}", coords.dim()),
            });
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("motion coords"));
        }
        Ok(Self { coords })
    }

    pub fn frames(&self) -> usize {
        self.coords.dim().0
    }

    pub fn joints(&self) -> usize {
        self.coords.dim().1
    }

    pub fn coords(&self) -> &Array3<f64> {
        &self.coords
    }

    /// Image view: `out[c][j][t] = coords[t][j][c]`, shape `(3, J, f)`.
    pub fn to_image(&self) -> ImageTensor {
        let (frames, joints, _) = self.coords.dim();
        let mut img = Array3::zeros((3, joints, frames));
        for t in 0..frames {
            for j in 0..joints {
                for c in 0..3 {
                    img[(c, j, t)] = self.coords[(t, j, c)];
                }
            }
        }
        img
    }

    /// Exact inverse of [`MotionSequence::to_image`].
    pub fn from_image(img: &ImageTensor) -> Result<Self> {
        let (channels, joints, frames) = img.dim();
        if channels != 3 || frames == 0 {
            return Err(Error::ShapeMismatch {
                what: "image tensor",
                expected: "(3, J, f >= 1)".into(),
                actual: format!("{:?}", img.dim()),
            });
        }
        let mut coords = Array3::zeros((frames, joints, 3));
        for t in 0..frames {
            for j in 0..joints {
                for c in 0..3 {
                    coords[(t, j, c)] = img[(c, j, t)];
                }
            }
        }
        Self::new(coords)
    }
}

/// Per-channel z-score statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormStats {
    pub mean: [f64; 3],
    pub std: [f64; 3],
}

impl NormStats {
    pub fn identity() -> Self {
        Self {
            mean: [0.0; 3],
            std: [1.0; 3],
        }
    }

    pub fn apply(&self, seq: &MotionSequence) -> Result<MotionSequence> {
        let mut coords = seq.coords.clone();
        for c in 0..3 {
            coords
                .index_axis_mut(Axis(2), c)
                .mapv_inplace(|v| (v - self.mean[c]) / self.std[c]);
        }
        MotionSequence::new(coords)
    }

    pub fn invert(&self, seq: &MotionSequence) -> Result<MotionSequence> {
        let mut coords = seq.coords.clone();
        for c in 0..3 {
            coords
                .index_axis_mut(Axis(2), c)
                .mapv_inplace(|v| v * self.std[c] + self.mean[c]);
        }
        MotionSequence::new(coords)
    }
}

/// A set of labeled motion sequences sharing one geometry, together with the
/// normalization state.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    spec: SkeletonSpec,
    frames: usize,
    class_count: usize,
    items: Vec<(MotionSequence, ActionLabel)>,
    norm: NormStats,
    stats_applied: bool,
}

impl LabeledDataset {
    pub fn new(spec: SkeletonSpec, frames: usize, class_count: usize) -> Self {
        Self {
            spec,
            frames,
            class_count,
            items: Vec::new(),
            norm: NormStats::identity(),
            stats_applied: false,
        }
    }

    pub fn push(&mut self, seq: MotionSequence, label: ActionLabel) -> Result<()> {
        if seq.frames() != self.frames || seq.joints() != self.spec.joint_count() {
            return Err(Error::ShapeMismatch {
                what: "sequence geometry",
                expected: format!("(f = {}, J = {})", self.frames, self.spec.joint_count()),
                actual: format!("(f = {}, J = {})", seq.frames(), seq.joints()),
            });
        }
        label.check(self.class_count)?;
        self.items.push((seq, label));
        Ok(())
    }

    pub fn spec(&self) -> &SkeletonSpec {
        &self.spec
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn joints(&self) -> usize {
        self.spec.joint_count()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(MotionSequence, ActionLabel)] {
        &self.items
    }

    pub fn norm_stats(&self) -> NormStats {
        self.norm
    }

    pub fn stats_applied(&self) -> bool {
        self.stats_applied
    }

    /// Sets pre-computed stats on a dataset already expressed in the
    /// normalized domain, e.g. sampler output.
    pub fn with_applied_stats(mut self, norm: NormStats) -> Self {
        self.norm = norm;
        self.stats_applied = true;
        self
    }

    /// Fits per-channel mean and population standard deviation over every
    /// frame, joint, and sequence, and returns the z-scored dataset with the
    /// stats stored for exact inversion.
    pub fn normalize(&self) -> Result<LabeledDataset> {
        if self.items.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if self.stats_applied {
            return Err(Error::StatsAlreadyApplied);
        }
        let mut mean = [0.0f64; 3];
        let mut count = 0usize;
        for (seq, _) in &self.items {
            for c in 0..3 {
                mean[c] += seq.coords.index_axis(Axis(2), c).sum();
            }
            count += seq.frames() * seq.joints();
        }
        for m in &mut mean {
            *m /= count as f64;
        }
        let mut var = [0.0f64; 3];
        for (seq, _) in &self.items {
            for c in 0..3 {
                var[c] += seq
                    .coords
                    .index_axis(Axis(2), c)
                    .iter()
                    .map(|v| (v - mean[c]).powi(2))
                    .sum::<f64>();
            }
        }
        let mut std = [0.0f64; 3];
        for c in 0..3 {
            std[c] = (var[c] / count as f64).sqrt();
            if std[c] <= 0.0 {
                return Err(Error::ZeroVarianceChannel {
                    channel: CHANNEL_NAMES[c],
                });
            }
        }
        let norm = NormStats { mean, std };
        let items = self
            .items
            .iter()
            .map(|(seq, label)| Ok((norm.apply(seq)?, *label)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset {
            spec: self.spec.clone(),
            frames: self.frames,
            class_count: self.class_count,
            items,
            norm,
            stats_applied: true,
        })
    }

    /// Inverts [`LabeledDataset::normalize`] using the stored stats.
    pub fn denormalize(&self) -> Result<LabeledDataset> {
        if !self.stats_applied {
            return Err(Error::StatsNotApplied);
        }
        let items = self
            .items
            .iter()
            .map(|(seq, label)| Ok((self.norm.invert(seq)?, *label)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset {
            spec: self.spec.clone(),
            frames: self.frames,
            class_count: self.class_count,
            items,
            norm: self.norm,
            stats_applied: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn two_point_dataset() -> LabeledDataset {
        // Channel values {-1, +1} equally frequent in every channel:
        // mean 0, population std 1.
        let spec = SkeletonSpec::chain(2).unwrap();
        let mut ds = LabeledDataset::new(spec, 1, 1);
        let a = MotionSequence::new(array![[[-1.0, -1.0, -1.0], [1.0, 1.0, 1.0]]]).unwrap();
        ds.push(a, ActionLabel(0)).unwrap();
        ds
    }

    #[test]
    fn normalize_fixed_point() {
        let ds = two_point_dataset();
        let out = ds.normalize().unwrap();
        let stats = out.norm_stats();
        assert_eq!(stats.mean, [0.0; 3]);
        assert_eq!(stats.std, [1.0; 3]);
        assert_eq!(out.items()[0].0, ds.items()[0].0);
        assert!(out.stats_applied());
    }

    #[test]
    fn normalize_rejects_constant_channel() {
        let spec = SkeletonSpec::chain(2).unwrap();
        let mut ds = LabeledDataset::new(spec, 1, 1);
        let seq = MotionSequence::new(array![[[5.0, -1.0, 0.0], [5.0, 1.0, 2.0]]]).unwrap();
        ds.push(seq, ActionLabel(0)).unwrap();
        match ds.normalize() {
            Err(Error::ZeroVarianceChannel { channel }) => assert_eq!(channel, 'x'),
            other => panic!("expected zero variance error, got {other:?}"),
        }
    }

    #[test]
    fn normalize_rejects_empty_and_double_apply() {
        let spec = SkeletonSpec::chain(2).unwrap();
        let ds = LabeledDataset::new(spec, 1, 1);
        assert!(matches!(ds.normalize(), Err(Error::EmptyDataset)));
        let normalized = two_point_dataset().normalize().unwrap();
        assert!(matches!(
            normalized.normalize(),
            Err(Error::StatsAlreadyApplied)
        ));
    }

    #[test]
    fn to_image_singleton_and_shape() {
        let spec = SkeletonSpec::chain(2).unwrap();
        let _ = spec;
        let seq = MotionSequence::new(array![[[1.5, -2.0, 3.25]]]).unwrap();
        let img = seq.to_image();
        assert_eq!(img.dim(), (3, 1, 1));
        assert_eq!(img[(0, 0, 0)], 1.5);
        assert_eq!(img[(1, 0, 0)], -2.0);
        assert_eq!(img[(2, 0, 0)], 3.25);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let coords = Array3::from_shape_fn((32, 8, 3), |_| rng.random_range(-1.0..1.0));
        let seq = MotionSequence::new(coords).unwrap();
        assert_eq!(seq.to_image().dim(), (3, 8, 32));
    }

    #[test]
    fn skeleton_tree_validation() {
        assert!(SkeletonSpec::new(1, vec![]).is_err());
        // Cycle among 0-1-2 with joint 3 disconnected: right edge count,
        // wrong topology.
        assert!(SkeletonSpec::new(4, vec![(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(SkeletonSpec::new(3, vec![(0, 1), (1, 5)]).is_err());
        assert!(SkeletonSpec::new(3, vec![(0, 1)]).is_err());
        assert!(SkeletonSpec::chain(25).is_ok());
    }

    #[test]
    fn label_range_check() {
        assert!(ActionLabel(3).check(4).is_ok());
        let err = ActionLabel(99).check(4).unwrap_err();
        assert_eq!(err.to_string(), "label 99 out of range [0, 4)");
    }

    proptest! {
        #[test]
        fn image_round_trip_is_exact(seed in 0u64..256, frames in 1usize..6, joints in 2usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let coords = Array3::from_shape_fn((frames, joints, 3), |_| rng.random_range(-10.0..10.0));
            let seq = MotionSequence::new(coords).unwrap();
            let back = MotionSequence::from_image(&seq.to_image()).unwrap();
            prop_assert_eq!(&back, &seq);
        }

        #[test]
        fn normalize_denormalize_identity(seed in 0u64..256) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let spec = SkeletonSpec::chain(4).unwrap();
            let mut ds = LabeledDataset::new(spec, 5, 2);
            for i in 0..6 {
                let coords = Array3::from_shape_fn((5, 4, 3), |_| rng.random_range(-3.0..5.0));
                ds.push(MotionSequence::new(coords).unwrap(), ActionLabel(i % 2)).unwrap();
            }
            let round = ds.normalize().unwrap().denormalize().unwrap();
            for (orig, back) in ds.items().iter().zip(round.items()) {
                for (a, b) in orig.0.coords().iter().zip(back.0.coords().iter()) {
                    let scale = a.abs().max(1.0);
                    prop_assert!((a - b).abs() <= 1e-9 * scale);
                }
            }
        }
    }
}
