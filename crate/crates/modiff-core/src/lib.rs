//! Action-conditioned denoising diffusion for 3D skeleton motion.
//!
//! The crate covers the full desk-scale workflow: synthetic motion datasets,
//! cosine/linear noise schedules, the forward and reverse diffusion
//! processes over an abstract noise-prediction model, a small U-Net style
//! denoiser with hand-rolled backpropagation and Adam updates, and the
//! evaluation suite (Fréchet distance, diversity, multimodality).

pub mod denoiser;
pub mod diffusion;
pub mod error;
pub mod manifest;
pub mod metrics;
pub mod motion;
pub mod rng;
pub mod schedule;

pub use error::{Error, Result};
pub use motion::{ActionLabel, ImageTensor, LabeledDataset, MotionSequence, NormStats, SkeletonSpec};
pub use schedule::{build_schedule, NoiseSchedule, ScheduleConfig, ScheduleKind};
