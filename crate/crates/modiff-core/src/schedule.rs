//! Diffusion noise schedules.
//!
//! A schedule fixes the per-step noise variances β_1..β_T together with the
//! derived quantities α_t = 1 − β_t, the cumulative products ᾱ_t, and the
//! reverse-step noise scales σ_t. The cosine schedule follows the squared
//! cosine profile with a small offset `s`; β values are clipped and ᾱ is then
//! recomputed from the clipped β so the telescoping product is exact.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of diffusion steps. Desk-scale pipelines typically use 50.
pub const DEFAULT_STEPS: usize = 1000;
/// Default cosine offset.
pub const DEFAULT_COSINE_S: f64 = 0.008;
/// Default β clipping bounds.
pub const DEFAULT_BETA_CLIP: (f64, f64) = (1e-8, 0.999);
/// Default endpoints for the linear schedule.
pub const DEFAULT_LINEAR_RANGE: (f64, f64) = (1e-4, 0.02);

/// Schedule family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Cosine,
    Linear,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Cosine => "cosine",
            ScheduleKind::Linear => "linear",
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(ScheduleKind::Cosine),
            "linear" => Ok(ScheduleKind::Linear),
            other => Err(Error::InvalidSchedule(format!(
                "unknown kind {other:?} (valid kinds: cosine, linear)"
            ))),
        }
    }
}

/// How σ_t is derived from the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaKind {
    /// σ_t² = β_t.
    #[default]
    Beta,
    /// σ_t² = β̃_t = β_t · (1 − ᾱ_{t−1}) / (1 − ᾱ_t), the posterior variance.
    Posterior,
}

/// Parameters for [`build_schedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleConfig {
    pub kind: ScheduleKind,
    pub steps: usize,
    /// Cosine offset; ignored by the linear schedule.
    pub s: f64,
    pub beta_clip: (f64, f64),
    /// Linear β endpoints; ignored by the cosine schedule.
    pub linear_range: (f64, f64),
    pub sigma: SigmaKind,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            kind: ScheduleKind::Cosine,
            steps: DEFAULT_STEPS,
            s: DEFAULT_COSINE_S,
            beta_clip: DEFAULT_BETA_CLIP,
            linear_range: DEFAULT_LINEAR_RANGE,
            sigma: SigmaKind::Beta,
        }
    }
}

impl ScheduleConfig {
    pub fn cosine(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn linear(steps: usize) -> Self {
        Self {
            kind: ScheduleKind::Linear,
            steps,
            ..Self::default()
        }
    }
}

/// A fully built noise schedule. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    config: ScheduleConfig,
    /// β_1..β_T, indexed by t−1.
    betas: Vec<f64>,
    /// α_1..α_T, indexed by t−1.
    alphas: Vec<f64>,
    /// ᾱ_0..ᾱ_T, indexed by t; ᾱ_0 = 1.
    alpha_bars: Vec<f64>,
    /// σ_1..σ_T, indexed by t−1.
    sigmas: Vec<f64>,
}

/// ᾱ_t of the cosine schedule: f(t)/f(0) with
/// f(t) = cos(((t/T + s)/(1 + s)) · π/2)².
///
/// The endpoints are pinned to their analytic values 1 (t = 0) and 0 (t = T)
/// rather than left to floating-point cosine round-off.
pub fn cosine_alpha_bar(t: usize, steps: usize, s: f64) -> Result<f64> {
    if t > steps {
        return Err(Error::TimeStepOutOfRange {
            t,
            min: 0,
            max: steps,
        });
    }
    if !(s > 0.0) {
        return Err(Error::InvalidSchedule(format!("offset s must be > 0, got {s}")));
    }
    if t == 0 {
        return Ok(1.0);
    }
    if t == steps {
        return Ok(0.0);
    }
    let f = |u: f64| -> f64 {
        let angle = (u + s) / (1.0 + s) * FRAC_PI_2;
        angle.cos().powi(2)
    };
    Ok(f(t as f64 / steps as f64) / f(0.0))
}

/// Builds a schedule from `config`, validating the result.
pub fn build_schedule(config: &ScheduleConfig) -> Result<NoiseSchedule> {
    if config.steps == 0 {
        return Err(Error::InvalidSchedule("steps must be >= 1".into()));
    }
    let (lo, hi) = config.beta_clip;
    if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
        return Err(Error::InvalidSchedule(format!(
            "beta clip bounds must satisfy 0 < min <= max < 1, got ({lo}, {hi})"
        )));
    }
    let steps = config.steps;

    let mut betas = Vec::with_capacity(steps);
    match config.kind {
        ScheduleKind::Cosine => {
            let mut prev = cosine_alpha_bar(0, steps, config.s)?;
            for t in 1..=steps {
                let cur = cosine_alpha_bar(t, steps, config.s)?;
                betas.push((1.0 - cur / prev).clamp(lo, hi));
                prev = cur;
            }
        }
        ScheduleKind::Linear => {
            let (start, end) = config.linear_range;
            if !(start > 0.0 && end < 1.0 && start <= end) {
                return Err(Error::InvalidSchedule(format!(
                    "linear endpoints must satisfy 0 < start <= end < 1, got ({start}, {end})"
                )));
            }
            for t in 1..=steps {
                let frac = if steps == 1 {
                    0.0
                } else {
                    (t - 1) as f64 / (steps - 1) as f64
                };
                betas.push((start + (end - start) * frac).clamp(lo, hi));
            }
        }
    }

    // ᾱ is recomputed from the clipped β so telescoping holds exactly.
    let alphas: Vec<f64> = betas.iter().map(|b| 1.0 - b).collect();
    let mut alpha_bars = Vec::with_capacity(steps + 1);
    alpha_bars.push(1.0);
    let mut prod = 1.0;
    for &a in &alphas {
        prod *= a;
        alpha_bars.push(prod);
    }

    let sigmas: Vec<f64> = match config.sigma {
        SigmaKind::Beta => betas.iter().map(|b| b.sqrt()).collect(),
        SigmaKind::Posterior => (1..=steps)
            .map(|t| {
                let var = betas[t - 1] * (1.0 - alpha_bars[t - 1]) / (1.0 - alpha_bars[t]);
                var.sqrt()
            })
            .collect(),
    };

    let schedule = NoiseSchedule {
        config: config.clone(),
        betas,
        alphas,
        alpha_bars,
        sigmas,
    };
    schedule.validate()?;
    Ok(schedule)
}

impl NoiseSchedule {
    /// Number of diffusion steps T.
    pub fn steps(&self) -> usize {
        self.config.steps
    }

    pub fn kind(&self) -> ScheduleKind {
        self.config.kind
    }

    pub fn config(&self) -> &ScheduleConfig {
        &self.config
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t < 1 || t > self.steps() {
            return Err(Error::TimeStepOutOfRange {
                t,
                min: 1,
                max: self.steps(),
            });
        }
        Ok(())
    }

    /// β_t for t in [1, T].
    pub fn beta(&self, t: usize) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.betas[t - 1])
    }

    /// α_t = 1 − β_t for t in [1, T].
    pub fn alpha(&self, t: usize) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.alphas[t - 1])
    }

    /// ᾱ_t for t in [0, T]; ᾱ_0 = 1.
    pub fn alpha_bar(&self, t: usize) -> Result<f64> {
        if t > self.steps() {
            return Err(Error::TimeStepOutOfRange {
                t,
                min: 0,
                max: self.steps(),
            });
        }
        Ok(self.alpha_bars[t])
    }

    /// σ_t for t in [1, T].
    pub fn sigma(&self, t: usize) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.sigmas[t - 1])
    }

    /// Signal-to-noise ratio ᾱ_t / (1 − ᾱ_t) for t in [1, T].
    pub fn snr(&self, t: usize) -> Result<f64> {
        self.check_t(t)?;
        let ab = self.alpha_bars[t];
        Ok(ab / (1.0 - ab))
    }

    /// Builds a schedule directly from raw β values, without clipping.
    ///
    /// Test-only escape hatch for exercising boundary cases (β = 0, β = 1)
    /// that the clipped public constructor rules out.
    #[doc(hidden)]
    pub fn from_raw_betas(betas: Vec<f64>) -> Self {
        let alphas: Vec<f64> = betas.iter().map(|b| 1.0 - b).collect();
        let mut alpha_bars = vec![1.0];
        let mut prod = 1.0;
        for &a in &alphas {
            prod *= a;
            alpha_bars.push(prod);
        }
        let sigmas = betas.iter().map(|b| b.sqrt()).collect();
        NoiseSchedule {
            config: ScheduleConfig {
                steps: betas.len(),
                ..ScheduleConfig::default()
            },
            betas,
            alphas,
            alpha_bars,
            sigmas,
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.config.beta_clip;
        for (i, &b) in self.betas.iter().enumerate() {
            if !(b >= lo && b <= hi) {
                return Err(Error::InvalidSchedule(format!(
                    "beta_{} = {b} outside clip bounds [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        let mut prod = 1.0;
        for t in 1..=self.steps() {
            if self.alpha_bars[t] >= self.alpha_bars[t - 1] {
                return Err(Error::InvalidSchedule(format!(
                    "alpha_bar not strictly decreasing at t = {t}"
                )));
            }
            prod *= self.alphas[t - 1];
            let rel = (self.alpha_bars[t] - prod).abs() / prod.max(f64::MIN_POSITIVE);
            if rel > 1e-12 {
                return Err(Error::InvalidSchedule(format!(
                    "telescoping violated at t = {t}: relative error {rel}"
                )));
            }
        }
        Ok(())
    }

    /// Writes the schedule as CSV with header `t,beta,alpha,alpha_bar,sigma`.
    ///
    /// The t = 0 row reports β = 0, α = 1, ᾱ = 1, σ = 0 (no noise has been
    /// added yet), followed by one row per step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,beta,alpha,alpha_bar,sigma")?;
        writeln!(out, "0,0,1,1,0")?;
        for t in 1..=self.steps() {
            writeln!(
                out,
                "{},{},{},{},{}",
                t,
                self.betas[t - 1],
                self.alphas[t - 1],
                self.alpha_bars[t],
                self.sigmas[t - 1]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_alpha_bar_endpoints_exact() {
        for steps in [1, 10, 50, 1000] {
            assert_eq!(cosine_alpha_bar(0, steps, 0.008).unwrap(), 1.0);
            assert_eq!(cosine_alpha_bar(steps, steps, 0.008).unwrap(), 0.0);
        }
    }

    #[test]
    fn cosine_alpha_bar_midpoint() {
        // Independent double-precision evaluation of the squared-cosine
        // profile at t = T/2, s = 0.008.
        let expected = 0.4938435904406377;
        for steps in [10, 50, 1000] {
            let got = cosine_alpha_bar(steps / 2, steps, 0.008).unwrap();
            assert!((got - expected).abs() < 1e-12, "got {got}");
        }
    }

    #[test]
    fn cosine_alpha_bar_rejects_out_of_range() {
        assert!(matches!(
            cosine_alpha_bar(11, 10, 0.008),
            Err(Error::TimeStepOutOfRange { .. })
        ));
    }

    #[test]
    fn single_step_cosine_forces_clip() {
        // Unclipped beta_1 would be 1 because alpha_bar(T) = 0.
        let s = build_schedule(&ScheduleConfig::cosine(1)).unwrap();
        assert_eq!(s.beta(1).unwrap(), 0.999);
    }

    #[test]
    fn linear_two_step_hand_values() {
        let config = ScheduleConfig {
            kind: ScheduleKind::Linear,
            steps: 2,
            linear_range: (0.1, 0.3),
            ..ScheduleConfig::default()
        };
        let s = build_schedule(&config).unwrap();
        assert_eq!(s.beta(1).unwrap(), 0.1);
        assert_eq!(s.beta(2).unwrap(), 0.3);
        assert_eq!(s.alpha_bar(0).unwrap(), 1.0);
        assert!((s.alpha_bar(1).unwrap() - 0.9).abs() < 1e-15);
        assert!((s.alpha_bar(2).unwrap() - 0.63).abs() < 1e-15);
    }

    #[test]
    fn cosine_schedule_invariants() {
        for steps in [10, 50, 1000] {
            let s = build_schedule(&ScheduleConfig::cosine(steps)).unwrap();
            // Strictly decreasing alpha_bar and SNR, clipped betas.
            for t in 1..=steps {
                assert!(s.alpha_bar(t).unwrap() < s.alpha_bar(t - 1).unwrap());
                let b = s.beta(t).unwrap();
                assert!((1e-8..=0.999).contains(&b));
                if t >= 2 {
                    assert!(s.snr(t).unwrap() < s.snr(t - 1).unwrap());
                }
            }
            // Telescoping to 1e-12 relative.
            let mut prod = 1.0;
            for t in 1..=steps {
                prod *= s.alpha(t).unwrap();
                let ab = s.alpha_bar(t).unwrap();
                assert!((ab - prod).abs() <= 1e-12 * prod.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn cosine_noises_slower_than_linear_midway() {
        let cos = build_schedule(&ScheduleConfig::cosine(1000)).unwrap();
        let lin = build_schedule(&ScheduleConfig::linear(1000)).unwrap();
        assert!(cos.alpha_bar(500).unwrap() > lin.alpha_bar(500).unwrap());
    }

    #[test]
    fn posterior_sigma_is_smaller() {
        let config = ScheduleConfig {
            sigma: SigmaKind::Posterior,
            ..ScheduleConfig::cosine(50)
        };
        let post = build_schedule(&config).unwrap();
        let beta = build_schedule(&ScheduleConfig::cosine(50)).unwrap();
        // beta_tilde_1 = 0 and beta_tilde_t < beta_t elsewhere.
        assert_eq!(post.sigma(1).unwrap(), 0.0);
        for t in 2..=50 {
            assert!(post.sigma(t).unwrap() < beta.sigma(t).unwrap());
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(build_schedule(&ScheduleConfig::cosine(0)).is_err());
        let bad_clip = ScheduleConfig {
            beta_clip: (0.0, 1.5),
            ..ScheduleConfig::cosine(10)
        };
        assert!(build_schedule(&bad_clip).is_err());
    }

    #[test]
    fn csv_has_header_and_zero_row() {
        let s = build_schedule(&ScheduleConfig::cosine(10)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 12); // header + t = 0..=10
        assert_eq!(lines[0], "t,beta,alpha,alpha_bar,sigma");
        assert!(lines[1].starts_with("0,0,1,1,0"));
    }

    #[test]
    fn kind_parses() {
        assert_eq!("cosine".parse::<ScheduleKind>().unwrap(), ScheduleKind::Cosine);
        assert_eq!("linear".parse::<ScheduleKind>().unwrap(), ScheduleKind::Linear);
        assert!("foo".parse::<ScheduleKind>().is_err());
    }
}
