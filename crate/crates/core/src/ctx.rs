use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_rational::Ratio;

/// Numerical context threaded explicitly through every series and root
/// computation. Cloning is cheap; the margin statistics are shared so a
/// per-run report can surface how close any coefficient came to the drop
/// threshold.
#[derive(Clone, Debug)]
pub struct Ctx {
    /// Relative magnitude below which a coefficient is dropped during
    /// series normalization. The single most consequential numerical
    /// knob; every verification report re-states the observed margins.
    pub tol_rel: f64,
    /// Series are exact for exponents strictly below this bound.
    pub trunc: Ratio<i64>,
    /// Requested mantissa precision. 53 is plain f64; larger values
    /// switch root refinement to compensated (error-free transformation)
    /// polynomial evaluation, roughly doubling the working precision.
    pub precision_bits: u32,
    margins: Arc<MarginStats>,
}

impl Ctx {
    pub fn new(tol_rel: f64, trunc: Ratio<i64>, precision_bits: u32) -> Self {
        Ctx {
            tol_rel,
            trunc,
            precision_bits,
            margins: Arc::new(MarginStats::default()),
        }
    }

    /// Default context for period `p`: truncation depth `max(4p, 16)`.
    pub fn for_period(p: u32) -> Self {
        let depth = (4 * p as i64).max(16);
        Ctx::new(1e-9, Ratio::from_integer(depth), 53)
    }

    /// Same context with a different truncation bound.
    pub fn with_trunc(&self, trunc: Ratio<i64>) -> Self {
        let mut c = self.clone();
        c.trunc = trunc;
        c
    }

    /// Same context with doubled truncation depth (adaptive retry).
    pub fn deepened(&self) -> Self {
        self.with_trunc(self.trunc * 2)
    }

    pub fn margins(&self) -> &MarginStats {
        &self.margins
    }

    /// Record the relative magnitude of a kept coefficient (smallest seen)
    /// or a dropped one (largest seen).
    pub fn record_margin(&self, rel_magnitude: f64, kept: bool) {
        if kept {
            self.margins.update_min_kept(rel_magnitude);
        } else {
            self.margins.update_max_dropped(rel_magnitude);
        }
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(1e-9, Ratio::from_integer(16), 53)
    }
}

/// Thread-safe min/max of relative coefficient magnitudes at the drop
/// threshold. `min_kept` close to `max_dropped` means the zero threshold
/// was load-bearing for the run.
#[derive(Debug)]
pub struct MarginStats {
    min_kept_bits: AtomicU64,
    max_dropped_bits: AtomicU64,
}

impl Default for MarginStats {
    fn default() -> Self {
        MarginStats {
            min_kept_bits: AtomicU64::new(f64::INFINITY.to_bits()),
            max_dropped_bits: AtomicU64::new(0f64.to_bits()),
        }
    }
}

impl MarginStats {
    fn update_min_kept(&self, v: f64) {
        let mut cur = self.min_kept_bits.load(Ordering::Relaxed);
        while v < f64::from_bits(cur) {
            match self.min_kept_bits.compare_exchange_weak(
                cur,
                v.to_bits(),
                Ordering::Relaxed,
                Ordering::Relaxed,
            ) {
                Ok(_) => break,
                Err(now) => cur = now,
            }
        }
    }

    fn update_max_dropped(&self, v: f64) {
        let mut cur = self.max_dropped_bits.load(Ordering::Relaxed);
        while v > f64::from_bits(cur) {
            match self.max_dropped_bits.compare_exchange_weak(
                cur,
                v.to_bits(),
                Ordering::Relaxed,
                Ordering::Relaxed,
            ) {
                Ok(_) => break,
                Err(now) => cur = now,
            }
        }
    }

    /// Smallest relative magnitude that survived normalization.
    pub fn min_kept(&self) -> f64 {
        f64::from_bits(self.min_kept_bits.load(Ordering::Relaxed))
    }

    /// Largest relative magnitude that was dropped.
    pub fn max_dropped(&self) -> f64 {
        f64::from_bits(self.max_dropped_bits.load(Ordering::Relaxed))
    }
}
