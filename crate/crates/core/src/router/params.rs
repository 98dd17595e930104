use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("look-ahead weight must lie in [0, 1), got {0}")]
    Weight(f64),
    #[error("decay increment must be finite and non-negative, got {0}")]
    DecayDelta(f64),
    #[error("decay reset interval must be at least 1")]
    DecayReset,
    #[error("at least one restart is required")]
    Restarts,
    #[error("traversal count must be odd so the last pass runs forward, got {0}")]
    Traversals(usize),
}

/// Search configuration. Defaults: |E| = 20, W = 0.5, delta = 0.001, decay
/// reset every 5 steps, 5 restarts of 3 traversals each.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouterParams {
    pub extended_set_size: usize,
    pub lookahead_weight: f64,
    pub decay_delta: f64,
    pub decay_reset_interval: usize,
    pub restarts: usize,
    pub traversals: usize,
}

impl Default for RouterParams {
    fn default() -> Self {
        RouterParams {
            extended_set_size: 20,
            lookahead_weight: 0.5,
            decay_delta: 0.001,
            decay_reset_interval: 5,
            restarts: 5,
            traversals: 3,
        }
    }
}

impl RouterParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(0.0..1.0).contains(&self.lookahead_weight) {
            return Err(ParamsError::Weight(self.lookahead_weight));
        }
        if !self.decay_delta.is_finite() || self.decay_delta < 0.0 {
            return Err(ParamsError::DecayDelta(self.decay_delta));
        }
        if self.decay_reset_interval == 0 {
            return Err(ParamsError::DecayReset);
        }
        if self.restarts == 0 {
            return Err(ParamsError::Restarts);
        }
        if self.traversals == 0 || self.traversals.is_multiple_of(2) {
            return Err(ParamsError::Traversals(self.traversals));
        }
        Ok(())
    }

    /// Only the front-layer sum: no look-ahead, no decay.
    pub fn basic() -> Self {
        RouterParams {
            extended_set_size: 0,
            lookahead_weight: 0.0,
            decay_delta: 0.0,
            ..Self::default()
        }
    }

    pub fn single_pass(self) -> Self {
        RouterParams {
            restarts: 1,
            traversals: 1,
            ..self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = RouterParams::default();
        assert_eq!(p.extended_set_size, 20);
        assert_eq!(p.lookahead_weight, 0.5);
        assert_eq!(p.decay_delta, 0.001);
        assert_eq!(p.decay_reset_interval, 5);
        assert_eq!((p.restarts, p.traversals), (5, 3));
        assert!(p.validate().is_ok());
        assert!(RouterParams::basic().validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        let p = RouterParams::default();
        let bad = [
            RouterParams { lookahead_weight: 1.0, ..p },
            RouterParams { lookahead_weight: -0.1, ..p },
            RouterParams { decay_delta: -1.0, ..p },
            RouterParams { decay_delta: f64::NAN, ..p },
            RouterParams { decay_reset_interval: 0, ..p },
            RouterParams { restarts: 0, ..p },
            RouterParams { traversals: 0, ..p },
            RouterParams { traversals: 2, ..p },
        ];
        for params in bad {
            assert!(params.validate().is_err(), "{params:?}");
        }
    }
}
