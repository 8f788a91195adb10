//! Guess-your-neighbour's-input gain: both parties win only through the
//! zigzag channel of the double cavity.

use crate::error::Result;
use crate::optimize::bisect;

use super::double_cavity::{double_cavity, REFLECTED};

/// `<G> = P(reflected) = R^2/(1+R)^2`.
pub fn gyni_gain(reflectivity: f64) -> Result<f64> {
    Ok(double_cavity(reflectivity)?.get(REFLECTED))
}

/// Reflectivity at which the gain crosses the causal bound `1/2`.
pub fn gyni_threshold(tol: f64) -> Option<f64> {
    bisect(|r| gyni_gain(r).map(|g| g - 0.5).unwrap_or(f64::NAN), 1.0, 10.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::GYNI_THRESHOLD;

    #[test]
    fn threshold_is_one_plus_sqrt_two() {
        assert!((gyni_gain(GYNI_THRESHOLD).unwrap() - 0.5).abs() < 1e-15);
        assert!((gyni_threshold(1e-13).unwrap() - GYNI_THRESHOLD).abs() < 1e-12);
        assert_eq!(gyni_gain(0.0).unwrap(), 0.0);
        assert!(gyni_gain(-1.0).is_err());
    }
}
