use serde::Serialize;

use super::ArithError;

/// ζ(s) together with a certified bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaEstimate {
    pub value: f64,
    pub error: f64,
}

impl ZetaEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }
}

/// Below this the f64 rounding of the partial sum dominates.
const MIN_EPS: f64 = 1e-13;

/// Evaluates ζ(s) for integer `s >= 2` to within `eps`.
///
/// The partial sum runs to N = ⌈eps^(−1/s)⌉; the tail Σ_{n>N} n^(−s) lies
/// between the integrals from N+1 and from N, and the midpoint of that
/// bracket is added. Its half-width is at most N^(−s)/2 ≤ eps/2, which
/// leaves the other half of the budget for rounding.
pub fn zeta_estimate(s: u32, eps: f64) -> Result<ZetaEstimate, ArithError> {
    if s < 2 {
        return Err(ArithError::ZetaArgument(s));
    }
    if eps.is_nan() || eps < MIN_EPS || !eps.is_finite() {
        return Err(ArithError::Tolerance(eps));
    }
    let n = eps.powf(-1.0 / s as f64).ceil().max(1.0) as u64;
    let exp = -(s as i32);
    // Compensated summation, smallest terms first.
    let mut partial = 0.0f64;
    let mut carry = 0.0f64;
    for k in (1..=n).rev() {
        let term = (k as f64).powi(exp);
        let t = partial + term;
        if partial.abs() >= term.abs() {
            carry += (partial - t) + term;
        } else {
            carry += (term - t) + partial;
        }
        partial = t;
    }
    let partial = partial + carry;
    let sm1 = (s - 1) as f64;
    let tail_hi = 1.0 / (sm1 * (n as f64).powi(s as i32 - 1));
    let tail_lo = 1.0 / (sm1 * ((n + 1) as f64).powi(s as i32 - 1));
    let value = partial + 0.5 * (tail_hi + tail_lo);
    let half_width = 0.5 * (tail_hi - tail_lo);
    // powi costs up to s ulps per term; the compensated sum adds a few more.
    let rounding = (s as f64 + 4.0 + n as f64 * f64::EPSILON) * f64::EPSILON * value;
    let error = half_width + rounding;
    if error > eps {
        return Err(ArithError::Tolerance(eps));
    }
    Ok(ZetaEstimate { value, error })
}

/// ζ(s) to within `eps`.
pub fn zeta_approx(s: u32, eps: f64) -> Result<f64, ArithError> {
    zeta_estimate(s, eps).map(|z| z.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_matches_closed_form() {
        let z = zeta_approx(2, 1e-9).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((z - exact).abs() <= 1e-9, "{z} vs {exact}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(zeta_approx(1, 1e-9), Err(ArithError::ZetaArgument(1)));
        assert!(zeta_approx(2, 0.0).is_err());
        assert!(zeta_approx(2, f64::NAN).is_err());
    }

    #[test]
    fn error_bound_is_within_eps() {
        for s in 2..8 {
            for eps in [1e-3, 1e-6, 1e-9] {
                let z = zeta_estimate(s, eps).unwrap();
                assert!(z.error <= eps, "s={s} eps={eps} err={}", z.error);
                assert!(z.lower() < z.value && z.value < z.upper());
            }
        }
    }
}
