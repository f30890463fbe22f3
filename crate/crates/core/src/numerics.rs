//! Lambert W on the non-negative real axis.

use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("Lambert W is only implemented for x >= 0 (got {0})")]
    Domain(f64),
    #[error("Lambert W did not converge for x = {x} within {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        x: f64,
        iterations: usize,
        residual: f64,
    },
}

/// Stopping rule for the iteration.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance<T> {
    /// Residual bound: `|w e^w - x| <= abs_tol * (1 + x)`.
    pub abs_tol: T,
    pub max_iter: usize,
}

impl<T: Float> Default for Tolerance<T> {
    fn default() -> Self {
        // 1e-12 is below f32 resolution; fall back to a few ulps there.
        let floor = T::epsilon() * T::from(8.0).unwrap();
        let abs_tol = T::from(1e-12).unwrap().max(floor);
        Self {
            abs_tol,
            max_iter: 100,
        }
    }
}

/// Principal branch `W(x)` for `x >= 0`: the `w >= 0` with `w e^w = x`.
///
/// Halley iteration started from `log(1 + x)`.
pub fn lambert_w<T: Float>(x: T, tol: Tolerance<T>) -> Result<T, NumericsError> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    if x.is_nan() || x < T::zero() || !x.is_finite() {
        return Err(NumericsError::Domain(xf));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let one = T::one();
    let two = one + one;
    let residual_of = |w: T| (w * w.exp() - x).abs();
    let bound = tol.abs_tol * (one + x);

    let mut w = x.ln_1p();
    for _ in 0..tol.max_iter {
        let ew = w.exp();
        let f = w * ew - x;
        if f == T::zero() {
            return Ok(w);
        }
        let wp1 = w + one;
        // Halley step for f(w) = w e^w - x
        let step = f / (ew * wp1 - (w + two) * f / (two * wp1));
        let next = (w - step).max(T::zero());
        let settled = (next - w).abs() <= T::epsilon() * T::from(4.0).unwrap() * (one + next.abs());
        w = next;
        if settled {
            break;
        }
    }
    let residual = residual_of(w);
    if residual <= bound {
        Ok(w)
    } else {
        Err(NumericsError::NoConvergence {
            x: xf,
            iterations: tol.max_iter,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `W(x)` with the default tolerance.
pub fn lambert_w0<T: Float>(x: T) -> Result<T, NumericsError> {
    lambert_w(x, Tolerance::default())
}
