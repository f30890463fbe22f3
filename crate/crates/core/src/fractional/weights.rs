use num_traits::Float;

use crate::graph::Graph;
use crate::hardcore::Fugacity;
use crate::numerics::lambert_w0;
use crate::scalar::Scalar;

use super::{FractionalError, LocalWeights};

/// The minimiser of `α + β deg` over the curve `hcm_lower_bound(λ, α, β) = 1`:
/// `β = ((1+λ)/λ) log(1+λ) / (1 + W(deg log(1+λ)))`.
pub fn optimal_beta<T: Float>(lambda: T, deg: usize) -> Result<T, FractionalError> {
    let one = T::one();
    let l1 = lambda.ln_1p();
    let deg = T::from(deg).expect("degree fits the float type");
    let w = lambert_w0(deg * l1)?;
    Ok((one + lambda) / lambda * l1 / (one + w))
}

/// The `α` making `hcm_lower_bound(λ, α, β) = 1`:
/// `α = β (1+λ)^{(1+λ)/(βλ)} / (e log(1+λ))`, evaluated in log form.
pub fn alpha_for_beta<T: Float>(lambda: T, beta: T) -> T {
    let one = T::one();
    let l1 = lambda.ln_1p();
    beta * ((one + lambda) * l1 / (beta * lambda) - one).exp() / l1
}

/// `(α, β)` for a vertex of degree `deg`.
pub fn weight_pair<T: Float>(lambda: T, deg: usize) -> Result<(T, T), FractionalError> {
    let beta = optimal_beta(lambda, deg)?;
    Ok((alpha_for_beta(lambda, beta), beta))
}

/// `((1+λ)/λ) e^{W(deg log(1+λ))}`, the value of `α + β deg` at the optimum.
pub fn colour_bound<T: Float>(lambda: T, deg: usize) -> Result<T, FractionalError> {
    let one = T::one();
    let deg = T::from(deg).expect("degree fits the float type");
    Ok((one + lambda) / lambda * lambert_w0(deg * lambda.ln_1p())?.exp())
}

/// `λ = ε/2` and first-order weights `(α_v, β_v) = weight_pair(λ, deg(v))`.
///
/// Isolated vertices use the same formula at `deg = 0`, which gives
/// `α = (1+λ)/λ = 1 / Pr(v ∈ I)`.
pub fn choose_local_weights<T: Float + Scalar>(
    g: &Graph,
    epsilon: T,
) -> Result<(Fugacity<T>, LocalWeights<T>), FractionalError> {
    let eps = num_traits::ToPrimitive::to_f64(&epsilon).unwrap_or(f64::NAN);
    if !(eps > 0.0 && eps <= 4.0) {
        return Err(FractionalError::EpsilonOutOfRange(eps));
    }
    let two = <T as num_traits::One>::one() + <T as num_traits::One>::one();
    let lambda = epsilon / two;
    let (alpha, beta): (Vec<T>, Vec<T>) = (0..g.n())
        .map(|v| weight_pair(lambda, g.degree(v)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    let weights = LocalWeights::first_order(g, alpha, beta)?;
    Ok((Fugacity::new(lambda)?, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::hardcore::hcm_lower_bound;

    #[test]
    fn constraint_holds_with_equality() {
        for &lambda in &[0.05, 0.5, 1.0, 2.0] {
            for deg in [0, 1, 2, 3, 10, 100, 10_000] {
                let (a, b) = weight_pair(lambda, deg).unwrap();
                assert!(
                    (hcm_lower_bound(lambda, a, b) - 1.0).abs() < 1e-9,
                    "λ={lambda} deg={deg}"
                );
                let bound = colour_bound(lambda, deg).unwrap();
                assert!(
                    (a + b * deg as f64 - bound).abs() <= 1e-9 * bound,
                    "λ={lambda} deg={deg}"
                );
            }
        }
    }

    #[test]
    fn isolated_vertex_weight_is_inverse_occupancy() {
        let (a, b) = weight_pair(1.0, 0).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        assert!((b - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn optimum_is_a_minimum() {
        for &lambda in &[0.5, 1.0, 2.0] {
            for deg in 1..=40 {
                let (a, b) = weight_pair(lambda, deg).unwrap();
                let best = a + b * deg as f64;
                for f in [0.99, 1.01] {
                    let b2 = b * f;
                    let a2 = alpha_for_beta(lambda, b2);
                    assert!(a2 + b2 * deg as f64 >= best * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn choose_rejects_bad_epsilon() {
        let g = cycle(5);
        for eps in [0.0, -1.0, 4.5, f64::NAN] {
            assert!(matches!(
                choose_local_weights(&g, eps),
                Err(FractionalError::EpsilonOutOfRange(_))
            ));
        }
        let (lambda, w) = choose_local_weights(&g, 4.0).unwrap();
        assert_eq!(*lambda.value(), 2.0);
        assert_eq!(w.r(), 1);
        let bound = colour_bound(2.0, 2).unwrap();
        assert!(w.gammas().iter().all(|&x| (x - bound).abs() < 1e-9));
    }

    #[test]
    fn large_degree_asymptotics() {
        // (α + β deg) λ log(deg) / ((1+λ) log(1+λ) deg) decreases towards 1
        let lambda = 0.5f64;
        let ratio = |d: f64| {
            colour_bound(lambda, d as usize).unwrap() * lambda * d.ln()
                / ((1.0 + lambda) * lambda.ln_1p() * d)
        };
        let rs: Vec<f64> = [1e3, 1e6, 1e9, 1e12, 1e15]
            .iter()
            .map(|&d| ratio(d))
            .collect();
        assert!(rs.windows(2).all(|w| w[1] < w[0]), "{rs:?}");
        assert!(rs.iter().all(|&r| r > 1.0), "{rs:?}");
    }
}
