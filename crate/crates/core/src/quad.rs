//! Quadrature building blocks: tanh-sinh on finite intervals and composite
//! Gauss–Legendre rules for expectations under a Gamma law.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use quadrature::double_exponential;

use crate::error::{Error, Result};
use crate::special::{ln_gamma, reg_lower_gamma, reg_upper_gamma};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: u32,
}

/// Tanh-sinh quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The integrand must be smooth inside the interval; endpoint singularities
/// are fine. Fails when the error estimate exceeds `tol` or a value is not
/// finite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::QuadratureFailure(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let bad = std::cell::Cell::new(None);
    let out = double_exponential::integrate(
        |x| {
            let v = f(x);
            if !v.is_finite() && bad.get().is_none() {
                bad.set(Some(x));
            }
            v
        },
        a,
        b,
        tol,
    );
    if let Some(x) = bad.get() {
        return Err(Error::QuadratureFailure(format!("non-finite integrand at x = {x}")));
    }
    if !(out.error_estimate <= tol) {
        return Err(Error::QuadratureFailure(format!(
            "error estimate {:.3e} above tolerance {tol:.3e} on [{a}, {b}]",
            out.error_estimate
        )));
    }
    Ok(Integral { value: out.integral, error: out.error_estimate, evaluations: out.num_function_evaluations })
}

/// Sum of [`integrate`] over consecutive pieces `[cuts[k], cuts[k+1]]`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, cuts: &[f64], tol: f64) -> Result<Integral> {
    let pieces = cuts.len().saturating_sub(1).max(1) as f64;
    let mut total = Integral { value: 0.0, error: 0.0, evaluations: 0 };
    for w in cuts.windows(2) {
        let part = integrate(&f, w[0], w[1], tol / pieces)?;
        total.value += part.value;
        total.error += part.error;
        total.evaluations += part.evaluations;
    }
    Ok(total)
}

/// Composite Gauss–Legendre rule for `E f(Y)`, `Y ~ Gamma(shape, 1)`.
///
/// Panels are geometric (ratio `e^{1/2}`) below the bulk, so features of `f`
/// near `y = 0` at any scale are resolved, and at most `max(3, σ)` wide
/// elsewhere. Mass below the first and above the last panel is under `1e-18`.
#[derive(Debug, Clone)]
pub struct GammaPanelRule {
    pub shape: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const LOG_PANEL: f64 = 0.5;
const OMITTED_MASS: f64 = 1e-18;

impl GammaPanelRule {
    pub fn new(shape: f64, panel_order: usize) -> Result<Self> {
        let order = NonZeroUsize::new(panel_order).filter(|_| shape > 0.0 && shape.is_finite()).ok_or_else(|| {
            Error::InvalidParameter(format!("panel rule needs shape > 0 and order ≥ 1 (shape {shape}, order {panel_order})"))
        })?;
        let gl = GaussLegendre::new(order);
        let sd = shape.sqrt();
        let mut lo = shape;
        while reg_lower_gamma(shape, lo) > OMITTED_MASS {
            lo *= 0.5;
        }
        let mut hi = shape + sd;
        while reg_upper_gamma(shape, hi) > OMITTED_MASS {
            hi += sd.max(1.0);
        }
        let lin = sd.max(3.0);
        let ln_norm = ln_gamma(shape);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut a = lo;
        while a < hi {
            let b = (a + (a * (LOG_PANEL.exp() - 1.0)).min(lin)).min(hi);
            let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
            for (x, w) in gl.iter() {
                let y = mid + half * x;
                nodes.push(y);
                weights.push(half * w * ((shape - 1.0) * y.ln() - y - ln_norm).exp());
            }
            a = b;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(GammaPanelRule { shape, nodes, weights })
    }

    pub fn expect<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_basics() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
        let r = integrate_pieces(|x: f64| if x < 1.0 { 1.0 } else { 0.0 }, &[0.0, 1.0, 3.0], 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn panel_rule_moments() {
        for shape in [2.0, 3.5, 11.0, 41.0, 400.0] {
            let rule = GammaPanelRule::new(shape, 12).unwrap();
            assert!((rule.expect(|_| 1.0) - 1.0).abs() < 1e-13, "shape {shape}");
            assert!((rule.expect(|y| y) / shape - 1.0).abs() < 1e-13);
            assert!((rule.expect(|y| y * y) / (shape * (shape + 1.0)) - 1.0).abs() < 1e-13);
            // E Y^{-1/2} = Γ(a − 1/2)/Γ(a)
            let want = (ln_gamma(shape - 0.5) - ln_gamma(shape)).exp();
            let got = rule.expect(|y| y.powf(-0.5));
            assert!((got / want - 1.0).abs() < 1e-12, "shape {shape}: {got} vs {want}");
        }
    }

    #[test]
    fn panel_rule_resolves_small_scale_features() {
        // E[t²/(t² + Y²)] for Y ~ Gamma(2): small-t feature near zero
        let rule = GammaPanelRule::new(2.0, 12).unwrap();
        for t in [1e-4, 1e-2, 0.3, 5.0] {
            let got = rule.expect(|y| t * t / (t * t + y * y));
            let f = |y: f64| y * (-y).exp() * t * t / (t * t + y * y);
            let want = integrate_pieces(f, &[0.0, t, 10.0 * t, 60.0 + 10.0 * t], 1e-14).unwrap().value;
            assert!((got - want).abs() < 1e-14 + 1e-11 * want, "t = {t}: {got} vs {want}");
        }
    }
}
