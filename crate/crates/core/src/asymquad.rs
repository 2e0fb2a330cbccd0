//! Deterministic evaluation of the asymptotic constant
//! `C(β, H) = lim_{θ→∞} θ^{1/β} P(SIR > θ)`.
//!
//! For the Ginibre process the Palm radii are independent with squared
//! moduli `Y_i ~ Gamma(i+1, 1)`, so
//!
//! ```text
//! C = E[H^{1/β}] / Γ(1 + 1/β) · ∫₀^∞ ∏_{i≥1} g_i(t) dt,   g_i(t) = E 𝓛_H((t/Y_i)^β).
//! ```
//!
//! Small indices are integrated with Gamma-weighted Gauss rules. Large
//! indices use the moment series `g_i = Σ_k (−t^β)^k E[H^k] E[Y_i^{−kβ}] / k!`
//! and the product tail beyond the last index is summed in closed form from
//! `Σ_{i≥n} Γ(i+1−c)/Γ(i+1) = n·Γ(n+1−c)/((c−1)Γ(n+1))`, with rigorous first
//! and second order bounds giving the bracket.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimate::{ConstantEstimate, EstimateMeta, Method};
use crate::fading::{condition_b_params, FadingSpec, PropagationEffect};
use crate::quad::{integrate, integrate_pieces, GammaPanelRule};
use crate::special::{gamma, ln_beta, ln_gamma};

/// Outer-integral cutoff policy: start at `t_start` and double until
/// `P(T)·T < abs_tol`, giving up beyond `t_limit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TMaxRule {
    pub t_start: f64,
    pub t_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Gauss–Legendre nodes per panel of the inner Gamma-weighted rules.
    pub panel_order: usize,
    /// Absolute error allowed in the product at each `t` from the estimate
    /// of the factors beyond the last index.
    pub product_tail_tol: f64,
    pub t_max_rule: TMaxRule,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            panel_order: 12,
            product_tail_tol: 1e-11,
            t_max_rule: TMaxRule { t_start: 4.0, t_limit: 1024.0 },
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !(pos(self.abs_tol) && pos(self.rel_tol) && pos(self.product_tail_tol)) {
            return Err(invalid("quadrature tolerances must be positive"));
        }
        if self.panel_order < 8 {
            return Err(invalid(format!("panel_order must be ≥ 8 (got {})", self.panel_order)));
        }
        let r = self.t_max_rule;
        if !(pos(r.t_start) && r.t_limit >= r.t_start) {
            return Err(invalid("t_max_rule needs 0 < t_start ≤ t_limit"));
        }
        Ok(())
    }

    /// Every tolerance divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadConfig {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            product_tail_tol: self.product_tail_tol / factor,
            ..*self
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("β must exceed 1 (got {beta})")))
    }
}

/// `(β/π) sin(π/β)`, the constant for any stationary Poisson process and any
/// admissible fading.
pub fn poisson_constant(beta: f64) -> Result<ConstantEstimate> {
    check_beta(beta)?;
    let value = beta / PI * (PI / beta).sin();
    Ok(ConstantEstimate {
        value,
        std_error: 0.0,
        bracket_low: value,
        bracket_high: value,
        method: Method::ClosedForm,
        meta: EstimateMeta { beta, ..Default::default() },
    })
}

/// Largest number of series terms; the series is only used for `i + 1 > (K_MAX + 1)β`.
const K_MAX: usize = 14;
/// Series is used once `t^β E[H] E[Y_i^{−β}]` falls below this.
const SERIES_U_MAX: f64 = 0.05;
/// Hard cap on the number of explicit factors.
const MAX_FACTORS: usize = 2_000_000;

/// Value of `log ∏ g_i(t)` with a rigorous bracket for the part beyond the
/// last explicit factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProduct {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    /// Number of explicit factors.
    pub factors: usize,
}

/// Evaluator of `∏_{i≥1} E 𝓛_H((t/Y_i)^β)`, `Y_i ~ Gamma(i+1, 1)`.
#[derive(Debug)]
pub struct GinibreProduct<'a, H: PropagationEffect> {
    fading: &'a H,
    beta: f64,
    order: usize,
    tail_tol: f64,
    rules: Vec<GammaPanelRule>,
    /// `E[H^k]`, `k = 0..=K_MAX + 1`
    moments: Vec<f64>,
}

impl<'a, H: PropagationEffect> GinibreProduct<'a, H> {
    pub fn new(fading: &'a H, beta: f64, cfg: &QuadConfig) -> Result<Self> {
        check_beta(beta)?;
        cfg.validate()?;
        let moments = (0..=K_MAX as u32 + 1)
            .map(|k| if k == 0 { Some(1.0) } else { fading.raw_moment(k) })
            .collect::<Option<Vec<f64>>>()
            .filter(|m| m.iter().all(|x| x.is_finite()))
            .ok_or_else(|| {
                Error::ConditionViolated(format!("{}: needs finite moments up to order {}", fading.label(), K_MAX + 1))
            })?;
        Ok(GinibreProduct { fading, beta, order: cfg.panel_order, tail_tol: cfg.product_tail_tol, rules: Vec::new(), moments })
    }

    fn rule(&mut self, i: usize) -> Result<&GammaPanelRule> {
        while self.rules.len() < i {
            let shape = self.rules.len() as f64 + 2.0;
            self.rules.push(GammaPanelRule::new(shape, self.order)?);
        }
        Ok(&self.rules[i - 1])
    }

    /// `log g_i(t)` by Gauss quadrature, keeping relative accuracy when the
    /// deficit is small.
    pub fn log_factor_quadrature(&mut self, i: usize, t: f64) -> Result<f64> {
        let (beta, h) = (self.beta, self.fading);
        let rule = self.rule(i)?;
        let deficit = rule.expect(|y| h.laplace_deficit((t / y).powf(beta)));
        if deficit <= 0.5 {
            Ok((-deficit).ln_1p())
        } else {
            Ok(rule.expect(|y| h.laplace((t / y).powf(beta))).ln())
        }
    }

    /// `log ∏ g_i(t)` given that the running product is not needed more
    /// accurately than `product_tail_tol` in absolute terms.
    pub fn log_product(&mut self, t: f64) -> Result<LogProduct> {
        if t == 0.0 {
            return Ok(LogProduct { estimate: 0.0, low: 0.0, high: 0.0, factors: 0 });
        }
        let beta = self.beta;
        let s = t.powf(beta);
        let mu = self.moments.clone();
        let kb = |k: usize| k as f64 * beta;
        let mut log_p = 0.0;
        let mut i = 1usize;

        // Explicit quadrature until the series regime starts.
        let first_series = ((K_MAX + 1) as f64 * beta).floor() as usize;
        loop {
            if i >= first_series {
                let u = s * mu[1] * (ln_gamma(i as f64 + 1.0 - beta) - ln_gamma(i as f64 + 1.0)).exp();
                if u <= SERIES_U_MAX {
                    break;
                }
            }
            log_p += self.log_factor_quadrature(i, t)?;
            if log_p < -745.0 {
                // Product below the smallest double; everything else is moot.
                return Ok(LogProduct { estimate: log_p, low: log_p, high: log_p, factors: i });
            }
            i += 1;
            if i > MAX_FACTORS {
                return Err(Error::QuadratureFailure(format!("no series regime at t = {t}")));
            }
        }

        // m[k] = Γ(i+1−kβ)/Γ(i+1), advanced by m_k(i+1) = m_k(i)(i+1−kβ)/(i+1)
        let mut m: Vec<f64> = (0..=K_MAX + 1)
            .map(|k| (ln_gamma(i as f64 + 1.0 - kb(k)) - ln_gamma(i as f64 + 1.0)).exp())
            .collect();
        let mut log_pows = [0.0; K_MAX + 2];
        let mut fact = [1.0; K_MAX + 2];
        for k in 1..=K_MAX + 1 {
            log_pows[k] = k as f64 * s.ln();
            fact[k] = fact[k - 1] * k as f64;
        }
        let coef: Vec<f64> = (0..=K_MAX + 1).map(|k| (log_pows[k]).exp() * mu[k] / fact[k]).collect();
        let b2 = 2.0 * beta - 1.0;
        let b3 = 3.0 * beta - 1.0;
        loop {
            let n = i as f64;
            let u = s * mu[1] * m[1];
            // error of the closed-form tail estimate and its rigorous width
            let s1 = n * m[1] / (beta - 1.0);
            let s2 = n * m[2] / b2;
            let s3 = n * m[3] / b3;
            let est_err = s * s * mu[1] * mu[1] * beta * beta * s2 / n + s * s * s * mu[3] * s3 / 6.0;
            if est_err * log_p.exp() <= self.tail_tol || i >= MAX_FACTORS {
                let first = s * mu[1] * s1;
                let low = first - 0.5 * s * s * mu[2] * s2;
                let high = first + s * s * mu[1] * mu[1] * s2 / (1.0 - u);
                let mid = first - 0.5 * s * s * (mu[2] - mu[1] * mu[1]) * s2;
                return Ok(LogProduct {
                    estimate: log_p - mid,
                    low: log_p - high,
                    high: log_p - low,
                    factors: i - 1,
                });
            }
            // g_i = 1 − d, d = Σ_{k≥1} (−1)^{k+1} coef_k m_k; remainder ≤ next term
            let mut d = 0.0;
            let mut converged = false;
            for k in 1..=K_MAX {
                let term = coef[k] * m[k];
                d += if k % 2 == 1 { term } else { -term };
                if coef[k + 1] * m[k + 1] <= 1e-17 * d.abs() {
                    converged = true;
                    break;
                }
            }
            log_p += if converged { (-d).ln_1p() } else { self.log_factor_quadrature(i, t)? };
            for (k, mk) in m.iter_mut().enumerate().skip(1) {
                *mk *= (n + 1.0 - kb(k)) / (n + 1.0);
            }
            i += 1;
        }
    }
}

/// `∫₀^∞ ∏ g_i(t) dt` with a bracket; returns `(value, low, high)`.
fn ginibre_integral<H: PropagationEffect>(fading: &H, beta: f64, cfg: &QuadConfig) -> Result<(f64, f64, f64)> {
    let mut prod = GinibreProduct::new(fading, beta, cfg)?;

    // cutoff: double T until P(T)·T is negligible
    let mut t_max = cfg.t_max_rule.t_start;
    loop {
        let p = prod.log_product(t_max)?.estimate.exp();
        if p * t_max < cfg.abs_tol {
            break;
        }
        t_max *= 2.0;
        if t_max > cfg.t_max_rule.t_limit {
            return Err(Error::QuadratureFailure(format!(
                "integrand still {p:.3e} at t = {} (β = {beta}, {})",
                t_max / 2.0,
                fading.label()
            )));
        }
    }
    let tail_bound = prod.log_product(t_max)?.estimate.exp() * t_max;

    // coarse pass fixes the absolute target for the relative tolerance
    let coarse_n = 64;
    let h = t_max / coarse_n as f64;
    let mut coarse = 0.0;
    let mut width_low = 0.0;
    let mut width_high = 0.0;
    for j in 0..=coarse_n {
        let w = if j == 0 || j == coarse_n { 0.5 * h } else { h };
        let lp = prod.log_product(j as f64 * h)?;
        let e = lp.estimate.exp();
        coarse += w * e;
        width_low += w * (e - lp.low.exp());
        width_high += w * (lp.high.exp() - e);
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * coarse);

    let prod = std::cell::RefCell::new(prod);
    let failure = std::cell::RefCell::new(None);
    let integral = integrate(
        |t| match prod.borrow_mut().log_product(t) {
            Ok(lp) => lp.estimate.exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        t_max,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let integral = integral?;
    let slack = integral.error + tol;
    Ok((
        integral.value,
        integral.value - slack - width_low,
        integral.value + slack + width_high + tail_bound,
    ))
}

/// Ginibre constant from the product formula with general fading.
pub fn ginibre_constant<H: PropagationEffect>(fading: &H, beta: f64, cfg: &QuadConfig) -> Result<ConstantEstimate> {
    check_beta(beta)?;
    condition_b_params(fading, beta)?;
    let prefactor = fading.frac_moment(1.0 / beta) / gamma(1.0 + 1.0 / beta);
    let (v, lo, hi) = ginibre_integral(fading, beta, cfg)?;
    Ok(quad_estimate(prefactor, v, lo, hi, beta, fading.label()))
}

/// Ginibre constant under Nakagami-`m` fading in the form
/// `β/B(m, 1/β) ∫₀^∞ ∏_i E[(1 + (v/Y_i)^β)^{−m}] dv`.
pub fn ginibre_nakagami_constant(beta: f64, m: f64, cfg: &QuadConfig) -> Result<ConstantEstimate> {
    check_beta(beta)?;
    if !(m > 0.0 && m.is_finite()) {
        return Err(invalid(format!("Nakagami m must be positive (got {m})")));
    }
    // (1 + s)^{−m} is the Laplace transform of Gamma(m, 1)
    let unit = FadingSpec::gamma(m, 1.0)?;
    let prefactor = beta * (-ln_beta(m, 1.0 / beta)).exp();
    let (v, lo, hi) = ginibre_integral(&unit, beta, cfg)?;
    Ok(quad_estimate(prefactor, v, lo, hi, beta, FadingSpec::nakagami(m)?.label()))
}

fn quad_estimate(prefactor: f64, v: f64, lo: f64, hi: f64, beta: f64, fading: String) -> ConstantEstimate {
    let value = prefactor * v;
    ConstantEstimate {
        value,
        std_error: 0.0,
        bracket_low: prefactor * lo,
        bracket_high: prefactor * hi,
        method: Method::Quadrature,
        meta: EstimateMeta {
            beta,
            model: Some(crate::ppsampler::ProcessModel::Ginibre),
            fading: Some(fading),
            ..Default::default()
        },
    }
}

/// Coefficient `E[H^{1/β}] / (E H)^{1/β} ≤ 1` relating `C(β, H)` to the
/// constant without fading.
pub fn jensen_coefficient<H: PropagationEffect>(fading: &H, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let mean = fading
        .mean()
        .filter(|m| m.is_finite())
        .ok_or_else(|| Error::ConditionViolated(format!("{}: infinite mean", fading.label())))?;
    Ok(fading.frac_moment(1.0 / beta) / mean.powf(1.0 / beta))
}

/// Lower bound `C(β, H) ≥ E[H^{1/β}]/(E H)^{1/β} · C(β, δ₁)`.
pub fn jensen_lower_bound<H: PropagationEffect>(
    fading: &H,
    beta: f64,
    c_delta1: &ConstantEstimate,
) -> Result<ConstantEstimate> {
    let c = jensen_coefficient(fading, beta)?;
    Ok(ConstantEstimate {
        value: c * c_delta1.value,
        std_error: c * c_delta1.std_error,
        bracket_low: c * c_delta1.bracket_low,
        bracket_high: c * c_delta1.bracket_high,
        method: c_delta1.method,
        meta: EstimateMeta { fading: Some(fading.label()), ..c_delta1.meta.clone() },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `2π ∫₀^∞ P(H > r^{2β}) r dr`
    pub integral: f64,
    /// `π E[H^{1/β}]`
    pub closed_form: f64,
    pub rel_gap: f64,
}

/// Checks `2π ∫₀^∞ P(H > r^{2β}) r dr = π E[H^{1/β}]` by direct quadrature.
pub fn h_integral_identity_check<H: PropagationEffect>(fading: &H, beta: f64, cfg: &QuadConfig) -> Result<IdentityReport> {
    check_beta(beta)?;
    cfg.validate()?;
    let closed_form = PI * fading.frac_moment(1.0 / beta);
    let f = |r: f64| 2.0 * PI * r * fading.tail(r.powf(2.0 * beta));
    // find where the tail is negligible
    let mut r_max = 1.0;
    while f(r_max) > 1e-3 * cfg.abs_tol {
        r_max *= 1.25;
        if r_max > 1e6 {
            return Err(Error::QuadratureFailure("tail of H does not vanish".into()));
        }
    }
    let tol = cfg.abs_tol.min(cfg.rel_tol * closed_form) * 0.1;
    // an atom of H at 1 puts a jump at r = 1
    let integral = integrate_pieces(f, &[0.0, r_max.min(1.0), r_max], tol)?.value;
    Ok(IdentityReport { integral, closed_form, rel_gap: (integral - closed_form).abs() / closed_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_ratio;

    #[test]
    fn poisson_values() {
        assert!((poisson_constant(2.0).unwrap().value - std::f64::consts::FRAC_2_PI).abs() < 1e-15);
        assert!((poisson_constant(4.0).unwrap().value - 0.900_316_316_157_106_1).abs() < 1e-15);
        let c = poisson_constant(1e3).unwrap();
        assert!((c.value - 0.999_998_355_066_5).abs() < 1e-12);
        assert_eq!(c.bracket_low, c.bracket_high);
        assert!(poisson_constant(1.0).is_err());
    }

    #[test]
    fn telescoping_sum_identity() {
        for c in [1.5, 2.0, 3.7] {
            let n = 20usize;
            let direct: f64 = (n..2_000_000).map(|i| gamma_ratio(i as f64 + 1.0 - c, i as f64 + 1.0)).sum();
            let closed = n as f64 * gamma_ratio(n as f64 + 1.0 - c, n as f64 + 1.0) / (c - 1.0);
            // remainder of the direct sum beyond 2e6 ≈ N^{1−c}/(c−1)
            let rem = 2e6f64.powf(1.0 - c) / (c - 1.0);
            assert!((direct + rem - closed).abs() < 1e-6 * closed, "c = {c}");
        }
    }

    /// `1 − g_i(t)` by tanh-sinh on the Gamma(i+1) density, split around `t`.
    pub(super) fn deficit_by_tanh_sinh(h: &FadingSpec, beta: f64, i: usize, t: f64) -> f64 {
        let ln_norm = ln_gamma(i as f64 + 1.0);
        let f = |y: f64| {
            if y == 0.0 {
                return 0.0;
            }
            (i as f64 * y.ln() - y - ln_norm).exp() * h.laplace_deficit((t / y).powf(beta))
        };
        let hi = 200.0 + 4.0 * i as f64;
        let k = i as f64 + 1.0;
        let mut cuts: Vec<f64> = [0.0, t / 4.0, t, 4.0 * t, 0.5 * k, k, 2.0 * k + 10.0, hi]
            .into_iter()
            .filter(|&c| c <= hi)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        integrate_pieces(f, &cuts, 1e-13).unwrap().value
    }

    #[test]
    fn inner_factors_match_independent_quadrature() {
        let cfg = QuadConfig::default();
        for (h, beta) in [
            (FadingSpec::rayleigh(), 2.0),
            (FadingSpec::Deterministic, 1.5),
            (FadingSpec::nakagami(0.5).unwrap(), 1.5),
            (FadingSpec::nakagami(4.0).unwrap(), 3.0),
        ] {
            let mut p = GinibreProduct::new(&h, beta, &cfg).unwrap();
            for i in [1usize, 2, 5, 20, 60] {
                for t in [1e-3, 0.1, 1.0, 3.0, 8.0] {
                    let d = -p.log_factor_quadrature(i, t).unwrap().exp_m1();
                    let want = deficit_by_tanh_sinh(&h, beta, i, t);
                    assert!((d - want).abs() < 1e-12 + 1e-10 * want, "{h} β={beta} i={i} t={t}: {d} vs {want}");
                }
            }
        }
    }

    #[test]
    fn product_matches_long_explicit_product() {
        let cfg = QuadConfig::default();
        for (h, beta) in [(FadingSpec::rayleigh(), 2.0), (FadingSpec::Deterministic, 1.5)] {
            let mut p = GinibreProduct::new(&h, beta, &cfg).unwrap();
            for t in [0.3, 1.0, 2.5] {
                let lp = p.log_product(t).unwrap();
                assert!(lp.low <= lp.estimate && lp.estimate <= lp.high);
                // explicit quadrature up to 4000 factors plus a two-term tail
                let n = 4000usize;
                let mut direct: f64 = (1..n).map(|i| p.log_factor_quadrature(i, t).unwrap()).sum();
                let s = t.powf(beta);
                let nf = n as f64;
                let (mu1, mu2) = (h.mean().unwrap(), h.raw_moment(2).unwrap());
                direct -= s * mu1 * nf * gamma_ratio(nf + 1.0 - beta, nf + 1.0) / (beta - 1.0);
                direct += 0.5 * s * s * (mu2 - mu1 * mu1) * nf * gamma_ratio(nf + 1.0 - 2.0 * beta, nf + 1.0) / (2.0 * beta - 1.0);
                assert!((lp.estimate - direct).abs() < 1e-8, "{h} t={t}: {} vs {direct}", lp.estimate);
            }
        }
    }

    #[test]
    fn integrand_starts_at_one_and_decreases() {
        let cfg = QuadConfig::default();
        let h = FadingSpec::nakagami(2.0).unwrap();
        let mut p = GinibreProduct::new(&h, 2.5, &cfg).unwrap();
        assert_eq!(p.log_product(0.0).unwrap().estimate, 0.0);
        let mut prev = 1.0;
        for j in 1..=80 {
            let v = p.log_product(j as f64 * 0.1).unwrap().estimate.exp();
            assert!(v <= prev + 1e-14, "t = {}", j as f64 * 0.1);
            prev = v;
        }
    }

    #[test]
    fn two_forms_agree_for_rayleigh() {
        let cfg = QuadConfig::default();
        let a = ginibre_constant(&FadingSpec::rayleigh(), 2.0, &cfg).unwrap();
        let b = ginibre_nakagami_constant(2.0, 1.0, &cfg).unwrap();
        assert!((a.value / b.value - 1.0).abs() < 1e-6, "{} vs {}", a.value, b.value);
        assert!(a.bracket_low <= a.value && a.value <= a.bracket_high);
        assert!((2.0 * (-ln_beta(1.0, 0.5)).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jensen_coefficients() {
        let c = jensen_coefficient(&FadingSpec::rayleigh(), 2.0).unwrap();
        assert!((c - 0.886_226_925_452_758).abs() < 1e-12);
        assert_eq!(jensen_coefficient(&FadingSpec::Deterministic, 3.0).unwrap(), 1.0);
        let base = poisson_constant(2.0).unwrap();
        let lb = jensen_lower_bound(&FadingSpec::Deterministic, 2.0, &base).unwrap();
        assert_eq!(lb.value, base.value);
    }

    #[test]
    fn identity_check_values() {
        let cfg = QuadConfig::default();
        let r = h_integral_identity_check(&FadingSpec::rayleigh(), 2.0, &cfg).unwrap();
        assert!((r.closed_form - PI * PI.sqrt() / 2.0).abs() < 1e-12);
        assert!(r.rel_gap < 1e-8, "{r:?}");
        let r = h_integral_identity_check(&FadingSpec::Deterministic, 2.0, &cfg).unwrap();
        assert!((r.integral - PI).abs() < 1e-9 && r.rel_gap < 1e-8);
        let r = h_integral_identity_check(&FadingSpec::nakagami(4.0).unwrap(), 3.0, &cfg).unwrap();
        assert!(r.rel_gap < 1e-8, "{r:?}");
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn jensen_coefficient_at_most_one(m in 0.2f64..20.0, beta in 1.1f64..6.0) {
            let c = jensen_coefficient(&FadingSpec::nakagami(m).unwrap(), beta).unwrap();
            proptest::prop_assert!(c > 0.0 && c <= 1.0 + 1e-15);
        }
    }
}
