//! Hermite functions, the finite signal model and its Bargmann-side picture.
//!
//! Signals are finite expansions `f = Σ cₙ hₙ` in the orthonormal Hermite
//! basis normalized so that `h₀(t) = 2^{1/4} e^{-π t²}`. In this convention
//! the Bargmann transform acts diagonally, `B hₙ(z) = (πⁿ/n!)^{1/2} zⁿ`, so
//! the transform of a finite expansion is a plain complex polynomial and the
//! short-time Fourier transform with windows in span{h₀, h₁} has a closed
//! form:
//!
//! ```text
//! V_{h₀} f(x, ω)    = F(z) / η(z),                     z = x - iω,
//! V_{√π h₁} f(x, ω) = (F'(z) - π z̄ F(z)) / η(z),
//! ```
//!
//! with `F = Bf` and the weight `η(z) = exp(-iπxy + π|z|²/2)` for `z = x+iy`.
//! Everything here is exact coefficient arithmetic except for pointwise
//! evaluation; the slow quadrature cross-checks live in [`crate::oracle`].

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Evaluates the `n`-th orthonormal Hermite function at `t`.
///
/// `h₀(t) = 2^{1/4} e^{-π t²}`, `h₁(t) = 2^{5/4} √π t e^{-π t²}`, and higher
/// orders follow the three-term recurrence
/// `h_{n+1} = 2t √(π/(n+1)) hₙ - √(n/(n+1)) h_{n-1}`,
/// which keeps the family orthonormal in this scaling.
pub fn hermite_eval(n: usize, t: f64) -> f64 {
    let h0 = 2f64.powf(0.25) * (-PI * t * t).exp();
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = 2.0 * t * PI.sqrt() * h0;
    for k in 1..n {
        let next = 2.0 * t * (PI / (k as f64 + 1.0)).sqrt() * cur
            - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// A signal given by its complex coefficients in the Hermite basis.
///
/// Trailing zero coefficients are allowed; [`HermiteSignal::degree`] ignores
/// them and reports `None` for the zero signal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSignal {
    pub coeffs: Vec<Complex64>,
}

impl HermiteSignal {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The basis signal `hₙ`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[n] = Complex64::ONE;
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    /// Highest index with a nonzero coefficient, `None` for the zero signal.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.re != 0.0 || c.im != 0.0)
    }

    /// L² norm; equals the ℓ² norm of the coefficients by orthonormality.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise evaluation `f(t) = Σ cₙ hₙ(t)` by a single upward recurrence.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        let mut prev = 0.0;
        let mut cur = 2f64.powf(0.25) * (-PI * t * t).exp();
        for (n, c) in self.coeffs.iter().enumerate() {
            acc += c * cur;
            let next = 2.0 * t * (PI / (n as f64 + 1.0)).sqrt() * cur
                - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        acc
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// True if every coefficient has imaginary part at most `tol` in modulus.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Distance to the phase orbit of `other`: `min_{|τ|=1} ‖self - τ·other‖`.
    ///
    /// The minimizing phase is `τ* = ⟨f,h⟩/|⟨f,h⟩|`; subtracting directly
    /// avoids the cancellation the closed-form `√(‖f‖²+‖h‖²-2|⟨f,h⟩|)`
    /// suffers from when the vectors nearly coincide.
    pub fn up_to_phase_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or(Complex64::ZERO);
        let mut inner = Complex64::ZERO;
        for i in 0..n {
            inner += at(&self.coeffs, i) * at(&other.coeffs, i).conj();
        }
        let tau = if inner.norm() == 0.0 {
            Complex64::ONE
        } else {
            inner / inner.norm()
        };
        (0..n)
            .map(|i| (at(&self.coeffs, i) - tau * at(&other.coeffs, i)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Multiplies by the unimodular scalar that makes the largest-modulus
    /// coefficient real nonnegative (ties broken by lower index).
    pub fn canonical_phase(&self) -> Self {
        Self {
            coeffs: canonicalize_phase(&self.coeffs),
        }
    }

    /// Seeded random signal of the given degree with complex-normal
    /// coefficients, normalized to unit L² norm.
    pub fn random(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        // make sure the top coefficient is not accidentally negligible
        if coeffs[degree].norm() < 1e-3 {
            coeffs[degree] = Complex64::new(1.0, 0.5);
        }
        let s = Self { coeffs };
        let n = s.norm();
        s.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Seeded random real-valued signal, unit norm.
    pub fn random_real(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs: Vec<f64> = (0..=degree).map(|_| StandardNormal.sample(&mut rng)).collect();
        if coeffs[degree].abs() < 1e-3 {
            coeffs[degree] = 1.0;
        }
        let s = Self::from_real(&coeffs);
        let n = s.norm();
        s.scaled(Complex64::new(1.0 / n, 0.0))
    }
}

/// Applies the canonical global phase to a coefficient vector.
pub(crate) fn canonicalize_phase(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut best = 0usize;
    let mut best_mod = -1.0;
    for (i, c) in coeffs.iter().enumerate() {
        if c.norm() > best_mod {
            best_mod = c.norm();
            best = i;
        }
    }
    if best_mod <= 0.0 {
        return coeffs.to_vec();
    }
    let tau = coeffs[best].conj() / best_mod;
    coeffs.iter().map(|c| c * tau).collect()
}

/// A window `g_p = λ h₀ + μ √π h₁` identified by its defining vector
/// `p = (λ, μ)`.
///
/// The derivative channel carries the factor √π (that scaled copy of h₁ is
/// the Gaussian derivative matched to the `e^{-π t²}` normalization), which
/// is what makes the closed-form identity
/// `V_{g_p} f(x, ω) · η(z) = λ̄ F(z) + μ̄ (F'(z) - π z̄ F(z))` hold with no
/// stray normalization. Scaling a window's defining vector only scales its
/// measurements, so the phase-retrieval geometry of a family depends on the
/// vectors `p` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub lambda: Complex64,
    pub mu: Complex64,
}

impl WindowSpec {
    pub fn new(lambda: Complex64, mu: Complex64) -> Self {
        Self { lambda, mu }
    }

    /// The defining vector as a point of ℂ².
    pub fn as_vector(&self) -> [Complex64; 2] {
        [self.lambda, self.mu]
    }

    /// The window as a Hermite expansion: coefficients `[λ, √π μ]`.
    pub fn signal(&self) -> HermiteSignal {
        HermiteSignal::new(vec![self.lambda, self.mu * PI.sqrt()])
    }
}

/// A complex polynomial viewed as an element of the Fock space 𝓕²_α(ℂ).
///
/// `alpha` records which weight the polynomial naturally lives under
/// (π for Bargmann transforms of signals; products add their weights).
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannPoly {
    pub coeffs: Vec<Complex64>,
    pub alpha: f64,
}

impl BargmannPoly {
    pub fn new(coeffs: Vec<Complex64>, alpha: f64) -> Self {
        Self { coeffs, alpha }
    }

    pub fn zero(alpha: f64) -> Self {
        Self {
            coeffs: Vec::new(),
            alpha,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.re != 0.0 || c.im != 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Exact symbolic derivative on coefficients.
    pub fn derivative(&self) -> BargmannPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * n as f64)
            .collect();
        BargmannPoly::new(coeffs, self.alpha)
    }

    /// Polynomial product; the Fock weights add (`FG ∈ 𝓕²_{α+β}`).
    pub fn mul(&self, other: &BargmannPoly) -> BargmannPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return BargmannPoly::zero(self.alpha + other.alpha);
        }
        let mut coeffs = vec![Complex64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BargmannPoly::new(coeffs, self.alpha + other.alpha)
    }

    pub fn sub(&self, other: &BargmannPoly) -> BargmannPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or(Complex64::ZERO);
        let coeffs = (0..n)
            .map(|i| at(&self.coeffs, i) - at(&other.coeffs, i))
            .collect();
        BargmannPoly::new(coeffs, self.alpha)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            alpha: self.alpha,
        }
    }
}

/// Bargmann transform of a finite Hermite expansion: the diagonal rule
/// `Fₙ = cₙ (πⁿ/n!)^{1/2}` yields a polynomial in 𝓕²_π(ℂ).
pub fn bargmann(signal: &HermiteSignal) -> BargmannPoly {
    let mut scale = 1.0;
    let coeffs = signal
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n > 0 {
                scale *= (PI / n as f64).sqrt();
            }
            c * scale
        })
        .collect();
    BargmannPoly::new(coeffs, PI)
}

/// Inverse of [`bargmann`]: `cₙ = Fₙ (n!/πⁿ)^{1/2}`.
pub fn inverse_bargmann(poly: &BargmannPoly) -> HermiteSignal {
    let mut scale = 1.0;
    let coeffs = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, f)| {
            if n > 0 {
                scale *= (n as f64 / PI).sqrt();
            }
            f * scale
        })
        .collect();
    HermiteSignal::new(coeffs)
}

/// The weight `η(z) = exp(-iπxy + π|z|²/2)` for `z = x + iy`.
///
/// Its modulus is exactly `exp(π|z|²/2)`.
pub fn eta(z: Complex64) -> Complex64 {
    Complex64::new(0.5 * PI * z.norm_sqr(), -PI * z.re * z.im).exp()
}

/// Closed-form STFT value `V_{g_p} f(x, ω)` for a window in span{h₀, h₁}.
///
/// With `z = x - iω` and `F = Bf` this is
/// `(λ̄ F(z) + μ̄ (F'(z) - π z̄ F(z))) / η(z)`.
pub fn stft_value(signal: &HermiteSignal, window: &WindowSpec, point: (f64, f64)) -> Complex64 {
    let poly = bargmann(signal);
    stft_value_prepared(&poly, &poly.derivative(), window, point)
}

/// Same as [`stft_value`] but with the Bargmann polynomial and its derivative
/// precomputed, for sampling many points of one signal.
pub fn stft_value_prepared(
    poly: &BargmannPoly,
    deriv: &BargmannPoly,
    window: &WindowSpec,
    point: (f64, f64),
) -> Complex64 {
    let z = Complex64::new(point.0, -point.1);
    let f = poly.eval(z);
    let v0 = f;
    let v1 = deriv.eval(z) - PI * z.conj() * f;
    (window.lambda.conj() * v0 + window.mu.conj() * v1) / eta(z)
}

/// Weighted shift `T_a F(z) = e^{α z ā - α|a|²/2} F(z - a)` on 𝓕²_α(ℂ),
/// returned as a pointwise-evaluable function.
///
/// The shift is unitary; at every `z` it satisfies
/// `|T_a F(z)| e^{-α|z|²/2} = |F(z-a)| e^{-α|z-a|²/2}`.
pub fn fock_shift(
    poly: &BargmannPoly,
    a: Complex64,
    alpha: f64,
) -> impl Fn(Complex64) -> Complex64 {
    assert!(alpha > 0.0, "fock_shift requires alpha > 0");
    let poly = poly.clone();
    move |z: Complex64| {
        let weight = (alpha * z * a.conj() - 0.5 * alpha * a.norm_sqr()).exp();
        weight * poly.eval(z - a)
    }
}

/// Exact 𝓕²_α norm of a polynomial via the monomial rule `‖zⁿ‖²_α = n!/αⁿ`.
pub fn fock_norm(poly: &BargmannPoly, alpha: f64) -> f64 {
    assert!(alpha > 0.0, "fock_norm requires alpha > 0");
    let mut weight = 1.0;
    let mut acc = 0.0;
    for (n, c) in poly.coeffs.iter().enumerate() {
        if n > 0 {
            weight *= n as f64 / alpha;
        }
        acc += c.norm_sqr() * weight;
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermite_values_at_zero() {
        assert!((hermite_eval(0, 0.0) - 2f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(hermite_eval(1, 0.0), 0.0);
        // odd orders vanish at the origin
        assert_eq!(hermite_eval(5, 0.0), 0.0);
    }

    #[test]
    fn signal_eval_matches_termwise_sum() {
        let s = HermiteSignal::new(vec![c(0.3, -1.0), c(0.0, 0.5), c(2.0, 0.0), c(-0.7, 0.1)]);
        for &t in &[-1.3, -0.2, 0.0, 0.45, 2.0] {
            let direct: Complex64 = s
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, cn)| cn * hermite_eval(n, t))
                .sum();
            assert!((s.eval(t) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn degree_skips_trailing_zeros() {
        let s = HermiteSignal::new(vec![c(1.0, 0.0), Complex64::ZERO, Complex64::ZERO]);
        assert_eq!(s.degree(), Some(0));
        assert_eq!(HermiteSignal::zero().degree(), None);
    }

    #[test]
    fn bargmann_diagonal_rule() {
        // Bh₀ = 1, Bh₁ = √π z, zero signal → zero polynomial.
        let f0 = bargmann(&HermiteSignal::basis(0));
        assert_eq!(f0.coeffs, vec![Complex64::ONE]);
        let f1 = bargmann(&HermiteSignal::basis(1));
        assert!((f1.coeffs[1] - c(PI.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(f1.coeffs[0], Complex64::ZERO);
        assert_eq!(bargmann(&HermiteSignal::zero()).degree(), None);
    }

    #[test]
    fn bargmann_round_trip_and_isometry() {
        let s = HermiteSignal::random(8, 11);
        let back = inverse_bargmann(&bargmann(&s));
        for (a, b) in s.coeffs.iter().zip(back.coeffs.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
        // ‖f‖_{ℓ²} = ‖Bf‖_π exactly under the diagonal scaling
        assert!((s.norm() - fock_norm(&bargmann(&s), PI)).abs() < 1e-13);
    }

    #[test]
    fn stft_trivial_values() {
        let h0 = HermiteSignal::basis(0);
        let p10 = WindowSpec::new(Complex64::ONE, Complex64::ZERO);
        let p01 = WindowSpec::new(Complex64::ZERO, Complex64::ONE);
        assert!((stft_value(&h0, &p10, (0.0, 0.0)) - Complex64::ONE).norm() < 1e-14);
        assert!(stft_value(&h0, &p01, (0.0, 0.0)).norm() < 1e-14);
        let v = stft_value(&h0, &p10, (1.0, 0.0));
        assert!((v.norm() - (-PI / 2.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn fock_shift_examples() {
        // a = 0 is the identity on evaluations
        let f = BargmannPoly::new(vec![c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0)], PI);
        let shifted = fock_shift(&f, Complex64::ZERO, PI);
        for &z in &[c(0.0, 0.0), c(1.0, -0.5), c(-2.0, 0.3)] {
            assert!((shifted(z) - f.eval(z)).norm() < 1e-14);
        }
        // F = 1, α = π, a = 1: T_a F(1) = e^{π/2}
        let one = BargmannPoly::new(vec![Complex64::ONE], PI);
        let t = fock_shift(&one, Complex64::ONE, PI);
        assert!((t(Complex64::ONE) - c((PI / 2.0).exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fock_shift_weighted_modulus_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = BargmannPoly::new(
            (0..5)
                .map(|_| {
                    c(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect(),
            PI,
        );
        let alpha = PI;
        for _ in 0..50 {
            let a = c(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
            let z = c(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
            let lhs = fock_shift(&f, a, alpha)(z).norm() * (-alpha * z.norm_sqr() / 2.0).exp();
            let rhs = f.eval(z - a).norm() * (-alpha * (z - a).norm_sqr() / 2.0).exp();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs),
                "weighted modulus identity violated: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn fock_norm_examples() {
        let one = BargmannPoly::new(vec![Complex64::ONE], PI);
        assert_eq!(fock_norm(&one, PI), 1.0);
        let sqrtpi_z = BargmannPoly::new(vec![Complex64::ZERO, c(PI.sqrt(), 0.0)], PI);
        assert!((fock_norm(&sqrtpi_z, PI) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fock_pointwise_bound() {
        // |F(z)| e^{-α|z|²/2} ≤ ‖F‖_α
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let f = BargmannPoly::new(
                (0..6)
                    .map(|_| {
                        c(
                            StandardNormal.sample(&mut rng),
                            StandardNormal.sample(&mut rng),
                        )
                    })
                    .collect(),
                PI,
            );
            let alpha = 1.0 + 4.0 * rand::Rng::random::<f64>(&mut rng);
            let norm = fock_norm(&f, alpha);
            for _ in 0..10 {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let z = c(2.0 * re, 2.0 * im);
                let lhs = f.eval(z).norm() * (-alpha * z.norm_sqr() / 2.0).exp();
                assert!(lhs <= norm * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn fock_product_bound() {
        // ‖FH‖_{α+β} ≤ √((α+β)/β) ‖F‖_α ‖H‖_β for random degree ≤ 4 pairs
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let rand_poly = |rng: &mut ChaCha8Rng| {
                BargmannPoly::new(
                    (0..5)
                        .map(|_| {
                            c(
                                StandardNormal.sample(rng),
                                StandardNormal.sample(rng),
                            )
                        })
                        .collect(),
                    0.0,
                )
            };
            let f = rand_poly(&mut rng);
            let h = rand_poly(&mut rng);
            let alpha = 0.5 + 3.0 * rand::Rng::random::<f64>(&mut rng);
            let beta = 0.5 + 3.0 * rand::Rng::random::<f64>(&mut rng);
            let lhs = fock_norm(&f.mul(&h), alpha + beta);
            let rhs = ((alpha + beta) / beta).sqrt() * fock_norm(&f, alpha) * fock_norm(&h, beta);
            assert!(lhs <= rhs * (1.0 + 1e-12), "product bound: {lhs} > {rhs}");
        }
    }

    #[test]
    fn canonical_phase_makes_largest_coefficient_real() {
        let s = HermiteSignal::new(vec![c(0.1, 0.2), c(-3.0, 4.0), c(1.0, 0.0)]);
        let canon = s.canonical_phase();
        assert!(canon.coeffs[1].im.abs() < 1e-14);
        assert!(canon.coeffs[1].re > 0.0);
        // the orbit distance to the original is zero
        assert!(s.up_to_phase_distance(&canon) < 1e-12);
    }
}
