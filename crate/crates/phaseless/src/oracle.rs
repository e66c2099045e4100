//! Slow, independent ground truth used in tests and validation reports.
//!
//! Nothing here calls into the closed-form code paths it is meant to check:
//! the STFT is integrated directly from its definition, Fock norms are done
//! by two-dimensional quadrature, and the ℂ² ambiguity search carries its own
//! canonical-transform arithmetic. This module is deliberately simple and
//! deliberately slow.

use crate::hermite::{bargmann, BargmannPoly, HermiteSignal};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::fmt;

/// Quadrature rule tag for [`QuadratureGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    Trapezoid,
    GaussLegendre,
}

/// Truncated one-dimensional quadrature grid on `[-T, T]`.
///
/// The default (`T = 6`, 256 Gauss–Legendre nodes) integrates Gaussian-decay
/// integrands of the kind produced by Hermite expansions of degree ≤ 10 to
/// roughly 1e-10 for `|x|, |ω| ≤ 4`; tails beyond `T = 6` are below 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub nodes: usize,
    pub rule: QuadRule,
}

impl QuadratureGrid {
    pub fn new(half_width: f64, nodes: usize, rule: QuadRule) -> Result<Self, OracleError> {
        if half_width.is_nan() || half_width <= 0.0 {
            return Err(OracleError::InvalidGrid(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        if nodes < 64 {
            return Err(OracleError::InvalidGrid(format!(
                "need at least 64 nodes, got {nodes}"
            )));
        }
        Ok(Self {
            half_width,
            nodes,
            rule,
        })
    }

    /// Nodes and weights on `[-T, T]`.
    pub fn nodes_weights(&self) -> (Vec<f64>, Vec<f64>) {
        match self.rule {
            QuadRule::GaussLegendre => {
                let (x, w) = gauss_legendre(self.nodes);
                let t = self.half_width;
                (
                    x.iter().map(|xi| xi * t).collect(),
                    w.iter().map(|wi| wi * t).collect(),
                )
            }
            QuadRule::Trapezoid => {
                let n = self.nodes;
                let t = self.half_width;
                let h = 2.0 * t / (n - 1) as f64;
                let nodes: Vec<f64> = (0..n).map(|i| -t + i as f64 * h).collect();
                let weights: Vec<f64> = (0..n)
                    .map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h })
                    .collect();
                (nodes, weights)
            }
        }
    }

    fn doubled(&self) -> Self {
        Self {
            nodes: self.nodes * 2,
            ..*self
        }
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            half_width: 6.0,
            nodes: 256,
            rule: QuadRule::GaussLegendre,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    InvalidGrid(String),
    /// The internal self-check between node counts disagreed by more than 1e-6.
    GridTooCoarse {
        coarse: Complex64,
        fine: Complex64,
    },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::InvalidGrid(msg) => write!(f, "invalid quadrature grid: {msg}"),
            OracleError::GridTooCoarse { coarse, fine } => write!(
                f,
                "grid too coarse: {coarse} vs {fine} after doubling nodes"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn stft_integral(
    signal: &HermiteSignal,
    window: &HermiteSignal,
    point: (f64, f64),
    grid: &QuadratureGrid,
) -> Complex64 {
    let (x, omega) = point;
    let (nodes, weights) = grid.nodes_weights();
    let mut acc = Complex64::ZERO;
    for (&t, &w) in nodes.iter().zip(weights.iter()) {
        let phase = Complex64::new(0.0, -2.0 * PI * t * omega).exp();
        acc += w * signal.eval(t) * window.eval(t - x).conj() * phase;
    }
    acc
}

/// Direct numerical quadrature of `V_g f(x, ω) = ∫ f(t) g̅(t-x) e^{-2πitω} dt`.
///
/// A Richardson self-check recomputes with doubled nodes and reports
/// [`OracleError::GridTooCoarse`] if the two values differ by more than 1e-6.
pub fn stft_quadrature(
    signal: &HermiteSignal,
    window_signal: &HermiteSignal,
    point: (f64, f64),
    grid: &QuadratureGrid,
) -> Result<Complex64, OracleError> {
    let coarse = stft_integral(signal, window_signal, point, grid);
    let fine = stft_integral(signal, window_signal, point, &grid.doubled());
    if (coarse - fine).norm() > 1e-6 {
        return Err(OracleError::GridTooCoarse { coarse, fine });
    }
    Ok(fine)
}

/// Direct quadrature of the Bargmann integral
/// `Bf(z) = 2^{1/4} ∫ f(t) e^{2πtz - πt² - πz²/2} dt`.
pub fn bargmann_quadrature(
    signal: &HermiteSignal,
    z: Complex64,
    grid: &QuadratureGrid,
) -> Result<Complex64, OracleError> {
    let integral = |g: &QuadratureGrid| {
        let (nodes, weights) = g.nodes_weights();
        let mut acc = Complex64::ZERO;
        for (&t, &w) in nodes.iter().zip(weights.iter()) {
            let kernel = (2.0 * PI * t * z - PI * t * t - 0.5 * PI * z * z).exp();
            acc += w * signal.eval(t) * kernel;
        }
        2f64.powf(0.25) * acc
    };
    let coarse = integral(grid);
    let fine = integral(&grid.doubled());
    if (coarse - fine).norm() > 1e-6 * (1.0 + fine.norm()) {
        return Err(OracleError::GridTooCoarse { coarse, fine });
    }
    Ok(fine)
}

/// Two-dimensional polar quadrature of the 𝓕²_α norm of an arbitrary
/// pointwise-evaluable function:
/// `‖F‖²_α = (α/π) ∫ |F(z)|² e^{-α|z|²} dA(z)`.
///
/// Gauss–Legendre radially on `[0, radius]`, trapezoid (periodic, hence
/// spectral) in angle.
pub fn fock_norm_quadrature<F>(f: F, alpha: f64, radius: f64, radial: usize, angular: usize) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let (rx, rw) = gauss_legendre(radial);
    let mut acc = 0.0;
    for (&xi, &wi) in rx.iter().zip(rw.iter()) {
        let r = 0.5 * radius * (xi + 1.0);
        let wr = 0.5 * radius * wi;
        let mut ring = 0.0;
        for k in 0..angular {
            let theta = 2.0 * PI * k as f64 / angular as f64;
            let z = Complex64::from_polar(r, theta);
            ring += f(z).norm_sqr();
        }
        ring *= 2.0 * PI / angular as f64;
        acc += wr * ring * (-alpha * r * r).exp() * r;
    }
    (alpha / PI * acc).sqrt()
}

/// Certificate polynomial `G = F·H·(F·H' - F'·H)` with `F = Bf`, `H = Bh`.
///
/// `G` vanishes on the (conjugated) sample set whenever `f` and `h` produce
/// the same multi-window spectrogram magnitudes there; its degree is at most
/// `4N - 1` for degree-`N` inputs, and it lives in 𝓕²_{4π}(ℂ).
pub fn certificate_polynomial(f: &HermiteSignal, h: &HermiteSignal) -> BargmannPoly {
    let bf = bargmann(f);
    let bh = bargmann(h);
    let wronskian = bf.mul(&bh.derivative()).sub(&bf.derivative().mul(&bh));
    bf.mul(&bh.mul(&wronskian))
}

// ---------------------------------------------------------------------------
// Brute-force ambiguity search in ℂ²
// ---------------------------------------------------------------------------

type C2 = [Complex64; 2];

fn inner(z: &C2, phi: &C2) -> Complex64 {
    z[0] * phi[0].conj() + z[1] * phi[1].conj()
}

fn magnitudes(frame: &[C2], z: &C2) -> Vec<f64> {
    frame.iter().map(|phi| inner(z, phi).norm()).collect()
}

fn up_to_phase_distance(a: &C2, b: &C2) -> f64 {
    let ip = a[0] * b[0].conj() + a[1] * b[1].conj();
    let tau = if ip.norm() == 0.0 {
        Complex64::ONE
    } else {
        ip / ip.norm()
    };
    ((a[0] - tau * b[0]).norm_sqr() + (a[1] - tau * b[1]).norm_sqr()).sqrt()
}

/// Reflection of `u` across the line through `base` with unit direction `dir`.
fn reflect(u: Complex64, base: Complex64, dir: Complex64) -> Complex64 {
    base + dir * ((u - base) / dir).conj()
}

struct Canonical {
    /// A = [[p̄, q̄], [-q, p]] for the anchor vector (p, q); A*A = s·I.
    a: [[Complex64; 2]; 2],
    s: f64,
}

impl Canonical {
    fn for_anchor(phi0: &C2) -> Self {
        let (p, q) = (phi0[0], phi0[1]);
        Self {
            a: [[p.conj(), q.conj()], [-q, p]],
            s: p.norm_sqr() + q.norm_sqr(),
        }
    }

    fn apply(&self, v: &C2) -> C2 {
        [
            self.a[0][0] * v[0] + self.a[0][1] * v[1],
            self.a[1][0] * v[0] + self.a[1][1] * v[1],
        ]
    }

    /// A^H v, the inverse transform up to the positive factor s.
    fn apply_adjoint(&self, v: &C2) -> C2 {
        [
            self.a[0][0].conj() * v[0] + self.a[1][0].conj() * v[1],
            self.a[0][1].conj() * v[0] + self.a[1][1].conj() * v[1],
        ]
    }
}

/// Checks that a candidate pair genuinely violates phase retrieval for the
/// frame: equal magnitudes to 1e-10 and orbit distance above 1e-6.
fn is_violating_pair(frame: &[C2], z: &C2, w: &C2) -> bool {
    let mz = magnitudes(frame, z);
    let mw = magnitudes(frame, w);
    mz.iter()
        .zip(mw.iter())
        .all(|(a, b)| (a - b).abs() <= 1e-10)
        && up_to_phase_distance(z, w) > 1e-6
}

/// Deterministic constructions for degenerate and collinear-ratio frames.
fn deterministic_pair(frame: &[C2]) -> Option<(C2, C2)> {
    let nonzero: Vec<&C2> = frame
        .iter()
        .filter(|phi| phi[0].norm_sqr() + phi[1].norm_sqr() > 0.0)
        .collect();
    let zero = Complex64::ZERO;
    let one = Complex64::ONE;
    if nonzero.is_empty() {
        // no constraints at all
        return Some(([one, zero], [one + one, zero]));
    }
    let canon = Canonical::for_anchor(nonzero[0]);
    // Ratio anchors of the transformed vectors; entries parallel to the
    // anchor contribute no ratio.
    let mut betas: Vec<Complex64> = Vec::new();
    for phi in nonzero.iter().skip(1) {
        let psi = canon.apply(phi);
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if psi[1].norm() > 1e-10 * norm {
            betas.push(psi[0] / psi[1]);
        }
    }
    let candidate = if betas.is_empty() {
        // only the second canonical coordinate is unseen
        Some(([zero, one], [zero, one + one]))
    } else {
        // diameter pair defines the tentative line through the ratios
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..betas.len() {
            for j in (i + 1)..betas.len() {
                let d = (betas[i] - betas[j]).norm();
                if d > best.2 {
                    best = (i, j, d);
                }
            }
        }
        let diam = best.2;
        let beta_scale = 1.0 + betas.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let (p, q) = if diam <= 1e-10 * beta_scale {
            // all ratios coincide: any two points equidistant from it
            let a = betas[0];
            (a + one, a + Complex64::i())
        } else {
            let base = betas[best.0];
            let dir = (betas[best.1] - base) / diam;
            let collinear = betas
                .iter()
                .all(|b| ((b - base) / dir).im.abs() <= 1e-10 * diam.max(beta_scale));
            if !collinear {
                return None;
            }
            let offset = Complex64::i() * dir * diam.max(1.0);
            (base + offset, base - offset)
        };
        Some(([-one, p.conj()], [-one, q.conj()]))
    };
    candidate.and_then(|(zt, wt)| {
        let z = canon.apply_adjoint(&zt);
        let w = canon.apply_adjoint(&wt);
        is_violating_pair(frame, &z, &w).then_some((z, w))
    })
}

/// Brute-force falsifier for phase retrieval in ℂ².
///
/// The deterministic reflection construction is tried first; it succeeds
/// exactly on frames that fail the collinearity characterization (including
/// degenerate frames with fewer than four effective directions). Randomized
/// trials then sample unit vectors `z`, reflect the canonical ratio across
/// each line spanned by a pair of anchor points and test whether the mirror
/// point reproduces all magnitudes: a hit means a violating pair. Returns the
/// first hit in deterministic trial order for the given seed, or `None`.
pub fn ambiguity_search_c2(frame: &[C2], trials: usize, rng_seed: u64) -> Option<(C2, C2)> {
    assert!(!frame.is_empty(), "ambiguity search needs at least one vector");
    if let Some(pair) = deterministic_pair(frame) {
        return Some(pair);
    }
    // From here on the frame has a nonzero anchor and at least three ratio
    // anchors, otherwise the deterministic construction would have fired.
    let phi0 = frame
        .iter()
        .find(|phi| phi[0].norm_sqr() + phi[1].norm_sqr() > 0.0)?;
    let canon = Canonical::for_anchor(phi0);
    let mut anchors: Vec<Complex64> = Vec::new();
    for phi in frame.iter() {
        let psi = canon.apply(phi);
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if norm > 0.0 && psi[1].norm() > 1e-10 * norm {
            // the ratio u = y₂/y₁ satisfies |u - (-β̄ₖ)| = mₖ / (|μₖ| |y₁|)
            anchors.push(-(psi[0] / psi[1]).conj());
        }
    }
    if anchors.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials {
        let mut z = [
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            ),
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            ),
        ];
        let norm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        if norm == 0.0 {
            continue;
        }
        z = [z[0] / norm, z[1] / norm];
        let y = {
            let av = canon.apply(&z);
            [av[0] / canon.s, av[1] / canon.s]
        };
        if y[0].norm() < 1e-6 {
            continue;
        }
        let u = y[1] / y[0];
        for i in 0..anchors.len() {
            for j in (i + 1)..anchors.len() {
                let (ai, aj) = (anchors[i], anchors[j]);
                let sep = (ai - aj).norm();
                if sep < 1e-9 {
                    continue;
                }
                let mirror = reflect(u, ai, (aj - ai) / sep);
                let w = canon.apply_adjoint(&[y[0], mirror * y[0]]);
                if is_violating_pair(frame, &z, &w) {
                    return Some((z, w));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_legendre_integrates_monomials() {
        let (x, w) = gauss_legendre(64);
        for k in 0..10usize {
            let got: f64 = x.iter().zip(w.iter()).map(|(&xi, &wi)| wi * xi.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - exact).abs() < 1e-13, "k = {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn stft_quadrature_reference_values() {
        let grid = QuadratureGrid::default();
        let h0 = HermiteSignal::basis(0);
        let h1 = HermiteSignal::basis(1);
        let v = stft_quadrature(&h0, &h0, (0.0, 0.0), &grid).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-8);
        let v = stft_quadrature(&h0, &h0, (1.0, 0.0), &grid).unwrap();
        assert!((v.norm() - (-PI / 2.0).exp()).abs() < 1e-6);
        let v = stft_quadrature(&h1, &h0, (0.0, 0.0), &grid).unwrap();
        assert!(v.norm() < 1e-8);
    }

    #[test]
    fn trapezoid_rule_agrees_on_smooth_decay() {
        let gl = QuadratureGrid::default();
        let tr = QuadratureGrid::new(6.0, 512, QuadRule::Trapezoid).unwrap();
        let f = HermiteSignal::random(4, 3);
        let g = HermiteSignal::random(2, 4);
        let a = stft_quadrature(&f, &g, (0.7, -1.1), &gl).unwrap();
        let b = stft_quadrature(&f, &g, (0.7, -1.1), &tr).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn grid_too_coarse_is_reported() {
        // 64 nodes cannot resolve a 20 Hz modulation over [-6, 6]
        let grid = QuadratureGrid::new(6.0, 64, QuadRule::GaussLegendre).unwrap();
        let h0 = HermiteSignal::basis(0);
        let err = stft_quadrature(&h0, &h0, (0.0, 20.0), &grid);
        assert!(matches!(err, Err(OracleError::GridTooCoarse { .. })));
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(QuadratureGrid::new(0.0, 256, QuadRule::GaussLegendre).is_err());
        assert!(QuadratureGrid::new(6.0, 32, QuadRule::GaussLegendre).is_err());
    }

    #[test]
    fn certificate_examples() {
        // identical inputs give the zero polynomial
        let f = HermiteSignal::random(5, 7);
        let g = certificate_polynomial(&f, &f);
        assert!(g.coeffs.iter().all(|c| c.norm() < 1e-12));

        // f = h₀, h = h₁: G(z) = π z
        let g = certificate_polynomial(&HermiteSignal::basis(0), &HermiteSignal::basis(1));
        assert_eq!(g.degree(), Some(1));
        assert!((g.coeffs[1] - c(PI, 0.0)).norm() < 1e-12);
        assert!(g.coeffs[0].norm() < 1e-15);
        assert!((g.alpha - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn certificate_phase_scaling_keeps_zero_set() {
        let f = HermiteSignal::random(4, 17);
        let h = HermiteSignal::random(4, 18);
        let tau = Complex64::from_polar(1.0, 0.83);
        let g = certificate_polynomial(&f, &h);
        let g_scaled = certificate_polynomial(&f.scaled(tau), &h);
        // G(τf, h) = τ² G(f, h): same zero set
        let ratio = tau * tau;
        for (a, b) in g_scaled.coeffs.iter().zip(g.coeffs.iter()) {
            assert!((a - ratio * b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn search_finds_pair_for_collinear_frame() {
        let frame = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0)],
            [c(2.0, 0.0), c(1.0, 0.0)],
        ];
        let (z, w) = ambiguity_search_c2(&frame, 10, 1).expect("collinear frame must fail");
        assert!(is_violating_pair(&frame, &z, &w));
    }

    #[test]
    fn search_finds_nothing_for_good_frame() {
        let frame = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0)],
            [c(-1.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 1.0), c(1.0, 0.0)],
        ];
        assert!(ambiguity_search_c2(&frame, 100_000, 2).is_none());
    }

    #[test]
    fn search_single_vector_frame_immediate() {
        let frame = [[c(1.0, 0.0), c(0.0, 0.0)]];
        let (z, w) = ambiguity_search_c2(&frame, 1, 3).expect("single vector cannot retrieve");
        assert!(is_violating_pair(&frame, &z, &w));
        // the unseen coordinate carries the difference
        assert!(z[0].norm() < 1e-12 && w[0].norm() < 1e-12);
    }

    #[test]
    fn search_handles_zero_anchor_and_mu_zero() {
        // leading zero vector: effectively a three-vector frame
        let with_zero = [
            [c(0.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0)],
            [c(-1.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 1.0), c(1.0, 0.0)],
        ];
        let (z, w) = ambiguity_search_c2(&with_zero, 10, 4).expect("zero anchor must fail");
        assert!(is_violating_pair(&with_zero, &z, &w));

        // one vector parallel to the anchor: a ratio is missing
        let mu_zero = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0)],
            [c(5.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 1.0), c(1.0, 0.0)],
        ];
        let (z, w) = ambiguity_search_c2(&mu_zero, 10, 5).expect("mu = 0 must fail");
        assert!(is_violating_pair(&mu_zero, &z, &w));
    }
}
