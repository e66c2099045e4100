//! The reconstruction pipeline: multi-window spectrogram magnitudes on a
//! lattice window → Hermite coefficients, up to a global phase.
//!
//! Per sample point, the magnitude tuple pins `(V_{h₀}f, V_{h₁}f)` up to a
//! point-dependent phase (the ℂ² solver), which yields the phase-invariant
//! pair `u = |F|²` and `w = F̄·F'` at `z = x - iω`. Any polynomial `X` of the
//! right degree that explains the data then satisfies the linear equations
//! `u_j X'(z_j) - w_j X(z_j) = 0`; with enough points the solution set is one
//! complex line, extracted here by singular-value analysis. Real-valued
//! signals get a second entry point that synthesizes data at conjugated
//! points (`u(z̄) = u(z)`, `w(z̄) = w̄(z)`) and constrains the coefficient
//! vector to be real, halving the sampling density needed.

use crate::frames::{self, FrameC2, FrameError, COLLINEARITY_TOL};
use crate::hermite::{
    bargmann, inverse_bargmann, BargmannPoly, HermiteSignal, WindowSpec,
};
use crate::lattice::PointSet;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::f64::consts::PI;
use std::fmt;

/// Minimal ratio of the two smallest singular values for the solution line
/// to count as numerically one-dimensional.
pub const NULLSPACE_GAP_MIN: f64 = 1e3;

/// A point contributes a log-derivative equation only if its `u` exceeds
/// this fraction of the largest `u` (the polynomial may vanish elsewhere).
pub const ACTIVE_U_REL: f64 = 1e-12;

/// The real-constrained residual must stay within this factor of the
/// unconstrained one, otherwise the data did not come from a real signal.
pub const REALITY_FACTOR: f64 = 10.0;

/// Minimal number of sample points for degree bound `n`: `4n + 9`, i.e.
/// strictly more than `4n + 8`. The certificate polynomial of a degree-`n`
/// pair has degree at most `4n - 1`, so this margin forces it to vanish
/// identically when it vanishes on the window.
pub fn point_budget(degree_bound: usize) -> usize {
    4 * degree_bound + 9
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReconstructError {
    /// The window family cannot do phase retrieval; nothing is solved.
    FrameRejected(String),
    /// Too few sample points for the requested degree bound.
    Sizing { needed: usize, got: usize },
    /// The ℂ² inversion failed at a sample point.
    PointInfeasible { x: f64, omega: f64, detail: String },
    /// Real-mode input that is inconsistent with any real signal.
    RealityViolated { constrained: f64, unconstrained: f64 },
}

impl fmt::Display for ReconstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructError::FrameRejected(why) => write!(f, "frame rejected: {why}"),
            ReconstructError::Sizing { needed, got } => {
                write!(f, "too few sample points: need {needed}, got {got}")
            }
            ReconstructError::PointInfeasible { x, omega, detail } => {
                write!(f, "infeasible magnitudes at ({x}, {omega}): {detail}")
            }
            ReconstructError::RealityViolated {
                constrained,
                unconstrained,
            } => write!(
                f,
                "data is not from a real signal: real-constrained residual {constrained:.3e} \
                 vs unconstrained {unconstrained:.3e}"
            ),
        }
    }
}

impl std::error::Error for ReconstructError {}

/// Spectrogram magnitudes of one signal: per point, one nonnegative value
/// per window, `|V_{g_p} f(x, ω)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub frame: Vec<WindowSpec>,
    pub points: PointSet,
    /// Shape `points.len() × frame.len()`.
    pub magnitudes: Vec<Vec<f64>>,
}

/// Phase-invariant data at one Bargmann-plane point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub z: Complex64,
    /// `|F(z)|²`, real nonnegative.
    pub u: f64,
    /// `conj(F(z))·F'(z)`.
    pub w: Complex64,
    /// `|F'(z)|²`, kept for the pointwise Cauchy–Schwarz check `|w|² ≤ u·|F'|²`.
    pub fprime_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseInvariantData {
    pub points: Vec<PhasePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    ZeroSignal,
    Ambiguous,
    Infeasible,
}

/// Result of the linear solve, before conversion back to Hermite coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Canonical-phase polynomial (one representative of the τ-orbit).
    pub poly: BargmannPoly,
    pub status: Status,
    /// Second-smallest over smallest singular value (capped at 1e300).
    pub nullspace_gap: f64,
    /// Worst relative mismatch of the scaled solution against `u` and `w`.
    pub data_residual: f64,
}

fn ser_coeffs<S: Serializer>(sig: &HermiteSignal, s: S) -> Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = sig.coeffs.iter().map(|c| [c.re, c.im]).collect();
    pairs.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    #[serde(serialize_with = "ser_coeffs")]
    pub recovered: HermiteSignal,
    pub status: Status,
    pub nullspace_gap: f64,
    /// Worst magnitude mismatch of the re-sampled output against the input,
    /// relative to the largest input magnitude.
    pub residual: f64,
    /// The output is one representative of the global-phase orbit.
    pub phase_free: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions {
    pub degree_bound: usize,
    pub tol: f64,
    pub threads: usize,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            degree_bound: 8,
            tol: 1e-8,
            threads: 1,
        }
    }
}

fn frame_to_c2(frame: &[WindowSpec]) -> FrameC2 {
    FrameC2::new(frame.iter().map(|w| w.as_vector()).collect())
}

/// Exact closed-form magnitudes `|V_{g_p} f|` on a point set.
pub fn sample(signal: &HermiteSignal, frame: &[WindowSpec], points: &PointSet) -> SampleSet {
    let poly = bargmann(signal);
    let deriv = poly.derivative();
    let magnitudes = points
        .points
        .iter()
        .map(|&[x, omega]| {
            frame
                .iter()
                .map(|w| {
                    crate::hermite::stft_value_prepared(&poly, &deriv, w, (x, omega)).norm()
                })
                .collect()
        })
        .collect();
    SampleSet {
        frame: frame.to_vec(),
        points: points.clone(),
        magnitudes,
    }
}

fn recover_point(
    frame: &FrameC2,
    point: [f64; 2],
    mags: &[f64],
    tol: f64,
) -> Result<PhasePoint, ReconstructError> {
    let sol =
        frames::local_solve(frame, mags, tol).map_err(|e| ReconstructError::PointInfeasible {
            x: point[0],
            omega: point[1],
            detail: e.to_string(),
        })?;
    let [a, b] = sol.vector;
    let z = Complex64::new(point[0], -point[1]);
    let weight = (PI * z.norm_sqr()).exp();
    let fp = b + PI * z.conj() * a;
    Ok(PhasePoint {
        z,
        u: a.norm_sqr() * weight,
        w: weight * (a.conj() * b + PI * z.conj() * a.norm_sqr()),
        fprime_sq: fp.norm_sqr() * weight,
    })
}

/// Inverts the per-point ℂ² problem and maps to phase-invariant data.
///
/// Requires a frame that does phase retrieval (checked by [`reconstruct`]).
/// Points are independent; with `threads > 1` they are processed in
/// contiguous chunks whose results land in pre-assigned slots, so the output
/// is identical regardless of the schedule.
pub fn local_recovery(
    samples: &SampleSet,
    tol: f64,
    threads: usize,
) -> Result<PhaseInvariantData, ReconstructError> {
    let frame = frame_to_c2(&samples.frame);
    let n = samples.points.len();
    let threads = threads.clamp(1, n.max(1));
    let mut results: Vec<Result<PhasePoint, ReconstructError>> = Vec::with_capacity(n);
    if threads == 1 {
        for (point, mags) in samples.points.points.iter().zip(&samples.magnitudes) {
            results.push(recover_point(&frame, *point, mags, tol));
        }
    } else {
        let chunk = n.div_ceil(threads);
        let mut slots: Vec<Vec<Result<PhasePoint, ReconstructError>>> =
            Vec::with_capacity(threads);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for c in 0..threads {
                let lo = c * chunk;
                let hi = ((c + 1) * chunk).min(n);
                let frame = &frame;
                handles.push(scope.spawn(move || {
                    (lo..hi)
                        .map(|i| {
                            recover_point(
                                frame,
                                samples.points.points[i],
                                &samples.magnitudes[i],
                                tol,
                            )
                        })
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                slots.push(h.join().expect("recovery worker panicked"));
            }
        });
        results = slots.into_iter().flatten().collect();
    }
    let mut points = Vec::with_capacity(n);
    for r in results {
        points.push(r?);
    }
    Ok(PhaseInvariantData { points })
}

/// Synthesizes data at conjugated points from the conjugate symmetry of real
/// signals: `u(z̄) = u(z)`, `w(z̄) = conj(w(z))`. Points whose conjugate is
/// already present (within 1e-9) are not duplicated.
pub fn conjugate_extend(data: &PhaseInvariantData) -> PhaseInvariantData {
    let mut points = data.points.clone();
    for p in &data.points {
        let zc = p.z.conj();
        let exists = points
            .iter()
            .any(|q| (q.z - zc).norm() <= 1e-9);
        if !exists {
            points.push(PhasePoint {
                z: zc,
                u: p.u,
                w: p.w.conj(),
                fprime_sq: p.fprime_sq,
            });
        }
    }
    PhaseInvariantData { points }
}

/// Builds the stacked rows `u_j X'(z_j) - w_j X(z_j)` over active points,
/// each row scaled to unit norm.
fn build_rows(data: &PhaseInvariantData, active: &[usize], ncols: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(active.len(), ncols);
    for (r, &j) in active.iter().enumerate() {
        let p = &data.points[j];
        let mut zk = Complex64::ONE; // z^{k-1} running power
        let mut row = vec![Complex64::ZERO; ncols];
        row[0] = -p.w; // derivative part is zero for k = 0
        for (k, slot) in row.iter_mut().enumerate().skip(1) {
            *slot = p.u * (k as f64) * zk - p.w * zk * p.z;
            zk *= p.z;
        }
        let norm = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (c, v) in m.row_mut(r).iter_mut().zip(row.iter()) {
                *c = v / norm;
            }
        }
    }
    m
}

/// Smallest-σ right singular vector and the gap σ₂/σ₁ of a complex matrix.
fn nullspace_complex(m: &DMatrix<Complex64>) -> (Vec<Complex64>, f64) {
    let ncols = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smallest = order[0];
    let sigma1 = svd.singular_values[smallest];
    let sigma2 = if order.len() > 1 {
        svd.singular_values[order[1]]
    } else {
        f64::INFINITY
    };
    let gap = if sigma1 == 0.0 {
        if sigma2 == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        sigma2 / sigma1
    };
    // v_t holds the adjoint of V; take the row and keep whichever of it and
    // its conjugate actually annihilates the matrix.
    let row: Vec<Complex64> = (0..ncols).map(|k| v_t[(smallest, k)]).collect();
    let conj: Vec<Complex64> = row.iter().map(|c| c.conj()).collect();
    let resid = |v: &[Complex64]| -> f64 {
        let x = DVector::from_column_slice(v);
        (m * x).norm()
    };
    let v = if resid(&row) <= resid(&conj) { row } else { conj };
    (v, gap.min(1e300))
}

fn nullspace_real(m: &DMatrix<f64>) -> (Vec<f64>, f64) {
    let ncols = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smallest = order[0];
    let sigma1 = svd.singular_values[smallest];
    let sigma2 = if order.len() > 1 {
        svd.singular_values[order[1]]
    } else {
        f64::INFINITY
    };
    let gap = if sigma1 == 0.0 {
        if sigma2 == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        sigma2 / sigma1
    };
    ((0..ncols).map(|k| v_t[(smallest, k)]).collect(), gap.min(1e300))
}

struct SolveSetup {
    active: Vec<usize>,
    u_max: f64,
}

fn solve_setup(
    data: &PhaseInvariantData,
    degree_bound: usize,
    tol: f64,
) -> Result<Option<SolveSetup>, ReconstructError> {
    let n_total = data.points.len();
    if n_total <= 4 * degree_bound {
        return Err(ReconstructError::Sizing {
            needed: 4 * degree_bound + 1,
            got: n_total,
        });
    }
    let u_max = data.points.iter().map(|p| p.u).fold(0.0, f64::max);
    if u_max <= tol {
        return Ok(None); // zero signal
    }
    let active: Vec<usize> = (0..n_total)
        .filter(|&j| data.points[j].u > ACTIVE_U_REL * u_max)
        .collect();
    if active.len() < degree_bound + 2 {
        return Err(ReconstructError::Sizing {
            needed: degree_bound + 2,
            got: active.len(),
        });
    }
    Ok(Some(SolveSetup { active, u_max }))
}

/// Scales the unit null vector so `|F(z*)|² = u` at the largest-`u` point,
/// canonicalizes the phase, and measures the worst relative mismatch against
/// the full data set.
fn finish_solve(
    data: &PhaseInvariantData,
    coeffs: Vec<Complex64>,
    u_max: f64,
    gap: f64,
    tol: f64,
) -> SolveOutcome {
    let jstar = (0..data.points.len())
        .max_by(|&a, &b| data.points[a].u.total_cmp(&data.points[b].u))
        .expect("nonempty data");
    let mut poly = BargmannPoly::new(coeffs, PI);
    let anchor = poly.eval(data.points[jstar].z).norm();
    let residual;
    if anchor == 0.0 {
        residual = f64::INFINITY;
    } else {
        let c = u_max.sqrt() / anchor;
        poly = poly.scaled(Complex64::new(c, 0.0));
        let deriv = poly.derivative();
        let w_scale = data
            .points
            .iter()
            .map(|p| p.w.norm())
            .fold(0.0, f64::max)
            .max(u_max);
        let mut resid_u = 0.0f64;
        let mut resid_w = 0.0f64;
        for p in &data.points {
            let f = poly.eval(p.z);
            resid_u = resid_u.max((f.norm_sqr() - p.u).abs());
            resid_w = resid_w.max((f.conj() * deriv.eval(p.z) - p.w).norm());
        }
        residual = (resid_u / u_max).max(resid_w / w_scale);
    }
    poly = BargmannPoly::new(crate::hermite::canonicalize_phase(&poly.coeffs), PI);
    let status = if gap < NULLSPACE_GAP_MIN {
        Status::Ambiguous
    } else if residual.is_nan() || residual > tol {
        Status::Infeasible
    } else {
        Status::Unique
    };
    SolveOutcome {
        poly,
        status,
        nullspace_gap: gap,
        data_residual: residual,
    }
}

/// Extracts the Bargmann polynomial from phase-invariant data as the
/// one-dimensional nullspace of the stacked linear system.
pub fn solve_bargmann(
    data: &PhaseInvariantData,
    degree_bound: usize,
    tol: f64,
) -> Result<SolveOutcome, ReconstructError> {
    let setup = match solve_setup(data, degree_bound, tol)? {
        Some(s) => s,
        None => {
            return Ok(SolveOutcome {
                poly: BargmannPoly::zero(PI),
                status: Status::ZeroSignal,
                nullspace_gap: 1e300,
                data_residual: 0.0,
            })
        }
    };
    if degree_bound == 0 {
        // only constants: modulus comes from the data directly
        return Ok(finish_solve(
            data,
            vec![Complex64::ONE],
            setup.u_max,
            1e300,
            tol,
        ));
    }
    let m = build_rows(data, &setup.active, degree_bound + 1);
    let (coeffs, gap) = nullspace_complex(&m);
    Ok(finish_solve(data, coeffs, setup.u_max, gap, tol))
}

/// Same linear system with the coefficient vector constrained to be real:
/// real and imaginary parts of every row are stacked into a real system.
pub fn solve_bargmann_real(
    data: &PhaseInvariantData,
    degree_bound: usize,
    tol: f64,
) -> Result<SolveOutcome, ReconstructError> {
    let setup = match solve_setup(data, degree_bound, tol)? {
        Some(s) => s,
        None => {
            return Ok(SolveOutcome {
                poly: BargmannPoly::zero(PI),
                status: Status::ZeroSignal,
                nullspace_gap: 1e300,
                data_residual: 0.0,
            })
        }
    };
    if degree_bound == 0 {
        return Ok(finish_solve(
            data,
            vec![Complex64::ONE],
            setup.u_max,
            1e300,
            tol,
        ));
    }
    let mc = build_rows(data, &setup.active, degree_bound + 1);
    let (rows, ncols) = (mc.nrows(), mc.ncols());
    let mut m = DMatrix::<f64>::zeros(2 * rows, ncols);
    for r in 0..rows {
        for k in 0..ncols {
            m[(r, k)] = mc[(r, k)].re;
            m[(rows + r, k)] = mc[(r, k)].im;
        }
    }
    let (raw, gap) = nullspace_real(&m);
    let coeffs: Vec<Complex64> = raw.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    Ok(finish_solve(data, coeffs, setup.u_max, gap, tol))
}

fn resample_residual(samples: &SampleSet, recovered: &HermiteSignal) -> f64 {
    let resampled = sample(recovered, &samples.frame, &samples.points);
    let mut max_mag = 0.0f64;
    let mut max_diff = 0.0f64;
    for (row_a, row_b) in samples.magnitudes.iter().zip(&resampled.magnitudes) {
        for (a, b) in row_a.iter().zip(row_b) {
            max_mag = max_mag.max(*a);
            max_diff = max_diff.max((a - b).abs());
        }
    }
    if max_mag == 0.0 {
        max_diff
    } else {
        max_diff / max_mag
    }
}

fn check_frame(samples: &SampleSet) -> Result<(), ReconstructError> {
    if samples.frame.len() < 4 {
        return Err(ReconstructError::FrameRejected(format!(
            "need at least 4 windows, got {}",
            samples.frame.len()
        )));
    }
    let frame = frame_to_c2(&samples.frame);
    match frames::does_phase_retrieval(&frame, COLLINEARITY_TOL) {
        Ok(d) if d.does_retrieval => Ok(()),
        Ok(d) => Err(ReconstructError::FrameRejected(format!(
            "window family cannot do phase retrieval: {:?}",
            d.reason
        ))),
        Err(FrameError::ZeroAnchor) => Err(ReconstructError::FrameRejected(
            "first window is zero".into(),
        )),
        Err(e) => Err(ReconstructError::FrameRejected(e.to_string())),
    }
}

fn report_from(
    samples: &SampleSet,
    outcome: SolveOutcome,
    tol: f64,
    force_real: bool,
) -> ReconstructionReport {
    let mut recovered = inverse_bargmann(&outcome.poly).canonical_phase();
    if force_real {
        for c in recovered.coeffs.iter_mut() {
            *c = Complex64::new(c.re, 0.0);
        }
    }
    let residual = resample_residual(samples, &recovered);
    let status = match outcome.status {
        Status::Unique if residual.is_nan() || residual > tol => Status::Infeasible,
        s => s,
    };
    ReconstructionReport {
        recovered,
        status,
        nullspace_gap: outcome.nullspace_gap,
        residual,
        phase_free: true,
    }
}

/// Full pipeline for complex signals: frame check, point budget, per-point
/// inversion, linear solve, inverse Bargmann scaling, re-sampling check.
pub fn reconstruct(
    samples: &SampleSet,
    opts: &ReconstructOptions,
) -> Result<ReconstructionReport, ReconstructError> {
    check_frame(samples)?;
    let needed = point_budget(opts.degree_bound);
    if samples.points.len() < needed {
        return Err(ReconstructError::Sizing {
            needed,
            got: samples.points.len(),
        });
    }
    let data = local_recovery(samples, opts.tol, opts.threads)?;
    let outcome = solve_bargmann(&data, opts.degree_bound, opts.tol)?;
    Ok(report_from(samples, outcome, opts.tol, false))
}

/// Pipeline for real-valued signals sampled on a half-density set Γ.
///
/// Data at conj(Γ) is synthesized from conjugate symmetry; the point budget
/// applies to the doubled set. The unconstrained solve on the raw Γ data
/// serves as the reference for the reality check: if constraining the
/// coefficients to be real inflates the residual by more than
/// [`REALITY_FACTOR`] the input was not produced by a real signal.
pub fn reconstruct_real(
    samples: &SampleSet,
    opts: &ReconstructOptions,
) -> Result<ReconstructionReport, ReconstructError> {
    check_frame(samples)?;
    let data = local_recovery(samples, opts.tol, opts.threads)?;
    let doubled = conjugate_extend(&data);
    let needed = point_budget(opts.degree_bound);
    if doubled.points.len() < needed {
        return Err(ReconstructError::Sizing {
            needed,
            got: doubled.points.len(),
        });
    }
    let real_out = solve_bargmann_real(&doubled, opts.degree_bound, opts.tol)?;
    // Reference: unconstrained solve on the raw (undoubled) data. If the
    // window is too small for it, the reality check falls back to an
    // absolute test at the tolerance floor.
    let unconstrained = match solve_bargmann(&data, opts.degree_bound, opts.tol) {
        Ok(out) => out.data_residual,
        Err(ReconstructError::Sizing { .. }) => opts.tol,
        Err(e) => return Err(e),
    };
    if real_out.data_residual > REALITY_FACTOR * unconstrained.max(opts.tol) {
        return Err(ReconstructError::RealityViolated {
            constrained: real_out.data_residual,
            unconstrained,
        });
    }
    Ok(report_from(samples, real_out, opts.tol, true))
}
