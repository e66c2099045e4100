//! Phase retrieval in ℂ².
//!
//! A family of four vectors φ₀..φ₃ does phase retrieval exactly when, after
//! the canonical transform `A = [[p̄, q̄], [-q, p]]` built from the anchor
//! φ₀ = (p, q), every transformed vector has a nonzero second component μₖ
//! and the ratios βₖ = λₖ/μₖ are not collinear. The same transform reduces
//! magnitude inversion to planar trilateration: fixing `|y₁|` from the anchor
//! measurement, the remaining magnitudes pin `u = y₂/y₁` as the point at
//! known distances from the three anchors `-β̄ₖ`. Collinear ratios admit an
//! explicit mirror pair instead, which [`ambiguity_pair`] constructs.

use num_complex::Complex64;
use std::fmt;

/// A vector of ℂ².
pub type C2 = [Complex64; 2];

/// Relative collinearity tolerance: triangle area over squared diameter.
pub const COLLINEARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum FrameError {
    /// φ₀ = 0: the family cannot do phase retrieval and has no canonical form.
    ZeroAnchor,
    /// Collinear anchors leave two mirror solutions.
    AmbiguousCollinear,
    /// No point matches all three distances within tolerance.
    Inconsistent { residual: f64 },
    /// The magnitudes are not realizable by any vector within tolerance.
    Infeasible { residual: f64, detail: String },
    /// Requested an ambiguity pair for a frame that does phase retrieval
    /// (or whose failure is not of the collinear-ratio kind).
    NotCollinear,
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::ZeroAnchor => write!(f, "anchor vector φ₀ is zero"),
            FrameError::AmbiguousCollinear => {
                write!(f, "collinear anchors: two mirror solutions exist")
            }
            FrameError::Inconsistent { residual } => {
                write!(f, "distances admit no common point (residual {residual:.3e})")
            }
            FrameError::Infeasible { residual, detail } => {
                write!(f, "magnitudes not realizable (residual {residual:.3e}): {detail}")
            }
            FrameError::NotCollinear => {
                write!(f, "no collinear ambiguity pair exists for this frame")
            }
        }
    }
}

impl std::error::Error for FrameError {}

/// An ordered family of ℂ² vectors; four are needed for the decision
/// procedure, extras over-determine the local solver.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameC2 {
    pub vectors: Vec<C2>,
}

impl FrameC2 {
    pub fn new(vectors: Vec<C2>) -> Self {
        Self { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// The frame after the canonical transform with respect to φ₀.
///
/// `transform` maps φ₀ to `(λ₀_scale, 0)` and φₖ to `(λₖ, μₖ)`; entries with
/// `μₖ = 0` have no ratio and their `betas` slot is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFrame {
    pub lambdas: Vec<Complex64>,
    pub mus: Vec<Complex64>,
    pub betas: Vec<Option<Complex64>>,
    pub lambda0_scale: f64,
    pub transform: [[Complex64; 2]; 2],
}

impl CanonicalFrame {
    /// Applies the transform to a vector.
    pub fn apply(&self, v: &C2) -> C2 {
        let a = &self.transform;
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    /// Applies the adjoint transform; `Aᴴ A = lambda0_scale · I`.
    pub fn apply_adjoint(&self, v: &C2) -> C2 {
        let a = &self.transform;
        [
            a[0][0].conj() * v[0] + a[1][0].conj() * v[1],
            a[0][1].conj() * v[0] + a[1][1].conj() * v[1],
        ]
    }
}

pub fn inner(z: &C2, phi: &C2) -> Complex64 {
    z[0] * phi[0].conj() + z[1] * phi[1].conj()
}

/// `min_{|τ|=1} ‖a - τ·b‖`, computed by direct subtraction at the optimal
/// phase to avoid cancellation near the orbit.
pub fn up_to_phase_distance(a: &C2, b: &C2) -> f64 {
    let ip = a[0] * b[0].conj() + a[1] * b[1].conj();
    let tau = if ip.norm() == 0.0 {
        Complex64::ONE
    } else {
        ip / ip.norm()
    };
    ((a[0] - tau * b[0]).norm_sqr() + (a[1] - tau * b[1]).norm_sqr()).sqrt()
}

/// Canonical phase for a ℂ² vector: largest-modulus coordinate made real
/// nonnegative, ties broken by the lower index.
fn canonical_phase(v: &C2) -> C2 {
    let pick = if v[1].norm() > v[0].norm() { 1 } else { 0 };
    let m = v[pick].norm();
    if m == 0.0 {
        return *v;
    }
    let tau = v[pick].conj() / m;
    [v[0] * tau, v[1] * tau]
}

/// Computes `λₖ = ⟨φₖ, φ₀⟩`, `μₖ = ⟨φₖ, Jφ̄₀⟩` and the canonical transform.
pub fn canonicalize(frame: &FrameC2) -> Result<CanonicalFrame, FrameError> {
    let phi0 = frame.vectors.first().ok_or(FrameError::ZeroAnchor)?;
    let (p, q) = (phi0[0], phi0[1]);
    let scale = p.norm_sqr() + q.norm_sqr();
    if scale == 0.0 {
        return Err(FrameError::ZeroAnchor);
    }
    let transform = [[p.conj(), q.conj()], [-q, p]];
    let mut lambdas = Vec::new();
    let mut mus = Vec::new();
    let mut betas = Vec::new();
    for phi in frame.vectors.iter().skip(1) {
        let lambda = phi[0] * p.conj() + phi[1] * q.conj();
        let mu = -q * phi[0] + p * phi[1];
        let phi_norm = (phi[0].norm_sqr() + phi[1].norm_sqr()).sqrt();
        let beta = if mu.norm() > f64::EPSILON * scale.sqrt() * phi_norm {
            Some(lambda / mu)
        } else {
            None
        };
        lambdas.push(lambda);
        mus.push(mu);
        betas.push(beta);
    }
    Ok(CanonicalFrame {
        lambdas,
        mus,
        betas,
        lambda0_scale: scale,
        transform,
    })
}

/// Which condition of the characterization failed, if any.
#[derive(Debug, Clone, PartialEq)]
pub enum DecisionReason {
    AllConditionsHold,
    /// `μₖ = 0` for the reported index (1-based within the frame).
    ZeroMu { index: usize },
    /// The three ratios lie on a line; `area_ratio` is area over diameter².
    CollinearRatios { area_ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub does_retrieval: bool,
    pub reason: DecisionReason,
    pub betas: Vec<Complex64>,
    /// |Im((β₂-β₁)·conj(β₃-β₁))|, twice the triangle area.
    pub triangle_area: f64,
    /// Largest pairwise ratio distance, the scale of the relative test.
    pub scale: f64,
}

/// Decision procedure for four vectors: phase retrieval holds iff all μₖ are
/// nonzero and the ratios βₖ are not collinear.
///
/// Both tests are relative: `|μₖ|` is compared against `tol·‖φₖ‖·‖φ₀‖` and
/// the triangle area against `tol·scale²` with `scale` the ratio diameter.
pub fn does_phase_retrieval(frame: &FrameC2, tol: f64) -> Result<Decision, FrameError> {
    assert!(frame.len() >= 4, "the characterization needs four vectors");
    let sub = FrameC2::new(frame.vectors[..4].to_vec());
    let canon = canonicalize(&sub)?;
    let anchor_norm = canon.lambda0_scale.sqrt();
    for (k, (mu, phi)) in canon.mus.iter().zip(sub.vectors.iter().skip(1)).enumerate() {
        let phi_norm = (phi[0].norm_sqr() + phi[1].norm_sqr()).sqrt();
        if mu.norm() <= tol * anchor_norm * phi_norm {
            return Ok(Decision {
                does_retrieval: false,
                reason: DecisionReason::ZeroMu { index: k + 1 },
                betas: Vec::new(),
                triangle_area: 0.0,
                scale: 0.0,
            });
        }
    }
    let betas: Vec<Complex64> = canon
        .lambdas
        .iter()
        .zip(canon.mus.iter())
        .map(|(l, m)| l / m)
        .collect();
    let mut scale = 0.0f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            scale = scale.max((betas[i] - betas[j]).norm());
        }
    }
    let area = ((betas[1] - betas[0]) * (betas[2] - betas[0]).conj()).im.abs();
    let collinear = area <= tol * scale * scale;
    Ok(Decision {
        does_retrieval: !collinear,
        reason: if collinear {
            DecisionReason::CollinearRatios {
                area_ratio: if scale > 0.0 { area / (scale * scale) } else { 0.0 },
            }
        } else {
            DecisionReason::AllConditionsHold
        },
        betas,
        triangle_area: area,
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trilateration {
    pub point: Complex64,
    /// `max_j | |w - aⱼ| - dⱼ |` at the returned point.
    pub residual: f64,
}

/// Locates the unique planar point at given distances from three non-collinear
/// anchors, from the 2×2 linear system obtained by differencing the squared
/// distance equations.
pub fn trilaterate(
    anchors: [Complex64; 3],
    distances: [f64; 3],
    tol: f64,
) -> Result<Trilateration, FrameError> {
    let mut diam = 0.0f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            diam = diam.max((anchors[i] - anchors[j]).norm());
        }
    }
    let cross = ((anchors[1] - anchors[0]) * (anchors[2] - anchors[0]).conj())
        .im
        .abs();
    if cross <= COLLINEARITY_TOL * diam * diam {
        return Err(FrameError::AmbiguousCollinear);
    }
    // rows: 2(aⱼ - a₁)·w = |aⱼ|² - |a₁|² - dⱼ² + d₁²
    let a = anchors;
    let d = distances;
    let row = |j: usize| {
        (
            2.0 * (a[j].re - a[0].re),
            2.0 * (a[j].im - a[0].im),
            a[j].norm_sqr() - a[0].norm_sqr() - d[j] * d[j] + d[0] * d[0],
        )
    };
    let (m11, m12, b1) = row(1);
    let (m21, m22, b2) = row(2);
    let det = m11 * m22 - m12 * m21;
    let wx = (b1 * m22 - b2 * m12) / det;
    let wy = (m11 * b2 - m21 * b1) / det;
    let point = Complex64::new(wx, wy);
    let residual = (0..3)
        .map(|j| ((point - a[j]).norm() - d[j]).abs())
        .fold(0.0, f64::max);
    let scale = diam.max(d.iter().cloned().fold(0.0, f64::max));
    if residual.is_nan() || residual > tol * scale.max(1e-300) {
        return Err(FrameError::Inconsistent { residual });
    }
    Ok(Trilateration { point, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution {
    /// Canonical-phase representative; any other solution is a unimodular
    /// multiple.
    pub vector: C2,
    /// Worst magnitude mismatch over all frame vectors.
    pub residual: f64,
}

/// Recovers `z` with `|⟨z, φₖ⟩| = mₖ` for a frame that does phase retrieval.
///
/// The first four vectors drive the construction; any extras only enter the
/// final residual check. `tol` is relative to the largest magnitude.
pub fn local_solve(frame: &FrameC2, magnitudes: &[f64], tol: f64) -> Result<LocalSolution, FrameError> {
    assert_eq!(
        frame.len(),
        magnitudes.len(),
        "one magnitude per frame vector"
    );
    assert!(frame.len() >= 4, "the local solver needs four vectors");
    let scale = magnitudes.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(LocalSolution {
            vector: [Complex64::ZERO, Complex64::ZERO],
            residual: 0.0,
        });
    }
    let canon = canonicalize(frame)?;
    let z = if magnitudes[0] <= tol * scale {
        // z₁ = 0 branch: |y₂| is read off the strongest μ equation
        let (k, mu) = canon
            .mus
            .iter()
            .enumerate()
            .take(3)
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("three transformed vectors");
        if mu.norm() == 0.0 {
            return Err(FrameError::Infeasible {
                residual: f64::INFINITY,
                detail: "all μ vanish; second coordinate unobserved".into(),
            });
        }
        let y = [
            Complex64::ZERO,
            Complex64::new(magnitudes[k + 1] / mu.norm(), 0.0),
        ];
        canon.apply_adjoint(&y)
    } else {
        let y1 = magnitudes[0] / canon.lambda0_scale;
        let mut anchors = [Complex64::ZERO; 3];
        let mut radii = [0.0f64; 3];
        for k in 0..3 {
            let beta = canon.betas[k].ok_or(FrameError::Infeasible {
                residual: f64::INFINITY,
                detail: format!("μ_{} = 0: frame does not retrieve phases", k + 1),
            })?;
            anchors[k] = -beta.conj();
            radii[k] = magnitudes[k + 1] / (canon.mus[k].norm() * y1);
        }
        let tri = trilaterate(anchors, radii, tol).map_err(|e| FrameError::Infeasible {
            residual: match e {
                FrameError::Inconsistent { residual } => residual,
                _ => f64::INFINITY,
            },
            detail: format!("trilateration failed: {e}"),
        })?;
        let y = [
            Complex64::new(y1, 0.0),
            tri.point * Complex64::new(y1, 0.0),
        ];
        canon.apply_adjoint(&y)
    };
    let z = canonical_phase(&z);
    let residual = frame
        .vectors
        .iter()
        .zip(magnitudes.iter())
        .map(|(phi, m)| (inner(&z, phi).norm() - m).abs())
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > tol * scale {
        return Err(FrameError::Infeasible {
            residual,
            detail: "recovered vector does not reproduce the magnitudes".into(),
        });
    }
    Ok(LocalSolution { vector: z, residual })
}

/// Constructs an exact violating pair for a frame whose ratios are collinear,
/// by reflecting an off-line point across the ratio line.
pub fn ambiguity_pair(frame: &FrameC2) -> Result<(C2, C2), FrameError> {
    let decision = does_phase_retrieval(frame, COLLINEARITY_TOL)?;
    if decision.does_retrieval {
        return Err(FrameError::NotCollinear);
    }
    if let DecisionReason::ZeroMu { .. } = decision.reason {
        // the betas are undefined, the mirror construction does not apply
        return Err(FrameError::NotCollinear);
    }
    let canon = canonicalize(&FrameC2::new(frame.vectors[..4].to_vec()))?;
    let betas = decision.betas;
    let diam = decision.scale;
    let (p, q) = if diam <= COLLINEARITY_TOL * (1.0 + betas[0].norm()) {
        (betas[0] + 1.0, betas[0] + Complex64::i())
    } else {
        let (i, j) = {
            let mut best = (0, 1, 0.0f64);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let d = (betas[i] - betas[j]).norm();
                    if d > best.2 {
                        best = (i, j, d);
                    }
                }
            }
            (best.0, best.1)
        };
        let dir = (betas[j] - betas[i]) / (betas[j] - betas[i]).norm();
        let offset = Complex64::i() * dir * diam.max(1.0);
        (betas[i] + offset, betas[i] - offset)
    };
    let z = canon.apply_adjoint(&[-Complex64::ONE, p.conj()]);
    let w = canon.apply_adjoint(&[-Complex64::ONE, q.conj()]);
    Ok((z, w))
}
