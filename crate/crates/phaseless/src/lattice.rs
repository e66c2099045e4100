//! Shifted lattices `v + Aℤ²` and finite point sets.
//!
//! Densities of shifted lattices are exact (`1/|det A|`); densities of finite
//! windows are estimates (`count / (πR²)`) and labeled as such. The Γ
//! decompositions split a shifted rectangular lattice into two half-density
//! shifted sub-lattices whose unions with their own conjugates give the full
//! lattice back, which is what makes half-density sampling of real signals
//! work.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    SingularGenerator,
    ZeroParameter,
    TooFewPoints,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::SingularGenerator => write!(f, "generator matrix is singular"),
            LatticeError::ZeroParameter => write!(f, "lattice parameters must be nonzero"),
            LatticeError::TooFewPoints => write!(f, "need at least two points"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// Tolerance for deciding whether a coordinate is an integer during
/// membership tests. Generators are user-supplied decimals, so the test is
/// absolute on the integer grid.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A shifted lattice `v + Aℤ²` with an invertible generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedLattice {
    pub shift: [f64; 2],
    pub generator: [[f64; 2]; 2],
}

impl ShiftedLattice {
    pub fn new(shift: [f64; 2], generator: [[f64; 2]; 2]) -> Result<Self, LatticeError> {
        let lattice = Self { shift, generator };
        if lattice.det() == 0.0 {
            return Err(LatticeError::SingularGenerator);
        }
        Ok(lattice)
    }

    /// The unshifted square lattice `sℤ²`.
    pub fn square(s: f64) -> Result<Self, LatticeError> {
        Self::new([0.0, 0.0], [[s, 0.0], [0.0, s]])
    }

    pub fn det(&self) -> f64 {
        let a = self.generator;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// Lower Beurling density, exactly `1/|det A|` for a shifted lattice.
    pub fn density(&self) -> f64 {
        1.0 / self.det().abs()
    }

    /// The lattice point `v + A(m, n)ᵀ`.
    pub fn point_at(&self, m: i64, n: i64) -> [f64; 2] {
        let a = self.generator;
        [
            self.shift[0] + a[0][0] * m as f64 + a[0][1] * n as f64,
            self.shift[1] + a[1][0] * m as f64 + a[1][1] * n as f64,
        ]
    }

    /// Membership test: `A⁻¹(x - v)` within [`MEMBERSHIP_TOL`] of ℤ².
    pub fn contains(&self, point: [f64; 2]) -> bool {
        let a = self.generator;
        let det = self.det();
        let dx = point[0] - self.shift[0];
        let dy = point[1] - self.shift[1];
        let m = (a[1][1] * dx - a[0][1] * dy) / det;
        let n = (-a[1][0] * dx + a[0][0] * dy) / det;
        (m - m.round()).abs() <= MEMBERSHIP_TOL && (n - n.round()).abs() <= MEMBERSHIP_TOL
    }

    /// Operator norm of `A⁻¹`, used to bound the integer search box.
    fn inverse_opnorm(&self) -> f64 {
        let det = self.det();
        let a = self.generator;
        // inv = [[d, -b], [-c, a]] / det
        let inv = [
            [a[1][1] / det, -a[0][1] / det],
            [-a[1][0] / det, a[0][0] / det],
        ];
        let (p, q, r, s) = (inv[0][0], inv[0][1], inv[1][0], inv[1][1]);
        let t = p * p + q * q + r * r + s * s;
        let d = ((p * p + q * q - r * r - s * s) / 2.0).powi(2) + (p * r + q * s).powi(2);
        (t / 2.0 + d.sqrt()).sqrt()
    }

    /// All lattice points with Euclidean norm at most `radius`, ordered
    /// lexicographically by integer coordinates.
    pub fn enumerate(&self, radius: f64) -> PointSet {
        assert!(radius > 0.0, "enumeration radius must be positive");
        let shift_norm = (self.shift[0].powi(2) + self.shift[1].powi(2)).sqrt();
        let bound = (self.inverse_opnorm() * (radius + shift_norm)).ceil() as i64 + 1;
        let r2 = radius * radius;
        let mut points = Vec::new();
        for m in -bound..=bound {
            for n in -bound..=bound {
                let p = self.point_at(m, n);
                if p[0] * p[0] + p[1] * p[1] <= r2 {
                    points.push(p);
                }
            }
        }
        PointSet {
            points,
            region_radius: radius,
        }
    }

    /// Reflection across the real axis: `{(x, y) : (x, -y) ∈ Λ}`.
    pub fn conjugate(&self) -> ShiftedLattice {
        let a = self.generator;
        ShiftedLattice {
            shift: [self.shift[0], -self.shift[1]],
            generator: [[a[0][0], a[0][1]], [-a[1][0], -a[1][1]]],
        }
    }
}

/// A finite window of sampling positions in the time-frequency plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Vec<[f64; 2]>,
    pub region_radius: f64,
}

impl PointSet {
    pub fn new(points: Vec<[f64; 2]>, region_radius: f64) -> Self {
        Self {
            points,
            region_radius,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// y-coordinates negated, same window radius.
    pub fn conjugate(&self) -> PointSet {
        PointSet {
            points: self.points.iter().map(|p| [p[0], -p[1]]).collect(),
            region_radius: self.region_radius,
        }
    }
}

/// Minimum pairwise gap and the finite-window density estimate
/// `count / (πR²)`. The estimate is not the Beurling density; it only
/// approaches it as the window grows.
pub fn separation_and_density_window(set: &PointSet) -> Result<(f64, f64), LatticeError> {
    if set.len() < 2 {
        return Err(LatticeError::TooFewPoints);
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..set.points.len() {
        for j in (i + 1)..set.points.len() {
            let dx = set.points[i][0] - set.points[j][0];
            let dy = set.points[i][1] - set.points[j][1];
            min_gap = min_gap.min((dx * dx + dy * dy).sqrt());
        }
    }
    let density = set.len() as f64 / (std::f64::consts::PI * set.region_radius.powi(2));
    Ok((min_gap, density))
}

/// The lattice `Λ = (0, β/2)ᵀ + diag(α, β)ℤ²` together with its two
/// half-density decompositions: `Γ₁` with generator `diag(α, 2β)` and `Γ₂`
/// with generator `[[α, 0], [β, 2β]]`, both carrying the same shift. Each
/// satisfies `Λ = Γᵢ ∪ conj(Γᵢ)` and `D(Γᵢ) = D(Λ)/2`.
pub fn gamma_decompositions(
    alpha: f64,
    beta: f64,
) -> Result<(ShiftedLattice, ShiftedLattice, ShiftedLattice), LatticeError> {
    if alpha == 0.0 || beta == 0.0 {
        return Err(LatticeError::ZeroParameter);
    }
    let shift = [0.0, beta / 2.0];
    let lambda = ShiftedLattice::new(shift, [[alpha, 0.0], [0.0, beta]])?;
    let gamma1 = ShiftedLattice::new(shift, [[alpha, 0.0], [0.0, 2.0 * beta]])?;
    let gamma2 = ShiftedLattice::new(shift, [[alpha, 0.0], [beta, 2.0 * beta]])?;
    Ok((lambda, gamma1, gamma2))
}

/// Uniqueness of a shifted lattice for 𝓕²_α(ℂ): density at least `α/π`,
/// boundary included. Shifts do not matter. A hair of relative slack absorbs
/// rounding in user-supplied generators at exact boundaries.
pub fn perelomov_uniqueness(lattice: &ShiftedLattice, alpha_fock: f64) -> bool {
    assert!(alpha_fock > 0.0);
    let threshold = alpha_fock / std::f64::consts::PI;
    lattice.density() >= threshold * (1.0 - 1e-12)
}

/// Finite-set equality up to coordinate tolerance, by sorting both lists.
pub fn point_sets_equal(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let sorted = |v: &[[f64; 2]]| {
        let mut v = v.to_vec();
        v.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    a.iter()
        .zip(b.iter())
        .all(|(p, q)| (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_integer_lattice() {
        let z2 = ShiftedLattice::square(1.0).unwrap();
        let set = z2.enumerate(1.5);
        assert_eq!(set.len(), 9); // {-1, 0, 1}²
    }

    #[test]
    fn enumerate_shifted_small_window() {
        let lat = ShiftedLattice::new([0.0, 0.25], [[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let set = lat.enumerate(0.3);
        assert!(point_sets_equal(
            &set.points,
            &[[0.0, -0.25], [0.0, 0.25]],
            1e-12
        ));
    }

    #[test]
    fn enumerate_empty_window() {
        // nearest point of (0.5, 0.5) + ℤ² sits at distance ~0.707
        let lat = ShiftedLattice::new([0.5, 0.5], [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(lat.enumerate(0.3).is_empty());
    }

    #[test]
    fn density_examples() {
        assert_eq!(ShiftedLattice::square(0.5).unwrap().density(), 4.0);
        let rect = ShiftedLattice::new([0.0, 0.0], [[1.0, 0.0], [0.0, 0.5]]).unwrap();
        assert_eq!(rect.density(), 2.0);
        // shear preserves the determinant
        let sheared = ShiftedLattice::new([0.0, 0.0], [[0.5, 0.5], [0.0, 0.5]]).unwrap();
        assert_eq!(sheared.density(), 4.0);
    }

    #[test]
    fn conjugate_is_involution() {
        let lat = ShiftedLattice::new([0.3, -0.7], [[1.5, 0.2], [-0.1, 0.8]]).unwrap();
        assert_eq!(lat.conjugate().conjugate(), lat);
        let set = lat.enumerate(4.0);
        assert_eq!(set.conjugate().conjugate(), set);
    }

    #[test]
    fn conjugate_lattice_matches_point_conjugation() {
        let lat = ShiftedLattice::new([0.1, 0.25], [[0.7, 0.3], [0.2, 0.9]]).unwrap();
        let a = lat.conjugate().enumerate(5.0);
        let b = lat.enumerate(5.0).conjugate();
        assert!(point_sets_equal(&a.points, &b.points, 1e-12));
    }

    #[test]
    fn gamma_decomposition_windows() {
        let (lambda, gamma1, gamma2) = gamma_decompositions(1.0, 1.0).unwrap();
        for r in [5.0, 10.0] {
            let full = lambda.enumerate(r);
            for gamma in [&gamma1, &gamma2] {
                let mut union = gamma.enumerate(r).points;
                union.extend(gamma.conjugate().enumerate(r).points);
                union.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
                union.dedup_by(|p, q| (p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
                assert!(
                    point_sets_equal(&union, &full.points, 1e-9),
                    "window {r}: union has {} points, lattice {}",
                    union.len(),
                    full.len()
                );
            }
        }
        // densities halve exactly
        assert_eq!(gamma1.density(), lambda.density() / 2.0);
        assert_eq!(gamma2.density(), lambda.density() / 2.0);
        // membership spot checks
        assert!(gamma1.contains([0.0, 0.5]));
        assert!(lambda.contains([0.0, -0.5]));
    }

    #[test]
    fn gamma_points_are_sublattice_points() {
        let (lambda, gamma1, gamma2) = gamma_decompositions(0.5, 1.25).unwrap();
        for gamma in [&gamma1, &gamma2] {
            for p in gamma.enumerate(8.0).points {
                assert!(lambda.contains(p), "{p:?} escaped the parent lattice");
            }
        }
    }

    #[test]
    fn perelomov_examples() {
        use std::f64::consts::PI;
        let dense = ShiftedLattice::square(0.5).unwrap(); // density 4
        assert!(perelomov_uniqueness(&dense, 4.0 * PI)); // boundary inclusive
        let z2 = ShiftedLattice::square(1.0).unwrap();
        assert!(!perelomov_uniqueness(&z2, 4.0 * PI));
        assert!(perelomov_uniqueness(&z2, PI));
    }

    #[test]
    fn window_density_estimates() {
        let z2 = ShiftedLattice::square(1.0).unwrap();
        let set = z2.enumerate(10.0);
        assert_eq!(set.len(), 317);
        let (gap, density) = separation_and_density_window(&set).unwrap();
        assert!((gap - 1.0).abs() < 1e-12);
        assert!((density - 1.0).abs() < 0.1);

        let half = ShiftedLattice::square(0.5).unwrap();
        let (gap, density) = separation_and_density_window(&half.enumerate(10.0)).unwrap();
        assert!((gap - 0.5).abs() < 1e-12);
        assert!((density - 4.0).abs() < 0.4);

        let single = PointSet::new(vec![[0.0, 0.0]], 1.0);
        assert_eq!(
            separation_and_density_window(&single),
            Err(LatticeError::TooFewPoints)
        );
    }

    #[test]
    fn serde_schema_round_trip() {
        let lat = ShiftedLattice::new([0.0, 0.25], [[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let json = serde_json::to_string(&lat).unwrap();
        assert_eq!(
            json,
            r#"{"shift":[0.0,0.25],"generator":[[0.5,0.0],[0.0,0.5]]}"#
        );
        let back: ShiftedLattice = serde_json::from_str(&json).unwrap();
        assert_eq!(back, lat);
    }
}
