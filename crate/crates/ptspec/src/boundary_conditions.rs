//! Parameterizations of the point-interaction boundary conditions at the
//! origin, their adjoints, symmetry predicates, and trace residuals.
//!
//! Two families of interface conditions connect the one-sided boundary traces
//! `(ψ(0−), ψ′(0−))` and `(ψ(0+), ψ′(0+))`:
//!
//! * **connected**: `(ψ(0+), ψ′(0+))ᵀ = B (ψ(0−), ψ′(0−))ᵀ` with a
//!   four-parameter matrix `B` (see [`connected_matrix`]);
//! * **separated**: each side satisfies its own Robin-type condition,
//!   `h₀ ψ′(0+) = h₁ e^{iθ} ψ(0+)` and `h₀ ψ′(0−) = −h₁ e^{−iθ} ψ(0−)`.
//!
//! A third parameterization ([`SymmetricParams`]) describes conditions that
//! couple the traces at two symmetric endpoints `x = ±l` through a unitary
//! matrix; it is used for the outer boundary of interval models.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;

const ANGLE_TOL: f64 = 1e-12;
const PREDICATE_TOL: f64 = 1e-12;

/// Serde adapter storing a `Complex64` as a two-element array `[re, im]`.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Reduces an angle to the interval `(-π, π]`.
pub fn reduce_angle_pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y <= -std::f64::consts::PI {
        y += tau;
    } else if y > std::f64::consts::PI {
        y -= tau;
    }
    y
}

/// Reduces an angle to the interval `[0, 2π)`.
pub fn reduce_angle_two_pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y < 0.0 {
        y += tau;
    }
    if y >= tau {
        y = 0.0;
    }
    y
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}

/// Parameters of a connected interface condition
/// `(ψ(0+), ψ′(0+))ᵀ = B (ψ(0−), ψ′(0−))ᵀ`.
///
/// Constraints: `b ≥ 0`, `1 + b·c ≥ 0`, and the angles `θ`, `φ` are reduced
/// to `(-π, π]` on construction. The matrix `B` is produced by
/// [`connected_matrix`] and satisfies `det B = e^{2iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConnectedRaw")]
pub struct ConnectedParams {
    theta: f64,
    phi: f64,
    b: f64,
    c: f64,
}

#[derive(Deserialize)]
struct ConnectedRaw {
    theta: f64,
    phi: f64,
    b: f64,
    c: f64,
}

impl TryFrom<ConnectedRaw> for ConnectedParams {
    type Error = Error;
    fn try_from(r: ConnectedRaw) -> Result<Self> {
        ConnectedParams::new(r.theta, r.phi, r.b, r.c)
    }
}

impl ConnectedParams {
    pub fn new(theta: f64, phi: f64, b: f64, c: f64) -> Result<Self> {
        check_finite("theta", theta)?;
        check_finite("phi", phi)?;
        check_finite("b", b)?;
        check_finite("c", c)?;
        if b < 0.0 {
            return Err(Error::InvalidParameter(format!("b must be >= 0, got {b}")));
        }
        if 1.0 + b * c < -ANGLE_TOL {
            return Err(Error::InvalidParameter(format!(
                "1 + b*c must be >= 0, got {}",
                1.0 + b * c
            )));
        }
        Ok(Self {
            theta: reduce_angle_pi(theta),
            phi: reduce_angle_pi(phi),
            b,
            c,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sqrt(1 + b c)`, clamped at zero against rounding.
    pub fn radial(&self) -> f64 {
        (1.0 + self.b * self.c).max(0.0).sqrt()
    }
}

/// Parameters of a separated interface condition
/// `h₀ ψ′(0+) = h₁ e^{iθ} ψ(0+)`, `h₀ ψ′(0−) = −h₁ e^{−iθ} ψ(0−)`.
///
/// The pair `(h₀, h₁)` is normalized to unit length with the first nonzero
/// component positive, and `θ` is reduced to `[0, 2π)`, so each condition has
/// a unique stored representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeparatedRaw")]
pub struct SeparatedParams {
    theta: f64,
    h0: f64,
    h1: f64,
}

#[derive(Deserialize)]
struct SeparatedRaw {
    theta: f64,
    h0: f64,
    h1: f64,
}

impl TryFrom<SeparatedRaw> for SeparatedParams {
    type Error = Error;
    fn try_from(r: SeparatedRaw) -> Result<Self> {
        SeparatedParams::new(r.theta, r.h0, r.h1)
    }
}

impl SeparatedParams {
    pub fn new(theta: f64, h0: f64, h1: f64) -> Result<Self> {
        check_finite("theta", theta)?;
        check_finite("h0", h0)?;
        check_finite("h1", h1)?;
        let norm = h0.hypot(h1);
        if norm < 1e-150 {
            return Err(Error::InvalidParameter(
                "(h0, h1) must not both vanish".into(),
            ));
        }
        let mut h0 = h0 / norm;
        let mut h1 = h1 / norm;
        if h0 < 0.0 || (h0 == 0.0 && h1 < 0.0) {
            h0 = -h0;
            h1 = -h1;
        }
        // Snap a vanishing component to an exact zero so the Dirichlet and
        // Neumann representatives are exact.
        if h0.abs() < 1e-300 {
            h0 = 0.0;
            h1 = 1.0;
        }
        if h1.abs() < 1e-300 {
            h0 = 1.0;
            h1 = 0.0;
        }
        Ok(Self {
            theta: reduce_angle_two_pi(theta),
            h0,
            h1,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn h0(&self) -> f64 {
        self.h0
    }
    pub fn h1(&self) -> f64 {
        self.h1
    }
}

/// Parameters of a two-endpoint boundary condition
/// `(U − I) Ψ + i L₀ (U + I) Ψ′ = 0`, where `U` is unitary, `L₀ ≠ 0` is a
/// length scale, `Ψ = (ψ(l), ψ(−l))ᵀ`, and `Ψ′ = (ψ′(l), −ψ′(−l))ᵀ`
/// (outward-pointing derivatives).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymmetricRaw", into = "SymmetricRaw")]
pub struct SymmetricParams {
    u: Matrix2<C>,
    l0: f64,
}

#[derive(Serialize, Deserialize)]
struct SymmetricRaw {
    #[serde(rename = "U")]
    u: [[[f64; 2]; 2]; 2],
    #[serde(rename = "L0")]
    l0: f64,
}

impl TryFrom<SymmetricRaw> for SymmetricParams {
    type Error = Error;
    fn try_from(r: SymmetricRaw) -> Result<Self> {
        let e = |p: [f64; 2]| C::new(p[0], p[1]);
        let u = Matrix2::new(e(r.u[0][0]), e(r.u[0][1]), e(r.u[1][0]), e(r.u[1][1]));
        SymmetricParams::new(u, r.l0)
    }
}

impl From<SymmetricParams> for SymmetricRaw {
    fn from(p: SymmetricParams) -> Self {
        let e = |z: C| [z.re, z.im];
        SymmetricRaw {
            u: [
                [e(p.u[(0, 0)]), e(p.u[(0, 1)])],
                [e(p.u[(1, 0)]), e(p.u[(1, 1)])],
            ],
            l0: p.l0,
        }
    }
}

impl SymmetricParams {
    /// Unitarity is enforced to within `1e-12` and `L₀` must be nonzero.
    pub fn new(u: Matrix2<C>, l0: f64) -> Result<Self> {
        check_finite("L0", l0)?;
        if l0 == 0.0 {
            return Err(Error::InvalidParameter("L0 must be nonzero".into()));
        }
        let dev = (u.adjoint() * u - Matrix2::identity()).norm();
        if !dev.is_finite() || dev > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "U must be unitary, ||U*U - I|| = {dev:.3e}"
            )));
        }
        Ok(Self { u, l0 })
    }

    pub fn u(&self) -> &Matrix2<C> {
        &self.u
    }
    pub fn l0(&self) -> f64 {
        self.l0
    }
}

/// One-sided boundary traces of a function at a junction:
/// values and first derivatives approached from the left (`minus`) and the
/// right (`plus`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTraces {
    #[serde(with = "complex_pair")]
    pub val_minus: C,
    #[serde(with = "complex_pair")]
    pub der_minus: C,
    #[serde(with = "complex_pair")]
    pub val_plus: C,
    #[serde(with = "complex_pair")]
    pub der_plus: C,
}

impl BoundaryTraces {
    pub fn zero() -> Self {
        Self {
            val_minus: C::new(0.0, 0.0),
            der_minus: C::new(0.0, 0.0),
            val_plus: C::new(0.0, 0.0),
            der_plus: C::new(0.0, 0.0),
        }
    }

    /// Euclidean norm of the four trace components.
    pub fn norm(&self) -> f64 {
        (self.val_minus.norm_sqr()
            + self.der_minus.norm_sqr()
            + self.val_plus.norm_sqr()
            + self.der_plus.norm_sqr())
        .sqrt()
    }
}

/// Which junction side a 2×2 trace-transfer matrix maps from.
///
/// `MinusToPlus` means `(ψ(0+), ψ′(0+))ᵀ = M (ψ(0−), ψ′(0−))ᵀ`;
/// `PlusToMinus` is the reverse reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceDirection {
    MinusToPlus,
    PlusToMinus,
}

/// The interface matrix of a connected condition:
/// `B = e^{iθ} [[√(1+bc) e^{iφ}, b], [c, √(1+bc) e^{-iφ}]]`.
pub fn connected_matrix(p: &ConnectedParams) -> Matrix2<C> {
    let r = p.radial();
    let phase = C::from_polar(1.0, p.theta);
    let eiphi = C::from_polar(1.0, p.phi);
    Matrix2::new(
        r * eiphi,
        C::new(p.b, 0.0),
        C::new(p.c, 0.0),
        r * eiphi.conj(),
    ) * phase
}

/// The interface matrix of the adjoint of a connected condition, together
/// with its trace direction. The adjoint condition reads
/// `(ψ(0−), ψ′(0−))ᵀ = B̃ (ψ(0+), ψ′(0+))ᵀ` with
/// `B̃ = e^{-iθ} [[√(1+bc) e^{iφ}, -b], [-c, √(1+bc) e^{-iφ}]]`.
///
/// Entrywise, `B̃` equals the adjugate of the complex conjugate of `B`.
pub fn adjoint_connected(p: &ConnectedParams) -> (Matrix2<C>, TraceDirection) {
    let r = p.radial();
    let phase = C::from_polar(1.0, -p.theta);
    let eiphi = C::from_polar(1.0, p.phi);
    let m = Matrix2::new(
        r * eiphi,
        C::new(-p.b, 0.0),
        C::new(-p.c, 0.0),
        r * eiphi.conj(),
    ) * phase;
    (m, TraceDirection::PlusToMinus)
}

/// Adjugate of a 2×2 matrix: swap the diagonal, negate the off-diagonal.
pub fn adjugate(m: &Matrix2<C>) -> Matrix2<C> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Rewrites a trace-transfer matrix in the `MinusToPlus` direction,
/// inverting it if it was given as `PlusToMinus`.
pub fn forward_form(m: &Matrix2<C>, dir: TraceDirection) -> Result<Matrix2<C>> {
    match dir {
        TraceDirection::MinusToPlus => Ok(*m),
        TraceDirection::PlusToMinus => {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            if det.norm() < 1e-300 {
                return Err(Error::NumericalFailure(
                    "trace-transfer matrix is singular".into(),
                ));
            }
            Ok(adjugate(m) / det)
        }
    }
}

/// The adjoint of a separated condition: `θ ↦ -θ` with `(h₀, h₁)` unchanged.
pub fn adjoint_separated(p: &SeparatedParams) -> SeparatedParams {
    SeparatedParams {
        theta: reduce_angle_two_pi(-p.theta),
        h0: p.h0,
        h1: p.h1,
    }
}

/// Whether conjugating the adjoint interface matrix by the parity map
/// reproduces the adjoint itself, i.e. whether `e^{2iθ} B̃` equals `B̃`
/// within `1e-12`. True exactly when `e^{2iθ} = 1` (θ = 0 or π).
pub fn plp_equals_adjoint(p: &ConnectedParams) -> bool {
    let (bt, _) = adjoint_connected(p);
    let hat = bt * C::from_polar(1.0, 2.0 * p.theta);
    let scale = bt.norm().max(1.0);
    (hat - bt).norm() <= PREDICATE_TOL * scale
}

/// Residual `‖(ψ(0+), ψ′(0+))ᵀ − M (ψ(0−), ψ′(0−))ᵀ‖` of a connected-type
/// condition with interface matrix `M` (in `MinusToPlus` form) on the given
/// traces.
pub fn bc_residual_connected(t: &BoundaryTraces, m: &Matrix2<C>) -> f64 {
    let minus = Vector2::new(t.val_minus, t.der_minus);
    let plus = Vector2::new(t.val_plus, t.der_plus);
    (plus - m * minus).norm()
}

/// Residual of a separated condition on the given traces: the Euclidean norm
/// of `(h₀ ψ′(0+) − h₁ e^{iθ} ψ(0+), h₀ ψ′(0−) + h₁ e^{-iθ} ψ(0−))`.
pub fn bc_residual_separated(t: &BoundaryTraces, p: &SeparatedParams) -> f64 {
    let eith = C::from_polar(1.0, p.theta);
    let r_plus = p.h0 * t.der_plus - p.h1 * eith * t.val_plus;
    let r_minus = p.h0 * t.der_minus + p.h1 * eith.conj() * t.val_minus;
    (r_plus.norm_sqr() + r_minus.norm_sqr()).sqrt()
}

/// Residual of a two-endpoint condition `(U − I) Ψ + i L₀ (U + I) Ψ′ = 0`
/// on endpoint traces, where `val_plus`/`der_plus` are taken at `x = l` and
/// `val_minus`/`der_minus` at `x = -l`:
/// `Ψ = (ψ(l), ψ(−l))ᵀ` and `Ψ′ = (ψ′(l), −ψ′(−l))ᵀ`.
pub fn bc_residual_symmetric(t: &BoundaryTraces, p: &SymmetricParams) -> f64 {
    let psi = Vector2::new(t.val_plus, t.val_minus);
    let dpsi = Vector2::new(t.der_plus, -t.der_minus);
    let i = C::new(0.0, 1.0);
    let u = p.u();
    let r = (u - Matrix2::identity()) * psi + ((u + Matrix2::identity()) * dpsi) * (i * p.l0());
    r.norm()
}

/// A point interaction at the origin: either a connected or a separated
/// interface condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PointInteraction {
    Connected(ConnectedParams),
    Separated(SeparatedParams),
}

/// Outcome of the three symmetry tests for a point interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryPredicates {
    /// Invariance of the condition set under the combined parity-conjugation
    /// map `(PT ψ)(x) = conj(ψ(−x))`. Holds for every parameter choice in
    /// both families.
    pub pt_symmetric: bool,
    /// Whether complex conjugation maps the condition set onto the adjoint
    /// condition set.
    pub t_selfadjoint: bool,
    /// Whether the parity map sends the condition set onto the adjoint
    /// condition set.
    pub p_pseudo_hermitian: bool,
}

/// Trace 4-vector `(v−, d−, v+, d+)` helpers for the symmetry tests.
type Trace4 = [C; 4];

fn parity_map(t: &Trace4) -> Trace4 {
    [t[2], -t[3], t[0], -t[1]]
}

fn conj_map(t: &Trace4) -> Trace4 {
    [t[0].conj(), t[1].conj(), t[2].conj(), t[3].conj()]
}

fn trace4_norm(t: &Trace4) -> f64 {
    t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative residual of the connected condition `(v+, d+) = M (v−, d−)` on a
/// trace 4-vector.
fn connected_residual4(t: &Trace4, m: &Matrix2<C>) -> f64 {
    let tr = BoundaryTraces {
        val_minus: t[0],
        der_minus: t[1],
        val_plus: t[2],
        der_plus: t[3],
    };
    bc_residual_connected(&tr, m) / trace4_norm(t).max(1e-300)
}

/// Relative residual of the reversed connected condition
/// `(v−, d−) = M (v+, d+)` on a trace 4-vector.
fn connected_residual4_rev(t: &Trace4, m: &Matrix2<C>) -> f64 {
    let minus = Vector2::new(t[0], t[1]);
    let plus = Vector2::new(t[2], t[3]);
    (minus - m * plus).norm() / trace4_norm(t).max(1e-300)
}

fn separated_residual4(t: &Trace4, p: &SeparatedParams) -> f64 {
    let tr = BoundaryTraces {
        val_minus: t[0],
        der_minus: t[1],
        val_plus: t[2],
        der_plus: t[3],
    };
    bc_residual_separated(&tr, p) / trace4_norm(t).max(1e-300)
}

/// A basis of the two-dimensional trace space of a point interaction.
fn domain_basis(i: &PointInteraction) -> [Trace4; 2] {
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    match i {
        PointInteraction::Connected(p) => {
            let b = connected_matrix(p);
            [
                [one, zero, b[(0, 0)], b[(1, 0)]],
                [zero, one, b[(0, 1)], b[(1, 1)]],
            ]
        }
        PointInteraction::Separated(p) => {
            let eith = C::from_polar(1.0, p.theta());
            [
                [
                    C::new(p.h0(), 0.0),
                    -p.h1() * eith.conj(),
                    zero,
                    zero,
                ],
                [zero, zero, C::new(p.h0(), 0.0), p.h1() * eith],
            ]
        }
    }
}

/// Residual of membership in the interaction's own trace space.
fn domain_residual(i: &PointInteraction, t: &Trace4) -> f64 {
    match i {
        PointInteraction::Connected(p) => connected_residual4(t, &connected_matrix(p)),
        PointInteraction::Separated(p) => separated_residual4(t, p),
    }
}

/// Residual of membership in the adjoint interaction's trace space.
fn adjoint_residual(i: &PointInteraction, t: &Trace4) -> f64 {
    match i {
        PointInteraction::Connected(p) => {
            let (bt, _) = adjoint_connected(p);
            connected_residual4_rev(t, &bt)
        }
        PointInteraction::Separated(p) => separated_residual4(t, &adjoint_separated(p)),
    }
}

/// Evaluates the three symmetry predicates for a point interaction by
/// transporting a basis of its trace space and testing membership in the
/// target trace space, with tolerance `1e-12`.
pub fn symmetry_predicates(i: &PointInteraction) -> SymmetryPredicates {
    let basis = domain_basis(i);
    let mut pt = true;
    let mut t_sa = true;
    let mut p_ph = true;
    for t in &basis {
        let pt_t = conj_map(&parity_map(t));
        if domain_residual(i, &pt_t) > PREDICATE_TOL {
            pt = false;
        }
        let conj_t = conj_map(t);
        if adjoint_residual(i, &conj_t) > PREDICATE_TOL {
            t_sa = false;
        }
        let par_t = parity_map(t);
        if adjoint_residual(i, &par_t) > PREDICATE_TOL {
            p_ph = false;
        }
    }
    SymmetryPredicates {
        pt_symmetric: pt,
        t_selfadjoint: t_sa,
        p_pseudo_hermitian: p_ph,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_connected(rng: &mut ChaCha8Rng) -> ConnectedParams {
        let theta = rng.gen_range(-3.1..3.1);
        let phi = rng.gen_range(-3.1..3.1);
        let b: f64 = rng.gen_range(0.0..2.0);
        let lo = if b > 1e-9 { (-1.0 / b).max(-3.0) } else { -3.0 };
        let c = rng.gen_range(lo * 0.95..2.0);
        ConnectedParams::new(theta, phi, b, c).unwrap()
    }

    #[test]
    fn determinant_is_unit_phase_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = sample_connected(&mut rng);
            let b = connected_matrix(&p);
            let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
            let expect = C::from_polar(1.0, 2.0 * p.theta());
            assert!((det - expect).norm() < 1e-14, "det {det} vs {expect}");
        }
    }

    #[test]
    fn adjoint_matrix_is_adjugate_of_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let p = sample_connected(&mut rng);
            let b = connected_matrix(&p);
            let (bt, dir) = adjoint_connected(&p);
            assert_eq!(dir, TraceDirection::PlusToMinus);
            let expect = adjugate(&b.map(|z| z.conj()));
            assert!((bt - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn adjugate_conjugate_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = sample_connected(&mut rng);
            let b = connected_matrix(&p);
            let once = adjugate(&b.map(|z| z.conj()));
            let twice = adjugate(&once.map(|z| z.conj()));
            assert!((twice - b).norm() < 1e-14);
        }
    }

    #[test]
    fn forward_form_inverts_reversed_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let p = sample_connected(&mut rng);
            let (bt, dir) = adjoint_connected(&p);
            let fwd = forward_form(&bt, dir).unwrap();
            assert!((bt * fwd - Matrix2::identity()).norm() < 1e-12);
            let b = connected_matrix(&p);
            let same = forward_form(&b, TraceDirection::MinusToPlus).unwrap();
            assert_eq!(same, b);
        }
    }

    #[test]
    fn separated_adjoint_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p =
                SeparatedParams::new(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let p = match p {
                Ok(p) => p,
                Err(_) => continue,
            };
            let q = adjoint_separated(&adjoint_separated(&p));
            assert!((p.theta() - q.theta()).abs() < 1e-12);
            assert_eq!(p.h0(), q.h0());
            assert_eq!(p.h1(), q.h1());
        }
    }

    #[test]
    fn separated_normalization_is_canonical() {
        let p = SeparatedParams::new(0.0, 3.0, 4.0).unwrap();
        assert!((p.h0() - 0.6).abs() < 1e-15);
        assert!((p.h1() - 0.8).abs() < 1e-15);
        let q = SeparatedParams::new(1.0, -3.0, -4.0).unwrap();
        assert!((q.h0() - 0.6).abs() < 1e-15);
        assert!((q.h1() - 0.8).abs() < 1e-15);
        let d = SeparatedParams::new(0.5, 0.0, -7.0).unwrap();
        assert_eq!(d.h0(), 0.0);
        assert_eq!(d.h1(), 1.0);
    }

    #[test]
    fn plp_equals_adjoint_iff_squared_phase_is_one() {
        let p0 = ConnectedParams::new(0.0, 0.7, 0.5, 0.3).unwrap();
        assert!(plp_equals_adjoint(&p0));
        let p_pi = ConnectedParams::new(std::f64::consts::PI, 0.7, 0.5, 0.3).unwrap();
        assert!(plp_equals_adjoint(&p_pi));
        let p_mid = ConnectedParams::new(0.5, 0.7, 0.5, 0.3).unwrap();
        assert!(!plp_equals_adjoint(&p_mid));
    }

    #[test]
    fn connected_predicates_follow_theta() {
        let all = |p: SymmetryPredicates| p.pt_symmetric && p.t_selfadjoint && p.p_pseudo_hermitian;
        let p0 = PointInteraction::Connected(ConnectedParams::new(0.0, 0.7, 0.5, 0.3).unwrap());
        assert!(all(symmetry_predicates(&p0)));
        let p_pi = PointInteraction::Connected(
            ConnectedParams::new(std::f64::consts::PI, -1.2, 1.5, 0.2).unwrap(),
        );
        assert!(all(symmetry_predicates(&p_pi)));
        let p_mid =
            PointInteraction::Connected(ConnectedParams::new(0.785, 0.7, 0.5, 0.3).unwrap());
        let s = symmetry_predicates(&p_mid);
        assert!(s.pt_symmetric);
        assert!(!s.t_selfadjoint);
        assert!(!s.p_pseudo_hermitian);
    }

    #[test]
    fn separated_predicates_hold_for_every_angle() {
        for theta in [0.0, 0.4, 1.234, std::f64::consts::PI, 5.5] {
            let p = PointInteraction::Separated(SeparatedParams::new(theta, 0.6, 0.8).unwrap());
            let s = symmetry_predicates(&p);
            assert!(s.pt_symmetric, "theta = {theta}");
            assert!(s.t_selfadjoint, "theta = {theta}");
            assert!(s.p_pseudo_hermitian, "theta = {theta}");
        }
    }

    #[test]
    fn residuals_vanish_on_matching_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let p = sample_connected(&mut rng);
            let b = connected_matrix(&p);
            let minus = Vector2::new(
                C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
            let plus = b * minus;
            let t = BoundaryTraces {
                val_minus: minus[0],
                der_minus: minus[1],
                val_plus: plus[0],
                der_plus: plus[1],
            };
            assert!(bc_residual_connected(&t, &b) < 1e-13);
            let mut bad = t;
            bad.val_plus += C::new(1e-3, 0.0);
            assert!(bc_residual_connected(&bad, &b) > 1e-4);
        }
    }

    #[test]
    fn symmetric_residual_detects_periodic_traces() {
        let sx = Matrix2::new(
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
            C::new(1.0, 0.0),
            C::new(0.0, 0.0),
        );
        let p = SymmetricParams::new(sx, 1.0).unwrap();
        let z = C::new(0.3, -0.2);
        let w = C::new(-1.1, 0.7);
        let periodic = BoundaryTraces {
            val_minus: z,
            der_minus: w,
            val_plus: z,
            der_plus: w,
        };
        assert!(bc_residual_symmetric(&periodic, &p) < 1e-14);
        let antiperiodic = BoundaryTraces {
            val_minus: z,
            der_minus: w,
            val_plus: -z,
            der_plus: -w,
        };
        assert!(bc_residual_symmetric(&antiperiodic, &p) > 0.1);
    }

    #[test]
    fn symmetric_params_reject_non_unitary() {
        let m = Matrix2::new(
            C::new(1.0, 0.0),
            C::new(0.1, 0.0),
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
        );
        assert!(SymmetricParams::new(m, 1.0).is_err());
        assert!(SymmetricParams::new(Matrix2::identity(), 0.0).is_err());
    }

    #[test]
    fn params_round_trip_through_json() {
        let p = ConnectedParams::new(0.3, -0.4, 0.5, 0.6).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: ConnectedParams = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);

        let raw = r#"{"theta": 0.0, "h0": 3.0, "h1": 4.0}"#;
        let sp: SeparatedParams = serde_json::from_str(raw).unwrap();
        assert!((sp.h0() - 0.6).abs() < 1e-15);

        let u = Matrix2::new(
            C::new(0.0, 0.0),
            C::new(0.0, 1.0),
            C::new(0.0, 1.0),
            C::new(0.0, 0.0),
        );
        let sym = SymmetricParams::new(u, 2.0).unwrap();
        let s = serde_json::to_string(&sym).unwrap();
        let back: SymmetricParams = serde_json::from_str(&s).unwrap();
        assert_eq!(sym, back);

        let bad = r#"{"U": [[[1,0],[0.2,0]],[[0,0],[1,0]]], "L0": 1.0}"#;
        assert!(serde_json::from_str::<SymmetricParams>(bad).is_err());
    }

    #[test]
    fn angle_reduction_ranges() {
        assert!((reduce_angle_pi(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!(reduce_angle_pi(-std::f64::consts::PI) > 0.0);
        assert_eq!(reduce_angle_two_pi(0.0), 0.0);
        let y = reduce_angle_two_pi(-0.5);
        assert!((0.0..std::f64::consts::TAU).contains(&y));
        assert!((y - (std::f64::consts::TAU - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn invalid_connected_params_are_rejected() {
        assert!(ConnectedParams::new(0.0, 0.0, -0.1, 0.0).is_err());
        assert!(ConnectedParams::new(0.0, 0.0, 2.0, -1.0).is_err());
        assert!(ConnectedParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(ConnectedParams::new(0.0, 0.0, 1.0, -1.0).is_ok());
    }

    proptest::proptest! {
        /// Angle reduction lands in the half-open interval, is idempotent,
        /// and is invariant under full turns.
        #[test]
        fn angle_reduction_properties(x in -50.0f64..50.0) {
            let r = reduce_angle_pi(x);
            proptest::prop_assert!(r > -std::f64::consts::PI && r <= std::f64::consts::PI);
            proptest::prop_assert!((reduce_angle_pi(r) - r).abs() < 1e-12);
            let shifted = reduce_angle_pi(x + std::f64::consts::TAU);
            proptest::prop_assert!((shifted - r).abs() < 1e-7);
            let t = reduce_angle_two_pi(x);
            proptest::prop_assert!((0.0..std::f64::consts::TAU).contains(&t));
        }

        /// The adjoint matrix is exactly the one that balances the boundary
        /// form `ψ′ φ̄ − ψ φ̄′` across the origin: for traces `(v, d)` coupled
        /// forwards by `B` and `(w, wd)` coupled backwards by the adjoint,
        /// the form evaluated on the right equals the form on the left.
        #[test]
        fn adjoint_balances_the_boundary_form(
            theta in -3.0f64..3.0,
            phi in -3.0f64..3.0,
            b in 0.0f64..2.0,
            c in -0.45f64..2.0,
            re_v in -1.0f64..1.0,
            im_v in -1.0f64..1.0,
            re_d in -1.0f64..1.0,
            im_d in -1.0f64..1.0,
            re_w in -1.0f64..1.0,
            im_w in -1.0f64..1.0,
            re_wd in -1.0f64..1.0,
            im_wd in -1.0f64..1.0,
        ) {
            let p = ConnectedParams::new(theta, phi, b, c).unwrap();
            let bmat = connected_matrix(&p);
            let (bt, dir) = adjoint_connected(&p);
            proptest::prop_assert_eq!(dir, TraceDirection::PlusToMinus);
            let v_minus = C::new(re_v, im_v);
            let d_minus = C::new(re_d, im_d);
            let psi_plus = bmat * Vector2::new(v_minus, d_minus);
            let w_plus = C::new(re_w, im_w);
            let wd_plus = C::new(re_wd, im_wd);
            let w_minus_vec = bt * Vector2::new(w_plus, wd_plus);
            let form_plus = psi_plus[1] * w_plus.conj() - psi_plus[0] * wd_plus.conj();
            let form_minus = d_minus * w_minus_vec[0].conj() - v_minus * w_minus_vec[1].conj();
            let scale = form_plus.norm().max(form_minus.norm()).max(1.0);
            proptest::prop_assert!(
                (form_plus - form_minus).norm() < 1e-11 * scale,
                "boundary form imbalance {} vs {}", form_plus, form_minus
            );
        }
    }
}
