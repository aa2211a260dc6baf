//! Spectral analysis on the interval `(-l, l)` with a one-parameter
//! interface at the origin and one of three outer boundary families at
//! `x = ±l`.
//!
//! The interface couples the one-sided traces through
//! `ψ(0+) = e^{iφ} ψ(0−)`, `ψ′(0+) = e^{-iφ} ψ′(0−)`. Depending on `φ` and
//! the outer family the spectrum is discrete, empty, or the entire complex
//! plane; [`classify`] decides which, and [`eigenvalues_in_region`] lists
//! eigenvalues in the discrete regime via an argument-principle search on the
//! 4×4 matching determinant.
//!
//! Eigenvalues are parameterized throughout by the wavenumber `k` with
//! spectral parameter `λ = k²`.

use nalgebra::{DMatrix, Matrix2, Matrix4, RowVector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary_conditions::{
    bc_residual_connected, bc_residual_separated, bc_residual_symmetric, complex_pair,
    connected_matrix, reduce_angle_pi, BoundaryTraces, ConnectedParams, SeparatedParams,
    SymmetricParams,
};
use crate::complex_roots::{find_roots, Rectangle, RootConfig, RootSet};
use crate::error::{Error, Result};
use crate::piecewise_grid::PiecewiseFunction;

type C = Complex64;

/// Below `|k| * l` of this size the exponential basis is numerically
/// degenerate and the matching determinant switches to the `{1, x}` basis.
const DEGENERATE_KL: f64 = 1e-9;
/// Tolerance for the angle and parameter comparisons in [`classify`].
const CLASSIFY_TOL: f64 = 1e-12;

/// Outer boundary conditions at `x = ±l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OuterConditions {
    /// `(U − I) Ψ + i L₀ (U + I) Ψ′ = 0` coupling both endpoints.
    Symmetric(SymmetricParams),
    /// `(ψ(l), ψ′(l))ᵀ = B₂ (ψ(−l), ψ′(−l))ᵀ`; the matrix parameter `θ₂`
    /// must be 0 for this family.
    Connected(ConnectedParams),
    /// Robin-type conditions at each endpoint separately:
    /// `h₀ ψ′(l) = h₁ e^{iθ} ψ(l)`, `h₀ ψ′(−l) = −h₁ e^{-iθ} ψ(−l)`.
    Separated(SeparatedParams),
}

impl OuterConditions {
    pub fn family_name(&self) -> &'static str {
        match self {
            OuterConditions::Symmetric(_) => "symmetric",
            OuterConditions::Connected(_) => "connected",
            OuterConditions::Separated(_) => "separated",
        }
    }
}

/// Interval model: half-length `l`, interface angle `φ`, outer conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalModelRaw")]
pub struct IntervalModel {
    l: f64,
    phi: f64,
    outer: OuterConditions,
}

#[derive(Deserialize)]
struct IntervalModelRaw {
    l: f64,
    phi: f64,
    outer: OuterConditions,
}

impl TryFrom<IntervalModelRaw> for IntervalModel {
    type Error = Error;
    fn try_from(r: IntervalModelRaw) -> Result<Self> {
        IntervalModel::new(r.l, r.phi, r.outer)
    }
}

impl IntervalModel {
    pub fn new(l: f64, phi: f64, outer: OuterConditions) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interval half-length must be positive, got {l}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter("phi must be finite".into()));
        }
        if let OuterConditions::Connected(p) = &outer {
            if p.theta().abs() > CLASSIFY_TOL {
                return Err(Error::InvalidParameter(format!(
                    "connected outer conditions require theta = 0, got {}",
                    p.theta()
                )));
            }
        }
        Ok(Self {
            l,
            phi: reduce_angle_pi(phi),
            outer,
        })
    }

    pub fn l(&self) -> f64 {
        self.l
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn outer(&self) -> &OuterConditions {
        &self.outer
    }

    /// The closed-form secular function for this model's outer family.
    pub fn secular(&self, k: C) -> C {
        match &self.outer {
            OuterConditions::Symmetric(_) => secular_symmetric(self, k).unwrap(),
            OuterConditions::Connected(_) => secular_connected(self, k).unwrap(),
            OuterConditions::Separated(_) => secular_separated(self, k).unwrap(),
        }
    }
}

/// The 2×2 interface matrix `diag(e^{iφ}, e^{-iφ})` coupling the one-sided
/// traces at the origin.
pub fn interface_matrix(phi: f64) -> Matrix2<C> {
    Matrix2::new(
        C::from_polar(1.0, phi),
        C::new(0.0, 0.0),
        C::new(0.0, 0.0),
        C::from_polar(1.0, -phi),
    )
}

/// Rows of the outer conditions applied to trace functionals.
///
/// `vm`, `dm`, `vp`, `dp` are coefficient rows evaluating `ψ(−l)`, `ψ′(−l)`,
/// `ψ(l)`, `ψ′(l)` on the chosen 4-dimensional solution basis.
fn outer_rows(
    outer: &OuterConditions,
    vm: RowVector4<C>,
    dm: RowVector4<C>,
    vp: RowVector4<C>,
    dp: RowVector4<C>,
) -> (RowVector4<C>, RowVector4<C>) {
    match outer {
        OuterConditions::Separated(p) => {
            let eith = C::from_polar(1.0, p.theta());
            let r3 = dp * C::new(p.h0(), 0.0) - vp * (p.h1() * eith);
            let r4 = dm * C::new(p.h0(), 0.0) + vm * (p.h1() * eith.conj());
            (r3, r4)
        }
        OuterConditions::Connected(p) => {
            let b = connected_matrix(p);
            let r3 = vp - vm * b[(0, 0)] - dm * b[(0, 1)];
            let r4 = dp - vm * b[(1, 0)] - dm * b[(1, 1)];
            (r3, r4)
        }
        OuterConditions::Symmetric(p) => {
            let u = p.u();
            let umi = u - Matrix2::identity();
            let upi = u + Matrix2::identity();
            let il0 = C::new(0.0, p.l0());
            let r3 = vp * umi[(0, 0)] + vm * umi[(0, 1)] + (dp * upi[(0, 0)] - dm * upi[(0, 1)]) * il0;
            let r4 = vp * umi[(1, 0)] + vm * umi[(1, 1)] + (dp * upi[(1, 0)] - dm * upi[(1, 1)]) * il0;
            (r3, r4)
        }
    }
}

/// The 4×4 matching matrix whose determinant vanishes exactly at the
/// eigen-wavenumbers.
///
/// For `|k| l` above a tiny threshold the solution basis is
/// `{e^{ikx}, e^{-ikx}}` on each side; below it the basis switches to
/// `{1, x}` per side. The two parameterizations scale differently, so only
/// zero sets — not values — are comparable across that switch.
pub fn system_matrix(model: &IntervalModel, k: C) -> Matrix4<C> {
    let l = model.l;
    let zero = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let eiphi = C::from_polar(1.0, model.phi);

    let (r1, r2, vm, dm, vp, dp);
    if k.norm() * l <= DEGENERATE_KL {
        // Basis: left a1 + a2 x, right a3 + a4 x.
        r1 = RowVector4::new(-eiphi, zero, one, zero);
        r2 = RowVector4::new(zero, -eiphi.conj(), zero, one);
        vm = RowVector4::new(one, C::new(-l, 0.0), zero, zero);
        dm = RowVector4::new(zero, one, zero, zero);
        vp = RowVector4::new(zero, zero, one, C::new(l, 0.0));
        dp = RowVector4::new(zero, zero, zero, one);
    } else {
        // Basis: left a1 e^{ikx} + a2 e^{-ikx}, right a3 e^{ikx} + a4 e^{-ikx}.
        let ik = C::new(0.0, 1.0) * k;
        let e = (ik * l).exp();
        let eb = (-ik * l).exp();
        r1 = RowVector4::new(-eiphi, -eiphi, one, one);
        r2 = RowVector4::new(-ik * eiphi.conj(), ik * eiphi.conj(), ik, -ik);
        vm = RowVector4::new(eb, e, zero, zero);
        dm = RowVector4::new(ik * eb, -ik * e, zero, zero);
        vp = RowVector4::new(zero, zero, e, eb);
        dp = RowVector4::new(zero, zero, ik * e, -ik * eb);
    }
    let (r3, r4) = outer_rows(&model.outer, vm, dm, vp, dp);
    Matrix4::from_rows(&[r1, r2, r3, r4])
}

/// Determinant of the 4×4 matching matrix; its zeros in `k` are the
/// eigen-wavenumbers of the model. Holomorphic in `k` away from the tiny
/// basis-switch disc around `k = 0` (see [`system_matrix`]).
pub fn boundary_determinant(model: &IntervalModel, k: C) -> C {
    system_matrix(model, k).determinant()
}

/// `|det|` of the matching matrix scaled by the product of its row norms, a
/// dimensionless measure of how close the matrix is to singular. Suitable for
/// thresholding, not for root finding (it is not holomorphic).
pub fn normalized_boundary_determinant(model: &IntervalModel, k: C) -> f64 {
    let m = system_matrix(model, k);
    let det = m.determinant().norm();
    let mut scale = 1.0;
    for i in 0..4 {
        scale *= m.row(i).norm().max(f64::MIN_POSITIVE);
    }
    det / scale
}

fn require_family<'a, T>(
    model: &'a IntervalModel,
    expected: &'static str,
    pick: impl Fn(&'a OuterConditions) -> Option<T>,
) -> Result<T> {
    pick(&model.outer).ok_or(Error::WrongFamily {
        expected,
        got: model.outer.family_name(),
    })
}

/// Closed-form secular function for a separated outer pair:
/// `cos φ (2 h₀ h₁ k cos 2kl cos θ + (h₀² k² − h₁²) sin 2kl)
///  − 2 h₀ h₁ k sin θ sin φ`.
/// Away from `k = 0` its zeros coincide with those of
/// [`boundary_determinant`].
pub fn secular_separated(model: &IntervalModel, k: C) -> Result<C> {
    let p = require_family(model, "separated", |o| match o {
        OuterConditions::Separated(p) => Some(*p),
        _ => None,
    })?;
    let (h0, h1, th) = (p.h0(), p.h1(), p.theta());
    let (cphi, sphi) = (model.phi.cos(), model.phi.sin());
    let two_kl = k * (2.0 * model.l);
    let c2 = two_kl.cos();
    let s2 = two_kl.sin();
    let a = c2 * (2.0 * h0 * h1 * th.cos()) * k + s2 * (h0 * h0 * k * k - C::new(h1 * h1, 0.0));
    Ok(a * cphi - k * (2.0 * h0 * h1 * th.sin() * sphi))
}

/// Closed-form secular function for a connected outer matrix with `θ₂ = 0`:
/// `cos φ ((b₂ k² − c₂) sin 2kl + 2 k √(1+b₂c₂) cos φ₂ cos 2kl)
///  + 2 k (√(1+b₂c₂) sin φ sin φ₂ − 1)`.
/// Away from `k = 0` its zeros coincide with those of
/// [`boundary_determinant`].
pub fn secular_connected(model: &IntervalModel, k: C) -> Result<C> {
    let p = require_family(model, "connected", |o| match o {
        OuterConditions::Connected(p) => Some(*p),
        _ => None,
    })?;
    let (b2, c2v, phi2, r) = (p.b(), p.c(), p.phi(), p.radial());
    let (cphi, sphi) = (model.phi.cos(), model.phi.sin());
    let two_kl = k * (2.0 * model.l);
    let cc = two_kl.cos();
    let ss = two_kl.sin();
    let a = ss * (k * k * b2 - C::new(c2v, 0.0)) + cc * (2.0 * r * phi2.cos()) * k;
    Ok(a * cphi + k * (2.0 * (r * sphi * phi2.sin() - 1.0)))
}

/// Closed-form secular function for a symmetric outer pair:
/// `cos φ (p₁ sin 2kl − 2 i k L₀ p₂ cos 2kl + k² L₀² p₃ sin 2kl)
///  + 2 i k L₀ (u₁₂ + u₂₁ + i (u₁₁ − u₂₂) sin φ)`,
/// where `p₁ = det(I − U)`, `p₂ = 1 − det U`, `p₃ = det(I + U)`.
/// The matching determinant equals `C·k` times this expression for a
/// `k`-independent constant `C`, so the two have the same zeros away from
/// `k = 0`.
pub fn secular_symmetric(model: &IntervalModel, k: C) -> Result<C> {
    let p = require_family(model, "symmetric", |o| match o {
        OuterConditions::Symmetric(p) => Some(p.clone()),
        _ => None,
    })?;
    let u = p.u();
    let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let one = C::new(1.0, 0.0);
    let p1 = (one - u11) * (one - u22) - u12 * u21;
    let p2 = one - (u11 * u22 - u12 * u21);
    let p3 = (one + u11) * (one + u22) - u12 * u21;
    let l0 = p.l0();
    let (cphi, sphi) = (model.phi.cos(), model.phi.sin());
    let two_kl = k * (2.0 * model.l);
    let cc = two_kl.cos();
    let ss = two_kl.sin();
    let i = C::new(0.0, 1.0);
    let a = p1 * ss - i * k * (2.0 * l0) * p2 * cc + k * k * (l0 * l0) * p3 * ss;
    let b = i * k * (2.0 * l0) * (u12 + u21 + i * (u11 - u22) * sphi);
    Ok(a * cphi + b)
}

/// How the spectrum of an interval model fills the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumTag {
    /// Isolated eigenvalues: zeros of the secular function.
    Discrete,
    /// No spectral points at all.
    Empty,
    /// Every complex number is an eigenvalue.
    EntireComplexPlane,
}

/// A named complex number recorded by [`classify`] as evidence for the
/// decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    #[serde(with = "complex_pair")]
    pub value: C,
}

/// Classification outcome: the spectrum type, the decisive condition in
/// plain text, and the parameter combinations it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub tag: SpectrumTag,
    pub condition_evaluated: String,
    pub witness: Vec<Witness>,
}

fn witness(name: &str, value: C) -> Witness {
    Witness {
        name: name.into(),
        value,
    }
}

/// Decides whether the model's spectrum is discrete, empty, or the entire
/// complex plane.
///
/// At `φ = ±π/2` the `cos φ` part of the secular function vanishes and the
/// remainder is either identically zero (entire-plane spectrum) or a nonzero
/// multiple of `k` (empty spectrum); the decision reduces to one parameter
/// combination per family. Away from `±π/2` the secular function has isolated
/// zeros for every admissible parameter choice except one degenerate
/// connected case with no zeros at all.
pub fn classify(model: &IntervalModel) -> SpectrumClass {
    let half = std::f64::consts::FRAC_PI_2;
    let at_plus = (model.phi - half).abs() <= CLASSIFY_TOL;
    let at_minus = (model.phi + half).abs() <= CLASSIFY_TOL;
    let at_half_pi = at_plus || at_minus;
    let s = if at_minus { -1.0 } else { 1.0 };

    match &model.outer {
        OuterConditions::Symmetric(p) => {
            let u = p.u();
            if at_half_pi {
                let c = u[(0, 1)] + u[(1, 0)] + C::new(0.0, s) * (u[(0, 0)] - u[(1, 1)]);
                let w = vec![witness("u12 + u21 + i*sign(sin phi)*(u11 - u22)", c)];
                if c.norm() <= CLASSIFY_TOL * (u.norm() + 1.0) {
                    SpectrumClass {
                        tag: SpectrumTag::EntireComplexPlane,
                        condition_evaluated:
                            "phi = ±pi/2 and u12 + u21 + i*sign(sin phi)*(u11 - u22) = 0".into(),
                        witness: w,
                    }
                } else {
                    SpectrumClass {
                        tag: SpectrumTag::Empty,
                        condition_evaluated:
                            "phi = ±pi/2 and u12 + u21 + i*sign(sin phi)*(u11 - u22) != 0".into(),
                        witness: w,
                    }
                }
            } else {
                SpectrumClass {
                    tag: SpectrumTag::Discrete,
                    condition_evaluated:
                        "cos phi != 0: the symmetric secular equation has isolated zeros".into(),
                    witness: vec![witness("cos_phi", C::new(model.phi.cos(), 0.0))],
                }
            }
        }
        OuterConditions::Connected(p) => {
            if at_half_pi {
                let v = p.radial() * s * p.phi().sin() - 1.0;
                let w = vec![witness("sqrt(1+b*c)*sin(phi)*sin(phi2) - 1", C::new(v, 0.0))];
                if v.abs() <= CLASSIFY_TOL {
                    SpectrumClass {
                        tag: SpectrumTag::EntireComplexPlane,
                        condition_evaluated:
                            "phi = ±pi/2 and sqrt(1+b*c)*sin(phi)*sin(phi2) = 1".into(),
                        witness: w,
                    }
                } else {
                    SpectrumClass {
                        tag: SpectrumTag::Empty,
                        condition_evaluated:
                            "phi = ±pi/2 and sqrt(1+b*c)*sin(phi)*sin(phi2) != 1".into(),
                        witness: w,
                    }
                }
            } else if p.b().abs() <= CLASSIFY_TOL
                && p.c().abs() <= CLASSIFY_TOL
                && p.phi().cos().abs() <= CLASSIFY_TOL
            {
                // The cos(phi) part of the secular function vanishes
                // identically and the rest, 2k(sin(phi)sin(phi2) - 1), has no
                // zeros because |sin(phi)| < 1 here.
                let v = model.phi.sin() * p.phi().sin() - 1.0;
                SpectrumClass {
                    tag: SpectrumTag::Empty,
                    condition_evaluated:
                        "b = c = 0 and cos(phi2) = 0 with cos(phi) != 0: secular function \
                         reduces to 2k(sin(phi)sin(phi2) - 1) with no zeros"
                            .into(),
                    witness: vec![witness("sin(phi)*sin(phi2) - 1", C::new(v, 0.0))],
                }
            } else {
                SpectrumClass {
                    tag: SpectrumTag::Discrete,
                    condition_evaluated:
                        "cos phi != 0: the connected secular equation has isolated zeros".into(),
                    witness: vec![witness("cos_phi", C::new(model.phi.cos(), 0.0))],
                }
            }
        }
        OuterConditions::Separated(p) => {
            if at_half_pi {
                let v = p.h0() * p.h1() * p.theta().sin();
                let w = vec![witness("h0*h1*sin(theta)", C::new(v, 0.0))];
                if v.abs() <= CLASSIFY_TOL {
                    SpectrumClass {
                        tag: SpectrumTag::EntireComplexPlane,
                        condition_evaluated: "phi = ±pi/2 and h0*h1*sin(theta) = 0".into(),
                        witness: w,
                    }
                } else {
                    SpectrumClass {
                        tag: SpectrumTag::Empty,
                        condition_evaluated: "phi = ±pi/2 and h0*h1*sin(theta) != 0".into(),
                        witness: w,
                    }
                }
            } else {
                SpectrumClass {
                    tag: SpectrumTag::Discrete,
                    condition_evaluated:
                        "cos phi != 0: the separated secular equation has isolated zeros".into(),
                    witness: vec![witness("cos_phi", C::new(model.phi.cos(), 0.0))],
                }
            }
        }
    }
}

/// Lists the eigen-wavenumbers inside a rectangle of the `k` plane by an
/// argument-principle search on the matching determinant. Refuses models
/// whose spectrum is not discrete.
pub fn eigenvalues_in_region(
    model: &IntervalModel,
    region: &Rectangle,
    cfg: &RootConfig,
) -> Result<RootSet> {
    let class = classify(model);
    if class.tag != SpectrumTag::Discrete {
        return Err(Error::RegimeRefusal(format!(
            "eigenvalue listing requires a discrete spectrum; {}",
            class.condition_evaluated
        )));
    }
    let f = move |k: C| boundary_determinant(model, k);
    find_roots(&f, region, cfg)
}

/// Builds the normalized eigenfunction at the wavenumber `k` from the null
/// direction of the matching matrix. Fails with [`Error::NoEigenfunction`]
/// when the matrix is not rank-deficient at `k` (relative smallest singular
/// value above `1e-8`).
pub fn eigenfunction_interval(
    model: &IntervalModel,
    k: C,
    grid_n: usize,
) -> Result<PiecewiseFunction> {
    let m = system_matrix(model, k);
    let dm = DMatrix::from_fn(4, 4, |i, j| m[(i, j)]);
    let svd = dm.svd(false, true);
    let sv = &svd.singular_values;
    let (mut imin, mut smin, mut smax) = (0usize, f64::INFINITY, 0.0f64);
    for i in 0..sv.len() {
        if sv[i] < smin {
            smin = sv[i];
            imin = i;
        }
        smax = smax.max(sv[i]);
    }
    let degenerate = !smax.is_finite() || smax <= 0.0;
    if degenerate || smin > 1e-8 * smax {
        return Err(Error::NoEigenfunction(format!(
            "matching matrix is not rank-deficient at k = {k}: smallest relative singular value {:.3e}",
            smin / smax.max(f64::MIN_POSITIVE)
        )));
    }
    let vt = svd
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD did not return right singular vectors".into()))?;
    let a: Vec<C> = (0..4).map(|j| vt[(imin, j)].conj()).collect();

    let l = model.l;
    let f = if k.norm() * l <= DEGENERATE_KL {
        let (a1, a2, a3, a4) = (a[0], a[1], a[2], a[3]);
        PiecewiseFunction::from_closure(
            -l,
            l,
            grid_n,
            move |x| a1 + a2 * x,
            move |_| a2,
            move |x| a3 + a4 * x,
            move |_| a4,
        )?
    } else {
        let ik = C::new(0.0, 1.0) * k;
        let (a1, a2, a3, a4) = (a[0], a[1], a[2], a[3]);
        PiecewiseFunction::from_closure(
            -l,
            l,
            grid_n,
            move |x| a1 * (ik * x).exp() + a2 * (-ik * x).exp(),
            move |x| ik * (a1 * (ik * x).exp() - a2 * (-ik * x).exp()),
            move |x| a3 * (ik * x).exp() + a4 * (-ik * x).exp(),
            move |x| ik * (a3 * (ik * x).exp() - a4 * (-ik * x).exp()),
        )?
    };
    let norm = f.norm();
    if !(norm.is_finite() && norm > 1e-300) {
        return Err(Error::NumericalFailure(
            "eigenfunction candidate has unusable norm".into(),
        ));
    }
    Ok(f.scaled(C::new(1.0 / norm, 0.0)))
}

/// Residuals of a sampled function against the model's interface condition
/// (first) and outer conditions (second), evaluated on its stored traces.
pub fn interval_bc_residuals(model: &IntervalModel, f: &PiecewiseFunction) -> (f64, f64) {
    let interface = bc_residual_connected(&f.traces, &interface_matrix(model.phi));
    let outer_traces = BoundaryTraces {
        val_minus: f.endpoint.val_a,
        der_minus: f.endpoint.der_a,
        val_plus: f.endpoint.val_b,
        der_plus: f.endpoint.der_b,
    };
    let outer = match &model.outer {
        OuterConditions::Symmetric(p) => bc_residual_symmetric(&outer_traces, p),
        OuterConditions::Connected(p) => {
            bc_residual_connected(&outer_traces, &connected_matrix(p))
        }
        OuterConditions::Separated(p) => bc_residual_separated(&outer_traces, p),
    };
    (interface, outer)
}
