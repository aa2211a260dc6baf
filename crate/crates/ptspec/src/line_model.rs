//! The whole-line operator `-d²/dx²` with a one-parameter interface at the
//! origin: `ψ(0+) = e^{iφ} ψ(0−)`, `ψ′(0+) = e^{-iφ} ψ′(0−)`.
//!
//! For `φ ≠ ±π/2` the operator has no point spectrum at all. At `φ = ±π/2`
//! every `λ` off the ray `[0, ∞)` is an eigenvalue, with explicit
//! exponential eigenfunctions built here in three equivalent
//! parameterizations ([`EigenBranch`]). The module also provides the bounded
//! metric operator that intertwines the interface with its adjoint, and
//! singular (Weyl) sequences witnessing the essential spectrum on the ray.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::boundary_conditions::{bc_residual_connected, reduce_angle_pi, BoundaryTraces};
use crate::error::{Error, Result};
use crate::interval_spectra::interface_matrix;
use crate::piecewise_grid::{
    apply_second_derivative, bump, bump_d1, bump_d2, EndpointTraces, GridConfig,
    PiecewiseFunction,
};

type C = Complex64;

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
const ANGLE_TOL: f64 = 1e-12;

/// Whole-line model: the interface angle `φ`, reduced to `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineModel {
    phi: f64,
}

impl LineModel {
    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter("phi must be finite".into()));
        }
        Ok(Self {
            phi: reduce_angle_pi(phi),
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `Some(±1.0)` when `φ = ±π/2` within tolerance, else `None`.
    pub fn half_pi_sign(&self) -> Option<f64> {
        if (self.phi - HALF_PI).abs() <= ANGLE_TOL {
            Some(1.0)
        } else if (self.phi + HALF_PI).abs() <= ANGLE_TOL {
            Some(-1.0)
        } else {
            None
        }
    }
}

/// Determinant of the 2×2 system matching an exponentially decaying solution
/// across the interface; equals `2 cos φ`. It vanishes exactly at
/// `φ = ±π/2`, the angles where square-integrable eigenfunctions exist.
pub fn decaying_match_determinant(model: &LineModel) -> C {
    C::new(2.0 * model.phi.cos(), 0.0)
}

/// The three equivalent parameterizations of the explicit line
/// eigenfunctions at `φ = ±π/2`. `plus` selects the `+i` (`φ = π/2`) or
/// `-i` (`φ = -π/2`) interface pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum EigenBranch {
    /// `Re k > 0`, eigenvalue `-k²`: `e^{kx}` on the left, `±i e^{-kx}` on
    /// the right.
    ExpDecay {
        #[serde(with = "crate::boundary_conditions::complex_pair")]
        k: C,
        plus: bool,
    },
    /// `Re k < 0`, eigenvalue `-k²`: `e^{-kx}` on the left, `±i e^{kx}` on
    /// the right. Same functions as [`EigenBranch::ExpDecay`] under
    /// `k ↦ -k`.
    ExpDecayReflected {
        #[serde(with = "crate::boundary_conditions::complex_pair")]
        k: C,
        plus: bool,
    },
    /// `Re k = 0`, `Im k > 0`, eigenvalue `+k²`: `e^{-ikx}` on the left,
    /// `±i e^{ikx}` on the right. Same functions as
    /// [`EigenBranch::ExpDecay`] under `k ↦ -ik`; square-integrable like the
    /// other two parameterizations.
    OscillatoryDecay {
        #[serde(with = "crate::boundary_conditions::complex_pair")]
        k: C,
        plus: bool,
    },
}

impl EigenBranch {
    fn k(&self) -> C {
        match *self {
            EigenBranch::ExpDecay { k, .. } => k,
            EigenBranch::ExpDecayReflected { k, .. } => k,
            EigenBranch::OscillatoryDecay { k, .. } => k,
        }
    }

    fn plus(&self) -> bool {
        match *self {
            EigenBranch::ExpDecay { plus, .. } => plus,
            EigenBranch::ExpDecayReflected { plus, .. } => plus,
            EigenBranch::OscillatoryDecay { plus, .. } => plus,
        }
    }

    /// The eigenvalue this branch parameterizes.
    pub fn eigenvalue(&self) -> C {
        let k = self.k();
        match self {
            EigenBranch::ExpDecay { .. } | EigenBranch::ExpDecayReflected { .. } => -k * k,
            EigenBranch::OscillatoryDecay { .. } => k * k,
        }
    }

    fn validate(&self) -> Result<()> {
        let k = self.k();
        let scale = k.norm();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "branch wavenumber must be finite and nonzero, got {k}"
            )));
        }
        let ok = match self {
            EigenBranch::ExpDecay { .. } => k.re > ANGLE_TOL * scale,
            EigenBranch::ExpDecayReflected { .. } => k.re < -ANGLE_TOL * scale,
            EigenBranch::OscillatoryDecay { .. } => {
                k.re.abs() <= ANGLE_TOL * scale && k.im > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "wavenumber {k} lies outside this branch's half-plane"
            )))
        }
    }

    /// Exponential decay rate towards both infinities.
    fn decay_rate(&self) -> f64 {
        match self {
            EigenBranch::ExpDecay { k, .. } => k.re,
            EigenBranch::ExpDecayReflected { k, .. } => -k.re,
            EigenBranch::OscillatoryDecay { k, .. } => k.im,
        }
    }
}

/// Builds the normalized explicit eigenfunction of a branch, together with
/// its eigenvalue.
///
/// The half-width of the sampling window is chosen adaptively from the decay
/// rate and `|k|` (so the tails are negligible and the oscillation is
/// resolved); `cfg.truncation` is not consulted here, only `cfg.grid_n`.
/// Fails with a regime refusal unless `φ = ±π/2` with the sign matching the
/// branch's pairing.
pub fn eigenfunction_line(
    model: &LineModel,
    branch: &EigenBranch,
    cfg: &GridConfig,
) -> Result<(PiecewiseFunction, C)> {
    cfg.validate()?;
    branch.validate()?;
    let sign = model.half_pi_sign().ok_or_else(|| {
        Error::RegimeRefusal(format!(
            "point spectrum of the line model is empty at phi = {} (needs ±pi/2)",
            model.phi
        ))
    })?;
    let plus = branch.plus();
    if (sign > 0.0) != plus {
        return Err(Error::RegimeRefusal(format!(
            "branch pairing {} does not match phi = {}",
            if plus { "+i" } else { "-i" },
            model.phi
        )));
    }
    let s_i = C::new(0.0, if plus { 1.0 } else { -1.0 });
    let k = branch.k();
    let x_max = (33.0 / branch.decay_rate()).min(80.0 / k.norm()).min(1e6);

    // All three branches reduce to: left e^{q x}, right s_i e^{-q x} with
    // Re q > 0.
    let q = match branch {
        EigenBranch::ExpDecay { .. } => k,
        EigenBranch::ExpDecayReflected { .. } => -k,
        EigenBranch::OscillatoryDecay { .. } => -C::new(0.0, 1.0) * k,
    };
    let f = PiecewiseFunction::from_closure(
        -x_max,
        x_max,
        cfg.grid_n,
        move |x| (q * x).exp(),
        move |x| q * (q * x).exp(),
        move |x| s_i * (-q * x).exp(),
        move |x| -q * s_i * (-q * x).exp(),
    )?;
    let norm = f.norm();
    if !(norm.is_finite() && norm > 1e-300) {
        return Err(Error::NumericalFailure(
            "eigenfunction has unusable norm on the chosen window".into(),
        ));
    }
    Ok((f.scaled(C::new(1.0 / norm, 0.0)), branch.eigenvalue()))
}

/// Tests whether `λ` is an eigenvalue of the line model; if so, returns the
/// branch parameterization and the normalized eigenfunction.
///
/// The point spectrum is empty unless `φ = ±π/2`, where it is the whole
/// plane cut along `[0, ∞)`: points on that ray (exactly real with
/// `Re λ ≥ 0`) are not eigenvalues.
pub fn point_spectrum_member(
    model: &LineModel,
    lambda: C,
    cfg: &GridConfig,
) -> Result<Option<(EigenBranch, PiecewiseFunction)>> {
    let Some(sign) = model.half_pi_sign() else {
        return Ok(None);
    };
    if lambda.im == 0.0 && lambda.re >= 0.0 {
        return Ok(None);
    }
    let k = (-lambda).sqrt();
    let branch = EigenBranch::ExpDecay {
        k,
        plus: sign > 0.0,
    };
    let (f, _) = eigenfunction_line(model, &branch, cfg)?;
    Ok(Some((branch, f)))
}

/// The two-point spectrum `{1 − sin φ, 1 + sin φ}` of the metric operator.
pub fn metric_spectrum(model: &LineModel) -> [f64; 2] {
    [1.0 - model.phi.sin(), 1.0 + model.phi.sin()]
}

/// Whether the metric operator has a bounded inverse: true iff
/// `|sin φ| ≠ 1`, i.e. away from `φ = ±π/2`.
pub fn metric_invertible(model: &LineModel) -> bool {
    model.half_pi_sign().is_none()
}

fn require_symmetric_grid(f: &PiecewiseFunction) -> Result<()> {
    if (f.a() + f.b()).abs() <= 1e-12 * f.b().abs() {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "metric and parity maps need a window symmetric about 0, got [{}, {}]",
            f.a(),
            f.b()
        )))
    }
}

/// Applies the metric operator
/// `(Θ f)(x) = f(x) − i sin φ · sign(x) · f(−x)`
/// on a window symmetric about the origin.
pub fn metric_apply(model: &LineModel, f: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    require_symmetric_grid(f)?;
    let is = C::new(0.0, model.phi.sin());
    let n = f.grid_n();
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    for i in 0..=n {
        // x_left(i) mirrors to x_right(n - i).
        left.push(f.left[i] + is * f.right[n - i]);
        right.push(f.right[i] - is * f.left[n - i]);
    }
    let t = &f.traces;
    let traces = BoundaryTraces {
        val_minus: t.val_minus + is * t.val_plus,
        der_minus: t.der_minus - is * t.der_plus,
        val_plus: t.val_plus - is * t.val_minus,
        der_plus: t.der_plus + is * t.der_minus,
    };
    let e = &f.endpoint;
    let endpoint = EndpointTraces {
        val_a: e.val_a + is * e.val_b,
        der_a: e.der_a - is * e.der_b,
        val_b: e.val_b - is * e.val_a,
        der_b: e.der_b + is * e.der_a,
    };
    PiecewiseFunction::from_samples(f.a(), f.b(), left, right, traces, endpoint)
}

/// Applies the combined parity-conjugation map `(PT f)(x) = conj(f(−x))` on
/// a window symmetric about the origin. An exact involution on samples.
pub fn pt_apply(f: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    require_symmetric_grid(f)?;
    let n = f.grid_n();
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    for i in 0..=n {
        left.push(f.right[n - i].conj());
        right.push(f.left[n - i].conj());
    }
    let t = &f.traces;
    let traces = BoundaryTraces {
        val_minus: t.val_plus.conj(),
        der_minus: -t.der_plus.conj(),
        val_plus: t.val_minus.conj(),
        der_plus: -t.der_minus.conj(),
    };
    let e = &f.endpoint;
    let endpoint = EndpointTraces {
        val_a: e.val_b.conj(),
        der_a: -e.der_b.conj(),
        val_b: e.val_a.conj(),
        der_b: -e.der_a.conj(),
    };
    PiecewiseFunction::from_samples(f.a(), f.b(), left, right, traces, endpoint)
}

/// Residuals of the intertwining property of the metric operator on a
/// function satisfying the model's interface conditions:
///
/// * first: `‖L(Θf) − Θ(Lf)‖ / ‖f‖` with `L = -d²/dx²` applied by finite
///   differences (the two commute exactly up to rounding on a symmetric
///   grid);
/// * second: the residual of `Θf` against the adjoint interface conditions
///   (angle `-φ`), normalized by the trace magnitude.
///
/// Fails if `f` violates the model's own interface conditions.
pub fn intertwining_residual(
    model: &LineModel,
    f: &PiecewiseFunction,
    fd_order: usize,
) -> Result<(f64, f64)> {
    let own = bc_residual_connected(&f.traces, &interface_matrix(model.phi));
    let scale = f.traces.norm().max(1e-300);
    if own > 1e-10 * scale.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "input violates the interface conditions (residual {own:.3e})"
        )));
    }
    let theta_f = metric_apply(model, f)?;
    let l_theta_f = apply_second_derivative(&theta_f, fd_order)?;
    let lf = apply_second_derivative(f, fd_order)?;
    let theta_lf = metric_apply(model, &lf)?;
    let comm = l_theta_f.sub(&theta_lf)?.norm() / f.norm().max(1e-300);
    let adj = bc_residual_connected(&theta_f.traces, &interface_matrix(-model.phi));
    let adj_scale = theta_f.traces.norm().max(1.0);
    Ok((comm, adj / adj_scale))
}

/// Element `n` of the singular sequence at wavenumber `k`: a normalized
/// plane-wave packet `e^{ikx} · bump((x − n²)/n)` supported on
/// `(n(n−1), n(n+1))`, far to the right of the interface. Requires `n ≥ 2`
/// so the support stays away from the origin.
pub fn weyl_sequence(k: f64, n: usize, grid_n: usize) -> Result<PiecewiseFunction> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sequence index must be at least 2, got {n}"
        )));
    }
    if !k.is_finite() {
        return Err(Error::InvalidParameter("wavenumber must be finite".into()));
    }
    let nf = n as f64;
    let center = nf * nf;
    let b = nf * (nf + 1.0) + 1.0;
    let f = PiecewiseFunction::from_closure(
        -1.0,
        b,
        grid_n,
        |_| C::new(0.0, 0.0),
        |_| C::new(0.0, 0.0),
        move |x| {
            let t = (x - center) / nf;
            C::from_polar(1.0, k * x) * bump(t)
        },
        move |x| {
            let t = (x - center) / nf;
            let phase = C::from_polar(1.0, k * x);
            phase * (C::new(0.0, k) * bump(t) + C::new(bump_d1(t) / nf, 0.0))
        },
    )?;
    let norm = f.norm();
    if !(norm.is_finite() && norm > 1e-300) {
        return Err(Error::NumericalFailure(
            "singular sequence element has unusable norm".into(),
        ));
    }
    Ok(f.scaled(C::new(1.0 / norm, 0.0)))
}

/// Squared-profile integrals `(∫φ², ∫φ'², ∫φ''²)` of the standard bump on
/// `(-1, 1)`, by a fine fixed quadrature.
fn bump_profile_integrals() -> (f64, f64, f64) {
    static CELL: OnceLock<(f64, f64, f64)> = OnceLock::new();
    *CELL.get_or_init(|| {
        let n = 8192;
        let h = 2.0 / n as f64;
        let (mut j0, mut j1, mut j2) = (0.0, 0.0, 0.0);
        for i in 0..=n {
            let t = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            } * (h / 3.0);
            j0 += w * bump(t) * bump(t);
            j1 += w * bump_d1(t) * bump_d1(t);
            j2 += w * bump_d2(t) * bump_d2(t);
        }
        (j0, j1, j2)
    })
}

/// The exact `L²` residual `‖(L − k²) ψ_n‖` of the `n`-th normalized
/// singular-sequence element, together with its triangle-inequality bound.
///
/// Expanding the derivatives of `e^{ikx} φ((x−n²)/n)` reduces the residual to
/// profile integrals: the squared residual is
/// `4k² J₁/(n² J₀) + J₂/(n⁴ J₀)` with `J_m = ∫ |φ^{(m)}|²`, since the cross
/// term is purely imaginary. The bound is
/// `2|k| √(J₁/J₀)/n + √(J₂/J₀)/n²`; at `k = 0` residual and bound coincide.
pub fn weyl_residual(k: f64, n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sequence index must be at least 2, got {n}"
        )));
    }
    if !k.is_finite() {
        return Err(Error::InvalidParameter("wavenumber must be finite".into()));
    }
    let (j0, j1, j2) = bump_profile_integrals();
    let nf = n as f64;
    let n2 = nf * nf;
    let residual = (4.0 * k * k * j1 / (n2 * j0) + j2 / (n2 * n2 * j0)).sqrt();
    let bound = 2.0 * k.abs() * (j1 / j0).sqrt() / nf + (j2 / j0).sqrt() / n2;
    Ok((residual, bound))
}
