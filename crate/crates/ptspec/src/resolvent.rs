//! Resolvent of the interval operator with separated outer conditions.
//!
//! At a point `λ` off the spectrum, the resolvent is assembled from a pair
//! of solutions of `-u″ = λ u` adapted to one endpoint condition each: a
//! variation-of-parameters integral handles the right-hand side, and a rank-2
//! correction along the pair restores the interface conditions at the
//! origin. The same construction yields an explicit integral kernel whose
//! discretization exhibits the compactness of the resolvent through rapidly
//! decaying singular values.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::boundary_conditions::{
    bc_residual_connected, bc_residual_separated, BoundaryTraces, SeparatedParams,
};
use crate::error::{Error, Result};
use crate::interval_spectra::{interface_matrix, IntervalModel, OuterConditions};
use crate::piecewise_grid::{
    apply_second_derivative, cumulative_integral, simpson_weights, EndpointTraces,
    PiecewiseFunction,
};

type C = Complex64;

const DEGENERACY_TOL: f64 = 1e-12;

/// Everything needed to apply the resolvent at one spectral point: the
/// endpoint-adapted solution pair, its Wronskian, and the interface coupling
/// matrix, all validated to be nondegenerate.
#[derive(Debug, Clone)]
pub struct ResolventContext {
    model: IntervalModel,
    params: SeparatedParams,
    lambda: C,
    k: C,
    /// `u₋ = cm·cos kx + sm·sin kx` satisfies the left endpoint condition.
    cm: C,
    sm: C,
    /// `u₊ = cp·cos kx + sp·sin kx` satisfies the right endpoint condition.
    cp: C,
    sp: C,
    /// Wronskian `u₋ u₊′ − u₋′ u₊` (constant in `x`).
    w_pair: C,
    /// Denominator of the integral kernel: the negative of the pair
    /// Wronskian.
    w_green: C,
    coupling: Matrix2<C>,
    coupling_det: C,
}

impl ResolventContext {
    /// Validates the model (separated outer conditions only) and the
    /// spectral point, and precomputes the solution pair. Fails with a
    /// regime refusal when `λ` is at (or numerically indistinguishable
    /// from) a spectral point, or too close to zero for the trigonometric
    /// basis to be reliable.
    pub fn new(model: &IntervalModel, lambda: C) -> Result<Self> {
        let params = match model.outer() {
            OuterConditions::Separated(p) => *p,
            other => {
                return Err(Error::WrongFamily {
                    expected: "separated",
                    got: other.family_name(),
                })
            }
        };
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::InvalidParameter("lambda must be finite".into()));
        }
        // Canonical square root with Im k >= 0.
        let mut k = lambda.sqrt();
        if k.im < 0.0 || (k.im == 0.0 && k.re < 0.0) {
            k = -k;
        }
        if k.norm() < 1e-8 {
            return Err(Error::RegimeRefusal(
                "spectral point too close to zero for the oscillatory basis".into(),
            ));
        }
        let l = model.l();
        let h0 = params.h0();
        let h1 = params.h1();
        let eith = C::from_polar(1.0, params.theta());
        let (ckl, skl) = {
            let kl = k * l;
            (kl.cos(), kl.sin())
        };
        let cm = -k * h0 * ckl + eith.conj() * h1 * skl;
        let sm = eith.conj() * h1 * ckl + k * h0 * skl;
        let cp = k * h0 * ckl - eith * h1 * skl;
        let sp = eith * h1 * ckl + k * h0 * skl;
        let w_pair = (cm * sp - sm * cp) * k;
        let scale = (cm.norm() + sm.norm()) * (cp.norm() + sp.norm()) * k.norm().max(1e-300);
        if w_pair.norm() <= DEGENERACY_TOL * scale.max(1e-300) {
            return Err(Error::RegimeRefusal(format!(
                "solution pair is degenerate at lambda = {lambda} (Wronskian {:.3e})",
                w_pair.norm()
            )));
        }
        let eip = C::from_polar(1.0, model.phi());
        let coupling = Matrix2::new(
            -eip * cm,
            cp,
            -eip.conj() * (k * sm),
            k * sp,
        );
        let coupling_det = coupling[(0, 0)] * coupling[(1, 1)] - coupling[(0, 1)] * coupling[(1, 0)];
        let cscale = (coupling[(0, 0)].norm() + coupling[(0, 1)].norm())
            * (coupling[(1, 0)].norm() + coupling[(1, 1)].norm());
        if coupling_det.norm() <= DEGENERACY_TOL * cscale.max(1e-300) {
            return Err(Error::RegimeRefusal(format!(
                "lambda = {lambda} is numerically a spectral point (coupling determinant {:.3e})",
                coupling_det.norm()
            )));
        }
        Ok(Self {
            model: model.clone(),
            params,
            lambda,
            k,
            cm,
            sm,
            cp,
            sp,
            w_pair,
            w_green: -w_pair,
            coupling,
            coupling_det,
        })
    }

    pub fn lambda(&self) -> C {
        self.lambda
    }

    /// The canonical square root of `λ` used for the basis, `Im k ≥ 0`.
    pub fn k(&self) -> C {
        self.k
    }

    pub fn model(&self) -> &IntervalModel {
        &self.model
    }

    /// The solution satisfying the left endpoint condition; normalized so
    /// that `u₋(−l) = −k h₀`.
    pub fn u_minus(&self, x: f64) -> C {
        let kx = self.k * x;
        self.cm * kx.cos() + self.sm * kx.sin()
    }

    pub fn du_minus(&self, x: f64) -> C {
        let kx = self.k * x;
        (-self.cm * kx.sin() + self.sm * kx.cos()) * self.k
    }

    /// The solution satisfying the right endpoint condition; normalized so
    /// that `u₊(l) = k h₀`.
    pub fn u_plus(&self, x: f64) -> C {
        let kx = self.k * x;
        self.cp * kx.cos() + self.sp * kx.sin()
    }

    pub fn du_plus(&self, x: f64) -> C {
        let kx = self.k * x;
        (-self.cp * kx.sin() + self.sp * kx.cos()) * self.k
    }

    fn solve_coupling(&self, rhs: Vector2<C>) -> (C, C) {
        let m = &self.coupling;
        let c_minus = (m[(1, 1)] * rhs[0] - m[(0, 1)] * rhs[1]) / self.coupling_det;
        let c_plus = (m[(0, 0)] * rhs[1] - m[(1, 0)] * rhs[0]) / self.coupling_det;
        (c_minus, c_plus)
    }
}

/// Wronskian `u₋ u₊′ − u₋′ u₊` of the endpoint-adapted pair. Equals
/// `k(−2 h₀ h₁ k cos 2kl cos θ + (h₁² − h₀² k²) sin 2kl)` in closed form and
/// vanishes exactly when both solutions are multiples of each other.
pub fn wronskian(ctx: &ResolventContext) -> C {
    ctx.w_pair
}

/// The Wronskian rescaled to the pair normalized as `u₊(l) = k` instead of
/// `k h₀` (division by `h₀²`); unavailable for Dirichlet-type endpoints
/// (`h₀ = 0`).
pub fn wronskian_endpoint_normalized(ctx: &ResolventContext) -> Result<C> {
    let h0 = ctx.params.h0();
    if h0 == 0.0 {
        return Err(Error::InvalidParameter(
            "endpoint-normalized Wronskian undefined for h0 = 0".into(),
        ));
    }
    Ok(ctx.w_pair / (h0 * h0))
}

/// The interface coupling matrix used to correct the particular solution:
/// `[[−e^{iφ} u₋(0), u₊(0)], [−e^{-iφ} u₋′(0), u₊′(0)]]`. Its determinant
/// equals `k` times the separated secular function, so invertibility is
/// exactly solvability off the spectrum.
pub fn coupling_matrix(ctx: &ResolventContext) -> Matrix2<C> {
    ctx.coupling
}

/// The interface matching matrix written in the basis normalized at the
/// endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct MMatrix {
    pub matrix: Matrix2<C>,
    /// True when the entries were multiplied through by `h₀` because
    /// `h₀ = 0` makes the endpoint-normalized basis itself degenerate.
    pub h0_rescaled: bool,
}

/// Interface matching matrix in the endpoint-normalized basis:
///
/// ```text
/// [ e^{iφ}(k cos kl − e^{iθ}(h₁/h₀) sin kl)     k cos kl − e^{-iθ}(h₁/h₀) sin kl ]
/// [ −e^{-iφ} k (e^{iθ}(h₁/h₀) cos kl + k sin kl)   k (e^{-iθ}(h₁/h₀) cos kl + k sin kl) ]
/// ```
///
/// Its determinant is `(k/h₀²)` times the separated secular function with
/// `θ` reversed; at `φ = π/2` it reduces to `2k²(h₁/h₀) sin θ`. For `h₀ = 0`
/// the entries are returned multiplied through by `h₀` (finite limits) and
/// the flag is set.
pub fn m_matrix(ctx: &ResolventContext) -> MMatrix {
    let eip = C::from_polar(1.0, ctx.model.phi());
    let scaled = Matrix2::new(
        eip * ctx.cp,
        -ctx.cm,
        -eip.conj() * (ctx.k * ctx.sp),
        ctx.k * ctx.sm,
    );
    let h0 = ctx.params.h0();
    if h0 == 0.0 {
        MMatrix {
            matrix: scaled,
            h0_rescaled: true,
        }
    } else {
        MMatrix {
            matrix: scaled / C::new(h0, 0.0),
            h0_rescaled: false,
        }
    }
}

/// The two solutions truncated to one side each: `e₋ = u₋` on `x ≤ 0` (zero
/// on the right), `e₊ = u₊` on `x ≥ 0` (zero on the left). Each satisfies
/// the model's outer endpoint conditions and solves `-u″ = λu` away from the
/// origin, so they span the correction space for the interface.
pub fn defect_basis(
    ctx: &ResolventContext,
    grid_n: usize,
) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
    let l = ctx.model.l();
    let n = grid_n;
    let zero = C::new(0.0, 0.0);
    let mut left_m = Vec::with_capacity(n + 1);
    let mut right_p = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let xl = -l + (i as f64 / n as f64) * l;
        let xr = (i as f64 / n as f64) * l;
        left_m.push(ctx.u_minus(xl));
        right_p.push(ctx.u_plus(xr));
    }
    let e_minus = PiecewiseFunction::from_samples(
        -l,
        l,
        left_m,
        vec![zero; n + 1],
        BoundaryTraces {
            val_minus: ctx.u_minus(0.0),
            der_minus: ctx.du_minus(0.0),
            val_plus: zero,
            der_plus: zero,
        },
        EndpointTraces {
            val_a: ctx.u_minus(-l),
            der_a: ctx.du_minus(-l),
            val_b: zero,
            der_b: zero,
        },
    )?;
    let e_plus = PiecewiseFunction::from_samples(
        -l,
        l,
        vec![zero; n + 1],
        right_p,
        BoundaryTraces {
            val_minus: zero,
            der_minus: zero,
            val_plus: ctx.u_plus(0.0),
            der_plus: ctx.du_plus(0.0),
        },
        EndpointTraces {
            val_a: zero,
            der_a: zero,
            val_b: ctx.u_plus(l),
            der_b: ctx.du_plus(l),
        },
    )?;
    Ok((e_minus, e_plus))
}

fn require_matching_window(ctx: &ResolventContext, g: &PiecewiseFunction) -> Result<()> {
    let l = ctx.model.l();
    if (g.a() + l).abs() <= 1e-9 * l && (g.b() - l).abs() <= 1e-9 * l {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "right-hand side lives on [{}, {}], model interval is [-{l}, {l}]",
            g.a(),
            g.b()
        )))
    }
}

/// Variation-of-parameters integral against the kernel
/// `u₋(min(x,y)) u₊(max(x,y)) / w` built from the endpoint-adapted pair. The
/// result solves `(-d²/dx² − λ) F = g` and satisfies both outer endpoint
/// conditions, but not the interface conditions at the origin.
pub fn green_apply(ctx: &ResolventContext, g: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    require_matching_window(ctx, g)?;
    let n = g.grid_n();
    let hl = g.h_left();
    let hr = g.h_right();
    let um_l: Vec<C> = (0..=n).map(|i| ctx.u_minus(g.x_left(i))).collect();
    let up_l: Vec<C> = (0..=n).map(|i| ctx.u_plus(g.x_left(i))).collect();
    let um_r: Vec<C> = (0..=n).map(|i| ctx.u_minus(g.x_right(i))).collect();
    let up_r: Vec<C> = (0..=n).map(|i| ctx.u_plus(g.x_right(i))).collect();

    let prod = |u: &[C], s: &[C]| -> Vec<C> { u.iter().zip(s).map(|(a, b)| a * b).collect() };
    // P(x) = ∫_{-l}^x u₋ g, accumulated across the junction.
    let p_left = cumulative_integral(&prod(&um_l, &g.left), hl)?;
    let p0 = p_left[n];
    let p_right: Vec<C> = cumulative_integral(&prod(&um_r, &g.right), hr)?
        .into_iter()
        .map(|v| p0 + v)
        .collect();
    // Q(x) = ∫_x^l u₊ g, also accumulated across the junction.
    let cum_up_left = cumulative_integral(&prod(&up_l, &g.left), hl)?;
    let cum_up_right = cumulative_integral(&prod(&up_r, &g.right), hr)?;
    let q0 = cum_up_right[n];
    let q_left: Vec<C> = cum_up_left
        .iter()
        .map(|v| q0 + (cum_up_left[n] - v))
        .collect();
    let q_right: Vec<C> = cum_up_right.iter().map(|v| cum_up_right[n] - v).collect();

    let w = ctx.w_green;
    let f_left: Vec<C> = (0..=n)
        .map(|i| (up_l[i] * p_left[i] + um_l[i] * q_left[i]) / w)
        .collect();
    let f_right: Vec<C> = (0..=n)
        .map(|i| (up_r[i] * p_right[i] + um_r[i] * q_right[i]) / w)
        .collect();

    // Both one-sided traces agree: the integral and its first derivative are
    // continuous across the origin.
    let v0 = (ctx.u_plus(0.0) * p0 + ctx.u_minus(0.0) * q0) / w;
    let d0 = (ctx.du_plus(0.0) * p0 + ctx.du_minus(0.0) * q0) / w;
    let l = ctx.model.l();
    let q_a = q_left[0];
    let p_b = p_right[n];
    let traces = BoundaryTraces {
        val_minus: v0,
        der_minus: d0,
        val_plus: v0,
        der_plus: d0,
    };
    let endpoint = EndpointTraces {
        val_a: ctx.u_minus(-l) * q_a / w,
        der_a: ctx.du_minus(-l) * q_a / w,
        val_b: ctx.u_plus(l) * p_b / w,
        der_b: ctx.du_plus(l) * p_b / w,
    };
    PiecewiseFunction::from_samples(g.a(), g.b(), f_left, f_right, traces, endpoint)
}

/// Applies the full resolvent: the variation-of-parameters integral plus the
/// rank-2 correction along the one-sided pair that restores the interface
/// conditions. Returns the solution together with the correction
/// coefficients `(c₋, c₊)`.
pub fn apply_resolvent(
    ctx: &ResolventContext,
    g: &PiecewiseFunction,
) -> Result<(PiecewiseFunction, (C, C))> {
    let f1 = green_apply(ctx, g)?;
    let eip = C::from_polar(1.0, ctx.model.phi());
    let one = C::new(1.0, 0.0);
    let v0 = f1.traces.val_minus;
    let d0 = f1.traces.der_minus;
    let rhs = Vector2::new((eip - one) * v0, (eip.conj() - one) * d0);
    let (c_minus, c_plus) = ctx.solve_coupling(rhs);

    let n = f1.grid_n();
    let left: Vec<C> = (0..=n)
        .map(|i| f1.left[i] + c_minus * ctx.u_minus(f1.x_left(i)))
        .collect();
    let right: Vec<C> = (0..=n)
        .map(|i| f1.right[i] + c_plus * ctx.u_plus(f1.x_right(i)))
        .collect();
    let l = ctx.model.l();
    let traces = BoundaryTraces {
        val_minus: v0 + c_minus * ctx.u_minus(0.0),
        der_minus: d0 + c_minus * ctx.du_minus(0.0),
        val_plus: v0 + c_plus * ctx.u_plus(0.0),
        der_plus: d0 + c_plus * ctx.du_plus(0.0),
    };
    let endpoint = EndpointTraces {
        val_a: f1.endpoint.val_a + c_minus * ctx.u_minus(-l),
        der_a: f1.endpoint.der_a + c_minus * ctx.du_minus(-l),
        val_b: f1.endpoint.val_b + c_plus * ctx.u_plus(l),
        der_b: f1.endpoint.der_b + c_plus * ctx.du_plus(l),
    };
    let r = PiecewiseFunction::from_samples(f1.a(), f1.b(), left, right, traces, endpoint)?;
    Ok((r, (c_minus, c_plus)))
}

/// How well a computed resolvent output satisfies its defining equations.
#[derive(Debug, Clone, Copy)]
pub struct ResolventResiduals {
    /// `‖(-d²/dx² − λ) r − g‖ / ‖g‖` with derivatives by finite differences.
    pub pde: f64,
    /// Interface-condition residual at the origin, relative to the trace
    /// magnitude.
    pub interface: f64,
    /// Outer endpoint-condition residual, relative to the endpoint trace
    /// magnitude.
    pub outer: f64,
}

/// Measures the defining residuals of a resolvent application `r ≈ R(λ) g`.
pub fn resolvent_residuals(
    ctx: &ResolventContext,
    g: &PiecewiseFunction,
    r: &PiecewiseFunction,
    fd_order: usize,
) -> Result<ResolventResiduals> {
    require_matching_window(ctx, g)?;
    let lr = apply_second_derivative(r, fd_order)?;
    let pde_num = lr.sub(&r.scaled(ctx.lambda))?.sub(g)?.norm();
    let pde = pde_num / g.norm().max(1e-300);
    let interface = bc_residual_connected(&r.traces, &interface_matrix(ctx.model.phi()))
        / r.traces.norm().max(1.0);
    let outer_traces = BoundaryTraces {
        val_minus: r.endpoint.val_a,
        der_minus: r.endpoint.der_a,
        val_plus: r.endpoint.val_b,
        der_plus: r.endpoint.der_b,
    };
    let outer = bc_residual_separated(&outer_traces, &ctx.params) / outer_traces.norm().max(1.0);
    Ok(ResolventResiduals {
        pde,
        interface,
        outer,
    })
}

/// Quadrature-weighted discretization of the full resolvent kernel
/// (integral part plus interface correction) on `n` panels per side:
/// `A[r,c] = √w_r K(x_r, x_c) √w_c`, left nodes then right nodes. The
/// singular values of this matrix approximate those of the resolvent.
pub fn kernel_matrix(ctx: &ResolventContext, n: usize) -> Result<DMatrix<C>> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "kernel discretization needs an even panel count >= 8, got {n}"
        )));
    }
    let l = ctx.model.l();
    let h = l / n as f64;
    let w_side = simpson_weights(n, h)?;
    let sz = 2 * (n + 1);
    let um0 = ctx.u_minus(0.0);
    let dum0 = ctx.du_minus(0.0);
    let up0 = ctx.u_plus(0.0);
    let dup0 = ctx.du_plus(0.0);
    let eip = C::from_polar(1.0, ctx.model.phi());
    let one = C::new(1.0, 0.0);
    let wg = ctx.w_green;

    // Flattened node data: coordinate, sqrt(weight), side flag.
    let mut xs = Vec::with_capacity(sz);
    for (i, w) in w_side.iter().enumerate() {
        xs.push((-l + i as f64 * h, w.sqrt(), true));
    }
    for (i, w) in w_side.iter().enumerate() {
        xs.push((i as f64 * h, w.sqrt(), false));
    }

    let mut a = DMatrix::from_element(sz, sz, C::new(0.0, 0.0));
    for (col, &(y, sqy, y_left)) in xs.iter().enumerate() {
        // Kernel traces at the interface as a function of the source point.
        let (g0y, gx0y) = if y_left {
            (ctx.u_minus(y) * up0 / wg, ctx.u_minus(y) * dup0 / wg)
        } else {
            (um0 * ctx.u_plus(y) / wg, dum0 * ctx.u_plus(y) / wg)
        };
        let rhs = Vector2::new((eip - one) * g0y, (eip.conj() - one) * gx0y);
        let (c1, c2) = ctx.solve_coupling(rhs);
        for (row, &(x, sqx, x_left)) in xs.iter().enumerate() {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            let green = ctx.u_minus(lo) * ctx.u_plus(hi) / wg;
            let correction = if x_left {
                ctx.u_minus(x) * c1
            } else {
                ctx.u_plus(x) * c2
            };
            a[(row, col)] = (green + correction) * (sqx * sqy);
        }
    }
    Ok(a)
}

/// Singular values of a kernel discretization, sorted descending.
pub fn singular_values(matrix: &DMatrix<C>) -> Vec<f64> {
    let svd = matrix.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}
