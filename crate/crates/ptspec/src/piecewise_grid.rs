//! Sampled piecewise-smooth functions on `[a, 0] ∪ [0, b]` with first-class
//! one-sided boundary traces, plus the finite-difference and quadrature
//! machinery used throughout the crate.
//!
//! Functions handled by the spectral models are smooth on each side of the
//! origin but may jump (in value and derivative) across it, so every
//! [`PiecewiseFunction`] stores separate uniform sample grids for the two
//! sides together with analytically supplied traces at the junction and the
//! outer endpoints. Finite differences never reach across the junction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::boundary_conditions::{complex_pair, BoundaryTraces};
use crate::error::{Error, Result};

type C = Complex64;

/// Grid and discretization parameters shared by the sampled-function
/// operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Number of subintervals per side; even and at least 64.
    pub grid_n: usize,
    /// Half-width used when a whole-line function must be truncated to a
    /// finite window.
    pub truncation: f64,
    /// Finite-difference accuracy order: 2, 4, or 6.
    pub fd_order: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            grid_n: 2048,
            truncation: 34.0,
            fd_order: 4,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 64 || !self.grid_n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid_n must be even and >= 64, got {}",
                self.grid_n
            )));
        }
        if !self.truncation.is_finite() || self.truncation <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "truncation must be positive, got {}",
                self.truncation
            )));
        }
        if ![2, 4, 6].contains(&self.fd_order) {
            return Err(Error::InvalidParameter(format!(
                "fd_order must be 2, 4, or 6, got {}",
                self.fd_order
            )));
        }
        Ok(())
    }
}

/// Traces at the outer endpoints `x = a` and `x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointTraces {
    #[serde(with = "complex_pair")]
    pub val_a: C,
    #[serde(with = "complex_pair")]
    pub der_a: C,
    #[serde(with = "complex_pair")]
    pub val_b: C,
    #[serde(with = "complex_pair")]
    pub der_b: C,
}

impl EndpointTraces {
    pub fn zero() -> Self {
        Self {
            val_a: C::new(0.0, 0.0),
            der_a: C::new(0.0, 0.0),
            val_b: C::new(0.0, 0.0),
            der_b: C::new(0.0, 0.0),
        }
    }
}

/// A function sampled on uniform grids over `[a, 0]` and `[0, b]` with
/// junction traces at `0±` and endpoint traces at `a`, `b`.
///
/// Each side carries `grid_n + 1` samples including both end nodes, so the
/// junction value appears once per side (the two may differ: the represented
/// functions are allowed to jump at the origin).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunction {
    a: f64,
    b: f64,
    grid_n: usize,
    /// Samples on `[a, 0]`, ascending in `x`.
    pub left: Vec<C>,
    /// Samples on `[0, b]`, ascending in `x`.
    pub right: Vec<C>,
    pub traces: BoundaryTraces,
    pub endpoint: EndpointTraces,
}

fn check_domain(a: f64, b: f64, grid_n: usize) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || !(a < 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "domain must satisfy a < 0 < b, got a = {a}, b = {b}"
        )));
    }
    if grid_n < 8 || !grid_n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "grid_n must be even and >= 8, got {grid_n}"
        )));
    }
    Ok(())
}

impl PiecewiseFunction {
    /// Builds a sampled function from per-side closures for the values and
    /// first derivatives. The derivative closures feed only the junction and
    /// endpoint traces.
    pub fn from_closure(
        a: f64,
        b: f64,
        grid_n: usize,
        f_left: impl Fn(f64) -> C,
        df_left: impl Fn(f64) -> C,
        f_right: impl Fn(f64) -> C,
        df_right: impl Fn(f64) -> C,
    ) -> Result<Self> {
        check_domain(a, b, grid_n)?;
        let n = grid_n;
        let mut left = Vec::with_capacity(n + 1);
        let mut right = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            left.push(f_left(a * (1.0 - t)));
            right.push(f_right(b * t));
        }
        let traces = BoundaryTraces {
            val_minus: f_left(0.0),
            der_minus: df_left(0.0),
            val_plus: f_right(0.0),
            der_plus: df_right(0.0),
        };
        let endpoint = EndpointTraces {
            val_a: f_left(a),
            der_a: df_left(a),
            val_b: f_right(b),
            der_b: df_right(b),
        };
        let f = Self {
            a,
            b,
            grid_n,
            left,
            right,
            traces,
            endpoint,
        };
        f.check_finite()?;
        Ok(f)
    }

    /// Builds a sampled function directly from per-side sample vectors.
    pub fn from_samples(
        a: f64,
        b: f64,
        left: Vec<C>,
        right: Vec<C>,
        traces: BoundaryTraces,
        endpoint: EndpointTraces,
    ) -> Result<Self> {
        if left.len() != right.len() || left.len() < 9 {
            return Err(Error::GridMismatch(format!(
                "sides must have equal length >= 9, got {} and {}",
                left.len(),
                right.len()
            )));
        }
        let grid_n = left.len() - 1;
        check_domain(a, b, grid_n)?;
        let f = Self {
            a,
            b,
            grid_n,
            left,
            right,
            traces,
            endpoint,
        };
        f.check_finite()?;
        Ok(f)
    }

    /// Builds a function that realizes prescribed junction traces exactly and
    /// vanishes identically near both endpoints: on each side the linear jet
    /// fixed by the traces is multiplied by a smooth cutoff equal to 1 on the
    /// quarter of the side adjacent to the origin and 0 on the outer quarter.
    pub fn from_traces_bump(
        traces: &BoundaryTraces,
        a: f64,
        b: f64,
        grid_n: usize,
    ) -> Result<Self> {
        check_domain(a, b, grid_n)?;
        let (vm, dm, vp, dp) = (
            traces.val_minus,
            traces.der_minus,
            traces.val_plus,
            traces.der_plus,
        );
        let fl = move |x: f64| {
            let s = (x - a) / (-a);
            (vm + dm * x) * smooth_step(2.0 * s - 0.5)
        };
        let dfl = move |x: f64| {
            let s = (x - a) / (-a);
            let w = smooth_step(2.0 * s - 0.5);
            let wd = smooth_step_d1(2.0 * s - 0.5) * 2.0 / (-a);
            dm * w + (vm + dm * x) * wd
        };
        let fr = move |x: f64| {
            let s = x / b;
            (vp + dp * x) * smooth_step(1.5 - 2.0 * s)
        };
        let dfr = move |x: f64| {
            let s = x / b;
            let w = smooth_step(1.5 - 2.0 * s);
            let wd = -smooth_step_d1(1.5 - 2.0 * s) * 2.0 / b;
            dp * w + (vp + dp * x) * wd
        };
        let mut f = Self::from_closure(a, b, grid_n, fl, dfl, fr, dfr)?;
        f.traces = *traces;
        Ok(f)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// Grid spacing on the left side.
    pub fn h_left(&self) -> f64 {
        -self.a / self.grid_n as f64
    }
    /// Grid spacing on the right side.
    pub fn h_right(&self) -> f64 {
        self.b / self.grid_n as f64
    }
    /// Abscissa of the `i`-th left node (`i = 0` is `a`, `i = grid_n` is 0).
    pub fn x_left(&self, i: usize) -> f64 {
        self.a * (1.0 - i as f64 / self.grid_n as f64)
    }
    /// Abscissa of the `i`-th right node (`i = 0` is 0, `i = grid_n` is `b`).
    pub fn x_right(&self, i: usize) -> f64 {
        self.b * i as f64 / self.grid_n as f64
    }

    fn check_finite(&self) -> Result<()> {
        let finite = self
            .left
            .iter()
            .chain(self.right.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::NumericalFailure(
                "sampled function contains non-finite values".into(),
            ))
        }
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        if self.grid_n == other.grid_n && close(self.a, other.a) && close(self.b, other.b) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "[{}, {}] with {} vs [{}, {}] with {}",
                self.a, self.b, self.grid_n, other.a, other.b, other.grid_n
            )))
        }
    }

    /// Pointwise scaling by a complex constant (traces included).
    pub fn scaled(&self, c: C) -> Self {
        let mut out = self.clone();
        for z in out.left.iter_mut().chain(out.right.iter_mut()) {
            *z *= c;
        }
        out.traces.val_minus *= c;
        out.traces.der_minus *= c;
        out.traces.val_plus *= c;
        out.traces.der_plus *= c;
        out.endpoint.val_a *= c;
        out.endpoint.der_a *= c;
        out.endpoint.val_b *= c;
        out.endpoint.der_b *= c;
        out
    }

    /// Pointwise sum (traces included). Fails on mismatched grids.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let mut out = self.clone();
        for (z, w) in out.left.iter_mut().zip(other.left.iter()) {
            *z += w;
        }
        for (z, w) in out.right.iter_mut().zip(other.right.iter()) {
            *z += w;
        }
        out.traces.val_minus += other.traces.val_minus;
        out.traces.der_minus += other.traces.der_minus;
        out.traces.val_plus += other.traces.val_plus;
        out.traces.der_plus += other.traces.der_plus;
        out.endpoint.val_a += other.endpoint.val_a;
        out.endpoint.der_a += other.endpoint.der_a;
        out.endpoint.val_b += other.endpoint.val_b;
        out.endpoint.der_b += other.endpoint.der_b;
        Ok(out)
    }

    /// Pointwise difference (traces included). Fails on mismatched grids.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(C::new(-1.0, 0.0)))
    }

    /// `L²` inner product `∫ conj(self) · other` over both sides, by
    /// composite Simpson quadrature.
    pub fn inner(&self, other: &Self) -> Result<C> {
        self.same_grid(other)?;
        let wl = simpson_weights(self.grid_n, self.h_left())?;
        let wr = simpson_weights(self.grid_n, self.h_right())?;
        let mut acc = C::new(0.0, 0.0);
        for i in 0..=self.grid_n {
            acc += wl[i] * self.left[i].conj() * other.left[i];
            acc += wr[i] * self.right[i].conj() * other.right[i];
        }
        Ok(acc)
    }

    /// `L²` norm over both sides.
    pub fn norm(&self) -> f64 {
        self.inner(self)
            .map(|z| z.re.max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    }

    /// Writes the samples as CSV: a `# traces ...` comment, a header
    /// `x,re,im,side`, then all left samples (side `L`) followed by all right
    /// samples (side `R`).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let t = &self.traces;
        writeln!(
            w,
            "# traces val_minus={:.16e},{:.16e} der_minus={:.16e},{:.16e} val_plus={:.16e},{:.16e} der_plus={:.16e},{:.16e}",
            t.val_minus.re, t.val_minus.im, t.der_minus.re, t.der_minus.im,
            t.val_plus.re, t.val_plus.im, t.der_plus.re, t.der_plus.im
        )?;
        writeln!(w, "x,re,im,side")?;
        for i in 0..=self.grid_n {
            let z = self.left[i];
            writeln!(w, "{:.16e},{:.16e},{:.16e},L", self.x_left(i), z.re, z.im)?;
        }
        for i in 0..=self.grid_n {
            let z = self.right[i];
            writeln!(w, "{:.16e},{:.16e},{:.16e},R", self.x_right(i), z.re, z.im)?;
        }
        Ok(())
    }
}

/// Finite-difference weights for the `order`-th derivative at the point `z`
/// from function samples at the nodes `xs` (Fornberg's recursion). Requires
/// `xs.len() > order`; the nodes must be pairwise distinct.
pub fn finite_difference_weights(z: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > order, "need more than {order} nodes, got {n}");
    let m = order;
    let mut c = vec![vec![0.0f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Differentiates uniformly spaced samples to the given derivative order with
/// accuracy order `fd_order`: centered `fd_order + 1`-point stencils in the
/// interior, one-sided `fd_order + 2`-point stencils near the ends. Stencils
/// never reach outside the sample range.
pub fn differentiate_samples(s: &[C], h: f64, deriv: usize, fd_order: usize) -> Result<Vec<C>> {
    let n = s.len();
    let half = fd_order / 2;
    let wide = fd_order + 2;
    if n < wide {
        return Err(Error::GridMismatch(format!(
            "need at least {wide} samples for fd_order {fd_order}, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (start, len) = if i >= half && i + half < n {
            (i - half, fd_order + 1)
        } else if i < half {
            (0, wide)
        } else {
            (n - wide, wide)
        };
        let xs: Vec<f64> = (0..len).map(|j| (start + j) as f64 * h - i as f64 * h).collect();
        let w = finite_difference_weights(0.0, &xs, deriv);
        let mut acc = C::new(0.0, 0.0);
        for (j, wj) in w.iter().enumerate() {
            acc += *wj * s[start + j];
        }
        out.push(acc);
    }
    Ok(out)
}

/// Applies the operator `f ↦ -f''` side by side via finite differences of
/// accuracy order `fd_order`. The output's junction and endpoint derivative
/// traces are themselves finite-difference estimates.
pub fn apply_second_derivative(f: &PiecewiseFunction, fd_order: usize) -> Result<PiecewiseFunction> {
    if ![2, 4, 6].contains(&fd_order) {
        return Err(Error::InvalidParameter(format!(
            "fd_order must be 2, 4, or 6, got {fd_order}"
        )));
    }
    let neg = C::new(-1.0, 0.0);
    let left: Vec<C> = differentiate_samples(&f.left, f.h_left(), 2, fd_order)?
        .into_iter()
        .map(|z| neg * z)
        .collect();
    let right: Vec<C> = differentiate_samples(&f.right, f.h_right(), 2, fd_order)?
        .into_iter()
        .map(|z| neg * z)
        .collect();
    let dleft = differentiate_samples(&left, f.h_left(), 1, fd_order)?;
    let dright = differentiate_samples(&right, f.h_right(), 1, fd_order)?;
    let n = f.grid_n;
    let traces = BoundaryTraces {
        val_minus: left[n],
        der_minus: dleft[n],
        val_plus: right[0],
        der_plus: dright[0],
    };
    let endpoint = EndpointTraces {
        val_a: left[0],
        der_a: dleft[0],
        val_b: right[n],
        der_b: dright[n],
    };
    PiecewiseFunction::from_samples(f.a, f.b, left, right, traces, endpoint)
}

/// Composite Simpson weights for `n + 1` uniformly spaced samples with step
/// `h`; `n` must be even.
pub fn simpson_weights(n: usize, h: f64) -> Result<Vec<f64>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "Simpson rule needs an even interval count >= 2, got {n}"
        )));
    }
    let mut w = vec![0.0; n + 1];
    let c = h / 3.0;
    w[0] = c;
    w[n] = c;
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        *wi = if i % 2 == 1 { 4.0 * c } else { 2.0 * c };
    }
    Ok(w)
}

/// Cumulative integral of uniformly spaced samples with step `h`:
/// `out[i] ≈ ∫` from the first node to node `i`, via three-interval cubic
/// interpolation (exact for polynomials of degree 3, global error `O(h⁴)`).
/// Requires at least 4 samples.
pub fn cumulative_integral(s: &[C], h: f64) -> Result<Vec<C>> {
    let n = s.len();
    if n < 4 {
        return Err(Error::GridMismatch(format!(
            "cumulative integration needs at least 4 samples, got {n}"
        )));
    }
    let c = h / 24.0;
    let mut out = Vec::with_capacity(n);
    out.push(C::new(0.0, 0.0));
    let mut acc = C::new(0.0, 0.0);
    for i in 0..n - 1 {
        let inc = if i == 0 {
            c * (9.0 * s[0] + 19.0 * s[1] - 5.0 * s[2] + s[3])
        } else if i == n - 2 {
            c * (s[n - 4] - 5.0 * s[n - 3] + 19.0 * s[n - 2] + 9.0 * s[n - 1])
        } else {
            c * (-s[i - 1] + 13.0 * s[i] + 13.0 * s[i + 1] - s[i + 2])
        };
        acc += inc;
        out.push(acc);
    }
    Ok(out)
}

/// Smooth monotone step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, infinitely
/// differentiable across the whole line.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let f = (-1.0 / u).exp();
        let g = (-1.0 / (1.0 - u)).exp();
        f / (f + g)
    }
}

/// First derivative of [`smooth_step`].
pub fn smooth_step_d1(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        let f = (-1.0 / u).exp();
        let g = (-1.0 / (1.0 - u)).exp();
        let s = f + g;
        f * g * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u))) / (s * s)
    }
}

/// Standard compactly supported bump `exp(-1/(1-t²))` on `(-1, 1)`, zero
/// outside.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// First derivative of [`bump`].
pub fn bump_d1(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        let u = 1.0 - t * t;
        bump(t) * (-2.0 * t / (u * u))
    }
}

/// Second derivative of [`bump`].
pub fn bump_d2(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        let u = 1.0 - t * t;
        bump(t) * (4.0 * t * t / (u * u * u * u) - 2.0 / (u * u) - 8.0 * t * t / (u * u * u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_stencils_reproduced() {
        let h = 0.1;
        let w = finite_difference_weights(0.0, &[-h, 0.0, h], 2);
        let expect = [1.0, -2.0, 1.0].map(|v| v / (h * h));
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }

        let xs: Vec<f64> = (-2..=2).map(|i| i as f64 * h).collect();
        let w = finite_difference_weights(0.0, &xs, 2);
        let expect = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0]
            .map(|v| v / (h * h));
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }

        let w = finite_difference_weights(0.0, &[-h, 0.0, h], 1);
        let expect = [-0.5 / h, 0.0, 0.5 / h];
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-10 * (1.0 / h));
        }
    }

    fn test_function(a: f64, b: f64, n: usize) -> PiecewiseFunction {
        PiecewiseFunction::from_closure(
            a,
            b,
            n,
            |x| C::new((2.0 * x).sin(), (3.0 * x).cos()),
            |x| C::new(2.0 * (2.0 * x).cos(), -3.0 * (3.0 * x).sin()),
            |x| C::new((2.0 * x).sin(), (3.0 * x).cos()),
            |x| C::new(2.0 * (2.0 * x).cos(), -3.0 * (3.0 * x).sin()),
        )
        .unwrap()
    }

    fn second_derivative_sup_error(n: usize, fd_order: usize) -> f64 {
        let f = test_function(-1.0, 1.0, n);
        let lf = apply_second_derivative(&f, fd_order).unwrap();
        let exact = |x: f64| C::new(4.0 * (2.0 * x).sin(), 9.0 * (3.0 * x).cos());
        let mut err = 0.0f64;
        for i in 0..=n {
            err = err.max((lf.left[i] - exact(f.x_left(i))).norm());
            err = err.max((lf.right[i] - exact(f.x_right(i))).norm());
        }
        err
    }

    #[test]
    fn second_derivative_converges_at_stated_order() {
        for fd_order in [2usize, 4, 6] {
            let e1 = second_derivative_sup_error(64, fd_order);
            let e2 = second_derivative_sup_error(128, fd_order);
            let rate = (e1 / e2).log2();
            assert!(
                rate > fd_order as f64 - 0.8 && rate < fd_order as f64 + 2.0,
                "fd_order {fd_order}: errors {e1:.3e} -> {e2:.3e}, rate {rate:.2}"
            );
        }
    }

    #[test]
    fn simpson_inner_product_converges_at_fourth_order() {
        let exact = (std::f64::consts::E.powi(2) - std::f64::consts::E.powi(-2)) / 2.0;
        let make = |n| {
            PiecewiseFunction::from_closure(
                -1.0,
                1.0,
                n,
                |x| C::new(x.exp(), 0.0),
                |x| C::new(x.exp(), 0.0),
                |x| C::new(x.exp(), 0.0),
                |x| C::new(x.exp(), 0.0),
            )
            .unwrap()
        };
        let f64_ = make(64);
        let f128 = make(128);
        let e1 = (f64_.inner(&f64_).unwrap().re - exact).abs();
        let e2 = (f128.inner(&f128).unwrap().re - exact).abs();
        assert!(e1 < 1e-7);
        let rate = (e1 / e2).log2();
        assert!(rate > 3.4 && rate < 4.6, "rate {rate:.2}");
    }

    #[test]
    fn cumulative_integral_is_exact_on_cubics() {
        let h = 0.25;
        let n = 21;
        let s: Vec<C> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                C::new(x * x * x - 2.0 * x, 0.5 * x * x)
            })
            .collect();
        let cum = cumulative_integral(&s, h).unwrap();
        for (i, c) in cum.iter().enumerate() {
            let x = i as f64 * h;
            let exact = C::new(x * x * x * x / 4.0 - x * x, 0.5 * x * x * x / 3.0);
            assert!((c - exact).norm() < 1e-12 * exact.norm().max(1.0), "node {i}");
        }
    }

    #[test]
    fn cumulative_integral_fourth_order_on_exponential() {
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let s: Vec<C> = (0..=n).map(|i| C::new((i as f64 * h).exp(), 0.0)).collect();
            let cum = cumulative_integral(&s, h).unwrap();
            (cum[n].re - (std::f64::consts::E - 1.0)).abs()
        };
        let e1 = err(64);
        let e2 = err(128);
        let rate = (e1 / e2).log2();
        assert!(rate > 3.4 && rate < 4.6, "rate {rate:.2}");
    }

    #[test]
    fn traces_bump_matches_prescription() {
        let t = BoundaryTraces {
            val_minus: C::new(1.0, -0.5),
            der_minus: C::new(0.3, 0.8),
            val_plus: C::new(-0.7, 0.2),
            der_plus: C::new(1.1, 0.0),
        };
        let f = PiecewiseFunction::from_traces_bump(&t, -1.0, 1.0, 256).unwrap();
        assert_eq!(f.traces, t);
        assert_eq!(f.endpoint.val_a, C::new(0.0, 0.0));
        assert_eq!(f.endpoint.val_b, C::new(0.0, 0.0));
        assert_eq!(f.left[0], C::new(0.0, 0.0));
        assert_eq!(f.right[256], C::new(0.0, 0.0));
        // Junction samples equal the trace values.
        assert!((f.left[256] - t.val_minus).norm() < 1e-15);
        assert!((f.right[0] - t.val_plus).norm() < 1e-15);
        // Smooth enough to differentiate without surprises.
        let lf = apply_second_derivative(&f, 4).unwrap();
        assert!(lf.norm().is_finite());
    }

    #[test]
    fn linear_operations_are_exact() {
        let f = test_function(-1.0, 2.0, 64);
        let g = f.scaled(C::new(0.0, 2.0));
        let h = f.add(&g).unwrap();
        let expect = f.scaled(C::new(1.0, 2.0));
        for i in 0..=64 {
            assert_eq!(h.left[i], expect.left[i]);
            assert_eq!(h.right[i], expect.right[i]);
        }
        let z = h.sub(&expect).unwrap();
        assert!(z.norm() < 1e-14);
        let mismatched = test_function(-1.0, 2.0, 128);
        assert!(f.add(&mismatched).is_err());
    }

    #[test]
    fn csv_layout_is_stable() {
        let f = test_function(-1.0, 1.0, 16);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2 + 2 * 17);
        assert!(lines[0].starts_with("# traces val_minus="));
        assert_eq!(lines[1], "x,re,im,side");
        assert!(lines[2].ends_with(",L"));
        assert!(lines.last().unwrap().ends_with(",R"));
    }

    #[test]
    fn smooth_step_properties() {
        assert_eq!(smooth_step(-0.5), 0.0);
        assert_eq!(smooth_step(1.5), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        assert!((smooth_step(0.2) + smooth_step(0.8) - 1.0).abs() < 1e-14);
        let mut prev = -1.0;
        for i in 0..=40 {
            let v = smooth_step(i as f64 / 40.0);
            assert!(v >= prev);
            prev = v;
        }
        // Derivative consistent with a central difference.
        let h = 1e-6;
        let fd = (smooth_step(0.3 + h) - smooth_step(0.3 - h)) / (2.0 * h);
        assert!((smooth_step_d1(0.3) - fd).abs() < 1e-6);
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let h = 1e-5;
        for t in [0.0, 0.3, -0.6, 0.9] {
            let fd1 = (bump(t + h) - bump(t - h)) / (2.0 * h);
            assert!((bump_d1(t) - fd1).abs() < 1e-6 * bump_d1(t).abs().max(1.0), "t = {t}");
            let fd2 = (bump(t + h) - 2.0 * bump(t) + bump(t - h)) / (h * h);
            assert!((bump_d2(t) - fd2).abs() < 1e-4 * bump_d2(t).abs().max(1.0), "t = {t}");
        }
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump_d2(-1.0), 0.0);
    }

    #[test]
    fn grid_config_validation() {
        assert!(GridConfig::default().validate().is_ok());
        let bad = GridConfig {
            grid_n: 63,
            ..GridConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = GridConfig {
            fd_order: 3,
            ..GridConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = GridConfig {
            truncation: -1.0,
            ..GridConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
