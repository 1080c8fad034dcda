//! The kernel `M(t,s) = sqrt(G(t,s) G(1,1)) - sqrt(G(t,1) G(s,1))` and its
//! companions `M0 = G(t,s)G(1,1) - G(t,1)G(1,s)` and
//! `M1 = sqrt(G(t,s) G(1,1)) + sqrt(G(t,1) G(s,1))`, so that `M = M0 / M1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::greenfn::{GreenFunction, Order, Partial, UnitSquarePoint};
use crate::ratios::{sweep_inequalities, InequalitySweep};
use crate::scalar::{RealScalar, Scalar};
use crate::search::golden_section_max;
use crate::{Error, Point, Result};

/// Negative square-root arguments above this are treated as roundoff.
pub const SQRT_CLAMP: f64 = 1e-15;

fn sqrt_clamped<T: RealScalar>(x: T) -> Result<T> {
    if x >= T::zero() {
        Ok(x.sqrt())
    } else if x.as_f64() > -SQRT_CLAMP {
        Ok(T::zero())
    } else {
        Err(Error::Numeric(format!("square root of negative value {:?}", x)))
    }
}

/// Evaluator for `M` and its relatives in a floating scalar type.
#[derive(Debug, Clone)]
pub struct Kernel<T> {
    green: GreenFunction<T>,
}

impl<T: RealScalar> Kernel<T> {
    pub fn new(order: Order) -> Self {
        Self { green: GreenFunction::new(order) }
    }

    pub fn order(&self) -> Order {
        self.green.order()
    }

    pub fn green(&self) -> &GreenFunction<T> {
        &self.green
    }

    /// `M(t, s)`.
    pub fn value(&self, p: &UnitSquarePoint<T>) -> Result<T> {
        self.value_raw(*p.t(), *p.s())
    }

    pub(crate) fn value_raw(&self, t: T, s: T) -> Result<T> {
        let (a, b) = self.radicands(t, s);
        Ok(sqrt_clamped(a)? - sqrt_clamped(b)?)
    }

    /// `(G(t,s) G(1,1), G(t,1) G(s,1))`
    fn radicands(&self, t: T, s: T) -> (T, T) {
        let g = &self.green;
        let one = T::one();
        (g.eval_raw(&t, &s) * *g.at_one_one(), g.eval_raw(&t, &one) * g.eval_raw(&s, &one))
    }

    /// `M1(t, s)`, strictly positive inside the square.
    pub fn m1(&self, p: &UnitSquarePoint<T>) -> Result<T> {
        require_interior(p)?;
        let (a, b) = self.radicands(*p.t(), *p.s());
        Ok(sqrt_clamped(a)? + sqrt_clamped(b)?)
    }

    /// `M(t, t) = sqrt(G(t,t) G(1,1)) - G(t,1)`.
    pub fn diagonal(&self, t: T) -> Result<T> {
        self.value_raw(t, t)
    }

    /// `(∂M/∂t, ∂M/∂s)` from
    ///
    /// ```text
    /// ∂M/∂s = ½ G'_s(t,s)/G(t,s) · sqrt(G(t,s)G(1,1)) - ½ G'_s(1,s)/G(1,s) · sqrt(G(1,s)G(t,1))
    /// ∂M/∂t = ½ G'_t(t,s)/G(t,s) · sqrt(G(t,s)G(1,1)) - ½ G'_t(t,1)/G(t,1) · sqrt(G(1,s)G(t,1))
    /// ```
    pub fn gradient(&self, p: &UnitSquarePoint<T>) -> Result<(T, T)> {
        require_interior(p)?;
        let (t, s) = (*p.t(), *p.s());
        let g = &self.green;
        let one = T::one();
        let half = T::from_ratio(1, 2);
        let gts = g.eval_raw(&t, &s);
        let g1s = g.eval_raw(&one, &s);
        let gt1 = g.eval_raw(&t, &one);
        let direct = sqrt_clamped(gts * *g.at_one_one())?;
        let cross = sqrt_clamped(g1s * gt1)?;
        let dt = g.partial(p, Partial::T)?;
        let ds = g.partial(p, Partial::S)?;
        let dt_edge = g.partial_t_raw(&t, &one);
        let ds_edge = g.partial_t_raw(&s, &one);
        let d_dt = half * (dt / gts * direct - dt_edge / gt1 * cross);
        let d_ds = half * (ds / gts * direct - ds_edge / g1s * cross);
        Ok((d_dt, d_ds))
    }
}

fn require_interior<T: Scalar>(p: &UnitSquarePoint<T>) -> Result<()> {
    if !p.is_interior() {
        return Err(Error::Domain(format!(
            "point ({:?}, {:?}) is not inside the open unit square",
            p.t(),
            p.s()
        )));
    }
    Ok(())
}

/// `M(t, s)`.
pub fn m_kernel<T: RealScalar>(order: Order, p: &UnitSquarePoint<T>) -> Result<T> {
    Kernel::new(order).value(p)
}

/// Explicit form of `M` for `m = 0`: `√t (1 - √s)` for `t <= s`, mirrored
/// otherwise.
pub fn m_kernel_m0_closed<T: RealScalar>(p: &UnitSquarePoint<T>) -> T {
    let (lo, hi) = if p.t() <= p.s() { (*p.t(), *p.s()) } else { (*p.s(), *p.t()) };
    lo.sqrt() * (T::one() - hi.sqrt())
}

/// `M0(t,s) = G(t,s) G(1,1) - G(t,1) G(1,s)`; works in exact arithmetic.
pub fn m0_determinant<T: Scalar>(order: Order, p: &UnitSquarePoint<T>) -> Result<T> {
    require_interior(p)?;
    let g = GreenFunction::<T>::new(order);
    Ok(m0_with(&g, p.t(), p.s()))
}

fn m0_with<T: Scalar>(g: &GreenFunction<T>, t: &T, s: &T) -> T {
    let one = T::one();
    g.eval_raw(t, s) * g.at_one_one().clone() - g.eval_raw(t, &one) * g.eval_raw(&one, s)
}

pub fn m1_denominator<T: RealScalar>(order: Order, p: &UnitSquarePoint<T>) -> Result<T> {
    Kernel::new(order).m1(p)
}

/// `G(t1,s1) G(t2,s2) - G(t1,s2) G(t2,s1)` for `0 < t1 < t2 <= 1`,
/// `0 < s1 < s2 <= 1`.
pub fn minor2x2<T: Scalar>(order: Order, t1: &T, t2: &T, s1: &T, s2: &T) -> Result<T> {
    let ordered = |a: &T, b: &T| *a > T::zero() && a < b && *b <= T::one();
    if !ordered(t1, t2) || !ordered(s1, s2) {
        return Err(Error::Ordering(format!(
            "minor needs 0 < t1 < t2 <= 1 and 0 < s1 < s2 <= 1, got t = ({:?}, {:?}), s = ({:?}, {:?})",
            t1, t2, s1, s2
        )));
    }
    let g = GreenFunction::<T>::new(order);
    Ok(g.eval_raw(t1, s1) * g.eval_raw(t2, s2) - g.eval_raw(t1, s2) * g.eval_raw(t2, s1))
}

pub fn m_gradient<T: RealScalar>(order: Order, p: &UnitSquarePoint<T>) -> Result<(T, T)> {
    Kernel::new(order).gradient(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalMax {
    pub t0: f64,
    pub value: f64,
}

/// Maximizes `t ↦ M(t,t)` on `(0, 1)` by golden-section search.
///
/// The search assumes a single interior peak; [`verify_diagonal_dominance`]
/// and grid scans guard that assumption.
pub fn find_diagonal_max(order: Order, tol: f64) -> Result<DiagonalMax> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let kernel = Kernel::<f64>::new(order);
    let mut failure = None;
    let best = golden_section_max(
        |t| match kernel.diagonal(t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        0.0,
        1.0,
        tol,
        500,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(DiagonalMax { t0: best.x, value: best.value })
}

/// Result of a grid sweep of `M`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub order: Order,
    pub grid_n: usize,
    pub tolerance: f64,
    /// Largest grid value; ties go to the lexicographically smallest `(t, s)`.
    pub max_value: f64,
    pub max_point: Point,
    pub diagonal_max_value: f64,
    pub diagonal_max_point: Point,
    pub off_diagonal_max_value: f64,
    /// `off_diagonal_max_value - diagonal_max_value`.
    pub off_diagonal_margin: f64,
    /// The margin divided by the diagonal maximum.
    pub relative_margin: f64,
    /// Off-diagonal points exceeding the diagonal maximum by more than the
    /// tolerance.
    pub violations: Vec<Point>,
    /// Check of the stationarity inequalities on the same grid (m >= 1).
    pub inequalities: Option<InequalitySweep>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.inequalities.as_ref().is_none_or(InequalitySweep::passed)
    }
}

/// Values of `M` on the uniform grid `i/(grid_n-1)`, row-major in `t`.
pub fn kernel_grid(order: Order, grid_n: usize) -> Result<Vec<(f64, f64, f64)>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 2, got {grid_n}")));
    }
    let kernel = Kernel::<f64>::new(order);
    let h = (grid_n - 1) as f64;
    let rows: Result<Vec<Vec<(f64, f64, f64)>>> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / h;
            (0..grid_n)
                .map(|j| {
                    let s = j as f64 / h;
                    Ok((t, s, kernel.value_raw(t, s)?))
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Evaluates `M` on a `grid_n × grid_n` grid and checks that no off-diagonal
/// value exceeds the diagonal maximum by more than `tol`. For `m >= 1` the
/// stationarity inequalities are also checked on the grid pairs.
pub fn verify_diagonal_dominance(order: Order, grid_n: usize, tol: f64) -> Result<KernelReport> {
    if grid_n < 3 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 3, got {grid_n}")));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be non-negative, got {tol}")));
    }
    let grid = kernel_grid(order, grid_n)?;
    let point = |t: f64, s: f64| UnitSquarePoint::new_unchecked(t, s);

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut diag = (f64::NEG_INFINITY, 0.0);
    let mut off = f64::NEG_INFINITY;
    for (idx, &(t, s, v)) in grid.iter().enumerate() {
        if v > best.0 {
            best = (v, t, s);
        }
        if idx / grid_n == idx % grid_n {
            if v > diag.0 {
                diag = (v, t);
            }
        } else if v > off {
            off = v;
        }
    }
    let violations = grid
        .iter()
        .enumerate()
        .filter(|(idx, &(_, _, v))| idx / grid_n != idx % grid_n && v > diag.0 + tol)
        .map(|(_, &(t, s, _))| point(t, s))
        .collect();
    let margin = off - diag.0;
    let inequalities = if order.m() >= 1 { Some(sweep_inequalities(order, grid_n)?) } else { None };
    Ok(KernelReport {
        order,
        grid_n,
        tolerance: tol,
        max_value: best.0,
        max_point: point(best.1, best.2),
        diagonal_max_value: diag.0,
        diagonal_max_point: point(diag.1, diag.1),
        off_diagonal_max_value: off,
        off_diagonal_margin: margin,
        relative_margin: if diag.0 > 0.0 { margin / diag.0 } else { margin },
        violations,
        inequalities,
    })
}
