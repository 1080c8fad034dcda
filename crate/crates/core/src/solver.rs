//! Solving the focal problem through its Green operator
//! `x(t) = ∫₀¹ G(t,s) f(s) ds`, with endpoint residual checks.

use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::greenfn::{GreenFunction, Order};
use crate::{Error, Result};

/// Right-hand side `f` of the equation.
#[derive(Clone)]
pub enum RightHandSide {
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Table of samples, linearly interpolated and held constant beyond the
    /// first and last node.
    Sampled { nodes: Vec<f64>, values: Vec<f64> },
}

impl fmt::Debug for RightHandSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Function(_) => f.write_str("RightHandSide::Function(..)"),
            Self::Sampled { nodes, .. } => write!(f, "RightHandSide::Sampled({} nodes)", nodes.len()),
        }
    }
}

impl RightHandSide {
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| c)
    }

    pub fn sampled(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::LengthMismatch { left: nodes.len(), right: values.len() });
        }
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("a sampled right-hand side needs at least 2 nodes".into()));
        }
        if nodes.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::InvalidArgument("sample nodes must be strictly increasing".into()));
        }
        if nodes.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("sample table contains non-finite entries".into()));
        }
        Ok(Self::Sampled { nodes, values })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Function(f) => f(t),
            Self::Sampled { nodes, values } => {
                let last = nodes.len() - 1;
                if t <= nodes[0] {
                    return values[0];
                }
                if t >= nodes[last] {
                    return values[last];
                }
                let hi = nodes.partition_point(|&x| x <= t).min(last);
                let lo = hi - 1;
                let w = (t - nodes[lo]) / (nodes[hi] - nodes[lo]);
                values[lo] + w * (values[hi] - values[lo])
            }
        }
    }
}

/// Solution values on a grid of `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionGrid {
    pub order: Order,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

/// Evaluates `x(t_i) = ∫₀¹ G(t_i, s) f(s) ds` on `nodes` uniform points.
///
/// The integral is split at `s = t_i`, where `G` loses smoothness, and each
/// half uses a `quad_nodes`-point Gauss–Legendre rule.
pub fn solve_bvp(order: Order, f: &RightHandSide, nodes: usize, quad_nodes: usize) -> Result<SolutionGrid> {
    if nodes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 solution nodes, got {nodes}")));
    }
    if quad_nodes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 quadrature nodes, got {quad_nodes}")));
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(quad_nodes).expect("quad_nodes >= 2"));
    let green = GreenFunction::<f64>::new(order);
    let h = (nodes - 1) as f64;
    let grid: Vec<f64> = (0..nodes).map(|i| i as f64 / h).collect();
    let values = grid
        .par_iter()
        .enumerate()
        .map(|(node, &t)| {
            let integrand = |s: f64| green.eval_raw(&t, &s) * f.eval(s);
            let mut x = 0.0;
            if t > 0.0 {
                x += rule.integrate(0.0, t, integrand);
            }
            if t < 1.0 {
                x += rule.integrate(t, 1.0, integrand);
            }
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Quadrature { node, t, reason: format!("integral evaluated to {x}") })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SolutionGrid { order, nodes: grid, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Left,
    Right,
}

/// A numerically differentiated boundary condition.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryResidual {
    pub endpoint: Endpoint,
    pub derivative: u32,
    pub value: f64,
    pub tolerance: f64,
}

impl BoundaryResidual {
    pub fn passed(&self) -> bool {
        self.value.abs() <= self.tolerance
    }
}

/// Extra stencil points beyond the derivative order; one-sided stencils of
/// `d + EXTRA_POINTS` nodes are accurate to `O(h^EXTRA_POINTS)`.
const EXTRA_POINTS: usize = 4;

/// Residuals of `x^(i)(0)` for `i < k` and `x^(j)(1)` for `k <= j < n`,
/// from one-sided finite differences.
///
/// Each residual carries the tolerance `h² · max(1, max|x|)`: the stencils
/// are fourth-order, so the tolerance leaves room for the truncation error
/// of smooth solutions plus roundoff amplified by `h^-d`.
pub fn boundary_residuals(sol: &SolutionGrid) -> Result<Vec<BoundaryResidual>> {
    let order = sol.order;
    let n = order.n() as usize;
    let k = order.k() as usize;
    let needed = n - 1 + EXTRA_POINTS;
    if sol.nodes.len() < needed {
        return Err(Error::InsufficientGrid { needed, got: sol.nodes.len() });
    }
    if sol.nodes.len() != sol.values.len() {
        return Err(Error::LengthMismatch { left: sol.nodes.len(), right: sol.values.len() });
    }
    let h = sol.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let scale = sol.values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let tolerance = h * h * scale;
    let last = sol.nodes.len() - 1;
    let mut out = Vec::with_capacity(n);
    for d in 0..n {
        let width = d + EXTRA_POINTS;
        let (endpoint, range) = if d < k {
            (Endpoint::Left, 0..width)
        } else {
            (Endpoint::Right, last + 1 - width..last + 1)
        };
        let z = if d < k { sol.nodes[0] } else { sol.nodes[last] };
        let weights = fd_weights(z, &sol.nodes[range.clone()], d);
        let value = weights.iter().zip(&sol.values[range]).map(|(w, v)| w * v).sum();
        out.push(BoundaryResidual { endpoint, derivative: d as u32, value, tolerance });
    }
    Ok(out)
}

/// Fornberg's finite-difference weights for the `deriv`-th derivative at `z`
/// on the (arbitrary) nodes `x`.
pub fn fd_weights(z: f64, x: &[f64], deriv: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; deriv + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for kk in (1..=mn).rev() {
                    c[i][kk] = c1 * (kk as f64 * c[i - 1][kk - 1] - c5 * c[i - 1][kk]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for kk in (1..=mn).rev() {
                c[j][kk] = (c4 * c[j][kk] - kk as f64 * c[j][kk - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}
