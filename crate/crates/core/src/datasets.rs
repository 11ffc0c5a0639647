//! Synthetic and test-function tensors, and matrix/tensor reshaping.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{check_dims, Dims, Tensor3};

/// `X(i,j,k) = (iᵖ + jᵖ + kᵖ)^(−1/p)` with 1-based indices.
pub fn gen_synthetic(p: f64, dims: Dims) -> Result<Tensor3> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Range(format!("exponent p must be positive and finite, got {p}")));
    }
    check_dims("gen_synthetic", dims)?;
    let pow = |n: usize| ((n + 1) as f64).powf(p);
    let (pi, pj, pk): (Vec<f64>, Vec<f64>, Vec<f64>) =
        ((0..dims.0).map(pow).collect(), (0..dims.1).map(pow).collect(), (0..dims.2).map(pow).collect());
    Ok(Tensor3::from_fn(dims, |i, j, k| (pi[i] + pj[j] + pk[k]).powf(-1.0 / p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Exponential,
    Rastrigin,
    Booth,
    Matyas,
    Easom,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 5] = [
        FunctionKind::Exponential,
        FunctionKind::Rastrigin,
        FunctionKind::Booth,
        FunctionKind::Matyas,
        FunctionKind::Easom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Exponential => "exponential",
            FunctionKind::Rastrigin => "rastrigin",
            FunctionKind::Booth => "booth",
            FunctionKind::Matyas => "matyas",
            FunctionKind::Easom => "easom",
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Range(format!("unknown function '{s}'")))
    }
}

/// A two-variable test function sampled on a square grid and folded into a
/// third-order tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    pub kind: FunctionKind,
    /// Use `(x+2y−7)² + (2x+y−5)` instead of the standard squared second term.
    pub booth_literal: bool,
    /// Both coordinates range over `[domain.0, domain.1]`, endpoints included.
    pub domain: (f64, f64),
    pub grid: usize,
    pub tensor_shape: Dims,
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind) -> Self {
        Self { kind, booth_literal: false, domain: (0.0, 1000.0), grid: 1000, tensor_shape: (100, 100, 100) }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            FunctionKind::Exponential => -(-0.5 * (x * x + y * y)).exp(),
            FunctionKind::Rastrigin => 20.0 + x * x + y * y - 10.0 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos()),
            FunctionKind::Booth => {
                let second = 2.0 * x + y - 5.0;
                (x + 2.0 * y - 7.0).powi(2) + if self.booth_literal { second } else { second * second }
            }
            FunctionKind::Matyas => 0.26 * (x * x + y * y) - 0.48 * x * y,
            FunctionKind::Easom => -x.cos() * y.cos() * (-((x - PI).powi(2) + (y - PI).powi(2))).exp(),
        }
    }

    /// Grid coordinate `a` (0-based).
    pub fn coordinate(&self, a: usize) -> f64 {
        let (lo, hi) = self.domain;
        if self.grid == 1 {
            return lo;
        }
        lo + a as f64 * (hi - lo) / (self.grid - 1) as f64
    }

    /// `grid x grid` samples, row index ↔ x, column index ↔ y.
    pub fn matrix(&self) -> DMatrix<f64> {
        let xs: Vec<f64> = (0..self.grid).map(|a| self.coordinate(a)).collect();
        DMatrix::from_fn(self.grid, self.grid, |a, b| self.eval(xs[a], xs[b]))
    }
}

pub fn gen_function_tensor(spec: &FunctionSpec) -> Result<Tensor3> {
    if spec.grid == 0 {
        return Err(Error::Range("grid must have at least one point".into()));
    }
    let x = reshape_mat_to_tensor(&spec.matrix(), spec.tensor_shape)?;
    x.check_finite()?;
    Ok(x)
}

/// Column-major relabeling of a matrix as a tensor.
pub fn reshape_mat_to_tensor(m: &DMatrix<f64>, dims: Dims) -> Result<Tensor3> {
    check_dims("reshape_mat_to_tensor", dims)?;
    if m.len() != dims.0 * dims.1 * dims.2 {
        return Err(Error::Shape {
            op: "reshape_mat_to_tensor",
            detail: format!("{}x{} matrix has {} entries, {:?} needs {}", m.nrows(), m.ncols(), m.len(), dims, dims.0 * dims.1 * dims.2),
        });
    }
    Tensor3::new(dims, m.as_slice().to_vec())
}

/// Inverse of [`reshape_mat_to_tensor`].
pub fn reshape_tensor_to_mat(x: &Tensor3, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    if rows * cols != x.len() {
        return Err(Error::Shape {
            op: "reshape_tensor_to_mat",
            detail: format!("{:?} tensor has {} entries, {rows}x{cols} needs {}", x.dims(), x.len(), rows * cols),
        });
    }
    Ok(DMatrix::from_column_slice(rows, cols, x.data()))
}
