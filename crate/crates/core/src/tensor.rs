//! Dense real third-order tensors.
//!
//! Storage is column-major: entry `(i, j, k)` lives at `i + j*I1 + k*I1*I2`,
//! so every frontal slice is a contiguous column-major `I1 x I2` block.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::index::IndexSet;

/// Shape `(I1, I2, I3)` of a third-order tensor.
pub type Dims = (usize, usize, usize);

#[derive(Clone, PartialEq)]
pub struct Tensor3 {
    dims: Dims,
    data: Vec<f64>,
}

impl Tensor3 {
    /// Wraps column-major data. All dimensions must be positive.
    pub fn new(dims: Dims, data: Vec<f64>) -> Result<Self> {
        check_dims("Tensor3::new", dims)?;
        let len = dims.0 * dims.1 * dims.2;
        if data.len() != len {
            return Err(Error::Shape {
                op: "Tensor3::new",
                detail: format!("{}x{}x{} needs {} values, got {}", dims.0, dims.1, dims.2, len, data.len()),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Dims) -> Self {
        assert!(dims.0 > 0 && dims.1 > 0 && dims.2 > 0, "tensor dimensions must be positive");
        Self { dims, data: vec![0.0; dims.0 * dims.1 * dims.2] }
    }

    /// Builds a tensor from a function of 0-based `(i, j, k)`.
    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(dims);
        for k in 0..dims.2 {
            for j in 0..dims.1 {
                for i in 0..dims.0 {
                    let idx = t.offset(i, j, k);
                    t.data[idx] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Entries drawn uniformly from `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> Self {
        let n = dims.0 * dims.1 * dims.2;
        let data = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self::new(dims, data).expect("dimensions checked by caller")
    }

    /// Builds a tensor whose frontal slices are the given matrices.
    pub fn from_frontal_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices.first().ok_or_else(|| Error::Shape {
            op: "from_frontal_slices",
            detail: "no slices".into(),
        })?;
        let (rows, cols) = first.shape();
        let mut data = Vec::with_capacity(rows * cols * slices.len());
        for s in slices {
            if s.shape() != (rows, cols) {
                return Err(Error::Shape {
                    op: "from_frontal_slices",
                    detail: format!("slice of shape {:?} among {:?}", s.shape(), (rows, cols)),
                });
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::new((rows, cols, slices.len()), data)
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        i + j * self.dims.0 + k * self.dims.0 * self.dims.1
    }

    /// Entry at 0-based `(i, j, k)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.offset(i, j, k);
        self.data[idx] = v;
    }

    /// Frontal slice `k` (0-based) as a matrix.
    pub fn frontal(&self, k: usize) -> DMatrix<f64> {
        let n = self.dims.0 * self.dims.1;
        DMatrix::from_column_slice(self.dims.0, self.dims.1, &self.data[k * n..(k + 1) * n])
    }

    /// Tube `x(i, j, :)`.
    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dims.2).map(|k| self.get(i, j, k)).collect()
    }

    /// Returns the first linear index holding a NaN or infinity, if any.
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(p) => Err(Error::NonFinite(p)),
            None => Ok(()),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        if self.dims != other.dims {
            return Err(Error::Shape {
                op: "sub",
                detail: format!("{:?} vs {:?}", self.dims, other.dims),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Tensor3 { dims: self.dims, data })
    }

    pub fn scale(&self, alpha: f64) -> Tensor3 {
        Tensor3 { dims: self.dims, data: self.data.iter().map(|v| alpha * v).collect() }
    }

    /// `‖self - other‖_F / ‖other‖_F`, or the absolute difference when `other` is zero.
    pub fn rel_diff(&self, other: &Tensor3) -> Result<f64> {
        let num = self.sub(other)?.fro_norm();
        let den = other.fro_norm();
        Ok(if den > 0.0 { num / den } else { num })
    }

    /// The tensor transpose: every frontal slice transposed, slices 2..I3
    /// taken in reverse order.
    pub fn transpose(&self) -> Tensor3 {
        let (n1, n2, n3) = self.dims;
        Tensor3::from_fn((n2, n1, n3), |j, i, k| {
            let src = if k == 0 { 0 } else { n3 - k };
            self.get(i, j, src)
        })
    }

    /// `x(:, 0..count, :)`, the leading lateral slices.
    pub fn leading_lateral(&self, count: usize) -> Result<Tensor3> {
        if count == 0 || count > self.dims.1 {
            return Err(Error::Range(format!(
                "cannot take {count} leading lateral slices of {:?}",
                self.dims
            )));
        }
        Ok(Tensor3::from_fn((self.dims.0, count, self.dims.2), |i, j, k| self.get(i, j, k)))
    }

    /// Horizontal slice sampling `X(s, :, :)`.
    pub fn horizontal(&self, s: &IndexSet) -> Result<Tensor3> {
        s.check_within(self.dims.0, "horizontal slice")?;
        let idx = s.zero_based();
        Ok(Tensor3::from_fn((idx.len(), self.dims.1, self.dims.2), |a, j, k| self.get(idx[a], j, k)))
    }

    /// Lateral slice sampling `X(:, q, :)`.
    pub fn lateral(&self, q: &IndexSet) -> Result<Tensor3> {
        q.check_within(self.dims.1, "lateral slice")?;
        let idx = q.zero_based();
        let (n1, _, n3) = self.dims;
        let mut out = Tensor3::zeros((n1, idx.len(), n3));
        for k in 0..n3 {
            for (b, &j) in idx.iter().enumerate() {
                let src = self.offset(0, j, k);
                let dst = out.offset(0, b, k);
                out.data[dst..dst + n1].copy_from_slice(&self.data[src..src + n1]);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n1, n2, n3) = self.dims;
        write!(f, "Tensor3({n1}x{n2}x{n3})")?;
        if self.data.len() <= 64 {
            for k in 0..n3 {
                write!(f, "\n  [:, :, {k}] = {:?}", self.frontal(k).as_slice())?;
            }
        }
        Ok(())
    }
}

/// The identity tensor: first frontal slice is `I_n`, all others are zero.
pub fn identity_tensor(n: usize, n3: usize) -> Tensor3 {
    Tensor3::from_fn((n, n, n3), |i, j, k| if k == 0 && i == j { 1.0 } else { 0.0 })
}

/// Selection tensor `I(:, s, :)` of shape `n x |s| x n3`.
pub fn selection_tensor(n: usize, s: &IndexSet, n3: usize) -> Result<Tensor3> {
    identity_tensor(n, n3).lateral(s)
}

/// Horizontal slice sampling `X(s, :, :)`.
pub fn slice_horizontal(x: &Tensor3, s: &IndexSet) -> Result<Tensor3> {
    x.horizontal(s)
}

/// Lateral slice sampling `X(:, q, :)`.
pub fn slice_lateral(x: &Tensor3, q: &IndexSet) -> Result<Tensor3> {
    x.lateral(q)
}

/// Tensor transpose.
pub fn ttranspose(x: &Tensor3) -> Tensor3 {
    x.transpose()
}

/// Frobenius norm.
pub fn fro_norm(x: &Tensor3) -> f64 {
    x.fro_norm()
}

pub(crate) fn check_dims(op: &'static str, dims: Dims) -> Result<()> {
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return Err(Error::Shape { op, detail: format!("dimensions must be positive, got {dims:?}") });
    }
    Ok(())
}
