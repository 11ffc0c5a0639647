//! The t-product and its derived operations, computed slice-wise in the
//! Fourier domain, plus a block-circulant reference implementation.

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::{fft_mode3, ifft_mode3, SpectralTensor};
use crate::tensor::Tensor3;

fn check_product_dims(op: &'static str, a: (usize, usize, usize), b: (usize, usize, usize)) -> Result<()> {
    if a.1 != b.0 || a.2 != b.2 {
        return Err(Error::Shape {
            op,
            detail: format!("cannot multiply {}x{}x{} by {}x{}x{}", a.0, a.1, a.2, b.0, b.1, b.2),
        });
    }
    Ok(())
}

/// Slice-wise product of two spectra.
pub fn spectral_product(a: &SpectralTensor, b: &SpectralTensor) -> Result<SpectralTensor> {
    check_product_dims("spectral_product", a.dims(), b.dims())?;
    a.zip_map(b, |_, x, y| Ok(x * y))
}

/// The t-product `X * Y` of an `I1 x I2 x I3` and an `I2 x I4 x I3` tensor.
pub fn tproduct(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    check_product_dims("tproduct", x.dims(), y.dims())?;
    ifft_mode3(&spectral_product(&fft_mode3(x), &fft_mode3(y))?)
}

/// Chained t-product of two or more tensors, evaluated left to right in
/// the Fourier domain without intermediate inverse transforms.
pub fn tproduct_chain(factors: &[&Tensor3]) -> Result<Tensor3> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::Shape {
        op: "tproduct_chain",
        detail: "empty product".into(),
    })?;
    let mut acc = fft_mode3(first);
    for f in rest {
        acc = spectral_product(&acc, &fft_mode3(f))?;
    }
    ifft_mode3(&acc)
}

/// Reference t-product: materializes `circ(X)`, multiplies by `unfold(Y)` and folds.
///
/// Costs `O(I1·I2·I4·I3²)`; meant for cross-checking only.
pub fn tproduct_oracle(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    check_product_dims("tproduct_oracle", x.dims(), y.dims())?;
    let (n1, n2, n3) = x.dims();
    let n4 = y.dims().1;
    let rows = n1 * n3;
    let cols = n2 * n3;
    // Block (r, c) of circ(X) is frontal slice (r - c) mod I3.
    let mut circ = vec![0.0; rows * cols];
    for br in 0..n3 {
        for bc in 0..n3 {
            let k = (br + n3 - bc) % n3;
            for j in 0..n2 {
                for i in 0..n1 {
                    circ[(br * n1 + i) + (bc * n2 + j) * rows] = x.get(i, j, k);
                }
            }
        }
    }
    // unfold(Y) stacks the frontal slices vertically.
    let mut unfold = vec![0.0; cols * n4];
    for k in 0..n3 {
        for l in 0..n4 {
            for j in 0..n2 {
                unfold[(k * n2 + j) + l * cols] = y.get(j, l, k);
            }
        }
    }
    let mut prod = vec![0.0; rows * n4];
    for l in 0..n4 {
        for c in 0..cols {
            let b = unfold[c + l * cols];
            if b == 0.0 {
                continue;
            }
            for r in 0..rows {
                prod[r + l * rows] += circ[r + c * rows] * b;
            }
        }
    }
    Ok(Tensor3::from_fn((n1, n4, n3), |i, l, k| prod[(k * n1 + i) + l * rows]))
}

/// Tensor inverse, computed by inverting every Fourier-domain slice.
///
/// Fails with [`Error::Singular`] naming the first (1-based) spectral slice
/// whose condition number reaches `1/(ε·n)`.
pub fn tinverse(x: &Tensor3) -> Result<Tensor3> {
    let (n1, n2, _) = x.dims();
    if n1 != n2 {
        return Err(Error::Shape { op: "tinverse", detail: format!("frontal slices are {n1}x{n2}, not square") });
    }
    ifft_mode3(&spectral_inverse(&fft_mode3(x))?)
}

/// Slice-wise inverse of a spectrum with square slices.
pub fn spectral_inverse(xh: &SpectralTensor) -> Result<SpectralTensor> {
    let out = xh.map_slices(|k, s| {
        if xh.real_origin() && crate::spectral::is_real_slice(k, xh.dims().2) {
            let re = s.map(|z| z.re);
            linalg::checked_inverse(&re)
                .map(|inv| inv.map(|v| num_complex::Complex64::new(v, 0.0)))
                .map_err(|condition| Error::Singular { slice: k + 1, condition })
        } else {
            linalg::checked_inverse(&s).map_err(|condition| Error::Singular { slice: k + 1, condition })
        }
    });
    match out {
        // map_slices runs in parallel; report the lowest failing slice deterministically.
        Err(Error::Singular { .. }) => Err(first_singular_slice(xh)),
        other => other,
    }
}

fn first_singular_slice(xh: &SpectralTensor) -> Error {
    for k in xh.active_slices() {
        let cond = linalg::condition_number(&xh.slice(k));
        if !(cond < linalg::singularity_threshold(xh.dims().0)) {
            return Error::Singular { slice: k + 1, condition: cond };
        }
    }
    Error::Singular { slice: 0, condition: f64::INFINITY }
}

/// Slice-wise Moore–Penrose pseudoinverse, shape `I2 x I1 x I3`.
pub fn tpinv(x: &Tensor3) -> Result<Tensor3> {
    ifft_mode3(&spectral_pinv(&fft_mode3(x))?)
}

pub fn spectral_pinv(xh: &SpectralTensor) -> Result<SpectralTensor> {
    xh.map_slices(|k, s| {
        if xh.real_origin() && crate::spectral::is_real_slice(k, xh.dims().2) {
            let re = s.map(|z| z.re);
            Ok(linalg::pinv(&re).map(|v| num_complex::Complex64::new(v, 0.0)))
        } else {
            Ok(linalg::pinv(&s))
        }
    })
}
