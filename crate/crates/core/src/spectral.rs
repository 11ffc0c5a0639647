//! Mode-3 discrete Fourier transform and slice-wise work in the Fourier domain.
//!
//! The forward transform is unnormalized and the inverse carries the `1/I3`
//! factor, so `‖X‖²_F = (1/I3) Σ_k ‖X̂_k‖²_F`.
//!
//! For tensors of real origin only the first `⌈(I3+1)/2⌉` spectral slices are
//! computed; the rest are filled in as `X̂_k = conj(X̂_{I3-k})` (0-based).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tensor::{Dims, Tensor3};

/// Relative imaginary residue above which an inverse transform is rejected.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

pub type CMatrix = DMatrix<Complex64>;

/// Number of leading spectral slices that determine a real-origin spectrum.
#[inline]
pub fn half_len(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Whether spectral slice `k` (0-based) of a real tensor is itself real.
#[inline]
pub fn is_real_slice(k: usize, n3: usize) -> bool {
    k == 0 || (n3.is_multiple_of(2) && k == n3 / 2)
}

/// Stack of complex frontal slices, the mode-3 DFT of a tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTensor {
    dims: Dims,
    data: Vec<Complex64>,
    real_origin: bool,
}

impl SpectralTensor {
    pub fn new(dims: Dims, data: Vec<Complex64>, real_origin: bool) -> Result<Self> {
        crate::tensor::check_dims("SpectralTensor::new", dims)?;
        if data.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::Shape {
                op: "SpectralTensor::new",
                detail: format!("{dims:?} needs {} values, got {}", dims.0 * dims.1 * dims.2, data.len()),
            });
        }
        Ok(Self { dims, data, real_origin })
    }

    /// Assembles a spectrum from its frontal slices. With `real_origin`, only
    /// the first `half_len(n3)` slices are read and the rest are mirrored.
    pub fn from_slices(slices: Vec<CMatrix>, n3: usize, real_origin: bool) -> Result<Self> {
        let needed = if real_origin { half_len(n3) } else { n3 };
        if slices.len() < needed {
            return Err(Error::Shape {
                op: "SpectralTensor::from_slices",
                detail: format!("need {needed} slices for I3={n3}, got {}", slices.len()),
            });
        }
        let (rows, cols) = slices[0].shape();
        let per = rows * cols;
        let mut data = vec![Complex64::new(0.0, 0.0); per * n3];
        for (k, s) in slices.iter().take(needed).enumerate() {
            if s.shape() != (rows, cols) {
                return Err(Error::Shape {
                    op: "SpectralTensor::from_slices",
                    detail: format!("slice {k} has shape {:?}, expected {:?}", s.shape(), (rows, cols)),
                });
            }
            data[k * per..(k + 1) * per].copy_from_slice(s.as_slice());
        }
        if real_origin {
            for k in needed..n3 {
                let (head, tail) = data.split_at_mut(k * per);
                let src = &head[(n3 - k) * per..(n3 - k + 1) * per];
                for (d, s) in tail[..per].iter_mut().zip(src) {
                    *d = s.conj();
                }
            }
        }
        Self::new((rows, cols, n3), data, real_origin)
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn real_origin(&self) -> bool {
        self.real_origin
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Frontal slice `k` (0-based).
    pub fn slice(&self, k: usize) -> CMatrix {
        let per = self.dims.0 * self.dims.1;
        CMatrix::from_column_slice(self.dims.0, self.dims.1, &self.data[k * per..(k + 1) * per])
    }

    /// Indices of the slices that must actually be computed.
    pub fn active_slices(&self) -> std::ops::Range<usize> {
        if self.real_origin {
            0..half_len(self.dims.2)
        } else {
            0..self.dims.2
        }
    }

    /// Applies `f` to every independent slice and reassembles the spectrum.
    pub fn map_slices<F>(&self, f: F) -> Result<SpectralTensor>
    where
        F: Fn(usize, CMatrix) -> Result<CMatrix> + Sync,
    {
        let out: Vec<CMatrix> = self
            .active_slices()
            .into_par_iter()
            .map(|k| f(k, self.slice(k)))
            .collect::<Result<_>>()?;
        SpectralTensor::from_slices(out, self.dims.2, self.real_origin)
    }

    /// Slice-wise binary operation. The conjugate-symmetry shortcut is used
    /// only when both operands are of real origin.
    pub fn zip_map<F>(&self, other: &SpectralTensor, f: F) -> Result<SpectralTensor>
    where
        F: Fn(usize, CMatrix, CMatrix) -> Result<CMatrix> + Sync,
    {
        if self.dims.2 != other.dims.2 {
            return Err(Error::Shape {
                op: "zip_map",
                detail: format!("third modes differ: {} vs {}", self.dims.2, other.dims.2),
            });
        }
        let real = self.real_origin && other.real_origin;
        let count = if real { half_len(self.dims.2) } else { self.dims.2 };
        let out: Vec<CMatrix> = (0..count)
            .into_par_iter()
            .map(|k| f(k, self.slice(k), other.slice(k)))
            .collect::<Result<_>>()?;
        SpectralTensor::from_slices(out, self.dims.2, real)
    }

    /// Sum of squared Frobenius norms of all slices, divided by `I3`.
    pub fn fourier_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.dims.2 as f64
    }

    /// Checks the conjugate symmetry a real-origin spectrum must have.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let n3 = self.dims.2;
        let scale = self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let per = self.dims.0 * self.dims.1;
        for k in 0..n3 {
            let mirror = (n3 - k) % n3;
            for e in 0..per {
                let a = self.data[k * per + e];
                let b = self.data[mirror * per + e].conj();
                if (a - b).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }
}

fn transform_tubes(dims: Dims, data: &mut [Complex64], inverse: bool) {
    let (n1, n2, n3) = dims;
    if n3 == 1 {
        return;
    }
    let tubes = n1 * n2;
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(n3) } else { planner.plan_fft_forward(n3) };
    // Gather tubes contiguously so a single batched call transforms them all.
    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    for k in 0..n3 {
        for t in 0..tubes {
            buf[t * n3 + k] = data[k * tubes + t];
        }
    }
    fft.process(&mut buf);
    for k in 0..n3 {
        for t in 0..tubes {
            data[k * tubes + t] = buf[t * n3 + k];
        }
    }
}

/// Unnormalized forward DFT of every tube `x(i, j, :)`.
pub fn fft_mode3(x: &Tensor3) -> SpectralTensor {
    let mut data: Vec<Complex64> = x.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_tubes(x.dims(), &mut data, false);
    SpectralTensor { dims: x.dims(), data, real_origin: true }
}

/// Inverse DFT (scaled by `1/I3`) of every tube, returned as a real tensor.
///
/// Fails when the imaginary part of the result exceeds [`IMAG_RESIDUE_TOL`]
/// relative to the whole result, which signals broken conjugate symmetry.
pub fn ifft_mode3(xh: &SpectralTensor) -> Result<Tensor3> {
    let mut data = xh.data.clone();
    transform_tubes(xh.dims, &mut data, true);
    let scale = 1.0 / xh.dims.2 as f64;
    let total = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() * scale;
    let imag = data.iter().map(|z| z.im * z.im).sum::<f64>().sqrt() * scale;
    if total > 0.0 && imag > IMAG_RESIDUE_TOL * total {
        return Err(Error::ImaginaryResidue { residue: imag / total });
    }
    Tensor3::new(xh.dims, data.iter().map(|z| z.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn naive_dft(v: &[f64]) -> Vec<Complex64> {
        let n = v.len();
        (0..n)
            .map(|f| {
                v.iter()
                    .enumerate()
                    .map(|(t, &x)| x * Complex64::from_polar(1.0, -2.0 * PI * (f * t) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn length_one_dft_is_identity() {
        let x = Tensor3::new((1, 1, 1), vec![5.0]).unwrap();
        let xh = fft_mode3(&x);
        assert_eq!(xh.slice(0)[(0, 0)], Complex64::new(5.0, 0.0));
    }

    #[test]
    fn constant_tube() {
        let x = Tensor3::new((1, 1, 2), vec![1.0, 1.0]).unwrap();
        let xh = fft_mode3(&x);
        assert_eq!(xh.data(), &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
        let back = ifft_mode3(&xh).unwrap();
        assert_eq!(back.data(), &[1.0, 1.0]);
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = Tensor3::random((3, 4, 5), &mut rng);
        let xh = fft_mode3(&x);
        for i in 0..3 {
            for j in 0..4 {
                let expect = naive_dft(&x.tube(i, j));
                for (k, e) in expect.iter().enumerate() {
                    assert!((xh.slice(k)[(i, j)] - e).norm() < 1e-12);
                }
            }
        }
        assert!(xh.is_conjugate_symmetric(1e-12));
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = Tensor3::random((4, 3, 6), &mut rng);
        let back = ifft_mode3(&fft_mode3(&x)).unwrap();
        assert!(back.rel_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn mirrored_spectrum_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n3 in [1usize, 2, 5, 6] {
            let half: Vec<CMatrix> = (0..half_len(n3))
                .map(|k| {
                    CMatrix::from_fn(2, 3, |_, _| {
                        let im = if is_real_slice(k, n3) { 0.0 } else { rng.random_range(-1.0..1.0) };
                        Complex64::new(rng.random_range(-1.0..1.0), im)
                    })
                })
                .collect();
            let xh = SpectralTensor::from_slices(half, n3, true).unwrap();
            assert!(xh.is_conjugate_symmetric(1e-15));
            let mut data = xh.data().to_vec();
            transform_tubes(xh.dims(), &mut data, true);
            let total: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let imag: f64 = data.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            assert!(imag <= 1e-12 * total, "n3={n3}: residue {}", imag / total);
            assert!(ifft_mode3(&xh).is_ok());
        }
    }

    #[test]
    fn broken_symmetry_is_flagged() {
        let mut slices = vec![CMatrix::zeros(1, 1); 4];
        slices[1][(0, 0)] = Complex64::new(1.0, 1.0);
        let xh = SpectralTensor::new((1, 1, 4), slices.iter().map(|s| s[(0, 0)]).collect(), true).unwrap();
        assert!(matches!(ifft_mode3(&xh), Err(Error::ImaginaryResidue { .. })));
    }

    #[test]
    fn parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = Tensor3::random((5, 4, 6), &mut rng);
        let direct = x.fro_norm().powi(2);
        let fourier = fft_mode3(&x).fourier_norm_sq();
        assert!((direct - fourier).abs() <= 1e-10 * direct);
    }
}
