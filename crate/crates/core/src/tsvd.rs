//! Truncated t-SVD and tubal leverage scores.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Svd};
use crate::spectral::{fft_mode3, ifft_mode3, is_real_slice, CMatrix, SpectralTensor};
use crate::tensor::Tensor3;

/// `X ≈ U * S * Vᵀ` truncated to tubal rank `rank`.
#[derive(Clone, Debug)]
pub struct TSvdFactors {
    /// `I1 x R x I3`, orthogonal lateral slices.
    pub u: Tensor3,
    /// `R x R x I3`, f-diagonal.
    pub s: Tensor3,
    /// `I2 x R x I3`, orthogonal lateral slices.
    pub v: Tensor3,
    pub rank: usize,
}

impl TSvdFactors {
    /// `U * S * Vᵀ`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        crate::algebra::tproduct_chain(&[&self.u, &self.s, &self.v.transpose()])
    }

    /// The factors restricted to the leading `rank` singular slices.
    pub fn truncate(&self, rank: usize) -> Result<TSvdFactors> {
        if rank == 0 || rank > self.rank {
            return Err(Error::Rank { rank, max: self.rank });
        }
        let n3 = self.s.dims().2;
        Ok(TSvdFactors {
            u: self.u.leading_lateral(rank)?,
            s: Tensor3::from_fn((rank, rank, n3), |i, j, k| self.s.get(i, j, k)),
            v: self.v.leading_lateral(rank)?,
            rank,
        })
    }
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

fn slice_svd(slice: &CMatrix, real: bool, rank: usize) -> Svd<Complex64> {
    if real {
        let s = linalg::truncated_svd(&slice.map(|z| z.re), rank);
        Svd { u: to_complex(&s.u), sigma: s.sigma, v: to_complex(&s.v) }
    } else {
        linalg::truncated_svd(slice, rank)
    }
}

/// Truncated t-SVD: a phase-fixed truncated SVD of every independent
/// spectral slice, with the remaining slices mirrored by conjugation.
pub fn truncated_tsvd(x: &Tensor3, rank: usize) -> Result<TSvdFactors> {
    let (n1, n2, n3) = x.dims();
    let max = n1.min(n2);
    if rank == 0 || rank > max {
        return Err(Error::Rank { rank, max });
    }
    let xh = fft_mode3(x);
    let parts: Vec<Svd<Complex64>> = xh
        .active_slices()
        .into_par_iter()
        .map(|k| slice_svd(&xh.slice(k), is_real_slice(k, n3), rank))
        .collect();

    let mut us = Vec::with_capacity(parts.len());
    let mut ss = Vec::with_capacity(parts.len());
    let mut vs = Vec::with_capacity(parts.len());
    for p in parts {
        ss.push(CMatrix::from_fn(rank, rank, |i, j| {
            if i == j {
                Complex64::new(p.sigma[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }));
        us.push(p.u);
        vs.push(p.v);
    }
    Ok(TSvdFactors {
        u: ifft_mode3(&SpectralTensor::from_slices(us, n3, true)?)?,
        s: ifft_mode3(&SpectralTensor::from_slices(ss, n3, true)?)?,
        v: ifft_mode3(&SpectralTensor::from_slices(vs, n3, true)?)?,
        rank,
    })
}

/// All singular values of every spectral slice `X̂_i`, `i = 1..I3`.
#[derive(Clone, Debug)]
pub struct SingularSpectrum {
    values: Vec<Vec<f64>>,
}

impl SingularSpectrum {
    pub fn of(x: &Tensor3) -> Self {
        Self::of_spectral(&fft_mode3(x))
    }

    pub fn of_spectral(xh: &SpectralTensor) -> Self {
        let n3 = xh.dims().2;
        let active: Vec<Vec<f64>> = xh
            .active_slices()
            .into_par_iter()
            .map(|k| {
                let s = xh.slice(k);
                if xh.real_origin() && is_real_slice(k, n3) {
                    linalg::singular_values(&s.map(|z| z.re))
                } else {
                    linalg::singular_values(&s)
                }
            })
            .collect();
        let values = (0..n3)
            .map(|k| if k < active.len() { active[k].clone() } else { active[n3 - k].clone() })
            .collect();
        Self { values }
    }

    /// Singular values of spectral slice `k` (0-based), non-increasing.
    pub fn slice(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn n3(&self) -> usize {
        self.values.len()
    }

    /// `Σ_i Σ_{t>rank} (σ^i_t)²` over all spectral slices.
    pub fn tail_energy(&self, rank: usize) -> f64 {
        self.values.iter().map(|s| s.iter().skip(rank).map(|v| v * v).sum::<f64>()).sum()
    }
}

/// Tubal leverage scores: squared Frobenius norms of horizontal slices of
/// an orthogonal basis tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct LeverageScores {
    pub scores: Vec<f64>,
    pub rank: usize,
}

impl LeverageScores {
    /// Selection probabilities `l_i / R`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.scores.iter().map(|l| l / self.rank as f64).collect()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Leverage scores of the horizontal slices (first mode) of `basis`.
///
/// Pass `U` for horizontal-slice scores and `V` for lateral-slice scores.
pub fn tubal_leverage(basis: &Tensor3) -> LeverageScores {
    let (n1, r, n3) = basis.dims();
    let mut scores = vec![0.0; n1];
    for k in 0..n3 {
        for j in 0..r {
            for (i, s) in scores.iter_mut().enumerate() {
                let v = basis.get(i, j, k);
                *s += v * v;
            }
        }
    }
    LeverageScores { scores, rank: r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tproduct;
    use crate::tensor::identity_tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthogonality_defect(u: &Tensor3) -> f64 {
        let r = u.dims().1;
        tproduct(&u.transpose(), u).unwrap().sub(&identity_tensor(r, u.dims().2)).unwrap().fro_norm()
    }

    #[test]
    fn identity_factorization() {
        let x = identity_tensor(3, 4);
        let f = truncated_tsvd(&x, 3).unwrap();
        assert!(f.s.rel_diff(&identity_tensor(3, 4)).unwrap() < 1e-12);
        assert!(f.reconstruct().unwrap().rel_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn exact_tubal_rank_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = Tensor3::random((9, 3, 5), &mut rng);
        let b = Tensor3::random((3, 7, 5), &mut rng);
        let x = tproduct(&a, &b).unwrap();
        let f = truncated_tsvd(&x, 3).unwrap();
        assert!(f.reconstruct().unwrap().sub(&x).unwrap().fro_norm() <= 1e-8 * x.fro_norm());
        assert!(orthogonality_defect(&f.u) <= 1e-8 * (3.0f64 * 5.0).sqrt());
        assert!(orthogonality_defect(&f.v) <= 1e-8 * (3.0f64 * 5.0).sqrt());
    }

    #[test]
    fn full_rank_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let x = Tensor3::random((10, 8, 6), &mut rng);
        let f = truncated_tsvd(&x, 8).unwrap();
        assert!(f.reconstruct().unwrap().sub(&x).unwrap().fro_norm() <= 1e-8 * x.fro_norm());
    }

    #[test]
    fn rank_out_of_range() {
        let x = Tensor3::zeros((3, 2, 2));
        assert_eq!(truncated_tsvd(&x, 0).unwrap_err(), Error::Rank { rank: 0, max: 2 });
        assert_eq!(truncated_tsvd(&x, 3).unwrap_err(), Error::Rank { rank: 3, max: 2 });
    }

    #[test]
    fn f_diagonal_non_increasing_nonnegative_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = Tensor3::random((6, 5, 4), &mut rng);
        let f = truncated_tsvd(&x, 4).unwrap();
        let sh = fft_mode3(&f.s);
        for k in 0..4 {
            let s = sh.slice(k);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(s[(i, j)].norm() < 1e-12);
                    }
                }
                assert!(s[(i, i)].im.abs() < 1e-12 && s[(i, i)].re >= 0.0);
                if i > 0 {
                    assert!(s[(i, i)].re <= s[(i - 1, i - 1)].re + 1e-12);
                }
            }
        }
        // Frontal slices in the original domain are diagonal too.
        for k in 0..4 {
            let fr = f.s.frontal(k);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(fr[(i, j)].abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn eckart_young_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let x = Tensor3::random((7, 6, 5), &mut rng);
        let spectrum = SingularSpectrum::of(&x);
        for r in 1..=6 {
            let f = truncated_tsvd(&x, r).unwrap();
            let err2 = f.reconstruct().unwrap().sub(&x).unwrap().fro_norm().powi(2);
            let tail = spectrum.tail_energy(r) / 5.0;
            let scale = tail.max(1e-12 * x.fro_norm().powi(2));
            assert!((err2 - tail).abs() <= 1e-8 * scale, "r={r}: {err2} vs {tail}");
        }
    }

    #[test]
    fn mirrored_factors_are_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let x = Tensor3::random((5, 4, 7), &mut rng);
        let f = truncated_tsvd(&x, 3).unwrap();
        let uh = fft_mode3(&f.u);
        assert!(uh.is_conjugate_symmetric(1e-12));
    }

    #[test]
    fn deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let x = Tensor3::random((60, 70, 5), &mut rng);
        let a = truncated_tsvd(&x, 4).unwrap();
        let b = truncated_tsvd(&x, 4).unwrap();
        assert_eq!(a.u.data(), b.u.data());
        assert_eq!(a.s.data(), b.s.data());
        assert_eq!(a.v.data(), b.v.data());
    }

    #[test]
    fn leverage_of_identity_basis() {
        let u = identity_tensor(4, 3).leading_lateral(2).unwrap();
        let l = tubal_leverage(&u);
        assert_eq!(l.scores, vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(l.probabilities(), vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn leverage_sums_to_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let x = Tensor3::random((8, 6, 5), &mut rng);
        let f = truncated_tsvd(&x, 3).unwrap();
        for basis in [&f.u, &f.v] {
            let l = tubal_leverage(basis);
            let direct: Vec<f64> = (0..basis.dims().0)
                .map(|i| {
                    let mut acc = 0.0;
                    for r in 0..3 {
                        for k in 0..5 {
                            acc += basis.get(i, r, k).powi(2);
                        }
                    }
                    acc
                })
                .collect();
            for (a, b) in l.scores.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-14);
                assert!(*a >= 0.0 && *a <= 3.0 + 1e-12);
            }
            assert!((l.scores.iter().sum::<f64>() - 3.0).abs() < 1e-8);
        }
    }
}
