//! Small dense kernels shared by the slice-wise Fourier-domain algorithms.
//!
//! Everything is generic over real and complex scalars so the real-valued
//! spectral slices (DC, and Nyquist for even `I3`) can stay in real arithmetic.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Scalar type usable by the slice kernels.
pub trait Scalar: ComplexField<RealField = f64> + faer::traits::ComplexField<Real = f64> + Copy {}
impl<T: ComplexField<RealField = f64> + faer::traits::ComplexField<Real = f64> + Copy> Scalar for T {}

/// Thin SVD factors `A ≈ U diag(sigma) Vᴴ` with singular values non-increasing.
#[derive(Clone, Debug)]
pub struct Svd<T: Scalar> {
    pub u: DMatrix<T>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<T>,
}

fn to_faer<T: Scalar>(a: &DMatrix<T>) -> faer::Mat<T> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer<T: Scalar>(a: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD with singular values in non-increasing order.
///
/// nalgebra's bidiagonal QR can return factors that do not reproduce a
/// rank-deficient input (seen on 4×2 rank-one blocks), so the dense work goes
/// through faer. nalgebra is only the fallback if faer fails to converge.
pub fn dense_svd<T: Scalar>(a: &DMatrix<T>) -> Svd<T> {
    match to_faer(a).thin_svd() {
        Ok(svd) => Svd {
            u: from_faer(svd.U()),
            sigma: (0..svd.S().dim()).map(|i| ComplexField::real(svd.S()[i])).collect(),
            v: from_faer(svd.V()),
        },
        Err(_) => {
            let svd = a.clone().svd(true, true);
            Svd {
                u: svd.u.expect("u requested"),
                sigma: svd.singular_values.iter().copied().collect(),
                v: svd.v_t.expect("v_t requested").adjoint(),
            }
        }
    }
}

/// Singular values in non-increasing order.
pub fn singular_values<T: Scalar>(a: &DMatrix<T>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    match to_faer(a).singular_values() {
        Ok(s) => s,
        Err(_) => a.singular_values().iter().copied().collect(),
    }
}

/// `σ_max / σ_min`, infinite for a singular (or empty-rank) matrix.
pub fn condition_number<T: Scalar>(a: &DMatrix<T>) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Condition number at or above which a square matrix of order `n` is treated as singular.
pub fn singularity_threshold(n: usize) -> f64 {
    1.0 / (f64::EPSILON * n.max(1) as f64)
}

/// Inverse of a square matrix, or the offending condition number when it is
/// numerically singular.
pub fn checked_inverse<T: Scalar>(a: &DMatrix<T>) -> Result<DMatrix<T>, f64> {
    let cond = condition_number(a);
    if !(cond < singularity_threshold(a.nrows())) {
        return Err(cond);
    }
    a.clone().try_inverse().ok_or(f64::INFINITY)
}

/// Solves `a x = b` for square `a`, with the same singularity test as [`checked_inverse`].
pub fn checked_solve<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>, f64> {
    let cond = condition_number(a);
    if !(cond < singularity_threshold(a.nrows())) {
        return Err(cond);
    }
    a.clone().lu().solve(b).ok_or(f64::INFINITY)
}

/// Moore–Penrose pseudoinverse; singular values at or below
/// `max(rows, cols) · ε · σ_max` are treated as zero.
pub fn pinv<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    let (m, n) = a.shape();
    let svd = dense_svd(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = m.max(n) as f64 * f64::EPSILON * smax;
    let mut out = DMatrix::<T>::zeros(n, m);
    for (t, &s) in svd.sigma.iter().enumerate() {
        if s > tol {
            // out += v[:,t] (1/s) u[:,t]ᴴ
            out += (svd.v.column(t) * svd.u.column(t).adjoint()).unscale(s);
        }
    }
    out
}

/// Orthonormal basis of the numerical range of `a`, with the same cut-off as
/// [`pinv`], padded with zero columns to `min(rows, cols)` columns.
///
/// `range_basis(a) · range_basis(a)ᴴ` equals `a · pinv(a)`.
pub fn range_basis<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    let (m, n) = a.shape();
    let svd = dense_svd(a);
    let mut u = svd.u;
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = m.max(n) as f64 * f64::EPSILON * smax;
    for (t, &s) in svd.sigma.iter().enumerate() {
        if !(s > tol) {
            u.column_mut(t).fill(T::zero());
        }
    }
    u
}

/// Spectral norm.
pub fn spectral_norm<T: Scalar>(a: &DMatrix<T>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Rotates each singular pair so the largest-magnitude entry of the left
/// vector is real and positive (first such entry on exact ties).
fn fix_phases<T: Scalar>(svd: &mut Svd<T>) {
    for t in 0..svd.u.ncols() {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, z) in svd.u.column(t).iter().enumerate() {
            let mag = z.modulus();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag <= 0.0 {
            continue;
        }
        let phase = svd.u[(best, t)].conjugate().unscale(best_mag);
        svd.u.column_mut(t).iter_mut().for_each(|z| *z *= phase);
        svd.v.column_mut(t).iter_mut().for_each(|z| *z *= phase);
        svd.u[(best, t)] = T::from_real(svd.u[(best, t)].real());
    }
}

/// Full thin SVD with the phase convention applied.
pub fn full_svd<T: Scalar>(a: &DMatrix<T>) -> Svd<T> {
    let mut out = dense_svd(a);
    fix_phases(&mut out);
    out
}

fn dense_truncated<T: Scalar>(a: &DMatrix<T>, rank: usize) -> Svd<T> {
    let svd = dense_svd(a);
    Svd {
        u: svd.u.columns(0, rank).into_owned(),
        sigma: svd.sigma[..rank].to_vec(),
        v: svd.v.columns(0, rank).into_owned(),
    }
}

/// Leading `rank` singular triplets of `a`, phase-fixed.
///
/// Small problems and ranks close to the full dimension use a dense SVD.
/// Otherwise the triplets come from Golub–Kahan–Lanczos bidiagonalization
/// with full reorthogonalization, so the cost grows with `rank` instead of
/// with the matrix size; if it has not converged within a bounded number of
/// steps the dense path is used instead.
pub fn truncated_svd<T: Scalar>(a: &DMatrix<T>, rank: usize) -> Svd<T> {
    let (m, n) = a.shape();
    let small = m.min(n);
    assert!(rank >= 1 && rank <= small, "rank {rank} outside 1..={small}");
    let mut out = if small >= LANCZOS_MIN_DIM && 4 * rank <= small {
        let lanczos = if m >= n {
            lanczos_svd(a, rank)
        } else {
            lanczos_svd(&a.adjoint(), rank).map(|s| Svd { u: s.v, sigma: s.sigma, v: s.u })
        };
        lanczos.unwrap_or_else(|| dense_truncated(a, rank))
    } else {
        dense_truncated(a, rank)
    };
    fix_phases(&mut out);
    out
}

const LANCZOS_MIN_DIM: usize = 48;
/// Ritz triplets are accepted once their residual is below this fraction of `σ_1`.
const LANCZOS_TOL: f64 = 1e-12;
/// Residual norms below this fraction of `‖A‖_F` are treated as an invariant subspace.
const BREAKDOWN_TOL: f64 = 1e-13;

/// Deterministic pseudo-random unit-scale entries (splitmix64).
fn probe_vector<T: Scalar>(len: usize, seed: u64) -> DVector<T> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    DVector::from_fn(len, |_, _| {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        T::from_real((z >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
    })
}

fn reorthogonalize<T: Scalar>(w: &mut DVector<T>, basis: &[DVector<T>]) {
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(w);
            w.axpy(-c, q, T::one());
        }
    }
}

/// A fresh unit vector orthogonal to `basis`.
fn fresh_direction<T: Scalar>(len: usize, basis: &[DVector<T>], seed: u64) -> Option<DVector<T>> {
    for attempt in 0..4 {
        let mut w = probe_vector::<T>(len, seed.wrapping_add(attempt * 7919));
        let before = w.norm();
        reorthogonalize(&mut w, basis);
        let after = w.norm();
        if after > 1e-3 * before {
            return Some(w.unscale(after));
        }
    }
    None
}

/// Requires `a.nrows() >= a.ncols()`. Returns `None` when the step budget is
/// exhausted before the leading `rank` triplets converge.
fn lanczos_svd<T: Scalar>(a: &DMatrix<T>, rank: usize) -> Option<Svd<T>> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let ah = a.adjoint();
    let scale = a.norm();
    if scale == 0.0 {
        return None;
    }
    let brk = BREAKDOWN_TOL * scale;
    let budget = n.min(2 * rank + 24);

    let mut us: Vec<DVector<T>> = Vec::with_capacity(budget);
    let mut vs: Vec<DVector<T>> = Vec::with_capacity(budget + 1);
    let mut alphas: Vec<f64> = Vec::with_capacity(budget);
    let mut betas: Vec<f64> = Vec::with_capacity(budget);

    let start = probe_vector::<T>(n, 0x5eed);
    let start_norm = start.norm();
    vs.push(start.unscale(start_norm));

    for j in 0..budget {
        let mut w = a * &vs[j];
        if j > 0 {
            w.axpy(T::from_real(-betas[j - 1]), &us[j - 1], T::one());
        }
        reorthogonalize(&mut w, &us);
        let mut alpha = w.norm();
        if alpha <= brk {
            alpha = 0.0;
            w = fresh_direction(m, &us, 2 * j as u64 + 1)?;
        } else {
            w.unscale_mut(alpha);
        }
        us.push(w);
        alphas.push(alpha);

        let mut z = &ah * &us[j];
        z.axpy(T::from_real(-alpha), &vs[j], T::one());
        reorthogonalize(&mut z, &vs);
        let mut beta = z.norm();
        let steps = j + 1;
        if steps == n {
            // V spans the whole domain: the bidiagonal SVD is exact.
            betas.push(0.0);
            return Some(ritz(&us, &vs, &alphas, &betas, rank));
        }
        if beta <= brk {
            beta = 0.0;
            z = fresh_direction(n, &vs, 2 * j as u64 + 2)?;
        } else {
            z.unscale_mut(beta);
        }
        betas.push(beta);

        if steps >= rank {
            let b = bidiagonal(&alphas, &betas);
            let svd = dense_svd(&b);
            let p = &svd.u;
            let sigma1 = svd.sigma[0];
            // Singular values come out descending, so the leading `rank`
            // columns are the wanted Ritz vectors.
            let converged = (0..rank).all(|i| beta * p[(steps - 1, i)].abs() <= LANCZOS_TOL * sigma1);
            if converged {
                return Some(ritz(&us, &vs, &alphas, &betas, rank));
            }
        }
        vs.push(z);
    }
    None
}

fn bidiagonal(alphas: &[f64], betas: &[f64]) -> DMatrix<f64> {
    let k = alphas.len();
    let mut b = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        b[(i, i)] = alphas[i];
        if i + 1 < k {
            b[(i, i + 1)] = betas[i];
        }
    }
    b
}

fn ritz<T: Scalar>(us: &[DVector<T>], vs: &[DVector<T>], alphas: &[f64], betas: &[f64], rank: usize) -> Svd<T> {
    let k = alphas.len();
    let b = bidiagonal(alphas, betas);
    let svd = dense_svd(&b);
    let (p, q) = (svd.u, svd.v);
    let ub = DMatrix::from_columns(&us[..k]);
    let vb = DMatrix::from_columns(&vs[..k]);
    let pc: DMatrix<T> = p.columns(0, rank).map(T::from_real);
    let qc: DMatrix<T> = q.columns(0, rank).map(T::from_real);
    Svd {
        u: ub * pc,
        sigma: svd.sigma[..rank].to_vec(),
        v: vb * qc,
    }
}
