//! Slice-index selection: matrix DEIM, tubal DEIM, the hybrid
//! TDEIM/leverage scheme, and the leverage and uniform baselines.
//!
//! Randomized samplers use `ChaCha8Rng::seed_from_u64(seed)`, which is
//! portable across platforms.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::linalg::{self, Scalar};
use crate::spectral::{fft_mode3, ifft_mode3, is_real_slice, CMatrix, SpectralTensor};
use crate::tensor::Tensor3;
use crate::tsvd::{tubal_leverage, LeverageScores, TSvdFactors};

/// Relative size below which a residual is treated as identically zero.
const RESIDUAL_FLOOR: f64 = 1e-12;

/// Position of the largest value; the smallest position wins ties.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `u_j − U(:, 0..j) · U(s, 0..j)⁻¹ · U(s, j)`.
fn interpolation_residual<T: Scalar>(u: &DMatrix<T>, s: &[usize], j: usize) -> std::result::Result<DVector<T>, f64> {
    let a = DMatrix::from_fn(j, j, |r, c| u[(s[r], c)]);
    let b = DMatrix::from_fn(j, 1, |r, _| u[(s[r], j)]);
    let c = linalg::checked_solve(&a, &b)?;
    Ok(u.column(j) - u.columns(0, j) * c)
}

fn degenerate(step: usize, detail: impl Into<String>) -> Error {
    Error::Degenerate { step, detail: detail.into() }
}

/// Checks a residual magnitude profile and returns the next index.
fn next_index(step: usize, magnitudes: &[f64], reference: f64, chosen: &[usize]) -> Result<usize> {
    let i = argmax(magnitudes);
    if !(magnitudes[i] > RESIDUAL_FLOOR * reference) {
        return Err(degenerate(step, format!("residual vanished (max {:e})", magnitudes[i])));
    }
    if chosen.contains(&i) {
        return Err(degenerate(step, format!("residual maximum at already selected index {}", i + 1)));
    }
    Ok(i)
}

/// DEIM row selection for a basis with full column rank.
pub fn deim_matrix(basis: &DMatrix<f64>) -> Result<IndexSet> {
    let (n, r) = basis.shape();
    if r == 0 || r > n {
        return Err(Error::Rank { rank: r, max: n });
    }
    let first: Vec<f64> = basis.column(0).iter().map(|v| v.abs()).collect();
    let mut s = vec![next_index(1, &first, basis.column(0).norm(), &[])?];
    for j in 1..r {
        let res = interpolation_residual(basis, &s, j)
            .map_err(|cond| degenerate(j + 1, format!("interpolation submatrix condition {cond:e}")))?;
        let mags: Vec<f64> = res.iter().map(|v| v.abs()).collect();
        s.push(next_index(j + 1, &mags, basis.column(j).norm(), &s)?);
    }
    IndexSet::from_zero_based(&s, n)
}

fn tube_norms(x: &Tensor3, j: usize) -> Vec<f64> {
    let (n1, _, n3) = x.dims();
    let mut acc = vec![0.0; n1];
    for k in 0..n3 {
        for (i, a) in acc.iter_mut().enumerate() {
            let v = x.get(i, j, k);
            *a += v * v;
        }
    }
    acc.into_iter().map(f64::sqrt).collect()
}

/// Result of the tubal DEIM loop.
#[derive(Clone, Debug)]
pub struct TdeimOutput {
    pub indices: IndexSet,
    /// Lateral slice 0 is `U(:,1,:)`; slice `j` is the interpolation
    /// residual of `U(:,j,:)` against the first `j` selected indices.
    pub residuals: Tensor3,
}

/// Tubal DEIM selection of horizontal slices of an `I1 x R x I3` basis.
pub fn tdeim(basis: &Tensor3) -> Result<IndexSet> {
    Ok(tdeim_with_residuals(basis)?.indices)
}

pub fn tdeim_with_residuals(basis: &Tensor3) -> Result<TdeimOutput> {
    let (n1, r, n3) = basis.dims();
    if r == 0 || r > n1 {
        return Err(Error::Rank { rank: r, max: n1 });
    }
    let uh = fft_mode3(basis);
    let slices: Vec<CMatrix> = uh.active_slices().map(|k| uh.slice(k)).collect();
    let mut residuals = Tensor3::zeros((n1, r, n3));
    for k in 0..n3 {
        for i in 0..n1 {
            residuals.set(i, 0, k, basis.get(i, 0, k));
        }
    }
    let first = tube_norms(basis, 0);
    let reference = first.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut s = vec![next_index(1, &first, reference, &[])?];

    for j in 1..r {
        let cols: Vec<CMatrix> = slices
            .par_iter()
            .enumerate()
            .map(|(k, uk)| {
                let col = if is_real_slice(k, n3) {
                    let re = uk.map(|z| z.re);
                    interpolation_residual(&re, &s, j).map(|c| c.map(|v| Complex64::new(v, 0.0)))
                } else {
                    interpolation_residual(uk, &s, j)
                };
                col.map(|c| CMatrix::from_column_slice(n1, 1, c.as_slice()))
                    .map_err(|cond| degenerate(j + 1, format!("spectral slice {} has condition {cond:e}", k + 1)))
            })
            .collect::<Result<_>>()?;
        let res = ifft_mode3(&SpectralTensor::from_slices(cols, n3, true)?)?;
        for k in 0..n3 {
            for i in 0..n1 {
                residuals.set(i, j, k, res.get(i, 0, k));
            }
        }
        let mags = tube_norms(&res, 0);
        let reference = tube_norms(basis, j).iter().map(|v| v * v).sum::<f64>().sqrt();
        s.push(next_index(j + 1, &mags, reference, &s)?);
    }
    Ok(TdeimOutput { indices: IndexSet::from_zero_based(&s, n1)?, residuals })
}

fn htdeim_one(basis: &Tensor3, rank: usize, extended: usize, what: &str) -> Result<IndexSet> {
    let (n, r, _) = basis.dims();
    if rank == 0 || rank > r {
        return Err(Error::Rank { rank, max: r });
    }
    if extended < rank || extended > n {
        return Err(Error::Range(format!(
            "extended rank {extended} must lie in {rank}..={n} for the {what} basis"
        )));
    }
    let base = if rank == r { basis.clone() } else { basis.leading_lateral(rank)? };
    let out = tdeim_with_residuals(&base)?;
    let scores = tubal_leverage(&out.residuals);
    let mut chosen = out.indices.zero_based();
    let mut rest: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
    rest.sort_by(|&a, &b| scores.scores[b].total_cmp(&scores.scores[a]).then(a.cmp(&b)));
    chosen.extend(rest.into_iter().take(extended - rank));
    IndexSet::from_zero_based(&chosen, n)
}

/// Hybrid selection: `rank` indices by tubal DEIM, then `extended − rank`
/// more by the largest leverage scores of the deflated residual.
/// Returns the horizontal indices from `basis_u` and the lateral indices
/// from `basis_v`.
pub fn htdeim(basis_u: &Tensor3, basis_v: &Tensor3, rank: usize, extended: usize) -> Result<(IndexSet, IndexSet)> {
    Ok((htdeim_one(basis_u, rank, extended, "U")?, htdeim_one(basis_v, rank, extended, "V")?))
}

/// Indices of the `rank` largest scores, ties to the smaller index.
pub fn top_leverage(scores: &LeverageScores, rank: usize) -> Result<IndexSet> {
    let n = scores.len();
    if rank == 0 || rank > n {
        return Err(Error::Rank { rank, max: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores.scores[b].total_cmp(&scores.scores[a]).then(a.cmp(&b)));
    order.truncate(rank);
    IndexSet::from_zero_based(&order, n)
}

/// `rank` distinct indices drawn without replacement with probability
/// proportional to the (renormalized) scores.
pub fn leverage_sample(scores: &LeverageScores, rank: usize, seed: u64) -> Result<IndexSet> {
    leverage_sample_with(scores, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn leverage_sample_with<R: Rng + ?Sized>(scores: &LeverageScores, rank: usize, rng: &mut R) -> Result<IndexSet> {
    let n = scores.len();
    if let Some(bad) = scores.scores.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Sampling(format!("invalid leverage score {bad}")));
    }
    let positive = scores.scores.iter().filter(|v| **v > 0.0).count();
    if rank == 0 || rank > positive {
        return Err(Error::Sampling(format!(
            "cannot draw {rank} indices from {positive} with positive probability"
        )));
    }
    let picked = index::sample_weighted(rng, n, |i| scores.scores[i], rank)
        .map_err(|e| Error::Sampling(e.to_string()))?;
    IndexSet::from_zero_based(&picked.into_vec(), n)
}

/// `rank` distinct indices from `1..=bound`, uniformly without replacement.
pub fn uniform_sample(bound: usize, rank: usize, seed: u64) -> Result<IndexSet> {
    uniform_sample_with(bound, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn uniform_sample_with<R: Rng + ?Sized>(bound: usize, rank: usize, rng: &mut R) -> Result<IndexSet> {
    if rank == 0 || rank > bound {
        return Err(Error::Range(format!("cannot draw {rank} distinct indices from 1..={bound}")));
    }
    IndexSet::from_zero_based(&index::sample(rng, bound, rank).into_vec(), bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Tdeim,
    Htdeim,
    TopLeverage,
    LeverageSampling,
    Uniform,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Tdeim, Method::Htdeim, Method::TopLeverage, Method::LeverageSampling, Method::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tdeim => "tdeim",
            Method::Htdeim => "htdeim",
            Method::TopLeverage => "top_leverage",
            Method::LeverageSampling => "leverage_sampling",
            Method::Uniform => "uniform",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Method::LeverageSampling | Method::Uniform)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Range(format!("unknown sampling method '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub method: Method,
    pub rank: usize,
    /// Total index count for `htdeim`; ignored by other methods.
    pub extended_rank: Option<usize>,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(method: Method, rank: usize) -> Self {
        Self { method, rank, extended_rank: None, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::Range("rank must be at least 1".into()));
        }
        if let Some(e) = self.extended_rank {
            if e < self.rank {
                return Err(Error::Range(format!("extended rank {e} is below rank {}", self.rank)));
            }
        }
        Ok(())
    }

    /// Number of slice indices the configuration produces per mode.
    pub fn sample_count(&self) -> usize {
        match self.method {
            Method::Htdeim => self.extended_rank.unwrap_or(self.rank),
            _ => self.rank,
        }
    }
}

/// Selects horizontal (`p`) and lateral (`q`) indices from t-SVD factors of
/// rank at least `config.rank`. Randomized methods draw `p` then `q` from
/// one generator.
pub fn select(config: &SamplerConfig, factors: &TSvdFactors) -> Result<(IndexSet, IndexSet)> {
    config.validate()?;
    let rank = config.rank;
    if rank > factors.rank {
        return Err(Error::Rank { rank, max: factors.rank });
    }
    let u = factors.u.leading_lateral(rank)?;
    let v = factors.v.leading_lateral(rank)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match config.method {
        Method::Tdeim => Ok((tdeim(&u)?, tdeim(&v)?)),
        Method::Htdeim => htdeim(&u, &v, rank, config.sample_count()),
        Method::TopLeverage => Ok((top_leverage(&tubal_leverage(&u), rank)?, top_leverage(&tubal_leverage(&v), rank)?)),
        Method::LeverageSampling => {
            let p = leverage_sample_with(&tubal_leverage(&u), rank, &mut rng)?;
            let q = leverage_sample_with(&tubal_leverage(&v), rank, &mut rng)?;
            Ok((p, q))
        }
        Method::Uniform => {
            let p = uniform_sample_with(u.dims().0, rank, &mut rng)?;
            let q = uniform_sample_with(v.dims().0, rank, &mut rng)?;
            Ok((p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tinverse, tproduct_oracle};
    use crate::tensor::identity_tensor;
    use crate::tsvd::truncated_tsvd;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn orthonormal(n: usize, r: usize, seed: u64) -> DMatrix<f64> {
        let mut g = rng(seed);
        let a = DMatrix::from_fn(n, r, |_, _| g.random_range(-1.0..1.0));
        a.qr().q()
    }

    fn random_basis(dims: (usize, usize, usize), seed: u64) -> Tensor3 {
        let x = Tensor3::random(dims, &mut rng(seed));
        truncated_tsvd(&x, dims.1.min(dims.0)).unwrap().u
    }

    /// DEIM with explicit inverses and a full argmax scan.
    fn deim_oracle(u: &DMatrix<f64>) -> Vec<usize> {
        let mut s: Vec<usize> = Vec::new();
        for j in 0..u.ncols() {
            let mut r = u.column(j).clone_owned();
            if j > 0 {
                let a = DMatrix::from_fn(j, j, |x, y| u[(s[x], y)]);
                let b = DMatrix::from_fn(j, 1, |x, _| u[(s[x], j)]);
                let c = a.try_inverse().unwrap() * b;
                r -= u.columns(0, j) * c;
            }
            let mut best = 0;
            for i in 0..r.len() {
                if r[i].abs() > r[best].abs() {
                    best = i;
                }
            }
            s.push(best);
        }
        s.iter().map(|i| i + 1).collect()
    }

    /// TDEIM executed with the block-circulant product and slice-wise inverse.
    fn tdeim_oracle(u: &Tensor3) -> (Vec<usize>, Vec<f64>) {
        let (n1, r, n3) = u.dims();
        let lateral = |j: usize| Tensor3::from_fn((n1, 1, n3), |i, _, k| u.get(i, j, k));
        let norms = |t: &Tensor3| -> Vec<f64> {
            (0..n1).map(|i| (0..n3).map(|k| t.get(i, 0, k).powi(2)).sum::<f64>().sqrt()).collect()
        };
        let mut s = vec![argmax(&norms(&lateral(0)))];
        let mut sampled_residual = Vec::new();
        for j in 1..r {
            let lead = u.leading_lateral(j).unwrap();
            let sel = IndexSet::from_zero_based(&s, n1).unwrap();
            let c = tproduct_oracle(&tinverse(&lead.horizontal(&sel).unwrap()).unwrap(), &lateral(j).horizontal(&sel).unwrap()).unwrap();
            let res = lateral(j).sub(&tproduct_oracle(&lead, &c).unwrap()).unwrap();
            let n = norms(&res);
            sampled_residual.extend(s.iter().map(|&i| n[i]));
            s.push(argmax(&n));
        }
        (s.iter().map(|i| i + 1).collect(), sampled_residual)
    }

    #[test]
    fn deim_identity_columns() {
        let u = DMatrix::<f64>::identity(6, 6).columns(0, 3).clone_owned();
        assert_eq!(deim_matrix(&u).unwrap().indices(), &[1, 2, 3]);
    }

    #[test]
    fn deim_single_column() {
        let u = DMatrix::from_column_slice(3, 1, &[3.0, -7.0, 2.0]);
        assert_eq!(deim_matrix(&u).unwrap().indices(), &[2]);
    }

    #[test]
    fn deim_matches_oracle() {
        for seed in 0..20 {
            let u = orthonormal(6, 3, seed);
            assert_eq!(deim_matrix(&u).unwrap().indices(), deim_oracle(&u).as_slice());
        }
    }

    #[test]
    fn deim_rejects_rank_deficient_basis() {
        let u = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        assert!(matches!(deim_matrix(&u), Err(Error::Degenerate { step: 2, .. })));
    }

    #[test]
    fn tdeim_single_slice_is_deim() {
        for seed in 0..10 {
            let u = orthonormal(7, 4, 100 + seed);
            let t = Tensor3::from_frontal_slices(std::slice::from_ref(&u)).unwrap();
            assert_eq!(tdeim(&t).unwrap(), deim_matrix(&u).unwrap());
        }
    }

    #[test]
    fn tdeim_identity_basis() {
        let u = identity_tensor(5, 3).leading_lateral(2).unwrap();
        assert_eq!(tdeim(&u).unwrap().indices(), &[1, 2]);
    }

    #[test]
    fn tdeim_matches_oracle_and_interpolates() {
        for seed in 0..5 {
            let u = random_basis((8, 3, 4), 200 + seed);
            let out = tdeim_with_residuals(&u).unwrap();
            let (expected, sampled) = tdeim_oracle(&u);
            assert_eq!(out.indices.indices(), expected.as_slice());
            assert!(sampled.iter().all(|&v| v <= 1e-10 * u.fro_norm()));
            // Residual of step j vanishes at the indices chosen before it.
            for j in 1..3 {
                for &i in &out.indices.zero_based()[..j] {
                    let tube: f64 = (0..4).map(|k| out.residuals.get(i, j, k).powi(2)).sum::<f64>().sqrt();
                    assert!(tube <= 1e-10 * u.fro_norm());
                }
            }
        }
    }

    #[test]
    fn tdeim_reports_degenerate_step() {
        let mut u = Tensor3::zeros((4, 2, 2));
        u.set(0, 0, 0, 1.0);
        u.set(0, 1, 0, 1.0);
        assert!(matches!(tdeim(&u), Err(Error::Degenerate { step: 2, .. })));
    }

    #[test]
    fn htdeim_without_extension_is_tdeim() {
        let mut g = rng(7);
        let x = Tensor3::random((12, 10, 5), &mut g);
        let f = truncated_tsvd(&x, 4).unwrap();
        let (p, q) = htdeim(&f.u, &f.v, 4, 4).unwrap();
        assert_eq!(p, tdeim(&f.u).unwrap());
        assert_eq!(q, tdeim(&f.v).unwrap());
    }

    #[test]
    fn htdeim_extends_by_residual_leverage() {
        // Single lateral slice: the residual tensor is the basis itself.
        let u = Tensor3::new((3, 1, 2), vec![0.9, 0.3, 0.1, 0.0, 0.0, 0.0]).unwrap();
        let (p, _) = htdeim(&u, &u, 1, 2).unwrap();
        assert_eq!(p.indices(), &[1, 2]);

        let u = Tensor3::new((3, 1, 2), vec![0.9, 0.1, 0.3, 0.1, 0.0, 0.0]).unwrap();
        // Tube norms: 0.906, 0.1, 0.3; leverage of index 2 is 0.01, of index 3 is 0.09.
        let (p, _) = htdeim(&u, &u, 1, 2).unwrap();
        assert_eq!(p.indices(), &[1, 3]);
    }

    #[test]
    fn htdeim_indices_are_distinct_and_bounded() {
        for seed in 0..50 {
            let mut g = rng(300 + seed);
            let x = Tensor3::random((9, 7, 3), &mut g);
            let f = truncated_tsvd(&x, 2).unwrap();
            let (p, q) = htdeim(&f.u, &f.v, 2, 5).unwrap();
            assert_eq!((p.len(), q.len()), (5, 5));
            assert_eq!((p.bound(), q.bound()), (9, 7));
        }
    }

    #[test]
    fn htdeim_range_errors() {
        let u = random_basis((5, 2, 2), 9);
        assert!(matches!(htdeim(&u, &u, 2, 6), Err(Error::Range(_))));
        assert!(matches!(htdeim(&u, &u, 2, 1), Err(Error::Range(_))));
    }

    #[test]
    fn top_leverage_cases() {
        let l = LeverageScores { scores: vec![0.1, 0.9, 0.5], rank: 2 };
        assert_eq!(top_leverage(&l, 2).unwrap().indices(), &[2, 3]);
        let l = LeverageScores { scores: vec![0.5; 4], rank: 2 };
        assert_eq!(top_leverage(&l, 2).unwrap().indices(), &[1, 2]);
    }

    #[test]
    fn top_leverage_matches_sorting() {
        let x = crate::datasets::gen_synthetic(3.0, (20, 15, 6)).unwrap();
        let f = truncated_tsvd(&x, 5).unwrap();
        let l = tubal_leverage(&f.u);
        let mut pairs: Vec<(f64, usize)> = l.scores.iter().copied().zip(1..).collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let expected: Vec<usize> = pairs.iter().take(5).map(|p| p.1).collect();
        assert_eq!(top_leverage(&l, 5).unwrap().indices(), expected.as_slice());
    }

    #[test]
    fn leverage_sample_cases() {
        let l = LeverageScores { scores: vec![0.0, 1.0, 0.0], rank: 1 };
        for seed in 0..20 {
            assert_eq!(leverage_sample(&l, 1, seed).unwrap().indices(), &[2]);
        }
        let l = LeverageScores { scores: vec![1.0; 5], rank: 5 };
        assert_eq!(leverage_sample(&l, 5, 3).unwrap().sorted().indices(), &[1, 2, 3, 4, 5]);
        assert!(matches!(leverage_sample(&LeverageScores { scores: vec![1.0, 0.0], rank: 1 }, 2, 0), Err(Error::Sampling(_))));
        assert_eq!(leverage_sample(&l, 3, 11).unwrap(), leverage_sample(&l, 3, 11).unwrap());
    }

    #[test]
    fn leverage_sample_frequency() {
        let l = LeverageScores { scores: vec![1.5, 0.5], rank: 2 };
        let mut g = rng(42);
        let n = 100_000;
        let hits = (0..n).filter(|_| leverage_sample_with(&l, 1, &mut g).unwrap().indices()[0] == 1).count();
        assert!((hits as f64 / n as f64 - 0.75).abs() <= 0.01);
    }

    #[test]
    fn uniform_sample_cases() {
        assert_eq!(uniform_sample(6, 6, 1).unwrap().sorted().indices(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(uniform_sample(10, 4, 5).unwrap(), uniform_sample(10, 4, 5).unwrap());
        assert!(matches!(uniform_sample(3, 4, 0), Err(Error::Range(_))));
        let mut g = rng(43);
        let mut counts = [0usize; 4];
        let n = 100_000;
        for _ in 0..n {
            counts[uniform_sample_with(4, 1, &mut g).unwrap().indices()[0] - 1] += 1;
        }
        assert!(counts.iter().all(|&c| (c as f64 / n as f64 - 0.25).abs() <= 0.01));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("maxvol".parse::<Method>().is_err());
    }

    #[test]
    fn select_dispatches() {
        let x = Tensor3::random((10, 9, 4), &mut rng(8));
        let f = truncated_tsvd(&x, 3).unwrap();
        for m in Method::ALL {
            let mut cfg = SamplerConfig::new(m, 3);
            cfg.extended_rank = Some(5);
            cfg.seed = 17;
            let (p, q) = select(&cfg, &f).unwrap();
            assert_eq!(p.len(), cfg.sample_count());
            assert_eq!(q.len(), cfg.sample_count());
            assert_eq!((p.bound(), q.bound()), (10, 9));
            assert_eq!(select(&cfg, &f).unwrap(), (p, q));
        }
    }
}
