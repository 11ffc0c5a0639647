//! Interpolatory projectors and tubal CUR approximation.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{spectral_pinv, spectral_product};
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::linalg;
use crate::spectral::{fft_mode3, ifft_mode3, is_real_slice, CMatrix, SpectralTensor};
use crate::tensor::Tensor3;
use crate::tsvd::{SingularSpectrum, TSvdFactors};

/// Explicit inverses are formed up to this order when computing error
/// constants; larger systems use the smallest singular value.
const EXPLICIT_INVERSE_MAX: usize = 64;

/// Relative `σ_min / σ_max` below which an intersection slice is reported.
const NEAR_SINGULAR: f64 = 1e-12;

/// Relative slack allowed when comparing the two sides of a bound.
pub const BOUND_SLACK: f64 = 1e-8;

fn rows_of(m: &CMatrix, rows: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), m.ncols(), |a, b| m[(rows[a], b)])
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `(Sᵀ Û_i)⁻¹` for a square selection, `(Sᵀ Û_i)†` for an oversampled one.
fn selection_inverse(uk: &CMatrix, s: &[usize], real: bool, slice: usize) -> Result<CMatrix> {
    let a = rows_of(uk, s);
    let r = a.ncols();
    if a.nrows() == r {
        let inv = if real {
            linalg::checked_inverse(&a.map(|z| z.re)).map(|m| to_complex(&m))
        } else {
            linalg::checked_inverse(&a)
        };
        return inv.map_err(|condition| Error::Singular { slice, condition });
    }
    let sv = linalg::singular_values(&a);
    let smin = sv[r - 1];
    if !(smin > a.nrows() as f64 * f64::EPSILON * sv[0]) {
        return Err(Error::Singular { slice, condition: sv[0] / smin });
    }
    Ok(if real { to_complex(&linalg::pinv(&a.map(|z| z.re))) } else { linalg::pinv(&a) })
}

/// The oblique projector `𝒫 = U * (Sᵀ*U)⁻¹ * Sᵀ`.
///
/// An oversampled index set (`|s| > R`) uses the pseudoinverse in place of
/// the inverse.
#[derive(Clone, Debug)]
pub struct Projector {
    s: IndexSet,
    uh: SpectralTensor,
    mh: SpectralTensor,
}

pub fn build_projector(basis: &Tensor3, s: &IndexSet) -> Result<Projector> {
    let (n1, r, n3) = basis.dims();
    s.check_within(n1, "projector")?;
    if s.len() < r {
        return Err(Error::Shape {
            op: "build_projector",
            detail: format!("{} indices cannot interpolate a rank-{r} basis", s.len()),
        });
    }
    let uh = fft_mode3(basis);
    let rows = s.zero_based();
    let mh = uh.map_slices(|k, uk| selection_inverse(&uk, &rows, is_real_slice(k, n3), k + 1))?;
    Ok(Projector { s: s.clone(), uh, mh })
}

impl Projector {
    pub fn indices(&self) -> &IndexSet {
        &self.s
    }

    /// `𝒫 * G` for `G` of size `I1 x n x I3`.
    pub fn apply(&self, g: &Tensor3) -> Result<Tensor3> {
        let (n1, _, n3) = self.uh.dims();
        if g.dims().0 != n1 || g.dims().2 != n3 {
            return Err(Error::Shape {
                op: "Projector::apply",
                detail: format!("projector acts on {n1}x_x{n3}, got {:?}", g.dims()),
            });
        }
        let gs = fft_mode3(&g.horizontal(&self.s)?);
        ifft_mode3(&spectral_product(&self.uh, &spectral_product(&self.mh, &gs)?)?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MiddleVariant {
    /// `C† * X * R†`.
    #[default]
    Optimal,
    /// `X(p, q, :)†`.
    Intersection,
}

impl MiddleVariant {
    pub fn name(self) -> &'static str {
        match self {
            MiddleVariant::Optimal => "optimal",
            MiddleVariant::Intersection => "intersection",
        }
    }
}

impl fmt::Display for MiddleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MiddleVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(MiddleVariant::Optimal),
            "intersection" => Ok(MiddleVariant::Intersection),
            _ => Err(Error::Range(format!("unknown middle variant '{s}'"))),
        }
    }
}

/// `C * C† * X * R† * R` in factored form `Q_C * M * Q_Rᵀ`, where `Q_C` and
/// `Q_R` hold orthonormal bases of the numerical ranges of `C` and `Rᵀ`.
///
/// Multiplying out `C * (C† * X * R†) * R` directly loses all accuracy once
/// `C` or `R` is ill-conditioned; the factored form does not.
#[derive(Clone, Debug)]
pub struct Projection {
    pub q_c: Tensor3,
    pub core: Tensor3,
    pub q_r: Tensor3,
}

/// `X ≈ C * U * R` with `C = X(:,q,:)` and `R = X(p,:,:)`.
#[derive(Clone, Debug)]
pub struct CurModel {
    pub c: Tensor3,
    pub u_mid: Tensor3,
    pub r: Tensor3,
    pub p: IndexSet,
    pub q: IndexSet,
    pub middle_variant: MiddleVariant,
    /// Present for the optimal middle tensor.
    pub projection: Option<Projection>,
    pub warnings: Vec<String>,
}

impl CurModel {
    /// `C * U * R`. The optimal variant is evaluated through its projection.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        match &self.projection {
            Some(pr) => crate::algebra::tproduct_chain(&[&pr.q_c, &pr.core, &pr.q_r.transpose()]),
            None => crate::algebra::tproduct_chain(&[&self.c, &self.u_mid, &self.r]),
        }
    }
}

fn spectral_range(xh: &SpectralTensor) -> Result<SpectralTensor> {
    let n3 = xh.dims().2;
    xh.map_slices(|k, s| {
        if xh.real_origin() && is_real_slice(k, n3) {
            Ok(to_complex(&linalg::range_basis(&s.map(|z| z.re))))
        } else {
            Ok(linalg::range_basis(&s))
        }
    })
}

fn spectral_adjoint(xh: &SpectralTensor) -> Result<SpectralTensor> {
    xh.map_slices(|_, s| Ok(s.adjoint()))
}

fn projection(xh: &SpectralTensor, c: &Tensor3, r: &Tensor3) -> Result<Projection> {
    let qc = spectral_range(&fft_mode3(c))?;
    let qr = spectral_range(&fft_mode3(&r.transpose()))?;
    let core = spectral_product(&spectral_product(&spectral_adjoint(&qc)?, xh)?, &qr)?;
    Ok(Projection { q_c: ifft_mode3(&qc)?, core: ifft_mode3(&core)?, q_r: ifft_mode3(&qr)? })
}

/// `tpinv(C) * X * tpinv(R)`.
pub fn cur_middle_optimal(x: &Tensor3, c: &Tensor3, r: &Tensor3) -> Result<Tensor3> {
    let left = spectral_pinv(&fft_mode3(c))?;
    let right = spectral_pinv(&fft_mode3(r))?;
    ifft_mode3(&spectral_product(&spectral_product(&left, &fft_mode3(x))?, &right)?)
}

/// `tpinv(X(p, q, :))`.
pub fn cur_middle_intersection(x: &Tensor3, p: &IndexSet, q: &IndexSet) -> Result<Tensor3> {
    crate::algebra::tpinv(&x.horizontal(p)?.lateral(q)?)
}

fn intersection_warnings(w: &Tensor3) -> Vec<String> {
    let spectrum = SingularSpectrum::of(w);
    (0..spectrum.n3())
        .filter_map(|k| {
            let sv = spectrum.slice(k);
            let (max, min) = (sv[0], sv[sv.len() - 1]);
            (min < NEAR_SINGULAR * max || max == 0.0).then(|| {
                format!("intersection spectral slice {} is near singular (sigma_min/sigma_max = {:e})", k + 1, min / max)
            })
        })
        .collect()
}

pub fn build_cur(x: &Tensor3, p: &IndexSet, q: &IndexSet, variant: MiddleVariant) -> Result<CurModel> {
    let c = x.lateral(q)?;
    let r = x.horizontal(p)?;
    let (u_mid, projection, warnings) = match variant {
        MiddleVariant::Optimal => {
            let xh = fft_mode3(x);
            let left = spectral_pinv(&fft_mode3(&c))?;
            let right = spectral_pinv(&fft_mode3(&r))?;
            let u_mid = ifft_mode3(&spectral_product(&spectral_product(&left, &xh)?, &right)?)?;
            (u_mid, Some(projection(&xh, &c, &r)?), Vec::new())
        }
        MiddleVariant::Intersection => {
            let w = x.horizontal(p)?.lateral(q)?;
            (crate::algebra::tpinv(&w)?, None, intersection_warnings(&w))
        }
    };
    Ok(CurModel { c, u_mid, r, p: p.clone(), q: q.clone(), middle_variant: variant, projection, warnings })
}

/// `‖X − C*U*R‖_F`.
pub fn cur_error(x: &Tensor3, model: &CurModel) -> Result<f64> {
    Ok(x.sub(&model.reconstruct()?)?.fro_norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorConstants {
    pub eta_p: f64,
    pub eta_q: f64,
}

/// `(1/I3) · maxᵢ ‖(Û_i(s, :))⁻¹‖₂²`, with the pseudoinverse when `|s| > R`.
pub fn eta(basis: &Tensor3, s: &IndexSet) -> Result<f64> {
    let (n1, r, n3) = basis.dims();
    s.check_within(n1, "error constant")?;
    if s.len() < r {
        return Err(Error::Shape { op: "eta", detail: format!("{} indices for a rank-{r} basis", s.len()) });
    }
    let uh = fft_mode3(basis);
    let rows = s.zero_based();
    let norms: Vec<f64> = uh
        .active_slices()
        .into_par_iter()
        .map(|k| {
            let real = is_real_slice(k, n3);
            if rows.len() == r && r <= EXPLICIT_INVERSE_MAX {
                Ok(linalg::spectral_norm(&selection_inverse(&uh.slice(k), &rows, real, k + 1)?))
            } else {
                let a = rows_of(&uh.slice(k), &rows);
                let sv = linalg::singular_values(&a);
                let smin = sv[r - 1];
                if !(smin > rows.len() as f64 * f64::EPSILON * sv[0]) {
                    return Err(Error::Singular { slice: k + 1, condition: sv[0] / smin });
                }
                Ok(1.0 / smin)
            }
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max).powi(2) / n3 as f64)
}

/// `η̃_p` from the left basis and horizontal indices, `η̃_q` from the
/// right basis and lateral indices.
pub fn error_constants(basis_u: &Tensor3, p: &IndexSet, basis_v: &Tensor3, q: &IndexSet) -> Result<ErrorConstants> {
    Ok(ErrorConstants { eta_p: eta(basis_u, p)?, eta_q: eta(basis_v, q)? })
}

/// Both sides of the CUR error bound and of the one-sided projector bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub rank: usize,
    pub constants: ErrorConstants,
    /// `Σ_i Σ_{t>R} (σ^i_t)²` over all spectral slices.
    pub tail: f64,
    /// `‖X − C*U*R‖²_F`.
    pub lhs: f64,
    /// `(η̃_p + η̃_q) · tail`.
    pub rhs: f64,
    pub pass: bool,
    /// `‖X − 𝒫*X‖²_F` with `𝒫` built from `U` and `p`.
    pub projector_lhs: f64,
    /// `η̃_p · tail`.
    pub projector_rhs: f64,
    pub projector_pass: bool,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.pass && self.projector_pass
    }
}

/// Evaluates the CUR bound for a model built with the optimal middle tensor
/// from indices selected on `factors`.
pub fn verify_bound(x: &Tensor3, factors: &TSvdFactors, model: &CurModel) -> Result<BoundReport> {
    verify_bound_with(x, factors, model, &SingularSpectrum::of(x))
}

/// [`verify_bound`] with a precomputed singular spectrum of `x`.
pub fn verify_bound_with(
    x: &Tensor3,
    factors: &TSvdFactors,
    model: &CurModel,
    spectrum: &SingularSpectrum,
) -> Result<BoundReport> {
    if model.middle_variant != MiddleVariant::Optimal {
        return Err(Error::Range("the bound applies to the optimal middle tensor".into()));
    }
    let constants = error_constants(&factors.u, &model.p, &factors.v, &model.q)?;
    let tail = spectrum.tail_energy(factors.rank);
    let lhs = cur_error(x, model)?.powi(2);
    let rhs = (constants.eta_p + constants.eta_q) * tail;
    let projected = build_projector(&factors.u, &model.p)?.apply(x)?;
    let projector_lhs = x.sub(&projected)?.fro_norm().powi(2);
    let projector_rhs = constants.eta_p * tail;
    let scale = x.fro_norm().powi(2);
    let within = |l: f64, r: f64| l <= r * (1.0 + BOUND_SLACK) + f64::EPSILON * scale;
    Ok(BoundReport {
        rank: factors.rank,
        constants,
        tail,
        lhs,
        rhs,
        pass: within(lhs, rhs),
        projector_lhs,
        projector_rhs,
        projector_pass: within(projector_lhs, projector_rhs),
    })
}
