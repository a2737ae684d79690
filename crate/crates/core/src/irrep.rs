//! Positive discrete series of SO↑(1,2) and its coverings, truncated to the
//! lowest `dim` states of the `K3` eigenbasis `|k,n>`.
//!
//! The three classical observables on the half-plane `(phi mod 2pi, p > 0)`,
//! `p`, `p cos phi` and `-p sin phi`, close under Poisson brackets into the
//! Lie algebra of SO↑(1,2); their quantum counterparts are the generators
//! `K3`, `K1`, `K2`. In a two-beam interference pattern with amplitudes
//! `a1, a2` and relative phase `phi`, `p = a1 a2 = sqrt(I1 I2)` so `K3`
//! measures the geometric mean of the two intensities, and `K1`, `K2` the
//! in-phase and quadrature interference terms.
//!
//! Matrix conventions (`omega` a unit phase, constant in `n`):
//!
//! ```text
//! K3 |k,n> = (k + n) |k,n>
//! K+ |k,n> = omega   sqrt((2k+n)(n+1)) |k,n+1>
//! K- |k,n> = omega^* sqrt((2k+n-1) n)  |k,n-1>
//! cos|k,n> = omega/4 f_{n+1} |k,n+1> + omega^*/4 f_n |k,n-1>
//! sin|k,n> = i omega/4 f_{n+1} |k,n+1> - i omega^*/4 f_n |k,n-1>
//! ```
//!
//! Truncation drops every coupling out of the `dim`-dimensional block, so
//! algebraic identities are only exact on an interior block.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::ln_gamma;

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Label of one positive-discrete-series irrep: Bargmann index `k > 0`
/// and the ladder phase `omega = exp(i omega_angle)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrrepParams {
    k: f64,
    omega_angle: f64,
}

/// Which group a given `k` can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupLabel {
    /// `k = 1, 2, ...`: a representation of SO↑(1,2) itself (and of all coverings).
    SoUp12,
    /// `k = 1/2, 3/2, ...`: needs the double covering SU(1,1).
    Su11,
    /// Any other `k > 0`: only the universal covering.
    UniversalCover,
}

impl IrrepParams {
    pub fn new(k: f64) -> Result<Self> {
        Self::with_omega(k, 0.0)
    }

    pub fn with_omega(k: f64, omega_angle: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(domain(format!("Bargmann index must be finite and > 0, got {k}")));
        }
        if !omega_angle.is_finite() {
            return Err(domain("omega angle must be finite"));
        }
        Ok(Self { k, omega_angle: omega_angle.rem_euclid(std::f64::consts::TAU) })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn omega_angle(&self) -> f64 {
        self.omega_angle
    }

    pub fn omega(&self) -> Complex64 {
        if self.omega_angle == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, self.omega_angle)
        }
    }

    /// Eigenvalue `k(1-k)` of the Casimir `K1^2 + K2^2 - K3^2`.
    pub fn casimir_eigenvalue(&self) -> f64 {
        self.k * (1.0 - self.k)
    }

    pub fn group_label(&self) -> GroupLabel {
        let twice = 2.0 * self.k;
        if (twice - twice.round()).abs() > 1e-12 {
            GroupLabel::UniversalCover
        } else if (twice.round() as i64) % 2 == 0 {
            GroupLabel::SoUp12
        } else {
            GroupLabel::Su11
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("Bargmann index must be finite and > 0, got {k}")))
    }
}

/// `|<k,n+1|K+|k,n>| = sqrt((2k+n)(n+1))`.
pub fn ladder_up_coeff(k: f64, n: usize) -> Result<f64> {
    check_k(k)?;
    let n = n as f64;
    Ok(((2.0 * k + n) * (n + 1.0)).sqrt())
}

/// `|<k,n-1|K-|k,n>| = sqrt((2k+n-1) n)`, zero on the lowest weight.
pub fn ladder_down_coeff(k: f64, n: usize) -> Result<f64> {
    check_k(k)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(((2.0 * k + (n - 1) as f64) * n as f64).sqrt())
}

/// Off-diagonal weight of the phase-cosine operator,
/// `f_n = sqrt(n(2k+n-1)) (1/(k+n) + 1/(k+n-1))`, with `f_0 = 0`.
pub fn f_coeff(k: f64, n: usize) -> Result<f64> {
    check_k(k)?;
    Ok(f_unchecked(k, n))
}

pub(crate) fn f_unchecked(k: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let m = (n - 1) as f64;
    let n = n as f64;
    (n * (2.0 * k + m)).sqrt() * (1.0 / (k + n) + 1.0 / (k + m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    K1,
    K2,
    K3,
    Kplus,
    Kminus,
    CosPhi,
    SinPhi,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 7] = [
        OperatorKind::K1,
        OperatorKind::K2,
        OperatorKind::K3,
        OperatorKind::Kplus,
        OperatorKind::Kminus,
        OperatorKind::CosPhi,
        OperatorKind::SinPhi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::K1 => "k1",
            OperatorKind::K2 => "k2",
            OperatorKind::K3 => "k3",
            OperatorKind::Kplus => "kplus",
            OperatorKind::Kminus => "kminus",
            OperatorKind::CosPhi => "cosphi",
            OperatorKind::SinPhi => "sinphi",
        }
    }

    pub fn is_hermitian(&self) -> bool {
        !matches!(self, OperatorKind::Kplus | OperatorKind::Kminus)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .or(match lower.as_str() {
                "cos" => Some(OperatorKind::CosPhi),
                "sin" => Some(OperatorKind::SinPhi),
                "k+" => Some(OperatorKind::Kplus),
                "k-" => Some(OperatorKind::Kminus),
                _ => None,
            })
            .ok_or_else(|| domain(format!("unknown operator kind '{s}'")))
    }
}

/// Truncated tridiagonal matrix of one generator or phase operator.
///
/// `lower[j] = <j+1|A|j>` and `upper[j] = <j|A|j+1>`; for the Hermitian kinds
/// `upper[j] = conj(lower[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagonalOperator {
    pub dim: usize,
    pub diagonal: Vec<f64>,
    pub lower: Vec<Complex64>,
    pub upper: Vec<Complex64>,
    pub kind: OperatorKind,
    pub params: IrrepParams,
}

/// Truncated matrix of `kind` in the representation `params`, on `n < dim`.
pub fn build_operator(kind: OperatorKind, params: IrrepParams, dim: usize) -> Result<TridiagonalOperator> {
    if dim < 2 {
        return Err(domain(format!("truncation dim must be >= 2, got {dim}")));
    }
    let k = params.k();
    let w = params.omega();
    let wc = w.conj();
    let mut diagonal = vec![0.0; dim];
    let mut lower = vec![Complex64::new(0.0, 0.0); dim - 1];
    let mut upper = lower.clone();
    for j in 0..dim - 1 {
        // c couples j -> j+1 under K+
        let c = ((2.0 * k + j as f64) * (j as f64 + 1.0)).sqrt();
        let f = f_unchecked(k, j + 1);
        let (lo, up) = match kind {
            OperatorKind::K3 => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            OperatorKind::Kplus => (w * c, Complex64::new(0.0, 0.0)),
            OperatorKind::Kminus => (Complex64::new(0.0, 0.0), wc * c),
            OperatorKind::K1 => (w * (0.5 * c), wc * (0.5 * c)),
            OperatorKind::K2 => (-I * w * (0.5 * c), I * wc * (0.5 * c)),
            OperatorKind::CosPhi => (w * (0.25 * f), wc * (0.25 * f)),
            OperatorKind::SinPhi => (I * w * (0.25 * f), -I * wc * (0.25 * f)),
        };
        lower[j] = lo;
        upper[j] = up;
    }
    if kind == OperatorKind::K3 {
        for (n, d) in diagonal.iter_mut().enumerate() {
            *d = k + n as f64;
        }
    }
    Ok(TridiagonalOperator { dim, diagonal, lower, upper, kind, params })
}

impl TridiagonalOperator {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        if row == col {
            Complex64::new(self.diagonal[row], 0.0)
        } else if row == col + 1 {
            self.lower[col]
        } else if col == row + 1 {
            self.upper[row]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `A v` on the truncated space; `v.len()` must equal `dim`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length does not match operator dim");
        let mut out: Vec<Complex64> = v.iter().zip(&self.diagonal).map(|(x, d)| x * d).collect();
        for j in 0..self.dim - 1 {
            out[j + 1] += self.lower[j] * v[j];
            out[j] += self.upper[j] * v[j + 1];
        }
        out
    }

    /// `<v|A|v>`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |r, c| self.entry(r, c))
    }

    /// Every nonzero entry as `(row, col, value)`, row-major.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(3 * self.dim);
        for r in 0..self.dim {
            let lo = r.saturating_sub(1);
            let hi = (r + 1).min(self.dim - 1);
            for c in lo..=hi {
                let v = self.entry(r, c);
                if v != Complex64::new(0.0, 0.0) {
                    out.push((r, c, v));
                }
            }
        }
        out
    }
}

/// Finite coefficient vector over `|k,n>`, `n < coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    pub coeffs: Vec<Complex64>,
    pub params: IrrepParams,
    /// Squared norm carried by the states `n >= coeffs.len()`.
    pub tail_bound: f64,
}

impl StateVector {
    /// The number eigenstate `|k,n>` in a `dim`-dimensional truncation.
    pub fn number_state(params: IrrepParams, n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(domain(format!("number state n={n} outside truncation dim {dim}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(Self { coeffs, params, tail_bound: 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.params.k() != other.params.k() {
            return Err(Error::Mismatch { left: self.params.k(), right: other.params.k() });
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum())
    }

    /// `<A>` and `<A^2> - <A>^2` for a Hermitian operator, evaluated with the
    /// truncated matrix. Only meaningful when the state lives well inside the truncation.
    pub fn mean_and_variance(&self, op: &TridiagonalOperator) -> (f64, f64) {
        let av = op.apply(&self.coeffs);
        let mean: f64 = self.coeffs.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum();
        let second: f64 = av.iter().map(|c| c.norm_sqr()).sum();
        (mean, second - mean * mean)
    }
}

/// `|k,n>` reached by raising the lowest weight, `omega^-n sqrt(Gamma(2k)/(n! Gamma(2k+n))) (K+)^n |k,0>`.
pub fn raised_state(params: IrrepParams, n: usize, dim: usize) -> Result<StateVector> {
    let kp = build_operator(OperatorKind::Kplus, params, dim)?;
    let mut v = StateVector::number_state(params, 0, dim)?.coeffs;
    for _ in 0..n {
        v = kp.apply(&v);
    }
    let k = params.k();
    let ln_norm = 0.5 * (ln_gamma(2.0 * k) - ln_gamma(n as f64 + 1.0) - ln_gamma(2.0 * k + n as f64));
    let phase = Complex64::from_polar(ln_norm.exp(), -(n as f64) * params.omega_angle());
    for c in &mut v {
        *c *= phase;
    }
    Ok(StateVector { coeffs: v, params, tail_bound: 0.0 })
}

fn interior_max(m: &CMatrix, size: usize) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..size {
        for c in 0..size {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

fn generators(params: IrrepParams, dim: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    Ok((
        build_operator(OperatorKind::K1, params, dim)?.to_dense(),
        build_operator(OperatorKind::K2, params, dim)?.to_dense(),
        build_operator(OperatorKind::K3, params, dim)?.to_dense(),
    ))
}

fn casimir_residual(params: IrrepParams, dim: usize) -> Result<CMatrix> {
    let (k1, k2, k3) = generators(params, dim)?;
    let q = params.casimir_eigenvalue();
    Ok(&k1 * &k1 + &k2 * &k2 - &k3 * &k3 - CMatrix::identity(dim, dim) * Complex64::new(q, 0.0))
}

/// Max entry of `K1^2 + K2^2 - K3^2 - k(1-k)` over rows/cols `0..dim-2`.
pub fn casimir_defect(params: IrrepParams, dim: usize) -> Result<f64> {
    if dim < 4 {
        return Err(domain(format!("casimir_defect needs dim >= 4, got {dim}")));
    }
    Ok(interior_max(&casimir_residual(params, dim)?, dim - 2))
}

/// Same residual over the whole truncated matrix, boundary rows included.
pub fn casimir_defect_full(params: IrrepParams, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(domain(format!("truncation dim must be >= 2, got {dim}")));
    }
    Ok(interior_max(&casimir_residual(params, dim)?, dim))
}

/// Interior residuals of `[K3,K1] - iK2`, `[K3,K2] + iK1`, `[K1,K2] + iK3`.
pub fn commutator_defect(params: IrrepParams, dim: usize) -> Result<(f64, f64, f64)> {
    if dim < 4 {
        return Err(domain(format!("commutator_defect needs dim >= 4, got {dim}")));
    }
    let (k1, k2, k3) = generators(params, dim)?;
    let size = dim - 2;
    let c31 = &k3 * &k1 - &k1 * &k3 - &k2 * I;
    let c32 = &k3 * &k2 - &k2 * &k3 + &k1 * I;
    let c12 = &k1 * &k2 - &k2 * &k1 + &k3 * I;
    Ok((interior_max(&c31, size), interior_max(&c32, size), interior_max(&c12, size)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: f64) -> IrrepParams {
        IrrepParams::new(k).unwrap()
    }

    #[test]
    fn ladder_examples() {
        assert!((ladder_up_coeff(1.0, 0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ladder_up_coeff(0.5, 0).unwrap(), 1.0);
        assert!((ladder_up_coeff(2.0, 3).unwrap() - 28f64.sqrt()).abs() < 1e-15);
        assert_eq!(ladder_down_coeff(1.0, 0).unwrap(), 0.0);
        assert_eq!(ladder_down_coeff(1.0, 1).unwrap(), ladder_up_coeff(1.0, 0).unwrap());
        assert_eq!(ladder_down_coeff(0.5, 2).unwrap(), 2.0);
        assert!(ladder_up_coeff(0.0, 1).is_err());
        assert!(ladder_down_coeff(-1.0, 1).is_err());
    }

    #[test]
    fn f_coeff_examples() {
        assert_eq!(f_coeff(1.0, 0).unwrap(), 0.0);
        assert!((f_coeff(1.0, 1).unwrap() - 2f64.sqrt() * 1.5).abs() < 1e-15);
        assert!((f_coeff(0.5, 1).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!(f_coeff(f64::NAN, 1).is_err());
        for n in 1..50 {
            assert!(f_coeff(0.3, n).unwrap() > 0.0);
        }
    }

    #[test]
    fn build_examples() {
        let k3 = build_operator(OperatorKind::K3, p(0.5), 3).unwrap();
        assert_eq!(k3.diagonal, vec![0.5, 1.5, 2.5]);
        assert!(k3.lower.iter().chain(&k3.upper).all(|c| c.norm() == 0.0));

        let cos = build_operator(OperatorKind::CosPhi, p(1.0), 2).unwrap();
        assert!((cos.upper[0].re - 0.530_330_085_889_910_6).abs() < 1e-15);
        assert_eq!(cos.upper[0], cos.lower[0]);
        assert_eq!(cos.diagonal, vec![0.0, 0.0]);

        for &k in &[0.3, 1.0, 2.5] {
            let km = build_operator(OperatorKind::Kminus, p(k), 12).unwrap();
            let ground = StateVector::number_state(p(k), 0, 12).unwrap();
            assert!(km.apply(&ground.coeffs).iter().all(|c| c.norm() == 0.0));
        }
        assert!(build_operator(OperatorKind::K1, p(1.0), 1).is_err());
    }

    #[test]
    fn adjointness_and_hermiticity_are_exact() {
        let params = IrrepParams::with_omega(0.8, 1.1).unwrap();
        for dim in [2, 5, 40] {
            let kp = build_operator(OperatorKind::Kplus, params, dim).unwrap().to_dense();
            let km = build_operator(OperatorKind::Kminus, params, dim).unwrap().to_dense();
            assert_eq!(kp.adjoint(), km);
            for kind in
                [OperatorKind::K1, OperatorKind::K2, OperatorKind::K3, OperatorKind::CosPhi, OperatorKind::SinPhi]
            {
                let m = build_operator(kind, params, dim).unwrap().to_dense();
                assert_eq!(m.adjoint(), m, "{kind}");
            }
        }
    }

    #[test]
    fn omega_one_structure() {
        let cos = build_operator(OperatorKind::CosPhi, p(0.7), 10).unwrap();
        assert!(cos.lower.iter().all(|c| c.im == 0.0));
        let sin = build_operator(OperatorKind::SinPhi, p(0.7), 10).unwrap();
        assert!(sin.lower.iter().all(|c| c.re == 0.0));
        for (j, c) in cos.upper.iter().enumerate() {
            assert_eq!(c.re, f_coeff(0.7, j + 1).unwrap() / 4.0);
        }
    }

    #[test]
    fn casimir_examples() {
        assert!(casimir_defect(p(1.0), 50).unwrap() < 1e-10);
        assert!(casimir_defect(p(0.5), 50).unwrap() < 1e-10);
        // boundary rows break the identity by O(dim)
        let full = casimir_defect_full(p(1.0), 50).unwrap();
        assert!(full > 10.0, "boundary defect {full}");
        assert!(casimir_defect(p(1.0), 3).is_err());
    }

    #[test]
    fn commutator_examples() {
        for k in [1.0, 0.37] {
            let (a, b, c) = commutator_defect(p(k), 30).unwrap();
            assert!(a < 1e-12 && b < 1e-12 && c < 1e-12, "k={k}: {a} {b} {c}");
        }
        assert!(matches!(commutator_defect(p(1.0), 2), Err(Error::Domain(_))));
        let (a, b, c) = commutator_defect(IrrepParams::with_omega(1.3, 0.4).unwrap(), 30).unwrap();
        assert!(a < 1e-12 && b < 1e-12 && c < 1e-12);
    }

    #[test]
    fn cos_phi_matches_symmetrised_product() {
        for &(k, w) in &[(0.5, 0.0), (1.0, 0.0), (0.25, 2.0)] {
            let params = IrrepParams::with_omega(k, w).unwrap();
            let dim = 40;
            let k1 = build_operator(OperatorKind::K1, params, dim).unwrap().to_dense();
            let k2 = build_operator(OperatorKind::K2, params, dim).unwrap().to_dense();
            let k3inv = CMatrix::from_fn(dim, dim, |r, c| {
                if r == c {
                    Complex64::new(1.0 / (k + r as f64), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let cos = (&k3inv * &k1 + &k1 * &k3inv) * Complex64::new(0.5, 0.0);
            let sin = (&k3inv * &k2 + &k2 * &k3inv) * Complex64::new(-0.5, 0.0);
            let cos_b = build_operator(OperatorKind::CosPhi, params, dim).unwrap().to_dense();
            let sin_b = build_operator(OperatorKind::SinPhi, params, dim).unwrap().to_dense();
            assert!(interior_max(&(cos - cos_b), dim - 2) < 1e-14);
            assert!(interior_max(&(sin - sin_b), dim - 2) < 1e-14);
        }
    }

    #[test]
    fn raising_reproduces_number_states() {
        for &(k, w) in &[(0.5, 0.0), (1.0, 0.0), (0.37, 0.9)] {
            let params = IrrepParams::with_omega(k, w).unwrap();
            for n in 0..=30 {
                let v = raised_state(params, n, 35).unwrap();
                let target = StateVector::number_state(params, n, 35).unwrap();
                let err: f64 = v.coeffs.iter().zip(&target.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(err < 1e-12, "k={k} n={n} err={err}");
            }
        }
    }

    #[test]
    fn group_labels() {
        assert_eq!(p(1.0).group_label(), GroupLabel::SoUp12);
        assert_eq!(p(3.0).group_label(), GroupLabel::SoUp12);
        assert_eq!(p(0.5).group_label(), GroupLabel::Su11);
        assert_eq!(p(1.5).group_label(), GroupLabel::Su11);
        assert_eq!(p(0.32).group_label(), GroupLabel::UniversalCover);
    }

    #[test]
    fn kind_parsing() {
        for kind in OperatorKind::ALL {
            assert_eq!(kind.name().parse::<OperatorKind>().unwrap(), kind);
        }
        assert_eq!("COS".parse::<OperatorKind>().unwrap(), OperatorKind::CosPhi);
        assert!("k4".parse::<OperatorKind>().is_err());
    }
}
