//! Bosonic realisations: the two-mode generators
//! `K3 = (N1 + N2 + 1)/2`, `K+ = a1+ a2+`, `K- = a1 a2` on the truncated Fock
//! space `m1, m2 < M`, and the Dirac-type square root of a single-mode number operator.
//!
//! The two-mode space splits into sectors of fixed `m1 - m2`; the sector with
//! `|m1 - m2| = Delta` carries the positive-discrete-series irrep with
//! `k = 1/2 + Delta/2` and `n = min(m1, m2)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::irrep::{build_operator, ladder_down_coeff, ladder_up_coeff, CMatrix, IrrepParams, OperatorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoModeKind {
    K3a,
    KplusA,
    KminusA,
    N1,
    N2,
}

/// Real sparse matrix on the `M^2`-dimensional space, basis index `m1 * M + m2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoModeOperator {
    pub dim_per_mode: usize,
    pub kind: TwoModeKind,
    entries: BTreeMap<(usize, usize), f64>,
}

impl TwoModeOperator {
    pub fn index(&self, m1: usize, m2: usize) -> usize {
        m1 * self.dim_per_mode + m2
    }

    pub fn dim(&self) -> usize {
        self.dim_per_mode * self.dim_per_mode
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (&(r, c), &x) in &self.entries {
            out[r] += v[c] * x;
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (&(r, c), &x) in &self.entries {
            m[(r, c)] = Complex64::new(x, 0.0);
        }
        m
    }
}

pub fn build_two_mode(kind: TwoModeKind, m: usize) -> Result<TwoModeOperator> {
    if m < 2 {
        return Err(domain(format!("two-mode truncation needs M >= 2, got {m}")));
    }
    let mut entries = BTreeMap::new();
    let idx = |a: usize, b: usize| a * m + b;
    for m1 in 0..m {
        for m2 in 0..m {
            let col = idx(m1, m2);
            let (f1, f2) = (m1 as f64, m2 as f64);
            match kind {
                TwoModeKind::K3a => {
                    entries.insert((col, col), 0.5 * (f1 + f2 + 1.0));
                }
                TwoModeKind::N1 if m1 > 0 => {
                    entries.insert((col, col), f1);
                }
                TwoModeKind::N2 if m2 > 0 => {
                    entries.insert((col, col), f2);
                }
                TwoModeKind::KplusA if m1 + 1 < m && m2 + 1 < m => {
                    entries.insert((idx(m1 + 1, m2 + 1), col), ((f1 + 1.0) * (f2 + 1.0)).sqrt());
                }
                TwoModeKind::KminusA if m1 > 0 && m2 > 0 => {
                    entries.insert((idx(m1 - 1, m2 - 1), col), (f1 * f2).sqrt());
                }
                _ => {}
            }
        }
    }
    Ok(TwoModeOperator { dim_per_mode: m, kind, entries })
}

struct Generators {
    m: usize,
    k3: TwoModeOperator,
    kp: TwoModeOperator,
    km: TwoModeOperator,
}

impl Generators {
    fn new(m: usize) -> Result<Self> {
        Ok(Self {
            m,
            k3: build_two_mode(TwoModeKind::K3a, m)?,
            kp: build_two_mode(TwoModeKind::KplusA, m)?,
            km: build_two_mode(TwoModeKind::KminusA, m)?,
        })
    }

    fn k1(&self, v: &[Complex64]) -> Vec<Complex64> {
        let (a, b) = (self.kp.apply(v), self.km.apply(v));
        a.iter().zip(&b).map(|(x, y)| (x + y) * 0.5).collect()
    }

    fn k2(&self, v: &[Complex64]) -> Vec<Complex64> {
        let (a, b) = (self.kp.apply(v), self.km.apply(v));
        a.iter().zip(&b).map(|(x, y)| (x - y) * Complex64::new(0.0, -0.5)).collect()
    }

    fn k3(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.k3.apply(v)
    }

    fn basis(&self, i: usize) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); self.m * self.m];
        e[i] = Complex64::new(1.0, 0.0);
        e
    }
}

type Op<'a> = &'a dyn Fn(&[Complex64]) -> Vec<Complex64>;

fn commutator_column(a: Op, b: Op, v: &[Complex64]) -> Vec<Complex64> {
    let ab = a(&b(v));
    let ba = b(&a(v));
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

fn commutator_residuals(m: usize, interior_only: bool) -> Result<(f64, f64, f64)> {
    let g = Generators::new(m)?;
    let limit = if interior_only { m - 2 } else { m };
    let inside = |i: usize| i / m < limit && i % m < limit;
    let (k1, k2, k3) = (|v: &[Complex64]| g.k1(v), |v: &[Complex64]| g.k2(v), |v: &[Complex64]| g.k3(v));
    let i = Complex64::new(0.0, 1.0);
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for col in (0..m * m).filter(|&c| inside(c)) {
        let e = g.basis(col);
        let (v1, v2, v3) = (k1(&e), k2(&e), k3(&e));
        let c31 = commutator_column(&k3, &k1, &e);
        let c32 = commutator_column(&k3, &k2, &e);
        let c12 = commutator_column(&k1, &k2, &e);
        for row in (0..m * m).filter(|&r| inside(r)) {
            worst.0 = worst.0.max((c31[row] - i * v2[row]).norm());
            worst.1 = worst.1.max((c32[row] + i * v1[row]).norm());
            worst.2 = worst.2.max((c12[row] + i * v3[row]).norm());
        }
    }
    Ok(worst)
}

/// Residuals of `[K3,K1] - iK2`, `[K3,K2] + iK1`, `[K1,K2] + iK3` over states with
/// both mode indices `<= M-3`.
pub fn two_mode_commutator_defect(m: usize) -> Result<(f64, f64, f64)> {
    if m < 4 {
        return Err(domain(format!("two_mode_commutator_defect needs M >= 4, got {m}")));
    }
    commutator_residuals(m, true)
}

/// The same residuals over the whole truncated space, boundary included.
pub fn two_mode_commutator_defect_full(m: usize) -> Result<(f64, f64, f64)> {
    commutator_residuals(m, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SectorState {
    pub m1: usize,
    pub m2: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sector {
    /// `m1 - m2`.
    pub difference: i64,
    pub delta: usize,
    pub k: f64,
    /// Ordered by `n`.
    pub states: Vec<SectorState>,
    /// `max |K3 - (n + k)|` over the sector.
    pub k3_defect: f64,
    /// `max` deviation of the `K+`, `K-` matrix elements from the irrep ladder coefficients.
    pub ladder_defect: f64,
}

/// Split the truncated two-mode space into sectors of fixed `m1 - m2`
/// (ordered `0, +1, -1, +2, -2, ...`) and check each against the irrep with
/// `k = 1/2 + |m1 - m2|/2`.
pub fn irrep_decomposition(m: usize) -> Result<Vec<Sector>> {
    let k3 = build_two_mode(TwoModeKind::K3a, m)?;
    let kp = build_two_mode(TwoModeKind::KplusA, m)?;
    let km = build_two_mode(TwoModeKind::KminusA, m)?;
    let mut sectors = Vec::new();
    for delta in 0..m {
        let signs: &[i64] = if delta == 0 { &[1] } else { &[1, -1] };
        for &sign in signs {
            let k = 0.5 + delta as f64 / 2.0;
            let states: Vec<SectorState> = (0..m - delta)
                .map(|n| {
                    if sign > 0 {
                        SectorState { m1: n + delta, m2: n, n }
                    } else {
                        SectorState { m1: n, m2: n + delta, n }
                    }
                })
                .collect();
            let mut k3_defect = 0.0f64;
            let mut ladder_defect = 0.0f64;
            for (j, s) in states.iter().enumerate() {
                let i = k3.index(s.m1, s.m2);
                k3_defect = k3_defect.max((k3.entry(i, i) - (s.n as f64 + k)).abs());
                if let Some(next) = states.get(j + 1) {
                    let up = k3.index(next.m1, next.m2);
                    ladder_defect = ladder_defect
                        .max((kp.entry(up, i) - ladder_up_coeff(k, s.n)?).abs())
                        .max((km.entry(i, up) - ladder_down_coeff(k, next.n)?).abs());
                }
            }
            sectors.push(Sector { difference: sign * delta as i64, delta, k, states, k3_defect, ladder_defect });
        }
    }
    Ok(sectors)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorSummary {
    pub delta: usize,
    pub k: f64,
    /// Number of sectors carrying this `k` (2 for `Delta > 0`).
    pub multiplicity: usize,
    pub states_per_copy: usize,
    pub max_defect: f64,
}

pub fn sector_table(sectors: &[Sector]) -> Vec<SectorSummary> {
    let mut table: Vec<SectorSummary> = Vec::new();
    for s in sectors {
        let defect = s.k3_defect.max(s.ladder_defect);
        match table.iter_mut().find(|t| t.delta == s.delta) {
            Some(t) => {
                t.multiplicity += 1;
                t.max_defect = t.max_defect.max(defect);
            }
            None => table.push(SectorSummary {
                delta: s.delta,
                k: s.k,
                multiplicity: 1,
                states_per_copy: s.states.len(),
                max_defect: defect,
            }),
        }
    }
    table
}

/// Largest `|<i|K+-|j>|` between states of different sectors.
pub fn cross_sector_leak(m: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for kind in [TwoModeKind::KplusA, TwoModeKind::KminusA] {
        let op = build_two_mode(kind, m)?;
        for (r, c, v) in op.entries() {
            let diff = |i: usize| (i / m) as i64 - (i % m) as i64;
            if diff(r) != diff(c) {
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// `max |K1^2 + K2^2 - K3^2 - k(1-k)|` over the column of each sector state with
/// `n <= len - 2`, every row of the full space included.
pub fn sector_casimir_defect(m: usize) -> Result<f64> {
    let g = Generators::new(m)?;
    let mut worst = 0.0f64;
    for sector in irrep_decomposition(m)? {
        let q = sector.k * (1.0 - sector.k);
        let interior = sector.states.len().saturating_sub(1);
        for s in &sector.states[..interior] {
            let col = g.k3.index(s.m1, s.m2);
            let e = g.basis(col);
            let (a, b, c) = (g.k1(&g.k1(&e)), g.k2(&g.k2(&e)), g.k3(&g.k3(&e)));
            for row in 0..m * m {
                let target = if row == col { q } else { 0.0 };
                worst = worst.max((a[row] + b[row] - c[row] - target).norm());
            }
        }
    }
    Ok(worst)
}

/// Each sector's `K3`, `K+`, `K-` re-indexed by `n`, compared entrywise with
/// the irrep matrices of the same `k` and size.
pub fn sector_equivalence(m: usize) -> Result<f64> {
    let two = [
        (build_two_mode(TwoModeKind::K3a, m)?, OperatorKind::K3),
        (build_two_mode(TwoModeKind::KplusA, m)?, OperatorKind::Kplus),
        (build_two_mode(TwoModeKind::KminusA, m)?, OperatorKind::Kminus),
    ];
    let mut worst = 0.0f64;
    for sector in irrep_decomposition(m)? {
        let len = sector.states.len();
        if len < 2 {
            continue;
        }
        let params = IrrepParams::new(sector.k)?;
        for (op, kind) in &two {
            let reference = build_operator(*kind, params, len)?;
            for (a, sa) in sector.states.iter().enumerate() {
                for (b, sb) in sector.states.iter().enumerate() {
                    let v = op.entry(op.index(sa.m1, sa.m2), op.index(sb.m1, sb.m2));
                    worst = worst.max((Complex64::new(v, 0.0) - reference.entry(a, b)).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracCheck {
    /// Interior `max |B^2 - diag(N, N+1)|`.
    pub defect: f64,
    /// Rayleigh quotient of `B` on `(|n>, |n-1>)/sqrt(2)`, for `n < M`.
    pub eigenvalues: Vec<f64>,
    pub max_eigen_residual: f64,
    pub eigen_ok: bool,
}

/// `B = [[0, b+], [b, 0]]` on `C^M (+) C^M`, whose square is `diag(N, N+1)`;
/// `(|n>, |n-1>)` is an eigenvector of `B` with eigenvalue `sqrt(n)`.
pub fn dirac_sqrt_check(m: usize) -> Result<DiracCheck> {
    if m < 3 {
        return Err(domain(format!("dirac_sqrt_check needs M >= 3, got {m}")));
    }
    let size = 2 * m;
    let mut b = DMatrix::<f64>::zeros(size, size);
    for n in 1..m {
        let s = (n as f64).sqrt();
        // upper-right block b+: <n| b+ |n-1> ; lower-left block b: <n-1| b |n>
        b[(n, m + n - 1)] = s;
        b[(m + n - 1, n)] = s;
    }
    let sq = &b * &b;
    let boundary = size - 1;
    let mut defect = 0.0f64;
    for r in 0..size {
        for c in 0..size {
            if r == boundary || c == boundary {
                continue;
            }
            let target = match (r == c, r < m) {
                (true, true) => r as f64,
                (true, false) => (r - m) as f64 + 1.0,
                _ => 0.0,
            };
            defect = defect.max((sq[(r, c)] - target).abs());
        }
    }
    let mut eigenvalues = Vec::with_capacity(m);
    let mut max_eigen_residual = 0.0f64;
    for n in 0..m {
        let mut v = nalgebra::DVector::<f64>::zeros(size);
        v[n] = 1.0;
        if n > 0 {
            v[m + n - 1] = 1.0;
        }
        v /= v.norm();
        let bv = &b * &v;
        let lambda = v.dot(&bv);
        max_eigen_residual = max_eigen_residual.max((bv - &v * (n as f64).sqrt()).norm());
        eigenvalues.push(lambda);
    }
    let eigen_ok = max_eigen_residual < 1e-12
        && eigenvalues.iter().enumerate().all(|(n, l)| (l - (n as f64).sqrt()).abs() < 1e-12);
    Ok(DiracCheck { defect, eigenvalues, max_eigen_residual, eigen_ok })
}
