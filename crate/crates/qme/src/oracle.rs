//! Dense brute-force reference implementations at small system size:
//! Jordan-Wigner fermion matrices, vectorized superoperators, dense steady
//! states and spectra, and a locality-bound evolution check.
//!
//! Everything here works on explicit 2^L x 2^L matrices and is deliberately
//! independent of the generator builders, so agreement between the two
//! routes is meaningful. Vectorization is column-stacking, for which
//! A rho B maps to (B^T kron A) vec(rho).

use crate::lattice::{lieb_robinson_velocity, ChainSpec, SubsystemWindow};
use crate::{C64, CMatrix, CVector, Error, RMatrix, Result};

/// Largest chain length for dense operator construction.
pub const MAX_OPERATOR_SITES: usize = 6;
/// Largest chain length for dense superoperators (4^L-dimensional).
pub const MAX_SUPEROP_SITES: usize = 4;

/// Dense annihilation operators a_1 .. a_L from the Jordan-Wigner chain.
pub struct FermionBasis {
    pub l: usize,
    annihilators: Vec<CMatrix>,
}

/// Builds the Jordan-Wigner representation on L sites; a_j carries a string
/// of Pauli Z on sites before j.
pub fn jordan_wigner(l: usize) -> Result<FermionBasis> {
    if l == 0 || l > MAX_OPERATOR_SITES {
        return Err(Error::OracleTooLarge { max: MAX_OPERATOR_SITES, got: l });
    }
    let a1 = CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
    );
    let z = CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    );
    let id2 = CMatrix::identity(2, 2);
    let mut annihilators = Vec::with_capacity(l);
    for j in 0..l {
        let mut op = CMatrix::identity(1, 1);
        for k in 0..l {
            let factor = if k < j {
                &z
            } else if k == j {
                &a1
            } else {
                &id2
            };
            op = op.kronecker(factor);
        }
        annihilators.push(op);
    }
    Ok(FermionBasis { l, annihilators })
}

impl FermionBasis {
    /// Hilbert-space dimension 2^L.
    pub fn dim(&self) -> usize {
        1 << self.l
    }

    /// Annihilation operator for 1-indexed site j.
    pub fn annihilation(&self, site: usize) -> &CMatrix {
        &self.annihilators[site - 1]
    }

    /// Majorana operators w_1 .. w_{2L} with w_{2j-1} = a_j + a_j^dag and
    /// w_{2j} = i (a_j - a_j^dag).
    pub fn majoranas(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(2 * self.l);
        for a in &self.annihilators {
            let adj = a.adjoint();
            out.push(a + &adj);
            out.push((a - &adj) * C64::new(0.0, 1.0));
        }
        out
    }

    /// Many-body Hamiltonian sum h_ij a_i^dag a_j from a single-particle matrix.
    pub fn many_body_hamiltonian(&self, h: &RMatrix) -> CMatrix {
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for i in 0..self.l {
            for j in 0..self.l {
                if h[(i, j)] != 0.0 {
                    out += (self.annihilators[i].adjoint() * &self.annihilators[j])
                        * C64::new(h[(i, j)], 0.0);
                }
            }
        }
        out
    }
}

/// Left-multiplication superoperator: vec(A rho).
pub fn spre(a: &CMatrix) -> CMatrix {
    CMatrix::identity(a.nrows(), a.ncols()).kronecker(a)
}

/// Right-multiplication superoperator: vec(rho B).
pub fn spost(b: &CMatrix) -> CMatrix {
    b.transpose().kronecker(&CMatrix::identity(b.nrows(), b.ncols()))
}

/// Two-sided superoperator: vec(A rho B).
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    b.transpose().kronecker(a)
}

fn check_superop_size(dim: usize) -> Result<()> {
    let max_dim = 1usize << MAX_SUPEROP_SITES;
    if dim > max_dim {
        return Err(Error::OracleTooLarge { max: max_dim, got: dim });
    }
    Ok(())
}

/// Vectorized GKSL generator -i[H, .] + sum_k (l_k . l_k^dag - {l_k^dag l_k, .}/2).
pub fn superoperator_from_lindblad(h: &CMatrix, ops: &[CMatrix]) -> Result<CMatrix> {
    let dim = h.nrows();
    check_superop_size(dim)?;
    let mut gen = (spre(h) - spost(h)) * C64::new(0.0, -1.0);
    for op in ops {
        if op.nrows() != dim || op.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: op.nrows() });
        }
        let norm2 = op.adjoint() * op;
        gen += sandwich(op, &op.adjoint())
            - (spre(&norm2) + spost(&norm2)) * C64::new(0.5, 0.0);
    }
    Ok(gen)
}

/// Vectorized generator of the Majorana kernel form
/// -i[H, .] + sum_mn 2 M_mn (w_m . w_n - {w_n w_m, .}/2).
pub fn superoperator_from_m(h: &CMatrix, m: &CMatrix, w: &[CMatrix]) -> Result<CMatrix> {
    let dim = h.nrows();
    check_superop_size(dim)?;
    if m.nrows() != w.len() || m.ncols() != w.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), got: m.nrows() });
    }
    let mut gen = (spre(h) - spost(h)) * C64::new(0.0, -1.0);
    for mi in 0..w.len() {
        for ni in 0..w.len() {
            let coeff = m[(mi, ni)] * 2.0;
            if coeff.norm() == 0.0 {
                continue;
            }
            let prod = &w[ni] * &w[mi];
            gen += (sandwich(&w[mi], &w[ni])
                - (spre(&prod) + spost(&prod)) * C64::new(0.5, 0.0))
                * coeff;
        }
    }
    Ok(gen)
}

/// One self-correlated coupling group for the direct frequency-pair
/// assembly: dense frequency components with their spectral weights.
pub struct FrequencyGroup {
    /// Dense frequency component operators A(w_b).
    pub ops: Vec<CMatrix>,
    /// Spectral weight gamma evaluated at each component frequency.
    pub gammas: Vec<f64>,
    /// Principal-value weight eta at each component frequency.
    pub etas: Vec<f64>,
}

/// Direct dense assembly of the frequency-pair master equation: for each
/// group the double sum over components (b, b') with coefficient
/// (gamma_b + gamma_b')/2 + i (eta_b - eta_b') multiplying
/// A_b . A_b'^dag - {A_b'^dag A_b, .}/2. This is the reference route for
/// the Redfield kernel; it never touches the M-matrix construction.
pub fn superoperator_from_frequency_pairs(
    h: &CMatrix,
    groups: &[FrequencyGroup],
) -> Result<CMatrix> {
    let dim = h.nrows();
    check_superop_size(dim)?;
    let mut gen = (spre(h) - spost(h)) * C64::new(0.0, -1.0);
    for group in groups {
        for (b, ab) in group.ops.iter().enumerate() {
            for (bp, abp) in group.ops.iter().enumerate() {
                let coeff = C64::new(
                    0.5 * (group.gammas[b] + group.gammas[bp]),
                    group.etas[b] - group.etas[bp],
                );
                let abp_dag = abp.adjoint();
                let prod = &abp_dag * ab;
                gen += (sandwich(ab, &abp_dag)
                    - (spre(&prod) + spost(&prod)) * C64::new(0.5, 0.0))
                    * coeff;
            }
        }
    }
    Ok(gen)
}

/// Steady state of a dense generator: the unique trace-one Hermitian null
/// vector, found by SVD. Rejects degenerate null spaces.
pub fn dense_steady_state(gen: &CMatrix) -> Result<CMatrix> {
    let dim2 = gen.nrows();
    let n = (dim2 as f64).sqrt().round() as usize;
    if n * n != dim2 {
        return Err(Error::DimensionMismatch { expected: n * n, got: dim2 });
    }
    let svd = gen.clone().svd(false, true);
    let sv = &svd.singular_values;
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut idx: Vec<usize> = (0..sv.len()).collect();
    idx.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let scale = sv[idx[dim2 - 1]].max(1.0);
    let gap = sv[idx[1]] / scale;
    if sv[idx[0]] / scale > 1e-10 || gap < 1e-10 {
        return Err(Error::DegenerateNullSpace { gap });
    }
    let null: CVector = v_t.row(idx[0]).adjoint();
    let mut rho = CMatrix::from_column_slice(n, n, null.as_slice());
    rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let trace: C64 = rho.trace();
    if trace.norm() < 1e-12 {
        return Err(Error::DegenerateNormalization(
            "null vector has vanishing trace".to_string(),
        ));
    }
    rho /= trace;
    // physical steady states are positive; tolerate null-space roundoff only
    let min_eig = rho
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -1e-10 {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: min_eig });
    }
    Ok(rho)
}

/// Majorana two-point matrix W_mn = tr(rho w_m w_n) of a dense state.
pub fn covariance_from_state(rho: &CMatrix, w: &[CMatrix]) -> CMatrix {
    let k = w.len();
    CMatrix::from_fn(k, k, |m, n| (rho * &w[m] * &w[n]).trace())
}

/// Full eigenvalue set of a dense superoperator.
pub fn liouvillian_eigenvalues(gen: &CMatrix) -> CVector {
    gen.clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur always yields eigenvalues")
}

/// Action of a vectorized generator on a density matrix.
pub fn apply_superoperator(gen: &CMatrix, rho: &CMatrix) -> CMatrix {
    let n = rho.nrows();
    let v = CVector::from_column_slice(rho.as_slice());
    let out = gen * v;
    CMatrix::from_column_slice(n, n, out.as_slice())
}

/// Result of one locality-bound evaluation.
#[derive(Debug, Clone, Copy)]
pub struct LocalityCheck {
    /// Spectral norm of the difference between full and windowed Heisenberg
    /// evolution of the observable.
    pub deviation: f64,
    /// Propagation bound |X| * |O| * (2 zeta0 t)^l / l! with l the distance
    /// from the observable support to the window complement.
    pub bound: f64,
}

/// Compares Heisenberg evolution of an observable under the full chain with
/// evolution under the chain restricted to a window, against the
/// propagation bound at velocity 4J.
pub fn lieb_robinson_check(
    spec: &ChainSpec,
    support: &[usize],
    window: &SubsystemWindow,
    observable: &CMatrix,
    t: f64,
) -> Result<LocalityCheck> {
    if spec.l > MAX_OPERATOR_SITES {
        return Err(Error::OracleTooLarge { max: MAX_OPERATOR_SITES, got: spec.l });
    }
    for &x in support {
        if !window.contains(x) {
            return Err(Error::SiteOutsideWindow {
                site: x,
                first: window.first,
                last: window.last,
            });
        }
    }
    let basis = jordan_wigner(spec.l)?;
    let dim = basis.dim();
    if observable.nrows() != dim || observable.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: observable.nrows() });
    }

    let h_full = crate::lattice::build_chain_hamiltonian(spec);
    let mut h_window = RMatrix::zeros(spec.l, spec.l);
    for i in window.sites() {
        for j in window.sites() {
            h_window[(i - 1, j - 1)] = h_full[(i - 1, j - 1)];
        }
    }

    let evolved_full = heisenberg(&basis.many_body_hamiltonian(&h_full), observable, t);
    let evolved_window = heisenberg(&basis.many_body_hamiltonian(&h_window), observable, t);
    let deviation = spectral_norm(&(evolved_full - evolved_window));

    // distance from the support to the nearest site outside the window
    let mut l_dist = usize::MAX;
    for &x in support {
        if window.first > 1 {
            l_dist = l_dist.min(x - (window.first - 1));
        }
        if window.last < spec.l {
            l_dist = l_dist.min(window.last + 1 - x);
        }
    }
    let bound = if l_dist == usize::MAX {
        f64::INFINITY
    } else {
        let zeta0 = lieb_robinson_velocity(spec);
        let mut b = support.len() as f64 * spectral_norm(observable);
        for k in 1..=l_dist {
            b *= 2.0 * zeta0 * t.abs() / k as f64;
        }
        b
    };
    Ok(LocalityCheck { deviation, bound })
}

/// U_t^dag O U_t with U_t = exp(-i H t), via eigendecomposition of H.
fn heisenberg(h: &CMatrix, observable: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let dim = h.nrows();
    let phases = CMatrix::from_fn(dim, dim, |i, k| {
        if i == k {
            C64::new(0.0, -eig.eigenvalues[i] * t).exp()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    u.adjoint() * observable * u
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}
