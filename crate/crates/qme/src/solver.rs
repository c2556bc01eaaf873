//! Steady states and spectra of quadratic Liouvillians.
//!
//! A generator with quadratic Hamiltonian H_S = sum H_mn w_m w_n and
//! Majorana kernel M evolves the two-point matrix W_mn = tr(w_m w_n rho)
//! autonomously. Writing W = I + iS with S real antisymmetric, the steady
//! state solves the real Lyapunov equation
//!   X S + S X^T = 8 Im M,   X = 4 Im H - 4 Re M.
//! The assembly was fixed by expanding the adjoint action of the generator
//! on quadratic monomials and is pinned here by dense-oracle tests at
//! small L. Eigenvalues of X are -2 beta_j, where the rapidities beta_j
//! (with nonnegative real part for relaxing dynamics) generate the full
//! Liouvillian spectrum as -2 sum_{j in S} beta_j over subsets S.
//!
//! The same data is packaged as the 4L x 4L structure matrix A, whose
//! spectrum is the paired set {+-beta_j}; it is exposed for spectral
//! cross-checks. The production solve runs on X directly: real Schur
//! reduction plus quasi-triangular back-substitution, O(L^3).

use crate::builders::GeneratorM;
use crate::{C64, CMatrix, Error, RMatrix, Result};

/// Majorana coefficient matrix H with H_S = sum_mn H_mn w_m w_n
/// reproducing sum_ij h_ij a_i^dag a_j up to an additive constant.
/// Output is purely imaginary, antisymmetric, Hermitian.
pub fn hamiltonian_to_majorana(h: &RMatrix) -> Result<CMatrix> {
    let l = h.nrows();
    if h.ncols() != l {
        return Err(Error::DimensionMismatch { expected: l, got: h.ncols() });
    }
    let scale = h.amax().max(1.0);
    let asym = (h - h.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotHermitian { asymmetry: asym / scale });
    }
    let mut out = CMatrix::zeros(2 * l, 2 * l);
    for i in 0..l {
        for j in 0..l {
            let v = 0.25 * h[(i, j)];
            if v != 0.0 {
                out[(2 * i, 2 * j + 1)] += C64::new(0.0, -v);
                out[(2 * i + 1, 2 * j)] += C64::new(0.0, v);
            }
        }
    }
    Ok(out)
}

/// 4L x 4L antisymmetric structure matrix of a quadratic generator.
pub struct StructureMatrix {
    pub a: CMatrix,
}

fn validate_quadratic_inputs(hmaj: &CMatrix, m: &CMatrix) -> Result<usize> {
    let dim = hmaj.nrows();
    if hmaj.ncols() != dim || m.nrows() != dim || m.ncols() != dim || dim % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
    }
    let h_scale = hmaj.camax().max(1e-300);
    if (hmaj + hmaj.transpose()).camax() > 1e-10 * h_scale.max(1.0)
        || (hmaj - hmaj.adjoint()).camax() > 1e-10 * h_scale.max(1.0)
    {
        return Err(Error::NotHermitian {
            asymmetry: (hmaj - hmaj.adjoint()).camax() / h_scale,
        });
    }
    let m_scale = m.camax().max(1e-300);
    let m_asym = (m - m.adjoint()).camax();
    if m_asym > 1e-10 * m_scale.max(1e-12) {
        return Err(Error::NotHermitian { asymmetry: m_asym / m_scale });
    }
    Ok(dim)
}

/// Assembles the structure matrix from the Majorana Hamiltonian and the
/// kernel M. With 0-indexed p, q < 2L the nonzero entries are
/// A[2p, 2q] = A[2p+1, 2q+1] = -2i H_pq, A[2p, 2q+1] = i (M_qp + M_pq),
/// A[2p+1, 2q] = -i (M_pq + M_qp).
pub fn build_structure_matrix(hmaj: &CMatrix, gen: &GeneratorM) -> Result<StructureMatrix> {
    let dim = validate_quadratic_inputs(hmaj, &gen.m)?;
    let mut a = CMatrix::zeros(2 * dim, 2 * dim);
    let two_i = C64::new(0.0, 2.0);
    let i_unit = C64::new(0.0, 1.0);
    for p in 0..dim {
        for q in 0..dim {
            let h_pq = hmaj[(p, q)];
            let m_sym = gen.m[(q, p)] + gen.m[(p, q)];
            a[(2 * p, 2 * q)] = -two_i * h_pq;
            a[(2 * p + 1, 2 * q + 1)] = -two_i * h_pq;
            a[(2 * p, 2 * q + 1)] = i_unit * m_sym;
            a[(2 * p + 1, 2 * q)] = -i_unit * m_sym;
        }
    }
    let scale = a.camax();
    if scale > 0.0 {
        let asym = (&a + a.transpose()).camax();
        debug_assert!(asym <= 1e-10 * scale, "structure matrix asymmetry {asym}");
    }
    Ok(StructureMatrix { a })
}

/// Rapidity spectrum from the structure matrix: eigenvalues of A come in
/// pairs (beta, -beta); the representatives with nonnegative real part
/// (and nonnegative imaginary part on the imaginary axis) are returned,
/// 2L values for a 4L x 4L input.
pub fn rapidities(structure: &StructureMatrix) -> Result<Vec<C64>> {
    let eigs = structure
        .a
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur always yields eigenvalues");
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let tol = 1e-8 * scale;
    let mut pool: Vec<C64> = eigs.iter().cloned().collect();
    let mut betas = Vec::with_capacity(pool.len() / 2);
    while let Some(lambda) = pool.pop() {
        let mut best: Option<(usize, f64)> = None;
        for (k, mu) in pool.iter().enumerate() {
            let miss = (lambda + mu).norm();
            if best.map_or(true, |(_, b)| miss < b) {
                best = Some((k, miss));
            }
        }
        match best {
            Some((k, miss)) if miss <= tol => {
                pool.swap_remove(k);
                let beta = if lambda.re > 0.0 || (lambda.re == 0.0 && lambda.im >= 0.0) {
                    lambda
                } else {
                    -lambda
                };
                betas.push(beta);
            }
            _ => {
                return Err(Error::UnpairedRapidity {
                    value: crate::error::C64Display(lambda),
                })
            }
        }
    }
    betas.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    Ok(betas)
}

/// Largest dissipator eigenvalue magnitude 2 |tr M|.
pub fn dissipator_largest_eigenvalue(gen: &GeneratorM) -> f64 {
    2.0 * gen.m.trace().re.abs()
}

/// Steady-state covariance with its rapidity spectrum.
pub struct CovarianceW {
    /// W_mn = tr(w_m w_n rho_steady); identity plus i times a real
    /// antisymmetric matrix, so W - I is Hermitian and diag(W) = 1.
    pub w: CMatrix,
    /// 2L rapidities from the Schur form of X, beta_j = -lambda_j / 2.
    pub rapidities: Vec<C64>,
}

fn assemble_x(hmaj: &CMatrix, m: &CMatrix) -> RMatrix {
    let dim = hmaj.nrows();
    RMatrix::from_fn(dim, dim, |p, q| 4.0 * hmaj[(p, q)].im - 4.0 * m[(p, q)].re)
}

fn assemble_rhs(m: &CMatrix) -> RMatrix {
    let dim = m.nrows();
    RMatrix::from_fn(dim, dim, |p, q| 8.0 * m[(p, q)].im)
}

/// Eigenvalues of a real quasi-upper-triangular matrix, block by block.
fn quasi_triangular_eigenvalues(t: &RMatrix) -> Vec<C64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b) = (t[(i, i)], t[(i, i + 1)]);
            let (c, d) = (t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = 0.5 * (a + d);
            let disc = half_tr * half_tr - (a * d - b * c);
            if disc < 0.0 {
                let im = (-disc).sqrt();
                out.push(C64::new(half_tr, im));
                out.push(C64::new(half_tr, -im));
            } else {
                let root = disc.sqrt();
                out.push(C64::new(half_tr + root, 0.0));
                out.push(C64::new(half_tr - root, 0.0));
            }
            i += 2;
        } else {
            out.push(C64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

fn betas_from_x_eigenvalues(eigs: &[C64]) -> Result<Vec<C64>> {
    let mut betas: Vec<C64> = eigs.iter().map(|&lambda| -lambda / 2.0).collect();
    betas.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    let min_re = betas.first().map_or(0.0, |b| b.re);
    if 2.0 * min_re < 1e-12 {
        return Err(Error::NonRelaxing { min_re_beta: min_re });
    }
    Ok(betas)
}

/// Solves T S + S T^T = Y for quasi-upper-triangular T by descending
/// block back-substitution; each block pair yields a system of size at
/// most 4 x 4.
fn solve_quasi_lyapunov(t: &RMatrix, y: &RMatrix) -> Result<RMatrix> {
    let n = t.nrows();
    let mut starts = Vec::new();
    let mut i = 0;
    while i < n {
        starts.push(i);
        i += if i + 1 < n && t[(i + 1, i)] != 0.0 { 2 } else { 1 };
    }
    let nb = starts.len();
    let extent = |p: usize| {
        let s = starts[p];
        let e = if p + 1 < nb { starts[p + 1] } else { n };
        (s, e - s)
    };

    let mut s_mat = RMatrix::zeros(n, n);
    for p in (0..nb).rev() {
        let (ps, pn) = extent(p);
        for q in (0..nb).rev() {
            let (qs, qn) = extent(q);
            let mut rhs = y.view((ps, qs), (pn, qn)).clone_owned();
            let below_p = ps + pn;
            if below_p < n {
                rhs -= t.view((ps, below_p), (pn, n - below_p))
                    * s_mat.view((below_p, qs), (n - below_p, qn));
            }
            let below_q = qs + qn;
            if below_q < n {
                rhs -= s_mat.view((ps, below_q), (pn, n - below_q))
                    * t.view((qs, below_q), (qn, n - below_q)).transpose();
            }
            // (I kron T_pp + T_qq kron I) vec(S_pq) = vec(rhs)
            let mut k = RMatrix::zeros(pn * qn, pn * qn);
            for jq in 0..qn {
                for iq in 0..pn {
                    for lq in 0..qn {
                        for kq in 0..pn {
                            let mut v = 0.0;
                            if jq == lq {
                                v += t[(ps + iq, ps + kq)];
                            }
                            if iq == kq {
                                v += t[(qs + jq, qs + lq)];
                            }
                            k[(jq * pn + iq, lq * pn + kq)] = v;
                        }
                    }
                }
            }
            let r = nalgebra::DVector::<f64>::from_fn(pn * qn, |idx, _| {
                rhs[(idx % pn, idx / pn)]
            });
            let sol = k
                .lu()
                .solve(&r)
                .ok_or(Error::NonRelaxing { min_re_beta: 0.0 })?;
            for jq in 0..qn {
                for iq in 0..pn {
                    s_mat[(ps + iq, qs + jq)] = sol[jq * pn + iq];
                }
            }
        }
    }
    Ok(s_mat)
}

fn covariance_from_s(s: &RMatrix) -> CMatrix {
    let n = s.nrows();
    CMatrix::from_fn(n, n, |p, q| {
        if p == q {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.5 * (s[(p, q)] - s[(q, p)]))
        }
    })
}

/// Steady-state covariance by Schur reduction of X, O(L^3). Fails with a
/// spectral diagnostic when the dynamics do not relax.
pub fn steady_state_covariance(hmaj: &CMatrix, gen: &GeneratorM) -> Result<CovarianceW> {
    validate_quadratic_inputs(hmaj, &gen.m)?;
    let x = assemble_x(hmaj, &gen.m);
    let schur = x.schur();
    let (u, t) = schur.unpack();
    let betas = betas_from_x_eigenvalues(&quasi_triangular_eigenvalues(&t))?;
    let y = u.transpose() * assemble_rhs(&gen.m) * &u;
    let s_tilde = solve_quasi_lyapunov(&t, &y)?;
    let s = &u * s_tilde * u.transpose();
    Ok(CovarianceW { w: covariance_from_s(&s), rapidities: betas })
}

/// Steady-state covariance by direct dense solve of the vectorized
/// Lyapunov equation, O(L^6); reference route for tests at small L.
pub fn steady_covariance_dense(hmaj: &CMatrix, gen: &GeneratorM) -> Result<CovarianceW> {
    validate_quadratic_inputs(hmaj, &gen.m)?;
    let x = assemble_x(hmaj, &gen.m);
    let n = x.nrows();
    let schur = x.clone().schur();
    let (_, t) = schur.unpack();
    let betas = betas_from_x_eigenvalues(&quasi_triangular_eigenvalues(&t))?;
    let q = assemble_rhs(&gen.m);
    // vec(X S) = (I kron X) vec S, vec(S X^T) = (X kron I) vec S
    let mut k = RMatrix::zeros(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let row = j * n + i;
            for c in 0..n {
                k[(row, j * n + c)] += x[(i, c)];
                k[(row, c * n + i)] += x[(j, c)];
            }
        }
    }
    let r = nalgebra::DVector::<f64>::from_fn(n * n, |idx, _| q[(idx % n, idx / n)]);
    let sol = k.lu().solve(&r).ok_or(Error::NonRelaxing { min_re_beta: 0.0 })?;
    let s = RMatrix::from_fn(n, n, |i, j| sol[j * n + i]);
    Ok(CovarianceW { w: covariance_from_s(&s), rapidities: betas })
}

/// Frobenius norm of the covariance time derivative at W, zero at the
/// steady state: ||X S + S X^T - 8 Im M||.
pub fn stationarity_residual(hmaj: &CMatrix, gen: &GeneratorM, w: &CMatrix) -> f64 {
    let n = w.nrows();
    let x = assemble_x(hmaj, &gen.m);
    let s = RMatrix::from_fn(n, n, |p, q| w[(p, q)].im);
    (&x * &s + &s * x.transpose() - assemble_rhs(&gen.m)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BathSpec;
    use crate::builders::{
        build_gksl_from, build_gksl_generator, default_baths, BathAssignment,
        QmeKind,
    };
    use crate::lattice::{build_chain_hamiltonian, ChainSpec};
    use crate::oracle;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_hamiltonian_maps_to_zero() {
        let out = hamiltonian_to_majorana(&RMatrix::zeros(3, 3)).unwrap();
        assert_eq!(out.camax(), 0.0);
    }

    #[test]
    fn majorana_coefficients_are_antisymmetric_hermitian() {
        let spec = ChainSpec::new(5, 1, 1.0, 0.3, 0.5, 0.1).unwrap();
        let hm = hamiltonian_to_majorana(&build_chain_hamiltonian(&spec)).unwrap();
        assert!((&hm + hm.transpose()).camax() < 1e-12);
        assert!((&hm - hm.adjoint()).camax() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_hamiltonian() {
        let mut h = RMatrix::zeros(2, 2);
        h[(0, 1)] = 1.0;
        assert!(matches!(hamiltonian_to_majorana(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn majorana_form_reproduces_many_body_hamiltonian() {
        // sum H_mn w_m w_n equals sum h_ij a_i^dag a_j up to a constant shift
        let spec = ChainSpec::new(2, 1, 1.0, 0.4, 0.5, 0.1).unwrap();
        let h = build_chain_hamiltonian(&spec);
        let hm = hamiltonian_to_majorana(&h).unwrap();

        let basis = oracle::jordan_wigner(2).unwrap();
        let w = basis.majoranas();
        let dim = basis.dim();
        let mut from_majorana = CMatrix::zeros(dim, dim);
        for m in 0..4 {
            for n in 0..4 {
                if hm[(m, n)].norm() > 0.0 {
                    from_majorana += &w[m] * &w[n] * hm[(m, n)];
                }
            }
        }
        let reference = basis.many_body_hamiltonian(&h);
        let diff = &from_majorana - &reference;
        let shift = diff.trace() / C64::new(dim as f64, 0.0);
        assert!((diff - CMatrix::identity(dim, dim) * shift).camax() < 1e-12);
    }

    fn test_generator(l: usize, tau_b: f64, j_int: f64) -> (CMatrix, GeneratorM) {
        let spec = ChainSpec::new(l, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let baths = default_baths(&spec, tau_b, j_int).unwrap();
        let gen = build_gksl_generator(QmeKind::Nre, &spec, &baths, l).unwrap().1;
        let hm = hamiltonian_to_majorana(&build_chain_hamiltonian(&spec)).unwrap();
        (hm, gen)
    }

    #[test]
    fn structure_matrix_of_nothing_is_zero() {
        let hm = CMatrix::zeros(4, 4);
        let gen = GeneratorM {
            m: CMatrix::zeros(4, 4),
            kind: QmeKind::Nre,
            radius: 2,
            include_eta: false,
        };
        let a = build_structure_matrix(&hm, &gen).unwrap();
        assert_eq!(a.a.camax(), 0.0);
    }

    #[test]
    fn structure_matrix_is_antisymmetric() {
        let (hm, gen) = test_generator(4, 0.5, 0.4);
        let a = build_structure_matrix(&hm, &gen).unwrap().a;
        let rel = (&a + a.transpose()).camax() / a.camax();
        assert!(rel < 1e-10, "relative asymmetry {rel}");
    }

    #[test]
    fn structure_matrix_without_hamiltonian_is_hermitian() {
        let (_, gen) = test_generator(3, 0.5, 0.4);
        let hm = CMatrix::zeros(6, 6);
        let a = build_structure_matrix(&hm, &gen).unwrap().a;
        assert!((&a - a.adjoint()).camax() < 1e-12 * a.camax());
    }

    #[test]
    fn zero_structure_matrix_has_zero_rapidities() {
        let a = StructureMatrix { a: CMatrix::zeros(8, 8) };
        let betas = rapidities(&a).unwrap();
        assert_eq!(betas.len(), 4);
        assert!(betas.iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn rapidity_sum_rule() {
        // sum of rapidities equals 2 tr M
        let (hm, gen) = test_generator(4, 0.3, 0.5);
        let a = build_structure_matrix(&hm, &gen).unwrap();
        let betas = rapidities(&a).unwrap();
        assert_eq!(betas.len(), 8);
        let total: C64 = betas.iter().sum();
        let expect = gen.m.trace() * 2.0;
        assert_abs_diff_eq!(total.re, expect.re, epsilon = 1e-8);
        assert_abs_diff_eq!(total.im, 0.0, epsilon = 1e-8);
        assert!(betas.iter().all(|b| b.re >= -1e-10));
    }

    /// Asserts two complex multisets agree pairwise within tol.
    fn assert_multisets_match(left: &[C64], mut right: Vec<C64>, tol: f64) {
        assert_eq!(left.len(), right.len());
        for value in left {
            let (k, miss) = right
                .iter()
                .enumerate()
                .map(|(k, r)| (k, (value - r).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            assert!(miss < tol, "no partner for {value} within {tol}, closest {miss}");
            right.swap_remove(k);
        }
    }

    #[test]
    fn structure_and_lyapunov_spectra_agree() {
        let (hm, gen) = test_generator(3, 0.5, 0.4);
        let a = build_structure_matrix(&hm, &gen).unwrap();
        let from_a = rapidities(&a).unwrap();
        let from_x = steady_state_covariance(&hm, &gen).unwrap().rapidities;
        assert_multisets_match(&from_a, from_x, 1e-8);
    }

    #[test]
    fn single_site_spectrum_matches_dense_liouvillian() {
        // subset sums of -2 beta_j reproduce the dense spectrum
        let h = RMatrix::from_element(1, 1, 0.4);
        let bath = BathSpec::new(0.8, 1.3, 0.5, 0.0).unwrap();
        let baths = vec![BathAssignment { site: 1, bath }];
        let (_, gen) = build_gksl_from(QmeKind::Davies, &h, &baths, 1, 1e-9).unwrap();
        let hm = hamiltonian_to_majorana(&h).unwrap();
        let a = build_structure_matrix(&hm, &gen).unwrap();
        let betas = rapidities(&a).unwrap();
        assert_eq!(betas.len(), 2);

        let basis = oracle::jordan_wigner(1).unwrap();
        let superop = oracle::superoperator_from_m(
            &basis.many_body_hamiltonian(&h),
            &gen.m,
            &basis.majoranas(),
        )
        .unwrap();
        let dense: Vec<C64> = oracle::liouvillian_eigenvalues(&superop).iter().cloned().collect();
        let predicted = vec![
            c(0.0, 0.0),
            -betas[0] * 2.0,
            -betas[1] * 2.0,
            -(betas[0] + betas[1]) * 2.0,
        ];
        assert_multisets_match(&dense, predicted, 1e-8);
    }

    #[test]
    fn largest_dissipator_eigenvalue_examples() {
        let zero = GeneratorM {
            m: CMatrix::zeros(4, 4),
            kind: QmeKind::Nre,
            radius: 2,
            include_eta: false,
        };
        assert_eq!(dissipator_largest_eigenvalue(&zero), 0.0);

        // invariant under unitary conjugation of the kernel
        let (_, gen) = test_generator(3, 0.5, 0.4);
        let rot = {
            let raw = CMatrix::from_fn(6, 6, |i, j| {
                c(((i * 7 + j) as f64 * 0.23).sin(), ((i + 5 * j) as f64 * 0.71).cos())
            });
            let qr = raw.qr();
            qr.q()
        };
        let rotated = GeneratorM {
            m: &rot * &gen.m * rot.adjoint(),
            kind: gen.kind,
            radius: gen.radius,
            include_eta: false,
        };
        assert_abs_diff_eq!(
            dissipator_largest_eigenvalue(&gen),
            dissipator_largest_eigenvalue(&rotated),
            epsilon = 1e-12
        );
    }

    #[test]
    fn infinite_temperature_steady_state_is_uncorrelated() {
        // equal loss and gain rates at omega0 = 0 leave W = identity
        let spec = ChainSpec::new(4, 1, 1.0, 0.0, 0.0, 0.0).unwrap();
        let baths = default_baths(&spec, 0.5, 0.4).unwrap();
        let gen = build_gksl_generator(QmeKind::Nre, &spec, &baths, 4).unwrap().1;
        let hm = hamiltonian_to_majorana(&build_chain_hamiltonian(&spec)).unwrap();
        let sol = steady_state_covariance(&hm, &gen).unwrap();
        assert!((&sol.w - CMatrix::identity(8, 8)).camax() < 1e-12);
    }

    #[test]
    fn covariance_invariants() {
        let (hm, gen) = test_generator(5, 0.4, 0.5);
        let sol = steady_state_covariance(&hm, &gen).unwrap();
        let n = sol.w.nrows();
        for k in 0..n {
            assert_eq!(sol.w[(k, k)], c(1.0, 0.0));
        }
        assert!((&sol.w + sol.w.transpose() - CMatrix::identity(n, n) * c(2.0, 0.0)).camax()
            < 1e-12);
        let shifted = &sol.w - CMatrix::identity(n, n);
        assert!((&shifted - shifted.adjoint()).camax() < 1e-12);
        let residual = stationarity_residual(&hm, &gen, &sol.w);
        assert!(residual < 1e-8 * gen.m.norm(), "residual {residual}");
    }

    #[test]
    fn schur_solver_matches_dense_solver() {
        let (hm, gen) = test_generator(4, 0.3, 0.5);
        let fast = steady_state_covariance(&hm, &gen).unwrap();
        let dense = steady_covariance_dense(&hm, &gen).unwrap();
        assert!((&fast.w - &dense.w).camax() < 1e-10);
    }

    #[test]
    fn covariance_matches_dense_oracle_for_all_kinds() {
        let spec = ChainSpec::new(3, 1, 1.0, 0.2, 0.5, 0.1).unwrap();
        let baths = default_baths(&spec, 0.7, 0.3).unwrap();
        let h = build_chain_hamiltonian(&spec);
        let hm = hamiltonian_to_majorana(&h).unwrap();
        let basis = oracle::jordan_wigner(3).unwrap();
        let w_ops = basis.majoranas();
        let h_many = basis.many_body_hamiltonian(&h);
        for kind in QmeKind::ALL {
            let radius = if kind.is_local() { 2 } else { 3 };
            let gen =
                crate::builders::build_generator(kind, &spec, &baths, radius, false).unwrap();
            let sol = steady_state_covariance(&hm, &gen).unwrap();
            let superop = oracle::superoperator_from_m(&h_many, &gen.m, &w_ops).unwrap();
            let rho = oracle::dense_steady_state(&superop).unwrap();
            let reference = oracle::covariance_from_state(&rho, &w_ops);
            let dev = (&sol.w - &reference).camax();
            assert!(dev < 1e-8, "{kind}: covariance deviation {dev}");
        }
    }

    #[test]
    fn non_relaxing_dynamics_is_detected() {
        let spec = ChainSpec::new(3, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let hm = hamiltonian_to_majorana(&build_chain_hamiltonian(&spec)).unwrap();
        let gen = GeneratorM {
            m: CMatrix::zeros(6, 6),
            kind: QmeKind::Nre,
            radius: 3,
            include_eta: false,
        };
        assert!(matches!(
            steady_state_covariance(&hm, &gen),
            Err(Error::NonRelaxing { .. })
        ));
    }
}
