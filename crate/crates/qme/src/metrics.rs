//! Comparison observables between generators and between steady states:
//! kernel distance, covariance deviation, and mode populations.

use crate::bath::fermi_dirac;
use crate::builders::GeneratorM;
use crate::lattice::EigenDecomposition;
use crate::solver::CovarianceW;
use crate::{C64, CMatrix, Error, Result};

/// Relative Hilbert-Schmidt distance ||M_loc - M_ref|| / ||M_ref||.
pub fn generator_distance(m_loc: &GeneratorM, m_ref: &GeneratorM) -> Result<f64> {
    if m_loc.m.nrows() != m_ref.m.nrows() {
        return Err(Error::DimensionMismatch { expected: m_ref.m.nrows(), got: m_loc.m.nrows() });
    }
    let denom = m_ref.m.norm();
    if denom == 0.0 {
        return Err(Error::DegenerateNormalization(
            "reference kernel has zero norm".to_string(),
        ));
    }
    Ok((&m_loc.m - &m_ref.m).norm() / denom)
}

/// Normalized maximal covariance deviation
/// max_mn |W_loc - W_ref| / max_{m != n} |W_ref|. The denominator runs over
/// off-diagonal entries only, since diagonals are unity for every steady
/// state.
pub fn steady_state_delta(w_loc: &CovarianceW, w_ref: &CovarianceW) -> Result<f64> {
    let n = w_ref.w.nrows();
    if w_loc.w.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w_loc.w.nrows() });
    }
    let mut denom = 0.0_f64;
    for m in 0..n {
        for k in 0..n {
            if m != k {
                denom = denom.max(w_ref.w[(m, k)].norm());
            }
        }
    }
    // diagonals are pinned to 1, so anything below roundoff carries no signal
    if denom <= 1e-12 {
        return Err(Error::DegenerateNormalization(
            "reference covariance has no off-diagonal weight".to_string(),
        ));
    }
    Ok((&w_loc.w - &w_ref.w).camax() / denom)
}

/// Rotation from site Majoranas to mode Majoranas: mode m picks up the
/// orbital amplitudes on both the odd and the even strand.
fn mode_rotation(eig: &EigenDecomposition) -> CMatrix {
    let l = eig.len();
    let mut r = CMatrix::zeros(2 * l, 2 * l);
    for m in 0..l {
        for i in 0..l {
            let o = C64::new(eig.amplitude(m, i), 0.0);
            r[(2 * m, 2 * i)] = o;
            r[(2 * m + 1, 2 * i + 1)] = o;
        }
    }
    r
}

/// Steady-state occupations <a_m^dag a_m> per eigenmode, as (omega_m, n_m)
/// sorted by frequency. The occupation sits in the imaginary part of the
/// (mode-odd, mode-even) entry of the rotated covariance,
/// n_m = (1 + Im V_{2m-1, 2m}) / 2; the sign is pinned by the single-site
/// case where n = gamma_22 / (gamma_11 + gamma_22).
pub fn mode_populations(w: &CovarianceW, eig: &EigenDecomposition) -> Vec<(f64, f64)> {
    let l = eig.len();
    assert_eq!(w.w.nrows(), 2 * l, "covariance and eigenbasis sizes differ");
    let r = mode_rotation(eig);
    let v = &r * &w.w * r.transpose();
    (0..l).map(|m| (eig.frequencies[m], 0.5 * (1.0 + v[(2 * m, 2 * m + 1)].im))).collect()
}

/// Fermi-Dirac reference occupations of the same modes at inverse
/// temperature beta.
pub fn gibbs_populations(eig: &EigenDecomposition, beta: f64) -> Vec<(f64, f64)> {
    eig.frequencies.iter().map(|&omega| (omega, fermi_dirac(beta, omega))).collect()
}

/// Number of flat stretches in a frequency-ordered profile. A plateau is a
/// maximal run of at least two consecutive values whose successive
/// differences stay within tol; values inside a transition between two
/// levels belong to no plateau.
pub fn count_plateaus(values: &[f64], tol: f64) -> usize {
    let mut runs = 0;
    let mut in_run = false;
    for pair in values.windows(2) {
        if (pair[1] - pair[0]).abs() <= tol {
            if !in_run {
                runs += 1;
                in_run = true;
            }
        } else {
            in_run = false;
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BathSpec;
    use crate::builders::{
        build_generator, build_gksl_from, default_baths, BathAssignment, QmeKind,
    };
    use crate::lattice::{build_chain_hamiltonian, diagonalize, ChainSpec};
    use crate::solver::{hamiltonian_to_majorana, steady_state_covariance};
    use approx::assert_abs_diff_eq;

    fn kernel(m: CMatrix) -> GeneratorM {
        GeneratorM { m, kind: QmeKind::Nre, radius: 1, include_eta: false }
    }

    #[test]
    fn distance_examples() {
        let base = CMatrix::from_fn(4, 4, |i, j| C64::new((i + j) as f64, (i * j) as f64));
        let m_ref = kernel(&base + base.adjoint());
        assert_eq!(generator_distance(&m_ref, &m_ref).unwrap(), 0.0);

        let doubled = kernel(&m_ref.m * C64::new(2.0, 0.0));
        assert_abs_diff_eq!(generator_distance(&doubled, &m_ref).unwrap(), 1.0, epsilon = 1e-14);

        let zero = kernel(CMatrix::zeros(4, 4));
        assert!(matches!(
            generator_distance(&m_ref, &zero),
            Err(Error::DegenerateNormalization(_))
        ));
    }

    #[test]
    fn distance_numerators_satisfy_triangle_inequality() {
        let mk = |seed: usize| {
            kernel(CMatrix::from_fn(4, 4, |i, j| {
                C64::new(
                    ((seed * 13 + i * 5 + j) as f64 * 0.37).sin(),
                    ((seed * 7 + i + j * 3) as f64 * 0.59).cos(),
                )
            }))
        };
        let (a, b, c) = (mk(1), mk(2), mk(3));
        let ab = (&a.m - &b.m).norm();
        let bc = (&b.m - &c.m).norm();
        let ac = (&a.m - &c.m).norm();
        assert!(ac <= ab + bc + 1e-12);
    }

    fn solve_kind(
        kind: QmeKind,
        spec: &ChainSpec,
        tau_b: f64,
        j_int: f64,
        radius: usize,
    ) -> CovarianceW {
        let baths = default_baths(spec, tau_b, j_int).unwrap();
        let gen = build_generator(kind, spec, &baths, radius, false).unwrap();
        let hm = hamiltonian_to_majorana(&build_chain_hamiltonian(spec)).unwrap();
        steady_state_covariance(&hm, &gen).unwrap()
    }

    #[test]
    fn delta_of_identical_states_is_zero() {
        let spec = ChainSpec::new(4, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let w = solve_kind(QmeKind::Nre, &spec, 0.5, 0.4, 4);
        assert_eq!(steady_state_delta(&w, &w).unwrap(), 0.0);
    }

    #[test]
    fn single_site_windows_miss_all_correlations() {
        // R = 1 at omega0 = 0 gives W_loc = identity, so the deviation
        // saturates at exactly 1
        let spec = ChainSpec::new(6, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let w_loc = solve_kind(QmeKind::LocalNre, &spec, 0.5, 0.4, 1);
        let w_ref = solve_kind(QmeKind::Nre, &spec, 0.5, 0.4, 6);
        assert_abs_diff_eq!(steady_state_delta(&w_loc, &w_ref).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uncorrelated_reference_is_rejected() {
        let spec = ChainSpec::new(4, 1, 1.0, 0.0, 0.0, 0.0).unwrap();
        // infinite-temperature driving leaves no off-diagonal weight
        let w_ref = solve_kind(QmeKind::Nre, &spec, 0.5, 0.4, 4);
        let w_loc = solve_kind(QmeKind::LocalNre, &spec, 0.5, 0.4, 2);
        assert!(matches!(
            steady_state_delta(&w_loc, &w_ref),
            Err(Error::DegenerateNormalization(_))
        ));
    }

    #[test]
    fn delta_is_relabeling_invariant() {
        let spec = ChainSpec::new(5, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let w_loc = solve_kind(QmeKind::LocalNre, &spec, 0.5, 0.4, 2);
        let w_ref = solve_kind(QmeKind::Nre, &spec, 0.5, 0.4, 5);
        let base = steady_state_delta(&w_loc, &w_ref).unwrap();

        // reverse the site order on both matrices simultaneously
        let n = w_ref.w.nrows();
        let perm: Vec<usize> = (0..n / 2)
            .rev()
            .flat_map(|site| [2 * site, 2 * site + 1])
            .collect();
        let relabel = |w: &CovarianceW| CovarianceW {
            w: CMatrix::from_fn(n, n, |i, j| w.w[(perm[i], perm[j])]),
            rapidities: w.rapidities.clone(),
        };
        let permuted = steady_state_delta(&relabel(&w_loc), &relabel(&w_ref)).unwrap();
        assert_abs_diff_eq!(base, permuted, epsilon = 1e-14);
    }

    #[test]
    fn identity_covariance_is_half_filling() {
        let spec = ChainSpec::new(5, 1, 1.0, 0.3, 0.5, 0.1).unwrap();
        let eig = diagonalize(&build_chain_hamiltonian(&spec)).unwrap();
        let w = CovarianceW { w: CMatrix::identity(10, 10), rapidities: vec![] };
        for (_, n) in mode_populations(&w, &eig) {
            assert_abs_diff_eq!(n, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn single_site_population_reads_rate_ratio() {
        let h = crate::RMatrix::from_element(1, 1, 0.4);
        let bath = BathSpec::new(0.8, 1.3, 0.5, 0.0).unwrap();
        let baths = vec![BathAssignment { site: 1, bath }];
        let (_, gen) = build_gksl_from(QmeKind::Davies, &h, &baths, 1, 1e-9).unwrap();
        let hm = hamiltonian_to_majorana(&h).unwrap();
        let sol = steady_state_covariance(&hm, &gen).unwrap();
        let eig = diagonalize(&h).unwrap();
        let pops = mode_populations(&sol, &eig);
        let g11 = crate::bath::channel_weight(&bath, crate::bath::Channel::Annihilation, 0.4);
        let g22 = crate::bath::channel_weight(&bath, crate::bath::Channel::Creation, -0.4);
        assert_eq!(pops.len(), 1);
        assert_abs_diff_eq!(pops[0].1, g22 / (g11 + g22), epsilon = 1e-12);
    }

    #[test]
    fn equilibrium_davies_populations_are_thermal() {
        let beta = 0.4;
        let spec = ChainSpec::new(6, 2, 1.0, 0.0, beta, beta).unwrap();
        let sol = solve_kind(QmeKind::Davies, &spec, 0.5, 0.3, 6);
        let eig = diagonalize(&build_chain_hamiltonian(&spec)).unwrap();
        for ((omega, n), (omega_ref, f)) in
            mode_populations(&sol, &eig).iter().zip(gibbs_populations(&eig, beta))
        {
            assert_eq!(*omega, omega_ref);
            assert_abs_diff_eq!(*n, f, epsilon = 1e-8);
            assert!(*n >= -1e-8 && *n <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn gibbs_reference_examples() {
        let spec = ChainSpec::new(8, 1, 1.0, 0.0, 0.5, 0.1).unwrap();
        let eig = diagonalize(&build_chain_hamiltonian(&spec)).unwrap();
        for (omega, n) in gibbs_populations(&eig, 0.0) {
            assert_eq!(n, 0.5, "omega = {omega}");
        }
        let pops = gibbs_populations(&eig, 1.7);
        for pair in pops.windows(2) {
            assert!(pair[1].1 <= pair[0].1, "populations must fall with frequency");
        }
        // the open chain at even L has no zero mode; check the identity directly
        assert_eq!(crate::bath::fermi_dirac(1.7, 0.0), 0.5);
    }

    #[test]
    fn plateau_counting_groups_constant_runs() {
        assert_eq!(count_plateaus(&[], 0.1), 0);
        assert_eq!(count_plateaus(&[0.5, 0.5, 0.5], 1e-3), 1);
        assert_eq!(count_plateaus(&[0.1, 0.1, 0.4, 0.4001, 0.9], 1e-3), 2);
        // ramp points between two levels belong to no plateau
        assert_eq!(count_plateaus(&[0.0, 0.0, 0.5, 1.0, 1.0], 1e-3), 2);
        // tolerance controls what counts as a step
        assert_eq!(count_plateaus(&[0.1, 0.2, 0.3], 0.5), 1);
        assert_eq!(count_plateaus(&[0.1, 0.2, 0.3], 1e-3), 0);
    }
}
