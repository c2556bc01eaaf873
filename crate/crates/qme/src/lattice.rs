//! Single-particle description of the chain: Hamiltonian assembly,
//! contiguous subsystem windows, and deterministic eigendecompositions.
//!
//! The chain Hamiltonian is H = sum_ij h_ij a_i^dag a_j with h real
//! tridiagonal: omega0 on the diagonal, -J on the first off-diagonals,
//! open boundaries. Sites are numbered 1..=L throughout the public
//! interface; matrix storage is 0-based.

use crate::{Error, RMatrix, Result};

/// Parameters of the boundary-driven chain.
///
/// The first `n` sites couple to reservoirs at inverse temperature
/// `beta_left`, the last `n` sites to reservoirs at `beta_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub l: usize,
    pub n: usize,
    pub j: f64,
    pub omega0: f64,
    pub beta_left: f64,
    pub beta_right: f64,
}

impl ChainSpec {
    pub fn new(
        l: usize,
        n: usize,
        j: f64,
        omega0: f64,
        beta_left: f64,
        beta_right: f64,
    ) -> Result<Self> {
        let spec = ChainSpec { l, n, j, omega0, beta_left, beta_right };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 {
            return Err(Error::InvalidChain(format!(
                "chain needs at least 2 sites, got {}",
                self.l
            )));
        }
        if self.n == 0 || 2 * self.n > self.l {
            return Err(Error::InvalidChain(format!(
                "reservoir span must satisfy 0 < N <= L/2, got N = {}, L = {}",
                self.n, self.l
            )));
        }
        if !(self.j > 0.0) {
            return Err(Error::InvalidChain(format!("hopping must be positive, got {}", self.j)));
        }
        if self.beta_left < 0.0 || self.beta_right < 0.0 {
            return Err(Error::InvalidChain("inverse temperatures must be nonnegative".into()));
        }
        Ok(())
    }

    /// Sites carrying a reservoir, in ascending order (1-indexed).
    pub fn bath_sites(&self) -> Vec<usize> {
        let left = 1..=self.n;
        let right = (self.l - self.n + 1)..=self.l;
        left.chain(right).collect()
    }

    /// Inverse temperature of the reservoir at `site`.
    pub fn beta_at(&self, site: usize) -> Option<f64> {
        if (1..=self.n).contains(&site) {
            Some(self.beta_left)
        } else if ((self.l - self.n + 1)..=self.l).contains(&site) {
            Some(self.beta_right)
        } else {
            None
        }
    }
}

/// Tridiagonal single-particle matrix of the open chain.
pub fn build_chain_hamiltonian(spec: &ChainSpec) -> RMatrix {
    let l = spec.l;
    let mut h = RMatrix::zeros(l, l);
    for i in 0..l {
        h[(i, i)] = spec.omega0;
        if i + 1 < l {
            h[(i, i + 1)] = -spec.j;
            h[(i + 1, i)] = -spec.j;
        }
    }
    h
}

/// Contiguous block of sites within distance R-1 of a center site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsystemWindow {
    pub center: usize,
    pub radius: usize,
    /// First site of the window (1-indexed, inclusive).
    pub first: usize,
    /// Last site of the window (1-indexed, inclusive).
    pub last: usize,
}

impl SubsystemWindow {
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, site: usize) -> bool {
        (self.first..=self.last).contains(&site)
    }

    /// 0-based position of `site` inside the window.
    pub fn offset_of(&self, site: usize) -> Result<usize> {
        if !self.contains(site) {
            return Err(Error::SiteOutsideWindow { site, first: self.first, last: self.last });
        }
        Ok(site - self.first)
    }

    /// Sites of the window in ascending order (1-indexed).
    pub fn sites(&self) -> impl Iterator<Item = usize> {
        self.first..=self.last
    }
}

/// Window of sites i with |i - center| <= radius - 1, clipped to [1, L].
pub fn subsystem_window(center: usize, radius: usize, l: usize) -> Result<SubsystemWindow> {
    if radius < 1 || radius > l {
        return Err(Error::InvalidRadius { radius, length: l });
    }
    if center < 1 || center > l {
        return Err(Error::SiteOutsideWindow { site: center, first: 1, last: l });
    }
    let first = center.saturating_sub(radius - 1).max(1);
    let last = (center + radius - 1).min(l);
    Ok(SubsystemWindow { center, radius, first, last })
}

/// Principal submatrix of `h` on the window sites. Bonds crossing the
/// window boundary are dropped.
pub fn build_subsystem_hamiltonian(h: &RMatrix, window: &SubsystemWindow) -> RMatrix {
    let k = window.len();
    RMatrix::from_fn(k, k, |a, b| h[(window.first - 1 + a, window.first - 1 + b)])
}

/// Orthogonal eigendecomposition h = O^T diag(omega) O with rows of `modes`
/// indexed by mode and columns by site.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub frequencies: Vec<f64>,
    /// Row m holds the mode-m amplitudes O_{m,i}.
    pub modes: RMatrix,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Amplitude O_{m,i} of mode `m` on the 0-based column `i`.
    pub fn amplitude(&self, mode: usize, col: usize) -> f64 {
        self.modes[(mode, col)]
    }
}

/// Diagonalizes a real symmetric single-particle matrix with a fixed
/// deterministic convention: eigenvalues ascending, ties broken by the
/// site index of each mode's largest-magnitude amplitude, and every mode
/// scaled so that amplitude is positive.
pub fn diagonalize(h: &RMatrix) -> Result<EigenDecomposition> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: h.ncols() });
    }
    let scale = h.amax().max(1.0);
    let asym = (h - h.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotHermitian { asymmetry: asym / scale });
    }
    if n == 0 {
        return Ok(EigenDecomposition { frequencies: vec![], modes: RMatrix::zeros(0, 0) });
    }

    let eig = h.clone().symmetric_eigen();

    // anchor = first index of the largest-magnitude amplitude; used both
    // for the sign convention and to break eigenvalue ties
    let mut order: Vec<(f64, usize, usize)> = (0..n)
        .map(|k| {
            let col = eig.eigenvectors.column(k);
            let mut anchor = 0;
            let mut best = -1.0;
            for (i, &v) in col.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    anchor = i;
                }
            }
            (eig.eigenvalues[k], anchor, k)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut modes = RMatrix::zeros(n, n);
    let mut frequencies = Vec::with_capacity(n);
    for (m, &(freq, anchor, k)) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        let sign = if col[anchor] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            modes[(m, i)] = sign * col[i];
        }
        frequencies.push(freq);
    }

    let ortho = (&modes * modes.transpose() - RMatrix::identity(n, n)).amax();
    let diag = {
        let rot = &modes * h * modes.transpose();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { frequencies[a] } else { 0.0 };
                worst = worst.max((rot[(a, b)] - target).abs());
            }
        }
        worst
    };
    assert!(
        ortho <= 1e-10 && diag <= 1e-10 * scale,
        "eigensolver residuals out of tolerance: ortho {ortho:.3e}, diag {diag:.3e}"
    );

    Ok(EigenDecomposition { frequencies, modes })
}

/// Propagation velocity of the chain, 4J.
pub fn lieb_robinson_velocity(spec: &ChainSpec) -> f64 {
    4.0 * spec.j
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(l: usize) -> ChainSpec {
        ChainSpec::new(l, 1, 1.0, 0.0, 0.5, 0.1).unwrap()
    }

    #[test]
    fn two_site_hamiltonian() {
        let h = build_chain_hamiltonian(&spec(2));
        assert_eq!(h, RMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]));
    }

    #[test]
    fn three_site_spectrum() {
        let h = build_chain_hamiltonian(&spec(3));
        let eig = diagonalize(&h).unwrap();
        let root2 = 2.0_f64.sqrt();
        assert_abs_diff_eq!(eig.frequencies[0], -root2, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.frequencies[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.frequencies[2], root2, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_spectrum() {
        let l = 16;
        let h = build_chain_hamiltonian(&spec(l));
        let eig = diagonalize(&h).unwrap();
        let mut expect: Vec<f64> = (1..=l)
            .map(|m| -2.0 * (m as f64 * std::f64::consts::PI / (l as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (got, want) in eig.frequencies.iter().zip(&expect) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn large_chain_band() {
        let h = build_chain_hamiltonian(&ChainSpec::new(128, 16, 1.0, 0.0, 0.1, 0.1).unwrap());
        let eig = diagonalize(&h).unwrap();
        for w in &eig.frequencies {
            assert!(w.abs() < 2.0, "eigenvalue {w} outside the open band (-2, 2)");
        }
    }

    #[test]
    fn window_examples() {
        let w = subsystem_window(1, 2, 128).unwrap();
        assert_eq!((w.first, w.last), (1, 2));
        let w = subsystem_window(16, 4, 128).unwrap();
        assert_eq!((w.first, w.last), (13, 19));
        let w = subsystem_window(1, 128, 128).unwrap();
        assert_eq!((w.first, w.last), (1, 128));
        assert!(subsystem_window(1, 0, 128).is_err());
        assert!(subsystem_window(0, 2, 128).is_err());
        assert!(subsystem_window(129, 2, 128).is_err());
    }

    #[test]
    fn windows_monotone_in_radius() {
        for center in [1, 7, 16] {
            let mut prev = subsystem_window(center, 1, 16).unwrap();
            for r in 2..=16 {
                let w = subsystem_window(center, r, 16).unwrap();
                assert!(w.first <= prev.first && w.last >= prev.last);
                prev = w;
            }
            assert_eq!((prev.first, prev.last), (1, 16));
        }
    }

    #[test]
    fn subsystem_restriction() {
        let s = spec(6);
        let h = build_chain_hamiltonian(&s);
        let full = subsystem_window(3, 6, 6).unwrap();
        assert_eq!(build_subsystem_hamiltonian(&h, &full), h);

        let pair = subsystem_window(1, 2, 6).unwrap();
        let hp = build_subsystem_hamiltonian(&h, &pair);
        assert_eq!(hp, RMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]));

        let single = subsystem_window(4, 1, 6).unwrap();
        let hs = build_subsystem_hamiltonian(&h, &single);
        assert_eq!(hs, RMatrix::from_element(1, 1, 0.0));

        // entries agree exactly with the corresponding entries of h
        let w = subsystem_window(2, 3, 6).unwrap();
        let hw = build_subsystem_hamiltonian(&h, &w);
        for (a, sa) in w.sites().enumerate() {
            for (b, sb) in w.sites().enumerate() {
                assert_eq!(hw[(a, b)], h[(sa - 1, sb - 1)]);
            }
        }
    }

    #[test]
    fn single_site_diagonalization() {
        let h = RMatrix::from_element(1, 1, 0.7);
        let eig = diagonalize(&h).unwrap();
        assert_eq!(eig.frequencies, vec![0.7]);
        assert_eq!(eig.modes[(0, 0)], 1.0);
    }

    #[test]
    fn zero_mode_vanishes_at_center() {
        let h = build_chain_hamiltonian(&spec(3));
        let eig = diagonalize(&h).unwrap();
        // middle mode is (1, 0, -1)/sqrt(2) under the sign convention
        assert_abs_diff_eq!(eig.modes[(1, 0)], 0.5_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(eig.modes[(1, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.modes[(1, 2)], -(0.5_f64.sqrt()), epsilon = 1e-12);
    }

    #[test]
    fn reconstruction() {
        let h = build_chain_hamiltonian(&ChainSpec::new(32, 4, 1.3, -0.2, 0.0, 0.0).unwrap());
        let eig = diagonalize(&h).unwrap();
        let d = RMatrix::from_fn(32, 32, |a, b| {
            if a == b {
                eig.frequencies[a]
            } else {
                0.0
            }
        });
        let rebuilt = eig.modes.transpose() * d * &eig.modes;
        assert!((&rebuilt - &h).norm() / h.norm() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = build_chain_hamiltonian(&spec(3));
        h[(0, 1)] += 1e-6;
        assert!(matches!(diagonalize(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn velocity() {
        assert_eq!(lieb_robinson_velocity(&spec(4)), 4.0);
        let mut s = spec(4);
        s.j = 0.5;
        assert_eq!(lieb_robinson_velocity(&s), 2.0);
        s.j = 0.0;
        assert_eq!(lieb_robinson_velocity(&s), 0.0);
    }

    #[test]
    fn chain_spec_validation() {
        assert!(ChainSpec::new(1, 1, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 3, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 2, -1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 2, 1.0, 0.0, -0.1, 0.0).is_err());
        let s = ChainSpec::new(8, 2, 1.0, 0.0, 0.5, 0.1).unwrap();
        assert_eq!(s.bath_sites(), vec![1, 2, 7, 8]);
        assert_eq!(s.beta_at(1), Some(0.5));
        assert_eq!(s.beta_at(2), Some(0.5));
        assert_eq!(s.beta_at(3), None);
        assert_eq!(s.beta_at(7), Some(0.1));
        assert_eq!(s.beta_at(8), Some(0.1));
    }
}
