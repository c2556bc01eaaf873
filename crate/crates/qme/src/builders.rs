//! Construction of the five master-equation generators for the
//! boundary-driven chain: Redfield, Davies, NRE, and the windowed local
//! variants of the latter two.
//!
//! Every generator is reduced to a Hermitian 2L x 2L kernel M over the
//! Majorana basis, defined by
//! D[rho] = sum_mn 2 M_mn (w_m rho w_n - {w_n w_m, rho}/2).
//! A Lindblad operator l = sum_m k_m w_m contributes k k^dag / 2 to M, so
//! GKSL kinds have positive-semidefinite kernels by construction. The
//! Redfield kernel instead carries the full double frequency sum with
//! coefficients (gamma_b + gamma_b')/2 + i (eta_b - eta_b') and is
//! Hermitian but not necessarily PSD.
//!
//! Coupling operators decompose through the window eigenbasis: with
//! h = O^T diag(omega) O and d_m = sum_i O_mi a_i, the site operator
//! a_j = sum_m O_mj d_m splits into one component per transition frequency.
//! In Majorana form a_i = (w_{2i-1} - i w_{2i}) / 2.

use std::collections::HashMap;

use crate::bath::{channel_weight, eta_for_bath, BathSpec, Channel};
use crate::lattice::{
    build_chain_hamiltonian, build_subsystem_hamiltonian, diagonalize, subsystem_window,
    ChainSpec, EigenDecomposition, SubsystemWindow,
};
use crate::{C64, CMatrix, CVector, Error, RMatrix, Result};

/// Relative frequency-bin tolerance in units of the hopping J.
pub const BIN_TOL_FACTOR: f64 = 1e-9;

/// Master-equation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QmeKind {
    Redfield,
    Davies,
    Nre,
    LocalDavies,
    LocalNre,
}

impl QmeKind {
    pub const ALL: [QmeKind; 5] =
        [QmeKind::Redfield, QmeKind::Davies, QmeKind::Nre, QmeKind::LocalDavies, QmeKind::LocalNre];

    /// Kinds whose coupling decomposition uses a finite window.
    pub fn is_local(self) -> bool {
        matches!(self, QmeKind::LocalDavies | QmeKind::LocalNre)
    }

    /// Kinds in GKSL form, built from an explicit Lindblad set.
    pub fn is_gksl(self) -> bool {
        !matches!(self, QmeKind::Redfield)
    }

    pub fn label(self) -> &'static str {
        match self {
            QmeKind::Redfield => "Redfield",
            QmeKind::Davies => "Davies",
            QmeKind::Nre => "NRE",
            QmeKind::LocalDavies => "LocalDavies",
            QmeKind::LocalNre => "LocalNRE",
        }
    }
}

impl std::fmt::Display for QmeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for QmeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "redfield" => Ok(QmeKind::Redfield),
            "davies" => Ok(QmeKind::Davies),
            "nre" => Ok(QmeKind::Nre),
            "localdavies" | "local-davies" => Ok(QmeKind::LocalDavies),
            "localnre" | "local-nre" => Ok(QmeKind::LocalNre),
            other => Err(Error::InvalidScenario(format!("unknown generator kind '{other}'"))),
        }
    }
}

/// One frequency component of a coupling operator: the part of A_mu
/// oscillating at e^{-i omega t}, as a coefficient vector over w_1..w_{2L}.
#[derive(Debug, Clone)]
pub struct FrequencyComponent {
    pub omega: f64,
    pub coeffs: CVector,
}

/// One Lindblad operator l = sum_m coeffs_m w_m with its provenance.
#[derive(Debug, Clone)]
pub struct LindbladOperator {
    pub site: usize,
    pub channel: Channel,
    /// Frequency bin for per-bin (Davies) operators; None for summed (NRE) ones.
    pub omega: Option<f64>,
    pub coeffs: CVector,
}

/// The Lindblad operators of one GKSL generator.
#[derive(Debug, Clone)]
pub struct LindbladSet {
    pub kind: QmeKind,
    pub radius: usize,
    pub operators: Vec<LindbladOperator>,
}

/// Hermitian Majorana kernel of one generator.
#[derive(Debug, Clone)]
pub struct GeneratorM {
    pub m: CMatrix,
    pub kind: QmeKind,
    pub radius: usize,
    pub include_eta: bool,
}

/// One reservoir attached to one chain site.
#[derive(Debug, Clone, Copy)]
pub struct BathAssignment {
    pub site: usize,
    pub bath: BathSpec,
}

/// Standard boundary driving: N reservoirs at each edge, left edge at
/// beta_left, right edge at beta_right, all peaked at omega0.
pub fn default_baths(spec: &ChainSpec, tau_b: f64, j_int: f64) -> Result<Vec<BathAssignment>> {
    spec.bath_sites()
        .into_iter()
        .map(|site| {
            let beta = spec.beta_at(site).expect("bath site has a temperature");
            Ok(BathAssignment {
                site,
                bath: BathSpec::new(tau_b, beta, j_int, spec.omega0)?,
            })
        })
        .collect()
}

/// Splits the coupling operator of `channel` at `site` into frequency
/// components over the eigenmodes of the window Hamiltonian. Channel 1
/// (a_j) yields components at +omega_m, channel 2 (a_j^dag) at -omega_m.
/// Output is sorted by frequency.
pub fn decompose_coupling(
    channel: Channel,
    site: usize,
    eig: &EigenDecomposition,
    window: &SubsystemWindow,
    chain_length: usize,
) -> Result<Vec<FrequencyComponent>> {
    if eig.len() != window.len() {
        return Err(Error::DimensionMismatch { expected: window.len(), got: eig.len() });
    }
    let rel_j = window.offset_of(site)?;
    let even_phase = match channel {
        Channel::Annihilation => C64::new(0.0, -0.5),
        Channel::Creation => C64::new(0.0, 0.5),
    };
    let mut out = Vec::with_capacity(eig.len());
    for m in 0..eig.len() {
        let omega = match channel {
            Channel::Annihilation => eig.frequencies[m],
            Channel::Creation => -eig.frequencies[m],
        };
        let amp_j = eig.amplitude(m, rel_j);
        let mut coeffs = CVector::zeros(2 * chain_length);
        for (rel_i, site_i) in window.sites().enumerate() {
            let weight = amp_j * eig.amplitude(m, rel_i);
            coeffs[2 * (site_i - 1)] = C64::new(0.5 * weight, 0.0);
            coeffs[2 * site_i - 1] = even_phase * weight;
        }
        out.push(FrequencyComponent { omega, coeffs });
    }
    out.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(out)
}

/// Merges components whose frequencies agree within `tol` into single bins,
/// adding coefficients. Input must be sorted by frequency.
pub fn group_frequencies(components: Vec<FrequencyComponent>, tol: f64) -> Vec<FrequencyComponent> {
    let mut out: Vec<FrequencyComponent> = Vec::new();
    for comp in components {
        match out.last_mut() {
            Some(last) if (comp.omega - last.omega).abs() < tol => {
                last.coeffs += comp.coeffs;
            }
            _ => out.push(comp),
        }
    }
    out
}

/// Sum of all component coefficient vectors; reconstructs the original
/// coupling operator.
pub fn reconstruct_coupling(components: &[FrequencyComponent]) -> CVector {
    let dim = components.first().map_or(0, |c| c.coeffs.len());
    components.iter().fold(CVector::zeros(dim), |acc, c| acc + &c.coeffs)
}

/// Kernel M of one GKSL generator, M = sum_lambda l_lambda l_lambda^dag / 2.
/// The 1/2 is fixed by the single-operator case l = w_1, whose dissipator
/// w_1 rho w_1 - rho matches the kernel form exactly when M_11 = 1/2.
pub fn lindblad_to_m(set: &LindbladSet, chain_length: usize) -> GeneratorM {
    let dim = 2 * chain_length;
    let mut m = CMatrix::zeros(dim, dim);
    for op in &set.operators {
        m += &op.coeffs * op.coeffs.adjoint() * C64::new(0.5, 0.0);
    }
    GeneratorM { m, kind: set.kind, radius: set.radius, include_eta: false }
}

struct WindowData {
    window: SubsystemWindow,
    eig: EigenDecomposition,
}

/// Window eigendecompositions keyed by extent, shared across bath sites.
struct WindowCache<'a> {
    h: &'a RMatrix,
    cache: HashMap<(usize, usize), WindowData>,
}

impl<'a> WindowCache<'a> {
    fn new(h: &'a RMatrix) -> Self {
        WindowCache { h, cache: HashMap::new() }
    }

    fn get(&mut self, site: usize, radius: usize) -> Result<&WindowData> {
        let l = self.h.nrows();
        let window = subsystem_window(site, radius, l)?;
        let key = (window.first, window.last);
        if !self.cache.contains_key(&key) {
            let sub = build_subsystem_hamiltonian(self.h, &window);
            let eig = diagonalize(&sub)?;
            self.cache.insert(key, WindowData { window, eig });
        }
        Ok(&self.cache[&key])
    }
}

/// Grouped frequency components of one (site, channel) coupling.
fn grouped_components(
    cache: &mut WindowCache,
    channel: Channel,
    site: usize,
    radius: usize,
    bin_tol: f64,
) -> Result<Vec<FrequencyComponent>> {
    let l = cache.h.nrows();
    let data = cache.get(site, radius)?;
    let comps = decompose_coupling(channel, site, &data.eig, &data.window, l)?;
    Ok(group_frequencies(comps, bin_tol))
}

/// Redfield kernel from an explicit single-particle Hamiltonian. Keeps the
/// full double sum over frequency pairs; per (site, channel) group the
/// kernel gains V C V^dag / 2 with V the component matrix and
/// C_bb' = (gamma_b + gamma_b')/2 + i (eta_b - eta_b').
pub fn build_redfield_from(
    h: &RMatrix,
    baths: &[BathAssignment],
    include_eta: bool,
    bin_tol: f64,
) -> Result<GeneratorM> {
    let l = h.nrows();
    let dim = 2 * l;
    let mut cache = WindowCache::new(h);
    let mut m = CMatrix::zeros(dim, dim);
    for assignment in baths {
        for channel in Channel::BOTH {
            let bins = grouped_components(&mut cache, channel, assignment.site, l, bin_tol)?;
            let nb = bins.len();
            let gammas: Vec<f64> =
                bins.iter().map(|b| channel_weight(&assignment.bath, channel, b.omega)).collect();
            let etas: Vec<f64> = if include_eta {
                bins.iter()
                    .map(|b| eta_for_bath(&assignment.bath, channel, b.omega))
                    .collect::<Result<_>>()?
            } else {
                vec![0.0; nb]
            };
            let v = CMatrix::from_fn(dim, nb, |row, b| bins[b].coeffs[row]);
            let c = CMatrix::from_fn(nb, nb, |b, bp| {
                C64::new(0.5 * (gammas[b] + gammas[bp]), etas[b] - etas[bp])
            });
            m += &v * c * v.adjoint() * C64::new(0.5, 0.0);
        }
    }
    Ok(GeneratorM { m, kind: QmeKind::Redfield, radius: l, include_eta })
}

/// Redfield kernel for a chain with boundary reservoirs.
pub fn build_redfield_m(
    spec: &ChainSpec,
    baths: &[BathAssignment],
    include_eta: bool,
) -> Result<GeneratorM> {
    build_redfield_from(&build_chain_hamiltonian(spec), baths, include_eta, BIN_TOL_FACTOR * spec.j)
}

/// Lindblad set and kernel of a GKSL kind from an explicit single-particle
/// Hamiltonian. Davies kinds emit one operator per (site, channel,
/// frequency bin) with amplitude sqrt(gamma(omega_bin)); NRE kinds sum the
/// per-bin operators into one per (site, channel).
pub fn build_gksl_from(
    kind: QmeKind,
    h: &RMatrix,
    baths: &[BathAssignment],
    radius: usize,
    bin_tol: f64,
) -> Result<(LindbladSet, GeneratorM)> {
    let l = h.nrows();
    if !kind.is_gksl() {
        return Err(Error::InvalidScenario(format!(
            "{kind} is not a GKSL kind; it has no Lindblad set"
        )));
    }
    if radius > l {
        return Err(Error::InvalidRadius { radius, length: l });
    }
    if !kind.is_local() && radius != l {
        return Err(Error::InvalidRadius { radius, length: l });
    }
    let per_bin = matches!(kind, QmeKind::Davies | QmeKind::LocalDavies);
    let mut cache = WindowCache::new(h);
    let mut operators = Vec::new();
    for assignment in baths {
        for channel in Channel::BOTH {
            let bins = grouped_components(&mut cache, channel, assignment.site, radius, bin_tol)?;
            if per_bin {
                for bin in &bins {
                    let rate = channel_weight(&assignment.bath, channel, bin.omega);
                    operators.push(LindbladOperator {
                        site: assignment.site,
                        channel,
                        omega: Some(bin.omega),
                        coeffs: &bin.coeffs * C64::new(rate.sqrt(), 0.0),
                    });
                }
            } else {
                let mut coeffs = CVector::zeros(2 * l);
                for bin in &bins {
                    let rate = channel_weight(&assignment.bath, channel, bin.omega);
                    coeffs += &bin.coeffs * C64::new(rate.sqrt(), 0.0);
                }
                operators.push(LindbladOperator {
                    site: assignment.site,
                    channel,
                    omega: None,
                    coeffs,
                });
            }
        }
    }
    let set = LindbladSet { kind, radius, operators };
    let m = lindblad_to_m(&set, l);
    Ok((set, m))
}

/// Lindblad set and kernel of a GKSL kind for a chain with boundary
/// reservoirs. Global kinds require radius = L.
pub fn build_gksl_generator(
    kind: QmeKind,
    spec: &ChainSpec,
    baths: &[BathAssignment],
    radius: usize,
) -> Result<(LindbladSet, GeneratorM)> {
    build_gksl_from(kind, &build_chain_hamiltonian(spec), baths, radius, BIN_TOL_FACTOR * spec.j)
}

/// Kernel of any kind; Redfield ignores the radius, GKSL kinds discard the
/// Lindblad set.
pub fn build_generator(
    kind: QmeKind,
    spec: &ChainSpec,
    baths: &[BathAssignment],
    radius: usize,
    include_eta: bool,
) -> Result<GeneratorM> {
    match kind {
        QmeKind::Redfield => build_redfield_m(spec, baths, include_eta),
        _ => {
            let radius = if kind.is_local() { radius } else { spec.l };
            Ok(build_gksl_generator(kind, spec, baths, radius)?.1)
        }
    }
}
