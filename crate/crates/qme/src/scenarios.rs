//! Named parameter sweeps behind the command-line runner, plus the
//! self-check suite.
//!
//! A sweep fixes the chain, a target system-bath timescale tau_SB, and grids
//! over bath timescale tau_b, window radius R, and generator kind. For every
//! tau_b the coupling is recalibrated so all points relax on the same
//! timescale, the Redfield kernel and its steady state serve as the
//! reference, and each (kind, R) combination is scored by kernel distance
//! and covariance deviation. Grid points are independent, so they run on a
//! worker pool; rows are collected back in grid order, which keeps output
//! bytes identical from run to run.

use rayon::prelude::*;

use crate::bath::{channel_weight, eta_for_bath, Channel};
use crate::builders::{
    build_generator, build_gksl_generator, build_redfield_m, decompose_coupling, default_baths,
    group_frequencies, BathAssignment, GeneratorM, QmeKind, BIN_TOL_FACTOR,
};
use crate::calibration::{calibrate_jint, tau_sb_from_m};
use crate::lattice::{build_chain_hamiltonian, diagonalize, subsystem_window, ChainSpec};
use crate::metrics::{
    generator_distance, gibbs_populations, mode_populations, steady_state_delta,
};
use crate::oracle::{
    covariance_from_state, dense_steady_state, jordan_wigner, lieb_robinson_check,
    superoperator_from_frequency_pairs, superoperator_from_lindblad, superoperator_from_m,
    FrequencyGroup,
};
use crate::solver::{
    hamiltonian_to_majorana, stationarity_residual, steady_state_covariance, CovarianceW,
};
use crate::{C64, CMatrix, CVector, Error, Result};

/// One parameter sweep: a chain, a relaxation-time target, and grids over
/// bath timescale, window radius, and generator kind.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub chain: ChainSpec,
    pub tau_sb: f64,
    pub tau_b_grid: Vec<f64>,
    pub radii: Vec<usize>,
    pub kinds: Vec<QmeKind>,
    pub include_eta: bool,
}

/// Radii used by the default sweeps.
pub const DEFAULT_RADII: [usize; 5] = [2, 4, 8, 16, 32];

/// 25 logarithmically spaced bath timescales covering 0.01 to 10.
pub fn default_tau_b_grid() -> Vec<f64> {
    log_grid(0.01, 10.0, 25)
}

/// Logarithmically spaced grid from lo to hi inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (points - 1) as f64))
        .collect()
}

fn production_chain(beta_left: f64, beta_right: f64) -> ChainSpec {
    ChainSpec::new(128, 16, 1.0, 0.0, beta_left, beta_right).expect("parameters are valid")
}

impl Scenario {
    /// Rejects empty grids, nonpositive times, and radii beyond the chain.
    pub fn validate(&self) -> Result<()> {
        if self.tau_b_grid.is_empty() || self.radii.is_empty() || self.kinds.is_empty() {
            return Err(Error::InvalidScenario(format!(
                "scenario {} has an empty grid",
                self.name
            )));
        }
        if !(self.tau_sb > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "tau_sb must be positive, got {}",
                self.tau_sb
            )));
        }
        for &tau_b in &self.tau_b_grid {
            if !(tau_b > 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "tau_b grid entries must be positive, got {tau_b}"
                )));
            }
        }
        for &radius in &self.radii {
            if radius == 0 || radius > self.chain.l {
                return Err(Error::InvalidRadius { radius, length: self.chain.l });
            }
        }
        Ok(())
    }

    /// Coupling-calibration curve J_int(tau_b) at fixed relaxation target.
    pub fn calibration_curve() -> Scenario {
        Scenario {
            name: "calibration".to_string(),
            chain: production_chain(0.5, 0.1),
            tau_sb: 100.0,
            tau_b_grid: default_tau_b_grid(),
            radii: vec![128],
            kinds: vec![QmeKind::Redfield],
            include_eta: false,
        }
    }

    /// Kernel distance of both local generators against Redfield over the
    /// full (R, tau_b) grid.
    pub fn kernel_distance_sweep() -> Scenario {
        Scenario {
            name: "distance".to_string(),
            chain: production_chain(0.5, 0.1),
            tau_sb: 100.0,
            tau_b_grid: default_tau_b_grid(),
            radii: DEFAULT_RADII.to_vec(),
            kinds: vec![QmeKind::LocalDavies, QmeKind::LocalNre],
            include_eta: false,
        }
    }

    /// Steady-state covariance deviation over the same grid as the kernel
    /// distance sweep.
    pub fn steady_deviation_sweep() -> Scenario {
        Scenario { name: "steady".to_string(), ..Self::kernel_distance_sweep() }
    }

    /// Mode populations against the Gibbs profile for a chain with both
    /// edges at the same temperature.
    pub fn equilibrium_populations() -> Scenario {
        Scenario {
            name: "populations".to_string(),
            chain: production_chain(0.1, 0.1),
            tau_sb: 100.0,
            tau_b_grid: vec![1.0],
            radii: vec![2, 8, 32],
            kinds: vec![QmeKind::Davies, QmeKind::LocalDavies, QmeKind::LocalNre],
            include_eta: false,
        }
    }

    /// Dense radius sweep at short relaxation time, where accuracy first
    /// improves and then degrades as the window grows.
    pub fn radius_tradeoff() -> Scenario {
        Scenario {
            name: "tradeoff".to_string(),
            chain: production_chain(0.5, 0.1),
            tau_sb: 10.0,
            tau_b_grid: vec![1.0],
            radii: (2..=64).step_by(2).collect(),
            kinds: vec![QmeKind::LocalDavies],
            include_eta: false,
        }
    }

    /// Consecutive radii, odd ones included, with the edge temperatures
    /// swapped.
    pub fn odd_even_radii() -> Scenario {
        Scenario {
            name: "odd-even".to_string(),
            chain: production_chain(0.1, 0.5),
            tau_sb: 100.0,
            tau_b_grid: vec![0.1, 5.0],
            radii: (2..=8).collect(),
            kinds: vec![QmeKind::LocalNre],
            include_eta: false,
        }
    }
}

/// Column header of the comparison table.
pub const COMPARISON_HEADER: &str =
    "scenario,kind,R,tau_b,tau_sb,j_int,distance,delta,abscissa_4JtauB_over_R,error";

/// One scored grid point. Failed stages leave their column empty and record
/// the cause in the error column; the sweep keeps going.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub scenario: String,
    pub kind: QmeKind,
    pub radius: usize,
    pub tau_b: f64,
    pub tau_sb: f64,
    pub j_int: Option<f64>,
    pub distance: Option<f64>,
    pub delta: Option<f64>,
    pub abscissa: f64,
    pub error: Option<String>,
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Commas and newlines would break the single-line row format.
fn sanitize(message: &str) -> String {
    message.replace(['\n', '\r'], " ").replace(',', ";")
}

impl ComparisonRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.kind,
            self.radius,
            self.tau_b,
            self.tau_sb,
            opt_cell(self.j_int),
            opt_cell(self.distance),
            opt_cell(self.delta),
            self.abscissa,
            self.error.as_deref().map(sanitize).unwrap_or_default()
        )
    }
}

/// Reference data shared by every (kind, R) combination at one tau_b.
struct ReferencePoint {
    j_int: f64,
    baths: Vec<BathAssignment>,
    m_ref: GeneratorM,
    w_ref: CovarianceW,
}

/// Calibrates the coupling and solves the Redfield reference. The probe
/// kernel at unit coupling rescales exactly by J_int^2, since every spectral
/// weight carries that prefactor.
fn reference_point(s: &Scenario, hmaj: &CMatrix, tau_b: f64) -> Result<ReferencePoint> {
    let probe_baths = default_baths(&s.chain, tau_b, 1.0)?;
    let probe = build_redfield_m(&s.chain, &probe_baths, s.include_eta)?;
    let j_int = (tau_sb_from_m(&probe)? / s.tau_sb).sqrt();
    let m_ref = GeneratorM {
        m: &probe.m * C64::new(j_int * j_int, 0.0),
        kind: probe.kind,
        radius: probe.radius,
        include_eta: probe.include_eta,
    };
    let w_ref = steady_state_covariance(hmaj, &m_ref)?;
    let baths = default_baths(&s.chain, tau_b, j_int)?;
    Ok(ReferencePoint { j_int, baths, m_ref, w_ref })
}

/// Global generators ignore the radius grid; they act on the whole chain.
fn radii_for(kind: QmeKind, s: &Scenario) -> Vec<usize> {
    if kind.is_local() { s.radii.clone() } else { vec![s.chain.l] }
}

fn blank_row(s: &Scenario, kind: QmeKind, radius: usize, tau_b: f64) -> ComparisonRow {
    ComparisonRow {
        scenario: s.name.clone(),
        kind,
        radius,
        tau_b,
        tau_sb: s.tau_sb,
        j_int: None,
        distance: None,
        delta: None,
        abscissa: 4.0 * s.chain.j * tau_b / radius as f64,
        error: None,
    }
}

fn append_error(row: &mut ComparisonRow, err: &Error) {
    let text = err.to_string();
    row.error = Some(match row.error.take() {
        Some(prev) => format!("{prev}; {text}"),
        None => text,
    });
}

fn score_point(
    s: &Scenario,
    hmaj: &CMatrix,
    reference: &ReferencePoint,
    kind: QmeKind,
    radius: usize,
    tau_b: f64,
) -> ComparisonRow {
    let mut row = blank_row(s, kind, radius, tau_b);
    row.j_int = Some(reference.j_int);
    let gen = match build_generator(kind, &s.chain, &reference.baths, radius, s.include_eta) {
        Ok(gen) => gen,
        Err(err) => {
            append_error(&mut row, &err);
            return row;
        }
    };
    match generator_distance(&gen, &reference.m_ref) {
        Ok(d) => row.distance = Some(d),
        Err(err) => append_error(&mut row, &err),
    }
    match steady_state_covariance(hmaj, &gen)
        .and_then(|w| steady_state_delta(&w, &reference.w_ref))
    {
        Ok(delta) => row.delta = Some(delta),
        Err(err) => append_error(&mut row, &err),
    }
    row
}

/// Scores every (tau_b, kind, R) grid point against the calibrated Redfield
/// reference. Rows come back in grid order: tau_b outermost, then kind,
/// then radius. Per-point failures become rows with the error column set.
pub fn run_scenario(s: &Scenario) -> Result<Vec<ComparisonRow>> {
    s.validate()?;
    let hmaj = hamiltonian_to_majorana(&build_chain_hamiltonian(&s.chain))?;
    let references: Vec<Result<ReferencePoint>> = s
        .tau_b_grid
        .par_iter()
        .map(|&tau_b| reference_point(s, &hmaj, tau_b))
        .collect();

    let mut combos = Vec::new();
    for (ti, &tau_b) in s.tau_b_grid.iter().enumerate() {
        for &kind in &s.kinds {
            for radius in radii_for(kind, s) {
                combos.push((ti, tau_b, kind, radius));
            }
        }
    }
    Ok(combos
        .par_iter()
        .map(|&(ti, tau_b, kind, radius)| match &references[ti] {
            Ok(reference) => score_point(s, &hmaj, reference, kind, radius, tau_b),
            Err(err) => {
                let mut row = blank_row(s, kind, radius, tau_b);
                append_error(&mut row, err);
                row
            }
        })
        .collect())
}

/// Emits the calibrated coupling for every tau_b without scoring any
/// generator; distance and delta stay empty.
pub fn run_calibration(s: &Scenario) -> Result<Vec<ComparisonRow>> {
    s.validate()?;
    Ok(s.tau_b_grid
        .par_iter()
        .map(|&tau_b| {
            let mut row = blank_row(s, QmeKind::Redfield, s.chain.l, tau_b);
            match calibrate_jint(s.tau_sb, &s.chain, tau_b, s.include_eta) {
                Ok(j_int) => row.j_int = Some(j_int),
                Err(err) => append_error(&mut row, &err),
            }
            row
        })
        .collect())
}

/// Column header of the population table.
pub const POPULATIONS_HEADER: &str = "kind,R,mode_index,omega_m,population,gibbs";

/// Occupation of one eigenmode under one generator, with the thermal
/// reference value. Failures leave the population empty; the cause is kept
/// off the table for the caller to report.
#[derive(Debug, Clone)]
pub struct PopulationRow {
    pub kind: QmeKind,
    pub radius: usize,
    /// 1-based index of the mode in frequency order.
    pub mode_index: usize,
    pub omega: f64,
    pub population: Option<f64>,
    pub gibbs: f64,
    pub error: Option<String>,
}

impl PopulationRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.kind,
            self.radius,
            self.mode_index,
            self.omega,
            opt_cell(self.population),
            self.gibbs
        )
    }
}

/// Mode populations for each (kind, R) at the first tau_b of the grid,
/// against
/// the Gibbs profile at the shared edge temperature. Requires both edges at
/// the same temperature.
pub fn run_populations(s: &Scenario) -> Result<Vec<PopulationRow>> {
    s.validate()?;
    if s.chain.beta_left != s.chain.beta_right {
        return Err(Error::InvalidScenario(format!(
            "population sweep needs equal edge temperatures, got beta_l = {} and beta_r = {}",
            s.chain.beta_left, s.chain.beta_right
        )));
    }
    let tau_b = s.tau_b_grid[0];
    let h = build_chain_hamiltonian(&s.chain);
    let hmaj = hamiltonian_to_majorana(&h)?;
    let eig = diagonalize(&h)?;
    let thermal = gibbs_populations(&eig, s.chain.beta_left);
    let j_int = calibrate_jint(s.tau_sb, &s.chain, tau_b, s.include_eta)?;
    let baths = default_baths(&s.chain, tau_b, j_int)?;

    let mut combos = Vec::new();
    for &kind in &s.kinds {
        for radius in radii_for(kind, s) {
            combos.push((kind, radius));
        }
    }
    let per_combo: Vec<Vec<PopulationRow>> = combos
        .par_iter()
        .map(|&(kind, radius)| {
            let solved = build_generator(kind, &s.chain, &baths, radius, s.include_eta)
                .and_then(|gen| steady_state_covariance(&hmaj, &gen));
            match solved {
                Ok(w) => mode_populations(&w, &eig)
                    .into_iter()
                    .zip(&thermal)
                    .enumerate()
                    .map(|(idx, ((omega, population), &(_, gibbs)))| PopulationRow {
                        kind,
                        radius,
                        mode_index: idx + 1,
                        omega,
                        population: Some(population),
                        gibbs,
                        error: None,
                    })
                    .collect(),
                Err(err) => thermal
                    .iter()
                    .enumerate()
                    .map(|(idx, &(omega, gibbs))| PopulationRow {
                        kind,
                        radius,
                        mode_index: idx + 1,
                        omega,
                        population: None,
                        gibbs,
                        error: Some(err.to_string()),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(per_combo.into_iter().flatten().collect())
}

/// Outcome of one self-check: the observed residual against its frozen
/// tolerance.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub tolerance: f64,
    pub residual: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: String, tolerance: f64, outcome: Result<f64>) -> CheckResult {
        match outcome {
            Ok(residual) => {
                CheckResult { passed: residual <= tolerance, name, tolerance, residual }
            }
            Err(err) => CheckResult {
                name: format!("{name} [{err}]"),
                tolerance,
                residual: f64::INFINITY,
                passed: false,
            },
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} (residual {:.3e}, tolerance {:.3e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

fn dense_operator(coeffs: &CVector, w: &[CMatrix]) -> CMatrix {
    let dim = w[0].nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for (m, wm) in w.iter().enumerate() {
        if coeffs[m] != C64::new(0.0, 0.0) {
            out += wm * coeffs[m];
        }
    }
    out
}

/// Redfield reference route: per bath and channel, the frequency components
/// of the coupling with their spectral and principal-value weights, as
/// dense operators.
fn redfield_groups(
    spec: &ChainSpec,
    baths: &[BathAssignment],
    include_eta: bool,
    w: &[CMatrix],
) -> Result<Vec<FrequencyGroup>> {
    let h = build_chain_hamiltonian(spec);
    let eig = diagonalize(&h)?;
    let bin_tol = BIN_TOL_FACTOR * spec.j;
    let mut groups = Vec::new();
    for assignment in baths {
        for channel in [Channel::Annihilation, Channel::Creation] {
            let window = subsystem_window(assignment.site, spec.l, spec.l)?;
            let comps =
                decompose_coupling(channel, assignment.site, &eig, &window, spec.l)?;
            let bins = group_frequencies(comps, bin_tol);
            groups.push(FrequencyGroup {
                ops: bins.iter().map(|b| dense_operator(&b.coeffs, w)).collect(),
                gammas: bins
                    .iter()
                    .map(|b| channel_weight(&assignment.bath, channel, b.omega))
                    .collect(),
                etas: if include_eta {
                    bins.iter()
                        .map(|b| eta_for_bath(&assignment.bath, channel, b.omega))
                        .collect::<Result<Vec<f64>>>()?
                } else {
                    vec![0.0; bins.len()]
                },
            });
        }
    }
    Ok(groups)
}

/// Relative Frobenius gap between the dense superoperator assembled from the
/// kernel and the one assembled from the defining form. kernel_scale != 1
/// deliberately corrupts the kernel route; the suite runs it at 1.
fn superop_equivalence_residual(
    kind: QmeKind,
    spec: &ChainSpec,
    baths: &[BathAssignment],
    radius: usize,
    include_eta: bool,
    kernel_scale: f64,
) -> Result<f64> {
    let basis = jordan_wigner(spec.l)?;
    let h_many = basis.many_body_hamiltonian(&build_chain_hamiltonian(spec));
    let w = basis.majoranas();
    let gen = build_generator(kind, spec, baths, radius, include_eta)?;
    let scaled = &gen.m * C64::new(kernel_scale, 0.0);
    let from_kernel = superoperator_from_m(&h_many, &scaled, &w)?;
    let defining = match kind {
        QmeKind::Redfield => {
            let groups = redfield_groups(spec, baths, include_eta, &w)?;
            superoperator_from_frequency_pairs(&h_many, &groups)?
        }
        _ => {
            let (set, _) = build_gksl_generator(kind, spec, baths, radius)?;
            let ops: Vec<CMatrix> =
                set.operators.iter().map(|op| dense_operator(&op.coeffs, &w)).collect();
            superoperator_from_lindblad(&h_many, &ops)?
        }
    };
    Ok((&from_kernel - &defining).norm() / defining.norm())
}

/// Relative Frobenius gap between the dense superoperator assembled from
/// the kernel and the one assembled from the defining form of the given
/// generator kind.
pub fn dissipator_equivalence_residual(
    kind: QmeKind,
    spec: &ChainSpec,
    baths: &[BathAssignment],
    radius: usize,
    include_eta: bool,
) -> Result<f64> {
    superop_equivalence_residual(kind, spec, baths, radius, include_eta, 1.0)
}

/// Entrywise gap between the quadratic-solver covariance and the dense
/// steady state of the same generator.
pub fn steady_oracle_residual(
    kind: QmeKind,
    spec: &ChainSpec,
    baths: &[BathAssignment],
    radius: usize,
) -> Result<f64> {
    let basis = jordan_wigner(spec.l)?;
    let h = build_chain_hamiltonian(spec);
    let h_many = basis.many_body_hamiltonian(&h);
    let w = basis.majoranas();
    let gen = build_generator(kind, spec, baths, radius, false)?;
    let dense_gen = superoperator_from_m(&h_many, &gen.m, &w)?;
    let rho = dense_steady_state(&dense_gen)?;
    let w_dense = covariance_from_state(&rho, &w);
    let solved = steady_state_covariance(&hamiltonian_to_majorana(&h)?, &gen)?;
    Ok((&solved.w - &w_dense).camax())
}

/// Structural residuals of one production-scale solve: kernel Hermiticity,
/// covariance shape, rapidity positivity, the trace sum rule, and
/// stationarity of the solved covariance.
fn invariant_residuals(
    kind: QmeKind,
    spec: &ChainSpec,
    tau_b: f64,
    tau_sb: f64,
    radius: usize,
) -> Result<Vec<(String, f64, f64)>> {
    let j_int = calibrate_jint(tau_sb, spec, tau_b, false)?;
    let baths = default_baths(spec, tau_b, j_int)?;
    let gen = build_generator(kind, spec, &baths, radius, false)?;
    let hmaj = hamiltonian_to_majorana(&build_chain_hamiltonian(spec))?;
    let sol = steady_state_covariance(&hmaj, &gen)?;
    let n = sol.w.nrows();

    let hermiticity = (&gen.m - gen.m.adjoint()).camax();
    let diag_unity = (0..n)
        .map(|p| (sol.w[(p, p)] - C64::new(1.0, 0.0)).norm())
        .fold(0.0_f64, f64::max);
    let pair_sum = (&sol.w + sol.w.transpose() - CMatrix::identity(n, n) * C64::new(2.0, 0.0))
        .camax();
    let min_re = sol.rapidities.iter().map(|b| b.re).fold(f64::INFINITY, f64::min);
    let trace_rate = 2.0 * gen.m.trace().re;
    let beta_sum: C64 = sol.rapidities.iter().sum();
    let sum_rule = (beta_sum - C64::new(trace_rate, 0.0)).norm() / trace_rate.abs();
    let stationarity = stationarity_residual(&hmaj, &gen, &sol.w) / gen.m.norm();

    let label = |what: &str| format!("{kind} R={radius}: {what}");
    Ok(vec![
        (label("kernel is Hermitian"), 1e-10, hermiticity),
        (label("covariance diagonal is unity"), 1e-10, diag_unity),
        (label("covariance satisfies W + W^T = 2I"), 1e-8, pair_sum),
        (label("rapidity real parts are nonnegative"), 1e-10, (-min_re).max(0.0)),
        (label("rapidity sum matches kernel trace"), 1e-8, sum_rule),
        (label("solved covariance is stationary"), 1e-8, stationarity),
    ])
}

/// Largest signed excess of the observed operator spreading over the
/// propagation bound, across a (window, time) grid on a 6-site chain.
fn locality_residual() -> Result<f64> {
    let spec = ChainSpec::new(6, 1, 1.0, 0.0, 0.5, 0.1)?;
    let basis = jordan_wigner(spec.l)?;
    let w1 = &basis.majoranas()[0];
    let mut worst = f64::NEG_INFINITY;
    for radius in [2, 3, 4] {
        let window = subsystem_window(1, radius, spec.l)?;
        for t in [0.05, 0.1, 0.2, 0.5] {
            let check = lieb_robinson_check(&spec, &[1], &window, w1, t)?;
            if check.bound.is_finite() {
                worst = worst.max(check.deviation - check.bound);
            }
        }
    }
    Ok(worst)
}

/// Runs the oracle equivalence suite and the invariant suite, reporting one
/// residual per check. Nothing here aborts; failures come back as failed
/// entries.
pub fn run_validation() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // dense equivalence of kernel and defining forms at L = 3
    for beta in [0.0, 0.5] {
        let spec = ChainSpec::new(3, 1, 1.0, 0.0, beta, beta).expect("valid chain");
        let baths = default_baths(&spec, 0.7, 0.4).expect("valid baths");
        for kind in QmeKind::ALL {
            let radii: &[usize] = if kind.is_local() { &[1, 2, 3] } else { &[3] };
            for &radius in radii {
                out.push(CheckResult::new(
                    format!("dissipator forms agree: {kind} R={radius} beta={beta}"),
                    1e-10,
                    superop_equivalence_residual(kind, &spec, &baths, radius, false, 1.0),
                ));
            }
        }
        out.push(CheckResult::new(
            format!("dissipator forms agree: Redfield with Lamb shift beta={beta}"),
            1e-10,
            superop_equivalence_residual(QmeKind::Redfield, &spec, &baths, 3, true, 1.0),
        ));
    }

    // quadratic solver against the dense steady state at L = 3
    {
        let spec = ChainSpec::new(3, 1, 1.0, 0.2, 0.5, 0.1).expect("valid chain");
        let baths = default_baths(&spec, 0.7, 0.3).expect("valid baths");
        for kind in QmeKind::ALL {
            let radius = if kind.is_local() { 2 } else { 3 };
            out.push(CheckResult::new(
                format!("solver matches dense steady state: {kind}"),
                1e-8,
                steady_oracle_residual(kind, &spec, &baths, radius),
            ));
        }
    }

    // structural invariants at production scale
    {
        let spec = production_chain(0.5, 0.1);
        for (kind, radius) in
            [(QmeKind::Redfield, 128), (QmeKind::LocalDavies, 16), (QmeKind::LocalNre, 16)]
        {
            match invariant_residuals(kind, &spec, 1.0, 100.0, radius) {
                Ok(items) => {
                    for (name, tolerance, residual) in items {
                        out.push(CheckResult::new(name, tolerance, Ok(residual)));
                    }
                }
                Err(err) => out.push(CheckResult::new(
                    format!("{kind} R={radius}: invariant suite"),
                    0.0,
                    Err(err),
                )),
            }
        }
    }

    out.push(CheckResult::new(
        "operator spreading stays under the propagation bound".to_string(),
        0.0,
        locality_residual(),
    ));
    out
}
