//! Hardware-efficient ansatz, three-phase degradation schedule, stochastic
//! parameter updates, and the protocol loop producing per-iteration traces.
//!
//! Circuit: |ψ(θ)⟩ = [Π_{l=1..4} L_l] [Π_i H_i] |0000⟩, where each layer L_l
//! applies Rx(θx_{l,i}) then Ry(θy_{l,i}) on every qubit and then the CNOT
//! chain CX_{0,1}, CX_{1,2}, CX_{2,3}. 4 layers × 4 qubits × 2 axes = 32
//! parameters. Qubit 0 is the most significant bit of the basis index.
//!
//! Per iteration k the loop prepares |ψ(θ_k)⟩, degrades it through
//! Λ_{α(k),β} built on the energy-window coarse-graining with the ground
//! state as reference, records cost and resource metrics of the degraded
//! state, then updates θ through the phase-dependent stochastic rule.
//! Everything is driven by one seeded stream (32 uniform init draws, then 32
//! gaussian draws per iteration), so a trace is a pure function of its
//! config.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_degradation_channel, DegradationChannel};
use crate::coarse::{resource_metrics, CoarseGraining, ResourceMetrics};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, DensityMatrix, PureState};
use crate::numfmt::sig12;
use crate::rng::ProtocolRng;
use crate::tfim::{build_hamiltonian, energy_windows, TfimSpec};

pub const ANSATZ_QUBITS: usize = 4;
pub const ANSATZ_LAYERS: usize = 4;
pub const PARAM_COUNT: usize = 32;

type C64 = Complex<f64>;

/// The 32 circuit angles, stored reduced into [0, 2π).
/// Index layout: `layer * 8 + qubit * 2` is the x-rotation angle,
/// `layer * 8 + qubit * 2 + 1` the y-rotation angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    theta: [f64; PARAM_COUNT],
}

impl AnsatzParams {
    pub fn new(theta: [f64; PARAM_COUNT]) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("non-finite angle".into()));
        }
        Ok(Self {
            theta: theta.map(|t| t.rem_euclid(TAU)),
        })
    }

    pub fn zeros() -> Self {
        Self {
            theta: [0.0; PARAM_COUNT],
        }
    }

    /// Initial draw: 32 uniforms from [0, 2π), consumed in index order.
    pub fn random(rng: &mut ProtocolRng) -> Self {
        let mut theta = [0.0; PARAM_COUNT];
        for t in theta.iter_mut() {
            *t = rng.next_f64() * TAU;
        }
        Self { theta }
    }

    pub fn theta(&self) -> &[f64; PARAM_COUNT] {
        &self.theta
    }

    #[inline]
    pub fn index(layer: usize, qubit: usize, y_axis: bool) -> usize {
        layer * 2 * ANSATZ_QUBITS + qubit * 2 + usize::from(y_axis)
    }
}

/// Apply a single-qubit gate to `state` (length 2^n), qubit 0 = MSB.
fn apply_single_qubit(state: &mut [C64], n: usize, qubit: usize, g: [[C64; 2]; 2]) {
    let mask = 1usize << (n - 1 - qubit);
    for b in 0..state.len() {
        if b & mask == 0 {
            let b1 = b | mask;
            let a0 = state[b];
            let a1 = state[b1];
            state[b] = g[0][0] * a0 + g[0][1] * a1;
            state[b1] = g[1][0] * a0 + g[1][1] * a1;
        }
    }
}

fn apply_cx(state: &mut [C64], n: usize, control: usize, target: usize) {
    let cm = 1usize << (n - 1 - control);
    let tm = 1usize << (n - 1 - target);
    for b in 0..state.len() {
        if b & cm != 0 && b & tm == 0 {
            state.swap(b, b | tm);
        }
    }
}

fn hadamard() -> [[C64; 2]; 2] {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn rx(theta: f64) -> [[C64; 2]; 2] {
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = C64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

fn ry(theta: f64) -> [[C64; 2]; 2] {
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = C64::new((theta / 2.0).sin(), 0.0);
    [[c, -s], [s, c]]
}

/// Run the ansatz circuit and return the prepared state.
pub fn prepare_state(params: &AnsatzParams) -> PureState<f64> {
    let n = ANSATZ_QUBITS;
    let dim = 1usize << n;
    let mut state = vec![C64::new(0.0, 0.0); dim];
    state[0] = C64::new(1.0, 0.0);
    for q in 0..n {
        apply_single_qubit(&mut state, n, q, hadamard());
    }
    for layer in 0..ANSATZ_LAYERS {
        for q in 0..n {
            apply_single_qubit(&mut state, n, q, rx(params.theta[AnsatzParams::index(layer, q, false)]));
            apply_single_qubit(&mut state, n, q, ry(params.theta[AnsatzParams::index(layer, q, true)]));
        }
        for q in 0..n - 1 {
            apply_cx(&mut state, n, q, q + 1);
        }
    }
    PureState::new(state).expect("circuit preserves the norm")
}

/// ⟨ψ|H|ψ⟩.
pub fn cost_of_state(psi: &PureState<f64>, h: &ComplexMatrix<f64>) -> Result<f64> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: h.dim(),
        });
    }
    Ok(h.quadratic_form(psi.amplitudes()).re)
}

/// tr(ρH).
pub fn cost_of_density(rho: &DensityMatrix<f64>, h: &ComplexMatrix<f64>) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    Ok(rho.matrix().trace_of_product(h).re)
}

/// Which state the recorded cost is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostBasis {
    /// tr(ρ_k H) on the degraded state (default).
    Degraded,
    /// ⟨ψ(θ_k)|H|ψ(θ_k)⟩ on the raw ansatz state.
    Pure,
}

/// Protocol phases: I (clean), II (ramp-up), III (strong degradation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    I,
    II,
    III,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::I => "I",
            Phase::II => "II",
            Phase::III => "III",
        })
    }
}

impl std::str::FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Phase::I),
            "II" => Ok(Phase::II),
            "III" => Ok(Phase::III),
            other => Err(Error::InvalidInput(format!("unknown phase {other:?}"))),
        }
    }
}

fn default_total_iters() -> usize {
    150
}
fn default_phase1_end() -> usize {
    30
}
fn default_phase2_end() -> usize {
    60
}
fn default_beta() -> f64 {
    0.74
}
fn default_fraction() -> f64 {
    0.3
}
fn default_field_h() -> f64 {
    1.0
}
fn default_cost_on() -> CostBasis {
    CostBasis::Degraded
}

/// Full description of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    #[serde(default = "default_total_iters")]
    pub total_iters: usize,
    #[serde(default = "default_phase1_end")]
    pub phase1_end: usize,
    #[serde(default = "default_phase2_end")]
    pub phase2_end: usize,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default = "default_field_h")]
    pub field_h: f64,
    #[serde(default = "default_cost_on")]
    pub cost_on: CostBasis,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            total_iters: default_total_iters(),
            phase1_end: default_phase1_end(),
            phase2_end: default_phase2_end(),
            beta: default_beta(),
            seed: 0,
            fraction: default_fraction(),
            field_h: default_field_h(),
            cost_on: default_cost_on(),
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.phase1_end > 0
            && self.phase1_end < self.phase2_end
            && self.phase2_end < self.total_iters)
        {
            return Err(Error::InvalidInput(format!(
                "phase boundaries must satisfy 0 < {} < {} < {}",
                self.phase1_end, self.phase2_end, self.total_iters
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidInput(format!("beta {} outside [0, 1]", self.beta)));
        }
        if !(self.fraction > 0.0 && self.fraction < 0.5) {
            return Err(Error::InvalidInput(format!(
                "fraction {} outside (0, 0.5)",
                self.fraction
            )));
        }
        Ok(())
    }

    pub fn phase_of(&self, k: usize) -> Phase {
        if k < self.phase1_end {
            Phase::I
        } else if k < self.phase2_end {
            Phase::II
        } else {
            Phase::III
        }
    }
}

/// Degradation strength at iteration k: 0 through phase I, then linear from
/// 0.1 to 0.4 across phase II, then linear from 0.4 toward 0.8 across phase
/// III (capped at 0.8).
pub fn alpha_schedule(k: usize, cfg: &ProtocolConfig) -> f64 {
    if k < cfg.phase1_end {
        0.0
    } else if k < cfg.phase2_end {
        let p = (k - cfg.phase1_end) as f64 / (cfg.phase2_end - cfg.phase1_end) as f64;
        0.1 + 0.3 * p
    } else {
        let p = (k - cfg.phase2_end) as f64 / (cfg.total_iters - cfg.phase2_end) as f64;
        (0.4 + 0.4 * p).min(0.8)
    }
}

/// Per-component update given a standard-normal draw `z`.
///
/// Early (k ≤ phase1): Δθ = -0.05 (0.1 sin θ + N(0, 0.05)); the noise sits
/// inside the learning rate. Mid (phase1 < k ≤ phase2), with progress
/// p = (k-p1)/(p2-p1): Δθ = -0.03 sin θ (1 - 0.5 p) + 0.2 p N(0, 0.5).
/// Strong (k > phase2), with p = (k-p2)/(total-p2):
/// Δθ = -0.01 sin θ (0.5 - 0.4 p) + 0.5 N(0, 1).
pub fn update_step(theta: f64, k: usize, cfg: &ProtocolConfig, z: f64) -> f64 {
    if k <= cfg.phase1_end {
        -0.05 * (0.1 * theta.sin() + 0.05 * z)
    } else if k <= cfg.phase2_end {
        let p = (k - cfg.phase1_end) as f64 / (cfg.phase2_end - cfg.phase1_end) as f64;
        -0.03 * theta.sin() * (1.0 - 0.5 * p) + 0.2 * p * 0.5 * z
    } else {
        let p = (k - cfg.phase2_end) as f64 / (cfg.total_iters - cfg.phase2_end) as f64;
        -0.01 * theta.sin() * (0.5 - 0.4 * p) + 0.5 * z
    }
}

/// One stochastic update; consumes exactly 32 gaussian draws in index order.
pub fn update_parameters(
    params: &AnsatzParams,
    k: usize,
    cfg: &ProtocolConfig,
    rng: &mut ProtocolRng,
) -> AnsatzParams {
    let mut theta = params.theta;
    for t in theta.iter_mut() {
        let z = rng.gaussian();
        *t = (*t + update_step(*t, k, cfg, z)).rem_euclid(TAU);
    }
    AnsatzParams { theta }
}

/// One recorded iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub phase: Phase,
    pub alpha: f64,
    pub cost: f64,
    pub metrics: ResourceMetrics<f64>,
}

/// Complete deterministic trace of one run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub config: ProtocolConfig,
    pub records: Vec<IterationRecord>,
}

/// Execute the full protocol for one config.
pub fn run_protocol(cfg: &ProtocolConfig) -> Result<RunTrace> {
    cfg.validate()?;
    let spec = TfimSpec::new(ANSATZ_QUBITS, cfg.field_h)?;
    let hamiltonian = build_hamiltonian(&spec);
    let spectrum = hermitian_eig(&hamiltonian)?;
    let windows = energy_windows(&spectrum, cfg.fraction)?;
    let cg: &CoarseGraining<f64> = windows.coarse_graining();
    let ground = PureState::new(spectrum.eigenvector(0))?;

    let mut rng = ProtocolRng::new(cfg.seed);
    let mut params = AnsatzParams::random(&mut rng);
    let mut records = Vec::with_capacity(cfg.total_iters);
    for k in 0..cfg.total_iters {
        let psi = prepare_state(&params);
        let alpha = alpha_schedule(k, cfg);
        let channel = DegradationChannel::new(alpha, cfg.beta, ground.clone(), cg.clone())?;
        let degraded = apply_degradation_channel(&psi.density(), &channel)?;
        let cost = match cfg.cost_on {
            CostBasis::Degraded => cost_of_density(&degraded, &hamiltonian)?,
            CostBasis::Pure => cost_of_state(&psi, &hamiltonian)?,
        };
        let metrics = resource_metrics(&degraded, cg)?;
        records.push(IterationRecord {
            k,
            phase: cfg.phase_of(k),
            alpha,
            cost,
            metrics,
        });
        params = update_parameters(&params, k, cfg, &mut rng);
    }
    Ok(RunTrace {
        config: cfg.clone(),
        records,
    })
}

/// CSV header for trace files.
pub const TRACE_CSV_HEADER: &str = "k,phase,alpha,cost,s_vn,s_obs,c_rel,d_rel,o_c,eta";

/// Render a trace as CSV, 12 significant digits per float field.
pub fn trace_to_csv(trace: &RunTrace) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.k,
            r.phase,
            sig12(r.alpha),
            sig12(r.cost),
            sig12(r.metrics.s_vn),
            sig12(r.metrics.s_obs),
            sig12(r.metrics.c_rel),
            sig12(r.metrics.d_rel),
            sig12(r.metrics.o_c),
            sig12(r.metrics.eta),
        ));
    }
    out
}

/// Parse a trace CSV produced by [`trace_to_csv`].
pub fn parse_trace_csv(text: &str) -> Result<Vec<IterationRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty trace file".into()))?;
    if header.trim() != TRACE_CSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "unexpected trace header {header:?}"
        )));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 10 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 2)))
        };
        records.push(IterationRecord {
            k: fields[0]
                .parse()
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 2)))?,
            phase: fields[1].parse()?,
            alpha: parse(fields[2])?,
            cost: parse(fields[3])?,
            metrics: ResourceMetrics {
                s_vn: parse(fields[4])?,
                s_obs: parse(fields[5])?,
                c_rel: parse(fields[6])?,
                d_rel: parse(fields[7])?,
                o_c: parse(fields[8])?,
                eta: parse(fields[9])?,
            },
        });
    }
    Ok(records)
}
