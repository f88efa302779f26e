//! The eight-instruction pattern pipeline and the time-ordered layer scheduler.
//!
//! A program is a computation space, a list of subsystem state sources and a
//! gate set. Running it resolves the sources (L1), lifts sampled real data
//! into holomorphic form (L2), forms the joint product state (L3), applies
//! every gate (L4), classifies the images (L5), measures expectations (L6)
//! and repeats over time steps, keeping one record per distinct
//! `(gate, expectation)` (L7, L8).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bargmann::{BargmannSpace, SampledFunction};
use crate::error::{HoloError, Result};
use crate::gates::{expectation, DiffOp, GateName, Normalization};
use crate::holostate::{HoloPoly, Partition};
use crate::C64;

/// Relative tolerance for the rank and occupation tests in [`classify_state`].
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Expectations closer than this share a catalog key.
pub const DEDUP_TOL: f64 = 1e-10;

/// Where a subsystem's state comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    Poly(HoloPoly),
    /// Real grid data, lifted to a one-variable state of the given degree.
    Sampled {
        x_min: f64,
        dx: f64,
        values: Vec<f64>,
        degree: u32,
    },
    /// One state per time step, cycled.
    Sequence(Vec<HoloPoly>),
}

impl StateSource {
    fn dim(&self) -> usize {
        match self {
            StateSource::Poly(p) => p.dim(),
            StateSource::Sampled { .. } => 1,
            StateSource::Sequence(seq) => seq[0].dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subsystem {
    pub name: String,
    #[serde(flatten)]
    pub source: StateSource,
}

#[derive(Clone, Debug)]
pub struct UplProgram {
    space: BargmannSpace,
    subsystems: Vec<Subsystem>,
    gates: Vec<(String, DiffOp)>,
    iterations: usize,
}

impl UplProgram {
    pub fn new(
        space: BargmannSpace,
        subsystems: Vec<Subsystem>,
        gates: Vec<(String, DiffOp)>,
        iterations: usize,
    ) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(HoloError::InvalidParameter("a program needs at least one subsystem".into()));
        }
        if iterations == 0 {
            return Err(HoloError::InvalidParameter("a program needs at least one iteration".into()));
        }
        for s in &subsystems {
            match &s.source {
                StateSource::Sequence(seq) if seq.is_empty() => {
                    return Err(HoloError::InvalidParameter(format!("subsystem `{}` has an empty sequence", s.name)));
                }
                StateSource::Sequence(seq) if seq.iter().any(|p| p.dim() != seq[0].dim()) => {
                    return Err(HoloError::InvalidParameter(format!(
                        "subsystem `{}` changes dimension across its sequence",
                        s.name
                    )));
                }
                _ => {}
            }
        }
        Ok(UplProgram {
            space,
            subsystems,
            gates,
            iterations,
        })
    }

    /// Gates taken from the standard set, labelled by name.
    pub fn with_standard_gates(
        space: BargmannSpace,
        subsystems: Vec<Subsystem>,
        gates: &[GateName],
        iterations: usize,
    ) -> Result<Self> {
        let gates = gates
            .iter()
            .map(|g| Ok((g.to_string(), g.operator()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, subsystems, gates, iterations)
    }

    pub fn space(&self) -> &BargmannSpace {
        &self.space
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn gates(&self) -> &[(String, DiffOp)] {
        &self.gates
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Variable groups of the joint state, one per subsystem.
    pub fn partition(&self) -> Result<SubsystemPartition> {
        let mut groups = Vec::with_capacity(self.subsystems.len());
        let mut next = 0;
        for s in &self.subsystems {
            let d = s.source.dim();
            groups.push((next..next + d).collect());
            next += d;
        }
        SubsystemPartition::new(next, groups)
    }
}

/// Serialized form: `{space: {dim, t}, subsystems: [...], gates: [...], iterations}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UplProgramSpec {
    pub space: SpaceSpec,
    pub subsystems: Vec<Subsystem>,
    #[serde(default)]
    pub gates: Vec<String>,
    #[serde(default = "one")]
    pub iterations: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub t: f64,
}

impl TryFrom<UplProgramSpec> for UplProgram {
    type Error = HoloError;

    fn try_from(spec: UplProgramSpec) -> Result<Self> {
        let space = BargmannSpace::new(spec.space.dim, spec.space.t)?;
        let gates = spec
            .gates
            .iter()
            .map(|g| g.parse::<GateName>())
            .collect::<Result<Vec<_>>>()?;
        UplProgram::with_standard_gates(space, spec.subsystems, &gates, spec.iterations)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Classical,
    Quantum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub gate: String,
    pub input: HoloPoly,
    pub output: HoloPoly,
    pub expectation: C64,
    pub classification: Classification,
}

/// Disjoint variable groups covering `0..dim`, one per subsystem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemPartition {
    dim: usize,
    groups: Vec<Vec<usize>>,
}

impl SubsystemPartition {
    pub fn new(dim: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.iter().any(Vec::is_empty) || groups.is_empty() {
            return Err(HoloError::InvalidPartition("groups must be non-empty".into()));
        }
        let mut seen = vec![false; dim];
        for &v in groups.iter().flatten() {
            if v >= dim || seen[v] {
                return Err(HoloError::InvalidPartition(format!("variable {v} out of range or repeated")));
            }
            seen[v] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(HoloError::InvalidPartition(format!("variable {missing} not covered")));
        }
        Ok(SubsystemPartition { dim, groups })
    }

    /// All variables in one subsystem.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(dim, vec![(0..dim).collect()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

/// Quantum when the state does not factor across the subsystems, or when some
/// subsystem factor is a superposition of two or more occupation monomials.
pub fn classify_state(f: &HoloPoly, partition: &SubsystemPartition) -> Result<Classification> {
    if f.is_zero() {
        return Err(HoloError::ZeroState);
    }
    if f.dim() != partition.dim {
        return Err(HoloError::DimensionMismatch {
            expected: partition.dim,
            found: f.dim(),
        });
    }
    if partition.groups.len() == 1 {
        return Ok(occupation(f.terms().map(|(_, c)| *c)));
    }
    for g in &partition.groups {
        let rest: Vec<usize> = (0..partition.dim).filter(|v| !g.contains(v)).collect();
        let cm = f.coefficient_matrix(&Partition::new(partition.dim, g.clone(), rest)?)?;
        if cm.rank(CLASSIFY_TOL) > 1 {
            return Ok(Classification::Quantum);
        }
        let (factor, _) = cm.leading_factors();
        if occupation(factor) == Classification::Quantum {
            return Ok(Classification::Quantum);
        }
    }
    Ok(Classification::Classical)
}

fn occupation(coeffs: impl IntoIterator<Item = C64>) -> Classification {
    let norms: Vec<f64> = coeffs.into_iter().map(|c| c.norm()).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    if norms.iter().filter(|&&n| n > CLASSIFY_TOL * top).count() >= 2 {
        Classification::Quantum
    } else {
        Classification::Classical
    }
}

/// Run L1 to L8 and return the catalog sorted by gate label.
pub fn run_upl(program: &UplProgram) -> Result<Vec<PatternRecord>> {
    run_upl_with_inbox(program, &[])
}

/// As [`run_upl`], additionally sweeping the gates over every upstream output
/// state that lives in this program's space.
pub fn run_upl_with_inbox(program: &UplProgram, inbox: &[PatternRecord]) -> Result<Vec<PatternRecord>> {
    let space = &program.space;
    let partition = program.partition().map_err(|e| e.at_instruction(3))?;
    let extra: Vec<&HoloPoly> = inbox
        .iter()
        .map(|r| &r.output)
        .filter(|p| p.dim() == space.dim() && !p.is_zero())
        .collect();

    let mut catalog: Vec<PatternRecord> = Vec::new();
    let mut keys = BTreeSet::new();
    for step in 0..program.iterations {
        // L1, L2
        let factors = program
            .subsystems
            .iter()
            .map(|s| resolve(space, s, step))
            .collect::<Result<Vec<_>>>()?;
        // L3
        let joint = factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.tensor(f));
        if joint.dim() != space.dim() {
            return Err(HoloError::DimensionMismatch {
                expected: space.dim(),
                found: joint.dim(),
            }
            .at_instruction(3));
        }
        let inputs = std::iter::once(&joint).chain(extra.iter().copied());
        for input in inputs {
            for (label, op) in &program.gates {
                // L4
                let output = op.apply(input).map_err(|e| e.at_instruction(4))?;
                // L5
                let classification = if output.is_zero() {
                    Classification::Classical
                } else {
                    classify_state(&output, &partition).map_err(|e| e.at_instruction(5))?
                };
                // L6
                let e = expectation(space, op, input, Normalization::Normalized).map_err(|e| e.at_instruction(6))?;
                // L7, L8
                if keys.insert((label.clone(), dedup_key(e.re), dedup_key(e.im))) {
                    catalog.push(PatternRecord {
                        gate: label.clone(),
                        input: input.clone(),
                        output,
                        expectation: e,
                        classification,
                    });
                }
            }
        }
    }
    catalog.sort_by(|a, b| a.gate.cmp(&b.gate));
    Ok(catalog)
}

fn dedup_key(x: f64) -> i64 {
    (x / DEDUP_TOL).round() as i64
}

fn resolve(space: &BargmannSpace, s: &Subsystem, step: usize) -> Result<HoloPoly> {
    match &s.source {
        StateSource::Poly(p) => Ok(p.clone()),
        StateSource::Sequence(seq) => Ok(seq[step % seq.len()].clone()),
        StateSource::Sampled {
            x_min,
            dx,
            values,
            degree,
        } => {
            let samples = SampledFunction::from_grid(*x_min, *dx, values).map_err(|e| e.at_instruction(1))?;
            let line = BargmannSpace::new(1, space.t()).map_err(|e| e.at_instruction(2))?;
            line.sb_taylor(&samples, *degree).map_err(|e| e.at_instruction(2))
        }
    }
}

/// A program bound to a time scale.
#[derive(Clone, Debug)]
pub struct Layer {
    pub time_scale: f64,
    pub program: UplProgram,
    /// Sweep the gates over the previous layer's output states as well.
    pub consume_inbox: bool,
}

impl Layer {
    pub fn new(time_scale: f64, program: UplProgram) -> Self {
        Layer {
            time_scale,
            program,
            consume_inbox: false,
        }
    }

    pub fn consuming_inbox(mut self) -> Self {
        self.consume_inbox = true;
        self
    }
}

/// Layers with strictly increasing time scales.
#[derive(Clone, Debug)]
pub struct Schedule {
    layers: Vec<Layer>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// 1-based layer index.
    pub index: usize,
    pub time_scale: f64,
    pub start_tick: u64,
    pub end_tick: u64,
    pub catalog_size: usize,
    pub inbox_size: usize,
}

#[derive(Clone, Debug)]
pub struct ScheduleRun {
    pub trace: Vec<TraceEntry>,
    pub catalogs: Vec<Vec<PatternRecord>>,
}

impl Schedule {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(HoloError::InvalidParameter("a schedule needs at least one layer".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            let bad_prev = i > 0 && l.time_scale <= layers[i - 1].time_scale;
            if !l.time_scale.is_finite() || bad_prev {
                return Err(HoloError::NonMonotonicTimeScale { index: i + 1 });
            }
        }
        Ok(Schedule { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Run the layers in order. Layer `i + 1` starts one tick after layer `i`
    /// ends, and a layer spends one tick per catalog record.
    pub fn run(&self) -> Result<ScheduleRun> {
        let mut trace = Vec::with_capacity(self.layers.len());
        let mut catalogs: Vec<Vec<PatternRecord>> = Vec::with_capacity(self.layers.len());
        let mut end = 0u64;
        for (i, layer) in self.layers.iter().enumerate() {
            let inbox: &[PatternRecord] = catalogs.last().map(Vec::as_slice).unwrap_or(&[]);
            let start = end + 1;
            let catalog = if layer.consume_inbox {
                run_upl_with_inbox(&layer.program, inbox)?
            } else {
                run_upl(&layer.program)?
            };
            end = start + catalog.len() as u64;
            if let Some(prev) = trace.last() {
                let prev: &TraceEntry = prev;
                assert!(prev.end_tick < start, "layer {} started before layer {} ended", i + 1, i);
            }
            trace.push(TraceEntry {
                index: i + 1,
                time_scale: layer.time_scale,
                start_tick: start,
                end_tick: end,
                catalog_size: catalog.len(),
                inbox_size: inbox.len(),
            });
            catalogs.push(catalog);
        }
        Ok(ScheduleRun { trace, catalogs })
    }
}

/// Serialized schedule: `{layers: [{time_scale, program, consume_inbox}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub layers: Vec<LayerSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub time_scale: f64,
    pub program: UplProgramSpec,
    #[serde(default)]
    pub consume_inbox: bool,
}

impl TryFrom<ScheduleSpec> for Schedule {
    type Error = HoloError;

    fn try_from(spec: ScheduleSpec) -> Result<Self> {
        let layers = spec
            .layers
            .into_iter()
            .map(|l| {
                Ok(Layer {
                    time_scale: l.time_scale,
                    program: UplProgram::try_from(l.program)?,
                    consume_inbox: l.consume_inbox,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(layers)
    }
}
