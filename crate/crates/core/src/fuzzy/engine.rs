use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{FuzzyError, MembershipFunction};

/// Default sampling step over the output domain.
pub const DEFAULT_DEFUZZ_STEP: f64 = 0.005;

/// Crisp values keyed by input variable name.
pub type CrispInputs = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedSet {
    pub label: String,
    pub mf: MembershipFunction,
}

/// A named dimension over `[lo, hi]` partitioned into labelled fuzzy sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinguisticVariable {
    name: String,
    domain: (f64, f64),
    sets: Vec<NamedSet>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        domain: (f64, f64),
        sets: Vec<(String, MembershipFunction)>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidVariable {
                name,
                reason: format!("degenerate domain [{lo}, {hi}]"),
            });
        }
        let mut seen = HashSet::new();
        for (label, _) in &sets {
            if !seen.insert(label.as_str()) {
                return Err(FuzzyError::InvalidVariable {
                    name,
                    reason: format!("duplicate label `{label}`"),
                });
            }
        }
        let sets = sets
            .into_iter()
            .map(|(label, mf)| NamedSet { label, mf })
            .collect();
        Ok(Self { name, domain, sets })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn sets(&self) -> &[NamedSet] {
        &self.sets
    }

    pub fn set(&self, label: &str) -> Option<&MembershipFunction> {
        self.sets.iter().find(|s| s.label == label).map(|s| &s.mf)
    }

    fn position(&self, label: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }
}

/// `variable is label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Antecedent {
    pub variable: String,
    pub label: String,
}

impl Antecedent {
    pub fn new(variable: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            label: label.into(),
        }
    }
}

/// `IF a1 AND a2 AND ... THEN consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzyRule {
    pub antecedents: Vec<Antecedent>,
    pub consequent: Antecedent,
}

impl FuzzyRule {
    pub fn new(antecedents: Vec<Antecedent>, consequent: Antecedent) -> Self {
        Self {
            antecedents,
            consequent,
        }
    }
}

#[derive(Debug, Clone)]
struct ResolvedRule {
    antecedents: Vec<(usize, usize)>,
    consequent: usize,
}

/// Output fuzzy set sampled on a uniform grid over the output domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

impl Aggregate {
    /// Samples `f` on `[lo, hi]`. The effective step is `(hi - lo) / n` with
    /// `n = round((hi - lo) / step)`, so both ends are grid points.
    pub fn sample(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> Result<Self, FuzzyError> {
        let n = grid_intervals(lo, hi, step)?;
        let values = (0..=n).map(|i| f(grid_point(lo, hi, n, i))).collect();
        Ok(Self { lo, hi, values })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.intervals() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(y, degree)` pairs across the grid.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.intervals();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (grid_point(self.lo, self.hi, n, i), v))
    }

    fn intervals(&self) -> usize {
        self.values.len() - 1
    }
}

fn grid_intervals(lo: f64, hi: f64, step: f64) -> Result<usize, FuzzyError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(FuzzyError::InvalidStep(step));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(FuzzyError::InvalidVariable {
            name: "<output>".into(),
            reason: format!("degenerate domain [{lo}, {hi}]"),
        });
    }
    Ok((((hi - lo) / step).round() as usize).max(1))
}

fn grid_point(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / n as f64)
    }
}

/// Centre of mass of the sampled set, `sum(w * y * mu(y)) / sum(w * mu(y))`,
/// with trapezoid weights (`w = 1/2` at the two ends, 1 elsewhere). The
/// half weights matter when a set is cut off by the domain edge.
pub fn defuzzify_centroid(aggregate: &Aggregate) -> Result<f64, FuzzyError> {
    let last = aggregate.values.len() - 1;
    let (num, den) = aggregate
        .points()
        .enumerate()
        .fold((0.0, 0.0), |(num, den), (i, (y, mu))| {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            (num + w * y * mu, den + w * mu)
        });
    if den <= 0.0 {
        return Err(FuzzyError::NoRuleFired);
    }
    Ok((num / den).clamp(aggregate.lo, aggregate.hi))
}

/// Result of a full inference pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inference {
    pub activations: Vec<f64>,
    pub aggregate: Aggregate,
    pub crisp: f64,
}

/// An immutable Mamdani system: inputs, one output, AND-rules.
#[derive(Debug, Clone)]
pub struct InferenceEngine {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<FuzzyRule>,
    resolved: Vec<ResolvedRule>,
    defuzz_step: f64,
    /// Consequent set samples on the output grid, one row per output set.
    output_samples: Vec<Vec<f64>>,
    grid_len: usize,
}

impl InferenceEngine {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<FuzzyRule>,
        defuzz_step: f64,
    ) -> Result<Self, FuzzyError> {
        let mut names = HashSet::new();
        for var in inputs.iter().chain(std::iter::once(&output)) {
            if !names.insert(var.name()) {
                return Err(FuzzyError::InvalidVariable {
                    name: var.name().to_string(),
                    reason: "duplicate variable name".into(),
                });
            }
        }
        let resolved = rules
            .iter()
            .map(|rule| resolve(&inputs, &output, rule))
            .collect::<Result<Vec<_>, _>>()?;

        let (lo, hi) = output.domain();
        let n = grid_intervals(lo, hi, defuzz_step)?;
        let output_samples = output
            .sets()
            .iter()
            .map(|s| {
                (0..=n)
                    .map(|i| s.mf.evaluate(grid_point(lo, hi, n, i)))
                    .collect()
            })
            .collect();

        Ok(Self {
            inputs,
            output,
            rules,
            resolved,
            defuzz_step,
            output_samples,
            grid_len: n + 1,
        })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn defuzz_step(&self) -> f64 {
        self.defuzz_step
    }

    /// Activation of `rule`: the minimum antecedent degree at `inputs`.
    pub fn fire_rule(&self, rule: &FuzzyRule, inputs: &CrispInputs) -> Result<f64, FuzzyError> {
        let resolved = resolve(&self.inputs, &self.output, rule)?;
        let values = self.ordered_inputs(inputs)?;
        Ok(self.fire_resolved(&resolved, &values))
    }

    /// Activations of every rule, in rule order.
    pub fn activations(&self, inputs: &CrispInputs) -> Result<Vec<f64>, FuzzyError> {
        let values = self.ordered_inputs(inputs)?;
        Ok(self.activations_ordered(&values))
    }

    /// Like [`activations`](Self::activations) with inputs given in the
    /// engine's input order.
    pub fn activations_ordered(&self, values: &[f64]) -> Vec<f64> {
        self.resolved
            .iter()
            .map(|r| self.fire_resolved(r, values))
            .collect()
    }

    /// Clip each consequent at its rule's activation and take the pointwise max.
    pub fn aggregate(&self, activations: &[f64]) -> Result<Aggregate, FuzzyError> {
        if activations.len() != self.resolved.len() {
            return Err(FuzzyError::ActivationCount {
                expected: self.resolved.len(),
                found: activations.len(),
            });
        }
        let (lo, hi) = self.output.domain();
        let mut values = vec![0.0_f64; self.grid_len];
        for (rule, &alpha) in self.resolved.iter().zip(activations) {
            if alpha <= 0.0 {
                continue;
            }
            let samples = &self.output_samples[rule.consequent];
            for (v, &mu) in values.iter_mut().zip(samples) {
                *v = (*v).max(mu.min(alpha));
            }
        }
        Ok(Aggregate { lo, hi, values })
    }

    pub fn infer(&self, inputs: &CrispInputs) -> Result<Inference, FuzzyError> {
        let values = self.ordered_inputs(inputs)?;
        self.infer_ordered(&values)
    }

    /// Full pass with inputs in the engine's input order.
    pub fn infer_ordered(&self, values: &[f64]) -> Result<Inference, FuzzyError> {
        if values.len() != self.inputs.len() {
            return Err(FuzzyError::MissingInput(format!(
                "expected {} inputs, got {}",
                self.inputs.len(),
                values.len()
            )));
        }
        let activations = self.activations_ordered(values);
        let aggregate = self.aggregate(&activations)?;
        let crisp = defuzzify_centroid(&aggregate)?;
        Ok(Inference {
            activations,
            aggregate,
            crisp,
        })
    }

    fn fire_resolved(&self, rule: &ResolvedRule, values: &[f64]) -> f64 {
        rule.antecedents
            .iter()
            .map(|&(var, set)| self.inputs[var].sets()[set].mf.evaluate(values[var]))
            .fold(1.0, f64::min)
    }

    fn ordered_inputs(&self, inputs: &CrispInputs) -> Result<Vec<f64>, FuzzyError> {
        self.inputs
            .iter()
            .map(|v| {
                inputs
                    .get(v.name())
                    .copied()
                    .ok_or_else(|| FuzzyError::MissingInput(v.name().to_string()))
            })
            .collect()
    }
}

fn resolve(
    inputs: &[LinguisticVariable],
    output: &LinguisticVariable,
    rule: &FuzzyRule,
) -> Result<ResolvedRule, FuzzyError> {
    if rule.antecedents.is_empty() {
        return Err(FuzzyError::EmptyRule);
    }
    let antecedents = rule
        .antecedents
        .iter()
        .map(|a| {
            let var = inputs
                .iter()
                .position(|v| v.name() == a.variable)
                .ok_or_else(|| FuzzyError::UnknownVariable(a.variable.clone()))?;
            let set = inputs[var]
                .position(&a.label)
                .ok_or_else(|| FuzzyError::UnknownLabel {
                    variable: a.variable.clone(),
                    label: a.label.clone(),
                })?;
            Ok((var, set))
        })
        .collect::<Result<Vec<_>, FuzzyError>>()?;
    if rule.consequent.variable != output.name() {
        return Err(FuzzyError::ConsequentNotOutput {
            expected: output.name().to_string(),
            found: rule.consequent.variable.clone(),
        });
    }
    let consequent =
        output
            .position(&rule.consequent.label)
            .ok_or_else(|| FuzzyError::UnknownLabel {
                variable: output.name().to_string(),
                label: rule.consequent.label.clone(),
            })?;
    Ok(ResolvedRule {
        antecedents,
        consequent,
    })
}
