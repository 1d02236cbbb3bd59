//! Scenario files: the JSON schema and its validation into ready-to-run data.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::generate::{generate_random_metric, Constraint, GeneratedMetric};
use super::literal::{matrix_from_literal, ElementLiteral, MatrixLiteral};
use crate::connections::{Flavor, Metric, TorsionKind};
use crate::curvature::{invariants::InvariantExpression, CurvatureSetup};
use crate::error::{Error, Result};
use crate::gauge::{ad_map, Cocycle, GaugeElement};
use crate::local_field::{matrix, teichmuller, FieldSpec, GaloisElement, HigherFrobenius, LocalField, Matrix, PadicElement};
use crate::weil_monoid::{FiniteGroup, Gamma, Labeling, WeilMonoid};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub nu: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_modulus: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisInput {
    /// j for each sigma_j in the subgroup
    pub sigma_exponents: Vec<usize>,
    /// phi(pi) = pi; when false, `phi_sigma` gives the sigma_j with phi = phi_0 sigma_j
    #[serde(default = "yes")]
    pub phi_fixes_pi: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_sigma: Option<usize>,
    /// the degree c of phi
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galois: Option<GaloisInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub enum GammaInput {
    Constant(usize),
    Sequence(Vec<usize>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaInput>,
    /// explicit[t - 1] lists the group elements labelled at degree t c
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintInput {
    UnitDiagonal,
    Diagonal,
    AdInvariant,
    CocycleCompatible,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomMetricInput {
    #[serde(default)]
    pub constraints: Vec<ConstraintInput>,
    /// size of the metric; defaults to the monoid size
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricInput {
    Random { random: RandomMetricInput },
    Literal(MatrixLiteral),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionInput {
    pub kind: TorsionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ElementLiteral>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointInput {
    Named(String),
    Literal(MatrixLiteral),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeInput {
    pub perm: Vec<usize>,
    /// Teichmuller lifts of roots of unity; all ones when omitted
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<ElementLiteral>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleInput {
    /// either the whole domain, or one generator of a cyclic domain
    pub tau_exponents: Vec<usize>,
    pub values: Vec<GaugeInput>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantInput {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<LabelingInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricInput>,
    /// q^{(2c)}; defaults to the canonical secondary metric
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_metric: Option<MatrixLiteral>,
    /// q^{(2c)} = lambda q^{(c)}
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal_factor: Option<ElementLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<TorsionInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<Flavor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub commands: Vec<String>,
    /// working precision nu, overriding field.nu
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<InvariantInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// One file holds a single scenario or a batch.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScenarioFile {
    Batch(Vec<Scenario>),
    Single(Box<Scenario>),
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Vec<Scenario>> {
        // parse as a value first so schema errors name the offending field
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        match value {
            serde_json::Value::Array(items) => items
                .into_iter()
                .enumerate()
                .map(|(i, v)| serde_json::from_value(v).map_err(|e| Error::Schema(format!("scenario {i}: {e}"))))
                .collect(),
            v => Ok(vec![serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?]),
        }
    }
}

pub const COMMANDS: [&str; 14] = [
    "monoid-analyze",
    "ideal-bases",
    "cohomology-witness",
    "solve-connection",
    "curvature",
    "verify-tery",
    "verify-ursuh",
    "verify-antisymm",
    "verify-wqq",
    "kn-test",
    "invariants",
    "gauge-check",
    "ad-check",
    "legendre",
];

/// A validated scenario with every cross-reference resolved.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub field: Arc<LocalField>,
    pub monoid: WeilMonoid,
    pub labeling: Labeling,
    pub flavor: Flavor,
    pub torsion_kind: TorsionKind,
    pub torsion_scale: PadicElement,
    pub metric: Option<Metric>,
    pub generated: Option<GeneratedMetric>,
    pub secondary: Option<Metric>,
    pub conformal_factor: Option<PadicElement>,
    pub point: Matrix,
    pub cocycle: Option<Cocycle>,
    pub invariants: Vec<InvariantExpression>,
    pub commands: Vec<String>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn build_field(input: &FieldInput, precision: Option<u32>) -> Result<Arc<LocalField>> {
    let nu = precision.unwrap_or(input.nu);
    let mut spec = FieldSpec::new(input.p, input.f, input.e, nu)?;
    if let Some(m) = &input.residue_modulus {
        spec.residue_modulus = m.clone();
        spec.validate()?;
    }
    LocalField::new(spec)
}

fn build_monoid(field: &Arc<LocalField>, input: Option<&MonoidInput>) -> Result<WeilMonoid> {
    let galois_default = MonoidInput {
        galois: Some(GaloisInput { sigma_exponents: (0..field.e()).collect(), phi_fixes_pi: true, phi_sigma: None, c: None }),
        group: None,
        cyclic: None,
        theta: None,
        c: None,
    };
    let input = input.unwrap_or(&galois_default);
    let chosen = [input.galois.is_some(), input.group.is_some(), input.cyclic.is_some()].iter().filter(|x| **x).count();
    if chosen != 1 {
        return Err(schema("monoid needs exactly one of \"galois\", \"group\" or \"cyclic\""));
    }
    if let Some(g) = &input.galois {
        if input.theta.is_some() || input.c.is_some() {
            return Err(schema("a galois monoid takes its degree from galois.c and theta from phi"));
        }
        let j = match (g.phi_fixes_pi, g.phi_sigma) {
            (true, None) | (true, Some(0)) => 0,
            (true, Some(_)) => return Err(schema("phi_fixes_pi = true contradicts a nonzero phi_sigma")),
            (false, Some(j)) if j % field.e() != 0 => j,
            (false, _) => return Err(schema("phi_fixes_pi = false needs phi_sigma not divisible by e")),
        };
        let c = g.c.unwrap_or(1);
        if c == 0 {
            return Err(schema("galois.c must be positive"));
        }
        let sub: Vec<GaloisElement> = g.sigma_exponents.iter().map(|&j| GaloisElement { j }).collect();
        if sub.is_empty() {
            return Err(schema("sigma_exponents must not be empty"));
        }
        return WeilMonoid::galois_realization(field, HigherFrobenius::new(c, j), &sub);
    }
    let group = if let Some(g) = &input.group {
        if g.table.len() != g.order {
            return Err(schema(format!("group table has {} rows, order is {}", g.table.len(), g.order)));
        }
        FiniteGroup::from_table(g.table.clone())?
    } else {
        FiniteGroup::cyclic(input.cyclic.unwrap_or(1))
    };
    let theta = input.theta.clone().unwrap_or_else(|| (0..group.order()).collect());
    if theta.len() != group.order() {
        return Err(schema(format!("theta has {} entries, the group has order {}", theta.len(), group.order())));
    }
    WeilMonoid::from_pair(group, theta, input.c.unwrap_or(1))
}

fn build_labeling(m: &WeilMonoid, input: Option<&LabelingInput>) -> Result<Labeling> {
    let n = m.n();
    let Some(input) = input else { return Ok(Labeling::standard(m)) };
    let check = |v: &[usize], what: &str| -> Result<()> {
        let mut s = v.to_vec();
        s.sort();
        if s != (0..n).collect::<Vec<_>>() {
            return Err(schema(format!("{what} {v:?} is not a bijection onto the {n} group elements")));
        }
        Ok(())
    };
    if let Some(levels) = &input.explicit {
        if input.omega.is_some() || input.gamma.is_some() {
            return Err(schema("an explicit labeling excludes omega and gamma"));
        }
        if levels.is_empty() {
            return Err(schema("explicit labeling needs at least degree c"));
        }
        for l in levels {
            check(l, "explicit labeling level")?;
        }
        return Ok(Labeling::explicit(levels.clone()));
    }
    let omega = input.omega.clone().unwrap_or_else(|| (0..n).collect());
    check(&omega, "omega")?;
    let identity_index = omega.iter().position(|&g| g == m.group().identity()).expect("omega is a bijection");
    let gamma = match &input.gamma {
        None => Gamma::Constant(identity_index),
        Some(GammaInput::Constant(h)) => Gamma::Constant(*h),
        Some(GammaInput::Sequence(v)) if v.is_empty() => return Err(schema("gamma sequence is empty")),
        Some(GammaInput::Sequence(v)) => Gamma::Sequence(v.clone()),
    };
    let bad = match &gamma {
        Gamma::Constant(h) => *h >= n,
        Gamma::Sequence(v) => v.iter().any(|h| *h >= n),
    };
    if bad {
        return Err(schema(format!("gamma indices must lie in 0..{n}")));
    }
    Ok(Labeling::coherent(omega, gamma))
}

fn build_gauge(field: &Arc<LocalField>, g: &GaugeInput) -> Result<GaugeElement> {
    let fq = field.residue_field();
    let diag = match &g.diag {
        None => vec![fq.one(); g.perm.len()],
        Some(d) => d
            .iter()
            .map(|lit| {
                let x = lit.to_element(field)?;
                let r = x.residue();
                if teichmuller(field, &r, x.precision()) != x {
                    return Err(schema("cocycle diagonal entries must be Teichmuller lifts of roots of unity"));
                }
                Ok(r)
            })
            .collect::<Result<_>>()?,
    };
    GaugeElement::new(g.perm.clone(), diag)
}

fn build_cocycle(field: &Arc<LocalField>, input: &CocycleInput) -> Result<Cocycle> {
    if input.tau_exponents.len() != input.values.len() {
        return Err(schema("cocycle needs one value per tau exponent"));
    }
    if input.tau_exponents.iter().any(|j| j % field.e() != 0) {
        field.spec().require_galois()?;
    }
    let taus: Vec<GaloisElement> = input.tau_exponents.iter().map(|&j| GaloisElement { j }).collect();
    let values: Vec<GaugeElement> = input.values.iter().map(|g| build_gauge(field, g)).collect::<Result<_>>()?;
    match (taus.as_slice(), values.as_slice()) {
        // a single generator determines the cocycle on the cyclic group it generates
        ([tau], [u]) if tau.j % field.e() != 0 => Cocycle::cyclic(field, *tau, u),
        _ => Cocycle::new(field, taus, values),
    }
}

impl Scenario {
    /// Validates the scenario and resolves every reference. `seed` and
    /// `precision` override the scenario fields, `commands` the command list.
    pub fn prepare(&self, seed: Option<u64>, precision: Option<u32>, commands: Option<&[String]>) -> Result<Prepared> {
        let field = build_field(&self.field, precision.or(self.precision))?;
        let monoid = build_monoid(&field, self.monoid.as_ref())?;
        let labeling = build_labeling(&monoid, self.labeling.as_ref())?;
        let seed = seed.or(self.seed).unwrap_or(0);
        let commands: Vec<String> = commands.map(|c| c.to_vec()).unwrap_or_else(|| self.commands.clone());
        for c in &commands {
            if !COMMANDS.contains(&c.as_str()) {
                return Err(schema(format!("unknown command {c:?}; expected one of {}", COMMANDS.join(", "))));
            }
        }
        let cocycle = self.cocycle.as_ref().map(|c| build_cocycle(&field, c)).transpose()?;
        let (metric, generated) = match &self.metric {
            None => (None, None),
            Some(MetricInput::Literal(m)) => (Some(Metric::new(matrix_from_literal(&field, m)?, monoid.c())?), None),
            Some(MetricInput::Random { random }) => {
                let n = random.n.unwrap_or(monoid.n());
                let constraints = random
                    .constraints
                    .iter()
                    .map(|c| {
                        Ok(match c {
                            ConstraintInput::UnitDiagonal => Constraint::UnitDiagonal,
                            ConstraintInput::Diagonal => Constraint::Diagonal,
                            ConstraintInput::AdInvariant => Constraint::AdInvariant(ad_map(&monoid, &labeling, 1)?),
                            ConstraintInput::CocycleCompatible => Constraint::CocycleCompatible(
                                cocycle.clone().ok_or_else(|| schema("cocycle-compatible needs a \"cocycle\" field"))?,
                            ),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let g = generate_random_metric(&field, n, seed, &constraints)?;
                let q = Metric::new(g.metric.entries.clone(), monoid.c())?;
                (Some(q), Some(g))
            }
        };
        if let (Some(q), Some(u)) = (&metric, &cocycle) {
            if q.n() != u.n() {
                return Err(Error::Dimension(format!("metric is {0}x{0} but the cocycle acts on {1} coordinates", q.n(), u.n())));
            }
        }
        let n_metric = metric.as_ref().map(|q| q.n()).unwrap_or(monoid.n());
        if self.secondary_metric.is_some() && self.conformal_factor.is_some() {
            return Err(schema("give at most one of secondary_metric and conformal_factor"));
        }
        let conformal_factor = self.conformal_factor.as_ref().map(|x| x.to_element(&field)).transpose()?;
        if conformal_factor.as_ref().is_some_and(|x| !x.is_unit()) {
            return Err(Error::NotAUnit);
        }
        let secondary = match (&self.secondary_metric, &conformal_factor, &metric) {
            (Some(m), _, _) => Some(Metric::new(matrix_from_literal(&field, m)?, 2 * monoid.c())?),
            (None, Some(lam), Some(q)) => Some(Metric::new(q.scaled(lam).entries, 2 * monoid.c())?),
            (None, Some(_), None) => return Err(schema("conformal_factor needs a metric")),
            _ => None,
        };
        if let (Some(q2), Some(q)) = (&secondary, &metric) {
            if q2.n() != q.n() {
                return Err(Error::Dimension("secondary metric size differs from the metric size".into()));
            }
        }
        let (torsion_kind, torsion_scale) = match &self.torsion {
            None => (TorsionKind::Zero, PadicElement::one(&field, field.nu())),
            Some(t) => {
                let scale = t.scale.clone().unwrap_or(ElementLiteral::int(1)).to_element(&field)?;
                (t.kind, scale)
            }
        };
        let point = match &self.point {
            None => matrix::identity(&field, n_metric, field.nu()),
            Some(PointInput::Named(s)) if s == "identity" => matrix::identity(&field, n_metric, field.nu()),
            Some(PointInput::Named(s)) => return Err(schema(format!("point must be \"identity\" or a matrix, got {s:?}"))),
            Some(PointInput::Literal(m)) => {
                let a = matrix_from_literal(&field, m)?;
                if a.len() != n_metric || a.iter().any(|r| r.len() != n_metric) {
                    return Err(Error::Dimension(format!("point must be {n_metric}x{n_metric}")));
                }
                if !matrix::det(&a).is_unit() {
                    return Err(Error::NotAUnit);
                }
                a
            }
        };
        let invariants = self
            .invariants
            .iter()
            .flatten()
            .map(|i| InvariantExpression::parse(&i.name, &i.expr))
            .collect::<Result<_>>()?;
        Ok(Prepared {
            name: self.name.clone().unwrap_or_default(),
            seed,
            samples: self.samples.unwrap_or(5),
            field,
            monoid,
            labeling,
            flavor: self.flavor.unwrap_or(Flavor::LeviCivita),
            torsion_kind,
            torsion_scale,
            metric,
            generated,
            secondary,
            conformal_factor,
            point,
            cocycle,
            invariants,
            commands,
        })
    }
}

impl Prepared {
    pub fn metric(&self) -> Result<&Metric> {
        self.metric.as_ref().ok_or_else(|| schema("this command needs a \"metric\""))
    }

    pub fn lifts(&self) -> Result<Vec<HigherFrobenius>> {
        let m = &self.monoid;
        (0..m.n())
            .map(|i| {
                m.realize(self.labeling.element(m, 1, i))
                    .ok_or_else(|| Error::InvalidSpec("connections need a galois monoid to realize the lifts".into()))
            })
            .collect()
    }

    /// The curvature data for a flavor: canonical choices at degree 2c unless
    /// the scenario overrides the secondary metric.
    pub fn setup(&self, flavor: Flavor) -> Result<CurvatureSetup> {
        let q = self.metric()?.clone();
        if q.n() != self.monoid.n() {
            return Err(Error::Dimension(format!("curvature needs N = n = {}, the metric is {}x{}", self.monoid.n(), q.n(), q.n())));
        }
        let mut s = CurvatureSetup::canonical(self.monoid.clone(), self.labeling.clone(), flavor, q, self.torsion_kind, &self.torsion_scale)?;
        if let Some(q2) = &self.secondary {
            s.q2 = q2.clone();
        }
        Ok(s)
    }
}
