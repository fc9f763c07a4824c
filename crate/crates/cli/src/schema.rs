//! JSON instance files: groups, flows, ambits, relations, lattices and structured scenarios.
//!
//! Every file is a single JSON object; its kind is read off the keys it carries.
//! Product-space indices are row-major.

use std::path::Path;
use std::sync::Arc;

use elliskit_core::algebra::{named_group_capped, AlgebraError, FiniteGroup, GroupName};
use elliskit_core::flows::{make_ambit, make_flow, ActionSpec, Ambit, Flow, FlowError};
use elliskit_core::grouplike::GroupLikeError;
use elliskit_core::relations::{invariant_relations, make_relation, EquivRelation, RelationError};
use elliskit_core::structured::{make_lattice, Ground, LatticeBuild, PseudoClosedLattice, StructuredError, StructuredInstance};
use elliskit_core::{BitSet, Caps};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
    Table {
        mul: Vec<Vec<u32>>,
    },
    Named {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKeyword {
    Natural,
    Regular,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionField {
    Keyword(ActionKeyword),
    GeneratorImages { generator_images: Vec<Vec<u32>> },
    ElementMaps { element_maps: Vec<Vec<u32>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub group: GroupSpec,
    pub points: usize,
    pub action: ActionField,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transformations: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbitSpec {
    pub group: GroupSpec,
    pub points: usize,
    pub action: ActionField,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transformations: Vec<Vec<u32>>,
    pub basepoint: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub points: usize,
    pub classes: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// One of `G`, `X`, `GxX`, `X^2`, `(X^2)^2`, `XxG`.
    pub ground: String,
    /// Size of the ground set; inferred from the largest member when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub sets: Vec<Vec<u32>>,
    #[serde(default)]
    pub auto_complete: bool,
}

/// A flow with lattices on its product spaces. Missing `G` or `X` lattices default to
/// discrete ones, missing product lattices to the products of their factors. With no
/// relations listed, every invariant relation is examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub flow: FlowSpec,
    #[serde(default)]
    pub lattices: Vec<LatticeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceFile {
    Group(GroupSpec),
    Flow(FlowSpec),
    Ambit(AmbitSpec),
    Relation(RelationSpec),
    Lattice(LatticeSpec),
    Scenario(ScenarioSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Group,
    Flow,
    Ambit,
    Relation,
    Lattice,
    Scenario,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Group => "group",
            InstanceKind::Flow => "flow",
            InstanceKind::Ambit => "ambit",
            InstanceKind::Relation => "relation",
            InstanceKind::Lattice => "lattice",
            InstanceKind::Scenario => "scenario",
        }
    }
}

impl InstanceFile {
    pub fn kind(&self) -> InstanceKind {
        match self {
            InstanceFile::Group(_) => InstanceKind::Group,
            InstanceFile::Flow(_) => InstanceKind::Flow,
            InstanceFile::Ambit(_) => InstanceKind::Ambit,
            InstanceFile::Relation(_) => InstanceKind::Relation,
            InstanceFile::Lattice(_) => InstanceKind::Lattice,
            InstanceFile::Scenario(_) => InstanceKind::Scenario,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Structured(#[from] StructuredError),
    #[error(transparent)]
    GroupLike(#[from] GroupLikeError),
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{}: {}", .error.line, .error.message)]
    Parse { path: String, error: ParseError },
    #[error("{path}: expected a {expected} file, found a {found} file")]
    WrongKind { path: String, expected: &'static str, found: &'static str },
    #[error("{path}: {error}")]
    Validation { path: String, error: ValidationError },
}

fn json_error(e: &serde_json::Error) -> ParseError {
    let msg = e.to_string();
    let message = match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    };
    ParseError { line: e.line(), message }
}

/// Parses an instance file, choosing the kind from the top-level keys.
pub fn parse_str(text: &str) -> Result<InstanceFile, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    let Value::Object(map) = &value else {
        return Err(ParseError { line: 1, message: "an instance file must be a JSON object".into() });
    };
    let has = |k: &str| map.contains_key(k);
    let kind = if has("kind") {
        InstanceKind::Group
    } else if has("flow") {
        InstanceKind::Scenario
    } else if has("ground") {
        InstanceKind::Lattice
    } else if has("classes") {
        InstanceKind::Relation
    } else if has("group") && has("basepoint") {
        InstanceKind::Ambit
    } else if has("group") {
        InstanceKind::Flow
    } else {
        return Err(ParseError {
            line: 1,
            message: "cannot tell the instance kind: expected one of the keys kind, flow, ground, classes, group".into(),
        });
    };
    let typed = |r: Result<InstanceFile, serde_json::Error>| r.map_err(|e| json_error(&e));
    match kind {
        InstanceKind::Group => typed(serde_json::from_str(text).map(InstanceFile::Group)),
        InstanceKind::Flow => typed(serde_json::from_str(text).map(InstanceFile::Flow)),
        InstanceKind::Ambit => typed(serde_json::from_str(text).map(InstanceFile::Ambit)),
        InstanceKind::Relation => typed(serde_json::from_str(text).map(InstanceFile::Relation)),
        InstanceKind::Lattice => typed(serde_json::from_str(text).map(InstanceFile::Lattice)),
        InstanceKind::Scenario => typed(serde_json::from_str(text).map(InstanceFile::Scenario)),
    }
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, LoadError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io { path: shown.clone(), message: e.to_string() })?;
    parse_str(&text).map_err(|error| LoadError::Parse { path: shown, error })
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub enum Instance {
    Group(FiniteGroup),
    Flow(Flow),
    Ambit(Ambit),
    Relation(EquivRelation),
    Lattice(LatticeBuild),
    Scenario(Scenario),
}

pub fn parse_instance(path: &Path, caps: &Caps) -> Result<Instance, LoadError> {
    let file = read_instance(path)?;
    validate(&file, caps).map_err(|error| LoadError::Validation { path: path.display().to_string(), error })
}

pub fn validate(file: &InstanceFile, caps: &Caps) -> Result<Instance, ValidationError> {
    Ok(match file {
        InstanceFile::Group(g) => Instance::Group(g.build(caps)?),
        InstanceFile::Flow(f) => Instance::Flow(f.build(caps)?),
        InstanceFile::Ambit(a) => Instance::Ambit(a.build(caps)?),
        InstanceFile::Relation(r) => Instance::Relation(r.build(None)?),
        InstanceFile::Lattice(l) => Instance::Lattice(l.build(None, caps)?),
        InstanceFile::Scenario(s) => Instance::Scenario(s.build(caps)?),
    })
}

/// Loads a file that must be of one kind. A flow is accepted where an ambit is
/// expected only through [`load_flow_or_ambit`].
pub fn load_relation(path: &Path, flow: Option<&Flow>) -> Result<EquivRelation, LoadError> {
    let shown = path.display().to_string();
    match read_instance(path)? {
        InstanceFile::Relation(r) => r.build(flow).map_err(|error| LoadError::Validation { path: shown, error }),
        other => Err(LoadError::WrongKind { path: shown, expected: "relation", found: other.kind().name() }),
    }
}

/// Reads a flow or ambit file; the basepoint is `None` for plain flows.
pub fn load_flow_or_ambit(path: &Path, caps: &Caps) -> Result<(Flow, Option<u32>), LoadError> {
    let shown = path.display().to_string();
    let wrap = |error: ValidationError| LoadError::Validation { path: shown.clone(), error };
    match read_instance(path)? {
        InstanceFile::Flow(f) => Ok((f.build(caps).map_err(wrap)?, None)),
        InstanceFile::Ambit(a) => {
            let ambit = a.build(caps).map_err(wrap)?;
            Ok((ambit.flow().clone(), Some(ambit.basepoint())))
        }
        other => Err(LoadError::WrongKind { path: shown, expected: "flow", found: other.kind().name() }),
    }
}

pub fn load_scenario(path: &Path, caps: &Caps) -> Result<Scenario, LoadError> {
    let shown = path.display().to_string();
    match read_instance(path)? {
        InstanceFile::Scenario(s) => s.build(caps).map_err(|error| LoadError::Validation { path: shown, error }),
        other => Err(LoadError::WrongKind { path: shown, expected: "scenario", found: other.kind().name() }),
    }
}

impl GroupSpec {
    pub fn build(&self, caps: &Caps) -> Result<FiniteGroup, ValidationError> {
        let cap = caps.max_group_order;
        match self {
            GroupSpec::Permutation { degree, generators } => {
                Ok(FiniteGroup::from_permutations_capped(*degree, generators, cap)?)
            }
            GroupSpec::Table { mul } => Ok(FiniteGroup::from_table_capped(mul, cap)?),
            GroupSpec::Named { name, n, q, dim } => {
                let need = |v: &Option<usize>, field: &str| {
                    v.ok_or_else(|| ValidationError::Schema(format!("named group `{name}` needs the field `{field}`")))
                };
                let parsed = match name.as_str() {
                    "trivial" => return Ok(FiniteGroup::trivial()),
                    "cyclic" => GroupName::Cyclic(need(n, "n")?),
                    "symmetric" => GroupName::Symmetric(need(n, "n")?),
                    "dihedral" => GroupName::Dihedral(need(n, "n")?),
                    "quaternion" => GroupName::Quaternion,
                    "hyperoctahedral" => GroupName::Hyperoctahedral(need(n, "n")?),
                    "affine" => GroupName::Affine { q: need(q, "q")?, dim: need(dim, "dim")? },
                    other => return Err(ValidationError::Schema(format!("unknown named group `{other}`"))),
                };
                Ok(named_group_capped(parsed, cap)?)
            }
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupSpec::Table { mul: g.table() }
    }
}

impl FlowSpec {
    pub fn build(&self, caps: &Caps) -> Result<Flow, ValidationError> {
        let group = Arc::new(self.group.build(caps)?);
        let action = match &self.action {
            ActionField::Keyword(ActionKeyword::Natural) => ActionSpec::Natural,
            ActionField::Keyword(ActionKeyword::Regular) => ActionSpec::Regular,
            ActionField::Keyword(ActionKeyword::Trivial) => ActionSpec::Trivial,
            ActionField::GeneratorImages { generator_images } => ActionSpec::GeneratorImages(generator_images.clone()),
            ActionField::ElementMaps { element_maps } => ActionSpec::ElementMaps(element_maps.clone()),
        };
        Ok(make_flow(group, self.points, action, self.transformations.clone())?)
    }

    /// Table group plus one map per element, so nothing depends on generator choice.
    pub fn from_flow(flow: &Flow) -> Self {
        FlowSpec {
            group: GroupSpec::from_group(flow.group()),
            points: flow.points(),
            action: ActionField::ElementMaps { element_maps: flow.element_maps() },
            transformations: flow.transformations().to_vec(),
        }
    }

    pub fn with_basepoint(self, basepoint: u32) -> AmbitSpec {
        AmbitSpec {
            group: self.group,
            points: self.points,
            action: self.action,
            transformations: self.transformations,
            basepoint,
        }
    }
}

impl AmbitSpec {
    pub fn flow(&self) -> FlowSpec {
        FlowSpec {
            group: self.group.clone(),
            points: self.points,
            action: self.action.clone(),
            transformations: self.transformations.clone(),
        }
    }

    pub fn build(&self, caps: &Caps) -> Result<Ambit, ValidationError> {
        Ok(make_ambit(self.flow().build(caps)?, self.basepoint)?)
    }

    pub fn from_ambit(ambit: &Ambit) -> Self {
        FlowSpec::from_flow(ambit.flow()).with_basepoint(ambit.basepoint())
    }
}

impl RelationSpec {
    pub fn build(&self, flow: Option<&Flow>) -> Result<EquivRelation, ValidationError> {
        Ok(make_relation(self.points, self.classes.clone(), flow)?)
    }

    pub fn from_relation(e: &EquivRelation) -> Self {
        RelationSpec { points: e.points(), classes: e.classes().to_vec() }
    }
}

impl LatticeSpec {
    pub fn ground(&self) -> Result<Ground, ValidationError> {
        Ground::parse(&self.ground).ok_or_else(|| {
            let names: Vec<&str> = Ground::ALL.iter().map(|g| g.name()).collect();
            ValidationError::Schema(format!("unknown ground `{}`; expected one of {}", self.ground, names.join(", ")))
        })
    }

    /// `expected` is the ground size implied by a surrounding flow, if any.
    pub fn build(&self, expected: Option<usize>, caps: &Caps) -> Result<LatticeBuild, ValidationError> {
        let ground = self.ground()?;
        let inferred = self.sets.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
        let size = match (self.size, expected) {
            (Some(s), Some(e)) if s != e => {
                return Err(ValidationError::Schema(format!("lattice on {} declares size {s}, expected {e}", ground.name())))
            }
            (Some(s), _) => s,
            (None, Some(e)) => e,
            (None, None) => inferred,
        };
        if caps.max_points.checked_pow(2).is_some_and(|c| size > c) {
            return Err(StructuredError::SizeCapExceeded { size, cap: caps.max_points * caps.max_points }.into());
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        for (i, s) in self.sets.iter().enumerate() {
            if let Some(&x) = s.iter().find(|&&x| x as usize >= size) {
                return Err(ValidationError::Schema(format!("set {i} of the {} lattice has element {x} >= {size}", ground.name())));
            }
            sets.push(BitSet::from_iter(size, s.iter().map(|&x| x as usize)));
        }
        Ok(make_lattice(ground, size, &sets, self.auto_complete, caps)?)
    }

    pub fn from_lattice(l: &PseudoClosedLattice, caps: &Caps) -> Result<Self, ValidationError> {
        Ok(LatticeSpec {
            ground: l.ground().name().to_string(),
            size: Some(l.size()),
            sets: l.sets(caps)?.iter().map(BitSet::to_u32_vec).collect(),
            auto_complete: false,
        })
    }
}

/// A validated structured scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub instance: StructuredInstance,
    pub relations: Vec<EquivRelation>,
    /// Sets added by `auto_complete`, per ground.
    pub added: Vec<(Ground, Vec<BitSet>)>,
}

/// Scenario files enumerate invariant relations only up to this many points.
pub const SCENARIO_ENUMERATION_POINTS: usize = 8;

impl ScenarioSpec {
    pub fn build(&self, caps: &Caps) -> Result<Scenario, ValidationError> {
        let flow = self.flow.build(caps)?;
        let (k, n) = (flow.group().order(), flow.points());
        let mut given: Vec<Option<PseudoClosedLattice>> = vec![None; Ground::ALL.len()];
        let mut added = Vec::new();
        for spec in &self.lattices {
            let ground = spec.ground()?;
            let slot = Ground::ALL.iter().position(|&g| g == ground).expect("ground in ALL");
            if given[slot].is_some() {
                return Err(ValidationError::Schema(format!("two lattices on {}", ground.name())));
            }
            let build = spec.build(Some(ground.size(k, n)), caps)?;
            if !build.added.is_empty() {
                added.push((ground, build.added.clone()));
            }
            given[slot] = Some(build.lattice);
        }
        let take = |i: usize, given: &mut Vec<Option<PseudoClosedLattice>>| given[i].take();
        let g = take(0, &mut given).unwrap_or_else(|| PseudoClosedLattice::discrete(Ground::G, k));
        let x = take(1, &mut given).unwrap_or_else(|| PseudoClosedLattice::discrete(Ground::X, n));
        let xx = take(3, &mut given);
        let defaults = StructuredInstance::with_defaults(flow.clone(), g, x, xx, caps)?;
        let instance = if given.iter().any(Option::is_some) {
            let lattices: Vec<PseudoClosedLattice> = defaults
                .lattices()
                .iter()
                .zip(given)
                .map(|(d, o)| o.unwrap_or_else(|| d.clone()))
                .collect();
            StructuredInstance::new(flow.clone(), lattices)?
        } else {
            defaults
        };
        let relations = if self.relations.is_empty() {
            invariant_relations(&flow, SCENARIO_ENUMERATION_POINTS)?
        } else {
            self.relations.iter().map(|r| r.build(Some(&flow))).collect::<Result<_, _>>()?
        };
        Ok(Scenario { instance, relations, added })
    }
}
