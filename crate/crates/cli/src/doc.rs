//! JSON documents read and written by `fdx`.
//!
//! Every document carries `"schema": "fdx/1"` and a `kind` tag. Agents are
//! numbered from 1 in files; values are strings (`"3"`, `"-16"`, `"9/2"`,
//! `"0.25"`) so nothing passes through floating point.

use std::collections::HashSet;

use fdx_core::reductions::{CorrelatedSpec, NetworkSpec, TeamSpec};
use fdx_core::solvers::SolveStats;
use fdx_core::{Allocation, Error, FairnessNotion, Instance, Value};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "fdx/1";

pub type Metadata = IndexMap<String, serde_json::Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Instance(InstanceDoc),
    Correlated(CorrelatedDoc),
    Team(TeamDoc),
    Network(NetworkDoc),
    Graph(GraphDoc),
    Allocation(AllocationDoc),
    Report(Report),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Instance(_) => "instance",
            Document::Correlated(_) => "correlated",
            Document::Team(_) => "team",
            Document::Network(_) => "network",
            Document::Graph(_) => "graph",
            Document::Allocation(_) => "allocation",
            Document::Report(_) => "report",
        }
    }

    fn schema(&self) -> &str {
        match self {
            Document::Instance(d) => &d.schema,
            Document::Correlated(d) => &d.schema,
            Document::Team(d) => &d.schema,
            Document::Network(d) => &d.schema,
            Document::Graph(d) => &d.schema,
            Document::Allocation(d) => &d.schema,
            Document::Report(d) => &d.schema,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))?;
        if doc.schema() != SCHEMA {
            return Err(DocError::Schema(doc.schema().to_string()));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DocError {
    Json(String),
    Schema(String),
    Kind { expected: &'static str, found: &'static str },
    Invalid(String),
    Core(Error),
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocError::Json(e) => write!(f, "malformed document: {e}"),
            DocError::Schema(s) => write!(f, "unsupported schema `{s}`, expected `{SCHEMA}`"),
            DocError::Kind { expected, found } => write!(f, "expected a `{expected}` document, found `{found}`"),
            DocError::Invalid(msg) => f.write_str(msg),
            DocError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for DocError {}

impl From<Error> for DocError {
    fn from(e: Error) -> Self {
        DocError::Core(e)
    }
}

fn agent_index(agent: usize, agents: usize) -> Result<usize, DocError> {
    if agent == 0 || agent > agents {
        return Err(DocError::Invalid(format!("agent {agent} out of range 1..={agents}")));
    }
    Ok(agent - 1)
}

fn zero() -> Value {
    Value::zero()
}

/// One valuation entry `(i, j, item, V_i(j, item))`, agents 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry(pub usize, pub usize, pub String, pub Value);

/// Sparse valuation tensor. Entries not listed take `default`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub schema: String,
    pub agents: usize,
    pub items: Vec<String>,
    #[serde(default = "zero")]
    pub default: Value,
    pub valuations: Vec<Entry>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub metadata: Metadata,
}

impl InstanceDoc {
    /// Canonical form: default `"0"`, nonzero entries ordered by `i`, `j`,
    /// then declared item order.
    pub fn from_instance(inst: &Instance, metadata: Metadata) -> Self {
        let (n, m) = (inst.agents(), inst.item_count());
        let mut valuations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for a in 0..m {
                    let v = inst.value(i, j, a);
                    if !v.is_zero() {
                        valuations.push(Entry(i + 1, j + 1, inst.items()[a].clone(), v.clone()));
                    }
                }
            }
        }
        InstanceDoc {
            schema: SCHEMA.into(),
            agents: n,
            items: inst.items().to_vec(),
            default: Value::zero(),
            valuations,
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, DocError> {
        let n = self.agents;
        let mut inst = Instance::from_fn(n, self.items.clone(), |_, _, _| self.default.clone())?;
        let mut seen = HashSet::new();
        for Entry(i, j, item, v) in &self.valuations {
            let (i, j) = (agent_index(*i, n)?, agent_index(*j, n)?);
            let a = inst.item_index(item).ok_or_else(|| Error::UnknownItem(item.clone()))?;
            if !seen.insert((i, j, a)) {
                return Err(DocError::Invalid(format!("valuation ({}, {}, {item}) listed twice", i + 1, j + 1)));
            }
            inst.set(i, j, a, v.clone());
        }
        Ok(inst)
    }
}

/// `V_i(j,a) = (1 − τ_{i,j} μ_{i,a}) v_{i,a}` with dense tables; `base` and
/// `mu` are `agents × items`, `tau` is `agents × agents`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedDoc {
    pub schema: String,
    pub agents: usize,
    pub items: Vec<String>,
    pub base: Vec<Vec<Value>>,
    pub tau: Vec<Vec<Value>>,
    pub mu: Vec<Vec<Value>>,
}

/// Teams are lists of 1-based agents; `c` is the share kept when a teammate
/// holds the item.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamDoc {
    pub schema: String,
    pub items: Vec<String>,
    pub teams: Vec<Vec<usize>>,
    pub c: Value,
    pub base: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub schema: String,
    pub agents: usize,
    pub items: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub base: Vec<Vec<Value>>,
    pub mu: Vec<Vec<Value>>,
}

fn flatten(name: &str, rows: &[Vec<Value>], height: usize, width: usize) -> Result<Vec<Value>, DocError> {
    if rows.len() != height || rows.iter().any(|r| r.len() != width) {
        return Err(DocError::Invalid(format!("`{name}` must be a {height} × {width} table")));
    }
    Ok(rows.iter().flatten().cloned().collect())
}

fn unflatten(values: &[Value], width: usize) -> Vec<Vec<Value>> {
    if width == 0 {
        return Vec::new();
    }
    values.chunks(width).map(<[Value]>::to_vec).collect()
}

/// `values` laid out row-major as strings, for metadata.
pub fn table(values: &[Value], width: usize) -> serde_json::Value {
    serde_json::to_value(unflatten(values, width)).expect("values serialize")
}

impl CorrelatedDoc {
    pub fn from_spec(spec: &CorrelatedSpec) -> Self {
        let m = spec.items.len();
        CorrelatedDoc {
            schema: SCHEMA.into(),
            agents: spec.agents,
            items: spec.items.clone(),
            base: unflatten(&spec.base, m),
            tau: unflatten(&spec.tau, spec.agents),
            mu: unflatten(&spec.mu, m),
        }
    }

    pub fn to_spec(&self) -> Result<CorrelatedSpec, DocError> {
        let (n, m) = (self.agents, self.items.len());
        let spec = CorrelatedSpec {
            agents: n,
            items: self.items.clone(),
            base: flatten("base", &self.base, n, m)?,
            tau: flatten("tau", &self.tau, n, n)?,
            mu: flatten("mu", &self.mu, n, m)?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl TeamDoc {
    pub fn to_spec(&self) -> Result<TeamSpec, DocError> {
        let n: usize = self.teams.iter().map(Vec::len).sum();
        let teams = self
            .teams
            .iter()
            .map(|t| t.iter().map(|&i| agent_index(i, n)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        Ok(TeamSpec {
            teams,
            c: self.c.clone(),
            items: self.items.clone(),
            base: flatten("base", &self.base, n, self.items.len())?,
        })
    }
}

impl NetworkDoc {
    pub fn to_spec(&self) -> Result<NetworkSpec, DocError> {
        let (n, m) = (self.agents, self.items.len());
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| Ok((agent_index(u, n)?, agent_index(v, n)?)))
            .collect::<Result<_, DocError>>()?;
        Ok(NetworkSpec {
            agents: n,
            edges,
            items: self.items.clone(),
            base: flatten("base", &self.base, n, m)?,
            mu: flatten("mu", &self.mu, n, m)?,
        })
    }
}

/// Undirected graph, vertices numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub schema: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<fdx_core::generators::graphs::Graph, DocError> {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                if u == 0 || v == 0 {
                    return Err(DocError::Invalid("vertices are numbered from 1".into()));
                }
                Ok((u - 1, v - 1))
            })
            .collect::<Result<_, _>>()?;
        Ok(fdx_core::generators::graphs::Graph::new(self.vertices, edges)?)
    }
}

/// Item → 1-based agent, in the instance's item order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationDoc {
    pub schema: String,
    pub agents: usize,
    pub assignment: IndexMap<String, usize>,
}

pub fn assignment(inst: &Instance, alloc: &Allocation) -> IndexMap<String, usize> {
    inst.items().iter().zip(alloc.owners()).map(|(id, &o)| (id.clone(), o + 1)).collect()
}

impl AllocationDoc {
    pub fn from_allocation(inst: &Instance, alloc: &Allocation) -> Self {
        AllocationDoc { schema: SCHEMA.into(), agents: alloc.agents(), assignment: assignment(inst, alloc) }
    }

    /// Fails unless the keys are exactly the instance's items.
    pub fn to_allocation(&self, inst: &Instance) -> Result<Allocation, DocError> {
        if self.agents != inst.agents() {
            return Err(Error::AgentCountMismatch { expected: inst.agents(), found: self.agents }.into());
        }
        if let Some(id) = self.assignment.keys().find(|id| inst.item_index(id).is_none()) {
            return Err(Error::UnknownItem(id.clone()).into());
        }
        let owner = inst
            .items()
            .iter()
            .map(|id| {
                let agent = *self.assignment.get(id).ok_or_else(|| Error::UnassignedItem(id.clone()))?;
                agent_index(agent, self.agents)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Allocation::new(self.agents, owner)?)
    }
}

/// One ordered pair of a verdict; `removed` names the items whose removal
/// clears the envy, or for a failing EFX pair the removal that does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    pub i: usize,
    pub j: usize,
    pub gap: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WelfareRow {
    pub utilities: Vec<Value>,
    pub utilitarian: Value,
    /// Absent when some utility is negative.
    pub nash: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximizers: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    /// Arguments the command was run with.
    pub command: Vec<String>,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notion: Option<FairnessNotion>,
    /// `pass` or `fail`, for `check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    /// `exists` or `none`, for `solve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<IndexMap<String, usize>>,
    /// First failing pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<PairRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SolveStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub welfare: Option<WelfareRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { schema: SCHEMA.into(), command, ..Report::default() }
    }
}

macro_rules! expect_kind {
    ($($fn_name:ident => $variant:ident($ty:ty), $name:literal;)*) => {
        impl Document {
            $(
                pub fn $fn_name(self) -> Result<$ty, DocError> {
                    match self {
                        Document::$variant(d) => Ok(d),
                        other => Err(DocError::Kind { expected: $name, found: other.kind() }),
                    }
                }
            )*
        }
    };
}

expect_kind! {
    into_instance => Instance(InstanceDoc), "instance";
    into_allocation => Allocation(AllocationDoc), "allocation";
    into_graph => Graph(GraphDoc), "graph";
    into_report => Report(Report), "report";
}
