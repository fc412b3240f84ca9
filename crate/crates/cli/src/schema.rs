//! Instance files: a version, a kind tag, and a kind-specific payload.
//! Rationals are written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use dblcat::bimod::{AlgDoubleCategory, Algebra, AlgebraMap, Bimodule, FinDimAlgebra};
use dblcat::cobord::{Cobordism1, Cobordism2, Oriented, Surface};
use dblcat::finset::{FinCategorySpec, FinFunction};
use dblcat::linalg::{parse_q, RationalMatrix, Q};
use dblcat::tqft::{FrobeniusAlgebra, Theory1d};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    #[serde(flatten)]
    pub instance: Instance,
    /// Seed for every sampled enumeration and law walk.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Default number of draws per law when no budget flag is given.
    #[serde(default)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "lowercase")]
pub enum Instance {
    Fincat(FinCategorySpec),
    Morph(FinCategorySpec),
    Iso(FinCategorySpec),
    Span(SpanPayload),
    Monoidal(MonoidalPayload),
    Bimod(BimodPayload),
    Cobord0(Cobord0Payload),
    Cobord1(Cobord1Payload),
    Action(ActionPayload),
    Theory1d(Theory1dPayload),
    Frobenius(FrobeniusPayload),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Fincat(_) => "fincat",
            Instance::Morph(_) => "morph",
            Instance::Iso(_) => "iso",
            Instance::Span(_) => "span",
            Instance::Monoidal(_) => "monoidal",
            Instance::Bimod(_) => "bimod",
            Instance::Cobord0(_) => "cobord0",
            Instance::Cobord1(_) => "cobord1",
            Instance::Action(_) => "action",
            Instance::Theory1d(_) => "theory1d",
            Instance::Frobenius(_) => "frobenius",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SpanSpec {
    pub left: FinFunction,
    pub right: FinFunction,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SpanPayload {
    /// Feet range over `{0..n}` for `n ≤ max_size`.
    pub max_size: usize,
    #[serde(default)]
    pub cells: BTreeMap<String, SpanSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MonoidalStructure {
    Cartesian,
    Action,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MonoidalPayload {
    pub structure: MonoidalStructure,
    pub max_size: usize,
    /// Carrier sizes for the action structure.
    #[serde(default)]
    pub carriers: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AlgebraSpec {
    /// One of `rationals`, `dual_numbers`, `split`, `upper_triangular`,
    /// `truncated_polynomial_<k>`; otherwise the table fields are required.
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    /// `c[(i·n + j)·n + k]` is the coefficient of `e_k` in `e_i e_j`.
    #[serde(default)]
    pub structure: Option<Vec<String>>,
    #[serde(default)]
    pub unit: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    /// `dim target × dim source`, row-major.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BimoduleSpec {
    pub label: String,
    pub left: String,
    pub right: String,
    /// `regular` or `vector_space`; otherwise the action matrices are required.
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    /// One matrix per basis element of the left algebra.
    #[serde(default)]
    pub lambda: Vec<Vec<Vec<String>>>,
    /// One matrix per basis element of the right algebra.
    #[serde(default)]
    pub rho: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct BimodPayload {
    /// Start from the shipped corpus of four algebras and thirteen bimodules.
    #[serde(default)]
    pub standard: bool,
    #[serde(default)]
    pub algebras: Vec<AlgebraSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub bimodules: Vec<BimoduleSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cobordism1Spec {
    pub source: Oriented,
    pub target: Oriented,
    /// Matched pairs of boundary points, indexed over `(−X) ⊔ X′`.
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub loops: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cobordism2Spec {
    pub source: Oriented,
    pub target: Oriented,
    /// Components with boundary circles indexed over `(−X) ⊔ X′`.
    pub components: Vec<Surface>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Cobord0Payload {
    /// Objects are sign strings of length ≤ bound.
    pub bound: usize,
    #[serde(default)]
    pub cells: BTreeMap<String, Cobordism1Spec>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Cobord1Payload {
    pub bound: usize,
    pub max_genus: u32,
    #[serde(default)]
    pub cells: BTreeMap<String, Cobordism2Spec>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    /// `Morph(FinSet)` on bundles by pullback.
    Pullback,
    /// `ISO(FinSet)` on pointed sets by transport.
    Iso,
    /// `ALG_k` on left modules of the shipped corpus by tensor product.
    Module,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObjectSpec {
    /// `π: {0..len(map)} → {0..base}`.
    Bundle {
        base: usize,
        map: Vec<usize>,
    },
    Pointed {
        size: usize,
        point: usize,
    },
    Module {
        module: String,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct ActionPayload {
    pub action: ActionKind,
    #[serde(default = "default_size")]
    pub max_size: usize,
    /// Bundle maps drawn per generator call (pullback only).
    #[serde(default = "default_per_call")]
    pub per_call: usize,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
}

fn default_size() -> usize {
    3
}

fn default_per_call() -> usize {
    2
}

#[derive(Debug, Clone, Deserialize)]
pub struct Theory1dPayload {
    pub dim: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FrobeniusPayload {
    pub algebra: AlgebraSpec,
    pub counit: Vec<String>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse: {e}")))?;
    if file.version != FORMAT_VERSION {
        return Err(CliError::Input(format!(
            "unsupported format version {} (expected {FORMAT_VERSION})",
            file.version
        )));
    }
    Ok(file)
}

fn input<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

pub fn rationals(xs: &[String]) -> Result<Vec<Q>, CliError> {
    xs.iter().map(|s| parse_q(s).map_err(input("rational"))).collect()
}

pub fn matrix(rows: &[Vec<String>], cols: usize) -> Result<RationalMatrix, CliError> {
    RationalMatrix::from_strings(cols, rows).map_err(input("matrix"))
}

pub fn build_algebra(spec: &AlgebraSpec) -> Result<FinDimAlgebra, CliError> {
    if let Some(b) = &spec.builtin {
        return match b.as_str() {
            "rationals" => Ok(FinDimAlgebra::rationals()),
            "dual_numbers" => Ok(FinDimAlgebra::dual_numbers()),
            "split" => Ok(FinDimAlgebra::split()),
            "upper_triangular" => Ok(FinDimAlgebra::upper_triangular()),
            other => match other.strip_prefix("truncated_polynomial_").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if k > 0 => Ok(FinDimAlgebra::truncated_polynomial(k)),
                _ => Err(CliError::Input(format!("unknown builtin algebra `{other}`"))),
            },
        };
    }
    let missing = |field: &str| CliError::Input(format!("algebra needs `{field}` or `builtin`"));
    let name = spec.name.clone().ok_or_else(|| missing("name"))?;
    let dim = spec.dim.ok_or_else(|| missing("dim"))?;
    let structure = rationals(spec.structure.as_ref().ok_or_else(|| missing("structure"))?)?;
    let unit = rationals(spec.unit.as_ref().ok_or_else(|| missing("unit"))?)?;
    FinDimAlgebra::new(name, dim, structure, unit).map_err(input("algebra"))
}

/// Builds the corpus and returns it with every bimodule indexed by label.
pub fn build_corpus(p: &BimodPayload) -> Result<AlgDoubleCategory, CliError> {
    let mut corpus = if p.standard {
        AlgDoubleCategory::standard_corpus()
    } else {
        AlgDoubleCategory::new(Vec::new(), Vec::new(), Vec::new())
    };
    for spec in &p.algebras {
        let a: Algebra = Arc::new(build_algebra(spec)?);
        if corpus.algebras.iter().any(|b| b.name() == a.name()) {
            return Err(CliError::Input(format!("duplicate algebra `{}`", a.name())));
        }
        corpus.maps.push(AlgebraMap::identity(&a));
        corpus.algebras.push(a);
    }
    let find = |corpus: &AlgDoubleCategory, name: &str| {
        corpus
            .algebras
            .iter()
            .find(|a| a.name() == name)
            .cloned()
            .ok_or_else(|| CliError::Input(format!("unknown algebra `{name}`")))
    };
    for spec in &p.maps {
        let (s, t) = (find(&corpus, &spec.source)?, find(&corpus, &spec.target)?);
        let f = AlgebraMap::new(&s, &t, matrix(&spec.matrix, s.dim())?).map_err(input("algebra map"))?;
        corpus.maps.push(f);
    }
    for spec in &p.bimodules {
        let (l, r) = (find(&corpus, &spec.left)?, find(&corpus, &spec.right)?);
        let m = match spec.builtin.as_deref() {
            Some("regular") if l == r => Bimodule::regular(&l),
            Some("regular") => return Err(CliError::Input("regular bimodule needs left = right".into())),
            Some("vector_space") if l.dim() == 1 && r.dim() == 1 => {
                Bimodule::vector_space(&l, spec.dim.unwrap_or(1)).map_err(input("bimodule"))?
            }
            Some(other) => return Err(CliError::Input(format!("unknown builtin bimodule `{other}`"))),
            None => {
                let dim = spec.dim.ok_or_else(|| CliError::Input("bimodule needs `dim`".into()))?;
                let mats = |ms: &[Vec<Vec<String>>]| ms.iter().map(|m| matrix(m, dim)).collect::<Result<Vec<_>, _>>();
                Bimodule::new(&l, &r, mats(&spec.lambda)?, mats(&spec.rho)?, &spec.label).map_err(input("bimodule"))?
            }
        };
        corpus.bimodules.push(m.with_label(&spec.label));
    }
    Ok(corpus)
}

pub fn bimodule_by_label<'a>(corpus: &'a AlgDoubleCategory, label: &str) -> Result<&'a Bimodule, CliError> {
    corpus
        .bimodules
        .iter()
        .find(|m| m.label() == label)
        .ok_or_else(|| CliError::Input(format!("unknown bimodule `{label}`")))
}

pub fn build_cobordism1(spec: &Cobordism1Spec) -> Result<Cobordism1, CliError> {
    Cobordism1::from_pairs(spec.source.clone(), spec.target.clone(), &spec.pairs, spec.loops)
        .map_err(input("cobordism"))
}

pub fn build_cobordism2(spec: &Cobordism2Spec) -> Result<Cobordism2, CliError> {
    Cobordism2::new(spec.source.clone(), spec.target.clone(), spec.components.clone()).map_err(input("cobordism"))
}

pub fn build_theory1d(p: &Theory1dPayload) -> Theory1d {
    Theory1d::new(p.dim)
}

pub fn build_frobenius(p: &FrobeniusPayload) -> Result<FrobeniusAlgebra, CliError> {
    FrobeniusAlgebra::new(build_algebra(&p.algebra)?, rationals(&p.counit)?).map_err(input("frobenius algebra"))
}
