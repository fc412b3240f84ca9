use std::collections::BTreeMap;
use std::fmt::Debug;

use dblcat::action::{
    check_action, check_characteristic_class, orbit, Action, IsoAction, MObj, ModuleAction, OrbitError, Pointed,
    PullbackAction,
};
use dblcat::bimod::{tensor_over, AlgDoubleCategory, Bimodule};
use dblcat::category::Category;
use dblcat::cobord::{
    cobordism_double_category_0, cobordism_double_category_1, Cobordism, Cobordism1, Cobordism2, Oriented,
};
use dblcat::diagram::{iso_double_category, ActionDoubleCategory, CartesianMonoidal, Morph, Span, SpanDoubleCategory};
use dblcat::double::{check_double_category, Budget, DoubleCategory, LawReport, Strictness, StructuralError};
use dblcat::finset::{validate_fin_category, FinCategory, FinCategoryError, FinCategorySpec, FinFunction, FinSet};
use dblcat::linalg::RationalMatrix;
use dblcat::tqft::{check_axioms, Theory};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{describe_budget, Report};
use crate::schema::{
    bimodule_by_label, build_cobordism1, build_cobordism2, build_corpus, build_frobenius, build_theory1d, ActionKind,
    ActionPayload, Cobordism1Spec, Cobordism2Spec, Instance, InstanceFile, ObjectSpec,
};
use crate::CliError;

const DEFAULT_DRAWS: usize = 200;
const DEFAULT_ORBIT_BUDGET: usize = 10_000;

/// Budget flags as given on the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetFlag {
    pub draws: Option<usize>,
    pub exhaustive: bool,
}

impl BudgetFlag {
    /// Flags win over the file; without either, small finite kinds are
    /// walked exhaustively and the rest are sampled.
    fn resolve(self, file: &InstanceFile, exhaustive_by_default: bool) -> Budget {
        let seed = file.seed.unwrap_or(0);
        match (self.exhaustive, self.draws, file.budget) {
            (true, _, _) => Budget::Exhaustive,
            (false, Some(n), _) => Budget::sampled(n, seed),
            (false, None, _) if exhaustive_by_default => Budget::Exhaustive,
            (false, None, Some(n)) => Budget::sampled(n, seed),
            (false, None, None) => Budget::sampled(DEFAULT_DRAWS, seed),
        }
    }
}

fn report_for(command: &str, inputs: &[String], file: &InstanceFile, budget: &Budget) -> Report {
    Report::new(command, inputs, file.instance.kind(), file.seed.unwrap_or(0), describe_budget(budget))
}

fn universe(max_size: usize) -> Vec<FinSet> {
    (0..=max_size).map(FinSet::range).collect()
}

/// Table errors that are failures of the category laws rather than of the
/// file's well-formedness.
fn law_of(e: &FinCategoryError) -> Option<&'static str> {
    match e {
        FinCategoryError::IdentityLaw(_) => Some("category.identity"),
        FinCategoryError::Associativity { .. } => Some("category.associativity"),
        FinCategoryError::MissingComposite { .. } => Some("category.closure"),
        _ => None,
    }
}

fn category_or_failure(spec: &FinCategorySpec) -> Result<Result<FinCategory, LawReport>, CliError> {
    match validate_fin_category(spec) {
        Ok(c) => Ok(Ok(c)),
        Err(e) => match law_of(&e) {
            Some(law) => {
                let mut report = LawReport::new();
                report.record(law, false, || e.to_string());
                Ok(Err(report))
            }
            None => Err(CliError::Input(format!("category tables: {e}"))),
        },
    }
}

fn category_laws(c: &FinCategory) -> LawReport {
    let mut report = LawReport::new();
    for law in ["category.identity", "category.associativity", "category.closure"] {
        report.declare(law);
    }
    let morphisms = c.morphisms().to_vec();
    for f in &morphisms {
        let (a, b) = (c.source(f), c.target(f));
        let ok = c.compose(&c.identity(&a), f).as_ref() == Some(f) && c.compose(f, &c.identity(&b)).as_ref() == Some(f);
        report.record("category.identity", ok, || format!("{f:?}"));
        for g in morphisms.iter().filter(|g| c.source(g) == b) {
            let Some(fg) = c.compose(f, g) else {
                report.record("category.closure", false, || format!("{f:?} ; {g:?}"));
                continue;
            };
            report.record("category.closure", true, String::new);
            for h in morphisms.iter().filter(|h| c.source(h) == c.target(g)) {
                let lhs = c.compose(&fg, h);
                let rhs = c.compose(g, h).and_then(|gh| c.compose(f, &gh));
                report
                    .record("category.associativity", lhs.is_some() && lhs == rhs, || format!("{f:?} ; {g:?} ; {h:?}"));
            }
        }
    }
    report
}

fn double_laws<D: DoubleCategory>(dc: &D, budget: &Budget, weak: bool) -> Result<LawReport, StructuralError> {
    let mut report = check_double_category(dc, budget)?;
    if dc.strictness() == Strictness::Weak && !weak {
        report
            .record("strictness", false, || "instance is weak; pass --weak to check coherence up to witnesses".into());
    }
    Ok(report)
}

fn finish_laws(report: Report, laws: Result<LawReport, StructuralError>) -> Report {
    match laws {
        Ok(laws) => report.with_laws(laws),
        Err(e) => report.fail(format!("malformed instance: {e}")),
    }
}

pub fn laws(inputs: &[String], file: &InstanceFile, flag: BudgetFlag, weak: bool) -> Result<Report, CliError> {
    let seed = file.seed.unwrap_or(0);
    let exhaustive_by_default = matches!(file.instance, Instance::Fincat(_) | Instance::Morph(_) | Instance::Iso(_));
    let budget = flag.resolve(file, exhaustive_by_default);
    let report = report_for("laws", inputs, file, &budget);
    Ok(match &file.instance {
        Instance::Fincat(spec) => match category_or_failure(spec)? {
            Ok(c) => report.with_laws(category_laws(&c)),
            Err(failure) => report.with_laws(failure),
        },
        Instance::Morph(spec) => match category_or_failure(spec)? {
            Ok(c) => finish_laws(report, double_laws(&Morph(c), &budget, weak)),
            Err(failure) => report.with_laws(failure),
        },
        Instance::Iso(spec) => match category_or_failure(spec)? {
            Ok(c) => {
                let iso = iso_double_category(c).map_err(|e| CliError::Input(e.to_string()))?;
                finish_laws(report, double_laws(&iso, &budget, weak))
            }
            Err(failure) => report.with_laws(failure),
        },
        Instance::Span(p) => {
            finish_laws(report, double_laws(&SpanDoubleCategory::new(universe(p.max_size), seed), &budget, weak))
        }
        Instance::Monoidal(p) => {
            let sets = universe(p.max_size);
            match p.structure {
                crate::schema::MonoidalStructure::Cartesian => {
                    finish_laws(report, double_laws(&CartesianMonoidal { universe: sets }, &budget, weak))
                }
                crate::schema::MonoidalStructure::Action => {
                    let carriers = p.carriers.iter().map(|&n| FinSet::range(n)).collect();
                    finish_laws(report, double_laws(&ActionDoubleCategory::new(sets, carriers, seed), &budget, weak))
                }
            }
        }
        Instance::Bimod(p) => finish_laws(report, double_laws(&build_corpus(p)?, &budget, weak)),
        Instance::Cobord0(p) => {
            finish_laws(report, double_laws(&cobordism_double_category_0(p.bound, seed), &budget, weak))
        }
        Instance::Cobord1(p) => {
            finish_laws(report, double_laws(&cobordism_double_category_1(p.bound, p.max_genus, seed), &budget, weak))
        }
        Instance::Action(p) => return action(inputs, file, p, ActionCommand::Check, None, flag.draws),
        Instance::Theory1d(_) | Instance::Frobenius(_) => {
            return Err(CliError::Input("theories are checked with `tqft --check-axioms`".into()))
        }
    })
}

/// Cells of one kind, composable by name; `id` stands for the unit on the
/// neighbouring endpoint.
trait Composer {
    type Obj: Debug + PartialEq;
    type Cell: Clone + PartialEq;
    fn lookup(&self, name: &str) -> Result<Self::Cell, CliError>;
    fn d(&self, x: &Self::Cell) -> Self::Obj;
    fn r(&self, x: &Self::Cell) -> Self::Obj;
    fn unit(&self, a: &Self::Obj) -> Self::Cell;
    fn star(&self, x: &Self::Cell, y: &Self::Cell) -> Result<Self::Cell, String>;
    fn render(&self, x: &Self::Cell) -> Value;
}

fn compose_all<C: Composer>(c: &C, names: &[String], report: Report) -> Result<Report, CliError> {
    if names.len() < 2 {
        return Err(CliError::Input("compose needs at least two cell identifiers".into()));
    }
    if names.iter().all(|n| n == "id") {
        return Err(CliError::Input("at least one named cell is required".into()));
    }
    let named: Vec<Option<C::Cell>> =
        names.iter().map(|n| if n == "id" { Ok(None) } else { c.lookup(n).map(Some) }).collect::<Result<_, _>>()?;
    // Units take the endpoint of the nearest named cell.
    let mut cells: Vec<C::Cell> = Vec::with_capacity(named.len());
    for (i, x) in named.iter().enumerate() {
        let cell = match x {
            Some(x) => x.clone(),
            None => match cells.last() {
                Some(prev) => c.unit(&c.r(prev)),
                None => {
                    let next = named[i..].iter().flatten().next().expect("a named cell exists");
                    c.unit(&c.d(next))
                }
            },
        };
        cells.push(cell);
    }
    let mut acc = cells[0].clone();
    for (i, y) in cells.iter().enumerate().skip(1) {
        if c.r(&acc) != c.d(y) {
            return Ok(report.fail(format!(
                "cannot compose `{}` then `{}`: r = {:?} but d = {:?}",
                names[..i].join(","),
                names[i],
                c.r(&acc),
                c.d(y)
            )));
        }
        acc = match c.star(&acc, y) {
            Ok(z) => z,
            Err(e) => return Ok(report.fail(e)),
        };
    }
    let mut out = json!({ "composite": c.render(&acc) });
    if names.iter().any(|n| n == "id") {
        let others: Vec<&C::Cell> = cells.iter().zip(names).filter(|(_, n)| *n != "id").map(|(x, _)| x).collect();
        let strict = others.len() == 1 && *others[0] == acc;
        out["unit_strict"] = json!(strict);
    }
    Ok(report.with_result(out))
}

struct FinComposer(FinCategory);

impl Composer for FinComposer {
    type Obj = String;
    type Cell = dblcat::finset::Named;
    fn lookup(&self, name: &str) -> Result<Self::Cell, CliError> {
        self.0.morphism(name).ok_or_else(|| CliError::Input(format!("unknown morphism `{name}`")))
    }
    fn d(&self, x: &Self::Cell) -> String {
        self.0.source(x).name.to_string()
    }
    fn r(&self, x: &Self::Cell) -> String {
        self.0.target(x).name.to_string()
    }
    fn unit(&self, a: &String) -> Self::Cell {
        self.0.identity(&self.0.object(a).expect("endpoint exists"))
    }
    fn star(&self, x: &Self::Cell, y: &Self::Cell) -> Result<Self::Cell, String> {
        self.0.compose(x, y).ok_or_else(|| format!("composite of {x:?} then {y:?} missing from the table"))
    }
    fn render(&self, x: &Self::Cell) -> Value {
        json!({ "morphism": x.name.to_string(), "source": self.d(x), "target": self.r(x) })
    }
}

struct SpanComposer(BTreeMap<String, Span>);

#[derive(Serialize)]
struct SpanOut<'a> {
    apex: &'a FinSet,
    left: &'a FinFunction,
    right: &'a FinFunction,
}

impl Composer for SpanComposer {
    type Obj = FinSet;
    type Cell = Span;
    fn lookup(&self, name: &str) -> Result<Span, CliError> {
        self.0.get(name).cloned().ok_or_else(|| CliError::Input(format!("unknown span `{name}`")))
    }
    fn d(&self, x: &Span) -> FinSet {
        x.foot_left().clone()
    }
    fn r(&self, x: &Span) -> FinSet {
        x.foot_right().clone()
    }
    fn unit(&self, a: &FinSet) -> Span {
        Span::identity(a)
    }
    fn star(&self, x: &Span, y: &Span) -> Result<Span, String> {
        x.then(y).ok_or_else(|| "pullback failed".into())
    }
    fn render(&self, x: &Span) -> Value {
        serde_json::to_value(SpanOut { apex: x.apex(), left: &x.left, right: &x.right }).expect("spans serialize")
    }
}

struct BimodComposer(AlgDoubleCategory);

impl Composer for BimodComposer {
    type Obj = String;
    type Cell = Bimodule;
    fn lookup(&self, name: &str) -> Result<Bimodule, CliError> {
        bimodule_by_label(&self.0, name).cloned()
    }
    fn d(&self, x: &Bimodule) -> String {
        x.left().name().to_string()
    }
    fn r(&self, x: &Bimodule) -> String {
        x.right().name().to_string()
    }
    fn unit(&self, a: &String) -> Bimodule {
        let alg = self.0.algebras.iter().find(|b| b.name() == a).expect("endpoint exists");
        Bimodule::regular(alg)
    }
    fn star(&self, x: &Bimodule, y: &Bimodule) -> Result<Bimodule, String> {
        let t = tensor_over(x, y).map_err(|e| e.to_string())?;
        Ok(t.module.with_label(&format!("{}⊗{}", x.label(), y.label())))
    }
    fn render(&self, x: &Bimodule) -> Value {
        let mats = |ms: &[RationalMatrix]| ms.iter().map(RationalMatrix::to_strings).collect::<Vec<_>>();
        json!({
            "label": x.label(),
            "left": self.d(x),
            "right": self.r(x),
            "dim": x.dim(),
            "lambda": mats(x.lambda()),
            "rho": mats(x.rho()),
        })
    }
}

struct CobordComposer<C>(BTreeMap<String, C>, fn(&C) -> Value);

impl<C: Cobordism> Composer for CobordComposer<C> {
    type Obj = Oriented;
    type Cell = C;
    fn lookup(&self, name: &str) -> Result<C, CliError> {
        self.0.get(name).cloned().ok_or_else(|| CliError::Input(format!("unknown cobordism `{name}`")))
    }
    fn d(&self, x: &C) -> Oriented {
        x.source().clone()
    }
    fn r(&self, x: &C) -> Oriented {
        x.target().clone()
    }
    fn unit(&self, a: &Oriented) -> C {
        C::identity(a)
    }
    fn star(&self, x: &C, y: &C) -> Result<C, String> {
        x.compose(y).map_err(|e| e.to_string())
    }
    fn render(&self, x: &C) -> Value {
        (self.1)(x)
    }
}

fn render1(c: &Cobordism1) -> Value {
    let spec =
        Cobordism1Spec { source: c.source().clone(), target: c.target().clone(), pairs: c.pairs(), loops: c.loops() };
    serde_json::to_value(spec).expect("cobordisms serialize")
}

fn render2(c: &Cobordism2) -> Value {
    let spec =
        Cobordism2Spec { source: c.source().clone(), target: c.target().clone(), components: c.components().to_vec() };
    let mut v = serde_json::to_value(spec).expect("cobordisms serialize");
    v["euler_characteristic"] = json!(c.euler_characteristic());
    v["genus"] = json!(c.components().iter().map(|s| s.genus).sum::<u32>());
    v
}

pub fn compose(inputs: &[String], file: &InstanceFile, names: &[String]) -> Result<Report, CliError> {
    let report = Report::new("compose", inputs, file.instance.kind(), file.seed.unwrap_or(0), "none".into());
    match &file.instance {
        Instance::Fincat(spec) | Instance::Morph(spec) | Instance::Iso(spec) => {
            let c = validate_fin_category(spec).map_err(|e| CliError::Input(format!("category tables: {e}")))?;
            compose_all(&FinComposer(c), names, report)
        }
        Instance::Span(p) => {
            let spans = p
                .cells
                .iter()
                .map(|(k, s)| {
                    Span::new(s.left.clone(), s.right.clone())
                        .map(|x| (k.clone(), x))
                        .ok_or_else(|| CliError::Input(format!("span `{k}`: legs leave different apices")))
                })
                .collect::<Result<_, _>>()?;
            compose_all(&SpanComposer(spans), names, report)
        }
        Instance::Bimod(p) => compose_all(&BimodComposer(build_corpus(p)?), names, report),
        Instance::Cobord0(p) => {
            let cells =
                p.cells.iter().map(|(k, s)| Ok((k.clone(), build_cobordism1(s)?))).collect::<Result<_, CliError>>()?;
            compose_all(&CobordComposer(cells, render1), names, report)
        }
        Instance::Cobord1(p) => {
            let cells =
                p.cells.iter().map(|(k, s)| Ok((k.clone(), build_cobordism2(s)?))).collect::<Result<_, CliError>>()?;
            compose_all(&CobordComposer(cells, render2), names, report)
        }
        other => Err(CliError::Input(format!("compose is not defined for kind `{}`", other.kind()))),
    }
}

fn evaluations<T: Theory>(theory: &T, cells: &BTreeMap<String, T::Cob>) -> Value {
    let out: Vec<Value> = cells
        .iter()
        .map(|(name, c)| {
            let z = theory.evaluate(c);
            json!({
                "cell": name,
                "source": z.source,
                "target": z.target,
                "rows": z.matrix.rows(),
                "cols": z.matrix.cols(),
                "matrix": z.matrix.to_strings(),
            })
        })
        .collect();
    Value::Array(out)
}

pub fn tqft(
    inputs: &[String],
    theory: &InstanceFile,
    cobordisms: &InstanceFile,
    check: bool,
    draws: Option<usize>,
) -> Result<Report, CliError> {
    let seed = cobordisms.seed.unwrap_or(0);
    let budget = BudgetFlag { draws, exhaustive: false }.resolve(cobordisms, false);
    let mut report = Report::new("tqft", inputs, theory.instance.kind(), seed, describe_budget(&budget));
    let axioms = match (&theory.instance, &cobordisms.instance) {
        (Instance::Theory1d(t), Instance::Cobord0(p)) => {
            let z = build_theory1d(t);
            let cells = p.cells.iter().map(|(k, s)| Ok((k.clone(), build_cobordism1(s)?))).collect::<Result<_, CliError>>()?;
            report = report.with_result(evaluations(&z, &cells));
            check.then(|| check_axioms(&z, &cobordism_double_category_0(p.bound, seed), &budget))
        }
        (Instance::Frobenius(f), Instance::Cobord1(p)) => {
            let z = build_frobenius(f)?;
            let cells = p.cells.iter().map(|(k, s)| Ok((k.clone(), build_cobordism2(s)?))).collect::<Result<_, CliError>>()?;
            report = report.with_result(evaluations(&z, &cells));
            check.then(|| check_axioms(&z, &cobordism_double_category_1(p.bound, p.max_genus, seed), &budget))
        }
        (t, c) => {
            return Err(CliError::Input(format!(
                "theory kind `{}` does not evaluate cobordism kind `{}` (theory1d pairs with cobord0, frobenius with cobord1)",
                t.kind(),
                c.kind()
            )))
        }
    };
    Ok(match axioms {
        Some(laws) => finish_laws(report, laws),
        None => report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionCommand {
    Check,
    Orbit,
    Charclass,
}

fn object_spec<'a>(p: &'a ActionPayload, id: Option<&str>) -> Result<(&'a str, &'a ObjectSpec), CliError> {
    match id {
        Some(id) => p
            .objects
            .get_key_value(id)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| CliError::Input(format!("unknown object `{id}`"))),
        None => p
            .objects
            .iter()
            .next()
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| CliError::Input("orbit needs an object in the file".into())),
    }
}

fn run_orbit<A: Action>(a: &A, seed: MObj<A>, budget: usize, report: Report) -> Report {
    let render = |objects: &[MObj<A>], trace: &[dblcat::action::TraceStep]| {
        let mut producer: Vec<Option<&dblcat::action::TraceStep>> = vec![None; objects.len()];
        for step in trace {
            if step.to != step.from && producer[step.to].is_none() && step.to != 0 {
                producer[step.to] = Some(step);
            }
        }
        let listing: Vec<Value> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| match producer[i] {
                Some(s) => json!({ "object": format!("{o:?}"), "from": s.from, "cell": s.cell }),
                None => json!({ "object": format!("{o:?}") }),
            })
            .collect();
        listing
    };
    match orbit(a, &[seed], &[], budget) {
        Ok(o) => report.with_result(json!({
            "objects": render(&o.objects, &o.trace),
            "morphisms": o.morphisms.len(),
            "closed": true,
        })),
        Err(OrbitError::BudgetExhausted { budget, partial }) => report
            .with_result(json!({
                "objects": render(&partial.objects, &partial.trace),
                "morphisms": partial.morphisms.len(),
                "closed": false,
            }))
            .fail(format!("budget of {budget} exhausted before the fixpoint; partial closure listed")),
        Err(e) => report.fail(e.to_string()),
    }
}

fn run_action<A: Action>(
    a: &A,
    command: ActionCommand,
    budget: &Budget,
    orbit_budget: usize,
    seed_object: impl FnOnce() -> Result<MObj<A>, CliError>,
    report: Report,
) -> Result<Report, CliError> {
    Ok(match command {
        ActionCommand::Check => finish_laws(report, check_action(a, budget)),
        ActionCommand::Orbit => run_orbit(a, seed_object()?, orbit_budget, report),
        ActionCommand::Charclass => {
            return Err(CliError::Input("no characteristic class is shipped for this action".into()))
        }
    })
}

pub fn action(
    inputs: &[String],
    file: &InstanceFile,
    p: &ActionPayload,
    command: ActionCommand,
    seed_object: Option<&str>,
    draws: Option<usize>,
) -> Result<Report, CliError> {
    let seed = file.seed.unwrap_or(0);
    let check_budget = match command {
        ActionCommand::Orbit => Budget::Exhaustive,
        _ => BudgetFlag { draws, exhaustive: false }.resolve(file, false),
    };
    let orbit_budget = draws.unwrap_or(DEFAULT_ORBIT_BUDGET);
    let budget_text = match command {
        ActionCommand::Orbit => format!("closure({orbit_budget})"),
        _ => describe_budget(&check_budget),
    };
    let report = Report::new(&format!("action {command:?}").to_lowercase(), inputs, "action", seed, budget_text);
    let mismatch = |id: &str| CliError::Input(format!("object `{id}` does not fit a {:?} action", p.action));
    match p.action {
        ActionKind::Pullback => {
            let a = PullbackAction::new(p.max_size, p.per_call, seed);
            if command == ActionCommand::Charclass {
                let class = |pi: &FinFunction| PullbackAction::fiber_cardinalities(pi);
                let pull =
                    |f: &FinFunction, h: &Vec<usize>| (0..f.domain().len()).map(|b| h[f.at(b)]).collect::<Vec<_>>();
                return Ok(finish_laws(report, check_characteristic_class(&a, &class, &pull, &check_budget)));
            }
            run_action(
                &a,
                command,
                &check_budget,
                orbit_budget,
                || {
                    let (id, spec) = object_spec(p, seed_object)?;
                    match spec {
                        ObjectSpec::Bundle { base, map } => {
                            FinFunction::new(FinSet::range(map.len()), FinSet::range(*base), map.clone())
                                .map_err(|e| CliError::Input(format!("bundle `{id}`: {e}")))
                        }
                        _ => Err(mismatch(id)),
                    }
                },
                report,
            )
        }
        ActionKind::Iso => {
            let a = IsoAction::new(p.max_size).map_err(|e| CliError::Input(e.to_string()))?;
            run_action(
                &a,
                command,
                &check_budget,
                orbit_budget,
                || {
                    let (id, spec) = object_spec(p, seed_object)?;
                    match spec {
                        ObjectSpec::Pointed { size, point } if point < size => {
                            Ok(Pointed { set: FinSet::range(*size), point: *point })
                        }
                        _ => Err(mismatch(id)),
                    }
                },
                report,
            )
        }
        ActionKind::Module => {
            let a = ModuleAction::new(AlgDoubleCategory::standard_corpus());
            run_action(
                &a,
                command,
                &check_budget,
                orbit_budget,
                || {
                    let (id, spec) = object_spec(p, seed_object)?;
                    match spec {
                        ObjectSpec::Module { module } => {
                            let m = bimodule_by_label(a.double(), module)?.clone();
                            if a.acted().objects().contains(&m) {
                                Ok(m)
                            } else {
                                Err(CliError::Input(format!("`{module}` is not a left module of the corpus")))
                            }
                        }
                        _ => Err(mismatch(id)),
                    }
                },
                report,
            )
        }
    }
}
