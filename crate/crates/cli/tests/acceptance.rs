//! Acceptance run. Each criterion prints one PASS or FAIL line with its
//! wall time against its limit; the process exits non-zero if any fails.
//!
//! The oracles here are written independently of the library: pair sets,
//! relation matrices, gluing graphs and genus counts are computed from the
//! raw data of each instance.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Debug;
use std::time::{Duration, Instant};

use dblcat::action::{
    check_action, check_characteristic_class, orbit, right_self_action, self_action, validate_subcategory, IsoAction,
    ModuleAction, Pointed, PullbackAction,
};
use dblcat::bimod::{left_unit_iso, right_unit_iso, tensor_over, AlgDoubleCategory, Bimodule, FinDimAlgebra};
use dblcat::cobord::{
    cobordism_double_category_0, cobordism_double_category_1, reverse_cell, Cobordism, Cobordism1, Cobordism2,
    Oriented, ReverseFunctor, SamplerParams, Surface, UnionFunctor,
};
use dblcat::diagram::{
    iso_double_category, morph_double_category, ActionDoubleCategory, CartesianMonoidal, Morph, SpanDoubleCategory,
};
use dblcat::double::{
    check_double_category, check_double_functor, Budget, DoubleCategory, Dual, LawReport, Strictness, StructuralError,
    Tabulated,
};
use dblcat::finset::{check_pullback_universal, pullback, FinCategory, FinFunction, FinSet};
use dblcat::linalg::{q, RationalMatrix, Q};
use dblcat::tqft::{check_axioms, evaluate1, evaluate2, FrobeniusAlgebra, Theory, Theory1d};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A law report that ran and passed; otherwise the first failures.
fn passing(what: &str, report: Result<LawReport, StructuralError>) -> Result<LawReport, String> {
    let report = report.map_err(|e| format!("{what}: {e}"))?;
    if !report.passed() {
        let bad: Vec<String> = report
            .failing()
            .take(3)
            .map(|o| format!("{} ({})", o.law, o.counterexample.clone().unwrap_or_default()))
            .collect();
        return Err(format!("{what}: {}", bad.join("; ")));
    }
    Ok(report)
}

fn run(index: usize, title: &str, limit: Duration, body: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let timing = format!("{:.2}s / {}s", elapsed.as_secs_f64(), limit.as_secs());
    let outcome = match outcome {
        Ok(detail) if elapsed > limit => Err(format!("over time limit ({detail})")),
        other => other,
    };
    match &outcome {
        Ok(detail) => println!("PASS  {index}. {title} [{timing}] {detail}"),
        Err(reason) => println!("FAIL  {index}. {title} [{timing}] {reason}"),
    }
    outcome.is_ok()
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "double-category law suite", secs(30), law_suite),
        run(2, "pullback oracle", secs(10), pullback_oracle),
        run(3, "tensor-over-B oracle", secs(30), tensor_oracle),
        run(4, "cobordism gluing", secs(20), cobordism_gluing),
        run(5, "TQFT axioms and values", secs(60), tqft_axioms),
        run(6, "action suite", secs(30), action_suite),
        run(7, "duality and functors", secs(10), duality_and_functors),
        run(8, "CLI contract", secs(60), cli_contract),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

// 1 ---------------------------------------------------------------------

fn law_suite() -> Outcome {
    let mut checks = 0;
    let categories = [
        FinCategory::linear_order(4),
        FinCategory::cyclic_group(3),
        FinCategory::discrete(4),
        FinCategory::iso_and_arrow(),
    ];
    for c in categories {
        let (objects, morphisms) = (c.objects().len(), c.morphisms().len());
        ensure(objects <= 4 && morphisms <= 12, || format!("category too large: {objects}/{morphisms}"))?;
        let morph = morph_double_category(c.clone());
        ensure(morph.strictness() == Strictness::Strict, || "Morph(C) is not strict".into())?;
        checks += passing("Morph(C)", check_double_category(&morph, &Budget::Exhaustive))?.checked();
        let iso = iso_double_category(c).map_err(|e| e.to_string())?;
        ensure(iso.strictness() == Strictness::Strict, || "ISO(C) is not strict".into())?;
        checks += passing("ISO(C)", check_double_category(&iso, &Budget::Exhaustive))?.checked();
    }

    let spans = SpanDoubleCategory::new((0..=4).map(FinSet::range).collect(), 17);
    checks += weak_with_witnesses("Span(FinSet)", &spans, &Budget::sampled(120, 1))?;

    let alg = AlgDoubleCategory::standard_corpus();
    ensure(alg.algebras.iter().all(|a| a.dim() <= 3), || "algebra of dimension > 3".into())?;
    ensure(alg.bimodules.iter().all(|m| m.dim() <= 3), || "bimodule of dimension > 3".into())?;
    checks += weak_with_witnesses("ALG", &alg, &Budget::sampled(100, 2))?;
    Ok(format!("{checks} law instances"))
}

fn weak_with_witnesses<D: DoubleCategory>(what: &str, dc: &D, budget: &Budget) -> Result<usize, String> {
    ensure(dc.strictness() == Strictness::Weak, || format!("{what} is not weak"))?;
    let report = passing(what, check_double_category(dc, budget))?;
    for law in ["associator.witness", "unitor.witness"] {
        let checked = report.get(law).map_or(0, |o| o.checked);
        ensure(checked > 0, || format!("{what}: no {law} checks"))?;
    }
    Ok(report.checked())
}

// 2 ---------------------------------------------------------------------

fn pullback_oracle() -> Outcome {
    let sets: Vec<FinSet> = (0..=4).map(|n| FinSet::named("s", n)).collect();
    let mut cones = 0usize;
    for z in &sets {
        let into_z: Vec<FinFunction> = sets.iter().flat_map(|x| FinFunction::all(x, z)).collect();
        for u in &into_z {
            for v in &into_z {
                let cone = pullback(u, v).map_err(|e| e.to_string())?;
                let expected: BTreeSet<(String, String)> = u
                    .domain()
                    .elements()
                    .iter()
                    .flat_map(|x| v.domain().elements().iter().map(move |y| (x.clone(), y.clone())))
                    .filter(|(x, y)| u.apply(x) == v.apply(y))
                    .collect();
                let apex: Vec<(String, String)> = (0..cone.apex.len())
                    .map(|k| (cone.pi1.image(k).to_string(), cone.pi2.image(k).to_string()))
                    .collect();
                let apex_set: BTreeSet<_> = apex.iter().cloned().collect();
                ensure(apex.len() == apex_set.len() && apex_set == expected, || format!("apex of {u:?}, {v:?}"))?;
                ensure(check_pullback_universal(&cone, 3), || format!("universal property of {u:?}, {v:?}"))?;
                cones += 1;
            }
        }
    }
    Ok(format!("{cones} cospans"))
}

// 3 ---------------------------------------------------------------------

fn is_zero(x: &Q) -> bool {
    *x == q(0)
}

/// Row rank by plain Gaussian elimination.
fn oracle_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if is_zero(&rows[r][c]) {
                continue;
            }
            let factor = &rows[r][c] / &pivot;
            for k in c..cols {
                let delta = &factor * &rows[rank][k];
                rows[r][k] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Relations `(m_i·b_k) ⊗ n_j − m_i ⊗ (b_k·n_j)` written out coordinate by
/// coordinate, with `m_i ⊗ n_j` at `i·dim N + j`.
fn oracle_tensor_dim(m: &Bimodule, n: &Bimodule) -> usize {
    let (dm, dn) = (m.dim(), n.dim());
    let mut rows = Vec::new();
    for k in 0..m.right().dim() {
        for i in 0..dm {
            for j in 0..dn {
                let mut v = vec![q(0); dm * dn];
                for p in 0..dm {
                    v[p * dn + j] += m.rho()[k].get(p, i).clone();
                }
                for r in 0..dn {
                    v[i * dn + r] -= n.lambda()[k].get(r, j).clone();
                }
                rows.push(v);
            }
        }
    }
    dm * dn - oracle_rank(rows)
}

/// A random integer change of basis `L·U` with unit diagonals.
fn random_basis_change(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    let mut lower = RationalMatrix::identity(n);
    let mut upper = RationalMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, q(rng.gen_range(-2..=2)));
            upper.set(j, i, q(rng.gen_range(-2..=2)));
        }
    }
    &lower * &upper
}

fn conjugated(m: &Bimodule, p: &RationalMatrix) -> Result<Bimodule, String> {
    let pinv = p.inverse().map_err(|e| e.to_string())?;
    let conj = |x: &RationalMatrix| &(&pinv * x) * p;
    Bimodule::new(
        m.left(),
        m.right(),
        m.lambda().iter().map(conj).collect(),
        m.rho().iter().map(conj).collect(),
        &format!("{}'", m.label()),
    )
    .map_err(|e| e.to_string())
}

fn tensor_corpus() -> Vec<Bimodule> {
    let alg = AlgDoubleCategory::standard_corpus();
    let mut corpus = alg.bimodules.clone();
    corpus.extend(alg.algebras.iter().map(Bimodule::regular));
    let t3 = std::sync::Arc::new(FinDimAlgebra::truncated_polynomial(3));
    corpus.push(Bimodule::regular(&t3));
    corpus
}

fn check_unit_iso(m: &Bimodule, t: &Bimodule, w: &dblcat::double::Witness<RationalMatrix>) -> Result<(), String> {
    let (f, g) = (&w.forward, &w.inverse);
    let square = f.rows() == m.dim() && f.cols() == t.dim() && t.dim() == m.dim();
    ensure(square && oracle_rank(f.to_rows()) == m.dim(), || format!("unit map of {m:?} is not full rank"))?;
    ensure(&(f * g) == &RationalMatrix::identity(m.dim()), || format!("unit inverse of {m:?}"))?;
    ensure(&(g * f) == &RationalMatrix::identity(t.dim()), || format!("unit inverse of {m:?}"))?;
    for (lt, lm) in t.lambda().iter().zip(m.lambda()) {
        ensure(&(f * lt) == &(lm * f), || format!("unit map of {m:?} is not left-linear"))?;
    }
    for (rt, rm) in t.rho().iter().zip(m.rho()) {
        ensure(&(f * rt) == &(rm * f), || format!("unit map of {m:?} is not right-linear"))?;
    }
    Ok(())
}

fn tensor_oracle() -> Outcome {
    let corpus = tensor_corpus();
    let pairs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| (0..corpus.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| corpus[i].right() == corpus[j].left())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nontrivial = 0;
    for case in 0..100 {
        let (i, j) = pairs[rng.gen_range(0..pairs.len())];
        let pm = random_basis_change(&mut rng, corpus[i].dim());
        let pn = random_basis_change(&mut rng, corpus[j].dim());
        let (m, n) = (conjugated(&corpus[i], &pm)?, conjugated(&corpus[j], &pn)?);
        let t = tensor_over(&m, &n).map_err(|e| e.to_string())?;
        let expected = oracle_tensor_dim(&m, &n);
        ensure(t.module.dim() == expected, || {
            format!("case {case}: dim {m:?} ⊗ {n:?} = {} but oracle says {expected}", t.module.dim())
        })?;
        ensure(t.relation_rank == m.dim() * n.dim() - expected, || format!("case {case}: relation rank"))?;
        if expected < m.dim() * n.dim() {
            nontrivial += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in &corpus {
        let m2 = conjugated(m, &random_basis_change(&mut rng, m.dim()))?;
        for m in [m, &m2] {
            let (t, w) = left_unit_iso(m).map_err(|e| e.to_string())?;
            check_unit_iso(m, &t.module, &w)?;
            let (t, w) = right_unit_iso(m).map_err(|e| e.to_string())?;
            check_unit_iso(m, &t.module, &w)?;
        }
    }
    Ok(format!("100 cases ({nontrivial} with relations), {} unit pairs", 2 * corpus.len()))
}

// 4 ---------------------------------------------------------------------

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// `x` then `y` computed from the matchings alone: points of `X`, `Y`, `Z`
/// are nodes, intervals are edges, and components avoiding `X ⊔ Z` are new
/// circles.
fn oracle_glue1(x: &Cobordism1, y: &Cobordism1) -> Cobordism1 {
    let (a, b, c) = (x.source().len(), x.target().len(), y.target().len());
    let mut dsu = Dsu::new(a + b + c);
    for (p, q) in x.pairs() {
        dsu.join(p, q);
    }
    for (p, q) in y.pairs() {
        dsu.join(a + p, a + q);
    }
    let outer = |k: usize| k < a || k >= a + b;
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..a + b + c {
        let root = dsu.find(k);
        by_root.entry(root).or_default().push(k);
    }
    let mut partner = vec![0; a + c];
    let mut circles = 0;
    let squash = |k: usize| if k < a { k } else { k - b };
    for members in by_root.values() {
        let ends: Vec<usize> = members.iter().copied().filter(|&k| outer(k)).collect();
        match ends.as_slice() {
            [] => circles += 1,
            [p, q] => {
                partner[squash(*p)] = squash(*q);
                partner[squash(*q)] = squash(*p);
            }
            _ => panic!("interval with {} ends", ends.len()),
        }
    }
    Cobordism1::new(x.source().clone(), y.target().clone(), partner, x.loops() + y.loops() + circles)
        .expect("glued matching is valid")
}

/// Components of `x` then `y` from the surfaces alone: pieces sharing a
/// middle circle merge, Euler characteristics add, and the genus of each
/// merged piece is `(2 − χ − b) / 2`.
fn oracle_glue2(x: &Cobordism2, y: &Cobordism2) -> Result<Vec<Surface>, String> {
    let (a, b) = (x.source().len(), x.target().len());
    let nx = x.components().len();
    let pieces = nx + y.components().len();
    let mut dsu = Dsu::new(pieces);
    let mut middle_x = vec![None; b];
    let mut middle_y = vec![None; b];
    for (i, s) in x.components().iter().enumerate() {
        for &k in s.attachments.iter().filter(|&&k| k >= a) {
            middle_x[k - a] = Some(i);
        }
    }
    for (i, s) in y.components().iter().enumerate() {
        for &k in s.attachments.iter().filter(|&&k| k < b) {
            middle_y[k] = Some(nx + i);
        }
    }
    for k in 0..b {
        let (Some(p), Some(q)) = (middle_x[k], middle_y[k]) else {
            return Err(format!("middle circle {k} is unattached"));
        };
        dsu.join(p, q);
    }
    let mut merged: BTreeMap<usize, (i64, Vec<usize>)> = BTreeMap::new();
    let all = x.components().iter().map(|s| (s, false)).chain(y.components().iter().map(|s| (s, true)));
    for (i, (s, second)) in all.enumerate() {
        let entry = merged.entry(dsu.find(i)).or_default();
        entry.0 += 2 - 2 * i64::from(s.genus) - s.attachments.len() as i64;
        for &k in &s.attachments {
            match (second, k < a, k < b) {
                (false, true, _) => entry.1.push(k),
                (true, _, false) => entry.1.push(a + k - b),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    for (chi, mut attachments) in merged.into_values() {
        attachments.sort_unstable();
        let twice_genus = 2 - chi - attachments.len() as i64;
        ensure(twice_genus >= 0 && twice_genus % 2 == 0, || format!("non-integral genus from χ = {chi}"))?;
        out.push(Surface { genus: (twice_genus / 2) as u32, attachments });
    }
    out.sort();
    Ok(out)
}

fn sample_chain<C: Cobordism>(
    rng: &mut ChaCha8Rng,
    universe: &[Oriented],
    params: &SamplerParams,
    len: usize,
) -> Vec<C> {
    loop {
        let mut source = universe[rng.gen_range(0..universe.len())].clone();
        let mut chain = Vec::with_capacity(len);
        while chain.len() < len {
            let Some(next) = C::sample(rng, &source, universe, params) else {
                break;
            };
            source = next.target().clone();
            chain.push(next);
        }
        if chain.len() == len {
            return chain;
        }
    }
}

fn cobordism_gluing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let points = Oriented::all_up_to(4);
    let params = SamplerParams { max_closed: 2, max_genus: 2 };
    let mut circles_formed = 0;
    for _ in 0..500 {
        let t: Vec<Cobordism1> = sample_chain(&mut rng, &points, &params, 3);
        let glue = |x: &Cobordism1, y: &Cobordism1| x.compose(y).map_err(|e| format!("{x:?} ; {y:?}: {e}"));
        let left = glue(&glue(&t[0], &t[1])?, &t[2])?;
        let right = glue(&t[0], &glue(&t[1], &t[2])?)?;
        ensure(left == right, || format!("associativity fails on {t:?}"))?;
        for (x, y) in [(&t[0], &t[1]), (&t[1], &t[2])] {
            let expected = oracle_glue1(x, y);
            ensure(glue(x, y)? == expected, || format!("{x:?} ; {y:?} differs from the oracle {expected:?}"))?;
            circles_formed += expected.loops() - x.loops() - y.loops();
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let circles = Oriented::all_up_to(3);
    for _ in 0..300 {
        let pair: Vec<Cobordism2> = sample_chain(&mut rng, &circles, &params, 2);
        let (x, y) = (&pair[0], &pair[1]);
        let glued = x.compose(y).map_err(|e| format!("{x:?} ; {y:?}: {e}"))?;
        ensure(glued.euler_characteristic() == x.euler_characteristic() + y.euler_characteristic(), || {
            format!("χ not additive on {x:?} ; {y:?}")
        })?;
        let expected = oracle_glue2(x, y)?;
        let mut got = glued.components().to_vec();
        got.sort();
        ensure(got == expected, || format!("{x:?} ; {y:?} = {glued:?}, oracle {expected:?}"))?;
    }

    let tube = Cobordism2::copants().compose(&Cobordism2::pants()).map_err(|e| e.to_string())?;
    ensure(tube.components().len() == 1 && tube.components()[0].genus == 1, || format!("pants∘copants = {tube:?}"))?;
    let sphere = Cobordism2::cup().compose(&Cobordism2::cap()).map_err(|e| e.to_string())?;
    let closed_sphere = [Surface { genus: 0, attachments: vec![] }];
    ensure(sphere.components() == closed_sphere, || format!("cup∘cap = {sphere:?}"))?;
    Ok(format!("500 triples ({circles_formed} circles formed), 300 surface pairs"))
}

// 5 ---------------------------------------------------------------------

fn tqft_axioms() -> Outcome {
    const LAWS: [&str; 5] = ["A1.involutivity", "A2.multiplicativity", "A3.associativity", "A4.empty", "A5.identity"];
    let budget = Budget::sampled(120, 5);
    let all_laws = |what: &str, report: Result<LawReport, StructuralError>| -> Result<usize, String> {
        let report = passing(what, report)?;
        for law in LAWS {
            ensure(report.get(law).is_some_and(|o| o.checked > 0), || format!("{what}: {law} unchecked"))?;
        }
        Ok(report.get("A3.associativity").map_or(0, |o| o.checked))
    };
    let mut min_a3 = usize::MAX;

    let c0 = cobordism_double_category_0(3, 11);
    for n in 1..=3 {
        let theory = Theory1d::new(n);
        min_a3 = min_a3.min(all_laws(&format!("dim V = {n}"), check_axioms(&theory, &c0, &budget))?);
        let empty = theory.assign_object(&Oriented::empty());
        ensure(empty.dim == 1, || "Z(∅) is not the base field".into())?;
        for x in c0.objects() {
            let id = evaluate1(&theory, &Cobordism1::identity(&x)).matrix;
            ensure(id == RationalMatrix::identity(n.pow(x.len() as u32)), || format!("Z(ID {x:?}) ≠ 1"))?;
        }
        let circle = Cobordism1::new(Oriented::empty(), Oriented::empty(), vec![], 1).map_err(|e| e.to_string())?;
        ensure(evaluate1(&theory, &circle).matrix == RationalMatrix::from_i64(1, 1, &[n as i64]), || {
            format!("Z(circle) ≠ {n}")
        })?;
    }

    let c1 = cobordism_double_category_1(2, 2, 11);
    let closed =
        |genus| Cobordism2::new(Oriented::empty(), Oriented::empty(), vec![Surface { genus, attachments: vec![] }]);
    let sphere = closed(0).map_err(|e| e.to_string())?;
    let torus = closed(1).map_err(|e| e.to_string())?;
    let split = FrobeniusAlgebra::new(FinDimAlgebra::split(), vec![q(1), q(1)]).map_err(|e| e.to_string())?;
    for a in [FrobeniusAlgebra::trivial(), FrobeniusAlgebra::dual_numbers(), split] {
        let what = a.algebra().name().to_string();
        min_a3 = min_a3.min(all_laws(&what, check_axioms(&a, &c1, &budget))?);
        ensure(a.assign_object(&Oriented::empty()).dim == 1, || format!("{what}: Z(∅) is not the base field"))?;
        for x in c1.objects() {
            let id = evaluate2(&a, &Cobordism2::identity(&x)).matrix;
            ensure(id == RationalMatrix::identity(a.algebra().dim().pow(x.len() as u32)), || {
                format!("{what}: Z(ID {x:?}) ≠ 1")
            })?;
        }
        let dim = a.algebra().dim() as i64;
        ensure(evaluate2(&a, &torus).matrix == RationalMatrix::from_i64(1, 1, &[dim]), || {
            format!("{what}: Z(torus) ≠ {dim}")
        })?;
    }
    let dual = FrobeniusAlgebra::dual_numbers();
    ensure(evaluate2(&dual, &sphere).matrix == RationalMatrix::from_i64(1, 1, &[0]), || {
        "Z(sphere) ≠ 0 over ℚ[x]/(x²)".into()
    })?;
    ensure(min_a3 >= 100, || format!("only {min_a3} gluing pairs in some dimension"))?;
    Ok(format!("6 theories, ≥ {min_a3} gluing pairs each"))
}

// 6 ---------------------------------------------------------------------

fn action_suite() -> Outcome {
    let mut checks = 0;
    let a = self_action(Morph(FinCategory::linear_order(3)));
    checks += passing("self-action", check_action(&a, &Budget::Exhaustive))?.checked();
    let spans = SpanDoubleCategory::new((0..=2).map(FinSet::range).collect(), 5);
    checks += passing("right self-action", check_action(&right_self_action(spans), &Budget::sampled(60, 2)))?.checked();
    let pullbacks = PullbackAction::new(4, 2, 9);
    checks += passing("pullback action", check_action(&pullbacks, &Budget::sampled(300, 4)))?.checked();
    let modules = ModuleAction::new(AlgDoubleCategory::standard_corpus());
    checks += passing("module action", check_action(&modules, &Budget::sampled(80, 3)))?.checked();
    let iso = IsoAction::new(3).map_err(|e| e.to_string())?;
    checks += passing("pointed-set action", check_action(&iso, &Budget::Exhaustive))?.checked();

    let mut orbits = 0;
    let small = PullbackAction::new(2, 2, 3);
    for pi in small.universe().iter().flat_map(|e| small.universe().iter().flat_map(move |b| FinFunction::all(e, b))) {
        let o = orbit(&small, &[pi.clone()], &[], 50_000).map_err(|e| format!("orbit of {pi:?}: {e:?}"))?;
        validate_subcategory(&small, &o.objects, &o.morphisms).map_err(|e| format!("orbit of {pi:?}: {e}"))?;
        orbits += 1;
    }
    for n in 1..=3 {
        for point in 0..n {
            let seed = Pointed { set: FinSet::range(n), point };
            let o = orbit(&iso, &[seed.clone()], &[], 50_000).map_err(|e| format!("orbit of {seed:?}: {e:?}"))?;
            validate_subcategory(&iso, &o.objects, &o.morphisms).map_err(|e| format!("orbit of {seed:?}: {e}"))?;
            orbits += 1;
        }
    }

    let universe4 = PullbackAction::new(4, 1, 0);
    let class = |pi: &FinFunction| PullbackAction::fiber_cardinalities(pi);
    let pull = |f: &FinFunction, h: &Vec<usize>| (0..f.domain().len()).map(|b| h[f.at(b)]).collect::<Vec<_>>();
    let report = passing("fiber class", check_characteristic_class(&universe4, &class, &pull, &Budget::Exhaustive))?;
    let class_checks = report.checked();
    ensure(class_checks == expected_class_checks(4), || format!("class checked {class_checks} pairs"))?;
    Ok(format!("{checks} law instances, {orbits} orbits validated, {class_checks} class pairs"))
}

/// Pairs (bundle `E → B`, map `B′ → B`) over sets of size ≤ n.
fn expected_class_checks(n: u32) -> usize {
    (0..=n).map(|b| (0..=n).map(|e| (b as usize).pow(e)).sum::<usize>().pow(2)).sum()
}

// 7 ---------------------------------------------------------------------

fn as_set<T: Clone + Eq + std::hash::Hash>(xs: Vec<T>) -> HashSet<T> {
    xs.into_iter().collect()
}

/// Compares `Dual(Dual(D))` with `D` on the first `limit` cells, their
/// squares, and the composites among them.
fn dual_is_involution<D>(what: &str, dc: &D, limit: usize) -> Result<usize, String>
where
    D: DoubleCategory + Clone,
{
    let dd = Dual(Dual(dc.clone()));
    let fail = |thing: &str| format!("{what}: dual of dual changes {thing}");
    ensure(as_set(dd.objects()) == as_set(dc.objects()), || fail("objects"))?;
    let mut compared = 0;
    for a in dc.objects() {
        ensure(as_set(dd.morphisms_from(&a)) == as_set(dc.morphisms_from(&a)), || fail("morphisms"))?;
        ensure(as_set(dd.cells_from(&a)) == as_set(dc.cells_from(&a)), || fail("cells"))?;
        ensure(dd.unit(&a) == dc.unit(&a), || fail("units"))?;
    }
    let cells: Vec<D::Cell1> = dc.all_cells().into_iter().take(limit).collect();
    for x in &cells {
        ensure(dd.d(x) == dc.d(x) && dd.r(x) == dc.r(x), || fail("frames"))?;
        ensure(as_set(dd.squares_from(x)) == as_set(dc.squares_from(x)), || fail("squares"))?;
        ensure(dd.left_unitor(x) == dc.left_unitor(x) && dd.right_unitor(x) == dc.right_unitor(x), || fail("unitors"))?;
        for s in dc.squares_from(x).into_iter().take(2) {
            ensure(dd.d2(&s) == dc.d2(&s) && dd.r2(&s) == dc.r2(&s) && dd.tgt2(&s) == dc.tgt2(&s), || {
                fail("square frames")
            })?;
        }
        for y in dc.cells_from(&dc.r(x)).into_iter().take(3) {
            ensure(dd.star(x, &y) == dc.star(x, &y), || fail("composites"))?;
            for z in dc.cells_from(&dc.r(&y)).into_iter().take(2) {
                ensure(dd.associator(x, &y, &z) == dc.associator(x, &y, &z), || fail("associators"))?;
            }
            compared += 1;
        }
        compared += 1;
    }
    Ok(compared)
}

fn duality_and_functors() -> Outcome {
    let mut compared = 0;
    compared += dual_is_involution("Morph", &morph_double_category(FinCategory::linear_order(3)), 40)?;
    compared +=
        dual_is_involution("ISO", &iso_double_category(FinCategory::iso_and_arrow()).map_err(|e| e.to_string())?, 40)?;
    compared += dual_is_involution("Span", &SpanDoubleCategory::new((0..=2).map(FinSet::range).collect(), 3), 30)?;
    compared +=
        dual_is_involution("monoidal", &CartesianMonoidal { universe: (0..=2).map(FinSet::range).collect() }, 20)?;
    let carriers = vec![FinSet::named("c", 1), FinSet::named("c", 2)];
    compared += dual_is_involution(
        "action",
        &ActionDoubleCategory::new((1..=2).map(FinSet::range).collect(), carriers, 9),
        20,
    )?;
    compared += dual_is_involution("ALG", &AlgDoubleCategory::standard_corpus(), 20)?;
    let (c0, c1) = (cobordism_double_category_0(3, 13), cobordism_double_category_1(2, 2, 13));
    compared += dual_is_involution("C(0)", &c0, 30)?;
    compared += dual_is_involution("C(1)", &c1, 30)?;
    let table =
        Tabulated::from_instance(&morph_double_category(FinCategory::iso_and_arrow())).map_err(|e| e.to_string())?;
    ensure(table.dual().dual() == table, || "tabulated dual is not an involution".into())?;
    ensure(table.dual() != table, || "tabulated dual is trivial on a non-symmetric instance".into())?;

    let budget = Budget::sampled(80, 2);
    passing("(−) on C(0)", check_double_functor(&ReverseFunctor::new(c0.clone()), &budget))?;
    passing("(−) on C(1)", check_double_functor(&ReverseFunctor::new(c1.clone()), &budget))?;
    passing("∪ on C(0)", check_double_functor(&UnionFunctor::new(cobordism_double_category_0(2, 13)), &budget))?;
    passing("∪ on C(1)", check_double_functor(&UnionFunctor::new(cobordism_double_category_1(1, 1, 13)), &budget))?;

    let twice = reverse_twice_is_identity(&c0)? + reverse_twice_is_identity(&c1)?;
    Ok(format!("{compared} dual comparisons, {twice} cells reversed twice"))
}

fn reverse_twice_is_identity<C: Cobordism + Debug>(
    dc: &dblcat::cobord::CobordismDoubleCategory<C>,
) -> Result<usize, String> {
    let mut seen = 0;
    for x in dc.objects() {
        ensure(x.reversed().reversed() == x, || format!("object {x:?}"))?;
        for f in dc.morphisms_from(&x) {
            ensure(f.reversed().reversed() == f, || format!("bijection {f:?}"))?;
        }
        for c in dc.cells_from(&x) {
            ensure(c.reverse().reverse() == c, || format!("cobordism {c:?}"))?;
            for s in dc.squares_from(&c) {
                ensure(reverse_cell(&reverse_cell(&s)) == s, || format!("2-cell {s:?}"))?;
                seen += 1;
            }
            seen += 1;
        }
    }
    Ok(seen)
}

// 8 ---------------------------------------------------------------------

fn cli_contract() -> Outcome {
    let with_flag = |case: &common::Case| {
        let mut args = case.args.to_vec();
        args.push("--no-timestamp");
        common::dblcat(&args)
    };
    for case in common::CASES {
        let first = with_flag(case);
        ensure(first.status.code() == Some(case.code), || {
            format!("{}: exit {:?}, expected {}", case.name, first.status.code(), case.code)
        })?;
        let golden = std::fs::read(common::golden_path(case)).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(first.stdout == golden, || format!("{}: differs from its golden file", case.name))?;
        ensure(with_flag(case).stdout == first.stdout, || format!("{}: not deterministic", case.name))?;
    }
    for args in common::INPUT_ERRORS {
        let out = common::dblcat(args);
        ensure(out.status.code() == Some(2) && out.stdout.is_empty(), || format!("{args:?}: expected exit 2"))?;
    }
    let codes: BTreeSet<i32> = common::CASES.iter().map(|c| c.code).chain([2]).collect();
    ensure(codes.len() == 3, || "not every exit code is exercised".into())?;
    Ok(format!("{} golden reports, {} input errors", common::CASES.len(), common::INPUT_ERRORS.len()))
}
