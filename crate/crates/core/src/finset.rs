//! Finite sets, total functions, pullbacks, and tabulated finite categories.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinSetError {
    #[error("duplicate element `{0}`")]
    Duplicate(String),
    #[error("`{element}` is not an element of {set}")]
    NotAnElement { element: String, set: String },
    #[error("mapping has {got} entries for a domain of size {expected}")]
    NotTotal { expected: usize, got: usize },
    #[error("codomain of {left} does not match {right}")]
    Mismatch { left: String, right: String },
}

/// A finite set of named elements in a fixed order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct FinSet {
    elements: Arc<[String]>,
}

impl TryFrom<Vec<String>> for FinSet {
    type Error = FinSetError;
    fn try_from(v: Vec<String>) -> Result<Self, FinSetError> {
        FinSet::new(v)
    }
}

impl From<FinSet> for Vec<String> {
    fn from(s: FinSet) -> Self {
        s.elements.to_vec()
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(","))
    }
}

/// Canonical name of the pair `(x, y)`.
pub fn pair_name(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

impl FinSet {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self, FinSetError> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(FinSetError::Duplicate(e.clone()));
            }
        }
        Ok(Self { elements: elements.into() })
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        Self { elements: (0..n).map(|i| i.to_string()).collect() }
    }

    /// `{prefix0, ..., prefix(n-1)}`.
    pub fn named(prefix: &str, n: usize) -> Self {
        Self { elements: (0..n).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn empty() -> Self {
        Self::range(0)
    }

    /// The one-point set `{*}`.
    pub fn point() -> Self {
        Self { elements: vec!["*".to_string()].into() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, FinSetError> {
        self.index_of(name)
            .ok_or_else(|| FinSetError::NotAnElement { element: name.to_string(), set: format!("{self:?}") })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }
}

/// A total function between finite sets, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFunction {
    domain: FinSet,
    codomain: FinSet,
    map: Arc<[usize]>,
}

impl fmt::Debug for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = (0..self.domain.len())
            .map(|i| format!("{}↦{}", self.domain.element(i), self.codomain.element(self.map[i])))
            .collect();
        write!(f, "[{}]:{:?}→{:?}", body.join(","), self.domain, self.codomain)
    }
}

#[derive(Serialize, Deserialize)]
struct FinFunctionRepr {
    domain: FinSet,
    codomain: FinSet,
    mapping: BTreeMap<String, String>,
}

impl Serialize for FinFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mapping =
            (0..self.domain.len()).map(|i| (self.domain.element(i).to_string(), self.image(i).to_string())).collect();
        FinFunctionRepr { domain: self.domain.clone(), codomain: self.codomain.clone(), mapping }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FinFunctionRepr::deserialize(d)?;
        let images: Result<Vec<_>, _> = r
            .domain
            .elements()
            .iter()
            .map(|x| {
                r.mapping
                    .get(x)
                    .cloned()
                    .ok_or_else(|| FinSetError::NotTotal { expected: r.domain.len(), got: r.mapping.len() })
            })
            .collect();
        let images = images.map_err(serde::de::Error::custom)?;
        FinFunction::from_names(&r.domain, &r.codomain, &images).map_err(serde::de::Error::custom)
    }
}

impl FinFunction {
    pub fn new(domain: FinSet, codomain: FinSet, map: Vec<usize>) -> Result<Self, FinSetError> {
        if map.len() != domain.len() {
            return Err(FinSetError::NotTotal { expected: domain.len(), got: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= codomain.len()) {
            return Err(FinSetError::NotAnElement { element: format!("#{bad}"), set: format!("{codomain:?}") });
        }
        Ok(Self { domain, codomain, map: map.into() })
    }

    pub fn from_names<S: AsRef<str>>(domain: &FinSet, codomain: &FinSet, images: &[S]) -> Result<Self, FinSetError> {
        let map = images.iter().map(|y| codomain.require(y.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Self::new(domain.clone(), codomain.clone(), map)
    }

    /// Builds a function from a closure on element indices.
    pub fn from_fn(domain: &FinSet, codomain: &FinSet, f: impl Fn(usize) -> usize) -> Self {
        let map: Vec<usize> = (0..domain.len()).map(f).collect();
        debug_assert!(map.iter().all(|&j| j < codomain.len()));
        Self { domain: domain.clone(), codomain: codomain.clone(), map: map.into() }
    }

    pub fn identity(set: &FinSet) -> Self {
        Self::from_fn(set, set, |i| i)
    }

    /// The constant function at codomain index `j`.
    pub fn constant(domain: &FinSet, codomain: &FinSet, j: usize) -> Self {
        Self::from_fn(domain, codomain, |_| j)
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    /// Image index of domain index `i`.
    pub fn at(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Image name of domain index `i`.
    pub fn image(&self, i: usize) -> &str {
        self.codomain.element(self.map[i])
    }

    pub fn apply(&self, x: &str) -> Option<&str> {
        self.domain.index_of(x).map(|i| self.image(i))
    }

    /// `self` then `g`.
    pub fn then(&self, g: &FinFunction) -> Result<FinFunction, FinSetError> {
        if self.codomain != g.domain {
            return Err(FinSetError::Mismatch { left: format!("{self:?}"), right: format!("{g:?}") });
        }
        Ok(Self::from_fn(&self.domain, &g.codomain, |i| g.map[self.map[i]]))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.map.iter().for_each(|&j| seen[j] = true);
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijection(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinFunction> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(Self { domain: self.codomain.clone(), codomain: self.domain.clone(), map: inv.into() })
    }

    /// Preimage indices of codomain index `j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == j).collect()
    }

    /// Every function `domain → codomain`, in lexicographic order of images.
    pub fn all(domain: &FinSet, codomain: &FinSet) -> Vec<FinFunction> {
        let (n, m) = (domain.len(), codomain.len());
        if m == 0 {
            return if n == 0 { vec![Self::identity(domain)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            out.push(Self { domain: domain.clone(), codomain: codomain.clone(), map: digits.clone().into() });
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < m {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

/// The pullback square of `u: X → Z` and `v: Y → Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCone {
    pub apex: FinSet,
    pub pi1: FinFunction,
    pub pi2: FinFunction,
    pub u: FinFunction,
    pub v: FinFunction,
}

/// The canonical pullback: all pairs `(x, y)` with `u(x) = v(y)`, ordered
/// lexicographically by the input enumerations.
pub fn pullback(u: &FinFunction, v: &FinFunction) -> Result<PullbackCone, FinSetError> {
    if u.codomain() != v.codomain() {
        return Err(FinSetError::Mismatch { left: format!("{u:?}"), right: format!("{v:?}") });
    }
    let (x, y) = (u.domain(), v.domain());
    let pairs: Vec<(usize, usize)> =
        (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).filter(|&(i, j)| u.at(i) == v.at(j)).collect();
    let apex = FinSet { elements: pairs.iter().map(|&(i, j)| pair_name(x.element(i), y.element(j))).collect() };
    let pi1 = FinFunction::from_fn(&apex, x, |k| pairs[k].0);
    let pi2 = FinFunction::from_fn(&apex, y, |k| pairs[k].1);
    Ok(PullbackCone { apex, pi1, pi2, u: u.clone(), v: v.clone() })
}

/// Bounded check of the universal property: for every competing cone
/// `(W, a, b)` with `|W| ≤ bound`, exactly one mediating map exists.
///
/// Competing cones are enumerated as maps from `W` into the set of
/// compatible pairs; for each, mediating maps are counted pointwise.
pub fn check_pullback_universal(cone: &PullbackCone, bound: usize) -> bool {
    let PullbackCone { apex, pi1, pi2, u, v } = cone;
    let (x, y) = (u.domain(), v.domain());
    let shapes_ok = pi1.domain() == apex
        && pi2.domain() == apex
        && pi1.codomain() == x
        && pi2.codomain() == y
        && u.codomain() == v.codomain();
    if !shapes_ok {
        return false;
    }
    if (0..apex.len()).any(|k| u.at(pi1.at(k)) != v.at(pi2.at(k))) {
        return false;
    }
    let compatible: Vec<(usize, usize)> =
        (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).filter(|&(i, j)| u.at(i) == v.at(j)).collect();
    // Number of apex points over each compatible pair.
    let lifts: Vec<usize> = compatible
        .iter()
        .map(|&(i, j)| (0..apex.len()).filter(|&k| pi1.at(k) == i && pi2.at(k) == j).count())
        .collect();
    for w in 0..=bound {
        let mut digits = vec![0usize; w];
        if w > 0 && compatible.is_empty() {
            continue;
        }
        loop {
            let mediators: usize = digits.iter().map(|&p| lifts[p]).product();
            if mediators != 1 {
                return false;
            }
            let mut k = w;
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < compatible.len() {
                    break true;
                }
                digits[k] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    true
}

/// `X ⊔ Y` with its injections; elements are tagged `(0,x)` and `(1,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct {
    pub set: FinSet,
    pub inl: FinFunction,
    pub inr: FinFunction,
}

pub fn disjoint_union(x: &FinSet, y: &FinSet) -> Coproduct {
    let elements: Vec<String> =
        x.elements().iter().map(|e| pair_name("0", e)).chain(y.elements().iter().map(|e| pair_name("1", e))).collect();
    let set = FinSet { elements: elements.into() };
    let inl = FinFunction::from_fn(x, &set, |i| i);
    let inr = FinFunction::from_fn(y, &set, |j| x.len() + j);
    Coproduct { set, inl, inr }
}

/// `X × Y` with its projections; elements are `(x,y)` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianProduct {
    pub set: FinSet,
    pub p1: FinFunction,
    pub p2: FinFunction,
}

impl CartesianProduct {
    /// Index of the pair `(i, j)`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.p2.codomain().len() + j
    }
}

pub fn cartesian_product(x: &FinSet, y: &FinSet) -> CartesianProduct {
    let n = y.len();
    let elements: Vec<String> =
        x.elements().iter().flat_map(|a| y.elements().iter().map(move |b| pair_name(a, b))).collect();
    let set = FinSet { elements: elements.into() };
    let p1 = FinFunction::from_fn(&set, x, |k| k / n);
    let p2 = FinFunction::from_fn(&set, y, |k| k % n);
    CartesianProduct { set, p1, p2 }
}

/// `f × g: X × Y → X′ × Y′`.
pub fn product_map(f: &FinFunction, g: &FinFunction) -> FinFunction {
    let src = cartesian_product(f.domain(), g.domain());
    let tgt = cartesian_product(f.codomain(), g.codomain());
    let n = g.domain().len();
    FinFunction::from_fn(&src.set, &tgt.set, |k| tgt.index(f.at(k / n), g.at(k % n)))
}

/// The re-tagging bijection `(X ⊔ Y) ⊔ Z → X ⊔ (Y ⊔ Z)`.
pub fn coproduct_associator(x: &FinSet, y: &FinSet, z: &FinSet) -> FinFunction {
    let left = disjoint_union(&disjoint_union(x, y).set, z).set;
    let right = disjoint_union(x, &disjoint_union(y, z).set).set;
    // Both sides list x's, then y's, then z's.
    FinFunction::from_fn(&left, &right, |i| i)
}

/// The re-bracketing bijection `(X × Y) × Z → X × (Y × Z)`.
pub fn product_associator(x: &FinSet, y: &FinSet, z: &FinSet) -> FinFunction {
    let left = cartesian_product(&cartesian_product(x, y).set, z).set;
    let right = cartesian_product(x, &cartesian_product(y, z).set).set;
    // Lexicographic order makes both enumerations agree index-wise.
    FinFunction::from_fn(&left, &right, |i| i)
}

/// A named cell of a finite category. Equality is by index; the name is
/// carried for reporting.
#[derive(Clone)]
pub struct Named {
    pub index: usize,
    pub name: Arc<str>,
}

impl PartialEq for Named {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}
impl Eq for Named {}
impl std::hash::Hash for Named {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.index.hash(state)
    }
}
impl PartialOrd for Named {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Named {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index)
    }
}
impl fmt::Debug for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Raw tables for a finite category, as read from files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCategorySpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    /// object ↦ identity morphism
    pub identities: BTreeMap<String, String>,
    /// `[f, g, f;g]`: `f` then `g`
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinCategoryError {
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("identity `{mor}` of `{obj}` is not an endomorphism of it")]
    BadIdentity { obj: String, mor: String },
    #[error("no identity declared for `{0}`")]
    MissingIdentity(String),
    #[error("composite of `{f}` then `{g}` is not declared")]
    MissingComposite { f: String, g: String },
    #[error("composite of `{f}` then `{g}` declared on a non-composable pair or with wrong endpoints")]
    BadComposite { f: String, g: String },
    #[error("composite of `{f}` then `{g}` declared twice")]
    DuplicateComposite { f: String, g: String },
    #[error("identity law fails at `{0}`")]
    IdentityLaw(String),
    #[error("associativity fails at ({f}, {g}, {h})")]
    Associativity { f: String, g: String, h: String },
}

/// A finite category with an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<Named>,
    morphisms: Vec<Named>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
    compose: Vec<Option<usize>>,
}

impl FinCategory {
    pub fn objects(&self) -> &[Named] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Named] {
        &self.morphisms
    }

    pub fn source(&self, f: &Named) -> Named {
        self.objects[self.source[f.index]].clone()
    }

    pub fn target(&self, f: &Named) -> Named {
        self.objects[self.target[f.index]].clone()
    }

    pub fn identity(&self, a: &Named) -> Named {
        self.morphisms[self.identity[a.index]].clone()
    }

    /// `f` then `g`, when composable.
    pub fn compose(&self, f: &Named, g: &Named) -> Option<Named> {
        let n = self.morphisms.len();
        self.compose[f.index * n + g.index].map(|h| self.morphisms[h].clone())
    }

    pub fn object(&self, name: &str) -> Option<Named> {
        self.objects.iter().find(|o| &*o.name == name).cloned()
    }

    pub fn morphism(&self, name: &str) -> Option<Named> {
        self.morphisms.iter().find(|m| &*m.name == name).cloned()
    }

    pub fn is_identity(&self, f: &Named) -> bool {
        self.identity[self.source[f.index]] == f.index
    }

    /// The tables back in file form.
    pub fn to_spec(&self) -> FinCategorySpec {
        let name = |v: &[Named], i: usize| v[i].name.to_string();
        let n = self.morphisms.len();
        FinCategorySpec {
            objects: self.objects.iter().map(|o| o.name.to_string()).collect(),
            morphisms: (0..n)
                .map(|i| MorphismSpec {
                    name: name(&self.morphisms, i),
                    source: name(&self.objects, self.source[i]),
                    target: name(&self.objects, self.target[i]),
                })
                .collect(),
            identities: (0..self.objects.len())
                .map(|a| (name(&self.objects, a), name(&self.morphisms, self.identity[a])))
                .collect(),
            compose: (0..n * n)
                .filter_map(|k| {
                    let h = self.compose[k]?;
                    Some([name(&self.morphisms, k / n), name(&self.morphisms, k % n), name(&self.morphisms, h)])
                })
                .collect(),
        }
    }

    /// The linear order `0 → 1 → ... → n-1` as a category; the arrow
    /// `i → j` (`i ≤ j`) is named `i<j`, identities `id_i`.
    pub fn linear_order(n: usize) -> FinCategory {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let name = |i: usize, j: usize| if i == j { format!("id_{i}") } else { format!("{i}<{j}") };
        let mut morphisms = Vec::new();
        let mut compose = Vec::new();
        for i in 0..n {
            for j in i..n {
                morphisms.push(MorphismSpec { name: name(i, j), source: i.to_string(), target: j.to_string() });
                for k in j..n {
                    compose.push([name(i, j), name(j, k), name(i, k)]);
                }
            }
        }
        let identities = (0..n).map(|i| (i.to_string(), name(i, i))).collect();
        validate_fin_category(&FinCategorySpec { objects, morphisms, identities, compose })
            .expect("linear orders are categories")
    }

    /// The cyclic group of order `n` as a one-object category; `g^k` is named `g{k}`.
    pub fn cyclic_group(n: usize) -> FinCategory {
        assert!(n > 0);
        let morphisms =
            (0..n).map(|k| MorphismSpec { name: format!("g{k}"), source: "*".into(), target: "*".into() }).collect();
        let compose = (0..n)
            .flat_map(|i| (0..n).map(move |j| [format!("g{i}"), format!("g{j}"), format!("g{}", (i + j) % n)]))
            .collect();
        let identities = [("*".to_string(), "g0".to_string())].into_iter().collect();
        validate_fin_category(&FinCategorySpec { objects: vec!["*".into()], morphisms, identities, compose })
            .expect("groups are categories")
    }

    /// Objects only, identities only.
    pub fn discrete(n: usize) -> FinCategory {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let morphisms = objects
            .iter()
            .map(|o| MorphismSpec { name: format!("id_{o}"), source: o.clone(), target: o.clone() })
            .collect();
        let compose = objects.iter().map(|o| [format!("id_{o}"), format!("id_{o}"), format!("id_{o}")]).collect();
        let identities = objects.iter().map(|o| (o.clone(), format!("id_{o}"))).collect();
        validate_fin_category(&FinCategorySpec { objects, morphisms, identities, compose })
            .expect("discrete categories are categories")
    }

    /// The walking isomorphism `0 ⇄ 1`, adjoined as a disjoint component to
    /// the arrow `2 → 3`.
    pub fn iso_and_arrow() -> FinCategory {
        let m = |n: &str, s: &str, t: &str| MorphismSpec { name: n.into(), source: s.into(), target: t.into() };
        let morphisms = vec![
            m("id_0", "0", "0"),
            m("id_1", "1", "1"),
            m("i", "0", "1"),
            m("j", "1", "0"),
            m("id_2", "2", "2"),
            m("id_3", "3", "3"),
            m("a", "2", "3"),
        ];
        let mut compose: Vec<[String; 3]> = Vec::new();
        let mut c = |f: &str, g: &str, h: &str| compose.push([f.into(), g.into(), h.into()]);
        for (id, others_out, others_in) in [
            ("id_0", vec!["i"], vec!["j"]),
            ("id_1", vec!["j"], vec!["i"]),
            ("id_2", vec!["a"], vec![]),
            ("id_3", vec![], vec!["a"]),
        ] {
            c(id, id, id);
            for f in others_out {
                c(id, f, f);
            }
            for f in others_in {
                c(f, id, f);
            }
        }
        c("i", "j", "id_0");
        c("j", "i", "id_1");
        let identities = (0..4).map(|k| (k.to_string(), format!("id_{k}"))).collect();
        validate_fin_category(&FinCategorySpec {
            objects: (0..4).map(|k| k.to_string()).collect(),
            morphisms,
            identities,
            compose,
        })
        .expect("valid category")
    }
}

/// Builds a `FinCategory` from raw tables after exhaustively checking
/// endpoints, identity laws and associativity.
pub fn validate_fin_category(spec: &FinCategorySpec) -> Result<FinCategory, FinCategoryError> {
    let mut obj_index = HashMap::new();
    for (i, o) in spec.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), i).is_some() {
            return Err(FinCategoryError::Duplicate(o.clone()));
        }
    }
    let mut mor_index = HashMap::new();
    for (i, m) in spec.morphisms.iter().enumerate() {
        if mor_index.insert(m.name.as_str(), i).is_some() {
            return Err(FinCategoryError::Duplicate(m.name.clone()));
        }
    }
    let obj = |s: &str| obj_index.get(s).copied().ok_or_else(|| FinCategoryError::Unknown(s.to_string()));
    let mor = |s: &str| mor_index.get(s).copied().ok_or_else(|| FinCategoryError::Unknown(s.to_string()));
    let n = spec.morphisms.len();
    let source = spec.morphisms.iter().map(|m| obj(&m.source)).collect::<Result<Vec<_>, _>>()?;
    let target = spec.morphisms.iter().map(|m| obj(&m.target)).collect::<Result<Vec<_>, _>>()?;
    let mut identity = Vec::with_capacity(spec.objects.len());
    for o in &spec.objects {
        let m = spec.identities.get(o).ok_or_else(|| FinCategoryError::MissingIdentity(o.clone()))?;
        let i = mor(m)?;
        if spec.morphisms[i].source != *o || spec.morphisms[i].target != *o {
            return Err(FinCategoryError::BadIdentity { obj: o.clone(), mor: m.clone() });
        }
        identity.push(i);
    }
    for o in spec.identities.keys() {
        obj(o)?;
    }
    let mut compose = vec![None; n * n];
    for [f, g, h] in &spec.compose {
        let (fi, gi, hi) = (mor(f)?, mor(g)?, mor(h)?);
        let bad = target[fi] != source[gi] || source[hi] != source[fi] || target[hi] != target[gi];
        if bad {
            return Err(FinCategoryError::BadComposite { f: f.clone(), g: g.clone() });
        }
        if compose[fi * n + gi].replace(hi).is_some() {
            return Err(FinCategoryError::DuplicateComposite { f: f.clone(), g: g.clone() });
        }
    }
    let name = |i: usize| spec.morphisms[i].name.clone();
    for f in 0..n {
        for g in (0..n).filter(|&g| target[f] == source[g]) {
            if compose[f * n + g].is_none() {
                return Err(FinCategoryError::MissingComposite { f: name(f), g: name(g) });
            }
        }
    }
    for f in 0..n {
        let left = compose[identity[source[f]] * n + f];
        let right = compose[f * n + identity[target[f]]];
        if left != Some(f) || right != Some(f) {
            return Err(FinCategoryError::IdentityLaw(name(f)));
        }
    }
    let c = |f: usize, g: usize| compose[f * n + g].expect("total on composable pairs");
    for f in 0..n {
        for g in (0..n).filter(|&g| target[f] == source[g]) {
            for h in (0..n).filter(|&h| target[g] == source[h]) {
                if c(c(f, g), h) != c(f, c(g, h)) {
                    return Err(FinCategoryError::Associativity { f: name(f), g: name(g), h: name(h) });
                }
            }
        }
    }
    let named = |names: Vec<&String>| -> Vec<Named> {
        names.into_iter().enumerate().map(|(index, s)| Named { index, name: s.as_str().into() }).collect()
    };
    Ok(FinCategory {
        objects: named(spec.objects.iter().collect()),
        morphisms: named(spec.morphisms.iter().map(|m| &m.name).collect()),
        source,
        target,
        identity,
        compose,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(dom: &FinSet, cod: &FinSet, images: &[usize]) -> FinFunction {
        FinFunction::new(dom.clone(), cod.clone(), images.to_vec()).unwrap()
    }

    #[test]
    fn duplicate_elements_rejected() {
        assert_eq!(FinSet::new(["a", "a"]), Err(FinSetError::Duplicate("a".into())));
    }

    #[test]
    fn pullback_over_a_point_is_the_product() {
        let (x, y, z) = (FinSet::range(2), FinSet::range(3), FinSet::point());
        let cone = pullback(&f(&x, &z, &[0, 0]), &f(&y, &z, &[0, 0, 0])).unwrap();
        assert_eq!(cone.apex.len(), 6);
        assert!(check_pullback_universal(&cone, 3));
    }

    #[test]
    fn pullback_along_identity() {
        let (y, z) = (FinSet::range(3), FinSet::range(2));
        let v = f(&y, &z, &[1, 0, 1]);
        let cone = pullback(&FinFunction::identity(&z), &v).unwrap();
        assert!(cone.pi2.is_bijection());
    }

    #[test]
    fn disjoint_images_give_empty_apex() {
        let (x, y, z) = (FinSet::range(2), FinSet::range(2), FinSet::range(2));
        let cone = pullback(&f(&x, &z, &[0, 0]), &f(&y, &z, &[1, 1])).unwrap();
        assert!(cone.apex.is_empty());
        assert!(check_pullback_universal(&cone, 3));
    }

    #[test]
    fn duplicated_apex_point_breaks_uniqueness() {
        let (x, z) = (FinSet::range(1), FinSet::point());
        let u = f(&x, &z, &[0]);
        let apex = FinSet::new(["p", "q"]).unwrap();
        let cone = PullbackCone { pi1: f(&apex, &x, &[0, 0]), pi2: f(&apex, &x, &[0, 0]), apex, u: u.clone(), v: u };
        assert!(!check_pullback_universal(&cone, 1));
    }

    #[test]
    fn codomain_mismatch() {
        let (x, z) = (FinSet::range(1), FinSet::range(2));
        assert!(pullback(&f(&x, &z, &[0]), &f(&x, &FinSet::range(1), &[0])).is_err());
    }

    #[test]
    fn sizes_of_sum_and_product() {
        let (x, y) = (FinSet::range(2), FinSet::named("y", 3));
        assert_eq!(disjoint_union(&x, &y).set.len(), 5);
        assert_eq!(cartesian_product(&x, &y).set.len(), 6);
        assert!(cartesian_product(&FinSet::empty(), &y).set.is_empty());
        assert!(disjoint_union(&FinSet::empty(), &y).inr.is_bijection());
    }

    #[test]
    fn associator_bijections_respect_elements() {
        let (x, y, z) = (FinSet::named("x", 2), FinSet::named("y", 1), FinSet::named("z", 2));
        let a = coproduct_associator(&x, &y, &z);
        assert!(a.is_bijection());
        assert_eq!(a.apply("(0,(1,y0))"), Some("(1,(0,y0))"));
        let p = product_associator(&x, &y, &z);
        assert_eq!(p.apply("((x1,y0),z1)"), Some("(x1,(y0,z1))"));
    }

    #[test]
    fn function_enumeration_counts() {
        assert_eq!(FinFunction::all(&FinSet::range(3), &FinSet::range(2)).len(), 8);
        assert_eq!(FinFunction::all(&FinSet::empty(), &FinSet::empty()).len(), 1);
        assert!(FinFunction::all(&FinSet::range(1), &FinSet::empty()).is_empty());
    }

    #[test]
    fn linear_order_and_trivial_categories_validate() {
        let c = FinCategory::linear_order(3);
        assert_eq!(c.morphisms().len(), 6);
        assert_eq!(FinCategory::discrete(1).morphisms().len(), 1);
        FinCategory::cyclic_group(3);
        FinCategory::iso_and_arrow();
    }

    #[test]
    fn misassigned_composite_rejected() {
        let mut spec = FinCategory::linear_order(3).to_spec();
        // Redirect `0<1 ; 1<2` to `id_0`: wrong endpoints.
        let slot = spec.compose.iter_mut().find(|e| e[0] == "0<1" && e[1] == "1<2").unwrap();
        slot[2] = "id_0".into();
        assert!(matches!(validate_fin_category(&spec), Err(FinCategoryError::BadComposite { .. })));
    }

    #[test]
    fn associativity_violation_reports_triple() {
        // One object, morphisms {e, a, b}; a;a = b breaks associativity with a;b = a.
        let m = |n: &str| MorphismSpec { name: n.into(), source: "*".into(), target: "*".into() };
        let t = |f: &str, g: &str, h: &str| [f.to_string(), g.to_string(), h.to_string()];
        let mut compose = vec![];
        for x in ["e", "a", "b"] {
            compose.push(t("e", x, x));
            if x != "e" {
                compose.push(t(x, "e", x));
            }
        }
        compose.extend([t("a", "a", "b"), t("a", "b", "a"), t("b", "a", "b"), t("b", "b", "b")]);
        let spec = FinCategorySpec {
            objects: vec!["*".into()],
            morphisms: vec![m("e"), m("a"), m("b")],
            identities: [("*".to_string(), "e".to_string())].into_iter().collect(),
            compose,
        };
        assert!(matches!(validate_fin_category(&spec), Err(FinCategoryError::Associativity { .. })));
    }
}
