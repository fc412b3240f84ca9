//! Combinatorial cobordism double categories `C(0)` and `C(1)`.
//!
//! Oriented compact 1-manifolds are classified by their intervals and
//! circles, and oriented compact surfaces by genus and boundary circles, so
//! a cobordism `Y: X ⇒ X′` is stored as that classifying data over the
//! boundary `(−X) ⊔ X′`. Boundary indices run over `X` first (positions
//! `0..|X|`, orientation reversed) and then over `X′`.
//!
//! `D0` has the orientation-preserving bijections of closed manifolds;
//! 2-cells are pairs `(f₁, f₂)` together with the isomorphism of cobordism
//! data they induce, which exists exactly when transporting the source
//! along `f₁ ⊔ f₂` yields the target.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::double::{stable_hash, Cell, DoubleCategory, DoubleFunctor, Dual, Product};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobordError {
    #[error("middle objects differ: {left} vs {right}")]
    MiddleMismatch { left: String, right: String },
    #[error("orientation clash on glued circle {circle}")]
    OrientationClash { circle: usize },
    #[error("boundary point {0} is not matched exactly once")]
    NotPerfectMatching(usize),
    #[error("matched points {0} and {1} do not have opposite signs")]
    SignCondition(usize, usize),
    #[error("boundary circle {0} is not attached exactly once")]
    Attachment(usize),
    #[error("genus would be {0}")]
    Genus(String),
    #[error("not an orientation-preserving bijection: {0}")]
    NotBijection(String),
    #[error("cannot parse orientation `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A closed oriented 0- or 1-manifold: one sign per point or per circle.
/// Serialized as a sign string such as `"+-"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Oriented(Vec<Sign>);

impl TryFrom<String> for Oriented {
    type Error = CobordError;
    fn try_from(s: String) -> Result<Self, CobordError> {
        s.parse()
    }
}

impl From<Oriented> for String {
    fn from(x: Oriented) -> String {
        x.to_string()
    }
}

pub type Closed0Manifold = Oriented;
pub type Closed1Manifold = Oriented;

impl fmt::Debug for Oriented {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for Oriented {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for Oriented {
    type Err = CobordError;

    fn from_str(s: &str) -> Result<Self, CobordError> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(CobordError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Oriented)
    }
}

impl Oriented {
    pub fn new(signs: Vec<Sign>) -> Self {
        Oriented(signs)
    }

    pub fn empty() -> Self {
        Oriented(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// `−X`.
    pub fn reversed(&self) -> Oriented {
        Oriented(self.0.iter().map(|s| s.flip()).collect())
    }

    /// `X ⊔ Y`, with the points of `Y` after those of `X`.
    pub fn union(&self, other: &Oriented) -> Oriented {
        Oriented(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Number of `+` minus number of `−`.
    pub fn charge(&self) -> i64 {
        self.0.iter().map(|s| if *s == Sign::Plus { 1 } else { -1 }).sum()
    }

    /// Every orientation sequence of length at most `bound`, shortest first.
    pub fn all_up_to(bound: usize) -> Vec<Oriented> {
        let mut out = vec![Oriented::empty()];
        let mut layer = vec![Oriented::empty()];
        for _ in 0..bound {
            layer = layer.iter().flat_map(|x| [Sign::Plus, Sign::Minus].map(|s| x.union(&Oriented(vec![s])))).collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

/// The signed boundary `(−X) ⊔ X′`.
pub fn signed_boundary(source: &Oriented, target: &Oriented) -> Oriented {
    source.reversed().union(target)
}

/// An orientation-preserving bijection `X → Z`: point `i` goes to `map[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedBijection {
    source: Oriented,
    target: Oriented,
    map: Vec<usize>,
}

impl fmt::Debug for OrientedBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{:?}{:?}", self.source, self.target, self.map)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |slot| {
                let mut q = p.clone();
                q.insert(slot, n - 1);
                q
            })
        })
        .collect()
}

impl OrientedBijection {
    pub fn new(source: Oriented, target: Oriented, map: Vec<usize>) -> Result<Self, CobordError> {
        let n = source.len();
        let mut seen = vec![false; n];
        if target.len() != n || map.len() != n {
            return Err(CobordError::NotBijection(format!("{source} → {target}")));
        }
        for (i, &j) in map.iter().enumerate() {
            if j >= n || seen[j] || source.0[i] != target.0[j] {
                return Err(CobordError::NotBijection(format!("{source} → {target} at {i}")));
            }
            seen[j] = true;
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(x: &Oriented) -> Self {
        Self { source: x.clone(), target: x.clone(), map: (0..x.len()).collect() }
    }

    pub fn source(&self) -> &Oriented {
        &self.source
    }

    pub fn target(&self) -> &Oriented {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn then(&self, g: &OrientedBijection) -> Option<OrientedBijection> {
        (self.target == g.source).then(|| OrientedBijection {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&j| g.map[j]).collect(),
        })
    }

    pub fn union(&self, other: &OrientedBijection) -> OrientedBijection {
        let shift = self.target.len();
        OrientedBijection {
            source: self.source.union(&other.source),
            target: self.target.union(&other.target),
            map: self.map.iter().copied().chain(other.map.iter().map(|j| j + shift)).collect(),
        }
    }

    /// The same bijection between the reversed manifolds.
    pub fn reversed(&self) -> OrientedBijection {
        OrientedBijection { source: self.source.reversed(), target: self.target.reversed(), map: self.map.clone() }
    }

    /// All orientation-preserving bijections from `x` onto members of
    /// `universe`.
    pub fn all_from(x: &Oriented, universe: &[Oriented]) -> Vec<OrientedBijection> {
        let perms = permutations(x.len());
        universe
            .iter()
            .filter(|z| z.len() == x.len() && z.charge() == x.charge())
            .flat_map(|z| {
                perms
                    .iter()
                    .filter(|p| p.iter().enumerate().all(|(i, &j)| x.0[i] == z.0[j]))
                    .map(|p| OrientedBijection { source: x.clone(), target: z.clone(), map: p.clone() })
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// Parameters for the deterministic cobordism samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerParams {
    /// Largest number of closed components added to a sample (loops for
    /// `d = 0`, closed surfaces for `d = 1`).
    pub max_closed: usize,
    /// Largest genus of a sampled surface component.
    pub max_genus: u32,
}

impl Default for SamplerParams {
    fn default() -> Self {
        Self { max_closed: 1, max_genus: 2 }
    }
}

/// Behaviour shared by the two combinatorial cobordism models.
pub trait Cobordism: Cell + Sized {
    fn source(&self) -> &Oriented;
    fn target(&self) -> &Oriented;
    fn identity(x: &Oriented) -> Self;
    /// `self` then `next`, glued along the shared middle object.
    fn compose(&self, next: &Self) -> Result<Self, CobordError>;
    /// Renames boundary indices through `phi` (old index → new index) onto
    /// the boundary of `source ⇒ target`.
    fn reindex(&self, source: Oriented, target: Oriented, phi: &[usize]) -> Self;
    /// Places the data of `other` beside that of `self`.
    fn juxtapose(&self, other: &Self, source: Oriented, target: Oriented, phi: &[usize], psi: &[usize]) -> Self;
    /// A random cobordism out of `source` with target drawn from `universe`.
    fn sample(rng: &mut ChaCha8Rng, source: &Oriented, universe: &[Oriented], params: &SamplerParams) -> Option<Self>;

    /// `∂Y` as a signed manifold.
    fn boundary(&self) -> Oriented {
        signed_boundary(self.source(), self.target())
    }

    /// The cobordism `Y` transported along `f₁ ⊔ f₂`.
    fn transport(&self, f1: &OrientedBijection, f2: &OrientedBijection) -> Option<Self> {
        if f1.source() != self.source() || f2.source() != self.target() {
            return None;
        }
        let a = self.source().len();
        let phi: Vec<usize> = f1.map().iter().copied().chain(f2.map().iter().map(|j| a + j)).collect();
        Some(self.reindex(f1.target().clone(), f2.target().clone(), &phi))
    }

    /// `Y` read backwards as a cobordism `−X′ ⇒ −X`; its boundary
    /// `X′ ⊔ (−X)` is that of `Y` reordered.
    fn reverse(&self) -> Self {
        let (a, b) = (self.source().len(), self.target().len());
        let phi: Vec<usize> = (0..a).map(|i| b + i).chain(0..b).collect();
        self.reindex(self.target().reversed(), self.source().reversed(), &phi)
    }

    /// `Y ⊔ Y′: X ⊔ Z ⇒ X′ ⊔ Z′`.
    fn union(&self, other: &Self) -> Self {
        let (a, b) = (self.source().len(), self.target().len());
        let (c, e) = (other.source().len(), other.target().len());
        let phi: Vec<usize> = (0..a).chain((0..b).map(|k| a + c + k)).collect();
        let psi: Vec<usize> = (0..c).map(|i| a + i).chain((0..e).map(|k| a + c + b + k)).collect();
        other.juxtapose(self, self.source().union(other.source()), self.target().union(other.target()), &psi, &phi)
    }
}

/// A 1-cell of `C(0)`: a perfect matching of `(−X) ⊔ X′` whose pairs join
/// opposite signs (the intervals), plus a number of circles.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cobordism1 {
    source: Oriented,
    target: Oriented,
    partner: Vec<usize>,
    loops: usize,
}

impl fmt::Debug for Cobordism1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.partner.len())
            .filter(|&i| i < self.partner[i])
            .map(|i| format!("{i}-{}", self.partner[i]))
            .collect();
        write!(f, "{:?}⇒{:?}{{{}}}", self.source, self.target, pairs.join(","))?;
        if self.loops > 0 {
            write!(f, "+{}○", self.loops)?;
        }
        Ok(())
    }
}

impl Cobordism1 {
    pub fn new(source: Oriented, target: Oriented, partner: Vec<usize>, loops: usize) -> Result<Self, CobordError> {
        let boundary = signed_boundary(&source, &target);
        let n = boundary.len();
        if partner.len() != n {
            return Err(CobordError::NotPerfectMatching(partner.len().min(n)));
        }
        for (i, &j) in partner.iter().enumerate() {
            if j >= n || j == i || partner[j] != i {
                return Err(CobordError::NotPerfectMatching(i));
            }
            if boundary.0[i] == boundary.0[j] {
                return Err(CobordError::SignCondition(i, j));
            }
        }
        Ok(Self { source, target, partner, loops })
    }

    /// Builds a cobordism from a list of matched boundary pairs.
    pub fn from_pairs(
        source: Oriented,
        target: Oriented,
        pairs: &[(usize, usize)],
        loops: usize,
    ) -> Result<Self, CobordError> {
        let n = source.len() + target.len();
        let mut partner = vec![usize::MAX; n];
        for &(i, j) in pairs {
            for (x, y) in [(i, j), (j, i)] {
                if x >= n || partner[x] != usize::MAX {
                    return Err(CobordError::NotPerfectMatching(x));
                }
                partner[x] = y;
            }
        }
        if let Some(i) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(CobordError::NotPerfectMatching(i));
        }
        Self::new(source, target, partner, loops)
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    /// Matched pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len()).filter(|&i| i < self.partner[i]).map(|i| (i, self.partner[i])).collect()
    }

    /// `∅ ⇒ {+, −}`: one interval.
    pub fn coevaluation() -> Self {
        Self::from_pairs(Oriented::empty(), "+-".parse().expect("signs"), &[(0, 1)], 0).expect("valid")
    }

    /// `{+, −} ⇒ ∅`: one interval.
    pub fn evaluation() -> Self {
        Self::from_pairs("+-".parse().expect("signs"), Oriented::empty(), &[(0, 1)], 0).expect("valid")
    }
}

impl Cobordism for Cobordism1 {
    fn source(&self) -> &Oriented {
        &self.source
    }
    fn target(&self) -> &Oriented {
        &self.target
    }

    fn identity(x: &Oriented) -> Self {
        let a = x.len();
        let partner = (0..a).map(|i| a + i).chain(0..a).collect();
        Self { source: x.clone(), target: x.clone(), partner, loops: 0 }
    }

    fn compose(&self, next: &Self) -> Result<Self, CobordError> {
        if self.target != next.source {
            return Err(CobordError::MiddleMismatch { left: self.target.to_string(), right: next.source.to_string() });
        }
        let (a, b, e) = (self.source.len(), self.target.len(), next.target.len());
        // Outer indices of the composite: `self`'s X at 0..a, `next`'s X″ at a..a+e.
        let mut partner = vec![usize::MAX; a + e];
        let mut visited = vec![false; b];
        // Follows a path entering `self` at index `i`, returns the outer end.
        let mut follow = |mut in_self: bool, mut i: usize| -> usize {
            loop {
                if in_self {
                    let j = self.partner[i];
                    if j < a {
                        return j;
                    }
                    visited[j - a] = true;
                    in_self = false;
                    i = j - a;
                } else {
                    let j = next.partner[i];
                    if j >= b {
                        return a + (j - b);
                    }
                    visited[j] = true;
                    in_self = true;
                    i = a + j;
                }
            }
        };
        for start in 0..a + e {
            let end = if start < a { follow(true, start) } else { follow(false, b + (start - a)) };
            partner[start] = end;
        }
        // Unvisited middle points lie on closed cycles.
        let mut cycles = 0;
        let mut on_cycle = visited;
        for k in 0..b {
            if on_cycle[k] {
                continue;
            }
            cycles += 1;
            let mut cur = k;
            loop {
                on_cycle[cur] = true;
                let via_next = next.partner[cur];
                on_cycle[via_next] = true;
                let back = self.partner[a + via_next] - a;
                if on_cycle[back] {
                    break;
                }
                cur = back;
            }
        }
        Ok(Self {
            source: self.source.clone(),
            target: next.target.clone(),
            partner,
            loops: self.loops + next.loops + cycles,
        })
    }

    fn reindex(&self, source: Oriented, target: Oriented, phi: &[usize]) -> Self {
        let mut partner = vec![0; self.partner.len()];
        for (i, &j) in self.partner.iter().enumerate() {
            partner[phi[i]] = phi[j];
        }
        Self { source, target, partner, loops: self.loops }
    }

    fn juxtapose(&self, other: &Self, source: Oriented, target: Oriented, phi: &[usize], psi: &[usize]) -> Self {
        let mut partner = vec![0; self.partner.len() + other.partner.len()];
        for (i, &j) in self.partner.iter().enumerate() {
            partner[phi[i]] = phi[j];
        }
        for (i, &j) in other.partner.iter().enumerate() {
            partner[psi[i]] = psi[j];
        }
        Self { source, target, partner, loops: self.loops + other.loops }
    }

    fn sample(rng: &mut ChaCha8Rng, source: &Oriented, universe: &[Oriented], params: &SamplerParams) -> Option<Self> {
        let targets: Vec<&Oriented> = universe.iter().filter(|y| y.charge() == source.charge()).collect();
        let target = (*targets.choose(rng)?).clone();
        let boundary = signed_boundary(source, &target);
        let (mut plus, minus): (Vec<usize>, Vec<usize>) =
            (0..boundary.len()).partition(|&i| boundary.0[i] == Sign::Plus);
        plus.shuffle(rng);
        let pairs: Vec<(usize, usize)> = plus.into_iter().zip(minus).collect();
        let loops = rng.gen_range(0..=params.max_closed);
        Self::from_pairs(source.clone(), target, &pairs, loops).ok()
    }
}

/// A connected surface component: genus and the boundary circles it is
/// attached to (sorted; empty for a closed component).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u32,
    pub attachments: Vec<usize>,
}

impl Surface {
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - self.attachments.len() as i64
    }
}

/// A 1-cell of `C(1)`: surface components covering `(−X) ⊔ X′`, kept in a
/// canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cobordism2 {
    source: Oriented,
    target: Oriented,
    components: Vec<Surface>,
}

impl fmt::Debug for Cobordism2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| format!("g{}{:?}", c.genus, c.attachments)).collect();
        write!(f, "{:?}⇒{:?}{{{}}}", self.source, self.target, parts.join(","))
    }
}

fn canonical(mut components: Vec<Surface>) -> Vec<Surface> {
    for c in &mut components {
        c.attachments.sort_unstable();
    }
    components.sort_by(|x, y| (&x.attachments, x.genus).cmp(&(&y.attachments, y.genus)));
    components
}

impl Cobordism2 {
    pub fn new(source: Oriented, target: Oriented, components: Vec<Surface>) -> Result<Self, CobordError> {
        let n = source.len() + target.len();
        let mut seen = vec![false; n];
        for c in &components {
            for &i in &c.attachments {
                if i >= n || seen[i] {
                    return Err(CobordError::Attachment(i.min(n)));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(CobordError::Attachment(i));
        }
        Ok(Self { source, target, components: canonical(components) })
    }

    pub fn components(&self) -> &[Surface] {
        &self.components
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(Surface::euler_characteristic).sum()
    }

    /// A disk `∅ ⇒ (+)`.
    pub fn cup() -> Self {
        Self::new(Oriented::empty(), "+".parse().expect("signs"), vec![Surface { genus: 0, attachments: vec![0] }])
            .expect("valid")
    }

    /// A disk `(+) ⇒ ∅`.
    pub fn cap() -> Self {
        Self::new("+".parse().expect("signs"), Oriented::empty(), vec![Surface { genus: 0, attachments: vec![0] }])
            .expect("valid")
    }

    /// Genus-zero surface `(+) ⇒ (++)`.
    pub fn copants() -> Self {
        Self::new(
            "+".parse().expect("signs"),
            "++".parse().expect("signs"),
            vec![Surface { genus: 0, attachments: vec![0, 1, 2] }],
        )
        .expect("valid")
    }

    /// Genus-zero surface `(++) ⇒ (+)`.
    pub fn pants() -> Self {
        Self::new(
            "++".parse().expect("signs"),
            "+".parse().expect("signs"),
            vec![Surface { genus: 0, attachments: vec![0, 1, 2] }],
        )
        .expect("valid")
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.0[x] = root;
        root
    }
    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.0[rx.max(ry)] = rx.min(ry);
        }
    }
}

impl Cobordism for Cobordism2 {
    fn source(&self) -> &Oriented {
        &self.source
    }
    fn target(&self) -> &Oriented {
        &self.target
    }

    fn identity(x: &Oriented) -> Self {
        let a = x.len();
        let components = (0..a).map(|i| Surface { genus: 0, attachments: vec![i, a + i] }).collect();
        Self { source: x.clone(), target: x.clone(), components: canonical(components) }
    }

    fn compose(&self, next: &Self) -> Result<Self, CobordError> {
        if self.target.len() != next.source.len() {
            return Err(CobordError::MiddleMismatch { left: self.target.to_string(), right: next.source.to_string() });
        }
        if let Some(circle) = (0..self.target.len()).find(|&k| self.target.0[k] != next.source.0[k]) {
            return Err(CobordError::OrientationClash { circle });
        }
        let (a, b) = (self.source.len(), self.target.len());
        let n = self.components.len();
        let owner = |comps: &[Surface], len: usize| {
            let mut o = vec![0; len];
            for (ci, c) in comps.iter().enumerate() {
                for &i in &c.attachments {
                    o[i] = ci;
                }
            }
            o
        };
        let owner_self = owner(&self.components, a + b);
        let owner_next = owner(&next.components, b + next.target.len());
        let mut uf = UnionFind::new(n + next.components.len());
        for k in 0..b {
            uf.union(owner_self[a + k], n + owner_next[k]);
        }
        // root → (χ, outer attachments)
        let mut merged: BTreeMap<usize, (i64, Vec<usize>)> = BTreeMap::new();
        for (ci, c) in self.components.iter().enumerate() {
            let e = merged.entry(uf.find(ci)).or_default();
            e.0 += c.euler_characteristic();
            e.1.extend(c.attachments.iter().filter(|&&i| i < a));
        }
        for (ci, c) in next.components.iter().enumerate() {
            let e = merged.entry(uf.find(n + ci)).or_default();
            e.0 += c.euler_characteristic();
            e.1.extend(c.attachments.iter().filter(|&&j| j >= b).map(|j| a + (j - b)));
        }
        let mut components = Vec::with_capacity(merged.len());
        for (chi, attachments) in merged.into_values() {
            let twice = 2 - chi - attachments.len() as i64;
            if twice < 0 || twice % 2 != 0 {
                return Err(CobordError::Genus(format!("{}/2", twice)));
            }
            components.push(Surface { genus: (twice / 2) as u32, attachments });
        }
        Ok(Self { source: self.source.clone(), target: next.target.clone(), components: canonical(components) })
    }

    fn reindex(&self, source: Oriented, target: Oriented, phi: &[usize]) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| Surface { genus: c.genus, attachments: c.attachments.iter().map(|&i| phi[i]).collect() })
            .collect();
        Self { source, target, components: canonical(components) }
    }

    fn juxtapose(&self, other: &Self, source: Oriented, target: Oriented, phi: &[usize], psi: &[usize]) -> Self {
        let moved = |c: &Surface, m: &[usize]| Surface {
            genus: c.genus,
            attachments: c.attachments.iter().map(|&i| m[i]).collect(),
        };
        let components = self
            .components
            .iter()
            .map(|c| moved(c, phi))
            .chain(other.components.iter().map(|c| moved(c, psi)))
            .collect();
        Self { source, target, components: canonical(components) }
    }

    fn sample(rng: &mut ChaCha8Rng, source: &Oriented, universe: &[Oriented], params: &SamplerParams) -> Option<Self> {
        let target = universe.choose(rng)?.clone();
        let n = source.len() + target.len();
        let mut components: Vec<Surface> = Vec::new();
        if n > 0 {
            let k = rng.gen_range(1..=n.min(3));
            let mut groups = vec![Vec::new(); k];
            for i in 0..n {
                let slot = if i < k { i } else { rng.gen_range(0..k) };
                groups[slot].push(i);
            }
            components.extend(
                groups
                    .into_iter()
                    .map(|attachments| Surface { genus: rng.gen_range(0..=params.max_genus), attachments }),
            );
        }
        for _ in 0..rng.gen_range(0..=params.max_closed) {
            components.push(Surface { genus: rng.gen_range(0..=params.max_genus), attachments: Vec::new() });
        }
        Self::new(source.clone(), target, components).ok()
    }
}

/// A 2-cell `Y ⇒ Y″` framed by `f₁: X → X″` and `f₂: X′ → X‴`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CobordismCell<C> {
    pub source: C,
    pub target: C,
    pub f1: OrientedBijection,
    pub f2: OrientedBijection,
}

impl<C: fmt::Debug> fmt::Debug for CobordismCell<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} ⇒ {:?} | {:?}, {:?})", self.source, self.target, self.f1.map(), self.f2.map())
    }
}

impl<C: Cobordism> CobordismCell<C> {
    /// The commuting condition: `f₁ ⊔ f₂` carries the source data onto the
    /// target data.
    pub fn is_valid(&self) -> bool {
        self.f1.target() == self.target.source()
            && self.f2.target() == self.target.target()
            && self.source.transport(&self.f1, &self.f2).as_ref() == Some(&self.target)
    }

    pub fn transported(source: &C, f1: &OrientedBijection, f2: &OrientedBijection) -> Option<Self> {
        let target = source.transport(f1, f2)?;
        Some(Self { source: source.clone(), target, f1: f1.clone(), f2: f2.clone() })
    }
}

/// `C(d)` on the closed manifolds with at most `bound` components. Every
/// enumeration is a deterministic sample keyed by `seed` and the cell it
/// starts from.
#[derive(Debug, Clone)]
pub struct CobordismDoubleCategory<C> {
    pub objects: Vec<Oriented>,
    pub per_object: usize,
    pub squares_per_cell: usize,
    pub params: SamplerParams,
    pub seed: u64,
    _model: PhantomData<fn() -> C>,
}

pub type C0 = CobordismDoubleCategory<Cobordism1>;
pub type C1 = CobordismDoubleCategory<Cobordism2>;

impl<C: Cobordism> CobordismDoubleCategory<C> {
    pub fn new(bound: usize, params: SamplerParams, seed: u64) -> Self {
        Self {
            objects: Oriented::all_up_to(bound),
            per_object: 3,
            squares_per_cell: 3,
            params,
            seed,
            _model: PhantomData,
        }
    }

    fn rng(&self, salt: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stable_hash(salt))
    }
}

/// `C(0)` with objects of at most `bound` points.
pub fn cobordism_double_category_0(bound: usize, seed: u64) -> C0 {
    CobordismDoubleCategory::new(bound, SamplerParams { max_closed: 2, max_genus: 0 }, seed)
}

/// `C(1)` with objects of at most `bound` circles and sampled genus at most
/// `max_genus`.
pub fn cobordism_double_category_1(bound: usize, max_genus: u32, seed: u64) -> C1 {
    CobordismDoubleCategory::new(bound, SamplerParams { max_closed: 1, max_genus }, seed)
}

impl<C: Cobordism> DoubleCategory for CobordismDoubleCategory<C> {
    type Obj = Oriented;
    type Mor = OrientedBijection;
    type Cell1 = C;
    type Cell2 = CobordismCell<C>;

    fn src0(&self, f: &OrientedBijection) -> Oriented {
        f.source().clone()
    }
    fn tgt0(&self, f: &OrientedBijection) -> Oriented {
        f.target().clone()
    }
    fn id0(&self, a: &Oriented) -> OrientedBijection {
        OrientedBijection::identity(a)
    }
    fn compose0(&self, f: &OrientedBijection, g: &OrientedBijection) -> Option<OrientedBijection> {
        f.then(g)
    }
    fn d(&self, x: &C) -> Oriented {
        x.source().clone()
    }
    fn r(&self, x: &C) -> Oriented {
        x.target().clone()
    }
    fn src2(&self, a: &CobordismCell<C>) -> C {
        a.source.clone()
    }
    fn tgt2(&self, a: &CobordismCell<C>) -> C {
        a.target.clone()
    }
    fn d2(&self, a: &CobordismCell<C>) -> OrientedBijection {
        a.f1.clone()
    }
    fn r2(&self, a: &CobordismCell<C>) -> OrientedBijection {
        a.f2.clone()
    }
    fn id2(&self, x: &C) -> CobordismCell<C> {
        CobordismCell {
            source: x.clone(),
            target: x.clone(),
            f1: OrientedBijection::identity(x.source()),
            f2: OrientedBijection::identity(x.target()),
        }
    }
    fn compose2(&self, a: &CobordismCell<C>, b: &CobordismCell<C>) -> Option<CobordismCell<C>> {
        (a.target == b.source).then_some(())?;
        Some(CobordismCell {
            source: a.source.clone(),
            target: b.target.clone(),
            f1: a.f1.then(&b.f1)?,
            f2: a.f2.then(&b.f2)?,
        })
    }
    fn star(&self, x: &C, y: &C) -> Option<C> {
        x.compose(y).ok()
    }
    fn star2(&self, a: &CobordismCell<C>, b: &CobordismCell<C>) -> Option<CobordismCell<C>> {
        if a.f2 != b.f1 {
            return None;
        }
        Some(CobordismCell {
            source: a.source.compose(&b.source).ok()?,
            target: a.target.compose(&b.target).ok()?,
            f1: a.f1.clone(),
            f2: b.f2.clone(),
        })
    }
    fn unit(&self, a: &Oriented) -> C {
        C::identity(a)
    }
    fn unit2(&self, f: &OrientedBijection) -> CobordismCell<C> {
        CobordismCell { source: C::identity(f.source()), target: C::identity(f.target()), f1: f.clone(), f2: f.clone() }
    }
    fn is_valid2(&self, a: &CobordismCell<C>) -> bool {
        a.is_valid()
    }

    fn objects(&self) -> Vec<Oriented> {
        self.objects.clone()
    }
    fn morphisms_from(&self, a: &Oriented) -> Vec<OrientedBijection> {
        OrientedBijection::all_from(a, &self.objects)
    }
    fn cells_from(&self, a: &Oriented) -> Vec<C> {
        let mut rng = self.rng(&format!("cells {a:?}"));
        let mut out = vec![C::identity(a)];
        for _ in 0..self.per_object {
            if let Some(c) = C::sample(&mut rng, a, &self.objects, &self.params) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
    fn squares_from(&self, x: &C) -> Vec<CobordismCell<C>> {
        let mut rng = self.rng(&format!("squares {x:?}"));
        let mut out = vec![self.id2(x)];
        let (f1s, f2s) = (self.morphisms_from(x.source()), self.morphisms_from(x.target()));
        for _ in 0..self.squares_per_cell {
            let (Some(f1), Some(f2)) = (f1s.choose(&mut rng), f2s.choose(&mut rng)) else { break };
            out.extend(CobordismCell::transported(x, f1, f2));
        }
        out
    }
    fn squares_with_d(&self, u: &OrientedBijection) -> Vec<CobordismCell<C>> {
        let mut rng = self.rng(&format!("squares d {u:?}"));
        let mut out = vec![self.unit2(u)];
        for x in self.cells_from(u.source()) {
            let f2s = self.morphisms_from(x.target());
            if let Some(f2) = f2s.choose(&mut rng) {
                out.extend(CobordismCell::transported(&x, u, f2));
            }
        }
        out
    }
    fn squares_with_r(&self, v: &OrientedBijection) -> Vec<CobordismCell<C>> {
        let mut rng = self.rng(&format!("squares r {v:?}"));
        let mut out = vec![self.unit2(v)];
        for x in self.cells_into(v.source()) {
            let f1s = self.morphisms_from(x.source());
            if let Some(f1) = f1s.choose(&mut rng) {
                out.extend(CobordismCell::transported(&x, f1, v));
            }
        }
        out
    }
}

/// Orientation reversal `C(d) → C(d)°`: objects and cobordisms are
/// reversed, and the frame of a 2-cell is swapped.
#[derive(Debug, Clone)]
pub struct ReverseFunctor<C> {
    pub source: CobordismDoubleCategory<C>,
    pub target: Dual<CobordismDoubleCategory<C>>,
}

impl<C: Cobordism> ReverseFunctor<C> {
    pub fn new(dc: CobordismDoubleCategory<C>) -> Self {
        Self { target: Dual(dc.clone()), source: dc }
    }
}

pub fn reverse_cell<C: Cobordism>(a: &CobordismCell<C>) -> CobordismCell<C> {
    CobordismCell { source: a.source.reverse(), target: a.target.reverse(), f1: a.f2.reversed(), f2: a.f1.reversed() }
}

impl<C: Cobordism> DoubleFunctor for ReverseFunctor<C> {
    type Source = CobordismDoubleCategory<C>;
    type Target = Dual<CobordismDoubleCategory<C>>;

    fn source(&self) -> &Self::Source {
        &self.source
    }
    fn target(&self) -> &Self::Target {
        &self.target
    }
    fn map_obj(&self, a: &Oriented) -> Option<Oriented> {
        Some(a.reversed())
    }
    fn map_mor(&self, f: &OrientedBijection) -> Option<OrientedBijection> {
        Some(f.reversed())
    }
    fn map_cell(&self, x: &C) -> Option<C> {
        Some(x.reverse())
    }
    fn map_square(&self, a: &CobordismCell<C>) -> Option<CobordismCell<C>> {
        Some(reverse_cell(a))
    }
}

/// Disjoint union `C(d) × C(d) → C(d)`.
#[derive(Debug, Clone)]
pub struct UnionFunctor<C> {
    pub source: Product<CobordismDoubleCategory<C>, CobordismDoubleCategory<C>>,
    pub target: CobordismDoubleCategory<C>,
}

impl<C: Cobordism> UnionFunctor<C> {
    /// The target admits objects of twice the source bound.
    pub fn new(dc: CobordismDoubleCategory<C>) -> Self {
        let bound = dc.objects.iter().map(Oriented::len).max().unwrap_or(0);
        let mut target = dc.clone();
        target.objects = Oriented::all_up_to(2 * bound);
        Self { source: Product(dc.clone(), dc), target }
    }
}

impl<C: Cobordism> DoubleFunctor for UnionFunctor<C> {
    type Source = Product<CobordismDoubleCategory<C>, CobordismDoubleCategory<C>>;
    type Target = CobordismDoubleCategory<C>;

    fn source(&self) -> &Self::Source {
        &self.source
    }
    fn target(&self) -> &Self::Target {
        &self.target
    }
    fn map_obj(&self, a: &(Oriented, Oriented)) -> Option<Oriented> {
        Some(a.0.union(&a.1))
    }
    fn map_mor(&self, f: &(OrientedBijection, OrientedBijection)) -> Option<OrientedBijection> {
        Some(f.0.union(&f.1))
    }
    fn map_cell(&self, x: &(C, C)) -> Option<C> {
        Some(x.0.union(&x.1))
    }
    fn map_square(&self, a: &(CobordismCell<C>, CobordismCell<C>)) -> Option<CobordismCell<C>> {
        Some(CobordismCell {
            source: a.0.source.union(&a.1.source),
            target: a.0.target.union(&a.1.target),
            f1: a.0.f1.union(&a.1.f1),
            f2: a.0.f2.union(&a.1.f2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{check_double_category, check_double_functor, Budget};

    fn o(s: &str) -> Oriented {
        s.parse().unwrap()
    }

    #[test]
    fn coevaluation_then_evaluation_is_a_loop() {
        let c = Cobordism1::coevaluation().compose(&Cobordism1::evaluation()).unwrap();
        assert_eq!(c.loops(), 1);
        assert!(c.partner().is_empty());
    }

    #[test]
    fn snake_is_identity() {
        // (coev ⊔ id) then (id ⊔ ev) on one positive point, written out on
        // the three middle points `+ − +`.
        let x = o("+");
        let coev = Cobordism1::from_pairs(x.clone(), o("+-+"), &[(0, 1), (2, 3)], 0).unwrap();
        let ev = Cobordism1::from_pairs(o("+-+"), x.clone(), &[(0, 1), (2, 3)], 0).unwrap();
        assert_eq!(coev.compose(&ev).unwrap(), Cobordism1::identity(&x));
        // Closing the cup against a cap on the same two points leaves a circle.
        let closed = Cobordism1::from_pairs(o("+-+"), x.clone(), &[(1, 2), (0, 3)], 0).unwrap();
        assert_eq!(coev.compose(&closed).unwrap().loops(), 1);
    }

    #[test]
    fn pants_after_copants_is_a_torus_tube() {
        let c = Cobordism2::copants().compose(&Cobordism2::pants()).unwrap();
        assert_eq!(c.components(), &[Surface { genus: 1, attachments: vec![0, 1] }]);
        assert_eq!(c.euler_characteristic(), -2);
    }

    #[test]
    fn cup_then_cap_is_a_sphere() {
        let c = Cobordism2::cup().compose(&Cobordism2::cap()).unwrap();
        assert_eq!(c.components(), &[Surface { genus: 0, attachments: vec![] }]);
    }

    #[test]
    fn orientation_clash_is_reported() {
        let err = Cobordism2::cup().compose(&Cobordism2::identity(&o("-"))).unwrap_err();
        assert_eq!(err, CobordError::OrientationClash { circle: 0 });
        assert!(matches!(
            Cobordism1::identity(&o("+")).compose(&Cobordism1::identity(&o("-"))),
            Err(CobordError::MiddleMismatch { .. })
        ));
    }

    #[test]
    fn identity_boundary_is_the_double() {
        let x = o("+-+");
        assert_eq!(Cobordism1::identity(&x).boundary(), x.reversed().union(&x));
        assert_eq!(Cobordism2::identity(&x).boundary(), x.reversed().union(&x));
    }

    #[test]
    fn sign_condition_enforced() {
        assert_eq!(Cobordism1::from_pairs(o("+"), o("-"), &[(0, 1)], 0).unwrap_err(), CobordError::SignCondition(0, 1));
    }

    #[test]
    fn c0_passes() {
        let dc = cobordism_double_category_0(3, 7);
        let report = check_double_category(&dc, &Budget::sampled(120, 1)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn c1_passes() {
        let dc = cobordism_double_category_1(2, 2, 7);
        let report = check_double_category(&dc, &Budget::sampled(120, 1)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn reversal_and_union_are_functors() {
        let rev = ReverseFunctor::new(cobordism_double_category_0(2, 3));
        let report = check_double_functor(&rev, &Budget::sampled(80, 2)).unwrap();
        assert!(report.passed(), "{}", report.summary());
        let uni = UnionFunctor::new(cobordism_double_category_1(2, 1, 3));
        let report = check_double_functor(&uni, &Budget::sampled(80, 2)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
}
