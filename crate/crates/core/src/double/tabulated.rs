use std::collections::BTreeMap;
use std::fmt::Debug;

use super::{DoubleCategory, DoubleCategoryExt, Strictness, StructuralError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SquareEntry {
    pub source: String,
    pub target: String,
    pub d: String,
    pub r: String,
}

type Pairs = BTreeMap<(String, String), String>;

/// A finite double category given by explicit tables over named cells.
///
/// Composite tables are partial; entries are only consulted on composable
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulated {
    pub objects: Vec<String>,
    /// name ↦ (source, target)
    pub morphisms: BTreeMap<String, (String, String)>,
    /// name ↦ (d, r)
    pub cells: BTreeMap<String, (String, String)>,
    pub squares: BTreeMap<String, SquareEntry>,
    pub id0: BTreeMap<String, String>,
    pub compose0: Pairs,
    pub id2: BTreeMap<String, String>,
    pub compose2: Pairs,
    pub star: Pairs,
    pub star2: Pairs,
    pub unit: BTreeMap<String, String>,
    pub unit2: BTreeMap<String, String>,
    pub strictness: Strictness,
    pub associators: BTreeMap<(String, String, String), Witness<String>>,
    pub left_unitors: BTreeMap<String, Witness<String>>,
    pub right_unitors: BTreeMap<String, Witness<String>>,
}

fn name(x: &impl Debug) -> String {
    format!("{x:?}")
}

impl Tabulated {
    /// Tabulates a finite instance, naming every cell by its `Debug` form.
    /// Fails if a composite leaves the enumeration.
    pub fn from_instance<D: DoubleCategory + ?Sized>(dc: &D) -> Result<Self, StructuralError> {
        let objects: Vec<_> = dc.objects();
        let morphisms = dc.all_morphisms();
        let cells = dc.all_cells();
        let squares = dc.all_squares();
        let mut t = Tabulated {
            objects: objects.iter().map(name).collect(),
            morphisms: morphisms.iter().map(|f| (name(f), (name(&dc.src0(f)), name(&dc.tgt0(f))))).collect(),
            cells: cells.iter().map(|x| (name(x), (name(&dc.d(x)), name(&dc.r(x))))).collect(),
            squares: squares
                .iter()
                .map(|a| {
                    let e = SquareEntry {
                        source: name(&dc.src2(a)),
                        target: name(&dc.tgt2(a)),
                        d: name(&dc.d2(a)),
                        r: name(&dc.r2(a)),
                    };
                    (name(a), e)
                })
                .collect(),
            id0: objects.iter().map(|a| (name(a), name(&dc.id0(a)))).collect(),
            compose0: BTreeMap::new(),
            id2: cells.iter().map(|x| (name(x), name(&dc.id2(x)))).collect(),
            compose2: BTreeMap::new(),
            star: BTreeMap::new(),
            star2: BTreeMap::new(),
            unit: objects.iter().map(|a| (name(a), name(&dc.unit(a)))).collect(),
            unit2: morphisms.iter().map(|f| (name(f), name(&dc.unit2(f)))).collect(),
            strictness: dc.strictness(),
            associators: BTreeMap::new(),
            left_unitors: BTreeMap::new(),
            right_unitors: BTreeMap::new(),
        };
        for f in &morphisms {
            for g in morphisms.iter().filter(|g| dc.src0(g) == dc.tgt0(f)) {
                t.compose0.insert((name(f), name(g)), name(&dc.must_compose0(f, g)?));
            }
        }
        for a in &squares {
            for b in squares.iter().filter(|b| dc.src2(b) == dc.tgt2(a)) {
                t.compose2.insert((name(a), name(b)), name(&dc.must_compose2(a, b)?));
            }
            for b in squares.iter().filter(|b| dc.d2(b) == dc.r2(a)) {
                t.star2.insert((name(a), name(b)), name(&dc.must_star2(a, b)?));
            }
        }
        for x in &cells {
            for y in cells.iter().filter(|y| dc.d(y) == dc.r(x)) {
                t.star.insert((name(x), name(y)), name(&dc.must_star(x, y)?));
            }
        }
        if dc.strictness() == Strictness::Weak {
            let named = |w: Witness<D::Cell2>| Witness::new(name(&w.forward), name(&w.inverse));
            for x in &cells {
                let missing = |kind| StructuralError::MissingWitness { kind, cells: name(x) };
                t.left_unitors.insert(name(x), named(dc.left_unitor(x).ok_or_else(|| missing("left unitor"))?));
                t.right_unitors.insert(name(x), named(dc.right_unitor(x).ok_or_else(|| missing("right unitor"))?));
                for y in cells.iter().filter(|y| dc.d(y) == dc.r(x)) {
                    for z in cells.iter().filter(|z| dc.d(z) == dc.r(y)) {
                        let w = dc.associator(x, y, z).ok_or_else(|| StructuralError::MissingWitness {
                            kind: "associator",
                            cells: name(&(x, y, z)),
                        })?;
                        t.associators.insert((name(x), name(y), name(z)), named(w));
                    }
                }
            }
        }
        t.validate()?;
        Ok(t)
    }

    /// Verifies that every table entry refers to a declared cell.
    pub fn validate(&self) -> Result<(), StructuralError> {
        let has_obj = |n: &String| self.objects.contains(n);
        let dangling = |table: &'static str, n: &String| StructuralError::Dangling { table, name: n.clone() };
        let check = |ok: bool, table: &'static str, n: &String| if ok { Ok(()) } else { Err(dangling(table, n)) };
        for (s, t) in self.morphisms.values() {
            check(has_obj(s), "morphisms", s)?;
            check(has_obj(t), "morphisms", t)?;
        }
        for (d, r) in self.cells.values() {
            check(has_obj(d), "cells", d)?;
            check(has_obj(r), "cells", r)?;
        }
        for e in self.squares.values() {
            check(self.cells.contains_key(&e.source), "squares", &e.source)?;
            check(self.cells.contains_key(&e.target), "squares", &e.target)?;
            check(self.morphisms.contains_key(&e.d), "squares", &e.d)?;
            check(self.morphisms.contains_key(&e.r), "squares", &e.r)?;
        }
        for (a, f) in &self.id0 {
            check(has_obj(a), "id0", a)?;
            check(self.morphisms.contains_key(f), "id0", f)?;
        }
        for (a, x) in &self.unit {
            check(has_obj(a), "unit", a)?;
            check(self.cells.contains_key(x), "unit", x)?;
        }
        for (f, a) in &self.unit2 {
            check(self.morphisms.contains_key(f), "unit2", f)?;
            check(self.squares.contains_key(a), "unit2", a)?;
        }
        for (x, a) in &self.id2 {
            check(self.cells.contains_key(x), "id2", x)?;
            check(self.squares.contains_key(a), "id2", a)?;
        }
        for ((f, g), h) in &self.compose0 {
            for n in [f, g, h] {
                check(self.morphisms.contains_key(n), "compose0", n)?;
            }
        }
        for ((x, y), z) in &self.star {
            for n in [x, y, z] {
                check(self.cells.contains_key(n), "star", n)?;
            }
        }
        for table in [&self.compose2, &self.star2] {
            for ((a, b), c) in table {
                for n in [a, b, c] {
                    check(self.squares.contains_key(n), "squares", n)?;
                }
            }
        }
        for a in &self.objects {
            check(self.id0.contains_key(a), "id0", a)?;
            check(self.unit.contains_key(a), "unit", a)?;
        }
        for x in self.cells.keys() {
            check(self.id2.contains_key(x), "id2", x)?;
        }
        for f in self.morphisms.keys() {
            check(self.unit2.contains_key(f), "unit2", f)?;
        }
        Ok(())
    }

    /// The dual: `d`/`r` transposed and `∗` reversed. Applying it twice gives
    /// back an equal table.
    pub fn dual(&self) -> Tabulated {
        let swap = |m: &Pairs| m.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.clone())).collect();
        Tabulated {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            cells: self.cells.iter().map(|(k, (d, r))| (k.clone(), (r.clone(), d.clone()))).collect(),
            squares: self
                .squares
                .iter()
                .map(|(k, e)| {
                    let e = SquareEntry {
                        source: e.source.clone(),
                        target: e.target.clone(),
                        d: e.r.clone(),
                        r: e.d.clone(),
                    };
                    (k.clone(), e)
                })
                .collect(),
            id0: self.id0.clone(),
            compose0: self.compose0.clone(),
            id2: self.id2.clone(),
            compose2: self.compose2.clone(),
            star: swap(&self.star),
            star2: swap(&self.star2),
            unit: self.unit.clone(),
            unit2: self.unit2.clone(),
            strictness: self.strictness,
            associators: self
                .associators
                .iter()
                .map(|((x, y, z), w)| ((z.clone(), y.clone(), x.clone()), w.clone().flip()))
                .collect(),
            left_unitors: self.right_unitors.clone(),
            right_unitors: self.left_unitors.clone(),
        }
    }

    fn lookup(map: &BTreeMap<String, String>, key: &str) -> String {
        map.get(key).cloned().unwrap_or_default()
    }
}

impl DoubleCategory for Tabulated {
    type Obj = String;
    type Mor = String;
    type Cell1 = String;
    type Cell2 = String;

    fn src0(&self, f: &String) -> String {
        self.morphisms.get(f).map(|e| e.0.clone()).unwrap_or_default()
    }
    fn tgt0(&self, f: &String) -> String {
        self.morphisms.get(f).map(|e| e.1.clone()).unwrap_or_default()
    }
    fn id0(&self, a: &String) -> String {
        Self::lookup(&self.id0, a)
    }
    fn compose0(&self, f: &String, g: &String) -> Option<String> {
        self.compose0.get(&(f.clone(), g.clone())).cloned()
    }
    fn d(&self, x: &String) -> String {
        self.cells.get(x).map(|e| e.0.clone()).unwrap_or_default()
    }
    fn r(&self, x: &String) -> String {
        self.cells.get(x).map(|e| e.1.clone()).unwrap_or_default()
    }
    fn src2(&self, a: &String) -> String {
        self.squares.get(a).map(|e| e.source.clone()).unwrap_or_default()
    }
    fn tgt2(&self, a: &String) -> String {
        self.squares.get(a).map(|e| e.target.clone()).unwrap_or_default()
    }
    fn d2(&self, a: &String) -> String {
        self.squares.get(a).map(|e| e.d.clone()).unwrap_or_default()
    }
    fn r2(&self, a: &String) -> String {
        self.squares.get(a).map(|e| e.r.clone()).unwrap_or_default()
    }
    fn id2(&self, x: &String) -> String {
        Self::lookup(&self.id2, x)
    }
    fn compose2(&self, a: &String, b: &String) -> Option<String> {
        self.compose2.get(&(a.clone(), b.clone())).cloned()
    }
    fn star(&self, x: &String, y: &String) -> Option<String> {
        self.star.get(&(x.clone(), y.clone())).cloned()
    }
    fn star2(&self, a: &String, b: &String) -> Option<String> {
        self.star2.get(&(a.clone(), b.clone())).cloned()
    }
    fn unit(&self, a: &String) -> String {
        Self::lookup(&self.unit, a)
    }
    fn unit2(&self, f: &String) -> String {
        Self::lookup(&self.unit2, f)
    }
    fn strictness(&self) -> Strictness {
        self.strictness
    }
    fn associator(&self, x: &String, y: &String, z: &String) -> Option<Witness<String>> {
        self.associators.get(&(x.clone(), y.clone(), z.clone())).cloned()
    }
    fn left_unitor(&self, x: &String) -> Option<Witness<String>> {
        self.left_unitors.get(x).cloned()
    }
    fn right_unitor(&self, x: &String) -> Option<Witness<String>> {
        self.right_unitors.get(x).cloned()
    }

    fn objects(&self) -> Vec<String> {
        self.objects.clone()
    }
    fn morphisms_from(&self, a: &String) -> Vec<String> {
        self.morphisms.iter().filter(|(_, e)| &e.0 == a).map(|(k, _)| k.clone()).collect()
    }
    fn cells_from(&self, a: &String) -> Vec<String> {
        self.cells.iter().filter(|(_, e)| &e.0 == a).map(|(k, _)| k.clone()).collect()
    }
    fn cells_into(&self, b: &String) -> Vec<String> {
        self.cells.iter().filter(|(_, e)| &e.1 == b).map(|(k, _)| k.clone()).collect()
    }
    fn squares_from(&self, x: &String) -> Vec<String> {
        self.squares.iter().filter(|(_, e)| &e.source == x).map(|(k, _)| k.clone()).collect()
    }
    fn squares_with_d(&self, f: &String) -> Vec<String> {
        self.squares.iter().filter(|(_, e)| &e.d == f).map(|(k, _)| k.clone()).collect()
    }
    fn squares_with_r(&self, f: &String) -> Vec<String> {
        self.squares.iter().filter(|(_, e)| &e.r == f).map(|(k, _)| k.clone()).collect()
    }
}
