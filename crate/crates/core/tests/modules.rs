//! Tensor products over finite-dimensional algebras against a relation
//! matrix eliminated here, plus the module action built on them.

use std::sync::Arc;

use dblcat::action::{Action, ModuleAction};
use dblcat::bimod::{
    hom_space, include_morph_alg, left_unit_iso, right_unit_iso, tensor_over, AlgDoubleCategory, AlgebraMap, Bimodule,
    FinDimAlgebra,
};
use dblcat::linalg::{q, RationalMatrix, Q};
use proptest::prelude::*;

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != q(0)) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let factor = &rows[i][c] / &rows[r][c];
            for k in c..cols {
                let delta = &factor * &rows[r][k];
                rows[i][k] -= delta;
            }
        }
        r += 1;
    }
    r
}

/// `dim M·dim N − rank` of the relations `(m·b)⊗n − m⊗(b·n)`.
fn oracle_dim(m: &Bimodule, n: &Bimodule) -> usize {
    let (dm, dn) = (m.dim(), n.dim());
    let mut rows = Vec::new();
    for k in 0..m.right().dim() {
        for i in 0..dm {
            for j in 0..dn {
                let mut v = vec![q(0); dm * dn];
                for p in 0..dm {
                    v[p * dn + j] += m.rho()[k].get(p, i).clone();
                }
                for p in 0..dn {
                    v[i * dn + p] -= n.lambda()[k].get(p, j).clone();
                }
                rows.push(v);
            }
        }
    }
    dm * dn - rank(rows)
}

fn dual_numbers() -> Arc<FinDimAlgebra> {
    Arc::new(FinDimAlgebra::dual_numbers())
}

fn rationals() -> Arc<FinDimAlgebra> {
    Arc::new(FinDimAlgebra::rationals())
}

/// `B/(x)` for `B = ℚ[x]/(x²)`, as a `(B, ℚ)`-bimodule.
fn residue(b: &Arc<FinDimAlgebra>, k: &Arc<FinDimAlgebra>) -> Bimodule {
    Bimodule::new(
        b,
        k,
        vec![RationalMatrix::identity(1), RationalMatrix::zeros(1, 1)],
        vec![RationalMatrix::identity(1)],
        "B/x",
    )
    .unwrap()
}

/// `B` as a `(ℚ, B)`-bimodule.
fn b_over_field(b: &Arc<FinDimAlgebra>, k: &Arc<FinDimAlgebra>) -> Bimodule {
    let eta = AlgebraMap::new(k, b, RationalMatrix::from_i64(2, 1, &[1, 0])).unwrap();
    Bimodule::regular(b).restrict(&eta, &AlgebraMap::identity(b)).unwrap()
}

#[test]
fn no_relations_over_the_field() {
    let k = rationals();
    let (m, n) = (Bimodule::vector_space(&k, 2).unwrap(), Bimodule::vector_space(&k, 3).unwrap());
    assert_eq!(tensor_over(&m, &n).unwrap().module.dim(), 6);
    assert_eq!(oracle_dim(&m, &n), 6);
}

#[test]
fn regular_tensor_residue_field() {
    let (b, k) = (dual_numbers(), rationals());
    let (m, n) = (b_over_field(&b, &k), residue(&b, &k));
    let t = tensor_over(&m, &n).unwrap();
    assert_eq!(t.module.dim(), 1);
    assert_eq!(oracle_dim(&m, &n), 1);
    assert_eq!((t.module.left(), t.module.right()), (&k, &k));
}

#[test]
fn regular_bimodule_of_dual_numbers() {
    let k = rationals();
    let one = Bimodule::regular(&k);
    assert_eq!(one.dim(), 1);
    assert_eq!(one.lambda(), &[RationalMatrix::identity(1)]);
    let b = Bimodule::regular(&dual_numbers());
    assert_eq!(b.dim(), 2);
    assert_eq!(b.lambda()[1], RationalMatrix::from_i64(2, 2, &[0, 0, 1, 0]));
    for l in b.lambda() {
        for r in b.rho() {
            assert_eq!(l * r, r * l);
        }
    }
}

#[test]
fn unit_witnesses_are_isomorphisms() {
    for m in &AlgDoubleCategory::standard_corpus().bimodules {
        for (t, w) in [left_unit_iso(m).unwrap(), right_unit_iso(m).unwrap()] {
            assert_eq!(t.module.dim(), m.dim());
            assert_eq!(&w.forward * &w.inverse, RationalMatrix::identity(m.dim()));
            assert_eq!(rank(w.forward.to_rows()), m.dim());
        }
    }
}

#[test]
fn inclusion_of_the_unit_map() {
    let (b, k) = (dual_numbers(), rationals());
    let eta = AlgebraMap::new(&k, &b, RationalMatrix::from_i64(2, 1, &[1, 0])).unwrap();
    let m = include_morph_alg(&eta);
    assert_eq!((m.dim(), m.left(), m.right()), (2, &k, &b));
}

/// Some element of the intertwiner basis, or the sum of the basis, is
/// invertible.
fn has_invertible(basis: &[RationalMatrix]) -> bool {
    let sum = basis.iter().skip(1).fold(basis.first().cloned(), |acc, b| acc.map(|a| &a + b));
    basis.iter().chain(sum.as_ref()).any(|w| w.is_square() && w.is_invertible())
}

#[test]
fn inclusion_is_compatible_with_composition() {
    let alg = AlgDoubleCategory::standard_corpus();
    let mut maps = alg.maps.clone();
    maps.extend(alg.algebras.iter().map(AlgebraMap::identity));
    let mut checked = 0;
    for f in &maps {
        for g in maps.iter().filter(|g| g.source() == f.target()) {
            let gf = f.then(g).unwrap();
            let tensor = tensor_over(&include_morph_alg(f), &include_morph_alg(g)).unwrap().module;
            let direct = include_morph_alg(&gf);
            assert_eq!(tensor.dim(), direct.dim());
            let ids = (AlgebraMap::identity(f.source()), AlgebraMap::identity(g.target()));
            assert!(has_invertible(&hom_space(&direct, &tensor, &ids.0, &ids.1)), "{f:?} then {g:?}");
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn module_action_matches_the_oracle() {
    let (b, k) = (dual_numbers(), rationals());
    let a = ModuleAction::new(AlgDoubleCategory::standard_corpus());
    let m = residue(&b, &k);
    for xi in [Bimodule::regular(&b), b_over_field(&b, &k)] {
        let acted = a.act(&xi, &m).unwrap();
        assert_eq!(acted.dim(), oracle_dim(&xi, &m));
        assert_eq!(acted.left(), xi.left());
    }
    let whole = Bimodule::regular(&b).restrict(&AlgebraMap::identity(&b), &AlgebraMap::unit_map(&b)).unwrap();
    assert_eq!(a.act(&Bimodule::regular(&b), &whole).unwrap().dim(), 2);
}

fn conjugate(m: &Bimodule, p: &RationalMatrix) -> Bimodule {
    let pinv = p.inverse().unwrap();
    let c = |x: &RationalMatrix| &(&pinv * x) * p;
    Bimodule::new(m.left(), m.right(), m.lambda().iter().map(c).collect(), m.rho().iter().map(c).collect(), "conj")
        .unwrap()
}

fn unitriangular(n: usize, entries: &[i64]) -> RationalMatrix {
    let mut k = 0;
    let mut m = RationalMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, q(entries[k % entries.len()]));
            k += 1;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_dimension_is_basis_independent(
        i in 0usize..64,
        j in 0usize..64,
        a in prop::collection::vec(-3i64..=3, 3),
        b in prop::collection::vec(-3i64..=3, 3),
    ) {
        let corpus = AlgDoubleCategory::standard_corpus().bimodules;
        let pairs: Vec<(&Bimodule, &Bimodule)> = corpus
            .iter()
            .flat_map(|m| corpus.iter().map(move |n| (m, n)))
            .filter(|(m, n)| m.right() == n.left())
            .collect();
        let (m, n) = pairs[(i * 64 + j) % pairs.len()];
        let m2 = conjugate(m, &unitriangular(m.dim(), &a).transpose());
        let n2 = conjugate(n, &unitriangular(n.dim(), &b));
        let t = tensor_over(&m2, &n2).unwrap();
        prop_assert_eq!(t.module.dim(), oracle_dim(&m2, &n2));
        prop_assert_eq!(t.module.dim(), tensor_over(m, n).unwrap().module.dim());
        prop_assert_eq!(&t.projection * &t.section, RationalMatrix::identity(t.module.dim()));
    }
}
