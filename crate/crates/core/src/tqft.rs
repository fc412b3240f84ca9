//! Topological quantum field theories as double functors
//! `Z: C(d) → Morph(Vect)` for `d = 0` (from a vector space `V`) and `d = 1`
//! (from a commutative Frobenius algebra), over ℚ.
//!
//! `Z(X)` is the tensor product of one factor per point or circle, in the
//! object's order, with `V` (or `A`) for `+` and the dual for `−`, written in
//! the dual basis. Multi-indices are read most significant first, matching
//! [`RationalMatrix::kron`].

use num::{One, Zero};
use thiserror::Error;

use crate::bimod::{BimodError, FinDimAlgebra};
use crate::category::{Category, Square};
use crate::cobord::{
    Cobordism, Cobordism1, Cobordism2, CobordismCell, CobordismDoubleCategory, Oriented, OrientedBijection, Sign,
    Surface,
};
use crate::diagram::Morph;
use crate::double::{walk, Budget, DoubleCategory, DoubleFunctor, LawReport, StructuralError};
use crate::linalg::{q, RationalMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TqftError {
    #[error("a Frobenius algebra must be commutative")]
    NotCommutative,
    #[error("the form (a, b) ↦ ε(ab) is degenerate")]
    Degenerate,
    #[error("Frobenius compatibility fails")]
    NotFrobenius,
    #[error("counit has {got} coordinates, algebra has dimension {dim}")]
    Shape { got: usize, dim: usize },
    #[error(transparent)]
    Algebra(#[from] BimodError),
}

/// A matrix `Z(X) → Z(X′)` with the objects it was computed for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCellMap {
    pub source: Oriented,
    pub target: Oriented,
    pub matrix: RationalMatrix,
}

/// `Z(X)`: its dimension, factor signs, and the pairing `Z(X) ⊗ Z(−X) → ℚ`
/// as a `dim × dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectAssignment {
    pub dim: usize,
    pub factors: Vec<Sign>,
    pub pairing: RationalMatrix,
}

fn digits(mut index: usize, base: usize, len: usize, out: &mut [usize]) {
    for slot in out[..len].iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
}

/// Builds a `base^outs × base^ins` matrix entry by entry; `entry` sees the
/// input digits followed by the output digits.
fn tensor_matrix(base: usize, ins: usize, outs: usize, mut entry: impl FnMut(&[usize]) -> Q) -> RationalMatrix {
    let (rows, cols) = (base.pow(outs as u32), base.pow(ins as u32));
    let mut buf = vec![0; ins + outs];
    let mut m = RationalMatrix::zeros(rows, cols);
    for c in 0..cols {
        digits(c, base, ins, &mut buf);
        for r in 0..rows {
            digits(r, base, outs, &mut buf[ins..]);
            let x = entry(&buf);
            if !x.is_zero() {
                m.set(r, c, x);
            }
        }
    }
    m
}

fn kron_all(ms: impl IntoIterator<Item = RationalMatrix>) -> RationalMatrix {
    ms.into_iter().fold(RationalMatrix::identity(1), |acc, m| acc.kron(&m))
}

/// A theory evaluating one model of cobordisms.
pub trait Theory {
    type Cob: Cobordism;

    /// Dimension of the factor attached to a single point or circle.
    fn factor_dim(&self) -> usize;
    fn evaluate(&self, c: &Self::Cob) -> LinearCellMap;
    /// The cobordism `X ⊔ (−X) ⇒ ∅` joining each component to its copy.
    fn pairing_cobordism(&self, x: &Oriented) -> Self::Cob;

    fn assign_object(&self, x: &Oriented) -> ObjectAssignment {
        let dim = self.factor_dim().pow(x.len() as u32);
        let row = self.evaluate(&self.pairing_cobordism(x)).matrix;
        let pairing = RationalMatrix::from_fn(dim, dim, |i, j| row.get(0, i * dim + j).clone());
        ObjectAssignment { dim, factors: x.signs().to_vec(), pairing }
    }

    /// The permutation of tensor factors induced by a bijection.
    fn evaluate_bijection(&self, f: &OrientedBijection) -> RationalMatrix {
        let n = f.source().len();
        tensor_matrix(self.factor_dim(), n, n, |d| {
            Q::from_integer(((0..n).all(|p| d[n + f.map()[p]] == d[p]) as i64).into())
        })
    }
}

/// The `d = 0` theory with `Z(+) = V = ℚⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theory1d {
    pub dim: usize,
}

impl Theory1d {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

/// Contracts the interval tensors of `c`: every interval is a Kronecker
/// delta between its endpoints, and every circle contributes `dim V`.
pub fn evaluate1(theory: &Theory1d, c: &Cobordism1) -> LinearCellMap {
    let (a, b) = (c.source().len(), c.target().len());
    let scalar = Q::from_integer((theory.dim as i64).pow(c.loops() as u32).into());
    let pairs = c.pairs();
    let matrix = tensor_matrix(theory.dim, a, b, |d| {
        if pairs.iter().all(|&(i, j)| d[i] == d[j]) {
            scalar.clone()
        } else {
            Q::zero()
        }
    });
    LinearCellMap { source: c.source().clone(), target: c.target().clone(), matrix }
}

impl Theory for Theory1d {
    type Cob = Cobordism1;

    fn factor_dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, c: &Cobordism1) -> LinearCellMap {
        evaluate1(self, c)
    }
    fn pairing_cobordism(&self, x: &Oriented) -> Cobordism1 {
        let a = x.len();
        let pairs: Vec<(usize, usize)> = (0..a).map(|p| (p, a + p)).collect();
        Cobordism1::from_pairs(x.union(&x.reversed()), Oriented::empty(), &pairs, 0).expect("opposite signs")
    }
}

/// A commutative Frobenius algebra `(A, ε)` with its derived structure maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    algebra: FinDimAlgebra,
    counit: Vec<Q>,
    gram: RationalMatrix,
    gram_inverse: RationalMatrix,
    mu: RationalMatrix,
    delta: RationalMatrix,
    eta: RationalMatrix,
    epsilon: RationalMatrix,
    handle: RationalMatrix,
}

impl FrobeniusAlgebra {
    /// Derives `Δ = (G ⊗ G)⁻¹ μᵀ G`, the adjoint of `μ` under the form with
    /// Gram matrix `G`, and checks the Frobenius relations.
    pub fn new(algebra: FinDimAlgebra, counit: Vec<Q>) -> Result<Self, TqftError> {
        let n = algebra.dim();
        if counit.len() != n {
            return Err(TqftError::Shape { got: counit.len(), dim: n });
        }
        if !algebra.is_commutative() {
            return Err(TqftError::NotCommutative);
        }
        let eps = |v: &[Q]| v.iter().zip(&counit).fold(Q::zero(), |s, (x, y)| s + x * y);
        let gram = RationalMatrix::from_fn(n, n, |i, j| eps(algebra.product_of_basis(i, j)));
        let gram_inverse = gram.inverse().map_err(|_| TqftError::Degenerate)?;
        let mu = RationalMatrix::from_fn(n, n * n, |k, c| algebra.product_of_basis(c / n, c % n)[k].clone());
        let delta = &(&gram_inverse.kron(&gram_inverse) * &mu.transpose()) * &gram;
        let eta = RationalMatrix::column(algebra.unit().to_vec());
        let epsilon = RationalMatrix::row_vector(counit.clone());
        let handle = &mu * &delta;
        let id = RationalMatrix::identity(n);
        let dm = &delta * &mu;
        if dm != &mu.kron(&id) * &id.kron(&delta) || dm != &id.kron(&mu) * &delta.kron(&id) {
            return Err(TqftError::NotFrobenius);
        }
        let f = Self { algebra, counit, gram, gram_inverse, mu, delta, eta, epsilon, handle };
        if *(&f.epsilon * &f.eta).get(0, 0) != bilinear(&f.gram, f.algebra.unit(), f.algebra.unit()) {
            return Err(TqftError::NotFrobenius);
        }
        Ok(f)
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }
    pub fn counit(&self) -> &[Q] {
        &self.counit
    }
    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }
    pub fn multiplication(&self) -> &RationalMatrix {
        &self.mu
    }
    pub fn comultiplication(&self) -> &RationalMatrix {
        &self.delta
    }
    pub fn unit_vector(&self) -> &RationalMatrix {
        &self.eta
    }
    pub fn counit_form(&self) -> &RationalMatrix {
        &self.epsilon
    }
    /// `H = μ ∘ Δ`.
    pub fn handle(&self) -> &RationalMatrix {
        &self.handle
    }

    /// `μ⁽ᵐ⁾: A^{⊗m} → A`, with `μ⁽⁰⁾ = η`.
    pub fn iterated_product(&self, m: usize) -> RationalMatrix {
        let id = RationalMatrix::identity(self.algebra.dim());
        match m {
            0 => self.eta.clone(),
            1 => id,
            _ => &self.mu * &self.iterated_product(m - 1).kron(&id),
        }
    }

    /// `Δ⁽ⁿ⁾: A → A^{⊗n}`, with `Δ⁽⁰⁾ = ε`.
    pub fn iterated_coproduct(&self, n: usize) -> RationalMatrix {
        let id = RationalMatrix::identity(self.algebra.dim());
        match n {
            0 => self.epsilon.clone(),
            1 => id,
            _ => &self.iterated_coproduct(n - 1).kron(&id) * &self.delta,
        }
    }

    /// `Δ⁽ⁿ⁾ ∘ Hᵍ ∘ μ⁽ᵐ⁾`, the connected genus-`g` surface with `m` inputs
    /// and `n` outputs.
    pub fn connected(&self, m: usize, n: usize, genus: u32) -> RationalMatrix {
        let mut mid = RationalMatrix::identity(self.algebra.dim());
        for _ in 0..genus {
            mid = &self.handle * &mid;
        }
        &(&self.iterated_coproduct(n) * &mid) * &self.iterated_product(m)
    }

    /// `ℚ` with `ε = 1`.
    pub fn trivial() -> Self {
        Self::new(FinDimAlgebra::rationals(), vec![q(1)]).expect("valid")
    }

    /// `ℚ[x]/(x²)` with `ε(1) = 0`, `ε(x) = 1`.
    pub fn dual_numbers() -> Self {
        Self::new(FinDimAlgebra::dual_numbers(), vec![q(0), q(1)]).expect("valid")
    }

    /// Every Frobenius algebra used by the tests and the command line.
    pub fn corpus() -> Vec<Self> {
        vec![
            Self::trivial(),
            Self::dual_numbers(),
            Self::new(FinDimAlgebra::split(), vec![q(1), q(1)]).expect("valid"),
            Self::new(FinDimAlgebra::split(), vec![q(1), q(2)]).expect("valid"),
            Self::new(FinDimAlgebra::truncated_polynomial(3), vec![q(0), q(0), q(1)]).expect("valid"),
        ]
    }
}

fn bilinear(g: &RationalMatrix, a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            s += x * y * g.get(i, j);
        }
    }
    s
}

/// Evaluates a surface component by component. Input circles oriented `−`
/// carry `A*` and are identified with `A` through `G⁻¹`; output circles
/// oriented `−` are sent back through `G`.
pub fn evaluate2(theory: &FrobeniusAlgebra, c: &Cobordism2) -> LinearCellMap {
    let (a, b) = (c.source().len(), c.target().len());
    let n = theory.algebra.dim();
    let id = RationalMatrix::identity(n);
    let convert_in =
        |i: usize| if c.source().signs()[i] == Sign::Minus { theory.gram_inverse.clone() } else { id.clone() };
    let convert_out = |k: usize| if c.target().signs()[k] == Sign::Minus { theory.gram.clone() } else { id.clone() };
    // (inputs, outputs, matrix) per component
    let parts: Vec<(Vec<usize>, Vec<usize>, RationalMatrix)> = c
        .components()
        .iter()
        .map(|Surface { genus, attachments }| {
            let ins: Vec<usize> = attachments.iter().copied().filter(|&i| i < a).collect();
            let outs: Vec<usize> = attachments.iter().copied().filter(|&i| i >= a).collect();
            let k = &(&kron_all(outs.iter().map(|&o| convert_out(o - a)))
                * &theory.connected(ins.len(), outs.len(), *genus))
                * &kron_all(ins.iter().map(|&i| convert_in(i)));
            (ins, outs, k)
        })
        .collect();
    let matrix = tensor_matrix(n, a, b, |d| {
        let mut x = Q::one();
        for (ins, outs, k) in &parts {
            let col = ins.iter().fold(0, |acc, &i| acc * n + d[i]);
            let row = outs.iter().fold(0, |acc, &o| acc * n + d[o]);
            x *= k.get(row, col);
            if x.is_zero() {
                break;
            }
        }
        x
    });
    LinearCellMap { source: c.source().clone(), target: c.target().clone(), matrix }
}

impl Theory for FrobeniusAlgebra {
    type Cob = Cobordism2;

    fn factor_dim(&self) -> usize {
        self.algebra.dim()
    }
    fn evaluate(&self, c: &Cobordism2) -> LinearCellMap {
        evaluate2(self, c)
    }
    fn pairing_cobordism(&self, x: &Oriented) -> Cobordism2 {
        let a = x.len();
        let components = (0..a).map(|p| Surface { genus: 0, attachments: vec![p, a + p] }).collect();
        Cobordism2::new(x.union(&x.reversed()), Oriented::empty(), components).expect("valid")
    }
}

/// Finite-dimensional spaces `ℚⁿ` and matrices; `f` then `g` is `g·f`.
/// Only identities are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixCategory {
    pub max_dim: usize,
}

impl Category for MatrixCategory {
    type Obj = usize;
    type Mor = RationalMatrix;

    fn source(&self, f: &RationalMatrix) -> usize {
        f.cols()
    }
    fn target(&self, f: &RationalMatrix) -> usize {
        f.rows()
    }
    fn identity(&self, a: &usize) -> RationalMatrix {
        RationalMatrix::identity(*a)
    }
    fn compose(&self, f: &RationalMatrix, g: &RationalMatrix) -> Option<RationalMatrix> {
        (f.rows() == g.cols()).then(|| g * f)
    }
    fn objects(&self) -> Vec<usize> {
        (0..=self.max_dim).collect()
    }
    fn morphisms_from(&self, a: &usize) -> Vec<RationalMatrix> {
        vec![RationalMatrix::identity(*a)]
    }
}

/// `Z` packaged as a strict double functor `C(d) → Morph(Mat_ℚ)`.
#[derive(Debug, Clone)]
pub struct TqftFunctor<T: Theory> {
    pub theory: T,
    pub source: CobordismDoubleCategory<T::Cob>,
    pub target: Morph<MatrixCategory>,
}

pub fn tqft_double_functor<T: Theory>(theory: T, source: CobordismDoubleCategory<T::Cob>) -> TqftFunctor<T> {
    let bound = source.objects.iter().map(Oriented::len).max().unwrap_or(0);
    let max_dim = theory.factor_dim().pow(bound as u32);
    TqftFunctor { theory, source, target: Morph(MatrixCategory { max_dim }) }
}

impl<T: Theory> DoubleFunctor for TqftFunctor<T> {
    type Source = CobordismDoubleCategory<T::Cob>;
    type Target = Morph<MatrixCategory>;

    fn source(&self) -> &Self::Source {
        &self.source
    }
    fn target(&self) -> &Self::Target {
        &self.target
    }
    fn map_obj(&self, x: &Oriented) -> Option<usize> {
        Some(self.theory.factor_dim().pow(x.len() as u32))
    }
    fn map_mor(&self, f: &OrientedBijection) -> Option<RationalMatrix> {
        Some(self.theory.evaluate_bijection(f))
    }
    fn map_cell(&self, c: &T::Cob) -> Option<RationalMatrix> {
        Some(self.theory.evaluate(c).matrix)
    }
    fn map_square(&self, a: &CobordismCell<T::Cob>) -> Option<Square<RationalMatrix>> {
        Some(Square {
            f: self.map_cell(&a.source)?,
            g: self.map_cell(&a.target)?,
            u: self.map_mor(&a.f1)?,
            v: self.map_mor(&a.f2)?,
        })
    }
}

/// Checks the axioms `A(1)`–`A(5)` on the instance's enumerations; each is
/// reported as its own law.
pub fn check_axioms<T: Theory>(
    theory: &T,
    dc: &CobordismDoubleCategory<T::Cob>,
    budget: &Budget,
) -> Result<LawReport, StructuralError> {
    let mut report = LawReport::new();
    let laws = ["A1.involutivity", "A2.multiplicativity", "A3.associativity", "A4.empty", "A5.identity"];
    for law in laws {
        report.declare(law);
    }
    let z = |c: &T::Cob| theory.evaluate(c).matrix;

    let empty = theory.assign_object(&Oriented::empty());
    let ok = empty.dim == 1 && z(&T::Cob::identity(&Oriented::empty())) == RationalMatrix::identity(1);
    report.record("A4.empty", ok, || format!("dim Z(∅) = {}", empty.dim));

    for x in dc.objects() {
        let ok = z(&T::Cob::identity(&x)) == RationalMatrix::identity(theory.assign_object(&x).dim);
        report.record("A5.identity", ok, || format!("{x:?}"));
        let (zx, zmx) = (theory.assign_object(&x), theory.assign_object(&x.reversed()));
        let ok = zx.dim == zmx.dim && zx.pairing.is_invertible();
        report.record("A1.involutivity", ok, || format!("pairing on {x:?}"));
    }

    let cells = dc.all_cells();
    let pairing_inverse = |x: &Oriented| theory.assign_object(x).pairing.inverse();
    walk(budget, "A1", &cells, &[], &mut |c: &[T::Cob]| {
        let c = &c[0];
        let (zc, zr) = (z(c), z(&c.reverse()));
        let expected =
            pairing_inverse(c.source()).map(|p| &(&p * &zc.transpose()) * &theory.assign_object(c.target()).pairing);
        report.record("A1.involutivity", expected.as_ref() == Ok(&zr), || format!("{c:?}"));
        Ok::<(), StructuralError>(())
    })?;
    let any_next = |chain: &[T::Cob]| dc.cells_from(&dc.objects()[chain.len() % dc.objects().len()]);
    walk(budget, "A2", &cells, &[&any_next], &mut |c: &[T::Cob]| {
        let (x, y) = (&c[0], &c[1]);
        let ok = z(&x.union(y)) == z(x).kron(&z(y))
            && theory.assign_object(&x.source().union(y.source())).dim
                == theory.assign_object(x.source()).dim * theory.assign_object(y.source()).dim;
        report.record("A2.multiplicativity", ok, || format!("{x:?} ∪ {y:?}"));
        Ok::<(), StructuralError>(())
    })?;
    let next = |chain: &[T::Cob]| dc.cells_from(chain[chain.len() - 1].target());
    walk(budget, "A3", &cells, &[&next], &mut |c: &[T::Cob]| {
        let (x, y) = (&c[0], &c[1]);
        let glued =
            x.compose(y).map_err(|_| StructuralError::Undefined { op: "compose", cells: format!("{x:?}, {y:?}") })?;
        report.record("A3.associativity", z(&glued) == &z(y) * &z(x), || format!("{x:?} ; {y:?}"));
        Ok(())
    })?;
    Ok(report)
}
