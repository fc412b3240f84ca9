//! Finite-dimensional algebras over ℚ, their bimodules, and the double
//! category `ALG_k` whose 1-cells are bimodules composed by tensor products.
//!
//! Vectors are columns in the given basis. For an `(A, B)`-bimodule `M`,
//! `λ(a)` is the matrix of `m ↦ a·m` and `ρ(b)` that of `m ↦ m·b`; `ρ` is
//! anti-multiplicative.
//!
//! Composition follows the diagrammatic convention: for `M: A ⇒ B` and
//! `N: B ⇒ C`, `star(M, N) = M ⊗_B N`, an `(A, C)`-bimodule.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::category::{Category, Square};
use crate::diagram::Morph;
use crate::double::{DoubleCategory, DoubleFunctor, Strictness, Witness};
use crate::linalg::{q, LinalgError, RationalMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimodError {
    #[error("wrong shape: {0}")]
    Shape(String),
    #[error("product is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails on basis element {0}")]
    NotUnital(usize),
    #[error("not an algebra map: {0}")]
    NotAlgebraMap(String),
    #[error("not a bimodule: {0}")]
    NotBimodule(String),
    #[error("right algebra {left} of the first factor differs from left algebra {right} of the second")]
    MiddleMismatch { left: String, right: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A unital associative algebra `Σ c_{ij}^k e_k = e_i e_j` over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinDimAlgebra {
    name: String,
    dim: usize,
    structure: Vec<Q>,
    unit: Vec<Q>,
}

impl fmt::Debug for FinDimAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub type Algebra = Arc<FinDimAlgebra>;

fn axpy(acc: &mut [Q], a: &Q, x: &[Q]) {
    if a.is_zero() {
        return;
    }
    for (s, v) in acc.iter_mut().zip(x) {
        *s += a * v;
    }
}

impl FinDimAlgebra {
    /// `structure[(i*n + j)*n + k] = c_{ij}^k`. Associativity and the unit
    /// law are verified on all basis triples and pairs.
    pub fn new(name: impl Into<String>, dim: usize, structure: Vec<Q>, unit: Vec<Q>) -> Result<Self, BimodError> {
        if structure.len() != dim * dim * dim || unit.len() != dim {
            return Err(BimodError::Shape(format!("dimension {dim} needs {} structure constants", dim.pow(3))));
        }
        let alg = Self { name: name.into(), dim, structure, unit };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (ei, ej, ek) = (alg.basis(i), alg.basis(j), alg.basis(k));
                    if alg.mul(&alg.mul(&ei, &ej), &ek) != alg.mul(&ei, &alg.mul(&ej, &ek)) {
                        return Err(BimodError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..dim {
            let ei = alg.basis(i);
            if alg.mul(&alg.unit, &ei) != ei || alg.mul(&ei, &alg.unit) != ei {
                return Err(BimodError::NotUnital(i));
            }
        }
        Ok(alg)
    }

    /// Builds an algebra from integer structure constants.
    pub fn from_table(name: &str, dim: usize, table: &[i64], unit: &[i64]) -> Result<Self, BimodError> {
        Self::new(name, dim, table.iter().map(|&x| q(x)).collect(), unit.iter().map(|&x| q(x)).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn structure(&self) -> &[Q] {
        &self.structure
    }

    /// Coordinates of `e_i e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[Q] {
        let n = self.dim;
        &self.structure[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        (0..self.dim).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                axpy(&mut out, &(ai * bj), self.product_of_basis(i, j));
            }
        }
        out
    }

    /// Matrix of `x ↦ a·x`.
    pub fn left_mult(&self, a: &[Q]) -> RationalMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        RationalMatrix::from_fn(self.dim, self.dim, |k, j| cols[j][k].clone())
    }

    /// Matrix of `x ↦ x·b`.
    pub fn right_mult(&self, b: &[Q]) -> RationalMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|i| self.mul(&self.basis(i), b)).collect();
        RationalMatrix::from_fn(self.dim, self.dim, |k, i| cols[i][k].clone())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.product_of_basis(i, j) == self.product_of_basis(j, i)))
    }

    /// The ground field ℚ.
    pub fn rationals() -> Self {
        Self::from_table("Q", 1, &[1], &[1]).expect("valid")
    }

    /// `ℚ[x]/(x²)` on the basis `1, x`.
    pub fn dual_numbers() -> Self {
        #[rustfmt::skip]
        let t = [
            1, 0,   0, 1,
            0, 1,   0, 0,
        ];
        Self::from_table("Q[x]/(x^2)", 2, &t, &[1, 0]).expect("valid")
    }

    /// `ℚ[x]/(xᵏ)` on the basis `1, x, …, xᵏ⁻¹`.
    pub fn truncated_polynomial(k: usize) -> Self {
        let mut t = vec![0; k * k * k];
        for i in 0..k {
            for j in 0..k - i {
                t[(i * k + j) * k + i + j] = 1;
            }
        }
        let mut unit = vec![0; k];
        unit[0] = 1;
        Self::from_table(&format!("Q[x]/(x^{k})"), k, &t, &unit).expect("valid")
    }

    /// `ℚ × ℚ` on the idempotent basis `e₁, e₂`.
    pub fn split() -> Self {
        #[rustfmt::skip]
        let t = [
            1, 0,   0, 0,
            0, 0,   0, 1,
        ];
        Self::from_table("QxQ", 2, &t, &[1, 1]).expect("valid")
    }

    /// Upper-triangular 2×2 matrices on the basis `e₁₁, e₁₂, e₂₂`.
    pub fn upper_triangular() -> Self {
        let mut t = vec![0; 27];
        let mut set = |i: usize, j: usize, k: usize| t[(i * 3 + j) * 3 + k] = 1;
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 2, 1);
        set(2, 2, 2);
        Self::from_table("UT2", 3, &t, &[1, 0, 1]).expect("valid")
    }
}

/// A unital algebra homomorphism, as a `target.dim × source.dim` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraMap {
    source: Algebra,
    target: Algebra,
    matrix: RationalMatrix,
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{:?}{:?}", self.source, self.target, self.matrix)
    }
}

impl AlgebraMap {
    pub fn new(source: &Algebra, target: &Algebra, matrix: RationalMatrix) -> Result<Self, BimodError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(BimodError::Shape("algebra map matrix".into()));
        }
        let f = Self { source: source.clone(), target: target.clone(), matrix };
        if f.apply(source.unit()) != target.unit() {
            return Err(BimodError::NotAlgebraMap("unit not preserved".into()));
        }
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = f.apply(source.product_of_basis(i, j));
                let rhs = target.mul(&f.apply(&source.basis(i)), &f.apply(&source.basis(j)));
                if lhs != rhs {
                    return Err(BimodError::NotAlgebraMap(format!("product of basis elements {i}, {j}")));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: &Algebra) -> Self {
        Self { source: a.clone(), target: a.clone(), matrix: RationalMatrix::identity(a.dim()) }
    }

    /// The structure map `ℚ → A`.
    pub fn unit_map(a: &Algebra) -> Self {
        let k = Arc::new(FinDimAlgebra::rationals());
        let matrix = RationalMatrix::column(a.unit().to_vec());
        Self { source: k, target: a.clone(), matrix }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Q]) -> Vec<Q> {
        (&self.matrix * &RationalMatrix::column(a.to_vec())).col(0)
    }

    /// `self` then `g`.
    pub fn then(&self, g: &AlgebraMap) -> Option<AlgebraMap> {
        (self.target == g.source).then(|| AlgebraMap {
            source: self.source.clone(),
            target: g.target.clone(),
            matrix: &g.matrix * &self.matrix,
        })
    }
}

/// An `(A, B)`-bimodule with action matrices on the basis of each algebra.
///
/// Equality and hashing ignore the label.
#[derive(Clone)]
pub struct Bimodule {
    left: Algebra,
    right: Algebra,
    dim: usize,
    lambda: Vec<RationalMatrix>,
    rho: Vec<RationalMatrix>,
    label: Arc<str>,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.left == other.left
            && self.right == other.right
            && self.lambda == other.lambda
            && self.rho == other.rho
    }
}
impl Eq for Bimodule {}
impl Hash for Bimodule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.left.name.hash(state);
        self.right.name.hash(state);
        self.lambda.hash(state);
        self.rho.hash(state);
    }
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}⇒{:?}[dim {}]", self.label, self.left, self.right, self.dim)
    }
}

fn combination(basis_images: &[RationalMatrix], coeffs: &[Q], dim: usize) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(dim, dim);
    for (c, m) in coeffs.iter().zip(basis_images) {
        if !c.is_zero() {
            out = &out + &m.scale(c);
        }
    }
    out
}

impl Bimodule {
    /// Validates unitality, (anti-)multiplicativity, and commutation of the
    /// two actions on all basis pairs.
    pub fn new(
        left: &Algebra,
        right: &Algebra,
        lambda: Vec<RationalMatrix>,
        rho: Vec<RationalMatrix>,
        label: &str,
    ) -> Result<Self, BimodError> {
        let dim = lambda.first().or(rho.first()).map(|m| m.rows()).unwrap_or(0);
        if lambda.len() != left.dim() || rho.len() != right.dim() {
            return Err(BimodError::Shape("one action matrix per basis element".into()));
        }
        if lambda.iter().chain(&rho).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(BimodError::Shape("action matrices must be square of the module dimension".into()));
        }
        let m = Self { left: left.clone(), right: right.clone(), dim, lambda, rho, label: label.into() };
        let id = RationalMatrix::identity(dim);
        if m.lambda_of(left.unit()) != id {
            return Err(BimodError::NotBimodule("left unit does not act as identity".into()));
        }
        if m.rho_of(right.unit()) != id {
            return Err(BimodError::NotBimodule("right unit does not act as identity".into()));
        }
        for i in 0..left.dim() {
            for j in 0..left.dim() {
                if &m.lambda[i] * &m.lambda[j] != m.lambda_of(left.product_of_basis(i, j)) {
                    return Err(BimodError::NotBimodule(format!("left action on ({i}, {j})")));
                }
            }
        }
        for i in 0..right.dim() {
            for j in 0..right.dim() {
                if &m.rho[j] * &m.rho[i] != m.rho_of(right.product_of_basis(i, j)) {
                    return Err(BimodError::NotBimodule(format!("right action on ({i}, {j})")));
                }
            }
        }
        for a in &m.lambda {
            for b in &m.rho {
                if a * b != b * a {
                    return Err(BimodError::NotBimodule("actions do not commute".into()));
                }
            }
        }
        Ok(m)
    }

    pub fn left(&self) -> &Algebra {
        &self.left
    }

    pub fn right(&self) -> &Algebra {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn lambda(&self) -> &[RationalMatrix] {
        &self.lambda
    }

    pub fn rho(&self) -> &[RationalMatrix] {
        &self.rho
    }

    /// `λ(a)` for an arbitrary element `a` of the left algebra.
    pub fn lambda_of(&self, a: &[Q]) -> RationalMatrix {
        combination(&self.lambda, a, self.dim)
    }

    /// `ρ(b)` for an arbitrary element `b` of the right algebra.
    pub fn rho_of(&self, b: &[Q]) -> RationalMatrix {
        combination(&self.rho, b, self.dim)
    }

    /// The bimodule as a representation of `A ⊗ B°`: the matrix of
    /// `m ↦ e_i·m·e_j` at index `i * dim B + j`.
    pub fn as_representation(&self) -> Vec<RationalMatrix> {
        self.lambda.iter().flat_map(|l| self.rho.iter().map(move |r| l * r)).collect()
    }

    /// `A` acting on itself on both sides.
    pub fn regular(a: &Algebra) -> Self {
        let lambda = (0..a.dim()).map(|i| a.left_mult(&a.basis(i))).collect();
        let rho = (0..a.dim()).map(|j| a.right_mult(&a.basis(j))).collect();
        Self { left: a.clone(), right: a.clone(), dim: a.dim(), lambda, rho, label: a.name().into() }
    }

    /// `ℚ^n` as a `(ℚ, ℚ)`-bimodule.
    pub fn vector_space(k: &Algebra, n: usize) -> Result<Self, BimodError> {
        let id = vec![RationalMatrix::identity(n); k.dim()];
        Self::new(k, k, id.clone(), id, &format!("Q^{n}"))
    }

    /// Restriction of scalars along `u: A′ → A` and `v: B′ → B`.
    pub fn restrict(&self, u: &AlgebraMap, v: &AlgebraMap) -> Result<Self, BimodError> {
        if u.target() != &self.left || v.target() != &self.right {
            return Err(BimodError::Shape("restriction maps must land in the acting algebras".into()));
        }
        let lambda = (0..u.source().dim()).map(|i| self.lambda_of(&u.apply(&u.source().basis(i)))).collect();
        let rho = (0..v.source().dim()).map(|j| self.rho_of(&v.apply(&v.source().basis(j)))).collect();
        Self::new(u.source(), v.source(), lambda, rho, &format!("{}|", self.label))
    }
}

/// The bimodule `B` with `a·x·b = f(a) x b` attached to an algebra map
/// `f: A → B`.
pub fn include_morph_alg(f: &AlgebraMap) -> Bimodule {
    let b = f.target();
    let lambda = (0..f.source().dim()).map(|i| b.left_mult(&f.apply(&f.source().basis(i)))).collect();
    let rho = (0..b.dim()).map(|j| b.right_mult(&b.basis(j))).collect();
    Bimodule {
        left: f.source().clone(),
        right: b.clone(),
        dim: b.dim(),
        lambda,
        rho,
        label: format!("⟨{:?}→{:?}⟩", f.source(), b).into(),
    }
}

pub fn regular_bimodule(a: &Algebra) -> Bimodule {
    Bimodule::regular(a)
}

/// A morphism of bimodules `M → N` over algebra maps `u` (left) and `v`
/// (right): `w(a·m·b) = u(a)·w(m)·v(b)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BimoduleCell {
    pub source: Bimodule,
    pub target: Bimodule,
    pub u: AlgebraMap,
    pub v: AlgebraMap,
    pub w: RationalMatrix,
}

impl fmt::Debug for BimoduleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} ⇒ {:?} | w={:?})", self.source, self.target, self.w)
    }
}

impl BimoduleCell {
    pub fn is_valid(&self) -> bool {
        let (m, n) = (&self.source, &self.target);
        let shapes = self.u.source() == m.left()
            && self.u.target() == n.left()
            && self.v.source() == m.right()
            && self.v.target() == n.right()
            && self.w.rows() == n.dim()
            && self.w.cols() == m.dim();
        shapes
            && (0..m.left().dim())
                .all(|i| &self.w * &m.lambda[i] == &n.lambda_of(&self.u.apply(&m.left().basis(i))) * &self.w)
            && (0..m.right().dim())
                .all(|j| &self.w * &m.rho[j] == &n.rho_of(&self.v.apply(&m.right().basis(j))) * &self.w)
    }

    fn framed_identity(source: &Bimodule, target: &Bimodule, w: RationalMatrix) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            u: AlgebraMap::identity(source.left()),
            v: AlgebraMap::identity(source.right()),
            w,
        }
    }
}

/// Basis of the intertwiners `w: M → N` over `u` and `v`.
pub fn hom_space(m: &Bimodule, n: &Bimodule, u: &AlgebraMap, v: &AlgebraMap) -> Vec<RationalMatrix> {
    let (p, r) = (n.dim(), m.dim());
    // Unknown w[i][j] at index i*r + j; each equation `w X = Y w` contributes
    // p*r linear rows.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut add = |x: &RationalMatrix, y: &RationalMatrix| {
        for i in 0..p {
            for j in 0..r {
                let mut row = vec![Q::zero(); p * r];
                for s in 0..r {
                    row[i * r + s] += x.get(s, j);
                }
                for s in 0..p {
                    row[s * r + j] -= y.get(i, s);
                }
                rows.push(row);
            }
        }
    };
    for i in 0..m.left().dim() {
        add(&m.lambda[i], &n.lambda_of(&u.apply(&m.left().basis(i))));
    }
    for j in 0..m.right().dim() {
        add(&m.rho[j], &n.rho_of(&v.apply(&m.right().basis(j))));
    }
    if p * r == 0 {
        return Vec::new();
    }
    let system = RationalMatrix::from_rows(p * r, rows).expect("rows have p*r entries");
    system.nullspace().into_iter().map(|x| RationalMatrix::from_fn(p, r, |i, j| x[i * r + j].clone())).collect()
}

/// `M ⊗_B N` with the canonical projection from `M ⊗ N` and a section of it.
///
/// The quotient basis is the set of non-pivot columns of the reduced
/// relation space, so representatives and every derived matrix are
/// canonical.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub module: Bimodule,
    /// `dim(M ⊗_B N) × (dim M · dim N)`
    pub projection: RationalMatrix,
    /// `(dim M · dim N) × dim(M ⊗_B N)`, with `projection · section = I`.
    pub section: RationalMatrix,
    pub relation_rank: usize,
}

/// Matrix whose rows span the relations `(m·b)⊗n − m⊗(b·n)` over basis
/// triples; index of `e_i ⊗ e_j` is `i * dim N + j`.
pub fn tensor_relations(m: &Bimodule, n: &Bimodule) -> RationalMatrix {
    let (dm, dn) = (m.dim(), n.dim());
    let mut rows = Vec::new();
    for b in 0..m.right().dim() {
        let rel = &m.rho[b].kron(&RationalMatrix::identity(dn)) - &RationalMatrix::identity(dm).kron(&n.lambda[b]);
        rows.extend(rel.transpose().to_rows());
    }
    RationalMatrix::from_rows(dm * dn, rows).expect("rows have dm*dn entries")
}

pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<TensorProduct, BimodError> {
    if m.right() != n.left() {
        return Err(BimodError::MiddleMismatch { left: m.right().name().into(), right: n.left().name().into() });
    }
    let total = m.dim() * n.dim();
    let (reduced, pivots) = tensor_relations(m, n).rref();
    let free: Vec<usize> = (0..total).filter(|c| !pivots.contains(c)).collect();
    let qd = free.len();
    let mut projection = RationalMatrix::zeros(qd, total);
    for (f, &c) in free.iter().enumerate() {
        projection.set(f, c, Q::one());
    }
    // e_{p_r} ≡ e_{p_r} − row_r, which lives on the free columns.
    for (r, &p) in pivots.iter().enumerate() {
        for (f, &c) in free.iter().enumerate() {
            projection.set(f, p, -reduced.get(r, c).clone());
        }
    }
    let section = RationalMatrix::from_fn(total, qd, |i, f| if free[f] == i { Q::one() } else { Q::zero() });
    let (im, in_) = (RationalMatrix::identity(m.dim()), RationalMatrix::identity(n.dim()));
    let induce = |x: RationalMatrix| &(&projection * &x) * &section;
    let lambda = m.lambda.iter().map(|l| induce(l.kron(&in_))).collect();
    let rho = n.rho.iter().map(|r| induce(im.kron(r))).collect();
    let module = Bimodule {
        left: m.left().clone(),
        right: n.right().clone(),
        dim: qd,
        lambda,
        rho,
        label: format!("({}⊗{})", m.label, n.label).into(),
    };
    Ok(TensorProduct { module, projection, section, relation_rank: pivots.len() })
}

/// The unit isomorphism `A ⊗_A M → M`, `a ⊗ m ↦ a·m`, and its inverse
/// `m ↦ [1 ⊗ m]`.
pub fn left_unit_iso(m: &Bimodule) -> Result<(TensorProduct, Witness<RationalMatrix>), BimodError> {
    let a = m.left();
    let t = tensor_over(&Bimodule::regular(a), m)?;
    let (da, dm) = (a.dim(), m.dim());
    let act = RationalMatrix::from_fn(dm, da * dm, |k, c| m.lambda[c / dm].get(k, c % dm).clone());
    let forward = &act * &t.section;
    let inverse = &t.projection * &RationalMatrix::column(a.unit().to_vec()).kron(&RationalMatrix::identity(dm));
    Ok((t, Witness::new(forward, inverse)))
}

/// The unit isomorphism `M ⊗_B B → M`, `m ⊗ b ↦ m·b`, and its inverse.
pub fn right_unit_iso(m: &Bimodule) -> Result<(TensorProduct, Witness<RationalMatrix>), BimodError> {
    let b = m.right();
    let t = tensor_over(m, &Bimodule::regular(b))?;
    let (db, dm) = (b.dim(), m.dim());
    let act = RationalMatrix::from_fn(dm, dm * db, |k, c| m.rho[c % db].get(k, c / db).clone());
    let forward = &act * &t.section;
    let inverse = &t.projection * &RationalMatrix::identity(dm).kron(&RationalMatrix::column(b.unit().to_vec()));
    Ok((t, Witness::new(forward, inverse)))
}

/// The re-bracketing isomorphism `(M ⊗ N) ⊗ P → M ⊗ (N ⊗ P)` on quotient
/// representatives, with its inverse.
pub fn associator_iso(
    m: &Bimodule,
    n: &Bimodule,
    p: &Bimodule,
) -> Result<(Bimodule, Bimodule, Witness<RationalMatrix>), BimodError> {
    let mn = tensor_over(m, n)?;
    let mn_p = tensor_over(&mn.module, p)?;
    let np = tensor_over(n, p)?;
    let m_np = tensor_over(m, &np.module)?;
    let (im, ip) = (RationalMatrix::identity(m.dim()), RationalMatrix::identity(p.dim()));
    let forward = &(&(&m_np.projection * &im.kron(&np.projection)) * &mn.section.kron(&ip)) * &mn_p.section;
    let inverse = &(&(&mn_p.projection * &mn.projection.kron(&ip)) * &im.kron(&np.section)) * &m_np.section;
    Ok((mn_p.module, m_np.module, Witness::new(forward, inverse)))
}

/// `ALG_k` on a finite corpus: algebras, algebra maps, bimodules and
/// bimodule morphisms. 2-cells out of a bimodule are the declared cells plus
/// up to `derived_per_frame` intertwiners per frame `(N, u, v)`, read off a
/// basis of the hom space.
#[derive(Debug, Clone)]
pub struct AlgDoubleCategory {
    pub algebras: Vec<Algebra>,
    pub maps: Vec<AlgebraMap>,
    pub bimodules: Vec<Bimodule>,
    pub cells: Vec<BimoduleCell>,
    pub derived_per_frame: usize,
}

impl AlgDoubleCategory {
    pub fn new(algebras: Vec<Algebra>, maps: Vec<AlgebraMap>, bimodules: Vec<Bimodule>) -> Self {
        Self { algebras, maps, bimodules, cells: Vec::new(), derived_per_frame: 2 }
    }

    fn maps_between(&self, a: &Algebra, b: &Algebra) -> Vec<AlgebraMap> {
        let mut out: Vec<AlgebraMap> =
            self.maps.iter().filter(|f| f.source() == a && f.target() == b).cloned().collect();
        if a == b && !out.contains(&AlgebraMap::identity(a)) {
            out.insert(0, AlgebraMap::identity(a));
        }
        out
    }

    pub(crate) fn derived(&self, m: &Bimodule, n: &Bimodule, u: &AlgebraMap, v: &AlgebraMap) -> Vec<BimoduleCell> {
        let basis = hom_space(m, n, u, v);
        let mut ws: Vec<RationalMatrix> = basis.iter().take(self.derived_per_frame).cloned().collect();
        if basis.len() > 1 && ws.len() < basis.len() + 1 {
            let sum = basis.iter().skip(1).fold(basis[0].clone(), |acc, b| &acc + b);
            ws.push(sum);
        }
        ws.into_iter()
            .take(self.derived_per_frame.max(1))
            .map(|w| BimoduleCell { source: m.clone(), target: n.clone(), u: u.clone(), v: v.clone(), w })
            .collect()
    }

    /// Four algebras of dimension ≤ 3, the maps among them used below, and
    /// bimodules of dimension ≤ 3.
    pub fn standard_corpus() -> Self {
        let k = Arc::new(FinDimAlgebra::rationals());
        let d = Arc::new(FinDimAlgebra::dual_numbers());
        let s = Arc::new(FinDimAlgebra::split());
        let t = Arc::new(FinDimAlgebra::upper_triangular());
        let map = |a: &Algebra, b: &Algebra, m: &[i64]| {
            AlgebraMap::new(a, b, RationalMatrix::from_i64(b.dim(), a.dim(), m)).expect("algebra map")
        };
        let eta_d = map(&k, &d, &[1, 0]);
        let eta_s = map(&k, &s, &[1, 1]);
        let eta_t = map(&k, &t, &[1, 0, 1]);
        let eps = map(&d, &k, &[1, 0]);
        let pi1 = map(&s, &k, &[1, 0]);
        let pi2 = map(&s, &k, &[0, 1]);
        let swap = map(&s, &s, &[0, 1, 1, 0]);
        let scale = map(&d, &d, &[1, 0, 0, 2]);
        let diag = map(&t, &s, &[1, 0, 0, 0, 0, 1]);
        let incl = map(&s, &t, &[1, 0, 0, 0, 0, 1]);
        let mut maps: Vec<AlgebraMap> = [&k, &d, &s, &t].iter().map(|a| AlgebraMap::identity(a)).collect();
        maps.extend([eta_d.clone(), eta_s.clone(), eta_t, eps.clone(), pi1.clone(), pi2, swap, scale, diag, incl]);

        let e = |r: usize, c: usize| {
            RationalMatrix::from_fn(2, 2, |i, j| if (i, j) == (r, c) { Q::one() } else { Q::zero() })
        };
        let column = Bimodule::new(&t, &k, vec![e(0, 0), e(0, 1), e(1, 1)], vec![RationalMatrix::identity(2)], "col")
            .expect("column module");
        let row = Bimodule::new(
            &k,
            &t,
            vec![RationalMatrix::identity(2)],
            vec![e(0, 0), e(0, 1).transpose(), e(1, 1)],
            "row",
        )
        .expect("row module");
        let bimodules = vec![
            Bimodule::regular(&k),
            Bimodule::regular(&d),
            Bimodule::regular(&s),
            Bimodule::regular(&t),
            Bimodule::vector_space(&k, 2).expect("vector space"),
            Bimodule::vector_space(&k, 3).expect("vector space"),
            include_morph_alg(&eta_d),
            include_morph_alg(&eps),
            include_morph_alg(&eta_s),
            include_morph_alg(&pi1),
            Bimodule::regular(&d).restrict(&AlgebraMap::identity(&d), &eta_d).expect("restriction").with_label("D_D|Q"),
            column,
            row,
        ];
        Self::new(vec![k, d, s, t], maps, bimodules)
    }
}

impl DoubleCategory for AlgDoubleCategory {
    type Obj = Algebra;
    type Mor = AlgebraMap;
    type Cell1 = Bimodule;
    type Cell2 = BimoduleCell;

    fn src0(&self, f: &AlgebraMap) -> Algebra {
        f.source().clone()
    }
    fn tgt0(&self, f: &AlgebraMap) -> Algebra {
        f.target().clone()
    }
    fn id0(&self, a: &Algebra) -> AlgebraMap {
        AlgebraMap::identity(a)
    }
    fn compose0(&self, f: &AlgebraMap, g: &AlgebraMap) -> Option<AlgebraMap> {
        f.then(g)
    }
    fn d(&self, m: &Bimodule) -> Algebra {
        m.left().clone()
    }
    fn r(&self, m: &Bimodule) -> Algebra {
        m.right().clone()
    }
    fn src2(&self, a: &BimoduleCell) -> Bimodule {
        a.source.clone()
    }
    fn tgt2(&self, a: &BimoduleCell) -> Bimodule {
        a.target.clone()
    }
    fn d2(&self, a: &BimoduleCell) -> AlgebraMap {
        a.u.clone()
    }
    fn r2(&self, a: &BimoduleCell) -> AlgebraMap {
        a.v.clone()
    }
    fn id2(&self, m: &Bimodule) -> BimoduleCell {
        BimoduleCell::framed_identity(m, m, RationalMatrix::identity(m.dim()))
    }
    fn compose2(&self, a: &BimoduleCell, b: &BimoduleCell) -> Option<BimoduleCell> {
        (a.target == b.source).then(|| ())?;
        Some(BimoduleCell {
            source: a.source.clone(),
            target: b.target.clone(),
            u: a.u.then(&b.u)?,
            v: a.v.then(&b.v)?,
            w: &b.w * &a.w,
        })
    }
    fn star(&self, m: &Bimodule, n: &Bimodule) -> Option<Bimodule> {
        tensor_over(m, n).ok().map(|t| t.module)
    }
    fn star2(&self, a: &BimoduleCell, b: &BimoduleCell) -> Option<BimoduleCell> {
        if a.v != b.u {
            return None;
        }
        let src = tensor_over(&a.source, &b.source).ok()?;
        let tgt = tensor_over(&a.target, &b.target).ok()?;
        let w = &(&tgt.projection * &a.w.kron(&b.w)) * &src.section;
        Some(BimoduleCell { source: src.module, target: tgt.module, u: a.u.clone(), v: b.v.clone(), w })
    }
    fn unit(&self, a: &Algebra) -> Bimodule {
        Bimodule::regular(a)
    }
    fn unit2(&self, f: &AlgebraMap) -> BimoduleCell {
        BimoduleCell {
            source: Bimodule::regular(f.source()),
            target: Bimodule::regular(f.target()),
            u: f.clone(),
            v: f.clone(),
            w: f.matrix().clone(),
        }
    }
    fn strictness(&self) -> Strictness {
        Strictness::Weak
    }
    fn associator(&self, m: &Bimodule, n: &Bimodule, p: &Bimodule) -> Option<Witness<BimoduleCell>> {
        let (left, right, w) = associator_iso(m, n, p).ok()?;
        Some(Witness::new(
            BimoduleCell::framed_identity(&left, &right, w.forward),
            BimoduleCell::framed_identity(&right, &left, w.inverse),
        ))
    }
    fn left_unitor(&self, m: &Bimodule) -> Option<Witness<BimoduleCell>> {
        let (t, w) = left_unit_iso(m).ok()?;
        Some(Witness::new(
            BimoduleCell::framed_identity(&t.module, m, w.forward),
            BimoduleCell::framed_identity(m, &t.module, w.inverse),
        ))
    }
    fn right_unitor(&self, m: &Bimodule) -> Option<Witness<BimoduleCell>> {
        let (t, w) = right_unit_iso(m).ok()?;
        Some(Witness::new(
            BimoduleCell::framed_identity(&t.module, m, w.forward),
            BimoduleCell::framed_identity(m, &t.module, w.inverse),
        ))
    }
    fn is_valid2(&self, a: &BimoduleCell) -> bool {
        a.is_valid()
    }

    fn objects(&self) -> Vec<Algebra> {
        self.algebras.clone()
    }
    fn morphisms_from(&self, a: &Algebra) -> Vec<AlgebraMap> {
        self.algebras.iter().flat_map(|b| self.maps_between(a, b)).collect()
    }
    fn cells_from(&self, a: &Algebra) -> Vec<Bimodule> {
        self.bimodules.iter().filter(|m| m.left() == a).cloned().collect()
    }
    fn cells_into(&self, b: &Algebra) -> Vec<Bimodule> {
        self.bimodules.iter().filter(|m| m.right() == b).cloned().collect()
    }
    fn squares_from(&self, m: &Bimodule) -> Vec<BimoduleCell> {
        let mut out = vec![self.id2(m)];
        out.extend(self.cells.iter().filter(|c| &c.source == m).cloned());
        for n in &self.bimodules {
            for u in self.maps_between(m.left(), n.left()) {
                for v in self.maps_between(m.right(), n.right()) {
                    out.extend(self.derived(m, n, &u, &v));
                }
            }
        }
        out
    }
    fn squares_with_d(&self, u: &AlgebraMap) -> Vec<BimoduleCell> {
        let mut out = vec![self.unit2(u)];
        for m in self.cells_from(u.source()) {
            for n in self.cells_from(u.target()) {
                for v in self.maps_between(m.right(), n.right()) {
                    out.extend(self.derived(&m, &n, u, &v));
                }
            }
        }
        out
    }
    fn squares_with_r(&self, v: &AlgebraMap) -> Vec<BimoduleCell> {
        let mut out = vec![self.unit2(v)];
        for m in self.cells_into(v.source()) {
            for n in self.cells_into(v.target()) {
                for u in self.maps_between(m.left(), n.left()) {
                    out.extend(self.derived(&m, &n, &u, v));
                }
            }
        }
        out
    }
}

/// `Alg_k` on a corpus of algebras and maps, as an ordinary category.
#[derive(Debug, Clone)]
pub struct AlgCategory {
    pub algebras: Vec<Algebra>,
    pub maps: Vec<AlgebraMap>,
}

impl Category for AlgCategory {
    type Obj = Algebra;
    type Mor = AlgebraMap;

    fn source(&self, f: &AlgebraMap) -> Algebra {
        f.source().clone()
    }
    fn target(&self, f: &AlgebraMap) -> Algebra {
        f.target().clone()
    }
    fn identity(&self, a: &Algebra) -> AlgebraMap {
        AlgebraMap::identity(a)
    }
    fn compose(&self, f: &AlgebraMap, g: &AlgebraMap) -> Option<AlgebraMap> {
        f.then(g)
    }
    fn objects(&self) -> Vec<Algebra> {
        self.algebras.clone()
    }
    fn morphisms_from(&self, a: &Algebra) -> Vec<AlgebraMap> {
        self.maps.iter().filter(|f| f.source() == a).cloned().collect()
    }
}

/// The inclusion `Morph(Alg_k) → ALG_k`: `f ↦ include(f)`, a commutative
/// square `(u, v)` ↦ the bimodule map `v`. It preserves `∗` up to the
/// isomorphism `include(f) ⊗_B include(g) → include(f ; g)`,
/// `b ⊗ c ↦ g(b)·c`, and `ID` on the nose.
#[derive(Debug, Clone)]
pub struct MorphAlgInclusion {
    pub source: Morph<AlgCategory>,
    pub target: AlgDoubleCategory,
}

impl MorphAlgInclusion {
    pub fn new(corpus: AlgDoubleCategory) -> Self {
        let base = AlgCategory { algebras: corpus.algebras.clone(), maps: corpus.maps.clone() };
        Self { source: Morph(base), target: corpus }
    }
}

impl DoubleFunctor for MorphAlgInclusion {
    type Source = Morph<AlgCategory>;
    type Target = AlgDoubleCategory;

    fn source(&self) -> &Morph<AlgCategory> {
        &self.source
    }
    fn target(&self) -> &AlgDoubleCategory {
        &self.target
    }
    fn map_obj(&self, a: &Algebra) -> Option<Algebra> {
        Some(a.clone())
    }
    fn map_mor(&self, f: &AlgebraMap) -> Option<AlgebraMap> {
        Some(f.clone())
    }
    fn map_cell(&self, f: &AlgebraMap) -> Option<Bimodule> {
        Some(include_morph_alg(f))
    }
    fn map_square(&self, s: &Square<AlgebraMap>) -> Option<BimoduleCell> {
        Some(BimoduleCell {
            source: include_morph_alg(&s.f),
            target: include_morph_alg(&s.g),
            u: s.u.clone(),
            v: s.v.clone(),
            w: s.v.matrix().clone(),
        })
    }
    fn star_comparison(&self, f: &AlgebraMap, g: &AlgebraMap) -> Option<Witness<BimoduleCell>> {
        let (fi, gi) = (include_morph_alg(f), include_morph_alg(g));
        let composite = include_morph_alg(&f.then(g)?);
        let t = tensor_over(&fi, &gi).ok()?;
        let (b, c) = (g.source(), g.target());
        let (db, dc) = (b.dim(), c.dim());
        let mult = RationalMatrix::from_fn(dc, db * dc, |k, col| {
            let (i, j) = (col / dc, col % dc);
            c.mul(&g.apply(&b.basis(i)), &c.basis(j))[k].clone()
        });
        let forward = &mult * &t.section;
        let inverse = &t.projection * &RationalMatrix::column(b.unit().to_vec()).kron(&RationalMatrix::identity(dc));
        Some(Witness::new(
            BimoduleCell::framed_identity(&t.module, &composite, forward),
            BimoduleCell::framed_identity(&composite, &t.module, inverse),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(a: FinDimAlgebra) -> Algebra {
        Arc::new(a)
    }

    #[test]
    fn corpus_algebras_validate() {
        assert!(FinDimAlgebra::dual_numbers().is_commutative());
        assert!(!FinDimAlgebra::upper_triangular().is_commutative());
        let bad = FinDimAlgebra::from_table("bad", 1, &[2], &[1]);
        assert!(bad.is_err());
    }

    #[test]
    fn tensor_over_the_field_has_product_dimension() {
        let k = alg(FinDimAlgebra::rationals());
        let m = Bimodule::vector_space(&k, 2).unwrap();
        let n = Bimodule::vector_space(&k, 3).unwrap();
        assert_eq!(tensor_over(&m, &n).unwrap().module.dim(), 6);
    }

    #[test]
    fn dual_numbers_tensor_residue_field_is_one_dimensional() {
        let k = alg(FinDimAlgebra::rationals());
        let d = alg(FinDimAlgebra::dual_numbers());
        let eta = AlgebraMap::unit_map(&d);
        let eps = AlgebraMap::new(&d, &k, RationalMatrix::from_i64(1, 2, &[1, 0])).unwrap();
        let t = tensor_over(&include_morph_alg(&eta), &include_morph_alg(&eps)).unwrap();
        assert_eq!(t.module.dim(), 1);
        assert_eq!(&t.projection * &t.section, RationalMatrix::identity(1));
    }

    #[test]
    fn regular_action_of_x_is_the_shift() {
        let d = alg(FinDimAlgebra::dual_numbers());
        let r = Bimodule::regular(&d);
        assert_eq!(r.lambda()[1], RationalMatrix::from_i64(2, 2, &[0, 0, 1, 0]));
    }

    #[test]
    fn unit_isomorphisms_are_inverse() {
        let corpus = AlgDoubleCategory::standard_corpus();
        for m in &corpus.bimodules {
            for (t, w) in [left_unit_iso(m).unwrap(), right_unit_iso(m).unwrap()] {
                assert_eq!(t.module.dim(), m.dim(), "{m:?}");
                assert_eq!(&w.forward * &w.inverse, RationalMatrix::identity(m.dim()));
                assert_eq!(&w.inverse * &w.forward, RationalMatrix::identity(m.dim()));
            }
        }
    }

    #[test]
    fn include_identity_is_regular() {
        let d = alg(FinDimAlgebra::dual_numbers());
        assert_eq!(include_morph_alg(&AlgebraMap::identity(&d)), Bimodule::regular(&d));
    }

    #[test]
    fn non_unital_map_rejected() {
        let k = alg(FinDimAlgebra::rationals());
        let d = alg(FinDimAlgebra::dual_numbers());
        assert!(AlgebraMap::new(&k, &d, RationalMatrix::from_i64(2, 1, &[0, 1])).is_err());
    }

    #[test]
    fn hom_space_of_regular_module_is_the_centre() {
        let t = alg(FinDimAlgebra::upper_triangular());
        let r = Bimodule::regular(&t);
        let id = AlgebraMap::identity(&t);
        // Bimodule endomorphisms of A are multiplication by central elements.
        assert_eq!(hom_space(&r, &r, &id, &id).len(), 1);
    }

    #[test]
    fn alg_double_category_passes_weakly() {
        use crate::double::{check_double_category, Budget};
        let corpus = AlgDoubleCategory::standard_corpus();
        let report = check_double_category(&corpus, &Budget::sampled(60, 11)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn inclusion_is_a_pseudo_functor() {
        use crate::double::{check_double_functor, Budget};
        let inc = MorphAlgInclusion::new(AlgDoubleCategory::standard_corpus());
        let report = check_double_functor(&inc, &Budget::sampled(60, 5)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
}
