//! Morphisms with three exact backends: maps between finite sets, rational
//! matrices and supermatrices.
//!
//! **Composition order.** `compose(f, g)` is `f∘g`: `g` is applied first.
//! Matrices map column vectors, so `f∘g` is the matrix product `f·g`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grassmann::{GrassmannError, SuperDim, SuperMatrix, Supernumber};
use crate::matrix::{MatrixError, RatMatrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("cannot compose: domain {dom} of the outer map differs from codomain {cod} of the inner map")]
    DomainMismatch { dom: FinObject, cod: FinObject },
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("search space of {candidates} candidates exceeds the bound {bound}")]
    SearchSpaceTooLarge { candidates: String, bound: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

/// Which kind of arrow a morphism is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[serde(rename = "finmap")]
    FinMap,
    Rat,
    Super,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::FinMap => "finmap",
            Backend::Rat => "rat",
            Backend::Super => "super",
        })
    }
}

/// An object: a finite set `{0..size}`, the space `ℚ^dim`, or the free
/// module of superdimension `(even|odd)` over the Grassmann algebra on
/// `generators` generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum FinObject {
    #[serde(rename = "finmap")]
    Set {
        size: usize,
    },
    Rat {
        dim: usize,
    },
    Super {
        even: usize,
        odd: usize,
        generators: usize,
    },
}

impl FinObject {
    pub fn set(size: usize) -> Self {
        FinObject::Set { size }
    }

    pub fn vector(dim: usize) -> Self {
        FinObject::Rat { dim }
    }

    pub fn superspace(dim: SuperDim, generators: usize) -> Self {
        FinObject::Super {
            even: dim.even,
            odd: dim.odd,
            generators,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            FinObject::Set { .. } => Backend::FinMap,
            FinObject::Rat { .. } => Backend::Rat,
            FinObject::Super { .. } => Backend::Super,
        }
    }

    /// Number of elements or basis vectors.
    pub fn size(&self) -> usize {
        match *self {
            FinObject::Set { size } => size,
            FinObject::Rat { dim } => dim,
            FinObject::Super { even, odd, .. } => even + odd,
        }
    }

    pub fn super_dim(&self) -> Option<SuperDim> {
        match *self {
            FinObject::Super { even, odd, .. } => Some(SuperDim::new(even, odd)),
            _ => None,
        }
    }

    /// Unit object of the strict monoidal structure of this backend.
    pub fn unit(backend: Backend) -> Result<Self, MorphismError> {
        match backend {
            Backend::FinMap => Ok(FinObject::set(1)),
            Backend::Rat => Ok(FinObject::vector(1)),
            Backend::Super => Err(MorphismError::Unsupported("tensor products of supermodules".into())),
        }
    }

    /// Cartesian product of sets, tensor product of vector spaces.
    pub fn tensor(&self, other: &FinObject) -> Result<FinObject, MorphismError> {
        match (self, other) {
            (FinObject::Set { size: a }, FinObject::Set { size: b }) => Ok(FinObject::set(a * b)),
            (FinObject::Rat { dim: a }, FinObject::Rat { dim: b }) => Ok(FinObject::vector(a * b)),
            (FinObject::Super { .. }, FinObject::Super { .. }) => {
                Err(MorphismError::Unsupported("tensor products of supermodules".into()))
            }
            _ => Err(MorphismError::BackendMismatch(self.backend(), other.backend())),
        }
    }
}

impl fmt::Display for FinObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinObject::Set { size } => write!(f, "Set({size})"),
            FinObject::Rat { dim } => write!(f, "Q^{dim}"),
            FinObject::Super { even, odd, generators } => write!(f, "Λ{generators}^({even}|{odd})"),
        }
    }
}

/// The data of a morphism.
///
/// A map table sends element `i` of the domain to `table[i]`. Matrices have
/// one row per codomain basis vector and one column per domain basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Map(Vec<usize>),
    Rat(RatMatrix),
    Super(SuperMatrix),
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    dom: FinObject,
    cod: FinObject,
    payload: Payload,
}

/// An arrow `dom → cod`. Fields are validated on construction; canonical
/// order compares payloads first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MorphismRepr", into = "MorphismRepr")]
pub struct Morphism {
    payload: Payload,
    dom: FinObject,
    cod: FinObject,
}

impl TryFrom<MorphismRepr> for Morphism {
    type Error = MorphismError;

    fn try_from(r: MorphismRepr) -> Result<Self, Self::Error> {
        Morphism::new(r.dom, r.cod, r.payload)
    }
}

impl From<Morphism> for MorphismRepr {
    fn from(m: Morphism) -> Self {
        MorphismRepr {
            dom: m.dom,
            cod: m.cod,
            payload: m.payload,
        }
    }
}

impl Morphism {
    pub fn new(dom: FinObject, cod: FinObject, payload: Payload) -> Result<Self, MorphismError> {
        let invalid = |msg: String| Err(MorphismError::InvalidPayload(msg));
        match (&dom, &cod, &payload) {
            (FinObject::Set { size: d }, FinObject::Set { size: c }, Payload::Map(t)) => {
                if t.len() != *d {
                    return invalid(format!("table has {} entries, domain has {d}", t.len()));
                }
                if let Some(bad) = t.iter().find(|&&v| v >= *c) {
                    return invalid(format!("table entry {bad} outside codomain of size {c}"));
                }
            }
            (FinObject::Rat { dim: d }, FinObject::Rat { dim: c }, Payload::Rat(m)) => {
                if m.shape() != (*c, *d) {
                    return invalid(format!("matrix is {}x{}, expected {c}x{d}", m.rows(), m.cols()));
                }
            }
            (FinObject::Super { generators: gd, .. }, FinObject::Super { generators: gc, .. }, Payload::Super(m)) => {
                if gd != gc || m.generators() != *gd {
                    return invalid("generator counts disagree".into());
                }
                if Some(m.rows()) != cod.super_dim() || Some(m.cols()) != dom.super_dim() {
                    return invalid(format!(
                        "supermatrix is {}x{}, expected {cod}←{dom}",
                        m.rows(),
                        m.cols()
                    ));
                }
            }
            _ if dom.backend() != cod.backend() => {
                return Err(MorphismError::BackendMismatch(dom.backend(), cod.backend()))
            }
            _ => return invalid("payload does not match the object backend".into()),
        }
        Ok(Morphism { payload, dom, cod })
    }

    /// Map between finite sets given by its table.
    pub fn fin_map(dom_size: usize, cod_size: usize, table: Vec<usize>) -> Result<Self, MorphismError> {
        Self::new(FinObject::set(dom_size), FinObject::set(cod_size), Payload::Map(table))
    }

    /// Endomap of `{0..table.len()}`.
    pub fn endo_map(table: Vec<usize>) -> Result<Self, MorphismError> {
        let n = table.len();
        Self::fin_map(n, n, table)
    }

    pub fn rat(m: RatMatrix) -> Self {
        Morphism {
            dom: FinObject::vector(m.cols()),
            cod: FinObject::vector(m.rows()),
            payload: Payload::Rat(m),
        }
    }

    pub fn supermatrix(m: SuperMatrix) -> Self {
        Morphism {
            dom: FinObject::superspace(m.cols(), m.generators()),
            cod: FinObject::superspace(m.rows(), m.generators()),
            payload: Payload::Super(m),
        }
    }

    pub fn identity(obj: &FinObject) -> Self {
        let payload = match *obj {
            FinObject::Set { size } => Payload::Map((0..size).collect()),
            FinObject::Rat { dim } => Payload::Rat(RatMatrix::identity(dim)),
            FinObject::Super { even, odd, generators } => {
                Payload::Super(SuperMatrix::identity(SuperDim::new(even, odd), generators))
            }
        };
        Morphism {
            payload,
            dom: *obj,
            cod: *obj,
        }
    }

    pub fn dom(&self) -> &FinObject {
        &self.dom
    }

    pub fn cod(&self) -> &FinObject {
        &self.cod
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn backend(&self) -> Backend {
        self.dom.backend()
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.payload {
            Payload::Map(t) => Some(t),
            _ => None,
        }
    }

    pub fn rat_matrix(&self) -> Option<&RatMatrix> {
        match &self.payload {
            Payload::Rat(m) => Some(m),
            _ => None,
        }
    }

    pub fn super_matrix(&self) -> Option<&SuperMatrix> {
        match &self.payload {
            Payload::Super(m) => Some(m),
            _ => None,
        }
    }

    /// `self∘g`.
    pub fn after(&self, g: &Morphism) -> Result<Morphism, MorphismError> {
        compose(self, g)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && *self == Morphism::identity(&self.dom)
    }

    /// The inverse, when one exists.
    pub fn inverse(&self) -> Option<Morphism> {
        if self.dom.backend() != self.cod.backend() || self.dom.size() != self.cod.size() {
            return None;
        }
        let payload = match &self.payload {
            Payload::Map(t) => {
                let mut inv = vec![usize::MAX; t.len()];
                for (i, &v) in t.iter().enumerate() {
                    if inv[v] != usize::MAX {
                        return None;
                    }
                    inv[v] = i;
                }
                Payload::Map(inv)
            }
            Payload::Rat(m) => Payload::Rat(m.inverse()?),
            Payload::Super(m) => Payload::Super(m.inverse()?),
        };
        Some(Morphism {
            payload,
            dom: self.cod,
            cod: self.dom,
        })
    }

    /// `self ⊗ other`: product map on index pairs `x·|Y| + y`, or the
    /// Kronecker product of matrices.
    pub fn tensor(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        let dom = self.dom.tensor(&other.dom)?;
        let cod = self.cod.tensor(&other.cod)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Map(f), Payload::Map(g)) => {
                let gc = other.cod.size();
                Payload::Map(f.iter().flat_map(|&fx| g.iter().map(move |&gy| fx * gc + gy)).collect())
            }
            (Payload::Rat(f), Payload::Rat(g)) => Payload::Rat(f.kron(g)),
            _ => unreachable!("object tensor already rejected other backends"),
        };
        Ok(Morphism { payload, dom, cod })
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Map(t) => {
                write!(f, "[")?;
                for (i, v) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")?;
                if self.dom.size() != self.cod.size() || t.is_empty() {
                    write!(f, ":{}->{}", self.dom.size(), self.cod.size())?;
                }
                Ok(())
            }
            Payload::Rat(m) => {
                write!(f, "[")?;
                for (i, row) in m.row_vecs().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "[")?;
                    for (j, q) in row.iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", rational::Display(q))?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]:{}->{}", self.dom, self.cod)
            }
            Payload::Super(m) => write!(f, "{m:?}"),
        }
    }
}

/// `f∘g` (apply `g`, then `f`).
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism, MorphismError> {
    if f.dom != g.cod {
        return Err(MorphismError::DomainMismatch { dom: f.dom, cod: g.cod });
    }
    let payload = match (&f.payload, &g.payload) {
        (Payload::Map(ft), Payload::Map(gt)) => Payload::Map(gt.iter().map(|&i| ft[i]).collect()),
        (Payload::Rat(fm), Payload::Rat(gm)) => Payload::Rat(fm.mul(gm)?),
        (Payload::Super(fm), Payload::Super(gm)) => Payload::Super(fm.mul(gm)?),
        _ => unreachable!("equal objects imply equal backends"),
    };
    Ok(Morphism {
        payload,
        dom: g.dom,
        cod: f.cod,
    })
}

/// Composite of a path given in application order: `legs[k-1]∘…∘legs[0]`.
pub fn compose_path<'a, I>(legs: I) -> Result<Morphism, MorphismError>
where
    I: IntoIterator<Item = &'a Morphism>,
{
    let mut iter = legs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| MorphismError::InvalidPayload("empty path".into()))?
        .clone();
    iter.try_fold(first, |acc, leg| compose(leg, &acc))
}

/// `Some(inverse)` iff `f` is invertible.
pub fn is_invertible(f: &Morphism) -> Option<Morphism> {
    f.inverse()
}

/// `f∘g∘f = f`.
pub fn is_regular_pair(f: &Morphism, g: &Morphism) -> Result<bool, MorphismError> {
    Ok(compose(f, &compose(g, f)?)? == *f)
}

/// Limits for brute-force enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest candidate count any single enumeration may visit.
    pub max_candidates: u64,
    /// Coefficients tried for each matrix entry (matrix backends).
    #[serde(with = "rational_vec")]
    pub grid: Vec<Rational>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_candidates: 1 << 20,
            grid: vec![rational::int(-1), rational::int(0), rational::int(1)],
        }
    }
}

impl SearchBounds {
    pub fn with_max(max_candidates: u64) -> Self {
        SearchBounds {
            max_candidates,
            ..Self::default()
        }
    }

    /// Fails unless `base^exp` candidates fit in the bound.
    pub fn check(&self, base: usize, exp: usize) -> Result<u64, MorphismError> {
        let count = (base as u128)
            .checked_pow(exp as u32)
            .filter(|c| *c <= self.max_candidates as u128);
        match count {
            Some(c) => Ok(c as u64),
            None => Err(MorphismError::SearchSpaceTooLarge {
                candidates: if base <= 1 {
                    base.to_string()
                } else {
                    format!("{base}^{exp}")
                },
                bound: self.max_candidates,
            }),
        }
    }

    fn sorted_grid(&self) -> Vec<Rational> {
        let mut g = self.grid.clone();
        g.sort();
        g.dedup();
        g
    }
}

mod rational_vec {
    use super::*;
    use crate::rational::RationalRepr;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(RationalRepr::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalRepr>::deserialize(d)?
            .into_iter()
            .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Odometer over `digits^len` sequences in lexicographic order.
struct Odometer {
    digits: usize,
    state: Option<Vec<usize>>,
}

impl Odometer {
    fn new(digits: usize, len: usize) -> Self {
        let state = if digits == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Odometer { digits, state }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        let state = self.state.as_mut().expect("checked above");
        let mut pos = state.len();
        loop {
            if pos == 0 {
                self.state = None;
                break;
            }
            pos -= 1;
            state[pos] += 1;
            if state[pos] < self.digits {
                break;
            }
            state[pos] = 0;
        }
        Some(current)
    }
}

/// Every morphism `x → y`, in canonical order.
pub struct MorphismIter {
    dom: FinObject,
    cod: FinObject,
    grid: Vec<Rational>,
    supergrid: Vec<Supernumber>,
    odometer: Odometer,
}

impl Iterator for MorphismIter {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        let digits = self.odometer.next()?;
        let payload = match (self.dom, self.cod) {
            (FinObject::Set { .. }, _) => Payload::Map(digits),
            (FinObject::Rat { dim: c }, FinObject::Rat { dim: r }) => Payload::Rat(
                RatMatrix::new(r, c, digits.into_iter().map(|d| self.grid[d].clone()).collect())
                    .expect("shape matches"),
            ),
            (FinObject::Super { generators, .. }, _) => Payload::Super(
                SuperMatrix::new(
                    self.cod.super_dim().expect("super object"),
                    self.dom.super_dim().expect("super object"),
                    generators,
                    digits.into_iter().map(|d| self.supergrid[d].clone()).collect(),
                )
                .expect("shape matches"),
            ),
            _ => unreachable!("backends checked at construction"),
        };
        Some(Morphism {
            payload,
            dom: self.dom,
            cod: self.cod,
        })
    }
}

/// All morphisms `x → y`: every map table for finite sets, or every matrix
/// with entries from the coefficient grid for the matrix backends.
pub fn enumerate_morphisms(x: &FinObject, y: &FinObject, bounds: &SearchBounds) -> Result<MorphismIter, MorphismError> {
    if x.backend() != y.backend() {
        return Err(MorphismError::BackendMismatch(x.backend(), y.backend()));
    }
    let grid = bounds.sorted_grid();
    let (digits, len) = match (x, y) {
        (FinObject::Set { size: d }, FinObject::Set { size: c }) => (*c, *d),
        (FinObject::Super { generators: gx, .. }, FinObject::Super { generators: gy, .. }) if gx != gy => {
            return Err(MorphismError::InvalidPayload("generator counts disagree".into()))
        }
        _ => (grid.len(), x.size() * y.size()),
    };
    bounds.check(digits, len)?;
    let generators = match *x {
        FinObject::Super { generators, .. } => generators,
        _ => 0,
    };
    let mut supergrid: Vec<Supernumber> = if x.backend() == Backend::Super {
        grid.iter()
            .map(|q| Supernumber::scalar(generators, q.clone()))
            .collect()
    } else {
        Vec::new()
    };
    supergrid.sort();
    Ok(MorphismIter {
        dom: *x,
        cod: *y,
        grid,
        supergrid,
        odometer: Odometer::new(digits, len),
    })
}

/// Every `g` with `f∘g∘f = f`, in canonical order.
pub fn generalized_inverses(f: &Morphism, bounds: &SearchBounds) -> Result<Vec<Morphism>, MorphismError> {
    let mut out = Vec::new();
    for g in enumerate_morphisms(f.cod(), f.dom(), bounds)? {
        if is_regular_pair(f, &g)? {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(t: &[usize]) -> Morphism {
        Morphism::endo_map(t.to_vec()).unwrap()
    }

    #[test]
    fn composition_examples() {
        let f = m(&[0, 0]);
        assert_eq!(compose(&f, &Morphism::identity(f.dom())).unwrap(), f);
        assert_eq!(compose(&f, &m(&[1, 0])).unwrap(), m(&[0, 0]));
        let a = Morphism::rat(RatMatrix::from_ints(&[[1, 1], [0, 1]]));
        let b = Morphism::rat(RatMatrix::from_ints(&[[1, 0], [1, 1]]));
        assert_eq!(
            compose(&a, &b).unwrap(),
            Morphism::rat(RatMatrix::from_ints(&[[2, 1], [1, 1]]))
        );
    }

    #[test]
    fn composition_applies_right_argument_first() {
        let g = Morphism::fin_map(2, 3, vec![2, 0]).unwrap();
        let f = Morphism::fin_map(3, 1, vec![0, 0, 0]).unwrap();
        let fg = compose(&f, &g).unwrap();
        assert_eq!(fg.dom(), &FinObject::set(2));
        assert_eq!(fg.cod(), &FinObject::set(1));
        assert!(matches!(compose(&g, &f), Err(MorphismError::DomainMismatch { .. })));
    }

    #[test]
    fn invertibility_examples() {
        let id = Morphism::identity(&FinObject::set(3));
        assert_eq!(id.inverse(), Some(id.clone()));
        assert_eq!(m(&[0, 0]).inverse(), None);
        let cyc = m(&[1, 2, 0]);
        let inv = cyc.inverse().unwrap();
        assert!(compose(&cyc, &inv).unwrap().is_identity());
        let t12 = Supernumber::monomial(2, &[1, 2], int(1)).unwrap();
        let one = Supernumber::one(2);
        let s = SuperMatrix::square(SuperDim::new(1, 0), 2, vec![vec![&one + &t12]]).unwrap();
        let inv = Morphism::supermatrix(s).inverse().unwrap();
        assert_eq!(inv.super_matrix().unwrap().get(0, 0), &(&one - &t12));
    }

    #[test]
    fn regular_pair_examples() {
        let c = m(&[0, 0]);
        let all: Vec<_> = enumerate_morphisms(c.dom(), c.dom(), &SearchBounds::default())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|g| is_regular_pair(&c, g).unwrap()));
        let s = m(&[1, 0]);
        assert!(is_regular_pair(&s, &s.inverse().unwrap()).unwrap());
    }

    #[test]
    fn generalized_inverse_examples() {
        let b = SearchBounds::default();
        let id = Morphism::identity(&FinObject::set(2));
        assert_eq!(generalized_inverses(&id, &b).unwrap(), vec![id.clone()]);
        assert_eq!(generalized_inverses(&m(&[0, 0]), &b).unwrap().len(), 4);
        // oracle: f=[0,1,1] needs g(0)=0 and g(1)∈{1,2}; g(2) is free
        let f = m(&[0, 1, 1]);
        let mut expected = Vec::new();
        for g1 in [1, 2] {
            for g2 in 0..3 {
                expected.push(m(&[0, g1, g2]));
            }
        }
        expected.sort();
        assert_eq!(generalized_inverses(&f, &b).unwrap(), expected);
    }

    #[test]
    fn enumeration_counts_and_order() {
        let b = SearchBounds::default();
        assert_eq!(
            enumerate_morphisms(&FinObject::set(2), &FinObject::set(2), &b)
                .unwrap()
                .count(),
            4
        );
        assert_eq!(
            enumerate_morphisms(&FinObject::set(3), &FinObject::set(2), &b)
                .unwrap()
                .count(),
            8
        );
        let v: Vec<_> = enumerate_morphisms(&FinObject::vector(1), &FinObject::vector(1), &b)
            .unwrap()
            .collect();
        assert_eq!(v.len(), 3);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
        assert_eq!(
            enumerate_morphisms(&FinObject::set(0), &FinObject::set(0), &b)
                .unwrap()
                .count(),
            1
        );
        assert_eq!(
            enumerate_morphisms(&FinObject::set(2), &FinObject::set(0), &b)
                .unwrap()
                .count(),
            0
        );
        let s = FinObject::superspace(SuperDim::new(1, 1), 2);
        let v: Vec<_> = enumerate_morphisms(&s, &s, &b).unwrap().collect();
        assert_eq!(v.len(), 81);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
    }

    #[test]
    fn enumeration_respects_bound() {
        let err = enumerate_morphisms(&FinObject::set(8), &FinObject::set(8), &SearchBounds::with_max(1000));
        assert!(matches!(err, Err(MorphismError::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn noncancellative_witness() {
        let f = m(&[0, 0]);
        let b = SearchBounds::default();
        let maps: Vec<_> = enumerate_morphisms(f.dom(), f.dom(), &b).unwrap().collect();
        let witness = maps
            .iter()
            .flat_map(|u| maps.iter().map(move |v| (u, v)))
            .find(|(u, v)| u != v && compose(&f, u).unwrap() == compose(&f, v).unwrap());
        assert!(witness.is_some());
    }

    #[test]
    fn tensor_of_maps_uses_row_major_pairs() {
        let f = Morphism::fin_map(2, 3, vec![2, 0]).unwrap();
        let g = Morphism::fin_map(2, 2, vec![1, 1]).unwrap();
        let fg = f.tensor(&g).unwrap();
        // (x, y) ↦ (f x, g y) at index fx·2 + gy
        assert_eq!(fg.table().unwrap(), &[5, 5, 1, 1]);
        assert_eq!(fg.cod(), &FinObject::set(6));
    }

    #[test]
    fn validation_rejects_bad_payloads() {
        assert!(Morphism::fin_map(2, 2, vec![0, 2]).is_err());
        assert!(Morphism::fin_map(2, 2, vec![0]).is_err());
        assert!(Morphism::new(FinObject::set(1), FinObject::vector(1), Payload::Map(vec![0])).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let f = Morphism::fin_map(3, 2, vec![0, 1, 1]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"dom":{"backend":"finmap","size":3},"cod":{"backend":"finmap","size":2},"payload":[0,1,1]}"#
        );
        assert_eq!(serde_json::from_str::<Morphism>(&json).unwrap(), f);
        let r = Morphism::rat(RatMatrix::from_ints(&[[1, 2]]));
        let back: Morphism = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let bad = r#"{"dom":{"backend":"finmap","size":1},"cod":{"backend":"finmap","size":1},"payload":[3]}"#;
        assert!(serde_json::from_str::<Morphism>(bad).is_err());
    }
}
