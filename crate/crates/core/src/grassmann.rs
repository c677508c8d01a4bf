//! Finite-dimensional Grassmann algebras with exact rational coefficients,
//! supermatrices over them, the Berezinian and orientation classes.
//!
//! Generators are numbered `1..=N`. A monomial `θ_{i1} θ_{i2} … θ_{ik}` with
//! `i1 < i2 < … < ik` is stored as a bitmask; products of monomials pick up the
//! sign of the permutation that merges the two index lists, and vanish when a
//! generator repeats.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::RatMatrix;
use crate::rational::{self, Rational, RationalRepr};

/// Upper bound on the number of generators of a single algebra.
pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrassmannError {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },
    #[error("generator index {index} outside 1..={generators}")]
    GeneratorOutOfRange { index: usize, generators: usize },
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("supernumber has zero body and is not invertible")]
    NotInvertible,
    #[error("supermatrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("supermatrix is not square ({rows} rows, {cols} columns)")]
    NotSquare { rows: SuperDim, cols: SuperDim },
    #[error("supermatrix is not graded")]
    NotGraded,
    #[error("D block has singular body determinant")]
    DBlockSingular,
}

/// A Grassmann monomial as a set of generator indices (bit `i-1` ↔ `θ_i`).
///
/// Ordered by degree first, then lexicographically on the sorted index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u32) -> Self {
        Monomial(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    /// Sorted, 1-based generator indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Product of two monomials: `None` if a generator repeats, otherwise the
    /// merged monomial and whether the merge permutation is odd.
    pub fn product(self, other: Monomial) -> Option<(Monomial, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((Monomial(self.0 | other.0), swaps % 2 == 1))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "θ{i}")?;
        }
        Ok(())
    }
}

/// Parity of a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// An element of the Grassmann algebra on `generators` generators.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// algebra elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Supernumber {
    generators: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Supernumber {
    pub fn zero(generators: usize) -> Self {
        Self {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(generators: usize) -> Self {
        Self::scalar(generators, Rational::one())
    }

    pub fn scalar(generators: usize, value: Rational) -> Self {
        let mut s = Self::zero(generators);
        s.add_term(Monomial::ONE, value);
        s
    }

    /// The generator `θ_index` (1-based).
    pub fn generator(generators: usize, index: usize) -> Result<Self, GrassmannError> {
        Self::monomial(generators, &[index], Rational::one())
    }

    /// `coeff · θ_{i1} θ_{i2} …` for an arbitrary (not necessarily sorted)
    /// index list; reordering contributes the permutation sign and a repeated
    /// index gives zero.
    pub fn monomial(generators: usize, indices: &[usize], coeff: Rational) -> Result<Self, GrassmannError> {
        check_generators(generators)?;
        let mut mono = Monomial::ONE;
        let mut negate = false;
        for &i in indices {
            if i == 0 || i > generators {
                return Err(GrassmannError::GeneratorOutOfRange { index: i, generators });
            }
            match mono.product(Monomial(1 << (i - 1))) {
                Some((m, odd)) => {
                    mono = m;
                    negate ^= odd;
                }
                None => return Ok(Self::zero(generators)),
            }
        }
        let mut s = Self::zero(generators);
        s.add_term(mono, if negate { -coeff } else { coeff });
        Ok(s)
    }

    /// Builds a supernumber from `(index list, coefficient)` pairs.
    pub fn from_terms<I>(generators: usize, terms: I) -> Result<Self, GrassmannError>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        let mut s = Self::zero(generators);
        for (idx, c) in terms {
            s = &s + &Self::monomial(generators, &idx, c)?;
        }
        check_generators(generators)?;
        Ok(s)
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mono: Monomial) -> Rational {
        self.terms.get(&mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient of the empty monomial.
    pub fn body(&self) -> Rational {
        self.coefficient(Monomial::ONE)
    }

    /// Everything except the body.
    pub fn soul(&self) -> Supernumber {
        let mut s = self.clone();
        s.terms.remove(&Monomial::ONE);
        s
    }

    /// `(body, soul)` with `self = body + soul`.
    pub fn body_soul(&self) -> (Rational, Supernumber) {
        (self.body(), self.soul())
    }

    /// `Some(parity)` when every present monomial has that parity; zero
    /// counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut odd = None;
        for m in self.terms.keys() {
            match odd {
                None => odd = Some(m.is_odd()),
                Some(o) if o != m.is_odd() => return None,
                _ => {}
            }
        }
        Some(if odd == Some(true) { Parity::Odd } else { Parity::Even })
    }

    pub fn is_homogeneous_of(&self, parity: Parity) -> bool {
        self.is_zero() || self.parity() == Some(parity)
    }

    pub fn scale(&self, k: &Rational) -> Supernumber {
        if k.is_zero() {
            return Self::zero(self.generators);
        }
        Supernumber {
            generators: self.generators,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Supernumber {
        let mut acc = Self::one(self.generators);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn check_generators(generators: usize) -> Result<(), GrassmannError> {
    if generators > MAX_GENERATORS {
        Err(GrassmannError::TooManyGenerators(generators))
    } else {
        Ok(())
    }
}

fn check_same(a: &Supernumber, b: &Supernumber) -> Result<(), GrassmannError> {
    if a.generators != b.generators {
        Err(GrassmannError::GeneratorMismatch {
            left: a.generators,
            right: b.generators,
        })
    } else {
        Ok(())
    }
}

/// Grassmann product.
pub fn gmul(a: &Supernumber, b: &Supernumber) -> Result<Supernumber, GrassmannError> {
    check_same(a, b)?;
    let mut out = Supernumber::zero(a.generators);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((m, odd)) = ma.product(*mb) {
                let c = ca * cb;
                out.add_term(m, if odd { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// `(body, soul)` decomposition.
pub fn body_soul(a: &Supernumber) -> (Rational, Supernumber) {
    a.body_soul()
}

/// Inverse of a supernumber with nonzero body, via the terminating series
/// `b⁻¹ Σ_k (−s/b)^k`.
pub fn ginv(a: &Supernumber) -> Result<Supernumber, GrassmannError> {
    let (body, soul) = a.body_soul();
    if body.is_zero() {
        return Err(GrassmannError::NotInvertible);
    }
    let b_inv = body.recip();
    let step = soul.scale(&-b_inv.clone());
    let mut term = Supernumber::one(a.generators);
    let mut sum = Supernumber::zero(a.generators);
    while !term.is_zero() {
        sum = &sum + &term;
        term = &term * &step;
    }
    Ok(sum.scale(&b_inv))
}

/// Smallest `k ≥ 1` with `a^k = 0`; `None` when the body is nonzero.
pub fn nilpotency_index(a: &Supernumber) -> Option<usize> {
    if a.is_zero() {
        return Some(1);
    }
    if !a.body().is_zero() {
        return None;
    }
    let mut power = a.clone();
    let mut k = 1;
    while !power.is_zero() {
        power = &power * a;
        k += 1;
    }
    Some(k)
}

impl Add for &Supernumber {
    type Output = Supernumber;

    /// Panics if the generator counts differ.
    fn add(self, rhs: &Supernumber) -> Supernumber {
        check_same(self, rhs).expect("supernumber addition");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Supernumber {
    type Output = Supernumber;

    fn sub(self, rhs: &Supernumber) -> Supernumber {
        self + &(-rhs)
    }
}

impl Neg for &Supernumber {
    type Output = Supernumber;

    fn neg(self) -> Supernumber {
        Supernumber {
            generators: self.generators,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &Supernumber {
    type Output = Supernumber;

    /// Panics if the generator counts differ; use [`gmul`] for a checked product.
    fn mul(self, rhs: &Supernumber) -> Supernumber {
        gmul(self, rhs).expect("supernumber product")
    }
}

impl fmt::Debug for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{}", rational::Display(c))?;
            } else if c.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "({}){m:?}", rational::Display(c))?;
            }
        }
        Ok(())
    }
}

/// Wire form: `{"generators": N, "terms": [[[i, j, ..], num, den], ..]}`.
#[derive(Serialize, Deserialize)]
struct SupernumberRepr {
    generators: usize,
    terms: Vec<(Vec<usize>, RationalRepr, RationalRepr)>,
}

impl Serialize for Supernumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    m.indices(),
                    RationalRepr::from(&Rational::from_integer(c.numer().clone())),
                    RationalRepr::from(&Rational::from_integer(c.denom().clone())),
                )
            })
            .collect();
        SupernumberRepr {
            generators: self.generators,
            terms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Supernumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SupernumberRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (idx, num, den) in repr.terms {
            let num = Rational::try_from(num).map_err(D::Error::custom)?;
            let den = Rational::try_from(den).map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((idx, num / den));
        }
        Supernumber::from_terms(repr.generators, terms).map_err(D::Error::custom)
    }
}

/// Super-dimension `(even | odd)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperDim {
    pub even: usize,
    pub odd: usize,
}

impl SuperDim {
    pub fn new(even: usize, odd: usize) -> Self {
        Self { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }

    /// Parity of the basis vector at `index`: the first `even` are even.
    pub fn parity_of(self, index: usize) -> Parity {
        if index < self.even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for SuperDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

/// A matrix of supernumbers mapping a `cols`-superdimensional free module to a
/// `rows`-superdimensional one. For square matrices the blocks are
/// `A` (even×even), `B` (even×odd), `C` (odd×even), `D` (odd×odd).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperMatrix {
    rows: SuperDim,
    cols: SuperDim,
    generators: usize,
    entries: Vec<Supernumber>,
}

impl SuperMatrix {
    pub fn new(
        rows: SuperDim,
        cols: SuperDim,
        generators: usize,
        entries: Vec<Supernumber>,
    ) -> Result<Self, GrassmannError> {
        check_generators(generators)?;
        if entries.len() != rows.total() * cols.total() {
            return Err(GrassmannError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} supermatrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.generators != generators) {
            return Err(GrassmannError::GeneratorMismatch {
                left: generators,
                right: e.generators,
            });
        }
        Ok(Self {
            rows,
            cols,
            generators,
            entries,
        })
    }

    /// Square supermatrix of superdimension `dim` from row vectors.
    pub fn square(dim: SuperDim, generators: usize, rows: Vec<Vec<Supernumber>>) -> Result<Self, GrassmannError> {
        if rows.len() != dim.total() || rows.iter().any(|r| r.len() != dim.total()) {
            return Err(GrassmannError::ShapeMismatch(format!(
                "rows do not form a {}x{} array",
                dim.total(),
                dim.total()
            )));
        }
        Self::new(dim, dim, generators, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: SuperDim, cols: SuperDim, generators: usize) -> Self {
        Self {
            rows,
            cols,
            generators,
            entries: vec![Supernumber::zero(generators); rows.total() * cols.total()],
        }
    }

    pub fn identity(dim: SuperDim, generators: usize) -> Self {
        let mut m = Self::zeros(dim, dim, generators);
        for i in 0..dim.total() {
            m.entries[i * dim.total() + i] = Supernumber::one(generators);
        }
        m
    }

    /// Embeds a rational matrix as pure-body entries.
    pub fn from_body(rows: SuperDim, cols: SuperDim, generators: usize, body: &RatMatrix) -> Self {
        let entries = body
            .data()
            .iter()
            .map(|q| Supernumber::scalar(generators, q.clone()))
            .collect();
        Self {
            rows,
            cols,
            generators,
            entries,
        }
    }

    pub fn rows(&self) -> SuperDim {
        self.rows
    }

    pub fn cols(&self) -> SuperDim {
        self.cols
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn get(&self, i: usize, j: usize) -> &Supernumber {
        &self.entries[i * self.cols.total() + j]
    }

    pub fn entries(&self) -> &[Supernumber] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<Supernumber>> {
        let c = self.cols.total();
        (0..self.rows.total())
            .map(|i| self.entries[i * c..(i + 1) * c].to_vec())
            .collect()
    }

    /// Entries in even/even and odd/odd positions are even, the rest odd.
    pub fn is_graded(&self) -> bool {
        (0..self.rows.total()).all(|i| {
            (0..self.cols.total()).all(|j| {
                let want = if self.rows.parity_of(i) == self.cols.parity_of(j) {
                    Parity::Even
                } else {
                    Parity::Odd
                };
                self.get(i, j).is_homogeneous_of(want)
            })
        })
    }

    pub fn body_matrix(&self) -> RatMatrix {
        RatMatrix::new(
            self.rows.total(),
            self.cols.total(),
            self.entries.iter().map(Supernumber::body).collect(),
        )
        .expect("shape is consistent")
    }

    pub fn mul(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, GrassmannError> {
        if self.cols != rhs.rows {
            return Err(GrassmannError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.generators != rhs.generators {
            return Err(GrassmannError::GeneratorMismatch {
                left: self.generators,
                right: rhs.generators,
            });
        }
        let n = self.cols.total();
        let mut out = SuperMatrix::zeros(self.rows, rhs.cols, self.generators);
        for i in 0..self.rows.total() {
            for j in 0..rhs.cols.total() {
                let mut acc = Supernumber::zero(self.generators);
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.entries[i * rhs.cols.total() + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, GrassmannError> {
        if self.rows != rhs.rows || self.cols != rhs.cols || self.generators != rhs.generators {
            return Err(GrassmannError::ShapeMismatch("addition of unlike supermatrices".into()));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(SuperMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, GrassmannError> {
        let neg = SuperMatrix {
            entries: rhs.entries.iter().map(|e| -e).collect(),
            ..rhs.clone()
        };
        self.add(&neg)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Supernumber::is_zero)
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<Supernumber>> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// `(A, B, C, D)` blocks of a square supermatrix.
    #[allow(clippy::type_complexity)]
    pub fn blocks(
        &self,
    ) -> Result<
        (
            Vec<Vec<Supernumber>>,
            Vec<Vec<Supernumber>>,
            Vec<Vec<Supernumber>>,
            Vec<Vec<Supernumber>>,
        ),
        GrassmannError,
    > {
        if self.rows != self.cols {
            return Err(GrassmannError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let p = self.rows.even;
        let t = self.rows.total();
        Ok((
            self.block(0..p, 0..p),
            self.block(0..p, p..t),
            self.block(p..t, 0..p),
            self.block(p..t, p..t),
        ))
    }

    /// Inverse when the body matrix is invertible: with `M = M₀ + S`,
    /// `M⁻¹ = Σ_k (−M₀⁻¹ S)^k M₀⁻¹`, which terminates because the entries of
    /// `S` are nilpotent.
    pub fn inverse(&self) -> Option<SuperMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let body = self.body_matrix();
        let body_inv = body.inverse()?;
        let lift = |m: &RatMatrix| SuperMatrix::from_body(self.rows, self.cols, self.generators, m);
        let b_inv = lift(&body_inv);
        let soul = self.sub(&lift(&body)).ok()?;
        let step = lift(&body_inv.scale(&-rational::one())).mul(&soul).ok()?;
        let mut term = SuperMatrix::identity(self.rows, self.generators);
        let mut sum = SuperMatrix::zeros(self.rows, self.cols, self.generators);
        while !term.is_zero() {
            sum = sum.add(&term).ok()?;
            term = term.mul(&step).ok()?;
        }
        sum.mul(&b_inv).ok()
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMatrix{}x{}{:?}", self.rows, self.cols, self.row_vecs())
    }
}

#[derive(Serialize, Deserialize)]
struct SuperMatrixRepr {
    rows: SuperDim,
    cols: SuperDim,
    generators: usize,
    entries: Vec<Vec<Supernumber>>,
}

impl Serialize for SuperMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SuperMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            generators: self.generators,
            entries: self.row_vecs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SuperMatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows.total() || repr.entries.iter().any(|r| r.len() != repr.cols.total()) {
            return Err(D::Error::custom("supermatrix entries do not match declared shape"));
        }
        SuperMatrix::new(
            repr.rows,
            repr.cols,
            repr.generators,
            repr.entries.into_iter().flatten().collect(),
        )
        .map_err(D::Error::custom)
    }
}

/// Determinant of a square array of pairwise-commuting (even) supernumbers,
/// by cofactor expansion along the first row.
pub fn even_determinant(m: &[Vec<Supernumber>], generators: usize) -> Supernumber {
    let n = m.len();
    match n {
        0 => Supernumber::one(generators),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Supernumber::zero(generators);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Supernumber>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &even_determinant(&minor, generators);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Inverse of a square even block via the adjugate; requires an invertible
/// body determinant.
// the adjugate is filled transposed, so index loops read clearer here
#[allow(clippy::needless_range_loop)]
fn even_inverse(m: &[Vec<Supernumber>], generators: usize) -> Result<Vec<Vec<Supernumber>>, GrassmannError> {
    let n = m.len();
    let det = even_determinant(m, generators);
    let det_inv = ginv(&det).map_err(|_| GrassmannError::DBlockSingular)?;
    let mut inv = vec![vec![Supernumber::zero(generators); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Supernumber>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let cof = even_determinant(&minor, generators);
            let cof = if (i + j) % 2 == 0 { cof } else { -&cof };
            inv[j][i] = &cof * &det_inv;
        }
    }
    Ok(inv)
}

fn block_mul(
    a: &[Vec<Supernumber>],
    b: &[Vec<Supernumber>],
    inner: usize,
    cols: usize,
    generators: usize,
) -> Vec<Vec<Supernumber>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Supernumber::zero(generators), |acc, k| &acc + &(&row[k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// `Ber(M) = det(A − B D⁻¹ C) · det(D)⁻¹` for a graded square supermatrix.
pub fn berezinian(m: &SuperMatrix) -> Result<Supernumber, GrassmannError> {
    let (a, b, c, d) = m.blocks()?;
    if !m.is_graded() {
        return Err(GrassmannError::NotGraded);
    }
    let g = m.generators;
    let p = m.rows.even;
    let q = m.rows.odd;
    let d_inv = even_inverse(&d, g)?;
    let bdc = block_mul(&block_mul(&b, &d_inv, q, q, g), &c, q, p, g);
    let schur: Vec<Vec<Supernumber>> = a
        .iter()
        .zip(&bdc)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect();
    let det_d = even_determinant(&d, g);
    Ok(&even_determinant(&schur, g) * &ginv(&det_d)?)
}

/// ±1 as used in orientation signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn of(q: &Rational) -> Option<Sign> {
        if q.is_zero() {
            None
        } else if q.is_positive() {
            Some(Sign::Plus)
        } else {
            Some(Sign::Minus)
        }
    }
}

/// Per-chart orientation datum of a transition supermatrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum OrientationClass {
    /// Berezinian with nonzero body: the (sign det A, sign det D) pair of body
    /// determinants.
    Signed {
        a: Sign,
        d: Sign,
    },
    /// Nonzero nilpotent value with the given nilpotency index (≥ 2).
    Nilpotent {
        index: usize,
    },
    Zero,
}

fn classify_nilpotent(x: &Supernumber) -> OrientationClass {
    match nilpotency_index(x) {
        _ if x.is_zero() => OrientationClass::Zero,
        Some(index) => OrientationClass::Nilpotent { index },
        None => unreachable!("caller checks the body"),
    }
}

/// Orientation class of a transition.
///
/// With a Berezinian value `ber` (or one computable from `m`): nonzero body
/// gives `Signed` from the signs of the body determinants of the `A` and `D`
/// blocks of `m`; a nonzero value with zero body gives `Nilpotent`; zero
/// gives `Zero`. When the Berezinian does not exist because the `D` block is
/// body-singular, the determinant of `D` itself is classified instead.
pub fn orientation_class(ber: Option<&Supernumber>, m: &SuperMatrix) -> OrientationClass {
    let g = m.generators;
    let blocks = m.blocks().ok();
    let body_sign = |blk: &[Vec<Supernumber>]| Sign::of(&even_determinant(blk, g).body());
    let computed;
    let value = match ber {
        Some(b) => Some(b),
        None => {
            computed = berezinian(m).ok();
            computed.as_ref()
        }
    };
    match (value, &blocks) {
        (Some(b), Some((a, _, _, d))) if !b.body().is_zero() => OrientationClass::Signed {
            a: body_sign(a).unwrap_or(Sign::Plus),
            d: body_sign(d).unwrap_or(Sign::Plus),
        },
        (Some(b), _) if !b.body().is_zero() => OrientationClass::Signed {
            a: Sign::Plus,
            d: Sign::Plus,
        },
        (Some(b), _) => classify_nilpotent(b),
        (None, Some((_, _, _, d))) => {
            let det_d = even_determinant(d, g);
            if det_d.body().is_zero() {
                classify_nilpotent(&det_d)
            } else {
                OrientationClass::Signed {
                    a: Sign::Plus,
                    d: Sign::of(&det_d.body()).unwrap_or(Sign::Plus),
                }
            }
        }
        (None, None) => OrientationClass::Zero,
    }
}
