//! Strict monoidal structure on finite sets (cartesian product) and rational
//! vector spaces (Kronecker product), obstruction multiplicativity, regular
//! functors, braidings and the regular Yang–Baxter equation.
//!
//! Products are strictly associative: `(x, y)` in `X⊗Y` has index
//! `x·|Y| + y`, so `(X⊗Y)⊗Z` and `X⊗(Y⊗Z)` are the same object.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::{FinCategory, RegularityMode};
use crate::laws::LawOutcome;
use crate::matrix::RatMatrix;
use crate::morphism::{
    compose, compose_path, enumerate_morphisms, Backend, FinObject, Morphism, MorphismError, Payload, SearchBounds,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidalError {
    #[error("cycles have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("obstructions are not multiplicative at position {position}: {detail}")]
    MultiplicativityFailure { position: usize, detail: String },
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("no obstruction assigned to {0}")]
    MissingObstruction(FinObject),
    #[error("no braiding component for ({0}, {1})")]
    MissingBraiding(FinObject, FinObject),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("object of size {size} exceeds the search bound {bound}")]
    ObjectTooLarge { size: usize, bound: usize },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// The strict monoidal structure of one backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidalStructure {
    backend: Backend,
}

impl MonoidalStructure {
    pub fn new(backend: Backend) -> Result<Self, MonoidalError> {
        FinObject::unit(backend)?;
        Ok(MonoidalStructure { backend })
    }

    /// Cartesian product of finite sets.
    pub fn cartesian() -> Self {
        MonoidalStructure {
            backend: Backend::FinMap,
        }
    }

    /// Tensor product of rational vector spaces.
    pub fn kronecker() -> Self {
        MonoidalStructure { backend: Backend::Rat }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn unit(&self) -> FinObject {
        FinObject::unit(self.backend).expect("constructed for a supported backend")
    }

    pub fn tensor_objects(&self, x: &FinObject, y: &FinObject) -> Result<FinObject, MonoidalError> {
        self.check_backend(x)?;
        Ok(x.tensor(y)?)
    }

    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Result<Morphism, MonoidalError> {
        self.check_backend(f.dom())?;
        Ok(f.tensor(g)?)
    }

    /// `f₁⊗f₂⊗…`, left to right.
    pub fn tensor_all(&self, fs: &[&Morphism]) -> Result<Morphism, MonoidalError> {
        let (first, rest) = fs
            .split_first()
            .ok_or_else(|| MonoidalError::ShapeMismatch("empty tensor product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, f| self.tensor(&acc, f))
    }

    fn check_backend(&self, x: &FinObject) -> Result<(), MonoidalError> {
        if x.backend() != self.backend {
            return Err(MorphismError::BackendMismatch(self.backend, x.backend()).into());
        }
        Ok(())
    }

    /// The symmetry `X⊗Y → Y⊗X`.
    pub fn flip(&self, x: &FinObject, y: &FinObject) -> Result<Morphism, MonoidalError> {
        let (a, b) = (x.size(), y.size());
        let dom = self.tensor_objects(x, y)?;
        let cod = self.tensor_objects(y, x)?;
        let payload = match self.backend {
            Backend::FinMap => Payload::Map((0..a * b).map(|k| (k % b) * a + k / b).collect()),
            Backend::Rat => Payload::Rat(RatMatrix::commutation(a, b)),
            Backend::Super => unreachable!("rejected at construction"),
        };
        Ok(Morphism::new(dom, cod, payload)?)
    }

    /// `(f⊗g)∘(f'⊗g') = (f∘f')⊗(g∘g')` and `id⊗id = id` on every composable
    /// quadruple drawn from `morphisms`, plus the unit laws.
    pub fn check_functoriality(&self, morphisms: &[Morphism]) -> Vec<LawOutcome> {
        let mut out = Vec::new();
        let unit = Morphism::identity(&self.unit());
        for f in morphisms {
            let ok = self.tensor(&unit, f).ok().as_ref() == Some(f) && self.tensor(f, &unit).ok().as_ref() == Some(f);
            out.push(if ok {
                LawOutcome::pass("tensor unit", f.to_string())
            } else {
                LawOutcome::fail("tensor unit", f.to_string(), "I⊗f or f⊗I differs from f")
            });
        }
        for f in morphisms {
            for g in morphisms {
                let ids = self.tensor(&Morphism::identity(f.dom()), &Morphism::identity(g.dom()));
                let id_ok = ids.as_ref().map(Morphism::is_identity).unwrap_or(false);
                if !id_ok {
                    out.push(LawOutcome::fail(
                        "tensor of identities",
                        format!("{} ⊗ {}", f.dom(), g.dom()),
                        "not an identity",
                    ));
                }
                for f2 in morphisms.iter().filter(|f2| f2.cod() == f.dom()) {
                    for g2 in morphisms.iter().filter(|g2| g2.cod() == g.dom()) {
                        let lhs = self
                            .tensor(f, g)
                            .and_then(|fg| Ok(compose(&fg, &self.tensor(f2, g2)?)?));
                        let rhs = compose(f, f2)
                            .map_err(MonoidalError::from)
                            .and_then(|ff| self.tensor(&ff, &compose(g, g2)?));
                        let subject = format!("({f}⊗{g})∘({f2}⊗{g2})");
                        out.push(match (lhs, rhs) {
                            (Ok(l), Ok(r)) => LawOutcome::equation("tensor functoriality", subject, &l, &r),
                            (l, r) => LawOutcome::fail("tensor functoriality", subject, format!("{l:?} / {r:?}")),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Obstructions indexed by object.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObstructionAssignment {
    pub entries: BTreeMap<FinObject, Morphism>,
    /// Objects without an entry get the identity.
    pub default_identity: bool,
}

impl ObstructionAssignment {
    /// The identity on every object.
    pub fn identities() -> Self {
        ObstructionAssignment {
            entries: BTreeMap::new(),
            default_identity: true,
        }
    }

    pub fn from_entries<I: IntoIterator<Item = Morphism>>(es: I) -> Result<Self, MonoidalError> {
        let mut entries = BTreeMap::new();
        for e in es {
            if !e.is_endo() {
                return Err(MonoidalError::ShapeMismatch(format!(
                    "obstruction {e} is not an endomorphism"
                )));
            }
            entries.insert(*e.dom(), e);
        }
        Ok(ObstructionAssignment {
            entries,
            default_identity: false,
        })
    }

    pub fn with(mut self, e: Morphism) -> Self {
        self.entries.insert(*e.dom(), e);
        self
    }

    pub fn get(&self, x: &FinObject) -> Result<Morphism, MonoidalError> {
        match self.entries.get(x) {
            Some(e) => Ok(e.clone()),
            None if self.default_identity => Ok(Morphism::identity(x)),
            None => Err(MonoidalError::MissingObstruction(*x)),
        }
    }

    /// The explicit entry for `x⊗y`, else `e_x⊗e_y`.
    pub fn get_product(&self, m: &MonoidalStructure, x: &FinObject, y: &FinObject) -> Result<Morphism, MonoidalError> {
        let xy = m.tensor_objects(x, y)?;
        match self.entries.get(&xy) {
            Some(e) => Ok(e.clone()),
            None => m.tensor(&self.get(x)?, &self.get(y)?),
        }
    }

    pub fn is_defined(&self, x: &FinObject) -> bool {
        self.default_identity || self.entries.contains_key(x)
    }
}

/// `e_X⊗e_Y = e_{X⊗Y}` for every pair drawn from `objects`.
pub fn check_obstruction_multiplicativity(
    m: &MonoidalStructure,
    e: &ObstructionAssignment,
    objects: &[FinObject],
) -> Vec<LawOutcome> {
    const LAW: &str = "obstruction multiplicativity";
    let mut out = Vec::new();
    for x in objects {
        for y in objects {
            let subject = format!("({x}, {y})");
            let lhs = e.get(x).and_then(|ex| m.tensor(&ex, &e.get(y)?));
            let rhs = m.tensor_objects(x, y).and_then(|xy| e.get(&xy));
            out.push(match (lhs, rhs) {
                (Ok(l), Ok(r)) => LawOutcome::equation(LAW, subject, &l, &r),
                (Err(err), _) | (_, Err(err)) => LawOutcome::fail(LAW, subject, err.to_string()),
            });
        }
    }
    out
}

/// A closed chain of morphisms, `legs[i]: X_i → X_{i+1}` (indices mod n),
/// independent of any ambient finite category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LegCycle {
    legs: Vec<Morphism>,
}

impl LegCycle {
    pub fn new(legs: Vec<Morphism>) -> Result<Self, MonoidalError> {
        let n = legs.len();
        if n == 0 {
            return Err(MonoidalError::ShapeMismatch("empty cycle".into()));
        }
        for i in 0..n {
            if legs[i].cod() != legs[(i + 1) % n].dom() {
                return Err(MonoidalError::ShapeMismatch(format!(
                    "leg {i} does not chain into leg {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(LegCycle { legs })
    }

    pub fn legs(&self) -> &[Morphism] {
        &self.legs
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn object(&self, i: usize) -> &FinObject {
        self.legs[i].dom()
    }

    /// Composite around the cycle starting and ending at position `i`.
    pub fn obstruction(&self, i: usize) -> Morphism {
        let n = self.len();
        compose_path((0..n).map(|k| &self.legs[(i + k) % n])).expect("validated chain")
    }

    pub fn is_regular(&self, mode: RegularityMode) -> bool {
        let holds = |i: usize| compose(&self.legs[i], &self.obstruction(i)).expect("validated chain") == self.legs[i];
        match mode {
            RegularityMode::Stated => holds(0),
            RegularityMode::AllRotations => (0..self.len()).all(holds),
        }
    }
}

/// The cycle with legs `f_i⊗g_i`. When `e` is given it must be
/// multiplicative on every `(X_i, Y_i)`. The product's obstruction at each
/// position is `e_i(c)⊗e_i(d)`, and it is regular whenever `c` and `d` are.
pub fn product_of_cycles(
    m: &MonoidalStructure,
    c: &LegCycle,
    d: &LegCycle,
    e: Option<&ObstructionAssignment>,
) -> Result<LegCycle, MonoidalError> {
    if c.len() != d.len() {
        return Err(MonoidalError::LengthMismatch(c.len(), d.len()));
    }
    if let Some(e) = e {
        for i in 0..c.len() {
            let (x, y) = (c.object(i), d.object(i));
            let lhs = m.tensor(&e.get(x)?, &e.get(y)?)?;
            let rhs = e.get(&m.tensor_objects(x, y)?)?;
            if lhs != rhs {
                return Err(MonoidalError::MultiplicativityFailure {
                    position: i,
                    detail: format!("e_X⊗e_Y = {lhs}, e_(X⊗Y) = {rhs}"),
                });
            }
        }
    }
    let legs = c
        .legs
        .iter()
        .zip(&d.legs)
        .map(|(f, g)| m.tensor(f, g))
        .collect::<Result<Vec<_>, _>>()?;
    let prod = LegCycle::new(legs)?;
    for i in 0..prod.len() {
        let expected = m.tensor(&c.obstruction(i), &d.obstruction(i))?;
        if prod.obstruction(i) != expected {
            return Err(MonoidalError::MultiplicativityFailure {
                position: i,
                detail: format!("product obstruction {} differs from {expected}", prod.obstruction(i)),
            });
        }
    }
    Ok(prod)
}

/// A functor between finite categories given by explicit tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFunctor {
    pub objects: Vec<usize>,
    /// Image of each morphism of hom `(x, y)` of the source.
    pub morphisms: BTreeMap<(usize, usize, Morphism), Morphism>,
}

impl FiniteFunctor {
    /// Tabulates `f ↦ map(x, y, f)` over every morphism of `src`.
    pub fn tabulate(src: &FinCategory, objects: Vec<usize>, map: impl Fn(usize, usize, &Morphism) -> Morphism) -> Self {
        let mut morphisms = BTreeMap::new();
        for x in 0..src.len() {
            for y in 0..src.len() {
                for f in src.hom(x, y) {
                    morphisms.insert((x, y, f.clone()), map(x, y, f));
                }
            }
        }
        FiniteFunctor { objects, morphisms }
    }

    pub fn identity(cat: &FinCategory) -> Self {
        Self::tabulate(cat, (0..cat.len()).collect(), |_, _, f| f.clone())
    }

    fn image(&self, x: usize, y: usize, f: &Morphism) -> Option<&Morphism> {
        self.morphisms.get(&(x, y, f.clone()))
    }

    /// First failure of functoriality, if any.
    pub fn functor_violation(&self, src: &FinCategory, dst: &FinCategory) -> Option<String> {
        if self.objects.len() != src.len() || self.objects.iter().any(|&o| o >= dst.len()) {
            return Some("object map does not cover the source or leaves the target".into());
        }
        for x in 0..src.len() {
            for y in 0..src.len() {
                let (fx, fy) = (self.objects[x], self.objects[y]);
                for f in src.hom(x, y) {
                    match self.image(x, y, f) {
                        Some(img) if dst.contains(fx, fy, img) => {}
                        _ => {
                            return Some(format!(
                                "image of {f}: {}→{} is not in the target hom-set",
                                src.name(x),
                                src.name(y)
                            ))
                        }
                    }
                }
            }
            let id = Morphism::identity(&src.objects()[x]);
            let fx = self.objects[x];
            if self.image(x, x, &id) != Some(&Morphism::identity(&dst.objects()[fx])) {
                return Some(format!("identity of {} is not preserved", src.name(x)));
            }
        }
        for x in 0..src.len() {
            for y in 0..src.len() {
                for z in 0..src.len() {
                    for f in src.hom(x, y) {
                        for g in src.hom(y, z) {
                            let gf = compose(g, f).expect("composable");
                            let lhs = self.image(x, z, &gf);
                            let rhs = compose(self.image(y, z, g)?, self.image(x, y, f)?).ok();
                            if lhs != rhs.as_ref() {
                                return Some(format!("F({g}∘{f}) ≠ F({g})∘F({f})"));
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// `F(e_X) = e_{F(X)}` on every object of `e_src`, after checking that `f` is
/// a functor. `e_src` and `e_dst` are indexed by object position.
pub fn check_regular_functor(
    f: &FiniteFunctor,
    src: &FinCategory,
    dst: &FinCategory,
    e_src: &BTreeMap<usize, Morphism>,
    e_dst: &BTreeMap<usize, Morphism>,
) -> Result<Vec<LawOutcome>, MonoidalError> {
    const LAW: &str = "regular functor preserves obstructions";
    if let Some(w) = f.functor_violation(src, dst) {
        return Err(MonoidalError::NotAFunctor(w));
    }
    let mut out = Vec::new();
    for (&x, ex) in e_src {
        let fx = f.objects[x];
        let subject = format!("{} ↦ {}", src.name(x), dst.name(fx));
        out.push(match (f.image(x, x, ex), e_dst.get(&fx)) {
            (Some(l), Some(r)) => LawOutcome::equation(LAW, subject, l, r),
            (None, _) => LawOutcome::fail(LAW, subject, format!("{ex} is not a morphism of the source")),
            (_, None) => LawOutcome::fail(LAW, subject, "target obstruction undefined"),
        });
    }
    Ok(out)
}

/// How components without an explicit table entry are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BraidingRule {
    /// The symmetry `X⊗Y → Y⊗X`.
    Flip,
    /// `flip∘(e_X⊗e_Y)`.
    ObstructedFlip,
}

/// Components `B_{X,Y}: X⊗Y → Y⊗X`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Braiding {
    pub rule: Option<BraidingRule>,
    /// Explicit components; they take precedence over the rule.
    pub table: BTreeMap<(FinObject, FinObject), Morphism>,
}

impl Braiding {
    pub fn rule(rule: BraidingRule) -> Self {
        Braiding {
            rule: Some(rule),
            table: BTreeMap::new(),
        }
    }

    /// A braiding with a single explicit component.
    pub fn single(x: FinObject, y: FinObject, b: Morphism) -> Self {
        let mut table = BTreeMap::new();
        table.insert((x, y), b);
        Braiding { rule: None, table }
    }

    pub fn with(mut self, x: FinObject, y: FinObject, b: Morphism) -> Self {
        self.table.insert((x, y), b);
        self
    }

    pub fn component(
        &self,
        m: &MonoidalStructure,
        e: &ObstructionAssignment,
        x: &FinObject,
        y: &FinObject,
    ) -> Result<Morphism, MonoidalError> {
        let b = match (self.table.get(&(*x, *y)), self.rule) {
            (Some(b), _) => b.clone(),
            (None, Some(BraidingRule::Flip)) => m.flip(x, y)?,
            (None, Some(BraidingRule::ObstructedFlip)) => compose(&m.flip(x, y)?, &m.tensor(&e.get(x)?, &e.get(y)?)?)?,
            (None, None) => return Err(MonoidalError::MissingBraiding(*x, *y)),
        };
        let (dom, cod) = (m.tensor_objects(x, y)?, m.tensor_objects(y, x)?);
        if *b.dom() != dom || *b.cod() != cod {
            return Err(MonoidalError::ShapeMismatch(format!(
                "B({x}, {y}) must map {dom} to {cod}"
            )));
        }
        Ok(b)
    }
}

pub const LAW_TRIANGLE_PRODUCT_TARGET: &str = "braiding triangle B(X,Y⊗Z)";
pub const LAW_TRIANGLE_PRODUCT_SOURCE: &str = "braiding triangle B(X⊗Y,Z)";
pub const LAW_INTERTWINING: &str = "braiding intertwines obstructions";
pub const LAW_YBE: &str = "regular Yang-Baxter equation";

/// For all triples from `objects`:
/// `B_{X,Y⊗Z} = (e_Y⊗B_{X,Z})∘(B_{X,Y}⊗e_Z)` and
/// `B_{X⊗Y,Z} = (B_{X,Z}⊗e_Y)∘(e_X⊗B_{Y,Z})`;
/// for all pairs: `B_{X,Y}∘e_{X⊗Y} = e_{Y⊗X}∘B_{X,Y}`.
pub fn check_braiding_compat(
    m: &MonoidalStructure,
    b: &Braiding,
    e: &ObstructionAssignment,
    objects: &[FinObject],
) -> Vec<LawOutcome> {
    let mut out = Vec::new();
    let record = |law: &str, subject: String, r: Result<(Morphism, Morphism), MonoidalError>| match r {
        Ok((l, rr)) => LawOutcome::equation(law, subject, &l, &rr),
        Err(err) => LawOutcome::fail(law, subject, err.to_string()),
    };
    for x in objects {
        for y in objects {
            for z in objects {
                let subject = format!("({x}, {y}, {z})");
                let target = (|| {
                    let yz = m.tensor_objects(y, z)?;
                    let lhs = b.component(m, e, x, &yz)?;
                    let first = m.tensor(&b.component(m, e, x, y)?, &e.get(z)?)?;
                    let second = m.tensor(&e.get(y)?, &b.component(m, e, x, z)?)?;
                    Ok((lhs, compose(&second, &first)?))
                })();
                out.push(record(LAW_TRIANGLE_PRODUCT_TARGET, subject.clone(), target));
                let source = (|| {
                    let xy = m.tensor_objects(x, y)?;
                    let lhs = b.component(m, e, &xy, z)?;
                    let first = m.tensor(&e.get(x)?, &b.component(m, e, y, z)?)?;
                    let second = m.tensor(&b.component(m, e, x, z)?, &e.get(y)?)?;
                    Ok((lhs, compose(&second, &first)?))
                })();
                out.push(record(LAW_TRIANGLE_PRODUCT_SOURCE, subject, source));
            }
        }
    }
    for x in objects {
        for y in objects {
            let r = (|| {
                let bxy = b.component(m, e, x, y)?;
                let lhs = compose(&bxy, &e.get_product(m, x, y)?)?;
                let rhs = compose(&e.get_product(m, y, x)?, &bxy)?;
                Ok((lhs, rhs))
            })();
            out.push(record(LAW_INTERTWINING, format!("({x}, {y})"), r));
        }
    }
    out
}

/// `B⁽¹⁾_{X,Y,Z} = B_{X,Y}⊗e_Z`.
fn b1(
    m: &MonoidalStructure,
    b: &Braiding,
    e: &ObstructionAssignment,
    x: &FinObject,
    y: &FinObject,
    z: &FinObject,
) -> Result<Morphism, MonoidalError> {
    m.tensor(&b.component(m, e, x, y)?, &e.get(z)?)
}

/// `B⁽²⁾_{X,Y,Z} = e_X⊗B_{Y,Z}`.
fn b2(
    m: &MonoidalStructure,
    b: &Braiding,
    e: &ObstructionAssignment,
    x: &FinObject,
    y: &FinObject,
    z: &FinObject,
) -> Result<Morphism, MonoidalError> {
    m.tensor(&e.get(x)?, &b.component(m, e, y, z)?)
}

/// Both sides of the regular Yang–Baxter equation on `X⊗Y⊗Z → Z⊗Y⊗X`:
/// `B⁽¹⁾_{Y,Z,X}∘B⁽²⁾_{Y,X,Z}∘B⁽¹⁾_{X,Y,Z}` and
/// `B⁽²⁾_{Z,X,Y}∘B⁽¹⁾_{X,Z,Y}∘B⁽²⁾_{X,Y,Z}`.
pub fn ybe_sides(
    m: &MonoidalStructure,
    b: &Braiding,
    e: &ObstructionAssignment,
    x: &FinObject,
    y: &FinObject,
    z: &FinObject,
) -> Result<(Morphism, Morphism), MonoidalError> {
    let lhs = compose_path([&b1(m, b, e, x, y, z)?, &b2(m, b, e, y, x, z)?, &b1(m, b, e, y, z, x)?])?;
    let rhs = compose_path([&b2(m, b, e, x, y, z)?, &b1(m, b, e, x, z, y)?, &b2(m, b, e, z, x, y)?])?;
    Ok((lhs, rhs))
}

pub fn check_regular_ybe(
    m: &MonoidalStructure,
    b: &Braiding,
    e: &ObstructionAssignment,
    x: &FinObject,
    y: &FinObject,
    z: &FinObject,
) -> Result<bool, MonoidalError> {
    let (lhs, rhs) = ybe_sides(m, b, e, x, y, z)?;
    Ok(lhs == rhs)
}

/// Solutions `B_{X,X}` of the regular Yang–Baxter equation on one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YbeCatalog {
    pub object: FinObject,
    pub candidates: u64,
    /// Candidates satisfying the equation.
    pub ybe_count: u64,
    /// Candidates satisfying the equation and the intertwining relation.
    pub solutions: Vec<Morphism>,
}

/// Every map `X⊗X → X⊗X` satisfying the regular Yang–Baxter equation at
/// `(X, X, X)` and `B∘e_{X⊗X} = e_{X⊗X}∘B`, in canonical order.
pub fn search_ybe_solutions(
    m: &MonoidalStructure,
    e: &ObstructionAssignment,
    x: &FinObject,
    object_bound: usize,
    bounds: &SearchBounds,
) -> Result<YbeCatalog, MonoidalError> {
    if x.size() > object_bound {
        return Err(MonoidalError::ObjectTooLarge {
            size: x.size(),
            bound: object_bound,
        });
    }
    let xx = m.tensor_objects(x, x)?;
    let exx = e.get_product(m, x, x)?;
    let mut candidates = 0;
    let mut ybe_count = 0;
    let mut solutions = Vec::new();
    for cand in enumerate_morphisms(&xx, &xx, bounds)? {
        candidates += 1;
        let b = Braiding::single(*x, *x, cand.clone());
        if !check_regular_ybe(m, &b, e, x, x, x)? {
            continue;
        }
        ybe_count += 1;
        if compose(&cand, &exx)? == compose(&exx, &cand)? {
            solutions.push(cand);
        }
    }
    Ok(YbeCatalog {
        object: *x,
        candidates,
        ybe_count,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize) -> FinObject {
        FinObject::set(n)
    }

    fn map(t: &[usize]) -> Morphism {
        Morphism::endo_map(t.to_vec()).unwrap()
    }

    #[test]
    fn flip_and_functoriality() {
        let m = MonoidalStructure::cartesian();
        let f = m.flip(&set(2), &set(3)).unwrap();
        // (x, y) at 3x + y goes to (y, x) at 2y + x
        assert_eq!(f.table().unwrap(), &[0, 2, 4, 1, 3, 5]);
        let back = m.flip(&set(3), &set(2)).unwrap();
        assert!(compose(&back, &f).unwrap().is_identity());
        let ms: Vec<_> = enumerate_morphisms(&set(2), &set(2), &SearchBounds::default())
            .unwrap()
            .collect();
        assert!(m.check_functoriality(&ms).iter().all(|o| o.holds));
        let k = MonoidalStructure::kronecker();
        let rs = vec![
            Morphism::rat(RatMatrix::from_ints(&[[1, 2], [0, 1]])),
            Morphism::rat(RatMatrix::from_ints(&[[0, 1], [1, 0]])),
        ];
        assert!(k.check_functoriality(&rs).iter().all(|o| o.holds));
        assert!(MonoidalStructure::new(Backend::Super).is_err());
    }

    #[test]
    fn multiplicativity_examples() {
        let m = MonoidalStructure::cartesian();
        let objs = [set(2)];
        assert!(
            check_obstruction_multiplicativity(&m, &ObstructionAssignment::identities(), &objs)
                .iter()
                .all(|o| o.holds)
        );
        // e = projection onto 0; on X⊗X the product projection sends everything to (0, 0)
        let e = map(&[0, 0]);
        let ee = m.tensor(&e, &e).unwrap();
        assert_eq!(ee.table().unwrap(), &[0, 0, 0, 0]);
        let good = ObstructionAssignment::from_entries([e.clone(), ee]).unwrap();
        assert!(check_obstruction_multiplicativity(&m, &good, &objs)
            .iter()
            .all(|o| o.holds));
        let bad = ObstructionAssignment::from_entries([e, map(&[0, 1, 2, 0])]).unwrap();
        let out = check_obstruction_multiplicativity(&m, &bad, &objs);
        assert!(!out[0].holds);
        assert_eq!(out[0].subject, "(Set(2), Set(2))");
    }

    #[test]
    fn product_of_cycles_examples() {
        let m = MonoidalStructure::cartesian();
        let idc = LegCycle::new(vec![Morphism::identity(&set(2))]).unwrap();
        let p = product_of_cycles(&m, &idc, &idc, Some(&ObstructionAssignment::identities())).unwrap();
        assert!(p.legs()[0].is_identity());
        let pc = LegCycle::new(vec![map(&[0, 0])]).unwrap();
        let qc = LegCycle::new(vec![map(&[1, 1, 2])]).unwrap();
        let pq = product_of_cycles(&m, &pc, &qc, None).unwrap();
        assert!(pq.is_regular(RegularityMode::AllRotations));
        let leg = &pq.legs()[0];
        assert_eq!(&compose(leg, leg).unwrap(), leg);
        assert!(matches!(
            product_of_cycles(&m, &pc, &LegCycle::new(vec![map(&[0]), map(&[0])]).unwrap(), None),
            Err(MonoidalError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn product_of_regular_two_cycles_is_regular() {
        let m = MonoidalStructure::cartesian();
        let maps: Vec<_> = enumerate_morphisms(&set(2), &set(2), &SearchBounds::default())
            .unwrap()
            .collect();
        let mut regular = Vec::new();
        for f in &maps {
            for g in &maps {
                let c = LegCycle::new(vec![f.clone(), g.clone()]).unwrap();
                if c.is_regular(RegularityMode::AllRotations) {
                    regular.push(c);
                }
            }
        }
        for c in &regular {
            for d in &regular {
                let p = product_of_cycles(&m, c, d, None).unwrap();
                // oracle: relation at each position by direct composition
                for i in 0..2 {
                    let e = compose(&p.legs()[(i + 1) % 2], &p.legs()[i]).unwrap();
                    assert_eq!(compose(&p.legs()[i], &e).unwrap(), p.legs()[i]);
                }
            }
        }
    }

    #[test]
    fn product_rejects_nonmultiplicative_assignment() {
        let m = MonoidalStructure::cartesian();
        let c = LegCycle::new(vec![map(&[0, 0])]).unwrap();
        let e = ObstructionAssignment::from_entries([map(&[0, 0]), map(&[0, 1, 2, 3])]).unwrap();
        assert!(matches!(
            product_of_cycles(&m, &c, &c, Some(&e)),
            Err(MonoidalError::MultiplicativityFailure { position: 0, .. })
        ));
    }

    #[test]
    fn regular_functor_examples() {
        let b = SearchBounds::default();
        let cat = FinCategory::full(vec![("X", set(2))], &b).unwrap();
        let mut e = BTreeMap::new();
        e.insert(0, map(&[0, 0]));
        let id = FiniteFunctor::identity(&cat);
        assert!(check_regular_functor(&id, &cat, &cat, &e, &e)
            .unwrap()
            .iter()
            .all(|o| o.holds));

        let point = FinCategory::identities_only(vec![("T", set(1))]).unwrap();
        let collapse = FiniteFunctor::tabulate(&cat, vec![0], |_, _, _| Morphism::identity(&set(1)));
        let mut et = BTreeMap::new();
        et.insert(0, Morphism::identity(&set(1)));
        assert!(check_regular_functor(&collapse, &cat, &point, &e, &et)
            .unwrap()
            .iter()
            .all(|o| o.holds));

        // post-composition with a non-central idempotent
        let p = map(&[0, 0]);
        let post = FiniteFunctor::tabulate(&cat, vec![0], |_, _, f| compose(&p, f).unwrap());
        let oracle_is_functor = cat.hom(0, 0).iter().all(|f| {
            cat.hom(0, 0).iter().all(|g| {
                compose(&p, &compose(g, f).unwrap()).unwrap()
                    == compose(&compose(&p, g).unwrap(), &compose(&p, f).unwrap()).unwrap()
            })
        }) && compose(&p, &Morphism::identity(&set(2))).unwrap().is_identity();
        assert!(!oracle_is_functor);
        assert!(matches!(
            check_regular_functor(&post, &cat, &cat, &e, &e),
            Err(MonoidalError::NotAFunctor(_))
        ));
    }

    #[test]
    fn flip_braiding_is_compatible_with_identities() {
        let m = MonoidalStructure::cartesian();
        let b = Braiding::rule(BraidingRule::Flip);
        let e = ObstructionAssignment::identities();
        let objs = [set(1), set(2), set(3)];
        assert!(check_braiding_compat(&m, &b, &e, &objs).iter().all(|o| o.holds));
        for x in &objs {
            for y in &objs {
                for z in &objs {
                    assert!(check_regular_ybe(&m, &b, &e, x, y, z).unwrap());
                }
            }
        }
    }

    #[test]
    fn obstructed_flip_with_projections() {
        let m = MonoidalStructure::cartesian();
        let b = Braiding::rule(BraidingRule::ObstructedFlip);
        let p = map(&[0, 0]);
        let e = ObstructionAssignment::from_entries([p.clone()]).unwrap();
        let x = set(2);
        let out = check_braiding_compat(&m, &b, &e, &[x]);
        let passed = |law: &str| out.iter().find(|o| o.law == law).unwrap().holds;
        // oracle: every path through e⊗e and the flip lands on the constant map to (0,0[,0])
        let pp = m.tensor(&p, &p).unwrap();
        let bxx = compose(&m.flip(&x, &x).unwrap(), &pp).unwrap();
        assert_eq!(bxx.table().unwrap(), &[0, 0, 0, 0]);
        assert!(passed(LAW_INTERTWINING));
        assert!(passed(LAW_TRIANGLE_PRODUCT_TARGET) == passed(LAW_TRIANGLE_PRODUCT_SOURCE));
        // B_{X,X⊗X} needs e on X⊗X, which is not assigned
        assert!(!passed(LAW_TRIANGLE_PRODUCT_TARGET));
        let full = e.clone().with(pp.clone()).with(m.tensor(&pp, &p).unwrap());
        let out = check_braiding_compat(&m, &b, &full, &[x]);
        assert!(out.iter().all(|o| o.holds), "{out:#?}");
    }

    #[test]
    fn tampered_component_fails_its_triangle() {
        let m = MonoidalStructure::cartesian();
        let x = set(2);
        let xx = set(4);
        let bad = Morphism::endo_map(vec![0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let b = Braiding::rule(BraidingRule::Flip).with(x, xx, bad);
        let out = check_braiding_compat(&m, &b, &ObstructionAssignment::identities(), &[x]);
        let failing: Vec<_> = out.iter().filter(|o| !o.holds).map(|o| o.law.as_str()).collect();
        assert_eq!(failing, vec![LAW_TRIANGLE_PRODUCT_TARGET]);
    }

    #[test]
    fn ybe_fails_for_some_map_on_two_points() {
        let m = MonoidalStructure::cartesian();
        let x = set(2);
        let e = ObstructionAssignment::identities();
        let witness = enumerate_morphisms(&set(4), &set(4), &SearchBounds::default())
            .unwrap()
            .find(|c| !check_regular_ybe(&m, &Braiding::single(x, x, c.clone()), &e, &x, &x, &x).unwrap())
            .unwrap();
        // the first failing table in canonical order
        assert_eq!(witness.table().unwrap(), &[0, 0, 0, 1]);
    }

    #[test]
    fn ybe_search_on_one_point() {
        let m = MonoidalStructure::cartesian();
        let cat = search_ybe_solutions(
            &m,
            &ObstructionAssignment::identities(),
            &set(1),
            2,
            &SearchBounds::default(),
        )
        .unwrap();
        assert_eq!(cat.candidates, 1);
        assert_eq!(cat.solutions.len(), 1);
    }

    #[test]
    fn ybe_search_with_constant_obstruction() {
        let m = MonoidalStructure::cartesian();
        let x = set(2);
        let e = ObstructionAssignment::from_entries([map(&[0, 0])]).unwrap();
        let cat = search_ybe_solutions(&m, &e, &x, 2, &SearchBounds::default()).unwrap();
        assert_eq!(cat.candidates, 256);
        for b in &cat.solutions {
            let br = Braiding::single(x, x, b.clone());
            assert!(check_regular_ybe(&m, &br, &e, &x, &x, &x).unwrap());
            let exx = e.get_product(&m, &x, &x).unwrap();
            assert_eq!(compose(b, &exx).unwrap(), compose(&exx, b).unwrap());
        }
        assert!(search_ybe_solutions(&m, &e, &set(3), 2, &SearchBounds::default()).is_err());
    }

    #[test]
    fn ybe_with_idempotent_composed_flip() {
        let m = MonoidalStructure::cartesian();
        let x = set(2);
        let p = map(&[0, 0]);
        let e = ObstructionAssignment::from_entries([p.clone()]).unwrap();
        let b = Braiding::single(
            x,
            x,
            compose(&m.tensor(&p, &p).unwrap(), &m.flip(&x, &x).unwrap()).unwrap(),
        );
        // oracle: all six factors are constant onto (0,0,0)
        let (l, r) = ybe_sides(&m, &b, &e, &x, &x, &x).unwrap();
        assert_eq!(l.table().unwrap(), &[0; 8]);
        assert_eq!(l, r);
    }
}
