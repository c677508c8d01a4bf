//! Finite categories with noninvertible morphisms, regular n-cycles and their
//! obstructions.
//!
//! An n-cycle `X₀ →f₀ X₁ →f₁ … →f_{n-1} X₀` is stored with 0-based
//! positions. The obstruction at position `i` is the composite around the
//! cycle starting and ending at `X_i`; the regularity relation at `i` is
//! `f_i∘e_i = f_i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::morphism::{compose, compose_path, enumerate_morphisms, FinObject, Morphism, MorphismError, SearchBounds};

mod regularization;

pub use regularization::{
    build_regularization, verify_2category_axioms, AxiomCheck, AxiomReport, OneCell, Reg2Category, TwoCell, ZeroCell,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("unknown object index {0}")]
    UnknownObject(usize),
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("morphism {morphism} is not an arrow {src}→{dst}")]
    HomShape { src: String, dst: String, morphism: String },
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("composite {g}∘{f} is missing from hom({src}, {dst})")]
    NotClosed {
        f: String,
        g: String,
        src: String,
        dst: String,
    },
    #[error("leg {position} of the cycle is not a morphism of the category")]
    ChainBroken { position: usize },
    #[error("cycles must share their basepoint and length")]
    CycleMismatch,
    #[error("search visited more than {bound} candidates")]
    SearchSpaceTooLarge { bound: u64 },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Objects and explicit hom-sets, closed under composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCategory {
    names: Vec<String>,
    objects: Vec<FinObject>,
    /// Sorted, duplicate-free; absent keys are empty hom-sets.
    homs: BTreeMap<(usize, usize), Vec<Morphism>>,
}

impl FinCategory {
    /// Validates shapes, identities and closure.
    pub fn new<S: Into<String>>(
        objects: Vec<(S, FinObject)>,
        homs: BTreeMap<(usize, usize), Vec<Morphism>>,
    ) -> Result<Self, CategoryError> {
        let cat = Self::unchecked(objects, homs)?;
        cat.check_shapes()?;
        for x in 0..cat.len() {
            if !cat.hom(x, x).contains(&Morphism::identity(&cat.objects[x])) {
                return Err(CategoryError::MissingIdentity(cat.names[x].clone()));
            }
        }
        if let Some((f, g, src, dst)) = cat.closure_witness() {
            return Err(CategoryError::NotClosed {
                f: f.to_string(),
                g: g.to_string(),
                src: cat.names[src].clone(),
                dst: cat.names[dst].clone(),
            });
        }
        Ok(cat)
    }

    fn unchecked<S: Into<String>>(
        objects: Vec<(S, FinObject)>,
        homs: BTreeMap<(usize, usize), Vec<Morphism>>,
    ) -> Result<Self, CategoryError> {
        let mut names = Vec::new();
        let mut objs = Vec::new();
        for (name, obj) in objects {
            let name = name.into();
            if names.contains(&name) {
                return Err(CategoryError::DuplicateObject(name));
            }
            names.push(name);
            objs.push(obj);
        }
        let mut cat = FinCategory {
            names,
            objects: objs,
            homs: BTreeMap::new(),
        };
        for ((x, y), mut list) in homs {
            cat.object(x)?;
            cat.object(y)?;
            list.sort();
            list.dedup();
            if !list.is_empty() {
                cat.homs.insert((x, y), list);
            }
        }
        Ok(cat)
    }

    fn check_shapes(&self) -> Result<(), CategoryError> {
        for (&(x, y), list) in &self.homs {
            if let Some(f) = list
                .iter()
                .find(|f| *f.dom() != self.objects[x] || *f.cod() != self.objects[y])
            {
                return Err(CategoryError::HomShape {
                    src: self.names[x].clone(),
                    dst: self.names[y].clone(),
                    morphism: f.to_string(),
                });
            }
        }
        Ok(())
    }

    /// First composable pair `(f: X→Y, g: Y→Z)` whose composite is missing.
    fn closure_witness(&self) -> Option<(&Morphism, &Morphism, usize, usize)> {
        for (&(x, y), fs) in &self.homs {
            for z in 0..self.len() {
                let gs = self.hom(y, z);
                let target = self.hom(x, z);
                for f in fs {
                    for g in gs {
                        let gf = compose(g, f).expect("shapes checked");
                        if target.binary_search(&gf).is_err() {
                            return Some((f, g, x, z));
                        }
                    }
                }
            }
        }
        None
    }

    /// Only identity morphisms.
    pub fn identities_only<S: Into<String>>(objects: Vec<(S, FinObject)>) -> Result<Self, CategoryError> {
        let mut cat = Self::unchecked(objects, BTreeMap::new())?;
        for x in 0..cat.len() {
            cat.homs.insert((x, x), vec![Morphism::identity(&cat.objects[x])]);
        }
        Ok(cat)
    }

    /// Every morphism between every pair of objects.
    pub fn full<S: Into<String>>(objects: Vec<(S, FinObject)>, bounds: &SearchBounds) -> Result<Self, CategoryError> {
        let mut cat = Self::unchecked(objects, BTreeMap::new())?;
        for x in 0..cat.len() {
            for y in 0..cat.len() {
                let list: Vec<_> = enumerate_morphisms(&cat.objects[x], &cat.objects[y], bounds)?.collect();
                if !list.is_empty() {
                    cat.homs.insert((x, y), list);
                }
            }
        }
        Ok(cat)
    }

    /// The smallest subcategory containing the identities and `generators`
    /// (each `(src, dst, f)`). Fails once more than `bounds.max_candidates`
    /// morphisms have been produced.
    pub fn generated<S: Into<String>>(
        objects: Vec<(S, FinObject)>,
        generators: Vec<(usize, usize, Morphism)>,
        bounds: &SearchBounds,
    ) -> Result<Self, CategoryError> {
        let mut cat = Self::unchecked(objects, BTreeMap::new())?;
        let mut sets: BTreeMap<(usize, usize), BTreeSet<Morphism>> = BTreeMap::new();
        let mut frontier = Vec::new();
        for x in 0..cat.len() {
            let id = Morphism::identity(&cat.objects[x]);
            sets.entry((x, x)).or_default().insert(id.clone());
            frontier.push((x, x, id));
        }
        for (x, y, f) in generators {
            cat.object(x)?;
            cat.object(y)?;
            if *f.dom() != cat.objects[x] || *f.cod() != cat.objects[y] {
                return Err(CategoryError::HomShape {
                    src: cat.names[x].clone(),
                    dst: cat.names[y].clone(),
                    morphism: f.to_string(),
                });
            }
            if sets.entry((x, y)).or_default().insert(f.clone()) {
                frontier.push((x, y, f));
            }
        }
        let mut total: u64 = sets.values().map(|s| s.len() as u64).sum();
        while let Some((x, y, f)) = frontier.pop() {
            let mut fresh = Vec::new();
            for (&(a, b), hs) in &sets {
                // h∘f for h: y→b
                if a == y {
                    for h in hs {
                        fresh.push((x, b, compose(h, &f)?));
                    }
                }
                // f∘h for h: a→x
                if b == x {
                    for h in hs {
                        fresh.push((a, y, compose(&f, h)?));
                    }
                }
            }
            for (a, b, m) in fresh {
                if sets.entry((a, b)).or_default().insert(m.clone()) {
                    total += 1;
                    if total > bounds.max_candidates {
                        return Err(CategoryError::SearchSpaceTooLarge {
                            bound: bounds.max_candidates,
                        });
                    }
                    frontier.push((a, b, m));
                }
            }
        }
        cat.homs = sets.into_iter().map(|(k, s)| (k, s.into_iter().collect())).collect();
        Ok(cat)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, x: usize) -> Result<&FinObject, CategoryError> {
        self.objects.get(x).ok_or(CategoryError::UnknownObject(x))
    }

    pub fn objects(&self) -> &[FinObject] {
        &self.objects
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `hom(x, y)` in canonical order.
    pub fn hom(&self, x: usize, y: usize) -> &[Morphism] {
        self.homs.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, x: usize, y: usize, f: &Morphism) -> bool {
        self.hom(x, y).binary_search(f).is_ok()
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.values().map(Vec::len).sum()
    }

    pub fn max_hom_size(&self) -> usize {
        self.homs.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Invertible morphisms `x → y` whose inverse also lies in the category.
    pub fn isomorphisms(&self, x: usize, y: usize) -> impl Iterator<Item = &Morphism> + '_ {
        self.hom(x, y)
            .iter()
            .filter(move |f| f.inverse().is_some_and(|g| self.contains(y, x, &g)))
    }

    /// Identity, closure and associativity violations, one line each.
    pub fn axiom_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            let id = Morphism::identity(&self.objects[x]);
            if !self.contains(x, x, &id) {
                out.push(format!("identity: {} has no identity", self.names[x]));
            }
        }
        if let Some((f, g, src, dst)) = self.closure_witness() {
            out.push(format!(
                "closure: {g}∘{f} missing from hom({}, {})",
                self.names[src], self.names[dst]
            ));
        }
        for (&(w, x), fs) in &self.homs {
            for y in 0..self.len() {
                for z in 0..self.len() {
                    for f in fs {
                        for g in self.hom(x, y) {
                            for h in self.hom(y, z) {
                                let a = compose(h, &compose(g, f).expect("composable"));
                                let b = compose(&compose(h, g).expect("composable"), f);
                                if a != b {
                                    out.push(format!(
                                        "associativity: {h}, {g}, {f} on {}→{}",
                                        self.names[w], self.names[z]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Which rotations of an n-cycle must satisfy the regularity relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityMode {
    /// Only at the basepoint.
    Stated,
    /// At every position.
    #[default]
    #[serde(alias = "all-rotations")]
    AllRotations,
}

impl fmt::Display for RegularityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegularityMode::Stated => "stated",
            RegularityMode::AllRotations => "all_rotations",
        })
    }
}

/// A closed chain of morphisms; `legs[i]` maps `objects[i]` to
/// `objects[(i + 1) % n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NCycle {
    objects: Vec<usize>,
    legs: Vec<Morphism>,
}

impl NCycle {
    /// Validates that each leg belongs to the right hom-set of `cat`.
    pub fn new(cat: &FinCategory, objects: Vec<usize>, legs: Vec<Morphism>) -> Result<Self, CategoryError> {
        if objects.is_empty() || objects.len() != legs.len() {
            return Err(CategoryError::ChainBroken { position: 0 });
        }
        let n = objects.len();
        for (i, leg) in legs.iter().enumerate() {
            if !cat.contains(objects[i], objects[(i + 1) % n], leg) {
                return Err(CategoryError::ChainBroken { position: i });
            }
        }
        Ok(NCycle { objects, legs })
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn legs(&self) -> &[Morphism] {
        &self.legs
    }

    pub fn basepoint(&self) -> usize {
        self.objects[0]
    }

    /// The same cycle started at position `k`.
    pub fn rotated(&self, k: usize) -> NCycle {
        let k = k % self.len();
        let mut objects = self.objects.clone();
        let mut legs = self.legs.clone();
        objects.rotate_left(k);
        legs.rotate_left(k);
        NCycle { objects, legs }
    }

    /// `f_{i-1}∘…∘f_{i+1}∘f_i`, an endomorphism of `objects[i]`.
    pub fn obstruction(&self, i: usize) -> Morphism {
        let n = self.len();
        compose_path((0..n).map(|k| &self.legs[(i + k) % n])).expect("validated chain")
    }

    /// `f_i∘e_i = f_i`.
    pub fn relation_holds(&self, i: usize) -> bool {
        compose(&self.legs[i], &self.obstruction(i)).expect("validated chain") == self.legs[i]
    }

    pub fn is_regular(&self, mode: RegularityMode) -> bool {
        match mode {
            RegularityMode::Stated => self.relation_holds(0),
            RegularityMode::AllRotations => (0..self.len()).all(|i| self.relation_holds(i)),
        }
    }

    pub fn describe(&self, cat: &FinCategory) -> String {
        let mut s = String::new();
        for (x, f) in self.objects.iter().zip(&self.legs) {
            s.push_str(&format!("{} -{f}-> ", cat.names[*x]));
        }
        s.push_str(&cat.names[self.objects[0]]);
        s
    }
}

/// Regularity of `c` in `cat` under `mode`.
pub fn is_regular_ncycle(cat: &FinCategory, c: &NCycle, mode: RegularityMode) -> Result<bool, CategoryError> {
    NCycle::new(cat, c.objects.clone(), c.legs.clone())?;
    Ok(c.is_regular(mode))
}

/// The obstruction of `c` at position `i` (0-based).
pub fn obstruction_of(c: &NCycle, i: usize) -> Morphism {
    c.obstruction(i % c.len())
}

/// Every regular n-cycle of `cat`, in canonical order.
pub fn enumerate_regular_ncycles(
    cat: &FinCategory,
    n: usize,
    mode: RegularityMode,
    bounds: &SearchBounds,
) -> Result<Vec<NCycle>, CategoryError> {
    struct Walk<'a> {
        cat: &'a FinCategory,
        n: usize,
        mode: RegularityMode,
        bound: u64,
        visited: u64,
        objects: Vec<usize>,
        legs: Vec<Morphism>,
        out: Vec<NCycle>,
    }
    impl Walk<'_> {
        fn go(&mut self) -> Result<(), CategoryError> {
            let here = *self.objects.last().expect("nonempty");
            let closing = self.legs.len() + 1 == self.n;
            let targets: Vec<usize> = if closing {
                vec![self.objects[0]]
            } else {
                (0..self.cat.len()).collect()
            };
            for next in targets {
                for f in self.cat.hom(here, next) {
                    self.visited += 1;
                    if self.visited > self.bound {
                        return Err(CategoryError::SearchSpaceTooLarge { bound: self.bound });
                    }
                    self.legs.push(f.clone());
                    if closing {
                        let c = NCycle {
                            objects: self.objects.clone(),
                            legs: self.legs.clone(),
                        };
                        if c.is_regular(self.mode) {
                            self.out.push(c);
                        }
                    } else {
                        self.objects.push(next);
                        self.go()?;
                        self.objects.pop();
                    }
                    self.legs.pop();
                }
            }
            Ok(())
        }
    }
    let mut walk = Walk {
        cat,
        n,
        mode,
        bound: bounds.max_candidates,
        visited: 0,
        objects: Vec::new(),
        legs: Vec::new(),
        out: Vec::new(),
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    for start in 0..cat.len() {
        walk.objects = vec![start];
        walk.go()?;
    }
    let mut out = walk.out;
    out.sort();
    Ok(out)
}

/// Partition of the objects under isomorphism, each class sorted, classes
/// ordered by their least member.
pub fn object_equivalence_classes(cat: &FinCategory) -> Vec<Vec<usize>> {
    let n = cat.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && cat.isomorphisms(x, y).next().is_some() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    classes.into_values().collect()
}

/// `α∘e_X = e_Y∘α`.
pub fn is_obstruction_morphism(alpha: &Morphism, e_x: &Morphism, e_y: &Morphism) -> Result<bool, CategoryError> {
    Ok(compose(alpha, e_x)? == compose(e_y, alpha)?)
}

/// First (canonical-order) ladder `s₀ = id, s₁, …, s_{n-1}` of invertible
/// morphisms of `cat` with `s_{i+1}∘f_i = g_i∘s_i` for all `i` (indices mod
/// n), or `None`.
pub fn cycle_equivalence(
    cat: &FinCategory,
    f: &NCycle,
    g: &NCycle,
    bounds: &SearchBounds,
) -> Result<Option<Vec<Morphism>>, CategoryError> {
    if f.len() != g.len() || f.basepoint() != g.basepoint() {
        return Err(CategoryError::CycleMismatch);
    }
    let n = f.len();
    let mut visited = 0u64;
    fn extend(
        cat: &FinCategory,
        f: &NCycle,
        g: &NCycle,
        ladder: &mut Vec<Morphism>,
        visited: &mut u64,
        bound: u64,
    ) -> Result<bool, CategoryError> {
        let n = f.len();
        let i = ladder.len() - 1;
        let rhs = compose(&g.legs[i], &ladder[i])?;
        if i + 1 == n {
            return Ok(compose(&ladder[0], &f.legs[i])? == rhs);
        }
        let (src, dst) = (f.objects[i + 1], g.objects[i + 1]);
        for s in cat.isomorphisms(src, dst) {
            *visited += 1;
            if *visited > bound {
                return Err(CategoryError::SearchSpaceTooLarge { bound });
            }
            if compose(s, &f.legs[i])? == rhs {
                ladder.push(s.clone());
                if extend(cat, f, g, ladder, visited, bound)? {
                    return Ok(true);
                }
                ladder.pop();
            }
        }
        Ok(false)
    }
    let mut ladder = vec![Morphism::identity(cat.object(f.basepoint())?)];
    let found = extend(cat, f, g, &mut ladder, &mut visited, bounds.max_candidates)?;
    debug_assert!(!found || ladder.len() == n);
    Ok(found.then_some(ladder))
}

/// Obstructions assigned to objects, each with a cycle that produces it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionStructure {
    pub n: usize,
    pub entries: BTreeMap<usize, ObstructionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionEntry {
    pub obstruction: Morphism,
    pub witness: NCycle,
    pub position: usize,
}

impl ObstructionStructure {
    /// The obstructions along `c`; `None` if an object repeats with two
    /// different obstructions.
    pub fn from_cycle(c: &NCycle) -> Option<Self> {
        let mut entries = BTreeMap::new();
        for i in 0..c.len() {
            let e = c.obstruction(i);
            match entries.get(&c.objects[i]) {
                Some(ObstructionEntry { obstruction, .. }) if *obstruction != e => return None,
                Some(_) => {}
                None => {
                    entries.insert(
                        c.objects[i],
                        ObstructionEntry {
                            obstruction: e,
                            witness: c.clone(),
                            position: i,
                        },
                    );
                }
            }
        }
        Some(ObstructionStructure { n: c.len(), entries })
    }

    pub fn get(&self, x: usize) -> Option<&Morphism> {
        self.entries.get(&x).map(|e| &e.obstruction)
    }

    /// Every stored obstruction is recomputed from its witness.
    pub fn is_consistent(&self) -> bool {
        self.entries.iter().all(|(x, e)| {
            e.witness.len() == self.n
                && e.witness.objects.get(e.position) == Some(x)
                && e.witness.obstruction(e.position) == e.obstruction
        })
    }
}

/// Comparison of ladder-equivalence classes of regular n-cycles with the
/// obstructions they produce at their basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCountReport {
    pub n: usize,
    pub regular_cycles: usize,
    pub classes: usize,
    /// Distinct `(basepoint, obstruction)` pairs.
    pub structures: usize,
    pub bijective: bool,
    /// Two inequivalent cycles with the same basepoint and obstruction.
    pub collision: Option<(NCycle, NCycle)>,
}

/// Counts equivalence classes of regular n-cycles and the obstruction
/// structures they induce. Equivalent cycles always share their basepoint
/// obstruction, so the map from classes to structures is onto; it is a
/// bijection exactly when the two counts agree.
pub fn double_count(
    cat: &FinCategory,
    n: usize,
    mode: RegularityMode,
    bounds: &SearchBounds,
) -> Result<DoubleCountReport, CategoryError> {
    let cycles = enumerate_regular_ncycles(cat, n, mode, bounds)?;
    let mut groups: BTreeMap<(usize, Morphism), Vec<NCycle>> = BTreeMap::new();
    let mut classes = 0;
    let mut collision = None;
    for c in &cycles {
        let key = (c.basepoint(), c.obstruction(0));
        let reps = groups.entry(key).or_default();
        let mut matched = false;
        for r in reps.iter() {
            if cycle_equivalence(cat, r, c, bounds)?.is_some() {
                matched = true;
                break;
            }
        }
        if !matched {
            if let Some(first) = reps.first() {
                collision.get_or_insert_with(|| (first.clone(), c.clone()));
            }
            reps.push(c.clone());
            classes += 1;
        }
    }
    let structures = groups.len();
    Ok(DoubleCountReport {
        n,
        regular_cycles: cycles.len(),
        classes,
        structures,
        bijective: classes == structures,
        collision,
    })
}
