//! Covers with possibly noninvertible gluing maps.
//!
//! Chart `α` is the object `V_α` on which its coordinates live. The
//! semitransition `Φ_{αβ}` maps chart `β` to chart `α`. An optional model
//! object `M` comes with chart maps `φ_α: M → V_α`, and the gluing relation
//! is `Φ_{αβ}∘φ_β = φ_α` for every ordered overlap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grassmann::{berezinian, orientation_class, GrassmannError, OrientationClass, Supernumber};
use crate::morphism::{compose, enumerate_morphisms, Backend, FinObject, Morphism, MorphismError, SearchBounds};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemiAtlasError {
    #[error("unknown chart index {0}")]
    UnknownChart(usize),
    #[error("duplicate chart name `{0}`")]
    DuplicateChart(String),
    #[error("charts `{0}` and `{1}` do not overlap")]
    NotAnOverlap(String, String),
    #[error("missing transition {0}→{1}")]
    MissingTransition(String, String),
    #[error("transition {alpha}←{beta} must map {expected_dom} to {expected_cod}")]
    TransitionShape {
        alpha: String,
        beta: String,
        expected_dom: FinObject,
        expected_cod: FinObject,
    },
    #[error("chart map for `{0}` must map the model to the chart")]
    ChartMapShape(String),
    #[error("the atlas has no model object and chart maps")]
    MissingModel,
    #[error("no semitransition satisfies the gluing relation on: {}", .0.join(", "))]
    NoSolution(Vec<String>),
    #[error("operation requires the {0} backend")]
    BackendUnsupported(Backend),
    #[error("cycle must visit at least one chart")]
    EmptyCycle,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Charts, overlap graph, semitransitions and optional model data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiAtlas {
    names: Vec<String>,
    charts: Vec<FinObject>,
    /// Ordered pairs; symmetric by construction. `(α, α)` is a self-overlap.
    overlaps: BTreeSet<(usize, usize)>,
    transitions: BTreeMap<(usize, usize), Morphism>,
    model: Option<FinObject>,
    chart_maps: BTreeMap<usize, Morphism>,
}

impl SemiAtlas {
    pub fn new<I, S>(charts: I) -> Result<Self, SemiAtlasError>
    where
        I: IntoIterator<Item = (S, FinObject)>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut objs = Vec::new();
        for (name, obj) in charts {
            let name = name.into();
            if names.contains(&name) {
                return Err(SemiAtlasError::DuplicateChart(name));
            }
            names.push(name);
            objs.push(obj);
        }
        Ok(SemiAtlas {
            names,
            charts: objs,
            overlaps: BTreeSet::new(),
            transitions: BTreeMap::new(),
            model: None,
            chart_maps: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, alpha: usize) -> &str {
        &self.names[alpha]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn chart(&self, alpha: usize) -> Result<&FinObject, SemiAtlasError> {
        self.charts.get(alpha).ok_or(SemiAtlasError::UnknownChart(alpha))
    }

    pub fn charts(&self) -> &[FinObject] {
        &self.charts
    }

    pub fn model(&self) -> Option<&FinObject> {
        self.model.as_ref()
    }

    pub fn chart_map(&self, alpha: usize) -> Option<&Morphism> {
        self.chart_maps.get(&alpha)
    }

    /// Declares `α` and `β` overlapping (both orders).
    pub fn add_overlap(&mut self, alpha: usize, beta: usize) -> Result<(), SemiAtlasError> {
        self.chart(alpha)?;
        self.chart(beta)?;
        self.overlaps.insert((alpha, beta));
        self.overlaps.insert((beta, alpha));
        Ok(())
    }

    pub fn overlaps(&self, alpha: usize, beta: usize) -> bool {
        self.overlaps.contains(&(alpha, beta))
    }

    /// Ordered overlap pairs in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.overlaps.iter().copied()
    }

    /// Installs `Φ_{αβ}`, which must map chart `β` to chart `α`.
    pub fn set_transition(&mut self, alpha: usize, beta: usize, phi: Morphism) -> Result<(), SemiAtlasError> {
        let (dom, cod) = (*self.chart(beta)?, *self.chart(alpha)?);
        if !self.overlaps(alpha, beta) {
            return Err(SemiAtlasError::NotAnOverlap(
                self.names[alpha].clone(),
                self.names[beta].clone(),
            ));
        }
        if *phi.dom() != dom || *phi.cod() != cod {
            return Err(SemiAtlasError::TransitionShape {
                alpha: self.names[alpha].clone(),
                beta: self.names[beta].clone(),
                expected_dom: dom,
                expected_cod: cod,
            });
        }
        self.transitions.insert((alpha, beta), phi);
        Ok(())
    }

    pub fn transition(&self, alpha: usize, beta: usize) -> Result<&Morphism, SemiAtlasError> {
        self.transitions.get(&(alpha, beta)).ok_or_else(|| {
            SemiAtlasError::MissingTransition(
                self.names.get(alpha).cloned().unwrap_or_else(|| alpha.to_string()),
                self.names.get(beta).cloned().unwrap_or_else(|| beta.to_string()),
            )
        })
    }

    pub fn transitions(&self) -> impl Iterator<Item = ((usize, usize), &Morphism)> + '_ {
        self.transitions.iter().map(|(k, v)| (*k, v))
    }

    /// Sets the model object and the chart maps `φ_α: M → V_α`.
    pub fn set_model(&mut self, model: FinObject, maps: BTreeMap<usize, Morphism>) -> Result<(), SemiAtlasError> {
        for (&alpha, phi) in &maps {
            let chart = *self.chart(alpha)?;
            if *phi.dom() != model || *phi.cod() != chart {
                return Err(SemiAtlasError::ChartMapShape(self.names[alpha].clone()));
            }
        }
        self.model = Some(model);
        self.chart_maps = maps;
        Ok(())
    }

    /// Ordered overlaps whose gluing relation `Φ_{αβ}∘φ_β = φ_α` fails or
    /// cannot be evaluated.
    pub fn gluing_violations(&self) -> Vec<(usize, usize)> {
        self.edges()
            .filter(|&(a, b)| {
                let ok = (|| {
                    let phi = self.transitions.get(&(a, b))?;
                    let pb = self.chart_maps.get(&b)?;
                    let pa = self.chart_maps.get(&a)?;
                    Some(compose(phi, pb).ok()? == *pa)
                })();
                ok != Some(true)
            })
            .collect()
    }

    fn edge_label(&self, (a, b): (usize, usize)) -> String {
        format!("{}→{}", self.names[b], self.names[a])
    }
}

/// A closed walk `α₁ → … → α_n → α₁` through overlapping charts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Validates that consecutive indices and the closing pair overlap.
    pub fn new(atlas: &SemiAtlas, indices: Vec<usize>) -> Result<Self, SemiAtlasError> {
        if indices.is_empty() {
            return Err(SemiAtlasError::EmptyCycle);
        }
        for &i in &indices {
            atlas.chart(i)?;
        }
        let n = indices.len();
        for k in 0..n {
            let (a, b) = (indices[k], indices[(k + 1) % n]);
            if !atlas.overlaps(a, b) {
                return Err(SemiAtlasError::NotAnOverlap(
                    atlas.names[a].clone(),
                    atlas.names[b].clone(),
                ));
            }
        }
        Ok(Cycle(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn basepoint(&self) -> usize {
        self.0[0]
    }

    /// The same cycle started at position `k`.
    pub fn rotated(&self, k: usize) -> Cycle {
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Cycle(v)
    }

    pub fn labels(&self, atlas: &SemiAtlas) -> Vec<String> {
        self.0.iter().map(|&i| atlas.names[i].clone()).collect()
    }
}

/// The composite `e⁽ⁿ⁾ = Φ_{α₁α₂}∘Φ_{α₂α₃}∘…∘Φ_{α_nα₁}`, an endomorphism of
/// chart `α₁`. For a 1-cycle this is `Φ_{α₁α₁}`.
pub fn tower_identity(atlas: &SemiAtlas, cycle: &Cycle) -> Result<Morphism, SemiAtlasError> {
    let idx = cycle.indices();
    let n = idx.len();
    let mut acc = atlas.transition(idx[n - 1], idx[0])?.clone();
    for k in (0..n - 1).rev() {
        acc = compose(atlas.transition(idx[k], idx[k + 1])?, &acc)?;
    }
    Ok(acc)
}

/// All cycles of length `n` with pairwise distinct charts, in lexicographic
/// order of their index lists.
pub fn cycles_of_length(atlas: &SemiAtlas, n: usize) -> Vec<Cycle> {
    fn extend(atlas: &SemiAtlas, n: usize, path: &mut Vec<usize>, out: &mut Vec<Cycle>) {
        let last = *path.last().expect("nonempty path");
        if path.len() == n {
            if atlas.overlaps(last, path[0]) {
                out.push(Cycle(path.clone()));
            }
            return;
        }
        for next in 0..atlas.len() {
            if !path.contains(&next) && atlas.overlaps(last, next) {
                path.push(next);
                extend(atlas, n, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 || n > atlas.len() {
        return out;
    }
    for start in 0..atlas.len() {
        extend(atlas, n, &mut vec![start], &mut out);
    }
    out
}

/// Cycles of length `n` whose tower identity is not the identity. Cycles with
/// a missing transition are reported as broken.
pub fn check_cocycle(atlas: &SemiAtlas, n: usize) -> Vec<Cycle> {
    cycles_of_length(atlas, n)
        .into_iter()
        .filter(|c| !tower_identity(atlas, c).map(|e| e.is_identity()).unwrap_or(false))
        .collect()
}

/// For every rotation of the cycle, `e⁽ⁿ⁾∘Φ_{α₁α₂} = Φ_{α₁α₂}` at the rotated
/// basepoint `α₁`.
pub fn is_n_regular(atlas: &SemiAtlas, cycle: &Cycle) -> Result<bool, SemiAtlasError> {
    for k in 0..cycle.len() {
        let rot = cycle.rotated(k);
        let idx = rot.indices();
        let first = atlas.transition(idx[0], idx[1 % idx.len()])?;
        let e = tower_identity(atlas, &rot)?;
        if compose(&e, first)? != *first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One cycle's entry in a [`TowerReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRecord {
    pub n: usize,
    pub cycle: Vec<String>,
    /// `None` when a transition on the cycle is missing.
    pub obstruction: Option<Morphism>,
    pub cocycle_holds: bool,
    pub n_regular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub n_max: usize,
    pub records: Vec<TowerRecord>,
    /// Largest `n` with a broken cocycle condition, 0 when none is broken.
    pub obstructedness_degree: usize,
}

/// Runs the cocycle and regularity checks for every cycle of length
/// `1..=n_max` (default: number of charts).
pub fn obstructedness_degree(atlas: &SemiAtlas, n_max: Option<usize>) -> TowerReport {
    let n_max = n_max.unwrap_or(atlas.len());
    let mut records = Vec::new();
    let mut degree = 0;
    for n in 1..=n_max {
        for cycle in cycles_of_length(atlas, n) {
            let obstruction = tower_identity(atlas, &cycle).ok();
            let cocycle_holds = obstruction.as_ref().is_some_and(Morphism::is_identity);
            let n_regular = is_n_regular(atlas, &cycle).unwrap_or(false);
            if !cocycle_holds {
                degree = n;
            }
            records.push(TowerRecord {
                n,
                cycle: cycle.labels(atlas),
                obstruction,
                cocycle_holds,
                n_regular,
            });
        }
    }
    TowerReport {
        n_max,
        records,
        obstructedness_degree: degree,
    }
}

/// Solution count of the gluing relation on one ordered overlap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSolutions {
    /// Target chart `α` of `Φ_{αβ}`.
    pub alpha: String,
    /// Source chart `β` of `Φ_{αβ}`.
    pub beta: String,
    pub solutions: u64,
}

/// Fills every overlap with the first (canonical-order) `Φ_{αβ}` satisfying
/// `Φ_{αβ}∘φ_β = φ_α`, reporting how many solutions each overlap admits.
pub fn derive_transitions(
    atlas: &SemiAtlas,
    bounds: &SearchBounds,
) -> Result<(SemiAtlas, Vec<EdgeSolutions>), SemiAtlasError> {
    if atlas.model.is_none() || atlas.chart_maps.len() != atlas.len() {
        return Err(SemiAtlasError::MissingModel);
    }
    if atlas.charts.iter().any(|c| c.backend() != Backend::FinMap) {
        return Err(SemiAtlasError::BackendUnsupported(Backend::FinMap));
    }
    let mut out = atlas.clone();
    let mut counts = Vec::new();
    let mut failing = Vec::new();
    for (a, b) in atlas.edges() {
        let (pa, pb) = (&atlas.chart_maps[&a], &atlas.chart_maps[&b]);
        let mut first = None;
        let mut count = 0u64;
        for phi in enumerate_morphisms(&atlas.charts[b], &atlas.charts[a], bounds)? {
            if compose(&phi, pb)? == *pa {
                count += 1;
                first.get_or_insert(phi);
            }
        }
        counts.push(EdgeSolutions {
            alpha: atlas.names[a].clone(),
            beta: atlas.names[b].clone(),
            solutions: count,
        });
        match first {
            Some(phi) => {
                out.transitions.insert((a, b), phi);
            }
            None => failing.push(atlas.edge_label((a, b))),
        }
    }
    if failing.is_empty() {
        Ok((out, counts))
    } else {
        Err(SemiAtlasError::NoSolution(failing))
    }
}

/// Orientation datum of one ordered overlap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrientation {
    pub alpha: String,
    pub beta: String,
    /// `None` when the Berezinian is undefined.
    pub berezinian: Option<Supernumber>,
    pub d_block_singular: bool,
    pub class: OrientationClass,
}

/// Berezinian and orientation class of every installed supermatrix
/// transition.
pub fn orientation_report(atlas: &SemiAtlas) -> Result<Vec<EdgeOrientation>, SemiAtlasError> {
    if atlas.charts.iter().any(|c| c.backend() != Backend::Super) {
        return Err(SemiAtlasError::BackendUnsupported(Backend::Super));
    }
    let mut out = Vec::new();
    for (a, b) in atlas.edges() {
        let phi = atlas.transition(a, b)?;
        let m = phi.super_matrix().expect("super backend");
        let ber = berezinian(m);
        let d_block_singular = ber == Err(GrassmannError::DBlockSingular);
        let ber = ber.ok();
        out.push(EdgeOrientation {
            alpha: atlas.names[a].clone(),
            beta: atlas.names[b].clone(),
            class: orientation_class(ber.as_ref(), m),
            berezinian: ber,
            d_block_singular,
        });
    }
    Ok(out)
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{Sign, SuperDim, SuperMatrix};
    use crate::rational::int;

    fn map(t: &[usize]) -> Morphism {
        Morphism::endo_map(t.to_vec()).unwrap()
    }

    fn two_chart(phi_ab: &[usize], phi_ba: &[usize]) -> SemiAtlas {
        let mut a = SemiAtlas::new([("a", FinObject::set(2)), ("b", FinObject::set(2))]).unwrap();
        a.add_overlap(0, 1).unwrap();
        a.set_transition(0, 1, map(phi_ab)).unwrap();
        a.set_transition(1, 0, map(phi_ba)).unwrap();
        a
    }

    #[test]
    fn tower_identity_examples() {
        let inv = two_chart(&[1, 0], &[1, 0]);
        let c = Cycle::new(&inv, vec![0, 1]).unwrap();
        assert!(tower_identity(&inv, &c).unwrap().is_identity());

        let mut one = SemiAtlas::new([("a", FinObject::set(2))]).unwrap();
        one.add_overlap(0, 0).unwrap();
        one.set_transition(0, 0, map(&[0, 1])).unwrap();
        let c = Cycle::new(&one, vec![0]).unwrap();
        assert!(tower_identity(&one, &c).unwrap().is_identity());

        let bad = two_chart(&[0, 0], &[0, 1]);
        let c = Cycle::new(&bad, vec![0, 1]).unwrap();
        assert_eq!(tower_identity(&bad, &c).unwrap(), map(&[0, 0]));
    }

    #[test]
    fn tower_identity_composes_in_cycle_order() {
        let mut a = SemiAtlas::new([
            ("a", FinObject::set(1)),
            ("b", FinObject::set(2)),
            ("c", FinObject::set(3)),
        ])
        .unwrap();
        a.add_overlap(0, 1).unwrap();
        a.add_overlap(1, 2).unwrap();
        a.add_overlap(2, 0).unwrap();
        // Φ_ab: b→a, Φ_bc: c→b, Φ_ca: a→c
        a.set_transition(0, 1, Morphism::fin_map(2, 1, vec![0, 0]).unwrap())
            .unwrap();
        a.set_transition(1, 2, Morphism::fin_map(3, 2, vec![1, 0, 0]).unwrap())
            .unwrap();
        a.set_transition(2, 0, Morphism::fin_map(1, 3, vec![2]).unwrap())
            .unwrap();
        let e = tower_identity(&a, &Cycle::new(&a, vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(e.dom(), &FinObject::set(1));
        assert!(e.is_identity());
        // b → a → c → b sends both points of b to 0
        let e_b = tower_identity(&a, &Cycle::new(&a, vec![1, 2, 0]).unwrap()).unwrap();
        assert_eq!(e_b, map(&[0, 0]));
        assert!(tower_identity(&a, &Cycle::new(&a, vec![0, 2, 1]).unwrap()).is_err());
    }

    #[test]
    fn cocycle_examples() {
        let inv = two_chart(&[1, 0], &[1, 0]);
        assert!(check_cocycle(&inv, 1).is_empty());
        assert!(check_cocycle(&inv, 2).is_empty());
        let bad = two_chart(&[0, 0], &[0, 1]);
        let broken = check_cocycle(&bad, 2);
        assert!(broken.contains(&Cycle(vec![0, 1])));
        let mut lonely = SemiAtlas::new([("a", FinObject::set(2))]).unwrap();
        assert!(check_cocycle(&lonely, 1).is_empty());
        lonely.add_overlap(0, 0).unwrap();
        assert_eq!(check_cocycle(&lonely, 1).len(), 1);
    }

    #[test]
    fn n_regular_truth_table_matches_oracle() {
        let bounds = SearchBounds::default();
        for g in enumerate_morphisms(&FinObject::set(2), &FinObject::set(2), &bounds).unwrap() {
            let t = g.table().unwrap().to_vec();
            let atlas = two_chart(&[0, 0], &t);
            let c = Cycle::new(&atlas, vec![0, 1]).unwrap();
            // oracle: at a, [0,0]∘g∘[0,0] = [0,0] always; at b, g∘[0,0]∘g = g iff g constant
            let expected = t[0] == t[1];
            assert_eq!(is_n_regular(&atlas, &c).unwrap(), expected, "g = {t:?}");
        }
    }

    #[test]
    fn three_cycle_with_mixed_rotations_is_not_regular() {
        let bounds = SearchBounds::default();
        let maps: Vec<_> = enumerate_morphisms(&FinObject::set(2), &FinObject::set(2), &bounds)
            .unwrap()
            .collect();
        let mut found = false;
        'search: for f in &maps {
            for g in &maps {
                for h in &maps {
                    let mut a = SemiAtlas::new([
                        ("a", FinObject::set(2)),
                        ("b", FinObject::set(2)),
                        ("c", FinObject::set(2)),
                    ])
                    .unwrap();
                    a.add_overlap(0, 1).unwrap();
                    a.add_overlap(1, 2).unwrap();
                    a.add_overlap(2, 0).unwrap();
                    let id = map(&[0, 1]);
                    for (x, y) in [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)] {
                        a.set_transition(x, y, id.clone()).unwrap();
                    }
                    a.set_transition(0, 1, f.clone()).unwrap();
                    a.set_transition(1, 2, g.clone()).unwrap();
                    a.set_transition(2, 0, h.clone()).unwrap();
                    let c = Cycle::new(&a, vec![0, 1, 2]).unwrap();
                    let rotation_holds = |k: usize| {
                        let r = c.rotated(k);
                        let i = r.indices();
                        let first = a.transition(i[0], i[1]).unwrap();
                        compose(&tower_identity(&a, &r).unwrap(), first).unwrap() == *first
                    };
                    let holds: Vec<bool> = (0..3).map(rotation_holds).collect();
                    if holds.contains(&true) && holds.contains(&false) {
                        assert!(!is_n_regular(&a, &c).unwrap());
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn obstructedness_examples() {
        let inv = two_chart(&[1, 0], &[1, 0]);
        assert_eq!(obstructedness_degree(&inv, None).obstructedness_degree, 0);

        let mut one = SemiAtlas::new([("a", FinObject::set(2))]).unwrap();
        one.add_overlap(0, 0).unwrap();
        one.set_transition(0, 0, map(&[0, 0])).unwrap();
        let r = obstructedness_degree(&one, None);
        assert_eq!(r.obstructedness_degree, 1);
        assert!(r.records[0].n_regular);

        let bad = two_chart(&[0, 0], &[0, 1]);
        let r = obstructedness_degree(&bad, None);
        assert_eq!(r.n_max, 2);
        assert_eq!(r.obstructedness_degree, 2);
        assert_eq!(r.records[0].obstruction, Some(map(&[0, 0])));
    }

    fn model_atlas(phis: &[&[usize]], chart_size: usize) -> SemiAtlas {
        let model = FinObject::set(phis[0].len());
        let charts: Vec<_> = (0..phis.len())
            .map(|i| (format!("c{i}"), FinObject::set(chart_size)))
            .collect();
        let mut a = SemiAtlas::new(charts).unwrap();
        for i in 0..phis.len() {
            for j in i + 1..phis.len() {
                a.add_overlap(i, j).unwrap();
            }
        }
        let maps = phis
            .iter()
            .enumerate()
            .map(|(i, t)| (i, Morphism::fin_map(t.len(), chart_size, t.to_vec()).unwrap()))
            .collect();
        a.set_model(model, maps).unwrap();
        a
    }

    #[test]
    fn derive_bijective_charts_gives_classical_transitions() {
        let a = model_atlas(&[&[0, 1], &[1, 0]], 2);
        let (derived, counts) = derive_transitions(&a, &SearchBounds::default()).unwrap();
        assert!(counts.iter().all(|c| c.solutions == 1));
        let pa = a.chart_map(0).unwrap();
        let pb = a.chart_map(1).unwrap();
        assert_eq!(
            derived.transition(0, 1).unwrap(),
            &compose(pa, &pb.inverse().unwrap()).unwrap()
        );
        assert!(derived.gluing_violations().is_empty());
    }

    #[test]
    fn derive_constant_charts_counts_two_solutions() {
        let a = model_atlas(&[&[0, 0], &[0, 0]], 2);
        let (derived, counts) = derive_transitions(&a, &SearchBounds::default()).unwrap();
        // oracle: Φ(0) = 0 is forced, Φ(1) is free
        assert_eq!(counts.iter().map(|c| c.solutions).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(derived.transition(0, 1).unwrap(), &map(&[0, 0]));
        assert!(derived.gluing_violations().is_empty());
    }

    #[test]
    fn derive_mixed_charts_reports_unsolvable_edge() {
        // φ_a constant, φ_b bijective: Φ_ab∘φ_b = φ_a has the unique solution
        // Φ_ab = [0,0]; Φ_ba∘φ_a = φ_b would need a constant map to be onto.
        let a = model_atlas(&[&[0, 0], &[0, 1]], 2);
        let bounds = SearchBounds::default();
        let mut oracle = Vec::new();
        for (x, y) in [(0usize, 1usize), (1, 0)] {
            let count = enumerate_morphisms(&FinObject::set(2), &FinObject::set(2), &bounds)
                .unwrap()
                .filter(|p| compose(p, a.chart_map(y).unwrap()).unwrap() == *a.chart_map(x).unwrap())
                .count();
            oracle.push(count);
        }
        assert_eq!(oracle, vec![1, 0]);
        match derive_transitions(&a, &bounds) {
            Err(SemiAtlasError::NoSolution(edges)) => assert_eq!(edges, vec!["c0→c1".to_string()]),
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn orientation_report_examples() {
        let dim = SuperDim::new(1, 1);
        let obj = FinObject::superspace(dim, 2);
        let mut a = SemiAtlas::new([("a", obj), ("b", obj)]).unwrap();
        a.add_overlap(0, 1).unwrap();
        a.set_transition(0, 1, Morphism::identity(&obj)).unwrap();
        let t12 = Supernumber::monomial(2, &[1, 2], int(1)).unwrap();
        let z = Supernumber::zero(2);
        let m = SuperMatrix::square(dim, 2, vec![vec![t12.clone(), z.clone()], vec![z, Supernumber::one(2)]]).unwrap();
        a.set_transition(1, 0, Morphism::supermatrix(m)).unwrap();
        let r = orientation_report(&a).unwrap();
        assert_eq!(
            r[0].class,
            OrientationClass::Signed {
                a: Sign::Plus,
                d: Sign::Plus
            }
        );
        assert_eq!(r[1].berezinian, Some(t12));
        assert_eq!(r[1].class, OrientationClass::Nilpotent { index: 2 });
        assert!(!r[1].d_block_singular);
    }
}
