//! The regularization 2-category of a finite category.
//!
//! * 0-cells: an isomorphism class of objects (represented by its least
//!   member `X`) together with an obstruction `e` produced at `X` by some
//!   regular n-cycle.
//! * 1-cells `(X, e) → (Y, e')`: morphisms `α: X → Y` of the category with
//!   `α∘e = e'∘α`.
//! * 2-cells `α ⇒ β` between parallel 1-cells: present exactly when
//!   `e'∘α = e'∘β`, so there is at most one between any pair.
//!
//! Being equalized by `e'` is a congruence for composition of obstruction
//! morphisms, so horizontal composition is well defined. Every `e` is
//! idempotent, which makes `e` and the identity 2-isomorphic 1-cells.
//!
//! All composition tables are stored explicitly so a serialized instance can
//! be re-verified independently of its construction.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{
    enumerate_regular_ncycles, object_equivalence_classes, CategoryError, FinCategory, NCycle, RegularityMode,
};
use crate::morphism::{compose, Morphism, SearchBounds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCell {
    /// Representative object of the isomorphism class.
    pub object: usize,
    /// All objects of the class.
    pub class: Vec<usize>,
    pub obstruction: Morphism,
    /// A regular n-cycle based at `object` with this obstruction.
    pub witness: NCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneCell {
    pub src: usize,
    pub dst: usize,
    pub morphism: Morphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoCell {
    /// Source 1-cell.
    pub src: usize,
    /// Target 1-cell.
    pub dst: usize,
}

/// Cells and composition tables. Table rows `[a, b, c]` read "`b` after `a`
/// is `c`": for 1-cells `c = b∘a`, for vertical composition of 2-cells
/// `a: α ⇒ β`, `b: β ⇒ γ`, and for horizontal composition `a` lives over
/// `X → Y` and `b` over `Y → Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reg2Category {
    pub n: usize,
    pub mode: RegularityMode,
    pub object_names: Vec<String>,
    pub zero_cells: Vec<ZeroCell>,
    pub one_cells: Vec<OneCell>,
    pub two_cells: Vec<TwoCell>,
    /// Identity 1-cell of each 0-cell.
    pub identities: Vec<usize>,
    /// The 1-cell given by the obstruction of each 0-cell.
    pub obstruction_cells: Vec<usize>,
    pub one_cell_composition: Vec<[usize; 3]>,
    pub vertical_composition: Vec<[usize; 3]>,
    pub horizontal_composition: Vec<[usize; 3]>,
}

/// Builds the regularization of `cat` from its regular n-cycles.
pub fn build_regularization(
    cat: &FinCategory,
    n: usize,
    mode: RegularityMode,
    bounds: &SearchBounds,
) -> Result<Reg2Category, CategoryError> {
    let cycles = enumerate_regular_ncycles(cat, n, mode, bounds)?;
    let mut zero_cells = Vec::new();
    for class in object_equivalence_classes(cat) {
        let rep = class[0];
        let mut found: BTreeMap<Morphism, &NCycle> = BTreeMap::new();
        for c in cycles.iter().filter(|c| c.basepoint() == rep) {
            found.entry(c.obstruction(0)).or_insert(c);
        }
        for (e, w) in found {
            zero_cells.push(ZeroCell {
                object: rep,
                class: class.clone(),
                obstruction: e,
                witness: w.clone(),
            });
        }
    }

    let mut one_cells = Vec::new();
    for (i, zi) in zero_cells.iter().enumerate() {
        for (j, zj) in zero_cells.iter().enumerate() {
            for alpha in cat.hom(zi.object, zj.object) {
                if compose(alpha, &zi.obstruction)? == compose(&zj.obstruction, alpha)? {
                    one_cells.push(OneCell {
                        src: i,
                        dst: j,
                        morphism: alpha.clone(),
                    });
                }
            }
        }
    }
    let one_index: HashMap<(usize, usize, &Morphism), usize> = one_cells
        .iter()
        .enumerate()
        .map(|(k, c)| ((c.src, c.dst, &c.morphism), k))
        .collect();
    let lookup = |src: usize, dst: usize, m: &Morphism| one_index.get(&(src, dst, m)).copied();

    let identities = zero_cells
        .iter()
        .enumerate()
        .map(|(i, z)| lookup(i, i, &Morphism::identity(&cat.objects()[z.object])).expect("identity is a 1-cell"))
        .collect();
    let obstruction_cells = zero_cells
        .iter()
        .enumerate()
        .map(|(i, z)| lookup(i, i, &z.obstruction).expect("idempotent obstruction is a 1-cell"))
        .collect();

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); zero_cells.len()];
    for (k, c) in one_cells.iter().enumerate() {
        outgoing[c.src].push(k);
    }
    let mut one_cell_composition = Vec::new();
    let mut composite: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, ca) in one_cells.iter().enumerate() {
        for &b in &outgoing[ca.dst] {
            let cb = &one_cells[b];
            let m = compose(&cb.morphism, &ca.morphism)?;
            if let Some(c) = lookup(ca.src, cb.dst, &m) {
                one_cell_composition.push([a, b, c]);
                composite.insert((a, b), c);
            }
        }
    }

    let mut two_cells = Vec::new();
    let mut by_hom: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, c) in one_cells.iter().enumerate() {
        by_hom.entry((c.src, c.dst)).or_default().push(k);
    }
    for (&(_, dst), cells) in &by_hom {
        let e = &zero_cells[dst].obstruction;
        let reduced: Vec<Morphism> = cells
            .iter()
            .map(|&k| compose(e, &one_cells[k].morphism))
            .collect::<Result<_, _>>()?;
        for (p, &a) in cells.iter().enumerate() {
            for (q, &b) in cells.iter().enumerate() {
                if reduced[p] == reduced[q] {
                    two_cells.push(TwoCell { src: a, dst: b });
                }
            }
        }
    }
    two_cells.sort();
    let two_index: HashMap<TwoCell, usize> = two_cells.iter().enumerate().map(|(k, t)| (*t, k)).collect();

    let mut from_cell: Vec<Vec<usize>> = vec![Vec::new(); one_cells.len()];
    for (k, t) in two_cells.iter().enumerate() {
        from_cell[t.src].push(k);
    }
    let mut vertical_composition = Vec::new();
    for (a, ta) in two_cells.iter().enumerate() {
        for &b in &from_cell[ta.dst] {
            let tb = two_cells[b];
            if let Some(&c) = two_index.get(&TwoCell {
                src: ta.src,
                dst: tb.dst,
            }) {
                vertical_composition.push([a, b, c]);
            }
        }
    }

    let mut two_from_zero: Vec<Vec<usize>> = vec![Vec::new(); zero_cells.len()];
    for (k, t) in two_cells.iter().enumerate() {
        two_from_zero[one_cells[t.src].src].push(k);
    }
    let mut horizontal_composition = Vec::new();
    for (a, ta) in two_cells.iter().enumerate() {
        let y = one_cells[ta.src].dst;
        for &b in &two_from_zero[y] {
            let tb = two_cells[b];
            let src = composite.get(&(ta.src, tb.src));
            let dst = composite.get(&(ta.dst, tb.dst));
            if let (Some(&s), Some(&d)) = (src, dst) {
                if let Some(&c) = two_index.get(&TwoCell { src: s, dst: d }) {
                    horizontal_composition.push([a, b, c]);
                }
            }
        }
    }

    Ok(Reg2Category {
        n,
        mode,
        object_names: cat.names().to_vec(),
        zero_cells,
        one_cells,
        two_cells,
        identities,
        obstruction_cells,
        one_cell_composition,
        vertical_composition,
        horizontal_composition,
    })
}

/// Outcome of one axiom family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub law: String,
    pub checked: u64,
    /// At most [`MAX_WITNESSES`] concrete counterexamples.
    pub violations: Vec<String>,
    pub violation_count: u64,
}

/// Counterexamples retained per law.
pub const MAX_WITNESSES: usize = 8;

impl AxiomCheck {
    fn new(law: &str) -> Self {
        AxiomCheck {
            law: law.to_string(),
            checked: 0,
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn violation_count(&self) -> u64 {
        self.checks.iter().map(|c| c.violation_count).sum()
    }

    pub fn check(&self, law: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

/// Binary table with duplicate detection.
struct Table {
    map: HashMap<(usize, usize), usize>,
    duplicates: Vec<(usize, usize)>,
}

impl Table {
    fn new(rows: &[[usize; 3]]) -> Self {
        let mut map = HashMap::with_capacity(rows.len());
        let mut duplicates = Vec::new();
        for &[a, b, c] in rows {
            if map.insert((a, b), c).is_some() {
                duplicates.push((a, b));
            }
        }
        Table { map, duplicates }
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.map.get(&(a, b)).copied()
    }
}

/// Checks every strict 2-category law on the stored cells and tables.
pub fn verify_2category_axioms(r: &Reg2Category) -> AxiomReport {
    let z = &r.zero_cells;
    let ones = &r.one_cells;
    let twos = &r.two_cells;
    let mut checks = Vec::new();

    let valid_one = |k: usize| k < ones.len() && ones[k].src < z.len() && ones[k].dst < z.len();
    let valid_two = |k: usize| k < twos.len() && valid_one(twos[k].src) && valid_one(twos[k].dst);

    let mut idem = AxiomCheck::new("obstruction idempotent");
    for (i, zc) in z.iter().enumerate() {
        let ok = compose(&zc.obstruction, &zc.obstruction).ok().as_ref() == Some(&zc.obstruction)
            && zc.witness.obstruction(0) == zc.obstruction
            && zc.witness.basepoint() == zc.object;
        idem.record(ok, || format!("0-cell {i}: e = {}", zc.obstruction));
    }
    checks.push(idem);

    let mut law = AxiomCheck::new("obstruction morphism law");
    for (k, c) in ones.iter().enumerate() {
        let ok = valid_one(k) && {
            let (ex, ey) = (&z[c.src].obstruction, &z[c.dst].obstruction);
            compose(&c.morphism, ex).ok() == compose(ey, &c.morphism).ok() && compose(&c.morphism, ex).is_ok()
        };
        law.record(ok, || {
            format!("1-cell {k}: α = {} from 0-cell {} to {}", c.morphism, c.src, c.dst)
        });
    }
    checks.push(law);

    let t1 = Table::new(&r.one_cell_composition);
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); z.len()];
    for (k, c) in ones.iter().enumerate() {
        if valid_one(k) {
            outgoing[c.src].push(k);
        }
    }
    let mut closure = AxiomCheck::new("1-cell composition closure");
    for &(a, b) in &t1.duplicates {
        closure.record(false, || format!("duplicate entry for ({a}, {b})"));
    }
    for (a, ca) in ones.iter().enumerate().filter(|(a, _)| valid_one(*a)) {
        for &b in &outgoing[ca.dst] {
            let cb = &ones[b];
            let ok = t1.get(a, b).is_some_and(|c| {
                valid_one(c)
                    && ones[c].src == ca.src
                    && ones[c].dst == cb.dst
                    && compose(&cb.morphism, &ca.morphism).ok().as_ref() == Some(&ones[c].morphism)
            });
            closure.record(ok, || {
                format!(
                    "1-cells ({a}, {b}): composite {}∘{} missing or wrong",
                    cb.morphism, ca.morphism
                )
            });
        }
    }
    checks.push(closure);

    let mut assoc = AxiomCheck::new("1-cell composition associativity");
    for (a, ca) in ones.iter().enumerate().filter(|(a, _)| valid_one(*a)) {
        for &b in &outgoing[ca.dst] {
            for &c in &outgoing[ones[b].dst] {
                let lhs = t1.get(a, b).and_then(|ab| t1.get(ab, c));
                let rhs = t1.get(b, c).and_then(|bc| t1.get(a, bc));
                assoc.record(lhs.is_some() && lhs == rhs, || {
                    format!("1-cells ({a}, {b}, {c}): {lhs:?} vs {rhs:?}")
                });
            }
        }
    }
    checks.push(assoc);

    let mut ident = AxiomCheck::new("identity 1-cells");
    for (i, &id) in r.identities.iter().enumerate() {
        let ok = valid_one(id) && ones[id].src == i && ones[id].dst == i && ones[id].morphism.is_identity();
        ident.record(ok, || format!("0-cell {i}: 1-cell {id} is not its identity"));
        if !ok {
            continue;
        }
        for &a in &outgoing[i] {
            ident.record(t1.get(id, a) == Some(a), || format!("1-cell {a}∘id{i} ≠ {a}"));
        }
        for (a, ca) in ones.iter().enumerate() {
            if ca.dst == i && valid_one(a) {
                ident.record(t1.get(a, id) == Some(a), || format!("id{i}∘1-cell {a} ≠ {a}"));
            }
        }
    }
    ident.record(r.identities.len() == z.len(), || "identity list length".into());
    checks.push(ident);

    let two_index: HashMap<TwoCell, usize> = twos.iter().enumerate().map(|(k, t)| (*t, k)).collect();

    let mut ecells = AxiomCheck::new("obstruction 1-cells");
    for (i, &e) in r.obstruction_cells.iter().enumerate() {
        let ok = valid_one(e)
            && i < z.len()
            && ones[e].src == i
            && ones[e].dst == i
            && ones[e].morphism == z[i].obstruction
            && t1.get(e, e) == Some(e)
            && r.identities.get(i).is_some_and(|&id| {
                two_index.contains_key(&TwoCell { src: e, dst: id })
                    && two_index.contains_key(&TwoCell { src: id, dst: e })
            });
        ecells.record(ok, || {
            format!("0-cell {i}: obstruction 1-cell {e} is not an idempotent 2-isomorphic to the identity")
        });
    }
    ecells.record(r.obstruction_cells.len() == z.len(), || {
        "obstruction list length".into()
    });
    checks.push(ecells);

    let mut valid = AxiomCheck::new("2-cell validity");
    for (k, t) in twos.iter().enumerate() {
        let ok = valid_two(k) && {
            let (a, b) = (&ones[t.src], &ones[t.dst]);
            let e = &z[a.dst].obstruction;
            a.src == b.src && a.dst == b.dst && compose(e, &a.morphism).ok() == compose(e, &b.morphism).ok()
        };
        valid.record(ok, || format!("2-cell {k}: {} ⇒ {}", t.src, t.dst));
    }
    for (a, ca) in ones.iter().enumerate().filter(|(a, _)| valid_one(*a)) {
        valid.record(two_index.contains_key(&TwoCell { src: a, dst: a }), || {
            format!("1-cell {a} ({}) has no identity 2-cell", ca.morphism)
        });
    }
    checks.push(valid);

    let tv = Table::new(&r.vertical_composition);
    let mut from_cell: Vec<Vec<usize>> = vec![Vec::new(); ones.len()];
    for (k, t) in twos.iter().enumerate() {
        if valid_two(k) {
            from_cell[t.src].push(k);
        }
    }
    let mut vclosure = AxiomCheck::new("vertical composition");
    for &(a, b) in &tv.duplicates {
        vclosure.record(false, || format!("duplicate entry for ({a}, {b})"));
    }
    for (a, ta) in twos.iter().enumerate().filter(|(a, _)| valid_two(*a)) {
        for &b in &from_cell[ta.dst] {
            let ok = tv
                .get(a, b)
                .is_some_and(|c| c < twos.len() && twos[c].src == ta.src && twos[c].dst == twos[b].dst);
            vclosure.record(ok, || {
                format!("2-cells ({a}, {b}): vertical composite missing or wrong")
            });
        }
        let id_src = two_index.get(&TwoCell {
            src: ta.src,
            dst: ta.src,
        });
        let id_dst = two_index.get(&TwoCell {
            src: ta.dst,
            dst: ta.dst,
        });
        if let (Some(&is), Some(&id)) = (id_src, id_dst) {
            vclosure.record(tv.get(is, a) == Some(a) && tv.get(a, id) == Some(a), || {
                format!("2-cell {a}: identity 2-cells do not act trivially")
            });
        }
    }
    checks.push(vclosure);

    let mut vassoc = AxiomCheck::new("vertical associativity");
    for (a, ta) in twos.iter().enumerate().filter(|(a, _)| valid_two(*a)) {
        for &b in &from_cell[ta.dst] {
            for &c in &from_cell[twos[b].dst] {
                let lhs = tv.get(a, b).and_then(|ab| tv.get(ab, c));
                let rhs = tv.get(b, c).and_then(|bc| tv.get(a, bc));
                vassoc.record(lhs.is_some() && lhs == rhs, || format!("2-cells ({a}, {b}, {c})"));
            }
        }
    }
    checks.push(vassoc);

    let th = Table::new(&r.horizontal_composition);
    let mut two_from_zero: Vec<Vec<usize>> = vec![Vec::new(); z.len()];
    for (k, t) in twos.iter().enumerate() {
        if valid_two(k) {
            two_from_zero[ones[t.src].src].push(k);
        }
    }
    let mut hclosure = AxiomCheck::new("horizontal composition");
    for &(a, b) in &th.duplicates {
        hclosure.record(false, || format!("duplicate entry for ({a}, {b})"));
    }
    for (a, ta) in twos.iter().enumerate().filter(|(a, _)| valid_two(*a)) {
        for &b in &two_from_zero[ones[ta.src].dst] {
            let tb = twos[b];
            let want_src = t1.get(ta.src, tb.src);
            let want_dst = t1.get(ta.dst, tb.dst);
            let ok = th
                .get(a, b)
                .is_some_and(|c| c < twos.len() && Some(twos[c].src) == want_src && Some(twos[c].dst) == want_dst);
            hclosure.record(ok, || {
                format!("2-cells ({a}, {b}): horizontal composite missing or has wrong boundary")
            });
        }
    }
    checks.push(hclosure);

    let mut hassoc = AxiomCheck::new("horizontal associativity");
    for (a, ta) in twos.iter().enumerate().filter(|(a, _)| valid_two(*a)) {
        for &b in &two_from_zero[ones[ta.src].dst] {
            for &c in &two_from_zero[ones[twos[b].src].dst] {
                let lhs = th.get(a, b).and_then(|ab| th.get(ab, c));
                let rhs = th.get(b, c).and_then(|bc| th.get(a, bc));
                hassoc.record(lhs.is_some() && lhs == rhs, || format!("2-cells ({a}, {b}, {c})"));
            }
        }
    }
    checks.push(hassoc);

    // (χ·ψ)∘(φ·θ) = (χ∘φ)·(ψ∘θ) for θ: α⇒β, ψ: β⇒γ over X→Y and φ: δ⇒ε,
    // χ: ε⇒ζ over Y→Z, with · vertical and ∘ horizontal.
    let mut interchange = AxiomCheck::new("interchange law");
    let mut vertical_pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); z.len()];
    for (a, ta) in twos.iter().enumerate().filter(|(a, _)| valid_two(*a)) {
        for &b in &from_cell[ta.dst] {
            vertical_pairs[ones[ta.src].src].push((a, b));
        }
    }
    for pairs_x in &vertical_pairs {
        for &(theta, psi) in pairs_x {
            let y = ones[twos[theta].src].dst;
            for &(phi, chi) in &vertical_pairs[y] {
                let lhs = match (tv.get(theta, psi), tv.get(phi, chi)) {
                    (Some(v1), Some(v2)) => th.get(v1, v2),
                    _ => None,
                };
                let rhs = match (th.get(theta, phi), th.get(psi, chi)) {
                    (Some(h1), Some(h2)) => tv.get(h1, h2),
                    _ => None,
                };
                interchange.record(lhs.is_some() && lhs == rhs, || {
                    format!("θ={theta}, ψ={psi}, φ={phi}, χ={chi}: {lhs:?} vs {rhs:?}")
                });
            }
        }
    }
    checks.push(interchange);

    AxiomReport { checks }
}
