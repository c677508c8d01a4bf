//! Regular algebras, coalgebras, modules and comodules over exact rational
//! matrices.
//!
//! Every carrier is a finite-dimensional space with a fixed basis and the
//! tensor product is the Kronecker product, so `U⊗V` has basis
//! `u_i⊗v_j` at index `i·dim V + j`. Classical axioms (associativity and
//! friends) are reported as preconditions and never block a law check.

use serde::{Deserialize, Serialize};

use crate::laws::LawOutcome;
use crate::matrix::{MatrixError, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegAlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition failed: {component} violates the {law} law")]
    PreconditionFailed { component: String, law: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub const LAW_ALGEBRA: &str = "regular algebra";
pub const LAW_COALGEBRA: &str = "regular coalgebra";
pub const LAW_MODULE: &str = "regular module";
pub const LAW_COMODULE: &str = "regular comodule";
pub const LAW_TENSOR_MODULE: &str = "tensor module regularity";
pub const LAW_TENSOR_COMODULE: &str = "tensor comodule regularity";
pub const PRE_ASSOCIATIVITY: &str = "associativity";
pub const PRE_COASSOCIATIVITY: &str = "coassociativity";
pub const PRE_MODULE_ASSOCIATIVITY: &str = "module associativity";
pub const PRE_COMODULE_COASSOCIATIVITY: &str = "comodule coassociativity";
pub const PRE_OBSTRUCTION_IDEMPOTENT: &str = "obstruction idempotent";

/// A carrier with labelled basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSpace {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl LinearSpace {
    pub fn new(dim: usize) -> Self {
        LinearSpace {
            dim,
            labels: Vec::new(),
        }
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        LinearSpace {
            dim: labels.len(),
            labels,
        }
    }

    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| format!("b{i}"))
    }
}

/// One law together with the classical axioms it was checked alongside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub outcome: LawOutcome,
    pub preconditions: Vec<LawOutcome>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.outcome.holds
    }
}

fn expect_shape(name: &str, m: &RatMatrix, rows: usize, cols: usize) -> Result<(), RegAlgebraError> {
    if m.shape() != (rows, cols) {
        return Err(RegAlgebraError::ShapeMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn square_dim(name: &str, e: &RatMatrix) -> Result<usize, RegAlgebraError> {
    if !e.is_square() {
        return Err(RegAlgebraError::ShapeMismatch(format!(
            "{name} is {}x{}, expected square",
            e.rows(),
            e.cols()
        )));
    }
    Ok(e.rows())
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.mul(b).expect("shapes validated by caller")
}

/// `a₁·a₂·…`, so the last factor is applied first.
fn chain(ms: &[&RatMatrix]) -> RatMatrix {
    let (last, rest) = ms.split_last().expect("nonempty chain");
    rest.iter().rev().fold((*last).clone(), |acc, m| mul(m, &acc))
}

fn kron_all(ms: &[&RatMatrix]) -> RatMatrix {
    let (first, rest) = ms.split_first().expect("nonempty product");
    rest.iter().fold((*first).clone(), |acc, m| acc.kron(m))
}

fn id(n: usize) -> RatMatrix {
    RatMatrix::identity(n)
}

fn idempotent_check(name: &str, e: &RatMatrix) -> LawOutcome {
    LawOutcome::equation(PRE_OBSTRUCTION_IDEMPOTENT, name, &mul(e, e), e)
}

/// `m∘(e_A⊗e_A) = e_A∘m`, with associativity of `m` as a precondition report.
pub fn is_regular_algebra(m: &RatMatrix, e_a: &RatMatrix) -> Result<LawReport, RegAlgebraError> {
    let a = square_dim("e_A", e_a)?;
    expect_shape("m", m, a, a * a)?;
    let lhs = mul(m, &e_a.kron(e_a));
    let rhs = mul(e_a, m);
    let assoc_l = mul(m, &m.kron(&id(a)));
    let assoc_r = mul(m, &id(a).kron(m));
    Ok(LawReport {
        outcome: LawOutcome::equation(LAW_ALGEBRA, "m", &lhs, &rhs),
        preconditions: vec![LawOutcome::equation(PRE_ASSOCIATIVITY, "m", &assoc_l, &assoc_r)],
    })
}

/// `Δ∘e_A = (e_A⊗e_A)∘Δ`, with coassociativity as a precondition report.
pub fn is_regular_coalgebra(delta: &RatMatrix, e_a: &RatMatrix) -> Result<LawReport, RegAlgebraError> {
    let a = square_dim("e_A", e_a)?;
    expect_shape("Δ", delta, a * a, a)?;
    let lhs = mul(delta, e_a);
    let rhs = mul(&e_a.kron(e_a), delta);
    let coassoc_l = mul(&delta.kron(&id(a)), delta);
    let coassoc_r = mul(&id(a).kron(delta), delta);
    Ok(LawReport {
        outcome: LawOutcome::equation(LAW_COALGEBRA, "Δ", &lhs, &rhs),
        preconditions: vec![LawOutcome::equation(PRE_COASSOCIATIVITY, "Δ", &coassoc_l, &coassoc_r)],
    })
}

/// `ρ_M∘(e_A⊗e_M) = e_M∘ρ_M`. When `mult` is given, the module axiom
/// `ρ∘(m⊗id_M) = ρ∘(id_A⊗ρ)` is reported as a precondition.
pub fn is_regular_module(
    rho: &RatMatrix,
    e_a: &RatMatrix,
    e_m: &RatMatrix,
    mult: Option<&RatMatrix>,
) -> Result<LawReport, RegAlgebraError> {
    let a = square_dim("e_A", e_a)?;
    let md = square_dim("e_M", e_m)?;
    expect_shape("ρ", rho, md, a * md)?;
    let lhs = mul(rho, &e_a.kron(e_m));
    let rhs = mul(e_m, rho);
    let mut preconditions = Vec::new();
    if let Some(m) = mult {
        expect_shape("m", m, a, a * a)?;
        let l = mul(rho, &m.kron(&id(md)));
        let r = mul(rho, &id(a).kron(rho));
        preconditions.push(LawOutcome::equation(PRE_MODULE_ASSOCIATIVITY, "ρ", &l, &r));
    }
    Ok(LawReport {
        outcome: LawOutcome::equation(LAW_MODULE, "ρ", &lhs, &rhs),
        preconditions,
    })
}

/// `ρ∘e_M = (e_M⊗e_A)∘ρ` for a right coaction `ρ: M → M⊗A`. When `delta` is
/// given, `(ρ⊗id_A)∘ρ = (id_M⊗Δ)∘ρ` is reported as a precondition.
pub fn is_regular_comodule(
    coaction: &RatMatrix,
    e_a: &RatMatrix,
    e_m: &RatMatrix,
    delta: Option<&RatMatrix>,
) -> Result<LawReport, RegAlgebraError> {
    let a = square_dim("e_A", e_a)?;
    let md = square_dim("e_M", e_m)?;
    expect_shape("coaction", coaction, md * a, md)?;
    let lhs = mul(coaction, e_m);
    let rhs = mul(&e_m.kron(e_a), coaction);
    let mut preconditions = Vec::new();
    if let Some(d) = delta {
        expect_shape("Δ", d, a * a, a)?;
        let l = mul(&coaction.kron(&id(a)), coaction);
        let r = mul(&id(md).kron(d), coaction);
        preconditions.push(LawOutcome::equation(PRE_COMODULE_COASSOCIATIVITY, "coaction", &l, &r));
    }
    Ok(LawReport {
        outcome: LawOutcome::equation(LAW_COMODULE, "coaction", &lhs, &rhs),
        preconditions,
    })
}

/// `ρ_{M⊗N} = (ρ_M⊗ρ_N)∘(id_A⊗τ_{A,M}⊗id_N)∘(Δ⊗id_{M⊗N})`, a map
/// `A⊗M⊗N → M⊗N`.
pub fn tensor_module_action(
    rho_m: &RatMatrix,
    rho_n: &RatMatrix,
    delta: &RatMatrix,
) -> Result<RatMatrix, RegAlgebraError> {
    let a = delta.cols();
    expect_shape("Δ", delta, a * a, a)?;
    let (md, nd) = (rho_m.rows(), rho_n.rows());
    expect_shape("ρ_M", rho_m, md, a * md)?;
    expect_shape("ρ_N", rho_n, nd, a * nd)?;
    let split = delta.kron(&id(md * nd));
    let twist = kron_all(&[&id(a), &RatMatrix::commutation(a, md), &id(nd)]);
    Ok(chain(&[&rho_m.kron(rho_n), &twist, &split]))
}

/// `ρ_{M⊗N} = (id_{M⊗N}⊗m_A)∘(id_M⊗τ_{A,N}⊗id_A)∘(ρ_M⊗ρ_N)`, a map
/// `M⊗N → M⊗N⊗A`.
pub fn tensor_comodule_coaction(
    rho_m: &RatMatrix,
    rho_n: &RatMatrix,
    mult: &RatMatrix,
) -> Result<RatMatrix, RegAlgebraError> {
    let a = mult.rows();
    expect_shape("m_A", mult, a, a * a)?;
    let (md, nd) = (rho_m.cols(), rho_n.cols());
    expect_shape("ρ_M", rho_m, md * a, md)?;
    expect_shape("ρ_N", rho_n, nd * a, nd)?;
    let twist = kron_all(&[&id(md), &RatMatrix::commutation(a, nd), &id(a)]);
    let merge = id(md * nd).kron(mult);
    Ok(chain(&[&merge, &twist, &rho_m.kron(rho_n)]))
}

/// The data of one instance of the tensor-of-module-actions statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleInstance {
    pub rho_m: RatMatrix,
    pub rho_n: RatMatrix,
    pub delta: RatMatrix,
    pub e_a: RatMatrix,
    pub e_m: RatMatrix,
    pub e_n: RatMatrix,
}

/// Regularity of the components and of the tensor action, each decided
/// directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConverseProbe {
    pub tensor_regular: bool,
    pub rho_m_regular: bool,
    pub rho_n_regular: bool,
    pub delta_regular: bool,
}

impl ConverseProbe {
    pub fn components_regular(&self) -> bool {
        self.rho_m_regular && self.rho_n_regular && self.delta_regular
    }

    /// False only if regular components produced an irregular tensor action.
    pub fn consistent(&self) -> bool {
        !self.components_regular() || self.tensor_regular
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorLemmaReport {
    pub outcome: LawOutcome,
    pub converse: ConverseProbe,
}

/// `ρ_{M⊗N}∘(e_A⊗e_{M⊗N}) = e_{M⊗N}∘ρ_{M⊗N}` with `e_{M⊗N} = e_M⊗e_N`.
pub fn tensor_action_law(inst: &ModuleInstance) -> Result<LawOutcome, RegAlgebraError> {
    let rho = tensor_module_action(&inst.rho_m, &inst.rho_n, &inst.delta)?;
    let e_mn = inst.e_m.kron(&inst.e_n);
    let (a, mn) = (inst.e_a.rows(), e_mn.rows());
    expect_shape("e_A", &inst.e_a, a, a)?;
    expect_shape("ρ_{M⊗N}", &rho, mn, a * mn)?;
    let lhs = mul(&rho, &inst.e_a.kron(&e_mn));
    let rhs = mul(&e_mn, &rho);
    Ok(LawOutcome::equation(LAW_TENSOR_MODULE, "ρ_{M⊗N}", &lhs, &rhs))
}

pub fn probe_tensor_converse(inst: &ModuleInstance) -> Result<ConverseProbe, RegAlgebraError> {
    Ok(ConverseProbe {
        tensor_regular: tensor_action_law(inst)?.holds,
        rho_m_regular: is_regular_module(&inst.rho_m, &inst.e_a, &inst.e_m, None)?.holds(),
        rho_n_regular: is_regular_module(&inst.rho_n, &inst.e_a, &inst.e_n, None)?.holds(),
        delta_regular: is_regular_coalgebra(&inst.delta, &inst.e_a)?.holds(),
    })
}

/// Checks the components, then the tensor action law, then runs the
/// converse probe.
pub fn check_tensor_lemma(inst: &ModuleInstance) -> Result<TensorLemmaReport, RegAlgebraError> {
    let components = [
        (
            "ρ_M",
            is_regular_module(&inst.rho_m, &inst.e_a, &inst.e_m, None)?.outcome,
        ),
        (
            "ρ_N",
            is_regular_module(&inst.rho_n, &inst.e_a, &inst.e_n, None)?.outcome,
        ),
        ("Δ", is_regular_coalgebra(&inst.delta, &inst.e_a)?.outcome),
    ];
    if let Some((component, o)) = components.iter().find(|(_, o)| !o.holds) {
        return Err(RegAlgebraError::PreconditionFailed {
            component: component.to_string(),
            law: o.law.clone(),
        });
    }
    Ok(TensorLemmaReport {
        outcome: tensor_action_law(inst)?,
        converse: probe_tensor_converse(inst)?,
    })
}

/// A bundle of structure maps over one algebra `A`; every present piece is
/// checked by [`StructureMaps::check_all`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureMaps {
    pub algebra: LinearSpace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_m: Option<LinearSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_n: Option<LinearSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplication: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comultiplication: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_m: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_n: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction_m: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction_n: Option<RatMatrix>,
    pub e_a: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_m: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_n: Option<RatMatrix>,
}

/// Law outcomes of a bundle, separated from the classical axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleReport {
    pub laws: Vec<LawOutcome>,
    pub preconditions: Vec<LawOutcome>,
}

impl BundleReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|o| o.holds)
    }

    fn absorb(&mut self, subject: &str, mut r: LawReport) {
        r.outcome.subject = subject.to_string();
        for p in &mut r.preconditions {
            p.subject = subject.to_string();
        }
        self.laws.push(r.outcome);
        self.preconditions.extend(r.preconditions);
    }
}

impl StructureMaps {
    fn require<'a>(&self, what: &str, m: &'a Option<RatMatrix>) -> Result<&'a RatMatrix, RegAlgebraError> {
        m.as_ref()
            .ok_or_else(|| RegAlgebraError::ShapeMismatch(format!("{what} is required by the maps present")))
    }

    fn check_space(
        &self,
        name: &str,
        space: &Option<LinearSpace>,
        e: &Option<RatMatrix>,
    ) -> Result<(), RegAlgebraError> {
        if let (Some(s), Some(e)) = (space, e) {
            expect_shape(name, e, s.dim, s.dim)?;
        }
        Ok(())
    }

    pub fn check_all(&self) -> Result<BundleReport, RegAlgebraError> {
        let a = self.algebra.dim;
        expect_shape("e_A", &self.e_a, a, a)?;
        self.check_space("e_M", &self.module_m, &self.e_m)?;
        self.check_space("e_N", &self.module_n, &self.e_n)?;
        let mut report = BundleReport::default();
        report.preconditions.push(idempotent_check("e_A", &self.e_a));
        for (name, e) in [("e_M", &self.e_m), ("e_N", &self.e_n)] {
            if let Some(e) = e {
                report.preconditions.push(idempotent_check(name, e));
            }
        }
        if let Some(m) = &self.multiplication {
            report.absorb("m", is_regular_algebra(m, &self.e_a)?);
        }
        if let Some(d) = &self.comultiplication {
            report.absorb("Δ", is_regular_coalgebra(d, &self.e_a)?);
        }
        let mult = self.multiplication.as_ref();
        let delta = self.comultiplication.as_ref();
        for (subject, rho, e) in [("ρ_M", &self.action_m, &self.e_m), ("ρ_N", &self.action_n, &self.e_n)] {
            if let Some(rho) = rho {
                let e = self.require(if subject == "ρ_M" { "e_M" } else { "e_N" }, e)?;
                report.absorb(subject, is_regular_module(rho, &self.e_a, e, mult)?);
            }
        }
        for (subject, co, e) in [
            ("coaction_M", &self.coaction_m, &self.e_m),
            ("coaction_N", &self.coaction_n, &self.e_n),
        ] {
            if let Some(co) = co {
                let e = self.require(if subject == "coaction_M" { "e_M" } else { "e_N" }, e)?;
                report.absorb(subject, is_regular_comodule(co, &self.e_a, e, delta)?);
            }
        }
        if let (Some(rm), Some(rn), Some(d)) = (&self.action_m, &self.action_n, delta) {
            let inst = ModuleInstance {
                rho_m: rm.clone(),
                rho_n: rn.clone(),
                delta: d.clone(),
                e_a: self.e_a.clone(),
                e_m: self.require("e_M", &self.e_m)?.clone(),
                e_n: self.require("e_N", &self.e_n)?.clone(),
            };
            report.laws.push(tensor_action_law(&inst)?);
        }
        if let (Some(cm), Some(cn), Some(m)) = (&self.coaction_m, &self.coaction_n, mult) {
            let co = tensor_comodule_coaction(cm, cn, m)?;
            let e_mn = self.require("e_M", &self.e_m)?.kron(self.require("e_N", &self.e_n)?);
            let lhs = mul(&co, &e_mn);
            let rhs = mul(&e_mn.kron(&self.e_a), &co);
            report
                .laws
                .push(LawOutcome::equation(LAW_TENSOR_COMODULE, "coaction_{M⊗N}", &lhs, &rhs));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, Rational};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows)
    }

    /// Coordinate algebra on {u, v}: u·u = u, v·v = v, mixed products 0.
    fn projection_mult() -> RatMatrix {
        m(&[&[1, 0, 0, 0], &[0, 0, 0, 1]])
    }

    fn diag_delta() -> RatMatrix {
        m(&[&[1, 0], &[0, 0], &[0, 0], &[0, 1]])
    }

    /// Entry of `ρ_{M⊗N}` at row `(i, j)`, column `(k, p, q)` by direct summation:
    /// Σ_{r,s} Δ[(r,s),k]·ρ_M[i,(r,p)]·ρ_N[j,(s,q)].
    fn tensor_action_oracle(rho_m: &RatMatrix, rho_n: &RatMatrix, delta: &RatMatrix) -> RatMatrix {
        let a = delta.cols();
        let (md, nd) = (rho_m.rows(), rho_n.rows());
        let mut out = RatMatrix::zeros(md * nd, a * md * nd);
        for i in 0..md {
            for j in 0..nd {
                for k in 0..a {
                    for p in 0..md {
                        for q in 0..nd {
                            let mut acc = Rational::zero();
                            for r in 0..a {
                                for s in 0..a {
                                    acc +=
                                        delta.get(r * a + s, k) * rho_m.get(i, r * md + p) * rho_n.get(j, s * nd + q);
                                }
                            }
                            out.set(i * nd + j, (k * md + p) * nd + q, acc);
                        }
                    }
                }
            }
        }
        out
    }

    /// Entry of the tensor coaction at row `(i, j, c)`, column `(p, q)`:
    /// Σ_{a1,a2} m[c,(a1,a2)]·ρ_M[(i,a1),p]·ρ_N[(j,a2),q].
    fn tensor_coaction_oracle(rho_m: &RatMatrix, rho_n: &RatMatrix, mult: &RatMatrix) -> RatMatrix {
        let a = mult.rows();
        let (md, nd) = (rho_m.cols(), rho_n.cols());
        let mut out = RatMatrix::zeros(md * nd * a, md * nd);
        for i in 0..md {
            for j in 0..nd {
                for c in 0..a {
                    for p in 0..md {
                        for q in 0..nd {
                            let mut acc = Rational::zero();
                            for a1 in 0..a {
                                for a2 in 0..a {
                                    acc +=
                                        mult.get(c, a1 * a + a2) * rho_m.get(i * a + a1, p) * rho_n.get(j * a + a2, q);
                                }
                            }
                            out.set((i * nd + j) * a + c, p * nd + q, acc);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn algebra_examples() {
        let mu = projection_mult();
        let r = is_regular_algebra(&mu, &RatMatrix::identity(2)).unwrap();
        assert!(r.holds() && r.preconditions[0].holds);
        // hand expansion: m∘(e⊗e) keeps only u⊗u ↦ u; e∘m keeps u⊗u ↦ u and kills v⊗v ↦ v
        let e = m(&[&[1, 0], &[0, 0]]);
        let lhs = mu.mul(&e.kron(&e)).unwrap();
        assert_eq!(lhs, m(&[&[1, 0, 0, 0], &[0, 0, 0, 0]]));
        assert_eq!(e.mul(&mu).unwrap(), lhs);
        assert!(is_regular_algebra(&mu, &e).unwrap().holds());
        let tampered = m(&[&[1, 1], &[0, 0]]);
        assert!(!is_regular_algebra(&mu, &tampered).unwrap().holds());
        assert!(matches!(
            is_regular_algebra(&m(&[&[1, 0]]), &e),
            Err(RegAlgebraError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn coalgebra_examples() {
        let d = diag_delta();
        assert!(is_regular_coalgebra(&d, &RatMatrix::identity(2)).unwrap().holds());
        for e in [m(&[&[1, 0], &[0, 0]]), m(&[&[0, 0], &[0, 1]])] {
            let r = is_regular_coalgebra(&d, &e).unwrap();
            assert!(r.holds() && r.preconditions[0].holds);
        }
        assert!(matches!(
            is_regular_coalgebra(&m(&[&[1, 0]]), &RatMatrix::identity(2)),
            Err(RegAlgebraError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn module_examples() {
        let mu = projection_mult();
        let id2 = RatMatrix::identity(2);
        assert!(is_regular_module(&mu, &id2, &id2, Some(&mu)).unwrap().holds());
        let e = m(&[&[1, 0], &[0, 0]]);
        let r = is_regular_module(&mu, &e, &e, Some(&mu)).unwrap();
        assert!(r.holds());
        assert!(r.preconditions[0].holds);
        let mut bad = mu.clone();
        bad.set(0, 3, int(1));
        assert!(!is_regular_module(&bad, &e, &e, None).unwrap().holds());
    }

    #[test]
    fn comodule_examples() {
        let id2 = RatMatrix::identity(2);
        let d = diag_delta();
        assert!(is_regular_comodule(&d, &id2, &id2, Some(&d)).unwrap().holds());
        // grouplike coaction b_i ↦ b_i⊗b_i with e_M = e_A = coordinate projection
        let e = m(&[&[1, 0], &[0, 0]]);
        let lhs = d.mul(&e).unwrap();
        let rhs = e.kron(&e).mul(&d).unwrap();
        assert_eq!(lhs, rhs);
        assert!(is_regular_comodule(&d, &e, &e, Some(&d)).unwrap().holds());
        let f = m(&[&[0, 0], &[0, 1]]);
        assert!(!is_regular_comodule(&d, &f, &e, None).unwrap().holds());
        assert!(is_regular_comodule(&m(&[&[1, 0]]), &id2, &id2, None).is_err());
    }

    #[test]
    fn tensor_action_matches_summation_oracle() {
        let mu = projection_mult();
        let d = diag_delta();
        let rho = tensor_module_action(&mu, &mu, &d).unwrap();
        assert_eq!(rho, tensor_action_oracle(&mu, &mu, &d));
        let r3 = m(&[&[1, 0, 2, 0, 1, 1], &[0, 1, 0, -1, 0, 0], &[3, 0, 0, 0, 1, 0]]);
        let delta = m(&[&[1, 0], &[0, 2], &[1, 0], &[0, 1]]);
        assert_eq!(
            tensor_module_action(&mu, &r3, &delta).unwrap(),
            tensor_action_oracle(&mu, &r3, &delta)
        );
        let zero = RatMatrix::zeros(4, 2);
        assert!(tensor_module_action(&mu, &mu, &zero).unwrap().is_zero());
        let one = RatMatrix::identity(1);
        let unit = RatMatrix::identity(2);
        assert_eq!(
            tensor_module_action(&unit, &unit, &one).unwrap(),
            RatMatrix::identity(4)
        );
    }

    #[test]
    fn tensor_coaction_matches_summation_oracle() {
        let mu = projection_mult();
        let d = diag_delta();
        assert_eq!(
            tensor_comodule_coaction(&d, &d, &mu).unwrap(),
            tensor_coaction_oracle(&d, &d, &mu)
        );
        let co = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2], &[1, 0, 0], &[0, 0, 0], &[0, 1, 1]]);
        assert_eq!(
            tensor_comodule_coaction(&d, &co, &mu).unwrap(),
            tensor_coaction_oracle(&d, &co, &mu)
        );
        let one = RatMatrix::identity(1);
        assert_eq!(
            tensor_comodule_coaction(&RatMatrix::identity(2), &RatMatrix::identity(3), &one).unwrap(),
            RatMatrix::identity(6)
        );
        assert!(matches!(
            tensor_comodule_coaction(&d, &d, &m(&[&[1, 0]])),
            Err(RegAlgebraError::ShapeMismatch(_))
        ));
    }

    fn regular_setup(e: RatMatrix) -> ModuleInstance {
        ModuleInstance {
            rho_m: projection_mult(),
            rho_n: projection_mult(),
            delta: diag_delta(),
            e_a: e.clone(),
            e_m: e.clone(),
            e_n: e,
        }
    }

    #[test]
    fn tensor_lemma_examples() {
        let r = check_tensor_lemma(&regular_setup(RatMatrix::identity(2))).unwrap();
        assert!(r.outcome.holds && r.converse.consistent());
        let inst = regular_setup(m(&[&[1, 0], &[0, 0]]));
        let r = check_tensor_lemma(&inst).unwrap();
        assert!(r.outcome.holds);
        // oracle: the law checked entrywise on the summation form
        let rho = tensor_action_oracle(&inst.rho_m, &inst.rho_n, &inst.delta);
        let e_mn = inst.e_m.kron(&inst.e_n);
        assert_eq!(rho.mul(&inst.e_a.kron(&e_mn)).unwrap(), e_mn.mul(&rho).unwrap());

        let mut broken = inst.clone();
        broken.rho_n.set(0, 3, int(1));
        match check_tensor_lemma(&broken) {
            Err(RegAlgebraError::PreconditionFailed { component, law }) => {
                assert_eq!(component, "ρ_N");
                assert_eq!(law, LAW_MODULE);
            }
            other => panic!("expected a precondition failure, got {other:?}"),
        }
        assert!(probe_tensor_converse(&broken).unwrap().consistent());
    }

    #[test]
    fn converse_fails_through_a_zero_component() {
        // ρ_N = 0 makes the tensor action regular whatever ρ_M does
        let mut inst = regular_setup(m(&[&[1, 0], &[0, 0]]));
        inst.rho_m.set(0, 3, int(1));
        inst.rho_n = RatMatrix::zeros(2, 4);
        let p = probe_tensor_converse(&inst).unwrap();
        assert!(p.tensor_regular && !p.rho_m_regular && p.consistent());
    }

    #[test]
    fn bundle_report() {
        let e = m(&[&[1, 0], &[0, 0]]);
        let bundle = StructureMaps {
            algebra: LinearSpace::with_labels(["u", "v"]),
            module_m: Some(LinearSpace::new(2)),
            module_n: Some(LinearSpace::new(2)),
            multiplication: Some(projection_mult()),
            comultiplication: Some(diag_delta()),
            action_m: Some(projection_mult()),
            action_n: Some(projection_mult()),
            coaction_m: Some(diag_delta()),
            coaction_n: Some(diag_delta()),
            e_a: e.clone(),
            e_m: Some(e.clone()),
            e_n: Some(e),
        };
        let r = bundle.check_all().unwrap();
        assert!(r.passed());
        let laws: Vec<_> = r.laws.iter().map(|o| o.law.as_str()).collect();
        assert_eq!(
            laws,
            vec![
                LAW_ALGEBRA,
                LAW_COALGEBRA,
                LAW_MODULE,
                LAW_MODULE,
                LAW_COMODULE,
                LAW_COMODULE,
                LAW_TENSOR_MODULE,
                LAW_TENSOR_COMODULE
            ]
        );
        assert!(r.preconditions.iter().all(|o| o.holds));
        let json = serde_json::to_string(&bundle).unwrap();
        let back: StructureMaps = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bundle);
    }
}
