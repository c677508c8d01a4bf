//! Seeded generators for random desk-scale instances.
//!
//! Every generator takes an explicit RNG; callers seed a
//! [`rand_chacha::ChaCha8Rng`] through [`seeded`] so runs are reproducible.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::FinCategory;
use crate::grassmann::{Parity, SuperDim, SuperMatrix, Supernumber};
use crate::matrix::RatMatrix;
use crate::morphism::{FinObject, Morphism, SearchBounds};
use crate::rational::{frac, int, Rational};
use crate::regalgebra::ModuleInstance;
use crate::semiatlas::SemiAtlas;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// An atlas of up to `max_charts` charts over one model set, with chart maps
/// random bijections and `Φ_{αβ} = φ_α∘φ_β⁻¹` on a random set of overlaps.
pub fn random_invertible_atlas<R: Rng>(rng: &mut R, max_charts: usize) -> SemiAtlas {
    let charts = rng.gen_range(1..=max_charts.max(1));
    let size = rng.gen_range(1..=3);
    let obj = FinObject::set(size);
    let names: Vec<String> = (0..charts).map(|i| format!("U{i}")).collect();
    let mut atlas = SemiAtlas::new(names.iter().map(|n| (n.clone(), obj))).expect("distinct names");
    let maps: BTreeMap<usize, Morphism> = (0..charts)
        .map(|a| (a, Morphism::endo_map(permutation(rng, size)).expect("bijection")))
        .collect();
    for a in 0..charts {
        for b in a + 1..charts {
            if rng.gen_bool(0.6) {
                atlas.add_overlap(a, b).expect("valid charts");
                for (x, y) in [(a, b), (b, a)] {
                    let inv = maps[&y].inverse().expect("bijection");
                    let phi = maps[&x].after(&inv).expect("same object");
                    atlas.set_transition(x, y, phi).expect("overlap declared");
                }
            }
        }
    }
    atlas.set_model(obj, maps).expect("chart maps fit");
    atlas
}

/// A category on at most three objects (sets of size 1..=3) generated by one
/// to three random maps. Draws again whenever a hom-set exceeds four
/// morphisms.
pub fn random_category<R: Rng>(rng: &mut R) -> FinCategory {
    loop {
        let k = rng.gen_range(1..=3);
        let objects: Vec<(String, FinObject)> = (0..k)
            .map(|i| (format!("X{i}"), FinObject::set(rng.gen_range(1..=3))))
            .collect();
        let gens = (0..rng.gen_range(1..=3))
            .map(|_| {
                let (s, t) = (rng.gen_range(0..k), rng.gen_range(0..k));
                let (a, b) = (objects[s].1.size(), objects[t].1.size());
                let table = (0..a).map(|_| rng.gen_range(0..b)).collect();
                (s, t, Morphism::fin_map(a, b, table).expect("table in range"))
            })
            .collect();
        if let Ok(cat) = FinCategory::generated(objects, gens, &SearchBounds::default()) {
            if cat.max_hom_size() <= 4 {
                return cat;
            }
        }
    }
}

fn random_coeff<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-3..=3);
    let den = rng.gen_range(1..=2);
    frac(num, den)
}

fn indices(bits: u32) -> Vec<usize> {
    (0..32).filter(|i| bits >> i & 1 == 1).map(|i| i as usize + 1).collect()
}

/// A random element with terms of the given parity (any parity when `None`)
/// and no body term.
pub fn random_soul<R: Rng>(rng: &mut R, generators: usize, parity: Option<Parity>) -> Supernumber {
    let mut terms = Vec::new();
    for b in 1u32..1 << generators {
        let allowed = match parity {
            Some(Parity::Even) => b.count_ones() % 2 == 0,
            Some(Parity::Odd) => b.count_ones() % 2 == 1,
            None => true,
        };
        if allowed && rng.gen_bool(0.4) {
            terms.push((indices(b), random_coeff(rng)));
        }
    }
    Supernumber::from_terms(generators, terms).expect("indices in range")
}

/// A supernumber with a nonzero rational body.
pub fn random_body_invertible<R: Rng>(rng: &mut R, generators: usize) -> Supernumber {
    let mut body = random_coeff(rng);
    while body == int(0) {
        body = random_coeff(rng);
    }
    &Supernumber::scalar(generators, body) + &random_soul(rng, generators, None)
}

fn random_invertible_body<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| random_coeff(rng)).collect()).collect();
        let m = RatMatrix::from_rows(rows).expect("square rows");
        if m.determinant().map(|d| d != int(0)).unwrap_or(false) {
            return m;
        }
    }
}

/// A graded square supermatrix: even entries in the `A` and `D` blocks, odd
/// entries in `B` and `C`, with an invertible body in both diagonal blocks.
/// Products of such matrices again have invertible diagonal bodies.
pub fn random_graded_supermatrix<R: Rng>(rng: &mut R, dim: SuperDim, generators: usize) -> SuperMatrix {
    let n = dim.total();
    let body_a = random_invertible_body(rng, dim.even);
    let body_d = random_invertible_body(rng, dim.odd);
    let mut rows = vec![vec![Supernumber::zero(generators); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let (ei, ej) = (i < dim.even, j < dim.even);
            *entry = if ei == ej {
                let body = if ei {
                    body_a.get(i, j).clone()
                } else {
                    body_d.get(i - dim.even, j - dim.even).clone()
                };
                &Supernumber::scalar(generators, body) + &random_soul(rng, generators, Some(Parity::Even))
            } else {
                random_soul(rng, generators, Some(Parity::Odd))
            };
        }
    }
    SuperMatrix::square(dim, generators, rows).expect("square rows")
}

fn random_projection<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let diag: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(0..=1))).collect();
    RatMatrix::diagonal(&diag)
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RatMatrix {
    let data = (0..rows * cols).map(|_| int(rng.gen_range(-1..=1))).collect();
    RatMatrix::new(rows, cols, data).expect("sized data")
}

/// `f` with `f∘p = e∘f` for idempotents `p` on the source and `e` on the
/// target: `f = e·X·p + (1−e)·Z·(1−p)`.
fn random_intertwiner<R: Rng>(rng: &mut R, e: &RatMatrix, p: &RatMatrix) -> RatMatrix {
    let (rows, cols) = (e.rows(), p.rows());
    let ie = RatMatrix::identity(rows).sub(e).expect("square");
    let ip = RatMatrix::identity(cols).sub(p).expect("square");
    let x = random_matrix(rng, rows, cols);
    let z = random_matrix(rng, rows, cols);
    let kept = e.mul(&x).and_then(|m| m.mul(p)).expect("shapes");
    let rest = ie.mul(&z).and_then(|m| m.mul(&ip)).expect("shapes");
    kept.add(&rest).expect("same shape")
}

/// Regular module actions `ρ_M`, `ρ_N` and a regular comultiplication `Δ`
/// with coordinate-projection obstructions, all dimensions in `1..=max_dim`.
pub fn random_regular_module_instance<R: Rng>(rng: &mut R, max_dim: usize) -> ModuleInstance {
    let a = rng.gen_range(1..=max_dim);
    let md = rng.gen_range(1..=max_dim);
    let nd = rng.gen_range(1..=max_dim);
    let e_a = random_projection(rng, a);
    let e_m = random_projection(rng, md);
    let e_n = random_projection(rng, nd);
    let rho_m = random_intertwiner(rng, &e_m, &e_a.kron(&e_m));
    let rho_n = random_intertwiner(rng, &e_n, &e_a.kron(&e_n));
    let delta = random_intertwiner(rng, &e_a.kron(&e_a), &e_a);
    ModuleInstance {
        rho_m,
        rho_n,
        delta,
        e_a,
        e_m,
        e_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::berezinian;
    use crate::regalgebra::{is_regular_coalgebra, is_regular_module};
    use crate::semiatlas::obstructedness_degree;

    #[test]
    fn same_seed_same_instances() {
        let (mut r1, mut r2) = (seeded(7), seeded(7));
        assert_eq!(random_category(&mut r1), random_category(&mut r2));
        assert_eq!(random_invertible_atlas(&mut r1, 5), random_invertible_atlas(&mut r2, 5));
    }

    #[test]
    fn invertible_atlases_glue_and_satisfy_cocycles() {
        let mut rng = seeded(1);
        for _ in 0..10 {
            let atlas = random_invertible_atlas(&mut rng, 4);
            assert!(atlas.gluing_violations().is_empty());
            assert_eq!(obstructedness_degree(&atlas, Some(3)).obstructedness_degree, 0);
        }
    }

    #[test]
    fn categories_respect_size_limits() {
        let mut rng = seeded(2);
        for _ in 0..10 {
            let c = random_category(&mut rng);
            assert!(c.len() <= 3 && c.max_hom_size() <= 4);
            assert!(c.objects().iter().all(|o| o.size() <= 3));
            assert!(c.axiom_violations().is_empty());
        }
    }

    #[test]
    fn supermatrices_are_graded_with_invertible_blocks() {
        let mut rng = seeded(3);
        for dim in [SuperDim::new(1, 1), SuperDim::new(2, 2)] {
            let m = random_graded_supermatrix(&mut rng, dim, 4);
            assert!(m.is_graded());
            assert!(berezinian(&m).is_ok());
        }
    }

    #[test]
    fn module_instances_are_regular() {
        let mut rng = seeded(4);
        for _ in 0..10 {
            let inst = random_regular_module_instance(&mut rng, 3);
            assert!(is_regular_module(&inst.rho_m, &inst.e_a, &inst.e_m, None)
                .unwrap()
                .holds());
            assert!(is_regular_module(&inst.rho_n, &inst.e_a, &inst.e_n, None)
                .unwrap()
                .holds());
            assert!(is_regular_coalgebra(&inst.delta, &inst.e_a).unwrap().holds());
        }
    }
}
