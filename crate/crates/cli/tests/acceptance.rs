//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use rand::Rng;
use regcat_core::category::{double_count, Reg2Category};
use regcat_core::grassmann::{berezinian, ginv, gmul, SuperDim, Supernumber};
use regcat_core::monoidal::{search_ybe_solutions, ObstructionAssignment};
use regcat_core::morphism::{generalized_inverses, Morphism, SearchBounds};
use regcat_core::random::{
    random_body_invertible, random_category, random_graded_supermatrix, random_invertible_atlas,
    random_regular_module_instance, seeded,
};
use regcat_core::rational::int;
use regcat_core::regalgebra::{check_tensor_lemma, ModuleInstance, RegAlgebraError};
use regcat_core::semiatlas::{cycles_of_length, tower_identity};
use regcat_core::{
    build_regularization, obstructedness_degree, verify_2category_axioms, FinCategory, FinObject, MonoidalStructure,
    RegularityMode, SemiAtlas,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

/// Every table `dom → cod`, in odometer order.
fn all_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    (0..cod.pow(dom as u32))
        .map(|mut code| {
            let mut t = vec![0; dom];
            for slot in t.iter_mut().rev() {
                *slot = code % cod;
                code /= cod;
            }
            t
        })
        .collect()
}

fn regularity_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let bounds = SearchBounds::default();
    let mut maps = 0;
    for dom in 1..=3 {
        for cod in 1..=3 {
            for f in all_tables(dom, cod) {
                let brute: BTreeSet<Vec<usize>> = all_tables(cod, dom)
                    .into_iter()
                    .filter(|g| (0..dom).all(|x| f[g[f[x]]] == f[x]))
                    .collect();
                let found: BTreeSet<Vec<usize>> =
                    generalized_inverses(&Morphism::fin_map(dom, cod, f.clone()).unwrap(), &bounds)
                        .map_err(|e| e.to_string())?
                        .iter()
                        .map(|g| g.table().unwrap().to_vec())
                        .collect();
                ensure(found == brute, || format!("{dom}→{cod} {f:?}: {found:?} vs {brute:?}"))?;
                ensure(!found.is_empty(), || format!("{f:?} has no generalized inverse"))?;
                maps += 1;
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{maps} maps agree with brute force"))
}

fn invertible_atlases_have_trivial_towers() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded(1);
    let mut cycles = 0;
    for i in 0..20 {
        let atlas = random_invertible_atlas(&mut rng, 5);
        let report = obstructedness_degree(&atlas, Some(5));
        ensure(report.obstructedness_degree == 0, || {
            format!("atlas {i}: degree {}", report.obstructedness_degree)
        })?;
        for n in 1..=5 {
            for c in cycles_of_length(&atlas, n) {
                let e = tower_identity(&atlas, &c).map_err(|e| e.to_string())?;
                ensure(e.is_identity(), || format!("atlas {i}, cycle {c}: {e}"))?;
                cycles += 1;
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("20 atlases, {cycles} tower identities equal the identity"))
}

fn canonical_obstruction_is_detected() -> Verdict {
    let mut atlas = SemiAtlas::new([("a", FinObject::set(2)), ("b", FinObject::set(2))]).map_err(|e| e.to_string())?;
    atlas.add_overlap(0, 1).map_err(|e| e.to_string())?;
    atlas
        .set_transition(0, 1, Morphism::endo_map(vec![0, 0]).unwrap())
        .map_err(|e| e.to_string())?;
    atlas
        .set_transition(1, 0, Morphism::endo_map(vec![0, 1]).unwrap())
        .map_err(|e| e.to_string())?;
    let report = obstructedness_degree(&atlas, Some(3));
    ensure(report.obstructedness_degree == 2, || {
        format!("degree {}", report.obstructedness_degree)
    })?;
    let rec = report
        .records
        .iter()
        .find(|r| r.n == 2 && r.cycle == ["a", "b"])
        .ok_or("no record for (a b)")?;
    let e = rec.obstruction.clone().ok_or("tower identity missing")?;
    // by hand: [0,0] after [0,1] is [0,0]
    ensure(e == Morphism::endo_map(vec![0, 0]).unwrap(), || {
        format!("tower identity {e}")
    })?;
    Ok("degree 2, tower identity [0,0]".into())
}

fn berezinian_is_multiplicative() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded(4);
    for i in 0..200 {
        let dim = if i % 2 == 0 {
            SuperDim::new(1, 1)
        } else {
            SuperDim::new(2, 2)
        };
        let m = random_graded_supermatrix(&mut rng, dim, 4);
        let n = random_graded_supermatrix(&mut rng, dim, 4);
        let ber = |x: &regcat_core::SuperMatrix| berezinian(x).map_err(|e| e.to_string());
        let mn = m.mul(&n).map_err(|e| e.to_string())?;
        let lhs = ber(&mn)?;
        let rhs = gmul(&ber(&m)?, &ber(&n)?).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("case {i}: {lhs:?} vs {rhs:?}"))?;
    }
    for i in 0..200 {
        let a = random_body_invertible(&mut rng, 4);
        let inv = ginv(&a).map_err(|e| e.to_string())?;
        let one = Supernumber::one(4);
        ensure(gmul(&a, &inv).unwrap() == one && gmul(&inv, &a).unwrap() == one, || {
            format!("ginv case {i}")
        })?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("200 products and 200 inverses exact".into())
}

fn four_map_category() -> FinCategory {
    FinCategory::full(vec![("X", FinObject::set(2))], &SearchBounds::default()).unwrap()
}

fn random_categories() -> Vec<FinCategory> {
    let mut rng = seeded(2024);
    (0..10).map(|_| random_category(&mut rng)).collect()
}

fn tampered(r: &Reg2Category) -> Vec<(&'static str, Reg2Category)> {
    let mut out = Vec::new();
    let mut t = r.clone();
    if let Some(v) = t.vertical_composition.first_mut() {
        v[2] = (v[2] + 1) % r.two_cells.len();
        out.push(("rerouted vertical composite", t));
    }
    let mut t = r.clone();
    t.horizontal_composition.pop();
    out.push(("dropped horizontal composite", t));
    let mut t = r.clone();
    let last = t.identities.len() - 1;
    t.identities.swap(0, last);
    if t.identities != r.identities {
        out.push(("swapped identity 1-cells", t));
    }
    out
}

fn regularization_axioms_hold() -> Verdict {
    let start = Instant::now();
    let (mode, bounds) = (RegularityMode::AllRotations, SearchBounds::default());
    let base = build_regularization(&four_map_category(), 1, mode, &bounds).map_err(|e| e.to_string())?;
    let report = verify_2category_axioms(&base);
    ensure(report.passed(), || {
        format!("one-object category: {} violations", report.violation_count())
    })?;
    let mut built = 1;
    for (i, cat) in random_categories().iter().enumerate() {
        for n in 1..=3 {
            let r = build_regularization(cat, n, mode, &bounds).map_err(|e| e.to_string())?;
            let report = verify_2category_axioms(&r);
            ensure(report.passed(), || {
                format!("category {i}, n = {n}: {} violations", report.violation_count())
            })?;
            built += 1;
        }
    }
    let injections = tampered(&base);
    for (what, t) in &injections {
        ensure(!verify_2category_axioms(t).passed(), || {
            format!("{what} went undetected")
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{built} regularizations clean, {} injected violations detected",
        injections.len()
    ))
}

fn double_count_agrees() -> Verdict {
    let (mode, bounds) = (RegularityMode::AllRotations, SearchBounds::default());
    let mut disagreements = Vec::new();
    let mut total = 0;
    for (i, cat) in random_categories().iter().enumerate() {
        for n in 1..=3 {
            let r = double_count(cat, n, mode, &bounds).map_err(|e| e.to_string())?;
            total += 1;
            if !r.bijective {
                let witness = r
                    .collision
                    .map(|(a, b)| format!("; {} and {} share an obstruction", a.describe(cat), b.describe(cat)))
                    .unwrap_or_default();
                disagreements.push(format!(
                    "category {i} {:?}, n = {n}: {} classes vs {} structures{witness}",
                    cat.names(),
                    r.classes,
                    r.structures
                ));
            }
        }
    }
    ensure(disagreements.is_empty(), || {
        format!(
            "{} of {total} cases disagree; first: {}",
            disagreements.len(),
            disagreements[0]
        )
    })?;
    Ok(format!("{total} cases bijective"))
}

fn classical_ybe_solutions() -> BTreeSet<Vec<usize>> {
    all_tables(4, 4)
        .into_iter()
        .filter(|r| {
            let r12 = |(a, b, c): (usize, usize, usize)| (r[a * 2 + b] / 2, r[a * 2 + b] % 2, c);
            let r23 = |(a, b, c): (usize, usize, usize)| (a, r[b * 2 + c] / 2, r[b * 2 + c] % 2);
            (0..8).all(|t| {
                let x = (t / 4, t / 2 % 2, t % 2);
                r12(r23(r12(x))) == r23(r12(r23(x)))
            })
        })
        .collect()
}

fn classical_ybe_reduction() -> Verdict {
    let start = Instant::now();
    let m = MonoidalStructure::cartesian();
    let cat = search_ybe_solutions(
        &m,
        &ObstructionAssignment::identities(),
        &FinObject::set(2),
        2,
        &SearchBounds::default(),
    )
    .map_err(|e| e.to_string())?;
    let found: BTreeSet<Vec<usize>> = cat.solutions.iter().map(|b| b.table().unwrap().to_vec()).collect();
    let oracle = classical_ybe_solutions();
    ensure(cat.candidates == 256, || format!("{} candidates", cat.candidates))?;
    ensure(found == oracle, || {
        format!("{} found vs {} classical", found.len(), oracle.len())
    })?;
    ensure(found.contains(&vec![0, 2, 1, 3]), || "flip missing".into())?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} solutions match the oracle, flip included", found.len()))
}

/// Adds one to a random entry of a random component.
fn perturb<R: Rng>(rng: &mut R, mut inst: ModuleInstance) -> ModuleInstance {
    let target = match rng.gen_range(0..3) {
        0 => &mut inst.rho_m,
        1 => &mut inst.rho_n,
        _ => &mut inst.delta,
    };
    let (i, j) = (rng.gen_range(0..target.rows()), rng.gen_range(0..target.cols()));
    let v = target.get(i, j) + int(1);
    target.set(i, j, v);
    inst
}

fn tensor_module_lemma() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded(8);
    for i in 0..100 {
        let inst = random_regular_module_instance(&mut rng, 3);
        let r = check_tensor_lemma(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(r.outcome.holds, || {
            format!("instance {i}: {:?}", r.outcome.counterexample)
        })?;
        ensure(r.converse.consistent(), || {
            format!("instance {i}: converse probe inconsistent")
        })?;
    }
    let mut named = BTreeSet::new();
    for _ in 0..200 {
        let inst = random_regular_module_instance(&mut rng, 3);
        let inst = perturb(&mut rng, inst);
        match check_tensor_lemma(&inst) {
            Ok(r) => ensure(r.outcome.holds, || "law failed with regular components".into())?,
            Err(RegAlgebraError::PreconditionFailed { component, .. }) => {
                named.insert(component);
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(named.len() == 3, || format!("only {named:?} were reported"))?;
    within(start, Duration::from_secs(30))?;
    Ok("100 instances hold, ρ_M, ρ_N and Δ violations each reported".into())
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

/// Runs one command, returning exit code, stdout, stderr and the bytes of
/// every file it wrote.
fn run_once(args: &[&str], dir: &Path) -> (i32, Vec<u8>, Vec<u8>, Vec<Vec<u8>>) {
    let report = dir.join("report");
    let mut full: Vec<&str> = vec!["regcat"];
    full.extend_from_slice(args);
    let report_arg = report.to_str().unwrap();
    if args[0] != "fmt" {
        full.extend_from_slice(&["--output", report_arg]);
    }
    let cli = regcat_cli::Cli::try_parse_from(full).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = regcat_cli::run(cli, &mut out, &mut err);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let contents = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
    for f in files {
        std::fs::remove_file(f).unwrap();
    }
    (code, out, err, contents)
}

fn commands_are_deterministic() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    for path in fixtures() {
        let p = path.to_str().unwrap();
        for cmd in ["check", "search", "regularize", "fmt"] {
            for format in ["text", "records"] {
                let args: Vec<&str> = if cmd == "fmt" {
                    vec![cmd, p]
                } else {
                    vec![cmd, p, "--format", format]
                };
                let a = run_once(&args, dir.path());
                let b = run_once(&args, dir.path());
                ensure(a == b, || format!("{cmd} {} differs between runs", path.display()))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} command runs reproduced byte for byte"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("regularity oracle equivalence", regularity_oracle_equivalence),
        (
            "invertible atlases reduce to the identity",
            invertible_atlases_have_trivial_towers,
        ),
        ("obstruction detection", canonical_obstruction_is_detected),
        ("Berezinian multiplicativity", berezinian_is_multiplicative),
        ("regularization 2-category axioms", regularization_axioms_hold),
        (
            "regular cycle classes biject with obstruction structures",
            double_count_agrees,
        ),
        ("classical YBE reduction", classical_ybe_reduction),
        ("tensor product of regular module actions", tensor_module_lemma),
        ("determinism", commands_are_deterministic),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {}  {name}: {detail} ({t:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}  {name}: {detail} ({t:.2?})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
