//! Runners for the acceptance criteria. Shared by the `acceptance` test target
//! and `minimal7 selftest`; every runner returns one [`CheckReport`].

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{
    classify, enumerate_classes, is_isomorphic, model, Certificate, ClassifyError, Shape,
};
use crate::cohomology::{betti, verify_reference_rows};
use crate::field::{Field, PrimeField, RationalField};
use crate::liealg::{random_basis_change, random_presentation, random_structure_constants, random_unimodular_change};
use crate::quadform::{conic_point_count, hilbert_symbol, is_isotropic_ternary, relevant_places, Place};

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {} {}: {} ({:.2} s)", self.id, self.title, self.detail, self.seconds)
    }
}

/// Sample sizes. The defaults are the acceptance sizes.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub enumeration_samples: usize,
    pub changes_per_model: usize,
    pub hilbert_trials: usize,
    pub flatness_trials: usize,
    pub duality_trials: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            enumeration_samples: 10_000,
            changes_per_model: 100,
            hilbert_trials: 1_000,
            flatness_trials: 1_000,
            duality_trials: 1_000,
        }
    }
}

fn report(id: u8, title: &'static str, start: Instant, pass: bool, detail: String) -> CheckReport {
    CheckReport { id, title, pass, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(cfg: &CheckConfig) -> Vec<CheckReport> {
    let (c3, c4) = basis_change_invariance(cfg);
    vec![
        reference_betti(),
        class_counts(cfg),
        c3,
        c4,
        hilbert_suite(cfg),
        isotropy_agreement(),
        flatness_equivalence(cfg),
        duality(cfg),
        conic_points(),
    ]
}

/// Criterion 1.
pub fn reference_betti() -> CheckReport {
    let start = Instant::now();
    let mut slowest = 0f64;
    let mut good = 0;
    let mut sums = Vec::new();
    for row in verify_reference_rows_timed(&mut slowest) {
        if row.pass {
            good += 1;
        }
        if row.printed_sum != row.computed_sum {
            sums.push(format!("{}:{}/{}", row.row, row.printed_sum, row.computed_sum));
        }
    }
    let pass = good == 16 && slowest < 1.0;
    let detail = format!(
        "{good}/16 rows match, slowest {slowest:.3} s; printed/computed totals differ on rows {}",
        if sums.is_empty() { "none".to_string() } else { sums.join(" ") }
    );
    report(1, "reference Betti numbers", start, pass, detail)
}

fn verify_reference_rows_timed(slowest: &mut f64) -> Vec<crate::cohomology::ReferenceCheck> {
    // time each row on its own, then take the full comparison
    let q = RationalField::Q;
    for shape in Shape::ALL {
        let t = Instant::now();
        let _ = betti(&crate::classify::reference_model(&q, shape));
        *slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    verify_reference_rows()
}

/// Criterion 2.
pub fn class_counts(cfg: &CheckConfig) -> CheckReport {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    let mut run = |name: &str, expected: usize, outcome: Result<(usize, usize, f64), ClassifyError>| match outcome {
        Ok((count, clashes, secs)) => {
            let ok = count == expected && clashes == 0 && secs < 60.0;
            pass &= ok;
            parts.push(format!("{name} {count}/{expected} ({clashes} clashes, {secs:.1} s)"));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("{name} error: {e}"));
        }
    };
    run("Qbar", 13, count_classes(&RationalField::QBAR, cfg));
    run("R", 16, count_classes(&RationalField::R, cfg));
    run("F3", 15, count_classes(&PrimeField::new(3).expect("odd prime"), cfg));
    run("F5", 15, count_classes(&PrimeField::new(5).expect("odd prime"), cfg));
    report(2, "class counts", start, pass, parts.join(", "))
}

fn count_classes<F: Field>(f: &F, cfg: &CheckConfig) -> Result<(usize, usize, f64), ClassifyError> {
    let t = Instant::now();
    let classes: Vec<_> = enumerate_classes(f, cfg.enumeration_samples, cfg.seed)?.into_iter().collect();
    let models = classes.iter().map(|c| c.model(f)).collect::<Result<Vec<_>, _>>()?;
    let mut clashes = 0;
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            if is_isomorphic(&models[i], &models[j])? {
                clashes += 1;
            }
        }
    }
    Ok((classes.len(), clashes, t.elapsed().as_secs_f64()))
}

#[derive(Default)]
struct Trials {
    total: usize,
    same: usize,
    base: usize,
    extension: usize,
    cert_failures: usize,
    errors: Vec<String>,
}

/// Criteria 3 and 4, which share their trials.
pub fn basis_change_invariance(cfg: &CheckConfig) -> (CheckReport, CheckReport) {
    let start = Instant::now();
    let mut t = Trials::default();
    let q = RationalField::Q;
    let m1 = q.from_i64(-1);
    trials(&q, &m1, &m1, cfg, &mut t);
    let f5 = PrimeField::new(5).expect("odd prime");
    let two = f5.from_i64(2);
    trials(&f5, &two, &two, cfg, &mut t);
    let r = RationalField::R;
    trials(&r, &m1, &m1, cfg, &mut t);
    let errs = if t.errors.is_empty() { String::new() } else { format!("; errors: {}", t.errors.join("; ")) };
    let c3 = report(
        3,
        "basis-change invariance",
        start,
        t.same == t.total && t.errors.is_empty(),
        format!("{}/{} trials give the same canonical form{errs}", t.same, t.total),
    );
    let c4 = report(
        4,
        "certificate soundness",
        start,
        t.cert_failures == 0 && t.errors.is_empty() && t.base + t.extension > 0,
        format!(
            "{} base and {} extension certificates re-applied, {} failures",
            t.base, t.extension, t.cert_failures
        ),
    );
    (c3, c4)
}

fn trials<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, cfg: &CheckConfig, t: &mut Trials) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    for shape in Shape::ALL {
        let base = model(f, shape, a, b);
        let expected = match classify(&base) {
            Ok(r) => r.canonical,
            Err(e) => {
                t.errors.push(format!("{} {shape}: {e}", f.descriptor()));
                continue;
            }
        };
        for _ in 0..cfg.changes_per_model {
            t.total += 1;
            let p = random_basis_change(f, 7, &mut rng, 2);
            let outcome = base.apply_basis_change(&p).map_err(ClassifyError::from).and_then(|alg| classify(&alg));
            let rep = match outcome {
                Ok(r) => r,
                Err(e) => {
                    t.errors.push(format!("{} {shape}: {e}", f.descriptor()));
                    continue;
                }
            };
            if rep.canonical == expected {
                t.same += 1;
            }
            if matches!(rep.certificate, Certificate::Base(_)) {
                t.base += 1;
            }
            if rep.extension.is_some() {
                t.extension += 1;
            }
            if !rep.verify().unwrap_or(false) {
                t.cert_failures += 1;
            }
        }
    }
}

fn random_rational<R: Rng>(rng: &mut R, h: i64) -> BigRational {
    loop {
        let n = rng.gen_range(-h..=h);
        if n != 0 {
            return BigRational::new(n.into(), rng.gen_range(1..=h).into());
        }
    }
}

/// Criterion 5.
pub fn hilbert_suite(cfg: &CheckConfig) -> CheckReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x41b);
    let places = [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7), Place::Prime(11), Place::Prime(13)];
    let h = |a: &BigRational, b: &BigRational, v: Place| hilbert_symbol(a, b, v).unwrap_or(0);
    let one = BigRational::one();
    let mut failures = Vec::new();
    for i in 0..cfg.hilbert_trials {
        let a = random_rational(&mut rng, 30);
        let b = random_rational(&mut rng, 30);
        let a2 = random_rational(&mut rng, 30);
        let c = random_rational(&mut rng, 30);
        let v = places[rng.gen_range(0..places.len())];
        let ab = h(&a, &b, v);
        let mut ok = ab != 0
            && ab == h(&b, &a, v)
            && h(&a, &(&c * &c), v) == 1
            && h(&a, &-&a, v) == 1
            && h(&(&a * &a2), &b, v) == ab * h(&a2, &b, v)
            && h(&a, &-(&a * &b), v) == ab;
        if a != one {
            ok &= h(&a, &(&one - &a), v) == 1 && h(&a, &((&one - &a) * &b), v) == ab;
        }
        if !ok {
            failures.push(format!("#{i} ({a}, {b})_{v}"));
        }
    }
    let mut odd = 0;
    for _ in 0..cfg.hilbert_trials {
        let a = random_rational(&mut rng, 60);
        let b = random_rational(&mut rng, 60);
        let prod: i64 = match relevant_places(&a, &b, 1 << 20) {
            Ok(s) => s.iter().map(|&v| h(&a, &b, v) as i64).product(),
            Err(_) => 0,
        };
        if prod != 1 {
            odd += 1;
        }
    }
    let m1 = -BigRational::one();
    let anchor = h(&m1, &m1, Place::Infinity) == -1
        && [Place::Prime(2), Place::Prime(3), Place::Prime(7), Place::Infinity]
            .iter()
            .all(|&v| h(&BigRational::from_integer(5.into()), &BigRational::from_integer(9.into()), v) == 1);
    let pass = failures.is_empty() && odd == 0 && anchor;
    let detail = format!(
        "{} property failures in {} triples, {odd} product-formula failures in {} pairs, anchors {}",
        failures.len(),
        cfg.hilbert_trials,
        cfg.hilbert_trials,
        if anchor { "hold" } else { "fail" }
    );
    report(5, "Hilbert symbol", start, pass, detail)
}

fn squarefree(n: i64) -> bool {
    let n = n.abs();
    (2..=n).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0)
}

/// Brute-force isotropy of `X^2 - a Y^2 - b Z^2`: a search for an integer
/// zero of height at most 200, otherwise a local obstruction. `None` when
/// neither is found.
pub fn isotropy_oracle(a: i64, b: i64) -> Option<bool> {
    for y in 0..=200i64 {
        for z in 0..=200i64 {
            if y == 0 && z == 0 {
                continue;
            }
            let v = a * y * y + b * z * z;
            if v >= 0 {
                let x = (v as f64).sqrt().round() as i64;
                if x <= 200 && x * x == v {
                    return Some(true);
                }
            }
        }
    }
    if a < 0 && b < 0 {
        return Some(false);
    }
    let mut primes = vec![2i64];
    for p in 3..=a.abs().max(b.abs()) {
        if (2..p).all(|d| p % d != 0) && (a % p == 0 || b % p == 0) {
            primes.push(p);
        }
    }
    for p in primes {
        let m = if p == 2 { 16 } else { p * p };
        if !has_primitive_zero(a, b, p, m) {
            return Some(false);
        }
    }
    None
}

/// Whether `X^2 = a Y^2 + b Z^2` has a solution mod `m` (a power of `p`)
/// with not all of `X, Y, Z` divisible by `p`.
fn has_primitive_zero(a: i64, b: i64, p: i64, m: i64) -> bool {
    let idx = |v: i64| v.rem_euclid(m) as usize;
    let mut square = vec![false; m as usize];
    let mut unit_square = vec![false; m as usize];
    for x in 0..m {
        square[idx(x * x)] = true;
        if x % p != 0 {
            unit_square[idx(x * x)] = true;
        }
    }
    for y in 0..m {
        for z in 0..m {
            let r = idx(a * y * y + b * z * z);
            let primitive_yz = y % p != 0 || z % p != 0;
            if (primitive_yz && square[r]) || unit_square[r] {
                return true;
            }
        }
    }
    false
}

/// Criterion 6.
pub fn isotropy_agreement() -> CheckReport {
    let start = Instant::now();
    let q = RationalField::Q;
    let vals: Vec<i64> = (-20..=20i64).filter(|&v| v != 0 && squarefree(v)).collect();
    let mut forms = 0;
    let mut disagree = Vec::new();
    let mut inconclusive = 0;
    for &a in &vals {
        for &b in &vals {
            forms += 1;
            let got = is_isotropic_ternary(&q, &q.from_i64(a), &q.from_i64(b)).ok();
            match isotropy_oracle(a, b) {
                None => inconclusive += 1,
                Some(x) if Some(x) != got => disagree.push(format!("({a},{b})")),
                Some(_) => {}
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = disagree.is_empty() && inconclusive == 0 && secs < 120.0;
    let detail = format!(
        "{forms} forms, {} disagreements{}, {inconclusive} inconclusive",
        disagree.len(),
        if disagree.is_empty() { String::new() } else { format!(" {}", disagree.join(" ")) }
    );
    report(6, "isotropy oracle", start, pass, detail)
}

/// Criterion 7.
pub fn flatness_equivalence(cfg: &CheckConfig) -> CheckReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7);
    let (mut disagree, mut flat) = (0, 0);
    let q = RationalField::Q;
    let f5 = PrimeField::new(5).expect("odd prime");
    for i in 0..cfg.flatness_trials {
        let n = 5 + i % 3;
        let density = [0.05, 0.1, 0.2][i % 3];
        let (j, d) = if i % 2 == 0 {
            let sc = random_structure_constants(&q, n, &mut rng, 3, density);
            (sc.jacobi(), sc.dualize().check_flatness())
        } else {
            let sc = random_structure_constants(&f5, n, &mut rng, 3, density);
            (sc.jacobi(), sc.dualize().check_flatness())
        };
        if j != d {
            disagree += 1;
        }
        if j {
            flat += 1;
        }
    }
    let detail = format!("{} sets ({flat} satisfy Jacobi), {disagree} disagreements", cfg.flatness_trials);
    report(7, "flatness vs Jacobi", start, disagree == 0 && flat > 0 && flat < cfg.flatness_trials, detail)
}

/// Criterion 8.
pub fn duality(cfg: &CheckConfig) -> CheckReport {
    let start = Instant::now();
    let q = RationalField::Q;
    let mut failures = 0;
    for shape in Shape::ALL {
        match betti(&crate::classify::reference_model(&q, shape)) {
            Ok(b) if b.satisfies_duality() && b.euler_characteristic() == 0 => {}
            _ => failures += 1,
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x8);
    for i in 0..cfg.duality_trials {
        let (f0, f1) = [(6, 1), (5, 2), (4, 3)][i % 3];
        let ok = random_presentation(&q, f0, f1, &mut rng, 3)
            .and_then(|alg| alg.apply_basis_change(&random_unimodular_change(&q, 7, &mut rng, 2, 8)))
            .ok()
            .and_then(|alg| betti(&alg).ok())
            .is_some_and(|b| b.satisfies_duality() && b.euler_characteristic() == 0);
        if !ok {
            failures += 1;
        }
    }
    let detail = format!("16 reference models and {} random presentations, {failures} failures", cfg.duality_trials);
    report(8, "duality and Euler characteristic", start, failures == 0, detail)
}

/// Criterion 9.
pub fn conic_points() -> CheckReport {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for p in [3u64, 5, 7] {
        let f = PrimeField::new(p).expect("odd prime");
        let mut bad = 0;
        for a in 1..p {
            for b in 1..p {
                let counted = conic_point_count(&f, &f.from_i64(a as i64), &f.from_i64(b as i64)).ok();
                let direct = projective_zeros(p, a, b);
                if counted != Some(p + 1) || direct != p + 1 {
                    bad += 1;
                }
            }
        }
        pass &= bad == 0;
        parts.push(format!("F{p}: {} conics with {} points, {bad} mismatches", (p - 1) * (p - 1), p + 1));
    }
    report(9, "conic point counts", start, pass, parts.join(", "))
}

/// Zeros of `X^2 - a Y^2 - b Z^2` in `P^2(F_p)`, one representative per
/// line: first nonzero coordinate equal to 1.
fn projective_zeros(p: u64, a: u64, b: u64) -> u64 {
    let mut n = 0;
    let reps = (0..p).flat_map(|y| (0..p).map(move |z| [1, y, z])).chain((0..p).map(|z| [0, 1, z])).chain([[0, 0, 1]]);
    for [x, y, z] in reps {
        let v = (x * x + (p - a) * y * y % p + (p - b) * z * z % p) % p;
        if v == 0 {
            n += 1;
        }
    }
    n
}
