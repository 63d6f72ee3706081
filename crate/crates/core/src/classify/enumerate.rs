//! Class enumeration: parametric seeds plus random presentations.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::Field;
use crate::liealg::{random_presentation, random_unimodular_change};

use super::models::{model, Shape};
use super::{classify_with, CanonicalForm, ClassifyError, ClassifyOptions};

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub samples: usize,
    pub seed: u64,
    /// Coefficient height of the random presentations.
    pub height: u32,
    /// Values of `a` tried over fields with infinitely many square classes.
    pub rational_parameters: Vec<i64>,
    /// Pairs `(a, b)` tried for the two-parameter row over such fields.
    pub quaternion_pairs: Vec<(i64, i64)>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 0,
            height: 3,
            rational_parameters: vec![1, -1, 2, -2, 3, -3, 5, 6, 7, -7],
            quaternion_pairs: quaternion_seeds(),
        }
    }
}

/// A few quaternion pairs over `Q` with different ramification.
pub fn quaternion_seeds() -> Vec<(i64, i64)> {
    vec![(-1, -1), (-1, -3), (2, 5), (-2, -5), (3, -7), (-1, 3), (1, 1), (2, 3)]
}

pub fn enumerate_classes<F: Field>(field: &F, samples: usize, seed: u64) -> Result<BTreeSet<CanonicalForm>, ClassifyError> {
    enumerate_classes_with(field, &EnumerationOptions { samples, seed, ..Default::default() })
}

pub fn enumerate_classes_with<F: Field>(
    field: &F,
    opts: &EnumerationOptions,
) -> Result<BTreeSet<CanonicalForm>, ClassifyError> {
    let f = field;
    let quiet = ClassifyOptions { certificates: false, ..Default::default() };
    let params: Vec<F::Elem> = match f.square_class_reps() {
        Some(reps) => reps,
        None => opts.rational_parameters.iter().map(|&a| f.from_i64(a)).collect(),
    };
    let pairs: Vec<(F::Elem, F::Elem)> = match f.square_class_reps() {
        Some(reps) => reps.iter().flat_map(|a| reps.iter().map(move |b| (a.clone(), b.clone()))).collect(),
        None => opts.quaternion_pairs.iter().map(|&(a, b)| (f.from_i64(a), f.from_i64(b))).collect(),
    };
    let mut seeds = Vec::new();
    for shape in Shape::ALL {
        match shape.parameters() {
            0 => seeds.push(model(f, shape, &f.one(), &f.one())),
            1 => seeds.extend(params.iter().map(|a| model(f, shape, a, &f.one()))),
            _ => seeds.extend(pairs.iter().map(|(a, b)| model(f, shape, a, b))),
        }
    }
    let mut out = BTreeSet::new();
    for alg in &seeds {
        out.insert(classify_with(alg, &quiet)?.canonical);
    }
    let sampled: Vec<CanonicalForm> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let (f0, f1) = [(6, 1), (5, 2), (4, 3)][i % 3];
            let alg = random_presentation(f, f0, f1, &mut rng, opts.height)?;
            let p = random_unimodular_change(f, 7, &mut rng, 2, 12);
            Ok(classify_with(&alg.apply_basis_change(&p)?, &quiet)?.canonical)
        })
        .collect::<Result<_, ClassifyError>>()?;
    out.extend(sampled);
    Ok(out)
}
