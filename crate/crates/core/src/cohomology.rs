//! Betti numbers of the Chevalley–Eilenberg complex of a presentation.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::models::{reference_model, Shape, REFERENCE_ROWS};
use crate::exterior::{KForm, Monomial};
use crate::field::{Field, RationalField};
use crate::linalg::Matrix;
use crate::liealg::MinimalAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("d does not square to zero")]
    NotFlat,
    #[error("{0} generators is too many for a dense cochain complex")]
    TooLarge(usize),
}

/// `b_0 .. b_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn satisfies_duality(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|k| self.0[k] == self.0[n - 1 - k])
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Matrix of `d: Λ^k -> Λ^{k+1}` in the lexicographic monomial bases.
pub fn differential_matrix<F: Field>(alg: &MinimalAlgebra<F>, k: usize) -> Matrix<F> {
    let f = alg.field();
    let n = alg.dim();
    let src = Monomial::all(n, k);
    let rows = Monomial::all(n, k + 1).len();
    let cols: Vec<Vec<F::Elem>> = src
        .iter()
        .map(|m| {
            let mut x = KForm::zero(f, n, k);
            x.add_term(*m, f.one());
            alg.d(&x).coefficient_vector()
        })
        .collect();
    Matrix::from_cols(f, rows, &cols).expect("consistent sizes")
}

pub fn betti<F: Field>(alg: &MinimalAlgebra<F>) -> Result<BettiVector, CohomologyError> {
    let n = alg.dim();
    if n > 16 {
        return Err(CohomologyError::TooLarge(n));
    }
    if !alg.check_flatness() {
        return Err(CohomologyError::NotFlat);
    }
    let ranks: Vec<usize> = (0..=n).into_par_iter().map(|k| if k == n { 0 } else { differential_matrix(alg, k).rank() }).collect();
    let b = (0..=n)
        .map(|k| {
            let before = if k == 0 { 0 } else { ranks[k - 1] };
            binomial(n, k) - ranks[k] - before
        })
        .collect();
    Ok(BettiVector(b))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Comparison of one reference row with the recomputed Betti numbers.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceCheck {
    pub row: usize,
    pub shape: Shape,
    pub label: &'static str,
    pub expected: [usize; 3],
    pub computed: BettiVector,
    pub printed_sum: usize,
    pub computed_sum: usize,
    pub pass: bool,
}

/// Recomputes the reference Betti numbers for every row over `Q`.
pub fn verify_reference_rows() -> Vec<ReferenceCheck> {
    let q = RationalField::Q;
    REFERENCE_ROWS
        .iter()
        .map(|row| {
            let alg = reference_model(&q, row.shape);
            let b = betti(&alg).expect("reference models are flat");
            let computed = [b.get(1), b.get(2), b.get(3)];
            ReferenceCheck {
                row: row.shape.row(),
                shape: row.shape,
                label: row.label,
                expected: row.betti,
                computed_sum: b.total(),
                pass: computed == row.betti && b.satisfies_duality() && b.euler_characteristic() == 0,
                computed: b,
                printed_sum: row.printed_sum,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::liealg::{random_basis_change, random_presentation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let q = RationalField::Q;
        let l71 = MinimalAlgebra::from_text(&q, 7, &[(7, "x1^x2 + x3^x4 + x5^x6")]).unwrap();
        assert_eq!(betti(&l71).unwrap().0, vec![1, 6, 14, 14, 14, 14, 6, 1]);
        let ab = MinimalAlgebra::abelian(&q, 7);
        assert_eq!(betti(&ab).unwrap().0, vec![1, 7, 21, 35, 35, 21, 7, 1]);
        let l3 = MinimalAlgebra::from_text(&q, 7, &[(7, "x1^x2")]).unwrap();
        let b = betti(&l3).unwrap();
        assert_eq!((b.get(1), b.get(2), b.get(3)), (6, 16, 25));
        let bad = MinimalAlgebra::from_text(&q, 5, &[(3, "x1^x2"), (4, "x1^x2"), (5, "x3^x4")]).unwrap();
        assert_eq!(betti(&bad), Err(CohomologyError::NotFlat));
    }

    #[test]
    fn reference_rows() {
        let checks = verify_reference_rows();
        assert_eq!(checks.len(), 16);
        for c in &checks {
            assert!(c.pass, "row {}: {:?} vs {}", c.row, c.expected, c.computed);
        }
        assert_eq!(checks[11].computed.0[1..4], [4, 11, 17]);
        assert_eq!(checks[15].computed.0[1..4], [4, 11, 14]);
        // duality forces the total to be 2(b0+b1+b2+b3)
        assert_eq!(checks[0].computed_sum, 96);
        assert_eq!(checks[2].computed_sum, 70);
    }

    #[test]
    fn agrees_over_f101() {
        let f = PrimeField::new(101).unwrap();
        for row in &REFERENCE_ROWS {
            let bq = betti(&reference_model(&RationalField::Q, row.shape)).unwrap();
            let bp = betti(&reference_model(&f, row.shape)).unwrap();
            assert_eq!(bq, bp, "{}", row.label);
        }
    }

    #[test]
    fn invariant_under_basis_change() {
        let q = RationalField::Q;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for row in REFERENCE_ROWS.iter().step_by(3) {
            let alg = reference_model(&q, row.shape);
            let b = betti(&alg).unwrap();
            for _ in 0..3 {
                let p = random_basis_change(&q, 7, &mut rng, 2);
                assert_eq!(betti(&alg.apply_basis_change(&p).unwrap()).unwrap(), b);
            }
        }
    }

    #[test]
    fn closed_generators_count_b1() {
        let f5 = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (f0, f1) in [(6, 1), (5, 2), (4, 3)] {
            for _ in 0..5 {
                let alg = random_presentation(&f5, f0, f1, &mut rng, 4).unwrap();
                let b = betti(&alg).unwrap();
                assert_eq!(b.get(1), f0);
                assert!(b.satisfies_duality());
                assert_eq!(b.euler_characteristic(), 0);
            }
        }
    }
}
