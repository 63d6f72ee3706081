//! The sixteen normal forms and their reference Betti numbers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exterior::{KForm, Monomial};
use crate::field::Field;
use crate::liealg::MinimalAlgebra;

/// One row of the classification, in table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "61-rank2")]
    Rank2,
    #[serde(rename = "61-rank4")]
    Rank4,
    #[serde(rename = "61-rank6")]
    Rank6,
    #[serde(rename = "52-contained")]
    Contained,
    #[serde(rename = "52-bisecant")]
    Bisecant,
    #[serde(rename = "52-tangent-lagrangian")]
    TangentLagrangian,
    #[serde(rename = "52-tangent-line")]
    TangentLine,
    #[serde(rename = "52-disjoint")]
    Disjoint,
    #[serde(rename = "52-bisecant-conjugate")]
    BisecantConjugate,
    #[serde(rename = "43-common-line")]
    CommonLine,
    #[serde(rename = "43-common-plane")]
    CommonPlane,
    #[serde(rename = "43-double-line")]
    DoubleLine,
    #[serde(rename = "43-line-pair")]
    LinePair,
    #[serde(rename = "43-smooth-conic")]
    SmoothConic,
    #[serde(rename = "43-conjugate-line-pair")]
    ConjugateLinePair,
    #[serde(rename = "43-anisotropic-conic")]
    AnisotropicConic,
}

/// Coefficient of a model term.
#[derive(Clone, Copy)]
enum C {
    One,
    A,
    NegB,
}

type Row = &'static [(usize, &'static [(usize, usize, C)])];

impl Shape {
    pub const ALL: [Shape; 16] = [
        Shape::Rank2,
        Shape::Rank4,
        Shape::Rank6,
        Shape::Contained,
        Shape::Bisecant,
        Shape::TangentLagrangian,
        Shape::TangentLine,
        Shape::Disjoint,
        Shape::BisecantConjugate,
        Shape::CommonLine,
        Shape::CommonPlane,
        Shape::DoubleLine,
        Shape::LinePair,
        Shape::SmoothConic,
        Shape::ConjugateLinePair,
        Shape::AnisotropicConic,
    ];

    /// 1-based table row.
    pub fn row(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).expect("listed") + 1
    }

    pub fn from_row(row: usize) -> Option<Shape> {
        row.checked_sub(1).and_then(|i| Self::ALL.get(i).copied())
    }

    pub fn tag(self) -> &'static str {
        match self {
            Shape::Rank2 => "61-rank2",
            Shape::Rank4 => "61-rank4",
            Shape::Rank6 => "61-rank6",
            Shape::Contained => "52-contained",
            Shape::Bisecant => "52-bisecant",
            Shape::TangentLagrangian => "52-tangent-lagrangian",
            Shape::TangentLine => "52-tangent-line",
            Shape::Disjoint => "52-disjoint",
            Shape::BisecantConjugate => "52-bisecant-conjugate",
            Shape::CommonLine => "43-common-line",
            Shape::CommonPlane => "43-common-plane",
            Shape::DoubleLine => "43-double-line",
            Shape::LinePair => "43-line-pair",
            Shape::SmoothConic => "43-smooth-conic",
            Shape::ConjugateLinePair => "43-conjugate-line-pair",
            Shape::AnisotropicConic => "43-anisotropic-conic",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Shape> {
        Self::ALL.into_iter().find(|s| s.tag() == tag)
    }

    pub fn signature(self) -> (usize, usize) {
        match self.row() {
            1..=3 => (6, 1),
            4..=9 => (5, 2),
            _ => (4, 3),
        }
    }

    /// Name of the real nilpotent Lie algebra of the row's model with
    /// `a = -1`, `(a, b) = (-1, -1)`.
    pub fn label(self) -> &'static str {
        REFERENCE_ROWS[self.row() - 1].label
    }

    /// Number of field parameters (`a`, or `a` and `b`).
    pub fn parameters(self) -> usize {
        match self {
            Shape::BisecantConjugate | Shape::ConjugateLinePair => 1,
            Shape::AnisotropicConic => 2,
            _ => 0,
        }
    }

    /// The row with `a` a square, or the isotropic row for the two-parameter
    /// family.
    pub fn split_form(self) -> Shape {
        match self {
            Shape::BisecantConjugate => Shape::Bisecant,
            Shape::ConjugateLinePair => Shape::LinePair,
            Shape::AnisotropicConic => Shape::SmoothConic,
            s => s,
        }
    }

    /// `dx5, dx6, dx7` with the parameters written as `a` and `b`.
    pub fn symbolic(self) -> [String; 3] {
        let mut out = [String::from("0"), String::from("0"), String::from("0")];
        for &(k, terms) in self.terms() {
            let mut s = String::new();
            for (n, &(i, j, c)) in terms.iter().enumerate() {
                let (sep, coef) = match (n, c) {
                    (0, C::NegB) => ("-", "b "),
                    (_, C::NegB) => (" - ", "b "),
                    (0, _) => ("", ""),
                    _ => (" + ", ""),
                };
                let coef = if matches!(c, C::A) { "a " } else { coef };
                s.push_str(&format!("{sep}{coef}x{i}^x{j}"));
            }
            out[k - 5] = s;
        }
        out
    }

    fn terms(self) -> Row {
        use C::*;
        match self {
            Shape::Rank2 => &[(7, &[(1, 2, One)])],
            Shape::Rank4 => &[(7, &[(1, 2, One), (3, 4, One)])],
            Shape::Rank6 => &[(7, &[(1, 2, One), (3, 4, One), (5, 6, One)])],
            Shape::Contained => &[(6, &[(1, 2, One)]), (7, &[(1, 3, One)])],
            Shape::Bisecant => &[(6, &[(1, 2, One)]), (7, &[(3, 4, One)])],
            Shape::TangentLagrangian => &[(6, &[(1, 2, One)]), (7, &[(1, 3, One), (2, 4, One)])],
            Shape::TangentLine => &[(6, &[(1, 2, One)]), (7, &[(1, 3, One), (4, 5, One)])],
            Shape::Disjoint => &[(6, &[(1, 2, One), (3, 4, One)]), (7, &[(1, 3, One), (2, 5, One)])],
            Shape::BisecantConjugate => &[(6, &[(1, 3, One), (2, 4, A)]), (7, &[(1, 4, One), (2, 3, One)])],
            Shape::CommonLine => &[(5, &[(1, 2, One)]), (6, &[(1, 3, One)]), (7, &[(1, 4, One)])],
            Shape::CommonPlane => &[(5, &[(1, 2, One)]), (6, &[(1, 3, One)]), (7, &[(2, 3, One)])],
            Shape::DoubleLine => &[(5, &[(1, 2, One)]), (6, &[(1, 3, One)]), (7, &[(1, 4, One), (2, 3, One)])],
            Shape::LinePair => &[(5, &[(1, 2, One)]), (6, &[(3, 4, One)]), (7, &[(1, 3, One)])],
            Shape::SmoothConic => &[(5, &[(1, 2, One)]), (6, &[(3, 4, One)]), (7, &[(1, 3, One), (2, 4, One)])],
            Shape::ConjugateLinePair => {
                &[(5, &[(1, 4, One), (2, 3, One)]), (6, &[(1, 3, A), (2, 4, One)]), (7, &[(1, 2, One)])]
            }
            Shape::AnisotropicConic => &[
                (5, &[(1, 4, One), (2, 3, One)]),
                (6, &[(1, 3, A), (2, 4, One)]),
                (7, &[(1, 2, One), (3, 4, NegB)]),
            ],
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The normal form of `shape` over `field`; `a` and `b` are ignored by rows
/// that do not use them.
pub fn model<F: Field>(field: &F, shape: Shape, a: &F::Elem, b: &F::Elem) -> MinimalAlgebra<F> {
    let n = 7;
    let mut d: Vec<KForm<F>> = (0..n).map(|_| KForm::zero(field, n, 2)).collect();
    for &(k, terms) in shape.terms() {
        for &(i, j, c) in terms {
            let c = match c {
                C::One => field.one(),
                C::A => a.clone(),
                C::NegB => field.neg(b),
            };
            d[k - 1].add_term(Monomial::pair(i - 1, j - 1), c);
        }
    }
    MinimalAlgebra::new(field, n, d).expect("well-formed model")
}

/// Model of a parameter-free row.
pub fn plain_model<F: Field>(field: &F, shape: Shape) -> MinimalAlgebra<F> {
    model(field, shape, &field.one(), &field.one())
}

/// A row of the reference table over the reals: differentials as printed
/// and the printed Betti numbers.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceRow {
    pub shape: Shape,
    pub label: &'static str,
    /// `dx5`, `dx6`, `dx7`.
    pub differentials: [&'static str; 3],
    pub betti: [usize; 3],
    /// Printed total; not consistent with duality for every row.
    pub printed_sum: usize,
}

pub const REFERENCE_ROWS: [ReferenceRow; 16] = [
    ReferenceRow { shape: Shape::Rank2, label: "L_3 ⊕ A_4", differentials: ["0", "0", "x1^x2"], betti: [6, 16, 25], printed_sum: 71 },
    ReferenceRow { shape: Shape::Rank4, label: "L_{5,1} ⊕ A_2", differentials: ["0", "0", "x1^x2 + x3^x4"], betti: [6, 14, 19], printed_sum: 61 },
    ReferenceRow { shape: Shape::Rank6, label: "L_{7,1}", differentials: ["0", "0", "x1^x2 + x3^x4 + x5^x6"], betti: [6, 14, 14], printed_sum: 56 },
    ReferenceRow { shape: Shape::Contained, label: "L_{5,2} ⊕ A_2", differentials: ["0", "x1^x2", "x1^x3"], betti: [5, 13, 21], printed_sum: 59 },
    ReferenceRow { shape: Shape::Bisecant, label: "L_3 ⊕ L_3 ⊕ A_1", differentials: ["0", "x1^x2", "x3^x4"], betti: [5, 12, 18], printed_sum: 54 },
    ReferenceRow { shape: Shape::TangentLagrangian, label: "L_{6,1} ⊕ A_1", differentials: ["0", "x1^x2", "x1^x3 + x2^x4"], betti: [5, 12, 18], printed_sum: 54 },
    ReferenceRow { shape: Shape::TangentLine, label: "L_{7,2}", differentials: ["0", "x1^x2", "x1^x3 + x4^x5"], betti: [5, 10, 16], printed_sum: 48 },
    ReferenceRow { shape: Shape::Disjoint, label: "L_{7,3}", differentials: ["0", "x1^x2 + x3^x4", "x1^x3 + x2^x5"], betti: [5, 9, 15], printed_sum: 45 },
    ReferenceRow { shape: Shape::BisecantConjugate, label: "L_{6,2} ⊕ A_1", differentials: ["0", "x1^x3 - x2^x4", "x1^x4 + x2^x3"], betti: [5, 12, 18], printed_sum: 54 },
    ReferenceRow { shape: Shape::CommonLine, label: "L_{7,4}", differentials: ["x1^x2", "x1^x3", "x1^x4"], betti: [4, 12, 18], printed_sum: 52 },
    ReferenceRow { shape: Shape::CommonPlane, label: "L_{6,4} ⊕ A_1", differentials: ["x1^x2", "x1^x3", "x2^x3"], betti: [4, 11, 20], printed_sum: 52 },
    ReferenceRow { shape: Shape::DoubleLine, label: "L_{7,5}", differentials: ["x1^x2", "x1^x3", "x1^x4 + x2^x3"], betti: [4, 11, 17], printed_sum: 49 },
    ReferenceRow { shape: Shape::LinePair, label: "L_{7,6}", differentials: ["x1^x2", "x3^x4", "x1^x3"], betti: [4, 11, 16], printed_sum: 48 },
    ReferenceRow { shape: Shape::SmoothConic, label: "L_{7,7}", differentials: ["x1^x2", "x3^x4", "x1^x4 + x2^x3"], betti: [4, 11, 14], printed_sum: 46 },
    ReferenceRow { shape: Shape::ConjugateLinePair, label: "L_{7,8}", differentials: ["x1^x4 + x2^x3", "-x1^x3 + x2^x4", "x1^x2"], betti: [4, 11, 16], printed_sum: 48 },
    ReferenceRow { shape: Shape::AnisotropicConic, label: "L_{7,9}", differentials: ["x1^x4 + x2^x3", "-x1^x3 + x2^x4", "x1^x2 + x3^x4"], betti: [4, 11, 14], printed_sum: 46 },
];

/// The printed reference model of a row over `field`.
pub fn reference_model<F: Field>(field: &F, shape: Shape) -> MinimalAlgebra<F> {
    let row = &REFERENCE_ROWS[shape.row() - 1];
    let diffs: Vec<(usize, &str)> = row.differentials.iter().enumerate().map(|(i, s)| (i + 5, *s)).collect();
    MinimalAlgebra::from_text(field, 7, &diffs).expect("reference differentials parse")
}
