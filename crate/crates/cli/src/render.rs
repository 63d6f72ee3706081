//! JSON and text renderings of the reports.

use std::collections::BTreeSet;
use std::fmt::Write;

use minimal7::classify::{
    reference_model, CanonicalForm, Certificate, ClassificationReport, ClassifyError, Shape, REFERENCE_ROWS,
};
use minimal7::cohomology::{betti, BettiVector};
use minimal7::field::{Field, FieldDescriptor};
use minimal7::linalg::BasisChange;
use minimal7::liealg::MinimalAlgebra;
use serde_json::{json, Value};

use crate::io::presentation_json;
use crate::Output;

fn columns<F: Field>(p: &BasisChange<F>) -> Value {
    let f = p.matrix().field();
    let cols: Vec<Vec<String>> =
        p.matrix().columns().iter().map(|c| c.iter().map(|x| f.format_elem(x)).collect()).collect();
    json!(cols)
}

fn signature_text(s: (usize, usize)) -> String {
    format!("({},{})", s.0, s.1)
}

/// `dx5, dx6, dx7` of a presentation, as text.
fn top_three<F: Field>(alg: &MinimalAlgebra<F>) -> [String; 3] {
    [4, 5, 6].map(|k| alg.differential(k).to_string())
}

fn table_text(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> =
            r.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        let _ = writeln!(out, "{}", cells.join(" | ").trim_end());
    }
    out
}

pub fn report_json<F: Field>(r: &ClassificationReport<F>, verified: bool) -> Value {
    let certificate = match &r.certificate {
        Certificate::Base(p) => json!({ "kind": "base", "columns": columns(p) }),
        Certificate::Omitted { reason } => json!({ "kind": "omitted", "reason": reason }),
    };
    let extension = r.extension.as_ref().map(|e| {
        json!({
            "field": e.field.descriptor().to_string(),
            "split_shape": e.split_shape,
            "to_split": columns(&e.to_split),
            "descent": columns(&e.descent),
        })
    });
    json!({
        "field": r.input.field().descriptor().to_string(),
        "input": presentation_json(&r.input),
        "signature": r.signature,
        "trace": r.trace,
        "canonical": r.canonical,
        "model": presentation_json(&r.model),
        "certificate": certificate,
        "extension": extension,
        "verified": verified,
        "summary": r.canonical.to_string(),
    })
}

pub fn report_text<F: Field>(r: &ClassificationReport<F>, verified: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field: {}", r.input.field().descriptor());
    let _ = writeln!(out, "input: {}", r.input);
    let _ = writeln!(out, "trace:");
    for s in &r.trace {
        let _ = writeln!(out, "  {}: {}", s.branch, s.witness);
    }
    let [d5, d6, d7] = top_three(&r.model);
    let rows = vec![
        vec!["row".to_string(), "(f0,f1)".into(), "dx5".into(), "dx6".into(), "dx7".into(), "label".into()],
        vec![
            r.canonical.row.to_string(),
            signature_text(r.signature),
            d5,
            d6,
            d7,
            r.canonical.label.clone().unwrap_or_else(|| "-".into()),
        ],
    ];
    out.push_str(&table_text(&rows));
    let _ = writeln!(out, "normal form: {}", r.canonical);
    match &r.certificate {
        Certificate::Base(_) => {
            let _ = writeln!(out, "certificate: basis change, {}", if verified { "verified" } else { "FAILED" });
        }
        Certificate::Omitted { reason } => {
            let _ = writeln!(out, "certificate: omitted ({reason})");
        }
    }
    if let Some(e) = &r.extension {
        let _ = writeln!(
            out,
            "extension certificate over {} via {}: {}",
            e.field.descriptor(),
            e.split_shape,
            if verified { "verified" } else { "FAILED" }
        );
    }
    out
}

fn comparison(b: &BettiVector, shape: Shape) -> Value {
    let row = &REFERENCE_ROWS[shape.row() - 1];
    let computed = [b.get(1), b.get(2), b.get(3)];
    json!({
        "row": row.shape.row(),
        "label": row.label,
        "expected": row.betti,
        "computed": computed,
        "match": computed == row.betti,
    })
}

pub fn betti_json<F: Field>(b: &BettiVector, class: &Result<ClassificationReport<F>, ClassifyError>) -> Value {
    let reference = match class {
        Ok(r) => comparison(b, r.canonical.shape),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    json!({
        "betti": b.0,
        "total": b.total(),
        "euler_characteristic": b.euler_characteristic(),
        "duality": b.satisfies_duality(),
        "reference": reference,
    })
}

pub fn betti_text<F: Field>(b: &BettiVector, class: &Result<ClassificationReport<F>, ClassifyError>) -> String {
    let mut out = format!(
        "betti: {b}\ntotal: {}\neuler characteristic: {}\nduality: {}\n",
        b.total(),
        b.euler_characteristic(),
        b.satisfies_duality()
    );
    match class {
        Ok(r) => {
            let row = &REFERENCE_ROWS[r.canonical.shape.row() - 1];
            let computed = [b.get(1), b.get(2), b.get(3)];
            let _ = writeln!(
                out,
                "reference row {} ({}): expected (b1,b2,b3) = {:?}, computed {:?}, {}",
                row.shape.row(),
                row.label,
                row.betti,
                computed,
                if computed == row.betti { "match" } else { "MISMATCH" }
            );
        }
        Err(e) => {
            let _ = writeln!(out, "reference row: unavailable ({e})");
        }
    }
    out
}

pub fn enumeration(field: &FieldDescriptor, samples: usize, seed: u64, classes: &BTreeSet<CanonicalForm>) -> Output {
    let mut text = String::new();
    for c in classes {
        let _ = writeln!(text, "{c}");
    }
    let _ = writeln!(text, "{} classes over {field}", classes.len());
    let json = json!({
        "field": field,
        "samples": samples,
        "seed": seed,
        "count": classes.len(),
        "classes": classes,
    });
    Output { json, text, ok: true }
}

pub fn tables<F: Field>(f: &F) -> Output {
    let mut t1 = vec![vec!["row".to_string(), "(f0,f1)".into(), "dx5".into(), "dx6".into(), "dx7".into()]];
    let mut t1_json = Vec::new();
    let mut last = (0, 0);
    for s in Shape::ALL {
        let [d5, d6, d7] = s.symbolic();
        let sig = if s.signature() == last { String::new() } else { signature_text(s.signature()) };
        last = s.signature();
        t1_json.push(json!({ "row": s.row(), "shape": s, "signature": s.signature(), "dx5": d5, "dx6": d6, "dx7": d7 }));
        t1.push(vec![s.row().to_string(), sig, d5, d6, d7]);
    }
    let mut t2 = vec![["row", "(f0,f1)", "dx5", "dx6", "dx7", "b1", "b2", "b3", "sum printed", "sum computed", "label"]
        .map(String::from)
        .to_vec()];
    let mut t2_json = Vec::new();
    let mut ok = true;
    for row in &REFERENCE_ROWS {
        let alg = reference_model(f, row.shape);
        let b = match betti(&alg) {
            Ok(b) => b,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        let computed = [b.get(1), b.get(2), b.get(3)];
        ok &= computed == row.betti;
        let [d5, d6, d7] = top_three(&alg);
        t2_json.push(json!({
            "row": row.shape.row(),
            "label": row.label,
            "dx5": d5, "dx6": d6, "dx7": d7,
            "expected": row.betti,
            "computed": computed,
            "printed_sum": row.printed_sum,
            "computed_sum": b.total(),
        }));
        let cell = |k: usize| {
            if computed[k] == row.betti[k] {
                computed[k].to_string()
            } else {
                format!("{} (printed {})", computed[k], row.betti[k])
            }
        };
        t2.push(vec![
            row.shape.row().to_string(),
            signature_text(row.shape.signature()),
            d5,
            d6,
            d7,
            cell(0),
            cell(1),
            cell(2),
            row.printed_sum.to_string(),
            b.total().to_string(),
            row.label.to_string(),
        ]);
    }
    let text = format!(
        "normal forms over {}\n{}\nreference models, Betti numbers recomputed over {}\n{}",
        f.descriptor(),
        table_text(&t1),
        f.descriptor(),
        table_text(&t2)
    );
    Output { json: json!({ "field": f.descriptor(), "normal_forms": t1_json, "reference": t2_json }), text, ok }
}
