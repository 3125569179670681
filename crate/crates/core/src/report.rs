//! Rendering analyses as JSON, aligned text or CSV.

use serde_json::{json, Value};

use crate::corpus::CorpusEntry;
use crate::double_points::{BranchKind, Label};
use crate::germ::QhType;
use crate::invariants;
use crate::pipeline::{Analysis, AnalysisError};

pub const SCHEMA: u32 = 1;

fn qh_json(t: &QhType) -> Value {
    json!({ "text": t.to_string(), "d": t.d, "a": t.a, "b": t.b })
}

fn value_json(v: &invariants::Value) -> Value {
    let mut o = json!({ "value": v.value, "formula": v.formula });
    if let Some(a) = v.alternate {
        o["alternate"] = json!(a);
    }
    if let Some(x) = v.oracle {
        o["oracle"] = json!(x);
    }
    o
}

fn branches_json(a: &Analysis) -> Value {
    let items: Vec<Value> = a
        .curve
        .branches
        .iter()
        .map(|b| {
            let mut o = match &b.kind {
                BranchKind::XAxis => json!({ "id": b.id, "kind": "x-axis", "equation": "x" }),
                BranchKind::Binomial { alpha, .. } => {
                    let (qa, qb) = (a.normal_form.qh.a, a.normal_form.qh.b);
                    let mut o = json!({
                        "id": b.id,
                        "kind": "binomial",
                        "equation": format!("y^{qa} - alpha*x^{qb}"),
                        "alpha": alpha.to_decimal(30),
                    });
                    if let Some(q) = &alpha.exact {
                        o["alpha_exact"] = json!(q.to_string());
                    }
                    o
                }
            };
            match b.label {
                Label::Fold => o["label"] = json!("fold"),
                Label::Identification { partner } => {
                    o["label"] = json!("identification");
                    o["partner"] = json!(partner);
                }
            }
            o
        })
        .collect();
    Value::Array(items)
}

fn images_json(a: &Analysis) -> Value {
    let items: Vec<Value> = a
        .images
        .iter()
        .map(|img| {
            let mut o = json!({
                "branches": img.branches,
                "exponents": img.exponents,
                "nonzero": img.nonzero,
                "multiplicity": img.multiplicity,
            });
            if let Some(eqs) = &img.implicit {
                o["implicit"] = json!(eqs.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            }
            o
        })
        .collect();
    Value::Array(items)
}

/// Full machine-readable report of an accepted germ.
pub fn analysis_json(a: &Analysis) -> Value {
    let nf = &a.normal_form;
    let inv = &a.invariants;
    let f = &a.curve.factored;
    json!({
        "schema": SCHEMA,
        "status": "accepted",
        "input": a.input.to_string(),
        "type": qh_json(&a.input_type),
        "normal_form": {
            "germ": nf.germ.to_string(),
            "type": qh_json(&nf.qh),
            "n": nf.n,
            "m": nf.m,
            "alpha": nf.alpha.to_string(),
            "explicit": nf.is_explicit(),
            "provenance": nf.provenance.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        },
        "divided_differences": {
            "P": a.divided_differences.p.to_string(),
            "Q": a.divided_differences.q.to_string(),
        },
        "lambda": a.lambda.to_string(),
        "lambda_degree": a.lambda_degree,
        "double_points": {
            "s": f.s,
            "r": f.r,
            "r_i": a.curve.r_i,
            "r_f": a.curve.r_f,
            "binomial_polynomial": f.big_lambda.to_string(),
            "pairing": a.curve.pairing.as_ref().map(|(m, sigma)| json!({ "modulus": m.to_string(), "sigma": sigma.to_string() })),
            "branches": branches_json(a),
            "images": images_json(a),
        },
        "invariants": {
            "C": value_json(&inv.c),
            "T": value_json(&inv.t),
            "mu_D": value_json(&inv.mu_d),
            "m": value_json(&inv.m_fd),
            "J": value_json(&inv.j),
        },
        "summary": summary_json(a),
        "oracle_seed": a.oracle_seed,
    })
}

fn summary_json(a: &Analysis) -> Value {
    let inv = &a.invariants;
    json!({
        "r_i": inv.r_i, "r_f": inv.r_f, "s": inv.s, "r": inv.r,
        "C": inv.c.value, "T": inv.t.value, "mu_D": inv.mu_d.value, "m": inv.m_fd.value, "J": inv.j.value,
    })
}

pub fn error_json(input: &str, e: &AnalysisError) -> Value {
    json!({
        "schema": SCHEMA,
        "status": if e.is_rejection() { "rejected" } else { "error" },
        "input": input,
        "reason": e.reason(),
    })
}

/// Aligned `key  value` lines for humans.
pub fn analysis_text(a: &Analysis) -> String {
    let inv = &a.invariants;
    let mut rows: Vec<(String, String)> = vec![
        ("germ".into(), a.input.to_string()),
        ("type".into(), a.input_type.to_string()),
        ("normal form".into(), a.normal_form.germ.to_string()),
        ("normal form type".into(), a.normal_form.qh.to_string()),
        ("lambda".into(), a.lambda.to_string()),
        ("s, r".into(), format!("{}, {}", inv.s, inv.r)),
        ("r_i, r_f".into(), format!("{}, {}", inv.r_i, inv.r_f)),
    ];
    for img in &a.images {
        let eqs = img.implicit.as_ref().map(|e| e.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
        rows.push((
            format!("image of {:?}", img.branches),
            format!("multiplicity {}{}", img.multiplicity, eqs.map(|e| format!(", V({e})")).unwrap_or_default()),
        ));
    }
    let show = |v: &invariants::Value| {
        let mut s = v.value.to_string();
        if let Some(x) = v.alternate {
            s += &format!("  (second path {x})");
        }
        if let Some(x) = v.oracle {
            s += &format!("  (oracle {x})");
        }
        s
    };
    rows.push(("C".into(), show(&inv.c)));
    rows.push(("T".into(), show(&inv.t)));
    rows.push(("mu(D)".into(), show(&inv.mu_d)));
    rows.push(("m(f(D))".into(), show(&inv.m_fd)));
    rows.push(("J".into(), show(&inv.j)));
    if let Some(seed) = a.oracle_seed {
        rows.push(("oracle seed".into(), seed.to_string()));
    }
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

pub const ANALYSIS_CSV_HEADER: &str = "germ,type,r_i,r_f,s,r,C,T,mu_D,m,J";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn analysis_csv_row(a: &Analysis) -> String {
    let i = &a.invariants;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        csv_field(&a.input.to_string()),
        csv_field(&a.input_type.to_string()),
        i.r_i,
        i.r_f,
        i.s,
        i.r,
        i.c.value,
        i.t.value,
        i.mu_d.value,
        i.m_fd.value,
        i.j.value
    )
}

/// One row of the `table` command.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub entry: CorpusEntry,
    pub outcome: Result<Analysis, AnalysisError>,
}

impl TableRow {
    /// Computed `(r_i, r_f, m, J)`.
    pub fn computed(&self) -> Option<(u32, u32, i64, i64)> {
        self.outcome.as_ref().ok().map(|a| {
            let i = &a.invariants;
            (i.r_i, i.r_f, i.m_fd.value, i.j.value)
        })
    }

    /// Matches the tabulated counts, invariants and type.
    pub fn matches(&self) -> bool {
        let e = &self.entry.expected;
        let type_ok = self.outcome.as_ref().is_ok_and(|a| a.input_type == self.entry.qh);
        type_ok && self.computed() == Some((e.r_i, e.r_f, e.m, e.j))
    }

    fn cells(&self) -> Vec<String> {
        let e = &self.entry;
        let (ty, vals) = match &self.outcome {
            Ok(a) => {
                let (ri, rf, m, j) = self.computed().unwrap();
                (a.input_type.to_string(), [ri.to_string(), rf.to_string(), m.to_string(), j.to_string()])
            }
            Err(err) => (format!("error: {}", err.reason()), Default::default()),
        };
        let status = if self.matches() { "ok".to_string() } else { mismatch(e) };
        let mut out = vec![e.name.clone(), e.germ.clone(), ty];
        out.extend(vals);
        out.push(status);
        out
    }
}

fn mismatch(e: &CorpusEntry) -> String {
    let x = &e.expected;
    format!("MISMATCH (expected {} ({},{},{},{}))", e.qh, x.r_i, x.r_f, x.m, x.j)
}

const TABLE_HEADER: [&str; 8] = ["name", "germ", "type", "r_i", "r_f", "m", "J", "status"];

pub fn table_text(rows: &[TableRow]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(TableRow::cells).collect();
    let mut widths: Vec<usize> = TABLE_HEADER.iter().map(|h| h.len()).collect();
    for r in &cells {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |r: Vec<&str>| {
        let s: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(TABLE_HEADER.to_vec());
    for r in &cells {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = TABLE_HEADER.join(",") + "\n";
    for r in rows {
        let c: Vec<String> = r.cells().iter().map(|c| csv_field(c)).collect();
        out += &(c.join(",") + "\n");
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> Value {
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            let e = &r.entry;
            let x = &e.expected;
            let mut o = json!({
                "name": e.name,
                "family": e.family.name(),
                "k": e.k,
                "germ": e.germ,
                "expected": { "type": qh_json(&e.qh), "r_i": x.r_i, "r_f": x.r_f, "m": x.m, "J": x.j },
                "match": r.matches(),
            });
            match &r.outcome {
                Ok(a) => {
                    o["type"] = qh_json(&a.input_type);
                    o["computed"] = summary_json(a);
                }
                Err(err) => o["error"] = json!(err.reason()),
            }
            o
        })
        .collect();
    json!({ "schema": SCHEMA, "rows": items, "all_match": rows.iter().all(TableRow::matches) })
}
