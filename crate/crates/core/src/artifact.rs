//! Compiled artifacts on disk, and text and LaTeX renderings of the forms.
//!
//! Every polynomial travels as canonical text, which is a sentence of the
//! input grammar, and every big integer as a decimal string.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::encoding::{build_constants, normalize, EncodingConstants};
use crate::error::{Error, Result};
use crate::form_one::{Conjunct, FormOne, Provenance};
use crate::form_two::{FormTwo, IntervalTriple, ProductPolynomial};
use crate::parse::{parse_with, Vocabulary};
use crate::poly::Polynomial;
use crate::semantics::{source_representation, CompiledSet};

pub const TOOL_VERSION: &str = concat!("qforms ", env!("CARGO_PKG_VERSION"));

/// What to compile: a name, the number of unknowns and the source equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSpec {
    pub set_name: String,
    pub delta: usize,
    pub expression: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsDoc {
    pub source: String,
    pub lambda: u32,
    pub nu: u32,
    pub scale: String,
    pub gamma: String,
    pub v: String,
    pub k: String,
    pub carriers: Vec<String>,
}

impl ConstantsDoc {
    fn of(consts: &EncodingConstants) -> Self {
        ConstantsDoc {
            source: consts.source().polynomial().to_string(),
            lambda: consts.lambda(),
            nu: consts.nu(),
            scale: consts.normalized().scale().to_string(),
            gamma: consts.gamma().to_string(),
            v: consts.v().to_string(),
            k: consts.k_poly().to_string(),
            carriers: consts.carriers().iter().map(Polynomial::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjunctDoc {
    pub provenance: String,
    pub p: String,
    pub d: String,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormOneDoc {
    pub conjuncts: Vec<ConjunctDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDoc {
    pub provenance: String,
    pub g: String,
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTwoDoc {
    pub triples: Vec<TripleDoc>,
    pub bound: String,
    pub product: ProductDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledArtifact {
    pub tool_version: String,
    pub input: InputSpec,
    pub constants: ConstantsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form1: Option<FormOneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form2: Option<FormTwoDoc>,
}

const ABC: [&str; 3] = ["a", "b", "c"];
const ABCF: [&str; 4] = ["a", "b", "c", "f"];

fn parse_field(what: &str, text: &str, vars: &[&str]) -> Result<Polynomial> {
    parse_with(text, Vocabulary::Only(vars))
        .map(|p| p.with_vars(vars))
        .map_err(|e| Error::Artifact(format!("{what}: {e}")))
}

fn parse_provenance(text: &str) -> Result<Provenance> {
    text.parse().map_err(|_| Error::Artifact(format!("unknown provenance `{text}`")))
}

impl CompiledArtifact {
    pub fn from_set(set: &CompiledSet) -> Self {
        let form1 = set.form1.as_ref().map(|f1| FormOneDoc {
            conjuncts: f1
                .conjuncts
                .iter()
                .map(|cj| ConjunctDoc {
                    provenance: cj.provenance.to_string(),
                    p: cj.p.to_string(),
                    d: cj.d.to_string(),
                    q: cj.q.to_string(),
                })
                .collect(),
        });
        let form2 = set.form2.as_ref().map(|f2| FormTwoDoc {
            triples: f2
                .triples
                .iter()
                .map(|tr| TripleDoc {
                    provenance: tr.provenance.to_string(),
                    g: tr.g.to_string(),
                    s: tr.s.to_string(),
                    t: tr.t.to_string(),
                })
                .collect(),
            bound: f2.bound.to_string(),
            product: ProductDoc { factors: f2.product.factors.iter().map(Polynomial::to_string).collect() },
        });
        CompiledArtifact {
            tool_version: TOOL_VERSION.to_string(),
            input: InputSpec {
                set_name: set.name.clone(),
                delta: set.consts.delta(),
                expression: set.expression.clone(),
            },
            constants: ConstantsDoc::of(&set.consts),
            form1,
            form2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("artifact serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Artifact(e.to_string()))
    }

    /// Rebuilds the constants from the input and the forms from their text.
    ///
    /// The forms are taken as written, so a hand-edited conjunct is what gets
    /// verified. The constants must match the input expression.
    pub fn into_set(&self) -> Result<CompiledSet> {
        let src = source_representation(self.input.delta, &self.input.expression)?;
        let consts = build_constants(&normalize(&src));
        if ConstantsDoc::of(&consts) != self.constants {
            return Err(Error::Artifact("constants do not match the input expression".into()));
        }
        let form1 = match &self.form1 {
            Some(doc) => Some(FormOne {
                conjuncts: doc
                    .conjuncts
                    .iter()
                    .enumerate()
                    .map(|(i, cj)| {
                        Ok(Conjunct {
                            p: parse_field(&format!("conjunct {i} P"), &cj.p, &ABC)?,
                            d: parse_field(&format!("conjunct {i} D"), &cj.d, &ABC)?,
                            q: parse_field(&format!("conjunct {i} Q"), &cj.q, &ABC)?,
                            provenance: parse_provenance(&cj.provenance)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            }),
            None => None,
        };
        let form2 = match &self.form2 {
            Some(doc) => Some(FormTwo {
                triples: doc
                    .triples
                    .iter()
                    .enumerate()
                    .map(|(i, tr)| {
                        Ok(IntervalTriple {
                            g: parse_field(&format!("triple {i} g"), &tr.g, &ABC)?,
                            s: parse_field(&format!("triple {i} s"), &tr.s, &ABC)?,
                            t: parse_field(&format!("triple {i} t"), &tr.t, &ABC)?,
                            provenance: parse_provenance(&tr.provenance)?,
                        })
                    })
                    .collect::<Result<_>>()?,
                bound: parse_field("bound", &doc.bound, &ABC)?,
                product: ProductPolynomial {
                    factors: doc
                        .product
                        .factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| parse_field(&format!("factor {i}"), f, &ABCF))
                        .collect::<Result<_>>()?,
                },
            }),
            None => None,
        };
        Ok(CompiledSet {
            name: self.input.set_name.clone(),
            expression: self.input.expression.clone(),
            consts,
            form1,
            form2,
        })
    }
}

/// Plain-text rendering: one line per conjunct or triple, polynomials in
/// canonical form.
pub fn render_text(set: &CompiledSet) -> String {
    let consts = &set.consts;
    let mut out = String::new();
    let _ = writeln!(out, "set {} (delta {}): {}", set.name, consts.delta(), consts.source().polynomial());
    let _ = writeln!(
        out,
        "lambda {}, nu {}, gamma {}, K = {}, V = {}",
        consts.lambda(),
        consts.nu(),
        consts.gamma(),
        consts.k_poly(),
        consts.v()
    );
    if let Some(f1) = &set.form1 {
        let _ = writeln!(out, "form (1): exists b, c; every conjunct needs some d >= 0 with P < D*d < Q");
        for cj in &f1.conjuncts {
            let _ = writeln!(out, "  {}: ({}) < ({})*d < ({})", cj.provenance, cj.p, cj.d, cj.q);
        }
    }
    if let Some(f2) = &set.form2 {
        let _ = writeln!(out, "form (2): exists b, c; for all f <= F, W > 0");
        for tr in &f2.triples {
            let _ = writeln!(out, "  {}: ({}) < z*({}) < ({})", tr.provenance, tr.s, tr.g, tr.t);
        }
        let _ = writeln!(out, "  F = {}", f2.bound);
        let _ = writeln!(out, "  W = {}", f2.product);
    }
    out
}

fn latex_var(name: &str) -> String {
    match name.find(|c: char| c.is_ascii_digit()) {
        Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}

/// A polynomial in LaTeX, terms in descending order.
pub fn latex_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let vars: Vec<String> = p.vars().iter().map(|v| latex_var(v)).collect();
    let mut out = String::new();
    for (n, (m, coef)) in p.terms().rev().enumerate() {
        let negative = coef.sign() == num_bigint::Sign::Minus;
        match (n, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = coef.magnitude();
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in vars.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => factors.push(v.clone()),
                _ => factors.push(format!("{v}^{{{e}}}")),
            }
        }
        if factors.is_empty() || !num_traits::One::is_one(mag) {
            factors.insert(0, mag.to_string());
        }
        out.push_str(&factors.join(" "));
    }
    out
}

/// Both forms as display-math LaTeX.
pub fn render_latex(set: &CompiledSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "% {} (delta {}): {}",
        set.name,
        set.consts.delta(),
        set.consts.source().polynomial()
    );
    if let Some(f1) = &set.form1 {
        out.push_str("\\[\n\\exists b\\, \\exists c\\, \\Bigl[\n");
        for (i, cj) in f1.conjuncts.iter().enumerate() {
            let glue = if i == 0 { "  " } else { "  \\wedge " };
            let _ = writeln!(
                out,
                "{glue}\\exists d\\, \\bigl[ {} < \\left({}\\right) d < {} \\bigr]",
                latex_poly(&cj.p),
                latex_poly(&cj.d),
                latex_poly(&cj.q)
            );
        }
        out.push_str("\\Bigr]\n\\]\n");
    }
    if let Some(f2) = &set.form2 {
        out.push_str("\\[\n\\exists b\\, \\exists c\\, \\forall f\\, \\bigl[ f \\le F \\Rightarrow W > 0 \\bigr]\n\\]\n");
        let _ = writeln!(out, "\\[\nF = {}\n\\]", latex_poly(&f2.bound));
        let factors: Vec<String> =
            f2.product.factors.iter().map(|f| format!("\\left({}\\right)", latex_poly(f))).collect();
        let _ = writeln!(out, "\\[\nW = {}\n\\]", factors.join("\n  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form_one::Form1Options;
    use crate::semantics::{compile_set, FormSelection};

    fn even() -> CompiledSet {
        compile_set("even", 1, "a - 2*h1", FormSelection::Both, Form1Options::default()).unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let art = CompiledArtifact::from_set(&even());
        let text = art.to_json();
        let back = CompiledArtifact::from_json(&text).unwrap();
        let reloaded = CompiledArtifact::from_set(&back.into_set().unwrap());
        assert_eq!(reloaded.to_json(), text);
    }

    #[test]
    fn loaded_forms_equal_compiled_ones() {
        let set = even();
        let loaded = CompiledArtifact::from_set(&set).into_set().unwrap();
        assert_eq!(loaded.form1, set.form1);
        assert_eq!(loaded.form2, set.form2);
    }

    #[test]
    fn mismatched_constants_are_rejected() {
        let mut art = CompiledArtifact::from_set(&even());
        art.input.expression = "a - 3*h1".into();
        assert!(matches!(art.into_set(), Err(Error::Artifact(_))));
    }

    #[test]
    fn stray_variable_in_form_is_rejected() {
        let mut art = CompiledArtifact::from_set(&even());
        art.form1.as_mut().unwrap().conjuncts[1].p = "b - h1".into();
        assert!(matches!(art.into_set(), Err(Error::Artifact(_))));
    }

    #[test]
    fn text_lists_three_conjuncts() {
        let text = render_text(&even());
        let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("  ") && l.contains(")*d <")).collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("  low_digits: (b - 1) < ("));
    }

    #[test]
    fn latex_subscripts_and_signs() {
        let p = crate::parse::parse_polynomial("a - 2*h1 + h1^3", 1).unwrap();
        assert_eq!(latex_poly(&p), "h_{1}^{3} + a - 2 h_{1}");
        assert_eq!(latex_poly(&Polynomial::constant(-1)), "-1");
    }
}
