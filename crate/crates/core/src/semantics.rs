//! Brute-force oracles, the end-to-end equivalence suite and growth statistics.
//!
//! The suite ties three views of a set together: the source equation
//! `R(a, h) = 0` searched directly, form (1) evaluated at candidate `(b, c)`,
//! and form (2) evaluated structurally (and by enumerating `f` when the bound
//! is small enough).

use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{
    build_constants, digit_position, encode_b, normalize, tuples, EncodingConstants, SourceRepresentation,
};
use crate::error::Result;
use crate::form_one::{abc_point, compile_form1_with, Form1Options, FormOne};
use crate::form_two::{compile_form2, eval_triple_exists, FormTwo};
use crate::parse::parse_polynomial;
use crate::poly::{PolyStats, Polynomial};

/// A named source equation shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundledSet {
    pub name: &'static str,
    pub delta: usize,
    pub expression: &'static str,
}

pub const CORPUS: [BundledSet; 4] = [
    BundledSet { name: "even", delta: 1, expression: "a - 2*h1" },
    BundledSet { name: "squares", delta: 1, expression: "a - h1^2" },
    BundledSet { name: "composites", delta: 2, expression: "(h1+2)*(h2+2) - a" },
    BundledSet { name: "full", delta: 1, expression: "h1" },
];

pub fn bundled(name: &str) -> Option<BundledSet> {
    CORPUS.iter().copied().find(|s| s.name == name)
}

/// Which forms to compile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSelection {
    One,
    Two,
    Both,
}

impl FormSelection {
    pub fn wants_one(self) -> bool {
        matches!(self, FormSelection::One | FormSelection::Both)
    }

    pub fn wants_two(self) -> bool {
        matches!(self, FormSelection::Two | FormSelection::Both)
    }
}

/// Constants and whichever forms were compiled for one set.
#[derive(Clone, Debug)]
pub struct CompiledSet {
    pub name: String,
    pub expression: String,
    pub consts: EncodingConstants,
    pub form1: Option<FormOne>,
    pub form2: Option<FormTwo>,
}

pub fn source_representation(delta: usize, expression: &str) -> Result<SourceRepresentation> {
    SourceRepresentation::new(delta, parse_polynomial(expression, delta)?)
}

pub fn compile_set(
    name: &str,
    delta: usize,
    expression: &str,
    forms: FormSelection,
    options: Form1Options,
) -> Result<CompiledSet> {
    let src = source_representation(delta, expression)?;
    let consts = build_constants(&normalize(&src));
    let form1 = forms.wants_one().then(|| compile_form1_with(&consts, options));
    let form2 = forms.wants_two().then(|| compile_form2(&consts));
    Ok(CompiledSet { name: name.to_string(), expression: expression.to_string(), consts, form1, form2 })
}

/// All `h` with entries at most `h_bound` and `R(a, h) = 0`, in enumeration order.
pub fn oracle_witnesses(src: &SourceRepresentation, a: u64, h_bound: u64) -> Vec<Vec<u64>> {
    tuples(src.delta(), h_bound).filter(|h| src.evaluate(a, h).is_zero()).collect()
}

/// Whether some `h` with entries at most `h_bound` solves `R(a, h) = 0`.
pub fn oracle_membership(src: &SourceRepresentation, a: u64, h_bound: u64) -> bool {
    tuples(src.delta(), h_bound).any(|h| src.evaluate(a, &h).is_zero())
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub a_max: u64,
    pub h_bound: u64,
    pub bc_samples: usize,
    pub naive_cap: BigInt,
    pub seed: u64,
    /// Worker threads; `None` uses rayon's global pool.
    pub jobs: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            a_max: 50,
            h_bound: 25,
            bc_samples: 16,
            naive_cap: BigInt::from(1_000_000),
            seed: 0x5eed,
            jobs: None,
        }
    }
}

/// A point at which something went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub form: String,
    pub a: u64,
    pub b: String,
    pub c: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipRow {
    pub a: u64,
    pub oracle: bool,
    pub form1: Option<bool>,
    pub form2: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub soundness_checks: usize,
    pub completeness_checks: usize,
    pub agreement_checks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub set_name: String,
    pub a_range: (u64, u64),
    pub h_bound: u64,
    pub bc_sample_size: usize,
    pub naive_cap: String,
    pub seed: u64,
    pub membership: Vec<MembershipRow>,
    pub soundness_failures: Vec<Counterexample>,
    pub completeness_failures: Vec<Counterexample>,
    pub evaluator_disagreements: Vec<Counterexample>,
    pub checks: CheckCounts,
    pub growth: GrowthRow,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.soundness_failures.is_empty()
            && self.completeness_failures.is_empty()
            && self.evaluator_disagreements.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{status} {}: a in [{}, {}], h_bound {}, bc_samples {}, naive_cap {}, seed {}\n",
            self.set_name,
            self.a_range.0,
            self.a_range.1,
            self.h_bound,
            self.bc_sample_size,
            self.naive_cap,
            self.seed
        ));
        let members: Vec<String> =
            self.membership.iter().filter(|m| m.oracle).map(|m| m.a.to_string()).collect();
        out.push_str(&format!("  members: {}\n", members.join(" ")));
        out.push_str(&format!(
            "  checks: soundness {}, completeness {}, agreement {}\n",
            self.checks.soundness_checks, self.checks.completeness_checks, self.checks.agreement_checks
        ));
        for (label, list) in [
            ("soundness failures", &self.soundness_failures),
            ("completeness failures", &self.completeness_failures),
            ("evaluator disagreements", &self.evaluator_disagreements),
        ] {
            out.push_str(&format!("  {label}: {}\n", list.len()));
            for cx in list {
                out.push_str(&format!(
                    "    {} a={} b={} c={}: {}\n",
                    cx.form, cx.a, cx.b, cx.c, cx.detail
                ));
            }
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    membership: Vec<MembershipRow>,
    soundness: Vec<Counterexample>,
    completeness: Vec<Counterexample>,
    disagreements: Vec<Counterexample>,
    counts: CheckCounts,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.membership.extend(other.membership);
        self.soundness.extend(other.soundness);
        self.completeness.extend(other.completeness);
        self.disagreements.extend(other.disagreements);
        self.counts.soundness_checks += other.counts.soundness_checks;
        self.counts.completeness_checks += other.counts.completeness_checks;
        self.counts.agreement_checks += other.counts.agreement_checks;
        self
    }
}

fn cx(form: &str, a: u64, b: &BigInt, c: u64, detail: impl Into<String>) -> Counterexample {
    Counterexample { form: form.to_string(), a, b: b.to_string(), c, detail: detail.into() }
}

/// Runs soundness, completeness and evaluator-agreement checks for every
/// `a ≤ a_max`. Failures are collected, never raised.
pub fn run_equivalence_suite(set: &CompiledSet, config: &SuiteConfig) -> VerificationReport {
    let run = || {
        (0..=config.a_max)
            .into_par_iter()
            .map(|a| check_one_a(set, config, a))
            .collect::<Vec<_>>()
    };
    let per_a = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let tally = per_a.into_iter().fold(Tally::default(), Tally::merge);
    VerificationReport {
        set_name: set.name.clone(),
        a_range: (0, config.a_max),
        h_bound: config.h_bound,
        bc_sample_size: config.bc_samples,
        naive_cap: config.naive_cap.to_string(),
        seed: config.seed,
        membership: tally.membership,
        soundness_failures: tally.soundness,
        completeness_failures: tally.completeness,
        evaluator_disagreements: tally.disagreements,
        checks: tally.counts,
        growth: growth_row(set),
    }
}

/// Candidate `(b, c)` pairs for one `a`: encoded witnesses and their
/// perturbations, encodings of non-solutions, a small grid and random pairs.
pub fn sample_points(
    consts: &EncodingConstants,
    a: u64,
    witnesses: &[Vec<u64>],
    config: &SuiteConfig,
) -> Vec<(BigInt, u64)> {
    let src = consts.source();
    let top = digit_position(consts.lambda(), consts.delta() as u32);
    let mut out = Vec::new();
    for h in witnesses {
        let w = consts.witness_encode(a, h);
        for j in 0..=top {
            let step = w.k.pow(j);
            out.push((&w.b + &step, w.c));
            if w.b >= step {
                out.push((&w.b - &step, w.c));
            }
        }
        out.push((w.b.clone(), w.c + 1));
        if w.c > 0 {
            out.push((w.b.clone(), w.c - 1));
        }
        // The same tuple coded with a larger digit bound is still a witness.
        let wider = consts.k_at(a, w.c + 1);
        out.push((encode_b(h, &wider, consts.lambda()), w.c + 1));
        out.push((w.b, w.c));
    }
    for h in tuples(src.delta(), config.h_bound.min(3)) {
        if !src.evaluate(a, &h).is_zero() {
            let w = consts.witness_encode(a, &h);
            out.push((w.b, w.c));
        }
    }
    for b in 0..2u64 {
        for c in 0..2u64 {
            out.push((BigInt::from(b), c));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let c_hi = config.h_bound.min(8);
    for i in 0..config.bc_samples {
        let c = rng.gen_range(0..=c_hi);
        let k = consts.k_at(a, c);
        let hi = if i % 2 == 0 { k.pow(2) + 1u32 } else { k.pow(top + 1) };
        let b = rng.gen_bigint_range(&BigInt::zero(), &hi);
        out.push((b, c));
    }
    out
}

fn check_one_a(set: &CompiledSet, config: &SuiteConfig, a: u64) -> Tally {
    let consts = &set.consts;
    let src = consts.source();
    let mut tally = Tally::default();
    let witnesses = oracle_witnesses(src, a, config.h_bound);
    let oracle = !witnesses.is_empty();

    let mut form1_member = set.form1.as_ref().map(|_| false);
    let mut form2_member = set.form2.as_ref().map(|_| false);
    for h in &witnesses {
        let w = consts.witness_encode(a, h);
        let pt = abc_point(a, &w.b, w.c);
        if let Some(f1) = &set.form1 {
            tally.counts.soundness_checks += 1;
            if f1.eval_inner(a, &w.b, w.c) {
                form1_member = Some(true);
            } else {
                tally.soundness.push(cx("form1", a, &w.b, w.c, format!("rejects encoded witness h = {h:?}")));
            }
        }
        if let Some(f2) = &set.form2 {
            tally.counts.soundness_checks += 1;
            match f2.eval_structural(&pt) {
                Ok(true) => form2_member = Some(true),
                Ok(false) => tally
                    .soundness
                    .push(cx("form2", a, &w.b, w.c, format!("rejects encoded witness h = {h:?}"))),
                Err(e) => tally.soundness.push(cx("form2", a, &w.b, w.c, e.to_string())),
            }
        }
    }
    tally.membership.push(MembershipRow { a, oracle, form1: form1_member, form2: form2_member });

    for (b, c) in sample_points(consts, a, &witnesses, config) {
        let expected = consts
            .decode_witness(a, &b, c)
            .filter(|h| src.evaluate(a, h).is_zero());
        let pt = abc_point(a, &b, c);
        if let Some(f1) = &set.form1 {
            tally.counts.completeness_checks += 1;
            let accepted = f1.eval_inner(a, &b, c);
            record_mismatch(&mut tally, "form1", a, &b, c, accepted, &expected);
        }
        if let Some(f2) = &set.form2 {
            tally.counts.completeness_checks += 1;
            let values = match f2.triple_values(&pt) {
                Ok(v) => v,
                Err(e) => {
                    tally.disagreements.push(cx("form2", a, &b, c, e.to_string()));
                    continue;
                }
            };
            let structural = values
                .iter()
                .all(|(g, s, t)| eval_triple_exists(g, s, t).expect("contract checked above"));
            record_mismatch(&mut tally, "form2", a, &b, c, structural, &expected);
            // Cheap estimate of F from the triple values; the compiled F is
            // only evaluated when the estimate is under the cap.
            let estimate: BigInt = values.iter().map(|(_, s, t)| 2 * s * s + 2 * t * t + 4).sum();
            if estimate <= config.naive_cap && f2.bound_at(&pt) <= config.naive_cap {
                tally.counts.agreement_checks += 1;
                match f2.eval_naive(&pt, &config.naive_cap) {
                    Ok(naive) if naive == structural => {}
                    Ok(naive) => tally.disagreements.push(cx(
                        "form2",
                        a,
                        &b,
                        c,
                        format!("naive {naive}, structural {structural}"),
                    )),
                    Err(e) => tally.disagreements.push(cx("form2", a, &b, c, e.to_string())),
                }
            }
        }
    }
    tally
}

fn record_mismatch(
    tally: &mut Tally,
    form: &str,
    a: u64,
    b: &BigInt,
    c: u64,
    accepted: bool,
    expected: &Option<Vec<u64>>,
) {
    match (accepted, expected) {
        (true, None) => tally.completeness.push(cx(
            form,
            a,
            b,
            c,
            "accepted, but (b, c) does not decode to a solution",
        )),
        (false, Some(h)) => {
            tally.soundness.push(cx(form, a, b, c, format!("rejected, but decodes to solution h = {h:?}")))
        }
        _ => {}
    }
}

/// Size of one polynomial in a growth table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyGrowth {
    pub degrees: BTreeMap<String, u32>,
    pub terms: usize,
    pub max_coef_digits: usize,
}

impl PolyGrowth {
    fn of(p: &Polynomial, vars: &[&str]) -> Self {
        Self::from_stats(&p.stats(), vars)
    }

    fn from_stats(stats: &PolyStats, vars: &[&str]) -> Self {
        let degrees = vars
            .iter()
            .map(|v| (v.to_string(), stats.degree_per_variable.get(*v).copied().unwrap_or(0)))
            .collect();
        PolyGrowth {
            degrees,
            terms: stats.term_count,
            max_coef_digits: digits(&stats.max_abs_coefficient),
        }
    }
}

fn digits(n: &BigInt) -> usize {
    if n.is_zero() {
        1
    } else {
        n.magnitude().to_str_radix(10).len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjunctGrowth {
    pub provenance: String,
    pub p: PolyGrowth,
    pub d: PolyGrowth,
    pub q: PolyGrowth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Form2Growth {
    pub bound: PolyGrowth,
    /// Degree of `W` in each of `a, b, c, f`, summed over its factors.
    pub w_degrees: BTreeMap<String, u32>,
    pub factor_terms: Vec<usize>,
    pub max_factor_coef_digits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub set_name: String,
    pub delta: usize,
    pub lambda: u32,
    pub nu: u32,
    pub gamma: String,
    pub epsilon: usize,
    pub form1: Option<Vec<ConjunctGrowth>>,
    pub form2: Option<Form2Growth>,
}

const ABC: [&str; 3] = ["a", "b", "c"];
const ABCF: [&str; 4] = ["a", "b", "c", "f"];

pub fn growth_row(set: &CompiledSet) -> GrowthRow {
    let consts = &set.consts;
    let form1 = set.form1.as_ref().map(|f1| {
        f1.conjuncts
            .iter()
            .map(|cj| ConjunctGrowth {
                provenance: cj.provenance.to_string(),
                p: PolyGrowth::of(&cj.p, &ABC),
                d: PolyGrowth::of(&cj.d, &ABC),
                q: PolyGrowth::of(&cj.q, &ABC),
            })
            .collect()
    });
    let form2 = set.form2.as_ref().map(|f2| {
        let stats = f2.product.factor_stats();
        Form2Growth {
            bound: PolyGrowth::of(&f2.bound, &ABC),
            w_degrees: ABCF.iter().map(|v| (v.to_string(), f2.product.degree_in(v))).collect(),
            factor_terms: stats.iter().map(|s| s.term_count).collect(),
            max_factor_coef_digits: stats
                .iter()
                .map(|s| digits(&s.max_abs_coefficient))
                .max()
                .unwrap_or(1),
        }
    });
    let epsilon = set
        .form1
        .as_ref()
        .map(FormOne::epsilon)
        .or_else(|| set.form2.as_ref().map(FormTwo::epsilon))
        .unwrap_or(consts.delta() + 2);
    GrowthRow {
        set_name: set.name.clone(),
        delta: consts.delta(),
        lambda: consts.lambda(),
        nu: consts.nu(),
        gamma: consts.gamma().to_string(),
        epsilon,
        form1,
        form2,
    }
}

/// One row per set, in the order given.
pub fn growth_report(sets: &[CompiledSet]) -> Vec<GrowthRow> {
    sets.iter().map(growth_row).collect()
}

pub const CSV_HEADER: &str = "set,delta,lambda,nu,gamma,epsilon,\
form1_deg_a,form1_deg_b,form1_deg_c,form1_terms,form1_max_coef_digits,\
bound_terms,bound_max_coef_digits,w_deg_a,w_deg_b,w_deg_c,w_deg_f,w_factor_terms,w_max_coef_digits";

fn max_degree(conjuncts: &[ConjunctGrowth], var: &str) -> u32 {
    conjuncts
        .iter()
        .flat_map(|cj| [&cj.p, &cj.d, &cj.q])
        .map(|g| g.degrees[var])
        .max()
        .unwrap_or(0)
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let mut cells = vec![
            row.set_name.clone(),
            row.delta.to_string(),
            row.lambda.to_string(),
            row.nu.to_string(),
            row.gamma.clone(),
            row.epsilon.to_string(),
        ];
        match &row.form1 {
            Some(cjs) => {
                cells.extend(ABC.iter().map(|v| max_degree(cjs, v).to_string()));
                let polys = || cjs.iter().flat_map(|cj| [&cj.p, &cj.d, &cj.q]);
                cells.push(polys().map(|g| g.terms).sum::<usize>().to_string());
                cells.push(polys().map(|g| g.max_coef_digits).max().unwrap_or(1).to_string());
            }
            None => cells.extend(std::iter::repeat_n(String::new(), 5)),
        }
        match &row.form2 {
            Some(f2) => {
                cells.push(f2.bound.terms.to_string());
                cells.push(f2.bound.max_coef_digits.to_string());
                cells.extend(ABCF.iter().map(|v| f2.w_degrees[*v].to_string()));
                cells.push(f2.factor_terms.iter().sum::<usize>().to_string());
                cells.push(f2.max_factor_coef_digits.to_string());
            }
            None => cells.extend(std::iter::repeat_n(String::new(), 8)),
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn degree_triple(g: &PolyGrowth) -> String {
    ABC.iter().map(|v| g.degrees[*v].to_string()).collect::<Vec<_>>().join("/")
}

pub fn growth_text(rows: &[GrowthRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&format!(
            "{}: delta {}, lambda {}, nu {}, gamma {}, epsilon {}\n",
            row.set_name, row.delta, row.lambda, row.nu, row.gamma, row.epsilon
        ));
        if let Some(cjs) = &row.form1 {
            out.push_str("  form (1) degrees in a/b/c, terms, max coefficient digits\n");
            for cj in cjs {
                out.push_str(&format!(
                    "    {:<14} P {} ({}, {})  D {} ({}, {})  Q {} ({}, {})\n",
                    cj.provenance,
                    degree_triple(&cj.p),
                    cj.p.terms,
                    cj.p.max_coef_digits,
                    degree_triple(&cj.d),
                    cj.d.terms,
                    cj.d.max_coef_digits,
                    degree_triple(&cj.q),
                    cj.q.terms,
                    cj.q.max_coef_digits,
                ));
            }
        }
        if let Some(f2) = &row.form2 {
            let degs: Vec<String> = ABCF.iter().map(|v| format!("{v} {}", f2.w_degrees[*v])).collect();
            out.push_str(&format!(
                "  form (2) F: degrees {}, {} terms, {} digits\n",
                degree_triple(&f2.bound),
                f2.bound.terms,
                f2.bound.max_coef_digits
            ));
            out.push_str(&format!(
                "  form (2) W: degree {}; factor terms {:?}; {} digits\n",
                degs.join(", "),
                f2.factor_terms,
                f2.max_factor_coef_digits
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form_one::BandExponent;

    fn even() -> CompiledSet {
        compile_set("even", 1, "a - 2*h1", FormSelection::Both, Form1Options::default()).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let src = source_representation(1, "a - 2*h1").unwrap();
        assert!(oracle_membership(&src, 4, 10));
        assert!(!oracle_membership(&src, 3, 1000));
        let sq = source_representation(1, "a - h1^2").unwrap();
        assert!(oracle_membership(&sq, 49, 10));
        assert_eq!(oracle_witnesses(&sq, 49, 10), vec![vec![7]]);
    }

    #[test]
    fn even_suite_is_clean() {
        let config = SuiteConfig { a_max: 12, h_bound: 8, bc_samples: 6, ..SuiteConfig::default() };
        let report = run_equivalence_suite(&even(), &config);
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.checks.completeness_checks > 0);
        for row in &report.membership {
            assert_eq!(row.oracle, row.a % 2 == 0);
            assert_eq!(row.form1, Some(row.oracle));
            assert_eq!(row.form2, Some(row.oracle));
        }
    }

    #[test]
    fn report_is_deterministic_across_pool_sizes() {
        let set = even();
        let one = SuiteConfig { a_max: 6, h_bound: 4, bc_samples: 4, jobs: Some(1), ..SuiteConfig::default() };
        let two = SuiteConfig { jobs: Some(2), ..one.clone() };
        assert_eq!(run_equivalence_suite(&set, &one), run_equivalence_suite(&set, &two));
    }

    #[test]
    fn even_growth_row() {
        let row = growth_row(&even());
        assert_eq!(row.epsilon, 3);
        let f2 = row.form2.unwrap();
        assert_eq!(f2.w_degrees["f"], 6);
        let cjs = row.form1.unwrap();
        assert_eq!(cjs[0].provenance, "balanced_digit");
        assert_eq!(cjs[0].d.degrees["a"], 3);
    }

    #[test]
    fn csv_has_stable_shape() {
        let csv = growth_csv(&[growth_row(&even())]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), CSV_HEADER.split(',').count());
        assert!(lines[1].starts_with("even,1,1,2,19,3,"));
    }

    #[test]
    fn previous_band_exponent_unnoticed_on_single_unknown_sets() {
        // With one unknown there are no bands, so both exponents compile alike.
        let opts = Form1Options { band_exponent: BandExponent::Previous };
        let set = compile_set("even", 1, "a - 2*h1", FormSelection::One, opts).unwrap();
        let config = SuiteConfig { a_max: 6, h_bound: 4, bc_samples: 4, ..SuiteConfig::default() };
        assert!(run_equivalence_suite(&set, &config).passed());
    }
}
