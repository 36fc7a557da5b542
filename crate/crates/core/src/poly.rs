//! Sparse multivariate polynomials with exact big-integer coefficients.
//!
//! A [`Polynomial`] carries its own ambient variable list, kept sorted by
//! [`compare_vars`], and a map from exponent vectors to nonzero coefficients.
//! Binary operations align their operands by variable name, so polynomials
//! built over different variable sets combine freely.
//!
//! Terms are ordered graded-lexicographically. The canonical text form lists
//! them from the leading (largest) term down, with explicit `*` and `^`:
//!
//! ```
//! use qforms::poly::Polynomial;
//!
//! let x = Polynomial::var("x");
//! let p = (&x + &Polynomial::one()).pow(2);
//! assert_eq!(p.to_string(), "x^2 + 2*x + 1");
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An assignment of integer values to variable names.
pub type Point = BTreeMap<String, BigInt>;

/// Builds a [`Point`] from `(name, value)` pairs.
pub fn point<V: Into<BigInt> + Clone>(pairs: &[(&str, V)]) -> Point {
    pairs
        .iter()
        .map(|(name, value)| (name.to_string(), value.clone().into()))
        .collect()
}

/// Orders variable names by alphabetic prefix, then by numeric suffix, so that
/// `h2 < h10` and `c < h1 < k`.
pub fn compare_vars(a: &str, b: &str) -> Ordering {
    let (pa, na) = split_numeric_suffix(a);
    let (pb, nb) = split_numeric_suffix(b);
    pa.cmp(pb).then(na.cmp(&nb)).then(a.cmp(b))
}

fn split_numeric_suffix(s: &str) -> (&str, Option<u128>) {
    let stem = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (prefix, digits) = s.split_at(stem);
    (prefix, digits.parse().ok())
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match compare_vars(&a[i], &b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// An exponent vector, one entry per ambient variable.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// comparison of the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Summary figures used for growth reports and for sizing the constant gamma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyStats {
    pub degree_per_variable: BTreeMap<String, u32>,
    pub total_degree: u64,
    pub term_count: usize,
    pub abs_coefficient_sum: BigInt,
    pub max_abs_coefficient: BigInt,
}

/// A sparse multivariate polynomial over the integers.
#[derive(Clone, Debug, Default)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Polynomial { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), BigInt::one());
        Polynomial { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from exponent vectors aligned with `vars`.
    ///
    /// `vars` may be in any order and may repeat; duplicate monomials are
    /// summed and zero coefficients dropped.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut sorted: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        sorted.sort_by(|a, b| compare_vars(a, b));
        sorted.dedup();
        let slots: Vec<usize> = vars
            .iter()
            .map(|v| sorted.iter().position(|s| s == v).unwrap())
            .collect();
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
            let mut key = vec![0u32; sorted.len()];
            for (e, &slot) in exps.iter().zip(&slots) {
                key[slot] += e;
            }
            *acc.entry(key).or_default() += c;
        }
        Self::from_accumulator(sorted, acc)
    }

    fn from_accumulator(vars: Vec<String>, acc: HashMap<Vec<u32>, BigInt>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial(k), c))
            .collect();
        Polynomial { vars, terms }
    }

    /// The ambient variables, in canonical order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value of a polynomial with no variable actually occurring in it.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// ambient variable of `self` and be in canonical order.
    fn align_to(&self, target: &[String]) -> Polynomial {
        if self.vars.as_slice() == target {
            return self.clone();
        }
        let slots: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .expect("alignment target must cover every variable")
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut key = vec![0u32; target.len()];
                for (e, &slot) in m.0.iter().zip(&slots) {
                    key[slot] = *e;
                }
                (Monomial(key), c.clone())
            })
            .collect();
        Polynomial { vars: target.to_vec(), terms }
    }

    /// Adds `extra` to the ambient variable set without changing the value.
    pub fn with_vars(&self, extra: &[&str]) -> Polynomial {
        let mut names: Vec<String> = extra.iter().map(|v| v.to_string()).collect();
        names.sort_by(|a, b| compare_vars(a, b));
        names.dedup();
        self.align_to(&union_vars(&self.vars, &names))
    }

    /// Drops ambient variables that occur in no term.
    pub fn trimmed(&self) -> Polynomial {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(used.iter().map(|&i| m.0[i]).collect()), c.clone()))
            .collect();
        Polynomial { vars, terms }
    }

    pub fn add_poly(&self, other: &Polynomial) -> Polynomial {
        let vars = union_vars(&self.vars, &other.vars);
        let mut out = self.align_to(&vars);
        for (m, c) in other.align_to(&vars).terms {
            match out.terms.get_mut(&m) {
                Some(existing) => {
                    *existing += c;
                    if existing.is_zero() {
                        out.terms.remove(&m);
                    }
                }
                None => {
                    out.terms.insert(m, c);
                }
            }
        }
        out
    }

    /// Sums many polynomials with a single accumulation pass.
    pub fn sum<'a, I>(items: I) -> Polynomial
    where
        I: IntoIterator<Item = &'a Polynomial>,
    {
        let items: Vec<&Polynomial> = items.into_iter().collect();
        let vars = items.iter().fold(Vec::new(), |acc, p| union_vars(&acc, &p.vars));
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for p in items {
            for (m, c) in p.align_to(&vars).terms {
                match acc.get_mut(&m.0) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(m.0, c);
                    }
                }
            }
        }
        Self::from_accumulator(vars, acc)
    }

    pub fn sub_poly(&self, other: &Polynomial) -> Polynomial {
        self.add_poly(&other.neg_poly())
    }

    pub fn neg_poly(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Polynomial {
        if factor.is_zero() {
            return Polynomial { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn mul_poly(&self, other: &Polynomial) -> Polynomial {
        let vars = union_vars(&self.vars, &other.vars);
        let lhs = self.align_to(&vars);
        let rhs = other.align_to(&vars);
        let mut acc: HashMap<Vec<u32>, BigInt> =
            HashMap::with_capacity(lhs.terms.len().saturating_mul(rhs.terms.len()).min(1 << 20));
        let mut key = vec![0u32; vars.len()];
        for (ml, cl) in &lhs.terms {
            for (mr, cr) in &rhs.terms {
                for ((k, x), y) in key.iter_mut().zip(&ml.0).zip(&mr.0) {
                    *k = x + y;
                }
                let prod = cl * cr;
                match acc.get_mut(key.as_slice()) {
                    Some(slot) => *slot += prod,
                    None => {
                        acc.insert(key.clone(), prod);
                    }
                }
            }
        }
        Self::from_accumulator(vars, acc)
    }

    /// Exact power by repeated squaring.
    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one().align_to(&self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        result
    }

    /// Simultaneously replaces each bound variable by its polynomial.
    pub fn substitute(&self, bindings: &BTreeMap<String, Polynomial>) -> Polynomial {
        let bound: Vec<Option<&Polynomial>> =
            self.vars.iter().map(|v| bindings.get(v)).collect();
        if bound.iter().all(Option::is_none) {
            return self.clone();
        }
        let free: Vec<String> = self
            .vars
            .iter()
            .zip(&bound)
            .filter(|(_, b)| b.is_none())
            .map(|(v, _)| v.clone())
            .collect();
        let mut out_vars = free.clone();
        for b in bound.iter().flatten() {
            out_vars = union_vars(&out_vars, &b.vars);
        }
        let free_slots: Vec<usize> = free
            .iter()
            .map(|v| out_vars.iter().position(|o| o == v).unwrap())
            .collect();

        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut free_key = vec![0u32; out_vars.len()];
            let mut factor = Polynomial::constant(c.clone());
            let mut free_i = 0;
            for (i, &e) in m.0.iter().enumerate() {
                match bound[i] {
                    None => {
                        free_key[free_slots[free_i]] = e;
                        free_i += 1;
                    }
                    Some(b) if e > 0 => {
                        let pw = powers.entry((i, e)).or_insert_with(|| b.pow(e));
                        factor = factor.mul_poly(pw);
                    }
                    Some(_) => {}
                }
            }
            for (fm, fc) in factor.align_to(&out_vars).terms {
                let key: Vec<u32> = fm.0.iter().zip(&free_key).map(|(x, y)| x + y).collect();
                *acc.entry(key).or_default() += fc;
            }
        }
        Self::from_accumulator(out_vars, acc)
    }

    /// Substitutes integer values for some variables, leaving the rest free.
    pub fn partial_evaluate(&self, values: &Point) -> Polynomial {
        let bindings = values
            .iter()
            .filter(|(v, _)| self.var_index(v).is_some())
            .map(|(v, x)| (v.clone(), Polynomial::constant(x.clone())))
            .collect();
        self.substitute(&bindings).trimmed()
    }

    /// Renames a variable. The target name must not already be ambient.
    pub fn rename(&self, from: &str, to: &str) -> Polynomial {
        let Some(i) = self.var_index(from) else {
            return self.clone();
        };
        assert!(self.var_index(to).is_none(), "rename target `{to}` already in use");
        let names: Vec<&str> = self
            .vars
            .iter()
            .enumerate()
            .map(|(j, v)| if j == i { to } else { v.as_str() })
            .collect();
        Polynomial::from_terms(&names, self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())))
    }

    /// Exact value at `values`. Variables that occur in no term need no binding.
    pub fn evaluate(&self, values: &Point) -> Result<BigInt> {
        let mut max_exp = vec![0u32; self.vars.len()];
        for m in self.terms.keys() {
            for (slot, &e) in max_exp.iter_mut().zip(&m.0) {
                *slot = (*slot).max(e);
            }
        }
        let mut power_table: Vec<Vec<BigInt>> = Vec::with_capacity(self.vars.len());
        for (v, &top) in self.vars.iter().zip(&max_exp) {
            if top == 0 {
                power_table.push(vec![BigInt::one()]);
                continue;
            }
            let x = values.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            let mut row = Vec::with_capacity(top as usize + 1);
            row.push(BigInt::one());
            for e in 1..=top as usize {
                let next = &row[e - 1] * x;
                row.push(next);
            }
            power_table.push(row);
        }
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (row, &e) in power_table.iter().zip(&m.0) {
                if e > 0 {
                    term *= &row[e as usize];
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Coefficients `c_0, ..., c_n` of `var^0, ..., var^n`, where `n` is the
    /// degree in `var`. The coefficients no longer mention `var`.
    pub fn collect_by_variable(&self, var: &str) -> Vec<Polynomial> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let rest: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let n = self.degree_in(var) as usize;
        let mut coeffs: Vec<BTreeMap<Monomial, BigInt>> = vec![BTreeMap::new(); n + 1];
        for (m, c) in &self.terms {
            let mut key = m.0.clone();
            let e = key.remove(i);
            coeffs[e as usize].insert(Monomial(key), c.clone());
        }
        coeffs
            .into_iter()
            .map(|terms| Polynomial { vars: rest.clone(), terms })
            .collect()
    }

    pub fn stats(&self) -> PolyStats {
        let degree_per_variable = self
            .vars
            .iter()
            .map(|v| (v.clone(), self.degree_in(v)))
            .collect();
        let mut sum = BigInt::zero();
        let mut max = BigInt::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a > max {
                max = a.clone();
            }
            sum += a;
        }
        PolyStats {
            degree_per_variable,
            total_degree: self.total_degree(),
            term_count: self.terms.len(),
            abs_coefficient_sum: sum,
            max_abs_coefficient: max,
        }
    }

    /// Writes one term (without its sign) the way the canonical text form does.
    pub(crate) fn write_term(
        &self,
        out: &mut impl fmt::Write,
        m: &Monomial,
        abs_coeff: &BigInt,
    ) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        if !abs_coeff.is_one() || m.is_constant() {
            factors.push(abs_coeff.to_string());
        }
        for (v, &e) in self.vars.iter().zip(&m.0) {
            match e {
                0 => {}
                1 => factors.push(v.clone()),
                _ => factors.push(format!("{v}^{e}")),
            }
        }
        out.write_str(&factors.join("*"))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let vars = union_vars(&self.vars, &other.vars);
        self.align_to(&vars).terms == other.align_to(&vars).terms
    }
}

impl Eq for Polynomial {}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            self.write_term(f, m, &c.abs())?;
        }
        Ok(())
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(c)
    }
}

impl From<BigInt> for Polynomial {
    fn from(c: BigInt) -> Self {
        Polynomial::constant(c)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$inner(rhs)
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$inner(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$inner(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_poly);
forward_binop!(Sub, sub, sub_poly);
forward_binop!(Mul, mul, mul_poly);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_poly()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_poly()
    }
}
