//! Compiler for form (2): `∃b ∃c ∀f [f ≤ F(a,b,c) ⇒ W(a,b,c,f) > 0]`.
//!
//! Each condition `∃z [s < z·g < t]` with `g > 0` and `t − s ≤ g` is equivalent
//! to positivity of `Z(g,s,t,y) = ((y−1)g − s)(yg − t)` for every `y` in the
//! half-open window `(−s²−t²−2, s²+t²+2]`, and `Z` is positive outside that
//! window anyway. Shifting the `i`-th window to `(F_{i−1}, F_i]` with
//! `F_i = Σ_{μ≤i} (2s_μ² + 2t_μ² + 4)` lets one product `W = Π Z_i` check all
//! conditions with a single bounded universal quantifier.
//!
//! `W` is kept as the list of its `2ε` factors, each linear in `f`; expanding
//! the product is possible through [`ProductPolynomial::expand`] but is only
//! tractable for the smallest representations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::encoding::{digit_position, EncodingConstants};
use crate::error::{Error, Result};
use crate::form_one::Provenance;
use crate::poly::{compare_vars, Point, PolyStats, Polynomial};

/// `((y−1)g − s)(yg − t)` over any operands.
pub fn z_poly(g: &Polynomial, s: &Polynomial, t: &Polynomial, y: &Polynomial) -> Polynomial {
    let left = &(&(y - &Polynomial::one()) * g) - s;
    let right = &(y * g) - t;
    left * right
}

pub fn z_value(g: &BigInt, s: &BigInt, t: &BigInt, y: &BigInt) -> BigInt {
    ((y - 1) * g - s) * (y * g - t)
}

/// The data of `∃z [s < z·g < t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalTriple {
    pub g: Polynomial,
    pub s: Polynomial,
    pub t: Polynomial,
    pub provenance: Provenance,
}

impl IntervalTriple {
    /// A triple of constants, for exercising the universal-form construction
    /// on its own.
    pub fn synthetic(g: i64, s: i64, t: i64, index: u32) -> Self {
        IntervalTriple {
            g: Polynomial::constant(g),
            s: Polynomial::constant(s),
            t: Polynomial::constant(t),
            provenance: Provenance::Synthetic(index),
        }
    }

    pub fn values(&self, pt: &Point) -> (BigInt, BigInt, BigInt) {
        let ev = |p: &Polynomial| p.evaluate(pt).expect("triples live on a, b, c");
        (ev(&self.g), ev(&self.s), ev(&self.t))
    }
}

/// `0 < g` and `t − s ≤ g`.
pub fn triple_contract_holds(g: &BigInt, s: &BigInt, t: &BigInt) -> bool {
    g.is_positive() && t - s <= *g
}

/// `∃z ∈ ℤ [s < z·g < t]` for `g > 0`.
pub fn eval_triple_exists(g: &BigInt, s: &BigInt, t: &BigInt) -> Result<bool> {
    if !g.is_positive() {
        return Err(Error::NonPositiveG(g.to_string()));
    }
    let z = s.div_floor(g) + 1;
    Ok(z * g < *t)
}

/// Both sides of the single-interval equivalence, computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalSides {
    pub exists_side: bool,
    pub universal_side: bool,
}

/// Evaluates `∃z [s < zg < t]` directly, and
/// `∀y ∈ (−s²−t²−2, s²+t²+2] [(y−1)g − s > 0 ∨ t − yg > 0]` by enumeration.
pub fn lemma3_check(g: i64, s: i64, t: i64) -> Result<IntervalSides> {
    let (gb, sb, tb) = (BigInt::from(g), BigInt::from(s), BigInt::from(t));
    let exists_side = eval_triple_exists(&gb, &sb, &tb)?;
    let radius = s * s + t * t + 2;
    let universal_side = (-radius + 1..=radius).all(|y| (y - 1) * g - s > 0 || t - y * g > 0);
    Ok(IntervalSides { exists_side, universal_side })
}

/// A polynomial held as an unexpanded product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPolynomial {
    pub factors: Vec<Polynomial>,
}

impl ProductPolynomial {
    /// Degree in `var` of the product. Exact: the integers have no zero divisors.
    pub fn degree_in(&self, var: &str) -> u32 {
        if self.factors.iter().any(Polynomial::is_zero) {
            return 0;
        }
        self.factors.iter().map(|f| f.degree_in(var)).sum()
    }

    pub fn total_degree(&self) -> u64 {
        if self.factors.iter().any(Polynomial::is_zero) {
            return 0;
        }
        self.factors.iter().map(Polynomial::total_degree).sum()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .factors
            .iter()
            .flat_map(|f| f.vars().iter().cloned())
            .collect();
        out.sort_by(|x, y| compare_vars(x, y));
        out.dedup();
        out
    }

    pub fn evaluate(&self, pt: &Point) -> Result<BigInt> {
        self.factors
            .iter()
            .try_fold(BigInt::one(), |acc, f| Ok(acc * f.evaluate(pt)?))
    }

    pub fn expand(&self) -> Polynomial {
        self.factors.iter().fold(Polynomial::one(), |acc, f| acc * f)
    }

    /// Per-factor statistics.
    pub fn factor_stats(&self) -> Vec<PolyStats> {
        self.factors.iter().map(Polynomial::stats).collect()
    }

    pub fn partial_evaluate(&self, pt: &Point) -> ProductPolynomial {
        ProductPolynomial {
            factors: self.factors.iter().map(|f| f.partial_evaluate(pt)).collect(),
        }
    }
}

impl fmt::Display for ProductPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "({factor})")?;
        }
        Ok(())
    }
}

fn sym(prefix: &str, i: usize) -> Polynomial {
    Polynomial::var(&format!("{prefix}{i}"))
}

/// `F_ε(s₁,…,s_ε,t₁,…,t_ε) = Σ (2s_μ² + 2t_μ² + 4)` over symbols `s1, t1, …`.
pub fn generic_bound(epsilon: usize) -> Polynomial {
    (1..=epsilon).fold(Polynomial::zero(), |acc, mu| {
        acc + Polynomial::constant(2) * sym("s", mu).pow(2)
            + Polynomial::constant(2) * sym("t", mu).pow(2)
            + Polynomial::constant(4)
    })
}

/// The `2ε` factors of `W_ε(g, s, t, f)` over symbols `g1, s1, t1, …, f`.
///
/// Factor `2i−1` is `(y−1)g_i − s_i` and factor `2i` is `y·g_i − t_i`, where
/// `y = f − F_{i−1} − s_i² − t_i² − 2`.
pub fn generic_factors(epsilon: usize) -> Vec<Polynomial> {
    let f = Polynomial::var("f");
    let mut out = Vec::with_capacity(2 * epsilon);
    for i in 1..=epsilon {
        let (g, s, t) = (sym("g", i), sym("s", i), sym("t", i));
        let y = &f - &generic_bound(i - 1) - s.pow(2) - t.pow(2) - Polynomial::constant(2);
        out.push(&(&(&y - &Polynomial::one()) * &g) - &s);
        out.push(&(&y * &g) - &t);
    }
    out
}

/// The compiled universal form together with the triples it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTwo {
    pub triples: Vec<IntervalTriple>,
    /// `F(a, b, c)`.
    pub bound: Polynomial,
    /// `W(a, b, c, f)`.
    pub product: ProductPolynomial,
}

/// The interval triples for the digit conditions, in the same order as the
/// conjuncts of form (1).
pub fn build_triples(consts: &EncodingConstants) -> Vec<IntervalTriple> {
    let lambda = consts.lambda();
    let delta = consts.delta() as u32;
    let nu = consts.nu();
    let b = Polynomial::var("b");
    let c1 = Polynomial::var("c") + Polynomial::one();
    let one = Polynomial::one();
    let two = Polynomial::constant(2);
    let mut out = Vec::with_capacity(delta as usize + 2);

    let twice_carrier = &two * &consts.carrier_product();
    let k_nu = consts.k_power(nu);
    out.push(IntervalTriple {
        g: &two * &consts.k_power(nu + 1),
        s: &twice_carrier - &k_nu,
        t: &twice_carrier + &k_nu,
        provenance: Provenance::BalancedDigit,
    });

    out.push(IntervalTriple {
        g: consts.k_power(lambda + 1),
        s: &b - &one,
        t: &b + &one,
        provenance: Provenance::LowDigits,
    });

    for i in 1..delta {
        out.push(IntervalTriple {
            g: consts.k_power(digit_position(lambda, i + 1)),
            s: &b - &(&c1 * &consts.k_power(digit_position(lambda, i))),
            t: &b + &one,
            provenance: Provenance::DigitBand(i),
        });
    }

    let top = &c1 * &consts.k_power(digit_position(lambda, delta));
    out.push(IntervalTriple {
        g: &two * &top,
        s: &b - &top,
        t: &top - &b,
        provenance: Provenance::TopDigit,
    });
    out
}

pub fn compile_form2(consts: &EncodingConstants) -> FormTwo {
    compile_triples(build_triples(consts))
}

/// Builds `F_ε` and the factors of `W_ε` for arbitrary triples.
///
/// Squares of `s_i` and `t_i` are formed once and reused by the bound and by
/// every later window shift; the result equals substituting the triples into
/// [`generic_bound`] and [`generic_factors`].
pub fn compile_triples(triples: Vec<IntervalTriple>) -> FormTwo {
    let f = Polynomial::var("f");
    let two = Polynomial::constant(2);
    let mut prefix = Polynomial::zero();
    let mut factors = Vec::with_capacity(2 * triples.len());
    for tr in &triples {
        let squares = tr.s.pow(2) + tr.t.pow(2);
        let shift = &prefix + &squares + two.clone();
        let g_shift = &tr.g * &shift;
        let g_f = &tr.g * &f;
        // (y−1)g − s and yg − t with y = f − shift
        factors.push(&g_f - &g_shift - &tr.g - &tr.s);
        factors.push(&g_f - &g_shift - &tr.t);
        prefix = prefix + &two * &squares + Polynomial::constant(4);
    }
    FormTwo { triples, bound: prefix, product: ProductPolynomial { factors } }
}

impl FormTwo {
    pub fn epsilon(&self) -> usize {
        self.triples.len()
    }

    /// Evaluates `g, s, t` of every triple and checks `0 < g`, `t − s ≤ g`.
    pub fn triple_values(&self, pt: &Point) -> Result<Vec<(BigInt, BigInt, BigInt)>> {
        self.triples
            .iter()
            .enumerate()
            .map(|(index, tr)| {
                let (g, s, t) = tr.values(pt);
                if triple_contract_holds(&g, &s, &t) {
                    Ok((g, s, t))
                } else {
                    Err(Error::TripleContractViolation {
                        index,
                        detail: format!("g = {g}, s = {s}, t = {t}"),
                    })
                }
            })
            .collect()
    }

    /// The conjunction of the encoded interval conditions.
    pub fn eval_structural(&self, pt: &Point) -> Result<bool> {
        for (g, s, t) in self.triple_values(pt)? {
            if !eval_triple_exists(&g, &s, &t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn bound_at(&self, pt: &Point) -> BigInt {
        self.bound.evaluate(pt).expect("the bound lives on a, b, c")
    }

    /// `∀f ∈ [0, F] [W(f) > 0]` by enumeration. Fails with `CapExceeded` when
    /// `F` at this point exceeds `cap`.
    pub fn eval_naive(&self, pt: &Point, cap: &BigInt) -> Result<bool> {
        let top = self.bound_at(pt);
        if top > *cap {
            return Err(Error::CapExceeded { value: top.to_string(), cap: cap.to_string() });
        }
        // Each factor, specialised to the point, is a polynomial in f alone.
        let mut fixed = pt.clone();
        fixed.remove("f");
        let univariate: Vec<Vec<BigInt>> = self
            .product
            .factors
            .iter()
            .map(|factor| {
                factor
                    .partial_evaluate(&fixed)
                    .collect_by_variable("f")
                    .iter()
                    .map(|c| c.as_constant().expect("only f remains free"))
                    .collect()
            })
            .collect();
        let mut f = BigInt::zero();
        while f <= top {
            let mut negatives = 0usize;
            for coeffs in &univariate {
                let value = coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &f + c);
                if value.is_zero() {
                    return Ok(false);
                }
                negatives += usize::from(value.is_negative());
            }
            if negatives % 2 == 1 {
                return Ok(false);
            }
            f += 1;
        }
        Ok(true)
    }

    /// Bindings `g1 ↦ g_1, s1 ↦ s_1, …` for the generic construction.
    pub fn generic_bindings(&self) -> BTreeMap<String, Polynomial> {
        let mut bind = BTreeMap::new();
        for (i, tr) in self.triples.iter().enumerate() {
            bind.insert(format!("g{}", i + 1), tr.g.clone());
            bind.insert(format!("s{}", i + 1), tr.s.clone());
            bind.insert(format!("t{}", i + 1), tr.t.clone());
        }
        bind
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::point;

    fn n(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_value(&n(1), &n(0), &n(1), &n(1)), n(0));
        assert_eq!(z_value(&n(2), &n(1), &n(3), &n(1)), n(1));
        let one = Polynomial::one();
        let y = Polynomial::var("y");
        let z = z_poly(&one, &Polynomial::zero(), &one, &y);
        assert_eq!(z.to_string(), "y^2 - 2*y + 1");
    }

    #[test]
    fn z_shift_moves_roots() {
        let y = Polynomial::var("y");
        let (g, s, t) = (Polynomial::constant(3), Polynomial::constant(-2), Polynomial::constant(4));
        let z = z_poly(&g, &s, &t, &y);
        let mut bind = BTreeMap::new();
        bind.insert("y".to_string(), &y - &Polynomial::constant(5));
        let shifted = z.substitute(&bind);
        for v in 0..=10i64 {
            let lhs = shifted.evaluate(&point(&[("y", v)])).unwrap();
            assert_eq!(lhs, z_value(&n(3), &n(-2), &n(4), &n(v - 5)));
        }
    }

    #[test]
    fn triple_exists_examples() {
        assert!(eval_triple_exists(&n(2), &n(1), &n(3)).unwrap());
        assert!(!eval_triple_exists(&n(1), &n(0), &n(1)).unwrap());
        assert!(eval_triple_exists(&n(3), &n(-7), &n(-5)).unwrap());
        assert_eq!(eval_triple_exists(&n(0), &n(0), &n(5)), Err(Error::NonPositiveG("0".into())));
    }

    #[test]
    fn interval_side_examples() {
        assert_eq!(
            lemma3_check(2, 1, 3).unwrap(),
            IntervalSides { exists_side: true, universal_side: true }
        );
        assert_eq!(
            lemma3_check(1, 0, 1).unwrap(),
            IntervalSides { exists_side: false, universal_side: false }
        );
        assert!(matches!(lemma3_check(-1, 0, 1), Err(Error::NonPositiveG(_))));
    }

    #[test]
    fn empty_bound_is_zero() {
        assert!(generic_bound(0).is_zero());
        let f2 = compile_triples(Vec::new());
        assert!(f2.bound.is_zero());
        assert!(f2.product.factors.is_empty());
    }

    #[test]
    fn naive_single_triple() {
        let f2 = compile_triples(vec![IntervalTriple::synthetic(2, 1, 3, 0)]);
        let pt = Point::new();
        assert_eq!(f2.bound_at(&pt), n(24));
        assert!(f2.eval_naive(&pt, &n(1_000_000)).unwrap());
        let f2 = compile_triples(vec![IntervalTriple::synthetic(1, 0, 1, 0)]);
        assert!(!f2.eval_naive(&pt, &n(1_000_000)).unwrap());
        assert!(!f2.eval_structural(&pt).unwrap());
    }

    #[test]
    fn naive_respects_cap() {
        let f2 = compile_triples(vec![IntervalTriple::synthetic(1, 0, 30_000, 0)]);
        let pt = Point::new();
        assert!(f2.bound_at(&pt) >= n(1_000_000_000));
        assert!(matches!(f2.eval_naive(&pt, &n(1_000_000)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn structural_flags_contract_violation() {
        let f2 = compile_triples(vec![IntervalTriple::synthetic(2, 0, 5, 0)]);
        assert!(matches!(
            f2.eval_structural(&Point::new()),
            Err(Error::TripleContractViolation { index: 0, .. })
        ));
    }

    #[test]
    fn direct_and_generic_constructions_agree() {
        let triples = vec![
            IntervalTriple::synthetic(3, -2, 1, 0),
            IntervalTriple {
                g: Polynomial::var("a") + Polynomial::constant(2),
                s: Polynomial::var("b") - Polynomial::one(),
                t: Polynomial::var("b") + Polynomial::one(),
                provenance: Provenance::Synthetic(1),
            },
        ];
        let f2 = compile_triples(triples);
        let bind = f2.generic_bindings();
        assert_eq!(generic_bound(2).substitute(&bind), f2.bound);
        let generic: Vec<Polynomial> =
            generic_factors(2).iter().map(|p| p.substitute(&bind)).collect();
        assert_eq!(generic, f2.product.factors);
    }

    #[test]
    fn product_degree_in_f() {
        let f2 = compile_triples(vec![
            IntervalTriple::synthetic(2, 1, 3, 0),
            IntervalTriple::synthetic(5, -4, 0, 1),
            IntervalTriple::synthetic(1, 7, 8, 2),
        ]);
        assert_eq!(f2.product.degree_in("f"), 6);
        assert_eq!(f2.product.expand().degree_in("f"), 6);
    }
}
