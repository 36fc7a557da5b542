//! Compiler for form (1): `∃b ∃c ⋀ᵢ ∃d [Pᵢ(a,b,c) < Dᵢ(a,b,c)·d < Qᵢ(a,b,c)]`.
//!
//! Four families of conjuncts, `δ + 2` in total:
//!
//! * the balanced-digit test on `V(K)(1+aK+b)^λ`, with its integer quotient
//!   shifted so that `d ≥ 0` covers every admissible value;
//! * `b ≡ 0 (mod K^(λ+1))`: no digits below the first coding position;
//! * one band per `i = 1..δ-1`: the digits strictly between the coding
//!   positions `(λ+1)^i` and `(λ+1)^(i+1)` vanish and the digit at `(λ+1)^i`
//!   is at most `c`;
//! * `b < (c+1) K^((λ+1)^δ)`: nothing above the last coding position.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::encoding::{digit_position, tuples, EncodingConstants};
use crate::error::{Error, Result};
use crate::poly::{Point, Polynomial};

/// Which construction step produced a conjunct or interval triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// The digit at position `ν` of `V(K)(1+aK+b)^λ` is zero.
    BalancedDigit,
    /// `b` is a multiple of `K^(λ+1)`.
    LowDigits,
    /// Band `i` between two coding positions.
    DigitBand(u32),
    /// `b < (c+1) K^((λ+1)^δ)`.
    TopDigit,
    /// A hand-built triple, not derived from a source representation.
    Synthetic(u32),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::BalancedDigit => f.write_str("balanced_digit"),
            Provenance::LowDigits => f.write_str("low_digits"),
            Provenance::DigitBand(i) => write!(f, "digit_band:{i}"),
            Provenance::TopDigit => f.write_str("top_digit"),
            Provenance::Synthetic(i) => write!(f, "synthetic:{i}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed = |prefix: &str| -> Option<u32> { s.strip_prefix(prefix)?.parse().ok() };
        match s {
            "balanced_digit" => Ok(Provenance::BalancedDigit),
            "low_digits" => Ok(Provenance::LowDigits),
            "top_digit" => Ok(Provenance::TopDigit),
            _ => indexed("digit_band:")
                .map(Provenance::DigitBand)
                .or_else(|| indexed("synthetic:").map(Provenance::Synthetic))
                .ok_or_else(|| Error::Artifact(format!("unknown provenance `{s}`"))),
        }
    }
}

/// One conjunct `∃d [P < D·d < Q]`, `d` ranging over nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjunct {
    pub p: Polynomial,
    pub d: Polynomial,
    pub q: Polynomial,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormOne {
    pub conjuncts: Vec<Conjunct>,
}

/// Divisor exponent used for the digit-band conjuncts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BandExponent {
    /// `K^((λ+1)^(i+1))`, the modulus the band condition actually needs.
    #[default]
    Next,
    /// `K^((λ+1)^(i-1))`. Kept only to show the verification suite catches it.
    Previous,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Form1Options {
    pub band_exponent: BandExponent,
}

pub fn compile_form1(consts: &EncodingConstants) -> FormOne {
    compile_form1_with(consts, Form1Options::default())
}

pub fn compile_form1_with(consts: &EncodingConstants, options: Form1Options) -> FormOne {
    let lambda = consts.lambda();
    let delta = consts.delta() as u32;
    let nu = consts.nu();
    let b = Polynomial::var("b");
    let c1 = Polynomial::var("c") + Polynomial::one();
    let one = Polynomial::one();
    let mut conjuncts = Vec::with_capacity(delta as usize + 2);

    // z ranges over all integers; shift it by a polynomial lower bound so that
    // d = z - shift is nonnegative.
    let carrier = consts.carrier_product();
    let k_nu = consts.k_power(nu);
    let divisor = Polynomial::constant(2) * consts.k_power(nu + 1);
    let twice = Polynomial::constant(2) * carrier.clone();
    let centre = match consts.carrier_sign() {
        Ordering::Less => &twice - &(&divisor * &carrier),
        _ => twice,
    };
    conjuncts.push(Conjunct {
        p: &centre - &k_nu,
        d: divisor,
        q: &centre + &k_nu,
        provenance: Provenance::BalancedDigit,
    });

    conjuncts.push(Conjunct {
        p: &b - &one,
        d: consts.k_power(lambda + 1),
        q: &b + &one,
        provenance: Provenance::LowDigits,
    });

    for i in 1..delta {
        let divisor_exp = match options.band_exponent {
            BandExponent::Next => digit_position(lambda, i + 1),
            BandExponent::Previous => digit_position(lambda, i - 1),
        };
        conjuncts.push(Conjunct {
            p: &b - &(&c1 * &consts.k_power(digit_position(lambda, i))),
            d: consts.k_power(divisor_exp),
            q: &b + &one,
            provenance: Provenance::DigitBand(i),
        });
    }

    conjuncts.push(Conjunct {
        p: &b - &one,
        d: b.clone(),
        q: &c1 * &consts.k_power(digit_position(lambda, delta)),
        provenance: Provenance::TopDigit,
    });

    FormOne { conjuncts }
}

/// The smallest integer `d` (of any sign) with `P < D·d < Q`, or `None`.
///
/// When `D = 0` every integer works as soon as `P < 0 < Q`; `0` is returned.
pub fn least_integer_solution(p: &BigInt, d: &BigInt, q: &BigInt) -> Option<BigInt> {
    match d.cmp(&BigInt::zero()) {
        Ordering::Equal => (p.is_negative() && q.is_positive()).then(BigInt::zero),
        Ordering::Greater => {
            let lo = p.div_floor(d) + 1;
            (d * &lo < *q).then_some(lo)
        }
        Ordering::Less => {
            // P < D d < Q  <=>  -Q < |D| d < -P
            let g = -d;
            let lo = (-q).div_floor(&g) + 1;
            (&g * &lo < -p).then_some(lo)
        }
    }
}

/// The smallest `d ≥ 0` with `P < D·d < Q`, or `None`.
pub fn least_natural_solution(p: &BigInt, d: &BigInt, q: &BigInt) -> Option<BigInt> {
    match d.cmp(&BigInt::zero()) {
        Ordering::Equal => (p.is_negative() && q.is_positive()).then(BigInt::zero),
        Ordering::Greater => {
            let lo = (p.div_floor(d) + BigInt::from(1)).max(BigInt::zero());
            (d * &lo < *q).then_some(lo)
        }
        Ordering::Less => {
            let g = -d;
            let lo = ((-q).div_floor(&g) + BigInt::from(1)).max(BigInt::zero());
            (&g * &lo < -p).then_some(lo)
        }
    }
}

/// `∃ d ≥ 0 [P < D·d < Q]`.
pub fn eval_conjunct(p: &BigInt, d: &BigInt, q: &BigInt) -> bool {
    least_natural_solution(p, d, q).is_some()
}

/// The point `{a, b, c}`.
pub fn abc_point(a: u64, b: &BigInt, c: u64) -> Point {
    let mut pt = Point::new();
    pt.insert("a".into(), a.into());
    pt.insert("b".into(), b.clone());
    pt.insert("c".into(), c.into());
    pt
}

impl Conjunct {
    /// `(P, D, Q)` at a point.
    pub fn values(&self, pt: &Point) -> (BigInt, BigInt, BigInt) {
        let ev = |p: &Polynomial| p.evaluate(pt).expect("conjuncts live on a, b, c");
        (ev(&self.p), ev(&self.d), ev(&self.q))
    }

    pub fn holds(&self, pt: &Point) -> bool {
        let (p, d, q) = self.values(pt);
        eval_conjunct(&p, &d, &q)
    }
}

impl FormOne {
    pub fn epsilon(&self) -> usize {
        self.conjuncts.len()
    }

    /// The matrix of form (1) at `(a, b, c)`: every conjunct holds.
    pub fn eval_inner(&self, a: u64, b: &BigInt, c: u64) -> bool {
        let pt = abc_point(a, b, c);
        self.conjuncts.iter().all(|cj| cj.holds(&pt))
    }

    /// Only the conjuncts that constrain the digits of `b`.
    pub fn eval_digit_conjuncts(&self, a: u64, b: &BigInt, c: u64) -> bool {
        let pt = abc_point(a, b, c);
        self.conjuncts
            .iter()
            .filter(|cj| cj.provenance != Provenance::BalancedDigit)
            .all(|cj| cj.holds(&pt))
    }
}

/// Membership of `a` by witness search: looks for `h` with entries at most
/// `h_bound` and `R(a, h) = 0`, and requires form (1) to accept its encoding.
pub fn check_membership_form1(
    f1: &FormOne,
    consts: &EncodingConstants,
    a: u64,
    h_bound: u64,
) -> Result<bool> {
    let src = consts.source();
    for h in tuples(src.delta(), h_bound) {
        if !src.evaluate(a, &h).is_zero() {
            continue;
        }
        let w = consts.witness_encode(a, &h);
        if f1.eval_inner(a, &w.b, w.c) {
            return Ok(true);
        }
        return Err(Error::SoundnessViolation { a, h });
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{build_constants, normalize, SourceRepresentation};
    use crate::parse::parse_polynomial;

    fn constants(delta: usize, expr: &str) -> EncodingConstants {
        let src = SourceRepresentation::new(delta, parse_polynomial(expr, delta).unwrap()).unwrap();
        build_constants(&normalize(&src))
    }

    fn n(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn conjunct_examples() {
        assert!(eval_conjunct(&n(-1), &n(5), &n(1)));
        assert!(!eval_conjunct(&n(0), &n(2), &n(2)));
        assert!(eval_conjunct(&n(2), &n(3), &n(7)));
    }

    #[test]
    fn conjunct_zero_divisor() {
        assert!(eval_conjunct(&n(-1), &n(0), &n(1)));
        assert!(!eval_conjunct(&n(0), &n(0), &n(1)));
        assert!(!eval_conjunct(&n(-1), &n(0), &n(0)));
    }

    #[test]
    fn conjunct_negative_divisor_needs_natural_d() {
        // -3 d in (-7, -2): d = 1 or 2.
        assert_eq!(least_natural_solution(&n(-7), &n(-3), &n(-2)), Some(n(1)));
        // -3 d in (2, 7): d = -1 or -2, none natural.
        assert_eq!(least_natural_solution(&n(2), &n(-3), &n(7)), None);
        assert_eq!(least_integer_solution(&n(2), &n(-3), &n(7)), Some(n(-2)));
        // -3 d in (-1, 1): d = 0.
        assert_eq!(least_natural_solution(&n(-1), &n(-3), &n(1)), Some(n(0)));
    }

    #[test]
    fn positive_divisor_negative_solution_is_rejected() {
        assert_eq!(least_integer_solution(&n(-7), &n(3), &n(-5)), Some(n(-2)));
        assert!(!eval_conjunct(&n(-7), &n(3), &n(-5)));
    }

    #[test]
    fn conjunct_count_is_delta_plus_two() {
        assert_eq!(compile_form1(&constants(1, "a - 2*h1")).epsilon(), 3);
        assert_eq!(compile_form1(&constants(2, "(h1+2)*(h2+2) - a")).epsilon(), 4);
    }

    #[test]
    fn even_set_low_digit_conjunct() {
        let f1 = compile_form1(&constants(1, "a - 2*h1"));
        let cj = &f1.conjuncts[1];
        assert_eq!(cj.provenance, Provenance::LowDigits);
        let k = parse_polynomial("19*(2 + a + c)", 1);
        assert!(k.is_err(), "c is not a source variable");
        let k = crate::parse::parse_with("19*(2+a+c)", crate::parse::Vocabulary::Any).unwrap();
        assert_eq!(cj.p.to_string(), "b - 1");
        assert_eq!(cj.d, k.pow(2));
        assert_eq!(cj.q.to_string(), "b + 1");
    }

    #[test]
    fn even_set_inner_matrix() {
        let f1 = compile_form1(&constants(1, "a - 2*h1"));
        assert!(f1.eval_inner(4, &n(46208), 2));
        assert!(!f1.eval_inner(3, &n(12996), 1));
        assert!(f1.eval_inner(0, &n(0), 0));
    }

    #[test]
    fn literal_shift_rejects_even_witness() {
        // Shifting z by the full carrier product, as if z were bounded below by
        // it, forces d negative at a genuine witness.
        let consts = constants(1, "a - 2*h1");
        let carrier = consts.carrier_product();
        let nu = consts.nu();
        let divisor = Polynomial::constant(2) * consts.k_power(nu + 1);
        let centre = Polynomial::constant(2) * carrier.clone() - &divisor * &carrier;
        let k_nu = consts.k_power(nu);
        let literal = Conjunct {
            p: &centre - &k_nu,
            d: divisor,
            q: &centre + &k_nu,
            provenance: Provenance::BalancedDigit,
        };
        let pt = abc_point(4, &n(46208), 2);
        let (p, d, q) = literal.values(&pt);
        assert!(!eval_conjunct(&p, &d, &q));
        let z_shifted = least_integer_solution(&p, &d, &q).unwrap();
        assert!(z_shifted.is_negative());
        let compiled = &compile_form1(&consts).conjuncts[0];
        let (p, d, q) = compiled.values(&pt);
        assert_eq!(least_natural_solution(&p, &d, &q), Some(n(2)));
    }

    #[test]
    fn negative_carrier_keeps_full_shift() {
        let consts = constants(1, "2*h1 - a");
        assert_eq!(consts.carrier_sign(), Ordering::Less);
        let f1 = compile_form1(&consts);
        for a in 0..12u64 {
            for h in 0..8u64 {
                let w = consts.witness_encode(a, &[h]);
                assert_eq!(f1.eval_inner(a, &w.b, w.c), a == 2 * h, "a={a} h={h}");
            }
        }
    }

    #[test]
    fn membership_by_witness_search() {
        let even = constants(1, "a - 2*h1");
        let f1 = compile_form1(&even);
        assert!(check_membership_form1(&f1, &even, 10, 10).unwrap());
        assert!(!check_membership_form1(&f1, &even, 7, 50).unwrap());
        let squares = constants(1, "a - h1^2");
        let f1 = compile_form1(&squares);
        assert!(check_membership_form1(&f1, &squares, 49, 10).unwrap());
    }

    #[test]
    fn broken_formula_reports_soundness_violation() {
        let even = constants(1, "a - 2*h1");
        let mut f1 = compile_form1(&even);
        f1.conjuncts[1].q = Polynomial::var("b");
        assert_eq!(
            check_membership_form1(&f1, &even, 4, 10),
            Err(Error::SoundnessViolation { a: 4, h: vec![2] })
        );
    }

    #[test]
    fn provenance_labels_round_trip() {
        for p in [
            Provenance::BalancedDigit,
            Provenance::LowDigits,
            Provenance::DigitBand(3),
            Provenance::TopDigit,
            Provenance::Synthetic(0),
        ] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        assert!("digit_band:x".parse::<Provenance>().is_err());
    }
}
