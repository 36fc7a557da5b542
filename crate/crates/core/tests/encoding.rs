use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use qforms::encoding::{
    build_constants, carrier_base, encode_b, kappa, normalize, position_code, tuples, EncodingConstants,
    SourceRepresentation,
};
use qforms::error::Error;
use qforms::parse::{parse_polynomial, parse_with, Vocabulary};
use qforms::poly::{point, Polynomial};
use qforms::semantics::CORPUS;

fn constants(delta: usize, expr: &str) -> EncodingConstants {
    let src = SourceRepresentation::new(delta, parse_polynomial(expr, delta).unwrap()).unwrap();
    build_constants(&normalize(&src))
}

fn fact(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn n(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn expansion_terms_are_multinomials_at_distinct_positions() {
    for lambda in 1..=3u32 {
        for delta in 1..=3usize {
            let p = carrier_base(delta, lambda).pow(lambda);
            let vars: Vec<String> = p.vars().to_vec();
            let k_at = vars.iter().position(|v| v == "k").unwrap();
            let mut source_names = vec!["a".to_string()];
            source_names.extend((1..=delta).map(|i| format!("h{i}")));
            let slots: Vec<usize> =
                source_names.iter().map(|s| vars.iter().position(|v| v == s).unwrap()).collect();
            let mut seen = BTreeSet::new();
            let mut count = 0;
            for (m, c) in p.terms() {
                let e = m.exponents();
                let alpha: Vec<u32> = slots.iter().map(|&i| e[i]).collect();
                let sum: u32 = alpha.iter().sum();
                assert!(sum <= lambda);
                // Coefficient of the term: λ! / (α₀! ⋯ α_δ! (λ − Σα)!).
                let denom: BigInt = alpha.iter().map(|&x| fact(x)).product::<BigInt>() * fact(lambda - sum);
                assert_eq!(*c, fact(lambda) / denom, "λ={lambda} δ={delta} α={alpha:?}");
                let code: u32 = alpha.iter().enumerate().map(|(i, &x)| x * (lambda + 1).pow(i as u32)).sum();
                assert_eq!(e[k_at], code);
                assert!(seen.insert(code), "repeated position {code}");
                count += 1;
            }
            // Number of multi-indices of length δ+1 with sum ≤ λ.
            let expected = binomial(lambda + delta as u32 + 1, delta as u32 + 1);
            assert_eq!(count, expected);
        }
    }
}

fn binomial(n: u32, k: u32) -> usize {
    (fact(n) / (fact(k) * fact(n - k))).try_into().unwrap()
}

#[test]
fn position_codes_are_injective() {
    for lambda in 1..=3u32 {
        for delta in 1..=3usize {
            let mut seen = BTreeSet::new();
            for l in tuples(delta + 1, lambda.into()) {
                let l: Vec<u32> = l.into_iter().map(|x| x as u32).collect();
                let code = position_code(&l, lambda);
                // Reading the code back in base λ+1 recovers the tuple.
                let mut rest = code.clone();
                for &li in &l {
                    assert_eq!(&rest % (lambda + 1), BigInt::from(li));
                    rest /= lambda + 1;
                }
                assert!(rest.is_zero());
                assert!(seen.insert(code));
            }
            assert_eq!(seen.len(), ((lambda + 1) as usize).pow(delta as u32 + 1));
        }
    }
}

#[test]
fn small_codes_and_coefficients() {
    assert_eq!(position_code(&[1, 0], 1), n(1));
    assert_eq!(position_code(&[1, 2], 2), n(7));
    let codes: BTreeSet<BigInt> = tuples(2, 2)
        .map(|l| position_code(&[l[0] as u32, l[1] as u32], 2))
        .collect();
    assert_eq!(codes, (0..9).map(n).collect());
    assert_eq!(kappa(&[1, 1], 2).unwrap(), n(2));
    assert_eq!(kappa(&[0, 2], 2).unwrap(), n(1));
    assert_eq!(kappa(&[1, 1], 3).unwrap(), n(6));
    assert_eq!(kappa(&[2, 1], 2).unwrap_err(), Error::IndexOverflow { sum: 3, lambda: 2 });
}

#[test]
fn coding_digits() {
    assert_eq!(encode_b(&[3, 5], &n(10), 1), n(50300));
    assert_eq!(encode_b(&[2], &n(10), 2), n(2000));
    assert_eq!(encode_b(&[0, 0, 0], &n(977), 3), n(0));
}

#[test]
fn normalization_reconstructs_scaled_source() {
    for set in CORPUS {
        let src = SourceRepresentation::new(set.delta, parse_polynomial(set.expression, set.delta).unwrap()).unwrap();
        let norm = normalize(&src);
        assert_eq!(*norm.scale(), fact(src.lambda()));
        assert_eq!(norm.reconstruct(), src.polynomial().scale(norm.scale()), "{}", set.name);
        for (alpha, k) in norm.kappa() {
            assert!(k.is_positive());
            assert_eq!(*k, kappa(alpha, src.lambda()).unwrap());
        }
    }
    let sq = SourceRepresentation::new(1, parse_polynomial("a - h1^2", 1).unwrap()).unwrap();
    let norm = normalize(&sq);
    assert_eq!(norm.rho()[&vec![1, 0]], n(1));
    assert_eq!(norm.rho()[&vec![0, 2]], n(-2));
}

#[test]
fn source_validation() {
    let p = parse_polynomial("5", 1).unwrap();
    assert_eq!(SourceRepresentation::new(1, p).unwrap_err(), Error::DegreeZero);
    let p = parse_polynomial("a", 0).unwrap();
    assert_eq!(SourceRepresentation::new(0, p).unwrap_err(), Error::NoUnknowns);
    let c = constants(2, "(h1+2)*(h2+2) - a");
    assert_eq!(c.lambda(), 2);
}

/// `Σ T_i k^i` against `V(k)(1 + ak + B)^λ`, with `B` written out by hand.
#[test]
fn carrier_identity_for_every_bundled_set() {
    for set in CORPUS {
        let c = constants(set.delta, set.expression);
        let lambda = c.lambda();
        let b_text: Vec<String> = (1..=set.delta)
            .map(|i| format!("h{i}*k^{}", (lambda + 1).pow(i as u32)))
            .collect();
        let base = parse_with(&format!("1 + a*k + {}", b_text.join(" + ")), Vocabulary::Any).unwrap();
        let rhs = c.v() * base.pow(lambda);
        let k = Polynomial::var("k");
        let lhs = c
            .carriers()
            .iter()
            .enumerate()
            .fold(Polynomial::zero(), |acc, (i, t)| acc + t * k.pow(i as u32));
        assert!((lhs - rhs).is_zero(), "{}", set.name);
        assert_eq!(c.carriers().len(), 2 * c.nu() as usize + 1);
        assert_eq!(c.carriers()[c.nu() as usize], c.source().polynomial().scale(&fact(lambda)));
        assert!(c.carriers().iter().all(|t| t.total_degree() <= u64::from(lambda)));
        // γ exceeds twice the absolute coefficient mass of all carriers.
        let mass: BigInt = c
            .carriers()
            .iter()
            .flat_map(|t| t.terms().map(|(_, x)| x.abs()).collect::<Vec<_>>())
            .sum();
        assert_eq!(*c.gamma(), 2 * mass + 1);
    }
}

#[test]
fn constants_of_the_small_sets() {
    let even = constants(1, "a - 2*h1");
    assert_eq!(even.nu(), 2);
    assert_eq!(even.v().to_string(), "k - 2");
    let t: Vec<String> = even.carriers().iter().map(ToString::to_string).collect();
    assert_eq!(t, ["-2", "-2*a + 1", "a - 2*h1", "h1", "0"]);
    assert_eq!(*even.gamma(), n(19));
    assert_eq!(even.k_poly().to_string(), "19*a + 19*c + 38");

    let squares = constants(1, "a - h1^2");
    assert_eq!(squares.nu(), 6);
    assert_eq!(squares.v().to_string(), "k^5 - 2");

    let full = constants(1, "h1");
    assert_eq!(full.v().to_string(), "1");
    let t: Vec<String> = full.carriers().iter().map(ToString::to_string).collect();
    assert_eq!(t, ["1", "a", "h1", "0", "0"]);

    let composites = constants(2, "(h1+2)*(h2+2) - a");
    assert_eq!(composites.nu(), 18);
}

#[test]
fn witness_examples() {
    let even = constants(1, "a - 2*h1");
    let w = even.witness_encode(4, &[2]);
    assert_eq!((w.c, w.k.clone(), w.b.clone()), (2, n(152), n(46208)));
    let w = even.witness_encode(3, &[1]);
    assert_eq!((w.c, w.k.clone(), w.b.clone()), (1, n(114), n(12996)));
    assert_eq!(even.decode_witness(4, &n(46208), 2), Some(vec![2]));
    assert_eq!(even.decode_witness(4, &n(46209), 2), None);
    assert_eq!(even.decode_witness(4, &n(0), 0), Some(vec![0]));
    assert!(even.lemma1_decide(4, &n(46208), 2));
    assert!(!even.lemma1_decide(3, &n(12996), 1));
    let full = constants(1, "h1");
    for a in 0..20 {
        let w = full.witness_encode(a, &[0]);
        assert_eq!((w.b.clone(), w.c), (n(0), 0));
        assert!(full.lemma1_decide(a, &w.b, w.c));
    }
}

#[test]
fn low_digits_stay_below_half_a_digit() {
    for set in CORPUS {
        let c = constants(set.delta, set.expression);
        let nu = c.nu() as usize;
        for a in 0..=10u64 {
            for h in tuples(set.delta, 5) {
                let w = c.witness_encode(a, &h);
                assert!(c.digit_bound_holds(a, &h, &w.k));
                let pt = c.source().point(a, &h);
                let low: BigInt = c.carriers()[..nu]
                    .iter()
                    .enumerate()
                    .map(|(i, t)| t.evaluate(&pt).unwrap() * w.k.pow(i as u32))
                    .sum();
                assert!((BigInt::from(2) * low).abs() < w.k.pow(nu as u32), "{} a={a} h={h:?}", set.name);
            }
        }
    }
}

#[test]
fn balanced_digit_decides_the_equation() {
    for set in CORPUS {
        let c = constants(set.delta, set.expression);
        for a in 0..=30u64 {
            for h in tuples(set.delta, 10) {
                let w = c.witness_encode(a, &h);
                let zero = c.source().evaluate(a, &h).is_zero();
                assert_eq!(c.lemma1_decide(a, &w.b, w.c), zero, "{} a={a} h={h:?}", set.name);
            }
        }
    }
}

#[test]
fn decode_inverts_encode_for_any_admissible_c() {
    for set in CORPUS {
        let c = constants(set.delta, set.expression);
        for a in [0u64, 3, 17] {
            for h in tuples(set.delta, 6) {
                let top = h.iter().copied().max().unwrap_or(0);
                for cc in top..top + 3 {
                    let k = c.k_at(a, cc);
                    let b = encode_b(&h, &k, c.lambda());
                    assert_eq!(c.decode_witness(a, &b, cc), Some(h.clone()));
                }
                if top > 0 {
                    // A digit above the bound c is refused.
                    let k = c.k_at(a, top - 1);
                    let b = encode_b(&h, &k, c.lambda());
                    assert_eq!(c.decode_witness(a, &b, top - 1), None);
                }
            }
        }
    }
}

#[test]
fn k_matches_its_formula() {
    let c = constants(2, "(h1+2)*(h2+2) - a");
    for (a, cc) in [(0u64, 0u64), (5, 2), (11, 7)] {
        let direct = c.gamma() * BigInt::from(2 + a + cc).pow(2);
        assert_eq!(c.k_at(a, cc), direct);
        let pt = point(&[("a", a), ("c", cc)]);
        assert_eq!(c.k_poly().evaluate(&pt).unwrap(), direct);
    }
}
