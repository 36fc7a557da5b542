//! Digit coding of witness tuples and the balanced-digit membership test.
//!
//! A source representation `∃h₁…h_δ [R(a,h)=0]` of total degree `λ` is packed
//! into a single number `b = Σ h_i k^((λ+1)^i)` whose base-`k` digits sit at the
//! positions `(λ+1)¹, …, (λ+1)^δ`. Multiplying `(1 + a k + b)^λ` by the carrier
//! polynomial `V(k)` lines up a scaled copy of `R(a,h)` as the base-`k` digit at
//! position `ν = λ(λ+1)^δ`, so `R(a,h) = 0` can be read off without decoding
//! `h`.
//!
//! The pipeline is [`SourceRepresentation::new`] → [`normalize`] →
//! [`build_constants`]; the resulting [`EncodingConstants`] drive both
//! compilers.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parse::source_vars;
use crate::poly::{Point, Polynomial};

/// A Diophantine representation `∃h₁…h_δ [R(a,h₁,…,h_δ) = 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceRepresentation {
    delta: usize,
    lambda: u32,
    r: Polynomial,
}

impl SourceRepresentation {
    /// Validates `r` as a polynomial over `a, h1, ..., h<delta>`.
    pub fn new(delta: usize, r: Polynomial) -> Result<Self> {
        if delta == 0 {
            return Err(Error::NoUnknowns);
        }
        let allowed = source_vars(delta);
        let r = r.trimmed();
        if let Some(stray) = r.vars().iter().find(|v| !allowed.contains(v)) {
            return Err(Error::UnknownVariable { name: stray.clone(), pos: 0 });
        }
        let lambda = r.total_degree();
        if lambda == 0 {
            return Err(Error::DegreeZero);
        }
        let names: Vec<&str> = allowed.iter().map(String::as_str).collect();
        Ok(SourceRepresentation {
            delta,
            lambda: u32::try_from(lambda).expect("degree fits in u32"),
            r: r.with_vars(&names),
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.r
    }

    /// The point `{a, h1, ..., h<delta>}`.
    pub fn point(&self, a: u64, h: &[u64]) -> Point {
        assert_eq!(h.len(), self.delta, "expected {} unknowns", self.delta);
        let mut pt = Point::new();
        pt.insert("a".into(), a.into());
        for (i, &hi) in h.iter().enumerate() {
            pt.insert(format!("h{}", i + 1), hi.into());
        }
        pt
    }

    pub fn evaluate(&self, a: u64, h: &[u64]) -> BigInt {
        self.r.evaluate(&self.point(a, h)).expect("source point binds every variable")
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// The multinomial coefficient `λ! / (α₀!⋯α_δ!·(λ−Σα)!)`, i.e. the coefficient
/// of `a^α₀ h^α k^N(α)` in `(1 + a k + B)^λ`.
pub fn kappa(alpha: &[u32], lambda: u32) -> Result<BigInt> {
    let sum: u64 = alpha.iter().map(|&x| u64::from(x)).sum();
    if sum > u64::from(lambda) {
        return Err(Error::IndexOverflow { sum, lambda });
    }
    let denom = alpha
        .iter()
        .fold(factorial(u64::from(lambda) - sum), |acc, &x| acc * factorial(x.into()));
    Ok(factorial(lambda.into()) / denom)
}

/// `N(l) = Σ lᵢ (λ+1)^i`: the base-`(λ+1)` number with digits `l_δ … l₀`.
pub fn position_code(l: &[u32], lambda: u32) -> BigInt {
    let base = BigInt::from(lambda) + 1;
    let mut weight = BigInt::one();
    let mut total = BigInt::zero();
    for &li in l {
        total += &weight * li;
        weight *= &base;
    }
    total
}

fn position_code_u32(l: &[u32], lambda: u32) -> u32 {
    position_code(l, lambda).to_u32().expect("position code fits in u32")
}

/// All multi-indices of length `len` with entries summing to at most `lambda`,
/// in lexicographic order.
pub fn multi_indices(len: usize, lambda: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, len: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=budget {
            prefix.push(x);
            rec(prefix, len, budget - x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(len), len, lambda, &mut out);
    out
}

/// Every tuple of `len` entries drawn from `0..=bound`, in lexicographic order.
pub fn tuples(len: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let mut next = Some(vec![0u64; len]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for slot in succ.iter_mut().rev() {
            if *slot < bound {
                *slot += 1;
                next = Some(succ);
                break;
            }
            *slot = 0;
        }
        Some(current)
    })
}

/// `(λ+1)^i`, the digit position of `h_i` in the code `b`.
pub fn digit_position(lambda: u32, i: u32) -> u32 {
    (lambda + 1).checked_pow(i).expect("digit position fits in u32")
}

/// The coding polynomial `B(h₁,…,h_δ,k) = Σ h_i k^((λ+1)^i)`.
pub fn coding_polynomial(delta: usize, lambda: u32) -> Polynomial {
    let k = Polynomial::var("k");
    (1..=delta).fold(Polynomial::zero(), |acc, i| {
        let hi = Polynomial::var(&format!("h{i}"));
        acc + hi * k.pow(digit_position(lambda, i as u32))
    })
}

/// `1 + a k + B(h, k)`, the base raised to `λ` in the carrier identity.
pub fn carrier_base(delta: usize, lambda: u32) -> Polynomial {
    let a = Polynomial::var("a");
    let k = Polynomial::var("k");
    Polynomial::one() + a * k + coding_polynomial(delta, lambda)
}

/// `B(h, k)` evaluated directly.
pub fn encode_b(h: &[u64], k: &BigInt, lambda: u32) -> BigInt {
    h.iter().enumerate().fold(BigInt::zero(), |acc, (i, &hi)| {
        acc + BigInt::from(hi) * k.pow(digit_position(lambda, i as u32 + 1))
    })
}

/// `R` rewritten as `Σ ρ_α κ_α a^α₀ h^α` after scaling by `λ!`.
#[derive(Clone, Debug)]
pub struct NormalizedRepresentation {
    source: SourceRepresentation,
    scale: BigInt,
    rho: BTreeMap<Vec<u32>, BigInt>,
    kappa: BTreeMap<Vec<u32>, BigInt>,
}

impl NormalizedRepresentation {
    pub fn source(&self) -> &SourceRepresentation {
        &self.source
    }

    /// The positive multiplier `λ!` applied to `R`.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Nonzero `ρ_α`, keyed by `(α₀, …, α_δ)`.
    pub fn rho(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.rho
    }

    /// `κ_α` for every multi-index with `Σα ≤ λ`.
    pub fn kappa(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.kappa
    }

    /// `Σ ρ_α κ_α a^α₀ h^α`, which equals `scale · R`.
    pub fn reconstruct(&self) -> Polynomial {
        let vars = source_vars(self.source.delta);
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        Polynomial::from_terms(
            &names,
            self.rho.iter().map(|(alpha, r)| (alpha.clone(), r * &self.kappa[alpha])),
        )
    }
}

/// Scales `R` by `λ!` and splits each coefficient as `ρ_α · κ_α`.
pub fn normalize(src: &SourceRepresentation) -> NormalizedRepresentation {
    let lambda = src.lambda;
    let scale = factorial(lambda.into());
    let kappa_table: BTreeMap<Vec<u32>, BigInt> = multi_indices(src.delta + 1, lambda)
        .into_iter()
        .map(|alpha| {
            let kap = kappa(&alpha, lambda).expect("enumerated indices respect the degree");
            (alpha, kap)
        })
        .collect();
    let mut rho = BTreeMap::new();
    for (m, c) in src.r.terms() {
        let alpha = m.exponents().to_vec();
        let kap = &kappa_table[&alpha];
        let (q, rem) = (&scale * c).div_rem(kap);
        debug_assert!(rem.is_zero(), "κ_α divides λ!");
        rho.insert(alpha, q);
    }
    NormalizedRepresentation { source: src.clone(), scale, rho, kappa: kappa_table }
}

/// Everything derived from a normalized representation that the compilers need.
#[derive(Clone, Debug)]
pub struct EncodingConstants {
    normalized: NormalizedRepresentation,
    nu: u32,
    gamma: BigInt,
    v: Polynomial,
    k_poly: Polynomial,
    t: Vec<Polynomial>,
}

/// Builds `ν`, `V(k)`, the carrier coefficients `T₀ … T₂ν`, `γ` and `K(a,c)`.
///
/// `γ = 2S + 1` where `S` sums the absolute coefficients of every `T_i`,
/// including `T₀`.
pub fn build_constants(norm: &NormalizedRepresentation) -> EncodingConstants {
    let src = &norm.source;
    let lambda = src.lambda;
    let delta = src.delta;
    let nu = lambda * digit_position(lambda, delta as u32);

    let k = Polynomial::var("k");
    let v = norm.rho.iter().fold(Polynomial::zero(), |acc, (alpha, r)| {
        let shift = nu - position_code_u32(alpha, lambda);
        acc + Polynomial::constant(r.clone()) * k.pow(shift)
    });
    let v = v.with_vars(&["k"]);

    let expansion = &v * &carrier_base(delta, lambda).pow(lambda);
    let vars = source_vars(delta);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut t: Vec<Polynomial> = expansion
        .collect_by_variable("k")
        .into_iter()
        .map(|p| p.with_vars(&names))
        .collect();
    let len = 2 * nu as usize + 1;
    assert!(t.len() <= len, "carrier expansion exceeds degree 2ν in k");
    t.resize_with(len, || Polynomial::zero().with_vars(&names));
    assert!(
        t.iter().all(|ti| ti.total_degree() <= u64::from(lambda)),
        "carrier coefficient exceeds degree λ"
    );
    assert_eq!(
        t[nu as usize],
        src.r.scale(&norm.scale),
        "middle carrier coefficient must equal the scaled source"
    );

    let s: BigInt = t.iter().map(|ti| ti.stats().abs_coefficient_sum).sum();
    let gamma: BigInt = 2 * s + 1;
    let k_poly = Polynomial::constant(gamma.clone())
        * (Polynomial::constant(2) + Polynomial::var("a") + Polynomial::var("c")).pow(lambda);

    EncodingConstants { normalized: norm.clone(), nu, gamma, v, k_poly, t }
}

/// A witness `(b, c)` for `a`, with the base `k = K(a, c)` it was coded in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub a: u64,
    pub h: Vec<u64>,
    pub b: BigInt,
    pub c: u64,
    pub k: BigInt,
}

impl EncodingConstants {
    pub fn normalized(&self) -> &NormalizedRepresentation {
        &self.normalized
    }

    pub fn source(&self) -> &SourceRepresentation {
        &self.normalized.source
    }

    pub fn lambda(&self) -> u32 {
        self.source().lambda
    }

    pub fn delta(&self) -> usize {
        self.source().delta
    }

    /// `ν = λ(λ+1)^δ`.
    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn gamma(&self) -> &BigInt {
        &self.gamma
    }

    /// `V(k)`, a polynomial in `k`.
    pub fn v(&self) -> &Polynomial {
        &self.v
    }

    /// `K(a, c) = γ(2 + a + c)^λ`.
    pub fn k_poly(&self) -> &Polynomial {
        &self.k_poly
    }

    /// `T₀ … T₂ν` over `a, h1, …, h<delta>`.
    pub fn carriers(&self) -> &[Polynomial] {
        &self.t
    }

    /// `K(a, c)` as a number.
    pub fn k_at(&self, a: u64, c: u64) -> BigInt {
        let lambda = self.lambda();
        &self.gamma * (BigInt::from(2u32) + a + c).pow(lambda)
    }

    /// `V(k)` as a number.
    pub fn v_at(&self, k: &BigInt) -> BigInt {
        let mut pt = Point::new();
        pt.insert("k".into(), k.clone());
        self.v.evaluate(&pt).expect("V depends only on k")
    }

    /// `K(a,c)^e` as a polynomial.
    pub fn k_power(&self, e: u32) -> Polynomial {
        self.k_poly.pow(e)
    }

    /// `V(K(a,c)) · (1 + a K(a,c) + b)^λ` as a polynomial in `a, b, c`.
    pub fn carrier_product(&self) -> Polynomial {
        let mut bind = BTreeMap::new();
        bind.insert("k".to_string(), self.k_poly.clone());
        let v_of_k = self.v.substitute(&bind);
        let base = Polynomial::one()
            + Polynomial::var("a") * self.k_poly.clone()
            + Polynomial::var("b");
        v_of_k * base.pow(self.lambda())
    }

    /// Sign of `V(K(a,c))`, which is constant over all `a, c ≥ 0`.
    ///
    /// `K ≥ 2γ` exceeds the absolute coefficient sum of `V`, so the leading
    /// coefficient of `V` dominates.
    pub fn carrier_sign(&self) -> Ordering {
        let (_, lead) = self.v.terms().next_back().expect("V is nonzero");
        lead.cmp(&BigInt::zero())
    }

    /// Codes `h` as `(b, c)` with the smallest admissible `c = max h`.
    pub fn witness_encode(&self, a: u64, h: &[u64]) -> Witness {
        assert_eq!(h.len(), self.delta(), "expected {} unknowns", self.delta());
        let c = h.iter().copied().max().unwrap_or(0);
        let k = self.k_at(a, c);
        let b = encode_b(h, &k, self.lambda());
        Witness { a, h: h.to_vec(), b, c, k }
    }

    /// Checks `k > |2 T_i(a, h)|` for every carrier coefficient.
    pub fn digit_bound_holds(&self, a: u64, h: &[u64], k: &BigInt) -> bool {
        let pt = self.source().point(a, h);
        self.t.iter().all(|ti| {
            let v = ti.evaluate(&pt).expect("carriers live on the source variables");
            (BigInt::from(2) * v).abs() < *k
        })
    }

    /// Recovers `h` from `(a, b, c)` if `b`'s base-`K(a,c)` digits are zero
    /// everywhere except the coding positions, and those digits are at most `c`.
    pub fn decode_witness(&self, a: u64, b: &BigInt, c: u64) -> Option<Vec<u64>> {
        if b.is_negative() {
            return None;
        }
        let k = self.k_at(a, c);
        let lambda = self.lambda();
        let slots: BTreeMap<u32, usize> = (1..=self.delta())
            .map(|i| (digit_position(lambda, i as u32), i - 1))
            .collect();
        let mut h = vec![0u64; self.delta()];
        let mut rest = b.clone();
        let mut position = 0u32;
        while !rest.is_zero() {
            let (q, digit) = rest.div_rem(&k);
            match slots.get(&position) {
                Some(&slot) => {
                    let d = digit.to_u64().filter(|&d| d <= c)?;
                    h[slot] = d;
                }
                None if !digit.is_zero() => return None,
                None => {}
            }
            rest = q;
            position += 1;
        }
        Some(h)
    }

    /// Whether some integer `z` satisfies
    /// `-k^ν < 2(V(k)(1+ak+b)^λ - z k^(ν+1)) < k^ν` with `k = K(a, c)`.
    ///
    /// At most one `z` can work, and it is one of the two integers around
    /// `m / k^(ν+1)`.
    pub fn lemma1_decide(&self, a: u64, b: &BigInt, c: u64) -> bool {
        let k = self.k_at(a, c);
        let m = self.v_at(&k) * (BigInt::one() + &k * a + b).pow(self.lambda());
        let k_nu = k.pow(self.nu);
        let k_nu1 = &k_nu * &k;
        let z0 = m.div_floor(&k_nu1);
        [z0.clone(), z0 + 1].into_iter().any(|z| {
            let twice = 2 * (&m - z * &k_nu1);
            -&k_nu < twice && twice < k_nu
        })
    }
}
