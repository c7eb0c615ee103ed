//! Elimination of the low-degree terms of an Engel commutator by a
//! Vandermonde combination of the substitutions `x ↦ x_i·x`.
//!
//! Nodes are `x_0 = 1` and `x_i = 1 + p^{im}` for `1 ≤ i < k`; the weights
//! `c_i` solve `Σ_i c_i x_i^t = δ_{t,0}` for `0 ≤ t < k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bch::{decompose_by_degree, engel_word_of};
use crate::freelie::{FreeLie, LieError, LieSeries, PValuation};
use crate::report::rational_string;
use crate::series::is_prime;

#[derive(Debug, Error)]
pub enum LinError {
    #[error("β_{t} = {value} is not a {p}-integer (k = {k}, m = {m})")]
    IntegralityViolated {
        k: usize,
        p: u64,
        m: u32,
        t: usize,
        value: String,
    },
    #[error("claim '{claim}' fails at i = {i}: expected {expected}, found {found}")]
    ClaimViolated {
        claim: String,
        i: usize,
        expected: String,
        found: String,
    },
    #[error("identity fails in x-degree {degree}: {detail}")]
    IdentityViolated { degree: usize, detail: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

impl LinError {
    /// A machine-readable witness for reports.
    pub fn counterexample(&self) -> serde_json::Value {
        match self {
            LinError::IntegralityViolated { k, p, m, t, value } => {
                json!({ "k": k, "p": p, "m": m, "t": t, "beta": value })
            }
            LinError::ClaimViolated {
                claim,
                i,
                expected,
                found,
            } => json!({ "claim": claim, "i": i, "expected": expected, "found": found }),
            LinError::IdentityViolated { degree, detail } => json!({ "degree": degree, "detail": detail }),
            other => json!({ "error": other.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormComparison {
    pub i: usize,
    pub closed_form: String,
    pub solved: String,
    pub agrees: bool,
    /// `solved / closed_form`, when the closed form is non-zero.
    pub ratio: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VandermondeSystem {
    pub k: usize,
    pub p: u64,
    pub m: u32,
    pub nodes: Vec<BigInt>,
    pub c: Vec<BigRational>,
    /// `Δ = Π_{i<j} (x_j − x_i)`.
    pub delta: BigInt,
    /// Whether the linear solve equals the Lagrange values `L_i(0)`.
    pub lagrange_agrees: bool,
    pub closed_form: Vec<ClosedFormComparison>,
}

pub fn nodes(k: usize, p: u64, m: u32) -> Vec<BigInt> {
    let p = BigInt::from(p);
    (0..k)
        .map(|i| {
            if i == 0 {
                BigInt::one()
            } else {
                BigInt::one() + num_traits::pow(p.clone(), i * m as usize)
            }
        })
        .collect()
}

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Solves `A c = e_0` with `A[t][i] = x_i^t` by exact Gauss–Jordan elimination.
fn solve_defining_system(x: &[BigInt]) -> Vec<BigRational> {
    let k = x.len();
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|t| {
            let mut row: Vec<BigRational> = x.iter().map(|xi| q(&num_traits::pow(xi.clone(), t))).collect();
            row.push(if t == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            });
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .expect("distinct nodes give an invertible system");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    a.into_iter().map(|row| row[k].clone()).collect()
}

/// `L_i(0) = Π_{j≠i} (0 − x_j)/(x_i − x_j)`.
pub fn lagrange_at_zero(x: &[BigInt]) -> Vec<BigRational> {
    (0..x.len())
        .map(|i| {
            let mut v = BigRational::one();
            for (_, xj) in x.iter().enumerate().filter(|&(j, _)| j != i) {
                v *= BigRational::new(-xj.clone(), &x[i] - xj);
            }
            v
        })
        .collect()
}

/// The closed forms with numerator `(1+p^m)(1+p^{2m})⋯` (omitting `s`) as
/// printed in the source of the lemma.
fn printed_closed_form(k: usize, p: u64, m: u32) -> Vec<BigRational> {
    let pm = |j: usize| num_traits::pow(BigInt::from(p), j * m as usize);
    let mut out = Vec::with_capacity(k);
    let mut c0 = BigRational::one();
    for j in 1..k {
        c0 *= BigRational::new(BigInt::one() + pm(j), -pm(j));
    }
    out.push(c0);
    for s in 1..k {
        let mut num = BigInt::one();
        let mut den = pm(s);
        for j in (1..k).filter(|&j| j != s) {
            num *= BigInt::one() + pm(j);
            den *= pm(s) - pm(j);
        }
        out.push(BigRational::new(num, den));
    }
    out
}

pub fn solve_system(k: usize, p: u64, m: u32) -> Result<VandermondeSystem, LinError> {
    if k == 0 || m == 0 || !is_prime(p as usize) {
        return Err(LinError::PreconditionViolated(format!(
            "need k ≥ 1, m ≥ 1 and p prime (got k = {k}, p = {p}, m = {m})"
        )));
    }
    let x = nodes(k, p, m);
    let c = solve_defining_system(&x);
    let lagrange_agrees = c == lagrange_at_zero(&x);
    let mut delta = BigInt::one();
    for i in 0..k {
        for j in i + 1..k {
            delta *= &x[j] - &x[i];
        }
    }
    let closed_form = printed_closed_form(k, p, m)
        .into_iter()
        .zip(&c)
        .enumerate()
        .map(|(i, (cf, solved))| ClosedFormComparison {
            i,
            closed_form: rational_string(&cf),
            solved: rational_string(solved),
            agrees: cf == *solved,
            ratio: (!cf.is_zero()).then(|| rational_string(&(solved / &cf))),
        })
        .collect();
    Ok(VandermondeSystem {
        k,
        p,
        m,
        nodes: x,
        c,
        delta,
        lagrange_agrees,
        closed_form,
    })
}

impl VandermondeSystem {
    /// `β_t = Σ_i c_i x_i^t`.
    pub fn beta(&self, t: usize) -> BigRational {
        self.c
            .iter()
            .zip(&self.nodes)
            .map(|(c, x)| c * q(&num_traits::pow(x.clone(), t)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `Σ_i c_i x_i^t − δ_{t,0}` for `t < k`; all zero for a correct solve.
    pub fn residuals(&self) -> Vec<BigRational> {
        (0..self.k)
            .map(|t| {
                let target = if t == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                self.beta(t) - target
            })
            .collect()
    }

    pub fn valuation(&self) -> PValuation {
        PValuation::new(self.p)
    }

    /// `ν_p` of the reduced denominator of `c_i`.
    pub fn denominator_valuation(&self, i: usize) -> i64 {
        self.valuation()
            .of_int(self.c[i].denom())
            .expect("non-zero denominator")
    }

    /// The claimed exponent `m·i·(2k − i − 1)/2`.
    pub fn claimed_denominator_valuation(&self, i: usize) -> i64 {
        (self.m as usize * i * (2 * self.k - i - 1) / 2) as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaEntry {
    pub t: usize,
    pub beta: String,
    /// `None` when `β_t = 0`.
    pub valuation: Option<i64>,
}

/// `β_0, …, β_T`, checking the defining values and `p`-integrality.
pub fn beta_sequence(sys: &VandermondeSystem, t_max: usize) -> Result<Vec<BetaEntry>, LinError> {
    if t_max < sys.k {
        return Err(LinError::PreconditionViolated(format!("need T ≥ k = {}", sys.k)));
    }
    let v = sys.valuation();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let beta = sys.beta(t);
        if t < sys.k {
            let expected = if t == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            if beta != expected {
                return Err(LinError::ClaimViolated {
                    claim: "defining system".into(),
                    i: t,
                    expected: rational_string(&expected),
                    found: rational_string(&beta),
                });
            }
        }
        if !v.is_integral(&beta) {
            return Err(LinError::IntegralityViolated {
                k: sys.k,
                p: sys.p,
                m: sys.m,
                t,
                value: rational_string(&beta),
            });
        }
        out.push(BetaEntry {
            t,
            valuation: v.of(&beta),
            beta: rational_string(&beta),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValuationReport {
    /// `(i, ν_p(denominator of c_i))` for every `i`, including the unclaimed `i = 0`.
    pub denominator_valuations: Vec<(usize, i64)>,
    pub tail_checked_to: usize,
}

/// The exact denominator exponent of each `c_i` (`i ≥ 1`) and the
/// integrality of `c_i·p^{imu}` for `k ≤ u ≤ U`.
pub fn valuation_checks(sys: &VandermondeSystem, u_max: usize) -> Result<ValuationReport, LinError> {
    if u_max < sys.k {
        return Err(LinError::PreconditionViolated(format!("need U ≥ k = {}", sys.k)));
    }
    let v = sys.valuation();
    let mut denominator_valuations = Vec::with_capacity(sys.k);
    for i in 0..sys.k {
        let found = sys.denominator_valuation(i);
        denominator_valuations.push((i, found));
        if i == 0 {
            continue;
        }
        let claimed = sys.claimed_denominator_valuation(i);
        if found != claimed {
            return Err(LinError::ClaimViolated {
                claim: "denominator exponent m·i(2k−i−1)/2".into(),
                i,
                expected: claimed.to_string(),
                found: found.to_string(),
            });
        }
        for u in sys.k..=u_max {
            let shift = num_traits::pow(BigInt::from(sys.p), i * sys.m as usize * u);
            let value = &sys.c[i] * q(&shift);
            if !v.is_integral(&value) {
                return Err(LinError::ClaimViolated {
                    claim: format!("c_i·p^(imu) is a p-integer for u = {u}"),
                    i,
                    expected: "valuation ≥ 0".into(),
                    found: rational_string(&value),
                });
            }
        }
    }
    Ok(ValuationReport {
        denominator_valuations,
        tail_checked_to: u_max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearizationReport {
    pub l: usize,
    pub k: usize,
    pub p: u64,
    pub m: u32,
    pub w: usize,
    /// x-degrees `1..k−1` that were checked to vanish.
    pub vanishing_degrees: Vec<usize>,
    /// `β_t` from the scalar formula, for `k ≤ t ≤ W`.
    pub beta_scalar: Vec<String>,
    /// `β_t` read off the series as a coefficient ratio (`None` if `w_t = 0`).
    pub beta_extracted: Vec<Option<String>>,
    pub delta: String,
    /// `c_i·Δ`, all integers.
    pub cleared_multipliers: Vec<String>,
    pub monomials_checked: usize,
}

/// Computes `Σ c_i [x_i x + y,_l z]_G` with full group-commutator
/// arithmetic and checks it equals `w_0 + Σ_{t≥k} β_t w_t`, where `w_t` is
/// the x-degree-`t` part of `[x + y,_l z]_G`. The `Δ`-cleared combination
/// is checked to have integral multipliers and to reproduce the identity
/// after division by `Δ`.
pub fn linearization_identity_check(
    l: usize,
    k: usize,
    p: u64,
    m: u32,
    w: usize,
) -> Result<LinearizationReport, LinError> {
    if l == 0 || w < l + 1 {
        return Err(LinError::PreconditionViolated(format!(
            "need l ≥ 1 and W ≥ l + 1 (got l = {l}, W = {w})"
        )));
    }
    let sys = solve_system(k, p, m)?;
    let ctx = FreeLie::shared(&["x", "y", "z"], w);
    let x = LieSeries::generator(&ctx, "x")?;
    let y = LieSeries::generator(&ctx, "y")?;
    let z = LieSeries::generator(&ctx, "z")?;

    let words: Vec<LieSeries> = sys
        .nodes
        .iter()
        .map(|xi| engel_word_of(&x.scale(&q(xi)).add(&y)?, &z, l))
        .collect::<Result<_, _>>()?;
    let base = decompose_by_degree(&words[0], "x")?;

    let mut lhs = LieSeries::zero(&ctx);
    for (c, e) in sys.c.iter().zip(&words) {
        lhs = lhs.add(&e.scale(c))?;
    }
    let parts = decompose_by_degree(&lhs, "x")?;

    if parts[0] != base[0] {
        return Err(LinError::IdentityViolated {
            degree: 0,
            detail: "degree-0 part differs from w_0".into(),
        });
    }
    let mut vanishing_degrees = Vec::new();
    for (t, part) in parts.iter().enumerate().take(k.min(w + 1)).skip(1) {
        if !part.is_zero() {
            return Err(LinError::IdentityViolated {
                degree: t,
                detail: format!("{} surviving monomials", part.coeffs().len()),
            });
        }
        vanishing_degrees.push(t);
    }
    let mut beta_scalar = Vec::new();
    let mut beta_extracted = Vec::new();
    for t in k..=w {
        let beta = sys.beta(t);
        if parts[t] != base[t].scale(&beta) {
            return Err(LinError::IdentityViolated {
                degree: t,
                detail: format!("part is not β_{t} = {} times w_{t}", rational_string(&beta)),
            });
        }
        let extracted = base[t].coeffs().iter().next().map(|(&i, c)| parts[t].coeff(i) / c);
        if let Some(e) = &extracted {
            if *e != beta {
                return Err(LinError::IdentityViolated {
                    degree: t,
                    detail: format!("extracted β_{t} = {} disagrees", rational_string(e)),
                });
            }
        }
        beta_scalar.push(rational_string(&beta));
        beta_extracted.push(extracted.as_ref().map(rational_string));
    }

    // Δ-cleared variant: integral multipliers, same identity after division.
    let delta = q(&sys.delta);
    let multipliers: Vec<BigRational> = sys.c.iter().map(|c| c * &delta).collect();
    if let Some((i, bad)) = multipliers.iter().enumerate().find(|(_, c)| !c.is_integer()) {
        return Err(LinError::ClaimViolated {
            claim: "c_i·Δ is an integer".into(),
            i,
            expected: "integer".into(),
            found: rational_string(bad),
        });
    }
    let mut cleared = LieSeries::zero(&ctx);
    for (c, e) in multipliers.iter().zip(&words) {
        cleared = cleared.add(&e.scale(c))?;
    }
    if cleared.scale(&delta.recip()) != lhs {
        return Err(LinError::IdentityViolated {
            degree: 0,
            detail: "Δ-cleared combination divided by Δ differs".into(),
        });
    }

    Ok(LinearizationReport {
        l,
        k,
        p,
        m,
        w,
        vanishing_degrees,
        beta_scalar,
        beta_extracted,
        delta: sys.delta.to_string(),
        cleared_multipliers: multipliers.iter().map(rational_string).collect(),
        monomials_checked: lhs.coeffs().len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{int, rat};

    #[test]
    fn small_systems() {
        let s = solve_system(1, 3, 1).unwrap();
        assert_eq!(s.c, vec![int(1)]);
        let s = solve_system(2, 3, 1).unwrap();
        assert_eq!(s.c, vec![rat(4, 3), rat(-1, 3)]);
        assert!(s.lagrange_agrees);
        assert_eq!(s.beta(2), int(-4));
        let s = solve_system(3, 3, 1).unwrap();
        assert_eq!(s.c, vec![rat(40, 27), rat(-5, 9), rat(2, 27)]);
        // Oracle: x^k − Π(x − x_i) interpolates x^k at the nodes, so
        // β_k = (−1)^{k+1}·Π x_i = 1·4·10.
        assert_eq!(s.beta(3), int(40));
        assert_eq!(s.delta, BigInt::from(3 * 9 * 6));
    }

    #[test]
    fn printed_closed_forms_differ_by_sign_for_even_k() {
        for k in 1..=6 {
            let s = solve_system(k, 3, 1).unwrap();
            let sign = if k % 2 == 1 { "1" } else { "-1" };
            for cmp in &s.closed_form {
                assert_eq!(cmp.ratio.as_deref(), Some(sign), "k = {k}, i = {}", cmp.i);
                assert_eq!(cmp.agrees, k % 2 == 1);
            }
        }
        let s = solve_system(2, 3, 1).unwrap();
        assert_eq!(s.closed_form[0].closed_form, "-4/3");
    }

    #[test]
    fn valuations_of_denominators() {
        let s = solve_system(2, 3, 1).unwrap();
        assert_eq!(s.denominator_valuation(1), 1);
        let s = solve_system(3, 3, 1).unwrap();
        assert_eq!(s.denominator_valuation(2), 3);
        assert_eq!(s.claimed_denominator_valuation(2), 3);
        let rep = valuation_checks(&s, 12).unwrap();
        assert_eq!(rep.denominator_valuations[0], (0, 3));
    }

    #[test]
    fn betas_are_p_integers() {
        for k in 1..=4 {
            for p in [2, 3, 5] {
                let s = solve_system(k, p, 1).unwrap();
                assert!(s.residuals().iter().all(Zero::is_zero));
                let betas = beta_sequence(&s, 20).unwrap();
                assert_eq!(betas[0].beta, "1");
                assert!(betas[1..k].iter().all(|b| b.beta == "0"));
            }
        }
        assert!(matches!(
            beta_sequence(&solve_system(3, 3, 1).unwrap(), 2),
            Err(LinError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn identity_small_cases() {
        let rep = linearization_identity_check(1, 1, 3, 1, 3).unwrap();
        assert!(rep.vanishing_degrees.is_empty());
        assert!(rep.beta_scalar.iter().all(|b| b == "1"));

        let rep = linearization_identity_check(1, 2, 3, 1, 4).unwrap();
        assert_eq!(rep.vanishing_degrees, vec![1]);
        assert_eq!(rep.beta_scalar[0], "-4");
        assert_eq!(rep.beta_extracted[0].as_deref(), Some("-4"));

        let rep = linearization_identity_check(2, 3, 3, 1, 5).unwrap();
        assert_eq!(rep.vanishing_degrees, vec![1, 2]);
        assert_eq!(rep.beta_scalar[0], "40");
        assert_eq!(rep.beta_extracted[0].as_deref(), Some("40"));
    }
}
