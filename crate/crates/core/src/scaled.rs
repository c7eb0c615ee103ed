//! The free nilpotent Lie algebra of class `c` on `r` generators with every
//! bracket multiplied by `s = p` (`s = 4` for `p = 2`), so `[L, L] ⊆ sL`.
//! The group law is the BCH series evaluated with these brackets.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bch::bch_series;
use crate::freelie::{int, FreeLie, LieError, LieSeries, PValuation};
use crate::report::rational_string;
use crate::series::is_prime;

/// Coordinates on the Lyndon basis of the model.
pub type ModelElement = Vec<BigRational>;

#[derive(Debug, Clone)]
pub struct ScaledModel {
    p: u64,
    scale: BigRational,
    ctx: Arc<FreeLie>,
    /// `consts[a * dim + b]` = sparse `s·[e_a, e_b]`.
    consts: Vec<Vec<(usize, BigRational)>>,
    phi: LieSeries,
}

const LETTERS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

impl ScaledModel {
    pub fn new(r: usize, c: usize, p: u64) -> Result<Self, LieError> {
        if !is_prime(p as usize) {
            return Err(LieError::PreconditionViolated(format!("{p} is not prime")));
        }
        if r == 0 || r > LETTERS.len() || c == 0 {
            return Err(LieError::PreconditionViolated(format!(
                "need 1 ≤ r ≤ {} and c ≥ 1",
                LETTERS.len()
            )));
        }
        let ctx = FreeLie::shared(&LETTERS[..r], c);
        let scale = int(if p == 2 { 4 } else { p as i64 });
        let n = ctx.dim();
        let mut consts = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let br = LieSeries::basis(&ctx, a).bracket(&LieSeries::basis(&ctx, b))?;
                consts.push(br.coeffs().iter().map(|(&i, x)| (i, x * &scale)).collect());
            }
        }
        Ok(ScaledModel {
            p,
            scale,
            ctx,
            consts,
            phi: bch_series(c)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn context(&self) -> &Arc<FreeLie> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn zero(&self) -> ModelElement {
        vec![BigRational::zero(); self.dim()]
    }

    pub fn generator(&self, i: usize) -> ModelElement {
        let mut u = self.zero();
        u[self.ctx.index_of(&[i as u8]).expect("letter in alphabet")] = BigRational::one();
        u
    }

    pub fn add(&self, u: &ModelElement, v: &ModelElement) -> ModelElement {
        u.iter().zip(v).map(|(a, b)| a + b).collect()
    }

    /// `α·u`, which is also the group power `u^α`.
    pub fn power(&self, u: &ModelElement, alpha: &BigRational) -> ModelElement {
        u.iter().map(|a| a * alpha).collect()
    }

    pub fn inverse(&self, u: &ModelElement) -> ModelElement {
        u.iter().map(|a| -a).collect()
    }

    pub fn bracket(&self, u: &ModelElement, v: &ModelElement) -> ModelElement {
        let n = self.dim();
        let mut out = self.zero();
        for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (i, c) in &self.consts[a * n + b] {
                    out[*i] += &xy * c;
                }
            }
        }
        out
    }

    /// Substitutes `X ↦ u`, `Y ↦ v` into a two-letter Lie series.
    pub fn evaluate(&self, s: &LieSeries, u: &ModelElement, v: &ModelElement) -> ModelElement {
        let ctx = s.context();
        let mut memo: Vec<Option<ModelElement>> = vec![None; ctx.dim()];
        let mut out = self.zero();
        for (&i, c) in s.coeffs() {
            let val = self.eval_monomial(ctx, i, u, v, &mut memo);
            for (o, x) in out.iter_mut().zip(val) {
                *o += c * x;
            }
        }
        out
    }

    fn eval_monomial(
        &self,
        ctx: &FreeLie,
        i: usize,
        u: &ModelElement,
        v: &ModelElement,
        memo: &mut Vec<Option<ModelElement>>,
    ) -> ModelElement {
        if let Some(m) = &memo[i] {
            return m.clone();
        }
        let val = match ctx.split(i) {
            None if ctx.word(i)[0] == 0 => u.clone(),
            None => v.clone(),
            Some((a, b)) => {
                let x = self.eval_monomial(ctx, a, u, v, memo);
                let y = self.eval_monomial(ctx, b, u, v, memo);
                self.bracket(&x, &y)
            }
        };
        memo[i] = Some(val.clone());
        val
    }

    pub fn check_integral(&self, u: &ModelElement) -> Result<(), LieError> {
        let v = PValuation::new(self.p);
        match u.iter().position(|x| !v.is_integral(x)) {
            None => Ok(()),
            Some(i) => Err(LieError::NotPIntegral {
                p: self.p,
                monomial: self.ctx.bracket_string(i),
                value: rational_string(&u[i]),
            }),
        }
    }

    /// `uv = Φ(u, v)`; exact because the model has class `c` and `Φ` is
    /// truncated at weight `c`.
    pub fn group_mult(&self, u: &ModelElement, v: &ModelElement) -> Result<ModelElement, LieError> {
        let w = self.evaluate(&self.phi, u, v);
        self.check_integral(&w)?;
        Ok(w)
    }

    /// `[u, v]_G = u⁻¹v⁻¹uv`.
    pub fn commutator(&self, u: &ModelElement, v: &ModelElement) -> Result<ModelElement, LieError> {
        let a = self.group_mult(&self.inverse(u), &self.inverse(v))?;
        let b = self.group_mult(&a, u)?;
        self.group_mult(&b, v)
    }

    pub fn to_json(&self, u: &ModelElement) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = u
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (self.ctx.word_string(i), rational_string(x).into()))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// The guaranteed lower bound on `f(i)`: `i − 1` for `p = 2` (scale 4),
/// `⌈(i − 1)(p − 2)/(p − 1)⌉` for odd `p`.
pub fn valuation_bound(p: u64, i: usize) -> i64 {
    let i = i as i64;
    if p == 2 {
        i - 1
    } else {
        let (num, den) = ((i - 1) * (p as i64 - 2), p as i64 - 1);
        (num + den - 1) / den
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationProfile {
    pub p: u64,
    pub w: usize,
    /// `f(i)` for `i = 1..=W`; `None` when the weight-`i` part vanishes.
    pub f: Vec<Option<i64>>,
    pub bounds: Vec<i64>,
}

/// Valuations of the weight parts of `Φ` evaluated at the two generators of
/// the rank-2, class-`W` model.
pub fn valuation_profile(p: u64, w: usize) -> Result<ValuationProfile, LieError> {
    let model = ScaledModel::new(2, w, p)?;
    let prod = model.group_mult(&model.generator(0), &model.generator(1))?;
    let ctx = model.context();
    let series = LieSeries::from_coeffs(ctx, prod.into_iter().enumerate());
    let f = series.weight_valuations(&PValuation::new(p));
    let bounds: Vec<i64> = (1..=w).map(|i| valuation_bound(p, i)).collect();
    for (i, (val, &bound)) in f.iter().zip(&bounds).enumerate() {
        if let Some(found) = *val {
            if found < bound {
                return Err(LieError::BoundViolated {
                    weight: i + 1,
                    found,
                    bound,
                });
            }
        }
    }
    Ok(ValuationProfile { p, w, f, bounds })
}
