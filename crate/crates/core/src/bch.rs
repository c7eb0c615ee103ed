//! The Baker–Campbell–Hausdorff series, group commutators of Lie series and
//! Engel words, all computed through the truncated tensor algebra.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;

use crate::freelie::{decode, FreeLie, LieError, LieSeries, Tensor};

/// `Φ(X, Y) = log(exp X · exp Y)` truncated at weight `w`, cached per `w`.
pub fn bch_series(w: usize) -> Result<LieSeries, LieError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, LieSeries>>> = OnceLock::new();
    if w == 0 {
        return Err(LieError::PreconditionViolated("W must be at least 1".into()));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&w) {
        return Ok(s.clone());
    }
    let ctx = FreeLie::shared(&["X", "Y"], w);
    let t = Tensor::letter(2, w, 0).exp().mul(&Tensor::letter(2, w, 1).exp()).log();
    if !t.is_lie() {
        return Err(LieError::NotPrimitive {
            degree: 0,
            word: "log(exp X exp Y)".into(),
        });
    }
    let s = ctx.from_tensor(&t)?;
    cache.lock().expect("cache lock").insert(w, s.clone());
    Ok(s)
}

fn same(a: &LieSeries, b: &LieSeries) -> Result<(), LieError> {
    if **a.context() == **b.context() {
        Ok(())
    } else {
        Err(LieError::AlphabetMismatch)
    }
}

/// `log(exp a · exp b)` inside the context of `a`.
pub fn bch_product(a: &LieSeries, b: &LieSeries) -> Result<LieSeries, LieError> {
    same(a, b)?;
    let ctx = a.context();
    let t = ctx.to_tensor(a).exp().mul(&ctx.to_tensor(b).exp()).log();
    ctx.from_tensor(&t)
}

/// `[a, b]_G = log(e^{-a} e^{-b} e^{a} e^{b})`.
pub fn group_commutator(a: &LieSeries, b: &LieSeries) -> Result<LieSeries, LieError> {
    same(a, b)?;
    let ctx = a.context();
    let (ta, tb) = (ctx.to_tensor(a), ctx.to_tensor(b));
    let minus = BigRational::from_integer((-1).into());
    let t = ta
        .scale(&minus)
        .exp()
        .mul(&tb.scale(&minus).exp())
        .mul(&ta.exp())
        .mul(&tb.exp())
        .log();
    ctx.from_tensor(&t)
}

/// Left-normed `[a, z, …, z]_G` with `l` copies of `z`.
pub fn engel_word_of(a: &LieSeries, z: &LieSeries, l: usize) -> Result<LieSeries, LieError> {
    let mut out = a.clone();
    for _ in 0..l {
        out = group_commutator(&out, z)?;
    }
    Ok(out)
}

/// `[x + y,_l z]_G` over the alphabet `{x, y, z}` truncated at weight `w`.
pub fn engel_word(l: usize, w: usize) -> Result<LieSeries, LieError> {
    if l == 0 || w < l + 1 {
        return Err(LieError::PreconditionViolated(format!(
            "need l ≥ 1 and W ≥ l + 1 (got l = {l}, W = {w})"
        )));
    }
    let ctx = FreeLie::shared(&["x", "y", "z"], w);
    let x = LieSeries::generator(&ctx, "x")?;
    let y = LieSeries::generator(&ctx, "y")?;
    let z = LieSeries::generator(&ctx, "z")?;
    engel_word_of(&x.add(&y)?, &z, l)
}

/// Parts `w_0, w_1, …, w_W` of `s` by degree in `letter`.
pub fn decompose_by_degree(s: &LieSeries, letter: &str) -> Result<Vec<LieSeries>, LieError> {
    let ctx = s.context();
    let a = ctx.letter_index(letter)?;
    Ok((0..=ctx.weight())
        .map(|t| s.filter(|i| ctx.letter_degree(i, a) == t))
        .collect())
}

/// `s` with `letter ↦ 0`, computed in the tensor algebra.
pub fn substitute_zero(s: &LieSeries, letter: &str) -> Result<LieSeries, LieError> {
    substitute_scale(s, letter, &BigRational::from_integer(0.into()))
}

/// `s` with `letter ↦ λ·letter`, computed in the tensor algebra.
pub fn substitute_scale(s: &LieSeries, letter: &str, lambda: &BigRational) -> Result<LieSeries, LieError> {
    let ctx = s.context();
    let a = ctx.letter_index(letter)?;
    let r = ctx.rank();
    let t = ctx.to_tensor(s).map_words(|d, code, c| {
        let count = decode(code, d, r).iter().filter(|&&b| b as usize == a).count();
        c * num_traits::pow(lambda.clone(), count)
    });
    ctx.from_tensor(&t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::rat;

    #[test]
    fn bch_low_weights() {
        let b2 = bch_series(2).unwrap();
        let ctx = b2.context().clone();
        let x = LieSeries::generator(&ctx, "X").unwrap();
        let y = LieSeries::generator(&ctx, "Y").unwrap();
        let expected = x
            .add(&y)
            .unwrap()
            .add(&x.bracket(&y).unwrap().scale(&rat(1, 2)))
            .unwrap();
        assert_eq!(b2, expected);

        let b3 = bch_series(3).unwrap();
        assert_eq!(b3.coeff_of_word("XY"), Some(rat(1, 2)));
        assert_eq!(b3.coeff_of_word("XXY"), Some(rat(1, 12)));
        assert_eq!(b3.coeff_of_word("XYY"), Some(rat(1, 12)));
    }

    #[test]
    fn bch_with_zero() {
        for w in 1..=5 {
            let b = bch_series(w).unwrap();
            let x_only = substitute_zero(&b, "Y").unwrap();
            let ctx = b.context().clone();
            assert_eq!(x_only, LieSeries::generator(&ctx, "X").unwrap());
        }
    }

    #[test]
    fn bch_matches_product_of_generators() {
        let b = bch_series(5).unwrap();
        let ctx = b.context().clone();
        let x = LieSeries::generator(&ctx, "X").unwrap();
        let y = LieSeries::generator(&ctx, "Y").unwrap();
        assert_eq!(bch_product(&x, &y).unwrap(), b);
        assert_eq!(bch_product(&x, &x.neg()).unwrap(), LieSeries::zero(&ctx));
    }

    #[test]
    fn engel_word_lowest_terms() {
        let e = engel_word(1, 2).unwrap();
        let ctx = e.context().clone();
        let g = |n| LieSeries::generator(&ctx, n).unwrap();
        let expected = g("x")
            .bracket(&g("z"))
            .unwrap()
            .add(&g("y").bracket(&g("z")).unwrap())
            .unwrap();
        assert_eq!(e, expected);

        let parts = decompose_by_degree(&e, "x").unwrap();
        assert_eq!(parts[0], g("y").bracket(&g("z")).unwrap());
        assert_eq!(parts[1], g("x").bracket(&g("z")).unwrap());
        assert!(parts[2..].iter().all(LieSeries::is_zero));

        let e2 = engel_word(2, 3).unwrap();
        let ctx3 = e2.context().clone();
        let g3 = |n| LieSeries::generator(&ctx3, n).unwrap();
        let lie = g3("x")
            .add(&g3("y"))
            .unwrap()
            .bracket(&g3("z"))
            .unwrap()
            .bracket(&g3("z"))
            .unwrap();
        // Corrections in the outer commutator have weight at least 4, so the
        // whole word at W = 3 is the Lie commutator.
        assert_eq!(e2, lie);
        assert!(matches!(engel_word(2, 2), Err(LieError::PreconditionViolated(_))));
    }

    #[test]
    fn commutator_matches_iterated_products() {
        // Oracle: [a, b]_G = Φ(Φ(Φ(-a, -b), a), b) via three separate products.
        let ctx = FreeLie::shared(&["x", "y", "z"], 5);
        let g = |n| LieSeries::generator(&ctx, n).unwrap();
        let a = g("x").add(&g("y").scale(&rat(2, 3))).unwrap();
        let b = g("z").add(&g("x").bracket(&g("y")).unwrap()).unwrap();
        let direct = group_commutator(&a, &b).unwrap();
        let ab = bch_product(&a.neg(), &b.neg()).unwrap();
        let composed = bch_product(&bch_product(&ab, &a).unwrap(), &b).unwrap();
        assert_eq!(direct, composed);
    }

    #[test]
    fn engel_word_vanishes_without_z() {
        for l in 1..=3 {
            let e = engel_word(l, 4).unwrap();
            assert!(substitute_zero(&e, "z").unwrap().is_zero());
        }
    }

    #[test]
    fn decomposition_sums_and_scales() {
        let e = engel_word(2, 5).unwrap();
        let parts = decompose_by_degree(&e, "x").unwrap();
        let mut total = LieSeries::zero(e.context());
        for p in &parts {
            total = total.add(p).unwrap();
        }
        assert_eq!(total, e);
        assert_eq!(parts[0], substitute_zero(&e, "x").unwrap());
        let lambda = rat(4, 1);
        let scaled = substitute_scale(&e, "x", &lambda).unwrap();
        let sparts = decompose_by_degree(&scaled, "x").unwrap();
        for (t, (a, b)) in parts.iter().zip(&sparts).enumerate() {
            assert_eq!(*b, a.scale(&num_traits::pow(lambda.clone(), t)));
        }
    }
}
