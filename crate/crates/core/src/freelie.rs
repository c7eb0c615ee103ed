//! Truncated free associative and free Lie algebras over exact rationals.
//!
//! Words over an `r`-letter alphabet are encoded base `r` with the first
//! letter most significant, so numeric order on codes of one length is the
//! lexicographic order on words. The Lie basis is the Lyndon basis ordered by
//! `(length, word)`, each word bracketed by its standard factorization.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::report::rational_string;

#[derive(Debug, Error, PartialEq)]
pub enum LieError {
    #[error("series over different alphabets or truncation weights")]
    AlphabetMismatch,
    #[error("degree-{degree} part is not a Lie element (leading word {word})")]
    NotPrimitive { degree: usize, word: String },
    #[error("coefficient {value} of {monomial} is not {p}-integral")]
    NotPIntegral { p: u64, monomial: String, value: String },
    #[error("weight {weight}: valuation {found} is below the bound {bound}")]
    BoundViolated { weight: usize, found: i64, bound: i64 },
    #[error("unknown letter '{0}'")]
    UnknownLetter(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p`-adic valuation on exact rationals; `None` is the `∞` of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PValuation {
    pub p: u64,
}

impl PValuation {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "valuation needs a prime");
        PValuation { p }
    }

    pub fn of_int(&self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            n = q;
            v += 1;
        }
    }

    pub fn of(&self, q: &BigRational) -> Option<i64> {
        let num = self.of_int(q.numer())?;
        Some(num - self.of_int(q.denom()).expect("denominator is non-zero"))
    }

    pub fn is_integral(&self, q: &BigRational) -> bool {
        self.of(q).is_none_or(|v| v >= 0)
    }
}

/// A truncated element of the free associative algebra; `parts[d]` holds
/// the coefficients of all `r^d` words of length `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    r: usize,
    parts: Vec<Vec<BigRational>>,
}

impl Tensor {
    pub fn zero(r: usize, w: usize) -> Self {
        Tensor {
            r,
            parts: (0..=w).map(|d| vec![BigRational::zero(); r.pow(d as u32)]).collect(),
        }
    }

    pub fn one(r: usize, w: usize) -> Self {
        let mut t = Self::zero(r, w);
        t.parts[0][0] = BigRational::one();
        t
    }

    pub fn letter(r: usize, w: usize, a: usize) -> Self {
        let mut t = Self::zero(r, w);
        if w >= 1 {
            t.parts[1][a] = BigRational::one();
        }
        t
    }

    pub fn weight(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn part(&self, d: usize) -> &[BigRational] {
        &self.parts[d]
    }

    pub fn coeff(&self, d: usize, code: usize) -> &BigRational {
        &self.parts[d][code]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(Zero::is_zero)
    }

    /// Applies `f(length, code, coefficient)` to every non-zero coefficient.
    pub fn map_words(&self, f: impl Fn(usize, usize, &BigRational) -> BigRational) -> Tensor {
        let mut out = self.clone();
        for (d, part) in out.parts.iter_mut().enumerate() {
            for (code, c) in part.iter_mut().enumerate() {
                if !c.is_zero() {
                    *c = f(d, code, c);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (a, b) in out.parts.iter_mut().zip(&other.parts) {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Tensor {
        let mut out = self.clone();
        for x in out.parts.iter_mut().flatten() {
            if !x.is_zero() {
                *x *= c;
            }
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Concatenation product, truncated at the common weight.
    pub fn mul(&self, other: &Tensor) -> Tensor {
        let w = self.weight();
        let mut out = Tensor::zero(self.r, w);
        for (da, a) in self.parts.iter().enumerate() {
            for (ia, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (db, b) in other.parts.iter().enumerate().take(w - da + 1) {
                    let shift = self.r.pow(db as u32);
                    let target = &mut out.parts[da + db];
                    for (ib, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        target[ia * shift + ib] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Tensor) -> Tensor {
        self.mul(other).sub(&other.mul(self))
    }

    /// `exp(t)` for `t` without constant term.
    pub fn exp(&self) -> Tensor {
        assert!(self.parts[0][0].is_zero(), "exp needs a zero constant term");
        let w = self.weight();
        let mut out = Tensor::one(self.r, w);
        let mut power = Tensor::one(self.r, w);
        for n in 1..=w {
            power = power.mul(self).scale(&rat(1, n as i64));
            out = out.add(&power);
        }
        out
    }

    /// `log(t)` for `t` with constant term 1.
    pub fn log(&self) -> Tensor {
        assert!(self.parts[0][0].is_one(), "log needs constant term 1");
        let w = self.weight();
        let mut u = self.clone();
        u.parts[0][0] = BigRational::zero();
        let mut out = Tensor::zero(self.r, w);
        let mut power = Tensor::one(self.r, w);
        for n in 1..=w {
            power = power.mul(&u);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&rat(sign, n as i64)));
        }
        out
    }

    /// Whether `θ(T_n) = n·T_n` in every degree, with `θ` the left-normed
    /// bracketing of words. This characterizes Lie elements.
    pub fn is_lie(&self) -> bool {
        if !self.parts[0][0].is_zero() {
            return false;
        }
        for n in 1..=self.weight() {
            let part = &self.parts[n];
            let mut theta = vec![BigRational::zero(); part.len()];
            for (code, c) in part.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (t, e) in left_normed_expansion(&decode(code, n, self.r), self.r) {
                    theta[t] += c * BigRational::from_integer(BigInt::from(e));
                }
            }
            let scale = int(n as i64);
            if theta.iter().zip(part).any(|(a, b)| *a != b * &scale) {
                return false;
            }
        }
        true
    }
}

pub fn encode(word: &[u8], r: usize) -> usize {
    word.iter().fold(0, |acc, &a| acc * r + a as usize)
}

pub fn decode(mut code: usize, len: usize, r: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (code % r) as u8;
        code /= r;
    }
    w
}

/// Expansion of `[…[a_1, a_2], …, a_n]` as `(word code, coefficient)` pairs.
fn left_normed_expansion(word: &[u8], r: usize) -> Vec<(usize, i64)> {
    let mut poly: BTreeMap<Vec<u8>, i64> = BTreeMap::from([(vec![word[0]], 1)]);
    for &a in &word[1..] {
        let mut next = BTreeMap::new();
        for (w, c) in poly {
            let mut right = w.clone();
            right.push(a);
            *next.entry(right).or_insert(0) += c;
            let mut left = vec![a];
            left.extend(w);
            *next.entry(left).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        poly = next;
    }
    poly.into_iter().map(|(w, c)| (encode(&w, r), c)).collect()
}

/// Strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// All Lyndon words of length `1..=n` over `r` letters in lexicographic order.
pub fn lyndon_words(r: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if r == 0 || n == 0 {
        return out;
    }
    let top = (r - 1) as u8;
    let mut w = vec![0u8];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(a) => *a += 1,
            None => return out,
        }
    }
}

/// The free Lie algebra on an alphabet, truncated at weight `W`.
#[derive(Debug)]
pub struct FreeLie {
    letters: Vec<String>,
    w: usize,
    words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// Standard factorization `(u, v)` as basis indices, `None` for letters.
    split: Vec<Option<(usize, usize)>>,
    /// Word expansion of each bracketed basis monomial, sorted by code.
    expansion: Vec<Vec<(usize, i64)>>,
}

impl PartialEq for FreeLie {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && self.w == other.w
    }
}

type ContextCache = Mutex<HashMap<(Vec<String>, usize), Arc<FreeLie>>>;

impl FreeLie {
    pub fn new(letters: &[&str], w: usize) -> FreeLie {
        assert!(!letters.is_empty() && w >= 1, "need a non-empty alphabet and W ≥ 1");
        let r = letters.len();
        let mut words = lyndon_words(r, w);
        words.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let index: HashMap<Vec<u8>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut split = Vec::with_capacity(words.len());
        let mut expansion: Vec<Vec<(usize, i64)>> = Vec::with_capacity(words.len());
        for word in &words {
            if word.len() == 1 {
                split.push(None);
                expansion.push(vec![(word[0] as usize, 1)]);
                continue;
            }
            let cut = (1..word.len())
                .find(|&i| is_lyndon(&word[i..]))
                .expect("a letter suffix is Lyndon");
            let (u, v) = (index[&word[..cut]], index[&word[cut..]]);
            split.push(Some((u, v)));
            let shift_v = r.pow(words[v].len() as u32);
            let shift_u = r.pow(words[u].len() as u32);
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(a, ca) in &expansion[u] {
                for &(b, cb) in &expansion[v] {
                    *acc.entry(a * shift_v + b).or_insert(0) += ca * cb;
                    *acc.entry(b * shift_u + a).or_insert(0) -= ca * cb;
                }
            }
            acc.retain(|_, c| *c != 0);
            expansion.push(acc.into_iter().collect());
        }
        FreeLie {
            letters: letters.iter().map(|s| s.to_string()).collect(),
            w,
            words,
            index,
            split,
            expansion,
        }
    }

    /// A context shared process-wide for equal `(letters, W)`.
    pub fn shared(letters: &[&str], w: usize) -> Arc<FreeLie> {
        static CACHE: OnceLock<ContextCache> = OnceLock::new();
        let key = (letters.iter().map(|s| s.to_string()).collect::<Vec<_>>(), w);
        let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
        cache
            .entry(key)
            .or_insert_with(|| Arc::new(FreeLie::new(letters, w)))
            .clone()
    }

    pub fn rank(&self) -> usize {
        self.letters.len()
    }

    pub fn weight(&self) -> usize {
        self.w
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter_index(&self, name: &str) -> Result<usize, LieError> {
        self.letters
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| LieError::UnknownLetter(name.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn basis_weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn split(&self, i: usize) -> Option<(usize, usize)> {
        self.split[i]
    }

    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Occurrences of letter `a` in basis monomial `i`.
    pub fn letter_degree(&self, i: usize, a: usize) -> usize {
        self.words[i].iter().filter(|&&x| x as usize == a).count()
    }

    pub fn multidegree(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).map(|a| self.letter_degree(i, a)).collect()
    }

    /// Number of basis monomials of each weight `1..=W`.
    pub fn counts(&self) -> Vec<usize> {
        (1..=self.w)
            .map(|d| self.words.iter().filter(|w| w.len() == d).count())
            .collect()
    }

    pub fn word_string(&self, i: usize) -> String {
        self.words[i]
            .iter()
            .map(|&a| self.letters[a as usize].as_str())
            .collect()
    }

    /// The standard bracketing, e.g. `[X,[X,Y]]`.
    pub fn bracket_string(&self, i: usize) -> String {
        match self.split[i] {
            None => self.letters[self.words[i][0] as usize].clone(),
            Some((u, v)) => format!("[{},{}]", self.bracket_string(u), self.bracket_string(v)),
        }
    }

    pub fn expansion(&self, i: usize) -> &[(usize, i64)] {
        &self.expansion[i]
    }

    pub fn to_tensor(&self, s: &LieSeries) -> Tensor {
        let mut t = Tensor::zero(self.rank(), self.w);
        for (&i, c) in &s.coeffs {
            let d = self.words[i].len();
            for &(code, e) in &self.expansion[i] {
                t.parts[d][code] += c * BigRational::from_integer(BigInt::from(e));
            }
        }
        t
    }

    /// Rewrites a Lie element of the tensor algebra in the Lyndon basis by
    /// repeatedly cancelling the least word, which is the leading word of
    /// exactly one basis monomial.
    pub fn from_tensor(self: &Arc<Self>, t: &Tensor) -> Result<LieSeries, LieError> {
        let r = self.rank();
        let mut coeffs = BTreeMap::new();
        if !t.parts[0][0].is_zero() {
            return Err(LieError::NotPrimitive {
                degree: 0,
                word: String::new(),
            });
        }
        for d in 1..=self.w {
            let mut part = t.parts[d].clone();
            while let Some(code) = part.iter().position(|c| !c.is_zero()) {
                let word = decode(code, d, r);
                let Some(i) = self.index_of(&word) else {
                    return Err(LieError::NotPrimitive {
                        degree: d,
                        word: word.iter().map(|&a| self.letters[a as usize].as_str()).collect(),
                    });
                };
                let c = part[code].clone();
                for &(w, e) in &self.expansion[i] {
                    part[w] -= &c * BigRational::from_integer(BigInt::from(e));
                }
                debug_assert!(part[code].is_zero());
                coeffs.insert(i, c);
            }
        }
        Ok(LieSeries {
            ctx: self.clone(),
            coeffs,
        })
    }
}

/// A truncated Lie series: exact coefficients on the Lyndon basis.
#[derive(Debug, Clone)]
pub struct LieSeries {
    ctx: Arc<FreeLie>,
    /// Non-zero coefficients only, keyed by basis index.
    coeffs: BTreeMap<usize, BigRational>,
}

impl PartialEq for LieSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.coeffs == other.coeffs
    }
}

impl LieSeries {
    pub fn zero(ctx: &Arc<FreeLie>) -> Self {
        LieSeries {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(ctx: &Arc<FreeLie>, i: usize) -> Self {
        LieSeries {
            ctx: ctx.clone(),
            coeffs: BTreeMap::from([(i, BigRational::one())]),
        }
    }

    pub fn generator(ctx: &Arc<FreeLie>, name: &str) -> Result<Self, LieError> {
        let a = ctx.letter_index(name)?;
        Ok(Self::basis(ctx, ctx.index_of(&[a as u8]).expect("letters are Lyndon")))
    }

    pub fn from_coeffs(ctx: &Arc<FreeLie>, coeffs: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs {
            assert!(i < ctx.dim(), "basis index out of range");
            if !c.is_zero() {
                map.insert(i, c);
            }
        }
        LieSeries {
            ctx: ctx.clone(),
            coeffs: map,
        }
    }

    pub fn context(&self) -> &Arc<FreeLie> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the basis monomial whose Lyndon word spells `word`.
    pub fn coeff_of_word(&self, word: &str) -> Option<BigRational> {
        let letters: Option<Vec<u8>> = word
            .chars()
            .map(|c| self.ctx.letter_index(&c.to_string()).ok().map(|a| a as u8))
            .collect();
        let i = self.ctx.index_of(&letters?)?;
        Some(self.coeff(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_context(&self, other: &LieSeries) -> Result<(), LieError> {
        if *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(LieError::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &LieSeries) -> Result<LieSeries, LieError> {
        self.same_context(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&i, c) in &other.coeffs {
            let e = coeffs.entry(i).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(&i);
            }
        }
        Ok(LieSeries {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &LieSeries) -> Result<LieSeries, LieError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> LieSeries {
        if c.is_zero() {
            return LieSeries::zero(&self.ctx);
        }
        LieSeries {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> LieSeries {
        self.scale(&-BigRational::one())
    }

    pub fn bracket(&self, other: &LieSeries) -> Result<LieSeries, LieError> {
        self.same_context(other)?;
        let t = self.ctx.to_tensor(self).commutator(&self.ctx.to_tensor(other));
        Ok(self.ctx.from_tensor(&t).expect("commutators of Lie elements are Lie"))
    }

    /// Only the monomials of weight `d`.
    pub fn weight_part(&self, d: usize) -> LieSeries {
        self.filter(|i| self.ctx.basis_weight(i) == d)
    }

    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> LieSeries {
        LieSeries {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&i, _)| keep(i))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Monomial word string to `"num/den"`, in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&i, c)| (self.ctx.word_string(i), rational_string(c).into()))
            .collect();
        serde_json::Value::Object(map)
    }

    /// `(bracketed monomial, coefficient)` pairs in basis order.
    pub fn terms(&self) -> Vec<(String, String)> {
        self.coeffs
            .iter()
            .map(|(&i, c)| (self.ctx.bracket_string(i), rational_string(c)))
            .collect()
    }

    /// Minimum valuation of the weight-`d` coefficients for `d = 1..=W`.
    pub fn weight_valuations(&self, v: &PValuation) -> Vec<Option<i64>> {
        let mut out = vec![None; self.ctx.weight()];
        for (&i, c) in &self.coeffs {
            let d = self.ctx.basis_weight(i);
            let val = v.of(c);
            out[d - 1] = match (out[d - 1], val) {
                (None, x) => x,
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, None) => a,
            };
        }
        out
    }
}
