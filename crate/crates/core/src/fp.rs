//! Linear algebra over a prime field `𝔽_p` with small `p`.

/// Multiplicative inverse of a non-zero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// `a + c·b` in place.
pub fn axpy(a: &mut [u32], c: u32, b: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x + c * y) % p;
    }
}

/// A subspace of `𝔽_p^n` kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    n: usize,
    /// Rows sorted by pivot; each pivot entry is 1 and its column is zero elsewhere.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace {
            p,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn whole(p: u32, n: usize) -> Self {
        let mut s = Self::zero(p, n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            s.insert(&e);
        }
        s
    }

    pub fn span<'a>(p: u32, n: usize, vs: impl IntoIterator<Item = &'a Vec<u32>>) -> Self {
        let mut s = Self::zero(p, n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduces `v` modulo the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv];
            if c != 0 {
                axpy(&mut w, self.p - c, row, self.p);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n, "vector length does not match the ambient space");
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(w[piv], self.p);
        for x in w.iter_mut() {
            *x = (*x * s) % self.p;
        }
        for row in &mut self.rows {
            let c = row[piv];
            if c != 0 {
                axpy(row, self.p - c, &w, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is outside.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&q| v[q] % self.p).collect();
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &c) in self.rows.iter().zip(&coords) {
            axpy(&mut w, (self.p - c) % self.p, row, self.p);
        }
        is_zero(&w).then_some(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}
