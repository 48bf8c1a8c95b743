//! Exact dense linear algebra over the rationals.
//!
//! Matrices are plain `Vec<Vec<Rational>>` in row-major order. Ranks go
//! through fraction-free (Bareiss) elimination on integer rows so that
//! intermediate entries stay bounded by minors of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut c = zeros(n, m);
    for i in 0..n {
        for (l, brow) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !brow[j].is_zero() {
                    c[i][j] += &a[i][l] * &brow[j];
                }
            }
        }
    }
    c
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_scale(a: &Matrix, c: &Rational) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{x : m x = 0}`, one vector per free column,
/// in increasing order of the free column.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction (first nonzero entry keeps its sign).
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Rank of integer rows by fraction-free Gaussian elimination.
pub fn rank_bareiss(mut rows: Vec<Vec<BigInt>>) -> usize {
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let cols = rows[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c..cols {
                let v = &piv * &row[j] - &f * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Rank of rational rows (denominators cleared row by row, then Bareiss).
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rank_bareiss(rows.iter().map(|r| primitive_integer(r)).collect())
}

/// Incrementally maintained reduced echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduce `v` against the current basis.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.cols);
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Whether `v` lies in the current span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Insert `v`; returns true when it raised the rank.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Characteristic polynomial `det(t I - m)`, coefficients from the constant
/// term up, via the Faddeev-LeVerrier recursion.
pub fn charpoly(m: &Matrix) -> Vec<Rational> {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / Rational::from_integer(BigInt::from(k as i64));
    }
    coeffs
}

/// Exact division of polynomials (coefficients constant term first).
/// Returns `None` when the remainder is nonzero.
pub fn poly_div_exact(num: &[Rational], den: &[Rational]) -> Option<Vec<Rational>> {
    let dn = den.iter().rposition(|x| !x.is_zero())?;
    let mut rem: Vec<Rational> = num.to_vec();
    let nn = match rem.iter().rposition(|x| !x.is_zero()) {
        Some(d) => d,
        None => return Some(vec![Rational::zero()]),
    };
    if nn < dn {
        return None;
    }
    let mut quot = vec![Rational::zero(); nn - dn + 1];
    for i in (0..=nn - dn).rev() {
        let c = &rem[i + dn] / &den[dn];
        if !c.is_zero() {
            for j in 0..=dn {
                rem[i + j] -= &c * &den[j];
            }
        }
        quot[i] = c;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel_agree() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&mat_vec(&a, &k[0])));
    }

    #[test]
    fn echelon_tracks_rank() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![qi(1), qi(1), qi(0)]));
        assert!(!e.insert(vec![qi(2), qi(2), qi(0)]));
        assert!(e.insert(vec![qi(0), qi(1), qi(1)]));
        assert!(e.contains(&[qi(1), qi(2), qi(1)]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn charpoly_of_rotation_generator() {
        // [[0,-1],[1,0]] has characteristic polynomial t^2 + 1
        let u = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(charpoly(&u), vec![qi(1), qi(0), qi(1)]);
    }

    #[test]
    fn bareiss_matches_rref() {
        let a = m(&[&[2, -1, 0, 3], &[4, -2, 1, 1], &[6, -3, 1, 4], &[0, 0, 5, 5]]);
        let mut b = a.clone();
        assert_eq!(rank(&a), rref(&mut b).len());
    }
}
