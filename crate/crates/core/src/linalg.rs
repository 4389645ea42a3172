//! Small dense linear algebra over F_p and modular-arithmetic helpers.
//!
//! Matrices here are at most n×n for the extension degree n (or 2n×N for
//! the code generator), so plain Gaussian elimination with u64 entries is
//! entirely adequate.

/// A dense row-major matrix over F_p. Entries are always reduced mod p.
pub(crate) struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
    pub p: u64,
}

impl ModMatrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        ModMatrix { rows, cols, data: vec![0; rows * cols], p }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    /// Rank by forward elimination. Destroys the matrix contents.
    pub fn rank(&mut self) -> usize {
        let p = self.p;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot_row = match (rank..self.rows).find(|&r| self.at(r, col) != 0) {
                Some(r) => r,
                None => continue,
            };
            self.swap_rows(rank, pivot_row);
            let inv = mod_inv(self.at(rank, col), p);
            for r in rank + 1..self.rows {
                let f = self.at(r, col);
                if f == 0 {
                    continue;
                }
                let scale = f * inv % p;
                for c in col..self.cols {
                    let v = (self.at(r, c) + (p - self.at(rank, c)) * scale) % p;
                    self.data[r * self.cols + c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<ModMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        // Augmented [self | I], reduce to [I | inverse].
        let mut aug = ModMatrix::zero(n, 2 * n, p);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, n + r, 1);
        }
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| aug.at(r, col) != 0)?;
            aug.swap_rows(col, pivot_row);
            let inv = mod_inv(aug.at(col, col), p);
            for c in 0..2 * n {
                let v = aug.at(col, c) * inv % p;
                aug.data[col * aug.cols + c] = v;
            }
            for r in 0..n {
                if r == col || aug.at(r, col) == 0 {
                    continue;
                }
                let f = aug.at(r, col);
                for c in 0..2 * n {
                    let v = (aug.at(r, c) + (p - aug.at(col, c)) * f % p) % p;
                    aug.data[r * aug.cols + c] = v;
                }
            }
        }
        let mut out = ModMatrix::zero(n, n, p);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.at(r, n + c));
            }
        }
        Some(out)
    }

    pub fn mat_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.p;
        (0..self.rows)
            .map(|r| {
                let mut acc: u128 = 0;
                for c in 0..self.cols {
                    acc += (self.at(r, c) as u128) * (v[c] as u128);
                }
                (acc % p as u128) as u64
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// b^e mod m by square-and-multiply; m need not be prime.
pub(crate) fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let m = m as u128;
    let mut base = b as u128 % m;
    let mut acc: u128 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of a mod prime p (Fermat).
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero mod {p}");
    mod_pow(a, p - 2, p)
}

/// Inverse of a mod m for gcd(a, m) = 1, any modulus (extended Euclid).
pub(crate) fn mod_inv_coprime(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_singular_and_full_matrices() {
        let mut m = ModMatrix::zero(2, 2, 5);
        m.set(0, 0, 1);
        m.set(0, 1, 2);
        m.set(1, 0, 2);
        m.set(1, 1, 4); // second row = 2 × first
        assert_eq!(m.rank(), 1);

        let mut id = ModMatrix::zero(3, 3, 7);
        for i in 0..3 {
            id.set(i, i, 1);
        }
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn inverse_round_trips() {
        let p = 11;
        let mut m = ModMatrix::zero(3, 3, p);
        let entries = [2, 3, 1, 0, 1, 4, 5, 6, 7];
        for (i, &v) in entries.iter().enumerate() {
            m.set(i / 3, i % 3, v);
        }
        let inv = m.inverse().expect("matrix should be invertible");
        // m · inv = I, checked column by column.
        for c in 0..3 {
            let col: Vec<u64> = (0..3).map(|r| inv.at(r, c)).collect();
            let prod = m.mat_vec(&col);
            for (r, &v) in prod.iter().enumerate() {
                assert_eq!(v, u64::from(r == c), "entry ({r},{c}) of m·m⁻¹");
            }
        }
    }

    #[test]
    fn mod_inv_matches_definition() {
        for a in 1..13u64 {
            assert_eq!(a * mod_inv(a, 13) % 13, 1);
        }
        assert_eq!(mod_inv_coprime(5, 12), Some(5)); // 25 ≡ 1 mod 12
        assert_eq!(mod_inv_coprime(4, 12), None);
    }
}
