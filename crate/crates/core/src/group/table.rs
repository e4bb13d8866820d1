//! Multiplication-table input for the `K` factor.

use crate::error::{Error, Result};

/// A validated finite p-group given by its Cayley table, identity at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTable {
    p: u32,
    order: usize,
    log_order: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
    s: u32,
    s1: u32,
}

impl KTable {
    /// Validates `rows` as the Cayley table of a p-group generated by `s`
    /// and `s1`. The identity is relabelled to index 0 when needed (the
    /// generator indices are translated accordingly).
    pub fn new(p: u32, rows: Vec<Vec<u32>>, s: u32, s1: u32) -> Result<Self> {
        let order = rows.len();
        if order == 0 || rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidTable("table must be square and nonempty".into()));
        }
        let mut log_order = 0u32;
        let mut acc = 1usize;
        while acc < order {
            acc = acc.saturating_mul(p as usize);
            log_order += 1;
        }
        if acc != order {
            return Err(Error::InvalidTable(format!("order {order} is not a power of {p}")));
        }
        if rows.iter().flatten().any(|&v| v as usize >= order) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        if s as usize >= order || s1 as usize >= order {
            return Err(Error::InvalidTable("generator index out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| rows[e][x] as usize == x && rows[x][e] as usize == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        // relabel: swap 0 and identity
        let relabel = |v: u32| -> u32 {
            if v as usize == identity {
                0
            } else if v == 0 {
                identity as u32
            } else {
                v
            }
        };
        let mut table = vec![0u32; order * order];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                table[relabel(i as u32) as usize * order + relabel(j as u32) as usize] = relabel(v);
            }
        }
        let (s, s1) = (relabel(s), relabel(s1));
        // Latin square
        for i in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for j in 0..order {
                let rv = table[i * order + j] as usize;
                let cv = table[j * order + i] as usize;
                if row_seen[rv] || col_seen[cv] {
                    return Err(Error::InvalidTable("not a Latin square".into()));
                }
                row_seen[rv] = true;
                col_seen[cv] = true;
            }
        }
        let mut inverse = vec![0u32; order];
        for i in 0..order {
            inverse[i] = (0..order).find(|&j| table[i * order + j] == 0).unwrap() as u32;
        }
        // generation by right multiplication from the identity
        let mut seen = vec![false; order];
        seen[0] = true;
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head] as usize;
            head += 1;
            for g in [s, s1] {
                let v = table[e * order + g as usize];
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push(v);
                }
            }
        }
        if queue.len() != order {
            return Err(Error::InvalidTable("s and s1 do not generate the table group".into()));
        }
        // Light's associativity test over the generating set {s, s1}
        for g in [s, s1] {
            for x in 0..order {
                let xg = table[x * order + g as usize] as usize;
                for y in 0..order {
                    let gy = table[g as usize * order + y] as usize;
                    if table[xg * order + y] != table[x * order + gy] {
                        return Err(Error::InvalidTable("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(Self { p, order, log_order, table, inverse, s, s1 })
    }

    /// Parses a CSV table: one row per line, comma-separated indices.
    pub fn from_csv(p: u32, text: &str, s: u32, s1: u32) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|v| v.trim().parse::<u32>().map_err(|e| Error::InvalidTable(e.to_string())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, rows, s, s1)
    }

    /// The split metabelian group `A ⋊ ⟨s⟩` of maximal class with
    /// `A = Z[ζ_p]/(1-ζ)^k` and `s` acting as multiplication by `ζ`.
    ///
    /// `|K| = p^{k+1}` and `A` is an abelian subgroup of index `p`. For `p = 2`
    /// this is the dihedral group of order `2^{k+1}`. `s1` is `1 ∈ A`.
    pub fn split_maximal_class(p: u32, k: u32) -> Result<Self> {
        if !crate::group::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameters("k must be positive".into()));
        }
        let a_order = (p as u64)
            .checked_pow(k)
            .filter(|&o| o * p as u64 <= 1 << 16)
            .ok_or_else(|| Error::InvalidParameters("table would exceed 2^16 elements".into()))?;
        let ring = CyclotomicQuotient::new(p, k);
        debug_assert_eq!(ring.order(), a_order);
        let a_order = a_order as usize;
        let order = a_order * p as usize;
        let decoded: Vec<Vec<i128>> = (0..a_order).map(|c| ring.decode(c)).collect();
        // zeta_pow[j][a] = code of ζ^j·a
        let mut zeta_pow = vec![(0..a_order as u32).collect::<Vec<_>>()];
        for j in 1..p as usize {
            let prev = &zeta_pow[j - 1];
            let next = prev.iter().map(|&c| ring.encode(&ring.mul_zeta(&decoded[c as usize]))).collect();
            zeta_pow.push(next);
        }
        let mut rows = vec![vec![0u32; order]; order];
        for x in 0..order {
            let (j1, a1) = (x / a_order, x % a_order);
            for y in 0..order {
                let (j2, a2) = (y / a_order, y % a_order);
                let za1 = zeta_pow[j2][a1] as usize;
                let sum: Vec<i128> = decoded[za1].iter().zip(&decoded[a2]).map(|(u, v)| u + v).collect();
                let a = ring.encode(&sum) as usize;
                rows[x][y] = (((j1 + j2) % p as usize) * a_order + a) as u32;
            }
        }
        let one = ring.encode(&ring.unit_vector(0));
        Self::new(p, rows, a_order as u32, one)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn log_order(&self) -> u32 {
        self.log_order
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn s1(&self) -> u32 {
        self.s1
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| self.table[i * self.order + j].to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `Z[ζ_p]/(π^k)` with `π = 1 - ζ`, elements as coordinate vectors in the
/// basis `1, ζ, …, ζ^{p-2}` reduced against a triangular basis of `π^k Z[ζ]`.
struct CyclotomicQuotient {
    dim: usize,
    basis: Vec<Vec<i128>>,
}

impl CyclotomicQuotient {
    fn new(p: u32, k: u32) -> Self {
        let dim = (p - 1) as usize;
        let mut lattice: Vec<Vec<i128>> = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut v = vec![0i128; dim];
            v[j] = 1;
            for _ in 0..k {
                v = Self::mul_pi_raw(&v);
            }
            lattice.push(v);
        }
        // upper-triangular row reduction over Z
        for c in 0..dim {
            loop {
                let pivot = (c..dim).filter(|&r| lattice[r][c] != 0).min_by_key(|&r| lattice[r][c].abs());
                let pivot = pivot.expect("lattice has full rank");
                lattice.swap(c, pivot);
                let mut clean = true;
                for r in c + 1..dim {
                    if lattice[r][c] != 0 {
                        let q = lattice[r][c] / lattice[c][c];
                        let (head, tail) = lattice.split_at_mut(r);
                        for (a, b) in tail[0].iter_mut().zip(&head[c]) {
                            *a -= q * b;
                        }
                        if tail[0][c] != 0 {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            if lattice[c][c] < 0 {
                for v in lattice[c].iter_mut() {
                    *v = -*v;
                }
            }
        }
        Self { dim, basis: lattice }
    }

    fn mul_zeta_raw(v: &[i128]) -> Vec<i128> {
        let dim = v.len();
        let top = v[dim - 1];
        let mut out = vec![0i128; dim];
        out[1..dim].copy_from_slice(&v[..dim - 1]);
        for o in out.iter_mut() {
            *o -= top;
        }
        out
    }

    fn mul_pi_raw(v: &[i128]) -> Vec<i128> {
        let z = Self::mul_zeta_raw(v);
        v.iter().zip(&z).map(|(a, b)| a - b).collect()
    }

    fn order(&self) -> u64 {
        self.basis.iter().enumerate().map(|(i, r)| r[i] as u64).product()
    }

    fn unit_vector(&self, i: usize) -> Vec<i128> {
        let mut v = vec![0i128; self.dim];
        v[i] = 1;
        v
    }

    fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let mut v = v.to_vec();
        for i in 0..self.dim {
            let q = v[i].div_euclid(self.basis[i][i]);
            if q != 0 {
                for (a, b) in v.iter_mut().zip(&self.basis[i]) {
                    *a -= q * b;
                }
            }
        }
        v
    }

    fn mul_zeta(&self, v: &[i128]) -> Vec<i128> {
        self.reduce(&Self::mul_zeta_raw(v))
    }

    fn encode(&self, v: &[i128]) -> u32 {
        let r = self.reduce(v);
        let mut code = 0u64;
        for i in 0..self.dim {
            code = code * self.basis[i][i] as u64 + r[i] as u64;
        }
        code as u32
    }

    fn decode(&self, mut code: usize) -> Vec<i128> {
        let mut v = vec![0i128; self.dim];
        for i in (0..self.dim).rev() {
            let radix = self.basis[i][i] as usize;
            v[i] = (code % radix) as i128;
            code /= radix;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32) -> Vec<Vec<u32>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    #[test]
    fn cyclic_table_validates() {
        let t = KTable::new(3, cyclic(9), 1, 1).unwrap();
        assert_eq!(t.order(), 9);
        assert_eq!(t.log_order(), 2);
        assert_eq!(t.inv(1), 8);
    }

    #[test]
    fn identity_is_relabelled() {
        // cyclic group of order 4 with labels shifted so identity is 2
        let rows: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| (i + j + 2) % 4).collect()).collect();
        let t = KTable::new(2, rows, 3, 3).unwrap();
        assert_eq!(t.mul(0, 1), 1);
        assert_eq!(t.mul(1, 0), 1);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(KTable::new(2, cyclic(6), 1, 1).is_err());
        assert!(KTable::new(3, cyclic(9), 3, 6).is_err()); // does not generate
        let mut rows = cyclic(4);
        rows[1][1] = 1;
        assert!(KTable::new(2, rows, 1, 1).is_err());
    }

    #[test]
    fn split_maximal_class_orders() {
        for (p, k) in [(2, 3), (3, 2), (3, 3), (3, 4), (5, 3)] {
            let t = KTable::split_maximal_class(p, k).unwrap();
            assert_eq!(t.order() as u64, (p as u64).pow(k + 1));
            assert_eq!(t.mul(t.s(), t.inv(t.s())), 0);
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = KTable::split_maximal_class(3, 2).unwrap();
        let back = KTable::from_csv(3, &t.to_csv(), t.s(), t.s1()).unwrap();
        assert_eq!(back, t);
    }
}
