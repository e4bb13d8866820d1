//! Dense coefficient vectors over `F_p`: 64 coefficients per word for
//! `p = 2`, one byte per coefficient otherwise.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FpVector {
    Binary { len: usize, words: Vec<u64> },
    Odd { p: u8, data: Vec<u8> },
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, a ≠ 0 mod p
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

impl FpVector {
    pub fn zero(p: u32, len: usize) -> Self {
        if p == 2 {
            FpVector::Binary { len, words: vec![0; len.div_ceil(64)] }
        } else {
            assert!(p < 256, "odd characteristic must fit in a byte");
            FpVector::Odd { p: p as u8, data: vec![0; len] }
        }
    }

    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = Self::zero(p, len);
        v.set(i, 1);
        v
    }

    pub fn from_coeffs(p: u32, coeffs: &[u32]) -> Self {
        let mut v = Self::zero(p, coeffs.len());
        for (i, &c) in coeffs.iter().enumerate() {
            v.set(i, c % p);
        }
        v
    }

    pub fn p(&self) -> u32 {
        match self {
            FpVector::Binary { .. } => 2,
            FpVector::Odd { p, .. } => *p as u32,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FpVector::Binary { len, .. } => *len,
            FpVector::Odd { data, .. } => data.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        match self {
            FpVector::Binary { words, .. } => ((words[i / 64] >> (i % 64)) & 1) as u32,
            FpVector::Odd { data, .. } => data[i] as u32,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u32) {
        match self {
            FpVector::Binary { words, .. } => {
                let bit = 1u64 << (i % 64);
                if v & 1 == 1 {
                    words[i / 64] |= bit;
                } else {
                    words[i / 64] &= !bit;
                }
            }
            FpVector::Odd { p, data } => data[i] = (v % *p as u32) as u8,
        }
    }

    /// Adds `v` to coefficient `i`.
    #[inline]
    pub fn add_at(&mut self, i: usize, v: u32) {
        match self {
            FpVector::Binary { words, .. } => words[i / 64] ^= ((v & 1) as u64) << (i % 64),
            FpVector::Odd { p, data } => data[i] = ((data[i] as u32 + v) % *p as u32) as u8,
        }
    }

    /// Packed words (binary vectors only).
    pub fn words(&self) -> &[u64] {
        match self {
            FpVector::Binary { words, .. } => words,
            FpVector::Odd { .. } => panic!("words() on an odd-characteristic vector"),
        }
    }

    pub fn words_mut(&mut self) -> &mut [u64] {
        match self {
            FpVector::Binary { words, .. } => words,
            FpVector::Odd { .. } => panic!("words_mut() on an odd-characteristic vector"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FpVector::Binary { words, .. } => words.iter().all(|&w| w == 0),
            FpVector::Odd { data, .. } => data.iter().all(|&c| c == 0),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            FpVector::Binary { words, .. } => words.iter().map(|w| w.count_ones() as usize).sum(),
            FpVector::Odd { data, .. } => data.iter().filter(|&&c| c != 0).count(),
        }
    }

    /// `(index, coefficient)` pairs of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<(usize, u32)> {
        match self {
            FpVector::Binary { words, .. } => {
                let mut out = Vec::new();
                for (wi, &w) in words.iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let b = w.trailing_zeros() as usize;
                        out.push((wi * 64 + b, 1));
                        w &= w - 1;
                    }
                }
                out
            }
            FpVector::Odd { data, .. } => {
                data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c as u32)).collect()
            }
        }
    }

    pub fn support_indices(&self) -> Vec<usize> {
        self.support().into_iter().map(|(i, _)| i).collect()
    }

    /// First nonzero coordinate at or after `from`.
    pub fn leading_from(&self, from: usize) -> Option<usize> {
        match self {
            FpVector::Binary { len, words } => {
                if from >= *len {
                    return None;
                }
                let mut wi = from / 64;
                let mut w = words[wi] & (!0u64 << (from % 64));
                loop {
                    if w != 0 {
                        return Some(wi * 64 + w.trailing_zeros() as usize);
                    }
                    wi += 1;
                    if wi >= words.len() {
                        return None;
                    }
                    w = words[wi];
                }
            }
            FpVector::Odd { data, .. } => data[from.min(data.len())..].iter().position(|&c| c != 0).map(|i| i + from),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.leading_from(0)
    }

    fn check(&self, other: &FpVector) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::AlgebraMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    /// `self += c·other`, touching only coordinates from `start` on (callers
    /// guarantee `other` vanishes before `start`).
    pub fn axpy_from(&mut self, c: u32, other: &FpVector, start: usize) {
        match (self, other) {
            (FpVector::Binary { words, .. }, FpVector::Binary { words: ow, .. }) => {
                if c & 1 == 1 {
                    for (a, b) in words[start / 64..].iter_mut().zip(&ow[start / 64..]) {
                        *a ^= *b;
                    }
                }
            }
            (FpVector::Odd { p, data }, FpVector::Odd { data: od, .. }) => {
                let p = *p as u32;
                let c = c % p;
                if c != 0 {
                    for (a, &b) in data[start..].iter_mut().zip(&od[start..]) {
                        if b != 0 {
                            *a = ((*a as u32 + c * b as u32) % p) as u8;
                        }
                    }
                }
            }
            _ => panic!("characteristic mismatch"),
        }
    }

    pub fn axpy(&mut self, c: u32, other: &FpVector) -> Result<()> {
        self.check(other)?;
        self.axpy_from(c, other, 0);
        Ok(())
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        let mut out = self.clone();
        out.axpy(1, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &FpVector) -> Result<FpVector> {
        let mut out = self.clone();
        out.axpy(self.p() - 1, other)?;
        Ok(out)
    }

    pub fn scale(&mut self, c: u32) {
        match self {
            FpVector::Binary { words, .. } => {
                if c & 1 == 0 {
                    words.iter_mut().for_each(|w| *w = 0);
                }
            }
            FpVector::Odd { p, data } => {
                let p = *p as u32;
                data.iter_mut().for_each(|a| *a = ((*a as u32 * (c % p)) % p) as u8);
            }
        }
    }

    /// Lowercase hex of the coefficient bytes: for `p = 2` the packed words
    /// in little-endian byte order (bit `j` is bit `j mod 8` of byte `j / 8`),
    /// otherwise one byte per coefficient.
    pub fn to_hex(&self) -> String {
        match self {
            FpVector::Binary { words, .. } => {
                let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
                hex::encode(bytes)
            }
            FpVector::Odd { data, .. } => hex::encode(data),
        }
    }

    pub fn from_hex(p: u32, len: usize, text: &str) -> Result<FpVector> {
        let bytes = hex::decode(text).map_err(|e| Error::InvalidParameters(e.to_string()))?;
        let mut v = Self::zero(p, len);
        match &mut v {
            FpVector::Binary { words, .. } => {
                if bytes.len() != words.len() * 8 {
                    return Err(Error::DimensionMismatch { expected: words.len() * 8, got: bytes.len() });
                }
                for (w, chunk) in words.iter_mut().zip(bytes.chunks(8)) {
                    *w = u64::from_le_bytes(chunk.try_into().unwrap());
                }
            }
            FpVector::Odd { data, .. } => {
                if bytes.len() != len {
                    return Err(Error::DimensionMismatch { expected: len, got: bytes.len() });
                }
                data.copy_from_slice(&bytes);
            }
        }
        Ok(v)
    }
}
