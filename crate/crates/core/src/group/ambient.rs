//! The ambient product `P = K × C × D` and its normal-form arithmetic.
//!
//! Elements are stored as a triple `(kappa, a, b)`: `kappa` encodes the
//! `K`-coordinate, `a` is the exponent of `c` and `b` the exponent of `d`.
//! For the 2-group variants `kappa = ε·2^k + i` encodes `t^ε r^i`; for the
//! Heisenberg variant `kappa = a₁p² + b₁p + c₁`; for table input it is the row
//! index of the table (identity at 0).

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::table::KTable;
use crate::error::{Error, Result};

pub const DEFAULT_GUARD: usize = 1 << 22;

static NEXT_AMBIENT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Dihedral,
    Semidihedral,
    Quaternion,
    Heisenberg,
    Table,
}

impl Variant {
    pub fn is_two_group(self) -> bool {
        matches!(self, Variant::Dihedral | Variant::Semidihedral | Variant::Quaternion)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Dihedral => "dihedral",
            Variant::Semidihedral => "semidihedral",
            Variant::Quaternion => "quaternion",
            Variant::Heisenberg => "heisenberg",
            Variant::Table => "table",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dihedral" => Ok(Variant::Dihedral),
            "semidihedral" => Ok(Variant::Semidihedral),
            "quaternion" => Ok(Variant::Quaternion),
            "heisenberg" => Ok(Variant::Heisenberg),
            "table" => Ok(Variant::Table),
            other => Err(Error::InvalidParameters(format!("unknown variant `{other}`"))),
        }
    }
}

/// An element of the ambient product in normal form.
///
/// The derived `Ord` is the canonical order: lexicographic on
/// `(kappa, a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub kappa: u32,
    pub a: u32,
    pub b: u32,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { kappa: 0, a: 0, b: 0 };
}

#[derive(Clone, Debug)]
enum KFactor {
    /// `⟨t, r⟩` with `|r| = 2^k`, `r^t = r^sigma`, and `t² = r^carry` (carry 0
    /// except for the generalized quaternion group).
    TwoGroup { modulus: u32, sigma: u32, carry: u32 },
    Heisenberg { p: u32 },
    Table(Arc<KTable>),
}

/// Parameters and arithmetic of `P = K × C × D`.
#[derive(Clone, Debug)]
pub struct AmbientDescriptor {
    id: u64,
    p: u32,
    variant: Variant,
    k: u32,
    n: u32,
    m: u32,
    k_order: u32,
    c_order: u32,
    d_order: u32,
    factor: KFactor,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn checked_pow(p: u32, e: u32) -> Option<u64> {
    (p as u64).checked_pow(e)
}

impl AmbientDescriptor {
    /// Builds the ambient for one of the formula-defined variants.
    pub fn new(p: u32, variant: Variant, k: u32, n: u32, m: u32) -> Result<Self> {
        Self::with_guard(p, variant, k, n, m, DEFAULT_GUARD)
    }

    pub fn with_guard(p: u32, variant: Variant, k: u32, n: u32, m: u32, guard: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factor = match variant {
            Variant::Dihedral | Variant::Semidihedral | Variant::Quaternion => {
                if p != 2 {
                    return Err(Error::InvalidParameters(format!("variant {variant} requires p = 2")));
                }
                let min_k = match variant {
                    Variant::Dihedral => 1,
                    Variant::Quaternion => 2,
                    _ => 3,
                };
                if k < min_k || k > 24 {
                    return Err(Error::InvalidParameters(format!("variant {variant} requires {min_k} <= k <= 24")));
                }
                let modulus = 1u32 << k;
                let half = 1u32 << (k - 1);
                let (sigma, carry) = match variant {
                    Variant::Dihedral => (modulus - 1, 0),
                    Variant::Semidihedral => (half - 1, 0),
                    _ => (modulus - 1, half),
                };
                KFactor::TwoGroup { modulus, sigma, carry }
            }
            Variant::Heisenberg => {
                if p == 2 {
                    return Err(Error::InvalidParameters("heisenberg requires an odd prime".into()));
                }
                if k != 1 {
                    return Err(Error::InvalidParameters("heisenberg has |K| = p^3; use k = 1".into()));
                }
                KFactor::Heisenberg { p }
            }
            Variant::Table => {
                return Err(Error::InvalidParameters("table variant needs a multiplication table".into()));
            }
        };
        let k_order = match &factor {
            KFactor::TwoGroup { modulus, .. } => 2 * *modulus as u64,
            KFactor::Heisenberg { p } => (*p as u64).pow(3),
            KFactor::Table(t) => t.order() as u64,
        };
        Self::assemble(p, variant, k, n, m, k_order, factor, guard)
    }

    /// Builds an ambient whose `K` is given by a validated multiplication table.
    pub fn with_table(table: Arc<KTable>, n: u32, m: u32, guard: usize) -> Result<Self> {
        let p = table.p();
        let k_order = table.order() as u64;
        let k = table.log_order();
        Self::assemble(p, Variant::Table, k, n, m, k_order, KFactor::Table(table), guard)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        p: u32,
        variant: Variant,
        k: u32,
        n: u32,
        m: u32,
        k_order: u64,
        factor: KFactor,
        guard: usize,
    ) -> Result<Self> {
        let c_order = checked_pow(p, n).ok_or(Error::GuardExceeded { guard })?;
        let d_order = checked_pow(p, m).ok_or(Error::GuardExceeded { guard })?;
        let total = k_order
            .checked_mul(c_order)
            .and_then(|v| v.checked_mul(d_order))
            .ok_or(Error::GuardExceeded { guard })?;
        if total > guard as u64 {
            return Err(Error::GuardExceeded { guard });
        }
        Ok(Self {
            id: NEXT_AMBIENT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            variant,
            k,
            n,
            m,
            k_order: k_order as u32,
            c_order: c_order as u32,
            d_order: d_order as u32,
            factor,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn variant(&self) -> Variant {
        self.variant
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn k_order(&self) -> u64 {
        self.k_order as u64
    }
    pub fn c_order(&self) -> u64 {
        self.c_order as u64
    }
    pub fn d_order(&self) -> u64 {
        self.d_order as u64
    }

    /// `|P| = |K|·|C|·|D|`.
    pub fn order(&self) -> u64 {
        self.k_order() * self.c_order() * self.d_order()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.kappa < self.k_order && g.a < self.c_order && g.b < self.d_order
    }

    /// Injective, order-preserving integer key.
    pub fn key(&self, g: &GroupElement) -> u64 {
        (g.kappa as u64 * self.c_order as u64 + g.a as u64) * self.d_order as u64 + g.b as u64
    }

    pub fn from_key(&self, key: u64) -> GroupElement {
        let b = (key % self.d_order as u64) as u32;
        let rest = key / self.d_order as u64;
        GroupElement { kappa: (rest / self.c_order as u64) as u32, a: (rest % self.c_order as u64) as u32, b }
    }

    pub fn k_element(&self, kappa: u32) -> GroupElement {
        GroupElement { kappa, a: 0, b: 0 }
    }

    /// `t^eps r^i` for the 2-group variants.
    pub fn two_element(&self, eps: u32, i: u32) -> GroupElement {
        match self.factor {
            KFactor::TwoGroup { modulus, .. } => self.k_element((eps & 1) * modulus + i % modulus),
            _ => panic!("two_element on a non-2-group ambient"),
        }
    }

    /// Heisenberg triple `(a₁, b₁, c₁)`.
    pub fn heisenberg_element(&self, a1: u32, b1: u32, c1: u32) -> GroupElement {
        let p = self.p;
        self.k_element(((a1 % p) * p + b1 % p) * p + c1 % p)
    }

    pub fn c(&self) -> GroupElement {
        GroupElement { kappa: 0, a: 1 % self.c_order, b: 0 }
    }

    pub fn d(&self) -> GroupElement {
        GroupElement { kappa: 0, a: 0, b: 1 % self.d_order }
    }

    pub fn t(&self) -> GroupElement {
        self.two_element(1, 0)
    }

    pub fn r(&self) -> GroupElement {
        self.two_element(0, 1)
    }

    /// The first generator `s` of `K`: `t⁻¹r` for the 2-group variants (so that
    /// `r = ts`), `(1,0,0)` for Heisenberg, and the declared `s` of a table.
    pub fn s(&self) -> GroupElement {
        match &self.factor {
            KFactor::TwoGroup { .. } => {
                let t_inv = self.inv(&self.t());
                self.mul(&t_inv, &self.r())
            }
            KFactor::Heisenberg { .. } => self.heisenberg_element(1, 0, 0),
            KFactor::Table(t) => self.k_element(t.s()),
        }
    }

    /// The second generator `s₁` of `K` for the odd-p constructions.
    pub fn s1(&self) -> GroupElement {
        match &self.factor {
            KFactor::TwoGroup { .. } => self.t(),
            KFactor::Heisenberg { .. } => self.heisenberg_element(0, 1, 0),
            KFactor::Table(t) => self.k_element(t.s1()),
        }
    }

    #[inline]
    fn k_mul(&self, x: u32, y: u32) -> u32 {
        match &self.factor {
            KFactor::TwoGroup { modulus, sigma, carry, .. } => {
                let (e1, i1) = (x / modulus, x % modulus);
                let (e2, i2) = (y / modulus, y % modulus);
                let m = *modulus as u64;
                let mut i = if e2 == 1 { (*sigma as u64 * i1 as u64) % m } else { i1 as u64 };
                i += i2 as u64;
                if e1 == 1 && e2 == 1 {
                    i += *carry as u64;
                }
                ((e1 ^ e2) * modulus) + (i % m) as u32
            }
            KFactor::Heisenberg { p } => {
                let p = *p;
                let (a1, b1, c1) = (x / (p * p), (x / p) % p, x % p);
                let (a2, b2, c2) = (y / (p * p), (y / p) % p, y % p);
                (((a1 + a2) % p) * p + (b1 + b2) % p) * p + (c1 + c2 + a1 * b2) % p
            }
            KFactor::Table(t) => t.mul(x, y),
        }
    }

    #[inline]
    fn k_inv(&self, x: u32) -> u32 {
        match &self.factor {
            KFactor::TwoGroup { modulus, sigma, carry, .. } => {
                let m = *modulus as u64;
                let (e, i) = (x / modulus, (x % modulus) as u64);
                if e == 0 {
                    ((m - i) % m) as u32
                } else {
                    // (t r^i)(t r^j) = r^{sigma·i + j + carry}
                    let j = (2 * m - (*sigma as u64 * i) % m - *carry as u64) % m;
                    modulus + j as u32
                }
            }
            KFactor::Heisenberg { p } => {
                let p = *p;
                let (a, b, c) = (x / (p * p), (x / p) % p, x % p);
                let c_inv = (a * b + p - c) % p;
                ((((p - a) % p) * p + (p - b) % p) * p) + c_inv
            }
            KFactor::Table(t) => t.inv(x),
        }
    }

    /// Normal-form product.
    #[inline]
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(g) && self.contains(h));
        GroupElement {
            kappa: self.k_mul(g.kappa, h.kappa),
            a: ((g.a as u64 + h.a as u64) % self.c_order as u64) as u32,
            b: ((g.b as u64 + h.b as u64) % self.d_order as u64) as u32,
        }
    }

    /// Product with range validation of both operands.
    pub fn try_mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        if !self.contains(g) || !self.contains(h) {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.mul(g, h))
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            kappa: self.k_inv(g.kappa),
            a: (self.c_order - g.a) % self.c_order,
            b: (self.d_order - g.b) % self.d_order,
        }
    }

    /// `g^e` by square-and-multiply.
    pub fn pow(&self, g: &GroupElement, mut e: u64) -> GroupElement {
        let mut base = *g;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents use the inverse.
    pub fn zpow(&self, g: &GroupElement, e: i64) -> GroupElement {
        if e >= 0 {
            self.pow(g, e as u64)
        } else {
            self.pow(&self.inv(g), e.unsigned_abs())
        }
    }

    /// Multiplicative order (always a power of `p`).
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let id = self.identity();
        let mut h = *g;
        let mut order = 1u64;
        while h != id {
            h = self.pow(&h, self.p as u64);
            order *= self.p as u64;
        }
        order
    }

    /// `(g^e, order(g))`.
    pub fn power_order(&self, g: &GroupElement, e: u64) -> (GroupElement, u64) {
        (self.pow(g, e), self.element_order(g))
    }

    /// `[g, h] = g⁻¹h⁻¹gh`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// `g^h = h⁻¹gh`.
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.mul(&self.mul(&self.inv(h), g), h)
    }

    /// Human-readable normal form, used in exports and reports.
    pub fn format(&self, g: &GroupElement) -> String {
        let kpart = match &self.factor {
            KFactor::TwoGroup { modulus, .. } => {
                let (e, i) = (g.kappa / modulus, g.kappa % modulus);
                format!("t^{e} r^{i}")
            }
            KFactor::Heisenberg { p } => {
                let p = *p;
                format!("({},{},{})", g.kappa / (p * p), (g.kappa / p) % p, g.kappa % p)
            }
            KFactor::Table(_) => format!("k{}", g.kappa),
        };
        format!("{kpart} c^{} d^{}", g.a, g.b)
    }
}
