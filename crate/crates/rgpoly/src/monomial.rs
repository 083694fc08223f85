//! Exponent vectors for sparse Laurent monomials.
//!
//! `ExpVec` is a fixed-capacity vector of signed exponents, one slot per
//! variable. Slots at or beyond `len` are always zero, so derived equality
//! and lexicographic comparison over the full array agree with the
//! slice view.

use crate::error::{Error, Result};
use std::hash::{Hash, Hasher};

/// Hard cap on the number of variables of any polynomial in this crate.
/// Keeps exponent vectors inline (no heap) in every map entry.
pub const MAX_VARS: usize = 12;

/// Exponents of one Laurent monomial: `t_0^{e_0} ... t_{len-1}^{e_{len-1}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpVec {
    e: [i16; MAX_VARS],
    len: u8,
}

impl ExpVec {
    pub fn zeros(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        ExpVec {
            e: [0; MAX_VARS],
            len: nvars as u8,
        }
    }

    pub fn check_nvars(nvars: usize) -> Result<()> {
        if nvars == 0 || nvars > MAX_VARS {
            Err(Error::TooManyVars(nvars, MAX_VARS))
        } else {
            Ok(())
        }
    }

    pub fn from_slice(exps: &[i32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut v = ExpVec::zeros(exps.len());
        for (i, &k) in exps.iter().enumerate() {
            v.set(i, k);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> i32 {
        debug_assert!(i < self.len());
        self.e[i] as i32
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: i32) {
        debug_assert!(i < self.len());
        debug_assert!(k >= i16::MIN as i32 && k <= i16::MAX as i32);
        self.e[i] = k as i16;
    }

    #[inline]
    pub fn bump(&mut self, i: usize, dk: i32) {
        self.set(i, self.get(i) + dk);
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> + '_ {
        self.e[..self.len()].iter().map(|&k| k as i32)
    }

    pub fn to_vec(&self) -> Vec<i32> {
        self.iter().collect()
    }

    #[inline]
    pub fn total_degree(&self) -> i32 {
        self.e[..self.len()].iter().map(|&k| k as i32).sum()
    }

    /// Componentwise sum: the exponent vector of a monomial product.
    #[inline]
    pub fn add(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.len, other.len);
        let mut out = *self;
        for i in 0..self.len() {
            out.e[i] += other.e[i];
        }
        out
    }

    /// All exponents negated: the monomial under `t -> 1/t` in every slot.
    pub fn negated(&self) -> ExpVec {
        let mut out = *self;
        for i in 0..self.len() {
            out.e[i] = -out.e[i];
        }
        out
    }

    /// Move exponents to new slots: `slot_map[i]` is the destination of
    /// slot `i`. Unmapped destination slots stay zero.
    pub fn relabeled(&self, slot_map: &[usize], new_nvars: usize) -> ExpVec {
        let mut out = ExpVec::zeros(new_nvars);
        for (&exp, &dst) in self.e[..self.len()].iter().zip(slot_map) {
            out.e[dst] = exp;
        }
        out
    }

    /// Apply a permutation of this vector's own slots.
    pub fn permuted(&self, perm: &[usize]) -> ExpVec {
        self.relabeled(perm, self.len())
    }

    /// Drop one slot, shifting the tail down.
    pub fn removed(&self, slot: usize) -> ExpVec {
        debug_assert!(slot < self.len());
        let mut out = ExpVec::zeros(self.len() - 1);
        let mut j = 0;
        for i in 0..self.len() {
            if i != slot {
                out.e[j] = self.e[i];
                j += 1;
            }
        }
        out
    }
}

impl Hash for ExpVec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Pack the 12 i16 slots into three u64 words; cheaper than hashing
        // each element and consistent with derived equality because slots
        // beyond `len` are zero.
        let mut w = [0u64; 3];
        for i in 0..MAX_VARS {
            w[i / 4] |= (self.e[i] as u16 as u64) << (16 * (i % 4));
        }
        state.write_u64(w[0]);
        state.write_u64(w[1]);
        state.write_u64(w[2] | (self.len as u64) << 48);
    }
}
