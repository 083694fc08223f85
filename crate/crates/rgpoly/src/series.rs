//! Truncated multivariate power series and the boundary-variable
//! substitution `t_j = (1 + x_j)/(x_j - 1)`.
//!
//! Expanding a Laurent polynomial in `t` around `x = 0` under this
//! substitution exposes its discrete Laplace-transform coefficients: the
//! coefficient of `x^p` recovers the lattice count with perimeter `p`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::monomial::ExpVec;
use crate::poly::LaurentPoly;
use crate::rat::Rat;

/// A power series truncated at exponent `order` in each variable
/// independently. Exponents are nonnegative; zero coefficients are not
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    order: u32,
    terms: FxHashMap<ExpVec, Rat>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncatedSeries {
            nvars,
            order,
            terms: FxHashMap::default(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x^p` (zero if absent; `p` must fit in the box).
    pub fn coeff(&self, p: &[u32]) -> Rat {
        debug_assert_eq!(p.len(), self.nvars);
        debug_assert!(p.iter().all(|&k| k <= self.order));
        let exps: Vec<i32> = p.iter().map(|&k| k as i32).collect();
        self.terms
            .get(&ExpVec::from_slice(&exps))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&ExpVec, &Rat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: ExpVec, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    /// Truncated product: exponents exceeding the per-variable order are
    /// dropped.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if (0..self.nvars).any(|i| e.get(i) > self.order as i32) {
                    continue;
                }
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }
}

/// One-variable coefficient table (length `order + 1`) for the expansion of
/// `t^k` under `t = (1 + x)/(x - 1)`.
///
/// The base series is `t = -(1 + x) sum_i x^i = -1 - 2x - 2x^2 - ...`, and
/// `t^{-1}` is obtained from `t` by `x -> -x` since `t(x) t(-x) = 1`.
fn power_table(k: i32, order: u32) -> Vec<Rat> {
    let p = order as usize;
    let mut base = vec![Rat::from_int(-2); p + 1];
    base[0] = Rat::from_int(-1);
    if k < 0 {
        for (i, c) in base.iter_mut().enumerate() {
            if i % 2 == 1 {
                *c = -&*c;
            }
        }
    }
    let mut acc = vec![Rat::zero(); p + 1];
    acc[0] = Rat::one();
    for _ in 0..k.unsigned_abs() {
        let mut next = vec![Rat::zero(); p + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(p + 1 - i) {
                let prod = a * b;
                next[i + j] = &next[i + j] + &prod;
            }
        }
        acc = next;
    }
    acc
}

/// Expand a Laurent polynomial under `t_j = (1 + x_j)/(x_j - 1)` for every
/// variable, truncated at `order` in each `x_j` independently.
pub fn series_from_rational_subst(p: &LaurentPoly, order: u32) -> TruncatedSeries {
    let n = p.nvars();
    let mut tables: FxHashMap<i32, Vec<Rat>> = FxHashMap::default();
    let mut out = TruncatedSeries::zero(n, order);
    for (e, c) in p.iter_terms() {
        // Product of one-variable tables, accumulated slot by slot.
        for k in e.iter() {
            tables
                .entry(k)
                .or_insert_with(|| power_table(k, order));
        }
        let mut partial: Vec<(ExpVec, Rat)> = vec![(ExpVec::zeros(n), c.clone())];
        for (slot, k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let table = &tables[&k];
            let mut next = Vec::with_capacity(partial.len() * (order as usize + 1));
            for (key, v) in &partial {
                for (deg, tc) in table.iter().enumerate() {
                    if tc.is_zero() {
                        continue;
                    }
                    let mut nk = *key;
                    nk.set(slot, deg as i32);
                    next.push((nk, v * tc));
                }
            }
            partial = next;
        }
        for (key, v) in partial {
            out.add_term(key, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_of_t_itself() {
        // t = -1 - 2x - 2x^2 to order 2.
        let t = LaurentPoly::var(1, 0);
        let s = series_from_rational_subst(&t, 2);
        assert_eq!(s.coeff(&[0]), Rat::from_int(-1));
        assert_eq!(s.coeff(&[1]), Rat::from_int(-2));
        assert_eq!(s.coeff(&[2]), Rat::from_int(-2));
    }

    #[test]
    fn expansion_of_constant() {
        let one = LaurentPoly::one(3);
        let s = series_from_rational_subst(&one, 4);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&[0, 0, 0]), Rat::one());
    }

    #[test]
    fn inverse_is_sign_flipped() {
        // t^{-1} = -1 + 2x - 2x^2 + 2x^3 - ...
        let tinv = LaurentPoly::monomial(1, &[-1], Rat::one());
        let s = series_from_rational_subst(&tinv, 3);
        assert_eq!(s.coeff(&[0]), Rat::from_int(-1));
        assert_eq!(s.coeff(&[1]), Rat::from_int(2));
        assert_eq!(s.coeff(&[2]), Rat::from_int(-2));
        assert_eq!(s.coeff(&[3]), Rat::from_int(2));
    }

    #[test]
    fn t_times_its_inverse_expands_to_one() {
        let t = LaurentPoly::var(1, 0);
        let tinv = LaurentPoly::monomial(1, &[-1], Rat::one());
        let prod = &t * &tinv;
        let s = series_from_rational_subst(&prod, 6);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&[0]), Rat::one());
        // And the truncated product of the separate expansions agrees.
        let st = series_from_rational_subst(&t, 6);
        let si = series_from_rational_subst(&tinv, 6);
        assert_eq!(st.checked_mul(&si).unwrap(), s);
    }
}
