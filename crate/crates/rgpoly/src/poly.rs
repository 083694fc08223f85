//! Sparse multivariate Laurent polynomials over exact rationals.
//!
//! Terms live in a hash map keyed by exponent vector; zero coefficients are
//! never stored, so `is_zero` is `is_empty`. Serialization and display sort
//! terms, keeping all emitted forms byte-deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{ExpVec, MAX_VARS};
use crate::rat::Rat;

pub type TermMap = FxHashMap<ExpVec, Rat>;

/// A sparse Laurent polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: TermMap,
}

/// Add `coeff` to the entry at `key`, dropping the entry if it cancels.
#[inline]
pub(crate) fn accumulate(map: &mut TermMap, key: ExpVec, coeff: Rat) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match map.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += &coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
    }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        LaurentPoly {
            nvars,
            terms: TermMap::default(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExpVec::zeros(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The monomial `c * t^exps`.
    pub fn monomial(nvars: usize, exps: &[i32], c: Rat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExpVec::from_slice(exps), c);
        }
        p
    }

    /// The variable `t_slot` (0-based).
    pub fn var(nvars: usize, slot: usize) -> Self {
        assert!(slot < nvars);
        let mut e = ExpVec::zeros(nvars);
        e.set(slot, 1);
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (ExpVec, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            accumulate(&mut p.terms, e, c);
        }
        p
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&ExpVec, &Rat)> {
        self.terms.iter()
    }

    /// Coefficient of the monomial with exponents `exps` (zero if absent).
    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms
            .get(&ExpVec::from_slice(exps))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, key: ExpVec, coeff: Rat) {
        accumulate(&mut self.terms, key, coeff);
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn sorted_terms(&self) -> Vec<(ExpVec, Rat)> {
        let mut v: Vec<(ExpVec, Rat)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        v.sort_by_key(|t| t.0);
        v
    }

    fn check_same_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::VarMismatch(self.nvars, other.nvars))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, *e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, *e, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let (small, large) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = LaurentPoly::zero(self.nvars);
        out.terms.reserve(large.num_terms());
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                accumulate(&mut out.terms, ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, v)| (*e, v * c)).collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Multiply by the monomial `c * t^delta` in place.
    pub fn mul_monomial(&self, delta: &[i32], c: &Rat) -> Self {
        assert_eq!(delta.len(), self.nvars);
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let d = ExpVec::from_slice(delta);
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.add(&d), v * c))
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Termwise derivative in `slot`: `t^k -> k t^{k-1}`.
    pub fn diff(&self, slot: usize) -> Result<Self> {
        if slot >= self.nvars {
            return Err(Error::VarOutOfRange(slot, self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(slot);
            if k == 0 {
                continue;
            }
            let mut en = *e;
            en.set(slot, k - 1);
            // Exponent k with |k| <= i16 bounds: k * c stays exact.
            out.terms.insert(en, c * &Rat::from_int(k as i64));
        }
        Ok(out)
    }

    /// Termwise antiderivative in `slot`: `t^k -> t^{k+1}/(k+1)`, constant
    /// of integration zero. Fails with `LogTerm` if any `t^-1` coefficient
    /// is nonzero.
    pub fn antiderivative(&self, slot: usize) -> Result<Self> {
        if slot >= self.nvars {
            return Err(Error::VarOutOfRange(slot, self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(slot);
            if k == -1 {
                return Err(Error::LogTerm { var: slot });
            }
            let mut en = *e;
            en.set(slot, k + 1);
            out.terms
                .insert(en, c / &Rat::from_int((k + 1) as i64));
        }
        Ok(out)
    }

    /// Substitute `value` for variable `slot`; the result lives in the
    /// remaining `nvars - 1` variables.
    pub fn eval_partial(&self, slot: usize, value: &Rat) -> Result<Self> {
        if slot >= self.nvars {
            return Err(Error::VarOutOfRange(slot, self.nvars));
        }
        let mut powers: FxHashMap<i32, Rat> = FxHashMap::default();
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let k = e.get(slot);
            if k < 0 && value.is_zero() {
                return Err(Error::Pole { var: slot });
            }
            let vk = powers
                .entry(k)
                .or_insert_with(|| value.pow_i(k))
                .clone();
            accumulate(&mut out.terms, e.removed(slot), c * &vk);
        }
        Ok(out)
    }

    /// Full evaluation at a point.
    pub fn eval_all(&self, values: &[Rat]) -> Result<Rat> {
        if values.len() != self.nvars {
            return Err(Error::VarMismatch(values.len(), self.nvars));
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, v) in values.iter().enumerate() {
                let k = e.get(i);
                if k != 0 {
                    if v.is_zero() && k < 0 {
                        return Err(Error::Pole { var: i });
                    }
                    m = &m * &v.pow_i(k);
                }
            }
            acc += &m;
        }
        Ok(acc)
    }

    /// Move variables to new slots. `slot_map[i]` is the destination of the
    /// current slot `i`; the map must be injective into `0..new_nvars`.
    pub fn relabeled(&self, slot_map: &[usize], new_nvars: usize) -> Result<Self> {
        if slot_map.len() != self.nvars {
            return Err(Error::VarMismatch(slot_map.len(), self.nvars));
        }
        ExpVec::check_nvars(new_nvars.max(1))?;
        let mut seen = [false; MAX_VARS];
        for &dst in slot_map {
            if dst >= new_nvars {
                return Err(Error::VarOutOfRange(dst, new_nvars));
            }
            if seen[dst] {
                return Err(Error::NonInjective);
            }
            seen[dst] = true;
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.relabeled(slot_map, new_nvars), c.clone()))
            .collect();
        Ok(LaurentPoly {
            nvars: new_nvars,
            terms,
        })
    }

    /// All exponents negated: the image under `t_j -> 1/t_j` for every slot.
    pub fn inverted_vars(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.negated(), c.clone()))
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Exact quotient `(A(x) - A(y)) / (x^2 - y^2)` for `A` even in `x`
    /// and independent of `y`; here `A(y)` is `A` with the `x` dependence
    /// re-expressed in slot `y`.
    ///
    /// Computed per term via the geometric-sum identity
    /// `(x^{2a} - y^{2a})/(x^2 - y^2) = sum_{k=0}^{a-1} x^{2k} y^{2(a-1-k)}`
    /// and its negative-exponent analogue, never by trial division.
    pub fn divided_difference_even(&self, x: usize, y: usize) -> Result<Self> {
        if x >= self.nvars {
            return Err(Error::VarOutOfRange(x, self.nvars));
        }
        if y >= self.nvars || y == x {
            return Err(Error::VarOutOfRange(y, self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let kx = e.get(x);
            if kx % 2 != 0 {
                return Err(Error::OddExponent { var: x, exp: kx });
            }
            if e.get(y) != 0 {
                return Err(Error::Precondition(format!(
                    "divided difference: term carries exponent {} in target slot {}",
                    e.get(y),
                    y
                )));
            }
            let a = kx / 2;
            if a == 0 {
                continue;
            }
            if a > 0 {
                for k in 0..a {
                    let mut en = *e;
                    en.set(x, 2 * k);
                    en.set(y, 2 * (a - 1 - k));
                    accumulate(&mut out.terms, en, c.clone());
                }
            } else {
                let b = -a;
                for k in 0..b {
                    let mut en = *e;
                    en.set(x, 2 * (k - b));
                    en.set(y, -2 * (k + 1));
                    accumulate(&mut out.terms, en, -c);
                }
            }
        }
        Ok(out)
    }

    /// Exact division by `t_i + c` for a nonzero constant `c`. Fails with
    /// `NonLaurent` if the division leaves a remainder.
    pub fn div_exact_linear(&self, i: usize, c: &Rat) -> Result<Self> {
        assert!(i < self.nvars && !c.is_zero());
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut layers: std::collections::BTreeMap<i32, TermMap> = Default::default();
        for (e, coeff) in &self.terms {
            let k = e.get(i);
            let mut en = *e;
            en.set(i, 0);
            layers.entry(k).or_default().insert(en, coeff.clone());
        }
        let hi = *layers.keys().next_back().unwrap();
        let lo = *layers.keys().next().unwrap();
        // S = (t_i + c) Q  <=>  c_k = q_{k-1} + c q_k, descending in k.
        let mut q_cur: TermMap = TermMap::default();
        let mut out = Self::zero(self.nvars);
        for k in (lo..=hi).rev() {
            let mut next: TermMap = layers.remove(&k).unwrap_or_default();
            for (e, v) in &q_cur {
                accumulate(&mut next, *e, -&(v * c));
            }
            for (e, v) in &next {
                let mut ei = *e;
                ei.set(i, k - 1);
                out.terms.insert(ei, v.clone());
            }
            q_cur = next;
        }
        if !q_cur.is_empty() {
            return Err(Error::NonLaurent(format!("t_{} + {}", i + 1, c)));
        }
        Ok(out)
    }

    /// Exact division by the binomial `t_i + t_j` (`i != j`). Fails with
    /// `NonLaurent` if the division leaves a remainder.
    pub fn div_exact_binomial(&self, i: usize, j: usize) -> Result<Self> {
        assert!(i < self.nvars && j < self.nvars && i != j);
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Group coefficients by the exponent of t_i.
        let mut layers: std::collections::BTreeMap<i32, TermMap> = Default::default();
        for (e, c) in &self.terms {
            let k = e.get(i);
            let mut en = *e;
            en.set(i, 0);
            layers.entry(k).or_default().insert(en, c.clone());
        }
        let hi = *layers.keys().next_back().unwrap();
        let lo = *layers.keys().next().unwrap();
        // S = (t_i + t_j) Q  <=>  c_k = q_{k-1} + t_j q_k, descending in k.
        let mut q_cur: TermMap = TermMap::default(); // q_hi = 0
        let mut out = Self::zero(self.nvars);
        for k in (lo..=hi).rev() {
            let mut next: TermMap = layers.remove(&k).unwrap_or_default();
            for (e, c) in &q_cur {
                let mut ej = *e;
                ej.bump(j, 1);
                accumulate(&mut next, ej, -c);
            }
            // next is q_{k-1}.
            for (e, c) in &next {
                let mut ei = *e;
                ei.set(i, k - 1);
                out.terms.insert(ei, c.clone());
            }
            q_cur = next;
        }
        // Below the lowest layer the recurrence must close: q_{lo-1} == 0.
        if !q_cur.is_empty() {
            // Roll back the spurious bottom layer before reporting.
            return Err(Error::NonLaurent(format!("t_{} + t_{}", i + 1, j + 1)));
        }
        Ok(out)
    }

    pub fn max_total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    pub fn min_total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.total_degree()).min()
    }

    /// The homogeneous part of maximal total degree.
    pub fn top_homogeneous(&self) -> Self {
        match self.max_total_degree() {
            None => self.clone(),
            Some(d) => {
                let terms = self
                    .terms
                    .iter()
                    .filter(|(e, _)| e.total_degree() == d)
                    .map(|(e, c)| (*e, c.clone()))
                    .collect();
                LaurentPoly {
                    nvars: self.nvars,
                    terms,
                }
            }
        }
    }

    /// Does permuting the variable slots by `perm` fix the polynomial?
    pub fn is_invariant_under(&self, perm: &[usize]) -> bool {
        debug_assert_eq!(perm.len(), self.nvars);
        self.terms
            .iter()
            .all(|(e, c)| self.terms.get(&e.permuted(perm)) == Some(c))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable-count mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable-count mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable-count mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scaled(&Rat::from_int(-1))
    }
}

// ---- Serialization ----

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl LaurentPoly {
    /// Canonical JSON: terms in ascending lexicographic exponent order,
    /// coefficients as `"num/den"` strings in lowest terms.
    pub fn to_canonical_json(&self) -> String {
        let terms = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| TermJson {
                exp: e.to_vec(),
                coeff: c.to_frac_string(),
            })
            .collect();
        serde_json::to_string(&PolyJson {
            nvars: self.nvars,
            terms,
        })
        .expect("serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: PolyJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        ExpVec::check_nvars(parsed.nvars)?;
        let mut p = Self::zero(parsed.nvars);
        for t in parsed.terms {
            if t.exp.len() != parsed.nvars {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} in a {}-variable polynomial",
                    t.exp.len(),
                    parsed.nvars
                )));
            }
            for &k in &t.exp {
                if k < i16::MIN as i32 || k > i16::MAX as i32 {
                    return Err(Error::Parse(format!("exponent {k} out of range")));
                }
            }
            let c: Rat = t.coeff.parse()?;
            accumulate(&mut p.terms, ExpVec::from_slice(&t.exp), c);
        }
        Ok(p)
    }

    /// Human-readable form, highest total degree first.
    fn render(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = self.sorted_terms();
        terms.sort_by(|a, b| {
            b.0.total_degree()
                .cmp(&a.0.total_degree())
                .then_with(|| b.0.cmp(&a.0))
        });
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|k| k == 0);
            let coeff_str = if latex && !mag.is_integer() {
                let s = mag.to_frac_string();
                let (n, d) = s.split_once('/').unwrap();
                format!("\\frac{{{n}}}{{{d}}}")
            } else {
                format!("{mag}")
            };
            if is_const || !mag.is_one() {
                write!(f, "{coeff_str}")?;
            }
            let mut first_var = is_const || !mag.is_one();
            for (i, k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if latex {
                    if first_var {
                        write!(f, " ")?;
                    }
                    let name = if self.nvars == 1 {
                        "t".to_string()
                    } else {
                        format!("t_{{{}}}", i + 1)
                    };
                    if k == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{{{k}}}")?;
                    }
                } else {
                    if first_var {
                        write!(f, "*")?;
                    }
                    if k == 1 {
                        write!(f, "t{}", i + 1)?;
                    } else {
                        write!(f, "t{}^{}", i + 1, k)?;
                    }
                }
                first_var = true;
            }
        }
        Ok(())
    }

    pub fn to_latex(&self) -> String {
        struct L<'a>(&'a LaurentPoly);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.render(f, true)
            }
        }
        format!("{}", L(self))
    }

    /// Rows of `k_1 .. k_n <tab> num/den`, ascending lexicographic order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.sorted_terms() {
            let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            out.push_str(&exps.join("\t"));
            out.push('\t');
            out.push_str(&c.to_frac_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, false)
    }
}
