//! The topological recursion that determines the Poincaré polynomials
//! `F_{g,n}(t_1,...,t_n)` of the moduli orbifolds of metric ribbon graphs.
//!
//! For the two initial types `(0,3)` and `(1,1)` closed forms are built
//! directly. Every other stable type is produced by integrating an
//! assembled bracket from `-1` to `t_1`:
//!
//! * a kernel sum over the remaining boundary variables, realised through
//!   the even divided difference so that the whole computation stays inside
//!   the Laurent-polynomial ring (the rational kernel never appears),
//! * a second-derivative block that joins one lower type of two fewer
//!   boundary components, plus all stable ordered splittings of the genus
//!   and boundary labels.
//!
//! The table memoizes one canonical copy of each `F_{g,n}`; symmetry in the
//! boundary labels lets every specialised argument tuple be produced by
//! slot relabeling.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::analysis;
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::rat::Rat;

/// Is `(g,n)` in the stable range `2g - 2 + n > 0`?
pub fn is_stable(g: u32, n: u32) -> bool {
    2 * (g as i64) - 2 + (n as i64) > 0
}

/// The complexity level `2g - 2 + n` driving the induction.
pub fn euler_level(g: u32, n: u32) -> i64 {
    2 * (g as i64) - 2 + (n as i64)
}

/// A stable type: genus `g`, `n` labeled boundary components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgnKey {
    pub g: u32,
    pub n: u32,
}

impl FgnKey {
    pub fn new(g: u32, n: u32) -> Result<Self> {
        if !is_stable(g, n) {
            return Err(Error::Unstable { g, n });
        }
        Ok(FgnKey { g, n })
    }
}

/// One ordered summand of the quadratic recursion term: genus split
/// `g1 + g2` and label split `I ⊔ J` with both factors stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePartition {
    pub g1: u32,
    pub g2: u32,
    pub set_i: Vec<usize>,
    pub set_j: Vec<usize>,
}

/// All ordered splittings `(g1, I), (g2, J)` of `g` and the label set
/// `rest`, subject to `2 g1 - 1 + |I| > 0` and `2 g2 - 1 + |J| > 0`.
/// The swapped pair is a separate entry except when it coincides.
pub fn stable_partitions(g: u32, rest: &[usize]) -> Vec<StablePartition> {
    let m = rest.len();
    let mut out = Vec::new();
    for g1 in 0..=g {
        let g2 = g - g1;
        for mask in 0u32..(1 << m) {
            let mut set_i = Vec::new();
            let mut set_j = Vec::new();
            for (b, &s) in rest.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    set_i.push(s);
                } else {
                    set_j.push(s);
                }
            }
            if 2 * g1 as usize + set_i.len() >= 2 && 2 * g2 as usize + set_j.len() >= 2 {
                out.push(StablePartition { g1, g2, set_i, set_j });
            }
        }
    }
    out
}

/// The edge weight `z(t_i, t_j) = (t_i+1)(t_j+1) / (2 (t_i+t_j))` as an
/// exact numerator/denominator pair in an `nvars`-variable frame
/// (0-based slots; `i == j` gives `(t_i+1)^2 / (4 t_i)`).
pub fn z_factor(i: usize, j: usize, nvars: usize) -> (LaurentPoly, LaurentPoly) {
    let ti1 = &LaurentPoly::var(nvars, i) + &LaurentPoly::one(nvars);
    let tj1 = &LaurentPoly::var(nvars, j) + &LaurentPoly::one(nvars);
    let num = &ti1 * &tj1;
    let den = (&LaurentPoly::var(nvars, i) + &LaurentPoly::var(nvars, j))
        .scaled(&Rat::from_int(2));
    (num, den)
}

/// `F_{0,3} = -(1/16)(t_1+1)(t_2+1)(t_3+1)(1 + 1/(t_1 t_2 t_3))`.
pub fn initial_f03() -> LaurentPoly {
    let n = 3;
    let mut prod = LaurentPoly::one(n);
    for i in 0..n {
        prod = &prod * &(&LaurentPoly::var(n, i) + &LaurentPoly::one(n));
    }
    let inner = &LaurentPoly::one(n) + &LaurentPoly::monomial(n, &[-1, -1, -1], Rat::one());
    (&prod * &inner).scaled(&Rat::new(-1, 16))
}

/// `F_{1,1} = -(1/384) (t+1)^4 (t^2 - 4t + 1) / t^3`.
pub fn initial_f11() -> LaurentPoly {
    let t = LaurentPoly::var(1, 0);
    let tp1 = &t + &LaurentPoly::one(1);
    let mut p4 = LaurentPoly::one(1);
    for _ in 0..4 {
        p4 = &p4 * &tp1;
    }
    let quad = &(&(&t * &t) - &t.scaled(&Rat::from_int(4))) + &LaurentPoly::one(1);
    (&p4 * &quad).mul_monomial(&[-3], &Rat::new(-1, 384))
}

/// `(t^2-1)^3 / t^2` in slot 0 of an `nvars`-variable frame.
fn kernel_sextic(nvars: usize) -> LaurentPoly {
    let mono = |k: i32, c: i64| {
        let mut e = vec![0; nvars];
        e[0] = k;
        LaurentPoly::monomial(nvars, &e, Rat::from_int(c))
    };
    &(&(&mono(4, 1) + &mono(2, -3)) + &mono(0, 3)) + &mono(-2, -1)
}

/// `(t^2-1)^2 / t^2` in slot 0.
fn kernel_quartic(nvars: usize) -> LaurentPoly {
    let mono = |k: i32, c: i64| {
        let mut e = vec![0; nvars];
        e[0] = k;
        LaurentPoly::monomial(nvars, &e, Rat::from_int(c))
    };
    &(&mono(2, 1) + &mono(0, -2)) + &mono(-2, 1)
}

/// Memoizing engine for the recursion. The table is shared and
/// synchronized; distinct keys at the same level may be computed from
/// different threads, and exact arithmetic keeps every evaluation order
/// bit-identical.
pub struct Engine {
    table: Mutex<HashMap<FgnKey, Arc<LaurentPoly>>>,
    validate: bool,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            table: Mutex::new(HashMap::new()),
            validate: true,
        }
    }

    /// An engine that skips the structural invariant suite on cache
    /// admission. Only for benchmarks; computed values are identical.
    pub fn new_unvalidated() -> Self {
        Engine {
            table: Mutex::new(HashMap::new()),
            validate: false,
        }
    }

    pub fn cached(&self, g: u32, n: u32) -> Option<Arc<LaurentPoly>> {
        let key = FgnKey { g, n };
        self.table.lock().unwrap().get(&key).cloned()
    }

    /// Every type currently in the memo table, sorted.
    pub fn cached_keys(&self) -> Vec<(u32, u32)> {
        let mut keys: Vec<(u32, u32)> = self
            .table
            .lock()
            .unwrap()
            .keys()
            .map(|k| (k.g, k.n))
            .collect();
        keys.sort_unstable();
        keys
    }

    /// Insert an externally obtained polynomial (e.g. loaded from disk).
    /// It is subjected to the same invariant suite as a computed one.
    pub fn admit(&self, g: u32, n: u32, poly: LaurentPoly) -> Result<Arc<LaurentPoly>> {
        let key = FgnKey::new(g, n)?;
        if poly.nvars() != n as usize {
            return Err(Error::VarMismatch(poly.nvars(), n as usize));
        }
        self.check_invariants(g, n, &poly)?;
        let arc = Arc::new(poly);
        self.table
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }

    fn check_invariants(&self, g: u32, n: u32, poly: &LaurentPoly) -> Result<()> {
        if !self.validate {
            return Ok(());
        }
        let report = analysis::run_invariant_suite(g, n, poly);
        if let Some(fail) = report.first_failure() {
            return Err(Error::InvariantViolation {
                g,
                n,
                detail: format!("{}: {}", fail.check, fail.detail.clone().unwrap_or_default()),
            });
        }
        Ok(())
    }

    fn get(&self, g: u32, n: u32) -> Result<Arc<LaurentPoly>> {
        self.cached(g, n).ok_or(Error::MissingDependency { g, n })
    }

    /// The Poincaré polynomial `F_{g,n}` in `n` canonical variable slots.
    pub fn compute_f(&self, g: u32, n: u32) -> Result<Arc<LaurentPoly>> {
        let key = FgnKey::new(g, n)?;
        if let Some(p) = self.cached(g, n) {
            return Ok(p);
        }
        let poly = if (g, n) == (0, 3) {
            initial_f03()
        } else if (g, n) == (1, 1) {
            initial_f11()
        } else {
            // Dependencies first, in increasing level order.
            if n >= 2 {
                self.compute_f(g, n - 1)?;
            }
            if g >= 1 {
                self.compute_f(g - 1, n + 1)?;
            }
            let rest: Vec<usize> = (1..n as usize).collect();
            for part in stable_partitions(g, &rest) {
                self.compute_f(part.g1, part.set_i.len() as u32 + 1)?;
                self.compute_f(part.g2, part.set_j.len() as u32 + 1)?;
            }
            let integrand = self.assemble_integrand(g, n)?;
            // The bracket must be even in the integration variable; an odd
            // exponent here is a fatal internal inconsistency and would
            // surface as a LogTerm error below at exponent -1.
            let primitive = integrand.antiderivative(0)?;
            let lower = primitive.eval_partial(0, &Rat::from_int(-1))?;
            let lower_map: Vec<usize> = (1..n as usize).collect();
            let lower_embedded = lower.relabeled(&lower_map, n as usize)?;
            (&primitive - &lower_embedded).scaled(&Rat::new(-1, 16))
        };
        self.check_invariants(g, n, &poly)?;
        let arc = Arc::new(poly);
        self.table
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }

    /// The full bracket integrated by `compute_f`, in an `n`-variable frame
    /// whose slot 0 plays the role of the integration variable. All lower
    /// types must already be in the table.
    pub fn assemble_integrand(&self, g: u32, n: u32) -> Result<LaurentPoly> {
        let nv = n as usize;
        let k6 = kernel_sextic(nv);
        let k4 = kernel_quartic(nv);
        let mut bracket = LaurentPoly::zero(nv);

        if n >= 2 {
            let fm = self.get(g, n - 1)?;
            for j in 1..nv {
                // F_{g,n-1}(t, t_rest) with slot j left free.
                let mut map = Vec::with_capacity(nv - 1);
                map.push(0);
                for s in 1..nv {
                    if s != j {
                        map.push(s);
                    }
                }
                let embedded = fm.relabeled(&map, nv)?;
                let dt = embedded.diff(0)?;
                // Kernel sum entry: t_j * (A(t) - A(t_j)) / (t^2 - t_j^2)
                // with A = (t^2-1)^3/t^2 * dF.
                let a = &k6 * &dt;
                let dd = a.divided_difference_even(0, j)?;
                let mut tj = vec![0; nv];
                tj[j] = 1;
                bracket = &bracket + &dd.mul_monomial(&tj, &Rat::one());
                // Accompanying first-derivative entry.
                bracket = &bracket + &(&k4 * &dt);
            }
        }

        // Second-derivative block in a frame extended by one slot:
        // slot 0 and slot 1 are the two fresh variables, slots 2..=nv hold
        // t_2..t_n. Differentiate first, multiply, then collapse both fresh
        // slots onto slot 0.
        let ext = nv + 1;
        let mut hd = LaurentPoly::zero(ext);
        if g >= 1 {
            let fm = self.get(g - 1, n + 1)?;
            let map: Vec<usize> = (0..=nv).collect();
            let embedded = fm.relabeled(&map, ext)?;
            hd = &hd + &embedded.diff(0)?.diff(1)?;
        }
        let rest: Vec<usize> = (1..nv).collect();
        for part in stable_partitions(g, &rest) {
            let f1 = self.get(part.g1, part.set_i.len() as u32 + 1)?;
            let f2 = self.get(part.g2, part.set_j.len() as u32 + 1)?;
            let mut map1 = vec![0usize];
            map1.extend(part.set_i.iter().map(|&s| s + 1));
            let mut map2 = vec![1usize];
            map2.extend(part.set_j.iter().map(|&s| s + 1));
            let d1 = f1.relabeled(&map1, ext)?.diff(0)?;
            let d2 = f2.relabeled(&map2, ext)?.diff(1)?;
            hd = &hd + &(&d1 * &d2);
        }
        let collapsed = collapse_pair(&hd, nv);
        bracket = &bracket + &(&k6 * &collapsed).scaled(&Rat::new(1, 2));
        Ok(bracket)
    }

    /// Stable keys with `2g - 2 + n <= max_level`, in dependency order.
    pub fn keys_up_to_level(max_level: i64) -> Vec<(u32, u32)> {
        let mut keys = Vec::new();
        for level in 1..=max_level {
            for g in 0..=((level + 2) / 2) as u32 {
                let n = level + 2 - 2 * g as i64;
                if n >= 1 && is_stable(g, n as u32) {
                    keys.push((g, n as u32));
                }
            }
        }
        keys
    }
}

/// Sum the exponents of slots 0 and 1 into slot 0, shifting the remaining
/// slots down by one: the `u_1 = u_2 = t` specialisation after the double
/// derivative.
fn collapse_pair(p: &LaurentPoly, new_nvars: usize) -> LaurentPoly {
    debug_assert_eq!(p.nvars(), new_nvars + 1);
    let mut out = LaurentPoly::zero(new_nvars);
    for (e, c) in p.iter_terms() {
        let mut key = e.removed(1);
        key.set(0, e.get(0) + e.get(1));
        out.add_term(key, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_bounds() {
        assert!(!is_stable(0, 1));
        assert!(!is_stable(0, 2));
        assert!(is_stable(0, 3));
        assert!(is_stable(1, 1));
        assert!(FgnKey::new(0, 2).is_err());
    }

    #[test]
    fn z_factor_values() {
        // z(1,1) = 1.
        let (num, den) = z_factor(0, 1, 2);
        let ones = vec![Rat::one(), Rat::one()];
        assert_eq!(
            num.eval_all(&ones).unwrap(),
            den.eval_all(&ones).unwrap()
        );
        // Diagonal: z(t,t) = (t+1)^2 / (4t).
        let (num, den) = z_factor(0, 0, 1);
        let tp1 = &LaurentPoly::var(1, 0) + &LaurentPoly::one(1);
        assert_eq!(num, &tp1 * &tp1);
        assert_eq!(den, LaurentPoly::monomial(1, &[1], Rat::from_int(4)));
        // z(t,1) = 1: numerator and denominator agree after t_2 := 1.
        let (num, den) = z_factor(0, 1, 2);
        assert_eq!(
            num.eval_partial(1, &Rat::one()).unwrap(),
            den.eval_partial(1, &Rat::one()).unwrap()
        );
    }

    #[test]
    fn z_diagonal_times_4t_is_square() {
        // Expansion of the diagonal weight times 4t gives (t+1)^2.
        let (num, den) = z_factor(0, 0, 1);
        let four_t = LaurentPoly::monomial(1, &[1], Rat::from_int(4));
        assert_eq!(den, four_t);
        let tp1 = &LaurentPoly::var(1, 0) + &LaurentPoly::one(1);
        assert_eq!(num, &tp1 * &tp1);
    }

    #[test]
    fn initial_three_holed_sphere() {
        let f = initial_f03();
        let ones = vec![Rat::one(); 3];
        assert_eq!(f.eval_all(&ones).unwrap(), Rat::from_int(-1));
        assert_eq!(f.coeff(&[1, 1, 1]), Rat::new(-1, 16));
        // Vanishes at t_1 = -1 identically in the other variables.
        assert!(f.eval_partial(0, &Rat::from_int(-1)).unwrap().is_zero());
        // Symmetric under every permutation of the three slots.
        assert!(f.is_invariant_under(&[1, 2, 0]));
        assert!(f.is_invariant_under(&[1, 0, 2]));
    }

    #[test]
    fn initial_one_holed_torus() {
        let f = initial_f11();
        assert_eq!(f.eval_all(&[Rat::one()]).unwrap(), Rat::new(1, 12));
        // t -> 1/t invariance forces a critical point at the fixed point 1.
        let df = f.diff(0).unwrap();
        assert_eq!(df.eval_all(&[Rat::one()]).unwrap(), Rat::zero());
        assert_eq!(f.coeff(&[3]), Rat::new(-1, 384));
        assert_eq!(f.eval_all(&[Rat::from_int(-1)]).unwrap(), Rat::zero());
        // Equivalent form -(1/6) z^3 + (1/4) z^2 with z = (t+1)^2/(4t).
        let tp1 = &LaurentPoly::var(1, 0) + &LaurentPoly::one(1);
        let z = (&tp1 * &tp1).mul_monomial(&[-1], &Rat::new(1, 4));
        let z2 = &z * &z;
        let z3 = &z2 * &z;
        let alt = &z3.scaled(&Rat::new(-1, 6)) + &z2.scaled(&Rat::new(1, 4));
        assert_eq!(f, alt);
    }

    #[test]
    fn partition_enumeration() {
        // Genus 0, three remaining labels: no splitting has both parts stable.
        assert!(stable_partitions(0, &[1, 2, 3]).is_empty());
        // Genus 1, nothing remaining: both one-sided splits are unstable.
        assert!(stable_partitions(1, &[]).is_empty());
        // Genus 2, nothing remaining: exactly the (1|1) split, listed once.
        let p = stable_partitions(2, &[]);
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].g1, p[0].g2), (1, 1));
        // Ordered semantics: asymmetric genus splits appear both ways.
        let p3 = stable_partitions(3, &[]);
        assert_eq!(p3.len(), 2);
        assert_eq!((p3[0].g1, p3[0].g2), (1, 2));
        assert_eq!((p3[1].g1, p3[1].g2), (2, 1));
        // Label splits respect stability of both factors.
        let q = stable_partitions(0, &[1, 2, 3, 4]);
        assert_eq!(q.len(), 6); // all 2+2 splits of four labels
        assert!(q.iter().all(|s| s.set_i.len() == 2 && s.set_j.len() == 2));
    }

    #[test]
    fn integrand_is_even_in_the_integration_variable() {
        let engine = Engine::new();
        engine.compute_f(0, 3).unwrap();
        let bracket = engine.assemble_integrand(0, 4).unwrap();
        assert!(bracket
            .iter_terms()
            .all(|(e, _)| e.get(0) % 2 == 0));
        engine.compute_f(1, 1).unwrap();
        engine.compute_f(1, 2).unwrap();
        let bracket21 = engine.assemble_integrand(2, 1).unwrap();
        assert!(bracket21
            .iter_terms()
            .all(|(e, _)| e.get(0) % 2 == 0));
    }

    #[test]
    fn missing_dependency_is_reported() {
        let engine = Engine::new();
        assert!(matches!(
            engine.assemble_integrand(0, 4),
            Err(Error::MissingDependency { g: 0, n: 3 })
        ));
    }

    #[test]
    fn initial_values_bypass_assembly() {
        let engine = Engine::new();
        assert_eq!(*engine.compute_f(0, 3).unwrap(), initial_f03());
        assert_eq!(*engine.compute_f(1, 1).unwrap(), initial_f11());
    }

    #[test]
    fn engine_is_shareable_across_threads() {
        let engine = std::sync::Arc::new(Engine::new());
        let handles: Vec<_> = [(0u32, 5u32), (1, 3), (2, 1), (0, 4)]
            .into_iter()
            .map(|(g, n)| {
                let eng = engine.clone();
                std::thread::spawn(move || (*eng.compute_f(g, n).unwrap()).clone())
            })
            .collect();
        let results: Vec<LaurentPoly> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        // Same values as a fresh sequential engine: evaluation order is
        // irrelevant to exact arithmetic.
        let fresh = Engine::new();
        assert_eq!(results[0], *fresh.compute_f(0, 5).unwrap());
        assert_eq!(results[2], *fresh.compute_f(2, 1).unwrap());
    }

    #[test]
    fn dependency_key_order() {
        let keys = Engine::keys_up_to_level(3);
        assert_eq!(
            keys,
            vec![(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)]
        );
    }
}
