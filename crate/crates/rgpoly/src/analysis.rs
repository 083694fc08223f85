//! Cross-validation layer: Euler characteristics in closed form,
//! Laplace-transform consistency between the polynomials and the counts,
//! extraction of psi-class intersection numbers from leading terms, and the
//! structural invariant suite run on every computed polynomial.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::CountTable;
use crate::poly::LaurentPoly;
use crate::rat::Rat;
use crate::recursion::{euler_level, is_stable};
use crate::series::series_from_rational_subst;

/// Bernoulli numbers of the `x/(e^x - 1)` generating function, so
/// `b_1 = -1/2` and `b_r = 0` for odd `r >= 3`.
#[derive(Default)]
pub struct BernoulliCache {
    vals: Vec<Rat>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { vals: vec![Rat::one()] }
    }

    /// `b_r`, extending the cache through the standard recurrence
    /// `sum_{k=0}^{m} C(m+1, k) b_k = 0` for `m >= 1`.
    pub fn get(&mut self, r: usize) -> Rat {
        if self.vals.is_empty() {
            self.vals.push(Rat::one());
        }
        while self.vals.len() <= r {
            let m = self.vals.len();
            // b_m = -1/(m+1) * sum_{k<m} C(m+1, k) b_k
            let mut acc = Rat::zero();
            let mut binom = Rat::one(); // C(m+1, 0)
            for (k, b) in self.vals.iter().enumerate() {
                acc += &(&binom * b);
                // C(m+1, k+1) = C(m+1, k) * (m+1-k)/(k+1)
                binom = &binom * &Rat::new((m + 1 - k) as i64, (k + 1) as i64);
            }
            let bm = &(-acc) / &Rat::from_int((m + 1) as i64);
            self.vals.push(bm);
        }
        self.vals[r].clone()
    }
}

static BERNOULLI: Mutex<Option<BernoulliCache>> = Mutex::new(None);

/// `b_r` via a shared process-wide cache.
pub fn bernoulli(r: usize) -> Rat {
    let mut guard = BERNOULLI.lock().unwrap();
    guard.get_or_insert_with(BernoulliCache::new).get(r)
}

/// The orbifold Euler characteristic of the moduli space of genus-`g`
/// curves with `n` marked points, in the Bernoulli-number closed form
/// `(-1)^n ((2g-3+n)!/(2g)!) (2g-1) b_{2g}`.
pub fn euler_char_hz(g: u32, n: u32) -> Result<Rat> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let sign = if n.is_multiple_of(2) { Rat::one() } else { Rat::from_int(-1) };
    let num = Rat::factorial((2 * g as u64 + n as u64) - 3);
    let den = Rat::factorial(2 * g as u64);
    let factor = Rat::from_int(2 * g as i64 - 1);
    Ok(&(&(&sign * &num) / &den) * &(&factor * &bernoulli(2 * g as usize)))
}

/// Outcome of a single verification check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub gn: (u32, u32),
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass(check: &str, g: u32, n: u32) -> Self {
        CheckResult {
            check: check.into(),
            gn: (g, n),
            status: "pass".into(),
            detail: None,
        }
    }

    pub fn fail(check: &str, g: u32, n: u32, detail: String) -> Self {
        CheckResult {
            check: check.into(),
            gn: (g, n),
            status: "fail".into(),
            detail: Some(detail),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// A bundle of check results, serializable as a JSON report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub entries: Vec<CheckResult>,
}

impl Report {
    pub fn push(&mut self, r: CheckResult) {
        self.entries.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.entries.iter().find(|e| !e.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("serialization cannot fail")
    }
}

/// Sum of all coefficients: the evaluation at `t_1 = ... = t_n = 1`.
fn eval_at_all_ones(f: &LaurentPoly) -> Rat {
    let mut acc = Rat::zero();
    for (_, c) in f.iter_terms() {
        acc += c;
    }
    acc
}

/// Check `F(1,...,1) = (-1)^n chi(M_{g,n})`.
pub fn verify_euler(g: u32, n: u32, f: &LaurentPoly) -> CheckResult {
    let expected = match euler_char_hz(g, n) {
        Ok(chi) => {
            if n.is_multiple_of(2) {
                chi
            } else {
                -chi
            }
        }
        Err(e) => return CheckResult::fail("euler", g, n, e.to_string()),
    };
    let got = eval_at_all_ones(f);
    if got == expected {
        CheckResult::pass("euler", g, n)
    } else {
        CheckResult::fail(
            "euler",
            g,
            n,
            format!("F(1,...,1) = {got}, expected {expected}"),
        )
    }
}

/// Expand `F_{g,n}` in the boundary variables `x_j` with
/// `t_j = (1+x_j)/(x_j-1)` and compare every box coefficient
/// `1 <= p_j <= order` with the lattice count; coefficients with any
/// `p_j = 0` must vanish. Reports the first mismatch.
pub fn verify_laplace(
    g: u32,
    n: u32,
    f: &LaurentPoly,
    counts: &CountTable,
    order: u32,
) -> CheckResult {
    let series = series_from_rational_subst(f, order);
    for (e, c) in series.iter_terms() {
        if (0..n as usize).any(|i| e.get(i) == 0) && !c.is_zero() {
            return CheckResult::fail(
                "laplace",
                g,
                n,
                format!(
                    "coefficient at {:?} should vanish, found {c}",
                    e.to_vec()
                ),
            );
        }
    }
    let mut p = vec![1u32; n as usize];
    loop {
        let coeff = series.coeff(&p);
        let count = match counts.compute_n(g, n, &p) {
            Ok(v) => v,
            Err(err) => return CheckResult::fail("laplace", g, n, err.to_string()),
        };
        if coeff != count {
            return CheckResult::fail(
                "laplace",
                g,
                n,
                format!("at p = {p:?}: series coefficient {coeff}, count {count}"),
            );
        }
        let mut i = n as usize;
        loop {
            if i == 0 {
                return CheckResult::pass("laplace", g, n);
            }
            i -= 1;
            if p[i] < order {
                p[i] += 1;
                for x in &mut p[i + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// Table of psi-class intersection numbers keyed by genus and the sorted
/// exponent multiset `{d_1, ..., d_n}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntersectionTable {
    map: BTreeMap<(u32, Vec<u32>), Rat>,
}

impl IntersectionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, g: u32, ds: &[u32]) -> Option<&Rat> {
        let mut key = ds.to_vec();
        key.sort_unstable();
        self.map.get(&(g, key))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &Rat)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn merge(&mut self, other: IntersectionTable) -> Result<()> {
        for ((g, ds), v) in other.map {
            self.insert_checked(g, ds, v)?;
        }
        Ok(())
    }

    fn insert_checked(&mut self, g: u32, mut ds: Vec<u32>, v: Rat) -> Result<()> {
        ds.sort_unstable();
        if let Some(prev) = self.map.get(&(g, ds.clone())) {
            if *prev != v {
                return Err(Error::InconsistentOrbit(format!(
                    "(g, d) = ({g}, {ds:?}): {prev} vs {v}"
                )));
            }
            return Ok(());
        }
        self.map.insert((g, ds), v);
        Ok(())
    }

    /// TSV rows `g <tab> d_1 .. d_n <tab> num/den`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for ((g, ds), v) in &self.map {
            out.push_str(&g.to_string());
            for d in ds {
                out.push_str(&format!("\t{d}"));
            }
            out.push_str(&format!("\t{}\n", v.to_frac_string()));
        }
        out
    }
}

/// Invert the leading-term coefficient relation
/// `[t^{2d+1}] F^top = ((-1)^n / 2^{5g-5+2n}) <tau_d> prod (2d_j)!/(d_j! 2^{2d_j+1})`
/// monomial by monomial, symmetrising over the exponent orbit.
pub fn extract_intersection_numbers(
    g: u32,
    n: u32,
    f: &LaurentPoly,
) -> Result<IntersectionTable> {
    let level = euler_level(g, n);
    let top = f.top_homogeneous();
    if top.max_total_degree() != Some(3 * level as i32) {
        return Err(Error::Precondition(format!(
            "leading part of F({g},{n}) has degree {:?}, expected {}",
            top.max_total_degree(),
            3 * level
        )));
    }
    let mut table = IntersectionTable::new();
    let sign = if n.is_multiple_of(2) { Rat::one() } else { Rat::from_int(-1) };
    let global = &sign * &Rat::pow2(5 * g as i32 - 5 + 2 * n as i32);
    for (e, c) in top.iter_terms() {
        let mut ds = Vec::with_capacity(n as usize);
        for k in e.iter() {
            if k < 1 || k % 2 == 0 {
                return Err(Error::Precondition(format!(
                    "leading monomial {:?} of F({g},{n}) has a non-positive or even exponent",
                    e.to_vec()
                )));
            }
            ds.push(((k - 1) / 2) as u32);
        }
        let mut tau = &global * c;
        for &d in &ds {
            // d! 2^{2d+1} / (2d)!
            let inv = &(&Rat::factorial(d as u64) * &Rat::pow2(2 * d as i32 + 1))
                / &Rat::factorial(2 * d as u64);
            tau = &tau * &inv;
        }
        table.insert_checked(g, ds, tau)?;
    }
    Ok(table)
}

/// Check the string and dilaton identities on every applicable entry of the
/// table. Identities whose lower entries are not present are skipped, not
/// failed.
pub fn string_dilaton_check(table: &IntersectionTable) -> Report {
    let mut report = Report::default();
    for ((g, ds), value) in table.iter() {
        let g = *g;
        let n = ds.len();
        // String: remove one tau_0; the value equals the sum over the
        // remaining indices of the entry with that index lowered by one.
        if let Some(pos) = ds.iter().position(|&d| d == 0) {
            let mut rest = ds.clone();
            rest.remove(pos);
            if !rest.is_empty() && is_stable(g, rest.len() as u32) {
                let mut sum = Rat::zero();
                let mut complete = true;
                for i in 0..rest.len() {
                    if rest[i] == 0 {
                        continue;
                    }
                    let mut lowered = rest.clone();
                    lowered[i] -= 1;
                    match table.get(g, &lowered) {
                        Some(v) => sum += v,
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if complete {
                    if sum == *value {
                        report.push(CheckResult::pass("string", g, n as u32));
                    } else {
                        report.push(CheckResult::fail(
                            "string",
                            g,
                            n as u32,
                            format!("<tau {ds:?}> = {value}, lowered sum {sum}"),
                        ));
                    }
                }
            }
        }
        // Dilaton: remove one tau_1; the value equals (2g-2+n') times the
        // remaining entry, n' the remaining count.
        if let Some(pos) = ds.iter().position(|&d| d == 1) {
            let mut rest = ds.clone();
            rest.remove(pos);
            if !rest.is_empty() && is_stable(g, rest.len() as u32) {
                if let Some(v) = table.get(g, &rest) {
                    let factor = Rat::from_int(euler_level(g, rest.len() as u32));
                    let expected = &factor * v;
                    if expected == *value {
                        report.push(CheckResult::pass("dilaton", g, n as u32));
                    } else {
                        report.push(CheckResult::fail(
                            "dilaton",
                            g,
                            n as u32,
                            format!("<tau {ds:?}> = {value}, expected {expected}"),
                        ));
                    }
                }
            }
        }
    }
    report
}

/// Re-express a one-variable polynomial in powers of `z = (t+1)^2/(4t)`,
/// highest power first. Fails if it is not a polynomial in `z`.
pub fn z_expansion(f: &LaurentPoly) -> Result<Vec<(u32, Rat)>> {
    if f.nvars() != 1 {
        return Err(Error::VarMismatch(f.nvars(), 1));
    }
    let tp1 = &LaurentPoly::var(1, 0) + &LaurentPoly::one(1);
    let z = (&tp1 * &tp1).mul_monomial(&[-1], &Rat::new(1, 4));
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut zpow = LaurentPoly::one(1);
    let mut powers = vec![zpow.clone()];
    while let Some(top) = rest.max_total_degree() {
        if top < 0 {
            return Err(Error::Precondition(
                "not a polynomial in z: negative leading degree".into(),
            ));
        }
        let k = top as u32;
        while powers.len() <= k as usize {
            zpow = &powers[powers.len() - 1] * &z;
            powers.push(zpow.clone());
        }
        // [t^k] z^k = 1/4^k, so the z^k coefficient is 4^k [t^k] rest.
        let c = &rest.coeff(&[top]) * &Rat::pow2(2 * top);
        rest = &rest - &powers[k as usize].scaled(&c);
        if rest.max_total_degree() == Some(top) {
            return Err(Error::Precondition(
                "not a polynomial in z: leading term not eliminated".into(),
            ));
        }
        out.push((k, c));
    }
    Ok(out)
}

/// The structural invariant suite for a computed `F_{g,n}`:
/// permutation symmetry, vanishing at `t_j = -1`, odd-or-absent variable
/// exponents, extremal total degrees `+-3(2g-2+n)`, invariance under
/// `t_j -> 1/t_j`, and the Euler-characteristic specialisation.
pub fn run_invariant_suite(g: u32, n: u32, f: &LaurentPoly) -> Report {
    let mut report = Report::default();
    let nv = n as usize;
    let level = euler_level(g, n);

    // Symmetry under generators of the full permutation group.
    let mut symmetric = true;
    if nv >= 2 {
        let mut swap: Vec<usize> = (0..nv).collect();
        swap.swap(0, 1);
        symmetric &= f.is_invariant_under(&swap);
    }
    if nv >= 3 {
        let cycle: Vec<usize> = (0..nv).map(|i| (i + 1) % nv).collect();
        symmetric &= f.is_invariant_under(&cycle);
    }
    report.push(if symmetric {
        CheckResult::pass("symmetry", g, n)
    } else {
        CheckResult::fail("symmetry", g, n, "not fixed by slot permutations".into())
    });

    // Vanishing at t_j = -1 for every slot.
    let minus_one = Rat::from_int(-1);
    let mut vanish = None;
    for j in 0..nv {
        match f.eval_partial(j, &minus_one) {
            Ok(p) if p.is_zero() => {}
            Ok(_) => {
                vanish = Some(format!("nonzero at t_{} = -1", j + 1));
                break;
            }
            Err(e) => {
                vanish = Some(e.to_string());
                break;
            }
        }
    }
    report.push(match vanish {
        None => CheckResult::pass("vanish-at-minus-one", g, n),
        Some(d) => CheckResult::fail("vanish-at-minus-one", g, n, d),
    });

    // Every variable occurs in each monomial with an odd exponent or not
    // at all.
    let odd_ok = f
        .iter_terms()
        .all(|(e, _)| e.iter().all(|k| k == 0 || k % 2 != 0));
    report.push(if odd_ok {
        CheckResult::pass("odd-or-zero-exponents", g, n)
    } else {
        CheckResult::fail(
            "odd-or-zero-exponents",
            g,
            n,
            "a monomial carries a nonzero even exponent".into(),
        )
    });

    // Extremal total degrees are exactly +-3(2g-2+n).
    let want = 3 * level as i32;
    let deg_ok =
        f.max_total_degree() == Some(want) && f.min_total_degree() == Some(-want);
    report.push(if deg_ok {
        CheckResult::pass("degree-bounds", g, n)
    } else {
        CheckResult::fail(
            "degree-bounds",
            g,
            n,
            format!(
                "degrees [{:?}, {:?}], expected [-{want}, {want}]",
                f.min_total_degree(),
                f.max_total_degree()
            ),
        )
    });

    // Invariance under t_j -> 1/t_j for all slots simultaneously.
    report.push(if f.inverted_vars() == *f {
        CheckResult::pass("reciprocal-invariance", g, n)
    } else {
        CheckResult::fail(
            "reciprocal-invariance",
            g,
            n,
            "changed by negating all exponents".into(),
        )
    });

    report.push(verify_euler(g, n, f));
    report
}
