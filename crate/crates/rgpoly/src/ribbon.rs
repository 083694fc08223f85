//! Brute-force enumeration of face-labeled ribbon graphs and the oracles
//! built on it.
//!
//! A ribbon graph is a pair of permutations of the half-edges: the vertex
//! rotation `sigma` (cyclic order of half-edges at each vertex, all cycles
//! of length >= 3) and the fixed-point-free edge involution `alpha`. Faces
//! are the cycles of `phi = sigma . alpha` (apply `alpha`, then `sigma`) —
//! the convention is fixed here once and used consistently, so genus always
//! comes out of the cycle counts.
//!
//! Enumeration runs over each admissible edge count and vertex-degree
//! partition with a fixed canonical rotation, generating all pairings and
//! all face labelings, then deduplicates by a canonical form: the minimal
//! traversal encoding over all starting half-edges. Automorphisms of a
//! connected graph act freely on half-edges, so the number of starts
//! realising the minimal encoding is the order of the face-label-fixing
//! automorphism group.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::rat::Rat;
use crate::recursion::{euler_level, is_stable};

/// Default cap on the number of edges the enumerator will attempt.
pub const DEFAULT_GUARD_E: u32 = 6;

/// A face-labeled ribbon graph on `2e` half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    sigma: Vec<u32>,
    alpha: Vec<u32>,
    face_label: Vec<u32>,
}

impl RibbonGraph {
    pub fn half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        count_cycles(&self.sigma)
    }

    pub fn num_faces(&self) -> usize {
        let phi = self.phi();
        count_cycles(&phi)
    }

    pub fn genus(&self) -> i64 {
        let v = self.num_vertices() as i64;
        let e = self.num_edges() as i64;
        let n = self.num_faces() as i64;
        (2 - (v - e + n)) / 2
    }

    /// The face permutation `phi(h) = sigma(alpha(h))`.
    pub fn phi(&self) -> Vec<u32> {
        self.alpha
            .iter()
            .map(|&a| self.sigma[a as usize])
            .collect()
    }

    pub fn face_label_of(&self, half_edge: usize) -> u32 {
        self.face_label[half_edge]
    }

    /// Edges as half-edge pairs `(h, alpha(h))` with `h < alpha(h)`,
    /// ordered by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for h in 0..self.half_edges() {
            let a = self.alpha[h] as usize;
            if h < a {
                out.push((h, a));
            }
        }
        out
    }

    /// The two face labels on the sides of each edge, in [`edges`] order.
    pub fn edge_faces(&self) -> Vec<(u32, u32)> {
        self.edges()
            .iter()
            .map(|&(h, a)| (self.face_label[h], self.face_label[a]))
            .collect()
    }

    fn is_connected(&self) -> bool {
        let m = self.half_edges();
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(h) = stack.pop() {
            for nb in [self.sigma[h] as usize, self.alpha[h] as usize] {
                if !seen[nb] {
                    seen[nb] = true;
                    visited += 1;
                    stack.push(nb);
                }
            }
        }
        visited == m
    }

    /// Deterministic traversal encoding with `start` relabeled to 0.
    fn encode_from(&self, start: usize) -> Vec<u32> {
        let m = self.half_edges();
        let mut id = vec![u32::MAX; m];
        let mut order = Vec::with_capacity(m);
        id[start] = 0;
        order.push(start as u32);
        let mut qi = 0;
        while qi < order.len() {
            let h = order[qi] as usize;
            qi += 1;
            for nb in [self.sigma[h] as usize, self.alpha[h] as usize] {
                if id[nb] == u32::MAX {
                    id[nb] = order.len() as u32;
                    order.push(nb as u32);
                }
            }
        }
        debug_assert_eq!(order.len(), m, "encoding requires a connected graph");
        let mut enc = Vec::with_capacity(3 * m);
        for &h in &order {
            let h = h as usize;
            enc.push(id[self.sigma[h] as usize]);
            enc.push(id[self.alpha[h] as usize]);
            enc.push(self.face_label[h]);
        }
        enc
    }

    /// Minimal encoding over all starts, and the number of starts that
    /// attain it — the order of the label-fixing automorphism group.
    fn canonical(&self) -> (Vec<u32>, u32) {
        let mut best: Option<Vec<u32>> = None;
        let mut hits = 0u32;
        for h in 0..self.half_edges() {
            let enc = self.encode_from(h);
            match &best {
                None => {
                    best = Some(enc);
                    hits = 1;
                }
                Some(b) => match enc.cmp(b) {
                    std::cmp::Ordering::Less => {
                        best = Some(enc);
                        hits = 1;
                    }
                    std::cmp::Ordering::Equal => hits += 1,
                    std::cmp::Ordering::Greater => {}
                },
            }
        }
        (best.unwrap(), hits)
    }
}

fn count_cycles(perm: &[u32]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            h = perm[h] as usize;
        }
    }
    cycles
}

fn cycles_of(perm: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(h as u32);
            h = perm[h] as usize;
        }
        out.push(cycle);
    }
    out
}

/// Edge-face incidence matrix: `n` face rows, `e` edge columns, entries
/// count how many sides of the edge lie on the face, so every column sums
/// to 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn entry(&self, face: usize, edge: usize) -> u8 {
        self.entries[face][edge]
    }

    pub fn row(&self, face: usize) -> &[u8] {
        &self.entries[face]
    }
}

/// The incidence matrix of a face-labeled ribbon graph.
pub fn incidence_matrix(graph: &RibbonGraph) -> IncidenceMatrix {
    let n = graph.num_faces();
    let e = graph.num_edges();
    let mut entries = vec![vec![0u8; e]; n];
    for (col, &(i, j)) in graph.edge_faces().iter().enumerate() {
        entries[i as usize][col] += 1;
        entries[j as usize][col] += 1;
    }
    IncidenceMatrix {
        rows: n,
        cols: e,
        entries,
    }
}

/// One isomorphism class of face-labeled ribbon graphs.
#[derive(Clone, Debug)]
pub struct GraphRecord {
    pub graph: RibbonGraph,
    pub aut_order: u32,
    pub matrix: IncidenceMatrix,
}

impl fmt::Display for GraphRecord {
    /// One-line dump: `e=<e> sigma=<cycles> alpha=<pairs> faces=<label:cycle> aut=<order>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_cycles = |cs: &[Vec<u32>]| {
            cs.iter()
                .map(|c| {
                    let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    format!("({})", inner.join(" "))
                })
                .collect::<Vec<_>>()
                .join("")
        };
        write!(f, "e={} ", self.graph.num_edges())?;
        write!(f, "sigma={} ", fmt_cycles(&cycles_of(&self.graph.sigma)))?;
        write!(f, "alpha={} ", fmt_cycles(&cycles_of(&self.graph.alpha)))?;
        let phi = self.graph.phi();
        let mut faces = cycles_of(&phi);
        faces.sort_by_key(|c| self.graph.face_label[c[0] as usize]);
        let faces_str: Vec<String> = faces
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!(
                    "{}:({})",
                    self.graph.face_label[c[0] as usize] + 1,
                    inner.join(" ")
                )
            })
            .collect();
        write!(f, "faces={} aut={}", faces_str.join(","), self.aut_order)
    }
}

/// Partitions of `total` into exactly `parts` parts, each `>= 3`,
/// non-increasing.
fn degree_partitions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = max.min(total.saturating_sub(3 * (parts - 1)));
        for d in (3..=hi).rev() {
            cur.push(d);
            rec(total - d, parts - 1, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut out);
    out
}

fn for_each_matching(m: usize, alpha: &mut Vec<u32>, used: &mut Vec<bool>, f: &mut impl FnMut(&[u32])) {
    let first = match used.iter().position(|&u| !u) {
        None => {
            f(alpha);
            return;
        }
        Some(i) => i,
    };
    used[first] = true;
    for b in (first + 1)..m {
        if used[b] {
            continue;
        }
        used[b] = true;
        alpha[first] = b as u32;
        alpha[b] = first as u32;
        for_each_matching(m, alpha, used, f);
        used[b] = false;
    }
    used[first] = false;
}

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(k: usize, perm: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, f);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<u32> = (0..n as u32).collect();
    rec(0, &mut perm, f);
}

/// Complete, duplicate-free list of isomorphism classes of face-labeled
/// ribbon graphs of type `(g, n)` with all vertex degrees `>= 3`.
///
/// The edge count ranges over `[2g - 1 + n, 3(2g - 2 + n)]`; the guard
/// refuses types whose upper bound exceeds `guard_e`.
pub fn enumerate_ribbon_graphs(g: u32, n: u32, guard_e: u32) -> Result<Vec<GraphRecord>> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let level = euler_level(g, n);
    let e_max = 3 * level as u32;
    if e_max > guard_e {
        return Err(Error::GuardExceeded {
            g,
            n,
            needed: e_max,
            guard: guard_e,
        });
    }
    let e_min = (2 * g as i64 - 1 + n as i64).max(1) as u32;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut records = Vec::new();
    for e in e_min..=e_max {
        let half = 2 * e as usize;
        let v = e as i64 + 2 - 2 * g as i64 - n as i64;
        if v < 1 {
            continue;
        }
        for degrees in degree_partitions(half, v as usize) {
            // Canonical rotation: consecutive blocks, one cycle per vertex.
            let mut sigma = vec![0u32; half];
            let mut base = 0;
            for &d in &degrees {
                for k in 0..d {
                    sigma[base + k] = (base + (k + 1) % d) as u32;
                }
                base += d;
            }
            let mut alpha = vec![u32::MAX; half];
            let mut used = vec![false; half];
            for_each_matching(half, &mut alpha, &mut used, &mut |alpha| {
                let skeleton = RibbonGraph {
                    sigma: sigma.clone(),
                    alpha: alpha.to_vec(),
                    face_label: vec![0; half],
                };
                if !skeleton.is_connected() {
                    return;
                }
                let phi = skeleton.phi();
                let faces = cycles_of(&phi);
                if faces.len() != n as usize {
                    return;
                }
                // Face index per half-edge, then all n! labelings.
                let mut face_index = vec![0u32; half];
                for (ci, cycle) in faces.iter().enumerate() {
                    for &h in cycle {
                        face_index[h as usize] = ci as u32;
                    }
                }
                for_each_permutation(n as usize, &mut |perm| {
                    let labeled = RibbonGraph {
                        sigma: sigma.clone(),
                        alpha: alpha.to_vec(),
                        face_label: face_index
                            .iter()
                            .map(|&ci| perm[ci as usize])
                            .collect(),
                    };
                    let (canon, aut) = labeled.canonical();
                    if seen.insert(canon) {
                        debug_assert_eq!(labeled.genus(), g as i64);
                        let matrix = incidence_matrix(&labeled);
                        records.push(GraphRecord {
                            graph: labeled,
                            aut_order: aut,
                            matrix,
                        });
                    }
                });
            });
        }
    }
    // Deterministic order: by edge count, then by the canonical encoding.
    records.sort_by_key(|r| (r.graph.num_edges(), r.graph.canonical().0));
    Ok(records)
}

/// Enumeration plus the three oracles built over it.
pub struct Oracle {
    g: u32,
    n: u32,
    records: Vec<GraphRecord>,
}

impl Oracle {
    pub fn new(g: u32, n: u32, guard_e: u32) -> Result<Self> {
        let records = enumerate_ribbon_graphs(g, n, guard_e)?;
        Ok(Oracle { g, n, records })
    }

    pub fn records(&self) -> &[GraphRecord] {
        &self.records
    }

    /// The `(g, n)` this oracle enumerates.
    pub fn graph_type(&self) -> (u32, u32) {
        (self.g, self.n)
    }

    /// `sum_Gamma (-1)^{e}/|Aut|`: the orbifold Euler characteristic of the
    /// metric-ribbon-graph space.
    pub fn euler_characteristic(&self) -> Rat {
        let mut acc = Rat::zero();
        for r in &self.records {
            let sign = if r.graph.num_edges() % 2 == 0 { 1 } else { -1 };
            acc += &Rat::new(sign, r.aut_order as i64);
        }
        acc
    }

    /// `sum_Gamma #{x in Z_+^e : A x = p} / |Aut|` by bounded enumeration.
    pub fn count_lattice_points(&self, p: &[u32]) -> Rat {
        assert_eq!(p.len(), self.n as usize);
        let mut acc = Rat::zero();
        for r in &self.records {
            let hits = lattice_solutions(&r.matrix, p);
            if hits > 0 {
                acc += &Rat::new(hits, r.aut_order as i64);
            }
        }
        acc
    }

    /// The Poincaré polynomial as the automorphism-weighted alternating sum
    /// of edge-weight products over all graphs, assembled over a common
    /// denominator and divided out exactly.
    #[allow(clippy::needless_range_loop)]
    pub fn poincare(&self) -> Result<LaurentPoly> {
        let n = self.n as usize;
        // Common denominator: for each unordered face pair i < j the
        // maximal number of (i,j)-sided edges over all graphs.
        let mut max_pow = vec![vec![0u32; n]; n];
        let mut graph_pows = Vec::with_capacity(self.records.len());
        for r in &self.records {
            let mut pows = vec![vec![0u32; n]; n];
            for &(a, b) in &r.graph.edge_faces() {
                let (i, j) = ((a.min(b)) as usize, (a.max(b)) as usize);
                if i != j {
                    pows[i][j] += 1;
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    max_pow[i][j] = max_pow[i][j].max(pows[i][j]);
                }
            }
            graph_pows.push(pows);
        }

        let mut sum = LaurentPoly::zero(n);
        for (r, pows) in self.records.iter().zip(&graph_pows) {
            let e = r.graph.num_edges();
            let mut num = LaurentPoly::one(n);
            let mut shift = vec![0i32; n];
            let mut constant = 1i64;
            for &(a, b) in &r.graph.edge_faces() {
                let (i, j) = (a as usize, b as usize);
                let ti1 = &LaurentPoly::var(n, i) + &LaurentPoly::one(n);
                let tj1 = &LaurentPoly::var(n, j) + &LaurentPoly::one(n);
                num = &num * &(&ti1 * &tj1);
                if i == j {
                    // Denominator 4 t_i: a pure monomial shift.
                    constant *= 4;
                    shift[i] -= 1;
                } else {
                    constant *= 2;
                }
            }
            // Multiply by the missing binomial factors of the common
            // denominator.
            for i in 0..n {
                for j in (i + 1)..n {
                    let need = max_pow[i][j] - pows[i][j];
                    if need > 0 {
                        let binom = &LaurentPoly::var(n, i) + &LaurentPoly::var(n, j);
                        for _ in 0..need {
                            num = &num * &binom;
                        }
                    }
                }
            }
            let sign = if e % 2 == 0 { 1 } else { -1 };
            let weight = Rat::new(sign, r.aut_order as i64 * constant);
            sum = &sum + &num.mul_monomial(&shift, &weight);
        }

        // Exact division by each binomial factor of the common denominator.
        for i in 0..n {
            for j in (i + 1)..n {
                for _ in 0..max_pow[i][j] {
                    sum = sum.div_exact_binomial(i, j)?;
                }
            }
        }
        Ok(sum)
    }
}

/// Number of strictly positive integer solutions of `A x = p`.
#[allow(clippy::needless_range_loop)]
fn lattice_solutions(matrix: &IncidenceMatrix, p: &[u32]) -> i64 {
    let e = matrix.cols;
    let n = matrix.rows;
    // suffix[k][i]: sum of entries of row i over columns k..e — the minimal
    // contribution of the still-unassigned edges, each of length >= 1.
    let mut suffix = vec![vec![0i64; n]; e + 1];
    for k in (0..e).rev() {
        for i in 0..n {
            suffix[k][i] = suffix[k + 1][i] + matrix.entry(i, k) as i64;
        }
    }
    let mut remaining: Vec<i64> = p.iter().map(|&x| x as i64).collect();
    fn rec(
        matrix: &IncidenceMatrix,
        suffix: &[Vec<i64>],
        remaining: &mut Vec<i64>,
        k: usize,
    ) -> i64 {
        let n = matrix.rows;
        if k == matrix.cols {
            return if remaining.iter().all(|&r| r == 0) { 1 } else { 0 };
        }
        // Upper bound for x_k: every touched face must keep room for the
        // minimal contribution of the remaining edges. Within the bound,
        // feasibility of the deeper rows is automatic.
        let mut hi = i64::MAX;
        for i in 0..n {
            if remaining[i] < suffix[k][i] {
                return 0;
            }
            let a = matrix.entry(i, k) as i64;
            if a > 0 {
                hi = hi.min((remaining[i] - suffix[k + 1][i]) / a);
            }
        }
        let mut total = 0;
        for x in 1..=hi.max(0) {
            for i in 0..n {
                remaining[i] -= matrix.entry(i, k) as i64 * x;
            }
            total += rec(matrix, suffix, remaining, k + 1);
            for i in 0..n {
                remaining[i] += matrix.entry(i, k) as i64 * x;
            }
        }
        total
    }
    rec(matrix, &suffix, &mut remaining, 0)
}
