//! Exact verification of complete regularity.
//!
//! Everything here is integer arithmetic. A code is checked by building its
//! distance partition and counting, for every vertex, its neighbors in each
//! cell; the quotient matrix eigenvalues are then found among the graph
//! eigenvalues by evaluating the characteristic polynomial.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::graphs::{Adjacency, Graph, GraphSpec};
use crate::subspaces::{gaussian, Lattice};
use crate::{Error, Result};

/// A set of vertex ids of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    spec: GraphSpec,
    ids: Vec<u32>,
    label: Option<String>,
}

impl Code {
    /// Sorts and deduplicates `ids`; every id must be a vertex of `spec`.
    pub fn new(spec: GraphSpec, mut ids: Vec<u32>) -> Result<Self> {
        ids.sort_unstable();
        ids.dedup();
        let bound = spec.vertex_count();
        if let Some(&last) = ids.last() {
            if last as u128 >= bound {
                return Err(Error::OutOfRange {
                    index: last as u64,
                    bound: bound as u64,
                });
            }
        }
        Ok(Code {
            spec,
            ids,
            label: None,
        })
    }

    pub fn from_indicator(spec: GraphSpec, member: &[bool]) -> Result<Self> {
        let ids = member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i as u32)
            .collect();
        Code::new(spec, ids)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn spec(&self) -> GraphSpec {
        self.spec
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut out = vec![false; self.spec.vertex_count() as usize];
        for &i in &self.ids {
            out[i as usize] = true;
        }
        out
    }

    pub fn complement(&self) -> Code {
        let member = self.indicator();
        let ids = (0..member.len() as u32)
            .filter(|&i| !member[i as usize])
            .collect();
        Code {
            spec: self.spec,
            ids,
            label: self.label.as_ref().map(|l| format!("complement of {l}")),
        }
    }
}

/// Cells `C_0 = C, C_1, ..., C_rho` of vertices at distance `i` from a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistancePartition {
    pub rho: usize,
    pub cells: Vec<Vec<u32>>,
    /// Cell index of every vertex.
    pub cell_of: Vec<u8>,
}

impl DistancePartition {
    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

const UNSEEN: u8 = u8::MAX;

/// Breadth-first layering from the code. Each layer is found by scanning
/// the unassigned vertices for a neighbor in the previous layer.
pub fn distance_partition<G: Adjacency + ?Sized>(g: &G, code: &[u32]) -> Result<DistancePartition> {
    if code.is_empty() {
        return Err(Error::Unsupported("distance partition of an empty code".into()));
    }
    let n = g.vertex_count();
    let mut cell_of = vec![UNSEEN; n];
    for &c in code {
        cell_of[c as usize] = 0;
    }
    let mut layer = 0u8;
    loop {
        let next: Vec<u32> = (0..n as u32)
            .into_par_iter()
            .filter(|&v| cell_of[v as usize] == UNSEEN)
            .filter(|&v| {
                let mut hit = false;
                g.for_each_neighbor(v, &mut |w| hit |= cell_of[w as usize] == layer);
                hit
            })
            .collect();
        if next.is_empty() {
            break;
        }
        if layer == UNSEEN - 1 {
            return Err(Error::Unsupported("covering radius exceeds 253".into()));
        }
        layer += 1;
        for v in next {
            cell_of[v as usize] = layer;
        }
    }
    if cell_of.contains(&UNSEEN) {
        return Err(Error::Unsupported("graph is disconnected".into()));
    }
    let rho = layer as usize;
    let mut cells = vec![Vec::new(); rho + 1];
    for (v, &c) in cell_of.iter().enumerate() {
        cells[c as usize].push(v as u32);
    }
    Ok(DistancePartition {
        rho,
        cells,
        cell_of,
    })
}

/// `alpha_i`, `beta_i`, `gamma_i` and the quotient matrix of a completely
/// regular code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionNumbers {
    pub alpha: Vec<u64>,
    /// `beta_0 .. beta_(rho-1)`
    pub beta: Vec<u64>,
    /// `gamma_1 .. gamma_rho`
    pub gamma: Vec<u64>,
    pub quotient: Vec<Vec<u64>>,
}

impl IntersectionNumbers {
    fn from_quotient(quotient: Vec<Vec<u64>>) -> Self {
        let r = quotient.len();
        IntersectionNumbers {
            alpha: (0..r).map(|i| quotient[i][i]).collect(),
            beta: (0..r - 1).map(|i| quotient[i][i + 1]).collect(),
            gamma: (1..r).map(|i| quotient[i][i - 1]).collect(),
            quotient,
        }
    }

    pub fn rho(&self) -> usize {
        self.quotient.len() - 1
    }

    pub fn quotient_i128(&self) -> Vec<Vec<i128>> {
        self.quotient
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect()
    }
}

/// A vertex whose neighbor counts differ from the first vertex of its cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub vertex: u32,
    pub cell: usize,
    pub expected: Vec<u64>,
    pub found: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular(IntersectionNumbers),
    Irregular(Counterexample),
}

impl Regularity {
    pub fn numbers(&self) -> Option<&IntersectionNumbers> {
        match self {
            Regularity::Regular(x) => Some(x),
            Regularity::Irregular(_) => None,
        }
    }
}

fn cell_counts<G: Adjacency + ?Sized>(g: &G, cell_of: &[u8], cells: usize, v: u32) -> Vec<u64> {
    let mut counts = vec![0u64; cells];
    g.for_each_neighbor(v, &mut |w| counts[cell_of[w as usize] as usize] += 1);
    counts
}

/// Counts cell neighbors of every vertex and compares them with the first
/// vertex (lowest id) of the same cell. Returns the lowest-id violation.
pub fn check_regularity<G: Adjacency + ?Sized>(g: &G, dp: &DistancePartition) -> Regularity {
    let r = dp.rho + 1;
    let reference: Vec<Vec<u64>> = dp
        .cells
        .iter()
        .map(|cell| cell_counts(g, &dp.cell_of, r, cell[0]))
        .collect();
    let bad = (0..g.vertex_count() as u32).into_par_iter().find_map_first(|v| {
        let cell = dp.cell_of[v as usize] as usize;
        let found = cell_counts(g, &dp.cell_of, r, v);
        (found != reference[cell]).then(|| Counterexample {
            vertex: v,
            cell,
            expected: reference[cell].clone(),
            found,
        })
    });
    match bad {
        Some(c) => Regularity::Irregular(c),
        None => {
            for (i, row) in reference.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert!(
                        i.abs_diff(j) <= 1 || x == 0,
                        "edge between cells {i} and {j} of a distance partition"
                    );
                }
                assert!(i == 0 || row[i - 1] > 0, "cell {i} vertex without a lower neighbor");
            }
            Regularity::Regular(IntersectionNumbers::from_quotient(reference))
        }
    }
}

/// Distance partition plus regularity check. The code must be nonempty and
/// proper.
pub fn check_completely_regular<G: Adjacency + ?Sized>(
    g: &G,
    code: &[u32],
) -> Result<(DistancePartition, Regularity)> {
    if code.is_empty() || code.len() >= g.vertex_count() {
        return Err(Error::Unsupported(
            "complete regularity needs a nonempty proper code".into(),
        ));
    }
    let dp = distance_partition(g, code)?;
    let reg = check_regularity(g, &dp);
    Ok((dp, reg))
}

/// Coefficients of `det(x I - A)`, lowest degree first (Faddeev-LeVerrier;
/// every division is exact for integer matrices).
pub fn characteristic_polynomial(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_(k-1) + c_(n-k+1) I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * m[t][j]).sum::<i128>();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        m = next;
        let trace: i128 = (0..n)
            .map(|i| (0..n).map(|t| a[i][t] * m[t][i]).sum::<i128>())
            .sum();
        debug_assert_eq!(trace % k as i128, 0);
        coeffs[n - k] = -trace / k as i128;
    }
    coeffs
}

fn poly_eval(p: &[i128], x: i128) -> i128 {
    p.iter().rev().fold(0, |acc, &c| acc * x + c)
}

/// Divides by `(x - r)`, assuming `r` is a root.
fn deflate(p: &[i128], r: i128) -> Vec<i128> {
    let d = p.len() - 1;
    let mut out = vec![0i128; d];
    let mut carry = 0;
    for i in (0..d).rev() {
        carry = p[i + 1] + carry * r;
        out[i] = carry;
    }
    out
}

/// Eigenvalues of a quotient matrix, found exactly among the graph
/// eigenvalues `thetas`. Sorted in decreasing order with multiplicity.
pub fn code_eigenvalues(quotient: &[Vec<i128>], thetas: &[i128]) -> Result<Vec<i128>> {
    let mut p = characteristic_polynomial(quotient);
    let mut roots = Vec::new();
    for &t in thetas {
        while p.len() > 1 && poly_eval(&p, t) == 0 {
            p = deflate(&p, t);
            roots.push(t);
        }
    }
    if p.len() > 1 {
        return Err(Error::LloydViolation(format!(
            "residual characteristic factor {p:?} has no root among {thetas:?}"
        )));
    }
    roots.sort_unstable_by(|a, b| b.cmp(a));
    Ok(roots)
}

/// `min{i >= 1 : theta_i is a code eigenvalue} - 1`.
pub fn strength_from_eigenvalues(thetas: &[i128], eigenvalues: &[i128]) -> u32 {
    (1..thetas.len())
        .find(|&i| eigenvalues.contains(&thetas[i]))
        .map_or(thetas.len() as u32 - 1, |i| i as u32 - 1)
}

/// Largest `t` such that every `t`-object lies below the same number of
/// code members, with those numbers `lambda_1 .. lambda_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strength {
    pub t: u32,
    pub lambdas: Vec<u64>,
}

pub fn design_strength<L: Lattice>(lattice: &L, members: &[L::Elem]) -> Strength {
    let Some(first) = members.first() else {
        return Strength {
            t: 0,
            lambdas: Vec::new(),
        };
    };
    let k = lattice.rank_of(first);
    let n = lattice.n() as u32;
    let mut lambdas = Vec::new();
    for t in 1..=k {
        let counts = members
            .par_iter()
            .fold(FxHashMap::default, |mut map, x| {
                for y in lattice.sub_objects(x, t) {
                    *map.entry(y).or_insert(0u64) += 1;
                }
                map
            })
            .reduce(FxHashMap::default, |mut a, b| {
                for (y, c) in b {
                    *a.entry(y).or_insert(0) += c;
                }
                a
            });
        let total = gaussian(n, t as u32, lattice.q());
        let lambda = counts.values().next().copied().unwrap_or(0);
        if counts.len() as u128 != total || counts.values().any(|&c| c != lambda) {
            break;
        }
        lambdas.push(lambda);
    }
    Strength {
        t: lambdas.len() as u32,
        lambdas,
    }
}

/// Necessary integer conditions for a covering radius one code with
/// parameters `{beta_0; gamma_1}` and strength `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub vertex_count: u128,
    pub beta0: u64,
    pub gamma1: u64,
    /// `|V| gamma_1 / (beta_0 + gamma_1)`
    pub size: u128,
    /// `|V| beta_0 / (beta_0 + gamma_1)`, the size of the complementary code.
    pub complement_size: u128,
    /// Parameters of the complement, `{gamma_1; beta_0}`.
    pub complement: (u64, u64),
    /// `(i, [n-i choose k-i]_q gamma_1 / (beta_0 + gamma_1) is an integer)`
    pub divisibility: Vec<(u32, bool)>,
    pub feasible: bool,
}

pub fn integrality_report(spec: GraphSpec, beta0: u64, gamma1: u64, t: u32) -> Result<IntegralityReport> {
    let s = (beta0 + gamma1) as u128;
    if s == 0 {
        return Err(Error::Infeasible("beta_0 + gamma_1 = 0".into()));
    }
    let v = spec.vertex_count();
    if (v * gamma1 as u128) % s != 0 {
        return Err(Error::Infeasible(format!(
            "{s} does not divide |V| gamma_1 = {}",
            v * gamma1 as u128
        )));
    }
    let divisibility: Vec<(u32, bool)> = (0..=t.min(spec.k))
        .map(|i| {
            let g = gaussian(spec.n - i, spec.k - i, spec.q);
            (i, (g * gamma1 as u128) % s == 0)
        })
        .collect();
    Ok(IntegralityReport {
        vertex_count: v,
        beta0,
        gamma1,
        size: v * gamma1 as u128 / s,
        complement_size: v * beta0 as u128 / s,
        complement: (gamma1, beta0),
        feasible: divisibility.iter().all(|&(_, ok)| ok),
        divisibility,
    })
}

/// Small exact rational, used only for quotient eigenvector checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ratio(i128, i128);

impl Ratio {
    fn new(n: i128, d: i128) -> Ratio {
        let g = gcd(n.abs(), d.abs()).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Ratio(s * n / g, s * d / g)
    }
    fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn scale(self, c: i128) -> Ratio {
        Ratio::new(self.0 * c, self.1)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// For each eigenvalue `theta` of a tridiagonal quotient matrix, solves
/// `A a = theta a` row by row from `a_0 = 1` and checks the last row. These
/// are the cell-value relations of a vector constant on the cells.
pub fn eigenvector_recurrence_holds(numbers: &IntersectionNumbers, eigenvalues: &[i128]) -> bool {
    let a = numbers.quotient_i128();
    let r = a.len();
    eigenvalues.iter().all(|&theta| {
        let mut vals = vec![Ratio(1, 1)];
        for i in 0..r - 1 {
            // theta a_i = gamma_i a_(i-1) + alpha_i a_i + beta_i a_(i+1)
            let mut rhs = vals[i].scale(theta - a[i][i]);
            if i > 0 {
                rhs = rhs.add(vals[i - 1].scale(-a[i][i - 1]));
            }
            if a[i][i + 1] == 0 {
                return false;
            }
            vals.push(Ratio::new(rhs.0, rhs.1 * a[i][i + 1]));
        }
        let last = r - 1;
        let mut lhs = vals[last].scale(a[last][last]);
        if last > 0 {
            lhs = lhs.add(vals[last - 1].scale(a[last][last - 1]));
        }
        lhs == vals[last].scale(theta)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementPair {
    pub beta: u64,
    pub gamma: u64,
}

/// Verification report; the field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub graph: GraphSpec,
    pub code_size: usize,
    pub rho: usize,
    pub cells: Vec<usize>,
    pub alpha: Option<Vec<u64>>,
    pub beta: Option<Vec<u64>>,
    pub gamma: Option<Vec<u64>>,
    pub eigenvalues: Option<Vec<i64>>,
    pub strength: Option<u32>,
    pub checks: Vec<Check>,
    pub completely_regular: bool,
    pub quotient: Option<Vec<Vec<u64>>>,
    pub lambdas: Option<Vec<u64>>,
    pub complement: Option<ComplementPair>,
    pub counterexample: Option<Counterexample>,
    pub label: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.completely_regular && self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Full verification of a code: regularity, Lloyd, strength and the
/// covering-radius-one integer conditions.
pub fn verify<L: Lattice>(graph: &Graph<L>, code: &Code) -> Result<Report> {
    if code.spec() != graph.spec() {
        return Err(Error::AmbientMismatch(format!(
            "code on {} checked in {}",
            code.spec(),
            graph.spec()
        )));
    }
    let spec = graph.spec();
    let (dp, reg) = check_completely_regular(graph, code.ids())?;
    let mut report = Report {
        graph: spec,
        code_size: code.len(),
        rho: dp.rho,
        cells: dp.cell_sizes(),
        alpha: None,
        beta: None,
        gamma: None,
        eigenvalues: None,
        strength: None,
        checks: Vec::new(),
        completely_regular: false,
        quotient: None,
        lambdas: None,
        complement: None,
        counterexample: None,
        label: code.label().map(str::to_string),
    };
    let numbers = match reg {
        Regularity::Irregular(c) => {
            report.counterexample = Some(c);
            return Ok(report);
        }
        Regularity::Regular(n) => n,
    };
    report.completely_regular = true;
    let valency = graph.valency() as u64;
    report.checks.push(Check::new(
        "row_sums",
        numbers.quotient.iter().all(|r| r.iter().sum::<u64>() == valency),
        format!("valency {valency}"),
    ));
    report.checks.push(Check::new(
        "distance_partition",
        true,
        "no edges between non-consecutive cells",
    ));

    let thetas = spec.thetas();
    let eigenvalues = code_eigenvalues(&numbers.quotient_i128(), &thetas)?;
    report.checks.push(Check::new(
        "lloyd",
        true,
        format!("quotient eigenvalues {eigenvalues:?} are graph eigenvalues"),
    ));
    report.checks.push(Check::new(
        "eigenvector_recurrence",
        eigenvector_recurrence_holds(&numbers, &eigenvalues),
        "cell-value relations of each quotient eigenvector",
    ));

    let members: Vec<L::Elem> = code.ids().iter().map(|&i| graph.vertex(i).clone()).collect();
    let strength = design_strength(graph.lattice(), &members);
    let by_eigen = strength_from_eigenvalues(&thetas, &eigenvalues);
    report.checks.push(Check::new(
        "strength_matches_eigenvalues",
        strength.t == by_eigen,
        format!("counted t = {}, eigenvalue rule t = {by_eigen}", strength.t),
    ));

    if dp.rho == 1 {
        let (beta0, gamma1) = (numbers.beta[0], numbers.gamma[0]);
        let ir = integrality_report(spec, beta0, gamma1, strength.t);
        let size_ok = matches!(&ir, Ok(r) if r.size == code.len() as u128);
        report.checks.push(Check::new(
            "size_formula",
            size_ok,
            format!("|V| gamma_1/(beta_0+gamma_1) with {{{beta0}; {gamma1}}}"),
        ));
        report.checks.push(Check::new(
            "integrality",
            matches!(&ir, Ok(r) if r.feasible),
            format!("divisibility up to i = {}", strength.t),
        ));
        report.complement = Some(ComplementPair {
            beta: gamma1,
            gamma: beta0,
        });
    }

    report.alpha = Some(numbers.alpha.clone());
    report.beta = Some(numbers.beta.clone());
    report.gamma = Some(numbers.gamma.clone());
    report.eigenvalues = Some(eigenvalues.iter().map(|&e| e as i64).collect());
    report.strength = Some(strength.t);
    report.lambdas = Some(strength.lambdas);
    report.quotient = Some(numbers.quotient);
    Ok(report)
}
