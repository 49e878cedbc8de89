//! Johnson graphs `J(n,k)` and Grassmann graphs `J_q(n,k)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::galois::{prime_power, FieldSpec};
use crate::subspaces::{gaussian, q_int, Lattice, SubsetLattice, SubspaceLattice};
use crate::{Error, Result};

/// Graphs with more vertices than this generate neighbors on demand
/// instead of caching an adjacency table.
pub const DEFAULT_CACHE_THRESHOLD: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Johnson,
    Grassmann,
}

/// `J(n,k)` (`q = 1`) or `J_q(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    pub family: Family,
    pub q: u64,
    pub n: u32,
    pub k: u32,
}

impl GraphSpec {
    pub fn johnson(n: u32, k: u32) -> Result<Self> {
        Self::checked(Family::Johnson, 1, n, k, false)
    }

    pub fn grassmann(q: u64, n: u32, k: u32) -> Result<Self> {
        Self::checked(Family::Grassmann, q, n, k, false)
    }

    /// Like the constructors above but allows `k > n/2`.
    pub fn unrestricted(family: Family, q: u64, n: u32, k: u32) -> Result<Self> {
        Self::checked(family, q, n, k, true)
    }

    fn checked(family: Family, q: u64, n: u32, k: u32, allow_large_k: bool) -> Result<Self> {
        match family {
            Family::Johnson if q != 1 => {
                return Err(Error::Unsupported("Johnson graphs have q = 1".into()))
            }
            Family::Grassmann if prime_power(q).is_none() => return Err(Error::NotPrimePower(q)),
            _ => {}
        }
        if k == 0 || k >= n {
            return Err(Error::Unsupported(format!("need 0 < k < n, got n={n} k={k}")));
        }
        if !allow_large_k && 2 * k > n {
            return Err(Error::Unsupported(format!(
                "k={k} > n/2 (use the unrestricted constructor to override)"
            )));
        }
        Ok(GraphSpec { family, q, n, k })
    }

    pub fn vertex_count(&self) -> u128 {
        gaussian(self.n, self.k, self.q)
    }

    /// The same ambient space at another level.
    pub fn at_level(&self, k: u32) -> Result<Self> {
        Self::checked(self.family, self.q, self.n, k, true)
    }

    /// `theta_i = q^(i+1) [n-k-i]_q [k-i]_q - [i]_q`, and
    /// `(k-i)(n-k-i) - i` for Johnson graphs.
    pub fn theta(&self, i: u32) -> Result<i128> {
        if i > self.k {
            return Err(Error::OutOfRange {
                index: i as u64,
                bound: self.k as u64 + 1,
            });
        }
        let (n, k) = (self.n, self.k);
        // n - k - i may be negative when k > n/2; the ladder is only
        // meaningful for k <= n/2 but stays well defined for 2k <= n + i.
        let nki = n as i64 - k as i64 - i as i64;
        Ok(if self.q == 1 {
            (k - i) as i128 * nki as i128 - i as i128
        } else {
            let q = self.q as i128;
            let a = if nki <= 0 { 0 } else { q_int(nki as u32, self.q) };
            q.pow(i + 1) * a * q_int(k - i, self.q) - q_int(i, self.q)
        })
    }

    /// All eigenvalues `theta_0 > theta_1 > ... > theta_k`.
    pub fn thetas(&self) -> Vec<i128> {
        let t: Vec<i128> = (0..=self.k).map(|i| self.theta(i).unwrap()).collect();
        debug_assert!(
            2 * self.k > self.n || t.windows(2).all(|w| w[0] > w[1]),
            "eigenvalue ladder must decrease"
        );
        t
    }

    /// Multiplicity of `theta_i`: `[n choose i]_q - [n choose i-1]_q`.
    pub fn multiplicity(&self, i: u32) -> u128 {
        let below = if i == 0 { 0 } else { gaussian(self.n, i - 1, self.q) };
        gaussian(self.n, i, self.q) - below
    }

    pub fn valency(&self) -> u64 {
        self.theta(0).unwrap() as u64
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Johnson => write!(f, "j:{},{}", self.n, self.k),
            Family::Grassmann => write!(f, "jq:{},{},{}", self.q, self.n, self.k),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("graph spec {s:?}: expected j:<n>,<k> or jq:<q>,<n>,<k>"));
        let (head, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (head, nums.as_slice()) {
            ("j", &[n, k]) => GraphSpec::johnson(n as u32, k as u32),
            ("jq", &[q, n, k]) => GraphSpec::grassmann(q, n as u32, k as u32),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Read-only neighbor access shared by the verification and search code.
pub trait Adjacency: Sync {
    fn vertex_count(&self) -> usize;
    fn valency(&self) -> usize;
    fn for_each_neighbor(&self, v: u32, f: &mut dyn FnMut(u32));

    fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.valency());
        self.for_each_neighbor(v, &mut |w| out.push(w));
        out
    }
}

/// A regular graph given by explicit neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    adj: Vec<Vec<u32>>,
    valency: usize,
}

impl ExplicitGraph {
    pub fn new(adj: Vec<Vec<u32>>) -> Result<Self> {
        let valency = adj.first().map_or(0, Vec::len);
        let n = adj.len() as u32;
        for (v, list) in adj.iter().enumerate() {
            if list.len() != valency {
                return Err(Error::Unsupported("graph is not regular".into()));
            }
            for &w in list {
                if w >= n || w == v as u32 || !adj[w as usize].contains(&(v as u32)) {
                    return Err(Error::Unsupported(format!("bad edge {v} -> {w}")));
                }
            }
        }
        Ok(ExplicitGraph { adj, valency })
    }
}

impl Adjacency for ExplicitGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn valency(&self) -> usize {
        self.valency
    }

    fn for_each_neighbor(&self, v: u32, f: &mut dyn FnMut(u32)) {
        for &w in &self.adj[v as usize] {
            f(w)
        }
    }
}

/// A Johnson or Grassmann graph with vertices numbered in canonical order.
pub struct Graph<L: Lattice> {
    spec: GraphSpec,
    lattice: L,
    vertices: Vec<L::Elem>,
    index: FxHashMap<L::Elem, u32>,
    valency: usize,
    /// Flat sorted neighbor lists, `valency` entries per vertex.
    adjacency: Option<Vec<u32>>,
}

impl Graph<SubsetLattice> {
    pub fn johnson(n: u32, k: u32) -> Result<Self> {
        let spec = GraphSpec::johnson(n, k)?;
        Self::from_spec(spec)
    }
}

impl Graph<SubsetLattice> {
    pub fn from_spec(spec: GraphSpec) -> Result<Self> {
        Self::from_spec_with_threshold(spec, DEFAULT_CACHE_THRESHOLD)
    }

    pub fn from_spec_with_threshold(spec: GraphSpec, threshold: usize) -> Result<Self> {
        if spec.family != Family::Johnson {
            return Err(Error::Unsupported(format!("{spec} is not a Johnson graph")));
        }
        Graph::build(spec, SubsetLattice::new(spec.n as usize)?, threshold)
    }
}

impl Graph<SubspaceLattice> {
    pub fn grassmann(q: u64, n: u32, k: u32) -> Result<Self> {
        Self::from_spec(GraphSpec::grassmann(q, n, k)?)
    }

    pub fn from_spec(spec: GraphSpec) -> Result<Self> {
        Self::from_spec_with_threshold(spec, DEFAULT_CACHE_THRESHOLD)
    }

    pub fn from_spec_with_threshold(spec: GraphSpec, threshold: usize) -> Result<Self> {
        if spec.family != Family::Grassmann {
            return Err(Error::Unsupported(format!("{spec} is not a Grassmann graph")));
        }
        let lattice = SubspaceLattice::new(spec.q, spec.n as usize)?;
        Graph::build(spec, lattice, threshold)
    }

    /// Grassmann graph whose coefficient field uses a specific modulus.
    pub fn with_field(field: FieldSpec, n: u32, k: u32) -> Result<Self> {
        let spec = GraphSpec::grassmann(field.order() as u64, n, k)?;
        let lattice = SubspaceLattice::with_field(field, n as usize)?;
        Graph::build(spec, lattice, DEFAULT_CACHE_THRESHOLD)
    }
}

impl<L: Lattice> Graph<L> {
    pub fn build(spec: GraphSpec, lattice: L, cache_threshold: usize) -> Result<Self> {
        if lattice.q() != spec.q || lattice.n() != spec.n as usize {
            return Err(Error::AmbientMismatch(format!("lattice does not match {spec}")));
        }
        if spec.vertex_count() > u32::MAX as u128 / 2 {
            return Err(Error::Unsupported(format!("{spec} is too large")));
        }
        let vertices = lattice.enumerate(spec.k as usize);
        debug_assert_eq!(vertices.len() as u128, spec.vertex_count());
        let index: FxHashMap<L::Elem, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let mut graph = Graph {
            spec,
            lattice,
            vertices,
            index,
            valency: spec.valency() as usize,
            adjacency: None,
        };
        if graph.vertices.len() <= cache_threshold {
            let lists: Vec<Vec<u32>> = (0..graph.vertices.len() as u32)
                .into_par_iter()
                .map(|v| {
                    let mut l = graph.generate_neighbors(v);
                    l.sort_unstable();
                    l
                })
                .collect();
            graph.adjacency = Some(lists.concat());
        }
        Ok(graph)
    }

    pub fn spec(&self) -> GraphSpec {
        self.spec
    }

    pub fn lattice(&self) -> &L {
        &self.lattice
    }

    pub fn vertices(&self) -> &[L::Elem] {
        &self.vertices
    }

    pub fn vertex(&self, id: u32) -> &L::Elem {
        &self.vertices[id as usize]
    }

    pub fn id(&self, x: &L::Elem) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn is_cached(&self) -> bool {
        self.adjacency.is_some()
    }

    fn generate_neighbors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.valency);
        self.lattice
            .for_each_neighbor(&self.vertices[v as usize], &mut |w| out.push(self.index[&w]));
        out
    }

    /// Adjacency predicate on vertex objects.
    pub fn adjacent(&self, a: &L::Elem, b: &L::Elem) -> bool {
        let k = self.spec.k as usize;
        self.lattice.rank_of(a) == k
            && self.lattice.rank_of(b) == k
            && self.lattice.meet_rank(a, b) + 1 == k
    }

    pub fn format_vertex(&self, id: u32) -> String {
        self.lattice.format(self.vertex(id))
    }
}

impl<L: Lattice> Adjacency for Graph<L> {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn valency(&self) -> usize {
        self.valency
    }

    fn for_each_neighbor(&self, v: u32, f: &mut dyn FnMut(u32)) {
        match &self.adjacency {
            Some(flat) => {
                let start = v as usize * self.valency;
                for &w in &flat[start..start + self.valency] {
                    f(w)
                }
            }
            None => self
                .lattice
                .for_each_neighbor(&self.vertices[v as usize], &mut |w| f(self.index[&w])),
        }
    }
}

/// A graph of either family, for code paths driven by a runtime spec.
pub enum AnyGraph {
    Johnson(Graph<SubsetLattice>),
    Grassmann(Graph<SubspaceLattice>),
}

impl AnyGraph {
    pub fn build(spec: GraphSpec) -> Result<Self> {
        Ok(match spec.family {
            Family::Johnson => AnyGraph::Johnson(Graph::<SubsetLattice>::from_spec(spec)?),
            Family::Grassmann => AnyGraph::Grassmann(Graph::<SubspaceLattice>::from_spec(spec)?),
        })
    }

    pub fn spec(&self) -> GraphSpec {
        match self {
            AnyGraph::Johnson(g) => g.spec(),
            AnyGraph::Grassmann(g) => g.spec(),
        }
    }
}
