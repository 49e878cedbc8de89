//! Search for covering radius one codes that are unions of orbits of a
//! group of automorphisms.
//!
//! With orbits `O_1..O_r` and `B_ij` the number of neighbors in `O_j` of a
//! vertex of `O_i`, a union of orbits with indicator `x` is completely
//! regular with `{beta_0; gamma_1}` iff
//! `sum_j B_ij x_j = (m - beta_0 - gamma_1) x_i + gamma_1` for every `i`.
//! The solver is an exact depth-first search with interval propagation.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::galois::FieldSpec;
use crate::graphs::{Adjacency, Graph, GraphSpec};
use crate::subspaces::{Lattice, SubspaceLattice};
use crate::verify::{integrality_report, Code};
use crate::{Error, Result};

/// Vertex counts up to which generators are checked on every vertex.
pub const EXHAUSTIVE_AUTOMORPHISM_CHECK: usize = 2000;
const SAMPLED_VERTICES: usize = 2000;

/// A group given by generating permutations of the vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    spec: GraphSpec,
    generators: Vec<Vec<u32>>,
    description: String,
}

impl GroupAction {
    /// Checks that every generator is a permutation and an automorphism.
    pub fn new<G: Adjacency + ?Sized>(
        graph: &G,
        spec: GraphSpec,
        generators: Vec<Vec<u32>>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let n = graph.vertex_count();
        for (gi, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(Error::NotAutomorphism(format!(
                    "generator {gi} has length {} on {n} vertices",
                    g.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in g {
                if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::NotAutomorphism(format!(
                        "generator {gi} is not a permutation"
                    )));
                }
            }
            check_automorphism(graph, g).map_err(|v| {
                Error::NotAutomorphism(format!("generator {gi} breaks adjacency at vertex {v}"))
            })?;
        }
        Ok(GroupAction {
            spec,
            generators,
            description: description.into(),
        })
    }

    /// For permutations induced by semilinear maps, which are automorphisms
    /// by construction.
    fn from_field_maps(spec: GraphSpec, generators: Vec<Vec<u32>>, description: impl Into<String>) -> Self {
        GroupAction {
            spec,
            generators,
            description: description.into(),
        }
    }

    pub fn trivial<G: Adjacency + ?Sized>(graph: &G, spec: GraphSpec) -> Self {
        GroupAction {
            spec,
            generators: vec![(0..graph.vertex_count() as u32).collect()],
            description: "identity".into(),
        }
    }

    pub fn spec(&self) -> GraphSpec {
        self.spec
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// The group generated by the generators of both actions.
    pub fn join(&self, other: &GroupAction) -> Result<GroupAction> {
        if self.spec != other.spec {
            return Err(Error::AmbientMismatch(format!("{} and {}", self.spec, other.spec)));
        }
        Ok(GroupAction {
            spec: self.spec,
            generators: self.generators.iter().chain(&other.generators).cloned().collect(),
            description: format!("{} + {}", self.description, other.description),
        })
    }
}

/// Returns the first vertex whose image of its neighborhood is not the
/// neighborhood of its image.
fn check_automorphism<G: Adjacency + ?Sized>(graph: &G, perm: &[u32]) -> std::result::Result<(), u32> {
    let n = graph.vertex_count();
    let sample: Vec<u32> = if n <= EXHAUSTIVE_AUTOMORPHISM_CHECK {
        (0..n as u32).collect()
    } else {
        let stride = n / SAMPLED_VERTICES;
        (0..SAMPLED_VERTICES).map(|i| (i * stride) as u32).collect()
    };
    let bad = sample.par_iter().find_first(|&&v| {
        let mut image: Vec<u32> = graph.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
        let mut target = graph.neighbors(perm[v as usize]);
        image.sort_unstable();
        target.sort_unstable();
        image != target
    });
    match bad {
        Some(&v) => Err(v),
        None => Ok(()),
    }
}

/// The permutation of vertices induced by an `F_q`-linear map of
/// `field = GF(q^n)`, identified with `F_q^n`.
fn field_map_permutation(
    graph: &Graph<SubspaceLattice>,
    field: &FieldSpec,
    map: impl Fn(crate::galois::FieldElement) -> crate::galois::FieldElement + Sync,
) -> Result<Vec<u32>> {
    let lattice = graph.lattice();
    // probe the field identification once so errors surface here
    lattice.vector_of(field, field.exp(0))?;
    Ok(graph
        .vertices()
        .par_iter()
        .map(|u| {
            let image = lattice.rref(u.rows().iter().map(|&r| {
                let x = lattice.element_of(field, r).expect("checked extension");
                lattice.vector_of(field, map(x)).expect("checked extension")
            }));
            graph.id(&image).expect("image of a vertex is a vertex")
        })
        .collect())
}

/// The permutation of vertices induced by `v -> a^e v` with `a` the
/// primitive element of `field = GF(q^n)`.
pub fn singer_permutation(graph: &Graph<SubspaceLattice>, field: &FieldSpec, e: u64) -> Result<Vec<u32>> {
    let a = field.exp(e);
    field_map_permutation(graph, field, |x| field.mul(a, x))
}

/// The permutation induced by the Frobenius map `v -> v^(p^f)`.
pub fn frobenius_permutation(graph: &Graph<SubspaceLattice>, field: &FieldSpec, f: u32) -> Result<Vec<u32>> {
    let e = (field.characteristic() as u64).pow(f);
    field_map_permutation(graph, field, |x| field.pow(x, e))
}

/// The permutation induced by the semilinear map `v -> a^s v^(p^f)`.
pub fn semilinear_permutation(graph: &Graph<SubspaceLattice>, field: &FieldSpec, s: u64, f: u32) -> Result<Vec<u32>> {
    let c = field.exp(s);
    let e = (field.characteristic() as u64).pow(f);
    field_map_permutation(graph, field, |x| field.mul(c, field.pow(x, e)))
}

pub fn frobenius_action(graph: &Graph<SubspaceLattice>, f: u32) -> Result<GroupAction> {
    let spec = graph.spec();
    let field = FieldSpec::new(spec.q as u32, spec.n, None)?;
    let perm = frobenius_permutation(graph, &field, f)?;
    GroupAction::new(graph, spec, vec![perm], format!("frobenius:{f}"))
}

/// The cyclic group generated by multiplication with `a^e` in the default
/// field `GF(q^n)`.
pub fn singer_action(graph: &Graph<SubspaceLattice>, e: u64) -> Result<GroupAction> {
    let spec = graph.spec();
    let field = FieldSpec::new(spec.q as u32, spec.n, None)?;
    singer_action_in(graph, &field, e)
}

pub fn singer_action_in(graph: &Graph<SubspaceLattice>, field: &FieldSpec, e: u64) -> Result<GroupAction> {
    let perm = singer_permutation(graph, field, e)?;
    GroupAction::new(graph, graph.spec(), vec![perm], format!("singer:{e}"))
}

/// A partition of the orbit variables into the orbits of a larger group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coarsening {
    pub description: String,
    /// Block of each variable, numbered `0..count`.
    pub blocks: Vec<u32>,
}

impl Coarsening {
    pub fn len(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&b| b as usize + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Overgroups of the Singer subgroup `<a^e>` obtained by adding maps of
/// `GF(q^n)` that are linear over the subfield `F` generated by `a^e`.
/// Such maps commute with `a^e`, so each group is only a small multiple of
/// the original. Maps are drawn from a seeded generator and raised to a
/// power of random order. Each map `h` is tried alone, together with the
/// Frobenius map, and together with a random map `s` (linear or
/// semilinear over `F`) that normalizes `H = <a^e, h>` with `s^2` in `H`;
/// the last kind is only searched when all `F`-linear maps can be listed
/// cheaply. Up to `count` coarsenings with pairwise distinct partitions are
/// returned in the order found, at most `PER_SIZE` of any one block count
/// so that the sample is not dominated by the commonest map orders.
pub fn centralizer_coarsenings(
    graph: &Graph<SubspaceLattice>,
    e: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<Coarsening>> {
    let spec = graph.spec();
    let field = FieldSpec::new(spec.q as u32, spec.n, None)?;
    let order = field.order() as usize;
    if order > 1 << 16 {
        return Err(Error::Unsupported(format!("centralizer search in GF({order})")));
    }
    let b = field.exp(e);
    let d = (1..=spec.n)
        .filter(|d| spec.n % d == 0)
        .find(|&d| field.pow(b, spec.q.pow(d)) == b)
        .expect("a^e lies in the full field");
    let sub = field.subfield(d)?;
    let m = spec.n / d;
    // coordinates over the subfield in the basis 1, a, .., a^(m-1)
    let mut coords = vec![Vec::new(); order];
    for combo in 0..sub.len().pow(m) {
        let digits: Vec<usize> = (0..m).map(|i| combo / sub.len().pow(i) % sub.len()).collect();
        let x = digits
            .iter()
            .enumerate()
            .fold(field.zero(), |acc, (i, &c)| field.add(acc, field.mul(sub[c], field.exp(i as u64))));
        coords[x.index() as usize] = digits;
    }
    let linear = |images: &[u32]| -> Option<Map> {
        let map: Map = coords
            .iter()
            .map(|c| {
                c.iter().zip(images).fold(field.zero(), |acc, (&c, &y)| {
                    field.add(acc, field.mul(sub[c], field.element(y).expect("index in range")))
                })
            })
            .map(|x| x.index())
            .collect();
        is_bijection(&map).then_some(map)
    };
    let identity: Map = (0..order as u32).collect();
    let scalar: Map = (0..order as u32).map(|x| field.mul(b, field.element(x).unwrap()).index()).collect();
    let frobenius: Map = (0..order as u32)
        .map(|x| field.pow(field.element(x).unwrap(), field.characteristic() as u64).index())
        .collect();
    let normalizers = NormalizerSearch::new(&field, &sub, &coords, m, d, &frobenius);

    let base_action = singer_action_in(graph, &field, e)?;
    let mut sampler = Sampler {
        graph,
        field: &field,
        base: orbits(&base_action),
        base_action,
        seen: std::collections::HashSet::new(),
        out: Vec::new(),
        count,
        prefix: format!("singer:{e} + GF({}^{d})-linear map", spec.q),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut searched = std::collections::HashSet::new();
    let mut searched_sizes = std::collections::HashMap::new();
    for _ in 0..count.saturating_mul(64) {
        if sampler.out.len() >= count {
            break;
        }
        let images: Vec<u32> = (0..m).map(|_| rng.gen_range(1..order as u32)).collect();
        let Some(map) = linear(&images) else { continue };
        let k = map_order(&map, &identity);
        let divisors: Vec<u64> = (2..=k).filter(|x| k % x == 0).collect();
        if divisors.is_empty() {
            continue;
        }
        let target = divisors[rng.gen_range(0..divisors.len())];
        let h = (0..k / target).fold(identity.clone(), |acc, _| compose(&map, &acc));
        let size = sampler.offer(&[&h], &format!("of order {target}"))?;
        sampler.offer(&[&h, &frobenius], &format!("of order {target} + frobenius:1"))?;
        let Some(normalizers) = &normalizers else { continue };
        let searches = searched_sizes.entry(size).or_insert(0);
        if *searches >= PER_SIZE {
            continue;
        }
        let Some(group) = closure(&[&scalar, &h], 4096) else { continue };
        let mut group: Vec<Map> = group.into_iter().collect();
        group.sort_unstable();
        if !searched.insert(group.clone()) {
            continue;
        }
        *searches += 1;
        let found = normalizers.extensions(&group, &[&scalar, &h]);
        if let Some(s) = found.choose(&mut rng) {
            let kind = if s.1 { "semilinear" } else { "linear" };
            sampler.offer(&[&h, &s.0], &format!("of order {target} + normalizing {kind} map"))?;
        }
    }
    Ok(sampler.out)
}

/// Number of blocks a coarsening may share with earlier ones.
const PER_SIZE: usize = 2;

type Map = Vec<u32>;

fn compose(f: &[u32], g: &[u32]) -> Map {
    g.iter().map(|&y| f[y as usize]).collect()
}

fn is_bijection(map: &[u32]) -> bool {
    let mut hit = vec![false; map.len()];
    !map.iter().any(|&y| std::mem::replace(&mut hit[y as usize], true))
}

fn map_order(map: &[u32], identity: &[u32]) -> u64 {
    let mut k = 1;
    let mut power = map.to_vec();
    while power != identity {
        power = compose(map, &power);
        k += 1;
    }
    k
}

/// The group generated by `gens`, or `None` past `limit` elements.
fn closure(gens: &[&Map], limit: usize) -> Option<std::collections::HashSet<Map>> {
    let identity: Map = (0..gens[0].len() as u32).collect();
    let mut group = std::collections::HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if group.insert(y.clone()) {
                if group.len() > limit {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(group)
}

/// Every `F`-linear bijection of the field, for normalizer searches.
struct NormalizerSearch<'a> {
    linear: Vec<Map>,
    frobenius: &'a Map,
    /// The Frobenius powers that together with the linear maps give every
    /// `F`-semilinear map.
    degree: u32,
}

const NORMALIZER_SEARCH_LIMIT: usize = 1 << 18;

impl<'a> NormalizerSearch<'a> {
    fn new(
        field: &FieldSpec,
        sub: &[crate::galois::FieldElement],
        coords: &[Vec<usize>],
        m: u32,
        d: u32,
        frobenius: &'a Map,
    ) -> Option<Self> {
        let order = field.order() as usize;
        if (order - 1).checked_pow(m).is_none_or(|n| n > NORMALIZER_SEARCH_LIMIT) {
            return None;
        }
        let t = field.tables().ok()?;
        let sub: Vec<u32> = sub.iter().map(|x| x.index()).collect();
        let mut linear = Vec::new();
        let mut images = vec![1u32; m as usize];
        loop {
            let map: Map = coords
                .iter()
                .map(|c| c.iter().zip(&images).fold(0, |acc, (&c, &y)| t.add(acc, t.mul(sub[c], y))))
                .collect();
            if is_bijection(&map) {
                linear.push(map);
            }
            // next tuple of nonzero images
            let mut i = 0;
            while i < images.len() && images[i] as usize == order - 1 {
                images[i] = 1;
                i += 1;
            }
            if i == images.len() {
                break;
            }
            images[i] += 1;
        }
        Some(NormalizerSearch {
            linear,
            frobenius,
            degree: d,
        })
    }

    /// Maps `s` outside `group` with `s^2` in `group` and `s g s^-1` in
    /// `group` for every generator; the flag marks semilinear ones.
    fn extensions(&self, group: &[Map], gens: &[&Map]) -> Vec<(Map, bool)> {
        let n = self.frobenius.len();
        // group elements by their image of 1, for cheap membership tests
        let mut by_image = vec![Vec::new(); n];
        for (i, g) in group.iter().enumerate() {
            by_image[g[1] as usize].push(i);
        }
        let member = |x: &[u32]| by_image[x[1] as usize].iter().any(|&i| group[i] == x);
        let mut twists = vec![(0..n as u32).collect::<Map>()];
        for _ in 1..self.degree {
            twists.push(compose(self.frobenius, twists.last().unwrap()));
        }
        let mut out = Vec::new();
        for (j, twist) in twists.iter().enumerate() {
            for l in &self.linear {
                let at = |x: u32| l[twist[x as usize] as usize];
                if by_image[at(at(1)) as usize].is_empty() {
                    continue;
                }
                let s = compose(l, twist);
                if member(&s) || !member(&compose(&s, &s)) {
                    continue;
                }
                let mut inverse = vec![0u32; n];
                for (x, &y) in s.iter().enumerate() {
                    inverse[y as usize] = x as u32;
                }
                if gens.iter().all(|g| member(&compose(&s, &compose(g, &inverse)))) {
                    out.push((s, j > 0));
                }
            }
        }
        out
    }
}

struct Sampler<'a> {
    graph: &'a Graph<SubspaceLattice>,
    field: &'a FieldSpec,
    base_action: GroupAction,
    base: OrbitSystem,
    seen: std::collections::HashSet<Vec<u32>>,
    out: Vec<Coarsening>,
    count: usize,
    prefix: String,
}

impl Sampler<'_> {
    /// Adds the coarsening of `<a^e, maps>` unless it is trivial, already
    /// known or of an overrepresented size.
    fn offer(&mut self, maps: &[&Map], description: &str) -> Result<usize> {
        let perms = maps
            .iter()
            .map(|map| {
                field_map_permutation(self.graph, self.field, |x| {
                    self.field.element(map[x.index() as usize]).expect("index in range")
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let extra = GroupAction::from_field_maps(self.graph.spec(), perms, description);
        let blocks = self.base.blocks_in(&orbits(&self.base_action.join(&extra)?))?;
        let c = Coarsening {
            description: format!("{} {description} (candidate {})", self.prefix, self.out.len()),
            blocks,
        };
        let size = c.len();
        if self.out.len() < self.count
            && size != self.base.len()
            && self.out.iter().filter(|o| o.len() == size).count() < PER_SIZE
            && self.seen.insert(c.blocks.clone())
        {
            self.out.push(c);
        }
        Ok(size)
    }
}

/// Orbits numbered by increasing minimum vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSystem {
    orbit_of: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl OrbitSystem {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn orbit_of(&self, v: u32) -> u32 {
        self.orbit_of[v as usize]
    }

    /// Sorted members of orbit `i`.
    pub fn members(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    pub fn representative(&self, i: usize) -> u32 {
        self.members[i][0]
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.len() as u64).collect()
    }

    /// For each orbit, the orbit of `coarser` containing it. Fails unless
    /// every orbit lies inside one orbit of `coarser`.
    pub fn blocks_in(&self, coarser: &OrbitSystem) -> Result<Vec<u32>> {
        if self.vertex_count() != coarser.vertex_count() {
            return Err(Error::AmbientMismatch("orbit systems of different graphs".into()));
        }
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let b = coarser.orbit_of(m[0]);
                if m.iter().all(|&v| coarser.orbit_of(v) == b) {
                    Ok(b)
                } else {
                    Err(Error::AmbientMismatch(format!("orbit {i} meets two coarse orbits")))
                }
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.orbit_of.len()
    }
}

pub fn orbits(action: &GroupAction) -> OrbitSystem {
    let n = action.generators.first().map_or(0, Vec::len);
    let mut orbit_of = vec![u32::MAX; n];
    let mut members = Vec::new();
    for v in 0..n as u32 {
        if orbit_of[v as usize] != u32::MAX {
            continue;
        }
        let id = members.len() as u32;
        orbit_of[v as usize] = id;
        let mut orbit = vec![v];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in &action.generators {
                let y = g[x as usize];
                if orbit_of[y as usize] == u32::MAX {
                    orbit_of[y as usize] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    OrbitSystem { orbit_of, members }
}

fn orbit_counts<G: Adjacency + ?Sized>(graph: &G, orbits: &OrbitSystem, v: u32) -> Vec<i64> {
    let mut row = vec![0i64; orbits.len()];
    graph.for_each_neighbor(v, &mut |w| row[orbits.orbit_of(w) as usize] += 1);
    row
}

/// `B_ij` counted from the representative of `O_i` and recounted from a
/// second member (every member of orbits of size at most 8).
pub fn quotient_matrix<G: Adjacency + ?Sized>(graph: &G, orbits: &OrbitSystem) -> Result<Vec<Vec<i64>>> {
    if graph.vertex_count() != orbits.vertex_count() {
        return Err(Error::AmbientMismatch("orbit system of another graph".into()));
    }
    (0..orbits.len())
        .into_par_iter()
        .map(|i| {
            let m = orbits.members(i);
            let row = orbit_counts(graph, orbits, m[0]);
            let others = if m.len() <= 8 { &m[1..] } else { &m[1..2] };
            for &v in others {
                if orbit_counts(graph, orbits, v) != row {
                    return Err(Error::QuotientNotEquitable(format!(
                        "vertices {} and {v} of orbit {i} disagree",
                        m[0]
                    )));
                }
            }
            Ok(row)
        })
        .collect()
}

/// Candidate `{beta_0; gamma_1}` for one graph eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterRow {
    pub index: u32,
    pub theta: i64,
    /// Strength `index - 1` of a code with this eigenvalue.
    pub strength: u32,
    /// `gamma_1` passing the integer conditions, `gamma_1 <= beta_0`.
    pub feasible: Vec<u64>,
    /// `gamma_1` in the canonical half failing them.
    pub rejected: Vec<u64>,
}

impl ParameterRow {
    pub fn sum(&self, valency: u64) -> u64 {
        (valency as i64 - self.theta) as u64
    }
}

/// For each `i >= 1`: `beta_0 + gamma_1 = m - theta_i`, with `gamma_1`
/// ranging over `1..=(m - theta_i)/2`.
pub fn feasible_parameters(spec: GraphSpec) -> Vec<ParameterRow> {
    let m = spec.valency() as i64;
    (1..=spec.k)
        .map(|i| {
            let theta = spec.theta(i).expect("index in range") as i64;
            let s = (m - theta) as u64;
            let (feasible, rejected) = (1..=s / 2).partition(|&g| {
                integrality_report(spec, s - g, g, i - 1).is_ok_and(|r| r.feasible)
            });
            ParameterRow {
                index: i,
                theta,
                strength: i - 1,
                feasible,
                rejected,
            }
        })
        .collect()
}

/// A sparse linear equality over binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(i64, u32)>,
    pub rhs: i64,
}

/// The orbit system of equations for one parameter pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipInstance {
    pub quotient: Vec<Vec<i64>>,
    pub orbit_sizes: Vec<u64>,
    pub valency: u64,
    pub beta0: u64,
    pub gamma1: u64,
    pub theta: i64,
    pub size: u64,
}

impl BipInstance {
    pub fn new(quotient: Vec<Vec<i64>>, orbit_sizes: Vec<u64>, beta0: u64, gamma1: u64) -> Result<Self> {
        let r = orbit_sizes.len();
        if quotient.len() != r || quotient.iter().any(|row| row.len() != r) || r == 0 {
            return Err(Error::Unsupported("quotient matrix shape".into()));
        }
        let valency = quotient[0].iter().sum::<i64>();
        for i in 0..r {
            if quotient[i].iter().sum::<i64>() != valency {
                return Err(Error::QuotientNotEquitable(format!("row {i} sum")));
            }
            for j in 0..r {
                if quotient[i][j] * orbit_sizes[i] as i64 != quotient[j][i] * orbit_sizes[j] as i64 {
                    return Err(Error::QuotientNotEquitable(format!("edges between orbits {i} and {j}")));
                }
            }
        }
        let vertices: u64 = orbit_sizes.iter().sum();
        let s = beta0 + gamma1;
        if s == 0 || (vertices * gamma1) % s != 0 {
            return Err(Error::Infeasible(format!(
                "|V| gamma_1 / (beta_0 + gamma_1) = {vertices}*{gamma1}/{s} is not an integer"
            )));
        }
        Ok(BipInstance {
            quotient,
            orbit_sizes,
            valency: valency as u64,
            beta0,
            gamma1,
            theta: valency - s as i64,
            size: vertices * gamma1 / s,
        })
    }

    pub fn variables(&self) -> usize {
        self.orbit_sizes.len()
    }

    /// `sum_j (B_ij - theta [i = j]) x_j = gamma_1` for each orbit, then the
    /// cardinality row.
    pub fn constraints(&self) -> Vec<Constraint> {
        let r = self.variables();
        let mut out: Vec<Constraint> = (0..r)
            .map(|i| Constraint {
                terms: (0..r)
                    .map(|j| {
                        let c = self.quotient[i][j] - if i == j { self.theta } else { 0 };
                        (c, j as u32)
                    })
                    .filter(|&(c, _)| c != 0)
                    .collect(),
                rhs: self.gamma1 as i64,
            })
            .collect();
        out.push(Constraint {
            terms: (0..r as u32)
                .map(|j| (self.orbit_sizes[j as usize] as i64, j))
                .collect(),
            rhs: self.size as i64,
        });
        out
    }

    pub fn is_solution(&self, x: &[bool]) -> bool {
        x.len() == self.variables()
            && self.constraints().iter().all(|c| {
                c.terms
                    .iter()
                    .filter(|&&(_, j)| x[j as usize])
                    .map(|&(a, _)| a)
                    .sum::<i64>()
                    == c.rhs
            })
    }

    /// The instance whose solutions are the complements of this one's.
    pub fn complement(&self) -> Result<BipInstance> {
        BipInstance::new(self.quotient.clone(), self.orbit_sizes.clone(), self.gamma1, self.beta0)
    }

    /// The system for the solutions that are constant on each block, with
    /// `blocks[j]` the block of variable `j`. The blocks must form an
    /// equitable partition of the quotient, as orbits of a larger group do.
    pub fn coarsen(&self, blocks: &[u32]) -> Result<BipInstance> {
        let r = self.variables();
        if blocks.len() != r {
            return Err(Error::AmbientMismatch(format!("{} blocks for {r} variables", blocks.len())));
        }
        let nb = blocks.iter().max().map_or(0, |&b| b as usize + 1);
        let mut members = vec![Vec::new(); nb];
        for (j, &b) in blocks.iter().enumerate() {
            members[b as usize].push(j);
        }
        if members.iter().any(Vec::is_empty) {
            return Err(Error::Unsupported("block ids must be 0..count without gaps".into()));
        }
        let row = |i: usize| {
            let mut out = vec![0i64; nb];
            for (j, &b) in blocks.iter().enumerate() {
                out[b as usize] += self.quotient[i][j];
            }
            out
        };
        let mut quotient = Vec::with_capacity(nb);
        for (b, m) in members.iter().enumerate() {
            let first = row(m[0]);
            if let Some(&i) = m[1..].iter().find(|&&i| row(i) != first) {
                return Err(Error::QuotientNotEquitable(format!(
                    "variables {} and {i} of block {b} disagree",
                    m[0]
                )));
            }
            quotient.push(first);
        }
        let sizes = members
            .iter()
            .map(|m| m.iter().map(|&j| self.orbit_sizes[j]).sum())
            .collect();
        BipInstance::new(quotient, sizes, self.beta0, self.gamma1)
    }
}

/// The fine assignment of a solution of a coarsened instance.
pub fn expand(coarse: &[bool], blocks: &[u32]) -> Vec<bool> {
    blocks.iter().map(|&b| coarse[b as usize]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    First,
    All,
    Count,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Mode::First),
            "all" => Ok(Mode::All),
            "count" => Ok(Mode::Count),
            _ => Err(Error::Parse(format!("mode {s:?} (first|all|count)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Sat,
    Unsat,
    BudgetExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::BudgetExceeded => "BUDGET_EXCEEDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// `Sat` once any solution is known, even if the budget ran out later.
    pub status: Status,
    /// Whether the search space was exhausted.
    pub complete: bool,
    pub solutions: Vec<Vec<bool>>,
    pub count: u64,
    pub nodes: u64,
    /// The coarsening whose system produced the solution, if any.
    pub via: Option<String>,
}

struct Row {
    rhs: i64,
    fixed: i64,
    pos_free: i64,
    neg_free: i64,
    max_abs: i64,
    terms: Vec<(i64, u32)>,
}

impl Row {
    fn lo(&self) -> i64 {
        self.fixed + self.neg_free
    }
    fn hi(&self) -> i64 {
        self.fixed + self.pos_free
    }
    fn slack(&self) -> i64 {
        (self.rhs - self.lo()).min(self.hi() - self.rhs)
    }
}

struct Solver<'a> {
    rows: Vec<Row>,
    columns: Vec<Vec<(u32, i64)>>,
    value: Vec<i8>,
    trail: Vec<u32>,
    rank: Vec<u32>,
    budget: &'a Budget,
    start: Instant,
    nodes: u64,
    mode: Mode,
    solutions: Vec<Vec<bool>>,
    count: u64,
    out_of_budget: bool,
}

const FREE: i8 = -1;

impl<'a> Solver<'a> {
    fn new(instance: &BipInstance, mode: Mode, budget: &'a Budget) -> Self {
        let r = instance.variables();
        let constraints = instance.constraints();
        let mut columns = vec![Vec::new(); r];
        let rows: Vec<Row> = constraints
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                for &(a, j) in &c.terms {
                    columns[j as usize].push((i as u32, a));
                }
                Row {
                    rhs: c.rhs,
                    fixed: 0,
                    pos_free: c.terms.iter().map(|t| t.0.max(0)).sum(),
                    neg_free: c.terms.iter().map(|t| t.0.min(0)).sum(),
                    max_abs: c.terms.iter().map(|t| t.0.abs()).max().unwrap_or(0),
                    terms: c.terms,
                }
            })
            .collect();
        let mut order: Vec<u32> = (0..r as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(budget.seed));
        let mut rank = vec![0; r];
        for (p, &j) in order.iter().enumerate() {
            rank[j as usize] = p as u32;
        }
        Solver {
            rows,
            columns,
            value: vec![FREE; r],
            trail: Vec::new(),
            rank,
            budget,
            start: Instant::now(),
            nodes: 0,
            mode,
            solutions: Vec::new(),
            count: 0,
            out_of_budget: false,
        }
    }

    /// Sets `x_j` and updates row bounds; false on a violated row.
    fn assign(&mut self, j: u32, v: bool, queue: &mut Vec<u32>) -> bool {
        self.value[j as usize] = v as i8;
        self.trail.push(j);
        let mut ok = true;
        for &(i, a) in &self.columns[j as usize] {
            let row = &mut self.rows[i as usize];
            if a > 0 {
                row.pos_free -= a;
            } else {
                row.neg_free -= a;
            }
            if v {
                row.fixed += a;
            }
            if row.rhs < row.lo() || row.rhs > row.hi() {
                ok = false;
            } else if row.slack() < row.max_abs {
                queue.push(i);
            }
        }
        ok
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let j = self.trail.pop().unwrap();
            let v = self.value[j as usize] == 1;
            self.value[j as usize] = FREE;
            for &(i, a) in &self.columns[j as usize] {
                let row = &mut self.rows[i as usize];
                if a > 0 {
                    row.pos_free += a;
                } else {
                    row.neg_free += a;
                }
                if v {
                    row.fixed -= a;
                }
            }
        }
    }

    /// Forces variables whose other value would leave `rhs` outside a
    /// row's achievable interval. False on conflict.
    fn propagate(&mut self, queue: &mut Vec<u32>) -> bool {
        while let Some(i) = queue.pop() {
            let (lo, hi, rhs) = {
                let row = &self.rows[i as usize];
                (row.lo(), row.hi(), row.rhs)
            };
            let mut forced = Vec::new();
            for &(a, j) in &self.rows[i as usize].terms {
                if self.value[j as usize] != FREE {
                    continue;
                }
                let one_ok = lo + a.max(0) <= rhs && rhs <= hi + a.min(0);
                let zero_ok = lo - a.min(0) <= rhs && rhs <= hi - a.max(0);
                match (zero_ok, one_ok) {
                    (false, false) => return false,
                    (true, false) => forced.push((j, false)),
                    (false, true) => forced.push((j, true)),
                    (true, true) => {}
                }
            }
            for (j, v) in forced {
                if self.value[j as usize] == FREE && !self.assign(j, v, queue) {
                    return false;
                }
            }
        }
        true
    }

    /// The free variable with the largest coefficient in the tightest row.
    fn choose(&self) -> Option<u32> {
        let mut best_row: Option<(i64, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row.terms.iter().any(|&(_, j)| self.value[j as usize] == FREE) {
                continue;
            }
            let s = row.slack();
            if best_row.is_none_or(|(b, _)| s < b) {
                best_row = Some((s, i));
            }
        }
        let (_, i) = best_row?;
        self.rows[i]
            .terms
            .iter()
            .filter(|&&(_, j)| self.value[j as usize] == FREE)
            .max_by_key(|&&(a, j)| (a.abs(), std::cmp::Reverse(self.rank[j as usize])))
            .map(|&(_, j)| j)
    }

    fn over_budget(&mut self) -> bool {
        if self.out_of_budget {
            return true;
        }
        let nodes = self.budget.max_nodes.is_some_and(|m| self.nodes >= m);
        let time = self.nodes % 256 == 0
            && self.budget.max_time.is_some_and(|t| self.start.elapsed() >= t);
        self.out_of_budget = nodes || time;
        self.out_of_budget
    }

    /// Returns true when the search should stop.
    fn search(&mut self) -> bool {
        if self.over_budget() {
            return true;
        }
        self.nodes += 1;
        let Some(j) = self.choose() else {
            // every row is satisfied exactly once all variables are fixed
            self.count += 1;
            if self.mode != Mode::Count {
                self.solutions.push(self.value.iter().map(|&v| v == 1).collect());
            }
            return self.mode == Mode::First;
        };
        for v in [true, false] {
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.assign(j, v, &mut queue) && self.propagate(&mut queue) && self.search() {
                self.undo_to(mark);
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Exhaustive search within the budget.
pub fn solve(instance: &BipInstance, mode: Mode, budget: &Budget) -> Outcome {
    solve_with(instance, &[], mode, budget)
}

/// Exhaustive search among assignments extending `fixed`.
pub fn solve_with(instance: &BipInstance, fixed: &[(u32, bool)], mode: Mode, budget: &Budget) -> Outcome {
    let mut s = Solver::new(instance, mode, budget);
    let mut queue: Vec<u32> = (0..s.rows.len() as u32).collect();
    let mut root_ok = true;
    for &(j, v) in fixed {
        if !root_ok {
            break;
        }
        root_ok = match s.value[j as usize] {
            FREE => s.assign(j, v, &mut queue),
            x => (x == 1) == v,
        };
    }
    let root_ok = root_ok && s.propagate(&mut queue);
    if root_ok {
        s.search();
    }
    let found = s.count > 0;
    let complete = !s.out_of_budget || (mode == Mode::First && found);
    let status = if found {
        Status::Sat
    } else if s.out_of_budget {
        Status::BudgetExceeded
    } else {
        Status::Unsat
    };
    Outcome {
        status,
        complete,
        solutions: s.solutions,
        count: s.count,
        nodes: s.nodes,
        via: None,
    }
}

/// Coarsenings searched alongside the instance itself.
///
/// A solution that is constant on the orbits of a larger group is a
/// solution of the instance, and the smaller system of the larger group is
/// often far easier. In `First` mode the instance and its coarsenings are
/// searched round-robin, each restarted with a node budget that starts at
/// [`FIRST_ROUND_NODES`] and doubles per round. Every round uses a new
/// tie-breaking seed, so restarts explore different branches. A system
/// leaves the rotation once exhausted; a coarsening also leaves once the
/// round budget exceeds `nodes_each`. The verdict is UNSAT only when the
/// instance itself is exhausted. Other modes search the instance alone.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Portfolio {
    pub coarsenings: Vec<Coarsening>,
    pub nodes_each: u64,
}

pub const FIRST_ROUND_NODES: u64 = 1000;

pub fn solve_portfolio(instance: &BipInstance, portfolio: &Portfolio, mode: Mode, budget: &Budget) -> Outcome {
    if mode != Mode::First || portfolio.coarsenings.is_empty() {
        return solve(instance, mode, budget);
    }
    let start = Instant::now();
    let mut nodes = 0u64;
    let mut open: Vec<(Option<&Coarsening>, BipInstance)> = portfolio
        .coarsenings
        .iter()
        .filter_map(|c| Some((Some(c), instance.coarsen(&c.blocks).ok()?)))
        .collect();
    open.push((None, instance.clone()));
    let mut round = FIRST_ROUND_NODES;
    let mut restarts = 0u64;
    loop {
        let mut still_open = Vec::new();
        for (c, system) in open {
            if c.is_some() && round > portfolio.nodes_each {
                continue;
            }
            let b = Budget {
                max_nodes: Some(budget.max_nodes.map_or(round, |m| m.saturating_sub(nodes).min(round))),
                max_time: budget.max_time.map(|t| t.saturating_sub(start.elapsed())),
                seed: budget.seed.wrapping_add(restarts),
            };
            if b.max_nodes == Some(0) || b.max_time == Some(Duration::ZERO) {
                return Outcome {
                    status: Status::BudgetExceeded,
                    complete: false,
                    solutions: Vec::new(),
                    count: 0,
                    nodes,
                    via: None,
                };
            }
            let mut out = solve(&system, Mode::First, &b);
            nodes += out.nodes;
            out.nodes = nodes;
            match c {
                None if out.complete => return out,
                None => {}
                Some(c) => {
                    if let Some(x) = out.solutions.first() {
                        let fine = expand(x, &c.blocks);
                        if instance.is_solution(&fine) {
                            return Outcome {
                                status: Status::Sat,
                                complete: true,
                                solutions: vec![fine],
                                count: 1,
                                nodes,
                                via: Some(c.description.clone()),
                            };
                        }
                    }
                    if out.complete {
                        continue;
                    }
                }
            }
            still_open.push((c, system));
        }
        open = still_open;
        round = round.saturating_mul(2);
        restarts += 1;
    }
}

/// Union of the selected orbits.
pub fn lift(assignment: &[bool], orbits: &OrbitSystem) -> Vec<u32> {
    let mut ids: Vec<u32> = assignment
        .iter()
        .enumerate()
        .filter(|(_, &x)| x)
        .flat_map(|(i, _)| orbits.members(i).iter().copied())
        .collect();
    ids.sort_unstable();
    ids
}

pub fn lift_code(assignment: &[bool], orbits: &OrbitSystem, spec: GraphSpec) -> Result<Code> {
    Code::new(spec, lift(assignment, orbits))
}

fn term_text(a: i64, j: u32) -> String {
    format!("{}{} x{}", if a < 0 { "-" } else { "+" }, a.abs(), j + 1)
}

/// Pseudo-Boolean OPB text: one equality per orbit plus the cardinality row.
pub fn export_opb(instance: &BipInstance) -> String {
    let cs = instance.constraints();
    let mut out = format!(
        "* #variable= {} #constraint= {}\n* beta0= {} gamma1= {} theta= {} size= {}\n",
        instance.variables(),
        cs.len(),
        instance.beta0,
        instance.gamma1,
        instance.theta,
        instance.size
    );
    for c in &cs {
        let terms: Vec<String> = c.terms.iter().map(|&(a, j)| term_text(a, j)).collect();
        out.push_str(&format!("{} = {} ;\n", terms.join(" "), c.rhs));
    }
    out
}

/// CPLEX LP text of the same system with a zero objective.
pub fn export_lp(instance: &BipInstance) -> String {
    let cs = instance.constraints();
    let r = instance.variables();
    let mut out = format!(
        "\\ beta0 = {} gamma1 = {} theta = {} size = {}\nMinimize\n obj: 0 x1\nSubject To\n",
        instance.beta0, instance.gamma1, instance.theta, instance.size
    );
    for (i, c) in cs.iter().enumerate() {
        let name = if i < r { format!("o{}", i + 1) } else { "card".to_string() };
        let terms: Vec<String> = c.terms.iter().map(|&(a, j)| term_text(a, j)).collect();
        out.push_str(&format!(" {name}: {} = {}\n", terms.join(" "), c.rhs));
    }
    out.push_str("Binary\n");
    for j in 0..r {
        out.push_str(&format!(" x{}\n", j + 1));
    }
    out.push_str("End\n");
    out
}

/// Reads the equality constraints of an OPB text as written by
/// [`export_opb`]. Returns the variable count and the constraints.
pub fn parse_opb(text: &str) -> Result<(usize, Vec<Constraint>)> {
    let mut vars = None;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix('*') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if let Some(p) = toks.iter().position(|&t| t == "#variable=") {
                vars = toks.get(p + 1).and_then(|t| t.parse().ok());
            }
            continue;
        }
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {line:?}")))?;
        let (lhs, rhs) = body
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("missing '=' in {line:?}")))?;
        let toks: Vec<&str> = lhs.split_whitespace().collect();
        if toks.len() % 2 != 0 {
            return Err(Error::Parse(format!("odd term list in {line:?}")));
        }
        let terms = toks
            .chunks(2)
            .map(|t| {
                let a: i64 = t[0].parse().map_err(|_| Error::Parse(format!("coefficient {:?}", t[0])))?;
                let j: u32 = t[1]
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&j| j >= 1)
                    .ok_or_else(|| Error::Parse(format!("variable {:?}", t[1])))?;
                Ok((a, j - 1))
            })
            .collect::<Result<Vec<_>>>()?;
        let rhs = rhs
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("right-hand side in {line:?}")))?;
        out.push(Constraint { terms, rhs });
    }
    let vars = vars.ok_or_else(|| Error::Parse("missing #variable= header".into()))?;
    Ok((vars, out))
}

/// Verdict for one `(beta_0, gamma_1)` of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub theta: i64,
    pub beta0: u64,
    pub gamma1: u64,
    /// `None` when the integer conditions already exclude the pair.
    pub outcome: Option<Outcome>,
}

/// Solves the given pairs in parallel on at most `jobs` threads.
pub fn sweep(
    quotient: &[Vec<i64>],
    orbit_sizes: &[u64],
    spec: GraphSpec,
    pairs: &[(u64, u64)],
    mode: Mode,
    budget: &Budget,
    portfolio: &Portfolio,
    jobs: Option<usize>,
) -> Result<Vec<SearchResult>> {
    let work = || {
        pairs
            .par_iter()
            .map(|&(beta0, gamma1)| {
                let m = spec.valency() as i64;
                let theta = m - (beta0 + gamma1) as i64;
                let i = (0..=spec.k).find(|&i| spec.theta(i).is_ok_and(|t| t as i64 == theta));
                let admissible = i.is_some_and(|i| {
                    integrality_report(spec, beta0, gamma1, i.saturating_sub(1)).is_ok_and(|r| r.feasible)
                });
                let outcome = if admissible {
                    let inst = BipInstance::new(quotient.to_vec(), orbit_sizes.to_vec(), beta0, gamma1)?;
                    Some(solve_portfolio(&inst, portfolio, mode, budget))
                } else {
                    None
                };
                Ok(SearchResult {
                    theta,
                    beta0,
                    gamma1,
                    outcome,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Unsupported(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Lattice-generic helper: orbit of a single element under the action.
pub fn orbit_of_vertex<L: Lattice>(graph: &Graph<L>, orbits: &OrbitSystem, x: &L::Elem) -> Option<Vec<u32>> {
    graph.id(x).map(|v| orbits.members(orbits.orbit_of(v) as usize).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::ExplicitGraph;
    use crate::verify::check_completely_regular;

    fn brute_force(inst: &BipInstance) -> Vec<Vec<bool>> {
        let r = inst.variables();
        let cs = inst.constraints();
        (0u64..1 << r)
            .filter(|&mask| {
                cs.iter().all(|c| {
                    c.terms
                        .iter()
                        .filter(|&&(_, j)| mask >> j & 1 == 1)
                        .map(|&(a, _)| a)
                        .sum::<i64>()
                        == c.rhs
                })
            })
            .map(|mask| (0..r).map(|j| mask >> j & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn singer_orbits_on_j2_6_3() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let act = singer_action(&g, 21).unwrap();
        let o = orbits(&act);
        assert_eq!(o.len(), 465);
        assert!(o.sizes().iter().all(|&s| s == 3));
        let b = quotient_matrix(&g, &o).unwrap();
        assert!(b.iter().all(|row| row.iter().sum::<i64>() == 98));
        for i in 0..465 {
            for j in 0..465 {
                assert_eq!(b[i][j], b[j][i]);
            }
        }
        let id = orbits(&singer_action(&g, 63).unwrap());
        assert_eq!(id.len(), 1395);
    }

    #[test]
    fn singer_fixed_lines_are_the_spread() {
        let g = Graph::grassmann(2, 6, 2).unwrap();
        let o = orbits(&singer_action(&g, 21).unwrap());
        let fixed: Vec<u32> = (0..o.len()).filter(|&i| o.members(i).len() == 1).map(|i| o.representative(i)).collect();
        let spread = crate::constructions::desarguesian_2spread(g.lattice()).unwrap();
        let mut ids: Vec<u32> = spread.blocks().iter().map(|b| g.id(b).unwrap()).collect();
        ids.sort_unstable();
        assert_eq!(fixed, ids);
    }

    #[test]
    fn composed_generators_coarsen_orbits() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let a = singer_action(&g, 21).unwrap();
        let b = singer_action(&g, 9).unwrap();
        let both = orbits(&a.join(&b).unwrap());
        assert!(both.len() <= orbits(&a).len());
        assert!(both.len() <= orbits(&b).len());
        for i in 0..orbits(&a).len() {
            let m = orbits(&a).members(i).to_vec();
            assert!(m.iter().all(|&v| both.orbit_of(v) == both.orbit_of(m[0])));
        }
    }

    #[test]
    fn coarsening_agrees_with_the_larger_group() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let fine = orbits(&singer_action(&g, 21).unwrap());
        let coarse = orbits(&singer_action(&g, 7).unwrap());
        let blocks = fine.blocks_in(&coarse).unwrap();
        let inst = BipInstance::new(quotient_matrix(&g, &fine).unwrap(), fine.sizes(), 84, 9).unwrap();
        let small = inst.coarsen(&blocks).unwrap();
        assert_eq!(small.quotient, quotient_matrix(&g, &coarse).unwrap());
        assert_eq!(small.orbit_sizes, coarse.sizes());
        assert_eq!(small.size, inst.size);
        assert!(coarse.blocks_in(&fine).is_err());

        let mut bad: Vec<u32> = (0..inst.variables() as u32).collect();
        bad[1] = 0;
        bad.iter_mut().skip(2).for_each(|b| *b -= 1);
        assert!(matches!(inst.coarsen(&bad), Err(Error::QuotientNotEquitable(_))));
    }

    #[test]
    fn coarse_solutions_expand_to_solutions() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let fine = orbits(&singer_action(&g, 21).unwrap());
        let inst = BipInstance::new(quotient_matrix(&g, &fine).unwrap(), fine.sizes(), 84, 9).unwrap();
        let cs = centralizer_coarsenings(&g, 21, 64, 0).unwrap();
        assert_eq!(cs, centralizer_coarsenings(&g, 21, 64, 0).unwrap());
        assert!(cs.iter().any(|c| c.description.contains("normalizing semilinear")));
        assert!(!cs.is_empty());
        let mut found = 0;
        for c in &cs {
            assert!(c.len() < inst.variables());
            let small = inst.coarsen(&c.blocks).unwrap();
            let out = solve(&small, Mode::First, &Budget { max_nodes: Some(20_000), ..Budget::default() });
            for x in &out.solutions {
                assert!(inst.is_solution(&expand(x, &c.blocks)));
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn normalizer_extensions_are_semilinear_and_normalize() {
        let field = FieldSpec::new(2, 6, None).unwrap();
        let sub = field.subfield(2).unwrap();
        let mut coords = vec![Vec::new(); 64];
        for combo in 0..64usize {
            let digits = vec![combo % 4, combo / 4 % 4, combo / 16];
            let x = (0..3).fold(field.zero(), |acc, i| field.add(acc, field.mul(sub[digits[i]], field.exp(i as u64))));
            coords[x.index() as usize] = digits;
        }
        let frobenius: Map = (0..64).map(|x| field.pow(field.element(x).unwrap(), 2).index()).collect();
        let search = NormalizerSearch::new(&field, &sub, &coords, 3, 2, &frobenius).unwrap();
        // |GL(3,4)| = (64-1)(64-4)(64-16)
        assert_eq!(search.linear.len(), 63 * 60 * 48);

        let omega: Map = (0..64).map(|x| field.mul(field.exp(21), field.element(x).unwrap()).index()).collect();
        let identity: Map = (0..64).collect();
        let (h, group, found) = search
            .linear
            .iter()
            .step_by(997)
            .find_map(|h| {
                let group: Vec<Map> = closure(&[&omega, h], 4096)?.into_iter().collect();
                let found = search.extensions(&group, &[&omega, h]);
                found.iter().any(|s| s.1).then_some((h, group, found))
            })
            .expect("some sampled group has a semilinear extension");
        assert_eq!(group.len() as u64 % map_order(h, &identity), 0);
        for (s, _) in found.iter().take(50) {
            assert!(is_bijection(s));
            assert!(!group.contains(s));
            assert!(group.contains(&compose(s, s)));
            for x in 0..64u32 {
                for y in [1u32, 7, 40] {
                    // additive: s(x + y) = s(x) + s(y)
                    let sum = field.add(field.element(x).unwrap(), field.element(y).unwrap()).index();
                    let image = field.add(field.element(s[x as usize]).unwrap(), field.element(s[y as usize]).unwrap());
                    assert_eq!(s[sum as usize], image.index());
                }
            }
            let conj = compose(s, &compose(h, &(0..64).map(|y| s.iter().position(|&v| v == y).unwrap() as u32).collect::<Map>()));
            assert!(group.contains(&conj));
        }
    }

    #[test]
    fn portfolio_reports_the_coarsening_used() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let fine = orbits(&singer_action(&g, 21).unwrap());
        let inst = BipInstance::new(quotient_matrix(&g, &fine).unwrap(), fine.sizes(), 81, 12).unwrap();
        let portfolio = Portfolio {
            coarsenings: centralizer_coarsenings(&g, 21, 16, 0).unwrap(),
            nodes_each: 100_000,
        };
        let out = solve_portfolio(&inst, &portfolio, Mode::First, &Budget::default());
        assert_eq!(out.status, Status::Sat);
        assert!(out.via.is_some());
        assert!(inst.is_solution(&out.solutions[0]));
        let code = lift_code(&out.solutions[0], &fine, g.spec()).unwrap();
        let (_, reg) = check_completely_regular(&g, code.ids()).unwrap();
        let n = reg.numbers().unwrap();
        assert_eq!((n.beta.clone(), n.gamma.clone()), (vec![81], vec![12]));

        // counting ignores coarsenings
        let tiny = BipInstance::new(vec![vec![0, 2], vec![1, 1]], vec![1, 2], 2, 1).unwrap();
        let p = Portfolio {
            coarsenings: vec![Coarsening { description: "all".into(), blocks: vec![0, 0] }],
            nodes_each: 10,
        };
        assert_eq!(
            solve_portfolio(&tiny, &p, Mode::Count, &Budget::default()).count,
            solve(&tiny, Mode::Count, &Budget::default()).count
        );
    }

    #[test]
    fn non_automorphism_rejected() {
        let g = Graph::johnson(5, 2).unwrap();
        let mut perm: Vec<u32> = (0..10).collect();
        perm.swap(0, 1);
        assert!(matches!(
            GroupAction::new(&g, g.spec(), vec![perm], "swap"),
            Err(Error::NotAutomorphism(_))
        ));
        let not_perm = vec![0u32; 10];
        assert!(GroupAction::new(&g, g.spec(), vec![not_perm], "zero").is_err());
    }

    #[test]
    fn identity_quotient_is_adjacency() {
        let g = Graph::johnson(6, 2).unwrap();
        let act = GroupAction::trivial(&g, g.spec());
        let o = orbits(&act);
        let b = quotient_matrix(&g, &o).unwrap();
        for v in 0..15u32 {
            let nb = g.neighbors(v);
            for w in 0..15u32 {
                assert_eq!(b[v as usize][w as usize], nb.contains(&w) as i64);
            }
        }
    }

    #[test]
    fn feasible_parameter_rows_of_j2_6_3() {
        let rows = feasible_parameters(GraphSpec::grassmann(2, 6, 3).unwrap());
        let by_theta = |t: i64| rows.iter().find(|r| r.theta == t).unwrap().feasible.clone();
        assert_eq!(by_theta(5), (1..=15).map(|i| 3 * i).collect::<Vec<u64>>());
        assert_eq!(by_theta(35), vec![7, 14, 21, 28]);
        assert_eq!(by_theta(-7), vec![21, 42]);
    }

    #[test]
    fn solver_matches_brute_force_on_small_graphs() {
        for (spec, g) in [
            (GraphSpec::johnson(6, 2).unwrap(), Graph::johnson(6, 2).unwrap()),
            (GraphSpec::johnson(6, 3).unwrap(), Graph::johnson(6, 3).unwrap()),
        ] {
            // orbits of a cyclic shift of the points
            let n = spec.n;
            let perm: Vec<u32> = g
                .vertices()
                .iter()
                .map(|s| {
                    let m = s.mask();
                    let rot = ((m << 1) | (m >> (n - 1))) & ((1 << n) - 1);
                    g.id(&crate::subspaces::Subset::from_mask(n as usize, rot)).unwrap()
                })
                .collect();
            let act = GroupAction::new(&g, spec, vec![perm], "rotation").unwrap();
            let o = orbits(&act);
            assert!(o.len() <= 20);
            let b = quotient_matrix(&g, &o).unwrap();
            let m = spec.valency();
            for s in 1..=m + 1 {
                for gamma in 1..s {
                    let Ok(inst) = BipInstance::new(b.clone(), o.sizes(), s - gamma, gamma) else {
                        continue;
                    };
                    let mut want = brute_force(&inst);
                    let got = solve(&inst, Mode::All, &Budget::default());
                    let mut have = got.solutions.clone();
                    want.sort();
                    have.sort();
                    assert_eq!(have, want, "{spec} {s} {gamma}");
                    assert_eq!(got.status == Status::Unsat, want.is_empty());
                    let counted = solve(&inst, Mode::Count, &Budget::default());
                    assert_eq!(counted.count as usize, want.len());
                    for x in &want {
                        let ids = lift(x, &o);
                        let (dp, reg) = check_completely_regular(&g, &ids).unwrap();
                        assert_eq!(dp.rho, 1);
                        let nums = reg.numbers().unwrap();
                        assert_eq!((nums.beta[0], nums.gamma[0]), (s - gamma, gamma));
                    }
                }
            }
        }
    }

    #[test]
    fn solver_matches_brute_force_with_trivial_group() {
        let g = Graph::johnson(6, 2).unwrap();
        let o = orbits(&GroupAction::trivial(&g, g.spec()));
        let b = quotient_matrix(&g, &o).unwrap();
        for (beta0, gamma1) in [(4, 2), (2, 4), (5, 1), (3, 3), (7, 3), (3, 7), (5, 5)] {
            let Ok(inst) = BipInstance::new(b.clone(), o.sizes(), beta0, gamma1) else {
                continue;
            };
            let mut want = brute_force(&inst);
            let mut have = solve(&inst, Mode::All, &Budget::default()).solutions;
            want.sort();
            have.sort();
            assert_eq!(have, want, "({beta0}, {gamma1})");
        }
    }

    #[test]
    fn complement_instance_bijection() {
        let g = Graph::johnson(6, 2).unwrap();
        let o = orbits(&GroupAction::trivial(&g, g.spec()));
        let b = quotient_matrix(&g, &o).unwrap();
        // stars in J(6,2) have {beta_0; gamma_1} = {4; 2}
        let inst = BipInstance::new(b, o.sizes(), 4, 2).unwrap();
        let comp = inst.complement().unwrap();
        let mut a: Vec<Vec<bool>> = solve(&inst, Mode::All, &Budget::default())
            .solutions
            .into_iter()
            .map(|x| x.into_iter().map(|v| !v).collect())
            .collect();
        let mut c = solve(&comp, Mode::All, &Budget::default()).solutions;
        a.sort();
        c.sort();
        assert_eq!(a, c);
        assert!(!a.is_empty());
    }

    #[test]
    fn inconsistent_single_vertex_instance_is_unsat() {
        // K2 as one orbit of size 2 with B = [[1]]: gamma_1 = 1 would need a
        // proper code, which an orbit union cannot be
        let g = ExplicitGraph::new(vec![vec![1], vec![0]]).unwrap();
        let spec = GraphSpec::johnson(2, 1).unwrap();
        let act = GroupAction::new(&g, spec, vec![vec![1, 0]], "swap").unwrap();
        let o = orbits(&act);
        let b = quotient_matrix(&g, &o).unwrap();
        let inst = BipInstance::new(b, o.sizes(), 1, 1).unwrap();
        assert_eq!(solve(&inst, Mode::First, &Budget::default()).status, Status::Unsat);
    }

    #[test]
    fn determinism_and_budget() {
        let g = Graph::grassmann(2, 4, 2).unwrap();
        let o = orbits(&GroupAction::trivial(&g, g.spec()));
        let b = quotient_matrix(&g, &o).unwrap();
        // lines of a plane: {beta_0; gamma_1} = {12; 3}
        let inst = BipInstance::new(b, o.sizes(), 12, 3).unwrap();
        let budget = Budget {
            seed: 7,
            ..Budget::default()
        };
        let x = solve(&inst, Mode::First, &budget);
        let y = solve(&inst, Mode::First, &budget);
        assert_eq!(x, y);
        assert_eq!(x.status, Status::Sat);
        let tiny = Budget {
            max_nodes: Some(1),
            ..Budget::default()
        };
        let z = solve(&inst, Mode::All, &tiny);
        assert!(!z.complete);
    }

    #[test]
    fn opb_round_trip_and_golden() {
        let inst = BipInstance::new(
            vec![vec![0, 2, 1], vec![2, 0, 1], vec![1, 1, 1]],
            vec![1, 1, 1],
            2,
            1,
        )
        .unwrap();
        let text = export_opb(&inst);
        assert_eq!(
            text,
            "* #variable= 3 #constraint= 4\n\
             * beta0= 2 gamma1= 1 theta= 0 size= 1\n\
             +2 x2 +1 x3 = 1 ;\n\
             +2 x1 +1 x3 = 1 ;\n\
             +1 x1 +1 x2 +1 x3 = 1 ;\n\
             +1 x1 +1 x2 +1 x3 = 1 ;\n"
        );
        let (vars, cs) = parse_opb(&text).unwrap();
        assert_eq!(vars, 3);
        assert_eq!(cs, inst.constraints());
        let lp = export_lp(&inst);
        assert!(lp.contains(" o1: +2 x2 +1 x3 = 1\n"));
        assert!(lp.contains(" card: +1 x1 +1 x2 +1 x3 = 1\n"));
        assert!(lp.ends_with("Binary\n x1\n x2\n x3\nEnd\n"));
        assert!(parse_opb("+1 x1 = 1").is_err());
    }

    #[test]
    fn lift_trivial_cases() {
        let g = Graph::johnson(5, 2).unwrap();
        let o = orbits(&GroupAction::trivial(&g, g.spec()));
        assert!(lift(&[false; 10], &o).is_empty());
        assert_eq!(lift(&[true; 10], &o).len(), 10);
    }
}
