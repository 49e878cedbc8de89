//! Designs and codes: Desarguesian 2-spreads, the Steiner quadruple system
//! of the extended Hamming code, symplectic and hyperplane codes, codes of
//! vertices avoiding a design, and the inclusion-matrix push-forward.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::galois::FieldSpec;
use crate::graphs::{Graph, GraphSpec};
use crate::subspaces::{Lattice, Subset, SubsetLattice, Subspace, SubspaceLattice};
use crate::verify::Code;
use crate::{Error, Result};

/// A set of rank-`k` objects without repeated blocks.
#[derive(Debug, Clone)]
pub struct Design<E> {
    n: usize,
    q: u64,
    k: usize,
    blocks: Vec<E>,
    index: FxHashSet<E>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord> Design<E> {
    pub fn new<L: Lattice<Elem = E>>(lattice: &L, k: usize, mut blocks: Vec<E>) -> Result<Self> {
        if let Some(b) = blocks.iter().find(|b| lattice.rank_of(b) != k) {
            return Err(Error::Unsupported(format!(
                "block {} does not have rank {k}",
                lattice.format(b)
            )));
        }
        blocks.sort();
        if blocks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Unsupported("repeated block".into()));
        }
        let index = blocks.iter().cloned().collect();
        Ok(Design {
            n: lattice.n(),
            q: lattice.q(),
            k,
            blocks,
            index,
        })
    }

    pub fn contains(&self, b: &E) -> bool {
        self.index.contains(b)
    }
}

impl<E> Design<E> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// 1 for designs of subsets.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[E] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// One integer per vertex of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueVector {
    pub spec: GraphSpec,
    pub values: Vec<i64>,
}

impl ValueVector {
    pub fn new(spec: GraphSpec, values: Vec<i64>) -> Result<Self> {
        if values.len() as u128 != spec.vertex_count() {
            return Err(Error::Unsupported(format!(
                "{} values for {} vertices",
                values.len(),
                spec.vertex_count()
            )));
        }
        Ok(ValueVector { spec, values })
    }

    pub fn indicator(code: &Code) -> Self {
        ValueVector {
            spec: code.spec(),
            values: code.indicator().into_iter().map(i64::from).collect(),
        }
    }
}

/// The Desarguesian 2-spread of `F_q^n` from the default field `GF(q^n)`.
pub fn desarguesian_2spread(lattice: &SubspaceLattice) -> Result<Design<Subspace>> {
    let q = lattice.q();
    let field = FieldSpec::new(q as u32, lattice.n() as u32, None)?;
    desarguesian_2spread_in(lattice, &field)
}

/// Cosets `a^j F'` of the multiplicative group of the subfield `F'` of order
/// `q^2`, each the nonzero part of a 2-subspace.
pub fn desarguesian_2spread_in(lattice: &SubspaceLattice, field: &FieldSpec) -> Result<Design<Subspace>> {
    let n = lattice.n();
    if n % 2 != 0 {
        return Err(Error::Unsupported(format!("2-spread of F_q^{n} with n odd")));
    }
    let q = lattice.q();
    let step = (q.pow(n as u32) - 1) / (q * q - 1);
    let blocks = (0..step)
        .map(|j| {
            let a = lattice.vector_of(field, field.exp(j))?;
            let b = lattice.vector_of(field, field.exp(j + step))?;
            Ok(lattice.rref([a, b]))
        })
        .collect::<Result<Vec<_>>>()?;
    Design::new(lattice, 2, blocks)
}

/// Supports of the weight-4 codewords of the extended Hamming code of
/// length `2^m`, a Steiner quadruple system on `{1..2^m}`.
///
/// Position `L + 1` carries the `m`-bit label `L`; label 0 is the overall
/// parity bit. Codewords are enumerated in Gray-code order over the
/// information positions (labels of weight at least 2).
pub fn extended_hamming_sqs(m: u32) -> Result<Design<Subset>> {
    if !(3..=5).contains(&m) {
        return Err(Error::Unsupported(format!(
            "extended Hamming code with m = {m} (3 <= m <= 5)"
        )));
    }
    let n = 1usize << m;
    let rows: Vec<u64> = (0..n as u64)
        .filter(|l| l.count_ones() >= 2)
        .map(|l| {
            let mut w = 1u64 << l;
            for b in 0..m {
                if l >> b & 1 == 1 {
                    w |= 1 << (1u64 << b);
                }
            }
            if w.count_ones() % 2 == 1 {
                w |= 1;
            }
            w
        })
        .collect();
    let mut word = 0u64;
    let mut blocks = Vec::new();
    for g in 1u64..1 << rows.len() {
        word ^= rows[g.trailing_zeros() as usize];
        if word.count_ones() == 4 {
            // member i sits at bit i - 1, which is bit L for label L
            blocks.push(Subset::from_mask(n, word));
        }
    }
    Design::new(&SubsetLattice::new(n)?, 4, blocks)
}

/// `B(x, y) = sum_i (x_{2i} y_{2i+1} - x_{2i+1} y_{2i})`, coordinates from 0.
pub fn symplectic_form(lattice: &SubspaceLattice, x: u64, y: u64) -> u32 {
    let t = lattice.tables();
    let q = t.order();
    (0..lattice.n() / 2).fold(0, |acc, i| {
        let a = t.mul(lattice.coef(x, 2 * i), lattice.coef(y, 2 * i + 1));
        let b = t.mul(lattice.coef(x, 2 * i + 1), lattice.coef(y, 2 * i));
        t.add(acc, t.add(a, (q - b) % q))
    })
}

pub fn is_totally_isotropic(lattice: &SubspaceLattice, u: &Subspace) -> bool {
    let r = u.rows();
    (0..r.len()).all(|i| (i + 1..r.len()).all(|j| symplectic_form(lattice, r[i], r[j]) == 0))
}

/// Totally isotropic vertices for the standard alternating form.
pub fn symplectic_code(graph: &Graph<SubspaceLattice>) -> Result<Code> {
    let lattice = graph.lattice();
    if lattice.n() % 2 != 0 || lattice.field().degree() != 1 {
        return Err(Error::Unsupported(
            "symplectic form needs even n over a prime field".into(),
        ));
    }
    let ids = filter_ids(graph, |u| is_totally_isotropic(lattice, u));
    Ok(Code::new(graph.spec(), ids)?.with_label("symplectic"))
}

fn filter_ids<L: Lattice>(graph: &Graph<L>, keep: impl Fn(&L::Elem) -> bool + Sync) -> Vec<u32> {
    (0..graph.vertices().len() as u32)
        .into_par_iter()
        .filter(|&i| keep(graph.vertex(i)))
        .collect()
}

fn in_kernel(lattice: &SubspaceLattice, h: u64, u: &Subspace) -> bool {
    u.rows().iter().all(|&r| lattice.dot(h, r) == 0)
}

/// Vertices inside the hyperplane `{x : h.x = 0}`.
pub fn hyperplane_code(graph: &Graph<SubspaceLattice>, h: u64) -> Result<Code> {
    if h == 0 {
        return Err(Error::Unsupported("zero functional".into()));
    }
    let lattice = graph.lattice();
    let ids = filter_ids(graph, |u| in_kernel(lattice, h, u));
    Ok(Code::new(graph.spec(), ids)?.with_label("hyperplane"))
}

/// Vertices inside `{x : h.x = 0}` or containing `v`, with `h.v != 0`.
pub fn hyperplane_point_code(graph: &Graph<SubspaceLattice>, h: u64, v: u64) -> Result<Code> {
    let lattice = graph.lattice();
    if h == 0 || lattice.dot(h, v) == 0 {
        return Err(Error::Unsupported("point must lie outside the hyperplane".into()));
    }
    let ids = filter_ids(graph, |u| in_kernel(lattice, h, u) || lattice.in_span(v, u));
    Ok(Code::new(graph.spec(), ids)?.with_label("hyperplane-point"))
}

/// The first unit vector, used as default functional and point.
pub fn unit_vector(_lattice: &SubspaceLattice) -> u64 {
    // coordinate 0 occupies the lowest bits
    1
}

/// Number of blocks below `x`, by probing its rank-`k` sub-objects.
pub fn contained_blocks_count<L: Lattice>(lattice: &L, x: &L::Elem, design: &Design<L::Elem>) -> usize {
    if lattice.rank_of(x) < design.k() {
        return 0;
    }
    lattice
        .sub_objects(x, design.k())
        .iter()
        .filter(|y| design.contains(y))
        .count()
}

fn check_ambient<L: Lattice, E>(graph: &Graph<L>, design: &Design<E>) -> Result<()> {
    let lattice = graph.lattice();
    if lattice.n() != design.n() || lattice.q() != design.q() {
        return Err(Error::AmbientMismatch(format!(
            "design in (n, q) = ({}, {}) against {}",
            design.n(),
            design.q(),
            graph.spec()
        )));
    }
    if design.k() > graph.spec().k as usize {
        return Err(Error::Unsupported(format!(
            "blocks of rank {} exceed vertex rank {}",
            design.k(),
            graph.spec().k
        )));
    }
    Ok(())
}

/// `contained_blocks_count` of every vertex, by vertex id.
pub fn block_counts<L: Lattice>(graph: &Graph<L>, design: &Design<L::Elem>) -> Result<Vec<u32>> {
    check_ambient(graph, design)?;
    let lattice = graph.lattice();
    Ok(graph
        .vertices()
        .par_iter()
        .map(|x| contained_blocks_count(lattice, x, design) as u32)
        .collect())
}

/// Vertices containing no block.
pub fn avoid_code<L: Lattice>(graph: &Graph<L>, design: &Design<L::Elem>) -> Result<Code> {
    let counts = block_counts(graph, design)?;
    let ids = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(i, _)| i as u32)
        .collect();
    Ok(Code::new(graph.spec(), ids)?.with_label("avoid"))
}

/// The design as a code of its own level.
pub fn design_code<L: Lattice>(graph: &Graph<L>, design: &Design<L::Elem>) -> Result<Code> {
    check_ambient(graph, design)?;
    if design.k() != graph.spec().k as usize {
        return Err(Error::AmbientMismatch("design rank differs from vertex rank".into()));
    }
    let ids = design
        .blocks()
        .iter()
        .map(|b| graph.id(b).expect("block is a vertex"))
        .collect();
    Code::new(graph.spec(), ids)
}

/// `(I_{l,k} u)(x) = sum of u(y) over rank-k objects y below x`.
pub fn pushforward<L: Lattice>(from: &Graph<L>, values: &ValueVector, to: &Graph<L>) -> Result<ValueVector> {
    let (a, b) = (from.spec(), to.spec());
    if values.spec != a {
        return Err(Error::AmbientMismatch("values live on another graph".into()));
    }
    if a.family != b.family || a.n != b.n || a.q != b.q {
        return Err(Error::AmbientMismatch(format!("{a} and {b}")));
    }
    if b.k <= a.k {
        return Err(Error::Unsupported(format!(
            "push-forward from level {} to level {}",
            a.k, b.k
        )));
    }
    let k = a.k as usize;
    let lattice = to.lattice();
    let out = to
        .vertices()
        .par_iter()
        .map(|x| {
            lattice
                .sub_objects(x, k)
                .iter()
                .map(|y| values.values[from.id(y).expect("sub-object is a vertex") as usize])
                .sum()
        })
        .collect();
    ValueVector::new(b, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::design_strength;

    #[test]
    fn spread_sizes_and_disjointness() {
        for (q, n, size) in [(2u64, 4usize, 5usize), (2, 6, 21), (2, 8, 85), (3, 4, 10)] {
            let lat = SubspaceLattice::new(q, n).unwrap();
            let d = desarguesian_2spread(&lat).unwrap();
            assert_eq!(d.len(), size);
            let b = d.blocks();
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    assert_eq!(lat.intersection_dim(&b[i], &b[j]).unwrap(), 0);
                }
            }
        }
        let lat = SubspaceLattice::new(2, 5).unwrap();
        assert!(desarguesian_2spread(&lat).is_err());
    }

    #[test]
    fn spread_is_a_1_design() {
        for (q, n) in [(2u64, 6usize), (2, 8), (3, 4)] {
            let lat = SubspaceLattice::new(q, n).unwrap();
            let d = desarguesian_2spread(&lat).unwrap();
            let s = design_strength(&lat, d.blocks());
            assert_eq!((s.t, s.lambdas), (1, vec![1]));
        }
    }

    #[test]
    fn spread_blocks_are_subfield_closed() {
        // every block is closed under multiplication by a generator of F_4^*
        let lat = SubspaceLattice::new(2, 6).unwrap();
        let f = FieldSpec::new(2, 6, None).unwrap();
        let w = f.exp(21);
        for b in desarguesian_2spread(&lat).unwrap().blocks() {
            for &r in b.rows() {
                let x = lat.element_of(&f, r).unwrap();
                assert!(lat.in_span(lat.vector_of(&f, f.mul(w, x)).unwrap(), b));
            }
        }
    }

    fn xor_sqs_oracle(m: u32) -> Vec<u64> {
        // 4-subsets of labels XOR-ing to zero
        let n = 1u64 << m;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let d = a ^ b ^ c;
                    if d > c {
                        out.push(1 << a | 1 << b | 1 << c | 1 << d);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn sqs_matches_xor_oracle() {
        for (m, count) in [(3, 14), (4, 140), (5, 32 * 31 * 30 / 24)] {
            let d = extended_hamming_sqs(m).unwrap();
            assert_eq!(d.len(), count);
            let mut masks: Vec<u64> = d.blocks().iter().map(|b| b.mask()).collect();
            masks.sort_unstable();
            assert_eq!(masks, xor_sqs_oracle(m));
        }
        assert!(extended_hamming_sqs(2).is_err());
    }

    #[test]
    fn sqs_strength_three() {
        let d = extended_hamming_sqs(3).unwrap();
        let s = design_strength(&SubsetLattice::new(8).unwrap(), d.blocks());
        assert_eq!((s.t, s.lambdas), (3, vec![7, 3, 1]));
        let d = extended_hamming_sqs(4).unwrap();
        let s = design_strength(&SubsetLattice::new(16).unwrap(), d.blocks());
        assert_eq!((s.t, s.lambdas), (3, vec![35, 7, 1]));
    }

    #[test]
    fn sqs_symmetric_difference_closure() {
        let d = extended_hamming_sqs(4).unwrap();
        let b = d.blocks();
        for x in b {
            for y in b {
                if (x.mask() & y.mask()).count_ones() == 2 {
                    assert!(d.contains(&Subset::from_mask(16, x.mask() ^ y.mask())));
                }
            }
        }
    }

    #[test]
    fn sqs_counts_in_6_subsets() {
        let g = Graph::johnson(16, 6).unwrap();
        let d = extended_hamming_sqs(4).unwrap();
        let counts = block_counts(&g, &d).unwrap();
        assert!(counts.iter().all(|c| [0, 1, 3].contains(c)));
        assert_eq!(counts.iter().filter(|&&c| c == 0).count(), 448);
        // a block plus two points outside any block through them
        let block = d.blocks()[0].mask();
        let x = (0..16)
            .flat_map(|i| (i + 1..16).map(move |j| block | 1 << i | 1 << j))
            .find(|&m| {
                m.count_ones() == 6
                    && contained_blocks_count(g.lattice(), &Subset::from_mask(16, m), &d) == 1
            });
        assert!(x.is_some());
    }

    #[test]
    fn symplectic_and_hyperplane_codes() {
        let g = Graph::grassmann(2, 6, 3).unwrap();
        let lat = g.lattice();
        assert_eq!(symplectic_code(&g).unwrap().len(), 135);
        let e = |cols: &[usize]| {
            lat.rref(cols.iter().map(|&c| {
                let mut v = vec![0; 6];
                v[c] = 1;
                lat.pack(&v).unwrap()
            }))
        };
        assert!(is_totally_isotropic(lat, &e(&[0, 2, 4])));
        assert!(!is_totally_isotropic(lat, &e(&[0, 1, 2])));
        let h = unit_vector(lat);
        assert_eq!(hyperplane_code(&g, h).unwrap().len(), 155);
        assert_eq!(hyperplane_point_code(&g, h, h).unwrap().len(), 310);
    }

    #[test]
    fn hyperplane_code_at_top_level_is_one_vertex() {
        let spec = GraphSpec::unrestricted(crate::graphs::Family::Grassmann, 2, 5, 4).unwrap();
        let g = Graph::<SubspaceLattice>::from_spec(spec).unwrap();
        assert_eq!(hyperplane_code(&g, unit_vector(g.lattice())).unwrap().len(), 1);
    }

    #[test]
    fn avoid_codes_of_spreads() {
        let lat = SubspaceLattice::new(2, 6).unwrap();
        let d = desarguesian_2spread(&lat).unwrap();
        let g3 = Graph::grassmann(2, 6, 3).unwrap();
        assert_eq!(avoid_code(&g3, &d).unwrap().len(), 1080);
        let spec = GraphSpec::unrestricted(crate::graphs::Family::Grassmann, 2, 6, 4).unwrap();
        let g4 = Graph::<SubspaceLattice>::from_spec(spec).unwrap();
        assert_eq!(avoid_code(&g4, &d).unwrap().len(), 0);
    }

    #[test]
    fn pushforward_of_ones_and_indicator() {
        let lat = SubspaceLattice::new(2, 6).unwrap();
        let d = desarguesian_2spread(&lat).unwrap();
        let g2 = Graph::grassmann(2, 6, 2).unwrap();
        let g3 = Graph::grassmann(2, 6, 3).unwrap();
        let ones = ValueVector::new(g2.spec(), vec![1; 651]).unwrap();
        let p = pushforward(&g2, &ones, &g3).unwrap();
        assert!(p.values.iter().all(|&v| v == 7));
        let chi = ValueVector::indicator(&design_code(&g2, &d).unwrap());
        let p = pushforward(&g2, &chi, &g3).unwrap();
        let counts = block_counts(&g3, &d).unwrap();
        assert!(p.values.iter().zip(&counts).all(|(&v, &c)| v == c as i64));
        assert!(p.values.iter().all(|&v| v == 0 || v == 1));
        assert!(pushforward(&g3, &p, &g2).is_err());
    }

    #[test]
    fn johnson_pushforward_row_sums() {
        let g2 = Graph::johnson(7, 2).unwrap();
        let g3 = Graph::johnson(7, 3).unwrap();
        let ones = ValueVector::new(g2.spec(), vec![1; 21]).unwrap();
        let p = pushforward(&g2, &ones, &g3).unwrap();
        assert!(p.values.iter().all(|&v| v == 3));
    }
}
