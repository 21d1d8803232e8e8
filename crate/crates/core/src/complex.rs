//! Simplicial complexes with precomputed incidence, and multiparameter
//! filtering functions extended from vertices by component-wise max.

use std::collections::HashMap;

use thiserror::Error;

/// Index of a cell inside a [`SimplicialComplex`] (or a Lefschetz complex).
///
/// Ids are assigned in canonical order: ascending dimension, then ascending
/// lexicographic vertex tuple. They are stable for a given complex.
pub type CellId = usize;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("vertex id {0} out of range for vertex count {1}")]
    VertexOutOfRange(usize, usize),
    #[error("duplicate vertex {0} within a simplex")]
    DuplicateVertex(usize),
    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<usize>),
    #[error("top simplex has dimension {0}, maximum supported is 31")]
    DimensionTooLarge(usize),
    #[error("expected grades for {expected} vertices, got {got}")]
    GradeCountMismatch { expected: usize, got: usize },
    #[error("grade of vertex {vertex} has {got} components, expected {expected}")]
    GradeArityMismatch {
        vertex: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite filtration value for vertex {0}")]
    NonFiniteValue(usize),
    #[error(
        "filtration component {component} is not injective: \
         vertices {a} and {b} both map to {value}"
    )]
    NonInjective {
        component: usize,
        a: usize,
        b: usize,
        value: f64,
    },
}

/// A point of the grade poset: one filtration value per parameter.
///
/// Comparison is component-wise, so two grades may be incomparable.
/// Equality and hashing use the exact bit pattern of each component;
/// filtration extension only ever copies vertex values, so bit equality
/// is the correct notion of "same grade".
#[derive(Clone, Debug)]
pub struct Multigrade(Vec<f64>);

impl Multigrade {
    pub fn new(components: Vec<f64>) -> Self {
        Multigrade(components)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ⪯ other`: every component less or equal.
    pub fn leq(&self, other: &Multigrade) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self ⪵ other`: `⪯` and not equal.
    pub fn lt(&self, other: &Multigrade) -> bool {
        self.leq(other) && self != other
    }

    /// Component-wise maximum.
    pub fn join(&self, other: &Multigrade) -> Multigrade {
        debug_assert_eq!(self.len(), other.len());
        Multigrade(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.max(*b))
                .collect(),
        )
    }

    /// Lexicographic total order on components. Used only to fix
    /// deterministic output orders, never for poset comparisons.
    pub fn cmp_lex(&self, other: &Multigrade) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.len().cmp(&other.len())
    }

    fn bits(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|v| v.to_bits())
    }
}

impl PartialEq for Multigrade {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.bits().eq(other.bits())
    }
}

impl Eq for Multigrade {}

impl std::hash::Hash for Multigrade {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for b in self.bits() {
            b.hash(state);
        }
    }
}

impl std::fmt::Display for Multigrade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A simplex, stored as its strictly increasing vertex tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from a vertex tuple in any order.
    /// Fails on repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Simplex, ComplexError> {
        vertices.sort_unstable();
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(ComplexError::DuplicateVertex(pair[0]));
            }
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `self ≪ other`: every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        // both tuples ascend; merge scan
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// All faces of codimension one, in ascending tuple order.
    pub fn facet_tuples(&self) -> Vec<Simplex> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                let mut vs = Vec::with_capacity(self.0.len() - 1);
                vs.extend(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v),
                );
                Simplex(vs)
            })
            .rev()
            .collect()
    }
}

impl std::fmt::Display for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A finite simplicial complex, closed under faces, with star, facet and
/// cofacet adjacency precomputed at build time.
///
/// All vertices `0..vertex_count` are members as 0-simplices even when no
/// top simplex mentions them.
pub struct SimplicialComplex {
    cells: Vec<Simplex>,
    index: HashMap<Simplex, CellId>,
    /// Per dimension, the (contiguous, ascending) ids of that dimension.
    dims: Vec<Vec<CellId>>,
    /// Per vertex, ids of all incident cells, ascending.
    vertex_stars: Vec<Vec<CellId>>,
    facets: Vec<Vec<CellId>>,
    cofacets: Vec<Vec<CellId>>,
    vertex_count: usize,
}

/// Builds the face closure of the given top simplices over `vertex_count`
/// vertices. Input tuples may overlap; shared faces are deduplicated.
pub fn build_complex(
    vertex_count: usize,
    top_simplices: &[Vec<usize>],
) -> Result<SimplicialComplex, ComplexError> {
    let mut seen: HashMap<Simplex, ()> = HashMap::new();
    for v in 0..vertex_count {
        seen.insert(Simplex(vec![v]), ());
    }
    for tuple in top_simplices {
        for &v in tuple {
            if v >= vertex_count {
                return Err(ComplexError::VertexOutOfRange(v, vertex_count));
            }
        }
        let top = Simplex::new(tuple.clone())?;
        let n = top.0.len();
        if n > 32 {
            return Err(ComplexError::DimensionTooLarge(n - 1));
        }
        // non-empty subsets of the vertex tuple
        for mask in 1u64..(1u64 << n) {
            let mut vs = Vec::with_capacity(mask.count_ones() as usize);
            for (i, &v) in top.0.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    vs.push(v);
                }
            }
            seen.entry(Simplex(vs)).or_insert(());
        }
    }

    let mut cells: Vec<Simplex> = seen.into_keys().collect();
    cells.sort_unstable_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));

    let index: HashMap<Simplex, CellId> = cells
        .iter()
        .enumerate()
        .map(|(id, s)| (s.clone(), id))
        .collect();

    let max_dim = cells.last().map_or(0, |s| s.dim());
    let mut dims = vec![Vec::new(); max_dim + 1];
    let mut vertex_stars = vec![Vec::new(); vertex_count];
    for (id, s) in cells.iter().enumerate() {
        dims[s.dim()].push(id);
        for &v in s.vertices() {
            vertex_stars[v].push(id);
        }
    }

    let facets: Vec<Vec<CellId>> = cells
        .iter()
        .map(|s| s.facet_tuples().iter().map(|t| index[t]).collect())
        .collect();
    let mut cofacets = vec![Vec::new(); cells.len()];
    for (id, fs) in facets.iter().enumerate() {
        for &f in fs {
            cofacets[f].push(id);
        }
    }

    Ok(SimplicialComplex {
        cells,
        index,
        dims,
        vertex_stars,
        facets,
        cofacets,
        vertex_count,
    })
}

impl SimplicialComplex {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Maximum dimension of any cell.
    pub fn dim(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Simplex {
        &self.cells[id]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<CellId> {
        self.index.get(s).copied()
    }

    pub fn cells_of_dim(&self, k: usize) -> &[CellId] {
        self.dims.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Ids of all cells incident to vertex `v`, ascending.
    pub fn vertex_star(&self, v: usize) -> &[CellId] {
        &self.vertex_stars[v]
    }

    pub fn facets(&self, id: CellId) -> &[CellId] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: CellId) -> &[CellId] {
        &self.cofacets[id]
    }

    /// The star of `s`: all cofaces including `s` itself, ascending by id.
    pub fn star(&self, s: &Simplex) -> Result<Vec<CellId>, ComplexError> {
        let id = self
            .id_of(s)
            .ok_or_else(|| ComplexError::NotInComplex(s.0.clone()))?;
        Ok(self.star_by_id(id))
    }

    pub fn star_by_id(&self, id: CellId) -> Vec<CellId> {
        let s = &self.cells[id];
        self.vertex_stars[s.0[0]]
            .iter()
            .copied()
            .filter(|&t| s.is_face_of(&self.cells[t]))
            .collect()
    }
}

/// A component-wise injective vertex function together with its
/// max-extension to every cell of one complex.
pub struct MultiFiltration {
    params: usize,
    vertex_grades: Vec<Multigrade>,
    cell_grades: Vec<Multigrade>,
}

impl MultiFiltration {
    pub fn params(&self) -> usize {
        self.params
    }

    pub fn vertex_grade(&self, v: usize) -> &Multigrade {
        &self.vertex_grades[v]
    }

    pub fn vertex_grades(&self) -> &[Multigrade] {
        &self.vertex_grades
    }

    /// The extension F̃ at a cell.
    pub fn grade(&self, id: CellId) -> &Multigrade {
        &self.cell_grades[id]
    }

    pub fn cell_grades(&self) -> &[Multigrade] {
        &self.cell_grades
    }
}

/// Extends vertex grades to every cell by component-wise max.
///
/// Rejects vertex functions that are not component-wise injective;
/// [`make_injective`] provides an opt-in repair.
pub fn extend_filtration(
    complex: &SimplicialComplex,
    f: Vec<Multigrade>,
) -> Result<MultiFiltration, ComplexError> {
    if f.len() != complex.vertex_count() {
        return Err(ComplexError::GradeCountMismatch {
            expected: complex.vertex_count(),
            got: f.len(),
        });
    }
    let params = f.first().map_or(0, |g| g.len());
    for (v, g) in f.iter().enumerate() {
        if g.len() != params {
            return Err(ComplexError::GradeArityMismatch {
                vertex: v,
                expected: params,
                got: g.len(),
            });
        }
        if g.components().iter().any(|x| !x.is_finite()) {
            return Err(ComplexError::NonFiniteValue(v));
        }
    }
    for comp in 0..params {
        let mut order: Vec<usize> = (0..f.len()).collect();
        order.sort_unstable_by(|&a, &b| f[a].components()[comp].total_cmp(&f[b].components()[comp]));
        for pair in order.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if f[a].components()[comp] == f[b].components()[comp] {
                return Err(ComplexError::NonInjective {
                    component: comp,
                    a,
                    b,
                    value: f[a].components()[comp],
                });
            }
        }
    }

    let cell_grades: Vec<Multigrade> = complex
        .cells()
        .iter()
        .map(|s| {
            let mut g = f[s.vertices()[0]].clone();
            for &v in &s.vertices()[1..] {
                g = g.join(&f[v]);
            }
            g
        })
        .collect();

    // monotone by construction: faces take the max over fewer vertices
    #[cfg(debug_assertions)]
    for id in 0..complex.cell_count() {
        for &fct in complex.facets(id) {
            debug_assert!(cell_grades[fct].leq(&cell_grades[id]));
        }
    }

    Ok(MultiFiltration {
        params,
        vertex_grades: f,
        cell_grades,
    })
}

/// Replaces each component by its rank among the vertices, breaking ties
/// by ascending vertex id. Strictly ordered pairs keep their order, and
/// the result is component-wise injective.
pub fn make_injective(f: &[Multigrade]) -> Vec<Multigrade> {
    let params = f.first().map_or(0, |g| g.len());
    let mut out = vec![vec![0.0f64; params]; f.len()];
    for comp in 0..params {
        let mut order: Vec<usize> = (0..f.len()).collect();
        order.sort_unstable_by(|&a, &b| {
            f[a].components()[comp]
                .total_cmp(&f[b].components()[comp])
                .then(a.cmp(&b))
        });
        for (rank, &v) in order.iter().enumerate() {
            out[v][comp] = rank as f64;
        }
    }
    out.into_iter().map(Multigrade::new).collect()
}
