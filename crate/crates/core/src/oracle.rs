//! Independent brute-force implementations used only for verification:
//! the global `Matching` algorithm, the partition-equivalence checks, and
//! a desk-scale rank-invariant calculator.
//!
//! Everything here favors simplicity over speed. Quadratic scans and
//! per-grade eliminations are deliberate; none of it runs at benchmark
//! scale.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{CellId, ComplexError, Multigrade, MultiFiltration, SimplicialComplex};
use crate::expansion::homotopy_expansion;
use crate::f2::BitVec;
use crate::gradient::DiscreteGradient;
use crate::indexing::{compute_indexing, index_lower_star, split_index_lower_star, LevelSet, VertexIndexing};
use crate::morse::LefschetzComplex;

/// Cell count above which the rank-invariant oracle refuses to run.
pub const RANK_INVARIANT_GUARD: usize = 500;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("rank-invariant oracle guard exceeded: {cells} cells > {limit}")]
    GuardExceeded { cells: usize, limit: usize },
    #[error("the (≪ ∪ ⪵) relation has a cycle; the filtration is corrupt")]
    CyclicRelation,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A total indexing J on all simplices, compatible with both the coface
/// partial order and strict grade order.
pub struct GlobalIndexing {
    order: Vec<CellId>,
    pos: Vec<usize>,
}

impl GlobalIndexing {
    /// Cells in increasing J order.
    pub fn order(&self) -> &[CellId] {
        &self.order
    }

    pub fn position(&self, cell: CellId) -> usize {
        self.pos[cell]
    }
}

/// Topological sort of the relation generated by (σ ≪ τ) ∪ (F̃(σ) ⪵ F̃(τ)),
/// breaking ties by (Ĩ, dimension, lex key). Quadratic edge construction;
/// oracle scale only.
pub fn build_global_indexing(
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
    idx: &VertexIndexing,
) -> Result<GlobalIndexing, OracleError> {
    let n = complex.cell_count();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let face = complex.cell(a).is_face_of(complex.cell(b));
            if face || mf.grade(a).lt(mf.grade(b)) {
                out_edges[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let key = |id: CellId| {
        let s = complex.cell(id);
        (idx.extended(s), s.dim(), idx.lex_key(s), id)
    };
    let mut heap = std::collections::BinaryHeap::new();
    for id in 0..n {
        if indeg[id] == 0 {
            heap.push(std::cmp::Reverse(key(id)));
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut pos = vec![0usize; n];
    while let Some(std::cmp::Reverse((_, _, _, id))) = heap.pop() {
        pos[id] = order.len();
        order.push(id);
        for &b in &out_edges[id] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(std::cmp::Reverse(key(b)));
            }
        }
    }
    if order.len() < n {
        return Err(OracleError::CyclicRelation);
    }
    Ok(GlobalIndexing { order, pos })
}

/// Low_f(σ): the cofaces of σ whose grade does not exceed F̃(σ); members
/// sorted by lex key.
fn lower_star_f(
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
    idx: &VertexIndexing,
    sigma: CellId,
) -> Vec<CellId> {
    let mut members: Vec<CellId> = complex
        .star_by_id(sigma)
        .into_iter()
        .filter(|&t| mf.grade(t).leq(mf.grade(sigma)))
        .collect();
    members.sort_by_cached_key(|&id| idx.lex_key(complex.cell(id)));
    members
}

/// The global algorithm: processes simplices by increasing J, running
/// homotopy expansion over the filtration-based lower star of each still
/// unclassified simplex, with the same comparator as the local algorithm.
pub fn matching_global(
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
    j: &GlobalIndexing,
    idx: &VertexIndexing,
) -> DiscreteGradient {
    let mut classified = vec![false; complex.cell_count()];
    let mut pairs = Vec::new();
    for &sigma in j.order() {
        if classified[sigma] {
            continue;
        }
        let members = lower_star_f(complex, mf, idx, sigma);
        debug_assert!(members.iter().all(|&t| !classified[t]));
        let owner_rank = idx.extended(complex.cell(sigma));
        let level = LevelSet {
            owner: idx.vertex_at(owner_rank),
            grade: mf.grade(sigma).clone(),
            cells: members,
        };
        let res = homotopy_expansion(complex, &level, idx);
        for &(s, t) in &res.pairs {
            classified[s] = true;
            classified[t] = true;
        }
        for &c in &res.criticals {
            classified[c] = true;
        }
        pairs.extend(res.pairs);
    }
    debug_assert!(classified.iter().all(|&c| c));
    DiscreteGradient::from_pairs(complex, pairs).expect("expansion classifies each cell once")
}

/// Checks that the local decomposition into level sets and Matching's
/// lower-star partition are the same multiset, and that each level set
/// has exactly one representative σ with Low_f(σ) = L, equal to the
/// intersection of L's members.
pub fn verify_partition_equivalence(
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
) -> Result<bool, OracleError> {
    let idx = compute_indexing(mf)?;

    let mut local: Vec<Vec<CellId>> = Vec::new();
    for v in 0..complex.vertex_count() {
        let low = index_lower_star(v, &idx, complex);
        for level in split_index_lower_star(&low, complex, mf, &idx) {
            let mut members = level.cells.clone();
            members.sort_unstable();

            // Lemma 2: unique representative, equal to the intersection
            let representatives: Vec<CellId> = members
                .iter()
                .copied()
                .filter(|&s| {
                    let mut lf = lower_star_f(complex, mf, &idx, s);
                    lf.sort_unstable();
                    lf == members
                })
                .collect();
            if representatives.len() != 1 {
                return Ok(false);
            }
            let mut inter: Vec<usize> = complex.cell(members[0]).vertices().to_vec();
            for &id in &members[1..] {
                let vs = complex.cell(id).vertices();
                inter.retain(|x| vs.contains(x));
            }
            match complex.id_of(&crate::complex::Simplex::new(inter)?) {
                Some(rep) if rep == representatives[0] => {}
                _ => return Ok(false),
            }

            local.push(members);
        }
    }

    let j = build_global_indexing(complex, mf, &idx)?;
    let mut global: Vec<Vec<CellId>> = Vec::new();
    let mut classified = vec![false; complex.cell_count()];
    for &sigma in j.order() {
        if classified[sigma] {
            continue;
        }
        let mut members = lower_star_f(complex, mf, &idx, sigma);
        for &t in &members {
            classified[t] = true;
        }
        members.sort_unstable();
        global.push(members);
    }

    local.sort();
    global.sort();
    Ok(local == global)
}

/// The rank invariant: for every comparable pair of grades and every
/// homology degree, the rank of the inclusion-induced map.
pub struct RankInvariant {
    grades: Vec<Multigrade>,
    // (k, index of u, index of v) → rank
    ranks: HashMap<(usize, usize, usize), usize>,
}

impl RankInvariant {
    pub fn grades(&self) -> &[Multigrade] {
        &self.grades
    }

    pub fn rank(&self, k: usize, u: &Multigrade, v: &Multigrade) -> Option<usize> {
        let ui = self.grades.iter().position(|g| g == u)?;
        let vi = self.grades.iter().position(|g| g == v)?;
        self.ranks.get(&(k, ui, vi)).copied()
    }

    /// Entries keyed by grade values, for cross-complex comparison.
    pub fn by_value(&self) -> HashMap<(usize, Multigrade, Multigrade), usize> {
        self.ranks
            .iter()
            .map(|(&(k, ui, vi), &r)| {
                ((k, self.grades[ui].clone(), self.grades[vi].clone()), r)
            })
            .collect()
    }

    pub fn same_as(&self, other: &RankInvariant) -> bool {
        self.by_value() == other.by_value()
    }

    /// `dim,u,v,rank` lines with semicolon-joined grade components,
    /// sorted deterministically.
    pub fn csv(&self) -> String {
        let fmt = |g: &Multigrade| {
            g.components()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut keys: Vec<&(usize, usize, usize)> = self.ranks.keys().collect();
        keys.sort();
        let mut out = String::from("dim,u,v,rank\n");
        for &(k, ui, vi) in keys {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k,
                fmt(&self.grades[ui]),
                fmt(&self.grades[vi]),
                self.ranks[&(k, ui, vi)]
            ));
        }
        out
    }
}

/// Closure of a grade set under component-wise max; contains the global
/// top (the join of everything). Sorted lexicographically.
pub fn join_closure(grades: &[Multigrade]) -> Vec<Multigrade> {
    let mut set: Vec<Multigrade> = Vec::new();
    let mut seen: HashMap<Multigrade, ()> = HashMap::new();
    for g in grades {
        if seen.insert(g.clone(), ()).is_none() {
            set.push(g.clone());
        }
    }
    let mut i = 0;
    while i < set.len() {
        for j in 0..i {
            let joined = set[i].join(&set[j]);
            if seen.insert(joined.clone(), ()).is_none() {
                set.push(joined);
            }
        }
        i += 1;
    }
    set.sort_by(|a, b| a.cmp_lex(b));
    set
}

/// Rank invariant over the complex's own realized grades closed under
/// joins. Guarded to desk scale.
pub fn rank_invariant_bruteforce(m: &LefschetzComplex) -> Result<RankInvariant, OracleError> {
    let realized: Vec<Multigrade> = (0..m.cell_count())
        .map(|i| m.cell(i).grade.clone())
        .collect();
    rank_invariant_on(m, &join_closure(&realized))
}

/// Rank invariant of `m` evaluated over a caller-supplied grade poset
/// (used to compare complexes with different realized grade sets).
pub fn rank_invariant_on(
    m: &LefschetzComplex,
    grades: &[Multigrade],
) -> Result<RankInvariant, OracleError> {
    if m.cell_count() > RANK_INVARIANT_GUARD {
        return Err(OracleError::GuardExceeded {
            cells: m.cell_count(),
            limit: RANK_INVARIANT_GUARD,
        });
    }
    let grades = grades.to_vec();
    let ng = grades.len();
    let max_dim = m.dim();

    // per grade: k-cells of the sublevel complex, as per-dimension positions
    let sublevel: Vec<Vec<Vec<usize>>> = grades
        .iter()
        .map(|u| {
            (0..=max_dim)
                .map(|k| {
                    m.cells_of_dim(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, &cell)| m.cell(cell).grade.leq(u))
                        .map(|(p, _)| p)
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut ranks = HashMap::new();
    for k in 0..=max_dim {
        let nk = m.cells_of_dim(k).len();
        let cycles: Vec<Vec<BitVec>> = (0..ng)
            .map(|gi| cycle_basis(m, k, &sublevel[gi][k], nk))
            .collect();
        let boundaries: Vec<Vec<BitVec>> = (0..ng)
            .map(|gi| {
                if k + 1 > max_dim {
                    Vec::new()
                } else {
                    image_basis(m, k + 1, &sublevel[gi][k + 1], nk)
                }
            })
            .collect();
        for ui in 0..ng {
            for vi in 0..ng {
                if !grades[ui].leq(&grades[vi]) {
                    continue;
                }
                // rank ι = dim Z(u) − dim(Z(u) ∩ B(v)) = rank[Z(u)|B(v)] − dim B(v)
                let stacked = rank_of(cycles[ui].iter().chain(boundaries[vi].iter()));
                let r = stacked - boundaries[vi].len();
                ranks.insert((k, ui, vi), r);
            }
        }
    }
    Ok(RankInvariant { grades, ranks })
}

/// Basis of k-cycles of the sublevel complex, as chains over all k-cells
/// of `m` (global per-dimension coordinates).
fn cycle_basis(m: &LefschetzComplex, k: usize, cells: &[usize], nk: usize) -> Vec<BitVec> {
    let row_base = m.cells_of_dim(k.wrapping_sub(1)).first().copied().unwrap_or(0);
    let nrows = if k == 0 {
        0
    } else {
        m.cells_of_dim(k - 1).len()
    };
    let dim_base = m.cells_of_dim(k).first().copied().unwrap_or(0);
    // eliminate boundary columns, tracking the combination that made them
    let mut pivots: HashMap<usize, (BitVec, BitVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for &p in cells {
        let cell = dim_base + p;
        let mut v = BitVec::zeros(nrows.max(1));
        for &sigma in m.facet_list(cell) {
            v.set(sigma - row_base);
        }
        let mut combo = BitVec::zeros(nk);
        combo.set(p);
        loop {
            match v.top_bit() {
                None => {
                    kernel.push(combo);
                    break;
                }
                Some(top) => {
                    if let Some((pv, pc)) = pivots.get(&top) {
                        v.xor_assign(pv);
                        combo.xor_assign(pc);
                    } else {
                        pivots.insert(top, (v, combo));
                        break;
                    }
                }
            }
        }
    }
    kernel
}

/// Basis of the image of ∂_k restricted to the sublevel complex, as
/// chains over all (k−1)-cells of `m`.
fn image_basis(m: &LefschetzComplex, k: usize, cells: &[usize], nrows: usize) -> Vec<BitVec> {
    let row_base = m.cells_of_dim(k - 1).first().copied().unwrap_or(0);
    let dim_base = m.cells_of_dim(k).first().copied().unwrap_or(0);
    let mut pivots: HashMap<usize, BitVec> = HashMap::new();
    for &p in cells {
        let cell = dim_base + p;
        let mut v = BitVec::zeros(nrows.max(1));
        for &sigma in m.facet_list(cell) {
            v.set(sigma - row_base);
        }
        loop {
            match v.top_bit() {
                None => break,
                Some(top) => {
                    if let Some(pv) = pivots.get(&top) {
                        v.xor_assign(pv);
                    } else {
                        pivots.insert(top, v);
                        break;
                    }
                }
            }
        }
    }
    pivots.into_values().collect()
}

fn rank_of<'a>(vectors: impl Iterator<Item = &'a BitVec>) -> usize {
    let mut pivots: HashMap<usize, BitVec> = HashMap::new();
    let mut rank = 0;
    for vec in vectors {
        let mut v = vec.clone();
        while let Some(top) = v.top_bit() {
            if let Some(pv) = pivots.get(&top) {
                v.xor_assign(pv);
            } else {
                pivots.insert(top, v);
                rank += 1;
                break;
            }
        }
    }
    rank
}
