//! Lefschetz complexes over F2, extraction of the Morse complex from a
//! discrete gradient by separatrix parity, and Betti numbers by Gaussian
//! elimination.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{CellId, Multigrade, MultiFiltration, Simplex, SimplicialComplex};
use crate::f2::BitVec;
use crate::gradient::DiscreteGradient;

#[derive(Debug, Error)]
pub enum MorseError {
    #[error("gradient has a closed V-path among {0}-cells; verifier was bypassed")]
    CyclicGradient(usize),
    #[error("∂∘∂ ≠ 0 between cells {0} and {1}")]
    BoundarySquareNonzero(usize, usize),
    #[error("incidence violates grade monotonicity between cells {0} and {1}")]
    GradeViolation(usize, usize),
}

/// One cell of a Lefschetz complex: a dimension, a multigrade, and the
/// vertex tuple of the simplex it came from (kept as a stable label).
#[derive(Clone, Debug)]
pub struct LefCell {
    pub dim: usize,
    pub grade: Multigrade,
    pub label: Simplex,
}

/// A graded cell set with a mod-2 incidence function κ, stored sparsely
/// as per-cell facet lists. Houses both simplicial complexes (κ = facet
/// incidence) and extracted Morse complexes (κ = separatrix parity).
///
/// Cells are kept in canonical order: ascending dimension, then
/// lexicographic grade, then label.
pub struct LefschetzComplex {
    cells: Vec<LefCell>,
    facet_lists: Vec<Vec<usize>>,
    dims: Vec<Vec<usize>>,
}

impl LefschetzComplex {
    fn assemble(mut raw: Vec<(LefCell, Vec<CellId>)>, by_source: HashMap<CellId, usize>) -> Self {
        // `raw` pairs each cell with the source-complex ids of its facets;
        // sort canonically, then remap facet references.
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&raw[a].0, &raw[b].0);
            x.dim
                .cmp(&y.dim)
                .then_with(|| x.grade.cmp_lex(&y.grade))
                .then_with(|| x.label.cmp(&y.label))
        });
        let mut new_pos = vec![0usize; raw.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_pos[old] = pos;
        }
        let mut slots: Vec<Option<(LefCell, Vec<CellId>)>> = raw.into_iter().map(Some).collect();
        let mut cells = Vec::with_capacity(slots.len());
        let mut facet_lists = Vec::with_capacity(slots.len());
        for &old in &order {
            let (cell, src_facets) = slots[old].take().unwrap();
            let mut fl: Vec<usize> = src_facets
                .into_iter()
                .map(|src| new_pos[by_source[&src]])
                .collect();
            fl.sort_unstable();
            cells.push(cell);
            facet_lists.push(fl);
        }
        let max_dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut dims = vec![Vec::new(); max_dim + 1];
        for (i, c) in cells.iter().enumerate() {
            dims[c.dim].push(i);
        }
        LefschetzComplex {
            cells,
            facet_lists,
            dims,
        }
    }

    /// Views a filtered simplicial complex as a Lefschetz complex with the
    /// simplicial incidence function.
    pub fn from_simplicial(complex: &SimplicialComplex, mf: &MultiFiltration) -> Self {
        let raw: Vec<(LefCell, Vec<CellId>)> = (0..complex.cell_count())
            .map(|id| {
                (
                    LefCell {
                        dim: complex.cell(id).dim(),
                        grade: mf.grade(id).clone(),
                        label: complex.cell(id).clone(),
                    },
                    complex.facets(id).to_vec(),
                )
            })
            .collect();
        let by_source: HashMap<CellId, usize> = (0..complex.cell_count()).map(|i| (i, i)).collect();
        let out = Self::assemble(raw, by_source);
        debug_assert!(out.validate().is_ok());
        out
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Maximum cell dimension; 0 for the empty complex.
    pub fn dim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn params(&self) -> usize {
        self.cells.first().map_or(0, |c| c.grade.len())
    }

    pub fn cell(&self, i: usize) -> &LefCell {
        &self.cells[i]
    }

    pub fn cells(&self) -> &[LefCell] {
        &self.cells
    }

    pub fn cells_of_dim(&self, k: usize) -> &[usize] {
        self.dims.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Facets with κ = 1, ascending.
    pub fn facet_list(&self, i: usize) -> &[usize] {
        &self.facet_lists[i]
    }

    pub fn kappa(&self, tau: usize, sigma: usize) -> bool {
        self.facet_lists[tau].binary_search(&sigma).is_ok()
    }

    pub fn find_by_label(&self, label: &Simplex) -> Option<usize> {
        self.cells.iter().position(|c| &c.label == label)
    }

    /// Checks the Lefschetz conditions: dimension drop, ∂∘∂ = 0, and
    /// grade monotonicity of κ.
    pub fn validate(&self) -> Result<(), MorseError> {
        for (tau, fl) in self.facet_lists.iter().enumerate() {
            for &sigma in fl {
                if self.cells[sigma].dim + 1 != self.cells[tau].dim {
                    return Err(MorseError::BoundarySquareNonzero(tau, sigma));
                }
                if !self.cells[sigma].grade.leq(&self.cells[tau].grade) {
                    return Err(MorseError::GradeViolation(tau, sigma));
                }
            }
            let mut parity: HashMap<usize, bool> = HashMap::new();
            for &rho in fl {
                for &sigma in &self.facet_lists[rho] {
                    *parity.entry(sigma).or_insert(false) ^= true;
                }
            }
            if let Some((&sigma, _)) = parity.iter().find(|(_, &odd)| odd) {
                return Err(MorseError::BoundarySquareNonzero(tau, sigma));
            }
        }
        Ok(())
    }

    /// `CELL <id> dim=<k> grade=<g1,...,gn>` lines, then
    /// `INC <τ-id> <σ-id>` per κ = 1 entry.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.cells.iter().enumerate() {
            out.push_str(&format!("CELL {i} dim={} grade={}\n", c.dim, c.grade));
        }
        for (tau, fl) in self.facet_lists.iter().enumerate() {
            for &sigma in fl {
                out.push_str(&format!("INC {tau} {sigma}\n"));
            }
        }
        out
    }
}

/// Dense 0/1 matrix with packed columns; rows and columns are labeled by
/// per-dimension cell positions.
pub struct F2Matrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl F2Matrix {
    pub fn new(rows: usize, cols: usize) -> F2Matrix {
        F2Matrix {
            rows,
            cols: vec![BitVec::zeros(rows); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.cols[c].set(r);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].get(r)
    }

    /// Set rows of one column, ascending.
    pub fn column(&self, c: usize) -> Vec<usize> {
        self.cols[c].ones().collect()
    }

    /// Rank by column elimination.
    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, BitVec> = HashMap::new();
        let mut rank = 0;
        for col in &self.cols {
            let mut v = col.clone();
            while let Some(top) = v.top_bit() {
                match pivots.get(&top) {
                    Some(p) => v.xor_assign(p),
                    None => {
                        pivots.insert(top, v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

/// The boundary matrix D_k: entry (σ, τ) = κ(τ, σ) over k-cell rows and
/// (k+1)-cell columns, both in canonical order.
pub fn boundary_matrix(m: &LefschetzComplex, k: usize) -> F2Matrix {
    let rows = m.cells_of_dim(k);
    let cols = m.cells_of_dim(k + 1);
    let row_base = rows.first().copied().unwrap_or(0);
    let mut out = F2Matrix::new(rows.len(), cols.len());
    for (j, &tau) in cols.iter().enumerate() {
        for &sigma in m.facet_list(tau) {
            out.set(sigma - row_base, j);
        }
    }
    out
}

/// Betti numbers over F2 for dimensions `0..=dim`, by rank computation:
/// `b_k = dim ker ∂_k − rank ∂_{k+1}`.
pub fn betti_numbers_f2(m: &LefschetzComplex) -> Result<Vec<usize>, MorseError> {
    m.validate()?;
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(m.dim() + 1);
    let mut rank_dk = 0usize; // rank D_0 = 0
    for k in 0..=m.dim() {
        let dk1 = boundary_matrix(m, k);
        let rank_dk1 = dk1.rank();
        let kernel = m.cells_of_dim(k).len() - rank_dk;
        out.push(kernel - rank_dk1);
        rank_dk = rank_dk1;
    }
    Ok(out)
}

/// Extracts the Morse complex of a valid discrete gradient: cells are the
/// critical simplices with their F̃ grades; κ(τ, σ) is the parity of the
/// number of distinct separatrices from τ down to σ, where a critical
/// facet contributes the empty V-path.
///
/// Each critical (k+1)-cell performs one descending traversal through the
/// V-path DAG of k-cells, accumulating path parities in topological order
/// so every reachable cell is visited once.
pub fn extract_morse_complex(
    g: &DiscreteGradient,
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
) -> Result<LefschetzComplex, MorseError> {
    // topological order of k-cells in the V-path DAG, per dimension
    let mut topo_pos: Vec<HashMap<CellId, usize>> = Vec::with_capacity(complex.dim() + 1);
    for k in 0..=complex.dim() {
        topo_pos.push(vpath_topological_order(g, complex, k)?);
    }

    let criticals = g.criticals();
    let kappa_lists: Vec<Vec<CellId>> = criticals
        .par_iter()
        .map(|&tau| {
            let k1 = complex.cell(tau).dim();
            if k1 == 0 {
                return Vec::new();
            }
            descend_parities(g, complex, tau, &topo_pos[k1 - 1])
        })
        .collect();

    let raw: Vec<(LefCell, Vec<CellId>)> = criticals
        .iter()
        .zip(kappa_lists)
        .map(|(&id, fl)| {
            (
                LefCell {
                    dim: complex.cell(id).dim(),
                    grade: mf.grade(id).clone(),
                    label: complex.cell(id).clone(),
                },
                fl,
            )
        })
        .collect();
    let by_source: HashMap<CellId, usize> = criticals
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let out = LefschetzComplex::assemble(raw, by_source);
    out.validate()?;
    Ok(out)
}

/// Kahn's algorithm on the contracted V-path graph of k-cells
/// (σ → σ' when σ is paired with a cofacet τ and σ' < τ, σ' ≠ σ).
fn vpath_topological_order(
    g: &DiscreteGradient,
    complex: &SimplicialComplex,
    k: usize,
) -> Result<HashMap<CellId, usize>, MorseError> {
    let nodes = complex.cells_of_dim(k);
    let base = nodes.first().copied().unwrap_or(0);
    let successors = |id: CellId| -> Option<&[CellId]> {
        match g.partner(id) {
            Some(t) if complex.cell(t).dim() == k + 1 => Some(complex.facets(t)),
            _ => None,
        }
    };
    let mut indeg = vec![0usize; nodes.len()];
    for &id in nodes {
        if let Some(fs) = successors(id) {
            for &f in fs {
                if f != id {
                    indeg[f - base] += 1;
                }
            }
        }
    }
    let mut queue: Vec<CellId> = nodes
        .iter()
        .copied()
        .filter(|&id| indeg[id - base] == 0)
        .collect();
    let mut pos = HashMap::with_capacity(nodes.len());
    while let Some(id) = queue.pop() {
        let next = pos.len();
        pos.insert(id, next);
        if let Some(fs) = successors(id) {
            for &f in fs {
                if f != id {
                    indeg[f - base] -= 1;
                    if indeg[f - base] == 0 {
                        queue.push(f);
                    }
                }
            }
        }
    }
    if pos.len() < nodes.len() {
        return Err(MorseError::CyclicGradient(k));
    }
    Ok(pos)
}

/// Separatrix parities from one critical (k+1)-cell: returns the critical
/// k-cells reached by an odd number of V-paths.
fn descend_parities(
    g: &DiscreteGradient,
    complex: &SimplicialComplex,
    tau: CellId,
    topo: &HashMap<CellId, usize>,
) -> Vec<CellId> {
    let k1 = complex.cell(tau).dim();
    // τ is critical, so no vector ever points back into it
    let step = |rho: CellId| -> Option<&[CellId]> {
        match g.partner(rho) {
            Some(t) if complex.cell(t).dim() == k1 => Some(complex.facets(t)),
            _ => None,
        }
    };

    // reachable k-cells
    let mut reach: Vec<CellId> = Vec::new();
    let mut seen: HashMap<CellId, bool> = HashMap::new();
    let mut stack: Vec<CellId> = complex.facets(tau).to_vec();
    for &f in &stack {
        seen.insert(f, false);
    }
    while let Some(rho) = stack.pop() {
        reach.push(rho);
        if let Some(fs) = step(rho) {
            for &f in fs {
                if f != rho && !seen.contains_key(&f) {
                    seen.insert(f, false);
                    stack.push(f);
                }
            }
        }
    }
    reach.sort_unstable_by_key(|id| topo[id]);

    // parity sweep in topological order; facets of τ start one path each
    for &f in complex.facets(tau) {
        if let Some(p) = seen.get_mut(&f) {
            *p ^= true;
        }
    }
    let mut odd_criticals = Vec::new();
    for &rho in &reach {
        if !seen[&rho] {
            continue;
        }
        if g.is_critical(rho) {
            odd_criticals.push(rho);
        } else if let Some(fs) = step(rho) {
            for &f in fs {
                if f != rho {
                    *seen.get_mut(&f).unwrap() ^= true;
                }
            }
        }
    }
    odd_criticals
}
