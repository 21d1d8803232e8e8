//! Homotopy expansion: classifies every simplex of one level set as half
//! of a discrete vector or as critical.
//!
//! `Ord0` holds cells with zero undeclared facets inside the level set,
//! `Ord1` cells with exactly one. The inner loop pairs an `Ord1` cell with
//! its unique undeclared facet; when no pairable cell remains, the minimal
//! `Ord0` cell is declared critical. Both lists order cells by ascending
//! dimension, then ascending lexicographic order of the descending-rank
//! vertex tuple, so faces take priority over cofaces.

use std::collections::{BTreeSet, HashMap};

use crate::complex::{CellId, SimplicialComplex};
use crate::indexing::{LevelSet, VertexIndexing};

/// Classification of one level set: discrete vectors and critical cells,
/// in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    /// (σ, τ) with σ a facet of τ and F̃(σ) = F̃(τ).
    pub pairs: Vec<(CellId, CellId)>,
    pub criticals: Vec<CellId>,
}

pub fn homotopy_expansion(
    complex: &SimplicialComplex,
    level: &LevelSet,
    idx: &VertexIndexing,
) -> ExpansionResult {
    let n = level.cells.len();

    // local ordering: position in the comparator order is the local id
    let mut cells: Vec<CellId> = level.cells.clone();
    cells.sort_by_cached_key(|&id| {
        let s = complex.cell(id);
        (s.dim(), idx.lex_key(s))
    });
    let local: HashMap<CellId, usize> = cells.iter().enumerate().map(|(l, &id)| (id, l)).collect();

    // facet/cofacet adjacency restricted to the level set
    let facets_in: Vec<Vec<usize>> = cells
        .iter()
        .map(|&id| {
            complex
                .facets(id)
                .iter()
                .filter_map(|f| local.get(f).copied())
                .collect()
        })
        .collect();
    let cofacets_in: Vec<Vec<usize>> = cells
        .iter()
        .map(|&id| {
            complex
                .cofacets(id)
                .iter()
                .filter_map(|f| local.get(f).copied())
                .collect()
        })
        .collect();

    let mut declared = vec![false; n];
    let undeclared_facets = |t: usize, declared: &[bool]| -> usize {
        facets_in[t].iter().filter(|&&f| !declared[f]).count()
    };

    let mut ord0: BTreeSet<usize> = BTreeSet::new();
    let mut ord1: BTreeSet<usize> = BTreeSet::new();
    for t in 0..n {
        match undeclared_facets(t, &declared) {
            0 => {
                ord0.insert(t);
            }
            1 => {
                ord1.insert(t);
            }
            _ => {}
        }
    }

    let mut pairs = Vec::new();
    let mut criticals = Vec::new();

    // cofacets whose undeclared-facet count just dropped to one become pairable
    let add_cofacets =
        |of: usize, declared: &[bool], ord1: &mut BTreeSet<usize>| {
            for &cf in &cofacets_in[of] {
                if !declared[cf] && undeclared_facets(cf, declared) == 1 {
                    ord1.insert(cf);
                }
            }
        };

    while !ord1.is_empty() || !ord0.is_empty() {
        while let Some(tau) = ord1.pop_first() {
            if undeclared_facets(tau, &declared) == 0 {
                ord0.insert(tau);
            } else {
                debug_assert_eq!(undeclared_facets(tau, &declared), 1);
                let sigma = *facets_in[tau]
                    .iter()
                    .find(|&&f| !declared[f])
                    .expect("unique undeclared facet");
                ord0.remove(&sigma);
                ord1.remove(&sigma);
                pairs.push((cells[sigma], cells[tau]));
                declared[sigma] = true;
                declared[tau] = true;
                add_cofacets(sigma, &declared, &mut ord1);
                add_cofacets(tau, &declared, &mut ord1);
            }
        }
        if let Some(tau) = ord0.pop_first() {
            criticals.push(cells[tau]);
            declared[tau] = true;
            add_cofacets(tau, &declared, &mut ord1);
        }
    }

    debug_assert!(declared.iter().all(|&d| d));
    ExpansionResult { pairs, criticals }
}
