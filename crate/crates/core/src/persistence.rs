//! One-parameter persistent homology over F2 by standard left-to-right
//! boundary-matrix reduction, for any Lefschetz complex with a scalar
//! filter.

use thiserror::Error;

use crate::f2::BitVec;
use crate::morse::LefschetzComplex;

#[derive(Debug, Error)]
pub enum PersistenceError {
    #[error("filter is not monotone: cell {tau} has value {vt} below its facet {sigma} at {vs}")]
    NonMonotoneFilter {
        tau: usize,
        sigma: usize,
        vt: f64,
        vs: f64,
    },
    #[error("filter has {got} values for {expected} cells")]
    FilterLengthMismatch { expected: usize, got: usize },
}

/// One persistence pair; `death` is `f64::INFINITY` for essential classes.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// Zero-persistence pairs are retained in diagrams but flagged.
    pub fn is_zero_persistence(&self) -> bool {
        self.death == self.birth
    }
}

/// A multiset of persistence pairs, sorted by (dim, birth, death).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn positive_pairs(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.is_zero_persistence())
    }

    pub fn essential_count(&self, dim: usize) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.dim == dim && p.is_essential())
            .count()
    }

    /// Positive-persistence multisets equal within a relative tolerance.
    pub fn positive_matches(&self, other: &PersistenceDiagram, rel_tol: f64) -> bool {
        let a: Vec<&PersistencePair> = self.positive_pairs().collect();
        let b: Vec<&PersistencePair> = other.positive_pairs().collect();
        if a.len() != b.len() {
            return false;
        }
        let close = |x: f64, y: f64| {
            x == y || (x - y).abs() <= rel_tol * x.abs().max(y.abs())
        };
        a.iter()
            .zip(&b)
            .all(|(p, q)| p.dim == q.dim && close(p.birth, q.birth) && close(p.death, q.death))
    }
}

/// Cells sorted by (φ, dimension, label); monotonicity of φ along κ is
/// checked and guarantees facets precede cofacets.
pub fn filtration_order(
    m: &LefschetzComplex,
    phi: &[f64],
) -> Result<Vec<usize>, PersistenceError> {
    if phi.len() != m.cell_count() {
        return Err(PersistenceError::FilterLengthMismatch {
            expected: m.cell_count(),
            got: phi.len(),
        });
    }
    for tau in 0..m.cell_count() {
        for &sigma in m.facet_list(tau) {
            if phi[sigma] > phi[tau] {
                return Err(PersistenceError::NonMonotoneFilter {
                    tau,
                    sigma,
                    vt: phi[tau],
                    vs: phi[sigma],
                });
            }
        }
    }
    let mut order: Vec<usize> = (0..m.cell_count()).collect();
    order.sort_by(|&a, &b| {
        phi[a]
            .total_cmp(&phi[b])
            .then_with(|| m.cell(a).dim.cmp(&m.cell(b).dim))
            .then_with(|| m.cell(a).label.cmp(&m.cell(b).label))
    });
    Ok(order)
}

/// The boundary matrix in filtration order, ready for reduction.
pub struct ReductionInput {
    columns: Vec<BitVec>,
    dims: Vec<usize>,
    values: Vec<f64>,
}

/// Builds the filtered boundary matrix: column j holds the facets of the
/// j-th cell in filtration order, as positions in that same order.
pub fn build_reduction_input(m: &LefschetzComplex, order: &[usize]) -> ReductionInput {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (p, &cell) in order.iter().enumerate() {
        pos[cell] = p;
    }
    let columns: Vec<BitVec> = order
        .iter()
        .map(|&cell| {
            let mut col = BitVec::zeros(n);
            for &sigma in m.facet_list(cell) {
                col.set(pos[sigma]);
            }
            col
        })
        .collect();
    let dims = order.iter().map(|&c| m.cell(c).dim).collect();
    let values = Vec::new();
    ReductionInput {
        columns,
        dims,
        values,
    }
}

impl ReductionInput {
    pub fn with_values(mut self, order: &[usize], phi: &[f64]) -> ReductionInput {
        self.values = order.iter().map(|&c| phi[c]).collect();
        self
    }

    /// Standard left-to-right column reduction over F2.
    pub fn reduce(mut self) -> ReducedMatrix {
        let n = self.columns.len();
        let mut low_inv: Vec<Option<usize>> = vec![None; n];
        for j in 0..n {
            loop {
                let Some(low) = self.columns[j].top_bit() else {
                    break;
                };
                match low_inv[low] {
                    Some(j2) => {
                        let (a, b) = split_two(&mut self.columns, j2, j);
                        b.xor_assign(a);
                    }
                    None => {
                        low_inv[low] = Some(j);
                        break;
                    }
                }
            }
        }
        // reduction postcondition: lowest ones are distinct
        debug_assert!({
            let mut seen = std::collections::HashSet::new();
            self.columns
                .iter()
                .filter_map(|c| c.top_bit())
                .all(|low| seen.insert(low))
        });
        ReducedMatrix {
            columns: self.columns,
            dims: self.dims,
            values: self.values,
            low_inv,
        }
    }
}

fn split_two<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    debug_assert!(a < b);
    let (lo, hi) = v.split_at_mut(b);
    (&mut lo[a], &mut hi[0])
}

pub struct ReducedMatrix {
    columns: Vec<BitVec>,
    dims: Vec<usize>,
    values: Vec<f64>,
    low_inv: Vec<Option<usize>>,
}

impl ReducedMatrix {
    /// Reads pairs off the reduced matrix: a column with lowest one at row
    /// i kills the class born at i; columns that stay empty and are never
    /// killed are essential.
    pub fn diagram(&self) -> PersistenceDiagram {
        let n = self.columns.len();
        let mut pairs = Vec::new();
        for j in 0..n {
            if let Some(i) = self.columns[j].top_bit() {
                pairs.push(PersistencePair {
                    dim: self.dims[i],
                    birth: self.values[i],
                    death: self.values[j],
                });
            } else if self.low_inv[j].is_none() {
                pairs.push(PersistencePair {
                    dim: self.dims[j],
                    birth: self.values[j],
                    death: f64::INFINITY,
                });
            }
        }
        pairs.sort_by(|p, q| {
            p.dim
                .cmp(&q.dim)
                .then_with(|| p.birth.total_cmp(&q.birth))
                .then_with(|| p.death.total_cmp(&q.death))
        });
        PersistenceDiagram { pairs }
    }
}

/// Standard reduction end to end: order must come from
/// [`filtration_order`] (or satisfy the same contract).
pub fn reduce_and_pair(
    m: &LefschetzComplex,
    order: &[usize],
    phi: &[f64],
) -> PersistenceDiagram {
    build_reduction_input(m, order)
        .with_values(order, phi)
        .reduce()
        .diagram()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, extend_filtration};
    use crate::gradient::compute_discrete_gradient;
    use crate::morse::{betti_numbers_f2, extract_morse_complex};
    use crate::testutil::{e1, t1};

    fn scalar_filter(m: &LefschetzComplex, comp: usize) -> Vec<f64> {
        (0..m.cell_count())
            .map(|i| m.cell(i).grade.components()[comp])
            .collect()
    }

    fn labels(m: &LefschetzComplex, order: &[usize]) -> Vec<String> {
        order
            .iter()
            .map(|&i| {
                m.cell(i)
                    .label
                    .vertices()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<String>()
            })
            .collect()
    }

    #[test]
    fn order_t1_first_component() {
        let (c, mf) = t1();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let phi = scalar_filter(&m, 0);
        let order = filtration_order(&m, &phi).unwrap();
        assert_eq!(
            labels(&m, &order),
            vec!["0", "1", "01", "2", "02", "12", "012"]
        );
    }

    #[test]
    fn order_single_vertex() {
        let c = build_complex(1, &[]).unwrap();
        let mf =
            extend_filtration(&c, vec![crate::complex::Multigrade::new(vec![0.0])]).unwrap();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let order = filtration_order(&m, &[0.0]).unwrap();
        assert_eq!(order, vec![0]);
    }

    #[test]
    fn order_morse_t1_under_push() {
        let (c, mf) = t1();
        let g = compute_discrete_gradient(&c, &mf).unwrap();
        let m = extract_morse_complex(&g, &c, &mf).unwrap();
        let slice = crate::foliation::Slice::new(std::f64::consts::FRAC_PI_4, [-2.5, 2.5]);
        let grades: Vec<_> = (0..m.cell_count()).map(|i| m.cell(i).grade.clone()).collect();
        let phi = crate::foliation::push_to_slice(&grades, &slice);
        let order = filtration_order(&m, &phi).unwrap();
        assert_eq!(labels(&m, &order), vec!["0", "1", "01", "2", "12"]);
        let vals: Vec<f64> = order.iter().map(|&i| phi[i]).collect();
        for (got, want) in vals.iter().zip([2.5, 3.5, 3.5, 4.5, 4.5]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn order_rejects_non_monotone() {
        let (c, mf) = t1();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let mut phi = scalar_filter(&m, 0);
        phi[m.cell_count() - 1] = -1.0; // top cell below its facets
        assert!(matches!(
            filtration_order(&m, &phi),
            Err(PersistenceError::NonMonotoneFilter { .. })
        ));
    }

    #[test]
    fn reduce_e1() {
        let (c, mf) = e1();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let phi = scalar_filter(&m, 0);
        let order = filtration_order(&m, &phi).unwrap();
        let d = reduce_and_pair(&m, &order, &phi);
        assert_eq!(
            d.pairs,
            vec![
                PersistencePair {
                    dim: 0,
                    birth: 0.0,
                    death: f64::INFINITY
                },
                PersistencePair {
                    dim: 0,
                    birth: 1.0,
                    death: 1.0
                },
            ]
        );
        assert_eq!(d.positive_pairs().count(), 1);
    }

    #[test]
    fn reduce_t1_first_component() {
        let (c, mf) = t1();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let phi = scalar_filter(&m, 0);
        let order = filtration_order(&m, &phi).unwrap();
        let d = reduce_and_pair(&m, &order, &phi);
        let dim0: Vec<(f64, f64)> = d
            .pairs
            .iter()
            .filter(|p| p.dim == 0)
            .map(|p| (p.birth, p.death))
            .collect();
        assert_eq!(
            dim0,
            vec![(0.0, f64::INFINITY), (1.0, 1.0), (2.0, 2.0)]
        );
        let dim1: Vec<(f64, f64)> = d
            .pairs
            .iter()
            .filter(|p| p.dim == 1)
            .map(|p| (p.birth, p.death))
            .collect();
        assert_eq!(dim1, vec![(2.0, 2.0)]);
        // positive-persistence content: one essential 0-class
        let positive: Vec<&PersistencePair> = d.positive_pairs().collect();
        assert_eq!(positive.len(), 1);
        assert!(positive[0].is_essential() && positive[0].dim == 0);
    }

    #[test]
    fn reduce_empty() {
        let c = build_complex(0, &[]).unwrap();
        let mf = extend_filtration(&c, Vec::new()).unwrap();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        let d = reduce_and_pair(&m, &[], &[]);
        assert!(d.pairs.is_empty());
    }

    #[test]
    fn totality_and_essential_counts_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let (c, mf) = crate::testutil::random_instance(&mut rng, 150, 2);
            let m = LefschetzComplex::from_simplicial(&c, &mf);
            let phi = scalar_filter(&m, 0);
            let order = filtration_order(&m, &phi).unwrap();
            let d = reduce_and_pair(&m, &order, &phi);
            // every cell accounted once: finite pairs take two, essentials one
            let finite = d.pairs.iter().filter(|p| !p.is_essential()).count();
            let essential = d.pairs.len() - finite;
            assert_eq!(finite * 2 + essential, m.cell_count());
            // essential classes per dimension equal Betti numbers
            let betti = betti_numbers_f2(&m).unwrap();
            for (k, &b) in betti.iter().enumerate() {
                assert_eq!(d.essential_count(k), b, "dim {k}");
            }
        }
    }

    #[test]
    fn morse_diagram_matches_simplicial_scalar() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..25 {
            let (c, mf) = crate::testutil::random_instance(&mut rng, 150, 2);
            let full = LefschetzComplex::from_simplicial(&c, &mf);
            let g = compute_discrete_gradient(&c, &mf).unwrap();
            let reduced = extract_morse_complex(&g, &c, &mf).unwrap();
            for comp in 0..2 {
                let phi_f = scalar_filter(&full, comp);
                let phi_r = scalar_filter(&reduced, comp);
                let of = filtration_order(&full, &phi_f).unwrap();
                let or = filtration_order(&reduced, &phi_r).unwrap();
                let df = reduce_and_pair(&full, &of, &phi_f);
                let dr = reduce_and_pair(&reduced, &or, &phi_r);
                assert!(df.positive_matches(&dr, 0.0), "exact match expected");
            }
        }
    }

    #[test]
    fn zero_persistence_flagging() {
        let p = PersistencePair {
            dim: 0,
            birth: 1.0,
            death: 1.0,
        };
        assert!(p.is_zero_persistence() && !p.is_essential());
        let q = PersistencePair {
            dim: 1,
            birth: 1.0,
            death: f64::INFINITY,
        };
        assert!(!q.is_zero_persistence() && q.is_essential());
    }

    #[test]
    fn filter_length_checked() {
        let (c, mf) = t1();
        let m = LefschetzComplex::from_simplicial(&c, &mf);
        assert!(matches!(
            filtration_order(&m, &[0.0]),
            Err(PersistenceError::FilterLengthMismatch { .. })
        ));
    }
}
