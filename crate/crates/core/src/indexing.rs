//! Well-extensible vertex indexing and the decomposition of a complex into
//! index-based lower stars, split into level sets by multigrade.
//!
//! This is the divide step: the level sets emitted here are the independent
//! units handed to homotopy expansion.

use crate::complex::{CellId, ComplexError, MultiFiltration, Simplex, SimplicialComplex};

/// A bijection vertex ↔ rank whose max-extension to simplices is monotone
/// with respect to the multigrade partial order (well-extensible).
pub struct VertexIndexing {
    rank: Vec<usize>,
    order: Vec<usize>,
}

impl VertexIndexing {
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Inverse of [`rank`](Self::rank): the vertex holding a given rank.
    pub fn vertex_at(&self, rank: usize) -> usize {
        self.order[rank]
    }

    pub fn vertex_count(&self) -> usize {
        self.rank.len()
    }

    /// Ĩ(σ): the maximum vertex rank of a simplex.
    pub fn extended(&self, s: &Simplex) -> usize {
        s.vertices().iter().map(|&v| self.rank[v]).max().unwrap()
    }

    /// The simplex's vertex ranks in decreasing order. Lexicographic
    /// comparison of these keys is the deterministic tie-break used
    /// throughout gradient construction.
    pub fn lex_key(&self, s: &Simplex) -> Vec<usize> {
        let mut key: Vec<usize> = s.vertices().iter().map(|&v| self.rank[v]).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        key
    }
}

/// Ranks vertices by the first filtration component. Injectivity of the
/// component makes the order total, and the resulting indexing
/// well-extensible: F̃(σ) ⪯ F̃(τ) forces F̃₁(σ) ≤ F̃₁(τ) and hence
/// Ĩ(σ) ≤ Ĩ(τ).
pub fn compute_indexing(mf: &MultiFiltration) -> Result<VertexIndexing, ComplexError> {
    let n = mf.vertex_grades().len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        mf.vertex_grade(a).components()[0].total_cmp(&mf.vertex_grade(b).components()[0])
    });
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (va, vb) = (
            mf.vertex_grade(a).components()[0],
            mf.vertex_grade(b).components()[0],
        );
        if va == vb {
            return Err(ComplexError::NonInjective {
                component: 0,
                a,
                b,
                value: va,
            });
        }
    }
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    Ok(VertexIndexing { rank, order })
}

/// Low_I(v): the cofaces of `v` whose maximum-rank vertex is `v`.
/// Over all vertices these sets partition the complex.
pub fn index_lower_star(
    v: usize,
    idx: &VertexIndexing,
    complex: &SimplicialComplex,
) -> Vec<CellId> {
    let rv = idx.rank(v);
    complex
        .vertex_star(v)
        .iter()
        .copied()
        .filter(|&id| {
            complex
                .cell(id)
                .vertices()
                .iter()
                .all(|&w| idx.rank(w) <= rv)
        })
        .collect()
}

/// A maximal equal-multigrade subset of one index-based lower star.
#[derive(Clone, Debug)]
pub struct LevelSet {
    /// The vertex whose index-based lower star this level set came from.
    pub owner: usize,
    /// The multigrade shared by every member.
    pub grade: crate::complex::Multigrade,
    /// Members, sorted by ascending lex key.
    pub cells: Vec<CellId>,
}

impl LevelSet {
    /// One `--dump-decomposition` record.
    pub fn decomposition_line(&self, complex: &SimplicialComplex) -> String {
        let mut cells = String::new();
        for &id in &self.cells {
            cells.push('(');
            let vs = complex.cell(id).vertices();
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    cells.push(',');
                }
                cells.push_str(&v.to_string());
            }
            cells.push(')');
        }
        format!("v={} grade={} cells={}", self.owner, self.grade, cells)
    }
}

/// Partitions an index-based lower star into level sets of equal F̃.
/// Output is deterministic: level sets in lexicographic grade order,
/// members in lex-key order.
pub fn split_index_lower_star(
    low: &[CellId],
    complex: &SimplicialComplex,
    mf: &MultiFiltration,
    idx: &VertexIndexing,
) -> Vec<LevelSet> {
    if low.is_empty() {
        return Vec::new();
    }
    let owner = {
        // every member's maximum-rank vertex is the owner
        let s = complex.cell(low[0]);
        *s.vertices()
            .iter()
            .max_by_key(|&&v| idx.rank(v))
            .unwrap()
    };
    let mut groups: std::collections::HashMap<&crate::complex::Multigrade, Vec<CellId>> =
        std::collections::HashMap::new();
    for &id in low {
        groups.entry(mf.grade(id)).or_default().push(id);
    }
    let mut out: Vec<LevelSet> = groups
        .into_iter()
        .map(|(grade, mut cells)| {
            cells.sort_by_cached_key(|&id| idx.lex_key(complex.cell(id)));
            LevelSet {
                owner,
                grade: grade.clone(),
                cells,
            }
        })
        .collect();
    out.sort_by(|a, b| a.grade.cmp_lex(&b.grade));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, extend_filtration, Multigrade};
    use crate::testutil::{e1, t1};

    fn ids(complex: &SimplicialComplex, tuples: &[&[usize]]) -> Vec<CellId> {
        tuples
            .iter()
            .map(|vs| {
                complex
                    .id_of(&Simplex::new(vs.to_vec()).unwrap())
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn indexing_t1() {
        let (_, mf) = t1();
        let idx = compute_indexing(&mf).unwrap();
        assert_eq!((idx.rank(0), idx.rank(1), idx.rank(2)), (0, 1, 2));
    }

    #[test]
    fn indexing_sorts_first_component() {
        let c = build_complex(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let f = vec![
            Multigrade::new(vec![3.5]),
            Multigrade::new(vec![-1.0]),
            Multigrade::new(vec![2.0]),
        ];
        let mf = extend_filtration(&c, f).unwrap();
        let idx = compute_indexing(&mf).unwrap();
        assert_eq!((idx.rank(0), idx.rank(1), idx.rank(2)), (2, 0, 1));
        assert_eq!(idx.vertex_at(0), 1);
    }

    #[test]
    fn indexing_single_vertex() {
        let c = build_complex(1, &[]).unwrap();
        let f = vec![Multigrade::new(vec![4.0])];
        let mf = extend_filtration(&c, f).unwrap();
        let idx = compute_indexing(&mf).unwrap();
        assert_eq!(idx.rank(0), 0);
    }

    #[test]
    fn lower_stars_t1() {
        let (c, mf) = t1();
        let idx = compute_indexing(&mf).unwrap();
        assert_eq!(index_lower_star(0, &idx, &c), ids(&c, &[&[0]]));
        assert_eq!(index_lower_star(1, &idx, &c), ids(&c, &[&[1], &[0, 1]]));
        assert_eq!(
            index_lower_star(2, &idx, &c),
            ids(&c, &[&[2], &[0, 2], &[1, 2], &[0, 1, 2]])
        );
    }

    #[test]
    fn split_t1_owner_c() {
        let (c, mf) = t1();
        let idx = compute_indexing(&mf).unwrap();
        let low = index_lower_star(2, &idx, &c);
        let levels = split_index_lower_star(&low, &c, &mf, &idx);
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[0].grade, Multigrade::new(vec![2.0, 3.0]));
        assert_eq!(levels[0].cells, ids(&c, &[&[2]]));
        assert_eq!(levels[1].grade, Multigrade::new(vec![2.0, 4.0]));
        assert_eq!(levels[1].cells, ids(&c, &[&[1, 2]]));
        assert_eq!(levels[2].grade, Multigrade::new(vec![2.0, 5.0]));
        assert_eq!(levels[2].cells, ids(&c, &[&[0, 2], &[0, 1, 2]]));
        assert_eq!(levels[2].owner, 2);
    }

    #[test]
    fn split_singleton() {
        let (c, mf) = t1();
        let idx = compute_indexing(&mf).unwrap();
        let low = index_lower_star(0, &idx, &c);
        let levels = split_index_lower_star(&low, &c, &mf, &idx);
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].cells.len(), 1);
    }

    #[test]
    fn split_e1_owner_b() {
        let (c, mf) = e1();
        let idx = compute_indexing(&mf).unwrap();
        let low = index_lower_star(1, &idx, &c);
        let levels = split_index_lower_star(&low, &c, &mf, &idx);
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].grade, Multigrade::new(vec![1.0, 1.0]));
        assert_eq!(levels[0].cells, ids(&c, &[&[1], &[0, 1]]));
    }

    #[test]
    fn lower_stars_partition() {
        let (c, mf) = crate::testutil::two_triangles();
        let idx = compute_indexing(&mf).unwrap();
        let mut seen = vec![0usize; c.cell_count()];
        for v in 0..c.vertex_count() {
            for id in index_lower_star(v, &idx, &c) {
                seen[id] += 1;
            }
        }
        assert!(seen.iter().all(|&n| n == 1));
    }

    #[test]
    fn well_extensible_random() {
        // exhaustive check of F̃(σ) ⪯ F̃(τ) ⇒ Ĩ(σ) ≤ Ĩ(τ) on random inputs
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..20 {
            let (c, mf) = crate::testutil::random_instance(&mut rng, 200, 2 + case % 2);
            let idx = compute_indexing(&mf).unwrap();
            for a in 0..c.cell_count() {
                for b in 0..c.cell_count() {
                    if mf.grade(a).leq(mf.grade(b)) {
                        assert!(idx.extended(c.cell(a)) <= idx.extended(c.cell(b)));
                    }
                }
            }
        }
    }

    #[test]
    fn level_set_representative() {
        // Every level set L equals Low_f(σ) for exactly one σ ∈ L, which is
        // the intersection of all members.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (c, mf) = crate::testutil::random_instance(&mut rng, 120, 2);
            let idx = compute_indexing(&mf).unwrap();
            for v in 0..c.vertex_count() {
                let low = index_lower_star(v, &idx, &c);
                for level in split_index_lower_star(&low, &c, &mf, &idx) {
                    // intersection of member vertex sets
                    let mut inter: Vec<usize> =
                        c.cell(level.cells[0]).vertices().to_vec();
                    for &id in &level.cells[1..] {
                        let vs = c.cell(id).vertices();
                        inter.retain(|x| vs.contains(x));
                    }
                    let rep = Simplex::new(inter).unwrap();
                    let rep_id = c.id_of(&rep).expect("representative in complex");
                    assert!(level.cells.contains(&rep_id));
                    // Low_f(rep) must equal the level set
                    let mut lf: Vec<CellId> = c
                        .star_by_id(rep_id)
                        .into_iter()
                        .filter(|&t| mf.grade(t).leq(mf.grade(rep_id)))
                        .collect();
                    lf.sort_unstable();
                    let mut members = level.cells.clone();
                    members.sort_unstable();
                    assert_eq!(lf, members);
                    // and rep is the unique such member
                    let count = level
                        .cells
                        .iter()
                        .filter(|&&s| {
                            let mut lfs: Vec<CellId> = c
                                .star_by_id(s)
                                .into_iter()
                                .filter(|&t| mf.grade(t).leq(mf.grade(s)))
                                .collect();
                            lfs.sort_unstable();
                            lfs == members
                        })
                        .count();
                    assert_eq!(count, 1);
                }
            }
        }
    }

    #[test]
    fn grade_purity() {
        let (c, mf) = t1();
        let idx = compute_indexing(&mf).unwrap();
        for v in 0..c.vertex_count() {
            let low = index_lower_star(v, &idx, &c);
            for level in split_index_lower_star(&low, &c, &mf, &idx) {
                for &id in &level.cells {
                    assert_eq!(mf.grade(id), &level.grade);
                }
            }
        }
    }
}
