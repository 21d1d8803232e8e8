//! Shared fixtures and random-instance generation for unit tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{
    build_complex, extend_filtration, Multigrade, MultiFiltration, SimplicialComplex,
};
use crate::synthetic::{triangulated_grid, triangulated_torus};

pub fn grades(vals: &[&[f64]]) -> Vec<Multigrade> {
    vals.iter().map(|v| Multigrade::new(v.to_vec())).collect()
}

/// Triangle with f(a)=(0,5), f(b)=(1,4), f(c)=(2,3).
pub fn t1() -> (SimplicialComplex, MultiFiltration) {
    let c = build_complex(3, &[vec![0, 1, 2]]).unwrap();
    let mf = extend_filtration(&c, grades(&[&[0.0, 5.0], &[1.0, 4.0], &[2.0, 3.0]])).unwrap();
    (c, mf)
}

/// Edge with f(a)=(0,0), f(b)=(1,1).
pub fn e1() -> (SimplicialComplex, MultiFiltration) {
    let c = build_complex(2, &[vec![0, 1]]).unwrap();
    let mf = extend_filtration(&c, grades(&[&[0.0, 0.0], &[1.0, 1.0]])).unwrap();
    (c, mf)
}

pub fn two_triangles() -> (SimplicialComplex, MultiFiltration) {
    let c = build_complex(4, &[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    let mf = extend_filtration(
        &c,
        grades(&[&[0.0, 2.0], &[1.0, 0.0], &[2.0, 3.0], &[3.0, 1.0]]),
    )
    .unwrap();
    (c, mf)
}

/// Random injective vertex grades: each component an independent random
/// permutation of 0..count.
pub fn random_injective_grades<R: Rng>(rng: &mut R, count: usize, params: usize) -> Vec<Multigrade> {
    let mut columns = Vec::with_capacity(params);
    for _ in 0..params {
        let mut perm: Vec<usize> = (0..count).collect();
        perm.shuffle(rng);
        columns.push(perm);
    }
    (0..count)
        .map(|v| Multigrade::new((0..params).map(|p| columns[p][v] as f64).collect()))
        .collect()
}

/// A random subcomplex of a triangulated grid or torus with at most
/// `max_cells` cells, carrying a random component-wise injective
/// `params`-filtration.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_cells: usize,
    params: usize,
) -> (SimplicialComplex, MultiFiltration) {
    let shapes: &[(usize, Vec<Vec<usize>>)] = &[
        triangulated_grid(3, 3),
        triangulated_grid(4, 3),
        triangulated_grid(4, 4),
        triangulated_grid(5, 5),
        triangulated_grid(6, 6),
        triangulated_torus(3, 3),
        triangulated_torus(4, 4),
        triangulated_torus(5, 5),
    ];
    // full sizes are 6·(#quads)+boundary terms; filter by the built size
    loop {
        let (vcount, tops) = &shapes[rng.gen_range(0..shapes.len())];
        let full = build_complex(*vcount, tops).unwrap();
        if full.cell_count() > max_cells.max(33) {
            continue;
        }
        // face closure of a random subset of all cells
        let keep = rng.gen_range(0.3..0.95);
        let picked: Vec<Vec<usize>> = (0..full.cell_count())
            .filter(|_| rng.gen_bool(keep))
            .map(|id| full.cell(id).vertices().to_vec())
            .collect();
        let c = build_complex(*vcount, &picked).unwrap();
        if c.cell_count() > max_cells {
            continue;
        }
        let f = random_injective_grades(rng, *vcount, params);
        let mf = extend_filtration(&c, f).unwrap();
        return (c, mf);
    }
}
