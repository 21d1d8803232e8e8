//! Synthetic triangulations: planar grids and flat tori, with a torus
//! embedding for (x, y) bifiltrations. Used by the benchmark and
//! verification tooling; sizes scale as `6·w·h` cells.

use crate::complex::Multigrade;

/// Triangulated `w × h` vertex grid. Returns the vertex count and the
/// top triangles (two per quad).
pub fn triangulated_grid(w: usize, h: usize) -> (usize, Vec<Vec<usize>>) {
    assert!(w >= 2 && h >= 2);
    let mut tops = Vec::with_capacity(2 * (w - 1) * (h - 1));
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let v00 = j * w + i;
            let v10 = v00 + 1;
            let v01 = v00 + w;
            let v11 = v01 + 1;
            tops.push(vec![v00, v10, v01]);
            tops.push(vec![v10, v01, v11]);
        }
    }
    (w * h, tops)
}

/// Triangulated flat torus on a `w × h` vertex grid with wraparound.
/// Requires `w, h ≥ 3` so that every triangle has three distinct vertices.
pub fn triangulated_torus(w: usize, h: usize) -> (usize, Vec<Vec<usize>>) {
    assert!(w >= 3 && h >= 3);
    let mut tops = Vec::with_capacity(2 * w * h);
    for j in 0..h {
        for i in 0..w {
            let v00 = j * w + i;
            let v10 = j * w + (i + 1) % w;
            let v01 = ((j + 1) % h) * w + i;
            let v11 = ((j + 1) % h) * w + (i + 1) % w;
            tops.push(vec![v00, v10, v01]);
            tops.push(vec![v10, v01, v11]);
        }
    }
    (w * h, tops)
}

/// (x, y) coordinates of the standard torus embedding
/// `((R + r·cosθ)·cosφ, (R + r·cosθ)·sinφ)` for the vertex grid of
/// [`triangulated_torus`]. Not component-wise injective; run the result
/// through [`make_injective`](crate::complex::make_injective).
pub fn torus_xy_coordinates(w: usize, h: usize) -> Vec<Multigrade> {
    let (big_r, small_r) = (2.0f64, 1.0f64);
    let mut out = Vec::with_capacity(w * h);
    for j in 0..h {
        for i in 0..w {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (h as f64);
            let phi = 2.0 * std::f64::consts::PI * (i as f64) / (w as f64);
            let x = (big_r + small_r * theta.cos()) * phi.cos();
            let y = (big_r + small_r * theta.cos()) * phi.sin();
            out.push(Multigrade::new(vec![x, y]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn grid_counts() {
        let (v, tops) = triangulated_grid(3, 3);
        let c = build_complex(v, &tops).unwrap();
        assert_eq!(c.cells_of_dim(0).len(), 9);
        assert_eq!(c.cells_of_dim(1).len(), 6 + 6 + 4);
        assert_eq!(c.cells_of_dim(2).len(), 8);
    }

    #[test]
    fn torus_counts() {
        let (v, tops) = triangulated_torus(4, 4);
        let c = build_complex(v, &tops).unwrap();
        // V - E + T = 0 for a torus
        assert_eq!(c.cells_of_dim(0).len(), 16);
        assert_eq!(c.cells_of_dim(2).len(), 32);
        assert_eq!(
            c.cells_of_dim(0).len() + c.cells_of_dim(2).len(),
            c.cells_of_dim(1).len()
        );
        assert_eq!(c.cell_count(), 6 * 16);
    }
}
