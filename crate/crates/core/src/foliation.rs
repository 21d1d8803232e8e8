//! Persistence spaces of bifiltrations by the foliation method: slice the
//! parameter plane with lines of positive slope, push multigrades to scalar
//! filters, reduce per slice, aggregate.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{Multigrade, MultiFiltration};
use crate::morse::LefschetzComplex;
use crate::persistence::{
    build_reduction_input, filtration_order, PersistenceDiagram, PersistenceError,
};

#[derive(Debug, Error)]
pub enum FoliationError {
    #[error("the foliation method applies to bifiltrations only, got {0} parameters")]
    NotBifiltration(usize),
    #[error("slice sampling requires ω ≥ 1")]
    ZeroSlices,
    #[error("extremes are not ordered component-wise")]
    UnorderedExtremes,
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

/// A line of positive slope in the parameter plane: unit direction
/// `m = (cos λ, sin λ)` with `λ ∈ (0, π/2)`, passing through a base point
/// on the antidiagonal (`b₁ + b₂ = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub lambda: f64,
    pub m: [f64; 2],
    pub b: [f64; 2],
}

impl Slice {
    pub fn new(lambda: f64, b: [f64; 2]) -> Slice {
        debug_assert!(lambda > 0.0 && lambda < std::f64::consts::FRAC_PI_2);
        Slice {
            lambda,
            m: [lambda.cos(), lambda.sin()],
            b,
        }
    }
}

/// Component-wise min and max of the vertex grades of a bifiltration.
pub fn compute_extremes(
    mf: &MultiFiltration,
) -> Result<(Multigrade, Multigrade), FoliationError> {
    if mf.params() != 2 {
        return Err(FoliationError::NotBifiltration(mf.params()));
    }
    extremes_of(mf.vertex_grades()).ok_or(FoliationError::NotBifiltration(2))
}

fn extremes_of(grades: &[Multigrade]) -> Option<(Multigrade, Multigrade)> {
    let first = grades.first()?;
    let (mut lo, mut hi) = (first.components().to_vec(), first.components().to_vec());
    for g in &grades[1..] {
        for (i, &x) in g.components().iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    Some((Multigrade::new(lo), Multigrade::new(hi)))
}

/// Projection of `u` onto the antidiagonal along direction `m`.
fn project_to_antidiagonal(u: [f64; 2], m: [f64; 2]) -> [f64; 2] {
    let t = (u[0] + u[1]) / (m[0] + m[1]);
    [u[0] - t * m[0], u[1] - t * m[1]]
}

/// Uniformly samples ω² slices: ω midpoint angles in (0, π/2), and for
/// each angle ω midpoint base points between the antidiagonal projections
/// of the corners (c₁, C₂) and (C₁, c₂).
///
/// Midpoint sampling keeps every slope strictly positive, so the push
/// formula never divides by zero.
pub fn generate_slices(
    c: &Multigrade,
    big_c: &Multigrade,
    omega: usize,
) -> Result<Vec<Slice>, FoliationError> {
    if omega == 0 {
        return Err(FoliationError::ZeroSlices);
    }
    if c.len() != 2 || big_c.len() != 2 {
        return Err(FoliationError::NotBifiltration(c.len()));
    }
    if !c.leq(big_c) {
        return Err(FoliationError::UnorderedExtremes);
    }
    let (c1, c2) = (c.components()[0], c.components()[1]);
    let (b1, b2) = (big_c.components()[0], big_c.components()[1]);
    let mut out = Vec::with_capacity(omega * omega);
    for j in 0..omega {
        let lambda = std::f64::consts::FRAC_PI_2 * (j as f64 + 0.5) / omega as f64;
        let m = [lambda.cos(), lambda.sin()];
        let p = project_to_antidiagonal([c1, b2], m);
        let q = project_to_antidiagonal([b1, c2], m);
        let (lo, hi) = if p[0] <= q[0] {
            (p[0], q[0])
        } else {
            (q[0], p[0])
        };
        for i in 0..omega {
            let x = lo + (i as f64 + 0.5) * (hi - lo) / omega as f64;
            out.push(Slice::new(lambda, [x, -x]));
        }
    }
    Ok(out)
}

/// Pushes multigrades onto a slice:
/// `Φ(σ) = min(m₁, m₂) · max_i (φ_i(σ) − b_i) / m_i`.
pub fn push_to_slice(grades: &[Multigrade], slice: &Slice) -> Vec<f64> {
    let min_m = slice.m[0].min(slice.m[1]);
    grades
        .iter()
        .map(|g| {
            let a = (g.components()[0] - slice.b[0]) / slice.m[0];
            let b = (g.components()[1] - slice.b[1]) / slice.m[1];
            min_m * a.max(b)
        })
        .collect()
}

/// Wall-clock phase totals across all slices: slice generation, matrix
/// building, reduction, and diagram re-annotation.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseTimings {
    pub line_extraction: Duration,
    pub building: Duration,
    pub computing: Duration,
    pub reindexing: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.line_extraction + self.building + self.computing + self.reindexing
    }
}

/// The collection of per-slice persistence diagrams approximating the
/// persistence space of a bifiltration.
pub struct PersistenceSpace {
    pub entries: Vec<(Slice, PersistenceDiagram)>,
    pub timings: PhaseTimings,
}

/// Runs the per-slice pipeline (push, order, reduce, annotate) over the
/// given slices. Slices are processed in parallel; output keeps the input
/// slice order.
pub fn compute_persistence_space_on_slices(
    m: &LefschetzComplex,
    slices: Vec<Slice>,
) -> Result<PersistenceSpace, FoliationError> {
    let grades: Vec<Multigrade> = (0..m.cell_count())
        .map(|i| m.cell(i).grade.clone())
        .collect();
    let per_slice: Vec<Result<(Slice, PersistenceDiagram, Duration, Duration, Duration), FoliationError>> =
        slices
            .into_par_iter()
            .map(|slice| {
                let t0 = Instant::now();
                let phi = push_to_slice(&grades, &slice);
                let order = filtration_order(m, &phi)?;
                let input = build_reduction_input(m, &order).with_values(&order, &phi);
                let t1 = Instant::now();
                let reduced = input.reduce();
                let t2 = Instant::now();
                let diagram = reduced.diagram();
                let t3 = Instant::now();
                Ok((slice, diagram, t1 - t0, t2 - t1, t3 - t2))
            })
            .collect();

    let mut entries = Vec::with_capacity(per_slice.len());
    let mut timings = PhaseTimings::default();
    for r in per_slice {
        let (slice, diagram, building, computing, reindexing) = r?;
        timings.building += building;
        timings.computing += computing;
        timings.reindexing += reindexing;
        entries.push((slice, diagram));
    }
    Ok(PersistenceSpace { entries, timings })
}

/// Full foliation run over ω² slices generated from the complex's own
/// grade extremes. For comparisons across complexes, generate slices once
/// and use [`compute_persistence_space_on_slices`].
pub fn compute_persistence_space(
    m: &LefschetzComplex,
    omega: usize,
) -> Result<PersistenceSpace, FoliationError> {
    let t0 = Instant::now();
    let grades: Vec<Multigrade> = (0..m.cell_count())
        .map(|i| m.cell(i).grade.clone())
        .collect();
    let (lo, hi) = match extremes_of(&grades) {
        Some(pair) => {
            if m.params() != 2 {
                return Err(FoliationError::NotBifiltration(m.params()));
            }
            pair
        }
        // empty complex: degenerate extremes still yield ω² (empty) diagrams
        None => (Multigrade::new(vec![0.0, 0.0]), Multigrade::new(vec![0.0, 0.0])),
    };
    let slices = generate_slices(&lo, &hi, omega)?;
    let line_extraction = t0.elapsed();
    let mut space = compute_persistence_space_on_slices(m, slices)?;
    space.timings.line_extraction = line_extraction;
    Ok(space)
}

/// Diagram CSV: `dim,birth,death,lambda,b1,b2`; slice columns stay blank
/// for diagrams that did not come from a slice, death prints as `inf`
/// for essential pairs.
pub fn diagrams_csv<'a, I>(rows: I) -> String
where
    I: IntoIterator<Item = (Option<&'a Slice>, &'a PersistenceDiagram)>,
{
    let mut out = String::from("dim,birth,death,lambda,b1,b2\n");
    for (slice, diagram) in rows {
        let suffix = match slice {
            Some(s) => format!("{},{},{}", s.lambda, s.b[0], s.b[1]),
            None => ",,".to_string(),
        };
        for p in &diagram.pairs {
            out.push_str(&format!("{},{},{},{}\n", p.dim, p.birth, p.death, suffix));
        }
    }
    out
}

/// Timing CSV mirroring the reported phase decomposition.
pub fn timings_csv(reduction: Duration, phases: &PhaseTimings) -> String {
    let ms = |d: Duration| format!("{:.3}", d.as_secs_f64() * 1e3);
    format!(
        "reduction_ms,line_extraction_ms,building_ms,computing_ms,reindexing_ms,total_ms\n{},{},{},{},{},{}\n",
        ms(reduction),
        ms(phases.line_extraction),
        ms(phases.building),
        ms(phases.computing),
        ms(phases.reindexing),
        ms(reduction + phases.total()),
    )
}
