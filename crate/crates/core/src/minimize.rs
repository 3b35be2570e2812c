//! Nelder–Mead simplex search over the open Bloch ball.
//!
//! The search runs in unconstrained coordinates `u ∈ ℝ³` mapped onto the
//! ball by `a = tanh(|u|) û`, with `|u|` capped so that `|a| ≤ 1 − 1e−6`.
//! Every evaluated point is therefore strictly interior. The map also
//! stretches the region near the surface, which keeps the simplex
//! well-conditioned when the minimiser is close to a pure state.

use rayon::prelude::*;
use serde::Serialize;

use crate::qmath::BlochVector;

/// Largest Bloch radius the search may visit.
pub const MAX_RADIUS: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Convergence threshold on the simplex diameter (search coordinates).
    pub tol: f64,
    /// Edge length of each starting simplex (search coordinates).
    pub initial_step: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            initial_step: 0.25,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizeOutcome {
    pub point: BlochVector,
    pub value: f64,
    /// Iterations summed over all starts and the polishing restart.
    pub iterations: usize,
    pub converged: bool,
}

type Point = [f64; 3];

fn max_search_radius() -> f64 {
    MAX_RADIUS.atanh()
}

/// Search coordinates → Bloch vector.
pub fn to_bloch(u: &Point) -> BlochVector {
    let r = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    if r == 0.0 {
        return BlochVector::ORIGIN;
    }
    let capped = r.min(max_search_radius());
    let s = capped.tanh() / r;
    BlochVector::new(u[0] * s, u[1] * s, u[2] * s)
}

/// Bloch vector → search coordinates (inverse of [`to_bloch`] inside the cap).
pub fn from_bloch(a: &BlochVector) -> Point {
    let r = a.norm();
    if r == 0.0 {
        return [0.0; 3];
    }
    let s = r.min(MAX_RADIUS).atanh() / r;
    [a.x * s, a.y * s, a.z * s]
}

fn diameter(simplex: &[(Point, f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..simplex.len() {
        for j in i + 1..simplex.len() {
            let (a, b) = (&simplex[i].0, &simplex[j].0);
            let dist =
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            d = d.max(dist);
        }
    }
    d
}

fn lerp(a: &Point, b: &Point, t: f64) -> Point {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

/// Plain Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½)
/// from one starting point.
fn nelder_mead<F>(f: &F, start: Point, opts: &NelderMeadOptions) -> (Point, f64, usize, bool)
where
    F: Fn(&BlochVector) -> f64,
{
    let eval = |u: &Point| f(&to_bloch(u));
    let mut simplex: Vec<(Point, f64)> = Vec::with_capacity(4);
    simplex.push((start, eval(&start)));
    for i in 0..3 {
        let mut p = start;
        p[i] += opts.initial_step;
        simplex.push((p, eval(&p)));
    }

    for iteration in 0..opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&simplex) < opts.tol {
            return (simplex[0].0, simplex[0].1, iteration, true);
        }
        let worst = simplex[3];
        let mut centroid = [0.0; 3];
        for (p, _) in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += p[k] / 3.0;
            }
        }
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let f_reflected = eval(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let f_expanded = eval(&expanded);
            simplex[3] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[2].1 {
            simplex[3] = (reflected, f_reflected);
            continue;
        }
        let (contracted, f_contracted) = if f_reflected < worst.1 {
            let p = lerp(&centroid, &reflected, 0.5);
            (p, eval(&p))
        } else {
            let p = lerp(&centroid, &worst.0, 0.5);
            (p, eval(&p))
        };
        if f_contracted < worst.1.min(f_reflected) {
            simplex[3] = (contracted, f_contracted);
            continue;
        }
        let best = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let p = lerp(&best, &vertex.0, 0.5);
            *vertex = (p, eval(&p));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1, opts.max_iterations, false)
}

/// The eight starting points `±s(1, 1, 1)/√3` with Bloch radius ½.
pub fn symmetric_starts() -> [Point; 8] {
    let s = 0.5f64.atanh() / 3f64.sqrt();
    let mut out = [[0.0; 3]; 8];
    for (i, p) in out.iter_mut().enumerate() {
        for (k, c) in p.iter_mut().enumerate() {
            *c = if (i >> k) & 1 == 1 { -s } else { s };
        }
    }
    out
}

/// Multi-start Nelder–Mead over the open Bloch ball. The best of the eight
/// runs is polished by one restart with a fresh, smaller simplex. Starts are
/// run in parallel; the result does not depend on scheduling.
pub fn minimize_over_ball<F>(f: F, opts: &NelderMeadOptions) -> MinimizeOutcome
where
    F: Fn(&BlochVector) -> f64 + Sync,
{
    let runs: Vec<_> = symmetric_starts()
        .par_iter()
        .map(|s| nelder_mead(&f, *s, opts))
        .collect();
    let mut iterations: usize = runs.iter().map(|r| r.2).sum();
    let best = runs
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .copied()
        .expect("eight starts");
    let polish_opts = NelderMeadOptions {
        initial_step: (opts.initial_step * 1e-2).max(10.0 * opts.tol),
        ..*opts
    };
    let polished = nelder_mead(&f, best.0, &polish_opts);
    iterations += polished.2;
    let (point, value) = if polished.1 <= best.1 {
        (polished.0, polished.1)
    } else {
        (best.0, best.1)
    };
    MinimizeOutcome {
        point: to_bloch(&point),
        value,
        iterations,
        converged: best.3 && polished.3,
    }
}
