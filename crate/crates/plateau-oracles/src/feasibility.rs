//! Componentwise extremes of the solution polytope by fixed-point
//! iteration, independent of the fast construction.

use plateau::complex::CellComplex;
use plateau::function::CellFunction;
use plateau::morse::GradientField;
use thiserror::Error;

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("the delta-box and the order constraints admit no common point")]
pub struct Infeasible;

/// Computes the least and greatest points of the polytope of functions
/// within `delta` of `f` and consistent with `field`, by iterating the
/// order constraints against the box until a fixed point; reports
/// `Infeasible` when a bound escapes the box.
pub fn feasibility_lp_vertex(
    complex: &CellComplex,
    f: &CellFunction,
    field: &GradientField,
    delta: f64,
) -> Result<(CellFunction, CellFunction), Infeasible> {
    // Constraint h(lo) <= h(hi) for every facet incidence, with matched
    // pairs inverted; derived directly from the complex rather than from
    // the Hasse structure the implementation uses.
    let mut constraints: Vec<(usize, usize)> = Vec::new();
    for tau in complex.cells() {
        for &sigma in complex.facets(tau) {
            if field.partner(sigma) == Some(tau) {
                constraints.push((tau.index(), sigma.index()));
            } else {
                constraints.push((sigma.index(), tau.index()));
            }
        }
    }

    let mut low: Vec<f64> = f.values().iter().map(|v| v - delta).collect();
    let mut high: Vec<f64> = f.values().iter().map(|v| v + delta).collect();
    let limit = complex.len() + 2;
    let mut rounds = 0usize;
    loop {
        let mut changed = false;
        for &(lo, hi) in &constraints {
            if low[hi] < low[lo] {
                low[hi] = low[lo];
                changed = true;
            }
            if high[lo] > high[hi] {
                high[lo] = high[hi];
                changed = true;
            }
        }
        if !changed {
            break;
        }
        rounds += 1;
        if rounds > limit {
            return Err(Infeasible);
        }
    }
    for c in complex.cells() {
        let i = c.index();
        let v = f.value(c);
        if low[i] > v + delta || high[i] < v - delta {
            return Err(Infeasible);
        }
    }
    Ok((CellFunction::new(low), CellFunction::new(high)))
}
