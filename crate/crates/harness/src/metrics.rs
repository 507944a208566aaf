//! Scalar metrics derived from optimization traces.

use crate::error::{HarnessError, Result};

/// Trapezoidal area under `ys` sampled at strictly ascending `xs`.
///
/// Computed on raw values; smoothing never feeds this.
pub fn trapezoid_area(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(HarnessError::Numerical(format!(
            "area needs matching sample counts, got {} abscissae and {} values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(HarnessError::Numerical(
            "area needs at least two samples".into(),
        ));
    }
    for pair in xs.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(HarnessError::Numerical(format!(
                "scan values must be strictly ascending, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let mut area = 0.0;
    for i in 0..xs.len() - 1 {
        area += (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]) / 2.0;
    }
    Ok(area)
}

/// Iterations at which the energy ordering of the ensemble states changed.
///
/// An event is recorded at iteration `t >= 1` whenever the argsort of the
/// per-state energies differs from the previous iteration's.
pub fn swap_events(per_state_energies: &[Vec<f64>]) -> Vec<usize> {
    let mut events = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    for (t, energies) in per_state_energies.iter().enumerate() {
        let mut order: Vec<usize> = (0..energies.len()).collect();
        order.sort_by(|&i, &j| energies[i].total_cmp(&energies[j]).then(i.cmp(&j)));
        if let Some(prev) = &previous {
            if *prev != order {
                events.push(t);
            }
        }
        previous = Some(order);
    }
    events
}
