use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub harvest_fraction: f64,
    pub value: f64,
}

/// Index of the largest defined value; the first one wins ties.
pub fn grid_argmax(values: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

const GOLDEN_TOLERANCE: f64 = 1e-4;

/// Maximizes `objective` over `grid` (ascending harvest fractions), then
/// refines by golden-section search between the neighbours of the grid
/// maximum. `None` marks points where the objective is undefined. The
/// refined point replaces the grid point only if it is strictly better,
/// so flat objectives return the smallest grid value.
pub fn optimal_harvest_fraction<F>(grid: &[f64], mut objective: F) -> Result<Optimum>
where
    F: FnMut(f64) -> Option<f64>,
{
    let values: Vec<Option<f64>> = grid.iter().map(|&t| objective(t)).collect();
    let i = grid_argmax(&values).ok_or(Error::AllUndefined)?;
    let mut best = Optimum {
        harvest_fraction: grid[i],
        value: values[i].expect("argmax is defined"),
    };
    let lo = if i > 0 { grid[i - 1] } else { grid[i] };
    let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
    if hi > lo {
        let mut eval = |t: f64| objective(t).unwrap_or(f64::NEG_INFINITY);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (eval(c), eval(d));
        while b - a > GOLDEN_TOLERANCE {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = eval(d);
            }
        }
        let t = 0.5 * (a + b);
        let v = eval(t);
        if v > best.value {
            best = Optimum {
                harvest_fraction: t,
                value: v,
            };
        }
    }
    Ok(best)
}

/// Grid argmax of a sampled curve refined by the vertex of the parabola
/// through it and its two neighbours. Falls back to the grid point at the
/// ends of the grid or when the neighbours are undefined.
pub fn parabolic_peak(grid: &[f64], values: &[Option<f64>]) -> Option<Optimum> {
    let i = grid_argmax(values)?;
    let grid_point = Optimum {
        harvest_fraction: grid[i],
        value: values[i]?,
    };
    if i == 0 || i + 1 >= grid.len() {
        return Some(grid_point);
    }
    let (Some(y0), Some(y1), Some(y2)) = (values[i - 1], values[i], values[i + 1]) else {
        return Some(grid_point);
    };
    let (x0, x1, x2) = (grid[i - 1], grid[i], grid[i + 1]);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    let c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
    if !(a < 0.0) {
        return Some(grid_point);
    }
    let t = (-b / (2.0 * a)).clamp(x0, x2);
    Some(Optimum {
        harvest_fraction: t,
        value: (a * t + b) * t + c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn flat_objective_takes_smallest_t() {
        let grid = linspace(0.05, 0.95, 20);
        let opt = optimal_harvest_fraction(&grid, |_| Some(2.0)).unwrap();
        assert_eq!(opt.harvest_fraction, 0.05);
    }

    #[test]
    fn concave_quadratic_peak() {
        let grid = linspace(0.02, 0.97, 20);
        let opt = optimal_harvest_fraction(&grid, |t| Some(t * (1.0 - t))).unwrap();
        assert!((opt.harvest_fraction - 0.5).abs() <= 1e-3, "{opt:?}");
    }

    #[test]
    fn all_undefined_is_an_error() {
        let grid = linspace(0.1, 0.9, 20);
        assert!(matches!(
            optimal_harvest_fraction(&grid, |_| None),
            Err(Error::AllUndefined)
        ));
    }

    #[test]
    fn undefined_points_are_skipped() {
        let grid = linspace(0.05, 0.95, 19);
        let opt = optimal_harvest_fraction(&grid, |t| (t > 0.5).then(|| -t)).unwrap();
        // refinement walks toward the edge of the defined region
        assert!(opt.harvest_fraction > 0.5 && opt.harvest_fraction <= 0.55);
    }

    #[test]
    fn argmax_matches_exhaustive_scan() {
        let grid = linspace(0.01, 0.95, 95);
        let f = |t: f64| (7.0 * t).sin() * (1.0 - t);
        let values: Vec<Option<f64>> = grid.iter().map(|&t| Some(f(t))).collect();
        let i = grid_argmax(&values).unwrap();
        let brute = (0..grid.len())
            .max_by(|&a, &b| f(grid[a]).total_cmp(&f(grid[b])).then(b.cmp(&a)))
            .unwrap();
        assert_eq!(i, brute);
        let opt = optimal_harvest_fraction(&grid, |t| Some(f(t))).unwrap();
        assert!(opt.value >= f(grid[brute]));
    }

    #[test]
    fn parabola_vertex() {
        let grid = linspace(0.0, 1.0, 11);
        let values: Vec<Option<f64>> = grid.iter().map(|&t| Some(-(t - 0.33).powi(2))).collect();
        let opt = parabolic_peak(&grid, &values).unwrap();
        assert!((opt.harvest_fraction - 0.33).abs() < 1e-12);
        let edge: Vec<Option<f64>> = grid.iter().map(|&t| Some(-t)).collect();
        assert_eq!(parabolic_peak(&grid, &edge).unwrap().harvest_fraction, 0.0);
    }
}
