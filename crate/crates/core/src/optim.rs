//! Nelder-Mead simplex minimization.
//!
//! The objectives in this crate are smooth, low dimensional (4 or 8 real
//! parameters) and cheap to evaluate but lack analytic gradients, which is
//! the textbook use case for the simplex method. Standard coefficients:
//! reflection 1, expansion 2, contraction 1/2, shrink 1/2. The run stops when
//! every vertex sits within `tolerance` of the best one (infinity norm) or at
//! the iteration cap.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Simplex-size convergence threshold.
    pub tolerance: f64,
    /// Offset added to each coordinate of the start point to seed the
    /// initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            tolerance: 1e-10,
            initial_step: 0.2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn simplex_size(vertices: &[Vec<f64>]) -> f64 {
    let best = &vertices[0];
    vertices[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Minimizes `f` starting from `x0`.
pub fn minimize(
    f: &mut impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let n = x0.len();
    assert!(n > 0, "cannot optimize over zero parameters");

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| f(v)).collect();

    let sort_simplex = |vertices: &mut Vec<Vec<f64>>, values: &mut Vec<f64>| {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        *vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        *values = order.iter().map(|&i| values[i]).collect();
    };
    sort_simplex(&mut vertices, &mut values);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        if simplex_size(&vertices) < opts.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; n];
        for v in &vertices[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }
        let worst = vertices[n].clone();
        let f_best = values[0];
        let f_second_worst = values[n - 1];
        let f_worst = values[n];

        let blend = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = blend(1.0);
        let f_reflected = f(&reflected);

        if f_reflected < f_best {
            let expanded = blend(2.0);
            let f_expanded = f(&expanded);
            if f_expanded < f_reflected {
                vertices[n] = expanded;
                values[n] = f_expanded;
            } else {
                vertices[n] = reflected;
                values[n] = f_reflected;
            }
        } else if f_reflected < f_second_worst {
            vertices[n] = reflected;
            values[n] = f_reflected;
        } else {
            let contracted = if f_reflected < f_worst {
                blend(0.5) // outside contraction
            } else {
                blend(-0.5) // inside contraction
            };
            let f_contracted = f(&contracted);
            if f_contracted < f_worst.min(f_reflected) {
                vertices[n] = contracted;
                values[n] = f_contracted;
            } else {
                // Shrink toward the best vertex.
                let best = vertices[0].clone();
                for v in vertices[1..].iter_mut() {
                    for (x, b) in v.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                }
                for (v, val) in vertices[1..].iter_mut().zip(values[1..].iter_mut()) {
                    *val = f(v);
                }
            }
        }
        sort_simplex(&mut vertices, &mut values);
    }
    if !converged {
        converged = simplex_size(&vertices) < opts.tolerance;
    }

    NelderMeadResult {
        x: vertices[0].clone(),
        fx: values[0],
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let mut f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.5).powi(2);
        let r = minimize(&mut f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 3.0).abs() < 1e-6);
        assert!((r.x[1] + 1.5).abs() < 1e-6);
        assert!(r.fx < 1e-12);
    }

    #[test]
    fn minimizes_rosenbrock_in_two_dims() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 5000,
            ..Default::default()
        };
        let r = minimize(&mut f, &[-1.2, 1.0], &opts);
        assert!((r.x[0] - 1.0).abs() < 1e-4, "found {:?}", r.x);
        assert!((r.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn handles_flat_directions() {
        // Scale-invariant objective: only the direction of x matters.
        let mut f = |x: &[f64]| {
            let n = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if n < 1e-12 {
                return 1e9;
            }
            -(x[0] / n) // minimized when x points along +e0
        };
        let r = minimize(&mut f, &[0.3, 0.7], &NelderMeadOptions::default());
        assert!(r.fx < -1.0 + 1e-6);
    }

    #[test]
    fn respects_iteration_cap() {
        let mut f = |x: &[f64]| x[0].powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 3,
            tolerance: 1e-16,
            ..Default::default()
        };
        let r = minimize(&mut f, &[100.0], &opts);
        assert!(r.iterations <= 3);
    }
}
