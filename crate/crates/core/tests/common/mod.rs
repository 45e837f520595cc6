//! Independent oracles for the integration tests: central finite
//! differences and brute-force sampling. None of them use the analytic
//! derivative code under test.
#![allow(dead_code)]

use mobinv_core::xform::{Matrix, Vector};

/// Jacobian of `f` at `x` by central differences with step `h`.
pub fn fd_jacobian<const D: usize>(f: impl Fn(&Vector<D>) -> Vector<D>, x: &Vector<D>, h: f64) -> Matrix<D> {
    let mut jac = Matrix::<D>::zeros();
    for j in 0..D {
        let mut e = Vector::<D>::zeros();
        e[j] = h;
        let col = (f(&(x + e)) - f(&(x - e))) / (2.0 * h);
        jac.set_column(j, &col);
    }
    jac
}

/// Gradient of a scalar function by central differences.
pub fn fd_gradient<const D: usize>(f: impl Fn(&Vector<D>) -> f64, x: &Vector<D>, h: f64) -> Vector<D> {
    Vector::<D>::from_fn(|i, _| {
        let mut e = Vector::<D>::zeros();
        e[i] = h;
        (f(&(x + e)) - f(&(x - e))) / (2.0 * h)
    })
}

/// Hessian of a scalar function from the standard second-difference
/// stencils.
pub fn fd_hessian<const D: usize>(f: impl Fn(&Vector<D>) -> f64, x: &Vector<D>, h: f64) -> Matrix<D> {
    let unit = |i: usize| {
        let mut e = Vector::<D>::zeros();
        e[i] = h;
        e
    };
    let f0 = f(x);
    Matrix::<D>::from_fn(|i, j| {
        if i == j {
            let e = unit(i);
            (f(&(x + e)) - 2.0 * f0 + f(&(x - e))) / (h * h)
        } else {
            let (a, b) = (unit(i), unit(j));
            (f(&(x + a + b)) - f(&(x + a - b)) - f(&(x - a + b)) + f(&(x - a - b))) / (4.0 * h * h)
        }
    })
}

/// Richardson-extrapolated central-difference gradient, `O(h⁴)` accurate.
pub fn fd_gradient_extrapolated<const D: usize>(f: impl Fn(&Vector<D>) -> f64, x: &Vector<D>, h: f64) -> Vector<D> {
    (fd_gradient(&f, x, h / 2.0) * 4.0 - fd_gradient(&f, x, h)) / 3.0
}

/// Richardson-extrapolated Hessian, `O(h⁴)` accurate.
pub fn fd_hessian_extrapolated<const D: usize>(f: impl Fn(&Vector<D>) -> f64, x: &Vector<D>, h: f64) -> Matrix<D> {
    (fd_hessian(&f, x, h / 2.0) * 4.0 - fd_hessian(&f, x, h)) / 3.0
}

/// `|a - b| / max(1, |b|)` entrywise maximum, for comparing against a
/// finite-difference reference `b`.
pub fn mixed_error<const D: usize>(a: &Matrix<D>, b: &Matrix<D>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Area of the part of triangle `(p, q, r)` closer to `p` than to `q` and
/// `r`, estimated on a barycentric lattice with `n` subdivisions per side.
pub fn nearest_corner_area(p: [f64; 2], q: [f64; 2], r: [f64; 2], n: usize) -> f64 {
    let d2 = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
    let area = 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])).abs();
    let mut hits = 0usize;
    let mut total = 0usize;
    // centroids of the n² congruent sub-triangles
    for i in 0..n {
        for j in 0..n - i {
            let mut pts = vec![((i as f64 + 1.0 / 3.0), (j as f64 + 1.0 / 3.0))];
            if i + j + 1 < n {
                pts.push((i as f64 + 2.0 / 3.0, j as f64 + 2.0 / 3.0));
            }
            for (a, b) in pts {
                let (s, t) = (a / n as f64, b / n as f64);
                let x = [
                    p[0] + s * (q[0] - p[0]) + t * (r[0] - p[0]),
                    p[1] + s * (q[1] - p[1]) + t * (r[1] - p[1]),
                ];
                total += 1;
                if d2(x, p) <= d2(x, q) && d2(x, p) <= d2(x, r) {
                    hits += 1;
                }
            }
        }
    }
    area * hits as f64 / total as f64
}

