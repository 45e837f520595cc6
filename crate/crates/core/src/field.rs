//! Closed-form scalar fields with exact gradients and Hessians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::xform::{check_dim, Matrix, Vector};

/// Highest total degree accepted for [`AnalyticField::Polynomial`].
pub const MAX_POLY_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<const D: usize> {
    pub powers: [u32; D],
    pub coeff: f64,
}

/// Catalog of closed-form fields.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticField<const D: usize> {
    /// `g·x + c`
    Affine { gradient: Vector<D>, constant: f64 },
    /// `xᵀ Q x + b·x + c` with symmetric `Q`
    Quadratic {
        matrix: Matrix<D>,
        linear: Vector<D>,
        constant: f64,
    },
    /// `A exp(-Σ (x_i - c_i)² / (2 σ_i²))`
    Gaussian {
        center: Vector<D>,
        widths: Vector<D>,
        amplitude: f64,
    },
    /// `A Π sin(ω_i x_i + φ_i)`
    SineProduct {
        frequencies: Vector<D>,
        phases: Vector<D>,
        amplitude: f64,
    },
    Polynomial(Vec<Monomial<D>>),
}

fn powi(x: f64, p: u32) -> f64 {
    x.powi(p as i32)
}

impl<const D: usize> AnalyticField<D> {
    /// Value, gradient and Hessian at `x` from the closed forms.
    pub fn jet(&self, x: &Vector<D>) -> Jet<D> {
        match self {
            AnalyticField::Affine { gradient, constant } => Jet {
                value: gradient.dot(x) + constant,
                grad: *gradient,
                hess: Matrix::<D>::zeros(),
            },
            AnalyticField::Quadratic {
                matrix,
                linear,
                constant,
            } => Jet {
                value: x.dot(&(matrix * x)) + linear.dot(x) + constant,
                grad: matrix * x * 2.0 + linear,
                hess: matrix * 2.0,
            },
            AnalyticField::Gaussian {
                center,
                widths,
                amplitude,
            } => {
                let d = x - center;
                let s2 = widths.map(|w| w * w);
                let q: Vector<D> = d.component_div(&s2);
                let value = amplitude * (-0.5 * d.dot(&q)).exp();
                let grad = -q * value;
                let hess = Matrix::<D>::from_fn(|i, j| {
                    let diag = if i == j { value / s2[i] } else { 0.0 };
                    value * q[i] * q[j] - diag
                });
                Jet { value, grad, hess }
            }
            AnalyticField::SineProduct {
                frequencies,
                phases,
                amplitude,
            } => {
                let theta = x.component_mul(frequencies) + phases;
                let s = theta.map(f64::sin);
                let c = theta.map(f64::cos);
                // product of sines with the listed axes replaced by cosines
                let prod = |swap: &[usize]| -> f64 {
                    (0..D)
                        .map(|k| if swap.contains(&k) { c[k] } else { s[k] })
                        .product::<f64>()
                        * amplitude
                };
                let value = prod(&[]);
                let grad = Vector::<D>::from_fn(|i, _| frequencies[i] * prod(&[i]));
                let hess = Matrix::<D>::from_fn(|i, j| {
                    if i == j {
                        -frequencies[i] * frequencies[i] * value
                    } else {
                        frequencies[i] * frequencies[j] * prod(&[i, j])
                    }
                });
                Jet { value, grad, hess }
            }
            AnalyticField::Polynomial(terms) => {
                let mut value = 0.0;
                let mut grad = Vector::<D>::zeros();
                let mut hess = Matrix::<D>::zeros();
                for t in terms {
                    let eval = |p: &[u32; D]| (0..D).map(|k| powi(x[k], p[k])).product::<f64>();
                    value += t.coeff * eval(&t.powers);
                    for i in 0..D {
                        let pi = t.powers[i];
                        if pi == 0 {
                            continue;
                        }
                        let mut p = t.powers;
                        p[i] -= 1;
                        grad[i] += t.coeff * pi as f64 * eval(&p);
                        for j in 0..D {
                            let pj = p[j];
                            if pj == 0 {
                                continue;
                            }
                            let mut q = p;
                            q[j] -= 1;
                            hess[(i, j)] += t.coeff * pi as f64 * pj as f64 * eval(&q);
                        }
                    }
                }
                Jet { value, grad, hess }
            }
        }
    }

    pub fn value(&self, x: &Vector<D>) -> f64 {
        self.jet(x).value
    }
}

/// Gaussian width: one value for every axis, or one per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Widths {
    Isotropic(f64),
    PerAxis(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub powers: Vec<u32>,
    pub coeff: f64,
}

/// Serialized field description, selected by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Affine {
        gradient: Vec<f64>,
        #[serde(default)]
        constant: f64,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        linear: Option<Vec<f64>>,
        #[serde(default)]
        constant: f64,
    },
    Gaussian {
        center: Vec<f64>,
        width: Widths,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Sines {
        frequencies: Vec<f64>,
        #[serde(default)]
        phases: Option<Vec<f64>>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Poly {
        terms: Vec<TermSpec>,
    },
}

fn one() -> f64 {
    1.0
}

fn vec_of<const D: usize>(v: &[f64], what: &str) -> Result<Vector<D>> {
    if v.len() != D {
        return Err(Error::InvalidField(format!(
            "{what} has {} entries, expected {D}",
            v.len()
        )));
    }
    if !v.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidField(format!("{what} must be finite")));
    }
    Ok(Vector::<D>::from_column_slice(v))
}

impl FieldSpec {
    /// Named 2-D presets used by the command line.
    pub fn preset(name: &str) -> Option<FieldSpec> {
        let spec = match name {
            "plane" => FieldSpec::Affine {
                gradient: vec![3.0, 2.0],
                constant: 0.0,
            },
            "paraboloid" => FieldSpec::Quadratic {
                matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                linear: None,
                constant: 0.0,
            },
            "saddle" => FieldSpec::Quadratic {
                matrix: vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                linear: None,
                constant: 0.0,
            },
            // Off-center and anisotropic, so no two grid vertices share a
            // descriptor by symmetry.
            "gaussian" => FieldSpec::Gaussian {
                center: vec![7.3, -11.9],
                width: Widths::PerAxis(vec![30.0, 22.0]),
                amplitude: 40.0,
            },
            "ripple" => FieldSpec::Sines {
                frequencies: vec![0.05, 0.07],
                phases: Some(vec![0.4, 1.1]),
                amplitude: 10.0,
            },
            _ => return None,
        };
        Some(spec)
    }

    pub const PRESETS: &'static [&'static str] = &["plane", "paraboloid", "saddle", "gaussian", "ripple"];

    /// Builds the field, checking every vector against the dimension `D`.
    pub fn build<const D: usize>(&self) -> Result<AnalyticField<D>> {
        check_dim::<D>()?;
        Ok(match self {
            FieldSpec::Affine { gradient, constant } => AnalyticField::Affine {
                gradient: vec_of(gradient, "gradient")?,
                constant: *constant,
            },
            FieldSpec::Quadratic {
                matrix,
                linear,
                constant,
            } => {
                if matrix.len() != D || matrix.iter().any(|r| r.len() != D) {
                    return Err(Error::InvalidField(format!("quadratic matrix must be {D}x{D}")));
                }
                let m = Matrix::<D>::from_fn(|i, j| matrix[i][j]);
                if (m - m.transpose()).amax() > 0.0 {
                    return Err(Error::InvalidField("quadratic matrix must be symmetric".into()));
                }
                let linear = match linear {
                    Some(l) => vec_of(l, "linear term")?,
                    None => Vector::<D>::zeros(),
                };
                AnalyticField::Quadratic {
                    matrix: m,
                    linear,
                    constant: *constant,
                }
            }
            FieldSpec::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let widths = match width {
                    Widths::Isotropic(w) => Vector::<D>::repeat(*w),
                    Widths::PerAxis(w) => vec_of(w, "gaussian widths")?,
                };
                if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::InvalidField("gaussian widths must be positive".into()));
                }
                AnalyticField::Gaussian {
                    center: vec_of(center, "gaussian center")?,
                    widths,
                    amplitude: *amplitude,
                }
            }
            FieldSpec::Sines {
                frequencies,
                phases,
                amplitude,
            } => AnalyticField::SineProduct {
                frequencies: vec_of(frequencies, "frequencies")?,
                phases: match phases {
                    Some(p) => vec_of(p, "phases")?,
                    None => Vector::<D>::zeros(),
                },
                amplitude: *amplitude,
            },
            FieldSpec::Poly { terms } => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    if t.powers.len() != D {
                        return Err(Error::InvalidField(format!(
                            "monomial has {} powers, expected {D}",
                            t.powers.len()
                        )));
                    }
                    if t.powers.iter().sum::<u32>() > MAX_POLY_DEGREE {
                        return Err(Error::InvalidField(format!(
                            "monomial degree exceeds {MAX_POLY_DEGREE}"
                        )));
                    }
                    let mut powers = [0u32; D];
                    powers.copy_from_slice(&t.powers);
                    out.push(Monomial {
                        powers,
                        coeff: t.coeff,
                    });
                }
                AnalyticField::Polynomial(out)
            }
        })
    }
}

/// A fixed list of fields covering every catalog entry, used by the
/// verification suites. All are smooth on the whole space.
pub fn standard_catalog<const D: usize>() -> Vec<(String, AnalyticField<D>)> {
    let v = |f: &dyn Fn(usize) -> f64| Vector::<D>::from_fn(|i, _| f(i));
    let term = |powers: &[u32], coeff: f64| {
        let mut p = [0u32; D];
        p.copy_from_slice(&powers[..D]);
        Monomial { powers: p, coeff }
    };
    vec![
        (
            "affine".into(),
            AnalyticField::Affine {
                gradient: v(&|i| [0.7, -1.3, 0.4][i]),
                constant: 0.25,
            },
        ),
        (
            "paraboloid".into(),
            AnalyticField::Quadratic {
                matrix: Matrix::<D>::identity(),
                linear: Vector::<D>::zeros(),
                constant: 0.0,
            },
        ),
        (
            "quadratic".into(),
            AnalyticField::Quadratic {
                matrix: Matrix::<D>::from_fn(|i, j| {
                    if i == j {
                        [1.5, -0.8, 0.6][i]
                    } else {
                        0.3 / (1 + i + j) as f64
                    }
                }),
                linear: v(&|i| [0.2, 0.5, -0.9][i]),
                constant: -1.0,
            },
        ),
        (
            "gaussian".into(),
            AnalyticField::Gaussian {
                center: Vector::<D>::zeros(),
                widths: Vector::<D>::repeat(0.8),
                amplitude: 1.0,
            },
        ),
        (
            "gaussian-aniso".into(),
            AnalyticField::Gaussian {
                center: v(&|i| [0.3, -0.4, 0.2][i]),
                widths: v(&|i| [0.6, 1.1, 0.9][i]),
                amplitude: 2.5,
            },
        ),
        (
            "sines".into(),
            AnalyticField::SineProduct {
                frequencies: v(&|i| [1.0, 1.3, 0.7][i]),
                phases: v(&|i| [0.3, 0.9, 0.5][i]),
                amplitude: 1.0,
            },
        ),
        (
            "sines-fast".into(),
            AnalyticField::SineProduct {
                frequencies: v(&|i| [2.1, 1.7, 2.6][i]),
                phases: v(&|i| [1.2, 0.1, 0.8][i]),
                amplitude: 0.5,
            },
        ),
        (
            "cubic".into(),
            AnalyticField::Polynomial(vec![
                term(&[3, 0, 0], 1.0),
                term(&[1, 2, 0], -3.0),
                term(&[0, 1, 0], 0.5),
                term(&[0, 0, 2], 0.7),
            ]),
        ),
        (
            "quartic".into(),
            AnalyticField::Polynomial(vec![
                term(&[4, 0, 0], 0.5),
                term(&[2, 2, 0], -1.0),
                term(&[0, 1, 1], 2.0),
                term(&[1, 0, 0], 1.0),
                term(&[0, 0, 3], 0.3),
            ]),
        ),
        (
            "mixed-monomials".into(),
            AnalyticField::Polynomial(vec![
                term(&[1, 1, 1], 1.0),
                term(&[2, 1, 0], 0.4),
                term(&[0, 3, 1], -0.2),
                term(&[0, 0, 1], 1.5),
                term(&[1, 0, 0], -0.6),
            ]),
        ),
        (
            "poly-dense".into(),
            AnalyticField::Polynomial(vec![
                term(&[1, 0, 0], 0.9),
                term(&[0, 1, 0], -0.4),
                term(&[2, 0, 0], 0.3),
                term(&[1, 1, 0], 0.8),
                term(&[0, 2, 2], -0.25),
                term(&[1, 3, 0], 0.1),
            ]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::vector;

    #[test]
    fn affine_jet() {
        let f: AnalyticField<2> = FieldSpec::Affine {
            gradient: vec![1.0, 0.0],
            constant: 0.0,
        }
        .build()
        .unwrap();
        let j = f.jet(&vector![5.0, 7.0]);
        assert_eq!(j.value, 5.0);
        assert_eq!(j.grad, vector![1.0, 0.0]);
        assert_eq!(j.hess, Matrix::<2>::zeros());
    }

    #[test]
    fn paraboloid_jet() {
        let f = FieldSpec::preset("paraboloid").unwrap().build::<2>().unwrap();
        let j = f.jet(&vector![1.0, 0.0]);
        assert_eq!(j.value, 1.0);
        assert_eq!(j.grad, vector![2.0, 0.0]);
        assert_eq!(j.hess, Matrix::<2>::identity() * 2.0);
    }

    #[test]
    fn xyz_jet() {
        let f: AnalyticField<3> = serde_json::from_str::<FieldSpec>(
            r#"{"kind": "poly", "terms": [{"powers": [1, 1, 1], "coeff": 1}]}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        let j = f.jet(&vector![1.0, 2.0, 3.0]);
        assert_eq!(j.value, 6.0);
        assert_eq!(j.grad, vector![6.0, 3.0, 2.0]);
        assert_eq!((j.hess[(0, 1)], j.hess[(0, 2)], j.hess[(1, 2)]), (3.0, 2.0, 1.0));
        assert_eq!((j.hess[(0, 0)], j.hess[(1, 1)], j.hess[(2, 2)]), (0.0, 0.0, 0.0));
        assert_eq!(j.hess, j.hess.transpose());
    }

    #[test]
    fn spec_validation() {
        let bad_dim = FieldSpec::Affine {
            gradient: vec![1.0, 2.0, 3.0],
            constant: 0.0,
        };
        assert!(bad_dim.build::<2>().is_err());
        let bad_degree = FieldSpec::Poly {
            terms: vec![TermSpec {
                powers: vec![3, 2],
                coeff: 1.0,
            }],
        };
        assert!(bad_degree.build::<2>().is_err());
        let bad_width: FieldSpec =
            serde_json::from_str(r#"{"kind": "gaussian", "center": [0, 0], "width": -1}"#).unwrap();
        assert!(bad_width.build::<2>().is_err());
        let asym = FieldSpec::Quadratic {
            matrix: vec![vec![1.0, 2.0], vec![0.0, 1.0]],
            linear: None,
            constant: 0.0,
        };
        assert!(asym.build::<2>().is_err());
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind": "spline"}"#).is_err());
    }

    #[test]
    fn presets_build() {
        for name in FieldSpec::PRESETS {
            FieldSpec::preset(name).unwrap().build::<2>().unwrap();
        }
        assert!(FieldSpec::preset("nope").is_none());
    }

    #[test]
    fn catalog_has_at_least_ten_fields() {
        assert!(standard_catalog::<2>().len() >= 10);
        assert!(standard_catalog::<3>().len() >= 10);
    }
}
