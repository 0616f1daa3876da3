//! Norms whose unit ball is a centrally symmetric polytope, given by its
//! vertices, and their duals.
//!
//! With vertices `V`, the norm is the gauge `‖x‖ = min{Σλ_i : x = Σλ_i v_i, λ ≥ 0}`
//! and the dual norm is `x*(ψ) = max_v ⟨ψ, v⟩`. Gauges and duals of
//! intersections are linear programs.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const VERTEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeNorm {
    vertices: Vec<Vec<f64>>,
}

impl PolytopeNorm {
    /// Validates central symmetry, spanning, and that every listed vertex has
    /// norm 1 (no vertex lies inside the hull of the others).
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) if !v.is_empty() => v.len(),
            _ => return Err(domain("PolytopeNorm::new", "need at least one nonempty vertex")),
        };
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(domain("PolytopeNorm::new", "non-finite vertex coordinate"));
            }
        }
        for v in &vertices {
            let has_negative = vertices.iter().any(|w| {
                v.iter().zip(w).all(|(a, b)| (a + b).abs() <= SYMMETRY_TOL * (1.0 + a.abs()))
            });
            if !has_negative {
                return Err(domain("PolytopeNorm::new", format!("vertex {v:?} has no antipode")));
            }
        }
        if rank(&vertices) < dim {
            return Err(domain("PolytopeNorm::new", "vertices do not span"));
        }
        let p = Self { vertices };
        for v in &p.vertices {
            let n = p.norm(v)?;
            if n < 1.0 - VERTEX_TOL {
                return Err(domain(
                    "PolytopeNorm::new",
                    format!("{v:?} lies inside the unit ball (norm {n})"),
                ));
            }
        }
        Ok(p)
    }

    /// Symmetric closure of the given points: each point and its negative.
    pub fn from_half(points: &[Vec<f64>]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(2 * points.len());
        for p in points {
            vertices.push(p.clone());
            vertices.push(p.iter().map(|x| -x).collect());
        }
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// The same norm scaled by `t > 0`: `‖x‖_t = t‖x‖`, vertices divided by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain("PolytopeNorm::scaled", format!("scale must be positive, got {t}")));
        }
        Ok(Self {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x / t).collect())
                .collect(),
        })
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            })
        }
    }

    /// The gauge norm of `x`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let lambdas: Vec<_> = self
            .vertices
            .iter()
            .map(|_| lp.add_var(1.0, (0.0, f64::INFINITY)))
            .collect();
        for (k, &xk) in x.iter().enumerate() {
            let expr: Vec<_> = lambdas.iter().zip(&self.vertices).map(|(&l, v)| (l, v[k])).collect();
            lp.add_constraint(expr, ComparisonOp::Eq, xk);
        }
        Ok(lp.solve().map_err(lp_error)?.objective())
    }

    /// `x*(ψ) = max_v ⟨ψ, v⟩`.
    pub fn dual_norm(&self, psi: &[f64]) -> Result<f64> {
        self.check_dim(psi)?;
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(v, psi))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0))
    }

    /// The dual of the dual norm at `x`, `max{⟨x, ψ⟩ : x*(ψ) ≤ 1}`, which
    /// recovers [`PolytopeNorm::norm`].
    pub fn bidual_norm(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let psi: Vec<_> = x
            .iter()
            .map(|&xk| lp.add_var(xk, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        for v in &self.vertices {
            let expr: Vec<_> = psi.iter().zip(v).map(|(&p, &vk)| (p, vk)).collect();
            lp.add_constraint(expr, ComparisonOp::Le, 1.0);
        }
        Ok(lp.solve().map_err(lp_error)?.objective())
    }
}

fn lp_error(e: minilp::Error) -> Error {
    Error::LinearProgram(e.to_string())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = 1e-12 * scale.max(1.0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())) else {
            break;
        };
        if m[p][c].abs() <= tol {
            continue;
        }
        m.swap(rank, p);
        for i in (rank + 1)..m.len() {
            let f = m[i][c] / m[rank][c];
            for k in c..cols {
                m[i][k] -= f * m[rank][k];
            }
        }
        rank += 1;
    }
    rank
}

/// `(max_n x_n)*(ψ)`: the dual of the largest norm in the family, i.e. the
/// support function of the intersection of the unit balls.
pub fn dual_of_sup(norms: &[PolytopeNorm], psi: &[f64]) -> Result<f64> {
    let first = norms
        .first()
        .ok_or_else(|| domain("dual_of_sup", "empty family"))?;
    first.check_dim(psi)?;
    let dim = first.dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = psi
        .iter()
        .map(|&p| lp.add_var(p, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for n in norms {
        n.check_dim(psi)?;
        let lambdas: Vec<_> = n
            .vertices
            .iter()
            .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
            .collect();
        for k in 0..dim {
            let mut expr: Vec<_> = vec![(x[k], 1.0)];
            expr.extend(lambdas.iter().zip(&n.vertices).map(|(&l, v)| (l, -v[k])));
            lp.add_constraint(expr, ComparisonOp::Eq, 0.0);
        }
        let total: Vec<_> = lambdas.iter().map(|&l| (l, 1.0)).collect();
        lp.add_constraint(total, ComparisonOp::Le, 1.0);
    }
    Ok(lp.solve().map_err(lp_error)?.objective())
}

/// `inf_n x_n*(ψ)`.
pub fn inf_of_duals(norms: &[PolytopeNorm], psi: &[f64]) -> Result<f64> {
    if norms.is_empty() {
        return Err(domain("inf_of_duals", "empty family"));
    }
    norms
        .iter()
        .map(|n| n.dual_norm(psi))
        .try_fold(f64::INFINITY, |acc, v| Ok(acc.min(v?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualComparison {
    pub psi: Vec<f64>,
    pub dual_of_sup: f64,
    pub inf_of_duals: f64,
    pub agree: bool,
}

/// Compares `(sup_n x_n)*` with `inf_n x_n*` on each test vector, to relative
/// tolerance `rel_tol`. The two always satisfy `dual_of_sup ≤ inf_of_duals`;
/// equality holds when `inf_n x_n*` is itself convex (for instance for scaled
/// copies of one norm) and can fail otherwise.
pub fn compare_inf_of_duals(norms: &[PolytopeNorm], tests: &[Vec<f64>], rel_tol: f64) -> Result<Vec<DualComparison>> {
    tests
        .iter()
        .map(|psi| {
            let lhs = dual_of_sup(norms, psi)?;
            let rhs = inf_of_duals(norms, psi)?;
            Ok(DualComparison {
                psi: psi.clone(),
                dual_of_sup: lhs,
                inf_of_duals: rhs,
                agree: (lhs - rhs).abs() <= rel_tol * rhs.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}

/// True iff `(sup_n x_n)* = inf_n x_n*` on every test vector to relative 1e-9.
pub fn inf_of_duals_check(norms: &[PolytopeNorm], tests: &[Vec<f64>]) -> Result<bool> {
    Ok(compare_inf_of_duals(norms, tests, 1e-9)?.iter().all(|c| c.agree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PolytopeNorm {
        PolytopeNorm::from_half(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn square_dual_is_max_abs() {
        assert_eq!(square().dual_norm(&[3.0, 4.0]).unwrap(), 4.0);
        assert_eq!(square().dual_norm(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn square_gauge_is_l1() {
        let n = square().norm(&[3.0, -4.0]).unwrap();
        assert!((n - 7.0).abs() < 1e-9);
    }

    #[test]
    fn validation() {
        assert!(PolytopeNorm::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(PolytopeNorm::from_half(&[vec![1.0, 1.0], vec![2.0, 2.0]]).is_err());
        assert!(PolytopeNorm::from_half(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2]]).is_err());
        assert!(matches!(
            square().dual_norm(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_norm_family() {
        let tests = vec![vec![1.0, 2.0], vec![-0.3, 0.7]];
        assert!(inf_of_duals_check(&[square()], &tests).unwrap());
    }
}
