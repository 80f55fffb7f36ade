use crate::{Error, Result};

/// Symmetric rule on the reference triangle. Weights sum to one, so an
/// integral over a triangle is `area · Σ wᵢ f(pᵢ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    /// Barycentric coordinates of the nodes.
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    /// Degree of polynomials integrated exactly.
    pub order: usize,
}

impl QuadratureRule {
    pub fn iter(&self) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Positive-weight triangle rules of degree 1 through 4.
pub fn quadrature(order: usize) -> Result<QuadratureRule> {
    let (points, weights) = match order {
        1 => (vec![[1.0 / 3.0; 3]], vec![1.0]),
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            (vec![[a, b, b], [b, a, b], [b, b, a]], vec![1.0 / 3.0; 3])
        }
        3 => {
            // Strang–Fix six-point rule.
            let (a, b, c) = (0.659_027_622_374_092, 0.231_933_368_553_031, 0.109_039_009_072_877);
            (
                vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]],
                vec![1.0 / 6.0; 6],
            )
        }
        4 => {
            // Dunavant degree-4 rule.
            let (a1, w1) = (0.445_948_490_915_965, 0.223_381_589_678_011);
            let (a2, w2) = (0.091_576_213_509_771, 0.109_951_743_655_322);
            let (b1, b2) = (1.0 - 2.0 * a1, 1.0 - 2.0 * a2);
            (
                vec![
                    [b1, a1, a1],
                    [a1, b1, a1],
                    [a1, a1, b1],
                    [b2, a2, a2],
                    [a2, b2, a2],
                    [a2, a2, b2],
                ],
                vec![w1, w1, w1, w2, w2, w2],
            )
        }
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    Ok(QuadratureRule {
        points,
        weights,
        order,
    })
}

/// Gauss–Legendre rule on `[0, 1]`; weights sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EdgeRule {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss–Legendre rule on `[0, 1]` exact for degree `order` (at least 3).
pub fn edge_quadrature(order: usize) -> EdgeRule {
    let (nodes, weights): (Vec<f64>, Vec<f64>) = if order <= 3 {
        let s = 1.0 / 3.0_f64.sqrt();
        (vec![-s, s], vec![1.0, 1.0])
    } else if order <= 5 {
        let s = (0.6_f64).sqrt();
        (vec![-s, 0.0, s], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
    } else {
        let r = (6.0_f64 / 5.0).sqrt() * 2.0 / 7.0;
        let x1 = (3.0 / 7.0 - r).sqrt();
        let x2 = (3.0 / 7.0 + r).sqrt();
        let w1 = (18.0 + 30.0_f64.sqrt()) / 36.0;
        let w2 = (18.0 - 30.0_f64.sqrt()) / 36.0;
        (vec![-x2, -x1, x1, x2], vec![w2, w1, w1, w2])
    };
    EdgeRule {
        points: nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|w| 0.5 * w).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Exact `∫ x^i y^j` over the reference triangle (0,0),(1,0),(0,1).
    fn monomial_integral(i: u32, j: u32) -> f64 {
        factorial(i) * factorial(j) / factorial(i + j + 2)
    }

    fn apply(rule: &QuadratureRule, i: u32, j: u32) -> f64 {
        // Reference area 1/2; vertices (0,0),(1,0),(0,1) so x = λ₁, y = λ₂.
        0.5 * rule
            .iter()
            .map(|(p, w)| w * p[1].powi(i as i32) * p[2].powi(j as i32))
            .sum::<f64>()
    }

    #[test]
    fn rules_are_exact_to_their_order() {
        for order in 1..=4 {
            let rule = quadrature(order).unwrap();
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for deg in 0..=order as u32 {
                for i in 0..=deg {
                    let j = deg - i;
                    let err = (apply(&rule, i, j) - monomial_integral(i, j)).abs();
                    assert!(err < 1e-14, "order {order}, x^{i} y^{j}: {err}");
                }
            }
        }
    }

    #[test]
    fn named_examples() {
        let r1 = quadrature(1).unwrap();
        assert_eq!(r1.points, vec![[1.0 / 3.0; 3]]);
        assert_eq!(r1.weights, vec![1.0]);
        assert!((apply(&quadrature(2).unwrap(), 1, 1) - 1.0 / 24.0).abs() < 1e-15);
        let r4 = quadrature(4).unwrap();
        assert_eq!(r4.points.len(), 6);
        assert!((apply(&r4, 4, 0) - 1.0 / 30.0).abs() < 1e-14);
    }

    #[test]
    fn unsupported_order() {
        assert!(matches!(quadrature(0), Err(Error::UnsupportedOrder(0))));
        assert!(matches!(quadrature(5), Err(Error::UnsupportedOrder(5))));
    }

    #[test]
    fn edge_rules_exact() {
        for order in [3, 5, 7] {
            let rule = edge_quadrature(order);
            for deg in 0..=order as i32 {
                let v: f64 = rule.iter().map(|(x, w)| w * x.powi(deg)).sum();
                assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14);
            }
        }
    }
}
