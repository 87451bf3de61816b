//! The biased product measure `P_p` on `{0,1}^n`, the characters `X_i`,
//! their sum `S_n`, and the weight polynomial `E_p(f)`.

use crate::check::CheckResult;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::function::{check_exact_arity, BooleanFunction};

/// A coin parameter `p` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bias(f64);

impl Bias {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Bias(p))
        } else {
            Err(Error::Domain { p, range: "[0, 1]" })
        }
    }

    /// A bias strictly inside `(0, 1)`, as required wherever `X_i` appears.
    pub fn interior(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Bias(p))
        } else {
            Err(Error::Domain { p, range: "(0, 1)" })
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }

    pub fn q(self) -> f64 {
        1.0 - self.0
    }

    /// `p (1 - p)`.
    pub fn variance(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

/// Per-layer probabilities `p^k (1-p)^(n-k)`, so that `P(omega)` is a lookup
/// on the Hamming weight.
#[derive(Debug, Clone)]
pub struct LayerWeights {
    n: usize,
    layer: Vec<f64>,
}

impl LayerWeights {
    pub fn new(n: usize, bias: Bias) -> Self {
        let (p, q) = (bias.p(), bias.q());
        let layer = (0..=n)
            .map(|k| p.powi(k as i32) * q.powi((n - k) as i32))
            .collect();
        LayerWeights { n, layer }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at_weight(&self, k: usize) -> f64 {
        self.layer[k]
    }

    #[inline]
    pub fn at_index(&self, index: u64) -> f64 {
        self.layer[index.count_ones() as usize]
    }
}

/// `P(omega) = p^K (1-p)^(n-K)` with `K = |omega|`. Endpoints allowed.
pub fn prob(omega: &Configuration, p: f64) -> Result<f64> {
    let bias = Bias::new(p)?;
    let k = omega.weight();
    let n = omega.arity();
    Ok(bias.p().powi(k as i32) * bias.q().powi((n - k) as i32))
}

/// `X_i(omega) = omega(i)/p - (1 - omega(i))/(1 - p)`.
pub fn x_value(omega: &Configuration, i: usize, p: f64) -> Result<f64> {
    let bias = Bias::interior(p)?;
    Ok(if omega.get(i)? {
        1.0 / bias.p()
    } else {
        -1.0 / bias.q()
    })
}

/// `S_n(omega) = sum_i X_i(omega) = (K - n p) / (p (1 - p))`.
pub fn s_n(omega: &Configuration, p: f64) -> Result<f64> {
    let bias = Bias::interior(p)?;
    Ok(s_n_from_weight(omega.arity(), omega.weight(), bias))
}

#[inline]
pub(crate) fn s_n_from_weight(n: usize, k: usize, bias: Bias) -> f64 {
    k as f64 / bias.p() - (n - k) as f64 / bias.q()
}

/// `sum_omega g(index) P(index)` over the whole cube.
pub(crate) fn sum_weighted(n: usize, bias: Bias, mut g: impl FnMut(u64) -> f64) -> f64 {
    let weights = LayerWeights::new(n, bias);
    (0..1u64 << n)
        .map(|idx| {
            let v = g(idx);
            if v == 0.0 {
                0.0
            } else {
                v * weights.at_index(idx)
            }
        })
        .sum()
}

/// A real-valued function on the cube, materialized as a value per index.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunctionOnCube {
    n: usize,
    values: Vec<f64>,
}

impl RealFunctionOnCube {
    pub fn from_fn(n: usize, g: impl FnMut(u64) -> f64) -> Result<Self> {
        check_exact_arity(n)?;
        Ok(RealFunctionOnCube {
            n,
            values: (0..1u64 << n).map(g).collect(),
        })
    }

    pub fn from_boolean(f: &BooleanFunction) -> Self {
        RealFunctionOnCube {
            n: f.arity(),
            values: (0..f.len())
                .map(|idx| f64::from(u8::from(f.value(idx))))
                .collect(),
        }
    }

    /// The character `X_i` at bias `p`.
    pub fn character(n: usize, i: usize, p: f64) -> Result<Self> {
        let bias = Bias::interior(p)?;
        if i == 0 || i > n {
            return Err(Error::CoordinateOutOfRange { i, n });
        }
        let bit = 1u64 << (i - 1);
        Self::from_fn(n, |idx| {
            if idx & bit != 0 {
                1.0 / bias.p()
            } else {
                -1.0 / bias.q()
            }
        })
    }

    /// `S_n` at bias `p`.
    pub fn sum_of_characters(n: usize, p: f64) -> Result<Self> {
        let bias = Bias::interior(p)?;
        Self::from_fn(n, |idx| s_n_from_weight(n, idx.count_ones() as usize, bias))
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn value(&self, index: u64) -> f64 {
        self.values[index as usize]
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        same_arity(self, other)?;
        Ok(RealFunctionOnCube {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

fn same_arity(g: &RealFunctionOnCube, h: &RealFunctionOnCube) -> Result<()> {
    if g.n != h.n {
        Err(Error::ArityMismatch {
            expected: g.n,
            found: h.n,
        })
    } else {
        Ok(())
    }
}

/// `E_p(g) = sum_omega g(omega) P(omega)`, for `p` in `[0, 1]`.
pub fn expectation(g: &RealFunctionOnCube, p: f64) -> Result<f64> {
    let bias = Bias::new(p)?;
    Ok(sum_weighted(g.n, bias, |idx| g.value(idx)))
}

/// `<g, h> = sum_omega g(omega) h(omega) P(omega)`.
pub fn inner_product(g: &RealFunctionOnCube, h: &RealFunctionOnCube, p: f64) -> Result<f64> {
    same_arity(g, h)?;
    let bias = Bias::new(p)?;
    Ok(sum_weighted(g.n, bias, |idx| g.value(idx) * h.value(idx)))
}

/// `E_p(f)` for a Boolean function, by direct enumeration.
pub fn mean(f: &BooleanFunction, p: f64) -> Result<f64> {
    let bias = Bias::new(p)?;
    Ok(sum_weighted(f.arity(), bias, |idx| indicator(f.value(idx))))
}

#[inline]
pub(crate) fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `E_p(f) = sum_k a_k p^k (1-p)^(n-k)` as a polynomial in `p`, carried by
/// the weight enumerator `a_0..a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanPolynomial {
    coefficients: Vec<u64>,
}

impl MeanPolynomial {
    pub fn new(coefficients: Vec<u64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("empty weight enumerator".into()));
        }
        Ok(MeanPolynomial { coefficients })
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn eval(&self, p: f64) -> f64 {
        let n = self.arity();
        let q = 1.0 - p;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| a as f64 * p.powi(k as i32) * q.powi((n - k) as i32))
            .sum()
    }

    /// `d/dp` of [`MeanPolynomial::eval`], term by term:
    /// `a_k (k p^(k-1) q^(n-k) - (n-k) p^k q^(n-k-1))`.
    pub fn derivative(&self, p: f64) -> f64 {
        let n = self.arity();
        let q = 1.0 - p;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| {
                let rise = if k > 0 {
                    k as f64 * p.powi(k as i32 - 1) * q.powi((n - k) as i32)
                } else {
                    0.0
                };
                let fall = if k < n {
                    (n - k) as f64 * p.powi(k as i32) * q.powi((n - k - 1) as i32)
                } else {
                    0.0
                };
                a as f64 * (rise - fall)
            })
            .sum()
    }
}

pub fn mean_poly(f: &BooleanFunction) -> MeanPolynomial {
    MeanPolynomial {
        coefficients: f.weight_enumerator().to_vec(),
    }
}

/// `d/dp E_p(f)` from the weight polynomial; `p` must be interior.
pub fn mean_derivative(f: &BooleanFunction, p: f64) -> Result<f64> {
    let bias = Bias::interior(p)?;
    Ok(mean_poly(f).derivative(bias.p()))
}

/// Checks, for coordinate `i`,
///
/// * `sum f(omega) omega(i) P(omega) = p sum f(omega^i) P(omega)`,
/// * `sum f(omega) (1 - omega(i)) P(omega) = (1-p) sum f(omega_i) P(omega)`,
/// * and for `n = 1`, `f(1) - f(0) = E(f X_1)`.
pub fn verify_trick_identity(f: &RealFunctionOnCube, i: usize, p: f64) -> Result<Vec<CheckResult>> {
    let bias = Bias::new(p)?;
    let n = f.arity();
    if i == 0 || i > n {
        return Err(Error::CoordinateOutOfRange { i, n });
    }
    let bit = 1u64 << (i - 1);
    let up_lhs = sum_weighted(
        n,
        bias,
        |idx| if idx & bit != 0 { f.value(idx) } else { 0.0 },
    );
    let up_rhs = bias.p() * sum_weighted(n, bias, |idx| f.value(idx | bit));
    let down_lhs = sum_weighted(
        n,
        bias,
        |idx| if idx & bit == 0 { f.value(idx) } else { 0.0 },
    );
    let down_rhs = bias.q() * sum_weighted(n, bias, |idx| f.value(idx & !bit));
    let mut out = vec![
        CheckResult::equal("trick.upper", p, up_lhs, up_rhs, crate::check::IDENTITY_TOL),
        CheckResult::equal(
            "trick.lower",
            p,
            down_lhs,
            down_rhs,
            crate::check::IDENTITY_TOL,
        ),
    ];
    if n == 1 && p > 0.0 && p < 1.0 {
        let lhs = f.value(1) - f.value(0);
        let rhs = sum_weighted(1, bias, |idx| {
            let x = if idx == 1 {
                1.0 / bias.p()
            } else {
                -1.0 / bias.q()
            };
            f.value(idx) * x
        });
        out.push(CheckResult::equal(
            "elementary",
            p,
            lhs,
            rhs,
            crate::check::IDENTITY_TOL,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
    }

    #[test]
    fn prob_examples() {
        let c = |w: &str| Configuration::from_word(w).unwrap();
        assert_eq!(prob(&c("11"), 0.5).unwrap(), 0.25);
        assert!(close(prob(&c("10"), 0.3).unwrap(), 0.21, 1e-15));
        assert_eq!(prob(&c("000"), 0.0).unwrap(), 1.0);
        assert!(prob(&c("0"), 1.5).is_err());
    }

    #[test]
    fn character_examples() {
        let one = Configuration::from_word("1").unwrap();
        let zero = Configuration::from_word("0").unwrap();
        assert_eq!(x_value(&one, 1, 0.5).unwrap(), 2.0);
        assert_eq!(x_value(&zero, 1, 0.5).unwrap(), -2.0);
        assert_eq!(x_value(&one, 1, 0.25).unwrap(), 4.0);
        assert!(x_value(&one, 1, 0.0).is_err());
        assert!(x_value(&one, 1, 1.0).is_err());
    }

    #[test]
    fn s_n_examples() {
        let c = |w: &str| Configuration::from_word(w).unwrap();
        assert_eq!(s_n(&c("111"), 0.5).unwrap(), 6.0);
        assert_eq!(s_n(&c("110"), 0.5).unwrap(), 2.0);
        assert_eq!(s_n(&c("1100"), 0.5).unwrap(), 0.0);
        assert!(s_n(&c("1"), 1.0).is_err());
    }

    #[test]
    fn expectation_examples() {
        let maj = Family::majority(3).unwrap().to_function().unwrap();
        assert!(close(mean(&maj, 0.5).unwrap(), 0.5, 1e-15));
        let dict = Family::dictator(4, 1).unwrap().to_function().unwrap();
        for p in [0.0, 0.2, 0.7, 1.0] {
            assert!(close(mean(&dict, p).unwrap(), p, 1e-14));
        }
        let x1 = RealFunctionOnCube::character(3, 1, 0.3).unwrap();
        assert!(expectation(&x1, 0.3).unwrap().abs() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let x1 = RealFunctionOnCube::character(3, 1, 0.3).unwrap();
        let x2 = RealFunctionOnCube::character(3, 2, 0.3).unwrap();
        assert!(inner_product(&x1, &x2, 0.3).unwrap().abs() < 1e-14);
        let x1h = RealFunctionOnCube::character(3, 1, 0.5).unwrap();
        assert!(close(inner_product(&x1h, &x1h, 0.5).unwrap(), 4.0, 1e-15));
        let maj =
            RealFunctionOnCube::from_boolean(&Family::majority(3).unwrap().to_function().unwrap());
        assert!(close(inner_product(&maj, &maj, 0.3).unwrap(), 0.216, 1e-14));
        let short = RealFunctionOnCube::character(2, 1, 0.3).unwrap();
        assert!(inner_product(&x1, &short, 0.3).is_err());
    }

    #[test]
    fn mean_poly_examples() {
        let maj = Family::majority(3).unwrap().to_function().unwrap();
        assert!(close(mean_poly(&maj).eval(0.3), 0.216, 1e-14));
        let dict = Family::dictator(3, 2).unwrap().to_function().unwrap();
        let one = BooleanFunction::constant(3, true).unwrap();
        for p in [0.0, 0.25, 0.6, 1.0] {
            assert!(close(mean_poly(&dict).eval(p), p, 1e-14));
            assert!(close(mean_poly(&one).eval(p), 1.0, 1e-14));
        }
    }

    #[test]
    fn mean_derivative_examples() {
        let maj = Family::majority(3).unwrap().to_function().unwrap();
        assert!(close(mean_derivative(&maj, 0.3).unwrap(), 1.26, 1e-14));
        let dict = Family::dictator(3, 2).unwrap().to_function().unwrap();
        let zero = BooleanFunction::constant(3, false).unwrap();
        let one = BooleanFunction::constant(3, true).unwrap();
        for p in [0.1, 0.5, 0.9] {
            assert!(close(mean_derivative(&dict, p).unwrap(), 1.0, 1e-14));
            assert_eq!(mean_derivative(&zero, p).unwrap(), 0.0);
            assert!(mean_derivative(&one, p).unwrap().abs() < 1e-14);
        }
        assert!(mean_derivative(&maj, 0.0).is_err());
    }

    #[test]
    fn trick_identity_examples() {
        let one = RealFunctionOnCube::from_fn(3, |_| 1.0).unwrap();
        let checks = verify_trick_identity(&one, 2, 0.7).unwrap();
        assert!(checks.iter().all(|c| c.holds));
        assert!(close(checks[0].lhs, 0.7, 1e-14));
        assert!(close(checks[1].lhs, 0.3, 1e-14));

        let identity = RealFunctionOnCube::from_fn(1, |idx| idx as f64).unwrap();
        let checks = verify_trick_identity(&identity, 1, 0.4).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.holds));
        assert_eq!(checks[2].lhs, 1.0);
        assert!(verify_trick_identity(&identity, 2, 0.4).is_err());
    }
}
