use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{int, EigenSystem};
use crate::error::{Error, Result};

/// `C_{l,m}(t) = prod_{j=l}^{m} (t - lambda_j) = sum_k c_{l,m,k} t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPolynomial {
    pub l: usize,
    pub m: usize,
    /// `coeffs[k] = c_{l,m,k}` for `k` in `0..=m-l+1`.
    pub coeffs: Vec<BigRational>,
}

impl CoefficientPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("polynomial has at least one coefficient")
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        horner(&self.coeffs, t)
    }

    /// Coefficients as integers, when all of them are integral (always the case on spheres).
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

/// Polynomial in `B = -Delta - lambda_1`; `coeffs[k]` multiplies `B^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPolynomial {
    pub m: usize,
    pub coeffs: Vec<BigRational>,
}

impl BPolynomial {
    pub fn eval(&self, b: &BigRational) -> BigRational {
        horner(&self.coeffs, b)
    }

    /// Exact division by `B`; `None` when the constant term is nonzero.
    pub fn divide_by_b(&self) -> Option<Vec<BigRational>> {
        self.coeffs[0].is_zero().then(|| self.coeffs[1..].to_vec())
    }
}

fn horner(coeffs: &[BigRational], t: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

/// Monic polynomial with the given roots, lowest degree first.
fn monic_from_roots(roots: &[BigRational]) -> Vec<BigRational> {
    let mut coeffs = vec![BigRational::one()];
    for r in roots {
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

fn degree_range(l: i64, m: i64) -> Result<(usize, usize)> {
    if l < 1 || m < l {
        return Err(Error::InvalidRange { l, m });
    }
    Ok((l as usize, m as usize))
}

pub fn expand_c(l: i64, m: i64, eigs: &EigenSystem) -> Result<CoefficientPolynomial> {
    let (l, m) = degree_range(l, m)?;
    let roots = (l..=m).map(|j| eigs.lambda(j).cloned()).collect::<Result<Vec<_>>>()?;
    Ok(CoefficientPolynomial { l, m, coeffs: monic_from_roots(&roots) })
}

/// `sigma_j(values)`, the j-th elementary symmetric polynomial; `sigma_0 = 1`.
pub fn elementary_symmetric<T>(values: &[T], j: usize) -> Result<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    if j > values.len() {
        return Err(Error::IndexOutOfRange { index: j, len: values.len() });
    }
    let mut e = vec![T::zero(); j + 1];
    e[0] = T::one();
    for v in values {
        for k in (1..=j).rev() {
            e[k] = e[k].clone() + e[k - 1].clone() * v.clone();
        }
    }
    Ok(e.swap_remove(j))
}

/// `P = prod_{n=1}^{m} (B - gamma_n)` expanded by direct multiplication.
pub fn expand_p_general_m(m: i64, eigs: &EigenSystem) -> Result<BPolynomial> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    let m = m as usize;
    let gammas = (1..=m).map(|n| eigs.gamma(n)).collect::<Result<Vec<_>>>()?;
    Ok(BPolynomial { m, coeffs: monic_from_roots(&gammas) })
}

/// Coefficients of `<PF, F>` after substituting `BF = -lambda_1 (rho - mean h)`:
///
/// `<PF, F> = sum_{i=1}^{m-2} c_i <Delta^i rho, rho> + ros * [int rho^2 - mean^2 |S|] + minkowski * [lambda_1^{-1} <BF, F>]`
///
/// where on spheres the last bracket is `(int H_{d-2})^2 / |S^{d-1}| - int H_{d-3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMCoefficients {
    pub m: usize,
    /// `c[i - 1]` multiplies `<Delta^i rho, rho>`.
    pub c: Vec<BigRational>,
    pub ros: BigRational,
    pub minkowski: BigRational,
}

pub fn general_m_coefficients(m: i64, eigs: &EigenSystem) -> Result<GeneralMCoefficients> {
    let p = expand_p_general_m(m, eigs)?;
    let m = p.m;
    debug_assert!(p.coeffs[0].is_zero(), "gamma_1 = 0 is a root of P");
    let lambda1 = eigs.lambda(1)?.clone();
    let neg_lambda1 = -lambda1.clone();
    let l1_sq = &lambda1 * &lambda1;

    // <B^k F, F> = lambda_1^2 <B^{k-2} G, G> with G = rho - mean h, and
    // B^{k-2} = sum_i binom(k-2, i) (-Delta)^i (-lambda_1)^{k-2-i}
    let mut c = Vec::with_capacity(m.saturating_sub(2));
    for i in 1..=m.saturating_sub(2) {
        let mut acc = BigRational::zero();
        for k in (i + 2)..=m {
            acc += &p.coeffs[k]
                * int_big(binomial(k - 2, i))
                * pow(&neg_lambda1, k - 2 - i);
        }
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        c.push(acc * &l1_sq * sign);
    }
    let mut ros = BigRational::zero();
    for k in 2..=m {
        ros += &p.coeffs[k] * pow(&neg_lambda1, k - 2);
    }
    ros *= &l1_sq;
    let minkowski = &p.coeffs[1] * &lambda1;
    Ok(GeneralMCoefficients { m, c, ros, minkowski })
}

/// The closed-form `c_i` reading
/// `c_i = (-1)^m sum_{l=i}^{m-2} sigma_{m-2-l}(Gamma) binom(l, i) lambda_1^{l-i+2}`,
/// with `Gamma = (gamma_1, ..., gamma_m)`. Must agree with [`general_m_coefficients`].
pub fn general_m_c_closed_form(m: i64, eigs: &EigenSystem) -> Result<Vec<BigRational>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    let m = m as usize;
    let gammas = (1..=m).map(|n| eigs.gamma(n)).collect::<Result<Vec<_>>>()?;
    let lambda1 = eigs.lambda(1)?.clone();
    let sign = if m % 2 == 0 { int(1) } else { int(-1) };
    (1..=m.saturating_sub(2))
        .map(|i| {
            let mut acc = BigRational::zero();
            for l in i..=m - 2 {
                acc += elementary_symmetric(&gammas, m - 2 - l)?
                    * int_big(binomial(l, i))
                    * pow(&lambda1, l - i + 2);
            }
            Ok(acc * &sign)
        })
        .collect()
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

fn int_big(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_m_d(m: i64, d: i64) -> Result<(usize, usize)> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok((m as usize, d as usize))
}

fn sphere_lambda(n: usize, d: usize) -> BigInt {
    BigInt::from(n) * BigInt::from(n + d - 2)
}

fn sphere_gamma(n: usize, d: usize) -> BigInt {
    sphere_lambda(n, d) - sphere_lambda(1, d)
}

/// `prod_{j=1}^m lambda_j - lambda_1 prod_{j=2}^m gamma_j` on `S^{d-1}`.
pub fn coeff1_product(m: i64, d: i64) -> Result<BigInt> {
    let (m, d) = check_m_d(m, d)?;
    let lambdas: BigInt = (1..=m).map(|j| sphere_lambda(j, d)).product();
    let gammas: BigInt = (2..=m).map(|j| sphere_gamma(j, d)).product();
    Ok(lambdas - sphere_lambda(1, d) * gammas)
}

/// `(d-1)^2 (m-1) (m-1)! (m+d-2)! / d!`, exactly.
pub fn coeff1_factorial(m: i64, d: i64) -> Result<BigRational> {
    let (m, d) = check_m_d(m, d)?;
    let dm1 = BigInt::from(d - 1);
    let num = &dm1 * &dm1 * BigInt::from(m - 1) * factorial(m - 1) * factorial(m + d - 2);
    Ok(BigRational::new(num, factorial(d)))
}

/// `lambda_1 prod_{j=2}^m gamma_j` on `S^{d-1}`.
pub fn coeff2_product(m: i64, d: i64) -> Result<BigInt> {
    let (m, d) = check_m_d(m, d)?;
    let gammas: BigInt = (2..=m).map(|j| sphere_gamma(j, d)).product();
    Ok(sphere_lambda(1, d) * gammas)
}

/// `(d-1) (m-1)! (m+d-1)! / d!`, exactly.
pub fn coeff2_factorial(m: i64, d: i64) -> Result<BigRational> {
    let (m, d) = check_m_d(m, d)?;
    let num = BigInt::from(d - 1) * factorial(m - 1) * factorial(m + d - 1);
    Ok(BigRational::new(num, factorial(d)))
}

/// Product form of the `ros` coefficient magnitude, checked against its factorial closed form.
///
/// Panics if the two disagree: the identity is exact, so a mismatch is a defect here.
pub fn closed_form_coeff1(m: i64, d: i64) -> Result<BigInt> {
    let product = coeff1_product(m, d)?;
    let closed = coeff1_factorial(m, d)?;
    assert_eq!(int_big(product.clone()), closed, "coeff1 identity failed at m = {m}, d = {d}");
    Ok(product)
}

/// Product form of the Minkowski-deficit coefficient magnitude, checked against its closed form.
pub fn closed_form_coeff2(m: i64, d: i64) -> Result<BigInt> {
    let product = coeff2_product(m, d)?;
    let closed = coeff2_factorial(m, d)?;
    assert_eq!(int_big(product.clone()), closed, "coeff2 identity failed at m = {m}, d = {d}");
    Ok(product)
}
