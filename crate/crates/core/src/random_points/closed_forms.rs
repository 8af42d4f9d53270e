//! Exact values of the expectations and probabilities for uniform points.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::words::MIN_N;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// `E[H_2]`, expected number of type-2 regions.
    H2,
    /// `E[L_0]`.
    L0,
    /// `E[L_1]`.
    L1,
    /// `E[L_2]`.
    L2,
    /// `E[L_e]`, expected total length of empty regions.
    Le,
    /// `P(b_n)`.
    Pbn,
    /// `φ(1/3)`.
    Phi13,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 7] = [
        ClosedForm::H2,
        ClosedForm::L0,
        ClosedForm::L1,
        ClosedForm::L2,
        ClosedForm::Le,
        ClosedForm::Pbn,
        ClosedForm::Phi13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::H2 => "h2",
            ClosedForm::L0 => "l0",
            ClosedForm::L1 => "l1",
            ClosedForm::L2 => "l2",
            ClosedForm::Le => "le",
            ClosedForm::Pbn => "pbn",
            ClosedForm::Phi13 => "phi13",
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClosedForm::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow(base: i64, e: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(base), e))
}

fn rpow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_N {
        return Err(Error::OutOfRange {
            n,
            min: MIN_N,
            max: usize::MAX,
        });
    }
    Ok(())
}

pub fn closed_form(form: ClosedForm, n: usize) -> Result<BigRational> {
    check_n(n)?;
    let ni = n as i64;
    let three_n1 = pow(3, n - 1);
    Ok(match form {
        ClosedForm::H2 => int(ni) / int(2) * (int(1) + pow(3, n - 2).recip()),
        ClosedForm::L0 => (&three_n1 + int(2 * ni - 7)) / (int(8) * &three_n1),
        ClosedForm::L1 => (&three_n1 - int(ni + 1)) / (int(2) * &three_n1),
        ClosedForm::L2 => (pow(3, n) + int(2 * ni + 11)) / (int(8) * &three_n1),
        ClosedForm::Le => {
            // 3/8 - 1/(8·3^{n-3})
            BigRational::new(3.into(), 8.into()) - (int(8) * pow(3, n - 3)).recip()
        }
        ClosedForm::Pbn => int(ni) / (int(3) * pow(2, 2 * n - 6)),
        ClosedForm::Phi13 => {
            BigRational::new(1.into(), 4.into()) - pow(2, n - 1).recip() + (int(4) * pow(3, n - 2)).recip()
        }
    })
}

fn check_phi_args(x: &BigRational, n: usize) -> Result<()> {
    check_n(n)?;
    if !(x > &BigRational::zero() && x < &BigRational::new(1.into(), 2.into())) {
        return Err(Error::InvalidArgument(format!("phi needs 0 < x < 1/2, got {x}")));
    }
    Ok(())
}

/// `φ(x) = (x/2)(1 - x^{n-2})/(1 - x) - (x/2^{n-1})(1 - (2x)^{n-2})/(1 - 2x)`.
pub fn phi(x: &BigRational, n: usize) -> Result<BigRational> {
    check_phi_args(x, n)?;
    let one = BigRational::one();
    let two_x = x * BigInt::from(2);
    let first = x / BigInt::from(2) * (&one - rpow(x, n - 2)) / (&one - x);
    let second = x / pow(2, n - 1) * (&one - rpow(&two_x, n - 2)) / (&one - &two_x);
    Ok(first - second)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    BigInt::from(acc)
}

/// Visits every term `(weight, i + j)` of the quadruple sum defining `φ`,
/// with `weight = C(i+j, j)/2^{min(1+k+l, n-1)}`.
fn phi_terms(n: usize, mut visit: impl FnMut(BigRational, usize)) {
    for k in 1..n - 1 {
        for l in 1..n - k {
            let scale = pow(2, (1 + k + l).min(n - 1)).recip();
            for i in 0..k {
                for j in 0..l {
                    visit(&scale * BigRational::from_integer(binomial(i + j, j)), i + j);
                }
            }
        }
    }
}

/// `φ(x)` as the literal sum over `k, l >= 1`, `k + l <= n - 1`, `i < k`, `j < l`.
pub fn phi_sum_oracle(x: &BigRational, n: usize) -> Result<BigRational> {
    check_phi_args(x, n)?;
    let mut total = BigRational::zero();
    phi_terms(n, |w, u| total += w * rpow(x, u + 1));
    Ok(total)
}

/// `φ'(x)` by differentiating the literal sum term by term.
pub fn phi_derivative_sum_oracle(x: &BigRational, n: usize) -> Result<BigRational> {
    check_phi_args(x, n)?;
    let mut total = BigRational::zero();
    phi_terms(n, |w, u| total += w * BigInt::from(u + 1) * rpow(x, u));
    Ok(total)
}

/// `φ'(1/3) = 9/8 - 9/2^{n-1} + (2n+5)/(8·3^{n-3})`.
pub fn phi_derivative_13(n: usize) -> Result<BigRational> {
    check_n(n)?;
    Ok(BigRational::new(9.into(), 8.into()) - int(9) / pow(2, n - 1)
        + int(2 * n as i64 + 5) / (int(8) * pow(3, n - 3)))
}

/// `P(X < U, X < V)` for `X ~ Exp(1)`, `U ~ Erlang(k, 1)`, `V ~ Erlang(l, 1)`:
/// `Σ_{i<k} Σ_{j<l} C(i+j, j)/3^{i+j+1}`.
pub fn erlang_p_kl(k: usize, l: usize) -> Result<BigRational> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("erlang_p_kl needs k, l >= 1".into()));
    }
    let mut total = BigRational::zero();
    for i in 0..k {
        for j in 0..l {
            total += BigRational::from_integer(binomial(i + j, j)) / pow(3, i + j + 1);
        }
    }
    Ok(total)
}

/// `f_n = P(O_0 = B_R, O_1 = W_L) = 1/4 + 1/(4·3^{n-2})`.
pub fn f_n(n: usize) -> Result<BigRational> {
    check_n(n)?;
    Ok(BigRational::new(1.into(), 4.into()) + (int(4) * pow(3, n - 2)).recip())
}

/// `P(A_∅) = 2^{-(n-1)}`: no black dot among `X_1..X_{n-1}`.
pub fn p_no_black(n: usize) -> Result<BigRational> {
    check_n(n)?;
    Ok(pow(2, n - 1).recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn cf(form: ClosedForm, n: usize) -> BigRational {
        closed_form(form, n).unwrap()
    }

    #[test]
    fn values_at_small_n() {
        assert_eq!(cf(ClosedForm::H2, 3), q(2, 1));
        assert_eq!(cf(ClosedForm::H2, 4), q(20, 9));
        assert_eq!(cf(ClosedForm::L0, 3), q(1, 9));
        assert_eq!(cf(ClosedForm::L1, 3), q(5, 18));
        assert_eq!(cf(ClosedForm::L2, 3), q(11, 18));
        assert_eq!(cf(ClosedForm::Le, 3), q(1, 4));
        assert_eq!(cf(ClosedForm::Pbn, 3), q(1, 1));
        assert_eq!(cf(ClosedForm::Pbn, 4), q(1, 3));
        assert_eq!(cf(ClosedForm::Pbn, 5), q(5, 48));
        assert_eq!(cf(ClosedForm::Phi13, 3), q(1, 12));
        assert!(closed_form(ClosedForm::H2, 2).is_err());
        assert_eq!("le".parse::<ClosedForm>().unwrap(), ClosedForm::Le);
        assert!(matches!("h3".parse::<ClosedForm>(), Err(Error::UnknownStatistic(_))));
    }

    #[test]
    fn lengths_partition_the_circle() {
        for n in 3..=50 {
            let (l0, l1, l2) = (cf(ClosedForm::L0, n), cf(ClosedForm::L1, n), cf(ClosedForm::L2, n));
            assert_eq!(&l0 + &l1 + &l2, q(1, 1));
            assert_eq!(cf(ClosedForm::Le, n), l0 + l1 / BigInt::from(2));
        }
    }

    #[test]
    fn phi_closed_form_matches_literal_sum() {
        for x in [q(1, 4), q(1, 3), q(2, 5)] {
            for n in 3..=8 {
                assert_eq!(phi(&x, n).unwrap(), phi_sum_oracle(&x, n).unwrap(), "x = {x}, n = {n}");
            }
        }
        // n = 3: the single term k = l = 1, i = j = 0 gives x/4
        assert_eq!(phi_sum_oracle(&q(2, 5), 3).unwrap(), q(1, 10));
        for n in 3..=10 {
            assert_eq!(phi(&q(1, 3), n).unwrap(), cf(ClosedForm::Phi13, n));
        }
        assert!(phi(&q(1, 2), 5).is_err());
        assert!(phi(&q(0, 1), 5).is_err());
    }

    #[test]
    fn type_two_expectations_from_phi() {
        let third = q(1, 3);
        for n in 3..=12 {
            let f = f_n(n).unwrap();
            assert_eq!(f, p_no_black(n).unwrap() + phi(&third, n).unwrap());
            assert_eq!(cf(ClosedForm::H2, n), f * BigInt::from(2 * n));
            let dphi = phi_derivative_sum_oracle(&third, n).unwrap();
            assert_eq!(dphi, phi_derivative_13(n).unwrap());
            let l2 = pow(2, n - 2).recip() + phi(&third, n).unwrap() + dphi / BigInt::from(9);
            assert_eq!(l2, cf(ClosedForm::L2, n), "n = {n}");
        }
    }

    #[test]
    fn phi_terms_follow_the_p_kl_weights() {
        // φ(1/3) = Σ_{k,l} p_{k,l}/2^{min(1+k+l, n-1)}
        for n in 3..=9 {
            let mut total = BigRational::zero();
            for k in 1..n - 1 {
                for l in 1..n - k {
                    total += erlang_p_kl(k, l).unwrap() / pow(2, (1 + k + l).min(n - 1));
                }
            }
            assert_eq!(total, cf(ClosedForm::Phi13, n));
        }
    }

    #[test]
    fn erlang_values() {
        assert_eq!(erlang_p_kl(1, 1).unwrap(), q(1, 3));
        // ∫ e^{-x} (1 + x) e^{-x} e^{-x} dx = 1/3 + 1/9
        assert_eq!(erlang_p_kl(2, 1).unwrap(), q(4, 9));
        for k in 1..6 {
            for l in 1..6 {
                assert_eq!(erlang_p_kl(k, l).unwrap(), erlang_p_kl(l, k).unwrap());
            }
        }
        assert!(erlang_p_kl(0, 1).is_err());
    }
}
