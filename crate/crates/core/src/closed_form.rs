//! Explicit constants and the closed-form estimates for truncation orders
//! one and two.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::{self, pow, rat, rat_int, rational_to_f64, Interval, Rational};

/// `γ_k = 2^{k−1} / (2^{k−1} − 1)`.
pub fn gamma_k(k: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::input(format!("γ_k needs k ≥ 2, got {k}")));
    }
    let p = BigInt::one() << (k - 1);
    Ok(Rational::new(p.clone(), p - 1))
}

/// `α_{k,t}` with both branches of the minimum.
#[derive(Clone, Debug)]
pub struct AlphaKt {
    pub k: usize,
    pub t: usize,
    /// `log₂ γ_k / e^{2t}`
    pub first_branch: Interval,
    /// `(k−1)(1 − ln 2) ln γ_k / (ln(2^{k−1} − 1) + ln γ_k)`
    pub second_branch: Interval,
    /// Half the smaller branch.
    pub value: Interval,
}

impl AlphaKt {
    pub fn value_f64(&self) -> f64 {
        self.value.midpoint_f64()
    }
}

pub fn alpha_kt(k: usize, t: usize) -> Result<AlphaKt> {
    let gamma = gamma_k(k)?;
    if t == 0 {
        return Err(Error::input("α_{k,t} needs t ≥ 1"));
    }
    let ln2 = numeric::ln2();
    let ln_gamma = numeric::ln(&gamma);
    let e_2t = numeric::exp(&Interval::exact(rat_int(2 * t as i64)));
    let first = ln_gamma.div_positive(&ln2).div_positive(&e_2t);

    let one_minus_ln2 = Interval::exact(Rational::one()).sub(&ln2);
    let pk = (BigInt::one() << (k - 1)) - 1;
    let ln_pk = numeric::ln(&Rational::from_integer(pk));
    let second = one_minus_ln2
        .mul(&ln_gamma)
        .scale(&rat_int(k as i64 - 1))
        .div_positive(&ln_pk.add(&ln_gamma));

    let smaller = if first.hi <= second.lo {
        first.clone()
    } else if second.hi <= first.lo {
        second.clone()
    } else {
        Interval {
            lo: first.lo.clone().min(second.lo.clone()),
            hi: first.hi.clone().min(second.hi.clone()),
        }
    };
    let value = smaller.scale(&rat(1, 2));
    Ok(AlphaKt {
        k,
        t,
        first_branch: first,
        second_branch: second,
        value,
    })
}

/// `ln k + (k−1) n ln 2 + exponent`.
fn assemble_log(k: usize, n: usize, exponent: &Rational) -> f64 {
    (k as f64).ln() + ((k - 1) * n) as f64 * std::f64::consts::LN_2 + rational_to_f64(exponent)
}

/// A closed-form count `k · 2^{(k−1)n} · exp(exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormEstimate {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub exponent: Rational,
    /// Natural log of the estimated count.
    pub log_value: f64,
}

fn check_params(k: usize, n: usize, r: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::input(format!("closed forms need k ≥ 3, got {k}")));
    }
    if n == 0 || r == 0 {
        return Err(Error::input("closed forms need n ≥ 1 and r ≥ 1"));
    }
    Ok(())
}

/// Linear `r`-regular hypergraphs truncated at size one: exponent `n γ_k^{−r}`.
pub fn closed_form_t1(k: usize, n: usize, r: usize) -> Result<ClosedFormEstimate> {
    check_params(k, n, r)?;
    let gamma = gamma_k(k)?;
    let exponent = rat_int(n as i64) * pow(&gamma.recip(), r);
    Ok(ClosedFormEstimate {
        k,
        n,
        r,
        t: 1,
        log_value: assemble_log(k, n, &exponent),
        exponent,
    })
}

/// The size-two closed form for linear hypergraphs of girth at least five.
///
/// `printed` follows the published formula, which counts `n(k−1)r²` ordered
/// singleton pairs. Direct enumeration finds `n((k−1)r(r−1) + 1)`: pairs
/// `({v},{u})` with `u ≠ v` sharing a neighbour, plus `({v},{v})`.
/// `corrected` uses the enumerated count; `delta = corrected − printed`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormT2 {
    pub printed: ClosedFormEstimate,
    pub corrected: ClosedFormEstimate,
    pub delta: Rational,
    /// `−(1/2) n (k−1) r² γ_k^{−2r}`
    pub singleton_pairs_printed: Rational,
    /// `−(1/2) n ((k−1) r (r−1) + 1) γ_k^{−2r}`
    pub singleton_pairs_corrected: Rational,
    /// `(1/2) n (k−1) r (r−1) γ_k^{−(2r−2)} (1/2 + (1/2) q²)`,
    /// `q = (2^{k−2} − 1) / 2^{k−2}`
    pub pair_polymers: Rational,
}

pub fn closed_form_t2(k: usize, n: usize, r: usize) -> Result<ClosedFormT2> {
    check_params(k, n, r)?;
    let gamma = gamma_k(k)?;
    let inv = gamma.recip();
    let (nq, kq, rq) = (rat_int(n as i64), rat_int(k as i64), rat_int(r as i64));
    let one = Rational::one();
    let half = rat(1, 2);
    let p2 = BigInt::one() << (k - 2);
    let q = Rational::new(p2.clone() - 1, p2);
    let q2 = &q * &q;

    let first = &nq * pow(&inv, r);
    let bracket = (&rq - &one) / &rq * &gamma * &gamma * (&one + &q2) - rat(2, 1);
    let printed_exp = &first + (&kq - &one) / rat(4, 1) * &rq * &rq * &nq * pow(&inv, 2 * r) * bracket;

    let k1 = &kq - &one;
    let singleton_pairs_printed = -&half * &nq * &k1 * &rq * &rq * pow(&inv, 2 * r);
    let pair_count = &k1 * &rq * (&rq - &one);
    let singleton_pairs_corrected = -&half * &nq * (&pair_count + &one) * pow(&inv, 2 * r);
    let pair_polymers = &half * &nq * &pair_count * pow(&inv, 2 * r - 2) * (&half + &half * &q2);
    let corrected_exp = &first + &singleton_pairs_corrected + &pair_polymers;
    let delta = &corrected_exp - &printed_exp;

    Ok(ClosedFormT2 {
        printed: ClosedFormEstimate {
            k,
            n,
            r,
            t: 2,
            log_value: assemble_log(k, n, &printed_exp),
            exponent: printed_exp,
        },
        corrected: ClosedFormEstimate {
            k,
            n,
            r,
            t: 2,
            log_value: assemble_log(k, n, &corrected_exp),
            exponent: corrected_exp,
        },
        delta,
        singleton_pairs_printed,
        singleton_pairs_corrected,
        pair_polymers,
    })
}
