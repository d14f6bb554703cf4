//! Exact bookkeeping for the asymptotic size function `f(n) = c n^(1-eps)`
//! with `c = n0^(eps-1)`, plus the finite bound `max(n/delta, g(delta))`.
//!
//! `f` is irrational in general, so it is evaluated as a rational interval
//! `[lo, hi]` from integer roots of scaled big integers. Inequality checks
//! combine endpoints in the direction that makes a `Holds` verdict sound,
//! doubling the precision until the verdict is decided.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    Epsilon(Rational),
    #[error("n0 = {0} violates n0^(eps^2) >= 10^6")]
    Growth(BigUint),
    #[error("n0 = {0} violates n0^eps >= 10*ceil(log2 n0) + 1")]
    LogGrowth(BigUint),
}

/// Constants of the asymptotic argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperParams {
    pub epsilon: Rational,
    pub n0: BigUint,
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_zero() || n.is_one() {
        0
    } else {
        (n - 1u32).bits()
    }
}

fn eps_parts(eps: Rational) -> (u32, u32) {
    (eps.numer() as u32, eps.denom() as u32)
}

/// `m^(p^2) >= 10^(6 q^2)`.
fn growth_holds(m: &BigUint, p: u32, q: u32) -> bool {
    m.pow(p * p) >= BigUint::from(10u32).pow(6 * q * q)
}

/// `m^p >= (10 ceil(log2 n0) + 1)^q`.
fn log_growth_holds(m: &BigUint, n0: &BigUint, p: u32, q: u32) -> bool {
    let rhs = BigUint::from(10 * ceil_log2(n0) + 1);
    m.pow(p) >= rhs.pow(q)
}

impl PaperParams {
    /// Checks `0 < eps < 1/2` and both growth conditions at `n0`. They hold
    /// for every larger `m` because the left sides increase and the right
    /// sides are fixed.
    pub fn new(epsilon: Rational, n0: BigUint) -> Result<PaperParams, ParamsError> {
        if epsilon <= Rational::ZERO || epsilon >= crate::rational::q(1, 2) {
            return Err(ParamsError::Epsilon(epsilon));
        }
        let (p, q) = eps_parts(epsilon);
        if !growth_holds(&n0, p, q) {
            return Err(ParamsError::Growth(n0));
        }
        if !log_growth_holds(&n0, &n0, p, q) {
            return Err(ParamsError::LogGrowth(n0));
        }
        Ok(PaperParams { epsilon, n0 })
    }

    /// No growth checks: lets the recursion run with a small `n0`. Only
    /// `0 < eps < 1` is required.
    pub fn new_unchecked(epsilon: Rational, n0: BigUint) -> PaperParams {
        assert!(epsilon > Rational::ZERO && epsilon < Rational::ONE, "epsilon out of (0,1)");
        assert!(!n0.is_zero(), "n0 must be positive");
        PaperParams { epsilon, n0 }
    }

    /// The smallest `n0` accepted by [`PaperParams::new`].
    pub fn minimal(epsilon: Rational) -> Result<PaperParams, ParamsError> {
        if epsilon <= Rational::ZERO || epsilon >= crate::rational::q(1, 2) {
            return Err(ParamsError::Epsilon(epsilon));
        }
        let (p, q) = eps_parts(epsilon);
        let target = BigUint::from(10u32).pow(6 * q * q);
        let mut m = target.nth_root(p * p);
        if m.pow(p * p) < target {
            m += 1u32;
        }
        // the log condition at m = n0 is monotone in m, so search upwards
        if !log_growth_holds(&m, &m, p, q) {
            let mut hi = m.clone() * 2u32;
            while !log_growth_holds(&hi, &hi, p, q) {
                hi *= 2u32;
            }
            let mut lo = m;
            while &lo + 1u32 < hi {
                let mid: BigUint = (&lo + &hi) / 2u32;
                if log_growth_holds(&mid, &mid, p, q) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            m = hi;
        }
        PaperParams::new(epsilon, m)
    }

    fn eps_big(&self) -> BigRational {
        BigRational::new(self.epsilon.numer().into(), self.epsilon.denom().into())
    }

    /// Floating-point `f(n)` for display only.
    pub fn f_approx(&self, n: &BigUint) -> f64 {
        let e = 1.0 - self.epsilon.to_f64();
        let ln = n.to_f64().unwrap_or(f64::MAX).ln() - self.n0.to_f64().unwrap_or(f64::MAX).ln();
        (e * ln).exp()
    }
}

/// A rational enclosure of an irrational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// `lo == hi` is the exact value.
    pub exact: bool,
}

impl FInterval {
    /// The guaranteed-direction value used by guarantee checks.
    pub fn lower(&self) -> &BigRational {
        &self.lo
    }

    fn exact(v: BigRational) -> FInterval {
        FInterval { lo: v.clone(), hi: v, exact: true }
    }
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ubig(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `f(n)` to `bits` fractional bits beyond the value's own magnitude.
fn f_interval_bits(params: &PaperParams, n: &BigUint, bits: u64) -> FInterval {
    if n.is_zero() {
        return FInterval::exact(BigRational::zero());
    }
    let (p, q) = eps_parts(params.epsilon);
    let e = q - p;
    // f(n)^q = (n / n0)^e = a / b
    let a = n.pow(e);
    let b = params.n0.pow(e);
    let shift = bits + b.bits().saturating_sub(a.bits()) / q as u64 + 2;
    let scaled = &a << (shift * q as u64);
    let x = &scaled / &b;
    let r = x.nth_root(q);
    let den = BigInt::one() << shift;
    let lo = BigRational::new(BigInt::from(r.clone()), den.clone());
    if r.pow(q) * &b == scaled {
        return FInterval::exact(lo);
    }
    let hi = BigRational::new(BigInt::from(r + 1u32), den);
    FInterval { lo, hi, exact: false }
}

/// `f(n)` with about 96 significant bits, rounding `lo` down and `hi` up.
pub fn paper_f(params: &PaperParams, n: &BigUint) -> FInterval {
    f_interval_bits(params, n, 96)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// The enclosure still straddled zero at the precision cap.
    Undecided,
}

const MAX_BITS: u64 = 1 << 14;

/// Refines until `margin` (returning lower and upper bounds of lhs - rhs)
/// has a definite sign.
fn decide(mut margin: impl FnMut(u64) -> (BigRational, BigRational)) -> Verdict {
    let mut bits = 128;
    loop {
        let (lo, hi) = margin(bits);
        if !lo.is_negative() {
            return Verdict::Holds;
        }
        if hi.is_negative() {
            return Verdict::Fails;
        }
        if bits >= MAX_BITS {
            return Verdict::Undecided;
        }
        bits *= 2;
    }
}

/// `f(m-x) >= f(m) - f'(m-x) x` for `m > 2`, `0 < x < m`, where
/// `f'(y) = (1-eps) f(y) / y`.
pub fn check_tangent_bound(params: &PaperParams, m: &BigUint, x: &BigUint) -> Verdict {
    assert!(m > &BigUint::from(2u32) && !x.is_zero() && x < m, "need m > 2 and 0 < x < m");
    let mx = m - x;
    let one_minus = BigRational::one() - params.eps_big();
    let factor = BigRational::one() + one_minus * ubig(x) / ubig(&mx);
    decide(|bits| {
        let fmx = f_interval_bits(params, &mx, bits);
        let fm = f_interval_bits(params, m, bits);
        // lhs - rhs = f(m-x) (1 + (1-eps) x / (m-x)) - f(m)
        (&fmx.lo * &factor - &fm.hi, &fmx.hi * &factor - &fm.lo)
    })
}

/// `f(a) + f(b) >= f(m-x) + f(x)` with `m = a + b`, `x <= a, b` and
/// `x < m/2`. The case `{a, b} = {x, m-x}` is an identity.
pub fn check_split_sum(params: &PaperParams, a: &BigUint, b: &BigUint, x: &BigUint) -> Verdict {
    let m = a + b;
    assert!(x <= a && x <= b && x * 2u32 < m, "need x <= a, b and x < m/2");
    if a == x || b == x {
        return Verdict::Holds;
    }
    let mx = &m - x;
    decide(|bits| {
        let f = |v: &BigUint| f_interval_bits(params, v, bits);
        let (fa, fb, fmx, fx) = (f(a), f(b), f(&mx), f(x));
        (&fa.lo + &fb.lo - &fmx.hi - &fx.hi, &fa.hi + &fb.hi - &fmx.lo - &fx.lo)
    })
}

/// One inequality of the chain bounding the number of mid-sized layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub name: &'static str,
    pub verdict: Verdict,
}

/// Verifies, for a given `n > n0`, the chain showing that at least
/// `10 ceil(log2 n) + 1` layers have between `n/(20 f)` and `10^5 f`
/// vertices, and that a run of doubling sizes of that length would exceed
/// `n`. Returns no steps for `n <= n0`.
pub fn check_index_chain(params: &PaperParams, n: &BigUint) -> Vec<ChainStep> {
    if n <= &params.n0 {
        return Vec::new();
    }
    let l = ceil_log2(n);
    let nn = ubig(n);
    let mut steps = Vec::new();
    let mut push = |name, verdict| steps.push(ChainStep { name, verdict });

    // the 1/50 lost to the floor is covered by n/(10^5 f): n >= 2000 f
    push(
        "floor-loss",
        decide(|bits| {
            let f = f_interval_bits(params, n, bits);
            (&nn - big(2000) * &f.hi, &nn - big(2000) * &f.lo)
        }),
    );
    // 1/500 - 2/10^5 >= 1/1000
    let coeff = BigRational::new(1.into(), 500.into()) - BigRational::new(2.into(), 100_000.into());
    push(
        "constant",
        if coeff >= BigRational::new(1.into(), 1000.into()) { Verdict::Holds } else { Verdict::Fails },
    );
    // n / (1000 f) >= 10 ceil(log n) + 1
    let target = big(10 * l + 1);
    push(
        "log-bound",
        decide(|bits| {
            let f = f_interval_bits(params, n, bits);
            (&nn / (big(1000) * &f.hi) - &target, &nn / (big(1000) * &f.lo) - &target)
        }),
    );
    // 2^(5 ceil(log n)) n / (20 f) > n, i.e. 2^(5 l) > 20 f
    let pow = BigRational::from_integer(BigInt::one() << (5 * l));
    push(
        "doubling",
        decide(|bits| {
            let f = f_interval_bits(params, n, bits);
            // strict: subtract a unit of the last place from the margin
            let ulp = BigRational::new(BigInt::one(), BigInt::one() << bits);
            (&pow - big(20) * &f.hi - &ulp, &pow - big(20) * &f.lo)
        }),
    );
    // f(n) > 1, so the bridging and splitting thresholds are below n
    push(
        "f-above-one",
        decide(|bits| {
            let f = f_interval_bits(params, n, bits);
            let ulp = BigRational::new(BigInt::one(), BigInt::one() << bits);
            (&f.lo - BigRational::one() - &ulp, &f.hi - BigRational::one())
        }),
    );
    steps
}

/// `max(ceil(n/delta), g(delta))`, or `None` unless `0 < delta < n`.
pub fn theorem1_bound(n: u64, delta: u64, g: impl Fn(u64) -> u64) -> Option<u64> {
    if delta == 0 || delta >= n {
        return None;
    }
    Some(n.div_ceil(delta).max(g(delta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn ceil_log() {
        let c = |n: u32| ceil_log2(&BigUint::from(n));
        assert_eq!((c(1), c(2), c(3), c(4), c(5), c(1024), c(1025)), (0, 1, 2, 2, 3, 10, 11));
    }

    #[test]
    fn f_at_n0_is_one() {
        let p = PaperParams::minimal(q(2, 5)).unwrap();
        let f = paper_f(&p, &p.n0);
        assert!(f.exact);
        assert_eq!(f.lo, BigRational::one());
    }

    #[test]
    fn minimal_is_tight() {
        let p = PaperParams::minimal(q(2, 5)).unwrap();
        assert!(PaperParams::new(q(2, 5), &p.n0 - 1u32).is_err());
        assert!(PaperParams::new(q(1, 2), p.n0.clone()).is_err());
    }

    #[test]
    fn interval_brackets_float() {
        let p = PaperParams::new_unchecked(q(1, 3), BigUint::from(8u32));
        for n in [1u32, 2, 7, 64, 1000, 123_457] {
            let f = paper_f(&p, &BigUint::from(n));
            let approx = (n as f64 / 8.0).powf(2.0 / 3.0);
            assert!(f.lo <= f.hi);
            let lo = f.lo.to_f64().unwrap();
            let hi = f.hi.to_f64().unwrap();
            assert!(lo <= approx * (1.0 + 1e-12) && hi >= approx * (1.0 - 1e-12), "{n}: {lo} {approx} {hi}");
        }
        // 64/8 = 8, 8^(2/3) = 4 exactly
        assert!(paper_f(&p, &BigUint::from(64u32)).exact);
    }

    #[test]
    fn tangent_and_split_sum_instances() {
        let p = PaperParams::minimal(q(2, 5)).unwrap();
        let n = |v: u64| BigUint::from(v);
        let m = &p.n0 * 4u32;
        assert_eq!(check_tangent_bound(&p, &m, &n(1)), Verdict::Holds);
        assert_eq!(check_tangent_bound(&p, &m, &(&m / 2u32)), Verdict::Holds);
        let half = &m / 2u32;
        assert_eq!(check_split_sum(&p, &half, &half, &(&m / 4u32)), Verdict::Holds);
        assert_eq!(check_split_sum(&p, &n(3), &n(97), &n(3)), Verdict::Holds);
        assert_eq!(check_split_sum(&p, &n(40), &n(60), &n(10)), Verdict::Holds);
    }

    #[test]
    fn chain_holds_above_n0() {
        let p = PaperParams::minimal(q(2, 5)).unwrap();
        assert!(check_index_chain(&p, &p.n0).is_empty());
        let steps = check_index_chain(&p, &(&p.n0 * 1000u32));
        assert_eq!(steps.len(), 5);
        assert!(steps.iter().all(|s| s.verdict == Verdict::Holds), "{steps:?}");
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_bound(100, 10, |_| 2), Some(10));
        assert_eq!(theorem1_bound(25, 24, |d| crate::flag::flag_bound(d as usize) as u64), Some(2));
        assert_eq!(theorem1_bound(5, 5, |_| 1), None);
    }
}
