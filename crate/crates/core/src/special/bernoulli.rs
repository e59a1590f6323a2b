//! Exact Bernoulli numbers from the binomial recurrence
//! `sum_{j=0}^{k} C(k+1, j) B_j = 0`, `B_0 = 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use rug::{Complete, Float, Integer, Rational};

/// Arbitrary-size rational kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn new(numer: impl Into<Integer>, denom: impl Into<Integer>) -> Self {
        let denom = denom.into();
        assert!(denom != 0, "zero denominator");
        Self(Rational::from((numer.into(), denom)))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        self.0.cmp0() as i32
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.0)
    }
}

impl From<Rational> for ExactRational {
    fn from(r: Rational) -> Self {
        Self(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

// Grows on demand; readers take the shared lock on the fast path.
static TABLE: LazyLock<RwLock<Vec<Rational>>> =
    LazyLock::new(|| RwLock::new(vec![Rational::from(1), Rational::from((-1, 2))]));

fn extend_to(k: usize) {
    let mut table = TABLE.write().expect("bernoulli table poisoned");
    while table.len() <= k {
        let n = table.len();
        if n % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        // B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j, skipping the zero odd terms.
        let mut binom = Integer::from(1);
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            if j == 1 || j % 2 == 0 {
                acc += Rational::from(((&binom * b.numer()).complete(), b.denom().clone()));
            }
            binom *= (n + 1 - j) as u64;
            binom /= (j + 1) as u64;
        }
        let b = -acc / Rational::from(n as u64 + 1);
        table.push(b);
    }
}

/// Calls `f` with `B_k` without cloning it out of the shared table.
pub(crate) fn with_bernoulli<R>(k: usize, f: impl FnOnce(&Rational) -> R) -> R {
    {
        let table = TABLE.read().expect("bernoulli table poisoned");
        if let Some(b) = table.get(k) {
            return f(b);
        }
    }
    extend_to(k);
    let table = TABLE.read().expect("bernoulli table poisoned");
    f(&table[k])
}

/// The Bernoulli number `B_k` with the convention `B_1 = -1/2`.
pub fn bernoulli(k: u32) -> ExactRational {
    ExactRational(with_bernoulli(k as usize, Rational::clone))
}

/// `B_{2i} / (2i)!` rounded to `prec` bits.
pub(crate) fn bernoulli_over_factorial(two_i: usize, prec: u32) -> Float {
    with_bernoulli(two_i, |b| {
        let fact = Integer::factorial(two_i as u32).complete();
        Float::with_val(prec, b / Rational::from(fact))
    })
}

// `B_{2i}/(2i)!` rounded per precision, index i.
static SCALED: LazyLock<RwLock<HashMap<u32, Vec<Float>>>> = LazyLock::new(Default::default);

/// Calls `f` with `[B_0/0!, B_2/2!, ..., B_{2(count-1)}/(2(count-1))!]` at
/// `prec` bits, extending the shared table when needed.
pub(crate) fn with_scaled_even<R>(prec: u32, count: usize, f: impl FnOnce(&[Float]) -> R) -> R {
    {
        let table = SCALED.read().expect("coefficient table poisoned");
        if let Some(v) = table.get(&prec) {
            if v.len() >= count {
                return f(&v[..count]);
            }
        }
    }
    {
        let mut table = SCALED.write().expect("coefficient table poisoned");
        let v = table.entry(prec).or_default();
        while v.len() < count {
            let i = v.len();
            v.push(bernoulli_over_factorial(2 * i, prec));
        }
    }
    let table = SCALED.read().expect("coefficient table poisoned");
    f(&table[&prec][..count])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), ExactRational::new(1, 1));
        assert_eq!(bernoulli(1), ExactRational::new(-1, 2));
        assert_eq!(bernoulli(2), ExactRational::new(1, 6));
        assert_eq!(bernoulli(4), ExactRational::new(-1, 30));
        assert_eq!(bernoulli(12), ExactRational::new(-691, 2730));
        assert_eq!(bernoulli(12).to_string(), "-691/2730");
    }

    #[test]
    fn odd_values_vanish_and_even_values_alternate() {
        for k in 1..=30u32 {
            assert!(bernoulli(2 * k + 1).is_zero(), "B_{}", 2 * k + 1);
            let expected = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(bernoulli(2 * k).signum(), expected, "B_{}", 2 * k);
        }
    }

    // Independent route: invert the power series of (e^z - 1)/z = sum z^k/(k+1)!.
    #[test]
    fn matches_generating_series_coefficients() {
        let n = 40usize;
        let a: Vec<Rational> = (0..=n)
            .map(|k| Rational::from((1, Integer::factorial(k as u32 + 1).complete())))
            .collect();
        let mut c: Vec<Rational> = vec![Rational::from(1)];
        for k in 1..=n {
            let mut s = Rational::new();
            for j in 0..k {
                s += (&c[j] * &a[k - j]).complete();
            }
            c.push(-s);
        }
        for (k, ck) in c.iter().enumerate() {
            let expect = (ck * Integer::factorial(k as u32).complete()).complete();
            assert_eq!(*bernoulli(k as u32).as_rational(), expect, "B_{k}");
        }
    }

    #[test]
    fn concurrent_access_agrees() {
        let handles: Vec<_> = (0..4)
            .map(|i| std::thread::spawn(move || bernoulli(60 + 2 * i)))
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            let b = h.join().unwrap();
            assert_eq!(b, bernoulli(60 + 2 * i as u32));
        }
    }
}
