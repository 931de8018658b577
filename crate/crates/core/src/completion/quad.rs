//! Continued-fraction expansion of quadratic irrationals `(p + √D) / q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Incremental continued-fraction state. Complete quotients are
/// `(P + √D) / Q` with `Q | D - P²`.
#[derive(Debug, Clone)]
pub(crate) struct QuadExpansion {
    radicand: BigInt,
    root_floor: BigInt,
    p: BigInt,
    q: BigInt,
    /// Convergents `h_k / k_k`, shifted so the first is zero.
    convergents: Vec<BigRational>,
    h: (BigInt, BigInt),
    k: (BigInt, BigInt),
    integer_part: Option<BigInt>,
}

impl QuadExpansion {
    pub(crate) fn new(d: u64, p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("denominator q must be positive".into()));
        }
        let d_big = BigInt::from(d);
        let root = d_big.sqrt();
        if &root * &root == d_big {
            return Err(Error::InvalidInput(format!("D = {d} is a perfect square")));
        }
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        // rescale so that Q divides D - P^2
        let radicand = d_big * &q * &q;
        let root_floor = radicand.sqrt();
        Ok(QuadExpansion {
            radicand,
            root_floor,
            p: p * &q,
            q: &q * &q,
            convergents: Vec::new(),
            h: (BigInt::zero(), BigInt::one()),
            k: (BigInt::one(), BigInt::zero()),
            integer_part: None,
        })
    }

    fn next_partial_quotient(&mut self) -> BigInt {
        let num = &self.p + &self.root_floor;
        let a = if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -(num.div_floor(&-&self.q)) - BigInt::one()
        };
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.radicand - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }

    fn push_convergent(&mut self) {
        let a = self.next_partial_quotient();
        let h = &a * &self.h.1 + &self.h.0;
        let k = &a * &self.k.1 + &self.k.0;
        self.h = (std::mem::replace(&mut self.h.1, h.clone()), h.clone());
        self.k = (std::mem::replace(&mut self.k.1, k.clone()), k.clone());
        let base = self.integer_part.get_or_insert_with(|| a.clone()).clone();
        self.convergents.push(BigRational::new(h, k) - BigRational::from_integer(base));
    }

    /// The `index`-th raw bracket `(min, max)` of consecutive convergents of the fractional part.
    pub(crate) fn bracket(&mut self, index: usize) -> (BigRational, BigRational) {
        while self.convergents.len() < index + 2 {
            self.push_convergent();
        }
        let (a, b) = (&self.convergents[index], &self.convergents[index + 1]);
        if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    }
}
