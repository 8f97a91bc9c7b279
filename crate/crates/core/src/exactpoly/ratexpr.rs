use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::Poly;
use super::var::Var;
use super::{PolyError, Rational};

/// A polynomial divided by a monomial.
///
/// Denominators only ever contain variables that are asserted nonvanishing;
/// callers enforce the unit set with [`RatExpr::check_units`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatExpr {
    num: Poly,
    den: Monomial,
}

impl RatExpr {
    pub fn new(num: Poly, den: Monomial) -> RatExpr {
        let mut r = RatExpr { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Monomial::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let g = self.num.monomial_content().gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_monomial(&g).expect("content divides");
            self.den = self.den.div(&g).expect("gcd divides");
        }
    }

    pub fn zero() -> RatExpr {
        RatExpr::default()
    }

    pub fn one() -> RatExpr {
        RatExpr::from(Poly::one())
    }

    pub fn constant(c: Rational) -> RatExpr {
        RatExpr::from(Poly::constant(c))
    }

    pub fn int(n: i64) -> RatExpr {
        RatExpr::from(Poly::int(n))
    }

    pub fn var(v: Var) -> RatExpr {
        RatExpr::from(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Monomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<Poly, PolyError> {
        if self.den.is_one() {
            Ok(self.num)
        } else {
            Err(PolyError::NotPolynomial(self.to_text()))
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.exp(v) > 0
    }

    pub fn scale(&self, c: &Rational) -> RatExpr {
        RatExpr::new(self.num.scale(c), self.den.clone())
    }

    /// Multiplicative inverse of a single-term expression.
    pub fn inv(&self) -> Result<RatExpr, PolyError> {
        let (c, m) = self
            .num
            .as_term()
            .ok_or_else(|| PolyError::NonUnitDenominator(self.to_text()))?;
        Ok(RatExpr::new(
            Poly::term(c.recip(), self.den.clone()),
            m,
        ))
    }

    pub fn div(&self, rhs: &RatExpr) -> Result<RatExpr, PolyError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> RatExpr {
        RatExpr::new(self.num.pow(e), self.den.pow(e))
    }

    pub fn partial(&self, v: Var) -> RatExpr {
        let e = self.den.exp(v);
        if e == 0 {
            return RatExpr::new(self.num.partial(v), self.den.clone());
        }
        // d(N/M) = (v N_v - e N) / (v M)
        let top = self.num.partial(v).mul_monomial(&Monomial::var(v))
            - self.num.scale(&Rational::from_integer(e.into()));
        RatExpr::new(top, self.den.mul(&Monomial::var(v)))
    }

    /// Errors if any denominator variable lies outside `units`.
    pub fn check_units(&self, units: &BTreeSet<Var>) -> Result<(), PolyError> {
        for v in self.den.vars() {
            if !units.contains(&v) {
                return Err(PolyError::NonUnitDenominator(format!(
                    "{} (variable {v} is not a unit)",
                    self.to_text()
                )));
            }
        }
        Ok(())
    }

    /// Simultaneous substitution. Every variable of the denominator that is
    /// bound must map to a single-term expression.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RatExpr>) -> Result<RatExpr, PolyError> {
        let mut cache: BTreeMap<(Var, u32), RatExpr> = BTreeMap::new();
        let mut power = |v: Var, e: u32, b: &RatExpr| -> RatExpr {
            cache.entry((v, e)).or_insert_with(|| b.pow(e)).clone()
        };
        let mut num = RatExpr::zero();
        for (m, c) in self.num.terms() {
            let mut t = RatExpr::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.iter() {
                match bindings.get(&v) {
                    Some(b) => t = &t * &power(v, e, b),
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                t = &t * &RatExpr::from(Poly::term(Rational::one(), Monomial::from_pairs(kept)));
            }
            num = num + t;
        }
        if self.den.is_one() {
            return Ok(num);
        }
        let mut den = RatExpr::one();
        let mut kept = Vec::new();
        for &(v, e) in self.den.iter() {
            match bindings.get(&v) {
                Some(b) => {
                    if b.num.as_term().is_none() {
                        return Err(PolyError::NonUnitDenominator(format!(
                            "{v} -> {} in denominator of {}",
                            b.to_text(),
                            self.to_text()
                        )));
                    }
                    den = &den * &power(v, e, b);
                }
                None => kept.push((v, e)),
            }
        }
        den = &den * &RatExpr::from(Poly::term(Rational::one(), Monomial::from_pairs(kept)));
        num.div(&den)
    }

    pub fn substitute_poly(&self, bindings: &BTreeMap<Var, Poly>) -> Result<RatExpr, PolyError> {
        let b: BTreeMap<Var, RatExpr> = bindings
            .iter()
            .map(|(k, v)| (*k, RatExpr::from(v.clone())))
            .collect();
        self.substitute(&b)
    }

    pub fn eval(&self, values: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let n = self.num.eval(values)?;
        let d = Poly::term(Rational::one(), self.den.clone()).eval(values)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            self.num.to_text()
        } else {
            format!("({})/{}", self.num.to_text(), self.den)
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<Poly> for RatExpr {
    fn from(p: Poly) -> RatExpr {
        RatExpr {
            num: p,
            den: Monomial::one(),
        }
    }
}

impl From<Var> for RatExpr {
    fn from(v: Var) -> RatExpr {
        RatExpr::var(v)
    }
}

impl From<Rational> for RatExpr {
    fn from(c: Rational) -> RatExpr {
        RatExpr::constant(c)
    }
}

impl<'a> Add<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatExpr::new(&self.num + &rhs.num, self.den.clone());
        }
        let l = self.den.lcm(&rhs.den);
        let a = self.num.mul_monomial(&l.div(&self.den).unwrap());
        let b = rhs.num.mul_monomial(&l.div(&rhs.den).unwrap());
        RatExpr::new(a + b, l)
    }
}

impl Add for RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: RatExpr) -> RatExpr {
        if self.den == rhs.den {
            return RatExpr::new(self.num + rhs.num, self.den);
        }
        &self + &rhs
    }
}

impl<'a> Sub<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl Sub for RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: RatExpr) -> RatExpr {
        self + (-rhs)
    }
}

impl<'a> Mul<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatExpr::zero();
        }
        RatExpr::new(&self.num * &rhs.num, self.den.mul(&rhs.den))
    }
}

impl Mul for RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: RatExpr) -> RatExpr {
        &self * &rhs
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -(self.clone())
    }
}

impl Zero for RatExpr {
    fn zero() -> RatExpr {
        RatExpr::default()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
