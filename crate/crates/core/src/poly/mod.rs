//! Sparse multivariate polynomials over exact rationals, and the polynomial
//! model built on them.

mod model;

pub use model::{PolyD, PolyGen, PolyL, PolyLsys, PolyMap, PolyModel};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

type Exps = Vec<u16>;

/// A polynomial in a fixed number of variables. Zero coefficients are never
/// stored, so structural equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u16>, c: Rational) -> Poly {
        let mut p = Poly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u16>, Rational)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total(e)).max()
    }

    pub fn coefficient(&self, exps: &[u16]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Keeps the monomials whose exponent vector satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&[u16]) -> bool) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// `∂p/∂xᵢ`
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * rat(i64::from(e[i])));
        }
        out
    }

    /// Reindexes into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u16; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Substitutes `vals[i]` for variable `i`; all `vals` share `nvars`.
    pub fn substitute(&self, vals: &[Poly], nvars: usize) -> Poly {
        assert_eq!(vals.len(), self.nvars, "substitution arity");
        debug_assert!(vals.iter().all(|v| v.nvars == nvars));
        if vals.iter().all(|v| v.terms.len() <= 1) {
            return self.substitute_monomials(vals, nvars);
        }
        let mut cache: Vec<Vec<Poly>> = vals.iter().map(|v| vec![Poly::one(nvars), v.clone()]).collect();
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut acc = Poly::constant(nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= k as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                acc = &acc * &powers[k as usize];
                if acc.is_zero() {
                    break;
                }
            }
            for (e2, c2) in acc.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    fn substitute_monomials(&self, vals: &[Poly], nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        'terms: for (e, c) in &self.terms {
            let mut exps = vec![0u16; nvars];
            let mut coeff = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let Some((ve, vc)) = vals[i].terms.iter().next() else {
                    continue 'terms;
                };
                for (j, &x) in ve.iter().enumerate() {
                    exps[j] += x * k;
                }
                if !vc.is_one() {
                    coeff *= num_traits::pow::pow(vc.clone(), k as usize);
                }
            }
            out.add_term(exps, coeff);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow::pow(x.clone(), k as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Human-readable form using the given variable names. Monomials are
    /// printed by descending total degree, then descending exponent vector.
    pub fn display_with(&self, names: &[impl AsRef<str>]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ordered: Vec<(&Exps, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| total(b).cmp(&total(a)).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (idx, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !mag.is_one() {
                factors.push(format_rational(&mag));
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[i].as_ref().to_string()),
                    _ => factors.push(format!("{}^{k}", names[i].as_ref())),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }

    /// Default variable names `x1, …, xn`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

fn total(e: &[u16]) -> u32 {
    e.iter().map(|&k| u32::from(k)).sum()
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_with(&Poly::default_names(self.nvars)))
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn c(n: usize, k: i64) -> Poly {
        Poly::constant(n, rat(k))
    }

    #[test]
    fn canonical_form_drops_zero_terms() {
        let p = &(&x(2, 0) + &x(2, 1)) - &x(2, 1);
        assert_eq!(p, x(2, 0));
        assert_eq!(p.len(), 1);
        let sq = (&x(2, 0) + &x(2, 1)).pow(2);
        let expanded = &(&x(2, 0).pow(2) + &(&c(2, 2) * &(&x(2, 0) * &x(2, 1)))) + &x(2, 1).pow(2);
        assert_eq!(sq, expanded);
    }

    #[test]
    fn display_orders_by_degree() {
        let names = ["x", "y", "z"];
        let p = &(&(&(&x(3, 0).pow(2) * &x(3, 1)) + &c(3, 3).scale(&rat(1))) + &x(3, 2))
            + &(&c(3, 3) * &x(3, 0));
        assert_eq!(p.display_with(&names), "x^2*y + 3*x + z + 3");
        let q = &x(1, 0).scale(&ratio(-3, 2)) + &c(1, -1);
        assert_eq!(q.display_with(&["x"]), "-3/2*x - 1");
        assert_eq!(Poly::zero(2).display_with(&names), "0");
    }

    #[test]
    fn substitution_composes() {
        // x ↦ x², then y ↦ y + 1
        let f = x(1, 0).pow(2);
        let g = &x(1, 0) + &c(1, 1);
        let fg = g.substitute(&[f], 1);
        assert_eq!(fg, &x(1, 0).pow(2) + &c(1, 1));
    }

    #[test]
    fn monomial_fast_path_matches_general_path() {
        let p = &(&x(3, 0).pow(2) * &x(3, 2)) + &(&c(3, -2) * &x(3, 1));
        let vals = vec![x(2, 1).scale(&rat(3)), Poly::zero(2), x(2, 0)];
        let fast = p.substitute(&vals, 2);
        let mut slow = Poly::zero(2);
        for (e, k) in p.terms() {
            let mut t = Poly::constant(2, k.clone());
            for (i, &n) in e.iter().enumerate() {
                t = &t * &vals[i].pow(u32::from(n));
            }
            slow = &slow + &t;
        }
        assert_eq!(fast, slow);
        assert_eq!(fast, (&x(2, 1).pow(2) * &x(2, 0)).scale(&rat(9)));
    }

    #[test]
    fn eval_is_exact() {
        // x²y + 3x + z + 1 at (1, 2, 3)
        let p = &(&(&(&x(3, 0).pow(2) * &x(3, 1)) + &(&c(3, 3) * &x(3, 0))) + &x(3, 2)) + &c(3, 1);
        assert_eq!(p.eval(&[rat(1), rat(2), rat(3)]).unwrap(), rat(9));
        assert!(p.eval(&[rat(1)]).is_err());
        assert_eq!(Poly::zero(0).eval(&[]).unwrap(), rat(0));
    }

    #[test]
    fn partials() {
        let p = &x(2, 0).pow(3) * &x(2, 1);
        assert_eq!(p.partial(0), (&x(2, 0).pow(2) * &x(2, 1)).scale(&rat(3)));
        assert_eq!(p.partial(1), x(2, 0).pow(3));
        assert!(c(2, 5).partial(1).is_zero());
    }
}
