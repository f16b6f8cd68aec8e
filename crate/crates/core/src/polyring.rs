//! The polynomial ring `S = Sym(V)` in the simple roots, graded with `deg α_i = 2`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::coxeter::GroupElement;
use crate::rational::Rat;

pub type Exponent = Vec<u32>;

/// A polynomial with exact rational coefficients. Invariant: no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl GradedPoly {
    pub fn zero(nvars: usize) -> GradedPoly {
        GradedPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> GradedPoly {
        let mut p = GradedPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> GradedPoly {
        GradedPoly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> GradedPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        GradedPoly::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Exponent, c: Rat) -> GradedPoly {
        let mut p = GradedPoly::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// `Σ c_i α_i`.
    pub fn linear(coeffs: &[Rat]) -> GradedPoly {
        let n = coeffs.len();
        let mut p = GradedPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn linear_int(coeffs: &[i64]) -> GradedPoly {
        GradedPoly::linear(&coeffs.iter().map(|&c| Rat::int(c)).collect::<Vec<_>>())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rat)>) -> GradedPoly {
        let mut p = GradedPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: Exponent, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &GradedPoly) {
        if c.is_zero() {
            return;
        }
        for (e, a) in &other.terms {
            self.add_term(e.clone(), c * a);
        }
    }

    pub fn scale(&self, c: &Rat) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(self.nvars);
        }
        GradedPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Degree of a monomial: twice its exponent sum.
    pub fn monomial_degree(e: &[u32]) -> u32 {
        2 * e.iter().sum::<u32>()
    }

    /// Top degree, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| Self::monomial_degree(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| Self::monomial_degree(e));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> GradedPoly {
        GradedPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| Self::monomial_degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<u32, GradedPoly> {
        let mut out: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(Self::monomial_degree(e))
                .or_insert_with(|| GradedPoly::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn pow(&self, k: u32) -> GradedPoly {
        let mut acc = GradedPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `α_i ↦ images[i]` (each image a polynomial) and expands.
    pub fn substitute(&self, images: &[GradedPoly]) -> GradedPoly {
        let nv = images.first().map_or(self.nvars, GradedPoly::nvars);
        let mut powers: Vec<Vec<GradedPoly>> = images.iter().map(|p| vec![GradedPoly::one(nv), p.clone()]).collect();
        let mut out = GradedPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = GradedPoly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// The automorphism `τ_w` of `S` induced by `λ ↦ w(λ)`.
    pub fn apply_group_element(&self, w: &GroupElement) -> GradedPoly {
        let r = w.rank;
        let images: Vec<GradedPoly> = (0..r)
            .map(|i| GradedPoly::linear(&(0..r).map(|k| Rat::int(w.matrix[k * r + i])).collect::<Vec<_>>()))
            .collect();
        self.substitute(&images)
    }

    /// Exact quotient by a linear form, or `None` when it does not divide.
    pub fn divide_by_linear(&self, a: &LinearForm) -> Option<GradedPoly> {
        let k = a.pivot();
        let ak = Rat::int(a.coords()[k]);
        // rest = a − a_k·α_k
        let mut rest_coeffs: Vec<Rat> = a.coords().iter().map(|&c| Rat::int(c)).collect();
        rest_coeffs[k] = Rat::zero();
        let rest = GradedPoly::linear(&rest_coeffs);
        let mut by_power = self.split_by_variable(k);
        let Some(&top) = by_power.keys().next_back() else {
            return Some(GradedPoly::zero(self.nvars));
        };
        // Synthetic division in α_k over the remaining variables.
        let mut q = GradedPoly::zero(self.nvars);
        let inv = ak.recip();
        let mut carry = GradedPoly::zero(self.nvars);
        for e in (0..=top).rev() {
            let pe = by_power.remove(&e).unwrap_or_else(|| GradedPoly::zero(self.nvars));
            let cur = &pe - &(&rest * &carry);
            if e == 0 {
                if !cur.is_zero() {
                    return None;
                }
                break;
            }
            let qe = cur.scale(&inv);
            q = &q + &qe.times_var_power(k, e - 1);
            carry = qe;
        }
        Some(q)
    }

    /// Normal form modulo `(a)`: the pivot variable of `a` is eliminated.
    pub fn reduce_mod_linear(&self, a: &LinearForm) -> GradedPoly {
        let k = a.pivot();
        if self.terms.keys().all(|e| e[k] == 0) {
            return self.clone();
        }
        let ak = Rat::int(a.coords()[k]);
        let sub: Vec<Rat> = a
            .coords()
            .iter()
            .enumerate()
            .map(|(j, &c)| if j == k { Rat::zero() } else { -(&Rat::int(c) / &ak) })
            .collect();
        let sub = GradedPoly::linear(&sub);
        let by_power = self.split_by_variable(k);
        let mut out = GradedPoly::zero(self.nvars);
        let mut pw = GradedPoly::one(self.nvars);
        let mut cur = 0;
        for (e, pe) in by_power {
            while cur < e {
                pw = &pw * &sub;
                cur += 1;
            }
            out = &out + &(&pe * &pw);
        }
        out
    }

    /// `self = Σ_e p_e α_k^e` with each `p_e` free of `α_k`.
    fn split_by_variable(&self, k: usize) -> BTreeMap<u32, GradedPoly> {
        let mut out: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let p = f[k];
            f[k] = 0;
            out.entry(p).or_insert_with(|| GradedPoly::zero(self.nvars)).terms.insert(f, c.clone());
        }
        out
    }

    fn times_var_power(&self, k: usize, p: u32) -> GradedPoly {
        GradedPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f[k] += p;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Coordinates of the degree-`d` component on [`monomial_basis`].
    pub fn to_vector(&self, d: u32) -> Vec<Rat> {
        let basis = monomial_basis(self.nvars, d);
        let mut v = vec![Rat::zero(); basis.len()];
        for (e, c) in &self.terms {
            if Self::monomial_degree(e) == d {
                v[basis.position(e)] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(nvars: usize, d: u32, v: &[Rat]) -> GradedPoly {
        let basis = monomial_basis(nvars, d);
        let mut p = GradedPoly::zero(nvars);
        for (e, c) in basis.monomials.iter().zip(v) {
            if !c.is_zero() {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "num": big_to_json(&c.numer()), "den": big_to_json(&c.denom())}))
            .collect();
        json!({ "terms": terms })
    }

    /// Common denominator of all coefficients.
    pub fn denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()))
    }
}

fn big_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then by descending exponent vector.
        let mut terms: Vec<(&Exponent, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| Self::monomial_degree(b.0).cmp(&Self::monomial_degree(a.0)).then_with(|| b.0.cmp(a.0)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("a{}", j + 1) } else { format!("a{}^{}", j + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let (mut big, small) =
            if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    // Exponents add under multiplication.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.nvars.max(rhs.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for GradedPoly {
            type Output = GradedPoly;
            fn $method(self, rhs: GradedPoly) -> GradedPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// A nonzero linear form stored primitively: integer entries with gcd 1 and
/// first nonzero entry positive. Two forms span the same line iff they are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    /// Normalizes any nonzero integer vector; `None` for zero.
    pub fn from_ints(v: &[i64]) -> Option<LinearForm> {
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return None;
        }
        let first = *v.iter().find(|&&x| x != 0).unwrap();
        let sign = if first < 0 { -1 } else { 1 };
        Some(LinearForm(v.iter().map(|&x| sign * x / g).collect()))
    }

    /// Normalizes a rational vector; `None` for zero.
    pub fn from_rats(v: &[Rat]) -> Option<LinearForm> {
        let den = crate::rational::common_denominator(v.iter());
        let ints: Vec<BigInt> =
            v.iter().map(|x| (x.to_big() * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return None;
        }
        let first = ints.iter().find(|x| !x.is_zero()).unwrap();
        let g = if first.is_negative() { -g } else { g };
        Some(LinearForm(ints.iter().map(|x| (x / &g).to_i64().expect("linear form fits in i64")).collect()))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Index of the first nonzero coordinate; eliminated by `reduce_mod_linear`.
    pub fn pivot(&self) -> usize {
        self.0.iter().position(|&x| x != 0).unwrap()
    }

    pub fn to_poly(&self) -> GradedPoly {
        GradedPoly::linear_int(&self.0)
    }

    /// Linearly independent from `other` (as lines in `V`).
    pub fn independent_of(&self, other: &LinearForm) -> bool {
        self != other
    }

    pub fn apply(&self, w: &GroupElement) -> LinearForm {
        LinearForm::from_ints(&w.act(&self.0)).unwrap()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Monomials of a fixed degree in a fixed order, with reverse lookup.
#[derive(Debug)]
pub struct MonomialBasis {
    pub monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, e: &[u32]) -> usize {
        self.index[e]
    }
}

fn exponents(nvars: usize, total: u32) -> Vec<Exponent> {
    if nvars == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in exponents(nvars - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type BasisCache<K> = OnceLock<Mutex<HashMap<K, Arc<MonomialBasis>>>>;

/// Basis of `S_d` (empty for odd `d`), cached per `(nvars, d)`.
pub fn monomial_basis(nvars: usize, d: u32) -> Arc<MonomialBasis> {
    static CACHE: BasisCache<(usize, u32)> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&(nvars, d)) {
        return b.clone();
    }
    let monomials = if d % 2 == 1 { Vec::new() } else { exponents(nvars, d / 2) };
    let index = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let b = Arc::new(MonomialBasis { monomials, index });
    cache.lock().unwrap().insert((nvars, d), b.clone());
    b
}

/// Basis of `(S/(a))_d` for a linear form with pivot `pivot`: the monomials free of
/// the pivot variable, which are exactly the normal forms of `reduce_mod_linear`.
pub fn quotient_monomial_basis(nvars: usize, pivot: usize, d: u32) -> Arc<MonomialBasis> {
    static CACHE: BasisCache<(usize, usize, u32)> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&(nvars, pivot, d)) {
        return b.clone();
    }
    let monomials: Vec<Exponent> =
        monomial_basis(nvars, d).monomials.iter().filter(|e| e[pivot] == 0).cloned().collect();
    let index = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let b = Arc::new(MonomialBasis { monomials, index });
    cache.lock().unwrap().insert((nvars, pivot, d), b.clone());
    b
}

/// `dim S_d` for `S` in `n` variables.
pub fn dim_s(n: usize, d: i64) -> usize {
    if d < 0 || d % 2 != 0 {
        return 0;
    }
    let k = (d / 2) as usize;
    binomial(k + n - 1, n - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::WeylGroup;

    fn a(i: usize) -> GradedPoly {
        GradedPoly::var(2, i)
    }

    #[test]
    fn reflections_act_on_roots() {
        let g = WeylGroup::from_label("A2").unwrap();
        let s1 = g.element(g.generator(0));
        assert_eq!(a(0).apply_group_element(s1), -&a(0));
        assert_eq!(a(1).apply_group_element(s1), &a(0) + &a(1));
    }

    #[test]
    fn division_examples() {
        let l1 = LinearForm::from_ints(&[1, 0]).unwrap();
        let p = &(&a(0) * &a(0)) + &(&a(0) * &a(1));
        assert_eq!(p.divide_by_linear(&l1), Some(&a(0) + &a(1)));
        assert_eq!(a(1).divide_by_linear(&l1), None);
        assert_eq!(GradedPoly::zero(2).divide_by_linear(&l1), Some(GradedPoly::zero(2)));
    }

    #[test]
    fn reduction_examples() {
        let sum = LinearForm::from_ints(&[1, 1]).unwrap();
        assert_eq!(a(0).reduce_mod_linear(&sum), -&a(1));
        let l1 = LinearForm::from_ints(&[1, 0]).unwrap();
        assert!(a(0).reduce_mod_linear(&l1).is_zero());
        let l2 = LinearForm::from_ints(&[0, 1]).unwrap();
        assert_eq!(a(0).reduce_mod_linear(&l2), a(0));
    }

    #[test]
    fn linear_forms_are_primitive() {
        assert_eq!(LinearForm::from_ints(&[-2, -4]).unwrap().coords(), &[1, 2]);
        assert_eq!(LinearForm::from_rats(&[Rat::new(1, 2), Rat::new(-3, 4)]).unwrap().coords(), &[2, -3]);
        assert!(LinearForm::from_ints(&[0, 0]).is_none());
    }

    #[test]
    fn rendering_and_vectors() {
        let p = &(&a(0) * &a(0)).scale(&Rat::new(1, 2)) - &a(1);
        assert_eq!(p.to_string(), "1/2*a1^2 - a2");
        let q = &a(0) * &a(1);
        assert_eq!(GradedPoly::from_vector(2, 4, &q.to_vector(4)), q);
        assert_eq!(monomial_basis(3, 4).len(), dim_s(3, 4));
        assert_eq!(dim_s(2, 6), 4);
    }
}
