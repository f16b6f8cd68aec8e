//! The Hecke algebra, the parabolic module `M^J` for the sign `u = v⁻¹`, and
//! their canonical bases.
//!
//! Relations: `H_s H_x = H_{sx}` if `sx > x` and `(v⁻¹ − v)H_x + H_{sx}` otherwise.
//! The self-dual element attached to a simple reflection is `H̲_s = H_s + v`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::coxeter::{ElemId, ParabolicDatum, WeylGroup};
use crate::error::{MgError, Result};

/// An integer Laurent polynomial in `v`. Invariant: no stored zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, 1)
    }

    pub fn v() -> LaurentPoly {
        LaurentPoly::monomial(1, 1)
    }

    pub fn v_inv() -> LaurentPoly {
        LaurentPoly::monomial(-1, 1)
    }

    pub fn monomial(exp: i32, c: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, c);
        p
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, i64)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// `v ↦ v⁻¹`.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        if c == 0 {
            return LaurentPoly::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &a)| (e, a * c)).collect() }
    }

    /// Lies in `vℤ[v]`.
    pub fn in_v_z_v(&self) -> bool {
        self.coeffs.keys().all(|&e| e >= 1)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|&c| c > 0)
    }

    /// The bar-invariant polynomial agreeing with `self` in all exponents `≤ 0`.
    pub fn symmetric_nonpositive_part(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&e, &c) in &self.coeffs {
            if e <= 0 {
                p.add_term(e, c);
                if e < 0 {
                    p.add_term(-e, c);
                }
            }
        }
        p
    }

    /// JSON form: `[[exponent, coefficient], ...]` sorted by exponent.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|(&e, &c)| json!([e, c])).collect())
    }

    pub fn from_json(v: &Value) -> Option<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for pair in v.as_array()? {
            let a = pair.as_array()?;
            p.add_term(a.first()?.as_i64()? as i32, a.get(1)?.as_i64()?);
        }
        Some(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.coeffs.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "v")?,
                (1, m) => write!(f, "{m}v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, m) => write!(f, "{m}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.coeffs {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.coeffs {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_laurent_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_laurent_ops!(Add add, Sub sub, Mul mul);

/// A finite `𝓛`-combination of basis elements indexed by group elements.
///
/// Used both for the Hecke algebra (keys in `W`) and for `M^J` (keys in `W^J`).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Combination {
    terms: BTreeMap<ElemId, LaurentPoly>,
}

pub type HeckeElement = Combination;
pub type ParabolicElement = Combination;

impl Combination {
    pub fn zero() -> Combination {
        Combination::default()
    }

    pub fn basis(x: ElemId) -> Combination {
        Combination::term(x, LaurentPoly::one())
    }

    pub fn term(x: ElemId, p: LaurentPoly) -> Combination {
        let mut c = Combination::zero();
        c.add_term(x, &p);
        c
    }

    pub fn add_term(&mut self, x: ElemId, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(x).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, p: &LaurentPoly, other: &Combination) {
        if p.is_zero() {
            return;
        }
        for (&x, q) in &other.terms {
            self.add_term(x, &(p * q));
        }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Combination {
        let mut out = Combination::zero();
        out.add_scaled(p, self);
        out
    }

    pub fn coeff(&self, x: ElemId) -> LaurentPoly {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElemId, &LaurentPoly)> {
        self.terms.iter().map(|(&x, p)| (x, p))
    }

    pub fn support(&self) -> Vec<ElemId> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, g: &WeylGroup) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&x, p)| {
                let h = format!("H({})", g.word_string(x));
                if *p == LaurentPoly::one() {
                    h
                } else {
                    format!("({p}){h}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `[{"element": word, "coeff": [[e, c], ...]}, ...]` in id order.
    pub fn to_json(&self, g: &WeylGroup) -> Value {
        Value::Array(
            self.terms.iter().map(|(&x, p)| json!({"element": g.word_string(x), "coeff": p.to_json()})).collect(),
        )
    }
}

impl fmt::Debug for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Add for &Combination {
    type Output = Combination;
    fn add(self, rhs: &Combination) -> Combination {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::one(), rhs);
        out
    }
}

impl Sub for &Combination {
    type Output = Combination;
    fn sub(self, rhs: &Combination) -> Combination {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::monomial(0, -1), rhs);
        out
    }
}

/// The Hecke algebra of a Weyl group with lazily built tables.
pub struct Hecke<'g> {
    pub group: &'g WeylGroup,
    bar_std: OnceLock<Vec<HeckeElement>>,
    kl: OnceLock<Vec<HeckeElement>>,
}

impl<'g> Hecke<'g> {
    pub fn new(group: &'g WeylGroup) -> Hecke<'g> {
        Hecke { group, bar_std: OnceLock::new(), kl: OnceLock::new() }
    }

    /// `H_s · h`.
    pub fn mul_hs_left(&self, s: usize, h: &HeckeElement) -> HeckeElement {
        let g = self.group;
        let mut out = Combination::zero();
        let diff = &LaurentPoly::v_inv() - &LaurentPoly::v();
        for (x, p) in h.terms() {
            let sx = g.lmul(s, x);
            out.add_term(sx, p);
            if g.length(sx) < g.length(x) {
                out.add_term(x, &(&diff * p));
            }
        }
        out
    }

    /// `H̲_s · h` with `H̲_s = H_s + v`.
    pub fn mul_kl_s_left(&self, s: usize, h: &HeckeElement) -> HeckeElement {
        let mut out = self.mul_hs_left(s, h);
        out.add_scaled(&LaurentPoly::v(), h);
        out
    }

    /// `H_x · h`, expanding `H_x` along a reduced word.
    pub fn mul_basis_left(&self, x: ElemId, h: &HeckeElement) -> HeckeElement {
        let mut out = h.clone();
        for &s in self.group.word(x).iter().rev() {
            out = self.mul_hs_left(s, &out);
        }
        out
    }

    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = Combination::zero();
        for (x, p) in a.terms() {
            out.add_scaled(p, &self.mul_basis_left(x, b));
        }
        out
    }

    /// `bar(H_x) = H_{x⁻¹}⁻¹`, built as `bar(H_s)·bar(H_{sx})` for a left descent `s`.
    fn bar_table(&self) -> &Vec<HeckeElement> {
        self.bar_std.get_or_init(|| {
            let g = self.group;
            let mut table: Vec<HeckeElement> = Vec::with_capacity(g.size());
            table.push(Combination::basis(0));
            let v_diff = &LaurentPoly::v() - &LaurentPoly::v_inv();
            for x in 1..g.size() {
                let s = g.word(x)[0];
                let prev = &table[g.lmul(s, x)];
                let mut h = self.mul_hs_left(s, prev);
                h.add_scaled(&v_diff, prev);
                table.push(h);
            }
            table
        })
    }

    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let table = self.bar_table();
        let mut out = Combination::zero();
        for (x, p) in h.terms() {
            out.add_scaled(&p.bar(), &table[x]);
        }
        out
    }

    fn kl_table(&self) -> &Vec<HeckeElement> {
        self.kl.get_or_init(|| {
            let g = self.group;
            let mut table: Vec<HeckeElement> = Vec::with_capacity(g.size());
            table.push(Combination::basis(0));
            for w in 1..g.size() {
                let s = g.word(w)[0];
                let c = self.mul_kl_s_left(s, &table[g.lmul(s, w)]);
                let fixed = correct_to_canonical(c, w, |z| &table[z]);
                table.push(fixed);
            }
            table
        })
    }

    /// The Kazhdan–Lusztig basis element `H̲_w`.
    pub fn kl_basis(&self, w: ElemId) -> HeckeElement {
        self.kl_table()[w].clone()
    }

    /// `i: M^J → H`, `H^J_x ↦ Σ_{z ∈ W_J} v^{ℓ(w_J) − ℓ(z)} H_{xz}`.
    pub fn embed_i(&self, m: &ParabolicElement, pd: &ParabolicDatum) -> Result<HeckeElement> {
        let g = self.group;
        let top = g.length(pd.w_j) as i32;
        let mut out = Combination::zero();
        for (x, p) in m.terms() {
            if !pd.is_rep(x) {
                return Err(MgError::NotInQuotient);
            }
            for &z in &pd.w_j_elems {
                out.add_term(g.mul(x, z), &p.shift(top - g.length(z) as i32));
            }
        }
        Ok(out)
    }
}

/// Subtracts the bar-invariant multiples of lower canonical elements from a
/// bar-invariant `c` whose top term is `H_w`, leaving only `vℤ[v]` coefficients.
fn correct_to_canonical<'a>(
    mut c: Combination,
    w: ElemId,
    canonical: impl Fn(ElemId) -> &'a Combination,
) -> Combination {
    // Ids are sorted by length, so descending id order handles longer elements first.
    let lower: Vec<ElemId> = c.support().into_iter().filter(|&z| z != w).rev().collect();
    for z in lower {
        let p = c.coeff(z).symmetric_nonpositive_part();
        if !p.is_zero() {
            c.add_scaled(&-&p, canonical(z));
        }
    }
    c
}

/// The parabolic module `M^J` with basis `H^J_x`, `x ∈ W^J`.
pub struct ParabolicModule<'g> {
    pub group: &'g WeylGroup,
    pub pd: &'g ParabolicDatum,
    bar_std: OnceLock<Vec<ParabolicElement>>,
    deodhar: OnceLock<Vec<ParabolicElement>>,
}

impl<'g> ParabolicModule<'g> {
    pub fn new(group: &'g WeylGroup, pd: &'g ParabolicDatum) -> ParabolicModule<'g> {
        ParabolicModule { group, pd, bar_std: OnceLock::new(), deodhar: OnceLock::new() }
    }

    /// `H̲_s · m`, three cases according to whether `sx ∈ W^J`.
    pub fn act_kl_s(&self, s: usize, m: &ParabolicElement) -> Result<ParabolicElement> {
        let g = self.group;
        let mut out = Combination::zero();
        for (x, p) in m.terms() {
            if !self.pd.is_rep(x) {
                return Err(MgError::NotInQuotient);
            }
            let sx = g.lmul(s, x);
            if self.pd.is_rep(sx) {
                out.add_term(sx, p);
                let e = if g.length(sx) > g.length(x) { 1 } else { -1 };
                out.add_term(x, &p.shift(e));
            } else {
                out.add_term(x, &(p.shift(1) + p.shift(-1)));
            }
        }
        Ok(out)
    }

    /// `H_s · m = H̲_s·m − v·m`.
    pub fn act_hs(&self, s: usize, m: &ParabolicElement) -> Result<ParabolicElement> {
        let mut out = self.act_kl_s(s, m)?;
        out.add_scaled(&LaurentPoly::monomial(1, -1), m);
        Ok(out)
    }

    fn bar_table(&self) -> &Vec<ParabolicElement> {
        self.bar_std.get_or_init(|| {
            let g = self.group;
            let mut table: Vec<ParabolicElement> = Vec::with_capacity(self.pd.reps.len());
            // bar(H^J_x) = bar(H_s)·bar(H^J_{sx}) with bar(H_s) = H̲_s − v⁻¹.
            for &x in &self.pd.reps {
                if x == 0 {
                    table.push(Combination::basis(0));
                    continue;
                }
                let s = g.word(x)[0];
                let prev = &table[self.pd.rep_position(g.lmul(s, x)).unwrap()];
                let mut h = self.act_kl_s(s, prev).expect("keys are representatives");
                h.add_scaled(&LaurentPoly::monomial(-1, -1), prev);
                table.push(h);
            }
            table
        })
    }

    pub fn bar(&self, m: &ParabolicElement) -> Result<ParabolicElement> {
        let table = self.bar_table();
        let mut out = Combination::zero();
        for (x, p) in m.terms() {
            let pos = self.pd.rep_position(x).ok_or(MgError::NotInQuotient)?;
            out.add_scaled(&p.bar(), &table[pos]);
        }
        Ok(out)
    }

    fn deodhar_table(&self) -> &Vec<ParabolicElement> {
        self.deodhar.get_or_init(|| {
            let g = self.group;
            let mut table: Vec<ParabolicElement> = Vec::with_capacity(self.pd.reps.len());
            let mut by_id: Vec<Option<usize>> = vec![None; g.size()];
            for &w in &self.pd.reps {
                let elem = if w == 0 {
                    Combination::basis(0)
                } else {
                    let s = g.word(w)[0];
                    let prev = &table[by_id[g.lmul(s, w)].unwrap()];
                    let c = self.act_kl_s(s, prev).expect("keys are representatives");
                    correct_to_canonical(c, w, |z| &table[by_id[z].expect("lower terms are representatives")])
                };
                by_id[w] = Some(table.len());
                table.push(elem);
            }
            table
        })
    }

    /// Deodhar's canonical element `H̲^J_w`.
    pub fn deodhar_basis(&self, w: ElemId) -> Result<ParabolicElement> {
        let pos = self.pd.rep_position(w).ok_or(MgError::NotInQuotient)?;
        Ok(self.deodhar_table()[pos].clone())
    }

    /// `H̲_{s_1}⋯H̲_{s_k}·H^J_e` along the lexicographically least reduced word of `w`.
    pub fn bott_samelson(&self, w: ElemId) -> Result<ParabolicElement> {
        if !self.pd.is_rep(w) {
            return Err(MgError::NotInQuotient);
        }
        let mut m = Combination::basis(0);
        for &s in self.group.word(w).iter().rev() {
            m = self.act_kl_s(s, &m)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn laurent_rendering() {
        assert_eq!(lp(&[(-1, 1), (0, 2), (3, 1)]).to_string(), "v^-1 + 2 + v^3");
        assert_eq!(lp(&[(1, -2), (2, 1)]).to_string(), "-2v + v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        let p = lp(&[(-2, 3), (1, -1)]);
        assert_eq!(LaurentPoly::from_json(&p.to_json()), Some(p.clone()));
        assert_eq!(p.to_json().to_string(), "[[-2,3],[1,-1]]");
    }

    #[test]
    fn bar_of_generators() {
        let g = WeylGroup::from_label("A1").unwrap();
        let h = Hecke::new(&g);
        let sym = lp(&[(-1, 1), (1, 1)]);
        assert_eq!(sym.bar(), sym);
        assert_eq!(h.bar(&Combination::basis(0)), Combination::basis(0));
        let mut expect = Combination::basis(1);
        expect.add_term(0, &lp(&[(1, 1), (-1, -1)]));
        assert_eq!(h.bar(&Combination::basis(1)), expect);
    }

    #[test]
    fn quadratic_relation() {
        let g = WeylGroup::from_label("A1").unwrap();
        let h = Hecke::new(&g);
        assert_eq!(h.mul_hs_left(0, &Combination::basis(0)), Combination::basis(1));
        let mut expect = Combination::term(1, lp(&[(-1, 1), (1, -1)]));
        expect.add_term(0, &LaurentPoly::one());
        assert_eq!(h.mul_hs_left(0, &Combination::basis(1)), expect);
        let mut expect = Combination::term(1, LaurentPoly::v_inv());
        expect.add_term(0, &LaurentPoly::one());
        assert_eq!(h.mul_kl_s_left(0, &Combination::basis(1)), expect);
    }

    #[test]
    fn kl_basis_of_s3_longest() {
        let g = WeylGroup::from_label("A2").unwrap();
        let h = Hecke::new(&g);
        let w0 = g.longest();
        let c = h.kl_basis(w0);
        for y in g.ids() {
            assert_eq!(c.coeff(y), LaurentPoly::monomial(3 - g.length(y) as i32, 1));
        }
        let mut hs = Combination::basis(1);
        hs.add_term(0, &LaurentPoly::v());
        assert_eq!(h.kl_basis(1), hs);
    }

    #[test]
    fn parabolic_action_cases() {
        let g = WeylGroup::from_label("A2").unwrap();
        let pd = g.parabolic(&[0]).unwrap();
        let m = ParabolicModule::new(&g, &pd);
        let sb = g.parse_word("2").unwrap();
        let e = Combination::basis(0);
        assert_eq!(m.act_kl_s(0, &e).unwrap(), Combination::term(0, lp(&[(-1, 1), (1, 1)])));
        let mut expect = Combination::basis(sb);
        expect.add_term(0, &LaurentPoly::v());
        assert_eq!(m.act_kl_s(1, &e).unwrap(), expect);
        assert_eq!(m.deodhar_basis(sb).unwrap(), expect);
        let mut expect = Combination::basis(0);
        expect.add_term(sb, &LaurentPoly::v_inv());
        assert_eq!(m.act_kl_s(1, &Combination::basis(sb)).unwrap(), expect);
        assert!(m.deodhar_basis(g.parse_word("1").unwrap()).is_err());
    }

    #[test]
    fn embedding_examples() {
        let g = WeylGroup::from_label("A2").unwrap();
        let h = Hecke::new(&g);
        let pd = g.parabolic(&[0]).unwrap();
        let sa = g.parse_word("1").unwrap();
        let sb = g.parse_word("2").unwrap();
        let mut expect = Combination::term(0, LaurentPoly::v());
        expect.add_term(sa, &LaurentPoly::one());
        assert_eq!(h.embed_i(&Combination::basis(0), &pd).unwrap(), expect);
        let mut expect = Combination::term(sb, LaurentPoly::v());
        expect.add_term(g.parse_word("2 1").unwrap(), &LaurentPoly::one());
        assert_eq!(h.embed_i(&Combination::basis(sb), &pd).unwrap(), expect);
        let reg = g.parabolic(&[]).unwrap();
        for x in g.ids() {
            assert_eq!(h.embed_i(&Combination::basis(x), &reg).unwrap(), Combination::basis(x));
        }
    }
}
