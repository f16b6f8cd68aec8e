//! Finite Weyl groups realized on the root lattice.
//!
//! Elements are integer matrices in the simple-root basis: column `j` of `w`
//! holds the coordinates of `w(α_j)`. The convention for the Cartan matrix is
//! `s_i(α_j) = α_j − a_ij·α_i`. Generators are indexed from 0 internally and
//! from 1 in every textual form.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Deserialize;

use crate::error::{MgError, Result};
use crate::rational::Rat;

/// Index of an element inside its [`WeylGroup`]; ids are sorted by length, then by
/// lexicographically least reduced word, so `0` is the identity.
pub type ElemId = usize;

pub const DEFAULT_ELEMENT_CAP: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    pub label: String,
    pub rank: usize,
    /// Row-major `rank × rank`.
    pub matrix: Vec<Vec<i64>>,
}

impl CartanDatum {
    pub fn new(label: impl Into<String>, matrix: Vec<Vec<i64>>) -> Result<CartanDatum> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(MgError::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(MgError::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(MgError::InvalidCartan(format!("diagonal entry ({0},{0}) is {1}", i + 1, a)));
                }
                if i != j {
                    let b = matrix[j][i];
                    if a > 0 {
                        return Err(MgError::InvalidCartan(format!("entry ({},{}) is positive", i + 1, j + 1)));
                    }
                    if (a == 0) != (b == 0) {
                        return Err(MgError::InvalidCartan(format!(
                            "entries ({},{}) and ({},{}) disagree on vanishing",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                    // a·b = 4 would give an affine rank-2 subsystem.
                    if a * b > 3 {
                        return Err(MgError::InvalidCartan(format!(
                            "entries ({},{}) and ({},{}) do not define a finite dihedral subgroup",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(CartanDatum { label: label.into(), rank, matrix })
    }

    /// Built-in types: `An`, `Bn`, `Cn`, `Dn`, `G2`, `F4` and products joined by `x`, e.g. `A1xA1`.
    pub fn from_label(label: &str) -> Result<CartanDatum> {
        let parts: Vec<&str> = label.split(['x', 'X', '×']).map(str::trim).collect();
        let mut blocks = Vec::new();
        for p in &parts {
            blocks.push(irreducible(p).ok_or_else(|| MgError::UnknownType(label.to_string()))?);
        }
        let rank: usize = blocks.iter().map(Vec::len).sum();
        let mut m = vec![vec![0; rank]; rank];
        let mut off = 0;
        for b in &blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    m[off + i][off + j] = a;
                }
            }
            off += b.len();
        }
        CartanDatum::new(parts.join("x"), m)
    }

    /// Reads `[types.<label>] matrix = [[..], ..]` from a TOML document.
    pub fn from_config(toml_text: &str, label: &str) -> Result<CartanDatum> {
        #[derive(Deserialize)]
        struct Entry {
            matrix: Vec<Vec<i64>>,
        }
        #[derive(Deserialize)]
        struct Config {
            types: HashMap<String, Entry>,
        }
        let cfg: Config = toml::from_str(toml_text).map_err(|e| MgError::Config(e.to_string()))?;
        let entry = cfg.types.get(label).ok_or_else(|| MgError::UnknownType(label.to_string()))?;
        CartanDatum::new(label, entry.matrix.clone())
    }

    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.matrix.hash(&mut h);
        h.finish()
    }

    /// Matrix of `s_i` acting on the root lattice, row-major.
    pub fn simple_reflection(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let mut m = vec![0; r * r];
        for j in 0..r {
            m[j * r + j] = 1;
            m[i * r + j] -= self.matrix[i][j];
        }
        m
    }

    /// Fundamental weights in the simple-root basis: entry `[i][k]` is the
    /// `α_k`-coordinate of `ϖ_i`, so that `s_j(ϖ_i) = ϖ_i − δ_ij α_j`.
    pub fn fundamental_weights(&self) -> Vec<Vec<Rat>> {
        let inv = invert_integer_matrix(&self.matrix);
        // ϖ_i is column i of A⁻¹.
        (0..self.rank).map(|i| (0..self.rank).map(|k| inv[k][i].clone()).collect()).collect()
    }
}

fn irreducible(label: &str) -> Option<Vec<Vec<i64>>> {
    let (kind, n) = label.split_at(label.find(|c: char| c.is_ascii_digit())?);
    let n: usize = n.parse().ok()?;
    let chain = |n: usize| {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        m
    };
    match (kind, n) {
        ("A", n) if n >= 1 => Some(chain(n)),
        ("B", n) if n >= 2 => {
            let mut m = chain(n);
            m[n - 1][n - 2] = -2;
            Some(m)
        }
        ("C", n) if n >= 2 => {
            let mut m = chain(n);
            m[n - 2][n - 1] = -2;
            Some(m)
        }
        ("D", n) if n >= 4 => {
            let mut m = chain(n);
            m[n - 2][n - 1] = 0;
            m[n - 1][n - 2] = 0;
            m[n - 3][n - 1] = -1;
            m[n - 1][n - 3] = -1;
            Some(m)
        }
        ("G", 2) => Some(vec![vec![2, -1], vec![-3, 2]]),
        ("F", 4) => {
            let mut m = chain(4);
            m[2][1] = -2;
            Some(m)
        }
        _ => None,
    }
}

fn invert_integer_matrix(a: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rat> = row.iter().map(|&x| Rat::int(x)).collect();
            r.extend((0..n).map(|j| Rat::int((i == j) as i64)));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("Cartan matrix is invertible");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = crate::rational::sub_mul(x, &f, y);
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// A group element with its cached length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// Fingerprint of the Cartan datum the element belongs to.
    pub datum: u64,
    pub rank: usize,
    /// Row-major; column `j` is `w(α_j)`.
    pub matrix: Vec<i64>,
    pub length: usize,
}

impl GroupElement {
    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r).map(|i| (0..r).map(|j| self.matrix[i * r + j] * v[j]).sum()).collect()
    }

    pub fn act_rat(&self, v: &[Rat]) -> Vec<Rat> {
        let r = self.rank;
        (0..r)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, vj) in v.iter().enumerate() {
                    let m = self.matrix[i * r + j];
                    if m != 0 && !vj.is_zero() {
                        acc += &Rat::int(m) * vj;
                    }
                }
                acc
            })
            .collect()
    }
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut c = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x == 0 {
                continue;
            }
            for j in 0..r {
                c[i * r + j] += x * b[k * r + j];
            }
        }
    }
    c
}

/// A finite Weyl group with its multiplication, length and Bruhat tables.
#[derive(Debug)]
pub struct WeylGroup {
    pub cartan: CartanDatum,
    elements: Vec<GroupElement>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<i64>, ElemId>,
    left: Vec<Vec<ElemId>>,
    right: Vec<Vec<ElemId>>,
    inverse: Vec<ElemId>,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
    /// `reflections[k]` is the reflection in `positive_roots[k]`.
    reflections: Vec<ElemId>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl WeylGroup {
    pub fn new(cartan: CartanDatum) -> Result<WeylGroup> {
        WeylGroup::with_cap(cartan, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_label(label: &str) -> Result<WeylGroup> {
        WeylGroup::new(CartanDatum::from_label(label)?)
    }

    pub fn with_cap(cartan: CartanDatum, cap: usize) -> Result<WeylGroup> {
        let r = cartan.rank;
        let gens: Vec<Vec<i64>> = (0..r).map(|i| cartan.simple_reflection(i)).collect();
        let mut identity = vec![0; r * r];
        for i in 0..r {
            identity[i * r + i] = 1;
        }
        // Level-by-level search; within a level, parents are scanned in word
        // order and generators ascending, so the first word found is lex-least.
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        seen.insert(identity.clone(), ());
        let mut levels: Vec<Vec<(Vec<usize>, Vec<i64>)>> = vec![vec![(Vec::new(), identity)]];
        let mut total = 1usize;
        loop {
            let mut next: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
            for (word, m) in levels.last().unwrap() {
                for (s, g) in gens.iter().enumerate() {
                    let y = mat_mul(m, g, r);
                    if seen.contains_key(&y) {
                        continue;
                    }
                    seen.insert(y.clone(), ());
                    let mut w = word.clone();
                    w.push(s);
                    next.push((w, y));
                    total += 1;
                    if total > cap {
                        return Err(MgError::GroupTooLarge(cap));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            levels.push(next);
        }
        let mut elements = Vec::with_capacity(total);
        let mut words = Vec::with_capacity(total);
        let mut index = HashMap::with_capacity(total);
        for (len, level) in levels.into_iter().enumerate() {
            for (w, m) in level {
                index.insert(m.clone(), elements.len());
                elements.push(GroupElement { datum: cartan.fingerprint(), rank: r, matrix: m, length: len });
                words.push(w);
            }
        }
        let n = elements.len();
        let gen_ids: Vec<ElemId> = gens.iter().map(|g| index[g]).collect();
        let mut left = vec![vec![0; r]; n];
        let mut right = vec![vec![0; r]; n];
        let mut inverse = vec![0; n];
        for x in 0..n {
            for s in 0..r {
                left[x][s] = index[&mat_mul(&gens[s], &elements[x].matrix, r)];
                right[x][s] = index[&mat_mul(&elements[x].matrix, &gens[s], r)];
            }
        }
        for x in 0..n {
            let mut y = 0;
            for &s in words[x].iter().rev() {
                y = right[y][s];
            }
            inverse[x] = y;
        }
        let mut positive_roots: Vec<Vec<i64>> = Vec::new();
        let mut refl_of: HashMap<Vec<i64>, ElemId> = HashMap::new();
        for x in 0..n {
            for (i, &gi) in gen_ids.iter().enumerate() {
                let col: Vec<i64> = (0..r).map(|k| elements[x].matrix[k * r + i]).collect();
                if col.iter().all(|&c| c >= 0) && !refl_of.contains_key(&col) {
                    let t = index[&mat_mul(
                        &mat_mul(&elements[x].matrix, &elements[gi].matrix, r),
                        &elements[inverse[x]].matrix,
                        r,
                    )];
                    refl_of.insert(col.clone(), t);
                    positive_roots.push(col);
                }
            }
        }
        positive_roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let reflections = positive_roots.iter().map(|b| refl_of[b]).collect();
        let root_index = positive_roots.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
        let _ = gen_ids;
        Ok(WeylGroup {
            cartan,
            elements,
            words,
            index,
            left,
            right,
            inverse,
            positive_roots,
            root_index,
            reflections,
            bruhat: OnceLock::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn ids(&self) -> std::ops::Range<ElemId> {
        0..self.elements.len()
    }

    pub fn element(&self, x: ElemId) -> &GroupElement {
        &self.elements[x]
    }

    pub fn length(&self, x: ElemId) -> usize {
        self.elements[x].length
    }

    /// Lexicographically least reduced word (0-based generators).
    pub fn word(&self, x: ElemId) -> &[usize] {
        &self.words[x]
    }

    pub fn generator(&self, s: usize) -> ElemId {
        self.left[0][s]
    }

    pub fn longest(&self) -> ElemId {
        self.elements.len() - 1
    }

    /// `s·x`
    pub fn lmul(&self, s: usize, x: ElemId) -> ElemId {
        self.left[x][s]
    }

    /// `x·s`
    pub fn rmul(&self, x: ElemId, s: usize) -> ElemId {
        self.right[x][s]
    }

    pub fn mul(&self, x: ElemId, y: ElemId) -> ElemId {
        self.words[y].iter().fold(x, |acc, &s| self.right[acc][s])
    }

    pub fn inverse(&self, x: ElemId) -> ElemId {
        self.inverse[x]
    }

    pub fn lookup(&self, g: &GroupElement) -> Option<ElemId> {
        if g.datum != self.cartan.fingerprint() {
            return None;
        }
        self.index.get(&g.matrix).copied()
    }

    /// Multiplies two elements given by matrices; the length is read from the
    /// table, which agrees with the inversion count.
    pub fn compose(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let a = self.lookup(x).ok_or(MgError::MismatchedDatum)?;
        let b = self.lookup(y).ok_or(MgError::MismatchedDatum)?;
        Ok(self.elements[self.mul(a, b)].clone())
    }

    pub fn is_left_descent(&self, s: usize, x: ElemId) -> bool {
        self.length(self.lmul(s, x)) < self.length(x)
    }

    pub fn is_right_descent(&self, x: ElemId, s: usize) -> bool {
        self.length(self.rmul(x, s)) < self.length(x)
    }

    pub fn from_word(&self, word: &[usize]) -> Result<ElemId> {
        let mut x = 0;
        for &s in word {
            if s >= self.rank() {
                return Err(MgError::BadGenerator(s + 1));
            }
            x = self.right[x][s];
        }
        Ok(x)
    }

    /// Parses a space-separated 1-based word such as `"1 2 1"`; `""` and `"e"` give
    /// the identity. The word must be reduced.
    pub fn parse_word(&self, text: &str) -> Result<ElemId> {
        let t = text.trim();
        if t.is_empty() || t == "e" {
            return Ok(0);
        }
        let mut word = Vec::new();
        for tok in t.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let k: usize = tok.parse().map_err(|_| MgError::BadWord(text.to_string()))?;
            if k == 0 || k > self.rank() {
                return Err(MgError::BadGenerator(k));
            }
            word.push(k - 1);
        }
        let x = self.from_word(&word)?;
        if self.length(x) != word.len() {
            return Err(MgError::NotReduced(text.to_string()));
        }
        Ok(x)
    }

    /// `"e"` for the identity, otherwise the 1-based reduced word, space separated.
    pub fn word_string(&self, x: ElemId) -> String {
        if x == 0 {
            return "e".to_string();
        }
        self.words[x].iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Reflections in the order of [`positive_roots`](Self::positive_roots).
    pub fn reflections(&self) -> &[ElemId] {
        &self.reflections
    }

    /// The positive root of a reflection.
    pub fn reflection_root(&self, t: ElemId) -> Option<&[i64]> {
        self.reflections.iter().position(|&u| u == t).map(|k| self.positive_roots[k].as_slice())
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, x: ElemId) -> usize {
        let g = &self.elements[x];
        self.positive_roots.iter().filter(|b| g.act(b).iter().any(|&c| c < 0)).count()
    }

    fn bruhat_table(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.size();
            let words = n.div_ceil(64);
            let mut table: Vec<Vec<u64>> = vec![vec![0; words]; n];
            table[0][0] = 1;
            // Ids are sorted by length, so the row of s·y is ready before y.
            for y in 1..n {
                let s = self.words[y][0];
                let sy = self.lmul(s, y);
                let mut row = vec![0u64; words];
                for x in 0..n {
                    let sx = self.lmul(s, x);
                    let m = x.min(sx);
                    if table[sy][m / 64] >> (m % 64) & 1 == 1 {
                        row[x / 64] |= 1 << (x % 64);
                    }
                }
                table[y] = row;
            }
            table
        })
    }

    pub fn bruhat_leq(&self, x: ElemId, y: ElemId) -> bool {
        if self.length(x) > self.length(y) {
            return false;
        }
        self.bruhat_table()[y][x / 64] >> (x % 64) & 1 == 1
    }

    pub fn bruhat_lt(&self, x: ElemId, y: ElemId) -> bool {
        x != y && self.bruhat_leq(x, y)
    }

    /// Parabolic datum for `J` given by 0-based generator indices.
    pub fn parabolic(&self, j: &[usize]) -> Result<ParabolicDatum> {
        ParabolicDatum::new(self, j)
    }
}

impl fmt::Display for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({}) with {} elements", self.cartan.label, self.size())
    }
}

/// `W_J`, its longest element and the minimal coset representatives `W^J`.
#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    /// Sorted, 0-based.
    pub j: Vec<usize>,
    pub w_j_elems: Vec<ElemId>,
    pub w_j: ElemId,
    /// `W^J` in id order.
    pub reps: Vec<ElemId>,
    rep_pos: Vec<Option<usize>>,
    factor: Vec<(ElemId, ElemId)>,
    in_w_j: Vec<bool>,
}

impl ParabolicDatum {
    pub fn new(g: &WeylGroup, j: &[usize]) -> Result<ParabolicDatum> {
        let mut j = j.to_vec();
        j.sort_unstable();
        j.dedup();
        if let Some(&bad) = j.iter().find(|&&s| s >= g.rank()) {
            return Err(MgError::BadGenerator(bad + 1));
        }
        let n = g.size();
        let mut factor = vec![(0, 0); n];
        let mut rep_pos = vec![None; n];
        let mut reps = Vec::new();
        let mut in_w_j = vec![false; n];
        for x in g.ids() {
            let mut m = x;
            'strip: loop {
                for &s in &j {
                    let ms = g.rmul(m, s);
                    if g.length(ms) < g.length(m) {
                        m = ms;
                        continue 'strip;
                    }
                }
                break;
            }
            factor[x] = (m, g.mul(g.inverse(m), x));
            if m == x {
                rep_pos[x] = Some(reps.len());
                reps.push(x);
            }
            if m == 0 {
                in_w_j[x] = true;
            }
        }
        let w_j_elems: Vec<ElemId> = g.ids().filter(|&x| in_w_j[x]).collect();
        let w_j = *w_j_elems.iter().max_by_key(|&&x| g.length(x)).unwrap();
        Ok(ParabolicDatum { j, w_j_elems, w_j, reps, rep_pos, factor, in_w_j })
    }

    pub fn is_regular(&self) -> bool {
        self.j.is_empty()
    }

    pub fn contains_generator(&self, s: usize) -> bool {
        self.j.binary_search(&s).is_ok()
    }

    pub fn is_rep(&self, x: ElemId) -> bool {
        self.rep_pos[x].is_some()
    }

    /// Position of `x` in [`reps`](Self::reps).
    pub fn rep_position(&self, x: ElemId) -> Option<usize> {
        self.rep_pos[x]
    }

    pub fn in_parabolic_subgroup(&self, x: ElemId) -> bool {
        self.in_w_j[x]
    }

    /// `x = x^J · x_J` with `x^J ∈ W^J`, `x_J ∈ W_J`.
    pub fn factorize(&self, x: ElemId) -> (ElemId, ElemId) {
        self.factor[x]
    }

    pub fn min_rep(&self, x: ElemId) -> ElemId {
        self.factor[x].0
    }

    pub fn coset_factorize(&self, g: &WeylGroup, x: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        let id = g.lookup(x).ok_or(MgError::MismatchedDatum)?;
        let (a, b) = self.factor[id];
        Ok((g.element(a).clone(), g.element(b).clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashSet, VecDeque};

    /// All reduced words by brute force, independent of the table construction.
    fn words_oracle(g: &WeylGroup) -> HashMap<Vec<i64>, usize> {
        let r = g.rank();
        let gens: Vec<Vec<i64>> = (0..r).map(|i| g.cartan.simple_reflection(i)).collect();
        let mut id = vec![0; r * r];
        for i in 0..r {
            id[i * r + i] = 1;
        }
        let mut dist = HashMap::new();
        dist.insert(id.clone(), 0usize);
        let mut q = VecDeque::from([id]);
        while let Some(m) = q.pop_front() {
            let d = dist[&m];
            for s in &gens {
                let y = mat_mul(s, &m, r);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    q.push_back(y);
                }
            }
        }
        dist
    }

    fn subwords(word: &[usize], g: &WeylGroup) -> HashSet<ElemId> {
        let mut out = HashSet::new();
        for mask in 0u32..(1 << word.len()) {
            let w: Vec<usize> = (0..word.len()).filter(|i| mask >> i & 1 == 1).map(|i| word[i]).collect();
            out.insert(g.from_word(&w).unwrap());
        }
        out
    }

    #[test]
    fn sizes_and_length_profiles() {
        let a1 = WeylGroup::from_label("A1").unwrap();
        assert_eq!(a1.size(), 2);
        let a2 = WeylGroup::from_label("A2").unwrap();
        let mut prof = [0; 4];
        for x in a2.ids() {
            prof[a2.length(x)] += 1;
        }
        assert_eq!(prof, [1, 2, 2, 1]);
        let b2 = WeylGroup::from_label("B2").unwrap();
        assert_eq!(b2.size(), 8);
        assert_eq!(b2.length(b2.longest()), 4);
        assert_eq!(WeylGroup::from_label("G2").unwrap().size(), 12);
        assert_eq!(WeylGroup::from_label("A3").unwrap().size(), 24);
        assert_eq!(WeylGroup::from_label("A1xA1").unwrap().size(), 4);
        assert_eq!(WeylGroup::from_label("B3").unwrap().size(), 48);
        assert_eq!(WeylGroup::from_label("D4").unwrap().size(), 192);
    }

    #[test]
    fn lengths_agree_with_word_oracle_and_inversions() {
        for label in ["A1", "A2", "B2", "G2", "A3", "A1xA1", "C3"] {
            let g = WeylGroup::from_label(label).unwrap();
            let oracle = words_oracle(&g);
            assert_eq!(oracle.len(), g.size());
            for x in g.ids() {
                assert_eq!(oracle[&g.element(x).matrix], g.length(x));
                assert_eq!(g.inversion_count(x), g.length(x));
                assert_eq!(g.word(x).len(), g.length(x));
            }
        }
    }

    #[test]
    fn basic_relations() {
        let g = WeylGroup::from_label("A2").unwrap();
        let s1 = g.generator(0);
        assert_eq!(g.mul(s1, s1), 0);
        assert_eq!(g.element(s1).act(&[1, 0]), vec![-1, 0]);
        assert_eq!(g.element(s1).act(&[0, 1]), vec![1, 1]);
        assert_eq!(g.length(g.parse_word("1 2 1").unwrap()), 3);
        assert!(matches!(g.parse_word("1 1"), Err(MgError::NotReduced(_))));
        assert!(matches!(g.parse_word("3"), Err(MgError::BadGenerator(3))));
        let x = g.element(g.parse_word("1 2").unwrap()).clone();
        let y = g.element(g.parse_word("1").unwrap()).clone();
        assert_eq!(g.compose(&x, &y).unwrap().length, 3);
        let other = WeylGroup::from_label("B2").unwrap();
        assert_eq!(g.compose(&x, other.element(1)), Err(MgError::MismatchedDatum));
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for label in ["A2", "B2", "A3", "G2"] {
            let g = WeylGroup::from_label(label).unwrap();
            for y in g.ids() {
                let below = subwords(g.word(y), &g);
                for x in g.ids() {
                    assert_eq!(g.bruhat_leq(x, y), below.contains(&x), "{label} {x} {y}");
                }
            }
        }
        let g = WeylGroup::from_label("A2").unwrap();
        let s1 = g.parse_word("1").unwrap();
        assert!(g.bruhat_leq(s1, g.parse_word("1 2").unwrap()));
        assert!(!g.bruhat_leq(s1, g.parse_word("2").unwrap()));
    }

    #[test]
    fn reflections_match_conjugation_oracle() {
        for (label, count) in [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6)] {
            let g = WeylGroup::from_label(label).unwrap();
            let mut conj = BTreeSet::new();
            for w in g.ids() {
                for s in 0..g.rank() {
                    conj.insert(g.mul(g.mul(w, g.generator(s)), g.inverse(w)));
                }
            }
            assert_eq!(conj.len(), count);
            let mine: BTreeSet<ElemId> = g.reflections().iter().copied().collect();
            assert_eq!(mine, conj);
            for (t, root) in g.reflections().iter().zip(g.positive_roots()) {
                let neg: Vec<i64> = root.iter().map(|c| -c).collect();
                assert_eq!(g.element(*t).act(root), neg);
            }
        }
    }

    #[test]
    fn b2_positive_roots() {
        let g = WeylGroup::from_label("B2").unwrap();
        let roots: BTreeSet<Vec<i64>> = g.positive_roots().iter().cloned().collect();
        let expect: BTreeSet<Vec<i64>> = [vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]].into_iter().collect();
        assert_eq!(roots, expect);
    }

    #[test]
    fn fundamental_weights_are_dual() {
        for label in ["A2", "B2", "G2", "A3", "C3"] {
            let c = CartanDatum::from_label(label).unwrap();
            let g = WeylGroup::new(c.clone()).unwrap();
            let w = c.fundamental_weights();
            for (i, wi) in w.iter().enumerate() {
                for j in 0..c.rank {
                    let img = g.element(g.generator(j)).act_rat(wi);
                    let mut expect = wi.clone();
                    if i == j {
                        expect[j] -= &Rat::int(1);
                    }
                    assert_eq!(img, expect);
                }
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        let g = WeylGroup::from_label("A2").unwrap();
        let pd = g.parabolic(&[0]).unwrap();
        assert_eq!(pd.reps.len() * pd.w_j_elems.len(), g.size());
        let sb_sa = g.parse_word("2 1").unwrap();
        assert_eq!(pd.factorize(sb_sa), (g.parse_word("2").unwrap(), g.parse_word("1").unwrap()));
        assert_eq!(pd.factorize(g.parse_word("1").unwrap()), (0, g.parse_word("1").unwrap()));
        assert_eq!(pd.min_rep(g.parse_word("1 2 1").unwrap()), g.parse_word("1 2").unwrap());
        let reg = g.parabolic(&[]).unwrap();
        for x in g.ids() {
            assert_eq!(reg.factorize(x), (x, 0));
        }
    }

    #[test]
    fn config_loading() {
        let text = "[types.X]\nmatrix = [[2, -1], [-3, 2]]\n";
        let c = CartanDatum::from_config(text, "X").unwrap();
        assert_eq!(WeylGroup::new(c).unwrap().size(), 12);
        assert!(CartanDatum::new("bad", vec![vec![2, -2], vec![-2, 2]]).is_err());
        assert!(CartanDatum::new("bad", vec![vec![2, 0], vec![-1, 2]]).is_err());
        assert_eq!(CartanDatum::from_label("Q7"), Err(MgError::UnknownType("Q7".into())));
    }

    #[test]
    fn cap_is_enforced() {
        let c = CartanDatum::from_label("A4").unwrap();
        assert_eq!(WeylGroup::with_cap(c, 100).unwrap_err(), MgError::GroupTooLarge(100));
    }
}
