//! Sheaves on moment graphs.
//!
//! A stalk is a graded free `S`-module recorded by its generator degrees, an edge
//! module is a free `S/l(E)`-module, and a restriction map is a matrix of
//! polynomials (rows index target generators, columns source generators). Every
//! module computation is degreewise linear algebra over ℚ.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::coxeter::ParabolicDatum;
use crate::error::{MgError, Result};
use crate::graph::{EdgeId, MomentGraph};
use crate::linalg::{self, EchelonBasis, Vector};
use crate::polyring::{monomial_basis, quotient_monomial_basis, GradedPoly, LinearForm, MonomialBasis};
use crate::rational::Rat;
use crate::zmod::EmbeddedModule;

pub type PolyMatrix = Vec<Vec<GradedPoly>>;

/// An element of a free module: one coefficient polynomial per generator.
pub type Element = Vec<GradedPoly>;

/// `⊕ S·e_i` with `deg e_i = degrees[i]`, taken modulo `modulus` when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFree {
    pub nvars: usize,
    pub degrees: Vec<i32>,
    pub modulus: Option<LinearForm>,
}

impl GradedFree {
    pub fn free(nvars: usize, degrees: Vec<i32>) -> GradedFree {
        GradedFree { nvars, degrees, modulus: None }
    }

    pub fn quotient(nvars: usize, degrees: Vec<i32>, l: LinearForm) -> GradedFree {
        GradedFree { nvars, degrees, modulus: Some(l) }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    fn slice(&self, e: i32) -> Option<Arc<MonomialBasis>> {
        if e < 0 {
            return None;
        }
        Some(match &self.modulus {
            None => monomial_basis(self.nvars, e as u32),
            Some(l) => quotient_monomial_basis(self.nvars, l.pivot(), e as u32),
        })
    }

    pub fn dim(&self, d: i32) -> usize {
        self.degrees.iter().map(|&k| self.slice(d - k).map_or(0, |b| b.len())).sum()
    }

    pub fn zero(&self) -> Element {
        vec![GradedPoly::zero(self.nvars); self.rank()]
    }

    pub fn normalize(&self, m: Element) -> Element {
        match &self.modulus {
            None => m,
            Some(l) => m.iter().map(|p| p.reduce_mod_linear(l)).collect(),
        }
    }

    pub fn is_zero_element(&self, m: &[GradedPoly]) -> bool {
        match &self.modulus {
            None => m.iter().all(GradedPoly::is_zero),
            Some(l) => m.iter().all(|p| p.reduce_mod_linear(l).is_zero()),
        }
    }

    /// Coordinates of the degree-`d` part of `m`.
    pub fn coords(&self, m: &[GradedPoly], d: i32) -> Vector {
        let mut out = Vec::with_capacity(self.dim(d));
        for (p, &k) in m.iter().zip(&self.degrees) {
            let Some(b) = self.slice(d - k) else { continue };
            if b.is_empty() {
                continue;
            }
            let reduced;
            let p = match &self.modulus {
                None => p,
                Some(l) => {
                    reduced = p.reduce_mod_linear(l);
                    &reduced
                }
            };
            let start = out.len();
            out.resize(start + b.len(), Rat::zero());
            for (e, c) in p.terms() {
                if GradedPoly::monomial_degree(e) as i32 == d - k {
                    out[start + b.position(e)] = c.clone();
                }
            }
        }
        out
    }

    pub fn from_coords(&self, v: &[Rat], d: i32) -> Element {
        let mut pos = 0;
        self.degrees
            .iter()
            .map(|&k| {
                let mut p = GradedPoly::zero(self.nvars);
                if let Some(b) = self.slice(d - k) {
                    for e in &b.monomials {
                        if !v[pos].is_zero() {
                            p.add_term(e.clone(), v[pos].clone());
                        }
                        pos += 1;
                    }
                }
                p
            })
            .collect()
    }

    /// The slice basis `μ·e_i` in coordinate order, as `(i, μ)`.
    pub fn basis(&self, d: i32) -> Vec<(usize, GradedPoly)> {
        let mut out = Vec::new();
        for (i, &k) in self.degrees.iter().enumerate() {
            if let Some(b) = self.slice(d - k) {
                out.extend(b.monomials.iter().map(|e| (i, GradedPoly::monomial(e.clone(), Rat::one()))));
            }
        }
        out
    }

    /// `dim M_d` for `d = 0..=bound`.
    pub fn hilbert(&self, bound: i32) -> Vec<usize> {
        (0..=bound).map(|d| self.dim(d)).collect()
    }
}

pub fn scale_element(m: &[GradedPoly], p: &GradedPoly) -> Element {
    m.iter().map(|x| x * p).collect()
}

pub fn apply_matrix(nvars: usize, a: &PolyMatrix, m: &[GradedPoly]) -> Element {
    a.iter()
        .map(|row| {
            let mut acc = GradedPoly::zero(nvars);
            for (x, y) in row.iter().zip(m) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

pub fn identity_matrix(nvars: usize, r: usize) -> PolyMatrix {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { GradedPoly::one(nvars) } else { GradedPoly::zero(nvars) }).collect())
        .collect()
}

fn total_dim(targets: &[GradedFree], d: i32) -> usize {
    targets.iter().map(|t| t.dim(d)).sum()
}

fn sum_coords(targets: &[GradedFree], parts: &[Element], d: i32) -> Vector {
    let mut out = Vec::with_capacity(total_dim(targets, d));
    for (t, m) in targets.iter().zip(parts) {
        out.extend(t.coords(m, d));
    }
    out
}

/// Rows of the degree-`d` slice of `src → ⊕ targets`, one matrix per target.
pub fn map_slice(src: &GradedFree, targets: &[GradedFree], mats: &[&PolyMatrix], d: i32) -> Vec<Vector> {
    let basis = src.basis(d);
    let mut rows = vec![vec![Rat::zero(); basis.len()]; total_dim(targets, d)];
    for (col, (i, mono)) in basis.iter().enumerate() {
        let mut off = 0;
        for (t, m) in targets.iter().zip(mats) {
            let img: Element = m.iter().map(|row| &row[*i] * mono).collect();
            let c = t.coords(&img, d);
            for (r, x) in c.into_iter().enumerate() {
                if !x.is_zero() {
                    rows[off + r][col] = x;
                }
            }
            off += t.dim(d);
        }
    }
    rows
}

/// Indices of a minimal homogeneous generating set among `candidates` (elements of
/// `⊕ targets`). Greedy by degree: a candidate is kept iff it is independent of
/// `S_+·(kept)` and of the kept candidates of its own degree, which is graded Nakayama.
pub fn minimal_generators(nvars: usize, targets: &[GradedFree], candidates: &[(i32, Vec<Element>)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| (candidates[i].0, i));
    let mut kept: Vec<usize> = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let d = candidates[order[k]].0;
        let mut span = EchelonBasis::new(total_dim(targets, d));
        for &j in &kept {
            let (dj, ref gj) = candidates[j];
            for e in &monomial_basis(nvars, (d - dj) as u32).monomials {
                let mono = GradedPoly::monomial(e.clone(), Rat::one());
                let shifted: Vec<Element> = gj.iter().map(|m| scale_element(m, &mono)).collect();
                span.insert(sum_coords(targets, &shifted, d));
            }
        }
        while k < order.len() && candidates[order[k]].0 == d {
            let i = order[k];
            if span.insert(sum_coords(targets, &candidates[i].1, d)) {
                kept.push(i);
            }
            k += 1;
        }
    }
    kept
}

/// Minimal homogeneous generators of `ker(src → ⊕ targets)` in degrees `≤ bound`.
pub fn kernel_generators(
    src: &GradedFree,
    targets: &[GradedFree],
    mats: &[&PolyMatrix],
    bound: i32,
) -> Vec<(i32, Element)> {
    let Some(&lo) = src.degrees.iter().min() else { return Vec::new() };
    let mut kept: Vec<(i32, Element)> = Vec::new();
    for d in lo..=bound {
        let n = src.dim(d);
        if n == 0 {
            continue;
        }
        let kernel = linalg::nullspace(&map_slice(src, targets, mats, d), n);
        if kernel.is_empty() {
            continue;
        }
        let mut span = EchelonBasis::new(n);
        for (dj, gj) in &kept {
            if (d - dj) % 2 != 0 {
                continue;
            }
            for e in &monomial_basis(src.nvars, (d - dj) as u32).monomials {
                let mono = GradedPoly::monomial(e.clone(), Rat::one());
                span.insert(src.coords(&scale_element(gj, &mono), d));
            }
        }
        for v in kernel {
            if span.insert(v.clone()) {
                kept.push((d, src.from_coords(&v, d)));
            }
        }
    }
    kept
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafEdge {
    pub from: usize,
    pub to: usize,
    pub label: LinearForm,
    /// Generator degrees of the free `S/l(E)`-module on the edge.
    pub degrees: Vec<i32>,
    pub rho_from: PolyMatrix,
    pub rho_to: PolyMatrix,
}

/// A sheaf on a moment graph; `edges[k]` sits over edge `k` of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheaf {
    pub nvars: usize,
    pub stalks: Vec<Vec<i32>>,
    pub edges: Vec<SheafEdge>,
}

/// Sorted generator degrees of every stalk and edge module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorData {
    pub stalks: Vec<Vec<i32>>,
    pub edges: Vec<Vec<i32>>,
}

impl Sheaf {
    fn empty(g: &MomentGraph) -> Sheaf {
        Sheaf {
            nvars: g.nvars,
            stalks: vec![Vec::new(); g.num_vertices()],
            edges: g
                .edges
                .iter()
                .map(|e| SheafEdge {
                    from: e.from,
                    to: e.to,
                    label: e.label.clone(),
                    degrees: Vec::new(),
                    rho_from: Vec::new(),
                    rho_to: Vec::new(),
                })
                .collect(),
        }
    }

    /// Stalks `S`, edge modules `S/l(E)`, canonical quotient maps.
    pub fn structure_sheaf(g: &MomentGraph) -> Sheaf {
        let mut f = Sheaf::empty(g);
        f.stalks = vec![vec![0]; g.num_vertices()];
        for e in &mut f.edges {
            e.degrees = vec![0];
            e.rho_from = identity_matrix(g.nvars, 1);
            e.rho_to = identity_matrix(g.nvars, 1);
        }
        f
    }

    /// `S` at `v`, zero elsewhere.
    pub fn skyscraper(g: &MomentGraph, v: usize) -> Sheaf {
        let mut f = Sheaf::empty(g);
        f.stalks[v] = vec![0];
        f
    }

    pub fn num_vertices(&self) -> usize {
        self.stalks.len()
    }

    pub fn stalk(&self, v: usize) -> GradedFree {
        GradedFree::free(self.nvars, self.stalks[v].clone())
    }

    pub fn edge_module(&self, e: EdgeId) -> GradedFree {
        let edge = &self.edges[e];
        GradedFree::quotient(self.nvars, edge.degrees.clone(), edge.label.clone())
    }

    /// `ρ_{v,E}`.
    pub fn rho(&self, e: EdgeId, v: usize) -> &PolyMatrix {
        let edge = &self.edges[e];
        if edge.from == v {
            &edge.rho_from
        } else {
            debug_assert_eq!(edge.to, v);
            &edge.rho_to
        }
    }

    pub fn restrict(&self, e: EdgeId, v: usize, m: &[GradedPoly]) -> Element {
        let out =
            if self.edges[e].degrees.is_empty() { Vec::new() } else { apply_matrix(self.nvars, self.rho(e, v), m) };
        self.edge_module(e).normalize(out)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| !self.stalks[v].is_empty()).collect()
    }

    /// Matrix shapes, and every restriction map homogeneous of degree zero.
    pub fn validate(&self) -> Result<()> {
        for (k, e) in self.edges.iter().enumerate() {
            let module = self.edge_module(k);
            for (rho, v) in [(&e.rho_from, e.from), (&e.rho_to, e.to)] {
                let src = &self.stalks[v];
                if !e.degrees.is_empty() && (rho.len() != e.degrees.len() || rho.iter().any(|r| r.len() != src.len())) {
                    return Err(MgError::InvariantViolation(format!(
                        "restriction matrix on edge {k} has the wrong shape"
                    )));
                }
                for (row, &dk) in rho.iter().zip(&e.degrees) {
                    for (p, &di) in row.iter().zip(src) {
                        let p = module.normalize(vec![p.clone()]).remove(0);
                        if p.is_zero() {
                            continue;
                        }
                        if !p.is_homogeneous() || p.degree().map(|x| x as i32) != Some(di - dk) {
                            return Err(MgError::InvariantViolation(format!(
                                "restriction on edge {k} is not of degree zero"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the tuple (aligned with `vertices`) satisfies `ρ_{x,E}(m_x) = ρ_{y,E}(m_y)`
    /// on every edge inside the vertex set.
    pub fn is_section(&self, vertices: &[usize], tuple: &[Element]) -> bool {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        self.edges.iter().enumerate().all(|(k, e)| match (pos.get(&e.from), pos.get(&e.to)) {
            (Some(&a), Some(&b)) => {
                let diff: Element = self
                    .restrict(k, e.from, &tuple[a])
                    .iter()
                    .zip(self.restrict(k, e.to, &tuple[b]))
                    .map(|(p, q)| p - &q)
                    .collect();
                self.edge_module(k).is_zero_element(&diff)
            }
            _ => true,
        })
    }

    /// Degreewise bases of `Γ(I, F)` for degrees up to `bound`.
    pub fn sections(&self, vertices: &[usize], bound: i32) -> SectionSpace {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let stalks: Vec<GradedFree> = vertices.iter().map(|&v| self.stalk(v)).collect();
        let lo = stalks.iter().flat_map(|s| s.degrees.iter().copied()).min().unwrap_or(0).min(0);
        let mut slices = BTreeMap::new();
        for d in lo..=bound {
            let dims: Vec<usize> = stalks.iter().map(|s| s.dim(d)).collect();
            let ncols: usize = dims.iter().sum();
            if ncols == 0 {
                continue;
            }
            let offsets: Vec<usize> = dims
                .iter()
                .scan(0, |acc, &n| {
                    let o = *acc;
                    *acc += n;
                    Some(o)
                })
                .collect();
            let mut rows: Vec<Vector> = Vec::new();
            for (k, e) in self.edges.iter().enumerate() {
                let (Some(&a), Some(&b)) = (pos.get(&e.from), pos.get(&e.to)) else { continue };
                if e.degrees.is_empty() {
                    continue;
                }
                let target = [self.edge_module(k)];
                let ra = map_slice(&stalks[a], &target, &[&e.rho_from], d);
                let rb = map_slice(&stalks[b], &target, &[&e.rho_to], d);
                for (x, y) in ra.into_iter().zip(rb) {
                    let mut row = vec![Rat::zero(); ncols];
                    for (c, v) in x.into_iter().enumerate() {
                        row[offsets[a] + c] = v;
                    }
                    for (c, v) in y.into_iter().enumerate() {
                        if !v.is_zero() {
                            row[offsets[b] + c] -= &v;
                        }
                    }
                    rows.push(row);
                }
            }
            let basis: Vec<Vec<Element>> = linalg::nullspace(&rows, ncols)
                .into_iter()
                .map(|v| {
                    stalks.iter().zip(&offsets).zip(&dims).map(|((s, &o), &n)| s.from_coords(&v[o..o + n], d)).collect()
                })
                .collect();
            slices.insert(d, basis);
        }
        SectionSpace { vertices: vertices.to_vec(), slices }
    }

    pub fn generator_data(&self) -> GeneratorData {
        let sorted = |v: &Vec<i32>| {
            let mut v = v.clone();
            v.sort_unstable();
            v
        };
        GeneratorData {
            stalks: self.stalks.iter().map(sorted).collect(),
            edges: self.edges.iter().map(|e| sorted(&e.degrees)).collect(),
        }
    }

    /// (BMP2) degreewise up to `bound`: each `ρ_{y,E}` with `y` the upper end is
    /// surjective with kernel `l(E)·F^y`.
    pub fn check_bmp2(&self, bound: i32) -> Result<()> {
        for (k, e) in self.edges.iter().enumerate() {
            let target = self.edge_module(k);
            let src = self.stalk(e.to);
            for d in 0..=bound {
                let n = src.dim(d);
                let rows = if target.rank() == 0 {
                    Vec::new()
                } else {
                    map_slice(&src, std::slice::from_ref(&target), &[&e.rho_to], d)
                };
                let r = linalg::rank(&rows, n);
                if r != target.dim(d) || n - r != src.dim(d - 2) {
                    return Err(MgError::InvariantViolation(format!("(BMP2) fails on edge {k} in degree {d}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let matrix = |m: &PolyMatrix| -> Value {
            Value::Array(m.iter().map(|r| Value::Array(r.iter().map(GradedPoly::to_json).collect())).collect())
        };
        json!({
            "nvars": self.nvars,
            "stalks": self.stalks,
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from,
                "to": e.to,
                "annihilator": e.label.coords(),
                "degrees": e.degrees,
                "rho_from": matrix(&e.rho_from),
                "rho_to": matrix(&e.rho_to),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Degreewise rational bases of `Γ(I, F)`; each basis vector is a tuple of stalk
/// elements aligned with `vertices`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub vertices: Vec<usize>,
    pub slices: BTreeMap<i32, Vec<Vec<Element>>>,
}

impl SectionSpace {
    pub fn dim(&self, d: i32) -> usize {
        self.slices.get(&d).map_or(0, Vec::len)
    }

    pub fn basis(&self, d: i32) -> &[Vec<Element>] {
        self.slices.get(&d).map_or(&[], Vec::as_slice)
    }
}

/// A homogeneous global section; `parts[v]` lies in the stalk at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub degree: i32,
    pub parts: Vec<Element>,
}

/// A homogeneous `S`-basis of `Γ(F)` for a flabby sheaf, built top down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalSections {
    pub sections: Vec<Section>,
    /// Generator degrees of `ker(F^x → ⊕_{E∈δx} F^E)`, which is `Γ(F)_[x]`.
    pub kernel_degrees: Vec<Vec<i32>>,
}

fn descending(g: &MomentGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by_key(|&v| (Reverse(g.lengths[v]), v));
    order
}

/// Extends a basis of `Γ({processed}, F)` to the processed set plus `x`: lifts every
/// section through `ρ_δx` and adds the generators of its kernel. Relies on flabbiness,
/// so that each section lifts on its own and the extension splits.
fn extend_at(f: &Sheaf, g: &MomentGraph, x: usize, sections: &mut [Section], bound: i32) -> Result<Vec<Section>> {
    let src = f.stalk(x);
    let out: Vec<EdgeId> = g.out_edges(x).to_vec();
    let targets: Vec<GradedFree> = out.iter().map(|&e| f.edge_module(e)).collect();
    let mats: Vec<&PolyMatrix> = out.iter().map(|&e| &f.edges[e].rho_from).collect();
    let mut slices: HashMap<i32, Vec<Vector>> = HashMap::new();
    for s in sections.iter_mut() {
        let u: Vec<Element> = out.iter().map(|&e| f.restrict(e, f.edges[e].to, &s.parts[f.edges[e].to])).collect();
        if u.iter().all(|m| m.iter().all(GradedPoly::is_zero)) {
            s.parts[x] = src.zero();
            continue;
        }
        let rows = slices.entry(s.degree).or_insert_with(|| map_slice(&src, &targets, &mats, s.degree));
        let rhs = sum_coords(&targets, &u, s.degree);
        let m = linalg::solve(rows, src.dim(s.degree), &rhs)
            .ok_or_else(|| MgError::InvariantViolation(format!("sheaf is not flabby at vertex {x}")))?;
        s.parts[x] = src.from_coords(&m, s.degree);
    }
    Ok(kernel_generators(&src, &targets, &mats, bound)
        .into_iter()
        .map(|(degree, k)| {
            let mut parts: Vec<Element> = sections.first().map_or_else(
                || (0..f.num_vertices()).map(|v| f.stalk(v).zero()).collect(),
                |s| s.parts.iter().map(|p| vec![GradedPoly::zero(f.nvars); p.len()]).collect(),
            );
            parts[x] = k;
            Section { degree, parts }
        })
        .collect())
}

/// An `S`-basis of `Γ(F)` for a flabby sheaf `F` whose kernel generators at `x` live
/// in degrees `≤ bound(x)`. Fails when a section does not lift, i.e. `F` is not flabby.
pub fn global_sections(f: &Sheaf, g: &MomentGraph, bound: &dyn Fn(usize) -> i32) -> Result<GlobalSections> {
    let n = f.num_vertices();
    let mut sections: Vec<Section> = Vec::new();
    let mut kernel_degrees = vec![Vec::new(); n];
    for x in descending(g) {
        let new = extend_at(f, g, x, &mut sections, bound(x))?;
        kernel_degrees[x] = new.iter().map(|s| s.degree).collect();
        sections.extend(new);
    }
    Ok(GlobalSections { sections, kernel_degrees })
}

/// [`global_sections`] together with the stabilization check: rerunning with every
/// bound raised by 4 must find the same kernel generators.
pub fn stable_global_sections(f: &Sheaf, g: &MomentGraph, bound: &dyn Fn(usize) -> i32) -> Result<GlobalSections> {
    let first = global_sections(f, g, bound)?;
    let second = global_sections(f, g, &|x| bound(x) + 4)?;
    if first.kernel_degrees != second.kernel_degrees {
        return Err(MgError::BoundTooSmall);
    }
    Ok(first)
}

/// The Braden–MacPherson sheaf `ℬ(w)` together with an `S`-basis of its global sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmpSheaf {
    pub w: usize,
    pub sheaf: Sheaf,
    pub global: GlobalSections,
}

/// `2(ℓ(w) − ℓ(x)) + 4`: generator degrees of `ℬ(w)_[x]` are at most `2(ℓ(w) − ℓ(x))`.
pub fn default_bound(g: &MomentGraph, w: usize, x: usize) -> i32 {
    2 * (g.lengths[w] as i32 - g.lengths[x] as i32).max(0) + 4
}

fn build_bmp(g: &MomentGraph, w: usize, bound: &dyn Fn(usize) -> i32) -> Result<BmpSheaf> {
    if w >= g.num_vertices() {
        return Err(MgError::UnknownVertex);
    }
    let nvars = g.nvars;
    let mut f = Sheaf::empty(g);
    let mut sections: Vec<Section> = Vec::new();
    let mut kernel_degrees = vec![Vec::new(); g.num_vertices()];
    for x in descending(g) {
        for &e in g.out_edges(x) {
            let y = g.edges[e].to;
            f.edges[e].degrees = f.stalks[y].clone();
            f.edges[e].rho_to = identity_matrix(nvars, f.stalks[y].len());
        }
        if x == w {
            f.stalks[x] = vec![0];
        } else if g.leq(x, w) {
            let out = g.out_edges(x);
            let targets: Vec<GradedFree> = out.iter().map(|&e| f.edge_module(e)).collect();
            let candidates: Vec<(i32, Vec<Element>)> = sections
                .iter()
                .map(|s| {
                    (s.degree, out.iter().map(|&e| f.restrict(e, g.edges[e].to, &s.parts[g.edges[e].to])).collect())
                })
                .collect();
            let kept = minimal_generators(nvars, &targets, &candidates);
            f.stalks[x] = kept.iter().map(|&i| candidates[i].0).collect();
            for (pos, &e) in out.iter().enumerate() {
                let rows = f.edges[e].degrees.len();
                f.edges[e].rho_from =
                    (0..rows).map(|r| kept.iter().map(|&i| candidates[i].1[pos][r].clone()).collect()).collect();
            }
        }
        if f.stalks[x].is_empty() {
            for &e in g.out_edges(x) {
                f.edges[e].rho_from = vec![Vec::new(); f.edges[e].degrees.len()];
            }
        }
        for s in sections.iter_mut() {
            s.parts[x] = Vec::new();
        }
        let new = extend_at(&f, g, x, &mut sections, bound(x))?;
        kernel_degrees[x] = new.iter().map(|s| s.degree).collect();
        sections.extend(new);
    }
    for e in &mut f.edges {
        if e.degrees.is_empty() {
            e.rho_from = Vec::new();
            e.rho_to = Vec::new();
        }
    }
    Ok(BmpSheaf { w, sheaf: f, global: GlobalSections { sections, kernel_degrees } })
}

/// `ℬ(w)` on `g`. With `bound = None` each vertex uses [`default_bound`]. The whole
/// construction is rerun with all bounds raised by 4; any change in generator data
/// is reported as [`MgError::BoundTooSmall`].
pub fn bmp_sheaf(g: &MomentGraph, w: usize, bound: Option<i32>) -> Result<BmpSheaf> {
    let b = |x: usize| bound.unwrap_or_else(|| default_bound(g, w, x));
    let first = build_bmp(g, w, &b)?;
    let second = build_bmp(g, w, &|x| b(x) + 4)?;
    if first.sheaf.generator_data() != second.sheaf.generator_data()
        || first.global.kernel_degrees != second.global.kernel_degrees
    {
        return Err(MgError::BoundTooSmall);
    }
    Ok(first)
}

impl BmpSheaf {
    /// `Γ(ℬ)^x = ℬ^x` degreewise up to `bound`: the sections restricted to `x` span the stalk.
    pub fn check_sections_surject(&self, bound: i32) -> Result<()> {
        for x in 0..self.sheaf.num_vertices() {
            let stalk = self.sheaf.stalk(x);
            for d in 0..=bound {
                let mut span = EchelonBasis::new(stalk.dim(d));
                for s in &self.global.sections {
                    if s.degree > d || (d - s.degree) % 2 != 0 {
                        continue;
                    }
                    for e in &monomial_basis(self.sheaf.nvars, (d - s.degree) as u32).monomials {
                        let mono = GradedPoly::monomial(e.clone(), Rat::one());
                        span.insert(stalk.coords(&scale_element(&s.parts[x], &mono), d));
                    }
                }
                if span.rank() != stalk.dim(d) {
                    return Err(MgError::InvariantViolation(format!(
                        "sections do not span the stalk at {x} in degree {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `p^{J,*}F` for a sheaf `F` on the parabolic graph `gj`, as a sheaf on the regular
/// graph `g0` of the same group. The maps `f_V`, `f_E` are read as `x ↦ x^J`.
pub fn pullback(f: &Sheaf, gj: &MomentGraph, g0: &MomentGraph, pd: &ParabolicDatum) -> Result<Sheaf> {
    let image = |x: usize| gj.vertex_of(pd.min_rep(g0.elements[x])).ok_or(MgError::UnknownVertex);
    let mut out = Sheaf::empty(g0);
    for x in 0..g0.num_vertices() {
        out.stalks[x] = f.stalks[image(x)?].clone();
    }
    for (k, e) in g0.edges.iter().enumerate() {
        let (a, b) = (image(e.from)?, image(e.to)?);
        let edge = &mut out.edges[k];
        if a == b {
            edge.degrees = f.stalks[a].clone();
            edge.rho_from = identity_matrix(f.nvars, edge.degrees.len());
            edge.rho_to = edge.rho_from.clone();
        } else {
            let k2 = gj
                .find_edge(a, b)
                .ok_or_else(|| MgError::InvariantViolation("edge has no image in the quotient graph".into()))?;
            if gj.edges[k2].label != e.label {
                return Err(MgError::InvariantViolation("edge label changes under the quotient map".into()));
            }
            edge.degrees = f.edges[k2].degrees.clone();
            edge.rho_from = f.rho(k2, a).clone();
            edge.rho_to = f.rho(k2, b).clone();
        }
    }
    Ok(out)
}

/// Degreewise dimensions of the localisation `𝓛(M)`: `M^x` at each vertex and the
/// pushout of `M^x ← M(E) → M^y` on each edge, for degrees `0..=bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localised {
    pub vertex_dims: Vec<Vec<usize>>,
    pub edge_dims: Vec<Vec<usize>>,
}

/// The pushout is `(M^x ⊕ M^y) / ({(a, −b) : (a, b) ∈ M^{x,y}} + {(l·a, 0) : a ∈ M^x})`,
/// since `𝒵(E)` is generated over `S` by `(1, 1)` and `(l, 0)`.
pub fn localise(m: &EmbeddedModule, g: &MomentGraph, bound: i32) -> Localised {
    let ambient: Vec<GradedFree> = m.ambient.iter().map(|a| GradedFree::free(m.nvars, a.clone())).collect();
    // Images of μ·(generator j) at a vertex, in degree d.
    let images = |x: usize, d: i32| -> Vec<Vector> {
        let mut out = Vec::new();
        for (j, &dj) in m.degrees.iter().enumerate() {
            if d < dj || (d - dj) % 2 != 0 {
                continue;
            }
            let col: Element = m.components[x].iter().map(|row| row[j].clone()).collect();
            for e in &monomial_basis(m.nvars, (d - dj) as u32).monomials {
                let mono = GradedPoly::monomial(e.clone(), Rat::one());
                out.push(ambient[x].coords(&scale_element(&col, &mono), d));
            }
        }
        out
    };
    let vertex_dims: Vec<Vec<usize>> = (0..g.num_vertices())
        .map(|x| (0..=bound).map(|d| linalg::rank(&images(x, d), ambient[x].dim(d))).collect())
        .collect();
    let edge_dims = g
        .edges
        .iter()
        .map(|e| {
            let (x, y) = (e.from, e.to);
            let l = e.label.to_poly();
            (0..=bound)
                .map(|d| {
                    let (nx, ny) = (ambient[x].dim(d), ambient[y].dim(d));
                    let mut rel = EchelonBasis::new(nx + ny);
                    for (a, b) in images(x, d).into_iter().zip(images(y, d)) {
                        let mut v = a;
                        v.extend(b.into_iter().map(|c| -c));
                        rel.insert(v);
                    }
                    for a in images(x, d - 2) {
                        let el = ambient[x].from_coords(&a, d - 2);
                        let mut v = ambient[x].coords(&scale_element(&el, &l), d);
                        v.resize(nx + ny, Rat::zero());
                        rel.insert(v);
                    }
                    vertex_dims[x][d as usize] + vertex_dims[y][d as usize] - rel.rank()
                })
                .collect()
        })
        .collect();
    Localised { vertex_dims, edge_dims }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::WeylGroup;

    fn graph(label: &str, j: &[usize]) -> (WeylGroup, ParabolicDatum, MomentGraph) {
        let g = WeylGroup::from_label(label).unwrap();
        let pd = g.parabolic(j).unwrap();
        let mg = MomentGraph::bruhat(&g, &pd);
        (g, pd, mg)
    }

    #[test]
    fn structure_sheaf_sections() {
        let (_, _, a1) = graph("A1", &[]);
        let z = Sheaf::structure_sheaf(&a1);
        z.validate().unwrap();
        let all: Vec<usize> = (0..a1.num_vertices()).collect();
        let sp = z.sections(&all, 4);
        assert_eq!((sp.dim(0), sp.dim(2), sp.dim(4)), (1, 2, 2));
        let (_, _, a2j) = graph("A2", &[0]);
        let z = Sheaf::structure_sheaf(&a2j);
        let all: Vec<usize> = (0..3).collect();
        assert_eq!(z.sections(&all, 2).dim(2), 3);
        for b in z.sections(&all, 4).basis(4) {
            assert!(z.is_section(&all, b));
        }
    }

    #[test]
    fn minimal_generators_examples() {
        let l = LinearForm::from_ints(&[1]).unwrap();
        let q = GradedFree::quotient(1, vec![0], l);
        let one = vec![GradedPoly::one(1)];
        let a = vec![GradedPoly::var(1, 0)];
        let cands = vec![(2, vec![a.clone()]), (0, vec![one.clone()])];
        assert_eq!(minimal_generators(1, &[q], &cands), vec![1]);
        let s = GradedFree::free(1, vec![0]);
        let cands = vec![(2, vec![a.clone()]), (4, vec![scale_element(&a, &GradedPoly::var(1, 0))])];
        assert_eq!(minimal_generators(1, &[s], &cands), vec![0]);
    }

    #[test]
    fn bmp_small_cases() {
        let (g, _, a1) = graph("A1", &[]);
        let s = a1.vertex_of(g.generator(0)).unwrap();
        let b = bmp_sheaf(&a1, s, None).unwrap();
        assert_eq!(b.sheaf.stalks, vec![vec![0], vec![0]]);
        assert_eq!(b.sheaf.edges[0].degrees, vec![0]);
        assert_eq!(b.global.kernel_degrees, vec![vec![2], vec![0]]);
        b.sheaf.validate().unwrap();
        b.sheaf.check_bmp2(8).unwrap();
        b.check_sections_surject(8).unwrap();

        let (g, _, a2j) = graph("A2", &[0]);
        let sb = a2j.vertex_of(g.generator(1)).unwrap();
        let b = bmp_sheaf(&a2j, sb, None).unwrap();
        assert_eq!(b.sheaf.support(), vec![0, sb]);
        assert_eq!(b.sheaf.stalks[0], vec![0]);

        let sky = bmp_sheaf(&a2j, 0, None).unwrap();
        assert_eq!(sky.sheaf, Sheaf::skyscraper(&a2j, 0));
    }

    #[test]
    fn smooth_longest_element_gives_structure_sheaf_ranks() {
        let (g, _, a2) = graph("A2", &[]);
        let w0 = a2.vertex_of(g.longest()).unwrap();
        let b = bmp_sheaf(&a2, w0, None).unwrap();
        assert!(b.sheaf.stalks.iter().all(|s| s == &vec![0]));
        b.sheaf.check_bmp2(10).unwrap();
        b.check_sections_surject(10).unwrap();
    }

    #[test]
    fn too_small_bound_is_reported() {
        let (g, _, a2) = graph("A2", &[]);
        let w0 = a2.vertex_of(g.longest()).unwrap();
        assert_eq!(bmp_sheaf(&a2, w0, Some(2)).unwrap_err(), MgError::BoundTooSmall);
    }

    #[test]
    fn pullback_of_skyscraper() {
        let (g, pd, a2j) = graph("A2", &[0]);
        let a2 = MomentGraph::bruhat(&g, &g.parabolic(&[]).unwrap());
        let p = pullback(&Sheaf::skyscraper(&a2j, 0), &a2j, &a2, &pd).unwrap();
        let sa = a2.vertex_of(g.generator(0)).unwrap();
        assert_eq!(p.support(), vec![0, sa]);
        let k = a2.find_edge(0, sa).unwrap();
        assert_eq!(p.edges[k].degrees, vec![0]);
        assert_eq!(p.edges.iter().filter(|e| !e.degrees.is_empty()).count(), 1);
        let same = pullback(&Sheaf::structure_sheaf(&a2), &a2, &a2, &g.parabolic(&[]).unwrap()).unwrap();
        assert_eq!(same, Sheaf::structure_sheaf(&a2));
    }
}
