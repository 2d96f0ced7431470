//! Constructions on presented modules: tensor products, duals, Frobenius
//! functor, minimal presentations, resolutions, dimension and base change.

use crate::error::{AlgebraError, Result};
use crate::gb::ModuleGb;
use crate::module::{
    preimage_of_span, same_ring, ModuleMap, ModuleRef, PresentedModule, Submodule,
};
use crate::poly::Poly;
use crate::ring::{RingMap, RingRef};
use crate::vector::{self, Vector};

/// `A ⊗ B` on generators `a_i ⊗ b_j` (index `i * B.ngens + j`), with the
/// relation columns `rel_A ⊗ b_j` followed by `a_i ⊗ rel_B`.
pub fn tensor_presentation(a: &ModuleRef, b: &ModuleRef) -> Result<ModuleRef> {
    same_ring(a.ring(), b.ring())?;
    let (na, nb) = (a.ngens(), b.ngens());
    let n = na * nb;
    let mut cols = Vec::new();
    for c in a.relations() {
        for j in 0..nb {
            let mut v = vector::zero(n);
            for i in 0..na {
                v[i * nb + j] = c[i].clone();
            }
            cols.push(v);
        }
    }
    for i in 0..na {
        for d in b.relations() {
            let mut v = vector::zero(n);
            for j in 0..nb {
                v[i * nb + j] = d[j].clone();
            }
            cols.push(v);
        }
    }
    let mut degs = Vec::with_capacity(n);
    for da in a.degrees() {
        for db in b.degrees() {
            degs.push(da + db);
        }
    }
    PresentedModule::new(a.ring(), n, cols, Some(degs))
}

/// The dual `Hom_R(M, R)`. Each generator is a map `M -> R`, stored by its
/// values on the generators of `M`.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub source: ModuleRef,
    pub module: ModuleRef,
    pub maps: Vec<Vector>,
}

impl DualModule {
    /// `gamma(u)` for `gamma = sum coords[k] * maps[k]`.
    pub fn evaluate(&self, coords: &[Poly], u: &[Poly]) -> Result<Poly> {
        self.module.check_element(coords)?;
        self.source.check_element(u)?;
        let poly = self.source.poly();
        let gamma = vector::combine(poly, self.source.ngens(), coords, &self.maps);
        Ok(self.source.ring().reduce(&vector::dot(poly, &gamma, u)))
    }

    /// The ideal `{gamma(u) : gamma in Hom(M, R)}`.
    pub fn evaluation_ideal(&self, u: &[Poly]) -> Result<Vec<Poly>> {
        self.source.check_element(u)?;
        let poly = self.source.poly();
        Ok(self
            .maps
            .iter()
            .map(|g| self.source.ring().reduce(&vector::dot(poly, g, u)))
            .filter(|x| !x.is_zero())
            .collect())
    }
}

fn ideal_lifts(ring: &RingRef, n: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..n {
        for g in ring.ideal() {
            let mut v = vector::zero(n);
            v[i] = g.clone();
            out.push(v);
        }
    }
    out
}

/// Presentation of `Hom_R(M, R)` as the kernel of the transposed relation
/// matrix.
pub fn hom_into_ring(m: &ModuleRef) -> Result<DualModule> {
    let ring = m.ring();
    let poly = m.poly();
    let n = m.ngens();
    let k = m.relations().len();
    let raw = if k == 0 {
        (0..n).map(|i| m.generator(i)).collect()
    } else {
        let rows = vector::transpose(m.relations(), n);
        preimage_of_span(poly, k, &rows, &ideal_lifts(ring, k))?
    };
    let degrees: Vec<i64> = m.degrees().to_vec();
    let mut maps: Vec<Vector> = Vec::new();
    let mut gdeg = Vec::new();
    for g in raw {
        let g: Vector = g.iter().map(|x| ring.reduce(x)).collect();
        if vector::is_zero(&g) || maps.contains(&g) {
            continue;
        }
        let i = g.iter().position(|x| !x.is_zero()).unwrap();
        gdeg.push(poly.degree(&g[i]).unwrap() - degrees[i]);
        maps.push(g);
    }
    let rels = if maps.is_empty() {
        Vec::new()
    } else {
        preimage_of_span(poly, n, &maps, &ideal_lifts(ring, n))?
    };
    let module = PresentedModule::new(ring, maps.len(), rels, Some(gdeg))?;
    Ok(DualModule {
        source: m.clone(),
        module,
        maps,
    })
}

/// `p^e`, with overflow reported as a resource error.
pub fn frobenius_power(p: u32, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .filter(|q| *q < (1 << 24))
        .ok_or_else(|| AlgebraError::Resource(format!("Frobenius power {p}^{e} is too large")))
}

/// The Frobenius functor `F^e`: relation entries raised to the `p^e`-th
/// power, generator degrees multiplied by `p^e`.
pub fn frobenius_module(m: &ModuleRef, e: u32) -> Result<ModuleRef> {
    if e == 0 {
        return Ok(m.clone());
    }
    let q = frobenius_power(m.ring().characteristic(), e)?;
    let poly = m.poly();
    let cols = m
        .relations()
        .iter()
        .map(|c| vector::frobenius(poly, c, q))
        .collect();
    let degs = m.degrees().iter().map(|d| d * q as i64).collect();
    PresentedModule::new(m.ring(), m.ngens(), cols, Some(degs))
}

/// `u^{[p^e]}`, coordinatewise, reduced modulo the defining ideal.
pub fn frobenius_element(ring: &RingRef, u: &[Poly], e: u32) -> Result<Vector> {
    let q = frobenius_power(ring.characteristic(), e)?;
    Ok(u.iter()
        .map(|x| ring.reduce(&ring.poly().frobenius(x, q)))
        .collect())
}

/// `F^e` applied to a submodule: generators raised coordinatewise, inside
/// `F^e` of the ambient module.
pub fn frobenius_submodule(n: &Submodule, e: u32) -> Result<Submodule> {
    let fm = frobenius_module(n.ambient(), e)?;
    let gens = n
        .gens()
        .iter()
        .map(|g| frobenius_element(n.ring(), g, e))
        .collect::<Result<Vec<_>>>()?;
    Submodule::new(&fm, gens)
}

fn require_homogeneous(m: &PresentedModule) -> Result<()> {
    if m.is_homogeneous() {
        Ok(())
    } else {
        Err(AlgebraError::NonHomogeneous(
            "module presentation is not graded".into(),
        ))
    }
}

/// A minimal generating set of the submodule of the free module with the
/// given generator degrees spanned by homogeneous `vecs`.
pub fn minimal_generators(ring: &RingRef, degrees: &[i64], vecs: &[Vector]) -> Result<Vec<Vector>> {
    let free = PresentedModule::free_graded(ring, degrees.to_vec());
    let mut graded: Vec<(i64, Vector)> = Vec::new();
    for v in vecs {
        let v: Vector = v.iter().map(|x| ring.reduce(x)).collect();
        if let Some(d) = free.column_degree(&v)? {
            graded.push((d, v));
        }
    }
    graded.sort_by_key(|(d, _)| *d);
    let mut kept: Vec<Vector> = Vec::new();
    for (_, v) in graded {
        let span = Submodule::new(&free, kept.clone())?;
        if !span.contains(&v)? {
            kept.push(v);
        }
    }
    Ok(kept)
}

#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub module: ModuleRef,
    /// `M -> M_min`
    pub to_min: ModuleMap,
    /// `M_min -> M`
    pub from_min: ModuleMap,
    /// Original index of each surviving generator.
    pub kept: Vec<usize>,
}

fn unit_entry(cols: &[Vector]) -> Option<(usize, usize, u32)> {
    for (c, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            if !x.is_zero() && x.is_constant() {
                return Some((c, i, x.constant_coeff()));
            }
        }
    }
    None
}

/// Eliminates generators through relations with unit entries and drops
/// redundant relation columns.
pub fn minimal_presentation(m: &ModuleRef) -> Result<MinimalPresentation> {
    require_homogeneous(m)?;
    let ring = m.ring();
    let poly = m.poly();
    let f = poly.field();
    let n0 = m.ngens();
    let mut cols: Vec<Vector> = m.relations().to_vec();
    let mut images: Vec<Vector> = (0..n0).map(|i| m.generator(i)).collect();
    let mut kept: Vec<usize> = (0..n0).collect();
    while let Some((c, i, u)) = unit_entry(&cols) {
        let pivot = cols.remove(c);
        // coefficient of e_i is v_i; v - (v_i/u) * pivot kills it
        let fix = |v: &mut Vector| {
            if !v[i].is_zero() {
                let coef = poly.scale(&v[i], f.inv(u));
                let mut w = vector::sub(poly, v, &vector::scale(poly, &coef, &pivot));
                w.iter_mut().for_each(|x| *x = ring.reduce(x));
                *v = w;
            }
            v.remove(i);
        };
        cols.iter_mut().for_each(fix);
        images.iter_mut().for_each(fix);
        cols.retain(|c| !vector::is_zero(c));
        kept.remove(i);
    }
    let degrees: Vec<i64> = kept.iter().map(|&i| m.degrees()[i]).collect();
    let cols = minimal_generators(ring, &degrees, &cols)?;
    let module = PresentedModule::new(ring, kept.len(), cols, Some(degrees))?;
    let to_min = ModuleMap::new(m, &module, images)?;
    let back = kept.iter().map(|&i| m.generator(i)).collect();
    let from_min = ModuleMap::new(&module, m, back)?;
    Ok(MinimalPresentation {
        module,
        to_min,
        from_min,
        kept,
    })
}

/// `M / mM` as an `F_p`-vector space, with the class map.
#[derive(Clone, Debug)]
pub struct IrrelevantQuotient {
    module: ModuleRef,
    gb: ModuleGb,
    basis: Vec<usize>,
}

impl IrrelevantQuotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Generators of `M` whose classes form a basis of `M/mM`.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Coordinates of the class of `u` on the basis.
    pub fn class_of(&self, u: &[Poly]) -> Result<Vec<u32>> {
        self.module.check_element(u)?;
        let nf = self.gb.normal_form(u);
        Ok(self.basis.iter().map(|&i| nf[i].constant_coeff()).collect())
    }

    /// True when `u` is not in `mM`.
    pub fn is_nonzero(&self, u: &[Poly]) -> Result<bool> {
        Ok(self.class_of(u)?.iter().any(|c| *c != 0))
    }
}

pub fn quotient_by_irrelevant(m: &ModuleRef) -> Result<IrrelevantQuotient> {
    require_homogeneous(m)?;
    let poly = m.poly();
    let n = m.ngens();
    let mut gens = m.lifted_relations();
    for i in 0..n {
        for x in 0..poly.nvars() {
            let mut v = vector::zero(n);
            v[i] = poly.var(x);
            gens.push(v);
        }
    }
    let gb = ModuleGb::compute(poly, n, n, &gens)?;
    let units: Vec<usize> = gb
        .leading_terms()
        .into_iter()
        .filter(|(_, mono)| mono.is_one())
        .map(|(c, _)| c)
        .collect();
    let basis = (0..n).filter(|i| !units.contains(i)).collect();
    Ok(IrrelevantQuotient {
        module: m.clone(),
        gb,
        basis,
    })
}

/// A minimal graded free resolution, truncated. `matrices[k]` holds the
/// columns of `d_{k+1}: F_{k+1} -> F_k`, with `F_0` the generators of `M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: RingRef,
    pub ranks: Vec<usize>,
    pub degrees: Vec<Vec<i64>>,
    pub matrices: Vec<Vec<Vector>>,
}

pub fn free_resolution(m: &ModuleRef, steps: usize) -> Result<Resolution> {
    if steps == 0 {
        return Err(AlgebraError::Precondition(
            "resolution needs at least one step".into(),
        ));
    }
    let min = minimal_presentation(m)?.module;
    let ring = min.ring().clone();
    let mut ranks = vec![min.ngens()];
    let mut degrees = vec![min.degrees().to_vec()];
    let mut matrices: Vec<Vec<Vector>> = Vec::new();
    let mut current = min.relations().to_vec();
    for k in 0..steps {
        let n = ranks[k];
        let col_degs: Vec<i64> = current
            .iter()
            .map(|c| column_degree(&ring, &degrees[k], c))
            .collect::<Result<_>>()?;
        ranks.push(current.len());
        degrees.push(col_degs.clone());
        matrices.push(current.clone());
        if k + 1 == steps {
            break;
        }
        let next = if current.is_empty() {
            Vec::new()
        } else {
            let syz = preimage_of_span(ring.poly(), n, &current, &ideal_lifts(&ring, n))?;
            minimal_generators(&ring, &col_degs, &syz)?
        };
        current = next;
    }
    Ok(Resolution {
        ring,
        ranks,
        degrees,
        matrices,
    })
}

fn column_degree(ring: &RingRef, degrees: &[i64], col: &[Poly]) -> Result<i64> {
    let free = PresentedModule::free_graded(ring, degrees.to_vec());
    free.column_degree(col)?
        .ok_or_else(|| AlgebraError::Construction("zero column in a resolution".into()))
}

/// The `d`-th syzygy module `ker d_d` (with `d_1` the presentation matrix),
/// presented as `coker d_{d+2}` on the generators of `F_{d+1}`.
pub fn syzygy(m: &ModuleRef, d: usize) -> Result<ModuleRef> {
    if d == 0 {
        return Err(AlgebraError::Precondition(
            "syzygy index must be at least 1".into(),
        ));
    }
    let res = free_resolution(m, d + 2)?;
    PresentedModule::new(
        &res.ring,
        res.ranks[d + 1],
        res.matrices[d + 1].clone(),
        Some(res.degrees[d + 1].clone()),
    )
}

/// Combinatorial dimension of `S^n / LT`, or `-1` for the zero module.
fn leading_term_dimension(gb: &ModuleGb, nvars: usize, rank: usize) -> i64 {
    let lts = gb.leading_terms();
    let mut best = -1i64;
    for comp in 0..rank {
        let monos: Vec<Vec<bool>> = lts
            .iter()
            .filter(|(c, _)| *c == comp)
            .map(|(_, m)| m.exps().iter().map(|e| *e > 0).collect())
            .collect();
        if monos.iter().any(|s| s.iter().all(|b| !b)) {
            continue;
        }
        for mask in 0u32..(1 << nvars) {
            let size = mask.count_ones() as i64;
            if size <= best {
                continue;
            }
            let free = monos.iter().all(|s| {
                s.iter()
                    .enumerate()
                    .any(|(i, b)| *b && mask & (1 << i) == 0)
            });
            if free {
                best = size;
            }
        }
    }
    best
}

/// Krull dimension of `R/(extra)`; `-1` when it is the zero ring.
pub fn krull_dim(ring: &RingRef, extra: &[Poly]) -> Result<i64> {
    let mut gens = ring.ideal().to_vec();
    gens.extend(extra.iter().cloned());
    let gb = ModuleGb::ideal(ring.poly(), &gens)?;
    Ok(leading_term_dimension(&gb, ring.nvars(), 1))
}

/// Dimension of `M/(extra)M`; `-1` for the zero module.
pub fn module_dim(m: &ModuleRef, extra: &[Poly]) -> Result<i64> {
    let n = m.ngens();
    let mut gens = m.lifted_relations();
    for x in extra {
        for i in 0..n {
            let mut v = vector::zero(n);
            v[i] = x.clone();
            gens.push(v);
        }
    }
    let gb = ModuleGb::compute(m.poly(), n, n, &gens)?;
    Ok(leading_term_dimension(&gb, m.ring().nvars(), n))
}

fn check_parameters(ring: &RingRef, xs: &[Poly]) -> Result<()> {
    for x in xs {
        if !ring.poly().is_homogeneous(x) {
            return Err(AlgebraError::NonHomogeneous(
                "parameters must be homogeneous".into(),
            ));
        }
    }
    Ok(())
}

fn in_irrelevant_ideal(ring: &RingRef, x: &Poly) -> bool {
    let r = ring.reduce(x);
    r.is_zero() || ring.poly().degree(&r).unwrap_or(0) > 0
}

/// True when `R/(x_1..x_k)` has dimension `dim R - k` and every `x_i` lies
/// in the irrelevant ideal.
pub fn is_partial_sop(ring: &RingRef, xs: &[Poly]) -> Result<bool> {
    check_parameters(ring, xs)?;
    if !xs.iter().all(|x| in_irrelevant_ideal(ring, x)) {
        return Ok(false);
    }
    Ok(krull_dim(ring, xs)? == krull_dim(ring, &[])? - xs.len() as i64)
}

/// The module version: `dim M/(x)M = dim M - k`.
pub fn is_partial_sop_on(m: &ModuleRef, xs: &[Poly]) -> Result<bool> {
    check_parameters(m.ring(), xs)?;
    if !xs.iter().all(|x| in_irrelevant_ideal(m.ring(), x)) {
        return Ok(false);
    }
    let d = module_dim(m, &[])?;
    Ok(d >= xs.len() as i64 && module_dim(m, xs)? == d - xs.len() as i64)
}

/// Uniform degree scaling factor of a ring map, if there is one.
fn degree_factor(map: &RingMap) -> Option<i64> {
    let src = map.source().poly();
    let tgt = map.target().poly();
    let mut factor = None;
    for (i, img) in map.images().iter().enumerate() {
        let img = map.target().reduce(img);
        if img.is_zero() {
            continue;
        }
        if !tgt.is_homogeneous(&img) {
            return None;
        }
        let d = tgt.degree(&img).unwrap();
        let w = src.order().weights()[i] as i64;
        if d % w != 0 {
            return None;
        }
        match factor {
            None => factor = Some(d / w),
            Some(r) if r != d / w => return None,
            _ => {}
        }
    }
    Some(factor.unwrap_or(1))
}

/// `T ⊗_R M` for a ring map `R -> T`.
pub fn base_change(m: &ModuleRef, map: &RingMap) -> Result<ModuleRef> {
    same_ring(m.ring(), map.source())?;
    let cols = m
        .relations()
        .iter()
        .map(|c| base_change_element(map, c))
        .collect();
    let r = degree_factor(map).unwrap_or(1);
    let degs = m.degrees().iter().map(|d| d * r).collect();
    PresentedModule::new(map.target(), m.ngens(), cols, Some(degs))
}

pub fn base_change_element(map: &RingMap, u: &[Poly]) -> Vector {
    u.iter()
        .map(|x| map.target().reduce(&map.apply(x)))
        .collect()
}
