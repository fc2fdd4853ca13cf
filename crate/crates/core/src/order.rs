//! Cone order, the effect algebra `[0, e]`, the projection lattice and the
//! central (block) structure.

use crate::algebra::{AlgebraDescriptor, Block, Element};
use crate::error::{Error, Result};
use crate::spectral::{self, least_positive_eigenvalue, min_eigenvalue, range_projection};
use crate::tolerance;

/// Default slack for `x ≤ y`: `1e-9 (1 + ‖x‖ + ‖y‖)`.
pub fn default_leq_tol(x: &Element, y: &Element) -> f64 {
    tolerance::ORDER * (1.0 + x.norm() + y.norm())
}

/// `x ≤ y` iff the least eigenvalue of `y − x` is at least `−tol`.
pub fn leq(x: &Element, y: &Element, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(&y.sub(x)?) >= -tol)
}

/// [`leq`] with the default tolerance.
pub fn leq_default(x: &Element, y: &Element) -> Result<bool> {
    leq(x, y, default_leq_tol(x, y))
}

/// `0 ≤ x ≤ e` with slack `tol`.
pub fn in_effect_interval(x: &Element, tol: f64) -> bool {
    let ev = spectral::eigenvalues(x);
    ev[0] >= -tol && *ev.last().unwrap() <= 1.0 + tol
}

/// `0 ≤ y ≤ x` with slack `tol`.
pub fn in_interval(y: &Element, x: &Element, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(y) >= -tol && leq(y, x, tol)?)
}

/// Membership flags of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OrderClass {
    pub in_cone: bool,
    pub in_interior: bool,
    pub in_effect: bool,
    pub in_invertible_effect: bool,
    pub is_projection: bool,
    pub is_atom: bool,
}

/// Rank of a projection: the sum of block traces (a spin projection
/// `(α, v)` has trace `2α`).
pub fn projection_rank(p: &Element) -> f64 {
    p.blocks()
        .iter()
        .map(|b| match b {
            Block::Herm(h) => h.trace(),
            Block::Spin(s) => 2.0 * s.alpha,
        })
        .sum()
}

pub fn is_projection(p: &Element, tol: f64) -> bool {
    p.square().dist(p).map(|d| d <= tol).unwrap_or(false)
}

pub fn default_projection_tol(p: &Element) -> f64 {
    tolerance::scaled(tolerance::PROJECTION, p.norm())
}

/// Classifies `x` with slack `tol` on every spectral comparison.
pub fn classify(x: &Element, tol: f64) -> OrderClass {
    let ev = spectral::eigenvalues(x);
    let (least, greatest) = (ev[0], *ev.last().unwrap());
    let in_cone = least >= -tol;
    let in_interior = least > tol;
    let in_effect = in_cone && greatest <= 1.0 + tol;
    let is_projection = is_projection(x, tol.max(default_projection_tol(x)));
    OrderClass {
        in_cone,
        in_interior,
        in_effect,
        in_invertible_effect: in_effect && in_interior,
        is_projection,
        is_atom: is_projection && (projection_rank(x) - 1.0).abs() <= 1e-6,
    }
}

pub fn classify_default(x: &Element) -> OrderClass {
    classify(x, tolerance::scaled(tolerance::ORDER, x.norm()))
}

fn require_projection(p: &Element) -> Result<()> {
    if is_projection(p, default_projection_tol(p)) {
        Ok(())
    } else {
        Err(Error::NotProjection)
    }
}

/// `p ∧ q`: the spectral projection of `p + q` at eigenvalue 2, i.e. onto the
/// vectors fixed by both.
pub fn proj_meet(p: &Element, q: &Element) -> Result<Element> {
    p.check_same_shape(q)?;
    require_projection(p)?;
    require_projection(q)?;
    let sum = p.add(q)?;
    let tol = default_projection_tol(&sum);
    sum.spectral()?
        .apply(|l| if l >= 2.0 - tol { 1.0 } else { 0.0 })
}

/// `p ∨ q = e − ((e − p) ∧ (e − q))`.
pub fn proj_join(p: &Element, q: &Element) -> Result<Element> {
    let e = p.unit_like();
    let meet = proj_meet(&e.sub(p)?, &e.sub(q)?)?;
    e.sub(&meet)
}

/// If `x` dominates the atom `p` (some `λ > 0` with `λp ≤ x`), returns the
/// witness `λ` (the least positive eigenvalue of `x`).
pub fn dominates_atom(x: &Element, p: &Element, tol: f64) -> Result<Option<f64>> {
    x.check_same_shape(p)?;
    if !classify_default(p).is_atom {
        return Err(Error::NotAtom);
    }
    let r = range_projection(x)?;
    if !leq(p, &r, tol)? {
        return Ok(None);
    }
    let lambda = least_positive_eigenvalue(x)?.expect("a range containing an atom is non-zero");
    Ok(leq(&p.scale(lambda), x, tol.max(default_leq_tol(x, p)))?.then_some(lambda))
}

/// Centre of an atomic algebra: the factor identities generate every central
/// projection (as 0/1 combinations); rank-one factors form the disengaged
/// part.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralStructure {
    pub generators: Vec<Element>,
    pub disengaged: Vec<usize>,
}

pub fn central_structure(descriptor: &AlgebraDescriptor) -> CentralStructure {
    let generators = (0..descriptor.factor_count())
        .map(|k| factor_identity(descriptor, k))
        .collect();
    CentralStructure {
        generators,
        disengaged: descriptor.disengaged(),
    }
}

/// Identity of factor `k`, zero elsewhere.
pub fn factor_identity(descriptor: &AlgebraDescriptor, k: usize) -> Element {
    let blocks = descriptor
        .factors()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if i == k {
                Block::unit(f)
            } else {
                Block::zero(f)
            }
        })
        .collect();
    Element::from_blocks(blocks)
}

const CENTRAL_TOL: f64 = 1e-8;

/// If `z` is a sum of factor identities, returns which factors it contains.
pub fn central_support(z: &Element) -> Option<Vec<bool>> {
    z.blocks()
        .iter()
        .map(|b| {
            let f = b.factor();
            let one = Element::from_blocks(vec![Block::unit(&f)]);
            let zero = Element::from_blocks(vec![Block::zero(&f)]);
            let x = Element::from_blocks(vec![b.clone()]);
            if x.dist(&zero).ok()? <= CENTRAL_TOL {
                Some(false)
            } else if x.dist(&one).ok()? <= CENTRAL_TOL {
                Some(true)
            } else {
                None
            }
        })
        .collect()
}

/// `x` cut along a central projection `z`: the part in `U_z M` and the part in
/// `U_{z^⊥} M`, each on its own sub-algebra (or `None` when empty).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralSplit {
    pub inside: Option<Element>,
    pub outside: Option<Element>,
    pub inside_factors: Vec<usize>,
    pub outside_factors: Vec<usize>,
}

impl CentralSplit {
    /// Reassembles the original element.
    pub fn recombine(&self) -> Element {
        let total = self.inside_factors.len() + self.outside_factors.len();
        let mut slots: Vec<Option<Block>> = vec![None; total];
        for (part, idx) in [
            (&self.inside, &self.inside_factors),
            (&self.outside, &self.outside_factors),
        ] {
            if let Some(el) = part {
                for (b, &i) in el.blocks().iter().zip(idx) {
                    slots[i] = Some(b.clone());
                }
            }
        }
        Element::from_blocks(
            slots
                .into_iter()
                .map(|b| b.expect("every factor is on one side"))
                .collect(),
        )
    }
}

pub fn split_by_central(x: &Element, z: &Element) -> Result<CentralSplit> {
    x.check_same_shape(z)?;
    let support = central_support(z).ok_or(Error::NotCentral)?;
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    let (mut inside_factors, mut outside_factors) = (Vec::new(), Vec::new());
    for (i, (b, &s)) in x.blocks().iter().zip(&support).enumerate() {
        if s {
            inside.push(b.clone());
            inside_factors.push(i);
        } else {
            outside.push(b.clone());
            outside_factors.push(i);
        }
    }
    let wrap = |v: Vec<Block>| (!v.is_empty()).then(|| Element::from_blocks(v));
    Ok(CentralSplit {
        inside: wrap(inside),
        outside: wrap(outside),
        inside_factors,
        outside_factors,
    })
}

/// Whether `[0, x]` is totally ordered, i.e. `x = λq` for an atom `q`
/// (`x = 0` counts as true).
pub fn is_totally_ordered_interval_top(x: &Element) -> Result<bool> {
    let d = x.spectral()?;
    let least = d.pairs()[0].0;
    if least < -tolerance::scaled(tolerance::ORDER, x.norm()) {
        return Err(Error::NotInCone(least));
    }
    let nonzero: Vec<_> = d.pairs().iter().filter(|(l, _)| *l != 0.0).collect();
    Ok(match nonzero.as_slice() {
        [] => true,
        [(_, p)] => (projection_rank(p) - 1.0).abs() <= 1e-6,
        _ => false,
    })
}

/// Largest eigenvalue below the top one (the second entry of the spectrum
/// counted with multiplicity, from above).
pub fn second_largest_eigenvalue(x: &Element) -> f64 {
    let ev = spectral::eigenvalues(x);
    if ev.len() < 2 {
        return f64::NEG_INFINITY;
    }
    ev[ev.len() - 2]
}
