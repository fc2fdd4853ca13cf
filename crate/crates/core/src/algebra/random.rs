//! Seeded random elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::descriptor::{AlgebraDescriptor, DivisionRing, FactorDescriptor};
use crate::algebra::element::{Block, Element, HermBlock, SpinBlock};
use crate::error::Result;
use crate::matrix::QMat;
use crate::quaternion::Quaternion;
use crate::spectral;

/// Which subset of the algebra a random element is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementClass {
    General,
    /// `y²`
    Cone,
    /// `y² + 0.1 e`
    Interior,
    /// Spectral clamp into `[0, 1]`.
    Effect,
    /// Spectral clamp into `[0.05, 1]`.
    InvertibleEffect,
    /// Positive spectral projection of a general element.
    Projection,
    /// Top spectral projection of a general element inside one random factor.
    Atom,
}

impl ElementClass {
    pub const ALL: [ElementClass; 7] = [
        ElementClass::General,
        ElementClass::Cone,
        ElementClass::Interior,
        ElementClass::Effect,
        ElementClass::InvertibleEffect,
        ElementClass::Projection,
        ElementClass::Atom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementClass::General => "general",
            ElementClass::Cone => "cone",
            ElementClass::Interior => "interior",
            ElementClass::Effect => "effect",
            ElementClass::InvertibleEffect => "invertible-effect",
            ElementClass::Projection => "projection",
            ElementClass::Atom => "atom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ElementClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

pub const INTERIOR_SHIFT: f64 = 0.1;
pub const INVERTIBLE_EFFECT_FLOOR: f64 = 0.05;

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_block(factor: &FactorDescriptor, rng: &mut impl Rng) -> Block {
    match *factor {
        FactorDescriptor::Hermitian { n, ring } => {
            let mut m = QMat::zeros(n, n);
            for i in 0..n {
                m.set(i, i, Quaternion::real(gaussian(rng)));
                for j in i + 1..n {
                    let mut c = [0.0; 4];
                    for slot in c.iter_mut().take(ring.dim()) {
                        *slot = gaussian(rng) * std::f64::consts::FRAC_1_SQRT_2;
                    }
                    let q = Quaternion::new(c[0], c[1], c[2], c[3]);
                    m.set(i, j, q);
                    m.set(j, i, q.conj());
                }
            }
            Block::Herm(HermBlock::project(ring, &m))
        }
        FactorDescriptor::Spin { d } => Block::Spin(SpinBlock {
            alpha: gaussian(rng),
            v: (0..d).map(|_| gaussian(rng)).collect(),
        }),
    }
}

/// General element drawn from an existing generator.
pub fn random_general(descriptor: &AlgebraDescriptor, rng: &mut impl Rng) -> Element {
    Element::from_blocks(
        descriptor
            .factors()
            .iter()
            .map(|f| random_block(f, rng))
            .collect(),
    )
}

/// Element of the requested class drawn from an existing generator.
pub fn random_with(
    descriptor: &AlgebraDescriptor,
    class: ElementClass,
    rng: &mut impl Rng,
) -> Result<Element> {
    let g = random_general(descriptor, rng);
    match class {
        ElementClass::General => Ok(g),
        ElementClass::Cone => Ok(g.square()),
        ElementClass::Interior => Ok(g.square().add_unit(INTERIOR_SHIFT)),
        ElementClass::Effect => spectral::apply_function(&g, |t| (0.5 + 0.25 * t).clamp(0.0, 1.0)),
        ElementClass::InvertibleEffect => {
            spectral::apply_function(&g, |t| (0.5 + 0.25 * t).clamp(INVERTIBLE_EFFECT_FLOOR, 1.0))
        }
        ElementClass::Projection => {
            spectral::apply_function(&g, |t| if t > 0.0 { 1.0 } else { 0.0 })
        }
        ElementClass::Atom => {
            let k = rng.random_range(0..descriptor.factor_count());
            let local = AlgebraDescriptor::single(descriptor.factors()[k])?;
            let y = random_general(&local, rng);
            let top = y
                .spectral()?
                .pairs()
                .last()
                .expect("non-empty spectrum")
                .1
                .clone();
            let mut blocks: Vec<Block> = descriptor.factors().iter().map(Block::zero).collect();
            blocks[k] = top.into_blocks().pop().expect("single block");
            Ok(Element::from_blocks(blocks))
        }
    }
}

/// Deterministic random element: the same `(descriptor, seed, class)` always
/// yields the same element.
pub fn random_element(
    descriptor: &AlgebraDescriptor,
    seed: u64,
    class: ElementClass,
) -> Result<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_with(descriptor, class, &mut rng)
}

/// Random unit vector in `F^n` as a column.
pub fn random_unit_vector(n: usize, ring: DivisionRing, rng: &mut impl Rng) -> Vec<Quaternion> {
    loop {
        let v: Vec<Quaternion> = (0..n)
            .map(|_| {
                let mut c = [0.0; 4];
                for slot in c.iter_mut().take(ring.dim()) {
                    *slot = gaussian(rng);
                }
                Quaternion::new(c[0], c[1], c[2], c[3])
            })
            .collect();
        let norm = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|q| q.scale(1.0 / norm)).collect();
        }
    }
}
