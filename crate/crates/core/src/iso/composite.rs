//! Order isomorphisms of `[0, e]` for general atomic algebras: scalar order
//! isomorphisms on the rank-one (disengaged) factors routed by a bijection,
//! and one closed-form factor isomorphism per engaged factor.

use crate::algebra::{AlgebraDescriptor, Block, Element, HermBlock};
use crate::error::{Error, Result};

use super::factor::FactorOrderIso;
use super::phi::PhiParam;
use super::{require_effect, Direction};

/// Order isomorphism of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarOrderIso {
    Phi(PhiParam),
    /// Piecewise linear through `knots`, from `(0, 0)` to `(1, 1)`.
    Pwl(Vec<(f64, f64)>),
}

fn interpolate(knots: &[(f64, f64)], s: f64, swap: bool) -> f64 {
    let key = |k: &(f64, f64)| if swap { k.1 } else { k.0 };
    let val = |k: &(f64, f64)| if swap { k.0 } else { k.1 };
    let i = knots
        .partition_point(|k| key(k) <= s)
        .clamp(1, knots.len() - 1);
    let (a, b) = (&knots[i - 1], &knots[i]);
    val(a) + (s - key(a)) * (val(b) - val(a)) / (key(b) - key(a))
}

impl ScalarOrderIso {
    pub fn phi(t: f64) -> Result<Self> {
        Ok(ScalarOrderIso::Phi(PhiParam::new(t)?))
    }

    pub fn pwl(knots: Vec<(f64, f64)>) -> Result<Self> {
        let iso = ScalarOrderIso::Pwl(knots);
        iso.validate()?;
        Ok(iso)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScalarOrderIso::Phi(_) => Ok(()),
            ScalarOrderIso::Pwl(knots) => {
                if knots.len() < 2 {
                    return Err(Error::InvalidScalarIso(
                        "at least two knots are required".into(),
                    ));
                }
                if knots[0] != (0.0, 0.0) || knots[knots.len() - 1] != (1.0, 1.0) {
                    return Err(Error::InvalidScalarIso(
                        "knots must run from (0,0) to (1,1)".into(),
                    ));
                }
                for w in knots.windows(2) {
                    if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                        return Err(Error::InvalidScalarIso(format!(
                            "knots {:?} and {:?} are not strictly increasing",
                            w[0], w[1]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, s: f64) -> f64 {
        match self {
            ScalarOrderIso::Phi(t) => t.scalar(s),
            ScalarOrderIso::Pwl(knots) => interpolate(knots, s, false),
        }
    }

    pub fn inverse(&self, s: f64) -> f64 {
        match self {
            ScalarOrderIso::Phi(t) => t.inverse().scalar(s),
            ScalarOrderIso::Pwl(knots) => interpolate(knots, s, true),
        }
    }
}

/// Engaged source factor `source` sent to target factor `target` by `iso`.
#[derive(Debug, Clone, PartialEq)]
pub struct EngagedPart {
    pub source: usize,
    pub target: usize,
    pub iso: FactorOrderIso,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeOrderIso {
    source: AlgebraDescriptor,
    target: AlgebraDescriptor,
    sigma: Vec<usize>,
    scalar_isos: Vec<ScalarOrderIso>,
    engaged: Vec<EngagedPart>,
}

fn check_bijection(what: &str, from: &[usize], onto: &[usize]) -> Result<()> {
    let mut a = from.to_vec();
    a.sort_unstable();
    let mut b = onto.to_vec();
    b.sort_unstable();
    if a.windows(2).any(|w| w[0] == w[1]) || a != b {
        return Err(Error::NotBijection(format!(
            "{what}: {from:?} is not a bijection onto {onto:?}"
        )));
    }
    Ok(())
}

fn rank_one_value(b: &Block) -> f64 {
    match b {
        Block::Herm(h) => h.get(0, 0).a,
        Block::Spin(_) => unreachable!("spin factors have rank two"),
    }
}

fn rank_one_block(like: &crate::algebra::FactorDescriptor, value: f64) -> Block {
    match *like {
        crate::algebra::FactorDescriptor::Hermitian { ring, .. } => {
            Block::Herm(HermBlock::diagonal(ring, &[value]))
        }
        crate::algebra::FactorDescriptor::Spin { .. } => unreachable!("spin factors have rank two"),
    }
}

impl CompositeOrderIso {
    /// `sigma[k]` and `scalar_isos[k]` belong to the `k`-th disengaged
    /// source factor, in increasing index order.
    pub fn new(
        source: AlgebraDescriptor,
        target: AlgebraDescriptor,
        sigma: Vec<usize>,
        scalar_isos: Vec<ScalarOrderIso>,
        engaged: Vec<EngagedPart>,
    ) -> Result<Self> {
        let src_dis = source.disengaged();
        if sigma.len() != src_dis.len() || scalar_isos.len() != src_dis.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} disengaged source factors need as many sigma entries and scalar isomorphisms",
                src_dis.len()
            )));
        }
        check_bijection("sigma", &sigma, &target.disengaged())?;
        for s in &scalar_isos {
            s.validate()?;
        }
        let sources: Vec<usize> = engaged.iter().map(|p| p.source).collect();
        let targets: Vec<usize> = engaged.iter().map(|p| p.target).collect();
        check_bijection("engaged sources", &sources, &source.engaged())?;
        check_bijection("engaged matching", &targets, &target.engaged())?;
        for p in &engaged {
            let s = AlgebraDescriptor::single(source.factors()[p.source])?;
            let t = AlgebraDescriptor::single(target.factors()[p.target])?;
            if p.iso.source() != s || p.iso.target() != t {
                return Err(Error::ShapeMismatch(format!(
                    "engaged pair {} -> {} expects {s} -> {t}, parameters act on {} -> {}",
                    p.source,
                    p.target,
                    p.iso.source(),
                    p.iso.target()
                )));
            }
        }
        Ok(CompositeOrderIso {
            source,
            target,
            sigma,
            scalar_isos,
            engaged,
        })
    }

    /// Identity routing with the standard factor map on every engaged factor.
    pub fn standard(descriptor: &AlgebraDescriptor) -> Self {
        let dis = descriptor.disengaged();
        let engaged = descriptor
            .engaged()
            .into_iter()
            .map(|k| EngagedPart {
                source: k,
                target: k,
                iso: FactorOrderIso::standard(
                    &AlgebraDescriptor::single(descriptor.factors()[k]).unwrap(),
                ),
            })
            .collect();
        CompositeOrderIso {
            source: descriptor.clone(),
            target: descriptor.clone(),
            sigma: dis.clone(),
            scalar_isos: dis
                .iter()
                .map(|_| ScalarOrderIso::Phi(PhiParam::new(0.0).unwrap()))
                .collect(),
            engaged,
        }
    }

    pub fn source(&self) -> &AlgebraDescriptor {
        &self.source
    }

    pub fn target(&self) -> &AlgebraDescriptor {
        &self.target
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn scalar_isos(&self) -> &[ScalarOrderIso] {
        &self.scalar_isos
    }

    pub fn engaged(&self) -> &[EngagedPart] {
        &self.engaged
    }

    pub fn apply(&self, x: &Element, direction: Direction) -> Result<Element> {
        let (from, to) = match direction {
            Direction::Forward => (&self.source, &self.target),
            Direction::Backward => (&self.target, &self.source),
        };
        x.check_descriptor(from)?;
        require_effect(x)?;
        let mut out: Vec<Option<Block>> = vec![None; to.factor_count()];
        for ((&src, &tgt), f) in self
            .source
            .disengaged()
            .iter()
            .zip(&self.sigma)
            .zip(&self.scalar_isos)
        {
            match direction {
                Direction::Forward => {
                    let v = f.apply(rank_one_value(x.block(src)));
                    out[tgt] = Some(rank_one_block(&to.factors()[tgt], v));
                }
                Direction::Backward => {
                    let v = f.inverse(rank_one_value(x.block(tgt)));
                    out[src] = Some(rank_one_block(&to.factors()[src], v));
                }
            }
        }
        for p in &self.engaged {
            let (i, o) = match direction {
                Direction::Forward => (p.source, p.target),
                Direction::Backward => (p.target, p.source),
            };
            let local = Element::from_blocks(vec![x.block(i).clone()]);
            let image = match direction {
                Direction::Forward => p.iso.apply(&local)?,
                Direction::Backward => p.iso.inverse_apply(&local)?,
            };
            out[o] = Some(image.into_blocks().pop().expect("single block"));
        }
        Ok(Element::from_blocks(
            out.into_iter()
                .map(|b| b.expect("bijective routing"))
                .collect(),
        ))
    }
}

/// Parameter used on the `n`-th coordinate of the counterexample:
/// `t_n = 2 − 2^n`, the unique `t` with `φ_t(½) = 2^{-n}`.
pub fn counterexample_parameter(n: u32) -> f64 {
    2.0 - 2f64.powi(n as i32)
}

/// Product of `φ_{t_n}` on `⊕_{n=1}^N ℝ` together with the image of `½e`,
/// whose `n`-th coordinate is `2^{-n}`.
pub fn counterexample_iso(n: usize) -> Result<(CompositeOrderIso, Element)> {
    if n == 0 {
        return Err(Error::InvalidDescriptor(
            "counterexample needs N >= 1".into(),
        ));
    }
    let d = AlgebraDescriptor::real_sequence(n)?;
    let scalar_isos = (1..=n as u32)
        .map(|k| ScalarOrderIso::phi(counterexample_parameter(k)))
        .collect::<Result<Vec<_>>>()?;
    let iso = CompositeOrderIso::new(d.clone(), d.clone(), (0..n).collect(), scalar_isos, vec![])?;
    let image = iso.apply(&Element::unit(&d).scale(0.5), Direction::Forward)?;
    Ok((iso, image))
}
