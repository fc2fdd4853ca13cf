//! Jordan isomorphisms between atomic algebras with the same factors:
//! `x ↦ u τ(x) u*` on Hermitian factors and `(α, v) ↦ (α, Ov)` on spin
//! factors, together with a matching of source factors to target factors.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{
    random_unit_vector, AlgebraDescriptor, Block, DivisionRing, Element, HermBlock, SpinBlock,
};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::quaternion::Quaternion;

/// Tolerance on `u u* = 1` and `Oᵀ O = 1`.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Action on a single factor.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorJordanMap {
    /// `x ↦ u x u*`, or `x ↦ u x̄ u*` when `conjugate` (complex factors only).
    Hermitian {
        u: QMat,
        ring: DivisionRing,
        conjugate: bool,
    },
    /// `(α, v) ↦ (α, O v)` with `o` row-major `d x d`.
    Spin { o: Vec<Vec<f64>> },
}

fn conj_complex(m: &QMat) -> QMat {
    m.map(|q| Quaternion::new(q.a, -q.b, q.c, q.d))
}

impl FactorJordanMap {
    pub fn identity(factor: &crate::algebra::FactorDescriptor) -> Self {
        match *factor {
            crate::algebra::FactorDescriptor::Hermitian { n, ring } => FactorJordanMap::Hermitian {
                u: QMat::identity(n),
                ring,
                conjugate: false,
            },
            crate::algebra::FactorDescriptor::Spin { d } => FactorJordanMap::Spin {
                o: (0..d)
                    .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FactorJordanMap::Hermitian { u, ring, conjugate } => {
                if u.rows() != u.cols() || u.rows() == 0 {
                    return Err(Error::ShapeMismatch("isometry u must be square".into()));
                }
                if *conjugate && *ring != DivisionRing::Complex {
                    return Err(Error::InvalidDescriptor(
                        "entrywise conjugation is only offered on complex factors".into(),
                    ));
                }
                let foreign = u.data().iter().any(|q| match ring {
                    DivisionRing::Real => q.b != 0.0 || q.c != 0.0 || q.d != 0.0,
                    DivisionRing::Complex => q.c != 0.0 || q.d != 0.0,
                    DivisionRing::Quaternion => false,
                });
                if foreign {
                    return Err(Error::InvalidDescriptor(format!(
                        "isometry entries are not in {}",
                        ring.symbol()
                    )));
                }
                let residual = u.isometry_residual();
                if !(residual <= ISOMETRY_TOL) {
                    return Err(Error::NotIsometry(residual));
                }
                Ok(())
            }
            FactorJordanMap::Spin { o } => {
                let d = o.len();
                if d < 2 || o.iter().any(|r| r.len() != d) {
                    return Err(Error::ShapeMismatch(
                        "orthogonal matrix O must be d x d with d >= 2".into(),
                    ));
                }
                let mut residual: f64 = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        let g: f64 = (0..d).map(|k| o[k][i] * o[k][j]).sum();
                        let target = if i == j { 1.0 } else { 0.0 };
                        residual = residual.max((g - target).abs());
                    }
                }
                if !(residual <= ISOMETRY_TOL) {
                    return Err(Error::NotOrthogonal(residual));
                }
                Ok(())
            }
        }
    }

    fn source_factor(&self) -> crate::algebra::FactorDescriptor {
        match self {
            FactorJordanMap::Hermitian { u, ring, .. } => {
                crate::algebra::FactorDescriptor::Hermitian {
                    n: u.rows(),
                    ring: *ring,
                }
            }
            FactorJordanMap::Spin { o } => crate::algebra::FactorDescriptor::Spin { d: o.len() },
        }
    }

    fn apply(&self, block: &Block) -> Result<Block> {
        match (self, block) {
            (FactorJordanMap::Hermitian { u, ring, conjugate }, Block::Herm(h))
                if h.ring() == *ring && h.n() == u.rows() =>
            {
                let x = if *conjugate {
                    conj_complex(h.mat())
                } else {
                    h.mat().clone()
                };
                let y = u.matmul(&x).matmul(&u.adjoint());
                Ok(Block::Herm(HermBlock::project(*ring, &y)))
            }
            (FactorJordanMap::Spin { o }, Block::Spin(s)) if s.d() == o.len() => {
                Ok(Block::Spin(SpinBlock {
                    alpha: s.alpha,
                    v: o.iter()
                        .map(|row| row.iter().zip(&s.v).map(|(a, b)| a * b).sum())
                        .collect(),
                }))
            }
            _ => Err(Error::ShapeMismatch(format!(
                "jordan map on {} applied to {}",
                self.source_factor(),
                block.factor()
            ))),
        }
    }

    pub fn inverse(&self) -> FactorJordanMap {
        match self {
            // x = τ(u* y u) = τ(u*) τ(y) τ(u)
            FactorJordanMap::Hermitian { u, ring, conjugate } => {
                let ua = u.adjoint();
                FactorJordanMap::Hermitian {
                    u: if *conjugate { conj_complex(&ua) } else { ua },
                    ring: *ring,
                    conjugate: *conjugate,
                }
            }
            FactorJordanMap::Spin { o } => {
                let d = o.len();
                FactorJordanMap::Spin {
                    o: (0..d).map(|i| (0..d).map(|j| o[j][i]).collect()).collect(),
                }
            }
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FactorJordanMap) -> Result<FactorJordanMap> {
        match (self, first) {
            (
                FactorJordanMap::Hermitian {
                    u: u2,
                    ring,
                    conjugate: c2,
                },
                FactorJordanMap::Hermitian {
                    u: u1,
                    conjugate: c1,
                    ..
                },
            ) if u1.rows() == u2.rows() => {
                // u2 τ2(u1 τ1(x) u1*) u2* = (u2 τ2(u1)) τ2τ1(x) (u2 τ2(u1))*
                let u1t = if *c2 { conj_complex(u1) } else { u1.clone() };
                Ok(FactorJordanMap::Hermitian {
                    u: u2.matmul(&u1t),
                    ring: *ring,
                    conjugate: c1 ^ c2,
                })
            }
            (FactorJordanMap::Spin { o: o2 }, FactorJordanMap::Spin { o: o1 })
                if o1.len() == o2.len() =>
            {
                let d = o1.len();
                Ok(FactorJordanMap::Spin {
                    o: (0..d)
                        .map(|i| {
                            (0..d)
                                .map(|j| (0..d).map(|k| o2[i][k] * o1[k][j]).sum())
                                .collect()
                        })
                        .collect(),
                })
            }
            _ => Err(Error::ShapeMismatch(
                "cannot compose jordan maps of different factors".into(),
            )),
        }
    }

    /// Random map on `factor`: Gram-Schmidt isometry (with a random
    /// conjugation flag on complex factors) or a random orthogonal matrix.
    pub fn random(factor: &crate::algebra::FactorDescriptor, rng: &mut impl Rng) -> Self {
        match *factor {
            crate::algebra::FactorDescriptor::Hermitian { n, ring } => {
                let mut u = QMat::zeros(n, n);
                let mut cols: Vec<Vec<Quaternion>> = Vec::with_capacity(n);
                while cols.len() < n {
                    let mut v = random_unit_vector(n, ring, rng);
                    for c in &cols {
                        // v ← v − c ⟨c, v⟩
                        let ip = c
                            .iter()
                            .zip(&v)
                            .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * *b);
                        for (vi, ci) in v.iter_mut().zip(c) {
                            *vi = *vi - *ci * ip;
                        }
                    }
                    let norm = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
                    if norm > 1e-3 {
                        cols.push(v.into_iter().map(|q| q.scale(1.0 / norm)).collect());
                    }
                }
                for (j, c) in cols.iter().enumerate() {
                    u.set_column(j, c);
                }
                let conjugate = ring == DivisionRing::Complex && rng.random_bool(0.5);
                FactorJordanMap::Hermitian { u, ring, conjugate }
            }
            crate::algebra::FactorDescriptor::Spin { d } => {
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
                while rows.len() < d {
                    let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                    for r in &rows {
                        let ip: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                        for (vi, ri) in v.iter_mut().zip(r) {
                            *vi -= ip * ri;
                        }
                    }
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-3 {
                        rows.push(v.into_iter().map(|x| x / norm).collect());
                    }
                }
                FactorJordanMap::Spin { o: rows }
            }
        }
    }
}

/// Jordan isomorphism `M → N`. Source factor `i` is sent to target factor
/// `matching[i]` by `maps[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanIsomorphism {
    matching: Vec<usize>,
    maps: Vec<FactorJordanMap>,
}

impl JordanIsomorphism {
    pub fn new(matching: Vec<usize>, maps: Vec<FactorJordanMap>) -> Result<Self> {
        if matching.len() != maps.len() || maps.is_empty() {
            return Err(Error::ShapeMismatch(
                "one jordan map per matched factor".into(),
            ));
        }
        let mut seen = vec![false; matching.len()];
        for &j in &matching {
            if j >= seen.len() || seen[j] {
                return Err(Error::NotBijection(format!("factor matching {matching:?}")));
            }
            seen[j] = true;
        }
        for m in &maps {
            m.validate()?;
        }
        Ok(JordanIsomorphism { matching, maps })
    }

    pub fn identity(descriptor: &AlgebraDescriptor) -> Self {
        JordanIsomorphism {
            matching: (0..descriptor.factor_count()).collect(),
            maps: descriptor
                .factors()
                .iter()
                .map(FactorJordanMap::identity)
                .collect(),
        }
    }

    /// Single-factor isomorphism.
    pub fn single(map: FactorJordanMap) -> Result<Self> {
        JordanIsomorphism::new(vec![0], vec![map])
    }

    pub fn random(descriptor: &AlgebraDescriptor, rng: &mut impl Rng) -> Self {
        JordanIsomorphism {
            matching: (0..descriptor.factor_count()).collect(),
            maps: descriptor
                .factors()
                .iter()
                .map(|f| FactorJordanMap::random(f, rng))
                .collect(),
        }
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn maps(&self) -> &[FactorJordanMap] {
        &self.maps
    }

    pub fn source(&self) -> AlgebraDescriptor {
        AlgebraDescriptor::new(self.maps.iter().map(|m| m.source_factor()).collect())
            .expect("validated on construction")
    }

    /// Target descriptor: source factors permuted by the matching.
    pub fn target(&self) -> AlgebraDescriptor {
        let mut factors = vec![None; self.maps.len()];
        for (m, &j) in self.maps.iter().zip(&self.matching) {
            factors[j] = Some(m.source_factor());
        }
        AlgebraDescriptor::new(factors.into_iter().map(|f| f.expect("bijective")).collect())
            .expect("validated on construction")
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.blocks().len() != self.maps.len() {
            return Err(Error::ShapeMismatch(format!(
                "jordan isomorphism on {} factors applied to {}",
                self.maps.len(),
                x.descriptor()
            )));
        }
        let mut out: Vec<Option<Block>> = vec![None; self.maps.len()];
        for ((m, &j), b) in self.maps.iter().zip(&self.matching).zip(x.blocks()) {
            out[j] = Some(m.apply(b)?);
        }
        Ok(Element::from_blocks(
            out.into_iter().map(|b| b.expect("bijective")).collect(),
        ))
    }

    pub fn inverse(&self) -> JordanIsomorphism {
        let n = self.maps.len();
        let mut matching = vec![0; n];
        let mut maps = vec![None; n];
        for (i, (&j, m)) in self.matching.iter().zip(&self.maps).enumerate() {
            matching[j] = i;
            maps[j] = Some(m.inverse());
        }
        JordanIsomorphism {
            matching,
            maps: maps.into_iter().map(|m| m.expect("bijective")).collect(),
        }
    }
}

/// Free-function form of [`JordanIsomorphism::apply`].
pub fn jordan_apply(j: &JordanIsomorphism, x: &Element) -> Result<Element> {
    j.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_element, ElementClass, FactorDescriptor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kinds() -> Vec<AlgebraDescriptor> {
        vec![
            AlgebraDescriptor::single(FactorDescriptor::hermitian(3, DivisionRing::Real).unwrap())
                .unwrap(),
            AlgebraDescriptor::single(
                FactorDescriptor::hermitian(3, DivisionRing::Complex).unwrap(),
            )
            .unwrap(),
            AlgebraDescriptor::single(
                FactorDescriptor::hermitian(3, DivisionRing::Quaternion).unwrap(),
            )
            .unwrap(),
            AlgebraDescriptor::single(FactorDescriptor::spin(4).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn identity_data_is_identity() {
        for d in kinds() {
            let x = random_element(&d, 3, ElementClass::General).unwrap();
            assert_eq!(JordanIsomorphism::identity(&d).apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn permutation_swaps_diagonal() {
        let mut u = QMat::zeros(2, 2);
        u.set(0, 1, Quaternion::ONE);
        u.set(1, 0, Quaternion::ONE);
        let j = JordanIsomorphism::single(FactorJordanMap::Hermitian {
            u,
            ring: DivisionRing::Real,
            conjugate: false,
        })
        .unwrap();
        assert_eq!(
            j.apply(&Element::real_diag(&[2.0, 7.0])).unwrap(),
            Element::real_diag(&[7.0, 2.0])
        );
    }

    #[test]
    fn spin_negation_preserves_product() {
        let o = vec![
            vec![-1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ];
        let j = JordanIsomorphism::single(FactorJordanMap::Spin { o }).unwrap();
        let x = Element::spin(0.5, vec![1.0, 2.0, 3.0]).unwrap();
        let y = Element::spin(-1.0, vec![0.0, 1.0, -2.0]).unwrap();
        assert_eq!(
            j.apply(&x).unwrap(),
            Element::spin(0.5, vec![-1.0, -2.0, -3.0]).unwrap()
        );
        let lhs = j.apply(&x.jordan_product(&y).unwrap()).unwrap();
        let rhs = j
            .apply(&x)
            .unwrap()
            .jordan_product(&j.apply(&y).unwrap())
            .unwrap();
        assert!(lhs.dist(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn random_maps_are_unital_jordan_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in kinds() {
            for seed in 0..10 {
                let j = JordanIsomorphism::random(&d, &mut rng);
                for m in j.maps() {
                    m.validate().unwrap();
                }
                let e = Element::unit(&d);
                assert!(j.apply(&e).unwrap().dist(&e).unwrap() < 1e-12);
                let x = random_element(&d, seed, ElementClass::General).unwrap();
                let y = random_element(&d, seed + 100, ElementClass::General).unwrap();
                let lhs = j.apply(&x.jordan_product(&y).unwrap()).unwrap();
                let rhs = j
                    .apply(&x)
                    .unwrap()
                    .jordan_product(&j.apply(&y).unwrap())
                    .unwrap();
                assert!(lhs.dist(&rhs).unwrap() < 1e-11 * (1.0 + lhs.norm()));
                let back = j.inverse().apply(&j.apply(&x).unwrap()).unwrap();
                assert!(back.dist(&x).unwrap() < 1e-12 * (1.0 + x.norm()));
                let composed = j.maps()[0].after(&j.inverse().maps()[0]).unwrap();
                let w = JordanIsomorphism::single(composed)
                    .unwrap()
                    .apply(&x)
                    .unwrap();
                assert!(w.dist(&x).unwrap() < 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn rejects_invalid_data() {
        let bad = QMat::identity(2).scale(2.0);
        let err = FactorJordanMap::Hermitian {
            u: bad,
            ring: DivisionRing::Real,
            conjugate: false,
        }
        .validate();
        assert_eq!(err.unwrap_err().code(), "NOT_ISOMETRY");
        let err = FactorJordanMap::Spin {
            o: vec![vec![1.0, 1.0], vec![0.0, 1.0]],
        }
        .validate();
        assert_eq!(err.unwrap_err().code(), "NOT_ORTHOGONAL");
        let err = FactorJordanMap::Hermitian {
            u: QMat::identity(2),
            ring: DivisionRing::Quaternion,
            conjugate: true,
        }
        .validate();
        assert!(err.is_err());
        assert_eq!(
            JordanIsomorphism::new(
                vec![0, 0],
                vec![
                    FactorJordanMap::identity(&FactorDescriptor::spin(2).unwrap()),
                    FactorJordanMap::identity(&FactorDescriptor::spin(2).unwrap()),
                ]
            )
            .unwrap_err()
            .code(),
            "NOT_BIJECTION"
        );
    }

    #[test]
    fn matching_permutes_factors() {
        let d = AlgebraDescriptor::new(vec![
            FactorDescriptor::spin(2).unwrap(),
            FactorDescriptor::hermitian(2, DivisionRing::Real).unwrap(),
        ])
        .unwrap();
        let j = JordanIsomorphism::new(
            vec![1, 0],
            d.factors().iter().map(FactorJordanMap::identity).collect(),
        )
        .unwrap();
        assert_eq!(j.target().to_string(), "Herm(2,R) + Spin(2)");
        let x = random_element(&d, 1, ElementClass::General).unwrap();
        let y = j.apply(&x).unwrap();
        assert_eq!(y.blocks()[0], x.blocks()[1]);
        assert_eq!(y.blocks()[1], x.blocks()[0]);
        assert_eq!(j.inverse().apply(&y).unwrap(), x);
    }
}
