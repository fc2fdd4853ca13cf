//! Recovery of `(t, z, J)` from black-box evaluations of an order
//! isomorphism `g` of `[0, e]`.
//!
//! The probe `f̂(x) = g((x + e)^{-1})^{-1} − e` is the linear cone map
//! `U_y J`. It is assembled on a basis, `y = f̂(e)^{1/2}`, `J = U_{y^{-1}} f̂`
//! is decoded into isometry / orthogonal data, and the result is converted
//! by [`param_from_y`].

use nalgebra::DMatrix;

use crate::algebra::{
    random_element, AlgebraDescriptor, Block, DivisionRing, Element, ElementClass,
    FactorDescriptor, HermBlock,
};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::quaternion::Quaternion;
use crate::spectral::{invert_element, sqrt, InverseMode};

use super::factor::{param_from_y, FactorOrderIso};
use super::jordan::{FactorJordanMap, JordanIsomorphism};

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    /// Passed to [`param_from_y`]; `None` selects the default.
    pub lambda: Option<f64>,
    /// Shift `c` making `b + c e` interior for every basis element `b`.
    pub shift: f64,
    /// Random cone elements used for the linearity and product checks.
    pub check_samples: usize,
    pub seed: u64,
    /// Relative residual allowed in the linearity check.
    pub linearity_tol: f64,
    /// Relative residual allowed in the Jordan-homomorphism check.
    pub homomorphism_tol: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            lambda: None,
            shift: 2.0,
            check_samples: 3,
            seed: 0x5eed,
            linearity_tol: 1e-6,
            homomorphism_tol: 1e-6,
        }
    }
}

fn rel(a: &Element, b: &Element) -> Result<f64> {
    Ok(a.dist(b)? / 1f64.max(a.norm()).max(b.norm()))
}

fn combine(images: &[Element], coords: &[f64]) -> Element {
    let mut acc = images[0].zero_like();
    for (img, &c) in images.iter().zip(coords) {
        if c != 0.0 {
            acc = acc.lin_comb_unchecked(1.0, img, c);
        }
    }
    acc
}

fn herm_mat(x: &Element) -> &QMat {
    match x.block(0) {
        Block::Herm(h) => h.mat(),
        Block::Spin(_) => unreachable!("hermitian factor"),
    }
}

fn mat_vec(m: &QMat, v: &[Quaternion]) -> Vec<Quaternion> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(Quaternion::ZERO, |acc, k| acc + m.get(i, k) * v[k]))
        .collect()
}

// Modified Gram-Schmidt on the columns of u (right-linear inner product).
fn orthonormalize(u: &QMat) -> QMat {
    let n = u.cols();
    let mut cols: Vec<Vec<Quaternion>> = (0..n).map(|j| u.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let ip = cols[k]
                .iter()
                .zip(&cols[j])
                .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * *b);
            let ck = cols[k].clone();
            for (v, c) in cols[j].iter_mut().zip(&ck) {
                *v = *v - *c * ip;
            }
        }
        let norm = cols[j].iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v = v.scale(1.0 / norm);
        }
    }
    let mut out = QMat::zeros(u.rows(), n);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

// Unit quaternion c with c̄ q c = k_q for q = i, j, k: null vector of
// c ↦ (q c − c k_q)_q.
fn solve_phase(images: &[Quaternion; 3]) -> Quaternion {
    let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let imag = [Quaternion::I, Quaternion::J, Quaternion::K];
    let m = DMatrix::from_fn(12, 4, |r, l| {
        let (q, comp) = (r / 4, r % 4);
        (imag[q] * units[l] - units[l] * images[q]).components()[comp]
    });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (idx, _) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &s)| if s < best.1 { (i, s) } else { best },
            );
    let c = Quaternion::new(v_t[(idx, 0)], v_t[(idx, 1)], v_t[(idx, 2)], v_t[(idx, 3)]);
    c.scale(1.0 / c.norm())
}

fn decode_hermitian(
    n: usize,
    ring: DivisionRing,
    j_of: &dyn Fn(&Element) -> Element,
) -> Result<FactorJordanMap> {
    let unit = |i: usize, jj: usize, q: Quaternion| {
        let mut m = QMat::zeros(n, n);
        m.set(i, jj, q);
        m.set(jj, i, q.conj());
        Element::herm(HermBlock::project(ring, &m))
    };
    if n == 1 {
        return Ok(FactorJordanMap::Hermitian {
            u: QMat::identity(1),
            ring,
            conjugate: false,
        });
    }
    // first column from the rank-one projection J(E_11)
    let p1 = j_of(&unit(0, 0, Quaternion::real(0.5)));
    let p1 = herm_mat(&p1);
    let m = (0..n)
        .max_by(|&a, &b| p1.get(a, a).a.total_cmp(&p1.get(b, b).a))
        .unwrap();
    let pivot = p1.get(m, m).a;
    if !(pivot > 0.0) {
        return Err(Error::NotJordanHomomorphism(f64::NAN));
    }
    let u1: Vec<Quaternion> = (0..n)
        .map(|i| p1.get(i, m).scale(1.0 / pivot.sqrt()))
        .collect();
    let mut u = QMat::zeros(n, n);
    u.set_column(0, &u1);
    for c in 1..n {
        let a = j_of(&unit(0, c, Quaternion::ONE));
        u.set_column(c, &mat_vec(herm_mat(&a), &u1));
    }
    let u = orthonormalize(&u);
    let kernel = |q: Quaternion| {
        let img = j_of(&unit(0, 1, q));
        u.adjoint().matmul(herm_mat(&img)).matmul(&u).get(0, 1)
    };
    match ring {
        DivisionRing::Real => Ok(FactorJordanMap::Hermitian {
            u,
            ring,
            conjugate: false,
        }),
        DivisionRing::Complex => {
            let conjugate = kernel(Quaternion::I).b < 0.0;
            Ok(FactorJordanMap::Hermitian { u, ring, conjugate })
        }
        DivisionRing::Quaternion => {
            let c = solve_phase(&[
                kernel(Quaternion::I),
                kernel(Quaternion::J),
                kernel(Quaternion::K),
            ]);
            let u0 = u.map(|q| q * c.conj());
            Ok(FactorJordanMap::Hermitian {
                u: orthonormalize(&u0),
                ring,
                conjugate: false,
            })
        }
    }
}

fn decode_spin(d: usize, j_of: &dyn Fn(&Element) -> Element) -> Result<FactorJordanMap> {
    let mut o = DMatrix::<f64>::zeros(d, d);
    for k in 0..d {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        match j_of(&Element::spin(0.0, v)?).block(0) {
            Block::Spin(s) => {
                for i in 0..d {
                    o[(i, k)] = s.v[i];
                }
            }
            Block::Herm(_) => unreachable!("spin factor"),
        }
    }
    // nearest orthogonal matrix
    let svd = o.svd(true, true);
    let q = svd.u.expect("requested") * svd.v_t.expect("requested");
    Ok(FactorJordanMap::Spin {
        o: (0..d)
            .map(|i| (0..d).map(|j| q[(i, j)]).collect())
            .collect(),
    })
}

/// Recovers `(t, z, J)` for `g : [0, e_M] → [0, e_N]` on single-factor
/// algebras, from evaluations of `g` on `(0, e]` only.
pub fn recover_parameters(
    g: &dyn Fn(&Element) -> Result<Element>,
    source: &AlgebraDescriptor,
    target: &AlgebraDescriptor,
    options: &RecoveryOptions,
) -> Result<FactorOrderIso> {
    if source.factor_count() != 1 || source != target {
        return Err(Error::InvalidDescriptor(format!(
            "recovery needs identical single-factor algebras, got {source} and {target}"
        )));
    }
    let f_hat = |x: &Element| -> Result<Element> {
        let arg = invert_element(&x.add_unit(1.0), InverseMode::Strict)?;
        let image = g(&arg)?;
        image.check_descriptor(target)?;
        Ok(invert_element(&image, InverseMode::Strict)?.add_unit(-1.0))
    };
    let c = options.shift;
    let e = Element::unit(source);
    let at_shift = f_hat(&e.scale(c))?;
    let basis = Element::basis(source);
    let images = basis
        .iter()
        .map(|b| f_hat(&b.add_unit(c))?.sub(&at_shift))
        .collect::<Result<Vec<Element>>>()?;
    let le = f_hat(&e)?;

    let mut worst = rel(&at_shift, &le.scale(c))?;
    let mut samples = Vec::with_capacity(options.check_samples);
    for k in 0..options.check_samples {
        let x = random_element(
            source,
            options.seed.wrapping_add(k as u64),
            ElementClass::Cone,
        )?;
        worst = worst.max(rel(&f_hat(&x)?, &combine(&images, &x.coordinates()))?);
        samples.push(x);
    }
    if !(worst <= options.linearity_tol) {
        return Err(Error::NotLinear(worst));
    }

    let y = sqrt(&le)?;
    let y_inv = invert_element(&y, InverseMode::Strict)?;
    let j_images = images
        .iter()
        .map(|l| y_inv.quad_rep(l))
        .collect::<Result<Vec<Element>>>()?;
    let j_of = |x: &Element| combine(&j_images, &x.coordinates());

    let map = match source.factors()[0] {
        FactorDescriptor::Hermitian { n, ring } => decode_hermitian(n, ring, &j_of)?,
        FactorDescriptor::Spin { d } => decode_spin(d, &j_of)?,
    };
    let j = JordanIsomorphism::single(map).map_err(|_| Error::NotJordanHomomorphism(f64::NAN))?;

    let mut worst: f64 = 0.0;
    for (b, img) in basis.iter().zip(&j_images) {
        worst = worst.max(rel(&j.apply(b)?, img)?);
    }
    for pair in samples.windows(2) {
        let lhs = j_of(&pair[0].jordan_product(&pair[1])?);
        let rhs = j_of(&pair[0]).jordan_product(&j_of(&pair[1]))?;
        worst = worst.max(rel(&lhs, &rhs)?);
    }
    if !(worst <= options.homomorphism_tol) {
        return Err(Error::NotJordanHomomorphism(worst));
    }
    param_from_y(&y, options.lambda, &j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_with;
    use crate::iso::{lift_cone_iso, PhiParam};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kinds() -> Vec<AlgebraDescriptor> {
        [
            FactorDescriptor::hermitian(1, DivisionRing::Real).unwrap(),
            FactorDescriptor::hermitian(3, DivisionRing::Real).unwrap(),
            FactorDescriptor::hermitian(3, DivisionRing::Complex).unwrap(),
            FactorDescriptor::hermitian(3, DivisionRing::Quaternion).unwrap(),
            FactorDescriptor::hermitian(2, DivisionRing::Quaternion).unwrap(),
            FactorDescriptor::spin(4).unwrap(),
        ]
        .into_iter()
        .map(|f| AlgebraDescriptor::single(f).unwrap())
        .collect()
    }

    #[test]
    fn recovers_random_parameters() {
        for d in kinds() {
            for seed in 0..5 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let j = JordanIsomorphism::random(&d, &mut rng);
                let z = random_with(&d, ElementClass::Interior, &mut rng).unwrap();
                let f = FactorOrderIso::new(PhiParam::new(-1.5 + 0.4 * seed as f64).unwrap(), z, j)
                    .unwrap();
                let g = |x: &Element| f.apply(x);
                let r = recover_parameters(&g, &d, &d, &RecoveryOptions::default()).unwrap();
                for k in 0..10 {
                    let x = random_element(&d, 1000 + k, ElementClass::Effect).unwrap();
                    let a = f.apply(&x).unwrap();
                    let b = r.apply(&x).unwrap();
                    assert!(
                        a.dist(&b).unwrap() < 1e-6,
                        "{d} seed {seed}: {}",
                        a.dist(&b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn lift_example() {
        let d = AlgebraDescriptor::single(
            FactorDescriptor::hermitian(2, DivisionRing::Complex).unwrap(),
        )
        .unwrap();
        let id = JordanIsomorphism::identity(&d);
        let two = Element::unit(&d).scale(2.0);
        let g = |x: &Element| lift_cone_iso(&two, &id, x);
        let r = recover_parameters(
            &g,
            &d,
            &d,
            &RecoveryOptions {
                lambda: Some(5.0),
                ..Default::default()
            },
        )
        .unwrap();
        let expected = param_from_y(&two, Some(5.0), &id).unwrap();
        assert!(r.z().dist(expected.z()).unwrap() < 1e-12);
        assert_eq!(r.t(), expected.t());
        let x = random_element(&d, 1, ElementClass::Effect).unwrap();
        assert!(r.jordan().apply(&x).unwrap().dist(&x).unwrap() < 1e-10);
    }

    #[test]
    fn identity_gives_unit_y() {
        let d = AlgebraDescriptor::single(FactorDescriptor::spin(3).unwrap()).unwrap();
        let g = |x: &Element| Ok(x.clone());
        let r = recover_parameters(
            &g,
            &d,
            &d,
            &RecoveryOptions {
                lambda: Some(3.0),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.t().t(), -2.0);
        let expected = param_from_y(
            &Element::unit(&d),
            Some(3.0),
            &JordanIsomorphism::identity(&d),
        )
        .unwrap();
        assert!(r.z().dist(expected.z()).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_nonlinear_probe() {
        let d =
            AlgebraDescriptor::single(FactorDescriptor::hermitian(2, DivisionRing::Real).unwrap())
                .unwrap();
        // x ↦ x² is an order isomorphism of [0, e] only in the scalar sense
        let g = |x: &Element| Ok(x.square());
        let err = recover_parameters(&g, &d, &d, &RecoveryOptions::default()).unwrap_err();
        assert_eq!(err.code(), "NOT_LINEAR");
    }

    #[test]
    fn rejects_transpose_like_map() {
        // entrywise quaternion conjugation is not a Jordan homomorphism
        let d = AlgebraDescriptor::single(
            FactorDescriptor::hermitian(3, DivisionRing::Quaternion).unwrap(),
        )
        .unwrap();
        let g = |x: &Element| match x.block(0) {
            Block::Herm(h) => Ok(Element::herm(HermBlock::project(
                DivisionRing::Quaternion,
                &h.mat().map(|q| q.conj()),
            ))),
            Block::Spin(_) => unreachable!(),
        };
        let err = recover_parameters(&g, &d, &d, &RecoveryOptions::default()).unwrap_err();
        assert!(
            matches!(err.code(), "NOT_JORDAN_HOMOMORPHISM" | "NOT_LINEAR"),
            "{err:?}"
        );
    }
}
