//! Spectral decomposition and functional calculus.
//!
//! Real and complex Hermitian blocks are diagonalised directly; quaternionic
//! blocks go through the complex `2n x 2n` embedding
//! `A + Bj ↦ [[A, B], [−B̄, Ā]]`, whose spectral projections are images of
//! the quaternionic ones. Spin blocks use the closed form `α ± ‖v‖`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::algebra::{Block, DivisionRing, Element, HermBlock, SpinBlock};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::quaternion::Quaternion;
use crate::tolerance;

/// Eigenvalue / spectral projection pairs with strictly increasing
/// eigenvalues. The projections are mutually orthogonal and sum to `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pairs: Vec<(f64, Element)>,
}

impl SpectralDecomposition {
    pub fn pairs(&self) -> &[(f64, Element)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|(l, _)| *l).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ f(λ_i) p_i`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<Element> {
        let mut acc = self.pairs[0].1.zero_like();
        for (lambda, p) in &self.pairs {
            let value = f(*lambda);
            if !value.is_finite() {
                return Err(Error::UndefinedFunction(*lambda));
            }
            if value != 0.0 {
                acc = acc.lin_comb_unchecked(1.0, p, value);
            }
        }
        Ok(acc)
    }

    /// `Σ λ_i p_i`.
    pub fn reconstruct(&self) -> Element {
        self.apply(|l| l).expect("eigenvalues are finite")
    }
}

/// Default clustering tolerance `1e-8 * (1 + ‖x‖)`.
pub fn default_cluster_tol(x: &Element) -> f64 {
    tolerance::scaled(tolerance::CLUSTER, x.norm())
}

// One eigenvalue of one block together with its (block-local) eigenprojection.
struct Piece {
    lambda: f64,
    block: usize,
    proj: Block,
}

fn real_matrix(h: &HermBlock) -> DMatrix<f64> {
    let n = h.n();
    DMatrix::from_fn(n, n, |i, j| h.get(i, j).a)
}

fn complex_matrix(h: &HermBlock) -> DMatrix<Complex<f64>> {
    let n = h.n();
    DMatrix::from_fn(n, n, |i, j| {
        let q = h.get(i, j);
        Complex::new(q.a, q.b)
    })
}

// [[A, B], [−B̄, Ā]] for Q = A + Bj, where A = a + bi and B = c + di.
fn quaternion_embedding(h: &HermBlock) -> DMatrix<Complex<f64>> {
    let n = h.n();
    DMatrix::from_fn(2 * n, 2 * n, |r, s| {
        let (i, j) = (r % n, s % n);
        let q = h.get(i, j);
        let a = Complex::new(q.a, q.b);
        let b = Complex::new(q.c, q.d);
        match (r < n, s < n) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => -b.conj(),
            (false, false) => a.conj(),
        }
    })
}

// Inverse of the embedding, averaged so that it is the orthogonal projection
// onto the image when the input is slightly off it.
fn quaternion_pullback(p: &DMatrix<Complex<f64>>, n: usize) -> QMat {
    QMat::from_fn(n, n, |i, j| {
        let a = (p[(i, j)] + p[(i + n, j + n)].conj()) * 0.5;
        let b = (p[(i, j + n)] - p[(i + n, j)].conj()) * 0.5;
        Quaternion::new(a.re, a.im, b.re, b.im)
    })
}

fn outer_real(v: nalgebra::DVectorView<'_, f64>) -> QMat {
    let n = v.len();
    QMat::from_fn(n, n, |i, j| Quaternion::real(v[i] * v[j]))
}

fn outer_complex(vs: &[nalgebra::DVectorView<'_, Complex<f64>>]) -> DMatrix<Complex<f64>> {
    let n = vs[0].len();
    let mut m = DMatrix::zeros(n, n);
    for v in vs {
        m += v * v.adjoint();
    }
    m
}

fn complex_to_qmat(m: &DMatrix<Complex<f64>>) -> QMat {
    let n = m.nrows();
    QMat::from_fn(n, n, |i, j| Quaternion::complex(m[(i, j)].re, m[(i, j)].im))
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

fn herm_pieces(h: &HermBlock, block: usize, out: &mut Vec<Piece>) {
    let n = h.n();
    let ring = h.ring();
    match ring {
        DivisionRing::Real => {
            let eig = SymmetricEigen::new(real_matrix(h));
            for k in 0..n {
                let proj = HermBlock::project(ring, &outer_real(eig.eigenvectors.column(k)));
                out.push(Piece {
                    lambda: eig.eigenvalues[k],
                    block,
                    proj: Block::Herm(proj),
                });
            }
        }
        DivisionRing::Complex => {
            let eig = SymmetricEigen::new(complex_matrix(h));
            for k in 0..n {
                let p = outer_complex(&[eig.eigenvectors.column(k)]);
                let proj = HermBlock::project(ring, &complex_to_qmat(&p));
                out.push(Piece {
                    lambda: eig.eigenvalues[k],
                    block,
                    proj: Block::Herm(proj),
                });
            }
        }
        DivisionRing::Quaternion => {
            let eig = SymmetricEigen::new(quaternion_embedding(h));
            let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            let order = sorted_order(&values);
            // Every eigenvalue of the embedding has even multiplicity; consecutive
            // sorted pairs make up one quaternionic eigenvalue.
            for pair in order.chunks(2) {
                let cols: Vec<_> = pair.iter().map(|&k| eig.eigenvectors.column(k)).collect();
                let p = outer_complex(&cols);
                let proj = HermBlock::project(ring, &quaternion_pullback(&p, n));
                let lambda = 0.5 * (values[pair[0]] + values[pair[1]]);
                out.push(Piece {
                    lambda,
                    block,
                    proj: Block::Herm(proj),
                });
            }
        }
    }
}

fn spin_pieces(s: &SpinBlock, block: usize, out: &mut Vec<Piece>) {
    let r = s.v_norm();
    if r == 0.0 {
        out.push(Piece {
            lambda: s.alpha,
            block,
            proj: Block::Spin(SpinBlock {
                alpha: 1.0,
                v: vec![0.0; s.d()],
            }),
        });
        return;
    }
    for sign in [-1.0, 1.0] {
        out.push(Piece {
            lambda: s.alpha + sign * r,
            block,
            proj: Block::Spin(SpinBlock {
                alpha: 0.5,
                v: s.v.iter().map(|x| 0.5 * sign * x / r).collect(),
            }),
        });
    }
}

fn block_eigenvalues(block: &Block, out: &mut Vec<f64>) {
    match block {
        Block::Herm(h) => match h.ring() {
            DivisionRing::Real => {
                out.extend(SymmetricEigen::new(real_matrix(h)).eigenvalues.iter())
            }
            DivisionRing::Complex => {
                out.extend(SymmetricEigen::new(complex_matrix(h)).eigenvalues.iter())
            }
            DivisionRing::Quaternion => {
                let values: Vec<f64> = SymmetricEigen::new(quaternion_embedding(h))
                    .eigenvalues
                    .iter()
                    .copied()
                    .collect();
                let order = sorted_order(&values);
                out.extend(order.chunks(2).map(|p| 0.5 * (values[p[0]] + values[p[1]])));
            }
        },
        Block::Spin(s) => {
            let r = s.v_norm();
            out.push(s.alpha - r);
            out.push(s.alpha + r);
        }
    }
}

fn check_finite(x: &Element) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("element".into()))
    }
}

/// All eigenvalues (with multiplicity, rank-many) in increasing order, without
/// clustering.
pub fn eigenvalues(x: &Element) -> Vec<f64> {
    let mut out = Vec::new();
    for b in x.blocks() {
        block_eigenvalues(b, &mut out);
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn min_eigenvalue(x: &Element) -> f64 {
    eigenvalues(x)[0]
}

pub fn max_eigenvalue(x: &Element) -> f64 {
    *eigenvalues(x)
        .last()
        .expect("elements have at least one block")
}

/// Spectral decomposition of `x`.
///
/// Eigenvalues whose consecutive gaps are at most `cluster_tol` are merged
/// (projections summed, eigenvalue averaged by rank); a cluster whose value is
/// within `cluster_tol` of zero is set to exactly zero.
pub fn spectral_decompose(x: &Element, cluster_tol: f64) -> Result<SpectralDecomposition> {
    check_finite(x)?;
    let tol = cluster_tol.max(tolerance::scaled(tolerance::MIN_CLUSTER, x.norm()));
    let mut pieces = Vec::new();
    for (k, b) in x.blocks().iter().enumerate() {
        match b {
            Block::Herm(h) => herm_pieces(h, k, &mut pieces),
            Block::Spin(s) => spin_pieces(s, k, &mut pieces),
        }
    }
    pieces.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));

    let mut groups: Vec<Vec<Piece>> = Vec::new();
    for piece in pieces {
        match groups.last_mut() {
            Some(g) if piece.lambda - g.last().unwrap().lambda <= tol => g.push(piece),
            _ => groups.push(vec![piece]),
        }
    }

    let zero = x.zero_like();
    let mut pairs: Vec<(f64, Element)> = Vec::with_capacity(groups.len());
    for group in groups {
        let mut weight = 0.0;
        let mut sum = 0.0;
        let mut blocks: Vec<Block> = zero.blocks().to_vec();
        for piece in group {
            let rank = piece_rank(&piece.proj);
            weight += rank;
            sum += rank * piece.lambda;
            blocks[piece.block] = blocks[piece.block].lin_comb(1.0, &piece.proj, 1.0);
        }
        let mut lambda = sum / weight;
        if lambda.abs() <= tol {
            lambda = 0.0;
        }
        let proj = Element::from_blocks(blocks);
        match pairs.last_mut() {
            Some((last, p)) if *last == lambda => *p = p.lin_comb_unchecked(1.0, &proj, 1.0),
            _ => pairs.push((lambda, proj)),
        }
    }
    Ok(SpectralDecomposition { pairs })
}

fn piece_rank(b: &Block) -> f64 {
    match b {
        Block::Herm(h) => h.trace().round().max(1.0),
        Block::Spin(s) => {
            if s.alpha > 0.75 {
                2.0
            } else {
                1.0
            }
        }
    }
}

impl Element {
    /// Spectral decomposition with the default cluster tolerance.
    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(self, default_cluster_tol(self))
    }
}

/// `f(x) = Σ f(λ_i) p_i`.
pub fn apply_function(x: &Element, f: impl Fn(f64) -> f64) -> Result<Element> {
    x.spectral()?.apply(f)
}

fn cone_slack(x: &Element) -> f64 {
    tolerance::scaled(tolerance::ORDER, x.norm())
}

fn require_cone(decomp: &SpectralDecomposition, x: &Element) -> Result<()> {
    let least = decomp.pairs()[0].0;
    if least < -cone_slack(x) {
        Err(Error::NotInCone(least))
    } else {
        Ok(())
    }
}

/// `r(x) = 1_{(0,∞)}(x)` for `x` in the cone.
pub fn range_projection(x: &Element) -> Result<Element> {
    let d = x.spectral()?;
    require_cone(&d, x)?;
    d.apply(|l| if l > 0.0 { 1.0 } else { 0.0 })
}

/// Square root of a cone element (eigenvalues within the cone slack of zero
/// are clipped).
pub fn sqrt(x: &Element) -> Result<Element> {
    let d = x.spectral()?;
    require_cone(&d, x)?;
    d.apply(|l| l.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMode {
    /// Fails with `SINGULAR` when an eigenvalue is within `1e-10 (1 + ‖x‖)` of zero.
    Strict,
    /// Inverts non-zero eigenvalues and keeps zero ones at zero.
    Pseudo,
}

pub fn invert_element(x: &Element, mode: InverseMode) -> Result<Element> {
    match mode {
        InverseMode::Strict => {
            let tau = tolerance::scaled(tolerance::SINGULAR, x.norm());
            let d = spectral_decompose(x, tau)?;
            let smallest = d
                .pairs()
                .iter()
                .map(|(l, _)| l.abs())
                .fold(f64::INFINITY, f64::min);
            if smallest <= tau {
                return Err(Error::Singular(smallest));
            }
            d.apply(|l| 1.0 / l)
        }
        InverseMode::Pseudo => apply_function(x, |l| if l == 0.0 { 0.0 } else { 1.0 / l }),
    }
}

/// Least strictly positive eigenvalue of a cone element, if any.
pub fn least_positive_eigenvalue(x: &Element) -> Result<Option<f64>> {
    let d = x.spectral()?;
    require_cone(&d, x)?;
    Ok(d.eigenvalues().into_iter().find(|&l| l > 0.0))
}

/// Scalar approximants used to invert `U_{x^{1/2}}` on `[0, x]`:
/// `f_n(t) = t^{-1/2}` for `t >= 1/n` and `n^{3/2} t` below.
pub fn approx_f(n: u32, t: f64) -> f64 {
    let n = n as f64;
    if t >= 1.0 / n {
        t.powf(-0.5)
    } else {
        n.powf(1.5) * t
    }
}

/// `g_n(t) = t f_n(t)^2`.
pub fn approx_g(n: u32, t: f64) -> f64 {
    let n = n as f64;
    if t >= 1.0 / n {
        1.0
    } else {
        (n * t).powi(3)
    }
}

/// `h_n(t) = t^{1/2} f_n(t)`.
pub fn approx_h(n: u32, t: f64) -> f64 {
    let n = n as f64;
    if t >= 1.0 / n {
        1.0
    } else {
        (n * t).powf(1.5)
    }
}

/// `(f_n(x), g_n(x), h_n(x))` for `x` in the cone. For `n > 1/λ` where `λ` is
/// the least positive eigenvalue, `g_n(x) = h_n(x) = r(x)` exactly.
pub fn prop_approx_maps(x: &Element, n: u32) -> Result<(Element, Element, Element)> {
    if n == 0 {
        return Err(Error::InvalidDescriptor(
            "approximation index n must be positive".into(),
        ));
    }
    let d = x.spectral()?;
    require_cone(&d, x)?;
    Ok((
        d.apply(|t| approx_f(n, t.max(0.0)))?,
        d.apply(|t| approx_g(n, t.max(0.0)))?,
        d.apply(|t| approx_h(n, t.max(0.0)))?,
    ))
}

/// Decreasing approximants `max(x, 1/n)` from the invertible part of `[0, e]`.
pub fn inf_dense_approx(x: &Element, n: u32) -> Result<Element> {
    if n == 0 {
        return Err(Error::InvalidDescriptor(
            "approximation index n must be positive".into(),
        ));
    }
    apply_function(x, |t| t.max(1.0 / n as f64))
}
