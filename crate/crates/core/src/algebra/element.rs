use crate::algebra::descriptor::{AlgebraDescriptor, DivisionRing, FactorDescriptor};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::quaternion::Quaternion;

/// Hermitian symmetry tolerance `1e-10 * (1 + max entry magnitude)`.
pub fn hermitian_tolerance(max_entry: f64) -> f64 {
    1e-10 * (1.0 + max_entry)
}

/// Hermitian `n x n` matrix over a division ring.
#[derive(Debug, Clone, PartialEq)]
pub struct HermBlock {
    ring: DivisionRing,
    mat: QMat,
}

fn restrict_to_ring(q: Quaternion, ring: DivisionRing) -> Quaternion {
    match ring {
        DivisionRing::Real => Quaternion::real(q.a),
        DivisionRing::Complex => Quaternion::complex(q.a, q.b),
        DivisionRing::Quaternion => q,
    }
}

impl HermBlock {
    /// Validates and symmetrizes `mat`.
    ///
    /// Deviations from Hermitian symmetry (including components the ring does
    /// not carry) up to the symmetry tolerance are projected away; larger ones
    /// are rejected.
    pub fn new(ring: DivisionRing, mat: QMat) -> Result<Self> {
        if mat.rows() != mat.cols() || mat.rows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "hermitian block must be square and non-empty, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.data().iter().all(|q| q.is_finite()) {
            return Err(Error::NonFinite("hermitian block".into()));
        }
        let projected = HermBlock::project(ring, &mat);
        let asymmetry = mat.sub(&projected.mat).max_abs();
        let tolerance = hermitian_tolerance(mat.max_abs());
        if asymmetry > tolerance {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        Ok(projected)
    }

    /// Orthogonal projection of an arbitrary square matrix onto the Hermitian
    /// matrices over `ring`: `(m + m*)/2` with foreign components dropped.
    pub fn project(ring: DivisionRing, mat: &QMat) -> Self {
        let n = mat.rows();
        let sym = QMat::from_fn(n, n, |i, j| {
            let q = (mat.get(i, j) + mat.get(j, i).conj()).scale(0.5);
            restrict_to_ring(q, ring)
        });
        HermBlock { ring, mat: sym }
    }

    pub fn identity(n: usize, ring: DivisionRing) -> Self {
        HermBlock {
            ring,
            mat: QMat::identity(n),
        }
    }

    pub fn zeros(n: usize, ring: DivisionRing) -> Self {
        HermBlock {
            ring,
            mat: QMat::zeros(n, n),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(ring: DivisionRing, diag: &[f64]) -> Self {
        let n = diag.len();
        HermBlock {
            ring,
            mat: QMat::from_fn(n, n, |i, j| {
                if i == j {
                    Quaternion::real(diag[i])
                } else {
                    Quaternion::ZERO
                }
            }),
        }
    }

    /// Real symmetric matrix given row-major.
    pub fn real(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(
                "real block rows must have length n".into(),
            ));
        }
        HermBlock::new(
            DivisionRing::Real,
            QMat::from_fn(n, n, |i, j| Quaternion::real(rows[i][j])),
        )
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn ring(&self) -> DivisionRing {
        self.ring
    }

    pub fn mat(&self) -> &QMat {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.mat.get(i, j)
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.mat.get(i, i).a).sum()
    }

    fn same_shape(&self, other: &HermBlock) -> bool {
        self.ring == other.ring && self.n() == other.n()
    }
}

/// Spin factor element `(alpha, v)` in `R ⊕ R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBlock {
    pub alpha: f64,
    pub v: Vec<f64>,
}

impl SpinBlock {
    pub fn new(alpha: f64, v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::InvalidDescriptor(format!(
                "spin block needs d >= 2, got {}",
                v.len()
            )));
        }
        if !alpha.is_finite() || !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("spin block".into()));
        }
        Ok(SpinBlock { alpha, v })
    }

    pub fn d(&self) -> usize {
        self.v.len()
    }

    pub fn v_norm(&self) -> f64 {
        self.v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn dot(&self, other: &SpinBlock) -> f64 {
        self.v.iter().zip(&other.v).map(|(a, b)| a * b).sum()
    }
}

/// One summand of an [`Element`].
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Herm(HermBlock),
    Spin(SpinBlock),
}

impl Block {
    pub fn factor(&self) -> FactorDescriptor {
        match self {
            Block::Herm(h) => FactorDescriptor::Hermitian {
                n: h.n(),
                ring: h.ring(),
            },
            Block::Spin(s) => FactorDescriptor::Spin { d: s.d() },
        }
    }

    pub fn unit(factor: &FactorDescriptor) -> Block {
        match *factor {
            FactorDescriptor::Hermitian { n, ring } => Block::Herm(HermBlock::identity(n, ring)),
            FactorDescriptor::Spin { d } => Block::Spin(SpinBlock {
                alpha: 1.0,
                v: vec![0.0; d],
            }),
        }
    }

    pub fn zero(factor: &FactorDescriptor) -> Block {
        match *factor {
            FactorDescriptor::Hermitian { n, ring } => Block::Herm(HermBlock::zeros(n, ring)),
            FactorDescriptor::Spin { d } => Block::Spin(SpinBlock {
                alpha: 0.0,
                v: vec![0.0; d],
            }),
        }
    }

    fn check_shape(&self, other: &Block) -> Result<()> {
        let ok = match (self, other) {
            (Block::Herm(a), Block::Herm(b)) => a.same_shape(b),
            (Block::Spin(a), Block::Spin(b)) => a.d() == b.d(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{} vs {}",
                self.factor(),
                other.factor()
            )))
        }
    }

    pub(crate) fn lin_comb(&self, a: f64, other: &Block, b: f64) -> Block {
        match (self, other) {
            (Block::Herm(x), Block::Herm(y)) => Block::Herm(HermBlock {
                ring: x.ring,
                mat: x.mat.scale(a).add(&y.mat.scale(b)),
            }),
            (Block::Spin(x), Block::Spin(y)) => Block::Spin(SpinBlock {
                alpha: a * x.alpha + b * y.alpha,
                v: x.v.iter().zip(&y.v).map(|(p, q)| a * p + b * q).collect(),
            }),
            _ => unreachable!("shape checked by caller"),
        }
    }

    fn jordan(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Herm(x), Block::Herm(y)) => {
                let xy = x.mat.matmul(&y.mat);
                let yx = y.mat.matmul(&x.mat);
                Block::Herm(HermBlock::project(x.ring, &xy.add(&yx).scale(0.5)))
            }
            (Block::Spin(x), Block::Spin(y)) => Block::Spin(SpinBlock {
                alpha: x.alpha * y.alpha + x.dot(y),
                v: x.v
                    .iter()
                    .zip(&y.v)
                    .map(|(p, q)| x.alpha * q + y.alpha * p)
                    .collect(),
            }),
            _ => unreachable!("shape checked by caller"),
        }
    }

    fn quad(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Herm(x), Block::Herm(y)) => {
                let xyx = x.mat.matmul(&y.mat).matmul(&x.mat);
                Block::Herm(HermBlock::project(x.ring, &xyx))
            }
            (Block::Spin(_), Block::Spin(_)) => {
                // U_x y = 2 (x∘y)∘x − x²∘y
                let xy = self.jordan(other);
                let xx = self.jordan(self);
                xy.jordan(self).lin_comb(2.0, &xx.jordan(other), -1.0)
            }
            _ => unreachable!("shape checked by caller"),
        }
    }

    fn inner(&self, other: &Block) -> f64 {
        match (self, other) {
            (Block::Herm(x), Block::Herm(y)) => x
                .mat
                .data()
                .iter()
                .zip(y.mat.data())
                .map(|(p, q)| p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d)
                .sum(),
            (Block::Spin(x), Block::Spin(y)) => 2.0 * (x.alpha * y.alpha + x.dot(y)),
            _ => unreachable!("shape checked by caller"),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Block::Herm(h) => h.mat.max_abs(),
            Block::Spin(s) => s.v.iter().fold(s.alpha.abs(), |m, x| m.max(x.abs())),
        }
    }
}

/// Element of an atomic algebra: one block per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    blocks: Vec<Block>,
}

impl Element {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ShapeMismatch(
                "element needs at least one block".into(),
            ));
        }
        for b in &blocks {
            b.factor().validate()?;
        }
        Ok(Element { blocks })
    }

    /// Builds an element from blocks that are already known to be well formed.
    pub(crate) fn from_blocks(blocks: Vec<Block>) -> Self {
        Element { blocks }
    }

    pub fn unit(descriptor: &AlgebraDescriptor) -> Self {
        Element {
            blocks: descriptor.factors().iter().map(Block::unit).collect(),
        }
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Self {
        Element {
            blocks: descriptor.factors().iter().map(Block::zero).collect(),
        }
    }

    /// Single Hermitian block.
    pub fn herm(block: HermBlock) -> Self {
        Element {
            blocks: vec![Block::Herm(block)],
        }
    }

    /// Single spin block.
    pub fn spin(alpha: f64, v: Vec<f64>) -> Result<Self> {
        Ok(Element {
            blocks: vec![Block::Spin(SpinBlock::new(alpha, v)?)],
        })
    }

    /// Single real diagonal block.
    pub fn real_diag(diag: &[f64]) -> Self {
        Element::herm(HermBlock::diagonal(DivisionRing::Real, diag))
    }

    /// Element of `R^n` (a sum of `Herm(1, R)` factors).
    pub fn real_sequence(values: &[f64]) -> Self {
        Element {
            blocks: values
                .iter()
                .map(|&x| Block::Herm(HermBlock::diagonal(DivisionRing::Real, &[x])))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor::new(self.blocks.iter().map(Block::factor).collect())
            .expect("element blocks are validated on construction")
    }

    pub fn matches(&self, descriptor: &AlgebraDescriptor) -> bool {
        self.blocks.len() == descriptor.factor_count()
            && self
                .blocks
                .iter()
                .zip(descriptor.factors())
                .all(|(b, f)| b.factor() == *f)
    }

    pub fn check_descriptor(&self, descriptor: &AlgebraDescriptor) -> Result<()> {
        if self.matches(descriptor) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "element of {} used in {}",
                self.descriptor(),
                descriptor
            )))
        }
    }

    pub fn check_same_shape(&self, other: &Element) -> Result<()> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks vs {} blocks",
                self.blocks.len(),
                other.blocks.len()
            )));
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .try_for_each(|(a, b)| a.check_shape(b))
    }

    pub fn unit_like(&self) -> Element {
        Element {
            blocks: self
                .blocks
                .iter()
                .map(|b| Block::unit(&b.factor()))
                .collect(),
        }
    }

    pub fn zero_like(&self) -> Element {
        Element {
            blocks: self
                .blocks
                .iter()
                .map(|b| Block::zero(&b.factor()))
                .collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, other: &Element, b: f64) -> Result<Element> {
        self.check_same_shape(other)?;
        Ok(self.lin_comb_unchecked(a, other, b))
    }

    pub(crate) fn lin_comb_unchecked(&self, a: f64, other: &Element, b: f64) -> Element {
        Element {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(x, y)| x.lin_comb(a, y, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.lin_comb(1.0, other, -1.0)
    }

    pub fn scale(&self, s: f64) -> Element {
        self.lin_comb_unchecked(s, self, 0.0)
    }

    /// `self + s * e`.
    pub fn add_unit(&self, s: f64) -> Element {
        self.lin_comb_unchecked(1.0, &self.unit_like(), s)
    }

    /// Jordan product `x ∘ y`.
    pub fn jordan_product(&self, other: &Element) -> Result<Element> {
        self.check_same_shape(other)?;
        Ok(Element {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(x, y)| x.jordan(y))
                .collect(),
        })
    }

    pub fn square(&self) -> Element {
        Element {
            blocks: self.blocks.iter().map(|x| x.jordan(x)).collect(),
        }
    }

    /// Jordan triple product `{x,y,z} = (x∘y)∘z + (z∘y)∘x − (x∘z)∘y`.
    pub fn triple_product(&self, y: &Element, z: &Element) -> Result<Element> {
        self.check_same_shape(y)?;
        self.check_same_shape(z)?;
        let a = self.jordan_product(y)?.jordan_product(z)?;
        let b = z.jordan_product(y)?.jordan_product(self)?;
        let c = self.jordan_product(z)?.jordan_product(y)?;
        a.add(&b)?.sub(&c)
    }

    /// Quadratic representation `U_x y`; `x y x` on Hermitian blocks.
    pub fn quad_rep(&self, y: &Element) -> Result<Element> {
        self.check_same_shape(y)?;
        Ok(Element {
            blocks: self
                .blocks
                .iter()
                .zip(&y.blocks)
                .map(|(x, y)| x.quad(y))
                .collect(),
        })
    }

    /// Trace inner product `tr(x ∘ y)` (spin trace is `2 alpha`).
    pub fn inner(&self, other: &Element) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(x, y)| x.inner(y))
            .sum())
    }

    /// Euclidean norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.inner(b))
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }

    /// `‖self − other‖`.
    pub fn dist(&self, other: &Element) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(Block::max_abs).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.max_abs().is_finite()
    }

    /// Orthogonal real basis of the algebra (matrix units `E_ii`,
    /// `q E_ij + q̄ E_ji` for each unit imaginary `q` of the ring, and the
    /// spin coordinate vectors), in block order.
    pub fn basis(descriptor: &AlgebraDescriptor) -> Vec<Element> {
        let mut out = Vec::with_capacity(descriptor.dim());
        for (k, factor) in descriptor.factors().iter().enumerate() {
            let embed = |b: Block| {
                let mut blocks: Vec<Block> = descriptor.factors().iter().map(Block::zero).collect();
                blocks[k] = b;
                Element { blocks }
            };
            for b in factor_basis(factor) {
                out.push(embed(b));
            }
        }
        out
    }

    /// Coordinates with respect to [`Element::basis`].
    pub fn coordinates(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for block in &self.blocks {
            match block {
                Block::Herm(h) => {
                    let n = h.n();
                    for i in 0..n {
                        out.push(h.get(i, i).a);
                    }
                    for i in 0..n {
                        for j in i + 1..n {
                            let q = h.get(i, j).components();
                            out.extend_from_slice(&q[..h.ring().dim()]);
                        }
                    }
                }
                Block::Spin(s) => {
                    out.push(s.alpha);
                    out.extend_from_slice(&s.v);
                }
            }
        }
        out
    }

    /// Inverse of [`Element::coordinates`].
    pub fn from_coordinates(descriptor: &AlgebraDescriptor, coords: &[f64]) -> Result<Element> {
        if coords.len() != descriptor.dim() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                descriptor.dim(),
                coords.len()
            )));
        }
        let mut it = coords.iter().copied();
        let mut blocks = Vec::with_capacity(descriptor.factor_count());
        for factor in descriptor.factors() {
            match *factor {
                FactorDescriptor::Hermitian { n, ring } => {
                    let mut m = QMat::zeros(n, n);
                    for i in 0..n {
                        m.set(i, i, Quaternion::real(it.next().unwrap()));
                    }
                    for i in 0..n {
                        for j in i + 1..n {
                            let mut c = [0.0; 4];
                            for slot in c.iter_mut().take(ring.dim()) {
                                *slot = it.next().unwrap();
                            }
                            let q = Quaternion::new(c[0], c[1], c[2], c[3]);
                            m.set(i, j, q);
                            m.set(j, i, q.conj());
                        }
                    }
                    blocks.push(Block::Herm(HermBlock { ring, mat: m }));
                }
                FactorDescriptor::Spin { d } => {
                    let alpha = it.next().unwrap();
                    let v = (0..d).map(|_| it.next().unwrap()).collect();
                    blocks.push(Block::Spin(SpinBlock { alpha, v }));
                }
            }
        }
        Ok(Element { blocks })
    }
}

fn factor_basis(factor: &FactorDescriptor) -> Vec<Block> {
    match *factor {
        FactorDescriptor::Hermitian { n, ring } => {
            let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
            let mut out = Vec::new();
            for i in 0..n {
                let mut m = QMat::zeros(n, n);
                m.set(i, i, Quaternion::ONE);
                out.push(Block::Herm(HermBlock { ring, mat: m }));
            }
            for i in 0..n {
                for j in i + 1..n {
                    for &q in &units[..ring.dim()] {
                        let mut m = QMat::zeros(n, n);
                        m.set(i, j, q);
                        m.set(j, i, q.conj());
                        out.push(Block::Herm(HermBlock { ring, mat: m }));
                    }
                }
            }
            out
        }
        FactorDescriptor::Spin { d } => {
            let mut out = vec![Block::Spin(SpinBlock {
                alpha: 1.0,
                v: vec![0.0; d],
            })];
            for k in 0..d {
                let mut v = vec![0.0; d];
                v[k] = 1.0;
                out.push(Block::Spin(SpinBlock { alpha: 0.0, v }));
            }
            out
        }
    }
}
