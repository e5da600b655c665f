//! Apply-only linear operators used for system matrices and preconditioners.

use crate::dense::{dot, LuFactorization, Matrix, Vector};
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone)]
pub enum LinearOperator {
    Identity(usize),
    Diagonal(Vector),
    Dense(Matrix),
    /// Applies `A^{-1}` through a stored factorization of `A`.
    InverseOf(LuFactorization),
    /// `x -> base(x) + u (v . x)`.
    RankOneUpdate {
        base: Box<LinearOperator>,
        u: Vector,
        v: Vector,
    },
    /// `x -> outer(inner(x))`.
    Composition {
        outer: Box<LinearOperator>,
        inner: Box<LinearOperator>,
    },
}

impl LinearOperator {
    pub fn dense(m: Matrix) -> Result<Self> {
        check_dim("dense operator (square)", m.rows(), m.cols())?;
        Ok(Self::Dense(m))
    }

    pub fn rank_one_update(base: LinearOperator, u: Vector, v: Vector) -> Result<Self> {
        check_dim("rank-one update u", base.dim(), u.dim())?;
        check_dim("rank-one update v", base.dim(), v.dim())?;
        Ok(Self::RankOneUpdate {
            base: Box::new(base),
            u,
            v,
        })
    }

    /// Operator applying `inner` first, then `outer`.
    pub fn compose(outer: LinearOperator, inner: LinearOperator) -> Result<Self> {
        check_dim("composition", outer.dim(), inner.dim())?;
        Ok(Self::Composition {
            outer: Box::new(outer),
            inner: Box::new(inner),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Identity(n) => *n,
            Self::Diagonal(d) => d.dim(),
            Self::Dense(m) => m.rows(),
            Self::InverseOf(f) => f.dim(),
            Self::RankOneUpdate { base, .. } => base.dim(),
            Self::Composition { inner, .. } => inner.dim(),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity(_))
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim("operator apply", self.dim(), x.dim())?;
        Ok(Vector::from_vec(self.apply_slice(x)))
    }

    pub(crate) fn apply_slice(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Identity(_) => x.to_vec(),
            Self::Diagonal(d) => d.iter().zip(x).map(|(di, xi)| di * xi).collect(),
            Self::Dense(m) => m.mat_vec_slice(x),
            Self::InverseOf(f) => f.solve_slice(x),
            Self::RankOneUpdate { base, u, v } => {
                let mut y = base.apply_slice(x);
                let alpha = dot(v, x);
                y.iter_mut()
                    .zip(u.iter())
                    .for_each(|(yi, ui)| *yi += alpha * ui);
                y
            }
            Self::Composition { outer, inner } => outer.apply_slice(&inner.apply_slice(x)),
        }
    }

    /// Dense matrix whose column `j` is `apply(e_j)`.
    pub fn as_dense(&self) -> Matrix {
        match self {
            Self::Identity(n) => Matrix::identity(*n),
            Self::Diagonal(d) => Matrix::from_diag(d),
            Self::Dense(m) => m.clone(),
            Self::InverseOf(f) => f.inverse(),
            _ => {
                let n = self.dim();
                let mut m = Matrix::zeros(n, n);
                let mut e = vec![0.0; n];
                for j in 0..n {
                    e[j] = 1.0;
                    m.set_column(j, &self.apply_slice(&e));
                    e[j] = 0.0;
                }
                m
            }
        }
    }
}

/// Left and right preconditioners `(H_L, H_R)` of a split-preconditioned system.
#[derive(Debug, Clone)]
pub struct PreconditionerPair {
    pub left: LinearOperator,
    pub right: LinearOperator,
}

impl PreconditionerPair {
    pub fn new(left: LinearOperator, right: LinearOperator) -> Result<Self> {
        check_dim("preconditioner pair", left.dim(), right.dim())?;
        Ok(Self { left, right })
    }

    pub fn none(n: usize) -> Self {
        Self {
            left: LinearOperator::Identity(n),
            right: LinearOperator::Identity(n),
        }
    }

    pub fn left(h: LinearOperator) -> Self {
        let n = h.dim();
        Self {
            left: h,
            right: LinearOperator::Identity(n),
        }
    }

    pub fn right(h: LinearOperator) -> Self {
        let n = h.dim();
        Self {
            left: LinearOperator::Identity(n),
            right: h,
        }
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    /// The combined preconditioner `H = H_R H_L`.
    pub fn combined(&self) -> Result<LinearOperator> {
        combined(self)
    }
}

pub fn combined(p: &PreconditionerPair) -> Result<LinearOperator> {
    if p.left.dim() != p.right.dim() {
        return Err(Error::DimensionMismatch {
            context: "combined preconditioner",
            expected: p.left.dim(),
            found: p.right.dim(),
        });
    }
    LinearOperator::compose(p.right.clone(), p.left.clone())
}
