//! Exact arithmetic over Q and a number field k = Q[x]/(m), polynomials and
//! rational functions over either, and dense/sparse linear algebra.

mod field;
mod matrix;
mod poly;
mod ratfunc;
pub mod sparse;

pub use field::{q, qf, NfElem, NumberField, Scalar, Q};
pub use matrix::{extend_scalars, flatten_vec, restrict_scalars, KMatrix, Matrix, QMatrix, Rref};
pub use poly::{Poly, QPoly};
pub use ratfunc::{homogeneous_compose, RatFunc};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FieldError {
    #[error("minimal polynomial is not squarefree (common factor {0})")]
    NotSquarefree(String),
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial has degree zero")]
    DegreeZero,
    #[error("zero divisor: nontrivial factor {0} of the minimal polynomial")]
    ZeroDivisor(String),
    #[error("inverse of zero")]
    ZeroInput,
    #[error("singular matrix")]
    Singular,
    #[error("cannot parse rational '{0}'")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type KPoly = Poly<NfElem>;
pub type KRatFunc = RatFunc<NfElem>;

/// Kernel basis as columns (exact Gaussian elimination).
pub fn solve_kernel<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    m.kernel()
}

/// A rational combination γ = Σ qᵢ (γ+i)^μ of shifted μ-th powers of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerCombination {
    pub mu: u32,
    pub coefficients: Vec<Q>,
    /// true when the μ shifts 0..μ-1 do not suffice and the shift μ was added
    pub extended: bool,
}

impl PowerCombination {
    /// Re-evaluates Σ qᵢ (γ+i)^μ in k.
    pub fn evaluate(&self, k: &NumberField) -> NfElem {
        let g = k.generator();
        let mut acc = k.zero();
        for (i, c) in self.coefficients.iter().enumerate() {
            let base = g.add(&k.from_int(i as i64));
            acc = acc.add(&base.pow(self.mu).mul(&k.from_q(c)));
        }
        acc
    }
}

/// Writes the generator γ as a Q-combination of (γ+i)^μ for i = 0..μ-1.
///
/// When those μ powers do not span γ (for γ³ = 2 and μ = 2 no combination of
/// γ² and (γ+1)² equals γ) the shift i = μ is added. The μ-th finite difference
/// then supplies the constants and a solution always exists.
pub fn express_generator_in_powers(k: &NumberField, mu: u32) -> Result<PowerCombination, FieldError> {
    if mu == 0 {
        return Err(FieldError::InternalInconsistency("mu must be positive".into()));
    }
    for (shifts, extended) in [(mu as usize, false), (mu as usize + 1, true)] {
        let g = k.generator();
        let cols: Vec<Vec<Q>> =
            (0..shifts).map(|i| g.add(&k.from_int(i as i64)).pow(mu).coeffs().to_vec()).collect();
        let a = QMatrix::from_cols(&cols, k.degree(), &q(0));
        if let Some(x) = a.solve_vec(g.coeffs()) {
            let pc = PowerCombination { mu, coefficients: x, extended };
            if pc.evaluate(k) != g {
                return Err(FieldError::InternalInconsistency("back-substitution failed".into()));
            }
            return Ok(pc);
        }
    }
    Err(FieldError::InternalInconsistency(format!("no combination for mu = {}", mu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> NumberField {
        NumberField::parse("-2,0,1").unwrap()
    }

    fn cbrt2() -> NumberField {
        NumberField::parse("-2,0,0,1").unwrap()
    }

    #[test]
    fn field_creation() {
        assert_eq!(NumberField::parse("1").unwrap().degree(), 1);
        assert_eq!(sqrt2().degree(), 2);
        assert!(matches!(NumberField::parse("1,-2,1"), Err(FieldError::NotSquarefree(_))));
        assert_eq!(NumberField::parse("1,0,2").unwrap_err(), FieldError::NotMonic);
    }

    #[test]
    fn inverses() {
        let k = sqrt2();
        let g = k.generator();
        assert_eq!(g.inv().unwrap(), g.mul(&k.from_q(&qf(1, 2))));
        let a = k.one().add(&g);
        let ai = a.inv().unwrap();
        assert_eq!(ai, g.sub(&k.one()));
        assert!(a.mul(&ai).is_one());
        assert_eq!(NumberField::rationals().zero().inv().unwrap_err(), FieldError::ZeroInput);
    }

    #[test]
    fn reducible_modulus_reports_zero_divisor() {
        // x^2 - 1 is squarefree but reducible
        let k = NumberField::parse("-1,0,1").unwrap();
        let a = k.generator().sub(&k.one());
        assert!(matches!(a.inv(), Err(FieldError::ZeroDivisor(_))));
    }

    #[test]
    fn restriction_examples() {
        let k = sqrt2();
        let m = KMatrix::from_rows(vec![vec![k.generator()]], &k.zero());
        let r = restrict_scalars(&k, &m);
        assert_eq!(r, QMatrix::from_rows(vec![vec![q(0), q(2)], vec![q(1), q(0)]], &q(0)));
        let m = KMatrix::from_rows(vec![vec![k.one().add(&k.generator())]], &k.zero());
        assert_eq!(restrict_scalars(&k, &m), QMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(1), q(1)]], &q(0)));
        let id = KMatrix::identity(3, &k.zero());
        assert!(restrict_scalars(&k, &id).is_identity());
    }

    #[test]
    fn kernel_examples() {
        let z = QMatrix::zeros(2, 2, &q(0));
        assert!(solve_kernel(&z).is_identity());
        let m = QMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(0)]], &q(0));
        let k = solve_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0), vec![q(-1), q(1)]);
    }

    #[test]
    fn lemma_examples() {
        let k = sqrt2();
        let pc = express_generator_in_powers(&k, 2).unwrap();
        assert_eq!(pc.coefficients, vec![qf(-3, 4), qf(1, 2)]);
        assert!(!pc.extended);
        assert_eq!(express_generator_in_powers(&k, 1).unwrap().coefficients, vec![q(1)]);
        let c = express_generator_in_powers(&cbrt2(), 2).unwrap();
        assert!(c.extended);
        assert_eq!(c.evaluate(&cbrt2()), cbrt2().generator());
        for mu in 1..=6 {
            for f in [sqrt2(), cbrt2()] {
                let pc = express_generator_in_powers(&f, mu).unwrap();
                assert_eq!(pc.evaluate(&f), f.generator());
            }
        }
    }

    #[test]
    fn squarefree_decomposition() {
        let z = q(0);
        // (t-1)^2 (t+2)
        let p = QPoly::linear(&q(1)).pow(2).mul(&QPoly::linear(&q(-2)));
        let sq = p.squarefree_decomposition();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[0], (QPoly::linear(&q(-2)), 1));
        assert_eq!(sq[1], (QPoly::linear(&q(1)), 2));
        assert!(QPoly::zero(&z).squarefree_decomposition().is_empty());
    }
}
