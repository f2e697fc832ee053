//! Forward-mode jets over the Puiseux field: a value together with its
//! derivative with respect to the family parameter. Ring operations obey
//! the Leibniz and quotient rules exactly at truncation order.

use crate::{Ctx, Result};

use super::PuiseuxSeries;

#[derive(Clone, Debug)]
pub struct Jet {
    pub val: PuiseuxSeries,
    pub dbeta: PuiseuxSeries,
}

impl Jet {
    /// A quantity that does not depend on the parameter.
    pub fn constant(val: PuiseuxSeries) -> Self {
        Jet {
            val,
            dbeta: PuiseuxSeries::zero(),
        }
    }

    /// The parameter itself.
    pub fn seed(beta: PuiseuxSeries) -> Self {
        Jet {
            val: beta,
            dbeta: PuiseuxSeries::one(),
        }
    }

    pub fn add(&self, other: &Jet, ctx: &Ctx) -> Jet {
        Jet {
            val: self.val.add(&other.val, ctx),
            dbeta: self.dbeta.add(&other.dbeta, ctx),
        }
    }

    pub fn sub(&self, other: &Jet, ctx: &Ctx) -> Jet {
        Jet {
            val: self.val.sub(&other.val, ctx),
            dbeta: self.dbeta.sub(&other.dbeta, ctx),
        }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            val: self.val.neg(),
            dbeta: self.dbeta.neg(),
        }
    }

    pub fn mul(&self, other: &Jet, ctx: &Ctx) -> Jet {
        Jet {
            val: self.val.mul(&other.val, ctx),
            dbeta: self
                .dbeta
                .mul(&other.val, ctx)
                .add(&self.val.mul(&other.dbeta, ctx), ctx),
        }
    }

    pub fn inverse(&self, ctx: &Ctx) -> Result<Jet> {
        let inv = self.val.inverse(ctx)?;
        let inv2 = inv.mul(&inv, ctx);
        Ok(Jet {
            val: inv,
            dbeta: self.dbeta.mul(&inv2, ctx).neg(),
        })
    }

    pub fn div(&self, other: &Jet, ctx: &Ctx) -> Result<Jet> {
        Ok(self.mul(&other.inverse(ctx)?, ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp_int;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn leibniz_on_square() {
        let ctx = Ctx::default();
        let beta = PuiseuxSeries::constant(c(2.0)).add(&PuiseuxSeries::var(), &ctx);
        let j = Jet::seed(beta.clone());
        let sq = j.mul(&j, &ctx);
        assert!(sq.val.approx_eq(&beta.mul(&beta, &ctx), 1e-12));
        // d(beta^2) = 2 beta
        assert!(sq.dbeta.approx_eq(&beta.scale(c(2.0)), 1e-12));
    }

    #[test]
    fn constant_times_parameter() {
        let ctx = Ctx::default();
        let k = Jet::constant(PuiseuxSeries::constant(c(3.0)));
        let b = Jet::seed(PuiseuxSeries::monomial(exp_int(-1), c(1.0)));
        let prod = k.mul(&b, &ctx);
        assert!(prod.dbeta.approx_eq(&PuiseuxSeries::constant(c(3.0)), 1e-12));
    }

    #[test]
    fn quotient_rule() {
        let ctx = Ctx::default();
        let beta = PuiseuxSeries::constant(c(1.0)).add(&PuiseuxSeries::var(), &ctx);
        let j = Jet::seed(beta.clone());
        // d(1/beta) = -1/beta^2
        let inv = j.inverse(&ctx).unwrap();
        let expect = beta
            .mul(&beta, &ctx)
            .inverse(&ctx)
            .unwrap()
            .neg();
        assert!(inv.dbeta.approx_eq(&expect, 1e-10));
    }
}
