//! Grading group data and the sign engine.
//!
//! Every graded object in this crate is graded by a group `Γ` equipped with
//! a symmetric bilinear form `σ: Γ × Γ → Z/2` and a distinguished element
//! `one` with `σ(one, one) = 1`.  Differentials raise degrees by `one` and
//! all Koszul signs are `(-1)^{σ(a,b)}`.  Two gradings are shipped: `Z` with
//! `σ(a,b) = ab mod 2`, and `Z/2` with `σ(a,b) = ab`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CdgError;

/// A degree, stored canonically: for the `Z/2` grading the value is 0 or 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Degree(pub i64);

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The grading group data `(Γ, σ, one)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradingGroup {
    /// `Γ = Z`, `one = 1`, `σ(a,b) = ab mod 2`.
    Int,
    /// `Γ = Z/2`, `one = 1`, `σ(a,b) = ab`.
    ModTwo,
}

impl GradingGroup {
    pub fn zero(self) -> Degree {
        Degree(0)
    }

    pub fn one(self) -> Degree {
        Degree(1)
    }

    /// Canonical representative of a raw integer value.
    pub fn canon(self, v: i64) -> Degree {
        match self {
            GradingGroup::Int => Degree(v),
            GradingGroup::ModTwo => Degree(v.rem_euclid(2)),
        }
    }

    pub fn add(self, a: Degree, b: Degree) -> Degree {
        self.canon(a.0 + b.0)
    }

    pub fn sub(self, a: Degree, b: Degree) -> Degree {
        self.canon(a.0 - b.0)
    }

    pub fn neg(self, a: Degree) -> Degree {
        self.canon(-a.0)
    }

    /// The group homomorphism `Z → Γ` sending `1` to `one`.
    pub fn embed_int(self, n: i64) -> Degree {
        self.canon(n)
    }

    /// `σ(a, b)` as an element of `Z/2`.
    pub fn sigma(self, a: Degree, b: Degree) -> u8 {
        ((a.0 & 1) & (b.0 & 1)) as u8
    }

    /// `σ(one, g)`: the parity of a degree.
    pub fn parity(self, g: Degree) -> u8 {
        (g.0 & 1) as u8
    }

    /// The Koszul sign `(-1)^{σ(a,b)}` as `+1` or `-1`.
    pub fn koszul_sign(self, a: Degree, b: Degree) -> i8 {
        if self.sigma(a, b) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GradingGroup::Int => "Z",
            GradingGroup::ModTwo => "Z/2",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CdgError> {
        match s {
            "Z" => Ok(GradingGroup::Int),
            "Z/2" => Ok(GradingGroup::ModTwo),
            other => Err(CdgError::Parse(format!("unknown grading {other:?}"))),
        }
    }
}

/// A morphism of grading group data `φ: Γ → Γ'` with `φ(one) = one'` and
/// `σ = σ' ∘ (φ × φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingMorphism {
    pub source: GradingGroup,
    pub target: GradingGroup,
}

impl GradingMorphism {
    /// The only unital maps among the shipped gradings are `Z → Z`,
    /// `Z → Z/2`, and `Z/2 → Z/2`; all satisfy the pull-back condition.
    pub fn new(source: GradingGroup, target: GradingGroup) -> Result<Self, CdgError> {
        if source == GradingGroup::ModTwo && target == GradingGroup::Int {
            // 1 mod 2 has order 2, but 1 ∈ Z does not.
            return Err(CdgError::Grading(
                "no unital group homomorphism Z/2 -> Z exists".into(),
            ));
        }
        Ok(GradingMorphism { source, target })
    }

    pub fn apply(&self, g: Degree) -> Degree {
        self.target.canon(g.0)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_examples() {
        let z2 = GradingGroup::ModTwo;
        assert_eq!(z2.parity(z2.canon(1)), 1);
        let z = GradingGroup::Int;
        assert_eq!(z.parity(Degree(4)), 0);
        assert_eq!(z.parity(Degree(-3)), 1);
    }

    #[test]
    fn koszul_sign_examples() {
        let z = GradingGroup::Int;
        assert_eq!(z.koszul_sign(z.one(), z.one()), -1);
        for g in -5..5 {
            assert_eq!(z.koszul_sign(Degree(0), Degree(g)), 1);
        }
        assert_eq!(z.koszul_sign(Degree(2), Degree(3)), 1);
    }

    #[test]
    fn embed_int_examples() {
        assert_eq!(GradingGroup::ModTwo.embed_int(3), Degree(1));
        assert_eq!(GradingGroup::Int.embed_int(3), Degree(3));
        assert_eq!(GradingGroup::ModTwo.embed_int(0), Degree(0));
        assert_eq!(GradingGroup::Int.embed_int(0), Degree(0));
    }

    #[test]
    fn koszul_bilinearity() {
        for grp in [GradingGroup::Int, GradingGroup::ModTwo] {
            for a in -3..4i64 {
                for b in -3..4i64 {
                    for c in -3..4i64 {
                        let (a, b, c) = (grp.canon(a), grp.canon(b), grp.canon(c));
                        assert_eq!(
                            grp.koszul_sign(grp.add(a, b), c),
                            grp.koszul_sign(a, c) * grp.koszul_sign(b, c)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parity_of_embed() {
        for grp in [GradingGroup::Int, GradingGroup::ModTwo] {
            for n in -7..8 {
                assert_eq!(grp.parity(grp.embed_int(n)), (n.rem_euclid(2)) as u8);
            }
        }
    }

    #[test]
    fn grading_morphisms() {
        let phi = GradingMorphism::new(GradingGroup::Int, GradingGroup::ModTwo).unwrap();
        assert_eq!(phi.apply(Degree(5)), Degree(1));
        assert!(GradingMorphism::new(GradingGroup::Int, GradingGroup::Int).is_ok());
        assert!(GradingMorphism::new(GradingGroup::ModTwo, GradingGroup::Int).is_err());
        // parity preservation
        for n in -6..7 {
            let g = GradingGroup::Int.canon(n);
            assert_eq!(
                GradingGroup::ModTwo.parity(phi.apply(g)),
                GradingGroup::Int.parity(g)
            );
        }
    }
}
