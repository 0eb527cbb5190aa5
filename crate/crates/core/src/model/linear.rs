//! Exact linear constraints over catalog variables.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::vars::VarId;

pub type Rational = Ratio<i128>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

/// Affine expression `sum coef * var + constant`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinExpr {
    terms: BTreeMap<VarId, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: VarId) -> Self {
        let mut e = Self::new();
        e.add_term(v, Rational::one());
        e
    }

    pub fn add_term(&mut self, v: VarId, coef: Rational) -> &mut Self {
        let entry = self.terms.entry(v).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
        self
    }

    pub fn add_const(&mut self, c: Rational) -> &mut Self {
        self.constant += c;
        self
    }

    /// `self += k * other`
    pub fn add_scaled(&mut self, other: &LinExpr, k: Rational) -> &mut Self {
        for (&v, &c) in &other.terms {
            self.add_term(v, c * k);
        }
        self.constant += other.constant * k;
        self
    }

    pub fn scaled(&self, k: Rational) -> LinExpr {
        let mut e = LinExpr::new();
        e.add_scaled(self, k);
        e
    }

    pub fn plus(mut self, other: &LinExpr) -> LinExpr {
        self.add_scaled(other, Rational::one());
        self
    }

    pub fn minus(mut self, other: &LinExpr) -> LinExpr {
        self.add_scaled(other, -Rational::one());
        self
    }

    pub fn terms(&self) -> &BTreeMap<VarId, Rational> {
        &self.terms
    }

    pub fn constant_term(&self) -> Rational {
        self.constant
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// Constraint families, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    PartialSlice,
    SetExtra,
    ExtraUpper,
    PairUpper,
    PairLower,
    YZero,
    YUpper,
    YLower,
    SatUpper,
    SatLower,
    XZero,
    XUpper,
    XLower,
    CoveredUpper,
    CoveredLower,
    Support,
    StackUpper,
    StackUpper2,
    StackLower,
    GoodStackUpper,
    GoodStackLower,
    SupportLessUpper,
    SupportLessLower,
    SupportMoreUpper,
    SupportMoreLower,
    SupportIsMore,
    SupportIsLess,
    SupportIsBoth,
    N2peb,
    N2pebMon,
    Can2pebOn,
    Can2pebOff,
    NrootLbound,
    NrootLboundRoot,
    SetCount,
    SatNeighborhood,
    BipartitePairs,
    RootReach,
    StarFeed,
    StackNearRoot,
    RootNoSet,
    StackIntoRoot,
    PathIntoRoot,
}

impl Family {
    pub const ALL: [Family; 43] = [
        Family::PartialSlice,
        Family::SetExtra,
        Family::ExtraUpper,
        Family::PairUpper,
        Family::PairLower,
        Family::YZero,
        Family::YUpper,
        Family::YLower,
        Family::SatUpper,
        Family::SatLower,
        Family::XZero,
        Family::XUpper,
        Family::XLower,
        Family::CoveredUpper,
        Family::CoveredLower,
        Family::Support,
        Family::StackUpper,
        Family::StackUpper2,
        Family::StackLower,
        Family::GoodStackUpper,
        Family::GoodStackLower,
        Family::SupportLessUpper,
        Family::SupportLessLower,
        Family::SupportMoreUpper,
        Family::SupportMoreLower,
        Family::SupportIsMore,
        Family::SupportIsLess,
        Family::SupportIsBoth,
        Family::N2peb,
        Family::N2pebMon,
        Family::Can2pebOn,
        Family::Can2pebOff,
        Family::NrootLbound,
        Family::NrootLboundRoot,
        Family::SetCount,
        Family::SatNeighborhood,
        Family::BipartitePairs,
        Family::RootReach,
        Family::StarFeed,
        Family::StackNearRoot,
        Family::RootNoSet,
        Family::StackIntoRoot,
        Family::PathIntoRoot,
    ];

    /// Short tag used in row names.
    pub fn tag(self) -> &'static str {
        match self {
            Family::PartialSlice => "partial",
            Family::SetExtra => "setExtra",
            Family::ExtraUpper => "extraUpper",
            Family::PairUpper => "pairUpper",
            Family::PairLower => "pairLower",
            Family::YZero => "yZero",
            Family::YUpper => "yUpper",
            Family::YLower => "ylower",
            Family::SatUpper => "satUpper",
            Family::SatLower => "satLower",
            Family::XZero => "xZero",
            Family::XUpper => "xUpper",
            Family::XLower => "xlower",
            Family::CoveredUpper => "coveredUpper",
            Family::CoveredLower => "coveredLower",
            Family::Support => "support",
            Family::StackUpper => "stackUpper",
            Family::StackUpper2 => "stackUpper2",
            Family::StackLower => "stackLower",
            Family::GoodStackUpper => "goodStackUpper",
            Family::GoodStackLower => "goodStackLower",
            Family::SupportLessUpper => "supportLessUpper",
            Family::SupportLessLower => "supportLessLower",
            Family::SupportMoreUpper => "supportMoreUpper",
            Family::SupportMoreLower => "supportMoreLower",
            Family::SupportIsMore => "supportIsMore",
            Family::SupportIsLess => "supportIsLess",
            Family::SupportIsBoth => "supportIsBoth",
            Family::N2peb => "n2peb",
            Family::N2pebMon => "n2pebMon",
            Family::Can2pebOn => "can2pebOn",
            Family::Can2pebOff => "can2pebOff",
            Family::NrootLbound => "nroot_lbound",
            Family::NrootLboundRoot => "nroot_lbound_root",
            Family::SetCount => "setCount",
            Family::SatNeighborhood => "satNeighborhood",
            Family::BipartitePairs => "bipartitePairs",
            Family::RootReach => "rootReach",
            Family::StarFeed => "starFeed",
            Family::StackNearRoot => "stackNearRoot",
            Family::RootNoSet => "rootNoSet",
            Family::StackIntoRoot => "stackIntoRoot",
            Family::PathIntoRoot => "pathIntoRoot",
        }
    }

    /// One-line description for the debug listing.
    pub fn description(self) -> &'static str {
        match self {
            Family::PartialSlice => "slice total equals the sum of its vertex counts",
            Family::SetExtra => "slice total = pi(K) * set + extra",
            Family::ExtraUpper => "extra <= pi(K) - 1",
            Family::PairUpper | Family::PairLower => "pair = floor(extra / 2)",
            Family::YZero | Family::YUpper | Family::YLower => "y[s] = 1 iff total set count >= s",
            Family::SatUpper | Family::SatLower => "saturation level of a slice",
            Family::XZero | Family::XUpper | Family::XLower => "x[t] = 1 iff saturation >= t",
            Family::CoveredUpper | Family::CoveredLower => "covered = 1 iff the vertex holds a pebble",
            Family::Support => "slice support size",
            Family::StackUpper | Family::StackUpper2 | Family::StackLower => "count of 2^d-stacks in a slice",
            Family::GoodStackUpper | Family::GoodStackLower => "indicator that the stack upper bound applies",
            Family::SupportLessUpper | Family::SupportLessLower => "supportLess[s] = 1 iff support <= s",
            Family::SupportMoreUpper | Family::SupportMoreLower => "supportMore[s] = 1 iff support >= s",
            Family::SupportIsMore | Family::SupportIsLess | Family::SupportIsBoth => "supportIs[s] = 1 iff support = s",
            Family::N2peb => "pebbles needed to 2-pebble the slice root copy",
            Family::N2pebMon => "monotone variant of n2peb",
            Family::Can2pebOn | Family::Can2pebOff => "can2peb = 1 iff slice total >= n2peb",
            Family::NrootLbound => "pebbles reaching the root copy, with the 2-pebbling discount",
            Family::NrootLboundRoot => "pebbles reaching the root copy, crediting pebbles already there",
            Family::SetCount => "total K-set count stays below pi of the frame graph",
            Family::SatNeighborhood => "completing sets around a saturated central slice",
            Family::BipartitePairs => "completing sets from pairs across a complete bipartite pattern",
            Family::RootReach => "pebbles reachable into the root copy of the frame graph",
            Family::StarFeed => "heavy central slice feeding a star of slices",
            Family::StackNearRoot => "building a 2^d-stack next to the root",
            Family::RootNoSet => "no full set in the root slice",
            Family::StackIntoRoot => "stacks moved straight into the root slice",
            Family::PathIntoRoot => "loose pebbles collected along a path into the root slice",
        }
    }

    pub fn is_pebbling(self) -> bool {
        self >= Family::SetCount
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Family plus index tuple, rendered as an LP-safe row name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintLabel {
    pub family: Family,
    pub index: Vec<String>,
}

impl ConstraintLabel {
    pub fn new(family: Family, index: Vec<String>) -> Self {
        ConstraintLabel { family, index }
    }
}

impl fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.tag())?;
        for part in &self.index {
            write!(f, "_{part}")?;
        }
        Ok(())
    }
}

/// `sum terms (sense) rhs`, coefficients exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub label: ConstraintLabel,
    pub terms: Vec<(VarId, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl LinearConstraint {
    /// Builds `lhs (sense) rhs`, moving every variable to the left and every
    /// constant to the right.
    pub fn new(label: ConstraintLabel, lhs: LinExpr, sense: Sense, rhs: LinExpr) -> Self {
        let diff = lhs.minus(&rhs);
        LinearConstraint {
            label,
            terms: diff.terms.iter().map(|(&v, &c)| (v, c)).collect(),
            sense,
            rhs: -diff.constant,
        }
    }

    /// Integer coefficients and right-hand side, scaled by the lcm of all
    /// denominators (a positive factor, so the sense is kept).
    pub fn integer_form(&self) -> (Vec<(VarId, i128)>, i128) {
        let lcm = self
            .terms
            .iter()
            .map(|(_, c)| *c.denom())
            .chain(std::iter::once(*self.rhs.denom()))
            .fold(1i128, |acc, d| acc.lcm(&d));
        let scale = Rational::from_integer(lcm);
        let terms = self.terms.iter().map(|&(v, c)| (v, (c * scale).to_integer())).collect();
        (terms, (self.rhs * scale).to_integer())
    }

    /// Evaluates the constraint; `value` supplies each variable's value.
    pub fn is_satisfied(&self, mut value: impl FnMut(VarId) -> Option<i64>) -> Result<bool, VarId> {
        let mut lhs = Rational::zero();
        for &(v, c) in &self.terms {
            let x = value(v).ok_or(v)?;
            lhs += c * int(x);
        }
        Ok(match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        })
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .chain(std::iter::once(self.rhs.abs()))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_move_right_and_terms_merge() {
        let x = VarId(0);
        let y = VarId(1);
        let mut lhs = LinExpr::var(x);
        lhs.add_term(y, frac(1, 2)).add_const(int(3));
        let mut rhs = LinExpr::var(y);
        rhs.add_const(int(1));
        let c = LinearConstraint::new(ConstraintLabel::new(Family::SetCount, vec![]), lhs, Sense::Le, rhs);
        assert_eq!(c.terms, vec![(x, int(1)), (y, frac(-1, 2))]);
        assert_eq!(c.rhs, int(-2));
        let (terms, rhs) = c.integer_form();
        assert_eq!(terms, vec![(x, 2), (y, -1)]);
        assert_eq!(rhs, -4);
        assert_eq!(c.is_satisfied(|v| Some(if v == x { 0 } else { 4 })), Ok(true));
        assert_eq!(c.is_satisfied(|v| Some(if v == x { 1 } else { 4 })), Ok(false));
        assert_eq!(c.is_satisfied(|v| if v == x { Some(0) } else { None }), Err(y));
    }

    #[test]
    fn cancelled_terms_disappear() {
        let x = VarId(3);
        let e = LinExpr::var(x).minus(&LinExpr::var(x));
        assert!(e.terms().is_empty());
    }

    #[test]
    fn label_renders_as_row_name() {
        let l = ConstraintLabel::new(
            Family::SatNeighborhood,
            vec!["G".into(), "v3".into(), "e1".into(), "S2.4".into()],
        );
        assert_eq!(l.to_string(), "satNeighborhood_G_v3_e1_S2.4");
    }
}
