//! Constraints that pin each auxiliary variable to its meaning.

use num_traits::One;

use super::linear::{frac, int, Family, LinExpr, Rational, Sense};
use super::vars::{Side, VarKey};
use super::Builder;

pub(crate) fn build_defining_constraints(b: &mut Builder<'_>) {
    for k in Side::BOTH {
        partial_and_sets(b, k);
    }
    covered(b);
    for k in Side::BOTH {
        support_and_stacks(b, k);
        support_indicators(b, k);
        two_pebbling(b, k);
    }
}

fn partial_and_sets(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.params.side(k.other()).clone();
    let kn = p.size as i64;
    for j in 0..frame.size {
        let mut sum = LinExpr::new();
        for i in 0..p.size {
            sum.add_term(b.id(cell(k, j, i)), Rational::one());
        }
        let ct = b.var(VarKey::Partial(k, j));
        b.push(
            Family::PartialSlice,
            vec![k.to_string(), lbl(j)],
            ct.clone(),
            Sense::Eq,
            sum,
        );

        let set = b.var(VarKey::Set(k, j));
        let extra = b.var(VarKey::Extra(k, j));
        b.push(
            Family::SetExtra,
            vec![k.to_string(), lbl(j)],
            ct.clone(),
            Sense::Eq,
            set.scaled(int(p.pi)).plus(&extra),
        );
        b.push(
            Family::ExtraUpper,
            vec![k.to_string(), lbl(j)],
            extra.clone(),
            Sense::Le,
            LinExpr::constant(int(p.pi - 1)),
        );
        let pair = b.var(VarKey::Pair(k, j));
        b.push(
            Family::PairUpper,
            vec![k.to_string(), lbl(j)],
            pair.clone(),
            Sense::Le,
            extra.scaled(frac(1, 2)),
        );
        b.push(
            Family::PairLower,
            vec![k.to_string(), lbl(j)],
            pair,
            Sense::Ge,
            affine(&extra, int(-1)).scaled(frac(1, 2)),
        );

        let sat = b.var(VarKey::Sat(k, j));
        b.push(
            Family::SatUpper,
            vec![k.to_string(), lbl(j)],
            sat.clone(),
            Sense::Le,
            ct.scaled(frac(1, kn)),
        );
        b.push(
            Family::SatLower,
            vec![k.to_string(), lbl(j)],
            sat.clone(),
            Sense::Ge,
            affine(&ct, int(1 - kn)).scaled(frac(1, kn)),
        );
        let levels = p.saturation_max as i64 + 1;
        b.push(
            Family::XZero,
            vec![k.to_string(), lbl(j)],
            b.var(VarKey::X(k, j, 0)),
            Sense::Eq,
            LinExpr::constant(int(1)),
        );
        for t in 1..=p.saturation_max {
            let x = b.var(VarKey::X(k, j, t));
            let ti = t as i64;
            b.push(
                Family::XUpper,
                vec![k.to_string(), lbl(j), t.to_string()],
                x.clone(),
                Sense::Le,
                sat.scaled(frac(1, ti)),
            );
            b.push(
                Family::XLower,
                vec![k.to_string(), lbl(j), t.to_string()],
                x,
                Sense::Ge,
                affine(&sat, int(1 - ti)).scaled(frac(1, levels + 1)),
            );
        }
    }

    let mut total = LinExpr::new();
    for j in 0..frame.size {
        total.add_term(b.id(VarKey::Set(k, j)), Rational::one());
    }
    b.push(
        Family::YZero,
        vec![k.to_string()],
        b.var(VarKey::Y(k, 0)),
        Sense::Eq,
        LinExpr::constant(int(1)),
    );
    for s in 1..=p.set_count_max {
        let y = b.var(VarKey::Y(k, s));
        let si = s as i64;
        b.push(
            Family::YUpper,
            vec![k.to_string(), s.to_string()],
            y.clone(),
            Sense::Le,
            total.scaled(frac(1, si)),
        );
        b.push(
            Family::YLower,
            vec![k.to_string(), s.to_string()],
            y,
            Sense::Ge,
            affine(&total, int(1 - si)).scaled(frac(1, frame.pi)),
        );
    }
}

fn covered(b: &mut Builder<'_>) {
    let m = b.params.big_m;
    let (ng, nh) = (b.params.g.size, b.params.h.size);
    for i in 0..ng {
        for j in 0..nh {
            let cov = b.var(VarKey::Covered(i, j));
            let c = b.var(VarKey::C(i, j));
            b.push(
                Family::CoveredUpper,
                vec![lbl(i), lbl(j)],
                cov.clone(),
                Sense::Le,
                c.clone(),
            );
            b.push(
                Family::CoveredLower,
                vec![lbl(i), lbl(j)],
                cov,
                Sense::Ge,
                c.scaled(frac(1, m)),
            );
        }
    }
}

fn support_and_stacks(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.params.side(k.other()).clone();
    let m = b.params.big_m;
    for j in 0..frame.size {
        let mut sum = LinExpr::new();
        for i in 0..p.size {
            let (gi, hj) = match k {
                Side::G => (i, j),
                Side::H => (j, i),
            };
            sum.add_term(b.id(VarKey::Covered(gi, hj)), Rational::one());
        }
        let support = b.var(VarKey::Support(k, j));
        b.push(
            Family::Support,
            vec![k.to_string(), lbl(j)],
            support.clone(),
            Sense::Eq,
            sum,
        );

        let ct = b.var(VarKey::Partial(k, j));
        for d in 1..=frame.diameter {
            let pow = 1i64 << d;
            let stack = b.var(VarKey::Stack(k, j, d));
            let good = b.var(VarKey::GoodStack(k, j, d));
            // ct - (2^d - 1)(support - 1)
            let slack = ct.clone().minus(&affine(&support, int(-1)).scaled(int(pow - 1)));
            let index = vec![k.to_string(), lbl(j), d.to_string()];
            b.push(
                Family::StackUpper,
                index.clone(),
                stack.scaled(int(pow)),
                Sense::Le,
                slack.clone().plus(&affine(&good.scaled(int(-m)), int(m))),
            );
            b.push(
                Family::StackUpper2,
                index.clone(),
                stack.scaled(int(pow)),
                Sense::Le,
                good.scaled(int(m)),
            );
            b.push(
                Family::StackLower,
                index.clone(),
                stack.scaled(int(pow)),
                Sense::Ge,
                ct.clone().minus(&support.scaled(int(pow - 1))),
            );
            b.push(
                Family::GoodStackUpper,
                index.clone(),
                good.clone(),
                Sense::Le,
                affine(&slack.scaled(frac(1, m)), int(1)),
            );
            b.push(Family::GoodStackLower, index, good, Sense::Ge, slack.scaled(frac(1, m)));
        }
    }
}

fn support_indicators(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.params.side(k.other()).clone();
    let kn = p.size as i64;
    for j in 0..frame.size {
        let support = b.var(VarKey::Support(k, j));
        for &s in &p.support_indices {
            let si = s as i64;
            let index = vec![k.to_string(), lbl(j), s.to_string()];
            let less = b.var(VarKey::SupportLess(k, j, s));
            let more = b.var(VarKey::SupportMore(k, j, s));
            let is = b.var(VarKey::SupportIs(k, j, s));
            // (|K| - support + 1) / (|K| - s + 1)
            let upper = affine(&support.scaled(int(-1)), int(kn + 1)).scaled(frac(1, kn - si + 1));
            b.push(Family::SupportLessUpper, index.clone(), less.clone(), Sense::Le, upper);
            // (s + 1 - support) / |K|; at s = |K| the denominator is widened to
            // |K| + 1 so the bound never exceeds one.
            let lower_den = kn.max(si + 1);
            let lower = affine(&support.scaled(int(-1)), int(si + 1)).scaled(frac(1, lower_den));
            b.push(Family::SupportLessLower, index.clone(), less.clone(), Sense::Ge, lower);
            b.push(
                Family::SupportMoreUpper,
                index.clone(),
                more.clone(),
                Sense::Le,
                affine(&support, int(1)).scaled(frac(1, si + 1)),
            );
            // (support - s + 1) / |K|, widened to |K| + 1 at s = 0 for the same reason.
            let more_den = kn.max(kn - si + 1);
            b.push(
                Family::SupportMoreLower,
                index.clone(),
                more.clone(),
                Sense::Ge,
                affine(&support, int(1 - si)).scaled(frac(1, more_den)),
            );
            b.push(
                Family::SupportIsMore,
                index.clone(),
                is.clone(),
                Sense::Le,
                more.clone(),
            );
            b.push(
                Family::SupportIsLess,
                index.clone(),
                is.clone(),
                Sense::Le,
                less.clone(),
            );
            b.push(
                Family::SupportIsBoth,
                index,
                affine(&is, int(1)),
                Sense::Ge,
                more.plus(&less),
            );
        }
    }
}

fn two_pebbling(b: &mut Builder<'_>, k: Side) {
    let p = b.params.side(k).clone();
    let frame = b.params.side(k.other()).clone();
    let m = b.params.big_m;
    let root = b.inst.root_of(k);
    for j in 0..frame.size {
        let index = vec![k.to_string(), lbl(j)];
        let support = b.var(VarKey::Support(k, j));
        let default = affine(&support.scaled(int(-1)), int(2 * p.pi + 1));
        let mut n2 = default.clone();
        for &(s, diff) in &p.difference {
            n2.add_term(b.id(VarKey::SupportIs(k, j, s)), int(diff));
        }
        let mut n2mon = default;
        for &(s, diff) in &p.difference_mon {
            n2mon.add_term(b.id(VarKey::SupportIs(k, j, s)), int(diff));
        }
        let n2peb = b.var(VarKey::N2peb(k, j));
        b.push(Family::N2peb, index.clone(), n2peb.clone(), Sense::Eq, n2);
        b.push(
            Family::N2pebMon,
            index.clone(),
            b.var(VarKey::N2pebMon(k, j)),
            Sense::Eq,
            n2mon,
        );

        let ct = b.var(VarKey::Partial(k, j));
        let can = b.var(VarKey::Can2peb(k, j));
        // ct - n2peb + 1
        let surplus = affine(&ct.clone().minus(&n2peb), int(1));
        b.push(
            Family::Can2pebOn,
            index.clone(),
            can.scaled(int(m)),
            Sense::Ge,
            surplus.clone(),
        );
        b.push(
            Family::Can2pebOff,
            index.clone(),
            affine(&can.scaled(int(-m)), int(m)),
            Sense::Ge,
            n2peb.minus(&ct),
        );

        let nroot = b.var(VarKey::NRoot(k, j));
        let discounted = affine(&can.scaled(int(2)).plus(&surplus.scaled(frac(1, p.pi))), int(-1));
        b.push(Family::NrootLbound, index.clone(), nroot.clone(), Sense::Ge, discounted);
        let at_root = b.var(cell(k, j, root));
        let plain = affine(&ct.minus(&at_root), int(1))
            .scaled(frac(1, p.pi))
            .plus(&affine(&at_root, int(-1)));
        b.push(Family::NrootLboundRoot, index, nroot, Sense::Ge, plain);
    }
}

/// Product vertex holding vertex `i` of `K` inside slice `j`.
pub(crate) fn cell(k: Side, j: usize, i: usize) -> VarKey {
    match k {
        Side::G => VarKey::C(i, j),
        Side::H => VarKey::C(j, i),
    }
}

pub(crate) fn lbl(v: usize) -> String {
    (v + 1).to_string()
}

pub(crate) fn affine(e: &LinExpr, c: Rational) -> LinExpr {
    let mut out = e.clone();
    out.add_const(c);
    out
}
