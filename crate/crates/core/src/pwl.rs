//! Continuous nondecreasing piecewise-linear functions with slopes 0 and 1.
//!
//! These are the value functions of the regret unfolding, seen as functions
//! of the running margin. A function is stored as its breakpoints: it is
//! constant left of the first one, linear between consecutive ones and has
//! slope 1 right of the last one.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pwl {
    pts: Vec<(Rational, Rational)>,
}

impl Pwl {
    /// `m -> max(m, x0) - x0 + y0`.
    pub fn hinge(x0: Rational, y0: Rational) -> Self {
        Pwl { pts: vec![(x0, y0)] }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.pts
    }

    /// The value as the margin tends to minus infinity.
    pub fn left(&self) -> &Rational {
        &self.pts[0].1
    }

    pub fn eval(&self, m: &Rational) -> Rational {
        let pts = &self.pts;
        if *m <= pts[0].0 {
            return pts[0].1.clone();
        }
        let last = pts.last().unwrap();
        if *m >= last.0 {
            return &last.1 + (m - &last.0);
        }
        let i = pts.partition_point(|p| p.0 <= *m) - 1;
        let (x0, y0) = &pts[i];
        let (x1, y1) = &pts[i + 1];
        y0 + (m - x0) * (y1 - y0) / (x1 - x0)
    }

    /// Evaluates at an optional margin, absent meaning minus infinity.
    pub fn eval_opt(&self, m: Option<&Rational>) -> Rational {
        m.map_or_else(|| self.left().clone(), |m| self.eval(m))
    }

    /// `m -> f(m - a)`.
    pub fn shift(&self, a: &Rational) -> Self {
        Pwl {
            pts: self.pts.iter().map(|(x, y)| (x + a, y.clone())).collect(),
        }
    }

    /// `m -> f(max(m, b))`.
    pub fn clamp(&self, b: &Rational) -> Self {
        if *b <= self.pts[0].0 {
            return self.clone();
        }
        let mut pts = vec![(b.clone(), self.eval(b))];
        pts.extend(self.pts.iter().filter(|p| p.0 > *b).cloned());
        Pwl::simplified(pts)
    }

    /// Pointwise maximum (`max = true`) or minimum.
    pub fn combine(&self, other: &Pwl, max: bool) -> Self {
        let mut xs: Vec<&Rational> = self.pts.iter().chain(other.pts.iter()).map(|p| &p.0).collect();
        xs.sort();
        xs.dedup();
        let pick = |a: Rational, b: Rational| {
            if (a >= b) == max {
                a
            } else {
                b
            }
        };
        let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(xs.len() * 2);
        let mut prev: Option<(Rational, Rational)> = None;
        for x in xs {
            let (fa, ga) = (self.eval(x), other.eval(x));
            let diff = &fa - &ga;
            if let Some((px, pd)) = &prev {
                if (pd.is_positive() && diff.is_negative()) || (pd.is_negative() && diff.is_positive()) {
                    let cx = px + (x - px) * pd / (pd - &diff);
                    let cy = self.eval(&cx);
                    pts.push((cx, cy));
                }
            }
            prev = Some((x.clone(), diff));
            pts.push((x.clone(), pick(fa, ga)));
        }
        Pwl::simplified(pts)
    }

    pub fn max(&self, other: &Pwl) -> Self {
        self.combine(other, true)
    }

    pub fn min(&self, other: &Pwl) -> Self {
        self.combine(other, false)
    }

    /// Drops breakpoints at which the slope does not change.
    fn simplified(pts: Vec<(Rational, Rational)>) -> Self {
        let n = pts.len();
        let slope = |i: usize| (&pts[i + 1].1 - &pts[i].1) / (&pts[i + 1].0 - &pts[i].0);
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            let s_in = if i == 0 { Rational::zero() } else { slope(i - 1) };
            let s_out = if i + 1 == n { Rational::one() } else { slope(i) };
            if s_in != s_out {
                keep.push(pts[i].clone());
            }
        }
        debug_assert!(!keep.is_empty());
        Pwl { pts: keep }
    }

    /// Number of breakpoints.
    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Compares two functions at a margin; used for tie-breaking witnesses.
pub fn compare_at(f: &Pwl, g: &Pwl, m: Option<&Rational>) -> Ordering {
    f.eval_opt(m).cmp(&g.eval_opt(m))
}
