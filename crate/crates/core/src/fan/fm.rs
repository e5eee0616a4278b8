//! Feasibility of small rational inequality systems by Fourier–Motzkin elimination.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `Σ coeffs[k] x_k ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub bound: BigRational,
}

impl Inequality {
    pub fn new(coeffs: Vec<BigRational>, bound: BigRational) -> Self {
        Inequality { coeffs, bound }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c /= &lead;
            }
            self.bound /= &lead;
        }
        self
    }
}

/// Whether some real point satisfies every inequality.
pub fn feasible(mut system: Vec<Inequality>, vars: usize) -> bool {
    for k in 0..vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for ineq in system {
            if ineq.coeffs[k].is_positive() {
                pos.push(ineq);
            } else if ineq.coeffs[k].is_negative() {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = p.coeffs[k].clone();
                let b = -n.coeffs[k].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                let bound = &p.bound * &b + &n.bound * &a;
                rest.push(Inequality::new(coeffs, bound));
            }
        }
        let mut next = Vec::with_capacity(rest.len());
        for ineq in rest {
            if ineq.coeffs.iter().all(Zero::is_zero) {
                if ineq.bound.is_negative() {
                    return false;
                }
                continue;
            }
            next.push(ineq.normalized());
        }
        next.sort_by(|a, b| (&a.coeffs, &a.bound).cmp(&(&b.coeffs, &b.bound)));
        next.dedup();
        system = next;
    }
    system.iter().all(|i| !i.bound.is_negative())
}
