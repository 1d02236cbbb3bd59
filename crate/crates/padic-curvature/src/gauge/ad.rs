//! The adjoint action of the group part of a Weil monoid on the labels of
//! its lifts, and Ad-invariance of metrics.

use serde::Serialize;

use crate::connections::Metric;
use crate::error::{Error, Result};
use crate::weil_monoid::{Labeling, MonoidElement, WeilMonoid};

/// table[g] is the permutation eps_g with sigma phi_i sigma^{-1} = phi_{eps_g(i)}
/// for sigma the group element g.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdAction {
    pub table: Vec<Vec<usize>>,
}

impl AdAction {
    pub fn get(&self, g: usize) -> &[usize] {
        &self.table[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|eps| eps.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Ad(g h) = Ad(g) o Ad(h) on the table.
    pub fn is_homomorphism(&self, m: &WeilMonoid) -> bool {
        let g = m.group();
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| {
                let ab = &self.table[g.mul(a, b)];
                ab.iter().enumerate().all(|(i, &x)| x == self.table[a][self.table[b][i]])
            })
        })
    }
}

/// ad_map at degree t c: (t, h) -> (t, theta^t(g) h g^{-1}), read off on labels.
pub fn ad_map(m: &WeilMonoid, labeling: &Labeling, t: u32) -> Result<AdAction> {
    let g = m.group();
    let labels = labeling.labels(m, t);
    let index = |h: usize| labels.iter().position(|&x| x == h);
    let mut table = Vec::new();
    for s in 0..g.order() {
        let sigma = MonoidElement { t: 0, g: s };
        let sinv = MonoidElement { t: 0, g: g.inv(s) };
        let eps: Option<Vec<usize>> = labels
            .iter()
            .map(|&h| index(m.compose(m.compose(sigma, MonoidElement { t, g: h }), sinv).g))
            .collect();
        table.push(eps.ok_or_else(|| Error::Schema("labels at this degree do not cover the group".into()))?);
    }
    Ok(AdAction { table })
}

/// ad_invariance_check: P_eps q P_eps^t = q, i.e. q_{eps(i) eps(j)} = q_ij, for every group element.
pub fn ad_invariance_check(q: &Metric, action: &AdAction) -> Result<bool> {
    if action.table.first().map(|e| e.len()) != Some(q.n()) {
        return Err(Error::Dimension("Ad-invariance needs N = n".into()));
    }
    Ok(action.table.iter().all(|eps| q.permuted(eps) == *q))
}
