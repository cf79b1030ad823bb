use num_traits::Signed;

use super::VertexSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Pairwise test: every two members are nested or disjoint.
pub fn check_laminar(sets: &[VertexSet]) -> bool {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.crosses(b) {
                return false;
            }
        }
    }
    true
}

/// Laminar family over `0..n` with a positive weight per member.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaminarFamily {
    n: usize,
    sets: Vec<VertexSet>,
    weights: Vec<Rational>,
}

impl LaminarFamily {
    /// Members are stored sorted (by size descending, then contents) and
    /// must be distinct, nonempty, proper or full subsets of `0..n`.
    pub fn new(n: usize, members: Vec<(VertexSet, Rational)>) -> Result<Self> {
        let mut members = members;
        members.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        for w in members.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Input(format!(
                    "duplicate family member {:?}",
                    w[0].0
                )));
            }
        }
        for (s, y) in &members {
            if s.is_empty() || s.as_slice().last().copied().unwrap_or(0) >= n {
                return Err(Error::Input(format!(
                    "family member {s:?} not a nonempty subset of 0..{n}"
                )));
            }
            if !y.is_positive() {
                return Err(Error::Input(format!(
                    "family member {s:?} has nonpositive weight"
                )));
            }
        }
        let (sets, weights): (Vec<_>, Vec<_>) = members.into_iter().unzip();
        if !check_laminar(&sets) {
            return Err(Error::Input("family is not laminar".into()));
        }
        if sets.len() > 2 * n.max(1) {
            return Err(Error::Input(format!(
                "laminar family has {} > 2n members",
                sets.len()
            )));
        }
        Ok(Self { n, sets, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn set(&self, i: usize) -> &VertexSet {
        &self.sets[i]
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexSet, &Rational)> {
        self.sets.iter().zip(self.weights.iter())
    }

    pub fn position(&self, s: &VertexSet) -> Option<usize> {
        self.sets.iter().position(|t| t == s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    #[test]
    fn laminar_examples() {
        assert!(check_laminar(&[vs(&[0, 1]), vs(&[0, 1, 2]), vs(&[3])]));
        assert!(!check_laminar(&[vs(&[0, 1]), vs(&[1, 2])]));
        assert!(check_laminar(&[]));
    }

    #[test]
    fn family_orders_members_and_validates() {
        let f = LaminarFamily::new(4, vec![(vs(&[1]), int(1)), (vs(&[0, 1, 2]), int(2))]).unwrap();
        assert_eq!(f.set(0), &vs(&[0, 1, 2]));
        assert!(LaminarFamily::new(4, vec![(vs(&[0, 1]), int(1)), (vs(&[1, 2]), int(1))]).is_err());
        assert!(LaminarFamily::new(4, vec![(vs(&[0]), int(0))]).is_err());
        assert!(LaminarFamily::new(4, vec![(vs(&[4]), int(1))]).is_err());
    }

    fn definition_laminar(sets: &[VertexSet]) -> bool {
        for a in sets {
            for b in sets {
                let inter = a
                    .as_slice()
                    .iter()
                    .filter(|v| b.as_slice().contains(v))
                    .count();
                if inter != 0 && inter != a.len() && inter != b.len() {
                    return false;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn agrees_with_definition(masks in proptest::collection::vec(1u16..256, 0..6)) {
            let sets: Vec<VertexSet> = masks
                .iter()
                .map(|m| (0..8).filter(|i| m & (1 << i) != 0).collect())
                .collect();
            prop_assert_eq!(check_laminar(&sets), definition_laminar(&sets));
        }
    }
}
