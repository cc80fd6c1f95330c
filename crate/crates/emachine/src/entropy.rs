//! Finite probability distributions, joint tables and the Shannon
//! functionals used everywhere else in the crate.
//!
//! | Function | Meaning |
//! |----------|---------|
//! | [`shannon_entropy`] | H(p) = -Σ p log₂ p |
//! | [`conditional_entropy`] | H(T\|G) = Σ_g P(g) H(T\|G=g) |
//! | [`marginalize`] | sum out all axes not kept |
//!
//! Everything is in bits (log base 2), with 0·log 0 := 0. Distributions
//! built from rational machine definitions carry exact probabilities; their
//! entropies are reported exactly whenever every probability is a dyadic
//! rational (see [`crate::exact::log2_exact`]).

use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{entropy_exact, entropy_f64, Prob};

const SUM_TOLERANCE: f64 = 1e-12;

/// A finite probability distribution over labelled outcomes.
///
/// Valid by construction: probabilities are non-negative, labels are unique,
/// and the total mass is one (exactly for rational-backed instances, within
/// 1e-12 for float-backed ones).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist {
    entries: Vec<(String, Prob)>,
}

impl ProbDist {
    pub fn new(entries: Vec<(String, Prob)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let mut seen = HashSet::new();
        for (label, p) in &entries {
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
            if p.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {} for {label}",
                    p.format()
                )));
            }
        }
        let all_exact = entries.iter().all(|(_, p)| p.is_exact());
        if all_exact {
            let mut sum = BigRational::from_integer(0.into());
            for (_, p) in &entries {
                sum += p.as_exact().unwrap();
            }
            if !sum.is_one() {
                return Err(Error::InvalidDistribution(format!(
                    "exact probabilities sum to {}, expected 1",
                    crate::exact::rational_to_string(&sum)
                )));
            }
        } else {
            let sum: f64 = entries.iter().map(|(_, p)| p.to_f64()).sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "probabilities sum to {sum}, expected 1"
                )));
            }
        }
        Ok(ProbDist { entries })
    }

    /// Exact uniform distribution over the given labels.
    pub fn uniform<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let n = labels.len() as i64;
        Self::new(
            labels
                .iter()
                .map(|l| (l.as_ref().to_string(), Prob::ratio(1, n)))
                .collect(),
        )
    }

    pub fn from_f64(entries: Vec<(String, f64)>) -> Result<Self> {
        Self::new(
            entries
                .into_iter()
                .map(|(l, v)| (l, Prob::approx(v)))
                .collect(),
        )
    }

    /// Point mass on a single outcome.
    pub fn point(label: &str) -> Self {
        ProbDist {
            entries: vec![(label.to_string(), Prob::one())],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Prob)> {
        self.entries.iter().map(|(l, p)| (l.as_str(), p))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn prob(&self, label: &str) -> Option<&Prob> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| p)
    }

    pub fn prob_f64(&self, label: &str) -> f64 {
        self.prob(label).map(Prob::to_f64).unwrap_or(0.0)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|(_, p)| p.is_exact())
    }

    /// Entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_f64(self.entries.iter().map(|(_, p)| p))
    }

    /// Exact entropy when every probability is a dyadic rational.
    pub fn entropy_exact(&self) -> Option<BigRational> {
        entropy_exact(self.entries.iter().map(|(_, p)| p))
    }

    /// Total-variation distance, over the union of supports.
    pub fn total_variation(&self, other: &ProbDist) -> f64 {
        let mut labels: Vec<&str> = self.labels().collect();
        for l in other.labels() {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        0.5 * labels
            .iter()
            .map(|l| (self.prob_f64(l) - other.prob_f64(l)).abs())
            .sum::<f64>()
    }
}

/// Shannon entropy H(p) = -Σ p log₂ p in bits.
pub fn shannon_entropy(d: &ProbDist) -> f64 {
    d.entropy_bits()
}

/// A joint distribution over several named axes, stored sparsely.
///
/// Entry keys are index tuples into the per-axis label lists; only nonzero
/// probabilities are stored. The table is valid by construction: total mass
/// one, no negative entries.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    axes: Vec<String>,
    labels: Vec<Vec<String>>,
    entries: BTreeMap<Vec<u32>, Prob>,
}

impl JointTable {
    pub fn new(
        axes: Vec<String>,
        labels: Vec<Vec<String>>,
        cells: Vec<(Vec<u32>, Prob)>,
    ) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidDistribution("joint table with no axes".into()));
        }
        if axes.len() != labels.len() {
            return Err(Error::InvalidDistribution(
                "axis/label list length mismatch".into(),
            ));
        }
        let mut seen = HashSet::new();
        for a in &axes {
            if !seen.insert(a.clone()) {
                return Err(Error::DuplicateLabel(a.clone()));
            }
        }
        let mut entries: BTreeMap<Vec<u32>, Prob> = BTreeMap::new();
        for (key, p) in cells {
            if key.len() != axes.len() {
                return Err(Error::InvalidDistribution(format!(
                    "cell key {key:?} has wrong arity"
                )));
            }
            for (axis, &idx) in key.iter().enumerate() {
                if idx as usize >= labels[axis].len() {
                    return Err(Error::InvalidDistribution(format!(
                        "cell index {idx} out of range on axis {}",
                        axes[axis]
                    )));
                }
            }
            if p.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {} at {key:?}",
                    p.format()
                )));
            }
            if p.is_zero() {
                continue;
            }
            match entries.get_mut(&key) {
                Some(existing) => *existing = existing.add(&p),
                None => {
                    entries.insert(key, p);
                }
            }
        }
        let table = JointTable {
            axes,
            labels,
            entries,
        };
        table.check_mass()?;
        Ok(table)
    }

    fn check_mass(&self) -> Result<()> {
        if self.entries.values().all(|p| p.is_exact()) {
            let mut sum = BigRational::from_integer(0.into());
            for p in self.entries.values() {
                sum += p.as_exact().unwrap();
            }
            if !sum.is_one() {
                return Err(Error::InvalidDistribution(format!(
                    "exact joint mass is {}, expected 1",
                    crate::exact::rational_to_string(&sum)
                )));
            }
        } else {
            let sum: f64 = self.entries.values().map(Prob::to_f64).sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "joint mass is {sum}, expected 1"
                )));
            }
        }
        Ok(())
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn axis_labels(&self, axis: &str) -> Result<&[String]> {
        let idx = self.axis_index(axis)?;
        Ok(&self.labels[idx])
    }

    fn axis_index(&self, axis: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a == axis)
            .ok_or_else(|| Error::UnknownAxis(axis.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Prob)> {
        self.entries.iter()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Prob::is_exact)
    }

    /// Probability of a full assignment given as `(axis, label)` pairs.
    pub fn prob_of(&self, assignment: &[(&str, &str)]) -> Result<Prob> {
        if assignment.len() != self.axes.len() {
            return Err(Error::InvalidDistribution(
                "assignment must cover every axis".into(),
            ));
        }
        let mut key = vec![0u32; self.axes.len()];
        for (axis, label) in assignment {
            let a = self.axis_index(axis)?;
            let l = self.labels[a]
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| Error::UnknownLabel {
                    kind: "outcome",
                    label: (*label).to_string(),
                })?;
            key[a] = l as u32;
        }
        Ok(self.entries.get(&key).cloned().unwrap_or_else(Prob::zero))
    }

    /// Sums out every axis not in `keep`. Probability mass is conserved
    /// exactly for rational tables.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointTable> {
        if keep.is_empty() {
            return Err(Error::EmptyProjection);
        }
        let mut keep_idx = Vec::with_capacity(keep.len());
        for axis in keep {
            let idx = self.axis_index(axis)?;
            if keep_idx.contains(&idx) {
                return Err(Error::DuplicateLabel((*axis).to_string()));
            }
            keep_idx.push(idx);
        }
        // Preserve the original axis order in the result.
        keep_idx.sort_unstable();
        let mut entries: BTreeMap<Vec<u32>, Prob> = BTreeMap::new();
        for (key, p) in &self.entries {
            let projected: Vec<u32> = keep_idx.iter().map(|&i| key[i]).collect();
            match entries.get_mut(&projected) {
                Some(existing) => *existing = existing.add(p),
                None => {
                    entries.insert(projected, p.clone());
                }
            }
        }
        Ok(JointTable {
            axes: keep_idx.iter().map(|&i| self.axes[i].clone()).collect(),
            labels: keep_idx.iter().map(|&i| self.labels[i].clone()).collect(),
            entries,
        })
    }

    /// Marginal distribution of a single axis, including zero-mass labels.
    pub fn marginal_dist(&self, axis: &str) -> Result<ProbDist> {
        let table = self.marginalize(&[axis])?;
        let labels = &table.labels[0];
        let mut entries: Vec<(String, Prob)> = labels
            .iter()
            .map(|l| (l.clone(), Prob::zero()))
            .collect();
        for (key, p) in &table.entries {
            entries[key[0] as usize].1 = p.clone();
        }
        ProbDist::new(entries)
    }

    /// Conditional distribution of `target` given a partial assignment of
    /// other axes. Errors if the conditioning event has zero probability.
    pub fn conditional_dist(&self, target: &str, given: &[(&str, &str)]) -> Result<ProbDist> {
        let t = self.axis_index(target)?;
        let mut constraints = Vec::with_capacity(given.len());
        for (axis, label) in given {
            let a = self.axis_index(axis)?;
            if a == t {
                return Err(Error::AxisOverlap(target.to_string()));
            }
            let l = self.labels[a]
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| Error::UnknownLabel {
                    kind: "outcome",
                    label: (*label).to_string(),
                })? as u32;
            constraints.push((a, l));
        }
        let mut weight = Prob::zero();
        let mut masses: Vec<Prob> = vec![Prob::zero(); self.labels[t].len()];
        for (key, p) in &self.entries {
            if constraints.iter().all(|&(a, l)| key[a] == l) {
                weight = weight.add(p);
                masses[key[t] as usize] = masses[key[t] as usize].add(p);
            }
        }
        if weight.is_zero() {
            return Err(Error::InvalidDistribution(
                "conditioning event has zero probability".into(),
            ));
        }
        ProbDist::new(
            self.labels[t]
                .iter()
                .zip(masses)
                .map(|(l, m)| (l.clone(), m.div(&weight)))
                .collect(),
        )
    }

    /// Joint entropy of the table in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_f64(self.entries.values())
    }

    pub fn entropy_exact(&self) -> Option<BigRational> {
        entropy_exact(self.entries.values())
    }
}

/// Conditional entropy H(target | given) in bits, computed as
/// Σ_g P(g) · H(target | given = g). Axes not mentioned are summed out.
pub fn conditional_entropy(j: &JointTable, target: &str, given: &[&str]) -> Result<f64> {
    Ok(conditional_cells(j, target, given)?
        .into_iter()
        .map(|(w, cell)| w.to_f64() * entropy_f64(cell.iter()))
        .sum::<f64>()
        .max(0.0))
}

/// Exact conditional entropy, available when every conditional cell
/// distribution is dyadic-rational. The cell weights only need to be
/// rational, so e.g. a deterministic kernel driven by a non-dyadic prior
/// still yields an exact (zero) answer.
pub fn conditional_entropy_exact(
    j: &JointTable,
    target: &str,
    given: &[&str],
) -> Result<Option<BigRational>> {
    let cells = conditional_cells(j, target, given)?;
    let mut total = BigRational::from_integer(0.into());
    for (w, cell) in cells {
        let weight = match w.as_exact() {
            Some(r) => r.clone(),
            None => return Ok(None),
        };
        match entropy_exact(cell.iter()) {
            Some(h) => total += weight * h,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// For each assignment of `given`, the cell weight P(g) and the conditional
/// distribution of `target` within the cell.
fn conditional_cells(
    j: &JointTable,
    target: &str,
    given: &[&str],
) -> Result<Vec<(Prob, Vec<Prob>)>> {
    let t_idx = j.axis_index(target)?;
    let mut given_idx = Vec::with_capacity(given.len());
    for g in given {
        let idx = j.axis_index(g)?;
        if idx == t_idx {
            return Err(Error::AxisOverlap((*g).to_string()));
        }
        if given_idx.contains(&idx) {
            return Err(Error::DuplicateLabel((*g).to_string()));
        }
        given_idx.push(idx);
    }
    let mut keep: Vec<&str> = given.to_vec();
    keep.push(target);
    let reduced = j.marginalize(&keep)?;
    let rt = reduced.axis_index(target)?;
    let rg: Vec<usize> = given
        .iter()
        .map(|g| reduced.axis_index(g))
        .collect::<Result<_>>()?;

    let mut cells: BTreeMap<Vec<u32>, (Prob, BTreeMap<u32, Prob>)> = BTreeMap::new();
    for (key, p) in &reduced.entries {
        let g_key: Vec<u32> = rg.iter().map(|&i| key[i]).collect();
        let cell = cells
            .entry(g_key)
            .or_insert_with(|| (Prob::zero(), BTreeMap::new()));
        cell.0 = cell.0.add(p);
        let mass = cell.1.entry(key[rt]).or_insert_with(Prob::zero);
        *mass = mass.add(p);
    }
    Ok(cells
        .into_values()
        .map(|(w, masses)| {
            let conditional: Vec<Prob> = masses.values().map(|m| m.div(&w)).collect();
            (w, conditional)
        })
        .collect())
}

/// Sums out all axes not listed in `keep`.
pub fn marginalize(j: &JointTable, keep: &[&str]) -> Result<JointTable> {
    j.marginalize(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dist(ps: &[(&str, Prob)]) -> ProbDist {
        ProbDist::new(ps.iter().map(|(l, p)| (l.to_string(), p.clone())).collect()).unwrap()
    }

    #[test]
    fn half_quarter_quarter_is_three_halves_bits() {
        let d = dist(&[
            ("a", Prob::ratio(1, 2)),
            ("b", Prob::ratio(1, 4)),
            ("c", Prob::ratio(1, 4)),
        ]);
        assert_eq!(shannon_entropy(&d), 1.5);
        assert_eq!(
            d.entropy_exact().unwrap(),
            BigRational::new(3.into(), 2.into())
        );
    }

    #[test]
    fn deterministic_distribution_has_zero_entropy() {
        let d = dist(&[("only", Prob::one())]);
        assert_eq!(shannon_entropy(&d), 0.0);
    }

    #[test]
    fn uniform_over_four_is_two_bits() {
        let d = ProbDist::uniform(&["a", "b", "c", "d"]).unwrap();
        assert_eq!(shannon_entropy(&d), 2.0);
        assert_eq!(d.entropy_exact().unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        assert!(ProbDist::new(vec![
            ("a".into(), Prob::ratio(1, 2)),
            ("b".into(), Prob::ratio(1, 4)),
        ])
        .is_err());
        assert!(ProbDist::new(vec![
            ("a".into(), Prob::ratio(3, 2)),
            ("b".into(), Prob::ratio(-1, 2)),
        ])
        .is_err());
        assert!(ProbDist::new(vec![
            ("a".into(), Prob::ratio(1, 2)),
            ("a".into(), Prob::ratio(1, 2)),
        ])
        .is_err());
        assert!(ProbDist::from_f64(vec![("a".into(), 0.5), ("b".into(), 0.499)]).is_err());
    }

    fn simple_joint() -> JointTable {
        // Two axes A, B; B = A deterministically.
        JointTable::new(
            vec!["A".into(), "B".into()],
            vec![
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            vec![
                (vec![0, 0], Prob::ratio(1, 2)),
                (vec![1, 1], Prob::ratio(1, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn deterministic_function_has_zero_conditional_entropy() {
        let j = simple_joint();
        assert_eq!(conditional_entropy(&j, "B", &["A"]).unwrap(), 0.0);
        assert_eq!(
            conditional_entropy_exact(&j, "B", &["A"]).unwrap().unwrap(),
            BigRational::from_integer(0.into())
        );
    }

    #[test]
    fn marginalizing_everything_is_identity() {
        let j = simple_joint();
        let m = j.marginalize(&["A", "B"]).unwrap();
        assert_eq!(m, j);
    }

    #[test]
    fn uniform_two_by_two_marginal_is_fair() {
        let j = JointTable::new(
            vec!["A".into(), "B".into()],
            vec![
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            (0..2)
                .flat_map(|a| (0..2).map(move |b| (vec![a, b], Prob::ratio(1, 4))))
                .collect(),
        )
        .unwrap();
        let m = j.marginal_dist("A").unwrap();
        assert_eq!(m.prob("0").unwrap(), &Prob::ratio(1, 2));
        assert_eq!(m.prob("1").unwrap(), &Prob::ratio(1, 2));
    }

    #[test]
    fn unknown_axis_is_an_error() {
        let j = simple_joint();
        assert!(conditional_entropy(&j, "B", &["C"]).is_err());
        assert!(j.marginalize(&["C"]).is_err());
        assert!(j.marginalize(&[]).is_err());
    }

    #[test]
    fn conditional_dist_matches_hand_computation() {
        let j = JointTable::new(
            vec!["A".into(), "B".into()],
            vec![
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            vec![
                (vec![0, 0], Prob::ratio(1, 2)),
                (vec![0, 1], Prob::ratio(1, 4)),
                (vec![1, 1], Prob::ratio(1, 4)),
            ],
        )
        .unwrap();
        let c = j.conditional_dist("A", &[("B", "1")]).unwrap();
        assert_eq!(c.prob("0").unwrap(), &Prob::ratio(1, 2));
        assert_eq!(c.prob("1").unwrap(), &Prob::ratio(1, 2));
    }

    /// Random small joint tables for the property tests below.
    fn arb_joint() -> impl Strategy<Value = JointTable> {
        (2usize..4, 2usize..4)
            .prop_flat_map(|(na, nb)| {
                proptest::collection::vec(1u32..100, na * nb).prop_map(move |weights| {
                    let total: u32 = weights.iter().sum();
                    let cells: Vec<(Vec<u32>, Prob)> = weights
                        .iter()
                        .enumerate()
                        .map(|(i, &w)| {
                            let a = (i / nb) as u32;
                            let b = (i % nb) as u32;
                            (vec![a, b], Prob::ratio(w as i64, total as i64))
                        })
                        .collect();
                    JointTable::new(
                        vec!["A".into(), "B".into()],
                        vec![
                            (0..na).map(|i| format!("a{i}")).collect(),
                            (0..nb).map(|i| format!("b{i}")).collect(),
                        ],
                        cells,
                    )
                    .unwrap()
                })
            })
    }

    proptest! {
        #[test]
        fn chain_rule(j in arb_joint()) {
            let h_ab = j.entropy_bits();
            let h_a = j.marginalize(&["A"]).unwrap().entropy_bits();
            let h_b_given_a = conditional_entropy(&j, "B", &["A"]).unwrap();
            prop_assert!((h_ab - (h_a + h_b_given_a)).abs() < 1e-10);
        }

        #[test]
        fn conditioning_reduces_entropy(j in arb_joint()) {
            let h_a = j.marginalize(&["A"]).unwrap().entropy_bits();
            let h_a_given_b = conditional_entropy(&j, "A", &["B"]).unwrap();
            prop_assert!(h_a_given_b <= h_a + 1e-12);
        }

        #[test]
        fn conditional_entropy_agrees_with_difference_form(j in arb_joint()) {
            let direct = conditional_entropy(&j, "A", &["B"]).unwrap();
            let difference = j.entropy_bits() - j.marginalize(&["B"]).unwrap().entropy_bits();
            prop_assert!((direct - difference).abs() < 1e-10);
        }

        #[test]
        fn entropy_is_label_permutation_invariant(
            weights in proptest::collection::vec(1u32..50, 2..6),
        ) {
            let total: u32 = weights.iter().sum();
            let entries: Vec<(String, Prob)> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (format!("x{i}"), Prob::ratio(w as i64, total as i64)))
                .collect();
            let d = ProbDist::new(entries.clone()).unwrap();
            let mut reversed = entries;
            reversed.reverse();
            let r = ProbDist::new(reversed).unwrap();
            prop_assert!((d.entropy_bits() - r.entropy_bits()).abs() < 1e-12);
        }
    }

    #[test]
    fn total_variation_is_symmetric_and_bounded() {
        let d1 = dist(&[("a", Prob::ratio(1, 2)), ("b", Prob::ratio(1, 2))]);
        let d2 = dist(&[("b", Prob::ratio(1, 2)), ("c", Prob::ratio(1, 2))]);
        assert_abs_diff_eq!(d1.total_variation(&d2), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d2.total_variation(&d1), 0.5, epsilon = 1e-12);
        assert_eq!(d1.total_variation(&d1), 0.0);
    }
}
