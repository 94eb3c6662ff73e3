use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Multiset of restriction-annotation sizes, kept sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Measure(Vec<usize>);

impl Measure {
    pub fn new(mut sizes: Vec<usize>) -> Measure {
        sizes.sort_unstable();
        Measure(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Step budget that a terminating reduction never exceeds.
    pub fn fuel_bound(&self) -> usize {
        1 + self.total()
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

/// Dershowitz–Manna multiset order: `a < b` iff they differ and every
/// element `a` has in excess is dominated by some element `b` has in excess.
pub fn dm_less(a: &Measure, b: &Measure) -> bool {
    let mut count: BTreeMap<usize, isize> = BTreeMap::new();
    for &n in &a.0 {
        *count.entry(n).or_default() += 1;
    }
    for &n in &b.0 {
        *count.entry(n).or_default() -= 1;
    }
    let extra_a: Vec<usize> = count
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&n, _)| n)
        .collect();
    let extra_b: Vec<usize> = count
        .iter()
        .filter(|(_, &c)| c < 0)
        .map(|(&n, _)| n)
        .collect();
    if extra_b.is_empty() {
        return false;
    }
    extra_a.iter().all(|x| extra_b.iter().any(|y| y > x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_order() {
        let m = |v: &[usize]| Measure::new(v.to_vec());
        assert!(dm_less(&m(&[1, 1, 1]), &m(&[2])));
        assert!(dm_less(&m(&[]), &m(&[1])));
        assert!(dm_less(&m(&[3, 1]), &m(&[3, 2])));
        assert!(!dm_less(&m(&[2]), &m(&[2])));
        assert!(!dm_less(&m(&[3]), &m(&[2, 2])));
        assert_eq!(m(&[3, 1]).to_string(), "{1, 3}");
    }
}
