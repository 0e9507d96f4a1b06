use super::{i3, parse_values, SetLabel, SpectrumSet, Witness};
use crate::design::format::tokens;
use crate::error::{Error, Result};

/// `count` independent choices from `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub count: usize,
    pub base: SpectrumSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSpec {
    pub terms: Vec<Term>,
    pub offset: i64,
    pub label: SetLabel,
}

impl ClosureSpec {
    pub fn new(label: SetLabel) -> Self {
        ClosureSpec { terms: Vec::new(), offset: 0, label }
    }

    pub fn term(mut self, count: usize, base: &SpectrumSet) -> Self {
        self.terms.push(Term { count, base: base.clone() });
        self
    }

    pub fn term_values(self, count: usize, values: &[i64]) -> Self {
        let base = SpectrumSet::from_values(SetLabel::Other("base".into()), values.iter().copied(), Witness::Formula);
        self.term(count, &base)
    }

    pub fn offset(mut self, offset: i64) -> Self {
        self.offset = offset;
        self
    }

    fn validate(&self) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.count > 0 && t.base.is_empty() {
                return Err(Error::Precondition(format!("term #{i} has an empty base set")));
            }
        }
        Ok(())
    }
}

/// All sums `Σ x_slot + offset` with one element per slot, each value
/// witnessed by its lexicographically smallest slot sequence (slots in
/// term order).
pub fn sum_closure(spec: &ClosureSpec) -> Result<SpectrumSet> {
    spec.validate()?;
    // each slot's values shifted to start at 0
    let slots: Vec<Vec<i64>> =
        spec.terms.iter().flat_map(|t| std::iter::repeat_n(t.base.to_vec(), t.count)).collect();
    let base_shift: i64 = slots.iter().map(|s| s[0]).sum();
    let shifted: Vec<Vec<usize>> = slots.iter().map(|s| s.iter().map(|&x| (x - s[0]) as usize).collect()).collect();
    let span: usize = shifted.iter().map(|s| *s.last().unwrap()).sum();

    // suffix[i][x]: slots i.. can sum to x
    let n = shifted.len();
    let mut suffix = vec![vec![false; span + 1]; n + 1];
    suffix[n][0] = true;
    for i in (0..n).rev() {
        let (head, tail) = suffix.split_at_mut(i + 1);
        let (cur, next) = (&mut head[i], &tail[0]);
        for (x, _) in next.iter().enumerate().filter(|(_, r)| **r) {
            for &d in &shifted[i] {
                cur[x + d] = true;
            }
        }
    }

    let mut out = SpectrumSet::new(spec.label.clone());
    for target in (0..=span).filter(|&x| suffix[0][x]) {
        let mut parts = Vec::with_capacity(n);
        let mut rest = target;
        for i in 0..n {
            let d = *shifted[i].iter().find(|&&d| d <= rest && suffix[i + 1][rest - d]).expect("reachable");
            parts.push(slots[i][0] + d as i64);
            rest -= d;
        }
        let value = target as i64 + base_shift + spec.offset;
        out.insert(value, Witness::Closure { parts, offset: spec.offset });
    }
    Ok(out)
}

/// A parsed closure file: the spec plus an optional target set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureFile {
    pub spec: ClosureSpec,
    pub target: Option<SpectrumSet>,
}

/// Parses a closure file:
///
/// ```text
/// label J3[49]
/// term 9 0,1,2,4,16
/// term 4 J3[13]
/// offset 0
/// target I3[49]
/// ```
///
/// Base sets are value lists (`0..5,13`), `I3[v]`, or names known to
/// `resolve`.
pub fn parse_closure_spec(text: &str, resolve: &dyn Fn(&str) -> Option<SpectrumSet>) -> Result<ClosureFile> {
    let mut spec = ClosureSpec::new(SetLabel::Other("closure".into()));
    let mut target = None;
    let set = |line: usize, toks: &[&str]| -> Result<SpectrumSet> {
        let joined = toks.join(",");
        if let Some(s) = resolve(&joined) {
            return Ok(s);
        }
        if let Ok(SetLabel::I3(v)) = joined.parse::<SetLabel>() {
            return i3(v).map_err(|e| Error::parse(line, e.to_string()));
        }
        let values = parse_values(&joined).map_err(|_| Error::parse(line, format!("unknown set `{joined}`")))?;
        Ok(SpectrumSet::from_values(SetLabel::Other(joined.clone()), values, Witness::Formula))
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        let Some((&head, rest)) = t.split_first() else { continue };
        match head {
            "label" => {
                spec.label = rest.first().ok_or_else(|| Error::parse(line, "missing label"))?.parse()?;
            }
            "term" => {
                let (count, base) = rest.split_first().ok_or_else(|| Error::parse(line, "expected `term <count> <set>`"))?;
                let count = count.parse().map_err(|_| Error::parse(line, "term count is not a nonnegative integer"))?;
                if base.is_empty() {
                    return Err(Error::parse(line, "term has no base set"));
                }
                spec.terms.push(Term { count, base: set(line, base)? });
            }
            "offset" => {
                spec.offset = rest
                    .first()
                    .and_then(|o| o.parse().ok())
                    .ok_or_else(|| Error::parse(line, "expected `offset <int>`"))?;
            }
            "target" => target = Some(set(line, rest)?),
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    spec.validate()?;
    Ok(ClosureFile { spec, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::compare;
    use proptest::prelude::*;

    fn brute(spec: &ClosureSpec) -> Vec<i64> {
        let mut sums = std::collections::BTreeSet::from([spec.offset]);
        for t in &spec.terms {
            for _ in 0..t.count {
                sums = sums.iter().flat_map(|s| t.base.values().map(move |x| s + x)).collect();
            }
        }
        sums.into_iter().collect()
    }

    #[test]
    fn trivial_closure() {
        let s = sum_closure(&ClosureSpec::new(SetLabel::Other("t".into())).term_values(1, &[0, 1])).unwrap();
        assert_eq!(s.to_vec(), [0, 1]);
        let empty = sum_closure(&ClosureSpec::new(SetLabel::Other("t".into()))).unwrap();
        assert_eq!(empty.to_vec(), [0]);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        let spec = ClosureSpec::new(SetLabel::Other("t".into())).term_values(2, &[0, 3, 5]).term_values(1, &[1, 2]);
        let s = sum_closure(&spec).unwrap();
        assert_eq!(s.witness(6), Some(&Witness::Closure { parts: vec![0, 5, 1], offset: 0 }));
        assert_eq!(s.witness(5), Some(&Witness::Closure { parts: vec![0, 3, 2], offset: 0 }));
    }

    #[test]
    fn i3_49_is_covered() {
        let spec =
            ClosureSpec::new(SetLabel::J3(49)).term_values(9, &[0, 1, 2, 4, 16]).term_values(4, &[0, 1, 2, 3, 4, 5, 13]);
        let s = sum_closure(&spec).unwrap();
        assert!(compare(&s, &i3(49).unwrap()).missing.is_empty());
    }

    #[test]
    fn spec_file() {
        let resolve = |name: &str| {
            (name == "J3[13]").then(|| SpectrumSet::from_values(SetLabel::J3(13), [0, 1, 2, 3, 4, 5, 13], Witness::Formula))
        };
        let f = parse_closure_spec("label J3[49]\nterm 9 0,1,2,4,16\nterm 4 J3[13]\ntarget I3[49]\n", &resolve).unwrap();
        assert_eq!(f.spec.terms.len(), 2);
        assert_eq!(f.spec.label, SetLabel::J3(49));
        assert_eq!(f.target.unwrap().len(), i3(49).unwrap().len());
        assert!(parse_closure_spec("term x 1\n", &resolve).is_err());
        assert!(parse_closure_spec("term 1 Q3[5]\n", &resolve).is_err());
        let f = parse_closure_spec("term 2 0..2\noffset -3\n", &resolve).unwrap();
        assert_eq!(sum_closure(&f.spec).unwrap().to_vec(), [-3, -2, -1, 0, 1]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            terms in prop::collection::vec((0usize..4, prop::collection::btree_set(-3i64..12, 1..5)), 0..4),
            offset in -5i64..5,
        ) {
            let mut spec = ClosureSpec::new(SetLabel::Other("p".into())).offset(offset);
            for (c, base) in &terms {
                spec = spec.term_values(*c, &base.iter().copied().collect::<Vec<_>>());
            }
            let s = sum_closure(&spec).unwrap();
            prop_assert_eq!(s.to_vec(), brute(&spec));
            for (v, w) in s.entries() {
                let Witness::Closure { parts, offset } = w else { panic!() };
                prop_assert_eq!(parts.iter().sum::<i64>() + offset, v);
            }
        }

        #[test]
        fn monotone(base in prop::collection::btree_set(0i64..10, 1..4), extra in 0i64..10, count in 1usize..4) {
            let b: Vec<i64> = base.iter().copied().collect();
            let mut bigger = b.clone();
            bigger.push(extra);
            bigger.sort();
            bigger.dedup();
            let small = sum_closure(&ClosureSpec::new(SetLabel::Other("m".into())).term_values(count, &b)).unwrap();
            let large = sum_closure(&ClosureSpec::new(SetLabel::Other("m".into())).term_values(count, &bigger)).unwrap();
            prop_assert!(small.values().all(|v| large.contains(v)));
        }
    }
}
