use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{rational, Rational};
use crate::Error;

/// A label of some `Y_n`: an opaque name plus the rational datum a fixture
/// may need (a position on the line, or a circle parameter).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub name: String,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational",
        alias = "x",
        alias = "t"
    )]
    pub value: Option<Rational>,
}

impl Label {
    pub fn named(name: impl Into<String>) -> Self {
        Label {
            name: name.into(),
            value: None,
        }
    }

    pub fn with_value(name: impl Into<String>, value: Rational) -> Self {
        Label {
            name: name.into(),
            value: Some(value),
        }
    }
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{rational, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&rational::format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| rational::parse(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// A finite family `Y_0, Y_1, …` of finite, nonempty, pairwise disjoint
/// label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyY {
    sets: Vec<Vec<Label>>,
}

/// One entry of the JSON family list. Labels may be bare strings.
#[derive(Deserialize, Serialize)]
struct SetSpec {
    n: usize,
    labels: Vec<LabelSpec>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum LabelSpec {
    Name(String),
    Full(Label),
}

impl FamilyY {
    pub fn new(sets: Vec<Vec<Label>>) -> Result<Self, Error> {
        if sets.is_empty() {
            return Err(Error::Validation("family has no sets".into()));
        }
        let mut names = BTreeSet::new();
        for (n, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Validation(format!("Y_{n} is empty")));
            }
            for l in set {
                if !names.insert(l.name.clone()) {
                    return Err(Error::Validation(format!(
                        "label {:?} appears twice; sets must be pairwise disjoint",
                        l.name
                    )));
                }
            }
        }
        Ok(FamilyY { sets })
    }

    /// `sizes[n]` labels named `y{n}_{k}`, without data.
    pub fn synthetic(sizes: &[usize]) -> Result<Self, Error> {
        FamilyY::new(
            sizes
                .iter()
                .enumerate()
                .map(|(n, &m)| (0..m).map(|k| Label::named(format!("y{n}_{k}"))).collect())
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let specs: Vec<SetSpec> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("bad family: {e}")))?;
        let mut sets = Vec::with_capacity(specs.len());
        for (pos, spec) in specs.into_iter().enumerate() {
            if spec.n != pos {
                return Err(Error::Schema(format!(
                    "family entries must be listed as n = 0, 1, …; found n = {} at position {pos}",
                    spec.n
                )));
            }
            sets.push(
                spec.labels
                    .into_iter()
                    .map(|l| match l {
                        LabelSpec::Name(name) => Label::named(name),
                        LabelSpec::Full(l) => l,
                    })
                    .collect(),
            );
        }
        FamilyY::new(sets)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let specs: Vec<SetSpec> = self
            .sets
            .iter()
            .enumerate()
            .map(|(n, set)| SetSpec {
                n,
                labels: set.iter().cloned().map(LabelSpec::Full).collect(),
            })
            .collect();
        serde_json::to_value(specs).expect("family serializes")
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, n: usize) -> &[Label] {
        &self.sets[n]
    }

    pub fn sets(&self) -> &[Vec<Label>] {
        &self.sets
    }

    /// Gives every label without a value one from `default(n, k)`.
    pub(crate) fn fill_values(&mut self, default: impl Fn(usize, usize) -> Rational) {
        for (n, set) in self.sets.iter_mut().enumerate() {
            for (k, l) in set.iter_mut().enumerate() {
                if l.value.is_none() {
                    l.value = Some(default(n, k));
                }
            }
        }
    }

    pub(crate) fn value(label: &Label) -> &Rational {
        label.value.as_ref().expect("label values are filled at construction")
    }

    /// Rejects repeated values within one set.
    pub(crate) fn require_distinct_values(&self, what: &str) -> Result<(), Error> {
        for (n, set) in self.sets.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for l in set {
                if !seen.insert(FamilyY::value(l)) {
                    return Err(Error::Validation(format!(
                        "two labels of Y_{n} share the {what} {}",
                        rational::format(FamilyY::value(l))
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_bare_and_full_labels() {
        let f = FamilyY::from_json(&json!([
            {"n": 0, "labels": ["a", {"name": "b", "x": "1/3"}]},
            {"n": 1, "labels": [{"name": "c", "t": "2"}]}
        ]))
        .unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.set(0)[1].value, Some(rational::ratio(1, 3)));
        assert_eq!(f.set(1)[0].value, Some(rational::int(2)));
        assert_eq!(FamilyY::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects_overlap_and_empty_sets() {
        let overlap = json!([{"n": 0, "labels": ["a"]}, {"n": 1, "labels": ["a"]}]);
        assert!(matches!(FamilyY::from_json(&overlap), Err(Error::Validation(_))));
        let empty = json!([{"n": 0, "labels": []}]);
        assert!(matches!(FamilyY::from_json(&empty), Err(Error::Validation(_))));
        let misnumbered = json!([{"n": 1, "labels": ["a"]}]);
        assert!(matches!(FamilyY::from_json(&misnumbered), Err(Error::Schema(_))));
    }
}
