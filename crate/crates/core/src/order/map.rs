use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoundedPoset, ElementId, OrderError};

/// A total map between two bounded posets. Whether it is isotone, bounded,
/// or {0}-separating is established by [`validate_map`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotoneMap {
    domain: BoundedPoset,
    codomain: BoundedPoset,
    assignment: BTreeMap<ElementId, ElementId>,
}

impl IsotoneMap {
    pub fn new(
        domain: BoundedPoset,
        codomain: BoundedPoset,
        assignment: BTreeMap<ElementId, ElementId>,
    ) -> Result<Self, OrderError> {
        for x in domain.elements() {
            let y = assignment
                .get(x)
                .ok_or_else(|| OrderError::Map(format!("no image for `{x}`")))?;
            codomain.require(y)?;
        }
        if let Some(extra) = assignment.keys().find(|k| domain.index_of(k).is_none()) {
            return Err(OrderError::UnknownElement(extra.clone()));
        }
        Ok(IsotoneMap {
            domain,
            codomain,
            assignment,
        })
    }

    /// The identity on `p`.
    pub fn identity(p: &BoundedPoset) -> Self {
        let assignment = p.elements().iter().map(|x| (x.clone(), x.clone())).collect();
        IsotoneMap {
            domain: p.clone(),
            codomain: p.clone(),
            assignment,
        }
    }

    pub fn domain(&self) -> &BoundedPoset {
        &self.domain
    }

    pub fn codomain(&self) -> &BoundedPoset {
        &self.codomain
    }

    pub fn assignment(&self) -> &BTreeMap<ElementId, ElementId> {
        &self.assignment
    }

    pub fn image(&self, x: &ElementId) -> Option<&ElementId> {
        self.assignment.get(x)
    }

    /// Index-level image.
    pub fn image_index(&self, x: usize) -> usize {
        let y = &self.assignment[self.domain.id(x)];
        self.codomain.index_of(y).expect("validated at construction")
    }
}

/// `{"pairs":[["p","q"],...]}`; domain and codomain are supplied separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub pairs: Vec<(ElementId, ElementId)>,
}

impl MapJson {
    pub fn into_map(self, domain: BoundedPoset, codomain: BoundedPoset) -> Result<IsotoneMap, OrderError> {
        let mut assignment = BTreeMap::new();
        for (x, y) in self.pairs {
            if assignment.insert(x.clone(), y).is_some() {
                return Err(OrderError::Map(format!("`{x}` assigned twice")));
            }
        }
        IsotoneMap::new(domain, codomain, assignment)
    }
}

impl From<&IsotoneMap> for MapJson {
    fn from(m: &IsotoneMap) -> Self {
        MapJson {
            pairs: m.assignment.iter().map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapFlags {
    pub isotone: bool,
    pub bounded: bool,
    pub zero_separating: bool,
}

impl MapFlags {
    pub const ALL: MapFlags = MapFlags {
        isotone: true,
        bounded: true,
        zero_separating: true,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "witness")]
pub enum Check {
    Skipped,
    Pass,
    Fail(Vec<ElementId>),
}

impl Check {
    pub fn passed(&self) -> bool {
        !matches!(self, Check::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub isotone: Check,
    pub bounded: Check,
    pub zero_separating: Check,
}

impl MapReport {
    pub fn all_passed(&self) -> bool {
        self.isotone.passed() && self.bounded.passed() && self.zero_separating.passed()
    }
}

pub fn validate_map(map: &IsotoneMap, flags: MapFlags) -> MapReport {
    let (p, q) = (&map.domain, &map.codomain);
    let n = p.len();
    let isotone = if !flags.isotone {
        Check::Skipped
    } else {
        let bad = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| p.le(x, y) && !q.le(map.image_index(x), map.image_index(y)));
        match bad {
            Some((x, y)) => Check::Fail(vec![p.id(x).clone(), p.id(y).clone()]),
            None => Check::Pass,
        }
    };
    let bounded = if !flags.bounded {
        Check::Skipped
    } else if map.image_index(p.bottom()) != q.bottom() {
        Check::Fail(vec![p.bottom_id().clone()])
    } else if map.image_index(p.top()) != q.top() {
        Check::Fail(vec![p.top_id().clone()])
    } else {
        Check::Pass
    };
    let zero_separating = if !flags.zero_separating {
        Check::Skipped
    } else {
        match (0..n).find(|&x| x != p.bottom() && map.image_index(x) == q.bottom()) {
            Some(x) => Check::Fail(vec![p.id(x).clone()]),
            None => Check::Pass,
        }
    };
    MapReport {
        isotone,
        bounded,
        zero_separating,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset;

    fn chain3(mid: &str) -> BoundedPoset {
        poset(&["0", mid, "1"], &[("0", mid), (mid, "1")], "0", "1").unwrap()
    }

    fn map(p: BoundedPoset, q: BoundedPoset, pairs: &[(&str, &str)]) -> IsotoneMap {
        let a = pairs.iter().map(|&(x, y)| (x.into(), y.into())).collect();
        IsotoneMap::new(p, q, a).unwrap()
    }

    #[test]
    fn good_map_passes() {
        let m = map(chain3("p"), chain3("q"), &[("0", "0"), ("p", "q"), ("1", "1")]);
        assert!(validate_map(&m, MapFlags::ALL).all_passed());
    }

    #[test]
    fn zero_separation_failure() {
        let m = map(chain3("p"), chain3("q"), &[("0", "0"), ("p", "0"), ("1", "1")]);
        let r = validate_map(&m, MapFlags::ALL);
        assert_eq!(r.zero_separating, Check::Fail(vec!["p".into()]));
        assert!(r.isotone.passed() && r.bounded.passed());
    }

    #[test]
    fn reversal_fails_isotone() {
        let four = poset(&["0", "p", "q", "1"], &[("0", "p"), ("p", "q"), ("q", "1")], "0", "1").unwrap();
        let m = map(four.clone(), four, &[("0", "0"), ("p", "q"), ("q", "p"), ("1", "1")]);
        let r = validate_map(&m, MapFlags::ALL);
        assert_eq!(r.isotone, Check::Fail(vec!["p".into(), "q".into()]));
    }

    #[test]
    fn unbounded_map() {
        let m = map(chain3("p"), chain3("q"), &[("0", "0"), ("p", "q"), ("1", "q")]);
        let r = validate_map(&m, MapFlags { isotone: false, bounded: true, zero_separating: false });
        assert_eq!(r.bounded, Check::Fail(vec!["1".into()]));
        assert_eq!(r.isotone, Check::Skipped);
    }

    #[test]
    fn partial_assignment_rejected() {
        let a = [("0".into(), "0".into())].into_iter().collect();
        assert!(IsotoneMap::new(chain3("p"), chain3("q"), a).is_err());
    }

    #[test]
    fn map_json() {
        let j: MapJson = serde_json::from_str(r#"{"pairs":[["0","0"],["p","q"],["1","1"]]}"#).unwrap();
        let m = j.into_map(chain3("p"), chain3("q")).unwrap();
        assert_eq!(m.image(&"p".into()), Some(&"q".into()));
    }
}
