use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::order::ElementId;

/// What an element of a constructed lattice stands for.
///
/// The display form doubles as the element's id inside constructed
/// lattices: `o`, `i`, `a(p)`, `b(p)`, `a0`, `a1`, `x(p,q)`, `s(p,q):k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Bottom,
    Top,
    A(ElementId),
    B(ElementId),
    Guard0,
    Guard1,
    X(ElementId, ElementId),
    Aux(ElementId, ElementId, usize),
}

/// Characters that would make a role string ambiguous.
pub const RESERVED_CHARS: &[char] = &['(', ')', ',', ':'];

impl Role {
    pub fn id(&self) -> ElementId {
        ElementId::new(self.to_string()).expect("role strings are nonempty")
    }

    /// Applies `f` to every poset element mentioned by the role.
    pub fn rename(&self, f: impl Fn(&ElementId) -> ElementId) -> Role {
        match self {
            Role::A(p) => Role::A(f(p)),
            Role::B(p) => Role::B(f(p)),
            Role::X(p, q) => Role::X(f(p), f(q)),
            Role::Aux(p, q, k) => Role::Aux(f(p), f(q), *k),
            other => other.clone(),
        }
    }

    /// The gadget instance `(p, q)` this role belongs to, if any.
    pub fn gadget(&self) -> Option<(&ElementId, &ElementId)> {
        match self {
            Role::X(p, q) | Role::Aux(p, q, _) => Some((p, q)),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Bottom => f.write_str("o"),
            Role::Top => f.write_str("i"),
            Role::A(p) => write!(f, "a({p})"),
            Role::B(p) => write!(f, "b({p})"),
            Role::Guard0 => f.write_str("a0"),
            Role::Guard1 => f.write_str("a1"),
            Role::X(p, q) => write!(f, "x({p},{q})"),
            Role::Aux(p, q, k) => write!(f, "s({p},{q}):{k}"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unrecognized role `{s}`");
        let id = |t: &str| ElementId::new(t).map_err(|_| bad());
        let pair = |t: &str| -> Result<(ElementId, ElementId), String> {
            let (p, q) = t.split_once(',').ok_or_else(bad)?;
            Ok((id(p)?, id(q)?))
        };
        match s {
            "o" => return Ok(Role::Bottom),
            "i" => return Ok(Role::Top),
            "a0" => return Ok(Role::Guard0),
            "a1" => return Ok(Role::Guard1),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("a(").and_then(|t| t.strip_suffix(')')) {
            return Ok(Role::A(id(inner)?));
        }
        if let Some(inner) = s.strip_prefix("b(").and_then(|t| t.strip_suffix(')')) {
            return Ok(Role::B(id(inner)?));
        }
        if let Some(inner) = s.strip_prefix("x(").and_then(|t| t.strip_suffix(')')) {
            let (p, q) = pair(inner)?;
            return Ok(Role::X(p, q));
        }
        if let Some(rest) = s.strip_prefix("s(") {
            let (inner, k) = rest.rsplit_once("):").ok_or_else(bad)?;
            let (p, q) = pair(inner)?;
            return Ok(Role::Aux(p, q, k.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

/// Partial map element ↦ role, kept in both directions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameLabeling {
    by_element: BTreeMap<ElementId, Role>,
    by_role: BTreeMap<Role, ElementId>,
}

impl FrameLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Labels `element` with `role`; refuses to relabel or reuse a role.
    pub fn insert(&mut self, element: ElementId, role: Role) -> Result<(), String> {
        if let Some(old) = self.by_element.get(&element) {
            if *old == role {
                return Ok(());
            }
            return Err(format!("`{element}` already labeled `{old}`"));
        }
        if let Some(other) = self.by_role.get(&role) {
            return Err(format!("role `{role}` already on `{other}`"));
        }
        self.by_role.insert(role.clone(), element.clone());
        self.by_element.insert(element, role);
        Ok(())
    }

    /// Labels an element whose id is the role's display form.
    pub fn insert_canonical(&mut self, role: Role) -> ElementId {
        let id = role.id();
        self.insert(id.clone(), role).expect("canonical labels are unique");
        id
    }

    pub fn role(&self, element: &ElementId) -> Option<&Role> {
        self.by_element.get(element)
    }

    pub fn element(&self, role: &Role) -> Option<&ElementId> {
        self.by_role.get(role)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ElementId, &Role)> {
        self.by_element.iter()
    }

    pub fn len(&self) -> usize {
        self.by_element.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_element.is_empty()
    }

    /// Role string ↦ element id, the serialized form.
    pub fn to_string_map(&self) -> BTreeMap<String, ElementId> {
        self.by_role.iter().map(|(r, e)| (r.to_string(), e.clone())).collect()
    }

    pub fn from_string_map(map: &BTreeMap<String, ElementId>) -> Result<Self, String> {
        let mut out = FrameLabeling::new();
        for (r, e) in map {
            out.insert(e.clone(), r.parse()?)?;
        }
        Ok(out)
    }
}
