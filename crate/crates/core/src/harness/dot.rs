use std::fmt::Write;

use crate::lattice::{FiniteLattice, FrameLabeling};
use crate::order::BoundedPoset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn hasse(name: &str, p: &BoundedPoset, label: impl Fn(usize) -> Option<String>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    for x in 0..p.len() {
        let id = p.id(x).as_str();
        match label(x) {
            Some(l) if l != id => writeln!(out, "  {} [label={}];", quote(id), quote(&l)).unwrap(),
            _ => writeln!(out, "  {};", quote(id)).unwrap(),
        }
    }
    for (a, b) in p.covers() {
        writeln!(out, "  {} -> {};", quote(a.as_str()), quote(b.as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of a poset, bottom to top.
pub fn poset_dot(p: &BoundedPoset) -> String {
    hasse("P", p, |_| None)
}

/// Hasse diagram of a lattice; labeled elements show their role.
pub fn lattice_dot(l: &FiniteLattice, labels: &FrameLabeling) -> String {
    let order = l.order();
    hasse("L", order, |x| labels.role(order.id(x)).map(|r| r.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_from_order;
    use crate::order::poset;

    #[test]
    fn edges_are_covers() {
        let p = poset(&["0", "a", "b", "1"], &[("0", "a"), ("a", "b"), ("0", "1"), ("b", "1")], "0", "1").unwrap();
        let dot = poset_dot(&p);
        assert!(dot.contains("rankdir=BT"));
        assert_eq!(dot.matches(" -> ").count(), 3);
        assert!(!dot.contains("\"0\" -> \"1\""));
        let l = lattice_from_order(&p).unwrap();
        assert_eq!(lattice_dot(&l, &FrameLabeling::new()).matches(" -> ").count(), 3);
    }
}
