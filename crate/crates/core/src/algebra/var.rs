use std::fmt;

/// A symbol of the shared polynomial engine.
///
/// The derived `Ord` is the canonical global variable order: a variant
/// declared earlier is more significant in the lexicographic term order.
/// Jet symbols come last, ordered by kind and then by derivative index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    X1,
    X2,
    Y1,
    B,
    C,
    D,
    E,
    A,
    K1,
    K2,
    K3,
    /// `alpha_r`: the r-th x₁-derivative of α.
    Alpha(u16),
    /// `phi_s`: the s-th x₁-derivative of φ.
    Phi(u16),
    /// `a_k`: the k-th time derivative of the NVE coefficient a(t).
    Nve(u16),
}

impl Var {
    pub const K: [Var; 3] = [Var::K1, Var::K2, Var::K3];

    pub fn name(&self) -> String {
        match self {
            Var::X => "x".into(),
            Var::X1 => "x1".into(),
            Var::X2 => "x2".into(),
            Var::Y1 => "y1".into(),
            Var::B => "b".into(),
            Var::C => "c".into(),
            Var::D => "d".into(),
            Var::E => "e".into(),
            Var::A => "a".into(),
            Var::K1 => "K1".into(),
            Var::K2 => "K2".into(),
            Var::K3 => "K3".into(),
            Var::Alpha(r) => format!("alpha_{r}"),
            Var::Phi(s) => format!("phi_{s}"),
            Var::Nve(k) => format!("a_{k}"),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        let fixed = match name {
            "x" => Some(Var::X),
            "x1" => Some(Var::X1),
            "x2" => Some(Var::X2),
            "y1" => Some(Var::Y1),
            "b" => Some(Var::B),
            "c" => Some(Var::C),
            "d" => Some(Var::D),
            "e" => Some(Var::E),
            "a" => Some(Var::A),
            "K1" => Some(Var::K1),
            "K2" => Some(Var::K2),
            "K3" => Some(Var::K3),
            _ => None,
        };
        if fixed.is_some() {
            return fixed;
        }
        let (prefix, index) = name.rsplit_once('_')?;
        if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let index: u16 = index.parse().ok()?;
        match prefix {
            "alpha" => Some(Var::Alpha(index)),
            "phi" => Some(Var::Phi(index)),
            "a" => Some(Var::Nve(index)),
            _ => None,
        }
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Var::Alpha(_) | Var::Phi(_) | Var::Nve(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let vars = [
            Var::X,
            Var::X1,
            Var::X2,
            Var::Y1,
            Var::B,
            Var::C,
            Var::D,
            Var::E,
            Var::A,
            Var::K1,
            Var::K2,
            Var::K3,
            Var::Alpha(0),
            Var::Alpha(12),
            Var::Phi(3),
            Var::Nve(5),
        ];
        for v in vars {
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::from_name("alpha_"), None);
        assert_eq!(Var::from_name("q"), None);
        assert_eq!(Var::from_name("phi_x"), None);
    }

    #[test]
    fn canonical_order() {
        assert!(Var::X < Var::X1);
        assert!(Var::Y1 < Var::B);
        assert!(Var::E < Var::A);
        assert!(Var::K3 < Var::Alpha(0));
        assert!(Var::Alpha(9) < Var::Phi(1));
        assert!(Var::Phi(1) < Var::Phi(2));
    }
}
