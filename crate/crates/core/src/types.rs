//! Session types: the multiplicative-additive fragment of classical linear logic.

use std::fmt;

/// A session type. Every type has a dual, and duality is an involution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    /// `A * B`: send a fresh channel, continue with two independent processes.
    Tensor(Box<Type>, Box<Type>),
    /// `A par B`: receive a channel, continue with one process using both.
    Par(Box<Type>, Box<Type>),
    /// `A + B`: internal choice.
    Plus(Box<Type>, Box<Type>),
    /// `A & B`: external choice.
    With(Box<Type>, Box<Type>),
    One,
    Bot,
    Zero,
    Top,
}

impl Type {
    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Type, b: Type) -> Type {
        Type::Par(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Type, b: Type) -> Type {
        Type::Plus(Box::new(a), Box::new(b))
    }

    pub fn with(a: Type, b: Type) -> Type {
        Type::With(Box::new(a), Box::new(b))
    }

    /// The type of the opposite endpoint.
    pub fn dual(&self) -> Type {
        match self {
            Type::Tensor(a, b) => Type::par(a.dual(), b.dual()),
            Type::Par(a, b) => Type::tensor(a.dual(), b.dual()),
            Type::Plus(a, b) => Type::with(a.dual(), b.dual()),
            Type::With(a, b) => Type::plus(a.dual(), b.dual()),
            Type::One => Type::Bot,
            Type::Bot => Type::One,
            Type::Zero => Type::Top,
            Type::Top => Type::Zero,
        }
    }

    /// Number of connectives and units; the weight of a cut in the termination measure.
    pub fn size(&self) -> usize {
        match self {
            Type::Tensor(a, b) | Type::Par(a, b) | Type::Plus(a, b) | Type::With(a, b) => {
                a.size() + b.size() + 1
            }
            Type::One | Type::Bot | Type::Zero | Type::Top => 1,
        }
    }

    /// True when `other` is this type or its dual.
    pub fn same_up_to_duality(&self, other: &Type) -> bool {
        self == other || *self == other.dual()
    }

    fn level(&self) -> u8 {
        match self {
            Type::Plus(..) | Type::With(..) => 1,
            Type::Tensor(..) | Type::Par(..) => 2,
            _ => 3,
        }
    }

    fn operator(&self) -> Option<&'static str> {
        match self {
            Type::Tensor(..) => Some("*"),
            Type::Par(..) => Some("par"),
            Type::Plus(..) => Some("+"),
            Type::With(..) => Some("&"),
            _ => None,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::One => f.write_str("1"),
            Type::Bot => f.write_str("bot"),
            Type::Zero => f.write_str("0"),
            Type::Top => f.write_str("top"),
            Type::Tensor(a, b) | Type::Par(a, b) | Type::Plus(a, b) | Type::With(a, b) => {
                let op = self.operator().unwrap_or_default();
                // Binary operators are right-associative and never mix at one level.
                let left_parens = a.level() <= self.level();
                let right_parens = b.level() < self.level()
                    || (b.level() == self.level() && b.operator() != Some(op));
                write_operand(f, a, left_parens)?;
                write!(f, " {op} ")?;
                write_operand(f, b, right_parens)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, ty: &Type, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({ty})")
    } else {
        write!(f, "{ty}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duality_table() {
        assert_eq!(
            Type::tensor(Type::One, Type::Top).dual(),
            Type::par(Type::Bot, Type::Zero)
        );
        assert_eq!(Type::One.dual(), Type::Bot);
        assert_eq!(Type::Zero.dual(), Type::Top);
        let t = Type::plus(Type::One, Type::Bot);
        assert_eq!(t.dual().dual(), t);
        assert_eq!(t.dual(), Type::with(Type::Bot, Type::One));
    }

    #[test]
    fn size_counts_nodes() {
        let t = Type::tensor(Type::One, Type::par(Type::Bot, Type::One));
        assert_eq!(t.size(), 5);
        assert_eq!(t.dual().size(), 5);
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        assert_eq!(Type::tensor(Type::One, Type::Bot).to_string(), "1 * bot");
        let right = Type::tensor(Type::One, Type::tensor(Type::Bot, Type::One));
        assert_eq!(right.to_string(), "1 * bot * 1");
        let left = Type::tensor(Type::tensor(Type::One, Type::Bot), Type::One);
        assert_eq!(left.to_string(), "(1 * bot) * 1");
        let mixed = Type::tensor(Type::One, Type::par(Type::Bot, Type::One));
        assert_eq!(mixed.to_string(), "1 * (bot par 1)");
        let additive = Type::plus(Type::tensor(Type::One, Type::One), Type::Top);
        assert_eq!(additive.to_string(), "1 * 1 + top");
        let nested = Type::tensor(Type::plus(Type::One, Type::One), Type::Bot);
        assert_eq!(nested.to_string(), "(1 + 1) * bot");
    }
}
