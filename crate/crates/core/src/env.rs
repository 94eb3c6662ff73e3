//! Typing environments and hyper-environments.

use std::collections::BTreeMap;
use std::fmt;

use crate::name::Name;
use crate::types::Type;

/// A finite map from names to types. Names are unique by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Env(BTreeMap<Name, Type>);

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn singleton(name: Name, ty: Type) -> Env {
        let mut env = Env::new();
        env.0.insert(name, ty);
        env
    }

    pub fn get(&self, name: &Name) -> Option<&Type> {
        self.0.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.0.contains_key(name)
    }

    /// Inserts a binding, returning the previous type if the name was present.
    pub fn insert(&mut self, name: Name, ty: Type) -> Option<Type> {
        self.0.insert(name, ty)
    }

    pub fn remove(&mut self, name: &Name) -> Option<Type> {
        self.0.remove(name)
    }

    pub fn without(&self, name: &Name) -> Env {
        let mut env = self.clone();
        env.remove(name);
        env
    }

    pub fn with(&self, name: Name, ty: Type) -> Env {
        let mut env = self.clone();
        env.insert(name, ty);
        env
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.0.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    pub fn is_disjoint(&self, other: &Env) -> bool {
        self.0.keys().all(|k| !other.contains(k))
    }

    /// Union of two name-disjoint environments; `None` on overlap.
    pub fn union(&self, other: &Env) -> Option<Env> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut env = self.clone();
        env.0
            .extend(other.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        Some(env)
    }

    /// Applies a renaming to the names of the environment.
    pub fn rename(&self, from: &Name, to: &Name) -> Env {
        self.0
            .iter()
            .map(|(k, v)| (if k == from { to.clone() } else { k.clone() }, v.clone()))
            .collect()
    }
}

impl FromIterator<(Name, Type)> for Env {
    fn from_iter<I: IntoIterator<Item = (Name, Type)>>(iter: I) -> Env {
        Env(iter.into_iter().collect())
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("·");
        }
        for (i, (name, ty)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}:{ty}")?;
        }
        Ok(())
    }
}

/// A multiset of environments, stored sorted so equality is multiset equality.
///
/// The same name may occur in two member environments: those are the two
/// endpoints of a channel that has not been restricted yet.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperEnv(Vec<Env>);

impl HyperEnv {
    pub fn empty() -> HyperEnv {
        HyperEnv::default()
    }

    pub fn single(env: Env) -> HyperEnv {
        HyperEnv(vec![env])
    }

    pub fn from_envs(mut envs: Vec<Env>) -> HyperEnv {
        envs.sort();
        HyperEnv(envs)
    }

    pub fn envs(&self) -> &[Env] {
        &self.0
    }

    pub fn into_envs(self) -> Vec<Env> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn combine(&self, other: &HyperEnv) -> HyperEnv {
        HyperEnv::from_envs(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    /// Index of the first member containing `name`.
    pub fn position(&self, name: &Name) -> Option<usize> {
        self.0.iter().position(|e| e.contains(name))
    }

    /// Indices of all members containing `name`.
    pub fn positions(&self, name: &Name) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&i| self.0[i].contains(name))
            .collect()
    }

    /// Member `i` removed, plus the remaining members.
    pub fn take(&self, i: usize) -> (Env, Vec<Env>) {
        let mut rest = self.0.clone();
        let e = rest.remove(i);
        (e, rest)
    }

    /// All bindings as a flat map; `None` when a name occurs in two members.
    pub fn flatten(&self) -> Option<Env> {
        let mut out = Env::new();
        for env in &self.0 {
            out = out.union(env)?;
        }
        Some(out)
    }

    /// True when every name occurs in at most one member.
    pub fn is_flat(&self) -> bool {
        self.flatten().is_some()
    }
}

impl fmt::Display for HyperEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        for (i, env) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{env}")?;
        }
        Ok(())
    }
}
