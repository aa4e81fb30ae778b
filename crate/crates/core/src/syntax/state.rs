use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::Value;

/// A store mapping variable names to integers. Unbound variables read as 0.
///
/// Equality is extensional: a binding to 0 and an absent binding are
/// indistinguishable by `lookup`, so they compare equal. Rendering shows the
/// bindings as stored.
#[derive(Clone, Default)]
pub struct State {
    vars: BTreeMap<String, Value>,
}

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, x: &str) -> Value {
        self.vars.get(x).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `σ[x ↦ v]`.
    pub fn update(&self, x: &str, v: Value) -> State {
        let mut vars = self.vars.clone();
        vars.insert(x.to_owned(), v);
        State { vars }
    }

    pub fn set(&mut self, x: &str, v: Value) {
        self.vars.insert(x.to_owned(), v);
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Keeps only the given variables (used to fingerprint configurations).
    pub fn restrict(&self, keep: &BTreeSet<String>) -> State {
        State {
            vars: self
                .vars
                .iter()
                .filter(|(k, _)| keep.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn nonzero(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.vars.iter().filter(|(_, v)| !v.is_zero())
    }
}

impl<K: Into<String>, V: Into<Value>> FromIterator<(K, V)> for State {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        State {
            vars: iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.nonzero().eq(other.nonzero())
    }
}

impl Eq for State {}

impl Hash for State {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (k, v) in self.nonzero() {
            k.hash(state);
            v.hash(state);
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad binding `{0}`: expected name=integer")]
pub struct BindingError(pub String);

/// Parses `x=3,y=4`, optionally wrapped in braces, as rendered by `Display`.
impl FromStr for State {
    type Err = BindingError;

    fn from_str(text: &str) -> Result<State, BindingError> {
        let t = text.trim();
        let t = t
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(t);
        let mut st = State::new();
        for part in t.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || BindingError(part.to_owned());
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let k = k.trim();
            let ident = k.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ident {
                return Err(bad());
            }
            st.set(k, v.trim().parse().map_err(|_| bad())?);
        }
        Ok(st)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_bindings() {
        let st: State = "x=3, y = -4".parse().unwrap();
        assert_eq!(st.lookup("x"), 3.into());
        assert_eq!(st.lookup("y"), (-4).into());
        let shown = st.to_string();
        assert_eq!(shown.parse::<State>().unwrap(), st);
        assert_eq!("{}".parse::<State>().unwrap(), State::new());
        assert!("x".parse::<State>().is_err());
        assert!("1=2".parse::<State>().is_err());
        assert!("x=a".parse::<State>().is_err());
    }

    #[test]
    fn update_then_lookup() {
        let s = State::new().update("x", 3.into());
        assert_eq!(s.lookup("x"), 3.into());
        assert_eq!(s.lookup("y"), 0.into());
        let t = s.update("y", 4.into());
        assert_eq!(t.lookup("x"), 3.into());
        assert_eq!(t.lookup("y"), 4.into());
        // the original is untouched
        assert_eq!(s.lookup("y"), 0.into());
    }

    #[test]
    fn zero_binding_equals_absent() {
        let a = State::new().update("x", 0.into());
        assert_eq!(a, State::new());
        assert_ne!(State::new().update("x", 1.into()), State::new());
    }

    #[test]
    fn renders_sorted() {
        let s: State = [("y", 2), ("x", 1)].into_iter().collect();
        assert_eq!(s.to_string(), "{x=1, y=2}");
        assert_eq!(State::new().to_string(), "{}");
    }
}
