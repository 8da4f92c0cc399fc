use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Hierarchical content name: ordered list of non-empty components,
/// rendered as `/c1/c2/.../ck`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Name {
    components: Vec<String>,
}

/// How a name is split into trie tokens.
///
/// `Component` uses whole components; `Character` splits the canonical text
/// into single characters (the leading `/` is dropped, interior `/`
/// separators become ordinary tokens).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TokenMode {
    Component,
    Character,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum NameError {
    #[error("name must start with '/'")]
    MissingLeadingSlash,
    #[error("name has an empty component")]
    EmptyComponent,
    #[error("name must have at least one component")]
    Empty,
}

impl Name {
    pub fn from_components<I, S>(parts: I) -> Result<Name, NameError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let components: Vec<String> = parts.into_iter().map(Into::into).collect();
        if components.is_empty() {
            return Err(NameError::Empty);
        }
        if components.iter().any(|c| c.is_empty()) {
            return Err(NameError::EmptyComponent);
        }
        Ok(Name { components })
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Name with the final component removed; `None` for one-component names.
    pub fn parent(&self) -> Option<Name> {
        if self.components.len() <= 1 {
            return None;
        }
        Some(Name {
            components: self.components[..self.components.len() - 1].to_vec(),
        })
    }

    /// Drop a trailing sequence-number component, keeping at least one
    /// component (a bare `/p` stays `/p`).
    pub fn strip_seq(&self) -> Name {
        self.parent().unwrap_or_else(|| self.clone())
    }

    /// Final component parsed as a sequence number, if numeric.
    pub fn seq(&self) -> Option<u64> {
        self.components.last()?.parse().ok()
    }

    pub fn child(&self, component: &str) -> Name {
        let mut components = self.components.clone();
        components.push(component.to_string());
        Name { components }
    }

    pub fn is_prefix_of(&self, other: &Name) -> bool {
        self.components.len() <= other.components.len()
            && self.components == other.components[..self.components.len()]
    }

    pub fn tokens(&self, mode: TokenMode) -> Vec<String> {
        match mode {
            TokenMode::Component => self.components.clone(),
            TokenMode::Character => {
                let text = self.components.join("/");
                text.chars().map(|c| c.to_string()).collect()
            }
        }
    }
}

impl FromStr for Name {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Name, NameError> {
        let body = s.strip_prefix('/').ok_or(NameError::MissingLeadingSlash)?;
        if body.is_empty() {
            return Err(NameError::Empty);
        }
        Name::from_components(body.split('/'))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(n("/google/mail/0").components(), ["google", "mail", "0"]);
        assert_eq!(n("/a/b").to_string(), "/a/b");
        assert_eq!("a/b".parse::<Name>(), Err(NameError::MissingLeadingSlash));
        assert_eq!("/a//b".parse::<Name>(), Err(NameError::EmptyComponent));
        assert_eq!("/".parse::<Name>(), Err(NameError::Empty));
    }

    #[test]
    fn tokenization() {
        assert_eq!(
            n("/A/B").tokens(TokenMode::Component),
            vec!["A".to_string(), "B".to_string()]
        );
        assert_eq!(
            n("/A/B").tokens(TokenMode::Character),
            vec!["A".to_string(), "/".to_string(), "B".to_string()]
        );
        assert_eq!(n("/AB").tokens(TokenMode::Character).len(), 2);
    }

    #[test]
    fn seq_handling() {
        assert_eq!(n("/p1/s3/42").strip_seq(), n("/p1/s3"));
        assert_eq!(n("/p1").strip_seq(), n("/p1"));
        assert_eq!(n("/p1/s3/42").seq(), Some(42));
        assert_eq!(n("/p1/s3").seq(), None);
    }

    #[test]
    fn prefix_relation() {
        assert!(n("/a/b").is_prefix_of(&n("/a/b/c")));
        assert!(n("/a/b").is_prefix_of(&n("/a/b")));
        assert!(!n("/a/c").is_prefix_of(&n("/a/b/c")));
        assert!(!n("/a/b/c").is_prefix_of(&n("/a/b")));
    }
}
