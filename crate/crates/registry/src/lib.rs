//! Name-keyed registry of strategy factories.
//!
//! Algorithm variants (discretizers, covariance sources, track sources, ...)
//! implement a common trait and are registered under a stable string name.
//! Configuration files and command-line flags then select a variant at
//! runtime by name, and unknown names produce an error that lists the
//! available choices.
//!
//! The registry is generic over the trait object type `T` and over the
//! argument `A` handed to each factory, so strategies that need parameters
//! (for example a track source configured from JSON) can share the same
//! machinery as parameterless ones (`A = ()`).

use std::collections::BTreeMap;
use std::fmt;

/// Error raised when a strategy cannot be resolved or constructed.
#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    /// No factory is registered under the requested name.
    #[error("unknown {kind} '{name}' (available: {available})")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
    /// A factory with the same name was registered twice.
    #[error("duplicate {kind} registration '{name}'")]
    Duplicate { kind: &'static str, name: String },
    /// The factory rejected its arguments.
    #[error("invalid {kind} '{name}': {reason}")]
    Invalid {
        kind: &'static str,
        name: String,
        reason: String,
    },
}

/// Factory signature: builds a boxed strategy from an argument.
pub type Factory<T, A> = fn(&A) -> Result<Box<T>, String>;

/// A set of named factories producing `Box<T>` values.
pub struct Registry<T: ?Sized, A = ()> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Factory<T, A>>,
}

impl<T: ?Sized, A> Registry<T, A> {
    /// Creates an empty registry; `kind` names the strategy family in
    /// error messages (e.g. `"discretizer"`).
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `factory` under `name`.
    pub fn register(
        &mut self,
        name: &'static str,
        factory: Factory<T, A>,
    ) -> Result<&mut Self, RegistryError> {
        if self.entries.contains_key(name) {
            return Err(RegistryError::Duplicate {
                kind: self.kind,
                name: name.to_string(),
            });
        }
        self.entries.insert(name, factory);
        Ok(self)
    }

    /// Builder-style registration that panics on duplicates; intended for
    /// static default registries assembled at startup.
    pub fn with(mut self, name: &'static str, factory: Factory<T, A>) -> Self {
        if let Err(e) = self.register(name, factory) {
            panic!("{e}");
        }
        self
    }

    /// Instantiates the strategy registered under `name`.
    pub fn create(&self, name: &str, arg: &A) -> Result<Box<T>, RegistryError> {
        let factory = self.entries.get(name).ok_or_else(|| RegistryError::Unknown {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        factory(arg).map_err(|reason| RegistryError::Invalid {
            kind: self.kind,
            name: name.to_string(),
            reason,
        })
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    /// Whether `name` is registered.
    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Strategy family name.
    pub fn kind(&self) -> &'static str {
        self.kind
    }
}

impl<T: ?Sized> Registry<T, ()> {
    /// Convenience for parameterless factories.
    pub fn get(&self, name: &str) -> Result<Box<T>, RegistryError> {
        self.create(name, &())
    }
}

impl<T: ?Sized, A> fmt::Debug for Registry<T, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.names())
            .finish()
    }
}
