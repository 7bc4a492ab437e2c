use thiserror::Error;

/// Size and depth limits applied to every exponential construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest tuple height that enumeration and parsing will build.
    pub max_height: u32,
    /// Largest number of tuples a single enumerated level may hold.
    pub max_level_size: usize,
}

impl Limits {
    pub const DEFAULT_MAX_HEIGHT: u32 = 12;
    pub const DEFAULT_MAX_LEVEL_SIZE: usize = 1_000_000;

    pub fn with_max_height(max_height: u32) -> Self {
        Limits {
            max_height,
            ..Limits::default()
        }
    }

    pub(crate) fn check_height(&self, what: &str, height: u32) -> Result<(), CapExceeded> {
        if height > self.max_height {
            Err(CapExceeded::Height {
                what: what.to_string(),
                height,
                limit: self.max_height,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_height: Self::DEFAULT_MAX_HEIGHT,
            max_level_size: Self::DEFAULT_MAX_LEVEL_SIZE,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CapExceeded {
    #[error("{what}: height {height} exceeds the configured maximum {limit}")]
    Height {
        what: String,
        height: u32,
        limit: u32,
    },
    #[error("{what}: {size} tuples exceed the configured level size maximum {limit}")]
    LevelSize {
        what: String,
        size: usize,
        limit: usize,
    },
}
