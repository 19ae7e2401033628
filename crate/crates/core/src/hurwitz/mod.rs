//! Hurwitz numbers from symmetric-group characters, with a brute-force oracle.

pub mod cache;
pub mod characters;
pub mod number;
pub mod oracle;
pub mod partition;

pub use cache::{CacheKey, HurwitzCache, CACHE_ENV};
pub use characters::{character_value, dimension, CharacterTable};
pub use number::{hurwitz_number, HurwitzEngine, HurwitzQuery};
pub use oracle::{hurwitz_bruteforce_oracle, hurwitz_bruteforce_with, oracle_grid, OracleCaps};
pub use partition::{list_partitions, partitions_bounded, BranchData, Partition};
