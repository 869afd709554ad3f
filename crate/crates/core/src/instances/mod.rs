//! Instance families, random instances, instance files and the adaptive
//! adversary for uniform tests.

pub mod adversary;
pub mod family;
pub mod file;
pub mod random;

pub use adversary::{adversary_run, AdaptiveAdversary};
pub use family::{family_ratio_check, instance_ratio, Family, RatioCheck};
pub use file::{load_instance, read_instance, save_instance, write_instance};
pub use random::{random_instance, Distribution};
