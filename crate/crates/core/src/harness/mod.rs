//! Verification reports, instance generators, campaigns and build bundles.

mod bundle;
mod campaign;
mod dot;
mod generate;
mod verify;

pub use bundle::{bundle_theorem1, bundle_theorem2, reverify_bundle, Bundle, BundleKind, Reverification, BUNDLE_VERSION};
pub use campaign::{exhaust_theorem1, random_theorem2, CampaignSummary};
pub use dot::{lattice_dot, poset_dot};
pub use generate::{enumerate_small_posets, random_instance, random_instances, random_isotone_map, random_poset, GeneratorConfig};
pub use verify::{
    check_theorem1, check_theorem2, describe, verify_theorem1, verify_theorem2, CheckLine, Outcome, VerificationReport,
};
