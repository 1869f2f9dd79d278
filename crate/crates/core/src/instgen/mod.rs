//! Instance sources: random generators, adversarial families, the X3C
//! reduction, and the instance file format.

mod families;
mod format;
pub(crate) mod random;
mod x3c;

pub use families::{gen_family, gen_matching, Family, FamilyInstance, Matching, PredictedValues};
pub use format::{instance_to_string, parse_instance, read_instance, write_instance, HEADER};
pub use random::{gen_bipartite, gen_general, gen_layered, GeneralParams, LayeredParams};
pub use x3c::{gen_x3c, x3c_bound, X3CInstance};
