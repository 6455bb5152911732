//! Exact computations with finite groupoids: functors and 2-cells, actions
//! and principal bundles, bibundles and Morita equivalence, extensions and
//! their gerbe conditions, descent along finite coverings, and equivariant
//! splittings of rational representations.

pub mod actions;
pub mod bibundle;
pub mod category;
pub mod corpus;
pub mod descent;
pub mod extension;
pub mod functor;
pub mod group;
pub mod groupoid;
pub mod interchange;
pub mod iso;
pub mod linrep;
pub mod morita;
pub mod search;
pub mod union_find;

pub use category::{validate_category, FiniteCategory, RawCategory, ValidationReport, Violation};
pub use functor::{compose_functors, hcomp, is_equivalence, vcomp, GroupoidFunctor, NatTransform};
pub use group::FiniteGroup;
pub use groupoid::{validate_groupoid, FiniteGroupoid};
