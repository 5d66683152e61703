//! Exact algebraic numbers: polynomials, factorization, certified roots,
//! number fields, and the Pisot / root-of-unity / torsion tests built on them.

pub mod composed;
pub mod factor;
pub mod field;
pub mod modp;
pub mod number;
pub mod pisot;
pub mod poly;
pub mod roots;
pub mod torsion;
pub mod unity;

pub use poly::{parse_poly, IntPolynomial, QPoly};
pub use factor::{factor, irreducible_factors, is_irreducible, Factorization};
pub use roots::{isolate_roots, ComplexBox};
pub use number::AlgebraicNumber;
pub use field::{FieldElement, NumberField};
pub use pisot::{
    classify_pisot, power_trace, pseudo_pisot_tuple, quadratic_pisot_unit_check, quadratic_pisot_unit_report, weil_height,
    PisotClass, PisotWitness, PseudoPisotVerdict,
};
pub use unity::{cyclotomic, is_root_of_unity, ratio_root_of_unity, reduce_degenerate, Reduction, ResidueClass};
pub use torsion::{torsion_order, TorsionReport};
