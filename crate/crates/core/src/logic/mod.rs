//! Coalgebraic modal logic: formulas, their semantics, distinguishing
//! formulas and recoding of cone modalities.

mod cursor;
mod distinguish;
mod eval;
mod formula;
mod recode;

pub(crate) use cursor::Cursor;
pub use distinguish::{distinguishing_formula, Distinguisher};
pub use eval::{check_formula, eval, eval_modality, satisfies};
pub use formula::{Formula, Modality, Named, Pre};
pub use recode::{box_dia, closure, is_strongly_separating, recode, recode_finite, recode_prob, Recode};
