//! Closed forms of `q_K` for bipartite pure states.

use super::spec::{Family, VSetSpec};
use crate::decompose::{antisymmetry_residual, coefficient_matrix, schmidt_raw};
use crate::error::{Error, Result};
use crate::tensor::PureState;

const ANTISYMMETRY_TOL: f64 = 1e-10;

/// `q_K(omega_xi)` for a two-party unit vector: `(sum_i lambda_i)^2` over the
/// Schmidt coefficients for the tensor family and half of that for the wedge
/// family.
pub fn q_pure_closed_form(state: &PureState, spec: &VSetSpec) -> Result<f64> {
    if state.parties() != 2 {
        return Err(Error::UnsupportedArity {
            expected: 2,
            found: state.parties(),
        });
    }
    if spec.arity() != 2 || spec.local_dim() != state.local_dim() {
        return Err(Error::InvalidArgument(alloc::format!(
            "family on {} parties of dimension {} does not match the state",
            spec.arity(),
            spec.local_dim()
        )));
    }
    if spec.rank_bound() != 1 {
        return Err(Error::InvalidArgument(
            "no closed form for rank-bounded families".into(),
        ));
    }
    let m = coefficient_matrix(state);
    let total: f64 = schmidt_raw(&m).coefficients.iter().sum();
    let tensor = total * total;
    match spec.family() {
        Family::Tensor => Ok(tensor),
        Family::Wedge => {
            let residual = antisymmetry_residual(&m);
            if residual > ANTISYMMETRY_TOL {
                return Err(Error::NotAntisymmetric { residual });
            }
            Ok(tensor / 2.0)
        }
        Family::Vee => Err(Error::InvalidArgument(
            "no closed form for the symmetric family".into(),
        )),
    }
}
