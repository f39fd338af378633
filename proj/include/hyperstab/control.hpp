#pragma once

#include "hyperstab/stability.hpp"
#include "hyperstab/tensor.hpp"

namespace hyperstab {

/// Paired-delta identity tensor of even order l: the entry at (i1, ..., il) is
/// 1 iff i1 = i2, i3 = i4, ..., i_{l-1} = i_l, so that contracting against x
/// gives x * (x'x)^{(l-2)/2} — the identity map on the unit sphere. Identity
/// tensors of odd order do not exist; odd l raises InputError.
Tensor z_identity(int order, int dim);

/// Sign-matched copy of the identity tensor against a_l: zero off the identity
/// support, sgn(a_l entry) * identity entry on it (sgn(0) taken as +1). With
/// gain s this makes |a_l + s*itilde| = |a_l| + s*I_z entrywise, which is what
/// shifts the Perron eigenvalue by exactly s. Requires max|a_l| > |s| when
/// s < 0.
Tensor sign_matched_identity(const Tensor& a_l, double s);

/// Feedback of the form g(x) = gain * itilde * x^(order-1).
struct ControllerSpec {
    int order = 4;   // tensor order l, even and >= 4
    double gain = 0.0;
    Tensor itilde;   // sign-matched identity of that order
};

/// Builds the controller against the system's order-l tensor (a zero tensor
/// when that slot is empty, in which case a negative gain is rejected).
ControllerSpec make_controller(const PolySystem& sys, int order, double gain);

/// System with the order-l tensor replaced by A_l + gain * itilde. A zero
/// gain returns the system unchanged.
PolySystem closed_loop(const PolySystem& sys, const ControllerSpec& ctrl);

/// Theorem-2 style certificate with the order-l Perron eigenvalue replaced by
/// lambda(|A_l|) + s: the effect of a sign-matched feedback on the certified
/// region. Requires the shared eigenvector to be a Perron vector of |A_l|
/// (automatic when the slot is stored or empty) and lambda + s >= 0. Exposed
/// for any order >= 2; the controller itself is constructible for even
/// orders only.
AttractionCertificate controlled_certificate(const PolySystem& sys, int order, double gain);
AttractionCertificate controlled_certificate(const PolySystem& sys, const ControllerSpec& ctrl);

} // namespace hyperstab
