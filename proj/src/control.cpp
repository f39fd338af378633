#include "hyperstab/control.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hyperstab/detail/odometer.hpp"
#include "hyperstab/errors.hpp"

namespace hyperstab {

using detail::next_multi_index;

Tensor z_identity(int order, int dim) {
    if (order < 2) throw InputError("z_identity: order must be >= 2");
    if (order % 2 != 0)
        throw InputError("z_identity: no identity tensor of odd order " + std::to_string(order) + " exists");
    Tensor t(order, dim);
    std::vector<int> idx(static_cast<std::size_t>(order), 0);
    std::size_t f = 0;
    do {
        bool paired = true;
        for (int s = 0; s + 1 < order; s += 2) paired = paired && idx[static_cast<std::size_t>(s)] == idx[static_cast<std::size_t>(s) + 1];
        if (paired) t.entries()[f] = 1.0;
        ++f;
    } while (next_multi_index(idx, dim));
    return t;
}

Tensor sign_matched_identity(const Tensor& a_l, double s) {
    if (s < 0.0 && !(a_l.max_abs() > std::abs(s)))
        throw InputError("sign_matched_identity: a negative gain requires max|A_l| > |s| "
                         "(max|A_l| = " + std::to_string(a_l.max_abs()) + ", |s| = " + std::to_string(std::abs(s)) + ")");
    Tensor itilde = z_identity(a_l.order(), a_l.dim());
    for (std::size_t f = 0; f < itilde.size(); ++f) {
        if (itilde.entries()[f] == 0.0) continue;
        if (a_l.entries()[f] < 0.0) itilde.entries()[f] = -itilde.entries()[f];
    }
    return itilde;
}

ControllerSpec make_controller(const PolySystem& sys, int order, double gain) {
    if (order < 4 || order % 2 != 0)
        throw InputError("make_controller: controller order must be even and >= 4, got " + std::to_string(order));
    const Tensor* a_l = sys.tensor(order);
    const Tensor zero(order, sys.dim());
    return ControllerSpec{order, gain, sign_matched_identity(a_l ? *a_l : zero, gain)};
}

PolySystem closed_loop(const PolySystem& sys, const ControllerSpec& ctrl) {
    if (ctrl.itilde.dim() != sys.dim())
        throw InputError("closed_loop: controller dimension does not match the system");
    if (ctrl.itilde.order() != ctrl.order) throw InputError("closed_loop: controller tensor order mismatch");
    if (ctrl.gain == 0.0) return sys;

    PolySystem out = sys;
    const Tensor* existing = sys.tensor(ctrl.order);
    Tensor t = existing ? *existing : Tensor(ctrl.order, sys.dim());
    t += ctrl.gain * ctrl.itilde;
    out.set_tensor(std::move(t));
    return out;
}

AttractionCertificate controlled_certificate(const PolySystem& sys, int order, double gain) {
    if (order < 2) throw InputError("controlled_certificate: order must be >= 2");
    detail::WeightedData data = detail::common_weighted_data(sys, "controlled_certificate");

    const double shifted = (data.lambdas.count(order) ? data.lambdas.at(order) : 0.0) + gain;
    if (shifted < 0.0)
        throw ConditionError("controlled_certificate: shifted order-" + std::to_string(order) + " coefficient " +
                             std::to_string(shifted) + " is negative; the root equation needs nonnegative coefficients");
    data.lambdas[order] = shifted;

    const auto it2 = data.lambdas.find(2);
    if (it2 != data.lambdas.end() && it2->second >= 1.0)
        throw ConditionError("controlled_certificate: order-2 coefficient " + std::to_string(it2->second) + " is >= 1");

    AttractionCertificate cert;
    cert.kind = CertKind::weighted;
    cert.theorem = Theorem::T2;
    cert.radius = positive_root(data.lambdas);
    cert.delta = std::move(data.delta);
    cert.lambdas_used = std::move(data.lambdas);
    return cert;
}

AttractionCertificate controlled_certificate(const PolySystem& sys, const ControllerSpec& ctrl) {
    return controlled_certificate(sys, ctrl.order, ctrl.gain);
}

} // namespace hyperstab
