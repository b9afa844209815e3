#include "pi2/stokes.hpp"

#include <algorithm>

#include "pi2/errors.hpp"

namespace pi2::stokes {

double validate(const StokesVector& sv) {
    const cplx i(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 7; ++k) {
        cplx c = sv.at(k) + sv.at(k + 2) + sv.at(k) * sv.at(k + 1) * sv.at(k + 2) +
                 i * (1.0 + sv.at(k + 4) * sv.at(k + 5));
        worst = std::max(worst, std::abs(c));
    }
    return worst;
}

StokesVector rotate(const StokesVector& sv, int n) {
    StokesVector out;
    for (int k = -3; k <= 3; ++k) out.at(k) = sv.at(k + 2 * n);
    return out;
}

StokesVector preset(model_curve::Family family, int m) {
    if (m < 0 || m > 6) throw InvalidArgument("preset: m must be 0..6");
    StokesVector sv;
    const cplx mi(0.0, -1.0);
    if (family == model_curve::Family::typeII) {
        sv.at(m) = mi;
        sv.at(m + 3) = mi;
        sv.at(m - 3) = mi;
    } else {
        sv.at(m - 1) = mi;
        sv.at(m) = mi;
        sv.at(m + 1) = mi;
    }
    return sv;
}

StokesVector preset_by_name(const std::string& name) {
    auto colon = name.find(':');
    if (colon == std::string::npos) throw InvalidArgument("preset name must be typeI:m or typeII:m");
    const std::string fam = name.substr(0, colon);
    const int m = std::stoi(name.substr(colon + 1));
    if (fam == "typeI") return preset(model_curve::Family::typeI, m);
    if (fam == "typeII") return preset(model_curve::Family::typeII, m);
    throw InvalidArgument("unknown preset family: " + fam);
}

std::string preset_name(model_curve::Family family, int m) {
    return (family == model_curve::Family::typeII ? "typeII:" : "typeI:") + std::to_string(m);
}

}  // namespace pi2::stokes
