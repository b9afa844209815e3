#pragma once

#include <array>
#include <string>

#include "pi2/branched_point.hpp"
#include "pi2/model_curve.hpp"

namespace pi2::stokes {

// The seven Stokes multipliers s_{-3}..s_{3}, extended by s_{k+7} = s_k. They
// live on the manifold
//   s_k + s_{k+2} + s_k s_{k+1} s_{k+2} + i (1 + s_{k+4} s_{k+5}) = 0.
struct StokesVector {
    std::array<cplx, 7> s{};  // index k+3 stores s_k, k = -3..3

    cplx& at(int k) { return s[std::size_t(((k + 3) % 7 + 7) % 7)]; }
    const cplx& at(int k) const { return s[std::size_t(((k + 3) % 7 + 7) % 7)]; }
};

// Max residual of the cyclic constraint over one full period.
double validate(const StokesVector& sv);

// Index relabeling k -> k - 2n (mod 7) of the rotational symmetry.
StokesVector rotate(const StokesVector& sv, int n);

// Tritronquee presets. typeII:m has s_m = s_{m+3} = s_{m-3} = -i, rest 0;
// typeI:m has s_{m-1} = s_m = s_{m+1} = -i, rest 0.
StokesVector preset(model_curve::Family family, int m);

// Parse "typeI:m" / "typeII:m".
StokesVector preset_by_name(const std::string& name);
std::string preset_name(model_curve::Family family, int m);

}  // namespace pi2::stokes
