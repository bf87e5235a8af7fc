#pragma once

#include "dwlab/grid.hpp"

#include <string>
#include <string_view>

namespace dwlab {

/// Which low-order moments of f0 + f1 vanish.
enum class MomentClass {
    m0_nonzero,          ///< f0 = g,   f1 = 0
    m0_zero_m1_nonzero,  ///< f0 = g',  f1 = 0
    m0_m1_zero,          ///< f0 = g'', f1 = 0
    zero_sum,            ///< f0 = g,   f1 = -g  (u0 + u1 vanishes identically)
};

std::string_view to_string(MomentClass c);
MomentClass parse_moment_class(std::string_view name);

struct DataFamily {
    GridFunction f0;
    GridFunction f1;
    MomentClass moment_class;
    std::string label;
    double epsilon = 0.0;
    bool degenerate = false;  ///< epsilon == 0: the zero solution

    GridFunction u0() const { return epsilon * f0; }
    GridFunction u1() const { return epsilon * f1; }
};

/// Builds (u0, u1) = eps (f0, f1) from the Gaussian-derivative profiles.
DataFamily make_data_family(MomentClass moment_class, double epsilon, const GridSpec& spec);

}  // namespace dwlab
