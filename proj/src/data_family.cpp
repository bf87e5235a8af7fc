#include "dwlab/data_family.hpp"

#include "dwlab/special_functions.hpp"

#include <stdexcept>
#include <string>

namespace dwlab {

std::string_view to_string(MomentClass c) {
    switch (c) {
    case MomentClass::m0_nonzero: return "M0_nonzero";
    case MomentClass::m0_zero_m1_nonzero: return "M0_zero_M1_nonzero";
    case MomentClass::m0_m1_zero: return "M0_M1_zero";
    case MomentClass::zero_sum: return "zero_sum";
    }
    return "unknown";
}

MomentClass parse_moment_class(std::string_view name) {
    for (auto c : {MomentClass::m0_nonzero, MomentClass::m0_zero_m1_nonzero, MomentClass::m0_m1_zero,
                   MomentClass::zero_sum})
        if (name == to_string(c)) return c;
    throw std::invalid_argument("unknown moment class: " + std::string(name));
}

DataFamily make_data_family(MomentClass moment_class, double epsilon, const GridSpec& spec) {
    if (epsilon < 0.0) throw std::invalid_argument("make_data_family: epsilon must be non-negative");
    GridFunction zero = GridFunction::zeros(spec);
    DataFamily data{zero, zero, moment_class, std::string(to_string(moment_class)), epsilon,
                    epsilon == 0.0};
    switch (moment_class) {
    case MomentClass::m0_nonzero: data.f0 = gaussian_derivative(0, spec); break;
    case MomentClass::m0_zero_m1_nonzero: data.f0 = gaussian_derivative(1, spec); break;
    case MomentClass::m0_m1_zero: data.f0 = gaussian_derivative(2, spec); break;
    case MomentClass::zero_sum:
        data.f0 = gaussian_derivative(0, spec);
        data.f1 = -1.0 * data.f0;
        break;
    }
    return data;
}

}  // namespace dwlab
