#pragma once

#include "ocsmatch/gain_share.hpp"

namespace ocsmatch_test {

// Published gain-sharing vectors (rounded to 8 digits), kept as frozen
// fixtures: gamma = 1/16, kappa = 3/2, k_max = 7, Gamma ~ 0.50500053 ...
inline ocsmatch::GainShareParams table1_params() {
    ocsmatch::GainShareParams p;
    p.gamma = 1.0 / 16.0;
    p.kappa = 1.5;
    p.k_max = 7;
    p.Gamma = 0.50500053;
    p.a = {0.24749974, 0.13687460, 0.06419862, 0.03015109,
           0.01422029, 0.00679622, 0.00338141, 0.00187856};
    p.b = {0.25250026, 0.12875040, 0.06031309, 0.02821378,
           0.01313824, 0.00602809, 0.00262999, 0.00093928};
    return p;
}

// ... and gamma = 1/(3 sqrt 3), same kappa/k_max, Gamma ~ 0.51461.
inline ocsmatch::GainShareParams table2_params() {
    ocsmatch::GainShareParams p;
    p.gamma = 1.0 / (3.0 * 1.7320508075688772);
    p.kappa = 1.5;
    p.k_max = 7;
    p.Gamma = 0.51461;
    p.a = {0.24269440, 0.16215413, 0.06548904, 0.02646573,
           0.01072054, 0.00438021, 0.00184589, 0.00086124};
    p.b = {0.25730560, 0.13595839, 0.05488133, 0.02213681,
           0.00890394, 0.00354367, 0.00135357, 0.00043062};
    return p;
}

}  // namespace ocsmatch_test
