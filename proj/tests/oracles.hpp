/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Independent reference computations shared by the unit tests. None of these
// call into the library's formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Permanent by brute force over permutations.
inline cd permanent(const std::vector<std::vector<cd>>& m)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    cd total = 0.0;
    do {
        cd prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            prod *= m[i][p[i]];
        }
        total += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// Discrete non-negative intensity distribution of one source.
struct IntensityLaw {
    std::vector<double> value;
    std::vector<double> prob;

    double moment(int k) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < value.size(); ++i) {
            s += prob[i] * std::pow(value[i], k);
        }
        return s;
    }
    double g(int k) const { return moment(k) / std::pow(moment(1), k); }
};

/// <prod_n I_n> / prod_n <I_n> for two independent sources with intensity law
/// `law` and independent uniform phases, I_n = |sqrt(IA) e^{i(phi_n + pA)} + sqrt(IB) e^{i pB}|^2.
/// The phase average is a trapezoid rule, exact for these trigonometric
/// polynomials once the node count exceeds the detector count.
inline double two_source_g(const IntensityLaw& law, const std::vector<double>& phi)
{
    constexpr int kNodes = 16;
    const double two_pi = 2.0 * std::numbers::pi;
    double num = 0.0;
    for (std::size_t a = 0; a < law.value.size(); ++a) {
        for (std::size_t b = 0; b < law.value.size(); ++b) {
            double avg = 0.0;
            for (int q = 0; q < kNodes; ++q) {
                const double psi = two_pi * q / kNodes;
                double prod = 1.0;
                for (double p : phi) {
                    const cd e = std::sqrt(law.value[a]) * std::polar(1.0, p + psi) +
                                 std::sqrt(law.value[b]);
                    prod *= std::norm(e);
                }
                avg += prod / kNodes;
            }
            num += law.prob[a] * law.prob[b] * avg;
        }
    }
    return num / std::pow(2.0 * law.moment(1), static_cast<double>(phi.size()));
}

/// Same for circular-Gaussian (thermal) fields via the Gaussian moment theorem:
/// <I_1..I_n> = perm(C), C_nm = <E_n E_m*> = e^{i(phi_n - phi_m)} + 1.
inline double thermal_g(const std::vector<double>& phi)
{
    const std::size_t n = phi.size();
    std::vector<std::vector<cd>> c(n, std::vector<cd>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c[i][j] = std::polar(1.0, phi[i] - phi[j]) + 1.0;
        }
    }
    return permanent(c).real() / std::pow(2.0, static_cast<double>(n));
}

} // namespace oracle
