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

#include "hbt/extrema.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hbt/errors.hpp"

namespace hbt::analytic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Slice {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::array<int, 3> arglo{};
    std::array<int, 3> arghi{};

    void offer(double v, int i, int j, int k)
    {
        if (v < lo) {
            lo = v;
            arglo = {i, j, k};
        }
        if (v > hi) {
            hi = v;
            arghi = {i, j, k};
        }
    }
};

/// Combines per-row slices in row order, so ties resolve to the first index
/// regardless of scheduling.
GridExtrema combine(const std::vector<Slice>& rows, int n, int dims)
{
    Slice total;
    for (const Slice& s : rows) {
        if (s.lo < total.lo) {
            total.lo = s.lo;
            total.arglo = s.arglo;
        }
        if (s.hi > total.hi) {
            total.hi = s.hi;
            total.arghi = s.arghi;
        }
    }
    GridExtrema out;
    out.min_value = total.lo;
    out.max_value = total.hi;
    for (int d = 0; d < dims; ++d) {
        out.argmin[static_cast<std::size_t>(d)] = kTwoPi * total.arglo[static_cast<std::size_t>(d)] / n;
        out.argmax[static_cast<std::size_t>(d)] = kTwoPi * total.arghi[static_cast<std::size_t>(d)] / n;
    }
    out.evaluations = 1;
    for (int d = 0; d < dims; ++d) {
        out.evaluations *= n;
    }
    return out;
}

void require_grid(int n)
{
    if (n < 1) {
        throw DomainError("grid size must be positive");
    }
}

std::vector<double> cosine_table(int n)
{
    std::vector<double> table(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        table[static_cast<std::size_t>(i)] = std::cos(kTwoPi * i / n);
    }
    return table;
}

} // namespace

GridExtrema g3_grid_extrema(const SingleSourceMoments& m, int n, Execution exec)
{
    require_grid(n);
    require_classical(m);
    const std::vector<double> c = cosine_table(n);
    const double base = m.g3 / 4.0 + 0.75 * m.g2;
    const double amp = m.g2 / 2.0;
    std::vector<Slice> rows(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static) num_threads(exec.resolved())
    for (int i = 0; i < n; ++i) {
        Slice s;
        for (int j = 0; j < n; ++j) {
            const double v = base + amp * (c[static_cast<std::size_t>(i)] +
                                           c[static_cast<std::size_t>(j)] +
                                           c[static_cast<std::size_t>((i + j) % n)]);
            s.offer(v, i, j, 0);
        }
        rows[static_cast<std::size_t>(i)] = s;
    }
    return combine(rows, n, 2);
}

GridExtrema g4_grid_extrema(const SingleSourceMoments& m, int n, Execution exec)
{
    require_grid(n);
    require_classical(m);
    const AbcAmplitudes abc = abc_amplitudes(m);
    const std::vector<double> c = cosine_table(n);
    // cos at every index in [-2n, 2n): each k-dependent term becomes a shifted
    // contiguous slice, so the inner loop has no modulo and vectorizes.
    std::vector<double> wide(static_cast<std::size_t>(4 * n));
    for (int t = 0; t < 4 * n; ++t) {
        wide[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t % n)];
    }
    const double* z = wide.data() + 2 * n;
    std::vector<Slice> rows(static_cast<std::size_t>(n));

#pragma omp parallel num_threads(exec.resolved())
    {
        std::vector<double> v(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 4)
        for (int i = 0; i < n; ++i) {
            Slice s;
            for (int j = 0; j < n; ++j) {
                const double head = abc.A + abc.B * (z[i] + z[j] + z[i - j]);
                const double* pk = z;             // cos k
                const double* pik = z - i;        // cos(i - k)
                const double* pjk = z - j;        // cos(j - k)
                const double* pijk = z - i - j;   // cos(i + j - k)
                const double* pikj = z + i - j;   // cos(i + k - j)
                const double* pjki = z + j - i;   // cos(j + k - i)
                double* out = v.data();
#pragma omp simd
                for (int k = 0; k < n; ++k) {
                    out[k] = head + abc.B * (pk[k] + pik[k] + pjk[k]) +
                             abc.C * (pijk[k] + pikj[k] + pjki[k]);
                }
                for (int k = 0; k < n; ++k) {
                    s.offer(out[k], i, j, k);
                }
            }
            rows[static_cast<std::size_t>(i)] = s;
        }
    }
    return combine(rows, n, 3);
}

namespace reference {

GridExtrema g3_grid_extrema(const SingleSourceMoments& m, int n)
{
    require_grid(n);
    std::vector<Slice> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            rows[static_cast<std::size_t>(i)].offer(
                g3_point(m, kTwoPi * i / n, kTwoPi * j / n), i, j, 0);
        }
    }
    return combine(rows, n, 2);
}

GridExtrema g4_grid_extrema(const SingleSourceMoments& m, int n)
{
    require_grid(n);
    std::vector<Slice> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                rows[static_cast<std::size_t>(i)].offer(
                    g4_point(m, kTwoPi * i / n, kTwoPi * j / n, kTwoPi * k / n), i, j, k);
            }
        }
    }
    return combine(rows, n, 3);
}

} // namespace reference

} // namespace hbt::analytic
