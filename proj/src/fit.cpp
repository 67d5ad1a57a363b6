// Copyright 2026 The ecgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ecgap/fit.hpp"

#include <cmath>
#include <vector>

namespace ecgap {

namespace {

// Straight line through (x, z) pairs; returns (intercept, slope, rss).
FitResult fit_line(const std::vector<std::pair<double, double>>& xz, std::size_t dropped) {
    if (xz.size() < 2)
        throw InsufficientData("need at least two usable points, got " + std::to_string(xz.size()));
    const double n = static_cast<double>(xz.size());
    double mx = 0, mz = 0;
    for (auto [x, z] : xz) {
        mx += x;
        mz += z;
    }
    mx /= n;
    mz /= n;
    double sxx = 0, sxz = 0;
    for (auto [x, z] : xz) {
        sxx += (x - mx) * (x - mx);
        sxz += (x - mx) * (z - mz);
    }
    if (sxx == 0)
        throw InsufficientData("all points share the same abscissa");
    double slope = sxz / sxx;
    double intercept = mz - slope * mx;
    double rss = 0;
    for (auto [x, z] : xz) {
        double r = z - (intercept + slope * x);
        rss += r * r;
    }
    FitResult out;
    out.A = std::pow(10.0, intercept);
    out.B = slope;
    out.residual = rss;
    out.points_used = xz.size();
    out.points_dropped = dropped;
    return out;
}

}  // namespace

FitResult fit_power_law(std::span<const FitPoint> points, double d_min) {
    std::vector<std::pair<double, double>> xz;
    std::size_t dropped = 0;
    for (const auto& p : points) {
        if (p.d < d_min)
            continue;
        if (!(p.y > 0) || !(p.d > 0)) {
            ++dropped;
            continue;
        }
        xz.emplace_back(std::log10(p.d), std::log10(p.y));
    }
    return fit_line(xz, dropped);
}

FitResult fit_exponential(std::span<const FitPoint> points) {
    std::vector<std::pair<double, double>> xz;
    std::size_t dropped = 0;
    for (const auto& p : points) {
        if (!(p.y > 0)) {
            ++dropped;
            continue;
        }
        xz.emplace_back(p.d, std::log10(p.y));
    }
    return fit_line(xz, dropped);
}

}  // namespace ecgap
