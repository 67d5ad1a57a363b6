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

#ifndef ECGAP_FIT_HPP
#define ECGAP_FIT_HPP

#include <span>
#include <stdexcept>
#include <utility>

namespace ecgap {

struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FitPoint {
    double d;
    double y;
};

/// y ~ A * d^B  (power) or  y ~ A * 10^(B d)  (exponential), fitted by
/// ordinary least squares in base-10 log space.
struct FitResult {
    double A = 0;
    double B = 0;
    /// Sum of squared residuals of log10(y) over the points used.
    double residual = 0;
    std::size_t points_used = 0;
    /// Points dropped because y <= 0.
    std::size_t points_dropped = 0;
};

/// Least squares of log10 y against log10 d over points with d >= d_min.
FitResult fit_power_law(std::span<const FitPoint> points, double d_min = 0);

/// Least squares of log10 y against d.
FitResult fit_exponential(std::span<const FitPoint> points);

}  // namespace ecgap

#endif  // ECGAP_FIT_HPP
