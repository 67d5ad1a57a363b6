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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "ecgap/fit.hpp"

namespace ecgap {
namespace {

// Least squares of z on [1, x] by Householder QR; returns (A, B, rss).
struct Reference {
    double A, B, rss;
};

Reference qr_fit(const std::vector<double>& x, const std::vector<double>& z) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd Z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = 1;
        X(i, 1) = x[i];
        Z(i) = z[i];
    }
    Eigen::Vector2d beta = X.householderQr().solve(Z);
    return {std::pow(10.0, beta(0)), beta(1), (Z - X * beta).squaredNorm()};
}

std::vector<FitPoint> power_points(double A, double B, const std::vector<double>& ds, double noise,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-noise, noise);
    std::vector<FitPoint> pts;
    for (double d : ds)
        pts.push_back({d, A * std::pow(d, B) * (1 + jitter(rng))});
    return pts;
}

std::vector<FitPoint> exp_points(double A, double B, const std::vector<double>& ds, double noise,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0, noise);
    std::vector<FitPoint> pts;
    for (double d : ds)
        pts.push_back({d, A * std::pow(10.0, B * d) * std::pow(10.0, jitter(rng))});
    return pts;
}

TEST(PowerLaw, ExactRecovery) {
    auto pts = power_points(2, 3, {3, 5, 7, 9, 11}, 0, 0);
    FitResult r = fit_power_law(pts);
    EXPECT_NEAR(r.A, 2, 1e-9);
    EXPECT_NEAR(r.B, 3, 1e-9);
    EXPECT_NEAR(r.residual, 0, 1e-18);
    EXPECT_EQ(r.points_used, 5u);
}

TEST(PowerLaw, NoisyRecoveryAgreesWithQr) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto pts = power_points(5, 2.31, {3, 5, 7, 9, 11, 13}, 0.01, seed);
        FitResult r = fit_power_law(pts);
        EXPECT_NEAR(r.B, 2.31, 0.1);
        std::vector<double> x, z;
        for (const auto& p : pts) {
            x.push_back(std::log10(p.d));
            z.push_back(std::log10(p.y));
        }
        Reference ref = qr_fit(x, z);
        EXPECT_NEAR(r.B, ref.B, 1e-9);
        EXPECT_NEAR(r.A, ref.A, 1e-9 * ref.A);
        EXPECT_NEAR(r.residual, ref.rss, 1e-12);
    }
}

TEST(PowerLaw, MinimumDistanceFilter) {
    auto pts = power_points(1, 2, {3, 5, 7, 9, 11}, 0, 0);
    pts[0].y = 1000;  // outlier excluded by d_min
    FitResult r = fit_power_law(pts, 5);
    EXPECT_EQ(r.points_used, 4u);
    EXPECT_NEAR(r.B, 2, 1e-9);
}

TEST(Exponential, ExactRecovery) {
    auto pts = exp_points(0.5, -0.4, {3, 5, 7, 9, 11}, 0, 0);
    FitResult r = fit_exponential(pts);
    EXPECT_NEAR(r.A, 0.5, 1e-9);
    EXPECT_NEAR(r.B, -0.4, 1e-9);
}

TEST(Exponential, NoisyRecoveryAgreesWithQr) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto pts = exp_points(std::pow(10.0, -0.38), -0.36, {3, 5, 7, 9, 11, 13, 15}, 0.01, seed);
        FitResult r = fit_exponential(pts);
        EXPECT_NEAR(r.B, -0.36, 0.05);
        std::vector<double> x, z;
        for (const auto& p : pts) {
            x.push_back(p.d);
            z.push_back(std::log10(p.y));
        }
        Reference ref = qr_fit(x, z);
        EXPECT_NEAR(r.B, ref.B, 1e-9);
        EXPECT_NEAR(r.A, ref.A, 1e-9 * ref.A);
    }
}

TEST(Fit, ScaleEquivariance) {
    auto pts = power_points(3, 1.7, {3, 5, 7, 9}, 0.05, 9);
    auto scaled = pts;
    for (auto& p : scaled)
        p.y *= 7.5;
    FitResult a = fit_power_law(pts), b = fit_power_law(scaled);
    EXPECT_NEAR(b.A, 7.5 * a.A, 1e-9 * b.A);
    EXPECT_NEAR(b.B, a.B, 1e-9);
    FitResult c = fit_exponential(pts), e = fit_exponential(scaled);
    EXPECT_NEAR(e.A, 7.5 * c.A, 1e-9 * e.A);
    EXPECT_NEAR(e.B, c.B, 1e-9);
}

TEST(Fit, NonPositivePointsAreDropped) {
    std::vector<FitPoint> pts{{3, 0.1}, {5, 0.0}, {7, 0.001}, {9, -1}};
    FitResult r = fit_exponential(pts);
    EXPECT_EQ(r.points_used, 2u);
    EXPECT_EQ(r.points_dropped, 2u);
    EXPECT_NEAR(r.B, -0.5, 1e-12);
    EXPECT_GE(r.residual, 0);
}

TEST(Fit, InsufficientData) {
    std::vector<FitPoint> one{{3, 1}};
    EXPECT_THROW(fit_power_law(one), InsufficientData);
    EXPECT_THROW(fit_exponential(one), InsufficientData);
    std::vector<FitPoint> zeros{{3, 0}, {5, 0}, {7, 1}};
    EXPECT_THROW(fit_exponential(zeros), InsufficientData);
    std::vector<FitPoint> same_d{{5, 1}, {5, 2}};
    EXPECT_THROW(fit_power_law(same_d), InsufficientData);
    auto pts = power_points(1, 2, {3, 5, 7}, 0, 0);
    EXPECT_THROW(fit_power_law(pts, 7), InsufficientData);
}

}  // namespace
}  // namespace ecgap
