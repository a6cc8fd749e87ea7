// Copyright 2026 The gbsiso Authors
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

#include "gbsiso/encoding.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gbsiso/baselines.hpp"

using namespace gbsiso;

namespace {

Eigen::MatrixXd random_symmetric(Rng &rng, int m) {
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) a(i, j) = a(j, i) = 2.0 * rng.uniform() - 1.0;
    return a;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd reconstruct(const EncodedSampler &enc) {
    Eigen::VectorXcd d(enc.modes());
    for (int a = 0; a < enc.modes(); ++a) d(a) = std::tanh(enc.squeezing[a]);
    return enc.unitary * d.asDiagonal() * enc.unitary.transpose();
}

}  // namespace

TEST(rescale, k3_and_single_edge) {
    const auto k3 = rescale(fixture("k3").adjacency(), 0.9);
    EXPECT_NEAR(k3.scale, 0.45, 1e-12);
    const auto enc = takagi(k3.matrix, k3.scale);
    EXPECT_NEAR(enc.spectrum[0], 0.9, 1e-12);
    EXPECT_NEAR(enc.spectrum[1], -0.45, 1e-12);
    EXPECT_NEAR(enc.spectrum[2], -0.45, 1e-12);

    const auto edge = rescale(parse_graph6("A_").adjacency(), 0.5);
    EXPECT_NEAR(edge.scale, 0.5, 1e-12);
    const auto e2 = takagi(edge.matrix);
    EXPECT_NEAR(e2.spectrum[0], 0.5, 1e-12);
    EXPECT_NEAR(e2.spectrum[1], -0.5, 1e-12);
}

TEST(rescale, permutation_invariant_scale) {
    const Graph g = generate(GraphModel::erdos_renyi(0.5), 9, 3);
    const auto [copy, p] = isomorphic_copy(g, 5);
    EXPECT_NEAR(rescale(g.adjacency()).scale, rescale(copy.adjacency()).scale, 1e-14);
}

TEST(rescale, errors) {
    EXPECT_THROW(rescale(Eigen::MatrixXd::Zero(3, 3)), EncodingError);
    EXPECT_THROW(rescale(fixture("k3").adjacency(), 1.0), EncodingError);
    EXPECT_THROW(rescale(fixture("k3").adjacency(), 0.0), EncodingError);
}

TEST(shared_scale, uses_larger_radius_and_vacuum_fallback) {
    EXPECT_NEAR(shared_scale(fixture("k3").adjacency(), fixture("p3").adjacency(), 0.9), 0.45, 1e-12);
    EXPECT_EQ(shared_scale(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)), 1.0);
}

TEST(takagi, diagonal_input) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = 0.3;
    const auto enc = takagi(a);
    EXPECT_NEAR(enc.squeezing[0], std::atanh(0.5), 1e-14);
    EXPECT_NEAR(enc.squeezing[1], std::atanh(0.3), 1e-14);
    EXPECT_LT(max_abs(Eigen::MatrixXcd(enc.unitary.cwiseAbs().cast<std::complex<double>>()) - Eigen::MatrixXcd::Identity(2, 2)), 1e-14);
}

TEST(takagi, swap_matrix_carries_phase_on_negative_mode) {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 0.5, 0.5, 0.0;
    const auto enc = takagi(a);
    EXPECT_NEAR(std::tanh(enc.squeezing[0]), 0.5, 1e-14);
    EXPECT_NEAR(std::tanh(enc.squeezing[1]), 0.5, 1e-14);
    // Column 0 is real (1, 1)/sqrt2 up to sign; column 1 is i (1, -1)/sqrt2 up to sign.
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(enc.unitary(0, 0).real()), h, 1e-14);
    EXPECT_NEAR(enc.unitary(0, 0).imag(), 0.0, 1e-14);
    EXPECT_NEAR(enc.unitary(0, 0).real(), enc.unitary(1, 0).real(), 1e-14);
    EXPECT_NEAR(enc.unitary(0, 1).real(), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(enc.unitary(0, 1).imag()), h, 1e-14);
    EXPECT_NEAR(enc.unitary(0, 1).imag(), -enc.unitary(1, 1).imag(), 1e-14);
    EXPECT_LT(max_abs(reconstruct(enc) - a.cast<std::complex<double>>()), 1e-14);
}

TEST(takagi, rejects_radius_one) {
    EXPECT_THROW(takagi(fixture("k3").adjacency() * 0.5), EncodingError);
}

TEST(takagi, unitarity_and_reconstruction_on_random_inputs) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(16));
        Eigen::MatrixXd a = trial % 2 ? random_symmetric(rng, m) : generate(GraphModel::erdos_renyi(0.5), m, rng.next()).adjacency();
        if ((a.array() == 0.0).all()) continue;
        const auto scaled = rescale(a, 0.9);
        const auto enc = takagi(scaled.matrix, scaled.scale);
        const Eigen::MatrixXcd gram = enc.unitary.adjoint() * enc.unitary;
        EXPECT_LE(max_abs(gram - Eigen::MatrixXcd::Identity(m, m)), 1e-10);
        EXPECT_LE(max_abs(reconstruct(enc) - scaled.matrix.cast<std::complex<double>>()), 1e-8);
        for (double r : enc.squeezing) EXPECT_GE(r, 0.0);
    }
}

TEST(moments, single_mode_closed_form) {
    const double r = 0.7;
    EncodedSampler enc;
    enc.unitary = Eigen::MatrixXcd::Identity(1, 1);
    enc.squeezing = {r};
    enc.spectrum = {std::tanh(r)};
    const auto mom = moments_from_sampler(enc);
    EXPECT_NEAR(mom.n(0, 0), std::sinh(r) * std::sinh(r), 1e-14);
    EXPECT_NEAR(mom.e(0, 0), std::sinh(2 * r) / 2, 1e-14);
}

TEST(moments, half_squeezed_mode) {
    Eigen::MatrixXd a(1, 1);
    a << 0.5;
    const auto direct = moments_direct(a);
    EXPECT_NEAR(direct.n(0, 0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(direct.e(0, 0), 2.0 / 3.0, 1e-14);
    const auto sampled = moments_from_sampler(takagi(a));
    EXPECT_NEAR(sampled.n(0, 0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(sampled.e(0, 0), 2.0 / 3.0, 1e-14);
}

TEST(moments, vacuum_and_signed_diagonal) {
    const auto vac = moments_direct(Eigen::MatrixXd::Zero(3, 3));
    EXPECT_EQ(max_abs(vac.n), 0.0);
    EXPECT_EQ(max_abs(vac.e), 0.0);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = -0.5;
    const auto mom = moments_direct(a);
    EXPECT_NEAR(mom.e(0, 0), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(mom.e(1, 1), -2.0 / 3.0, 1e-14);
    EXPECT_NEAR(mom.n(0, 0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(mom.n(1, 1), 1.0 / 3.0, 1e-14);
}

TEST(moments, rejects_radius_one) {
    EXPECT_THROW(moments_direct(Eigen::MatrixXd::Identity(2, 2)), EncodingError);
}

TEST(moments, sampler_route_matches_matrix_functions) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(16));
        Eigen::MatrixXd a = trial % 2 ? random_symmetric(rng, m) : generate(GraphModel::erdos_renyi(0.4), m, rng.next()).adjacency();
        if ((a.array() == 0.0).all()) continue;
        const auto scaled = rescale(a, 0.9);
        const auto x = moments_from_sampler(takagi(scaled.matrix));
        const auto y = moments_direct(scaled.matrix);
        EXPECT_LE(max_abs(x.n - y.n), 1e-8);
        EXPECT_LE(max_abs(x.e - y.e), 1e-8);
        // N is positive semidefinite.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.n);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
}

TEST(moments, permutation_covariance) {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(10));
        const auto scaled = rescale(random_symmetric(rng, m), 0.8).matrix;
        const auto p = random_permutation(m, rng);
        const auto base = moments_direct(scaled);
        const auto moved = moments_direct(permute_matrix(scaled, p));
        EXPECT_LE(max_abs(moved.n - permute_matrix(base.n, p)), 1e-10);
        EXPECT_LE(max_abs(moved.e - permute_matrix(base.e, p)), 1e-10);
    }
}
