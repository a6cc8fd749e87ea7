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

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "gbsiso/errors.hpp"
#include "gbsiso/graph.hpp"

namespace gbsiso {

struct Rescaled {
    Eigen::MatrixXd matrix;  ///< c * A
    double scale = 1.0;      ///< c
};

/// Spectral radius of a symmetric matrix.
inline double spectral_radius(const Eigen::MatrixXd &a) { return spectrum(a).radius(); }

/// Scales A so that its spectral radius becomes `alpha`.
inline Rescaled rescale(const Eigen::MatrixXd &a, double alpha = 0.9) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw EncodingError("rescale: alpha must lie in (0, 1)");
    const double rho = spectral_radius(a);
    if (rho == 0.0) throw EncodingError("rescale: zero matrix has no encoding");
    const double c = alpha / rho;
    return {c * a, c};
}

/// One scale factor for a pair, c = alpha / max(rho(A1), rho(A2)).
/// Returns 1 when both matrices are zero (both samplers then sit in vacuum).
inline double shared_scale(const Eigen::MatrixXd &a1, const Eigen::MatrixXd &a2, double alpha = 0.9) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw EncodingError("rescale: alpha must lie in (0, 1)");
    const double rho = std::max(spectral_radius(a1), spectral_radius(a2));
    return rho == 0.0 ? 1.0 : alpha / rho;
}

/// Interferometer and squeezing parameters that realize a rescaled graph.
///
/// `unitary * diag(tanh(squeezing)) * unitary^T` reproduces the rescaled
/// adjacency matrix. Negative eigenvalues are absorbed as a factor of i on
/// the corresponding column, so every squeezing value is non-negative.
struct EncodedSampler {
    Eigen::MatrixXcd unitary;
    std::vector<double> squeezing;  ///< r_a = atanh(|lambda_a|)
    std::vector<double> spectrum;   ///< signed lambda_a of the rescaled matrix, column order
    double scale = 1.0;

    int modes() const { return static_cast<int>(unitary.rows()); }

    /// U diag(tanh r) U^T.
    Eigen::MatrixXcd kernel() const {
        Eigen::VectorXcd t(modes());
        for (int a = 0; a < modes(); ++a) t(a) = std::tanh(squeezing[a]);
        return unitary * t.asDiagonal() * unitary.transpose();
    }
};

/// Takagi factorization of a real symmetric matrix with spectral radius < 1.
inline EncodedSampler takagi(const Eigen::MatrixXd &scaled, double scale = 1.0) {
    const int m = static_cast<int>(scaled.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled);
    if (solver.info() != Eigen::Success) throw NumericError("takagi: eigensolver did not converge");

    EncodedSampler enc;
    enc.scale = scale;
    enc.unitary.resize(m, m);
    enc.squeezing.resize(m);
    enc.spectrum.resize(m);
    const std::complex<double> i_unit(0.0, 1.0);
    // Eigen sorts ascending; store descending.
    for (int col = 0; col < m; ++col) {
        const int src = m - 1 - col;
        const double lambda = solver.eigenvalues()(src);
        if (std::abs(lambda) >= 1.0) throw EncodingError("takagi: spectral radius must be below 1");
        enc.spectrum[col] = lambda;
        enc.squeezing[col] = std::atanh(std::abs(lambda));
        const Eigen::VectorXd q = solver.eigenvectors().col(src);
        if (lambda >= 0.0)
            enc.unitary.col(col) = q.cast<std::complex<double>>();
        else
            enc.unitary.col(col) = i_unit * q.cast<std::complex<double>>();
    }
    return enc;
}

/// Second-order contractions of the output state.
///
/// n(x, y) = <a_x^dag a_y> and e(x, y) = <a_x a_y>. Every photon-number
/// moment of the Gaussian output follows from these two matrices.
struct GaussianMoments {
    Eigen::MatrixXd n;
    Eigen::MatrixXd e;

    int modes() const { return static_cast<int>(n.rows()); }
};

inline GaussianMoments moments_from_sampler(const EncodedSampler &enc) {
    const int m = enc.modes();
    Eigen::VectorXd occupation(m), eccentricity(m);
    for (int a = 0; a < m; ++a) {
        const double r = enc.squeezing[a];
        occupation(a) = std::sinh(r) * std::sinh(r);
        eccentricity(a) = std::sinh(2.0 * r) / 2.0;
    }
    const Eigen::MatrixXcd &u = enc.unitary;
    const Eigen::MatrixXcd n = u.conjugate() * occupation.cast<std::complex<double>>().asDiagonal() * u.transpose();
    const Eigen::MatrixXcd e = u * eccentricity.cast<std::complex<double>>().asDiagonal() * u.transpose();

    const double scale = std::max({1.0, n.cwiseAbs().maxCoeff(), e.cwiseAbs().maxCoeff()});
    if (n.imag().cwiseAbs().maxCoeff() > 1e-10 * scale || e.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NumericError("moments_from_sampler: contractions are not real; broken phase convention");
    GaussianMoments out{n.real(), e.real()};
    // Symmetrize away rounding so downstream index symmetry is exact.
    out.n = (out.n + out.n.transpose()) / 2.0;
    out.e = (out.e + out.e.transpose()) / 2.0;
    return out;
}

/// Basis-free route: N = A^2 (I - A^2)^-1, E = A (I - A^2)^-1.
inline GaussianMoments moments_direct(const Eigen::MatrixXd &scaled) {
    const Eigen::Index m = scaled.rows();
    if (m > 0 && spectral_radius(scaled) >= 1.0) throw EncodingError("moments_direct: spectral radius must be below 1");
    const Eigen::MatrixXd a2 = scaled * scaled;
    const Eigen::MatrixXd gap = Eigen::MatrixXd::Identity(m, m) - a2;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gap);
    if (!lu.isInvertible()) throw EncodingError("moments_direct: I - A^2 is singular");
    const Eigen::MatrixXd inv = lu.inverse();
    GaussianMoments out{a2 * inv, scaled * inv};
    out.n = (out.n + out.n.transpose()) / 2.0;
    out.e = (out.e + out.e.transpose()) / 2.0;
    return out;
}

}  // namespace gbsiso
