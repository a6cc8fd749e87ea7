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
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gbsiso/combinatorics.hpp"
#include "gbsiso/encoding.hpp"
#include "gbsiso/errors.hpp"

namespace gbsiso {

/// Brute-force photon statistics in a truncated Fock basis, for checking
/// the Wick/Ursell route on samplers with at most three modes.
///
/// The input state is a product of single-mode squeezed vacua obtained by
/// exponentiating r (a^dag^2 - a^2) / 2 in a padded basis and truncating to
/// `cutoff` photons per mode. Output photon numbers are expanded in input
/// ladder operators (a_x = sum_a U(x, a) b_a) and applied directly to the
/// state vector.
class FockOracle {
   public:
    static constexpr int kMaxModes = 3;
    static constexpr int kMaxCutoff = 64;
    static constexpr double kMaxTail = 1e-8;

    FockOracle(const EncodedSampler &enc, int cutoff, int max_order = 4) : enc_(enc), cutoff_(cutoff), max_order_(max_order) {
        const int m = enc.modes();
        if (m < 1 || m > kMaxModes) throw GuardError("FockOracle: at most " + std::to_string(kMaxModes) + " modes");
        if (cutoff < 1 || cutoff > kMaxCutoff) throw GuardError("FockOracle: cutoff must lie in 1.." + std::to_string(kMaxCutoff));
        dim_ = cutoff + max_order + 1;
        std::size_t total = 1;
        for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(dim_);
        state_.assign(total, 0.0);

        double log_kept = 0.0;
        std::vector<Eigen::VectorXd> single(m);
        for (int a = 0; a < m; ++a) {
            const Eigen::VectorXd full = squeezed_vacuum(enc.squeezing[a], 2 * cutoff + 48);
            const double tail2 = full.tail(full.size() - cutoff - 1).squaredNorm();
            log_kept += std::log1p(-tail2);
            single[a] = full.head(cutoff + 1);
        }
        tail_ = std::sqrt(-std::expm1(log_kept));

        std::vector<int> occ(m, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            decode(idx, occ);
            double amp = 1.0;
            for (int a = 0; a < m && amp != 0.0; ++a) amp = occ[a] <= cutoff ? amp * single[a](occ[a]) : 0.0;
            state_[idx] = amp;
        }
    }

    /// Norm of the discarded part of the input state.
    double tail_norm() const { return tail_; }

    /// <n_{x1} ... n_{xk}> on the output modes.
    double moment(std::vector<int> modes) {
        if (static_cast<int>(modes.size()) > max_order_) throw GuardError("FockOracle: order exceeds construction order");
        std::sort(modes.begin(), modes.end());
        auto it = memo_.find(modes);
        if (it != memo_.end()) return it->second;
        std::vector<std::complex<double>> phi = state_;
        for (int x : modes) phi = apply_output_number(x, phi);
        std::complex<double> overlap = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) overlap += std::conj(state_[i]) * phi[i];
        memo_.emplace(modes, overlap.real());
        return overlap.real();
    }

    /// Ursell combination of oracle moments. Throws OracleInconclusive when
    /// the tail norm exceeds 1e-8.
    double cumulant(std::span<const int> modes) {
        if (tail_ > kMaxTail)
            throw OracleInconclusive("FockOracle: tail norm " + std::to_string(tail_) + " above 1e-8; raise the cutoff", tail_);
        const int k = static_cast<int>(modes.size());
        double total = 0.0;
        for (const SetPartition &part : set_partitions(k)) {
            const int blocks = static_cast<int>(part.blocks.size());
            double term = blocks % 2 == 1 ? 1.0 : -1.0;
            for (int i = 2; i < blocks; ++i) term *= i;
            for (const auto &block : part.blocks) {
                std::vector<int> sub;
                for (int idx : block) sub.push_back(modes[idx]);
                term *= moment(sub);
            }
            total += term;
        }
        return total;
    }

   private:
    static Eigen::VectorXd squeezed_vacuum(double r, int dim) {
        Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
        // (a^dag^2)(n + 2, n) = sqrt((n + 1)(n + 2)); a^2 is its transpose.
        for (int n = 0; n + 2 < dim; ++n) {
            const double v = 0.5 * r * std::sqrt(static_cast<double>(n + 1) * (n + 2));
            gen(n + 2, n) += v;
            gen(n, n + 2) -= v;
        }
        const Eigen::MatrixXd op = gen.exp();
        return op.col(0);
    }

    void decode(std::size_t idx, std::vector<int> &occ) const {
        for (int a = static_cast<int>(occ.size()) - 1; a >= 0; --a) {
            occ[a] = static_cast<int>(idx % dim_);
            idx /= dim_;
        }
    }

    std::size_t stride(int mode) const {
        std::size_t s = 1;
        for (int a = enc_.modes() - 1; a > mode; --a) s *= dim_;
        return s;
    }

    // n_x = sum_{a,b} conj(U(x,a)) U(x,b) b_a^dag b_b.
    std::vector<std::complex<double>> apply_output_number(int x, const std::vector<std::complex<double>> &in) const {
        const int m = enc_.modes();
        std::vector<std::complex<double>> out(in.size(), 0.0);
        std::vector<int> occ(m, 0);
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const std::complex<double> coeff = std::conj(enc_.unitary(x, a)) * enc_.unitary(x, b);
                if (coeff == 0.0) continue;
                const std::size_t sa = stride(a), sb = stride(b);
                for (std::size_t idx = 0; idx < in.size(); ++idx) {
                    if (in[idx] == 0.0) continue;
                    decode(idx, occ);
                    if (occ[b] == 0) continue;
                    double amp = std::sqrt(static_cast<double>(occ[b]));
                    std::size_t target = idx - sb;
                    const int na = occ[a] - (a == b ? 1 : 0);
                    if (na + 1 >= dim_) throw GuardError("FockOracle: occupation overflow");
                    amp *= std::sqrt(static_cast<double>(na + 1));
                    target += sa;
                    out[target] += coeff * amp * in[idx];
                }
            }
        }
        return out;
    }

    EncodedSampler enc_;
    int cutoff_;
    int max_order_;
    int dim_ = 0;
    double tail_ = 0.0;
    std::vector<std::complex<double>> state_;
    std::map<std::vector<int>, double> memo_;
};

struct OracleValue {
    double value;
    double tail_norm;
};

inline OracleValue fock_oracle_cumulant(const EncodedSampler &enc, std::span<const int> modes, int cutoff) {
    FockOracle oracle(enc, cutoff, static_cast<int>(modes.size()));
    return {oracle.cumulant(modes), oracle.tail_norm()};
}

}  // namespace gbsiso
