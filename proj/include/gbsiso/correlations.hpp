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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gbsiso/combinatorics.hpp"
#include "gbsiso/encoding.hpp"
#include "gbsiso/errors.hpp"

namespace gbsiso {

inline constexpr int kDefaultMaxCorrelationOrder = 6;
inline constexpr std::uint64_t kMaxTensorEntries = 100'000'000;

/// <n_{x1} ... n_{xk}> by Wick's theorem over the operator string
/// (a^dag_{x1}, a_{x1}, ..., a^dag_{xk}, a_{xk}).
inline double wick_moment(const GaussianMoments &mom, std::span<const int> modes, int max_order = kDefaultMaxCorrelationOrder) {
    const int k = static_cast<int>(modes.size());
    if (k > max_order) throw GuardError("wick_moment: order " + std::to_string(k) + " exceeds guard " + std::to_string(max_order));
    for (int x : modes)
        if (x < 0 || x >= mom.modes()) throw std::out_of_range("wick_moment: mode index out of range");
    if (k == 0) return 1.0;

    // Position 2i is a^dag_{x_i}, position 2i+1 is a_{x_i}.
    const int n = 2 * k;
    Eigen::MatrixXd contraction = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const int x = modes[p / 2], y = modes[q / 2];
            const bool p_dag = p % 2 == 0, q_dag = q % 2 == 0;
            double c;
            if (p_dag == q_dag)
                c = mom.e(x, y);
            else if (p_dag)
                c = mom.n(x, y);
            else
                c = mom.n(x, y) + (x == y ? 1.0 : 0.0);
            contraction(p, q) = c;
            contraction(q, p) = c;
        }
    }
    return hafnian(contraction);
}

/// Ursell-function evaluator with a moment cache keyed by sorted mode tuples.
/// Not thread safe; use one instance per worker.
class CumulantEngine {
   public:
    explicit CumulantEngine(const GaussianMoments &mom, int max_order = kDefaultMaxCorrelationOrder) : mom_(&mom), max_order_(max_order) {}

    double moment(std::vector<int> modes) {
        std::sort(modes.begin(), modes.end());
        auto it = memo_.find(modes);
        if (it != memo_.end()) return it->second;
        const double v = wick_moment(*mom_, modes, max_order_);
        memo_.emplace(std::move(modes), v);
        return v;
    }

    /// Order-k cumulant of the photon numbers at `modes`. Symmetric in its
    /// arguments bit for bit: the tuple is sorted before evaluation.
    double cumulant(std::span<const int> modes) {
        const int k = static_cast<int>(modes.size());
        if (k < 1) throw std::invalid_argument("cumulant: need at least one mode");
        if (k > max_order_) throw GuardError("cumulant: order " + std::to_string(k) + " exceeds guard " + std::to_string(max_order_));
        std::vector<int> sorted(modes.begin(), modes.end());
        std::sort(sorted.begin(), sorted.end());
        const auto &parts = partitions(k);
        double total = 0.0;
        std::vector<int> block_modes;
        for (const SetPartition &part : parts) {
            const int blocks = static_cast<int>(part.blocks.size());
            double term = (blocks % 2 == 1 ? 1.0 : -1.0) * factorial(blocks - 1);
            for (const auto &block : part.blocks) {
                block_modes.clear();
                for (int idx : block) block_modes.push_back(sorted[idx]);
                term *= moment(block_modes);
            }
            total += term;
        }
        return total;
    }

   private:
    static double factorial(int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    }

    const std::vector<SetPartition> &partitions(int k) {
        auto it = partitions_.find(k);
        if (it == partitions_.end()) it = partitions_.emplace(k, set_partitions(k)).first;
        return it->second;
    }

    const GaussianMoments *mom_;
    int max_order_;
    std::map<std::vector<int>, double> memo_;
    std::map<int, std::vector<SetPartition>> partitions_;
};

inline double cumulant(const GaussianMoments &mom, std::span<const int> modes, int max_order = kDefaultMaxCorrelationOrder) {
    CumulantEngine engine(mom, max_order);
    return engine.cumulant(modes);
}

/// Dense order-k tensor over mode tuples, first index most significant.
class CorrelationTensor {
   public:
    CorrelationTensor() = default;
    CorrelationTensor(int order, int modes) : order_(order), modes_(modes), values_(checked_size(order, modes), 0.0) {}

    int order() const { return order_; }
    int modes() const { return modes_; }
    std::size_t size() const { return values_.size(); }

    std::size_t index(std::span<const int> tuple) const {
        std::size_t idx = 0;
        for (int x : tuple) idx = idx * modes_ + static_cast<std::size_t>(x);
        return idx;
    }

    double operator()(std::span<const int> tuple) const { return values_[index(tuple)]; }
    double &operator()(std::span<const int> tuple) { return values_[index(tuple)]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// The (k-1)-dimensional block of entries whose first index is `i`.
    std::span<const double> slice(int i) const {
        const std::size_t stride = values_.size() / static_cast<std::size_t>(modes_);
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(i) * stride, stride);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    static std::uint64_t entry_count(int order, int modes) {
        std::uint64_t n = 1;
        for (int i = 0; i < order; ++i) {
            if (n > kMaxTensorEntries / static_cast<std::uint64_t>(std::max(modes, 1)) + 1) return kMaxTensorEntries + 1;
            n *= static_cast<std::uint64_t>(modes);
        }
        return n;
    }

   private:
    static std::size_t checked_size(int order, int modes) {
        if (order < 1 || modes < 1) throw std::invalid_argument("CorrelationTensor: order and modes must be positive");
        const auto n = entry_count(order, modes);
        if (n > kMaxTensorEntries) throw GuardError("CorrelationTensor: M^k exceeds " + std::to_string(kMaxTensorEntries) + " entries");
        return static_cast<std::size_t>(n);
    }

    int order_ = 0;
    int modes_ = 0;
    std::vector<double> values_;
};

/// Non-decreasing k-tuples over {0, ..., m-1} in lexicographic order.
inline std::vector<std::vector<int>> sorted_tuples(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(k, 0);
    while (true) {
        out.push_back(t);
        int i = k - 1;
        while (i >= 0 && t[i] == m - 1) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j < k; ++j) t[j] = t[i];
    }
    return out;
}

/// Order-k cumulant tensor. Each non-decreasing tuple is evaluated once and
/// copied to all of its rearrangements; work is split across `threads`
/// workers (0 = hardware concurrency), each with a private moment cache.
inline CorrelationTensor correlation_tensor(const GaussianMoments &mom, int k, int threads = 1, int max_order = kDefaultMaxCorrelationOrder) {
    if (k < 1) throw std::invalid_argument("correlation_tensor: k must be positive");
    if (k > max_order) throw GuardError("correlation_tensor: order " + std::to_string(k) + " exceeds guard " + std::to_string(max_order));
    const int m = mom.modes();
    CorrelationTensor tensor(k, m);
    const auto tuples = sorted_tuples(m, k);

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tuples.size())));

    auto work = [&](std::size_t begin, std::size_t end) {
        CumulantEngine engine(mom, max_order);
        std::vector<int> perm;
        for (std::size_t t = begin; t < end; ++t) {
            const double v = engine.cumulant(tuples[t]);
            perm = tuples[t];
            do tensor(perm) = v;
            while (std::next_permutation(perm.begin(), perm.end()));
        }
    };

    if (workers == 1) {
        work(0, tuples.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (tuples.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk, end = std::min(tuples.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
    }
    return tensor;
}

/// Probability of a collision-free click pattern (entries 0/1):
/// |Haf(B_S)|^2 / sqrt(det sigma_Q), with B = U diag(tanh r) U^T restricted
/// to the occupied modes and sigma_Q the Q-function covariance of the output.
inline double pattern_probability(const EncodedSampler &enc, std::span<const int> pattern) {
    const int m = enc.modes();
    if (static_cast<int>(pattern.size()) != m) throw std::invalid_argument("pattern_probability: pattern length must equal mode count");
    if (m > 10) throw GuardError("pattern_probability: at most 10 modes");
    std::vector<int> occupied;
    for (int x = 0; x < m; ++x) {
        if (pattern[x] == 1)
            occupied.push_back(x);
        else if (pattern[x] != 0)
            throw std::invalid_argument("pattern_probability: only collision-free 0/1 patterns are supported");
    }
    const Eigen::MatrixXcd kernel = enc.kernel();
    Eigen::MatrixXcd sub(occupied.size(), occupied.size());
    for (std::size_t i = 0; i < occupied.size(); ++i)
        for (std::size_t j = 0; j < occupied.size(); ++j) sub(i, j) = kernel(occupied[i], occupied[j]);
    const double haf = std::norm(hafnian(sub));

    // sigma_Q = [[I + N, E], [E, I + N]] for real N, E; its determinant
    // factors as det(I + N + E) det(I + N - E).
    const GaussianMoments mom = moments_from_sampler(enc);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    const double det_q = (id + mom.n + mom.e).determinant() * (id + mom.n - mom.e).determinant();
    return haf / std::sqrt(det_q);
}

}  // namespace gbsiso
