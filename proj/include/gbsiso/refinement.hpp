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

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gbsiso/combinatorics.hpp"
#include "gbsiso/correlations.hpp"
#include "gbsiso/errors.hpp"
#include "gbsiso/graph.hpp"

namespace gbsiso {

using BigCount = boost::multiprecision::cpp_int;

/// Binary matrix of vertex mappings (row: vertex of G1, column: vertex of G2)
/// that have not been ruled out.
class CandidateMatrix {
   public:
    CandidateMatrix() = default;
    explicit CandidateMatrix(int m, bool fill = true) : m_(m), bits_(static_cast<std::size_t>(m) * m, fill ? 1 : 0) {}

    static CandidateMatrix all_ones(int m) { return CandidateMatrix(m, true); }
    static CandidateMatrix identity(int m) {
        CandidateMatrix c(m, false);
        for (int i = 0; i < m; ++i) c.set(i, i, true);
        return c;
    }
    static CandidateMatrix from_rows(const std::vector<std::vector<int>> &rows) {
        CandidateMatrix c(static_cast<int>(rows.size()), false);
        for (int i = 0; i < c.m_; ++i) {
            if (static_cast<int>(rows[i].size()) != c.m_) throw std::invalid_argument("CandidateMatrix: rows must be square");
            for (int j = 0; j < c.m_; ++j) c.set(i, j, rows[i][j] != 0);
        }
        return c;
    }

    int size() const { return m_; }
    bool operator()(int i, int j) const { return bits_[static_cast<std::size_t>(i) * m_ + j] != 0; }
    void set(int i, int j, bool v) { bits_[static_cast<std::size_t>(i) * m_ + j] = v ? 1 : 0; }

    int row_sum(int i) const {
        int s = 0;
        for (int j = 0; j < m_; ++j) s += (*this)(i, j);
        return s;
    }
    int col_sum(int j) const {
        int s = 0;
        for (int i = 0; i < m_; ++i) s += (*this)(i, j);
        return s;
    }
    int popcount() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

    std::vector<std::vector<int>> rows() const {
        std::vector<std::vector<int>> out(m_, std::vector<int>(m_));
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) out[i][j] = (*this)(i, j);
        return out;
    }

    friend bool operator==(const CandidateMatrix &, const CandidateMatrix &) = default;

   private:
    int m_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Integer keys round(v / tau).
inline std::vector<std::int64_t> quantize(std::span<const double> values, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("quantize: tau must be positive");
    std::vector<std::int64_t> keys;
    keys.reserve(values.size());
    for (double v : values) keys.push_back(std::llround(v / tau));
    return keys;
}

/// Equality threshold for one order: tau_rel times the largest magnitude in
/// either tensor (tau_rel itself when both tensors vanish).
inline double comparison_tolerance(const CorrelationTensor &c1, const CorrelationTensor &c2, double tau_rel) {
    const double scale = std::max(c1.max_abs(), c2.max_abs());
    return scale > 0.0 ? tau_rel * scale : tau_rel;
}

/// Sorted lists that agree elementwise within tau. Two multisets related by
/// a bijection moving no value by more than tau always pass this test.
inline bool same_multiset(std::span<const double> a, std::span<const double> b, double tau) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tau) return false;
    return true;
}

/// Keeps sigma(i, j) only if slice i of c1 and slice j of c2 hold the same
/// multiset of values.
inline CandidateMatrix refine(const CorrelationTensor &c1, const CorrelationTensor &c2, const CandidateMatrix &sigma_prev, double tau) {
    if (c1.order() != c2.order() || c1.modes() != c2.modes() || sigma_prev.size() != c1.modes())
        throw std::invalid_argument("refine: tensor or candidate shapes disagree");
    const int m = c1.modes();
    auto sorted_slices = [m](const CorrelationTensor &c) {
        std::vector<std::vector<double>> out(m);
        for (int i = 0; i < m; ++i) {
            auto s = c.slice(i);
            out[i].assign(s.begin(), s.end());
            std::sort(out[i].begin(), out[i].end());
        }
        return out;
    };
    const auto s1 = sorted_slices(c1), s2 = sorted_slices(c2);
    CandidateMatrix next(m, false);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (sigma_prev(i, j)) next.set(i, j, same_multiset(s1[i], s2[j], tau));
    return next;
}

inline constexpr int kMaxExactPermanent = 24;

/// Permanent of a 0/1 matrix by Glynn's formula in Gray-code order.
///
/// The running sum is kept modulo 2^128; the true sum 2^(n-1) perm(B) fits
/// in 127 bits for n <= 24, so the wrapped result is exact.
inline BigCount exact_permanent(const CandidateMatrix &b) {
    const int n = b.size();
    if (n > kMaxExactPermanent) throw GuardError("exact_permanent: order exceeds " + std::to_string(kMaxExactPermanent));
    if (n == 0) return 1;

    using i128 = __int128;
    using u128 = unsigned __int128;
    std::vector<i128> col(n, 0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) col[j] += b(i, j);
    std::vector<int> delta(n, 1);

    auto product = [&]() {
        i128 p = 1;
        for (int j = 0; j < n && p != 0; ++j) p *= col[j];
        return p;
    };

    u128 total = static_cast<u128>(product());
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    int sign = 1;
    for (std::uint64_t g = 1; g < steps; ++g) {
        const int row = 1 + std::countr_zero(g);
        delta[row] = -delta[row];
        for (int j = 0; j < n; ++j)
            if (b(row, j)) col[j] += 2 * delta[row];
        sign = -sign;
        const i128 p = product();
        total += static_cast<u128>(sign > 0 ? p : -p);
    }
    const i128 signed_total = static_cast<i128>(total);
    const i128 perm = signed_total >> (n - 1);

    BigCount out = 0;
    u128 mag = static_cast<u128>(perm);
    BigCount place = 1;
    while (mag != 0) {
        out += place * static_cast<std::uint64_t>(mag & 0xFFFFFFFFFFFFFFFFull);
        mag >>= 64;
        place <<= 64;
    }
    return out;
}

/// Bregman upper bound prod_i (r_i!)^(1/r_i), rounded up.
inline BigCount count_bound(const CandidateMatrix &sigma) {
    long double log_bound = 0.0L;
    for (int i = 0; i < sigma.size(); ++i) {
        const int r = sigma.row_sum(i);
        if (r == 0) return 0;
        log_bound += std::lgamma(static_cast<long double>(r) + 1.0L) / r;
    }
    const long double x = std::exp(log_bound);
    const long double nearest = std::round(x);
    const long double bound = std::abs(x - nearest) <= 1e-9L * x ? nearest : std::ceil(x);
    // Split into 2^32 limbs so values beyond 2^64 survive the conversion.
    BigCount out = 0;
    long double rest = bound;
    int shift = 0;
    while (rest >= 0x1p32L) {
        rest = std::ldexp(rest, -32);
        shift += 32;
    }
    for (; shift >= 0; shift -= 32) {
        const long double limb = std::floor(rest);
        out = (out << 32) + static_cast<std::uint64_t>(limb);
        rest = std::ldexp(rest - limb, 32);
    }
    return out;
}

/// Decides when enumerating the surviving permutations is cheaper than
/// building the next correlation order.
///
/// Enumeration costs count * M^2 * verify_weight; order k costs
/// M^k * Bell(k) * (2k-1)!! * kernel_weight cumulant-kernel terms.
struct CostModel {
    std::uint64_t verify_weight = 1;
    std::uint64_t kernel_weight = 1;

    BigCount next_order_cost(int k, int m) const {
        BigCount c = kernel_weight;
        for (int i = 0; i < k; ++i) c *= m;
        return c * bell_number(k) * double_factorial_odd(k);
    }

    BigCount enumeration_cost(const BigCount &count, int m) const { return count * m * m * verify_weight; }
};

struct SigmaStatus {
    enum class Tag { invalid, valid, indeterminate_above, indeterminate_below };
    Tag tag = Tag::invalid;
    Permutation witness;  ///< valid only
    BigCount count = 0;   ///< indeterminate only: permutations inside sigma (or an upper bound)
    bool exact_count = false;
};

inline const char *to_string(SigmaStatus::Tag t) {
    switch (t) {
        case SigmaStatus::Tag::invalid: return "invalid";
        case SigmaStatus::Tag::valid: return "valid";
        case SigmaStatus::Tag::indeterminate_above: return "indeterminate_above";
        case SigmaStatus::Tag::indeterminate_below: return "indeterminate_below";
    }
    return "?";
}

/// Surviving permutation count: exact up to kMaxExactPermanent, bounded above that.
inline std::pair<BigCount, bool> surviving_count(const CandidateMatrix &sigma) {
    if (sigma.size() <= kMaxExactPermanent) return {exact_permanent(sigma), true};
    return {count_bound(sigma), false};
}

inline SigmaStatus classify(const CandidateMatrix &sigma, int k, const CostModel &budget = {}) {
    const int m = sigma.size();
    SigmaStatus status;
    bool unique = true;
    for (int i = 0; i < m; ++i) {
        const int r = sigma.row_sum(i), c = sigma.col_sum(i);
        if (r == 0 || c == 0) return status;
        unique = unique && r == 1 && c == 1;
    }
    if (unique) {
        status.tag = SigmaStatus::Tag::valid;
        status.witness.assign(m, -1);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (sigma(i, j)) status.witness[i] = j;
        status.count = 1;
        status.exact_count = true;
        return status;
    }
    std::tie(status.count, status.exact_count) = surviving_count(sigma);
    status.tag = budget.enumeration_cost(status.count, m) <= budget.next_order_cost(k + 1, m) ? SigmaStatus::Tag::indeterminate_below
                                                                                             : SigmaStatus::Tag::indeterminate_above;
    return status;
}

struct EnumerationResult {
    enum class Outcome { found, exhausted, cap_exceeded };
    Outcome outcome = Outcome::exhausted;
    Permutation witness;
    std::uint64_t nodes = 0;       ///< partial assignments tried
    std::uint64_t candidates = 0;  ///< complete permutations reached
};

/// Backtracking over permutations inside sigma's support. Each partial
/// assignment must already agree with both adjacency matrices; at most
/// `cap` partial assignments are tried.
inline EnumerationResult enumerate_and_verify(const CandidateMatrix &sigma, const Graph &g1, const Graph &g2, std::uint64_t cap) {
    const int m = sigma.size();
    if (g1.order() != m || g2.order() != m) throw std::invalid_argument("enumerate_and_verify: size mismatch");
    EnumerationResult result;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma.row_sum(a) < sigma.row_sum(b); });

    Permutation p(m, -1);
    std::vector<char> used(m, 0);
    bool aborted = false;
    auto extend = [&](auto &&self, int depth) -> bool {
        if (depth == m) {
            ++result.candidates;
            return true;
        }
        const int u = order[depth];
        for (int v = 0; v < m; ++v) {
            if (!sigma(u, v) || used[v]) continue;
            if (++result.nodes > cap) {
                aborted = true;
                return false;
            }
            if (!entries_match(g1(u, u), g2(v, v))) continue;
            bool consistent = true;
            for (int d = 0; d < depth && consistent; ++d) consistent = entries_match(g1(u, order[d]), g2(v, p[order[d]]));
            if (!consistent) continue;
            p[u] = v;
            used[v] = 1;
            if (self(self, depth + 1)) return true;
            if (aborted) return false;
            used[v] = 0;
            p[u] = -1;
        }
        return false;
    };
    if (extend(extend, 0)) {
        result.outcome = EnumerationResult::Outcome::found;
        result.witness = p;
    } else {
        result.outcome = aborted ? EnumerationResult::Outcome::cap_exceeded : EnumerationResult::Outcome::exhausted;
    }
    return result;
}

}  // namespace gbsiso
