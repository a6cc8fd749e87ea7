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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gbsiso/errors.hpp"

namespace gbsiso {

/// Partition of {0, ..., k-1} into non-empty disjoint blocks.
struct SetPartition {
    std::vector<std::vector<int>> blocks;
};

/// Partition of {0, ..., 2n-1} into pairs, each stored (smaller, larger).
struct PerfectMatching {
    std::vector<std::pair<int, int>> pairs;
};

inline constexpr int kMaxPartitionSize = 12;
inline constexpr int kMaxMatchingSize = 20;

inline std::uint64_t bell_number(int k) {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 0; i < k; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

/// (2n-1)!!, with (-1)!! = 1.
inline std::uint64_t double_factorial_odd(int n) {
    std::uint64_t out = 1;
    for (int i = 2 * n - 1; i > 1; i -= 2) out *= static_cast<std::uint64_t>(i);
    return out;
}

/// All set partitions of k elements in restricted-growth-string order.
inline std::vector<SetPartition> set_partitions(int k) {
    if (k < 1 || k > kMaxPartitionSize) throw GuardError("set_partitions: k must lie in 1.." + std::to_string(kMaxPartitionSize));
    std::vector<SetPartition> out;
    std::vector<int> rgs(k, 0), prefix_max(k, 0);
    while (true) {
        SetPartition part;
        for (int i = 0; i < k; ++i) {
            if (rgs[i] >= static_cast<int>(part.blocks.size())) part.blocks.resize(rgs[i] + 1);
            part.blocks[rgs[i]].push_back(i);
        }
        out.push_back(std::move(part));

        int i = k - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
        if (i == 0) break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int j = i + 1; j < k; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
    return out;
}

/// All perfect matchings of n2 elements (n2 even). The first free element is
/// always paired first, so the order is lexicographic in the pair list.
inline std::vector<PerfectMatching> perfect_matchings(int n2) {
    if (n2 < 0 || n2 % 2 != 0) throw std::invalid_argument("perfect_matchings: size must be even and non-negative");
    if (n2 > kMaxMatchingSize) throw GuardError("perfect_matchings: size exceeds " + std::to_string(kMaxMatchingSize));
    std::vector<PerfectMatching> out;
    std::vector<char> used(n2, 0);
    PerfectMatching current;
    auto recurse = [&](auto &&self) -> void {
        int first = 0;
        while (first < n2 && used[first]) ++first;
        if (first == n2) {
            out.push_back(current);
            return;
        }
        used[first] = 1;
        for (int second = first + 1; second < n2; ++second) {
            if (used[second]) continue;
            used[second] = 1;
            current.pairs.emplace_back(first, second);
            self(self);
            current.pairs.pop_back();
            used[second] = 0;
        }
        used[first] = 0;
    };
    recurse(recurse);
    return out;
}

namespace detail {

template <class Derived>
typename Derived::Scalar hafnian_recursive(const Eigen::MatrixBase<Derived> &a, std::vector<int> &free) {
    using Scalar = typename Derived::Scalar;
    if (free.empty()) return Scalar(1);
    const int first = free.front();
    Scalar total(0);
    for (std::size_t s = 1; s < free.size(); ++s) {
        const int second = free[s];
        const Scalar w = a(first, second);
        if (w == Scalar(0)) continue;
        std::vector<int> rest;
        rest.reserve(free.size() - 2);
        for (std::size_t t = 1; t < free.size(); ++t)
            if (t != s) rest.push_back(free[t]);
        total += w * hafnian_recursive(a, rest);
    }
    return total;
}

}  // namespace detail

/// Sum over perfect matchings of the product of matched entries, reading
/// a(i, j) with i < j. Odd dimension gives 0, dimension 0 gives 1.
template <class Derived>
typename Derived::Scalar hafnian(const Eigen::MatrixBase<Derived> &a) {
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw std::invalid_argument("hafnian: matrix must be square");
    const int n = static_cast<int>(a.rows());
    if (n % 2 != 0) return Scalar(0);
    if (n > kMaxMatchingSize) throw GuardError("hafnian: dimension exceeds " + std::to_string(kMaxMatchingSize));
    std::vector<int> free(n);
    for (int i = 0; i < n; ++i) free[i] = i;
    return detail::hafnian_recursive(a, free);
}

}  // namespace gbsiso
