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

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gbsiso/graph.hpp"

namespace gbsiso {

/// Stable vertex coloring produced by 1-dimensional Weisfeiler-Leman.
struct Coloring {
    std::vector<int> colors;  ///< labels 0..classes-1
    int rounds = 0;           ///< refinement rounds that split at least one class

    int classes() const { return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1; }

    /// Class sizes indexed by color.
    std::vector<int> class_sizes() const {
        std::vector<int> sizes(classes(), 0);
        for (int c : colors) ++sizes[c];
        return sizes;
    }
};

namespace detail {

struct ColorSignature {
    int color;
    std::vector<std::pair<int, double>> neighbors;  // (color, weight), sorted
    friend auto operator<=>(const ColorSignature &, const ColorSignature &) = default;
};

// One round: new label = rank of (old color, sorted neighbor colors) among
// all signatures. Ranking by signature keeps labels isomorphism invariant.
inline std::vector<int> refine_colors(const Graph &g, const std::vector<int> &colors) {
    const int m = g.order();
    std::vector<ColorSignature> sig(m);
    for (int v = 0; v < m; ++v) {
        sig[v].color = colors[v];
        for (int u = 0; u < m; ++u)
            if (u != v && g(v, u) != 0.0) sig[v].neighbors.emplace_back(colors[u], g(v, u));
        std::sort(sig[v].neighbors.begin(), sig[v].neighbors.end());
    }
    std::map<ColorSignature, int> rank;
    for (const auto &s : sig) rank.emplace(s, 0);
    int next = 0;
    for (auto &[s, r] : rank) r = next++;
    std::vector<int> out(m);
    for (int v = 0; v < m; ++v) out[v] = rank[sig[v]];
    return out;
}

inline int count_classes(const std::vector<int> &colors) {
    std::vector<int> c = colors;
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
}

}  // namespace detail

/// Color refinement starting from `initial` (uniform when empty), iterated
/// until a round splits no class. Self loops seed the initial colors.
inline Coloring color_refinement(const Graph &g, std::vector<int> initial = {}) {
    const int m = g.order();
    std::vector<int> colors;
    if (initial.empty()) {
        std::map<double, int> diag;
        for (int v = 0; v < m; ++v) diag.emplace(g(v, v), 0);
        int next = 0;
        for (auto &[w, c] : diag) c = next++;
        for (int v = 0; v < m; ++v) colors.push_back(diag[g(v, v)]);
    } else {
        if (static_cast<int>(initial.size()) != m) throw std::invalid_argument("color_refinement: initial coloring size mismatch");
        colors = std::move(initial);
    }
    Coloring out;
    int classes = detail::count_classes(colors);
    // Normalize labels even when nothing splits.
    colors = detail::refine_colors(g, colors);
    if (detail::count_classes(colors) > classes) ++out.rounds;
    classes = detail::count_classes(colors);
    while (true) {
        auto next = detail::refine_colors(g, colors);
        const int next_classes = detail::count_classes(next);
        if (next_classes == classes) {
            out.colors = std::move(colors);
            return out;
        }
        colors = std::move(next);
        classes = next_classes;
        ++out.rounds;
    }
}

enum class Wl1Outcome { distinguished, indeterminate };

inline const char *to_string(Wl1Outcome o) { return o == Wl1Outcome::distinguished ? "distinguished" : "indeterminate"; }

/// 1-WL test: refine the disjoint union so both graphs share one palette,
/// then compare per-color vertex counts of the two halves.
inline Wl1Outcome wl1_compare(const Graph &g1, const Graph &g2) {
    if (g1.order() != g2.order()) return Wl1Outcome::distinguished;
    const int m = g1.order();
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    joint.topLeftCorner(m, m) = g1.adjacency();
    joint.bottomRightCorner(m, m) = g2.adjacency();
    const Coloring c = color_refinement(Graph(joint));
    std::vector<int> h1(c.classes(), 0), h2(c.classes(), 0);
    for (int v = 0; v < m; ++v) {
        ++h1[c.colors[v]];
        ++h2[c.colors[m + v]];
    }
    return h1 == h2 ? Wl1Outcome::indeterminate : Wl1Outcome::distinguished;
}

// ---------------------------------------------------------------------------
// Named graphs

/// Cayley graph on Z4 x Z4 with connection set {+-(1,0), +-(0,1), +-(1,1)}.
inline Graph shrikhande_graph() {
    Graph g(16, "shrikhande");
    const int steps[3][2] = {{1, 0}, {0, 1}, {1, 1}};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (const auto &s : steps) g.set_edge(4 * a + b, 4 * ((a + s[0]) % 4) + (b + s[1]) % 4);
    return g;
}

/// 4x4 rook's graph: cells sharing a row or a column are adjacent.
inline Graph rook4_graph() {
    Graph g(16, "rook4");
    for (int u = 0; u < 16; ++u)
        for (int v = u + 1; v < 16; ++v)
            if (u / 4 == v / 4 || u % 4 == v % 4) g.set_edge(u, v);
    return g;
}

/// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
inline Graph petersen_graph() {
    Graph g(10, "petersen");
    for (int i = 0; i < 5; ++i) {
        g.set_edge(i, (i + 1) % 5);
        g.set_edge(5 + i, 5 + (i + 2) % 5);
        g.set_edge(i, i + 5);
    }
    return g;
}

inline std::vector<std::string> fixture_names() { return {"shrikhande", "rook4", "star5", "c4k1", "petersen", "k3", "p3"}; }

inline Graph fixture(const std::string &name) {
    if (name == "shrikhande") return shrikhande_graph();
    if (name == "rook4") return rook4_graph();
    if (name == "petersen") return petersen_graph();
    if (name == "star5") {
        Graph g = generate(GraphModel::star(), 5, 0);
        g.set_label(name);
        return g;
    }
    if (name == "c4k1") {
        Graph g(5, name);
        for (int i = 0; i < 4; ++i) g.set_edge(i, (i + 1) % 4);
        return g;
    }
    if (name == "k3") {
        Graph g = generate(GraphModel::complete(), 3, 0);
        g.set_label(name);
        return g;
    }
    if (name == "p3") {
        Graph g = generate(GraphModel::path(), 3, 0);
        g.set_label(name);
        return g;
    }
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace gbsiso
