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
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gbsiso/errors.hpp"

namespace gbsiso {

/// Vertex relabeling: `perm[i]` is the image of vertex i.
using Permutation = std::vector<int>;

/// Undirected graph stored as a dense symmetric adjacency matrix.
///
/// Entries may be arbitrary reals (weighted graphs, self loops); a graph is
/// "simple" when every entry is 0 or 1 and the diagonal is zero.
class Graph {
   public:
    Graph() = default;

    explicit Graph(int order, std::string label = {}) : adjacency_(Eigen::MatrixXd::Zero(order, order)), label_(std::move(label)) {
        if (order < 1) throw std::invalid_argument("graph order must be at least 1");
    }

    explicit Graph(Eigen::MatrixXd adjacency, std::string label = {}) : adjacency_(std::move(adjacency)), label_(std::move(label)) {
        if (adjacency_.rows() < 1 || adjacency_.rows() != adjacency_.cols())
            throw std::invalid_argument("adjacency matrix must be square and non-empty");
        if (!(adjacency_.array() == adjacency_.transpose().array()).all())
            throw std::invalid_argument("adjacency matrix must be symmetric");
        if (!adjacency_.allFinite()) throw std::invalid_argument("adjacency matrix has non-finite entries");
    }

    int order() const { return static_cast<int>(adjacency_.rows()); }
    const Eigen::MatrixXd &adjacency() const { return adjacency_; }
    double operator()(int i, int j) const { return adjacency_(i, j); }

    void set_edge(int i, int j, double weight = 1.0) {
        adjacency_(i, j) = weight;
        adjacency_(j, i) = weight;
    }

    const std::string &label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    bool is_simple() const {
        for (int i = 0; i < order(); ++i) {
            if (adjacency_(i, i) != 0.0) return false;
            for (int j = i + 1; j < order(); ++j)
                if (adjacency_(i, j) != 0.0 && adjacency_(i, j) != 1.0) return false;
        }
        return true;
    }

    bool is_zero() const { return (adjacency_.array() == 0.0).all(); }

    /// Number of non-zero entries on or above the diagonal.
    int edge_count() const {
        int count = 0;
        for (int i = 0; i < order(); ++i)
            for (int j = i; j < order(); ++j) count += adjacency_(i, j) != 0.0;
        return count;
    }

    /// Number of non-zero entries in each row.
    std::vector<int> degrees() const {
        std::vector<int> deg(order(), 0);
        for (int i = 0; i < order(); ++i)
            for (int j = 0; j < order(); ++j) deg[i] += adjacency_(i, j) != 0.0;
        return deg;
    }

    friend bool operator==(const Graph &a, const Graph &b) {
        return a.order() == b.order() && (a.adjacency_.array() == b.adjacency_.array()).all();
    }

   private:
    Eigen::MatrixXd adjacency_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Permutations

inline Permutation identity_permutation(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

inline bool is_permutation(const Permutation &p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

inline Permutation inverse(const Permutation &p) {
    Permutation inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
    return inv;
}

/// Returns P A P^T, i.e. the matrix B with B(p[i], p[j]) = A(i, j).
inline Eigen::MatrixXd permute_matrix(const Eigen::MatrixXd &a, const Permutation &p) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out(p[i], p[j]) = a(i, j);
    return out;
}

inline Graph permute(const Graph &g, const Permutation &p) {
    if (static_cast<int>(p.size()) != g.order() || !is_permutation(p)) throw std::invalid_argument("not a permutation of the vertex set");
    return Graph(permute_matrix(g.adjacency(), p), g.label());
}

/// Entry equality used when checking witnesses: exact for 0/1 values, 1e-12 otherwise.
inline bool entries_match(double a, double b) { return a == b || std::abs(a - b) <= 1e-12; }

/// True iff g2(p[i], p[j]) == g1(i, j) for all i, j.
inline bool verify_isomorphism(const Graph &g1, const Graph &g2, const Permutation &p) {
    if (g1.order() != g2.order() || static_cast<int>(p.size()) != g1.order() || !is_permutation(p)) return false;
    for (int i = 0; i < g1.order(); ++i)
        for (int j = 0; j < g1.order(); ++j)
            if (!entries_match(g1(i, j), g2(p[i], p[j]))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// graph6

namespace detail {

inline void append_graph6_size(std::string &out, int n) {
    if (n <= 62) {
        out.push_back(static_cast<char>(n + 63));
    } else if (n <= 258047) {
        out.push_back(126);
        for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    } else {
        throw std::invalid_argument("graph6 emission supports at most 258047 vertices");
    }
}

}  // namespace detail

/// Decodes one graph6 line. An optional ">>graph6<<" prefix and trailing
/// whitespace are accepted.
inline Graph parse_graph6(std::string_view text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    std::size_t pos = 0;
    constexpr std::string_view kHeader = ">>graph6<<";
    if (text.substr(0, kHeader.size()) == kHeader) pos = kHeader.size();

    auto byte_at = [&](std::size_t i) -> int {
        if (i >= text.size()) throw ParseError("graph6: truncated input", i);
        int v = static_cast<unsigned char>(text[i]) - 63;
        if (v < 0 || v > 63) throw ParseError("graph6: byte outside printable range 63..126", i);
        return v;
    };

    int n = byte_at(pos);
    if (n == 63) {
        if (pos + 1 < text.size() && text[pos + 1] == '~') throw ParseError("graph6: 8-byte size form not supported", pos + 1);
        n = 0;
        for (int k = 1; k <= 3; ++k) n = (n << 6) | byte_at(pos + k);
        if (n < 63) throw ParseError("graph6: non-canonical long size form", pos);
        pos += 4;
    } else {
        pos += 1;
    }
    if (n < 1) throw ParseError("graph6: graph must have at least one vertex", pos - 1);

    const std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
    const std::size_t nbytes = (bits + 5) / 6;
    if (text.size() - pos != nbytes)
        throw ParseError("graph6: expected " + std::to_string(nbytes) + " data bytes, found " + std::to_string(text.size() - pos),
                         text.size() < pos + nbytes ? text.size() : pos + nbytes);

    Graph g(n);
    std::size_t bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            int byte = byte_at(pos + bit / 6);
            if ((byte >> (5 - bit % 6)) & 1) g.set_edge(i, j);
        }
    }
    if (nbytes > 0) {
        const std::size_t last = pos + nbytes - 1;
        const int pad = static_cast<int>(nbytes * 6 - bits);
        if (byte_at(last) & ((1 << pad) - 1)) throw ParseError("graph6: non-zero padding bits", last);
    }
    return g;
}

inline std::string emit_graph6(const Graph &g) {
    if (!g.is_simple()) throw std::invalid_argument("graph6 can only encode simple graphs");
    const int n = g.order();
    std::string out;
    detail::append_graph6_size(out, n);
    int acc = 0, filled = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g(i, j) != 0.0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = filled = 0;
            }
        }
    }
    if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + 63));
    return out;
}

// ---------------------------------------------------------------------------
// Edge lists

struct EdgeListOptions {
    bool allow_self_loops = false;
};

/// First non-comment line is the vertex count; each following line is
/// "i j" or "i j w". Lines starting with '#' are ignored.
inline Graph parse_edge_list(std::string_view text, EdgeListOptions options = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t offset = 0, line_start = 0;
    std::optional<Graph> g;
    while (std::getline(in, line)) {
        line_start = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);

        auto to_int = [&](const std::string &s) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(s, &used);
            } catch (const std::exception &) {
                throw ParseError("edge list: expected integer, got '" + s + "'", line_start);
            }
            if (used != s.size()) throw ParseError("edge list: expected integer, got '" + s + "'", line_start);
            return v;
        };

        if (!g) {
            if (tok.size() != 1) throw ParseError("edge list: first line must hold the vertex count", line_start);
            int m = to_int(tok[0]);
            if (m < 1) throw ParseError("edge list: vertex count must be positive", line_start);
            g.emplace(m);
            continue;
        }
        if (tok.size() != 2 && tok.size() != 3) throw ParseError("edge list: expected 'i j [w]'", line_start);
        int i = to_int(tok[0]), j = to_int(tok[1]);
        if (i < 0 || j < 0 || i >= g->order() || j >= g->order())
            throw ParseError("edge list: vertex index out of range", line_start);
        if (i == j && !options.allow_self_loops) throw ParseError("edge list: self loop in simple mode", line_start);
        double w = 1.0;
        if (tok.size() == 3) {
            try {
                std::size_t used = 0;
                w = std::stod(tok[2], &used);
                if (used != tok[2].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception &) {
                throw ParseError("edge list: bad weight '" + tok[2] + "'", line_start);
            }
            if (!std::isfinite(w)) throw ParseError("edge list: non-finite weight", line_start);
        }
        g->set_edge(i, j, w);
    }
    if (!g) throw ParseError("edge list: missing vertex count", 0);
    return std::move(*g);
}

inline std::string emit_edge_list(const Graph &g) {
    std::ostringstream out;
    out.precision(17);
    out << g.order() << '\n';
    const bool simple = g.is_simple();
    for (int i = 0; i < g.order(); ++i)
        for (int j = i; j < g.order(); ++j) {
            if (g(i, j) == 0.0) continue;
            out << i << ' ' << j;
            if (!simple) out << ' ' << g(i, j);
            out << '\n';
        }
    return out.str();
}

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
    /// All M eigenvalues, sorted descending.
    std::vector<double> eigenvalues;

    struct Level {
        double value;
        int multiplicity;
    };

    /// Distinct eigenvalues (within `tol`) with multiplicities, descending.
    std::vector<Level> levels(double tol = 1e-9) const {
        std::vector<Level> out;
        for (double v : eigenvalues) {
            if (!out.empty() && std::abs(out.back().value - v) <= tol)
                ++out.back().multiplicity;
            else
                out.push_back({v, 1});
        }
        return out;
    }

    double radius() const {
        double r = 0.0;
        for (double v : eigenvalues) r = std::max(r, std::abs(v));
        return r;
    }
};

inline Spectrum spectrum(const Eigen::MatrixXd &a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
    const Eigen::MatrixXd &q = solver.eigenvectors();
    const double residual = (q * solver.eigenvalues().asDiagonal() * q.transpose() - a).cwiseAbs().maxCoeff();
    const double scale = a.cwiseAbs().maxCoeff();
    if (residual > 1e-10 * std::max(scale, 1.0)) throw NumericError("eigendecomposition residual too large");

    Spectrum s;
    s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

inline Spectrum spectrum(const Graph &g) { return spectrum(g.adjacency()); }

/// Isospectrality check: sorted spectra agree elementwise within `tol`.
inline bool spectral_gate(const Graph &g1, const Graph &g2, double tol = 1e-9) {
    if (g1.order() != g2.order()) return false;
    const auto s1 = spectrum(g1), s2 = spectrum(g2);
    for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i)
        if (std::abs(s1.eigenvalues[i] - s2.eigenvalues[i]) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random sources and generators

/// Deterministic 64-bit source. Conversions are spelled out rather than
/// delegated to <random> distributions so that streams match across
/// standard library implementations.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }

    template <class T>
    void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

   private:
    std::mt19937_64 engine_;
};

inline Permutation random_permutation(int n, Rng &rng) {
    Permutation p = identity_permutation(n);
    rng.shuffle(p);
    return p;
}

struct GraphModel {
    enum class Kind { erdos_renyi, random_regular, complete, path, cycle, star };
    Kind kind = Kind::erdos_renyi;
    double p = 0.5;  // erdos_renyi
    int degree = 3;  // random_regular

    static GraphModel erdos_renyi(double p) { return {Kind::erdos_renyi, p, 0}; }
    static GraphModel random_regular(int d) { return {Kind::random_regular, 0.0, d}; }
    static GraphModel complete() { return {Kind::complete, 0.0, 0}; }
    static GraphModel path() { return {Kind::path, 0.0, 0}; }
    static GraphModel cycle() { return {Kind::cycle, 0.0, 0}; }
    static GraphModel star() { return {Kind::star, 0.0, 0}; }
};

namespace detail {

// Pairing model with rejection of loops and multi-edges.
inline Graph random_regular_graph(int m, int d, Rng &rng) {
    if (d < 0 || d >= m || (static_cast<long>(d) * m) % 2 != 0)
        throw std::invalid_argument("random_regular: need 0 <= d < M and d*M even");
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(m) * d);
        for (int v = 0; v < m; ++v)
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        rng.shuffle(stubs);
        Graph g(m);
        bool ok = true;
        for (std::size_t s = 0; s + 1 < stubs.size() && ok; s += 2) {
            int a = stubs[s], b = stubs[s + 1];
            if (a == b || g(a, b) != 0.0)
                ok = false;
            else
                g.set_edge(a, b);
        }
        if (ok) return g;
    }
    throw std::invalid_argument("random_regular: failed to realize a simple graph");
}

}  // namespace detail

inline Graph generate(const GraphModel &model, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("generate: M must be positive");
    Rng rng(seed);
    Graph g(m);
    using K = GraphModel::Kind;
    switch (model.kind) {
        case K::erdos_renyi:
            if (!(model.p >= 0.0 && model.p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");
            for (int j = 1; j < m; ++j)
                for (int i = 0; i < j; ++i)
                    if (rng.uniform() < model.p) g.set_edge(i, j);
            return g;
        case K::random_regular:
            return detail::random_regular_graph(m, model.degree, rng);
        case K::complete:
            for (int j = 1; j < m; ++j)
                for (int i = 0; i < j; ++i) g.set_edge(i, j);
            return g;
        case K::path:
            for (int i = 0; i + 1 < m; ++i) g.set_edge(i, i + 1);
            return g;
        case K::cycle:
            if (m < 3) throw std::invalid_argument("cycle: M must be at least 3");
            for (int i = 0; i < m; ++i) g.set_edge(i, (i + 1) % m);
            return g;
        case K::star:
            for (int i = 1; i < m; ++i) g.set_edge(0, i);
            return g;
    }
    throw std::invalid_argument("generate: unknown model");
}

inline std::pair<Graph, Permutation> isomorphic_copy(const Graph &g, const Permutation &p) { return {permute(g, p), p}; }

inline std::pair<Graph, Permutation> isomorphic_copy(const Graph &g, std::uint64_t seed) {
    Rng rng(seed);
    return isomorphic_copy(g, random_permutation(g.order(), rng));
}

// ---------------------------------------------------------------------------
// Ground-truth isomorphism by backtracking

namespace detail {

struct VertexSignature {
    std::vector<double> row;            // sorted row entries
    std::vector<int> neighbor_degrees;  // sorted
    friend bool operator==(const VertexSignature &, const VertexSignature &) = default;
    friend auto operator<=>(const VertexSignature &, const VertexSignature &) = default;
};

inline std::vector<VertexSignature> vertex_signatures(const Graph &g) {
    const auto deg = g.degrees();
    std::vector<VertexSignature> sig(g.order());
    for (int v = 0; v < g.order(); ++v) {
        for (int u = 0; u < g.order(); ++u) {
            sig[v].row.push_back(g(v, u));
            if (g(v, u) != 0.0 && u != v) sig[v].neighbor_degrees.push_back(deg[u]);
        }
        std::sort(sig[v].row.begin(), sig[v].row.end());
        std::sort(sig[v].neighbor_degrees.begin(), sig[v].neighbor_degrees.end());
    }
    return sig;
}

}  // namespace detail

/// Exhaustive search for p with g2(p[i], p[j]) == g1(i, j). Vertices of g1
/// are assigned in order of decreasing degree; candidates must share the
/// (sorted row, neighbor degree multiset) signature.
inline std::optional<Permutation> brute_force_isomorphism(const Graph &g1, const Graph &g2, int max_order = 10) {
    if (g1.order() != g2.order()) return std::nullopt;
    const int m = g1.order();
    if (m > max_order) throw GuardError("brute_force_isomorphism: order " + std::to_string(m) + " exceeds guard " + std::to_string(max_order));

    const auto s1 = detail::vertex_signatures(g1), s2 = detail::vertex_signatures(g2);
    {
        auto a = s1, b = s2;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }

    std::vector<int> order = identity_permutation(m);
    const auto deg = g1.degrees();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (deg[a] != deg[b]) return deg[a] > deg[b];
        return s1[a].neighbor_degrees > s1[b].neighbor_degrees;
    });

    Permutation p(m, -1);
    std::vector<char> used(m, 0);
    auto extend = [&](auto &&self, int depth) -> bool {
        if (depth == m) return true;
        const int u = order[depth];
        for (int v = 0; v < m; ++v) {
            if (used[v] || !(s1[u] == s2[v])) continue;
            if (!entries_match(g1(u, u), g2(v, v))) continue;
            bool consistent = true;
            for (int d = 0; d < depth && consistent; ++d) {
                const int w = order[d];
                consistent = entries_match(g1(u, w), g2(v, p[w]));
            }
            if (!consistent) continue;
            p[u] = v;
            used[v] = 1;
            if (self(self, depth + 1)) return true;
            used[v] = 0;
            p[u] = -1;
        }
        return false;
    };
    if (extend(extend, 0)) return p;
    return std::nullopt;
}

}  // namespace gbsiso
