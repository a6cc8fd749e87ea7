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

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gbsiso/baselines.hpp"
#include "gbsiso/correlations.hpp"
#include "gbsiso/encoding.hpp"
#include "gbsiso/errors.hpp"
#include "gbsiso/graph.hpp"
#include "gbsiso/refinement.hpp"
#include "gbsiso/version.hpp"

namespace gbsiso {

struct Config {
    int kmax = 3;
    double alpha = 0.9;
    double tau_rel = 1e-9;
    std::uint64_t enum_cap = 1'000'000;
    int threads = 1;  ///< 0 = hardware concurrency
    std::uint64_t seed = 0;
    double spectral_tol = 1e-9;
    int max_order = kDefaultMaxCorrelationOrder;
    CostModel cost;
    bool record_timings = false;

    void validate() const {
        if (kmax < 1) throw std::invalid_argument("kmax must be at least 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
        if (!(tau_rel > 0.0)) throw std::invalid_argument("tau_rel must be positive");
        if (enum_cap < 1) throw std::invalid_argument("enum_cap must be positive");
        if (threads < 0) throw std::invalid_argument("threads must be non-negative");
        if (!(spectral_tol >= 0.0)) throw std::invalid_argument("spectral_tol must be non-negative");
        if (max_order < 1) throw std::invalid_argument("max_order must be positive");
        if (cost.verify_weight < 1 || cost.kernel_weight < 1) throw std::invalid_argument("cost weights must be positive");
    }
};

struct TraceEntry {
    int k = 0;
    int sigma_popcount = 0;
    std::string classify;
    BigCount count = 0;
    double millis = 0.0;
};

struct Verdict {
    enum class Tag { not_isomorphic, isomorphic, indeterminate };
    Tag tag = Tag::indeterminate;
    std::string reason;
    int order = 0;  ///< correlation order at which the verdict was reached (0: before encoding)
    std::optional<Permutation> witness;
    BigCount surviving_count_bound = 0;  ///< indeterminate only
    std::string diagnostic;
    std::vector<TraceEntry> trace;

    bool definite() const { return tag != Tag::indeterminate; }
};

inline const char *to_string(Verdict::Tag t) {
    switch (t) {
        case Verdict::Tag::not_isomorphic: return "NOT_ISOMORPHIC";
        case Verdict::Tag::isomorphic: return "ISOMORPHIC";
        case Verdict::Tag::indeterminate: return "INDETERMINATE";
    }
    return "?";
}

/// Process exit code for a verdict: 0 definite, 2 indeterminate.
inline int exit_code(const Verdict &v) { return v.definite() ? 0 : 2; }

namespace detail {

inline Verdict make_verdict(Verdict::Tag tag, std::string reason, int order) {
    Verdict v;
    v.tag = tag;
    v.reason = std::move(reason);
    v.order = order;
    return v;
}

}  // namespace detail

/// Sampler-encoded isomorphism test.
///
/// Spectral gate, shared rescale and encoding, then for k = 1..kmax: build
/// both order-k cumulant tensors, refine the candidate matrix and classify
/// it. A unique candidate is verified against the adjacency matrices; a
/// small candidate set is enumerated; otherwise the order is raised. After
/// kmax a capped enumeration decides or the verdict stays indeterminate.
inline Verdict run(const Graph &g1, const Graph &g2, const Config &config = {}) {
    using Tag = Verdict::Tag;
    using Clock = std::chrono::steady_clock;
    config.validate();

    if (g1.order() != g2.order()) return detail::make_verdict(Tag::not_isomorphic, "order_mismatch", 0);
    if (!spectral_gate(g1, g2, config.spectral_tol)) return detail::make_verdict(Tag::not_isomorphic, "spectral_gate", 0);

    const int m = g1.order();
    const double c = shared_scale(g1.adjacency(), g2.adjacency(), config.alpha);
    const EncodedSampler enc1 = takagi(c * g1.adjacency(), c);
    const EncodedSampler enc2 = takagi(c * g2.adjacency(), c);
    const GaussianMoments mom1 = moments_from_sampler(enc1);
    const GaussianMoments mom2 = moments_from_sampler(enc2);

    Verdict out;
    CandidateMatrix sigma = CandidateMatrix::all_ones(m);
    BigCount last_count = 0;

    auto finish = [&](Tag tag, std::string reason, int order) {
        out.tag = tag;
        out.reason = std::move(reason);
        out.order = order;
        return out;
    };
    auto verified = [&](const Permutation &p, int order, const char *reason) {
        if (!verify_isomorphism(g1, g2, p)) return finish(Tag::not_isomorphic, "witness_rejected", order);
        out.witness = p;
        return finish(Tag::isomorphic, reason, order);
    };

    int reached = 0;
    for (int k = 1; k <= config.kmax; ++k) {
        const auto start = Clock::now();
        CorrelationTensor t1, t2;
        try {
            t1 = correlation_tensor(mom1, k, config.threads, config.max_order);
            t2 = correlation_tensor(mom2, k, config.threads, config.max_order);
        } catch (const GuardError &e) {
            out.diagnostic = e.what();
            if (k == 1) last_count = surviving_count(sigma).first;
            out.surviving_count_bound = last_count;
            return finish(Tag::indeterminate, "order_guard", reached);
        }
        reached = k;
        sigma = refine(t1, t2, sigma, comparison_tolerance(t1, t2, config.tau_rel));
        const SigmaStatus status = classify(sigma, k, config.cost);
        last_count = status.count;

        TraceEntry entry;
        entry.k = k;
        entry.sigma_popcount = sigma.popcount();
        entry.classify = to_string(status.tag);
        entry.count = status.count;
        entry.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        out.trace.push_back(entry);

        switch (status.tag) {
            case SigmaStatus::Tag::invalid:
                return finish(Tag::not_isomorphic, "invalid_sigma", k);
            case SigmaStatus::Tag::valid:
                return verified(status.witness, k, "unique_sigma");
            case SigmaStatus::Tag::indeterminate_below: {
                const auto e = enumerate_and_verify(sigma, g1, g2, config.enum_cap);
                if (e.outcome == EnumerationResult::Outcome::found) return verified(e.witness, k, "enumeration");
                if (e.outcome == EnumerationResult::Outcome::exhausted) return finish(Tag::not_isomorphic, "enumeration_exhausted", k);
                break;  // cap exceeded: keep refining
            }
            case SigmaStatus::Tag::indeterminate_above:
                break;
        }
    }

    const auto e = enumerate_and_verify(sigma, g1, g2, config.enum_cap);
    if (e.outcome == EnumerationResult::Outcome::found) return verified(e.witness, reached, "enumeration");
    if (e.outcome == EnumerationResult::Outcome::exhausted) return finish(Tag::not_isomorphic, "enumeration_exhausted", reached);
    out.surviving_count_bound = last_count;
    return finish(Tag::indeterminate, "enumeration_cap", reached);
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::ordered_json to_json(const Config &c) {
    return {{"kmax", c.kmax},
            {"alpha", c.alpha},
            {"tau_rel", c.tau_rel},
            {"enum_cap", c.enum_cap},
            {"threads", c.threads},
            {"seed", c.seed},
            {"spectral_tol", c.spectral_tol},
            {"max_order", c.max_order},
            {"verify_weight", c.cost.verify_weight},
            {"kernel_weight", c.cost.kernel_weight}};
}

inline nlohmann::ordered_json versions_json() {
    return {{"gbsiso", kVersion}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION)}};
}

/// Report object. Timings appear only when config.record_timings is set,
/// so default reports are byte-identical across runs.
inline nlohmann::ordered_json to_json(const Verdict &v, const Config &config) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(v.tag);
    j["reason"] = v.reason;
    j["order"] = v.order;
    if (v.witness) j["witness"] = *v.witness;
    if (v.tag == Verdict::Tag::indeterminate) j["surviving_count_bound"] = v.surviving_count_bound.str();
    if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
    auto trace = nlohmann::ordered_json::array();
    for (const auto &t : v.trace) {
        nlohmann::ordered_json e{{"k", t.k}, {"sigma_popcount", t.sigma_popcount}, {"classify", t.classify}, {"count", t.count.str()}};
        if (config.record_timings) e["millis"] = t.millis;
        trace.push_back(std::move(e));
    }
    j["trace"] = std::move(trace);
    j["config"] = to_json(config);
    j["versions"] = versions_json();
    return j;
}

// ---------------------------------------------------------------------------
// Corpus runs

struct CorpusPair {
    std::string id;
    Graph g1, g2;
    std::optional<bool> isomorphic;  ///< ground truth when known
};

struct PairResult {
    std::string id;
    std::optional<Verdict> verdict;
    std::string error;
    double millis = 0.0;
    std::optional<bool> expected;
    std::optional<Wl1Outcome> wl1;
};

struct CorpusOptions {
    bool wl1_baseline = false;
    int workers = 1;  ///< pairs run concurrently
};

/// One verdict per pair; failures are recorded per pair and the run continues.
inline std::vector<PairResult> run_corpus(const std::vector<CorpusPair> &pairs, const Config &config, const CorpusOptions &options = {}) {
    std::vector<PairResult> results(pairs.size());
    auto one = [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        PairResult &r = results[i];
        r.id = pairs[i].id;
        r.expected = pairs[i].isomorphic;
        try {
            r.verdict = run(pairs[i].g1, pairs[i].g2, config);
        } catch (const std::exception &e) {
            r.error = e.what();
        }
        if (options.wl1_baseline) r.wl1 = wl1_compare(pairs[i].g1, pairs[i].g2);
        r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };
    const unsigned workers = std::max(1, options.workers);
    if (workers == 1 || pairs.size() < 2) {
        for (std::size_t i = 0; i < pairs.size(); ++i) one(i);
    } else {
        std::mutex mu;
        std::size_t next = 0;
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i;
                    {
                        std::lock_guard lock(mu);
                        if (next >= pairs.size()) return;
                        i = next++;
                    }
                    one(i);
                }
            });
    }
    return results;
}

/// Per-pair records plus agreement counts against ground truth and 1-WL.
inline nlohmann::ordered_json corpus_report(const std::vector<PairResult> &results, const Config &config) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    int iso = 0, non_iso = 0, indeterminate = 0, errors = 0;
    int correct = 0, wrong = 0, judged = 0;
    int wl1_distinguished = 0, corr_only = 0, wl1_only = 0;
    for (const auto &r : results) {
        nlohmann::ordered_json p;
        p["id"] = r.id;
        if (r.verdict) {
            p["verdict"] = to_string(r.verdict->tag);
            p["reason"] = r.verdict->reason;
            p["order"] = r.verdict->order;
            switch (r.verdict->tag) {
                case Verdict::Tag::isomorphic: ++iso; break;
                case Verdict::Tag::not_isomorphic: ++non_iso; break;
                case Verdict::Tag::indeterminate: ++indeterminate; break;
            }
        } else {
            p["error"] = r.error;
            ++errors;
        }
        if (r.expected) {
            p["expected"] = *r.expected ? "ISOMORPHIC" : "NOT_ISOMORPHIC";
            if (r.verdict && r.verdict->definite()) {
                ++judged;
                const bool said_iso = r.verdict->tag == Verdict::Tag::isomorphic;
                (said_iso == *r.expected ? correct : wrong)++;
            }
        }
        if (r.wl1) {
            p["wl1"] = to_string(*r.wl1);
            const bool wl = *r.wl1 == Wl1Outcome::distinguished;
            const bool corr = r.verdict && r.verdict->tag == Verdict::Tag::not_isomorphic;
            wl1_distinguished += wl;
            corr_only += corr && !wl;
            wl1_only += wl && !corr;
        }
        if (config.record_timings) p["millis"] = r.millis;
        pairs.push_back(std::move(p));
    }
    nlohmann::ordered_json j;
    j["pairs"] = std::move(pairs);
    j["summary"] = {{"total", results.size()},
                    {"isomorphic", iso},
                    {"not_isomorphic", non_iso},
                    {"indeterminate", indeterminate},
                    {"errors", errors},
                    {"ground_truth", {{"judged", judged}, {"correct", correct}, {"wrong", wrong}}},
                    {"wl1", {{"distinguished", wl1_distinguished}, {"correlation_only", corr_only}, {"wl1_only", wl1_only}}}};
    j["config"] = to_json(config);
    j["versions"] = versions_json();
    return j;
}

}  // namespace gbsiso
