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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "gbsiso/gbsiso.hpp"

using namespace gbsiso;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, const std::string &name, bool ok, const std::string &detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << id << " " << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

// Half simple graphs, half dense real symmetric matrices with diagonal.
std::vector<Eigen::MatrixXd> random_matrices(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Eigen::MatrixXd> out;
    while (static_cast<int>(out.size()) < count) {
        const int m = 1 + static_cast<int>(rng.below(16));
        Eigen::MatrixXd a;
        if (out.size() % 2 == 0) {
            a = generate(GraphModel::erdos_renyi(0.2 + 0.6 * rng.uniform()), m, rng.next()).adjacency();
        } else {
            a.resize(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j) a(i, j) = a(j, i) = 2.0 * rng.uniform() - 1.0;
        }
        if (a.isZero(0.0)) continue;
        out.push_back(a);
    }
    return out;
}

std::complex<double> unitary_entry(const EncodedSampler &enc, int i, int j) { return enc.unitary(i, j); }

// k = 2 output correlator as the explicit double sum over input modes.
double double_sum(const EncodedSampler &enc, int x, int y) {
    const int m = enc.modes();
    std::complex<double> total = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double ra = enc.squeezing[a], rb = enc.squeezing[b];
            const double na = std::sinh(ra) * std::sinh(ra), nb = std::sinh(rb) * std::sinh(rb);
            const double ea = std::sinh(2 * ra) / 2, eb = std::sinh(2 * rb) / 2;
            const auto uxa = unitary_entry(enc, x, a), uya = unitary_entry(enc, y, a);
            const auto uxb = unitary_entry(enc, x, b), uyb = unitary_entry(enc, y, b);
            total += na * (nb + 1) * std::conj(uxa) * uya * uxb * std::conj(uyb);
            total += ea * eb * std::conj(uxa) * std::conj(uya) * uxb * uyb;
        }
    return total.real();
}

std::uint64_t naive_permanent(const CandidateMatrix &b) {
    std::vector<int> p(b.size());
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t total = 0;
    do {
        bool all = true;
        for (int i = 0; i < b.size() && all; ++i) all = b(i, p[i]);
        total += all;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

std::string run_command(const std::string &cmd, int &status) {
    std::string out;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    status = pclose(pipe);
    return out;
}

void encoding_fidelity(const std::vector<Eigen::MatrixXd> &mats) {
    const auto start = Clock::now();
    double recon = 0.0, unit = 0.0;
    for (const auto &a : mats) {
        const auto s = rescale(a, 0.9);
        const auto enc = takagi(s.matrix, s.scale);
        const int m = enc.modes();
        Eigen::VectorXd d(m);
        for (int i = 0; i < m; ++i) d(i) = std::tanh(enc.squeezing[i]);
        const Eigen::MatrixXcd back = enc.unitary * d.asDiagonal() * enc.unitary.transpose();
        recon = std::max(recon, (back - s.matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff());
        unit = std::max(unit, (enc.unitary.adjoint() * enc.unitary - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff());
    }
    const double t = seconds_since(start);
    report(1, "encoding fidelity", recon <= 1e-8 && unit <= 1e-10 && t < 10.0,
           std::to_string(mats.size()) + " matrices, reconstruction " + fmt(recon) + ", unitarity " + fmt(unit) + ", " + fmt(t) + " s");
}

void moments_identity(const std::vector<Eigen::MatrixXd> &mats) {
    double worst = 0.0;
    for (const auto &a : mats) {
        const auto s = rescale(a, 0.9);
        const auto m1 = moments_from_sampler(takagi(s.matrix, s.scale));
        const auto m2 = moments_direct(s.matrix);
        worst = std::max({worst, (m1.n - m2.n).cwiseAbs().maxCoeff(), (m1.e - m2.e).cwiseAbs().maxCoeff()});
    }
    report(2, "moments identity", worst <= 1e-8, std::to_string(mats.size()) + " matrices, max difference " + fmt(worst));
}

void oracle_equivalence() {
    const auto start = Clock::now();
    std::vector<Eigen::MatrixXd> mats;
    for (int m = 1; m <= 3; ++m) {
        const int pairs = m * (m - 1) / 2;
        for (int mask = 0; mask < (1 << pairs); ++mask) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
            int bit = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j, ++bit)
                    if (mask >> bit & 1) a(i, j) = a(j, i) = 1.0;
            mats.push_back(a);
        }
    }
    const int simple = static_cast<int>(mats.size());
    Rng rng(303);
    for (int i = 0; i < 20; ++i) {
        const int m = 1 + static_cast<int>(rng.below(3));
        Eigen::MatrixXd a(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = r; c < m; ++c) a(r, c) = a(c, r) = 2.0 * rng.uniform() - 1.0;
        mats.push_back(a);
    }

    // Weak squeezing at a moderate cutoff, then stronger squeezing at the
    // largest cutoff the oracle accepts.
    struct Setting {
        double alpha;
        int cutoff;
    };
    std::vector<std::pair<Setting, Eigen::MatrixXd>> jobs;
    for (Setting s : {Setting{0.3, 40}, Setting{0.5, 64}})
        for (const auto &a : mats) jobs.emplace_back(s, a);

    double worst = 0.0, worst_tail = 0.0;
    int tuples = 0;
    bool inconclusive = false;
    for (const auto &[setting, a] : jobs) {
        // Edgeless graphs encode as the vacuum.
        const EncodedSampler enc = a.isZero(0.0) ? takagi(a) : [&] {
            const auto s = rescale(a, setting.alpha);
            return takagi(s.matrix, s.scale);
        }();
        const auto mom = moments_from_sampler(enc);
        FockOracle oracle(enc, setting.cutoff, 4);
        worst_tail = std::max(worst_tail, oracle.tail_norm());
        const int m = enc.modes();
        for (int k = 1; k <= 4; ++k) {
            std::vector<int> t(k, 0);
            while (true) {
                try {
                    worst = std::max(worst, std::abs(cumulant(mom, t) - oracle.cumulant(t)));
                } catch (const OracleInconclusive &) {
                    inconclusive = true;
                }
                ++tuples;
                int d = k - 1;
                while (d >= 0 && t[d] == m - 1) t[d--] = 0;
                if (d < 0) break;
                ++t[d];
            }
        }
    }
    const double t = seconds_since(start);
    report(3, "oracle equivalence", !inconclusive && worst <= 1e-7 && worst_tail <= 1e-8 && t < 120.0,
           std::to_string(simple) + " simple + 20 weighted samplers, " + std::to_string(tuples) + " tuples at (alpha, cutoff) (0.3, 40) and (0.5, 64)" +
               ", max difference " + fmt(worst) + ", max tail " + fmt(worst_tail) + ", " + fmt(t) + " s");
}

void double_sum_form() {
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int m = 2 + static_cast<int>(rng.below(9));
        Eigen::MatrixXd a(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = r; c < m; ++c) a(r, c) = a(c, r) = 2.0 * rng.uniform() - 1.0;
        const auto s = rescale(a, 0.9);
        const auto enc = takagi(s.matrix, s.scale);
        const auto t = correlation_tensor(moments_from_sampler(enc), 2);
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                const int idx[] = {x, y};
                worst = std::max(worst, std::abs(t(idx) - double_sum(enc, x, y)));
            }
    }
    report(4, "two-mode double sum", worst <= 1e-9, "50 encodings, max difference " + fmt(worst));
}

void kernels() {
    const double haf = hafnian(Eigen::MatrixXd::Ones(4, 4));
    Rng rng(505);
    int perm_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const int m = 1 + static_cast<int>(rng.below(6));
        CandidateMatrix b(m, false);
        const double density = rng.uniform();
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) b.set(r, c, rng.uniform() < density);
        perm_bad += exact_permanent(b) != naive_permanent(b);
    }
    bool matchings = true, partitions = true;
    for (int n = 1; n <= 7; ++n) matchings = matchings && perfect_matchings(2 * n).size() == double_factorial_odd(n);
    for (int k = 1; k <= 8; ++k) partitions = partitions && set_partitions(k).size() == bell_number(k);
    report(5, "hafnian and permanent kernels", haf == 3.0 && perm_bad == 0 && matchings && partitions,
           "haf(ones4) = " + fmt(haf) + ", permanent mismatches " + std::to_string(perm_bad) + "/500, matchings " + (matchings ? "ok" : "bad") +
               ", partitions " + (partitions ? "ok" : "bad"));
}

void soundness() {
    const auto start = Clock::now();
    Config config;
    config.kmax = 2;
    Rng rng(606);
    const double ps[] = {0.3, 0.5, 0.7};
    int rejected = 0, iso = 0, bad_witness = 0, indeterminate = 0;
    for (int i = 0; i < 500; ++i) {
        const int m = 4 + static_cast<int>(rng.below(7));
        const Graph g = generate(GraphModel::erdos_renyi(ps[i % 3]), m, rng.next());
        const Graph h = isomorphic_copy(g, rng.next()).first;
        const auto v = run(g, h, config);
        if (v.tag == Verdict::Tag::not_isomorphic) ++rejected;
        if (v.tag == Verdict::Tag::indeterminate) ++indeterminate;
        if (v.tag == Verdict::Tag::isomorphic) {
            ++iso;
            if (!v.witness || !verify_isomorphism(g, h, *v.witness)) ++bad_witness;
        }
    }
    const double t = seconds_since(start);
    report(6, "planted soundness", rejected == 0 && bad_witness == 0 && t < 300.0,
           "500 pairs, " + std::to_string(iso) + " isomorphic, " + std::to_string(indeterminate) + " indeterminate, " + std::to_string(rejected) +
               " rejected, " + std::to_string(bad_witness) + " bad witnesses, " + fmt(t) + " s");
}

void brute_force_agreement() {
    Rng rng(707);
    int definite = 0, disagree = 0, truth_iso = 0;
    for (int i = 0; i < 300; ++i) {
        const int m = 3 + static_cast<int>(rng.below(6));
        Graph g, h;
        switch (i % 3) {
            case 0:
                g = generate(GraphModel::erdos_renyi(0.5), m, rng.next());
                h = isomorphic_copy(g, rng.next()).first;
                break;
            case 1: {
                const double p = 0.3 + 0.4 * rng.uniform();
                g = generate(GraphModel::erdos_renyi(p), m, rng.next());
                h = generate(GraphModel::erdos_renyi(p), m, rng.next());
                break;
            }
            default: {
                const int mm = std::max(m, 4);
                const int d = (mm % 2 == 1) ? 2 : 2 + static_cast<int>(rng.below(2));
                g = generate(GraphModel::random_regular(d), mm, rng.next());
                h = generate(GraphModel::random_regular(d), mm, rng.next());
            }
        }
        const bool truth = brute_force_isomorphism(g, h).has_value();
        truth_iso += truth;
        const auto v = run(g, h);
        if (!v.definite()) continue;
        ++definite;
        disagree += (v.tag == Verdict::Tag::isomorphic) != truth;
    }
    report(7, "definite verdicts match brute force", disagree == 0,
           "300 pairs (" + std::to_string(truth_iso) + " isomorphic), " + std::to_string(definite) + " definite, " + std::to_string(disagree) +
               " disagreements");
}

void named_cases() {
    const auto a = run(fixture("k3"), fixture("p3"));
    const bool cospectral = spectral_gate(fixture("star5"), fixture("c4k1"));
    const auto b = run(fixture("star5"), fixture("c4k1"));
    const bool ok = a.tag == Verdict::Tag::not_isomorphic && a.reason == "spectral_gate" && cospectral &&
                    b.tag == Verdict::Tag::not_isomorphic && b.order >= 1 && b.order <= 2;
    report(8, "named cases", ok,
           "(K3, P3) " + std::string(to_string(a.tag)) + " via " + a.reason + "; (K1,4, C4+K1) cospectral " + (cospectral ? "yes" : "no") + ", " +
               to_string(b.tag) + " via " + b.reason + " at order " + std::to_string(b.order));
}

void baseline_behavior() {
    const auto kp = wl1_compare(fixture("k3"), fixture("p3"));
    const auto sr = wl1_compare(fixture("shrikhande"), fixture("rook4"));
    std::vector<CorpusPair> pairs{{"shrikhande_rook4", fixture("shrikhande"), fixture("rook4"), false}};
    Config config;
    config.kmax = 4;
    const auto results = run_corpus(pairs, config, {true, 1});
    const auto rep = corpus_report(results, config);
    report(9, "1-WL baseline", kp == Wl1Outcome::distinguished && sr == Wl1Outcome::indeterminate,
           std::string("(K3, P3) ") + to_string(kp) + "; (Shrikhande, R4) " + to_string(sr) + "; pipeline record " + rep["pairs"][0].dump());
}

void determinism() {
    const std::string cli = GBSISO_CLI;
    const std::string corpus = GBSISO_CORPUS;
    const std::vector<std::string> cases = {"test " + corpus + "/er8.g6 " + corpus + "/er8_perm.g6 --json",
                                            "test shrikhande rook4 --kmax 3 --json", "test star5 c4k1 --json --threads 4"};
    bool ok = true;
    std::string detail;
    for (const auto &c : cases) {
        int s1 = 0, s2 = 0;
        const std::string o1 = run_command(cli + " " + c, s1);
        const std::string o2 = run_command(cli + " " + c, s2);
        const bool same = !o1.empty() && o1 == o2 && s1 == s2;
        ok = ok && same;
        detail += (detail.empty() ? "" : ", ") + std::to_string(o1.size()) + " bytes " + (same ? "identical" : "DIFFERENT");
    }
    report(10, "deterministic reports", ok, std::to_string(cases.size()) + " invocations run twice: " + detail);
}

}  // namespace

int main() {
    const auto mats = random_matrices(200, 101);
    const std::function<void()> steps[] = {[&] { encoding_fidelity(mats); },
                                           [&] { moments_identity(mats); },
                                           oracle_equivalence,
                                           double_sum_form,
                                           kernels,
                                           soundness,
                                           brute_force_agreement,
                                           named_cases,
                                           baseline_behavior,
                                           determinism};
    int id = 1;
    for (const auto &step : steps) {
        try {
            step();
        } catch (const std::exception &e) {
            report(id, "criterion", false, std::string("exception: ") + e.what());
        }
        ++id;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
