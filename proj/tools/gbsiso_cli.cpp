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

// gbsiso command line front end.
//
//   gbsiso test G1 G2        isomorphism verdict (exit 0 definite, 2 indeterminate, 1 error)
//   gbsiso gen               generate graphs (optionally with a planted isomorphic copy)
//   gbsiso encode G          sampler parameters of a graph as JSON
//   gbsiso corr G -k K       order-K cumulant tensor as JSON or CSV
//   gbsiso bench DIR         run a corpus described by DIR/pairs.txt
//   gbsiso baseline G1 [G2]  1-WL colorings and comparison
//   gbsiso fixture NAME      print a named graph

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gbsiso/gbsiso.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct InputOptions {
    std::string format;  // "", "g6", "el"
    bool allow_loops = false;
};

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_fixture(const std::string &name) {
    for (const auto &n : gbsiso::fixture_names())
        if (n == name) return true;
    return false;
}

// Accepts a file path, "fixture:NAME", or a bare fixture name that is not an existing file.
gbsiso::Graph load_graph(const std::string &source, const InputOptions &opts, const fs::path &base = {}) {
    if (source.rfind("fixture:", 0) == 0) return gbsiso::fixture(source.substr(8));
    fs::path path = base.empty() ? fs::path(source) : base / source;
    if (!fs::exists(path) && is_fixture(source)) return gbsiso::fixture(source);
    const std::string text = read_file(path);
    std::string format = opts.format;
    if (format.empty()) {
        const auto ext = path.extension().string();
        if (ext == ".g6")
            format = "g6";
        else if (ext == ".el" || ext == ".txt")
            format = "el";
        else
            format = text.find('\n') != std::string::npos && text.find('\n') + 1 < text.size() ? "el" : "g6";
    }
    gbsiso::Graph g;
    if (format == "g6") {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
        }
        g = gbsiso::parse_graph6(line);
    } else if (format == "el") {
        g = gbsiso::parse_edge_list(text, {opts.allow_loops});
    } else {
        throw std::runtime_error("unknown format '" + format + "' (expected g6 or el)");
    }
    g.set_label(path.filename().string());
    return g;
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
}

std::string graph_text(const gbsiso::Graph &g, const std::string &format) {
    return format == "el" ? gbsiso::emit_edge_list(g) : gbsiso::emit_graph6(g) + "\n";
}

void add_config_flags(CLI::App *cmd, gbsiso::Config &c) {
    cmd->add_option("--kmax", c.kmax, "Highest correlation order")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", c.alpha, "Target spectral radius after rescaling")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tau-rel", c.tau_rel, "Relative equality tolerance for correlation values")->check(CLI::PositiveNumber);
    cmd->add_option("--enum-cap", c.enum_cap, "Maximum partial assignments tried during enumeration")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "Worker threads for tensor builds (0 = auto)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", c.seed, "Seed recorded in the report");
    cmd->add_option("--spectral-tol", c.spectral_tol, "Absolute tolerance of the spectral gate");
    cmd->add_option("--max-order", c.max_order, "Order guard for cumulant kernels")->check(CLI::PositiveNumber);
    cmd->add_option("--verify-weight", c.cost.verify_weight, "Cost weight per enumerated candidate")->check(CLI::PositiveNumber);
    cmd->add_option("--kernel-weight", c.cost.kernel_weight, "Cost weight per cumulant kernel term")->check(CLI::PositiveNumber);
}

std::string pretty_reason(const std::string &reason) {
    if (reason == "spectral_gate") return "spectral gate";
    if (reason == "order_mismatch") return "vertex counts differ";
    if (reason == "invalid_sigma") return "empty candidate row or column";
    if (reason == "unique_sigma") return "unique candidate permutation";
    if (reason == "witness_rejected") return "unique candidate fails verification";
    if (reason == "enumeration") return "enumeration";
    if (reason == "enumeration_exhausted") return "no candidate permutation verifies";
    if (reason == "enumeration_cap") return "enumeration cap reached";
    if (reason == "order_guard") return "order guard";
    return reason;
}

std::string verdict_text(const gbsiso::Verdict &v) {
    std::ostringstream out;
    out << gbsiso::to_string(v.tag) << " (" << pretty_reason(v.reason);
    if (v.order > 0) out << ", order " << v.order;
    out << ")\n";
    if (v.witness) {
        out << "witness:";
        for (int x : *v.witness) out << ' ' << x;
        out << '\n';
    }
    if (v.tag == gbsiso::Verdict::Tag::indeterminate) out << "surviving permutations <= " << v.surviving_count_bound.str() << '\n';
    if (!v.diagnostic.empty()) out << "diagnostic: " << v.diagnostic << '\n';
    return out.str();
}

json tensor_nested(const gbsiso::CorrelationTensor &t, std::size_t offset, int depth) {
    json arr = json::array();
    std::size_t stride = 1;
    for (int d = depth + 1; d < t.order(); ++d) stride *= t.modes();
    for (int i = 0; i < t.modes(); ++i) {
        if (depth + 1 == t.order())
            arr.push_back(t.values()[offset + i]);
        else
            arr.push_back(tensor_nested(t, offset + i * stride, depth + 1));
    }
    return arr;
}

std::vector<gbsiso::CorpusPair> load_corpus(const fs::path &dir, const InputOptions &opts) {
    const fs::path manifest = dir / "pairs.txt";
    std::istringstream lines(read_file(manifest));
    std::vector<gbsiso::CorpusPair> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string id, a, b, truth;
        if (!(fields >> id >> a >> b)) throw std::runtime_error(manifest.string() + ":" + std::to_string(lineno) + ": expected 'id g1 g2 [iso|noniso]'");
        fields >> truth;
        gbsiso::CorpusPair p{id, load_graph(a, opts, dir), load_graph(b, opts, dir), std::nullopt};
        if (truth == "iso")
            p.isomorphic = true;
        else if (truth == "noniso")
            p.isomorphic = false;
        else if (!truth.empty() && truth != "?")
            throw std::runtime_error(manifest.string() + ":" + std::to_string(lineno) + ": unknown annotation '" + truth + "'");
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Graph isomorphism via Gaussian boson sampler correlations"};
    app.set_version_flag("--version", gbsiso::kVersion);
    app.require_subcommand(1);

    gbsiso::Config config;
    InputOptions input;
    std::string out_path;

    // test
    auto *test = app.add_subcommand("test", "Decide or refute isomorphism of two graphs");
    std::string g1_path, g2_path;
    bool as_json = false;
    test->add_option("g1", g1_path, "First graph (.g6, .el, or fixture name)")->required();
    test->add_option("g2", g2_path, "Second graph")->required();
    add_config_flags(test, config);
    test->add_flag("--json", as_json, "Print the JSON report");
    test->add_flag("--timings", config.record_timings, "Include per-order timings in the report");
    test->add_option("--out", out_path, "Write the report to a file");
    test->add_option("--format", input.format, "Input format override")->check(CLI::IsMember({"g6", "el"}));
    test->add_flag("--allow-loops", input.allow_loops, "Accept self loops in edge lists");

    // gen
    auto *gen = app.add_subcommand("gen", "Generate a graph, optionally with a planted isomorphic copy");
    std::string model_name = "er", pair_mode = "none", out_format = "g6";
    int order = 8, degree = 3;
    double p = 0.5;
    std::uint64_t seed = 0;
    gen->add_option("--model", model_name, "er | regular | complete | path | cycle | star")
        ->check(CLI::IsMember({"er", "regular", "complete", "path", "cycle", "star"}));
    gen->add_option("-M,--order", order, "Vertex count")->check(CLI::PositiveNumber);
    gen->add_option("--p", p, "Edge probability (er)")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--degree", degree, "Degree (regular)")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", seed, "64-bit generator seed");
    gen->add_option("--pair", pair_mode, "iso: also emit a randomly relabeled copy")->check(CLI::IsMember({"iso", "none"}));
    gen->add_option("--out", out_path, "Output prefix; writes PREFIX.g6 (and PREFIX_perm.g6)");
    gen->add_option("--format", out_format, "Output format")->check(CLI::IsMember({"g6", "el"}));

    // encode
    auto *encode = app.add_subcommand("encode", "Print interferometer, squeezing and scale for a graph");
    std::string graph_path;
    encode->add_option("graph", graph_path, "Graph file or fixture name")->required();
    encode->add_option("--alpha", config.alpha, "Target spectral radius")->check(CLI::Range(0.0, 1.0));
    encode->add_option("--out", out_path, "Write JSON to a file");
    encode->add_option("--format", input.format, "Input format override")->check(CLI::IsMember({"g6", "el"}));
    encode->add_flag("--allow-loops", input.allow_loops, "Accept self loops in edge lists");

    // corr
    auto *corr = app.add_subcommand("corr", "Print the order-k cumulant tensor of a graph");
    int k = 2;
    bool as_csv = false;
    corr->add_option("graph", graph_path, "Graph file or fixture name")->required();
    corr->add_option("-k,--order", k, "Correlation order")->check(CLI::PositiveNumber);
    corr->add_option("--alpha", config.alpha, "Target spectral radius")->check(CLI::Range(0.0, 1.0));
    corr->add_option("--threads", config.threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    corr->add_option("--max-order", config.max_order, "Order guard")->check(CLI::PositiveNumber);
    corr->add_flag("--csv", as_csv, "Flat CSV with tuple columns instead of nested JSON");
    corr->add_option("--out", out_path, "Write output to a file");
    corr->add_option("--format", input.format, "Input format override")->check(CLI::IsMember({"g6", "el"}));
    corr->add_flag("--allow-loops", input.allow_loops, "Accept self loops in edge lists");

    // bench
    auto *bench = app.add_subcommand("bench", "Run every pair listed in DIR/pairs.txt");
    std::string corpus_dir, baseline_name;
    int workers = 1;
    bench->add_option("corpus", corpus_dir, "Corpus directory")->required();
    add_config_flags(bench, config);
    bench->add_option("--baseline", baseline_name, "Also run a baseline")->check(CLI::IsMember({"wl1"}));
    bench->add_option("--workers", workers, "Pairs processed concurrently")->check(CLI::PositiveNumber);
    bench->add_option("--out", out_path, "Write JSON to a file");
    bench->add_option("--format", input.format, "Input format override")->check(CLI::IsMember({"g6", "el"}));
    bench->add_flag("--timings", config.record_timings, "Include per-pair and per-order timings");

    // baseline
    auto *baseline = app.add_subcommand("baseline", "1-WL stable colorings and comparison");
    std::string b1_path, b2_path;
    baseline->add_option("g1", b1_path, "First graph")->required();
    baseline->add_option("g2", b2_path, "Second graph (optional)");
    baseline->add_option("--out", out_path, "Write JSON to a file");
    baseline->add_option("--format", input.format, "Input format override")->check(CLI::IsMember({"g6", "el"}));

    // fixture
    auto *fix = app.add_subcommand("fixture", "Print a named graph");
    std::string fixture_name;
    fix->add_option("name", fixture_name, "Fixture name")->required()->check(CLI::IsMember(gbsiso::fixture_names()));
    fix->add_option("--format", out_format, "Output format")->check(CLI::IsMember({"g6", "el"}));
    fix->add_option("--out", out_path, "Write to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*test) {
            config.validate();
            const auto g1 = load_graph(g1_path, input), g2 = load_graph(g2_path, input);
            const auto verdict = gbsiso::run(g1, g2, config);
            emit(as_json ? gbsiso::to_json(verdict, config).dump(2) + "\n" : verdict_text(verdict), out_path);
            return gbsiso::exit_code(verdict);
        }
        if (*gen) {
            gbsiso::GraphModel model;
            if (model_name == "er") model = gbsiso::GraphModel::erdos_renyi(p);
            if (model_name == "regular") model = gbsiso::GraphModel::random_regular(degree);
            if (model_name == "complete") model = gbsiso::GraphModel::complete();
            if (model_name == "path") model = gbsiso::GraphModel::path();
            if (model_name == "cycle") model = gbsiso::GraphModel::cycle();
            if (model_name == "star") model = gbsiso::GraphModel::star();
            const auto g = gbsiso::generate(model, order, seed);
            std::optional<std::pair<gbsiso::Graph, gbsiso::Permutation>> copy;
            // Derive the relabeling stream from the seed without reusing the generator stream.
            if (pair_mode == "iso") copy = gbsiso::isomorphic_copy(g, seed ^ 0x9E3779B97F4A7C15ull);
            const std::string ext = out_format == "el" ? ".el" : ".g6";
            if (out_path.empty()) {
                std::cout << graph_text(g, out_format);
                if (copy) std::cout << graph_text(copy->first, out_format);
            } else {
                emit(graph_text(g, out_format), out_path + ext);
                if (copy) emit(graph_text(copy->first, out_format), out_path + "_perm" + ext);
            }
            if (copy) std::cerr << "permutation: " << json(copy->second).dump() << "\n";
            return 0;
        }
        if (*encode) {
            const auto g = load_graph(graph_path, input);
            const auto scaled = gbsiso::rescale(g.adjacency(), config.alpha);
            const auto enc = gbsiso::takagi(scaled.matrix, scaled.scale);
            json u = json::array();
            for (int i = 0; i < enc.modes(); ++i) {
                json row = json::array();
                for (int j = 0; j < enc.modes(); ++j) row.push_back({enc.unitary(i, j).real(), enc.unitary(i, j).imag()});
                u.push_back(std::move(row));
            }
            json j{{"modes", enc.modes()}, {"alpha", config.alpha}, {"scale", enc.scale}, {"spectrum", enc.spectrum},
                   {"squeezing", enc.squeezing}, {"unitary", std::move(u)}, {"versions", gbsiso::versions_json()}};
            emit(j.dump(2) + "\n", out_path);
            return 0;
        }
        if (*corr) {
            const auto g = load_graph(graph_path, input);
            const double c = gbsiso::shared_scale(g.adjacency(), g.adjacency(), config.alpha);
            const auto mom = gbsiso::moments_from_sampler(gbsiso::takagi(c * g.adjacency(), c));
            const auto t = gbsiso::correlation_tensor(mom, k, config.threads, config.max_order);
            if (as_csv) {
                std::ostringstream out;
                out.precision(17);
                for (int d = 0; d < k; ++d) out << 'x' << d + 1 << ',';
                out << "value\n";
                std::vector<int> tuple(k, 0);
                for (std::size_t idx = 0; idx < t.size(); ++idx) {
                    std::size_t rest = idx;
                    for (int d = k - 1; d >= 0; --d) {
                        tuple[d] = static_cast<int>(rest % t.modes());
                        rest /= t.modes();
                    }
                    for (int x : tuple) out << x << ',';
                    out << t.values()[idx] << '\n';
                }
                emit(out.str(), out_path);
            } else {
                json j{{"order", k}, {"modes", t.modes()}, {"alpha", config.alpha}, {"scale", c}, {"values", tensor_nested(t, 0, 0)}};
                emit(j.dump(2) + "\n", out_path);
            }
            return 0;
        }
        if (*bench) {
            config.validate();
            const auto pairs = load_corpus(corpus_dir, input);
            const auto results = gbsiso::run_corpus(pairs, config, {baseline_name == "wl1", workers});
            emit(gbsiso::corpus_report(results, config).dump(2) + "\n", out_path);
            return 0;
        }
        if (*baseline) {
            auto describe = [](const gbsiso::Graph &g) {
                const auto c = gbsiso::color_refinement(g);
                return json{{"colors", c.colors}, {"rounds", c.rounds}, {"classes", c.classes()}, {"class_sizes", c.class_sizes()}};
            };
            const auto g1 = load_graph(b1_path, input);
            json j{{"g1", describe(g1)}};
            if (!b2_path.empty()) {
                const auto g2 = load_graph(b2_path, input);
                j["g2"] = describe(g2);
                j["wl1"] = gbsiso::to_string(gbsiso::wl1_compare(g1, g2));
            }
            emit(j.dump(2) + "\n", out_path);
            return 0;
        }
        if (*fix) {
            emit(graph_text(gbsiso::fixture(fixture_name), out_format), out_path);
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
