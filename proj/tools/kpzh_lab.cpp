// SPDX-License-Identifier: Apache-2.0
// kpzh-lab: sampling, figure data and verification suites.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kpzh/errors.hpp"
#include "kpzh/kpzh.hpp"
#include "kpzh/parallel.hpp"
#include "suites.hpp"

namespace {

using namespace kpzh;

struct RunConfig {
    double beta = 1.0;
    std::vector<double> drifts;
    double x_min = -20.0;
    double x_max = 5.0;
    double step = kDefaultStep;
    std::optional<std::size_t> reps;
    std::uint64_t seed = 1;
    double epsilon = 0.1;
    double y = 1.0;
    double alpha = 1.0;
    std::string output;
    std::optional<int> threads;
    bool strict = false;
};

int emit(const suites::Suite& s, const std::string& output) {
    const nlohmann::json j = s.reports;
    const std::string line = summary_line(s.reports);
    if (output.empty()) {
        std::cout << j.dump(2) << '\n';
        std::cerr << s.name << ": " << line << '\n';
    } else {
        std::ofstream f(output);
        if (!f) fail(Errc::Precondition, "cannot open " + output);
        f << j.dump(2) << '\n';
        std::cout << s.name << ": " << line << '\n';
    }
    return s.pass() ? 0 : 1;
}

DriftVector drifts_or(const RunConfig& c, std::vector<double> fallback) {
    return DriftVector(c.drifts.empty() ? std::move(fallback) : c.drifts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kpzh-lab: KPZ horizon sampling and verification"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--beta", c.beta, "inverse temperature")->check(CLI::PositiveNumber);
        sub->add_option("--drifts", c.drifts, "comma-separated drifts")->delimiter(',');
        sub->add_option("--xmin", c.x_min, "left grid end");
        sub->add_option("--xmax", c.x_max, "right grid end");
        sub->add_option("--step", c.step, "grid step")->check(CLI::PositiveNumber);
        sub->add_option("--reps", c.reps, "replicates")->check(CLI::PositiveNumber);
        sub->add_option("--seed", c.seed, "master seed");
        sub->add_option("--epsilon", c.epsilon, "jump threshold")->check(CLI::PositiveNumber);
        sub->add_option("--y", c.y, "evaluation point");
        sub->add_option("--alpha", c.alpha, "moment-integral alpha");
        sub->add_option("--output", c.output, "output file (directory for figure1)");
        sub->add_option("--threads", c.threads, "worker cap")->check(CLI::PositiveNumber);
        sub->add_flag("--strict", c.strict, "escalate drift-gap and tail warnings to errors");
    };

    std::vector<CLI::App*> subs;
    for (const char* name : {"sample", "figure1", "verify-identities", "verify-invariance", "verify-gamma",
                             "verify-limits", "verify-kernels", "jump-scan"}) {
        auto* s = app.add_subcommand(name);
        add_common(s);
        subs.push_back(s);
    }
    subs[0]->description("one coupled KPZH sample as CSV");
    subs[1]->description("three CSVs for beta in {0.1, 1, 20}, drifts {-5,-2.5,0,2.5,5}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c.threads) set_thread_count(*c.threads);
        const Grid grid = make_grid(c.x_min, c.x_max, c.step);
        const std::size_t reps = c.reps.value_or(10000);
        const GapPolicy gap = c.strict ? GapPolicy::Strict : GapPolicy::Warn;

        if (subs[0]->parsed()) {
            const DriftVector d = drifts_or(c, {0.0, 1.0});
            KpzhOptions opt;
            opt.gap = gap;
            const CouplingSample s = sample_kpzh(d, c.beta, grid, RngStream(c.seed, 0), opt);
            if (c.output.empty()) {
                write_csv(std::cout, s.paths);
            } else {
                write_csv_file(c.output, s.paths);
            }
            return 0;
        }
        if (subs[1]->parsed()) {
            const auto files = suites::write_figure1(c.output.empty() ? "." : c.output, grid, c.seed);
            for (const auto& f : files) std::cout << f << '\n';
            return 0;
        }
        if (subs[2]->parsed()) return emit(suites::identities(grid, c.beta, c.seed), c.output);
        if (subs[3]->parsed())
            return emit(suites::invariance(drifts_or(c, {1.0, 2.0}), c.beta, grid, reps, c.seed), c.output);
        if (subs[4]->parsed()) return emit(suites::gamma_law(c.beta, grid, reps, c.seed), c.output);
        if (subs[5]->parsed())
            return emit(suites::limits(drifts_or(c, {0.0, 1.0}), grid, reps, c.y, c.seed), c.output);
        if (subs[6]->parsed()) return emit(suites::kernels(c.reps.value_or(100000), c.seed, c.alpha), c.output);
        if (subs[7]->parsed())
            return emit(suites::jump_scan(c.beta, c.y, c.epsilon, c.reps.value_or(100000), c.seed), c.output);
    } catch (const kpzh::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
