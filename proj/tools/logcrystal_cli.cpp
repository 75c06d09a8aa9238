#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "logcrystal/cli/commands.hpp"
#include "logcrystal/cli/config.hpp"

namespace {

using logcrystal::cli::ConfigError;
using logcrystal::cli::RunConfig;

struct Overrides {
    std::string config_path;
    std::optional<std::int64_t> n;
    std::optional<double> gamma;
    std::optional<std::string> state;
    std::optional<double> sigma;
    std::optional<std::int64_t> offset;
    std::optional<double> t_max;
    std::optional<std::int64_t> samples;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<double> level;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
};

void add_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config file; flags override its entries");
    sub->add_option("--n", o.n, "particle number N");
    sub->add_option("--gamma", o.gamma, "coupling gamma");
    sub->add_option("--state", o.state, "state kind")->check(CLI::IsMember({"two_level", "double_gaussian"}));
    sub->add_option("--sigma", o.sigma, "double-Gaussian width");
    sub->add_option("--offset", o.offset, "m0 - m1 (default floor(sqrt(N / log N)))");
    sub->add_option("--t-max", o.t_max, "last time sample");
    sub->add_option("--samples", o.samples, "number of time samples");
    sub->add_option("--shots", o.shots, "Monte Carlo shots per time sample");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--level", o.level, "husimi level m (default m0)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads (fallback: LOGCRYSTAL_THREADS)");
}

RunConfig build_config(const Overrides& o) {
    RunConfig c;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("--config", "cannot read " + o.config_path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("--config", e.what());
        }
        c = logcrystal::cli::config_from_json(doc);
    }
    if (o.n) c.model.n = *o.n;
    if (o.gamma) c.model.gamma = *o.gamma;
    if (o.state) {
        c.state.kind = *o.state == "two_level" ? logcrystal::cli::StateKind::two_level
                                               : logcrystal::cli::StateKind::double_gaussian;
    }
    if (o.sigma) c.state.sigma = *o.sigma;
    if (o.offset) c.state.m1_offset = *o.offset;
    if (o.t_max) c.time.t_max = *o.t_max;
    if (o.samples) c.time.samples = *o.samples;
    if (o.shots) c.hom.shots = *o.shots;
    if (o.seed) c.hom.seed = *o.seed;
    if (o.level) c.grid.level = *o.level;
    if (o.out) c.output.path = *o.out;
    if (o.format) c.output.format = *o.format == "csv" ? logcrystal::cli::OutputFormat::csv
                                                       : logcrystal::cli::OutputFormat::json;
    if (o.threads) {
        c.threads = *o.threads;
    } else if (const char* env = std::getenv("LOGCRYSTAL_THREADS"); env && *env) {
        try {
            std::size_t used = 0;
            long v = std::stol(env, &used);
            if (used != std::string(env).size() || v < 1 || v > 4096) throw std::invalid_argument(env);
            c.threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ConfigError("LOGCRYSTAL_THREADS", "expected an integer in [1, 4096]");
        }
    }
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Logarithmic time crystal simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", logcrystal::cli::kVersion);
    Overrides overrides;
    const std::pair<const char*, const char*> commands[] = {
        {"spectrum", "energy levels, gaps and the quasi-ground set"},
        {"dynamics", "return overlap of the initial state, exact sum and closed form"},
        {"landscape", "mean-field energy on the (Q, P) grid"},
        {"husimi", "coherent-state density of one level, plus the minimum locus"},
        {"hom", "two-copy interference readout of |<Psi(0)|Psi(t)>|^2"},
    };
    for (const auto& [name, help] : commands) add_options(app.add_subcommand(name, help), overrides);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto command = logcrystal::cli::parse_command(app.get_subcommands().front()->get_name());
    try {
        RunConfig config = build_config(overrides);
        return logcrystal::cli::execute(*command, config, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
}
