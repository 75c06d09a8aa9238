#include "logcrystal/cli/config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

#include "logcrystal/core.hpp"
#include "logcrystal/dynamics.hpp"

namespace logcrystal::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    std::set<std::string> allowed(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
        }
    }
}

const json* section(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return nullptr;
    if (!it->is_object()) throw ConfigError(key, "expected an object");
    return &*it;
}

std::int64_t read_int(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(path, "expected an integer");
}

double read_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

// Reads obj[key] into out when present and non-null.
template <class T, class Reader>
void read_opt(const json& obj, const std::string& path, const char* key, T& out, Reader reader) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return;
    out = reader(*it, path + "." + key);
}

std::string read_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

}  // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::spectrum: return "spectrum";
        case Command::dynamics: return "dynamics";
        case Command::landscape: return "landscape";
        case Command::husimi: return "husimi";
        case Command::hom: return "hom";
    }
    return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::spectrum, Command::dynamics, Command::landscape, Command::husimi, Command::hom}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown(doc, "", {"model", "state", "time", "grid", "spectrum", "hom", "output", "threads"});
    RunConfig c;

    if (const json* s = section(doc, "model")) {
        reject_unknown(*s, "model", {"n", "gamma"});
        read_opt(*s, "model", "n", c.model.n, read_int);
        read_opt(*s, "model", "gamma", c.model.gamma, read_number);
    }
    if (const json* s = section(doc, "state")) {
        reject_unknown(*s, "state", {"kind", "sigma", "m1_offset", "log_base"});
        auto it = s->find("kind");
        if (it != s->end() && !it->is_null()) {
            std::string kind = read_string(*it, "state.kind");
            if (kind == "two_level") c.state.kind = StateKind::two_level;
            else if (kind == "double_gaussian") c.state.kind = StateKind::double_gaussian;
            else throw ConfigError("state.kind", "expected \"two_level\" or \"double_gaussian\", got \"" + kind + "\"");
        }
        read_opt(*s, "state", "sigma", c.state.sigma, read_number);
        read_opt(*s, "state", "m1_offset", c.state.m1_offset, read_int);
        read_opt(*s, "state", "log_base", c.state.log_base, read_number);
    }
    if (const json* s = section(doc, "time")) {
        reject_unknown(*s, "time", {"t_max", "samples"});
        read_opt(*s, "time", "t_max", c.time.t_max, read_number);
        read_opt(*s, "time", "samples", c.time.samples, read_int);
    }
    if (const json* s = section(doc, "grid")) {
        reject_unknown(*s, "grid", {"nQ", "nP", "level"});
        read_opt(*s, "grid", "nQ", c.grid.n_q, read_int);
        read_opt(*s, "grid", "nP", c.grid.n_p, read_int);
        read_opt(*s, "grid", "level", c.grid.level, read_number);
    }
    if (const json* s = section(doc, "spectrum")) {
        reject_unknown(*s, "spectrum", {"delta"});
        read_opt(*s, "spectrum", "delta", c.spectrum.delta, read_number);
    }
    if (const json* s = section(doc, "hom")) {
        reject_unknown(*s, "hom", {"shots", "seed", "max_n"});
        read_opt(*s, "hom", "shots", c.hom.shots, read_int);
        auto it = s->find("seed");
        if (it != s->end() && !it->is_null()) {
            if (!it->is_number_unsigned()) throw ConfigError("hom.seed", "expected a non-negative integer");
            c.hom.seed = it->get<std::uint64_t>();
        }
        read_opt(*s, "hom", "max_n", c.hom.max_n, read_int);
    }
    if (const json* s = section(doc, "output")) {
        reject_unknown(*s, "output", {"path", "format"});
        read_opt(*s, "output", "path", c.output.path, read_string);
        auto it = s->find("format");
        if (it != s->end() && !it->is_null()) {
            std::string fmt = read_string(*it, "output.format");
            if (fmt == "csv") c.output.format = OutputFormat::csv;
            else if (fmt == "json") c.output.format = OutputFormat::json;
            else throw ConfigError("output.format", "expected \"csv\" or \"json\", got \"" + fmt + "\"");
        }
    }
    auto it = doc.find("threads");
    if (it != doc.end() && !it->is_null()) {
        std::int64_t t = read_int(*it, "threads");
        if (t < 1 || t > 4096) throw ConfigError("threads", "must lie in [1, 4096]");
        c.threads = static_cast<unsigned>(t);
    }
    return c;
}

json config_to_json(const RunConfig& c) {
    auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
    return json{
        {"model", {{"n", c.model.n}, {"gamma", c.model.gamma}}},
        {"state",
         {{"kind", c.state.kind == StateKind::two_level ? "two_level" : "double_gaussian"},
          {"sigma", c.state.sigma},
          {"m1_offset", opt(c.state.m1_offset)},
          {"log_base", opt(c.state.log_base)}}},
        {"time", {{"t_max", opt(c.time.t_max)}, {"samples", opt(c.time.samples)}}},
        {"grid", {{"nQ", c.grid.n_q}, {"nP", c.grid.n_p}, {"level", opt(c.grid.level)}}},
        {"spectrum", {{"delta", c.spectrum.delta}}},
        {"hom", {{"shots", c.hom.shots}, {"seed", c.hom.seed}, {"max_n", c.hom.max_n}}},
        {"output", {{"path", c.output.path}, {"format", c.output.format == OutputFormat::csv ? "csv" : "json"}}},
        {"threads", c.threads},
    };
}

namespace {

void resolve_model(const RunConfig& c) {
    require(c.model.n >= 1, "model.n", "must be >= 1, got " + std::to_string(c.model.n));
    require(std::isfinite(c.model.gamma) && c.model.gamma >= 0.0, "model.gamma", "must be finite and >= 0");
}

// State and time grid shared by dynamics and hom.
void resolve_state_and_time(RunConfig& c, Command command) {
    ModelParams params(c.model.n, c.model.gamma);
    require(params.degenerate(), "model.gamma",
            to_string(command) + " builds the time-crystal state and needs gamma > 1/2");

    LogBase base;
    if (c.state.log_base) base.base = *c.state.log_base;
    try {
        base.validate();
    } catch (const Error& e) {
        throw ConfigError("state.log_base", e.what());
    }
    require(base.log(static_cast<double>(c.model.n)) > 0.0, "state.log_base", "log N must be positive");
    c.state.log_base = base.base;

    if (!c.state.m1_offset) {
        std::int64_t offset = time_crystal_offset(params, base);
        require(offset != 0, "state.m1_offset",
                "default floor(sqrt(N / log N)) is 0 for this N; set it explicitly");
        c.state.m1_offset = offset;
    }
    std::int64_t offset = *c.state.m1_offset;
    require(offset != 0, "state.m1_offset", "must be nonzero");
    LevelIndex m1 = ground_index(params).shifted(-offset);
    require(m1.valid_for(params), "state.m1_offset", "m0 - m1_offset falls outside [-N/2, N/2]");
    if (c.state.kind == StateKind::double_gaussian) {
        require(std::isfinite(c.state.sigma) && c.state.sigma > 0.0, "state.sigma", "must be positive");
        require(c.state.sigma <= std::abs(static_cast<double>(offset)) / 3.0, "state.sigma",
                "must not exceed |m1_offset| / 3 = " + std::to_string(std::abs(offset) / 3.0));
    }

    double period = log_period(params, base);
    if (!c.time.t_max) c.time.t_max = (command == Command::hom ? 3.0 : 10.0) * period;
    require(std::isfinite(*c.time.t_max) && *c.time.t_max > 0.0, "time.t_max", "must be positive");
    if (!c.time.samples) {
        if (command == Command::hom) {
            c.time.samples = 64;
        } else {
            double periods = *c.time.t_max / period;
            c.time.samples = static_cast<std::int64_t>(std::ceil(periods * kSamplesPerPeriod)) + 1;
        }
    }
    require(*c.time.samples >= 2, "time.samples", "must be >= 2");
    require(*c.time.samples <= 10'000'000, "time.samples", "must be <= 1e7");
}

void resolve_grid(const RunConfig& c) {
    require(c.grid.n_q >= 16 && c.grid.n_q <= 20000, "grid.nQ", "must lie in [16, 20000]");
    require(c.grid.n_p >= 16 && c.grid.n_p <= 20000, "grid.nP", "must lie in [16, 20000]");
}

}  // namespace

RunConfig resolve(const RunConfig& config, Command command) {
    RunConfig c = config;
    resolve_model(c);
    require(c.threads >= 1, "threads", "must be >= 1");
    ModelParams params(c.model.n, c.model.gamma);

    switch (command) {
        case Command::spectrum:
            require(c.spectrum.delta > 0.0 && c.spectrum.delta < 0.5, "spectrum.delta", "must lie in (0, 1/2)");
            break;
        case Command::dynamics:
            resolve_state_and_time(c, command);
            break;
        case Command::landscape:
            resolve_grid(c);
            break;
        case Command::husimi: {
            resolve_grid(c);
            require(!c.output.path.empty(), "output.path", "husimi writes a companion locus file; give --out");
            LevelIndex level = ground_index(params);
            if (c.grid.level) {
                double twice = 2.0 * *c.grid.level;
                require(std::isfinite(twice) && twice == std::floor(twice), "grid.level",
                        "must be an integer or half-integer");
                level = LevelIndex::from_twice_m(static_cast<std::int64_t>(twice));
                require(level.valid_for(params), "grid.level",
                        "no level m = " + std::to_string(*c.grid.level) + " for N = " + std::to_string(c.model.n));
            }
            c.grid.level = level.m();
            break;
        }
        case Command::hom:
            resolve_state_and_time(c, command);
            require(c.hom.shots >= 1, "hom.shots", "must be >= 1");
            require(c.hom.max_n >= 1, "hom.max_n", "must be >= 1");
            break;
    }
    return c;
}

}  // namespace logcrystal::cli
