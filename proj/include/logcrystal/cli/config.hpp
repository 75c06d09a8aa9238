#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "logcrystal/errors.hpp"

namespace logcrystal::cli {

inline constexpr const char* kVersion = "logcrystal 0.1.0";

enum class Command { spectrum, dynamics, landscape, husimi, hom };
enum class StateKind { two_level, double_gaussian };
enum class OutputFormat { csv, json };

// Invalid configuration; `field` is the dotted path of the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    struct Model {
        std::int64_t n = 440;
        double gamma = 0.75;
    } model;
    struct State {
        StateKind kind = StateKind::double_gaussian;
        double sigma = 1.0;
        std::optional<std::int64_t> m1_offset;  // default floor(sqrt(N / log N))
        std::optional<double> log_base;         // default natural log
    } state;
    struct Time {
        std::optional<double> t_max;
        std::optional<std::int64_t> samples;
    } time;
    struct Grid {
        std::int64_t n_q = 200;
        std::int64_t n_p = 200;
        std::optional<double> level;  // husimi level m; default m0
    } grid;
    struct SpectrumOptions {
        double delta = 0.25;
    } spectrum;
    struct Hom {
        std::int64_t shots = 10000;
        std::uint64_t seed = 1;
        std::int64_t max_n = 256;
    } hom;
    struct Output {
        std::string path;  // empty: stdout
        OutputFormat format = OutputFormat::csv;
    } output;
    unsigned threads = 1;
};

std::string to_string(Command command);
std::optional<Command> parse_command(const std::string& name);

// Reads a config document; absent keys keep their defaults, unknown keys are errors.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);

// Checks every precondition `command` relies on and fills derived defaults
// (m1 offset, time grid, husimi level). Throws ConfigError.
RunConfig resolve(const RunConfig& config, Command command);

}  // namespace logcrystal::cli
