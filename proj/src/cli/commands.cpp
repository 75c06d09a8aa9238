#include "logcrystal/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <span>

#include "logcrystal/core.hpp"
#include "logcrystal/dynamics.hpp"
#include "logcrystal/hom.hpp"
#include "logcrystal/meanfield.hpp"
#include "logcrystal/phasespace.hpp"
#include "logcrystal/states.hpp"

namespace logcrystal::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kLocusPoints = 401;

ModelParams model_of(const RunConfig& c) { return ModelParams(c.model.n, c.model.gamma); }

LogBase base_of(const RunConfig& c) { return LogBase{c.state.log_base.value_or(std::numbers::e)}; }

SxBasisState state_of(const RunConfig& c) {
    ModelParams params = model_of(c);
    if (c.state.kind == StateKind::two_level) return two_level_state(params, *c.state.m1_offset);
    return double_gaussian_state(params, c.state.sigma, *c.state.m1_offset);
}

std::vector<double> times_of(const RunConfig& c) {
    return uniform_times(*c.time.t_max, static_cast<std::size_t>(*c.time.samples));
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Period footer entries; extraction failure is reported, not raised.
void add_period(CommandOutput& out, std::span<const double> times, std::span<const double> values,
                double expected, const char* column) {
    out.main.footer["expected_period"] = expected;
    try {
        double period = extract_period(times, values);
        out.main.footer["period"] = period;
        out.main.footer["period_ratio"] = period / expected;
    } catch (const InsufficientDataError& e) {
        out.main.footer["period"] = nullptr;
        out.warnings.push_back(std::string("period of ") + column + " not extracted: " + e.what());
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_cell(const Cell& cell) {
    if (const bool* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
    return format_number(std::get<double>(cell));
}

std::filesystem::path companion_path(const std::string& path, const std::string& suffix, OutputFormat format) {
    return path + "." + suffix + (format == OutputFormat::csv ? ".csv" : ".json");
}

}  // namespace

CommandOutput cmd_spectrum(const RunConfig& c) {
    ModelParams params = model_of(c);
    Spectrum spec = spectrum(params);
    std::set<std::int64_t> quasi;
    if (params.degenerate()) {
        for (LevelIndex m : quasi_ground_set(params, c.spectrum.delta)) quasi.insert(m.twice_m());
    } else {
        quasi.insert(spec.m0.twice_m());
    }

    CommandOutput out;
    out.main.columns = {"m", "E_m", "neighbor_gap", "gap_to_ground", "in_quasi_set"};
    for (const auto& [m, e] : spec.energies) {
        double gap = m.twice_m() == -params.n() ? kNaN : neighbor_gap(params, m);
        out.main.rows.push_back({m.m(), e, gap, gap_to_ground(params, m), quasi.contains(m.twice_m())});
    }
    out.main.footer = {{"m0", spec.m0.m()},
                       {"floor_rule", floor_rule_ground(params)},
                       {"degenerate", params.degenerate()},
                       {"quasi_set_size", quasi.size()}};
    return out;
}

CommandOutput cmd_dynamics(const RunConfig& c) {
    ModelParams params = model_of(c);
    std::vector<double> times = times_of(c);
    CommandOutput out;
    out.main.columns = {"t",      "re_exact", "im_exact", "abs2_exact", "re_cf",
                        "im_cf",  "abs2_cf",  "T_of_t",   "Sigma_of_t", "absA"};
    std::vector<double> abs2(times.size());

    if (c.state.kind == StateKind::double_gaussian) {
        OverlapSeries series = overlap_series(params, c.state.sigma, *c.state.m1_offset, times, c.threads);
        double worst = 0.0;
        for (std::size_t k = 0; k < series.samples.size(); ++k) {
            const OverlapSample& s = series.samples[k];
            abs2[k] = std::norm(s.exact);
            worst = std::max(worst, std::abs(std::abs(s.exact) - std::abs(s.closed_form)));
            out.main.rows.push_back({s.t, s.exact.real(), s.exact.imag(), abs2[k], s.closed_form.real(),
                                     s.closed_form.imag(), std::norm(s.closed_form), s.envelope.period,
                                     s.envelope.width, std::abs(s.envelope.amplitude)});
        }
        out.main.footer["max_abs_deviation"] = worst;
    } else {
        std::vector<std::complex<double>> exact = overlap_exact(state_of(c), times, c.threads);
        for (std::size_t k = 0; k < times.size(); ++k) {
            abs2[k] = std::norm(exact[k]);
            out.main.rows.push_back(
                {times[k], exact[k].real(), exact[k].imag(), abs2[k], kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
        }
        out.main.footer["two_level_period"] = two_level_period(params, *c.state.m1_offset);
    }
    add_period(out, times, abs2, log_period(params, base_of(c)), "abs2_exact");
    return out;
}

CommandOutput cmd_landscape(const RunConfig& c) {
    LandscapeGrid land = landscape_grid(c.model.gamma, static_cast<std::size_t>(c.grid.n_q),
                                        static_cast<std::size_t>(c.grid.n_p), c.threads);
    CommandOutput out;
    out.main.columns = {"Q", "P", "value"};
    std::size_t best = 0;
    for (std::size_t i = 0; i < land.grid.n_q; ++i) {
        for (std::size_t j = 0; j < land.grid.n_p; ++j) {
            out.main.rows.push_back({land.grid.q(i), land.grid.p(j), land.at(i, j)});
            if (land.values[i * land.grid.n_p + j] < land.values[best]) best = i * land.grid.n_p + j;
        }
    }
    out.main.footer = {{"min_value", land.values[best]},
                       {"min_Q", land.grid.q(best / land.grid.n_p)},
                       {"min_P", land.grid.p(best % land.grid.n_p)},
                       {"classical_minimum", classical_minimum(c.model.gamma)}};
    return out;
}

CommandOutput cmd_husimi(const RunConfig& c) {
    ModelParams params = model_of(c);
    LevelIndex level = LevelIndex::from_twice_m(static_cast<std::int64_t>(std::llround(2.0 * *c.grid.level)));
    BasisTransform transform = sx_eigenbasis(params);
    HusimiGrid h = husimi(params, level, transform, static_cast<std::size_t>(c.grid.n_q),
                          static_cast<std::size_t>(c.grid.n_p), c.threads);

    CommandOutput out;
    out.main.columns = {"Q", "P", "value"};
    std::size_t best = 0;
    for (std::size_t i = 0; i < h.grid.n_q; ++i) {
        for (std::size_t j = 0; j < h.grid.n_p; ++j) {
            out.main.rows.push_back({h.grid.q(i), h.grid.p(j), h.at(i, j)});
            if (h.values[i * h.grid.n_p + j] > h.values[best]) best = i * h.grid.n_p + j;
        }
    }
    std::size_t bi = best / h.grid.n_p;
    std::size_t bj = best % h.grid.n_p;
    out.main.footer = {{"level", level.m()},
                       {"total", h.total()},
                       {"argmax_Q", h.grid.q(bi)},
                       {"argmax_P", h.grid.p(bj)},
                       {"argmax_cells_from_locus", cell_distance_to_locus(c.model.gamma, h.grid, bi, bj)},
                       {"mass_within_3_cells", locus_mass_fraction(h, c.model.gamma, 3)}};

    Table locus;
    locus.columns = {"Q", "P"};
    for (const PhasePoint& pt : minimum_locus(c.model.gamma, kLocusPoints)) locus.rows.push_back({pt.q, pt.p});
    out.companions.emplace_back("locus", std::move(locus));
    return out;
}

CommandOutput cmd_hom(const RunConfig& c) {
    ModelParams params = model_of(c);
    if (params.n() > c.hom.max_n) {
        throw ResourceError("hom simulates two copies exactly and is limited to N <= " + std::to_string(c.hom.max_n) +
                            " (got N=" + std::to_string(params.n()) +
                            "); lower model.n or raise hom.max_n, cost grows like N^4");
    }
    SxBasisState psi0 = state_of(c);
    BasisTransform transform = sx_eigenbasis(params);
    FockBasisState a = to_fock(psi0, transform);
    std::vector<double> times = times_of(c);

    CommandOutput out;
    out.main.columns = {"t", "exact_V", "mc_mean", "mc_stderr", "abs2_overlap"};
    std::vector<double> v_column(times.size());
    double worst = 0.0;
    std::size_t outside = 0;
    // Time samples go through the mixer in batches so tables are shared.
    constexpr std::size_t kBatch = 16;
    for (std::size_t first = 0; first < times.size(); first += kBatch) {
        const std::size_t last = std::min(times.size(), first + kBatch);
        std::vector<CompositeState> copies;
        for (std::size_t k = first; k < last; ++k)
            copies.push_back(compose(a, to_fock(evolve_phase(psi0, times[k]), transform)));
        std::vector<OutcomeDistribution> batch = measure_copy_b(copies, c.threads, c.hom.max_n);
        for (std::size_t k = first; k < last; ++k) {
            const OutcomeDistribution& outcomes = batch[k - first];
            double v = 2.0 * parity_distribution(outcomes) - 1.0;
            // Row k draws from stream seed + k.
            EstimatorResult mc =
                sample_shots(outcomes, static_cast<std::uint64_t>(c.hom.shots), c.hom.seed + k, c.threads);
            double overlap2 = std::norm(overlap_exact(psi0, times[k]));
            v_column[k] = v;
            worst = std::max(worst, std::abs(v - overlap2));
            if (std::abs(mc.mean - v) > 3.0 * mc.std_error + 1e-9) ++outside;
            out.main.rows.push_back({times[k], v, mc.mean, mc.std_error, overlap2});
        }
    }
    out.main.footer["max_abs_deviation"] = worst;
    out.main.footer["rows_outside_3_stderr"] = outside;
    if (worst > 1e-9) {
        out.warnings.push_back("exact_V and abs2_overlap differ by " + format_number(worst) + " (> 1e-9)");
    }
    add_period(out, times, v_column, log_period(params, base_of(c)), "exact_V");
    return out;
}

CommandOutput run(Command command, const RunConfig& resolved) {
    switch (command) {
        case Command::spectrum: return cmd_spectrum(resolved);
        case Command::dynamics: return cmd_dynamics(resolved);
        case Command::landscape: return cmd_landscape(resolved);
        case Command::husimi: return cmd_husimi(resolved);
        case Command::hom: return cmd_hom(resolved);
    }
    throw Error("unknown command");
}

void write_csv(std::ostream& os, Command command, const RunConfig& config, const Table& table) {
    os << "# " << kVersion << '\n';
    os << "# command: " << to_string(command) << '\n';
    os << "# config: " << config_to_json(config).dump() << '\n';
    for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
        os << '\n';
    }
    if (!table.footer.empty()) os << "# footer: " << table.footer.dump() << '\n';
}

void write_json(std::ostream& os, Command command, const RunConfig& config, const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const Cell& cell : row) {
            if (const bool* b = std::get_if<bool>(&cell)) r.push_back(*b);
            else r.push_back(number_or_null(std::get<double>(cell)));
        }
        rows.push_back(std::move(r));
    }
    json doc = {{"version", kVersion}, {"command", to_string(command)}, {"config", config_to_json(config)},
                {"columns", table.columns}, {"rows", std::move(rows)}, {"footer", table.footer}};
    os << doc.dump() << '\n';
}

namespace {

void write_table(std::ostream& os, Command command, const RunConfig& config, const Table& table) {
    if (config.output.format == OutputFormat::csv) write_csv(os, command, config, table);
    else write_json(os, command, config, table);
}

void write_file(const std::filesystem::path& path, Command command, const RunConfig& config, const Table& table) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("output.path", "cannot open " + path.string() + " for writing");
    write_table(file, command, config, table);
    if (!file) throw Error("failed writing " + path.string());
}

}  // namespace

int execute(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        RunConfig resolved = resolve(config, command);
        CommandOutput result = run(command, resolved);
        for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
        if (resolved.output.path.empty()) {
            write_table(out, command, resolved, result.main);
        } else {
            write_file(resolved.output.path, command, resolved, result.main);
            for (const auto& [suffix, table] : result.companions) {
                write_file(companion_path(resolved.output.path, suffix, resolved.output.format), command, resolved,
                           table);
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        err << "resource bound: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace logcrystal::cli
