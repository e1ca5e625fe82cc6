#pragma once

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsync {

enum class Source { Grid, Generator, None };

inline const char* source_name(Source s) {
    switch (s) {
        case Source::Grid: return "Grid";
        case Source::Generator: return "Generator";
        default: return "None";
    }
}

/// Hourly rate curve, rupees per kWh. 24 entries, hour 0 through 23.
struct TariffCurve {
    Source source = Source::Grid;
    std::vector<double> rates;  // size 24

    void validate() const {
        if (rates.size() != 24) throw std::invalid_argument("TariffCurve: need exactly 24 rates");
        for (double r : rates) {
            if (r <= 0.0) throw std::invalid_argument("TariffCurve: rates must be > 0");
        }
    }
};

struct LoadProfile {
    std::vector<double> demand_kW;  // size 24

    void validate() const {
        if (demand_kW.size() != 24) throw std::invalid_argument("LoadProfile: need exactly 24 hours");
        for (double d : demand_kW) {
            if (d < 0.0) throw std::invalid_argument("LoadProfile: demand must be >= 0");
        }
    }
};

struct DispatchOptions {
    double startup_cost_rupees = 2.0;
    double hysteresis_margin = 0.0;  // rupees/kWh
    bool power_saver = false;
    int min_run_hours = 0;
};

struct DispatchSchedule {
    std::vector<Source> assignment;  // one per hour
    double total_cost_rupees = 0.0;
    int switch_count = 0;
};

inline double tariff_at(const TariffCurve& curve, int hour) {
    if (hour < 0 || hour >= static_cast<int>(curve.rates.size())) {
        throw std::out_of_range("tariff_at: hour out of range");
    }
    return curve.rates[static_cast<std::size_t>(hour)];
}

/// Cost of a fixed assignment. Each Grid->Generator transition is charged the
/// startup cost; with power_saver the set idles between runs, so only the
/// first start pays it.
inline double assignment_cost(const std::vector<Source>& assignment,
                              const std::vector<double>& load,
                              const std::vector<double>& grid_rates,
                              const std::vector<double>& gen_rates,
                              const DispatchOptions& opts) {
    double total = 0.0;
    bool gen_started_before = false;
    Source prev = Source::Grid;
    for (std::size_t h = 0; h < assignment.size(); ++h) {
        double rate = assignment[h] == Source::Generator ? gen_rates[h] : grid_rates[h];
        total += load[h] * rate;
        if (assignment[h] == Source::Generator && prev != Source::Generator) {
            if (!(opts.power_saver && gen_started_before)) total += opts.startup_cost_rupees;
            gen_started_before = true;
        }
        prev = assignment[h];
    }
    return total;
}

/// Greedy hour-wise selection with tie/margin hysteresis: pick the strictly
/// cheaper source when it beats the other by more than the margin, otherwise
/// keep running whatever ran the previous hour. Hour 0 starts from Grid.
inline std::vector<Source> greedy_assignment(const std::vector<double>& grid_rates,
                                             const std::vector<double>& gen_rates,
                                             const DispatchOptions& opts) {
    std::vector<Source> assignment(grid_rates.size());
    Source prev = Source::Grid;
    for (std::size_t h = 0; h < grid_rates.size(); ++h) {
        Source pick = prev;
        if (gen_rates[h] < grid_rates[h] - opts.hysteresis_margin) pick = Source::Generator;
        else if (grid_rates[h] < gen_rates[h] - opts.hysteresis_margin) pick = Source::Grid;
        assignment[h] = pick;
        prev = pick;
    }
    return assignment;
}

inline int count_switches(const std::vector<Source>& assignment) {
    int n = 0;
    for (std::size_t h = 1; h < assignment.size(); ++h) {
        if (assignment[h] != assignment[h - 1]) ++n;
    }
    return n;
}

inline DispatchSchedule build_schedule(const TariffCurve& grid, const TariffCurve& gen,
                                       const LoadProfile& load, const DispatchOptions& opts) {
    grid.validate();
    gen.validate();
    load.validate();
    DispatchSchedule s;
    s.assignment = greedy_assignment(grid.rates, gen.rates, opts);
    s.switch_count = count_switches(s.assignment);
    s.total_cost_rupees = assignment_cost(s.assignment, load.demand_kW, grid.rates, gen.rates, opts);
    return s;
}

inline double schedule_cost(const DispatchSchedule& s, const LoadProfile& load,
                            const TariffCurve& grid, const TariffCurve& gen,
                            const DispatchOptions& opts) {
    if (s.assignment.size() != load.demand_kW.size()) {
        throw std::invalid_argument("schedule_cost: length mismatch");
    }
    return assignment_cost(s.assignment, load.demand_kW, grid.rates, gen.rates, opts);
}

// ---- file formats -------------------------------------------------------
//
// Tariff file: one record per line, `hour_start hour_end rate`, half-open
// hour ranges covering 0..24. Load file: `hour value`, one line per hour.
// `#` starts a comment.

namespace detail {
inline bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}
}  // namespace detail

inline TariffCurve parse_tariff(const std::string& text, Source source) {
    TariffCurve curve;
    curve.source = source;
    curve.rates.assign(24, 0.0);
    std::vector<bool> covered(24, false);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ls(line);
        int h0, h1;
        double rate;
        if (!(ls >> h0 >> h1 >> rate)) {
            throw std::invalid_argument("tariff line " + std::to_string(lineno) +
                                        ": expected `hour_start hour_end rate`");
        }
        if (h0 < 0 || h1 > 24 || h0 >= h1) {
            throw std::invalid_argument("tariff line " + std::to_string(lineno) +
                                        ": bad hour range");
        }
        if (rate <= 0.0) {
            throw std::invalid_argument("tariff line " + std::to_string(lineno) +
                                        ": rate must be > 0");
        }
        for (int h = h0; h < h1; ++h) {
            if (covered[static_cast<std::size_t>(h)]) {
                throw std::invalid_argument("tariff line " + std::to_string(lineno) +
                                            ": hour " + std::to_string(h) + " covered twice");
            }
            covered[static_cast<std::size_t>(h)] = true;
            curve.rates[static_cast<std::size_t>(h)] = rate;
        }
    }
    for (int h = 0; h < 24; ++h) {
        if (!covered[static_cast<std::size_t>(h)]) {
            throw std::invalid_argument("tariff: hour " + std::to_string(h) + " not covered");
        }
    }
    return curve;
}

inline LoadProfile parse_load(const std::string& text) {
    LoadProfile profile;
    profile.demand_kW.assign(24, -1.0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ls(line);
        int hour;
        double value;
        if (!(ls >> hour >> value)) {
            throw std::invalid_argument("load line " + std::to_string(lineno) +
                                        ": expected `hour value`");
        }
        if (hour < 0 || hour > 23) {
            throw std::invalid_argument("load line " + std::to_string(lineno) + ": bad hour");
        }
        if (value < 0.0) {
            throw std::invalid_argument("load line " + std::to_string(lineno) +
                                        ": demand must be >= 0");
        }
        profile.demand_kW[static_cast<std::size_t>(hour)] = value;
    }
    for (int h = 0; h < 24; ++h) {
        if (profile.demand_kW[static_cast<std::size_t>(h)] < 0.0) {
            throw std::invalid_argument("load: hour " + std::to_string(h) + " missing");
        }
    }
    return profile;
}

inline std::string export_tariff(const TariffCurve& curve) {
    std::ostringstream out;
    int h = 0;
    while (h < 24) {
        int h1 = h + 1;
        while (h1 < 24 && curve.rates[static_cast<std::size_t>(h1)] ==
                              curve.rates[static_cast<std::size_t>(h)]) {
            ++h1;
        }
        out << h << ' ' << h1 << ' ' << curve.rates[static_cast<std::size_t>(h)] << '\n';
        h = h1;
    }
    return out.str();
}

inline std::string export_load(const LoadProfile& profile) {
    std::ostringstream out;
    for (int h = 0; h < 24; ++h) {
        out << h << ' ' << profile.demand_kW[static_cast<std::size_t>(h)] << '\n';
    }
    return out.str();
}

}  // namespace gridsync
