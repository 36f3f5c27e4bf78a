#include "resilience/cli/commands.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "resilience/cli/csv.hpp"
#include "resilience/equilibrium.hpp"
#include "resilience/graph_store.hpp"
#include "resilience/kcore.hpp"
#include "resilience/powerlaw.hpp"
#include "resilience/temporal.hpp"

namespace resilience::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kDaysPerMonth = 365.2425 / 12.0;

void prepare_out(const RunConfig& config) {
    fs::create_directories(config.out);
}

const fs::path& single_input(const RunConfig& config) {
    if (config.inputs.size() != 1) throw std::invalid_argument("expected exactly one --input");
    return config.inputs.front();
}

bool is_graph_cache(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::array<char, 3> head{};
    in.read(head.data(), head.size());
    return in.gcount() == 3 && head == std::array<char, 3>{'C', 'L', 'G'};
}

// Graph caches are detected by magic; anything else is parsed as an edge list.
Graph load_graph(const fs::path& path, const RunConfig& config) {
    if (!fs::exists(path)) throw std::runtime_error("input '" + path.string() + "' does not exist");
    if (is_graph_cache(path)) return load_binary(path);
    return ingest_edge_list(path, parse_edge_list_format(config.format));
}

std::string dataset_name(const RunConfig& config, std::size_t i) {
    if (i < config.names.size()) return config.names[i];
    return config.inputs[i].stem().string();
}

Survival survival_mode(const RunConfig& config) {
    return config.strict ? Survival::Above : Survival::AtLeast;
}

DegreeBins make_bins(const std::string& spec, std::size_t max_degree) {
    if (spec == "log") return DegreeBins::logarithmic(10, max_degree);
    if (spec == "exact") return DegreeBins::exact(max_degree);
    std::size_t width = 0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), width);
    if (ec != std::errc{} || ptr != spec.data() + spec.size() || width == 0) {
        throw std::invalid_argument("--bins must be 'log', 'exact' or a positive bin width");
    }
    return DegreeBins::linear(width, max_degree);
}

void write_coreness(const fs::path& path, std::uint64_t seed, const Graph& g, const CorenessVector& core) {
    CsvWriter csv(path, seed, {"external_id", "degree", "coreness"});
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        const auto node = static_cast<NodeId>(v);
        csv.row(g.external_id(node), g.degree(node), core.k_s[v]);
    }
    csv.close();
}

void write_ccdf(const fs::path& path, std::uint64_t seed, const CorenessCCDF& c) {
    CsvWriter csv(path, seed, {"K", "count", "fraction"});
    for (std::size_t K = 0; K < c.counts.size(); ++K) csv.row(K, c.counts[K], c.fractions[K]);
    csv.close();
}

ReferencePoint parse_reference(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("reference point must look like YYYY-MM-DD:K");
    const auto k_text = text.substr(colon + 1);
    Coreness K = 0;
    auto [ptr, ec] = std::from_chars(k_text.data(), k_text.data() + k_text.size(), K);
    if (ec != std::errc{} || ptr != k_text.data() + k_text.size()) {
        throw std::invalid_argument("reference point threshold '" + k_text + "' is not an integer");
    }
    return {static_cast<double>(parse_iso_date(text.substr(0, colon))), K};
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse " + what + " '" + text + "'");
    }
}

}  // namespace

std::int64_t parse_iso_date(const std::string& text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2u-%2u%n", &y, &m, &d, &consumed) != 3 || consumed != 10 ||
        (text.size() > 10 && text[10] != 'T' && text[10] != ' ')) {
        throw std::invalid_argument("'" + text + "' is not an ISO-8601 date");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw std::invalid_argument("'" + text + "' is not a valid calendar date");
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string cmd_ingest(const RunConfig& config) {
    const auto& input = single_input(config);
    const Graph g = ingest_edge_list(input, parse_edge_list_format(config.format));
    prepare_out(config);
    save_binary(g, config.out / "graph.clg");
    CsvWriter csv(config.out / "summary.csv", config.seed, {"dataset", "n", "m", "max_degree"});
    csv.row(dataset_name(config, 0), g.num_nodes(), g.num_edges(), g.max_degree());
    csv.close();
    return "n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges()) +
           " max_degree=" + std::to_string(g.max_degree());
}

std::string cmd_kcore(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    const auto core = decompose(g);
    prepare_out(config);
    write_coreness(config.out / "coreness.csv", config.seed, g, core);

    CsvWriter shells(config.out / "shells.csv", config.seed, {"k_s", "count"});
    const auto sizes = shell_sizes(core);
    for (std::size_t k = 0; k < sizes.size(); ++k) shells.row(k, sizes[k]);
    shells.close();

    CsvWriter spread(config.out / "coreness_by_degree.csv", config.seed,
                     {"degree_lower", "degree_upper", "degree_middle", "count", "mean", "min", "q1", "median", "q3",
                      "max"});
    for (const auto& bin : coreness_by_degree(g, core, make_bins(config.bins, g.max_degree()))) {
        if (bin.stats) {
            const auto& s = *bin.stats;
            spread.row(bin.lower, bin.upper - 1, bin.middle, bin.count, s.mean, s.min, s.q1, s.median, s.q3, s.max);
        } else {
            spread.row(bin.lower, bin.upper - 1, bin.middle, bin.count, "", "", "", "", "", "");
        }
    }
    spread.close();
    return "k_max=" + std::to_string(core.k_max);
}

std::string cmd_resilience(const RunConfig& config) {
    if (config.inputs.empty()) throw std::invalid_argument("resilience needs at least one --input");
    for (double s : config.survival) {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("--survival levels must lie in (0, 1)");
    }
    prepare_out(config);
    CsvWriter merged(config.out / "resilience.csv", config.seed, {"dataset", "K", "count", "fraction"});
    CsvWriter catastrophic(config.out / "catastrophic.csv", config.seed, {"dataset", "survival", "K"});
    CsvWriter summary(config.out / "resilience_summary.csv", config.seed, {"dataset", "n", "m", "k_max"});
    std::ostringstream message;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
        const auto name = dataset_name(config, i);
        const Graph g = load_graph(config.inputs[i], config);
        const auto core = decompose(g);
        const auto curve = ccdf(core);
        write_coreness(config.out / ("coreness_" + name + ".csv"), config.seed, g, core);
        write_ccdf(config.out / ("ccdf_" + name + ".csv"), config.seed, curve);
        for (std::size_t K = 0; K < curve.counts.size(); ++K) merged.row(name, K, curve.counts[K], curve.fractions[K]);
        for (double s : config.survival) catastrophic.row(name, s, catastrophic_K(curve, s));
        summary.row(name, g.num_nodes(), g.num_edges(), core.k_max);
        message << (i ? " " : "") << name << ": k_max=" << core.k_max;
    }
    merged.close();
    catastrophic.close();
    summary.close();
    return message.str();
}

std::string cmd_equilibrium(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    const Environment env(config.c, config.b);
    const auto core = decompose(g);
    const auto result = equilibrium_network(g, core, env);
    const auto report = verify_equilibrium(g, result, env);
    const auto curve = ccdf(core);
    prepare_out(config);

    CsvWriter members(config.out / "equilibrium.csv", config.seed, {"external_id", "degree", "coreness", "utility"});
    for (std::size_t i = 0; i < result.members.size(); ++i) {
        const NodeId v = result.members[i];
        members.row(g.external_id(v), g.degree(v), core.k_s[v], result.utilities[i]);
    }
    members.close();

    CsvWriter summary(config.out / "equilibrium_summary.csv", config.seed,
                      {"c", "b", "K", "members", "fraction", "stable", "unhappy_members", "would_rejoin"});
    const double fraction = g.num_nodes() ? static_cast<double>(result.members.size()) / g.num_nodes() : 0.0;
    summary.row(config.c, config.b, result.K, result.members.size(), fraction, report.passed(),
                report.unhappy_members.size(), report.would_rejoin.size());
    summary.close();
    if (result.members.size() != curve.count_at_least(result.K)) {
        throw std::logic_error("equilibrium size disagrees with the coreness CCDF");
    }
    return "K=" + std::to_string(result.K) + " members=" + std::to_string(result.members.size()) +
           (report.passed() ? " stable" : " UNSTABLE");
}

std::string cmd_unravel(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    const auto curve = ccdf(decompose(g));
    const UnravelSchedule schedule(config.k0, config.rate, config.t0);
    const auto series = unravel(curve, schedule, config.horizon, config.step, survival_mode(config));
    prepare_out(config);
    CsvWriter csv(config.out / "unravel.csv", config.seed, {"t", "K", "remaining", "fraction"});
    for (const auto& p : series) csv.row(p.t, p.K, p.remaining, p.fraction);
    csv.close();
    return "steps=" + std::to_string(series.size()) + " final_remaining=" + std::to_string(series.back().remaining);
}

std::string cmd_fit(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    if (config.observed.empty()) throw std::invalid_argument("fit needs --observed");
    const auto curve = ccdf(decompose(g));
    const auto a = parse_reference(config.ref_a);
    const auto b = parse_reference(config.ref_b);
    const auto schedule = calibrate_schedule(a, b);
    const auto reference = curve.count_at_least(config.reference_k);
    if (reference == 0) throw std::invalid_argument("no nodes reach the --reference-k coreness");

    const auto table = read_csv(config.observed);
    auto column_or = [&table](const std::string& name, std::size_t fallback) {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == name) return i;
        }
        if (fallback >= table.header.size()) throw std::invalid_argument("observed CSV needs date,value columns");
        return fallback;
    };
    const auto date_col = column_or("date", 0);
    const auto value_col = column_or("value", 1);
    std::vector<TimePoint> observed;
    std::vector<TimePoint> predicted;
    for (const auto& row : table.rows) {
        const double t = static_cast<double>(parse_iso_date(row[date_col]));
        if (t < schedule.t0) continue;
        const double value = parse_double(row[value_col], "observed value");
        if (value < 0.0 || value > 100.0) throw std::invalid_argument("observed values must lie in [0, 100]");
        observed.push_back({t, value});
        const auto remaining = surviving_count(curve, schedule.threshold_at(t), survival_mode(config));
        predicted.push_back({t, 100.0 * static_cast<double>(remaining) / static_cast<double>(reference)});
    }
    const auto quality = fit_quality(predicted, observed, 0.5);

    prepare_out(config);
    CsvWriter points(config.out / "fit.csv", config.seed, {"date", "observed", "predicted", "residual"});
    for (const auto& p : quality.aligned) {
        points.row(format_iso_date(static_cast<std::int64_t>(p.t)), p.observed, p.predicted, p.residual);
    }
    points.close();
    CsvWriter summary(config.out / "fit_summary.csv", config.seed,
                      {"r2", "points", "K0", "rate_per_month", "start", "reference_count"});
    summary.row(quality.r_squared, quality.aligned.size(), schedule.K0, schedule.rate * kDaysPerMonth,
                format_iso_date(static_cast<std::int64_t>(schedule.t0)), reference);
    summary.close();
    return "R2=" + format_number(quality.r_squared) + " points=" + std::to_string(quality.aligned.size());
}

std::string cmd_plfit(const RunConfig& config) {
    const auto& input = single_input(config);
    DegreeSample sample = [&] {
        if (input.extension() == ".csv") {
            const auto table = read_csv(input);
            const auto dcol = table.column("degree");
            const auto ccol = table.column("count");
            std::map<std::uint64_t, std::uint64_t> hist;
            for (const auto& row : table.rows) {
                hist[std::stoull(row[dcol])] += std::stoull(row[ccol]);
            }
            return DegreeSample::from_histogram(hist);
        }
        return DegreeSample::from_graph(load_graph(input, config));
    }();

    const auto report = fit_power_law(sample, {config.trials, config.seed, config.threads});
    const auto& f = report.fit;
    const auto name = dataset_name(config, 0);
    prepare_out(config);
    CsvWriter row(config.out / "plfit.csv", config.seed,
                  {"dataset", "deg_min", "alpha", "n_tail", "D", "p", "range_decades", "tail_pct"});
    row.row(name, f.deg_min_hat, f.alpha_hat, f.n_tail, f.D, f.p_value, f.range_decades, 100.0 * f.tail_fraction);
    row.close();

    CsvWriter coverage(config.out / "plfit_coverage.csv", config.seed,
                       {"dataset", "trials", "retries", "narrow_range", "small_tail", "flagged"});
    coverage.row(name, config.trials, report.bootstrap.retries, report.coverage.narrow_range,
                 report.coverage.small_tail, report.coverage.flagged());
    coverage.close();

    if (config.per_trial) {
        CsvWriter trials(config.out / "plfit_trials.csv", config.seed, {"trial", "D"});
        for (std::size_t t = 0; t < report.bootstrap.synthetic_D.size(); ++t) {
            trials.row(t, report.bootstrap.synthetic_D[t]);
        }
        trials.close();
    }
    std::string p_text = f.p_value == 0.0 ? "<" + format_number(1.0 / static_cast<double>(config.trials))
                                          : format_number(f.p_value);
    std::string msg = "deg_min=" + std::to_string(f.deg_min_hat) + " alpha=" + format_number(f.alpha_hat) +
                      " D=" + format_number(f.D) + " p=" + p_text;
    if (report.coverage.flagged()) msg += " (tail coverage too small to support a power law)";
    if (report.bootstrap.excessive_retries()) msg += " (warning: more than 10% of synthetic samples were redrawn)";
    return msg;
}

std::string cmd_timeslice(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    if (g.num_nodes() == 0) throw std::invalid_argument("cannot slice an empty graph");
    if (config.baseline != "slice" && config.baseline != "center") {
        throw std::invalid_argument("--baseline must be 'slice' or 'center'");
    }
    const SliceSpec spec(config.width, config.origin.value_or(g.id_map().front()));
    const auto mode = config.baseline == "center" ? BaselineMode::SliceCenter : BaselineMode::SliceConditioned;
    const auto stats = slice_stats(g, spec, mode);
    prepare_out(config);
    CsvWriter csv(config.out / "timeslice.csv", config.seed,
                  {"t", "slice_start", "slice_end", "n", "e_in", "e_p", "e_f", "avg_deg_in", "P", "F", "baseline_P",
                   "baseline_F"});
    for (const auto& s : stats) {
        csv.row(s.t, s.bounds.start, s.bounds.end, s.node_count, s.internal_edges, s.past_edges, s.future_edges,
                s.internal_avg_degree, s.mean_past, s.mean_future, s.baseline.past, s.baseline.future);
    }
    csv.close();
    return "slices=" + std::to_string(stats.size());
}

std::string cmd_atrisk(const RunConfig& config) {
    const Graph g = load_graph(single_input(config), config);
    if (g.num_nodes() == 0) throw std::invalid_argument("cannot slice an empty graph");
    const SliceSpec spec(config.width, config.origin.value_or(g.id_map().front()));
    const auto core = decompose(g);
    const auto series = at_risk_series(g, core, spec, config.threshold, config.confidence);
    prepare_out(config);
    CsvWriter csv(config.out / "atrisk.csv", config.seed, {"t", "fraction", "ci_low", "ci_high"});
    for (const auto& p : series.points) {
        if (p.fraction) {
            csv.row(p.t, p.fraction, p.ci.lower, p.ci.upper);
        } else {
            csv.row(p.t, "", "", "");
        }
    }
    csv.close();
    return "threshold=" + std::to_string(series.threshold) + " slices=" + std::to_string(series.points.size());
}

}  // namespace resilience::cli
