#include "cli/commands.hpp"

#include "rvkit/diagnostics.hpp"
#include "rvkit/errors.hpp"
#include "rvkit/inference.hpp"
#include "rvkit/io.hpp"
#include "rvkit/losses.hpp"
#include "rvkit/protocol.hpp"
#include "rvkit/series.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace rvkit::cli {

namespace {

struct Context {
    std::ostream& out;
    std::ostream& err;
};

void emit(const Context& ctx, const std::string& out_path, const io::Table& table) {
    const std::string csv = table.to_csv();
    if (out_path.empty() || out_path == "-") {
        ctx.out << csv;
    } else {
        io::write_file_atomic(out_path, csv);
    }
}

std::vector<double> parse_list(const std::string& text, std::string_view what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        values.push_back(io::parse_double(item, what));
    }
    return values;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

std::string fmt(double v) { return io::format_shortest(v); }

// Runs body(i) for i in [0, count) on up to `jobs` threads, stopping at the
// first failure and rethrowing it.
template <typename Body>
void run_jobs(std::size_t count, std::size_t jobs, Body body) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            {
                const std::lock_guard<std::mutex> lock(mutex);
                if (failure) {
                    return;
                }
            }
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < jobs; ++w) {
            pool.emplace_back(worker);
        }
        worker();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

struct PanelInputs {
    std::string data;
    std::vector<std::string> forecasts;
    std::vector<std::string> symbols;
    std::string from;
    std::string to;
    std::string out;
};

void add_panel_options(CLI::App* cmd, PanelInputs& in) {
    cmd->add_option("--data", in.data, "Canonical RV CSV")->required();
    cmd->add_option("--forecasts", in.forecasts, "Forecast CSV files")->required();
    cmd->add_option("--symbol", in.symbols, "Restrict to these symbols");
    cmd->add_option("--from", in.from, "First date of the evaluation window");
    cmd->add_option("--to", in.to, "Last date of the evaluation window");
    cmd->add_option("--out", in.out, "Output CSV (default: standard output)");
}

// One aligned panel per symbol, in order of first appearance in the
// forecast files.
std::vector<eval::AlignedPanel> load_panels(const PanelInputs& in) {
    const std::map<std::string, RvSeries> data = io::read_canonical_csv(in.data);
    std::vector<std::string> order;
    std::map<std::string, std::vector<eval::ForecastSet>> by_symbol;
    for (const std::string& file : in.forecasts) {
        for (eval::ForecastSet& set : io::read_forecasts(file)) {
            const std::string symbol = set.symbol();
            if (!in.symbols.empty() &&
                std::find(in.symbols.begin(), in.symbols.end(), symbol) == in.symbols.end()) {
                continue;
            }
            if (by_symbol.find(symbol) == by_symbol.end()) {
                order.push_back(symbol);
            }
            by_symbol[symbol].push_back(std::move(set));
        }
    }
    if (order.empty()) {
        throw DomainError("no forecasts to evaluate");
    }
    eval::DateWindow window;
    if (!in.from.empty()) {
        window.first = TradingDay::parse(in.from);
    }
    if (!in.to.empty()) {
        window.last = TradingDay::parse(in.to);
    }
    std::vector<eval::AlignedPanel> panels;
    for (const std::string& symbol : order) {
        const RvSeries& series = io::find_series(data, symbol);
        std::vector<eval::ForecastSet>& sets = by_symbol[symbol];
        if (series.symbol() != symbol) {
            // ".AEX" in one file and "AEX" in the other.
            RvSeries renamed(symbol, {series.observations().begin(), series.observations().end()});
            panels.push_back(eval::align(renamed, sets, window));
        } else {
            panels.push_back(eval::align(series, sets, window));
        }
    }
    return panels;
}

std::vector<loss::LossSeries> all_losses(loss::LossKind kind, const eval::AlignedPanel& panel) {
    std::vector<loss::LossSeries> out;
    for (const std::string& id : panel.model_ids()) {
        out.push_back(loss::loss_series(kind, panel, id));
    }
    return out;
}

io::Table summarize_table(const SummaryTable& summary) {
    io::Table t;
    t.header = {"label", "count", "min", "mean", "sd", "median", "max"};
    for (const SummaryRow& r : summary.rows) {
        t.rows.push_back({r.label, std::to_string(r.count), fmt(r.min), fmt(r.mean), fmt(r.sd),
                          fmt(r.median), fmt(r.max)});
    }
    return t;
}

// Business-day calendar starting on a Monday.
std::vector<TradingDay> business_days(std::size_t n) {
    std::vector<TradingDay> days;
    std::chrono::sys_days d = std::chrono::sys_days{std::chrono::year{2010} / 1 / 4};
    while (days.size() < n) {
        const std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
            days.emplace_back(std::chrono::year_month_day{d});
        }
        d += std::chrono::days{1};
    }
    return days;
}

}  // namespace

RvSeries synthetic_series(const std::string& symbol, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.7, 1.0);
    const std::size_t burn = 200;
    std::vector<double> logrv(n + burn, std::log(1e-4));
    for (std::size_t t = 22; t < n + burn; ++t) {
        double w = 0.0;
        double m = 0.0;
        for (std::size_t k = 1; k <= 22; ++k) {
            m += logrv[t - k];
            if (k <= 5) {
                w += logrv[t - k];
            }
        }
        logrv[t] = -9.21 * 0.1 + 0.4 * logrv[t - 1] + 0.3 * (w / 5.0) + 0.2 * (m / 22.0) +
                   0.35 * normal(rng);
    }
    const std::vector<TradingDay> days = business_days(n);
    std::vector<RvObservation> obs;
    double close = 100.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rv = std::exp(logrv[i + burn]);
        close *= std::exp(std::sqrt(rv) * normal(rng));
        obs.push_back(RvObservation{days[i], close, rv, rv * uniform(rng)});
    }
    return RvSeries(symbol, std::move(obs));
}

namespace {

int cmd_ingest(const Context& ctx, const std::string& omi, const std::string& out,
               std::optional<double> floor) {
    ZeroRvPolicy policy;
    policy.floor = floor;
    const io::OmiData data = io::parse_omi_csv(omi, policy);
    std::size_t rows = 0;
    for (const auto& [symbol, series] : data.series) {
        rows += series.size();
    }
    io::write_canonical_csv(data.series, out);
    ctx.err << "ingested " << data.series.size() << " symbols, " << rows << " rows; "
            << data.zero_rv_rows << " rows with rv <= 0 " << (floor ? "floored" : "dropped")
            << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Context ctx{out, err};
    CLI::App app{"Realized-volatility forecasting and forecast-evaluation toolkit", "rvkit"};
    app.require_subcommand(1);

    // ingest
    std::string omi_path;
    std::string out_path;
    std::optional<double> ingest_floor;
    CLI::App* ingest = app.add_subcommand("ingest", "Convert an Oxford-Man export to canonical CSV");
    ingest->add_option("--omi", omi_path, "Oxford-Man realized library CSV")->required();
    ingest->add_option("--out", out_path, "Canonical CSV to write")->required();
    ingest->add_option("--floor", ingest_floor, "Replace rv <= 0 by this value instead of dropping");

    // summarize
    std::string data_path;
    std::string symbol;
    std::string segments = "0.5,0.7,0.9,1.0";
    std::string transform = "volatility";
    CLI::App* summarize = app.add_subcommand("summarize", "Descriptive statistics by segment");
    summarize->add_option("--data", data_path, "Canonical RV CSV")->required();
    summarize->add_option("--symbol", symbol, "Symbol")->required();
    summarize->add_option("--segments", segments, "Segment breakpoints");
    summarize->add_option("--transform", transform, "variance or volatility")
        ->check(CLI::IsMember({"variance", "volatility"}));
    summarize->add_option("--out", out_path, "Output CSV (default: standard output)");

    // backtest
    std::vector<std::string> symbols;
    std::vector<std::string> model_names;
    bool log_flag = false;
    bool log_correction = false;
    std::size_t jobs = 1;
    double floor = 1e-10;
    std::uint64_t seed = 20240601;
    std::string scheme = "expanding";
    std::string char_target = "rv";
    int arfima_p = 1;
    int arfima_q = 1;
    bool arfima_select = false;
    std::string rgarch_grid = "1,1";
    CLI::App* backtest = app.add_subcommand("backtest", "Re-estimate and forecast one day ahead");
    backtest->add_option("--data", data_path, "Canonical RV CSV")->required();
    backtest->add_option("--symbol", symbols, "Symbols (default: all)");
    backtest->add_option("--model", model_names, "har, char, arfima or rgarch")->required();
    backtest->add_flag("--log", log_flag, "Model log RV and exponentiate forecasts");
    backtest->add_flag("--log-variance-correction", log_correction,
                       "Add half the residual variance before exponentiating");
    backtest->add_option("--segments", segments, "Split breakpoints");
    backtest->add_option("--scheme", scheme, "expanding or rolling")
        ->check(CLI::IsMember({"expanding", "rolling"}));
    backtest->add_option("--floor", floor, "Lower bound applied to forecasts");
    backtest->add_option("--seed", seed, "Optimizer seed");
    backtest->add_option("--char-target", char_target, "rv or bpv")
        ->check(CLI::IsMember({"rv", "bpv"}));
    backtest->add_option("--arfima-p", arfima_p, "ARFIMA AR order")->check(CLI::Range(0, 2));
    backtest->add_option("--arfima-q", arfima_q, "ARFIMA MA order")->check(CLI::Range(0, 2));
    backtest->add_flag("--arfima-select", arfima_select, "Choose the ARFIMA order by AIC");
    backtest->add_option("--rgarch-grid", rgarch_grid, "Orders p,q separated by ';'");
    backtest->add_option("--jobs", jobs, "Concurrent (symbol, model) backtests")
        ->check(CLI::PositiveNumber);
    backtest->add_option("--out", out_path, "Forecast CSV (default: standard output)");

    // evaluation commands
    PanelInputs panel_in;
    std::string losses = "mse,mae,mape,mda,qlike,smape";
    std::string loss_name;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Aggregate losses per model");
    add_panel_options(evaluate, panel_in);
    evaluate->add_option("--losses", losses, "Comma-separated loss kinds");

    CLI::App* skill = app.add_subcommand("skill", "Loss ratios relative to each benchmark row");
    add_panel_options(skill, panel_in);
    skill->add_option("--loss", loss_name, "Loss kind")->required();

    std::optional<std::size_t> hac_lags;
    CLI::App* dmtest = app.add_subcommand("dmtest", "Pairwise Diebold-Mariano tests");
    add_panel_options(dmtest, panel_in);
    dmtest->add_option("--loss", loss_name, "Loss kind")->required();
    dmtest->add_option("--lags", hac_lags, "Newey-West lags (default: automatic)");

    std::string instruments = "constant";
    CLI::App* gwtest = app.add_subcommand("gwtest", "Pairwise Giacomini-White tests");
    add_panel_options(gwtest, panel_in);
    gwtest->add_option("--loss", loss_name, "Loss kind")->required();
    gwtest->add_option("--lags", hac_lags, "Newey-West lags (default: automatic)");
    gwtest->add_option("--instruments", instruments, "constant or lagged")
        ->check(CLI::IsMember({"constant", "lagged"}));

    double level = 0.95;
    std::size_t reps = 2000;
    double block = 12.0;
    std::string statistic = "range";
    CLI::App* mcs_cmd = app.add_subcommand("mcs", "Model confidence set");
    add_panel_options(mcs_cmd, panel_in);
    mcs_cmd->add_option("--loss", loss_name, "Loss kind")->required();
    mcs_cmd->add_option("--level", level, "Confidence level");
    mcs_cmd->add_option("--reps", reps, "Bootstrap replications");
    mcs_cmd->add_option("--block", block, "Expected block length");
    mcs_cmd->add_option("--seed", seed, "Bootstrap seed")->required();
    mcs_cmd->add_option("--statistic", statistic, "range or max")
        ->check(CLI::IsMember({"range", "max"}));
    mcs_cmd->add_option("--jobs", jobs, "Bootstrap threads")->check(CLI::PositiveNumber);

    std::string benchmark;
    std::string groups;
    CLI::App* deciles_cmd = app.add_subcommand("deciles", "Losses by quantile of realized variance");
    add_panel_options(deciles_cmd, panel_in);
    deciles_cmd->add_option("--loss", loss_name, "Loss kind")->required();
    deciles_cmd->add_option("--benchmark", benchmark, "Benchmark model id")->required();
    deciles_cmd->add_option("--groups", groups, "Groups lo,hi separated by ';' (default: deciles)");

    std::size_t synth_n = 1000;
    std::vector<std::string> synth_symbols{"SYN"};
    CLI::App* synth = app.add_subcommand("synth", "Write a synthetic canonical CSV fixture");
    synth->add_option("--out", out_path, "Canonical CSV to write")->required();
    synth->add_option("--n", synth_n, "Observations per symbol")->check(CLI::Range(30, 1000000));
    synth->add_option("--symbol", synth_symbols, "Symbols");
    synth->add_option("--seed", seed, "Generator seed");

    std::vector<const char*> argv;
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (ingest->parsed()) {
            return cmd_ingest(ctx, omi_path, out_path, ingest_floor);
        }
        if (summarize->parsed()) {
            const auto data = io::read_canonical_csv(data_path);
            const std::vector<double> bp = parse_list(segments, "--segments");
            const SummaryTable table = summary_stats(
                io::find_series(data, symbol), bp,
                transform == "variance" ? SummaryTransform::variance : SummaryTransform::volatility);
            emit(ctx, out_path, summarize_table(table));
            return ok;
        }
        if (backtest->parsed()) {
            const auto data = io::read_canonical_csv(data_path);
            std::vector<const RvSeries*> chosen;
            if (symbols.empty()) {
                for (const auto& [name, s] : data) {
                    chosen.push_back(&s);
                }
            } else {
                for (const std::string& name : symbols) {
                    chosen.push_back(&io::find_series(data, name));
                }
            }
            std::vector<eval::ModelSpec> specs;
            for (const std::string& name : model_names) {
                eval::ModelSpec spec;
                spec.kind = eval::parse_model_kind(name);
                spec.log_space = log_flag;
                spec.log_variance_correction = log_correction;
                spec.floor = floor;
                spec.seed = seed;
                spec.char_target =
                    char_target == "bpv" ? models::CharTarget::bpv : models::CharTarget::rv;
                spec.arfima_order = models::ArfimaOrder{arfima_p, arfima_q};
                spec.select_arfima_order = arfima_select;
                spec.rgarch_grid.clear();
                for (const std::string& pair : split(rgarch_grid, ';')) {
                    const std::vector<double> pq = parse_list(pair, "--rgarch-grid");
                    if (pq.size() != 2) {
                        throw DomainError("--rgarch-grid entries are p,q");
                    }
                    spec.rgarch_grid.push_back(models::RgarchOrder{
                        static_cast<std::size_t>(pq[0]), static_cast<std::size_t>(pq[1])});
                }
                specs.push_back(spec);
            }
            const std::vector<double> bp = parse_list(segments, "--segments");
            const eval::WindowScheme ws =
                scheme == "rolling" ? eval::WindowScheme::rolling : eval::WindowScheme::expanding;
            const std::size_t tasks = chosen.size() * specs.size();
            std::vector<eval::ForecastSet> results(tasks);
            run_jobs(tasks, jobs, [&](std::size_t i) {
                const RvSeries& series = *chosen[i / specs.size()];
                const eval::SplitPlan plan = eval::make_split_plan(series.size(), bp, ws);
                results[i] = eval::run_backtest(series, specs[i % specs.size()], plan).forecasts;
            });
            const std::string csv = io::format_forecasts(results);
            if (out_path.empty() || out_path == "-") {
                out << csv;
            } else {
                io::write_file_atomic(out_path, csv);
            }
            return ok;
        }
        if (evaluate->parsed()) {
            std::vector<loss::LossKind> kinds;
            for (const std::string& name : split(losses, ',')) {
                kinds.push_back(loss::parse_loss_kind(name));
            }
            io::Table t;
            t.header = {"symbol", "model", "P"};
            for (loss::LossKind k : kinds) {
                t.header.emplace_back(loss::to_string(k));
            }
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                for (const std::string& id : panel.model_ids()) {
                    std::vector<std::string> row{panel.symbol, id, std::to_string(panel.size())};
                    for (loss::LossKind k : kinds) {
                        row.push_back(fmt(loss::aggregate_loss(loss::loss_series(k, panel, id))));
                    }
                    t.rows.push_back(std::move(row));
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (skill->parsed()) {
            const loss::LossKind kind = loss::parse_loss_kind(loss_name);
            io::Table t;
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                const loss::SkillMatrix m = loss::skill_matrix(kind, panel);
                if (t.header.empty()) {
                    t.header = {"symbol", "benchmark", "orientation"};
                    t.header.insert(t.header.end(), m.model_ids.begin(), m.model_ids.end());
                } else if (t.header.size() != 3 + m.model_ids.size() ||
                           !std::equal(m.model_ids.begin(), m.model_ids.end(),
                                       t.header.begin() + 3)) {
                    throw DomainError("skill matrices need the same models for every symbol");
                }
                for (std::size_t i = 0; i < m.model_ids.size(); ++i) {
                    std::vector<std::string> row{
                        panel.symbol, m.model_ids[i],
                        m.higher_is_better ? "higher_is_better" : "lower_is_better"};
                    for (double r : m.ratios[i]) {
                        row.push_back(fmt(r));
                    }
                    t.rows.push_back(std::move(row));
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (dmtest->parsed()) {
            const loss::LossKind kind = loss::parse_loss_kind(loss_name);
            io::Table t;
            t.header = {"symbol",      "model_a", "model_b",  "statistic", "p_one_sided",
                        "p_two_sided", "n",       "hac_lags", "degenerate"};
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                const std::vector<loss::LossSeries> ls = all_losses(kind, panel);
                for (const auto& a : ls) {
                    for (const auto& b : ls) {
                        if (&a == &b) {
                            continue;
                        }
                        const stats::DmResult r = stats::dm_test(a, b, hac_lags);
                        t.rows.push_back({panel.symbol, a.model_id, b.model_id, fmt(r.statistic),
                                          fmt(r.p_one_sided), fmt(r.p_two_sided),
                                          std::to_string(r.n), std::to_string(r.hac_lags),
                                          r.degenerate ? "1" : "0"});
                    }
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (gwtest->parsed()) {
            const loss::LossKind kind = loss::parse_loss_kind(loss_name);
            const stats::GwInstruments inst = instruments == "lagged"
                                                  ? stats::GwInstruments::lagged_differential
                                                  : stats::GwInstruments::constant;
            io::Table t;
            t.header = {"symbol", "model_a", "model_b", "statistic", "p_value", "k", "degenerate"};
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                const std::vector<loss::LossSeries> ls = all_losses(kind, panel);
                for (std::size_t i = 0; i < ls.size(); ++i) {
                    for (std::size_t j = i + 1; j < ls.size(); ++j) {
                        const stats::GwResult r = stats::gw_test(ls[i], ls[j], inst, hac_lags);
                        t.rows.push_back({panel.symbol, ls[i].model_id, ls[j].model_id,
                                          fmt(r.statistic), fmt(r.p_value), std::to_string(r.k),
                                          r.degenerate ? "1" : "0"});
                    }
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (mcs_cmd->parsed()) {
            const loss::LossKind kind = loss::parse_loss_kind(loss_name);
            stats::BootstrapConfig config;
            config.replications = reps;
            config.expected_block_length = block;
            config.seed = seed;
            config.threads = jobs;
            io::Table t;
            t.header = {"symbol", "model", "mcs_p", "in_ssm", "elimination_order"};
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                const std::vector<loss::LossSeries> ls = all_losses(kind, panel);
                const stats::McsResult r =
                    stats::mcs(ls, config, level,
                               statistic == "max" ? stats::McsStatistic::max
                                                  : stats::McsStatistic::range);
                for (std::size_t k = 0; k < r.mcs_p.size(); ++k) {
                    const auto& [id, p] = r.mcs_p[k];
                    const bool kept =
                        std::find(r.retained.begin(), r.retained.end(), id) != r.retained.end();
                    t.rows.push_back({panel.symbol, id, fmt(p), kept ? "1" : "0",
                                      std::to_string(k + 1)});
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (deciles_cmd->parsed()) {
            const loss::LossKind kind = loss::parse_loss_kind(loss_name);
            std::vector<loss::QuantileGroup> qg;
            if (groups.empty()) {
                qg = loss::deciles();
            } else {
                for (const std::string& g : split(groups, ';')) {
                    const std::vector<double> lohi = parse_list(g, "--groups");
                    if (lohi.size() != 2) {
                        throw DomainError("--groups entries are lower,upper");
                    }
                    qg.push_back({lohi[0], lohi[1]});
                }
            }
            io::Table t;
            for (const eval::AlignedPanel& panel : load_panels(panel_in)) {
                const loss::DecileReport r = loss::decile_report(kind, panel, benchmark, qg);
                if (t.header.empty()) {
                    t.header = {"symbol", "lower_q", "upper_q", "periods"};
                    for (const auto& [id, values] : r.relative_losses) {
                        t.header.push_back(id);
                    }
                }
                for (std::size_t g = 0; g < r.groups.size(); ++g) {
                    std::vector<std::string> row{panel.symbol, fmt(r.groups[g].lower),
                                                 fmt(r.groups[g].upper),
                                                 std::to_string(r.group_sizes[g])};
                    for (const auto& [id, values] : r.relative_losses) {
                        row.push_back(fmt(values[g]));
                    }
                    t.rows.push_back(std::move(row));
                }
            }
            emit(ctx, panel_in.out, t);
            return ok;
        }
        if (synth->parsed()) {
            std::map<std::string, RvSeries> data;
            for (std::size_t i = 0; i < synth_symbols.size(); ++i) {
                data.emplace(synth_symbols[i], synthetic_series(synth_symbols[i], synth_n, seed + i));
            }
            io::write_canonical_csv(data, out_path);
            return ok;
        }
    } catch (const EstimationError& e) {
        err << "rvkit: estimation error: " << e.what() << '\n';
        return estimation_error;
    } catch (const Error& e) {
        err << "rvkit: error: " << e.what() << '\n';
        return data_error;
    } catch (const std::exception& e) {
        err << "rvkit: error: " << e.what() << '\n';
        return data_error;
    }
    return usage;
}

}  // namespace rvkit::cli
