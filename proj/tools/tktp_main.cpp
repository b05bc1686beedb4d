// tktp: tau-path screening toolkit command line.
//
// Subcommands: taupath, tktp, boundary, simulate, screen, bench.
// Option precedence: command-line flags > TKTP_* environment variables >
// --config key-value file > built-in defaults.
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tktp/bench.hpp"
#include "tktp/boundary_cache.hpp"
#include "tktp/correlation.hpp"
#include "tktp/errors.hpp"
#include "tktp/multistage.hpp"
#include "tktp/sample.hpp"
#include "tktp/screen.hpp"
#include "tktp/simstudy.hpp"
#include "tktp/taupath.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    double alpha = 0.05;
    int window = 5;
    int nsim = 10000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    std::string tie_break = "first";
    std::string algo = "fastbcs2";
    std::string cache_dir;
    std::string format = "csv";
    std::string config_file;

    tktp::BcsPolicy policy() const {
        tktp::BcsPolicy p;
        p.tie_break = tie_break == "random" ? tktp::TieBreak::seeded_random
                                            : tktp::TieBreak::first_element;
        p.seed = seed;
        p.algorithm = algo == "fastbcs" ? tktp::BcsAlgorithm::fastbcs
                                        : tktp::BcsAlgorithm::fastbcs2;
        p.parallel_colsums = true;
        p.threads = threads;
        return p;
    }

    tktp::TktpConfig tktp_config() const {
        tktp::TktpConfig c;
        c.alpha = alpha;
        c.window = window;
        c.nsim = nsim;
        c.seed = seed;
        c.policy = policy();
        c.cache_dir = cache_dir;
        c.threads = threads;
        return c;
    }
};

// One configurable knob: CLI option plus its environment/config fallbacks.
struct Knob {
    CLI::Option* opt;
    std::string env;
    std::string key;
    std::function<void(const std::string&)> apply;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: expected key = value at line " + std::to_string(line_no));
        auto trim = [](std::string t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : t.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

class KnobSet {
  public:
    void add(CLI::Option* opt, const std::string& env, const std::string& key,
             std::function<void(const std::string&)> apply) {
        knobs_.push_back({opt, env, key, std::move(apply)});
    }

    // Fill non-flag values from environment, then config file.
    void resolve(const std::string& config_file) const {
        std::map<std::string, std::string> file_kv;
        if (!config_file.empty()) file_kv = read_config_file(config_file);
        for (const auto& k : knobs_) {
            if (k.opt != nullptr && k.opt->count() > 0) continue;
            if (const char* env = std::getenv(k.env.c_str()); env != nullptr && *env != '\0') {
                k.apply(env);
                continue;
            }
            if (const auto it = file_kv.find(k.key); it != file_kv.end()) k.apply(it->second);
        }
    }

  private:
    std::vector<Knob> knobs_;
};

void validate_common(const Common& c) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must be in (0, 1)");
    if (c.window < 1) throw UsageError("--window must be >= 1");
    if (c.nsim < 1) throw UsageError("--nsim must be >= 1");
    if (c.threads < 0) throw UsageError("--threads must be >= 1 (or omitted)");
    if (c.tie_break != "first" && c.tie_break != "random")
        throw UsageError("--tie-break must be 'first' or 'random'");
    if (c.algo != "fastbcs" && c.algo != "fastbcs2")
        throw UsageError("--algo must be 'fastbcs' or 'fastbcs2'");
    if (c.format != "csv" && c.format != "json")
        throw UsageError("--format must be 'csv' or 'json'");
}

KnobSet add_common(CLI::App* cmd, Common& c) {
    KnobSet knobs;
    auto num = [](auto& target) {
        return [&target](const std::string& v) {
            std::istringstream is(v);
            if (!(is >> target) || !is.eof()) throw UsageError("bad numeric value '" + v + "'");
        };
    };
    auto str = [](std::string& target) {
        return [&target](const std::string& v) { target = v; };
    };

    knobs.add(cmd->add_option("--alpha", c.alpha, "Significance level (default 0.05)"),
              "TKTP_ALPHA", "alpha", num(c.alpha));
    knobs.add(cmd->add_option("--window", c.window, "MAMLE window width (default 5)"),
              "TKTP_WINDOW", "window", num(c.window));
    knobs.add(cmd->add_option("--nsim", c.nsim, "Null-boundary simulation count (default 10000)"),
              "TKTP_NSIM", "nsim", num(c.nsim));
    knobs.add(cmd->add_option("--seed", c.seed, "RNG seed (default 1)"), "TKTP_SEED", "seed",
              num(c.seed));
    knobs.add(cmd->add_option("--threads", c.threads, "Worker threads (default: hardware)"),
              "TKTP_THREADS", "threads", num(c.threads));
    knobs.add(cmd->add_option("--tie-break", c.tie_break, "Tie policy: first|random"),
              "TKTP_TIE_BREAK", "tie-break", str(c.tie_break));
    knobs.add(cmd->add_option("--algo", c.algo, "Search algorithm: fastbcs|fastbcs2"),
              "TKTP_ALGO", "algo", str(c.algo));
    knobs.add(cmd->add_option("--cache-dir", c.cache_dir, "Boundary cache directory"),
              "TKTP_CACHE_DIR", "cache-dir", str(c.cache_dir));
    knobs.add(cmd->add_option("--format", c.format, "Output format: csv|json"), "TKTP_FORMAT",
              "format", str(c.format));
    cmd->add_flag_callback("--json", [&c] { c.format = "json"; },
                           "Shorthand for --format json");
    cmd->add_option("--config", c.config_file, "Key-value config file");
    return knobs;
}

// Two-column x,y CSV; a non-numeric first row is treated as a header.
tktp::Sample read_xy_csv(const std::string& path, bool negate) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file " + path);
    std::vector<double> xs, ys;
    std::string line;
    long row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), '\t', ',');
        std::istringstream is(line);
        std::string a, b, extra;
        if (!std::getline(is, a, ',') || !std::getline(is, b, ','))
            throw tktp::DataError("expected two columns", row_no);
        if (std::getline(is, extra, ',') && extra.find_first_not_of(" \t\r") != std::string::npos)
            throw tktp::DataError("expected two columns", row_no);
        try {
            std::size_t pa = 0, pb = 0;
            const double x = std::stod(a, &pa);
            const double y = std::stod(b, &pb);
            xs.push_back(x);
            ys.push_back(y);
        } catch (...) {
            if (row_no == 1 && xs.empty()) continue;  // header row
            throw tktp::DataError("unparseable row '" + line + "'", row_no);
        }
    }
    if (xs.empty()) throw UsageError("input file " + path + " holds no data");
    tktp::Sample s(std::move(xs), std::move(ys));
    return negate ? tktp::negate_y(s) : s;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw UsageError("cannot open output file " + path);
    return file;
}

// --- taupath ---------------------------------------------------------------

int cmd_taupath(const std::string& input, const Common& c, bool negate,
                const std::string& out_path) {
    const tktp::Sample s = read_xy_csv(input, negate);
    const tktp::TauPathResult r = tktp::tau_path(s, c.policy());
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (c.format == "json") {
        json j;
        j["n"] = s.size();
        j["algorithm"] = c.algo;
        j["tie_break"] = c.tie_break;
        j["negate"] = negate;
        j["pi"] = r.pi;
        j["tau"] = r.tau;
        os << j.dump(2) << '\n';
    } else {
        os << "stage,id,tau\n";
        for (std::size_t k = 1; k <= s.size(); ++k)
            os << k << ',' << r.pi[k - 1] << ',' << r.tau[k - 1] << '\n';
    }
    return 0;
}

// --- tktp ------------------------------------------------------------------

int cmd_tktp(const std::string& input, const Common& c, bool negate, const std::string& out_path) {
    const tktp::Sample s = read_xy_csv(input, negate);
    const tktp::TktpConfig cfg = c.tktp_config();
    const auto n = static_cast<std::int32_t>(s.size());
    const tktp::RejectBoundary boundary =
        cfg.cache_dir.empty()
            ? tktp::generate_reject_boundary(n, cfg.window, cfg.nsim, cfg.alpha, cfg.seed,
                                             cfg.policy, cfg.threads)
            : tktp::load_or_generate_boundary(cfg.cache_dir, n, cfg.window, cfg.nsim, cfg.alpha,
                                              cfg.seed, cfg.policy, cfg.threads);
    const tktp::TktpSelection sel = tktp::tktp(s, cfg, boundary);

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (c.format == "json") {
        json j;
        j["n"] = n;
        j["alpha"] = c.alpha;
        j["window"] = c.window;
        j["nsim"] = c.nsim;
        j["seed"] = c.seed;
        j["algorithm"] = c.algo;
        j["tie_break"] = c.tie_break;
        j["negate"] = negate;
        j["k_hat"] = sel.k_hat;
        j["selected"] = sel.selected;
        json stages = json::array();
        for (std::int32_t st = sel.mamle.first_stage(); st <= n; ++st) {
            stages.push_back({{"stage", st},
                              {"id", sel.taupath.pi[static_cast<std::size_t>(st) - 1]},
                              {"tau", sel.taupath.tau[static_cast<std::size_t>(st) - 1]},
                              {"theta", sel.mamle.at_stage(st)},
                              {"q", boundary.at_stage(st)}});
        }
        j["stages"] = stages;
        os << j.dump(2) << '\n';
    } else {
        os << "stage,id,tau,theta,q,selected\n";
        for (std::int32_t st = 1; st <= n; ++st) {
            os << st << ',' << sel.taupath.pi[static_cast<std::size_t>(st) - 1] << ','
               << sel.taupath.tau[static_cast<std::size_t>(st) - 1] << ',';
            if (st >= sel.mamle.first_stage())
                os << sel.mamle.at_stage(st) << ',' << boundary.at_stage(st);
            else
                os << ',';
            os << ',' << (st <= sel.k_hat ? 1 : 0) << '\n';
        }
    }
    return 0;
}

// --- boundary ---------------------------------------------------------------

int cmd_boundary(int n, const Common& c, const std::string& out_path) {
    if (n < c.window + 2) throw UsageError("--n must be at least window + 2");
    const tktp::RejectBoundary b =
        c.cache_dir.empty()
            ? tktp::generate_reject_boundary(n, c.window, c.nsim, c.alpha, c.seed, c.policy(),
                                             c.threads)
            : tktp::load_or_generate_boundary(c.cache_dir, n, c.window, c.nsim, c.alpha, c.seed,
                                              c.policy(), c.threads);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (c.format == "json") {
        json j;
        j["n"] = b.n;
        j["window"] = b.window;
        j["alpha"] = b.alpha;
        j["nsim"] = b.nsim;
        j["seed"] = b.seed;
        j["q"] = b.q;
        os << j.dump(2) << '\n';
    } else {
        os << "stage,q\n";
        for (std::int32_t st = b.first_stage(); st <= b.n; ++st)
            os << st << ',' << b.at_stage(st) << '\n';
    }
    return 0;
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(const std::string& grid_path, const Common& c, const KnobSet&,
                 const std::string& out_path, const std::string& raw_path, bool csv_only) {
    tktp::simstudy::ExperimentGrid grid = tktp::simstudy::load_grid(grid_path);
    grid.config.policy = c.policy();
    grid.config.cache_dir = c.cache_dir;
    grid.config.threads = c.threads;
    (void)csv_only;

    const tktp::simstudy::GridResult result = tktp::simstudy::run_grid(grid, !raw_path.empty());

    if (!raw_path.empty()) {
        std::ofstream raw(raw_path);
        if (!raw) throw UsageError("cannot open raw output file " + raw_path);
        tktp::simstudy::write_raw_csv(raw, result);
    }
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (c.format == "json") {
        json cells = json::array();
        for (const auto& cell : result.cells) {
            cells.push_back(
                {{"strength", cell.cell.strength},
                 {"p", cell.cell.p},
                 {"n", cell.cell.n},
                 {"replicates", cell.replicates},
                 {"mean_stopping_point", cell.mean_stopping_point},
                 {"mean_coverage_count", cell.mean_coverage_count},
                 {"mean_percent_covered", cell.mean_percent_covered},
                 {"mean_percent_selected", cell.mean_percent_selected},
                 {"rate_of_coverage", cell.rate_of_coverage},
                 {"se_rate", cell.se_rate}});
        }
        os << cells.dump(2) << '\n';
    } else {
        tktp::simstudy::write_summary_csv(os, result.cells);
    }
    return 0;
}

// --- screen -------------------------------------------------------------------

int cmd_screen(const std::string& table_path, const Common& c, const std::string& predictor,
               int lag, double min_fraction, double jthreshold, bool negate,
               const std::string& out_path, const std::string& weekly_csv) {
    const tktp::screen::PriceTable table = tktp::screen::load_price_csv(table_path);
    tktp::screen::ScreenConfig cfg;
    cfg.tktp = c.tktp_config();
    cfg.min_fraction = min_fraction;
    cfg.negate = negate;
    cfg.threads = c.threads;
    const tktp::screen::ScreenOutcome outcome =
        tktp::screen::screen_pairs(table, predictor, lag, cfg);

    json doc;
    doc["config"] = {{"predictor", predictor}, {"lag", lag},
                     {"alpha", c.alpha},       {"window", c.window},
                     {"nsim", c.nsim},         {"seed", c.seed},
                     {"algorithm", c.algo},    {"tie_break", c.tie_break},
                     {"negate", negate},       {"min_fraction", min_fraction},
                     {"jaccard_threshold", jthreshold}};
    json pairs = json::array();
    for (const auto& pr : outcome.all) {
        json selected_labels = json::array();
        for (const std::int32_t t : pr.selection)
            selected_labels.push_back(table.dates[static_cast<std::size_t>(t)]);
        pairs.push_back({{"name", pr.name},
                         {"lag", pr.lag},
                         {"n", pr.n_pairs},
                         {"k_hat", pr.k_hat},
                         {"fraction", pr.fraction},
                         {"pearson", pr.pearson},
                         {"kendall", pr.kendall},
                         {"passed", pr.fraction >= min_fraction},
                         {"selected", selected_labels}});
    }
    doc["pairs"] = pairs;
    json errors = json::array();
    for (const auto& err : outcome.errors)
        errors.push_back({{"name", err.name}, {"message", err.message}});
    doc["errors"] = errors;

    if (!outcome.passed.empty()) {
        const tktp::screen::ClusterReport report =
            tktp::screen::complete_linkage_clusters(outcome.passed, jthreshold);
        json clusters = json::array();
        for (std::size_t i = 0; i < report.clusters.size(); ++i) {
            json weeks = json::array();
            for (const auto& [t, count] : report.weekly_counts[i])
                weeks.push_back({{"date", table.dates[static_cast<std::size_t>(t)]},
                                 {"count", count}});
            clusters.push_back({{"members", report.clusters[i]}, {"weekly_counts", weeks}});
        }
        doc["clusters"] = {{"threshold", report.threshold},
                           {"clusters", clusters},
                           {"unclustered", report.unclustered}};
        if (!weekly_csv.empty()) {
            std::ofstream wk(weekly_csv);
            if (!wk) throw UsageError("cannot open weekly CSV " + weekly_csv);
            wk << "cluster,date,count\n";
            for (std::size_t i = 0; i < report.clusters.size(); ++i)
                for (const auto& [t, count] : report.weekly_counts[i])
                    wk << i << ',' << table.dates[static_cast<std::size_t>(t)] << ',' << count
                       << '\n';
        }
    } else {
        doc["clusters"] = {{"threshold", jthreshold}, {"clusters", json::array()},
                           {"unclustered", json::array()}};
    }

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << doc.dump(2) << '\n';
    return 0;
}

// --- bench ---------------------------------------------------------------------

int cmd_bench(const Common& c, int n_lo, int n_hi, int iterations, int profile_n, int runs,
              const std::string& out_path) {
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    const tktp::BcsAlgorithm algo = c.algo == "fastbcs" ? tktp::BcsAlgorithm::fastbcs
                                                        : tktp::BcsAlgorithm::fastbcs2;
    if (profile_n > 0) {
        const tktp::bench::ProfileStats st =
            tktp::bench::profile_average(profile_n, runs, c.seed, algo);
        if (c.format == "json") {
            json j = {{"n", st.n},
                      {"runs", st.runs},
                      {"repeat_iterations", st.repeat_iterations},
                      {"tie_events", st.tie_events},
                      {"mean_tieset_size", st.mean_tieset_size},
                      {"tie_membership_hits", st.tie_membership_hits},
                      {"forward_steps", st.forward_steps},
                      {"forward_distance", st.forward_distance},
                      {"halting_index", st.halting_index},
                      {"tie_rate", st.tie_rate},
                      {"membership_rate", st.membership_rate}};
            os << j.dump(2) << '\n';
        } else {
            tktp::bench::write_profile_csv(os, {st});
        }
        return 0;
    }
    const tktp::bench::DoublingReport rep = tktp::bench::doubling_ratios(
        n_lo, n_hi, algo, iterations, c.seed, c.threads > 0 ? c.threads : 1);
    if (c.format == "json") {
        json j = {{"algorithm", rep.label},
                  {"sizes", rep.sizes},
                  {"mean_ms", rep.mean_ms},
                  {"sd_ms", rep.sd_ms},
                  {"ratios", rep.ratios},
                  {"lg_ratios", rep.exponents}};
        os << j.dump(2) << '\n';
    } else {
        tktp::bench::write_doubling_csv(os, rep);
    }
    return 0;
}

int error_exit(const Common& c, const std::string& type, const std::string& message, int code) {
    if (c.format == "json") {
        const json j = {{"error", {{"type", type}, {"message", message}, {"exit", code}}}};
        std::cerr << j.dump() << '\n';
    } else {
        std::cerr << "tktp: " << type << ": " << message << '\n';
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Top-K tau-path screening toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string input, out_path, raw_path, predictor, weekly_csv;
    bool negate = false;
    int boundary_n = 0, lag = 0, n_lo = 250, n_hi = 2000, iterations = 5, profile_n = 0,
        runs = 100;
    double min_fraction = 0.60, jthreshold = 0.8;

    auto* cmd_tp = app.add_subcommand("taupath", "Order a bivariate CSV along its tau-path");
    cmd_tp->add_option("input", input, "Two-column x,y CSV")->required();
    cmd_tp->add_flag("--negate", negate, "Screen negative association (y -> -y)");
    cmd_tp->add_option("-o,--out", out_path, "Output file (default stdout)");
    KnobSet knobs_tp = add_common(cmd_tp, c);

    auto* cmd_tk = app.add_subcommand("tktp", "Full top-K tau-path screen of a bivariate CSV");
    cmd_tk->add_option("input", input, "Two-column x,y CSV")->required();
    cmd_tk->add_flag("--negate", negate, "Screen negative association (y -> -y)");
    cmd_tk->add_option("-o,--out", out_path, "Output file (default stdout)");
    KnobSet knobs_tk = add_common(cmd_tk, c);

    auto* cmd_bd = app.add_subcommand("boundary", "Simulate (and cache) a null reject boundary");
    cmd_bd->add_option("--n", boundary_n, "Sample size")->required();
    cmd_bd->add_option("-o,--out", out_path, "Output file (default stdout)");
    KnobSet knobs_bd = add_common(cmd_bd, c);

    auto* cmd_sim = app.add_subcommand("simulate", "Run a copula-mixture study grid");
    cmd_sim->add_option("grid", input, "Grid spec file (key = value)")->required();
    cmd_sim->add_option("-o,--out", out_path, "Summary CSV output (default stdout)");
    cmd_sim->add_option("--raw", raw_path, "Per-replicate raw log CSV");
    KnobSet knobs_sim = add_common(cmd_sim, c);

    auto* cmd_sc = app.add_subcommand("screen", "Screen a price table against a lagged predictor");
    cmd_sc->add_option("table", input, "Price table CSV")->required();
    cmd_sc->add_option("--predictor", predictor, "Predictor series name")->required();
    cmd_sc->add_option("--lag", lag, "Predictor lag in periods (default 0)");
    cmd_sc->add_option("--min-fraction", min_fraction,
                       "Keep series selected over at least this fraction (default 0.60)");
    cmd_sc->add_option("--jaccard-threshold", jthreshold,
                       "Complete-linkage similarity threshold (default 0.8)");
    cmd_sc->add_flag("--negate", negate, "Screen negative association (y -> -y)");
    cmd_sc->add_option("-o,--out", out_path, "Report JSON output (default stdout)");
    cmd_sc->add_option("--weekly-csv", weekly_csv, "Per-week inclusion counts CSV");
    KnobSet knobs_sc = add_common(cmd_sc, c);

    auto* cmd_bn = app.add_subcommand("bench", "Doubling-ratio timing or probe-counter profiling");
    cmd_bn->add_option("--n-lo", n_lo, "Smallest size (default 250)");
    cmd_bn->add_option("--n-hi", n_hi, "Largest size (default 2000)");
    cmd_bn->add_option("--iterations", iterations, "Timed runs per size (default 5)");
    cmd_bn->add_option("--profile-n", profile_n, "Profile counters at this size instead");
    cmd_bn->add_option("--runs", runs, "Profile runs to average (default 100)");
    cmd_bn->add_option("-o,--out", out_path, "Output file (default stdout)");
    KnobSet knobs_bn = add_common(cmd_bn, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const KnobSet* knobs = nullptr;
        if (cmd_tp->parsed()) knobs = &knobs_tp;
        if (cmd_tk->parsed()) knobs = &knobs_tk;
        if (cmd_bd->parsed()) knobs = &knobs_bd;
        if (cmd_sim->parsed()) knobs = &knobs_sim;
        if (cmd_sc->parsed()) knobs = &knobs_sc;
        if (cmd_bn->parsed()) knobs = &knobs_bn;
        if (knobs) {
            if (c.config_file.empty())
                if (const char* env = std::getenv("TKTP_CONFIG"); env != nullptr)
                    c.config_file = env;
            knobs->resolve(c.config_file);
        }
        validate_common(c);

        if (cmd_tp->parsed()) return cmd_taupath(input, c, negate, out_path);
        if (cmd_tk->parsed()) return cmd_tktp(input, c, negate, out_path);
        if (cmd_bd->parsed()) return cmd_boundary(boundary_n, c, out_path);
        if (cmd_sim->parsed()) return cmd_simulate(input, c, *knobs, out_path, raw_path, false);
        if (cmd_sc->parsed())
            return cmd_screen(input, c, predictor, lag, min_fraction, jthreshold, negate,
                              out_path, weekly_csv);
        if (cmd_bn->parsed())
            return cmd_bench(c, n_lo, n_hi, iterations, profile_n, runs, out_path);
        return error_exit(c, "usage", "no subcommand given", 1);
    } catch (const UsageError& e) {
        return error_exit(c, "usage", e.what(), 1);
    } catch (const tktp::DataError& e) {
        return error_exit(c, "data", e.what(), 2);
    } catch (const tktp::InsufficientDataError& e) {
        return error_exit(c, "data", e.what(), 2);
    } catch (const tktp::SizeError& e) {
        return error_exit(c, "data", e.what(), 2);
    } catch (const tktp::ArgumentError& e) {
        return error_exit(c, "data", e.what(), 2);
    } catch (const tktp::DegenerateInputError& e) {
        return error_exit(c, "data", e.what(), 2);
    } catch (const std::exception& e) {
        return error_exit(c, "internal", e.what(), 3);
    }
}
