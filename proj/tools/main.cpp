// Command-line front end: fit/predict/eval/rates over CSV datasets and JSON
// models.  Exit codes: 0 ok, 1 usage, 2 data error, 3 internal.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dyadtree/decorate.hpp"
#include "dyadtree/empirical.hpp"
#include "dyadtree/errors.hpp"
#include "dyadtree/experiment.hpp"
#include "dyadtree/io.hpp"
#include "dyadtree/oracle.hpp"
#include "dyadtree/rng.hpp"
#include "dyadtree/select.hpp"

namespace {

using namespace dyadtree;

struct OracleFlags {
    std::string dist = "signed-power";
    double delta = 1.0;
    double amp = 1.0;
    int axis = 1; // 1-based on the command line
    int stripe_level = 1;
    std::string pattern = "-1,1";
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& f) {
    cmd->add_option("--dist", f.dist, "distribution: signed-power | massart | stripe")
        ->check(CLI::IsMember({"signed-power", "massart", "stripe"}));
    cmd->add_option("--delta", f.delta, "signed-power exponent in (0,1]");
    cmd->add_option("--amp", f.amp, "massart/stripe amplitude in (0,1]");
    cmd->add_option("--axis", f.axis, "active axis (1-based)");
    cmd->add_option("--stripe-level", f.stripe_level, "stripe slab level");
    cmd->add_option("--pattern", f.pattern, "stripe pattern, e.g. -1,1");
}

OracleSpec oracle_spec(const OracleFlags& f, int dim) {
    OracleSpec spec;
    spec.dim = dim;
    if (f.axis < 1 || f.axis > dim) throw UsageError("--axis out of range for dimension");
    spec.axis = f.axis - 1;
    if (f.dist == "signed-power") {
        spec.kind = EtaKind::kSignedPower;
        spec.delta = f.delta;
    } else if (f.dist == "massart") {
        spec.kind = EtaKind::kMassart;
        spec.amplitude = f.amp;
    } else {
        spec.kind = EtaKind::kStripe;
        spec.amplitude = f.amp;
        spec.stripe_level = f.stripe_level;
        spec.pattern.clear();
        std::stringstream ss(f.pattern);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok == "1" || tok == "+1") spec.pattern.push_back(1);
            else if (tok == "-1") spec.pattern.push_back(-1);
            else throw UsageError("--pattern entries must be -1 or 1");
        }
    }
    return spec;
}

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::vector<int> parse_ngrid(const std::string& text) {
    std::vector<int> grid;
    const auto parse_int = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw UsageError("--ngrid expects integers, got '" + s + "'");
        }
    };
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) {
        grid.push_back(parse_int(text));
    } else {
        const int lo = parse_int(text.substr(0, dots));
        const int hi = parse_int(text.substr(dots + 2));
        if (!power_of_two(lo) || !power_of_two(hi) || hi < lo)
            throw UsageError("--ngrid a..b expects powers of two with a <= b");
        for (int n = lo; n <= hi; n *= 2) grid.push_back(n);
    }
    for (int n : grid)
        if (!power_of_two(n)) throw UsageError("--ngrid entries must be powers of two");
    return grid;
}

void print_selection(const SelectionReport& report, Algorithm algo) {
    std::cout << "selected " << (algo == Algorithm::kUniform ? "l" : "m") << "* = "
              << report.m_star << " (algorithm " << algorithm_name(algo) << ")\n";
    std::cout << "halves: n' = " << report.n_first << ", n'' = " << report.n_second;
    if (report.sample_dropped) std::cout << " (one odd sample set aside)";
    std::cout << "\n";
    std::cout << "holdout eta'' by candidate:";
    const std::size_t show = std::min<std::size_t>(report.m_grid.size(), 16);
    for (std::size_t k = 0; k < show; ++k)
        std::cout << " " << report.m_grid[k] << ":" << format_double(report.eta_second[k]);
    if (show < report.m_grid.size())
        std::cout << " ... (" << report.m_grid.size() - show << " more)";
    std::cout << "\n";
}

int run_fit(const std::string& train_path, const std::string& algo_name, int expect_dim,
            int j_max, std::uint64_t seed, int m_cap, const std::string& out_path) {
    const Dataset data = read_dataset_csv(train_path);
    if (expect_dim > 0 && expect_dim != data.dim)
        throw UsageError("--d does not match the data dimension");
    const Algorithm algo = algorithm_from_name(algo_name);
    if (algo == Algorithm::kDecorated && data.dim > kMaxDecorationDim)
        throw UsageError("decoration supports d <= 3");

    SelectionReport report;
    if (algo == Algorithm::kUniform) {
        report = select_uniform(data, default_l_grid(data.size() / 2, data.dim, j_max), seed);
    } else {
        FitOptions opt;
        opt.j_max = j_max;
        if (m_cap >= 0) opt.m_cap = m_cap;
        report = select_model(data, algo, {}, seed, opt);
    }

    print_selection(report, algo);
    std::cout << "empirical risk on training file: "
              << format_double(empirical_risk(report.chosen, data)) << "\n";

    save_model_json(out_path, report.chosen, ModelMeta{report.m_star, seed, j_max});
    std::cout << "model written to " << out_path << "\n";
    return 0;
}

int run_predict(const std::string& points_path, const std::string& model_path,
                const std::string& out_path) {
    const LoadedModel model = load_model_json(model_path);
    const auto points = read_points_csv(points_path);
    std::vector<int> labels;
    labels.reserve(points.size());
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != model.classifier.dim())
            throw DataError("point dimension does not match the model");
        labels.push_back(model.classifier.predict(p));
    }
    write_labels_csv(out_path, labels);
    std::cout << labels.size() << " labels written to " << out_path << "\n";
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path, bool have_dist,
             const OracleFlags& oracle_flags, std::int64_t mc_draws, std::uint64_t seed) {
    const LoadedModel model = load_model_json(model_path);
    if (!data_path.empty()) {
        const Dataset data = read_dataset_csv(data_path);
        if (data.dim != model.classifier.dim())
            throw DataError("data dimension does not match the model");
        std::cout << "n = " << data.size() << "\n";
        std::cout << "empirical risk = " << format_double(empirical_risk(model.classifier, data))
                  << "\n";
        std::cout << "eta_bar = " << format_double(eta_bar(model.classifier, data)) << "\n";
        std::cout << "rho_bar = " << format_double(rho_bar(model.classifier, data)) << "\n";
        return 0;
    }
    if (!have_dist) throw UsageError("eval needs --data or --dist");
    const DistributionOracle oracle =
        oracle_spec(oracle_flags, model.classifier.dim()).make();
    if (mc_draws > 0) {
        const RiskReport r = excess_risk_mc(oracle, model.classifier, mc_draws, seed);
        std::cout << "excess risk (monte carlo, N=" << mc_draws << ") = "
                  << format_double(r.value) << " +- " << format_double(r.std_error) << "\n";
    } else {
        const RiskReport r = excess_risk_exact(oracle, model.classifier);
        std::cout << "excess risk (exact) = " << format_double(r.value) << "\n";
    }
    return 0;
}

int run_rates(const RatesConfig& config, const std::string& out_path, bool timing) {
    const std::vector<RateRow> rows = run_rates(config);
    write_rates_csv(out_path, rows, timing);
    const RatesSummary summary = summarize_rates(config, rows);

    for (std::size_t i = 0; i < summary.median_excess.size(); ++i) {
        std::cout << "n = " << summary.median_excess[i].first
                  << "  median excess risk = " << format_double(summary.median_excess[i].second)
                  << "  median wall ms = " << format_double(summary.median_wall_ms[i].second)
                  << "\n";
    }
    if (summary.slope_valid)
        std::cout << "fitted log-log slope = " << format_double(summary.slope);
    else
        std::cout << "fitted log-log slope = n/a (medians hit zero)";
    std::cout << "  (theoretical exponent " << format_double(summary.theory_exponent) << ")\n";
    std::cout << "rows written to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tree-based set-estimator classifiers on dyadic partitions of [0,1]^d"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "fit a classifier with hold-out model selection");
    std::string fit_train, fit_algo = "plain", fit_out = "model.json";
    int fit_d = 0, fit_jmax = 16, fit_mcap = -1;
    std::uint64_t fit_seed = 1;
    fit->add_option("train", fit_train, "training CSV (header x1,...,xd,y)")->required();
    fit->add_option("--algo", fit_algo, "plain | decorated | uniform")
        ->check(CLI::IsMember({"plain", "decorated", "uniform"}));
    fit->add_option("--d", fit_d, "expected dimension (checked against the data)");
    fit->add_option("--jmax", fit_jmax, "depth cap")->check(CLI::Range(0, 30));
    fit->add_option("--seed", fit_seed, "seed for the hold-out shuffle");
    fit->add_option("--mmax", fit_mcap, "cap on the candidate split budgets");
    fit->add_option("--out", fit_out, "output model path");
    fit->set_config("--config", "", "flat key=value config; flags override");

    // predict
    auto* predict = app.add_subcommand("predict", "label points with a saved model");
    std::string pred_points, pred_model = "model.json", pred_out = "labels.csv";
    predict->add_option("points", pred_points, "points CSV (header x1,...,xd[,y])")->required();
    predict->add_option("--model", pred_model, "model JSON path");
    predict->add_option("--out", pred_out, "output labels path");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a saved model");
    std::string eval_model = "model.json", eval_data;
    OracleFlags eval_oracle;
    std::int64_t eval_mc = 0;
    std::uint64_t eval_seed = 1;
    eval->add_option("--model", eval_model, "model JSON path");
    eval->add_option("--data", eval_data, "labeled CSV for empirical evaluation");
    add_oracle_flags(eval, eval_oracle);
    eval->add_option("--mc", eval_mc, "Monte Carlo draws (0 = exact)");
    eval->add_option("--seed", eval_seed, "Monte Carlo seed");

    // rates
    auto* rates = app.add_subcommand("rates", "convergence-rate experiment");
    OracleFlags rates_oracle;
    std::string rates_ngrid = "128..8192", rates_algo = "plain", rates_out = "rates.csv";
    int rates_d = 1, rates_trials = 20, rates_jmax = 16, rates_threads = 1, rates_mcap = -1;
    std::uint64_t rates_seed = 1;
    bool rates_timing = false;
    add_oracle_flags(rates, rates_oracle);
    rates->add_option("--d", rates_d, "dimension")->check(CLI::Range(1, 8));
    rates->add_option("--algo", rates_algo, "plain | decorated | uniform")
        ->check(CLI::IsMember({"plain", "decorated", "uniform"}));
    rates->add_option("--ngrid", rates_ngrid, "sample sizes, powers of two: a..b or a single n");
    rates->add_option("--trials", rates_trials, "trials per n")->check(CLI::PositiveNumber);
    rates->add_option("--seed", rates_seed, "base seed");
    rates->add_option("--jmax", rates_jmax, "depth cap")->check(CLI::Range(0, 30));
    rates->add_option("--mmax", rates_mcap, "cap on the candidate split budgets");
    rates->add_option("--threads", rates_threads, "worker threads")->check(CLI::Range(1, 256));
    rates->add_flag("--timing", rates_timing, "include wall_ms in the CSV (non-deterministic)");
    rates->add_option("--out", rates_out, "output CSV path");
    rates->set_config("--config", "", "flat key=value config; flags override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(fit))
            return run_fit(fit_train, fit_algo, fit_d, fit_jmax, fit_seed, fit_mcap, fit_out);
        if (app.got_subcommand(predict)) return run_predict(pred_points, pred_model, pred_out);
        if (app.got_subcommand(eval)) {
            const bool have_dist = eval->count("--dist") > 0;
            return run_eval(eval_model, eval_data, have_dist, eval_oracle, eval_mc, eval_seed);
        }
        if (app.got_subcommand(rates)) {
            RatesConfig config;
            config.algo = algorithm_from_name(rates_algo);
            if (config.algo == Algorithm::kDecorated && rates_d > kMaxDecorationDim)
                throw UsageError("decoration supports d <= 3");
            config.oracle = oracle_spec(rates_oracle, rates_d);
            config.n_grid = parse_ngrid(rates_ngrid);
            config.trials = rates_trials;
            config.base_seed = rates_seed;
            config.j_max = rates_jmax;
            if (rates_mcap >= 0) config.m_cap = rates_mcap;
            config.threads = rates_threads;
            return run_rates(config, rates_out, rates_timing);
        }
        throw UsageError("no subcommand given");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
