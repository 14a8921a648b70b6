// bdkit command-line front end: exact/asymptotic birth-death and SIS
// quantities, extinction probabilities, household equilibria, Monte Carlo
// estimation, and the statistical verification suite.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdkit/bdkit.hpp"

namespace {

using nlohmann::json;

constexpr double kLogDoubleMax = 709.782712893384;  // log(DBL_MAX)

struct OutputOptions {
    std::string path;       // empty = stdout
    bool no_timestamp = false;
};

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const OutputOptions& opts, const json& config) : os_(os) {
        if (!opts.no_timestamp) {
            char buf[64];
            const std::time_t now = std::time(nullptr);
            std::tm tm_utc{};
            gmtime_r(&now, &tm_utc);
            std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
            os_ << "# generated " << buf << '\n';
        }
        os_ << "# config " << config.dump() << '\n';
        os_ << "quantity,model,dist,n_or_level,value,log_value,std_error,n_reps,source,pass\n";
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return buf;
    }

    void row(const std::string& quantity, const std::string& model, const std::string& dist,
             const std::string& n_or_level, const std::optional<double>& value,
             const std::optional<double>& log_value, const std::optional<double>& std_error,
             const std::optional<std::int64_t>& n_reps, const std::string& source,
             const std::optional<bool>& pass) {
        os_ << quantity << ',' << model << ',' << dist << ',' << n_or_level << ',';
        if (log_value && *log_value > kLogDoubleMax)
            os_ << "overflow";
        else if (value)
            os_ << num(*value);
        os_ << ',';
        if (log_value) os_ << num(*log_value);
        os_ << ',';
        if (std_error) os_ << num(*std_error);
        os_ << ',';
        if (n_reps) os_ << *n_reps;
        os_ << ',' << source << ',';
        if (pass) os_ << (*pass ? "true" : "false");
        os_ << '\n';
    }

    void exact(const std::string& quantity, const std::string& model, const std::string& n,
               bdkit::LogWeight w) {
        row(quantity, model, "", n, w.linear(), w.log_value, {}, {}, "exact", {});
    }

    void exact_plain(const std::string& quantity, const std::string& model, const std::string& n,
                     double v) {
        row(quantity, model, "", n, v, v > 0 ? std::optional<double>(std::log(v)) : std::nullopt, {},
            {}, "exact", {});
    }

    void asymptotic(const std::string& quantity, const std::string& model, bdkit::LogWeight w) {
        row(quantity, model, "", "", w.linear(), w.log_value, {}, {}, "asymptotic", {});
    }

    void monte_carlo(const std::string& quantity, const std::string& model, const std::string& dist,
                     const std::string& n, const bdkit::MCEstimate& est,
                     const std::optional<bool>& pass) {
        row(quantity, model, dist, n, est.mean,
            est.mean > 0 ? std::optional<double>(std::log(est.mean)) : std::nullopt, est.std_error,
            est.n_reps, "monte-carlo", pass);
    }

private:
    std::ostream& os_;
};

// flag value if given on the command line, else the JSON config, else the default
template <typename T>
T pick(const std::optional<T>& cli, const json& cfg, const std::string& key, T def) {
    if (cli) return *cli;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return def;
}

template <typename T>
std::optional<T> pick_opt(const std::optional<T>& cli, const json& cfg, const std::string& key) {
    if (cli) return cli;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return std::nullopt;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<bdkit::LifetimeDistribution> parse_dists(const std::string& spec) {
    std::vector<bdkit::LifetimeDistribution> out;
    for (const auto& tok : split(spec, ';')) out.push_back(bdkit::parse_lifetime(tok));
    if (out.empty()) throw std::invalid_argument("no lifetime distributions given");
    return out;
}

bdkit::QuantitySpec parse_quantity(const std::string& q) {
    using bdkit::QuantitySpec;
    if (q == "T") return QuantitySpec::duration();
    if (q == "C") return QuantitySpec::progeny();
    if (q == "S") return QuantitySpec::severity();
    if (q == "extinct") return QuantitySpec::extinct_fraction();
    if (q.rfind("A:", 0) == 0) return QuantitySpec::occupation(std::stoll(q.substr(2)));
    if (q.rfind("hit:", 0) == 0) return QuantitySpec::hit_fraction(std::stoll(q.substr(4)));
    throw std::invalid_argument("unknown quantity '" + q + "' (want T, C, S, A:n, extinct, hit:L)");
}

// shared flag bundle most subcommands need
struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> output;
    std::optional<std::string> config_path;
    bool no_timestamp = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (env BDKIT_SEED)")->envname("BDKIT_SEED");
        cmd->add_option("--workers", workers, "parallel workers (default: all cores)");
        cmd->add_option("-o,--output", output, "write CSV to this path instead of stdout");
        cmd->add_option("--config", config_path, "JSON config file; flags override its keys");
        cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp header line");
    }

    json load_config() const {
        if (!config_path) return json::object();
        std::ifstream in(*config_path);
        if (!in) throw std::invalid_argument("cannot open config file '" + *config_path + "'");
        json j;
        in >> j;
        if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
        return j;
    }

    std::uint64_t resolve_seed(const json& cfg) const {
        return pick<std::uint64_t>(seed, cfg, "seed", 20240801ull);
    }

    bool resolve_no_timestamp(const json& cfg) const {
        return no_timestamp || pick<bool>(std::nullopt, cfg, "no_timestamp", false);
    }
};

struct SinkHolder {
    std::ofstream file;
    std::ostream* os = &std::cout;
};

SinkHolder open_sink(const CommonFlags& common, const json& cfg) {
    SinkHolder s;
    const auto path = pick_opt<std::string>(common.output, cfg, "output");
    if (path) {
        s.file.open(*path);
        if (!s.file) throw std::invalid_argument("cannot open output file '" + *path + "'");
        s.os = &s.file;
    }
    return s;
}

struct ModelFlags {
    std::optional<std::string> model;
    std::optional<double> lambda;
    std::optional<std::int64_t> n;
    std::optional<std::string> alpha;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "branching | sis | custom");
        cmd->add_option("--lambda", lambda, "contact/birth rate");
        cmd->add_option("--n", n, "SIS population size N");
        cmd->add_option("--alpha", alpha, "custom birth rates alpha(1),alpha(2),...");
    }

    bdkit::BirthRateModel resolve(const json& cfg) const {
        const auto name = pick<std::string>(model, cfg, "model", "");
        if (name == "branching")
            return bdkit::BirthRateModel::branching(pick<double>(lambda, cfg, "lambda", -1.0));
        if (name == "sis")
            return bdkit::BirthRateModel::sis(pick<std::int64_t>(n, cfg, "n", 0),
                                              pick<double>(lambda, cfg, "lambda", -1.0));
        if (name == "custom") {
            const auto table = pick<std::string>(alpha, cfg, "alpha", "");
            if (table.empty()) throw std::invalid_argument("custom model needs --alpha");
            return bdkit::BirthRateModel::custom(parse_doubles(table));
        }
        throw std::invalid_argument("unknown or missing --model (want branching, sis or custom)");
    }
};

// ---------------------------------------------------------------------------

int cmd_analytic(const CommonFlags& common, const ModelFlags& mf,
                 const std::optional<std::int64_t>& n_max_flag,
                 const std::optional<std::int64_t>& max_rows_flag) {
    const json cfg = common.load_config();
    const auto model = mf.resolve(cfg);
    const auto n_max = pick<std::int64_t>(n_max_flag, cfg, "n_max", 1000000);
    const auto max_rows = pick<std::int64_t>(max_rows_flag, cfg, "max_rows", 25);

    const auto summary = bdkit::stationary_weights(model, n_max);

    auto sink = open_sink(common, cfg);
    json echo = {{"subcommand", "analytic"}, {"model", model.label()}, {"n_max", n_max},
                 {"max_rows", max_rows}};
    OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
    CsvWriter csv(*sink.os, oo, echo);

    for (std::int64_t n = 1; n <= std::min<std::int64_t>(summary.max_state(), max_rows); ++n)
        csv.exact("A:" + std::to_string(n), model.label(), std::to_string(n), summary.weight(n));
    csv.exact("T", model.label(), "", summary.mean_duration);
    csv.exact("C", model.label(), "", summary.mean_progeny);
    csv.exact_plain("pi0", model.label(), "", summary.pi0);
    return 0;
}

int cmd_sis(const CommonFlags& common, const std::optional<std::int64_t>& n_flag,
            const std::optional<double>& lambda_flag, const std::optional<std::int64_t>& max_rows_flag) {
    const json cfg = common.load_config();
    const auto n = pick<std::int64_t>(n_flag, cfg, "n", 0);
    const auto lambda = pick<double>(lambda_flag, cfg, "lambda", -1.0);
    const auto max_rows = pick<std::int64_t>(max_rows_flag, cfg, "max_rows", 10);
    const std::string label = bdkit::BirthRateModel::sis(n, lambda).label();

    const auto exact_t = bdkit::sis_mean_duration_exact(n, lambda);
    const auto exact_c = bdkit::sis_mean_progeny_exact(n, lambda);

    auto sink = open_sink(common, cfg);
    json echo = {{"subcommand", "sis"}, {"n", n}, {"lambda", lambda}, {"max_rows", max_rows}};
    OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
    CsvWriter csv(*sink.os, oo, echo);

    const auto q = bdkit::sis_quasi_stationary(n, lambda);
    for (std::int64_t k = 0; k <= std::min<std::int64_t>(n, max_rows); ++k)
        csv.exact_plain("pi:" + std::to_string(k), label, std::to_string(k),
                        q.pi[static_cast<std::size_t>(k)]);

    csv.exact("T", label, "", exact_t);
    csv.exact("C", label, "", exact_c);
    if (n >= 2) {
        csv.asymptotic("T", label, bdkit::sis_duration_asymptotic(n, lambda));
        if (lambda > 1.0) csv.asymptotic("C", label, bdkit::sis_progeny_asymptotic(n, lambda));
    }
    return 0;
}

int cmd_extinction(const CommonFlags& common, const std::optional<std::string>& dists_flag,
                   const std::optional<double>& lambda_flag, const std::optional<std::string>& grid_flag,
                   const std::optional<std::int64_t>& n_flag) {
    const json cfg = common.load_config();
    const auto dists = parse_dists(pick<std::string>(dists_flag, cfg, "dists", "exp;det"));
    std::vector<double> lambdas;
    const auto grid = pick_opt<std::string>(grid_flag, cfg, "lambda_grid");
    if (grid) {
        const auto parts = split(*grid, ':');
        if (parts.size() != 3) throw std::invalid_argument("--lambda-grid wants start:stop:step");
        const double a = std::stod(parts[0]), b = std::stod(parts[1]), step = std::stod(parts[2]);
        if (!(step > 0.0)) throw std::invalid_argument("--lambda-grid step must be > 0");
        for (double x = a; x <= b + 1e-12; x += step) lambdas.push_back(x);
    } else {
        lambdas.push_back(pick<double>(lambda_flag, cfg, "lambda", -1.0));
    }
    const auto endemic_n = pick_opt<std::int64_t>(n_flag, cfg, "n");

    auto sink = open_sink(common, cfg);
    json echo = {{"subcommand", "extinction"}};
    OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
    CsvWriter csv(*sink.os, oo, echo);

    for (const double lambda : lambdas) {
        const std::string model = bdkit::BirthRateModel::branching(lambda).label();
        for (const auto& dist : dists) {
            const auto sol = bdkit::extinction_probability(dist, lambda);
            csv.row("p_q", model, dist.label(), "", sol.p_q,
                    sol.p_q > 0 ? std::optional<double>(std::log(sol.p_q)) : std::nullopt, {}, {},
                    "exact", {});
            if (endemic_n && lambda > 1.0) {
                const auto mean = bdkit::endemic_extinction_mean(*endemic_n, lambda, dist);
                csv.row("T_endemic", bdkit::BirthRateModel::sis(*endemic_n, lambda).label(),
                        dist.label(), "", mean.linear(), mean.log_value, {}, {}, "asymptotic", {});
            }
        }
    }
    return 0;
}

int cmd_household(const CommonFlags& common, const std::optional<std::int64_t>& h_flag,
                  const std::optional<double>& lg_flag, const std::optional<double>& ll_flag) {
    const json cfg = common.load_config();
    const auto h = pick<std::int64_t>(h_flag, cfg, "h", 0);
    const auto lg = pick<double>(lg_flag, cfg, "lambda_g", -1.0);
    const auto ll = pick<double>(ll_flag, cfg, "lambda_l", -1.0);

    const auto eq = bdkit::household_endemic(h, lg, ll);
    const std::string label = "household(h=" + std::to_string(h) + ")";

    auto sink = open_sink(common, cfg);
    json echo = {{"subcommand", "household"}, {"h", h}, {"lambda_g", lg}, {"lambda_l", ll}};
    OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
    CsvWriter csv(*sink.os, oo, echo);

    csv.exact_plain("E[S]", label, "", bdkit::household_severity_mean(h, ll));
    csv.exact_plain("R*", label, "", eq.r_star);
    csv.exact_plain("z", label, "", eq.z);
    csv.exact_plain("z/h", label, "", eq.proportion());
    for (std::size_t k = 0; k < eq.phi.size(); ++k)
        csv.exact_plain("phi:" + std::to_string(k), label, std::to_string(k), eq.phi[k]);
    return 0;
}

struct SimulateFlags {
    ModelFlags model;
    std::optional<std::string> dists;
    std::optional<std::string> init;
    std::optional<std::string> residuals;
    std::optional<std::int64_t> cap;
    std::optional<std::int64_t> level;
    std::optional<double> horizon;
    std::optional<std::string> quantities;
    std::optional<std::int64_t> reps;
    std::optional<double> target;
    std::optional<double> threshold;
    // household extras
    std::optional<std::int64_t> m;
    std::optional<std::int64_t> h;
    std::optional<double> lambda_g;
    std::optional<double> lambda_l;
    std::optional<double> p0;
    std::optional<double> burn_in;
};

int cmd_simulate(const CommonFlags& common, const SimulateFlags& sf) {
    const json cfg = common.load_config();
    const auto dists = parse_dists(pick<std::string>(sf.dists, cfg, "dists", "exp"));
    const auto reps = pick<std::int64_t>(sf.reps, cfg, "reps", 10000);
    const auto seed = common.resolve_seed(cfg);
    const auto target = pick_opt<double>(sf.target, cfg, "target");
    const auto threshold = pick<double>(sf.threshold, cfg, "threshold", 4.0);

    std::vector<bdkit::QuantitySpec> quantities;
    for (const auto& q : split(pick<std::string>(sf.quantities, cfg, "quantities", "T"), ','))
        quantities.push_back(parse_quantity(q));

    bdkit::StopRule stop = bdkit::StopRule::extinction();
    if (const auto cap = pick_opt<std::int64_t>(sf.cap, cfg, "cap")) stop.with_cap(*cap);
    if (const auto level = pick_opt<std::int64_t>(sf.level, cfg, "level")) stop.with_level(*level);
    if (const auto hor = pick_opt<double>(sf.horizon, cfg, "horizon")) stop.with_horizon(*hor);

    bdkit::HarnessConfig hcfg;
    hcfg.workers = pick<int>(common.workers, cfg, "workers", 0);

    auto sink = open_sink(common, cfg);
    json echo = {{"subcommand", "simulate"}, {"reps", reps}, {"seed", seed}, {"stop", stop.label()}};
    OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
    CsvWriter csv(*sink.os, oo, echo);

    bool any_fail = false;
    const auto model_name = pick<std::string>(sf.model.model, cfg, "model", "");

    for (std::size_t d = 0; d < dists.size(); ++d) {
        hcfg.stream_offset = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(reps);
        std::vector<bdkit::MCEstimate> ests;
        std::string label;
        if (model_name == "household") {
            bdkit::HouseholdConfig hh;
            hh.households = pick<std::int64_t>(sf.m, cfg, "m", 1);
            hh.household_size = pick<std::int64_t>(sf.h, cfg, "h", 1);
            hh.lambda_global = pick<double>(sf.lambda_g, cfg, "lambda_g", 0.0);
            hh.lambda_local = pick<double>(sf.lambda_l, cfg, "lambda_l", 0.0);
            hh.burn_in = pick<double>(sf.burn_in, cfg, "burn_in", 0.0);
            const auto init_name = pick<std::string>(sf.init, cfg, "init", "one");
            const auto hinit = init_name == "one"
                                   ? bdkit::HouseholdInit::one_infective()
                                   : bdkit::HouseholdInit::prevalence(pick<double>(sf.p0, cfg, "p0", 0.1));
            label = "household(m=" + std::to_string(hh.households) +
                    ",h=" + std::to_string(hh.household_size) + ")";
            ests = bdkit::estimate_household_many(quantities, hh, dists[d], hinit, stop, reps, seed, hcfg);
        } else {
            const auto model = sf.model.resolve(cfg);
            label = model.label();
            const auto init_name = pick<std::string>(sf.init, cfg, "init", "single");
            const auto res = pick<std::string>(sf.residuals, cfg, "residuals", "equilibrium") == "fresh"
                                 ? bdkit::ResidualMode::FreshQ
                                 : bdkit::ResidualMode::EquilibriumResidual;
            bdkit::InitialCondition init = bdkit::InitialCondition::single();
            if (init_name == "endemic") init = bdkit::InitialCondition::endemic_level(res);
            else if (init_name.rfind("count:", 0) == 0)
                init = bdkit::InitialCondition::count(std::stoll(init_name.substr(6)), res);
            else if (init_name != "single")
                throw std::invalid_argument("unknown --init (want single, endemic or count:k)");
            ests = bdkit::estimate_many(quantities, model, dists[d], init, stop, reps, seed, hcfg);
        }
        for (std::size_t q = 0; q < quantities.size(); ++q) {
            std::optional<bool> pass;
            if (target) {
                const auto v = bdkit::compare(ests[q], *target, threshold);
                pass = v.pass;
                any_fail = any_fail || !v.pass;
            }
            csv.monte_carlo(quantities[q].label(), label, dists[d].label(), "", ests[q], pass);
        }
    }
    return any_fail ? 3 : 0;
}

int cmd_verify(const CommonFlags& common, const std::vector<int>& criteria) {
    const json cfg = common.load_config();
    bdkit::verify::Options opts;
    opts.seed = common.resolve_seed(cfg);
    opts.workers = pick<int>(common.workers, cfg, "workers", 0);
    opts.criteria = criteria;
    opts.log = &std::cout;

    const auto results = bdkit::verify::run_acceptance(opts);

    int failed = 0;
    for (const auto& r : results) failed += r.pass() ? 0 : 1;
    std::cout << (failed == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " (" << results.size() - failed
              << "/" << results.size() << " criteria passed)" << std::endl;

    const auto path = pick_opt<std::string>(common.output, cfg, "output");
    if (path) {
        std::ofstream out(*path);
        if (!out) throw std::invalid_argument("cannot open output file '" + *path + "'");
        OutputOptions oo{"", common.resolve_no_timestamp(cfg)};
        CsvWriter csv(out, oo, json{{"subcommand", "verify"}, {"seed", opts.seed}});
        for (const auto& r : results)
            for (const auto& c : r.checks)
                csv.row("criterion" + std::to_string(r.number), c.name, "", "", {}, {}, {}, {},
                        "monte-carlo", c.pass);
    }
    return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bdkit: exact, asymptotic and simulated quantities of birth-death type processes,"
                 " SIS epidemics and household SIS epidemics"};
    app.require_subcommand(1);
    // --h is a model flag below, so help is long-form only
    app.set_help_flag("--help", "print help");
    app.set_help_all_flag("--help-all", "print help for all subcommands");

    const auto add_sub = [&app](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print help");
        return sub;
    };

    // analytic
    auto* analytic = add_sub("analytic", "stationary weights, E[A_n], E[T], E[C]");
    CommonFlags analytic_common;
    analytic_common.attach(analytic);
    ModelFlags analytic_model;
    analytic_model.attach(analytic);
    std::optional<std::int64_t> analytic_nmax, analytic_rows;
    analytic->add_option("--n-max", analytic_nmax, "series truncation bound (default 1e6)");
    analytic->add_option("--max-rows", analytic_rows, "occupation rows to print (default 25)");

    // sis
    auto* sis = add_sub("sis", "exact and asymptotic SIS quantities");
    CommonFlags sis_common;
    sis_common.attach(sis);
    std::optional<std::int64_t> sis_n, sis_rows;
    std::optional<double> sis_lambda;
    sis->add_option("--n", sis_n, "population size N");
    sis->add_option("--lambda", sis_lambda, "contact rate");
    sis->add_option("--max-rows", sis_rows, "stationary-law rows to print (default 10)");

    // extinction
    auto* ext = add_sub("extinction", "p_Q table and endemic extinction means");
    CommonFlags ext_common;
    ext_common.attach(ext);
    std::optional<std::string> ext_dists, ext_grid;
    std::optional<double> ext_lambda;
    std::optional<std::int64_t> ext_n;
    ext->add_option("--dists", ext_dists, "semicolon-separated lifetime specs (default exp;det)");
    ext->add_option("--lambda", ext_lambda, "single contact rate");
    ext->add_option("--lambda-grid", ext_grid, "start:stop:step grid of rates");
    ext->add_option("--n", ext_n, "population size for endemic extinction means");

    // household
    auto* hh = add_sub("household", "R*, E[S], endemic equilibrium, phi vector");
    CommonFlags hh_common;
    hh_common.attach(hh);
    std::optional<std::int64_t> hh_h;
    std::optional<double> hh_lg, hh_ll;
    hh->add_option("--h", hh_h, "household size");
    hh->add_option("--lambda-g", hh_lg, "global contact rate");
    hh->add_option("--lambda-l", hh_ll, "local (pairwise) contact rate");

    // simulate
    auto* sim = add_sub("simulate", "Monte Carlo estimates from the event-driven engine");
    CommonFlags sim_common;
    sim_common.attach(sim);
    SimulateFlags sf;
    sf.model.attach(sim);
    sim->add_option("--dists", sf.dists, "semicolon-separated lifetime specs (default exp)");
    sim->add_option("--init", sf.init, "single | endemic | count:k | one | prevalence (household)");
    sim->add_option("--residuals", sf.residuals, "fresh | equilibrium (endemic/count starts)");
    sim->add_option("--cap", sf.cap, "stop when the population reaches this cap");
    sim->add_option("--level", sf.level, "stop when the population hits this level");
    sim->add_option("--horizon", sf.horizon, "stop at this time");
    sim->add_option("--quantities", sf.quantities, "comma list: T,C,S,A:n,extinct,hit:L (default T)");
    sim->add_option("--reps", sf.reps, "replicates (default 10000)");
    sim->add_option("--target", sf.target, "optional analytic target for a pass/fail verdict");
    sim->add_option("--threshold", sf.threshold, "z threshold for the verdict (default 4)");
    sim->add_option("--m", sf.m, "household count (household model)");
    sim->add_option("--h", sf.h, "household size (household model)");
    sim->add_option("--lambda-g", sf.lambda_g, "global rate (household model)");
    sim->add_option("--lambda-l", sf.lambda_l, "local rate (household model)");
    sim->add_option("--p0", sf.p0, "initial prevalence (household model)");
    sim->add_option("--burn-in", sf.burn_in, "discard time-averages before this time (household)");

    // verify
    auto* ver = add_sub("verify", "run the statistical acceptance suite");
    CommonFlags ver_common;
    ver_common.attach(ver);
    std::vector<int> ver_criteria;
    ver->add_option("--criterion", ver_criteria, "run only these criteria (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (analytic->parsed()) return cmd_analytic(analytic_common, analytic_model, analytic_nmax, analytic_rows);
        if (sis->parsed()) return cmd_sis(sis_common, sis_n, sis_lambda, sis_rows);
        if (ext->parsed()) return cmd_extinction(ext_common, ext_dists, ext_lambda, ext_grid, ext_n);
        if (hh->parsed()) return cmd_household(hh_common, hh_h, hh_lg, hh_ll);
        if (sim->parsed()) return cmd_simulate(sim_common, sf);
        if (ver->parsed()) return cmd_verify(ver_common, ver_criteria);
    } catch (const bdkit::DivergentSeries& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bdkit::NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bdkit::BracketFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bdkit::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: bad config: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
