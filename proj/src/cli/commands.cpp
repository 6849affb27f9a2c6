#include "gammadep/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "gammadep/cli/csv.hpp"
#include "gammadep/cli/report_json.hpp"
#include "gammadep/inference.hpp"
#include "gammadep/kernels.hpp"
#include "gammadep/numeric.hpp"
#include "gammadep/parallel.hpp"
#include "gammadep/rng.hpp"
#include "gammadep/simgen.hpp"
#include "gammadep/ustat.hpp"
#include "gammadep/variance.hpp"

using nlohmann::json;

namespace gammadep::cli {

namespace {

struct Common {
    std::string format = "json";
    std::string output;
    std::optional<unsigned> threads;
    bool reproducible = false;
};

struct KernelOpts {
    std::string id = "dcov";
    std::optional<double> sigma_x;
    std::optional<double> sigma_y;

    KernelChoice choice() const {
        KernelChoice c;
        c.id = parse_kernel_id(id);
        if (sigma_x || sigma_y) {
            if (c.id != KernelId::ghsic) throw Error(ErrorCode::bad_argument, "bandwidths only apply to ghsic");
            if (!sigma_x || !sigma_y) throw Error(ErrorCode::bad_argument, "give both --sigma-x and --sigma-y");
            KernelPairSpec::ghsic(*sigma_x, *sigma_y);  // validates
            c.bandwidths = std::array<double, 2>{*sigma_x, *sigma_y};
        }
        return c;
    }
};

struct TestOpts {
    std::string input;
    std::string x_cols;
    std::string y_cols;
    KernelOpts kernel;
    std::string gammas = "1,2,3,4,5,6,inf";
    std::size_t b_count = 200;
    std::optional<std::uint64_t> seed;
    double alpha = 0.05;
    std::string combiners = "fisher,min,cauchy";
    std::string tie_mode = "strict";
};

struct SimOpts {
    std::string model = "null-a";
    std::size_t n = 100;
    std::optional<std::size_t> d;
    std::optional<std::size_t> d1;
    std::optional<std::size_t> d2;
    std::string error = "normal";
    std::optional<double> kappa;
    std::size_t reps = 500;
    std::size_t b_count = 200;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::string gammas = "1,2,3,4,5,6,inf";
    std::string combiners = "fisher,min,cauchy";
    std::string tie_mode = "strict";
    KernelOpts kernel;
};

struct OracleOpts {
    std::size_t seeds = 100;
    std::size_t n_min = 6;
    std::size_t n_max = 12;
    std::optional<std::size_t> n;
    std::string kernels = "dcov,ghsic";
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
    bool inject_fault = false;
};

struct PopOpts {
    std::string model = "m1";
    std::string error = "normal";
    std::size_t d = 5;
    std::optional<double> kappa;
    KernelOpts kernel;
    std::size_t n_mc = 1000000;
    std::uint64_t seed = 1;
};

int exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::bad_gamma:
        case ErrorCode::duplicate_gamma:
        case ErrorCode::bad_argument:
        case ErrorCode::seed_required:
        case ErrorCode::bad_model:
        case ErrorCode::bad_bandwidth:
        case ErrorCode::bad_dim: return exit_usage;
        default: return exit_data;
    }
}

std::vector<Combiner> parse_combiners(std::string_view text) {
    std::vector<Combiner> out;
    while (true) {
        const auto comma = text.find(',');
        const auto tok = text.substr(0, comma);
        if (!tok.empty()) {
            const Combiner c = parse_combiner(tok);
            if (std::find(out.begin(), out.end(), c) != out.end()) {
                throw Error(ErrorCode::bad_argument, "combiner listed twice");
            }
            out.push_back(c);
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error(ErrorCode::bad_argument, "no combiners given");
    return out;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json envelope(const char* command, const Common& common, json config) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    if (!common.reproducible) doc["generated_at"] = utc_now();
    doc["config"] = std::move(config);
    return doc;
}

json combiners_json(const std::vector<Combiner>& cs) {
    json out = json::array();
    for (Combiner c : cs) out.push_back(std::string(to_string(c)));
    return out;
}

json gammas_json(const GammaSet& gs) {
    json out = json::array();
    for (const auto& g : gs.values()) out.push_back(gamma_to_json(g));
    return out;
}

json kernel_choice_json(const KernelChoice& k) {
    json j{{"id", std::string(to_string(k.id))}};
    if (k.bandwidths) j["bandwidths"] = {(*k.bandwidths)[0], (*k.bandwidths)[1]};
    else if (k.id == KernelId::ghsic) j["bandwidths"] = "median";
    return j;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void emit(const Common& common, const std::string& body, std::ostream& out) {
    if (common.output.empty()) {
        out << body;
        return;
    }
    std::ofstream file(common.output, std::ios::binary);
    if (!file) throw Error(ErrorCode::io, "cannot write '" + common.output + "'");
    file << body;
    if (!file) throw Error(ErrorCode::io, "write to '" + common.output + "' failed");
}

// ---------------------------------------------------------------------------

int cmd_test(const TestOpts& o, const Common& common, std::ostream& out) {
    const GammaSet gammas = GammaSet::parse(o.gammas);
    const auto combiners = parse_combiners(o.combiners);
    const TieMode tie = parse_tie_mode(o.tie_mode);
    const KernelChoice kernel = o.kernel.choice();
    if (!o.seed) throw Error(ErrorCode::seed_required, "--seed is required for a reproducible test");
    if (o.b_count == 0) throw Error(ErrorCode::bad_argument, "--B must be positive");
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw Error(ErrorCode::bad_argument, "--alpha must lie in (0, 1)");

    const CsvTable table = read_csv_file(o.input);
    const auto xc = parse_column_selector(o.x_cols, table.header);
    const auto yc = parse_column_selector(o.y_cols, table.header);
    const Sample sample = validate_sample(extract_columns(table, xc), extract_columns(table, yc));
    const KernelPairSpec spec = kernel.resolve(sample);

    const PermutationPlan plan{o.b_count, o.seed, tie};
    const TestReport report = permutation_test(sample, spec, gammas, plan, combiners, resolve_threads(common.threads));

    // Fisher decides when requested, otherwise the first combiner listed
    const Combiner decider =
        std::find(combiners.begin(), combiners.end(), Combiner::fisher) != combiners.end() ? Combiner::fisher
                                                                                          : combiners.front();
    double decision_p = 1.0;
    for (const auto& c : report.combined)
        if (c.method == decider) decision_p = c.p_perm;

    json config{{"input", o.input},
                {"x_cols", o.x_cols},
                {"y_cols", o.y_cols},
                {"x_columns", xc},
                {"y_columns", yc},
                {"kernel", kernel_choice_json(kernel)},
                {"gammas", gammas_json(gammas)},
                {"B", o.b_count},
                {"seed", *o.seed},
                {"alpha", o.alpha},
                {"combiners", combiners_json(combiners)},
                {"tie_mode", std::string(to_string(tie))}};
    json doc = envelope("test", common, config);
    doc["report"] = report_to_json(report);
    doc["decision"] = {{"combiner", std::string(to_string(decider))},
                       {"p_value", decision_p},
                       {"alpha", o.alpha},
                       {"reject", decision_p <= o.alpha}};

    if (common.format == "json") {
        emit(common, doc.dump(2) + "\n", out);
        return exit_ok;
    }
    std::ostringstream s;
    s << "n=" << report.meta.n << " d1=" << report.meta.d1 << " d2=" << report.meta.d2
      << " kernel=" << to_string(spec.id()) << " B=" << o.b_count << " seed=" << *o.seed << "\n";
    s << "S1=" << fmt("%.10g", report.triple.s1) << " S2=" << fmt("%.10g", report.triple.s2)
      << " S3=" << fmt("%.10g", report.triple.s3);
    if (report.sigma0_sq) s << " sigma0^2=" << fmt("%.10g", *report.sigma0_sq);
    s << "\n\ngamma        mu_hat        scaled    p_perm    p_asym\n";
    for (const auto& g : report.per_gamma) {
        char line[160];
        std::snprintf(line, sizeof line, "%-5s %13.6g %13.6g %9.4f %9s\n", g.gamma.to_string().c_str(), g.mu_hat,
                      g.scaled_stat, g.p_perm, g.p_asym ? fmt("%.4f", *g.p_asym).c_str() : "-");
        s << line;
    }
    s << "\ncombiner          stat    p_perm\n";
    for (const auto& c : report.combined) {
        char line[120];
        std::snprintf(line, sizeof line, "%-8s %13.6g %9.4f\n", std::string(to_string(c.method)).c_str(), c.stat,
                      c.p_perm);
        s << line;
    }
    s << "\n" << (decision_p <= o.alpha ? "reject" : "do not reject") << " independence at alpha=" << o.alpha << " ("
      << to_string(decider) << " p=" << fmt("%.4f", decision_p) << ")\n";
    emit(common, s.str(), out);
    return exit_ok;
}

SimConfig sim_config(const SimOpts& o) {
    SimConfig cfg;
    cfg.model = parse_model(o.model);
    cfg.n = o.n;
    cfg.d1 = o.d1.value_or(o.d.value_or(5));
    cfg.d2 = o.d2.value_or(o.d.value_or(cfg.d1));
    cfg.error = parse_error_family(o.error);
    cfg.kappa = o.kappa;
    cfg.reps = o.reps;
    cfg.b_count = o.b_count;
    cfg.alpha = o.alpha;
    cfg.seed = o.seed;
    if (cfg.kappa && *cfg.kappa < 0.0) throw Error(ErrorCode::bad_argument, "--kappa must be nonnegative");
    if (cfg.b_count == 0) throw Error(ErrorCode::bad_argument, "--B must be positive");
    return cfg;
}

int cmd_simulate(const SimOpts& o, const Common& common, std::ostream& out) {
    const SimConfig cfg = sim_config(o);
    const GammaSet gammas = GammaSet::parse(o.gammas);
    const auto combiners = parse_combiners(o.combiners);
    const TieMode tie = parse_tie_mode(o.tie_mode);
    const KernelChoice kernel = o.kernel.choice();
    const auto result =
        size_power_experiment(cfg, gammas, combiners, kernel, tie, resolve_threads(common.threads));

    json config{{"model", std::string(to_string(cfg.model))},
                {"n", cfg.n},
                {"d1", cfg.d1},
                {"d2", cfg.d2},
                {"error", std::string(to_string(cfg.error))},
                {"kappa", cfg.resolved_kappa()},
                {"reps", cfg.reps},
                {"B", cfg.b_count},
                {"alpha", cfg.alpha},
                {"seed", cfg.seed},
                {"gammas", gammas_json(gammas)},
                {"combiners", combiners_json(combiners)},
                {"kernel", kernel_choice_json(kernel)},
                {"tie_mode", std::string(to_string(tie))}};
    json doc = envelope("simulate", common, config);
    doc["table"] = experiment_to_json(result);
    if (common.format == "json") {
        emit(common, doc.dump(2) + "\n", out);
        return exit_ok;
    }
    std::ostringstream s;
    s << "model=" << to_string(cfg.model) << " n=" << cfg.n << " d1=" << cfg.d1 << " d2=" << cfg.d2
      << " error=" << to_string(cfg.error) << " kappa=" << cfg.resolved_kappa() << " reps=" << cfg.reps
      << " B=" << cfg.b_count << " alpha=" << cfg.alpha << " seed=" << cfg.seed << "\n\n";
    s << "method     rejections   reps    rate      se\n";
    for (const auto& row : result.rows) {
        char line[120];
        std::snprintf(line, sizeof line, "%-10s %10zu %6zu %7.3f %7.4f\n", row.method.c_str(), row.rejections,
                      row.reps, row.rate, row.se);
        s << line;
    }
    emit(common, s.str(), out);
    return exit_ok;
}

struct OracleRow {
    std::string kernel;
    std::string status;
    std::size_t instances = 0;
    double max_err_triple = 0.0;
    double max_err_jackknife = 0.0;
};

Sample oracle_sample(std::uint64_t seed, std::size_t instance, std::size_t n) {
    Engine engine = make_engine(seed, instance);
    std::normal_distribution<double> z;
    Matrix x(n, 3);
    Matrix y(n, 2);
    for (double* p = x.data(); p != x.data() + n * 3; ++p) *p = z(engine);
    for (double* p = y.data(); p != y.data() + n * 2; ++p) *p = z(engine);
    return validate_sample(std::move(x), std::move(y));
}

OracleRow oracle_pair_kernel(KernelId id, const OracleOpts& o, unsigned threads) {
    OracleRow row;
    row.kernel = std::string(to_string(id));
    std::vector<std::array<double, 2>> errs(o.seeds);
    parallel_for(o.seeds, threads, [&](std::size_t s) {
        const std::size_t n = o.n ? *o.n : o.n_min + s % (o.n_max - o.n_min + 1);
        const Sample sample = oracle_sample(o.seed, s, n);
        const KernelPairSpec spec = KernelChoice{id, std::nullopt}.resolve(sample);
        const StatTriple brute = brute_force_triple(sample, spec);
        const PairKernelMatrices mats = pair_kernel_matrices(sample, spec);
        StatTriple fast = fast_triple_pair(mats);
        if (o.inject_fault) {
            // negative control: wrong collision coefficient in S2
            PairSums sums = PairStatEngine(mats).sums();
            const double sigma3 = sums.sum_rc - sums.t1;
            fast.s2 = (sums.a_all * sums.b_all - 5.0 * sigma3 - 2.0 * sums.t1) / falling_factorial(n, 4);
        }
        const double e1 = std::max({std::fabs(brute.s1 - fast.s1), std::fabs(brute.s2 - fast.s2),
                                    std::fabs(brute.s3 - fast.s3)});
        const double e2 = std::fabs(jackknife_brute(sample, spec).sigma0_sq - jackknife_fast(mats).sigma0_sq);
        errs[s] = {e1, e2};
    });
    for (const auto& e : errs) {
        row.max_err_triple = std::max(row.max_err_triple, e[0]);
        row.max_err_jackknife = std::max(row.max_err_jackknife, e[1]);
    }
    row.instances = o.seeds;
    row.status = row.max_err_triple <= o.tolerance && row.max_err_jackknife <= o.tolerance ? "PASS" : "FAIL";
    return row;
}

int cmd_oracle_check(const OracleOpts& o, const Common& common, std::ostream& out) {
    if (o.seeds == 0) throw Error(ErrorCode::bad_argument, "--seeds must be positive");
    if (o.n_min > o.n_max) throw Error(ErrorCode::bad_argument, "--n-min exceeds --n-max");
    std::vector<KernelId> kernels;
    {
        std::string_view text(o.kernels);
        while (true) {
            const auto comma = text.find(',');
            if (const auto tok = text.substr(0, comma); !tok.empty()) kernels.push_back(parse_kernel_id(tok));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
    }
    const unsigned threads = resolve_threads(common.threads);
    std::vector<OracleRow> rows;
    for (KernelId id : kernels) {
        if (id == KernelId::pcov) {
            // no fast path to compare against; just exercise the enumerator
            const std::size_t n = std::min<std::size_t>(o.n.value_or(8), TupleBudget::for_arity(5).max_n_bruteforce);
            brute_force_triple(oracle_sample(o.seed, 0, n), KernelPairSpec::pcov());
            rows.push_back({"pcov", "SKIPPED", 1, 0.0, 0.0});
            continue;
        }
        rows.push_back(oracle_pair_kernel(id, o, threads));
    }
    bool failed = false;
    json checks = json::array();
    for (const auto& r : rows) {
        failed = failed || r.status == "FAIL";
        checks.push_back({{"kernel", r.kernel},
                          {"status", r.status},
                          {"instances", r.instances},
                          {"max_err_triple", r.max_err_triple},
                          {"max_err_jackknife", r.max_err_jackknife}});
    }
    json config{{"seeds", o.seeds},
                {"n_min", o.n ? *o.n : o.n_min},
                {"n_max", o.n ? *o.n : o.n_max},
                {"kernels", o.kernels},
                {"tolerance", o.tolerance},
                {"seed", o.seed},
                {"inject_fault", o.inject_fault}};
    json doc = envelope("oracle-check", common, config);
    doc["checks"] = checks;
    doc["status"] = failed ? "FAIL" : "PASS";
    if (common.format == "json") {
        emit(common, doc.dump(2) + "\n", out);
    } else {
        std::ostringstream s;
        for (const auto& r : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%-6s %-8s instances=%zu max_err_triple=%.3g max_err_jackknife=%.3g\n",
                          r.kernel.c_str(), r.status.c_str(), r.instances, r.max_err_triple, r.max_err_jackknife);
            s << line;
        }
        s << (failed ? "FAIL" : "PASS") << "\n";
        emit(common, s.str(), out);
    }
    return failed ? exit_oracle : exit_ok;
}

int cmd_population(const PopOpts& o, const Common& common, std::ostream& out) {
    SimConfig cfg;
    cfg.model = parse_model(o.model);
    cfg.error = parse_error_family(o.error);
    cfg.d1 = cfg.d2 = o.d;
    cfg.kappa = o.kappa;
    const KernelChoice kernel = o.kernel.choice();
    if (kernel.id == KernelId::pcov) throw Error(ErrorCode::bad_argument, "population needs a pair-dependent kernel");
    if (kernel.id == KernelId::ghsic && !kernel.bandwidths) {
        throw Error(ErrorCode::bad_argument, "population with ghsic needs --sigma-x and --sigma-y");
    }
    const KernelPairSpec spec = kernel.id == KernelId::dcov
                                    ? KernelPairSpec::dcov()
                                    : KernelPairSpec::ghsic((*kernel.bandwidths)[0], (*kernel.bandwidths)[1]);
    const PopulationTriple p = mc_population_triple(cfg, spec, o.n_mc, o.seed, resolve_threads(common.threads));

    json config{{"model", std::string(to_string(cfg.model))},
                {"error", std::string(to_string(cfg.error))},
                {"d", o.d},
                {"kappa", cfg.resolved_kappa()},
                {"kernel", kernel_choice_json(kernel)},
                {"n_mc", o.n_mc},
                {"seed", o.seed}};
    json doc = envelope("population", common, config);
    doc["population"] = population_to_json(p);
    if (common.format == "json") {
        emit(common, doc.dump(2) + "\n", out);
        return exit_ok;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "u=%.5f (se %.5f)  v=%.5f (se %.5f)  sum=%.5f (se %.5f)  n_mc=%zu\n", p.u, p.se_u,
                  p.v, p.se_v, p.sum, p.se_sum, p.n_mc);
    emit(common, buf, out);
    return exit_ok;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output,-o", c.output, "write here instead of stdout");
    sub->add_option("--threads", c.threads, "worker threads (default: GAMMADEP_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--reproducible", c.reproducible, "omit the timestamp");
}

void add_kernel(CLI::App* sub, KernelOpts& k) {
    sub->add_option("--kernel", k.id, "dcov, ghsic or pcov");
    sub->add_option("--sigma-x", k.sigma_x, "ghsic bandwidth for x (default: median distance)");
    sub->add_option("--sigma-y", k.sigma_y, "ghsic bandwidth for y (default: median distance)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gamma-family dependence tests"};
    app.name("gammadep");
    app.require_subcommand(1);

    Common common;
    TestOpts test;
    SimOpts sim;
    OracleOpts oracle;
    PopOpts pop;

    auto* t = app.add_subcommand("test", "permutation test on CSV data");
    t->add_option("input", test.input, "headered CSV file")->required();
    t->add_option("--x-cols", test.x_cols, "x columns, e.g. 0..5 or a,b")->required();
    t->add_option("--y-cols", test.y_cols, "y columns")->required();
    add_kernel(t, test.kernel);
    t->add_option("--gamma", test.gammas, "candidate gammas");
    t->add_option("--B", test.b_count, "permutations");
    t->add_option("--seed", test.seed, "permutation seed (required)");
    t->add_option("--alpha", test.alpha, "level");
    t->add_option("--combiners", test.combiners, "subset of fisher,min,cauchy");
    t->add_option("--tie-mode", test.tie_mode, "strict or inclusive");
    add_common(t, common);

    auto* s = app.add_subcommand("simulate", "size/power experiment");
    s->add_option("--model", sim.model, "null-a, null-b, m1..m5");
    s->add_option("--n", sim.n, "sample size");
    s->add_option("--d", sim.d, "dimension of x and y");
    s->add_option("--d1", sim.d1, "dimension of x");
    s->add_option("--d2", sim.d2, "dimension of y");
    s->add_option("--error", sim.error, "normal or t3");
    s->add_option("--kappa", sim.kappa, "noise level (default: model-specific)");
    s->add_option("--reps", sim.reps, "replications");
    s->add_option("--B", sim.b_count, "permutations per replication");
    s->add_option("--alpha", sim.alpha, "level");
    s->add_option("--seed", sim.seed, "master seed");
    s->add_option("--gamma", sim.gammas, "candidate gammas");
    s->add_option("--combiners", sim.combiners, "subset of fisher,min,cauchy");
    s->add_option("--tie-mode", sim.tie_mode, "strict or inclusive");
    add_kernel(s, sim.kernel);
    add_common(s, common);

    auto* oc = app.add_subcommand("oracle-check", "fast paths against brute-force enumeration");
    oc->add_option("--seeds", oracle.seeds, "instances per kernel");
    oc->add_option("--n-min", oracle.n_min, "smallest n");
    oc->add_option("--n-max", oracle.n_max, "largest n");
    oc->add_option("--n", oracle.n, "fixed n for every instance");
    oc->add_option("--kernel", oracle.kernels, "comma-separated kernels");
    oc->add_option("--tolerance", oracle.tolerance, "max absolute error");
    oc->add_option("--seed", oracle.seed, "base seed");
    oc->add_flag("--inject-fault", oracle.inject_fault, "perturb the S2 formula (negative control)");
    add_common(oc, common);

    auto* p = app.add_subcommand("population", "Monte-Carlo S1-S3 and S2-S3");
    p->add_option("--model", pop.model, "null-a, null-b, m1..m5");
    p->add_option("--error", pop.error, "normal or t3");
    p->add_option("--d", pop.d, "dimension");
    p->add_option("--kappa", pop.kappa, "noise level");
    p->add_option("--n-mc", pop.n_mc, "four-point draws");
    p->add_option("--seed", pop.seed, "seed");
    add_kernel(p, pop.kernel);
    add_common(p, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "gammadep: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? exit_ok : exit_usage;
    }

    try {
        if (t->parsed()) return cmd_test(test, common, out);
        if (s->parsed()) return cmd_simulate(sim, common, out);
        if (oc->parsed()) return cmd_oracle_check(oracle, common, out);
        if (p->parsed()) return cmd_population(pop, common, out);
    } catch (const Error& e) {
        err << "gammadep: " << e.what() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "gammadep: " << e.what() << "\n";
        return exit_data;
    }
    return exit_usage;
}

}  // namespace gammadep::cli
