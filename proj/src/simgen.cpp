#include "gammadep/simgen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gammadep/numeric.hpp"
#include "gammadep/parallel.hpp"
#include "gammadep/ustat.hpp"

namespace gammadep {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

Eigen::MatrixXd banded_factor(std::size_t d) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i + 1 < sigma.rows(); ++i) {
        sigma(i, i + 1) = 0.5;
        sigma(i + 1, i) = 0.5;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::not_pd, "banded covariance is not positive definite");
    return llt.matrixL();
}

Matrix uniform_box(std::size_t n, std::size_t d, Engine& engine) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix out(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = u(engine);
    return out;
}

}  // namespace

std::string_view to_string(Model m) noexcept {
    switch (m) {
        case Model::null_a: return "null-a";
        case Model::null_b: return "null-b";
        case Model::m1: return "m1";
        case Model::m2: return "m2";
        case Model::m3: return "m3";
        case Model::m4: return "m4";
        case Model::m5: return "m5";
    }
    return "unknown";
}

Model parse_model(std::string_view text) {
    auto l = lower(text);
    std::replace(l.begin(), l.end(), '_', '-');
    for (Model m : {Model::null_a, Model::null_b, Model::m1, Model::m2, Model::m3, Model::m4, Model::m5})
        if (l == to_string(m)) return m;
    throw Error(ErrorCode::bad_model, "unknown model '" + std::string(text) + "'");
}

std::string_view to_string(ErrorFamily e) noexcept { return e == ErrorFamily::normal_banded ? "normal" : "t3"; }

ErrorFamily parse_error_family(std::string_view text) {
    const auto l = lower(text);
    if (l == "normal" || l == "normal-banded" || l == "normal_banded") return ErrorFamily::normal_banded;
    if (l == "t3" || l == "t") return ErrorFamily::t3;
    throw Error(ErrorCode::bad_argument, "unknown error family '" + std::string(text) + "'");
}

double default_kappa(Model model, ErrorFamily error) {
    const bool normal = error == ErrorFamily::normal_banded;
    switch (model) {
        case Model::m1: return normal ? 1.5 : 0.4;
        case Model::m2: return normal ? 0.1 : 0.05;
        case Model::m3: return normal ? 0.5 : 0.15;
        case Model::m4: return 0.05;
        case Model::m5: return normal ? 0.5 : 0.1;
        case Model::null_a:
        case Model::null_b: return 0.0;
    }
    return 0.0;
}

Matrix gen_error(ErrorFamily family, std::size_t n, std::size_t d, Engine& engine) {
    if (d == 0) throw Error(ErrorCode::bad_dim, "dimension must be positive");
    Matrix out(n, d);
    if (family == ErrorFamily::t3) {
        std::student_t_distribution<double> t(3.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) out(i, j) = t(engine);
        return out;
    }
    const Eigen::MatrixXd l = banded_factor(d);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> g(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : g) x = z(engine);
        // L is lower bidiagonal-ish; full loop keeps it general
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += l(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * g[k];
            out(i, j) = s;
        }
    }
    return out;
}

Matrix gen_null(Model design, std::size_t n, std::size_t d, std::uint64_t seed) {
    Engine engine(seed);
    switch (design) {
        case Model::null_a: return gen_error(ErrorFamily::normal_banded, n, d, engine);
        case Model::null_b: return gen_error(ErrorFamily::t3, n, d, engine);
        default: break;
    }
    throw Error(ErrorCode::bad_model, std::string(to_string(design)) + " is not a null design");
}

Sample gen_model(const SimConfig& cfg) {
    if (cfg.model == Model::null_a || cfg.model == Model::null_b) {
        throw Error(ErrorCode::bad_model, std::string(to_string(cfg.model)) + " is not a dependence model");
    }
    if (cfg.d1 != cfg.d2) throw Error(ErrorCode::bad_dim, "models need d2 == d1");
    if (cfg.d1 == 0) throw Error(ErrorCode::bad_dim, "dimension must be positive");
    const std::size_t n = cfg.n;
    const std::size_t d = cfg.d1;
    const double kappa = cfg.resolved_kappa();
    Engine engine(cfg.seed);
    Matrix x;
    Matrix y(n, d);
    switch (cfg.model) {
        case Model::m1: {
            x = uniform_box(n, d, engine);
            const Matrix e = gen_error(cfg.error, n, d, engine);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) y(i, j) = x(i, j) + kappa * e(i, j);
            break;
        }
        case Model::m2: {
            x = uniform_box(n, d, engine);
            const Matrix e = gen_error(cfg.error, n, d, engine);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) y(i, j) = x(i, j) * x(i, j) + kappa * e(i, j);
            break;
        }
        case Model::m3: {
            const Matrix w = uniform_box(n, d, engine);
            const Matrix e = gen_error(cfg.error, n, d, engine);
            x = Matrix(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    x(i, j) = std::cos(std::numbers::pi * w(i, j)) + kappa * e(i, j);
                    y(i, j) = std::sin(std::numbers::pi * w(i, j));
                }
            break;
        }
        case Model::m4: {
            const Matrix w1 = uniform_box(n, d, engine);
            const Matrix w2 = uniform_box(n, d, engine);
            const Matrix e = gen_error(cfg.error, n, d, engine);
            const double c = std::cos(-std::numbers::pi / 4.0);
            const double s = std::sin(-std::numbers::pi / 4.0);
            x = Matrix(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    x(i, j) = w1(i, j) * c + w2(i, j) * s + kappa * e(i, j);
                    y(i, j) = -w1(i, j) * s + w2(i, j) * c;
                }
            break;
        }
        case Model::m5: {
            x = uniform_box(n, d, engine);
            const Matrix e = gen_error(cfg.error, n, d, engine);
            std::bernoulli_distribution coin(0.5);
            for (std::size_t i = 0; i < n; ++i) {
                const double label = coin(engine) ? 0.5 : -0.5;
                for (std::size_t j = 0; j < d; ++j) y(i, j) = (x(i, j) * x(i, j) + kappa * e(i, j)) * label;
            }
            break;
        }
        default: break;
    }
    return validate_sample(std::move(x), std::move(y));
}

Sample gen_sample(const SimConfig& cfg) {
    if (cfg.model == Model::null_a || cfg.model == Model::null_b) {
        return validate_sample(gen_null(cfg.model, cfg.n, cfg.d1, derive_seed(cfg.seed, 0)),
                               gen_null(cfg.model, cfg.n, cfg.d2, derive_seed(cfg.seed, 1)));
    }
    return gen_model(cfg);
}

PopulationTriple mc_population_triple(const SimConfig& cfg, const KernelPairSpec& spec, std::size_t n_mc,
                                      std::uint64_t seed, unsigned threads) {
    if (!spec.is_pair_dependent()) throw Error(ErrorCode::bad_argument, "population triple needs a pair-dependent kernel");
    if (n_mc == 0) throw Error(ErrorCode::bad_argument, "n_mc must be positive");
    constexpr std::size_t kBatch = 2048;  // four-point draws per batch
    const std::size_t batches = (n_mc + kBatch - 1) / kBatch;

    struct Partial {
        CompensatedSum u, v, uu, vv, ss;
    };
    std::vector<Partial> parts(batches);
    parallel_for(batches, threads, [&](std::size_t k) {
        const std::size_t draws = std::min(kBatch, n_mc - k * kBatch);
        SimConfig batch = cfg;
        batch.n = 4 * draws;
        batch.seed = derive_seed(seed, k);
        const Sample s = gen_sample(batch);
        Partial& p = parts[k];
        Matrix xs(4, s.d1());
        Matrix ys(4, s.d2());
        for (std::size_t t = 0; t < draws; ++t) {
            for (std::size_t r = 0; r < 4; ++r) {
                std::copy_n(s.x().row(4 * t + r).begin(), s.d1(), xs.row(r).begin());
                std::copy_n(s.y().row(4 * t + r).begin(), s.d2(), ys.row(r).begin());
            }
            const PairKernelMatrices mats = pair_kernel_matrices(validate_sample(xs, ys), spec);
            const auto a = [&](int i, int j) { return mats.a(i, j); };
            const auto b = [&](int i, int j) { return mats.b(i, j); };
            const std::array<std::size_t, 4> idx{0, 1, 2, 3};
            const double psi1 = symmetrized_psi_pair(mats, PsiIndex::first, idx);
            const double psi3 = symmetrized_psi_pair(mats, PsiIndex::third, idx);
            // the three ways to split four points into two disjoint pairs
            const double psi2 = (a(0, 1) * b(2, 3) + a(2, 3) * b(0, 1) + a(0, 2) * b(1, 3) + a(1, 3) * b(0, 2) +
                                 a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3)) /
                                6.0;
            const double u = psi1 - psi3;
            const double v = psi2 - psi3;
            p.u.add(u);
            p.v.add(v);
            p.uu.add(u * u);
            p.vv.add(v * v);
            p.ss.add((u + v) * (u + v));
        }
    });
    CompensatedSum su, sv, suu, svv, sss;
    for (const auto& p : parts) {
        su.add(p.u.value());
        sv.add(p.v.value());
        suu.add(p.uu.value());
        svv.add(p.vv.value());
        sss.add(p.ss.value());
    }
    const auto nd = static_cast<double>(n_mc);
    PopulationTriple out;
    out.n_mc = n_mc;
    out.u = su.value() / nd;
    out.v = sv.value() / nd;
    out.sum = out.u + out.v;
    const auto se = [&](double sq, double mean) {
        const double var = std::max(0.0, (sq / nd - mean * mean) * nd / std::max(1.0, nd - 1.0));
        return std::sqrt(var / nd);
    };
    out.se_u = se(suu.value(), out.u);
    out.se_v = se(svv.value(), out.v);
    out.se_sum = se(sss.value(), out.sum);
    return out;
}

ExperimentResult size_power_experiment(const SimConfig& cfg, const GammaSet& gammas,
                                       std::span<const Combiner> combiners, const KernelChoice& kernel,
                                       TieMode tie_mode, unsigned threads) {
    if (cfg.reps == 0) throw Error(ErrorCode::bad_argument, "reps must be positive");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error(ErrorCode::bad_argument, "alpha must lie in (0, 1)");

    std::vector<std::string> names;
    for (const Gamma& g : gammas.values()) names.push_back("T" + g.to_string());
    for (Combiner c : combiners) names.emplace_back(to_string(c));
    std::vector<std::size_t> asym_index;
    for (std::size_t g = 0; g < gammas.size(); ++g)
        if (gammas[g].has_half_normal_limit()) {
            asym_index.push_back(g);
            names.push_back("asym-T" + gammas[g].to_string());
        }

    ExperimentResult result;
    result.pvalues.assign(cfg.reps, std::vector<double>(names.size(), 1.0));
    parallel_for(cfg.reps, threads, [&](std::size_t r) {
        SimConfig rep = cfg;
        rep.seed = derive_seed(cfg.seed, 2 * r);
        const Sample sample = gen_sample(rep);
        const PermutationPlan plan{cfg.b_count, derive_seed(cfg.seed, 2 * r + 1), tie_mode};
        const TestReport report = permutation_test(sample, kernel.resolve(sample), gammas, plan, combiners, 1);
        auto& row = result.pvalues[r];
        std::size_t j = 0;
        for (const auto& g : report.per_gamma) row[j++] = g.p_perm;
        for (const auto& c : report.combined) row[j++] = c.p_perm;
        for (std::size_t g : asym_index) row[j++] = report.per_gamma[g].p_asym.value_or(1.0);
    });

    for (std::size_t j = 0; j < names.size(); ++j) {
        RejectionRow row;
        row.method = names[j];
        row.reps = cfg.reps;
        for (const auto& rep : result.pvalues)
            if (rep[j] <= cfg.alpha) ++row.rejections;
        row.rate = static_cast<double>(row.rejections) / static_cast<double>(cfg.reps);
        row.se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(cfg.reps));
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace gammadep
