#pragma once
// Simulation designs: two null designs and five dependence models, Monte-Carlo
// population quantities, and the size/power driver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gammadep/data_model.hpp"
#include "gammadep/inference.hpp"
#include "gammadep/kernels.hpp"
#include "gammadep/rng.hpp"

namespace gammadep {

enum class Model { null_a, null_b, m1, m2, m3, m4, m5 };
enum class ErrorFamily { normal_banded, t3 };

std::string_view to_string(Model m) noexcept;
Model parse_model(std::string_view text);
std::string_view to_string(ErrorFamily e) noexcept;
ErrorFamily parse_error_family(std::string_view text);

/// Noise level used when SimConfig::kappa is unset.
double default_kappa(Model model, ErrorFamily error);

struct SimConfig {
    Model model = Model::null_a;
    std::size_t n = 100;
    std::size_t d1 = 5;
    std::size_t d2 = 5;
    ErrorFamily error = ErrorFamily::normal_banded;
    std::optional<double> kappa;
    std::size_t reps = 500;
    std::size_t b_count = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;

    double resolved_kappa() const { return kappa ? *kappa : default_kappa(model, error); }
};

/// n x d draws: banded normal (unit variances, 0.5 between neighbours) for
/// NULL_A, independent t(3) coordinates for NULL_B.
/// Throws BAD_MODEL for other models and NOT_PD if the band fails to factor.
Matrix gen_null(Model design, std::size_t n, std::size_t d, std::uint64_t seed);

/// n x d matrix of noise from the given family.
Matrix gen_error(ErrorFamily family, std::size_t n, std::size_t d, Engine& engine);

/// Dependence model M1..M5. Throws BAD_MODEL for null designs and BAD_DIM
/// when d2 != d1.
Sample gen_model(const SimConfig& cfg);

/// Any design; null designs draw x and y independently.
Sample gen_sample(const SimConfig& cfg);

struct PopulationTriple {
    double u = 0.0;
    double v = 0.0;
    double sum = 0.0;
    double se_u = 0.0;
    double se_v = 0.0;
    double se_sum = 0.0;
    std::size_t n_mc = 0;
};

/// Monte-Carlo estimates of S1 - S3 and S2 - S3. Each draw is four fresh
/// observations from the design; the per-draw value is the fully symmetrized
/// kernel difference at those four points, so draws are i.i.d. and unbiased.
/// Pair-dependent kernels only (GHSIC needs explicit bandwidths).
PopulationTriple mc_population_triple(const SimConfig& cfg, const KernelPairSpec& spec, std::size_t n_mc,
                                      std::uint64_t seed, unsigned threads = 1);

struct RejectionRow {
    std::string method;  // "T1".."T6", "Tinf", "fisher", "min", "cauchy", "asym-T2", ...
    std::size_t rejections = 0;
    std::size_t reps = 0;
    double rate = 0.0;
    double se = 0.0;
};

struct ExperimentResult {
    std::vector<RejectionRow> rows;
    /// outcome[r][j]: replication r, method rows[j]; p-value used for the decision
    std::vector<std::vector<double>> pvalues;
};

/// Runs cfg.reps independent replications of the permutation test at level
/// cfg.alpha. Replication r draws its sample from stream 2r and its
/// permutations from stream 2r+1 of cfg.seed.
ExperimentResult size_power_experiment(const SimConfig& cfg, const GammaSet& gammas,
                                       std::span<const Combiner> combiners, const KernelChoice& kernel = {},
                                       TieMode tie_mode = TieMode::strict, unsigned threads = 1);

}  // namespace gammadep
