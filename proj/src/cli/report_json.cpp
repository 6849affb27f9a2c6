#include "gammadep/cli/report_json.hpp"

using nlohmann::json;

namespace gammadep::cli {

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) throw Error(ErrorCode::parse, std::string("missing number '") + key + "'");
    return j.at(key).get<double>();
}

template <class T>
T integer(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw Error(ErrorCode::parse, std::string("missing integer '") + key + "'");
    }
    return j.at(key).get<T>();
}

std::string text(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) throw Error(ErrorCode::parse, std::string("missing string '") + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace

json gamma_to_json(const Gamma& g) {
    if (g.is_infinite()) return "inf";
    return g.order();
}

Gamma gamma_from_json(const json& j) {
    if (j.is_string()) return Gamma::parse(j.get<std::string>());
    if (j.is_number_integer()) return Gamma::finite(j.get<int>());
    throw Error(ErrorCode::parse, "gamma must be an integer or \"inf\"");
}

json kernel_to_json(const KernelPairSpec& k) {
    json j{{"id", std::string(to_string(k.id()))}, {"m", k.arity()}};
    if (k.bandwidths()) j["bandwidths"] = {(*k.bandwidths())[0], (*k.bandwidths())[1]};
    return j;
}

KernelPairSpec kernel_from_json(const json& j) {
    switch (parse_kernel_id(text(j, "id"))) {
        case KernelId::dcov: return KernelPairSpec::dcov();
        case KernelId::pcov: return KernelPairSpec::pcov();
        case KernelId::ghsic: {
            const auto& bw = j.at("bandwidths");
            return KernelPairSpec::ghsic(bw.at(0).get<double>(), bw.at(1).get<double>());
        }
    }
    throw Error(ErrorCode::parse, "bad kernel");
}

json report_to_json(const TestReport& r) {
    json gammas = json::array();
    for (const auto& g : r.meta.gammas.values()) gammas.push_back(gamma_to_json(g));
    json per_gamma = json::array();
    for (const auto& g : r.per_gamma) {
        json e{{"gamma", gamma_to_json(g.gamma)},
               {"mu_hat", g.mu_hat},
               {"scaled_stat", g.scaled_stat},
               {"p_perm", g.p_perm}};
        e["p_asym"] = g.p_asym ? json(*g.p_asym) : json(nullptr);
        per_gamma.push_back(e);
    }
    json combined = json::array();
    for (const auto& c : r.combined) {
        combined.push_back({{"method", std::string(to_string(c.method))}, {"stat", c.stat}, {"p_perm", c.p_perm}});
    }
    json out;
    out["meta"] = {{"B", r.meta.b_count},
                   {"seed", r.meta.seed},
                   {"kernel", kernel_to_json(r.meta.kernel)},
                   {"gammas", gammas},
                   {"n", r.meta.n},
                   {"d1", r.meta.d1},
                   {"d2", r.meta.d2},
                   {"tie_mode", std::string(to_string(r.meta.tie_mode))}};
    out["triple"] = {{"s1", r.triple.s1},
                     {"s2", r.triple.s2},
                     {"s3", r.triple.s3},
                     {"u", r.triple.u()},
                     {"v", r.triple.v()},
                     {"n", r.triple.n},
                     {"kernel", kernel_to_json(r.triple.kernel)}};
    out["sigma0_sq"] = r.sigma0_sq ? json(*r.sigma0_sq) : json(nullptr);
    out["per_gamma"] = per_gamma;
    out["combined"] = combined;
    return out;
}

TestReport report_from_json(const json& j) {
    try {
        TestReport r;
        const json& meta = j.at("meta");
        std::vector<Gamma> gammas;
        for (const auto& g : meta.at("gammas")) gammas.push_back(gamma_from_json(g));
        r.meta = ReportMeta{integer<std::size_t>(meta, "B"),
                            integer<std::uint64_t>(meta, "seed"),
                            kernel_from_json(meta.at("kernel")),
                            GammaSet(std::move(gammas)),
                            integer<std::size_t>(meta, "n"),
                            integer<std::size_t>(meta, "d1"),
                            integer<std::size_t>(meta, "d2"),
                            parse_tie_mode(text(meta, "tie_mode"))};
        const json& t = j.at("triple");
        r.triple = StatTriple{number(t, "s1"), number(t, "s2"), number(t, "s3"), integer<std::size_t>(t, "n"),
                              kernel_from_json(t.at("kernel"))};
        if (!j.at("sigma0_sq").is_null()) r.sigma0_sq = number(j, "sigma0_sq");
        for (const auto& e : j.at("per_gamma")) {
            GammaResult g{gamma_from_json(e.at("gamma")), number(e, "mu_hat"), number(e, "scaled_stat"),
                          number(e, "p_perm"), std::nullopt};
            if (!e.at("p_asym").is_null()) g.p_asym = number(e, "p_asym");
            r.per_gamma.push_back(g);
        }
        for (const auto& e : j.at("combined")) {
            r.combined.push_back({parse_combiner(text(e, "method")), number(e, "stat"), number(e, "p_perm")});
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed report: ") + e.what());
    }
}

json experiment_to_json(const ExperimentResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows) {
        rows.push_back({{"method", row.method},
                        {"rejections", row.rejections},
                        {"reps", row.reps},
                        {"rate", row.rate},
                        {"se", row.se}});
    }
    return rows;
}

json population_to_json(const PopulationTriple& p) {
    return {{"u", p.u},       {"v", p.v},       {"sum", p.sum},       {"se_u", p.se_u},
            {"se_v", p.se_v}, {"se_sum", p.se_sum}, {"n_mc", p.n_mc}};
}

}  // namespace gammadep::cli
