#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtsdp/errors.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/pathfollow.hpp"
#include "mtsdp/regularity.hpp"

namespace mtsdp {

/// 17 significant digits: round-trip exact for binary64.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

/// Least-squares slope of log e_{k+1} vs log e_k over the prefix; NaN until
/// three usable pairs exist.
inline double running_order(const std::vector<double>& err, size_t upto) {
    std::vector<std::pair<double, double>> pts;
    const double cutoff = 100.0 * std::numeric_limits<double>::epsilon();
    for (size_t k = 0; k + 1 <= upto && k + 1 < err.size(); ++k) {
        if (err[k] > cutoff && err[k + 1] > cutoff) {
            pts.emplace_back(std::log(err[k]), std::log(err[k + 1]));
        }
    }
    if (pts.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    double su = 0.0, sv = 0.0;
    for (auto& [u, v] : pts) {
        su += u;
        sv += v;
    }
    const double ubar = su / pts.size(), vbar = sv / pts.size();
    double num = 0.0, den = 0.0;
    for (auto& [u, v] : pts) {
        num += (u - ubar) * (v - vbar);
        den += (u - ubar) * (u - ubar);
    }
    return den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : num / den;
}

}  // namespace detail

/// One row per iteration, 17-significant-digit fields, deterministic for a
/// fixed (instance, config) pair. The running order estimate needs a known
/// solution and is NaN otherwise.
inline std::string trace_csv(const RunResult& res, const std::optional<Iterate>& w_star) {
    std::string out = "k,mu,s_t,s_c,bt_t,bt_c,phi1,xi0,min_eig_G,min_eig_Y,zmax,order_estimate_running\n";
    std::vector<double> err;
    if (w_star) {
        err.push_back((res.trace.w0 - *w_star).norm());
        for (const TraceRecord& rec : res.trace.records) err.push_back((rec.w_next - *w_star).norm());
    }
    for (size_t i = 0; i < res.trace.records.size(); ++i) {
        const TraceRecord& rec = res.trace.records[i];
        const double order = w_star ? detail::running_order(err, i + 1)
                                    : std::numeric_limits<double>::quiet_NaN();
        out += std::to_string(rec.k);
        out += "," + fmt17(rec.mu);
        out += "," + fmt17(rec.s_t);
        out += "," + fmt17(rec.s_c);
        out += "," + std::to_string(rec.bt_t);
        out += "," + std::to_string(rec.bt_c);
        out += "," + fmt17(rec.phi1_next);
        out += "," + fmt17(rec.xi0_next);
        out += "," + fmt17(rec.min_eig_g);
        out += "," + fmt17(rec.min_eig_y);
        out += "," + fmt17(rec.zmax);
        out += "," + fmt17(order);
        out += "\n";
    }
    return out;
}

inline nlohmann::json iterate_to_json(const Iterate& w) {
    nlohmann::json j;
    j["x"] = std::vector<double>(w.x.data(), w.x.data() + w.x.size());
    std::vector<std::vector<double>> y(w.y.dim(), std::vector<double>(w.y.dim()));
    for (int i = 0; i < w.y.dim(); ++i)
        for (int k = 0; k < w.y.dim(); ++k) y[i][k] = w.y(i, k);
    j["y"] = y;
    j["z"] = std::vector<double>(w.z.data(), w.z.data() + w.z.size());
    return j;
}

inline Iterate iterate_from_json(const nlohmann::json& j, int n, int m, int s) {
    Iterate w;
    w.x.resize(n);
    for (int i = 0; i < n; ++i) w.x(i) = j.at("x").at(i).get<double>();
    Eigen::MatrixXd y(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) y(i, k) = j.at("y").at(i).at(k).get<double>();
    w.y = SymMatrix(y);
    w.z.resize(s);
    for (int i = 0; i < s; ++i) w.z(i) = j.at("z").at(i).get<double>();
    return w;
}

inline nlohmann::json regularity_to_json(const RegularityReport& rep) {
    nlohmann::json j;
    j["rank_g"] = rep.rank_g;
    j["nondegenerate"] = rep.nondegenerate;
    j["nondegeneracy_margin"] = rep.nondegeneracy_margin;
    j["strict_complementarity"] = rep.strict_complementarity;
    j["complementarity_lambda_min"] = rep.complementarity_lambda_min;
    j["sosc"] = rep.sosc;
    j["sosc_lambda_min"] = rep.sosc_lambda_min;
    j["critical_dim"] = rep.critical_dim;
    j["details"] = rep.details;
    return j;
}

inline nlohmann::json config_to_json(const SolverConfig& cfg) {
    nlohmann::json j;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["gamma"] = cfg.gamma;
    j["xi"] = cfg.xi;
    j["xi_prime"] = cfg.xi_prime;
    j["tau"] = cfg.tau;
    j["scaling"] = scaling_name(cfg.scaling);
    j["tol"] = cfg.tol;
    j["max_iters"] = cfg.max_iters;
    j["max_backtracks"] = cfg.max_backtracks;
    j["mu_floor"] = cfg.mu_floor;
    return j;
}

inline nlohmann::json run_summary_json(const std::string& instance_name, const SolverConfig& cfg,
                                       const RunResult& res, double estimated_order,
                                       const std::optional<RegularityReport>& reg) {
    nlohmann::json j;
    j["instance"] = instance_name;
    j["status"] = status_name(res.status);
    if (!res.reason.empty()) j["reason"] = res.reason;
    j["iterations"] = res.trace.records.size();
    j["mu0"] = res.trace.mu0;
    j["mu_final"] =
        res.trace.records.empty() ? res.trace.mu0 : res.trace.records.back().mu_next;
    j["final_xi0"] = res.final_xi0;
    if (std::isfinite(estimated_order)) j["estimated_order"] = estimated_order;
    j["config"] = config_to_json(cfg);
    j["w_final"] = iterate_to_json(res.w_final);
    if (reg) j["regularity"] = regularity_to_json(*reg);
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + path + "'");
    out << content;
}

}  // namespace mtsdp
