#include "hle/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "hle/flow.hpp"
#include "hle/io.hpp"
#include "hle/radial.hpp"
#include "hle/rellich.hpp"

namespace hle {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

json params_json(const SystemParams& p) {
    return {{"n", p.n}, {"a", p.a}, {"b", p.b}, {"p", p.p}, {"q", p.q}};
}

json reduced_json(const ReducedParams& r) {
    return {{"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"A", r.A},
            {"Gamma", r.Gamma},     {"delta", r.delta},     {"p_conj", r.p_conj},
            {"q_conj", r.q_conj}};
}

json regime_json(const Regime& regime) {
    return {{"tag", regime_tag_name(regime.tag)}, {"reasons", regime.reasons}};
}

json classify_record(const SystemParams& params) {
    const ReducedParams red = derive_reduced(params);
    const Regime regime = classify_regime(params);
    const AprioriBounds bounds = apriori_bounds(red);
    json eq = json::array();
    for (const Equilibrium& e : equilibria(red)) {
        eq.push_back({{"x1", e.x1}, {"x2", e.x2}});
    }
    return {{"params", params_json(params)},
            {"reduced", reduced_json(red)},
            {"regime", regime_json(regime)},
            {"apriori_bounds", {{"g_bound", bounds.g_bound}, {"f_bound", bounds.f_bound}}},
            {"equilibria", eq}};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    const std::filesystem::path path(out_path);
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory: " + path.parent_path().string());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + out_path);
    f << text;
    if (!f) throw IoError("write failed: " + out_path);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string classify_csv_header() {
    return "n,a,b,p,q,lambda1,lambda2,A,Gamma,delta,p_conj,q_conj,regime,g_bound,f_bound,"
           "eq_x1,eq_x2\n";
}

std::string classify_csv_row(const SystemParams& params) {
    const ReducedParams red = derive_reduced(params);
    const Regime regime = classify_regime(params);
    const AprioriBounds bounds = apriori_bounds(red);
    const auto eq = equilibria(red);
    const double ex1 = eq.size() > 1 ? eq[1].x1 : 0.0;
    const double ex2 = eq.size() > 1 ? eq[1].x2 : 0.0;
    std::string row;
    row += std::to_string(params.n) + ',' + fmt17(params.a) + ',' + fmt17(params.b) + ',' +
           fmt17(params.p) + ',' + fmt17(params.q) + ',';
    row += fmt17(red.lambda1) + ',' + fmt17(red.lambda2) + ',' + fmt17(red.A) + ',' +
           fmt17(red.Gamma) + ',' + fmt17(red.delta) + ',' + fmt17(red.p_conj) + ',' +
           fmt17(red.q_conj) + ',';
    row += csv_escape(regime_tag_name(regime.tag));
    row += ',' + fmt17(bounds.g_bound) + ',' + fmt17(bounds.f_bound);
    row += ',' + fmt17(ex1) + ',' + fmt17(ex2) + '\n';
    return row;
}

struct Verification {
    json report;
};

// The verification block shared by solve and verify.
Verification verify_trajectory(const TrajectoryPair& pair, const SystemParams& params) {
    const ReducedParams& red = pair.red;
    Verification v;

    const SystemResidual sr = system_residual(pair);
    v.report["residual_norms"] = {{"r1", sr.sup1}, {"r2", sr.sup2}};

    const auto e = energy(pair);
    const double emax = interior_sup(pair.grid, e);
    const double scale = energy_term_scale(pair);
    v.report["energy"] = {{"max_abs", emax},
                          {"term_scale", scale},
                          {"ratio", scale > 0.0 ? emax / scale : 0.0}};

    const double floor = 1e-6;
    bool uniform = true;
    double min_product = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < pair.g.size(); ++i) {
        if (std::max(std::fabs(pair.g[i]), std::fabs(pair.f[i])) <= floor) continue;
        const double prod = pair.g[i] * pair.f[i];
        if (!any || prod < min_product) min_product = prod;
        any = true;
        if (prod <= 0.0) uniform = false;
    }
    v.report["sign_report"] = {{"noise_floor", floor},
                               {"uniform_product_sign", any && uniform},
                               {"min_product", min_product}};

    const AprioriBounds bounds = apriori_bounds(red);
    double gsup = 0.0, fsup = 0.0;
    for (std::size_t i = 0; i < pair.g.size(); ++i) {
        gsup = std::max(gsup, std::fabs(pair.g[i]));
        fsup = std::max(fsup, std::fabs(pair.f[i]));
    }
    v.report["bound_check"] = {{"sup_g", gsup},
                               {"sup_f", fsup},
                               {"g_bound", bounds.g_bound},
                               {"f_bound", bounds.f_bound},
                               {"slack_g", bounds.g_bound - gsup},
                               {"slack_f", bounds.f_bound - fsup},
                               {"within", gsup <= bounds.g_bound && fsup <= bounds.f_bound}};

    if (pair.grid.half_length() >= 10.0) {
        const DecayReport d = decay_limits(pair);
        v.report["decay_report"] = {{"lim_u_inf", d.lim_u_inf},
                                    {"lim_u_0", d.lim_u_0},
                                    {"lim_v_inf", d.lim_v_inf},
                                    {"lim_v_0", d.lim_v_0},
                                    {"window", d.window}};
    } else {
        v.report["decay_report"] = nullptr;
    }

    const RadialSolution sol = to_radial(pair, params);
    const PdeResidual pr = pde_residual(sol);
    v.report["pde_residual"] = {{"rel_sup1", pr.rel_sup1}, {"rel_sup2", pr.rel_sup2}};
    return v;
}

int run_classify(const RunConfig& cfg) {
    if (cfg.format == "csv") {
        emit(classify_csv_header() + classify_csv_row(cfg.params), cfg.out);
        return kExitOk;
    }
    json doc = classify_record(cfg.params);
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "classify";
    emit(doc.dump(2) + "\n", cfg.out);
    return kExitOk;
}

int run_rellich(const RunConfig& cfg) {
    const RellichParams rp = make_rellich(cfg.rellich_n, cfg.rellich_theta, cfg.rellich_alpha);
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "rellich";
    doc["n"] = rp.n;
    doc["theta"] = rp.theta;
    doc["alpha"] = rp.alpha;
    doc["Gamma_appx"] = rp.Gamma_appx;
    doc["A_appx"] = rp.A_appx;
    if (rp.theta == 2.0) {
        const Mu2Result m2 = mu2(rp.n, rp.alpha);
        doc["mu2"] = {{"value", m2.value}, {"k", m2.k}};
    } else {
        doc["mu2"] = nullptr;
    }
    if (rp.Gamma_appx >= 0.0 || rp.theta == 2.0) {
        doc["mu_theta"] = mu_theta(rp.n, rp.theta, rp.alpha);
    } else {
        doc["mu_theta"] = nullptr;
        doc["mu_theta_note"] = "no closed form for Gamma < 0 with theta != 2";
    }
    const auto tds = theta_double_star(rp.n, rp.theta);
    if (tds) {
        doc["theta_double_star"] = *tds;
    } else {
        doc["theta_double_star"] = "unbounded";
    }
    if (cfg.format == "csv") {
        std::string text = "n,theta,alpha,Gamma_appx,A_appx,mu2,mu2_k,mu_theta,theta_double_star\n";
        text += std::to_string(rp.n) + ',' + fmt17(rp.theta) + ',' + fmt17(rp.alpha) + ',' +
                fmt17(rp.Gamma_appx) + ',' + fmt17(rp.A_appx) + ',';
        text += doc["mu2"].is_null() ? std::string()
                                     : fmt17(doc["mu2"]["value"].get<double>());
        text += ',';
        text += doc["mu2"].is_null() ? std::string()
                                     : std::to_string(doc["mu2"]["k"].get<int>());
        text += ',';
        text += doc["mu_theta"].is_null() ? std::string()
                                          : fmt17(doc["mu_theta"].get<double>());
        text += ',';
        text += tds ? fmt17(*tds) : std::string("unbounded");
        text += '\n';
        emit(text, cfg.out);
        return kExitOk;
    }
    emit(doc.dump(2) + "\n", cfg.out);
    return kExitOk;
}

int run_solve(const RunConfig& cfg) {
    const ReducedParams red = derive_reduced(cfg.params);
    const Regime regime = classify_regime(cfg.params);
    if (regime.tag == RegimeTag::Degenerate) {
        throw ValidationError(
            "Gamma = 0: degenerate regime, the solver refuses (decaying pairs are "
            "trivial)");
    }
    const LineGrid grid = LineGrid::make(cfg.L, cfg.h);
    const VariationalResult vr = minimize_quotient(red, grid, cfg.solver);

    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "solve";
    doc["params"] = params_json(cfg.params);
    doc["reduced"] = reduced_json(red);
    doc["regime"] = regime_json(regime);
    doc["grid"] = {{"L", grid.half_length()}, {"h", grid.spacing()},
                   {"nodes", grid.size()}};
    doc["options"] = {{"tol", cfg.solver.tol},
                      {"max_iter", cfg.solver.max_iter},
                      {"seed", cfg.solver.seed},
                      {"multistarts", cfg.solver.multistarts}};
    doc["result"] = {{"m", vr.m},
                     {"mu", vr.mu},
                     {"converged", vr.converged},
                     {"iterations", vr.iterations},
                     {"stationarity", vr.stationarity},
                     {"start_index", vr.start_index}};

    Verification v = verify_trajectory(vr.pair, cfg.params);
    doc["verification"] = v.report;

    if (cfg.with_duality) {
        const DualityReport d = duality_check(cfg.params, grid, cfg.solver);
        doc["duality"] = {{"m", d.m},
                          {"m_tilde", d.m_tilde},
                          {"defect", d.defect},
                          {"converged", d.converged}};
    }

    if (!cfg.out.empty()) {
        const std::string traj_path = cfg.out + "_trajectory.csv";
        const std::string radial_path = cfg.out + "_radial.csv";
        const RadialSolution sol = to_radial(vr.pair, cfg.params);
        const PdeResidual pr = pde_residual(sol);
        write_trajectory_csv(traj_path, vr.pair);
        write_radial_csv(radial_path, sol, pr);
        doc["outputs"] = {{"trajectory_csv", traj_path}, {"radial_csv", radial_path}};
        emit(doc.dump(2) + "\n", cfg.out + ".json");
    } else {
        emit(doc.dump(2) + "\n", "");
    }
    return vr.converged ? kExitOk : kExitNonconvergence;
}

int run_verify(const RunConfig& cfg) {
    if (cfg.input.empty()) {
        throw ValidationError("verify needs --in <trajectory.csv>");
    }
    const ReducedParams red = derive_reduced(cfg.params);
    const TrajectoryCsv csv = read_trajectory_csv(cfg.input);
    const TrajectoryPair pair = trajectory_from_csv(csv, red);

    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "verify";
    doc["params"] = params_json(cfg.params);
    doc["reduced"] = reduced_json(red);
    doc["input"] = cfg.input;
    doc["grid"] = {{"L", pair.grid.half_length()}, {"h", pair.grid.spacing()},
                   {"nodes", pair.grid.size()}};
    doc["verification"] = verify_trajectory(pair, cfg.params).report;
    emit(doc.dump(2) + "\n", cfg.out.empty() ? "" : cfg.out + ".json");
    return kExitOk;
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.sweep_n.empty() || cfg.sweep_a.empty() || cfg.sweep_p.empty() ||
        cfg.sweep_q.empty()) {
        throw ValidationError("sweep needs nonempty --n, --a, --p, --q lists");
    }
    auto ns = cfg.sweep_n;
    auto as = cfg.sweep_a;
    auto ps = cfg.sweep_p;
    auto qs = cfg.sweep_q;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::sort(as.begin(), as.end());
    as.erase(std::unique(as.begin(), as.end()), as.end());
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

    json records = json::array();
    std::string csv_text = classify_csv_header();
    for (int n : ns) {
        for (double a : as) {
            for (double p : ps) {
                for (double q : qs) {
                    // b solved exactly from the hyperbola keeps every tuple on it
                    const double b =
                        q * (static_cast<double>(n) - 2.0 - (a + n) / p) - n;
                    SystemParams params{n, a, b, p, q};
                    json rec;
                    rec["tuple"] = {{"n", n}, {"a", a}, {"p", p}, {"q", q}};
                    try {
                        rec.update(classify_record(params));
                        if (cfg.format == "csv") csv_text += classify_csv_row(params);
                    } catch (const ValidationError& err) {
                        rec["params"] = params_json(params);
                        rec["error"] = err.what();
                    }
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    if (cfg.format == "csv") {
        emit(csv_text, cfg.out);
        return kExitOk;
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "sweep";
    doc["records"] = std::move(records);
    emit(doc.dump(2) + "\n", cfg.out);
    return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        if (config.format != "json" && config.format != "csv") {
            throw ValidationError("unrecognized format: " + config.format);
        }
        switch (config.command) {
            case RunConfig::Command::Classify: return run_classify(config);
            case RunConfig::Command::Solve: return run_solve(config);
            case RunConfig::Command::Verify: return run_verify(config);
            case RunConfig::Command::Rellich: return run_rellich(config);
            case RunConfig::Command::Sweep: return run_sweep(config);
        }
        return kExitInvalidParams;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidParams;
    } catch (const NonconvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonconvergence;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoFailure;
    }
}

}  // namespace hle
