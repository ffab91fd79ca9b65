#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hml/cache_io.hpp"
#include "hml/config.hpp"
#include "hml/error.hpp"
#include "hml/matrix_hitchin.hpp"
#include "hml/moduli.hpp"
#include "hml/regnorm.hpp"
#include "hml/scalar_pde.hpp"
#include "runner.hpp"

using namespace hml;
using namespace hml::cli;
using nlohmann::json;

namespace {

const std::set<std::string> kFlags = {"seedless", "check-refine", "floor"};

struct Command {
    CLI::App* app = nullptr;
    RunConfig defaults;
    std::map<std::string, std::string> values;
    std::vector<std::string> probe;
    std::string config_path;
};

RunConfig base_defaults() {
    RunConfig c;
    c.set("out", "hml_out");
    c.set("jobs", "1");
    c.set("cache", "use");
    c.set("seedless", "false");
    return c;
}

RunConfig grid_defaults() {
    RunConfig c = base_defaults();
    c.set("grid-r", "8");
    c.set("grid-n", "257");
    c.set("eps", "0.15");
    c.set("tol", "1e-8");
    c.set("max-iter", "50");
    c.set("matrix-max-iter", "40");
    c.set("treatment", "regularized");
    c.set("annulus-in", "1");
    c.set("annulus-out", "2");
    return c;
}

const std::map<std::string, std::string> kHelp = {
    {"out", "output directory"},
    {"jobs", "worker threads"},
    {"cache", "cache policy: use, off or refresh"},
    {"seedless", "omit wall-clock times so outputs are byte-identical"},
    {"grid-r", "half-width R of the square [-R, R]^2"},
    {"grid-n", "nodes per axis (odd)"},
    {"eps", "excision radius"},
    {"tol", "sup-residual tolerance"},
    {"max-iter", "Newton iteration cap (scalar)"},
    {"matrix-max-iter", "Newton iteration cap (matrix)"},
    {"treatment", "regularized or dirichlet"},
    {"annulus-in", "inner radius of the comparison annulus"},
    {"annulus-out", "outer radius of the comparison annulus"},
    {"k", "number of parts K"},
    {"n", "total N"},
    {"u", "u value(s), comma separated, e.g. 1,2+i,-0.5i"},
    {"omega", "omega"},
    {"gamma", "gamma"},
    {"gammas", "comma separated gamma list"},
    {"u-line", "segment a..b of u values"},
    {"steps", "points on --u-line"},
    {"probe-dir", "direction of the smoothness probe"},
    {"check-refine", "repeat each solve at 2n-1 and report relative changes"},
    {"j-max", "u_j = 2^-j u-dir for j = 0..j-max"},
    {"u-dir", "direction of the u -> 0 sequence"},
    {"floor", "also measure the grid-error floor at u = 0"},
};

Command& add_command(CLI::App& app, std::map<std::string, Command>& cmds, const std::string& name,
                     const std::string& description, RunConfig defaults) {
    Command& c = cmds[name];
    c.app = app.add_subcommand(name, description);
    c.defaults = std::move(defaults);
    c.app->add_option("--config", c.config_path, "flat key = value config file");
    for (const auto& [key, value] : c.defaults.entries()) {
        const auto h = kHelp.find(key);
        const std::string help = h == kHelp.end() ? key : h->second;
        if (key == "probe") continue;
        if (kFlags.count(key))
            c.app->add_flag("--" + key, help);
        else
            c.app->add_option("--" + key, c.values[key], help + " (default " + (value.empty() ? "none" : value) + ")");
    }
    return c;
}

RunConfig resolve(const Command& c) {
    RunConfig cfg = c.defaults;
    if (!c.config_path.empty()) {
        const RunConfig file = RunConfig::load(c.config_path);
        for (const auto& [k, v] : file.entries())
            if (!cfg.has(k)) throw ConfigError("unknown config key '" + k + "' for " + c.app->get_name());
        cfg.merge(file);
    }
    for (const auto& [key, value] : c.defaults.entries()) {
        (void)value;
        if (c.app->count("--" + key) == 0) continue;
        if (kFlags.count(key))
            cfg.set(key, "true");
        else if (key == "probe")
            ;
        else
            cfg.set(key, c.values.at(key));
    }
    if (!c.probe.empty()) cfg.set("probe", c.probe[0] + " " + c.probe[1]);
    return cfg;
}

std::string status_of(const json& item) { return item.value("status", "error"); }

// Exit code for a set of independent items: 0 if any succeeded.
int sweep_exit(const std::vector<json>& items, int failure_code) {
    for (const auto& it : items)
        if (status_of(it) == "ok") return kOk;
    return items.empty() ? kOk : failure_code;
}

int failure_code(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const ConvergenceError&) {
        return kNotConverged;
    } catch (const IoError&) {
        return kIoError;
    } catch (const std::filesystem::filesystem_error&) {
        return kIoError;
    } catch (const ConfigError&) {
        return kConfigError;
    } catch (const GeometryError&) {
        return kConfigError;
    } catch (const DomainError&) {
        return kConfigError;
    } catch (...) {
        return kNotConverged;
    }
}

std::string row(std::initializer_list<std::string> cells) {
    std::string out;
    for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
    return out + "\n";
}

// ---------------------------------------------------------------- partitions

int cmd_partitions(const RunConfig& cfg) {
    Session s = open_session("partitions", cfg);
    const int K = static_cast<int>(cfg.get_int("k"));
    const int N = static_cast<int>(cfg.get_int("n"));
    const auto parts = enumerate_cyclic_partitions(K, N);
    const int dim = K >= 2 ? hitchin_base_dimension(K, N).dimension : 0;
    std::string csv = "partition,weights,base_dim\n";
    for (const auto& p : parts) {
        const std::string w = partition_to_weights(p).str();
        std::cout << p.str() << " -> " << w << "\n";
        csv += row({"\"" + p.str() + "\"", "\"" + w + "\"", std::to_string(dim)});
    }
    std::cout << "classes " << parts.size() << "\nbase_dim " << dim << "\n";
    s.write_output("partitions.csv", csv);
    s.summary = {{"classes", parts.size()}, {"base_dim", dim}};
    s.write_manifest("ok");
    return kOk;
}

// ---------------------------------------------------------------- single scalar solves

int cmd_solve(const RunConfig& cfg, ScalarKind kind) {
    const std::string name = kind == ScalarKind::Small ? "solve-small" : "solve-big0";
    Session s = open_session(name, cfg);
    const Complex param = cfg.get_complex(kind == ScalarKind::Small ? "u" : "omega");
    const ScalarTemplate t = scalar_template(cfg);
    json item;
    try {
        const ScalarSolution sol = obtain_scalar(s, kind, param, t, item);
        s.items.push_back(item);
        std::cout << sol.problem.label() << "\n";
        std::cout << "residual_sup " << format_double(sol.residual_sup) << "\n";
        std::cout << "iterations " << sol.newton_iterations << "\n";
        std::cout << "excision_discs " << sol.problem.grid->excisions().size() << "\n";
        if (sol.decay)
            std::cout << "decay_rate " << format_double(sol.decay->rate) << "\ndecay_prefactor "
                      << format_double(sol.decay->prefactor) << "\n";
        s.write_manifest("ok");
        return kOk;
    } catch (...) {
        s.items.push_back(item);
        s.write_manifest(status_of(item));
        throw;
    }
}

// ---------------------------------------------------------------- decay

double circle_sup(const ScalarSolution& sol, double r) {
    const Grid& g = *sol.problem.grid;
    double sup = 0.0;
    for (int k = 0; k < 720; ++k) {
        const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / 720.0);
        const double v = interpolate_bicubic(g, sol.psi.values, z);
        if (std::isfinite(v)) sup = std::max(sup, std::abs(v));
    }
    return sup;
}

int cmd_decay(const RunConfig& cfg) {
    Session s = open_session("decay", cfg);
    const auto us = parse_complex_list(cfg.get("u"));
    const ScalarTemplate t = scalar_template(cfg);
    std::vector<json> items(us.size());
    std::vector<std::string> rows(us.size());
    std::exception_ptr first;
    parallel_for(us.size(), s.jobs, [&](std::size_t i) {
        try {
            const ScalarSolution sol = obtain_scalar(s, ScalarKind::Small, us[i], t, items[i]);
            const DecayFit fit = decay_fit(sol);
            const double edge = circle_sup(sol, 0.9 * t.R);
            const double tail = tail_bound(fit, t.R, std::abs(us[i]));
            rows[i] = row({csv_double(us[i].real()), csv_double(us[i].imag()), csv_double(fit.rate),
                           csv_double(fit.prefactor), csv_double(edge), csv_double(tail), "ok"});
        } catch (const Error& e) {
            if (!items[i].contains("status")) items[i]["status"] = "error";
            items[i]["message"] = e.what();
            rows[i] = row({csv_double(us[i].real()), csv_double(us[i].imag()), "nan", "nan", "nan", "nan",
                           status_of(items[i])});
        }
    });
    std::string csv = "re_u,im_u,rate,prefactor,psi_sup_at_0.9R,tail_bound,status\n";
    for (const auto& r : rows) csv += r;
    std::cout << csv;
    s.items = items;
    s.write_output("decay.csv", csv);
    const int code = sweep_exit(items, kNotConverged);
    s.write_manifest(code == kOk ? "ok" : "failed");
    return code;
}

// ---------------------------------------------------------------- converge

int cmd_converge(const RunConfig& cfg) {
    Session s = open_session("converge", cfg);
    const int jmax = static_cast<int>(cfg.get_int("j-max"));
    if (jmax < 0 || jmax > 40) throw ConfigError("--j-max must lie in [0, 40]");
    const Complex dir = cfg.get_complex("u-dir");
    const ScalarTemplate t = scalar_template(cfg);
    const Annulus ann = annulus(cfg);

    std::vector<Complex> us;
    for (int j = 0; j <= jmax; ++j) us.push_back(std::ldexp(1.0, -j) * dir);
    us.push_back(0.0);
    const bool floor = cfg.get_bool("floor");
    const std::size_t count = us.size() + (floor ? 1 : 0);
    std::vector<json> items(count);
    std::vector<std::unique_ptr<ScalarSolution>> sols(count);
    ScalarTemplate fine = t;
    fine.n = 2 * t.n - 1;
    parallel_for(count, s.jobs, [&](std::size_t i) {
        try {
            const bool is_floor = i == us.size();
            sols[i] = std::make_unique<ScalarSolution>(
                obtain_scalar(s, ScalarKind::Small, is_floor ? Complex(0.0) : us[i], is_floor ? fine : t, items[i]));
        } catch (const Error& e) {
            if (!items[i].contains("status")) items[i]["status"] = "error";
            items[i]["message"] = e.what();
        }
    });
    s.items = items;
    const std::size_t ref = us.size() - 1;
    if (!sols[ref]) {
        s.write_manifest("failed");
        std::cerr << "reference solve at u = 0 failed\n";
        return kNotConverged;
    }
    std::string csv = "j,re_u,im_u,distance,status\n";
    std::vector<ConvergencePoint> pts;
    bool decreasing = true;
    double prev = INFINITY;
    for (std::size_t j = 0; j < ref; ++j) {
        double d = NAN;
        if (sols[j]) {
            d = annulus_distance(sols[j]->psi, sols[ref]->psi, ann);
            pts.push_back({us[j], d});
            decreasing = decreasing && d < prev;
            prev = d;
        } else {
            decreasing = false;
        }
        csv += row({std::to_string(j), csv_double(us[j].real()), csv_double(us[j].imag()), csv_double(d),
                    status_of(items[j])});
    }
    std::cout << csv;
    s.summary["strictly_decreasing"] = decreasing;
    if (pts.size() >= 2) {
        s.summary["observed_order"] = observed_order(pts);
        std::cout << "observed_order " << format_double(observed_order(pts)) << "\n";
    }
    if (floor && sols[us.size()]) {
        const double f = annulus_distance(inject(sols[us.size()]->psi, sols[ref]->problem.grid), sols[ref]->psi, ann);
        s.summary["grid_floor"] = f;
        std::cout << "grid_floor " << format_double(f) << "\n";
    }
    s.write_output("converge.csv", csv);
    s.write_manifest("ok");
    return kOk;
}

// ---------------------------------------------------------------- mu-sweep

std::vector<Complex> sweep_points(const RunConfig& cfg) {
    const std::string line = cfg.get("u-line");
    const std::string list = cfg.get("u");
    if (!line.empty() && !list.empty()) throw ConfigError("give either --u or --u-line, not both");
    if (!list.empty()) return parse_complex_list(list);
    if (line.empty()) return {};
    const auto dots = line.find("..");
    if (dots == std::string::npos) throw ConfigError("--u-line expects a..b (got '" + line + "')");
    const Complex a = parse_complex(line.substr(0, dots));
    const Complex b = parse_complex(line.substr(dots + 2));
    const long steps = cfg.get_int("steps");
    if (steps < 1) throw ConfigError("--steps must be >= 1");
    std::vector<Complex> out;
    for (long k = 0; k < steps; ++k)
        out.push_back(steps == 1 ? a : a + (b - a) * (static_cast<double>(k) / static_cast<double>(steps - 1)));
    return out;
}

int cmd_mu_sweep(const RunConfig& cfg) {
    Session s = open_session("mu-sweep", cfg);
    const ScalarTemplate t = scalar_template(cfg);
    const std::vector<Complex> us = sweep_points(cfg);
    const bool refine = cfg.get_bool("check-refine");

    bool probe = false;
    Complex u0, dir;
    double delta = 0.0;
    if (!cfg.get("probe").empty()) {
        std::istringstream ps(cfg.get("probe"));
        std::string a, b;
        ps >> a >> b;
        u0 = parse_complex(a);
        delta = parse_complex(b).real();
        if (!(delta > 0.0)) throw ConfigError("--probe step must be positive");
        dir = cfg.get_complex("probe-dir");
        if (std::abs(dir) == 0.0) throw ConfigError("--probe-dir must be nonzero");
        dir /= std::abs(dir);
        probe = true;
    }
    if (us.empty() && !probe) throw ConfigError("mu-sweep needs --u, --u-line or --probe");

    struct Task {
        Complex u;
        bool fine;
    };
    std::vector<Task> tasks;
    for (Complex u : us) {
        tasks.push_back({u, false});
        if (refine) tasks.push_back({u, true});
    }
    const std::size_t probe_start = tasks.size();
    if (probe)
        for (int k = -4; k <= 4; ++k) tasks.push_back({u0 + (0.5 * k * delta) * dir, false});

    ScalarTemplate tf = t;
    tf.n = 2 * t.n - 1;
    std::vector<json> items(tasks.size());
    std::vector<NormResult> mus(tasks.size());
    std::vector<bool> ok(tasks.size(), false);
    parallel_for(tasks.size(), s.jobs, [&](std::size_t i) {
        try {
            const ScalarSolution sol = obtain_scalar(s, ScalarKind::Small, tasks[i].u, tasks[i].fine ? tf : t, items[i]);
            mus[i] = mu_small(sol);
            items[i]["mu"] = mus[i].value;
            ok[i] = true;
        } catch (const Error& e) {
            if (!items[i].contains("status") || status_of(items[i]) == "ok") items[i]["status"] = "error";
            items[i]["message"] = e.what();
        }
    });

    auto mu_row = [&](std::size_t i, const std::string& status, double rel) {
        const NormResult& m = mus[i];
        const bool good = ok[i];
        return row({csv_double(tasks[i].u.real()), csv_double(tasks[i].u.imag()), good ? csv_double(m.value) : "nan",
                    good ? csv_double(m.tail_estimate) : "nan", good ? csv_double(m.excision_estimate) : "nan",
                    good ? csv_double(m.residual_sup) : csv_double(items[i].value("residual_sup", NAN)),
                    std::to_string(tasks[i].fine ? tf.n : t.n), csv_double(t.R), csv_double(t.eps), status,
                    refine ? csv_double(rel) : ""});
    };

    std::string csv = "re_u,im_u,mu,tail_est,excision_est,residual_sup,n,R,eps,status,refine_rel_delta\n";
    std::vector<json> primary;
    for (std::size_t i = 0; i < probe_start; ++i) {
        if (tasks[i].fine) continue;
        double rel = NAN;
        if (refine && ok[i] && ok[i + 1]) rel = std::abs(mus[i + 1].value - mus[i].value) / std::abs(mus[i + 1].value);
        csv += mu_row(i, status_of(items[i]), rel);
        primary.push_back(items[i]);
    }
    if (probe) {
        bool all = true;
        for (std::size_t i = probe_start; i < tasks.size(); ++i) {
            csv += mu_row(i, ok[i] ? "probe" : status_of(items[i]), NAN);
            all = all && ok[i];
            primary.push_back(items[i]);
        }
        std::string pcsv = "re_u0,im_u0,re_dir,im_dir,delta,d1_2delta,d1_delta,d1_half_delta,d2_delta,richardson\n";
        if (all) {
            double at[9];
            for (int k = 0; k < 9; ++k) at[k] = mus[probe_start + k].value;
            const double coarse[5] = {at[0], at[2], at[4], at[6], at[8]};
            const double finer[5] = {at[2], at[3], at[4], at[5], at[6]};
            const SmoothnessProbe p = smoothness_probe(u0, delta, dir, coarse);
            const SmoothnessProbe q = smoothness_probe(u0, 0.5 * delta, dir, finer);
            const double ratio = richardson_ratio(p, q);
            pcsv += row({csv_double(u0.real()), csv_double(u0.imag()), csv_double(dir.real()), csv_double(dir.imag()),
                         csv_double(delta), csv_double(p.first_2delta), csv_double(p.first_delta),
                         csv_double(q.first_delta), csv_double(p.second_delta), csv_double(ratio)});
            s.summary["richardson_ratio"] = ratio;
            std::cout << "richardson_ratio " << format_double(ratio) << "\n";
        }
        s.write_output("probe.csv", pcsv);
    }
    std::cout << csv;
    s.items = items;
    s.write_output("mu_sweep.csv", csv);
    const int code = sweep_exit(primary, kNotConverged);
    s.write_manifest(code == kOk ? "ok" : "failed");
    return code;
}

// ---------------------------------------------------------------- big / gamma-sweep

int cmd_gamma(const RunConfig& cfg, const std::string& name, const std::vector<Complex>& gammas) {
    Session s = open_session(name, cfg);
    const ScalarTemplate t = scalar_template(cfg);
    const MatrixTemplate mt = matrix_template(cfg);
    const Annulus ann = annulus(cfg);
    const Complex omega = cfg.get_complex("omega");

    json scalar_item, ref_item;
    std::unique_ptr<ScalarSolution> scalar0;
    std::unique_ptr<MatrixSolution> ref;
    try {
        scalar0 = std::make_unique<ScalarSolution>(obtain_scalar(s, ScalarKind::BigGamma0, omega, t, scalar_item));
        const GridPtr grid = build_matrix_problem(0.0, omega, mt.R, mt.n, mt.tol, mt.max_iterations).grid;
        ref = std::make_unique<MatrixSolution>(
            obtain_matrix(s, 0.0, omega, mt, embed_scalar(*scalar0, grid), "embedded", ref_item));
    } catch (...) {
        s.items = json::array({scalar_item, ref_item});
        s.write_manifest("failed");
        throw;
    }
    const double mu0 = mu_big(*ref, *scalar0).value;

    std::vector<json> items(gammas.size());
    std::vector<std::string> rows(gammas.size());
    parallel_for(gammas.size(), s.jobs, [&](std::size_t i) {
        const Complex gm = gammas[i];
        try {
            const MatrixSolution sol = obtain_matrix(s, gm, omega, mt, ref->h, "warm-gamma0", items[i]);
            const NormResult mu = mu_big(sol, *scalar0);
            const double dist = metric_distance(sol.h, ref->h, ann);
            const double off = max_offdiagonal(sol.h);
            double f1diff = 0.0;
            const Grid& g = *sol.problem.grid;
            for (std::size_t k = 0; k < g.size(); ++k)
                if (ann.contains(g.z(k))) f1diff = std::max(f1diff, std::abs(sol.h.f1(k) - std::exp(scalar0->log_f1[k])));
            items[i]["mu"] = mu.value;
            items[i]["distance"] = dist;
            items[i]["offdiag_sup"] = off;
            items[i]["f1_scalar_diff"] = f1diff;
            rows[i] = row({csv_double(gm.real()), csv_double(gm.imag()), csv_double(omega.real()),
                           csv_double(omega.imag()), csv_double(mu.value), csv_double(std::abs(mu.value - mu0)),
                           csv_double(mu.tail_estimate), csv_double(mu.excision_estimate),
                           csv_double(sol.residual_sup), csv_double(dist), csv_double(off), csv_double(f1diff),
                           std::to_string(mt.n), csv_double(mt.R), csv_double(t.eps), "ok"});
        } catch (const Error& e) {
            if (!items[i].contains("status") || status_of(items[i]) == "ok") items[i]["status"] = "error";
            items[i]["message"] = e.what();
            rows[i] = row({csv_double(gm.real()), csv_double(gm.imag()), csv_double(omega.real()),
                           csv_double(omega.imag()), "nan", "nan", "nan", "nan",
                           csv_double(items[i].value("residual_sup", NAN)), "nan", "nan", "nan",
                           std::to_string(mt.n), csv_double(mt.R), csv_double(t.eps), status_of(items[i])});
        }
    });
    std::string csv =
        "re_gamma,im_gamma,re_omega,im_omega,mu,mu_minus_mu0,tail_est,excision_est,residual_sup,distance,"
        "offdiag_sup,f1_scalar_diff,n,R,eps,status\n";
    for (const auto& r : rows) csv += r;
    std::cout << csv;
    s.items = json::array({scalar_item, ref_item});
    for (const auto& it : items) s.items.push_back(it);
    s.summary["mu_gamma0"] = mu0;
    s.summary["mu_gamma0_scalar_path"] = mu_big_scalar_path(*scalar0).value;
    s.write_output(name == "big" ? "big.csv" : "gamma_sweep.csv", csv);
    const int code = sweep_exit(items, kNotConverged);
    s.write_manifest(code == kOk ? "ok" : "failed");
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical harmonic metrics and regulated norms on a (2,3) moduli family"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HML_VERSION);
    std::map<std::string, Command> cmds;

    RunConfig d = base_defaults();
    d.set("k", "2");
    d.set("n", "3");
    add_command(app, cmds, "partitions", "cyclic partitions, weights and Hitchin base dimension", d);

    d = grid_defaults();
    d.set("u", "1");
    add_command(app, cmds, "solve-small", "solve the small-stratum scalar equation", d);

    d = grid_defaults();
    d.set("omega", "1");
    add_command(app, cmds, "solve-big0", "solve the big-stratum scalar equation at gamma = 0", d);

    d = grid_defaults();
    d.set("u", "1");
    add_command(app, cmds, "decay", "decay fit and truncation checks", d);

    d = grid_defaults();
    d.set("j-max", "6");
    d.set("u-dir", "1");
    d.set("floor", "false");
    add_command(app, cmds, "converge", "u -> 0 convergence study", d);

    d = grid_defaults();
    d.set("u", "");
    d.set("u-line", "");
    d.set("steps", "9");
    d.set("probe", "");
    d.set("probe-dir", "1");
    d.set("check-refine", "false");
    Command& mu = add_command(app, cmds, "mu-sweep", "regulated norm over a set of u", d);
    mu.app->add_option("--probe", mu.probe, "smoothness probe: u0 delta")->expected(2);

    d = grid_defaults();
    d.set("gamma", "0");
    d.set("omega", "1");
    add_command(app, cmds, "big", "matrix solve on the big stratum", d);

    d = grid_defaults();
    d.set("omega", "1");
    d.set("gammas", "1,0.5,0.25,0.125");
    add_command(app, cmds, "gamma-sweep", "gamma -> 0 study on the big stratum", d);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? kOk : kConfigError;
    }

    try {
        for (auto& [name, c] : cmds) {
            if (!c.app->parsed()) continue;
            const RunConfig cfg = resolve(c);
            if (name == "partitions") return cmd_partitions(cfg);
            if (name == "solve-small") return cmd_solve(cfg, ScalarKind::Small);
            if (name == "solve-big0") return cmd_solve(cfg, ScalarKind::BigGamma0);
            if (name == "decay") return cmd_decay(cfg);
            if (name == "converge") return cmd_converge(cfg);
            if (name == "mu-sweep") return cmd_mu_sweep(cfg);
            if (name == "big") return cmd_gamma(cfg, "big", {cfg.get_complex("gamma")});
            if (name == "gamma-sweep") return cmd_gamma(cfg, "gamma-sweep", parse_complex_list(cfg.get("gammas")));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure_code(std::current_exception());
    }
    return kConfigError;
}
