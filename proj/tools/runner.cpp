#include "runner.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "hml/cache_io.hpp"
#include "hml/error.hpp"

namespace hml::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

const char* treatment_tag(BoundaryTreatment t) {
    return t == BoundaryTreatment::Regularized ? "regularized" : "dirichlet";
}

void fill_scalar_item(const Session& s, const ScalarSolution& sol, json& item) {
    item["status"] = "ok";
    item["residual_sup"] = sol.residual_sup;
    if (sol.decay) item["decay"] = {{"rate", sol.decay->rate}, {"prefactor", sol.decay->prefactor}};
    json discs = json::array();
    for (const auto& e : sol.problem.grid->excisions()) {
        json roots = json::array();
        for (Complex r : e.roots) roots.push_back(complex_json(r));
        discs.push_back({{"center", complex_json(e.center)}, {"radius", e.radius}, {"roots", roots}});
    }
    item["excisions"] = discs;
    if (s.seedless) item.erase("wall_seconds");
}

json read_sidecar(const fs::path& p) {
    try {
        return json::parse(read_file(p));
    } catch (const std::exception&) {
        return json::object();
    }
}

}  // namespace

void Session::write_output(const std::string& name, const std::string& bytes) {
    write_file_atomic(out / name, bytes);
    outputs[name] = sha256_hex(bytes);
}

void Session::write_manifest(const std::string& status) const {
    json m;
    m["tool"] = "hml";
    m["version"] = HML_VERSION;
    m["command"] = command;
    m["config"] = config.entries();
    m["config_digest"] = config.digest();
    m["status"] = status;
    m["items"] = items;
    m["outputs"] = outputs;
    if (!summary.empty()) m["summary"] = summary;
    write_file_atomic(out / (command + ".manifest.json"), m.dump(2) + "\n");
}

Session open_session(const std::string& command, const RunConfig& config) {
    Session s;
    s.command = command;
    s.config = config;
    s.out = config.get("out");
    s.seedless = config.get_bool("seedless");
    s.jobs = static_cast<int>(config.get_int("jobs"));
    if (s.jobs < 1) throw ConfigError("--jobs must be >= 1");
    const std::string policy = config.get("cache");
    if (policy == "use")
        s.cache = CachePolicy::Use;
    else if (policy == "off")
        s.cache = CachePolicy::Off;
    else if (policy == "refresh")
        s.cache = CachePolicy::Refresh;
    else
        throw ConfigError("--cache must be use, off or refresh (got '" + policy + "')");
    const char* env = std::getenv("HML_CACHE_DIR");
    s.cache_dir = env && *env ? fs::path(env) : s.out / "cache";
    std::error_code ec;
    fs::create_directories(s.out, ec);
    if (ec) throw IoError("cannot create output directory " + s.out.string() + ": " + ec.message());
    return s;
}

ScalarTemplate scalar_template(const RunConfig& c) {
    ScalarTemplate t;
    t.R = c.get_double("grid-r");
    t.n = static_cast<int>(c.get_int("grid-n"));
    t.eps = c.get_double("eps");
    t.tol = c.get_double("tol");
    t.max_iterations = static_cast<int>(c.get_int("max-iter"));
    const std::string tr = c.get("treatment");
    if (tr == "regularized")
        t.treatment = BoundaryTreatment::Regularized;
    else if (tr == "dirichlet")
        t.treatment = BoundaryTreatment::AsymptoticDirichlet;
    else
        throw ConfigError("--treatment must be regularized or dirichlet (got '" + tr + "')");
    return t;
}

MatrixTemplate matrix_template(const RunConfig& c) {
    MatrixTemplate t;
    t.R = c.get_double("grid-r");
    t.n = static_cast<int>(c.get_int("grid-n"));
    t.tol = c.get_double("tol");
    t.max_iterations = static_cast<int>(c.get_int("matrix-max-iter"));
    return t;
}

Annulus annulus(const RunConfig& c) {
    Annulus a{c.get_double("annulus-in"), c.get_double("annulus-out")};
    if (!(a.r_in >= 0.0 && a.r_out > a.r_in)) throw ConfigError("annulus radii must satisfy 0 <= in < out");
    return a;
}

ScalarSolution obtain_scalar(const Session& s, ScalarKind kind, Complex param, const ScalarTemplate& t, json& item) {
    const std::string tag = std::string(kind == ScalarKind::Small ? "small" : "big0") + ":" + treatment_tag(t.treatment);
    const std::string key = cache_key(tag, {param.real(), param.imag()}, t.R, t.n, t.eps, t.tol);
    const fs::path file = s.cache_dir / (key + ".hml1");
    const fs::path side = s.cache_dir / (key + ".json");
    item["kind"] = tag;
    item["param"] = format_complex(param);
    item["cache_file"] = file.filename().string();

    if (s.cache == CachePolicy::Use && fs::exists(file)) {
        try {
            const std::string bytes = read_file(file);
            ScalarSolution sol = restore_scalar(decode_scalar_cache(bytes), t.max_iterations);
            const json meta = read_sidecar(side);
            sol.newton_iterations = meta.value("iterations", 0);
            sol.halvings = meta.value("halvings", 0);
            sol.wall_seconds = meta.value("wall_seconds", 0.0);
            item["iterations"] = sol.newton_iterations;
            item["wall_seconds"] = sol.wall_seconds;
            item["cache_sha256"] = sha256_hex(bytes);
            std::cerr << "cache hit " << file.filename().string() << "\n";
            fill_scalar_item(s, sol, item);
            return sol;
        } catch (const IoError& e) {
            std::cerr << "ignoring unreadable cache " << file.string() << ": " << e.what() << "\n";
        }
    }

    ScalarSolution sol;
    try {
        sol = kind == ScalarKind::Small ? solve_small(param, t) : solve_big_gamma0(param, t);
    } catch (const ConvergenceError& e) {
        item["status"] = "not_converged";
        item["residual_sup"] = e.final_residual();
        item["iterations"] = e.iterations();
        item["message"] = e.what();
        throw;
    } catch (const Error& e) {
        item["status"] = "error";
        item["message"] = e.what();
        throw;
    }
    const std::string bytes = encode_scalar_cache(sol);
    item["iterations"] = sol.newton_iterations;
    item["wall_seconds"] = sol.wall_seconds;
    item["cache_sha256"] = sha256_hex(bytes);
    if (s.cache != CachePolicy::Off) {
        write_file_atomic(file, bytes);
        json meta = {{"format", "HML1"},
                     {"kind", tag},
                     {"param", complex_json(param)},
                     {"R", t.R},
                     {"n", t.n},
                     {"eps", t.eps},
                     {"tol", t.tol},
                     {"residual_sup", sol.residual_sup},
                     {"iterations", sol.newton_iterations},
                     {"halvings", sol.halvings},
                     {"version", HML_VERSION}};
        if (!s.seedless) meta["wall_seconds"] = sol.wall_seconds;
        write_file_atomic(side, meta.dump(2) + "\n");
    }
    fill_scalar_item(s, sol, item);
    return sol;
}

MatrixSolution obtain_matrix(const Session& s, Complex gamma, Complex omega, const MatrixTemplate& t,
                             const std::optional<MetricField>& initial, const std::string& warm_tag, json& item) {
    const std::string tag = "matrix:" + warm_tag;
    const std::string key =
        cache_key(tag, {gamma.real(), gamma.imag(), omega.real(), omega.imag()}, t.R, t.n, 0.0, t.tol);
    const fs::path file = s.cache_dir / (key + ".hml2");
    const fs::path side = s.cache_dir / (key + ".json");
    item["kind"] = tag;
    item["gamma"] = format_complex(gamma);
    item["omega"] = format_complex(omega);
    item["cache_file"] = file.filename().string();

    auto finish = [&](MatrixSolution& sol, const std::string& bytes) {
        item["status"] = "ok";
        item["residual_sup"] = sol.residual_sup;
        item["iterations"] = sol.iterations;
        item["flow_steps"] = sol.flow_steps;
        item["det_error"] = sol.det_error;
        item["cache_sha256"] = sha256_hex(bytes);
        if (!s.seedless) item["wall_seconds"] = sol.wall_seconds;
    };

    if (s.cache == CachePolicy::Use && fs::exists(file)) {
        try {
            const std::string bytes = read_file(file);
            MatrixSolution sol = restore_matrix(decode_matrix_cache(bytes), t.max_iterations);
            const json meta = read_sidecar(side);
            sol.iterations = meta.value("iterations", 0);
            sol.flow_steps = meta.value("flow_steps", 0);
            sol.wall_seconds = meta.value("wall_seconds", 0.0);
            sol.det_error = std::max(sol.det_error, meta.value("det_error", 0.0));
            std::cerr << "cache hit " << file.filename().string() << "\n";
            finish(sol, bytes);
            return sol;
        } catch (const IoError& e) {
            std::cerr << "ignoring unreadable cache " << file.string() << ": " << e.what() << "\n";
        }
    }

    MatrixSolution fresh;
    try {
        fresh = flow_solve(build_matrix_problem(gamma, omega, t.R, t.n, t.tol, t.max_iterations), initial);
    } catch (const ConvergenceError& e) {
        item["status"] = "not_converged";
        item["residual_sup"] = e.final_residual();
        item["iterations"] = e.iterations();
        item["message"] = e.what();
        throw;
    } catch (const Error& e) {
        item["status"] = "error";
        item["message"] = e.what();
        throw;
    }
    const std::string bytes = encode_matrix_cache(fresh);
    MatrixSolution sol = restore_matrix(decode_matrix_cache(bytes), t.max_iterations);
    sol.iterations = fresh.iterations;
    sol.flow_steps = fresh.flow_steps;
    sol.wall_seconds = fresh.wall_seconds;
    sol.det_error = std::max(sol.det_error, fresh.det_error);
    if (s.cache != CachePolicy::Off) {
        write_file_atomic(file, bytes);
        json meta = {{"format", "HML2"},
                     {"kind", tag},
                     {"gamma", complex_json(gamma)},
                     {"omega", complex_json(omega)},
                     {"R", t.R},
                     {"n", t.n},
                     {"tol", t.tol},
                     {"residual_sup", sol.residual_sup},
                     {"iterations", sol.iterations},
                     {"flow_steps", sol.flow_steps},
                     {"det_error", sol.det_error},
                     {"version", HML_VERSION}};
        if (!s.seedless) meta["wall_seconds"] = sol.wall_seconds;
        write_file_atomic(side, meta.dump(2) + "\n");
    }
    finish(sol, bytes);
    return sol;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& f) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::string csv_double(double x) { return std::isfinite(x) ? format_double(x) : std::string(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")); }

}  // namespace hml::cli
