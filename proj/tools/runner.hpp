#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hml/config.hpp"
#include "hml/matrix_hitchin.hpp"
#include "hml/scalar_pde.hpp"

namespace hml::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNotConverged = 3, kIoError = 4 };

enum class CachePolicy { Use, Off, Refresh };

struct Session {
    std::string command;
    RunConfig config;
    std::filesystem::path out;
    std::filesystem::path cache_dir;
    CachePolicy cache = CachePolicy::Use;
    bool seedless = false;
    int jobs = 1;

    nlohmann::json items = nlohmann::json::array();
    std::map<std::string, std::string> outputs;
    nlohmann::json summary = nlohmann::json::object();

    void write_output(const std::string& name, const std::string& bytes);
    // <command>.manifest.json in the output directory.
    void write_manifest(const std::string& status) const;
};

Session open_session(const std::string& command, const RunConfig& config);

ScalarTemplate scalar_template(const RunConfig& config);
MatrixTemplate matrix_template(const RunConfig& config);
Annulus annulus(const RunConfig& config);

// Cached solve; fills item with status, residual, iterations and cache digest.
// Throws the solver's error after recording it in item.
ScalarSolution obtain_scalar(const Session& s, ScalarKind kind, Complex param, const ScalarTemplate& t,
                             nlohmann::json& item);
// Matrix solve warm-started from `initial`; the returned metric always comes
// from the cache encoding so that hits and misses agree bitwise.
MatrixSolution obtain_matrix(const Session& s, Complex gamma, Complex omega, const MatrixTemplate& t,
                             const std::optional<MetricField>& initial, const std::string& warm_tag,
                             nlohmann::json& item);

// Runs f(0..count-1) on at most `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& f);

std::string csv_double(double x);

}  // namespace hml::cli
