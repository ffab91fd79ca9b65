#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "hml/matrix_hitchin.hpp"
#include "hml/scalar_pde.hpp"

namespace hml {

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const std::filesystem::path& path);

// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Marks removed nodes in HML1 node data.
inline constexpr double kExcisedSentinel = -1.0e300;

struct ScalarCache {
    ScalarKind kind = ScalarKind::Small;
    BoundaryTreatment treatment = BoundaryTreatment::Regularized;
    Complex param{};
    double R = 0.0;
    int n = 0;
    double eps = 0.0;
    double tol = 0.0;
    // Solver state, row-major.
    std::vector<double> values;
};

// "HML1", u32 tag, param (2 x f64), R, n (as f64), eps, tol, then n^2 f64 node values.
std::string encode_scalar_cache(const ScalarSolution& solution);
ScalarCache decode_scalar_cache(const std::string& bytes);
void write_scalar_cache(const std::filesystem::path& path, const ScalarSolution& solution);
ScalarCache read_scalar_cache(const std::filesystem::path& path);
// Rebuilds the problem and all derived fields from the stored state.
ScalarSolution restore_scalar(const ScalarCache& cache, int max_iterations = 50);

struct MatrixCache {
    Complex gamma{};
    Complex omega{};
    double R = 0.0;
    int n = 0;
    double tol = 0.0;
    // (f1, f2, Re g, Im g) per node, row-major.
    std::vector<std::array<double, 4>> nodes;
};

// "HML2", gamma (2 x f64), omega (2 x f64), R, n (as f64), tol, then 4 n^2 f64.
std::string encode_matrix_cache(const MatrixSolution& solution);
MatrixCache decode_matrix_cache(const std::string& bytes);
void write_matrix_cache(const std::filesystem::path& path, const MatrixSolution& solution);
MatrixCache read_matrix_cache(const std::filesystem::path& path);
// Metric rebuilt from the stored entries; residual recomputed, no iterations run.
MatrixSolution restore_matrix(const MatrixCache& cache, int max_iterations = 40);

}  // namespace hml
