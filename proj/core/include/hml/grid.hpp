#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace hml {

using Complex = std::complex<double>;

enum class NodeKind : std::uint8_t { Interior, OuterBoundary, ExcisionBoundary, Excised };

struct Excision {
    Complex center;
    double radius = 0.0;
    // Roots of q covered by this disc (several after merging).
    std::vector<Complex> roots;
};

// Square [-R, R]^2 sampled by n x n nodes, node (i, j) at (-R + i h) + i (-R + j h).
class Grid {
public:
    Grid(double R, int n, std::vector<Excision> excisions = {});

    double R() const { return R_; }
    int n() const { return n_; }
    double h() const { return h_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    int col(std::size_t k) const { return static_cast<int>(k % n_); }
    int row(std::size_t k) const { return static_cast<int>(k / n_); }
    double x(int i) const { return -R_ + i * h_; }
    Complex z(int i, int j) const { return {x(i), x(j)}; }
    Complex z(std::size_t k) const { return z(col(k), row(k)); }

    NodeKind kind(std::size_t k) const { return kinds_[k]; }
    bool excised(std::size_t k) const { return kinds_[k] == NodeKind::Excised; }
    const std::vector<Excision>& excisions() const { return excisions_; }

    // Index of the disc containing z, or -1.
    int disc_of(Complex z) const;

private:
    double R_;
    int n_;
    double h_;
    std::vector<Excision> excisions_;
    std::vector<NodeKind> kinds_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One value per node; NaN marks excised nodes.
struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    double operator[](std::size_t k) const { return values[k]; }
    double at(int i, int j) const { return values[grid->index(i, j)]; }
};

// Keys cubic convolution on the 4x4 stencil around z; NaN if the stencil leaves
// the grid or touches a non-finite value.
double interpolate_bicubic(const Grid& grid, const std::vector<double>& values, Complex z);

}  // namespace hml
