#include "hml/grid.hpp"

#include <cmath>

#include "hml/error.hpp"

namespace hml {

Grid::Grid(double R, int n, std::vector<Excision> excisions)
    : R_(R), n_(n), h_(0.0), excisions_(std::move(excisions)) {
    if (!(R > 0.0) || !std::isfinite(R)) throw GeometryError("grid half-width must be positive", R);
    if (n < 5 || n % 2 == 0) throw GeometryError("nodes per axis must be odd and >= 5", n);
    h_ = 2.0 * R / (n - 1);
    for (std::size_t a = 0; a < excisions_.size(); ++a) {
        const auto& e = excisions_[a];
        if (!(e.radius > 0.0)) throw GeometryError("excision radius must be positive", e.radius);
        const double reach = std::abs(e.center) + e.radius;
        if (reach >= 0.5 * R) throw GeometryError("excision disc leaves |z| < R/2, reach", reach);
        for (std::size_t b = 0; b < a; ++b) {
            const auto& f = excisions_[b];
            const double gap = std::abs(e.center - f.center) - e.radius - f.radius;
            if (gap <= 0.0) throw GeometryError("excision discs overlap, gap", gap);
        }
    }

    kinds_.assign(size(), NodeKind::Interior);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            const std::size_t k = index(i, j);
            if (i == 0 || j == 0 || i == n_ - 1 || j == n_ - 1) {
                kinds_[k] = NodeKind::OuterBoundary;
            } else if (disc_of(z(i, j)) >= 0) {
                kinds_[k] = NodeKind::Excised;
            }
        }
    }
    for (int j = 1; j < n_ - 1; ++j) {
        for (int i = 1; i < n_ - 1; ++i) {
            const std::size_t k = index(i, j);
            if (kinds_[k] != NodeKind::Interior) continue;
            if (excised(index(i - 1, j)) || excised(index(i + 1, j)) || excised(index(i, j - 1)) ||
                excised(index(i, j + 1))) {
                kinds_[k] = NodeKind::ExcisionBoundary;
            }
        }
    }
}

int Grid::disc_of(Complex z) const {
    for (std::size_t a = 0; a < excisions_.size(); ++a) {
        if (std::abs(z - excisions_[a].center) < excisions_[a].radius) return static_cast<int>(a);
    }
    return -1;
}

namespace {

// Keys kernel, a = -1/2.
void keys_weights(double t, double w[4]) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = -0.5 * t3 + t2 - 0.5 * t;
    w[1] = 1.5 * t3 - 2.5 * t2 + 1.0;
    w[2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
    w[3] = 0.5 * t3 - 0.5 * t2;
}

}  // namespace

double interpolate_bicubic(const Grid& grid, const std::vector<double>& values, Complex z) {
    const double h = grid.h();
    const double fx = (z.real() + grid.R()) / h;
    const double fy = (z.imag() + grid.R()) / h;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    if (i0 - 1 < 0 || j0 - 1 < 0 || i0 + 2 >= grid.n() || j0 + 2 >= grid.n()) return kNaN;
    double wx[4];
    double wy[4];
    keys_weights(fx - i0, wx);
    keys_weights(fy - j0, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        double row = 0.0;
        for (int a = 0; a < 4; ++a) {
            const double v = values[grid.index(i0 - 1 + a, j0 - 1 + b)];
            if (!std::isfinite(v)) return kNaN;
            row += wx[a] * v;
        }
        acc += wy[b] * row;
    }
    return acc;
}

}  // namespace hml
