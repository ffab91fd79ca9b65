#include <gtest/gtest.h>

#include <cmath>

#include "hml/error.hpp"
#include "hml/grid.hpp"

using namespace hml;

TEST(Grid, NodeCoordinates) {
    const Grid g(8.0, 257);
    EXPECT_DOUBLE_EQ(g.h(), 1.0 / 16.0);
    EXPECT_EQ(g.z(128, 128), Complex(0.0, 0.0));
    EXPECT_EQ(g.z(0, 256), Complex(-8.0, 8.0));
    EXPECT_EQ(g.kind(g.index(0, 5)), NodeKind::OuterBoundary);
    EXPECT_EQ(g.kind(g.index(5, 5)), NodeKind::Interior);
    const std::size_t k = g.index(17, 99);
    EXPECT_EQ(g.col(k), 17);
    EXPECT_EQ(g.row(k), 99);
}

TEST(Grid, ExcisionClassification) {
    const Grid g(4.0, 65, {{Complex(0.0, 0.0), 0.4, {Complex(0.0, 0.0)}}});
    int excised = 0, ring = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = std::abs(g.z(k));
        if (g.excised(k)) {
            ++excised;
            EXPECT_LT(r, 0.4);
        }
        if (g.kind(k) == NodeKind::ExcisionBoundary) {
            ++ring;
            EXPECT_GE(r, 0.4);
            EXPECT_LE(r, 0.4 + std::sqrt(2.0) * g.h());
        }
    }
    EXPECT_GT(excised, 0);
    EXPECT_GT(ring, 0);
    EXPECT_EQ(g.disc_of(Complex(0.1, 0.1)), 0);
    EXPECT_EQ(g.disc_of(Complex(1.0, 0.0)), -1);
}

TEST(Grid, RejectsBadGeometry) {
    EXPECT_THROW(Grid(8.0, 256), GeometryError);
    EXPECT_THROW(Grid(-1.0, 65), GeometryError);
    EXPECT_THROW(Grid(4.0, 65, {{Complex(1.9, 0.0), 0.3, {}}}), GeometryError);
    EXPECT_THROW(Grid(4.0, 65, {{Complex(0.0, 0.0), 0.3, {}}, {Complex(0.5, 0.0), 0.3, {}}}), GeometryError);
}

TEST(Grid, BicubicReproducesQuadratics) {
    const Grid g(2.0, 41);
    std::vector<double> v(g.size());
    auto f = [](Complex z) { return 1.0 + 0.5 * z.real() - 2.0 * z.imag() + z.real() * z.imag() - 0.3 * z.real() * z.real(); };
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.z(k));
    for (Complex z : {Complex(0.013, -0.77), Complex(1.2, 0.31), Complex(-0.5, 0.5)})
        EXPECT_NEAR(interpolate_bicubic(g, v, z), f(z), 1e-12);
    EXPECT_NEAR(interpolate_bicubic(g, v, g.z(7, 9)), v[g.index(7, 9)], 1e-13);
    EXPECT_TRUE(std::isnan(interpolate_bicubic(g, v, Complex(1.98, 0.0))));
}
