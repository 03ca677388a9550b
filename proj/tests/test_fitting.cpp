#include <doctest.h>

#include <random>

#include "cogs/fitting.hpp"

using namespace cogs;

namespace {

std::vector<Point2> sampled_sine(double amp, double period, double phase,
                                 double offset, double u0, double u1, int n) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        double u = u0 + (u1 - u0) * i / (n - 1);
        pts.push_back({u, amp * std::sin(2 * kPi * u / period + phase) + offset});
    }
    return pts;
}

// Independent check of a sine fit: dense period scan where, for each
// candidate period, amplitude/phase/offset follow from an exact linear
// least-squares solve of v = A sin(wu) + B cos(wu) + C.
double oracle_sine_sse(const std::vector<Point2>& pts, double period) {
    double w = 2 * kPi / period;
    double m[3][3] = {};
    double rhs[3] = {};
    for (const auto& p : pts) {
        double b[3] = {std::sin(w * p[0]), std::cos(w * p[0]), 1.0};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += b[i] * p[1];
            for (int j = 0; j < 3; ++j) m[i][j] += b[i] * b[j];
        }
    }
    // Gaussian elimination on the 3x3 normal equations.
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == c || std::abs(m[c][c]) < 1e-15) continue;
            double f = m[r][c] / m[c][c];
            for (int k = 0; k < 3; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    double sol[3];
    for (int i = 0; i < 3; ++i) sol[i] = std::abs(m[i][i]) < 1e-15 ? 0.0 : rhs[i] / m[i][i];
    double sse = 0.0;
    for (const auto& p : pts) {
        double pred = sol[0] * std::sin(w * p[0]) + sol[1] * std::cos(w * p[0]) + sol[2];
        sse += (p[1] - pred) * (p[1] - pred);
    }
    return sse;
}

}  // namespace

TEST_CASE("fit_circle_2d recovers an exact circle") {
    std::vector<Point2> pts;
    for (int i = 0; i < 12; ++i) {
        double a = 2 * kPi * i / 12 + 0.3;
        pts.push_back({0.4 + 0.15 * std::cos(a), -0.2 + 0.15 * std::sin(a)});
    }
    CircleFit c = fit_circle_2d(pts);
    CHECK(c.center[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(c.center[1] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(c.radius == doctest::Approx(0.15).epsilon(1e-12));
    // A partial arc still fits the same circle.
    pts.resize(5);
    c = fit_circle_2d(pts);
    CHECK(c.radius == doctest::Approx(0.15).epsilon(1e-9));
}

TEST_CASE("fit_line recovers direction, orientation, and length") {
    std::vector<Vec3> pts;
    Vec3 d = normalized({1, 2, -0.5});
    for (int i = 0; i < 20; ++i) pts.push_back(Vec3{0.1, 0.2, 0.3} + d * (0.02 * i));
    LineFit f = fit_line(pts);
    CHECK(distance(f.direction, d) < 1e-9);
    CHECK(f.length == doctest::Approx(0.02 * 19).epsilon(1e-9));
    // Reversing the samples flips the reported orientation.
    std::reverse(pts.begin(), pts.end());
    f = fit_line(pts);
    CHECK(distance(f.direction, -d) < 1e-9);
}

TEST_CASE("fit_sine recovers exact parameters within tight tolerance") {
    auto pts = sampled_sine(0.2, 1.5, 0.0, 0.0, 0.0, 0.3, 64);
    SineFit f = fit_sine(pts);
    CHECK(std::abs(std::abs(f.amplitude) - 0.2) < 1e-6);
    CHECK(std::abs(f.period - 1.5) < 1e-6);
    CHECK(f.residual < 1e-12);

    // Fits beat (or match) every candidate in an independent period scan.
    for (double period = 0.1; period <= 6.0; period += 0.05)
        CHECK(f.residual <= oracle_sine_sse(pts, period) + 1e-12);
}

TEST_CASE("fit_sine handles degenerate inputs") {
    std::vector<Point2> flat = {{0, 1}, {0.1, 1}, {0.2, 1}, {0.3, 1}};
    SineFit f = fit_sine(flat);
    CHECK(f.amplitude == 0.0);
    CHECK(f.offset == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_sine({{0, 0}, {1, 1}}), DegenerateInput);
}

TEST_CASE("resample_polyline spaces points uniformly along arc length") {
    std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    auto r = resample_polyline(pts, 5);
    REQUIRE(r.size() == 5);
    CHECK(r.front() == pts.front());
    CHECK(r.back() == pts.back());
    // Total length 2, so samples sit every 0.5 along the L shape.
    CHECK(distance(r[1], {0.5, 0, 0}) < 1e-12);
    CHECK(distance(r[2], {1.0, 0, 0}) < 1e-12);
    CHECK(distance(r[3], {1.0, 0.5, 0}) < 1e-12);

    // Degenerate inputs collapse to copies of the only point.
    auto single = resample_polyline({{2, 3, 4}}, 4);
    CHECK(single.size() == 4);
    CHECK(single[3] == Vec3{2, 3, 4});
}

TEST_CASE("dtw_similarity scores identity at 100 and far curves near 0") {
    std::vector<Vec3> a;
    for (int i = 0; i < 40; ++i)
        a.push_back({i * 0.01, 0.2 * std::sin(2 * kPi * i * 0.01 / 0.5), 0});
    CHECK(dtw_similarity(a, a) == doctest::Approx(100.0));

    // A denser resampled copy of the same curve still scores essentially 100
    // (resampling a piecewise-linear curve shifts points slightly).
    auto dense = resample_polyline(a, 200);
    CHECK(dtw_similarity(dense, a) > 99.9);

    // A copy translated by half the reference diagonal scores about 50.
    double diag = distance({0, -0.2, 0}, {0.39, 0.2, 0});
    std::vector<Vec3> shifted = a;
    for (auto& p : shifted) p.z += diag / 2;
    CHECK(dtw_similarity(shifted, a) == doctest::Approx(50.0).epsilon(0.02));

    // Far away: clamped at 0, never negative.
    std::vector<Vec3> far = a;
    for (auto& p : far) p.z += 100;
    CHECK(dtw_similarity(far, a) == 0.0);
}

TEST_CASE("dtw_similarity normalizes by the second argument") {
    std::vector<Vec3> small = {{0, 0, 0}, {0.1, 0, 0}};
    std::vector<Vec3> large = {{0, 0, 0}, {10, 0, 0}};
    // Mismatch hurts more when judged against the small curve's scale.
    CHECK(dtw_similarity(large, small) < dtw_similarity(small, large));
}

TEST_CASE("fit_plane and projection are mutually consistent") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec3 n = normalized({0.3, -0.5, 1.0});
    Vec3 e1 = normalized(cross(n, {1, 0, 0}));
    Vec3 e2 = cross(n, e1);
    Vec3 origin{0.2, 1.1, -0.4};
    std::vector<Vec3> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(origin + e1 * u(rng) + e2 * u(rng));

    PlaneFrame f = fit_plane(pts);
    CHECK(std::abs(std::abs(dot(f.normal, n)) - 1.0) < 1e-9);
    auto proj = project_to_plane(pts, f);
    for (size_t i = 0; i < pts.size(); ++i)
        CHECK(distance(unproject(f, proj[i]), pts[i]) < 1e-9);
}

TEST_CASE("symmetric_eigen3 reproduces A v = lambda v") {
    std::array<std::array<double, 3>, 3> m = {{{4, 1, -2}, {1, 3, 0.5}, {-2, 0.5, 5}}};
    Eigen3 e = symmetric_eigen3(m);
    CHECK(e.values[0] >= e.values[1]);
    CHECK(e.values[1] >= e.values[2]);
    for (int k = 0; k < 3; ++k) {
        Vec3 v = e.vectors[k];
        Vec3 av{m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
        CHECK(distance(av, v * e.values[k]) < 1e-9);
        CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(e.values[0] + e.values[1] + e.values[2] == doctest::Approx(12.0).epsilon(1e-9));
}
