#include "cogs/fitting.hpp"

#include <algorithm>
#include <limits>

namespace cogs {

namespace {

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve3(std::array<std::array<double, 4>, 3> m, std::array<double, 3>& out) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-14) return false;
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int i = 0; i < 3; ++i) out[i] = m[i][3] / m[i][i];
    return true;
}

}  // namespace

CircleFit fit_circle_2d(const std::vector<Point2>& points) {
    if (points.size() < 3) throw DegenerateInput("fit_circle_2d: need at least 3 points");

    // Center the data for conditioning.
    double mu = 0, mv = 0;
    for (const auto& p : points) {
        mu += p[0];
        mv += p[1];
    }
    mu /= points.size();
    mv /= points.size();

    double suu = 0, suv = 0, svv = 0, su = 0, sv = 0;
    double suuu = 0, svvv = 0, srr = 0;
    for (const auto& p : points) {
        double u = p[0] - mu, v = p[1] - mv;
        suu += u * u;
        suv += u * v;
        svv += v * v;
        su += u;
        sv += v;
        double rr = u * u + v * v;
        suuu += rr * u;
        svvv += rr * v;
        srr += rr;
    }
    double n = static_cast<double>(points.size());

    // Collinearity check on the 2x2 scatter matrix.
    double det2 = suu * svv - suv * suv;
    double scale = suu + svv;
    if (scale < 1e-20 || det2 < 1e-12 * scale * scale)
        throw DegenerateInput("fit_circle_2d: points are collinear or coincident");

    // Normal equations for u^2+v^2 = a*u + b*v + c in centered coords.
    std::array<std::array<double, 4>, 3> m{{{suu, suv, su, suuu},
                                            {suv, svv, sv, svvv},
                                            {su, sv, n, srr}}};
    std::array<double, 3> abc{};
    if (!solve3(m, abc)) throw DegenerateInput("fit_circle_2d: singular system");

    double cu = abc[0] / 2, cv = abc[1] / 2;
    double r2 = abc[2] + cu * cu + cv * cv;
    if (r2 <= 0) throw DegenerateInput("fit_circle_2d: negative squared radius");
    return {{cu + mu, cv + mv}, std::sqrt(r2)};
}

Eigen3 symmetric_eigen3(const std::array<std::array<double, 3>, 3>& min) {
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = min[i][j];

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-30 * (std::abs(a[p][p]) + std::abs(a[q][q]) + 1e-300))
                    continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1);
                double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    Eigen3 out;
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return a[i][i] > a[j][j]; });
    for (int k = 0; k < 3; ++k) {
        int i = idx[k];
        out.values[k] = a[i][i];
        out.vectors[k] = {v[0][i], v[1][i], v[2][i]};
    }
    return out;
}

namespace {

std::array<std::array<double, 3>, 3> covariance(const std::vector<Vec3>& points,
                                                const Vec3& centroid) {
    std::array<std::array<double, 3>, 3> c{};
    for (const auto& p : points) {
        Vec3 d = p - centroid;
        const double v[3] = {d.x, d.y, d.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i][j] += v[i] * v[j];
    }
    return c;
}

Vec3 centroid_of(const std::vector<Vec3>& points) {
    Vec3 c;
    for (const auto& p : points) c += p;
    return c / static_cast<double>(points.size());
}

}  // namespace

LineFit fit_line(const std::vector<Vec3>& points) {
    if (points.size() < 2) throw DegenerateInput("fit_line: need at least 2 points");
    Vec3 c = centroid_of(points);
    Eigen3 eig = symmetric_eigen3(covariance(points, c));
    if (eig.values[0] < 1e-18)
        throw DegenerateInput("fit_line: points are coincident");

    Vec3 dir = normalized(eig.vectors[0]);
    if (dot(dir, points.back() - points.front()) < 0) dir = -dir;

    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (const auto& p : points) {
        double t = dot(p - c, dir);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {c, dir, hi - lo};
}

PlaneFrame fit_plane(const std::vector<Vec3>& points) {
    if (points.size() < 3) throw DegenerateInput("fit_plane: need at least 3 points");
    Vec3 c = centroid_of(points);
    Eigen3 eig = symmetric_eigen3(covariance(points, c));
    PlaneFrame f;
    f.origin = c;
    f.u_axis = normalized(eig.vectors[0], 0.0);
    f.v_axis = normalized(eig.vectors[1], 0.0);
    f.normal = cross(f.u_axis, f.v_axis);
    return f;
}

std::vector<Point2> project_to_plane(const std::vector<Vec3>& points, const PlaneFrame& frame) {
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        Vec3 d = p - frame.origin;
        out.push_back({dot(d, frame.u_axis), dot(d, frame.v_axis)});
    }
    return out;
}

Vec3 unproject(const PlaneFrame& frame, const Point2& p) {
    return frame.origin + frame.u_axis * p[0] + frame.v_axis * p[1];
}

namespace {

struct LinearSineFit {
    double p = 0, q = 0, c = 0, sse = 0;
};

// Least-squares (p, q, c) for v = p*sin(w*u) + q*cos(w*u) + c at fixed w.
LinearSineFit solve_linear_sine(const std::vector<Point2>& pts, double w) {
    double sss = 0, ssc = 0, scc = 0, ss = 0, sc = 0;
    double svs = 0, svc = 0, sv = 0;
    for (const auto& pt : pts) {
        double s = std::sin(w * pt[0]);
        double c = std::cos(w * pt[0]);
        sss += s * s;
        ssc += s * c;
        scc += c * c;
        ss += s;
        sc += c;
        svs += pt[1] * s;
        svc += pt[1] * c;
        sv += pt[1];
    }
    double n = static_cast<double>(pts.size());
    std::array<std::array<double, 4>, 3> m{{{sss, ssc, ss, svs},
                                            {ssc, scc, sc, svc},
                                            {ss, sc, n, sv}}};
    std::array<double, 3> x{};
    LinearSineFit out;
    if (!solve3(m, x)) {
        out.sse = std::numeric_limits<double>::max();
        return out;
    }
    out.p = x[0];
    out.q = x[1];
    out.c = x[2];
    for (const auto& pt : pts) {
        double r = pt[1] - (out.p * std::sin(w * pt[0]) + out.q * std::cos(w * pt[0]) + out.c);
        out.sse += r * r;
    }
    return out;
}

double sine_sse(const std::vector<Point2>& pts, double p, double q, double w, double c) {
    double sse = 0;
    for (const auto& pt : pts) {
        double r = pt[1] - (p * std::sin(w * pt[0]) + q * std::cos(w * pt[0]) + c);
        sse += r * r;
    }
    return sse;
}

}  // namespace

SineFit fit_sine(const std::vector<Point2>& points) {
    if (points.size() < 4) throw DegenerateInput("fit_sine: need at least 4 points");

    double umin = points[0][0], umax = points[0][0];
    double vmean = 0;
    for (const auto& p : points) {
        umin = std::min(umin, p[0]);
        umax = std::max(umax, p[0]);
        vmean += p[1];
    }
    vmean /= points.size();
    double span = umax - umin;
    if (span <= 0) throw DegenerateInput("fit_sine: zero u span");

    double vvar = 0;
    for (const auto& p : points) vvar += (p[1] - vmean) * (p[1] - vmean);

    // Constant data: amplitude ~ 0, period is arbitrary.
    if (vvar < 1e-24) return {0.0, span, 0.0, vmean, 0.0};

    // Coarse grid over the period, log-spaced.
    double t_lo = span / 16.0;
    double t_hi = span * 20.0;
    const int kGrid = 800;
    double best_w = 2 * kPi / span;
    LinearSineFit best;
    best.sse = std::numeric_limits<double>::max();
    for (int i = 0; i < kGrid; ++i) {
        double T = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (kGrid - 1));
        double w = 2 * kPi / T;
        LinearSineFit f = solve_linear_sine(points, w);
        if (f.sse < best.sse) {
            best = f;
            best_w = w;
        }
    }

    // Damped Gauss-Newton on (p, q, w, c).
    double p = best.p, q = best.q, w = best_w, c = best.c;
    double sse = best.sse;
    double lambda = 1e-9;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        // Accumulate J^T J and J^T r with r_i = v_i - model.
        double jtj[4][4] = {};
        double jtr[4] = {};
        for (const auto& pt : points) {
            double s = std::sin(w * pt[0]);
            double co = std::cos(w * pt[0]);
            double model = p * s + q * co + c;
            double r = pt[1] - model;
            // d(model)/d(theta):
            double g[4] = {s, co, pt[0] * (p * co - q * s), 1.0};
            for (int i = 0; i < 4; ++i) {
                jtr[i] += g[i] * r;
                for (int j = 0; j < 4; ++j) jtj[i][j] += g[i] * g[j];
            }
        }

        double step_norm = 0;
        bool accepted = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            // Solve (J^T J + lambda*diag) delta = J^T r via 4x4 elimination.
            double m[4][5];
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) m[i][j] = jtj[i][j];
                m[i][i] += lambda * std::max(jtj[i][i], 1e-12);
                m[i][4] = jtr[i];
            }
            bool singular = false;
            for (int col = 0; col < 4 && !singular; ++col) {
                int pivot = col;
                for (int r2 = col + 1; r2 < 4; ++r2)
                    if (std::abs(m[r2][col]) > std::abs(m[pivot][col])) pivot = r2;
                if (std::abs(m[pivot][col]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(m[col], m[pivot]);
                for (int r2 = 0; r2 < 4; ++r2) {
                    if (r2 == col) continue;
                    double f = m[r2][col] / m[col][col];
                    for (int c2 = col; c2 < 5; ++c2) m[r2][c2] -= f * m[col][c2];
                }
            }
            if (singular) {
                lambda *= 10;
                continue;
            }
            double delta[4];
            for (int i = 0; i < 4; ++i) delta[i] = m[i][4] / m[i][i];

            double np = p + delta[0], nq = q + delta[1], nw = w + delta[2],
                   nc = c + delta[3];
            double nsse = sine_sse(points, np, nq, nw, nc);
            if (nsse <= sse) {
                step_norm = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] +
                                      delta[2] * delta[2] + delta[3] * delta[3]);
                p = np;
                q = nq;
                w = nw;
                c = nc;
                sse = nsse;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10;
            if (lambda > 1e18) break;
        }
        if (!accepted) {
            // No descent direction left; we are at a (possibly machine-level)
            // minimum.
            converged = true;
            break;
        }
        if (step_norm < 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged && sse > 1e-6 * std::max(vvar, 1e-30))
        throw NoConvergence("fit_sine: Gauss-Newton did not converge");

    if (w < 0) {
        w = -w;
        p = -p;
    }
    if (w < 1e-12) throw NoConvergence("fit_sine: degenerate frequency");

    SineFit out;
    out.amplitude = std::hypot(p, q);
    out.period = 2 * kPi / w;
    out.phase = std::atan2(q, p);
    out.offset = c;
    out.residual = sse;
    return out;
}

std::vector<Vec3> resample_polyline(const std::vector<Vec3>& points, size_t n) {
    if (points.empty()) throw EmptyPath("resample_polyline: empty input");
    if (n == 0) return {};
    std::vector<double> cum(points.size(), 0.0);
    for (size_t i = 1; i < points.size(); ++i)
        cum[i] = cum[i - 1] + distance(points[i], points[i - 1]);
    double total = cum.back();
    if (n == 1) return {points.front()};
    if (total < 1e-15) return std::vector<Vec3>(n, points.front());

    std::vector<Vec3> out;
    out.reserve(n);
    size_t seg = 0;
    for (size_t k = 0; k < n; ++k) {
        double target = total * static_cast<double>(k) / (n - 1);
        while (seg + 1 < cum.size() - 1 && cum[seg + 1] < target) ++seg;
        double seg_len = cum[seg + 1] - cum[seg];
        double t = seg_len > 1e-15 ? (target - cum[seg]) / seg_len : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        out.push_back(points[seg] + (points[seg + 1] - points[seg]) * t);
    }
    return out;
}

double dtw_similarity(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      size_t samples) {
    if (a.empty() || b.empty()) throw EmptyPath("dtw_similarity: empty polyline");
    std::vector<Vec3> ra = resample_polyline(a, samples);
    std::vector<Vec3> rb = resample_polyline(b, samples);
    size_t n = ra.size(), m = rb.size();

    std::vector<double> cost(n * m);
    auto at = [&](size_t i, size_t j) -> double& { return cost[i * m + j]; };
    auto d = [&](size_t i, size_t j) { return distance(ra[i], rb[j]); };

    at(0, 0) = d(0, 0);
    for (size_t i = 1; i < n; ++i) at(i, 0) = at(i - 1, 0) + d(i, 0);
    for (size_t j = 1; j < m; ++j) at(0, j) = at(0, j - 1) + d(0, j);
    for (size_t i = 1; i < n; ++i)
        for (size_t j = 1; j < m; ++j)
            at(i, j) = d(i, j) + std::min({at(i - 1, j - 1), at(i - 1, j), at(i, j - 1)});

    // Backtrack to count alignment steps (diagonal preferred on ties).
    size_t i = n - 1, j = m - 1, steps = 1;
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        ++steps;
    }

    double mean_cost = at(n - 1, m - 1) / static_cast<double>(steps);

    Vec3 lo = rb[0], hi = rb[0];
    for (const auto& p : rb) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    double diag = distance(lo, hi);
    if (diag < 1e-15) return mean_cost < 1e-15 ? 100.0 : 0.0;
    return 100.0 * std::max(0.0, 1.0 - mean_cost / diag);
}

}  // namespace cogs
