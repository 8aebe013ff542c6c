#include "support/fit_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "colorseg/rng.hpp"

namespace colorseg::testing {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

/// Plain Nelder-Mead; returns the best function value found.
double nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter) {
    const std::size_t dim = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> xs(dim + 1, x0);
    std::vector<double> fx(dim + 1);
    for (std::size_t i = 1; i <= dim; ++i) xs[i][i - 1] += step;
    for (std::size_t i = 0; i <= dim; ++i) fx[i] = f(xs[i]);

    std::vector<std::size_t> order(dim + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];
        if (fx[worst] - fx[best] < 1e-15 * (1.0 + std::abs(fx[best]))) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += xs[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        const auto blend = [&](double t) {
            std::vector<double> out(dim);
            for (std::size_t d = 0; d < dim; ++d) out[d] = centroid[d] + t * (centroid[d] - xs[worst][d]);
            return out;
        };

        const std::vector<double> xr = blend(alpha);
        const double fr = f(xr);
        if (fr < fx[order[0]]) {
            const std::vector<double> xe = blend(gamma);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fx[worst] = fe;
            } else {
                xs[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[second]) {
            xs[worst] = xr;
            fx[worst] = fr;
        } else {
            const std::vector<double> xc = blend(-rho);
            const double fc = f(xc);
            if (fc < fx[worst]) {
                xs[worst] = xc;
                fx[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d) {
                        xs[i][d] = xs[best][d] + sigma * (xs[i][d] - xs[best][d]);
                    }
                    fx[i] = f(xs[i]);
                }
            }
        }
    }
    return *std::min_element(fx.begin(), fx.end());
}

Vec3 direction_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double ssd_point(std::span<const ColorVec> pts, const Vec3& c) {
    double s = 0.0;
    for (const ColorVec& p : pts) s += norm2(p - c);
    return s;
}

double ssd_line(std::span<const ColorVec> pts, const Vec3& c, const Vec3& v) {
    double s = 0.0;
    for (const ColorVec& p : pts) {
        const Vec3 d = p - c;
        const double along = dot(d, v);
        s += norm2(d) - along * along;
    }
    return s;
}

double ssd_plane(std::span<const ColorVec> pts, const Vec3& c, const Vec3& v) {
    double s = 0.0;
    for (const ColorVec& p : pts) {
        const double off = dot(p - c, v);
        s += off * off;
    }
    return s;
}

}  // namespace

double oracle_rank_ssd(std::span<const ColorVec> points, int rank, std::uint64_t seed) {
    if (points.size() <= 1) return 0.0;
    Rng rng(seed);

    Vec3 lo = points[0], hi = points[0];
    Vec3 avg{};
    for (const ColorVec& p : points) {
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
        avg += p;
    }
    avg *= 1.0 / static_cast<double>(points.size());
    const double extent = std::max({hi.r - lo.r, hi.g - lo.g, hi.b - lo.b, 1e-3});

    if (rank == 0) {
        const Objective f = [&](const std::vector<double>& x) {
            return ssd_point(points, {x[0], x[1], x[2]});
        };
        double best = f({avg.r, avg.g, avg.b});
        for (int restart = 0; restart < 8; ++restart) {
            std::vector<double> x0 = {avg.r + extent * (rng.uniform() - 0.5),
                                      avg.g + extent * (rng.uniform() - 0.5),
                                      avg.b + extent * (rng.uniform() - 0.5)};
            best = std::min(best, nelder_mead(f, x0, 0.25 * extent, 400));
        }
        return best;
    }

    const Objective f = [&](const std::vector<double>& x) {
        const Vec3 c = {x[0], x[1], x[2]};
        const Vec3 v = direction_from_angles(x[3], x[4]);
        return rank == 1 ? ssd_line(points, c, v) : ssd_plane(points, c, v);
    };

    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 30; ++restart) {
        std::vector<double> x0(5);
        if (restart < 10 && points.size() >= 2) {
            // Data-driven start: base at the average, direction through a
            // random pair of distinct points.
            const int i = rng.uniform_int(static_cast<int>(points.size()));
            int j = rng.uniform_int(static_cast<int>(points.size()));
            if (j == i) j = (j + 1) % static_cast<int>(points.size());
            Vec3 v = points[static_cast<std::size_t>(j)] - points[static_cast<std::size_t>(i)];
            if (norm(v) < 1e-12) v = {1, 0, 0};
            v = v * (1.0 / norm(v));
            x0 = {avg.r, avg.g, avg.b, std::acos(std::clamp(v.b, -1.0, 1.0)), std::atan2(v.g, v.r)};
        } else {
            x0 = {avg.r + extent * (rng.uniform() - 0.5), avg.g + extent * (rng.uniform() - 0.5),
                  avg.b + extent * (rng.uniform() - 0.5), rng.uniform(0.0, 3.14159265358979),
                  rng.uniform(-3.14159265358979, 3.14159265358979)};
        }
        best = std::min(best, nelder_mead(f, x0, 0.3, 800));
    }
    return best;
}

Image<ColorVec> reference_bilateral(const Image<ColorVec>& img, const BilateralParams& p) {
    Image<ColorVec> out(img.width, img.height);
    const double inv2fr2 = 1.0 / (2.0 * p.f_r * p.f_r);
    const double inv2gs2 = 1.0 / (2.0 * p.g_s * p.g_s);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const ColorVec center = img.at(x, y);
            double wsum = 0.0;
            ColorVec acc{};
            for (int dy = -p.radius; dy <= p.radius; ++dy) {
                for (int dx = -p.radius; dx <= p.radius; ++dx) {
                    const int sx = std::clamp(x + dx, 0, img.width - 1);
                    const int sy = std::clamp(y + dy, 0, img.height - 1);
                    const ColorVec q = img.at(sx, sy);
                    const double w = std::exp(-(dx * dx + dy * dy) * inv2gs2) *
                                     std::exp(-norm2(q - center) * inv2fr2);
                    wsum += w;
                    acc += q * w;
                }
            }
            out.at(x, y) = acc * (1.0 / wsum);
        }
    }
    return out;
}

}  // namespace colorseg::testing
