#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "nildyn/field.hpp"

namespace nildyn {

using NumPoint = std::array<double, 3>;
using Mat3d = std::array<std::array<double, 3>, 3>;

inline double num_norm(const NumPoint& p) {
    return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

inline double num_dist(const NumPoint& a, const NumPoint& b) {
    return num_norm({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
}

inline Mat3d mat3d_mul(const Mat3d& a, const Mat3d& b) {
    Mat3d r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

/// Solve a 3x3 system in place (partial pivoting). Returns false if singular.
inline bool solve3(Mat3d a, NumPoint rhs, NumPoint& out) {
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-300) return false;
        std::swap(a[col], a[piv]);
        std::swap(rhs[col], rhs[piv]);
        std::swap(perm[col], perm[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * out[c];
        out[r] = s / a[r][r];
    }
    return true;
}

/// A 3-D map with value and Jacobian evaluation in doubles.
struct NumericMap3 {
    std::function<NumPoint(const NumPoint&)> value;
    std::function<Mat3d(const NumPoint&)> jacobian;

    NumPoint power(NumPoint p, int m) const {
        for (int i = 0; i < m; ++i) p = value(p);
        return p;
    }

    /// Chain-rule Jacobian of the m-th iterate.
    Mat3d power_jacobian(NumPoint p, int m) const {
        Mat3d j{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        for (int i = 0; i < m; ++i) {
            j = mat3d_mul(jacobian(p), j);
            p = value(p);
        }
        return j;
    }
};

inline NumericMap3 numeric_from_polymap(const PolyMap3& map) {
    auto jac = std::make_shared<Mat3Poly>(map.jacobian());
    auto m = std::make_shared<PolyMap3>(map);
    NumericMap3 n;
    n.value = [m](const NumPoint& p) { return m->eval(p); };
    n.jacobian = [jac](const NumPoint& p) {
        Mat3d r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] = (*jac)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(p);
        return r;
    };
    return n;
}

/// Closed-form evaluator for the simplified d2 = 1 map
/// (X,Y,Z) -> (P1(Y)-P1(Z), Z, a12 (P1(Y)-P1(Z))^2 + nu).
inline NumericMap3 numeric_simplified_map(const FieldParams& params) {
    struct Data {
        std::vector<double> p1, dp1;
        double a12, nu;
        double p1_at(double s) const {
            double r = 0;
            for (auto it = p1.rbegin(); it != p1.rend(); ++it) r = r * s + *it;
            return r;
        }
        double dp1_at(double s) const {
            double r = 0;
            for (auto it = dp1.rbegin(); it != dp1.rend(); ++it) r = r * s + *it;
            return r;
        }
    };
    auto d = std::make_shared<Data>();
    d->p1 = params.P1.coeffs_double();
    d->dp1 = params.P1.derivative().coeffs_double();
    d->a12 = to_double(params.a12);
    d->nu = to_double(params.nu());
    NumericMap3 n;
    n.value = [d](const NumPoint& p) -> NumPoint {
        const double diff = d->p1_at(p[1]) - d->p1_at(p[2]);
        return {diff, p[2], d->a12 * diff * diff + d->nu};
    };
    n.jacobian = [d](const NumPoint& p) -> Mat3d {
        const double diff = d->p1_at(p[1]) - d->p1_at(p[2]);
        const double dy = d->dp1_at(p[1]);
        const double dz = d->dp1_at(p[2]);
        return {{{0, dy, -dz}, {0, 0, 1}, {0, 2 * d->a12 * diff * dy, -2 * d->a12 * diff * dz}}};
    };
    return n;
}

struct NewtonOptions {
    int starts = 100;
    unsigned long long seed = 20240601ull;
    double box = 10.0;       // starts uniform in [-box, box]^3
    double tol = 1e-12;      // |F^m(p)-p| <= tol*(1+|p|)
    int max_iter = 100;
    double cluster_radius = 1e-6;
    double divergence_bound = 1e8;
};

struct NewtonRoot {
    NumPoint point{};
    double residual = 0.0;
};

/// Damped multi-start Newton on map^m(p) - p = 0. Converged roots only;
/// absence of roots is never certified. Output is sorted for run-to-run
/// stability.
inline std::vector<NewtonRoot> newton_multistart_periodic(const NumericMap3& map, int m,
                                                          const NewtonOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uni(-opt.box, opt.box);
    std::vector<NewtonRoot> roots;

    auto residual = [&](const NumPoint& p) -> NumPoint {
        const NumPoint q = map.power(p, m);
        return {q[0] - p[0], q[1] - p[1], q[2] - p[2]};
    };

    for (int s = 0; s < opt.starts; ++s) {
        NumPoint p{uni(rng), uni(rng), uni(rng)};
        bool converged = false;
        for (int it = 0; it < opt.max_iter; ++it) {
            const NumPoint r = residual(p);
            const double rn = num_norm(r);
            if (!std::isfinite(rn) || num_norm(p) > opt.divergence_bound) break;
            if (rn <= opt.tol * (1.0 + num_norm(p))) {
                converged = true;
                break;
            }
            Mat3d j = map.power_jacobian(p, m);
            for (int i = 0; i < 3; ++i) j[i][i] -= 1.0;
            NumPoint step{};
            if (!solve3(j, {-r[0], -r[1], -r[2]}, step)) break;
            double lambda = 1.0;
            bool accepted = false;
            for (int halve = 0; halve < 30; ++halve) {
                const NumPoint q{p[0] + lambda * step[0], p[1] + lambda * step[1], p[2] + lambda * step[2]};
                const double qn = num_norm(residual(q));
                if (std::isfinite(qn) && qn < rn) {
                    p = q;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) break;
        }
        if (converged) roots.push_back(NewtonRoot{p, num_norm(residual(p))});
    }
    std::sort(roots.begin(), roots.end(), [](const NewtonRoot& a, const NewtonRoot& b) {
        if (a.point[0] != b.point[0]) return a.point[0] < b.point[0];
        if (a.point[1] != b.point[1]) return a.point[1] < b.point[1];
        return a.point[2] < b.point[2];
    });
    return roots;
}

/// Greedy clustering of converged roots (deterministic given sorted input).
struct Cluster {
    NumPoint representative{};
    int hits = 0;
};

inline std::vector<Cluster> cluster_roots(const std::vector<NewtonRoot>& roots, double radius) {
    std::vector<Cluster> clusters;
    for (const auto& r : roots) {
        bool found = false;
        for (auto& c : clusters) {
            if (num_dist(c.representative, r.point) <= radius) {
                ++c.hits;
                found = true;
                break;
            }
        }
        if (!found) clusters.push_back(Cluster{r.point, 1});
    }
    return clusters;
}

} // namespace nildyn
