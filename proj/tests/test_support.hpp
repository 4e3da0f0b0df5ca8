#pragma once

// Shared helpers for the unit and acceptance suites: seeded input generators
// (from the library's sampling module) and independent numeric oracles that
// deliberately avoid the implementation paths they are used to check.

#include <cmath>
#include <random>

#include "nlocal/sampling.hpp"

namespace testsupport {

using namespace nlocal;

// Roots of the characteristic polynomial of a symmetric 3x3 matrix by the
// trigonometric closed form; independent of the Jacobi solver.
inline std::array<double, 3> cubic_eigenvalues(const Mat3& a) {
    const double q = (a[0] + a[4] + a[8]) / 3.0;
    const double p1 = a[1] * a[1] + a[2] * a[2] + a[5] * a[5];
    const double p2 = (a[0] - q) * (a[0] - q) + (a[4] - q) * (a[4] - q) +
                      (a[8] - q) * (a[8] - q) + 2.0 * p1;
    if (p2 < 1e-28)
        return {q, q, q};
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b{};
    for (int i = 0; i < 9; ++i)
        b[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
    b[0] -= q;
    b[4] -= q;
    b[8] -= q;
    for (double& x : b)
        x /= p;
    double r = mat3_det(b) / 2.0;
    r = std::min(1.0, std::max(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double l1 = q + 2.0 * p * std::cos(phi);
    const double l3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    return {l1, 3.0 * q - l1 - l3, l3}; // descending
}

inline Mat3 random_symmetric3(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    const double d0 = g(rng), d1 = g(rng), d2 = g(rng);
    const double o01 = g(rng), o02 = g(rng), o12 = g(rng);
    return {d0, o01, o02, o01, d1, o12, o02, o12, d2};
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m.at(i, i) = g(rng);
        for (int j = i + 1; j < dim; ++j) {
            const cplx z(g(rng), g(rng));
            m.at(i, j) = z;
            m.at(j, i) = std::conj(z);
        }
    }
    return m;
}

// Direct Pauli-trace correlation matrix, written out against the explicit
// 4x4 density matrix; avoids the library's kron/trace_product path.
inline Mat3 pauli_trace_t(const ComplexMatrix& rho) {
    auto sig = [](int axis, int a, int b) -> cplx {
        switch (axis) {
        case 0: return (a != b) ? cplx(1.0) : cplx(0.0);
        case 1: return (a == 0 && b == 1) ? cplx(0, -1) : (a == 1 && b == 0) ? cplx(0, 1) : cplx(0.0);
        default: return (a == b) ? (a == 0 ? cplx(1.0) : cplx(-1.0)) : cplx(0.0);
        }
    };
    Mat3 t{};
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            cplx sum = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            sum += sig(m, a, b) * sig(n, c, d) * rho.at(2 * b + d, 2 * a + c);
            t[static_cast<std::size_t>(3 * m + n)] = sum.real();
        }
    return t;
}

// Brute-force CHSH maximum over four angles: closed-form inner maximization
// over the first party's directions leaves max over b0, b1 of
// |t(b0+b1)| + |t(b0-b1)|; (theta, phi) per direction are seeded on a full
// 4D grid and refined by pattern search.
inline double brute_force_chsh(const Mat3& t, int grid = 9, int cycles = 200) {
    auto objective = [&](const std::array<double, 4>& ang) {
        const Vec3 b0{std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]),
                      std::cos(ang[0])};
        const Vec3 b1{std::sin(ang[2]) * std::cos(ang[3]), std::sin(ang[2]) * std::sin(ang[3]),
                      std::cos(ang[2])};
        const Vec3 tp = mat3_vec(t, b0 + b1);
        const Vec3 tm = mat3_vec(t, b0 - b1);
        return norm(tp) + norm(tm);
    };
    std::array<double, 4> best{};
    double best_val = -1.0;
    for (int i0 = 0; i0 < grid; ++i0)
        for (int j0 = 0; j0 < grid; ++j0)
            for (int i1 = 0; i1 < grid; ++i1)
                for (int j1 = 0; j1 < grid; ++j1) {
                    const std::array<double, 4> ang{
                        M_PI * i0 / (grid - 1), 2.0 * M_PI * j0 / (grid - 1),
                        M_PI * i1 / (grid - 1), 2.0 * M_PI * j1 / (grid - 1)};
                    const double v = objective(ang);
                    if (v > best_val) {
                        best_val = v;
                        best = ang;
                    }
                }
    double width = M_PI / (grid - 1);
    for (int c = 0; c < cycles && width > 1e-10; ++c) {
        bool improved = false;
        for (int k = 0; k < 4; ++k)
            for (int s = -1; s <= 1; s += 2) {
                std::array<double, 4> trial = best;
                trial[static_cast<std::size_t>(k)] += s * width;
                const double v = objective(trial);
                if (v > best_val) {
                    best_val = v;
                    best = trial;
                    improved = true;
                }
            }
        if (!improved)
            width *= 0.5;
    }
    return best_val;
}

} // namespace testsupport
