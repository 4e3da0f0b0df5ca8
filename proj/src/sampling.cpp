#include "nlocal/sampling.hpp"

#include <cmath>

namespace nlocal {

namespace {

CVec gaussian_pure(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVec v(4);
    double n2 = 0.0;
    for (cplx& a : v) {
        a = cplx(g(rng), g(rng));
        n2 += std::norm(a);
    }
    for (cplx& a : v)
        a /= std::sqrt(n2);
    return v;
}

} // namespace

TwoQubitState random_state(std::mt19937_64& rng, int rank) {
    if (rank < 1 || rank > 4)
        throw ValidationError("random_state: rank must be in [1, 4]");
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(static_cast<std::size_t>(rank));
    double sum = 0.0;
    for (double& x : w) {
        x = e(rng);
        sum += x;
    }
    ComplexMatrix rho(4);
    for (int k = 0; k < rank; ++k) {
        const CVec psi = gaussian_pure(rng);
        const double weight = w[static_cast<std::size_t>(k)] / sum;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rho.at(i, j) += weight * psi[static_cast<std::size_t>(i)] *
                                std::conj(psi[static_cast<std::size_t>(j)]);
    }
    return TwoQubitState(std::move(rho));
}

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
            2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
            2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
}

ComplexMatrix random_su2(std::mt19937_64& rng) {
    return su2_from_rotation(random_rotation(rng));
}

DichotomicSetting random_setting(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v{g(rng), g(rng), g(rng)};
    double n = norm(v);
    while (n < 1e-6) {
        v = {g(rng), g(rng), g(rng)};
        n = norm(v);
    }
    return DichotomicSetting{scaled(1.0 / n, v)};
}

} // namespace nlocal
