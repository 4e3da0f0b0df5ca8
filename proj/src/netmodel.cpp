#include "nlocal/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlocal {

ChainNetwork::ChainNetwork(std::vector<TwoQubitState> src) : sources(std::move(src)) {
    if (sources.size() < 2)
        throw ValidationError("ChainNetwork: needs at least 2 sources, got " +
                              std::to_string(sources.size()));
}

StarNetwork::StarNetwork(std::vector<TwoQubitState> src) : sources(std::move(src)) {
    if (sources.size() < 2)
        throw ValidationError("StarNetwork: needs at least 2 sources, got " +
                              std::to_string(sources.size()));
}

DichotomicSetting DichotomicSetting::from_axis(const Vec3& axis) {
    if (std::abs(norm(axis) - 1.0) > 1e-12)
        throw ValidationError("DichotomicSetting: axis must be unit length");
    return DichotomicSetting{axis};
}

DichotomicSetting DichotomicSetting::from_angles(double theta, double phi) {
    return DichotomicSetting{{std::sin(theta) * std::cos(phi),
                              std::sin(theta) * std::sin(phi), std::cos(theta)}};
}

void StarSettings::validate(int n) const {
    if (static_cast<int>(alpha.size()) != n)
        throw ValidationError("StarSettings: expected " + std::to_string(n) +
                              " alpha angles, got " + std::to_string(alpha.size()));
    if (std::abs(norm(nhat) - 1.0) > 1e-12 || std::abs(norm(nprime) - 1.0) > 1e-12)
        throw ValidationError("StarSettings: nhat and nprime must be unit vectors");
    if (std::abs(dot(nhat, nprime)) > 1e-12)
        throw ValidationError("StarSettings: nhat and nprime must be orthogonal");
}

Vec3 StarSettings::axis(int party, int input) const {
    const double a = alpha[static_cast<std::size_t>(party)];
    const double s = input == 0 ? std::sin(a) : -std::sin(a);
    return scaled(std::cos(a), nhat) + scaled(s, nprime);
}

CVec ghz(int n) {
    if (n < 2 || n > 10)
        throw ValidationError("ghz: n must be in [2, 10], got " + std::to_string(n));
    CVec v(static_cast<std::size_t>(1) << n);
    const double h = 1.0 / std::sqrt(2.0);
    v.front() = h;
    v.back() = h;
    return v;
}

GeneralizedBellBasis bell_basis(int n) {
    if (n < 2 || n > 6)
        throw ValidationError("bell_basis: n must be in [2, 6], got " + std::to_string(n));
    const CVec ghz_n = ghz(n);
    const int count = 1 << n;
    GeneralizedBellBasis basis;
    basis.n = n;
    basis.vectors.reserve(static_cast<std::size_t>(count));
    for (int r = 0; r < count; ++r) {
        // Z^{r1} on factor 1, X^{rk} on factors 2..n; r1 is the MSB of r.
        ComplexMatrix op = ((r >> (n - 1)) & 1) ? paulis::z() : paulis::id2();
        for (int k = 1; k < n; ++k) {
            const bool flip = (r >> (n - 1 - k)) & 1;
            op = kron(op, flip ? paulis::x() : paulis::id2());
        }
        basis.vectors.push_back(apply_matrix(op, ghz_n));
    }
    return basis;
}

std::vector<std::vector<int>> gj_table(int n) {
    if (n < 2 || n > 10)
        throw ValidationError("gj_table: n must be in [2, 10], got " + std::to_string(n));
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 != 0)
            continue;
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                s.push_back(i + 1);
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return subsets;
}

namespace {

// Bit r_k of the basis index, k 1-based, r1 stored as the MSB.
inline int rbit(int r, int n, int k) { return (r >> (n - k)) & 1; }

} // namespace

std::vector<std::vector<std::uint8_t>> bj_table(int n) {
    if (n != 2 && n != 3 && n != 4)
        throw ResourceError("bj_table: dichotomies are tabulated for n in {2, 3, 4} only; "
                            "unsupported, use dichotomy search");
    const int count = 1 << n;
    std::vector<std::vector<std::uint8_t>> table;
    auto add = [&](auto f) {
        std::vector<std::uint8_t> t(static_cast<std::size_t>(count));
        for (int r = 0; r < count; ++r)
            t[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(f(r) & 1);
        table.push_back(std::move(t));
    };
    if (n == 2) {
        // Chosen so B^1 = sigma_z x sigma_z and B^2 = sigma_x x sigma_x, the
        // chain scenario's middle-party pair; this makes the two-source star
        // reduce to the bilocal case.
        add([&](int r) { return rbit(r, 2, 2); });
        add([&](int r) { return rbit(r, 2, 1); });
    } else if (n == 3) {
        add([&](int r) { return rbit(r, 3, 1); });
        add([&](int r) { return rbit(r, 3, 1) ^ rbit(r, 3, 2) ^ 1; });
        add([&](int r) { return rbit(r, 3, 1) ^ rbit(r, 3, 3) ^ 1; });
        add([&](int r) { return rbit(r, 3, 1) ^ rbit(r, 3, 2) ^ rbit(r, 3, 3) ^ 1; });
    } else {
        add([&](int r) { return rbit(r, 4, 1); });
        add([&](int r) { return rbit(r, 4, 2) ^ rbit(r, 4, 3) ^ 1; });
        add([&](int r) { return rbit(r, 4, 2) ^ rbit(r, 4, 4) ^ 1; });
        add([&](int r) { return rbit(r, 4, 3) ^ rbit(r, 4, 4) ^ 1; });
        add([&](int r) { return rbit(r, 4, 2) ^ 1; });
        add([&](int r) { return rbit(r, 4, 3) ^ 1; });
        add([&](int r) { return rbit(r, 4, 4) ^ 1; });
        add([&](int r) { return rbit(r, 4, 2) ^ rbit(r, 4, 3) ^ rbit(r, 4, 4); });
    }
    return table;
}

ComplexMatrix bob_observable(int n, int j) {
    const auto table = bj_table(n);
    if (j < 1 || j > static_cast<int>(table.size()))
        throw ValidationError("bob_observable: j must be in [1, " +
                              std::to_string(table.size()) + "], got " + std::to_string(j));
    const GeneralizedBellBasis basis = bell_basis(n);
    const auto& b = table[static_cast<std::size_t>(j - 1)];
    ComplexMatrix obs(1 << n);
    for (int r = 0; r < (1 << n); ++r) {
        const double sign = b[static_cast<std::size_t>(r)] ? -1.0 : 1.0;
        const ComplexMatrix proj = outer(basis.vectors[static_cast<std::size_t>(r)],
                                         basis.vectors[static_cast<std::size_t>(r)]);
        for (std::size_t i = 0; i < obs.a.size(); ++i)
            obs.a[i] += sign * proj.a[i];
    }
    return obs;
}

} // namespace nlocal
