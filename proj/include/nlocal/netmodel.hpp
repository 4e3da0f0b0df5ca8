#pragma once

#include <cstdint>
#include <vector>

#include "nlocal/qstate.hpp"

namespace nlocal {

/// Linear chain of n >= 2 sources. Source k links party k and party k+1;
/// its first qubit belongs to the left party, its second to the right one.
struct ChainNetwork {
    std::vector<TwoQubitState> sources;

    explicit ChainNetwork(std::vector<TwoQubitState> src);
    int n() const { return static_cast<int>(sources.size()); }
};

/// Star of n >= 2 sources around a central node; source i's first qubit
/// belongs to the i-th branch party, its second to the central node.
struct StarNetwork {
    std::vector<TwoQubitState> sources;

    explicit StarNetwork(std::vector<TwoQubitState> src);
    int n() const { return static_cast<int>(sources.size()); }
};

/// A +/-1 observable axis.sigma; the axis must be unit length to 1e-12.
struct DichotomicSetting {
    Vec3 axis{0, 0, 1};

    static DichotomicSetting from_axis(const Vec3& axis); // validates norm
    static DichotomicSetting from_angles(double theta, double phi);
};

/// End-party measurement choices for the chain scenario. Middle parties are
/// fixed at sigma_z x sigma_z (input 0) and sigma_x x sigma_x (input 1).
struct ChainSettings {
    DichotomicSetting a0, a1; // first party
    DichotomicSetting c0, c1; // last party
};

/// Branch-party measurement choices for the star scenario: all parties share
/// an orthonormal pair (nhat, nprime); party i measures
///   A0 = cos(alpha_i) nhat.sigma + sin(alpha_i) nprime.sigma
///   A1 = cos(alpha_i) nhat.sigma - sin(alpha_i) nprime.sigma.
struct StarSettings {
    std::vector<double> alpha;
    Vec3 nhat{0, 0, 1};
    Vec3 nprime{1, 0, 0};

    void validate(int n) const; // sizes, unit norms, orthogonality to 1e-12
    Vec3 axis(int party, int input) const;
};

/// (|0...0> + |1...1>)/sqrt(2) on n qubits, 2 <= n <= 10.
CVec ghz(int n);

/// The 2^n entangled basis vectors Z^{r1} x X^{r2} x ... x X^{rn} |GHZ_n>,
/// indexed by the bit string r1...rn with r1 as the most significant bit.
struct GeneralizedBellBasis {
    int n = 0;
    std::vector<CVec> vectors;
};

GeneralizedBellBasis bell_basis(int n); // 2 <= n <= 6

/// The 2^(n-1) even-cardinality subsets of {1..n} (empty set included),
/// sorted by cardinality then lexicographically. Subset j defines the sign
/// weight (-1)^(sum of x_i over the subset) of the j-th star correlator.
std::vector<std::vector<int>> gj_table(int n); // 2 <= n <= 10

/// Outcome-bit dichotomies over the generalized Bell basis, one per
/// correlator, as truth tables indexed like bell_basis. Available for
/// n in {2, 3, 4} only.
std::vector<std::vector<std::uint8_t>> bj_table(int n);

/// Central-node observable sum_r (-1)^(b^j(r)) |psi_r><psi_r|, j 1-based.
/// Hermitian involution with eigenvalues +/-1 and zero trace.
ComplexMatrix bob_observable(int n, int j);

} // namespace nlocal
