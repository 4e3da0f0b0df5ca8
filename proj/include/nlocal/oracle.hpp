#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "nlocal/closedform.hpp"

namespace nlocal {

/// Multi-start derivative-free maximization knobs. Identical seeds give
/// identical results: start points are drawn sequentially before any
/// parallel work and the best-start reduction runs in start order.
struct OptimizerConfig {
    int starts = 16;
    int grid_points = 9; // per-coordinate seeding grid
    double tol = 1e-9;   // stop a start when a full cycle gains less than this
    int max_iters = 60;  // coordinate-descent cycles per start
    std::uint64_t seed = 0;

    void validate() const; // starts >= 1, grid_points >= 3, tol > 0
};

struct OptResult {
    double value = 0.0;
    std::variant<ChainSettings, StarSettings> settings;
    int iterations = 0;
    bool converged = false;
};

/// Kronecker product of the sources in chain order: party 1 owns qubit 0,
/// middle party i owns qubits 2i-3 and 2i-2, the last party owns qubit 2n-1.
/// Capped at n = 5 (1024-dimensional); Hermiticity and unit trace are always
/// checked, positive semidefiniteness only up to 64 dimensions (the factors
/// are individually validated PSD, so the product is PSD up to roundoff).
ComplexMatrix assemble_chain(const ChainNetwork& net);

/// Exact-trace I and J against the assembled chain: the end-party
/// sum/difference observables with sigma_z (resp. sigma_x) pairs on every
/// middle party, 1/4 prefactor. Agrees with chain_ij_factorized to 1e-10.
std::pair<double, double> chain_ij_full(const ChainNetwork& net, const ChainSettings& settings);

/// Kronecker product of the sources reordered to (branch parties 1..n,
/// central node qubits 1..n) so the central observable applies as one
/// trailing 2^n block. Same n = 5 cap as assemble_chain.
ComplexMatrix assemble_star(const StarNetwork& net);

/// I_j = 2^-n sum_x (-1)^(g_j(x)) Tr[(A_x1 x ... x A_xn) x B^j rho], j 1-based.
double star_ij_full(const StarNetwork& net, const StarSettings& settings, int j);

/// Maximizes sqrt|I| + sqrt|J| over the four end-party axes (full Bloch
/// sphere, two angles each). The objective runs on the factorized form; the
/// optimum is re-checked against the full-tensor traces to 1e-10.
OptResult optimize_chain(const ChainNetwork& net, const OptimizerConfig& cfg);

/// Maximizes sum_j |I_j|^(1/n) over the per-party alphas and the shared
/// orthonormal frame (three Euler angles). Needs the b^j table, so n <= 4.
OptResult optimize_star(const StarNetwork& net, const OptimizerConfig& cfg);

/// Outcome-bit dichotomy diagnostic for one correlator: searches dichotomies
/// of the 2^n generalized Bell vectors for the largest |I_j| at the given
/// settings and reports how the tabulated b^j compares. Exhaustive for
/// n <= 3 (all 2^(2^n) assignments at n = 3, the three balanced splits up to
/// complement at n = 2); at n = 4 it tries the tabulated b^j plus all
/// single-entry flips of its truth table.
struct DichotomyResult {
    std::vector<std::uint8_t> best; // truth table over basis indices
    double best_abs = 0.0;
    double table_abs = 0.0;
    bool table_optimal = false; // table_abs >= best_abs - 1e-9
};

DichotomyResult dichotomy_search(const StarNetwork& net, const StarSettings& settings, int j);

} // namespace nlocal
