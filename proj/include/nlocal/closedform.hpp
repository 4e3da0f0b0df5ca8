#pragma once

#include <utility>
#include <vector>

#include "nlocal/netmodel.hpp"

namespace nlocal {

enum class Topology { chain, star };

/// Scale of the chain inequality. `normalized` carries the 1/4 prefactor in
/// I and J so the classical bound is 1; `paper_scale` (two sources only)
/// multiplies value and bound by 2 to match the usual bilocal statement with
/// bound 2. Star reports always use the 2^(n-2) bound; paper_scale is only
/// accepted there for n = 2, where the star reduces to the bilocal chain.
enum class Convention { normalized, paper_scale };

struct ViolationReport {
    Topology topology = Topology::chain;
    int n = 0;
    double classical_bound = 0.0;
    double closed_form_max = 0.0;
    bool violation = false; // closed_form_max > classical_bound + 1e-12
    std::vector<CorrelationSpectrum> per_source_spectra;
    Convention convention = Convention::normalized;
};

/// Largest CHSH value reachable with the given state: 2 sqrt(l1 + l2) from
/// the two top eigenvalues of t^T t.
double chsh_max(const TwoQubitState& state);

/// Closed-form maximum of the chain inequality,
/// sqrt(sqrt(prod l1_i) + sqrt(prod l2_i)) against bound 1 (normalized).
ViolationReport chain_max(const ChainNetwork& net,
                          Convention convention = Convention::normalized);

/// Normalized bilocal maximum for a Bell pair joined with `state`:
/// sqrt(sqrt(g1) + sqrt(g2)). Also checks the value dominates the
/// normalized CHSH quantity sqrt(g1 + g2).
double biloc_bell_generic(const TwoQubitState& state);

/// I and J of the chain inequality from per-source Bloch forms alone: sums of
/// end-party axis contractions times the middle sources' zz (resp. xx)
/// entries, with the normalized 1/4 prefactor. No tensor assembly.
std::pair<double, double> chain_ij_factorized(const ChainNetwork& net,
                                              const ChainSettings& settings);
std::pair<double, double> chain_ij_factorized(const std::vector<BlochForm>& forms,
                                              const ChainSettings& settings);

/// Closed-form maximum of the star inequality,
/// 2^(n-2) sqrt((prod t1_i)^(1/n) + (prod t2_i)^(1/n)) against bound 2^(n-2).
ViolationReport star_max(const StarNetwork& net,
                         Convention convention = Convention::normalized);

struct CauchySchwarzCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false; // lhs <= rhs + 1e-9
};

/// Bilocal maximum (paper scale, bound 2) against the geometric mean of the
/// two CHSH maxima.
CauchySchwarzCheck cauchy_schwarz_check(const TwoQubitState& a, const TwoQubitState& b);

/// n-source generalization in the normalized scale: squared chain maximum
/// against the product of the per-source quantities chsh_max/2.
CauchySchwarzCheck cauchy_schwarz_check(const ChainNetwork& net);

} // namespace nlocal
