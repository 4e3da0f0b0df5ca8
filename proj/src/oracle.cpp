#include "nlocal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

namespace nlocal {

namespace {

constexpr int kMaxOracleSources = 5; // 4^5 = 1024-dimensional tensors
constexpr int kPsdCheckMaxDim = 64;
constexpr double kPi = 3.14159265358979323846;

void check_source_cap(int n, const char* who) {
    if (n > kMaxOracleSources)
        throw ResourceError(std::string(who) + ": exact-trace oracle is capped at " +
                            std::to_string(kMaxOracleSources) + " sources (got " +
                            std::to_string(n) + ")");
}

void validate_assembled(const ComplexMatrix& rho, const char* who) {
    if (hermiticity_error(rho) > 1e-9)
        throw ValidationError(std::string(who) + ": assembled state lost Hermiticity");
    if (std::abs(trace(rho) - cplx(1.0)) > 1e-9)
        throw ValidationError(std::string(who) + ": assembled state lost unit trace");
    if (rho.dim <= kPsdCheckMaxDim && min_hermitian_eigenvalue(rho) < -1e-9)
        throw ValidationError(std::string(who) + ": assembled state lost positivity");
}

ComplexMatrix kron_sources(const std::vector<TwoQubitState>& sources) {
    ComplexMatrix rho = sources.front().rho;
    for (std::size_t k = 1; k < sources.size(); ++k)
        rho = kron(rho, sources[k].rho);
    return rho;
}

} // namespace

void OptimizerConfig::validate() const {
    if (starts < 1)
        throw ValidationError("OptimizerConfig: starts must be >= 1");
    if (grid_points < 3)
        throw ValidationError("OptimizerConfig: grid_points must be >= 3");
    if (!(tol > 0.0))
        throw ValidationError("OptimizerConfig: tol must be positive");
    if (max_iters < 1)
        throw ValidationError("OptimizerConfig: max_iters must be >= 1");
}

ComplexMatrix assemble_chain(const ChainNetwork& net) {
    check_source_cap(net.n(), "assemble_chain");
    ComplexMatrix rho = kron_sources(net.sources);
    validate_assembled(rho, "assemble_chain");
    return rho;
}

namespace {

std::pair<double, double> chain_ij_full_impl(const ComplexMatrix& rho, int n,
                                             const ChainSettings& settings) {
    auto end_to_end = [&](const Vec3& left, const ComplexMatrix& middle, const Vec3& right) {
        ComplexMatrix op = axis_observable(left);
        for (int k = 0; k < 2 * (n - 1); ++k)
            op = kron(op, middle);
        op = kron(op, axis_observable(right));
        return 0.25 * trace_product(op, rho).real();
    };
    const double i_val = end_to_end(settings.a0.axis + settings.a1.axis, paulis::z(),
                                    settings.c0.axis + settings.c1.axis);
    const double j_val = end_to_end(settings.a0.axis - settings.a1.axis, paulis::x(),
                                    settings.c0.axis - settings.c1.axis);
    return {i_val, j_val};
}

} // namespace

std::pair<double, double> chain_ij_full(const ChainNetwork& net, const ChainSettings& settings) {
    return chain_ij_full_impl(assemble_chain(net), net.n(), settings);
}

ComplexMatrix assemble_star(const StarNetwork& net) {
    check_source_cap(net.n(), "assemble_star");
    const int n = net.n();
    ComplexMatrix rho = kron_sources(net.sources);
    // (a1 b1 a2 b2 ...) -> (a1 .. an b1 .. bn)
    std::vector<int> perm(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        perm[static_cast<std::size_t>(2 * i)] = i;
        perm[static_cast<std::size_t>(2 * i + 1)] = n + i;
    }
    rho = permute_qubits(rho, perm);
    validate_assembled(rho, "assemble_star");
    return rho;
}

namespace {

// Sign masks for the g_j subset parities; branch party 1 maps to the most
// significant bit of the input word x, matching the basis index convention.
std::vector<unsigned> gj_masks(int n) {
    const auto subsets = gj_table(n);
    std::vector<unsigned> masks;
    masks.reserve(subsets.size());
    for (const auto& s : subsets) {
        unsigned m = 0;
        for (int party : s)
            m |= 1u << (n - party);
        masks.push_back(m);
    }
    return masks;
}

inline double parity_sign(unsigned bits) {
    return (__builtin_popcount(bits) & 1) ? -1.0 : 1.0;
}

// Shared state for repeated star-correlator evaluations at fixed sources.
// The optimizer calls the objective tens of thousands of times, so the
// per-settings work runs on preallocated flat buffers.
class StarEvaluator {
  public:
    explicit StarEvaluator(const StarNetwork& net)
        : n_(net.n()), dim_(1 << n_), rho_(assemble_star(net)), masks_(gj_masks(n_)) {
        const int count = 1 << (n_ - 1);
        bobs_.reserve(static_cast<std::size_t>(count));
        for (int j = 1; j <= count; ++j)
            bobs_.push_back(bob_observable(n_, j));
    }

    int n() const { return n_; }
    int correlator_count() const { return static_cast<int>(bobs_.size()); }

    // All I_j at once; the branch contraction per input word dominates, so
    // share it across j.
    std::vector<double> correlators(const StarSettings& settings) const {
        settings.validate(n_);
        Workspace& ws = workspace();
        std::vector<double> acc(bobs_.size(), 0.0);
        const double scale = 1.0 / static_cast<double>(dim_);
        for (unsigned x = 0; x < static_cast<unsigned>(dim_); ++x) {
            contract_branches(settings, x, ws);
            for (std::size_t j = 0; j < bobs_.size(); ++j) {
                const std::vector<cplx>& b = bobs_[j].a;
                double t = 0.0;
                for (int c = 0; c < dim_; ++c)
                    for (int d = 0; d < dim_; ++d)
                        t += (b[static_cast<std::size_t>(c) * dim_ + d] *
                              ws.m[static_cast<std::size_t>(d) * dim_ + c])
                                 .real();
                acc[j] += parity_sign(x & masks_[j]) * t;
            }
        }
        for (double& v : acc)
            v *= scale;
        return acc;
    }

    double correlator(const StarSettings& settings, int j) const {
        if (j < 1 || j > correlator_count())
            throw ValidationError("star correlator index j out of range");
        return correlators(settings)[static_cast<std::size_t>(j - 1)];
    }

    double objective(const StarSettings& settings) const {
        const std::vector<double> ij = correlators(settings);
        double s = 0.0;
        for (double v : ij)
            s += std::pow(std::abs(v), 1.0 / n_);
        return s;
    }

    // <psi_r| . |psi_r> weights of one correlator, used by the dichotomy
    // diagnostic: any dichotomy's I_j is a signed sum of these.
    std::vector<double> basis_weights(const StarSettings& settings, int j) const {
        settings.validate(n_);
        const GeneralizedBellBasis basis = bell_basis(n_);
        const unsigned mask = masks_.at(static_cast<std::size_t>(j - 1));
        Workspace& ws = workspace();
        std::vector<double> q(basis.vectors.size(), 0.0);
        const double scale = 1.0 / static_cast<double>(dim_);
        for (unsigned x = 0; x < static_cast<unsigned>(dim_); ++x) {
            contract_branches(settings, x, ws);
            ComplexMatrix m(dim_);
            m.a = ws.m;
            const double sign = parity_sign(x & mask);
            for (std::size_t r = 0; r < q.size(); ++r) {
                const CVec mv = apply_matrix(m, basis.vectors[r]);
                q[r] += sign * scale * inner(basis.vectors[r], mv).real();
            }
        }
        return q;
    }

  private:
    struct Workspace {
        std::vector<cplx> obs; // 2n single-qubit observables, 4 entries each
        std::vector<cplx> m;   // branch-contracted central-node operator
    };

    Workspace& workspace() const {
        static thread_local Workspace ws;
        ws.obs.assign(static_cast<std::size_t>(2 * n_) * 4, cplx(0.0));
        ws.m.assign(static_cast<std::size_t>(dim_) * dim_, cplx(0.0));
        return ws;
    }

    // M[d,c] = sum_{a,b} A_x[a,b] rho[(b d),(a c)] with A_x the product of
    // the per-party observables; entries of A_x are computed as products of
    // 2x2 elements instead of materializing the Kronecker factor.
    void contract_branches(const StarSettings& settings, unsigned x, Workspace& ws) const {
        for (int i = 0; i < n_; ++i) {
            const ComplexMatrix o = axis_observable(settings.axis(i, (x >> (n_ - 1 - i)) & 1));
            std::copy(o.a.begin(), o.a.end(), ws.obs.begin() + 4 * i);
        }
        auto entry = [&](int a, int b) {
            cplx p = 1.0;
            for (int i = 0; i < n_; ++i) {
                const int ai = (a >> (n_ - 1 - i)) & 1;
                const int bi = (b >> (n_ - 1 - i)) & 1;
                p *= ws.obs[static_cast<std::size_t>(4 * i + 2 * ai + bi)];
            }
            return p;
        };
        std::fill(ws.m.begin(), ws.m.end(), cplx(0.0));
        const int db = dim_;
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b) {
                const cplx w = entry(a, b);
                if (w == cplx(0.0))
                    continue;
                const cplx* rho_row = &rho_.a[static_cast<std::size_t>(b * db) * rho_.dim];
                for (int d = 0; d < db; ++d)
                    for (int c = 0; c < db; ++c)
                        ws.m[static_cast<std::size_t>(d) * db + c] +=
                            w * rho_row[static_cast<std::size_t>(d) * rho_.dim + a * db + c];
            }
    }

    int n_;
    int dim_;
    ComplexMatrix rho_;
    std::vector<unsigned> masks_;
    std::vector<ComplexMatrix> bobs_;
};

// ---------------------------------------------------------------------------
// Coordinate-descent maximizer: per-coordinate grid scan followed by
// golden-section refinement, cycled until a full pass gains less than tol.

struct CoordinateRange {
    double lo = 0.0;
    double hi = 2.0 * kPi;
};

struct SearchOutcome {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

double golden_refine(const std::function<double(double)>& f, double lo, double hi,
                     double& best_x, double best_f) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    // Width 1e-7 puts the value error near 1e-14 for these smooth
    // objectives, well under the cycle-gain tolerance.
    for (int it = 0; it < 60 && (b - a) > 1e-7; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        const double x = f1 >= f2 ? x1 : x2;
        const double fx = std::max(f1, f2);
        if (fx > best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return best_f;
}

SearchOutcome coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> p, const std::vector<CoordinateRange>& ranges,
                                 const OptimizerConfig& cfg) {
    SearchOutcome out;
    double best = f(p);
    for (int cycle = 0; cycle < cfg.max_iters; ++cycle) {
        const double before = best;
        for (std::size_t c = 0; c < p.size(); ++c) {
            auto line = [&](double x) {
                std::vector<double> q = p;
                q[c] = x;
                return f(q);
            };
            const auto& r = ranges[c];
            double best_x = p[c];
            double best_f = best;
            const int g = cfg.grid_points;
            int best_k = -1;
            for (int k = 0; k < g; ++k) {
                const double x = r.lo + (r.hi - r.lo) * k / (g - 1);
                const double fx = line(x);
                if (fx > best_f) {
                    best_f = fx;
                    best_x = x;
                    best_k = k;
                }
            }
            const double cell = (r.hi - r.lo) / (g - 1);
            const double lo = best_k >= 0 ? std::max(r.lo, r.lo + cell * (best_k - 1))
                                          : std::max(r.lo, best_x - cell);
            const double hi = best_k >= 0 ? std::min(r.hi, r.lo + cell * (best_k + 1))
                                          : std::min(r.hi, best_x + cell);
            best_f = golden_refine(line, lo, hi, best_x, best_f);
            p[c] = best_x;
            best = best_f;
        }
        out.iterations = cycle + 1;
        if (best - before < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    out.point = std::move(p);
    out.value = best;
    return out;
}

std::vector<SearchOutcome> multi_start(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<std::vector<double>>& starts,
                                       const std::vector<CoordinateRange>& ranges,
                                       const OptimizerConfig& cfg) {
    std::vector<SearchOutcome> results(starts.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(starts.size()); ++i)
        results[static_cast<std::size_t>(i)] =
            coordinate_descent(f, starts[static_cast<std::size_t>(i)], ranges, cfg);
    return results;
}

const SearchOutcome& best_outcome(const std::vector<SearchOutcome>& results) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value)
            best = i;
    return results[best];
}

Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c, -s, 0, s, c, 0, 0, 0, 1};
}

Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c, 0, s, 0, 1, 0, -s, 0, c};
}

ChainSettings chain_settings_from(const std::vector<double>& p) {
    return ChainSettings{DichotomicSetting::from_angles(p[0], p[1]),
                         DichotomicSetting::from_angles(p[2], p[3]),
                         DichotomicSetting::from_angles(p[4], p[5]),
                         DichotomicSetting::from_angles(p[6], p[7])};
}

StarSettings star_settings_from(const std::vector<double>& p, int n) {
    StarSettings s;
    s.alpha.assign(p.begin(), p.begin() + n);
    const Mat3 frame = mat3_mul(rot_z(p[static_cast<std::size_t>(n)]),
                                mat3_mul(rot_y(p[static_cast<std::size_t>(n) + 1]),
                                         rot_z(p[static_cast<std::size_t>(n) + 2])));
    s.nhat = mat3_vec(frame, Vec3{0, 0, 1});
    s.nprime = mat3_vec(frame, Vec3{1, 0, 0});
    // Under roundoff the frame columns drift off unit norm by ~1e-16;
    // renormalize so StarSettings::validate stays strict.
    s.nhat = scaled(1.0 / norm(s.nhat), s.nhat);
    s.nprime = s.nprime - scaled(dot(s.nprime, s.nhat), s.nhat);
    s.nprime = scaled(1.0 / norm(s.nprime), s.nprime);
    return s;
}

std::vector<std::vector<double>> seeded_starts(const std::vector<std::vector<double>>& canonical,
                                               const std::vector<CoordinateRange>& ranges,
                                               const OptimizerConfig& cfg) {
    std::vector<std::vector<double>> starts = canonical;
    if (static_cast<int>(starts.size()) > cfg.starts)
        starts.resize(static_cast<std::size_t>(cfg.starts));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(starts.size()) < cfg.starts) {
        std::vector<double> p(ranges.size());
        for (std::size_t c = 0; c < ranges.size(); ++c)
            p[c] = ranges[c].lo + (ranges[c].hi - ranges[c].lo) * u(rng);
        starts.push_back(std::move(p));
    }
    return starts;
}

} // namespace

OptResult optimize_chain(const ChainNetwork& net, const OptimizerConfig& cfg) {
    cfg.validate();
    check_source_cap(net.n(), "optimize_chain");

    std::vector<BlochForm> forms;
    forms.reserve(net.sources.size());
    for (const TwoQubitState& s : net.sources)
        forms.push_back(bloch_decompose(s));

    auto objective = [&](const std::vector<double>& p) {
        const auto [i_val, j_val] = chain_ij_factorized(forms, chain_settings_from(p));
        return std::sqrt(std::abs(i_val)) + std::sqrt(std::abs(j_val));
    };

    // theta in [0, pi], phi in [0, 2pi] for each of a0, a1, c0, c1.
    std::vector<CoordinateRange> ranges;
    for (int k = 0; k < 4; ++k) {
        ranges.push_back({0.0, kPi});
        ranges.push_back({0.0, 2.0 * kPi});
    }
    // Canonical coplanar seed: the x-z settings that realize the closed form
    // on aligned sources.
    const std::vector<std::vector<double>> canonical = {
        {kPi / 4, 0.0, kPi / 4, kPi, kPi / 4, 0.0, kPi / 4, kPi}};

    const auto starts = seeded_starts(canonical, ranges, cfg);
    const std::vector<SearchOutcome> outcomes = multi_start(objective, starts, ranges, cfg);
    const SearchOutcome& best = best_outcome(outcomes);

    const ChainSettings settings = chain_settings_from(best.point);
    const auto fact = chain_ij_factorized(forms, settings);
    const auto full = chain_ij_full(net, settings);
    if (std::abs(fact.first - full.first) > 1e-10 || std::abs(fact.second - full.second) > 1e-10)
        throw ValidationError("optimize_chain: factorized and full-tensor I/J disagree at the "
                              "optimum (factorized " + std::to_string(fact.first) + "/" +
                              std::to_string(fact.second) + ", full " +
                              std::to_string(full.first) + "/" + std::to_string(full.second) + ")");

    OptResult res;
    res.value = best.value;
    res.settings = settings;
    res.iterations = best.iterations;
    res.converged = best.converged;
    return res;
}

double star_ij_full(const StarNetwork& net, const StarSettings& settings, int j) {
    return StarEvaluator(net).correlator(settings, j);
}

OptResult optimize_star(const StarNetwork& net, const OptimizerConfig& cfg) {
    cfg.validate();
    check_source_cap(net.n(), "optimize_star");
    const StarEvaluator eval(net); // throws ResourceError when b^j is untabulated
    const int n = eval.n();

    auto objective = [&](const std::vector<double>& p) {
        return eval.objective(star_settings_from(p, n));
    };

    std::vector<CoordinateRange> ranges(static_cast<std::size_t>(n), {0.0, 2.0 * kPi});
    ranges.push_back({0.0, 2.0 * kPi}); // Euler z
    ranges.push_back({0.0, kPi});       // Euler y
    ranges.push_back({0.0, 2.0 * kPi}); // Euler z

    // Canonical seeds: all alphas at pi/4 with the frame (z, x), which is
    // optimal for two sources, and with the frame (x, y), optimal for three.
    std::vector<double> seed_zx(static_cast<std::size_t>(n) + 3, kPi / 4);
    seed_zx[static_cast<std::size_t>(n)] = 0.0;
    seed_zx[static_cast<std::size_t>(n) + 1] = 0.0;
    seed_zx[static_cast<std::size_t>(n) + 2] = 0.0;
    std::vector<double> seed_xy(static_cast<std::size_t>(n) + 3, kPi / 4);
    seed_xy[static_cast<std::size_t>(n)] = 0.0;
    seed_xy[static_cast<std::size_t>(n) + 1] = kPi / 2;
    seed_xy[static_cast<std::size_t>(n) + 2] = kPi / 2;

    const auto starts = seeded_starts({seed_zx, seed_xy}, ranges, cfg);
    const std::vector<SearchOutcome> outcomes = multi_start(objective, starts, ranges, cfg);
    const SearchOutcome& best = best_outcome(outcomes);

    OptResult res;
    res.value = best.value;
    res.settings = star_settings_from(best.point, n);
    res.iterations = best.iterations;
    res.converged = best.converged;
    return res;
}

DichotomyResult dichotomy_search(const StarNetwork& net, const StarSettings& settings, int j) {
    const int n = net.n();
    if (n > 4)
        throw ResourceError("dichotomy_search: supported for n <= 4");
    const StarEvaluator eval(net);
    if (j < 1 || j > eval.correlator_count())
        throw ValidationError("dichotomy_search: j out of range");
    const std::vector<double> q = eval.basis_weights(settings, j);
    const int count = 1 << n;

    const auto table = bj_table(n);
    const auto& tabulated = table[static_cast<std::size_t>(j - 1)];

    auto value_of = [&](const std::vector<std::uint8_t>& dich) {
        double s = 0.0;
        for (int r = 0; r < count; ++r)
            s += (dich[static_cast<std::size_t>(r)] ? -1.0 : 1.0) * q[static_cast<std::size_t>(r)];
        return std::abs(s);
    };

    std::vector<std::vector<std::uint8_t>> candidates;
    auto from_mask = [&](unsigned long mask) {
        std::vector<std::uint8_t> d(static_cast<std::size_t>(count));
        for (int r = 0; r < count; ++r)
            d[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>((mask >> r) & 1);
        return d;
    };
    if (n == 2) {
        // Balanced splits of the four basis vectors, up to complement.
        for (unsigned long mask = 0; mask < 16; ++mask)
            if (__builtin_popcountl(mask) == 2 && (mask & 1) == 0)
                candidates.push_back(from_mask(mask));
    } else if (n == 3) {
        for (unsigned long mask = 0; mask < 256; ++mask)
            candidates.push_back(from_mask(mask));
    } else {
        candidates.push_back(tabulated);
        for (int r = 0; r < count; ++r) {
            std::vector<std::uint8_t> d = tabulated;
            d[static_cast<std::size_t>(r)] ^= 1;
            candidates.push_back(std::move(d));
        }
    }

    DichotomyResult out;
    out.table_abs = value_of(tabulated);
    out.best_abs = -1.0;
    for (auto& d : candidates) {
        const double v = value_of(d);
        if (v > out.best_abs) {
            out.best_abs = v;
            out.best = std::move(d);
        }
    }
    out.table_optimal = out.table_abs >= out.best_abs - 1e-9;
    return out;
}

} // namespace nlocal
