#include "nlocal/closedform.hpp"

#include <cmath>
#include <string>

namespace nlocal {

namespace {

constexpr double kViolationSlack = 1e-12;

ViolationReport make_report(Topology topology, int n, double bound, double value,
                            std::vector<CorrelationSpectrum> spectra, Convention convention) {
    ViolationReport r;
    r.topology = topology;
    r.n = n;
    r.classical_bound = bound;
    r.closed_form_max = value;
    r.violation = value > bound + kViolationSlack;
    r.per_source_spectra = std::move(spectra);
    r.convention = convention;
    return r;
}

} // namespace

double chsh_max(const TwoQubitState& state) {
    const CorrelationSpectrum spec = correlation_spectrum(state);
    return 2.0 * std::sqrt(spec.lambda[0] + spec.lambda[1]);
}

ViolationReport chain_max(const ChainNetwork& net, Convention convention) {
    std::vector<CorrelationSpectrum> spectra;
    spectra.reserve(net.sources.size());
    double prod1 = 1.0, prod2 = 1.0;
    for (const TwoQubitState& s : net.sources) {
        spectra.push_back(correlation_spectrum(s));
        prod1 *= spectra.back().lambda[0];
        prod2 *= spectra.back().lambda[1];
    }
    double value = std::sqrt(std::sqrt(prod1) + std::sqrt(prod2));
    double bound = 1.0;
    if (convention == Convention::paper_scale) {
        if (net.n() != 2)
            throw ValidationError("chain_max: paper_scale convention is defined for n = 2 only");
        value *= 2.0;
        bound *= 2.0;
    }
    return make_report(Topology::chain, net.n(), bound, value, std::move(spectra), convention);
}

double biloc_bell_generic(const TwoQubitState& state) {
    const CorrelationSpectrum spec = correlation_spectrum(state);
    const double value = std::sqrt(std::sqrt(spec.lambda[0]) + std::sqrt(spec.lambda[1]));
    const double chsh_normalized = std::sqrt(spec.lambda[0] + spec.lambda[1]);
    if (value < chsh_normalized - 1e-12)
        throw ValidationError("biloc_bell_generic: value fell below the CHSH quantity; "
                              "correlation spectrum out of range");
    return value;
}

std::pair<double, double> chain_ij_factorized(const ChainNetwork& net,
                                              const ChainSettings& settings) {
    std::vector<BlochForm> forms;
    forms.reserve(net.sources.size());
    for (const TwoQubitState& s : net.sources)
        forms.push_back(bloch_decompose(s));
    return chain_ij_factorized(forms, settings);
}

std::pair<double, double> chain_ij_factorized(const std::vector<BlochForm>& forms,
                                              const ChainSettings& settings) {
    const std::size_t n = forms.size();
    if (n < 2)
        throw ValidationError("chain_ij_factorized: needs at least 2 sources");

    auto column = [](const Mat3& t, int c) { return Vec3{t[0 + c], t[3 + c], t[6 + c]}; };
    auto row = [](const Mat3& t, int r) { return Vec3{t[3 * r + 0], t[3 * r + 1], t[3 * r + 2]}; };

    // I: z column of the first source against a0+a1, zz entries of the middle
    // sources, z row of the last source against c0+c1. J: same with x and
    // the difference vectors.
    const Vec3 a_sum = settings.a0.axis + settings.a1.axis;
    const Vec3 a_diff = settings.a0.axis - settings.a1.axis;
    const Vec3 c_sum = settings.c0.axis + settings.c1.axis;
    const Vec3 c_diff = settings.c0.axis - settings.c1.axis;

    double i_val = dot(a_sum, column(forms.front().t, 2)) *
                   dot(row(forms.back().t, 2), c_sum);
    double j_val = dot(a_diff, column(forms.front().t, 0)) *
                   dot(row(forms.back().t, 0), c_diff);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        i_val *= forms[k].t[8]; // zz
        j_val *= forms[k].t[0]; // xx
    }
    return {0.25 * i_val, 0.25 * j_val};
}

ViolationReport star_max(const StarNetwork& net, Convention convention) {
    std::vector<CorrelationSpectrum> spectra;
    spectra.reserve(net.sources.size());
    double prod1 = 1.0, prod2 = 1.0;
    for (const TwoQubitState& s : net.sources) {
        spectra.push_back(correlation_spectrum(s));
        prod1 *= spectra.back().lambda[0];
        prod2 *= spectra.back().lambda[1];
    }
    const int n = net.n();
    const double inv_n = 1.0 / n;
    const double scale = std::pow(2.0, n - 2);
    double value = scale * std::sqrt(std::pow(prod1, inv_n) + std::pow(prod2, inv_n));
    double bound = scale;
    if (convention == Convention::paper_scale) {
        if (n != 2)
            throw ValidationError("star_max: paper_scale convention is defined for n = 2 only");
        value *= 2.0;
        bound *= 2.0;
    }
    return make_report(Topology::star, n, bound, value, std::move(spectra), convention);
}

CauchySchwarzCheck cauchy_schwarz_check(const TwoQubitState& a, const TwoQubitState& b) {
    const CorrelationSpectrum sa = correlation_spectrum(a);
    const CorrelationSpectrum sb = correlation_spectrum(b);
    CauchySchwarzCheck c;
    c.lhs = 2.0 * std::sqrt(std::sqrt(sa.lambda[0] * sb.lambda[0]) +
                            std::sqrt(sa.lambda[1] * sb.lambda[1]));
    c.rhs = std::sqrt(chsh_max(a) * chsh_max(b));
    c.holds = c.lhs <= c.rhs + 1e-9;
    return c;
}

CauchySchwarzCheck cauchy_schwarz_check(const ChainNetwork& net) {
    const ViolationReport report = chain_max(net);
    CauchySchwarzCheck c;
    c.lhs = report.closed_form_max * report.closed_form_max;
    c.rhs = 1.0;
    for (const TwoQubitState& s : net.sources)
        c.rhs *= 0.5 * chsh_max(s);
    c.holds = c.lhs <= c.rhs + 1e-9;
    return c;
}

} // namespace nlocal
