#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "nlocal/netspec.hpp"
#include "nlocal/sampling.hpp"

using namespace nlocal;

namespace {

int cmd_analyze(const std::string& path, const AnalyzeOptions& options, bool as_json) {
    const NetworkSpec spec = load_network_spec(path);
    const AnalysisResult result = analyze(spec, options);
    if (as_json)
        std::cout << render_json_report(result);
    else
        std::cout << render_text_report(result);
    return result.oracle_exceeds_closed_form ? 2 : 0;
}

int cmd_sweep(const std::string& path, const AnalyzeOptions& options, const std::string& csv_path) {
    const SweepSpec spec = load_sweep_spec(path);
    const std::vector<SweepRow> rows = run_sweep(spec, options);
    const std::string csv = sweep_csv(rows);
    if (csv_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out)
            throw InputError("cannot write CSV file '" + csv_path + "'");
        out << csv;
    }
    return 0;
}

std::string bitstring(int value, int bits) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int k = 0; k < bits; ++k)
        if ((value >> (bits - 1 - k)) & 1)
            s[static_cast<std::size_t>(k)] = '1';
    return s;
}

bool run_basis_checks(int n) {
    const GeneralizedBellBasis basis = bell_basis(n);
    const int dim = 1 << n;
    double gram_err = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int s = 0; s < dim; ++s) {
            const cplx g = inner(basis.vectors[static_cast<std::size_t>(r)],
                                 basis.vectors[static_cast<std::size_t>(s)]);
            gram_err = std::max(gram_err, std::abs(g - (r == s ? cplx(1.0) : cplx(0.0))));
        }
    ComplexMatrix completeness(dim);
    for (const CVec& v : basis.vectors)
        completeness = completeness + outer(v, v);
    const double comp_err = max_abs_diff(completeness, ComplexMatrix::identity(dim));

    bool ok = true;
    auto line = [&](const char* name, double err, double tol) {
        const bool pass = err <= tol;
        ok = ok && pass;
        std::printf("  [%s] %s: max deviation %.3g (tol %.0e)\n", pass ? "ok" : "FAIL", name, err,
                    tol);
    };
    line("orthonormality", gram_err, 1e-12);
    line("completeness", comp_err, 1e-12);

    if (n <= 4) {
        double invol_err = 0.0, trace_err = 0.0, eig_err = 0.0;
        const auto table = bj_table(n);
        for (int j = 1; j <= (1 << (n - 1)); ++j) {
            const ComplexMatrix b = bob_observable(n, j);
            invol_err = std::max(invol_err,
                                 max_abs_diff(matmul(b, b), ComplexMatrix::identity(dim)));
            trace_err = std::max(trace_err, std::abs(trace(b)));
            for (int r = 0; r < dim; ++r) {
                const double sign = table[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(r)] ? -1.0 : 1.0;
                const CVec bv = apply_matrix(b, basis.vectors[static_cast<std::size_t>(r)]);
                double dev = 0.0;
                for (std::size_t i = 0; i < bv.size(); ++i)
                    dev = std::max(dev, std::abs(bv[i] - sign * basis.vectors[static_cast<std::size_t>(r)][i]));
                eig_err = std::max(eig_err, dev);
            }
        }
        line("observable involution", invol_err, 1e-12);
        line("observable tracelessness", trace_err, 1e-12);
        line("basis eigenvector property", eig_err, 1e-12);
    }
    return ok;
}

int cmd_basis(int n, bool check) {
    if (n < 2 || n > 6)
        throw InputError("basis: n must be in [2, 6]");
    const GeneralizedBellBasis basis = bell_basis(n);
    std::printf("generalized Bell basis, n=%d (%d vectors)\n", n, 1 << n);
    for (int r = 0; r < (1 << n); ++r) {
        std::printf("  psi[%s] =", bitstring(r, n).c_str());
        bool first = true;
        const CVec& v = basis.vectors[static_cast<std::size_t>(r)];
        for (int i = 0; i < (1 << n); ++i) {
            const cplx a = v[static_cast<std::size_t>(i)];
            if (std::abs(a) < 1e-12)
                continue;
            std::printf("%s %+.6f|%s>", first ? "" : " ", a.real(), bitstring(i, n).c_str());
            first = false;
        }
        std::printf("\n");
    }

    std::printf("g_j subsets (sign weights of the correlators):\n");
    const auto subsets = gj_table(n);
    for (std::size_t j = 0; j < subsets.size(); ++j) {
        std::printf("  g%zu = {", j + 1);
        for (std::size_t k = 0; k < subsets[j].size(); ++k)
            std::printf("%s%d", k ? "," : "", subsets[j][k]);
        std::printf("}\n");
    }

    bool checks_ok = true;
    if (n <= 4) {
        std::printf("b^j truth tables (index r1...rn ascending):\n");
        const auto table = bj_table(n);
        for (std::size_t j = 0; j < table.size(); ++j) {
            std::printf("  b%zu =", j + 1);
            for (std::uint8_t bit : table[j])
                std::printf(" %d", static_cast<int>(bit));
            std::printf("\n");
        }
        if (check) {
            std::printf("checks:\n");
            checks_ok = run_basis_checks(n);
        }
    } else {
        if (check) {
            std::printf("checks:\n");
            checks_ok = run_basis_checks(n);
        }
        std::fprintf(stderr,
                     "error: b^j tables are unsupported for n=%d (available for n in {2,3,4}); "
                     "use the dichotomy-search diagnostic instead\n", n);
        return 1;
    }
    return checks_ok ? 0 : 2;
}

// Seeded self-check suite over the library invariants.
int cmd_verify(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    bool all_ok = true;
    auto report = [&](const char* name, bool pass, double worst, double tol) {
        all_ok = all_ok && pass;
        std::printf("[%s] %s: worst %.3g (tol %.0e)\n", pass ? "ok" : "FAIL", name, worst, tol);
    };

    {
        bool ok = true;
        for (int n = 2; n <= 6; ++n)
            ok = ok && run_basis_checks(n);
        std::printf("[%s] generalized Bell basis n=2..6\n", ok ? "ok" : "FAIL");
        all_ok = all_ok && ok;
    }
    {
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const int n = 2 + t % 3;
            std::vector<TwoQubitState> sources;
            for (int k = 0; k < n; ++k)
                sources.push_back(random_state(rng));
            const ChainNetwork net(sources);
            ChainSettings settings{random_setting(rng), random_setting(rng),
                                   random_setting(rng), random_setting(rng)};
            const auto fact = chain_ij_factorized(net, settings);
            const auto full = chain_ij_full(net, settings);
            worst = std::max({worst, std::abs(fact.first - full.first),
                              std::abs(fact.second - full.second)});
        }
        report("chain factorized vs full-tensor I/J", worst <= 1e-10, worst, 1e-10);
    }
    {
        double worst = -1.0;
        for (int t = 0; t < 10 * trials; ++t) {
            const CauchySchwarzCheck c =
                cauchy_schwarz_check(random_state(rng), random_state(rng));
            worst = std::max(worst, c.lhs - c.rhs);
        }
        for (int t = 0; t < trials; ++t) {
            std::vector<TwoQubitState> sources;
            for (int k = 0; k < 3; ++k)
                sources.push_back(random_state(rng));
            const CauchySchwarzCheck c = cauchy_schwarz_check(ChainNetwork(sources));
            worst = std::max(worst, c.lhs - c.rhs);
        }
        report("Cauchy-Schwarz relation", worst <= 1e-9, worst, 1e-9);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const TwoQubitState a = random_state(rng);
            const TwoQubitState b = random_state(rng);
            const double chain = chain_max(ChainNetwork({a, b})).closed_form_max;
            const double star = star_max(StarNetwork({a, b})).closed_form_max;
            worst = std::max(worst, std::abs(chain - star));
        }
        report("star n=2 reduces to the chain closed form", worst <= 1e-12, worst, 1e-12);
    }
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        for (int t = 0; t < trials; ++t) {
            const TwoQubitState s1 = random_state(rng);
            const TwoQubitState s2 = random_state(rng);
            StarSettings ss;
            ss.alpha = {angle(rng), angle(rng)};
            const Mat3 frame = random_rotation(rng);
            ss.nhat = {frame[2], frame[5], frame[8]};
            ss.nprime = {frame[0], frame[3], frame[6]};
            const StarNetwork star({s1, s2});
            const ChainNetwork chain({s1, swap_parties(s2)});
            const ChainSettings cs{DichotomicSetting::from_axis(ss.axis(0, 0)),
                                   DichotomicSetting::from_axis(ss.axis(0, 1)),
                                   DichotomicSetting::from_axis(ss.axis(1, 0)),
                                   DichotomicSetting::from_axis(ss.axis(1, 1))};
            const auto ij = chain_ij_full(chain, cs);
            worst = std::max({worst, std::abs(star_ij_full(star, ss, 1) - ij.first),
                              std::abs(star_ij_full(star, ss, 2) - ij.second)});
        }
        report("star n=2 correlators match chain I/J", worst <= 1e-12, worst, 1e-12);
    }
    return all_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"n-local inequality violations in chain and star quantum networks"};
    app.require_subcommand(1);

    std::string file;
    std::string csv_path;
    std::string convention;
    std::uint64_t seed = 0;
    bool oracle = false, align = false, as_json = false, check = false;
    int basis_n = 2;
    int trials = 25;

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "closed-form and oracle analysis of a network file");
    analyze_cmd->add_option("file", file, "network spec file (JSON)")->required();
    analyze_cmd->add_flag("--oracle", oracle, "also run the measurement-settings optimizer");
    analyze_cmd->add_flag("--align", align, "rotate each source to its canonical diagonal form first");
    analyze_cmd->add_flag("--json", as_json, "emit a machine-readable report");
    analyze_cmd->add_option("--convention", convention, "normalized or paper_scale");
    analyze_cmd->add_option("--seed", seed, "RNG seed for the optimizer");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one marked scalar parameter over a grid");
    sweep_cmd->add_option("file", file, "sweep spec file (JSON)")->required();
    sweep_cmd->add_option("--csv", csv_path, "write rows to this file instead of stdout");
    sweep_cmd->add_flag("--oracle", oracle, "add an oracle column");
    sweep_cmd->add_option("--seed", seed, "RNG seed for the optimizer");

    CLI::App* basis_cmd = app.add_subcommand("basis", "print the generalized Bell basis and the g_j/b^j tables");
    basis_cmd->add_option("n", basis_n, "number of sources")->required();
    basis_cmd->add_flag("--check", check, "run orthonormality/completeness/involution assertions");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the seeded self-check suite");
    verify_cmd->add_option("--seed", seed, "RNG seed");
    verify_cmd->add_option("--trials", trials, "samples per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        AnalyzeOptions options;
        options.oracle = oracle;
        options.align = align;
        options.optimizer.seed = seed;
        if (!convention.empty()) {
            if (convention == "normalized")
                options.convention_override = Convention::normalized;
            else if (convention == "paper_scale")
                options.convention_override = Convention::paper_scale;
            else
                throw InputError("--convention must be normalized or paper_scale");
        }
        if (analyze_cmd->parsed())
            return cmd_analyze(file, options, as_json);
        if (sweep_cmd->parsed())
            return cmd_sweep(file, options, csv_path);
        if (basis_cmd->parsed())
            return cmd_basis(basis_n, check);
        return cmd_verify(seed, trials);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
