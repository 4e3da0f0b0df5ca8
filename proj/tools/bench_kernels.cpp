// Side-by-side timing of the OpenMP kernels against their serial reference
// implementations, plus one end-to-end optimizer run.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlocal/oracle.hpp"
#include "nlocal/sampling.hpp"

using namespace nlocal;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int repeats) {
    // One warm-up, then best-of over the repeats.
    f();
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock_type::now();
        f();
        const auto t1 = clock_type::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(dim);
    for (cplx& z : m.a)
        z = cplx(g(rng), g(rng));
    return m;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int kron_dim = quick ? 16 : 32;    // result dim = kron_dim^2
    const int mat_dim = quick ? 128 : 512;
    const int perm_qubits = quick ? 8 : 10;
    const int repeats = quick ? 3 : 5;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled at build time\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    std::mt19937_64 rng(7);
    {
        const ComplexMatrix a = random_matrix(rng, kron_dim);
        const ComplexMatrix b = random_matrix(rng, kron_dim);
        row("kron", time_ms([&] { kron_reference(a, b); }, repeats),
            time_ms([&] { kron(a, b); }, repeats));
    }
    {
        const ComplexMatrix a = random_matrix(rng, mat_dim);
        const ComplexMatrix b = random_matrix(rng, mat_dim);
        row("matmul", time_ms([&] { matmul_reference(a, b); }, repeats),
            time_ms([&] { matmul(a, b); }, repeats));
        row("trace_product", time_ms([&] { trace_product_reference(a, b); }, repeats),
            time_ms([&] { trace_product(a, b); }, repeats));
    }
    {
        const ComplexMatrix m = random_matrix(rng, 1 << perm_qubits);
        std::vector<int> perm(static_cast<std::size_t>(perm_qubits));
        for (int i = 0; i < perm_qubits; ++i)
            perm[static_cast<std::size_t>(i)] = (i + 1) % perm_qubits;
        row("permute_qubits", time_ms([&] { permute_qubits_reference(m, perm); }, repeats),
            time_ms([&] { permute_qubits(m, perm); }, repeats));
    }
    {
        std::vector<TwoQubitState> sources;
        for (int k = 0; k < 3; ++k)
            sources.push_back(make_werner(0.8));
        const ChainNetwork net(sources);
        OptimizerConfig cfg;
        cfg.starts = quick ? 4 : 16;
        const auto t0 = clock_type::now();
        const OptResult res = optimize_chain(net, cfg);
        const auto t1 = clock_type::now();
        std::printf("%-28s %10.3f ms (multi-start, value %.6f)\n", "optimize_chain n=3",
                    std::chrono::duration<double, std::milli>(t1 - t0).count(), res.value);
    }
    return 0;
}
