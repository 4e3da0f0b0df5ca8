#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace nlocal;
using namespace testsupport;

namespace {

ComplexMatrix random_complex(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(dim);
    for (cplx& z : m.a)
        z = cplx(g(rng), g(rng));
    return m;
}

} // namespace

TEST_CASE("kron identity case") {
    const ComplexMatrix r = kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
    CHECK(max_abs_diff(r, ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("kron of diagonal Paulis") {
    const ComplexMatrix r = kron(paulis::z(), paulis::z());
    ComplexMatrix expect(4);
    expect.at(0, 0) = 1.0;
    expect.at(1, 1) = -1.0;
    expect.at(2, 2) = -1.0;
    expect.at(3, 3) = 1.0;
    CHECK(max_abs_diff(r, expect) == 0.0);
}

TEST_CASE("kron of sigma_x pair maps |00> to |11>") {
    const ComplexMatrix xx = kron(paulis::x(), paulis::x());
    CVec e00(4, 0.0);
    e00[0] = 1.0;
    const CVec out = apply_matrix(xx, e00);
    CHECK(std::abs(out[3] - cplx(1.0)) == 0.0);
    CHECK(std::abs(out[0]) == 0.0);
    CHECK(std::abs(out[1]) == 0.0);
    CHECK(std::abs(out[2]) == 0.0);
}

TEST_CASE("kron rejects non-square use via dimension fields") {
    // ComplexMatrix is square by construction; the dimension errors surface
    // on mismatched binary ops instead.
    const ComplexMatrix a(2), b(3);
    CHECK_THROWS_AS((void)matmul(a, b), DimensionError);
    CHECK_THROWS_AS((void)trace_product(a, b), DimensionError);
}

TEST_CASE("kron is associative") {
    // Exact equality on matrices with exactly representable entry products.
    CHECK(max_abs_diff(kron(kron(paulis::x(), paulis::y()), paulis::z()),
                       kron(paulis::x(), kron(paulis::y(), paulis::z()))) == 0.0);
    std::mt19937_64 rng(11);
    const ComplexMatrix a = random_complex(rng, 2);
    const ComplexMatrix b = random_complex(rng, 3);
    const ComplexMatrix c = random_complex(rng, 2);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
}

TEST_CASE("parallel kernels match the serial references") {
    std::mt19937_64 rng(13);
    for (int dim : {2, 7, 32, 130}) {
        const ComplexMatrix a = random_complex(rng, dim);
        const ComplexMatrix b = random_complex(rng, dim);
        CHECK(max_abs_diff(matmul(a, b), matmul_reference(a, b)) == 0.0);
        CHECK(std::abs(trace_product(a, b) - trace_product_reference(a, b)) <
              1e-12 * dim * dim);
    }
    const ComplexMatrix a = random_complex(rng, 16);
    const ComplexMatrix b = random_complex(rng, 16);
    CHECK(max_abs_diff(kron(a, b), kron_reference(a, b)) == 0.0);
    std::vector<int> perm = {3, 0, 2, 1, 7, 5, 6, 4};
    const ComplexMatrix m = random_complex(rng, 256);
    CHECK(max_abs_diff(permute_qubits(m, perm), permute_qubits_reference(m, perm)) == 0.0);
}

TEST_CASE("eig_sym3 diagonal cases") {
    const auto id = eig_sym3(RealSym3::from(mat3_identity()));
    CHECK(id[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id[2] == doctest::Approx(1.0).epsilon(1e-14));

    const Mat3 d{0.25, 0, 0, 0, 0.81, 0, 0, 0, 0.49};
    const auto v = eig_sym3(RealSym3::from(d));
    CHECK(v[0] == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.49).epsilon(1e-14));
    CHECK(v[2] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("eig_sym3 matches the characteristic-polynomial roots") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat3 m = random_symmetric3(rng);
        const auto jacobi = eig_sym3(RealSym3::from(m));
        const auto roots = cubic_eigenvalues(m);
        for (int k = 0; k < 3; ++k)
            CHECK(jacobi[static_cast<std::size_t>(k)] ==
                  doctest::Approx(roots[static_cast<std::size_t>(k)]).epsilon(1e-9));
    }
}

TEST_CASE("eig_sym3 sum equals trace, product equals determinant") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat3 m = random_symmetric3(rng);
        const auto v = eig_sym3(RealSym3::from(m));
        CHECK(v[0] + v[1] + v[2] == doctest::Approx(m[0] + m[4] + m[8]).epsilon(1e-12));
        CHECK(v[0] * v[1] * v[2] == doctest::Approx(mat3_det(m)).epsilon(1e-10));
    }
}

TEST_CASE("eig_sym3 reconstruction residual") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat3 m = random_symmetric3(rng);
        const Eig3 eig = eig_sym3_vectors(RealSym3::from(m));
        Mat3 lambda{};
        lambda[0] = eig.values[0];
        lambda[4] = eig.values[1];
        lambda[8] = eig.values[2];
        const Mat3 rebuilt = mat3_mul(eig.vectors, mat3_mul(lambda, mat3_transpose(eig.vectors)));
        CHECK(mat3_max_abs_diff(rebuilt, m) < 1e-12);
    }
}

TEST_CASE("eig_sym3 rejects asymmetric input") {
    Mat3 m = mat3_identity();
    m[1] = 0.5;
    CHECK_THROWS_AS((void)RealSym3::from(m), ValidationError);
}

TEST_CASE("eig_sym3 clamps tiny negative eigenvalues") {
    const Mat3 d{-5e-11, 0, 0, 0, 1.0, 0, 0, 0, 0.5};
    const auto v = eig_sym3(RealSym3::from(d));
    CHECK(v[2] == 0.0);
}

TEST_CASE("permute_qubits identity") {
    std::mt19937_64 rng(29);
    const ComplexMatrix m = random_complex(rng, 8);
    const std::vector<int> perm = {0, 1, 2};
    CHECK(max_abs_diff(permute_qubits(m, perm), m) == 0.0);
}

TEST_CASE("permute_qubits swap reverses a Kronecker product") {
    std::mt19937_64 rng(31);
    const ComplexMatrix a = random_complex(rng, 2);
    const ComplexMatrix b = random_complex(rng, 2);
    const std::vector<int> swap = {1, 0};
    CHECK(max_abs_diff(permute_qubits(kron(a, b), swap), kron(b, a)) == 0.0);
}

TEST_CASE("permute_qubits three-qubit cyclic shift") {
    const ComplexMatrix in = kron(kron(paulis::x(), paulis::y()), paulis::z());
    const ComplexMatrix expect = kron(kron(paulis::z(), paulis::x()), paulis::y());
    // factor at position i moves to position i+1 mod 3
    const std::vector<int> perm = {1, 2, 0};
    const ComplexMatrix out = permute_qubits(in, perm);
    CHECK(max_abs_diff(out, expect) == 0.0);

    // direct 8x8 index-remap oracle
    ComplexMatrix remap(8);
    auto newidx = [](int x) {
        const int b0 = (x >> 2) & 1, b1 = (x >> 1) & 1, b2 = x & 1;
        return (b2 << 2) | (b0 << 1) | b1;
    };
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            remap.at(newidx(i), newidx(j)) = in.at(i, j);
    CHECK(max_abs_diff(out, remap) == 0.0);
}

TEST_CASE("permute then inverse permute is the identity") {
    std::mt19937_64 rng(37);
    const ComplexMatrix m = random_complex(rng, 16);
    const std::vector<int> perm = {2, 0, 3, 1};
    std::vector<int> inverse(4);
    for (int i = 0; i < 4; ++i)
        inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    CHECK(max_abs_diff(permute_qubits(permute_qubits(m, perm), inverse), m) == 0.0);
}

TEST_CASE("permute_qubits preserves trace, Hermiticity and spectrum") {
    std::mt19937_64 rng(41);
    const std::vector<int> perm = {2, 0, 1};
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix h = random_hermitian(rng, 8);
        const ComplexMatrix p = permute_qubits(h, perm);
        CHECK(std::abs(trace(p) - trace(h)) < 1e-12);
        CHECK(hermiticity_error(p) < 1e-12);
        const auto eh = hermitian_eigenvalues(h);
        const auto ep = hermitian_eigenvalues(p);
        for (std::size_t k = 0; k < eh.size(); ++k)
            CHECK(std::abs(ep[k] - eh[k]) < 1e-12);
    }
}

TEST_CASE("permute_qubits error cases") {
    const ComplexMatrix bad(6); // not a power of two
    const std::vector<int> perm1 = {0, 1};
    CHECK_THROWS_AS((void)permute_qubits(bad, perm1), DimensionError);

    const ComplexMatrix ok(4);
    const std::vector<int> dup = {0, 0};
    CHECK_THROWS_AS((void)permute_qubits(ok, dup), ValidationError);
    const std::vector<int> outside = {0, 5};
    CHECK_THROWS_AS((void)permute_qubits(ok, outside), ValidationError);
}

TEST_CASE("partial_trace contracts a Kronecker factor") {
    std::mt19937_64 rng(43);
    const ComplexMatrix a = random_hermitian(rng, 4);
    const ComplexMatrix b = random_hermitian(rng, 2);
    const ComplexMatrix joint = kron(a, b);
    const std::vector<int> last = {2};
    const ComplexMatrix reduced = partial_trace(joint, last);
    const ComplexMatrix expect = trace(b) * a;
    CHECK(max_abs_diff(reduced, expect) < 1e-12);

    const std::vector<int> first_two = {0, 1};
    const ComplexMatrix reduced_b = partial_trace(joint, first_two);
    CHECK(max_abs_diff(reduced_b, trace(a) * b) < 1e-12);
}

TEST_CASE("hermitian_eigenvalues on a known matrix") {
    // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
    ComplexMatrix m(2);
    m.at(0, 0) = 2.0;
    m.at(1, 1) = 2.0;
    m.at(0, 1) = cplx(0.0, 1.0);
    m.at(1, 0) = cplx(0.0, -1.0);
    const auto v = hermitian_eigenvalues(m);
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eigenvalues sum and square-sum invariants") {
    std::mt19937_64 rng(47);
    const ComplexMatrix h = random_hermitian(rng, 8);
    const auto v = hermitian_eigenvalues(h);
    double sum = 0.0, sq = 0.0;
    for (double x : v) {
        sum += x;
        sq += x * x;
    }
    CHECK(sum == doctest::Approx(trace(h).real()).epsilon(1e-11));
    const double fro = frobenius_norm(h);
    CHECK(sq == doctest::Approx(fro * fro).epsilon(1e-11));
}

TEST_CASE("finite check rejects NaN") {
    ComplexMatrix m(2);
    m.at(0, 0) = std::nan("");
    CHECK_THROWS_AS(check_finite(m), ValidationError);
}
