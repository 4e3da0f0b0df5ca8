#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "nlocal/errors.hpp"

namespace nlocal {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Dense row-major complex matrix. All operator and state storage in the
/// library lives here; dimensions stay small (at most 1024 at the oracle cap)
/// so there is no sparsity and no blocking.
struct ComplexMatrix {
    int dim = 0;
    std::vector<cplx> a; // row-major, dim*dim entries

    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : dim(n), a(static_cast<std::size_t>(n) * n) {}

    cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    const cplx& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int n) { return ComplexMatrix(n); }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& m);

/// Throws ValidationError if any entry is NaN or Inf.
void check_finite(const ComplexMatrix& m);

ComplexMatrix adjoint(const ComplexMatrix& m);
cplx trace(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_error(const ComplexMatrix& m); // max |m[i,j] - conj(m[j,i])|
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

// OpenMP-parallel kernels. The *_reference variants are the serial
// implementations; they are kept as test oracles and for the benchmark
// harness, not as fallbacks (the parallel versions run serially below a
// size threshold anyway).
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product: result[(i*db+k),(j*db+l)] = a[i,j] * b[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_reference(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[a * b] without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
cplx trace_product_reference(const ComplexMatrix& a, const ComplexMatrix& b);

/// Relabels the tensor factors of an operator on q qubits. Qubit 0 is the
/// most significant index bit (leftmost Kronecker factor); perm[i] is the
/// new position of the qubit currently at position i. Applying perm and then
/// its inverse is the identity.
ComplexMatrix permute_qubits(const ComplexMatrix& op, std::span<const int> perm);
ComplexMatrix permute_qubits_reference(const ComplexMatrix& op, std::span<const int> perm);

/// Partial trace over the listed qubit positions; surviving qubits keep
/// their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> traced);

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// descending. Values only; meant for validation (PSD checks) and for
/// spectrum-preservation tests, not as a general-purpose solver.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol = 1e-9);
double min_hermitian_eigenvalue(const ComplexMatrix& m, double herm_tol = 1e-9);

// ---------------------------------------------------------------------------
// Small real 3D algebra for Bloch vectors and correlation matrices.

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>; // row-major

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 cross(const Vec3& a, const Vec3& b);
Vec3 scaled(double s, const Vec3& v);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);

Mat3 mat3_identity();
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Mat3 mat3_transpose(const Mat3& m);
Vec3 mat3_vec(const Mat3& m, const Vec3& v);
double mat3_det(const Mat3& m);
double mat3_max_abs_diff(const Mat3& a, const Mat3& b);

/// 3x3 real symmetric matrix; construction checks symmetry to 1e-12.
struct RealSym3 {
    Mat3 m{};
    static RealSym3 from(const Mat3& m, double tol = 1e-12);
};

/// Eigenvalues descending. Negative values with magnitude <= 1e-10 are
/// clamped to zero (the intended inputs t^T t are PSD up to roundoff);
/// anything more negative is returned as-is.
std::array<double, 3> eig_sym3(const RealSym3& m);

struct Eig3 {
    std::array<double, 3> values; // descending
    Mat3 vectors;                 // columns are the matching eigenvectors
};
Eig3 eig_sym3_vectors(const RealSym3& m);

// ---------------------------------------------------------------------------
// Complex vectors (state vectors for the generalized Bell basis).

cplx inner(const CVec& a, const CVec& b); // <a|b>, conjugate-linear in a
double vec_norm(const CVec& v);
CVec kron_vec(const CVec& a, const CVec& b);
ComplexMatrix outer(const CVec& a, const CVec& b); // |a><b|
CVec apply_matrix(const ComplexMatrix& m, const CVec& v);

// Pauli matrices and friends.
namespace paulis {
const ComplexMatrix& id2();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
const ComplexMatrix& sigma(int axis); // 0 -> x, 1 -> y, 2 -> z
} // namespace paulis

/// axis . sigma for a real 3-vector (need not be unit length).
ComplexMatrix axis_observable(const Vec3& axis);

} // namespace nlocal
