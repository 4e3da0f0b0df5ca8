#include "nlocal/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace nlocal {

namespace {
// Below this dimension the OpenMP fork/join costs more than the loop body.
constexpr int kOmpMinDim = 128;
} // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("matrix add: dimension mismatch");
    ComplexMatrix r(a.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i)
        r.a[i] = a.a[i] + b.a[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("matrix sub: dimension mismatch");
    ComplexMatrix r(a.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i)
        r.a[i] = a.a[i] - b.a[i];
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
    ComplexMatrix r(m.dim);
    for (std::size_t i = 0; i < r.a.size(); ++i)
        r.a[i] = s * m.a[i];
    return r;
}

void check_finite(const ComplexMatrix& m) {
    for (const cplx& z : m.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ValidationError("matrix contains a non-finite entry");
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
            r.at(j, i) = std::conj(m.at(i, j));
    return r;
}

cplx trace(const ComplexMatrix& m) {
    cplx t = 0.0;
    for (int i = 0; i < m.dim; ++i)
        t += m.at(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a)
        s += std::norm(z);
    return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("max_abs_diff: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i)
        d = std::max(d, std::abs(a.a[i] - b.a[i]));
    return d;
}

double hermiticity_error(const ComplexMatrix& m) {
    double d = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j)
            d = std::max(d, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
    return d;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return hermiticity_error(m) <= tol;
}

ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("matmul: dimension mismatch");
    const int n = a.dim;
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0))
                continue;
            for (int j = 0; j < n; ++j)
                r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("matmul: dimension mismatch");
    const int n = a.dim;
    ComplexMatrix r(n);
#pragma omp parallel for schedule(static) if (n >= kOmpMinDim)
    for (int i = 0; i < n; ++i) {
        cplx* row = &r.a[static_cast<std::size_t>(i) * n];
        for (int k = 0; k < n; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0))
                continue;
            const cplx* brow = &b.a[static_cast<std::size_t>(k) * n];
            for (int j = 0; j < n; ++j)
                row[j] += aik * brow[j];
        }
    }
    return r;
}

ComplexMatrix kron_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim, db = b.dim;
    ComplexMatrix r(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cplx aij = a.at(i, j);
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    r.at(i * db + k, j * db + l) = aij * b.at(k, l);
        }
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim, db = b.dim;
    const int n = da * db;
    ComplexMatrix r(n);
    // One output row per (i, k) pair; rows are independent.
#pragma omp parallel for schedule(static) if (n >= kOmpMinDim)
    for (int row = 0; row < n; ++row) {
        const int i = row / db;
        const int k = row % db;
        cplx* out = &r.a[static_cast<std::size_t>(row) * n];
        const cplx* brow = &b.a[static_cast<std::size_t>(k) * db];
        for (int j = 0; j < da; ++j) {
            const cplx aij = a.at(i, j);
            cplx* block = out + static_cast<std::size_t>(j) * db;
            for (int l = 0; l < db; ++l)
                block[l] = aij * brow[l];
        }
    }
    return r;
}

cplx trace_product_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("trace_product: dimension mismatch");
    const int n = a.dim;
    cplx t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            t += a.at(i, k) * b.at(k, i);
    return t;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim)
        throw DimensionError("trace_product: dimension mismatch");
    const int n = a.dim;
    // Per-row partial sums, combined serially so the accumulation order does
    // not depend on the thread count.
    std::vector<cplx> partial(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n >= kOmpMinDim)
    for (int i = 0; i < n; ++i) {
        cplx s = 0.0;
        const cplx* arow = &a.a[static_cast<std::size_t>(i) * n];
        for (int k = 0; k < n; ++k)
            s += arow[k] * b.at(k, i);
        partial[static_cast<std::size_t>(i)] = s;
    }
    cplx t = 0.0;
    for (const cplx& s : partial)
        t += s;
    return t;
}

namespace {

int qubit_count_for_dim(int dim, const char* who) {
    int q = 0;
    int d = dim;
    while (d > 1 && (d & 1) == 0) {
        d >>= 1;
        ++q;
    }
    if (d != 1 || dim < 2)
        throw DimensionError(std::string(who) + ": dimension " + std::to_string(dim) +
                             " is not a power of two");
    return q;
}

std::vector<int> permuted_indices(int dim, int q, std::span<const int> perm) {
    if (static_cast<int>(perm.size()) != q)
        throw ValidationError("permute_qubits: permutation size does not match qubit count");
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    for (int p : perm) {
        if (p < 0 || p >= q || seen[static_cast<std::size_t>(p)])
            throw ValidationError("permute_qubits: permutation is not a bijection on qubit positions");
        seen[static_cast<std::size_t>(p)] = true;
    }
    // Qubit k occupies bit (q-1-k) counted from the LSB.
    std::vector<int> map(static_cast<std::size_t>(dim));
    for (int x = 0; x < dim; ++x) {
        int y = 0;
        for (int k = 0; k < q; ++k) {
            const int bit = (x >> (q - 1 - k)) & 1;
            y |= bit << (q - 1 - perm[static_cast<std::size_t>(k)]);
        }
        map[static_cast<std::size_t>(x)] = y;
    }
    return map;
}

} // namespace

ComplexMatrix permute_qubits_reference(const ComplexMatrix& op, std::span<const int> perm) {
    const int q = qubit_count_for_dim(op.dim, "permute_qubits");
    const std::vector<int> map = permuted_indices(op.dim, q, perm);
    ComplexMatrix r(op.dim);
    for (int i = 0; i < op.dim; ++i)
        for (int j = 0; j < op.dim; ++j)
            r.at(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = op.at(i, j);
    return r;
}

ComplexMatrix permute_qubits(const ComplexMatrix& op, std::span<const int> perm) {
    const int q = qubit_count_for_dim(op.dim, "permute_qubits");
    const std::vector<int> map = permuted_indices(op.dim, q, perm);
    ComplexMatrix r(op.dim);
    const int n = op.dim;
#pragma omp parallel for schedule(static) if (n >= kOmpMinDim)
    for (int i = 0; i < n; ++i) {
        const int mi = map[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            r.at(mi, map[static_cast<std::size_t>(j)]) = op.at(i, j);
    }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> traced) {
    const int q = qubit_count_for_dim(op.dim, "partial_trace");
    std::vector<bool> is_traced(static_cast<std::size_t>(q), false);
    for (int t : traced) {
        if (t < 0 || t >= q)
            throw ValidationError("partial_trace: qubit index out of range");
        if (is_traced[static_cast<std::size_t>(t)])
            throw ValidationError("partial_trace: duplicate qubit index");
        is_traced[static_cast<std::size_t>(t)] = true;
    }
    std::vector<int> kept;
    for (int k = 0; k < q; ++k)
        if (!is_traced[static_cast<std::size_t>(k)])
            kept.push_back(k);
    const int qk = static_cast<int>(kept.size());
    const int qt = q - qk;
    const int dk = 1 << qk;
    const int dt = 1 << qt;

    auto expand = [&](int kept_bits, int traced_bits) {
        int x = 0;
        int ki = 0, ti = 0;
        for (int k = 0; k < q; ++k) {
            int bit;
            if (is_traced[static_cast<std::size_t>(k)])
                bit = (traced_bits >> (qt - 1 - ti++)) & 1;
            else
                bit = (kept_bits >> (qk - 1 - ki++)) & 1;
            x |= bit << (q - 1 - k);
        }
        return x;
    };

    ComplexMatrix r(dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cplx s = 0.0;
            for (int t = 0; t < dt; ++t)
                s += op.at(expand(i, t), expand(j, t));
            r.at(i, j) = s;
        }
    return r;
}

// ---------------------------------------------------------------------------
// Hermitian Jacobi (values only).

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol) {
    if (hermiticity_error(m) > herm_tol)
        throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian within tolerance");
    const int n = m.dim;
    ComplexMatrix a = m;
    // Symmetrize so roundoff in the input does not accumulate.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const cplx v = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
            a.at(i, j) = v;
            a.at(j, i) = std::conj(v);
        }
    const double fro = frobenius_norm(a);
    const double stop = 1e-13 * std::max(1.0, fro);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += 2.0 * std::norm(a.at(p, q));
        if (std::sqrt(off) < stop)
            break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double beta = std::abs(apq);
                if (beta <= stop * 1e-3)
                    continue;
                const cplx phase = apq / beta; // e^{i phi}
                const double alpha = a.at(p, p).real();
                const double gamma = a.at(q, q).real();
                const double theta = (gamma - alpha) / (2.0 * beta);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = [[c, s*phase], [-s*conj(phase), c]] on columns (p, q).
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q)
                        continue;
                    const cplx akp = a.at(k, p);
                    const cplx akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * std::conj(phase) * akq;
                    a.at(k, q) = s * phase * akp + c * akq;
                    a.at(p, k) = std::conj(a.at(k, p));
                    a.at(q, k) = std::conj(a.at(k, q));
                }
                a.at(p, p) = alpha * c * c - 2.0 * beta * s * c + gamma * s * s;
                a.at(q, q) = alpha * s * s + 2.0 * beta * s * c + gamma * c * c;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
            }
    }
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = a.at(i, i).real();
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

double min_hermitian_eigenvalue(const ComplexMatrix& m, double herm_tol) {
    return hermitian_eigenvalues(m, herm_tol).back();
}

// ---------------------------------------------------------------------------
// Real 3D helpers.

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 scaled(double s, const Vec3& v) { return {s * v[0], s * v[1], s * v[2]}; }
Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a[3 * i + k] * b[3 * k + j];
            r[3 * i + j] = s;
        }
    return r;
}

Mat3 mat3_transpose(const Mat3& m) {
    return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

Vec3 mat3_vec(const Mat3& m, const Vec3& v) {
    return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
            m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

double mat3_det(const Mat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double mat3_max_abs_diff(const Mat3& a, const Mat3& b) {
    double d = 0.0;
    for (int i = 0; i < 9; ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

RealSym3 RealSym3::from(const Mat3& m, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(m[3 * i + j] - m[3 * j + i]) > tol)
                throw ValidationError("RealSym3: matrix is not symmetric within tolerance");
    return RealSym3{m};
}

namespace {

// Cyclic Jacobi on a 3x3 symmetric matrix; stops when the off-diagonal
// Frobenius norm drops below 1e-13, capped at 100 sweeps.
void jacobi3(Mat3& a, Mat3& v) {
    v = mat3_identity();
    auto off_norm = [&]() {
        return std::sqrt(2.0 * (a[1] * a[1] + a[2] * a[2] + a[5] * a[5]));
    };
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm() < 1e-13)
            break;
        static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pq : pairs) {
            const int p = pq[0], q = pq[1];
            const double apq = a[3 * p + q];
            if (std::abs(apq) < 1e-300)
                continue;
            const double theta = (a[3 * q + q] - a[3 * p + p]) / (2.0 * apq);
            const double t = (theta >= 0 ? 1.0 : -1.0) /
                             (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);
            const double app = a[3 * p + p], aqq = a[3 * q + q];
            a[3 * p + p] = app - t * apq;
            a[3 * q + q] = aqq + t * apq;
            a[3 * p + q] = 0.0;
            a[3 * q + p] = 0.0;
            for (int r = 0; r < 3; ++r) {
                if (r != p && r != q) {
                    const double arp = a[3 * r + p], arq = a[3 * r + q];
                    a[3 * r + p] = arp - s * (arq + tau * arp);
                    a[3 * p + r] = a[3 * r + p];
                    a[3 * r + q] = arq + s * (arp - tau * arq);
                    a[3 * q + r] = a[3 * r + q];
                }
                const double vrp = v[3 * r + p], vrq = v[3 * r + q];
                v[3 * r + p] = vrp - s * (vrq + tau * vrp);
                v[3 * r + q] = vrq + s * (vrp - tau * vrq);
            }
        }
    }
}

double clamp_tiny_negative(double x) {
    return (x < 0.0 && x >= -1e-10) ? 0.0 : x;
}

} // namespace

Eig3 eig_sym3_vectors(const RealSym3& m) {
    Mat3 a = m.m;
    Mat3 v{};
    jacobi3(a, v);
    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> d = {a[0], a[4], a[8]};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[static_cast<std::size_t>(i)] > d[static_cast<std::size_t>(j)]; });
    Eig3 out{};
    for (int k = 0; k < 3; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] = clamp_tiny_negative(d[static_cast<std::size_t>(src)]);
        for (int r = 0; r < 3; ++r)
            out.vectors[3 * r + k] = v[3 * r + src];
        // Deterministic sign: largest-magnitude component positive.
        int big = 0;
        for (int r = 1; r < 3; ++r)
            if (std::abs(out.vectors[3 * r + k]) > std::abs(out.vectors[3 * big + k]))
                big = r;
        if (out.vectors[3 * big + k] < 0.0)
            for (int r = 0; r < 3; ++r)
                out.vectors[3 * r + k] = -out.vectors[3 * r + k];
    }
    return out;
}

std::array<double, 3> eig_sym3(const RealSym3& m) {
    return eig_sym3_vectors(m).values;
}

// ---------------------------------------------------------------------------
// Complex vectors.

cplx inner(const CVec& a, const CVec& b) {
    if (a.size() != b.size())
        throw DimensionError("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

double vec_norm(const CVec& v) {
    double s = 0.0;
    for (const cplx& z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

CVec kron_vec(const CVec& a, const CVec& b) {
    CVec r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i * b.size() + j] = a[i] * b[j];
    return r;
}

ComplexMatrix outer(const CVec& a, const CVec& b) {
    if (a.size() != b.size())
        throw DimensionError("outer: dimension mismatch");
    ComplexMatrix m(static_cast<int>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m.at(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
    return m;
}

CVec apply_matrix(const ComplexMatrix& m, const CVec& v) {
    if (static_cast<std::size_t>(m.dim) != v.size())
        throw DimensionError("apply: dimension mismatch");
    CVec r(v.size());
    for (int i = 0; i < m.dim; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < m.dim; ++j)
            s += m.at(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

namespace paulis {

namespace {
ComplexMatrix make_id2() { return ComplexMatrix::identity(2); }
ComplexMatrix make_x() {
    ComplexMatrix m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}
ComplexMatrix make_y() {
    ComplexMatrix m(2);
    m.at(0, 1) = cplx(0.0, -1.0);
    m.at(1, 0) = cplx(0.0, 1.0);
    return m;
}
ComplexMatrix make_z() {
    ComplexMatrix m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    return m;
}
} // namespace

const ComplexMatrix& id2() { static const ComplexMatrix m = make_id2(); return m; }
const ComplexMatrix& x() { static const ComplexMatrix m = make_x(); return m; }
const ComplexMatrix& y() { static const ComplexMatrix m = make_y(); return m; }
const ComplexMatrix& z() { static const ComplexMatrix m = make_z(); return m; }

const ComplexMatrix& sigma(int axis) {
    switch (axis) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw ValidationError("paulis::sigma: axis must be 0, 1 or 2");
    }
}

} // namespace paulis

ComplexMatrix axis_observable(const Vec3& axis) {
    ComplexMatrix m(2);
    m.at(0, 0) = axis[2];
    m.at(1, 1) = -axis[2];
    m.at(0, 1) = cplx(axis[0], -axis[1]);
    m.at(1, 0) = cplx(axis[0], axis[1]);
    return m;
}

} // namespace nlocal
